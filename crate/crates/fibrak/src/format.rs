//! The `.fcat` and `.fib` text formats.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use fibrak_core::display::DisplayClass;
use fibrak_core::fibration::{ClovenFibration, Prefibration};
use fibrak_core::kernel::{check_category, Arr, CatBuilder, FinCat, FinFunctor, Obj};
use fibrak_core::Budget;

use crate::error::{CliError, Result};

const CAT_SECTIONS: [&str; 3] = ["OBJECTS", "ARROWS", "COMPOSE"];
const FIB_SECTIONS: [&str; 5] = ["BASE", "TOTAL", "PROJ", "CLEAVAGE", "DISPLAY"];

/// Whitespace-separated tokens with 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(s, t)| (line[..s].chars().count() + 1, t)).collect()
}

/// A single all-caps word of three or more letters is a section header.
fn looks_like_header(tok: &[(usize, &str)]) -> bool {
    tok.len() == 1 && tok[0].1.len() >= 3 && tok[0].1.bytes().all(|b| b.is_ascii_uppercase())
}

/// Lines of content: `(line number, tokens)` without blanks and `#` comments.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<(usize, &str)>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let t = l.trim_start();
        (!t.is_empty() && !t.starts_with('#')).then(|| (i + 1, tokens(l)))
    })
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

pub fn parse_fcat(text: &str, path: &str) -> Result<FinCat> {
    let err = |line, col, msg: String| CliError::parse(path, line, col, msg);
    let mut section = None;
    let mut objects: Vec<(usize, usize, String)> = Vec::new();
    let mut arrows: Vec<(usize, [(usize, String); 3])> = Vec::new();
    let mut compose: Vec<(usize, [(usize, String); 3])> = Vec::new();
    for (ln, tok) in content_lines(text) {
        if looks_like_header(&tok) {
            let name = tok[0].1;
            if !CAT_SECTIONS.contains(&name) {
                return Err(err(ln, tok[0].0, format!("unknown section `{name}`")));
            }
            section = Some(name);
            continue;
        }
        match section {
            None => return Err(err(ln, tok[0].0, "content before the first section".into())),
            Some("OBJECTS") => {
                if tok.len() != 1 {
                    return Err(err(ln, tok[1].0, "expected one object name per line".into()));
                }
                objects.push((ln, tok[0].0, tok[0].1.to_owned()));
            }
            Some("ARROWS") => {
                if tok.len() != 5 || tok[1].1 != ":" || tok[3].1 != "->" {
                    return Err(err(ln, tok[0].0, "expected `name : src -> tgt`".into()));
                }
                let own = |k: usize| (tok[k].0, tok[k].1.to_owned());
                arrows.push((ln, [own(0), own(2), own(4)]));
            }
            _ => {
                if tok.len() != 5 || tok[1].1 != "." || tok[3].1 != "=" {
                    return Err(err(ln, tok[0].0, "expected `g . f = h`".into()));
                }
                let own = |k: usize| (tok[k].0, tok[k].1.to_owned());
                compose.push((ln, [own(0), own(2), own(4)]));
            }
        }
    }
    let mut b = CatBuilder::new();
    let mut obj_of = BTreeMap::new();
    for (ln, col, name) in &objects {
        if obj_of.insert(name.clone(), b.object(name.clone())).is_some() {
            return Err(err(*ln, *col, format!("duplicate object `{name}`")));
        }
    }
    let mut arr_of: BTreeMap<String, Arr> = (0..b.n_objs())
        .map(|i| (format!("id_{}", objects[i].2), Arr(i as u32)))
        .collect();
    for (ln, [(col, name), (sc, s), (tc, t)]) in &arrows {
        let end = |c: usize, n: &String| obj_of.get(n).copied().ok_or_else(|| err(*ln, c, format!("undeclared object `{n}`")));
        let (s, t) = (end(*sc, s)?, end(*tc, t)?);
        if arr_of.contains_key(name) {
            return Err(err(*ln, *col, format!("duplicate arrow `{name}`")));
        }
        arr_of.insert(name.clone(), b.arrow(name.clone(), s, t));
    }
    let n = b.n_objs();
    let mut table: BTreeMap<(Arr, Arr), Arr> = BTreeMap::new();
    for (ln, [(gc, g), (fc, f), (hc, h)]) in &compose {
        let look = |c: usize, name: &String| {
            arr_of.get(name).copied().ok_or_else(|| err(*ln, c, format!("undeclared arrow `{name}`")))
        };
        let (ga, fa, ha) = (look(*gc, g)?, look(*fc, f)?, look(*hc, h)?);
        if ga.ix() < n || fa.ix() < n {
            return Err(err(*ln, *gc, "composites with identities are implicit".into()));
        }
        if b.cod(fa) != b.dom(ga) || b.dom(ha) != b.dom(fa) || b.cod(ha) != b.cod(ga) {
            return Err(err(*ln, *gc, format!("`{g} . {f} = {h}` is not well-typed")));
        }
        if table.insert((ga, fa), ha).is_some() {
            return Err(err(*ln, *gc, format!("composite `{g} . {f}` given twice")));
        }
    }
    let eof = text.lines().count() + 1;
    let cat = b.build(|g, f| table.get(&(g, f)).copied()).map_err(|e| err(eof, 1, e.to_string()))?;
    let laws = check_category(&cat)?;
    if let Some(v) = laws.violations.first() {
        return Err(err(eof, 1, format!("category laws fail: {v:?}")));
    }
    Ok(cat)
}

pub fn load_fcat(path: &Path) -> Result<FinCat> {
    parse_fcat(&read(path)?, &path.display().to_string())
}

fn check_name(name: &str, what: &str) -> Result<()> {
    let bad = name.is_empty()
        || name.starts_with('#')
        || name.chars().any(char::is_whitespace)
        || matches!(name, ":" | "->" | "." | "=" | "|->")
        || looks_like_header(&[(1, name)]);
    if bad {
        return Err(CliError::Usage(format!("{what} name `{name}` cannot be written to a file")));
    }
    Ok(())
}

/// The `.fcat` text of `c`. Every composite of non-identities is listed.
pub fn print_fcat(c: &FinCat) -> Result<String> {
    let mut s = String::from("OBJECTS\n");
    for x in c.objs() {
        check_name(c.obj_name(x), "object")?;
        writeln!(s, "{}", c.obj_name(x)).unwrap();
    }
    s.push_str("ARROWS\n");
    let non_id = || c.arrs().filter(|&a| !c.is_identity(a));
    for a in non_id() {
        check_name(c.arr_name(a), "arrow")?;
        writeln!(s, "{} : {} -> {}", c.arr_name(a), c.obj_name(c.dom(a)), c.obj_name(c.cod(a))).unwrap();
    }
    s.push_str("COMPOSE\n");
    for g in non_id() {
        for &f in c.arrows_into(c.dom(g)) {
            if !c.is_identity(f) {
                writeln!(s, "{} . {} = {}", c.arr_name(g), c.arr_name(f), c.arr_name(c.comp(g, f))).unwrap();
            }
        }
    }
    Ok(s)
}

/// Number of COMPOSE lines `print_fcat` emits for `c`.
pub fn compose_lines(c: &FinCat) -> u64 {
    c.arrs()
        .filter(|&g| !c.is_identity(g))
        .map(|g| c.arrows_into(c.dom(g)).iter().filter(|&&f| !c.is_identity(f)).count() as u64)
        .sum()
}

/// A fibration read from a `.fib` file, with its optional display class.
#[derive(Clone, Debug)]
pub struct FibFile {
    pub fib: ClovenFibration,
    pub display: Option<DisplayClass>,
}

pub fn parse_fib(text: &str, path: &str, dir: &Path, budget: Budget) -> Result<FibFile> {
    let err = |line, col, msg: String| CliError::parse(path, line, col, msg);
    let mut section = None;
    let mut base: Option<(usize, PathBuf)> = None;
    let mut total: Option<(usize, PathBuf)> = None;
    let mut proj: Vec<(usize, String, String)> = Vec::new();
    let mut cleave: Vec<(usize, String, String, String)> = Vec::new();
    let mut display: Option<Vec<(usize, String)>> = None;
    for (ln, tok) in content_lines(text) {
        let head = tok[0].1;
        if head == "BASE" || head == "TOTAL" {
            if tok.len() != 2 {
                return Err(err(ln, tok[0].0, format!("expected `{head} <path>`")));
            }
            let slot = if head == "BASE" { &mut base } else { &mut total };
            *slot = Some((ln, dir.join(tok[1].1)));
            section = None;
            continue;
        }
        if looks_like_header(&tok) {
            if !FIB_SECTIONS.contains(&head) {
                return Err(err(ln, tok[0].0, format!("unknown section `{head}`")));
            }
            if head == "DISPLAY" {
                display.get_or_insert_with(Vec::new);
            }
            section = Some(head);
            continue;
        }
        let line = text.lines().nth(ln - 1).unwrap_or("");
        match section {
            Some("PROJ") => {
                if tok.len() != 3 || tok[1].1 != "|->" {
                    return Err(err(ln, tok[0].0, "expected `X |-> I`".into()));
                }
                proj.push((ln, tok[0].1.to_owned(), tok[2].1.to_owned()));
            }
            Some("CLEAVAGE") => {
                let parsed = line.split_once(" |-> ").and_then(|(l, f)| {
                    let l = l.trim().strip_prefix('(')?.strip_suffix(')')?;
                    let (u, y) = l.split_once(", ")?;
                    Some((u.trim().to_owned(), y.trim().to_owned(), f.trim().to_owned()))
                });
                let (u, y, f) = parsed.ok_or_else(|| err(ln, tok[0].0, "expected `(u, Y) |-> f`".into()))?;
                cleave.push((ln, u, y, f));
            }
            Some("DISPLAY") => {
                if tok.len() != 1 {
                    return Err(err(ln, tok[1].0, "expected one arrow name per line".into()));
                }
                display.as_mut().expect("section opened").push((ln, head.to_owned()));
            }
            _ => return Err(err(ln, tok[0].0, "content outside a section".into())),
        }
    }
    let eof = text.lines().count() + 1;
    let (_, base_path) = base.ok_or_else(|| err(eof, 1, "missing BASE".into()))?;
    let (_, total_path) = total.ok_or_else(|| err(eof, 1, "missing TOTAL".into()))?;
    let b = load_fcat(&base_path)?;
    let e = load_fcat(&total_path)?;
    let mut obj: Vec<Option<Obj>> = vec![None; e.n_objs()];
    let mut arr: Vec<Option<Arr>> = vec![None; e.n_arrs()];
    for (ln, x, i) in &proj {
        match (e.find_obj(x), e.find_arr(x)) {
            (Some(_), Some(_)) => return Err(err(*ln, 1, format!("`{x}` names both an object and an arrow"))),
            (Some(xo), None) => {
                let io = b.find_obj(i).ok_or_else(|| err(*ln, 1, format!("undeclared base object `{i}`")))?;
                obj[xo.ix()] = Some(io);
            }
            (None, Some(xa)) => {
                let ia = b.find_arr(i).ok_or_else(|| err(*ln, 1, format!("undeclared base arrow `{i}`")))?;
                arr[xa.ix()] = Some(ia);
            }
            (None, None) => return Err(err(*ln, 1, format!("undeclared total object or arrow `{x}`"))),
        }
    }
    let obj: Vec<Obj> = obj
        .into_iter()
        .enumerate()
        .map(|(k, o)| o.ok_or_else(|| err(eof, 1, format!("no projection for object `{}`", e.obj_name(Obj(k as u32))))))
        .collect::<Result<_>>()?;
    let arr: Vec<Arr> = arr
        .into_iter()
        .enumerate()
        .map(|(k, a)| match a {
            Some(a) => Ok(a),
            None if k < e.n_objs() => Ok(b.id(obj[k])),
            None => Err(err(eof, 1, format!("no projection for arrow `{}`", e.arr_name(Arr(k as u32))))),
        })
        .collect::<Result<_>>()?;
    let mut pre = Prefibration::new(e, b, FinFunctor { obj, arr });
    for (ln, u, y, f) in &cleave {
        let ua = pre.base.find_arr(u).ok_or_else(|| err(*ln, 1, format!("undeclared base arrow `{u}`")))?;
        let yo = pre.total.find_obj(y).ok_or_else(|| err(*ln, 1, format!("undeclared total object `{y}`")))?;
        let fa = pre.total.find_arr(f).ok_or_else(|| err(*ln, 1, format!("undeclared total arrow `{f}`")))?;
        pre.cleavage.insert((ua, yo), fa);
    }
    let base_cat = pre.base.clone();
    let fib = pre.into_cloven()?;
    let display = match display {
        None => None,
        Some(lines) => {
            let mut members = Vec::new();
            for (ln, name) in lines {
                members.push(
                    base_cat.find_arr(&name).ok_or_else(|| err(ln, 1, format!("undeclared base arrow `{name}`")))?,
                );
            }
            Some(DisplayClass::new(base_cat, members, budget)?)
        }
    };
    Ok(FibFile { fib, display })
}

pub fn load_fib(path: &Path, budget: Budget) -> Result<FibFile> {
    let dir = path.parent().unwrap_or(Path::new("."));
    parse_fib(&read(path)?, &path.display().to_string(), dir, budget)
}

/// The `.fib` text with the full cleavage, referring to the given category
/// files.
pub fn print_fib(p: &ClovenFibration, display: Option<&DisplayClass>, base: &str, total: &str) -> Result<String> {
    let (e, b) = (p.total(), p.base());
    let mut s = format!("BASE {base}\nTOTAL {total}\nPROJ\n");
    for x in e.objs() {
        writeln!(s, "{} |-> {}", e.obj_name(x), b.obj_name(p.p_obj(x))).unwrap();
    }
    for a in e.arrs().filter(|&a| !e.is_identity(a)) {
        writeln!(s, "{} |-> {}", e.arr_name(a), b.arr_name(p.p_arr(a))).unwrap();
    }
    s.push_str("CLEAVAGE\n");
    for y in e.objs() {
        for &u in b.arrows_into(p.p_obj(y)) {
            if !b.is_identity(u) {
                writeln!(s, "({}, {}) |-> {}", b.arr_name(u), e.obj_name(y), e.arr_name(p.lift(u, y))).unwrap();
            }
        }
    }
    if let Some(d) = display {
        s.push_str("DISPLAY\n");
        for m in d.members() {
            writeln!(s, "{}", b.arr_name(m)).unwrap();
        }
    }
    Ok(s)
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

/// Writes `out` together with `<stem>.base.fcat` and `<stem>.total.fcat`
/// beside it.
pub fn write_fib(out: &Path, p: &ClovenFibration, display: Option<&DisplayClass>, budget: Budget) -> Result<()> {
    // Every composable pair becomes a COMPOSE line, so the budget caps file size.
    budget.meter().spend(compose_lines(p.total()))?;
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    let dir = out.parent().unwrap_or(Path::new("."));
    let (bn, tn) = (format!("{stem}.base.fcat"), format!("{stem}.total.fcat"));
    let fib_text = print_fib(p, display, &bn, &tn)?;
    write(&dir.join(&bn), &print_fcat(p.base())?)?;
    write(&dir.join(&tn), &print_fcat(p.total())?)?;
    write(out, &fib_text)
}
