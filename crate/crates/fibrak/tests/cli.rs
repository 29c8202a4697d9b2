use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fibrak::format::{load_fib, parse_fcat, print_fcat, write_fib};
use fibrak::CliError;
use fibrak_core::corpus::{corpus_entry, interval, terminal};
use fibrak_core::fibration::ClovenFibration;
use fibrak_core::kernel::FinCat;
use fibrak_core::Budget;

const SMALL: [&str; 8] = [
    "identity-terminal",
    "identity-interval",
    "sub-finset2",
    "cod-interval",
    "cod-finset2-monos",
    "family-finset2-monos",
    "sigma-identity-interval",
    "dial-of-identity",
];

fn scratch(name: &str) -> PathBuf {
    let d = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli").join(name);
    fs::create_dir_all(&d).unwrap();
    d
}

fn fibrak(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fibrak")).args(args).env_remove("FIBRAK_BUDGET").output().unwrap()
}

fn same_cat(a: &FinCat, b: &FinCat) -> bool {
    a.n_objs() == b.n_objs()
        && a.objs().all(|x| a.obj_name(x) == b.obj_name(x))
        && a.n_arrs() == b.n_arrs()
        && a.arrs().all(|f| a.arr_name(f) == b.arr_name(f) && a.dom(f) == b.dom(f) && a.cod(f) == b.cod(f))
        && a.composable_pairs().all(|(g, f)| a.comp(g, f) == b.comp(g, f))
}

fn same_fib(p: &ClovenFibration, q: &ClovenFibration) -> bool {
    same_cat(p.total(), q.total())
        && same_cat(p.base(), q.base())
        && p.base().arrs().all(|u| p.fibre_objs(p.base().cod(u)).iter().all(|&y| p.lift(u, y) == q.lift(u, y)))
}

#[test]
fn fcat_roundtrip() {
    for c in [terminal(), interval(), fibrak_core::corpus::finset_skeleton(2).unwrap()] {
        let text = print_fcat(&c).unwrap();
        let back = parse_fcat(&text, "t.fcat").unwrap();
        assert!(same_cat(&c, &back));
        assert_eq!(print_fcat(&back).unwrap(), text);
    }
}

#[test]
fn terminal_fcat_is_valid() {
    let c = parse_fcat("OBJECTS\n*\nARROWS\nCOMPOSE\n", "t.fcat").unwrap();
    assert_eq!((c.n_objs(), c.n_arrs()), (1, 1));
    assert_eq!(c.arr_name(c.id(c.objs().next().unwrap())), "id_*");
}

#[test]
fn undeclared_arrow_is_reported_at_its_line() {
    let text = "OBJECTS\na\nb\nARROWS\nu : a -> b\nCOMPOSE\n# comment\nu . id_a = v\n";
    match parse_fcat(text, "bad.fcat") {
        Err(CliError::Parse { line, msg, .. }) => {
            assert_eq!(line, 8);
            assert!(msg.contains("undeclared arrow `v`"), "{msg}");
        }
        other => panic!("expected a parse error, got {other:?}"),
    }
    let err = parse_fcat("OBJECTS\na\nARROWS\nu : a -> c\n", "bad.fcat").unwrap_err();
    assert_eq!(err.to_string(), "bad.fcat:4:10: undeclared object `c`");
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn fib_roundtrip_through_files() {
    for name in SMALL {
        let e = corpus_entry(name, Budget::default()).unwrap();
        let out = scratch("roundtrip").join(format!("{name}.fib"));
        write_fib(&out, &e.fibration, Some(&e.display), Budget::default()).unwrap();
        let back = load_fib(&out, Budget::default()).unwrap();
        assert!(same_fib(&e.fibration, &back.fib), "{name}");
        let members: Vec<_> = back.display.unwrap().members().collect();
        assert_eq!(members, e.display.members().collect::<Vec<_>>(), "{name}");
    }
}

#[test]
fn completions_reparse_and_check() {
    let dir = scratch("complete");
    for (name, kind) in [("identity-interval", "--sigma"), ("cod-interval", "--pi"), ("identity-interval", "--dialectica")] {
        let out = dir.join(format!("{name}{kind}.fib"));
        let o = fibrak(&["--corpus", name, "complete", kind, "-o", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let o = fibrak(&["check", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    }
    // Σ of the identity on the interval has the slice fibres.
    let back = load_fib(&dir.join("identity-interval--sigma.fib"), Budget::default()).unwrap();
    let sizes: Vec<usize> = back.fib.base().objs().map(|i| back.fib.fibre_objs(i).len()).collect();
    assert_eq!(sizes, vec![1, 2]);
}

#[test]
fn dot_export_counts() {
    let dir = scratch("dot");
    let count = |s: &str, pat: &str| s.lines().filter(|l| l.contains(pat)).count();
    for (c, nodes, edges) in [(terminal(), 1, 1), (interval(), 2, 3)] {
        let path = dir.join(format!("c{nodes}.fcat"));
        fs::write(&path, print_fcat(&c).unwrap()).unwrap();
        let o = fibrak(&["export", "--dot", path.to_str().unwrap()]);
        assert!(o.status.success());
        let dot = String::from_utf8(o.stdout).unwrap();
        assert!(dot.starts_with("digraph category {"));
        assert_eq!(count(&dot, "[label=") - count(&dot, "->"), nodes);
        assert_eq!(count(&dot, "->"), edges);
    }
    let o = fibrak(&["--corpus", "sigma-identity-interval", "export", "--dot"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let dot = String::from_utf8(o.stdout).unwrap();
    // Three Σ objects over a base of two; every identity is a vertical cartesian loop.
    assert_eq!(dot.lines().filter(|l| l.trim_start().starts_with('e') && !l.contains("->")).count(), 3);
    assert_eq!(dot.lines().filter(|l| l.trim_start().starts_with('b') && !l.contains("->")).count(), 2);
    assert!(dot.contains("style=\"dashed,bold\""));
    assert!(dot.contains("arrowhead=normalnormal"));
}

#[test]
fn exit_codes() {
    let o = fibrak(&["--corpus", "identity-terminal", "check"]);
    assert_eq!(o.status.code(), Some(0));
    let o = fibrak(&["--corpus", "no-such-entry", "check"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown corpus entry"));
    let o = fibrak(&["check", "/nonexistent/x.fib"]);
    assert_eq!(o.status.code(), Some(2));
    let o = fibrak(&["--corpus", "dial-of-identity", "prenex", "--alpha", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_fibrak"))
        .args(["--corpus", "dial-of-identity", "classify"])
        .env("FIBRAK_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn records_format() {
    let o = fibrak(&["--corpus", "dial-of-identity", "--format", "records", "roundtrip"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    for line in text.lines() {
        assert_eq!(line.split('\t').count(), 3, "{line}");
    }
    assert!(text.lines().any(|l| l.starts_with("is_goedel\ttrue")));
    let o = fibrak(&["--corpus", "dial-of-identity", "skolem", "--g", "u", "--f", "id_a", "--beta", "(id_a,(id_a,a))"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = fibrak(&["list"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().filter(|l| l.contains("entry")).count(), 18);
}
