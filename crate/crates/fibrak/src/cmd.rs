//! The command surface.

use std::path::{Path, PathBuf};
use std::thread;

use clap::{ArgGroup, Parser, Subcommand};
use fibrak_core::completion::{dialectica, pi_completion, sigma_completion};
use fibrak_core::corpus::{corpus_entry, corpus_names, CorpusEntry};
use fibrak_core::display::{verify_display_class, DisplayClass};
use fibrak_core::fibration::ClovenFibration;
use fibrak_core::kernel::{check_category, Obj};
use fibrak_core::logic::{
    goedel_dialectica_roundtrip, hilbert_flag, is_goedel, is_skolem, prenex, skolem_bijection, skolemize, Logic,
};
use fibrak_core::structure::Direction;
use fibrak_core::Budget;

use crate::dot::{category_dot, fibration_dot};
use crate::error::{CliError, Result};
use crate::format::{load_fcat, load_fib, write_fib};
use crate::report::{arrow, counterexample, Format, Report};

#[derive(Debug, Parser)]
#[command(name = "fibrak", version, about = "Finite fibration workbench")]
pub struct Cli {
    /// Cap on candidate inspections per universal-property search.
    #[arg(long, global = true, env = "FIBRAK_BUDGET")]
    pub budget: Option<u64>,
    /// Use a named corpus entry instead of a file.
    #[arg(long, global = true)]
    pub corpus: Option<String>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a fibration and its display class.
    Check {
        /// A `.fib` file; omit with `--corpus`.
        fib: Option<PathBuf>,
    },
    /// Write the Σ, Π or Dialectica completion to a `.fib` file.
    #[command(group(ArgGroup::new("kind").required(true).args(["sigma", "pi", "dialectica"])))]
    Complete {
        /// Σ-completion.
        #[arg(long)]
        sigma: bool,
        /// Π-completion.
        #[arg(long)]
        pi: bool,
        /// Dialectica completion, Π after Σ.
        #[arg(long)]
        dialectica: bool,
        /// A `.fib` file; omit with `--corpus`.
        fib: Option<PathBuf>,
        /// Output `.fib`; the two `.fcat` files are written beside it.
        #[arg(short = 'o', long = "out")]
        out: PathBuf,
    },
    /// Skolem, Gödel and Hilbert flags.
    Classify {
        /// A `.fib` file; omit with `--corpus`.
        fib: Option<PathBuf>,
    },
    /// Verify the Skolemisation isomorphism for one triple.
    Skolem {
        /// A `.fib` file; omit with `--corpus`.
        fib: Option<PathBuf>,
        /// Display map `g: J ↠ S` in the base.
        #[arg(long)]
        g: String,
        /// Display map `f: X ↠ J` in the base.
        #[arg(long)]
        f: String,
        /// Object of the total category over `X`.
        #[arg(long)]
        beta: String,
    },
    /// Put one object in prenex form.
    Prenex {
        /// A `.fib` file; omit with `--corpus`.
        fib: Option<PathBuf>,
        /// Object of the total category.
        #[arg(long)]
        alpha: String,
    },
    /// Rebuild a Gödel fibration as a Dialectica fibration.
    Roundtrip {
        /// A `.fib` file; omit with `--corpus`.
        fib: Option<PathBuf>,
    },
    /// Graphviz export of a `.fcat` or `.fib` file.
    Export {
        /// Emit DOT, the only export format.
        #[arg(long, required = true)]
        dot: bool,
        /// A `.fcat` or `.fib` file; omit with `--corpus`.
        path: Option<PathBuf>,
    },
    /// List the corpus entries.
    List,
}

/// The subject of a command: a fibration, its display class and, for corpus
/// entries, the expected verdicts.
struct Subject {
    name: String,
    fib: ClovenFibration,
    display: Option<DisplayClass>,
    entry: Option<CorpusEntry>,
}

impl Subject {
    fn display(&self) -> Result<&DisplayClass> {
        self.display.as_ref().ok_or_else(|| CliError::Usage(format!("`{}` has no DISPLAY section", self.name)))
    }

    fn obj(&self, name: &str) -> Result<Obj> {
        self.fib.total().find_obj(name).ok_or_else(|| CliError::Usage(format!("no total object `{name}`")))
    }
}

fn subject(cli: &Cli, path: Option<&Path>, budget: Budget) -> Result<Subject> {
    match (&cli.corpus, path) {
        (Some(_), Some(_)) => Err(CliError::Usage("give either a file or --corpus, not both".into())),
        (None, None) => Err(CliError::Usage("a file or --corpus is required".into())),
        (Some(name), None) => {
            if !corpus_names().any(|n| n == name) {
                return Err(CliError::Usage(format!("unknown corpus entry `{name}`")));
            }
            let e = corpus_entry(name, budget)?;
            Ok(Subject { name: name.clone(), fib: e.fibration.clone(), display: Some(e.display.clone()), entry: Some(e) })
        }
        (None, Some(p)) => {
            let f = load_fib(p, budget)?;
            Ok(Subject { name: p.display().to_string(), fib: f.fib, display: f.display, entry: None })
        }
    }
}

/// Runs a command; the report is returned even when a property fails.
pub fn run(cli: &Cli) -> Result<(String, u8)> {
    let budget = cli.budget.map(Budget::new).unwrap_or_default();
    let report = match &cli.command {
        Command::List => {
            let mut r = Report::new("corpus");
            for n in corpus_names() {
                r.value("entry", n);
            }
            r
        }
        Command::Export { path, .. } => {
            let text = match (path, &cli.corpus) {
                (Some(p), None) if p.extension().is_some_and(|x| x == "fcat") => category_dot(&load_fcat(p)?),
                _ => {
                    let s = subject(cli, path.as_deref(), budget)?;
                    fibration_dot(&s.fib, s.display.as_ref())
                }
            };
            return Ok((text, 0));
        }
        Command::Check { fib } => check(&subject(cli, fib.as_deref(), budget)?)?,
        Command::Complete { sigma, pi, fib, out, .. } => {
            let s = subject(cli, fib.as_deref(), budget)?;
            let cls = s.display()?;
            let (kind, p) = if *sigma {
                ("sigma", sigma_completion(&s.fib, cls)?.fib)
            } else if *pi {
                ("pi", pi_completion(&s.fib, cls)?.fib().clone())
            } else {
                ("dialectica", dialectica(&s.fib, cls)?.sigma.fib)
            };
            write_fib(out, &p, Some(cls), budget)?;
            let mut r = Report::new(format!("complete --{kind} {}", s.name));
            r.value("objects", p.total().n_objs());
            r.value("arrows", p.total().n_arrs());
            r.flag("written", true, out.display().to_string(), true);
            r
        }
        Command::Classify { fib } => classify(&subject(cli, fib.as_deref(), budget)?, budget)?,
        Command::Skolem { fib, g, f, beta } => {
            let s = subject(cli, fib.as_deref(), budget)?;
            skolem(&s, budget, g, f, beta)?
        }
        Command::Prenex { fib, alpha } => {
            let s = subject(cli, fib.as_deref(), budget)?;
            let lg = Logic::new(&s.fib, s.display()?, budget);
            let alpha = s.obj(alpha)?;
            let (e, b) = (s.fib.total(), s.fib.base());
            let mut r = Report::new(format!("prenex {}", s.name));
            let goedel = is_goedel(&lg)?;
            r.flag("is_goedel", goedel.holds, "", true);
            if goedel.holds {
                let pf = prenex(&lg, alpha)?;
                let w = format!(
                    "f={} g={} beta={} target={} iso={}",
                    arrow(b, pf.f),
                    arrow(b, pf.g),
                    e.obj_name(pf.beta),
                    e.obj_name(pf.target),
                    e.arr_name(pf.iso)
                );
                r.flag("prenex", true, w, true);
            }
            r
        }
        Command::Roundtrip { fib } => {
            let s = subject(cli, fib.as_deref(), budget)?;
            let lg = Logic::new(&s.fib, s.display()?, budget);
            let mut r = Report::new(format!("roundtrip {}", s.name));
            let goedel = is_goedel(&lg)?;
            r.flag("is_goedel", goedel.holds, "", true);
            if goedel.holds {
                let rt = goedel_dialectica_roundtrip(&lg)?;
                r.value("qf_objects", rt.qf_objects);
                r.value("core_objects", rt.core_objects);
                r.value("dial_objects", rt.dial_objects);
                r.flag("fibred_functor", rt.functor_ok, "", true);
                let w = rt.equivalence.failures.first().map(|f| format!("{f:?}")).unwrap_or_default();
                r.flag("fibred_equivalence", rt.equivalence.holds(), w, true);
                r.flag("dial_is_goedel", rt.dial_is_goedel, "", true);
            }
            r
        }
    };
    Ok((report.render(cli.format), report.exit_code()))
}

fn check(s: &Subject) -> Result<Report> {
    let (e, b) = (s.fib.total(), s.fib.base());
    let mut r = Report::new(format!("check {}", s.name));
    r.flag("total_category", check_category(e)?.is_empty(), format!("objects={} arrows={}", e.n_objs(), e.n_arrs()), true);
    r.flag("base_category", check_category(b)?.is_empty(), format!("objects={} arrows={}", b.n_objs(), b.n_arrs()), true);
    r.flag("fibration", true, "", true);
    if let Some(d) = &s.display {
        let c = verify_display_class(d);
        let w = c.pullback_counterexample.map(|(f, g)| format!("f={} g={}", arrow(b, f), arrow(b, g)));
        r.flag("display_pullback_closed", c.pullback_closed, w.unwrap_or_default(), true);
        let w = c.composition_counterexample.map(|(g, f)| format!("g={} f={}", arrow(b, g), arrow(b, f)));
        r.flag("display_composition_closed", c.composition_closed, w.unwrap_or_default(), true);
    }
    Ok(r)
}

fn classify(s: &Subject, budget: Budget) -> Result<Report> {
    let (p, cls) = (&s.fib, s.display()?);
    // Independent flags run on their own workers, each with a private cache.
    let (goedel, eps, tau) = thread::scope(|sc| {
        let g = sc.spawn(|| is_goedel(&Logic::new(p, cls, budget)));
        let e = sc.spawn(|| hilbert_flag(&Logic::new(p, cls, budget), Direction::Left));
        let t = sc.spawn(|| hilbert_flag(&Logic::new(p, cls, budget), Direction::Right));
        (g.join().expect("worker"), e.join().expect("worker"), t.join().expect("worker"))
    });
    let (goedel, eps, tau) = (goedel?, eps?, tau?);
    let cx = |c: &Option<_>| c.as_ref().map(|c| counterexample(p, c)).unwrap_or_default();
    let flags = [
        ("is_skolem", goedel.skolem.holds, cx(&goedel.skolem.counterexample)),
        ("is_goedel", goedel.holds, cx(&goedel.counterexample)),
        ("is_hilbert_epsilon", eps.holds, cx(&eps.counterexample)),
        ("is_hilbert_tau", tau.holds, cx(&tau.counterexample)),
    ];
    let mut r = Report::new(format!("classify {}", s.name));
    let mut mismatches = Vec::new();
    for (name, holds, w) in flags {
        r.flag(name, holds, w, false);
        if let Some(want) = s.entry.as_ref().and_then(|e| e.expected(name)) {
            if want != holds {
                mismatches.push(name);
            }
        }
    }
    if s.entry.is_some() {
        r.flag("matches_expected", mismatches.is_empty(), mismatches.join(","), true);
    }
    Ok(r)
}

fn skolem(s: &Subject, budget: Budget, g: &str, f: &str, beta: &str) -> Result<Report> {
    let (p, cls) = (&s.fib, s.display()?);
    let b = p.base();
    let arr = |n: &str| b.find_arr(n).ok_or_else(|| CliError::Usage(format!("no base arrow `{n}`")));
    let (g, f, beta) = (arr(g)?, arr(f)?, s.obj(beta)?);
    let lg = Logic::new(p, cls, budget);
    let mut r = Report::new(format!("skolem {}", s.name));
    let sk = is_skolem(&lg)?;
    r.flag("is_skolem", sk.holds, sk.counterexample.map(|c| counterexample(p, &c)).unwrap_or_default(), false);
    let iso = skolemize(&lg, g, f, beta)?;
    let e = p.total();
    r.flag(
        "skolem_iso",
        true,
        format!("lhs={} rhs={} iso={}", e.obj_name(iso.lhs), e.obj_name(iso.rhs), e.arr_name(iso.iso)),
        true,
    );
    r.flag("hom_counts_agree", iso.hom_counts_agree, "", true);
    let mut checked = 0;
    let mut bad = None;
    for &sigma in p.fibre_objs(b.cod(g)) {
        if !lg.is_qfree(sigma, Direction::Left)? {
            continue;
        }
        let h = skolem_bijection(&lg, sigma, beta, &iso.diagram)?;
        checked += h.phi.len();
        if !h.inverse && bad.is_none() {
            bad = Some(e.obj_name(sigma).to_owned());
        }
    }
    let w = bad.map(|x| format!("sigma={x}")).unwrap_or_else(|| format!("elements={checked}"));
    r.flag("phi_psi_inverse", w.starts_with("elements="), w, true);
    Ok(r)
}
