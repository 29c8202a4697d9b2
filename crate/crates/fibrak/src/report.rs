//! Report documents and their text and record renderings.

use std::fmt::Write as _;

use fibrak_core::fibration::ClovenFibration;
use fibrak_core::kernel::{Arr, FinCat, Obj};
use fibrak_core::logic::Counterexample;
use fibrak_core::structure::Direction;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub property: String,
    pub verdict: String,
    pub witness: String,
    /// A required record with verdict `false` makes the command fail.
    pub required: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub title: String,
    pub records: Vec<Record>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Records,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), records: Vec::new() }
    }

    pub fn flag(&mut self, property: &str, holds: bool, witness: impl Into<String>, required: bool) {
        let witness = witness.into();
        self.records.push(Record {
            property: property.to_owned(),
            verdict: holds.to_string(),
            witness: if witness.is_empty() { "-".into() } else { witness },
            required,
        });
    }

    pub fn value(&mut self, property: &str, value: impl ToString) {
        self.records.push(Record {
            property: property.to_owned(),
            verdict: value.to_string(),
            witness: "-".into(),
            required: false,
        });
    }

    pub fn failed(&self) -> bool {
        self.records.iter().any(|r| r.required && r.verdict == "false")
    }

    pub fn exit_code(&self) -> u8 {
        u8::from(self.failed())
    }

    pub fn render(&self, format: Format) -> String {
        let mut s = String::new();
        match format {
            Format::Records => {
                for r in &self.records {
                    writeln!(s, "{}\t{}\t{}", r.property, r.verdict, r.witness).unwrap();
                }
            }
            Format::Text => {
                writeln!(s, "{}", self.title).unwrap();
                let w = self.records.iter().map(|r| r.property.len()).max().unwrap_or(0);
                for r in &self.records {
                    write!(s, "  {:w$}  {}", r.property, r.verdict).unwrap();
                    if r.witness != "-" {
                        write!(s, "  [{}]", r.witness).unwrap();
                    }
                    s.push('\n');
                }
            }
        }
        s
    }
}

/// `name:dom->cod`.
pub fn arrow(c: &FinCat, a: Arr) -> String {
    format!("{}:{}->{}", c.arr_name(a), c.obj_name(c.dom(a)), c.obj_name(c.cod(a)))
}

fn quantifier(d: Direction) -> &'static str {
    match d {
        Direction::Left => "coproduct",
        Direction::Right => "product",
    }
}

pub fn counterexample(p: &ClovenFibration, cx: &Counterexample) -> String {
    let (e, b) = (p.total(), p.base());
    let ob = |x: Obj| e.obj_name(x).to_owned();
    match *cx {
        Counterexample::NotPullbackClosed { f, g } => {
            format!("no member pullback of f={} along g={}", arrow(b, f), arrow(b, g))
        }
        Counterexample::NotCompositionClosed { g, f } => {
            format!("composite of g={} and f={} is not a member", arrow(b, g), arrow(b, f))
        }
        Counterexample::NoDependentProduct { f, g } => {
            format!("no dependent product of f={} along g={}", arrow(b, f), arrow(b, g))
        }
        Counterexample::MissingAdjoint { direction, u, alpha } => {
            format!("no {} of alpha={} along u={}", quantifier(direction), ob(alpha), arrow(b, u))
        }
        Counterexample::BeckChevalley { direction, v, f } => {
            format!("{} Beck-Chevalley fails for v={} f={}", quantifier(direction), arrow(b, v), arrow(b, f))
        }
        Counterexample::NoCover { direction, alpha } => {
            format!("alpha={} has no quantifier-free {} cover", ob(alpha), quantifier(direction))
        }
        Counterexample::Closure { alpha, f } => {
            format!("product of qf alpha={} along f={} is not qf", ob(alpha), arrow(b, f))
        }
        Counterexample::NotSplitting { direction, failure } => {
            let s = failure.split;
            format!(
                "alpha={} reindex={} u={} beta={} h={} factorizations={} ({})",
                ob(failure.alpha),
                arrow(b, failure.reindex),
                arrow(b, s.u),
                ob(s.beta),
                e.arr_name(s.h),
                s.count,
                quantifier(direction)
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn only_required_failures_fail() {
        let mut r = Report::new("t");
        r.flag("optional", false, "", false);
        r.value("count", 3);
        assert_eq!(r.exit_code(), 0);
        r.flag("required", false, "x", true);
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn renderings() {
        let mut r = Report::new("title");
        r.flag("ok", true, "", true);
        r.flag("longer_name", false, "w", true);
        assert_eq!(r.render(Format::Records), "ok\ttrue\t-\nlonger_name\tfalse\tw\n");
        assert_eq!(r.render(Format::Text), "title\n  ok           true\n  longer_name  false  [w]\n");
    }

    #[test]
    fn arrow_names_carry_ends() {
        let c = fibrak_core::corpus::interval();
        assert_eq!(arrow(&c, c.find_arr("u").unwrap()), "u:a->b");
    }
}
