use alloc::format;
use alloc::vec::Vec;

use super::gen::{
    codomain_fibration, family_fibration, finset_skeleton, identity_fibration, interval, subobject_fibration,
    terminal, z2_group,
};
use crate::budget::Budget;
use crate::completion::{dialectica, pi_completion, sigma_completion};
use crate::display::DisplayClass;
use crate::error::{Error, Result};
use crate::fibration::ClovenFibration;
use crate::kernel::{is_mono, Arr, FinCat};

/// Classification flags recorded for each corpus entry.
pub const PROPERTIES: [&str; 4] = ["is_skolem", "is_goedel", "is_hilbert_epsilon", "is_hilbert_tau"];

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub fibration: ClovenFibration,
    pub display: DisplayClass,
    /// Expected verdicts, in [`PROPERTIES`] order.
    pub expected: Vec<(&'static str, bool)>,
}

impl CorpusEntry {
    pub fn expected(&self, property: &str) -> Option<bool> {
        self.expected.iter().find(|(p, _)| *p == property).map(|&(_, v)| v)
    }
}

/// `(name, [skolem, goedel, hilbert ε, hilbert τ])`.
const TABLE: &[(&str, [bool; 4])] = &[
    ("identity-terminal", [true, true, true, true]),
    ("identity-interval", [false, false, false, false]),
    ("identity-interval-ids", [true, true, true, true]),
    ("finset-identity-allmaps", [false, false, false, false]),
    ("identity-z2-group", [true, true, true, true]),
    ("sub-finset2", [true, true, false, false]),
    ("sub-finset2-isos", [true, true, true, true]),
    ("cod-interval", [true, true, false, false]),
    ("cod-finset2-monos", [true, true, false, false]),
    ("family-finset2", [false, false, false, false]),
    ("family-finset2-monos", [true, false, false, false]),
    ("sigma-identity-interval", [true, true, false, false]),
    ("sigma-identity-finset2-monos", [true, true, false, false]),
    ("sigma-family1-finset2", [true, false, false, false]),
    ("pi-identity-interval", [true, true, false, false]),
    ("dial-of-identity", [true, true, false, false]),
    ("dial-identity-finset2-monos", [true, true, false, false]),
    ("dial-family1-finset2", [true, true, false, false]),
];

pub fn corpus_names() -> impl Iterator<Item = &'static str> {
    TABLE.iter().map(|(n, _)| *n)
}

fn monos(c: &FinCat, budget: Budget) -> Result<DisplayClass> {
    let ms: Vec<Arr> = c.arrs().filter(|&a| is_mono(c, a)).collect();
    DisplayClass::new(c.clone(), ms, budget)
}

fn build(name: &str, budget: Budget) -> Result<(ClovenFibration, DisplayClass)> {
    let all = |c: &FinCat| DisplayClass::all_arrows(c.clone(), budget);
    Ok(match name {
        "identity-terminal" => (identity_fibration(&terminal()), all(&terminal())?),
        "identity-interval" => (identity_fibration(&interval()), all(&interval())?),
        "identity-interval-ids" => {
            (identity_fibration(&interval()), DisplayClass::identities(interval(), budget)?)
        }
        "finset-identity-allmaps" => {
            let f2 = finset_skeleton(2)?;
            (identity_fibration(&f2), all(&f2)?)
        }
        "identity-z2-group" => (identity_fibration(&z2_group()), all(&z2_group())?),
        "sub-finset2" => {
            let f2 = finset_skeleton(2)?;
            (subobject_fibration(&f2, budget)?, monos(&f2, budget)?)
        }
        "sub-finset2-isos" => {
            let f2 = finset_skeleton(2)?;
            (subobject_fibration(&f2, budget)?, DisplayClass::isomorphisms(f2, budget)?)
        }
        "cod-interval" => {
            let c = all(&interval())?;
            (codomain_fibration(&c)?, c)
        }
        "cod-finset2-monos" => {
            let c = monos(&finset_skeleton(2)?, budget)?;
            (codomain_fibration(&c)?, c)
        }
        "family-finset2" => {
            let f2 = finset_skeleton(2)?;
            (family_fibration(2, &f2)?, all(&f2)?)
        }
        "family-finset2-monos" => {
            let f2 = finset_skeleton(2)?;
            (family_fibration(2, &f2)?, monos(&f2, budget)?)
        }
        "sigma-identity-interval" => {
            let c = all(&interval())?;
            (sigma_completion(&identity_fibration(&interval()), &c)?.fib, c)
        }
        "sigma-identity-finset2-monos" => {
            let f2 = finset_skeleton(2)?;
            let c = monos(&f2, budget)?;
            (sigma_completion(&identity_fibration(&f2), &c)?.fib, c)
        }
        "sigma-family1-finset2" => {
            let c = all(&finset_skeleton(1)?)?;
            (sigma_completion(&family_fibration(1, &finset_skeleton(2)?)?, &c)?.fib, c)
        }
        "pi-identity-interval" => {
            let c = all(&interval())?;
            (pi_completion(&identity_fibration(&interval()), &c)?.fib().clone(), c)
        }
        "dial-of-identity" => {
            let c = all(&interval())?;
            (dialectica(&identity_fibration(&interval()), &c)?.sigma.fib, c)
        }
        "dial-identity-finset2-monos" => {
            let f2 = finset_skeleton(2)?;
            let c = monos(&f2, budget)?;
            (dialectica(&identity_fibration(&f2), &c)?.sigma.fib, c)
        }
        "dial-family1-finset2" => {
            let c = all(&finset_skeleton(1)?)?;
            (dialectica(&family_fibration(1, &finset_skeleton(2)?)?, &c)?.sigma.fib, c)
        }
        _ => return Err(Error::PreconditionFailed(format!("unknown corpus entry `{name}`"))),
    })
}

/// The named corpus entry, generated deterministically.
pub fn corpus_entry(name: &str, budget: Budget) -> Result<CorpusEntry> {
    let &(name, flags) = TABLE
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::PreconditionFailed(format!("unknown corpus entry `{name}`")))?;
    let (fibration, display) = build(name, budget)?;
    let expected = PROPERTIES.iter().copied().zip(flags).collect();
    Ok(CorpusEntry { name, fibration, display, expected })
}
