use alloc::vec::Vec;

use super::gen::{codomain_fibration, finset_images};
use crate::completion::{dialectica, Dialectica};
use crate::display::DisplayClass;
use crate::error::{Error, Result};
use crate::kernel::{terminal_object, Arr, FinCat, Obj};

/// A polynomial `X ↦ Σ_{a ∈ A} X^{B(a)}`, given by the exponents `|B(a)|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    pub exponents: Vec<usize>,
}

impl Polynomial {
    /// The polynomial of `h: B → A` between finite sets, `B(a) = h⁻¹(a)`.
    pub fn of_map(images: &[usize], a: usize) -> Self {
        let mut exponents = alloc::vec![0; a];
        for &i in images {
            exponents[i] += 1;
        }
        Polynomial { exponents }
    }

    pub fn eval(&self, x: usize) -> usize {
        self.exponents.iter().map(|&b| x.pow(b as u32)).sum()
    }
}

/// `Dial_F(cod_F)` over a finite-set skeleton, with its fibre over the
/// terminal object.
pub struct PolynomialFibre {
    pub dial: Dialectica,
    pub members: Vec<Arr>,
    pub terminal: Obj,
    pub fibre: FinCat,
}

pub fn polynomial_fibre(cls: &DisplayClass) -> Result<PolynomialFibre> {
    let base = cls.base();
    let terminal = terminal_object(base).ok_or_else(|| Error::PreconditionFailed("no terminal object".into()))?;
    let cod = codomain_fibration(cls)?;
    let dial = dialectica(&cod, cls)?;
    let fibre = dial.fib().fibre(terminal)?.cat;
    Ok(PolynomialFibre { dial, members: cls.members().collect(), terminal, fibre })
}

impl PolynomialFibre {
    /// The polynomial `(A, h: B → A)` of an object `(g: A ↠ 1, (h: B ↠ A, m))`
    /// over the terminal object whose innermost member `m` is an identity;
    /// other objects carry extra data and have no polynomial reading.
    pub fn polynomial(&self, x: Obj) -> Option<Polynomial> {
        let b = self.dial.fib().base();
        let s = self.dial.sigma.object(x);
        if s.i != self.terminal {
            return None;
        }
        let t = self.dial.pi.object(s.alpha);
        if !b.is_identity(self.members[t.alpha.ix()]) {
            return None;
        }
        Some(Polynomial::of_map(&finset_images(b, t.g), b.cod(t.g).ix()))
    }
}
