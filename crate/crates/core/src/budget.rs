use core::cell::Cell;

use crate::error::{Error, Result};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Cap on candidate inspections for a single universal-property search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub cap: u64,
}

impl Budget {
    pub const fn new(cap: u64) -> Self {
        Budget { cap }
    }

    pub const fn unlimited() -> Self {
        Budget { cap: u64::MAX }
    }

    /// A fresh counter for one search.
    pub fn meter(&self) -> Meter {
        Meter { used: Cell::new(0), cap: self.cap }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}

#[derive(Debug)]
pub struct Meter {
    used: Cell<u64>,
    cap: u64,
}

impl Meter {
    #[inline]
    pub fn tick(&self) -> Result<()> {
        self.spend(1)
    }

    #[inline]
    pub fn spend(&self, n: u64) -> Result<()> {
        let used = self.used.get().saturating_add(n);
        self.used.set(used);
        if used > self.cap {
            Err(Error::SearchBudgetExceeded { cap: self.cap })
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used.get()
    }
}
