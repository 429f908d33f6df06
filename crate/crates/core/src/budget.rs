use crate::error::{Error, Result};

/// Upper bound on the number of words an enumeration may touch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub limit: u64,
}

impl Budget {
    pub const DEFAULT_LIMIT: u64 = 100_000_000;

    pub fn new(limit: u64) -> Self {
        Budget { limit }
    }

    pub fn unlimited() -> Self {
        Budget { limit: u64::MAX }
    }

    pub fn check(&self, needed: u128) -> Result<()> {
        if needed > self.limit as u128 {
            Err(Error::BudgetExceeded {
                needed,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }

    /// `base^exp` words, saturating.
    pub fn check_words(&self, base: usize, exp: usize) -> Result<()> {
        self.check(saturating_pow(base as u128, exp))
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(Self::DEFAULT_LIMIT)
    }
}

pub(crate) fn saturating_pow(base: u128, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
    }
    acc
}
