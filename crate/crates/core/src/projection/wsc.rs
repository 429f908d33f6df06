//! Weak separation certificates for carpet projections.
//!
//! For a carpet (`r = 1/N`, `t_i = i/N`) and integer `v`, every scaled
//! offset `N^n f^v_w(0) = sum_k <v, i_k> N^(n-k)` is an integer, so distinct
//! depth-`n` offsets are at least `N^-n` apart.

use num_bigint::BigInt;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::ifs::HomIfsSpec;
use crate::projection::{project_ifs, Direction, OffsetLattice};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WscLevel {
    pub depth: usize,
    pub distinct: usize,
    /// Smallest gap between distinct offsets, times `N^depth`; `None` when
    /// there is a single offset.
    pub scaled_min_gap: Option<Rational>,
    pub integral: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WscReport {
    pub direction: Direction,
    pub base: u64,
    pub checked_depth: usize,
    pub levels: Vec<WscLevel>,
    /// Minimum over the checked depths; `None` is the `+inf` sentinel.
    pub scaled_min_gap: Option<Rational>,
    pub integral: bool,
    /// Largest `c` with every nonzero depth-`n` gap `>= c N^-n`.
    pub wsc_constant_c: Option<Rational>,
}

pub fn wsc_check(ifs: &HomIfsSpec, v: &Direction, n_max: usize, budget: Budget) -> Result<WscReport> {
    let carpet = ifs
        .as_carpet()
        .ok_or_else(|| Error::arg("weak separation check needs a carpet IFS (r = 1/N, t_i = i/N)"))?;
    let base = carpet.base();
    let pifs = project_ifs(ifs, v)?;
    budget.check_words(pifs.len(), n_max)?;
    let lat = OffsetLattice::new(&pifs)?;
    let sets = lat.level_sets(n_max, budget)?;
    let n_big = BigInt::from(base);
    let mut levels = Vec::with_capacity(n_max + 1);
    let mut scale = BigInt::from(1);
    for (depth, values) in sets.iter().enumerate() {
        // N^n / (D q^(n-1)) converts a lattice integer to N^n f(0)
        let factor = Rational::new(scale.clone(), BigInt::from(lat.unit_denominator(depth)?));
        let integral = values
            .iter()
            .all(|&s| (Rational::from_integer(BigInt::from(s)) * &factor).is_integer());
        let scaled_min_gap = values
            .windows(2)
            .map(|w| w[1] - w[0])
            .min()
            .map(|g| Rational::from_integer(BigInt::from(g)) * &factor);
        levels.push(WscLevel {
            depth,
            distinct: values.len(),
            scaled_min_gap,
            integral,
        });
        scale *= &n_big;
    }
    let scaled_min_gap = levels
        .iter()
        .filter_map(|l| l.scaled_min_gap.clone())
        .min();
    let integral = levels.iter().all(|l| l.integral);
    Ok(WscReport {
        direction: v.clone(),
        base,
        checked_depth: n_max,
        wsc_constant_c: scaled_min_gap.clone(),
        scaled_min_gap,
        integral,
        levels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carpet::sierpinski_carpet;
    use crate::rational::{int, rat};

    #[test]
    fn sierpinski_diagonal_depth_two() {
        let f = sierpinski_carpet().to_ifs();
        let r = wsc_check(&f, &Direction::new(vec![1, 1]).unwrap(), 2, Budget::default()).unwrap();
        assert!(r.integral);
        assert_eq!(r.scaled_min_gap, Some(int(1)));
        // 9 f = 3 s1 + s2 with s in 0..=4 covers 0..=16
        assert_eq!(r.levels[2].distinct, 17);
    }

    #[test]
    fn depth_zero_is_vacuous() {
        let f = sierpinski_carpet().to_ifs();
        let r = wsc_check(&f, &Direction::new(vec![1, 0]).unwrap(), 0, Budget::default()).unwrap();
        assert_eq!(r.levels.len(), 1);
        assert_eq!(r.levels[0].distinct, 1);
        assert_eq!(r.scaled_min_gap, None);
    }

    #[test]
    fn rejects_non_carpet() {
        let f = HomIfsSpec::new(rat(3, 10), vec![vec![int(0)], vec![int(1)]]).unwrap();
        assert!(wsc_check(&f, &Direction::new(vec![1]).unwrap(), 2, Budget::default()).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let f = sierpinski_carpet().to_ifs();
        let v = Direction::new(vec![2, 1]).unwrap();
        assert!(matches!(
            wsc_check(&f, &v, 6, Budget::new(1000)),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
