//! Depth-`n` offsets `f_k(0)` of a projected IFS, held as integers over a
//! common denominator so that coincidences are detected exactly.
//!
//! With `r = p/q`, class offsets `o_k = a_k / D` and unit
//! `u_n = 1/(D q^(n-1))`, the scaled offset of `w k` satisfies
//! `S(wk) = q S(w) + p^(n-1) a_k`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::projection::ProjectedIfs;
use crate::rational::{common_denominator, Rational};

#[derive(Debug, Clone)]
pub struct OffsetLattice {
    pub p: i128,
    pub q: i128,
    pub denom: i128,
    /// Class offsets times `denom`.
    pub numerators: Vec<i128>,
}

impl OffsetLattice {
    pub fn new(pifs: &ProjectedIfs) -> Result<Self> {
        let d = common_denominator(pifs.offsets());
        let conv = |x: &BigInt| x.to_i128().ok_or(Error::Overflow { depth: 0 });
        let numerators = pifs
            .offsets()
            .iter()
            .map(|o| conv(&(o * Rational::from_integer(d.clone())).to_integer()))
            .collect::<Result<Vec<_>>>()?;
        Ok(OffsetLattice {
            p: conv(pifs.ratio().numer())?,
            q: conv(pifs.ratio().denom())?,
            denom: conv(&d)?,
            numerators,
        })
    }

    pub fn alphabet(&self) -> usize {
        self.numerators.len()
    }

    fn p_pow(&self, e: usize) -> Result<i128> {
        self.p.checked_pow(e as u32).ok_or(Error::Overflow { depth: e })
    }

    /// Denominator of the depth-`n` unit, `D q^(n-1)` (1 at depth 0).
    pub fn unit_denominator(&self, n: usize) -> Result<i128> {
        if n == 0 {
            return Ok(1);
        }
        self.q
            .checked_pow((n - 1) as u32)
            .and_then(|x| x.checked_mul(self.denom))
            .ok_or(Error::Overflow { depth: n })
    }

    pub fn to_rational(&self, s: i128, n: usize) -> Result<Rational> {
        Ok(Rational::new(
            BigInt::from(s),
            BigInt::from(self.unit_denominator(n)?),
        ))
    }

    /// Scaled offset of a reduced word.
    pub fn word_value(&self, word: &[usize]) -> Result<i128> {
        let mut s: i128 = 0;
        for (l, &k) in word.iter().enumerate() {
            s = self.step(s, l, self.numerators[k])?;
        }
        Ok(s)
    }

    #[inline]
    pub(crate) fn step(&self, s: i128, level: usize, a: i128) -> Result<i128> {
        let ov = Error::Overflow { depth: level + 1 };
        let head = if level == 0 { s } else { s.checked_mul(self.q).ok_or(ov)? };
        let tail = self
            .p_pow(level)?
            .checked_mul(a)
            .ok_or(Error::Overflow { depth: level + 1 })?;
        head.checked_add(tail).ok_or(Error::Overflow { depth: level + 1 })
    }

    /// Sorted distinct scaled offsets at every depth `0..=n`.
    pub fn level_sets(&self, n: usize, budget: Budget) -> Result<Vec<Vec<i128>>> {
        let mut out = Vec::with_capacity(n + 1);
        let mut cur = vec![0i128];
        out.push(cur.clone());
        let mut touched: u128 = 0;
        for level in 0..n {
            touched = touched.saturating_add((cur.len() * self.alphabet()) as u128);
            budget.check(touched)?;
            let mut next = Vec::with_capacity(cur.len() * self.alphabet());
            for &s in &cur {
                for &a in &self.numerators {
                    next.push(self.step(s, level, a)?);
                }
            }
            next.sort_unstable();
            next.dedup();
            out.push(next.clone());
            cur = next;
        }
        Ok(out)
    }

    /// Masses of the cells `{w : f_w(0) = S}` of a Bernoulli measure, at
    /// every depth `0..=n`, sorted by `S`.
    pub fn level_distributions(
        &self,
        weights: &[f64],
        n: usize,
        budget: Budget,
    ) -> Result<Vec<Vec<(i128, f64)>>> {
        if weights.len() != self.alphabet() {
            return Err(Error::arg(format!(
                "measure has {} weights but the projected alphabet has {} symbols",
                weights.len(),
                self.alphabet()
            )));
        }
        let mut out = Vec::with_capacity(n + 1);
        let mut cur = vec![(0i128, 1.0f64)];
        out.push(cur.clone());
        let mut touched: u128 = 0;
        for level in 0..n {
            touched = touched.saturating_add((cur.len() * self.alphabet()) as u128);
            budget.check(touched)?;
            let mut next = Vec::with_capacity(cur.len() * self.alphabet());
            for &(s, w) in &cur {
                for (&a, &pk) in self.numerators.iter().zip(weights) {
                    if pk > 0.0 {
                        next.push((self.step(s, level, a)?, w * pk));
                    }
                }
            }
            next.sort_by_key(|e| e.0);
            let mut merged: Vec<(i128, f64)> = Vec::with_capacity(next.len());
            for (s, w) in next {
                match merged.last_mut() {
                    Some(last) if last.0 == s => last.1 += w,
                    _ => merged.push((s, w)),
                }
            }
            out.push(merged.clone());
            cur = merged;
        }
        Ok(out)
    }

    /// Largest number of depth-`n` offsets in a half-open window of length
    /// `r^n`, i.e. `M_1` at that depth.
    pub fn window_multiplicity(&self, values: &[i128], n: usize) -> Result<usize> {
        // S_j - S_i < r^n / u_n  <=>  q (S_j - S_i) < p^n D
        let lim = self
            .p_pow(n)?
            .checked_mul(self.denom)
            .ok_or(Error::Overflow { depth: n })?;
        let mut best = 0usize;
        let mut lo = 0usize;
        for hi in 0..values.len() {
            while (values[hi] - values[lo]).checked_mul(self.q).ok_or(Error::Overflow { depth: n })? >= lim {
                lo += 1;
            }
            best = best.max(hi - lo + 1);
        }
        Ok(best)
    }

    /// Overlap multiplicity of the depth-`n` reduced IFS `{t -> r^n t + A}`:
    /// max over cylinders of the number of closed cylinder hulls meeting it
    /// (itself included).
    pub fn cylinder_multiplicity(&self, values: &[i128], n: usize) -> Result<usize> {
        if values.is_empty() {
            return Ok(0);
        }
        let amin = *self.numerators.iter().min().unwrap();
        let amax = *self.numerators.iter().max().unwrap();
        // In units u_n / (q - p) each hull is [S (q-p) + p^n amin, S (q-p) + p^n amax];
        // two hulls meet iff |S_i - S_j| (q - p) <= p^n (amax - amin).
        let ov = || Error::Overflow { depth: n };
        let span = self.p_pow(n)?.checked_mul(amax - amin).ok_or_else(ov)?;
        let qp = self.q - self.p;
        let mut best = 0usize;
        let mut lo = 0usize;
        let mut hi = 0usize;
        for i in 0..values.len() {
            while (values[i] - values[lo]).checked_mul(qp).ok_or_else(ov)? > span {
                lo += 1;
            }
            if hi < i {
                hi = i;
            }
            while hi + 1 < values.len()
                && (values[hi + 1] - values[i]).checked_mul(qp).ok_or_else(ov)? <= span
            {
                hi += 1;
            }
            best = best.max(hi - lo + 1);
        }
        Ok(best)
    }
}

/// Exact `f_k(0)` for every reduced word of length `n`, deduplicated and
/// sorted.
pub fn level_offsets(pifs: &ProjectedIfs, n: usize, budget: Budget) -> Result<Vec<Rational>> {
    let lat = OffsetLattice::new(pifs)?;
    let sets = lat.level_sets(n, budget)?;
    sets[n].iter().map(|&s| lat.to_rational(s, n)).collect()
}
