//! Explicit slab covers of homogeneous self-similar sets from exact
//! overlaps and digit frequencies.
//!
//! For every pair `i < j` there is an integer direction `v_ij` in which
//! `f_i` and `f_j` project to the same map. Every depth-`n` word has a pair
//! whose combined count is at least `ceil(2n/m)`, so its projection along
//! `v_ij` is the projection of a reduced word in which the merged class
//! occurs at least that often. Those reduced words are few, and the
//! intervals they cut out form the slabs.

mod freq;
mod tubes;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

pub use freq::{
    binomial, count_freq_words, pigeonhole_pair, pigeonhole_threshold, unrank_combination,
    FreqCount, FreqWords,
};
pub use tubes::{slab_to_tubes, Tube, TubeSet};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::ifs::{HomIfsSpec, Word};
use crate::projection::{exact_overlap_directions, project_ifs, Direction, OffsetLattice};
use crate::rational::{pow, to_f64, Rational};

/// `{x : lo <= <v, x> <= hi}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Slab {
    pub direction: Direction,
    pub lo: Rational,
    pub hi: Rational,
    /// `(hi - lo) / |v|_2`.
    pub width: f64,
}

impl Slab {
    pub fn new(direction: Direction, lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::arg("slab with lo > hi"));
        }
        let width = to_f64(&(&hi - &lo)) / direction.norm();
        Ok(Slab {
            direction,
            lo,
            hi,
            width,
        })
    }

    pub fn exact_width_offset(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn weight(&self, s: f64) -> f64 {
        if self.width == 0.0 {
            0.0
        } else {
            self.width.powf(s)
        }
    }

    pub fn contains_interval(&self, a: &Rational, b: &Rational) -> bool {
        &self.lo <= a && b <= &self.hi
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectionGroup {
    pub direction: Direction,
    /// Alphabet pairs assigned to this direction.
    pub pairs: Vec<(usize, usize)>,
    /// Classes of the projected alphabet whose frequency is constrained.
    pub designated: Vec<usize>,
    pub reduced_alphabet: usize,
    /// Reduced words enumerated (with repeats across designated classes).
    pub words: u128,
    /// Disjoint, sorted by `lo`.
    pub slabs: Vec<Slab>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TubeCover {
    pub depth: usize,
    pub s: f64,
    pub alphabet: usize,
    pub threshold: usize,
    pub groups: Vec<DirectionGroup>,
    pub total_weight: f64,
    pub pair_assignment: Vec<((usize, usize), Direction)>,
}

impl TubeCover {
    pub fn slab_count(&self) -> usize {
        self.groups.iter().map(|g| g.slabs.len()).sum()
    }

    pub fn slabs(&self) -> impl Iterator<Item = &Slab> {
        self.groups.iter().flat_map(|g| g.slabs.iter())
    }

    pub fn recompute_weight(&self) -> f64 {
        self.slabs().map(|sl| sl.weight(self.s)).sum()
    }

    /// Drops the `index`-th slab in iteration order.
    pub fn without_slab(&self, index: usize) -> TubeCover {
        let mut out = self.clone();
        let mut k = index;
        for g in &mut out.groups {
            if k < g.slabs.len() {
                g.slabs.remove(k);
                break;
            }
            k -= g.slabs.len();
        }
        out.total_weight = out.recompute_weight();
        out
    }
}

/// `(log2 m - 2/m) / (-log2 r)`.
pub fn reference_exponent(m: usize, r: &Rational) -> f64 {
    let m = m as f64;
    (m.log2() - 2.0 / m) / -to_f64(r).log2()
}

/// Midpoint between the reference exponent and 1.
pub fn default_exponent(m: usize, r: &Rational) -> f64 {
    (reference_exponent(m, r) + 1.0) / 2.0
}

pub fn generate_cover(ifs: &HomIfsSpec, n: usize, s: f64, budget: Budget) -> Result<TubeCover> {
    if n == 0 {
        return Err(Error::arg("cover depth must be >= 1"));
    }
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::arg("exponent s must lie in (0, 1]"));
    }
    let m = ifs.len();
    let threshold = pigeonhole_threshold(n, m);
    let overlaps = exact_overlap_directions(ifs)?;
    let mut by_dir: BTreeMap<Direction, Vec<(usize, usize)>> = BTreeMap::new();
    for o in &overlaps {
        by_dir.entry(o.direction.clone()).or_default().push(o.pair);
    }

    let mut groups = Vec::with_capacity(by_dir.len());
    let mut spent: u128 = 0;
    for (direction, pairs) in by_dir {
        let pifs = project_ifs(ifs, &direction)?;
        let mut designated: Vec<usize> = pairs.iter().map(|&(i, _)| pifs.class_of(i)).collect();
        designated.sort_unstable();
        designated.dedup();
        let m_red = pifs.len();
        let per_class = count_freq_words(m_red, n, threshold)?
            .count
            .to_u128()
            .unwrap_or(u128::MAX);
        let words = per_class.saturating_mul(designated.len() as u128);
        spent = spent.saturating_add(words);
        budget.check(spent)?;

        let lat = OffsetLattice::new(&pifs)?;
        let mut starts: Vec<i128> = Vec::with_capacity(words.min(1 << 24) as usize);
        for &c in &designated {
            for w in FreqWords::new(m_red, n, c, threshold)? {
                starts.push(lat.word_value(&w)?);
            }
        }
        starts.sort_unstable();
        starts.dedup();
        let slabs = merge_into_slabs(&lat, &direction, &starts, n)?;
        groups.push(DirectionGroup {
            direction,
            pairs,
            designated,
            reduced_alphabet: m_red,
            words,
            slabs,
        });
    }
    let pair_assignment = overlaps.into_iter().map(|o| (o.pair, o.direction)).collect();
    let mut cover = TubeCover {
        depth: n,
        s,
        alphabet: m,
        threshold,
        groups,
        total_weight: 0.0,
        pair_assignment,
    };
    cover.total_weight = cover.recompute_weight();
    Ok(cover)
}

/// Sweeps the sorted cylinder intervals `f_k(I_v)` and merges overlapping
/// or touching runs.
fn merge_into_slabs(
    lat: &OffsetLattice,
    direction: &Direction,
    starts: &[i128],
    n: usize,
) -> Result<Vec<Slab>> {
    let ov = || Error::Overflow { depth: n };
    let amin = *lat.numerators.iter().min().unwrap();
    let amax = *lat.numerators.iter().max().unwrap();
    let qp = lat.q - lat.p;
    let pn = lat.p.checked_pow(n as u32).ok_or_else(ov)?;
    let lo_off = pn.checked_mul(amin).ok_or_else(ov)?;
    let hi_off = pn.checked_mul(amax).ok_or_else(ov)?;
    let unit = BigInt::from(lat.unit_denominator(n)?) * BigInt::from(qp);
    let to_rat = |x: i128| Rational::new(BigInt::from(x), unit.clone());

    let mut runs: Vec<(i128, i128)> = Vec::new();
    for &s in starts {
        let base = s.checked_mul(qp).ok_or_else(ov)?;
        let a = base.checked_add(lo_off).ok_or_else(ov)?;
        let b = base.checked_add(hi_off).ok_or_else(ov)?;
        match runs.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => runs.push((a, b)),
        }
    }
    runs.into_iter()
        .map(|(a, b)| Slab::new(direction.clone(), to_rat(a), to_rat(b)))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub depth: usize,
    pub words_checked: u128,
    pub passed: bool,
    pub witness: Option<Word>,
}

/// Checks every depth-`depth` cylinder of the parent IFS: its projected hull
/// `<v, f_w(0)> + r^depth I_v` must lie in one slab of some direction. The
/// projections are recomputed from the parent translations, independently
/// of the reduced systems used to build the cover.
pub fn verify_cover(
    ifs: &HomIfsSpec,
    cover: &TubeCover,
    depth: usize,
    budget: Budget,
) -> Result<VerifyReport> {
    budget.check_words(ifs.len(), depth)?;
    let r = ifs.ratio();
    let one_minus_r = Rational::one() - r;
    let groups: Vec<(&Direction, Vec<Rational>, Rational, Rational, &[Slab])> = cover
        .groups
        .iter()
        .map(|g| {
            let proj: Vec<Rational> = ifs
                .translations()
                .iter()
                .map(|t| g.direction.dot(t))
                .collect();
            let lo = proj.iter().min().unwrap() / &one_minus_r;
            let hi = proj.iter().max().unwrap() / &one_minus_r;
            (&g.direction, proj, lo, hi, g.slabs.as_slice())
        })
        .collect();
    let scale_n = pow(r, depth);
    let hull: Vec<(Rational, Rational)> = groups
        .iter()
        .map(|g| (&scale_n * &g.2, &scale_n * &g.3))
        .collect();
    let scales: Vec<Rational> = (0..depth).map(|l| pow(r, l)).collect();

    // depth-first over words; stack[l][g] is <v_g, f_{w|l}(0)>
    let m = ifs.len();
    let mut word = vec![0usize; depth];
    let mut stack: Vec<Vec<Rational>> = vec![vec![Rational::zero(); groups.len()]; depth + 1];
    let mut checked: u128 = 0;
    let mut level = 0usize;
    loop {
        if level == depth {
            checked += 1;
            let covered = groups.iter().enumerate().any(|(gi, g)| {
                let a = &stack[depth][gi] + &hull[gi].0;
                let b = &stack[depth][gi] + &hull[gi].1;
                slab_containing(g.4, &a, &b)
            });
            if !covered {
                return Ok(VerifyReport {
                    depth,
                    words_checked: checked,
                    passed: false,
                    witness: Some(Word(word)),
                });
            }
            // backtrack to the next sibling
            loop {
                if level == 0 {
                    return Ok(VerifyReport {
                        depth,
                        words_checked: checked,
                        passed: true,
                        witness: None,
                    });
                }
                level -= 1;
                if word[level] + 1 < m {
                    word[level] += 1;
                    break;
                }
                word[level] = 0;
            }
        }
        let sym = word[level];
        let next: Vec<Rational> = groups
            .iter()
            .enumerate()
            .map(|(gi, g)| &stack[level][gi] + &scales[level] * &g.1[sym])
            .collect();
        stack[level + 1] = next;
        level += 1;
    }
}

fn slab_containing(slabs: &[Slab], a: &Rational, b: &Rational) -> bool {
    let idx = slabs.partition_point(|s| &s.lo <= a);
    idx > 0 && slabs[idx - 1].contains_interval(a, b)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub n: usize,
    pub slab_count: usize,
    pub total_weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightCurve {
    pub s: f64,
    pub reference_exponent: f64,
    pub rows: Vec<CurveRow>,
}

pub fn cover_weight_curve(
    ifs: &HomIfsSpec,
    s: f64,
    n_range: &[usize],
    budget: Budget,
) -> Result<WeightCurve> {
    if n_range.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::arg("depths must be strictly ascending"));
    }
    let rows = n_range
        .iter()
        .map(|&n| {
            let c = generate_cover(ifs, n, s, budget)?;
            Ok(CurveRow {
                n,
                slab_count: c.slab_count(),
                total_weight: c.total_weight,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightCurve {
        s,
        reference_exponent: reference_exponent(ifs.len(), ifs.ratio()),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    pub(crate) fn tri() -> HomIfsSpec {
        HomIfsSpec::new(
            rat(3, 10),
            vec![
                vec![int(0), int(0)],
                vec![int(1), int(0)],
                vec![int(0), int(1)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn depth_one_has_one_slab_per_direction() {
        let c = generate_cover(&tri(), 1, 0.9, Budget::default()).unwrap();
        assert_eq!(c.groups.len(), 3);
        assert_eq!(c.threshold, 1);
        assert!(c.groups.iter().all(|g| g.slabs.len() == 1 && g.words == 1));
        assert!((c.total_weight - c.recompute_weight()).abs() < 1e-12);
    }

    #[test]
    fn depth_one_verifies() {
        let f = tri();
        let c = generate_cover(&f, 1, 0.9, Budget::default()).unwrap();
        assert!(verify_cover(&f, &c, 1, Budget::default()).unwrap().passed);
        assert!(verify_cover(&f, &c, 3, Budget::default()).unwrap().passed);
    }

    #[test]
    fn deleting_a_slab_is_detected() {
        let f = tri();
        let c = generate_cover(&f, 4, 0.9, Budget::default()).unwrap();
        // slabs overlap across directions, but some slab must be essential
        let failures: Vec<_> = (0..c.slab_count())
            .map(|i| verify_cover(&f, &c.without_slab(i), 4, Budget::default()).unwrap())
            .filter(|rep| !rep.passed)
            .collect();
        assert!(!failures.is_empty());
        assert!(failures.iter().all(|rep| rep.witness.is_some()));
    }

    #[test]
    fn two_map_system_collapses() {
        let f = HomIfsSpec::new(rat(1, 3), vec![vec![int(0), int(0)], vec![int(1), int(2)]]).unwrap();
        let c = generate_cover(&f, 4, 0.5, Budget::default()).unwrap();
        assert_eq!(c.groups.len(), 1);
        assert_eq!(c.threshold, 4);
        assert_eq!(c.groups[0].reduced_alphabet, 1);
        assert_eq!(c.slab_count(), 1);
        assert_eq!(c.total_weight, 0.0);
        assert!(verify_cover(&f, &c, 4, Budget::default()).unwrap().passed);
    }

    #[test]
    fn reference_exponents() {
        assert!((reference_exponent(3, &rat(3, 10)) - 0.5290).abs() < 5e-4);
        assert!((reference_exponent(4, &rat(7, 20)) - 0.9904).abs() < 5e-4);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(generate_cover(&tri(), 0, 0.9, Budget::default()).is_err());
        assert!(generate_cover(&tri(), 2, 1.5, Budget::default()).is_err());
        let line = HomIfsSpec::new(rat(1, 3), vec![vec![int(0)], vec![int(1)]]).unwrap();
        assert!(generate_cover(&line, 2, 0.9, Budget::default()).is_err());
        assert!(matches!(
            generate_cover(&tri(), 12, 0.9, Budget::new(100)),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
