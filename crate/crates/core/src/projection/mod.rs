//! Integer-direction projections of homogeneous IFSs.
//!
//! Projecting `x -> r x + t_i` along `v` gives the one-dimensional system
//! `s -> r s + <v, t_i>`. Maps with equal offsets are identical, so the
//! parent alphabet collapses to equivalence classes; the projected IFS is
//! indexed by those classes.

mod direction;
mod levels;
mod wsc;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use direction::{directions_sup_norm, directions_within, Direction};
pub use levels::{level_offsets, OffsetLattice};
pub use wsc::{wsc_check, WscLevel, WscReport};

use crate::error::{Error, Result};
use crate::ifs::{HomIfsSpec, Word};
use crate::rational::{common_denominator, gcd_all, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectedIfs {
    ratio: Rational,
    direction: Direction,
    parent_len: usize,
    /// Classes in ascending offset order; members ascending.
    classes: Vec<Vec<usize>>,
    offsets: Vec<Rational>,
    class_of: Vec<usize>,
    hull: (Rational, Rational),
}

impl ProjectedIfs {
    pub fn ratio(&self) -> &Rational {
        &self.ratio
    }

    pub fn direction(&self) -> &Direction {
        &self.direction
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn offsets(&self) -> &[Rational] {
        &self.offsets
    }

    pub fn hull(&self) -> &(Rational, Rational) {
        &self.hull
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn parent_len(&self) -> usize {
        self.parent_len
    }

    /// Class index of a parent symbol.
    pub fn class_of(&self, symbol: usize) -> usize {
        self.class_of[symbol]
    }

    /// `Pi_v`: symbolwise quotient of a parent word.
    pub fn reduce_word(&self, w: &Word) -> Word {
        Word(w.symbols().iter().map(|&s| self.class_of[s]).collect())
    }

    /// `f^v_k(0)` of a reduced word.
    pub fn word_offset(&self, w: &Word) -> Rational {
        let mut acc = Rational::zero();
        let mut scale = Rational::one();
        for &k in w.symbols() {
            acc += &scale * &self.offsets[k];
            scale *= &self.ratio;
        }
        acc
    }

    /// `f^v_k(I_v)` for a reduced word.
    pub fn cylinder_interval(&self, w: &Word) -> (Rational, Rational) {
        let o = self.word_offset(w);
        let scale = crate::rational::pow(&self.ratio, w.len());
        (&o + &scale * &self.hull.0, &o + &scale * &self.hull.1)
    }
}

pub fn project_ifs(ifs: &HomIfsSpec, v: &Direction) -> Result<ProjectedIfs> {
    if v.dim() != ifs.dim() {
        return Err(Error::arg(format!(
            "direction {v} has dimension {}, IFS has {}",
            v.dim(),
            ifs.dim()
        )));
    }
    let mut fibers: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
    for (i, t) in ifs.translations().iter().enumerate() {
        fibers.entry(v.dot(t)).or_default().push(i);
    }
    let mut class_of = vec![0usize; ifs.len()];
    let mut classes = Vec::with_capacity(fibers.len());
    let mut offsets = Vec::with_capacity(fibers.len());
    for (k, (o, members)) in fibers.into_iter().enumerate() {
        for &i in &members {
            class_of[i] = k;
        }
        offsets.push(o);
        classes.push(members);
    }
    let denom = Rational::one() - ifs.ratio();
    let hull = (
        offsets.first().unwrap() / &denom,
        offsets.last().unwrap() / &denom,
    );
    Ok(ProjectedIfs {
        ratio: ifs.ratio().clone(),
        direction: v.clone(),
        parent_len: ifs.len(),
        classes,
        offsets,
        class_of,
        hull,
    })
}

/// The partition `i ~ j  <=>  f^v_i = f^v_j`, classes sorted by offset.
pub fn overlap_classes(ifs: &HomIfsSpec, v: &Direction) -> Result<Vec<Vec<usize>>> {
    Ok(project_ifs(ifs, v)?.classes)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapDirection {
    pub pair: (usize, usize),
    pub direction: Direction,
}

/// For every pair `i < j` a canonical primitive `v` with
/// `<v, t_i - t_j> = 0`. In the plane the direction is unique up to sign;
/// in higher dimension the smallest sup-norm candidate is taken, ties broken
/// lexicographically.
pub fn exact_overlap_directions(ifs: &HomIfsSpec) -> Result<Vec<OverlapDirection>> {
    let d = ifs.dim();
    if d < 2 {
        return Err(Error::arg("exact overlap directions need dimension >= 2"));
    }
    let t = ifs.translations();
    let mut out = Vec::with_capacity(t.len() * (t.len() - 1) / 2);
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            let diff: Vec<Rational> = t[i].iter().zip(&t[j]).map(|(a, b)| a - b).collect();
            let direction = orthogonal_direction(&integer_vector(&diff)?)?;
            out.push(OverlapDirection {
                pair: (i, j),
                direction,
            });
        }
    }
    Ok(out)
}

/// Clears denominators and divides out the gcd.
fn integer_vector(x: &[Rational]) -> Result<Vec<i64>> {
    use num_traits::ToPrimitive;
    let den = Rational::from_integer(common_denominator(x));
    let ints: Vec<BigInt> = x.iter().map(|c| (c * &den).to_integer()).collect();
    let g = gcd_all(&ints);
    if g.is_zero() {
        return Err(Error::arg("zero difference vector"));
    }
    ints.iter()
        .map(|c| (c / &g).to_i64().ok_or_else(|| Error::arg("difference vector too large")))
        .collect()
}

fn orthogonal_direction(w: &[i64]) -> Result<Direction> {
    if w.len() == 2 {
        return Direction::normalize(vec![-w[1], w[0]]);
    }
    let bound = w.iter().map(|x| x.abs()).max().unwrap_or(1).max(1);
    for s in 1..=bound {
        // directions_sup_norm is lexicographic; keep those on the shell
        if let Some(v) = directions_sup_norm(w.len(), s).into_iter().find(|v| {
            v.components().iter().map(|x| x.abs()).max() == Some(s) && v.dot_int(w) == 0
        }) {
            return Ok(v);
        }
    }
    Err(Error::NotFound(format!("no orthogonal direction for {w:?}")))
}

#[derive(Debug, Clone, PartialEq)]
pub struct OverlapReport {
    pub direction: Direction,
    /// Max over classes `i` of `#{j : f_j(I_v) meets f_i(I_v)}`, `j = i`
    /// included, closed intervals.
    pub multiplicity: usize,
    /// `2 sqrt(d) |v|`.
    pub bound_2sqrtd_r0: f64,
    /// Exact `(M - 1)^2 <= 4 d |v|^2`.
    pub within_bound: bool,
}

pub fn overlap_multiplicity(pifs: &ProjectedIfs) -> OverlapReport {
    let span = (&pifs.hull.1 - &pifs.hull.0) * &pifs.ratio;
    let o = &pifs.offsets;
    let mut best = 0usize;
    let mut lo = 0usize;
    let mut hi = 0usize;
    for i in 0..o.len() {
        while &o[i] - &o[lo] > span {
            lo += 1;
        }
        hi = hi.max(i);
        while hi + 1 < o.len() && &o[hi + 1] - &o[i] <= span {
            hi += 1;
        }
        best = best.max(hi - lo + 1);
    }
    let d = pifs.direction.dim() as i128;
    let m1 = best as i128 - 1;
    OverlapReport {
        direction: pifs.direction.clone(),
        multiplicity: best,
        bound_2sqrtd_r0: 2.0 * (d as f64).sqrt() * pifs.direction.norm(),
        within_bound: m1 * m1 <= 4 * d * pifs.direction.norm_sq(),
    }
}

/// Smallest `m >= 1` with `log2(2 sqrt(d) R0) / (m log2 N) < delta0 / 2`.
pub fn choose_high_level(r0: u64, delta0: f64, base: u64, dim: usize) -> Result<u64> {
    if r0 < 1 || base < 2 || dim < 1 || !(delta0 > 0.0) {
        return Err(Error::arg("need R0 >= 1, N >= 2, d >= 1, delta0 > 0"));
    }
    let num = (2.0 * (dim as f64).sqrt() * r0 as f64).log2();
    let ln = (base as f64).log2();
    let mut m = 1u64;
    while num / (m as f64 * ln) >= delta0 / 2.0 {
        m += 1;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carpet::sierpinski_carpet;
    use crate::rational::{int, rat};

    fn tri() -> HomIfsSpec {
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

    fn dir(v: &[i64]) -> Direction {
        Direction::new(v.to_vec()).unwrap()
    }

    #[test]
    fn sierpinski_diagonal_classes() {
        let p = project_ifs(&sierpinski_carpet().to_ifs(), &dir(&[1, 1])).unwrap();
        let sizes: Vec<usize> = p.classes().iter().map(|c| c.len()).collect();
        assert_eq!(sizes, vec![1, 2, 2, 2, 1]);
        assert_eq!(
            p.offsets(),
            &[int(0), rat(1, 3), rat(2, 3), int(1), rat(4, 3)]
        );
        assert_eq!(p.hull(), &(int(0), int(2)));
    }

    #[test]
    fn sierpinski_axis_classes() {
        let p = project_ifs(&sierpinski_carpet().to_ifs(), &dir(&[1, 0])).unwrap();
        let sizes: Vec<usize> = p.classes().iter().map(|c| c.len()).collect();
        assert_eq!(sizes, vec![3, 2, 3]);
        assert_eq!(p.hull(), &(int(0), int(1)));
    }

    #[test]
    fn small_ifs_classes() {
        let f = tri();
        assert_eq!(overlap_classes(&f, &dir(&[1, 1])).unwrap(), vec![vec![0], vec![1, 2]]);
        assert_eq!(overlap_classes(&f, &dir(&[1, 0])).unwrap(), vec![vec![0, 2], vec![1]]);
        assert_eq!(overlap_classes(&f, &dir(&[0, 1])).unwrap(), vec![vec![0, 1], vec![2]]);
    }

    #[test]
    fn injective_offsets_give_singletons() {
        let f = HomIfsSpec::new(
            rat(1, 4),
            vec![vec![int(0), int(5)], vec![int(1), int(5)], vec![int(2), int(0)]],
        )
        .unwrap();
        assert_eq!(project_ifs(&f, &dir(&[1, 0])).unwrap().len(), 3);
    }

    #[test]
    fn overlap_directions_small() {
        let got = exact_overlap_directions(&tri()).unwrap();
        let dirs: Vec<_> = got.iter().map(|o| (o.pair, o.direction.components().to_vec())).collect();
        assert_eq!(
            dirs,
            vec![((0, 1), vec![0, 1]), ((0, 2), vec![1, 0]), ((1, 2), vec![1, 1])]
        );
        let two = HomIfsSpec::new(rat(1, 3), vec![vec![int(0), int(0)], vec![int(1), int(1)]]).unwrap();
        let got = exact_overlap_directions(&two).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].direction.components(), &[1, -1]);
    }

    #[test]
    fn overlap_directions_3d_canonical() {
        let f = HomIfsSpec::new(
            rat(1, 5),
            vec![vec![int(0), int(0), int(0)], vec![int(1), int(2), int(3)]],
        )
        .unwrap();
        let v = &exact_overlap_directions(&f).unwrap()[0].direction;
        assert_eq!(v.dot_int(&[1, 2, 3]), 0);
        // sup-norm 1 candidates orthogonal to (1,2,3): (1,1,-1)
        assert_eq!(v.components(), &[1, 1, -1]);
        let line = HomIfsSpec::new(rat(1, 2), vec![vec![int(0)], vec![int(1)]]).unwrap();
        assert!(exact_overlap_directions(&line).is_err());
    }

    #[test]
    fn multiplicity_examples() {
        let f = sierpinski_carpet().to_ifs();
        let axis = overlap_multiplicity(&project_ifs(&f, &dir(&[1, 0])).unwrap());
        assert_eq!(axis.multiplicity, 3);
        assert!(axis.within_bound);
        let diag = overlap_multiplicity(&project_ifs(&f, &dir(&[1, 1])).unwrap());
        assert_eq!(diag.multiplicity, 5);
        assert!(diag.within_bound);
        let two = HomIfsSpec::new(rat(1, 3), vec![vec![int(0), int(0)], vec![int(1), int(1)]]).unwrap();
        let single = overlap_multiplicity(&project_ifs(&two, &dir(&[1, -1])).unwrap());
        assert_eq!(single.multiplicity, 1);
    }

    #[test]
    fn high_level_choice() {
        assert_eq!(choose_high_level(648, 0.1, 3, 2).unwrap(), 137);
        assert_eq!(choose_high_level(648, 0.2, 3, 2).unwrap(), 69);
        assert_eq!(choose_high_level(1, 2.0, 3, 1).unwrap(), 1);
        assert!(choose_high_level(0, 0.1, 3, 2).is_err());
    }
}
