//! Digit-restricted ×N-invariant carpets: the set of points of `[0,1]^d`
//! whose base-`N` digit tuples all lie in an allowed set.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::ifs::{Box, HomIfsSpec, Word};
use crate::rational::{pow, Rational};

pub type Digit = Vec<u64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarpetSpec {
    base: u64,
    dim: usize,
    /// Sorted lexicographically; the position of a digit is its symbol.
    digits: Vec<Digit>,
}

impl CarpetSpec {
    /// Requires `2 <= |digits| < base^dim`.
    pub fn new(base: u64, dim: usize, digits: Vec<Digit>) -> Result<Self> {
        let spec = Self::build(base, dim, digits)?;
        if spec.digits.len() < 2 {
            return Err(Error::InvalidCarpet("need at least two digits".into()));
        }
        if !spec.is_proper() {
            return Err(Error::InvalidCarpet(
                "digit set must be a proper subset of {0..N-1}^d".into(),
            ));
        }
        Ok(spec)
    }

    /// Skips the size invariant: admits a single digit or the full digit
    /// set. Used for degenerate fixtures (a point, Lebesgue measure).
    pub fn new_unrestricted(base: u64, dim: usize, digits: Vec<Digit>) -> Result<Self> {
        let spec = Self::build(base, dim, digits)?;
        if spec.digits.is_empty() {
            return Err(Error::InvalidCarpet("empty digit set".into()));
        }
        Ok(spec)
    }

    /// The full grid `{0..N-1}^d`.
    pub fn full(base: u64, dim: usize) -> Result<Self> {
        let total = checked_cells(base, dim)?;
        let digits = (0..total).map(|k| unflatten(k, base, dim)).collect();
        Self::new_unrestricted(base, dim, digits)
    }

    fn build(base: u64, dim: usize, mut digits: Vec<Digit>) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidCarpet("base must be >= 2".into()));
        }
        if dim == 0 {
            return Err(Error::InvalidCarpet("dimension must be >= 1".into()));
        }
        for dg in &digits {
            if dg.len() != dim {
                return Err(Error::InvalidCarpet(format!(
                    "digit {dg:?} does not have {dim} components"
                )));
            }
            if dg.iter().any(|&c| c >= base) {
                return Err(Error::InvalidCarpet(format!(
                    "digit {dg:?} has a component outside [0, {}]",
                    base - 1
                )));
            }
        }
        digits.sort();
        digits.dedup();
        Ok(CarpetSpec { base, dim, digits })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn digits(&self) -> &[Digit] {
        &self.digits
    }

    pub fn is_proper(&self) -> bool {
        match checked_cells(self.base, self.dim) {
            Ok(total) => (self.digits.len() as u64) < total,
            Err(_) => true,
        }
    }

    /// Ratio `1/N`, translations `i/N` in digit order.
    pub fn to_ifs(&self) -> HomIfsSpec {
        let n = BigInt::from(self.base);
        let translations = self
            .digits
            .iter()
            .map(|dg| {
                dg.iter()
                    .map(|&c| Rational::new(BigInt::from(c), n.clone()))
                    .collect()
            })
            .collect();
        HomIfsSpec::with_unchecked_count(Rational::new(BigInt::one(), n), translations, 1)
            .expect("carpet digits are distinct")
    }

    /// `f_w([0,1]^d)`.
    pub fn cylinder_box(&self, w: &Word) -> Result<Box> {
        let w = Word::new(w.0.clone(), self.digits.len())?;
        let ifs = self.to_ifs();
        let off = ifs.word_offset(&w);
        let side = pow(ifs.ratio(), w.len());
        Ok(Box {
            sides: off.into_iter().map(|o| (o.clone(), o + &side)).collect(),
        })
    }
}

pub fn carpet_to_ifs(spec: &CarpetSpec) -> HomIfsSpec {
    spec.to_ifs()
}

/// An empty grid cube at the smallest depth where one exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoleReport {
    pub depth: u32,
    pub cube_index: Vec<u64>,
    /// Radius of the ball inscribed in the empty cube, `1/(2 N^depth)`.
    pub alpha_lower: Rational,
}

/// A depth-`m` cube `N^-m([0,1]^d + c)` misses every depth-`m` cylinder
/// exactly when some base-`N` digit level of `c` is a forbidden tuple, so a
/// proper digit set always has a hole at depth 1.
pub fn find_hole(spec: &CarpetSpec) -> Result<HoleReport> {
    let total = checked_cells(spec.base, spec.dim)?;
    for k in 0..total {
        let cell = unflatten(k, spec.base, spec.dim);
        if spec.digits.binary_search(&cell).is_err() {
            return Ok(HoleReport {
                depth: 1,
                cube_index: cell,
                alpha_lower: Rational::new(BigInt::one(), BigInt::from(2 * spec.base)),
            });
        }
    }
    Err(Error::NotFound(
        "digit set is the full grid; the attractor has no hole".into(),
    ))
}

/// Re-encodes allowed length-`q` blocks as single base-`N^q` digits. The
/// result is the carpet whose attractor contains every point all of whose
/// aligned `q`-blocks are allowed; closedness of the input language is not
/// checked.
pub fn reduce_invariant_set(base: u64, dim: usize, blocks: &[Vec<Digit>]) -> Result<CarpetSpec> {
    let q = blocks
        .first()
        .map(|b| b.len())
        .ok_or_else(|| Error::arg("no allowed blocks"))?;
    if q == 0 || blocks.iter().any(|b| b.len() != q) {
        return Err(Error::arg("all blocks must share one positive length"));
    }
    let new_base = (0..q).try_fold(1u64, |acc, _| acc.checked_mul(base)).ok_or_else(|| {
        Error::arg("base^q overflows")
    })?;
    let mut digits = Vec::with_capacity(blocks.len());
    for block in blocks {
        let mut enc = vec![0u64; dim];
        for sym in block {
            if sym.len() != dim || sym.iter().any(|&c| c >= base) {
                return Err(Error::InvalidCarpet(format!("bad block symbol {sym:?}")));
            }
            for (e, &c) in enc.iter_mut().zip(sym) {
                *e = *e * base + c;
            }
        }
        digits.push(enc);
    }
    let spec = CarpetSpec::new_unrestricted(new_base, dim, digits)?;
    if !spec.is_proper() {
        return Err(Error::arg("allowed blocks are the full block set"));
    }
    Ok(spec)
}

fn checked_cells(base: u64, dim: usize) -> Result<u64> {
    (0..dim)
        .try_fold(1u64, |acc, _| acc.checked_mul(base))
        .ok_or_else(|| Error::InvalidCarpet("base^dim overflows".into()))
}

/// Lexicographic index -> tuple (first coordinate most significant).
fn unflatten(mut k: u64, base: u64, dim: usize) -> Vec<u64> {
    let mut v = vec![0u64; dim];
    for j in (0..dim).rev() {
        v[j] = k % base;
        k /= base;
    }
    v
}

pub fn sierpinski_carpet() -> CarpetSpec {
    let digits = (0..3u64)
        .flat_map(|a| (0..3u64).map(move |b| vec![a, b]))
        .filter(|d| d != &vec![1, 1])
        .collect();
    CarpetSpec::new(3, 2, digits).expect("valid")
}
