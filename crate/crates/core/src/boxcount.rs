//! Dyadic box counts of self-similar sets by recursive cylinder covering.
//!
//! A cylinder `f_w(hull)` is refined until its half-open box lies inside a
//! single dyadic cell, which is then occupied, or until the first depth at
//! which cylinders are no larger than a cell; there every cell meeting the
//! box is marked. All arithmetic is on scaled
//! integers, so the counts are exact for the half-open convention.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::budget::Budget;
use crate::carpet::CarpetSpec;
use crate::error::{Error, Result};
use crate::ifs::HomIfsSpec;
use crate::projection::ProjectedIfs;
use crate::rational::{common_denominator, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxCountRow {
    pub n: usize,
    /// Occupied cells of side `2^-n`.
    pub count: u64,
    /// Cylinder depth at which refinement stopped.
    pub depth_cap: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxCountReport {
    pub dim: usize,
    pub rows: Vec<BoxCountRow>,
    /// Least-squares slope of `log2 count` against `n`.
    pub slope: f64,
    pub method: String,
}

const METHOD: &str = "half-open cylinder boxes refined until each lies in one dyadic cell; \
cells of side 2^-n meeting a box at the depth cap are all counted";

/// Per-axis integer data: translations `a/D`, ratio `p/q`.
struct Lattice {
    p: i128,
    q: i128,
    /// `[axis][map]`.
    nums: Vec<Vec<i128>>,
    denom: i128,
    amin: Vec<i128>,
    amax: Vec<i128>,
}

impl Lattice {
    fn new(ifs: &HomIfsSpec) -> Result<Self> {
        let conv = |x: &BigInt| x.to_i128().ok_or(Error::Overflow { depth: 0 });
        let t = ifs.translations();
        let d = common_denominator(t.iter().flatten());
        let dr = Rational::from_integer(d.clone());
        let nums: Vec<Vec<i128>> = (0..ifs.dim())
            .map(|j| {
                t.iter()
                    .map(|ti| conv(&(&ti[j] * &dr).to_integer()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let amin = nums.iter().map(|a| *a.iter().min().unwrap()).collect();
        let amax = nums.iter().map(|a| *a.iter().max().unwrap()).collect();
        Ok(Lattice {
            p: conv(ifs.ratio().numer())?,
            q: conv(ifs.ratio().denom())?,
            nums,
            denom: conv(&d)?,
            amin,
            amax,
        })
    }
}

struct Counter<'a> {
    lat: &'a Lattice,
    n: usize,
    cap: usize,
    cells: HashSet<Vec<i64>>,
    nodes: u128,
    budget: Budget,
}

impl Counter<'_> {
    /// `s[j]` is the offset on axis `j` in units `1/(D q^(k-1))`, `k >= 1`.
    fn visit(&mut self, s: &[i128], k: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes.is_multiple_of(4096) {
            self.budget.check(self.nodes)?;
        }
        let ov = || Error::Overflow { depth: k };
        let lat = self.lat;
        let qp = lat.q - lat.p;
        let pk = lat.p.checked_pow(k as u32).ok_or_else(ov)?;
        let unit = lat
            .q
            .checked_pow(k as u32 - 1)
            .and_then(|x| x.checked_mul(lat.denom))
            .and_then(|x| x.checked_mul(qp))
            .ok_or_else(ov)?;
        let scale = 1i128 << self.n;
        let mut ranges = Vec::with_capacity(s.len());
        let mut single = true;
        for (j, &sj) in s.iter().enumerate() {
            let base = sj.checked_mul(qp).ok_or_else(ov)?;
            let lo = pk.checked_mul(lat.amin[j]).and_then(|x| base.checked_add(x)).ok_or_else(ov)?;
            let hi = pk.checked_mul(lat.amax[j]).and_then(|x| base.checked_add(x)).ok_or_else(ov)?;
            let first = lo.checked_mul(scale).ok_or_else(ov)?.div_euclid(unit);
            let hi_s = hi.checked_mul(scale).ok_or_else(ov)?;
            let last = if hi == lo {
                first
            } else {
                (hi_s + unit - 1).div_euclid(unit) - 1
            };
            single &= first == last;
            ranges.push((first as i64, last as i64));
        }
        if single || k >= self.cap {
            self.mark(&ranges);
            return Ok(());
        }
        let m = lat.nums[0].len();
        let mut child = vec![0i128; s.len()];
        for i in 0..m {
            for (j, c) in child.iter_mut().enumerate() {
                let head = s[j].checked_mul(lat.q).ok_or_else(ov)?;
                *c = pk.checked_mul(lat.nums[j][i]).and_then(|x| head.checked_add(x)).ok_or_else(ov)?;
            }
            self.visit(&child, k + 1)?;
        }
        Ok(())
    }

    fn mark(&mut self, ranges: &[(i64, i64)]) {
        let mut idx: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        loop {
            self.cells.insert(idx.clone());
            let mut j = ranges.len();
            loop {
                if j == 0 {
                    return;
                }
                j -= 1;
                if idx[j] < ranges[j].1 {
                    idx[j] += 1;
                    break;
                }
                idx[j] = ranges[j].0;
            }
        }
    }
}

/// Smallest `k` with `r^k <= 2^-n`.
fn covering_depth(ifs: &HomIfsSpec, n: usize) -> usize {
    let r = ifs.ratio();
    let (p, q) = (r.numer().abs(), r.denom().clone());
    let two_n = BigInt::from(1) << n;
    let mut k = 0usize;
    let (mut pk, mut qk) = (BigInt::from(1), BigInt::from(1));
    while &pk * &two_n > qk {
        pk *= &p;
        qk *= &q;
        k += 1;
    }
    k
}

pub fn box_count_ifs(ifs: &HomIfsSpec, n_range: &[usize], budget: Budget) -> Result<BoxCountReport> {
    if n_range.len() < 2 || n_range.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::arg("need at least two strictly ascending scales"));
    }
    if *n_range.last().unwrap() > 60 {
        return Err(Error::arg("dyadic scale above 60 is not supported"));
    }
    let lat = Lattice::new(ifs)?;
    let mut rows = Vec::with_capacity(n_range.len());
    let mut spent = 0u128;
    for &n in n_range {
        let cap = covering_depth(ifs, n).max(1);
        let mut c = Counter {
            lat: &lat,
            n,
            cap,
            cells: HashSet::new(),
            nodes: spent,
            budget,
        };
        for i in 0..ifs.len() {
            let s: Vec<i128> = lat.nums.iter().map(|a| a[i]).collect();
            c.visit(&s, 1)?;
        }
        spent = c.nodes;
        rows.push(BoxCountRow {
            n,
            count: c.cells.len() as u64,
            depth_cap: cap,
        });
    }
    let slope = least_squares_slope(
        &rows
            .iter()
            .map(|r| (r.n as f64, (r.count as f64).log2()))
            .collect::<Vec<_>>(),
    );
    Ok(BoxCountReport {
        dim: ifs.dim(),
        rows,
        slope,
        method: METHOD.to_string(),
    })
}

pub fn box_count_carpet(spec: &CarpetSpec, n_range: &[usize], budget: Budget) -> Result<BoxCountReport> {
    box_count_ifs(&spec.to_ifs(), n_range, budget)
}

/// Box counts of `P_v(K)`, via the reduced one-dimensional system.
pub fn box_count_projection(pifs: &ProjectedIfs, n_range: &[usize], budget: Budget) -> Result<BoxCountReport> {
    let translations = pifs.offsets().iter().map(|o| vec![o.clone()]).collect();
    let ifs = HomIfsSpec::with_unchecked_count(pifs.ratio().clone(), translations, 1)?;
    box_count_ifs(&ifs, n_range, budget)
}

pub fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}
