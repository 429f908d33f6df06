//! Bernoulli measures, their projections, and entropy-dimension bounds.
//!
//! The scale-`n` entropy of a projected measure is tracked through the
//! offset partition `P_h` (symbolic cells grouped by the value of the depth-`h`
//! offset), with `h` the depth whose cylinders have length comparable to
//! `2^-n`. Logarithms are base 2 throughout.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;

use crate::budget::Budget;
use crate::carpet::CarpetSpec;
use crate::error::{Error, Result};
use crate::projection::{directions_within, project_ifs, Direction, OffsetLattice, ProjectedIfs};
use crate::rational::{to_f64, Rational};

const SUM_TOLERANCE: f64 = 1e-12;

/// Product measure on symbol sequences from a single probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliMeasure {
    weights: Vec<f64>,
    exact: Option<Vec<Rational>>,
}

impl BernoulliMeasure {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::arg("empty probability vector"));
        }
        if weights.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
            return Err(Error::arg("weights must be finite and nonnegative"));
        }
        let s: f64 = weights.iter().sum();
        if (s - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::arg(format!("weights sum to {s}, not 1")));
        }
        Ok(BernoulliMeasure {
            weights,
            exact: None,
        })
    }

    pub fn from_rationals(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::arg("empty probability vector"));
        }
        if weights.iter().any(|p| p.is_negative()) {
            return Err(Error::arg("weights must be nonnegative"));
        }
        let s: Rational = weights.iter().cloned().sum();
        if !s.is_one() {
            return Err(Error::arg("exact weights must sum to 1"));
        }
        Ok(BernoulliMeasure {
            weights: weights.iter().map(to_f64).collect(),
            exact: Some(weights),
        })
    }

    pub fn uniform(n: usize) -> Self {
        let w = Rational::new(BigInt::one(), BigInt::from(n));
        Self::from_rationals(vec![w; n]).expect("uniform weights")
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn exact_weights(&self) -> Option<&[Rational]> {
        self.exact.as_deref()
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Entropy per symbol, `h(mu, sigma) = H(p)` for a Bernoulli measure.
    pub fn entropy(&self) -> f64 {
        shannon_entropy(&self.weights)
    }
}

/// `-sum p_i log2 p_i` with `0 log 0 = 0`.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Class weight = sum of member weights.
pub fn pushforward_weights(mu: &BernoulliMeasure, classes: &[Vec<usize>]) -> Result<BernoulliMeasure> {
    let mut seen = vec![false; mu.len()];
    for &i in classes.iter().flatten() {
        if i >= mu.len() || std::mem::replace(&mut seen[i], true) {
            return Err(Error::arg("classes do not partition the measure's alphabet"));
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::arg("classes do not cover the measure's alphabet"));
    }
    if let Some(ex) = &mu.exact {
        let w = classes
            .iter()
            .map(|c| c.iter().map(|&i| ex[i].clone()).sum())
            .collect();
        return BernoulliMeasure::from_rationals(w);
    }
    let w: Vec<f64> = classes
        .iter()
        .map(|c| c.iter().map(|&i| mu.weights[i]).sum())
        .collect();
    Ok(BernoulliMeasure {
        weights: w,
        exact: None,
    })
}

/// `H(nu, P_h)`.
pub fn offset_partition_entropy(
    pifs: &ProjectedIfs,
    mu_v: &BernoulliMeasure,
    h: usize,
    budget: Budget,
) -> Result<f64> {
    let lat = OffsetLattice::new(pifs)?;
    let dist = lat.level_distributions(mu_v.weights(), h, budget)?;
    Ok(cell_entropy(&dist[h]))
}

fn cell_entropy(cells: &[(i128, f64)]) -> f64 {
    let masses: Vec<f64> = cells.iter().map(|c| c.1).collect();
    shannon_entropy(&masses)
}

/// Largest `h` with `r^h >= 2^-n`, i.e. `r^(h+1) < 2^-n <= r^h`.
pub fn offset_depth(r: &Rational, n: usize) -> usize {
    let p = r.numer();
    let q = r.denom();
    let two_n = BigInt::one() << n;
    let mut h = 0usize;
    let mut ph = BigInt::one();
    let mut qh = BigInt::one();
    loop {
        let pn = &ph * p;
        let qn = &qh * q;
        // r^(h+1) >= 2^-n  <=>  2^n p^(h+1) >= q^(h+1)
        if &two_n * &pn >= qn {
            h += 1;
            ph = pn;
            qh = qn;
        } else {
            return h;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaleEntropy {
    pub n: usize,
    pub h: usize,
    /// `H(nu, P_h)`, the estimate of `H_n`.
    pub entropy: f64,
    /// Offsets of depth `h` in a half-open window of length `r^h`.
    pub m1: usize,
    /// `M_2 = M_1 (1 + 1/r)`.
    pub m2: Rational,
    /// `log2 M_2`.
    pub radius: f64,
}

pub fn scale_entropy(
    pifs: &ProjectedIfs,
    mu_v: &BernoulliMeasure,
    n: usize,
    budget: Budget,
) -> Result<ScaleEntropy> {
    let h = offset_depth(pifs.ratio(), n);
    let lat = OffsetLattice::new(pifs)?;
    let dist = lat.level_distributions(mu_v.weights(), h, budget)?;
    let sets = lat.level_sets(h, budget)?;
    let m1 = lat.window_multiplicity(&sets[h], h)?;
    Ok(scale_row(pifs.ratio(), n, h, cell_entropy(&dist[h]), m1))
}

fn scale_row(r: &Rational, n: usize, h: usize, entropy: f64, m1: usize) -> ScaleEntropy {
    let m2 = Rational::from_integer(BigInt::from(m1)) * (Rational::one() + r.recip());
    ScaleEntropy {
        n,
        h,
        entropy,
        m1,
        radius: to_f64(&m2).log2(),
        m2,
    }
}

/// `(h - log2 M) / (-log2 r)`; may be negative.
pub fn entropy_lower_bound_dim(h_bits: f64, r: &Rational, m: u64) -> Result<f64> {
    if h_bits < 0.0 || m < 1 || !r.is_positive() || r >= &Rational::one() {
        return Err(Error::arg("need h >= 0, M >= 1, 0 < r < 1"));
    }
    Ok((h_bits - (m as f64).log2()) / -log2_rational(r))
}

fn log2_rational(r: &Rational) -> f64 {
    // numerator and denominator separately keeps tiny ratios finite
    big_log2(r.numer()) - big_log2(r.denom())
}

fn big_log2(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().unwrap().log2();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().log2() + shift as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyRow {
    pub scale: ScaleEntropy,
    /// `H_n / n`.
    pub per_bit: f64,
    /// `H(nu, P_h) / (h log2(1/r))`; `None` at `h = 0`.
    pub normalized: Option<f64>,
    /// Overlap multiplicity of the depth-`h` reduced system.
    pub level_multiplicity: usize,
    /// Lower bound from the depth-`h` system; `None` at `h = 0`.
    pub lower: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport {
    pub direction: Direction,
    pub ratio: Rational,
    pub rows: Vec<EntropyRow>,
    /// Min of `H_n / n` over the table.
    pub min_per_bit: f64,
    pub dim_lower: f64,
    pub dim_upper: f64,
    pub dim_estimate: f64,
}

impl EntropyReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,h,H_n,radius,H_n_over_n,normalized,level_multiplicity,lower\n");
        for r in &self.rows {
            let opt = |x: Option<f64>| x.map(|v| format!("{v:.12}")).unwrap_or_default();
            s.push_str(&format!(
                "{},{},{:.12},{:.12},{:.12},{},{},{}\n",
                r.scale.n,
                r.scale.h,
                r.scale.entropy,
                r.scale.radius,
                r.per_bit,
                opt(r.normalized),
                r.level_multiplicity,
                opt(r.lower)
            ));
        }
        s
    }
}

/// Builds the `H_n` table and brackets the entropy dimension.
///
/// `H(nu, P_h)` is subadditive in `h`, so `H(nu, P_h) / (h log2(1/r))`
/// decreases to its limit, which is the entropy dimension; every row is
/// therefore an upper bound. Every row also yields a lower bound by viewing
/// the measure as self-similar for the depth-`h` reduced system, whose maps
/// overlap at most `level_multiplicity` ways.
pub fn entropy_dimension_estimate(
    pifs: &ProjectedIfs,
    mu_v: &BernoulliMeasure,
    n_list: &[usize],
    budget: Budget,
) -> Result<EntropyReport> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::arg("n_list must be nonempty and strictly ascending"));
    }
    let r = pifs.ratio();
    let lat = OffsetLattice::new(pifs)?;
    let h_max = offset_depth(r, *n_list.last().unwrap());
    let dist = lat.level_distributions(mu_v.weights(), h_max, budget)?;
    let sets = lat.level_sets(h_max, budget)?;
    let neg_log_r = -log2_rational(r);
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let h = offset_depth(r, n);
        let entropy = cell_entropy(&dist[h]);
        let m1 = lat.window_multiplicity(&sets[h], h)?;
        let scale = scale_row(r, n, h, entropy, m1);
        let level_multiplicity = lat.cylinder_multiplicity(&sets[h], h)?;
        let (normalized, lower) = if h == 0 {
            (None, None)
        } else {
            let denom = h as f64 * neg_log_r;
            (
                Some(entropy / denom),
                Some((entropy - (level_multiplicity as f64).log2()) / denom),
            )
        };
        rows.push(EntropyRow {
            per_bit: if n == 0 { 0.0 } else { entropy / n as f64 },
            scale,
            normalized,
            level_multiplicity,
            lower,
        });
    }
    let min_per_bit = rows
        .iter()
        .filter(|r| r.scale.n > 0)
        .map(|r| r.per_bit)
        .fold(f64::INFINITY, f64::min);
    let upper = rows
        .iter()
        .filter_map(|r| r.normalized)
        .fold(f64::INFINITY, f64::min);
    let lower = rows
        .iter()
        .filter_map(|r| r.lower)
        .fold(f64::NEG_INFINITY, f64::max);
    let clamp = |x: f64, fallback: f64| if x.is_finite() { x.clamp(0.0, 1.0) } else { fallback };
    let dim_upper = clamp(upper, 1.0);
    let dim_lower = clamp(lower, 0.0).min(dim_upper);
    Ok(EntropyReport {
        direction: pifs.direction().clone(),
        ratio: r.clone(),
        rows,
        min_per_bit,
        dim_lower,
        dim_upper,
        dim_estimate: dim_upper,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubadditivityRow {
    pub n: usize,
    pub m: usize,
    pub h_n: f64,
    pub h_m: f64,
    pub h_sum: f64,
    /// `H(P_n) + H(P_m) - H(P_{n+m})`.
    pub slack: f64,
    pub holds: bool,
}

/// Floating-point slack allowed when comparing partition entropies.
pub const ENTROPY_ROUNDING: f64 = 1e-10;

pub fn subadditivity_probe(
    pifs: &ProjectedIfs,
    mu_v: &BernoulliMeasure,
    pairs: &[(usize, usize)],
    budget: Budget,
) -> Result<Vec<SubadditivityRow>> {
    let top = pairs.iter().map(|&(a, b)| a + b).max().unwrap_or(0);
    let lat = OffsetLattice::new(pifs)?;
    let dist = lat.level_distributions(mu_v.weights(), top, budget)?;
    let ent: Vec<f64> = dist.iter().map(|d| cell_entropy(d)).collect();
    Ok(pairs
        .iter()
        .map(|&(n, m)| {
            let slack = ent[n] + ent[m] - ent[n + m];
            SubadditivityRow {
                n,
                m,
                h_n: ent[n],
                h_m: ent[m],
                h_sum: ent[n + m],
                slack,
                holds: slack >= -ENTROPY_ROUNDING,
            }
        })
        .collect())
}

/// `max_n (n - H_n)` over the table; bounded for absolutely continuous
/// projections, growing like `(1 - dim) n` otherwise.
pub fn garsia_gap(report: &EntropyReport) -> f64 {
    report
        .rows
        .iter()
        .map(|r| r.scale.n as f64 - r.scale.entropy)
        .fold(f64::NEG_INFINITY, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub direction: Direction,
    pub dim_lower: f64,
    pub dim_upper: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DropScan {
    pub best: Direction,
    pub dim_upper: f64,
    /// `1 - dim_upper` for the best direction.
    pub drop: f64,
    pub rows: Vec<ScanRow>,
}

/// Projects `mu` in every primitive direction of `Z(radius)` and returns
/// the direction with the smallest certified upper dimension (ties: the
/// lexicographically smallest direction).
pub fn dimension_drop_scan(
    spec: &CarpetSpec,
    mu: &BernoulliMeasure,
    radius: u64,
    n_list: &[usize],
    budget: Budget,
) -> Result<DropScan> {
    if radius < 1 {
        return Err(Error::arg("scan radius must be >= 1"));
    }
    if mu.len() != spec.digits().len() {
        return Err(Error::arg("measure length does not match the digit set"));
    }
    let ifs = spec.to_ifs();
    let dirs = directions_within(spec.dim(), radius);
    let rows = dirs
        .par_iter()
        .map(|v| {
            let pifs = project_ifs(&ifs, v)?;
            let mu_v = pushforward_weights(mu, pifs.classes())?;
            let rep = entropy_dimension_estimate(&pifs, &mu_v, n_list, budget)?;
            Ok(ScanRow {
                direction: v.clone(),
                dim_lower: rep.dim_lower,
                dim_upper: rep.dim_upper,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let best = rows
        .iter()
        .min_by(|a, b| {
            a.dim_upper
                .total_cmp(&b.dim_upper)
                .then_with(|| a.direction.cmp(&b.direction))
        })
        .ok_or_else(|| Error::NotFound("no directions in range".into()))?;
    Ok(DropScan {
        best: best.direction.clone(),
        dim_upper: best.dim_upper,
        drop: 1.0 - best.dim_upper,
        rows: rows.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carpet::sierpinski_carpet;
    use crate::rational::rat;

    fn axis() -> ProjectedIfs {
        project_ifs(&sierpinski_carpet().to_ifs(), &Direction::new(vec![1, 0]).unwrap()).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert!((shannon_entropy(&[0.125; 8]) - 3.0).abs() < 1e-15);
        let p = [1.0 / 8.0, 0.25, 0.25, 0.25, 1.0 / 8.0];
        assert!((shannon_entropy(&p) - 2.25).abs() < 1e-15);
        assert_eq!(shannon_entropy(&[1.0, 0.0, 0.0]), 0.0);
    }

    #[test]
    fn measure_validation() {
        assert!(BernoulliMeasure::new(vec![0.5, 0.6]).is_err());
        assert!(BernoulliMeasure::new(vec![-0.5, 1.5]).is_err());
        assert!(BernoulliMeasure::from_rationals(vec![rat(1, 3), rat(1, 3)]).is_err());
        assert!(BernoulliMeasure::new(vec![0.5, 0.5]).is_ok());
    }

    #[test]
    fn pushforward_examples() {
        let mu = BernoulliMeasure::uniform(8);
        let p = axis();
        let nu = pushforward_weights(&mu, p.classes()).unwrap();
        assert_eq!(nu.exact_weights().unwrap(), &[rat(3, 8), rat(1, 4), rat(3, 8)]);
        let single: Vec<Vec<usize>> = (0..8).map(|i| vec![i]).collect();
        assert_eq!(pushforward_weights(&mu, &single).unwrap(), mu);
        assert!(pushforward_weights(&mu, &[vec![0, 1]]).is_err());
    }

    #[test]
    fn offset_depths() {
        // r = 1/3: 3^h <= 2^n
        assert_eq!(offset_depth(&rat(1, 3), 8), 5);
        assert_eq!(offset_depth(&rat(1, 3), 1), 0);
        assert_eq!(offset_depth(&rat(1, 2), 7), 7);
        assert_eq!(offset_depth(&rat(3, 10), 0), 0);
    }

    #[test]
    fn lower_bound_examples() {
        let v = entropy_lower_bound_dim(2.25, &rat(1, 3), 5).unwrap();
        assert!((v - (2.25 - 5f64.log2()) / 3f64.log2()).abs() < 1e-12);
        assert!(v < 0.0);
        assert!((entropy_lower_bound_dim(3f64.log2(), &rat(1, 3), 1).unwrap() - 1.0).abs() < 1e-12);
        assert!(entropy_lower_bound_dim(1.0, &rat(1, 3), 0).is_err());
    }

    #[test]
    fn axis_scale_entropy_n8() {
        let p = axis();
        let nu = pushforward_weights(&BernoulliMeasure::uniform(8), p.classes()).unwrap();
        let s = scale_entropy(&p, &nu, 8, Budget::default()).unwrap();
        let h1 = shannon_entropy(&[0.375, 0.25, 0.375]);
        assert_eq!(s.h, 5);
        assert!((s.entropy - 5.0 * h1).abs() < 1e-9);
        assert_eq!(s.m1, 1);
        assert_eq!(s.m2, rat(4, 1));
        assert!((s.radius - 2.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_measure_has_zero_dimension() {
        let p = axis();
        let nu = BernoulliMeasure::new(vec![1.0, 0.0, 0.0]).unwrap();
        let rep = entropy_dimension_estimate(&p, &nu, &[2, 4, 6], Budget::default()).unwrap();
        assert_eq!(rep.dim_estimate, 0.0);
        assert_eq!(garsia_gap(&rep), 6.0);
    }
}
