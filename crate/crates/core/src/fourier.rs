//! Fourier coefficients of Bernoulli carpet measures and tent-function
//! certificates for the radius within which some coefficient is nonzero.
//!
//! Self-similarity `mu = sum p_i f_i mu` with `f_i(x) = (x + i)/N` gives
//! `mu^(xi) = prod_{k>=1} Phi(xi / N^k)`, `Phi(eta) = sum_i p_i e(-<eta, i>)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::carpet::{find_hole, CarpetSpec, HoleReport};
use crate::error::{Error, Result};
use crate::measures::BernoulliMeasure;
use crate::projection::{directions_within, Direction};

#[derive(Debug, Clone, PartialEq)]
pub struct FourierValue {
    pub xi: Vec<i64>,
    pub value: Complex64,
    /// Bound on `|mu^(xi) - value|`: truncation plus rounding.
    pub tail_radius: f64,
    pub terms_used: usize,
}

impl FourierValue {
    pub fn abs(&self) -> f64 {
        self.value.norm()
    }
}

/// Rounding allowance per evaluated term and digit.
const ROUNDING_PER_TERM: f64 = 8.0 * f64::EPSILON;

/// Truncated product with `K` factors, `K` the least integer for which the
/// tail bound `2 pi A N^-K / (N - 1)` is below `tol / 2`, where
/// `A = max_i |<xi, i>|`. The bound follows from `|1 - Phi(eta)| <=
/// 2 pi max_i |<eta, i>|` and `|1 - prod z_k| <= sum |1 - z_k|` for
/// `|z_k| <= 1`.
pub fn ss_fourier(
    spec: &CarpetSpec,
    mu: &BernoulliMeasure,
    xi: &[i64],
    tol: f64,
) -> Result<FourierValue> {
    if !(tol > 0.0) {
        return Err(Error::arg("tolerance must be positive"));
    }
    if xi.len() != spec.dim() {
        return Err(Error::arg("frequency dimension does not match the carpet"));
    }
    if mu.len() != spec.digits().len() {
        return Err(Error::arg("measure length does not match the digit set"));
    }
    if xi.iter().all(|&x| x == 0) {
        return Ok(FourierValue {
            xi: xi.to_vec(),
            value: Complex64::new(1.0, 0.0),
            tail_radius: 0.0,
            terms_used: 0,
        });
    }
    let n = spec.base();
    let dots: Vec<i128> = spec
        .digits()
        .iter()
        .map(|d| d.iter().zip(xi).map(|(&a, &b)| a as i128 * b as i128).sum())
        .collect();
    let amax = dots.iter().map(|d| d.unsigned_abs()).max().unwrap_or(0) as f64;
    let nf = n as f64;
    let mut k_terms = 0usize;
    let mut tail = f64::INFINITY;
    while k_terms < 4096 {
        tail = 2.0 * PI * amax * nf.powi(-(k_terms as i32)) / (nf - 1.0);
        if tail < tol / 2.0 {
            break;
        }
        k_terms += 1;
    }
    let mut value = Complex64::new(1.0, 0.0);
    let mut modulus: Option<i128> = Some(1);
    for k in 1..=k_terms {
        modulus = modulus.and_then(|m| m.checked_mul(n as i128));
        let mut phi = Complex64::new(0.0, 0.0);
        for (&dot, &p) in dots.iter().zip(mu.weights()) {
            if p == 0.0 {
                continue;
            }
            // exact reduction of <xi, i> / N^k modulo 1
            let frac = match modulus {
                Some(m) => dot.rem_euclid(m) as f64 / m as f64,
                None => dot as f64 / nf.powi(k as i32),
            };
            phi += Complex64::from_polar(p, -2.0 * PI * frac);
        }
        value *= phi;
    }
    let rounding = ROUNDING_PER_TERM * (k_terms.max(1) * dots.len()) as f64;
    Ok(FourierValue {
        xi: xi.to_vec(),
        value,
        tail_radius: tail + rounding,
        terms_used: k_terms,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceCheck {
    pub k: u32,
    pub difference: f64,
    /// Sum of the two tail radii.
    pub allowed: f64,
    pub holds: bool,
}

/// `|mu^(N^k v) - mu^(v)|`, which vanishes for ×N-invariant measures.
pub fn invariance_check(
    spec: &CarpetSpec,
    mu: &BernoulliMeasure,
    v: &[i64],
    k: u32,
    tol: f64,
) -> Result<InvarianceCheck> {
    if k < 1 {
        return Err(Error::arg("k must be >= 1"));
    }
    if v.iter().all(|&x| x == 0) {
        return Err(Error::arg("v must be nonzero"));
    }
    let scale = (spec.base() as i64)
        .checked_pow(k)
        .ok_or_else(|| Error::arg("N^k overflows"))?;
    let scaled: Option<Vec<i64>> = v.iter().map(|&x| x.checked_mul(scale)).collect();
    let scaled = scaled.ok_or_else(|| Error::arg("N^k v overflows"))?;
    let a = ss_fourier(spec, mu, v, tol)?;
    let b = ss_fourier(spec, mu, &scaled, tol)?;
    let difference = (a.value - b.value).norm();
    let allowed = a.tail_radius + b.tail_radius;
    Ok(InvarianceCheck {
        k,
        difference,
        allowed,
        holds: difference <= allowed,
    })
}

/// Coefficients at every primitive direction of `Z(radius)`, in scan order.
pub fn fourier_scan(
    spec: &CarpetSpec,
    mu: &BernoulliMeasure,
    radius: u64,
    tol: f64,
) -> Result<Vec<(Direction, FourierValue)>> {
    directions_within(spec.dim(), radius)
        .into_par_iter()
        .map(|v| {
            let f = ss_fourier(spec, mu, v.components(), tol)?;
            Ok((v, f))
        })
        .collect()
}

/// First direction in scan order (Euclidean norm, then lexicographic) with
/// `|mu^(v)| > threshold + tail_radius`.
pub fn find_nonvanishing(
    spec: &CarpetSpec,
    mu: &BernoulliMeasure,
    radius: u64,
    threshold: f64,
    tol: f64,
) -> Result<(Direction, FourierValue)> {
    fourier_scan(spec, mu, radius, tol)?
        .into_iter()
        .find(|(_, f)| f.abs() > threshold + f.tail_radius)
        .ok_or_else(|| {
            Error::NotFound(format!(
                "no coefficient above {threshold} within radius {radius}"
            ))
        })
}

/// `2^(d+1) N^(2d)`.
pub fn r0_tent_bound(n_eff: u64, dim: usize) -> Result<u128> {
    if n_eff < 2 || dim < 1 {
        return Err(Error::arg("need N >= 2 and d >= 1"));
    }
    let n2d = (n_eff as u128)
        .checked_pow(2 * dim as u32)
        .ok_or_else(|| Error::arg("bound overflows"))?;
    n2d.checked_mul(1u128 << (dim + 1))
        .ok_or_else(|| Error::arg("bound overflows"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct R0Certificate {
    pub r0: u64,
    pub hole: HoleReport,
    /// Grid resolution of the hole cube, `N^depth`.
    pub n_eff: u64,
    /// Upper bound on `sum_{|n| >= r0} |psi^(n)|`.
    pub tail_sum_bound: f64,
    pub tent_bound: u128,
    pub method: &'static str,
}

/// `|psi^(n)|` for the normalized tent product on a cube of side `1/m`:
/// `prod_j sinc^2(pi n_j / (2 m))`.
pub fn tent_coefficient_abs(n: &[i64], m: u64) -> f64 {
    n.iter().map(|&k| tent_factor(k, m)).product()
}

fn tent_factor(k: i64, m: u64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let x = PI * k as f64 / (2.0 * m as f64);
    let s = x.sin() / x;
    s * s
}

/// `psi^(n)` including the phase of the cube position.
pub fn tent_coefficient(n: &[i64], hole: &HoleReport, base: u64) -> Complex64 {
    let m = base.pow(hole.depth);
    let phase: f64 = n
        .iter()
        .zip(&hole.cube_index)
        .map(|(&k, &c)| k as f64 * (c as f64 + 0.5) / m as f64)
        .sum();
    Complex64::from_polar(tent_coefficient_abs(n, m), -2.0 * PI * phase)
}

const CERT_MARGIN: f64 = 1e-9;
const BALL_ENUMERATION_LIMIT: u128 = 20_000_000;

/// Tent product on the first hole cube; `r0` is the least radius with
/// `sum_{|n| >= r0} |psi^(n)| < 1`.
///
/// Per axis `sum_k sinc^2(pi k / (2m)) = 2m` exactly (Poisson summation),
/// so a tail is the total `(2m)^d` minus a finite head. A cube head gives a
/// first admissible radius; when the ball fits in the enumeration limit the
/// head is then summed over the ball itself.
pub fn r0_certificate(spec: &CarpetSpec) -> Result<R0Certificate> {
    let hole = find_hole(spec)?;
    let d = spec.dim();
    let m = spec
        .base()
        .checked_pow(hole.depth)
        .ok_or_else(|| Error::arg("N^depth overflows"))?;
    let tent_bound = r0_tent_bound(m, d)?;
    let total = (2.0 * m as f64).powi(d as i32);

    // cube {|n|_inf <= k}
    let mut head1 = 1.0f64;
    let mut k = 0i64;
    loop {
        let cube_tail = total - head1.powi(d as i32);
        if cube_tail + CERT_MARGIN < 1.0 {
            break;
        }
        k += 1;
        head1 += 2.0 * tent_factor(k, m);
        if k as u128 > tent_bound {
            return Err(Error::NotFound("tent tail does not drop below 1".into()));
        }
    }
    let mut r0 = ((k as f64) * (d as f64).sqrt()).floor() as u64 + 1;
    let mut tail_sum_bound = total - head1.powi(d as i32);

    let side = 2 * r0 as u128 + 1;
    if side.checked_pow(d as u32).is_some_and(|c| c <= BALL_ENUMERATION_LIMIT) {
        let (r, t) = ball_radius(r0, d, m, total);
        if r <= r0 {
            r0 = r;
            tail_sum_bound = t;
        }
    }
    Ok(R0Certificate {
        r0,
        hole,
        n_eff: m,
        tail_sum_bound,
        tent_bound,
        method: "tent",
    })
}

/// Smallest `r <= r_max` with `total - sum_{|n| < r} |psi^(n)| < 1`.
fn ball_radius(r_max: u64, d: usize, m: u64, total: f64) -> (u64, f64) {
    let rr = r_max as i64;
    let factors: Vec<f64> = (0..=rr).map(|k| tent_factor(k, m)).collect();
    let mut pts: Vec<(i64, f64)> = Vec::new();
    let mut cur = vec![-rr; d];
    loop {
        let n2: i64 = cur.iter().map(|x| x * x).sum();
        if n2 < rr * rr {
            let v: f64 = cur.iter().map(|&x| factors[x.unsigned_abs() as usize]).product();
            pts.push((n2, v));
        }
        let mut j = d;
        let done = loop {
            if j == 0 {
                break true;
            }
            j -= 1;
            if cur[j] < rr {
                cur[j] += 1;
                break false;
            }
            cur[j] = -rr;
        };
        if done {
            break;
        }
    }
    pts.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut head = 0.0f64;
    let mut idx = 0usize;
    for r in 1..=r_max {
        let lim = (r * r) as i64;
        while idx < pts.len() && pts[idx].0 < lim {
            head += pts[idx].1;
            idx += 1;
        }
        let tail = total - head;
        if tail + CERT_MARGIN < 1.0 {
            return (r, tail);
        }
    }
    (r_max + 1, f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carpet::sierpinski_carpet;

    #[test]
    fn zero_frequency() {
        let c = sierpinski_carpet();
        let f = ss_fourier(&c, &BernoulliMeasure::uniform(8), &[0, 0], 1e-9).unwrap();
        assert_eq!(f.value, Complex64::new(1.0, 0.0));
        assert_eq!(f.tail_radius, 0.0);
    }

    #[test]
    fn lebesgue_coefficients_vanish() {
        let full = CarpetSpec::full(3, 2).unwrap();
        let f = ss_fourier(&full, &BernoulliMeasure::uniform(9), &[1, 2], 1e-9).unwrap();
        assert!(f.abs() <= f.tail_radius);
    }

    #[test]
    fn tail_radius_below_tolerance() {
        let c = sierpinski_carpet();
        let f = ss_fourier(&c, &BernoulliMeasure::uniform(8), &[1, 1], 1e-9).unwrap();
        assert!(f.tail_radius < 1e-9);
        assert!(f.abs() > 0.01);
    }

    #[test]
    fn tent_bounds() {
        assert_eq!(r0_tent_bound(3, 2).unwrap(), 648);
        assert_eq!(r0_tent_bound(2, 1).unwrap(), 16);
        assert_eq!(r0_tent_bound(4, 2).unwrap(), 2048);
    }

    #[test]
    fn one_dimensional_certificate() {
        let c = CarpetSpec::new_unrestricted(2, 1, vec![vec![0]]).unwrap();
        let cert = r0_certificate(&c).unwrap();
        // sinc^2 head: 1 + 2(0.8106) < 3 < 1 + 2(0.8106 + 0.4053)
        assert_eq!(cert.r0, 3);
        assert!(cert.tail_sum_bound < 1.0);
    }

    #[test]
    fn column_carpet_hits_immediately() {
        let c = CarpetSpec::new(3, 2, vec![vec![0, 0], vec![1, 0], vec![2, 0]]).unwrap();
        let (v, f) = find_nonvanishing(&c, &BernoulliMeasure::uniform(3), 1, 0.5, 1e-9).unwrap();
        assert_eq!(v.components(), &[0, 1]);
        assert!((f.abs() - 1.0).abs() < 1e-12);
    }
}
