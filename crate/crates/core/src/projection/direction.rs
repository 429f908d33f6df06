use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Primitive integer direction with its first nonzero entry positive.
/// `P_v(x) = <x, v>`; `v` is not rescaled to unit length.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction(Vec<i64>);

impl Direction {
    /// Strict constructor: rejects zero, non-primitive and negatively
    /// oriented vectors.
    pub fn new(v: Vec<i64>) -> Result<Self> {
        let n = Self::normalize(v.clone())?;
        if n.0 != v {
            return Err(Error::arg(format!(
                "direction {v:?} is not primitive and sign-normalized (use {:?})",
                n.0
            )));
        }
        Ok(n)
    }

    /// Divides out the gcd and flips the sign so the first nonzero entry is
    /// positive.
    pub fn normalize(mut v: Vec<i64>) -> Result<Self> {
        if v.is_empty() || v.iter().all(|&x| x == 0) {
            return Err(Error::arg("direction must be nonzero"));
        }
        let g = v.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        let first = *v.iter().find(|&&x| x != 0).unwrap();
        let sign = if first < 0 { -1 } else { 1 };
        for x in v.iter_mut() {
            *x = sign * *x / g;
        }
        Ok(Direction(v))
    }

    pub fn components(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm_sq(&self) -> i128 {
        self.0.iter().map(|&x| (x as i128) * (x as i128)).sum()
    }

    pub fn norm(&self) -> f64 {
        (self.norm_sq() as f64).sqrt()
    }

    pub fn dot(&self, x: &[Rational]) -> Rational {
        self.0
            .iter()
            .zip(x)
            .fold(Rational::zero(), |acc, (&v, xi)| acc + xi * BigInt::from(v))
    }

    pub fn dot_int(&self, x: &[i64]) -> i64 {
        self.0.iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn is_primitive(v: &[i64]) -> bool {
        v.iter().fold(0i64, |acc, &x| acc.gcd(&x)) == 1
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl std::str::FromStr for Direction {
    type Err = Error;

    /// `"1,1"`, `"(1,-2)"`; normalizes.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let v: std::result::Result<Vec<i64>, _> =
            t.split(',').map(|p| p.trim().parse::<i64>()).collect();
        let v = v.map_err(|_| Error::Parse(format!("bad direction {s:?}")))?;
        Direction::normalize(v)
    }
}

/// Primitive sign-normalized `v` with `0 < |v|_2 <= radius`, ordered by
/// Euclidean norm then lexicographically.
pub fn directions_within(dim: usize, radius: u64) -> Vec<Direction> {
    if dim == 0 || radius == 0 {
        return Vec::new();
    }
    let r = radius as i64;
    let r2 = (radius as i128) * (radius as i128);
    let mut out = Vec::new();
    let mut cur = vec![-r; dim];
    loop {
        let n2: i128 = cur.iter().map(|&x| (x as i128) * (x as i128)).sum();
        let first = cur.iter().find(|&&x| x != 0).copied();
        if n2 > 0 && n2 <= r2 && first.is_some_and(|f| f > 0) && Direction::is_primitive(&cur) {
            out.push(Direction(cur.clone()));
        }
        // odometer
        let mut j = dim;
        loop {
            if j == 0 {
                out.sort_by(|a, b| a.norm_sq().cmp(&b.norm_sq()).then_with(|| a.cmp(b)));
                return out;
            }
            j -= 1;
            if cur[j] < r {
                cur[j] += 1;
                break;
            }
            cur[j] = -r;
        }
    }
}

/// Primitive sign-normalized integer vectors with sup-norm at most `bound`.
pub fn directions_sup_norm(dim: usize, bound: i64) -> Vec<Direction> {
    let mut out = Vec::new();
    let mut cur = vec![-bound; dim];
    loop {
        let first = cur.iter().find(|&&x| x != 0).copied();
        if first.is_some_and(|f| f > 0) && Direction::is_primitive(&cur) {
            out.push(Direction(cur.clone()));
        }
        let mut j = dim;
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            if cur[j] < bound {
                cur[j] += 1;
                break;
            }
            cur[j] = -bound;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        assert_eq!(Direction::normalize(vec![-2, 4]).unwrap().0, vec![1, -2]);
        assert_eq!(Direction::normalize(vec![0, -3]).unwrap().0, vec![0, 1]);
        assert!(Direction::normalize(vec![0, 0]).is_err());
        assert!(Direction::new(vec![2, 2]).is_err());
        assert!(Direction::new(vec![-1, 0]).is_err());
        assert_eq!("(1,-1)".parse::<Direction>().unwrap().0, vec![1, -1]);
    }

    #[test]
    fn ball_of_radius_one_and_two() {
        let z1 = directions_within(2, 1);
        assert_eq!(z1, vec![Direction(vec![0, 1]), Direction(vec![1, 0])]);
        let z2 = directions_within(2, 2);
        // (0,1),(1,0),(1,-1),(1,1),(1,-2)? no: |(1,2)|^2 = 5 > 4
        assert_eq!(z2.len(), 4);
        assert_eq!(z2[2], Direction(vec![1, -1]));
    }

    #[test]
    fn sup_norm_count() {
        // primitive vectors in [-1,1]^2 up to sign: (0,1),(1,-1),(1,0),(1,1)
        assert_eq!(directions_sup_norm(2, 1).len(), 4);
    }
}
