//! Homogeneous iterated function systems `x -> r x + t_i` with exact
//! rational data, symbolic words and cylinder boxes.

use std::fmt;

use num_traits::{One, Zero};

use crate::budget::Budget;
use crate::carpet::CarpetSpec;
use crate::error::{Error, Result};
use crate::rational::{pow, Rational};

/// A finite word over an alphabet `{0, .., len-1}`. Symbol `i_1` acts last:
/// `f_w = f_{i_1} o ... o f_{i_n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn new(symbols: Vec<usize>, alphabet: usize) -> Result<Self> {
        if let Some(&s) = symbols.iter().find(|&&s| s >= alphabet) {
            return Err(Error::arg(format!(
                "symbol {s} out of range for alphabet of size {alphabet}"
            )));
        }
        Ok(Word(symbols))
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn prefix(&self, k: usize) -> Word {
        Word(self.0[..k.min(self.0.len())].to_vec())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut s = self.0.clone();
        s.extend_from_slice(&other.0);
        Word(s)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Axis-aligned box with exact rational sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Box {
    pub sides: Vec<(Rational, Rational)>,
}

impl Box {
    pub fn new(sides: Vec<(Rational, Rational)>) -> Result<Self> {
        if sides.iter().any(|(a, b)| a > b) {
            return Err(Error::arg("box side with a > b"));
        }
        Ok(Box { sides })
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn contains_box(&self, other: &Box) -> bool {
        self.sides.len() == other.sides.len()
            && self
                .sides
                .iter()
                .zip(&other.sides)
                .all(|((a, b), (c, d))| a <= c && d <= b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomIfsSpec {
    ratio: Rational,
    translations: Vec<Vec<Rational>>,
}

impl HomIfsSpec {
    pub fn new(ratio: Rational, translations: Vec<Vec<Rational>>) -> Result<Self> {
        if ratio <= Rational::zero() || ratio >= Rational::one() {
            return Err(Error::InvalidIfs("ratio must lie in (0,1)".into()));
        }
        Self::with_unchecked_count(ratio, translations, 2)
    }

    /// Like `new` but allows a single map (degenerate attractor).
    pub(crate) fn with_unchecked_count(
        ratio: Rational,
        translations: Vec<Vec<Rational>>,
        min_maps: usize,
    ) -> Result<Self> {
        if translations.len() < min_maps {
            return Err(Error::InvalidIfs(format!(
                "need at least {min_maps} maps, got {}",
                translations.len()
            )));
        }
        let d = translations[0].len();
        if d == 0 || translations.iter().any(|t| t.len() != d) {
            return Err(Error::InvalidIfs("translations must share one positive dimension".into()));
        }
        let mut sorted: Vec<&Vec<Rational>> = translations.iter().collect();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidIfs("translations must be pairwise distinct".into()));
        }
        Ok(HomIfsSpec {
            ratio,
            translations,
        })
    }

    pub fn ratio(&self) -> &Rational {
        &self.ratio
    }

    pub fn translations(&self) -> &[Vec<Rational>] {
        &self.translations
    }

    pub fn len(&self) -> usize {
        self.translations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.translations.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.translations[0].len()
    }

    /// `f_w(0) = sum_k r^(k-1) t_{i_k}`.
    pub fn word_offset(&self, w: &Word) -> Vec<Rational> {
        let mut acc = vec![Rational::zero(); self.dim()];
        let mut scale = Rational::one();
        for &s in w.symbols() {
            for (a, t) in acc.iter_mut().zip(&self.translations[s]) {
                *a += &scale * t;
            }
            scale *= &self.ratio;
        }
        acc
    }

    /// The IFS of all compositions `f_w`, `|w| = m`, lexicographic in `w`.
    pub fn iterate(&self, m: usize, budget: Budget) -> Result<HomIfsSpec> {
        if m == 0 {
            return Err(Error::arg("iteration level must be >= 1"));
        }
        budget.check_words(self.len(), m)?;
        let d = self.dim();
        let mut level: Vec<Vec<Rational>> = vec![vec![Rational::zero(); d]];
        let mut scale = Rational::one();
        for _ in 0..m {
            let mut next = Vec::with_capacity(level.len() * self.len());
            for base in &level {
                for t in &self.translations {
                    next.push(
                        base.iter()
                            .zip(t)
                            .map(|(b, ti)| b + &scale * ti)
                            .collect(),
                    );
                }
            }
            level = next;
            scale *= &self.ratio;
        }
        Ok(HomIfsSpec {
            ratio: pow(&self.ratio, m),
            translations: level,
        })
    }

    /// Exact convex-hull box of the attractor: per axis
    /// `[min_i t_ij / (1-r), max_i t_ij / (1-r)]`.
    pub fn hull_box(&self) -> Box {
        let denom = Rational::one() - &self.ratio;
        let sides = (0..self.dim())
            .map(|j| {
                let col = self.translations.iter().map(|t| &t[j]);
                let lo = col.clone().min().unwrap().clone();
                let hi = col.max().unwrap().clone();
                (lo / &denom, hi / &denom)
            })
            .collect();
        Box { sides }
    }

    /// Box of `f_w(hull)`.
    pub fn cylinder_box(&self, w: &Word) -> Result<Box> {
        Word::new(w.0.clone(), self.len())?;
        let off = self.word_offset(w);
        let scale = pow(&self.ratio, w.len());
        let hull = self.hull_box();
        let sides = hull
            .sides
            .iter()
            .zip(off)
            .map(|((lo, hi), o)| (&o + &scale * lo, &o + &scale * hi))
            .collect();
        Ok(Box { sides })
    }

    /// Recognises the `r = 1/N`, `t_i = i/N` form with integer digits in
    /// `[0, N-1]`, returning the carpet it came from.
    pub fn as_carpet(&self) -> Option<CarpetSpec> {
        use num_traits::ToPrimitive;
        if !self.ratio.numer().is_one() {
            return None;
        }
        let base = self.ratio.denom().to_u64()?;
        let n = Rational::from_integer(self.ratio.denom().clone());
        let digits: Option<Vec<Vec<u64>>> = self
            .translations
            .iter()
            .map(|t| {
                t.iter()
                    .map(|x| {
                        let y = x * &n;
                        if y.is_integer() {
                            y.to_integer().to_u64().filter(|&v| v < base)
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect();
        CarpetSpec::new(base, self.dim(), digits?).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
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

    #[test]
    fn rejects_bad_ratio_and_duplicates() {
        assert!(HomIfsSpec::new(int(1), vec![vec![int(0)], vec![int(1)]]).is_err());
        assert!(HomIfsSpec::new(rat(1, 2), vec![vec![int(0)], vec![int(0)]]).is_err());
        assert!(HomIfsSpec::new(rat(1, 2), vec![vec![int(0)]]).is_err());
    }

    #[test]
    fn iterate_identity_and_size() {
        let f = tri();
        assert_eq!(f.iterate(1, Budget::default()).unwrap(), f);
        let g = f.iterate(3, Budget::default()).unwrap();
        assert_eq!(g.len(), 27);
        assert_eq!(g.ratio(), &rat(27, 1000));
        assert!(f.iterate(3, Budget::new(26)).is_err());
    }

    #[test]
    fn hull_box_fixed_point() {
        let h = tri().hull_box();
        assert_eq!(h.sides[0], (int(0), rat(10, 7)));
    }

    #[test]
    fn word_validation() {
        assert!(Word::new(vec![0, 3], 3).is_err());
        assert!(tri().cylinder_box(&Word(vec![5])).is_err());
    }
}
