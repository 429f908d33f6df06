//! Digit-frequency counting: words in which one designated symbol (or a
//! designated pair) occurs often.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ifs::Word;

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

fn binomial_u128(n: usize, k: usize) -> u128 {
    binomial(n, k).to_u128().unwrap_or(u128::MAX)
}

/// Pair `(i, j)`, `i < j`, with the largest combined count, ties broken
/// lexicographically. The count is at least `ceil(2n/m)`.
pub fn pigeonhole_pair(word: &Word, m: usize) -> Result<((usize, usize), usize)> {
    if m < 2 {
        return Err(Error::arg("alphabet must have at least two symbols"));
    }
    if word.is_empty() {
        return Err(Error::arg("word must be nonempty"));
    }
    let mut counts = vec![0usize; m];
    for &s in word.symbols() {
        if s >= m {
            return Err(Error::arg(format!("symbol {s} out of range")));
        }
        counts[s] += 1;
    }
    let mut best = ((0, 1), counts[0] + counts[1]);
    for i in 0..m {
        for j in i + 1..m {
            let c = counts[i] + counts[j];
            if c > best.1 {
                best = ((i, j), c);
            }
        }
    }
    Ok(best)
}

/// `ceil(2n/m)`.
pub fn pigeonhole_threshold(n: usize, m: usize) -> usize {
    (2 * n).div_ceil(m)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FreqCount {
    pub m_red: usize,
    pub n: usize,
    pub threshold: usize,
    pub count: BigUint,
    /// `(1/n) log2 count`.
    pub exponent: f64,
}

/// Number of length-`n` words over `m_red` symbols in which a designated
/// symbol occurs at least `t` times:
/// `sum_{k >= t} C(n, k) (m_red - 1)^(n - k)`.
pub fn count_freq_words(m_red: usize, n: usize, t: usize) -> Result<FreqCount> {
    if m_red < 1 || t > n {
        return Err(Error::arg("need m_red >= 1 and 0 <= t <= n"));
    }
    let others = BigUint::from(m_red - 1);
    let count: BigUint = (t..=n)
        .map(|k| binomial(n, k) * others.pow((n - k) as u32))
        .sum();
    let exponent = if n == 0 { 0.0 } else { log2_big(&count) / n as f64 };
    Ok(FreqCount {
        m_red,
        n,
        threshold: t,
        count,
        exponent,
    })
}

pub(crate) fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).log2();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().unwrap().log2() + shift as f64
}

/// `rank`-th `k`-subset of `{0..n-1}` in lexicographic order.
pub fn unrank_combination(n: usize, k: usize, mut rank: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut c = 0usize;
    for i in 0..k {
        loop {
            let block = binomial_u128(n - c - 1, k - i - 1);
            if rank >= block {
                rank -= block;
                c += 1;
            } else {
                out.push(c);
                c += 1;
                break;
            }
        }
    }
    out
}

/// Streams every length-`n` word over `m_red` symbols whose count of
/// `symbol` is at least `t`: grouped by exact count `k`, then by the rank of
/// the position set, then by the filling of the remaining positions.
pub struct FreqWords {
    n: usize,
    m_red: usize,
    symbol: usize,
    k: usize,
    rank: u128,
    ranks: u128,
    positions: Vec<bool>,
    fill: Vec<usize>,
    fill_done: bool,
    done: bool,
}

impl FreqWords {
    pub fn new(m_red: usize, n: usize, symbol: usize, t: usize) -> Result<Self> {
        if symbol >= m_red || t > n {
            return Err(Error::arg("bad frequency word parameters"));
        }
        let mut it = FreqWords {
            n,
            m_red,
            symbol,
            k: t,
            rank: 0,
            ranks: binomial_u128(n, t),
            positions: vec![false; n],
            fill: vec![0; n - t],
            fill_done: false,
            done: false,
        };
        if m_red == 1 && t < n {
            // only the all-`symbol` word exists
            it.k = n;
            it.ranks = 1;
            it.fill = Vec::new();
        }
        it.load_positions();
        Ok(it)
    }

    fn load_positions(&mut self) {
        self.positions.iter_mut().for_each(|p| *p = false);
        for p in unrank_combination(self.n, self.k, self.rank) {
            self.positions[p] = true;
        }
        self.fill_done = false;
    }

    fn current(&self) -> Vec<usize> {
        let mut w = Vec::with_capacity(self.n);
        let mut f = self.fill.iter();
        for &is_sym in &self.positions {
            if is_sym {
                w.push(self.symbol);
            } else {
                let x = *f.next().unwrap();
                w.push(if x >= self.symbol { x + 1 } else { x });
            }
        }
        w
    }

    fn advance(&mut self) {
        // odometer over the non-designated positions
        let base = self.m_red - 1;
        for j in (0..self.fill.len()).rev() {
            if self.fill[j] + 1 < base {
                self.fill[j] += 1;
                return;
            }
            self.fill[j] = 0;
        }
        self.rank += 1;
        if self.rank < self.ranks {
            self.load_positions();
            return;
        }
        self.k += 1;
        if self.k > self.n {
            self.done = true;
            return;
        }
        self.rank = 0;
        self.ranks = binomial_u128(self.n, self.k);
        self.fill = vec![0; self.n - self.k];
        self.load_positions();
    }
}

impl Iterator for FreqWords {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let w = self.current();
        self.advance();
        Some(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pigeonhole_examples() {
        assert_eq!(pigeonhole_pair(&Word(vec![0, 1, 2, 3]), 4).unwrap(), ((0, 1), 2));
        assert_eq!(pigeonhole_pair(&Word(vec![0; 5]), 3).unwrap(), ((0, 1), 5));
        assert_eq!(pigeonhole_pair(&Word(vec![0, 1, 0, 2]), 4).unwrap(), ((0, 1), 3));
        assert!(pigeonhole_pair(&Word(vec![]), 3).is_err());
        assert!(pigeonhole_pair(&Word(vec![3]), 3).is_err());
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_freq_words(3, 10, 5).unwrap().count, BigUint::from(12585u32));
        assert_eq!(count_freq_words(3, 10, 0).unwrap().count, BigUint::from(59049u32));
        assert_eq!(count_freq_words(3, 2, 1).unwrap().count, BigUint::from(5u32));
        assert_eq!(count_freq_words(1, 4, 4).unwrap().count, BigUint::from(1u32));
    }

    #[test]
    fn unranking_is_lexicographic() {
        let all: Vec<Vec<usize>> = (0..10).map(|r| unrank_combination(5, 2, r)).collect();
        assert_eq!(all[0], vec![0, 1]);
        assert_eq!(all[3], vec![0, 4]);
        assert_eq!(all[9], vec![3, 4]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn stream_matches_count() {
        for (m, n, t) in [(3, 6, 3), (2, 5, 0), (4, 4, 2), (1, 3, 1)] {
            let words: Vec<_> = FreqWords::new(m, n, 0, t).unwrap().collect();
            let expected = count_freq_words(m, n, t).unwrap().count;
            assert_eq!(BigUint::from(words.len()), expected, "m={m} n={n} t={t}");
            let mut sorted = words.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), words.len());
            assert!(words.iter().all(|w| w.iter().filter(|&&s| s == 0).count() >= t));
        }
    }
}
