#![allow(dead_code)]

use tubenull::ifs::HomIfsSpec;
use tubenull::rational::{int, rat, Rational};

/// Every word of length `n` over `m` symbols, lexicographic.
pub fn all_words(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..m).map(move |s| {
                    let mut x = w.clone();
                    x.push(s);
                    x
                })
            })
            .collect();
    }
    out
}

/// `sum_k r^(k-1) t_{w_k}`, straight from the definition.
pub fn naive_offset(ratio: &Rational, t: &[Vec<Rational>], w: &[usize]) -> Vec<Rational> {
    let d = t[0].len();
    (0..d)
        .map(|j| {
            w.iter()
                .enumerate()
                .map(|(k, &s)| tubenull::rational::pow(ratio, k) * &t[s][j])
                .sum()
        })
        .collect()
}

pub fn three_maps() -> HomIfsSpec {
    HomIfsSpec::new(
        rat(3, 10),
        vec![vec![int(0), int(0)], vec![int(1), int(0)], vec![int(0), int(1)]],
    )
    .unwrap()
}

pub fn four_corners() -> HomIfsSpec {
    HomIfsSpec::new(
        rat(1, 4),
        vec![
            vec![int(0), int(0)],
            vec![int(1), int(0)],
            vec![int(0), int(1)],
            vec![int(1), int(1)],
        ],
    )
    .unwrap()
}

pub fn spatial_three() -> HomIfsSpec {
    HomIfsSpec::new(
        rat(1, 3),
        vec![
            vec![int(0), int(0), int(0)],
            vec![int(1), int(0), int(0)],
            vec![int(0), int(1), int(1)],
        ],
    )
    .unwrap()
}

pub fn dot(v: &[i64], x: &[Rational]) -> Rational {
    v.iter().zip(x).map(|(&a, b)| Rational::from_integer(a.into()) * b).sum()
}
