mod common;

use common::*;
use num_bigint::BigUint;
use proptest::prelude::*;
use tubenull::budget::Budget;
use tubenull::cover::{
    count_freq_words, generate_cover, pigeonhole_pair, pigeonhole_threshold, slab_to_tubes, unrank_combination,
    verify_cover, FreqWords, Slab,
};
use tubenull::ifs::{HomIfsSpec, Word};
use tubenull::projection::{project_ifs, Direction};
use tubenull::rational::{rat, Rational};

fn brute_count(m: usize, n: usize, t: usize) -> u64 {
    // odometer over all words, no materialisation
    let mut w = vec![0usize; n];
    let mut count = 0u64;
    loop {
        if w.iter().filter(|&&s| s == 0).count() >= t {
            count += 1;
        }
        let mut k = n;
        loop {
            if k == 0 {
                return count;
            }
            k -= 1;
            if w[k] + 1 < m {
                w[k] += 1;
                break;
            }
            w[k] = 0;
        }
    }
}

/// Words with at least `t` zeros by recursion on the first symbol.
fn dp_count(m: usize, n: usize, t: usize) -> BigUint {
    // c[k] = number of words of the current length with exactly k zeros
    let mut c = vec![BigUint::from(1u32)];
    for _ in 0..n {
        let mut next = vec![BigUint::from(0u32); c.len() + 1];
        for (k, x) in c.iter().enumerate() {
            next[k] += x * BigUint::from(m - 1);
            next[k + 1] += x;
        }
        c = next;
    }
    c.iter().skip(t).sum()
}

#[test]
fn frequency_counts_match_enumeration() {
    for m in 1..=4usize {
        for n in 0..=12usize {
            let brute_ok = (m as u64).pow(n as u32) <= 600_000;
            for t in 0..=n {
                let got = count_freq_words(m, n, t).unwrap().count;
                if brute_ok {
                    assert_eq!(got, BigUint::from(brute_count(m, n, t)), "m={m} n={n} t={t}");
                }
                assert_eq!(got, dp_count(m, n, t), "m={m} n={n} t={t}");
            }
        }
    }
}

#[test]
fn frequency_stream_is_the_filtered_word_set() {
    for (m, n, sym, t) in [(3, 6, 1, 3), (4, 5, 3, 2), (2, 8, 0, 5), (3, 4, 2, 0)] {
        let mut got: Vec<Vec<usize>> = FreqWords::new(m, n, sym, t).unwrap().collect();
        let len = got.len();
        got.sort();
        got.dedup();
        assert_eq!(got.len(), len, "duplicates in stream");
        let want: Vec<Vec<usize>> = all_words(m, n)
            .into_iter()
            .filter(|w| w.iter().filter(|&&s| s == sym).count() >= t)
            .collect();
        assert_eq!(got, want);
    }
}

#[test]
fn unranking_enumerates_every_subset_once() {
    for n in 0..=9usize {
        for k in 0..=n {
            let mut want: Vec<Vec<usize>> = (0u32..1 << n)
                .filter(|mask| mask.count_ones() as usize == k)
                .map(|mask| (0..n).filter(|&i| mask >> i & 1 == 1).collect())
                .collect();
            want.sort();
            let got: Vec<Vec<usize>> = (0..want.len() as u128).map(|r| unrank_combination(n, k, r)).collect();
            assert_eq!(got, want, "n={n} k={k}");
        }
    }
}

#[test]
fn pigeonhole_holds_exhaustively() {
    for m in 3..=5usize {
        for n in 1..=7usize {
            let t = pigeonhole_threshold(n, m);
            for w in all_words(m, n) {
                let ((i, j), c) = pigeonhole_pair(&Word(w.clone()), m).unwrap();
                let direct = w.iter().filter(|&&s| s == i || s == j).count();
                assert_eq!(c, direct);
                assert!(c >= t, "m={m} n={n} w={w:?}");
            }
        }
    }
}

fn check_cover(f: &HomIfsSpec, n: usize) {
    let cover = generate_cover(f, n, 0.9, Budget::default()).unwrap();
    let rep = verify_cover(f, &cover, n, Budget::default()).unwrap();
    assert!(rep.passed, "witness {:?}", rep.witness);
    assert_eq!(rep.words_checked, (f.len() as u128).pow(n as u32));
    // independent oracle: every parent cylinder's projected hull lies in a slab
    for w in all_words(f.len(), n) {
        let w = Word(w);
        let covered = cover.groups.iter().any(|g| {
            let p = project_ifs(f, &g.direction).unwrap();
            let (a, b) = p.cylinder_interval(&p.reduce_word(&w));
            g.slabs.iter().any(|s| s.contains_interval(&a, &b))
        });
        assert!(covered, "{w} uncovered");
    }
}

#[test]
fn covers_are_sound() {
    for n in 1..=5 {
        check_cover(&three_maps(), n);
        check_cover(&four_corners(), n.min(4));
        check_cover(&spatial_three(), n);
    }
}

#[test]
fn merged_slabs_have_the_same_union_as_the_cylinders() {
    let f = three_maps();
    for n in [3, 5, 6] {
        let cover = generate_cover(&f, n, 0.9, Budget::default()).unwrap();
        for g in &cover.groups {
            let p = project_ifs(&f, &g.direction).unwrap();
            let t = cover.threshold;
            let mut raw: Vec<(Rational, Rational)> = all_words(p.len(), n)
                .into_iter()
                .filter(|w| g.designated.iter().any(|&c| w.iter().filter(|&&s| s == c).count() >= t))
                .map(|w| p.cylinder_interval(&Word(w)))
                .collect();
            raw.sort();
            // sweep the raw intervals into maximal connected runs
            let mut runs: Vec<(Rational, Rational)> = Vec::new();
            for (a, b) in raw {
                match runs.last_mut() {
                    Some(last) if a <= last.1 => {
                        if b > last.1 {
                            last.1 = b;
                        }
                    }
                    _ => runs.push((a, b)),
                }
            }
            let slabs: Vec<(Rational, Rational)> = g.slabs.iter().map(|s| (s.lo.clone(), s.hi.clone())).collect();
            assert_eq!(slabs, runs, "direction {}", g.direction);
        }
    }
}

#[test]
fn shrinking_any_essential_slab_is_caught() {
    let f = three_maps();
    let cover = generate_cover(&f, 5, 0.9, Budget::default()).unwrap();
    let mut caught = 0;
    for gi in 0..cover.groups.len() {
        for si in 0..cover.groups[gi].slabs.len() {
            let mut bad = cover.clone();
            let s = &mut bad.groups[gi].slabs[si];
            let eps = (&s.hi - &s.lo) / Rational::from_integer(1000.into());
            if eps == rat(0, 1) {
                continue;
            }
            s.hi = &s.hi - eps;
            let rep = verify_cover(&f, &bad, 5, Budget::default()).unwrap();
            if !rep.passed {
                caught += 1;
                // the witness really is uncovered
                let w = rep.witness.unwrap();
                let uncovered = bad.groups.iter().all(|g| {
                    let p = project_ifs(&f, &g.direction).unwrap();
                    let (a, b) = p.cylinder_interval(&p.reduce_word(&w));
                    !g.slabs.iter().any(|s| s.contains_interval(&a, &b))
                });
                assert!(uncovered);
            }
        }
    }
    assert!(caught > 0);
}

#[test]
fn weights_decrease_with_depth() {
    let f = three_maps();
    let w: Vec<f64> = [4, 6, 8]
        .iter()
        .map(|&n| generate_cover(&f, n, 0.95, Budget::default()).unwrap().total_weight)
        .collect();
    assert!(w[0] > w[1] && w[1] > w[2], "{w:?}");
}

fn slab_3d() -> impl Strategy<Value = Slab> {
    ((0i64..3, -2i64..3, 1i64..3), 0i64..5, 1i64..40).prop_map(|((a, b, c), lo, width)| {
        let v = Direction::normalize(vec![a, b, c]).unwrap();
        Slab::new(v, rat(lo, 4), rat(lo, 4) + rat(width, 100)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tubes_cover_their_slab(slab in slab_3d(), y in prop::array::uniform3(0.0f64..1.0), t in 0.0f64..1.0) {
        let tubes = slab_to_tubes(&slab, 3).unwrap();
        let v: Vec<f64> = slab.direction.components().iter().map(|&x| x as f64).collect();
        let n2: f64 = v.iter().map(|x| x * x).sum();
        let lo = tubenull::rational::to_f64(&slab.lo);
        let hi = tubenull::rational::to_f64(&slab.hi);
        let target = lo + t * (hi - lo);
        let vy: f64 = v.iter().zip(&y).map(|(a, b)| a * b).sum();
        let x: Vec<f64> = y.iter().zip(&v).map(|(yi, vi)| yi + (target - vy) / n2 * vi).collect();
        prop_assume!(x.iter().all(|&c| (0.0..=1.0).contains(&c)));
        prop_assert!(tubes.locate(&x).is_some(), "{x:?} not in any tube");
        // the count is the product of ceil(L_k / w) over the grid axes
        let expected: usize = tubes.grid.iter().map(|g| g.1).product();
        prop_assert_eq!(tubes.len(), expected);
    }
}
