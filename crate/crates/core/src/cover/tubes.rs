//! Slicing a slab into width-`w` tubes inside `[0,1]^d`.
//!
//! In the plane a slab already is a tube. In dimension `d >= 3` the slab's
//! hyperplane gets an orthonormal basis `e_1..e_(d-1)`; tubes run along
//! `e_1` and are square prisms of side `w` over a grid in `e_2..e_(d-1)`.

use crate::budget::Budget;
use crate::cover::Slab;
use crate::error::{Error, Result};
use crate::rational::to_f64;

#[derive(Debug, Clone, PartialEq)]
pub struct Tube {
    /// Lower corner of the cross-section, one entry per grid axis.
    pub corner: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TubeSet {
    pub slab: Slab,
    pub dim: usize,
    pub side: f64,
    /// Orthonormal basis of `v^perp`; the first vector is the long axis.
    pub axes: Vec<Vec<f64>>,
    /// Grid origin and cell count along `axes[1..]`.
    pub grid: Vec<(f64, usize)>,
    pub tubes: Vec<Tube>,
}

impl TubeSet {
    pub fn len(&self) -> usize {
        self.tubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tubes.is_empty()
    }

    fn in_slab(&self, x: &[f64], eps: f64) -> bool {
        let v = self.slab.direction.components();
        let t: f64 = v.iter().zip(x).map(|(&a, b)| a as f64 * b).sum();
        t >= to_f64(&self.slab.lo) - eps && t <= to_f64(&self.slab.hi) + eps
    }

    /// Index of a tube containing `x`, if any.
    pub fn locate(&self, x: &[f64]) -> Option<usize> {
        let eps = 1e-12;
        if !self.in_slab(x, eps) {
            return None;
        }
        self.tubes.iter().position(|tube| {
            tube.corner.iter().enumerate().all(|(k, &c)| {
                let t: f64 = self.axes[k + 1].iter().zip(x).map(|(a, b)| a * b).sum();
                t >= c - eps && t <= c + self.side + eps
            })
        })
    }
}

fn orthonormal_complement(v: &[f64]) -> Vec<Vec<f64>> {
    let d = v.len();
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut basis: Vec<Vec<f64>> = vec![v.iter().map(|x| x / n).collect()];
    for j in 0..d {
        let mut u = vec![0.0; d];
        u[j] = 1.0;
        for b in &basis {
            let c: f64 = b.iter().zip(&u).map(|(x, y)| x * y).sum();
            u.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-9 {
            basis.push(u.into_iter().map(|x| x / norm).collect());
        }
        if basis.len() == d {
            break;
        }
    }
    basis.remove(0);
    basis
}

pub fn slab_to_tubes(slab: &Slab, dim: usize) -> Result<TubeSet> {
    if slab.direction.dim() != dim {
        return Err(Error::arg("slab direction does not match the dimension"));
    }
    let v: Vec<f64> = slab.direction.components().iter().map(|&x| x as f64).collect();
    let axes = orthonormal_complement(&v);
    let w = slab.width;
    let single = |axes| TubeSet {
        slab: slab.clone(),
        dim,
        side: w,
        axes,
        grid: Vec::new(),
        tubes: vec![Tube { corner: Vec::new() }],
    };
    if dim <= 2 || w >= (dim as f64).sqrt() {
        return Ok(single(axes));
    }
    if w <= 0.0 {
        return Err(Error::arg("a zero-width slab cannot be sliced into tubes"));
    }
    // extent of [0,1]^d along e_k is [sum min(0, e_kj), sum max(0, e_kj)]
    let grid: Vec<(f64, usize)> = axes[1..]
        .iter()
        .map(|e| {
            let lo: f64 = e.iter().map(|&x| x.min(0.0)).sum();
            let len: f64 = e.iter().map(|x| x.abs()).sum();
            (lo, ((len / w).ceil() as usize).max(1))
        })
        .collect();
    let total = grid
        .iter()
        .fold(1u128, |acc, &(_, c)| acc.saturating_mul(c as u128));
    Budget::default().check(total)?;
    let mut tubes = Vec::with_capacity(total as usize);
    let mut idx = vec![0usize; grid.len()];
    loop {
        tubes.push(Tube {
            corner: idx
                .iter()
                .zip(&grid)
                .map(|(&i, &(lo, _))| lo + i as f64 * w)
                .collect(),
        });
        let mut k = grid.len();
        loop {
            if k == 0 {
                return Ok(TubeSet {
                    slab: slab.clone(),
                    dim,
                    side: w,
                    axes,
                    grid,
                    tubes,
                });
            }
            k -= 1;
            if idx[k] + 1 < grid[k].1 {
                idx[k] += 1;
                break;
            }
            idx[k] = 0;
        }
    }
}
