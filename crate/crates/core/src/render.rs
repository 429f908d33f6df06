//! Raster (PNG) and vector (SVG) pictures of planar self-similar sets.
//!
//! Depth-`n` cylinders are drawn as images `f_w(P)` of the convex hull `P`
//! of the attractor, which contains every cylinder of the set. A pixel is
//! filled when its center lies in a cylinder; the tests are done in exact
//! arithmetic on doubled pixel coordinates, so output is deterministic.

use std::fmt::Write as _;
use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::budget::Budget;
use crate::cover::{Slab, TubeCover};
use crate::error::{Error, Result};
use crate::ifs::{HomIfsSpec, Word};
use crate::rational::{pow, to_f64, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ColorScheme {
    /// Black set on white.
    #[default]
    Mono,
    /// White set on black.
    Inverted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderConfig {
    /// Pixels per unit length.
    pub resolution: u32,
    pub depth: usize,
    pub scheme: ColorScheme,
    pub budget: Budget,
}

impl RenderConfig {
    pub fn new(resolution: u32, depth: usize) -> Result<Self> {
        if resolution == 0 {
            return Err(Error::arg("resolution must be >= 1"));
        }
        Ok(RenderConfig {
            resolution,
            depth,
            scheme: ColorScheme::Mono,
            budget: Budget::default(),
        })
    }
}

pub const EMPTY: u8 = 0;
pub const SET: u8 = 1;
pub const SLAB: u8 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    pub width: u32,
    pub height: u32,
    /// Row-major from the top row; bit `SET` marks cylinder pixels, bit
    /// `SLAB` marks pixels inside an overlay slab.
    pub pixels: Vec<u8>,
}

impl Raster {
    pub fn get(&self, x: u32, y: u32) -> u8 {
        self.pixels[(y * self.width + x) as usize]
    }

    pub fn count(&self, flag: u8) -> usize {
        self.pixels.iter().filter(|&&p| p & flag != 0).count()
    }

    pub fn to_rgb(&self, scheme: ColorScheme) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.pixels.len() * 3);
        for &p in &self.pixels {
            let rgb: [u8; 3] = match (scheme, p & SET != 0, p & SLAB != 0) {
                (ColorScheme::Mono, true, false) => [0, 0, 0],
                (ColorScheme::Mono, false, false) => [255, 255, 255],
                (ColorScheme::Inverted, true, false) => [255, 255, 255],
                (ColorScheme::Inverted, false, false) => [0, 0, 0],
                (_, true, true) => [160, 0, 0],
                (_, false, true) => [255, 190, 190],
            };
            out.extend_from_slice(&rgb);
        }
        out
    }
}

type Point = (Rational, Rational);

fn cross(o: &Point, a: &Point, b: &Point) -> Rational {
    (&a.0 - &o.0) * (&b.1 - &o.1) - (&a.1 - &o.1) * (&b.0 - &o.0)
}

/// Counter-clockwise hull, collinear points dropped.
fn convex_hull(mut pts: Vec<Point>) -> Vec<Point> {
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= Rational::zero() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= Rational::zero() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Convex hull of the attractor: the hull of the fixed points.
pub fn attractor_hull(ifs: &HomIfsSpec) -> Result<Vec<Point>> {
    if ifs.dim() != 2 {
        return Err(Error::arg("rendering needs a planar IFS"));
    }
    let k = Rational::one() - ifs.ratio();
    Ok(convex_hull(
        ifs.translations()
            .iter()
            .map(|t| (&t[0] / &k, &t[1] / &k))
            .collect(),
    ))
}

/// Integer inward normal and offset of each hull edge: `<n, x> >= c`.
fn edge_constraints(hull: &[Point]) -> Vec<([BigInt; 2], Rational)> {
    let m = hull.len();
    (0..m)
        .map(|i| {
            let (a, b) = (&hull[i], &hull[(i + 1) % m]);
            // inward normal of a counter-clockwise edge is (-dy, dx)
            let nx = -(&b.1 - &a.1);
            let ny = &b.0 - &a.0;
            let den = nx.denom().lcm(ny.denom());
            let ix = (nx * Rational::from_integer(den.clone())).to_integer();
            let iy = (ny * Rational::from_integer(den)).to_integer();
            let c = Rational::from_integer(ix.clone()) * &a.0 + Rational::from_integer(iy.clone()) * &a.1;
            ([ix, iy], c)
        })
        .collect()
}

struct Frame {
    origin: Point,
    res: Rational,
    width: u32,
    height: u32,
}

impl Frame {
    fn new(hull: &[Point], resolution: u32) -> Result<Self> {
        let xmin = hull.iter().map(|p| &p.0).min().unwrap().clone();
        let xmax = hull.iter().map(|p| &p.0).max().unwrap().clone();
        let ymin = hull.iter().map(|p| &p.1).min().unwrap().clone();
        let ymax = hull.iter().map(|p| &p.1).max().unwrap().clone();
        let res = Rational::from_integer(BigInt::from(resolution));
        let dim = |lo: &Rational, hi: &Rational| -> Result<u32> {
            ((hi - lo) * &res)
                .ceil()
                .to_integer()
                .to_u32()
                .filter(|&w| w <= 1 << 14)
                .map(|w| w.max(1))
                .ok_or_else(|| Error::arg("image too large"))
        };
        Ok(Frame {
            width: dim(&xmin, &xmax)?,
            height: dim(&ymin, &ymax)?,
            origin: (xmin, ymin),
            res,
        })
    }

    /// Doubled pixel coordinates: center of pixel `i` is `2i + 1`, so
    /// `<n, x> >= c` becomes `<n, (2i+1, 2j+1)> >= 2 res (c - <n, origin>)`.
    fn doubled_threshold(&self, n: &[BigInt; 2], c: &Rational) -> Rational {
        let no = Rational::from_integer(n[0].clone()) * &self.origin.0
            + Rational::from_integer(n[1].clone()) * &self.origin.1;
        (c - no) * &self.res * Rational::from_integer(BigInt::from(2))
    }

    /// Pixel indices whose centers lie in `[lo, hi]` along an axis.
    fn pixel_range(&self, lo: &Rational, hi: &Rational, origin: &Rational, size: u32) -> Option<(u32, u32)> {
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let a = ((lo - origin) * &self.res - &half).ceil().to_integer();
        let b = ((hi - origin) * &self.res - &half).floor().to_integer();
        let a = a.max(BigInt::zero());
        let b = b.min(BigInt::from(size) - 1);
        if a > b {
            None
        } else {
            Some((a.to_u32()?, b.to_u32()?))
        }
    }
}

fn to_i128(x: &BigInt) -> Result<i128> {
    x.to_i128().ok_or(Error::Overflow { depth: 0 })
}

/// Cylinder pixels at the configured depth, with an optional slab overlay.
pub fn rasterize(ifs: &HomIfsSpec, config: &RenderConfig, overlay: Option<&TubeCover>) -> Result<Raster> {
    let hull = attractor_hull(ifs)?;
    let frame = Frame::new(&hull, config.resolution)?;
    let (w, h) = (frame.width, frame.height);
    let mut pixels = vec![EMPTY; (w as usize) * (h as usize)];
    config.budget.check_words(ifs.len(), config.depth)?;
    config
        .budget
        .check((ifs.len() as u128).saturating_pow(config.depth as u32).saturating_add(w as u128 * h as u128))?;

    if hull.len() >= 3 {
        let edges = edge_constraints(&hull);
        let scale = pow(ifs.ratio(), config.depth);
        let pts_x: Vec<&Rational> = hull.iter().map(|p| &p.0).collect();
        let pts_y: Vec<&Rational> = hull.iter().map(|p| &p.1).collect();
        let (bx0, bx1) = (*pts_x.iter().min().unwrap(), *pts_x.iter().max().unwrap());
        let (by0, by1) = (*pts_y.iter().min().unwrap(), *pts_y.iter().max().unwrap());
        let normals: Vec<[i128; 2]> = edges
            .iter()
            .map(|(n, _)| Ok([to_i128(&n[0])?, to_i128(&n[1])?]))
            .collect::<Result<_>>()?;
        for_each_word(ifs.len(), config.depth, |word| {
            let off = ifs.word_offset(word);
            let rx = frame.pixel_range(&(&off[0] + &scale * bx0), &(&off[0] + &scale * bx1), &frame.origin.0, w);
            let ry = frame.pixel_range(&(&off[1] + &scale * by0), &(&off[1] + &scale * by1), &frame.origin.1, h);
            let (Some((x0, x1)), Some((y0, y1))) = (rx, ry) else {
                return Ok(());
            };
            let thresholds: Vec<i128> = edges
                .iter()
                .map(|(n, c)| {
                    let shift = Rational::from_integer(n[0].clone()) * &off[0]
                        + Rational::from_integer(n[1].clone()) * &off[1];
                    to_i128(&frame.doubled_threshold(n, &(shift + &scale * c)).ceil().to_integer())
                })
                .collect::<Result<_>>()?;
            for py in y0..=y1 {
                for px in x0..=x1 {
                    let (cx, cy) = (2 * px as i128 + 1, 2 * py as i128 + 1);
                    if normals
                        .iter()
                        .zip(&thresholds)
                        .all(|(n, &t)| n[0] * cx + n[1] * cy >= t)
                    {
                        pixels[((h - 1 - py) * w + px) as usize] |= SET;
                    }
                }
            }
            Ok(())
        })?;
    }

    if let Some(cover) = overlay {
        for slab in cover.slabs() {
            if slab.direction.dim() != 2 {
                return Err(Error::arg("overlay slabs must be planar"));
            }
            let v = slab.direction.components();
            let n = [BigInt::from(v[0]), BigInt::from(v[1])];
            let lo = to_i128(&frame.doubled_threshold(&n, &slab.lo).ceil().to_integer())?;
            let hi = to_i128(&frame.doubled_threshold(&n, &slab.hi).floor().to_integer())?;
            let (a, b) = (v[0] as i128, v[1] as i128);
            for py in 0..h {
                for px in 0..w {
                    let k = a * (2 * px as i128 + 1) + b * (2 * py as i128 + 1);
                    if lo <= k && k <= hi {
                        pixels[((h - 1 - py) * w + px) as usize] |= SLAB;
                    }
                }
            }
        }
    }
    Ok(Raster {
        width: w,
        height: h,
        pixels,
    })
}

fn for_each_word(m: usize, n: usize, mut f: impl FnMut(&Word) -> Result<()>) -> Result<()> {
    let mut word = Word(vec![0; n]);
    loop {
        f(&word)?;
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            if word.0[k] + 1 < m {
                word.0[k] += 1;
                break;
            }
            word.0[k] = 0;
        }
    }
}

pub fn write_png(raster: &Raster, scheme: ColorScheme, path: &Path) -> Result<()> {
    let file = BufWriter::new(File::create(path)?);
    let mut enc = png::Encoder::new(file, raster.width, raster.height);
    enc.set_color(png::ColorType::Rgb);
    enc.set_depth(png::BitDepth::Eight);
    let mut writer = enc
        .write_header()
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    writer
        .write_image_data(&raster.to_rgb(scheme))
        .map_err(|e| Error::Io(std::io::Error::other(e)))?;
    writer.finish().map_err(|e| Error::Io(std::io::Error::other(e)))?;
    Ok(())
}

pub fn render_png(ifs: &HomIfsSpec, config: &RenderConfig, overlay: Option<&TubeCover>, path: &Path) -> Result<Raster> {
    let raster = rasterize(ifs, config, overlay)?;
    write_png(&raster, config.scheme, path)?;
    Ok(raster)
}

/// Clips the strip `lo <= <v, x> <= hi` to a rectangle.
fn clip_slab(slab: &Slab, rect: [f64; 4]) -> Vec<(f64, f64)> {
    let [x0, y0, x1, y1] = rect;
    let v = slab.direction.components();
    let (a, b) = (v[0] as f64, v[1] as f64);
    let mut poly = vec![(x0, y0), (x1, y0), (x1, y1), (x0, y1)];
    for (sign, bound) in [(1.0, to_f64(&slab.lo)), (-1.0, -to_f64(&slab.hi))] {
        let f = |p: &(f64, f64)| sign * (a * p.0 + b * p.1) - bound;
        let mut out = Vec::new();
        for i in 0..poly.len() {
            let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
            let (fp, fq) = (f(&p), f(&q));
            if fp >= 0.0 {
                out.push(p);
            }
            if (fp >= 0.0) != (fq >= 0.0) {
                let t = fp / (fp - fq);
                out.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
            }
        }
        poly = out;
    }
    poly
}

pub fn render_svg(ifs: &HomIfsSpec, config: &RenderConfig, overlay: Option<&TubeCover>) -> Result<String> {
    let hull = attractor_hull(ifs)?;
    let frame = Frame::new(&hull, config.resolution)?;
    config.budget.check_words(ifs.len(), config.depth)?;
    let res = config.resolution as f64;
    let (ox, oy) = (to_f64(&frame.origin.0), to_f64(&frame.origin.1));
    let (w, h) = (frame.width, frame.height);
    let tx = |x: f64, y: f64| ((x - ox) * res, h as f64 - (y - oy) * res);
    let (fg, bg) = match config.scheme {
        ColorScheme::Mono => ("#000000", "#ffffff"),
        ColorScheme::Inverted => ("#ffffff", "#000000"),
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    );
    let _ = writeln!(s, "<rect width=\"{w}\" height=\"{h}\" fill=\"{bg}\"/>");
    let _ = writeln!(s, "<g fill=\"{fg}\" stroke=\"none\">");
    let scale = pow(ifs.ratio(), config.depth);
    for_each_word(ifs.len(), config.depth, |word| {
        let off = ifs.word_offset(word);
        let pts: Vec<String> = hull
            .iter()
            .map(|p| {
                let (x, y) = tx(to_f64(&(&off[0] + &scale * &p.0)), to_f64(&(&off[1] + &scale * &p.1)));
                format!("{x:.4},{y:.4}")
            })
            .collect();
        let _ = writeln!(s, "<polygon points=\"{}\"/>", pts.join(" "));
        Ok(())
    })?;
    let _ = writeln!(s, "</g>");
    if let Some(cover) = overlay {
        let rect = [ox, oy, ox + w as f64 / res, oy + h as f64 / res];
        let _ = writeln!(s, "<g fill=\"#ff0000\" fill-opacity=\"0.25\" stroke=\"#a00000\" stroke-width=\"0.5\">");
        for slab in cover.slabs() {
            let poly = clip_slab(slab, rect);
            if poly.len() < 2 {
                continue;
            }
            let pts: Vec<String> = poly
                .iter()
                .map(|&(x, y)| {
                    let (x, y) = tx(x, y);
                    format!("{x:.4},{y:.4}")
                })
                .collect();
            let _ = writeln!(s, "<polygon points=\"{}\"/>", pts.join(" "));
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Pixels where the set is drawn but no slab is: empty when the overlay
/// covers the rendered cylinders.
pub fn uncovered_pixels(raster: &Raster) -> usize {
    raster
        .pixels
        .iter()
        .filter(|&&p| p & SET != 0 && p & SLAB == 0)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carpet::sierpinski_carpet;

    #[test]
    fn depth_zero_is_a_solid_square() {
        let f = sierpinski_carpet().to_ifs();
        let r = rasterize(&f, &RenderConfig::new(27, 0).unwrap(), None).unwrap();
        assert_eq!((r.width, r.height), (27, 27));
        assert_eq!(r.count(SET), 27 * 27);
    }

    #[test]
    fn sierpinski_depth_one_has_a_hole() {
        let f = sierpinski_carpet().to_ifs();
        let r = rasterize(&f, &RenderConfig::new(9, 1).unwrap(), None).unwrap();
        assert_eq!(r.count(SET), 81 - 9);
        assert_eq!(r.get(4, 4), EMPTY);
        assert_eq!(r.get(0, 0), SET);
    }

    #[test]
    fn hull_of_three_corners_is_a_triangle() {
        use crate::rational::{int, rat};
        let f = HomIfsSpec::new(
            rat(3, 10),
            vec![vec![int(0), int(0)], vec![int(1), int(0)], vec![int(0), int(1)]],
        )
        .unwrap();
        assert_eq!(attractor_hull(&f).unwrap().len(), 3);
    }
}
