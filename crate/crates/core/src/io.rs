//! Versioned JSON documents for specs and reports.
//!
//! Every document carries a `schema` tag. Exact quantities are written as
//! `"p/q"` strings; floats use shortest round-trip formatting, so
//! `parse(print(x)) == x` for every document type.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::boxcount::{BoxCountReport, BoxCountRow};
use crate::carpet::{CarpetSpec, Digit, HoleReport};
use crate::cover::{
    CurveRow, DirectionGroup, FreqCount, Slab, TubeCover, VerifyReport, WeightCurve,
};
use crate::error::{Error, Result};
use crate::fourier::{FourierValue, R0Certificate};
use crate::ifs::{HomIfsSpec, Word};
use crate::measures::{DropScan, EntropyReport, EntropyRow, ScaleEntropy, ScanRow};
use crate::projection::{Direction, OverlapDirection, OverlapReport, WscLevel, WscReport};
use crate::rational::{format_rational, parse_rational, Rational};

/// A rational serialized as `"p/q"`.
#[derive(Debug, Clone, PartialEq)]
struct Q(Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map(Q).map_err(serde::de::Error::custom)
    }
}

fn q(x: &Rational) -> Q {
    Q(x.clone())
}

fn qs(xs: &[Rational]) -> Vec<Q> {
    xs.iter().map(q).collect()
}

fn unq(xs: Vec<Q>) -> Vec<Rational> {
    xs.into_iter().map(|x| x.0).collect()
}

fn dir(v: Vec<i64>) -> Result<Direction> {
    Direction::new(v).map_err(|e| Error::Parse(format!("direction: {e}")))
}

/// A JSON document with a fixed schema tag.
pub trait Document: Sized {
    const SCHEMA: &'static str;
    #[doc(hidden)]
    type Repr: Serialize + DeserializeOwned;
    #[doc(hidden)]
    fn to_repr(&self) -> Self::Repr;
    #[doc(hidden)]
    fn from_repr(r: Self::Repr) -> Result<Self>;

    fn to_json(&self) -> String {
        let body = Tagged {
            schema: Self::SCHEMA.to_string(),
            body: self.to_repr(),
        };
        let mut s = serde_json::to_string_pretty(&body).expect("documents serialize");
        s.push('\n');
        s
    }

    fn from_json(text: &str) -> Result<Self> {
        let found = schema_of(text)?;
        if found.as_deref() != Some(Self::SCHEMA) {
            return Err(Error::Parse(format!(
                "expected schema {}, found {found:?}",
                Self::SCHEMA
            )));
        }
        Self::from_repr(serde_json::from_str(text)?)
    }

    fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json())?;
        Ok(())
    }

    fn read(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

#[derive(Serialize)]
struct Tagged<T> {
    schema: String,
    #[serde(flatten)]
    body: T,
}

/// The `schema` tag of a document, read without touching the body.
pub fn schema_of(text: &str) -> Result<Option<String>> {
    #[derive(Deserialize)]
    struct Probe {
        schema: Option<String>,
    }
    Ok(serde_json::from_str::<Probe>(text)?.schema)
}

// ---- specs ----

#[derive(Serialize, Deserialize)]
pub struct CarpetRepr {
    base: u64,
    dim: usize,
    digits: Vec<Digit>,
}

impl Document for CarpetSpec {
    const SCHEMA: &'static str = "carpet.v1";
    type Repr = CarpetRepr;

    fn to_repr(&self) -> CarpetRepr {
        CarpetRepr {
            base: self.base(),
            dim: self.dim(),
            digits: self.digits().to_vec(),
        }
    }

    /// Degenerate digit sets (one digit, or all of them) are accepted as
    /// fixtures; operations that need a proper carpet reject them later.
    fn from_repr(r: CarpetRepr) -> Result<Self> {
        CarpetSpec::new_unrestricted(r.base, r.dim, r.digits)
    }
}

#[derive(Serialize, Deserialize)]
pub struct IfsRepr {
    ratio: Q,
    translations: Vec<Vec<Q>>,
}

impl Document for HomIfsSpec {
    const SCHEMA: &'static str = "ifs.v1";
    type Repr = IfsRepr;

    fn to_repr(&self) -> IfsRepr {
        IfsRepr {
            ratio: q(self.ratio()),
            translations: self.translations().iter().map(|t| qs(t)).collect(),
        }
    }

    fn from_repr(r: IfsRepr) -> Result<Self> {
        HomIfsSpec::new(r.ratio.0, r.translations.into_iter().map(unq).collect())
    }
}

/// Reads either spec format; a carpet becomes its IFS.
pub fn read_ifs_or_carpet(path: &Path) -> Result<(HomIfsSpec, Option<CarpetSpec>)> {
    let text = fs::read_to_string(path)?;
    match schema_of(&text)?.as_deref() {
        Some("carpet.v1") => {
            let c = CarpetSpec::from_json(&text)?;
            Ok((c.to_ifs(), Some(c)))
        }
        Some("ifs.v1") => {
            let f = HomIfsSpec::from_json(&text)?;
            let c = f.as_carpet();
            Ok((f, c))
        }
        other => Err(Error::Parse(format!(
            "expected a carpet.v1 or ifs.v1 document, found schema {other:?}"
        ))),
    }
}

// ---- projection ----

#[derive(Serialize, Deserialize)]
pub struct WscLevelRepr {
    depth: usize,
    distinct: usize,
    scaled_min_gap: Option<Q>,
    integral: bool,
}

#[derive(Serialize, Deserialize)]
pub struct WscRepr {
    direction: Vec<i64>,
    base: u64,
    checked_depth: usize,
    integral: bool,
    scaled_min_gap: Option<Q>,
    wsc_constant_c: Option<Q>,
    levels: Vec<WscLevelRepr>,
}

impl Document for WscReport {
    const SCHEMA: &'static str = "wsc_report.v1";
    type Repr = WscRepr;

    fn to_repr(&self) -> WscRepr {
        WscRepr {
            direction: self.direction.components().to_vec(),
            base: self.base,
            checked_depth: self.checked_depth,
            integral: self.integral,
            scaled_min_gap: self.scaled_min_gap.as_ref().map(q),
            wsc_constant_c: self.wsc_constant_c.as_ref().map(q),
            levels: self
                .levels
                .iter()
                .map(|l| WscLevelRepr {
                    depth: l.depth,
                    distinct: l.distinct,
                    scaled_min_gap: l.scaled_min_gap.as_ref().map(q),
                    integral: l.integral,
                })
                .collect(),
        }
    }

    fn from_repr(r: WscRepr) -> Result<Self> {
        Ok(WscReport {
            direction: dir(r.direction)?,
            base: r.base,
            checked_depth: r.checked_depth,
            integral: r.integral,
            scaled_min_gap: r.scaled_min_gap.map(|x| x.0),
            wsc_constant_c: r.wsc_constant_c.map(|x| x.0),
            levels: r
                .levels
                .into_iter()
                .map(|l| WscLevel {
                    depth: l.depth,
                    distinct: l.distinct,
                    scaled_min_gap: l.scaled_min_gap.map(|x| x.0),
                    integral: l.integral,
                })
                .collect(),
        })
    }
}

/// Exact overlap directions of an IFS with the projected structure along
/// each distinct direction.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapSummary {
    pub pairs: Vec<OverlapDirection>,
    pub directions: Vec<ProjectionSummary>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionSummary {
    pub classes: Vec<Vec<usize>>,
    pub offsets: Vec<Rational>,
    pub hull: (Rational, Rational),
    pub report: OverlapReport,
}

#[derive(Serialize, Deserialize)]
pub struct PairRepr {
    pair: (usize, usize),
    direction: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
pub struct ProjectionRepr {
    direction: Vec<i64>,
    classes: Vec<Vec<usize>>,
    offsets: Vec<Q>,
    hull: (Q, Q),
    multiplicity: usize,
    bound_2sqrtd_r0: f64,
    within_bound: bool,
}

#[derive(Serialize, Deserialize)]
pub struct OverlapRepr {
    pairs: Vec<PairRepr>,
    directions: Vec<ProjectionRepr>,
}

impl Document for OverlapSummary {
    const SCHEMA: &'static str = "overlap_report.v1";
    type Repr = OverlapRepr;

    fn to_repr(&self) -> OverlapRepr {
        OverlapRepr {
            pairs: self
                .pairs
                .iter()
                .map(|p| PairRepr {
                    pair: p.pair,
                    direction: p.direction.components().to_vec(),
                })
                .collect(),
            directions: self
                .directions
                .iter()
                .map(|d| ProjectionRepr {
                    direction: d.report.direction.components().to_vec(),
                    classes: d.classes.clone(),
                    offsets: qs(&d.offsets),
                    hull: (q(&d.hull.0), q(&d.hull.1)),
                    multiplicity: d.report.multiplicity,
                    bound_2sqrtd_r0: d.report.bound_2sqrtd_r0,
                    within_bound: d.report.within_bound,
                })
                .collect(),
        }
    }

    fn from_repr(r: OverlapRepr) -> Result<Self> {
        Ok(OverlapSummary {
            pairs: r
                .pairs
                .into_iter()
                .map(|p| {
                    Ok(OverlapDirection {
                        pair: p.pair,
                        direction: dir(p.direction)?,
                    })
                })
                .collect::<Result<_>>()?,
            directions: r
                .directions
                .into_iter()
                .map(|d| {
                    Ok(ProjectionSummary {
                        classes: d.classes,
                        offsets: unq(d.offsets),
                        hull: (d.hull.0 .0, d.hull.1 .0),
                        report: OverlapReport {
                            direction: dir(d.direction)?,
                            multiplicity: d.multiplicity,
                            bound_2sqrtd_r0: d.bound_2sqrtd_r0,
                            within_bound: d.within_bound,
                        },
                    })
                })
                .collect::<Result<_>>()?,
        })
    }
}

// ---- entropy ----

#[derive(Serialize, Deserialize)]
pub struct EntropyRowRepr {
    n: usize,
    h: usize,
    entropy: f64,
    per_bit: f64,
    normalized: Option<f64>,
    m1: usize,
    m2: Q,
    radius: f64,
    level_multiplicity: usize,
    lower: Option<f64>,
}

#[derive(Serialize, Deserialize)]
pub struct EntropyRepr {
    direction: Vec<i64>,
    ratio: Q,
    min_per_bit: f64,
    dim_lower: f64,
    dim_upper: f64,
    dim_estimate: f64,
    rows: Vec<EntropyRowRepr>,
}

impl Document for EntropyReport {
    const SCHEMA: &'static str = "entropy_report.v1";
    type Repr = EntropyRepr;

    fn to_repr(&self) -> EntropyRepr {
        EntropyRepr {
            direction: self.direction.components().to_vec(),
            ratio: q(&self.ratio),
            min_per_bit: self.min_per_bit,
            dim_lower: self.dim_lower,
            dim_upper: self.dim_upper,
            dim_estimate: self.dim_estimate,
            rows: self
                .rows
                .iter()
                .map(|r| EntropyRowRepr {
                    n: r.scale.n,
                    h: r.scale.h,
                    entropy: r.scale.entropy,
                    per_bit: r.per_bit,
                    normalized: r.normalized,
                    m1: r.scale.m1,
                    m2: q(&r.scale.m2),
                    radius: r.scale.radius,
                    level_multiplicity: r.level_multiplicity,
                    lower: r.lower,
                })
                .collect(),
        }
    }

    fn from_repr(r: EntropyRepr) -> Result<Self> {
        Ok(EntropyReport {
            direction: dir(r.direction)?,
            ratio: r.ratio.0,
            min_per_bit: r.min_per_bit,
            dim_lower: r.dim_lower,
            dim_upper: r.dim_upper,
            dim_estimate: r.dim_estimate,
            rows: r
                .rows
                .into_iter()
                .map(|x| EntropyRow {
                    scale: ScaleEntropy {
                        n: x.n,
                        h: x.h,
                        entropy: x.entropy,
                        m1: x.m1,
                        m2: x.m2.0,
                        radius: x.radius,
                    },
                    per_bit: x.per_bit,
                    normalized: x.normalized,
                    level_multiplicity: x.level_multiplicity,
                    lower: x.lower,
                })
                .collect(),
        })
    }
}

#[derive(Serialize, Deserialize)]
pub struct ScanRowRepr {
    direction: Vec<i64>,
    dim_lower: f64,
    dim_upper: f64,
}

#[derive(Serialize, Deserialize)]
pub struct DropScanRepr {
    best: Vec<i64>,
    dim_upper: f64,
    drop: f64,
    rows: Vec<ScanRowRepr>,
}

impl Document for DropScan {
    const SCHEMA: &'static str = "entropy_scan.v1";
    type Repr = DropScanRepr;

    fn to_repr(&self) -> DropScanRepr {
        DropScanRepr {
            best: self.best.components().to_vec(),
            dim_upper: self.dim_upper,
            drop: self.drop,
            rows: self
                .rows
                .iter()
                .map(|r| ScanRowRepr {
                    direction: r.direction.components().to_vec(),
                    dim_lower: r.dim_lower,
                    dim_upper: r.dim_upper,
                })
                .collect(),
        }
    }

    fn from_repr(r: DropScanRepr) -> Result<Self> {
        Ok(DropScan {
            best: dir(r.best)?,
            dim_upper: r.dim_upper,
            drop: r.drop,
            rows: r
                .rows
                .into_iter()
                .map(|x| {
                    Ok(ScanRow {
                        direction: dir(x.direction)?,
                        dim_lower: x.dim_lower,
                        dim_upper: x.dim_upper,
                    })
                })
                .collect::<Result<_>>()?,
        })
    }
}

// ---- fourier ----

#[derive(Debug, Clone, PartialEq)]
pub struct FourierScan {
    pub radius: u64,
    pub tol: f64,
    pub entries: Vec<(Direction, FourierValue)>,
}

#[derive(Serialize, Deserialize)]
pub struct FourierEntryRepr {
    v: Vec<i64>,
    re: f64,
    im: f64,
    abs: f64,
    tail: f64,
    terms: usize,
}

#[derive(Serialize, Deserialize)]
pub struct FourierScanRepr {
    radius: u64,
    tol: f64,
    entries: Vec<FourierEntryRepr>,
}

impl Document for FourierScan {
    const SCHEMA: &'static str = "fourier_scan.v1";
    type Repr = FourierScanRepr;

    fn to_repr(&self) -> FourierScanRepr {
        FourierScanRepr {
            radius: self.radius,
            tol: self.tol,
            entries: self
                .entries
                .iter()
                .map(|(v, f)| FourierEntryRepr {
                    v: v.components().to_vec(),
                    re: f.value.re,
                    im: f.value.im,
                    abs: f.abs(),
                    tail: f.tail_radius,
                    terms: f.terms_used,
                })
                .collect(),
        }
    }

    fn from_repr(r: FourierScanRepr) -> Result<Self> {
        Ok(FourierScan {
            radius: r.radius,
            tol: r.tol,
            entries: r
                .entries
                .into_iter()
                .map(|e| {
                    Ok((
                        dir(e.v.clone())?,
                        FourierValue {
                            xi: e.v,
                            value: Complex64::new(e.re, e.im),
                            tail_radius: e.tail,
                            terms_used: e.terms,
                        },
                    ))
                })
                .collect::<Result<_>>()?,
        })
    }
}

#[derive(Serialize, Deserialize)]
pub struct HoleRepr {
    depth: u32,
    cube_index: Vec<u64>,
    alpha_lower: Q,
}

#[derive(Serialize, Deserialize)]
pub struct R0Repr {
    r0: u64,
    hole: HoleRepr,
    n_eff: u64,
    tail_sum_bound: f64,
    tent_bound: u128,
    method: String,
}

impl Document for R0Certificate {
    const SCHEMA: &'static str = "r0_certificate.v1";
    type Repr = R0Repr;

    fn to_repr(&self) -> R0Repr {
        R0Repr {
            r0: self.r0,
            hole: HoleRepr {
                depth: self.hole.depth,
                cube_index: self.hole.cube_index.clone(),
                alpha_lower: q(&self.hole.alpha_lower),
            },
            n_eff: self.n_eff,
            tail_sum_bound: self.tail_sum_bound,
            tent_bound: self.tent_bound,
            method: self.method.to_string(),
        }
    }

    fn from_repr(r: R0Repr) -> Result<Self> {
        let method = match r.method.as_str() {
            "tent" => "tent",
            other => return Err(Error::Parse(format!("unknown certificate method {other}"))),
        };
        Ok(R0Certificate {
            r0: r.r0,
            hole: HoleReport {
                depth: r.hole.depth,
                cube_index: r.hole.cube_index,
                alpha_lower: r.hole.alpha_lower.0,
            },
            n_eff: r.n_eff,
            tail_sum_bound: r.tail_sum_bound,
            tent_bound: r.tent_bound,
            method,
        })
    }
}

// ---- covers ----

#[derive(Serialize, Deserialize)]
pub struct SlabRepr {
    lo: Q,
    hi: Q,
    width: f64,
}

#[derive(Serialize, Deserialize)]
pub struct GroupRepr {
    direction: Vec<i64>,
    pairs: Vec<(usize, usize)>,
    designated: Vec<usize>,
    reduced_alphabet: usize,
    words: u128,
    slabs: Vec<SlabRepr>,
}

#[derive(Serialize, Deserialize)]
pub struct CoverRepr {
    depth: usize,
    s: f64,
    alphabet: usize,
    threshold: usize,
    total_weight: f64,
    slab_count: usize,
    pair_assignment: Vec<PairRepr>,
    groups: Vec<GroupRepr>,
}

impl Document for TubeCover {
    const SCHEMA: &'static str = "cover.v1";
    type Repr = CoverRepr;

    fn to_repr(&self) -> CoverRepr {
        CoverRepr {
            depth: self.depth,
            s: self.s,
            alphabet: self.alphabet,
            threshold: self.threshold,
            total_weight: self.total_weight,
            slab_count: self.slab_count(),
            pair_assignment: self
                .pair_assignment
                .iter()
                .map(|(p, d)| PairRepr {
                    pair: *p,
                    direction: d.components().to_vec(),
                })
                .collect(),
            groups: self
                .groups
                .iter()
                .map(|g| GroupRepr {
                    direction: g.direction.components().to_vec(),
                    pairs: g.pairs.clone(),
                    designated: g.designated.clone(),
                    reduced_alphabet: g.reduced_alphabet,
                    words: g.words,
                    slabs: g
                        .slabs
                        .iter()
                        .map(|s| SlabRepr {
                            lo: q(&s.lo),
                            hi: q(&s.hi),
                            width: s.width,
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    /// Slab widths are recomputed from the exact endpoints.
    fn from_repr(r: CoverRepr) -> Result<Self> {
        let groups = r
            .groups
            .into_iter()
            .map(|g| {
                let direction = dir(g.direction)?;
                let mut slabs = g
                    .slabs
                    .into_iter()
                    .map(|s| Slab::new(direction.clone(), s.lo.0, s.hi.0))
                    .collect::<Result<Vec<_>>>()?;
                slabs.sort_by(|a, b| a.lo.cmp(&b.lo));
                Ok(DirectionGroup {
                    direction,
                    pairs: g.pairs,
                    designated: g.designated,
                    reduced_alphabet: g.reduced_alphabet,
                    words: g.words,
                    slabs,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TubeCover {
            depth: r.depth,
            s: r.s,
            alphabet: r.alphabet,
            threshold: r.threshold,
            groups,
            total_weight: r.total_weight,
            pair_assignment: r
                .pair_assignment
                .into_iter()
                .map(|p| Ok((p.pair, dir(p.direction)?)))
                .collect::<Result<_>>()?,
        })
    }
}

#[derive(Serialize, Deserialize)]
pub struct VerifyRepr {
    depth: usize,
    words_checked: u128,
    passed: bool,
    witness: Option<Vec<usize>>,
}

impl Document for VerifyReport {
    const SCHEMA: &'static str = "verify.v1";
    type Repr = VerifyRepr;

    fn to_repr(&self) -> VerifyRepr {
        VerifyRepr {
            depth: self.depth,
            words_checked: self.words_checked,
            passed: self.passed,
            witness: self.witness.as_ref().map(|w| w.0.clone()),
        }
    }

    fn from_repr(r: VerifyRepr) -> Result<Self> {
        Ok(VerifyReport {
            depth: r.depth,
            words_checked: r.words_checked,
            passed: r.passed,
            witness: r.witness.map(Word),
        })
    }
}

#[derive(Serialize, Deserialize)]
pub struct CurveRowRepr {
    n: usize,
    slab_count: usize,
    total_weight: f64,
}

#[derive(Serialize, Deserialize)]
pub struct CurveRepr {
    s: f64,
    reference_exponent: f64,
    rows: Vec<CurveRowRepr>,
}

impl Document for WeightCurve {
    const SCHEMA: &'static str = "cover_curve.v1";
    type Repr = CurveRepr;

    fn to_repr(&self) -> CurveRepr {
        CurveRepr {
            s: self.s,
            reference_exponent: self.reference_exponent,
            rows: self
                .rows
                .iter()
                .map(|r| CurveRowRepr {
                    n: r.n,
                    slab_count: r.slab_count,
                    total_weight: r.total_weight,
                })
                .collect(),
        }
    }

    fn from_repr(r: CurveRepr) -> Result<Self> {
        Ok(WeightCurve {
            s: r.s,
            reference_exponent: r.reference_exponent,
            rows: r
                .rows
                .into_iter()
                .map(|x| CurveRow {
                    n: x.n,
                    slab_count: x.slab_count,
                    total_weight: x.total_weight,
                })
                .collect(),
        })
    }
}

#[derive(Serialize, Deserialize)]
pub struct FreqRepr {
    m_red: usize,
    n: usize,
    threshold: usize,
    count: String,
    exponent: f64,
}

impl Document for FreqCount {
    const SCHEMA: &'static str = "freq_count.v1";
    type Repr = FreqRepr;

    fn to_repr(&self) -> FreqRepr {
        FreqRepr {
            m_red: self.m_red,
            n: self.n,
            threshold: self.threshold,
            count: self.count.to_string(),
            exponent: self.exponent,
        }
    }

    fn from_repr(r: FreqRepr) -> Result<Self> {
        Ok(FreqCount {
            m_red: r.m_red,
            n: r.n,
            threshold: r.threshold,
            count: r
                .count
                .parse()
                .map_err(|_| Error::Parse(format!("bad count {}", r.count)))?,
            exponent: r.exponent,
        })
    }
}

// ---- box counting ----

#[derive(Serialize, Deserialize)]
pub struct BoxRowRepr {
    n: usize,
    count: u64,
    depth_cap: usize,
}

#[derive(Serialize, Deserialize)]
pub struct BoxCountRepr {
    dim: usize,
    slope: f64,
    method: String,
    rows: Vec<BoxRowRepr>,
}

impl Document for BoxCountReport {
    const SCHEMA: &'static str = "boxcount.v1";
    type Repr = BoxCountRepr;

    fn to_repr(&self) -> BoxCountRepr {
        BoxCountRepr {
            dim: self.dim,
            slope: self.slope,
            method: self.method.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| BoxRowRepr {
                    n: r.n,
                    count: r.count,
                    depth_cap: r.depth_cap,
                })
                .collect(),
        }
    }

    fn from_repr(r: BoxCountRepr) -> Result<Self> {
        Ok(BoxCountReport {
            dim: r.dim,
            slope: r.slope,
            method: r.method,
            rows: r
                .rows
                .into_iter()
                .map(|x| BoxCountRow {
                    n: x.n,
                    count: x.count,
                    depth_cap: x.depth_cap,
                })
                .collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carpet::sierpinski_carpet;
    use crate::rational::{int, rat};

    #[test]
    fn carpet_round_trip() {
        let c = sierpinski_carpet();
        let text = c.to_json();
        assert!(text.contains("\"schema\": \"carpet.v1\""));
        assert_eq!(CarpetSpec::from_json(&text).unwrap(), c);
    }

    #[test]
    fn ifs_round_trip_and_rational_strings() {
        let f = HomIfsSpec::new(rat(3, 10), vec![vec![int(0), int(0)], vec![int(1), rat(1, 2)]]).unwrap();
        let text = f.to_json();
        assert!(text.contains("\"3/10\"") && text.contains("\"1/2\"") && text.contains("\"0/1\""));
        assert_eq!(HomIfsSpec::from_json(&text).unwrap(), f);
    }

    #[test]
    fn schema_mismatch_is_rejected() {
        let text = sierpinski_carpet().to_json();
        assert!(matches!(HomIfsSpec::from_json(&text), Err(Error::Parse(_))));
    }

    #[test]
    fn handwritten_ifs_accepts_integers_and_decimals() {
        let text = r#"{"schema": "ifs.v1", "ratio": "0.3", "translations": [["0","0"],["1","0"],["0","1"]]}"#;
        let f = HomIfsSpec::from_json(text).unwrap();
        assert_eq!(f.ratio(), &rat(3, 10));
        assert_eq!(f.len(), 3);
    }
}
