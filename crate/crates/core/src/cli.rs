//! `tubenull` command line.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage or input
//! error, 3 budget exceeded or arithmetic overflow.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::boxcount::{box_count_ifs, box_count_projection};
use crate::budget::Budget;
use crate::carpet::CarpetSpec;
use crate::cover::{cover_weight_curve, default_exponent, generate_cover, verify_cover, TubeCover};
use crate::error::{Error, Result};
use crate::fourier::{fourier_scan, r0_certificate};
use crate::ifs::HomIfsSpec;
use crate::io::{read_ifs_or_carpet, Document, FourierScan, OverlapSummary, ProjectionSummary};
use crate::measures::{
    dimension_drop_scan, entropy_dimension_estimate, pushforward_weights, BernoulliMeasure,
};
use crate::projection::{
    exact_overlap_directions, overlap_multiplicity, project_ifs, wsc_check, Direction,
};
use crate::rational::{parse_rational, Rational};
use crate::render::{render_png, render_svg, ColorScheme, RenderConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } | Error::Overflow { .. } => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

#[derive(Parser, Debug)]
#[command(name = "tubenull", version, about = "Exact covers, projections and Fourier certificates for self-similar sets")]
struct Cli {
    /// Maximum number of words any enumeration may touch.
    #[arg(long, global = true, default_value_t = Budget::DEFAULT_LIMIT)]
    budget: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Carpet pictures.
    #[command(subcommand)]
    Carpet(CarpetCmd),
    /// Structure of an IFS.
    #[command(subcommand)]
    Ifs(IfsCmd),
    /// Weak separation certificates.
    #[command(subcommand)]
    Wsc(WscCmd),
    /// Fourier coefficients of self-similar measures.
    #[command(subcommand)]
    Fourier(FourierCmd),
    /// Entropy of projected measures.
    #[command(subcommand)]
    Entropy(EntropyCmd),
    /// Slab covers from exact overlaps.
    #[command(subcommand)]
    Cover(CoverCmd),
    /// Dyadic box counts of a set or of a projection.
    Boxcount(BoxcountArgs),
}

#[derive(Args, Debug)]
struct SpecArg {
    /// carpet.v1 or ifs.v1 document.
    #[arg(long)]
    spec: PathBuf,
}

#[derive(Args, Debug)]
struct OutArg {
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum CarpetCmd {
    /// Draw depth-n cylinders as PNG or SVG (chosen by the extension).
    Render {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        depth: usize,
        /// Pixels per unit length.
        #[arg(long, default_value_t = 729)]
        resolution: u32,
        /// cover.v1 document whose slabs are drawn on top.
        #[arg(long)]
        overlay: Option<PathBuf>,
        #[arg(long)]
        invert: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum IfsCmd {
    /// Exact overlap direction of every pair of maps.
    OverlapDirs {
        #[command(flatten)]
        spec: SpecArg,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand, Debug)]
enum WscCmd {
    /// Exact gaps of projected offsets of a carpet.
    Check {
        #[command(flatten)]
        spec: SpecArg,
        /// Integer direction, e.g. `1,1`.
        #[arg(long, allow_hyphen_values = true)]
        direction: String,
        #[arg(long)]
        depth: usize,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Args, Debug)]
struct MeasureArg {
    /// Probability vector (normalized), e.g. `1,2,1` or `1/4,1/2,1/4`;
    /// uniform when omitted.
    #[arg(long)]
    weights: Option<String>,
}

#[derive(Subcommand, Debug)]
enum FourierCmd {
    /// Coefficients at every primitive direction with |v| <= R.
    Scan {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long = "R")]
        r: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[command(flatten)]
        measure: MeasureArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Radius within which every invariant measure has a nonzero coefficient.
    R0 {
        #[command(flatten)]
        spec: SpecArg,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand, Debug)]
enum EntropyCmd {
    /// Scale entropies of the projection in one direction, n = 1..=depth.
    Project {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, allow_hyphen_values = true)]
        direction: String,
        #[arg(long)]
        depth: usize,
        #[command(flatten)]
        measure: MeasureArg,
        /// Also write the table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Smallest certified projected dimension over directions with |v| <= R.
    Scan {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long = "R")]
        r: u64,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        #[command(flatten)]
        measure: MeasureArg,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand, Debug)]
enum CoverCmd {
    /// Slabs covering every depth-n cylinder.
    Generate {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        depth: usize,
        /// Weight exponent; defaults to the midpoint of the reference
        /// exponent and 1.
        #[arg(long)]
        s: Option<f64>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Exhaustively check a cover; exit 1 with a witness if it fails.
    Verify {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        cover: PathBuf,
        /// Cylinder depth to check; the cover's depth when omitted.
        #[arg(long)]
        depth: Option<usize>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Total weight across depths, e.g. `--depths 4,6,8` or `--depths 2..8`.
    Curve {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        depths: String,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Args, Debug)]
struct BoxcountArgs {
    #[command(flatten)]
    spec: SpecArg,
    /// Dyadic scales, e.g. `4..10` or `4,6,8`.
    #[arg(long)]
    depths: String,
    /// Count the projection in this direction instead of the set.
    #[arg(long, allow_hyphen_values = true)]
    direction: Option<String>,
    #[command(flatten)]
    out: OutArg,
}

/// Parses `a..b` (inclusive) or a comma list.
pub fn parse_depths(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::Parse(format!("bad depth list {s:?}"));
    let out: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        (a..=b).collect()
    } else {
        s.split(',')
            .map(|x| x.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?
    };
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

fn parse_direction(s: &str) -> Result<Direction> {
    s.parse()
}

fn parse_measure(arg: &MeasureArg, m: usize) -> Result<BernoulliMeasure> {
    let Some(text) = &arg.weights else {
        return Ok(BernoulliMeasure::uniform(m));
    };
    let raw: Vec<Rational> = text
        .split(',')
        .map(|x| parse_rational(x.trim()))
        .collect::<Result<_>>()?;
    if raw.len() != m {
        return Err(Error::arg(format!("expected {m} weights, got {}", raw.len())));
    }
    let total: Rational = raw.iter().cloned().sum();
    if total <= Rational::from_integer(0.into()) {
        return Err(Error::arg("weights must have positive sum"));
    }
    BernoulliMeasure::from_rationals(raw.into_iter().map(|w| w / &total).collect())
}

fn need_carpet(carpet: Option<CarpetSpec>) -> Result<CarpetSpec> {
    carpet.ok_or_else(|| Error::arg("this command needs a carpet (r = 1/N, t_i = i/N)"))
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn load(spec: &SpecArg) -> Result<(HomIfsSpec, Option<CarpetSpec>)> {
    read_ifs_or_carpet(&spec.spec)
}

pub fn overlap_summary(ifs: &HomIfsSpec) -> Result<OverlapSummary> {
    let pairs = exact_overlap_directions(ifs)?;
    let mut dirs: Vec<Direction> = pairs.iter().map(|p| p.direction.clone()).collect();
    dirs.sort();
    dirs.dedup();
    let directions = dirs
        .iter()
        .map(|v| {
            let p = project_ifs(ifs, v)?;
            Ok(ProjectionSummary {
                classes: p.classes().to_vec(),
                offsets: p.offsets().to_vec(),
                hull: p.hull().clone(),
                report: overlap_multiplicity(&p),
            })
        })
        .collect::<Result<_>>()?;
    Ok(OverlapSummary { pairs, directions })
}

fn execute(cli: Cli) -> Result<i32> {
    let budget = Budget::new(cli.budget);
    match cli.command {
        Command::Carpet(CarpetCmd::Render {
            spec,
            depth,
            resolution,
            overlay,
            invert,
            out,
        }) => {
            let (ifs, _) = load(&spec)?;
            let mut config = RenderConfig::new(resolution, depth)?;
            config.budget = budget;
            if invert {
                config.scheme = ColorScheme::Inverted;
            }
            let overlay = overlay.as_deref().map(TubeCover::read).transpose()?;
            if is_svg(&out) {
                fs::write(&out, render_svg(&ifs, &config, overlay.as_ref())?)?;
            } else {
                render_png(&ifs, &config, overlay.as_ref(), &out)?;
            }
        }
        Command::Ifs(IfsCmd::OverlapDirs { spec, out }) => {
            let (ifs, _) = load(&spec)?;
            emit(&out.out, &overlap_summary(&ifs)?.to_json())?;
        }
        Command::Wsc(WscCmd::Check {
            spec,
            direction,
            depth,
            out,
        }) => {
            let (ifs, _) = load(&spec)?;
            let report = wsc_check(&ifs, &parse_direction(&direction)?, depth, budget)?;
            emit(&out.out, &report.to_json())?;
            if !report.integral {
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
        Command::Fourier(FourierCmd::Scan {
            spec,
            r,
            tol,
            measure,
            out,
        }) => {
            let (_, carpet) = load(&spec)?;
            let carpet = need_carpet(carpet)?;
            let mu = parse_measure(&measure, carpet.digits().len())?;
            let entries = fourier_scan(&carpet, &mu, r, tol)?;
            emit(&out.out, &FourierScan { radius: r, tol, entries }.to_json())?;
        }
        Command::Fourier(FourierCmd::R0 { spec, out }) => {
            let (_, carpet) = load(&spec)?;
            let cert = r0_certificate(&need_carpet(carpet)?)?;
            emit(&out.out, &cert.to_json())?;
            if cert.tail_sum_bound >= 1.0 {
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
        Command::Entropy(EntropyCmd::Project {
            spec,
            direction,
            depth,
            measure,
            csv,
            out,
        }) => {
            let (ifs, _) = load(&spec)?;
            let mu = parse_measure(&measure, ifs.len())?;
            let pifs = project_ifs(&ifs, &parse_direction(&direction)?)?;
            let mu_v = pushforward_weights(&mu, pifs.classes())?;
            let n_list: Vec<usize> = (1..=depth).collect();
            let report = entropy_dimension_estimate(&pifs, &mu_v, &n_list, budget)?;
            emit(&out.out, &report.to_json())?;
            if let Some(path) = csv {
                fs::write(path, report.to_csv())?;
            }
        }
        Command::Entropy(EntropyCmd::Scan {
            spec,
            r,
            depth,
            measure,
            out,
        }) => {
            let (_, carpet) = load(&spec)?;
            let carpet = need_carpet(carpet)?;
            let mu = parse_measure(&measure, carpet.digits().len())?;
            let n_list: Vec<usize> = (1..=depth).collect();
            let scan = dimension_drop_scan(&carpet, &mu, r, &n_list, budget)?;
            emit(&out.out, &scan.to_json())?;
        }
        Command::Cover(CoverCmd::Generate { spec, depth, s, out }) => {
            let (ifs, _) = load(&spec)?;
            let s = s.unwrap_or_else(|| default_exponent(ifs.len(), ifs.ratio()));
            let cover = generate_cover(&ifs, depth, s, budget)?;
            emit(&out.out, &cover.to_json())?;
        }
        Command::Cover(CoverCmd::Verify {
            spec,
            cover,
            depth,
            out,
        }) => {
            let (ifs, _) = load(&spec)?;
            let cover = TubeCover::read(&cover)?;
            let report = verify_cover(&ifs, &cover, depth.unwrap_or(cover.depth), budget)?;
            emit(&out.out, &report.to_json())?;
            if !report.passed {
                if let Some(w) = &report.witness {
                    eprintln!("uncovered cylinder: {w}");
                }
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
        Command::Cover(CoverCmd::Curve { spec, s, depths, out }) => {
            let (ifs, _) = load(&spec)?;
            let curve = cover_weight_curve(&ifs, s, &parse_depths(&depths)?, budget)?;
            emit(&out.out, &curve.to_json())?;
        }
        Command::Boxcount(BoxcountArgs {
            spec,
            depths,
            direction,
            out,
        }) => {
            let (ifs, _) = load(&spec)?;
            let depths = parse_depths(&depths)?;
            let report = match direction {
                Some(v) => box_count_projection(&project_ifs(&ifs, &parse_direction(&v)?)?, &depths, budget)?,
                None => box_count_ifs(&ifs, &depths, budget)?,
            };
            emit(&out.out, &report.to_json())?;
        }
    }
    Ok(EXIT_OK)
}

fn is_svg(p: &Path) -> bool {
    p.extension().is_some_and(|e| e.eq_ignore_ascii_case("svg"))
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
