//! Command line front end.
//!
//! Every subcommand reads and writes plain files (CSV, JSON, JSON lines,
//! SVG). Options may also come from a `--config` file of `key=value` lines;
//! flags given on the command line win. Outputs do not depend on the worker
//! count.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::curves::{extend_curve, make_circle_arc, make_parabola, ExtendedGraphCurve};
use crate::error::{Error, Result};
use crate::estimators::{
    buffon_curve_mc, difference_ranges, favard_curve_length, favard_length, fit_decay, McSpec, QuadResult, QuadratureSpec,
};
use crate::fractal::{boundary, cantor_generation, corner_ifs_generation, BoundarySet, SquareSet};
use crate::geom::{Membership, PlanarSet, Point, Rect, RectSet, WeightedPointCloud};
use crate::interval::{fmt17, Interval};
use crate::multiscale::{
    hausdorff_content_cover, hausdorff_content_cover_points, rectifiability_constant_lower, sliding_pigeonhole,
    verify_sector_comparability, verify_strip_containment, random_sector_cases, RectSearch, SectorSpec,
};
use crate::plot::{loglog_svg, Series};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;

/// Environment variable giving the default worker count.
pub const THREADS_ENV: &str = "FAVARD_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "favard-lab", version, about = "Favard length and Favard curve length experiments")]
pub struct Cli {
    /// File of `key=value` lines supplying default flag values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (default: $FAVARD_LAB_THREADS, else all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the squares of K_n as `n,i,j` rows.
    GenCantor {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fav of one or more sets by quadrature.
    Favard {
        #[arg(long)]
        set: String,
        #[command(flatten)]
        quad: QuadArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fav_C of one or more sets by quadrature.
    Favc {
        #[arg(long)]
        set: String,
        #[arg(long)]
        curve: String,
        #[command(flatten)]
        quad: QuadArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Buffon-curve Monte Carlo estimate of Fav_C.
    Buffon {
        #[arg(long)]
        set: String,
        #[arg(long)]
        curve: String,
        #[arg(long, default_value = "1e6", value_parser = parse_count)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit v ≈ C n^{-p} to an `n,value,std_error` table.
    Decay {
        #[arg(long = "in")]
        input: PathBuf,
        /// Smallest n used in the fit.
        #[arg(long, default_value_t = 2)]
        min_n: u64,
        /// Optional SVG with reference shapes n^{-1/6}, 1/n and ln n / n.
        #[arg(long)]
        plot: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sampled sector comparability and strip containment checks.
    SectorCheck {
        #[arg(long)]
        curve: String,
        /// Base point `x,y`; omit to draw `--cases` random parameter sets.
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        e: Option<Point>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        m: Option<f64>,
        #[arg(long, default_value_t = 20)]
        cases: usize,
        #[arg(long, default_value = "1e4", value_parser = parse_count)]
        samples: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sliding pigeonhole choice on a nondecreasing mass sequence.
    Pigeonhole {
        /// One mass per line, indices 0..N.
        #[arg(long)]
        masses: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Upper bound on restricted Hausdorff content from a grid ball cover.
    Content {
        #[arg(long, conflicts_with = "cloud", required_unless_present = "cloud")]
        set: Option<String>,
        /// Point cloud `x,y[,w]`.
        #[arg(long)]
        cloud: Option<PathBuf>,
        #[arg(long)]
        r_minus: f64,
        #[arg(long)]
        r_plus: f64,
        /// Optional CSV of the balls `x,y,radius`.
        #[arg(long)]
        balls: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lower bound on the rectifiability constant of a point cloud.
    RectConst {
        #[arg(long)]
        cloud: PathBuf,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        m: f64,
        #[arg(long, default_value_t = 64)]
        angles: usize,
        #[arg(long, default_value_t = 4096)]
        cells: usize,
        #[arg(long, default_value_t = 64)]
        nodes: usize,
        #[arg(long, default_value_t = 16)]
        max_candidates: usize,
        #[arg(long, default_value_t = 8)]
        local_candidates: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Log-log plot of one or more `n,value,std_error` tables.
    Plot {
        #[arg(long = "in", required = true, num_args = 1..)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct QuadArgs {
    #[arg(long, default_value_t = 1e-4)]
    pub rel_tol: f64,
    #[arg(long, default_value_t = 14)]
    pub max_refinements: u32,
    #[arg(long, default_value_t = 16)]
    pub initial_panels: usize,
}

impl QuadArgs {
    fn spec(&self) -> Result<QuadratureSpec> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::param(format!("rel-tol must be positive, got {}", self.rel_tol)));
        }
        Ok(QuadratureSpec {
            rel_tol: self.rel_tol,
            max_refinements: self.max_refinements,
            initial_panels: self.initial_panels,
        })
    }
}

/// Counts such as `1e7` or `250000`.
pub fn parse_count(s: &str) -> std::result::Result<u64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("not a number: {s}"))?;
    if !(v >= 1.0 && v.fract() == 0.0 && v <= 2f64.powi(53)) {
        return Err(format!("expected a positive integer count, got {s}"));
    }
    Ok(v as u64)
}

fn parse_point(s: &str) -> std::result::Result<Point, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected x,y, got {s}"));
    }
    let x = parts[0].trim().parse().map_err(|_| format!("bad x in {s}"))?;
    let y = parts[1].trim().parse().map_err(|_| format!("bad y in {s}"))?;
    Ok(Point::new(x, y))
}

/// A set named on the command line.
#[derive(Clone, Debug)]
pub enum LabSet {
    Squares(SquareSet),
    Boundary(BoundarySet),
    Rects(RectSet),
}

impl PlanarSet for LabSet {
    fn components(&self) -> Vec<Rect> {
        match self {
            LabSet::Squares(s) => s.components(),
            LabSet::Boundary(s) => s.components(),
            LabSet::Rects(s) => s.components(),
        }
    }

    fn bounding_box(&self) -> Option<Rect> {
        match self {
            LabSet::Squares(s) => s.bounding_box(),
            LabSet::Boundary(s) => s.bounding_box(),
            LabSet::Rects(s) => s.bounding_box(),
        }
    }
}

impl Membership for LabSet {
    fn contains(&self, p: Point) -> bool {
        match self {
            LabSet::Squares(s) => s.contains(p),
            LabSet::Boundary(s) => s.contains(p),
            LabSet::Rects(s) => s.contains(p),
        }
    }

    fn meets_box(&self, b: &Rect) -> Option<bool> {
        match self {
            LabSet::Squares(s) => s.meets_box(b),
            LabSet::Boundary(s) => s.meets_box(b),
            LabSet::Rects(s) => s.meets_box(b),
        }
    }
}

/// Parses `cantor:n`, `cantor:a..b` (inclusive), `boundary:n`,
/// `boundary:a..b`, `ifs:n:base:d1,d2,...`, `square` and `segment`
/// (the horizontal unit segment at height 1/2). Returns `(n, set)` pairs;
/// the fixed sets use `n = 0`.
pub fn parse_set_spec(spec: &str) -> Result<Vec<(u32, LabSet)>> {
    let bad = || Error::Parse(format!("unknown set spec {spec:?}"));
    let parts: Vec<&str> = spec.trim().split(':').collect();
    match parts.as_slice() {
        ["square"] => Ok(vec![(0, LabSet::Rects(RectSet::unit_square()))]),
        ["segment"] => Ok(vec![(0, LabSet::Rects(RectSet(vec![Rect::horizontal(0.0, 1.0, 0.5)])))]),
        ["cantor", gens] => parse_gens(gens)?
            .into_iter()
            .map(|n| Ok((n, LabSet::Squares(cantor_generation(n)?))))
            .collect(),
        ["boundary", gens] => parse_gens(gens)?
            .into_iter()
            .map(|n| Ok((n, LabSet::Boundary(boundary(&cantor_generation(n)?)))))
            .collect(),
        ["ifs", gens, base, digits] => {
            let base: u32 = base.parse().map_err(|_| bad())?;
            let digits = digits
                .split(',')
                .map(|d| d.trim().parse::<u32>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            parse_gens(gens)?
                .into_iter()
                .map(|n| Ok((n, LabSet::Squares(corner_ifs_generation(n, &digits, base)?))))
                .collect()
        }
        _ => Err(bad()),
    }
}

fn parse_gens(s: &str) -> Result<Vec<u32>> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad generation {t:?}")));
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return Err(Error::Parse(format!("empty generation range {s}")));
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![num(s)?]),
    }
}

/// Parses `parabola:h=0.5,I=[-0.9,0.9]` and `circle-arc:R=2,I=[-1,1]`.
pub fn parse_curve_spec(spec: &str) -> Result<ExtendedGraphCurve> {
    let bad = |why: &str| Error::Parse(format!("curve spec {spec:?}: {why}"));
    let (kind, rest) = spec.trim().split_once(':').ok_or_else(|| bad("missing ':'"))?;
    let mut fields = Vec::new();
    let (mut depth, mut start) = (0, 0);
    for (k, ch) in rest.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                fields.push(&rest[start..k]);
                start = k + 1;
            }
            _ => {}
        }
    }
    fields.push(&rest[start..]);
    let (mut param, mut domain) = (None, None);
    for f in fields {
        let (key, value) = f.split_once('=').ok_or_else(|| bad("expected key=value"))?;
        match key.trim() {
            "h" | "R" => param = Some(value.trim().parse::<f64>().map_err(|_| bad("bad number"))?),
            "I" => {
                let inner = value.trim().strip_prefix('[').and_then(|v| v.strip_suffix(']')).ok_or_else(|| bad("I must be [a,b]"))?;
                let (a, b) = inner.split_once(',').ok_or_else(|| bad("I must be [a,b]"))?;
                let a = a.trim().parse().map_err(|_| bad("bad interval end"))?;
                let b = b.trim().parse().map_err(|_| bad("bad interval end"))?;
                domain = Some(Interval::new(a, b)?);
            }
            k => return Err(bad(&format!("unknown key {k}"))),
        }
    }
    let domain = domain.ok_or_else(|| bad("missing I"))?;
    let curve = match kind {
        "parabola" => make_parabola(param.ok_or_else(|| bad("missing h"))?, domain)?,
        "circle-arc" => make_circle_arc(param.ok_or_else(|| bad("missing R"))?, domain)?,
        _ => return Err(bad("unknown curve kind")),
    };
    Ok(extend_curve(curve))
}

/// Appends `--key value` for config-file entries whose flag is absent.
pub fn merge_config(argv: Vec<String>) -> Result<Vec<String>> {
    let mut path = None;
    for (k, a) in argv.iter().enumerate() {
        if a == "--config" {
            path = argv.get(k + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path)?;
    let mut out = argv;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("{path}:{}: expected key=value", lineno + 1)))?;
        let flag = format!("--{}", key.trim().replace('_', "-"));
        let present = out.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if !present {
            out.push(format!("{flag}={}", value.trim()));
        }
    }
    Ok(out)
}

fn resolve_threads(flag: Option<usize>) -> Result<usize> {
    if let Some(t) = flag {
        return Ok(t);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::param(format!("{THREADS_ENV}={v} is not a thread count"))),
        Err(_) => Ok(0),
    }
}

/// Runs the command line `argv` (including the program name) and returns
/// the exit code.
pub fn run(argv: Vec<String>) -> i32 {
    let argv = match merge_config(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("favard-lab: {e}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let threads = match resolve_threads(cli.threads) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("favard-lab: {e}");
            return EXIT_USAGE;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("favard-lab: cannot start workers: {e}");
            return EXIT_IO;
        }
    };
    eprintln!("favard-lab: threads={} command={:?}", pool.current_num_threads(), cli.command);
    match pool.install(|| dispatch(&cli.command)) {
        Ok(true) => EXIT_OK,
        Ok(false) => {
            eprintln!("favard-lab: quadrature did not reach the requested tolerance");
            EXIT_NO_CONVERGENCE
        }
        Err(e) => {
            eprintln!("favard-lab: {e}");
            match e {
                Error::Io(_) | Error::Csv(_) => EXIT_IO,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn write_json<T: Serialize>(path: &Option<PathBuf>, value: &T) -> Result<()> {
    let mut w = output(path)?;
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    writeln!(w, "{text}")?;
    w.flush()?;
    Ok(())
}

fn write_value_table(path: &Option<PathBuf>, rows: &[(u32, f64, f64)]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(output(path)?);
    wtr.write_record(["n", "value", "std_error"])?;
    for &(n, v, e) in rows {
        wtr.write_record([n.to_string(), fmt17(v), fmt17(e)])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Reads `n,value,std_error` rows (the last column is optional).
pub fn read_value_table(path: &Path) -> Result<Vec<(f64, f64, f64)>> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_path(path)?;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let num = |k: usize| -> Result<f64> {
            rec.get(k)
                .unwrap_or("0")
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("{}: bad number in {rec:?}", path.display())))
        };
        rows.push((num(0)?, num(1)?, num(2)?));
    }
    Ok(rows)
}

fn read_masses(path: &Path) -> Result<Vec<f64>> {
    let mut text = String::new();
    File::open(path)?.read_to_string(&mut text)?;
    let mut masses = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let field = line.split(',').next_back().unwrap_or("").trim();
        if field.is_empty() {
            continue;
        }
        match field.parse::<f64>() {
            Ok(v) => masses.push(v),
            Err(_) if k == 0 => {}
            Err(_) => return Err(Error::Parse(format!("{}:{}: bad mass {field:?}", path.display(), k + 1))),
        }
    }
    Ok(masses)
}

fn read_cloud(path: &Path) -> Result<WeightedPointCloud> {
    WeightedPointCloud::read_csv(File::open(path)?)
}

fn quad_rows(results: Vec<(u32, QuadResult)>, path: &Option<PathBuf>) -> Result<bool> {
    let rows: Vec<(u32, f64, f64)> = results.iter().map(|(n, r)| (*n, r.value, r.abs_error)).collect();
    write_value_table(path, &rows)?;
    Ok(results.iter().all(|(_, r)| r.converged))
}

#[derive(Serialize)]
struct DecayReport {
    exponent: f64,
    log_c: f64,
    residual: f64,
    min_n: u64,
    points: usize,
}

#[derive(Serialize)]
struct SectorLine<'a> {
    case: usize,
    check: &'a str,
    e: [f64; 2],
    alpha: f64,
    r: f64,
    m: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct ContentReport {
    r_minus: f64,
    r_plus: f64,
    balls: usize,
    content_upper: f64,
}

#[derive(Serialize)]
struct RectReport {
    eps: f64,
    r: f64,
    m: f64,
    points: usize,
    search: RectSearch,
    lower_bound: f64,
}

/// Runs one subcommand; `Ok(false)` signals non-convergence.
fn dispatch(cmd: &Command) -> Result<bool> {
    match cmd {
        Command::GenCantor { n, out } => {
            let mut w = output(out)?;
            cantor_generation(*n)?.write_csv(&mut w)?;
            w.flush()?;
            Ok(true)
        }
        Command::Favard { set, quad, out } => {
            let q = quad.spec()?;
            let results = parse_set_spec(set)?.into_iter().map(|(n, s)| (n, favard_length(&s, &q))).collect();
            quad_rows(results, out)
        }
        Command::Favc { set, curve, quad, out } => {
            let q = quad.spec()?;
            let c = parse_curve_spec(curve)?;
            let results = parse_set_spec(set)?
                .into_iter()
                .map(|(n, s)| (n, favard_curve_length(&c, &s, &q)))
                .collect();
            quad_rows(results, out)
        }
        Command::Buffon {
            set,
            curve,
            samples,
            seed,
            out,
        } => {
            let c = parse_curve_spec(curve)?;
            let mc = McSpec {
                samples: *samples,
                seed: *seed,
                ..McSpec::default()
            };
            let mut rows = Vec::new();
            for (n, s) in parse_set_spec(set)? {
                let Some(bbox) = s.bounding_box() else {
                    rows.push((n, 0.0, 0.0));
                    continue;
                };
                let (a, b) = difference_ranges(&c, &bbox);
                let est = buffon_curve_mc(&c, &s, &mc, a, b)?;
                rows.push((n, est.estimate, est.std_error));
            }
            write_value_table(out, &rows)?;
            Ok(true)
        }
        Command::Decay {
            input,
            min_n,
            plot,
            out,
        } => {
            let rows = read_value_table(input)?;
            let pts: Vec<(f64, f64)> = rows.iter().filter(|r| r.0 >= *min_n as f64).map(|r| (r.0, r.1)).collect();
            let fit = fit_decay(&pts)?;
            if let Some(svg) = plot {
                std::fs::write(svg, decay_svg(&rows, "decay")?)?;
            }
            write_json(
                out,
                &DecayReport {
                    exponent: fit.exponent,
                    log_c: fit.log_c,
                    residual: fit.residual,
                    min_n: *min_n,
                    points: pts.len(),
                },
            )?;
            Ok(true)
        }
        Command::SectorCheck {
            curve,
            e,
            alpha,
            r,
            m,
            cases,
            samples,
            seed,
            out,
        } => {
            let c = parse_curve_spec(curve)?;
            let specs = match (e, r, m) {
                (Some(e), Some(r), Some(m)) => vec![SectorSpec::new(c, *e, *alpha, *r, *m)?],
                (None, None, None) => random_sector_cases(&c, *cases, *seed)?,
                _ => return Err(Error::param("give all of --e, --r, --m or none of them")),
            };
            let mut w = output(out)?;
            let mut failed = None;
            for (k, s) in specs.iter().enumerate() {
                let seed = seed.wrapping_add(2 * k as u64 + 1);
                let comp = verify_sector_comparability(s, *samples, seed).map(|r| serde_json::to_value(r).ok());
                let strip = verify_strip_containment(s, *samples, seed + 1).map(|r| serde_json::to_value(r).ok());
                for (check, res) in [("comparability", comp), ("strip", strip)] {
                    let (report, error) = match res {
                        Ok(v) => (v, None),
                        Err(err) => {
                            let msg = err.to_string();
                            failed.get_or_insert(err);
                            (None, Some(msg))
                        }
                    };
                    let line = SectorLine {
                        case: k,
                        check,
                        e: [s.e.x, s.e.y],
                        alpha: s.alpha,
                        r: s.r,
                        m: s.m,
                        report,
                        error,
                    };
                    writeln!(w, "{}", serde_json::to_string(&line).map_err(|e| Error::Parse(e.to_string()))?)?;
                }
            }
            w.flush()?;
            match failed {
                Some(err) => Err(err),
                None => Ok(true),
            }
        }
        Command::Pigeonhole { masses, eps, out } => {
            let choice = sliding_pigeonhole(&read_masses(masses)?, *eps)?;
            write_json(out, &choice)?;
            Ok(true)
        }
        Command::Content {
            set,
            cloud,
            r_minus,
            r_plus,
            balls,
            out,
        } => {
            let cover = match (set, cloud) {
                (Some(spec), _) => {
                    let sets = parse_set_spec(spec)?;
                    if sets.len() != 1 {
                        return Err(Error::param("content takes a single set, not a range"));
                    }
                    hausdorff_content_cover(&sets[0].1, *r_minus, *r_plus)?
                }
                (None, Some(path)) => hausdorff_content_cover_points(&read_cloud(path)?, *r_minus, *r_plus)?,
                (None, None) => return Err(Error::param("content needs --set or --cloud")),
            };
            if let Some(path) = balls {
                let mut wtr = csv::Writer::from_path(path)?;
                wtr.write_record(["x", "y", "radius"])?;
                for b in &cover.balls {
                    wtr.write_record([fmt17(b.center.x), fmt17(b.center.y), fmt17(b.radius)])?;
                }
                wtr.flush()?;
            }
            write_json(
                out,
                &ContentReport {
                    r_minus: *r_minus,
                    r_plus: *r_plus,
                    balls: cover.balls.len(),
                    content_upper: cover.content_upper,
                },
            )?;
            Ok(true)
        }
        Command::RectConst {
            cloud,
            eps,
            r,
            m,
            angles,
            cells,
            nodes,
            max_candidates,
            local_candidates,
            out,
        } => {
            let pts = read_cloud(cloud)?;
            let search = RectSearch {
                angles: *angles,
                cells: *cells,
                nodes: *nodes,
                max_candidates: *max_candidates,
                local_candidates: *local_candidates,
            };
            let lower_bound = rectifiability_constant_lower(&pts, *eps, *r, *m, &search)?;
            write_json(
                out,
                &RectReport {
                    eps: *eps,
                    r: *r,
                    m: *m,
                    points: pts.len(),
                    search,
                    lower_bound,
                },
            )?;
            Ok(true)
        }
        Command::Plot { inputs, out } => {
            let mut series = Vec::new();
            for path in inputs {
                let rows = read_value_table(path)?;
                let name = path.file_stem().map_or("data".into(), |s| s.to_string_lossy().into_owned());
                series.push(Series::data(name, rows.iter().filter(|r| r.0 >= 1.0).map(|r| (r.0, r.1)).collect()));
            }
            std::fs::write(out, loglog_svg("values", "n", "value", &series)?)?;
            Ok(true)
        }
    }
}

/// Data with the reference shapes `n^{-1/6}`, `1/n` and `ln n / n`
/// normalized to the first data point with `n ≥ 2`.
pub fn decay_svg(rows: &[(f64, f64, f64)], title: &str) -> Result<String> {
    let data: Vec<(f64, f64)> = rows.iter().filter(|r| r.0 >= 1.0).map(|r| (r.0, r.1)).collect();
    let xs: Vec<f64> = data.iter().map(|p| p.0).filter(|&n| n >= 2.0).collect();
    let anchor = data.iter().find(|p| p.0 >= 2.0).map_or(1.0, |p| p.1);
    let mut series = vec![Series::data(title, data)];
    if !xs.is_empty() {
        series.push(Series::reference("n^-1/6", &xs, anchor, |n| n.powf(-1.0 / 6.0)));
        series.push(Series::reference("1/n", &xs, anchor, |n| 1.0 / n));
        series.push(Series::reference("ln n / n", &xs, anchor, |n| n.ln() / n));
    }
    loglog_svg(title, "n", "value", &series)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_parsing() {
        assert_eq!(parse_count("1e7"), Ok(10_000_000));
        assert_eq!(parse_count("250000"), Ok(250_000));
        assert!(parse_count("0").is_err());
        assert!(parse_count("1.5").is_err());
        assert!(parse_count("x").is_err());
    }

    #[test]
    fn set_specs() {
        let v = parse_set_spec("cantor:0..6").unwrap();
        assert_eq!(v.iter().map(|p| p.0).collect::<Vec<_>>(), (0..=6).collect::<Vec<_>>());
        assert_eq!(parse_set_spec("boundary:2").unwrap()[0].1.components().len(), 64);
        assert_eq!(parse_set_spec("ifs:1:3:0,2").unwrap()[0].1.components().len(), 4);
        assert_eq!(parse_set_spec("square").unwrap()[0].0, 0);
        assert!(parse_set_spec("cantor:3..1").is_err());
        assert!(parse_set_spec("disk").is_err());
        assert!(parse_set_spec("cantor:13").is_err());
    }

    #[test]
    fn curve_specs() {
        let c = parse_curve_spec("parabola:h=0.5,I=[-0.9,0.9]").unwrap();
        assert_eq!(c.base().domain(), Interval { lo: -0.9, hi: 0.9 });
        let c = parse_curve_spec("circle-arc:R=2,I=[-1,1]").unwrap();
        assert_eq!(c.base().lambda(), 2.0);
        assert!(parse_curve_spec("parabola:h=0.5").is_err());
        assert!(parse_curve_spec("spiral:h=1,I=[0,1]").is_err());
        assert!(parse_curve_spec("circle-arc:R=1,I=[-1,1]").is_err());
    }

    #[test]
    fn config_merging() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("lab.conf");
        std::fs::write(&path, "# defaults\nrel_tol = 1e-6\nset=cantor:1\n\n").unwrap();
        let argv: Vec<String> = ["favard-lab", "favard", "--set", "square", "--config", path.to_str().unwrap()]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let merged = merge_config(argv).unwrap();
        assert!(merged.contains(&"--rel-tol=1e-6".to_string()));
        assert!(!merged.iter().any(|a| a.starts_with("--set=")));
        let cli = Cli::try_parse_from(merged).unwrap();
        match cli.command {
            Command::Favard { set, quad, .. } => {
                assert_eq!(set, "square");
                assert_eq!(quad.rel_tol, 1e-6);
            }
            _ => panic!("wrong subcommand"),
        }
    }

    #[test]
    fn usage_errors_exit_two() {
        let argv = |a: &[&str]| a.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        assert_eq!(run(argv(&["favard-lab", "favard", "--bogus", "1"])), EXIT_USAGE);
        assert_eq!(run(argv(&["favard-lab", "favard", "--set", "disk"])), EXIT_USAGE);
        assert_eq!(run(argv(&["favard-lab", "gen-cantor", "--n", "13"])), EXIT_USAGE);
    }

    #[test]
    fn non_convergence_exits_three() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("f.csv");
        let argv: Vec<String> = [
            "favard-lab",
            "favard",
            "--set",
            "cantor:3",
            "--rel-tol",
            "1e-15",
            "--max-refinements",
            "1",
            "--out",
            out.to_str().unwrap(),
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        assert_eq!(run(argv), EXIT_NO_CONVERGENCE);
        assert!(std::fs::read_to_string(out).unwrap().starts_with("n,value,std_error\n3,"));
    }
}
