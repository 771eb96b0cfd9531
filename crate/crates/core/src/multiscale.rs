//! Multiscale objects: restricted Hausdorff content covers, a lower-bound
//! estimator for the rectifiability constant, curve and straight double
//! sectors, the sliding pigeonhole selector, and point-cloud detectors.

use std::collections::BTreeSet;
use std::f64::consts::{PI, SQRT_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curves::{frame_at, ExtendedGraphCurve, TranslatedCurve, DELTA};
use crate::error::{Error, Result};
use crate::geom::{PlanarSet, Point, WeightedPointCloud};
use crate::interval::Interval;
use crate::roots::find_root;

/// Radii `(r⁻_n, r⁺_n)` for `n = 1..=N` with `r⁺_{n+1} ≤ r⁻_n / 2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleSequence {
    radii: Vec<(f64, f64)>,
}

impl ScaleSequence {
    pub fn new(radii: Vec<(f64, f64)>) -> Result<Self> {
        for (k, &(lo, hi)) in radii.iter().enumerate() {
            if !(lo > 0.0 && lo <= hi) {
                return Err(Error::param(format!("scale {}: need 0 < r- <= r+, got ({lo}, {hi})", k + 1)));
            }
        }
        for (k, w) in radii.windows(2).enumerate() {
            if w[1].1 > w[0].0 / 2.0 {
                return Err(Error::param(format!(
                    "scales {} and {} are not separated: r+ = {} > r- / 2 = {}",
                    k + 1,
                    k + 2,
                    w[1].1,
                    w[0].0 / 2.0
                )));
            }
        }
        Ok(ScaleSequence { radii })
    }

    /// `r⁻_n = 4^{-n}·a`, `r⁺_n = 4^{-n}·b` style geometric sequence.
    pub fn geometric(n: usize, r_minus_1: f64, r_plus_1: f64, ratio: f64) -> Result<Self> {
        Self::new(
            (0..n)
                .map(|k| (r_minus_1 * ratio.powi(k as i32), r_plus_1 * ratio.powi(k as i32)))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// `(r⁻_n, r⁺_n)` for `1 ≤ n ≤ N`.
    pub fn get(&self, n: i64) -> Result<(f64, f64)> {
        if n < 1 || n as usize > self.radii.len() {
            return Err(Error::ScaleIndex {
                index: n,
                len: self.radii.len(),
            });
        }
        Ok(self.radii[n as usize - 1])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContentCover {
    pub balls: Vec<Ball>,
    /// `Σ diam(B)`, an upper bound on `H¹_{r⁻,r⁺}`.
    pub content_upper: f64,
}

const MAX_COVER_CELLS: usize = 1 << 24;

/// Grid cover: cells `[i p, (i+1) p) × [j p, (j+1) p)` with pitch
/// `p = r⁺/√2`; every cell meeting the set contributes one ball of radius
/// `r⁺` at its center, which contains the closed cell.
pub fn hausdorff_content_cover<S: PlanarSet + ?Sized>(s: &S, r_minus: f64, r_plus: f64) -> Result<ContentCover> {
    check_radii(r_minus, r_plus)?;
    let p = r_plus / SQRT_2;
    let mut cells = BTreeSet::new();
    for r in s.components() {
        let (i0, i1) = ((r.x0 / p).floor() as i64, (r.x1 / p).floor() as i64);
        let (j0, j1) = ((r.y0 / p).floor() as i64, (r.y1 / p).floor() as i64);
        if (i1 - i0 + 1) as f64 * (j1 - j0 + 1) as f64 + cells.len() as f64 > MAX_COVER_CELLS as f64 {
            return Err(Error::param(format!("cover at r+ = {r_plus} needs too many balls")));
        }
        for i in i0..=i1 {
            for j in j0..=j1 {
                cells.insert((i, j));
            }
        }
    }
    Ok(cover_from_cells(cells, p, r_plus))
}

/// Same cover for a finite point set.
pub fn hausdorff_content_cover_points(cloud: &WeightedPointCloud, r_minus: f64, r_plus: f64) -> Result<ContentCover> {
    check_radii(r_minus, r_plus)?;
    let p = r_plus / SQRT_2;
    let cells = cloud
        .points
        .iter()
        .map(|q| ((q.x / p).floor() as i64, (q.y / p).floor() as i64))
        .collect();
    Ok(cover_from_cells(cells, p, r_plus))
}

fn check_radii(r_minus: f64, r_plus: f64) -> Result<()> {
    if !(r_minus >= 0.0 && r_minus < r_plus && r_plus.is_finite()) {
        return Err(Error::param(format!("need 0 <= r- < r+, got r- = {r_minus}, r+ = {r_plus}")));
    }
    Ok(())
}

fn cover_from_cells(cells: BTreeSet<(i64, i64)>, p: f64, r_plus: f64) -> ContentCover {
    let balls: Vec<Ball> = cells
        .into_iter()
        .map(|(i, j)| Ball {
            center: Point::new((i as f64 + 0.5) * p, (j as f64 + 0.5) * p),
            radius: r_plus,
        })
        .collect();
    ContentCover {
        content_upper: balls.len() as f64 * 2.0 * r_plus,
        balls,
    }
}

/// Search grid for [`rectifiability_constant_lower`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RectSearch {
    /// Frames `ω₁ = (cos θ, sin θ)` for `θ = kπ/angles`.
    pub angles: usize,
    /// Cells of `J` used to measure the covered set.
    pub cells: usize,
    /// Linear pieces of `F` over `J`; must divide `cells`.
    pub nodes: usize,
    /// Cap on the window-wide candidate node heights.
    pub max_candidates: usize,
    /// Cap on the extra candidates taken from the cells touching each node.
    pub local_candidates: usize,
}

impl Default for RectSearch {
    fn default() -> Self {
        RectSearch {
            angles: 64,
            cells: 4096,
            nodes: 64,
            max_candidates: 16,
            local_candidates: 8,
        }
    }
}

/// Lower bound on `R_E(ε, r, M)` for the support of `cloud`.
///
/// Windows `J` have length exactly `r` and start on multiples of `r/nodes`.
/// `F` is piecewise linear with `nodes` pieces over `J`, node heights drawn
/// from the heights of cloud points in the window (capped at
/// `max_candidates`) and in the cells touching the node (capped at
/// `local_candidates`), and node-to-node slope at most `M`. The best `F` is
/// found by dynamic programming. A cell of `J` counts as covered when it
/// holds the abscissa of a point within `ε` of `F` along `ω₂`.
///
/// While neither candidate cap is binding the result is nondecreasing in
/// `ε`, in `M` and in the cloud.
pub fn rectifiability_constant_lower(cloud: &WeightedPointCloud, eps: f64, r: f64, m: f64, search: &RectSearch) -> Result<f64> {
    if !(eps > 0.0 && r > 0.0 && m > 0.0) {
        return Err(Error::param(format!("need eps, r, M > 0, got {eps}, {r}, {m}")));
    }
    if search.nodes == 0 || !search.cells.is_multiple_of(search.nodes) || search.angles == 0 {
        return Err(Error::param("rect search needs angles > 0 and nodes dividing cells"));
    }
    if cloud.is_empty() {
        return Ok(0.0);
    }
    let mut best = 0.0f64;
    for k in 0..search.angles {
        let theta = PI * k as f64 / search.angles as f64;
        let (s, c) = theta.sin_cos();
        let mut uv: Vec<(f64, f64)> = cloud.points.iter().map(|p| (p.x * c + p.y * s, -p.x * s + p.y * c)).collect();
        uv.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let h = r / search.nodes as f64;
        let first = ((uv[0].0 - r) / h).floor() as i64;
        let last = (uv[uv.len() - 1].0 / h).floor() as i64;
        for j in first..=last {
            let start = j as f64 * h;
            let lo = uv.partition_point(|p| p.0 < start);
            let hi = uv.partition_point(|p| p.0 <= start + r);
            if lo == hi {
                continue;
            }
            let ratio = window_ratio(&uv[lo..hi], start, eps, r, m, search, best);
            best = best.max(ratio);
            if best >= 1.0 {
                return Ok(1.0);
            }
        }
    }
    Ok(best)
}

fn window_ratio(pts: &[(f64, f64)], start: f64, eps: f64, r: f64, m: f64, search: &RectSearch, best: f64) -> f64 {
    let cells = search.cells;
    let per_piece = cells / search.nodes;
    let cell_of = |u: f64| (((u - start) / r * cells as f64).floor().max(0.0) as usize).min(cells - 1);

    let mut distinct: Vec<usize> = pts.iter().map(|p| cell_of(p.0)).collect();
    distinct.dedup();
    if distinct.len() as f64 / cells as f64 <= best {
        return 0.0;
    }

    let h = r / search.nodes as f64;
    let step = m * h;

    // points grouped by piece; cells are nondecreasing within a piece
    let mut pieces: Vec<Vec<(f64, f64, usize)>> = vec![Vec::new(); search.nodes];
    for &(u, v) in pts {
        let cell = cell_of(u);
        pieces[cell / per_piece].push((u, v, cell));
    }

    // node heights: window-wide quantiles plus the heights found in the two
    // cells touching the node
    let global = quantile_subset(pts.iter().map(|p| p.1).collect(), search.max_candidates);
    let candidates: Vec<Vec<f64>> = (0..=search.nodes)
        .map(|k| {
            let node_cell = k * per_piece;
            let near = |c: usize| c + 1 == node_cell || c == node_cell;
            let local: Vec<f64> = pieces[k.saturating_sub(1)..(k + 1).min(search.nodes)]
                .iter()
                .flatten()
                .filter(|p| near(p.2))
                .map(|p| p.1)
                .collect();
            let mut all = quantile_subset(local, search.local_candidates);
            all.extend_from_slice(&global);
            all.sort_by(f64::total_cmp);
            all.dedup();
            all
        })
        .collect();

    let mut dp = vec![0usize; candidates[0].len()];
    for (k, piece) in pieces.iter().enumerate() {
        let x0 = start + k as f64 * h;
        let next: Vec<usize> = candidates[k + 1]
            .iter()
            .map(|&vb| {
                let mut top = 0usize;
                for (a, &va) in candidates[k].iter().enumerate() {
                    if (vb - va).abs() <= step {
                        top = top.max(dp[a] + covered_cells(piece, x0, h, va, vb, eps));
                    }
                }
                top
            })
            .collect();
        dp = next;
    }
    dp.into_iter().max().unwrap_or(0) as f64 / cells as f64
}

/// Sorted distinct values, thinned to `cap` evenly spaced order statistics.
fn quantile_subset(mut v: Vec<f64>, cap: usize) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    let n = v.len();
    if n <= cap {
        return v;
    }
    match cap {
        0 => Vec::new(),
        1 => vec![v[n / 2]],
        k => (0..k).map(|i| v[i * (n - 1) / (k - 1)]).collect(),
    }
}

fn covered_cells(piece: &[(f64, f64, usize)], x0: f64, h: f64, va: f64, vb: f64, eps: f64) -> usize {
    let mut count = 0;
    let mut last = usize::MAX;
    for &(u, v, cell) in piece {
        if cell == last {
            continue;
        }
        let f = va + (vb - va) * ((u - x0) / h);
        if (v - f).abs() <= eps {
            count += 1;
            last = cell;
        }
    }
    count
}

/// Parameters of a curve double-sector `𝒳_{e,α}(r, M)`.
#[derive(Clone, Copy, Debug)]
pub struct SectorSpec {
    pub e: Point,
    pub alpha: f64,
    pub r: f64,
    pub m: f64,
    pub curve: ExtendedGraphCurve,
}

impl SectorSpec {
    /// Checks `r > 0`, `M ≥ 1/δ` and `e₁ − α ∈ I`.
    pub fn new(curve: ExtendedGraphCurve, e: Point, alpha: f64, r: f64, m: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::param(format!("sector radius must be positive, got {r}")));
        }
        if !(m >= 1.0 / DELTA) {
            return Err(Error::hypothesis(format!("M >= 1/delta fails: M = {m}, 1/delta = {}", 1.0 / DELTA)));
        }
        let i = curve.base().domain();
        if !i.contains(e.x - alpha) {
            return Err(Error::OutOfDomain {
                t: e.x - alpha,
                lo: i.lo,
                hi: i.hi,
            });
        }
        Ok(SectorSpec { e, alpha, r, m, curve })
    }

    fn with(&self, r: f64, m: f64) -> SectorSpec {
        SectorSpec { r, m, ..*self }
    }
}

/// `z ∈ C_{e,α'}` for some `|α' − α| ≤ 1/M`, and `|z − e| ≤ r`.
///
/// Solves `g(α') = (z₂ − φ₊(z₁ − α')) − (e₂ − φ₊(e₁ − α')) = 0` by a sign
/// change scan over 8 sub-brackets; translations for which `z₁ − α'` or
/// `e₁ − α'` leaves `I₊` are excluded. `g` is evaluated in coordinates
/// relative to `e`, so sectors far below the coordinate scale stay resolved.
pub fn curve_sector_member(spec: &SectorSpec, z: Point) -> bool {
    let (e, c) = (spec.e, &spec.curve);
    if z.dist(e) > spec.r {
        return false;
    }
    if z == e {
        return true;
    }
    let d = c.domain_plus();
    let lo = (spec.alpha - 1.0 / spec.m).max(z.x - d.hi).max(e.x - d.hi);
    let hi = (spec.alpha + 1.0 / spec.m).min(z.x - d.lo).min(e.x - d.lo);
    let u = z.sub(e);
    let g = |a: f64| u.y - c.phi_plus_diff(e.x - a, u.x);
    find_root(g, lo, hi, 8, 1e-13).is_some()
}

/// `|(z − e)·ω| ≤ |z − e| / M` and `|z − e| ≤ r`.
pub fn straight_sector_member(e: Point, omega: Point, r: f64, m: f64, z: Point) -> bool {
    let u = z.sub(e);
    let n = u.norm();
    n <= r && u.dot(omega).abs() <= n / m
}

/// Length of the vertical slice `{y : (e₁ + dx, y) ∈ X_{e,ω}(r, 1/μ)}`.
pub fn straight_sector_slice(omega: Point, r: f64, mu: f64, dx: f64) -> f64 {
    if dx.abs() > r {
        return 0.0;
    }
    let a = omega.y * omega.y - mu * mu;
    let b = 2.0 * dx * omega.x * omega.y;
    let c = (omega.x * omega.x - mu * mu) * dx * dx;
    let disc = b * b - 4.0 * a * c;
    if a <= 0.0 || disc < 0.0 {
        return if a <= 0.0 { 2.0 * (r * r - dx * dx).sqrt() } else { 0.0 };
    }
    let sq = disc.sqrt();
    let (y0, y1) = ((-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a));
    let hdisk = (r * r - dx * dx).sqrt();
    (y1.min(hdisk) - y0.max(-hdisk)).max(0.0)
}

/// `c₁ = λ √(8 [1 + (1 + 2λ/M)²])`.
pub fn inner_constant(lambda: f64, m: f64) -> f64 {
    lambda * (8.0 * (1.0 + (1.0 + 2.0 * lambda / m).powi(2))).sqrt()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SectorReport {
    pub checked: u64,
    /// Samples in the small straight sector `X(r, c₁M)`.
    pub inner_members: u64,
    /// Samples in the curve sector.
    pub curve_members: u64,
    pub inner_violations: u64,
    pub outer_violations: u64,
    pub slice_violations: u64,
    /// Largest slice length over its bound `√8 μ r`.
    pub max_slice_ratio: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StripReport {
    pub checked: u64,
    pub curve_members: u64,
    pub violations: u64,
    /// `√8 λ (1/M + r) r`.
    pub half_width: f64,
    /// Largest `|Φ_{α,+}(z) − Φ_α(e)|` over the half width.
    pub max_ratio: f64,
}

/// Samples biased towards the sector edges: directions `±ω₁` turned by an
/// angle on one of the three sector scales, plus uniform disk samples.
fn sector_samples(spec: &SectorSpec, omega1: Point, scales: [f64; 3], samples: u64, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|k| {
            let rho = spec.r * rng.gen::<f64>();
            let angle = if k % 8 == 7 {
                rng.gen::<f64>() * 2.0 * PI
            } else {
                let w = scales[(k % 3) as usize];
                let base = if rng.gen::<bool>() { 0.0 } else { PI };
                base + omega1.y.atan2(omega1.x) + w * (4.0 * rng.gen::<f64>() - 2.0)
            };
            Point::new(spec.e.x + rho * angle.cos(), spec.e.y + rho * angle.sin())
        })
        .collect()
}

/// Checks `X(r, c₁M) ⊂ 𝒳_{e,α}(r, M) ⊂ X(r, M/(λ(1+Mr)))` on sampled
/// points and the vertical slice bound `√8 μ r`, `μ = λ(1/M + r)`, for the
/// outer straight sector.
pub fn verify_sector_comparability(spec: &SectorSpec, samples: u64, seed: u64) -> Result<SectorReport> {
    let lambda = spec.curve.base().lambda();
    let (r, m) = (spec.r, spec.m);
    if !(DELTA >= 1.0 / m + r) {
        return Err(Error::hypothesis(format!("delta >= 1/M + r fails: 1/M + r = {}", 1.0 / m + r)));
    }
    if !(r <= 1.0 / (2.0 * lambda * lambda * m)) {
        return Err(Error::hypothesis(format!(
            "r <= 1/(2 lambda^2 M) fails: r = {r}, bound = {}",
            1.0 / (2.0 * lambda * lambda * m)
        )));
    }
    let mu = lambda * (1.0 / m + r);
    if !(mu < 1.0 / SQRT_2) {
        return Err(Error::hypothesis(format!("lambda (1/M + r) < 1/sqrt2 fails: {mu}")));
    }
    let frame = frame_at(&spec.curve, spec.e, spec.alpha)?;
    let m_in = inner_constant(lambda, m) * m;
    let m_out = m / (lambda * (1.0 + m * r));
    let slice_bound = 8f64.sqrt() * mu * r;
    let pts = sector_samples(spec, frame.omega1, [1.0 / m_in, 1.0 / m, 1.0 / m_out], samples, seed);

    let rows: Vec<SectorReport> = pts
        .par_iter()
        .map(|&z| {
            let mut rep = SectorReport {
                checked: 1,
                ..Default::default()
            };
            let curve = curve_sector_member(spec, z);
            if straight_sector_member(spec.e, frame.omega2, r, m_in, z) {
                rep.inner_members = 1;
                rep.inner_violations = (!curve) as u64;
            }
            if curve {
                rep.curve_members = 1;
                rep.outer_violations = (!straight_sector_member(spec.e, frame.omega2, r, m_out, z)) as u64;
            }
            let slice = straight_sector_slice(frame.omega2, r, mu, z.x - spec.e.x);
            rep.max_slice_ratio = slice / slice_bound;
            rep.slice_violations = (slice > slice_bound * (1.0 + 1e-12)) as u64;
            rep
        })
        .collect();
    Ok(rows.iter().fold(SectorReport::default(), |a, b| SectorReport {
        checked: a.checked + b.checked,
        inner_members: a.inner_members + b.inner_members,
        curve_members: a.curve_members + b.curve_members,
        inner_violations: a.inner_violations + b.inner_violations,
        outer_violations: a.outer_violations + b.outer_violations,
        slice_violations: a.slice_violations + b.slice_violations,
        max_slice_ratio: a.max_slice_ratio.max(b.max_slice_ratio),
    }))
}

/// Checks `𝒳_{e,α}(r, M) ⊂ Φ_{α,+}⁻¹(J)` with
/// `J = Φ_α(e) ± √8 λ (1/M + r) r` on sampled points.
pub fn verify_strip_containment(spec: &SectorSpec, samples: u64, seed: u64) -> Result<StripReport> {
    let lambda = spec.curve.base().lambda();
    let (r, m) = (spec.r, spec.m);
    let cap = (1.0 / (SQRT_2 * lambda)).min(DELTA);
    if !(1.0 / m + r < cap) {
        return Err(Error::hypothesis(format!(
            "1/M + r < min(1/(sqrt2 lambda), delta) fails: {} >= {cap}",
            1.0 / m + r
        )));
    }
    let frame = frame_at(&spec.curve, spec.e, spec.alpha)?;
    let half = 8f64.sqrt() * lambda * (1.0 / m + r) * r;
    let m_out = m / (lambda * (1.0 + m * r));
    let pts = sector_samples(spec, frame.omega1, [1.0 / m, 0.5 / m, 1.0 / m_out], samples, seed);
    let rows: Vec<(u64, u64, f64)> = pts
        .par_iter()
        .map(|&z| {
            if !curve_sector_member(spec, z) {
                return (0, 0, 0.0);
            }
            let t = z.x - spec.alpha;
            let inside = spec.curve.domain_plus().contains(t);
            let u = z.sub(spec.e);
            // Φ_{α,+}(z) − Φ_α(e)
            let dev = if inside {
                (u.y - spec.curve.phi_plus_diff(spec.e.x - spec.alpha, u.x)).abs()
            } else {
                f64::INFINITY
            };
            (1, (dev > half) as u64, dev / half)
        })
        .collect();
    Ok(StripReport {
        checked: samples,
        curve_members: rows.iter().map(|x| x.0).sum(),
        violations: rows.iter().map(|x| x.1).sum(),
        half_width: half,
        max_ratio: rows.iter().map(|x| x.2).fold(0.0, f64::max),
    })
}

/// Random sector parameters satisfying both verification hypotheses:
/// `M` log-uniform in `[2·10⁵, 10⁷]`, `r` up to
/// `min(δ − 1/M, 1/(2λ²M), min(1/(√2λ), δ) − 1/M)`, `e₁ − α` inside `I`.
pub fn random_sector_cases(curve: &ExtendedGraphCurve, count: usize, seed: u64) -> Result<Vec<SectorSpec>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lambda = curve.base().lambda();
    let i = curve.base().domain();
    let cap = (1.0 / (SQRT_2 * lambda)).min(DELTA);
    (0..count)
        .map(|_| {
            let m = (2e5f64.ln() + rng.gen::<f64>() * (1e7f64.ln() - 2e5f64.ln())).exp();
            let r_max = (DELTA - 1.0 / m).min(1.0 / (2.0 * lambda * lambda * m)).min(cap - 1.0 / m) * 0.999;
            if !(r_max > 0.0) {
                return Err(Error::hypothesis(format!("no admissible radius for lambda = {lambda}, M = {m}")));
            }
            let r = r_max * rng.gen_range(0.05..=1.0);
            let alpha = rng.gen_range(-0.5..0.5);
            let t = rng.gen_range(i.lo + 0.05 * i.len()..i.hi - 0.05 * i.len());
            let e = Point::new(alpha + t, rng.gen_range(-0.5..0.5) + curve.phi_plus(t));
            SectorSpec::new(*curve, e, alpha, r, m)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PigeonholeChoice {
    pub n: usize,
    pub m: usize,
    pub deficiency: f64,
    /// `k/(N − k) · masses[N]` with `k = ⌈εN⌉`.
    pub bound: f64,
}

/// Picks the window `[n, n + k]`, `k = ⌈εN⌉`, with the smallest mass
/// increment (ties go to the smallest `n`).
pub fn sliding_pigeonhole(masses: &[f64], eps: f64) -> Result<PigeonholeChoice> {
    if masses.len() < 3 {
        return Err(Error::param(format!("need masses for 0..N with N >= 2, got {} values", masses.len())));
    }
    let n_top = masses.len() - 1;
    let nf = n_top as f64;
    if !(eps >= 1.0 / nf && eps <= 0.5) {
        return Err(Error::param(format!("eps = {eps} outside [1/N, 1/2] for N = {n_top}")));
    }
    if let Some(&x) = masses.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::param(format!("masses must be finite and nonnegative, got {x}")));
    }
    if let Some(i) = (1..masses.len()).find(|&i| masses[i] < masses[i - 1]) {
        return Err(Error::param(format!(
            "masses decrease at index {i}: {} < {}",
            masses[i],
            masses[i - 1]
        )));
    }
    let k = ((eps * nf).ceil() as usize).max(1);
    let (n, deficiency) = (0..=n_top - k)
        .map(|n| (n, masses[n + k] - masses[n]))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
    Ok(PigeonholeChoice {
        n,
        m: n + k,
        deficiency,
        bound: k as f64 / (n_top - k) as f64 * masses[n_top],
    })
}

fn on_curve(c: &TranslatedCurve, p: Point, band: f64) -> bool {
    c.vertical_offset(p).is_some_and(|d| d.abs() <= band)
}

/// Greedy left-to-right extraction of an `r_sep`-separated subset among
/// cloud points within `band` (vertically) of `C_{e,α}`.
pub fn separated_on_curve(
    curve: &ExtendedGraphCurve,
    e: Point,
    alpha: f64,
    cloud: &WeightedPointCloud,
    r_sep: f64,
    band: f64,
) -> Result<Vec<Point>> {
    if !(r_sep > 0.0 && band >= 0.0) {
        return Err(Error::param(format!("need r_sep > 0 and band >= 0, got {r_sep}, {band}")));
    }
    let c = TranslatedCurve::through(curve, e, alpha)?;
    let mut pts: Vec<Point> = cloud.points.iter().map(|p| p.point()).filter(|&p| on_curve(&c, p, band)).collect();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    let mut kept: Vec<Point> = Vec::new();
    for p in pts {
        if kept.last().is_none_or(|q| q.dist(p) >= r_sep) {
            kept.push(p);
        }
    }
    Ok(kept)
}

/// High multiplicity: at least `threshold` separated on-curve points.
pub fn detect_high_multiplicity(
    curve: &ExtendedGraphCurve,
    e: Point,
    alpha: f64,
    cloud: &WeightedPointCloud,
    r_sep: f64,
    threshold: usize,
    band: f64,
) -> Result<bool> {
    Ok(separated_on_curve(curve, e, alpha, cloud, r_sep, band)?.len() >= threshold)
}

/// Positive multiplicity: some on-curve point `y` with
/// `|y − e| ∈ [r⁻_{n+k}, r⁺_{n−k}]`.
#[allow(clippy::too_many_arguments)]
pub fn detect_positive_multiplicity(
    curve: &ExtendedGraphCurve,
    e: Point,
    alpha: f64,
    cloud: &WeightedPointCloud,
    scales: &ScaleSequence,
    n: i64,
    k: i64,
    band: f64,
) -> Result<bool> {
    let (r_lo, _) = scales.get(n + k)?;
    let (_, r_hi) = scales.get(n - k)?;
    let c = TranslatedCurve::through(curve, e, alpha)?;
    Ok(cloud.points.iter().any(|p| {
        let q = p.point();
        let d = q.dist(e);
        on_curve(&c, q, band) && d >= r_lo && d <= r_hi
    }))
}

/// High density: `μ(Φ_{α,+}⁻¹(J)) ≥ threshold_ratio · |J|`.
pub fn detect_high_density_strip(
    curve: &ExtendedGraphCurve,
    alpha: f64,
    j: Interval,
    cloud: &WeightedPointCloud,
    threshold_ratio: f64,
) -> Result<bool> {
    if !(j.len() > 0.0) {
        return Err(Error::param(format!("strip interval [{}, {}] is degenerate", j.lo, j.hi)));
    }
    let d = curve.domain_plus();
    let mass: f64 = cloud
        .points
        .iter()
        .filter(|p| {
            let t = p.x - alpha;
            d.contains(t) && j.contains(p.y - curve.phi_plus(t))
        })
        .map(|p| p.w)
        .sum();
    Ok(mass >= threshold_ratio * j.len())
}

/// Curve pair: the mass of `𝒳_{e,α}(r, M') ∖ 𝒳_{e,α}(r_inner, M')`,
/// `M' = M/10⁴`, exceeds `threshold`.
pub fn detect_curve_pair(spec: &SectorSpec, cloud: &WeightedPointCloud, r_inner: f64, threshold: f64) -> Result<bool> {
    if !(r_inner < spec.r) {
        return Err(Error::param(format!("r_inner = {r_inner} must be below r = {}", spec.r)));
    }
    let m = spec.m / 1e4;
    let outer = spec.with(spec.r, m);
    let inner = spec.with(r_inner, m);
    let mass: f64 = cloud
        .points
        .iter()
        .filter(|p| curve_sector_member(&outer, p.point()) && !curve_sector_member(&inner, p.point()))
        .map(|p| p.w)
        .sum();
    Ok(mass > threshold)
}
