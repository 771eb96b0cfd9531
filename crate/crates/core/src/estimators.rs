//! Favard length, Favard curve length, the Buffon-curve Monte Carlo
//! estimate, decay fits and the reference decay shapes.

use std::cell::RefCell;
use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curves::ExtendedGraphCurve;
use crate::error::{Error, Result};
use crate::geom::{Membership, PlanarSet, Point, Rect};
use crate::interval::Interval;
use crate::projection::{linear_measure, parameter_domain, projected_measure, ProjectionQuery};
pub use crate::quadrature::{QuadResult, QuadratureSpec};
use crate::quadrature::simpson;

thread_local! {
    static SCRATCH: RefCell<Vec<Interval>> = const { RefCell::new(Vec::new()) };
}

fn zero() -> QuadResult {
    QuadResult {
        value: 0.0,
        abs_error: 0.0,
        converged: true,
        panels: 0,
        evaluations: 0,
    }
}

/// `Fav(E) = ∫₀^{2π} |proj_ω(E)| dω`.
pub fn favard_length<S: PlanarSet + ?Sized>(s: &S, quad: &QuadratureSpec) -> QuadResult {
    let rects = s.components();
    if rects.is_empty() {
        return zero();
    }
    simpson(
        |w| SCRATCH.with(|sc| linear_measure(w, &rects, &mut sc.borrow_mut())),
        0.0,
        TAU,
        quad,
    )
}

/// The translations `α` for which `Φ_α(S)` can be nonempty: `A = [0,1] − I`
/// for sets inside the unit square, the bounding box shadow minus `I`
/// otherwise.
pub fn alpha_domain(curve: &ExtendedGraphCurve, bbox: &Rect) -> Interval {
    if bbox.x0 >= 0.0 && bbox.x1 <= 1.0 && bbox.y0 >= 0.0 && bbox.y1 <= 1.0 {
        parameter_domain(curve)
    } else {
        let i = curve.base().domain();
        Interval {
            lo: bbox.x0 - i.hi,
            hi: bbox.x1 - i.lo,
        }
    }
}

/// `Fav_C(E) = ∫_A |Φ_α(E)| dα` with the unextended projection.
pub fn favard_curve_length<S: PlanarSet + ?Sized>(curve: &ExtendedGraphCurve, s: &S, quad: &QuadratureSpec) -> QuadResult {
    let rects = s.components();
    let Some(bbox) = s.bounding_box() else {
        return zero();
    };
    let a = alpha_domain(curve, &bbox);
    simpson(
        |alpha| {
            let q = ProjectionQuery::new(*curve, alpha);
            SCRATCH.with(|sc| projected_measure(&q, &rects, &mut sc.borrow_mut()))
        },
        a.lo,
        a.hi,
        quad,
    )
}

/// Favard curve length of a curve given as several graph pieces: the sum of
/// the per-piece values.
pub fn favard_curve_length_pieces<S: PlanarSet + ?Sized>(
    pieces: &[ExtendedGraphCurve],
    s: &S,
    quad: &QuadratureSpec,
) -> QuadResult {
    pieces.iter().map(|c| favard_curve_length(c, s, quad)).fold(zero(), |acc, r| QuadResult {
        value: acc.value + r.value,
        abs_error: acc.abs_error + r.abs_error,
        converged: acc.converged && r.converged,
        panels: acc.panels.max(r.panels),
        evaluations: acc.evaluations + r.evaluations,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McSpec {
    pub samples: u64,
    pub seed: u64,
    /// Samples per independently seeded stream.
    pub batch: u64,
    /// Nodes of the uniform curve grid used when the oracle cannot answer
    /// box queries.
    pub grid_nodes: usize,
    /// Depth of local bisection below the whole parameter interval.
    pub max_depth: u32,
}

impl Default for McSpec {
    fn default() -> Self {
        McSpec {
            samples: 1_000_000,
            seed: 42,
            batch: 1 << 16,
            grid_nodes: 512,
            max_depth: 40,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub hits: u64,
    pub samples: u64,
}

/// Bounding box of the Minkowski difference `E − 𝒞` for `E` inside `bbox`:
/// every `(α, β)` with `((α, β) + 𝒞) ∩ E ≠ ∅` lies in the returned ranges.
pub fn difference_ranges(curve: &ExtendedGraphCurve, bbox: &Rect) -> (Interval, Interval) {
    let i = curve.base().domain();
    let (lo, hi) = curve.range_on(i.lo, i.hi);
    (
        Interval {
            lo: bbox.x0 - i.hi,
            hi: bbox.x1 - i.lo,
        },
        Interval {
            lo: bbox.y0 - hi,
            hi: bbox.y1 - lo,
        },
    )
}

/// Drops the curve at uniformly random translations `(α, β)` and returns the
/// hit area `|ranges| · hits / samples` with its binomial standard error.
///
/// A drop hits when some curve point lies in `E`. Oracles that answer box
/// queries are searched by bisection of the parameter interval: a piece whose
/// bounding box misses `E` is discarded, a piece whose midpoint lies in `E`
/// is a hit, and a piece still meeting `E` at the finest depth counts as a
/// hit. Other oracles are probed on a uniform grid of `grid_nodes` points.
pub fn buffon_curve_mc<M: Membership + ?Sized>(
    curve: &ExtendedGraphCurve,
    member: &M,
    mc: &McSpec,
    alpha_range: Interval,
    beta_range: Interval,
) -> Result<McEstimate> {
    if mc.samples == 0 {
        return Err(Error::param("Monte Carlo needs at least one sample"));
    }
    let batch = mc.batch.max(1);
    let n_batches = mc.samples.div_ceil(batch);
    let dom = curve.base().domain();
    let min_width = dom.len() * 0.5f64.powi(mc.max_depth as i32);
    let box_capable = member.meets_box(&Rect::new(dom.lo, dom.lo, 0.0, 0.0)).is_some();

    let hit = |alpha: f64, beta: f64| -> bool {
        if box_capable {
            hit_by_bisection(curve, member, alpha, beta, dom.lo, dom.hi, min_width)
        } else {
            let g = mc.grid_nodes.max(2);
            (0..g).any(|k| {
                let t = if k + 1 == g { dom.hi } else { dom.lo + dom.len() * k as f64 / (g - 1) as f64 };
                member.contains(Point::new(alpha + t, beta + curve.phi_plus(t)))
            })
        }
    };

    let counts: Vec<u64> = (0..n_batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(mc.seed);
            rng.set_stream(b);
            let n = batch.min(mc.samples - b * batch);
            let mut hits = 0u64;
            for _ in 0..n {
                let alpha = alpha_range.lo + alpha_range.len() * rng.gen::<f64>();
                let beta = beta_range.lo + beta_range.len() * rng.gen::<f64>();
                hits += hit(alpha, beta) as u64;
            }
            hits
        })
        .collect();
    let hits: u64 = counts.iter().sum();
    let area = alpha_range.len() * beta_range.len();
    let p = hits as f64 / mc.samples as f64;
    Ok(McEstimate {
        estimate: area * p,
        std_error: area * (p * (1.0 - p) / mc.samples as f64).sqrt(),
        hits,
        samples: mc.samples,
    })
}

fn hit_by_bisection<M: Membership + ?Sized>(
    curve: &ExtendedGraphCurve,
    member: &M,
    alpha: f64,
    beta: f64,
    t0: f64,
    t1: f64,
    min_width: f64,
) -> bool {
    let (lo, hi) = curve.range_on(t0, t1);
    let b = Rect::new(alpha + t0, alpha + t1, beta + lo, beta + hi);
    if member.meets_box(&b) != Some(true) {
        return false;
    }
    if t1 - t0 <= min_width {
        return true;
    }
    let tm = 0.5 * (t0 + t1);
    if member.contains(Point::new(alpha + tm, beta + curve.phi_plus(tm))) {
        return true;
    }
    hit_by_bisection(curve, member, alpha, beta, t0, tm, min_width)
        || hit_by_bisection(curve, member, alpha, beta, tm, t1, min_width)
}

/// Least-squares fit of `log v = log c − p log n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub exponent: f64,
    pub log_c: f64,
    /// Root mean square of the log residuals.
    pub residual: f64,
}

pub fn fit_decay(values: &[(f64, f64)]) -> Result<DecayFit> {
    if values.len() < 3 {
        return Err(Error::param(format!("decay fit needs at least 3 points, got {}", values.len())));
    }
    if let Some(&(n, v)) = values.iter().find(|&&(n, v)| !(v > 0.0) || !(n >= 1.0)) {
        return Err(Error::param(format!("decay fit needs n >= 1 and v > 0, got ({n}, {v})")));
    }
    let pts: Vec<(f64, f64)> = values.iter().map(|&(n, v)| (n.ln(), v.ln())).collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::param("decay fit needs at least two distinct n"));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    Ok(DecayFit {
        exponent: -slope,
        log_c: intercept,
        residual: (ss / m).sqrt(),
    })
}

/// Inverse tower: the least `m` with `log^{(m)} x ≤ 1`.
pub fn log_star(x: f64) -> u32 {
    let mut m = 0;
    let mut x = x;
    while x > 1.0 {
        x = x.ln();
        m += 1;
    }
    m
}

/// Unit-constant decay shapes. Only the shapes are meaningful; the
/// constants in the corresponding bounds are unknown.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceBounds {
    /// `n^{-1/6}`, upper bound shape for `Fav(K_n)`.
    pub npv_upper: f64,
    /// `n^{-1} log n`, lower bound shape for `Fav(K_n)`.
    pub bv_lower: f64,
    /// `n^{-1/6}`, upper bound shape for `Fav_C(K_n)`.
    pub cdt_upper: f64,
    /// `n^{-1}`, lower bound shape for `Fav_C(K_n)`.
    pub cdt_lower: f64,
    /// `(log_* n)^{-1/100}`.
    pub tower_upper: f64,
}

pub fn reference_bounds(n: u64) -> Result<ReferenceBounds> {
    if n < 2 {
        return Err(Error::param(format!("reference bounds need n >= 2, got {n}")));
    }
    let x = n as f64;
    Ok(ReferenceBounds {
        npv_upper: x.powf(-1.0 / 6.0),
        bv_lower: x.ln() / x,
        cdt_upper: x.powf(-1.0 / 6.0),
        cdt_lower: 1.0 / x,
        tower_upper: (log_star(x) as f64).powf(-0.01),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{extend_curve, make_circle_arc, make_parabola};
    use crate::fractal::{boundary, cantor_generation};
    use crate::geom::{MembershipFn, RectSet};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::E;

    fn arc() -> ExtendedGraphCurve {
        extend_curve(make_circle_arc(2.0, Interval { lo: -1.0, hi: 1.0 }).unwrap())
    }

    fn parabola() -> ExtendedGraphCurve {
        extend_curve(make_parabola(0.5, Interval { lo: -0.9, hi: 0.9 }).unwrap())
    }

    #[test]
    fn favard_closed_forms() {
        let q = QuadratureSpec::default();
        let sq = favard_length(&RectSet::unit_square(), &q);
        assert!(sq.converged);
        assert_relative_eq!(sq.value, 8.0, max_relative = 1e-3);
        let seg = favard_length(&RectSet(vec![Rect::horizontal(0.0, 1.0, 0.0)]), &q);
        assert_relative_eq!(seg.value, 4.0, max_relative = 1e-3);
        assert_eq!(favard_length(&RectSet::default(), &q).value, 0.0);
    }

    /// Area of `K_0 − 𝒞` by brute force: for each α on a grid, the set of β
    /// with `(α + t, β + φ(t)) ∈ [0,1]²` for some sampled `t` is the interval
    /// `[min(-φ), max(1 - φ)]` over admissible `t`; integrate with the
    /// trapezoid rule.
    fn minkowski_area_unit_square(curve: &ExtendedGraphCurve) -> f64 {
        let i = curve.base().domain();
        let (a0, a1) = (-i.hi, 1.0 - i.lo);
        let na = 20_000;
        let nt = 2_000;
        let mut total = 0.0;
        for k in 0..=na {
            let alpha = a0 + (a1 - a0) * k as f64 / na as f64;
            let (t0, t1) = ((-alpha).max(i.lo), (1.0 - alpha).min(i.hi));
            let len = if t0 > t1 {
                0.0
            } else {
                let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
                for j in 0..=nt {
                    let t = t0 + (t1 - t0) * j as f64 / nt as f64;
                    let f = curve.base().phi(t);
                    lo = lo.min(-f);
                    hi = hi.max(1.0 - f);
                }
                hi - lo
            };
            let w = if k == 0 || k == na { 0.5 } else { 1.0 };
            total += w * len;
        }
        total * (a1 - a0) / na as f64
    }

    #[test]
    fn curve_length_matches_minkowski_oracle() {
        let k0 = cantor_generation(0).unwrap();
        for c in [parabola(), arc()] {
            let v = favard_curve_length(&c, &k0, &QuadratureSpec::with_tol(1e-6)).value;
            let oracle = minkowski_area_unit_square(&c);
            assert_abs_diff_eq!(v, oracle, epsilon = 1e-3);
        }
    }

    #[test]
    fn curve_length_empty_and_monotone() {
        let q = QuadratureSpec::default();
        assert_eq!(favard_curve_length(&arc(), &RectSet::default(), &q).value, 0.0);
        let vals: Vec<f64> = (0..4)
            .map(|n| favard_curve_length(&arc(), &cantor_generation(n).unwrap(), &q).value)
            .collect();
        for w in vals.windows(2) {
            assert!(w[1] < w[0]);
        }
    }

    #[test]
    fn boundary_has_same_curve_length() {
        let q = QuadratureSpec::with_tol(1e-6);
        for n in 0..3 {
            let k = cantor_generation(n).unwrap();
            let a = favard_curve_length(&arc(), &k, &q).value;
            let b = favard_curve_length(&arc(), &boundary(&k), &q).value;
            assert_relative_eq!(a, b, max_relative = 1e-9);
        }
    }

    #[test]
    fn pieces_add_up() {
        // one parabola split at its vertex into two graph pieces
        let left = extend_curve(make_parabola(0.5, Interval { lo: -0.9, hi: -0.1 }).unwrap());
        let right = extend_curve(make_parabola(0.5, Interval { lo: 0.1, hi: 0.9 }).unwrap());
        let k1 = cantor_generation(1).unwrap();
        let q = QuadratureSpec::with_tol(1e-7);
        let sum = favard_curve_length_pieces(&[left, right], &k1, &q).value;
        let direct = favard_curve_length(&left, &k1, &q).value + favard_curve_length(&right, &k1, &q).value;
        assert_relative_eq!(sum, direct, max_relative = 1e-12);
        assert!(sum > 0.0);
    }

    #[test]
    fn monte_carlo_unit_square_within_three_sigma() {
        let c = arc();
        let k0 = cantor_generation(0).unwrap();
        let exact = favard_curve_length(&c, &k0, &QuadratureSpec::with_tol(1e-7)).value;
        let (ar, br) = difference_ranges(&c, &k0.bounding_box().unwrap());
        let mc = McSpec {
            samples: 200_000,
            ..McSpec::default()
        };
        let est = buffon_curve_mc(&c, &k0, &mc, ar, br).unwrap();
        assert!((est.estimate - exact).abs() <= 3.0 * est.std_error, "{est:?} vs {exact}");
        assert_eq!(est, buffon_curve_mc(&c, &k0, &mc, ar, br).unwrap());
    }

    #[test]
    fn monte_carlo_grid_only_oracle() {
        let c = arc();
        let k0 = cantor_generation(0).unwrap();
        let exact = favard_curve_length(&c, &k0, &QuadratureSpec::with_tol(1e-7)).value;
        let (ar, br) = difference_ranges(&c, &k0.bounding_box().unwrap());
        let oracle = MembershipFn(|p: Point| (0.0..=1.0).contains(&p.x) && (0.0..=1.0).contains(&p.y));
        let mc = McSpec {
            samples: 50_000,
            ..McSpec::default()
        };
        let est = buffon_curve_mc(&c, &oracle, &mc, ar, br).unwrap();
        assert!((est.estimate - exact).abs() <= 3.0 * est.std_error + 1e-2 * exact);

        let never = MembershipFn(|_: Point| false);
        assert_eq!(buffon_curve_mc(&c, &never, &mc, ar, br).unwrap().estimate, 0.0);
        let zero = McSpec { samples: 0, ..mc };
        assert!(buffon_curve_mc(&c, &never, &zero, ar, br).is_err());
    }

    #[test]
    fn monte_carlo_batches_independent_of_threads() {
        let c = arc();
        let k1 = cantor_generation(1).unwrap();
        let (ar, br) = difference_ranges(&c, &k1.bounding_box().unwrap());
        let mc = McSpec {
            samples: 30_000,
            batch: 1000,
            ..McSpec::default()
        };
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| buffon_curve_mc(&c, &k1, &mc, ar, br).unwrap())
        };
        assert_eq!(run(1), run(3));
    }

    #[test]
    fn decay_fit_examples() {
        let v: Vec<(f64, f64)> = (1..=10).map(|n| (n as f64, 7.0 * (n as f64).powf(-1.0 / 3.0))).collect();
        let f = fit_decay(&v).unwrap();
        assert_abs_diff_eq!(f.exponent, 1.0 / 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(f.log_c, 7f64.ln(), epsilon = 1e-9);
        assert!(f.residual < 1e-12);

        let c: Vec<(f64, f64)> = (1..=5).map(|n| (n as f64, 2.5)).collect();
        assert_abs_diff_eq!(fit_decay(&c).unwrap().exponent, 0.0, epsilon = 1e-15);

        // log-log OLS of n^-1 log(n+1) over n = 2..20, computed offline
        let l: Vec<(f64, f64)> = (2..=20).map(|n| (n as f64, ((n + 1) as f64).ln() / n as f64)).collect();
        assert_abs_diff_eq!(fit_decay(&l).unwrap().exponent, 0.57405, epsilon = 1e-5);

        assert!(fit_decay(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]).is_err());
        assert!(fit_decay(&[(1.0, 1.0), (2.0, 1.0)]).is_err());
    }

    #[test]
    fn log_star_examples() {
        assert_eq!(log_star(1.0), 0);
        assert_eq!(log_star(0.5), 0);
        assert_eq!(log_star(E), 1);
        assert_eq!(log_star(E.exp()), 2);
        assert_eq!(log_star(16.0), 3);
        assert_eq!(log_star(1e100), 4);
    }

    #[test]
    fn reference_bound_examples() {
        let b = reference_bounds(2).unwrap();
        assert_eq!(b.bv_lower, 2f64.ln() / 2.0);
        assert_eq!(reference_bounds(10).unwrap().cdt_lower, 0.1);
        let n = E.exp().round() as u64;
        assert_eq!(reference_bounds(n).unwrap().tower_upper, (log_star(n as f64) as f64).powf(-0.01));
        assert!(reference_bounds(1).is_err());
    }
}
