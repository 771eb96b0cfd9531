//! Linear projections `proj_ω` and curve projections `Φ_α`, `Φ_{α,+}`.
//!
//! `Φ_α(p) = p₂ − φ(p₁ − α)` when `p₁ − α ∈ I` and is empty otherwise: it
//! returns the height at which the translate of the curve through `p`
//! crosses the line `x = α`. Images of boxes are single intervals because
//! φ is monotone on either side of its turning point.

use crate::curves::ExtendedGraphCurve;
use crate::geom::{PlanarSet, Point, Rect};
use crate::interval::{Interval, IntervalUnion};

#[derive(Clone, Copy, Debug)]
pub struct ProjectionQuery {
    pub curve: ExtendedGraphCurve,
    pub alpha: f64,
    /// Use `Φ_{α,+}` (domain `I₊`) instead of `Φ_α` (domain `I`).
    pub use_extension: bool,
}

impl ProjectionQuery {
    pub fn new(curve: ExtendedGraphCurve, alpha: f64) -> Self {
        debug_assert!(alpha.is_finite());
        ProjectionQuery {
            curve,
            alpha,
            use_extension: false,
        }
    }

    pub fn extended(curve: ExtendedGraphCurve, alpha: f64) -> Self {
        ProjectionQuery {
            use_extension: true,
            ..Self::new(curve, alpha)
        }
    }

    fn domain(&self) -> Interval {
        self.curve.param_domain(self.use_extension)
    }
}

/// `A = [0, 1] − I = [−b, 1 − a]`, the translations for which the curve can
/// meet the unit square.
pub fn parameter_domain(curve: &ExtendedGraphCurve) -> Interval {
    let i = curve.base().domain();
    Interval { lo: -i.hi, hi: 1.0 - i.lo }
}

pub fn project_point(q: &ProjectionQuery, p: Point) -> Option<f64> {
    let t = p.x - q.alpha;
    q.domain().contains(t).then(|| p.y - q.curve.phi_plus(t))
}

/// Image of one closed box (possibly a segment or a point).
pub fn project_rect(q: &ProjectionQuery, r: &Rect) -> Option<Interval> {
    let d = q.domain();
    let t0 = (r.x0 - q.alpha).max(d.lo);
    let t1 = (r.x1 - q.alpha).min(d.hi);
    if t0 > t1 {
        return None;
    }
    let (lo, hi) = q.curve.range_on(t0, t1);
    Some(Interval {
        lo: r.y0 - hi,
        hi: r.y1 - lo,
    })
}

pub fn project_square(q: &ProjectionQuery, r: &Rect) -> IntervalUnion {
    project_rect(q, r).map_or_else(IntervalUnion::empty, IntervalUnion::single)
}

pub fn project_rects(q: &ProjectionQuery, rects: &[Rect]) -> IntervalUnion {
    IntervalUnion::from_intervals(rects.iter().filter_map(|r| project_rect(q, r)).collect())
}

pub fn project_set<S: PlanarSet + ?Sized>(q: &ProjectionQuery, s: &S) -> IntervalUnion {
    project_rects(q, &s.components())
}

/// `|Φ_α(S)|` without materializing the union.
pub fn projected_measure(q: &ProjectionQuery, rects: &[Rect], scratch: &mut Vec<Interval>) -> f64 {
    scratch.clear();
    scratch.extend(rects.iter().filter_map(|r| project_rect(q, r)));
    union_measure(scratch)
}

/// `proj_ω(x, y) = x cos ω + y sin ω` of one box.
pub fn project_linear_rect(omega: f64, r: &Rect) -> Interval {
    let (s, c) = omega.sin_cos();
    let (xa, xb) = if c >= 0.0 { (r.x0, r.x1) } else { (r.x1, r.x0) };
    let (ya, yb) = if s >= 0.0 { (r.y0, r.y1) } else { (r.y1, r.y0) };
    Interval {
        lo: xa * c + ya * s,
        hi: xb * c + yb * s,
    }
}

pub fn project_linear<S: PlanarSet + ?Sized>(omega: f64, s: &S) -> IntervalUnion {
    IntervalUnion::from_intervals(s.components().iter().map(|r| project_linear_rect(omega, r)).collect())
}

/// `|proj_ω(S)|` without materializing the union.
pub fn linear_measure(omega: f64, rects: &[Rect], scratch: &mut Vec<Interval>) -> f64 {
    scratch.clear();
    scratch.extend(rects.iter().map(|r| project_linear_rect(omega, r)));
    union_measure(scratch)
}

/// Number of components whose image contains `beta`.
pub fn multiplicity_at<S: PlanarSet + ?Sized>(q: &ProjectionQuery, beta: f64, s: &S) -> usize {
    s.components()
        .iter()
        .filter_map(|r| project_rect(q, r))
        .filter(|iv| iv.contains(beta))
        .count()
}

/// Measure of a union given by unsorted members, with the same gap
/// tolerance as [`IntervalUnion`].
fn union_measure(ivs: &mut [Interval]) -> f64 {
    ivs.sort_unstable_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut total = 0.0;
    let mut cur: Option<Interval> = None;
    for &iv in ivs.iter() {
        match cur.as_mut() {
            Some(c) if iv.lo <= c.hi + crate::interval::MERGE_EPSILON => c.hi = c.hi.max(iv.hi),
            _ => {
                if let Some(c) = cur {
                    total += c.len();
                }
                cur = Some(iv);
            }
        }
    }
    total + cur.map_or(0.0, |c| c.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{extend_curve, make_circle_arc, make_parabola};
    use crate::fractal::{boundary, cantor_generation};
    use crate::geom::RectSet;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

    fn parabola() -> ExtendedGraphCurve {
        extend_curve(make_parabola(0.5, Interval { lo: -0.9, hi: 0.9 }).unwrap())
    }

    fn arc() -> ExtendedGraphCurve {
        extend_curve(make_circle_arc(2.0, Interval { lo: -1.0, hi: 1.0 }).unwrap())
    }

    #[test]
    fn point_examples() {
        let q = ProjectionQuery::new(parabola(), 0.0);
        assert_eq!(project_point(&q, Point::new(0.5, 1.0)), Some(0.875));
        assert_eq!(project_point(&q, Point::new(2.0, 1.0)), None);
        let q = ProjectionQuery::new(arc(), 1.0);
        assert_eq!(project_point(&q, Point::new(1.0, 3.0)), Some(3.0));
    }

    #[test]
    fn extension_widens_point_domain() {
        let c = parabola();
        let p = Point::new(0.9 + 0.5 * crate::DELTA, 0.0);
        assert_eq!(project_point(&ProjectionQuery::new(c, 0.0), p), None);
        assert!(project_point(&ProjectionQuery::extended(c, 0.0), p).is_some());
    }

    #[test]
    fn linear_examples() {
        let k1 = cantor_generation(1).unwrap();
        let u = project_linear(0.0, &k1);
        let pairs: Vec<_> = u.intervals().iter().map(|i| (i.lo, i.hi)).collect();
        assert_eq!(pairs, vec![(0.0, 0.25), (0.75, 1.0)]);
        assert_eq!(u.measure(), 0.5);

        let sq = RectSet::unit_square();
        let u = project_linear(FRAC_PI_2, &sq);
        assert_abs_diff_eq!(u.intervals()[0].lo, 0.0, epsilon = 1e-16);
        assert_abs_diff_eq!(u.measure(), 1.0, epsilon = 1e-15);
        let u = project_linear(FRAC_PI_4, &sq);
        assert_abs_diff_eq!(u.measure(), SQRT_2, epsilon = 1e-15);
    }

    #[test]
    fn antipodal_directions_have_equal_measure() {
        let k2 = cantor_generation(2).unwrap().components();
        let mut scratch = Vec::new();
        for k in 0..200 {
            let w = k as f64 * 0.0314159;
            let a = linear_measure(w, &k2, &mut scratch);
            let b = linear_measure(w + std::f64::consts::PI, &k2, &mut scratch);
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn square_examples() {
        let q = ProjectionQuery::new(parabola(), 0.0);
        let u = project_square(&q, &Rect::new(0.0, 0.25, 0.0, 0.25));
        assert_eq!(u.intervals(), &[Interval { lo: -0.03125, hi: 0.25 }]);
        assert_eq!(u.measure(), 0.28125);

        let u = project_square(&ProjectionQuery::new(parabola(), 5.0), &Rect::new(0.0, 0.25, 0.0, 0.25));
        assert!(u.is_empty());

        let r = Rect::new(-0.25, 0.25, 0.0, 0.25);
        let iv = project_square(&q, &r).intervals()[0];
        // brute-force extrema of φ over T = [-0.25, 0.25]
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for k in 0..=1_000_000 {
            let t = -0.25 + 0.5 * k as f64 / 1e6;
            let v = 0.5 * t * t;
            lo = lo.min(v);
            hi = hi.max(v);
        }
        assert_abs_diff_eq!(iv.lo, 0.0 - hi, epsilon = 1e-15);
        assert_abs_diff_eq!(iv.hi, 0.25 - lo, epsilon = 1e-15);
        assert_abs_diff_eq!(iv.lo, -0.03125, epsilon = 1e-15);
    }

    #[test]
    fn clipped_square_uses_domain_end() {
        let q = ProjectionQuery::new(parabola(), 0.0);
        let iv = project_square(&q, &Rect::new(0.8, 1.2, 0.0, 0.1)).intervals()[0];
        assert_abs_diff_eq!(iv.lo, -0.405, epsilon = 1e-15);
        assert_abs_diff_eq!(iv.hi, 0.1 - 0.32, epsilon = 1e-15);
    }

    #[test]
    fn unit_square_keeps_vertical_extent() {
        for c in [parabola(), arc()] {
            let a = parameter_domain(&c);
            for k in 0..=50 {
                let alpha = a.lo + (a.hi - a.lo) * k as f64 / 50.0;
                let i = c.base().domain();
                if i.lo >= -alpha && i.hi <= 1.0 - alpha {
                    let m = project_set(&ProjectionQuery::new(c, alpha), &RectSet::unit_square()).measure();
                    assert!(m >= 1.0);
                }
            }
        }
    }

    #[test]
    fn boundary_and_squares_project_alike() {
        for n in 0..4 {
            let k = cantor_generation(n).unwrap();
            let e = boundary(&k);
            for c in [parabola(), arc()] {
                let a = parameter_domain(&c);
                for j in 0..=40 {
                    let alpha = a.lo + (a.hi - a.lo) * j as f64 / 40.0 + 1e-3;
                    let q = ProjectionQuery::new(c, alpha);
                    let (u, v) = (project_set(&q, &k), project_set(&q, &e));
                    assert_eq!(u.len(), v.len(), "n={n} alpha={alpha}");
                    for (x, y) in u.intervals().iter().zip(v.intervals()) {
                        assert_abs_diff_eq!(x.lo, y.lo, epsilon = 1e-12);
                        assert_abs_diff_eq!(x.hi, y.hi, epsilon = 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn empty_set_projects_to_empty() {
        let q = ProjectionQuery::new(arc(), 0.3);
        assert!(project_set(&q, &RectSet::default()).is_empty());
        assert_eq!(project_linear(0.3, &RectSet::default()).measure(), 0.0);
    }

    #[test]
    fn multiplicity_examples() {
        let k1 = cantor_generation(1).unwrap();
        let c = parabola();
        // at α = 0 the images are [-0.03125, 0.25], [0.71875, 1], [-0.405, -0.03125], [0.345, 0.71875]
        let q = ProjectionQuery::new(c, 0.0);
        let imgs: Vec<Interval> = k1.components().iter().map(|r| project_rect(&q, r).unwrap()).collect();
        assert_abs_diff_eq!(imgs[3].lo, 0.345, epsilon = 1e-15);
        assert_abs_diff_eq!(imgs[3].hi, 0.71875, epsilon = 1e-15);
        let beta = imgs[3].center();
        let expect = imgs.iter().filter(|iv| iv.contains(beta)).count();
        assert_eq!(expect, 1);
        assert_eq!(multiplicity_at(&q, beta, &k1), 1);
        assert_eq!(multiplicity_at(&q, 10.0, &k1), 0);

        let k0 = cantor_generation(0).unwrap();
        let iv = project_rect(&q, &k0.components()[0]).unwrap();
        assert_eq!(multiplicity_at(&q, iv.center(), &k0), 1);
    }

    #[test]
    fn measure_helper_matches_union() {
        let k3 = cantor_generation(3).unwrap().components();
        let mut scratch = Vec::new();
        for alpha in [-0.7, -0.2, 0.1, 0.45, 1.3] {
            let q = ProjectionQuery::new(arc(), alpha);
            assert_abs_diff_eq!(
                projected_measure(&q, &k3, &mut scratch),
                project_rects(&q, &k3).measure(),
                epsilon = 1e-15
            );
        }
        assert_abs_diff_eq!(linear_measure(0.7, &k3, &mut scratch), project_linear(0.7, &RectSet(k3.clone())).measure(), epsilon = 1e-15);
    }

    fn square_strategy() -> impl Strategy<Value = Rect> {
        (0.0..0.9f64, 0.0..0.9f64, 0.001..0.1f64).prop_map(|(x, y, s)| Rect::new(x, x + s, y, y + s))
    }

    proptest! {
        #[test]
        fn image_bounded_by_twice_diameter(r in square_strategy(), alpha in -1.0..2.0f64) {
            for c in [parabola(), arc()] {
                let m = project_square(&ProjectionQuery::new(c, alpha), &r).measure();
                prop_assert!(m <= 2.0 * (r.x1 - r.x0) * SQRT_2 + 1e-15);
            }
        }

        #[test]
        fn inclusion_is_preserved(r in square_strategy(), shrink in 0.0..0.5f64, alpha in -1.0..2.0f64) {
            let w = (r.x1 - r.x0) * shrink / 2.0;
            let inner = Rect::new(r.x0 + w, r.x1 - w, r.y0 + w, r.y1 - w);
            for c in [parabola(), arc()] {
                let q = ProjectionQuery::new(c, alpha);
                let big = project_square(&q, &r);
                let small = project_square(&q, &inner);
                prop_assert_eq!(small.intersect(&big), small);
            }
        }

        #[test]
        fn vertical_translation_shifts_image(x in -0.5..1.5f64, y in -1.0..1.0f64, c in -2.0..2.0f64, alpha in -1.0..1.0f64) {
            let q = ProjectionQuery::new(arc(), alpha);
            let a = project_point(&q, Point::new(x, y));
            let b = project_point(&q, Point::new(x, y + c));
            prop_assert_eq!(a.is_some(), b.is_some());
            if let (Some(a), Some(b)) = (a, b) {
                prop_assert!((b - (a + c)).abs() <= 1e-12);
            }
        }
    }
}
