//! Graph curves `{(t, φ(t)) : t ∈ I}` with a bilipschitz derivative, their
//! δ-extensions, translates through a point, and tangent/normal frames.
//!
//! A curve is a closed-form profile (φ, φ′) plus a certificate: the sign of
//! φ″ and a bilipschitz constant λ for φ′. Constructors check the
//! certificate by dense sampling; nothing is inferred.

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::interval::Interval;

/// Extension margin δ = 10⁻⁵ + 2⁻¹⁰⁰ (the second term vanishes in binary64).
pub const DELTA: f64 = 1e-5 + 7.888_609_052_210_118e-31;

/// Upper limit accepted for the bilipschitz constant.
pub const LAMBDA_MAX: f64 = 34_359_738_368.0; // 2^35

/// Number of sample points used to validate a curve.
pub const VALIDATION_SAMPLES: usize = 4096;

const BILIP_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convexity {
    Convex,
    Concave,
}

impl Convexity {
    pub fn sign(self) -> f64 {
        match self {
            Convexity::Convex => 1.0,
            Convexity::Concave => -1.0,
        }
    }
}

/// Closed-form description of φ and φ′.
#[derive(Clone, Copy, Debug)]
pub enum Profile {
    /// φ(t) = h·t²
    Parabola { half_curvature: f64 },
    /// φ(t) = R − √(R² − t²), the lower arc of a circle through the origin.
    CircleArc { radius: f64 },
    /// Arbitrary user supplied pair.
    Custom {
        phi: fn(f64) -> f64,
        dphi: fn(f64) -> f64,
    },
}

impl Profile {
    pub fn phi(&self, t: f64) -> f64 {
        match *self {
            Profile::Parabola { half_curvature } => half_curvature * t * t,
            Profile::CircleArc { radius } => {
                // R - sqrt(R^2 - t^2) written to avoid cancellation near t = 0
                let s = (radius * radius - t * t).sqrt();
                t * t / (radius + s)
            }
            Profile::Custom { phi, .. } => phi(t),
        }
    }

    pub fn dphi(&self, t: f64) -> f64 {
        match *self {
            Profile::Parabola { half_curvature } => 2.0 * half_curvature * t,
            Profile::CircleArc { radius } => t / (radius * radius - t * t).sqrt(),
            Profile::Custom { dphi, .. } => dphi(t),
        }
    }

    /// `φ(t + du) − φ(t)` without cancellation for the closed forms.
    pub fn phi_diff(&self, t: f64, du: f64) -> f64 {
        match *self {
            Profile::Parabola { half_curvature } => half_curvature * du * (2.0 * t + du),
            Profile::CircleArc { radius } => {
                let r2 = radius * radius;
                let s = t + du;
                du * (2.0 * t + du) / ((r2 - t * t).sqrt() + (r2 - s * s).sqrt())
            }
            Profile::Custom { phi, .. } => phi(t + du) - phi(t),
        }
    }
}

/// The curve `{(t, φ(t)) : t ∈ [a, b]}`.
#[derive(Clone, Copy, Debug)]
pub struct GraphCurve {
    profile: Profile,
    domain: Interval,
    convexity: Convexity,
    lambda: f64,
    slope_bound: f64,
}

impl GraphCurve {
    /// Validates the certificate on [`VALIDATION_SAMPLES`] points: |φ′| ≤ 1 − δ,
    /// φ′ strictly monotone in the direction given by `convexity`, and
    /// λ⁻¹|s − t| ≤ |φ′(s) − φ′(t)| ≤ λ|s − t|.
    pub fn new(profile: Profile, domain: Interval, convexity: Convexity, lambda: f64) -> Result<Self> {
        let (a, b) = (domain.lo, domain.hi);
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidDomain { lo: a, hi: b });
        }
        if !(1.0..=LAMBDA_MAX).contains(&lambda) {
            return Err(Error::LambdaRange(lambda));
        }

        let n = VALIDATION_SAMPLES;
        let ts: Vec<f64> = (0..n)
            .map(|k| if k + 1 == n { b } else { a + (b - a) * k as f64 / (n - 1) as f64 })
            .collect();
        let ds: Vec<f64> = ts.iter().map(|&t| profile.dphi(t)).collect();

        let limit = 1.0 - DELTA;
        let (worst_t, worst) = ts
            .iter()
            .zip(&ds)
            .map(|(&t, &d)| (t, d.abs()))
            .fold((a, -1.0), |acc, (t, d)| if d > acc.1 || d.is_nan() { (t, d) } else { acc });
        if !(worst <= limit) {
            return Err(Error::SlopeBound { t: worst_t, slope: worst, limit });
        }

        // φ′ monotone, so checking consecutive samples bounds every sampled pair.
        let sign = convexity.sign();
        for k in 0..n - 1 {
            let dt = ts[k + 1] - ts[k];
            let dd = (ds[k + 1] - ds[k]) * sign;
            let lower = dt / lambda * (1.0 - BILIP_SLACK);
            let upper = dt * lambda * (1.0 + BILIP_SLACK);
            if !(dd > 0.0 && dd >= lower && dd <= upper) {
                return Err(Error::Bilipschitz { lambda, s: ts[k], t: ts[k + 1] });
            }
        }

        Ok(GraphCurve {
            profile,
            domain,
            convexity,
            lambda,
            slope_bound: worst,
        })
    }

    pub fn phi(&self, t: f64) -> f64 {
        self.profile.phi(t)
    }

    pub fn dphi(&self, t: f64) -> f64 {
        self.profile.dphi(t)
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn convexity(&self) -> Convexity {
        self.convexity
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Largest sampled |φ′|.
    pub fn slope_bound(&self) -> f64 {
        self.slope_bound
    }
}

/// φ(t) = h·t² on `domain`, with λ = max(2|h|, 1/(2|h|)).
pub fn make_parabola(half_curvature: f64, domain: Interval) -> Result<GraphCurve> {
    if !(half_curvature.is_finite() && half_curvature != 0.0) {
        return Err(Error::param(format!(
            "parabola needs a finite nonzero half curvature, got {half_curvature}"
        )));
    }
    let k = 2.0 * half_curvature.abs();
    let convexity = if half_curvature > 0.0 { Convexity::Convex } else { Convexity::Concave };
    GraphCurve::new(
        Profile::Parabola { half_curvature },
        domain,
        convexity,
        k.max(1.0 / k),
    )
}

/// Lower arc of the circle of radius `radius` tangent to the x-axis at the origin.
///
/// λ = max(max φ″, 1 / min φ″) over the domain, where φ″(t) = R²/(R² − t²)^{3/2}.
pub fn make_circle_arc(radius: f64, domain: Interval) -> Result<GraphCurve> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::param(format!("circle radius must be positive, got {radius}")));
    }
    let (a, b) = (domain.lo, domain.hi);
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidDomain { lo: a, hi: b });
    }
    let t_far = if a.abs() > b.abs() { a } else { b };
    if t_far.abs() >= radius {
        return Err(Error::SlopeBound {
            t: t_far,
            slope: f64::INFINITY,
            limit: 1.0 - DELTA,
        });
    }
    let t_near = if a <= 0.0 && b >= 0.0 { 0.0 } else { a.abs().min(b.abs()) };
    let second = |t: f64| {
        let r2 = radius * radius;
        r2 / (r2 - t * t).powf(1.5)
    };
    let lambda = second(t_far).max(1.0 / second(t_near));
    GraphCurve::new(Profile::CircleArc { radius }, domain, Convexity::Convex, lambda)
}

/// A curve together with its extension φ₊ to `I₊ = [a − δ, b + δ]`, glued
/// on with the quadratic `φ(a) + φ′(a)(t − a) + sgn(φ″)(t − a)²/(2λ)` at
/// either end.
#[derive(Clone, Copy, Debug)]
pub struct ExtendedGraphCurve {
    base: GraphCurve,
    turning: f64,
}

pub fn extend_curve(curve: GraphCurve) -> ExtendedGraphCurve {
    ExtendedGraphCurve::new(curve)
}

impl ExtendedGraphCurve {
    pub fn new(base: GraphCurve) -> Self {
        let mut ext = ExtendedGraphCurve { base, turning: 0.0 };
        ext.turning = ext.locate_turning_point();
        ext
    }

    pub fn base(&self) -> &GraphCurve {
        &self.base
    }

    /// `I₊`.
    pub fn domain_plus(&self) -> Interval {
        let d = self.base.domain;
        Interval {
            lo: d.lo - DELTA,
            hi: d.hi + DELTA,
        }
    }

    /// `I` when `extended` is false, `I₊` otherwise.
    pub fn param_domain(&self, extended: bool) -> Interval {
        if extended {
            self.domain_plus()
        } else {
            self.base.domain
        }
    }

    /// Three-branch extension formula. Outside `I₊` the end quadratics keep
    /// going; callers restrict to `I₊` themselves.
    pub fn phi_plus(&self, t: f64) -> f64 {
        let Interval { lo: a, hi: b } = self.base.domain;
        let c = self.base.convexity.sign() / (2.0 * self.base.lambda);
        if t < a {
            let s = t - a;
            self.base.phi(a) + self.base.dphi(a) * s + c * s * s
        } else if t > b {
            let s = t - b;
            self.base.phi(b) + self.base.dphi(b) * s + c * s * s
        } else {
            self.base.phi(t)
        }
    }

    /// `φ₊(t + du) − φ₊(t)`, accurate when `du` is small against `t`.
    pub fn phi_plus_diff(&self, t: f64, du: f64) -> f64 {
        let Interval { lo: a, hi: b } = self.base.domain;
        let s = t + du;
        // split at the branch points so each piece uses one closed form
        for edge in [a, b] {
            if (t < edge) != (s < edge) && t != edge && s != edge {
                return self.phi_plus_diff(t, edge - t) + self.phi_plus_diff(edge, s - edge);
            }
        }
        let c = self.base.convexity.sign() / (2.0 * self.base.lambda);
        let mid = t + 0.5 * du;
        if mid < a {
            du * (self.base.dphi(a) + c * (2.0 * (t - a) + du))
        } else if mid > b {
            du * (self.base.dphi(b) + c * (2.0 * (t - b) + du))
        } else {
            self.base.profile.phi_diff(t, du)
        }
    }

    pub fn dphi_plus(&self, t: f64) -> f64 {
        let Interval { lo: a, hi: b } = self.base.domain;
        let c = self.base.convexity.sign() / self.base.lambda;
        if t < a {
            self.base.dphi(a) + c * (t - a)
        } else if t > b {
            self.base.dphi(b) + c * (t - b)
        } else {
            self.base.dphi(t)
        }
    }

    /// The point where φ₊′ changes sign, clamped to `I₊`. φ₊ is monotone on
    /// each side of it, so it is the extremum of φ₊ over any sub-interval
    /// after clamping.
    pub fn turning_point(&self) -> f64 {
        self.turning
    }

    fn locate_turning_point(&self) -> f64 {
        let Interval { lo, hi } = self.domain_plus();
        let (dlo, dhi) = (self.dphi_plus(lo), self.dphi_plus(hi));
        if dlo == 0.0 {
            return lo;
        }
        if dhi == 0.0 {
            return hi;
        }
        if dlo.signum() == dhi.signum() {
            return if dlo.abs() <= dhi.abs() { lo } else { hi };
        }
        crate::roots::bisect(|t| self.dphi_plus(t), lo, hi, 1e-14)
    }

    /// `(min φ₊, max φ₊)` over `[t0, t1]`, using monotonicity on either side
    /// of the turning point.
    pub fn range_on(&self, t0: f64, t1: f64) -> (f64, f64) {
        let tc = self.turning.clamp(t0, t1);
        let (f0, f1, fc) = (self.phi_plus(t0), self.phi_plus(t1), self.phi_plus(tc));
        match self.base.convexity {
            Convexity::Convex => (fc, f0.max(f1)),
            Convexity::Concave => (f0.min(f1), fc),
        }
    }
}

/// The translate `(α, β) + 𝒞₊`, i.e. `{(α + t, β + φ₊(t)) : t ∈ I₊}`.
#[derive(Clone, Copy, Debug)]
pub struct TranslatedCurve {
    pub parent: ExtendedGraphCurve,
    pub anchor_alpha: f64,
    pub anchor_beta: f64,
}

impl TranslatedCurve {
    /// The extended curve centred on `x = α` that passes through `e`
    /// (the curve usually written `C_{e,α}`).
    pub fn through(curve: &ExtendedGraphCurve, e: Point, alpha: f64) -> Result<Self> {
        let t = e.x - alpha;
        let dom = curve.domain_plus();
        if !dom.contains(t) {
            return Err(Error::OutOfDomain { t, lo: dom.lo, hi: dom.hi });
        }
        Ok(TranslatedCurve {
            parent: *curve,
            anchor_alpha: alpha,
            anchor_beta: e.y - curve.phi_plus(t),
        })
    }

    pub fn point_at(&self, t: f64) -> Point {
        Point::new(self.anchor_alpha + t, self.anchor_beta + self.parent.phi_plus(t))
    }

    /// Signed vertical offset of `z` from the curve, if `z` lies over `I₊`.
    pub fn vertical_offset(&self, z: Point) -> Option<f64> {
        let t = z.x - self.anchor_alpha;
        self.parent
            .domain_plus()
            .contains(t)
            .then(|| z.y - self.point_at(t).y)
    }
}

/// Unit tangent `omega1` and unit normal `omega2` (tangent turned clockwise by π/2).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    pub omega1: Point,
    pub omega2: Point,
}

/// Frame of `C_{e,α}` at `e`: ω₁ ∝ (1, φ₊′(e₁ − α)), ω₂ ∝ (φ₊′(e₁ − α), −1).
pub fn frame_at(curve: &ExtendedGraphCurve, e: Point, alpha: f64) -> Result<Frame> {
    let t = e.x - alpha;
    let dom = curve.domain_plus();
    if !dom.contains(t) {
        return Err(Error::OutOfDomain { t, lo: dom.lo, hi: dom.hi });
    }
    let d = curve.dphi_plus(t);
    let n = d.hypot(1.0);
    Ok(Frame {
        omega1: Point::new(1.0 / n, d / n),
        omega2: Point::new(d / n, -1.0 / n),
    })
}
