//! Corner-IFS square generations with exact integer corners.
//!
//! Generation `n` of the digit set `D` in base `b` is the product `C × C`
//! where `C` collects the intervals `[i/bⁿ, (i+1)/bⁿ]` whose base-`b`
//! numerator `i` uses only digits from `D`. The four-corner Cantor
//! generation `K_n` is `D = {0, 3}`, `b = 4`.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geom::{Membership, PlanarSet, Point, Rect, WeightedPoint, WeightedPointCloud};
use crate::interval::{Interval, IntervalUnion};

/// Default generation cap: `4^12` squares is about 1.7·10⁷.
pub const MAX_GENERATION: u32 = 12;

const MAX_SQUARES: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq)]
pub struct SquareSet {
    generation: u32,
    base: u32,
    digits: Vec<u32>,
    denominator: u64,
    /// Corner numerators `(i, j)` in lexicographic order.
    squares: Vec<(u32, u32)>,
    shadow: IntervalUnion,
}

/// `K_n`.
pub fn cantor_generation(n: u32) -> Result<SquareSet> {
    corner_ifs_generation(n, &[0, 3], 4)
}

pub fn corner_ifs_generation(n: u32, digits: &[u32], base: u32) -> Result<SquareSet> {
    corner_ifs_generation_capped(n, digits, base, MAX_GENERATION)
}

/// Same as [`corner_ifs_generation`] with an explicit generation cap.
pub fn corner_ifs_generation_capped(n: u32, digits: &[u32], base: u32, max_generation: u32) -> Result<SquareSet> {
    if n > max_generation {
        return Err(Error::GenerationOutOfRange { n, max: max_generation });
    }
    if base < 2 {
        return Err(Error::param(format!("base must be at least 2, got {base}")));
    }
    let mut digits = digits.to_vec();
    digits.sort_unstable();
    digits.dedup();
    if digits.is_empty() {
        return Err(Error::EmptyDigitSet);
    }
    if let Some(&d) = digits.iter().find(|&&d| d >= base) {
        return Err(Error::DigitOutOfRange { digit: d, base });
    }
    let denominator = (base as u64)
        .checked_pow(n)
        .filter(|&d| d <= u32::MAX as u64 + 1)
        .ok_or_else(|| Error::param(format!("{base}^{n} does not fit the corner numerators")))?;
    let count = (digits.len() as u64).checked_pow(2 * n).unwrap_or(u64::MAX);
    if count > MAX_SQUARES {
        return Err(Error::param(format!("generation {n} would hold {count} squares")));
    }

    // numerators are generated in increasing order because digits are sorted
    let mut line: Vec<u32> = vec![0];
    for _ in 0..n {
        line = line
            .iter()
            .flat_map(|&i| digits.iter().map(move |&d| i * base + d))
            .collect();
    }
    let squares = line
        .iter()
        .flat_map(|&i| line.iter().map(move |&j| (i, j)))
        .collect();
    let den = denominator as f64;
    let shadow = IntervalUnion::from_intervals(
        line.iter()
            .map(|&i| Interval {
                lo: i as f64 / den,
                hi: (i as f64 + 1.0) / den,
            })
            .collect(),
    );
    Ok(SquareSet {
        generation: n,
        base,
        digits,
        denominator,
        squares,
        shadow,
    })
}

impl SquareSet {
    pub fn generation(&self) -> u32 {
        self.generation
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn scale_denominator(&self) -> u64 {
        self.denominator
    }

    pub fn squares(&self) -> &[(u32, u32)] {
        &self.squares
    }

    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }

    pub fn side(&self) -> f64 {
        1.0 / self.denominator as f64
    }

    /// The one-dimensional factor `C` (x-shadow and y-shadow alike).
    pub fn shadow(&self) -> &IntervalUnion {
        &self.shadow
    }

    pub fn square_rect(&self, (i, j): (u32, u32)) -> Rect {
        let den = self.denominator as f64;
        Rect::new(i as f64 / den, (i as f64 + 1.0) / den, j as f64 / den, (j as f64 + 1.0) / den)
    }

    /// Columns `n,i,j`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["n", "i", "j"])?;
        let n = self.generation.to_string();
        for &(i, j) in &self.squares {
            wtr.write_record([n.as_str(), &i.to_string(), &j.to_string()])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

impl PlanarSet for SquareSet {
    fn components(&self) -> Vec<Rect> {
        self.squares.iter().map(|&s| self.square_rect(s)).collect()
    }

    fn bounding_box(&self) -> Option<Rect> {
        let iv = self.shadow.intervals();
        let (lo, hi) = (iv.first()?.lo, iv.last()?.hi);
        Some(Rect::new(lo, hi, lo, hi))
    }
}

impl Membership for SquareSet {
    fn contains(&self, p: Point) -> bool {
        self.shadow.contains(p.x) && self.shadow.contains(p.y)
    }

    /// A box meets a product set iff both of its shadows meet the factor.
    fn meets_box(&self, b: &Rect) -> Option<bool> {
        Some(meets(&self.shadow, b.x0, b.x1) && meets(&self.shadow, b.y0, b.y1))
    }
}

fn meets(u: &IntervalUnion, lo: f64, hi: f64) -> bool {
    let ivs = u.intervals();
    let k = ivs.partition_point(|iv| iv.hi < lo);
    ivs.get(k).is_some_and(|iv| iv.lo <= hi)
}

/// The union of the four sides of every square, e.g. `E_n = ∂K_n`.
#[derive(Clone, Debug)]
pub struct BoundarySet {
    parent: SquareSet,
    segments: Vec<Rect>,
}

/// Sides are listed bottom, top, left, right for each square in order.
pub fn boundary(s: &SquareSet) -> BoundarySet {
    let segments = s
        .squares
        .iter()
        .flat_map(|&sq| {
            let r = s.square_rect(sq);
            [
                Rect::horizontal(r.x0, r.x1, r.y0),
                Rect::horizontal(r.x0, r.x1, r.y1),
                Rect::vertical(r.x0, r.y0, r.y1),
                Rect::vertical(r.x1, r.y0, r.y1),
            ]
        })
        .collect();
    BoundarySet {
        parent: s.clone(),
        segments,
    }
}

impl BoundarySet {
    pub fn parent(&self) -> &SquareSet {
        &self.parent
    }

    pub fn segments(&self) -> &[Rect] {
        &self.segments
    }

    /// One-dimensional Hausdorff measure.
    pub fn length(&self) -> f64 {
        self.segments.iter().map(Rect::length).sum()
    }
}

impl PlanarSet for BoundarySet {
    fn components(&self) -> Vec<Rect> {
        self.segments.clone()
    }

    fn bounding_box(&self) -> Option<Rect> {
        self.parent.bounding_box()
    }
}

impl Membership for BoundarySet {
    fn contains(&self, p: Point) -> bool {
        if !self.parent.contains(p) {
            return false;
        }
        let den = self.parent.denominator as f64;
        let (u, v) = (p.x * den, p.y * den);
        u == u.floor() || v == v.floor()
    }

    /// Meets the boundary iff it meets the squares without sitting strictly
    /// inside a single one.
    fn meets_box(&self, b: &Rect) -> Option<bool> {
        if !self.parent.meets_box(b)? {
            return Some(false);
        }
        let den = self.parent.denominator as f64;
        let inside = |lo: f64, hi: f64| {
            let k = (lo * den).floor();
            lo * den > k && hi * den < k + 1.0
        };
        Some(!(inside(b.x0, b.x1) && inside(b.y0, b.y1)))
    }
}

/// Samples `per_component` uniform points on each component's boundary
/// (each side for a [`BoundarySet`], each square's perimeter for a
/// [`SquareSet`]), weighted so the total equals the set's boundary length.
pub fn sample_points<S: PlanarSet>(s: &S, per_component: usize, seed: u64) -> Result<WeightedPointCloud> {
    if per_component == 0 {
        return Err(Error::param("per_component must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::new();
    for r in s.components() {
        let len = r.length();
        let w = len / per_component as f64;
        for _ in 0..per_component {
            let s: f64 = rng.gen::<f64>() * len;
            let p = point_on_perimeter(&r, s);
            points.push(WeightedPoint { x: p.x, y: p.y, w });
        }
    }
    WeightedPointCloud::new(points)
}

/// Arc-length parametrization of a box perimeter (or of a segment).
fn point_on_perimeter(r: &Rect, s: f64) -> Point {
    let (w, h) = (r.x1 - r.x0, r.y1 - r.y0);
    if h == 0.0 {
        return Point::new(r.x0 + s, r.y0);
    }
    if w == 0.0 {
        return Point::new(r.x0, r.y0 + s);
    }
    if s < w {
        Point::new(r.x0 + s, r.y0)
    } else if s < w + h {
        Point::new(r.x1, r.y0 + (s - w))
    } else if s < 2.0 * w + h {
        Point::new(r.x1 - (s - w - h), r.y1)
    } else {
        Point::new(r.x0, r.y1 - (s - 2.0 * w - h))
    }
}
