//! Plane primitives shared by the projection and multiscale modules.

use serde::{Deserialize, Serialize};

use crate::interval::fmt17;

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn sub(self, other: Point) -> Point {
        Point::new(self.x - other.x, self.y - other.y)
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::new(x, y)
    }
}

/// Closed axis-aligned box `[x0, x1] × [y0, y1]`.
///
/// Degenerate boxes are allowed: `y0 == y1` is a horizontal segment,
/// `x0 == x1` a vertical one, both equal a point. Every component of a
/// square set or boundary set is one of these.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        debug_assert!(x0 <= x1 && y0 <= y1);
        Rect { x0, x1, y0, y1 }
    }

    pub fn horizontal(x0: f64, x1: f64, y: f64) -> Self {
        Rect::new(x0, x1, y, y)
    }

    pub fn vertical(x: f64, y0: f64, y1: f64) -> Self {
        Rect::new(x, x, y0, y1)
    }

    pub fn corners(&self) -> [Point; 4] {
        [
            Point::new(self.x0, self.y0),
            Point::new(self.x1, self.y0),
            Point::new(self.x0, self.y1),
            Point::new(self.x1, self.y1),
        ]
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }

    /// One-dimensional Hausdorff measure: perimeter for a true box, length for a segment.
    pub fn length(&self) -> f64 {
        let w = self.x1 - self.x0;
        let h = self.y1 - self.y0;
        if w > 0.0 && h > 0.0 {
            2.0 * (w + h)
        } else {
            w + h
        }
    }

    pub fn union_bbox(&self, other: &Rect) -> Rect {
        Rect::new(
            self.x0.min(other.x0),
            self.x1.max(other.x1),
            self.y0.min(other.y0),
            self.y1.max(other.y1),
        )
    }
}

/// A planar set given as a finite union of closed boxes and segments.
pub trait PlanarSet {
    fn components(&self) -> Vec<Rect>;

    fn bounding_box(&self) -> Option<Rect> {
        self.components().iter().copied().reduce(|a, b| a.union_bbox(&b))
    }
}

/// Ad-hoc union of boxes, used for unit squares, single segments and tests.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RectSet(pub Vec<Rect>);

impl RectSet {
    pub fn unit_square() -> Self {
        RectSet(vec![Rect::new(0.0, 1.0, 0.0, 1.0)])
    }
}

impl PlanarSet for RectSet {
    fn components(&self) -> Vec<Rect> {
        self.0.clone()
    }
}

impl Rect {
    pub fn intersects(&self, other: &Rect) -> bool {
        self.x0 <= other.x1 && other.x0 <= self.x1 && self.y0 <= other.y1 && other.y0 <= self.y1
    }
}

/// Point-membership oracle, the only thing Monte Carlo needs to know about a set.
///
/// `meets_box` is optional: when an oracle can say whether a closed box
/// meets the set, the Buffon simulation refines its curve grid locally
/// instead of relying on the grid nodes alone.
pub trait Membership: Sync {
    fn contains(&self, p: Point) -> bool;

    fn meets_box(&self, _b: &Rect) -> Option<bool> {
        None
    }
}

impl Membership for RectSet {
    fn contains(&self, p: Point) -> bool {
        self.0.iter().any(|r| r.contains(p))
    }

    fn meets_box(&self, b: &Rect) -> Option<bool> {
        Some(self.0.iter().any(|r| r.intersects(b)))
    }
}

/// Wraps a closure as a membership oracle.
pub struct MembershipFn<F>(pub F);

impl<F> Membership for MembershipFn<F>
where
    F: Fn(Point) -> bool + Sync,
{
    fn contains(&self, p: Point) -> bool {
        (self.0)(p)
    }
}

/// A point with a nonnegative weight; a cloud of these discretizes a measure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedPoint {
    pub x: f64,
    pub y: f64,
    pub w: f64,
}

impl WeightedPoint {
    pub fn point(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct WeightedPointCloud {
    pub points: Vec<WeightedPoint>,
}

impl WeightedPointCloud {
    pub fn new(points: Vec<WeightedPoint>) -> crate::Result<Self> {
        if let Some(p) = points.iter().find(|p| !(p.w >= 0.0 && p.w.is_finite())) {
            return Err(crate::Error::param(format!("negative or non-finite weight {}", p.w)));
        }
        Ok(WeightedPointCloud { points })
    }

    /// Unit weights.
    pub fn from_points(points: impl IntoIterator<Item = Point>) -> Self {
        WeightedPointCloud {
            points: points
                .into_iter()
                .map(|p| WeightedPoint { x: p.x, y: p.y, w: 1.0 })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.points.iter().map(|p| p.w).sum()
    }

    /// Columns `x,y,w`.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> crate::Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["x", "y", "w"])?;
        for p in &self.points {
            wtr.write_record([fmt17(p.x), fmt17(p.y), fmt17(p.w)])?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// Reads `x,y,w` rows; a file with only `x,y` columns gets unit weights.
    pub fn read_csv<R: std::io::Read>(r: R) -> crate::Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let mut points = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let field = |k: usize| -> crate::Result<f64> {
                rec.get(k)
                    .ok_or_else(|| crate::Error::Parse(format!("missing column {k} in cloud row")))?
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| crate::Error::Parse(e.to_string()))
            };
            let w = if rec.len() > 2 { field(2)? } else { 1.0 };
            points.push(WeightedPoint { x: field(0)?, y: field(1)?, w });
        }
        Self::new(points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rect_length_and_intersection() {
        assert_eq!(Rect::new(0.0, 1.0, 0.0, 1.0).length(), 4.0);
        assert_eq!(Rect::horizontal(0.0, 0.25, 3.0).length(), 0.25);
        assert_eq!(Rect::new(2.0, 2.0, 1.0, 1.0).length(), 0.0);
        let a = Rect::new(0.0, 1.0, 0.0, 1.0);
        assert!(a.intersects(&Rect::vertical(1.0, 0.5, 2.0)));
        assert!(!a.intersects(&Rect::vertical(1.1, 0.5, 2.0)));
    }

    #[test]
    fn cloud_csv_round_trip() {
        let c = WeightedPointCloud::new(vec![
            WeightedPoint { x: 0.1, y: -2.0, w: 0.25 },
            WeightedPoint { x: 1.0 / 3.0, y: 0.0, w: 1.0 },
        ])
        .unwrap();
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        assert_eq!(WeightedPointCloud::read_csv(&buf[..]).unwrap(), c);
        let unweighted = WeightedPointCloud::read_csv("x,y\n1,2\n".as_bytes()).unwrap();
        assert_eq!(unweighted.total_weight(), 1.0);
    }

    #[test]
    fn negative_weight_rejected() {
        assert!(WeightedPointCloud::new(vec![WeightedPoint { x: 0.0, y: 0.0, w: -1.0 }]).is_err());
    }
}
