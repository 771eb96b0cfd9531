//! Rectifiability constant lower bounds for a graph sample, a sample of
//! E_3 and two isolated points.

use favard_lab::fractal::{boundary, cantor_generation, sample_points};
use favard_lab::geom::{Point, WeightedPointCloud};
use favard_lab::multiscale::{rectifiability_constant_lower, RectSearch};

fn main() -> favard_lab::Result<()> {
    let s = RectSearch::default();
    let graph = WeightedPointCloud::from_points((0..=8192).map(|k| {
        let x = k as f64 / 8192.0;
        Point::new(x, 0.3 + 0.2 * x * x)
    }));
    println!("graph of 0.3 + 0.2 x^2: {:.4}", rectifiability_constant_lower(&graph, 1e-3, 1.0, 1.0, &s)?);

    let e3 = sample_points(&boundary(&cantor_generation(3)?), 4, 0)?;
    for r in [0.5, 0.05] {
        println!("E_3 sample, r={r}: {:.4}", rectifiability_constant_lower(&e3, 1e-3, r, 1.0, &s)?);
    }

    let two = WeightedPointCloud::from_points([Point::new(0.1, 0.1), Point::new(0.9, 0.4)]);
    println!("two points: {:.2e}", rectifiability_constant_lower(&two, 1e-6, 1.0, 1.0, &s)?);
    Ok(())
}
