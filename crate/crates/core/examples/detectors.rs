//! Point-cloud detectors along a translated parabola.

use favard_lab::geom::{Point, WeightedPointCloud};
use favard_lab::multiscale::{detect_high_density_strip, detect_high_multiplicity, detect_positive_multiplicity, ScaleSequence};
use favard_lab::{extend_curve, make_parabola, Interval};

fn main() -> favard_lab::Result<()> {
    let c = extend_curve(make_parabola(0.5, Interval::new(-0.9, 0.9)?)?);
    let e = Point::new(0.0, 0.2);
    let cloud = WeightedPointCloud::from_points((0..12).map(|k| {
        let t = -0.5 + k as f64 * 0.09;
        Point::new(t, 0.2 + c.phi_plus(t))
    }));
    println!("high multiplicity (r_sep 0.05, 10): {}", detect_high_multiplicity(&c, e, 0.0, &cloud, 0.05, 10, 1e-9)?);
    let scales = ScaleSequence::geometric(5, 0.125, 0.25, 0.25)?;
    println!("positive multiplicity (n=3, k=1): {}", detect_positive_multiplicity(&c, e, 0.0, &cloud, &scales, 3, 1, 1e-9)?);
    let j = Interval::new(0.15, 0.25)?;
    println!("high density strip (ratio 100): {}", detect_high_density_strip(&c, 0.0, j, &cloud, 100.0)?);
    Ok(())
}
