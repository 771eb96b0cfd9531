//! Buffon-curve Monte Carlo against the quadrature value of Fav_C(K_n).

use favard_lab::estimators::{buffon_curve_mc, difference_ranges, favard_curve_length, McSpec, QuadratureSpec};
use favard_lab::fractal::cantor_generation;
use favard_lab::geom::PlanarSet;
use favard_lab::{extend_curve, make_circle_arc, Interval};

fn main() -> favard_lab::Result<()> {
    let arc = extend_curve(make_circle_arc(2.0, Interval::new(-1.0, 1.0)?)?);
    let mc = McSpec {
        samples: 1_000_000,
        ..McSpec::default()
    };
    for n in 0..=2 {
        let k = cantor_generation(n)?;
        let quad = favard_curve_length(&arc, &k, &QuadratureSpec::with_tol(1e-6)).value;
        let (a, b) = difference_ranges(&arc, &k.bounding_box().unwrap());
        let est = buffon_curve_mc(&arc, &k, &mc, a, b)?;
        println!(
            "K_{n}: quadrature {quad:.5}  monte carlo {:.5} +- {:.5} ({} hits)",
            est.estimate, est.std_error, est.hits
        );
    }
    Ok(())
}
