//! Favard curve length of K_n for a parabola and a circular arc, with the
//! curve projection of one square spelled out.

use favard_lab::estimators::{favard_curve_length, QuadratureSpec};
use favard_lab::fractal::cantor_generation;
use favard_lab::projection::{project_set, ProjectionQuery};
use favard_lab::{extend_curve, make_circle_arc, make_parabola, Interval};

fn main() -> favard_lab::Result<()> {
    let parabola = extend_curve(make_parabola(0.5, Interval::new(-0.9, 0.9)?)?);
    let arc = extend_curve(make_circle_arc(2.0, Interval::new(-1.0, 1.0)?)?);

    let k1 = cantor_generation(1)?;
    let img = project_set(&ProjectionQuery::new(parabola, 0.0), &k1);
    println!("Phi_0(K_1) for the parabola: {:?}, measure {}", img.intervals(), img.measure());

    let q = QuadratureSpec::default();
    for n in 0..=4 {
        let k = cantor_generation(n)?;
        println!(
            "n={n}  parabola {:.6}  arc {:.6}",
            favard_curve_length(&parabola, &k, &q).value,
            favard_curve_length(&arc, &k, &q).value
        );
    }
    Ok(())
}
