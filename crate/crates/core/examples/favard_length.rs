//! Favard length of the unit square, a unit segment and K_0..K_5.

use favard_lab::estimators::{favard_length, QuadratureSpec};
use favard_lab::fractal::cantor_generation;
use favard_lab::geom::{Rect, RectSet};

fn main() -> favard_lab::Result<()> {
    let q = QuadratureSpec::default();
    println!("square  {:.8}", favard_length(&RectSet::unit_square(), &q).value);
    println!("segment {:.8}", favard_length(&RectSet(vec![Rect::horizontal(0.0, 1.0, 0.5)]), &q).value);
    for n in 0..=5 {
        let r = favard_length(&cantor_generation(n)?, &q);
        println!("K_{n}     {:.8} (panels {}, converged {})", r.value, r.panels, r.converged);
    }
    Ok(())
}
