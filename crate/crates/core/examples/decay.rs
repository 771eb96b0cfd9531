//! Power-law fit to Fav(K_n), n = 2..6, and an SVG with reference shapes.
//!
//! cargo run --release --example decay -- decay.svg

use favard_lab::cli::decay_svg;
use favard_lab::estimators::{favard_length, fit_decay, reference_bounds, QuadratureSpec};
use favard_lab::fractal::cantor_generation;

fn main() -> favard_lab::Result<()> {
    let q = QuadratureSpec::default();
    let mut rows = Vec::new();
    for n in 0..=6u32 {
        let v = favard_length(&cantor_generation(n)?, &q).value;
        rows.push((n as f64, v, 0.0));
    }
    let fit = fit_decay(&rows[2..].iter().map(|r| (r.0, r.1)).collect::<Vec<_>>())?;
    println!("exponent {:.4}  log C {:.4}  rms residual {:.2e}", fit.exponent, fit.log_c, fit.residual);
    for n in [2u64, 6, 1000] {
        println!("shapes at n={n}: {:?}", reference_bounds(n)?);
    }
    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, decay_svg(&rows, "Fav(K_n)")?)?;
        println!("wrote {path}");
    }
    Ok(())
}
