//! Sliding pigeonhole choice on a mass sequence with one big jump.

use favard_lab::multiscale::sliding_pigeonhole;

fn main() -> favard_lab::Result<()> {
    let masses: Vec<f64> = (0..=40).map(|n| n as f64 + if n >= 25 { 100.0 } else { 0.0 }).collect();
    for eps in [0.05, 0.1, 0.25, 0.5] {
        let c = sliding_pigeonhole(&masses, eps)?;
        println!("eps={eps}: window [{}, {}] deficiency {:.3} <= {:.3}", c.n, c.m, c.deficiency, c.bound);
    }
    Ok(())
}
