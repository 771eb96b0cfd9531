//! Grid ball covers of E_n = ∂K_n at the scale of its squares.

use std::f64::consts::SQRT_2;

use favard_lab::fractal::{boundary, cantor_generation};
use favard_lab::multiscale::hausdorff_content_cover;

fn main() -> favard_lab::Result<()> {
    for n in 1..=6 {
        let e = boundary(&cantor_generation(n)?);
        let r_plus = SQRT_2 * 4f64.powi(-(n as i32));
        let cover = hausdorff_content_cover(&e, r_plus / 2.0, r_plus)?;
        println!("n={n}: {} balls, content <= {:.4}", cover.balls.len(), cover.content_upper);
    }
    Ok(())
}
