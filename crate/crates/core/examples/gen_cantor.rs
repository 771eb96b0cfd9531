//! Generates K_n and prints its size and the measure of its shadow.
//!
//! cargo run --example gen_cantor -- 3

use favard_lab::fractal::{boundary, cantor_generation};

fn main() -> favard_lab::Result<()> {
    let n: u32 = std::env::args().nth(1).map_or(Ok(3), |s| s.parse()).expect("generation");
    let k = cantor_generation(n)?;
    println!("K_{n}: {} squares of side {}", k.len(), k.side());
    println!("shadow measure: {}", k.shadow().measure());
    println!("boundary length: {}", boundary(&k).length());
    k.write_csv(std::io::stdout().lock())?;
    Ok(())
}
