//! Sampled comparison of curve double sectors with straight ones.

use favard_lab::multiscale::{random_sector_cases, verify_sector_comparability, verify_strip_containment};
use favard_lab::{extend_curve, make_parabola, Interval};

fn main() -> favard_lab::Result<()> {
    let curve = extend_curve(make_parabola(0.5, Interval::new(-0.9, 0.9)?)?);
    for (k, spec) in random_sector_cases(&curve, 5, 1)?.iter().enumerate() {
        let a = verify_sector_comparability(spec, 10_000, k as u64)?;
        let b = verify_strip_containment(spec, 10_000, k as u64)?;
        println!(
            "M={:.3e} r={:.3e}: inner {} outer {} slice {} strip {} (max slice ratio {:.3}, strip ratio {:.3})",
            spec.m, spec.r, a.inner_violations, a.outer_violations, a.slice_violations, b.violations, a.max_slice_ratio, b.max_ratio
        );
    }
    Ok(())
}
