//! Composite Simpson with uniform panel doubling.
//!
//! Each doubling only evaluates the new odd nodes. Node values are computed
//! in parallel but summed in index order, so the result does not depend on
//! the worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Stop when successive estimates differ by less than `rel_tol` relatively.
    pub rel_tol: f64,
    /// Number of doublings after the initial panel count.
    pub max_refinements: u32,
    pub initial_panels: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-4,
            max_refinements: 14,
            initial_panels: 16,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tol(rel_tol: f64) -> Self {
        QuadratureSpec {
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: f64,
    /// `|S_k − S_{k−1}|` at the last level.
    pub abs_error: f64,
    pub converged: bool,
    pub panels: usize,
    pub evaluations: usize,
}

impl QuadResult {
    pub fn rel_error(&self) -> f64 {
        if self.value == 0.0 {
            self.abs_error
        } else {
            self.abs_error / self.value.abs()
        }
    }
}

/// Integrates `f` over `[a, b]`. `f` is called from worker threads.
pub fn simpson<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> QuadResult
where
    F: Fn(f64) -> f64 + Sync,
{
    assert!(spec.rel_tol > 0.0, "rel_tol must be positive");
    let mut panels = spec.initial_panels.max(2).next_power_of_two();
    let node = |k: usize, n: usize| if k == n { b } else { a + (b - a) * k as f64 / n as f64 };

    let eval = |idx: Vec<usize>, n: usize| -> f64 {
        let vals: Vec<f64> = idx.par_iter().map(|&k| f(node(k, n))).collect();
        vals.iter().sum()
    };

    let ends = f(a) + f(b);
    let mut evens = eval((2..panels).step_by(2).collect(), panels);
    let mut odds = eval((1..panels).step_by(2).collect(), panels);
    let mut evaluations = panels + 1;
    let rule = |n: usize, evens: f64, odds: f64| (b - a) / n as f64 / 3.0 * (ends + 4.0 * odds + 2.0 * evens);
    let mut prev = rule(panels, evens, odds);
    let mut last_diff = f64::INFINITY;

    for _ in 0..spec.max_refinements {
        let n = panels * 2;
        evens += odds;
        odds = eval((1..n).step_by(2).collect(), n);
        evaluations += panels;
        panels = n;
        let cur = rule(panels, evens, odds);
        last_diff = (cur - prev).abs();
        prev = cur;
        if last_diff <= spec.rel_tol * cur.abs() {
            return QuadResult {
                value: cur,
                abs_error: last_diff,
                converged: true,
                panels,
                evaluations,
            };
        }
    }
    QuadResult {
        value: prev,
        abs_error: last_diff,
        converged: false,
        panels,
        evaluations,
    }
}
