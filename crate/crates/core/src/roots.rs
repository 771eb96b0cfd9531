//! Bracketed bisection for monotone or sign-changing scalar functions.

/// Bisects `f` on `[lo, hi]` until the bracket is narrower than `tol`.
///
/// Assumes `f(lo)` and `f(hi)` differ in sign. Returns an exact zero as soon
/// as one is hit; otherwise the midpoint of the final bracket.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    if f(hi) == 0.0 {
        return hi;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Finds a root of `f` in `[lo, hi]` by scanning `pieces` uniform
/// sub-brackets for a sign change and bisecting the first one found.
pub fn find_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, pieces: usize, tol: f64) -> Option<f64> {
    if !(lo <= hi) {
        return None;
    }
    let pieces = pieces.max(1);
    let mut a = lo;
    let mut fa = f(a);
    if fa == 0.0 {
        return Some(a);
    }
    for k in 1..=pieces {
        let b = if k == pieces { hi } else { lo + (hi - lo) * k as f64 / pieces as f64 };
        let fb = f(b);
        if fb == 0.0 {
            return Some(b);
        }
        if (fa < 0.0) != (fb < 0.0) {
            return Some(bisect(&f, a, b, tol));
        }
        a = b;
        fa = fb;
    }
    None
}
