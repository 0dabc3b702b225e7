//! Small numerical building blocks: adaptive quadrature, simplex search and
//! root bracketing.

pub mod quadrature;
pub mod simplex;

pub use quadrature::integrate;
pub use simplex::{nelder_mead, SimplexOptions, SimplexResult};

/// Bisection on a bracket with `f(lo)` and `f(hi)` of opposite signs.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() <= tol {
            return mid;
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
