//! Seeded sampling of points, vectors and tangent vectors.
//!
//! All randomness in the crate flows through [`Rng`], a ChaCha stream whose
//! output is fixed for a given seed on every platform.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::clifford_algebra::DamekRicciAlgebra;
use crate::linalg::Vector;
use crate::model::{Point, TangentVec};

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Vector with independent standard normal entries.
pub fn gaussian_vector(rng: &mut Rng, len: usize) -> Vector {
    Vector::from_fn(len, |_, _| rng.sample(StandardNormal))
}

/// Uniformly distributed unit vector; empty when `len = 0`.
pub fn unit_vector(rng: &mut Rng, len: usize) -> Vector {
    if len == 0 {
        return Vector::zeros(0);
    }
    loop {
        let v = gaussian_vector(rng, len);
        let norm = v.norm();
        if norm > 1e-6 {
            return v / norm;
        }
    }
}

pub fn uniform(rng: &mut Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

/// Lower end of the sampled `t` range.
pub const T_MIN: f64 = 0.05;
/// Upper end of the sampled `t` range.
pub const T_MAX: f64 = 20.0;

/// Point with log-uniform `t ∈ [0.05, 20]` and Gaussian `V`, `Z`.
pub fn sample_point(rng: &mut Rng, alg: &DamekRicciAlgebra) -> Point {
    let log_t = uniform(rng, T_MIN.ln(), T_MAX.ln());
    let v = gaussian_vector(rng, alg.n());
    let z = gaussian_vector(rng, alg.m());
    Point::new(v, z, log_t.exp()).expect("sampled t is positive")
}

/// Point with `t` log-uniform in `[t_lo, t_hi]` and Gaussian `V`, `Z` of
/// standard deviation `scale`.
pub fn sample_point_scaled(rng: &mut Rng, alg: &DamekRicciAlgebra, t_lo: f64, t_hi: f64, scale: f64) -> Point {
    let log_t = uniform(rng, t_lo.ln(), t_hi.ln());
    let v = gaussian_vector(rng, alg.n()) * scale;
    let z = gaussian_vector(rng, alg.m()) * scale;
    Point::new(v, z, log_t.exp()).expect("sampled t is positive")
}

/// Uniform unit tangent vector in `𝔳 ⊕ 𝔷 ⊕ ℝ`.
pub fn unit_tangent(rng: &mut Rng, alg: &DamekRicciAlgebra) -> TangentVec {
    let (n, m) = (alg.n(), alg.m());
    let w = unit_vector(rng, n + m + 1);
    TangentVec::new(w.rows(0, n).into_owned(), w.rows(n, m).into_owned(), w[n + m])
}
