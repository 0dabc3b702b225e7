//! The half-space model `𝔳 ⊕ 𝔷 × ℝ₊` of a Damek–Ricci space.
//!
//! Points are triples `(V, Z, t)`. The group law, its affine extension to
//! `t ≤ 0`, the Riemannian distance, the left-invariant frame derivatives
//! and the Laplace–Beltrami operator all live here.

use crate::clifford_algebra::DamekRicciAlgebra;
use crate::error::{Error, Result};
use crate::linalg::Vector;

/// A point of the half-space model; `t > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub v: Vector,
    pub z: Vector,
    t: f64,
}

impl Point {
    pub fn new(v: Vector, z: Vector, t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::NotInModel { t });
        }
        Ok(Self { v, z, t })
    }

    pub fn identity(n: usize, m: usize) -> Self {
        Self { v: Vector::zeros(n), z: Vector::zeros(m), t: 1.0 }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn to_affine(&self) -> AffinePoint {
        AffinePoint { v: self.v.clone(), z: self.z.clone(), t: self.t }
    }
}

/// A point of `𝔳 ⊕ 𝔷 × ℝ` with no sign restriction on `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinePoint {
    pub v: Vector,
    pub z: Vector,
    pub t: f64,
}

impl AffinePoint {
    pub fn new(v: Vector, z: Vector, t: f64) -> Self {
        Self { v, z, t }
    }

    pub fn to_point(&self) -> Result<Point> {
        Point::new(self.v.clone(), self.z.clone(), self.t)
    }

    /// Max-norm distance between coordinates.
    pub fn max_diff(&self, other: &AffinePoint) -> f64 {
        (&self.v - &other.v)
            .amax()
            .max((&self.z - &other.z).amax())
            .max((self.t - other.t).abs())
    }
}

impl From<Point> for AffinePoint {
    fn from(p: Point) -> Self {
        Self { v: p.v, z: p.z, t: p.t }
    }
}

/// An element `(v, z, s)` of the Lie algebra `𝔰 = 𝔳 ⊕ 𝔷 ⊕ ℝ`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVec {
    pub v: Vector,
    pub z: Vector,
    pub s: f64,
}

impl TangentVec {
    pub fn new(v: Vector, z: Vector, s: f64) -> Self {
        Self { v, z, s }
    }

    pub fn norm_squared(&self) -> f64 {
        self.v.norm_squared() + self.z.norm_squared() + self.s * self.s
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn dot(&self, other: &TangentVec) -> f64 {
        self.v.dot(&other.v) + self.z.dot(&other.z) + self.s * other.s
    }

    pub fn normalized(&self) -> Self {
        let k = 1.0 / self.norm();
        Self { v: &self.v * k, z: &self.z * k, s: self.s * k }
    }
}

/// Group product `p · q`.
pub fn multiply(alg: &DamekRicciAlgebra, p: &Point, q: &Point) -> Point {
    let x = left_translate(alg, p, &q.to_affine());
    Point { v: x.v, z: x.z, t: x.t }
}

/// Group inverse `(−V/√t, −Z/t, 1/t)`.
pub fn inverse(p: &Point) -> Point {
    let s = p.t.sqrt();
    Point { v: -&p.v / s, z: -&p.z / p.t, t: 1.0 / p.t }
}

/// Left translation by `p = (V̄, Z̄, t̄)`, extended affinely to all `t`:
/// `(V, Z, t) ↦ (V̄ + √t̄ V, Z̄ + t̄ Z + ½√t̄ [V̄, V], t̄ t)`.
pub fn left_translate(alg: &DamekRicciAlgebra, p: &Point, x: &AffinePoint) -> AffinePoint {
    let s = p.t.sqrt();
    let v = &p.v + &x.v * s;
    let z = &p.z + &x.z * p.t + alg.bracket(&p.v, &x.v) * (0.5 * s);
    AffinePoint { v, z, t: p.t * x.t }
}

/// Riemannian distance.
///
/// Evaluated as `d = 2 asinh(√S / 2)` with
/// `S = [(t₁−t₀)² + ½(t₁+t₀)‖ΔV‖² + ‖ΔV‖⁴/16 + ‖ΔZ + ½[V₁,V₀]‖²] / (t₁t₀)`,
/// a sum of non-negative terms, so coincident points give exactly 0 and
/// nearby points keep full relative accuracy.
pub fn distance(alg: &DamekRicciAlgebra, x1: &Point, x0: &Point) -> f64 {
    let dv = (&x1.v - &x0.v).norm_squared();
    let w = &x1.z - &x0.z + alg.bracket(&x1.v, &x0.v) * 0.5;
    let dt = x1.t - x0.t;
    let s = (dt * dt + 0.5 * (x1.t + x0.t) * dv + dv * dv / 16.0 + w.norm_squared()) / (x1.t * x0.t);
    2.0 * (0.5 * s.sqrt()).asinh()
}

/// Coordinate partial derivatives `(∂_V f, ∂_Z f, ∂_t f)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub dv: Vector,
    pub dz: Vector,
    pub dt: f64,
}

/// A smooth function on the half-space model.
pub trait ScalarField {
    fn value(&self, x: &Point) -> f64;

    /// Analytic coordinate partials, if available.
    fn gradient(&self, _x: &Point) -> Option<Gradient> {
        None
    }
}

impl<F: Fn(&Point) -> f64> ScalarField for F {
    fn value(&self, x: &Point) -> f64 {
        self(x)
    }
}

/// Central finite-difference order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdOrder {
    Second,
    Fourth,
}

/// Relative step for first partials by finite differences.
pub const FD_STEP: f64 = 1e-5;
/// Relative step for the second derivatives in [`laplacian`].
pub const FD_STEP_SECOND: f64 = 1e-3;

/// Which coordinate a stencil moves.
#[derive(Debug, Clone, Copy)]
enum Coord {
    V(usize),
    Z(usize),
    T,
}

fn shifted(x: &Point, coord: Coord, h: f64) -> Point {
    let mut y = x.clone();
    match coord {
        Coord::V(i) => y.v[i] += h,
        Coord::Z(a) => y.z[a] += h,
        Coord::T => y.t += h,
    }
    y
}

fn coordinate(x: &Point, coord: Coord) -> f64 {
    match coord {
        Coord::V(i) => x.v[i],
        Coord::Z(a) => x.z[a],
        Coord::T => x.t,
    }
}

/// First-derivative stencil along a coordinate.
fn first_difference(g: impl Fn(&Point) -> f64, x: &Point, coord: Coord, h: f64, order: FdOrder) -> f64 {
    let at = |k: f64| g(&shifted(x, coord, k * h));
    match order {
        FdOrder::Second => (at(1.0) - at(-1.0)) / (2.0 * h),
        FdOrder::Fourth => (8.0 * (at(1.0) - at(-1.0)) - (at(2.0) - at(-2.0))) / (12.0 * h),
    }
}

/// Step for a coordinate. For `t` the step is proportional to `t` so the
/// stencil never leaves the half-space.
fn step(x: &Point, coord: Coord, rel: f64) -> f64 {
    match coord {
        Coord::T => rel * x.t,
        _ => rel * coordinate(x, coord).abs().max(1.0),
    }
}

/// Coordinate partials by central differences with step `1e-5·max(1, |x_i|)`
/// (`1e-5·t` in the `t` direction).
pub fn fd_gradient(f: &dyn ScalarField, x: &Point, order: FdOrder) -> Gradient {
    let g = |y: &Point| f.value(y);
    let dv = Vector::from_fn(x.v.len(), |i, _| {
        let c = Coord::V(i);
        first_difference(g, x, c, step(x, c, FD_STEP), order)
    });
    let dz = Vector::from_fn(x.z.len(), |a, _| {
        let c = Coord::Z(a);
        first_difference(g, x, c, step(x, c, FD_STEP), order)
    });
    let dt = first_difference(g, x, Coord::T, step(x, Coord::T, FD_STEP), order);
    Gradient { dv, dz, dt }
}

/// Analytic partials if the field provides them, otherwise fourth-order
/// finite differences.
pub fn partials(f: &dyn ScalarField, x: &Point) -> Gradient {
    f.gradient(x).unwrap_or_else(|| fd_gradient(f, x, FdOrder::Fourth))
}

/// Left-invariant frame derivatives `(𝐄_i f, 𝐅_α f, 𝐀 f)` from coordinate
/// partials:
/// `𝐄_i f = √t(∂_{v_i} f − ½⟨[E_i, V], ∇_Z f⟩)`, `𝐅_α f = t ∂_{z_α} f`,
/// `𝐀 f = t ∂_t f`.
pub fn frame_derivatives(alg: &DamekRicciAlgebra, x: &Point, g: &Gradient) -> (Vector, Vector, f64) {
    let st = x.t.sqrt();
    // Σ_α ∂_α f ⟨J_α E_i, V⟩ = −(J_{∇_Z f} V)_i
    let e = (&g.dv + alg.j(&g.dz, &x.v) * 0.5) * st;
    let fz = &g.dz * x.t;
    (e, fz, x.t * g.dt)
}

/// `‖∇f‖²` in the left-invariant orthonormal frame.
pub fn frame_grad_sq(alg: &DamekRicciAlgebra, f: &dyn ScalarField, x: &Point) -> f64 {
    let g = partials(f, x);
    grad_sq_from_partials(alg, x, &g)
}

pub fn grad_sq_from_partials(alg: &DamekRicciAlgebra, x: &Point, g: &Gradient) -> f64 {
    let (e, fz, a) = frame_derivatives(alg, x, g);
    e.norm_squared() + fz.norm_squared() + a * a
}

/// Laplace–Beltrami operator
/// `Δ = tΣ∂²_{v_i} + t(t + ¼‖V‖²)Σ∂²_{z_α} + t²∂²_t − (m + n/2 − 1)t∂_t + tΣ_α ∂_{J_α V}∂_{z_α}`.
///
/// Second derivatives use fourth-order central differences of the analytic
/// gradient when available, and fourth-order value stencils otherwise.
/// Steps are `1e-3·max(1, |x_i|)` in `V` and `Z` and `1e-3·t` in `t`.
pub fn laplacian(alg: &DamekRicciAlgebra, f: &dyn ScalarField, x: &Point) -> f64 {
    laplacian_with_step(alg, f, x, FD_STEP_SECOND)
}

pub fn laplacian_with_step(alg: &DamekRicciAlgebra, f: &dyn ScalarField, x: &Point, rel: f64) -> f64 {
    let (n, m) = (alg.n(), alg.m());
    let t = x.t;
    let has_gradient = f.gradient(x).is_some();

    let (lap_v, lap_z, d2t, dt, mixed) = if has_gradient {
        let grad = |y: &Point| f.gradient(y).expect("gradient availability is uniform");
        let g0 = grad(x);
        let mut lap_v = 0.0;
        for i in 0..n {
            let c = Coord::V(i);
            lap_v += first_difference(|y| grad(y).dv[i], x, c, step(x, c, rel), FdOrder::Fourth);
        }
        let mut lap_z = 0.0;
        for a in 0..m {
            let c = Coord::Z(a);
            lap_z += first_difference(|y| grad(y).dz[a], x, c, step(x, c, rel), FdOrder::Fourth);
        }
        let d2t = first_difference(|y| grad(y).dt, x, Coord::T, step(x, Coord::T, rel), FdOrder::Fourth);
        // Σ_α ∂_{J_α V} ∂_{z_α} f: directional derivative of ∂_{z_α} f along J_α V.
        let mut mixed = 0.0;
        for a in 0..m {
            let dir = alg.j_basis(a, &x.v);
            let h = rel * x.v.amax().max(1.0);
            let along = |k: f64| {
                let mut y = x.clone();
                y.v += &dir * (k * h);
                grad(&y).dz[a]
            };
            mixed += (8.0 * (along(1.0) - along(-1.0)) - (along(2.0) - along(-2.0))) / (12.0 * h);
        }
        (lap_v, lap_z, d2t, g0.dt, mixed)
    } else {
        let val = |y: &Point| f.value(y);
        let f0 = val(x);
        let second = |c: Coord| {
            let h = step(x, c, rel);
            let at = |k: f64| val(&shifted(x, c, k * h));
            (-(at(2.0) + at(-2.0)) + 16.0 * (at(1.0) + at(-1.0)) - 30.0 * f0) / (12.0 * h * h)
        };
        let lap_v: f64 = (0..n).map(|i| second(Coord::V(i))).sum();
        let lap_z: f64 = (0..m).map(|a| second(Coord::Z(a))).sum();
        let d2t = second(Coord::T);
        let dt = first_difference(val, x, Coord::T, step(x, Coord::T, rel), FdOrder::Fourth);
        let weights = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];
        let mut mixed = 0.0;
        for a in 0..m {
            let dir = alg.j_basis(a, &x.v);
            let hv = rel * x.v.amax().max(1.0);
            let hz = step(x, Coord::Z(a), rel);
            let mut acc = 0.0;
            for &(kv, wv) in &weights {
                for &(kz, wz) in &weights {
                    let mut y = x.clone();
                    y.v += &dir * (kv * hv);
                    y.z[a] += kz * hz;
                    acc += wv * wz * val(&y);
                }
            }
            mixed += acc / (144.0 * hv * hz);
        }
        (lap_v, lap_z, d2t, dt, mixed)
    };

    let dim_factor = m as f64 + n as f64 / 2.0 - 1.0;
    t * lap_v + t * (t + 0.25 * x.v.norm_squared()) * lap_z + t * t * d2t - dim_factor * t * dt + t * mixed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford_algebra::{build_algebra, CliffordSpec, IrrepKind};
    use crate::sampling;

    fn alg() -> DamekRicciAlgebra {
        build_algebra(&CliffordSpec::tagged(3, &[(IrrepKind::D1, 1), (IrrepKind::D2, 1)])).unwrap()
    }

    fn pt(v: &[f64], z: &[f64], t: f64) -> Point {
        Point::new(Vector::from_row_slice(v), Vector::from_row_slice(z), t).unwrap()
    }

    #[test]
    fn rejects_nonpositive_t() {
        assert!(matches!(Point::new(Vector::zeros(1), Vector::zeros(1), 0.0), Err(Error::NotInModel { .. })));
        assert!(Point::new(Vector::zeros(1), Vector::zeros(1), -1.0).is_err());
    }

    #[test]
    fn dilation_product() {
        let a = build_algebra(&CliffordSpec::tagged(1, &[(IrrepKind::D, 1)])).unwrap();
        let p = pt(&[0.0, 0.0], &[0.0], 4.0);
        let q = pt(&[1.0, -2.0], &[3.0], 1.0);
        let r = multiply(&a, &p, &q);
        assert_eq!(r, pt(&[2.0, -4.0], &[12.0], 4.0));
    }

    #[test]
    fn group_axioms() {
        let a = alg();
        let mut rng = sampling::rng(5);
        let e = Point::identity(8, 3);
        for _ in 0..50 {
            let p = sampling::sample_point(&mut rng, &a);
            let q = sampling::sample_point(&mut rng, &a);
            let r = sampling::sample_point(&mut rng, &a);
            let lhs = multiply(&a, &multiply(&a, &p, &q), &r).to_affine();
            let rhs = multiply(&a, &p, &multiply(&a, &q, &r)).to_affine();
            assert!(lhs.max_diff(&rhs) <= 1e-12 * (1.0 + lhs.v.amax().max(lhs.z.amax()).max(lhs.t)));
            assert_eq!(multiply(&a, &e, &q), q);
            let pi = inverse(&p);
            assert!(multiply(&a, &p, &pi).to_affine().max_diff(&e.to_affine()) < 1e-12);
            assert!(multiply(&a, &pi, &p).to_affine().max_diff(&e.to_affine()) < 1e-12);
        }
    }

    #[test]
    fn inverse_of_dilation() {
        let p = pt(&[0.0, 0.0], &[0.0], 8.0);
        assert_eq!(inverse(&p), pt(&[0.0, 0.0], &[0.0], 0.125));
    }

    #[test]
    fn vertical_distance() {
        let a = build_algebra(&CliffordSpec::tagged(1, &[(IrrepKind::D, 1)])).unwrap();
        let e = Point::identity(2, 1);
        for t in [0.01, 0.5, 3.0, 100.0] {
            let x = pt(&[0.0, 0.0], &[0.0], t);
            assert!((distance(&a, &x, &e) - t.ln().abs()).abs() < 1e-13);
        }
        assert_eq!(distance(&a, &e, &e), 0.0);
    }

    #[test]
    fn distance_symmetric_and_invariant() {
        let a = alg();
        let mut rng = sampling::rng(6);
        for _ in 0..50 {
            let x = sampling::sample_point(&mut rng, &a);
            let y = sampling::sample_point(&mut rng, &a);
            let p = sampling::sample_point(&mut rng, &a);
            let d = distance(&a, &x, &y);
            assert!((d - distance(&a, &y, &x)).abs() <= 1e-12 * d.max(1.0));
            let lx = multiply(&a, &p, &x);
            let ly = multiply(&a, &p, &y);
            assert!((distance(&a, &lx, &ly) - d).abs() <= 1e-10 * d.max(1.0));
        }
    }

    #[test]
    fn frame_and_laplacian_of_t() {
        let a = alg();
        let f = |x: &Point| x.t();
        let x = pt(&[0.3, -1.0, 0.0, 0.5, 2.0, 0.0, 0.1, -0.4], &[1.0, 0.0, -2.0], 2.5);
        assert!((frame_grad_sq(&a, &f, &x) - 6.25).abs() < 1e-9);
        let expected = -(3.0 + 4.0 - 1.0) * 2.5;
        assert!((laplacian(&a, &f, &x) - expected).abs() < 1e-6);
        let c = |_: &Point| 7.0;
        assert_eq!(frame_grad_sq(&a, &c, &x), 0.0);
        assert_eq!(laplacian(&a, &c, &x), 0.0);
    }

    #[test]
    fn value_and_gradient_laplacians_agree() {
        struct Quad;
        impl ScalarField for Quad {
            fn value(&self, x: &Point) -> f64 {
                x.v.norm_squared() * x.z[0] + x.t * x.t
            }
            fn gradient(&self, x: &Point) -> Option<Gradient> {
                let mut dz = Vector::zeros(x.z.len());
                dz[0] = x.v.norm_squared();
                Some(Gradient { dv: &x.v * (2.0 * x.z[0]), dz, dt: 2.0 * x.t })
            }
        }
        let a = alg();
        let x = pt(&[0.3, -1.0, 0.0, 0.5, 2.0, 0.0, 0.1, -0.4], &[1.0, 0.2, -2.0], 0.7);
        let with_grad = laplacian(&a, &Quad, &x);
        let values_only = |y: &Point| Quad.value(y);
        let without = laplacian(&a, &values_only, &x);
        assert!((with_grad - without).abs() < 1e-5 * with_grad.abs().max(1.0), "{with_grad} vs {without}");
        let g_fd = fd_gradient(&values_only, &x, FdOrder::Second);
        let g = Quad.gradient(&x).unwrap();
        assert!((g_fd.dv - g.dv).amax() < 1e-6);
        assert!((g_fd.dt - g.dt).abs() < 1e-6);
    }
}
