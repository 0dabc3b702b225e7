//! Isoparametric functions on Damek–Ricci spaces.
//!
//! Three families are provided:
//!
//! - the distorted distance `D_{x₀}(x) = [(t + t₀ + ‖(V−V₀)/2‖²)² + ‖Z − Z₀ + ½[V,V₀]‖²] / t`,
//!   defined for any centre `x₀ = (V₀, Z₀, t₀)` including `t₀ ≤ 0`;
//! - its limits `D_⊛(x) = [(2s√t̄ − ⟨V−V̄, v⟩)² + ‖[V−V̄, v]‖²] / t` along
//!   parabola-shaped prolongations;
//! - the subset functions `F(x) = Σ_{i∈I} ⟨V, E_i⟩² / t`.
//!
//! Each satisfies `Δf = a(f)` and `‖∇f‖² = b(f)` with `a` affine and `b`
//! quadratic; [`Coefficients`] records the pair.

use rayon::prelude::*;
use serde::Serialize;

use crate::clifford_algebra::DamekRicciAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::model::{self, inverse, left_translate, multiply, AffinePoint, Gradient, Point, ScalarField};
use crate::numerics;

/// `a(x) = a1·x + a0`, `b(x) = b2·x² + b1·x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coefficients {
    pub a1: f64,
    pub a0: f64,
    pub b2: f64,
    pub b1: f64,
}

impl Coefficients {
    pub fn a(&self, x: f64) -> f64 {
        self.a1 * x + self.a0
    }

    pub fn b(&self, x: f64) -> f64 {
        (self.b2 * x + self.b1) * x
    }

    pub fn b_prime(&self, x: f64) -> f64 {
        2.0 * self.b2 * x + self.b1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum IsoFn {
    DistortedDistance {
        x0: AffinePoint,
    },
    /// Limit function attached to `η = L_base ∘ γ_{(v, 0, s)}`, `s² + ‖v‖² = 1`.
    DStar {
        base: Point,
        v: Vector,
        s: f64,
    },
    /// `Σ_{i∈I} ⟨V, E_i⟩² / t` for the columns `E_i` of `basis`
    /// (the standard basis when `None`).
    SubsetF {
        indices: Vec<usize>,
        basis: Option<Matrix>,
    },
    /// A constant function, with `a = b = 0`.
    Constant(f64),
}

impl IsoFn {
    pub fn distorted_distance(x0: AffinePoint) -> Self {
        IsoFn::DistortedDistance { x0 }
    }

    /// Checks `s² + ‖v‖² = 1` to within `1e-12`.
    pub fn dstar(base: Point, v: Vector, s: f64) -> Result<Self> {
        let err = (s * s + v.norm_squared() - 1.0).abs();
        if err > 1e-12 {
            return Err(Error::InvalidInput(format!("DStar data needs s² + ‖v‖² = 1 (off by {err:e})")));
        }
        Ok(IsoFn::DStar { base, v, s })
    }

    /// Subset function in the standard basis; indices are 0-based.
    pub fn subset(indices: Vec<usize>) -> Self {
        IsoFn::SubsetF { indices, basis: None }
    }

    /// Subset function in an orthonormal basis given by matrix columns.
    pub fn subset_in_basis(indices: Vec<usize>, basis: Matrix) -> Result<Self> {
        let n = basis.nrows();
        if basis.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: basis.ncols() });
        }
        let err = crate::linalg::max_abs(&(basis.transpose() * &basis - Matrix::identity(n, n)));
        if err > 1e-12 {
            return Err(Error::InvalidInput(format!("basis is not orthonormal (residual {err:e})")));
        }
        Ok(IsoFn::SubsetF { indices, basis: Some(basis) })
    }

    pub fn name(&self) -> &'static str {
        match self {
            IsoFn::DistortedDistance { .. } => "distorted_distance",
            IsoFn::DStar { .. } => "dstar",
            IsoFn::SubsetF { .. } => "subset",
            IsoFn::Constant(_) => "constant",
        }
    }

    /// The pair `(a, b)` on an algebra with dimensions `(m, n)`.
    pub fn coefficients(&self, m: usize, n: usize) -> Coefficients {
        let k = m as f64 + n as f64 / 2.0 + 1.0;
        let m1 = m as f64 + 1.0;
        match self {
            IsoFn::DistortedDistance { x0 } => Coefficients { a1: k, a0: -2.0 * m1 * x0.t, b2: 1.0, b1: -4.0 * x0.t },
            IsoFn::DStar { v, .. } => {
                let vv = v.norm_squared();
                Coefficients { a1: k, a0: 2.0 * m1 * vv, b2: 1.0, b1: 4.0 * vv }
            }
            IsoFn::SubsetF { indices, .. } => {
                Coefficients { a1: k, a0: 2.0 * distinct(indices).len() as f64, b2: 1.0, b1: 4.0 }
            }
            IsoFn::Constant(_) => Coefficients { a1: 0.0, a0: 0.0, b2: 0.0, b1: 0.0 },
        }
    }

    /// Data of the function `g` with `f ∘ L_p = t̄·g`, `p = (V̄, Z̄, t̄)`, for
    /// `D_{x₀}`, and with `f ∘ L_p = g` for `D_⊛`. The limit function
    /// `t_b·D_⊛` (with `t_b` the height of its base point) therefore obeys the
    /// same `t̄`-law as `D_{x₀}`. Subset and constant functions are not
    /// covariant under left translations.
    pub fn translated(&self, alg: &DamekRicciAlgebra, p: &Point) -> Result<IsoFn> {
        match self {
            IsoFn::DistortedDistance { x0 } => {
                Ok(IsoFn::DistortedDistance { x0: left_translate(alg, &inverse(p), x0) })
            }
            IsoFn::DStar { base, v, s } => {
                Ok(IsoFn::DStar { base: multiply(alg, &inverse(p), base), v: v.clone(), s: *s })
            }
            _ => Err(Error::NotApplicable("only D_x0 and D_⊛ transform under left translations")),
        }
    }

    pub fn bind<'a>(&self, alg: &'a DamekRicciAlgebra) -> Isoparametric<'a> {
        Isoparametric { alg, f: self.clone() }
    }
}

fn distinct(indices: &[usize]) -> Vec<usize> {
    let mut idx = indices.to_vec();
    idx.sort_unstable();
    idx.dedup();
    idx
}

/// `D_{x₀}(x)`.
pub fn eval_d(alg: &DamekRicciAlgebra, x0: &AffinePoint, x: &Point) -> f64 {
    let (a, w) = d_parts(alg, x0, x);
    (a * a + w.norm_squared()) / x.t()
}

fn d_parts(alg: &DamekRicciAlgebra, x0: &AffinePoint, x: &Point) -> (f64, Vector) {
    let a = x.t() + x0.t + 0.25 * (&x.v - &x0.v).norm_squared();
    let w = &x.z - &x0.z + alg.bracket(&x.v, &x0.v) * 0.5;
    (a, w)
}

fn dstar_parts(alg: &DamekRicciAlgebra, base: &Point, v: &Vector, s: f64, x: &Point) -> (f64, Vector) {
    let u = &x.v - &base.v;
    (2.0 * s * base.t().sqrt() - u.dot(v), alg.bracket(&u, v))
}

/// `D_⊛(x)` for the limit data `(base, v, s)`.
pub fn eval_dstar(alg: &DamekRicciAlgebra, base: &Point, v: &Vector, s: f64, x: &Point) -> f64 {
    let (b, k) = dstar_parts(alg, base, v, s, x);
    (b * b + k.norm_squared()) / x.t()
}

fn subset_components(indices: &[usize], basis: Option<&Matrix>, v: &Vector) -> Vec<(usize, f64)> {
    distinct(indices)
        .into_iter()
        .map(|i| (i, basis.map_or(v[i], |b| b.column(i).dot(v))))
        .collect()
}

/// `F(x) = Σ_{i∈I} ⟨V, E_i⟩² / t`.
pub fn eval_subset_f(indices: &[usize], basis: Option<&Matrix>, x: &Point) -> f64 {
    subset_components(indices, basis, &x.v).iter().map(|(_, c)| c * c).sum::<f64>() / x.t()
}

/// An [`IsoFn`] bound to its algebra, usable as a [`ScalarField`].
#[derive(Debug, Clone)]
pub struct Isoparametric<'a> {
    pub alg: &'a DamekRicciAlgebra,
    pub f: IsoFn,
}

impl Isoparametric<'_> {
    pub fn coefficients(&self) -> Coefficients {
        self.f.coefficients(self.alg.m(), self.alg.n())
    }
}

impl ScalarField for Isoparametric<'_> {
    fn value(&self, x: &Point) -> f64 {
        match &self.f {
            IsoFn::DistortedDistance { x0 } => eval_d(self.alg, x0, x),
            IsoFn::DStar { base, v, s } => eval_dstar(self.alg, base, v, *s, x),
            IsoFn::SubsetF { indices, basis } => eval_subset_f(indices, basis.as_ref(), x),
            IsoFn::Constant(c) => *c,
        }
    }

    fn gradient(&self, x: &Point) -> Option<Gradient> {
        let alg = self.alg;
        let t = x.t();
        let (n, m) = (alg.n(), alg.m());
        Some(match &self.f {
            IsoFn::DistortedDistance { x0 } => {
                let (a, w) = d_parts(alg, x0, x);
                let d = (a * a + w.norm_squared()) / t;
                let dv = ((&x.v - &x0.v) * a - alg.j(&w, &x0.v)) / t;
                Gradient { dv, dz: &w * (2.0 / t), dt: (2.0 * a - d) / t }
            }
            IsoFn::DStar { base, v, s } => {
                let (b, k) = dstar_parts(alg, base, v, *s, x);
                let d = (b * b + k.norm_squared()) / t;
                let dv = (v * (-2.0 * b) - alg.j(&k, v) * 2.0) / t;
                Gradient { dv, dz: Vector::zeros(m), dt: -d / t }
            }
            IsoFn::SubsetF { indices, basis } => {
                let mut dv = Vector::zeros(n);
                let comps = subset_components(indices, basis.as_ref(), &x.v);
                for &(i, c) in &comps {
                    match basis {
                        Some(b) => dv += b.column(i) * (2.0 * c / t),
                        None => dv[i] += 2.0 * c / t,
                    }
                }
                let f = comps.iter().map(|(_, c)| c * c).sum::<f64>() / t;
                Gradient { dv, dz: Vector::zeros(m), dt: -f / t }
            }
            IsoFn::Constant(_) => Gradient { dv: Vector::zeros(n), dz: Vector::zeros(m), dt: 0.0 },
        })
    }
}

/// Maximum and mean of a residual over a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualStats {
    pub max: f64,
    pub mean: f64,
    pub samples: usize,
}

impl ResidualStats {
    pub fn from_values(values: &[f64]) -> Self {
        let max = values.iter().copied().fold(0.0, f64::max);
        let mean = if values.is_empty() { 0.0 } else { values.iter().sum::<f64>() / values.len() as f64 };
        Self { max, mean, samples: values.len() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsoReport {
    pub function: String,
    /// `|Δf − a(f)|` with a finite-difference Laplacian.
    pub laplacian: ResidualStats,
    /// `|‖∇f‖² − b(f)|` with analytic partials, in excess of four units of
    /// rounding of the compared values.
    pub gradient: ResidualStats,
    pub tol_fd: f64,
    pub tol_exact: f64,
}

impl IsoReport {
    pub fn pass(&self) -> bool {
        self.laplacian.max <= self.tol_fd && self.gradient.max <= self.tol_exact
    }
}

/// Units of rounding of `‖∇f‖²` discounted from the gradient residual, so
/// that an absolute tolerance stays meaningful where `b(f)` is large.
pub const ROUNDING_ULPS: f64 = 4.0;

/// Residuals of `Δf = a(f)` and `‖∇f‖² = b(f)` over a sample of points.
pub fn verify_isoparametric(
    alg: &DamekRicciAlgebra,
    f: &IsoFn,
    sample: &[Point],
    tol_fd: f64,
    tol_exact: f64,
) -> IsoReport {
    let field = f.bind(alg);
    let coeffs = field.coefficients();
    let residuals: Vec<(f64, f64)> = sample
        .par_iter()
        .map(|x| {
            let value = field.value(x);
            let lap = model::laplacian(alg, &field, x);
            let grad = model::frame_grad_sq(alg, &field, x);
            let b = coeffs.b(value);
            let floor = ROUNDING_ULPS * f64::EPSILON * grad.abs().max(b.abs());
            ((lap - coeffs.a(value)).abs(), ((grad - b).abs() - floor).max(0.0))
        })
        .collect();
    let lap: Vec<f64> = residuals.iter().map(|r| r.0).collect();
    let grad: Vec<f64> = residuals.iter().map(|r| r.1).collect();
    IsoReport {
        function: f.name().to_string(),
        laplacian: ResidualStats::from_values(&lap),
        gradient: ResidualStats::from_values(&grad),
        tol_fd,
        tol_exact,
    }
}

/// The coefficient `β` with `b(x) = x² + βx`, when the function has
/// minimum value 0 and regular levels above it.
fn tube_scale(f: &IsoFn, m: usize, n: usize) -> Result<f64> {
    match f {
        IsoFn::DistortedDistance { x0 } if x0.t >= 0.0 => {
            Err(Error::NoMinimum("a centre with t₀ ≥ 0 has no focal variety of tube type"))
        }
        IsoFn::DStar { v, .. } if v.norm() == 0.0 => {
            Err(Error::NoMinimum("D_⊛ with v = 0 has horospheres as level sets"))
        }
        IsoFn::SubsetF { indices, .. } if indices.is_empty() => Err(Error::NoMinimum("empty index set")),
        IsoFn::Constant(_) => Err(Error::NoMinimum("constant function")),
        _ => Ok(f.coefficients(m, n).b1),
    }
}

/// Radius of the level set `{f = c}` as a tube about the focal variety
/// `{f = 0}`: `r = 2 asinh(√(c/β))` where `b(x) = x² + βx`.
pub fn tube_radius(f: &IsoFn, m: usize, n: usize, c: f64) -> Result<f64> {
    let beta = tube_scale(f, m, n)?;
    if c.is_nan() || c < 0.0 {
        return Err(Error::InvalidInput(format!("level {c} is below the minimum 0")));
    }
    Ok(2.0 * (c / beta).sqrt().asinh())
}

/// `∫_0^c dx / √b(x)` by adaptive quadrature after the substitution
/// `x = u²`, which removes the endpoint singularity.
pub fn tube_radius_quadrature(f: &IsoFn, m: usize, n: usize, c: f64) -> Result<f64> {
    tube_scale(f, m, n)?;
    if c.is_nan() || c < 0.0 {
        return Err(Error::InvalidInput(format!("level {c} is below the minimum 0")));
    }
    let coeffs = f.coefficients(m, n);
    let integrand = |u: f64| {
        let x = u * u;
        2.0 * u / coeffs.b(x).sqrt()
    };
    Ok(numerics::integrate(integrand, 0.0, c.sqrt(), 1e-13))
}

/// Radius of the geodesic sphere `{D_{x₀} = c}` about `x₀` with `t₀ > 0`,
/// from `c = 4 t₀ cosh²(r/2)`.
pub fn sphere_radius(t0: f64, c: f64) -> Result<f64> {
    if t0 <= 0.0 {
        return Err(Error::NotApplicable("sphere radius needs t₀ > 0"));
    }
    if c < 4.0 * t0 {
        return Err(Error::InvalidInput(format!("level {c} is below the minimum {}", 4.0 * t0)));
    }
    Ok(2.0 * (c / (4.0 * t0)).sqrt().acosh())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceKind {
    Sphere,
    Horosphere,
    Tube,
}

impl SurfaceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SurfaceKind::Sphere => "sphere",
            SurfaceKind::Horosphere => "horosphere",
            SurfaceKind::Tube => "tube",
        }
    }
}

/// Trace of the shape operator with respect to the gradient normal.
pub fn mean_curvature(kind: SurfaceKind, r: f64, m: usize, n: usize) -> f64 {
    let (m, n) = (m as f64, n as f64);
    let half = 0.5 * r;
    match kind {
        SurfaceKind::Sphere => -(m + n) / 2.0 / half.tanh() - m / 2.0 * half.tanh(),
        SurfaceKind::Horosphere => -(m + n / 2.0),
        SurfaceKind::Tube => -(m + n) / 2.0 * half.tanh() - m / 2.0 / half.tanh(),
    }
}

/// `(b′(c) − 2a(c)) / (2√b(c))` for the level `{f = c}`.
pub fn mean_curvature_from_ab(f: &IsoFn, m: usize, n: usize, c: f64) -> f64 {
    let k = f.coefficients(m, n);
    (k.b_prime(c) - 2.0 * k.a(c)) / (2.0 * k.b(c).sqrt())
}

/// Volume density `ω(r) = cosh^m(r/2) (sinh(r/2)/(r/2))^{m+n}`.
pub fn volume_density(r: f64, m: usize, n: usize) -> f64 {
    let half = 0.5 * r;
    let ratio = if half == 0.0 { 1.0 } else { half.sinh() / half };
    half.cosh().powi(m as i32) * ratio.powi((m + n) as i32)
}

/// Sphere mean curvature `−∂_r ln(r^{m+n} ω(r))`, summed term by term.
pub fn sphere_h_from_density(r: f64, m: usize, n: usize) -> f64 {
    let (m, n) = (m as f64, n as f64);
    let half = 0.5 * r;
    let from_power = (m + n) / r;
    let from_cosh = m * 0.5 * half.tanh();
    let from_ratio = (m + n) * (0.5 / half.tanh() - 1.0 / r);
    -(from_power + from_ratio + from_cosh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford_algebra::{build_algebra, CliffordSpec, IrrepKind};
    use crate::model::distance;
    use crate::sampling;

    fn alg() -> DamekRicciAlgebra {
        build_algebra(&CliffordSpec::tagged(3, &[(IrrepKind::D1, 1)])).unwrap()
    }

    fn affine(a: &DamekRicciAlgebra, rng: &mut sampling::Rng, t0: f64) -> AffinePoint {
        AffinePoint::new(sampling::gaussian_vector(rng, a.n()), sampling::gaussian_vector(rng, a.m()), t0)
    }

    #[test]
    fn d_at_centre_and_distance_relation() {
        let a = alg();
        let mut rng = sampling::rng(21);
        let x0 = sampling::sample_point(&mut rng, &a);
        assert!((eval_d(&a, &x0.to_affine(), &x0) - 4.0 * x0.t()).abs() < 1e-12 * x0.t());
        for _ in 0..20 {
            let x = sampling::sample_point(&mut rng, &a);
            let d = distance(&a, &x, &x0);
            let lhs = 4.0 * (0.5 * d).cosh().powi(2);
            let rhs = eval_d(&a, &x0.to_affine(), &x) / x0.t();
            assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1.0));
        }
    }

    #[test]
    fn analytic_partials_match_fd() {
        let a = alg();
        let mut rng = sampling::rng(22);
        let x0 = affine(&a, &mut rng, -1.5);
        let v = sampling::unit_vector(&mut rng, 4) * 0.8;
        let base = sampling::sample_point(&mut rng, &a);
        let fns = [
            IsoFn::distorted_distance(x0),
            IsoFn::dstar(base, v, 0.6).unwrap(),
            IsoFn::subset(vec![0, 2]),
        ];
        for f in &fns {
            let field = f.bind(&a);
            for _ in 0..10 {
                let x = sampling::sample_point(&mut rng, &a);
                let g = field.gradient(&x).unwrap();
                let values = |y: &Point| field.value(y);
                let fd = model::fd_gradient(&values, &x, model::FdOrder::Fourth);
                let scale = g.dv.amax().max(g.dz.amax()).max(g.dt.abs()).max(1.0);
                let err = (&g.dv - &fd.dv).amax().max((&g.dz - &fd.dz).amax()).max((g.dt - fd.dt).abs());
                assert!(err <= 1e-6 * scale, "{}: {err:e}", f.name());
            }
        }
    }

    #[test]
    fn identities_hold() {
        let a = alg();
        let mut rng = sampling::rng(23);
        let sample: Vec<Point> = (0..10).map(|_| sampling::sample_point(&mut rng, &a)).collect();
        let v = sampling::unit_vector(&mut rng, 4) * 0.8;
        let base = sampling::sample_point(&mut rng, &a);
        let fns = [
            IsoFn::distorted_distance(affine(&a, &mut rng, -1.0)),
            IsoFn::distorted_distance(affine(&a, &mut rng, 1.0)),
            IsoFn::dstar(base, v, -0.6).unwrap(),
            IsoFn::subset(vec![1, 3]),
            IsoFn::Constant(3.0),
        ];
        for f in &fns {
            let report = verify_isoparametric(&a, f, &sample, 1e-5, 1e-9);
            assert!(report.pass(), "{report:?}");
        }
    }

    #[test]
    fn wrong_coefficients_fail() {
        let a = alg();
        let mut rng = sampling::rng(24);
        let sample: Vec<Point> = (0..5).map(|_| sampling::sample_point(&mut rng, &a)).collect();
        // D_⊛ with ‖v‖ < 1 against the unit-‖v‖ pair.
        let v = sampling::unit_vector(&mut rng, 4) * 0.8;
        let base = sampling::sample_point(&mut rng, &a);
        let f = IsoFn::dstar(base, v, 0.6).unwrap();
        let field = f.bind(&a);
        let unit = Coefficients { a1: 3.0 + 2.0 + 1.0, a0: 8.0, b2: 1.0, b1: 4.0 };
        let worst = sample
            .iter()
            .map(|x| (model::frame_grad_sq(&a, &field, x) - unit.b(field.value(x))).abs())
            .fold(0.0, f64::max);
        assert!(worst > 1e-3);
    }

    #[test]
    fn special_values() {
        let a = alg();
        let x = Point::new(Vector::from_vec(vec![1.0, 2.0, 0.0, -1.0]), Vector::zeros(3), 2.0).unwrap();
        assert_eq!(eval_subset_f(&[], None, &x), 0.0);
        assert!((eval_subset_f(&[0, 1, 2, 3], None, &x) * 2.0 - 6.0).abs() < 1e-15);
        let base = Point::identity(4, 3);
        assert!((eval_dstar(&a, &base, &Vector::zeros(4), 1.0, &x) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn tube_radius_closed_form_and_quadrature() {
        let x0 = AffinePoint::new(Vector::zeros(4), Vector::zeros(3), -1.0);
        let f = IsoFn::distorted_distance(x0);
        for r in [0.1f64, 1.0, 3.0] {
            let c = 4.0 * (0.5 * r).sinh().powi(2);
            assert!((tube_radius(&f, 3, 4, c).unwrap() - r).abs() < 1e-13);
            assert!((tube_radius_quadrature(&f, 3, 4, c).unwrap() - r).abs() < 1e-10);
        }
        assert_eq!(tube_radius(&f, 3, 4, 0.0).unwrap(), 0.0);
        let sphere = IsoFn::distorted_distance(AffinePoint::new(Vector::zeros(4), Vector::zeros(3), 1.0));
        assert!(matches!(tube_radius(&sphere, 3, 4, 5.0), Err(Error::NoMinimum(_))));
        assert!((sphere_radius(1.0, 4.0 * 1f64.cosh().powi(2)).unwrap() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn curvature_closed_forms() {
        let (m, n) = (3, 4);
        let tube = IsoFn::distorted_distance(AffinePoint::new(Vector::zeros(n), Vector::zeros(m), -1.0));
        let sphere = IsoFn::distorted_distance(AffinePoint::new(Vector::zeros(n), Vector::zeros(m), 1.0));
        for r in [0.5f64, 1.0, 2.0] {
            let ct = 4.0 * (0.5 * r).sinh().powi(2);
            let cs = 4.0 * (0.5 * r).cosh().powi(2);
            assert!((mean_curvature_from_ab(&tube, m, n, ct) - mean_curvature(SurfaceKind::Tube, r, m, n)).abs() < 1e-12);
            assert!(
                (mean_curvature_from_ab(&sphere, m, n, cs) - mean_curvature(SurfaceKind::Sphere, r, m, n)).abs() < 1e-12
            );
            assert!((sphere_h_from_density(r, m, n) - mean_curvature(SurfaceKind::Sphere, r, m, n)).abs() < 1e-12);
        }
        assert_eq!(mean_curvature(SurfaceKind::Horosphere, 1.0, m, n), -5.0);
        assert!((sphere_h_from_density(60.0, m, n) + 5.0).abs() < 1e-9);
        assert!((volume_density(1e-9, m, n) - 1.0).abs() < 1e-15);
        assert_eq!(volume_density(0.0, m, n), 1.0);
    }

    #[test]
    fn lower_bound() {
        let a = alg();
        let mut rng = sampling::rng(25);
        for t0 in [-2.0, -1.0, 0.0, 1.0] {
            let x0 = affine(&a, &mut rng, t0);
            for _ in 0..20 {
                let x = sampling::sample_point(&mut rng, &a);
                assert!(eval_d(&a, &x0, &x) >= x.t() + 2.0 * t0);
            }
        }
    }
}
