//! Focal varieties of the distorted distance functions and of their limits.
//!
//! `F_{x₀} = {‖V−V₀‖² = −4(t+t₀), Z = Z₀ − ½[V,V₀]}` for a centre with
//! `t₀ < 0`, and `F_⊛ = {[V−V̄, v] = 0, ⟨V−V̄, v⟩ = 2s√t̄}`.

use rand::SeedableRng;
use rayon::prelude::*;

use crate::clifford_algebra::{j2_satisfied, DamekRicciAlgebra};
use crate::error::{Error, Result};
use crate::geodesic::{gamma_eval, point_at_infinity, ProjectivePoint, ProlongedGeodesic};
use crate::isoparametric::IsoFn;
use crate::linalg::{self, Matrix, Vector, RANK_TOL};
use crate::model::{distance, left_translate, AffinePoint, Point, TangentVec};
use crate::numerics::{self, SimplexOptions};
use crate::sampling::{self, Rng};

/// Membership tolerance for points required to lie on a focal variety.
pub const MEMBERSHIP_TOL: f64 = 1e-10;
/// Default flag tolerance for the J²-condition at focal points.
pub const J2_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub enum FocalVariety {
    Fx0 { x0: AffinePoint },
    FStar { v: Vector, vbar: Vector, s: f64, tbar: f64 },
}

impl FocalVariety {
    pub fn fx0(x0: AffinePoint) -> Result<Self> {
        if !(x0.t < 0.0) {
            return Err(Error::InvalidInput(format!("F_x0 needs t₀ < 0, got {}", x0.t)));
        }
        Ok(FocalVariety::Fx0 { x0 })
    }

    /// The focal variety through `e` with centre `(V₀, 0, −1 − ¼‖V₀‖²)`.
    pub fn through_identity(v0: Vector, m: usize) -> Self {
        let t0 = -1.0 - 0.25 * v0.norm_squared();
        FocalVariety::Fx0 { x0: AffinePoint::new(v0, Vector::zeros(m), t0) }
    }

    pub fn fstar(v: Vector, vbar: Vector, s: f64, tbar: f64) -> Result<Self> {
        if v.norm() == 0.0 {
            return Err(Error::InvalidInput("F_⊛ needs v ≠ 0".into()));
        }
        if !(tbar > 0.0) {
            return Err(Error::NotInModel { t: tbar });
        }
        Ok(FocalVariety::FStar { v, vbar, s, tbar })
    }

    /// The focal variety `{f = 0}` of a distorted distance or limit function.
    pub fn of(f: &IsoFn) -> Result<Self> {
        match f {
            IsoFn::DistortedDistance { x0 } => Self::fx0(x0.clone()),
            IsoFn::DStar { base, v, s } => Self::fstar(v.clone(), base.v.clone(), *s, base.t()),
            _ => Err(Error::NotApplicable("only D_x0 and D_⊛ have focal varieties here")),
        }
    }

    /// Image under the left translation `L_p`.
    pub fn translated(&self, alg: &DamekRicciAlgebra, p: &Point) -> Self {
        match self {
            FocalVariety::Fx0 { x0 } => FocalVariety::Fx0 { x0: left_translate(alg, p, x0) },
            FocalVariety::FStar { v, vbar, s, tbar } => FocalVariety::FStar {
                v: v.clone(),
                vbar: &p.v + vbar * p.t().sqrt(),
                s: *s,
                tbar: p.t() * tbar,
            },
        }
    }

    /// Largest residual of the defining equations at `x`.
    pub fn membership_residual(&self, alg: &DamekRicciAlgebra, x: &AffinePoint) -> f64 {
        match self {
            FocalVariety::Fx0 { x0 } => {
                let paraboloid = (&x.v - &x0.v).norm_squared() + 4.0 * (x.t + x0.t);
                let centre = (&x.z - &x0.z + alg.bracket(&x.v, &x0.v) * 0.5).norm();
                paraboloid.abs().max(centre)
            }
            FocalVariety::FStar { v, vbar, s, tbar } => {
                let u = &x.v - vbar;
                let linear = u.dot(v) - 2.0 * s * tbar.sqrt();
                alg.bracket(&u, v).norm().max(linear.abs())
            }
        }
    }

    /// Scalar whose sign change locates crossings along a curve: the
    /// paraboloid equation for `F_{x₀}`, the linear equation for `F_⊛`.
    fn crossing_function(&self, x: &AffinePoint) -> f64 {
        match self {
            FocalVariety::Fx0 { x0 } => (&x.v - &x0.v).norm_squared() + 4.0 * (x.t + x0.t),
            FocalVariety::FStar { v, vbar, s, tbar } => (&x.v - vbar).dot(v) - 2.0 * s * tbar.sqrt(),
        }
    }
}

fn fx0_centre(f: &FocalVariety) -> Result<&AffinePoint> {
    match f {
        FocalVariety::Fx0 { x0 } => Ok(x0),
        FocalVariety::FStar { .. } => Err(Error::NotApplicable("operation defined for F_x0 only")),
    }
}

/// `Υ(V̄) = (V̄, Z₀ − ½[V̄, V₀], −t₀ − ¼‖V̄ − V₀‖²)` for `V̄` in the open ball
/// of radius `2√(−t₀)` about `V₀`.
pub fn upsilon(alg: &DamekRicciAlgebra, f: &FocalVariety, vbar: &Vector) -> Result<Point> {
    let x0 = fx0_centre(f)?;
    let radius = 2.0 * (-x0.t).sqrt();
    let dist = (vbar - &x0.v).norm();
    if dist >= radius {
        return Err(Error::OutsideBall { distance: dist, radius });
    }
    let z = &x0.z - alg.bracket(vbar, &x0.v) * 0.5;
    let t = -x0.t - 0.25 * dist * dist;
    Point::new(vbar.clone(), z, t).map_err(|_| Error::OutsideBall { distance: dist, radius })
}

/// Basis of `T_e F_{x₀}` when `F_{x₀}` passes through `e`: the vectors
/// `(v′, −½[v′, V₀], ½⟨v′, V₀⟩)` for `v′` in the standard basis.
pub fn tangent_basis_at_identity(alg: &DamekRicciAlgebra, v0: &Vector) -> Vec<TangentVec> {
    (0..alg.n())
        .map(|i| {
            let mut e = Vector::zeros(alg.n());
            e[i] = 1.0;
            fx0_tangent(alg, v0, e)
        })
        .collect()
}

fn fx0_tangent(alg: &DamekRicciAlgebra, v0: &Vector, w: Vector) -> TangentVec {
    let z = alg.bracket(&w, v0) * -0.5;
    let s = 0.5 * w.dot(v0);
    TangentVec::new(w, z, s)
}

/// Unit velocity `ξ = (−½(sV₀ + J_z V₀), z, s)` at `e` orthogonal to a focal
/// variety `F_{x₀}` through `e`; the free parameters must satisfy
/// `s² + ‖z‖² = 1 / (1 + ¼‖V₀‖²)`.
pub fn orthogonal_velocity(alg: &DamekRicciAlgebra, f: &FocalVariety, z: &Vector, s: f64) -> Result<TangentVec> {
    let x0 = fx0_centre(f)?;
    let e = Point::identity(alg.n(), alg.m());
    let residual = f.membership_residual(alg, &e.to_affine());
    if residual > MEMBERSHIP_TOL {
        return Err(Error::NotOnFocalVariety { residual });
    }
    let v0 = &x0.v;
    let target = 1.0 / (1.0 + 0.25 * v0.norm_squared());
    let err = (s * s + z.norm_squared() - target).abs();
    if err > 1e-12 {
        return Err(Error::InvalidFreeParameters { residual: err });
    }
    let v = (v0 * s + alg.j(z, v0)) * -0.5;
    Ok(TangentVec::new(v, z.clone(), s))
}

/// Random admissible free parameters `(z, s)` for [`orthogonal_velocity`],
/// with `|s|` bounded below by a quarter of its maximum.
pub fn sample_free_parameters(rng: &mut Rng, alg: &DamekRicciAlgebra, v0: &Vector) -> (Vector, f64) {
    let radius = (1.0 / (1.0 + 0.25 * v0.norm_squared())).sqrt();
    loop {
        let w = sampling::unit_vector(rng, alg.m() + 1);
        if w[alg.m()].abs() >= 0.25 {
            let z = w.rows(0, alg.m()).into_owned() * radius;
            let s = w[alg.m()] * radius;
            // Re-normalize s so the constraint holds to rounding.
            let s = s.signum() * (radius * radius - z.norm_squared()).max(0.0).sqrt();
            return (z, s);
        }
    }
}

/// `|γ_ξ(∞) − x₀|` in the max norm, or `∞` if `γ_ξ(∞) = ⊛`.
pub fn infinity_mismatch(alg: &DamekRicciAlgebra, xi: &TangentVec, x0: &AffinePoint) -> f64 {
    match point_at_infinity(alg, xi) {
        ProjectivePoint::Affine(p) => p.max_diff(x0),
        ProjectivePoint::Star => f64::INFINITY,
    }
}

/// Parameters `θ ∈ (−1, 1)` where `η` crosses the focal variety.
///
/// Sign changes of the crossing function are located on a uniform grid
/// with `grid` points, refined by bisection, and kept only if the full
/// membership residual is below `1e-8` (relative to the scale of the point).
pub fn focal_crossings(
    alg: &DamekRicciAlgebra,
    f: &FocalVariety,
    g: &ProlongedGeodesic,
    grid: usize,
) -> Result<Vec<f64>> {
    let eval = |th: f64| g.eval(alg, th);
    let h = |th: f64| eval(th).map(|x| f.crossing_function(&x));
    let lo = -1.0 + 1e-6;
    let hi = 1.0 - 1e-6;
    let thetas: Vec<f64> = (0..grid).map(|k| lo + (hi - lo) * (k as f64 + 0.5) / grid as f64).collect();
    let values: Vec<f64> = thetas.iter().map(|&th| h(th)).collect::<Result<_>>()?;
    let mut roots = Vec::new();
    for k in 0..thetas.len().saturating_sub(1) {
        if values[k] == 0.0 || (values[k] < 0.0) != (values[k + 1] < 0.0) {
            let root = numerics::bisect(|th| h(th).unwrap_or(f64::NAN), thetas[k], thetas[k + 1], 1e-15);
            let x = eval(root)?;
            let scale = 1.0 + x.v.amax().max(x.z.amax()).max(x.t.abs());
            if f.membership_residual(alg, &x) <= 1e-8 * scale * scale {
                roots.push(root);
            }
        }
    }
    Ok(roots)
}

/// Options for [`distance_to_focal`].
#[derive(Debug, Clone, Copy)]
pub struct FocalDistanceOptions {
    pub starts: usize,
    pub tol: f64,
    /// Allowed spread between the values found from different starts.
    pub agreement: f64,
    pub seed: u64,
}

impl Default for FocalDistanceOptions {
    fn default() -> Self {
        Self { starts: 8, tol: 1e-9, agreement: 1e-4, seed: 0x5eed }
    }
}

/// Riemannian distance from `x` to `F_{x₀}`, minimized over the
/// parameterization `Υ` by multi-start simplex search.
///
/// The ball is reached through `V̄ = V₀ + ρ(1 − 1e-6) u / √(1 + ‖u‖²)` with
/// `u ∈ ℝⁿ` unconstrained.
pub fn distance_to_focal(alg: &DamekRicciAlgebra, f: &FocalVariety, x: &Point) -> Result<f64> {
    distance_to_focal_with(alg, f, x, FocalDistanceOptions::default())
}

pub fn distance_to_focal_with(
    alg: &DamekRicciAlgebra,
    f: &FocalVariety,
    x: &Point,
    opts: FocalDistanceOptions,
) -> Result<f64> {
    let x0 = fx0_centre(f)?;
    let n = alg.n();
    let rho = 2.0 * (-x0.t).sqrt() * (1.0 - 1e-6);
    let to_ball = |u: &[f64]| {
        let u = Vector::from_column_slice(u);
        &x0.v + &u * (rho / (1.0 + u.norm_squared()).sqrt())
    };
    let objective = |u: &[f64]| match upsilon(alg, f, &to_ball(u)) {
        Ok(p) => distance(alg, x, &p),
        Err(_) => f64::INFINITY,
    };

    // Deterministic starts: the preimage of the point's own V (if inside),
    // the vertex, and random directions.
    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(opts.starts);
    let w = (&x.v - &x0.v) / rho;
    let wn = w.norm();
    if wn < 1.0 {
        let u = &w / (1.0 - wn * wn).sqrt();
        starts.push(u.iter().copied().collect());
    }
    starts.push(vec![0.0; n]);
    let mut rng = Rng::seed_from_u64(opts.seed);
    while starts.len() < opts.starts.max(1) {
        starts.push(sampling::gaussian_vector(&mut rng, n).iter().copied().collect());
    }

    let simplex = SimplexOptions { tol: opts.tol, ..SimplexOptions::default() };
    let values: Vec<f64> = starts
        .par_iter()
        .map(|start| {
            let mut best = numerics::nelder_mead(objective, start, simplex);
            // Restart from the result until it stops improving.
            for _ in 0..10 {
                let next = numerics::nelder_mead(objective, &best.x, SimplexOptions { initial_step: 0.05, ..simplex });
                let improved = best.value - next.value > opts.tol * 0.1;
                if next.value < best.value {
                    best = next;
                }
                if !improved {
                    break;
                }
            }
            best.value
        })
        .collect();
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo > opts.agreement {
        return Err(Error::ConvergenceFailure { spread: hi - lo });
    }
    Ok(lo)
}

/// Outcome of [`totally_geodesic_at`].
#[derive(Debug, Clone, PartialEq)]
pub struct TotalGeodesy {
    /// Prediction from the J²-condition.
    pub flag: bool,
    /// Residual of the J²-test behind the flag.
    pub j2_residual: f64,
    /// Largest membership residual along sampled geodesics tangent to the
    /// focal variety.
    pub escape_residual: f64,
}

/// Number of tangent directions and of parameters per direction.
const ESCAPE_DIRECTIONS: usize = 10;
const ESCAPE_THETAS: usize = 10;

/// Whether geodesics leaving `p ∈ F` tangentially stay on `F`.
///
/// For `F_{x₀}` the prediction is the J²-condition for `V̄ − V₀` at
/// `p = Υ(V̄)`; for `F_⊛` it is the J²-condition for `v`, at any point.
/// The escape residual samples ten tangent directions and ten parameters
/// `θ ∈ [−0.9, 0.9]` along each closed-form geodesic.
pub fn totally_geodesic_at(alg: &DamekRicciAlgebra, f: &FocalVariety, p: &Point, seed: u64) -> Result<TotalGeodesy> {
    let residual = f.membership_residual(alg, &p.to_affine());
    let scale = 1.0 + p.v.amax().max(p.z.amax()).max(p.t());
    if residual > MEMBERSHIP_TOL * scale * scale {
        return Err(Error::NotOnFocalVariety { residual });
    }
    let mut rng = Rng::seed_from_u64(seed);
    let (flag, j2_residual, directions) = match f {
        FocalVariety::Fx0 { x0 } => {
            let (flag, res) = j2_satisfied(alg, &(&p.v - &x0.v), J2_TOL);
            let v0 = (&x0.v - &p.v) / p.t().sqrt();
            let dirs: Vec<TangentVec> = (0..ESCAPE_DIRECTIONS)
                .map(|_| fx0_tangent(alg, &v0, sampling::gaussian_vector(&mut rng, alg.n())).normalized())
                .collect();
            (flag, res, dirs)
        }
        FocalVariety::FStar { v, .. } => {
            let (flag, res) = j2_satisfied(alg, v, J2_TOL);
            let span = alg.clifford_span_basis(v);
            let dirs: Vec<TangentVec> = (0..ESCAPE_DIRECTIONS)
                .map(|_| {
                    let w = linalg::reject(&span, &sampling::gaussian_vector(&mut rng, alg.n()));
                    let z = sampling::gaussian_vector(&mut rng, alg.m());
                    let s = sampling::gaussian_vector(&mut rng, 1)[0];
                    TangentVec::new(w, z, s).normalized()
                })
                .collect();
            (flag, res, dirs)
        }
    };
    let thetas: Vec<f64> = (0..ESCAPE_THETAS).map(|k| -0.9 + 1.8 * k as f64 / (ESCAPE_THETAS - 1) as f64).collect();
    let mut escape = 0.0_f64;
    for xi in &directions {
        for &th in &thetas {
            let y = left_translate(alg, p, &gamma_eval(alg, xi, th)?);
            escape = escape.max(f.membership_residual(alg, &y));
        }
    }
    Ok(TotalGeodesy { flag, j2_residual, escape_residual: escape })
}

/// A point of `F_⊛`: `(V̄ + (2s√t̄/‖v‖²) v + w, z, t)` for `w ⊥ ℝv ⊕ J_𝔷 v`.
pub fn fstar_point(alg: &DamekRicciAlgebra, f: &FocalVariety, w: &Vector, z: Vector, t: f64) -> Result<Point> {
    let FocalVariety::FStar { v, vbar, s, tbar } = f else {
        return Err(Error::NotApplicable("operation defined for F_⊛ only"));
    };
    let span = alg.clifford_span_basis(v);
    let w = linalg::reject(&span, w);
    let anchor = vbar + v * (2.0 * s * tbar.sqrt() / v.norm_squared());
    Point::new(anchor + w, z, t)
}

/// Dimension of `T_e F(v) = (J_𝔷 v ⊕ ℝv)^⊥ ⊂ 𝔰` from the constraint matrix
/// of `[V, v] = 0`, `⟨V, v⟩ = 0`.
pub fn fstar_tangent_dim(alg: &DamekRicciAlgebra, v: &Vector) -> usize {
    let (n, m) = (alg.n(), alg.m());
    let mut c = Matrix::zeros(m + 1, n + m + 1);
    let orbit = alg.j_orbit_matrix(v).transpose();
    c.view_mut((0, 0), (m, n)).copy_from(&orbit);
    c.view_mut((m, 0), (1, n)).copy_from(&v.transpose());
    linalg::null_space(&(c / v.norm()), RANK_TOL).ncols()
}

/// Kähler angles of `u`: the principal angles between `J_𝔷 u` and
/// `ℝv ⊕ J_𝔷 v`. Requires `u` within `1e-10` (relative) of that subspace.
pub fn kahler_angles(alg: &DamekRicciAlgebra, v: &Vector, u: &Vector) -> Result<Vec<f64>> {
    if v.norm() == 0.0 || u.norm() == 0.0 {
        return Err(Error::InvalidInput("Kähler angles need v ≠ 0 and u ≠ 0".into()));
    }
    let span = alg.clifford_span_basis(v);
    let off = linalg::reject(&span, u).norm() / u.norm();
    if off > 1e-10 {
        return Err(Error::SubspaceViolation { distance: off });
    }
    let ju = alg.j_span_basis(u);
    Ok(linalg::principal_angles(&ju, &span))
}

/// Largest Kähler angle over the unit vectors `u = cos φ · v̂ + sin φ · w`
/// of a grid in `ℝv ⊕ J_𝔷 v`. Zero exactly when all angles are constant.
pub fn kahler_angle_spread(alg: &DamekRicciAlgebra, v: &Vector, grid: usize, seed: u64) -> Result<f64> {
    let span = alg.clifford_span_basis(v);
    let mut rng = Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    for _ in 0..grid {
        let coeffs = sampling::unit_vector(&mut rng, span.ncols());
        let u = &span * coeffs;
        let angles = kahler_angles(alg, v, &u)?;
        worst = worst.max(angles.iter().copied().fold(0.0, f64::max));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford_algebra::{build_algebra, CliffordSpec, IrrepKind};
    use crate::geodesic::{cross_ratio, ExtReal};
    use crate::isoparametric::{eval_d, tube_radius};

    fn mixed() -> DamekRicciAlgebra {
        build_algebra(&CliffordSpec::tagged(3, &[(IrrepKind::D1, 1), (IrrepKind::D2, 1)])).unwrap()
    }

    #[test]
    fn upsilon_lands_on_variety() {
        let a = mixed();
        let mut rng = sampling::rng(31);
        let x0 = AffinePoint::new(sampling::gaussian_vector(&mut rng, 8), sampling::gaussian_vector(&mut rng, 3), -2.0);
        let f = FocalVariety::fx0(x0.clone()).unwrap();
        let vertex = upsilon(&a, &f, &x0.v).unwrap();
        assert_eq!(vertex.t(), 2.0);
        assert!(f.membership_residual(&a, &vertex.to_affine()) < 1e-12);
        for _ in 0..20 {
            let dir = sampling::unit_vector(&mut rng, 8);
            let r = sampling::uniform(&mut rng, 0.0, 2.0 * 2f64.sqrt());
            let p = upsilon(&a, &f, &(&x0.v + dir * r)).unwrap();
            assert!(p.t() > 0.0);
            assert!(f.membership_residual(&a, &p.to_affine()) < 1e-12);
        }
        let outside = &x0.v + sampling::unit_vector(&mut rng, 8) * (2.0 * 2f64.sqrt());
        assert!(matches!(upsilon(&a, &f, &outside), Err(Error::OutsideBall { .. })));
    }

    #[test]
    fn orthogonal_velocities_point_at_centre() {
        let a = mixed();
        let mut rng = sampling::rng(32);
        let v0 = sampling::gaussian_vector(&mut rng, 8);
        let f = FocalVariety::through_identity(v0.clone(), 3);
        let FocalVariety::Fx0 { x0 } = &f else { unreachable!() };
        for _ in 0..10 {
            let (z, s) = sample_free_parameters(&mut rng, &a, &v0);
            let xi = orthogonal_velocity(&a, &f, &z, s).unwrap();
            assert!((xi.norm() - 1.0).abs() < 1e-12);
            assert!(infinity_mismatch(&a, &xi, x0) < 1e-10);
            for w in tangent_basis_at_identity(&a, &v0) {
                assert!(xi.dot(&w).abs() < 1e-12);
            }
            let g = ProlongedGeodesic::new(Point::identity(8, 3), xi).unwrap();
            assert_eq!(focal_crossings(&a, &f, &g, 1000).unwrap().len(), 1);
        }
        assert!(matches!(
            orthogonal_velocity(&a, &f, &Vector::zeros(3), 1.0),
            Err(Error::InvalidFreeParameters { .. })
        ));
        let s = (-1.0 / x0.t).sqrt();
        let xi = orthogonal_velocity(&a, &f, &Vector::zeros(3), s).unwrap();
        assert!(infinity_mismatch(&a, &xi, x0) < 1e-10);
        // x₀ = γ(∞), e = γ(0), boundary at ±1.
        let cr = cross_ratio(ExtReal::Infinity, ExtReal::Finite(0.0), ExtReal::Finite(1.0), ExtReal::Finite(-1.0));
        assert_eq!(cr.unwrap(), -1.0);
    }

    #[test]
    fn distance_matches_tube_radius() {
        let a = build_algebra(&CliffordSpec::tagged(1, &[(IrrepKind::D, 1)])).unwrap();
        let mut rng = sampling::rng(33);
        let x0 = AffinePoint::new(sampling::gaussian_vector(&mut rng, 2), sampling::gaussian_vector(&mut rng, 1), -1.0);
        let f = FocalVariety::fx0(x0.clone()).unwrap();
        let iso = IsoFn::distorted_distance(x0);
        for _ in 0..3 {
            let x = sampling::sample_point_scaled(&mut rng, &a, 0.3, 3.0, 1.0);
            let c = eval_d(&a, match &iso { IsoFn::DistortedDistance { x0 } => x0, _ => unreachable!() }, &x);
            let r = tube_radius(&iso, 1, 2, c).unwrap();
            let d = distance_to_focal(&a, &f, &x).unwrap();
            assert!((d - r).abs() < 1e-6, "{d} vs {r}");
        }
    }

    #[test]
    fn total_geodesy_mixed_module() {
        let a = mixed();
        let mut rng = sampling::rng(34);
        let x0 = AffinePoint::new(sampling::gaussian_vector(&mut rng, 8) * 0.3, Vector::zeros(3), -2.0);
        let f = FocalVariety::fx0(x0.clone()).unwrap();
        let vertex = upsilon(&a, &f, &x0.v).unwrap();
        let at_vertex = totally_geodesic_at(&a, &f, &vertex, 1).unwrap();
        assert!(at_vertex.flag && at_vertex.escape_residual < 1e-8, "{at_vertex:?}");

        let mut d = Vector::zeros(8);
        d[0] = 0.8;
        d[5] = 0.6;
        let p = upsilon(&a, &f, &(&x0.v + d)).unwrap();
        let mixed_point = totally_geodesic_at(&a, &f, &p, 1).unwrap();
        assert!(!mixed_point.flag && mixed_point.escape_residual > 1e-3, "{mixed_point:?}");

        let mut iso = Vector::zeros(8);
        iso[0] = 0.8;
        iso[2] = -0.6;
        let p = upsilon(&a, &f, &(&x0.v + iso)).unwrap();
        let iso_point = totally_geodesic_at(&a, &f, &p, 1).unwrap();
        assert!(iso_point.flag && iso_point.escape_residual < 1e-8, "{iso_point:?}");
    }

    #[test]
    fn fstar_geometry() {
        let a = mixed();
        let mut rng = sampling::rng(35);
        let mut v = Vector::zeros(8);
        v[1] = 0.6;
        v[6] = 0.3;
        let f = FocalVariety::fstar(v.clone(), sampling::gaussian_vector(&mut rng, 8), 0.5, 1.7).unwrap();
        assert_eq!(fstar_tangent_dim(&a, &v), 8);
        let p = fstar_point(&a, &f, &sampling::gaussian_vector(&mut rng, 8), Vector::zeros(3), 0.9).unwrap();
        assert!(f.membership_residual(&a, &p.to_affine()) < 1e-12);
        let tg = totally_geodesic_at(&a, &f, &p, 2).unwrap();
        assert!(!tg.flag && tg.escape_residual > 1e-3);
        assert!(kahler_angle_spread(&a, &v, 50, 3).unwrap() > 1e-2);

        let mut w = Vector::zeros(8);
        w[1] = 0.6;
        w[3] = 0.3;
        let g = FocalVariety::fstar(w.clone(), Vector::zeros(8), -0.5, 1.0).unwrap();
        let p = fstar_point(&a, &g, &sampling::gaussian_vector(&mut rng, 8), Vector::zeros(3), 2.0).unwrap();
        let tg = totally_geodesic_at(&a, &g, &p, 2).unwrap();
        assert!(tg.flag && tg.escape_residual < 1e-8, "{tg:?}");
        assert!(kahler_angle_spread(&a, &w, 50, 3).unwrap() < 1e-6);
        let angles = kahler_angles(&a, &w, &w).unwrap();
        assert_eq!(angles.len(), 3);
        assert!(angles.iter().all(|x| x.abs() < 1e-12));
        assert!(matches!(
            kahler_angles(&a, &w, &Vector::from_element(8, 1.0)),
            Err(Error::SubspaceViolation { .. })
        ));
    }

    #[test]
    fn translation_equivariance() {
        let a = mixed();
        let mut rng = sampling::rng(36);
        let x0 = AffinePoint::new(sampling::gaussian_vector(&mut rng, 8), sampling::gaussian_vector(&mut rng, 3), -1.5);
        let f = FocalVariety::fx0(x0.clone()).unwrap();
        for _ in 0..10 {
            let p = sampling::sample_point(&mut rng, &a);
            let vbar = &x0.v + sampling::unit_vector(&mut rng, 8) * 1.2;
            let q = upsilon(&a, &f, &vbar).unwrap();
            let moved = left_translate(&a, &p, &q.to_affine());
            let res = f.translated(&a, &p).membership_residual(&a, &moved);
            assert!(res < 1e-10 * (1.0 + moved.v.norm_squared() + moved.z.norm() + moved.t.abs()));
        }
    }
}
