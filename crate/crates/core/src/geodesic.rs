//! Closed-form geodesics and their projective prolongations.
//!
//! A unit vector `ξ = (v, z, s)` at the identity determines the geodesic
//! `t ↦ γ(tanh(t/2))`, where
//! `γ(θ) = (2θ(1−sθ)/χ · v + 2θ²/χ · J_z v, 2θ/χ · z, (1−θ²)/χ)` and
//! `χ(θ) = (1−sθ)² + ‖z‖²θ²`. The same formula extends `γ` to all of `ℝP¹`,
//! tracing an ellipse, a parabola or a line.

use crate::clifford_algebra::DamekRicciAlgebra;
use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::model::{left_translate, AffinePoint, Point, TangentVec};

/// Unit-norm tolerance for tangent vectors.
pub const UNIT_TOL: f64 = 1e-12;
/// Distance from a root of `χ` inside which evaluation is refused.
pub const POLE_TOL: f64 = 1e-7;
/// Threshold below which `‖z‖`, `‖v‖` count as zero.
pub const ZERO_TOL: f64 = 1e-12;

/// A point of the projective line `ℝP¹ = ℝ ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    Infinity,
}

impl ExtReal {
    /// Homogeneous coordinates `(x, 1)` or `(1, 0)`.
    fn homogeneous(self) -> (f64, f64) {
        match self {
            ExtReal::Finite(x) => (x, 1.0),
            ExtReal::Infinity => (1.0, 0.0),
        }
    }
}

impl From<f64> for ExtReal {
    fn from(x: f64) -> Self {
        if x.is_infinite() {
            ExtReal::Infinity
        } else {
            ExtReal::Finite(x)
        }
    }
}

/// A point of the projective closure of `𝔰`: either affine or the point
/// `⊛` at infinity in the direction of `𝔞`.
#[derive(Debug, Clone, PartialEq)]
pub enum ProjectivePoint {
    Affine(AffinePoint),
    Star,
}

/// A geodesic written as `L_base ∘ γ_ξ`.
#[derive(Debug, Clone)]
pub struct ProlongedGeodesic {
    pub base: Point,
    pub xi: TangentVec,
}

impl ProlongedGeodesic {
    pub fn new(base: Point, xi: TangentVec) -> Result<Self> {
        check_unit(&xi)?;
        Ok(Self { base, xi })
    }

    /// `η(θ) = L_base(γ(θ))`.
    pub fn eval(&self, alg: &DamekRicciAlgebra, theta: f64) -> Result<AffinePoint> {
        Ok(left_translate(alg, &self.base, &gamma_eval(alg, &self.xi, theta)?))
    }

    /// `η` on all of `ℝP¹`, with `⊛` when the conic passes through it.
    pub fn eval_projective(&self, alg: &DamekRicciAlgebra, theta: ExtReal) -> Result<ProjectivePoint> {
        match theta {
            ExtReal::Finite(th) => self.eval(alg, th).map(ProjectivePoint::Affine),
            ExtReal::Infinity => Ok(match point_at_infinity(alg, &self.xi) {
                ProjectivePoint::Affine(x) => ProjectivePoint::Affine(left_translate(alg, &self.base, &x)),
                ProjectivePoint::Star => ProjectivePoint::Star,
            }),
        }
    }
}

fn check_unit(xi: &TangentVec) -> Result<()> {
    let err = (xi.norm_squared() - 1.0).abs();
    if err > UNIT_TOL {
        return Err(Error::InvalidInput(format!("tangent vector is not unit (|‖ξ‖² − 1| = {err:e})")));
    }
    Ok(())
}

/// `χ(θ) = (1 − sθ)² + ‖z‖²θ²`.
pub fn chi(xi: &TangentVec, theta: f64) -> f64 {
    let a = 1.0 - xi.s * theta;
    a * a + xi.z.norm_squared() * theta * theta
}

/// Real roots of `χ`: only `θ = 1/s` when `z = 0` and `s ≠ 0`.
pub fn chi_roots(xi: &TangentVec) -> Vec<f64> {
    if xi.z.norm() <= ZERO_TOL && xi.s != 0.0 {
        vec![1.0 / xi.s]
    } else {
        vec![]
    }
}

fn check_pole(xi: &TangentVec, theta: f64) -> Result<f64> {
    let c = chi(xi, theta);
    if c.abs() <= 1e-14 || chi_roots(xi).iter().any(|r| (theta - r).abs() < POLE_TOL) {
        return Err(Error::PoleAtTheta { theta });
    }
    Ok(c)
}

fn assemble(alg: &DamekRicciAlgebra, xi: &TangentVec, theta: f64, c: f64, one_minus_theta_sq: f64) -> AffinePoint {
    let jzv = alg.j(&xi.z, &xi.v);
    let v = &xi.v * (2.0 * theta * (1.0 - xi.s * theta) / c) + jzv * (2.0 * theta * theta / c);
    let z = &xi.z * (2.0 * theta / c);
    AffinePoint::new(v, z, one_minus_theta_sq / c)
}

/// `γ(θ)` for the unit initial velocity `ξ`; below the boundary for `|θ| > 1`.
pub fn gamma_eval(alg: &DamekRicciAlgebra, xi: &TangentVec, theta: f64) -> Result<AffinePoint> {
    check_pole(xi, theta)?;
    let c = chi(xi, theta);
    Ok(assemble(alg, xi, theta, c, (1.0 - theta) * (1.0 + theta)))
}

/// The unit-speed geodesic `t ↦ L_base(γ(tanh(t/2)))`.
pub fn geodesic_point(alg: &DamekRicciAlgebra, g: &ProlongedGeodesic, t: f64) -> Point {
    let theta = (0.5 * t).tanh();
    let sech = 1.0 / (0.5 * t).cosh();
    // |θ| < 1 keeps χ > 0 for unit ξ.
    let c = chi(&g.xi, theta);
    let x = left_translate(alg, &g.base, &assemble(alg, &g.xi, theta, c, sech * sech));
    x.to_point().expect("geodesic stays in the half-space")
}

/// `γ(∞)`: an affine point when `‖v‖ ≠ 1`, otherwise `⊛`.
pub fn point_at_infinity(alg: &DamekRicciAlgebra, xi: &TangentVec) -> ProjectivePoint {
    if (xi.v.norm() - 1.0).abs() <= UNIT_TOL {
        return ProjectivePoint::Star;
    }
    let q = xi.s * xi.s + xi.z.norm_squared();
    let v = &xi.v * (-2.0 * xi.s / q) + alg.j(&xi.z, &xi.v) * (2.0 / q);
    ProjectivePoint::Affine(AffinePoint::new(v, Vector::zeros(alg.m()), -1.0 / q))
}

/// `γ` on `ℝP¹`.
pub fn gamma_projective(alg: &DamekRicciAlgebra, xi: &TangentVec, theta: ExtReal) -> Result<ProjectivePoint> {
    match theta {
        ExtReal::Finite(th) => {
            if (xi.v.norm() - 1.0).abs() <= UNIT_TOL && chi_roots(xi).iter().any(|r| (th - r).abs() < POLE_TOL) {
                return Ok(ProjectivePoint::Star);
            }
            gamma_eval(alg, xi, th).map(ProjectivePoint::Affine)
        }
        ExtReal::Infinity => Ok(point_at_infinity(alg, xi)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConicKind {
    Ellipse,
    Parabola,
    Line,
}

/// Affine type of the prolongation of `γ_ξ`, with the implicit equations of
/// its image.
#[derive(Debug, Clone)]
pub struct ConicClass {
    pub kind: ConicKind,
    xi: TangentVec,
}

/// Coordinates `(X, Y, Z, W)` along `v̂`, `J_z v / ‖J_z v‖`, `ẑ` and `A`, plus
/// the size of the part of the point outside their span.
fn plane_coordinates(alg: &DamekRicciAlgebra, xi: &TangentVec, x: &AffinePoint) -> ([f64; 4], f64) {
    let nv = xi.v.norm();
    let nz = xi.z.norm();
    let mut rest_v = x.v.clone();
    let mut rest_z = x.z.clone();
    let mut coords = [0.0, 0.0, 0.0, x.t];
    if nv > ZERO_TOL {
        let e = &xi.v / nv;
        coords[0] = x.v.dot(&e);
        rest_v -= &e * coords[0];
        if nz > ZERO_TOL {
            let ej = alg.j(&xi.z, &xi.v) / (nv * nz);
            coords[1] = x.v.dot(&ej);
            rest_v -= &ej * coords[1];
        }
    }
    if nz > ZERO_TOL {
        let e = &xi.z / nz;
        coords[2] = x.z.dot(&e);
        rest_z -= &e * coords[2];
    }
    (coords, rest_v.amax().max(rest_z.amax()))
}

impl ConicClass {
    pub fn xi(&self) -> &TangentVec {
        &self.xi
    }

    /// Largest residual of the implicit equations of the conic at `x`.
    pub fn implicit_residual(&self, alg: &DamekRicciAlgebra, x: &AffinePoint) -> f64 {
        let ([xx, yy, zz, ww], off_plane) = plane_coordinates(alg, &self.xi, x);
        let nv = self.xi.v.norm();
        let nz = self.xi.z.norm();
        let s = self.xi.s;
        let residuals: Vec<f64> = match self.kind {
            ConicKind::Ellipse if nv > ZERO_TOL => vec![
                nz * xx + s * yy - nv * zz,
                (1.0 - nv * nv / 2.0) * yy - s * nv * zz + nv * nz * ww - nv * nz,
                nz * (xx * xx + yy * yy) - 2.0 * nv * yy,
            ],
            ConicKind::Ellipse => vec![xx, yy, zz * zz + ww * ww - 2.0 * s / nz * zz - 1.0],
            ConicKind::Parabola => vec![yy, zz, 4.0 * nv * nv * ww + xx * xx - (2.0 * nv + s * xx).powi(2)],
            ConicKind::Line => vec![xx, yy, zz],
        };
        residuals.iter().map(|r| r.abs()).fold(off_plane, f64::max)
    }

    /// Maximum implicit residual of `γ(θ)` over a grid, skipping parameters
    /// within `0.05` of a pole.
    pub fn max_residual_on(&self, alg: &DamekRicciAlgebra, thetas: &[f64]) -> f64 {
        let poles = chi_roots(&self.xi);
        thetas
            .iter()
            .filter(|th| poles.iter().all(|r| (*th - r).abs() > 0.05))
            .filter_map(|&th| gamma_eval(alg, &self.xi, th).ok())
            .map(|x| self.implicit_residual(alg, &x))
            .fold(0.0, f64::max)
    }
}

/// Classify the prolongation of `γ_ξ`: ellipse if `z ≠ 0`, parabola if
/// `z = 0, v ≠ 0`, line otherwise.
pub fn classify_conic(xi: &TangentVec) -> ConicClass {
    let kind = if xi.z.norm() > ZERO_TOL {
        ConicKind::Ellipse
    } else if xi.v.norm() > ZERO_TOL {
        ConicKind::Parabola
    } else {
        ConicKind::Line
    };
    ConicClass { kind, xi: xi.clone() }
}

/// Cross-ratio `(θ₁, θ₂; θ₃, θ₄) = (θ₁−θ₃)(θ₂−θ₄) / ((θ₁−θ₄)(θ₂−θ₃))`,
/// evaluated on homogeneous coordinates so that `∞` is handled exactly.
pub fn cross_ratio(a: ExtReal, b: ExtReal, c: ExtReal, d: ExtReal) -> Result<f64> {
    let pts = [a.homogeneous(), b.homogeneous(), c.homogeneous(), d.homogeneous()];
    let det = |p: (f64, f64), q: (f64, f64)| p.0 * q.1 - p.1 * q.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            let (p, q) = (pts[i], pts[j]);
            let scale = p.0.hypot(p.1) * q.0.hypot(q.1);
            if det(p, q).abs() <= 4.0 * f64::EPSILON * scale {
                return Err(Error::DegenerateRange);
            }
        }
    }
    let [p1, p2, p3, p4] = pts;
    Ok(det(p1, p3) * det(p2, p4) / (det(p1, p4) * det(p2, p3)))
}

/// The harmonic conjugate of `θ` with respect to `±1`, namely `1/θ`.
pub fn harmonic_partner(theta: ExtReal) -> ExtReal {
    match theta {
        ExtReal::Infinity => ExtReal::Finite(0.0),
        ExtReal::Finite(x) if x == 0.0 => ExtReal::Infinity,
        ExtReal::Finite(x) => ExtReal::Finite(1.0 / x),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford_algebra::{build_algebra, CliffordSpec, IrrepKind};
    use crate::model::distance;
    use crate::sampling;

    fn alg() -> DamekRicciAlgebra {
        build_algebra(&CliffordSpec::tagged(3, &[(IrrepKind::D1, 1), (IrrepKind::D2, 1)])).unwrap()
    }

    fn vertical(a: &DamekRicciAlgebra) -> TangentVec {
        TangentVec::new(Vector::zeros(a.n()), Vector::zeros(a.m()), 1.0)
    }

    #[test]
    fn origin_and_vertical_line() {
        let a = alg();
        let xi = vertical(&a);
        let e = gamma_eval(&a, &xi, 0.0).unwrap();
        assert_eq!(e, Point::identity(8, 3).to_affine());
        for th in [-0.5, 0.3, 0.9, 2.0] {
            let x = gamma_eval(&a, &xi, th).unwrap();
            assert!((x.t - (1.0 + th) / (1.0 - th)).abs() < 1e-14);
            assert_eq!(x.v.norm() + x.z.norm(), 0.0);
        }
        assert!(matches!(gamma_eval(&a, &xi, 1.0), Err(Error::PoleAtTheta { .. })));
        assert_eq!(classify_conic(&xi).kind, ConicKind::Line);
    }

    #[test]
    fn unit_speed() {
        let a = alg();
        let mut rng = sampling::rng(11);
        for _ in 0..20 {
            let base = sampling::sample_point(&mut rng, &a);
            let g = ProlongedGeodesic::new(base, sampling::unit_tangent(&mut rng, &a)).unwrap();
            let t1 = sampling::uniform(&mut rng, -4.0, 4.0);
            let t2 = sampling::uniform(&mut rng, -4.0, 4.0);
            let d = distance(&a, &geodesic_point(&a, &g, t1), &geodesic_point(&a, &g, t2));
            assert!((d - (t1 - t2).abs()).abs() < 1e-9, "{d} vs {}", (t1 - t2).abs());
        }
    }

    #[test]
    fn conic_residuals() {
        let a = alg();
        let mut rng = sampling::rng(12);
        let grid: Vec<f64> = (0..50).map(|k| -3.0 + 6.0 * k as f64 / 49.0).collect();
        let xi = sampling::unit_tangent(&mut rng, &a);
        let c = classify_conic(&xi);
        assert_eq!(c.kind, ConicKind::Ellipse);
        assert!(c.max_residual_on(&a, &grid) < 1e-10);

        let v = sampling::unit_vector(&mut rng, 8) * 0.6;
        let para = TangentVec::new(v, Vector::zeros(3), 0.8);
        let c = classify_conic(&para);
        assert_eq!(c.kind, ConicKind::Parabola);
        assert!(c.max_residual_on(&a, &grid) < 1e-10);

        let z = sampling::unit_vector(&mut rng, 3) * 0.6;
        let vz = TangentVec::new(Vector::zeros(8), z, -0.8);
        let c = classify_conic(&vz);
        assert_eq!(c.kind, ConicKind::Ellipse);
        assert!(c.max_residual_on(&a, &grid) < 1e-10);

        // Off-conic points are detected.
        let mut x = gamma_eval(&a, &xi, 0.4).unwrap();
        x.t += 1e-3;
        assert!(classify_conic(&xi).implicit_residual(&a, &x) > 1e-5);
    }

    #[test]
    fn infinity_cases() {
        let a = alg();
        let mut rng = sampling::rng(13);
        let v = sampling::unit_vector(&mut rng, 8);
        let horizontal = TangentVec::new(v, Vector::zeros(3), 0.0);
        assert_eq!(point_at_infinity(&a, &horizontal), ProjectivePoint::Star);

        let z = sampling::unit_vector(&mut rng, 3) * 0.6;
        let xi = TangentVec::new(Vector::zeros(8), z, 0.8);
        match point_at_infinity(&a, &xi) {
            ProjectivePoint::Affine(p) => {
                assert!((p.t + 1.0).abs() < 1e-15);
                assert_eq!(p.v.norm() + p.z.norm(), 0.0);
            }
            ProjectivePoint::Star => panic!("expected an affine point"),
        }

        let xi = sampling::unit_tangent(&mut rng, &a);
        let ProjectivePoint::Affine(inf) = point_at_infinity(&a, &xi) else { panic!() };
        let mut last = f64::INFINITY;
        for k in 2..7 {
            let eps = 10f64.powi(-k);
            let diff = gamma_eval(&a, &xi, 1.0 / eps).unwrap().max_diff(&inf);
            assert!(diff < last && diff < 50.0 * eps);
            last = diff;
        }
    }

    #[test]
    fn far_limits_approach_boundary_images() {
        let a = alg();
        let mut rng = sampling::rng(14);
        let xi = sampling::unit_tangent(&mut rng, &a);
        let g = ProlongedGeodesic::new(Point::identity(8, 3), xi.clone()).unwrap();
        let th = 1.0 - 1e-9;
        let near = gamma_eval(&a, &xi, th).unwrap();
        let at = gamma_eval(&a, &xi, 1.0).unwrap();
        assert!(near.max_diff(&at) < 1e-7);
        let far = geodesic_point(&a, &g, 2.0 * th.atanh());
        assert!(far.to_affine().max_diff(&at) < 1e-7);
    }

    #[test]
    fn cross_ratios() {
        use ExtReal::*;
        assert!((cross_ratio(Finite(2.0), Finite(0.5), Finite(1.0), Finite(-1.0)).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(cross_ratio(Finite(0.0), Infinity, Finite(1.0), Finite(-1.0)).unwrap(), -1.0);
        assert!(matches!(
            cross_ratio(Finite(1.0), Finite(1.0), Finite(2.0), Finite(3.0)),
            Err(Error::DegenerateRange)
        ));
        assert_eq!(harmonic_partner(Finite(0.0)), Infinity);
        assert_eq!(harmonic_partner(Infinity), Finite(0.0));

        // Möbius invariance.
        let mob = |x: f64| (2.0 * x + 1.0) / (x - 3.0);
        let pts = [0.7, -2.5, 4.0, 10.0];
        let before = cross_ratio(pts[0].into(), pts[1].into(), pts[2].into(), pts[3].into()).unwrap();
        let after = cross_ratio(mob(pts[0]).into(), mob(pts[1]).into(), mob(pts[2]).into(), mob(pts[3]).into()).unwrap();
        assert!((before - after).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_unit() {
        let a = alg();
        let xi = TangentVec::new(Vector::zeros(8), Vector::zeros(3), 2.0);
        assert!(ProlongedGeodesic::new(Point::identity(8, 3), xi).is_err());
        let _ = a;
    }
}
