//! Verification suites run by the `drspace` subcommands.
//!
//! Each suite draws all of its randomness from one generator seeded by
//! [`SuiteOptions::seed`] and returns one [`CheckResult`] per named check.
//! `--tol-exact` overrides the tolerance of every closed-form check in a
//! suite and `--tol-fd` that of every finite-difference check; the lower
//! thresholds of separation checks (escape, Kähler spread, convergence
//! order) are fixed.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::clifford_algebra::{j2_satisfied, predict_j2_set, validate_clifford_with, CliffordSpec, DamekRicciAlgebra};
use crate::error::{Error, Result};
use crate::focal::{
    distance_to_focal, focal_crossings, fstar_point, fstar_tangent_dim, infinity_mismatch, kahler_angle_spread,
    orthogonal_velocity, sample_free_parameters, totally_geodesic_at, upsilon, FocalVariety, J2_TOL,
};
use crate::geodesic::{
    classify_conic, cross_ratio, gamma_eval, geodesic_point, point_at_infinity, ExtReal, ProjectivePoint,
    ProlongedGeodesic,
};
use crate::isoparametric::{
    eval_d, eval_dstar, mean_curvature, mean_curvature_from_ab, sphere_h_from_density, tube_radius,
    tube_radius_quadrature, verify_isoparametric, IsoFn, SurfaceKind,
};
use crate::linalg::{Matrix, Vector};
use crate::model::{distance, inverse, left_translate, AffinePoint, Point, ScalarField, TangentVec};
use crate::sampling::{self, Rng};

use super::report::{CheckResult, Counts, CurvatureRow};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    pub samples: Option<usize>,
    pub tol_exact: Option<f64>,
    pub tol_fd: Option<f64>,
    pub grid: Option<usize>,
}

impl SuiteOptions {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    fn exact(&self, default: f64) -> f64 {
        self.tol_exact.unwrap_or(default)
    }

    fn fd(&self, default: f64) -> f64 {
        self.tol_fd.unwrap_or(default)
    }

    fn count(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }

    fn grid_size(&self, default: usize) -> usize {
        self.grid.unwrap_or(default)
    }
}

/// Centres of the distorted distances checked by `verify-iso`.
pub const CENTRE_HEIGHTS: [f64; 4] = [-2.0, -1.0, 0.0, 1.0];
/// Standard deviation of the random centre coordinates.
const CENTRE_SCALE: f64 = 0.5;
/// Default radii of the curvature table.
pub const DEFAULT_RADII: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 5.0];

/// Residual normalized by `(1 + max |coordinate|)²`, the scale of the
/// quadratic defining equations.
fn scaled_residual(res: f64, x: &AffinePoint) -> f64 {
    let scale = 1.0 + x.v.amax().max(x.z.amax()).max(x.t.abs());
    res / (scale * scale)
}

fn random_centre(rng: &mut Rng, alg: &DamekRicciAlgebra, t0: f64) -> AffinePoint {
    let v = sampling::gaussian_vector(rng, alg.n()) * CENTRE_SCALE;
    let z = sampling::gaussian_vector(rng, alg.m()) * CENTRE_SCALE;
    AffinePoint::new(v, z, t0)
}

fn random_translation(rng: &mut Rng, alg: &DamekRicciAlgebra) -> Point {
    sampling::sample_point_scaled(rng, alg, 0.5, 2.0, CENTRE_SCALE)
}

/// Random orthonormal basis of `ℝⁿ`.
fn random_basis(rng: &mut Rng, n: usize) -> Matrix {
    let g = DMatrix::from_fn(n, n, |_, _| sampling::gaussian_vector(rng, 1)[0]);
    g.qr().q()
}

// ---------------------------------------------------------------- validate

/// Clifford relations and bracket identities on `samples` random inputs.
pub fn validate(alg: &DamekRicciAlgebra, opts: &SuiteOptions) -> Vec<CheckResult> {
    let samples = opts.count(1000);
    let tol = opts.exact(1e-12);
    let report = validate_clifford_with(alg, samples, &mut sampling::rng(opts.seed));
    report
        .residuals
        .iter()
        .map(|r| CheckResult::upper(format!("clifford.{}", r.name), &[r.value], tol).with_samples(samples))
        .collect()
}

// -------------------------------------------------------------- verify-iso

/// Isoparametric identities of `D_{x₀}`, the subset functions and `D_⊛`,
/// the limit `D_{η(θ)} → D_⊛` and the translation laws.
pub fn verify_iso(alg: &DamekRicciAlgebra, opts: &SuiteOptions) -> Result<Vec<CheckResult>> {
    let samples = opts.count(100);
    let tol_fd = opts.fd(1e-5);
    let tol_grad = opts.exact(1e-9);
    let n = alg.n();
    let mut rng = sampling::rng(opts.seed);
    let points: Vec<Point> = (0..samples).map(|_| sampling::sample_point(&mut rng, alg)).collect();
    let mut out = Vec::new();

    let identities = |label: String, f: &IsoFn, out: &mut Vec<CheckResult>| {
        let r = verify_isoparametric(alg, f, &points, tol_fd, tol_grad);
        out.push(from_stats(format!("{label}.laplacian"), r.laplacian.max, r.laplacian.mean, samples, tol_fd));
        out.push(from_stats(format!("{label}.gradient"), r.gradient.max, r.gradient.mean, samples, tol_grad));
    };

    let mut lower = Vec::new();
    for t0 in CENTRE_HEIGHTS {
        let x0 = random_centre(&mut rng, alg, t0);
        identities(format!("d_x0[t0={t0}]"), &IsoFn::distorted_distance(x0.clone()), &mut out);
        lower.extend(points.iter().map(|x| (x.t() + 2.0 * t0 - eval_d(alg, &x0, x)).max(0.0)));
    }
    out.push(CheckResult::upper("d_x0.lower_bound", &lower, 0.0));

    let first: Vec<usize> = vec![0];
    let half: Vec<usize> = (0..(n / 2).max(1)).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut rotated: Vec<usize> = perm[..n.div_ceil(2)].to_vec();
    rotated.sort_unstable();
    let basis = random_basis(&mut rng, n);
    identities("subset.single".into(), &IsoFn::subset(first), &mut out);
    identities("subset.half".into(), &IsoFn::subset(half), &mut out);
    identities("subset.rotated".into(), &IsoFn::subset_in_basis(rotated, basis)?, &mut out);

    let base = random_translation(&mut rng, alg);
    let v = sampling::unit_vector(&mut rng, n) * 0.8;
    identities("dstar".into(), &IsoFn::dstar(base, v, 0.6)?, &mut out);

    out.extend(dstar_limit(alg, &mut rng)?);
    out.extend(translation_laws(alg, &mut rng, samples, opts.exact(1e-10))?);
    Ok(out)
}

fn from_stats(name: String, max: f64, mean: f64, samples: usize, tol: f64) -> CheckResult {
    let mut r = CheckResult::upper(name, &[max], tol);
    r.mean_residual = mean;
    r.samples = samples;
    r
}

/// Offsets `δ_k = 1/s − θ_k` approaching the pole of a parabola-type
/// geodesic.
const LIMIT_OFFSETS: usize = 11;
const LIMIT_POINTS: usize = 10;
/// Required empirical convergence order of the limit.
pub const LIMIT_ORDER: f64 = 0.9;

/// `(1/θ − s)² D_{η(θ)} → t̄ D_⊛` as `θ → 1/s` along
/// `η = L_b ∘ γ_{(v, 0, s)}`: the residual must decrease monotonically with
/// empirical order at least [`LIMIT_ORDER`].
fn dstar_limit(alg: &DamekRicciAlgebra, rng: &mut Rng) -> Result<Vec<CheckResult>> {
    let (n, m) = (alg.n(), alg.m());
    let base = random_translation(rng, alg);
    let s = 0.6;
    let v = sampling::unit_vector(rng, n) * 0.8;
    let g = ProlongedGeodesic::new(base.clone(), TangentVec::new(v.clone(), Vector::zeros(m), s))?;
    let tests: Vec<Point> = (0..LIMIT_POINTS).map(|_| sampling::sample_point(rng, alg)).collect();
    let limit: Vec<f64> = tests.iter().map(|x| base.t() * eval_dstar(alg, &base, &v, s, x)).collect();
    let deltas: Vec<f64> = (0..LIMIT_OFFSETS).map(|k| 10f64.powf(-1.0 - 0.5 * k as f64)).collect();
    let residuals: Vec<f64> = deltas
        .iter()
        .map(|&delta| {
            let theta = 1.0 / s - delta;
            let x0 = g.eval(alg, theta)?;
            let weight = (1.0 - s * theta) / theta;
            Ok(tests
                .iter()
                .zip(&limit)
                .map(|(x, l)| (weight * weight * eval_d(alg, &x0, x) - l).abs())
                .fold(0.0, f64::max))
        })
        .collect::<Result<_>>()?;
    let monotone = residuals.windows(2).all(|w| w[1] < w[0]);
    let orders: Vec<f64> = residuals
        .windows(2)
        .zip(deltas.windows(2))
        .map(|(r, d)| (r[0] / r[1]).ln() / (d[0] / d[1]).ln())
        .collect();
    Ok(vec![
        CheckResult::boolean("dstar_limit.monotone", monotone, LIMIT_OFFSETS),
        CheckResult::lower("dstar_limit.order", &orders, LIMIT_ORDER),
    ])
}

/// `D_{x₀}(L_p x) = t̄ D_{L_{p⁻¹}x₀}(x)` and the corresponding law for `D_⊛`.
fn translation_laws(alg: &DamekRicciAlgebra, rng: &mut Rng, count: usize, tol: f64) -> Result<Vec<CheckResult>> {
    let n = alg.n();
    let mut d_res = Vec::with_capacity(count);
    let mut star_res = Vec::with_capacity(count);
    for _ in 0..count {
        let p = random_translation(rng, alg);
        let t0 = sampling::uniform(rng, -2.0, 1.0);
        let x0 = random_centre(rng, alg, t0);
        let x = sampling::sample_point(rng, alg);
        let moved = left_translate(alg, &p, &x.to_affine()).to_point()?;
        let lhs = eval_d(alg, &x0, &moved);
        let rhs = p.t() * eval_d(alg, &left_translate(alg, &inverse(&p), &x0), &x);
        d_res.push((lhs - rhs).abs());

        let base = random_translation(rng, alg);
        let norm = sampling::uniform(rng, 0.1, 0.95);
        let v = sampling::unit_vector(rng, n) * norm;
        let s = (1.0 - norm * norm).sqrt();
        let f = IsoFn::dstar(base.clone(), v, s)?;
        let g = f.translated(alg, &p)?;
        let IsoFn::DStar { base: moved_base, .. } = &g else { unreachable!() };
        // The limit function t_b·D_⊛ obeys the t̄-law of D_{x₀}.
        let lhs = base.t() * f.bind(alg).value(&moved);
        let rhs = p.t() * moved_base.t() * g.bind(alg).value(&x);
        star_res.push((lhs - rhs).abs());
    }
    Ok(vec![
        CheckResult::upper("translation.d_x0", &d_res, tol),
        CheckResult::upper("translation.dstar", &star_res, tol),
    ])
}

// ---------------------------------------------------------------- geodesic

const PAIRS_PER_GEODESIC: usize = 5;
const CONIC_GRID: usize = 50;
const CONICS_PER_KIND: usize = 10;
/// Parameter at which a prolonged geodesic is compared with its point at
/// infinity, and the allowed gap.
const FAR_THETA: f64 = 1e6;
const FAR_TOL: f64 = 1e-4;

/// Unit speed against the distance function, conic equations of the
/// prolongations, the point at infinity, and affinity of left translations.
pub fn geodesic(alg: &DamekRicciAlgebra, opts: &SuiteOptions) -> Result<Vec<CheckResult>> {
    let count = opts.count(100);
    let (n, m) = (alg.n(), alg.m());
    let mut rng = sampling::rng(opts.seed);
    let mut out = Vec::new();

    let mut speed = Vec::with_capacity(count * PAIRS_PER_GEODESIC);
    for _ in 0..count {
        let base = sampling::sample_point_scaled(&mut rng, alg, 0.2, 5.0, 1.0);
        let g = ProlongedGeodesic::new(base, sampling::unit_tangent(&mut rng, alg))?;
        for _ in 0..PAIRS_PER_GEODESIC {
            let t1 = sampling::uniform(&mut rng, -3.0, 3.0);
            let t2 = sampling::uniform(&mut rng, -3.0, 3.0);
            let d = distance(alg, &geodesic_point(alg, &g, t1), &geodesic_point(alg, &g, t2));
            speed.push((d - (t1 - t2).abs()).abs());
        }
    }
    out.push(CheckResult::upper("geodesic.unit_speed", &speed, opts.exact(1e-9)));

    let thetas: Vec<f64> = (0..CONIC_GRID).map(|k| -3.0 + 6.0 * k as f64 / (CONIC_GRID - 1) as f64).collect();
    let kinds: [(&str, fn(&mut Rng, usize, usize) -> TangentVec); 4] = [
        ("ellipse", |rng, n, m| {
            let w = sampling::unit_vector(rng, n + m + 1);
            TangentVec::new(w.rows(0, n).into_owned(), w.rows(n, m).into_owned(), w[n + m])
        }),
        ("ellipse_vertical", |rng, _n, m| {
            let w = sampling::unit_vector(rng, m + 1);
            TangentVec::new(Vector::zeros(_n), w.rows(0, m).into_owned(), w[m])
        }),
        ("parabola", |rng, n, m| {
            let w = sampling::unit_vector(rng, n + 1);
            TangentVec::new(w.rows(0, n).into_owned(), Vector::zeros(m), w[n])
        }),
        ("line", |rng, n, m| {
            let s = if sampling::uniform(rng, 0.0, 1.0) < 0.5 { -1.0 } else { 1.0 };
            TangentVec::new(Vector::zeros(n), Vector::zeros(m), s)
        }),
    ];
    for (label, make) in kinds {
        if m == 0 && label == "ellipse_vertical" {
            continue;
        }
        let residuals: Vec<f64> = (0..CONICS_PER_KIND)
            .map(|_| {
                let xi = make(&mut rng, n, m);
                classify_conic(&xi).max_residual_on(alg, &thetas)
            })
            .collect();
        out.push(CheckResult::upper(format!("conic.{label}"), &residuals, opts.exact(1e-10)).with_samples(CONICS_PER_KIND * CONIC_GRID));
    }

    // ‖v‖ = 1 forces ξ = (v, 0, 0) and γ(∞) = ⊛; otherwise γ(∞) is affine and
    // is the limit of γ(θ).
    let mut split_ok = true;
    let mut far = Vec::with_capacity(count);
    for _ in 0..count {
        let horizontal = TangentVec::new(sampling::unit_vector(&mut rng, n), Vector::zeros(m), 0.0);
        split_ok &= point_at_infinity(alg, &horizontal) == ProjectivePoint::Star;
        let norm = sampling::uniform(&mut rng, 0.0, 0.9);
        let rest = sampling::unit_vector(&mut rng, m + 1) * (1.0 - norm * norm).sqrt();
        let xi = TangentVec::new(sampling::unit_vector(&mut rng, n) * norm, rest.rows(0, m).into_owned(), rest[m]);
        match point_at_infinity(alg, &xi) {
            ProjectivePoint::Affine(p) => far.push(gamma_eval(alg, &xi, FAR_THETA)?.max_diff(&p)),
            ProjectivePoint::Star => split_ok = false,
        }
    }
    out.push(CheckResult::boolean("infinity.case_split", split_ok, 2 * count));
    out.push(CheckResult::upper("infinity.limit", &far, FAR_TOL));

    let mut affine = Vec::with_capacity(count);
    for _ in 0..count {
        let p = random_translation(&mut rng, alg);
        let (ta, tb) = (sampling::uniform(&mut rng, -2.0, 2.0), sampling::uniform(&mut rng, -2.0, 2.0));
        let a = random_centre(&mut rng, alg, ta);
        let b = random_centre(&mut rng, alg, tb);
        let lam = sampling::uniform(&mut rng, -2.0, 3.0);
        let mix = |x: &AffinePoint, y: &AffinePoint| {
            AffinePoint::new(&x.v * lam + &y.v * (1.0 - lam), &x.z * lam + &y.z * (1.0 - lam), x.t * lam + y.t * (1.0 - lam))
        };
        let lhs = left_translate(alg, &p, &mix(&a, &b));
        let rhs = mix(&left_translate(alg, &p, &a), &left_translate(alg, &p, &b));
        affine.push(scaled_residual(lhs.max_diff(&rhs), &lhs));
    }
    out.push(CheckResult::upper("prolongation.affine", &affine, opts.exact(1e-10)));
    Ok(out)
}

// ----------------------------------------------------------------- j2-scan

/// A structured test vector for J²-scans. Cycles through: a generic vector,
/// an isotypic vector, an isotypic vector with proportional components, a
/// vector in a single summand, and a vector mixing two summands of
/// different type. Explicit modules only get generic vectors.
pub fn structured_vector(rng: &mut Rng, alg: &DamekRicciAlgebra, index: usize) -> Vector {
    let n = alg.n();
    let Some(blocks) = alg.blocks() else {
        return sampling::gaussian_vector(rng, n);
    };
    let mut v = Vector::zeros(n);
    let kinds: Vec<_> = {
        let mut k: Vec<_> = blocks.iter().map(|b| b.kind).collect();
        k.dedup();
        k
    };
    let pick = |rng: &mut Rng, len: usize| ((sampling::uniform(rng, 0.0, 1.0) * len as f64) as usize).min(len - 1);
    match index % 5 {
        0 => v = sampling::gaussian_vector(rng, n),
        1 => {
            let kind = kinds[pick(rng, kinds.len())];
            for b in blocks.iter().filter(|b| b.kind == kind) {
                v.rows_mut(b.offset, b.dim).copy_from(&sampling::gaussian_vector(rng, b.dim));
            }
        }
        2 => {
            let kind = kinds[pick(rng, kinds.len())];
            let w = sampling::gaussian_vector(rng, blocks[0].dim);
            for b in blocks.iter().filter(|b| b.kind == kind) {
                let c = sampling::gaussian_vector(rng, 1)[0];
                v.rows_mut(b.offset, b.dim).copy_from(&(&w * c));
            }
        }
        3 => {
            let b = blocks[pick(rng, blocks.len())];
            v.rows_mut(b.offset, b.dim).copy_from(&sampling::gaussian_vector(rng, b.dim));
        }
        _ => {
            let first = blocks[pick(rng, blocks.len())];
            let other: Vec<_> = blocks.iter().filter(|b| b.kind != first.kind).collect();
            let second = if other.is_empty() { blocks[pick(rng, blocks.len())] } else { *other[pick(rng, other.len())] };
            v.rows_mut(first.offset, first.dim).copy_from(&sampling::gaussian_vector(rng, first.dim));
            let add = sampling::gaussian_vector(rng, second.dim);
            let mut slot = v.rows_mut(second.offset, second.dim);
            slot += add;
        }
    }
    if v.norm() == 0.0 {
        v = sampling::gaussian_vector(rng, n);
    }
    v
}

/// Compare [`j2_satisfied`] with [`predict_j2_set`] on a structured grid.
pub fn j2_scan(spec: &CliffordSpec, alg: &DamekRicciAlgebra, opts: &SuiteOptions) -> Result<Vec<CheckResult>> {
    let grid = opts.grid_size(500);
    if spec.blocks().is_none() {
        return Err(Error::NotApplicable("j2-scan needs a module-tagged specification"));
    }
    let mut rng = sampling::rng(opts.seed);
    let vectors: Vec<Vector> = (0..grid).map(|i| structured_vector(&mut rng, alg, i)).collect();
    let outcomes: Vec<(bool, bool)> = vectors
        .par_iter()
        .map(|v| Ok((j2_satisfied(alg, v, J2_TOL).0, predict_j2_set(spec, v)?)))
        .collect::<Result<_>>()?;
    let satisfied = outcomes.iter().filter(|o| o.0).count();
    let mismatches = outcomes.iter().filter(|o| o.0 != o.1).count();
    let counts = Counts { satisfied, unsatisfied: grid - satisfied, mismatches };
    let mut r = CheckResult::upper("j2.mismatches", &[mismatches as f64], 0.0).with_samples(grid).with_counts(counts);
    r.mean_residual = if grid == 0 { 0.0 } else { mismatches as f64 / grid as f64 };
    Ok(vec![r])
}

// --------------------------------------------------------- curvature-table

/// Mean curvatures of spheres (`t₀ = 1`), horospheres (`t₀ = 0`) and tubes
/// (`t₀ = −1`) at the given radii, checked against the closed forms, the
/// volume density and the tube-radius quadrature.
pub fn curvature_table(m: usize, n: usize, radii: &[f64], opts: &SuiteOptions) -> Result<(Vec<CheckResult>, Vec<CurvatureRow>)> {
    if radii.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::InvalidInput("radii must be positive".into()));
    }
    let tol = opts.exact(1e-12);
    let centre = |t0: f64| IsoFn::distorted_distance(AffinePoint::new(Vector::zeros(n), Vector::zeros(m), t0));
    let (sphere, horo, tube) = (centre(1.0), centre(0.0), centre(-1.0));
    let mut rows = Vec::new();
    let (mut sph, mut hor, mut tub, mut dens, mut quad) = (vec![], vec![], vec![], vec![], vec![]);
    for &r in radii {
        let half = 0.5 * r;
        let h_sphere = mean_curvature(SurfaceKind::Sphere, r, m, n);
        let h_horo = mean_curvature(SurfaceKind::Horosphere, r, m, n);
        let h_tube = mean_curvature(SurfaceKind::Tube, r, m, n);
        let c_sphere = 4.0 * half.cosh().powi(2);
        let c_tube = 4.0 * half.sinh().powi(2);
        sph.push(relative(mean_curvature_from_ab(&sphere, m, n, c_sphere), h_sphere));
        // Every level of D with t₀ = 0 is a horosphere; use e^r as the level.
        hor.push(relative(mean_curvature_from_ab(&horo, m, n, r.exp()), h_horo));
        tub.push(relative(mean_curvature_from_ab(&tube, m, n, c_tube), h_tube));
        dens.push(relative(sphere_h_from_density(r, m, n), h_sphere));
        quad.push((tube_radius_quadrature(&tube, m, n, c_tube)? - tube_radius(&tube, m, n, c_tube)?).abs());
        for (kind, h) in [(SurfaceKind::Sphere, h_sphere), (SurfaceKind::Horosphere, h_horo), (SurfaceKind::Tube, h_tube)] {
            rows.push(CurvatureRow { kind: kind.as_str().to_string(), r, h });
        }
    }
    let results = vec![
        CheckResult::upper("curvature.sphere", &sph, tol),
        CheckResult::upper("curvature.horosphere", &hor, tol),
        CheckResult::upper("curvature.tube", &tub, tol),
        CheckResult::upper("curvature.sphere_density", &dens, tol),
        CheckResult::upper("tube_radius.quadrature", &quad, opts.exact(1e-8).max(tol)),
    ];
    Ok((results, rows))
}

/// `|a − b| / max(1, |b|)`.
fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

// ------------------------------------------------------------- focal-check

const CROSSING_GRID: usize = 1000;
const GEODESY_POINTS: usize = 40;
const DISTANCE_POINTS: usize = 20;
const KAHLER_GRID: usize = 50;
/// Escape residual required of points where the J²-condition fails.
pub const ESCAPE_MIN: f64 = 1e-3;
/// Kähler-angle spread required where the J²-condition fails.
pub const SPREAD_MIN: f64 = 1e-2;

/// Orthogonal geodesics, harmonic ranges, total geodesy, Kähler angles,
/// focal distance and translation equivariance of focal varieties.
pub fn focal_check(alg: &DamekRicciAlgebra, opts: &SuiteOptions) -> Result<Vec<CheckResult>> {
    let count = opts.count(100);
    let grid = opts.grid_size(CROSSING_GRID);
    let (n, m) = (alg.n(), alg.m());
    let mut rng = sampling::rng(opts.seed);
    let mut out = Vec::new();

    // Orthogonal velocities at e point at the centre and cross F once.
    let mut mismatch = Vec::with_capacity(count);
    let mut bad_crossings = 0usize;
    for _ in 0..count {
        let v0 = sampling::gaussian_vector(&mut rng, n) * CENTRE_SCALE * 2.0;
        let f = FocalVariety::through_identity(v0.clone(), m);
        let FocalVariety::Fx0 { x0 } = &f else { unreachable!() };
        let (z, s) = sample_free_parameters(&mut rng, alg, &v0);
        let xi = orthogonal_velocity(alg, &f, &z, s)?;
        mismatch.push(infinity_mismatch(alg, &xi, x0));
        let g = ProlongedGeodesic::new(Point::identity(n, m), xi)?;
        bad_crossings += usize::from(focal_crossings(alg, &f, &g, grid)?.len() != 1);
    }
    out.push(CheckResult::upper("orthogonal.infinity", &mismatch, opts.exact(1e-10)));
    out.push(CheckResult::upper("orthogonal.unique_crossing", &[bad_crossings as f64], 0.0).with_samples(count));

    // A geodesic whose prolongation passes through x₀ = η(θ₀) meets F_{x₀}
    // exactly once, at θ = 1/θ₀.
    let mut cr = Vec::with_capacity(count);
    let mut roots = Vec::with_capacity(count);
    let mut bad_harmonic = 0usize;
    for _ in 0..count {
        let base = random_translation(&mut rng, alg);
        let g = ProlongedGeodesic::new(base, sampling::unit_tangent(&mut rng, alg))?;
        let sign = if sampling::uniform(&mut rng, 0.0, 1.0) < 0.5 { -1.0 } else { 1.0 };
        let theta0 = sign * sampling::uniform(&mut rng, 1.2, 5.0);
        let partner = 1.0 / theta0;
        cr.push((cross_ratio(ExtReal::Finite(theta0), ExtReal::Finite(partner), ExtReal::Finite(1.0), ExtReal::Finite(-1.0))? + 1.0).abs());
        let x0 = match g.eval(alg, theta0) {
            Ok(x0) => x0,
            Err(Error::PoleAtTheta { .. }) => continue,
            Err(e) => return Err(e),
        };
        let f = FocalVariety::fx0(x0)?;
        let found = focal_crossings(alg, &f, &g, grid)?;
        if found.len() == 1 {
            roots.push((found[0] - partner).abs());
        } else {
            bad_harmonic += 1;
        }
    }
    out.push(CheckResult::upper("harmonic.cross_ratio", &cr, opts.exact(1e-12)));
    out.push(CheckResult::upper("harmonic.unique_crossing", &[bad_harmonic as f64], 0.0).with_samples(count));
    out.push(CheckResult::upper("harmonic.partner_root", &roots, opts.exact(1e-9)));

    out.extend(total_geodesy(alg, &mut rng)?);
    out.extend(focal_distance(alg, &mut rng, opts.exact(1e-6))?);

    // Translation equivariance of both kinds of focal variety.
    let mut fx0_res = Vec::with_capacity(count);
    let mut fstar_res = Vec::with_capacity(count);
    for _ in 0..count {
        let p = random_translation(&mut rng, alg);
        let x0 = random_centre(&mut rng, alg, -2.0);
        let f = FocalVariety::fx0(x0.clone())?;
        let radius = 2.0 * 2f64.sqrt() * sampling::uniform(&mut rng, 0.0, 0.95);
        let q = upsilon(alg, &f, &(&x0.v + sampling::unit_vector(&mut rng, n) * radius))?;
        let moved = left_translate(alg, &p, &q.to_affine());
        fx0_res.push(scaled_residual(f.translated(alg, &p).membership_residual(alg, &moved), &moved));

        let v = sampling::unit_vector(&mut rng, n) * sampling::uniform(&mut rng, 0.2, 0.95);
        let s = (1.0 - v.norm_squared()).sqrt();
        let g = FocalVariety::fstar(v, sampling::gaussian_vector(&mut rng, n) * CENTRE_SCALE, s, sampling::uniform(&mut rng, 0.5, 2.0))?;
        let w = sampling::gaussian_vector(&mut rng, n);
        let q = fstar_point(alg, &g, &w, sampling::gaussian_vector(&mut rng, m), sampling::uniform(&mut rng, 0.5, 2.0))?;
        let moved = left_translate(alg, &p, &q.to_affine());
        fstar_res.push(scaled_residual(g.translated(alg, &p).membership_residual(alg, &moved), &moved));
    }
    out.push(CheckResult::upper("translation.focal_fx0", &fx0_res, opts.exact(1e-10)));
    out.push(CheckResult::upper("translation.focal_fstar", &fstar_res, opts.exact(1e-10)));
    Ok(out)
}

/// Total geodesy of `F_{x₀}` at `Υ(V̄)` and of `F_⊛`, compared with the
/// J²-flag, and constancy of Kähler angles.
fn total_geodesy(alg: &DamekRicciAlgebra, rng: &mut Rng) -> Result<Vec<CheckResult>> {
    let (n, m) = (alg.n(), alg.m());
    let x0 = random_centre(rng, alg, -2.0);
    let f = FocalVariety::fx0(x0.clone())?;
    let radius = 2.0 * 2f64.sqrt();

    let mut fx0 = (Vec::new(), Vec::new());
    let mut fstar = (Vec::new(), Vec::new());
    let mut kahler = (Vec::new(), Vec::new());
    let mut bad_dim = 0usize;
    for i in 0..GEODESY_POINTS {
        let seed = i as u64;
        let d = structured_vector(rng, alg, i);
        let d = &d * (radius * sampling::uniform(rng, 0.2, 0.9) / d.norm());
        let p = upsilon(alg, &f, &(&x0.v + d))?;
        let tg = totally_geodesic_at(alg, &f, &p, seed)?;
        if tg.flag { &mut fx0.0 } else { &mut fx0.1 }.push(tg.escape_residual);

        let v = structured_vector(rng, alg, i);
        let v = &v * (sampling::uniform(rng, 0.3, 0.9) / v.norm());
        let s = (1.0 - v.norm_squared()).sqrt() * if i % 2 == 0 { 1.0 } else { -1.0 };
        let g = FocalVariety::fstar(v.clone(), sampling::gaussian_vector(rng, n) * CENTRE_SCALE, s, sampling::uniform(rng, 0.5, 2.0))?;
        let q = fstar_point(alg, &g, &sampling::gaussian_vector(rng, n), sampling::gaussian_vector(rng, m), sampling::uniform(rng, 0.5, 2.0))?;
        let tg = totally_geodesic_at(alg, &g, &q, seed)?;
        if tg.flag { &mut fstar.0 } else { &mut fstar.1 }.push(tg.escape_residual);
        let spread = kahler_angle_spread(alg, &v, KAHLER_GRID, seed)?;
        if tg.flag { &mut kahler.0 } else { &mut kahler.1 }.push(spread);
        bad_dim += usize::from(fstar_tangent_dim(alg, &v) != n);
    }
    let counts = |pair: &(Vec<f64>, Vec<f64>)| Counts { satisfied: pair.0.len(), unsatisfied: pair.1.len(), mismatches: 0 };
    Ok(vec![
        CheckResult::upper("geodesy.fx0_true_escape", &fx0.0, 1e-8).with_counts(counts(&fx0)),
        CheckResult::lower("geodesy.fx0_false_escape", &fx0.1, ESCAPE_MIN).with_counts(counts(&fx0)),
        CheckResult::upper("geodesy.fstar_true_escape", &fstar.0, 1e-8).with_counts(counts(&fstar)),
        CheckResult::lower("geodesy.fstar_false_escape", &fstar.1, ESCAPE_MIN).with_counts(counts(&fstar)),
        CheckResult::upper("kahler.true_spread", &kahler.0, 1e-6).with_counts(counts(&kahler)),
        CheckResult::lower("kahler.false_spread", &kahler.1, SPREAD_MIN).with_counts(counts(&kahler)),
        CheckResult::upper("fstar.tangent_dim", &[bad_dim as f64], 0.0).with_samples(GEODESY_POINTS),
    ])
}

/// Minimized distance to `F_{x₀}` against the tube radius of the level.
fn focal_distance(alg: &DamekRicciAlgebra, rng: &mut Rng, tol: f64) -> Result<Vec<CheckResult>> {
    let x0 = random_centre(rng, alg, -1.0);
    let f = FocalVariety::fx0(x0.clone())?;
    let iso = IsoFn::distorted_distance(x0.clone());
    let points: Vec<Point> =
        (0..DISTANCE_POINTS).map(|_| sampling::sample_point_scaled(rng, alg, 0.3, 3.0, 1.0)).collect();
    let residuals: Vec<f64> = points
        .iter()
        .map(|x| {
            let r = tube_radius(&iso, alg.m(), alg.n(), eval_d(alg, &x0, x))?;
            match distance_to_focal(alg, &f, x) {
                Ok(d) => Ok((d - r).abs()),
                Err(Error::ConvergenceFailure { .. }) => Ok(f64::INFINITY),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    Ok(vec![CheckResult::upper("tube_radius.focal_distance", &residuals, tol)])
}
