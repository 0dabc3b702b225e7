//! Clifford-module data and the two-step nilpotent Lie algebra `𝔫 = 𝔳 ⊕ 𝔷`.
//!
//! The bracket of `U, V ∈ 𝔳` is defined by `⟨[U,V], Z⟩ = ⟨J_Z U, V⟩`, and the
//! structure constants are `C_{ijα} = ⟨J_α E_i, E_j⟩`.

mod tables;

pub use tables::{check_kind, irreducible_dim, irreducible_generators};

use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector, RANK_TOL};
use crate::sampling::{self, Rng};

/// Isomorphism type of an irreducible Clifford module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IrrepKind {
    /// The unique irreducible module when `m ≢ 3 (mod 4)`.
    D,
    /// First of the two irreducible modules when `m ≡ 3 (mod 4)` (left multiplication).
    D1,
    /// Second irreducible module when `m ≡ 3 (mod 4)` (right multiplication).
    D2,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModuleSpec {
    /// Direct sum of irreducible modules, given as `(kind, multiplicity)`.
    Tagged(Vec<(IrrepKind, usize)>),
    /// Explicit generator matrices `J_1..J_m`, all `n × n`.
    Explicit(Vec<Matrix>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliffordSpec {
    pub m: usize,
    pub modules: ModuleSpec,
}

impl CliffordSpec {
    pub fn tagged(m: usize, modules: &[(IrrepKind, usize)]) -> Self {
        Self { m, modules: ModuleSpec::Tagged(modules.to_vec()) }
    }

    pub fn explicit(generators: Vec<Matrix>) -> Self {
        Self { m: generators.len(), modules: ModuleSpec::Explicit(generators) }
    }

    /// Irreducible summands in order, or `None` for explicit generators.
    pub fn blocks(&self) -> Option<Vec<Block>> {
        let ModuleSpec::Tagged(mods) = &self.modules else {
            return None;
        };
        let dim = irreducible_dim(self.m);
        let mut offset = 0;
        let mut blocks = Vec::new();
        for &(kind, mult) in mods {
            for _ in 0..mult {
                blocks.push(Block { kind, offset, dim });
                offset += dim;
            }
        }
        Some(blocks)
    }
}

/// One irreducible summand of a block-diagonal module.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Block {
    pub kind: IrrepKind,
    pub offset: usize,
    pub dim: usize,
}

/// The Lie algebra data of a Damek–Ricci space.
#[derive(Debug, Clone)]
pub struct DamekRicciAlgebra {
    m: usize,
    n: usize,
    generators: Vec<Matrix>,
    /// `C_{ijα}` at index `(i * n + j) * m + α`.
    structure: Vec<f64>,
    blocks: Option<Vec<Block>>,
}

/// Tolerance for the Clifford relations of explicit generators.
pub const CLIFFORD_TOL: f64 = 1e-12;

/// Build the algebra of a Clifford-module specification.
pub fn build_algebra(spec: &CliffordSpec) -> Result<DamekRicciAlgebra> {
    match &spec.modules {
        ModuleSpec::Tagged(mods) => {
            let irreps: Vec<(IrrepKind, usize, Vec<Matrix>)> = mods
                .iter()
                .map(|&(kind, mult)| Ok((kind, mult, irreducible_generators(spec.m, kind)?)))
                .collect::<Result<_>>()?;
            let n0 = irreducible_dim(spec.m);
            let n: usize = mods.iter().map(|&(_, mult)| mult).sum::<usize>() * n0;
            let mut generators = vec![Matrix::zeros(n, n); spec.m];
            let mut offset = 0;
            for (_, mult, gens) in &irreps {
                for _ in 0..*mult {
                    for (big, small) in generators.iter_mut().zip(gens) {
                        big.view_mut((offset, offset), (n0, n0)).copy_from(small);
                    }
                    offset += n0;
                }
            }
            let mut alg = DamekRicciAlgebra::from_parts(spec.m, n, generators)?;
            alg.blocks = spec.blocks();
            Ok(alg)
        }
        ModuleSpec::Explicit(gens) => {
            if gens.len() != spec.m {
                return Err(Error::DimensionMismatch { expected: spec.m, got: gens.len() });
            }
            let alg = DamekRicciAlgebra::from_generators_unchecked(spec.m, gens.clone())?;
            let anti = anticommutation_residual(&alg.generators);
            let skew = skewness_residual(&alg.generators);
            if anti > CLIFFORD_TOL || skew > CLIFFORD_TOL {
                return Err(Error::InvalidGenerators(format!(
                    "anticommutation residual {anti:e}, skewness residual {skew:e}"
                )));
            }
            Ok(alg)
        }
    }
}

impl DamekRicciAlgebra {
    pub fn from_spec(spec: &CliffordSpec) -> Result<Self> {
        build_algebra(spec)
    }

    /// Wrap generator matrices without checking the Clifford relations.
    ///
    /// Only shapes are checked; use [`validate_clifford`] to inspect the
    /// relations themselves.
    pub fn from_generators_unchecked(m: usize, generators: Vec<Matrix>) -> Result<Self> {
        let n = generators.first().map_or(0, |g| g.nrows());
        Self::from_parts(m, n, generators)
    }

    fn from_parts(m: usize, n: usize, generators: Vec<Matrix>) -> Result<Self> {
        if generators.len() != m {
            return Err(Error::DimensionMismatch { expected: m, got: generators.len() });
        }
        for g in &generators {
            if g.nrows() != n || g.ncols() != n {
                return Err(Error::InvalidGenerators(format!(
                    "generator of shape {}x{}, expected {n}x{n}",
                    g.nrows(),
                    g.ncols()
                )));
            }
        }
        let mut structure = vec![0.0; n * n * m];
        for (alpha, g) in generators.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    structure[(i * n + j) * m + alpha] = g[(j, i)];
                }
            }
        }
        Ok(Self { m, n, generators, structure, blocks: None })
    }

    /// Dimension of the center `𝔷`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Dimension of `𝔳`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    /// Irreducible summands, if the algebra was built from module tags.
    pub fn blocks(&self) -> Option<&[Block]> {
        self.blocks.as_deref()
    }

    /// Structure constant `C_{ijα} = ⟨J_α E_i, E_j⟩` (0-based indices).
    pub fn c(&self, i: usize, j: usize, alpha: usize) -> f64 {
        self.structure[(i * self.n + j) * self.m + alpha]
    }

    fn check_v(&self, v: &Vector) -> Result<()> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: v.len() });
        }
        Ok(())
    }

    fn check_z(&self, z: &Vector) -> Result<()> {
        if z.len() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, got: z.len() });
        }
        Ok(())
    }

    /// `J_Z V = Σ_α z_α J_α V`.
    pub fn j_apply(&self, z: &Vector, v: &Vector) -> Result<Vector> {
        self.check_z(z)?;
        self.check_v(v)?;
        Ok(self.j(z, v))
    }

    /// Unchecked [`j_apply`](Self::j_apply).
    pub fn j(&self, z: &Vector, v: &Vector) -> Vector {
        let mut out = Vector::zeros(self.n);
        for (alpha, g) in self.generators.iter().enumerate() {
            if z[alpha] != 0.0 {
                out.gemv(z[alpha], g, v, 1.0);
            }
        }
        out
    }

    /// `J_α V` for the basis element `F_α`.
    pub fn j_basis(&self, alpha: usize, v: &Vector) -> Vector {
        &self.generators[alpha] * v
    }

    /// The bracket `[U, V] ∈ 𝔷`, with components `⟨J_α U, V⟩`.
    pub fn bracket_v(&self, u: &Vector, v: &Vector) -> Result<Vector> {
        self.check_v(u)?;
        self.check_v(v)?;
        Ok(self.bracket(u, v))
    }

    /// Unchecked [`bracket_v`](Self::bracket_v).
    pub fn bracket(&self, u: &Vector, v: &Vector) -> Vector {
        Vector::from_iterator(self.m, self.generators.iter().map(|g| (g * u).dot(v)))
    }

    /// Matrix with columns `J_1 v, …, J_m v`.
    pub fn j_orbit_matrix(&self, v: &Vector) -> Matrix {
        let cols: Vec<Vector> = self.generators.iter().map(|g| g * v).collect();
        if cols.is_empty() {
            Matrix::zeros(self.n, 0)
        } else {
            Matrix::from_columns(&cols)
        }
    }

    /// Orthonormal basis of `J_𝔷 v`.
    pub fn j_span_basis(&self, v: &Vector) -> Matrix {
        linalg::orthonormal_basis(&self.j_orbit_matrix(v), RANK_TOL * v.norm().max(f64::MIN_POSITIVE))
    }

    /// Orthonormal basis of `ℝv ⊕ J_𝔷 v`.
    pub fn clifford_span_basis(&self, v: &Vector) -> Matrix {
        let mut cols = vec![v.clone()];
        cols.extend(self.generators.iter().map(|g| g * v));
        linalg::orthonormal_basis(&Matrix::from_columns(&cols), RANK_TOL * v.norm().max(f64::MIN_POSITIVE))
    }

    /// Orthogonal projection `P_V` onto `J_𝔷 V`.
    pub fn project_onto_j_span(&self, v: &Vector, w: &Vector) -> Vector {
        if v.norm() == 0.0 {
            return Vector::zeros(self.n);
        }
        linalg::project(&self.j_span_basis(v), w)
    }
}

/// Orthogonal decomposition `𝔳 = ℝU ⊕ (ker_𝔳(ad U) ∩ U^⊥) ⊕ J_𝔷 U`.
#[derive(Debug, Clone)]
pub struct VDecomposition {
    pub line: Matrix,
    pub kernel_perp: Matrix,
    pub j_span: Matrix,
}

impl VDecomposition {
    /// Largest inner product between basis vectors of different parts.
    pub fn orthogonality_residual(&self) -> f64 {
        let pairs = [(&self.line, &self.kernel_perp), (&self.line, &self.j_span), (&self.kernel_perp, &self.j_span)];
        pairs
            .iter()
            .filter(|(a, b)| a.ncols() > 0 && b.ncols() > 0)
            .map(|(a, b)| linalg::max_abs(&(a.transpose() * *b)))
            .fold(0.0, f64::max)
    }

    pub fn total_dim(&self) -> usize {
        self.line.ncols() + self.kernel_perp.ncols() + self.j_span.ncols()
    }
}

/// Decompose `𝔳` relative to `u ≠ 0`; ranks use the singular-value threshold `1e-8`.
pub fn decompose_v(alg: &DamekRicciAlgebra, u: &Vector) -> Result<VDecomposition> {
    alg.check_v(u)?;
    let norm = u.norm();
    if norm == 0.0 {
        return Err(Error::InvalidInput("decomposition requires U ≠ 0".into()));
    }
    let ad = alg.j_orbit_matrix(u).transpose();
    // ker(ad U) ∩ U^⊥: null space of the bracket rows stacked with U^T.
    let mut constraints = Matrix::zeros(alg.m() + 1, alg.n());
    constraints.view_mut((0, 0), (alg.m(), alg.n())).copy_from(&ad);
    constraints.row_mut(alg.m()).copy_from(&u.transpose());
    let kernel_perp = linalg::null_space(&(constraints / norm), RANK_TOL);
    Ok(VDecomposition {
        line: Matrix::from_columns(&[u / norm]),
        kernel_perp,
        j_span: alg.j_span_basis(u),
    })
}

/// A named maximum residual.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedResidual {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub residuals: Vec<NamedResidual>,
    pub samples: usize,
}

impl ValidationReport {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.residuals.iter().find(|r| r.name == name).map(|r| r.value)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.value).fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.residuals.iter().all(|r| r.value <= tol)
    }
}

fn anticommutation_residual(gens: &[Matrix]) -> f64 {
    let mut worst = 0.0_f64;
    for (a, ja) in gens.iter().enumerate() {
        for (b, jb) in gens.iter().enumerate().skip(a) {
            let mut sum = ja * jb + jb * ja;
            if a == b {
                sum += Matrix::identity(ja.nrows(), ja.ncols()) * 2.0;
            }
            worst = worst.max(linalg::max_abs(&sum));
        }
    }
    worst
}

fn skewness_residual(gens: &[Matrix]) -> f64 {
    gens.iter().map(|j| linalg::max_abs(&(j + j.transpose()))).fold(0.0, f64::max)
}

/// Residuals of the Clifford relations and derived identities, with the
/// random identities checked on 1000 samples from seed 0.
pub fn validate_clifford(alg: &DamekRicciAlgebra) -> ValidationReport {
    validate_clifford_with(alg, 1000, &mut sampling::rng(0))
}

pub fn validate_clifford_with(alg: &DamekRicciAlgebra, samples: usize, rng: &mut Rng) -> ValidationReport {
    let (n, m) = (alg.n(), alg.m());
    let gens = alg.generators();
    let mut out = Vec::new();
    let mut push = |name: &str, value: f64| out.push(NamedResidual { name: name.to_string(), value });

    push("anticommutation", anticommutation_residual(gens));
    push("skewness", skewness_residual(gens));
    push(
        "orthogonality",
        gens.iter()
            .map(|j| linalg::max_abs(&(j.transpose() * j - Matrix::identity(n, n))))
            .fold(0.0, f64::max),
    );

    let mut antisym = 0.0_f64;
    let mut square = 0.0_f64;
    let mut consistency = 0.0_f64;
    for alpha in 0..m {
        for i in 0..n {
            for j in 0..n {
                antisym = antisym.max((alg.c(i, j, alpha) + alg.c(j, i, alpha)).abs());
                let sum: f64 = (0..n).map(|k| alg.c(i, k, alpha) * alg.c(k, j, alpha)).sum();
                let delta = if i == j { 1.0 } else { 0.0 };
                square = square.max((sum + delta).abs());
            }
            let mut basis = Vector::zeros(n);
            basis[i] = 1.0;
            let image = alg.j_basis(alpha, &basis);
            let from_c = Vector::from_fn(n, |j, _| alg.c(i, j, alpha));
            consistency = consistency.max((image - from_c).amax());
        }
    }
    push("structure_antisymmetry", antisym);
    push("structure_square", square);
    push("structure_generator_consistency", consistency);

    let mut norm_identity = 0.0_f64;
    let mut bracket_definition = 0.0_f64;
    let mut jx_identity = 0.0_f64;
    let mut scalar_bracket = 0.0_f64;
    let mut bracket_projection = 0.0_f64;
    let mut projection_identity = 0.0_f64;
    for _ in 0..samples {
        // The identities are homogeneous, so unit inputs suffice and keep
        // the residuals on an absolute scale.
        let u = sampling::unit_vector(rng, n);
        let v = sampling::unit_vector(rng, n);
        let w = sampling::unit_vector(rng, n);
        let z = sampling::unit_vector(rng, m);

        let jz_u = alg.j(&z, &u);
        norm_identity = norm_identity.max((jz_u.norm() - z.norm() * u.norm()).abs());

        // ⟨[U,V], Z⟩ via structure constants against ⟨J_Z U, V⟩ via matrices.
        let mut via_c = 0.0;
        for i in 0..n {
            for j in 0..n {
                for alpha in 0..m {
                    via_c += u[i] * v[j] * alg.c(i, j, alpha) * z[alpha];
                }
            }
        }
        bracket_definition = bracket_definition.max((via_c - jz_u.dot(&v)).abs());

        // [J_X U, V] − [U, J_X V] = −2⟨U,V⟩X
        let lhs = alg.bracket(&jz_u, &v) - alg.bracket(&u, &alg.j(&z, &v));
        jx_identity = jx_identity.max((lhs + &z * (2.0 * u.dot(&v))).amax());

        // Σ_i ⟨[E_i,V],[E_i,W]⟩ = m⟨V,W⟩
        let mut sum = 0.0;
        for i in 0..n {
            let mut e = Vector::zeros(n);
            e[i] = 1.0;
            sum += alg.bracket(&e, &v).dot(&alg.bracket(&e, &w));
        }
        scalar_bracket = scalar_bracket.max((sum - m as f64 * v.dot(&w)).abs());

        // ⟨[V,V₁],[V,V₂]⟩ = ‖V‖²⟨P_V V₁, P_V V₂⟩ and J_{[V,V₁]}V = ‖V‖² P_V(V₁)
        let p_u = alg.project_onto_j_span(&v, &u);
        let p_w = alg.project_onto_j_span(&v, &w);
        let vv = v.norm_squared();
        bracket_projection =
            bracket_projection.max((alg.bracket(&v, &u).dot(&alg.bracket(&v, &w)) - vv * p_u.dot(&p_w)).abs());
        let lhs = alg.j(&alg.bracket(&v, &u), &v);
        projection_identity = projection_identity.max((lhs - p_u * vv).amax());
    }
    push("norm_identity", norm_identity);
    push("bracket_definition", bracket_definition);
    push("bracket_jx_identity", jx_identity);
    push("scalar_bracket_sum", scalar_bracket);
    push("bracket_projection", bracket_projection);
    push("projection_identity", projection_identity);

    ValidationReport { residuals: out, samples }
}

/// Seed for the random orthogonal pairs probed by [`j2_satisfied`].
const J2_PROBE_SEED: u64 = 0x4a32;
const J2_RANDOM_PAIRS: usize = 10;

/// Whether `v` satisfies the J²-condition: `J_{z₁}J_{z₂}v ∈ J_𝔷 v` for all
/// orthogonal `z₁, z₂`.
///
/// The residual is the largest norm of the component of `J_{z₁}J_{z₂}v`
/// orthogonal to `ℝv ⊕ J_𝔷v`, taken over the basis pairs `(F_α, F_β)`,
/// `α < β`, and ten random orthonormal pairs. The flag compares the
/// residual with `tol · ‖v‖`.
pub fn j2_satisfied(alg: &DamekRicciAlgebra, v: &Vector, tol: f64) -> (bool, f64) {
    let norm = v.norm();
    if norm == 0.0 {
        return (true, 0.0);
    }
    let span = alg.clifford_span_basis(v);
    let m = alg.m();
    let mut residual = 0.0_f64;
    for a in 0..m {
        for b in (a + 1)..m {
            let w = alg.j_basis(a, &alg.j_basis(b, v));
            residual = residual.max(linalg::reject(&span, &w).norm());
        }
    }
    if m >= 2 {
        let mut rng = Rng::seed_from_u64(J2_PROBE_SEED);
        for _ in 0..J2_RANDOM_PAIRS {
            let z1 = sampling::unit_vector(&mut rng, m);
            let mut z2 = sampling::gaussian_vector(&mut rng, m);
            z2 -= &z1 * z1.dot(&z2);
            let len = z2.norm();
            if len < 1e-8 {
                continue;
            }
            z2 /= len;
            let w = alg.j(&z1, &alg.j(&z2, v));
            residual = residual.max(linalg::reject(&span, &w).norm());
        }
    }
    (residual <= tol * norm, residual)
}

/// Cross-check of the J²-condition through the submodule criterion:
/// `J_𝔷(ker_𝔳(ad v) ∩ v^⊥) ⊆ ker_𝔳(ad v)`. Returns the largest normalized
/// component of `J_α w` in `J_𝔷 v` over a basis `w` of `ker_𝔳(ad v) ∩ v^⊥`.
pub fn j2_submodule_residual(alg: &DamekRicciAlgebra, v: &Vector) -> Result<f64> {
    alg.check_v(v)?;
    let norm = v.norm();
    if norm == 0.0 {
        return Ok(0.0);
    }
    let dec = decompose_v(alg, v)?;
    let ad = alg.j_orbit_matrix(v).transpose() / norm;
    let mut worst = 0.0_f64;
    for w in dec.kernel_perp.column_iter() {
        let w = w.into_owned();
        for alpha in 0..alg.m() {
            worst = worst.max((&ad * alg.j_basis(alpha, &w)).norm());
        }
    }
    Ok(worst)
}

/// Relative threshold for the zero / proportionality decisions of
/// [`predict_j2_set`].
const PREDICT_TOL: f64 = 1e-9;

/// The classification of vectors satisfying the J²-condition, applied to a
/// tagged module:
///
/// - `m ∈ {0, 1}`: every vector;
/// - `m = 3`: the isotypic vectors;
/// - `m = 7`: isotypic vectors whose irreducible components are real
///   multiples of a single vector;
/// - any other `m`: only `v = 0`.
pub fn predict_j2_set(spec: &CliffordSpec, v: &Vector) -> Result<bool> {
    let blocks = spec
        .blocks()
        .ok_or(Error::NotApplicable("prediction needs a module-tagged specification"))?;
    let n: usize = blocks.iter().map(|b| b.dim).sum();
    if v.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: v.len() });
    }
    let norm = v.norm();
    if norm == 0.0 {
        return Ok(true);
    }
    let tol = PREDICT_TOL * norm;
    let part = |b: &Block| v.rows(b.offset, b.dim).into_owned();
    match spec.m {
        0 | 1 => Ok(true),
        3 | 7 => {
            let weight = |kind| blocks.iter().filter(|b| b.kind == kind).map(|b| part(b).norm_squared()).sum::<f64>().sqrt();
            let (w1, w2) = (weight(IrrepKind::D1), weight(IrrepKind::D2));
            if w1 > tol && w2 > tol {
                return Ok(false);
            }
            if spec.m == 3 {
                return Ok(true);
            }
            let kind = if w1 > tol { IrrepKind::D1 } else { IrrepKind::D2 };
            let parts: Vec<Vector> =
                blocks.iter().filter(|b| b.kind == kind).map(part).filter(|p| p.norm() > tol).collect();
            if parts.len() <= 1 {
                return Ok(true);
            }
            let s = linalg::singular_values(&Matrix::from_columns(&parts));
            Ok(s.get(1).copied().unwrap_or(0.0) <= tol)
        }
        _ => Ok(false),
    }
}
