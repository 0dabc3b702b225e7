//! Generator matrices of the irreducible Clifford modules.
//!
//! For `m ≤ 7` the modules are realized on ℂ, ℍ or 𝕆 with `J_z` acting by
//! left (or, for the second module when `m ≡ 3 mod 4`, right)
//! multiplication by imaginary units. Larger `m` use the period-8 step
//! `Cl_{m+8} ≅ Cl_m ⊗ Cl_8`, realized as `J_α ⊗ Γ` together with `1 ⊗ K_a`,
//! where `K_1..K_8` generate the 16-dimensional `Cl_8` module and `Γ` is
//! their volume element.

use super::IrrepKind;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Cayley–Dickson triples: `e_a e_b = e_c` (cyclically), `e_b e_a = -e_c`.
const FANO_TRIPLES: [(usize, usize, usize); 7] =
    [(1, 2, 3), (1, 4, 5), (1, 7, 6), (2, 4, 6), (2, 5, 7), (3, 4, 7), (3, 6, 5)];

/// Product of octonion basis units: `e_a e_b = sign · e_c`.
fn unit_product(a: usize, b: usize) -> (f64, usize) {
    if a == 0 {
        return (1.0, b);
    }
    if b == 0 {
        return (1.0, a);
    }
    if a == b {
        return (-1.0, 0);
    }
    for &(p, q, r) in &FANO_TRIPLES {
        for (x, y, z) in [(p, q, r), (q, r, p), (r, p, q)] {
            if a == x && b == y {
                return (1.0, z);
            }
            if a == y && b == x {
                return (-1.0, z);
            }
        }
    }
    unreachable!("every pair of distinct imaginary units lies on a Fano line")
}

/// Left (`left = true`) or right multiplication by `e_unit` on the
/// `dim`-dimensional subalgebra spanned by `e_0..e_{dim-1}`
/// (`dim ∈ {2, 4, 8}` gives ℂ, ℍ, 𝕆).
fn multiplication_matrix(dim: usize, unit: usize, left: bool) -> Matrix {
    let mut mat = Matrix::zeros(dim, dim);
    for b in 0..dim {
        let (sign, c) = if left { unit_product(unit, b) } else { unit_product(b, unit) };
        debug_assert!(c < dim, "subalgebra not closed");
        mat[(c, b)] = sign;
    }
    mat
}

/// Dimension `n₀(m)` of an irreducible module of `Cl(𝔷)` with `dim 𝔷 = m`.
pub fn irreducible_dim(m: usize) -> usize {
    let p = m / 8;
    let exponent = 4 * p
        + match m % 8 {
            0 => 0,
            1 => 1,
            2 | 3 => 2,
            _ => 3,
        };
    1usize << exponent
}

/// Generators `K_1..K_8` of the 16-dimensional `Cl_8` module.
fn cl8_generators() -> Vec<Matrix> {
    let mut gens = Vec::with_capacity(8);
    for a in 1..=7 {
        let l = multiplication_matrix(8, a, true);
        let mut k = Matrix::zeros(16, 16);
        k.view_mut((0, 8), (8, 8)).copy_from(&l);
        k.view_mut((8, 0), (8, 8)).copy_from(&l);
        gens.push(k);
    }
    let mut k8 = Matrix::zeros(16, 16);
    k8.view_mut((0, 8), (8, 8)).copy_from(&(-Matrix::identity(8, 8)));
    k8.view_mut((8, 0), (8, 8)).copy_from(&Matrix::identity(8, 8));
    gens.push(k8);
    gens
}

/// Largest irreducible dimension we are willing to materialize densely.
const MAX_IRREDUCIBLE_DIM: usize = 1 << 12;

/// Generators of the irreducible module of the given kind.
pub fn irreducible_generators(m: usize, kind: IrrepKind) -> Result<Vec<Matrix>> {
    check_kind(m, kind)?;
    if irreducible_dim(m) > MAX_IRREDUCIBLE_DIM {
        return Err(Error::UnsupportedDimension {
            m,
            reason: format!("irreducible module has dimension {}", irreducible_dim(m)),
        });
    }
    let left = kind != IrrepKind::D2;
    let gens = match m {
        0 => Vec::new(),
        1 => vec![multiplication_matrix(2, 1, true)],
        2 => (1..=2).map(|a| multiplication_matrix(4, a, true)).collect(),
        3 => (1..=3).map(|a| multiplication_matrix(4, a, left)).collect(),
        4..=6 => (1..=m).map(|a| multiplication_matrix(8, a, true)).collect(),
        7 => (1..=7).map(|a| multiplication_matrix(8, a, left)).collect(),
        _ => {
            let base = irreducible_generators(m - 8, kind)?;
            let base_dim = irreducible_dim(m - 8);
            let ks = cl8_generators();
            let volume = ks.iter().skip(1).fold(ks[0].clone(), |acc, k| acc * k);
            let mut gens: Vec<Matrix> = base.iter().map(|j| j.kronecker(&volume)).collect();
            let id = Matrix::identity(base_dim, base_dim);
            gens.extend(ks.iter().map(|k| id.kronecker(k)));
            gens
        }
    };
    Ok(gens)
}

/// Tag `d` for `m ≢ 3 (mod 4)`, tags `d1`/`d2` otherwise.
pub fn check_kind(m: usize, kind: IrrepKind) -> Result<()> {
    let two_kinds = m % 4 == 3;
    let ok = match kind {
        IrrepKind::D => !two_kinds,
        IrrepKind::D1 | IrrepKind::D2 => two_kinds,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "module tag {kind:?} is not valid for m = {m} (use {})",
            if two_kinds { "d1/d2" } else { "d" }
        )))
    }
}
