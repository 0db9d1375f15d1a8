//! The boundary sesquilinear form of `l₀(y) = (-i)^m y^(m)` and the
//! dissipativity / self-adjointness verdicts built on it.
//!
//! With `(u, v) = ∫₀¹ u·conj(v)` and the row vector `ŷ = (ŷ₀, ŷ₁)` of endpoint
//! derivatives, `2·Im(L₀y, y) = ŷ M ŷ*` where `M = diag(M₀, M₁)`:
//!
//! * `m = 2n`:     `M₀ = i(-1)^n J`,     `M₁ = -i(-1)^n J`
//! * `m = 2n - 1`: `M₀ = (-1)^(n+1) K`,  `M₁ = (-1)^n K`

use num_complex::Complex64;

use crate::conditions::BoundaryConditionSystem;
use crate::error::{BcError, Result};
use crate::numerics::{
    classify_eigenvalues, frobenius_norm, hermitian_classify, hermitian_eigenvalues, hermitian_part, nullspace_basis,
    ComplexMatrix, Definiteness, TolerancePolicy,
};

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn sign(p: usize) -> f64 {
    if p.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Antidiagonal `J` for even `m`: `J[i, m+1-i] = (-1)^i` (1-based).
pub fn build_j(m: usize) -> Result<ComplexMatrix> {
    if m == 0 || !m.is_multiple_of(2) {
        return Err(BcError::OddOrder(m));
    }
    Ok(ComplexMatrix::from_fn(m, m, |i, j| {
        if i + j == m - 1 {
            real(sign(i + 1))
        } else {
            real(0.0)
        }
    }))
}

/// Antidiagonal `K` for odd `m`: `K[i, m+1-i] = (-1)^(i+1)` (1-based).
pub fn build_k(m: usize) -> Result<ComplexMatrix> {
    if m % 2 != 1 {
        return Err(BcError::EvenOrder(m));
    }
    Ok(ComplexMatrix::from_fn(m, m, |i, j| {
        if i + j == m - 1 {
            real(sign(i))
        } else {
            real(0.0)
        }
    }))
}

/// `M = diag(M₀, M₁)` with `2·Im(L₀y, y) = ŷ M ŷ*` for row vectors `ŷ`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFormMatrix {
    m: usize,
    matrix: ComplexMatrix,
}

impl BoundaryFormMatrix {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn m0(&self) -> ComplexMatrix {
        self.matrix.view((0, 0), (self.m, self.m)).into_owned()
    }

    pub fn m1(&self) -> ComplexMatrix {
        self.matrix.view((self.m, self.m), (self.m, self.m)).into_owned()
    }

    /// The same form for column vectors `x = ŷᵀ`: `ŷ M ŷ* = x* conj(M) x`.
    pub fn column_form(&self) -> ComplexMatrix {
        self.matrix.map(|z| z.conj())
    }

    /// `ŷ M ŷ*` for a boundary vector given as a slice.
    pub fn value(&self, y_hat: &[Complex64]) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, yi) in y_hat.iter().enumerate() {
            for (j, yj) in y_hat.iter().enumerate() {
                acc += yi * self.matrix[(i, j)] * yj.conj();
            }
        }
        acc.re
    }
}

pub fn build_m(m: usize) -> Result<BoundaryFormMatrix> {
    if m == 0 {
        return Err(BcError::ZeroOrder);
    }
    let (m0, m1) = if m.is_multiple_of(2) {
        let n = m / 2;
        let j = build_j(m)?;
        let c = Complex64::new(0.0, sign(n));
        (j.map(|z| z * c), j.map(|z| -z * c))
    } else {
        let n = m.div_ceil(2);
        let k = build_k(m)?;
        (k.scale(sign(n + 1)), k.scale(sign(n)))
    };
    let mut matrix = ComplexMatrix::zeros(2 * m, 2 * m);
    matrix.view_mut((0, 0), (m, m)).copy_from(&m0);
    matrix.view_mut((m, m), (m, m)).copy_from(&m1);
    Ok(BoundaryFormMatrix { m, matrix })
}

/// Gram matrix of the boundary form on the solution space `𝔑` of the conditions,
/// in an orthonormal basis of `𝔑`.
pub fn gram_on_nullspace(sys: &BoundaryConditionSystem, tol: &TolerancePolicy) -> Result<ComplexMatrix> {
    sys.validate(tol)?;
    let basis = nullspace_basis(sys.coeffs(), tol);
    if basis.ncols() != sys.m() {
        return Err(BcError::DependentRows {
            rank: 2 * sys.m() - basis.ncols(),
            expected: sys.m(),
        });
    }
    let form = build_m(sys.m())?.column_form();
    Ok(hermitian_part(&(basis.adjoint() * form * basis)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DissipativityVerdict {
    pub dissipative: bool,
    pub selfadjoint: bool,
    pub classification: Definiteness,
    /// Eigenvalues of the null-space Gram matrix, ascending.
    pub gram_eigenvalues: Vec<f64>,
}

/// `Im(L₀y, y) ≥ 0` on the domain, decided as `G_N ⪰ 0`.
pub fn dissipativity_verdict(sys: &BoundaryConditionSystem, tol: &TolerancePolicy) -> Result<DissipativityVerdict> {
    let gram = gram_on_nullspace(sys, tol)?;
    let classification = hermitian_classify(&gram, tol)?;
    Ok(DissipativityVerdict {
        dissipative: classification.is_nonnegative(),
        selfadjoint: classification == Definiteness::Zero,
        classification,
        gram_eigenvalues: hermitian_eigenvalues(&gram),
    })
}

/// `G_L = conj(A) M₀ Aᵀ + conj(B) M₁ Bᵀ`: the boundary form on the span of the
/// conjugated coefficient rows. Dissipative systems have `G_L ⪯ 0`.
pub fn dual_gram(sys: &BoundaryConditionSystem) -> Result<ComplexMatrix> {
    let form = build_m(sys.m())?;
    let (a, b) = (sys.a_block(), sys.b_block());
    let g = a.map(|z| z.conj()) * form.m0() * a.transpose() + b.map(|z| z.conj()) * form.m1() * b.transpose();
    Ok(hermitian_part(&g))
}

/// Definiteness class of `G_L`, with the threshold relative to `max(1, ‖G_L‖_F)`.
pub fn dual_classification(sys: &BoundaryConditionSystem, tol: &TolerancePolicy) -> Result<Definiteness> {
    let g = dual_gram(sys)?;
    let threshold = tol.definiteness_tol * frobenius_norm(&g).max(1.0);
    Ok(classify_eigenvalues(&hermitian_eigenvalues(&g), threshold))
}

/// The form vanishes identically on `𝔑`.
pub fn selfadjoint_verdict(sys: &BoundaryConditionSystem, tol: &TolerancePolicy) -> Result<bool> {
    Ok(dissipativity_verdict(sys, tol)?.selfadjoint)
}
