//! Small dense complex linear algebra with explicit tolerance policies.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{BcError, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

/// Relative tolerances used by every numerical decision in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerancePolicy {
    /// Eigenvalue threshold for definiteness, relative to `max(1, ‖G‖_F)`.
    pub definiteness_tol: f64,
    /// Singular-value threshold for rank decisions, relative to `‖C‖_F`.
    pub rank_tol: f64,
    /// Threshold below which a coefficient counts as zero, relative to a local scale.
    pub zero_tol: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            definiteness_tol: 1e-9,
            rank_tol: 1e-10,
            zero_tol: 1e-10,
        }
    }
}

impl TolerancePolicy {
    pub const MAX: f64 = 1e-2;

    pub fn new(definiteness_tol: f64, rank_tol: f64, zero_tol: f64) -> Result<Self> {
        let policy = TolerancePolicy {
            definiteness_tol,
            rank_tol,
            zero_tol,
        };
        policy.validate()?;
        Ok(policy)
    }

    /// All three tolerances set to the same value.
    pub fn uniform(tol: f64) -> Result<Self> {
        Self::new(tol, tol, tol)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("definiteness_tol", self.definiteness_tol),
            ("rank_tol", self.rank_tol),
            ("zero_tol", self.zero_tol),
        ] {
            if !(0.0..=Self::MAX).contains(&value) {
                return Err(BcError::InvalidTolerance { name, value });
            }
        }
        Ok(())
    }
}

/// Sign class of a Hermitian form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Definiteness {
    Zero,
    Psd,
    Nsd,
    Indefinite,
}

impl Definiteness {
    /// `≥ 0` in the non-strict sense (PSD or identically zero).
    pub fn is_nonnegative(self) -> bool {
        matches!(self, Definiteness::Psd | Definiteness::Zero)
    }

    pub fn is_nonpositive(self) -> bool {
        matches!(self, Definiteness::Nsd | Definiteness::Zero)
    }

    pub fn negated(self) -> Self {
        match self {
            Definiteness::Psd => Definiteness::Nsd,
            Definiteness::Nsd => Definiteness::Psd,
            other => other,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Definiteness::Zero => "ZERO",
            Definiteness::Psd => "PSD",
            Definiteness::Nsd => "NSD",
            Definiteness::Indefinite => "INDEFINITE",
        }
    }
}

pub fn frobenius_norm(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn check_finite(m: &ComplexMatrix) -> Result<()> {
    for (idx, z) in m.iter().enumerate() {
        if !z.re.is_finite() || !z.im.is_finite() {
            // column-major storage
            let (row, col) = (idx % m.nrows(), idx / m.nrows());
            return Err(BcError::NonFinite { row, col });
        }
    }
    Ok(())
}

/// Hermitian part `(G + G*) / 2`.
pub fn hermitian_part(g: &ComplexMatrix) -> ComplexMatrix {
    (g + g.adjoint()).scale(0.5)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(g: &ComplexMatrix) -> Vec<f64> {
    if g.is_empty() {
        return Vec::new();
    }
    let eig = SymmetricEigen::new(hermitian_part(g));
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// Classifies the Hermitian matrix `G` by the signs of its eigenvalues.
///
/// Eigenvalues with magnitude at most `definiteness_tol · max(1, ‖G‖_F)` count
/// as zero. A `0×0` matrix (the form on a trivial subspace) is `Zero`.
pub fn hermitian_classify(g: &ComplexMatrix, tol: &TolerancePolicy) -> Result<Definiteness> {
    if g.nrows() != g.ncols() {
        return Err(BcError::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            g.nrows(),
            g.ncols()
        )));
    }
    let scale = frobenius_norm(g).max(1.0);
    let asymmetry = frobenius_norm(&(g - g.adjoint()));
    let allowed = tol.zero_tol * scale;
    if asymmetry > allowed {
        return Err(BcError::NonHermitianInput { asymmetry, allowed });
    }
    Ok(classify_eigenvalues(
        &hermitian_eigenvalues(g),
        tol.definiteness_tol * scale,
    ))
}

pub(crate) fn classify_eigenvalues(eigenvalues: &[f64], threshold: f64) -> Definiteness {
    let has_pos = eigenvalues.iter().any(|&l| l > threshold);
    let has_neg = eigenvalues.iter().any(|&l| l < -threshold);
    match (has_pos, has_neg) {
        (false, false) => Definiteness::Zero,
        (true, false) => Definiteness::Psd,
        (false, true) => Definiteness::Nsd,
        (true, true) => Definiteness::Indefinite,
    }
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Number of singular values above `rank_tol · ‖C‖_F`.
pub fn numerical_rank(c: &ComplexMatrix, tol: &TolerancePolicy) -> usize {
    let threshold = tol.rank_tol * frobenius_norm(c);
    singular_values(c).into_iter().filter(|&s| s > threshold).count()
}

/// Orthonormal basis (as columns) of `{x : Cx = 0}`.
pub fn nullspace_basis(c: &ComplexMatrix, tol: &TolerancePolicy) -> ComplexMatrix {
    let (rows, cols) = c.shape();
    let threshold = tol.rank_tol * frobenius_norm(c);
    // Pad to at least square so the SVD exposes a full set of right singular vectors.
    let padded = if rows < cols {
        let mut p = ComplexMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(c);
        p
    } else {
        c.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let null: Vec<DVector<Complex64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= threshold)
        .map(|(i, _)| v_t.row(i).adjoint())
        .collect();
    if null.is_empty() {
        return ComplexMatrix::zeros(cols, 0);
    }
    let basis = ComplexMatrix::from_columns(&null);
    // Re-orthonormalize; the SVD columns are orthonormal up to rounding.
    orthonormalize(&basis)
}

/// Orthonormal basis of the column span of `m` (thin QR, full column rank assumed).
pub fn orthonormalize(m: &ComplexMatrix) -> ComplexMatrix {
    if m.ncols() == 0 {
        return m.clone();
    }
    m.clone().qr().q()
}

/// Orthonormal basis (as columns) of the span of the columns of `cᵀ`; two
/// systems have the same row span iff these spans coincide.
pub fn row_space_basis(c: &ComplexMatrix, tol: &TolerancePolicy) -> ComplexMatrix {
    let t = c.transpose();
    let rank = numerical_rank(&t, tol);
    let svd = t.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let cols: Vec<DVector<Complex64>> = order[..rank].iter().map(|&i| u.column(i).into_owned()).collect();
    if cols.is_empty() {
        return ComplexMatrix::zeros(c.ncols(), 0);
    }
    ComplexMatrix::from_columns(&cols)
}

/// Sine of the largest principal angle between the column spans of two
/// orthonormal bases with equal column counts.
pub fn subspace_distance(b1: &ComplexMatrix, b2: &ComplexMatrix) -> Result<f64> {
    if b1.nrows() != b2.nrows() || b1.ncols() != b2.ncols() {
        return Err(BcError::DimensionMismatch(format!(
            "bases {}x{} and {}x{}",
            b1.nrows(),
            b1.ncols(),
            b2.nrows(),
            b2.ncols()
        )));
    }
    if b1.ncols() == 0 {
        return Ok(0.0);
    }
    // ‖(I − B1 B1*) B2‖₂ is the sine of the largest angle; it stays accurate for tiny angles.
    let residual = b2 - b1 * (b1.adjoint() * b2);
    Ok(operator_norm(&residual).min(1.0))
}

/// Largest singular value.
pub fn operator_norm(v: &ComplexMatrix) -> f64 {
    singular_values(v).first().copied().unwrap_or(0.0)
}

/// Moore-Penrose pseudo-inverse; singular values at most `rank_tol · σ_max` are dropped.
pub fn pseudo_inverse(m: &ComplexMatrix, tol: &TolerancePolicy) -> (ComplexMatrix, usize) {
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let threshold = tol.rank_tol * smax;
    let u = svd.u.as_ref().expect("u requested");
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    let mut pinv = ComplexMatrix::zeros(m.ncols(), m.nrows());
    let mut rank = 0;
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > threshold && s > 0.0 {
            rank += 1;
            pinv += (v_t.row(i).adjoint() * u.column(i).adjoint()).scale(1.0 / s);
        }
    }
    (pinv, rank)
}

/// Recovers the coefficients `c_e` of `f(s) = Σ c_e s^e` over the given exponent
/// support from `|support|` samples. Coefficients are returned in support order.
pub fn laurent_fit(support: &[i32], sample_points: &[Complex64], values: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = support.len();
    if sample_points.len() != n || values.len() != n {
        return Err(BcError::DimensionMismatch(format!(
            "support {n}, points {}, values {}",
            sample_points.len(),
            values.len()
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if sample_points.iter().any(|s| s.norm() == 0.0) {
        return Err(BcError::SingularSystem);
    }
    let vander = ComplexMatrix::from_fn(n, n, |i, j| sample_points[i].powi(support[j]));
    let rhs = DVector::from_column_slice(values);
    let sv = singular_values(&vander);
    if sv[n - 1] <= 1e-13 * sv[0] {
        return Err(BcError::SingularSystem);
    }
    let coeffs = vander.clone().lu().solve(&rhs).ok_or(BcError::SingularSystem)?;
    let residual = (&vander * &coeffs - &rhs).norm();
    if residual > 1e-10 * rhs.norm().max(f64::MIN_POSITIVE) && residual > 0.0 {
        return Err(BcError::SingularSystem);
    }
    Ok(coeffs.iter().copied().collect())
}
