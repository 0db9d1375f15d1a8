//! Birkhoff regularity of normalized boundary conditions.
//!
//! With `ω_1, …, ω_m` the `m`-th roots of `−1` ordered by `Re(ω e^{iπ/2m})`,
//! the characteristic determinant of a normalized system is a Laurent
//! polynomial in `s`: `θ₀ + θ₁ s` for odd `m`, `θ₋₁/s + θ₀ + θ₁ s` for even `m`.
//! Only the leading pairs `(α_j, β_j)` and orders `k_j` enter.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::conditions::NormalizedSystem;
use crate::error::{BcError, Result};
use crate::numerics::{laurent_fit, ComplexMatrix, TolerancePolicy};

#[derive(Debug, Clone, PartialEq)]
pub struct OmegaOrder {
    pub m: usize,
    pub omegas: Vec<Complex64>,
}

/// The `m`-th roots of `−1` sorted ascending by `Re(ω · e^{iπ/2m})`.
pub fn ordered_roots(m: usize) -> Result<OmegaOrder> {
    if m == 0 {
        return Err(BcError::ZeroOrder);
    }
    let rot = Complex64::from_polar(1.0, PI / (2.0 * m as f64));
    let key = |w: &Complex64| (w * rot).re;
    let mut omegas: Vec<Complex64> = (1..=m)
        .map(|j| Complex64::from_polar(1.0, PI * (2 * j - 1) as f64 / m as f64))
        .collect();
    omegas.sort_by(|a, b| key(a).total_cmp(&key(b)));
    if omegas.windows(2).any(|w| key(&w[1]) - key(&w[0]) <= 1e-9) {
        return Err(BcError::OrderingDegeneracy);
    }
    Ok(OmegaOrder { m, omegas })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(m: usize) -> Self {
        if m.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Exponent support of the determinant in `s`.
    pub fn support(self) -> &'static [i32] {
        match self {
            Parity::Even => &[-1, 0, 1],
            Parity::Odd => &[0, 1],
        }
    }

    /// Fixed interpolation points.
    pub fn sample_points(self) -> &'static [f64] {
        match self {
            Parity::Even => &[1.0, -1.0, 2.0],
            Parity::Odd => &[1.0, 2.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularityReport {
    pub parity: Parity,
    /// Absent for odd `m`.
    pub theta_minus1: Option<Complex64>,
    pub theta_0: Complex64,
    pub theta_1: Complex64,
    /// Largest `|det|` over the interpolation points.
    pub scale: f64,
    /// Verdict; `None` until [`regularity_verdict`] sets it.
    pub regular: Option<bool>,
    /// Even `m`: both `θ₋₁` and `θ₁` nonzero. Odd `m`: same as `regular`.
    pub regular_strict: Option<bool>,
}

/// The characteristic determinant at a single `s ≠ 0`.
pub fn characteristic_determinant(norm: &NormalizedSystem, roots: &OmegaOrder, s: Complex64) -> Complex64 {
    let m = norm.m();
    let parity = Parity::of(m);
    // 0-based index of the first s-column
    let mu = match parity {
        Parity::Odd => m.div_ceil(2) - 1,
        Parity::Even => m / 2 - 1,
    };
    let det = ComplexMatrix::from_fn(m, m, |j, c| {
        let (alpha, beta) = norm.leading()[j];
        let w = roots.omegas[c].powu(norm.orders()[j] as u32);
        let coeff = if c < mu {
            alpha
        } else if c == mu {
            alpha + s * beta
        } else if parity == Parity::Even && c == mu + 1 {
            alpha + beta / s
        } else {
            beta
        };
        coeff * w
    });
    det.determinant()
}

/// Recovers the θ coefficients by evaluating the determinant at the fixed points.
pub fn theta_coefficients(norm: &NormalizedSystem, tol: &TolerancePolicy) -> Result<RegularityReport> {
    norm.check_invariants(tol)?;
    let m = norm.m();
    let parity = Parity::of(m);
    let roots = ordered_roots(m)?;
    let points: Vec<Complex64> = parity.sample_points().iter().map(|&s| Complex64::new(s, 0.0)).collect();
    let values: Vec<Complex64> = points
        .iter()
        .map(|&s| characteristic_determinant(norm, &roots, s))
        .collect();
    let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let coeffs = laurent_fit(parity.support(), &points, &values)?;
    let (theta_minus1, theta_0, theta_1) = match parity {
        Parity::Even => (Some(coeffs[0]), coeffs[1], coeffs[2]),
        Parity::Odd => (None, coeffs[0], coeffs[1]),
    };
    Ok(RegularityReport {
        parity,
        theta_minus1,
        theta_0,
        theta_1,
        scale,
        regular: None,
        regular_strict: None,
    })
}

impl RegularityReport {
    fn nonzero(&self, z: Complex64, tol: &TolerancePolicy) -> bool {
        z.norm() > tol.zero_tol * self.scale
    }

    /// Per-coefficient nonzero flags `(θ₋₁, θ₀, θ₁)` under the relative zero test.
    pub fn nonzero_flags(&self, tol: &TolerancePolicy) -> (Option<bool>, bool, bool) {
        (
            self.theta_minus1.map(|t| self.nonzero(t, tol)),
            self.nonzero(self.theta_0, tol),
            self.nonzero(self.theta_1, tol),
        )
    }
}

/// Odd `m`: regular iff `θ₀ ≠ 0` and `θ₁ ≠ 0`. Even `m`: regular iff at least one
/// of `θ₋₁`, `θ₁` is nonzero; `regular_strict` requires both.
pub fn regularity_verdict(norm: &NormalizedSystem, tol: &TolerancePolicy) -> Result<RegularityReport> {
    let mut report = theta_coefficients(norm, tol)?;
    let (minus1, zero, one) = report.nonzero_flags(tol);
    let (regular, strict) = match minus1 {
        Some(minus1) => (minus1 || one, minus1 && one),
        None => (zero && one, zero && one),
    };
    report.regular = Some(regular);
    report.regular_strict = Some(strict);
    Ok(report)
}
