//! Quasi-derivative coordinates `(y^∧, y^∨)` and the correspondence between
//! dissipative boundary conditions and contractions `V`:
//!
//! ```text
//! (V − I) y^∨ + i (V + I) y^∧ = 0,   ‖V‖ ≤ 1.
//! ```
//!
//! The maps satisfy `Im(L₀y, y) = Im⟨y^∨, y^∧⟩` with `⟨u, v⟩ = Σ u_k conj(v_k)`.
//! For odd `m` the first components of both vectors carry a factor `1/√2`
//! (they mix `y^(n-1)(0)` and `y^(n-1)(1)`) and `y^∨` is oriented so that the
//! identity holds with a plus sign.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::conditions::BoundaryConditionSystem;
use crate::error::{BcError, Result};
use crate::forms::dissipativity_verdict;
use crate::numerics::{nullspace_basis, operator_norm, pseudo_inverse, ComplexMatrix, TolerancePolicy};

/// Slack allowed on `‖V‖ ≤ 1`.
pub const CONTRACTION_SLACK: f64 = 1e-9;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Integer-entry form of the canonical maps. Row `k` of `p`/`q` is divided by
/// `√2` when `half_weight[k]` is set; the oracle uses this form to stay exact.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalStructure {
    pub m: usize,
    pub p: ComplexMatrix,
    pub q: ComplexMatrix,
    pub half_weight: Vec<bool>,
}

/// `y^∧ = P ŷᵀ`, `y^∨ = Q ŷᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalMaps {
    pub m: usize,
    pub p: ComplexMatrix,
    pub q: ComplexMatrix,
}

fn sign(p: usize) -> f64 {
    if p.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

pub fn canonical_structure(m: usize) -> Result<CanonicalStructure> {
    if m == 0 {
        return Err(BcError::ZeroOrder);
    }
    let mut p = ComplexMatrix::zeros(m, 2 * m);
    let mut q = ComplexMatrix::zeros(m, 2 * m);
    let mut half_weight = vec![false; m];
    if m.is_multiple_of(2) {
        let n = m / 2;
        // y^[n+j] = (-1)^j y^(n+j)
        for i in 0..n {
            p[(i, i)] = Complex64::new(1.0, 0.0);
            p[(n + i, m + i)] = Complex64::new(1.0, 0.0);
            let d = 2 * n - 1 - i;
            let s = sign(n - 1 - i);
            q[(i, d)] = Complex64::new(s, 0.0);
            q[(n + i, m + d)] = Complex64::new(-s, 0.0);
        }
    } else {
        let n = m.div_ceil(2);
        half_weight[0] = true;
        p[(0, n - 1)] = Complex64::new(1.0, 0.0);
        p[(0, m + n - 1)] = Complex64::new(1.0, 0.0);
        q[(0, n - 1)] = I;
        q[(0, m + n - 1)] = -I;
        // y^[n+j] = (-1)^j i y^(n+j); y^∨ carries the sign that makes Im⟨y^∨, y^∧⟩ = Im(L₀y, y).
        for i in 0..n - 1 {
            p[(1 + i, i)] = Complex64::new(1.0, 0.0);
            p[(n + i, m + i)] = Complex64::new(1.0, 0.0);
            let d = 2 * n - 2 - i;
            let quasi = I * sign(n - 2 - i);
            q[(1 + i, d)] = -quasi;
            q[(n + i, m + d)] = quasi;
        }
    }
    Ok(CanonicalStructure { m, p, q, half_weight })
}

pub fn canonical_maps(m: usize) -> Result<CanonicalMaps> {
    let s = canonical_structure(m)?;
    let (mut p, mut q) = (s.p, s.q);
    for (k, &half) in s.half_weight.iter().enumerate() {
        if half {
            p.row_mut(k).scale_mut(FRAC_1_SQRT_2);
            q.row_mut(k).scale_mut(FRAC_1_SQRT_2);
        }
    }
    Ok(CanonicalMaps { m, p, q })
}

impl CanonicalMaps {
    /// `(y^∧, y^∨)` for a column boundary vector.
    pub fn apply(&self, y_hat: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let x = nalgebra::DVector::from_column_slice(y_hat);
        let up = &self.p * &x;
        let down = &self.q * &x;
        (up.iter().copied().collect(), down.iter().copied().collect())
    }

    /// `[P; Q]`, invertible.
    pub fn stacked(&self) -> ComplexMatrix {
        let m = self.m;
        let mut s = ComplexMatrix::zeros(2 * m, 2 * m);
        s.view_mut((0, 0), (m, 2 * m)).copy_from(&self.p);
        s.view_mut((m, 0), (m, 2 * m)).copy_from(&self.q);
        s
    }
}

/// A matrix `V` with `‖V‖ ≤ 1 + CONTRACTION_SLACK`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionParametrization {
    m: usize,
    v: ComplexMatrix,
}

impl ContractionParametrization {
    pub fn new(v: ComplexMatrix) -> Result<Self> {
        let m = v.nrows();
        if m == 0 || v.ncols() != m {
            return Err(BcError::BadShape(format!(
                "V must be square and non-empty, got {:?}",
                v.shape()
            )));
        }
        crate::numerics::check_finite(&v)?;
        let norm = operator_norm(&v);
        if norm > 1.0 + CONTRACTION_SLACK {
            return Err(BcError::NotAContraction(norm));
        }
        Ok(ContractionParametrization { m, v })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn v(&self) -> &ComplexMatrix {
        &self.v
    }

    pub fn norm(&self) -> f64 {
        operator_norm(&self.v)
    }

    /// `V` with entries below `1e-12` in magnitude shown as zero.
    pub fn display_matrix(&self) -> ComplexMatrix {
        self.v.map(|z| {
            let f = |x: f64| if x.abs() < 1e-12 { 0.0 } else { x };
            Complex64::new(f(z.re), f(z.im))
        })
    }
}

/// `V = Z₋ Z₊⁺` with `Z± = (Q ± iP) N` on the solution space, without checking
/// dissipativity. `RankDeficiency` when `Z₊` is singular (no bounded `V`).
pub fn cayley_image(sys: &BoundaryConditionSystem, tol: &TolerancePolicy) -> Result<ComplexMatrix> {
    sys.validate(tol)?;
    let m = sys.m();
    let maps = canonical_maps(m)?;
    let basis = nullspace_basis(sys.coeffs(), tol);
    let plus = (&maps.q + maps.p.map(|z| z * I)) * &basis;
    let minus = (&maps.q - maps.p.map(|z| z * I)) * &basis;
    let (plus_pinv, rank) = pseudo_inverse(&plus, tol);
    if rank < m {
        return Err(BcError::RankDeficiency { rank, expected: m });
    }
    Ok(minus * plus_pinv)
}

/// The contraction `V` with `V(y^∨ + i y^∧) = y^∨ − i y^∧` on the domain.
pub fn to_contraction(sys: &BoundaryConditionSystem, tol: &TolerancePolicy) -> Result<ContractionParametrization> {
    let verdict = dissipativity_verdict(sys, tol)?;
    if !verdict.dissipative {
        return Err(BcError::NotDissipative);
    }
    ContractionParametrization::new(cayley_image(sys, tol)?).map_err(|e| match e {
        BcError::NotAContraction(_) => BcError::NotDissipative,
        other => other,
    })
}

/// The system `C = (V − I)Q + i(V + I)P`.
pub fn from_contraction(param: &ContractionParametrization) -> Result<BoundaryConditionSystem> {
    conditions_from_cayley(&param.v)
}

/// `C = (V − I)Q + i(V + I)P` for any square `V`; dissipative iff `‖V‖ ≤ 1`.
pub fn conditions_from_cayley(v: &ComplexMatrix) -> Result<BoundaryConditionSystem> {
    let m = v.nrows();
    if m == 0 || v.ncols() != m {
        return Err(BcError::BadShape(format!(
            "V must be square and non-empty, got {:?}",
            v.shape()
        )));
    }
    let maps = canonical_maps(m)?;
    let id = ComplexMatrix::identity(m, m);
    let coeffs = (v - &id) * &maps.q + (v + &id).map(|z| z * I) * &maps.p;
    BoundaryConditionSystem::new(m, coeffs)
}

/// Sine of the largest principal angle between the solution spaces of `sys`
/// and of `from_contraction(to_contraction(sys))`.
pub fn contraction_roundtrip_defect(sys: &BoundaryConditionSystem, tol: &TolerancePolicy) -> Result<f64> {
    let back = from_contraction(&to_contraction(sys, tol)?)?;
    let before = nullspace_basis(sys.coeffs(), tol);
    let after = nullspace_basis(back.coeffs(), tol);
    crate::numerics::subspace_distance(&before, &after)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::build_m;
    use crate::numerics::singular_values;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tol() -> TolerancePolicy {
        TolerancePolicy::default()
    }

    #[test]
    fn even_maps_for_m2() {
        let maps = canonical_maps(2).unwrap();
        let one = c(1.0, 0.0);
        let z = c(0.0, 0.0);
        assert_eq!(
            maps.p,
            ComplexMatrix::from_row_slice(2, 4, &[one, z, z, z, z, z, one, z])
        );
        assert_eq!(
            maps.q,
            ComplexMatrix::from_row_slice(2, 4, &[z, one, z, z, z, z, z, -one])
        );
    }

    #[test]
    fn odd_maps_for_m1_and_m3() {
        let h = FRAC_1_SQRT_2;
        let maps = canonical_maps(1).unwrap();
        assert_eq!(maps.p, ComplexMatrix::from_row_slice(1, 2, &[c(h, 0.0), c(h, 0.0)]));
        assert_eq!(maps.q, ComplexMatrix::from_row_slice(1, 2, &[c(0.0, h), c(0.0, -h)]));

        // y^∧ = ((y'(0)+y'(1))/√2, y(0), y(1)); y^∨ = (i(y'(0)-y'(1))/√2, -i y''(0), i y''(1))
        let maps = canonical_maps(3).unwrap();
        let y: Vec<Complex64> = (0..6).map(|k| c(k as f64 + 1.0, 0.5 * k as f64)).collect();
        let (up, down) = maps.apply(&y);
        let close = |a: Complex64, b: Complex64| (a - b).norm() < 1e-14;
        assert!(close(up[0], (y[1] + y[4]) * h));
        assert!(close(up[1], y[0]) && close(up[2], y[3]));
        assert!(close(down[0], I * (y[1] - y[4]) * h));
        assert!(close(down[1], -I * y[2]) && close(down[2], I * y[5]));
    }

    #[test]
    fn maps_reproduce_the_boundary_form() {
        // ‖y^∨ + i y^∧‖² − ‖y^∨ − i y^∧‖² = 4 Im⟨y^∨, y^∧⟩ = 2 ŷ M ŷ*
        for m in 1..=8 {
            let maps = canonical_maps(m).unwrap();
            let form = build_m(m).unwrap();
            let y: Vec<Complex64> = (0..2 * m)
                .map(|k| c((k as f64 * 0.7).sin(), (k as f64 * 1.3).cos()))
                .collect();
            let (up, down) = maps.apply(&y);
            let plus: f64 = up.iter().zip(&down).map(|(a, b)| (b + I * a).norm_sqr()).sum();
            let minus: f64 = up.iter().zip(&down).map(|(a, b)| (b - I * a).norm_sqr()).sum();
            let expect = 2.0 * form.value(&y);
            assert!((plus - minus - expect).abs() < 1e-12, "m = {m}");
        }
    }

    #[test]
    fn stacked_maps_are_well_conditioned() {
        for m in 1..=8 {
            let sv = singular_values(&canonical_maps(m).unwrap().stacked());
            assert!(sv[0] / sv[2 * m - 1] < 1e3, "m = {m}");
        }
    }

    fn sys(m: usize, rows: &[&[f64]]) -> BoundaryConditionSystem {
        BoundaryConditionSystem::from_real_rows(m, rows).unwrap()
    }

    #[test]
    fn to_contraction_examples() {
        let v = to_contraction(&sys(1, &[&[0.0, 1.0]]), &tol()).unwrap();
        assert!(v.v()[(0, 0)].norm() < 1e-15);

        let v = to_contraction(&sys(1, &[&[1.0, 1.0]]), &tol()).unwrap();
        assert!((v.v()[(0, 0)] - c(1.0, 0.0)).norm() < 1e-14);

        let v = to_contraction(&sys(2, &[&[1.0, 0.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0]]), &tol()).unwrap();
        let sv = singular_values(v.v());
        assert!(sv.iter().all(|s| (s - 1.0).abs() < 1e-12));

        assert_eq!(
            to_contraction(&sys(1, &[&[1.0, 0.0]]), &tol()),
            Err(BcError::NotDissipative)
        );
    }

    #[test]
    fn from_contraction_examples() {
        let zero = ContractionParametrization::new(ComplexMatrix::zeros(1, 1)).unwrap();
        let s = from_contraction(&zero).unwrap();
        // -y^∨ + i y^∧ = i√2 y(1)
        assert!(s.coeffs()[(0, 0)].norm() < 1e-15);
        assert!((s.coeffs()[(0, 1)] - c(0.0, 2.0 * FRAC_1_SQRT_2)).norm() < 1e-15);

        // V = I: y^∧ = 0 (Dirichlet-type); V = -I: y^∨ = 0 (Neumann-type)
        let id = ContractionParametrization::new(ComplexMatrix::identity(2, 2)).unwrap();
        let s = from_contraction(&id).unwrap();
        let maps = canonical_maps(2).unwrap();
        assert_eq!(s.coeffs(), &maps.p.map(|z| z * c(0.0, 2.0)));
        let neg = ContractionParametrization::new(-ComplexMatrix::identity(2, 2)).unwrap();
        assert_eq!(from_contraction(&neg).unwrap().coeffs(), &maps.q.scale(-2.0));

        let big = ComplexMatrix::identity(2, 2).scale(1.5);
        assert!(matches!(
            ContractionParametrization::new(big),
            Err(BcError::NotAContraction(_))
        ));
    }

    #[test]
    fn roundtrip_examples() {
        assert!(contraction_roundtrip_defect(&sys(1, &[&[0.0, 1.0]]), &tol()).unwrap() < 1e-12);
        let dirichlet = sys(2, &[&[1.0, 0.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0]]);
        assert!(contraction_roundtrip_defect(&dirichlet, &tol()).unwrap() < 1e-9);
        let example = sys(
            3,
            &[
                &[0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
                &[0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
                &[0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
            ],
        );
        assert!(contraction_roundtrip_defect(&example, &tol()).unwrap() < 1e-9);
    }

    #[test]
    fn display_flushes_tiny_entries() {
        let v = ContractionParametrization::new(ComplexMatrix::from_element(1, 1, c(1e-13, 0.5))).unwrap();
        assert_eq!(v.display_matrix()[(0, 0)], c(0.0, 0.5));
    }
}
