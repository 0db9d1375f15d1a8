//! Seeded random boundary-condition systems and contractions for sweeps.
//!
//! Every item `i` of a sweep draws from its own ChaCha stream
//! (`seed`, stream `i`), so batches are reproducible under any execution order.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conditions::BoundaryConditionSystem;
use crate::contraction::{conditions_from_cayley, from_contraction, ContractionParametrization};
use crate::error::Result;
use crate::numerics::{operator_norm, singular_values, ComplexMatrix};

/// Independent generator for item `index` of a sweep seeded with `seed`.
pub fn item_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| random_complex(rng))
}

/// Random matrix with condition number below `1e4`.
pub fn random_invertible<R: Rng>(m: usize, rng: &mut R) -> ComplexMatrix {
    loop {
        let r = random_matrix(m, m, rng);
        let sv = singular_values(&r);
        if sv[m - 1] > 1e-4 * sv[0] {
            return r;
        }
    }
}

pub fn random_unitary<R: Rng>(m: usize, rng: &mut R) -> ComplexMatrix {
    random_invertible(m, rng).qr().q()
}

/// Generic system with random dense coefficients (rarely dissipative).
pub fn random_system<R: Rng>(m: usize, rng: &mut R) -> BoundaryConditionSystem {
    loop {
        let sys = BoundaryConditionSystem::new(m, random_matrix(m, 2 * m, rng)).expect("shape is m x 2m");
        let sv = singular_values(sys.coeffs());
        if sv[m - 1] > 1e-4 * sv[0] {
            return sys;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractionKind {
    /// Dense matrix scaled to a random norm in `(0, 1]`.
    Strict,
    /// Random unitary (self-adjoint conditions).
    Unitary,
    /// `U D U*` with `D` mixing exact `±1` eigenvalues and points of the unit disc;
    /// produces conditions whose orders drop below the generic pattern.
    Structured,
}

pub fn random_contraction_of<R: Rng>(m: usize, kind: ContractionKind, rng: &mut R) -> ContractionParametrization {
    let v = match kind {
        ContractionKind::Strict => {
            let a = random_matrix(m, m, rng);
            let target = rng.random_range(0.05..=1.0);
            a.scale(target / operator_norm(&a))
        }
        ContractionKind::Unitary => random_unitary(m, rng),
        ContractionKind::Structured => {
            let u = random_unitary(m, rng);
            let d: Vec<Complex64> = (0..m)
                .map(|_| match rng.random_range(0..3) {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(-1.0, 0.0),
                    _ => {
                        Complex64::from_polar(rng.random_range(0.0..1.0), rng.random_range(0.0..std::f64::consts::TAU))
                    }
                })
                .collect();
            let diag = ComplexMatrix::from_fn(m, m, |i, j| if i == j { d[i] } else { Complex64::new(0.0, 0.0) });
            &u * diag * u.adjoint()
        }
    };
    // Rounding can push a unit-norm matrix a few ulps past 1.
    let norm = operator_norm(&v);
    let v = if norm > 1.0 { v.scale(1.0 / norm) } else { v };
    ContractionParametrization::new(v).expect("norm is at most 1")
}

pub fn random_contraction<R: Rng>(m: usize, rng: &mut R) -> ContractionParametrization {
    let kind = match rng.random_range(0..3) {
        0 => ContractionKind::Strict,
        1 => ContractionKind::Unitary,
        _ => ContractionKind::Structured,
    };
    random_contraction_of(m, kind, rng)
}

/// A dissipative system: `from_contraction` of a random contraction, followed by
/// a random invertible recombination of its rows.
pub fn random_dissipative_system<R: Rng>(m: usize, rng: &mut R) -> Result<BoundaryConditionSystem> {
    let v = random_contraction(m, rng);
    let sys = from_contraction(&v)?;
    sys.recombined(&random_invertible(m, rng))
}

/// Non-dissipative system: the Cayley correspondence applied to a matrix of norm in `(1.05, 3]`.
pub fn random_expansive_system<R: Rng>(m: usize, rng: &mut R) -> Result<BoundaryConditionSystem> {
    let a = random_matrix(m, m, rng);
    let v = a.scale(rng.random_range(1.05..=3.0) / operator_norm(&a));
    conditions_from_cayley(&v)?.recombined(&random_invertible(m, rng))
}

/// One third each of generic, dissipative, and expansive systems.
pub fn random_mixed_system<R: Rng>(m: usize, rng: &mut R) -> Result<BoundaryConditionSystem> {
    match rng.random_range(0..3) {
        0 => Ok(random_system(m, rng)),
        1 => random_dissipative_system(m, rng),
        _ => random_expansive_system(m, rng),
    }
}
