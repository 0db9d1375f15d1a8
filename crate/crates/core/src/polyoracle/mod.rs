//! Exact verification oracle.
//!
//! Boundary vectors with small Gaussian-rational entries are realized by their
//! Hermite interpolants, and `(L₀y, y) = ∫₀¹ (−i)^m y^(m) conj(y)` is integrated
//! exactly. Both sides of every identity are compared with zero tolerance.

mod poly;

pub use poly::*;

use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::conditions::BoundaryConditionSystem;
use crate::contraction::canonical_structure;
use crate::error::{BcError, Result};
use crate::exec::{map_indexed, Execution};
use crate::forms::build_m;
use crate::generate::item_rng;
use crate::numerics::ComplexMatrix;

/// `(y(0), …, y^(m−1)(0), y(1), …, y^(m−1)(1))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryVector {
    m: usize,
    components: Vec<RationalComplex>,
}

impl BoundaryVector {
    pub fn new(m: usize, components: Vec<RationalComplex>) -> Result<Self> {
        if m == 0 {
            return Err(BcError::ZeroOrder);
        }
        if components.len() != 2 * m {
            return Err(BcError::DimensionMismatch(format!(
                "boundary vector for m = {m} needs {} components, got {}",
                2 * m,
                components.len()
            )));
        }
        Ok(BoundaryVector { m, components })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn components(&self) -> &[RationalComplex] {
        &self.components
    }

    pub fn at_zero(&self) -> &[RationalComplex] {
        &self.components[..self.m]
    }

    pub fn at_one(&self) -> &[RationalComplex] {
        &self.components[self.m..]
    }
}

/// Unique polynomial of degree `≤ 2m−1` with the given endpoint derivatives.
pub fn hermite_interpolant(target: &BoundaryVector) -> RationalComplexPolynomial {
    let m = target.m;
    let mut coeffs: Vec<RationalComplex> = (0..m)
        .map(|k| target.at_zero()[k].clone() / real(falling_factorial(k, k)))
        .collect();
    // Derivative k at x = 1: Σ_p c_p p!/(p−k)!, unknowns c_m..c_{2m−1}.
    let mut a: Vec<Vec<RationalComplex>> = Vec::with_capacity(m);
    let mut rhs: Vec<RationalComplex> = Vec::with_capacity(m);
    for k in 0..m {
        let known = (k..m).fold(RationalComplex::zero(), |acc, p| {
            acc + &coeffs[p] * real(falling_factorial(p, k))
        });
        rhs.push(&target.at_one()[k] - known);
        a.push((m..2 * m).map(|p| real(falling_factorial(p, k))).collect());
    }
    let high = solve_exact(a, rhs).expect("confluent Hermite system is nonsingular");
    coeffs.extend(high);
    RationalComplexPolynomial::new(coeffs)
}

fn real(q: Rational) -> RationalComplex {
    rc(q, Rational::zero())
}

fn minus_i_pow(m: usize) -> RationalComplex {
    match m % 4 {
        0 => rc_int(1, 0),
        1 => rc_int(0, -1),
        2 => rc_int(-1, 0),
        _ => rc_int(0, 1),
    }
}

/// `(L₀y, y) = ∫₀¹ (−i)^m y^(m)(x) conj(y(x)) dx`, exactly.
pub fn l0_inner_product(y: &RationalComplexPolynomial, m: usize) -> RationalComplex {
    let lhs = y.derivative(m).scale(&minus_i_pow(m));
    (&lhs * &y.conj()).integrate_unit()
}

/// `Im(L₀y, y)`.
pub fn l0_imaginary_part(y: &RationalComplexPolynomial, m: usize) -> Rational {
    l0_inner_product(y, m).im
}

pub fn boundary_vector_of(y: &RationalComplexPolynomial, m: usize) -> BoundaryVector {
    let zero = Rational::zero();
    let one = Rational::one();
    let mut components: Vec<RationalComplex> = (0..m).map(|k| y.derivative(k).eval(&zero)).collect();
    components.extend((0..m).map(|k| y.derivative(k).eval(&one)));
    BoundaryVector { m, components }
}

/// `x^m (1−x)^m q(x)`: vanishes with its first `m−1` derivatives at both endpoints.
pub fn interior_perturbation(m: usize, q: &RationalComplexPolynomial) -> RationalComplexPolynomial {
    let one_minus_x = RationalComplexPolynomial::from_ints(&[1, -1]);
    let mut bump = RationalComplexPolynomial::monomial(m);
    for _ in 0..m {
        bump = &bump * &one_minus_x;
    }
    &bump * q
}

fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    rational(rng.random_range(-9..=9), rng.random_range(1..=4))
}

/// Gaussian rational with numerators in `[−9, 9]` and denominators in `1..=4`.
pub fn random_rational_complex<R: Rng>(rng: &mut R) -> RationalComplex {
    rc(random_rational(rng), random_rational(rng))
}

/// Boundary vector for sample `index` of a run seeded with `seed`.
pub fn sample_boundary_vector(m: usize, seed: u64, index: u64) -> BoundaryVector {
    let mut rng = item_rng(seed, index);
    let components = (0..2 * m).map(|_| random_rational_complex(&mut rng)).collect();
    BoundaryVector { m, components }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub m: usize,
    pub samples: usize,
    pub passed: bool,
    /// Largest `|lhs − rhs|` over the samples, as `|re| + |im|`.
    pub max_defect: Rational,
}

impl IdentityReport {
    fn from_defects(m: usize, defects: Vec<Rational>) -> Self {
        let max_defect = defects
            .iter()
            .fold(Rational::zero(), |acc, d| if *d > acc { d.clone() } else { acc });
        IdentityReport {
            m,
            samples: defects.len(),
            passed: max_defect.is_zero(),
            max_defect,
        }
    }
}

fn check_oracle_args(m: usize, samples: usize) -> Result<()> {
    if !(1..=8).contains(&m) {
        return Err(BcError::BadShape(format!("oracle order must lie in 1..=8, got {m}")));
    }
    if samples == 0 {
        return Err(BcError::BadShape("sample count must be at least 1".into()));
    }
    Ok(())
}

fn exact_matrix(mat: &ComplexMatrix) -> Vec<Vec<RationalComplex>> {
    (0..mat.nrows())
        .map(|i| {
            (0..mat.ncols())
                .map(|j| rc_from_c64(mat[(i, j)]).expect("structural matrices are finite"))
                .collect()
        })
        .collect()
}

/// `ŷ M ŷ*` for the row vector `ŷ`.
pub fn boundary_form_value(y_hat: &BoundaryVector, form: &[Vec<RationalComplex>]) -> RationalComplex {
    let c = &y_hat.components;
    let mut acc = RationalComplex::zero();
    for (i, row) in form.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            if !entry.is_zero() {
                acc += &c[i] * entry * c[j].conj();
            }
        }
    }
    acc
}

/// `2 Im(L₀y, y) = ŷ M ŷ*` on seeded random boundary vectors.
pub fn verify_boundary_form_identity(m: usize, samples: usize, seed: u64, exec: Execution) -> Result<IdentityReport> {
    check_oracle_args(m, samples)?;
    let form = exact_matrix(build_m(m)?.matrix());
    let defects = map_indexed(samples, exec, |i| {
        let y_hat = sample_boundary_vector(m, seed, i as u64);
        let y = hermite_interpolant(&y_hat);
        let lhs = real(l0_imaginary_part(&y, m) * rational(2, 1));
        rc_abs_l1(&(lhs - boundary_form_value(&boundary_vector_of(&y, m), &form)))
    });
    Ok(IdentityReport::from_defects(m, defects))
}

/// `Im⟨y^∨, y^∧⟩` from the integer-entry maps; a half-weight row contributes `1/2`
/// of its product, which is where the `1/√2` factors of both vectors meet.
pub fn canonical_form_value(y_hat: &BoundaryVector) -> Result<Rational> {
    let s = canonical_structure(y_hat.m)?;
    let p = exact_matrix(&s.p);
    let q = exact_matrix(&s.q);
    let apply = |row: &[RationalComplex]| {
        row.iter()
            .zip(&y_hat.components)
            .filter(|(e, _)| !e.is_zero())
            .fold(RationalComplex::zero(), |acc, (e, y)| acc + e * y)
    };
    let mut acc = Rational::zero();
    for k in 0..y_hat.m {
        let term = (apply(&q[k]) * apply(&p[k]).conj()).im;
        acc += if s.half_weight[k] { term / rational(2, 1) } else { term };
    }
    Ok(acc)
}

/// `Im(L₀y, y) = Im⟨y^∨, y^∧⟩` on seeded random boundary vectors.
pub fn verify_canonical_identity(m: usize, samples: usize, seed: u64, exec: Execution) -> Result<IdentityReport> {
    check_oracle_args(m, samples)?;
    let defects: Vec<Result<Rational>> = map_indexed(samples, exec, |i| {
        let y_hat = sample_boundary_vector(m, seed, i as u64);
        let y = hermite_interpolant(&y_hat);
        let diff = l0_imaginary_part(&y, m) - canonical_form_value(&boundary_vector_of(&y, m))?;
        Ok(diff.abs())
    });
    Ok(IdentityReport::from_defects(
        m,
        defects.into_iter().collect::<Result<_>>()?,
    ))
}

/// Gauss-Jordan elimination; returns the reduced rows and the pivot columns.
fn reduced_row_echelon(mut a: Vec<Vec<RationalComplex>>) -> (Vec<Vec<RationalComplex>>, Vec<usize>) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = RationalComplex::one() / a[r][c].clone();
        for e in a[r].iter_mut() {
            *e = &*e * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (e, pe) in a[i].iter_mut().zip(&pivot_row) {
                    *e = &*e - &f * pe;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

fn solve_exact(a: Vec<Vec<RationalComplex>>, b: Vec<RationalComplex>) -> Option<Vec<RationalComplex>> {
    let n = a.len();
    let augmented = a
        .into_iter()
        .zip(b)
        .map(|(mut row, rhs)| {
            row.push(rhs);
            row
        })
        .collect();
    let (reduced, pivots) = reduced_row_echelon(augmented);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(reduced.into_iter().map(|row| row[n].clone()).collect())
}

/// Exact basis of the boundary vectors satisfying `C x = 0`, with the float
/// coefficients taken at their exact binary values.
pub fn exact_nullspace(sys: &BoundaryConditionSystem) -> Result<Vec<Vec<RationalComplex>>> {
    let m = sys.m();
    let (reduced, pivots) = reduced_row_echelon(exact_matrix(sys.coeffs()));
    if pivots.len() < m {
        return Err(BcError::DegenerateSystem(format!(
            "conditions have exact rank {} < {m}",
            pivots.len()
        )));
    }
    let free: Vec<usize> = (0..2 * m).filter(|c| !pivots.contains(c)).collect();
    Ok(free
        .iter()
        .map(|&f| {
            let mut v = vec![RationalComplex::zero(); 2 * m];
            v[f] = RationalComplex::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -reduced[r][f].clone();
            }
            v
        })
        .collect())
}

/// Seeded random elements of the admissible boundary vectors of `sys`.
pub fn sample_admissible(sys: &BoundaryConditionSystem, samples: usize, seed: u64) -> Result<Vec<BoundaryVector>> {
    let basis = exact_nullspace(sys)?;
    let m = sys.m();
    Ok((0..samples as u64)
        .map(|i| {
            let mut rng = item_rng(seed, i);
            let mut components = vec![RationalComplex::zero(); 2 * m];
            for v in &basis {
                let c = random_rational_complex(&mut rng);
                for (x, e) in components.iter_mut().zip(v) {
                    *x = &*x + &c * e;
                }
            }
            BoundaryVector { m, components }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DissipativitySampleReport {
    pub samples: usize,
    pub all_nonnegative: bool,
    pub min_value: Rational,
}

/// Spot check of `Im(L₀y, y) ≥ 0` over seeded admissible functions.
pub fn sample_dissipativity(
    sys: &BoundaryConditionSystem,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<DissipativitySampleReport> {
    if samples == 0 {
        return Err(BcError::BadShape("sample count must be at least 1".into()));
    }
    let vectors = sample_admissible(sys, samples, seed)?;
    let m = sys.m();
    let values = map_indexed(vectors.len(), exec, |i| {
        l0_imaginary_part(&hermite_interpolant(&vectors[i]), m)
    });
    let min_value = values.iter().min().cloned().expect("at least one sample");
    Ok(DissipativitySampleReport {
        samples,
        all_nonnegative: !min_value.is_negative(),
        min_value,
    })
}
