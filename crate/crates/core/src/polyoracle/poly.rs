//! Gaussian-rational scalars and polynomials on `[0, 1]`.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;
pub type RationalComplex = Complex<BigRational>;

pub fn rational(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rc(re: Rational, im: Rational) -> RationalComplex {
    Complex::new(re, im)
}

pub fn rc_int(re: i64, im: i64) -> RationalComplex {
    Complex::new(rational(re, 1), rational(im, 1))
}

/// Exact conversion of a finite double (every finite `f64` is a dyadic rational).
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    BigRational::from_float(x)
}

pub fn rc_from_c64(z: Complex64) -> Option<RationalComplex> {
    Some(Complex::new(rational_from_f64(z.re)?, rational_from_f64(z.im)?))
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn rc_to_c64(z: &RationalComplex) -> Complex64 {
    Complex64::new(rational_to_f64(&z.re), rational_to_f64(&z.im))
}

pub fn rc_abs_l1(z: &RationalComplex) -> Rational {
    z.re.abs() + z.im.abs()
}

/// Polynomial in `x` with Gaussian-rational coefficients; `coeffs[p]` multiplies `x^p`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RationalComplexPolynomial {
    coeffs: Vec<RationalComplex>,
}

impl RationalComplexPolynomial {
    pub fn new(mut coeffs: Vec<RationalComplex>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RationalComplexPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// `x^p`.
    pub fn monomial(p: usize) -> Self {
        let mut coeffs = vec![RationalComplex::zero(); p + 1];
        coeffs[p] = RationalComplex::one();
        Self::new(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| rc_int(c, 0)).collect())
    }

    pub fn coeffs(&self) -> &[RationalComplex] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn derivative(&self, order: usize) -> Self {
        if order == 0 {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(order)
            .map(|(p, c)| c * falling_factorial(p, order))
            .collect();
        Self::new(coeffs)
    }

    /// Horner evaluation at a real rational point.
    pub fn eval(&self, x: &Rational) -> RationalComplex {
        let xc = rc(x.clone(), Rational::zero());
        self.coeffs
            .iter()
            .rev()
            .fold(RationalComplex::zero(), |acc, c| acc * &xc + c)
    }

    /// Coefficient-wise conjugate; equals `conj(y(x))` for real `x`.
    pub fn conj(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    pub fn scale(&self, k: &RationalComplex) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// `∫₀¹ y(x) dx`.
    pub fn integrate_unit(&self) -> RationalComplex {
        self.coeffs
            .iter()
            .enumerate()
            .fold(RationalComplex::zero(), |acc, (p, c)| {
                acc + c.clone() / rc(rational(p as i64 + 1, 1), Rational::zero())
            })
    }
}

/// `p!/(p-k)!`; requires `k <= p`.
pub fn falling_factorial(p: usize, k: usize) -> Rational {
    let prod = (p + 1 - k..=p).fold(BigInt::one(), |acc, f| acc * BigInt::from(f));
    Rational::from_integer(prod)
}

impl Add for &RationalComplexPolynomial {
    type Output = RationalComplexPolynomial;
    fn add(self, rhs: Self) -> RationalComplexPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = RationalComplex::zero();
        let coeffs = (0..n)
            .map(|p| self.coeffs.get(p).unwrap_or(&zero) + rhs.coeffs.get(p).unwrap_or(&zero))
            .collect();
        RationalComplexPolynomial::new(coeffs)
    }
}

impl Neg for &RationalComplexPolynomial {
    type Output = RationalComplexPolynomial;
    fn neg(self) -> RationalComplexPolynomial {
        RationalComplexPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &RationalComplexPolynomial {
    type Output = RationalComplexPolynomial;
    fn sub(self, rhs: Self) -> RationalComplexPolynomial {
        self + &(-rhs)
    }
}

impl Mul for &RationalComplexPolynomial {
    type Output = RationalComplexPolynomial;
    fn mul(self, rhs: Self) -> RationalComplexPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return RationalComplexPolynomial::zero();
        }
        let mut coeffs = vec![RationalComplex::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + a * b;
            }
        }
        RationalComplexPolynomial::new(coeffs)
    }
}
