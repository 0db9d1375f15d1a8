//! Boundary condition systems `A ŷ₀ᵀ + B ŷ₁ᵀ = 0`, their normalization to
//! minimal form, and order bookkeeping.
//!
//! Row `j` of the coefficient matrix holds `(a_{j,0..m-1} | b_{j,0..m-1})`, the
//! coefficients of `y^(k)(0)` and `y^(k)(1)` in `U_j(y)`.

use num_complex::Complex64;

use crate::error::{BcError, Result};
use crate::numerics::{check_finite, frobenius_norm, numerical_rank, singular_values, ComplexMatrix, TolerancePolicy};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryConditionSystem {
    m: usize,
    coeffs: ComplexMatrix,
}

impl BoundaryConditionSystem {
    /// Checks shape and finiteness; linear independence is checked by [`validate`](Self::validate).
    pub fn new(m: usize, coeffs: ComplexMatrix) -> Result<Self> {
        if m == 0 {
            return Err(BcError::ZeroOrder);
        }
        if coeffs.nrows() != m || coeffs.ncols() != 2 * m {
            return Err(BcError::BadShape(format!(
                "expected {}x{} coefficients for m = {m}, got {}x{}",
                m,
                2 * m,
                coeffs.nrows(),
                coeffs.ncols()
            )));
        }
        check_finite(&coeffs)?;
        Ok(BoundaryConditionSystem { m, coeffs })
    }

    pub fn from_blocks(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Self> {
        let m = a.nrows();
        if a.shape() != (m, m) || b.shape() != (m, m) {
            return Err(BcError::BadShape(format!(
                "A is {:?}, B is {:?}; both must be square of equal size",
                a.shape(),
                b.shape()
            )));
        }
        let mut coeffs = ComplexMatrix::zeros(m, 2 * m);
        coeffs.view_mut((0, 0), (m, m)).copy_from(a);
        coeffs.view_mut((0, m), (m, m)).copy_from(b);
        Self::new(m, coeffs)
    }

    /// Builds a system from real-valued rows, convenient for textbook conditions.
    pub fn from_real_rows(m: usize, rows: &[&[f64]]) -> Result<Self> {
        if rows.len() != m || rows.iter().any(|r| r.len() != 2 * m) {
            return Err(BcError::BadShape(format!("need {m} rows of length {}", 2 * m)));
        }
        let coeffs = ComplexMatrix::from_fn(m, 2 * m, |i, j| Complex64::new(rows[i][j], 0.0));
        Self::new(m, coeffs)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn coeffs(&self) -> &ComplexMatrix {
        &self.coeffs
    }

    pub fn a_block(&self) -> ComplexMatrix {
        self.coeffs.columns(0, self.m).into_owned()
    }

    pub fn b_block(&self) -> ComplexMatrix {
        self.coeffs.columns(self.m, self.m).into_owned()
    }

    pub fn row(&self, j: usize) -> Vec<Complex64> {
        self.coeffs.row(j).iter().copied().collect()
    }

    /// Confirms the rows are linearly independent (numerical rank `m`).
    pub fn validate(&self, tol: &TolerancePolicy) -> Result<()> {
        let rank = numerical_rank(&self.coeffs, tol);
        if rank < self.m {
            return Err(BcError::DependentRows { rank, expected: self.m });
        }
        Ok(())
    }

    /// The equivalent system `R · C` for an `m×m` matrix `R`.
    pub fn recombined(&self, r: &ComplexMatrix) -> Result<Self> {
        if r.shape() != (self.m, self.m) {
            return Err(BcError::DimensionMismatch(format!(
                "recombination matrix {:?} for m = {}",
                r.shape(),
                self.m
            )));
        }
        Self::new(self.m, r * &self.coeffs)
    }

    /// The same system with row `j` multiplied by `factor`.
    pub fn with_row_scaled(&self, j: usize, factor: Complex64) -> Self {
        let mut coeffs = self.coeffs.clone();
        for z in coeffs.row_mut(j).iter_mut() {
            *z *= factor;
        }
        BoundaryConditionSystem { m: self.m, coeffs }
    }
}

fn max_abs(row: &[Complex64]) -> f64 {
    row.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Order of a single condition: the largest `k` with `(a_k, b_k) ≠ (0, 0)`.
///
/// Coefficients at most `zero_tol · max|row|` count as zero.
pub fn row_order(row: &[Complex64], tol: &TolerancePolicy) -> Result<usize> {
    if row.is_empty() || !row.len().is_multiple_of(2) {
        return Err(BcError::BadShape(format!("row length {} is not 2m", row.len())));
    }
    let m = row.len() / 2;
    let scale = max_abs(row);
    if scale == 0.0 || !scale.is_finite() {
        return Err(BcError::ZeroRow);
    }
    let threshold = tol.zero_tol * scale;
    (0..m)
        .rev()
        .find(|&k| row[k].norm() > threshold || row[m + k].norm() > threshold)
        .ok_or(BcError::ZeroRow)
}

/// Minimal-form (normalized) boundary conditions.
///
/// Rows are sorted by non-increasing order; `leading[j] = (α_j, β_j)` are the
/// coefficients of `y^(k_j)(0)` and `y^(k_j)(1)` in row `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedSystem {
    base: BoundaryConditionSystem,
    orders: Vec<usize>,
    leading: Vec<(Complex64, Complex64)>,
}

impl NormalizedSystem {
    /// Accepts a system that already satisfies the normalized-form invariants.
    pub fn try_from_system(sys: &BoundaryConditionSystem, tol: &TolerancePolicy) -> Result<Self> {
        sys.validate(tol)?;
        let m = sys.m();
        let mut orders = Vec::with_capacity(m);
        let mut leading = Vec::with_capacity(m);
        for j in 0..m {
            let row = sys.row(j);
            let k = row_order(&row, tol)?;
            orders.push(k);
            leading.push((row[k], row[m + k]));
        }
        let norm = NormalizedSystem {
            base: sys.clone(),
            orders,
            leading,
        };
        norm.check_invariants(tol)?;
        Ok(norm)
    }

    pub fn base(&self) -> &BoundaryConditionSystem {
        &self.base
    }

    pub fn m(&self) -> usize {
        self.base.m
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn leading(&self) -> &[(Complex64, Complex64)] {
        &self.leading
    }

    /// `r_k`: number of conditions of order `k`, for `k = 0..m`.
    pub fn order_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.m()];
        for &k in &self.orders {
            counts[k] += 1;
        }
        counts
    }

    pub fn check_invariants(&self, tol: &TolerancePolicy) -> Result<()> {
        let m = self.m();
        if self.orders.len() != m || self.leading.len() != m {
            return Err(BcError::NotNormalized("order/leading lengths differ from m".into()));
        }
        if self.orders.windows(2).any(|w| w[0] < w[1]) {
            return Err(BcError::NotNormalized("orders are not non-increasing".into()));
        }
        if self.orders.windows(3).any(|w| w[0] <= w[2]) {
            return Err(BcError::NotNormalized("more than two conditions share an order".into()));
        }
        for (j, &(alpha, beta)) in self.leading.iter().enumerate() {
            if alpha == ZERO && beta == ZERO {
                return Err(BcError::NotNormalized(format!("row {j} has a zero leading pair")));
            }
        }
        for j in 0..m.saturating_sub(1) {
            if self.orders[j] == self.orders[j + 1] {
                let (a1, b1) = self.leading[j];
                let (a2, b2) = self.leading[j + 1];
                let det = a1 * b2 - a2 * b1;
                let scale = (a1.norm().max(b1.norm())) * (a2.norm().max(b2.norm()));
                if det.norm() <= tol.zero_tol * scale {
                    return Err(BcError::NotNormalized(format!(
                        "rows {j} and {} of order {} have dependent leading pairs",
                        j + 1,
                        self.orders[j]
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NormalizeOptions {
    /// Transform each two-row order class to leading pairs `(0,1)` / `(1,0)`,
    /// single-row classes to a unit coefficient, and clear each class's leading
    /// derivatives from all higher-order conditions.
    pub canonical: bool,
}

/// Normalizes with default options (no canonicalization).
pub fn normalize(sys: &BoundaryConditionSystem, tol: &TolerancePolicy) -> Result<NormalizedSystem> {
    normalize_with(sys, tol, NormalizeOptions::default())
}

pub fn normalize_with(
    sys: &BoundaryConditionSystem,
    tol: &TolerancePolicy,
    opts: NormalizeOptions,
) -> Result<NormalizedSystem> {
    sys.validate(tol)?;
    let m = sys.m();
    let dependent = |rank| BcError::DependentRows { rank, expected: m };

    let mut rows: Vec<Vec<Complex64>> = (0..m).map(|j| sys.row(j)).collect();
    for row in rows.iter_mut() {
        scale_to_unit(row);
    }

    // Orders only decrease, so a single descending sweep reaches the fixed point.
    let mut orders = vec![0usize; m];
    for k in (0..m).rev() {
        for (j, row) in rows.iter_mut().enumerate() {
            orders[j] = settle_order(row, tol).map_err(|_| dependent(j))?;
        }
        let class: Vec<usize> = (0..m).filter(|&j| orders[j] == k).collect();
        if class.len() < 2 {
            continue;
        }
        reduce_class(&mut rows, &class, k, m, tol);
    }
    for (j, row) in rows.iter_mut().enumerate() {
        orders[j] = settle_order(row, tol).map_err(|_| dependent(j))?;
        let k = orders[j];
        let lead = row[k].norm().max(row[m + k].norm());
        let s = 1.0 / lead;
        row.iter_mut().for_each(|z| *z *= s);
    }

    // Stable sort by non-increasing order.
    let mut idx: Vec<usize> = (0..m).collect();
    idx.sort_by(|&x, &y| orders[y].cmp(&orders[x]));
    let mut rows: Vec<Vec<Complex64>> = idx.iter().map(|&j| rows[j].clone()).collect();
    let orders: Vec<usize> = idx.iter().map(|&j| orders[j]).collect();

    if opts.canonical {
        canonicalize(&mut rows, &orders, m);
    }

    let coeffs = ComplexMatrix::from_fn(m, 2 * m, |i, j| rows[i][j]);
    let base = BoundaryConditionSystem::new(m, coeffs)?;
    base.validate(tol)?;
    let leading = (0..m).map(|j| (rows[j][orders[j]], rows[j][m + orders[j]])).collect();
    let norm = NormalizedSystem { base, orders, leading };
    norm.check_invariants(tol).map_err(|_| dependent(m - 1))?;
    Ok(norm)
}

fn scale_to_unit(row: &mut [Complex64]) {
    let s = max_abs(row);
    if s > 0.0 {
        row.iter_mut().for_each(|z| *z /= s);
    }
}

/// Computes the row order and flushes the negligible coefficients above it to zero.
fn settle_order(row: &mut [Complex64], tol: &TolerancePolicy) -> Result<usize> {
    let m = row.len() / 2;
    let k = row_order(row, tol)?;
    for i in k + 1..m {
        row[i] = ZERO;
        row[m + i] = ZERO;
    }
    Ok(k)
}

/// Pivoted elimination on the leading pairs of one order class. At most two rows
/// keep a nonzero leading pair; the others get both leading coefficients
/// cleared, which lowers their order.
fn reduce_class(rows: &mut [Vec<Complex64>], class: &[usize], k: usize, m: usize, tol: &TolerancePolicy) {
    let pos = [k, m + k];
    let mut remaining: Vec<usize> = class.to_vec();
    for _ in 0..2 {
        // pivot = largest leading entry (relative to its own row) among remaining rows
        let mut best: Option<(usize, usize, f64)> = None;
        for &j in &remaining {
            let scale = max_abs(&rows[j]);
            for (c, &p) in pos.iter().enumerate() {
                let mag = rows[j][p].norm();
                if mag > tol.zero_tol * scale && best.is_none_or(|(_, _, b)| mag > b) {
                    best = Some((j, c, mag));
                }
            }
        }
        let Some((piv, col, _)) = best else { break };
        remaining.retain(|&j| j != piv);
        let p = pos[col];
        let pivot_row = rows[piv].clone();
        for &j in &remaining {
            let f = rows[j][p] / pivot_row[p];
            if f != ZERO {
                for (z, &v) in rows[j].iter_mut().zip(&pivot_row) {
                    *z -= f * v;
                }
            }
            rows[j][p] = ZERO;
        }
        // Anything left that is negligible relative to its row counts as zero.
        for &j in &remaining {
            let scale = max_abs(&rows[j]);
            for &q in &pos {
                if rows[j][q].norm() <= tol.zero_tol * scale {
                    rows[j][q] = ZERO;
                }
            }
        }
    }
    for &j in &remaining {
        rows[j][pos[0]] = ZERO;
        rows[j][pos[1]] = ZERO;
        scale_to_unit(&mut rows[j]);
    }
}

fn canonicalize(rows: &mut [Vec<Complex64>], orders: &[usize], m: usize) {
    let mut j = 0;
    let mut classes: Vec<(usize, Vec<usize>)> = Vec::new();
    while j < rows.len() {
        let k = orders[j];
        let members: Vec<usize> = (j..rows.len()).take_while(|&i| orders[i] == k).collect();
        j += members.len();
        classes.push((k, members));
    }
    // Descending k: clearing class k only touches derivatives of index ≤ k.
    for (k, members) in &classes {
        let k = *k;
        match *members.as_slice() {
            [r] => {
                let (alpha, beta) = (rows[r][k], rows[r][m + k]);
                let pivot = if beta != ZERO { beta } else { alpha };
                rows[r].iter_mut().for_each(|z| *z /= pivot);
                let p = if beta != ZERO { m + k } else { k };
                for h in 0..r {
                    let f = rows[h][p];
                    if f != ZERO {
                        let src = rows[r].clone();
                        for (z, v) in rows[h].iter_mut().zip(&src) {
                            *z -= f * v;
                        }
                        rows[h][p] = ZERO;
                    }
                }
            }
            [r1, r2] => {
                let (a1, b1, a2, b2) = (rows[r1][k], rows[r1][m + k], rows[r2][k], rows[r2][m + k]);
                let det = a1 * b2 - a2 * b1;
                // [[0,1],[1,0]] · L⁻¹ with L = [[a1,b1],[a2,b2]]
                let t = [[-a2 / det, a1 / det], [b2 / det, -b1 / det]];
                let (s1, s2) = (rows[r1].clone(), rows[r2].clone());
                for c in 0..2 * m {
                    rows[r1][c] = t[0][0] * s1[c] + t[0][1] * s2[c];
                    rows[r2][c] = t[1][0] * s1[c] + t[1][1] * s2[c];
                }
                rows[r1][k] = ZERO;
                rows[r1][m + k] = Complex64::new(1.0, 0.0);
                rows[r2][k] = Complex64::new(1.0, 0.0);
                rows[r2][m + k] = ZERO;
                let (u1, u2) = (rows[r1].clone(), rows[r2].clone());
                for row in rows.iter_mut().take(r1) {
                    let (fa, fb) = (row[k], row[m + k]);
                    for c in 0..2 * m {
                        row[c] -= fb * u1[c] + fa * u2[c];
                    }
                    row[k] = ZERO;
                    row[m + k] = ZERO;
                }
            }
            _ => unreachable!("normalized classes have at most two rows"),
        }
    }
}

/// Orders of the normalized conditions, sorted non-increasing.
pub fn orders_multiset(sys: &BoundaryConditionSystem, tol: &TolerancePolicy) -> Result<Vec<usize>> {
    Ok(normalize(sys, tol)?.orders)
}

/// Orders read off column ranks alone, without normalizing: the number of
/// orders above `k` is the rank of the columns of derivatives of index `> k` at
/// both endpoints. Ranks use one cutoff, `rank_tol · ‖C‖_F`.
pub fn rank_profile_orders(sys: &BoundaryConditionSystem, tol: &TolerancePolicy) -> Vec<usize> {
    let m = sys.m;
    let cutoff = tol.rank_tol * frobenius_norm(&sys.coeffs);
    let above = |k: usize| -> usize {
        let cols: Vec<usize> = (k + 1..m).flat_map(|d| [d, m + d]).collect();
        if cols.is_empty() {
            return 0;
        }
        singular_values(&sys.coeffs.select_columns(&cols))
            .iter()
            .filter(|&&s| s > cutoff)
            .count()
    };
    let mut orders = Vec::with_capacity(m);
    let mut prev = m;
    for k in 0..m {
        let r = above(k).min(prev);
        orders.extend(std::iter::repeat_n(k, prev - r));
        prev = r;
    }
    orders.reverse();
    orders
}

/// Drops every coefficient below each row's order, keeping `α_j y^(k_j)(0) + β_j y^(k_j)(1)`.
pub fn truncate_leading(norm: &NormalizedSystem) -> BoundaryConditionSystem {
    let m = norm.m();
    let mut coeffs = ComplexMatrix::zeros(m, 2 * m);
    for (j, (&k, &(alpha, beta))) in norm.orders.iter().zip(&norm.leading).enumerate() {
        coeffs[(j, k)] = alpha;
        coeffs[(j, m + k)] = beta;
    }
    BoundaryConditionSystem { m, coeffs }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairingDefect {
    pub order: usize,
    pub partner_order: usize,
    /// `|α_j·conj(α_j′) − β_j·conj(β_j′)|`.
    pub defect: f64,
    /// `‖(α_j, β_j)‖·‖(α_j′, β_j′)‖`, the natural scale of `defect`.
    pub scale: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructuralReport {
    /// `r_j + r_{m-1-j}` for `j = 0..m/2`.
    pub rank_sums: Vec<usize>,
    pub pairing_defects: Vec<PairingDefect>,
}

/// Diagnostic counts and leading-coefficient pairings for even-order systems.
pub fn structural_report(norm: &NormalizedSystem) -> Result<StructuralReport> {
    let m = norm.m();
    if !m.is_multiple_of(2) {
        return Err(BcError::OddOrderUnsupported(m));
    }
    let counts = norm.order_counts();
    let half = m / 2;
    let rank_sums = (0..half).map(|j| counts[j] + counts[m - 1 - j]).collect();
    let mut pairing_defects = Vec::new();
    for j in 0..half {
        let partner = m - 1 - j;
        if counts[j] == 1 && counts[partner] == 1 {
            let row_of = |k: usize| norm.orders.iter().position(|&o| o == k).expect("count is 1");
            let (a1, b1) = norm.leading[row_of(j)];
            let (a2, b2) = norm.leading[row_of(partner)];
            let defect = (a1 * a2.conj() - b1 * b2.conj()).norm();
            let scale = (a1.norm_sqr() + b1.norm_sqr()).sqrt() * (a2.norm_sqr() + b2.norm_sqr()).sqrt();
            pairing_defects.push(PairingDefect {
                order: j,
                partner_order: partner,
                defect,
                scale,
            });
        }
    }
    Ok(StructuralReport {
        rank_sums,
        pairing_defects,
    })
}
