//! Dense matrices over exact rationals: Gaussian elimination, kernels,
//! characteristic polynomials and rational spectra.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{rat_to_f64, Rat};

/// Row-major dense matrix over `Rat`.
#[derive(Clone, PartialEq, Eq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl std::fmt::Debug for QMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "QMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| crate::scalar::fmt_rat(self.at(i, j)))
                .collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        QMat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        QMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &Rat) {
        let idx = i * self.cols + j;
        self.data[idx] = &self.data[idx] + v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> QMat {
        QMat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn scale(&self, c: &Rat) -> QMat {
        QMat::from_fn(self.rows, self.cols, |i, j| self.at(i, j) * c)
    }

    pub fn add(&self, other: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMat::from_fn(self.rows, self.cols, |i, j| self.at(i, j) + other.at(i, j))
    }

    pub fn sub(&self, other: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMat::from_fn(self.rows, self.cols, |i, j| self.at(i, j) - other.at(i, j))
    }

    pub fn neg(&self) -> QMat {
        QMat::from_fn(self.rows, self.cols, |i, j| -self.at(i, j).clone())
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(
            self.cols, other.rows,
            "mul shape mismatch {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = QMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        out.add_at(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &QMat) -> QMat {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> Rat {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.at(i, i).clone()).sum()
    }

    /// Exact sum of squared entries; zero iff the matrix is zero.
    pub fn frobenius_sq(&self) -> Rat {
        self.data.iter().map(|x| x * x).sum()
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| rat_to_f64(self.at(i, j)))
    }

    /// Entries flattened row-major.
    pub fn flatten(&self) -> Vec<Rat> {
        self.data.clone()
    }

    pub fn block_diag(blocks: &[QMat]) -> QMat {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = QMat::zeros(n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.at(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn pow(&self, mut k: usize) -> QMat {
        assert!(self.is_square());
        let mut acc = QMat::identity(self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            // find a nonzero pivot in this column
            let Some(p) = (row..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, row * self.cols + j);
                }
            }
            let inv = {
                let piv = self.at(row, col).clone();
                Rat::one() / piv
            };
            for j in col..self.cols {
                let v = self.at(row, j) * &inv;
                self.set(row, j, v);
            }
            for r in 0..self.rows {
                if r != row && !self.at(r, col).is_zero() {
                    let factor = self.at(r, col).clone();
                    for j in col..self.cols {
                        let v = self.at(r, j) - &factor * self.at(row, j);
                        self.set(r, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel, as column vectors of length `cols`.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Rat::zero(); self.cols];
            v[f] = Rat::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m.at(r, f).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `self * x = b` exactly. Returns `None` when inconsistent.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = QMat::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // pivot in the constants column
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug.at(r, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<QMat> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = QMat::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.at(i, j).clone()
            } else if j - n == i {
                Rat::one()
            } else {
                Rat::zero()
            }
        });
        let pivots = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some(QMat::from_fn(n, n, |i, j| aug.at(i, n + j).clone()))
    }

    /// Characteristic polynomial coefficients `c_0 + c_1 X + ... + X^n`
    /// by the Faddeev–LeVerrier recursion.
    pub fn charpoly(&self) -> Vec<Rat> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![Rat::zero(); n + 1];
        coeffs[n] = Rat::one();
        let mut m = QMat::identity(n);
        for k in 1..=n {
            m = self.mul(&m);
            let c = -m.trace() / Rat::from_integer(BigInt::from(k as i64));
            for i in 0..n {
                m.add_at(i, i, &c);
            }
            coeffs[n - k] = c;
        }
        coeffs
    }
}

/// Rank of a span of matrices, all of the same shape, by exact elimination.
pub fn span_rank(mats: &[QMat]) -> usize {
    span_basis(mats).len()
}

/// Incremental exact row reduction keeping an independent subset as a basis
/// of the span. Rows are the flattened matrices.
pub struct SpanBuilder {
    dim: usize,
    // reduced echelon rows together with their pivot column
    rows: Vec<(usize, Vec<Rat>)>,
}

impl SpanBuilder {
    pub fn new(dim: usize) -> Self {
        SpanBuilder {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [Rat]) {
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for j in 0..self.dim {
                    if !row[j].is_zero() {
                        v[j] = &v[j] - &f * &row[j];
                    }
                }
            }
        }
    }

    /// Inserts a vector; returns true if it enlarged the span.
    pub fn insert(&mut self, mut v: Vec<Rat>) -> bool {
        assert_eq!(v.len(), self.dim);
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = Rat::one() / v[p].clone();
        for x in v.iter_mut() {
            *x = &*x * &inv;
        }
        // keep earlier rows reduced against the new one
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for j in 0..self.dim {
                    if !v[j].is_zero() {
                        row[j] = &row[j] - &f * &v[j];
                    }
                }
            }
        }
        self.rows.push((p, v));
        true
    }

    /// Exact membership test against the current span.
    pub fn contains(&self, v: &[Rat]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| x.is_zero())
    }
}

/// Reduced basis of the span of the given matrices (flattened form).
pub fn span_basis(mats: &[QMat]) -> Vec<Vec<Rat>> {
    if mats.is_empty() {
        return Vec::new();
    }
    let dim = mats[0].rows * mats[0].cols;
    let mut b = SpanBuilder::new(dim);
    for m in mats {
        b.insert(m.flatten());
    }
    b.rows.into_iter().map(|(_, r)| r).collect()
}

/// All rational roots of the polynomial with the given exact coefficients
/// (constant first), with multiplicity, via integer divisor enumeration.
///
/// Returns `Err` when the divisor factorization budget is exceeded, so the
/// caller can report an unsupported input instead of silently missing roots.
pub fn rational_roots(coeffs: &[Rat]) -> Result<Vec<(Rat, usize)>> {
    let mut poly: Vec<Rat> = coeffs.to_vec();
    while poly.last().is_some_and(|c| c.is_zero()) {
        poly.pop();
    }
    if poly.len() <= 1 {
        return Ok(Vec::new());
    }
    let mut roots: Vec<(Rat, usize)> = Vec::new();
    // strip zero roots first
    let mut zero_mult = 0;
    while poly.first().is_some_and(|c| c.is_zero()) {
        poly.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Rat::zero(), zero_mult));
    }
    if poly.len() <= 1 {
        return Ok(roots);
    }
    // clear denominators
    let mut denom = BigInt::one();
    for c in &poly {
        denom = num_integer::lcm(denom, c.denom().clone());
    }
    let ints: Vec<BigInt> = poly
        .iter()
        .map(|c| (c * Rat::from_integer(denom.clone())).to_integer())
        .collect();
    let p_divs = divisors(ints.first().unwrap())?;
    let q_divs = divisors(ints.last().unwrap())?;
    let mut candidates: Vec<Rat> = Vec::new();
    for p in &p_divs {
        for q in &q_divs {
            let c = Rat::new(p.clone(), q.clone());
            if !candidates.contains(&c) {
                candidates.push(c.clone());
                candidates.push(-c);
            }
        }
    }
    let mut current = ints.iter().map(|c| Rat::from_integer(c.clone())).collect::<Vec<_>>();
    for cand in candidates {
        let mut mult = 0;
        loop {
            match synth_div(&current, &cand) {
                Some(q) => {
                    mult += 1;
                    current = q;
                }
                None => break,
            }
        }
        if mult > 0 {
            roots.push((cand, mult));
        }
        if current.len() <= 1 {
            break;
        }
    }
    Ok(roots)
}

/// Synthetic division by (X - r); `None` when the remainder is nonzero.
fn synth_div(coeffs: &[Rat], r: &Rat) -> Option<Vec<Rat>> {
    let n = coeffs.len();
    if n <= 1 {
        return None;
    }
    let mut out = vec![Rat::zero(); n - 1];
    let mut carry = coeffs[n - 1].clone();
    for k in (0..n - 1).rev() {
        out[k] = carry.clone();
        carry = &coeffs[k] + &carry * r;
    }
    if carry.is_zero() {
        Some(out)
    } else {
        None
    }
}

/// Positive divisors of a nonzero integer, via trial division. Errors out
/// when a remaining cofactor is too large to factor within the budget.
fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let mut n = n.abs();
    if n.is_zero() {
        // every integer divides 0; callers strip zero roots beforehand
        return Err(Error::UnsupportedInput("divisors of zero".into()));
    }
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut p = BigInt::from(2u32);
    let budget = BigInt::from(1_000_000u64);
    while &p * &p <= n {
        if p > budget {
            return Err(Error::UnsupportedInput(
                "eigenvalue extraction exceeded the factorization budget".into(),
            ));
        }
        let mut k = 0;
        while (&n % &p).is_zero() {
            n = &n / &p;
            k += 1;
        }
        if k > 0 {
            factors.push((p.clone(), k));
        }
        p += 1;
    }
    if n > BigInt::one() {
        factors.push((n, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, k) in factors {
        let mut next = Vec::new();
        for d in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=k {
                next.push(d * &pk);
                pk = &pk * &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs.dedup();
    Ok(divs)
}

/// Exact eigenvalues (over the rationals) of a square matrix, with algebraic
/// multiplicities. Errors when the characteristic polynomial does not split
/// over the rationals.
pub fn rational_spectrum(m: &QMat) -> Result<Vec<(Rat, usize)>> {
    let roots = rational_roots(&m.charpoly())?;
    let total: usize = roots.iter().map(|(_, k)| k).sum();
    if total != m.rows {
        return Err(Error::UnsupportedInput(
            "matrix has irrational eigenvalues (exact mode)".into(),
        ));
    }
    let mut roots = roots;
    roots.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(roots)
}

/// Basis (as columns stacked into a matrix) of ker (m - a)^k.
pub fn generalized_eigenspace(m: &QMat, alpha: &Rat, power: usize) -> QMat {
    let n = m.rows;
    let mut shifted = m.clone();
    for i in 0..n {
        let v = shifted.at(i, i) - alpha;
        shifted.set(i, i, v);
    }
    let pk = shifted.pow(power);
    let ker = pk.kernel();
    QMat::from_fn(n, ker.len(), |i, j| ker[j][i].clone())
}

/// Float rank with a relative singular-value threshold.
pub fn float_rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let svd = m.clone().svd(false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    if smax == 0.0 {
        return 0;
    }
    svd.singular_values
        .iter()
        .filter(|&&s| s > rel_tol * smax)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn qm(rows: &[&[i64]]) -> QMat {
        QMat::from_fn(rows.len(), rows[0].len(), |i, j| rat_int(rows[i][j]))
    }

    #[test]
    fn rref_rank_kernel() {
        let m = qm(&[&[1, 2, 3], &[2, 4, 6], &[1, 1, 1]]);
        assert_eq!(m.rank(), 2);
        let ker = m.kernel();
        assert_eq!(ker.len(), 1);
        // kernel vector satisfies m v = 0
        for i in 0..3 {
            let s: Rat = (0..3).map(|j| m.at(i, j) * &ker[0][j]).sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn solve_and_inverse() {
        let m = qm(&[&[2, 1], &[1, 1]]);
        let x = m.solve(&[rat_int(3), rat_int(2)]).unwrap();
        assert_eq!(x, vec![rat_int(1), rat_int(1)]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMat::identity(2));
        let sing = qm(&[&[1, 2], &[2, 4]]);
        assert!(sing.inverse().is_none());
        assert!(sing.solve(&[rat_int(0), rat_int(1)]).is_none());
    }

    #[test]
    fn charpoly_and_roots() {
        // diag(1, 2, 2): (X-1)(X-2)^2 = X^3 - 5X^2 + 8X - 4
        let m = QMat::block_diag(&[
            qm(&[&[1]]),
            qm(&[&[2, 0], &[0, 2]]),
        ]);
        let cp = m.charpoly();
        assert_eq!(cp, vec![rat_int(-4), rat_int(8), rat_int(-5), rat_int(1)]);
        let spec = rational_spectrum(&m).unwrap();
        assert_eq!(spec, vec![(rat_int(1), 1), (rat_int(2), 2)]);
    }

    #[test]
    fn fractional_spectrum() {
        let m = QMat::from_fn(2, 2, |i, j| if i == j { rat(1, 2) } else { Rat::zero() });
        let spec = rational_spectrum(&m).unwrap();
        assert_eq!(spec, vec![(rat(1, 2), 2)]);
    }

    #[test]
    fn irrational_spectrum_rejected() {
        // companion of X^2 - 2
        let m = qm(&[&[0, 2], &[1, 0]]);
        assert!(rational_spectrum(&m).is_err());
    }

    #[test]
    fn span_builder_membership() {
        let mut b = SpanBuilder::new(4);
        assert!(b.insert(vec![rat_int(1), rat_int(0), rat_int(1), rat_int(0)]));
        assert!(b.insert(vec![rat_int(0), rat_int(1), rat_int(0), rat_int(0)]));
        assert!(!b.insert(vec![rat_int(2), rat_int(3), rat_int(2), rat_int(0)]));
        assert_eq!(b.rank(), 2);
        assert!(b.contains(&[rat_int(5), rat_int(-1), rat_int(5), rat_int(0)]));
        assert!(!b.contains(&[rat_int(0), rat_int(0), rat_int(0), rat_int(1)]));
    }

    #[test]
    fn generalized_eigenspaces_split() {
        // Jordan block J_2(3) ⊕ (5)
        let m = QMat::from_rows(vec![
            vec![rat_int(3), rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(3), rat_int(0)],
            vec![rat_int(0), rat_int(0), rat_int(5)],
        ]);
        let g3 = generalized_eigenspace(&m, &rat_int(3), 3);
        let g5 = generalized_eigenspace(&m, &rat_int(5), 3);
        assert_eq!(g3.cols, 2);
        assert_eq!(g5.cols, 1);
    }
}
