//! Exact rational linear algebra.
//!
//! Matrices are stored as sparse rows and act on row vectors: the image of a
//! row vector `v` under `M` is `v·M`. Kernels are therefore left kernels.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Sparse vector keyed by coordinate. Zero entries are never stored.
pub type SparseVec = BTreeMap<usize, Rational>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Decimal `p/q` rendering (just `p` for integers).
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|e| Error::InvalidInput(format!("{s}: {e}")))?;
        let q = BigInt::from_str(q.trim()).map_err(|e| Error::InvalidInput(format!("{s}: {e}")))?;
        if q.is_zero() {
            return Err(Error::InvalidInput(format!("{s}: zero denominator")));
        }
        Ok(Rational::new(p, q))
    } else {
        let p = BigInt::from_str(s).map_err(|e| Error::InvalidInput(format!("{s}: {e}")))?;
        Ok(Rational::from_integer(p))
    }
}

/// `v += alpha * w`, keeping `v` free of explicit zeros.
pub fn axpy(v: &mut SparseVec, alpha: &Rational, w: &SparseVec) {
    if alpha.is_zero() {
        return;
    }
    for (&j, x) in w {
        let term = alpha * x;
        match v.get_mut(&j) {
            Some(e) => {
                *e += term;
                if e.is_zero() {
                    v.remove(&j);
                }
            }
            None => {
                v.insert(j, term);
            }
        }
    }
}

pub fn sparse_from_dense(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn dense_from_sparse(v: &SparseVec, len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (&i, x) in v {
        out[i] = x.clone();
    }
    out
}

#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| {
                    self.data[r]
                        .get(&c)
                        .map(format_rational)
                        .unwrap_or_else(|| "0".into())
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![SparseVec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].insert(i, Rational::one());
        }
        m
    }

    /// Builds a matrix from integer rows. Panics on ragged input.
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            for (j, &x) in r.iter().enumerate() {
                if x != 0 {
                    m.data[i].insert(j, rat(x));
                }
            }
        }
        m
    }

    pub fn from_sparse_rows(cols: usize, rows: Vec<SparseVec>) -> Result<Self> {
        for r in &rows {
            if let Some((&c, _)) = r.iter().next_back() {
                if c >= cols {
                    return Err(Error::OutOfBounds {
                        row: 0,
                        col: c,
                        rows: rows.len(),
                        cols,
                    });
                }
            }
        }
        let mut rows = rows;
        for r in &mut rows {
            r.retain(|_, x| !x.is_zero());
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows,
        })
    }

    pub fn diagonal(diag: &[Rational]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, x) in diag.iter().enumerate() {
            if !x.is_zero() {
                m.data[i].insert(i, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.data[i]
    }

    pub fn get(&self, row: usize, col: usize) -> Result<Rational> {
        self.check(row, col)?;
        Ok(self.data[row]
            .get(&col)
            .cloned()
            .unwrap_or_else(Rational::zero))
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) -> Result<()> {
        self.check(row, col)?;
        if value.is_zero() {
            self.data[row].remove(&col);
        } else {
            self.data[row].insert(col, value);
        }
        Ok(())
    }

    fn check(&self, row: usize, col: usize) -> Result<()> {
        if row >= self.rows || col >= self.cols {
            return Err(Error::OutOfBounds {
                row,
                col,
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(&j, x)| (i, j, x)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, j, x) in self.entries() {
            t.data[j].insert(i, x.clone());
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let data = self
            .data
            .iter()
            .map(|r| {
                let mut acc = SparseVec::new();
                for (&k, a) in r {
                    axpy(&mut acc, a, &other.data[k]);
                }
                acc
            })
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    fn combine(&self, other: &Self, sign: &Rational) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        let mut out = self.clone();
        for (r, o) in out.data.iter_mut().zip(&other.data) {
            axpy(r, sign, o);
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, &Rational::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, &-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        let mut out = self.clone();
        for r in &mut out.data {
            for x in r.values_mut() {
                *x *= c;
            }
        }
        out
    }

    /// `v·M` for a dense row vector `v`.
    pub fn apply_row(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: v.len(),
            });
        }
        let mut acc = SparseVec::new();
        for (x, r) in v.iter().zip(&self.data) {
            axpy(&mut acc, x, r);
        }
        Ok(dense_from_sparse(&acc, self.cols))
    }

    /// Sparse counterpart of [`apply_row`](Self::apply_row); indices are not range-checked.
    pub fn apply_sparse(&self, v: &SparseVec) -> SparseVec {
        let mut acc = SparseVec::new();
        for (&i, x) in v {
            axpy(&mut acc, x, &self.data[i]);
        }
        acc
    }

    /// Stacks the rows of `self` on top of the rows of `other`.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        self.data
            .iter()
            .map(|r| dense_from_sparse(r, self.cols))
            .collect()
    }

    pub fn to_dump(&self) -> MatrixDump {
        MatrixDump {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries()
                .map(|(i, j, x)| (i, j, format_rational(x)))
                .collect(),
        }
    }

    pub fn from_dump(dump: &MatrixDump) -> Result<Self> {
        let mut m = Self::zeros(dump.rows, dump.cols);
        for (i, j, s) in &dump.entries {
            m.set(*i, *j, parse_rational(s)?)?;
        }
        Ok(m)
    }
}

/// JSON form `{"rows":r,"cols":c,"entries":[[i,j,"p/q"],...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDump {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, String)>,
}

/// Incrementally built row-echelon basis of a subspace of `Q^cols`.
///
/// Every stored row has leading coefficient 1 at a column that no other
/// stored row leads with. Reduction against the basis walks columns in
/// ascending order, so the remainder of a vector is supported on non-pivot
/// columns only and is unique for the spanned subspace.
#[derive(Debug, Clone, Default)]
pub struct RowEchelon {
    cols: usize,
    pivots: BTreeMap<usize, SparseVec>,
}

impl RowEchelon {
    pub fn new(cols: usize) -> Self {
        Self {
            cols,
            pivots: BTreeMap::new(),
        }
    }

    pub fn from_matrix(m: &RationalMatrix) -> Self {
        let mut e = Self::new(m.cols());
        for i in 0..m.rows() {
            e.insert(m.row(i).clone());
        }
        e
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// The stored basis rows, ordered by pivot column.
    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> + '_ {
        self.pivots.values()
    }

    pub fn to_matrix(&self) -> RationalMatrix {
        RationalMatrix {
            rows: self.pivots.len(),
            cols: self.cols,
            data: self.pivots.values().cloned().collect(),
        }
    }

    /// Adds `row` to the spanning set. Returns `true` when it was independent.
    pub fn insert(&mut self, mut row: SparseVec) -> bool {
        row.retain(|_, x| !x.is_zero());
        loop {
            let lead = match row.keys().next() {
                Some(&c) => c,
                None => return false,
            };
            match self.pivots.get(&lead) {
                Some(p) => {
                    let coef = -row[&lead].clone();
                    axpy(&mut row, &coef, p);
                }
                None => {
                    let inv = row[&lead].recip();
                    for x in row.values_mut() {
                        *x *= &inv;
                    }
                    self.pivots.insert(lead, row);
                    return true;
                }
            }
        }
    }

    /// Normal form of `v` modulo the spanned subspace.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        let mut cursor = 0;
        while let Some((&col, x)) = v.range(cursor..).next() {
            if let Some(p) = self.pivots.get(&col) {
                let coef = -x.clone();
                axpy(&mut v, &coef, p);
            }
            cursor = col + 1;
        }
        v
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }
}

pub fn rank(m: &RationalMatrix) -> usize {
    // Eliminating along the shorter side does the same work on fewer vectors.
    if m.rows() <= m.cols() {
        RowEchelon::from_matrix(m).rank()
    } else {
        RowEchelon::from_matrix(&m.transpose()).rank()
    }
}

/// Basis of `{v : v·M = 0}`, each vector scaled so its first nonzero entry is 1.
pub fn left_kernel_basis(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    let mut pivots: BTreeMap<usize, (SparseVec, SparseVec)> = BTreeMap::new();
    let mut kernel = Vec::new();
    for i in 0..m.rows() {
        let mut row = m.row(i).clone();
        let mut combo = SparseVec::from([(i, Rational::one())]);
        loop {
            let lead = match row.keys().next() {
                Some(&c) => c,
                None => {
                    let first = combo.values().next().cloned().expect("combo holds row i");
                    let inv = first.recip();
                    let v: Vec<Rational> = dense_from_sparse(&combo, m.rows())
                        .into_iter()
                        .map(|x| x * &inv)
                        .collect();
                    kernel.push(v);
                    break;
                }
            };
            match pivots.get(&lead) {
                Some((prow, pcombo)) => {
                    let coef = -row[&lead].clone();
                    axpy(&mut row, &coef, prow);
                    axpy(&mut combo, &coef, pcombo);
                }
                None => {
                    let inv = row[&lead].recip();
                    for x in row.values_mut() {
                        *x *= &inv;
                    }
                    for x in combo.values_mut() {
                        *x *= &inv;
                    }
                    pivots.insert(lead, (row, combo));
                    break;
                }
            }
        }
    }
    kernel
}

pub fn solve_rowspan_membership(v: &[Rational], m: &RationalMatrix) -> Result<bool> {
    if v.len() != m.cols() {
        return Err(Error::DimensionMismatch {
            expected: m.cols(),
            got: v.len(),
        });
    }
    Ok(RowEchelon::from_matrix(m).contains(&sparse_from_dense(v)))
}

/// Rank of the span of a list of dense vectors of common length `len`.
pub fn rank_of_vectors(vectors: &[Vec<Rational>], len: usize) -> Result<usize> {
    let mut e = RowEchelon::new(len);
    for v in vectors {
        if v.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                got: v.len(),
            });
        }
        e.insert(sparse_from_dense(v));
    }
    Ok(e.rank())
}

pub fn is_integer(q: &Rational) -> bool {
    q.is_integer()
}

pub fn is_nonnegative(q: &Rational) -> bool {
    !q.is_negative()
}
