//! Weight spaces of `M^{⊗m}` and `L^{⊗m}` and the matrices of `e`, `f`, `h`
//! and the Shapovalov map between them.
//!
//! Bases are ordered strictly descending lexicographically: `J` precedes `I`
//! when the left-most nonzero entry of `J - I` is positive. All matrices act
//! on row vectors, so rows are indexed by the source basis.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::combinatorics::binomial_i;
use crate::error::{Error, Result};
use crate::exact_linalg::{
    left_kernel_basis, rank, rank_of_vectors, rat, Rational, RationalMatrix,
};
use crate::multiplicity::w_via_recursion;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&j| u64::from(j)).sum()
    }

    /// `J + 1_i`
    pub fn raised(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v[i] += 1;
        Self(v)
    }

    /// `J - 1_i`, or `None` when `j_i = 0`.
    pub fn lowered(&self, i: usize) -> Option<Self> {
        if self.0[i] == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[i] -= 1;
        Some(Self(v))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|j| j.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The tuple `m = (m_1, ..., m_n)` of highest weights, `n >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct HighestWeights(Vec<u32>);

impl HighestWeights {
    pub fn new(m: Vec<u32>) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::InvalidInput(
                "highest weights must be nonempty".into(),
            ));
        }
        Ok(Self(m))
    }

    /// Parses a comma-separated list such as `1,2,0`.
    pub fn parse(s: &str) -> Result<Self> {
        let m = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::InvalidInput(format!("bad weight {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(m)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// `|m|`
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&x| u64::from(x)).sum()
    }

    pub fn sorted(&self) -> Self {
        let mut v = self.0.clone();
        v.sort_unstable();
        Self(v)
    }

    /// `m^1 = (m_2, ..., m_n)`; `None` for `n = 1`.
    pub fn tail(&self) -> Option<Self> {
        if self.0.len() < 2 {
            None
        } else {
            Some(Self(self.0[1..].to_vec()))
        }
    }
}

impl fmt::Display for HighestWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|j| j.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisKind {
    /// All `J` with `|J| = k`: the weight space of `(M^{⊗m})^*`.
    DualVerma,
    /// Additionally `j_i <= m_i`: the weight space of `L^{⊗m}`.
    Irreducible,
}

#[derive(Debug, Clone)]
pub struct WeightBasis {
    m: HighestWeights,
    degree: u32,
    kind: BasisKind,
    indices: Vec<MultiIndex>,
    position: HashMap<MultiIndex, usize>,
}

impl WeightBasis {
    pub fn m(&self) -> &HighestWeights {
        &self.m
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn position(&self, j: &MultiIndex) -> Option<usize> {
        self.position.get(j).copied()
    }
}

/// Compositions of `k` into `n` nonnegative parts, optionally bounded above
/// componentwise, in strictly descending lexicographic order.
fn compositions(n: usize, k: u32, bounds: Option<&[u32]>) -> Vec<MultiIndex> {
    fn rec(
        pos: usize,
        left: u32,
        bounds: Option<&[u32]>,
        cur: &mut Vec<u32>,
        out: &mut Vec<MultiIndex>,
    ) {
        let n = cur.len();
        let cap = bounds.map_or(left, |b| b[pos].min(left));
        if pos == n - 1 {
            if left <= cap {
                cur[pos] = left;
                out.push(MultiIndex(cur.clone()));
            }
            return;
        }
        for j in (0..=cap).rev() {
            cur[pos] = j;
            rec(pos + 1, left - j, bounds, cur, out);
        }
        cur[pos] = 0;
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut cur = vec![0; n];
    rec(0, k, bounds, &mut cur, &mut out);
    out
}

pub fn weight_basis(m: &HighestWeights, k: u32, kind: BasisKind) -> WeightBasis {
    let bounds = match kind {
        BasisKind::DualVerma => None,
        BasisKind::Irreducible => Some(m.as_slice()),
    };
    let indices = compositions(m.n(), k, bounds);
    let position = indices
        .iter()
        .enumerate()
        .map(|(i, j)| (j.clone(), i))
        .collect();
    WeightBasis {
        m: m.clone(),
        degree: k,
        kind,
        indices,
        position,
    }
}

fn require_positive_degree(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::Precondition("degree k must be at least 1".into()));
    }
    Ok(())
}

/// `A_k(m)`: the contragredient action of `f` from degree `k-1` to degree `k`,
/// with entry `(J, J+1_i) = (j_i+1)(m_i-j_i)`.
pub fn f_matrix_dual(m: &HighestWeights, k: u32) -> Result<RationalMatrix> {
    require_positive_degree(k)?;
    let src = weight_basis(m, k - 1, BasisKind::DualVerma);
    let dst = weight_basis(m, k, BasisKind::DualVerma);
    let mut a = RationalMatrix::zeros(src.len(), dst.len());
    for (r, j) in src.indices().iter().enumerate() {
        for (i, (&ji, &mi)) in j.entries().iter().zip(m.as_slice()).enumerate() {
            let coef = (i64::from(ji) + 1) * (i64::from(mi) - i64::from(ji));
            let c = dst
                .position(&j.raised(i))
                .expect("raised index has degree k");
            a.set(r, c, rat(coef))?;
        }
    }
    Ok(a)
}

/// Contragredient `e` from degree `k` to degree `k-1`: `(F_J v)^* ↦ Σ_{j_i≠0} (F_{J-1_i} v)^*`.
pub fn e_matrix_dual(m: &HighestWeights, k: u32) -> Result<RationalMatrix> {
    require_positive_degree(k)?;
    let src = weight_basis(m, k, BasisKind::DualVerma);
    let dst = weight_basis(m, k - 1, BasisKind::DualVerma);
    let mut a = RationalMatrix::zeros(src.len(), dst.len());
    for (r, j) in src.indices().iter().enumerate() {
        for i in 0..m.n() {
            if let Some(lower) = j.lowered(i) {
                let c = dst.position(&lower).expect("lowered index has degree k-1");
                a.set(r, c, rat(1))?;
            }
        }
    }
    Ok(a)
}

/// Eigenvalue of `h` on the weight space of degree `k`: `|m| - 2k`.
pub fn h_scalar(m: &HighestWeights, k: u32) -> i64 {
    m.total() as i64 - 2 * i64::from(k)
}

/// `f` on `L^{⊗m}` from degree `k-1` to degree `k`, dropping targets with `j_i > m_i`.
pub fn f_matrix_irreducible(m: &HighestWeights, k: u32) -> Result<RationalMatrix> {
    require_positive_degree(k)?;
    let src = weight_basis(m, k - 1, BasisKind::Irreducible);
    let dst = weight_basis(m, k, BasisKind::Irreducible);
    let mut a = RationalMatrix::zeros(src.len(), dst.len());
    for (r, j) in src.indices().iter().enumerate() {
        for i in 0..m.n() {
            if let Some(c) = dst.position(&j.raised(i)) {
                a.set(r, c, rat(1))?;
            }
        }
    }
    Ok(a)
}

/// `c_J = Π j_i! · m_i (m_i - 1) ⋯ (m_i - j_i + 1)`.
pub fn shapovalov_coefficient(m: &HighestWeights, j: &MultiIndex) -> Rational {
    let mut c = rat(1);
    for (&ji, &mi) in j.entries().iter().zip(m.as_slice()) {
        for t in 0..ji {
            c *= rat(i64::from(t) + 1) * rat(i64::from(mi) - i64::from(t));
        }
    }
    c
}

/// `c_J` for every `J` of the dual-Verma basis of degree `k`, in basis order.
pub fn shapovalov_diagonal(m: &HighestWeights, k: u32) -> Vec<Rational> {
    weight_basis(m, k, BasisKind::DualVerma)
        .indices()
        .iter()
        .map(|j| shapovalov_coefficient(m, j))
        .collect()
}

/// The Shapovalov map `L^{⊗m}[|m|-2k] → (M^{⊗m}[|m|-2k])^*`: rows indexed by
/// the irreducible basis, columns by the dual-Verma basis.
pub fn shapovalov_matrix(m: &HighestWeights, k: u32) -> RationalMatrix {
    let irr = weight_basis(m, k, BasisKind::Irreducible);
    let dual = weight_basis(m, k, BasisKind::DualVerma);
    let mut s = RationalMatrix::zeros(irr.len(), dual.len());
    for (r, j) in irr.indices().iter().enumerate() {
        let c = dual.position(j).expect("irreducible index is a dual index");
        s.set(r, c, shapovalov_coefficient(m, j))
            .expect("in bounds");
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `0 <= |m|-k+1 < k`
    Resonant,
    /// `|m|-k+1 < 0`
    NonresonantLow,
    /// `|m|-k+1 >= k`
    NonresonantHigh,
}

impl Regime {
    pub fn of(m: &HighestWeights, k: u32) -> Self {
        let j = m.total() as i64 - i64::from(k) + 1;
        if j < 0 {
            Regime::NonresonantLow
        } else if j < i64::from(k) {
            Regime::Resonant
        } else {
            Regime::NonresonantHigh
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Resonant => "resonant",
            Regime::NonresonantLow => "nonresonant-low",
            Regime::NonresonantHigh => "nonresonant-high",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PredictedDims {
    pub kernel: u64,
    pub cokernel: u64,
    pub regime: Regime,
}

/// `(dim ker, dim coker)` of `A_k(m)` acting on row vectors.
pub fn kernel_cokernel_dims(m: &HighestWeights, k: u32) -> Result<(u64, u64)> {
    let a = f_matrix_dual(m, k)?;
    let r = rank(&a);
    Ok(((a.rows() - r) as u64, (a.cols() - r) as u64))
}

/// Dimensions predicted from the multiplicity `w(m, |m|-k+1)` and the
/// binomial `C(n+k-2, k)`.
pub fn predicted_dims(m: &HighestWeights, k: u32) -> Result<PredictedDims> {
    require_positive_degree(k)?;
    let regime = Regime::of(m, k);
    let kernel = match regime {
        Regime::Resonant => w_via_recursion(m, m.total() + 1 - u64::from(k)),
        _ => 0,
    };
    let extra = binomial_i(m.n() as i64 + i64::from(k) - 2, i64::from(k)) as u64;
    Ok(PredictedDims {
        kernel,
        cokernel: kernel + extra,
        regime,
    })
}

/// Left kernel of [`f_matrix_irreducible`]: the lowest-weight vectors of
/// `L^{⊗m}` of degree `k-1`.
pub fn lowest_weight_kernel_irreducible(m: &HighestWeights, k: u32) -> Result<Vec<Vec<Rational>>> {
    Ok(left_kernel_basis(&f_matrix_irreducible(m, k)?))
}

/// Whether the Shapovalov images of the lowest-weight vectors span the left
/// kernel of `A_k(m)`.
pub fn shapovalov_embeds_kernel(m: &HighestWeights, k: u32) -> Result<bool> {
    require_positive_degree(k)?;
    if Regime::of(m, k) != Regime::Resonant {
        return Err(Error::Precondition(format!(
            "shapovalov_embeds_kernel requires 0 <= |m|-k+1 < k (m={m}, k={k})"
        )));
    }
    let singular = lowest_weight_kernel_irreducible(m, k)?;
    let s = shapovalov_matrix(m, k - 1);
    let a = f_matrix_dual(m, k)?;
    let images = singular
        .iter()
        .map(|v| s.apply_row(v))
        .collect::<Result<Vec<_>>>()?;
    for img in &images {
        if !a.apply_row(img)?.iter().all(Zero::is_zero) {
            return Ok(false);
        }
    }
    let kernel_dim = a.rows() - rank(&a);
    Ok(rank_of_vectors(&images, a.rows())? == kernel_dim)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hw(v: &[u32]) -> HighestWeights {
        HighestWeights::new(v.to_vec()).unwrap()
    }

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn bases_are_descending_lex() {
        let m = hw(&[1, 1]);
        assert_eq!(
            weight_basis(&m, 1, BasisKind::DualVerma).indices(),
            &[mi(&[1, 0]), mi(&[0, 1])]
        );
        assert_eq!(
            weight_basis(&m, 2, BasisKind::DualVerma).indices(),
            &[mi(&[2, 0]), mi(&[1, 1]), mi(&[0, 2])]
        );
        assert_eq!(
            weight_basis(&m, 2, BasisKind::Irreducible).indices(),
            &[mi(&[1, 1])]
        );
        let b = weight_basis(&hw(&[3, 0, 2]), 4, BasisKind::DualVerma);
        assert_eq!(b.len(), 15);
        assert!(b.indices().windows(2).all(|w| w[0] > w[1]));
        let irr = weight_basis(&hw(&[3, 0, 2]), 4, BasisKind::Irreducible);
        assert_eq!(irr.indices(), &[mi(&[3, 0, 1]), mi(&[2, 0, 2])]);
        assert_eq!(weight_basis(&hw(&[1, 1]), 0, BasisKind::DualVerma).len(), 1);
    }

    #[test]
    fn f_dual_examples() {
        let m = hw(&[1, 1]);
        assert_eq!(
            f_matrix_dual(&m, 2).unwrap(),
            RationalMatrix::from_i64_rows(&[vec![0, 1, 0], vec![0, 1, 0]])
        );
        assert_eq!(
            f_matrix_dual(&m, 1).unwrap(),
            RationalMatrix::from_i64_rows(&[vec![1, 1]])
        );
        assert!(f_matrix_dual(&m, 0).is_err());
    }

    #[test]
    fn two_factor_rows_have_at_most_two_entries() {
        for m1 in 0..5 {
            for m2 in 0..5 {
                for k in 1..6 {
                    let a = f_matrix_dual(&hw(&[m1, m2]), k).unwrap();
                    for r in 0..a.rows() {
                        assert!(a.row(r).len() <= 2);
                    }
                }
            }
        }
    }

    #[test]
    fn e_dual_examples() {
        assert_eq!(
            e_matrix_dual(&hw(&[1, 1]), 1).unwrap(),
            RationalMatrix::from_i64_rows(&[vec![1], vec![1]])
        );
        assert_eq!(
            e_matrix_dual(&hw(&[2, 0]), 1).unwrap(),
            RationalMatrix::from_i64_rows(&[vec![1], vec![1]])
        );
        // restricted to the (1,0) row the matrix is [[1]]
        let e = e_matrix_dual(&hw(&[2, 0]), 1).unwrap();
        assert_eq!(e.get(0, 0).unwrap(), rat(1));
    }

    #[test]
    fn h_examples() {
        assert_eq!(h_scalar(&hw(&[1, 1]), 1), 0);
        assert_eq!(h_scalar(&hw(&[2, 1, 1]), 1), 2);
        assert_eq!(h_scalar(&hw(&[0, 0]), 3), -6);
    }

    #[test]
    fn f_irreducible_examples() {
        assert_eq!(
            f_matrix_irreducible(&hw(&[1, 1]), 1).unwrap(),
            RationalMatrix::from_i64_rows(&[vec![1, 1]])
        );
        assert_eq!(
            f_matrix_irreducible(&hw(&[1, 1]), 2).unwrap(),
            RationalMatrix::from_i64_rows(&[vec![1], vec![1]])
        );
        assert_eq!(
            f_matrix_irreducible(&hw(&[1]), 1).unwrap(),
            RationalMatrix::from_i64_rows(&[vec![1]])
        );
    }

    #[test]
    fn shapovalov_examples() {
        assert_eq!(shapovalov_diagonal(&hw(&[1, 1]), 1), ints(&[1, 1]));
        assert_eq!(shapovalov_coefficient(&hw(&[1, 1]), &mi(&[2, 0])), rat(0));
        assert_eq!(shapovalov_coefficient(&hw(&[2, 1]), &mi(&[2, 1])), rat(4));
    }

    #[test]
    fn kernel_cokernel_examples() {
        assert_eq!(kernel_cokernel_dims(&hw(&[1, 1]), 2).unwrap(), (1, 2));
        assert_eq!(kernel_cokernel_dims(&hw(&[1, 1]), 1).unwrap(), (0, 1));
        assert_eq!(kernel_cokernel_dims(&hw(&[1, 1, 1]), 2).unwrap(), (0, 3));
        assert_eq!(kernel_cokernel_dims(&hw(&[0]), 1).unwrap(), (1, 1));
    }

    #[test]
    fn predicted_examples() {
        assert_eq!(
            predicted_dims(&hw(&[1, 1]), 2).unwrap(),
            PredictedDims {
                kernel: 1,
                cokernel: 2,
                regime: Regime::Resonant
            }
        );
        assert_eq!(
            predicted_dims(&hw(&[1, 1, 1]), 2).unwrap(),
            PredictedDims {
                kernel: 0,
                cokernel: 3,
                regime: Regime::NonresonantHigh
            }
        );
        assert_eq!(
            predicted_dims(&hw(&[0, 0]), 2).unwrap(),
            PredictedDims {
                kernel: 0,
                cokernel: 1,
                regime: Regime::NonresonantLow
            }
        );
        assert_eq!(
            predicted_dims(&hw(&[0]), 1).unwrap(),
            PredictedDims {
                kernel: 1,
                cokernel: 1,
                regime: Regime::Resonant
            }
        );
    }

    #[test]
    fn lowest_weight_examples() {
        assert_eq!(
            lowest_weight_kernel_irreducible(&hw(&[1, 1]), 2).unwrap(),
            vec![ints(&[1, -1])]
        );
        assert!(lowest_weight_kernel_irreducible(&hw(&[1, 1]), 1)
            .unwrap()
            .is_empty());
        assert!(lowest_weight_kernel_irreducible(&hw(&[2]), 2)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn shapovalov_embedding_examples() {
        assert!(shapovalov_embeds_kernel(&hw(&[1, 1]), 2).unwrap());
        assert!(shapovalov_embeds_kernel(&hw(&[2, 2]), 3).unwrap());
        assert!(shapovalov_embeds_kernel(&hw(&[1, 1, 1]), 3).unwrap());
        assert!(matches!(
            shapovalov_embeds_kernel(&hw(&[1, 1, 1]), 2),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn single_factor_matrix_is_scalar() {
        for m1 in 0..6 {
            for k in 1..8 {
                let a = f_matrix_dual(&hw(&[m1]), k).unwrap();
                let expect = i64::from(k) * (i64::from(m1) - i64::from(k) + 1);
                assert_eq!(a, RationalMatrix::from_i64_rows(&[vec![expect]]));
            }
        }
    }

    #[test]
    fn leading_block_is_diagonal() {
        // Rows with j_1 = q' map to columns with j_1 = q'+1 through
        // (j_1+1)(m_1-j_1) on the matching index, and nothing sits below
        // the diagonal of the lex order.
        let m = hw(&[2, 1, 3]);
        for k in 1..5 {
            let a = f_matrix_dual(&m, k).unwrap();
            let src = weight_basis(&m, k - 1, BasisKind::DualVerma);
            for (r, j) in src.indices().iter().enumerate() {
                assert_eq!(
                    a.get(r, r).unwrap(),
                    rat((i64::from(j.entries()[0]) + 1) * (2 - i64::from(j.entries()[0])))
                );
                for c in 0..r {
                    assert!(a.get(r, c).unwrap().is_zero());
                }
            }
        }
    }
}
