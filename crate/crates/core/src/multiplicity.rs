//! Multiplicities `w(m, j)` of `L_{|m|-2j}` in `L_{m_1} ⊗ ⋯ ⊗ L_{m_n}`.
//!
//! Two independent routes: folding Clebsch–Gordan one factor at a time, and a
//! memoized recursion on the smallest factor.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sl2_weight::HighestWeights;

/// Map `j ↦ w(m, j)` for `0 <= j <= floor(|m|/2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionVector {
    pub m: HighestWeights,
    pub counts: BTreeMap<u64, u64>,
}

impl DecompositionVector {
    /// `Σ_j w(m,j)(|m|-2j+1)`
    pub fn dimension(&self) -> u128 {
        let total = self.m.total();
        self.counts
            .iter()
            .map(|(&j, &w)| u128::from(w) * u128::from(total - 2 * j + 1))
            .sum()
    }
}

/// Highest weight ↦ multiplicity in `L_{m_1} ⊗ ⋯ ⊗ L_{m_n}`.
pub fn tensor_decomposition(m: &HighestWeights) -> BTreeMap<u64, u64> {
    let mut acc = BTreeMap::from([(0u64, 1u64)]);
    for &b in m.as_slice() {
        let b = u64::from(b);
        let mut next = BTreeMap::new();
        for (&a, &count) in &acc {
            for i in 0..=a.min(b) {
                *next.entry(a + b - 2 * i).or_insert(0) += count;
            }
        }
        acc = next;
    }
    acc
}

pub fn w_via_tensor(m: &HighestWeights, j: u64) -> u64 {
    let total = m.total();
    if 2 * j > total {
        return 0;
    }
    tensor_decomposition(m)
        .get(&(total - 2 * j))
        .copied()
        .unwrap_or(0)
}

type Memo = HashMap<(Vec<u32>, u64), u64>;

/// `w(m, j)` for `m` sorted ascending.
fn recurse(m: &[u32], j: u64, memo: &mut Memo) -> u64 {
    let total: u64 = m.iter().map(|&x| u64::from(x)).sum();
    let r = total / 2;
    if j > r {
        return 0;
    }
    match m.len() {
        0 => u64::from(j == 0),
        1 => u64::from(j == 0),
        2 => u64::from(j <= u64::from(m[0].min(m[1]))),
        _ => {
            if let Some(&w) = memo.get(&(m.to_vec(), j)) {
                return w;
            }
            let m1 = u64::from(m[0]);
            let tail = &m[1..];
            let tail_total = total - m1;
            let r1 = tail_total / 2;
            let (lo, hi) = if j < m1 {
                (0, j)
            } else if j <= r1 {
                (j - m1, j)
            } else {
                (j - m1, tail_total - j)
            };
            let w = (lo..=hi).map(|s| recurse(tail, s, memo)).sum();
            memo.insert((m.to_vec(), j), w);
            w
        }
    }
}

pub fn w_via_recursion(m: &HighestWeights, j: u64) -> u64 {
    let sorted = m.sorted();
    recurse(sorted.as_slice(), j, &mut Memo::new())
}

pub fn decomposition_via_tensor(m: &HighestWeights) -> DecompositionVector {
    let total = m.total();
    let tensor = tensor_decomposition(m);
    let counts = (0..=total / 2)
        .map(|j| (j, tensor.get(&(total - 2 * j)).copied().unwrap_or(0)))
        .collect();
    DecompositionVector {
        m: m.clone(),
        counts,
    }
}

pub fn decomposition_via_recursion(m: &HighestWeights) -> DecompositionVector {
    let sorted = m.sorted();
    let mut memo = Memo::new();
    let counts = (0..=m.total() / 2)
        .map(|j| (j, recurse(sorted.as_slice(), j, &mut memo)))
        .collect();
    DecompositionVector {
        m: m.clone(),
        counts,
    }
}

/// `w(m, |m|-k+1) == 0` whenever `0 <= |m|-k+1 < k` and some `m_i >= k`.
pub fn vanishing_check(m: &HighestWeights, k: u32) -> Result<bool> {
    let j = m.total() as i64 - i64::from(k) + 1;
    let big = m.as_slice().iter().any(|&x| x >= k);
    if !(0 <= j && j < i64::from(k) && big) {
        return Err(Error::Precondition(format!(
            "vanishing_check needs 0 <= |m|-k+1 < k and some m_i >= k (m={m}, k={k})"
        )));
    }
    Ok(w_via_recursion(m, j as u64) == 0)
}
