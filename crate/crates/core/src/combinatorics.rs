//! Small combinatorial helpers: binomials, factorial ratios, subsets and permutations.

use num_bigint::BigUint;
use num_traits::One;

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

/// `C(n, k)` for signed `n`, zero unless `0 <= k <= n`.
pub fn binomial_i(n: i64, k: i64) -> u128 {
    if n < 0 || k < 0 || k > n {
        0
    } else {
        binomial(n as u64, k as u64)
    }
}

/// `hi! / lo!` for `lo <= hi`.
pub fn factorial_ratio(hi: u64, lo: u64) -> BigUint {
    (lo + 1..=hi).fold(BigUint::one(), |acc, x| acc * BigUint::from(x))
}

pub fn factorial(n: u64) -> BigUint {
    factorial_ratio(n, 0)
}

/// All `size`-element subsets of `0..n`, each ascending, in lexicographic order.
pub fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if size > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..size).collect();
    loop {
        out.push(cur.clone());
        // advance the right-most index that still has room
        let i = match (0..size).rev().find(|&i| cur[i] < n - size + i) {
            Some(i) => i,
            None => return out,
        };
        cur[i] += 1;
        for t in i + 1..size {
            cur[t] = cur[t - 1] + 1;
        }
    }
}

/// Sorts `v` in place and returns the sign of the sorting permutation, or
/// `None` when `v` has a repeated entry.
pub fn sort_with_sign(v: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    // insertion sort; inputs are short wedge monomials
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(sign)
}

/// A permutation of `0..len`, stored as its image list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(len: usize) -> Self {
        Self((0..len).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Self(images))
    }

    /// Swaps `a` and `b`.
    pub fn transposition(len: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(len);
        p.0.swap(a, b);
        p
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Self(inv)
    }

    pub fn sign(&self) -> i32 {
        let mut v = self.0.clone();
        sort_with_sign(&mut v).expect("permutation images are distinct")
    }

    /// Every permutation of `0..len` in lexicographic order of images.
    pub fn all(len: usize) -> Vec<Self> {
        use itertools::Itertools;
        (0..len).permutations(len).map(Self).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(0, 1), 0);
        assert_eq!(binomial(7, 4), 35);
        assert_eq!(binomial_i(-1, 0), 0);
    }

    #[test]
    fn subsets_enumerate_in_order() {
        assert_eq!(
            subsets(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(2, 3).is_empty());
        assert_eq!(subsets(6, 3).len(), 20);
    }

    #[test]
    fn sorting_sign() {
        let mut v = vec![2, 0, 1];
        assert_eq!(sort_with_sign(&mut v), Some(1));
        assert_eq!(v, vec![0, 1, 2]);
        let mut v = vec![1, 0];
        assert_eq!(sort_with_sign(&mut v), Some(-1));
        let mut v = vec![3, 1, 3];
        assert_eq!(sort_with_sign(&mut v), None);
    }

    #[test]
    fn permutation_signs_and_composition() {
        let all = Permutation::all(4);
        assert_eq!(all.len(), 24);
        assert_eq!(all.iter().filter(|p| p.sign() == 1).count(), 12);
        for p in &all {
            for q in &all {
                assert_eq!(p.compose(q).sign(), p.sign() * q.sign());
            }
            assert_eq!(p.compose(&p.inverse()), Permutation::identity(4));
        }
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(5), BigUint::from(120u32));
        assert_eq!(factorial_ratio(3, 1), BigUint::from(6u32));
        assert_eq!(factorial_ratio(2, 2), BigUint::from(1u32));
    }
}
