use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

/// Exponent vector `α = (α₁, …, α_d)` of the monomial `z^α`.
///
/// Ordered graded-lexicographically: lower total degree first, then larger
/// leading exponents first, so `1 < z₁ < z₂ < z₁² < z₁z₂ < z₂²`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    /// `(k, …, k)` of length `dim`.
    pub fn diagonal(dim: usize, k: u32) -> Self {
        MultiIndex(vec![k; dim])
    }

    /// `k·e_i`.
    pub fn unit(dim: usize, i: usize, k: u32) -> Self {
        let mut v = vec![0; dim];
        v[i] = k;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&a| a as u64).sum()
    }

    /// `α! = α₁!⋯α_d!`.
    pub fn factorial(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, &a| acc * factorial(a as u64))
    }

    /// Returns `k` when all entries equal `k`.
    pub fn diagonal_value(&self) -> Option<u32> {
        let first = *self.0.first()?;
        self.0.iter().all(|&a| a == first).then_some(first)
    }

    pub fn padded(&self, dim: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v.resize(dim.max(v.len()), 0);
        MultiIndex(v)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dim(), other.dim());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if self.dim() != other.dim() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
            .then_with(|| self.0.len().cmp(&other.0.len()))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(v: [u32; N]) -> Self {
        MultiIndex(v.to_vec())
    }
}

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// All multi-indices of length `dim` with exactly degree `deg`, in graded-lex order.
pub fn multi_indices_of_degree(dim: usize, deg: u32) -> Vec<MultiIndex> {
    fn rec(dim: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if prefix.len() + 1 == dim {
            prefix.push(remaining);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for a in (0..=remaining).rev() {
            prefix.push(a);
            rec(dim, remaining - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if dim == 0 {
        if deg == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return out;
    }
    rec(dim, deg, &mut Vec::with_capacity(dim), &mut out);
    out
}

/// All multi-indices of length `dim` and degree `≤ max_deg`, sorted graded-lexicographically.
pub fn multi_indices_up_to(dim: usize, max_deg: u32) -> Vec<MultiIndex> {
    (0..=max_deg).flat_map(|k| multi_indices_of_degree(dim, k)).collect()
}
