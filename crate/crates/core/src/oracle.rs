//! Reference routes that avoid the closed forms they are compared against.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exact::{ExactRational, MultiIndex};

/// `‖z^α‖²` read off the kernel `1/(1 − ⟨z,w⟩) = Σ_k ⟨z,w⟩^k`.
///
/// `⟨z,w⟩^k = (Σ z_i w̄_i)^k` is expanded by repeated multiplication, counting the
/// coefficient `c_α` of `z^α w̄^α`; orthogonality of the monomials gives `‖z^α‖² = 1/c_α`.
pub fn kernel_expansion_norms(dim: usize, max_deg: u32) -> BTreeMap<MultiIndex, ExactRational> {
    let mut out = BTreeMap::new();
    let mut layer: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
    layer.insert(vec![0; dim], BigInt::from(1));
    for k in 0..=max_deg {
        for (alpha, c) in &layer {
            out.insert(MultiIndex::new(alpha.clone()), ExactRational::new(1, c.clone()));
        }
        if k == max_deg {
            break;
        }
        let mut next: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (alpha, c) in &layer {
            for i in 0..dim {
                let mut beta = alpha.clone();
                beta[i] += 1;
                let slot = next.entry(beta).or_insert_with(BigInt::zero);
                *slot += c;
            }
        }
        layer = next;
    }
    out
}
