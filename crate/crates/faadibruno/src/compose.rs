//! Higher-order chain rule for f ∘ g with f: R^c -> R and g: R^d -> R^c.
//!
//! ∂_α(f∘g) = Σ_{n=1}^{|α|} Σ_{b ∈ {1..c}^n} Σ_{(p, mult) ∈ Π(α, n)}
//!            mult · ∂_b f · ∏_k ∂_{p_k} g^{b_k}
//!
//! Two routes are implemented. `compose_derivative` sums over raw b-tuples
//! exactly as above; `compose_derivative_beta` groups the b-tuples by their
//! multiset β and pulls a symmetrized inner derivative of g out of the sum.
//! Both must agree identically; keeping them separate makes that a testable
//! statement rather than an assumption.
//!
//! All loops run in a fixed canonical order so float results are
//! bit-reproducible across runs.

use crate::error::{Error, Result};
use crate::multiset::{enumerate_bag, MultisetIndex};
use crate::partitions::multiset_partitions;
use crate::scalar::Scalar;
use crate::tensor::{DerivativeTensor, MapJet};
use crate::util::index_tuples;

fn check_inputs<S: Scalar>(
    alpha: &MultisetIndex,
    f_jet: &DerivativeTensor<S>,
    g_jet: &MapJet<S>,
) -> Result<()> {
    if alpha.dim() != g_jet.in_dim() {
        return Err(Error::DimensionMismatch {
            context: "derivative index vs g input dimension",
            expected: g_jet.in_dim(),
            found: alpha.dim(),
        });
    }
    if f_jet.dim() != g_jet.out_dim() {
        return Err(Error::DimensionMismatch {
            context: "f argument vs g output dimension",
            expected: g_jet.out_dim(),
            found: f_jet.dim(),
        });
    }
    let n = alpha.cardinality();
    if n == 0 {
        return Err(Error::EmptyIndex {
            context: "derivative composition",
        });
    }
    if f_jet.order() < n {
        return Err(Error::InsufficientOrder {
            input: "f_jet",
            order: f_jet.order(),
            needed: n,
        });
    }
    if g_jet.order() < n {
        return Err(Error::InsufficientOrder {
            input: "g_jet",
            order: g_jet.order(),
            needed: n,
        });
    }
    Ok(())
}

/// ∂_α(f∘g) by direct summation over ordered component tuples b.
pub fn compose_derivative<S: Scalar>(
    alpha: &MultisetIndex,
    f_jet: &DerivativeTensor<S>,
    g_jet: &MapJet<S>,
) -> Result<S> {
    check_inputs(alpha, f_jet, g_jet)?;
    let c = g_jet.out_dim();
    let mut acc = S::zero();
    for n in 1..=alpha.cardinality() {
        for (p, mult) in multiset_partitions(alpha, n).entries() {
            let weight = S::from_count(mult);
            for b in index_tuples(c, n) {
                let f_index =
                    MultisetIndex::from_labels(c, &b).expect("components within carrier");
                let mut term = f_jet.entry(&f_index)?.clone();
                for (block, &bk) in p.blocks().iter().zip(&b) {
                    term = term.mul(g_jet.component(bk).entry(block)?);
                }
                acc = acc.add(&weight.mul(&term));
            }
        }
    }
    Ok(acc)
}

/// Symmetrized inner derivative: Σ over orderings (b_1, …, b_n) of β of
/// ∏_k ∂_{blocks[k]} g^{b_k}. The block list and β must have equal length.
pub fn g_beta_derivative<S: Scalar>(
    blocks: &[MultisetIndex],
    beta: &MultisetIndex,
    g_jet: &MapJet<S>,
) -> Result<S> {
    if beta.cardinality() != blocks.len() {
        return Err(Error::DimensionMismatch {
            context: "component bag size vs block count",
            expected: blocks.len(),
            found: beta.cardinality(),
        });
    }
    if beta.dim() != g_jet.out_dim() {
        return Err(Error::DimensionMismatch {
            context: "component bag vs g output dimension",
            expected: g_jet.out_dim(),
            found: beta.dim(),
        });
    }
    let mut acc = S::zero();
    for labeling in beta.labelings() {
        let mut term = S::one();
        for (block, &bk) in blocks.iter().zip(labeling.entries()) {
            term = term.mul(g_jet.component(bk).entry(block)?);
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// ∂_α(f∘g) with the inner sum regrouped over multisets β of components:
/// Σ_n Σ_{β ∈ Bag^n(c)} Σ_{(p, mult)} mult · ∂_β f · g_beta_derivative.
pub fn compose_derivative_beta<S: Scalar>(
    alpha: &MultisetIndex,
    f_jet: &DerivativeTensor<S>,
    g_jet: &MapJet<S>,
) -> Result<S> {
    check_inputs(alpha, f_jet, g_jet)?;
    let c = g_jet.out_dim();
    let mut acc = S::zero();
    for n in 1..=alpha.cardinality() {
        let enumeration = multiset_partitions(alpha, n);
        for beta in enumerate_bag(c, n) {
            for (p, mult) in enumeration.entries() {
                let weight = S::from_count(mult);
                let f_term = f_jet.entry(&beta)?.clone();
                let g_term = g_beta_derivative(p.blocks(), &beta, g_jet)?;
                acc = acc.add(&weight.mul(&f_term).mul(&g_term));
            }
        }
    }
    Ok(acc)
}

/// Full jet of f ∘ g up to `order`: the order-zero slot carries f's value at
/// the image point, higher slots come from `compose_derivative`.
pub fn compose_jet<S: Scalar>(
    f_jet: &DerivativeTensor<S>,
    g_jet: &MapJet<S>,
    order: usize,
) -> Result<DerivativeTensor<S>> {
    if f_jet.dim() != g_jet.out_dim() {
        return Err(Error::DimensionMismatch {
            context: "f argument vs g output dimension",
            expected: g_jet.out_dim(),
            found: f_jet.dim(),
        });
    }
    if f_jet.order() < order {
        return Err(Error::InsufficientOrder {
            input: "f_jet",
            order: f_jet.order(),
            needed: order,
        });
    }
    if g_jet.order() < order {
        return Err(Error::InsufficientOrder {
            input: "g_jet",
            order: g_jet.order(),
            needed: order,
        });
    }
    let dim = g_jet.in_dim();
    let mut entries = std::collections::HashMap::new();
    for n in 0..=order {
        for idx in enumerate_bag(dim, n) {
            let value = if n == 0 {
                f_jet.value().clone()
            } else {
                compose_derivative(&idx, f_jet, g_jet)?
            };
            entries.insert(idx, value);
        }
    }
    DerivativeTensor::try_new(dim, order, entries)
}
