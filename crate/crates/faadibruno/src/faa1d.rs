//! Classical one-dimensional chain-rule coefficients.
//!
//! The n-th derivative of f∘g is Σ f^(k)(g(x)) · n!/(∏ mᵢ! (i!)^mᵢ) ·
//! ∏ (g^(i)(x))^mᵢ over all solutions of m₁ + 2m₂ + … + n·mₙ = n with
//! k = m₁ + … + mₙ. Each solution is an integer partition of n recorded by
//! its part-count vector m.

use num::BigUint;

use crate::util::factorial;

/// One row of the coefficient table.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Faa1dTerm {
    /// Order of the outer derivative, k = Σ mᵢ.
    pub k: usize,
    /// part_counts[i] = mᵢ₊₁ = number of parts of size i+1; length n.
    pub part_counts: Vec<usize>,
    /// n! / (∏ mᵢ! · ∏ (i!)^mᵢ).
    pub coefficient: BigUint,
}

/// All (k, m, coefficient) rows for order n, sorted by ascending k and then
/// descending lexicographic m. Row count equals the number of integer
/// partitions of n.
pub fn faa_di_bruno_1d(n: usize) -> Vec<Faa1dTerm> {
    let mut rows = Vec::new();
    let mut parts: Vec<usize> = Vec::new();
    fn rec(left: usize, max_part: usize, parts: &mut Vec<usize>, n: usize, rows: &mut Vec<Faa1dTerm>) {
        if left == 0 {
            let mut part_counts = vec![0usize; n];
            for &p in parts.iter() {
                part_counts[p - 1] += 1;
            }
            let mut denom = BigUint::from(1u32);
            for (i, &m) in part_counts.iter().enumerate() {
                denom *= factorial(m);
                denom *= num::pow::pow(factorial(i + 1), m);
            }
            rows.push(Faa1dTerm {
                k: parts.len(),
                part_counts,
                coefficient: factorial(n) / denom,
            });
            return;
        }
        for p in (1..=left.min(max_part)).rev() {
            parts.push(p);
            rec(left - p, p, parts, n, rows);
            parts.pop();
        }
    }
    if n == 0 {
        return rows;
    }
    rec(n, n, &mut parts, n, &mut rows);
    rows.sort_by(|a, b| {
        a.k.cmp(&b.k)
            .then_with(|| b.part_counts.cmp(&a.part_counts))
    });
    rows
}
