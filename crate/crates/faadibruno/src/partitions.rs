//! Partitions of a multiset index into unordered nonempty blocks, counted
//! with multiplicity.
//!
//! A multiset can be split into the same family of blocks in several ways
//! once its repeated elements are distinguished, so an enumeration pairs each
//! distinct block family with the number of set partitions projecting onto
//! it. Example: [1, 1, 2] into two blocks gives {[1], [1, 2]} twice (either
//! copy of 1 can stand alone) and {[2], [1, 1]} once.
//!
//! Two independent generators are kept side by side. `multiset_partitions`
//! builds canonical block descents and computes each multiplicity by a
//! closed-form count; `multiset_partitions_reference` enumerates plain set
//! partitions of distinguished positions and tallies their projections. The
//! second is correct by definition and pins down the first in tests and in
//! the self-check command.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::str::FromStr;

use num::{BigUint, One, Zero};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::jsonutil::{as_array, as_object, as_str, as_usize, field};
use crate::multiset::MultisetIndex;
use crate::util::factorial;

/// A set partition of {1, …, n}: blocks ordered by smallest element, elements
/// ascending inside each block.
pub type SetPartition = Vec<Vec<usize>>;

/// All set partitions of {1, …, n} into exactly k nonempty blocks, in
/// restricted-growth-string order. `set_partitions(0, 0)` is the single empty
/// partition; `set_partitions(n, 0)` for n ≥ 1 and `set_partitions(0, k)` for
/// k ≥ 1 are empty.
pub fn set_partitions(n: usize, k: usize) -> Vec<SetPartition> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    // Restricted growth strings: a[i] <= 1 + max(a[..i]), classes = k.
    let mut rgs = vec![0usize; n];
    fn rec(rgs: &mut Vec<usize>, pos: usize, used: usize, n: usize, k: usize, out: &mut Vec<SetPartition>) {
        if pos == n {
            if used == k {
                let mut blocks: SetPartition = vec![Vec::new(); used];
                for (i, &b) in rgs.iter().enumerate() {
                    blocks[b].push(i + 1);
                }
                out.push(blocks);
            }
            return;
        }
        // Pruning: remaining positions must be able to reach k classes.
        if used + (n - pos) < k {
            return;
        }
        for b in 0..=used.min(k - 1) {
            rgs[pos] = b;
            rec(rgs, pos + 1, used.max(b + 1), n, k, out);
        }
    }
    if n == 0 {
        if k == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    if k == 0 {
        return out;
    }
    rec(&mut rgs, 0, 0, n, k, &mut out);
    out
}

/// Stirling number of the second kind S(n, k) via the standard recurrence
/// S(n, k) = k·S(n-1, k) + S(n-1, k-1).
pub fn stirling2(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    // row[j] = S(i, j) for the current i.
    let mut row = vec![BigUint::zero(); k + 1];
    row[0] = BigUint::one();
    for _i in 1..=n {
        for j in (1..=k).rev() {
            row[j] = BigUint::from(j) * &row[j] + &row[j - 1];
        }
        row[0] = BigUint::zero();
    }
    row[k].clone()
}

/// Bell number B(n) = Σ_k S(n, k).
pub fn bell(n: usize) -> BigUint {
    (0..=n).map(|k| stirling2(n, k)).sum()
}

/// Canonical order on blocks: larger cardinality first, ties broken
/// lexicographically on multiplicity vectors with the higher count of the
/// smallest label first. The tiebreak is dictionary order on the sorted
/// label sequences ([1,1] before [1,2] before [2,2]) and matches the
/// direction `enumerate_bag` uses.
pub fn canonical_block_cmp(a: &MultisetIndex, b: &MultisetIndex) -> Ordering {
    b.cardinality()
        .cmp(&a.cardinality())
        .then_with(|| b.multiplicities().cmp(a.multiplicities()))
}

/// An unordered family of nonempty sub-multisets, stored in canonical block
/// order. The carrier dimension is kept explicitly so the empty partition
/// (the unique partition of the empty index into zero blocks) stays typed.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultisetPartition {
    dim: usize,
    blocks: Vec<MultisetIndex>,
}

impl MultisetPartition {
    /// Builds a partition from blocks in any order; blocks are sorted
    /// canonically. Every block must be nonempty and share `dim`.
    pub fn new(dim: usize, mut blocks: Vec<MultisetIndex>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension {
                what: "partition carrier dimension",
                found: 0,
            });
        }
        for b in &blocks {
            if b.dim() != dim {
                return Err(Error::DimensionMismatch {
                    context: "partition block carrier",
                    expected: dim,
                    found: b.dim(),
                });
            }
            if b.is_empty() {
                return Err(Error::EmptyIndex {
                    context: "partition block",
                });
            }
        }
        blocks.sort_by(canonical_block_cmp);
        Ok(MultisetPartition { dim, blocks })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Blocks in canonical order.
    pub fn blocks(&self) -> &[MultisetIndex] {
        &self.blocks
    }

    /// Number of blocks.
    pub fn order(&self) -> usize {
        self.blocks.len()
    }

    /// Union of all blocks; the index this object partitions.
    pub fn parent(&self) -> MultisetIndex {
        let mut acc = MultisetIndex::empty(self.dim);
        for b in &self.blocks {
            acc = acc.union(b).expect("blocks share the carrier");
        }
        acc
    }

    fn compare(&self, other: &Self) -> Ordering {
        self.dim
            .cmp(&other.dim)
            .then(self.blocks.len().cmp(&other.blocks.len()))
            .then_with(|| {
                for (a, b) in self.blocks.iter().zip(&other.blocks) {
                    match canonical_block_cmp(a, b) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            })
    }

    fn to_json(&self) -> Value {
        Value::Array(self.blocks.iter().map(|b| b.to_json()).collect())
    }
}

impl PartialOrd for MultisetPartition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.compare(other))
    }
}

impl Ord for MultisetPartition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl std::fmt::Display for MultisetPartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "}}")
    }
}

/// All partitions of one parent index into a fixed number of blocks, each
/// with its multiplicity, in ascending partition order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartitionEnumeration {
    parent: MultisetIndex,
    k: usize,
    entries: Vec<(MultisetPartition, BigUint)>,
}

impl PartitionEnumeration {
    fn from_tally(
        parent: MultisetIndex,
        k: usize,
        tally: HashMap<MultisetPartition, BigUint>,
    ) -> Self {
        let mut entries: Vec<_> = tally.into_iter().collect();
        entries.sort_by(|(a, _), (b, _)| a.cmp(b));
        PartitionEnumeration { parent, k, entries }
    }

    pub fn parent(&self) -> &MultisetIndex {
        &self.parent
    }

    /// The block count k shared by every entry.
    pub fn order(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &[(MultisetPartition, BigUint)] {
        &self.entries
    }

    /// Number of distinct partitions.
    pub fn distinct_count(&self) -> usize {
        self.entries.len()
    }

    /// Sum of multiplicities; equals S(|parent|, k) when the parent's
    /// elements are pairwise distinct or not, always.
    pub fn total_multiplicity(&self) -> BigUint {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    pub fn multiplicity_of(&self, p: &MultisetPartition) -> Option<&BigUint> {
        self.entries
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, m)| m)
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("parent".into(), self.parent.to_json());
        obj.insert("k".into(), Value::from(self.k as u64));
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|(p, m)| {
                let mut e = Map::new();
                e.insert("blocks".into(), p.to_json());
                e.insert("multiplicity".into(), Value::String(m.to_string()));
                Value::Object(e)
            })
            .collect();
        obj.insert("entries".into(), Value::Array(entries));
        Value::Object(obj)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        as_object(v, "partition enumeration")?;
        let parent = MultisetIndex::from_json(field(v, "parent")?)?;
        let k = as_usize(field(v, "k")?, "k")?;
        let dim = parent.dim();
        let mut entries = Vec::new();
        for entry in as_array(field(v, "entries")?, "entries")? {
            let blocks_json = as_array(field(entry, "blocks")?, "blocks")?;
            let mut blocks = Vec::with_capacity(blocks_json.len());
            for b in blocks_json {
                let idx = MultisetIndex::from_json(b)?;
                if idx.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        context: "partition block carrier",
                        expected: dim,
                        found: idx.dim(),
                    });
                }
                blocks.push(idx);
            }
            let partition = MultisetPartition::new(dim, blocks)?;
            if partition.order() != k {
                return Err(Error::Schema {
                    context: format!(
                        "entry has {} blocks, enumeration order is {k}",
                        partition.order()
                    ),
                });
            }
            if partition.parent() != parent {
                return Err(Error::NotAPartitionOf {
                    parent: parent.to_string(),
                    blocks: partition.to_string(),
                });
            }
            let mult_str = as_str(field(entry, "multiplicity")?, "multiplicity")?;
            let mult = BigUint::from_str(mult_str).map_err(|_| Error::Schema {
                context: format!("multiplicity \"{mult_str}\" is not a decimal integer"),
            })?;
            if mult.is_zero() {
                return Err(Error::Schema {
                    context: "multiplicity must be positive".into(),
                });
            }
            entries.push((partition, mult));
        }
        let sorted = entries.windows(2).all(|w| w[0].0 < w[1].0);
        if !sorted {
            return Err(Error::Schema {
                context: "entries must be strictly ascending in canonical order".into(),
            });
        }
        Ok(PartitionEnumeration { parent, k, entries })
    }
}

/// Number of set partitions of the distinguished positions of `a` that
/// project onto the block family `p`: ∏_x m(x)! / ∏_i m_i(x)! divided by
/// ∏_j r_j! where r_j counts repeated blocks. The division is always exact.
pub fn partition_multiplicity(a: &MultisetIndex, p: &MultisetPartition) -> Result<BigUint> {
    if p.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            context: "partition vs parent carrier",
            expected: a.dim(),
            found: p.dim(),
        });
    }
    if &p.parent() != a {
        return Err(Error::NotAPartitionOf {
            parent: a.to_string(),
            blocks: p.to_string(),
        });
    }
    Ok(multiplicity_of_sorted_blocks(a, p.blocks()))
}

/// Same count, for blocks already validated as a partition of `a`.
fn multiplicity_of_sorted_blocks(a: &MultisetIndex, blocks: &[MultisetIndex]) -> BigUint {
    let mut num = BigUint::one();
    for &m in a.multiplicities() {
        num *= factorial(m);
    }
    let mut den = BigUint::one();
    for b in blocks {
        for &m in b.multiplicities() {
            den *= factorial(m);
        }
    }
    // Identical blocks are indistinguishable; divide by run lengths.
    let mut run = 1usize;
    for w in blocks.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            den *= factorial(run);
            run = 1;
        }
    }
    if !blocks.is_empty() {
        den *= factorial(run);
    }
    num / den
}

/// Direct generator: emits each distinct partition of `a` into exactly `k`
/// nonempty blocks once, with its multiplicity computed in closed form.
/// Out-of-range k yields an empty enumeration.
pub fn multiset_partitions(a: &MultisetIndex, k: usize) -> PartitionEnumeration {
    let n = a.cardinality();
    let mut tally = HashMap::new();
    if k == 0 {
        if n == 0 {
            tally.insert(
                MultisetPartition::new(a.dim(), Vec::new()).expect("empty partition"),
                BigUint::one(),
            );
        }
        return PartitionEnumeration::from_tally(a.clone(), k, tally);
    }
    if k > n {
        return PartitionEnumeration::from_tally(a.clone(), k, tally);
    }

    // Blocks are emitted in canonical (non-ascending cardinality) order; a
    // lower bound on each next block rules out permuted duplicates.
    let mut remaining = a.multiplicities().to_vec();
    let mut acc: Vec<MultisetIndex> = Vec::with_capacity(k);
    let dim = a.dim();
    let mut out: Vec<Vec<MultisetIndex>> = Vec::new();

    fn rec(
        remaining: &mut Vec<usize>,
        k_left: usize,
        bound: Option<MultisetIndex>,
        acc: &mut Vec<MultisetIndex>,
        dim: usize,
        out: &mut Vec<Vec<MultisetIndex>>,
    ) {
        let rem_card: usize = remaining.iter().sum();
        if k_left == 0 {
            if rem_card == 0 {
                out.push(acc.clone());
            }
            return;
        }
        if rem_card < k_left {
            return;
        }
        // Odometer over all nonempty sub-multisets of `remaining`.
        let mut sub = vec![0usize; dim];
        'next: loop {
            // Increment.
            let mut pos = 0;
            loop {
                if pos == dim {
                    return;
                }
                if sub[pos] < remaining[pos] {
                    sub[pos] += 1;
                    for s in sub.iter_mut().take(pos) {
                        *s = 0;
                    }
                    break;
                }
                pos += 1;
            }
            let card: usize = sub.iter().sum();
            let left = rem_card - card;
            if left < k_left - 1 || left > (k_left - 1) * card {
                continue 'next;
            }
            let candidate = MultisetIndex::new(dim, sub.clone()).expect("within carrier");
            if let Some(prev) = &bound {
                if canonical_block_cmp(&candidate, prev) == Ordering::Less {
                    continue 'next;
                }
            }
            for (r, s) in remaining.iter_mut().zip(&sub) {
                *r -= s;
            }
            acc.push(candidate.clone());
            rec(remaining, k_left - 1, Some(candidate), acc, dim, out);
            let candidate = acc.pop().expect("pushed above");
            for (r, s) in remaining.iter_mut().zip(candidate.multiplicities()) {
                *r += s;
            }
        }
    }

    rec(&mut remaining, k, None, &mut acc, dim, &mut out);
    for blocks in out {
        let mult = multiplicity_of_sorted_blocks(a, &blocks);
        let p = MultisetPartition::new(dim, blocks).expect("valid blocks");
        tally.insert(p, mult);
    }
    PartitionEnumeration::from_tally(a.clone(), k, tally)
}

/// Reference generator: distinguishes the |a| positions of the canonical
/// labeling, enumerates plain set partitions, projects each back to blocks
/// of labels and tallies. Correct by definition; quadratically slower.
pub fn multiset_partitions_reference(a: &MultisetIndex, k: usize) -> PartitionEnumeration {
    let labels = a.to_labels();
    let dim = a.dim();
    let mut tally: HashMap<MultisetPartition, BigUint> = HashMap::new();
    for sp in set_partitions(labels.len(), k) {
        let blocks: Vec<MultisetIndex> = sp
            .iter()
            .map(|block| {
                let picked: Vec<usize> = block.iter().map(|&pos| labels[pos - 1]).collect();
                MultisetIndex::from_labels(dim, &picked).expect("labels within carrier")
            })
            .collect();
        let p = MultisetPartition::new(dim, blocks).expect("valid blocks");
        *tally.entry(p).or_insert_with(BigUint::zero) += BigUint::one();
    }
    PartitionEnumeration::from_tally(a.clone(), k, tally)
}

/// Grows ([a0] ∪ α) partitions from partitions of α: either a0 forms the new
/// singleton block of a (k-1)-block partition of α, or a0 joins one of the
/// k blocks of a k-block partition of α, each join position counted once.
///
/// `into_k_minus_1` must enumerate Π(α, k-1) and `into_k` must enumerate
/// Π(α, k) for the same α; the result is Π([a0] ∪ α, k).
pub fn extend_partitions(
    a0: usize,
    into_k_minus_1: &PartitionEnumeration,
    into_k: &PartitionEnumeration,
) -> Result<PartitionEnumeration> {
    let alpha = into_k_minus_1.parent();
    if into_k.parent() != alpha {
        return Err(Error::IncompatibleEnumerations {
            reason: format!(
                "parents differ: {} vs {}",
                alpha,
                into_k.parent()
            ),
        });
    }
    if into_k.order() != into_k_minus_1.order() + 1 {
        return Err(Error::IncompatibleEnumerations {
            reason: format!(
                "orders {} and {} are not consecutive",
                into_k_minus_1.order(),
                into_k.order()
            ),
        });
    }
    let dim = alpha.dim();
    let single = MultisetIndex::singleton(dim, a0)?;
    let parent = alpha.union(&single)?;
    let k = into_k.order();

    let mut tally: HashMap<MultisetPartition, BigUint> = HashMap::new();
    for (p, m) in into_k_minus_1.entries() {
        let mut blocks = p.blocks().to_vec();
        blocks.push(single.clone());
        let grown = MultisetPartition::new(dim, blocks).expect("valid blocks");
        *tally.entry(grown).or_insert_with(BigUint::zero) += m;
    }
    for (p, m) in into_k.entries() {
        for pos in 0..p.order() {
            let mut blocks = p.blocks().to_vec();
            blocks[pos] = blocks[pos].union(&single).expect("same carrier");
            let grown = MultisetPartition::new(dim, blocks).expect("valid blocks");
            *tally.entry(grown).or_insert_with(BigUint::zero) += m;
        }
    }
    Ok(PartitionEnumeration::from_tally(parent, k, tally))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::ToPrimitive;
    use proptest::prelude::*;

    fn idx(dim: usize, labels: &[usize]) -> MultisetIndex {
        MultisetIndex::from_labels(dim, labels).unwrap()
    }

    fn part(dim: usize, blocks: &[&[usize]]) -> MultisetPartition {
        MultisetPartition::new(
            dim,
            blocks.iter().map(|b| idx(dim, b)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn set_partitions_of_three_into_two() {
        let ps = set_partitions(3, 2);
        assert_eq!(
            ps,
            vec![
                vec![vec![1, 2], vec![3]],
                vec![vec![1, 3], vec![2]],
                vec![vec![1], vec![2, 3]],
            ]
        );
    }

    #[test]
    fn set_partitions_degenerate_cases() {
        assert_eq!(set_partitions(0, 0), vec![Vec::<Vec<usize>>::new()]);
        assert!(set_partitions(0, 1).is_empty());
        assert!(set_partitions(1, 0).is_empty());
        assert!(set_partitions(2, 3).is_empty());
    }

    #[test]
    fn set_partition_counts_match_stirling() {
        for n in 0..=7 {
            for k in 0..=n + 1 {
                let count = set_partitions(n, k).len();
                assert_eq!(
                    BigUint::from(count),
                    stirling2(n, k),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn stirling_and_bell_values() {
        assert_eq!(stirling2(3, 2).to_u64(), Some(3));
        assert_eq!(stirling2(4, 2).to_u64(), Some(7));
        assert_eq!(stirling2(5, 3).to_u64(), Some(25));
        assert_eq!(stirling2(0, 0).to_u64(), Some(1));
        assert_eq!(stirling2(6, 9).to_u64(), Some(0));
        let bells: Vec<u64> = (0..=8).map(|n| bell(n).to_u64().unwrap()).collect();
        assert_eq!(bells, vec![1, 1, 2, 5, 15, 52, 203, 877, 4140]);
    }

    #[test]
    fn blocks_sort_canonically() {
        // Larger cardinality first; equal cardinality in dictionary order of
        // the label sequences: [1,1] < [1,2], then [1] < [2].
        let p = part(2, &[&[1], &[1, 2], &[1, 1], &[2]]);
        let got: Vec<&[usize]> = p.blocks().iter().map(|b| b.multiplicities()).collect();
        assert_eq!(got, vec![&[2, 0][..], &[1, 1][..], &[1, 0][..], &[0, 1][..]]);
    }

    #[test]
    fn worked_example_two_blocks() {
        let a = idx(2, &[1, 1, 2]);
        let e = multiset_partitions(&a, 2);
        assert_eq!(e.total_multiplicity().to_u64(), Some(3));
        assert_eq!(e.distinct_count(), 2);
        let p_split = part(2, &[&[1], &[1, 2]]);
        let p_pair = part(2, &[&[2], &[1, 1]]);
        assert_eq!(e.multiplicity_of(&p_split).and_then(|m| m.to_u64()), Some(2));
        assert_eq!(e.multiplicity_of(&p_pair).and_then(|m| m.to_u64()), Some(1));
        // Entry order: first blocks compare [1,1] < [1,2] canonically.
        assert_eq!(e.entries()[0].0, p_pair);
        assert_eq!(e.entries()[1].0, p_split);
    }

    #[test]
    fn repeated_elements_collapse() {
        let a = idx(2, &[1, 1]);
        let e = multiset_partitions(&a, 2);
        assert_eq!(e.distinct_count(), 1);
        assert_eq!(e.entries()[0].0, part(2, &[&[1], &[1]]));
        assert_eq!(e.entries()[0].1.to_u64(), Some(1));
        let whole = multiset_partitions(&a, 1);
        assert_eq!(whole.entries()[0].0, part(2, &[&[1, 1]]));
        assert_eq!(whole.total_multiplicity().to_u64(), Some(1));
    }

    #[test]
    fn four_element_example_counted_by_hand() {
        // Partitions of [1, 1, 1, 2] into 2 blocks, brute-forced over the 7
        // set partitions of 4 positions: {[1],[1,1,2]} three ways,
        // {[2],[1,1,1]} one way, {[1,1],[1,2]} three ways.
        let a = idx(2, &[1, 1, 1, 2]);
        let e = multiset_partitions(&a, 2);
        assert_eq!(e.distinct_count(), 3);
        assert_eq!(e.total_multiplicity().to_u64(), Some(7));
        let expect = [
            (part(2, &[&[1, 1, 1], &[2]]), 1),
            (part(2, &[&[1, 1, 2], &[1]]), 3),
            (part(2, &[&[1, 1], &[1, 2]]), 3),
        ];
        for (i, (p, m)) in expect.iter().enumerate() {
            assert_eq!(&e.entries()[i].0, p);
            assert_eq!(e.entries()[i].1.to_u64(), Some(*m));
        }
    }

    #[test]
    fn out_of_range_k_is_empty() {
        let a = idx(2, &[1, 1]);
        assert_eq!(multiset_partitions(&a, 3).distinct_count(), 0);
        assert_eq!(multiset_partitions(&a, 0).distinct_count(), 0);
        let empty = MultisetIndex::empty(2);
        let e = multiset_partitions(&empty, 0);
        assert_eq!(e.distinct_count(), 1);
        assert_eq!(e.entries()[0].0.order(), 0);
        assert_eq!(e.entries()[0].1.to_u64(), Some(1));
        assert_eq!(multiset_partitions(&empty, 1).distinct_count(), 0);
    }

    #[test]
    fn multiplicity_validates_partition() {
        let a = idx(2, &[1, 1, 2]);
        let good = part(2, &[&[1], &[1, 2]]);
        assert_eq!(partition_multiplicity(&a, &good).unwrap().to_u64(), Some(2));
        let wrong_parent = part(2, &[&[1], &[2, 2]]);
        assert!(matches!(
            partition_multiplicity(&a, &wrong_parent),
            Err(Error::NotAPartitionOf { .. })
        ));
        let wrong_dim = part(3, &[&[1], &[1, 2]]);
        assert!(matches!(
            partition_multiplicity(&a, &wrong_dim),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    /// Brute-force count of set partitions projecting to `p` under an
    /// arbitrary labeling, used as an independent check of the closed form.
    fn brute_multiplicity(labels: &[usize], dim: usize, p: &MultisetPartition) -> u64 {
        let mut count = 0;
        for sp in set_partitions(labels.len(), p.order()) {
            let blocks: Vec<MultisetIndex> = sp
                .iter()
                .map(|b| {
                    let picked: Vec<usize> = b.iter().map(|&pos| labels[pos - 1]).collect();
                    idx(dim, &picked)
                })
                .collect();
            if &MultisetPartition::new(dim, blocks).unwrap() == p {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn multiplicity_is_labeling_invariant() {
        let a = idx(2, &[1, 1, 1, 2]);
        let labelings = a.labelings();
        let first = labelings.first().unwrap().entries().to_vec();
        let last = labelings.last().unwrap().entries().to_vec();
        for (p, m) in multiset_partitions(&a, 2).entries() {
            let expected = m.to_u64().unwrap();
            assert_eq!(brute_multiplicity(&first, 2, p), expected, "{p}");
            assert_eq!(brute_multiplicity(&last, 2, p), expected, "{p}");
        }
    }

    #[test]
    fn extension_matches_worked_example() {
        let alpha = idx(2, &[1, 1]);
        let grown = extend_partitions(
            2,
            &multiset_partitions(&alpha, 1),
            &multiset_partitions(&alpha, 2),
        )
        .unwrap();
        assert_eq!(grown, multiset_partitions(&idx(2, &[1, 1, 2]), 2));
        assert_eq!(grown.entries()[0].1.to_u64(), Some(1));
        assert_eq!(grown.entries()[1].1.to_u64(), Some(2));
    }

    #[test]
    fn extension_rejects_mismatched_inputs() {
        let a = idx(2, &[1, 1]);
        let b = idx(2, &[1, 2]);
        assert!(matches!(
            extend_partitions(1, &multiset_partitions(&a, 1), &multiset_partitions(&b, 2)),
            Err(Error::IncompatibleEnumerations { .. })
        ));
        assert!(matches!(
            extend_partitions(1, &multiset_partitions(&a, 1), &multiset_partitions(&a, 1)),
            Err(Error::IncompatibleEnumerations { .. })
        ));
        assert!(matches!(
            extend_partitions(9, &multiset_partitions(&a, 1), &multiset_partitions(&a, 2)),
            Err(Error::LabelOutOfRange { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let a = idx(2, &[1, 1, 2]);
        let e = multiset_partitions(&a, 2);
        let v = e.to_json();
        assert_eq!(PartitionEnumeration::from_json(&v).unwrap(), e);
        let text = serde_json::to_string(&v).unwrap();
        assert!(text.contains("\"multiplicity\":\"2\""), "{text}");
    }

    #[test]
    fn json_rejects_corrupt_enumerations() {
        let a = idx(2, &[1, 1, 2]);
        let mut v = multiset_partitions(&a, 2).to_json();
        v["entries"][0]["multiplicity"] = Value::String("0".into());
        assert!(PartitionEnumeration::from_json(&v).is_err());
        let mut v2 = multiset_partitions(&a, 2).to_json();
        v2["entries"][0]["blocks"][0] = Value::Array(vec![Value::from(5u64), Value::from(5u64)]);
        assert!(PartitionEnumeration::from_json(&v2).is_err());
        let mut v3 = multiset_partitions(&a, 2).to_json();
        let e0 = v3["entries"][0].clone();
        let e1 = v3["entries"][1].clone();
        v3["entries"] = Value::Array(vec![e1, e0]);
        assert!(matches!(
            PartitionEnumeration::from_json(&v3),
            Err(Error::Schema { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn direct_equals_reference(
            mult in proptest::collection::vec(0usize..3, 1..4),
            k in 0usize..6,
        ) {
            let dim = mult.len();
            let a = MultisetIndex::new(dim, mult).unwrap();
            prop_assume!(a.cardinality() <= 5);
            prop_assert_eq!(
                multiset_partitions(&a, k),
                multiset_partitions_reference(&a, k)
            );
        }

        #[test]
        fn multiplicities_sum_to_stirling(
            mult in proptest::collection::vec(0usize..4, 1..4),
        ) {
            let dim = mult.len();
            let a = MultisetIndex::new(dim, mult).unwrap();
            prop_assume!(a.cardinality() <= 6);
            let n = a.cardinality();
            let mut total = BigUint::zero();
            for k in 0..=n {
                let e = multiset_partitions(&a, k);
                prop_assert_eq!(e.total_multiplicity(), stirling2(n, k));
                total += e.total_multiplicity();
            }
            prop_assert_eq!(total, bell(n));
        }

        #[test]
        fn extension_agrees_with_direct(
            mult in proptest::collection::vec(0usize..3, 1..4),
            a0 in 1usize..4,
            k in 1usize..6,
        ) {
            let dim = mult.len();
            prop_assume!(a0 <= dim);
            let alpha = MultisetIndex::new(dim, mult).unwrap();
            prop_assume!(alpha.cardinality() <= 4);
            let grown = extend_partitions(
                a0,
                &multiset_partitions(&alpha, k - 1),
                &multiset_partitions(&alpha, k),
            ).unwrap();
            let parent = alpha.union(&MultisetIndex::singleton(dim, a0).unwrap()).unwrap();
            prop_assert_eq!(grown, multiset_partitions(&parent, k));
        }
    }
}
