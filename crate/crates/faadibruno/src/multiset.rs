//! Multiset indices over a finite carrier {1, …, d}.
//!
//! A multiset index records how many times each variable appears in a mixed
//! partial derivative, so `[1, 1, 2]` over d = 2 is stored as the multiplicity
//! vector (2, 1). Order never matters; two indices are equal exactly when
//! their multiplicity vectors are.

use std::fmt;

use num::BigUint;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::jsonutil::{as_array, as_usize};
use crate::scalar::Scalar;
use crate::util::factorial;

/// A bag of variable labels drawn from {1, …, dim}, stored densely.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultisetIndex {
    dim: usize,
    mult: Vec<usize>,
}

impl MultisetIndex {
    /// Builds an index from its multiplicity vector; `mult.len()` must equal
    /// `dim` and `dim` must be positive.
    pub fn new(dim: usize, mult: Vec<usize>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension {
                what: "multiset index dimension",
                found: 0,
            });
        }
        if mult.len() != dim {
            return Err(Error::DimensionMismatch {
                context: "multiplicity vector length",
                expected: dim,
                found: mult.len(),
            });
        }
        Ok(MultisetIndex { dim, mult })
    }

    /// The empty bag over {1, …, dim}.
    pub fn empty(dim: usize) -> Self {
        assert!(dim >= 1, "carrier dimension must be positive");
        MultisetIndex {
            dim,
            mult: vec![0; dim],
        }
    }

    /// The bag holding `label` once.
    pub fn singleton(dim: usize, label: usize) -> Result<Self> {
        let mut out = MultisetIndex::new(dim, vec![0; dim])?;
        if label == 0 || label > dim {
            return Err(Error::LabelOutOfRange { label, dim });
        }
        out.mult[label - 1] = 1;
        Ok(out)
    }

    /// Builds an index by tallying a label sequence, e.g. `[1, 1, 2]`.
    pub fn from_labels(dim: usize, labels: &[usize]) -> Result<Self> {
        let mut out = MultisetIndex::new(dim, vec![0; dim])?;
        for &label in labels {
            if label == 0 || label > dim {
                return Err(Error::LabelOutOfRange { label, dim });
            }
            out.mult[label - 1] += 1;
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Multiplicity vector, indexed by label - 1.
    pub fn multiplicities(&self) -> &[usize] {
        &self.mult
    }

    /// Multiplicity of a 1-based label; labels outside the carrier have
    /// multiplicity zero.
    pub fn multiplicity_of(&self, label: usize) -> usize {
        if label == 0 || label > self.dim {
            0
        } else {
            self.mult[label - 1]
        }
    }

    /// Total number of elements counted with multiplicity, written |α|.
    pub fn cardinality(&self) -> usize {
        self.mult.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.mult.iter().all(|&m| m == 0)
    }

    /// Labels with positive multiplicity, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.mult
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(i, _)| i + 1)
    }

    /// The canonical (ascending) label sequence, e.g. (2, 1) -> [1, 1, 2].
    pub fn to_labels(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.cardinality());
        for (i, &m) in self.mult.iter().enumerate() {
            out.extend(std::iter::repeat(i + 1).take(m));
        }
        out
    }

    /// Componentwise sum of multiplicities. Both operands must share a
    /// carrier.
    pub fn union(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                context: "multiset union",
                expected: self.dim,
                found: other.dim,
            });
        }
        let mult = self
            .mult
            .iter()
            .zip(&other.mult)
            .map(|(a, b)| a + b)
            .collect();
        Ok(MultisetIndex {
            dim: self.dim,
            mult,
        })
    }

    /// All orderings of the bag as label sequences, lexicographically
    /// ascending. The empty bag has exactly one (empty) ordering.
    pub fn labelings(&self) -> Vec<Labeling> {
        let n = self.cardinality();
        let mut rem = self.mult.clone();
        let mut cur = Vec::with_capacity(n);
        let mut out = Vec::new();
        fn rec(rem: &mut [usize], cur: &mut Vec<usize>, n: usize, out: &mut Vec<Labeling>) {
            if cur.len() == n {
                out.push(Labeling {
                    entries: cur.clone(),
                });
                return;
            }
            for v in 0..rem.len() {
                if rem[v] > 0 {
                    rem[v] -= 1;
                    cur.push(v + 1);
                    rec(rem, cur, n, out);
                    cur.pop();
                    rem[v] += 1;
                }
            }
        }
        rec(&mut rem, &mut cur, n, &mut out);
        out
    }

    /// Number of distinct orderings, |α|! / ∏ m_i!.
    pub fn labeling_count(&self) -> BigUint {
        let mut acc = factorial(self.cardinality());
        for &m in &self.mult {
            acc /= factorial(m);
        }
        acc
    }

    /// Σ_v m_v · f(v), accumulated in ascending label order.
    pub fn weighted_sum<S: Scalar>(&self, mut f: impl FnMut(usize) -> S) -> S {
        let mut acc = S::zero();
        for (i, &m) in self.mult.iter().enumerate() {
            if m > 0 {
                let weight = S::from_count(&BigUint::from(m));
                acc = acc.add(&weight.mul(&f(i + 1)));
            }
        }
        acc
    }

    /// JSON form: the bare multiplicity vector, e.g. `[2, 1]`.
    pub fn to_json(&self) -> Value {
        Value::Array(self.mult.iter().map(|&m| Value::from(m as u64)).collect())
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = as_array(v, "multiset index")?;
        if arr.is_empty() {
            return Err(Error::InvalidDimension {
                what: "multiset index dimension",
                found: 0,
            });
        }
        let mut mult = Vec::with_capacity(arr.len());
        for item in arr {
            mult.push(as_usize(item, "multiset index entry")?);
        }
        MultisetIndex::new(arr.len(), mult)
    }
}

impl fmt::Display for MultisetIndex {
    /// Human form as the sorted label sequence: `[1, 1, 2]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (pos, label) in self.to_labels().into_iter().enumerate() {
            if pos > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{label}")?;
        }
        write!(f, "]")
    }
}

/// One ordering of a multiset index as a sequence of 1-based labels.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Labeling {
    entries: Vec<usize>,
}

impl Labeling {
    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for Labeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (pos, label) in self.entries.iter().enumerate() {
            if pos > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{label}")?;
        }
        write!(f, ")")
    }
}

/// All multiset indices over {1, …, dim} with cardinality exactly `n`,
/// ordered with the first multiplicity descending, then recursively on the
/// rest: for dim = 2, n = 2 this yields (2,0), (1,1), (0,2).
pub fn enumerate_bag(dim: usize, n: usize) -> Vec<MultisetIndex> {
    assert!(dim >= 1, "carrier dimension must be positive");
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(dim);
    fn rec(dim_left: usize, n_left: usize, prefix: &mut Vec<usize>, out: &mut Vec<MultisetIndex>) {
        if dim_left == 1 {
            prefix.push(n_left);
            let dim = prefix.len();
            out.push(MultisetIndex::new(dim, prefix.clone()).expect("constructed in range"));
            prefix.pop();
            return;
        }
        for m in (0..=n_left).rev() {
            prefix.push(m);
            rec(dim_left - 1, n_left - m, prefix, out);
            prefix.pop();
        }
    }
    rec(dim, n, &mut prefix, &mut out);
    out
}
