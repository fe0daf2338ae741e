//! Symbolic form of the chain-rule expansion: the full term list with
//! explicit integer coefficients, plus a summation-notation text rendering.
//!
//! Terms are ordered by ascending block count n, then lexicographic
//! component tuple, then canonical partition order, so output is stable for
//! golden-file comparison.

use num::{BigUint, One};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::multiset::MultisetIndex;
use crate::partitions::multiset_partitions;
use crate::util::index_tuples;

/// One factor ∂_block g^component of an expansion term.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Factor {
    block: MultisetIndex,
    component: usize,
}

impl Factor {
    pub fn block(&self) -> &MultisetIndex {
        &self.block
    }

    /// 1-based output coordinate of g.
    pub fn component(&self) -> usize {
        self.component
    }
}

/// coefficient · ∂_{b₁…bₙ} f · ∏ₖ ∂_{blockₖ} g^{bₖ}, with the coefficient
/// equal to the block family's partition multiplicity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExpansionTerm {
    factors: Vec<Factor>,
    coefficient: BigUint,
}

impl ExpansionTerm {
    /// Number of blocks n.
    pub fn order(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn coefficient(&self) -> &BigUint {
        &self.coefficient
    }

    /// The component tuple (b₁, …, bₙ) that f is differentiated against.
    pub fn f_components(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.component).collect()
    }
}

/// The expanded derivative ∂_α(f∘g) for g with `c` output components.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymbolicExpansion {
    alpha: MultisetIndex,
    c: usize,
    terms: Vec<ExpansionTerm>,
}

/// Expands ∂_α(f∘g) into its full term list over component tuples in
/// {1, …, c}ⁿ and partitions of α into n blocks.
pub fn expand_symbolic(alpha: &MultisetIndex, c: usize) -> Result<SymbolicExpansion> {
    if alpha.is_empty() {
        return Err(Error::EmptyIndex {
            context: "symbolic expansion",
        });
    }
    if c == 0 {
        return Err(Error::InvalidDimension {
            what: "component count",
            found: 0,
        });
    }
    let mut terms = Vec::new();
    for n in 1..=alpha.cardinality() {
        let enumeration = multiset_partitions(alpha, n);
        for b in index_tuples(c, n) {
            for (p, mult) in enumeration.entries() {
                let factors = p
                    .blocks()
                    .iter()
                    .zip(&b)
                    .map(|(block, &component)| Factor {
                        block: block.clone(),
                        component,
                    })
                    .collect();
                terms.push(ExpansionTerm {
                    factors,
                    coefficient: mult.clone(),
                });
            }
        }
    }
    Ok(SymbolicExpansion {
        alpha: alpha.clone(),
        c,
        terms,
    })
}

/// Subscript letter for 1-based position `pos` in the alphabet starting at
/// 'i'; positions past 'z' fall back to a numbered name.
fn position_letter(pos: usize, fallback: char) -> String {
    let offset = pos - 1;
    if offset < 18 {
        ((b'i' + offset as u8) as char).to_string()
    } else {
        format!("{fallback}{pos}")
    }
}

fn brace(sub: &str) -> String {
    if sub.chars().count() == 1 {
        sub.to_string()
    } else {
        format!("{{{sub}}}")
    }
}

impl SymbolicExpansion {
    pub fn alpha(&self) -> &MultisetIndex {
        &self.alpha
    }

    /// Number of output components of g.
    pub fn component_count(&self) -> usize {
        self.c
    }

    pub fn terms(&self) -> &[ExpansionTerm] {
        &self.terms
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("alpha".into(), self.alpha.to_json());
        obj.insert("c".into(), Value::from(self.c as u64));
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|t| {
                let mut term = Map::new();
                term.insert(
                    "f_components".into(),
                    Value::Array(
                        t.f_components()
                            .iter()
                            .map(|&b| Value::from(b as u64))
                            .collect(),
                    ),
                );
                term.insert(
                    "coefficient".into(),
                    Value::String(t.coefficient.to_string()),
                );
                let factors: Vec<Value> = t
                    .factors
                    .iter()
                    .map(|f| {
                        let mut factor = Map::new();
                        factor.insert("block".into(), f.block.to_json());
                        factor.insert("component".into(), Value::from(f.component as u64));
                        Value::Object(factor)
                    })
                    .collect();
                term.insert("factors".into(), Value::Array(factors));
                Value::Object(term)
            })
            .collect();
        obj.insert("terms".into(), Value::Array(terms));
        Value::Object(obj)
    }

    /// Summation-notation text, one group per (n, partition), grouped terms
    /// sharing their Σ over component letters. Variables of α take letters
    /// i, j, …; the component letters continue where the variables stop.
    pub fn render_text(&self) -> String {
        let d = self.alpha.dim();
        let var_symbol = |v: usize| position_letter(v, 'x');
        let alpha_sub: String = self.alpha.to_labels().iter().map(|&v| var_symbol(v)).collect();
        let mut lines = vec![format!("∂_{}(f∘g) =", brace(&alpha_sub))];
        let mut first = true;
        for n in 1..=self.alpha.cardinality() {
            let bounds: Vec<String> = (1..=n).map(|t| position_letter(d + t, 'b')).collect();
            let f_sub = bounds.concat();
            for (p, mult) in multiset_partitions(&self.alpha, n).entries() {
                let factors: Vec<String> = p
                    .blocks()
                    .iter()
                    .zip(&bounds)
                    .map(|(block, bound)| {
                        let sub: String =
                            block.to_labels().iter().map(|&v| var_symbol(v)).collect();
                        format!("∂_{} g^{}", brace(&sub), brace(bound))
                    })
                    .collect();
                let coefficient = if mult == &BigUint::one() {
                    String::new()
                } else {
                    format!("{mult}·")
                };
                let group = format!(
                    "{coefficient}Σ_{{{}=1}}^{{{}}} ∂_{}f · {}",
                    bounds.join(","),
                    self.c,
                    brace(&f_sub),
                    factors.join(" ")
                );
                if first {
                    lines.push(format!("    {group}"));
                    first = false;
                } else {
                    lines.push(format!("  + {group}"));
                }
            }
        }
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }
}
