//! Brute-force ground truth: a minimal expression language with first-order
//! differentiation. Jets built here by repeated differentiation are
//! independent of the combinatorial engine and pin down its correctness on
//! explicit compositions.

use std::collections::HashMap;
use std::fmt;

use num::{BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::multiset::{enumerate_bag, MultisetIndex};
use crate::scalar::Scalar;
use crate::tensor::{DerivativeTensor, MapJet};

#[derive(Clone, PartialEq, Debug)]
pub enum Expr {
    Const(BigRational),
    /// 1-based variable index.
    Var(usize),
    Sum(Box<Expr>, Box<Expr>),
    Product(Box<Expr>, Box<Expr>),
    Negate(Box<Expr>),
    IntPower(Box<Expr>, u32),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
}

impl Expr {
    pub fn constant(q: BigRational) -> Expr {
        Expr::Const(q)
    }

    pub fn int(n: i64) -> Expr {
        Expr::Const(BigRational::from_integer(n.into()))
    }

    pub fn var(v: usize) -> Expr {
        assert!(v >= 1, "variables are 1-based");
        Expr::Var(v)
    }

    /// Sum with literal-zero and constant folding, enough to keep repeated
    /// differentiation from drowning in dead nodes.
    pub fn sum(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Const(x), Expr::Const(y)) => Expr::Const(x + y),
            (Expr::Const(x), e) | (e, Expr::Const(x)) if x.is_zero() => e,
            (a, b) => Expr::Sum(Box::new(a), Box::new(b)),
        }
    }

    pub fn product(a: Expr, b: Expr) -> Expr {
        match (a, b) {
            (Expr::Const(x), Expr::Const(y)) => Expr::Const(x * y),
            (Expr::Const(x), _) | (_, Expr::Const(x)) if x.is_zero() => Expr::int(0),
            (Expr::Const(x), e) | (e, Expr::Const(x)) if x.is_one() => e,
            (a, b) => Expr::Product(Box::new(a), Box::new(b)),
        }
    }

    pub fn negate(a: Expr) -> Expr {
        match a {
            Expr::Const(x) => Expr::Const(-x),
            Expr::Negate(inner) => *inner,
            a => Expr::Negate(Box::new(a)),
        }
    }

    pub fn int_power(a: Expr, exp: u32) -> Expr {
        match (a, exp) {
            (_, 0) => Expr::int(1),
            (a, 1) => a,
            (Expr::Const(x), exp) => Expr::Const(num::pow::pow(x, exp as usize)),
            (a, exp) => Expr::IntPower(Box::new(a), exp),
        }
    }

    pub fn sin(a: Expr) -> Expr {
        Expr::Sin(Box::new(a))
    }

    pub fn cos(a: Expr) -> Expr {
        Expr::Cos(Box::new(a))
    }

    pub fn exp(a: Expr) -> Expr {
        Expr::Exp(Box::new(a))
    }

    /// Largest variable index appearing in the tree; 0 for closed terms.
    pub fn max_var(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(v) => *v,
            Expr::Sum(a, b) | Expr::Product(a, b) => a.max_var().max(b.max_var()),
            Expr::Negate(a) | Expr::Sin(a) | Expr::Cos(a) | Expr::Exp(a) => a.max_var(),
            Expr::IntPower(a, _) => a.max_var(),
        }
    }

    pub fn is_polynomial(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var(_) => true,
            Expr::Sum(a, b) | Expr::Product(a, b) => a.is_polynomial() && b.is_polynomial(),
            Expr::Negate(a) | Expr::IntPower(a, _) => a.is_polynomial(),
            Expr::Sin(_) | Expr::Cos(_) | Expr::Exp(_) => false,
        }
    }

    /// First-order partial derivative along variable `v`.
    pub fn diff(&self, v: usize) -> Expr {
        match self {
            Expr::Const(_) => Expr::int(0),
            Expr::Var(w) => {
                if *w == v {
                    Expr::int(1)
                } else {
                    Expr::int(0)
                }
            }
            Expr::Sum(a, b) => Expr::sum(a.diff(v), b.diff(v)),
            Expr::Product(a, b) => Expr::sum(
                Expr::product(a.diff(v), (**b).clone()),
                Expr::product((**a).clone(), b.diff(v)),
            ),
            Expr::Negate(a) => Expr::negate(a.diff(v)),
            Expr::IntPower(a, k) => Expr::product(
                Expr::int(*k as i64),
                Expr::product(Expr::int_power((**a).clone(), k - 1), a.diff(v)),
            ),
            Expr::Sin(a) => Expr::product(Expr::cos((**a).clone()), a.diff(v)),
            Expr::Cos(a) => Expr::negate(Expr::product(Expr::sin((**a).clone()), a.diff(v))),
            Expr::Exp(a) => Expr::product(Expr::exp((**a).clone()), a.diff(v)),
        }
    }

    /// Repeated differentiation along an explicit label sequence.
    pub fn diff_along(&self, labels: &[usize]) -> Expr {
        let mut e = self.clone();
        for &v in labels {
            e = e.diff(v);
        }
        e
    }

    /// ∂_α, differentiating along the canonical (ascending) labeling of α.
    /// Mixed partials commute, so any labeling gives the same function.
    pub fn diff_multi(&self, alpha: &MultisetIndex) -> Expr {
        self.diff_along(&alpha.to_labels())
    }

    /// Evaluates at a point; the scalar mode decides whether transcendental
    /// nodes are allowed.
    pub fn eval<S: Scalar>(&self, point: &[S]) -> Result<S> {
        match self {
            Expr::Const(q) => Ok(S::from_rational(q)),
            Expr::Var(v) => point
                .get(*v - 1)
                .cloned()
                .ok_or(Error::LabelOutOfRange {
                    label: *v,
                    dim: point.len(),
                }),
            Expr::Sum(a, b) => Ok(a.eval(point)?.add(&b.eval(point)?)),
            Expr::Product(a, b) => Ok(a.eval(point)?.mul(&b.eval(point)?)),
            Expr::Negate(a) => Ok(a.eval(point)?.neg()),
            Expr::IntPower(a, k) => Ok(a.eval(point)?.powi(*k)),
            Expr::Sin(a) => a.eval(point)?.try_sin(),
            Expr::Cos(a) => a.eval(point)?.try_cos(),
            Expr::Exp(a) => a.eval(point)?.try_exp(),
        }
    }

    /// Replaces variable v by `subs[v-1]` everywhere, building the explicit
    /// composition f(g¹, …, g^c).
    pub fn substitute(&self, subs: &[Expr]) -> Result<Expr> {
        Ok(match self {
            Expr::Const(q) => Expr::Const(q.clone()),
            Expr::Var(v) => subs
                .get(*v - 1)
                .cloned()
                .ok_or(Error::LabelOutOfRange {
                    label: *v,
                    dim: subs.len(),
                })?,
            Expr::Sum(a, b) => Expr::sum(a.substitute(subs)?, b.substitute(subs)?),
            Expr::Product(a, b) => Expr::product(a.substitute(subs)?, b.substitute(subs)?),
            Expr::Negate(a) => Expr::negate(a.substitute(subs)?),
            Expr::IntPower(a, k) => Expr::int_power(a.substitute(subs)?, *k),
            Expr::Sin(a) => Expr::sin(a.substitute(subs)?),
            Expr::Cos(a) => Expr::cos(a.substitute(subs)?),
            Expr::Exp(a) => Expr::exp(a.substitute(subs)?),
        })
    }
}

impl fmt::Display for Expr {
    /// Prefix s-expression form, parseable by `parse_expr`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(q) => {
                if q.is_negative() {
                    write!(f, "(- {})", -q.clone())
                } else {
                    write!(f, "{q}")
                }
            }
            Expr::Var(v) => write!(f, "x{v}"),
            Expr::Sum(a, b) => write!(f, "(+ {a} {b})"),
            Expr::Product(a, b) => write!(f, "(* {a} {b})"),
            Expr::Negate(a) => write!(f, "(- {a})"),
            Expr::IntPower(a, k) => write!(f, "(^ {a} {k})"),
            Expr::Sin(a) => write!(f, "(sin {a})"),
            Expr::Cos(a) => write!(f, "(cos {a})"),
            Expr::Exp(a) => write!(f, "(exp {a})"),
        }
    }
}

/// Derivative tensor of one expression at a point, by repeated symbolic
/// differentiation. Each index of level n extends one level-(n-1) tree, so
/// common prefixes are differentiated once.
pub fn jet_of_fn<S: Scalar>(
    expr: &Expr,
    point: &[S],
    order: usize,
) -> Result<DerivativeTensor<S>> {
    let dim = point.len();
    if dim == 0 {
        return Err(Error::InvalidDimension {
            what: "evaluation point dimension",
            found: 0,
        });
    }
    if expr.max_var() > dim {
        return Err(Error::LabelOutOfRange {
            label: expr.max_var(),
            dim,
        });
    }
    let mut entries = HashMap::new();
    let mut level: HashMap<MultisetIndex, Expr> = HashMap::new();
    level.insert(MultisetIndex::empty(dim), expr.clone());
    entries.insert(MultisetIndex::empty(dim), expr.eval(point)?);
    for n in 1..=order {
        let mut next: HashMap<MultisetIndex, Expr> = HashMap::new();
        for idx in enumerate_bag(dim, n) {
            let v = idx.support().next().expect("level n >= 1 is nonempty");
            let mut reduced = idx.multiplicities().to_vec();
            reduced[v - 1] -= 1;
            let parent = MultisetIndex::new(dim, reduced).expect("same carrier");
            let tree = level[&parent].diff(v);
            entries.insert(idx.clone(), tree.eval(point)?);
            next.insert(idx, tree);
        }
        level = next;
    }
    DerivativeTensor::try_new(dim, order, entries)
}

/// MapJet of (g¹, …, g^c) at a point, each component by `jet_of_fn`.
pub fn jet_of_map<S: Scalar>(exprs: &[Expr], point: &[S], order: usize) -> Result<MapJet<S>> {
    let components = exprs
        .iter()
        .map(|e| jet_of_fn(e, point, order))
        .collect::<Result<Vec<_>>>()?;
    MapJet::new(point.to_vec(), components)
}

/// Agreement of one derivative entry between the chain-rule engine and the
/// oracle differentiation of the explicit composition.
#[derive(Clone, Debug)]
pub struct CompositionCheck<S: Scalar> {
    pub index: MultisetIndex,
    pub engine: S,
    pub oracle: S,
    pub matches: bool,
}

#[derive(Clone, Debug)]
pub struct CompositionReport<S: Scalar> {
    pub checks: Vec<CompositionCheck<S>>,
    pub worst_rel_error: f64,
}

impl<S: Scalar> CompositionReport<S> {
    pub fn all_match(&self) -> bool {
        self.checks.iter().all(|c| c.matches)
    }

    pub fn first_mismatch(&self) -> Option<&CompositionCheck<S>> {
        self.checks.iter().find(|c| !c.matches)
    }
}

/// Runs the chain-rule engine against brute force: substitutes g into f
/// syntactically, differentiates the composition directly, and compares
/// every entry up to `order` with compose_jet on oracle-built jets.
pub fn verify_composition<S: Scalar>(
    f: &Expr,
    g: &[Expr],
    point: &[S],
    order: usize,
) -> Result<CompositionReport<S>> {
    if g.is_empty() {
        return Err(Error::InvalidDimension {
            what: "component count",
            found: 0,
        });
    }
    if f.max_var() > g.len() {
        return Err(Error::LabelOutOfRange {
            label: f.max_var(),
            dim: g.len(),
        });
    }
    let composed = f.substitute(g)?;
    let oracle_jet = jet_of_fn(&composed, point, order)?;
    let g_jet = jet_of_map(g, point, order)?;
    let f_jet = jet_of_fn(f, &g_jet.image_point(), order)?;
    let engine_jet = crate::compose::compose_jet(&f_jet, &g_jet, order)?;

    let mut checks = Vec::new();
    let mut worst = 0.0f64;
    for (index, oracle_value) in oracle_jet.iter_canonical() {
        let engine_value = engine_jet.entry(&index)?.clone();
        let matches = engine_value.approx_matches(oracle_value);
        let err = engine_value.rel_error(oracle_value);
        if err > worst {
            worst = err;
        }
        checks.push(CompositionCheck {
            index,
            engine: engine_value,
            oracle: oracle_value.clone(),
            matches,
        });
    }
    Ok(CompositionReport {
        checks,
        worst_rel_error: worst,
    })
}
