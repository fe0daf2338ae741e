//! Built-in verification suites behind the CLI's `verify` subcommand.
//!
//! Four suites: exhaustive partition-count checks (direct vs reference
//! generator plus Stirling sums), the extension recursion against the direct
//! generator, equality of the two composition routes on random jets, and the
//! chain-rule engine against oracle differentiation of explicit
//! compositions. Mismatches become report content, not errors; errors are
//! reserved for unusable configurations.

use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::compose::{compose_derivative, compose_derivative_beta};
use crate::error::{Error, Result};
use crate::multiset::{enumerate_bag, MultisetIndex};
use crate::oracle::{verify_composition, Expr};
use crate::partitions::{
    extend_partitions, multiset_partitions, multiset_partitions_reference, stirling2,
};
use crate::scalar::{Mode, Scalar};
use crate::tensor::{DerivativeTensor, MapJet};

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub trials: usize,
    pub seed: u64,
    pub max_order: usize,
    pub in_dim: usize,
    pub out_dim: usize,
    pub mode: Mode,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            trials: 50,
            seed: 42,
            max_order: 4,
            in_dim: 2,
            out_dim: 2,
            mode: Mode::Rational,
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Schema {
                context: "trials must be at least 1".into(),
            });
        }
        if !(1..=5).contains(&self.max_order) {
            return Err(Error::Schema {
                context: format!("max order {} outside 1..=5", self.max_order),
            });
        }
        if !(1..=3).contains(&self.in_dim) || !(1..=3).contains(&self.out_dim) {
            return Err(Error::Schema {
                context: format!(
                    "dimensions {},{} outside 1..=3",
                    self.in_dim, self.out_dim
                ),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: usize,
    pub failures: usize,
    pub worst_rel_error: f64,
    pub first_counterexample: Option<Value>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport {
            name,
            checks: 0,
            failures: 0,
            worst_rel_error: 0.0,
            first_counterexample: None,
        }
    }

    fn record_failure(&mut self, counterexample: Value) {
        self.failures += 1;
        if self.first_counterexample.is_none() {
            self.first_counterexample = Some(counterexample);
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed())
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for suite in &self.suites {
            out.push_str(&format!(
                "suite {}: {} checks, {} failures",
                suite.name, suite.checks, suite.failures
            ));
            if suite.name == "route-equivalence" || suite.name == "oracle-composition" {
                out.push_str(&format!(", worst rel error {:.3e}", suite.worst_rel_error));
            }
            out.push('\n');
            if let Some(ce) = &suite.first_counterexample {
                out.push_str(&format!("  first counterexample: {ce}\n"));
            }
        }
        out.push_str(if self.all_passed() {
            "result: PASS\n"
        } else {
            "result: FAIL\n"
        });
        out
    }
}

/// Direct vs reference partition generators plus Stirling/Bell sums, over
/// every index with dim <= 3 and cardinality <= 5 (the acceptance tests run
/// the larger exhaustive sweep; this keeps `verify` interactive).
fn stirling_suite() -> SuiteReport {
    let mut suite = SuiteReport::new("stirling-counts");
    for dim in 1..=3usize {
        for n in 0..=5usize {
            for alpha in enumerate_bag(dim, n) {
                for k in 0..=n + 1 {
                    let direct = multiset_partitions(&alpha, k);
                    let reference = multiset_partitions_reference(&alpha, k);
                    suite.checks += 1;
                    if direct != reference {
                        suite.record_failure(json!({
                            "suite": "stirling-counts",
                            "alpha": alpha.to_json(),
                            "k": k,
                            "direct": direct.to_json(),
                            "reference": reference.to_json(),
                        }));
                    }
                    suite.checks += 1;
                    if direct.total_multiplicity() != stirling2(n, k) {
                        suite.record_failure(json!({
                            "suite": "stirling-counts",
                            "alpha": alpha.to_json(),
                            "k": k,
                            "total": direct.total_multiplicity().to_string(),
                            "stirling2": stirling2(n, k).to_string(),
                        }));
                    }
                }
            }
        }
    }
    suite
}

/// The growth recursion against the direct generator for every index with
/// dim <= 3, cardinality <= 4, every adjoined label and block count.
fn extension_suite() -> SuiteReport {
    let mut suite = SuiteReport::new("extension-recursion");
    for dim in 1..=3usize {
        for n in 0..=4usize {
            for alpha in enumerate_bag(dim, n) {
                for a0 in 1..=dim {
                    let parent = alpha
                        .union(&MultisetIndex::singleton(dim, a0).expect("label in range"))
                        .expect("same carrier");
                    for k in 1..=n + 1 {
                        let grown = extend_partitions(
                            a0,
                            &multiset_partitions(&alpha, k - 1),
                            &multiset_partitions(&alpha, k),
                        )
                        .expect("enumerations are consistent");
                        let direct = multiset_partitions(&parent, k);
                        suite.checks += 1;
                        if grown != direct {
                            suite.record_failure(json!({
                                "suite": "extension-recursion",
                                "alpha": alpha.to_json(),
                                "a0": a0,
                                "k": k,
                                "extended": grown.to_json(),
                                "direct": direct.to_json(),
                            }));
                        }
                    }
                }
            }
        }
    }
    suite
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let p: i64 = rng.gen_range(-9..=9);
    let q: i64 = rng.gen_range(1..=9);
    BigRational::new(p.into(), q.into())
}

fn random_index(rng: &mut ChaCha8Rng, dim: usize, max_card: usize) -> MultisetIndex {
    let card = rng.gen_range(1..=max_card);
    let labels: Vec<usize> = (0..card).map(|_| rng.gen_range(1..=dim)).collect();
    MultisetIndex::from_labels(dim, &labels).expect("labels within carrier")
}

fn random_tensor<S: Scalar>(rng: &mut ChaCha8Rng, dim: usize, order: usize) -> DerivativeTensor<S> {
    DerivativeTensor::from_fn(dim, order, |_| S::from_rational(&random_rational(rng)))
}

fn random_jet<S: Scalar>(
    rng: &mut ChaCha8Rng,
    in_dim: usize,
    out_dim: usize,
    order: usize,
) -> MapJet<S> {
    let base_point: Vec<S> = (0..in_dim)
        .map(|_| S::from_rational(&random_rational(rng)))
        .collect();
    let components = (0..out_dim)
        .map(|_| random_tensor(rng, in_dim, order))
        .collect();
    MapJet::new(base_point, components).expect("consistent by construction")
}

/// Random polynomial of total degree <= 3: each monomial included with
/// fixed probability, plus one guaranteed non-constant monomial.
fn random_polynomial(rng: &mut ChaCha8Rng, arity: usize) -> Expr {
    let mut terms: Vec<Expr> = Vec::new();
    for degree in 0..=3usize {
        for mono in enumerate_bag(arity, degree) {
            if !rng.gen_bool(0.35) {
                continue;
            }
            let coefficient = random_rational(rng);
            if coefficient == BigRational::from_integer(0.into()) {
                continue;
            }
            terms.push(monomial(&coefficient, &mono));
        }
    }
    if terms.is_empty() {
        let v = rng.gen_range(1..=arity);
        terms.push(Expr::var(v));
    }
    let mut it = terms.into_iter();
    let first = it.next().expect("at least one term");
    it.fold(first, Expr::sum)
}

fn monomial(coefficient: &BigRational, exponents: &MultisetIndex) -> Expr {
    let mut out = Expr::constant(coefficient.clone());
    for v in exponents.support() {
        out = Expr::product(
            out,
            Expr::int_power(Expr::var(v), exponents.multiplicity_of(v) as u32),
        );
    }
    out
}

/// Both composition routes on random jets must agree.
fn route_suite<S: Scalar>(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("route-equivalence");
    for _ in 0..cfg.trials {
        let f_jet = random_tensor::<S>(rng, cfg.out_dim, cfg.max_order);
        let g_jet = random_jet::<S>(rng, cfg.in_dim, cfg.out_dim, cfg.max_order);
        let alpha = random_index(rng, cfg.in_dim, cfg.max_order);
        let direct = compose_derivative(&alpha, &f_jet, &g_jet)?;
        let grouped = compose_derivative_beta(&alpha, &f_jet, &g_jet)?;
        suite.checks += 1;
        let err = direct.rel_error(&grouped);
        if err > suite.worst_rel_error {
            suite.worst_rel_error = err;
        }
        if !direct.approx_matches(&grouped) {
            suite.record_failure(json!({
                "suite": "route-equivalence",
                "alpha": alpha.to_json(),
                "f_jet": f_jet.to_json(),
                "g_jet": g_jet.to_json(),
                "tuple_route": direct.to_json(),
                "bag_route": grouped.to_json(),
            }));
        }
    }
    Ok(suite)
}

/// Chain-rule engine vs oracle differentiation on random polynomial
/// compositions; float mode appends a fixed transcendental suite.
fn oracle_suite<S: Scalar>(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Result<SuiteReport> {
    let mut suite = SuiteReport::new("oracle-composition");
    for trial in 0..cfg.trials {
        let f = random_polynomial(rng, cfg.out_dim);
        let g: Vec<Expr> = (0..cfg.out_dim)
            .map(|_| random_polynomial(rng, cfg.in_dim))
            .collect();
        let point: Vec<S> = (0..cfg.in_dim)
            .map(|_| S::from_rational(&random_rational(rng)))
            .collect();
        run_composition_case(&mut suite, trial, &f, &g, &point, cfg.max_order)?;
    }
    if S::MODE == Mode::Float {
        for (trial, (f, g, point)) in transcendental_cases().into_iter().enumerate() {
            let point: Vec<S> = point.iter().map(|q| S::from_rational(q)).collect();
            run_composition_case(&mut suite, cfg.trials + trial, &f, &g, &point, 4)?;
        }
    }
    Ok(suite)
}

fn run_composition_case<S: Scalar>(
    suite: &mut SuiteReport,
    trial: usize,
    f: &Expr,
    g: &[Expr],
    point: &[S],
    order: usize,
) -> Result<()> {
    let report = verify_composition(f, g, point, order)?;
    suite.checks += report.checks.len();
    if report.worst_rel_error > suite.worst_rel_error {
        suite.worst_rel_error = report.worst_rel_error;
    }
    for check in report.checks.iter().filter(|c| !c.matches) {
        suite.record_failure(json!({
            "suite": "oracle-composition",
            "trial": trial,
            "f": f.to_string(),
            "g": g.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "point": point.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
            "index": check.index.to_json(),
            "engine": check.engine.to_json(),
            "oracle": check.oracle.to_json(),
        }));
    }
    Ok(())
}

/// Fixed float-mode cases with sin/cos/exp; orders and points chosen so the
/// 1e-9 relative tolerance has comfortable margin.
fn transcendental_cases() -> Vec<(Expr, Vec<Expr>, Vec<BigRational>)> {
    let half = BigRational::new(1.into(), 2.into());
    let third = BigRational::new(1.into(), 3.into());
    let quarter = BigRational::new(1.into(), 4.into());
    let two_fifths = BigRational::new(2.into(), 5.into());
    let neg_third = BigRational::new((-1).into(), 3.into());
    vec![
        (
            Expr::sin(Expr::sum(Expr::var(1), Expr::var(2))),
            vec![
                Expr::product(Expr::var(1), Expr::var(2)),
                Expr::sum(Expr::var(1), Expr::var(2)),
            ],
            vec![half.clone(), third.clone()],
        ),
        (
            Expr::exp(Expr::var(1)),
            vec![Expr::sum(
                Expr::int_power(Expr::var(1), 2),
                Expr::var(2),
            )],
            vec![third, quarter],
        ),
        (
            Expr::product(Expr::var(1), Expr::cos(Expr::var(2))),
            vec![
                Expr::sum(Expr::var(1), Expr::int_power(Expr::var(2), 2)),
                Expr::product(Expr::var(1), Expr::var(2)),
            ],
            vec![two_fifths, neg_third],
        ),
    ]
}

pub fn run_verification(cfg: &VerifyConfig) -> Result<VerifyReport> {
    cfg.validate()?;
    let mut suites = vec![stirling_suite(), extension_suite()];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    match cfg.mode {
        Mode::Rational => {
            suites.push(route_suite::<BigRational>(cfg, &mut rng)?);
            suites.push(oracle_suite::<BigRational>(cfg, &mut rng)?);
        }
        Mode::Float => {
            suites.push(route_suite::<f64>(cfg, &mut rng)?);
            suites.push(oracle_suite::<f64>(cfg, &mut rng)?);
        }
    }
    Ok(VerifyReport { suites })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_rational_run_passes() {
        let cfg = VerifyConfig {
            trials: 10,
            ..VerifyConfig::default()
        };
        let report = run_verification(&cfg).unwrap();
        assert!(report.all_passed(), "{}", report.render_text());
        assert_eq!(report.suites.len(), 4);
        let text = report.render_text();
        assert!(text.contains("suite stirling-counts:"));
        assert!(text.contains("suite extension-recursion:"));
        assert!(text.contains("suite route-equivalence:"));
        assert!(text.contains("suite oracle-composition:"));
        assert!(text.ends_with("result: PASS\n"));
    }

    #[test]
    fn float_run_stays_within_tolerance() {
        let cfg = VerifyConfig {
            trials: 8,
            mode: Mode::Float,
            ..VerifyConfig::default()
        };
        let report = run_verification(&cfg).unwrap();
        assert!(report.all_passed(), "{}", report.render_text());
        let oracle = report
            .suites
            .iter()
            .find(|s| s.name == "oracle-composition")
            .unwrap();
        assert!(oracle.worst_rel_error <= 1e-9);
        // The transcendental cases contribute beyond the random trials.
        assert!(oracle.checks > 8);
    }

    #[test]
    fn same_seed_is_reproducible() {
        let cfg = VerifyConfig {
            trials: 6,
            seed: 2024,
            max_order: 3,
            ..VerifyConfig::default()
        };
        let a = run_verification(&cfg).unwrap().render_text();
        let b = run_verification(&cfg).unwrap().render_text();
        assert_eq!(a, b);
    }

    #[test]
    fn config_bounds_are_enforced() {
        let mut cfg = VerifyConfig::default();
        cfg.max_order = 6;
        assert!(run_verification(&cfg).is_err());
        cfg = VerifyConfig::default();
        cfg.in_dim = 4;
        assert!(run_verification(&cfg).is_err());
        cfg = VerifyConfig::default();
        cfg.trials = 0;
        assert!(run_verification(&cfg).is_err());
    }
}
