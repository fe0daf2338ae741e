//! Acceptance gate: one test per shipped claim, each printing a single
//! pass line (visible with --nocapture) and asserting its runtime budget.
//! Tolerances and bounds are pinned here, not configurable.

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num::{BigRational, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use faadibruno::oracle::jet_of_fn;
use faadibruno::{
    bell, compose_derivative, compose_derivative_beta, enumerate_bag, expand_symbolic,
    extend_partitions, faa_di_bruno_1d, multiset_partitions, multiset_partitions_reference,
    stirling2, verify_composition, DerivativeTensor, Expr, MapJet, MultisetIndex,
    MultisetPartition, PartitionEnumeration, Scalar,
};

fn pass(criterion: usize, name: &str, start: Instant, budget: Duration) {
    let elapsed = start.elapsed();
    assert!(
        elapsed < budget,
        "[acceptance] criterion {criterion} ({name}): FAIL, took {elapsed:?} over budget {budget:?}"
    );
    println!(
        "[acceptance] criterion {criterion} ({name}): PASS in {:.3}s (budget {:?})",
        elapsed.as_secs_f64(),
        budget
    );
}

fn labels(dim: usize, ls: &[usize]) -> MultisetIndex {
    MultisetIndex::from_labels(dim, ls).unwrap()
}

#[test]
fn criterion_1_worked_example() {
    let start = Instant::now();
    let alpha = labels(2, &[1, 1, 2]);
    let enumeration = multiset_partitions(&alpha, 2);
    assert_eq!(enumeration.total_multiplicity(), BigUint::from(3u32));
    assert_eq!(enumeration.distinct_count(), 2);
    let split = MultisetPartition::new(2, vec![labels(2, &[1]), labels(2, &[1, 2])]).unwrap();
    let pair = MultisetPartition::new(2, vec![labels(2, &[2]), labels(2, &[1, 1])]).unwrap();
    assert_eq!(enumeration.multiplicity_of(&split), Some(&BigUint::from(2u32)));
    assert_eq!(enumeration.multiplicity_of(&pair), Some(&BigUint::from(1u32)));
    // Warm timing: the enumeration itself must come in far under a millisecond.
    let mut best = Duration::MAX;
    for _ in 0..10 {
        let t = Instant::now();
        std::hint::black_box(multiset_partitions(&alpha, 2));
        best = best.min(t.elapsed());
    }
    assert!(
        best < Duration::from_millis(1),
        "[acceptance] criterion 1 (worked example): FAIL, enumeration took {best:?}"
    );
    pass(1, "worked example", start, Duration::from_secs(5));
}

#[test]
fn criterion_2_cardinality_exhaustive() {
    let start = Instant::now();
    for dim in 1..=3usize {
        for n in 0..=8usize {
            for alpha in enumerate_bag(dim, n) {
                let mut bell_sum = BigUint::from(0u32);
                for k in 0..=n + 1 {
                    let enumeration = multiset_partitions(&alpha, k);
                    let total = enumeration.total_multiplicity();
                    assert_eq!(
                        total,
                        stirling2(n, k),
                        "[acceptance] criterion 2: FAIL at alpha={alpha}, k={k}"
                    );
                    if k <= n {
                        bell_sum += total;
                    }
                }
                assert_eq!(
                    bell_sum,
                    bell(n),
                    "[acceptance] criterion 2: FAIL Bell sum at alpha={alpha}"
                );
            }
        }
    }
    pass(2, "cardinality exhaustive", start, Duration::from_secs(30));
}

#[test]
fn criterion_3_extension_recursion() {
    let start = Instant::now();
    let mut memo: HashMap<(MultisetIndex, usize), PartitionEnumeration> = HashMap::new();
    fn get<'a>(
        memo: &'a mut HashMap<(MultisetIndex, usize), PartitionEnumeration>,
        a: &MultisetIndex,
        k: usize,
    ) -> &'a PartitionEnumeration {
        memo.entry((a.clone(), k))
            .or_insert_with(|| multiset_partitions(a, k))
    }
    for dim in 1..=3usize {
        // Parents up to cardinality 8 cover every inner index up to 7.
        for n in 1..=8usize {
            for parent in enumerate_bag(dim, n) {
                for a0 in parent.support().collect::<Vec<_>>() {
                    let mut mult = parent.multiplicities().to_vec();
                    mult[a0 - 1] -= 1;
                    let alpha = MultisetIndex::new(dim, mult).unwrap();
                    for k in 1..=n + 1 {
                        let prev = get(&mut memo, &alpha, k - 1).clone();
                        let same = get(&mut memo, &alpha, k).clone();
                        let grown = extend_partitions(a0, &prev, &same).unwrap();
                        let direct = get(&mut memo, &parent, k);
                        assert_eq!(
                            &grown, direct,
                            "[acceptance] criterion 3: FAIL at parent={parent}, a0={a0}, k={k}"
                        );
                    }
                }
            }
        }
    }
    pass(3, "extension recursion", start, Duration::from_secs(60));
}

#[test]
fn criterion_4_golden_formulas() {
    let start = Instant::now();
    let golden_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let cases = [
        ("[1,0]", "2", "expand_order1.txt"),
        ("[1,1]", "2", "expand_order2.txt"),
        ("[1,1,1]", "3", "expand_order3.txt"),
    ];
    for (alpha, c, golden_name) in cases {
        let out = Command::new(env!("CARGO_BIN_EXE_faadibruno"))
            .args(["expand", "--alpha", alpha, "--c", c])
            .output()
            .expect("binary runs");
        assert!(out.status.success());
        let expected = std::fs::read_to_string(golden_dir.join(golden_name)).unwrap();
        assert_eq!(
            String::from_utf8(out.stdout).unwrap(),
            expected,
            "[acceptance] criterion 4: FAIL, {golden_name} diverged"
        );
    }
    // Structure of the three-distinct-variable case: unit coefficients
    // everywhere and exactly three symmetric two-block shapes.
    let expansion = expand_symbolic(&labels(3, &[1, 2, 3]), 3).unwrap();
    let mut two_block_shapes = std::collections::BTreeSet::new();
    for term in expansion.terms() {
        assert_eq!(term.coefficient(), &BigUint::from(1u32));
        if term.factors().len() == 2 {
            let mut shape: Vec<Vec<usize>> = term
                .factors()
                .iter()
                .map(|f| f.block().multiplicities().to_vec())
                .collect();
            shape.sort();
            two_block_shapes.insert(shape);
        }
    }
    assert_eq!(
        two_block_shapes.len(),
        3,
        "[acceptance] criterion 4: FAIL, second-order term shapes"
    );
    pass(4, "golden formulas", start, Duration::from_secs(30));
}

#[test]
fn criterion_5_one_dimensional_specialization() {
    let start = Instant::now();
    // Collapsing the multiset expansion by block-size signature must
    // reproduce the classical coefficient table exactly.
    for n in 1..=8usize {
        let alpha = MultisetIndex::new(1, vec![n]).unwrap();
        let expansion = expand_symbolic(&alpha, 1).unwrap();
        let mut collapsed: BTreeMap<(usize, Vec<usize>), BigUint> = BTreeMap::new();
        for term in expansion.terms() {
            let mut m = vec![0usize; n];
            for factor in term.factors() {
                m[factor.block().cardinality() - 1] += 1;
            }
            let key = (term.factors().len(), m);
            *collapsed.entry(key).or_default() += term.coefficient().clone();
        }
        let rows = faa_di_bruno_1d(n);
        assert_eq!(
            collapsed.len(),
            rows.len(),
            "[acceptance] criterion 5: FAIL, row count at n={n}"
        );
        for row in &rows {
            assert_eq!(
                collapsed.get(&(row.k, row.part_counts.clone())),
                Some(&row.coefficient),
                "[acceptance] criterion 5: FAIL at n={n}, k={}, m={:?}",
                row.k,
                row.part_counts
            );
        }
    }
    // Both routes against brute-force differentiation of a generic
    // polynomial pair: contract the table with the jets of f and g and
    // compare with the oracle jet of the substituted composition. Dense f,
    // sparse g; every derivative of either through order 8 is nonzero at
    // the base point, so each table row contributes a distinct product.
    let f = (0..=8).fold(Expr::int(0), |acc, i| {
        Expr::sum(
            acc,
            Expr::product(Expr::int(i as i64 + 1), Expr::int_power(Expr::var(1), i)),
        )
    });
    let g = Expr::sum(
        Expr::sum(
            Expr::int_power(Expr::var(1), 8),
            Expr::int_power(Expr::var(1), 2),
        ),
        Expr::sum(Expr::var(1), Expr::int(2)),
    );
    let x0 = BigRational::from_integer(1.into());
    let g_jet: DerivativeTensor<BigRational> = jet_of_fn(&g, &[x0.clone()], 8).unwrap();
    let g0 = g_jet.value().clone();
    let f_jet: DerivativeTensor<BigRational> = jet_of_fn(&f, &[g0], 8).unwrap();
    let h = f.substitute(&[g]).unwrap();
    let h_jet: DerivativeTensor<BigRational> = jet_of_fn(&h, &[x0], 8).unwrap();
    let entry1d = |t: &DerivativeTensor<BigRational>, n: usize| {
        t.entry(&MultisetIndex::new(1, vec![n]).unwrap()).unwrap().clone()
    };
    for n in 1..=8usize {
        let mut total = BigRational::from_integer(0.into());
        for row in faa_di_bruno_1d(n) {
            let mut term = <BigRational as Scalar>::from_count(&row.coefficient);
            term = term * entry1d(&f_jet, row.k);
            for (i, &m) in row.part_counts.iter().enumerate() {
                if m > 0 {
                    term = term * Scalar::powi(&entry1d(&g_jet, i + 1), m as u32);
                }
            }
            total = total + term;
        }
        assert_eq!(
            total,
            entry1d(&h_jet, n),
            "[acceptance] criterion 5: FAIL, oracle disagrees at n={n}"
        );
    }
    pass(5, "one-dimensional specialization", start, Duration::from_secs(10));
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let p: i64 = rng.gen_range(-9..=9);
    let q: i64 = rng.gen_range(1..=9);
    BigRational::new(p.into(), q.into())
}

fn random_index(rng: &mut ChaCha8Rng, dim: usize, max_card: usize) -> MultisetIndex {
    let card = rng.gen_range(1..=max_card);
    let ls: Vec<usize> = (0..card).map(|_| rng.gen_range(1..=dim)).collect();
    labels(dim, &ls)
}

fn random_tensor(rng: &mut ChaCha8Rng, dim: usize, order: usize) -> DerivativeTensor<BigRational> {
    DerivativeTensor::from_fn(dim, order, |_| random_rational(rng))
}

#[test]
fn criterion_6_route_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6001);
    for trial in 0..200usize {
        let d = rng.gen_range(1..=3);
        let c = rng.gen_range(1..=3);
        let alpha = random_index(&mut rng, d, 5);
        let order = alpha.cardinality();
        let f_jet = random_tensor(&mut rng, c, order);
        let base: Vec<BigRational> = (0..d).map(|_| random_rational(&mut rng)).collect();
        let components = (0..c).map(|_| random_tensor(&mut rng, d, order)).collect();
        let g_jet = MapJet::new(base, components).unwrap();
        let tuple_route = compose_derivative(&alpha, &f_jet, &g_jet).unwrap();
        let bag_route = compose_derivative_beta(&alpha, &f_jet, &g_jet).unwrap();
        assert_eq!(
            tuple_route, bag_route,
            "[acceptance] criterion 6: FAIL at trial {trial}, alpha={alpha}"
        );
    }
    pass(6, "route equivalence", start, Duration::from_secs(30));
}

fn random_polynomial(rng: &mut ChaCha8Rng, arity: usize) -> Expr {
    let mut terms: Vec<Expr> = Vec::new();
    for degree in 0..=3usize {
        for mono in enumerate_bag(arity, degree) {
            if !rng.gen_bool(0.4) {
                continue;
            }
            let coefficient = random_rational(rng);
            if coefficient == BigRational::from_integer(0.into()) {
                continue;
            }
            let mut term = Expr::constant(coefficient);
            for v in mono.support() {
                term = Expr::product(
                    term,
                    Expr::int_power(Expr::var(v), mono.multiplicity_of(v) as u32),
                );
            }
            terms.push(term);
        }
    }
    if terms.is_empty() {
        terms.push(Expr::var(rng.gen_range(1..=arity)));
    }
    let mut it = terms.into_iter();
    let first = it.next().unwrap();
    it.fold(first, Expr::sum)
}

#[test]
fn criterion_7_oracle_equivalence() {
    let start = Instant::now();
    // Rational mode: exact equality on seeded random polynomial pairs.
    let mut rng = ChaCha8Rng::seed_from_u64(7001);
    for trial in 0..100usize {
        let d = rng.gen_range(1..=3);
        let c = rng.gen_range(1..=3);
        let order = rng.gen_range(1..=5);
        let f = random_polynomial(&mut rng, c);
        let g: Vec<Expr> = (0..c).map(|_| random_polynomial(&mut rng, d)).collect();
        let point: Vec<BigRational> = (0..d).map(|_| random_rational(&mut rng)).collect();
        let report = verify_composition(&f, &g, &point, order).unwrap();
        assert!(
            report.all_match(),
            "[acceptance] criterion 7: FAIL at trial {trial}: f={f}, g={g:?}, index={}",
            report.first_mismatch().unwrap().index
        );
    }
    // Float mode: fixed transcendental suite within 1e-9 relative error.
    let half = || Expr::constant(BigRational::new(1.into(), 2.into()));
    let transcendental: Vec<(Expr, Vec<Expr>)> = vec![
        (
            Expr::sin(Expr::sum(Expr::var(1), Expr::var(2))),
            vec![
                Expr::product(Expr::var(1), Expr::var(2)),
                Expr::sum(Expr::var(1), Expr::var(2)),
            ],
        ),
        (
            Expr::exp(Expr::var(1)),
            vec![Expr::sum(Expr::int_power(Expr::var(1), 2), Expr::var(2))],
        ),
        (
            Expr::product(Expr::var(1), Expr::cos(Expr::var(2))),
            vec![
                Expr::sum(Expr::var(1), Expr::product(half(), Expr::var(2))),
                Expr::product(Expr::var(1), Expr::var(2)),
            ],
        ),
    ];
    for (case, (f, g)) in transcendental.into_iter().enumerate() {
        let point = vec![0.5f64, 1.0 / 3.0];
        let report = verify_composition(&f, &g, &point, 4).unwrap();
        assert!(
            report.all_match() && report.worst_rel_error <= 1e-9,
            "[acceptance] criterion 7: FAIL transcendental case {case}, worst {}",
            report.worst_rel_error
        );
    }
    pass(7, "oracle equivalence", start, Duration::from_secs(120));
}

#[test]
fn criterion_8_reference_vs_direct() {
    let start = Instant::now();
    for dim in 1..=3usize {
        for n in 0..=8usize {
            for alpha in enumerate_bag(dim, n) {
                for k in 0..=n + 1 {
                    let direct = multiset_partitions(&alpha, k);
                    let reference = multiset_partitions_reference(&alpha, k);
                    assert_eq!(
                        direct, reference,
                        "[acceptance] criterion 8: FAIL at alpha={alpha}, k={k}"
                    );
                }
            }
        }
    }
    pass(8, "reference vs direct enumeration", start, Duration::from_secs(60));
}
