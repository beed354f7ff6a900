use entropy_adjoint::rational::{int, ratio};
use entropy_adjoint::{EntropySystem, FiniteOrder, LineEntropy, LineKind, Rational, State};
use num_bigint::BigInt;
use proptest::prelude::*;

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{i}")).collect()
}

/// Random relation on up to 7 elements as (n, declared pairs).
fn relation() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1usize..=7).prop_flat_map(|n| (Just(n), prop::collection::vec((0..n, 0..n), 0..=n * 2)))
}

fn build(n: usize, pairs: &[(usize, usize)]) -> FiniteOrder {
    let l = labels(n);
    let declared: Vec<(String, String)> = pairs.iter().map(|&(a, b)| (l[a].clone(), l[b].clone())).collect();
    FiniteOrder::build(&l, &declared).unwrap()
}

/// Closure by repeated relaxation, independent of the library's Warshall loop.
fn oracle_closure(n: usize, pairs: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; n]; n];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in pairs {
        r[a][b] = true;
    }
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if !r[i][j] && (0..n).any(|k| r[i][k] && r[k][j]) {
                    r[i][j] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            return r;
        }
    }
}

proptest! {
    #[test]
    fn built_order_is_the_reflexive_transitive_closure((n, pairs) in relation()) {
        let o = build(n, &pairs);
        let expect = oracle_closure(n, &pairs);
        for (i, row) in expect.iter().enumerate() {
            for (j, &le) in row.iter().enumerate() {
                prop_assert_eq!(o.leq_idx(i, j), le);
            }
        }
        let antisym = (0..n).all(|i| (0..n).all(|j| i == j || !(expect[i][j] && expect[j][i])));
        prop_assert_eq!(o.is_poset(), antisym);
    }

    #[test]
    fn quotient_is_a_poset_that_reflects_the_order((n, pairs) in relation()) {
        let o = build(n, &pairs);
        let (q, class) = o.quotient_adiabats();
        prop_assert!(q.is_poset());
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(o.leq_idx(i, j), q.leq_idx(class[i], class[j]));
                prop_assert_eq!(o.equiv_idx(i, j), class[i] == class[j]);
            }
        }
    }

    #[test]
    fn hasse_edges_are_the_covers((n, pairs) in relation()) {
        let (o, _) = build(n, &pairs).quotient_adiabats();
        let h = o.hasse_edges().unwrap();
        let m = o.len();
        // an edge survives iff deleting it from the strict order changes the closure
        let strict: Vec<(usize, usize)> = (0..m)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && o.leq_idx(i, j))
            .collect();
        let mut covers = Vec::new();
        for &e in &strict {
            let rest: Vec<(usize, usize)> = strict.iter().copied().filter(|&x| x != e).collect();
            if !oracle_closure(m, &rest)[e.0][e.1] {
                covers.push(e);
            }
        }
        let mut got = h.edges().to_vec();
        got.sort();
        covers.sort();
        prop_assert_eq!(&got, &covers);
        let back = h.closure();
        for i in 0..m {
            for j in 0..m {
                prop_assert_eq!(back.leq_idx(i, j), o.leq_idx(i, j));
            }
        }
    }

    #[test]
    fn product_projections_are_monotone((n, p1) in relation(), (m, p2) in relation()) {
        let (a, b) = (build(n, &p1), build(m, &p2));
        let prod = a.product(&b).unwrap();
        for x in 0..n * m {
            for y in 0..n * m {
                let (xi, xj, yi, yj) = (x / m, x % m, y / m, y % m);
                prop_assert_eq!(prod.leq_idx(x, y), a.leq_idx(xi, yi) && b.leq_idx(xj, yj));
                if prod.leq_idx(x, y) {
                    prop_assert!(a.leq_idx(xi, yi) && b.leq_idx(xj, yj));
                }
            }
        }
    }

    #[test]
    fn entropy_order_is_total_and_matches_values(vals in prop::collection::vec((0i64..12, 1i64..5), 1..9)) {
        let values: Vec<Rational> = vals.iter().map(|&(p, q)| ratio(p, q)).collect();
        let sys = EntropySystem::from_values(labels(values.len()), values.clone()).unwrap();
        let states: Vec<State> = (0..values.len()).map(State::Elem).collect();
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let le = sys.leq(a, b).unwrap();
                prop_assert!(le || sys.leq(b, a).unwrap());
                prop_assert_eq!(le, values[i] <= values[j]);
            }
        }
        prop_assert!(sys.check_axioms(&[]).monotonicity_ok);
    }

    #[test]
    fn scaling_back_and_forth_is_identity(p in 0i64..60, q in 1i64..7, lp in 1i64..9, lq in 1i64..9) {
        let sys = EntropySystem::numeric_line(LineKind::Reals, LineEntropy::Identity, 30);
        let lambda = ratio(lp, lq);
        let x = State::Num(ratio(p, q));
        let there = sys.scale_state(&x, &lambda).unwrap().unwrap();
        let back = sys.scale_state(&there, &lambda.recip()).unwrap().unwrap();
        prop_assert_eq!(sys.entropy(&back).unwrap(), sys.entropy(&x).unwrap());
        prop_assert_eq!(sys.entropy(&there).unwrap(), sys.entropy(&x).unwrap() * &lambda);
    }

    #[test]
    fn line_grids_are_totally_preordered(q in 1i64..6, floor in any::<bool>()) {
        let entropy = if floor { LineEntropy::Floor } else { LineEntropy::Identity };
        let sys = EntropySystem::numeric_line(LineKind::Reals, entropy, 4);
        let grid = sys.probe(&BigInt::from(q));
        for a in &grid {
            for b in &grid {
                let le = sys.leq(a, b).unwrap();
                prop_assert!(le || sys.leq(b, a).unwrap());
                prop_assert_eq!(le, sys.entropy(a).unwrap() <= sys.entropy(b).unwrap());
            }
        }
    }
}

#[test]
fn multiplicative_composite_breaks_additivity() {
    let a = EntropySystem::from_values(labels(3), vec![int(1), int(2), int(3)]).unwrap();
    let b = EntropySystem::from_values(labels(2), vec![int(2), int(5)]).unwrap();
    let products: Vec<Rational> = [1, 2, 3].iter().flat_map(|x| [2, 5].map(|y| int(x * y))).collect();
    let c = a.composite_from_values(&b, products).unwrap();
    let report = c.check_axioms(&[]);
    assert!(!report.additivity_ok);
    assert!(!report.witnesses.is_empty());
    assert!(a.compose_additive(&b).unwrap().check_axioms(&[]).additivity_ok);
}

#[test]
fn grid_scaling_on_naturals() {
    let sys = EntropySystem::numeric_line(LineKind::Naturals, LineEntropy::Identity, 30);
    let three = int(3);
    assert_eq!(sys.scale_state(&State::Num(int(1)), &three).unwrap(), Some(State::Num(int(3))));
    assert_eq!(sys.scale_state(&State::Num(int(2)), &three).unwrap(), Some(State::Num(int(6))));
    let report = sys.check_axioms(&[ratio(1, 2), int(1), int(2)]);
    assert!(report.extensivity_ok, "{report}");
}
