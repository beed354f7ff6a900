use std::sync::Arc;

use entropy_adjoint::rational::{int, ratio};
use entropy_adjoint::szilard::{self, landauer_work};
use entropy_adjoint::transfer::{exhaustive_table, transfer_step};
use entropy_adjoint::{
    check_connection, classify_step, EntropySystem, Expr, Functor, LineEntropy, LineKind, MonotoneMap, ProcessStep,
    Space, State, StepClass, TransferTable,
};
use proptest::prelude::*;

fn reals() -> Arc<Space> {
    Arc::new(EntropySystem::numeric_line(LineKind::Reals, LineEntropy::Identity, 30).into())
}

fn monotone_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0i64..5, 1i64..4, 0i64..4).prop_map(|(a, d, b)| Expr::affine(ratio(a, d), int(b))),
        (1i64..5).prop_map(|k| Expr::FloorDiv(int(k))),
        (1i64..5).prop_map(|k| Expr::CeilDiv(int(k))),
        (0i64..4).prop_map(|c| Expr::Const(int(c))),
    ];
    leaf.prop_recursive(2, 4, 2, |inner| (inner.clone(), inner).prop_map(|(o, i)| Expr::compose(o, i)))
}

fn class_strategy() -> impl Strategy<Value = StepClass> {
    prop_oneof![
        Just(StepClass::Reversible),
        Just(StepClass::IrreversibleIncreasing),
        Just(StepClass::EntropyDecreasing),
    ]
}

fn table_from(cells: &[(StepClass, StepClass)]) -> TransferTable {
    let mut t = TransferTable::new();
    for &(a, b) in cells {
        t.record(a, b);
    }
    t
}

proptest! {
    #[test]
    fn monotone_maps_never_lower_entropy_along_a_step(e in monotone_expr(), a in 0i64..90, b in 0i64..90, q in 1i64..4) {
        let r = reals();
        let f = MonotoneMap::expr(r.clone(), r.clone(), e).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let step = ProcessStep::new(r.clone(), State::Num(ratio(lo, q)), State::Num(ratio(hi, q))).unwrap();
        let moved = transfer_step(&f, &step).unwrap();
        prop_assert_ne!(classify_step(&moved).unwrap(), StepClass::EntropyDecreasing);
    }

    #[test]
    fn embeddings_preserve_step_classes(k in 1i64..7, d in 1i64..4, a in 0i64..60, b in 0i64..60) {
        let r = reals();
        let f = MonotoneMap::expr(r.clone(), r.clone(), Expr::scale(ratio(k, d))).unwrap();
        let step = ProcessStep::new(r.clone(), State::Num(ratio(a, 2)), State::Num(ratio(b, 2))).unwrap();
        let moved = transfer_step(&f, &step).unwrap();
        prop_assert_eq!(classify_step(&step).unwrap(), classify_step(&moved).unwrap());
    }

    #[test]
    fn classification_only_sees_entropy(vals in prop::collection::vec(0i64..4, 2..8), i in 0usize..8, j in 0usize..8) {
        let n = vals.len();
        let (i, j) = (i % n, j % n);
        let labels: Vec<String> = (0..n).map(|k| format!("s{k}")).collect();
        let sys: Arc<Space> = Arc::new(EntropySystem::from_values(labels, vals.iter().map(|&v| int(v)).collect()).unwrap().into());
        let base = classify_step(&ProcessStep::new(sys.clone(), State::Elem(i), State::Elem(j)).unwrap()).unwrap();
        // replacing either end by any state in the same adiabat class leaves the class unchanged
        for i2 in (0..n).filter(|&x| vals[x] == vals[i]) {
            for j2 in (0..n).filter(|&x| vals[x] == vals[j]) {
                let c = classify_step(&ProcessStep::new(sys.clone(), State::Elem(i2), State::Elem(j2)).unwrap()).unwrap();
                prop_assert_eq!(c, base);
            }
        }
    }

    #[test]
    fn table_accumulation_is_order_free(cells in prop::collection::vec((class_strategy(), class_strategy()), 0..30), cut in 0usize..30) {
        let cut = cut.min(cells.len());
        let whole = table_from(&cells);
        let split = table_from(&cells[..cut]) + table_from(&cells[cut..]);
        let mut reversed = cells.clone();
        reversed.reverse();
        prop_assert_eq!(&whole, &split);
        prop_assert_eq!(&whole, &table_from(&reversed));
        prop_assert_eq!(whole.total(), cells.len() as u64);
    }

    #[test]
    fn cumulative_entropy_never_decreases(t in 1.0f64..1000.0, eta in 1.0f64..4.0, cycles in 0u64..40) {
        let ledger = szilard::simulate(t, 2, eta, cycles).unwrap();
        let mut total = 0.0;
        for s in ledger.records.iter().flat_map(|r| &r.steps) {
            prop_assert!(s.ds_total >= 0.0);
            let next = total + s.ds_total;
            prop_assert!(next >= total);
            total = next;
        }
        prop_assert!(szilard::audit_ledger(&ledger).passes);
        let omegas: Vec<u32> = ledger.records.iter().flat_map(|r| r.steps.iter().map(|s| s.omega)).collect();
        for chunk in omegas.chunks(5) {
            prop_assert_eq!(chunk, &[2, 1, 1, 1, 2][..]);
        }
    }

    #[test]
    fn erasure_heat_is_linear_in_bits(t in 1.0f64..1000.0, eta in 1.0f64..4.0, bits in 2usize..16, n in 0usize..16) {
        let n = n.min(bits);
        let mut engine = szilard::init_engine(t, bits, eta).unwrap();
        let heat = szilard::erase_memory(&mut engine, n as i64).unwrap();
        let expect = eta * n as f64 * landauer_work(t);
        prop_assert!((heat - expect).abs() <= 1e-12 * expect.max(f64::MIN_POSITIVE));
    }
}

#[test]
fn identity_tables_are_diagonal() {
    for sys in [
        reals(),
        Arc::new(EntropySystem::from_values(vec!["a".into(), "b".into(), "c".into()], vec![int(1), int(1), int(2)]).unwrap().into()),
    ] {
        let id = MonotoneMap::identity(sys);
        let conn = check_connection(&id, &id).unwrap();
        for functor in [Functor::Left, Functor::Right] {
            assert!(exhaustive_table(&conn, functor).unwrap().is_diagonal());
        }
    }
}

#[test]
fn decreasing_step_example() {
    let r = reals();
    let step = ProcessStep::parse(r, "3.1", "2.9").unwrap();
    assert_eq!(classify_step(&step).unwrap(), StepClass::EntropyDecreasing);
}

#[test]
fn mismatched_step_system_is_rejected() {
    let r = reals();
    let n: Arc<Space> = Arc::new(EntropySystem::numeric_line(LineKind::Naturals, LineEntropy::Identity, 30).into());
    let f = MonotoneMap::expr(n.clone(), r.clone(), Expr::scale(int(3))).unwrap();
    let step = ProcessStep::parse(r, "1", "2").unwrap();
    assert!(transfer_step(&f, &step).is_err());
}

#[test]
fn szilard_worked_numbers() {
    // 1.380649e-23 * 300 * ln 2, evaluated separately in double precision
    let w = landauer_work(300.0);
    assert!((w - 2.870978885078724e-21).abs() <= 1e-12 * w);
    let mut engine = szilard::init_engine(300.0, 3, 1.0).unwrap();
    let q = szilard::erase_memory(&mut engine, 3).unwrap();
    assert!((q - 8.612936655236172e-21).abs() <= 1e-12 * q);
    let mut engine = szilard::init_engine(300.0, 2, 1.5).unwrap();
    let q = szilard::erase_memory(&mut engine, 2).unwrap();
    assert!((q - 2.0 * 1.5 * w).abs() <= 1e-12 * q);
    let ledger = szilard::simulate(300.0, 2, 1.0, 1).unwrap();
    let r = &ledger.records[0];
    assert_eq!(r.steps[4].heat_j, r.steps[3].work_j);
    assert_eq!(r.work_j(), 0.0);
}
