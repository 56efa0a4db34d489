use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;

use stabtilt_core::oracle::{self, Representation};
use stabtilt_core::tilting::{run_mutation, HeartState};
use stabtilt_core::{CentralCharge, Direction, Error, KClass, Quiver, QuiverType, Termination};

/// Arrows `i -> j` (`i < j`) with multiplicities from `mult`, as a quiver on
/// `n` vertices if connected.
fn quiver_from(n: usize, mult: &[usize]) -> Option<Quiver> {
    let mut arrows = Vec::new();
    let mut idx = 0;
    for i in 1..=n {
        for j in i + 1..=n {
            for _ in 0..mult[idx] {
                arrows.push((i, j));
            }
            idx += 1;
        }
    }
    Quiver::new(n, &arrows).ok()
}

fn quiver_strategy(max_mult: usize) -> impl Strategy<Value = Quiver> {
    (2usize..=4)
        .prop_flat_map(move |n| (Just(n), prop::collection::vec(0..=max_mult, n * (n - 1) / 2)))
        .prop_filter_map("disconnected", |(n, m)| quiver_from(n, &m))
}

fn charge_strategy(n: usize) -> impl Strategy<Value = CentralCharge> {
    prop::collection::vec((-50i64..=50, 1i64..=50), n)
        .prop_map(|v| CentralCharge::from_ints(&v).unwrap())
}

fn quiver_and_charge(max_mult: usize) -> impl Strategy<Value = (Quiver, CentralCharge)> {
    quiver_strategy(max_mult).prop_flat_map(|q| {
        let n = q.vertex_count();
        (Just(q), charge_strategy(n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tilting_twice_at_a_slot_is_the_identity(
        (q, path) in quiver_strategy(2).prop_flat_map(|q| {
            let n = q.vertex_count();
            (Just(q), prop::collection::vec(0..n, 0..12))
        })
    ) {
        let mut s = HeartState::initial(&q);
        for k in path {
            let next = s.left_tilt(k).or_else(|_| s.right_tilt(k)).unwrap();
            let back = if s.classes()[k].is_positive() {
                next.right_tilt(k).unwrap()
            } else {
                next.left_tilt(k).unwrap()
            };
            prop_assert_eq!(&back, &s);
            prop_assert!(next.is_skew_symmetric());
            s = next;
        }
    }

    #[test]
    fn recorded_phases_are_strictly_monotone((q, z) in quiver_and_charge(2)) {
        for dir in [Direction::Ccw, Direction::Cw] {
            let run = match run_mutation(&q, &z, dir, 60, None) {
                Err(Error::PhaseTie(..)) => return Ok(()),
                r => r.unwrap(),
            };
            for w in run.records.windows(2) {
                match dir {
                    Direction::Ccw => prop_assert!(w[0].phase_key > w[1].phase_key),
                    Direction::Cw => prop_assert!(w[0].phase_key < w[1].phase_key),
                }
            }
            for r in &run.records {
                prop_assert_eq!(&r.q_value, &BigInt::from(1));
                prop_assert!(r.class.is_positive());
            }
        }
    }

    #[test]
    fn dynkin_runs_complete_through_every_simple((q, z) in quiver_and_charge(1)) {
        prop_assume!(q.classify_type() == QuiverType::Dynkin);
        let mut counts = Vec::new();
        for dir in [Direction::Ccw, Direction::Cw] {
            let run = match run_mutation(&q, &z, dir, 10_000, None) {
                Err(Error::PhaseTie(..)) => return Ok(()),
                r => r.unwrap(),
            };
            prop_assert_eq!(&run.termination, &Termination::Completed);
            let seen: BTreeSet<KClass> = run.records.iter().map(|r| r.class.clone()).collect();
            for i in 0..q.vertex_count() {
                prop_assert!(seen.contains(&KClass::basis(q.vertex_count(), i)));
            }
            counts.push(seen);
        }
        prop_assert_eq!(&counts[0], &counts[1]);
    }
}

/// Kronecker representations of dimension `(a, b)` with the given entries.
fn kronecker_rep(p: u32, a: usize, b: usize, entries: &[i64]) -> Representation {
    let (first, second) = entries.split_at(a * b);
    let shape = |e: &[i64]| (0..b).map(|r| e[r * a..(r + 1) * a].to_vec()).collect::<Vec<_>>();
    Representation::new(&Quiver::kronecker(2), p, &[a, b], &[shape(first), shape(second)]).unwrap()
}

fn kronecker_rep_strategy() -> impl Strategy<Value = Representation> {
    (prop::sample::select(vec![2u32, 3]), 0usize..=2, 0usize..=2)
        .prop_filter("nonzero", |(_, a, b)| a + b > 0)
        .prop_flat_map(|(p, a, b)| {
            (Just(p), Just(a), Just(b), prop::collection::vec(0i64..p as i64, 2 * a * b))
        })
        .prop_map(|(p, a, b, e)| kronecker_rep(p, a, b, &e))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn hn_factors_sum_to_dims_with_decreasing_phase(
        rep in kronecker_rep_strategy(),
        z in charge_strategy(2),
    ) {
        let factors = rep.hn_filtration(&z).unwrap();
        let total = factors.iter().fold(KClass::zero(2), |acc, f| &acc + &f.class);
        prop_assert_eq!(total, rep.dims());
        for w in factors.windows(2) {
            prop_assert!(w[0].phase_key > w[1].phase_key);
        }
    }

    #[test]
    fn stable_implies_brick_and_ext_is_nonnegative(
        rep in kronecker_rep_strategy(),
        other in kronecker_rep_strategy(),
        z in charge_strategy(2),
    ) {
        if rep.is_stable(&z).unwrap() {
            prop_assert!(rep.is_brick());
            prop_assert!(rep.is_semistable(&z).unwrap());
        }
        if !rep.is_semistable(&z).unwrap() {
            prop_assert!(!rep.is_stable_over_prime_field(&z).unwrap());
        }
        if rep.field_size() == other.field_size() {
            // NegativeExt would surface here
            rep.ext_dim(&other).unwrap();
            other.ext_dim(&rep).unwrap();
        }
    }
}

#[test]
fn stable_classes_of_small_quivers_agree_with_the_engine() {
    // Dynkin quivers: the run lists every stable class, and the oracle over
    // F_2 finds exactly the same ones inside a box that contains them all.
    let cases = [
        (Quiver::new(3, &[(1, 2), (2, 3)]).unwrap(), vec![(-3, 1), (-1, 3), (2, 1)]),
        (Quiver::new(3, &[(1, 2), (3, 2)]).unwrap(), vec![(-1, 1), (2, 3), (-4, 1)]),
        (Quiver::new(3, &[(1, 2), (2, 3)]).unwrap(), vec![(3, 1), (1, 3), (-2, 1)]),
    ];
    for (q, values) in cases {
        let z = CentralCharge::from_ints(&values).unwrap();
        let run = run_mutation(&q, &z, Direction::Ccw, 100, None).unwrap();
        let mut engine: Vec<KClass> = run.records.iter().map(|r| r.class.clone()).collect();
        engine.sort();
        let found = oracle::stable_dimension_vectors(&q, &z, &[2], &[1, 1, 1]).unwrap();
        assert_eq!(found, engine, "{}", q.to_json());
        for c in &engine {
            let dims: Vec<usize> = c.to_i64s().unwrap().iter().map(|&v| v as usize).collect();
            let rep = oracle::find_stable_representation(&q, &z, 2, &dims).unwrap().unwrap();
            assert!(rep.is_exceptional(), "{c}");
        }
    }
}
