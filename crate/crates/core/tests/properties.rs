mod common;

use common::{is_reduced, oracle_sum, tuple};
use dilate_core::dilates::dilate_sum_size;
use dilate_core::search::min_dilate_sum;
use dilate_core::verify::{
    trace_cases, verify_decomposition, verify_dist1_all, verify_dist2_all, verify_gmr, verify_main, Inequality,
};
use dilate_core::IntSet;
use proptest::prelude::*;

fn lambdas() -> impl Strategy<Value = Vec<i64>> {
    prop::sample::select(vec![
        vec![1, 1],
        vec![1, 2],
        vec![1, 3],
        vec![2, 3],
        vec![1, -2],
        vec![3, 5],
        vec![1, 2, 3],
        vec![2, 3, 5],
    ])
}

fn reduced_set(hi: i64, max_len: usize) -> impl Strategy<Value = IntSet> {
    prop::collection::btree_set(1..=hi, 1..max_len)
        .prop_map(|rest| {
            let mut a = vec![0];
            a.extend(rest);
            a
        })
        .prop_filter("reduced", |a| is_reduced(a))
        .prop_map(IntSet::canonicalize)
}

fn recheck(i: &Inequality) -> bool {
    Inequality::new(i.name.clone(), i.lhs.clone(), i.relation, i.rhs.clone()).holds == i.holds
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn theorem_slack_is_nonnegative(l in lambdas(), a in reduced_set(30, 9)) {
        let rep = verify_main(&tuple(&l), &a).unwrap();
        prop_assert!(rep.holds);
        prop_assert_eq!(rep.actual, oracle_sum(&l, a.as_slice()).len());
    }

    #[test]
    fn size_is_affine_invariant(l in lambdas(), a in reduced_set(20, 7), c in -5i64..=5, x in -50i64..=50) {
        prop_assume!(c != 0);
        let t = tuple(&l);
        let moved = a.affine_map(c, x).unwrap();
        prop_assert_eq!(dilate_sum_size(&t, &a).unwrap(), dilate_sum_size(&t, &moved).unwrap());
    }

    #[test]
    fn gmr_holds(sets in prop::collection::vec(prop::collection::btree_set(-6i64..=6, 1..5), 2..=4)) {
        let sets: Vec<IntSet> = sets.into_iter().map(IntSet::canonicalize).collect();
        prop_assert!(verify_gmr(&sets).unwrap().holds);
    }

    #[test]
    fn decomposition_holds(l in lambdas(), a in prop::collection::btree_set(-8i64..=12, 1..8)) {
        prop_assume!(l.len() >= 2);
        let rep = verify_decomposition(&tuple(&l), &IntSet::canonicalize(a)).unwrap();
        prop_assert!(rep.holds && rep.disjoint);
    }

    #[test]
    fn some_dichotomy_branch_holds(l in lambdas(), a in reduced_set(14, 7)) {
        prop_assume!(l.len() >= 2 && a.len() >= 2);
        let t = tuple(&l);
        for r in verify_dist1_all(&t, &a).unwrap() {
            prop_assert!(r.holds, "{:?}", r);
        }
        for r in verify_dist2_all(&t, &a).unwrap() {
            prop_assert!(r.holds, "{:?}", r);
        }
    }

    #[test]
    fn traces_replay(l in lambdas(), a in reduced_set(14, 7), offset in 0u64..64) {
        prop_assume!(l.len() >= 2 && a.len() >= 2);
        let t = tuple(&l);
        let s = t.weight();
        let u = s + offset % (s * s - s);
        let tr = trace_cases(&t, &a, u).unwrap();
        prop_assert!(tr.all_hold && tr.labels_unique, "{:?}", tr.failures());
        prop_assert!(tr.inequalities().all(recheck));
    }
}

#[test]
fn minimum_is_monotone_in_the_window() {
    for l in [&[1i64, 2][..], &[2, 3], &[1, 1, 2]] {
        for n in 2..=4 {
            let mins: Vec<usize> = (n as u64..=12)
                .map(|w| min_dilate_sum(&tuple(l), n, w).unwrap().min_size)
                .collect();
            assert!(mins.windows(2).all(|p| p[1] <= p[0]), "{l:?} n={n}: {mins:?}");
        }
    }
}
