mod common;

use std::collections::BTreeSet;

use common::{oracle_min, oracle_mixed, oracle_sum, set, subsets, tuple};
use dilate_core::residue::residue_partition;
use dilate_core::search::{enumerate_reduced, min_dilate_sum};
use dilate_core::verify::{verify_decomposition, verify_gmr, verify_interval, verify_main};
use dilate_core::IntSet;

#[test]
fn documented_sums() {
    let cases: [(&[i64], &[i64], &[i64]); 4] = [
        (&[1, 2], &[0, 1, 2], &[0, 1, 2, 3, 4, 5, 6]),
        (&[1, 1], &[0, 1, 3], &[0, 1, 2, 3, 4, 6]),
        (&[3, 5], &[0, 1], &[0, 3, 5, 8]),
        (&[1, 2], &[0, 1, 2, 3], &[0, 1, 2, 3, 4, 5, 6, 7, 8, 9]),
    ];
    for (l, a, want) in cases {
        let got: Vec<i64> = oracle_sum(l, a).into_iter().collect();
        assert_eq!(got, want);
    }
}

#[test]
fn main_report_sizes_come_from_the_sum() {
    for (l, a) in [(&[1i64, 1][..], &[0i64, 1, 3][..]), (&[1, 2], &[0, 1]), (&[2, 3], &[0, 1, 3, 6])] {
        let rep = verify_main(&tuple(l), &set(a)).unwrap();
        assert_eq!(rep.actual, oracle_sum(l, a).len());
    }
}

#[test]
fn decomposition_summands_match_oracle() {
    let l = [2i64, 3, 5];
    let a = [0i64, 1, 4, 6, 7, 9];
    let rep = verify_decomposition(&tuple(&l), &set(&a)).unwrap();
    // pairwise coprime coefficients: every cofactor gcd is 1
    assert_eq!(rep.summand_count, 1);
    assert_eq!(rep.lhs, oracle_sum(&l, &a).len());

    let l = [2i64, 3];
    let a = [0i64, 1, 2, 5, 8];
    let rep = verify_decomposition(&tuple(&l), &set(&a)).unwrap();
    let p3 = residue_partition(&set(&a), 3).unwrap();
    let p2 = residue_partition(&set(&a), 2).unwrap();
    let mut sizes = Vec::new();
    for c2 in &p2.classes {
        for c3 in &p3.classes {
            sizes.push(oracle_mixed(&l, &[c3.members.as_slice(), c2.members.as_slice()]).len());
        }
    }
    sizes.sort_unstable();
    let mut got = rep.summand_sizes.clone();
    got.sort_unstable();
    assert_eq!(got, sizes);
    assert_eq!(sizes.iter().sum::<usize>(), oracle_sum(&l, &a).len());
}

#[test]
fn gmr_totals_match_oracle() {
    let sets = [vec![0i64, 2, 3], vec![1, 5], vec![0, 4]];
    let rep = verify_gmr(&sets.iter().map(|s| set(s)).collect::<Vec<_>>()).unwrap();
    let refs: Vec<&[i64]> = sets.iter().map(|s| s.as_slice()).collect();
    assert_eq!(rep.total, oracle_mixed(&[1, 1, 1], &refs).len());
    for i in 0..3 {
        let rest: Vec<&[i64]> = refs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, s)| *s).collect();
        assert_eq!(rep.leave_one_out[i], oracle_mixed(&[1, 1], &rest).len());
    }
}

#[test]
fn interval_sizes_match_oracle() {
    for (l, n, want) in [(&[1i64, 2][..], 3u64, 7usize), (&[2, 3], 2, 4), (&[1, 1], 5, 9)] {
        let rep = verify_interval(&tuple(l), n).unwrap();
        let x: Vec<i64> = (0..n as i64).collect();
        assert_eq!(rep.size, oracle_sum(l, &x).len());
        assert_eq!(rep.size, want);
    }
}

#[test]
fn documented_search_minima() {
    let cases: [(&[i64], usize, u64, usize); 6] = [
        (&[1, 2], 3, 9, 7),
        (&[1, 3], 3, 9, 8),
        (&[1, 1], 4, 12, 7),
        (&[2, 3], 2, 6, 4),
        (&[2, 3], 3, 9, 8),
        (&[2, 3], 4, 12, 12),
    ];
    for (l, n, w, want) in cases {
        let rec = min_dilate_sum(&tuple(l), n, w).unwrap();
        let (best, hits) = oracle_min(l, n, w as i64);
        assert_eq!((rec.min_size, best), (want, want), "{l:?} n={n} W={w}");
        for wit in &rec.witnesses {
            assert!(hits.contains(&wit.as_slice().to_vec()));
        }
    }
}

/// Canonical sets lose no minimum: reducing every subset of the window and
/// keeping the smaller of it and its reflection lands in the enumeration.
#[test]
fn canonical_enumeration_is_complete() {
    for w in 2..=12i64 {
        for n in 2..=(w as usize).min(6) {
            let listed: BTreeSet<IntSet> = enumerate_reduced(n, w as u64).unwrap().collect();
            let mut expected = BTreeSet::new();
            for a in subsets(0, w - 1).filter(|a| a.len() == n) {
                let (r, _) = set(&a).reduce().unwrap();
                let refl = r.reflect().unwrap();
                expected.insert(r.min(refl));
            }
            assert_eq!(listed, expected, "n={n} W={w}");
        }
    }
}

#[test]
fn canonical_minimum_equals_full_minimum() {
    for l in [&[1i64, 2][..], &[2, 3], &[1, -2], &[1, 2, 3]] {
        for w in 4..=10i64 {
            for n in 2..=4usize.min(w as usize) {
                let rec = min_dilate_sum(&tuple(l), n, w as u64).unwrap();
                let full = subsets(0, w - 1)
                    .filter(|a| a.len() == n)
                    .map(|a| oracle_sum(l, &a).len())
                    .min()
                    .unwrap();
                assert_eq!(rec.min_size, full, "{l:?} n={n} W={w}");
            }
        }
    }
}
