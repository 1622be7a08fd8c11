use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;

use fourpc_core::basis::{build_basis, enumerate_family, ChoicePolicy, Step};
use fourpc_core::linalg::float::{float_inertia, symmetric_eigenvalues};
use fourpc_core::linalg::{
    bareiss_det, bareiss_det_with, char_poly, descartes_inertia, exact_rank, rank_with, smith_normal_form,
    smith_normal_form_with, symmetric_inertia, symmetric_inertia_with, BigIntMatrix, PivotPolicy,
};
use fourpc_core::pair_matrix::{build_matrix, MatrixKind, Pair, PairIndex};
use fourpc_core::tree::{
    all_pairs_distances, check_four_point, leaf_profile, prufer_decode, prufer_encode, random_tree, steiner_size,
    Tree,
};

fn cofactor_det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut total = 0i128;
    for col in 0..n {
        if m[0][col] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(j, _)| j != col).map(|(_, &x)| x).collect())
            .collect();
        let sign = if col % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][col] as i128 * cofactor_det(&minor);
    }
    total
}

/// Edge count of the smallest subtree containing `s`, found by pruning
/// leaves outside `s` until none remain.
fn pruned_steiner(t: &Tree, s: &[usize]) -> usize {
    let keep: BTreeSet<usize> = s.iter().copied().collect();
    let mut alive = vec![true; t.n()];
    let mut deg: Vec<usize> = (0..t.n()).map(|v| t.degree(v)).collect();
    while let Some(v) = (0..t.n()).find(|&v| alive[v] && deg[v] <= 1 && !keep.contains(&v)) {
        alive[v] = false;
        for &w in t.neighbors(v) {
            if alive[w] {
                deg[w] -= 1;
            }
        }
    }
    alive.iter().filter(|&&a| a).count().saturating_sub(1)
}

fn square(max_dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_dim).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-9i64..=9, n), n))
}

fn symmetric(max_dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    square(max_dim).prop_map(|m| {
        let n = m.len();
        (0..n).map(|i| (0..n).map(|j| if i <= j { m[i][j] } else { m[j][i] }).collect()).collect()
    })
}

/// Low-rank symmetric matrices `X D X^T`, which exercise the zero-pivot paths.
fn low_rank_symmetric() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (2usize..=6, 1usize..=3).prop_flat_map(|(n, r)| {
        (prop::collection::vec(prop::collection::vec(-3i64..=3, r), n), prop::collection::vec(-2i64..=2, r)).prop_map(
            move |(x, d)| {
                (0..n).map(|i| (0..n).map(|j| (0..r).map(|k| x[i][k] * d[k] * x[j][k]).sum()).collect()).collect()
            },
        )
    })
}

fn tree_strategy(min_n: usize, max_n: usize) -> impl Strategy<Value = Tree> {
    (min_n..=max_n, any::<u64>()).prop_map(|(n, seed)| random_tree(n, seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn bareiss_matches_cofactor(m in square(5)) {
        let det = bareiss_det(&BigIntMatrix::from_rows(&m)).unwrap();
        prop_assert_eq!(det, BigInt::from(cofactor_det(&m)));
    }

    #[test]
    fn prufer_round_trip_n9(seed in any::<u64>()) {
        let t = random_tree(9, seed);
        let seq = prufer_encode(&t);
        prop_assert_eq!(seq.len(), 7);
        prop_assert_eq!(prufer_decode(&seq).unwrap(), t);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pivot_policy_does_not_change_results(m in square(5)) {
        let a = BigIntMatrix::from_rows(&m);
        let policies = [PivotPolicy::First, PivotPolicy::MinAbs, PivotPolicy::MaxAbs];
        let dets: Vec<_> = policies.iter().map(|&p| bareiss_det_with(&a, p).unwrap()).collect();
        let ranks: Vec<_> = policies.iter().map(|&p| rank_with(&a, p)).collect();
        let snfs: Vec<_> = policies.iter().map(|&p| smith_normal_form_with(&a, p, false).0).collect();
        for k in 1..3 {
            prop_assert_eq!(&dets[k], &dets[0]);
            prop_assert_eq!(ranks[k], ranks[0]);
            prop_assert_eq!(&snfs[k], &snfs[0]);
        }
    }

    #[test]
    fn inertia_pivot_policy_invariant(m in low_rank_symmetric()) {
        let a = BigIntMatrix::from_rows(&m);
        let first = symmetric_inertia_with(&a, PivotPolicy::First).unwrap();
        prop_assert_eq!(symmetric_inertia_with(&a, PivotPolicy::MinAbs).unwrap(), first);
        prop_assert_eq!(symmetric_inertia_with(&a, PivotPolicy::MaxAbs).unwrap(), first);
    }

    #[test]
    fn snf_transforms_and_chain(m in prop::collection::vec(prop::collection::vec(-9i64..=9, 4), 1..=5)) {
        let a = BigIntMatrix::from_rows(&m);
        let (snf, tr) = smith_normal_form_with(&a, PivotPolicy::MinAbs, true);
        let tr = tr.unwrap();
        prop_assert!(snf.satisfies_chain());
        prop_assert_eq!(snf.rank(), exact_rank(&a));
        prop_assert_eq!(tr.u.mul(&a).mul(&tr.v), snf.diagonal(a.rows(), a.cols()));
        let one = BigInt::from(1);
        let (du, dv) = (bareiss_det(&tr.u).unwrap(), bareiss_det(&tr.v).unwrap());
        prop_assert!(du == one || du == -one.clone());
        prop_assert!(dv == one || dv == -one);
    }

    #[test]
    fn congruence_preserves_inertia(m in low_rank_symmetric(), seeds in prop::collection::vec(any::<u64>(), 20)) {
        let a = BigIntMatrix::from_rows(&m);
        let n = a.rows();
        let base = symmetric_inertia(&a).unwrap();
        for seed in seeds {
            // A row permutation of a unit upper-triangular matrix, so det Q = ±1.
            let mut rng = seed;
            let mut next = || {
                rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (rng >> 33) as i64
            };
            let mut q = BigIntMatrix::identity(n);
            for i in 0..n {
                for j in i + 1..n {
                    q[(i, j)] = BigInt::from(next() % 7 - 3);
                }
            }
            let shift = (next() as usize) % n;
            let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
            let all: Vec<usize> = (0..n).collect();
            let q = q.select(&perm, &all);
            prop_assert!(bareiss_det(&q).unwrap() != BigInt::from(0));
            let b = q.mul(&a).mul(&q.transpose());
            prop_assert_eq!(symmetric_inertia(&b).unwrap(), base);
        }
    }

    #[test]
    fn descartes_matches_exact_inertia(m in symmetric(5)) {
        let a = BigIntMatrix::from_rows(&m);
        prop_assert_eq!(descartes_inertia(&char_poly(&a).unwrap()), symmetric_inertia(&a).unwrap());
    }

    #[test]
    fn descartes_matches_on_low_rank(m in low_rank_symmetric()) {
        let a = BigIntMatrix::from_rows(&m);
        let exact = symmetric_inertia(&a).unwrap();
        prop_assert_eq!(descartes_inertia(&char_poly(&a).unwrap()), exact);
        let floats: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
        prop_assert_eq!(float_inertia(&symmetric_eigenvalues(&floats), 1e-9), exact);
    }

    #[test]
    fn char_poly_trace_and_det(m in square(5)) {
        let a = BigIntMatrix::from_rows(&m);
        let cp = char_poly(&a).unwrap();
        let n = m.len();
        let trace: i64 = (0..n).map(|i| m[i][i]).sum();
        prop_assert_eq!(&cp.coefficients[n - 1], &BigInt::from(-trace));
        let det = BigInt::from(cofactor_det(&m));
        let signed = if n % 2 == 0 { det } else { -det };
        prop_assert_eq!(&cp.coefficients[0], &signed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tree_basics(t in tree_strategy(2, 14)) {
        let n = t.n();
        let degrees: usize = (0..n).map(|v| t.degree(v)).sum();
        prop_assert_eq!(degrees, 2 * (n - 1));
        let profile = leaf_profile(&t);
        prop_assert_eq!(profile.p, (0..n).filter(|&v| t.degree(v) == 1).count());
        let d = all_pairs_distances(&t);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    prop_assert_eq!(steiner_size(&t, &[u, v]) as i64, d.get(u, v));
                }
            }
        }
    }

    #[test]
    fn four_point_on_sampled_trees(t in tree_strategy(4, 12), picks in prop::collection::vec(any::<[usize; 4]>(), 50)) {
        let d = all_pairs_distances(&t);
        let n = t.n();
        for [w, x, y, z] in picks {
            prop_assert!(check_four_point(&d, w % n, x % n, y % n, z % n));
        }
    }

    #[test]
    fn pair_matrices_symmetric_and_average(t in tree_strategy(2, 10)) {
        let max = build_matrix(&t, MatrixKind::Max4pc).unwrap();
        let min = build_matrix(&t, MatrixKind::Min4pc).unwrap();
        let st = build_matrix(&t, MatrixKind::Steiner2).unwrap();
        prop_assert!(max.is_symmetric() && min.is_symmetric() && st.is_symmetric());
        let idx = PairIndex::new(t.n());
        for (r, a) in idx.pairs().enumerate() {
            for (c, b) in idx.pairs().enumerate() {
                let s = pruned_steiner(&t, &[a.lo(), a.hi(), b.lo(), b.hi()]) as i64;
                prop_assert_eq!(st.at(r, c), s);
                prop_assert_eq!((max.at(r, c) - min.at(r, c)) % 2, 0);
                prop_assert_eq!(max.at(r, c) + min.at(r, c), 2 * s);
            }
        }
    }

    #[test]
    fn pair_index_bijection(n in 2usize..40) {
        let idx = PairIndex::new(n);
        prop_assert_eq!(idx.len(), n * (n - 1) / 2);
        for (k, p) in idx.pairs().enumerate() {
            prop_assert_eq!(idx.index_of(p), Some(k));
            prop_assert_eq!(idx.pair_at(k), Some(p));
        }
        let mut order = idx.last_vertex_split_order();
        order.sort_unstable();
        prop_assert_eq!(order, (0..idx.len()).collect::<Vec<_>>());
    }

    #[test]
    fn basis_runs_on_larger_trees(t in tree_strategy(8, 12), seed in any::<u64>()) {
        prop_assume!(!t.is_star());
        let n = t.n();
        let p = leaf_profile(&t).p;
        let max = build_matrix(&t, MatrixKind::Max4pc).unwrap();
        let all: Vec<Pair> = max.index().pairs().collect();
        let k = n - p;
        let sign = if k % 2 == 1 { -1 } else { 1 };
        let expected = BigInt::from(sign) * (BigInt::from(1) << (2 * (k - 1)));
        for b in enumerate_family(&t, p + 4, seed).unwrap() {
            prop_assert_eq!(b.len(), 2 * k);
            let sub = BigIntMatrix::from_rows(&max.submatrix(&b.pairs, &b.pairs).unwrap());
            prop_assert_eq!(bareiss_det(&sub).unwrap(), expected.clone());
            let rows = BigIntMatrix::from_rows(&max.submatrix(&b.pairs, &all).unwrap());
            prop_assert_eq!(exact_rank(&rows), 2 * k);
        }
    }

    #[test]
    fn cut_vertex_steps_share_one_vertex(t in tree_strategy(5, 12), seed in any::<u64>()) {
        prop_assume!(!t.is_star());
        let leaf = leaf_profile(&t).pendants[0];
        let b = build_basis(&t, leaf, &ChoicePolicy::Random(seed)).unwrap();
        for step in b.provenance.iter().filter(|s| s.step == Step::CutVertex) {
            let [start, diff] = step.pairs;
            // `diff` is the symmetric difference of start and the chosen cut,
            // so it shares exactly one endpoint with `start`.
            prop_assert!(start.common_vertex(diff).is_some());
            prop_assert!(start != diff);
        }
    }

    #[test]
    fn snf_rank_matches_exact_rank_on_trees(t in tree_strategy(3, 9)) {
        let m = BigIntMatrix::from_pair_matrix(&build_matrix(&t, MatrixKind::Max4pc).unwrap());
        prop_assert_eq!(smith_normal_form(&m).rank(), exact_rank(&m));
    }
}
