use num_bigint::BigUint;
use proptest::prelude::*;
use schubert::criterion::family_c;
use schubert::partition::{enumerate_problems, GrassmannianShape, SchubertProblem};
use schubert::puzzle::problem_degree;
use schubert::tableau::degree_oracle;
use schubert::tree::{build_tree, build_tree_with_budget, tournament_degree, VertexKind};

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn is_pascal_pair(l: u64, r: u64, max_n: u64) -> bool {
    (1..=max_n).any(|a| (1..=a).any(|b| binomial(a - 1, b - 1) == l && binomial(a - 1, b) == r))
}

#[test]
fn rectangle_family_splits_like_pascals_triangle() {
    for n in 2..=5u64 {
        for k in 1..n {
            let tree = build_tree(&family_c(n as usize, k as usize).unwrap()).unwrap();
            let profile: Vec<(u64, u64)> = tree
                .bifurcation_profile()
                .iter()
                .map(|(l, r)| (u64::try_from(l).unwrap(), u64::try_from(r).unwrap()))
                .collect();
            assert!(!profile.is_empty());
            for &(l, r) in &profile {
                assert!(
                    is_pascal_pair(l, r, n) || is_pascal_pair(r, l, n),
                    "C({n},{k}) split ({l},{r})"
                );
            }
            let root = (binomial(n - 1, k - 1), binomial(n - 1, k));
            assert!(
                profile.contains(&root) || profile.contains(&(root.1, root.0)),
                "C({n},{k}) lacks the top split {root:?}"
            );
        }
    }
}

#[test]
fn trees_are_sound_for_small_boxes() {
    for n in 2..=6 {
        for k in 1..n {
            for q in enumerate_problems(GrassmannianShape::new(k, n).unwrap(), 1, false) {
                let tree = build_tree(&q).unwrap();
                tree.audit().unwrap();
                let d = degree_oracle(&q).unwrap();
                assert_eq!(tree.leaf_count(), d, "{q}");
                assert_eq!(tournament_degree(&q).unwrap(), d, "{q}");
                assert!(tree.vertices().iter().all(|v| v.children.len() <= 2));
                let leaves = tree
                    .vertices()
                    .iter()
                    .filter(|v| v.kind == VertexKind::Leaf)
                    .count();
                assert_eq!(BigUint::from(leaves), d, "{q}");
            }
        }
    }
}

#[test]
fn vertex_budget_is_an_error_not_a_panic() {
    let q = family_c(4, 2).unwrap();
    assert!(build_tree_with_budget(&q, 10).is_err());
}

fn problems(n: usize) -> Vec<SchubertProblem> {
    (1..n)
        .flat_map(|k| {
            enumerate_problems(GrassmannianShape::new(k, n).unwrap(), 2, false).collect::<Vec<_>>()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_ordering_counts_the_same(q in proptest::sample::select(problems(7)), seed in any::<u64>()) {
        let mut order: Vec<usize> = (0..q.conditions().len()).collect();
        let len = order.len();
        order.rotate_left((seed as usize) % len);
        let r = q.reordered(&order);
        prop_assert_eq!(tournament_degree(&r).unwrap(), problem_degree(&q).unwrap());
    }
}
