use num_bigint::BigUint;
use proptest::prelude::*;
use schubert::permgroup::{factorial, PermGroup, Permutation};

fn perm(d: usize) -> impl Strategy<Value = Permutation> {
    Just((0..d).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::new(v).unwrap())
}

fn generators() -> impl Strategy<Value = (usize, Vec<Permutation>)> {
    (2usize..=7).prop_flat_map(|d| (Just(d), prop::collection::vec(perm(d), 0..4)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn words_in_generators_are_members((d, gens) in generators(), word in prop::collection::vec(0usize..8, 0..12)) {
        let g = PermGroup::from_generators(d, gens.clone()).unwrap();
        let mut x = Permutation::identity(d);
        if !gens.is_empty() {
            for i in word {
                x = x.then(&gens[i % gens.len()]);
            }
        }
        prop_assert!(g.contains(&x));
        prop_assert!(g.contains(&x.inverse()));
    }

    #[test]
    fn order_divides_factorial_and_matches_closure((d, gens) in generators()) {
        let g = PermGroup::from_generators(d, gens).unwrap();
        let order = g.order();
        prop_assert_eq!(factorial(d) % &order, BigUint::default());
        let elements = g.elements(10_000).unwrap();
        prop_assert_eq!(BigUint::from(elements.len()), order);
        for e in &elements {
            prop_assert!(g.contains(e));
        }
    }
}
