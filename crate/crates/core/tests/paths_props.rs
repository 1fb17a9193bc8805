mod common;

use hdakit_core::paths::{
    adjacent_paths, adjacent_replace, all_liftings, canonical_lifting, congruence_class, underlying_path,
    validate_path, CONGRUENCE_CAP,
};
use hdakit_core::precubical::symmetrize;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjacency_keeps_endpoints(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let h = common::random_chains(&mut rng, 3, 2, &["a", "b"]);
        let p = common::random_execution(&mut rng, &h, 6);
        for l in 1..p.len() {
            for (q, rule) in adjacent_paths(&h.complex, &p, l) {
                prop_assert!(validate_path(&h.complex, &q, Some(&h.initial)).is_empty(), "rule {}", rule.number());
                prop_assert_eq!(q.len(), p.len());
                prop_assert_eq!(q.first(), p.first());
                prop_assert_eq!(q.last(), p.last());
            }
            if let Some((q, _)) = adjacent_replace(&h.complex, &p, l) {
                prop_assert!(adjacent_paths(&h.complex, &p, l).iter().any(|(r, _)| *r == q));
            }
        }
        for q in congruence_class(&h.complex, &p, CONGRUENCE_CAP).unwrap() {
            prop_assert_eq!((q.first(), q.last(), q.len()), (p.first(), p.last(), p.len()));
        }
    }

    #[test]
    fn liftings_project_back(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let h = common::random_chains(&mut rng, 3, 2, &["a", "a", "b"]);
        let p = common::random_execution(&mut rng, &h, 6);
        let sx = symmetrize(&h.complex).unwrap();
        let lifts = all_liftings(&sx, &p);
        prop_assert!(lifts.contains(&canonical_lifting(&sx, &p)));
        for l in &lifts {
            prop_assert!(validate_path(&sx, l, None).is_empty());
            prop_assert_eq!(&underlying_path(&sx, l).unwrap(), &p);
        }
        let mut unique = lifts.clone();
        unique.sort_by_key(|l| format!("{l:?}"));
        unique.dedup();
        prop_assert_eq!(unique.len(), lifts.len());
    }
}
