mod support;

use std::collections::BTreeSet;

use l4_asp::{answer_sets, emit_asp, is_legal_model, legal_models, verify_lemma4, AspProgram, AspRule, Literal, Term};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use support::gen::random_config;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn answer_sets_project_to_legal_models(seed in any::<u64>()) {
        let c = random_config(&mut StdRng::seed_from_u64(seed));
        let r = verify_lemma4(&c).unwrap();
        for a in &r.answer_sets {
            prop_assert!(a.violations.is_empty(), "{c}\n{}: {:?}", a.projection, a.violations);
            prop_assert!(r.legal_models.contains(&a.projection));
        }
        for m in &r.uncovered {
            prop_assert!(is_legal_model(&c, m));
        }
    }

    #[test]
    fn opposes_is_symmetric(seed in any::<u64>()) {
        let c = random_config(&mut StdRng::seed_from_u64(seed));
        for s in answer_sets(&emit_asp(&c)).unwrap() {
            for a in &s {
                if let Some(("opposes", [x, y])) = a.as_fn() {
                    prop_assert!(s.contains(&Term::app("opposes", [y.clone(), x.clone()])));
                }
            }
        }
    }

    #[test]
    fn legal_models_are_sorted_and_distinct(seed in any::<u64>()) {
        let c = random_config(&mut StdRng::seed_from_u64(seed));
        let ms = legal_models(&c).unwrap();
        prop_assert!(ms.windows(2).all(|w| w[0] < w[1]));
    }

    /// Without negation the only stable model is the unique subset-minimal
    /// model, found here by brute force over all atom subsets.
    #[test]
    fn negation_free_programs_have_their_minimal_model(
        rules in prop::collection::vec((0..5usize, prop::collection::vec(0..5usize, 0..3)), 0..7)
    ) {
        let name = |i: usize| Term::constant(format!("p{i}"));
        let p = AspProgram {
            rules: rules.iter().map(|(h, b)| AspRule::new(name(*h), b.iter().map(|i| Literal::pos(name(*i))))).collect(),
        };
        let is_model = |m: u32| rules.iter().all(|(h, b)| !b.iter().all(|i| m >> i & 1 == 1) || m >> h & 1 == 1);
        let models: Vec<u32> = (0..32).filter(|m| is_model(*m)).collect();
        let minimal: Vec<BTreeSet<Term>> = models
            .iter()
            .filter(|m| !models.iter().any(|o| o != *m && *o & **m == *o))
            .map(|m| (0..5).filter(|i| m >> i & 1 == 1).map(name).collect())
            .collect();
        prop_assert_eq!(answer_sets(&p).unwrap(), minimal);
    }
}
