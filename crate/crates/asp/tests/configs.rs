use std::collections::BTreeSet;

use l4_asp::ground::{ground, herbrand_constants};
use l4_asp::{
    answer_set_models, answer_sets, emit_asp, legal_models, minimal_only, parse_config, parse_term, verify_lemma4,
    Config, LegalModel, ModKind, Modifier,
};

fn load(name: &str) -> Config {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_config(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn valid_sets(models: &[LegalModel]) -> Vec<BTreeSet<u32>> {
    models.iter().map(LegalModel::valid_ids).collect()
}

fn ids(xs: &[u32]) -> BTreeSet<u32> {
    xs.iter().copied().collect()
}

#[test]
fn bob_two_models() {
    let c = load("bob.cfg");
    let expected = vec![ids(&[1, 3]), ids(&[2, 3])];
    assert_eq!(valid_sets(&legal_models(&c).unwrap()), expected);
    assert_eq!(answer_sets(&emit_asp(&c)).unwrap().len(), 2);
    assert_eq!(valid_sets(&answer_set_models(&c).unwrap()), expected);
}

#[test]
fn bob_strong_subject_to() {
    let c = load("bob.cfg").with_modifier(Modifier::new(ModKind::StrongSubjectTo, 3, 1)).unwrap();
    assert_eq!(valid_sets(&legal_models(&c).unwrap()), vec![ids(&[2, 3])]);
    assert_eq!(valid_sets(&answer_set_models(&c).unwrap()), vec![ids(&[2, 3])]);
}

#[test]
fn bob_extremely_wealthy() {
    let c = load("bob.cfg").with_fact(parse_term("extremely_wealthy(bob)").unwrap()).unwrap();
    assert_eq!(valid_sets(&legal_models(&c).unwrap()), vec![ids(&[1, 2, 4])]);
    assert_eq!(valid_sets(&answer_set_models(&c).unwrap()), vec![ids(&[1, 2, 4])]);
}

#[test]
fn bob_fifth_rule_despite() {
    // rule 4 still defeats rule 3 although rule 5 defeats rule 4
    let src = std::fs::read_to_string(format!("{}/../../fixtures/bob.cfg", env!("CARGO_MANIFEST_DIR"))).unwrap();
    let c = parse_config(&format!(
        "{src}rule 5: may_spend_up_to_twenty_mill(bob) <- owns_company(bob).
fact: extremely_wealthy(bob).\nfact: owns_company(bob).\nmodifier: despite(4,5).\n"
    ))
    .unwrap();
    assert_eq!(valid_sets(&legal_models(&c).unwrap()), vec![ids(&[1, 2, 5])]);
    assert_eq!(valid_sets(&answer_set_models(&c).unwrap()), vec![ids(&[1, 2, 5])]);
}

#[test]
fn bob_encoding_listing() {
    let text = emit_asp(&load("bob.cfg")).to_string();
    for line in [
        "is_legal(wealthy(bob)).",
        "subject_to(3,1).",
        "subject_to(3,2).",
        "despite(3,4).",
        "according_to(1,must_buy(rolls,bob)) :- is_legal(wealthy(bob)).",
        "according_to(4,may_spend_up_to_ten_mill(bob)) :- is_legal(extremely_wealthy(bob)).",
        "opposes(may_spend_up_to_one_mill(bob),must_buy(merc,bob)) :- is_legal(must_buy(rolls,bob)).",
        "opposes(X,Y) :- opposes(Y,X).",
    ] {
        assert!(text.lines().any(|l| l == line), "missing `{line}` in\n{text}");
    }
}

#[test]
fn pathological_configs() {
    assert!(legal_models(&load("self_strong.cfg")).unwrap().is_empty());
    assert!(legal_models(&load("chain_subject_to.cfg")).unwrap().is_empty());
    assert!(answer_sets(&emit_asp(&load("chain_subject_to.cfg"))).unwrap().is_empty());

    let c = load("non_minimal.cfg");
    let shown: Vec<String> = legal_models(&c).unwrap().iter().map(LegalModel::to_string).collect();
    assert_eq!(
        shown,
        ["{is_legal(a), is_legal(c), legally_valid(1,c), legally_valid(3,a)}", "{is_legal(a), legally_valid(3,a)}",]
    );
    let mut from_asp: Vec<String> = answer_set_models(&c).unwrap().iter().map(LegalModel::to_string).collect();
    from_asp.sort();
    assert_eq!(from_asp, shown);
    assert_eq!(minimal_only(&legal_models(&c).unwrap()).len(), 1);
}

#[test]
fn converse_gap_is_reported() {
    let r = verify_lemma4(&load("converse_gap.cfg")).unwrap();
    assert!(r.holds());
    let uncovered: Vec<String> = r.uncovered.iter().map(LegalModel::to_string).collect();
    assert_eq!(uncovered, ["{is_legal(a), legally_valid(1,a)}"]);
}

#[test]
fn schematic_bob_grounds_to_the_same_models() {
    let c = load("bob_schematic.cfg");
    let g = ground(&c, &herbrand_constants(&c)).unwrap();
    let sets = valid_sets(&legal_models(&g).unwrap());
    assert_eq!(sets, vec![ids(&[1001, 3001]), ids(&[2001, 3001])]);
    assert!(verify_lemma4(&g).unwrap().holds());
}
