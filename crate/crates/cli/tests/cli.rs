mod support;

use support::goldens::{cases, check_case, transcript};

#[test]
fn goldens_are_stable() {
    let failures: Vec<String> = cases().iter().filter_map(|(name, args)| check_case(name, args).err()).collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

fn exit_code(t: &str) -> &str {
    t.lines().nth(1).unwrap().trim_start_matches("exit: ")
}

#[test]
fn checking_the_repaired_rules_is_valid() {
    let t = transcript(
        &[
            "check",
            "speedlimit_repaired.l4",
            "--assert",
            "maxSpFunctional",
            "--sizes",
            "Vehicle=1,Day=1,Road=1",
            "--ints",
            "90,130,320",
        ],
        None,
    );
    assert_eq!(exit_code(&t), "0");
    assert!(t.contains("--- stdout\nvalid at bounds\n"), "{t}");
}

#[test]
fn cyclic_annotations_are_an_input_error() {
    let t = transcript(&["transform", "speedlimit_original.l4", "--variant", "precond"], None);
    assert_eq!(exit_code(&t), "2");
    assert!(t.contains("maxSpCarHighway -> maxSpCarWorkday -> maxSpSportsCar -> maxSpCarHighway"), "{t}");
}

#[test]
fn bob_has_two_legal_models() {
    let t = transcript(&["legal-models", "bob.cfg", "--json"], None);
    assert_eq!(exit_code(&t), "0");
    let json = t.split("--- stdout\n").nth(1).unwrap().split("--- stderr").next().unwrap();
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    assert_eq!(v["schema"], "l4-cli/1");
    assert_eq!(v["count"], 2);
    assert_eq!(v["models"].as_array().unwrap().len(), 2);
}

#[test]
fn usage_and_input_errors_exit_2() {
    assert_eq!(exit_code(&transcript(&["check"], None)), "2");
    assert_eq!(exit_code(&transcript(&["parse", "missing.l4"], None)), "2");
    assert_eq!(exit_code(&transcript(&["check", "speedlimit_repaired.l4", "--assert", "nope"], None)), "2");
    assert_eq!(exit_code(&transcript(&["legal-models", "speedlimit_repaired.l4"], None)), "2");
}

#[test]
fn exhausted_budget_exits_3() {
    let t = transcript(
        &[
            "check",
            "speedlimit_repaired.l4",
            "--assert",
            "maxSpFunctional",
            "--sizes",
            "Vehicle=2,Day=2,Road=2",
            "--ints",
            "90,130,320",
            "--budget",
            "10",
        ],
        None,
    );
    assert_eq!(exit_code(&t), "3", "{t}");
}

#[test]
fn property_failures_exit_1() {
    let t = transcript(
        &[
            "check",
            "speedlimit_unannotated.l4",
            "--assert",
            "maxSpFunctional",
            "--sizes",
            "Vehicle=1,Day=1,Road=1",
            "--ints",
            "90,130,320",
        ],
        None,
    );
    assert_eq!(exit_code(&t), "1");
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("l4-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("bob.lp");
    let t = transcript(&["emit-asp", "bob.cfg", "-o", out.to_str().unwrap()], None);
    assert_eq!(exit_code(&t), "0");
    let written = std::fs::read_to_string(&out).unwrap();
    let printed = transcript(&["emit-asp", "bob.cfg"], None);
    assert!(printed.contains(&written));
    // the emitted program is itself accepted as input
    let t = transcript(&["answer-sets", out.to_str().unwrap()], None);
    assert!(t.contains("2 answer sets"), "{t}");
    std::fs::remove_dir_all(&dir).unwrap();
}
