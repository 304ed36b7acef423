//! Golden transcripts of CLI invocations over the fixtures. A transcript
//! records the exit code, stdout and stderr. Set `UPDATE_GOLDENS=1` to
//! rewrite them.

use std::path::PathBuf;
use std::process::Command;

const SIZES: &str = "Vehicle=1,Day=1,Road=1";
const INTS: &str = "90,130,320";

/// Name and arguments of each golden invocation, run from `fixtures/`.
pub fn cases() -> Vec<(&'static str, Vec<&'static str>)> {
    let check =
        |file: &'static str| vec!["check", file, "--assert", "maxSpFunctional", "--sizes", SIZES, "--ints", INTS];
    let mut no_inv = check("speedlimit_repaired.l4");
    no_inv.push("--no-inversions");
    vec![
        ("check_repaired", check("speedlimit_repaired.l4")),
        ("check_repaired_json", [check("speedlimit_repaired.l4"), vec!["--json"]].concat()),
        ("check_repaired_no_inversions", no_inv),
        ("check_unannotated", check("speedlimit_unannotated.l4")),
        ("check_unannotated_json", [check("speedlimit_unannotated.l4"), vec!["--json"]].concat()),
        ("transform_original", vec!["transform", "speedlimit_original.l4", "--variant", "precond"]),
        ("transform_repaired_precond", vec!["transform", "speedlimit_repaired.l4", "--variant", "precond"]),
        (
            "transform_repaired_precond_simplified",
            vec!["transform", "speedlimit_repaired.l4", "--variant", "precond", "--simplify"],
        ),
        ("transform_repaired_deriv_json", vec!["transform", "speedlimit_repaired.l4", "--variant", "deriv", "--json"]),
        ("transform_repaired_deriv_l4", vec!["transform", "speedlimit_repaired.l4", "--variant", "deriv", "--emit-l4"]),
        ("parse_repaired", vec!["parse", "speedlimit_repaired.l4"]),
        ("parse_repaired_json", vec!["parse", "speedlimit_repaired.l4", "--json"]),
        ("invert_max_speed", vec!["invert", "speedlimit_repaired.l4", "--predicate", "maxSp"]),
        ("emit_smt_repaired", vec!["emit-smt", "speedlimit_repaired.l4", "--assert", "maxSpFunctional"]),
        ("correspond_repaired", vec!["correspond", "speedlimit_repaired.l4", "--sizes", SIZES, "--ints", INTS]),
        ("emit_asp_bob", vec!["emit-asp", "bob.cfg"]),
        ("legal_models_bob", vec!["legal-models", "bob.cfg"]),
        ("legal_models_bob_json", vec!["legal-models", "bob.cfg", "--json"]),
        ("legal_models_bob_strong", vec!["legal-models", "bob_strong.cfg"]),
        ("legal_models_bob_extremely_wealthy", vec!["legal-models", "bob_extremely_wealthy.cfg"]),
        ("legal_models_bob_schematic", vec!["legal-models", "bob_schematic.cfg"]),
        ("legal_models_self_strong", vec!["legal-models", "self_strong.cfg"]),
        ("legal_models_chain_subject_to", vec!["legal-models", "chain_subject_to.cfg"]),
        ("legal_models_non_minimal", vec!["legal-models", "non_minimal.cfg"]),
        ("legal_models_non_minimal_minimal_only", vec!["legal-models", "non_minimal.cfg", "--minimal-only"]),
        ("answer_sets_bob", vec!["answer-sets", "bob.cfg"]),
        ("answer_sets_bob_projected_json", vec!["answer-sets", "bob.cfg", "--project", "--json"]),
        ("verify_lemma4_bob", vec!["verify-lemma4", "bob.cfg"]),
        ("verify_lemma4_converse_gap", vec!["verify-lemma4", "converse_gap.cfg"]),
        ("verify_lemma4_converse_gap_json", vec!["verify-lemma4", "converse_gap.cfg", "--json"]),
    ]
}

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.txt"))
}

/// Output of `l4 [--threads N] args` as a transcript.
pub fn transcript(args: &[&str], threads: Option<usize>) -> String {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_l4"));
    cmd.current_dir(fixtures()).env("NO_COLOR", "1");
    if let Some(n) = threads {
        cmd.arg("--threads").arg(n.to_string());
    }
    let out = cmd.args(args).output().expect("l4 runs");
    format!(
        "$ l4 {}\nexit: {}\n--- stdout\n{}--- stderr\n{}",
        args.join(" "),
        out.status.code().map_or("signal".to_string(), |c| c.to_string()),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    )
}

/// Checks one case against its golden file and across thread counts. Returns
/// a description of the first mismatch.
pub fn check_case(name: &str, args: &[&str]) -> Result<(), String> {
    let first = transcript(args, None);
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDENS").is_some() {
        std::fs::write(&path, &first).map_err(|e| e.to_string())?;
    }
    let golden = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if first != golden {
        return Err(format!("{name}: output differs from golden\n{first}"));
    }
    for threads in [None, Some(1), Some(4)] {
        if transcript(args, threads) != golden {
            return Err(format!("{name}: output differs with threads {threads:?}"));
        }
    }
    Ok(())
}
