//! Random annotated rule modules over one class `A`: at most three rules
//! sharing the interface `x: A`, concluding `C1`, `C2` or `D x k` with
//! `k ∈ {0, 1}`, with random `subjectTo` and `despite` annotations.

use rand::seq::SliceRandom;
use rand::Rng;

const HEADER: &str = "class A
decl P : A -> Boolean
decl Q : A -> Boolean
decl n : A -> Integer
decl C1 : A -> Boolean
decl C2 : A -> Boolean
decl D : A -> Integer -> Boolean
";

fn atom(rng: &mut impl Rng) -> String {
    let atoms = ["P x", "Q x", "C1 x", "C2 x", "D x 0", "D x 1", "n x > 0", "n x == 1", "exists y: A. P y && C1 y"];
    atoms.choose(rng).unwrap().to_string()
}

fn precondition(rng: &mut impl Rng, depth: u32) -> String {
    if depth == 0 || rng.gen_bool(0.4) {
        let a = atom(rng);
        return if rng.gen_bool(0.3) { format!("not ({a})") } else { a };
    }
    let op = if rng.gen_bool(0.6) { "&&" } else { "||" };
    format!("({} {op} {})", precondition(rng, depth - 1), precondition(rng, depth - 1))
}

fn pick(rng: &mut impl Rng, others: &[usize]) -> Vec<String> {
    others.iter().filter(|_| rng.gen_bool(0.35)).map(|j| format!("r{j}")).collect()
}

pub fn random_module(rng: &mut impl Rng) -> String {
    let n = rng.gen_range(1..=3);
    let mut src = HEADER.to_string();
    for i in 1..=n {
        let others: Vec<usize> = (1..=n).filter(|j| *j != i).collect();
        let subject_to = pick(rng, &others);
        let despite = pick(rng, &others);
        let mut ann = Vec::new();
        if !subject_to.is_empty() {
            ann.push(format!("subjectTo: [{}]", subject_to.join(", ")));
        }
        if !despite.is_empty() {
            ann.push(format!("despite: [{}]", despite.join(", ")));
        }
        let ann = if ann.is_empty() { String::new() } else { format!(" {{restrict: {{{}}}}}", ann.join(", ")) };
        let pre = if rng.gen_bool(0.15) { "true".to_string() } else { precondition(rng, 2) };
        let concl = ["C1 x", "C2 x", "D x 0", "D x 1"].choose(rng).unwrap();
        src.push_str(&format!("rule <r{i}>{ann} for x: A if {pre} then {concl}\n"));
    }
    src
}
