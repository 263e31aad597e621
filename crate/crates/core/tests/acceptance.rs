//! Acceptance criteria. Runs as a plain binary so that every criterion prints
//! its PASS/FAIL line in the test log; exits non-zero if any fails.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use hfc::classes::{
    axiom_to_forbidden, decide_universal, decide_universal_bruteforce, is_minimal, member, member_among, minimize,
    structure_to_axiom, Answer, CountingOracle, ExplicitOracle, ForbiddenSetOracle, Verdict,
};
use hfc::logic::{parse_universal, UniversalSentence};
use hfc::sample::{random_forbidden, random_instance, random_structure, SampleConfig};
use hfc::structure::{enumerate_structures, isomorphic, Correspondences, PredicateDecl, Signature, Structure};
use hfc::transform::saturate;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

const ORACLE_INSTANCES: usize = 500;
const ORACLE_SEED: u64 = 20_240_501;
const ORACLE_BUDGET: Duration = Duration::from_secs(60);
const BRUTEFORCE_BOUND: usize = 4;

const ROUND_TRIPS: usize = 100;
const ROUND_TRIP_SEED: u64 = 17;

const CLOSURE_MAX_SIZE: usize = 4;
const CLOSURE_BUDGET: Duration = Duration::from_secs(30);

const MINIMIZE_SETS: usize = 50;
const MINIMIZE_SEED: u64 = 4;
const MINIMIZE_CHECK_SIZE: usize = 4;

const TAUTOLOGIES: usize = 50;
const TAUTOLOGY_SEED: u64 = 8;

/// Rows of the correspondence table as printed in the source: (row, x1, x2, x3).
const TABLE_ROWS: [(usize, [usize; 3]); 8] = [
    (1, [1, 2, 3]),
    (2, [1, 2, 4]),
    (3, [1, 3, 2]),
    (4, [1, 3, 4]),
    (5, [1, 4, 2]),
    (6, [1, 4, 3]),
    (23, [4, 3, 1]),
    (24, [4, 3, 2]),
];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Every NO verdict seen anywhere in the suite, with its sentence and class.
struct Witnesses {
    seen: usize,
    bad: Vec<String>,
}

impl Witnesses {
    fn record(&mut self, phi: &UniversalSentence, h: &dyn ForbiddenSetOracle, v: &Verdict) {
        let Some(w) = &v.witness else {
            if v.answer == Answer::No {
                self.bad.push(format!("{phi}: NO without witness"));
            }
            return;
        };
        self.seen += 1;
        let in_class = member(w, h).map(|m| m.is_member()).unwrap_or(false);
        let falsifies = phi.holds_in(w).map(|b| !b).unwrap_or(false);
        if !in_class || !falsifies || w.size() > phi.arity() {
            self.bad.push(format!(
                "{phi}: witness {w} (member {in_class}, falsifies {falsifies})"
            ));
        }
    }
}

fn c2(sig: &Arc<Signature>) -> Structure {
    Structure::from_named(sig.clone(), &["a", "b"], &[("E", &[&["a", "b"][..], &["b", "a"][..]][..])]).unwrap()
}

fn digraph() -> Arc<Signature> {
    Arc::new(Signature::complete(vec![PredicateDecl::new("E", 2, true)]).unwrap())
}

fn oracle_equivalence(witnesses: &mut Witnesses) -> Outcome {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(ORACLE_SEED);
    let cfg = SampleConfig::default();
    let mut disagreements = Vec::new();
    let (mut yes, mut no) = (0, 0);
    for i in 0..ORACLE_INSTANCES {
        let inst = random_instance(&mut rng, &cfg);
        let oracle = ExplicitOracle::new(inst.signature.clone(), inst.forbidden.clone()).unwrap();
        let fast = decide_universal(&inst.sentence, &inst.signature, &oracle).unwrap();
        let slow = decide_universal_bruteforce(&inst.sentence, &inst.signature, &oracle, BRUTEFORCE_BOUND).unwrap();
        witnesses.record(&inst.sentence, &oracle, &fast);
        match fast.answer {
            Answer::Yes => yes += 1,
            Answer::No => no += 1,
        }
        if fast.answer != slow.answer {
            disagreements.push(format!("#{i} {}", inst.sentence));
        }
    }
    let elapsed = started.elapsed();
    outcome(
        disagreements.is_empty() && elapsed < ORACLE_BUDGET,
        format!(
            "{ORACLE_INSTANCES} instances ({yes} YES, {no} NO), {} disagreements, {:.2}s (budget {}s){}",
            disagreements.len(),
            elapsed.as_secs_f64(),
            ORACLE_BUDGET.as_secs(),
            disagreements.first().map(|d| format!("; first: {d}")).unwrap_or_default()
        ),
    )
}

fn table_fidelity() -> Outcome {
    let rows: Vec<Vec<usize>> = Correspondences::new(3, 4)
        .map(|r| r.iter().map(|e| e + 1).collect())
        .collect();
    let mut expected = Vec::new();
    for a in 1..=4 {
        for b in (1..=4).filter(|&b| b != a) {
            for c in (1..=4).filter(|&c| c != a && c != b) {
                expected.push(vec![a, b, c]);
            }
        }
    }
    let printed_ok = TABLE_ROWS
        .iter()
        .all(|(row, vals)| rows.get(row - 1).map(Vec::as_slice) == Some(&vals[..]));
    let pass = rows.len() == 24 && rows == expected && printed_ok;
    outcome(
        pass,
        format!(
            "{} rows, first {:?}, last {:?}, printed rows match: {printed_ok}",
            rows.len(),
            rows.first().unwrap_or(&vec![]),
            rows.last().unwrap_or(&vec![])
        ),
    )
}

fn round_trip() -> Outcome {
    let mut rng = StdRng::seed_from_u64(ROUND_TRIP_SEED);
    let mut ok = 0;
    let mut first_bad = None;
    for _ in 0..ROUND_TRIPS {
        let sig = hfc::sample::random_signature(&mut rng, 2, 2);
        let size = rng.gen_range(1..=3);
        let s = random_structure(&mut rng, &sig, size, 0.5);
        let theta = structure_to_axiom(&s, &sig).unwrap();
        let back = axiom_to_forbidden(&theta, &sig).unwrap();
        if back.len() == 1 && isomorphic(&back[0], &s).unwrap() {
            ok += 1;
        } else if first_bad.is_none() {
            first_bad = Some(format!("{s} gave {} structures", back.len()));
        }
    }
    outcome(
        ok == ROUND_TRIPS,
        format!("{ok}/{ROUND_TRIPS}{}", first_bad.map(|b| format!("; {b}")).unwrap_or_default()),
    )
}

fn closure() -> Outcome {
    let started = Instant::now();
    let sig = digraph();
    let h = [c2(&sig)];
    let (mut members, mut checked, mut violations) = (0, 0, 0);
    for size in 1..=CLOSURE_MAX_SIZE {
        for s in enumerate_structures(&sig, size, false).unwrap() {
            if !member_among(&s, &h).unwrap().is_member() {
                continue;
            }
            members += 1;
            for mask in 1u32..(1 << size) {
                let subset: Vec<usize> = (0..size).filter(|i| mask & (1 << i) != 0).collect();
                checked += 1;
                if !member_among(&s.substructure(&subset).unwrap(), &h).unwrap().is_member() {
                    violations += 1;
                }
            }
        }
    }
    let elapsed = started.elapsed();
    outcome(
        violations == 0 && elapsed < CLOSURE_BUDGET,
        format!(
            "{members} members up to size {CLOSURE_MAX_SIZE}, {checked} substructures, {violations} violations, {:.2}s (budget {}s)",
            elapsed.as_secs_f64(),
            CLOSURE_BUDGET.as_secs()
        ),
    )
}

/// Signatures small enough to enumerate every structure of size 4.
fn enumerable_signatures() -> Vec<Arc<Signature>> {
    let sigs = [
        vec![PredicateDecl::new("E", 2, true)],
        vec![PredicateDecl::new("E", 2, false)],
        vec![PredicateDecl::new("P", 1, true), PredicateDecl::new("E", 2, true)],
        vec![PredicateDecl::new("P", 1, true), PredicateDecl::new("Q", 1, true)],
        vec![PredicateDecl::new("P", 1, false)],
    ];
    sigs.into_iter()
        .map(|p| Arc::new(Signature::complete(p).unwrap()))
        .collect()
}

fn minimization() -> Outcome {
    let mut rng = StdRng::seed_from_u64(MINIMIZE_SEED);
    let sigs = enumerable_signatures();
    let universes: Vec<Vec<Structure>> = sigs
        .iter()
        .map(|sig| {
            (1..=MINIMIZE_CHECK_SIZE)
                .flat_map(|k| enumerate_structures(sig, k, true).unwrap())
                .collect()
        })
        .collect();
    let mut ok = 0;
    let mut first_bad = None;
    for i in 0..MINIMIZE_SETS {
        let which = rng.gen_range(0..sigs.len());
        let hs = random_forbidden(&mut rng, &sigs[which], 4, 3);
        let min = minimize(&hs).unwrap();
        let minimal = is_minimal(&min).unwrap();
        let agree = universes[which]
            .iter()
            .all(|s| member_among(s, &hs).unwrap().is_member() == member_among(s, &min).unwrap().is_member());
        if minimal && agree {
            ok += 1;
        } else if first_bad.is_none() {
            first_bad = Some(format!("set #{i}: minimal {minimal}, agree {agree}"));
        }
    }
    outcome(
        ok == MINIMIZE_SETS,
        format!(
            "{ok}/{MINIMIZE_SETS} (exhaustive up to size {MINIMIZE_CHECK_SIZE}){}",
            first_bad.map(|b| format!("; {b}")).unwrap_or_default()
        ),
    )
}

/// Propositional tautology templates over letters A, B, C.
const TEMPLATES: [&str; 10] = [
    "A | !A",
    "(A -> B) | (B -> A)",
    "((A -> B) -> A) -> A",
    "A -> (B -> A)",
    "(A & B) -> A",
    "!(A & !A)",
    "((A -> B) & (B -> C)) -> (A -> C)",
    "(A | B) <-> (B | A)",
    "!!A <-> A",
    "(A -> (B -> C)) -> ((A -> B) -> (A -> C))",
];

const ATOMS: [&str; 7] = ["E(x,y)", "E(y,x)", "E(y,z)", "P(x)", "P(z)", "x = y", "y != z"];

/// Truth table over the letters of a template, independent of the
/// first-order machinery.
fn is_tautology(template: &str) -> bool {
    let letters: Vec<char> = ['A', 'B', 'C'].into_iter().filter(|c| template.contains(*c)).collect();
    (0..1u32 << letters.len()).all(|bits| {
        let value = |c: char| bits & (1 << letters.iter().position(|&l| l == c).unwrap()) != 0;
        prop_eval(template, &value)
    })
}

fn prop_eval(text: &str, value: &dyn Fn(char) -> bool) -> bool {
    fn iff(toks: &[char], i: &mut usize, v: &dyn Fn(char) -> bool) -> bool {
        let mut l = imp(toks, i, v);
        while toks.get(*i) == Some(&'=') {
            *i += 1;
            l = l == imp(toks, i, v);
        }
        l
    }
    fn imp(toks: &[char], i: &mut usize, v: &dyn Fn(char) -> bool) -> bool {
        let l = or(toks, i, v);
        if toks.get(*i) == Some(&'>') {
            *i += 1;
            let r = imp(toks, i, v);
            return !l || r;
        }
        l
    }
    fn or(toks: &[char], i: &mut usize, v: &dyn Fn(char) -> bool) -> bool {
        let mut l = and(toks, i, v);
        while toks.get(*i) == Some(&'|') {
            *i += 1;
            l = and(toks, i, v) || l;
        }
        l
    }
    fn and(toks: &[char], i: &mut usize, v: &dyn Fn(char) -> bool) -> bool {
        let mut l = un(toks, i, v);
        while toks.get(*i) == Some(&'&') {
            *i += 1;
            l = un(toks, i, v) && l;
        }
        l
    }
    fn un(toks: &[char], i: &mut usize, v: &dyn Fn(char) -> bool) -> bool {
        let t = toks[*i];
        *i += 1;
        match t {
            '!' => !un(toks, i, v),
            '(' => {
                let r = iff(toks, i, v);
                *i += 1;
                r
            }
            c => v(c),
        }
    }
    let squeezed = text.replace("<->", "=").replace("->", ">");
    let toks: Vec<char> = squeezed.chars().filter(|c| !c.is_whitespace()).collect();
    let mut i = 0;
    let r = iff(&toks, &mut i, value);
    assert_eq!(i, toks.len(), "unparsed input in {text}");
    r
}

fn tautology_sentences() -> Vec<String> {
    let mut rng = StdRng::seed_from_u64(TAUTOLOGY_SEED);
    let mut out = BTreeSet::new();
    let mut order = Vec::new();
    while order.len() < TAUTOLOGIES {
        let template = *TEMPLATES.choose(&mut rng).unwrap();
        let picks: Vec<&str> = ATOMS.choose_multiple(&mut rng, 3).copied().collect();
        let matrix: String = template
            .chars()
            .map(|c| match c {
                'A' => picks[0].to_string(),
                'B' => picks[1].to_string(),
                'C' => picks[2].to_string(),
                c => c.to_string(),
            })
            .collect();
        let text = format!("forall x y z . {matrix}");
        if out.insert(text.clone()) {
            order.push((template, text));
        }
    }
    order
        .into_iter()
        .inspect(|(template, _)| assert!(is_tautology(template), "{template} is not a tautology"))
        .map(|(_, text)| text)
        .collect()
}

fn early_exit() -> Outcome {
    let sig = Arc::new(
        Signature::complete(vec![PredicateDecl::new("P", 1, true), PredicateDecl::new("E", 2, true)]).unwrap(),
    );
    let mut ok = 0;
    let mut first_bad = None;
    for text in tautology_sentences() {
        let phi = parse_universal(&text, &sig).unwrap();
        let diagrams = saturate(&phi, &sig).unwrap().diagrams.len();
        let oracle = CountingOracle::new(ExplicitOracle::new(sig.clone(), vec![]).unwrap());
        let v = decide_universal(&phi, &sig, &oracle).unwrap();
        if diagrams == 0 && v.answer == Answer::Yes && oracle.calls() == 0 {
            ok += 1;
        } else if first_bad.is_none() {
            first_bad = Some(format!("{text}: {diagrams} diagrams, {} oracle calls", oracle.calls()));
        }
    }
    outcome(
        ok == TAUTOLOGIES,
        format!(
            "{ok}/{TAUTOLOGIES} tautologies with no diagrams and no oracle call{}",
            first_bad.map(|b| format!("; {b}")).unwrap_or_default()
        ),
    )
}

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus/oriented-graphs")
}

fn corpus_witnesses(witnesses: &mut Witnesses) {
    let dir = corpus_dir();
    let sig = Arc::new(hfc::store::load_signature(&std::fs::read_to_string(dir.join("signature.json")).unwrap()).unwrap());
    let oracle = ExplicitOracle::new(sig.clone(), vec![c2(&sig)]).unwrap();
    let text = std::fs::read_to_string(dir.join("sentences.txt")).unwrap();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let phi = parse_universal(line, &sig).unwrap();
        witnesses.record(&phi, &oracle, &decide_universal(&phi, &sig, &oracle).unwrap());
    }
    for family in ["two-cycle", "all-directed-cycles-up-to(3)", "cliques-geq(3)"] {
        let h = hfc::store::builtin_family(family, &serde_json::Value::Null, &sig).unwrap();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let phi = parse_universal(line, &sig).unwrap();
            witnesses.record(&phi, &h, &decide_universal(&phi, &sig, &h).unwrap());
        }
    }
}

fn cli_transcript() -> Outcome {
    let dir = corpus_dir();
    let cases = [
        ("antisymmetry.txt", &[][..], "antisymmetry.out"),
        ("emptiness.txt", &[][..], "emptiness.out"),
        ("emptiness.txt", &["--trace"][..], "emptiness-trace.out"),
    ];
    let mut mismatches = Vec::new();
    for (sentence, extra, golden) in cases {
        let out = Command::new(env!("CARGO_BIN_EXE_hfc"))
            .arg("decide")
            .arg("--signature")
            .arg(dir.join("signature.json"))
            .arg("--forbidden")
            .arg(dir.join("forbidden.json"))
            .arg("--sentence-file")
            .arg(dir.join(sentence))
            .args(extra)
            .output()
            .unwrap();
        let expected = std::fs::read(dir.join("golden").join(golden)).unwrap();
        if out.status.code() != Some(0) || out.stdout != expected {
            mismatches.push(golden);
        }
    }
    outcome(
        mismatches.is_empty(),
        format!(
            "{} of {} transcripts byte-identical{}",
            cases.len() - mismatches.len(),
            cases.len(),
            if mismatches.is_empty() {
                String::new()
            } else {
                format!("; differing: {}", mismatches.join(", "))
            }
        ),
    )
}

fn main() {
    let mut witnesses = Witnesses {
        seen: 0,
        bad: Vec::new(),
    };
    let mut results: Vec<(usize, &str, Outcome)> = vec![
        (1, "oracle equivalence", oracle_equivalence(&mut witnesses)),
        (2, "correspondence table", table_fidelity()),
        (3, "structure/axiom round trip", round_trip()),
        (4, "hereditary closure", closure()),
        (5, "minimization", minimization()),
        (6, "early exit on tautologies", early_exit()),
    ];
    corpus_witnesses(&mut witnesses);
    results.push((
        7,
        "witness validity",
        outcome(
            witnesses.bad.is_empty() && witnesses.seen > 0,
            format!(
                "{} NO witnesses checked, {} violations{}",
                witnesses.seen,
                witnesses.bad.len(),
                witnesses.bad.first().map(|b| format!("; first: {b}")).unwrap_or_default()
            ),
        ),
    ));
    results.push((8, "CLI transcript", cli_transcript()));

    let mut failed = 0;
    for (n, name, o) in &results {
        println!(
            "acceptance {n} {name}: {} ({})",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
