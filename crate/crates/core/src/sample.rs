//! Random signatures, structures, forbidden sets, and universal sentences
//! for cross-checking the decision procedure against brute force.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::logic::{Formula, UniversalSentence};
use crate::structure::{admissible_tuples, PredicateDecl, Signature, Structure};

const VARIABLES: [&str; 4] = ["x", "y", "z", "w"];

#[derive(Debug, Clone)]
pub struct SampleConfig {
    pub max_predicates: usize,
    pub max_arity: usize,
    pub max_forbidden: usize,
    pub max_forbidden_size: usize,
    pub max_vars: usize,
    pub max_depth: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            max_predicates: 2,
            max_arity: 2,
            max_forbidden: 3,
            max_forbidden_size: 3,
            max_vars: 3,
            max_depth: 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub signature: Arc<Signature>,
    pub forbidden: Vec<Structure>,
    pub sentence: UniversalSentence,
}

pub fn random_signature<R: Rng>(rng: &mut R, max_predicates: usize, max_arity: usize) -> Arc<Signature> {
    let count = rng.gen_range(1..=max_predicates.max(1));
    let names = ["E", "F", "P", "Q", "R", "S"];
    let preds = (0..count)
        .map(|i| PredicateDecl::new(names[i % names.len()], rng.gen_range(1..=max_arity.max(1)), rng.gen_bool(0.5)))
        .collect();
    Arc::new(Signature::complete(preds).expect("generated names are distinct"))
}

/// Each admissible fact holds with probability `density`.
pub fn random_structure<R: Rng>(rng: &mut R, sig: &Arc<Signature>, size: usize, density: f64) -> Structure {
    let mut s = Structure::new(sig.clone(), (1..=size).map(|i| i.to_string())).expect("size at least 1");
    let elems: Vec<usize> = (0..size).collect();
    for (p, decl) in sig.predicates().iter().enumerate() {
        for t in admissible_tuples(decl.arity, decl.distinct, &elems) {
            if rng.gen_bool(density) {
                s.insert(p, t).expect("admissible tuple");
            }
        }
    }
    s
}

pub fn random_forbidden<R: Rng>(
    rng: &mut R,
    sig: &Arc<Signature>,
    max_members: usize,
    max_size: usize,
) -> Vec<Structure> {
    let count = rng.gen_range(0..=max_members);
    (0..count)
        .map(|_| {
            let size = rng.gen_range(1..=max_size.max(1));
            random_structure(rng, sig, size, 0.5)
        })
        .collect()
}

fn random_matrix<R: Rng>(rng: &mut R, sig: &Signature, vars: &[&str], depth: usize) -> Formula {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        if vars.len() > 1 && rng.gen_bool(0.2) {
            let a = *vars.choose(rng).expect("nonempty");
            let b = *vars.choose(rng).expect("nonempty");
            return Formula::eq(a, b);
        }
        let decl = &sig.predicates()[rng.gen_range(0..sig.len())];
        let args: Vec<&str> = (0..decl.arity).map(|_| *vars.choose(rng).expect("nonempty")).collect();
        return Formula::atom(&decl.name, args);
    }
    let op = rng.gen_range(0..6);
    let mut sub = || random_matrix(rng, sig, vars, depth - 1);
    match op {
        0 => Formula::not(sub()),
        1 => Formula::And(vec![sub(), sub()]),
        2 => Formula::Or(vec![sub(), sub()]),
        3 => Formula::implies(sub(), sub()),
        4 => Formula::iff(sub(), sub()),
        _ => Formula::Or(vec![Formula::not(sub()), sub(), sub()]),
    }
}

pub fn random_universal<R: Rng>(rng: &mut R, sig: &Signature, max_vars: usize, max_depth: usize) -> UniversalSentence {
    let n = rng.gen_range(1..=max_vars.clamp(1, VARIABLES.len()));
    let vars = &VARIABLES[..n];
    let matrix = random_matrix(rng, sig, vars, max_depth);
    UniversalSentence::new(vars.iter().map(|v| v.to_string()).collect(), matrix).expect("closed and quantifier-free")
}

pub fn random_instance<R: Rng>(rng: &mut R, cfg: &SampleConfig) -> Instance {
    let signature = random_signature(rng, cfg.max_predicates, cfg.max_arity);
    let forbidden = random_forbidden(rng, &signature, cfg.max_forbidden, cfg.max_forbidden_size);
    let sentence = random_universal(rng, &signature, cfg.max_vars, cfg.max_depth);
    Instance {
        signature,
        forbidden,
        sentence,
    }
}
