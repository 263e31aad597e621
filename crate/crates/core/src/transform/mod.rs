//! Saturation of a negated universal sentence into complete diagrams.
//!
//! `not forall x . M` becomes `exists x . C_1 | ... | C_r`; the disjuncts are
//! then split until every pair of variables is related by `=` or `!=`,
//! equalities are substituted away, and every atom over the remaining
//! variables is decided. Each surviving disjunct describes one candidate
//! finite structure with at most as many elements as the sentence has
//! variables.

mod conjunct;

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

pub use conjunct::{Atom, Conjunct, Contradiction, Diagram, Var};

use crate::error::Result;
use crate::logic::{Formula, UniversalSentence};
use crate::structure::{has_repeat, Signature, Structure};

fn dedup(cs: Vec<Conjunct>) -> Vec<Conjunct> {
    let mut seen = HashSet::new();
    cs.into_iter().filter(|c| seen.insert(c.clone())).collect()
}

/// Disjunctive normal form of `positive ? f : !f` with contradictory
/// disjuncts dropped as soon as they appear.
fn dnf(f: &Formula, positive: bool, empty: &Conjunct, names: &[String]) -> Vec<Conjunct> {
    let var = |v: &String| names.iter().position(|n| n == v).expect("closed matrix");
    let single = |build: &dyn Fn(&mut Conjunct) -> Result<(), Contradiction>| {
        let mut c = empty.clone();
        match build(&mut c) {
            Ok(()) => vec![c],
            Err(Contradiction) => vec![],
        }
    };
    let product = |parts: Vec<Vec<Conjunct>>| {
        parts.into_iter().fold(vec![empty.clone()], |acc, part| {
            acc.iter()
                .flat_map(|a| part.iter().filter_map(move |b| a.merge(b).ok()))
                .collect()
        })
    };
    let both = |a: &Formula, pa: bool, b: &Formula, pb: bool| {
        product(vec![dnf(a, pa, empty, names), dnf(b, pb, empty, names)])
    };
    match f {
        Formula::Atom(p, args) => {
            let atom = Atom {
                predicate: empty.sig.index_of(p).expect("atoms checked against signature"),
                args: args.iter().map(var).collect(),
            };
            single(&|c| c.add_atom(atom.clone(), positive))
        }
        Formula::Eq(a, b) | Formula::Neq(a, b) => {
            let (a, b) = (var(a), var(b));
            if positive == matches!(f, Formula::Eq(..)) {
                single(&|c| c.add_eq(a, b))
            } else {
                single(&|c| c.add_neq(a, b))
            }
        }
        Formula::Not(g) => dnf(g, !positive, empty, names),
        Formula::And(gs) | Formula::Or(gs) => {
            let parts: Vec<_> = gs.iter().map(|g| dnf(g, positive, empty, names)).collect();
            if positive == matches!(f, Formula::And(_)) {
                product(parts)
            } else {
                parts.concat()
            }
        }
        Formula::Implies(a, b) => {
            if positive {
                [dnf(a, false, empty, names), dnf(b, true, empty, names)].concat()
            } else {
                both(a, true, b, false)
            }
        }
        Formula::Iff(a, b) => {
            if positive {
                [both(a, true, b, true), both(a, false, b, false)].concat()
            } else {
                [both(a, true, b, false), both(a, false, b, true)].concat()
            }
        }
        Formula::Forall(..) | Formula::Exists(..) => {
            unreachable!("universal sentences have quantifier-free matrices")
        }
    }
}

/// Disjuncts of the negated matrix, in left-to-right order.
///
/// Each conjunct ranges over the variables it mentions; a conjunct that
/// mentions none keeps the first prefix variable so it still describes a
/// nonempty structure.
pub fn negate_to_dnf(phi: &UniversalSentence, sig: &Arc<Signature>) -> Vec<Conjunct> {
    let names: Arc<[String]> = phi.vars().to_vec().into();
    let empty = Conjunct::new(sig.clone(), names.clone());
    let mut out = dnf(phi.matrix(), false, &empty, &names);
    for c in &mut out {
        c.vars = c.mentioned();
        if c.vars.is_empty() {
            c.vars.push(0);
        }
    }
    dedup(out)
}

/// Splits every conjunct on each unrelated variable pair into an `=` branch
/// followed by a `!=` branch.
pub fn saturate_equalities(cs: Vec<Conjunct>) -> Vec<Conjunct> {
    fn split(c: Conjunct, pairs: &[(Var, Var)], out: &mut Vec<Conjunct>) {
        let Some((&(a, b), rest)) = pairs.split_first() else {
            out.push(c);
            return;
        };
        let mut eq = c.clone();
        let mut neq = c;
        if eq.add_eq(a, b).is_ok() {
            split(eq, rest, out);
        }
        if neq.add_neq(a, b).is_ok() {
            split(neq, rest, out);
        }
    }
    let mut out = Vec::new();
    for c in cs {
        let pairs = c.unrelated_pairs();
        split(c, &pairs, &mut out);
    }
    dedup(out)
}

fn representative(classes: &mut [Var], v: Var) -> Var {
    let mut r = v;
    while classes[r] != r {
        r = classes[r];
    }
    classes[v] = r;
    r
}

/// Substitutes every variable by the least variable it is equated with,
/// dropping `t = t` and deleting conjuncts that end up with `t != t` or a
/// clashing pair of atoms.
pub fn eliminate_equalities(cs: Vec<Conjunct>) -> Vec<Conjunct> {
    let mut out = Vec::new();
    'conjuncts: for c in cs {
        if c.eqs.is_empty() {
            out.push(c);
            continue;
        }
        let mut classes: Vec<Var> = (0..c.names.len()).collect();
        for &(a, b) in &c.eqs {
            let (ra, rb) = (representative(&mut classes, a), representative(&mut classes, b));
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            classes[hi] = lo;
        }
        let mut rep = |v: Var| representative(&mut classes, v);
        let mut next = Conjunct::new(c.sig.clone(), c.names.clone());
        next.vars = c.vars.iter().map(|&v| rep(v)).collect::<BTreeSet<_>>().into_iter().collect();
        for &(a, b) in &c.neqs {
            if next.add_neq(rep(a), rep(b)).is_err() {
                continue 'conjuncts;
            }
        }
        for (atoms, positive) in [(&c.pos, true), (&c.neg, false)] {
            for atom in atoms {
                let mapped = Atom {
                    predicate: atom.predicate,
                    args: atom.args.iter().map(|&v| rep(v)).collect(),
                };
                if next.add_atom(mapped, positive).is_err() {
                    continue 'conjuncts;
                }
            }
        }
        out.push(next);
    }
    dedup(out)
}

/// Decides every remaining atom, positive branch first.
///
/// Conjuncts asserting a distinct predicate on a repeated argument are
/// deleted; the negations of such atoms are true everywhere and are dropped.
/// Input that is not yet equality-complete goes through the two equality
/// steps first.
pub fn saturate_predicates(cs: Vec<Conjunct>, sig: &Signature, vars: usize) -> Result<Vec<Diagram>> {
    sig.check_horizon(vars)?;
    let (ready, pending): (Vec<_>, Vec<_>) = cs
        .into_iter()
        .partition(|c| c.eqs.is_empty() && c.equality_complete());
    let mut cs = ready;
    cs.extend(eliminate_equalities(saturate_equalities(pending)));

    fn branch(c: Conjunct, open: &[Atom], out: &mut Vec<Diagram>) {
        let Some((atom, rest)) = open.split_first() else {
            out.push(Diagram(c));
            return;
        };
        let mut yes = c.clone();
        let mut no = c;
        if yes.add_atom(atom.clone(), true).is_ok() {
            branch(yes, rest, out);
        }
        if no.add_atom(atom.clone(), false).is_ok() {
            branch(no, rest, out);
        }
    }

    let mut out = Vec::new();
    for mut c in cs {
        if c.has_repeat_violation() {
            continue;
        }
        let sig = c.sig.clone();
        c.neg
            .retain(|a| !(sig.predicate(a.predicate).distinct && has_repeat(&a.args)));
        let open: Vec<Atom> = c
            .required_atoms()
            .into_iter()
            .filter(|a| !c.pos.contains(a) && !c.neg.contains(a))
            .collect();
        branch(c, &open, &mut out);
    }
    let mut seen = HashSet::new();
    out.retain(|d| seen.insert(d.clone()));
    Ok(out)
}

/// The structure described by a complete diagram.
pub fn diagram_to_structure(d: &Diagram) -> Structure {
    d.to_structure()
}

/// Number of disjuncts after each phase.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct StepCounts {
    pub negation: usize,
    pub equality_split: usize,
    pub equality_elimination: usize,
    pub diagrams: usize,
}

/// Output of the whole saturation pipeline.
#[derive(Debug, Clone)]
pub struct Saturation {
    pub diagrams: Vec<Diagram>,
    pub counts: StepCounts,
}

/// Runs all phases on the negation of `phi`.
pub fn saturate(phi: &UniversalSentence, sig: &Arc<Signature>) -> Result<Saturation> {
    sig.check_horizon(phi.arity())?;
    let step1 = negate_to_dnf(phi, sig);
    let negation = step1.len();
    let step2 = saturate_equalities(step1);
    let equality_split = step2.len();
    let step3 = eliminate_equalities(step2);
    let equality_elimination = step3.len();
    let diagrams = saturate_predicates(step3, sig, phi.arity())?;
    Ok(Saturation {
        counts: StepCounts {
            negation,
            equality_split,
            equality_elimination,
            diagrams: diagrams.len(),
        },
        diagrams,
    })
}
