//! Hereditary classes `Forb(H)`: membership, the universal-theory decision
//! procedure, translations between axioms and forbidden substructures, and
//! minimisation of forbidden sets.

mod oracle;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

pub use oracle::{CountingOracle, ExplicitOracle, ForbiddenSetOracle};

use crate::error::{Error, Result};
use crate::logic::{Formula, UniversalSentence, KEYWORDS};
use crate::structure::{admissible_tuples, embeds, enumerate_structures, isomorphic, Embedding, Signature, Structure};
use crate::transform::{saturate, Diagram, StepCounts};

/// Default largest variable count accepted by the brute-force decision.
pub const DEFAULT_BRUTEFORCE_BOUND: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    InClass,
    /// `forbidden` embeds into the checked structure via `embedding`.
    Violates {
        forbidden: Structure,
        embedding: Embedding,
    },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::InClass)
    }
}

/// Membership against an already fetched forbidden list, first hit in list
/// order.
pub fn member_among(s: &Structure, forbidden: &[Structure]) -> Result<Membership> {
    for h in forbidden.iter().filter(|h| h.size() <= s.size()) {
        if let Some(embedding) = embeds(h, s)? {
            return Ok(Membership::Violates {
                forbidden: h.clone(),
                embedding,
            });
        }
    }
    Ok(Membership::InClass)
}

/// Whether `s` belongs to `Forb(H)`.
pub fn member(s: &Structure, h: &dyn ForbiddenSetOracle) -> Result<Membership> {
    member_among(s, &h.enumerate_upto(s.size())?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Answer {
    Yes,
    No,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "YES",
            Answer::No => "NO",
        })
    }
}

/// What happened to one diagram during the membership phase.
#[derive(Debug, Clone)]
pub struct TraceEntry {
    pub diagram: Diagram,
    pub structure: Structure,
    pub outcome: Membership,
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub answer: Answer,
    /// A member of the class falsifying the sentence; present iff the answer
    /// is NO.
    pub witness: Option<Structure>,
    pub trace: Vec<TraceEntry>,
    pub counts: StepCounts,
}

#[derive(Debug, Clone)]
pub struct DecideOptions {
    pub keep_trace: bool,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions { keep_trace: true }
    }
}

/// Decides whether `phi` holds in every member of `Forb(H)`.
pub fn decide_universal(
    phi: &UniversalSentence,
    sig: &Arc<Signature>,
    h: &dyn ForbiddenSetOracle,
) -> Result<Verdict> {
    decide_universal_with(phi, sig, h, &DecideOptions::default())
}

pub fn decide_universal_with(
    phi: &UniversalSentence,
    sig: &Arc<Signature>,
    h: &dyn ForbiddenSetOracle,
    opts: &DecideOptions,
) -> Result<Verdict> {
    let sat = saturate(phi, sig)?;
    let mut verdict = Verdict {
        answer: Answer::Yes,
        witness: None,
        trace: Vec::new(),
        counts: sat.counts,
    };
    // no disjunct survives: phi holds in every structure
    if sat.diagrams.is_empty() {
        return Ok(verdict);
    }
    let largest = sat.diagrams.iter().map(Diagram::size).max().unwrap_or(0);
    let forbidden = h.enumerate_upto(largest)?;
    for diagram in sat.diagrams {
        let structure = diagram.to_structure();
        let outcome = member_among(&structure, &forbidden)?;
        let found = outcome.is_member();
        if found {
            verdict.answer = Answer::No;
            verdict.witness = Some(structure.clone());
        }
        if opts.keep_trace {
            verdict.trace.push(TraceEntry {
                diagram,
                structure,
                outcome,
            });
        }
        if found {
            break;
        }
    }
    Ok(verdict)
}

/// Decides by enumerating every structure with at most as many elements as
/// `phi` has variables. Refuses sentences with more than `bound` variables.
pub fn decide_universal_bruteforce(
    phi: &UniversalSentence,
    sig: &Arc<Signature>,
    h: &dyn ForbiddenSetOracle,
    bound: usize,
) -> Result<Verdict> {
    let p = phi.arity();
    if p > bound {
        return Err(Error::BoundExceeded {
            what: "variables for brute-force decision",
            value: p,
            bound,
        });
    }
    sig.check_horizon(p)?;
    let forbidden = h.enumerate_upto(p)?;
    for size in 1..=p {
        for s in enumerate_structures(sig, size, false)? {
            if phi.holds_in(&s)? {
                continue;
            }
            if member_among(&s, &forbidden)?.is_member() {
                return Ok(Verdict {
                    answer: Answer::No,
                    witness: Some(s),
                    trace: Vec::new(),
                    counts: StepCounts::default(),
                });
            }
        }
    }
    Ok(Verdict {
        answer: Answer::Yes,
        witness: None,
        trace: Vec::new(),
        counts: StepCounts::default(),
    })
}

/// Drops later members isomorphic to earlier ones.
pub fn dedup_isomorphic(structures: Vec<Structure>) -> Result<Vec<Structure>> {
    let mut out: Vec<Structure> = Vec::new();
    'next: for s in structures {
        for kept in &out {
            if isomorphic(kept, &s)? {
                continue 'next;
            }
        }
        out.push(s);
    }
    Ok(out)
}

/// Forbidden substructures of size at most `p` whose exclusion is
/// equivalent to the axiom `theta` on structures of size at most `p`
/// (and therefore everywhere, `theta` being universal).
pub fn axiom_to_forbidden(theta: &UniversalSentence, sig: &Arc<Signature>) -> Result<Vec<Structure>> {
    let sat = saturate(theta, sig)?;
    dedup_isomorphic(sat.diagrams.iter().map(Diagram::to_structure).collect())
}

/// Union of the forbidden sets of several axioms, deduplicated up to
/// isomorphism and optionally minimised.
pub fn axioms_to_forbidden(
    axioms: &[UniversalSentence],
    sig: &Arc<Signature>,
    minimal: bool,
) -> Result<Vec<Structure>> {
    let mut all = Vec::new();
    for theta in axioms {
        all.extend(axiom_to_forbidden(theta, sig)?);
    }
    let all = dedup_isomorphic(all)?;
    if minimal {
        minimize(&all)
    } else {
        Ok(all)
    }
}

fn usable_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !KEYWORDS.contains(&name)
}

/// The universal axiom excluding `s` as a substructure: the negated diagram
/// of `s`, universally closed.
pub fn structure_to_axiom(s: &Structure, sig: &Arc<Signature>) -> Result<UniversalSentence> {
    if !Arc::ptr_eq(s.signature(), sig) && **s.signature() != **sig {
        return Err(Error::SignatureMismatch);
    }
    let p = s.size();
    sig.check_horizon(p)?;
    let names: Vec<String> = if s.universe().iter().all(|n| usable_identifier(n)) {
        s.universe().to_vec()
    } else {
        (1..=p).map(|i| format!("x{i}")).collect()
    };
    let elems: Vec<usize> = (0..p).collect();
    let mut parts = Vec::new();
    for i in 0..p {
        for j in i + 1..p {
            parts.push(Formula::neq(&names[i], &names[j]));
        }
    }
    for (index, decl) in sig.predicates().iter().enumerate() {
        for tuple in admissible_tuples(decl.arity, decl.distinct, &elems) {
            let atom = Formula::atom(&decl.name, tuple.iter().map(|&e| names[e].clone()));
            parts.push(if s.holds(index, &tuple) { atom } else { Formula::not(atom) });
        }
    }
    let body = if parts.len() == 1 {
        parts.pop().expect("one part")
    } else {
        Formula::And(parts)
    };
    UniversalSentence::new(names, Formula::not(body))
}

/// Removes duplicates up to isomorphism and every member that contains
/// another remaining member. Order of the survivors is kept.
pub fn minimize(hs: &[Structure]) -> Result<Vec<Structure>> {
    let unique = dedup_isomorphic(hs.to_vec())?;
    let mut keep = Vec::new();
    'candidates: for (i, s) in unique.iter().enumerate() {
        for (j, other) in unique.iter().enumerate() {
            if i != j && other.size() <= s.size() && embeds(other, s)?.is_some() {
                continue 'candidates;
            }
        }
        keep.push(s.clone());
    }
    Ok(keep)
}

/// No member embeds into another (isomorphic duplicates included).
pub fn is_minimal(hs: &[Structure]) -> Result<bool> {
    for (i, a) in hs.iter().enumerate() {
        for (j, b) in hs.iter().enumerate() {
            if i != j && a.size() <= b.size() && embeds(a, b)?.is_some() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
