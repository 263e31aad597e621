use std::collections::HashSet;

use crate::error::{Error, Result};

/// A predicate symbol together with its arity.
///
/// `distinct` marks predicates that only ever hold on tuples of pairwise
/// distinct elements. `finite` places a predicate in the explicitly listed
/// finite part of the language; it only matters for incomplete signatures,
/// where every predicate outside the finite part must be distinct.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PredicateDecl {
    pub name: String,
    pub arity: usize,
    pub distinct: bool,
    pub finite: bool,
}

impl PredicateDecl {
    pub fn new(name: impl Into<String>, arity: usize, distinct: bool) -> Self {
        PredicateDecl {
            name: name.into(),
            arity,
            distinct,
            finite: false,
        }
    }

    pub fn in_finite_part(mut self) -> Self {
        self.finite = true;
        self
    }
}

/// An ordered relational language with equality.
///
/// A complete signature lists the whole (finite) language. An incomplete one
/// lists exactly the predicates of arity at most [`Signature::max_arity`] of an
/// infinite language whose unlisted tail consists of distinct predicates only;
/// that arity is the signature's horizon.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    predicates: Vec<PredicateDecl>,
    complete: bool,
}

impl Signature {
    /// Validates the declarations and orders them by ascending arity, keeping
    /// the given order among predicates of equal arity.
    pub fn new(mut predicates: Vec<PredicateDecl>, complete: bool) -> Result<Self> {
        let mut seen = HashSet::new();
        for p in &predicates {
            if p.arity == 0 {
                return Err(Error::ZeroArity(p.name.clone()));
            }
            if !seen.insert(p.name.as_str()) {
                return Err(Error::DuplicatePredicate(p.name.clone()));
            }
            if !complete && !p.distinct && !p.finite {
                return Err(Error::NonDistinctTail(p.name.clone()));
            }
        }
        predicates.sort_by_key(|p| p.arity);
        Ok(Signature {
            predicates,
            complete,
        })
    }

    /// A complete signature, mainly for tests and built-in examples.
    pub fn complete(predicates: Vec<PredicateDecl>) -> Result<Self> {
        Self::new(predicates, true)
    }

    pub fn predicates(&self) -> &[PredicateDecl] {
        &self.predicates
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn len(&self) -> usize {
        self.predicates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.predicates.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.predicates.iter().position(|p| p.name == name)
    }

    pub fn predicate(&self, index: usize) -> &PredicateDecl {
        &self.predicates[index]
    }

    pub fn lookup(&self, name: &str) -> Result<(usize, &PredicateDecl)> {
        self.index_of(name)
            .map(|i| (i, &self.predicates[i]))
            .ok_or_else(|| Error::UnknownPredicate(name.to_string()))
    }

    pub fn max_arity(&self) -> usize {
        self.predicates.iter().map(|p| p.arity).max().unwrap_or(0)
    }

    /// Largest arity up to which the listed predicates are the whole language,
    /// or `None` when the signature is complete.
    pub fn horizon(&self) -> Option<usize> {
        if self.complete {
            None
        } else {
            Some(self.max_arity())
        }
    }

    /// Fails unless every predicate of arity at most `vars` is listed.
    pub fn check_horizon(&self, vars: usize) -> Result<()> {
        match self.horizon() {
            Some(h) if h < vars => Err(Error::HorizonExceeded {
                needed: vars,
                horizon: h,
            }),
            _ => Ok(()),
        }
    }
}

/// All tuples of the given arity over `elems` in lexicographic order of
/// positions in `elems`; with `distinct` only tuples without repeated entries.
pub fn admissible_tuples(arity: usize, distinct: bool, elems: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if distinct && arity > elems.len() {
        return out;
    }
    let mut current = Vec::with_capacity(arity);
    fill_tuples(arity, distinct, elems, &mut current, &mut out);
    out
}

fn fill_tuples(
    arity: usize,
    distinct: bool,
    elems: &[usize],
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if current.len() == arity {
        out.push(current.clone());
        return;
    }
    for &e in elems {
        if distinct && current.contains(&e) {
            continue;
        }
        current.push(e);
        fill_tuples(arity, distinct, elems, current, out);
        current.pop();
    }
}

pub(crate) fn has_repeat(tuple: &[usize]) -> bool {
    tuple
        .iter()
        .enumerate()
        .any(|(i, a)| tuple[i + 1..].contains(a))
}
