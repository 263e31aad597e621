//! Signatures and finite relational structures.

mod embed;
mod enumerate;
mod signature;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

pub use embed::{count_embeddings, embeds, for_each_embedding, isomorphic, Correspondences, Embedding};
pub use enumerate::{enumerate_structures, Structures, MAX_ENUMERATED_TUPLES};
pub use signature::{admissible_tuples, PredicateDecl, Signature};

pub(crate) use signature::has_repeat;

use crate::error::{Error, Result};

/// A tuple of element indices.
pub type Tuple = Vec<usize>;

/// A finite structure over a relational signature.
///
/// Elements are dense indices `0..size()` carrying opaque string ids; the order
/// of the ids is the canonical element order. Relations are indexed in
/// signature order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    sig: Arc<Signature>,
    universe: Vec<String>,
    relations: Vec<BTreeSet<Tuple>>,
}

impl Structure {
    /// A structure with all relations empty.
    pub fn new<S: Into<String>>(
        sig: Arc<Signature>,
        universe: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let universe: Vec<String> = universe.into_iter().map(Into::into).collect();
        if universe.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        let mut seen = std::collections::HashSet::new();
        for e in &universe {
            if !seen.insert(e.as_str()) {
                return Err(Error::DuplicateElement(e.clone()));
            }
        }
        let relations = vec![BTreeSet::new(); sig.len()];
        Ok(Structure {
            sig,
            universe,
            relations,
        })
    }

    /// Builds a structure from element ids and named facts.
    pub fn from_named<S: AsRef<str>>(
        sig: Arc<Signature>,
        universe: &[S],
        facts: &[(&str, &[&[&str]])],
    ) -> Result<Self> {
        let mut s = Structure::new(sig, universe.iter().map(|e| e.as_ref().to_string()))?;
        for (name, tuples) in facts {
            for t in *tuples {
                s.insert_named(name, t)?;
            }
        }
        Ok(s)
    }

    pub fn insert_named<S: AsRef<str>>(&mut self, predicate: &str, tuple: &[S]) -> Result<()> {
        let (index, _) = self.sig.lookup(predicate)?;
        let tuple = tuple
            .iter()
            .map(|e| self.element_index(e.as_ref()))
            .collect::<Result<Tuple>>()?;
        self.insert(index, tuple)
    }

    /// Adds a fact, validating arity, element range, and distinctness.
    pub fn insert(&mut self, predicate: usize, tuple: Tuple) -> Result<()> {
        let decl = self.sig.predicate(predicate);
        if tuple.len() != decl.arity {
            return Err(Error::ArityMismatch {
                predicate: decl.name.clone(),
                expected: decl.arity,
                found: tuple.len(),
            });
        }
        if let Some(&bad) = tuple.iter().find(|&&e| e >= self.universe.len()) {
            return Err(Error::UnknownElement(bad.to_string()));
        }
        if decl.distinct && has_repeat(&tuple) {
            return Err(Error::RepeatedEntry {
                predicate: decl.name.clone(),
                tuple: self.tuple_names(&tuple).join(","),
            });
        }
        self.relations[predicate].insert(tuple);
        Ok(())
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn size(&self) -> usize {
        self.universe.len()
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn element_name(&self, index: usize) -> &str {
        &self.universe[index]
    }

    pub fn element_index(&self, name: &str) -> Result<usize> {
        self.universe
            .iter()
            .position(|e| e == name)
            .ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn relation(&self, predicate: usize) -> &BTreeSet<Tuple> {
        &self.relations[predicate]
    }

    pub fn holds(&self, predicate: usize, tuple: &[usize]) -> bool {
        self.relations[predicate].contains(tuple)
    }

    /// Total number of facts over all predicates.
    pub fn fact_count(&self) -> usize {
        self.relations.iter().map(BTreeSet::len).sum()
    }

    pub fn tuple_names(&self, tuple: &[usize]) -> Vec<&str> {
        tuple.iter().map(|&e| self.element_name(e)).collect()
    }

    pub(crate) fn same_signature(&self, other: &Structure) -> Result<()> {
        if Arc::ptr_eq(&self.sig, &other.sig) || self.sig == other.sig {
            Ok(())
        } else {
            Err(Error::SignatureMismatch)
        }
    }

    /// The induced substructure on `subset`, elements kept in canonical order.
    pub fn substructure(&self, subset: &[usize]) -> Result<Structure> {
        if subset.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        if let Some(&bad) = subset.iter().find(|&&e| e >= self.size()) {
            return Err(Error::UnknownElement(bad.to_string()));
        }
        let keep: BTreeSet<usize> = subset.iter().copied().collect();
        let renumber: HashMap<usize, usize> =
            keep.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let relations = self
            .relations
            .iter()
            .map(|rel| {
                rel.iter()
                    .filter(|t| t.iter().all(|e| renumber.contains_key(e)))
                    .map(|t| t.iter().map(|e| renumber[e]).collect())
                    .collect()
            })
            .collect();
        Ok(Structure {
            sig: self.sig.clone(),
            universe: keep.iter().map(|&e| self.universe[e].clone()).collect(),
            relations,
        })
    }

    pub fn substructure_named<S: AsRef<str>>(&self, subset: &[S]) -> Result<Structure> {
        let idx = subset
            .iter()
            .map(|e| self.element_index(e.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        self.substructure(&idx)
    }

    /// Same structure with element ids replaced; `names` must be distinct.
    pub fn renamed<S: Into<String>>(&self, names: impl IntoIterator<Item = S>) -> Result<Structure> {
        let fresh = Structure::new(self.sig.clone(), names)?;
        if fresh.size() != self.size() {
            return Err(Error::Format(format!(
                "renaming needs {} element ids, got {}",
                self.size(),
                fresh.size()
            )));
        }
        Ok(Structure {
            relations: self.relations.clone(),
            ..fresh
        })
    }

    /// Per-element invariant: for every predicate and argument position, the
    /// number of facts with the element there. Preserved by isomorphisms.
    pub(crate) fn element_profiles(&self) -> Vec<Vec<usize>> {
        let width: usize = self.sig.predicates().iter().map(|p| p.arity).sum();
        let mut profiles = vec![vec![0usize; width]; self.size()];
        let mut offset = 0;
        for (p, rel) in self.relations.iter().enumerate() {
            for t in rel {
                for (pos, &e) in t.iter().enumerate() {
                    profiles[e][offset + pos] += 1;
                }
            }
            offset += self.sig.predicate(p).arity;
        }
        profiles
    }
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({{{}}}", self.universe.join(","))?;
        for (p, rel) in self.relations.iter().enumerate() {
            let tuples: Vec<String> = rel
                .iter()
                .map(|t| format!("({})", self.tuple_names(t).join(",")))
                .collect();
            write!(f, ", {}={{{}}}", self.sig.predicate(p).name, tuples.join(","))?;
        }
        write!(f, ")")
    }
}
