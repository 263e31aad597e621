use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::structure::{isomorphic, Signature, Structure};

/// Source of the minimal forbidden substructures of a class.
///
/// `enumerate_upto(q)` returns every forbidden structure with at most `q`
/// elements; results must grow monotonically with `q`. Implementations are
/// shared across threads.
pub trait ForbiddenSetOracle: Send + Sync {
    fn enumerate_upto(&self, size: usize) -> Result<Vec<Structure>>;

    /// Whether `s` is (isomorphic to) a forbidden structure.
    fn contains(&self, s: &Structure) -> Result<bool> {
        for h in self.enumerate_upto(s.size())? {
            if h.size() == s.size() && isomorphic(&h, s)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Short human-readable description for reports.
    fn describe(&self) -> String;
}

/// A finite, explicitly listed forbidden set.
#[derive(Debug, Clone)]
pub struct ExplicitOracle {
    sig: Arc<Signature>,
    members: Vec<Structure>,
}

impl ExplicitOracle {
    pub fn new(sig: Arc<Signature>, members: Vec<Structure>) -> Result<Self> {
        for m in &members {
            if !Arc::ptr_eq(m.signature(), &sig) && **m.signature() != *sig {
                return Err(Error::SignatureMismatch);
            }
        }
        Ok(ExplicitOracle { sig, members })
    }

    pub fn empty(sig: Arc<Signature>) -> Self {
        ExplicitOracle {
            sig,
            members: Vec::new(),
        }
    }

    pub fn members(&self) -> &[Structure] {
        &self.members
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    /// The same class generated by its inclusion-minimal subset.
    pub fn minimized(&self) -> Result<Self> {
        Ok(ExplicitOracle {
            sig: self.sig.clone(),
            members: super::minimize(&self.members)?,
        })
    }
}

impl ForbiddenSetOracle for ExplicitOracle {
    fn enumerate_upto(&self, size: usize) -> Result<Vec<Structure>> {
        Ok(self
            .members
            .iter()
            .filter(|m| m.size() <= size)
            .cloned()
            .collect())
    }

    fn describe(&self) -> String {
        format!("explicit list of {} structures", self.members.len())
    }
}

/// Wraps an oracle and counts `enumerate_upto` calls.
pub struct CountingOracle<O> {
    inner: O,
    calls: AtomicUsize,
}

impl<O: ForbiddenSetOracle> CountingOracle<O> {
    pub fn new(inner: O) -> Self {
        CountingOracle {
            inner,
            calls: AtomicUsize::new(0),
        }
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }
}

impl<O: ForbiddenSetOracle> ForbiddenSetOracle for CountingOracle<O> {
    fn enumerate_upto(&self, size: usize) -> Result<Vec<Structure>> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        self.inner.enumerate_upto(size)
    }

    fn contains(&self, s: &Structure) -> Result<bool> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        self.inner.contains(s)
    }

    fn describe(&self) -> String {
        self.inner.describe()
    }
}

impl<O: ForbiddenSetOracle + ?Sized> ForbiddenSetOracle for Box<O> {
    fn enumerate_upto(&self, size: usize) -> Result<Vec<Structure>> {
        (**self).enumerate_upto(size)
    }

    fn contains(&self, s: &Structure) -> Result<bool> {
        (**self).contains(s)
    }

    fn describe(&self) -> String {
        (**self).describe()
    }
}

impl<O: ForbiddenSetOracle + ?Sized> ForbiddenSetOracle for &O {
    fn enumerate_upto(&self, size: usize) -> Result<Vec<Structure>> {
        (**self).enumerate_upto(size)
    }

    fn contains(&self, s: &Structure) -> Result<bool> {
        (**self).contains(s)
    }

    fn describe(&self) -> String {
        (**self).describe()
    }
}
