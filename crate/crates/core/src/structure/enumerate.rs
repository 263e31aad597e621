use std::collections::HashMap;
use std::sync::Arc;

use super::{admissible_tuples, Correspondences, Signature, Structure, Tuple};
use crate::error::{Error, Result};

/// Upper bound on the number of admissible facts for exhaustive enumeration.
pub const MAX_ENUMERATED_TUPLES: usize = 40;

/// Stream of all structures with universe `1..=size`.
///
/// Each admissible fact is one bit of a counter; structures come out in
/// increasing counter order, facts ordered by predicate then tuple. With
/// isomorphism reduction only the counter value that is least in its orbit
/// under element permutations is kept.
pub struct Structures {
    sig: Arc<Signature>,
    size: usize,
    facts: Vec<(usize, Tuple)>,
    next: u64,
    end: u64,
    orbit_maps: Option<Vec<Vec<usize>>>,
}

pub fn enumerate_structures(sig: &Arc<Signature>, size: usize, up_to_iso: bool) -> Result<Structures> {
    if size == 0 {
        return Err(Error::EmptyUniverse);
    }
    let elems: Vec<usize> = (0..size).collect();
    let facts: Vec<(usize, Tuple)> = sig
        .predicates()
        .iter()
        .enumerate()
        .flat_map(|(p, d)| {
            admissible_tuples(d.arity, d.distinct, &elems)
                .into_iter()
                .map(move |t| (p, t))
        })
        .collect();
    if facts.len() > MAX_ENUMERATED_TUPLES {
        return Err(Error::BoundExceeded {
            what: "admissible facts per structure",
            value: facts.len(),
            bound: MAX_ENUMERATED_TUPLES,
        });
    }
    let orbit_maps = up_to_iso.then(|| {
        let index: HashMap<&(usize, Tuple), usize> =
            facts.iter().enumerate().map(|(i, f)| (f, i)).collect();
        Correspondences::new(size, size)
            .skip(1)
            .map(|perm| {
                facts
                    .iter()
                    .map(|(p, t)| {
                        let image = (*p, t.iter().map(|&e| perm[e]).collect::<Tuple>());
                        index[&image]
                    })
                    .collect()
            })
            .collect()
    });
    Ok(Structures {
        sig: sig.clone(),
        size,
        end: 1u64 << facts.len(),
        facts,
        next: 0,
        orbit_maps,
    })
}

impl Structures {
    /// Number of labeled structures the counter runs over.
    pub fn labeled_count(&self) -> u64 {
        self.end
    }

    fn least_in_orbit(&self, mask: u64) -> bool {
        let Some(maps) = &self.orbit_maps else {
            return true;
        };
        maps.iter().all(|map| {
            let mut image = 0u64;
            let mut bits = mask;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                image |= 1 << map[b];
                bits &= bits - 1;
            }
            image >= mask
        })
    }

    fn build(&self, mask: u64) -> Structure {
        let mut s = Structure::new(self.sig.clone(), (1..=self.size).map(|i| i.to_string()))
            .expect("nonempty universe");
        for (bit, (p, t)) in self.facts.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                s.relations[*p].insert(t.clone());
            }
        }
        s
    }
}

impl Iterator for Structures {
    type Item = Structure;

    fn next(&mut self) -> Option<Structure> {
        while self.next < self.end {
            let mask = self.next;
            self.next += 1;
            if self.least_in_orbit(mask) {
                return Some(self.build(mask));
            }
        }
        None
    }
}
