//! Induced-substructure embedding search.
//!
//! Candidate maps are visited in lexicographic order of their target
//! sequences, the same order in which [`Correspondences`] lists injective
//! assignments of variables to elements.

use std::ops::ControlFlow;

use super::{admissible_tuples, Structure};
use crate::error::Result;

/// Injective map from the elements of a source structure into a target,
/// preserving and reflecting every relation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Embedding {
    map: Vec<usize>,
}

impl Embedding {
    pub fn new(map: Vec<usize>) -> Self {
        Embedding { map }
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, source: usize) -> usize {
        self.map[source]
    }

    /// Target elements hit by the map, ascending.
    pub fn image(&self) -> Vec<usize> {
        let mut img = self.map.clone();
        img.sort_unstable();
        img
    }

    /// `source -> target` pairs rendered with element ids.
    pub fn describe(&self, source: &Structure, target: &Structure) -> String {
        self.map
            .iter()
            .enumerate()
            .map(|(i, &t)| format!("{}->{}", source.element_name(i), target.element_name(t)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Lexicographic enumeration of injective assignments of `vars` variables to
/// `elements` elements (0-based).
///
/// For 3 variables and 4 elements this yields 24 rows starting
/// `[0,1,2], [0,1,3], [0,2,1]` and ending `[3,2,0], [3,2,1]`.
#[derive(Debug, Clone)]
pub struct Correspondences {
    elements: usize,
    current: Option<Vec<usize>>,
}

impl Correspondences {
    pub fn new(vars: usize, elements: usize) -> Self {
        let current = (vars <= elements).then(|| (0..vars).collect());
        Correspondences { elements, current }
    }

    fn advance(&self, row: &[usize]) -> Option<Vec<usize>> {
        let n = row.len();
        for i in (0..n).rev() {
            let prefix = &row[..i];
            let bump = (row[i] + 1..self.elements).find(|v| !prefix.contains(v));
            if let Some(v) = bump {
                let mut next = prefix.to_vec();
                next.push(v);
                let free: Vec<usize> = (0..self.elements).filter(|e| !next.contains(e)).collect();
                next.extend(free.into_iter().take(n - i - 1));
                return Some(next);
            }
        }
        None
    }
}

impl Iterator for Correspondences {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let row = self.current.take()?;
        self.current = self.advance(&row);
        Some(row)
    }
}

struct Check {
    predicate: usize,
    tuple: Vec<usize>,
    expected: bool,
}

/// For each source element `i`, the atoms over `0..=i` that mention `i`,
/// with their truth value in the source.
fn build_checks(source: &Structure) -> Vec<Vec<Check>> {
    let sig = source.signature();
    (0..source.size())
        .map(|i| {
            let prefix: Vec<usize> = (0..=i).collect();
            let mut checks = Vec::new();
            for (p, decl) in sig.predicates().iter().enumerate() {
                for tuple in admissible_tuples(decl.arity, decl.distinct, &prefix) {
                    if tuple.contains(&i) {
                        let expected = source.holds(p, &tuple);
                        checks.push(Check {
                            predicate: p,
                            tuple,
                            expected,
                        });
                    }
                }
            }
            checks
        })
        .collect()
}

struct Search<'a, F, V> {
    target: &'a Structure,
    checks: Vec<Vec<Check>>,
    allowed: F,
    visit: V,
    map: Vec<usize>,
    used: Vec<bool>,
    buf: Vec<usize>,
}

impl<F, V> Search<'_, F, V>
where
    F: Fn(usize, usize) -> bool,
    V: FnMut(&[usize]) -> ControlFlow<()>,
{
    fn consistent(&mut self, depth: usize) -> bool {
        for check in &self.checks[depth] {
            self.buf.clear();
            self.buf.extend(check.tuple.iter().map(|&e| self.map[e]));
            if self.target.holds(check.predicate, &self.buf) != check.expected {
                return false;
            }
        }
        true
    }

    fn run(&mut self, depth: usize) -> ControlFlow<()> {
        if depth == self.checks.len() {
            return (self.visit)(&self.map);
        }
        for t in 0..self.target.size() {
            if self.used[t] || !(self.allowed)(depth, t) {
                continue;
            }
            self.map.push(t);
            self.used[t] = true;
            let ok = self.consistent(depth);
            let flow = if ok {
                self.run(depth + 1)
            } else {
                ControlFlow::Continue(())
            };
            self.used[t] = false;
            self.map.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }
}

fn search(
    source: &Structure,
    target: &Structure,
    allowed: impl Fn(usize, usize) -> bool,
    visit: impl FnMut(&[usize]) -> ControlFlow<()>,
) {
    if source.size() > target.size() {
        return;
    }
    let mut s = Search {
        target,
        checks: build_checks(source),
        allowed,
        visit,
        map: Vec::with_capacity(source.size()),
        used: vec![false; target.size()],
        buf: Vec::new(),
    };
    let _ = s.run(0);
}

/// Calls `f` on every embedding of `source` into `target`, in lexicographic
/// order, until it breaks.
pub fn for_each_embedding(
    source: &Structure,
    target: &Structure,
    mut f: impl FnMut(&Embedding) -> ControlFlow<()>,
) -> Result<()> {
    source.same_signature(target)?;
    search(source, target, |_, _| true, |m| f(&Embedding::new(m.to_vec())));
    Ok(())
}

/// First embedding of `source` as an induced substructure of `target`.
pub fn embeds(source: &Structure, target: &Structure) -> Result<Option<Embedding>> {
    let mut found = None;
    for_each_embedding(source, target, |e| {
        found = Some(e.clone());
        ControlFlow::Break(())
    })?;
    Ok(found)
}

pub fn count_embeddings(source: &Structure, target: &Structure) -> Result<usize> {
    let mut n = 0;
    for_each_embedding(source, target, |_| {
        n += 1;
        ControlFlow::Continue(())
    })?;
    Ok(n)
}

/// Permutation search pruned by per-element fact counts.
pub fn isomorphic(a: &Structure, b: &Structure) -> Result<bool> {
    a.same_signature(b)?;
    if a.size() != b.size()
        || (0..a.signature().len()).any(|p| a.relation(p).len() != b.relation(p).len())
    {
        return Ok(false);
    }
    let pa = a.element_profiles();
    let pb = b.element_profiles();
    let mut sa = pa.clone();
    let mut sb = pb.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return Ok(false);
    }
    let mut found = false;
    search(
        a,
        b,
        |i, t| pa[i] == pb[t],
        |_| {
            found = true;
            ControlFlow::Break(())
        },
    );
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{PredicateDecl, Signature};
    use super::*;
    use crate::error::Error;
    use std::sync::Arc;

    #[test]
    fn table_of_correspondences() {
        let rows: Vec<Vec<usize>> = Correspondences::new(3, 4)
            .map(|r| r.into_iter().map(|e| e + 1).collect())
            .collect();
        assert_eq!(rows.len(), 24);
        assert_eq!(rows[0], [1, 2, 3]);
        assert_eq!(rows[1], [1, 2, 4]);
        assert_eq!(rows[2], [1, 3, 2]);
        assert_eq!(rows[5], [1, 4, 3]);
        assert_eq!(rows[22], [4, 3, 1]);
        assert_eq!(rows[23], [4, 3, 2]);
        let mut sorted = rows.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted, rows);
    }

    #[test]
    fn correspondences_edge_cases() {
        assert_eq!(Correspondences::new(0, 3).count(), 1);
        assert_eq!(Correspondences::new(4, 3).count(), 0);
        assert_eq!(Correspondences::new(2, 2).collect::<Vec<_>>(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(Correspondences::new(4, 6).count(), 360);
    }

    #[test]
    fn search_order_matches_correspondences() {
        let sig = digraph_sig();
        let h = Structure::new(sig.clone(), ["x", "y", "z"]).unwrap();
        let s = Structure::new(sig, ["1", "2", "3", "4"]).unwrap();
        let mut seen = Vec::new();
        for_each_embedding(&h, &s, |e| {
            seen.push(e.map().to_vec());
            ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!(seen, Correspondences::new(3, 4).collect::<Vec<_>>());
    }

    #[test]
    fn single_point_embeds_first() {
        let sig = digraph_sig();
        let point = Structure::new(sig.clone(), ["p"]).unwrap();
        let e = embeds(&point, &t3(&sig)).unwrap().unwrap();
        assert_eq!(e.map(), [0]);
    }

    #[test]
    fn two_cycle_not_in_tournament() {
        let sig = digraph_sig();
        let (h, s) = (c2(&sig), t3(&sig));
        // every injective pair fails: each pair carries exactly one arc
        for row in Correspondences::new(2, 3) {
            let both = s.holds(0, &[row[0], row[1]]) && s.holds(0, &[row[1], row[0]]);
            assert!(!both);
        }
        assert_eq!(embeds(&h, &s).unwrap(), None);
    }

    #[test]
    fn signature_mismatch() {
        let other = Arc::new(Signature::complete(vec![PredicateDecl::new("F", 2, true)]).unwrap());
        let a = c2(&digraph_sig());
        let b = Structure::new(other, ["a"]).unwrap();
        assert_eq!(embeds(&a, &b), Err(Error::SignatureMismatch));
        assert_eq!(isomorphic(&a, &b), Err(Error::SignatureMismatch));
    }

    #[test]
    fn isomorphism_examples() {
        let sig = digraph_sig();
        let a = c2(&sig);
        assert!(isomorphic(&a, &a).unwrap());
        let b = Structure::from_named(sig.clone(), &["x", "y"], &[("E", &[&["x", "y"], &["y", "x"]])])
            .unwrap();
        assert!(isomorphic(&a, &b).unwrap());
        let c = Structure::from_named(sig.clone(), &["x", "y"], &[("E", &[&["x", "y"]])]).unwrap();
        assert!(!isomorphic(&a, &c).unwrap());
        // same degree profiles, different structures
        let cyc = Structure::from_named(
            sig.clone(),
            &["1", "2", "3"],
            &[("E", &[&["1", "2"], &["2", "3"], &["3", "1"]])],
        )
        .unwrap();
        assert!(!isomorphic(&cyc, &t3(&sig)).unwrap());
        let cyc2 = Structure::from_named(
            sig,
            &["a", "b", "c"],
            &[("E", &[&["b", "a"], &["c", "b"], &["a", "c"]])],
        )
        .unwrap();
        assert!(isomorphic(&cyc, &cyc2).unwrap());
    }

    #[test]
    fn symmetric_triangle_has_six_two_cycles() {
        let sig = digraph_sig();
        let tri = Structure::from_named(
            sig.clone(),
            &["1", "2", "3"],
            &[(
                "E",
                &[&["1", "2"], &["2", "1"], &["2", "3"], &["3", "2"], &["1", "3"], &["3", "1"]],
            )],
        )
        .unwrap();
        assert_eq!(count_embeddings(&c2(&sig), &tri).unwrap(), 6);
        assert_eq!(embeds(&c2(&sig), &tri).unwrap().unwrap().map(), [0, 1]);
    }
}
