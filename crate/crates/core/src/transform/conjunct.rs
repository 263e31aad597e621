use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::logic::Formula;
use crate::structure::{admissible_tuples, has_repeat, Signature, Structure};

/// Variable index into the quantifier prefix of the sentence under analysis.
pub type Var = usize;

/// A predicate applied to variables.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: usize,
    pub args: Vec<Var>,
}

/// Conjunction of equalities, disequalities, and signed atoms over a subset of
/// the prefix variables.
///
/// Pairs are stored with the smaller index first. Inserting a factor that
/// contradicts one already present fails and leaves the conjunct unusable, so
/// a stored conjunct never holds both an atom and its negation, nor `x != x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Conjunct {
    pub(super) sig: Arc<Signature>,
    pub(super) names: Arc<[String]>,
    pub(super) vars: Vec<Var>,
    pub(super) eqs: BTreeSet<(Var, Var)>,
    pub(super) neqs: BTreeSet<(Var, Var)>,
    pub(super) pos: BTreeSet<Atom>,
    pub(super) neg: BTreeSet<Atom>,
}

fn ordered(a: Var, b: Var) -> (Var, Var) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Raised when a factor contradicts the conjunct it is added to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Contradiction;

impl Conjunct {
    /// The empty (true) conjunct.
    pub fn new(sig: Arc<Signature>, names: Arc<[String]>) -> Self {
        Conjunct {
            sig,
            names,
            vars: Vec::new(),
            eqs: BTreeSet::new(),
            neqs: BTreeSet::new(),
            pos: BTreeSet::new(),
            neg: BTreeSet::new(),
        }
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn eqs(&self) -> &BTreeSet<(Var, Var)> {
        &self.eqs
    }

    pub fn neqs(&self) -> &BTreeSet<(Var, Var)> {
        &self.neqs
    }

    pub fn positive(&self) -> &BTreeSet<Atom> {
        &self.pos
    }

    pub fn negative(&self) -> &BTreeSet<Atom> {
        &self.neg
    }

    /// `x = x` is dropped as redundant.
    pub fn add_eq(&mut self, a: Var, b: Var) -> Result<(), Contradiction> {
        if a == b {
            return Ok(());
        }
        let pair = ordered(a, b);
        if self.neqs.contains(&pair) {
            return Err(Contradiction);
        }
        self.eqs.insert(pair);
        Ok(())
    }

    pub fn add_neq(&mut self, a: Var, b: Var) -> Result<(), Contradiction> {
        let pair = ordered(a, b);
        if a == b || self.eqs.contains(&pair) {
            return Err(Contradiction);
        }
        self.neqs.insert(pair);
        Ok(())
    }

    pub fn add_atom(&mut self, atom: Atom, positive: bool) -> Result<(), Contradiction> {
        let (mine, other) = if positive {
            (&mut self.pos, &self.neg)
        } else {
            (&mut self.neg, &self.pos)
        };
        if other.contains(&atom) {
            return Err(Contradiction);
        }
        mine.insert(atom);
        Ok(())
    }

    /// Conjunction of two conjuncts over the same prefix.
    pub fn merge(&self, other: &Conjunct) -> Result<Conjunct, Contradiction> {
        let mut out = self.clone();
        for &(a, b) in &other.eqs {
            out.add_eq(a, b)?;
        }
        for &(a, b) in &other.neqs {
            out.add_neq(a, b)?;
        }
        for a in &other.pos {
            out.add_atom(a.clone(), true)?;
        }
        for a in &other.neg {
            out.add_atom(a.clone(), false)?;
        }
        Ok(out)
    }

    /// Variables mentioned by some factor, ascending.
    pub(super) fn mentioned(&self) -> Vec<Var> {
        let mut vs = BTreeSet::new();
        for &(a, b) in self.eqs.iter().chain(&self.neqs) {
            vs.insert(a);
            vs.insert(b);
        }
        for atom in self.pos.iter().chain(&self.neg) {
            vs.extend(atom.args.iter().copied());
        }
        vs.into_iter().collect()
    }

    /// Whether every pair of variables is related by `=` or `!=`.
    pub fn equality_complete(&self) -> bool {
        self.unrelated_pairs().is_empty()
    }

    pub(super) fn unrelated_pairs(&self) -> Vec<(Var, Var)> {
        let mut out = Vec::new();
        for (i, &a) in self.vars.iter().enumerate() {
            for &b in &self.vars[i + 1..] {
                let pair = ordered(a, b);
                if !self.eqs.contains(&pair) && !self.neqs.contains(&pair) {
                    out.push(pair);
                }
            }
        }
        out
    }

    /// Every atom a complete description over `vars` must decide: for each
    /// predicate, all tuples of the conjunct's variables (repetition only
    /// for predicates that allow it). Predicates allowing repetition come
    /// first, then distinct ones, each group in signature order.
    pub(super) fn required_atoms(&self) -> Vec<Atom> {
        let preds = self.sig.predicates();
        let order = (0..preds.len())
            .filter(|&p| !preds[p].distinct)
            .chain((0..preds.len()).filter(|&p| preds[p].distinct));
        order
            .flat_map(|p| {
                admissible_tuples(preds[p].arity, preds[p].distinct, &self.vars)
                    .into_iter()
                    .map(move |args| Atom { predicate: p, args })
            })
            .collect()
    }

    /// No equalities, all pairs apart, and every required atom decided.
    pub fn is_complete(&self) -> bool {
        if self.vars.is_empty() || !self.eqs.is_empty() {
            return false;
        }
        let pairs = self.vars.len() * self.vars.len().saturating_sub(1) / 2;
        if self.neqs.len() != pairs || !self.equality_complete() {
            return false;
        }
        let required = self.required_atoms();
        let decided = required
            .iter()
            .filter(|a| self.pos.contains(a) || self.neg.contains(a))
            .count();
        decided == required.len() && self.pos.len() + self.neg.len() == required.len()
    }

    /// Positive atom with a repeated argument on a distinct predicate.
    pub(super) fn has_repeat_violation(&self) -> bool {
        self.pos
            .iter()
            .any(|a| self.sig.predicate(a.predicate).distinct && has_repeat(&a.args))
    }

    fn name(&self, v: Var) -> &str {
        &self.names[v]
    }

    fn atom_formula(&self, a: &Atom) -> Formula {
        Formula::atom(
            &self.sig.predicate(a.predicate).name,
            a.args.iter().map(|&v| self.name(v)),
        )
    }

    /// The conjunct as a quantifier-free formula: equalities, disequalities,
    /// then atoms in predicate/tuple order.
    pub fn to_formula(&self) -> Formula {
        let mut parts: Vec<Formula> = Vec::new();
        parts.extend(self.eqs.iter().map(|&(a, b)| Formula::eq(self.name(a), self.name(b))));
        parts.extend(self.neqs.iter().map(|&(a, b)| Formula::neq(self.name(a), self.name(b))));
        let mut atoms: Vec<(&Atom, bool)> = self
            .pos
            .iter()
            .map(|a| (a, true))
            .chain(self.neg.iter().map(|a| (a, false)))
            .collect();
        atoms.sort();
        for (a, positive) in atoms {
            let f = self.atom_formula(a);
            parts.push(if positive { f } else { Formula::not(f) });
        }
        Formula::And(parts)
    }

    /// `exists vars . conjunct`.
    pub fn existential_closure(&self) -> Formula {
        let names: Vec<&str> = self.vars.iter().map(|&v| self.name(v)).collect();
        Formula::exists(&names, self.to_formula())
    }
}

impl fmt::Display for Conjunct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.vars.iter().map(|&v| self.name(v)).collect();
        write!(f, "[{}] ", names.join(" "))?;
        match self.to_formula() {
            Formula::And(parts) if parts.is_empty() => write!(f, "true"),
            Formula::And(parts) => {
                let rendered: Vec<String> = parts.iter().map(ToString::to_string).collect();
                write!(f, "{}", rendered.join(" & "))
            }
            other => write!(f, "{other}"),
        }
    }
}

/// A complete conjunct: it describes exactly one structure on its variables
/// up to isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagram(pub(super) Conjunct);

impl Diagram {
    /// Wraps `c` if it is complete.
    pub fn new(c: Conjunct) -> Option<Diagram> {
        c.is_complete().then_some(Diagram(c))
    }

    pub fn conjunct(&self) -> &Conjunct {
        &self.0
    }

    pub fn into_conjunct(self) -> Conjunct {
        self.0
    }

    pub fn size(&self) -> usize {
        self.0.vars.len()
    }

    /// One element per variable, named after it; relations are the positive
    /// atoms.
    pub fn to_structure(&self) -> Structure {
        let c = &self.0;
        let mut s = Structure::new(c.sig.clone(), c.vars.iter().map(|&v| c.names[v].clone()))
            .expect("diagram variables are distinct and nonempty");
        for atom in &c.pos {
            let tuple = atom
                .args
                .iter()
                .map(|v| c.vars.iter().position(|w| w == v).expect("variable of the diagram"))
                .collect();
            s.insert(atom.predicate, tuple)
                .expect("complete diagrams respect the signature");
        }
        s
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
