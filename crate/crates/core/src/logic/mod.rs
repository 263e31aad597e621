//! First-order formulas over a relational signature with equality.

mod eval;
mod parse;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

pub use eval::{eval, eval_closed, Env};
pub use parse::{parse_sentence, parse_universal, KEYWORDS};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String, Vec<String>),
    Eq(String, String),
    Neq(String, String),
    Not(Box<Formula>),
    /// Empty conjunction is true.
    And(Vec<Formula>),
    /// Empty disjunction is false.
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn atom<S: Into<String>>(predicate: &str, args: impl IntoIterator<Item = S>) -> Self {
        Formula::Atom(predicate.to_string(), args.into_iter().map(Into::into).collect())
    }

    pub fn eq(a: &str, b: &str) -> Self {
        Formula::Eq(a.into(), b.into())
    }

    pub fn neq(a: &str, b: &str) -> Self {
        Formula::Neq(a.into(), b.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(vars: &[&str], body: Formula) -> Self {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::Forall(v.to_string(), Box::new(acc)))
    }

    pub fn exists(vars: &[&str], body: Formula) -> Self {
        vars.iter()
            .rev()
            .fold(body, |acc, v| Formula::Exists(v.to_string(), Box::new(acc)))
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Atom(..) | Formula::Eq(..) | Formula::Neq(..) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().all(Formula::is_quantifier_free),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Forall(..) | Formula::Exists(..) => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        let mut note = |v: &String, bound: &Vec<&str>| {
            if !bound.contains(&v.as_str()) {
                out.insert(v.clone());
            }
        };
        match self {
            Formula::Atom(_, args) => args.iter().for_each(|v| note(v, bound)),
            Formula::Eq(a, b) | Formula::Neq(a, b) => {
                note(a, bound);
                note(b, bound);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => {
                fs.iter().for_each(|f| f.collect_free(bound, out))
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) => {
                bound.push(v);
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Renames bound variables so that no quantifier rebinds a name already
    /// in use; a clash on `x` becomes `x_1`, `x_2`, ... Free variables are an
    /// error.
    pub fn rename_apart(&self) -> Result<Formula> {
        let mut r = Renamer::default();
        r.visit(self)
    }

    /// Structural equality modulo the names of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        alpha_eq(self, other, &mut Vec::new())
    }
}

#[derive(Default)]
struct Renamer {
    used: BTreeSet<String>,
    scope: HashMap<String, Vec<String>>,
}

impl Renamer {
    fn lookup(&self, v: &str) -> Result<String> {
        self.scope
            .get(v)
            .and_then(|s| s.last().cloned())
            .ok_or_else(|| Error::FreeVariable(v.to_string()))
    }

    fn bind(&mut self, v: &str) -> String {
        let name = if self.used.contains(v) {
            (1..)
                .map(|i| format!("{v}_{i}"))
                .find(|n| !self.used.contains(n))
                .expect("unbounded")
        } else {
            v.to_string()
        };
        self.used.insert(name.clone());
        self.scope.entry(v.to_string()).or_default().push(name.clone());
        name
    }

    fn unbind(&mut self, v: &str) {
        self.scope.get_mut(v).map(Vec::pop);
    }

    fn visit(&mut self, f: &Formula) -> Result<Formula> {
        Ok(match f {
            Formula::Atom(p, args) => Formula::Atom(
                p.clone(),
                args.iter().map(|v| self.lookup(v)).collect::<Result<_>>()?,
            ),
            Formula::Eq(a, b) => Formula::Eq(self.lookup(a)?, self.lookup(b)?),
            Formula::Neq(a, b) => Formula::Neq(self.lookup(a)?, self.lookup(b)?),
            Formula::Not(g) => Formula::Not(Box::new(self.visit(g)?)),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| self.visit(g)).collect::<Result<_>>()?),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| self.visit(g)).collect::<Result<_>>()?),
            Formula::Implies(a, b) => Formula::implies(self.visit(a)?, self.visit(b)?),
            Formula::Iff(a, b) => Formula::iff(self.visit(a)?, self.visit(b)?),
            Formula::Forall(v, g) | Formula::Exists(v, g) => {
                let name = self.bind(v);
                let body = Box::new(self.visit(g)?);
                self.unbind(v);
                if matches!(f, Formula::Forall(..)) {
                    Formula::Forall(name, body)
                } else {
                    Formula::Exists(name, body)
                }
            }
        })
    }
}

fn alpha_eq<'a>(a: &'a Formula, b: &'a Formula, bound: &mut Vec<(&'a str, &'a str)>) -> bool {
    let same = |x: &str, y: &str, bound: &Vec<(&str, &str)>| {
        for &(l, r) in bound.iter().rev() {
            if l == x || r == y {
                return l == x && r == y;
            }
        }
        x == y
    };
    match (a, b) {
        (Formula::Atom(p, xs), Formula::Atom(q, ys)) => {
            p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| same(x, y, bound))
        }
        (Formula::Eq(a1, a2), Formula::Eq(b1, b2)) | (Formula::Neq(a1, a2), Formula::Neq(b1, b2)) => {
            same(a1, b1, bound) && same(a2, b2, bound)
        }
        (Formula::Not(x), Formula::Not(y)) => alpha_eq(x, y, bound),
        (Formula::And(xs), Formula::And(ys)) | (Formula::Or(xs), Formula::Or(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| alpha_eq(x, y, bound))
        }
        (Formula::Implies(a1, a2), Formula::Implies(b1, b2))
        | (Formula::Iff(a1, a2), Formula::Iff(b1, b2)) => {
            alpha_eq(a1, b1, bound) && alpha_eq(a2, b2, bound)
        }
        (Formula::Forall(v, x), Formula::Forall(w, y))
        | (Formula::Exists(v, x), Formula::Exists(w, y)) => {
            bound.push((v, w));
            let r = alpha_eq(x, y, bound);
            bound.pop();
            r
        }
        _ => false,
    }
}

/// Fully parenthesised rendering in the input grammar. Leading universal
/// quantifiers are grouped as `forall x y . body`.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, true)
    }
}

fn write_formula(f: &mut fmt::Formatter<'_>, g: &Formula, top: bool) -> fmt::Result {
    match g {
        Formula::Atom(p, args) => write!(f, "{p}({})", args.join(",")),
        Formula::Eq(a, b) => write!(f, "({a} = {b})"),
        Formula::Neq(a, b) => write!(f, "({a} != {b})"),
        Formula::Not(inner) => {
            write!(f, "!")?;
            write_formula(f, inner, false)
        }
        Formula::And(fs) | Formula::Or(fs) if fs.is_empty() => {
            write!(f, "{}", if matches!(g, Formula::And(_)) { "true" } else { "false" })
        }
        Formula::And(fs) | Formula::Or(fs) => {
            let op = if matches!(g, Formula::And(_)) { " & " } else { " | " };
            if fs.len() == 1 {
                return write_formula(f, &fs[0], top);
            }
            write!(f, "(")?;
            for (i, x) in fs.iter().enumerate() {
                if i > 0 {
                    write!(f, "{op}")?;
                }
                write_formula(f, x, false)?;
            }
            write!(f, ")")
        }
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            let op = if matches!(g, Formula::Implies(..)) { " -> " } else { " <-> " };
            write!(f, "(")?;
            write_formula(f, a, false)?;
            write!(f, "{op}")?;
            write_formula(f, b, false)?;
            write!(f, ")")
        }
        Formula::Forall(..) | Formula::Exists(..) => {
            let (kw, mut vars, mut body) = match g {
                Formula::Forall(v, b) => ("forall", vec![v.as_str()], b.as_ref()),
                Formula::Exists(v, b) => ("exists", vec![v.as_str()], b.as_ref()),
                _ => unreachable!(),
            };
            loop {
                match (kw, body) {
                    ("forall", Formula::Forall(v, b)) | ("exists", Formula::Exists(v, b)) => {
                        vars.push(v);
                        body = b;
                    }
                    _ => break,
                }
            }
            if !top {
                write!(f, "(")?;
            }
            write!(f, "{kw} {} . ", vars.join(" "))?;
            write_formula(f, body, top)?;
            if !top {
                write!(f, ")")?;
            }
            Ok(())
        }
    }
}

/// `forall x_1 ... x_p . matrix` with a quantifier-free matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniversalSentence {
    vars: Vec<String>,
    matrix: Formula,
}

impl UniversalSentence {
    /// Checks closedness and quantifier-freeness directly.
    pub fn new(vars: Vec<String>, matrix: Formula) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::NoGroundTerms);
        }
        if !matrix.is_quantifier_free() {
            return Err(Error::NotUniversal("matrix contains a quantifier".into()));
        }
        let declared: BTreeSet<&String> = vars.iter().collect();
        if declared.len() != vars.len() {
            return Err(Error::NotUniversal("variable quantified twice".into()));
        }
        if let Some(v) = matrix.free_vars().into_iter().find(|v| !declared.contains(v)) {
            return Err(Error::FreeVariable(v));
        }
        Ok(UniversalSentence { vars, matrix })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Number of quantified variables.
    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn matrix(&self) -> &Formula {
        &self.matrix
    }

    pub fn to_formula(&self) -> Formula {
        let vars: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        Formula::forall(&vars, self.matrix.clone())
    }
}

impl fmt::Display for UniversalSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "forall {} . ", self.vars.join(" "))?;
        write_formula(f, &self.matrix, true)
    }
}

const PRENEX_HINT: &str = "quantifiers must all lead the sentence; move them to the front \
     (e.g. write `forall x y . A(x) -> B(y)` instead of `forall x . A(x) -> forall y . B(y)`)";

/// Splits a formula into its universal prefix and quantifier-free matrix.
pub fn as_universal(f: &Formula) -> Result<UniversalSentence> {
    let f = f.rename_apart()?;
    let mut vars = Vec::new();
    let mut body = &f;
    while let Formula::Forall(v, b) = body {
        vars.push(v.clone());
        body = b;
    }
    if contains_exists(body) {
        return Err(Error::NotUniversal("contains an existential quantifier".into()));
    }
    if !body.is_quantifier_free() {
        return Err(Error::NotUniversal(PRENEX_HINT.into()));
    }
    UniversalSentence::new(vars, body.clone())
}

fn contains_exists(f: &Formula) -> bool {
    match f {
        Formula::Exists(..) => true,
        Formula::Atom(..) | Formula::Eq(..) | Formula::Neq(..) => false,
        Formula::Not(g) | Formula::Forall(_, g) => contains_exists(g),
        Formula::And(gs) | Formula::Or(gs) => gs.iter().any(contains_exists),
        Formula::Implies(a, b) | Formula::Iff(a, b) => contains_exists(a) || contains_exists(b),
    }
}
