//! Finite model checking.

use std::collections::HashMap;

use super::{Formula, UniversalSentence};
use crate::error::{Error, Result};
use crate::structure::Structure;

/// Assignment of variables to element indices.
pub type Env = HashMap<String, usize>;

/// Truth of `f` in `s` under `env`; quantifiers range over the whole universe.
pub fn eval(s: &Structure, f: &Formula, env: &Env) -> Result<bool> {
    let mut stack: Vec<(&str, usize)> = env.iter().map(|(k, &v)| (k.as_str(), v)).collect();
    if let Some((name, _)) = stack.iter().find(|(_, v)| *v >= s.size()) {
        return Err(Error::UnknownElement(format!("{name} -> out of range")));
    }
    eval_in(s, f, &mut stack)
}

/// Truth of a sentence.
pub fn eval_closed(s: &Structure, f: &Formula) -> Result<bool> {
    eval(s, f, &Env::new())
}

fn lookup(stack: &[(&str, usize)], v: &str) -> Result<usize> {
    stack
        .iter()
        .rev()
        .find(|(name, _)| *name == v)
        .map(|&(_, e)| e)
        .ok_or_else(|| Error::UnboundVariable(v.to_string()))
}

fn eval_in<'a>(s: &Structure, f: &'a Formula, stack: &mut Vec<(&'a str, usize)>) -> Result<bool> {
    Ok(match f {
        Formula::Atom(p, args) => {
            let (index, decl) = s.signature().lookup(p)?;
            if decl.arity != args.len() {
                return Err(Error::ArityMismatch {
                    predicate: p.clone(),
                    expected: decl.arity,
                    found: args.len(),
                });
            }
            let tuple = args
                .iter()
                .map(|v| lookup(stack, v))
                .collect::<Result<Vec<_>>>()?;
            s.holds(index, &tuple)
        }
        Formula::Eq(a, b) => lookup(stack, a)? == lookup(stack, b)?,
        Formula::Neq(a, b) => lookup(stack, a)? != lookup(stack, b)?,
        Formula::Not(g) => !eval_in(s, g, stack)?,
        Formula::And(gs) => {
            for g in gs {
                if !eval_in(s, g, stack)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Or(gs) => {
            for g in gs {
                if eval_in(s, g, stack)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Implies(a, b) => !eval_in(s, a, stack)? || eval_in(s, b, stack)?,
        Formula::Iff(a, b) => eval_in(s, a, stack)? == eval_in(s, b, stack)?,
        Formula::Forall(v, g) | Formula::Exists(v, g) => {
            let universal = matches!(f, Formula::Forall(..));
            for e in 0..s.size() {
                stack.push((v, e));
                let r = eval_in(s, g, stack);
                stack.pop();
                if r? != universal {
                    return Ok(!universal);
                }
            }
            universal
        }
    })
}

/// Quantifier-free matrix with variables and predicates resolved to indices.
enum Compiled {
    Atom(usize, Vec<usize>),
    Eq(usize, usize),
    Not(Box<Compiled>),
    And(Vec<Compiled>),
    Or(Vec<Compiled>),
    Iff(Box<Compiled>, Box<Compiled>),
}

impl Compiled {
    fn build(f: &Formula, vars: &[String], s: &Structure) -> Result<Compiled> {
        let var = |v: &String| {
            vars.iter()
                .position(|w| w == v)
                .ok_or_else(|| Error::UnboundVariable(v.clone()))
        };
        Ok(match f {
            Formula::Atom(p, args) => {
                let (index, decl) = s.signature().lookup(p)?;
                if decl.arity != args.len() {
                    return Err(Error::ArityMismatch {
                        predicate: p.clone(),
                        expected: decl.arity,
                        found: args.len(),
                    });
                }
                Compiled::Atom(index, args.iter().map(var).collect::<Result<_>>()?)
            }
            Formula::Eq(a, b) => Compiled::Eq(var(a)?, var(b)?),
            Formula::Neq(a, b) => Compiled::Not(Box::new(Compiled::Eq(var(a)?, var(b)?))),
            Formula::Not(g) => Compiled::Not(Box::new(Self::build(g, vars, s)?)),
            Formula::And(gs) => Compiled::And(gs.iter().map(|g| Self::build(g, vars, s)).collect::<Result<_>>()?),
            Formula::Or(gs) => Compiled::Or(gs.iter().map(|g| Self::build(g, vars, s)).collect::<Result<_>>()?),
            Formula::Implies(a, b) => Compiled::Or(vec![
                Compiled::Not(Box::new(Self::build(a, vars, s)?)),
                Self::build(b, vars, s)?,
            ]),
            Formula::Iff(a, b) => Compiled::Iff(
                Box::new(Self::build(a, vars, s)?),
                Box::new(Self::build(b, vars, s)?),
            ),
            Formula::Forall(..) | Formula::Exists(..) => {
                return Err(Error::NotUniversal("matrix contains a quantifier".into()))
            }
        })
    }

    fn holds(&self, s: &Structure, assignment: &[usize], buf: &mut Vec<usize>) -> bool {
        match self {
            Compiled::Atom(p, args) => {
                buf.clear();
                buf.extend(args.iter().map(|&v| assignment[v]));
                s.holds(*p, buf)
            }
            Compiled::Eq(a, b) => assignment[*a] == assignment[*b],
            Compiled::Not(g) => !g.holds(s, assignment, buf),
            Compiled::And(gs) => gs.iter().all(|g| g.holds(s, assignment, buf)),
            Compiled::Or(gs) => gs.iter().any(|g| g.holds(s, assignment, buf)),
            Compiled::Iff(a, b) => a.holds(s, assignment, buf) == b.holds(s, assignment, buf),
        }
    }
}

impl UniversalSentence {
    /// First assignment (lexicographic over element tuples) falsifying the
    /// matrix in `s`, if any.
    pub fn falsifying_assignment(&self, s: &Structure) -> Result<Option<Vec<usize>>> {
        let compiled = Compiled::build(&self.matrix, &self.vars, s)?;
        let p = self.vars.len();
        let n = s.size();
        let mut assignment = vec![0usize; p];
        let mut buf = Vec::new();
        loop {
            if !compiled.holds(s, &assignment, &mut buf) {
                return Ok(Some(assignment));
            }
            // odometer step
            let mut i = p;
            loop {
                if i == 0 {
                    return Ok(None);
                }
                i -= 1;
                assignment[i] += 1;
                if assignment[i] < n {
                    break;
                }
                assignment[i] = 0;
            }
        }
    }

    pub fn holds_in(&self, s: &Structure) -> Result<bool> {
        Ok(self.falsifying_assignment(s)?.is_none())
    }
}
