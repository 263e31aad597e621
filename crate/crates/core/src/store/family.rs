use std::sync::Arc;

use serde_json::Value;

use crate::classes::ForbiddenSetOracle;
use crate::error::{Error, Result};
use crate::structure::{Signature, Structure};

pub const FAMILY_NAMES: [&str; 4] = ["two-cycle", "loops", "all-directed-cycles-up-to", "cliques-geq"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    TwoCycle,
    Loops,
    CyclesUpTo(usize),
    CliquesGeq(usize),
}

/// A forbidden set generated on demand from a named family.
#[derive(Debug, Clone)]
pub struct FamilyOracle {
    sig: Arc<Signature>,
    predicate: usize,
    kind: Kind,
    label: String,
}

fn split_call(name: &str) -> Result<(&str, Option<usize>)> {
    let name = name.trim();
    let Some(open) = name.find('(') else {
        return Ok((name, None));
    };
    let inner = name[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| Error::UnknownFamily(name.to_string()))?;
    let n = inner
        .trim()
        .parse()
        .map_err(|_| Error::Format(format!("bad family parameter `{inner}` in `{name}`")))?;
    Ok((name[..open].trim(), Some(n)))
}

fn param(params: &Value, key: &str, inline: Option<usize>, family: &str) -> Result<usize> {
    if let Some(n) = inline {
        return Ok(n);
    }
    match params.get(key) {
        Some(v) => v
            .as_u64()
            .map(|n| n as usize)
            .ok_or_else(|| Error::Format(format!("{family}: `{key}` must be a non-negative integer"))),
        None => Err(Error::Format(format!("{family}: missing parameter `{key}`"))),
    }
}

fn pick_predicate(sig: &Signature, params: &Value, family: &str, need_repeats: bool) -> Result<usize> {
    let ok = |p: usize| {
        let d = sig.predicate(p);
        d.arity == 2 && (!need_repeats || !d.distinct)
    };
    match params.get("predicate") {
        Some(Value::String(name)) => {
            let (i, _) = sig.lookup(name)?;
            if ok(i) {
                Ok(i)
            } else {
                Err(Error::Format(format!(
                    "{family}: predicate `{name}` must be binary{}",
                    if need_repeats { " and allow repeated entries" } else { "" }
                )))
            }
        }
        Some(_) => Err(Error::Format(format!("{family}: `predicate` must be a string"))),
        None => (0..sig.len()).find(|&p| ok(p)).ok_or_else(|| {
            Error::Format(format!(
                "{family}: the signature has no binary predicate{}",
                if need_repeats { " allowing repeated entries" } else { "" }
            ))
        }),
    }
}

/// Resolves a family by name. Parameters come from `params` or inline, as in
/// `cliques-geq(3)`; `params.predicate` selects the binary predicate.
pub fn builtin_family(name: &str, params: &Value, sig: &Arc<Signature>) -> Result<FamilyOracle> {
    let (base, inline) = split_call(name)?;
    let kind = match base {
        "two-cycle" => Kind::TwoCycle,
        "loops" => Kind::Loops,
        "all-directed-cycles-up-to" => Kind::CyclesUpTo(param(params, "n", inline, base)?),
        "cliques-geq" => {
            let k = param(params, "k", inline, base)?;
            if k == 0 {
                return Err(Error::Format("cliques-geq: `k` must be at least 1".into()));
            }
            Kind::CliquesGeq(k)
        }
        _ => return Err(Error::UnknownFamily(name.to_string())),
    };
    if inline.is_some() && matches!(kind, Kind::TwoCycle | Kind::Loops) {
        return Err(Error::Format(format!("{base} takes no parameter")));
    }
    let needs_repeats = kind == Kind::Loops;
    let predicate = pick_predicate(sig, params, base, needs_repeats)?;
    let label = match kind {
        Kind::TwoCycle | Kind::Loops => base.to_string(),
        Kind::CyclesUpTo(n) | Kind::CliquesGeq(n) => format!("{base}({n})"),
    };
    Ok(FamilyOracle {
        sig: sig.clone(),
        predicate,
        kind,
        label,
    })
}

impl FamilyOracle {
    fn graph(&self, n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Structure {
        let mut s = Structure::new(self.sig.clone(), (1..=n).map(|i| i.to_string()))
            .expect("nonempty universe");
        for (a, b) in arcs {
            s.insert(self.predicate, vec![a, b]).expect("admissible arc");
        }
        s
    }

    fn cycle(&self, n: usize) -> Structure {
        self.graph(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    fn clique(&self, n: usize) -> Structure {
        self.graph(
            n,
            (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))),
        )
    }

    fn loops_allowed(&self) -> bool {
        !self.sig.predicate(self.predicate).distinct
    }
}

impl ForbiddenSetOracle for FamilyOracle {
    fn enumerate_upto(&self, size: usize) -> Result<Vec<Structure>> {
        let out = match self.kind {
            Kind::TwoCycle => (size >= 2).then(|| self.cycle(2)).into_iter().collect(),
            Kind::Loops => (size >= 1).then(|| self.cycle(1)).into_iter().collect(),
            Kind::CyclesUpTo(n) => {
                let start = if self.loops_allowed() { 1 } else { 2 };
                (start..=n.min(size)).map(|k| self.cycle(k)).collect()
            }
            // only the smallest clique is minimal; larger ones contain it
            Kind::CliquesGeq(k) => (size >= k).then(|| self.clique(k)).into_iter().collect(),
        };
        Ok(out)
    }

    fn describe(&self) -> String {
        format!("plugin {} on {}", self.label, self.sig.predicate(self.predicate).name)
    }
}
