//! JSON documents for signatures, structures, and forbidden sets, plus the
//! built-in forbidden-set families.
//!
//! ```text
//! signature:     { "version": 1, "complete": bool,
//!                  "predicates": [ { "name": str, "arity": int, "distinct": bool } ] }
//! structure:     { "version": 1, "universe": [str], "relations": { name: [[str]] } }
//! forbidden set: { "version": 1, "structures": [ structure ] }
//!              | { "version": 1, "plugin": str, "params": { ... } }
//! ```
//!
//! Predicates of an incomplete signature that allow repeated entries carry
//! `"finite": true`.

mod family;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

pub use family::{builtin_family, FamilyOracle, FAMILY_NAMES};

use crate::classes::{ExplicitOracle, ForbiddenSetOracle};
use crate::error::{Error, Result};
use crate::structure::{PredicateDecl, Signature, Structure};

pub const FORMAT_VERSION: u32 = 1;

fn check_version(v: u32) -> Result<()> {
    if v == FORMAT_VERSION {
        Ok(())
    } else {
        Err(Error::Format(format!(
            "unsupported format version {v} (this build reads version {FORMAT_VERSION})"
        )))
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

fn default_version() -> u32 {
    FORMAT_VERSION
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PredicateDoc {
    name: String,
    arity: usize,
    distinct: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    finite: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SignatureDoc {
    version: u32,
    complete: bool,
    predicates: Vec<PredicateDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StructureDoc {
    #[serde(default = "default_version")]
    version: u32,
    universe: Vec<String>,
    #[serde(default)]
    relations: IndexMap<String, Vec<Vec<String>>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ForbiddenDoc {
    List {
        version: u32,
        structures: Vec<StructureDoc>,
    },
    Plugin {
        version: u32,
        plugin: String,
        #[serde(default)]
        params: serde_json::Value,
    },
}

pub fn load_signature(text: &str) -> Result<Signature> {
    let doc: SignatureDoc = serde_json::from_str(text)?;
    check_version(doc.version)?;
    let preds = doc
        .predicates
        .into_iter()
        .map(|p| PredicateDecl {
            name: p.name,
            arity: p.arity,
            distinct: p.distinct,
            finite: p.finite,
        })
        .collect();
    Signature::new(preds, doc.complete)
}

pub fn save_signature(sig: &Signature) -> String {
    let doc = SignatureDoc {
        version: FORMAT_VERSION,
        complete: sig.is_complete(),
        predicates: sig
            .predicates()
            .iter()
            .map(|p| PredicateDoc {
                name: p.name.clone(),
                arity: p.arity,
                distinct: p.distinct,
                finite: p.finite,
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("serializable");
    out.push('\n');
    out
}

fn structure_from_doc(doc: StructureDoc, sig: &Arc<Signature>) -> Result<Structure> {
    check_version(doc.version)?;
    let mut s = Structure::new(sig.clone(), doc.universe)?;
    for (name, tuples) in doc.relations {
        sig.lookup(&name)?;
        for t in tuples {
            s.insert_named(&name, &t)?;
        }
    }
    Ok(s)
}

pub fn load_structure(text: &str, sig: &Arc<Signature>) -> Result<Structure> {
    structure_from_doc(serde_json::from_str(text)?, sig)
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn json_list<'a>(items: impl IntoIterator<Item = &'a str>) -> String {
    let parts: Vec<String> = items.into_iter().map(json_str).collect();
    format!("[{}]", parts.join(", "))
}

fn write_structure(out: &mut String, s: &Structure, indent: &str) {
    let sig = s.signature();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "{indent}  \"version\": {FORMAT_VERSION},");
    let _ = writeln!(
        out,
        "{indent}  \"universe\": {},",
        json_list(s.universe().iter().map(String::as_str))
    );
    if sig.is_empty() {
        let _ = writeln!(out, "{indent}  \"relations\": {{}}");
    } else {
        let _ = writeln!(out, "{indent}  \"relations\": {{");
        for (p, decl) in sig.predicates().iter().enumerate() {
            let tuples: Vec<String> = s
                .relation(p)
                .iter()
                .map(|t| json_list(s.tuple_names(t)))
                .collect();
            let comma = if p + 1 < sig.len() { "," } else { "" };
            let _ = writeln!(
                out,
                "{indent}    {}: [{}]{comma}",
                json_str(&decl.name),
                tuples.join(", ")
            );
        }
        let _ = writeln!(out, "{indent}  }}");
    }
    let _ = write!(out, "{indent}}}");
}

/// The structure document as a JSON value, relations in signature order.
pub fn structure_value(s: &Structure) -> serde_json::Value {
    let sig = s.signature();
    let doc = StructureDoc {
        version: FORMAT_VERSION,
        universe: s.universe().to_vec(),
        relations: sig
            .predicates()
            .iter()
            .enumerate()
            .map(|(p, decl)| {
                let tuples = s
                    .relation(p)
                    .iter()
                    .map(|t| s.tuple_names(t).into_iter().map(String::from).collect())
                    .collect();
                (decl.name.clone(), tuples)
            })
            .collect(),
    };
    serde_json::to_value(doc).expect("serializable")
}

/// Structure document; tuples are written one relation per line.
pub fn save_structure(s: &Structure) -> String {
    let mut out = String::new();
    write_structure(&mut out, s, "");
    out.push('\n');
    out
}

pub fn save_forbidden(structures: &[Structure]) -> String {
    let mut out = format!("{{\n  \"version\": {FORMAT_VERSION},\n  \"structures\": [");
    for (i, s) in structures.iter().enumerate() {
        out.push_str(if i == 0 { "\n    " } else { ",\n    " });
        write_structure(&mut out, s, "    ");
    }
    out.push_str(if structures.is_empty() { "]\n}\n" } else { "\n  ]\n}\n" });
    out
}

/// Where a forbidden set comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum ForbiddenSpec {
    List(Vec<Structure>),
    Plugin {
        name: String,
        params: serde_json::Value,
    },
}

pub fn load_forbidden(text: &str, sig: &Arc<Signature>) -> Result<ForbiddenSpec> {
    let doc: ForbiddenDoc = serde_json::from_str(text).map_err(|e| {
        Error::Format(format!(
            "forbidden set must have `structures` or `plugin`: {e}"
        ))
    })?;
    match doc {
        ForbiddenDoc::List {
            version,
            structures,
        } => {
            check_version(version)?;
            let list = structures
                .into_iter()
                .map(|d| structure_from_doc(d, sig))
                .collect::<Result<_>>()?;
            Ok(ForbiddenSpec::List(list))
        }
        ForbiddenDoc::Plugin {
            version,
            plugin,
            params,
        } => {
            check_version(version)?;
            Ok(ForbiddenSpec::Plugin {
                name: plugin,
                params,
            })
        }
    }
}

impl ForbiddenSpec {
    pub fn into_oracle(self, sig: &Arc<Signature>) -> Result<Box<dyn ForbiddenSetOracle>> {
        Ok(match self {
            ForbiddenSpec::List(list) => Box::new(ExplicitOracle::new(sig.clone(), list)?),
            ForbiddenSpec::Plugin { name, params } => Box::new(builtin_family(&name, &params, sig)?),
        })
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Signature plus forbidden-set oracle, with the sources they came from.
pub struct Workspace {
    pub signature: Arc<Signature>,
    pub forbidden: Box<dyn ForbiddenSetOracle>,
    pub provenance: Vec<String>,
}

/// Forbidden set given as a file or a plugin name.
#[derive(Debug, Clone)]
pub enum ForbiddenSource {
    File(PathBuf),
    Plugin {
        name: String,
        params: serde_json::Value,
    },
}

impl Workspace {
    pub fn open(signature: &Path, forbidden: &ForbiddenSource) -> Result<Workspace> {
        let sig = Arc::new(load_signature(&read(signature)?)?);
        let mut provenance = vec![format!("signature: {}", signature.display())];
        let spec = match forbidden {
            ForbiddenSource::File(path) => {
                provenance.push(format!("forbidden: {}", path.display()));
                load_forbidden(&read(path)?, &sig)?
            }
            ForbiddenSource::Plugin { name, params } => {
                provenance.push(if params.is_null() {
                    format!("forbidden: plugin {name}")
                } else {
                    format!("forbidden: plugin {name} {params}")
                });
                ForbiddenSpec::Plugin {
                    name: name.clone(),
                    params: params.clone(),
                }
            }
        };
        Ok(Workspace {
            forbidden: spec.into_oracle(&sig)?,
            signature: sig,
            provenance,
        })
    }
}

pub fn read_file(path: &Path) -> Result<String> {
    read(path)
}
