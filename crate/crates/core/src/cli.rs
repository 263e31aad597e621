//! The `hfc` command line.
//!
//! Exit status: 0 when the command completed (whatever the verdict), 1 when
//! `--oracle-check` or `selftest` finds a disagreement, 2 on input errors,
//! 3 when a horizon or safety bound is exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;

use crate::classes::{
    axioms_to_forbidden, decide_universal_bruteforce, decide_universal_with, member, minimize,
    structure_to_axiom, Answer, DecideOptions, ExplicitOracle, Membership, TraceEntry, Verdict,
    DEFAULT_BRUTEFORCE_BOUND,
};
use crate::error::{Error, Result};
use crate::logic::{parse_universal, UniversalSentence};
use crate::sample::{random_instance, SampleConfig};
use crate::store::{
    load_forbidden, load_signature, load_structure, read_file, save_forbidden, save_structure,
    structure_value, ForbiddenSource, ForbiddenSpec, Workspace,
};
use crate::structure::{enumerate_structures, Signature, Structure};
use crate::transform::StepCounts;

pub const DEFAULT_MAX_VARS: usize = 8;
pub const DEFAULT_MAX_ENUMERATE: usize = 4;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISAGREEMENT: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "hfc",
    version,
    about = "Decide universal sentences over hereditary classes given by forbidden substructures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether a universal sentence holds in every member of Forb(H).
    Decide(DecideArgs),
    /// Translate universal axioms into a forbidden set.
    AxiomsToForbidden(AxiomsArgs),
    /// Print one universal axiom per forbidden structure.
    ForbiddenToAxioms(ListArgs),
    /// Reduce a forbidden set to its inclusion-minimal members.
    Minimize(MinimizeArgs),
    /// Test whether a structure belongs to Forb(H).
    CheckMember(CheckMemberArgs),
    /// List the members of Forb(H) up to a given size.
    Enumerate(EnumerateArgs),
    /// Compare the decision procedure with brute force on random instances.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
struct ClassArgs {
    /// Signature document.
    #[arg(long, value_name = "FILE")]
    signature: PathBuf,
    /// Forbidden-set document.
    #[arg(long, value_name = "FILE", required_unless_present = "plugin", conflicts_with = "plugin")]
    forbidden: Option<PathBuf>,
    /// Built-in forbidden family, e.g. `two-cycle` or `cliques-geq(3)`.
    #[arg(long, value_name = "NAME")]
    plugin: Option<String>,
    /// JSON object of plugin parameters.
    #[arg(long, value_name = "JSON", requires = "plugin")]
    params: Option<String>,
}

impl ClassArgs {
    fn open(&self) -> Result<Workspace> {
        let source = match (&self.forbidden, &self.plugin) {
            (Some(path), _) => ForbiddenSource::File(path.clone()),
            (None, Some(name)) => ForbiddenSource::Plugin {
                name: name.clone(),
                params: match &self.params {
                    Some(text) => serde_json::from_str(text)?,
                    None => serde_json::Value::Null,
                },
            },
            (None, None) => return Err(Error::Format("need --forbidden or --plugin".into())),
        };
        Workspace::open(&self.signature, &source)
    }
}

#[derive(Debug, Args)]
struct DecideArgs {
    #[command(flatten)]
    class: ClassArgs,
    #[arg(long, value_name = "TEXT", required_unless_present = "sentence_file", conflicts_with = "sentence_file")]
    sentence: Option<String>,
    #[arg(long, value_name = "FILE")]
    sentence_file: Option<PathBuf>,
    /// Print the full run report as JSON.
    #[arg(long)]
    json: bool,
    /// Show how each diagram was settled.
    #[arg(long)]
    trace: bool,
    /// Also decide by brute force and fail on disagreement.
    #[arg(long)]
    oracle_check: bool,
    /// Largest number of quantified variables accepted.
    #[arg(long, env = "HFC_MAX_VARS", default_value_t = DEFAULT_MAX_VARS)]
    max_vars: usize,
}

#[derive(Debug, Args)]
struct AxiomsArgs {
    #[arg(long, value_name = "FILE")]
    signature: PathBuf,
    /// A universal sentence; may be repeated.
    #[arg(long = "axiom", value_name = "TEXT")]
    axioms: Vec<String>,
    /// File with one sentence per line; `#` starts a comment line.
    #[arg(long, value_name = "FILE")]
    axioms_file: Option<PathBuf>,
    /// Drop members containing another member.
    #[arg(long)]
    minimize: bool,
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
    #[arg(long, env = "HFC_MAX_VARS", default_value_t = DEFAULT_MAX_VARS)]
    max_vars: usize,
}

#[derive(Debug, Args)]
struct ListArgs {
    #[arg(long, value_name = "FILE")]
    signature: PathBuf,
    #[arg(long, value_name = "FILE")]
    forbidden: PathBuf,
}

#[derive(Debug, Args)]
struct MinimizeArgs {
    #[command(flatten)]
    list: ListArgs,
    #[arg(long, value_name = "FILE", conflicts_with = "in_place")]
    output: Option<PathBuf>,
    /// Rewrite the forbidden-set file.
    #[arg(long)]
    in_place: bool,
}

#[derive(Debug, Args)]
struct CheckMemberArgs {
    #[command(flatten)]
    class: ClassArgs,
    #[arg(long, value_name = "FILE")]
    structure: PathBuf,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[command(flatten)]
    class: ClassArgs,
    #[arg(long)]
    size: usize,
    /// One representative per isomorphism type.
    #[arg(long)]
    up_to_iso: bool,
    /// Largest size accepted.
    #[arg(long, default_value_t = DEFAULT_MAX_ENUMERATE)]
    max_size: usize,
    /// Print the members as a structure list document.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 200)]
    instances: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

/// Runs the command line and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                EXIT_INPUT
            } else {
                let _ = write!(out, "{e}");
                EXIT_OK
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Decide(a) => cmd_decide(&a, out, err),
        Command::AxiomsToForbidden(a) => cmd_axioms_to_forbidden(&a, out),
        Command::ForbiddenToAxioms(a) => cmd_forbidden_to_axioms(&a, out),
        Command::Minimize(a) => cmd_minimize(&a, out),
        Command::CheckMember(a) => cmd_check_member(&a, out),
        Command::Enumerate(a) => cmd_enumerate(&a, out),
        Command::Selftest(a) => cmd_selftest(&a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_limit() {
                EXIT_LIMIT
            } else {
                EXIT_INPUT
            }
        }
    }
}

fn check_vars(phi: &UniversalSentence, max_vars: usize) -> Result<()> {
    if phi.arity() > max_vars {
        return Err(Error::BoundExceeded {
            what: "quantified variables",
            value: phi.arity(),
            bound: max_vars,
        });
    }
    Ok(())
}

#[derive(Serialize)]
struct Inputs {
    signature: String,
    forbidden: String,
    provenance: Vec<String>,
    sentence: String,
    variables: usize,
    max_vars: usize,
}

#[derive(Serialize)]
struct TraceReport {
    diagram: String,
    structure: String,
    outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    forbidden: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    correspondence: Option<String>,
}

#[derive(Serialize)]
struct VerdictReport {
    answer: Answer,
    witness: Option<serde_json::Value>,
    trace: Vec<TraceReport>,
}

#[derive(Serialize)]
struct OracleCheck {
    answer: Answer,
    agrees: bool,
}

#[derive(Serialize)]
struct Timings {
    parse_us: u128,
    decide_us: u128,
    oracle_check_us: Option<u128>,
}

/// Everything `decide --json` prints. Only `timings` varies between
/// identical runs.
#[derive(Serialize)]
struct RunReport {
    inputs: Inputs,
    verdict: VerdictReport,
    counts: StepCounts,
    oracle_check: Option<OracleCheck>,
    timings: Timings,
}

fn trace_report(entry: &TraceEntry) -> TraceReport {
    match &entry.outcome {
        Membership::InClass => TraceReport {
            diagram: entry.diagram.to_string(),
            structure: entry.structure.to_string(),
            outcome: "in-class",
            forbidden: None,
            correspondence: None,
        },
        Membership::Violates {
            forbidden,
            embedding,
        } => TraceReport {
            diagram: entry.diagram.to_string(),
            structure: entry.structure.to_string(),
            outcome: "excluded",
            forbidden: Some(forbidden.to_string()),
            correspondence: Some(embedding.describe(forbidden, &entry.structure)),
        },
    }
}

fn write_trace(out: &mut dyn Write, verdict: &Verdict) -> Result<()> {
    let c = &verdict.counts;
    writeln!(
        out,
        "# conjuncts: negation {}, equality split {}, equality elimination {}, diagrams {}",
        c.negation, c.equality_split, c.equality_elimination, c.diagrams
    )?;
    if c.diagrams == 0 {
        writeln!(out, "# no diagrams: the sentence holds in every structure")?;
    }
    for (i, entry) in verdict.trace.iter().enumerate() {
        writeln!(out, "# diagram {}: {}", i + 1, entry.diagram)?;
        let t = trace_report(entry);
        match (t.forbidden, t.correspondence) {
            (Some(h), Some(map)) => writeln!(out, "#   excluded: {h} embeds via {map}")?,
            _ => writeln!(out, "#   in class: witness {}", t.structure)?,
        }
    }
    Ok(())
}

fn micros(d: Duration) -> u128 {
    d.as_micros()
}

fn cmd_decide(a: &DecideArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let started = Instant::now();
    let ws = a.class.open()?;
    let text = match (&a.sentence, &a.sentence_file) {
        (Some(text), _) => text.clone(),
        (None, Some(path)) => read_file(path)?,
        (None, None) => return Err(Error::Format("need --sentence or --sentence-file".into())),
    };
    let phi = parse_universal(text.trim(), &ws.signature)?;
    check_vars(&phi, a.max_vars)?;
    let parse_time = started.elapsed();

    let started = Instant::now();
    let verdict = decide_universal_with(
        &phi,
        &ws.signature,
        ws.forbidden.as_ref(),
        &DecideOptions { keep_trace: true },
    )?;
    let decide_time = started.elapsed();

    let mut check = None;
    let mut check_time = None;
    if a.oracle_check {
        let started = Instant::now();
        let brute = decide_universal_bruteforce(
            &phi,
            &ws.signature,
            ws.forbidden.as_ref(),
            DEFAULT_BRUTEFORCE_BOUND,
        )?;
        check_time = Some(micros(started.elapsed()));
        check = Some(OracleCheck {
            answer: brute.answer,
            agrees: brute.answer == verdict.answer,
        });
    }

    if a.json {
        let report = RunReport {
            inputs: Inputs {
                signature: a.class.signature.display().to_string(),
                forbidden: ws.forbidden.describe(),
                provenance: ws.provenance.clone(),
                sentence: phi.to_string(),
                variables: phi.arity(),
                max_vars: a.max_vars,
            },
            verdict: VerdictReport {
                answer: verdict.answer,
                witness: verdict.witness.as_ref().map(structure_value),
                trace: verdict.trace.iter().map(trace_report).collect(),
            },
            counts: verdict.counts,
            oracle_check: check.as_ref().map(|c| OracleCheck {
                answer: c.answer,
                agrees: c.agrees,
            }),
            timings: Timings {
                parse_us: micros(parse_time),
                decide_us: micros(decide_time),
                oracle_check_us: check_time,
            },
        };
        writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    } else {
        writeln!(out, "{}", verdict.answer)?;
        if let Some(w) = &verdict.witness {
            write!(out, "{}", save_structure(w))?;
        }
        if a.trace {
            write_trace(out, &verdict)?;
        }
    }

    if let Some(c) = check {
        if !c.agrees {
            writeln!(
                err,
                "oracle check FAILED: decision procedure answered {} but brute force answered {}",
                verdict.answer, c.answer
            )?;
            return Ok(EXIT_DISAGREEMENT);
        }
    }
    Ok(EXIT_OK)
}

fn read_axioms(a: &AxiomsArgs, sig: &Signature) -> Result<Vec<UniversalSentence>> {
    let mut texts = a.axioms.clone();
    if let Some(path) = &a.axioms_file {
        texts.extend(
            read_file(path)?
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(String::from),
        );
    }
    texts
        .iter()
        .map(|t| {
            let phi = parse_universal(t, sig)?;
            check_vars(&phi, a.max_vars)?;
            Ok(phi)
        })
        .collect()
}

fn emit(out: &mut dyn Write, output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => Ok(write!(out, "{text}")?),
    }
}

fn open_signature(path: &Path) -> Result<Arc<Signature>> {
    Ok(Arc::new(load_signature(&read_file(path)?)?))
}

fn open_list(a: &ListArgs) -> Result<(Arc<Signature>, Vec<Structure>)> {
    let sig = open_signature(&a.signature)?;
    match load_forbidden(&read_file(&a.forbidden)?, &sig)? {
        ForbiddenSpec::List(list) => Ok((sig, list)),
        ForbiddenSpec::Plugin { name, .. } => Err(Error::Format(format!(
            "{} names the plugin `{name}`; an explicit structure list is needed here",
            a.forbidden.display()
        ))),
    }
}

fn cmd_axioms_to_forbidden(a: &AxiomsArgs, out: &mut dyn Write) -> Result<i32> {
    let sig = open_signature(&a.signature)?;
    let axioms = read_axioms(a, &sig)?;
    let hs = axioms_to_forbidden(&axioms, &sig, a.minimize)?;
    emit(out, a.output.as_deref(), &save_forbidden(&hs))?;
    Ok(EXIT_OK)
}

fn cmd_forbidden_to_axioms(a: &ListArgs, out: &mut dyn Write) -> Result<i32> {
    let (sig, list) = open_list(a)?;
    for s in &list {
        writeln!(out, "{}", structure_to_axiom(s, &sig)?)?;
    }
    Ok(EXIT_OK)
}

fn cmd_minimize(a: &MinimizeArgs, out: &mut dyn Write) -> Result<i32> {
    let (_, list) = open_list(&a.list)?;
    let text = save_forbidden(&minimize(&list)?);
    let target = if a.in_place {
        Some(a.list.forbidden.as_path())
    } else {
        a.output.as_deref()
    };
    emit(out, target, &text)?;
    Ok(EXIT_OK)
}

fn cmd_check_member(a: &CheckMemberArgs, out: &mut dyn Write) -> Result<i32> {
    let ws = a.class.open()?;
    let s = load_structure(&read_file(&a.structure)?, &ws.signature)?;
    match member(&s, ws.forbidden.as_ref())? {
        Membership::InClass => writeln!(out, "in-K")?,
        Membership::Violates {
            forbidden,
            embedding,
        } => {
            writeln!(out, "not-in-K")?;
            writeln!(out, "forbidden: {forbidden}")?;
            writeln!(out, "embedding: {}", embedding.describe(&forbidden, &s))?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_enumerate(a: &EnumerateArgs, out: &mut dyn Write) -> Result<i32> {
    if a.size > a.max_size {
        return Err(Error::BoundExceeded {
            what: "enumeration size",
            value: a.size,
            bound: a.max_size,
        });
    }
    let ws = a.class.open()?;
    let forbidden = ws.forbidden.enumerate_upto(a.size)?;
    let unit = if a.up_to_iso {
        "isomorphism types"
    } else {
        "labeled structures"
    };
    let mut members = Vec::new();
    let mut lines = Vec::new();
    for size in 1..=a.size {
        let mut total = 0;
        let mut kept = Vec::new();
        for s in enumerate_structures(&ws.signature, size, a.up_to_iso)? {
            total += 1;
            if crate::classes::member_among(&s, &forbidden)?.is_member() {
                kept.push(s);
            }
        }
        lines.push(format!("# size {size}: {} of {total} {unit} in K", kept.len()));
        lines.extend(kept.iter().map(ToString::to_string));
        members.extend(kept);
    }
    if a.json {
        write!(out, "{}", save_forbidden(&members))?;
    } else {
        for l in lines {
            writeln!(out, "{l}")?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_selftest(a: &SelftestArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let mut rng = StdRng::seed_from_u64(a.seed);
    let cfg = SampleConfig::default();
    let (mut yes, mut no, mut bad) = (0, 0, 0);
    for i in 0..a.instances {
        let inst = random_instance(&mut rng, &cfg);
        let oracle = ExplicitOracle::new(inst.signature.clone(), inst.forbidden.clone())?;
        let fast = decide_universal_with(
            &inst.sentence,
            &inst.signature,
            &oracle,
            &DecideOptions { keep_trace: false },
        )?;
        let slow = decide_universal_bruteforce(&inst.sentence, &inst.signature, &oracle, cfg.max_vars)?;
        let witness_ok = match &fast.witness {
            Some(w) => member(w, &oracle)?.is_member() && !inst.sentence.holds_in(w)?,
            None => true,
        };
        match fast.answer {
            Answer::Yes => yes += 1,
            Answer::No => no += 1,
        }
        if fast.answer != slow.answer || !witness_ok {
            bad += 1;
            writeln!(
                err,
                "instance {i}: {} (decide {}, brute force {}, witness valid {witness_ok})",
                inst.sentence, fast.answer, slow.answer
            )?;
        }
    }
    writeln!(
        out,
        "selftest: {} instances, {bad} disagreements ({yes} YES, {no} NO)",
        a.instances
    )?;
    Ok(if bad == 0 { EXIT_OK } else { EXIT_DISAGREEMENT })
}
