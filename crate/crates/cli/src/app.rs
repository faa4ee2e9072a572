//! Argument definitions and dispatch from a parsed command line to a Verdict.

use std::io::Read;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::commands as cmd;
use crate::corpus::{self, CorpusError};
use crate::suites;
use crate::verdict::{digest, settle, CmdResult, InvalidInput, Outcome, Verdict};

#[derive(Parser, Debug)]
#[command(name = "ordkit", version, about = "Exact algebra checks over finite local rings, with JSON verdicts")]
pub struct Cli {
    /// Seed for all randomness (ORDKIT_SEED overrides it).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Record wall-clock seconds in the verdict.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// JSON input file; stdin when absent or "-".
    pub input: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub q: i64,
    /// Coefficients of a monic irreducible modulus, constant term first, for
    /// an extension field.
    #[arg(long, value_delimiter = ',')]
    pub modulus: Vec<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a coefficient ring; optionally multiply elements or Hensel-split a polynomial.
    Ring(Input),
    /// Finite free complexes: homology, minimal models, truncation, Tor checks.
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// Ordinary parts of modules and complexes under a Hecke-type operator.
    #[command(subcommand)]
    Ordinary(OrdinaryCmd),
    /// Glue a tower of complexes into a limit complex.
    #[command(subcommand)]
    Tower(TowerCmd),
    /// Patch a system of complexes up to a horizon.
    #[command(subcommand)]
    Patch(PatchCmd),
    /// Affine Hecke algebra arithmetic and module checks.
    #[command(subcommand)]
    Hecke(HeckeCmd),
    /// Finite matrix groups: enumeration, simple submodules, enormous image.
    #[command(subcommand)]
    Image(ImageCmd),
    /// Dimension bookkeeping for symmetric spaces and Selmer groups.
    #[command(subcommand)]
    Dims(DimsCmd),
    /// Write seeded, validated example inputs.
    #[command(subcommand)]
    Corpus(CorpusCmd),
    /// Run an acceptance suite by name or number.
    Suite { name: String },
}

#[derive(Subcommand, Debug)]
pub enum ComplexCmd {
    /// Invariant factors of each cohomology group.
    Homology(Input),
    /// Minimal complex with the homotopy equivalence.
    Minimalize(Input),
    /// Truncate a complex at a degree.
    Truncate {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        n: Option<i64>,
        /// "le" or "gt"
        #[arg(long)]
        side: Option<String>,
    },
    /// Check the Tor criterion for concentration in one degree.
    TorCheck(Input),
    /// Homotopy classes of chain maps between two complexes.
    HomClasses(Input),
}

#[derive(Subcommand, Debug)]
pub enum OrdinaryCmd {
    /// Ordinary idempotent of an operator on a module.
    Module(Input),
    /// Ordinary part of a complex, as a direct summand.
    Complex(Input),
    /// Ordinary part computed on a minimal model.
    Derived(Input),
    /// Split the ordinary part along maximal ideals of the operator algebra.
    Localize(Input),
}

#[derive(Subcommand, Debug)]
pub enum TowerCmd {
    /// Limit complex of the tower.
    Glue(Input),
    /// Minimal limit complex, unique up to homotopy.
    GlueMin(Input),
    /// Limit of the ordinary parts.
    GlueOrd(Input),
    /// Compare limit homology with each level.
    Control(Input),
}

#[derive(Subcommand, Debug)]
pub enum PatchCmd {
    /// Run patching to the given horizon.
    Run {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        horizon: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum HeckeCmd {
    /// Multiply two elements in the Bernstein basis.
    Mul(Input),
    /// Check the group algebra isomorphism at q = 1.
    CheckIso(FieldArgs),
    /// Check that an elementary symmetric element is central.
    Center {
        /// index of the elementary symmetric function, 1..=n
        #[arg(long)]
        i: usize,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Support of a module over the centre.
    Support(Input),
}

#[derive(Subcommand, Debug)]
pub enum ImageCmd {
    /// Enumerate a group from matrix generators.
    Enumerate(Input),
    /// Induced representation from a metacyclic spec.
    Induce(Input),
    /// Simple submodules of a module.
    Simples(Input),
    /// Check the enormous image conditions.
    Enormous(Input),
    /// Search for an auxiliary prime witness for a cocycle.
    Tw(Input),
}

#[derive(Subcommand, Debug)]
pub enum DimsCmd {
    /// Dimension, rank defect and q0 of the symmetric space.
    Space(Input),
    /// Euler characteristic, raw and with local terms substituted.
    Euler(Input),
    /// Selmer group dimension.
    Selmer(Input),
    /// Generator count and dimension ledger of a patched presentation.
    Presentation(Input),
}

#[derive(Subcommand, Debug)]
pub enum CorpusCmd {
    /// Generate a corpus directory with a manifest.
    Generate {
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

/// What the binary prints and its exit code.
#[derive(Clone, Debug, PartialEq)]
pub struct Run {
    pub json: Value,
    pub code: i32,
}

impl Run {
    fn invalid(command: &str, e: InvalidInput) -> Run {
        Run { json: e.to_json(command), code: 2 }
    }

    pub fn stdout(&self) -> String {
        serde_json::to_string(&self.json).expect("values serialize") + "\n"
    }
}

fn read_input(input: &Input) -> Result<Value, InvalidInput> {
    let (text, source) = match &input.input {
        Some(p) if p.as_os_str() != "-" => {
            (std::fs::read_to_string(p).map_err(|e| InvalidInput::new(p.display().to_string(), e.to_string()))?, p.display().to_string())
        }
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| InvalidInput::new("stdin", e.to_string()))?;
            (s, "stdin".to_string())
        }
    };
    serde_json::from_str(&text)
        .map_err(|e| InvalidInput::new(format!("{source}: line {} column {}", e.line(), e.column()), e.to_string()))
}

type Handler = fn(&Value) -> CmdResult;

enum Job<'a> {
    /// JSON input, with flags that override keys of the input object
    Json(&'a Input, Vec<(&'static str, Option<Value>)>, Handler),
    /// input given entirely by flags
    Flags(Value, Box<dyn Fn() -> CmdResult + 'a>),
    Suite(&'a str),
    Corpus(&'a str, usize, &'a PathBuf),
}

fn plan(c: &Command) -> (String, Job<'_>) {
    use Command as C;
    let json = |name: &str, i, f: Handler| (name.to_string(), Job::Json(i, Vec::new(), f));
    match c {
        C::Ring(i) => json("ring", i, cmd::ring),
        C::Complex(x) => match x {
            ComplexCmd::Homology(i) => json("complex homology", i, cmd::complex_homology),
            ComplexCmd::Minimalize(i) => json("complex minimalize", i, cmd::complex_minimalize),
            ComplexCmd::Truncate { input, n, side } => (
                "complex truncate".into(),
                Job::Json(input, vec![("n", n.map(|n| json!(n))), ("side", side.as_ref().map(|s| json!(s)))], cmd::complex_truncate),
            ),
            ComplexCmd::TorCheck(i) => json("complex tor-check", i, cmd::complex_tor_check),
            ComplexCmd::HomClasses(i) => json("complex hom-classes", i, cmd::complex_hom_classes),
        },
        C::Ordinary(x) => match x {
            OrdinaryCmd::Module(i) => json("ordinary module", i, cmd::ordinary_module),
            OrdinaryCmd::Complex(i) => json("ordinary complex", i, cmd::ordinary_complex),
            OrdinaryCmd::Derived(i) => json("ordinary derived", i, cmd::ordinary_derived),
            OrdinaryCmd::Localize(i) => json("ordinary localize", i, cmd::ordinary_localize),
        },
        C::Tower(x) => match x {
            TowerCmd::Glue(i) => json("tower glue", i, |v| cmd::tower_glue(v, "glue")),
            TowerCmd::GlueMin(i) => json("tower glue-min", i, |v| cmd::tower_glue(v, "glue-min")),
            TowerCmd::GlueOrd(i) => json("tower glue-ord", i, |v| cmd::tower_glue(v, "glue-ord")),
            TowerCmd::Control(i) => json("tower control", i, |v| cmd::tower_glue(v, "control")),
        },
        C::Patch(PatchCmd::Run { input, horizon }) => {
            ("patch run".into(), Job::Json(input, vec![("horizon", horizon.map(|h| json!(h)))], cmd::patch_run))
        }
        C::Hecke(x) => match x {
            HeckeCmd::Mul(i) => json("hecke mul", i, cmd::hecke_mul_cmd),
            HeckeCmd::CheckIso(f) => (
                "hecke check-iso".into(),
                Job::Flags(
                    json!({"n": f.n, "p": f.p, "q": f.q, "modulus": f.modulus}),
                    Box::new(move || cmd::hecke_check_iso(f.n, f.p, f.q, &f.modulus)),
                ),
            ),
            HeckeCmd::Center { i, field: f } => (
                "hecke center".into(),
                Job::Flags(
                    json!({"i": i, "n": f.n, "p": f.p, "q": f.q, "modulus": f.modulus}),
                    Box::new(move || cmd::hecke_center(*i, f.n, f.p, f.q, &f.modulus)),
                ),
            ),
            HeckeCmd::Support(i) => json("hecke support", i, cmd::hecke_support),
        },
        C::Image(x) => match x {
            ImageCmd::Enumerate(i) => json("image enumerate", i, cmd::image_enumerate),
            ImageCmd::Induce(i) => json("image induce", i, cmd::image_induce),
            ImageCmd::Simples(i) => json("image simples", i, cmd::image_simples),
            ImageCmd::Enormous(i) => json("image enormous", i, cmd::image_enormous),
            ImageCmd::Tw(i) => json("image tw", i, cmd::image_tw),
        },
        C::Dims(x) => match x {
            DimsCmd::Space(i) => json("dims space", i, cmd::dims_space),
            DimsCmd::Euler(i) => json("dims euler", i, cmd::dims_euler),
            DimsCmd::Selmer(i) => json("dims selmer", i, cmd::dims_selmer),
            DimsCmd::Presentation(i) => json("dims presentation", i, cmd::dims_presentation),
        },
        C::Corpus(CorpusCmd::Generate { kind, count, out }) => ("corpus generate".into(), Job::Corpus(kind, *count, out)),
        C::Suite { name } => ("suite".into(), Job::Suite(name)),
    }
}

fn verdict(command: &str, input: &Value, seed: u64, timing: Option<f64>, o: Outcome) -> Run {
    let v = Verdict { command: command.into(), input_digest: digest(input), seed, pass: o.pass, witnesses: o.witnesses, timing };
    Run { code: v.exit_code(), json: v.to_json() }
}

/// Run a parsed command line with the effective seed.
pub fn execute(cli: &Cli, seed: u64) -> Run {
    let (name, job) = plan(&cli.command);
    let start = Instant::now();
    let elapsed = |s: Instant| cli.timing.then(|| s.elapsed().as_secs_f64());
    match job {
        Job::Json(input, overrides, f) => {
            let mut v = match read_input(input) {
                Ok(v) => v,
                Err(e) => return Run::invalid(&name, e),
            };
            for (key, val) in overrides {
                if let Some(val) = val {
                    match v.as_object_mut() {
                        Some(obj) => {
                            obj.insert(key.into(), val);
                        }
                        None => return Run::invalid(&name, InvalidInput::new("", "input must be a JSON object")),
                    }
                }
            }
            let start = Instant::now();
            match settle(f(&v)) {
                Ok(o) => verdict(&name, &v, seed, elapsed(start), o),
                Err(e) => Run::invalid(&name, e),
            }
        }
        Job::Flags(input, f) => match settle(f()) {
            Ok(o) => verdict(&name, &input, seed, elapsed(start), o),
            Err(e) => Run::invalid(&name, e),
        },
        Job::Suite(s) => match suites::run(s, seed) {
            Ok(r) => {
                eprintln!("suite {} (criterion {}): {}/{} items pass", r.suite, r.criterion, r.items.iter().filter(|i| i.pass).count(), r.items.len());
                verdict(&format!("suite {}", r.suite), &json!({"suite": r.suite}), seed, elapsed(start), Outcome::new(r.pass(), r.to_json()))
            }
            Err(e) => Run::invalid(&name, e),
        },
        Job::Corpus(kind, count, out) => {
            let input = json!({"kind": kind, "count": count});
            match corpus::generate(kind, count, seed, out) {
                Ok(m) => verdict(&name, &input, seed, elapsed(start), Outcome::new(true, m)),
                Err(CorpusError::Stalled(e)) => {
                    verdict(&name, &input, seed, elapsed(start), Outcome::new(false, json!({"violation": e.to_string()})))
                }
                Err(CorpusError::Invalid(e)) => Run::invalid(&name, e),
            }
        }
    }
}

/// The seed flag, unless ORDKIT_SEED is set.
pub fn effective_seed(flag: u64, env: Option<&str>) -> Result<u64, InvalidInput> {
    match env {
        None => Ok(flag),
        Some(s) => s.trim().parse().map_err(|_| InvalidInput::new("ORDKIT_SEED", format!("not an unsigned integer: {s:?}"))),
    }
}
