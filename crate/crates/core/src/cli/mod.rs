//! The `tate` command line.
//!
//! Every subcommand prints one JSON document. Exit codes: 0 on success, 1 on
//! invalid input or usage errors, 2 when precision is still insufficient after
//! the allowed retries. `TATE_MAX_PREC` caps the precision reached by retrying.

pub mod grcheck;

use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::adeles::{adele_tate_structure, adelic_cohomology, ses_adeles_check, AdeleError};
use crate::diagram::hom::{hom_ind, reconstruct, straighten};
use crate::diagram::{realize_colim, realize_lim, Diagram, DiagramJson, Variance};
use crate::kernel::{Field, Poly};
use crate::lattice::{index_bundle, Lattice, LatticeError};
use crate::linalg::LaurentMatrixJson;
use crate::places::{residue_sum, Place, RatFunc};
use crate::tate2::{quotient2_descriptor, Staircase2, Staircase2Json};

pub use grcheck::{gr_check, GrCheckConfig, GrReport};

const DEFAULT_MAX_PREC: i64 = 64;

#[derive(Parser, Debug)]
#[command(name = "tate", version, about = "Exact computations with lattices, Ind/Pro diagrams and adeles")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Table,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Field size (a prime power); 0 selects the rationals where supported.
    #[arg(long, global = true, default_value_t = 2)]
    pub q: u64,
    /// Working precision for series given without an explicit `prec`.
    #[arg(long, global = true, default_value_t = 16, value_parser = clap::value_parser!(i64).range(2..))]
    pub prec: i64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Precision doublings attempted before giving up.
    #[arg(long, global = true, default_value_t = 3)]
    pub retries: u32,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
    /// Same as `--output json`.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lattices in k((t))^n.
    Lattice {
        #[command(subcommand)]
        op: LatticeOp,
    },
    /// Monomial lattices in k((t1))((t2)).
    Lattice2 {
        #[command(subcommand)]
        op: Lattice2Op,
    },
    /// Ind/Pro diagrams of finite-dimensional vector spaces.
    Diagram {
        #[command(subcommand)]
        op: DiagramOp,
    },
    /// Residues of f dg at every place up to the largest pole degree.
    ResidueSum(ResidueArgs),
    /// Truncated adeles of the projective line.
    Adele {
        #[command(subcommand)]
        op: AdeleOp,
    },
    /// Randomized checks of meet, join and index on seeded lattices.
    GrCheck(GrArgs),
}

#[derive(Args, Debug)]
struct Inputs {
    /// JSON files (or inline JSON documents).
    #[arg(long = "in", num_args = 1.., required = true)]
    inputs: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum LatticeOp {
    Join(Inputs),
    Meet(Inputs),
    Index(Inputs),
    Leq(Inputs),
}

#[derive(Subcommand, Debug)]
enum Lattice2Op {
    Join(Inputs),
    Meet(Inputs),
    /// Layers of `second / first`.
    Quotient(Inputs),
}

#[derive(Subcommand, Debug)]
enum DiagramOp {
    Check(Inputs),
    /// Hom between two Ind diagrams.
    Hom(Inputs),
    /// Straighten hom elements (all basis elements unless `--coords` is given).
    Straighten {
        #[command(flatten)]
        inputs: Inputs,
        /// Comma-separated coordinates in the hom basis.
        #[arg(long)]
        coords: Option<String>,
    },
    /// Colimit (Ind) or limit (Pro).
    Colim(Inputs),
}

#[derive(Args, Debug)]
struct ResidueArgs {
    #[arg(long)]
    num: String,
    #[arg(long, default_value = "1")]
    den: String,
    #[arg(long)]
    g: String,
    #[arg(long, default_value = "1")]
    g_den: String,
}

#[derive(Args, Debug)]
struct AdeleParams {
    #[arg(long, allow_negative_numbers = true, default_value_t = 0)]
    d: i64,
    #[arg(long = "D", default_value_t = 1)]
    max_degree: usize,
    /// Window size; defaults to |d| + 2.
    #[arg(long = "N")]
    window: Option<usize>,
}

impl AdeleParams {
    fn window(&self) -> usize {
        self.window.unwrap_or(self.d.unsigned_abs() as usize + 2)
    }
}

#[derive(Subcommand, Debug)]
enum AdeleOp {
    Cohomology(AdeleParams),
    Structure {
        #[command(flatten)]
        params: AdeleParams,
        #[arg(long, default_value_t = 1)]
        rank: usize,
    },
    SesCheck {
        #[command(flatten)]
        params: AdeleParams,
        /// A rational point: a monic linear polynomial or `inf`.
        #[arg(long, default_value = "x")]
        p: String,
    },
}

#[derive(Args, Debug)]
struct GrArgs {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..=4))]
    n: u64,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(0..=10_000))]
    trials: u64,
    #[arg(long, default_value_t = 5)]
    candidates: usize,
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Precision(String),
}

impl CliError {
    fn input(e: impl std::fmt::Display) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        if e.is_precision() { CliError::Precision(e.to_string()) } else { CliError::Input(e.to_string()) }
    }
}

impl From<AdeleError> for CliError {
    fn from(e: AdeleError) -> Self {
        match e {
            AdeleError::Unstable { .. } => CliError::Precision(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

type CliResult = Result<Value, CliError>;

/// Runs the command line `argv` (including the program name).
pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: 1, stdout: String::new(), stderr: text },
            };
        }
    };
    match run(&cli) {
        Ok(v) => {
            let format = if cli.config.json { OutputFormat::Json } else { cli.config.output };
            Outcome { code: 0, stdout: render(&v, format), stderr: String::new() }
        }
        Err(CliError::Input(m)) => Outcome { code: 1, stdout: String::new(), stderr: format!("error: {m}\n") },
        Err(CliError::Precision(m)) => {
            Outcome { code: 2, stdout: String::new(), stderr: format!("precision failure: {m}\n") }
        }
    }
}

fn render(v: &Value, format: OutputFormat) -> String {
    match (format, v) {
        (OutputFormat::Table, Value::Object(m)) => {
            let mut s = String::new();
            for (k, x) in m {
                let cell = match x {
                    Value::String(t) => t.clone(),
                    other => other.to_string(),
                };
                s.push_str(&format!("{k}\t{cell}\n"));
            }
            s
        }
        _ => format!("{v}\n"),
    }
}

fn field(cfg: &RunConfig, allow_rationals: bool) -> Result<Field, CliError> {
    if cfg.q == 0 {
        return if allow_rationals {
            Ok(Field::rationals())
        } else {
            Err(CliError::Input("this command needs a finite field".into()))
        };
    }
    Field::gf(cfg.q).map_err(CliError::input)
}

fn read_json<T: serde::de::DeserializeOwned>(arg: &str) -> Result<T, CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|e| CliError::Input(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{arg}: {e}")))
}

fn exactly_two(inputs: &Inputs) -> Result<(&str, &str), CliError> {
    match inputs.inputs.as_slice() {
        [a, b] => Ok((a, b)),
        other => Err(CliError::Input(format!("expected two inputs, got {}", other.len()))),
    }
}

fn max_prec() -> i64 {
    std::env::var("TATE_MAX_PREC").ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_MAX_PREC)
}

/// Runs `attempt` at the configured precision, doubling it after precision failures.
fn with_retries(cfg: &RunConfig, mut attempt: impl FnMut(i64) -> CliResult) -> CliResult {
    let cap = max_prec();
    let mut prec = cfg.prec.min(cap.max(2));
    let mut left = cfg.retries;
    loop {
        match attempt(prec) {
            Err(CliError::Precision(m)) => {
                if left == 0 || prec * 2 > cap {
                    return Err(CliError::Precision(format!("{m} (last precision {prec})")));
                }
                left -= 1;
                prec *= 2;
            }
            other => return other,
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn run(cli: &Cli) -> CliResult {
    let cfg = &cli.config;
    match &cli.command {
        Command::Lattice { op } => run_lattice(cfg, op),
        Command::Lattice2 { op } => run_lattice2(op),
        Command::Diagram { op } => run_diagram(cfg, op),
        Command::ResidueSum(a) => run_residue(cfg, a),
        Command::Adele { op } => run_adele(cfg, op),
        Command::GrCheck(a) => {
            let f = field(cfg, false)?;
            let c = GrCheckConfig { n: a.n as usize, trials: a.trials as usize, seed: cfg.seed, candidates: a.candidates };
            Ok(to_value(&gr_check(&f, &c)))
        }
    }
}

fn run_lattice(cfg: &RunConfig, op: &LatticeOp) -> CliResult {
    let f = field(cfg, true)?;
    let inputs = match op {
        LatticeOp::Join(i) | LatticeOp::Meet(i) | LatticeOp::Index(i) | LatticeOp::Leq(i) => i,
    };
    let docs: Vec<LaurentMatrixJson> = inputs.inputs.iter().map(|a| read_json(a)).collect::<Result<_, _>>()?;
    with_retries(cfg, |prec| {
        let lats = docs
            .iter()
            .map(|d| {
                let m = d.decode(&f, prec).map_err(|e| CliError::from(LatticeError::from(e)))?;
                Ok(Lattice::from_matrix(&m)?)
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        match op {
            LatticeOp::Join(_) | LatticeOp::Meet(_) => {
                let mut acc = lats[0].clone();
                for l in &lats[1..] {
                    acc = if matches!(op, LatticeOp::Join(_)) { acc.join(l)? } else { acc.meet(l)? };
                }
                Ok(to_value(&acc.to_json()))
            }
            LatticeOp::Index(i) => {
                exactly_two(i)?;
                Ok(to_value(&index_bundle(&lats[0], &lats[1])?))
            }
            LatticeOp::Leq(i) => {
                exactly_two(i)?;
                Ok(json!({"leq": lats[0].leq(&lats[1])?}))
            }
        }
    })
}

fn run_lattice2(op: &Lattice2Op) -> CliResult {
    let (Lattice2Op::Join(i) | Lattice2Op::Meet(i) | Lattice2Op::Quotient(i)) = op;
    let (a, b) = exactly_two(i)?;
    let decode = |s: &str| -> Result<Staircase2, CliError> {
        read_json::<Staircase2Json>(s)?.decode().map_err(CliError::input)
    };
    let (a, b) = (decode(a)?, decode(b)?);
    match op {
        Lattice2Op::Join(_) => Ok(to_value(&a.join(&b).to_json())),
        Lattice2Op::Meet(_) => Ok(to_value(&a.meet(&b).to_json())),
        Lattice2Op::Quotient(_) => {
            let layers = quotient2_descriptor(&a, &b).map_err(CliError::input)?;
            let list: Vec<Value> = layers
                .iter()
                .map(|(j, d)| json!({"j": j, "kind": d.kind(), "finite_dim": d.finite_dim, "pro": d.pro, "ind": d.ind}))
                .collect();
            Ok(json!({"layers": list}))
        }
    }
}

fn run_diagram(cfg: &RunConfig, op: &DiagramOp) -> CliResult {
    let f = field(cfg, true)?;
    let load = |s: &str| -> Result<Diagram, CliError> { read_json::<DiagramJson>(s)?.decode(&f).map_err(CliError::input) };
    match op {
        DiagramOp::Check(i) => {
            let d = load(single(i)?)?;
            Ok(to_value(&d.check_admissible()))
        }
        DiagramOp::Colim(i) => {
            let d = load(single(i)?)?;
            let names = d.poset().names().to_vec();
            let (dim, maps, key) = match d.variance() {
                Variance::Ind => {
                    let c = realize_colim(&d).map_err(CliError::input)?;
                    (c.object.dim, c.cocone, "cocone")
                }
                Variance::Pro => {
                    let l = realize_lim(&d).map_err(CliError::input)?;
                    (l.object.dim, l.cone, "cone")
                }
            };
            let maps: Map<String, Value> = names.into_iter().zip(maps).map(|(n, m)| (n, to_value(&m.to_json()))).collect();
            let mut out = Map::new();
            out.insert("dim".into(), json!(dim));
            out.insert(key.into(), Value::Object(maps));
            Ok(Value::Object(out))
        }
        DiagramOp::Hom(i) => {
            let (a, b) = exactly_two(i)?;
            let space = hom_ind(&load(a)?, &load(b)?).map_err(CliError::input)?;
            let basis: Vec<Value> = space.basis_elements().iter().map(|h| to_value(&space.element_json(h))).collect();
            Ok(json!({"dim": space.dim(), "basis": basis}))
        }
        DiagramOp::Straighten { inputs, coords } => {
            let (a, b) = exactly_two(inputs)?;
            let space = hom_ind(&load(a)?, &load(b)?).map_err(CliError::input)?;
            let elements = match coords {
                Some(c) => {
                    let cs = c
                        .split(',')
                        .filter(|s| !s.trim().is_empty())
                        .map(|s| f.parse(s.trim()))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(CliError::input)?;
                    vec![space.element(&cs).map_err(CliError::input)?]
                }
                None => space.basis_elements(),
            };
            let mut out = Vec::new();
            for h in &elements {
                let s = straighten(&space, h).map_err(CliError::input)?;
                let back = reconstruct(&space, &s).map_err(CliError::input)?;
                out.push(json!({
                    "element": to_value(&space.element_json(h)),
                    "straightening": to_value(&s.to_json(&space)),
                    "round_trip": back == *h,
                }));
            }
            Ok(json!({"dim": space.dim(), "elements": out}))
        }
    }
}

fn single(i: &Inputs) -> Result<&str, CliError> {
    match i.inputs.as_slice() {
        [a] => Ok(a),
        other => Err(CliError::Input(format!("expected one input, got {}", other.len()))),
    }
}

fn run_residue(cfg: &RunConfig, a: &ResidueArgs) -> CliResult {
    let f = field(cfg, false)?;
    let poly = |s: &str| Poly::parse(&f, s).map_err(CliError::input);
    let rf = |n: &str, d: &str| RatFunc::new(poly(n)?, poly(d)?).map_err(CliError::input);
    let (fx, gx) = (rf(&a.num, &a.den)?, rf(&a.g, &a.g_den)?);
    Ok(residue_sum(&fx, &gx).map_err(CliError::input)?.to_json(&f))
}

fn parse_place(f: &Field, s: &str) -> Result<Place, CliError> {
    if s.trim() == "inf" {
        return Ok(Place::Infinity);
    }
    Place::finite(Poly::parse(f, s).map_err(CliError::input)?).map_err(CliError::input)
}

fn run_adele(cfg: &RunConfig, op: &AdeleOp) -> CliResult {
    let f = field(cfg, false)?;
    match op {
        AdeleOp::Cohomology(p) => Ok(to_value(&adelic_cohomology(&f, p.d, p.max_degree, p.window())?)),
        AdeleOp::Structure { params: p, rank } => {
            Ok(to_value(&adele_tate_structure(&f, p.d, *rank, p.max_degree, p.window())?))
        }
        AdeleOp::SesCheck { params: p, p: point } => {
            let place = parse_place(&f, point)?;
            Ok(to_value(&ses_adeles_check(&f, p.d, &place, p.max_degree, p.window())?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &str) -> Outcome {
        dispatch(std::iter::once("tate").chain(args.split_whitespace()))
    }

    #[test]
    fn residue_sum_example() {
        let o = dispatch(["tate", "residue-sum", "--q", "2", "--num", "1", "--den", "x^2+x", "--g", "x"]);
        assert_eq!(o.code, 0, "{o:?}");
        assert_eq!(o.stdout.trim(), r#"{"sum":0,"per_place":{"x":1,"x+1":1,"inf":0}}"#);
    }

    #[test]
    fn adele_cohomology_example() {
        let o = run("adele cohomology --q 2 --d 3 --D 2 --N 8 --json");
        assert_eq!(o.stdout.trim(), r#"{"h0":4,"h1":0,"stable":true}"#);
        let o = run("adele cohomology --q 3 --d -2");
        assert_eq!(o.stdout.trim(), r#"{"h0":0,"h1":1,"stable":true}"#);
    }

    #[test]
    fn lattice_index_inline() {
        let a = r#"{"rows":1,"cols":1,"entries":[[{"v":0,"coeffs":[1]}]]}"#;
        let b = r#"{"rows":1,"cols":1,"entries":[[{"v":2,"coeffs":[1]}]]}"#;
        let o = dispatch(["tate", "lattice", "index", "--in", a, b, "--q", "2", "--prec", "16"]);
        assert_eq!(o.stdout.trim(), r#"{"pos":2,"neg":0,"net":2}"#);
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run("lattice frobnicate").code, 1);
        assert_eq!(run("adele cohomology --bogus").code, 1);
        assert_eq!(run("adele cohomology --d 5 --N 3").code, 1);
        assert_eq!(run("--help").code, 0);
    }

    #[test]
    fn table_output() {
        let o = run("adele cohomology --d 1 --output table");
        assert_eq!(o.stdout, "h0\t2\nh1\t0\nstable\ttrue\n");
    }
}
