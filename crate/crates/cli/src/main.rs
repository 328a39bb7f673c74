use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use ftgate::cleaning::{self, LogicalKind};
use ftgate::geometry::{self, Partition, RandomCellOutcome};
use ftgate::hierarchy::{self, diagonal_level, DEFAULT_LEVEL_CAP};
use ftgate::search::{self, DistanceResult};
use ftgate::syntax;
use ftgate::{io, loss, SubsystemCode};

mod verify;

#[derive(Parser, Debug)]
#[command(name = "ftgate", version, about = "Cleanability, distance, hierarchy-level and loss queries on stabilizer and subsystem codes")]
struct Cli {
    /// Write the machine-readable report (JSON) to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,

    /// Print the report on standard output instead of the summary.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "FTGATE_THREADS", default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Toric,
    ReedMuller,
    BaconShor,
    Haah,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Scheme {
    Tiling,
    Tubes,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Bare,
    Dressed,
}

impl From<KindArg> for LogicalKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Bare => LogicalKind::Bare,
            KindArg::Dressed => LogicalKind::Dressed,
        }
    }
}

#[derive(Args, Debug)]
struct PartitionArgs {
    #[arg(long, value_enum)]
    scheme: Scheme,
    /// Tile side (tiling, tubes).
    #[arg(long)]
    tile: Option<usize>,
    /// Comma-separated fattening widths w_0,...,w_{D-1} (tiling).
    #[arg(long, value_delimiter = ',')]
    widths: Option<Vec<usize>>,
    /// Tube or skeleton width (tubes, random).
    #[arg(long, default_value_t = 1)]
    width: usize,
    /// Tube dimension (tubes).
    #[arg(long, default_value_t = 1)]
    q: usize,
    /// Extrusion axis (tubes).
    #[arg(long, default_value_t = 0)]
    axis: usize,
    /// Loss rate of the random region (random).
    #[arg(long, default_value_t = 0.45)]
    p0: f64,
    /// Ball radius (random).
    #[arg(long, default_value_t = 0)]
    radius: usize,
    /// Cell volume constant c in c ln n (random).
    #[arg(long, default_value_t = 20.0)]
    cell_constant: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a code family member and write it to a file.
    Build {
        #[arg(value_enum)]
        family: Family,
        /// Lattice size L, or m for Reed-Muller.
        param: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Minimum weight of a nontrivial logical operator.
    Distance {
        /// Code file or builtin (steane, toric:L, reed-muller:m, bacon-shor:L, haah:L).
        code: String,
        #[arg(long, default_value_t = search::DEFAULT_W_MAX)]
        wmax: usize,
        #[arg(long, value_enum, default_value = "dressed")]
        kind: KindArg,
    },
    /// Logical counts and cleanability of a region.
    Clean {
        code: String,
        #[arg(long)]
        region: String,
        /// Kind of logical looked for inside the region (and of `--operator`).
        #[arg(long, value_enum, default_value = "dressed")]
        kind: KindArg,
        /// Logical operator to clean off the region.
        #[arg(long)]
        operator: Option<String>,
    },
    /// Build a lattice partition and write it to a file.
    Partition {
        code: String,
        #[command(flatten)]
        args: PartitionArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Hierarchy bound for logical gates from a partition file.
    GateBound {
        code: String,
        #[arg(long)]
        partition: PathBuf,
        #[arg(long, default_value_t = 0)]
        spread: usize,
    },
    /// Clifford-hierarchy level of a diagonal gate product.
    GateLevel {
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        gates: String,
        /// Number of qubits (defaults to one past the largest target).
        #[arg(long)]
        qubits: Option<usize>,
    },
    /// Logical action of a transversal diagonal gate on a CSS code.
    LogicalAction {
        code: String,
        #[arg(long)]
        gates: String,
    },
    /// Correctable fraction under random qubit loss.
    LossCurve {
        code: String,
        /// Loss-rate grid `start:stop:step`.
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the curve as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run a named invariant suite.
    Verify {
        #[arg(long, value_enum)]
        suite: verify::Suite,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Result of a command: the report body, a human summary, and whether an
/// invariant that should always hold was violated.
pub struct Outcome {
    pub result: Value,
    pub summary: String,
    pub seed: Option<u64>,
    pub violation: bool,
}

impl Outcome {
    fn ok(result: impl Serialize, summary: String) -> anyhow::Result<Self> {
        Ok(Outcome {
            result: serde_json::to_value(result)?,
            summary,
            seed: None,
            violation: false,
        })
    }
}

pub fn load_source(spec: &str) -> anyhow::Result<SubsystemCode> {
    if Path::new(spec).exists() {
        return io::load_code(spec).with_context(|| format!("reading {spec}"));
    }
    let (name, param) = match spec.split_once(':') {
        Some((a, b)) => (a, Some(b.parse::<usize>().with_context(|| format!("bad size in `{spec}`"))?)),
        None => (spec, None),
    };
    let code = match (name, param) {
        ("steane", None) => ftgate::build_steane()?,
        ("toric", Some(l)) => ftgate::build_toric(l)?,
        ("reed-muller", Some(m)) => ftgate::build_reed_muller(m)?,
        ("bacon-shor", Some(l)) => ftgate::build_bacon_shor(l)?,
        ("haah", Some(l)) => ftgate::build_haah_cubic(l)?,
        _ => bail!("`{spec}` is neither a file nor a builtin code (steane, toric:L, reed-muller:m, bacon-shor:L, haah:L)"),
    };
    Ok(code)
}

fn code_summary(code: &SubsystemCode) -> Value {
    json!({
        "name": code.name(),
        "n": code.num_qubits(),
        "k": code.k(),
        "gauge_rank": code.gauge_rank(),
        "stabilizer_rank": code.stabilizer_rank(),
        "gauge_qubits": code.gauge_qubits(),
        "stabilizer_code": code.is_stabilizer_code(),
    })
}

fn build(family: Family, param: usize, output: &Path) -> anyhow::Result<Outcome> {
    let code = match family {
        Family::Toric => ftgate::build_toric(param)?,
        Family::ReedMuller => ftgate::build_reed_muller(param)?,
        Family::BaconShor => ftgate::build_bacon_shor(param)?,
        Family::Haah => ftgate::build_haah_cubic(param)?,
    };
    io::save_code(&code, output).with_context(|| format!("writing {}", output.display()))?;
    let summary = format!(
        "{}: n = {}, k = {}, gauge rank {}, stabilizer rank {} -> {}",
        code.name(),
        code.num_qubits(),
        code.k(),
        code.gauge_rank(),
        code.stabilizer_rank(),
        output.display()
    );
    Outcome::ok(json!({ "code": code_summary(&code), "output": output }), summary)
}

fn distance(spec: &str, wmax: usize, kind: KindArg) -> anyhow::Result<Outcome> {
    let code = load_source(spec)?;
    let r = search::distance_of_kind(&code, wmax, kind.into())?;
    let (result, summary) = match &r {
        DistanceResult::Exact { d, witness } => (
            json!({ "exact": true, "d": d, "witness": witness.to_string(), "wmax": wmax, "kind": LogicalKind::from(kind) }),
            format!("{}: d = {d}, witness {witness}", code.name()),
        ),
        DistanceResult::LowerBound { at_least } => (
            json!({ "exact": false, "d_at_least": at_least, "wmax": wmax, "kind": LogicalKind::from(kind) }),
            format!("{}: d >= {at_least} (no logical up to weight {wmax})", code.name()),
        ),
    };
    Outcome::ok(result, summary)
}

fn clean(spec: &str, region: &str, kind: KindArg, operator: Option<&str>) -> anyhow::Result<Outcome> {
    let code = load_source(spec)?;
    let r = syntax::parse_region(region, code.num_qubits(), code.geometry())?;
    let rc = r.complement();
    let lb = cleaning::count_bare(&code, &r)?;
    let ld = cleaning::count_dressed(&code, &r)?;
    let lb_c = cleaning::count_bare(&code, &rc)?;
    let ld_c = cleaning::count_dressed(&code, &rc)?;
    let two_k = 2 * code.k();
    let identity_holds = ld + lb_c == two_k && lb + ld_c == two_k;

    let kind: LogicalKind = kind.into();
    let witness = search::find_logical_in_region(&code, &r, kind)?.map(|p| p.to_string());
    let cleaned = match operator {
        Some(s) => {
            let p: ftgate::PauliOperator = s.parse()?;
            Some(cleaning::clean_operator(&code, &p, &r, kind)?.map(|c| c.to_string()))
        }
        None => None,
    };
    let mut summary = format!(
        "|R| = {}: l_bare = {lb}, l_dressed = {ld}; complement l_bare = {lb_c}, l_dressed = {ld_c}\n\
         bare-cleanable (correctable): {}, dressed-cleanable: {}",
        r.len(),
        ld == 0,
        lb == 0
    );
    if let Some(w) = &witness {
        summary.push_str(&format!("\n{kind:?} logical inside R: {w}"));
    }
    match &cleaned {
        Some(Some(c)) => summary.push_str(&format!("\ncleaned operator: {c}")),
        Some(None) => summary.push_str("\noperator cannot be cleaned off R"),
        None => {}
    }
    if !identity_holds {
        summary.push_str(&format!("\nINVARIANT VIOLATED: counts do not add up to 2k = {two_k}"));
    }
    Ok(Outcome {
        result: json!({
            "region": r.qubits(),
            "region_size": r.len(),
            "l_bare": lb,
            "l_dressed": ld,
            "complement_l_bare": lb_c,
            "complement_l_dressed": ld_c,
            "bare_cleanable": ld == 0,
            "dressed_cleanable": lb == 0,
            "correctable": ld == 0,
            "identity_holds": identity_holds,
            "witness_kind": kind,
            "witness": witness,
            "cleaned": cleaned,
        }),
        summary,
        seed: None,
        violation: !identity_holds,
    })
}

fn partition(spec: &str, a: &PartitionArgs, output: Option<&Path>) -> anyhow::Result<Outcome> {
    let code = load_source(spec)?;
    let geo = code.require_geometry()?;
    let mut extra = json!({});
    let p: Partition = match a.scheme {
        Scheme::Tiling => {
            let tile = a.tile.context("--tile is required for the tiling scheme")?;
            let p = geometry::fattened_tiling(geo, tile, a.widths.as_deref())?;
            let comps: Vec<usize> = std::iter::once(&p.r0)
                .chain(&p.regions)
                .map(|r| geometry::connected_components(geo, r).len())
                .collect();
            extra["components"] = json!(comps);
            p
        }
        Scheme::Tubes => {
            let tile = a.tile.context("--tile is required for the tubes scheme")?;
            geometry::tube_partition(geo, a.q, a.width, tile, a.axis)?
        }
        Scheme::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            match geometry::random_cell_region(geo, a.p0, a.radius, a.cell_constant, &mut rng)? {
                RandomCellOutcome::Success(rc) => {
                    extra["balls"] = json!(rc.balls);
                    extra["cell_side"] = json!(rc.cell_side);
                    geometry::skewed_tiling_from_balls(geo, &rc.balls, a.width)?
                }
                RandomCellOutcome::Failure { empty_cells, cell_side } => {
                    let summary = format!("random-cell construction failed: {} empty cells", empty_cells.len());
                    let mut o = Outcome::ok(
                        json!({ "success": false, "empty_cells": empty_cells, "cell_side": cell_side }),
                        summary,
                    )?;
                    o.seed = Some(a.seed);
                    return Ok(o);
                }
            }
        }
    };
    p.check_covering()?;
    if let Some(path) = output {
        std::fs::write(path, serde_json::to_string_pretty(&p)?).with_context(|| format!("writing {}", path.display()))?;
    }
    let sizes: Vec<usize> = std::iter::once(&p.r0).chain(&p.regions).map(|r| r.len()).collect();
    let summary = format!(
        "{} regions after R0, sizes {:?}{}",
        p.regions.len(),
        sizes,
        output.map(|o| format!(" -> {}", o.display())).unwrap_or_default()
    );
    let mut o = Outcome::ok(
        json!({ "success": true, "sizes": sizes, "metadata": p.metadata, "extra": extra, "partition": p }),
        summary,
    )?;
    if matches!(a.scheme, Scheme::Random) {
        o.seed = Some(a.seed);
    }
    Ok(o)
}

fn gate_bound(spec: &str, partition: &Path, spread: usize) -> anyhow::Result<Outcome> {
    let code = load_source(spec)?;
    let text = std::fs::read_to_string(partition).with_context(|| format!("reading {}", partition.display()))?;
    let p: Partition = serde_json::from_str(&text).with_context(|| format!("parsing {}", partition.display()))?;
    let r = hierarchy::level_bound_from_partition(&code, &p, spread)?;
    let summary = match &r {
        hierarchy::PartitionBound::Bound { m, .. } => format!("every logical gate of spread {spread} lies in P_{m}"),
        hierarchy::PartitionBound::PreconditionFailure {
            region,
            requirement,
            witness,
            ..
        } => format!("precondition failed: region {region} is not {requirement:?}; logical witness {witness}"),
    };
    Outcome::ok(&r, summary)
}

fn gate_level(gates: &str, qubits: Option<usize>) -> anyhow::Result<Outcome> {
    let items = syntax::parse_gates(gates)?;
    let n = qubits.unwrap_or_else(|| syntax::gates_min_qubits(&items));
    let f = syntax::gates_polynomial(&items, n)?;
    let level = diagonal_level(&f, DEFAULT_LEVEL_CAP);
    let summary = format!("f = {f}: level {level}");
    Outcome::ok(
        json!({ "qubits": n, "kappa": f.kappa(), "polynomial": f.to_string(), "level": level }),
        summary,
    )
}

fn logical_action(spec: &str, gates: &str) -> anyhow::Result<Outcome> {
    let code = load_source(spec)?;
    let items = syntax::parse_gates(gates)?;
    let per = syntax::gates_per_qubit(&items, code.num_qubits())?;
    let a = hierarchy::transversal_diagonal_logical_action(&code, &per)?;
    let summary = match (&a.logical_polynomial, &a.level) {
        (Some(f), Some(l)) => format!(
            "preserves codespace; coset values {:?}, logical f = {f}, logical level {l}",
            a.coset_values
        ),
        _ => "does not preserve the codespace".to_string(),
    };
    Outcome::ok(&a, summary)
}

fn parse_grid(s: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let nums = parts
        .iter()
        .map(|t| t.trim().parse::<f64>().with_context(|| format!("bad number `{t}` in grid")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    match nums.as_slice() {
        [p] => Ok(loss::rate_grid(*p, *p, 1.0)?),
        [a, b, step] => Ok(loss::rate_grid(*a, *b, *step)?),
        _ => bail!("grid must be `p` or `start:stop:step`"),
    }
}

fn loss_curve(spec: &str, grid: &str, trials: usize, seed: u64, csv: Option<&Path>) -> anyhow::Result<Outcome> {
    let code = load_source(spec)?;
    let grid = parse_grid(grid)?;
    let curve = loss::loss_curve(&code, &grid, trials, seed)?;
    let table = curve.to_csv();
    if let Some(path) = csv {
        std::fs::write(path, &table).with_context(|| format!("writing {}", path.display()))?;
    }
    let mut o = Outcome::ok(&curve, table.trim_end().to_string())?;
    o.seed = Some(seed);
    Ok(o)
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Build { family, param, output } => build(*family, *param, output),
        Command::Distance { code, wmax, kind } => distance(code, *wmax, *kind),
        Command::Clean {
            code,
            region,
            kind,
            operator,
        } => clean(code, region, *kind, operator.as_deref()),
        Command::Partition { code, args, output } => partition(code, args, output.as_deref()),
        Command::GateBound {
            code,
            partition,
            spread,
        } => gate_bound(code, partition, *spread),
        Command::GateLevel { gates, qubits } => gate_level(gates, *qubits),
        Command::LogicalAction { code, gates } => logical_action(code, gates),
        Command::LossCurve {
            code,
            p,
            trials,
            seed,
            csv,
        } => loss_curve(code, p, *trials, *seed, csv.as_deref()),
        Command::Verify { suite, samples, seed } => verify::run(*suite, *samples, *seed),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Build { .. } => "build",
        Command::Distance { .. } => "distance",
        Command::Clean { .. } => "clean",
        Command::Partition { .. } => "partition",
        Command::GateBound { .. } => "gate-bound",
        Command::GateLevel { .. } => "gate-level",
        Command::LogicalAction { .. } => "logical-action",
        Command::LossCurve { .. } => "loss-curve",
        Command::Verify { .. } => "verify",
    }
}

fn is_invariant_error(e: &anyhow::Error) -> bool {
    e.chain()
        .any(|c| matches!(c.downcast_ref::<ftgate::Error>(), Some(ftgate::Error::Invariant(_))))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if cli.threads > 0 {
        // Only fails if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(if is_invariant_error(&e) { 2 } else { 1 });
        }
    };
    let report = json!({
        "tool": "ftgate",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command_name(&cli.command),
        "invocation": std::env::args().collect::<Vec<_>>(),
        "seed": outcome.seed,
        "violation": outcome.violation,
        "result": outcome.result,
    });
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    if let Some(path) = &cli.report {
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    if cli.json {
        println!("{text}");
    } else {
        println!("{}", outcome.summary);
    }
    if outcome.violation {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}
