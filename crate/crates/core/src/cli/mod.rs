//! Command-line surface of the `causalkit` binary.
//!
//! Every command produces a [`Report`]. Exit code 0 means the verdict is
//! true, 1 that it is false, 2 a usage, input or enumeration error.
//! Objects are named `preset:NAME` or by a file path.

mod report;

pub use report::{format_float, Entry, Report};

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{self, format::parse_netlist, CountingOracle};
use crate::classical::format::{parse_distribution, parse_process, render_process};
use crate::classical::presets::{distribution_preset, process_preset};
use crate::classical::{self, ClassicalProcess, Classification, ConditionalDistribution, Membership};
use crate::exact::{format_rational, DeterministicOp, MixedRadix};
use crate::fixed_point::{self, format::parse_decomposition};
use crate::games::{self, format::parse_game, format::parse_strategy, GameSpec};
use crate::quantum::{self, format::parse_process_matrix, Instrument, Operator, ProcessMatrix};
use crate::{Error, Result, Verdict, DEFAULT_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Parser)]
#[command(name = "causalkit", version, about = "Verify and simulate processes without a predefined causal order")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Bound on the number of items an exhaustive enumeration may visit.
    #[arg(long, global = true, env = "CAUSALKIT_CAP", default_value_t = DEFAULT_CAP)]
    pub cap: u64,
    /// Tolerance for floating-point checks on the quantum side.
    #[arg(long, global = true, default_value_t = quantum::DEFAULT_EPSILON)]
    pub epsilon: f64,
    /// Seed for randomised instruments, pairs and boxes.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classical processes.
    #[command(subcommand)]
    Process(ProcessCmd),
    /// Causal games.
    #[command(subcommand)]
    Game(GameCmd),
    /// Causal relations read off a conditional distribution.
    #[command(subcommand)]
    Relations(RelationsCmd),
    /// Membership in the set of causal distributions.
    #[command(subcommand)]
    Membership(MembershipCmd),
    /// Process matrices.
    #[command(subcommand)]
    Quantum(QuantumCmd),
    /// Circuits with cycles.
    #[command(subcommand)]
    Circuit(CircuitCmd),
}

#[derive(Debug, Subcommand)]
pub enum ProcessCmd {
    /// Decide logical consistency.
    Validate { process: String },
    /// Search for local strategies that make every output depend on another party.
    Classify { process: String },
    /// Fixed points of the composed function, or the unique-fixed-point test over all operations.
    Fixpoints {
        process: String,
        /// Comma-separated local operations (id, not, 0, 1 or [v,..] tables).
        #[arg(long)]
        ops: Option<String>,
    },
    /// Check the average-fixed-point criterion for a weighted decomposition.
    DecomposeCheck { decomposition: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum GameCmd {
    /// Exact success probability of strategies on a process.
    Run { game: String, process: String, strategy: String },
    /// Best success probability with a predefined causal order.
    Bound { game: String },
}

#[derive(Debug, Subcommand)]
pub enum RelationsCmd {
    Infer { distribution: String },
}

#[derive(Debug, Subcommand)]
pub enum MembershipCmd {
    TwoParty { distribution: String },
}

#[derive(Debug, Args)]
pub struct ProbabilityArgs {
    matrix: String,
    /// Comma-separated input per party.
    #[arg(long)]
    inputs: Option<String>,
    /// `random` instruments (two inputs, two outcomes) or the `ocb` pair.
    #[arg(long, default_value = "random")]
    instruments: String,
}

#[derive(Debug, Subcommand)]
pub enum QuantumCmd {
    /// Positivity and normalisation of a process matrix.
    Validate { matrix: String },
    /// Joint outcome distribution for given instruments and inputs.
    Probability(ProbabilityArgs),
    /// Success probability of the two-party guessing game with the non-causal matrix.
    Ocb {
        /// State S prepares when b' = 1: mixed, 0, 1, +, -, +i, -i.
        #[arg(long, default_value = "mixed")]
        rho: String,
    },
    /// Commute or anticommute, decided with one use of each unitary.
    Switch {
        /// Named unitaries (i, x, y, z, h, s, t); omit with --sample.
        unitaries: Vec<String>,
        /// Test this many random commuting and anticommuting pairs instead.
        #[arg(long)]
        sample: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CircuitCmd {
    /// Logical consistency: total weight 1 for every input.
    Check { netlist: String },
    /// Weighted outputs for one input tuple.
    Run {
        netlist: String,
        /// Comma-separated circuit inputs.
        #[arg(long, default_value = "")]
        inputs: String,
    },
    /// Fixed point of a box with one query; `n` samples a box over n values.
    Fpsearch { target: String },
}

/// Exit code with what to print on stdout and stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let echo: Vec<String> = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let start = Instant::now();
    match execute(&cli, Report::new(echo.join(" "))) {
        Ok(mut report) => {
            report.elapsed_ms = start.elapsed().as_millis() as u64;
            let stdout = match cli.format {
                Format::Text => report.render_text(),
                Format::Structured => report.render_structured(),
            };
            Outcome { code: if report.verdict { 0 } else { 1 }, stdout, stderr: String::new() }
        }
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn execute(cli: &Cli, mut r: Report) -> Result<Report> {
    match &cli.command {
        Command::Process(cmd) => process_cmd(cli, cmd, &mut r)?,
        Command::Game(cmd) => game_cmd(cli, cmd, &mut r)?,
        Command::Relations(RelationsCmd::Infer { distribution }) => {
            let report = classical::infer_relations(&load_distribution(distribution)?);
            let n = report.correlated.len();
            let pairs: Vec<String> = (0..n)
                .flat_map(|p| (0..n).map(move |q| (p, q)))
                .filter(|&(p, q)| report.correlated[p][q])
                .map(|(p, q)| format!("P{p}->P{q}"))
                .collect();
            r.push("correlated", list_or_none(&pairs));
            let pre: Vec<String> = report.precedes.iter().map(|(p, q)| format!("P{p}<P{q}")).collect();
            r.push("precedes", list_or_none(&pre));
            let free: Vec<String> = report.unaffected_parties().iter().map(|p| format!("P{p}")).collect();
            r.push("unaffected", list_or_none(&free));
            r.push("some_party_unaffected", report.some_party_unaffected);
            r.verdict = report.some_party_unaffected;
        }
        Command::Membership(MembershipCmd::TwoParty { distribution }) => {
            let dist = load_distribution(distribution)?;
            match classical::two_party_causal_membership(&dist)? {
                Membership::Member(d) => {
                    r.push("member", true);
                    r.push_rational("p", &d.p);
                    r.push("reconstructs", d.reconstruct() == dist);
                }
                Membership::NotMember => {
                    r.push("member", false);
                    r.verdict = false;
                }
            }
        }
        Command::Quantum(cmd) => quantum_cmd(cli, cmd, &mut r)?,
        Command::Circuit(cmd) => circuit_cmd(cli, cmd, &mut r)?,
    }
    Ok(r)
}

fn list_or_none(items: &[String]) -> String {
    if items.is_empty() {
        "none".into()
    } else {
        items.join(" ")
    }
}

/// `preset:NAME` or the contents of a file.
enum Source {
    Preset(String),
    File(String),
}

fn source(reference: &str) -> Result<Source> {
    match reference.strip_prefix("preset:") {
        Some(name) => Ok(Source::Preset(name.to_string())),
        None => Ok(Source::File(std::fs::read_to_string(reference).map_err(|e| {
            Error::Invalid(format!("cannot read '{reference}': {e}"))
        })?)),
    }
}

fn with_path<T>(reference: &str, parsed: Result<T>) -> Result<T> {
    parsed.map_err(|e| match e {
        Error::Parse { line, message } => Error::Invalid(format!("{reference}:{line}: {message}")),
        other => other,
    })
}

fn load_process(reference: &str) -> Result<ClassicalProcess> {
    match source(reference)? {
        Source::Preset(name) => process_preset(&name),
        Source::File(text) => with_path(reference, parse_process(&text)),
    }
}

fn load_distribution(reference: &str) -> Result<ConditionalDistribution> {
    match source(reference)? {
        Source::Preset(name) => distribution_preset(&name),
        Source::File(text) => with_path(reference, parse_distribution(&text)),
    }
}

fn load_game(reference: &str) -> Result<GameSpec> {
    match source(reference)? {
        Source::Preset(name) => games::builtin_game(&name),
        Source::File(text) => with_path(reference, parse_game(&text)),
    }
}

fn load_matrix(reference: &str) -> Result<ProcessMatrix> {
    match source(reference)? {
        Source::Preset(name) => quantum::quantum_preset(&name),
        Source::File(text) => with_path(reference, parse_process_matrix(&text)),
    }
}

fn load_circuit(reference: &str) -> Result<circuit::Circuit> {
    match source(reference)? {
        Source::Preset(name) => circuit::circuit_preset(&name),
        Source::File(text) => with_path(reference, parse_netlist(&text)),
    }
}

fn indices(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::Invalid(format!("'{t}' is not a value index"))))
        .collect()
}

fn op_names(ops: &[DeterministicOp]) -> String {
    ops.iter().map(DeterministicOp::name).collect::<Vec<_>>().join(",")
}

fn parse_ops(text: &str, process: &ClassicalProcess) -> Result<Vec<DeterministicOp>> {
    // Split on commas outside brackets.
    let mut names = Vec::new();
    let (mut depth, mut current) = (0, String::new());
    for ch in text.chars() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                names.push(std::mem::take(&mut current));
                continue;
            }
            _ => {}
        }
        current.push(ch);
    }
    names.push(current);
    if names.len() != process.parties().len() {
        return Err(Error::Dimension(format!("{} operations for {} parties", names.len(), process.parties().len())));
    }
    names
        .iter()
        .zip(process.parties())
        .map(|(name, p)| {
            let name = name.trim();
            let op = match name.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                Some(table) => DeterministicOp::new(p.env_out, indices(table)?)?,
                None => DeterministicOp::from_bit_name(name)
                    .ok_or_else(|| Error::Unknown { kind: "operation", name: name.into() })?,
            };
            if op.in_size() != p.env_in || op.out_size() != p.env_out {
                return Err(Error::Dimension(format!("operation {name} does not fit party '{}'", p.name)));
            }
            Ok(op)
        })
        .collect()
}

fn fixed_point_list(points: &[Vec<usize>]) -> String {
    let items: Vec<String> = points.iter().map(|p| format!("({})", p.iter().map(usize::to_string).collect::<Vec<_>>().join(","))).collect();
    list_or_none(&items)
}

fn process_cmd(cli: &Cli, cmd: &ProcessCmd, r: &mut Report) -> Result<()> {
    match cmd {
        ProcessCmd::Validate { process } => {
            let e = load_process(process)?;
            let report = classical::consistency(&e, cli.cap)?;
            r.push("parties", e.parties().len());
            r.push("nonnegative", report.negative_entry.is_none());
            if let Some((row, col)) = report.negative_entry {
                r.push("negative_entry", format!("row {row} column {col}"));
            }
            match &report.total_probability {
                Verdict::Pass => {
                    r.push("total_probability", "pass");
                }
                Verdict::Fail(v) => {
                    r.push("total_probability", "fail");
                    r.push("witness_ops", op_names(&v.ops));
                    r.push_rational("witness_trace", &v.trace);
                }
            }
            r.verdict = report.is_consistent();
            r.push("consistent", r.verdict);
        }
        ProcessCmd::Classify { process } => {
            let e = load_process(process)?;
            match classical::classify(&e, cli.cap) {
                Ok(Classification::Causal { strategies_checked }) => {
                    r.push("classification", "causal");
                    r.push("strategies_checked", strategies_checked);
                }
                Ok(Classification::NonCausal { strategy, report }) => {
                    r.push("classification", "non-causal");
                    let n = report.correlated.len();
                    let pairs: Vec<String> = (0..n)
                        .flat_map(|p| (0..n).map(move |q| (p, q)))
                        .filter(|&(p, q)| report.correlated[p][q])
                        .map(|(p, q)| format!("{}->{}", e.parties()[p].name, e.parties()[q].name))
                        .collect();
                    r.push("witness_correlations", list_or_none(&pairs));
                    r.push("witness_strategy", crate::games::format::render_strategy(&strategy).trim_end().replace('\n', "; "));
                    r.verdict = false;
                }
                Err(Error::Inconsistent) => {
                    r.push("classification", "inconsistent");
                    r.verdict = false;
                }
                Err(other) => return Err(other),
            }
        }
        ProcessCmd::Fixpoints { process, ops } => {
            let e = load_process(process)?;
            let f = fixed_point::as_function(&e)?;
            match ops {
                Some(ops) => {
                    let ops = parse_ops(ops, &e)?;
                    let table = fixed_point::composed_table(&f, &ops)?;
                    let radix = f.in_radix();
                    for (k, &image) in table.iter().enumerate() {
                        let show = |v: usize| radix.unflatten(v).iter().map(usize::to_string).collect::<String>();
                        r.push(format!("map {}", show(k)), show(image));
                    }
                    let points = fixed_point::fixed_points(&f, &ops)?;
                    r.push("fixed_points", fixed_point_list(&points));
                    r.push("count", points.len());
                    r.verdict = points.len() == 1;
                }
                None => match fixed_point::is_deterministic_extremal(&f, cli.cap)? {
                    Verdict::Pass => {
                        r.push("unique_fixed_point", "every operation tuple");
                    }
                    Verdict::Fail(v) => {
                        r.push("witness_ops", op_names(&v.ops));
                        r.push("witness_fixed_points", fixed_point_list(&v.fixed_points));
                        r.push("witness_count", v.fixed_points.len());
                        r.verdict = false;
                    }
                },
            }
        }
        ProcessCmd::DecomposeCheck { decomposition } => {
            let text = std::fs::read_to_string(decomposition)
                .map_err(|e| Error::Invalid(format!("cannot read '{}': {e}", decomposition.display())))?;
            let base = decomposition.parent().unwrap_or(Path::new(".")).to_path_buf();
            let resolve = |reference: &str| match reference.strip_prefix("preset:") {
                Some(name) => process_preset(name),
                None => {
                    let path = base.join(reference);
                    load_process(&path.to_string_lossy())
                }
            };
            let label = decomposition.to_string_lossy().into_owned();
            let d = with_path(&label, parse_decomposition(&text, resolve))?;
            r.push("components", d.components().len());
            match fixed_point::verify_average_fixed_points(&d, cli.cap)? {
                Verdict::Pass => {
                    r.push("average_fixed_points", "1 for every operation tuple");
                }
                Verdict::Fail(v) => {
                    r.push("witness_ops", op_names(&v.ops));
                    r.push_rational("witness_average", &v.average);
                    r.verdict = false;
                }
            }
            r.push("mixture_consistent", classical::is_logically_consistent(&d.mixture(), cli.cap)?);
            r.push("mixture", render_process(&d.mixture()).trim_end().replace('\n', "; "));
        }
    }
    Ok(())
}

fn game_cmd(cli: &Cli, cmd: &GameCmd, r: &mut Report) -> Result<()> {
    match cmd {
        GameCmd::Run { game, process, strategy } => {
            let g = load_game(game)?;
            let e = load_process(process)?;
            let s = match source(strategy)? {
                Source::Preset(name) => games::strategy_preset(&name, &g, &e)?,
                Source::File(text) => with_path(strategy, parse_strategy(&text))?,
            };
            let result = games::play(&g, &e, &s)?;
            r.push("game", g.name());
            r.push_rational("success", &result.success);
            for (m, v) in result.per_shared.iter().enumerate() {
                r.push_rational(format!("success_given_m{m}"), v);
            }
            r.push("perfect", result.success.is_one());
        }
        GameCmd::Bound { game } => {
            let g = load_game(game)?;
            let bound = games::causal_bound(&g, cli.cap)?;
            r.push("game", g.name());
            r.push_rational("bound", &bound.result.success);
            for (m, v) in bound.result.per_shared.iter().enumerate() {
                r.push_rational(format!("bound_given_m{m}"), v);
            }
            r.push("first_party", &g.parties()[bound.strategy.first]);
        }
    }
    Ok(())
}

fn rho_by_name(name: &str) -> Result<Operator> {
    use quantum::{c, identity, ket, projector};
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let v = match name {
        "mixed" => return Ok(identity(2) * c(0.5, 0.)),
        "0" => ket(2, 0),
        "1" => ket(2, 1),
        "+" => (ket(2, 0) + ket(2, 1)) * c(h, 0.),
        "-" => (ket(2, 0) - ket(2, 1)) * c(h, 0.),
        "+i" => (ket(2, 0) + ket(2, 1) * c(0., 1.)) * c(h, 0.),
        "-i" => (ket(2, 0) - ket(2, 1) * c(0., 1.)) * c(h, 0.),
        _ => return Err(Error::Unknown { kind: "state", name: name.into() }),
    };
    Ok(projector(&v))
}

fn quantum_cmd(cli: &Cli, cmd: &QuantumCmd, r: &mut Report) -> Result<()> {
    let eps = cli.epsilon;
    match cmd {
        QuantumCmd::Validate { matrix } => {
            let w = load_matrix(matrix)?;
            let v = quantum::validate(&w, eps);
            r.push("hermitian", v.hermitian);
            r.push_float("min_eigenvalue", v.min_eigenvalue);
            r.push_float("max_normalization_error", v.max_normalization_error);
            r.push("tuples_checked", v.tuples_checked);
            if let Some(t) = &v.worst_tuple {
                r.push("worst_generators", t.iter().map(usize::to_string).collect::<Vec<_>>().join(","));
            }
            r.verdict = v.valid;
            r.push("valid", v.valid);
        }
        QuantumCmd::Probability(args) => {
            let w = load_matrix(&args.matrix)?;
            let instruments: Vec<Instrument> = match args.instruments.as_str() {
                "random" => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                    w.parties().iter().map(|p| quantum::random_instrument(&mut rng, p.dim_in, p.dim_out, 2, 2)).collect()
                }
                "ocb" => quantum::ocb_instruments(&rho_by_name("mixed")?, eps)?.to_vec(),
                other => return Err(Error::Unknown { kind: "instrument set", name: other.into() }),
            };
            let inputs = match &args.inputs {
                Some(text) => indices(text)?,
                None => vec![0; w.parties().len()],
            };
            let radix = MixedRadix::new(&instruments.iter().map(Instrument::outcomes).collect::<Vec<_>>());
            match quantum::probability(&w, &instruments, &inputs, eps) {
                Ok(dist) => {
                    for (x, p) in radix.tuples().zip(&dist) {
                        r.push_float(format!("P({})", x.iter().map(usize::to_string).collect::<Vec<_>>().join(",")), *p);
                    }
                    r.push_float("total", dist.iter().sum());
                }
                Err(Error::Normalization { total }) => {
                    r.push("total", total);
                    r.push("normalized", false);
                    r.verdict = false;
                }
                Err(e) => return Err(e),
            }
        }
        QuantumCmd::Ocb { rho } => {
            let game = games::builtin_game("game1")?;
            let ins = quantum::ocb_instruments(&rho_by_name(rho)?, eps)?;
            let value = quantum::quantum_game_value(&game, &quantum::w_ocb(), &ins, eps)?;
            let target = (2.0 + 2f64.sqrt()) / 4.0;
            r.push_float("value", value);
            r.push_float("target", target);
            r.push_float("deviation", (value - target).abs());
            r.verdict = (value - target).abs() <= eps;
        }
        QuantumCmd::Switch { unitaries, sample } => match (sample, unitaries.as_slice()) {
            (None, [b, c]) => {
                let (bu, cu) = (quantum::named_unitary(b)?, quantum::named_unitary(c)?);
                match quantum::commute_test(&bu, &cu, eps) {
                    Ok(bit) => {
                        r.push("outcome", bit);
                        r.push("relation", if bit == 0 { "commute" } else { "anticommute" });
                    }
                    Err(Error::Indeterminate(d)) => {
                        r.push("outcome", "indeterminate");
                        r.push("distribution", d);
                        r.verdict = false;
                    }
                    Err(e) => return Err(e),
                }
            }
            (Some(n), []) => {
                let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                let mut correct = 0;
                for k in 0..2 * n {
                    let expected = k % 2;
                    let (b, c) = if expected == 0 {
                        quantum::random_commuting_pair(&mut rng)
                    } else {
                        quantum::random_anticommuting_pair(&mut rng)
                    };
                    if quantum::commute_test(&b, &c, eps).ok() == Some(expected) {
                        correct += 1;
                    }
                }
                r.push("pairs", 2 * n);
                r.push("correct", correct);
                r.verdict = correct == 2 * n;
            }
            _ => return Err(Error::Invalid("give two unitary names or --sample N".into())),
        },
    }
    Ok(())
}

fn circuit_cmd(cli: &Cli, cmd: &CircuitCmd, r: &mut Report) -> Result<()> {
    match cmd {
        CircuitCmd::Check { netlist } => {
            let c = load_circuit(netlist)?;
            let check = circuit::is_consistent(&c, cli.cap)?;
            for (a, w) in &check.per_input {
                let key = format!("weight({})", a.iter().map(usize::to_string).collect::<Vec<_>>().join(","));
                r.push_rational(key, w);
            }
            r.verdict = check.consistent;
            r.push("consistent", check.consistent);
        }
        CircuitCmd::Run { netlist, inputs } => {
            let c = load_circuit(netlist)?;
            let e = circuit::evaluate(&c, &indices(inputs)?, cli.cap)?;
            for (x, w) in &e.outputs {
                r.push_rational(format!("output({})", x.iter().map(usize::to_string).collect::<Vec<_>>().join(",")), w);
            }
            r.push_rational("total_weight", &e.total_weight);
            r.verdict = e.total_weight.is_one();
        }
        CircuitCmd::Fpsearch { target } => {
            let table = if target.contains(',') {
                indices(target)?
            } else {
                let n: usize = target.parse().map_err(|_| Error::Invalid(format!("'{target}' is neither n nor a table")))?;
                random_unique_fixed_point_box(n, cli.seed)?
            };
            r.push("box", table.iter().map(usize::to_string).collect::<Vec<_>>().join(","));
            let scan: Vec<usize> = (0..table.len()).filter(|&i| table[i] == i).collect();
            let oracle = Arc::new(CountingOracle::from_table(table.clone())?);
            match circuit::fixed_point_search(oracle, cli.cap) {
                Ok(found) => {
                    r.push("fixed_point", found.value);
                    r.push("queries", found.queries);
                    let baseline = circuit::baseline_search(&CountingOracle::from_table(table)?)?;
                    r.push("baseline_fixed_point", baseline.value);
                    r.push("baseline_queries", baseline.queries);
                    r.verdict = scan == [found.value] && found.queries == 1;
                }
                Err(Error::PromiseViolation { total_weight }) => {
                    r.push("promise", "violated");
                    r.push("total_weight", format_rational(&total_weight));
                    r.verdict = false;
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(())
}

/// Uniform random map on `0..n` conditioned on exactly one fixed point.
fn random_unique_fixed_point_box(n: usize, seed: u64) -> Result<Vec<usize>> {
    if n == 0 {
        return Err(Error::Invalid("box needs at least one value".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fixed = rng.gen_range(0..n);
    Ok((0..n)
        .map(|i| {
            if i == fixed {
                i
            } else {
                // Any value except i itself.
                let v = rng.gen_range(0..n - 1);
                if v >= i {
                    v + 1
                } else {
                    v
                }
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Outcome {
        run(std::iter::once("causalkit").chain(args.iter().copied()))
    }

    #[test]
    fn bound_and_exit_codes() {
        let o = go(&["game", "bound", "preset:game2"]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert!(o.stdout.contains("bound: 5/6\n"));
        let o = go(&["process", "validate", "preset:perturbed-mixture"]);
        assert_eq!(o.code, 1);
        assert!(o.stdout.contains("witness_ops: d_id,d_id,d_id\n"));
        assert!(o.stdout.contains("witness_trace: 51/50\n"));
        assert_eq!(go(&["process", "frobnicate"]).code, 2);
        assert_eq!(go(&["process", "validate", "preset:nope"]).code, 2);
    }

    #[test]
    fn box_sampler_has_one_fixed_point() {
        for seed in 0..50 {
            let t = random_unique_fixed_point_box(5, seed).unwrap();
            assert_eq!((0..5).filter(|&i| t[i] == i).count(), 1);
        }
        assert_eq!(random_unique_fixed_point_box(1, 0).unwrap(), vec![0]);
    }

    #[test]
    fn ops_parsing() {
        let e = process_preset("majority").unwrap();
        let ops = parse_ops("id,not,[1,1]", &e).unwrap();
        assert_eq!(op_names(&ops), "d_id,d_not,d_1");
        assert!(parse_ops("id,id", &e).is_err());
    }
}
