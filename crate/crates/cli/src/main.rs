//! `kronlab` command-line front end.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage or invalid input,
//! 3 resource bound exceeded.

mod output;

use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kronlab::characters::{character_table, preload, CacheConfig};
use kronlab::combinatorics::{encode_diagram, enumerate_partitions, hook_dimension, kostka};
use kronlab::oracles::{kron_char, kron_invariant_def, pleth_wreath, Method};
use kronlab::projectors::{kron_pipeline, pipeline_trace, pleth_pipeline};
use kronlab::suites::{self, ProtocolOptions, SuiteReport};
use kronlab::symgroup::encode_permutation;
use kronlab::{Error, Partition, Permutation};
use serde::{Deserialize, Serialize};
use serde_json::json;

use output::{Format, Report};

#[derive(Parser, Debug)]
#[command(
    name = "kronlab",
    version,
    about = "Kronecker and plethysm coefficients by characters and by projector pipelines"
)]
struct Cli {
    /// Output format; pretty on a terminal, json otherwise.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Character-table cache directory (default: $KRONLAB_CACHE or ./.kronlab-cache).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Recompute character tables instead of reading or writing the cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Kronecker coefficient k(λ, μ, ν).
    Kron {
        lambda: Partition,
        mu: Partition,
        nu: Partition,
        #[arg(long, value_enum, default_value_t = KronMethod::Char)]
        method: KronMethod,
        /// Run every backend within its bound and fail on disagreement.
        #[arg(long)]
        all_methods: bool,
    },
    /// Plethysm coefficient a_λ(d, m), with |λ| = md.
    Pleth {
        d: usize,
        m: usize,
        lambda: Partition,
        #[arg(long, value_enum, default_value_t = PlethMethod::Wreath)]
        method: PlethMethod,
        #[arg(long)]
        all_methods: bool,
    },
    /// Exhaustive verification sweeps.
    #[command(subcommand)]
    Verify(Verify),
    /// Character table of S_n.
    Chartable { n: usize },
    /// Dimensions d(λ) for every λ ⊢ n.
    Dims { n: usize },
    /// Kostka number K_{λ,μ}.
    Kostka { lambda: Partition, mu: Partition },
    /// Bit encodings.
    #[command(subcommand)]
    Encode(Encode),
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// Pipeline trace against the character oracle for all triples at n.
    KronAll {
        n: usize,
        #[arg(long, value_enum)]
        method: Option<PipelineMethod>,
    },
    /// Pipeline trace against the wreath census for all λ ⊢ md.
    PlethAll {
        d: usize,
        m: usize,
        #[arg(long, value_enum)]
        method: Option<PipelineMethod>,
    },
    /// Idempotence, symmetry and commutation of every pipeline at n.
    Algebra { n: usize },
    /// Three-stage pipeline trace against d(λ)d(μ)d(ν)·k(λ,μ,ν).
    Truncated { n: usize },
    /// Completeness, soundness and Monte Carlo checks of the verifier.
    Protocol(ProtocolArgs),
}

#[derive(Args, Debug)]
struct ProtocolArgs {
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    shots: u64,
    /// Accepting and rejecting witnesses per case.
    #[arg(long, default_value_t = 2)]
    witnesses: usize,
    #[arg(long, value_enum, default_value_t = Families::All)]
    families: Families,
}

#[derive(Subcommand, Debug)]
enum Encode {
    /// Diagram of λ as n−1 bits, most significant first.
    Diagram { lambda: Partition },
    /// Permutation matrix as n² bits, row-major.
    Perm { perm: Permutation },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum KronMethod {
    Char,
    Dense,
    Collapsed,
    Specht,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum PlethMethod {
    Wreath,
    Dense,
    Collapsed,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum PipelineMethod {
    Dense,
    Collapsed,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Families {
    All,
    Kron,
    Pleth,
}

impl From<KronMethod> for Method {
    fn from(m: KronMethod) -> Self {
        match m {
            KronMethod::Char => Method::Character,
            KronMethod::Dense => Method::Dense,
            KronMethod::Collapsed => Method::Collapsed,
            KronMethod::Specht => Method::Specht,
        }
    }
}

impl From<PlethMethod> for Method {
    fn from(m: PlethMethod) -> Self {
        match m {
            PlethMethod::Wreath => Method::Wreath,
            PlethMethod::Dense => Method::Dense,
            PlethMethod::Collapsed => Method::Collapsed,
        }
    }
}

impl From<PipelineMethod> for Method {
    fn from(m: PipelineMethod) -> Self {
        match m {
            PipelineMethod::Dense => Method::Dense,
            PipelineMethod::Collapsed => Method::Collapsed,
        }
    }
}

/// The parsed invocation, echoed in JSON output next to its result.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub partitions: Vec<Partition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default)]
    pub all_methods: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub families: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutation: Option<Permutation>,
}

/// A failed run: exit code plus message.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BoundExceeded { .. } => 3,
            Error::InvalidPartition(_)
            | Error::InvalidPermutation(_)
            | Error::SizeMismatch(_)
            | Error::DegreeMismatch { .. }
            | Error::Parse(_)
            | Error::UnsupportedPipeline(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn check_sizes(ps: &[&Partition]) -> Result<usize, Failure> {
    let n = ps[0].size();
    if n == 0 {
        return Err(usage("partitions must be nonempty"));
    }
    if let Some(bad) = ps.iter().find(|p| p.size() != n) {
        return Err(usage(format!("size mismatch: {} has size {}, expected {n}", bad, bad.size())));
    }
    Ok(n)
}

fn label_for(m: Method) -> &'static str {
    m.as_str()
}

/// Value by one backend; `Ok(None)` when it is out of bounds and skipping is allowed.
fn kron_value(m: Method, l: &Partition, u: &Partition, v: &Partition) -> kronlab::Result<u64> {
    match m {
        Method::Character => kron_char(l, u, v).map(|r| r.value),
        Method::Specht => kron_invariant_def(l, u, v).map(|r| r.value),
        _ => pipeline_trace(&kron_pipeline(l, u, v)?, m),
    }
}

fn pleth_value(method: Method, d: usize, m: usize, l: &Partition) -> kronlab::Result<u64> {
    match method {
        Method::Wreath => pleth_wreath(d, m, l).map(|r| r.value),
        _ => pipeline_trace(&pleth_pipeline(d, m, l)?, method),
    }
}

/// Runs `methods` in order, skipping out-of-bound ones when `all` is set.
fn coefficient_report(
    config: RunConfig,
    title: String,
    methods: &[Method],
    all: bool,
    eval: impl Fn(Method) -> kronlab::Result<u64>,
) -> Result<Report, Failure> {
    let mut rows = Vec::new();
    for &m in methods {
        match eval(m) {
            Ok(v) => rows.push((label_for(m), Some(v))),
            Err(Error::BoundExceeded { .. }) if all => rows.push((label_for(m), None)),
            Err(e) => return Err(e.into()),
        }
    }
    let values: Vec<u64> = rows.iter().filter_map(|(_, v)| *v).collect();
    let agree = values.windows(2).all(|w| w[0] == w[1]);
    Ok(Report::coefficient(config, title, rows, agree))
}

fn cache_config(cli: &Cli) -> CacheConfig {
    if cli.no_cache {
        CacheConfig::disabled()
    } else if let Some(dir) = &cli.cache_dir {
        CacheConfig::at(dir)
    } else {
        CacheConfig::from_env()
    }
}

fn warm(cache: &CacheConfig, n: usize) -> Result<(), Failure> {
    preload(n, cache)?;
    Ok(())
}

fn suite(config: RunConfig, r: kronlab::Result<SuiteReport>) -> Result<Report, Failure> {
    Ok(Report::suite(config, r?))
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let cache = cache_config(cli);
    match &cli.command {
        Command::Kron { lambda, mu, nu, method, all_methods } => {
            let n = check_sizes(&[lambda, mu, nu])?;
            warm(&cache, n)?;
            let config = RunConfig {
                command: "kron".into(),
                partitions: vec![lambda.clone(), mu.clone(), nu.clone()],
                method: Some(label_for((*method).into()).into()),
                all_methods: *all_methods,
                ..Default::default()
            };
            let methods: Vec<Method> = if *all_methods {
                vec![Method::Character, Method::Dense, Method::Collapsed, Method::Specht]
            } else {
                vec![(*method).into()]
            };
            let title = format!("k({lambda} | {mu} | {nu})");
            coefficient_report(config, title, &methods, *all_methods, |m| kron_value(m, lambda, mu, nu))
        }
        Command::Pleth { d, m, lambda, method, all_methods } => {
            if *d == 0 || *m == 0 {
                return Err(usage("d and m must be positive"));
            }
            if lambda.size() != d * m {
                return Err(usage(format!("|λ| = {} but md = {}", lambda.size(), d * m)));
            }
            warm(&cache, d * m)?;
            let config = RunConfig {
                command: "pleth".into(),
                partitions: vec![lambda.clone()],
                d: Some(*d),
                m: Some(*m),
                method: Some(label_for((*method).into()).into()),
                all_methods: *all_methods,
                ..Default::default()
            };
            let methods: Vec<Method> = if *all_methods {
                vec![Method::Wreath, Method::Dense, Method::Collapsed]
            } else {
                vec![(*method).into()]
            };
            let title = format!("a_{lambda}({d}, {m})");
            coefficient_report(config, title, &methods, *all_methods, |meth| pleth_value(meth, *d, *m, lambda))
        }
        Command::Verify(v) => match v {
            Verify::KronAll { n, method } => {
                warm(&cache, (*n).max(1))?;
                let config = RunConfig {
                    command: "verify kron-all".into(),
                    n: Some(*n),
                    method: method.map(|m| label_for(m.into()).into()),
                    ..Default::default()
                };
                suite(config, suites::verify_kron_all(*n, method.map(Into::into)))
            }
            Verify::PlethAll { d, m, method } => {
                warm(&cache, (d * m).max(1))?;
                let config = RunConfig {
                    command: "verify pleth-all".into(),
                    d: Some(*d),
                    m: Some(*m),
                    method: method.map(|x| label_for(x.into()).into()),
                    ..Default::default()
                };
                suite(config, suites::verify_pleth_all(*d, *m, method.map(Into::into)))
            }
            Verify::Algebra { n } => {
                warm(&cache, (*n).max(1))?;
                let config = RunConfig { command: "verify algebra".into(), n: Some(*n), ..Default::default() };
                suite(config, suites::verify_algebra(*n))
            }
            Verify::Truncated { n } => {
                warm(&cache, (*n).max(1))?;
                let config = RunConfig { command: "verify truncated".into(), n: Some(*n), ..Default::default() };
                suite(config, suites::verify_truncated(*n))
            }
            Verify::Protocol(a) => {
                warm(&cache, a.n.max(1))?;
                let families = match a.families {
                    Families::All => "all",
                    Families::Kron => "kron",
                    Families::Pleth => "pleth",
                };
                let config = RunConfig {
                    command: "verify protocol".into(),
                    n: Some(a.n),
                    seed: Some(a.seed),
                    shots: Some(a.shots),
                    witnesses: Some(a.witnesses),
                    families: Some(families.into()),
                    ..Default::default()
                };
                let opts = ProtocolOptions {
                    seed: a.seed,
                    shots: a.shots,
                    witnesses: a.witnesses,
                    kron: a.families != Families::Pleth,
                    pleth: a.families != Families::Kron,
                };
                suite(config, suites::verify_protocol(a.n, &opts))
            }
        },
        Command::Chartable { n } => {
            warm(&cache, *n)?;
            let table = character_table(*n)?;
            let config = RunConfig { command: "chartable".into(), n: Some(*n), ..Default::default() };
            Ok(Report::chartable(config, &table))
        }
        Command::Dims { n } => {
            if *n == 0 {
                return Err(usage("n must be positive"));
            }
            let rows: Vec<(Partition, u64)> = enumerate_partitions(*n)
                .into_iter()
                .map(|l| {
                    let d = hook_dimension(&l);
                    (l, d)
                })
                .collect();
            let config = RunConfig { command: "dims".into(), n: Some(*n), ..Default::default() };
            Ok(Report::dims(config, rows))
        }
        Command::Kostka { lambda, mu } => {
            check_sizes(&[lambda, mu])?;
            let value = kostka(lambda, mu)?;
            let config = RunConfig {
                command: "kostka".into(),
                partitions: vec![lambda.clone(), mu.clone()],
                ..Default::default()
            };
            Ok(Report::scalar(config, format!("K({lambda} | {mu})"), json!(value), value.to_string()))
        }
        Command::Encode(Encode::Diagram { lambda }) => {
            let bits = encode_diagram(lambda)?;
            let config =
                RunConfig { command: "encode diagram".into(), partitions: vec![lambda.clone()], ..Default::default() };
            Ok(Report::scalar(config, format!("diagram({lambda})"), json!(bits), bits.clone()))
        }
        Command::Encode(Encode::Perm { perm }) => {
            let bits = encode_permutation(perm);
            let config =
                RunConfig { command: "encode perm".into(), permutation: Some(perm.clone()), ..Default::default() };
            Ok(Report::scalar(config, format!("matrix({perm})"), json!(bits), bits.clone()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format.unwrap_or(if std::io::stdout().is_terminal() { Format::Pretty } else { Format::Json });
    match run(&cli) {
        Ok(report) => {
            print!("{}", report.render(format));
            ExitCode::from(if report.ok() { 0 } else { 1 })
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
