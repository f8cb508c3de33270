//! The `rds-kit` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use rds_core::chain::{default_burn_in, exact_kernel, propose_step, ChainState, DEFAULT_MAX_STATES};
use rds_core::construct::greedy_construct;
use rds_core::count::{approx_count, exact_count, ApproxConfig};
use rds_core::instance::to_directed;
use rds_core::oracle::{enumerate_bounded, sample_chain, DEFAULT_MAX_CHORDS};
use rds_core::paths::canonical_path;
use rds_core::swaps::{swap_distance, DEFAULT_MAX_DELTA};
use rds_core::{Instance, Realization};
use serde_json::{json, Value};

use crate::format::{parse_instance, parse_realization};
use crate::report::{self, PathSummary, SampleConfig};
use crate::stats::kernel_eigenvalues;
use crate::KitError;

#[derive(Parser, Debug)]
#[command(name = "rds-kit", version, about = "Realizations of degree sequences with a forbidden star and 1-factor")]
pub struct Cli {
    #[command(flatten)]
    pub opts: Options,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Chain length; defaults to the heuristic burn-in for the instance.
    #[arg(long, global = true)]
    pub steps: Option<u64>,
    #[arg(long = "burn-in", global = true)]
    pub burn_in: Option<u64>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long = "max-states", global = true, default_value_t = DEFAULT_MAX_STATES)]
    pub max_states: usize,
    #[arg(long = "max-delta", global = true, default_value_t = DEFAULT_MAX_DELTA)]
    pub max_delta: usize,
    /// Worker threads for parallel chains; 0 lets the runtime decide.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide graphicality with the greedy construction.
    Check { instance: PathBuf },
    /// Print the greedy realization.
    Construct { instance: PathBuf },
    /// Independent chain end states, one chain per sample.
    Sample {
        instance: PathBuf,
        /// Start realization (file or inline edge list); defaults to greedy.
        #[arg(long)]
        start: Option<String>,
    },
    /// List every realization.
    Enumerate { instance: PathBuf },
    /// Count realizations exactly or by self-reduction with the chain.
    Count {
        instance: PathBuf,
        #[arg(long, conflicts_with = "approx", required_unless_present = "approx")]
        exact: bool,
        #[arg(long)]
        approx: bool,
    },
    /// Swap distance between two realizations.
    Distance {
        instance: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Exact transition matrix and its spectrum.
    Kernel { instance: PathBuf },
    /// Canonical paths with audits, for one pair or all pairs.
    AuditPaths {
        instance: PathBuf,
        #[arg(long, requires = "to")]
        from: Option<String>,
        #[arg(long, requires = "from")]
        to: Option<String>,
    },
    /// Bipartite form of a directed instance, and arcs of a realization.
    ConvertDirected {
        instance: PathBuf,
        #[arg(long)]
        realization: Option<String>,
    },
    /// Proposal throughput and kernel build time.
    Bench { instance: PathBuf },
}

/// A finished command: the payload and the exit code.
pub struct Outcome {
    pub report: Value,
    pub code: i32,
}

impl Outcome {
    fn ok(report: Value) -> Self {
        Outcome { report, code: 0 }
    }

    fn decided(report: Value, positive: bool) -> Self {
        Outcome { report, code: if positive { 0 } else { 1 } }
    }
}

fn read_instance(path: &Path) -> Result<Instance, KitError> {
    parse_instance(&std::fs::read_to_string(path)?)
}

/// Inline JSON when the argument looks like JSON, otherwise a file path.
fn read_realization(inst: &Instance, arg: &str) -> Result<Realization, KitError> {
    let t = arg.trim_start();
    if t.starts_with('[') || t.starts_with('{') {
        parse_realization(inst, arg)
    } else {
        parse_realization(inst, &std::fs::read_to_string(arg)?)
    }
}

fn not_graphical(command: &str) -> Outcome {
    Outcome::decided(report::tagged(command, json!({ "graphical": false })), false)
}

pub fn execute(cli: &Cli) -> Result<Outcome, KitError> {
    let o = &cli.opts;
    match &cli.command {
        Command::Check { instance } => {
            let inst = read_instance(instance)?;
            let r = greedy_construct(&inst);
            Ok(Outcome::decided(report::check(&inst, r.as_ref()), r.is_some()))
        }
        Command::Construct { instance } => {
            let inst = read_instance(instance)?;
            let r = greedy_construct(&inst);
            Ok(Outcome::decided(report::construct(&inst, r.as_ref()), r.is_some()))
        }
        Command::Sample { instance, start } => {
            let inst = read_instance(instance)?;
            let start = match start {
                Some(s) => read_realization(&inst, s)?,
                None => match greedy_construct(&inst) {
                    Some(r) => r,
                    None => return Ok(not_graphical("sample")),
                },
            };
            let config = SampleConfig {
                seed: o.seed,
                steps: o.steps.unwrap_or_else(|| default_burn_in(&inst)),
                samples: o.samples.unwrap_or(1),
            };
            let ends = parallel_samples(&inst, &start, &config)?;
            Ok(Outcome::ok(report::sample(&inst, &config, &ends)))
        }
        Command::Enumerate { instance } => {
            let inst = read_instance(instance)?;
            let all = enumerate_bounded(&inst, DEFAULT_MAX_CHORDS, o.max_states)?;
            Ok(Outcome::ok(report::enumerate(&inst, &all)))
        }
        Command::Count { instance, exact, .. } => {
            let inst = read_instance(instance)?;
            let rep = if *exact {
                rds_core::count::CountReport::exact(&inst, exact_count(&inst, DEFAULT_MAX_CHORDS)?)
            } else {
                approx_count(&inst, &approx_config(o))?
            };
            Ok(Outcome::decided(report::count(&inst, &rep), rep.graphical))
        }
        Command::Distance { instance, from, to } => {
            let inst = read_instance(instance)?;
            let g = read_realization(&inst, from)?;
            let h = read_realization(&inst, to)?;
            Ok(Outcome::ok(report::distance(&swap_distance(&g, &h, o.max_delta)?)))
        }
        Command::Kernel { instance } => {
            let inst = read_instance(instance)?;
            let k = exact_kernel(&inst, o.max_states)?;
            Ok(Outcome::ok(report::kernel(&inst, &k, &kernel_eigenvalues(&k))))
        }
        Command::AuditPaths { instance, from, to } => {
            let inst = read_instance(instance)?;
            let all = enumerate_bounded(&inst, DEFAULT_MAX_CHORDS, o.max_states)?;
            if let (Some(f), Some(t)) = (from, to) {
                let x = read_realization(&inst, f)?;
                let y = read_realization(&inst, t)?;
                let p = canonical_path(&inst, &x, &y, Some(&all))?;
                let ok = p.first_failure().is_none();
                return Ok(Outcome::decided(report::path(&inst, &p), ok));
            }
            let s = audit_all_pairs(&inst, &all)?;
            let ok = s.failures == 0;
            Ok(Outcome::decided(report::path_summary(&s), ok))
        }
        Command::ConvertDirected { instance, realization } => {
            let inst = read_instance(instance)?;
            let arcs = match realization {
                Some(r) => Some(to_directed(&inst, &read_realization(&inst, r)?)?),
                None => {
                    if inst.kind() != rds_core::Kind::Directed {
                        return Err(rds_core::Error::NotDirectedKind.into());
                    }
                    None
                }
            };
            Ok(Outcome::ok(report::convert_directed(&inst, arcs.as_deref())))
        }
        Command::Bench { instance } => bench(&read_instance(instance)?, o),
    }
}

pub fn approx_config(o: &Options) -> ApproxConfig {
    let d = ApproxConfig::default();
    ApproxConfig {
        samples_per_level: o.samples.unwrap_or(d.samples_per_level),
        burn_in: o.burn_in.or(o.steps),
        seed: o.seed,
        ..d
    }
}

/// End states of chains `0..samples`; the result does not depend on the
/// number of worker threads.
pub fn parallel_samples(
    inst: &Instance,
    start: &Realization,
    config: &SampleConfig,
) -> Result<Vec<Realization>, KitError> {
    (0..config.samples as u64)
        .into_par_iter()
        .map(|i| sample_chain(inst, start, config.steps, config.seed, i))
        .collect::<Result<Vec<_>, _>>()
        .map_err(KitError::from)
}

/// Audits the canonical path between every ordered pair of distinct states.
pub fn audit_all_pairs(inst: &Instance, all: &[Realization]) -> Result<PathSummary, KitError> {
    let n = all.len();
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect();
    let reports = pairs
        .par_iter()
        .map(|&(i, j)| canonical_path(inst, &all[i], &all[j], Some(all)).map(|p| (i, j, p)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut s = PathSummary { states: n, ..Default::default() };
    for (i, j, p) in &reports {
        s.add(*i, *j, p);
    }
    Ok(s)
}

fn bench(inst: &Instance, o: &Options) -> Result<Outcome, KitError> {
    let Some(start) = greedy_construct(inst) else {
        return Ok(not_graphical("bench"));
    };
    let steps = o.steps.unwrap_or(100_000);
    let mut state = ChainState::new(start, o.seed);
    let mut accepted = 0u64;
    let t = Instant::now();
    for _ in 0..steps {
        if propose_step(inst, &mut state)?.1 {
            accepted += 1;
        }
    }
    let chain_secs = t.elapsed().as_secs_f64();
    let t = Instant::now();
    let kernel = exact_kernel(inst, o.max_states).ok().map(|k| k.states.len());
    let kernel_secs = t.elapsed().as_secs_f64();
    Ok(Outcome::ok(report::tagged(
        "bench",
        json!({
            "config": { "seed": o.seed, "steps": steps, "max_states": o.max_states },
            "accepted": accepted,
            "proposals_per_second": steps as f64 / chain_secs.max(1e-9),
            "kernel_states": kernel,
            "kernel_seconds": kernel.map(|_| kernel_secs),
        }),
    )))
}

/// Parses `args` (program name first), runs the command and writes the
/// report to `out`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = if cli.opts.threads > 0 {
        match rayon::ThreadPoolBuilder::new().num_threads(cli.opts.threads).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(KitError::Usage(e.to_string())),
        }
    } else {
        execute(&cli)
    };
    match result {
        Ok(o) => {
            if out.write_all(report::render(&o.report).as_bytes()).is_err() {
                return 2;
            }
            o.code
        }
        Err(e) => {
            let code = e.exit_code();
            let _ = writeln!(err, "error: {e}");
            code
        }
    }
}
