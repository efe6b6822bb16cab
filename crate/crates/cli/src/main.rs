mod bench;
mod config;
mod exit;
mod report;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use gsynth_core::bmc::{synthesize, Verdict};
use gsynth_core::encoder::encode_bmc;
use gsynth_core::generate::{builtin_network_14, er_ghz_instance, network_ghz_instance, Demo, FlipPolicy};
use gsynth_core::oracle::{reachable_bfs, DEFAULT_STATE_CAP};
use gsynth_core::witness::{format_ops, parse_ops, replay_verify, Witness};
use gsynth_core::InstanceFile;

use crate::bench::{Family, Job, TableFormat};
use crate::config::{FileConfig, SolverChoice};
use crate::exit::*;
use crate::report::Format;

#[derive(Parser, Debug)]
#[command(name = "gsynth", version, about = "Synthesize graph-state transformations with a SAT solver")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// External DIMACS solver binary. Falls back to $GSYNTH_SOLVER, the
    /// config file, then the built-in solver.
    #[arg(long, global = true, value_name = "PATH")]
    solver: Option<PathBuf>,
    /// Extra argument for the external solver (repeatable).
    #[arg(long = "solver-arg", global = true, value_name = "ARG", allow_hyphen_values = true)]
    solver_args: Vec<String>,
    /// Use the built-in solver even if an external one is configured.
    #[arg(long, global = true)]
    in_process: bool,
    /// TOML file with solver and limit defaults.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Log progress to stderr (-vv for per-depth detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Args, Debug)]
struct LimitArgs {
    /// Wall-clock limit per solver call, in seconds.
    #[arg(long, value_name = "SECS")]
    per_solve: Option<f64>,
    /// Wall-clock budget for the whole depth search, in seconds.
    #[arg(long, value_name = "SECS")]
    budget: Option<f64>,
    /// Largest number of transitions tried when edge flips are allowed.
    #[arg(long, value_name = "N")]
    depth_cap: Option<usize>,
    /// Solve the bare unrolling, without the clauses that fix a canonical
    /// operation order. Verdicts and witness lengths are the same either way.
    #[arg(long)]
    plain_encoding: bool,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the witness (one operation per line) to this file.
    #[arg(long, value_name = "FILE")]
    witness_out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate an instance file.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        /// Output file; stdout when omitted.
        #[arg(short, long, global = true, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Write the bounded unrolling as DIMACS plus a layout sidecar.
    Encode {
        instance: PathBuf,
        /// Number of states in the unrolling (transitions + 1).
        #[arg(short = 'd', long)]
        states: usize,
        /// Output prefix: writes PREFIX.cnf and PREFIX.layout.
        #[arg(short, long, value_name = "PREFIX")]
        out: PathBuf,
    },
    /// Find a shortest transformation or prove there is none.
    ///
    /// Exit status: 0 reachable, 1 unreachable, 2 unknown.
    Synth {
        instance: PathBuf,
        #[command(flatten)]
        limits: LimitArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Replay a witness against an instance. Exit status 0 on pass, 1 on fail.
    Verify { instance: PathBuf, witness: PathBuf },
    /// Exhaustive breadth-first search, for cross-checking small instances.
    ///
    /// Exit status: 0 reachable, 1 unreachable, 2 state cap exceeded.
    Oracle {
        instance: PathBuf,
        /// Give up after storing this many graphs.
        #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
        state_cap: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run `synth` over a seeded family and print a results table.
    Bench {
        #[arg(long, value_enum, default_value = "er")]
        family: Family,
        /// Vertex counts, as `5-8` or `5,6,7` (ignored for the network family).
        #[arg(long, value_parser = parse_counts, default_value = "5-8")]
        n: Counts,
        /// Edge probabilities, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0.8")]
        p: Vec<f64>,
        /// Seeds per (n, p) combination.
        #[arg(long, default_value_t = 3)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        first_seed: u64,
        /// GHZ parties for the er family.
        #[arg(long, default_value_t = 4)]
        parties: usize,
        /// Flip set per instance: `none`, `half` (n/2 pairs) or a count.
        #[arg(long, value_parser = parse_flip_policy, default_value = "none")]
        flips: FlipPolicy,
        /// Parallel worker threads.
        #[arg(short, long, default_value_t = 1)]
        jobs: usize,
        /// Leave out the solver-time column so reruns are byte-identical.
        #[arg(long)]
        no_timing: bool,
        #[arg(long, value_enum, default_value = "text")]
        table: TableFormat,
        /// Output file; stdout when omitted.
        #[arg(short, long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[command(flatten)]
        limits: LimitArgs,
    },
}

#[derive(Subcommand, Debug)]
enum GenKind {
    /// Erdős–Rényi source with a GHZ target on vertices 0..parties.
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        parties: usize,
        #[arg(long, value_parser = parse_flip_policy, default_value = "none")]
        flips: FlipPolicy,
    },
    /// Built-in 14-node network with a GHZ target on its end nodes.
    Network {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_parser = parse_flip_policy, default_value = "none")]
        flips: FlipPolicy,
    },
    /// A built-in example: star-to-complete, complete-to-triangle, secret-sharing.
    Demo { name: String },
    /// Print the built-in network's nodes and links.
    Topology,
}

#[derive(Clone, Debug)]
struct Counts(Vec<usize>);

fn parse_counts(s: &str) -> Result<Counts, String> {
    let bad = |e: std::num::ParseIntError| e.to_string();
    if let Some((a, b)) = s.split_once('-') {
        let (a, b) = (a.trim().parse::<usize>().map_err(bad)?, b.trim().parse::<usize>().map_err(bad)?);
        if a > b {
            return Err(format!("empty range {s}"));
        }
        return Ok(Counts((a..=b).collect()));
    }
    s.split(',')
        .map(|x| x.trim().parse::<usize>().map_err(bad))
        .collect::<Result<Vec<_>, _>>()
        .map(Counts)
}

fn parse_flip_policy(s: &str) -> Result<FlipPolicy, String> {
    match s {
        "none" => Ok(FlipPolicy::None),
        "half" => Ok(FlipPolicy::HalfVertices),
        _ => usize::from_str(s)
            .map(FlipPolicy::Count)
            .map_err(|_| format!("expected `none`, `half` or a count, got `{s}`")),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EX_USAGE } else { 0 });
        }
    };
    let level = match cli.global.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).parse_env("GSYNTH_LOG").init();

    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("gsynth: {e}");
            ExitCode::from(e.code)
        }
    }
}

fn read_instance(path: &Path) -> Result<InstanceFile, CliError> {
    InstanceFile::read(path).map_err(|e| CliError::reading(path, e))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let file_cfg = FileConfig::load(cli.global.config.as_deref())?;
    let solver = || {
        let choice = config::choose_solver(
            cli.global.solver.as_deref(),
            &cli.global.solver_args,
            cli.global.in_process,
            &file_cfg,
        );
        if let SolverChoice::External { program, .. } = &choice {
            log::info!("external solver {}", program.display());
        }
        config::build_backend(&choice)
    };

    match &cli.command {
        Command::Gen { kind, out } => {
            let text = match kind {
                GenKind::Er { n, p, seed, parties, flips } => {
                    er_ghz_instance(*n, *p, *seed, *parties, *flips)?.to_string()
                }
                GenKind::Network { p, seed, flips } => network_ghz_instance(*p, *seed, *flips)?.to_string(),
                GenKind::Demo { name } => Demo::from_name(name)
                    .ok_or_else(|| {
                        let names: Vec<_> = Demo::ALL.iter().map(|d| d.name()).collect();
                        CliError::new(EX_USAGE, format!("unknown demo `{name}`; choose one of {}", names.join(", ")))
                    })?
                    .instance()
                    .to_string(),
                GenKind::Topology => {
                    let t = builtin_network_14();
                    let mut s = String::new();
                    for (i, name) in t.names.iter().enumerate() {
                        let end = if t.end_nodes.contains(&i) { " end" } else { "" };
                        s.push_str(&format!("node {i} {name}{end}\n"));
                    }
                    for (u, v) in &t.links {
                        s.push_str(&format!("link {u} {v}\n"));
                    }
                    s
                }
            };
            emit(out.as_deref(), &text)?;
            Ok(0)
        }

        Command::Encode { instance, states, out } => {
            if *states < 1 {
                return Err(CliError::new(EX_USAGE, "--states must be at least 1"));
            }
            let file = read_instance(instance)?;
            let enc = encode_bmc(&file.instance, *states)?;
            let cnf_path = out.with_extension("cnf");
            let layout_path = out.with_extension("layout");
            let mut w = io::BufWriter::new(fs::File::create(&cnf_path)?);
            enc.formula.write_dimacs(&mut w)?;
            w.flush()?;
            fs::write(&layout_path, enc.layout.to_string())?;
            println!(
                "p cnf {} {} -> {}, layout -> {}",
                enc.formula.num_vars(),
                enc.formula.num_clauses(),
                cnf_path.display(),
                layout_path.display()
            );
            Ok(0)
        }

        Command::Synth { instance, limits, output } => {
            let file = read_instance(instance)?;
            let limits = config::search_options(limits.per_solve, limits.budget, limits.depth_cap, limits.plain_encoding, &file_cfg)?;
            let backend = solver()?;
            let outcome = synthesize(&file.instance, backend.as_ref(), &limits)?;
            if let (Verdict::Reachable(w), Some(path)) = (&outcome.verdict, &output.witness_out) {
                fs::write(path, format_ops(&w.ops, file.instance.flips()))?;
            }
            print!(
                "{}",
                report::synth_report(
                    &outcome,
                    file.instance.flips(),
                    &backend.name(),
                    output.witness_out.as_deref().filter(|_| matches!(outcome.verdict, Verdict::Reachable(_))),
                    output.format,
                )
            );
            Ok(match outcome.verdict {
                Verdict::Reachable(_) => REACHABLE,
                Verdict::Unreachable(_) => UNREACHABLE,
                Verdict::Unknown(_) => UNKNOWN,
            })
        }

        Command::Verify { instance, witness } => {
            let file = read_instance(instance)?;
            let text = fs::read_to_string(witness).map_err(CliError::from)?;
            let ops = parse_ops(&text, file.instance.flips()).map_err(|e| CliError::reading(witness, e))?;
            let result = Witness::from_ops(file.instance.source(), ops, file.instance.flips())
                .map_err(|e| format!("operation not applicable: {e}"))
                .and_then(|w| replay_verify(&file.instance, &w).map_err(|d| format!("step {}: {}", d.step, d.reason)));
            match result {
                Ok(()) => {
                    println!("pass");
                    Ok(VERIFY_PASS)
                }
                Err(msg) => {
                    println!("fail: {msg}");
                    Ok(VERIFY_FAIL)
                }
            }
        }

        Command::Oracle { instance, state_cap, output } => {
            let file = read_instance(instance)?;
            let r = match reachable_bfs(&file.instance, *state_cap) {
                Ok(r) => r,
                Err(gsynth_core::Error::CapExceeded(cap)) => {
                    match output.format {
                        Format::Text => println!("verdict: unknown\nreason: state cap of {cap} graphs exceeded"),
                        Format::Kv => println!("verdict=unknown\nreason=state cap of {cap} graphs exceeded"),
                    }
                    return Ok(UNKNOWN);
                }
                Err(e) => return Err(e.into()),
            };
            if let (true, Some(path)) = (r.reachable, &output.witness_out) {
                fs::write(path, format_ops(&r.witness, file.instance.flips()))?;
            }
            print!(
                "{}",
                report::oracle_report(
                    &r,
                    file.instance.flips(),
                    output.witness_out.as_deref().filter(|_| r.reachable),
                    output.format
                )
            );
            Ok(if r.reachable { REACHABLE } else { UNREACHABLE })
        }

        Command::Bench {
            family,
            n,
            p,
            seeds,
            first_seed,
            parties,
            flips,
            jobs,
            no_timing,
            table,
            out,
            limits,
        } => {
            let limits = config::search_options(limits.per_solve, limits.budget, limits.depth_cap, limits.plain_encoding, &file_cfg)?;
            let sizes = match family {
                Family::Er => n.0.clone(),
                Family::Network => vec![builtin_network_14().node_count()],
            };
            let mut work = Vec::new();
            for &size in &sizes {
                for &prob in p {
                    for seed in *first_seed..first_seed + seeds {
                        work.push(Job {
                            family: *family,
                            n: size,
                            p: prob,
                            seed,
                            parties: *parties,
                            flips: *flips,
                        });
                    }
                }
            }
            let backend = solver()?;
            let rows = bench::run(&work, backend.as_ref(), &limits, *jobs)?;
            emit(out.as_deref(), &bench::render(&rows, *table, !no_timing))?;
            Ok(0)
        }
    }
}
