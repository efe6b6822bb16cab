//! Seed sweeps over generated instance families.

use std::fmt::Write;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use clap::ValueEnum;
use gsynth_core::bmc::{synthesize, SearchOptions, Verdict};
use gsynth_core::generate::{er_ghz_instance, network_ghz_instance, FlipPolicy};
use gsynth_core::SatBackend;

use crate::exit::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Erdős–Rényi source, GHZ target on the first parties.
    Er,
    /// Built-in 14-node network, GHZ target on its end nodes.
    Network,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Text,
    Csv,
}

#[derive(Clone, Debug)]
pub struct Job {
    pub family: Family,
    pub n: usize,
    pub p: f64,
    pub seed: u64,
    pub parties: usize,
    pub flips: FlipPolicy,
}

#[derive(Clone, Debug)]
pub struct Row {
    pub job: Job,
    pub flip_count: usize,
    /// reachable, unreachable, unknown or timeout.
    pub verdict: &'static str,
    pub found_states: Option<usize>,
    pub witness_len: Option<usize>,
    pub probes: usize,
    pub solve_seconds: f64,
}

fn run_job(job: &Job, backend: &dyn SatBackend, options: &SearchOptions) -> Result<Row, CliError> {
    let file = match job.family {
        Family::Er => er_ghz_instance(job.n, job.p, job.seed, job.parties, job.flips)?,
        Family::Network => network_ghz_instance(job.p, job.seed, job.flips)?,
    };
    let out = synthesize(&file.instance, backend, options)?;
    let verdict = match &out.verdict {
        Verdict::Reachable(_) => "reachable",
        Verdict::Unreachable(_) => "unreachable",
        Verdict::Unknown(_) if out.interrupted => "timeout",
        Verdict::Unknown(_) => "unknown",
    };
    let witness_len = match &out.verdict {
        Verdict::Reachable(w) => Some(w.len()),
        _ => None,
    };
    Ok(Row {
        job: job.clone(),
        flip_count: file.instance.flips().len(),
        verdict,
        found_states: out.found_states,
        witness_len,
        probes: out.stats.len(),
        solve_seconds: out.total_solve_time().as_secs_f64(),
    })
}

/// Runs every job on up to `workers` threads; rows come back in job order.
pub fn run(jobs: &[Job], backend: &dyn SatBackend, options: &SearchOptions, workers: usize) -> Result<Vec<Row>, CliError> {
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<Row, CliError>>>> = Mutex::new((0..jobs.len()).map(|_| None).collect());
    thread::scope(|scope| {
        for _ in 0..workers.clamp(1, jobs.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(job) = jobs.get(i) else { break };
                let row = run_job(job, backend, options);
                log::info!("{:?} n={} p={} seed={} done", job.family, job.n, job.p, job.seed);
                slots.lock().expect("no worker panicked")[i] = Some(row);
            });
        }
    });
    slots
        .into_inner()
        .expect("no worker panicked")
        .into_iter()
        .map(|r| r.expect("every job ran"))
        .collect()
}

fn opt(v: Option<usize>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "-".into())
}

pub fn render(rows: &[Row], format: TableFormat, timing: bool) -> String {
    let mut header = vec!["family", "n", "p", "seed", "flips", "verdict", "found_states", "witness_len", "probes"];
    if timing {
        header.push("solve_seconds");
    }
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut cells = vec![
                match r.job.family {
                    Family::Er => "er".to_string(),
                    Family::Network => "network".to_string(),
                },
                r.job.n.to_string(),
                r.job.p.to_string(),
                r.job.seed.to_string(),
                r.flip_count.to_string(),
                r.verdict.to_string(),
                opt(r.found_states),
                opt(r.witness_len),
                r.probes.to_string(),
            ];
            if timing {
                cells.push(format!("{:.4}", r.solve_seconds));
            }
            cells
        })
        .collect();

    let mut s = String::new();
    match format {
        TableFormat::Csv => {
            writeln!(s, "{}", header.join(",")).unwrap();
            for row in &table {
                writeln!(s, "{}", row.join(",")).unwrap();
            }
        }
        TableFormat::Text => {
            let widths: Vec<usize> = (0..header.len())
                .map(|c| table.iter().map(|r| r[c].len()).chain([header[c].len()]).max().unwrap_or(0))
                .collect();
            let line = |cells: Vec<&str>| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            writeln!(s, "{}", line(header.clone())).unwrap();
            for row in &table {
                writeln!(s, "{}", line(row.iter().map(String::as_str).collect())).unwrap();
            }
        }
    }
    s
}
