//! Human-readable and key=value renderings of results.

use std::fmt::Write;
use std::path::Path;

use clap::ValueEnum;
use gsynth_core::bmc::{ProbeResult, SynthesisOutcome, UnreachableReason, Verdict};
use gsynth_core::graph::{Operation, Pair};
use gsynth_core::oracle::ReachabilityResult;
use gsynth_core::witness::format_ops;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// One `key=value` pair per line.
    Kv,
}

fn ops_inline(ops: &[Operation], flips: &[Pair]) -> String {
    format_ops(ops, flips).lines().collect::<Vec<_>>().join(";")
}

fn probe_label(r: &ProbeResult) -> &'static str {
    match r {
        ProbeResult::Sat => "sat",
        ProbeResult::Unsat => "unsat",
        ProbeResult::Unknown(_) => "unknown",
    }
}

fn reason(outcome: &SynthesisOutcome) -> Option<String> {
    match &outcome.verdict {
        Verdict::Reachable(_) => None,
        Verdict::Unreachable(UnreachableReason::IsolatedInSource(vs)) => Some(format!(
            "vertices {vs:?} are isolated in the source but not in the target"
        )),
        Verdict::Unreachable(UnreachableReason::Threshold(t)) => {
            Some(format!("unsatisfiable at the completeness threshold of {t} transitions"))
        }
        Verdict::Unknown(r) => Some(r.clone()),
    }
}

pub fn synth_report(
    outcome: &SynthesisOutcome,
    flips: &[Pair],
    solver: &str,
    witness_path: Option<&Path>,
    format: Format,
) -> String {
    let mut s = String::new();
    let w = match &outcome.verdict {
        Verdict::Reachable(w) => Some(w),
        _ => None,
    };
    match format {
        Format::Text => {
            writeln!(s, "verdict: {}", outcome.verdict.label()).unwrap();
            if let Some(r) = reason(outcome) {
                writeln!(s, "reason: {r}").unwrap();
            }
            writeln!(s, "solver: {solver}").unwrap();
            if let Some(t) = outcome.threshold {
                writeln!(
                    s,
                    "threshold: {} transitions ({} LC + {} deletions)",
                    t.max_transitions, t.max_lc, t.delta
                )
                .unwrap();
            } else if outcome.search_limit > 0 {
                writeln!(s, "depth cap: {} transitions", outcome.search_limit).unwrap();
            }
            if let Some(w) = w {
                writeln!(s, "witness length: {}", w.len()).unwrap();
                for line in format_ops(&w.ops, flips).lines() {
                    writeln!(s, "  {line}").unwrap();
                }
                if let Some(p) = witness_path {
                    writeln!(s, "witness file: {}", p.display()).unwrap();
                }
            }
            if !outcome.stats.is_empty() {
                writeln!(
                    s,
                    "{:>6}  {:>7}  {:>9}  {:>10}  {:>10}  {:>10}",
                    "states", "result", "vars", "clauses", "encode_s", "solve_s"
                )
                .unwrap();
                for st in &outcome.stats {
                    writeln!(
                        s,
                        "{:>6}  {:>7}  {:>9}  {:>10}  {:>10.4}  {:>10.4}",
                        st.states,
                        probe_label(&st.result),
                        st.vars,
                        st.clauses,
                        st.encode_time.as_secs_f64(),
                        st.solve_time.as_secs_f64()
                    )
                    .unwrap();
                }
            }
            writeln!(s, "total solver time: {:.4} s", outcome.total_solve_time().as_secs_f64()).unwrap();
        }
        Format::Kv => {
            writeln!(s, "verdict={}", outcome.verdict.label()).unwrap();
            if let Some(r) = reason(outcome) {
                writeln!(s, "reason={r}").unwrap();
            }
            writeln!(s, "solver={solver}").unwrap();
            if let Some(t) = outcome.threshold {
                writeln!(s, "threshold={}", t.max_transitions).unwrap();
            }
            writeln!(s, "search_limit={}", outcome.search_limit).unwrap();
            writeln!(s, "depth_explored={}", outcome.depth_explored).unwrap();
            writeln!(s, "interrupted={}", outcome.interrupted).unwrap();
            if let Some(w) = w {
                writeln!(s, "found_states={}", outcome.found_states.unwrap_or(0)).unwrap();
                writeln!(s, "witness_length={}", w.len()).unwrap();
                writeln!(s, "witness={}", ops_inline(&w.ops, flips)).unwrap();
                if let Some(p) = witness_path {
                    writeln!(s, "witness_file={}", p.display()).unwrap();
                }
            }
            for st in &outcome.stats {
                writeln!(
                    s,
                    "probe={} {} {} {} {:.6} {:.6}",
                    st.states,
                    probe_label(&st.result),
                    st.vars,
                    st.clauses,
                    st.encode_time.as_secs_f64(),
                    st.solve_time.as_secs_f64()
                )
                .unwrap();
            }
            writeln!(s, "total_solve_seconds={:.6}", outcome.total_solve_time().as_secs_f64()).unwrap();
        }
    }
    s
}

pub fn oracle_report(r: &ReachabilityResult, flips: &[Pair], witness_path: Option<&Path>, format: Format) -> String {
    let verdict = if r.reachable { "reachable" } else { "unreachable" };
    let mut s = String::new();
    match format {
        Format::Text => {
            writeln!(s, "verdict: {verdict}").unwrap();
            writeln!(s, "explored: {} graphs", r.explored).unwrap();
            if let Some(len) = r.shortest_length {
                writeln!(s, "shortest length: {len}").unwrap();
                for line in format_ops(&r.witness, flips).lines() {
                    writeln!(s, "  {line}").unwrap();
                }
                if let Some(p) = witness_path {
                    writeln!(s, "witness file: {}", p.display()).unwrap();
                }
            }
        }
        Format::Kv => {
            writeln!(s, "verdict={verdict}").unwrap();
            writeln!(s, "explored={}", r.explored).unwrap();
            if let Some(len) = r.shortest_length {
                writeln!(s, "witness_length={len}").unwrap();
                writeln!(s, "witness={}", ops_inline(&r.witness, flips)).unwrap();
                if let Some(p) = witness_path {
                    writeln!(s, "witness_file={}", p.display()).unwrap();
                }
            }
        }
    }
    s
}
