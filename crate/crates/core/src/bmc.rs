//! Depth search over the bounded unrolling.
//!
//! Satisfiability is monotone in the number of states because a transition
//! may always pick the identity, so the smallest satisfiable depth is found by
//! binary search. Under LC+VD the search stops at a completeness threshold:
//! UNSAT there means the target is unreachable at any depth. With edge flips
//! no such threshold is known and the search stops at a caller-supplied cap.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use log::{debug, info};

use crate::cnf::SolveResult;
use crate::encoder::{encode_search, SynthesisInstance};
use crate::error::{Error, Result};
use crate::solver::SatBackend;
use crate::witness::{decode, replay_verify, strip_identities, Witness};

/// Bound on the transitions needed under LC+VD.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ThresholdInfo {
    /// Local complementations that always suffice between LC-equivalent
    /// graphs: `3(n - s)/2` with `s = n mod 2`.
    pub max_lc: usize,
    /// Vertices isolated in the target but not in the source.
    pub delta: usize,
    /// `max_lc + delta`.
    pub max_transitions: usize,
}

pub fn completeness_threshold(inst: &SynthesisInstance) -> ThresholdInfo {
    let n = inst.n();
    let max_lc = 3 * (n - n % 2) / 2;
    let source_iso = inst.source().isolated_vertices();
    let delta = inst
        .target()
        .isolated_vertices()
        .difference(&source_iso)
        .count();
    ThresholdInfo {
        max_lc,
        delta,
        max_transitions: max_lc + delta,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TrivialCheck {
    Pass,
    /// These vertices are isolated in the source but have edges in the
    /// target; LC and VD never give an isolated vertex an edge.
    TriviallyUnreachable(BTreeSet<usize>),
}

/// Skipped (always passes) when the instance allows edge flips.
pub fn trivial_unreachable_check(inst: &SynthesisInstance) -> TrivialCheck {
    if !inst.flips().is_empty() {
        return TrivialCheck::Pass;
    }
    let target_iso = inst.target().isolated_vertices();
    let stuck: BTreeSet<usize> = inst
        .source()
        .isolated_vertices()
        .difference(&target_iso)
        .copied()
        .collect();
    if stuck.is_empty() {
        TrivialCheck::Pass
    } else {
        TrivialCheck::TriviallyUnreachable(stuck)
    }
}

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    /// Wall-clock limit for a single solver call.
    pub per_solve: Option<Duration>,
    /// Wall-clock budget for the whole search.
    pub total: Option<Duration>,
    /// Largest number of transitions tried when edge flips are allowed.
    /// Defaults to [`default_flip_depth_cap`].
    pub depth_cap: Option<usize>,
    /// Solve the bare unrolling without the canonical-order clauses of
    /// [`encode_canonical_order`](crate::encoder::encode_canonical_order).
    pub plain_encoding: bool,
}

/// Transition cap used with edge flips when none is given: the LC+VD
/// threshold plus one transition per allowed flip.
pub fn default_flip_depth_cap(inst: &SynthesisInstance) -> usize {
    completeness_threshold(inst).max_transitions + inst.flips().len()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeResult {
    Sat,
    Unsat,
    Unknown(String),
}

/// Measurements for one probed depth.
#[derive(Clone, Debug)]
pub struct DepthStat {
    /// Number of states in the unrolling (transitions + 1).
    pub states: usize,
    pub result: ProbeResult,
    pub vars: u32,
    pub clauses: usize,
    pub encode_time: Duration,
    pub solve_time: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnreachableReason {
    /// Source-isolated vertices that the target connects.
    IsolatedInSource(BTreeSet<usize>),
    /// UNSAT at the completeness threshold, given in transitions.
    Threshold(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Reachable(Witness),
    Unreachable(UnreachableReason),
    Unknown(String),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Reachable(_) => "reachable",
            Verdict::Unreachable(_) => "unreachable",
            Verdict::Unknown(_) => "unknown",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SynthesisOutcome {
    pub verdict: Verdict,
    /// States of the satisfiable unrolling the witness came from, if any.
    pub found_states: Option<usize>,
    /// Largest unrolling probed.
    pub depth_explored: usize,
    /// Upper end of the search window in transitions.
    pub search_limit: usize,
    /// Present only for LC+VD instances.
    pub threshold: Option<ThresholdInfo>,
    /// The search stopped early on a time limit or a solver that gave up.
    pub interrupted: bool,
    pub stats: Vec<DepthStat>,
}

impl SynthesisOutcome {
    /// Summed solver wall time over all probes.
    pub fn total_solve_time(&self) -> Duration {
        self.stats.iter().map(|s| s.solve_time).sum()
    }
}

/// Finds the shortest unrolling containing a transformation from source to
/// target and returns the replay-verified operation sequence.
///
/// Returns an error if a satisfying model fails to replay against the graph
/// semantics; that indicates an encoding bug, not a property of the instance.
pub fn synthesize(
    inst: &SynthesisInstance,
    backend: &dyn SatBackend,
    options: &SearchOptions,
) -> Result<SynthesisOutcome> {
    let started = Instant::now();
    let lc_vd_only = inst.flips().is_empty();
    let threshold = lc_vd_only.then(|| completeness_threshold(inst));

    if let TrivialCheck::TriviallyUnreachable(stuck) = trivial_unreachable_check(inst) {
        return Ok(SynthesisOutcome {
            verdict: Verdict::Unreachable(UnreachableReason::IsolatedInSource(stuck)),
            found_states: None,
            depth_explored: 0,
            search_limit: 0,
            threshold,
            interrupted: false,
            stats: Vec::new(),
        });
    }

    let max_transitions = match threshold {
        Some(t) => t.max_transitions,
        None => options.depth_cap.unwrap_or_else(|| default_flip_depth_cap(inst)),
    };

    let mut stats = Vec::new();
    let mut best: Option<(usize, Witness)> = None;
    let mut stopped: Option<String> = None;
    let (mut lo, mut hi) = (1usize, max_transitions + 1);

    while lo <= hi {
        let remaining = match options.total {
            Some(total) => match total.checked_sub(started.elapsed()) {
                Some(r) if !r.is_zero() => Some(r),
                _ => {
                    stopped = Some(format!("global budget of {:.1}s exhausted", total.as_secs_f64()));
                    break;
                }
            },
            None => None,
        };
        let time_limit = match (options.per_solve, remaining) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };

        let states = lo + (hi - lo) / 2;
        let t0 = Instant::now();
        let enc = encode_search(inst, states, !options.plain_encoding)?;
        let encode_time = t0.elapsed();
        let t1 = Instant::now();
        let answer = backend.solve(&enc.formula, time_limit)?;
        let solve_time = t1.elapsed();
        debug!(
            "depth {states}: {} vars, {} clauses, {:?}",
            enc.formula.num_vars(),
            enc.formula.num_clauses(),
            solve_time
        );

        let mut stat = DepthStat {
            states,
            result: ProbeResult::Unsat,
            vars: enc.formula.num_vars(),
            clauses: enc.formula.num_clauses(),
            encode_time,
            solve_time,
        };
        match answer {
            SolveResult::Sat(model) => {
                stat.result = ProbeResult::Sat;
                stats.push(stat);
                let raw = decode(&model, &enc.layout, inst.flips())?;
                let witness = strip_identities(&raw);
                if let Err(d) = replay_verify(inst, &witness) {
                    return Err(Error::Solver(format!(
                        "decoded witness failed replay at step {}: {}",
                        d.step, d.reason
                    )));
                }
                best = Some((states, witness));
                hi = states - 1;
            }
            SolveResult::Unsat => {
                stats.push(stat);
                lo = states + 1;
            }
            SolveResult::Unknown(reason) => {
                stat.result = ProbeResult::Unknown(reason.clone());
                stats.push(stat);
                stopped = Some(format!("solver gave up at {states} states: {reason}"));
                break;
            }
        }
    }

    let depth_explored = stats.iter().map(|s| s.states).max().unwrap_or(0);
    let interrupted = stopped.is_some();
    let (verdict, found_states) = match (best, stopped) {
        (Some((states, w)), _) => (Verdict::Reachable(w), Some(states)),
        (None, Some(reason)) => (Verdict::Unknown(reason), None),
        (None, None) if lc_vd_only => (
            Verdict::Unreachable(UnreachableReason::Threshold(max_transitions)),
            None,
        ),
        (None, None) => (
            Verdict::Unknown(format!(
                "no transformation within {max_transitions} transitions; \
                 edge flips have no completeness threshold"
            )),
            None,
        ),
    };
    info!(
        "{}: {} after {} probes",
        backend.name(),
        verdict.label(),
        stats.len()
    );
    Ok(SynthesisOutcome {
        verdict,
        found_states,
        depth_explored,
        search_limit: max_transitions,
        threshold,
        interrupted,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn g(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges.iter().copied()).unwrap()
    }

    #[test]
    fn threshold_examples() {
        let k4 = Graph::complete(4);
        let t = completeness_threshold(&SynthesisInstance::new(k4.clone(), k4, vec![]).unwrap());
        assert_eq!((t.max_lc, t.delta, t.max_transitions), (6, 0, 6));

        let c5 = g(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]);
        let t5 = g(5, &[(0, 1), (1, 2), (2, 3)]);
        let t = completeness_threshold(&SynthesisInstance::new(c5, t5, vec![]).unwrap());
        assert_eq!((t.max_lc, t.delta, t.max_transitions), (6, 1, 7));

        let s = g(6, &[(0, 4), (1, 4), (0, 2), (0, 5), (3, 5)]);
        let ghz = g(6, &[(0, 1), (0, 2), (0, 3)]);
        let t = completeness_threshold(&SynthesisInstance::new(s, ghz, vec![]).unwrap());
        assert_eq!((t.max_lc, t.delta, t.max_transitions), (9, 2, 11));
    }

    #[test]
    fn delta_ignores_vertices_isolated_in_both() {
        let s = g(4, &[(0, 1), (1, 2)]);
        let t = g(4, &[(0, 1)]);
        let info = completeness_threshold(&SynthesisInstance::new(s, t, vec![]).unwrap());
        assert_eq!(info.delta, 1);
    }

    #[test]
    fn trivial_check_examples() {
        let inst = SynthesisInstance::new(g(3, &[(0, 1)]), g(3, &[(0, 2)]), vec![]).unwrap();
        assert_eq!(
            trivial_unreachable_check(&inst),
            TrivialCheck::TriviallyUnreachable(BTreeSet::from([2]))
        );
        let inst = SynthesisInstance::new(
            Graph::complete(4),
            g(4, &[(0, 1), (0, 2), (0, 3)]),
            vec![],
        )
        .unwrap();
        assert_eq!(trivial_unreachable_check(&inst), TrivialCheck::Pass);
        let inst = SynthesisInstance::new(Graph::empty(3), Graph::empty(3), vec![]).unwrap();
        assert_eq!(trivial_unreachable_check(&inst), TrivialCheck::Pass);
        let inst =
            SynthesisInstance::new(g(3, &[(0, 1)]), g(3, &[(0, 2)]), vec![(0, 2)]).unwrap();
        assert_eq!(trivial_unreachable_check(&inst), TrivialCheck::Pass);
    }
}
