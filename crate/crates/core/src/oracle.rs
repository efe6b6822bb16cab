//! Exhaustive breadth-first reachability over graphs. Independent of the
//! CNF encoding; used to cross-check it on small instances.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::encoder::SynthesisInstance;
use crate::error::{Error, Result};
use crate::graph::{Graph, Operation, Pair};

/// Default bound on stored graphs: enough for every graph on 7 vertices.
pub const DEFAULT_STATE_CAP: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachabilityResult {
    pub reachable: bool,
    /// Minimal number of operations, when reachable.
    pub shortest_length: Option<usize>,
    /// A minimal operation sequence, empty when unreachable.
    pub witness: Vec<Operation>,
    /// Number of distinct graphs visited.
    pub explored: usize,
}

fn successors(g: &Graph, allow_vd: bool, flips: &[Pair]) -> impl Iterator<Item = Operation> {
    let n = g.n();
    let vd = if allow_vd { n } else { 0 };
    (0..n)
        .map(Operation::Lc)
        .chain((0..vd).map(Operation::Vd))
        .chain((0..flips.len()).map(Operation::Ef))
}

/// Shortest operation sequence from source to target using LC, VD and the
/// instance's edge flips.
pub fn reachable_bfs(inst: &SynthesisInstance, state_cap: usize) -> Result<ReachabilityResult> {
    let flips = inst.flips();
    let mut graphs: Vec<Graph> = vec![inst.source().clone()];
    let mut parent: Vec<Option<(usize, Operation)>> = vec![None];
    let mut index: HashMap<Graph, usize> = HashMap::from([(inst.source().clone(), 0)]);
    let mut queue = VecDeque::from([0usize]);

    let found = if inst.source() == inst.target() {
        Some(0)
    } else {
        let mut hit = None;
        'search: while let Some(cur) = queue.pop_front() {
            let g = graphs[cur].clone();
            for op in successors(&g, true, flips) {
                let next = g.apply(op, flips)?;
                if index.contains_key(&next) {
                    continue;
                }
                let id = graphs.len();
                index.insert(next.clone(), id);
                parent.push(Some((cur, op)));
                let is_target = &next == inst.target();
                graphs.push(next);
                if is_target {
                    hit = Some(id);
                    break 'search;
                }
                if graphs.len() > state_cap {
                    return Err(Error::CapExceeded(state_cap));
                }
                queue.push_back(id);
            }
        }
        hit
    };

    let explored = graphs.len();
    Ok(match found {
        Some(mut id) => {
            let mut witness = Vec::new();
            while let Some((p, op)) = parent[id] {
                witness.push(op);
                id = p;
            }
            witness.reverse();
            ReachabilityResult {
                reachable: true,
                shortest_length: Some(witness.len()),
                witness,
                explored,
            }
        }
        None => ReachabilityResult {
            reachable: false,
            shortest_length: None,
            witness: Vec::new(),
            explored,
        },
    })
}

/// Every graph reachable from `start` under LC, optionally VD, and flips of
/// the given pairs. With `allow_vd = false` and no flips this is the LC orbit.
pub fn reachable_set(
    start: &Graph,
    allow_vd: bool,
    flips: &[Pair],
    state_cap: usize,
) -> Result<HashSet<Graph>> {
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(g) = queue.pop_front() {
        for op in successors(&g, allow_vd, flips) {
            let next = g.apply(op, flips)?;
            if seen.insert(next.clone()) {
                if seen.len() > state_cap {
                    return Err(Error::CapExceeded(state_cap));
                }
                queue.push_back(next);
            }
        }
    }
    Ok(seen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::{replay_verify, Witness};

    fn star4() -> Graph {
        Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    #[test]
    fn star_to_complete_in_one_step() {
        let inst = SynthesisInstance::new(star4(), Graph::complete(4), vec![]).unwrap();
        let r = reachable_bfs(&inst, DEFAULT_STATE_CAP).unwrap();
        assert!(r.reachable);
        assert_eq!(r.shortest_length, Some(1));
        let w = Witness::from_ops(inst.source(), r.witness, inst.flips()).unwrap();
        assert!(replay_verify(&inst, &w).is_ok());
    }

    #[test]
    fn isolated_vertex_cannot_gain_edges() {
        let s = Graph::from_edges(3, [(0, 1)]).unwrap();
        let t = Graph::from_edges(3, [(0, 2)]).unwrap();
        let inst = SynthesisInstance::new(s, t, vec![]).unwrap();
        let r = reachable_bfs(&inst, DEFAULT_STATE_CAP).unwrap();
        assert!(!r.reachable);
        assert_eq!(r.shortest_length, None);
        assert!(r.explored >= 2);
    }

    #[test]
    fn flips_open_up_reachability() {
        let s = Graph::from_edges(3, [(0, 1)]).unwrap();
        let t = Graph::from_edges(3, [(0, 2)]).unwrap();
        let inst = SynthesisInstance::new(s, t, vec![(0, 2)]).unwrap();
        let r = reachable_bfs(&inst, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(r.shortest_length, Some(2));
    }

    #[test]
    fn identical_graphs_need_nothing() {
        let inst = SynthesisInstance::new(star4(), star4(), vec![]).unwrap();
        let r = reachable_bfs(&inst, DEFAULT_STATE_CAP).unwrap();
        assert_eq!(r.shortest_length, Some(0));
        assert_eq!(r.explored, 1);
    }

    #[test]
    fn cap_is_enforced() {
        let inst = SynthesisInstance::new(Graph::complete(5), Graph::empty(5).flip_edge(0, 1).unwrap().flip_edge(2, 3).unwrap(), vec![]).unwrap();
        assert!(matches!(reachable_bfs(&inst, 3), Err(Error::CapExceeded(3))));
        assert!(matches!(
            reachable_set(&Graph::complete(5), true, &[], 3),
            Err(Error::CapExceeded(3))
        ));
    }

    #[test]
    fn orbit_examples() {
        let k2 = Graph::complete(2);
        let orbit = reachable_set(&k2, false, &[], DEFAULT_STATE_CAP).unwrap();
        assert_eq!(orbit, HashSet::from([k2]));
        let orbit = reachable_set(&star4(), false, &[], DEFAULT_STATE_CAP).unwrap();
        assert!(orbit.contains(&Graph::complete(4)));
        assert!(orbit.iter().all(|g| g.n() == 4));
    }
}
