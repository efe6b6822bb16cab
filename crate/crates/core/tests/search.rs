use std::collections::{BTreeSet, HashSet};

use gsynth_core::bmc::{completeness_threshold, synthesize, SearchOptions, Verdict};
use gsynth_core::cnf::SolveResult;
use gsynth_core::encoder::{encode_bmc, encode_search, SynthesisInstance};
use gsynth_core::generate::{erdos_renyi, ghz_target, random_flips};
use gsynth_core::graph::{Graph, Operation};
use gsynth_core::oracle::{reachable_bfs, reachable_set, DEFAULT_STATE_CAP};
use gsynth_core::solver::SatBackend;
use gsynth_core::witness::replay_verify;
use gsynth_core::InProcessSolver;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Source from G(n, p); the target is a random walk from it, an independent
/// random graph, or a GHZ star, depending on the seed.
fn sample_instance(n: usize, p: f64, flips: usize, seed: u64) -> SynthesisInstance {
    let source = erdos_renyi(n, p, seed).unwrap();
    let flips = random_flips(n, flips, seed + 1000).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = match seed % 3 {
        0 => {
            let mut g = source.clone();
            for _ in 0..rng.gen_range(1..=4) {
                let op = match rng.gen_range(0..3) {
                    0 => Operation::Lc(rng.gen_range(0..n)),
                    1 => Operation::Vd(rng.gen_range(0..n)),
                    _ if !flips.is_empty() => Operation::Ef(rng.gen_range(0..flips.len())),
                    _ => Operation::Lc(rng.gen_range(0..n)),
                };
                g = g.apply(op, &flips).unwrap();
            }
            g
        }
        1 => erdos_renyi(n, p, seed + 7777).unwrap(),
        _ => ghz_target(n, &(0..n.min(4)).collect()).unwrap(),
    };
    SynthesisInstance::new(source, target, flips).unwrap()
}

fn agree(inst: &SynthesisInstance, backend: &dyn SatBackend) {
    let oracle = reachable_bfs(inst, DEFAULT_STATE_CAP).unwrap();
    let out = synthesize(inst, backend, &SearchOptions::default()).unwrap();
    match (&out.verdict, oracle.shortest_length) {
        (Verdict::Reachable(w), Some(len)) => {
            assert_eq!(w.len(), len, "BMC witness is as short as the BFS one: {inst:?}");
            assert!(replay_verify(inst, w).is_ok());
        }
        (Verdict::Unreachable(_), None) => assert!(inst.flips().is_empty()),
        (Verdict::Unknown(_), None) => {
            assert!(!inst.flips().is_empty(), "LC+VD searches must end in a verdict");
            assert!(!out.interrupted);
        }
        (v, len) => panic!("BMC says {v:?}, BFS says {len:?} for {inst:?}"),
    }
    if inst.flips().is_empty() {
        let t = completeness_threshold(inst);
        if let Some(len) = oracle.shortest_length {
            assert!(len <= t.max_transitions, "threshold violated by {inst:?}");
        }
    }
}

#[test]
fn bmc_agrees_with_bfs_on_small_instances() {
    for n in [3, 4] {
        for p in [0.3, 0.5, 0.8] {
            for flips in [0, 2] {
                for seed in 0..6 {
                    agree(&sample_instance(n, p, flips, seed), &InProcessSolver);
                }
            }
        }
    }
}

#[test]
fn path_to_star_cross_check() {
    let path = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
    let star = Graph::from_edges(4, [(0, 1), (1, 2), (1, 3)]).unwrap();
    agree(&SynthesisInstance::new(path, star, vec![]).unwrap(), &InProcessSolver);
}

#[test]
fn identity_instance_is_reachable_with_no_operations() {
    let g = Graph::from_edges(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
    let inst = SynthesisInstance::new(g.clone(), g, vec![]).unwrap();
    let out = synthesize(&inst, &InProcessSolver, &SearchOptions::default()).unwrap();
    let Verdict::Reachable(w) = out.verdict else { panic!() };
    assert!(w.is_empty());
    assert_eq!(out.found_states, Some(1));
}

#[test]
fn satisfiability_is_monotone_in_depth() {
    for seed in 0..12 {
        let inst = sample_instance(4, 0.6, if seed % 2 == 0 { 0 } else { 2 }, seed);
        let mut prev_sat = false;
        for states in 1..=6 {
            let enc = encode_bmc(&inst, states).unwrap();
            let sat = InProcessSolver.solve(&enc.formula, None).unwrap().is_sat();
            assert!(!prev_sat || sat, "SAT at {} states but not at {states}", states - 1);
            prev_sat = sat;
        }
    }
}

#[test]
fn decoded_models_always_replay() {
    for seed in 0..10 {
        let inst = sample_instance(5, 0.5, 2, seed * 3);
        let enc = encode_bmc(&inst, 4).unwrap();
        if let SolveResult::Sat(model) = InProcessSolver.solve(&enc.formula, None).unwrap() {
            let w = gsynth_core::witness::decode(&model, &enc.layout, inst.flips()).unwrap();
            assert!(replay_verify(&inst, &w).is_ok());
            let s = gsynth_core::witness::strip_identities(&w);
            assert!(s.ops.iter().all(|&op| op != Operation::Id));
            assert_eq!(s.final_state(), w.final_state());
        }
    }
}

/// Depth-first closure over an adjacency matrix, sharing no code with the
/// library's graph type.
fn lc_orbit_dfs(n: usize, edges: &[(usize, usize)]) -> BTreeSet<Vec<Vec<bool>>> {
    let mut start = vec![vec![false; n]; n];
    for &(u, v) in edges {
        start[u][v] = true;
        start[v][u] = true;
    }
    let mut seen = BTreeSet::new();
    let mut stack = vec![start];
    while let Some(adj) = stack.pop() {
        if !seen.insert(adj.clone()) {
            continue;
        }
        for k in 0..n {
            let nb: Vec<usize> = (0..n).filter(|&j| adj[k][j]).collect();
            let mut next = adj.clone();
            for (i, &a) in nb.iter().enumerate() {
                for &b in &nb[i + 1..] {
                    next[a][b] = !next[a][b];
                    next[b][a] = !next[b][a];
                }
            }
            stack.push(next);
        }
    }
    seen
}

#[test]
fn orbit_sizes_agree_with_an_independent_search() {
    let cases: [(usize, &[(usize, usize)]); 4] = [
        (3, &[(0, 1), (1, 2)]),
        (4, &[(0, 1), (0, 2), (0, 3)]),
        (4, &[(0, 1), (1, 2), (2, 3)]),
        (5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]),
    ];
    for (n, edges) in cases {
        let g = Graph::from_edges(n, edges.iter().copied()).unwrap();
        let ours = reachable_set(&g, false, &[], DEFAULT_STATE_CAP).unwrap();
        let theirs = lc_orbit_dfs(n, edges);
        assert_eq!(ours.len(), theirs.len(), "orbit of {edges:?}");
        let ours_as_matrices: BTreeSet<Vec<Vec<bool>>> = ours
            .iter()
            .map(|h| (0..n).map(|u| (0..n).map(|v| u != v && h.has_edge(u, v)).collect()).collect())
            .collect();
        assert_eq!(ours_as_matrices, theirs);
    }
    // the 3-vertex path reaches the triangle and the three paths
    assert_eq!(lc_orbit_dfs(3, &[(0, 1), (1, 2)]).len(), 4);
}

#[test]
fn reachable_sets_contain_only_valid_graphs() {
    let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3)]).unwrap();
    let set: HashSet<Graph> = reachable_set(&g, true, &[(0, 4)], DEFAULT_STATE_CAP).unwrap();
    assert!(set.iter().all(|h| h.n() == 5 && h.to_string().parse::<Graph>().unwrap() == *h));
    assert!(set.contains(&Graph::empty(5)));
}

#[test]
fn canonical_order_clauses_keep_every_depth_answer() {
    for seed in 0..24 {
        for (n, flips) in [(4, 0), (4, 2), (5, 0), (5, 1)] {
            let inst = sample_instance(n, 0.5, flips, seed);
            for states in 1..=5 {
                let plain = encode_bmc(&inst, states).unwrap();
                let pruned = encode_search(&inst, states, true).unwrap();
                let a = InProcessSolver.solve(&plain.formula, None).unwrap().is_sat();
                let b = InProcessSolver.solve(&pruned.formula, None).unwrap().is_sat();
                assert_eq!(a, b, "{states} states, {inst:?}");
            }
        }
    }
}
