//! Seeded benchmark generators and built-in demo instances.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)`, which is
//! platform independent. Random graphs draw one Bernoulli sample per vertex
//! pair in canonical pair order, so the same `(n, p, seed)` always produces
//! the same graph.

use std::collections::{BTreeSet, VecDeque};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::encoder::SynthesisInstance;
use crate::error::{Error, Result};
use crate::graph::{num_pairs, pairs, Graph, Pair};
use crate::instance::InstanceFile;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::BadProbability(p))
    }
}

/// G(n, p): every pair present independently with probability `p`.
pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_probability(p)?;
    let mut rng = rng(seed);
    let mut g = Graph::empty(n);
    for idx in 0..num_pairs(n) {
        if rng.gen_bool(p) {
            g.set_pair(idx, true);
        }
    }
    Ok(g)
}

/// A physical network layout: named nodes, fiber links, and the end nodes
/// that should share the GHZ state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetworkTopology {
    pub names: Vec<String>,
    pub links: Vec<Pair>,
    pub end_nodes: BTreeSet<usize>,
}

impl NetworkTopology {
    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    /// Hop counts between all node pairs; `None` when disconnected.
    pub fn hop_distances(&self) -> Vec<Vec<Option<usize>>> {
        let n = self.node_count();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &self.links {
            adj[u].push(v);
            adj[v].push(u);
        }
        (0..n)
            .map(|s| {
                let mut dist = vec![None; n];
                dist[s] = Some(0);
                let mut queue = VecDeque::from([s]);
                while let Some(u) = queue.pop_front() {
                    let du = dist[u].expect("queued nodes have a distance");
                    for &v in &adj[u] {
                        if dist[v].is_none() {
                            dist[v] = Some(du + 1);
                            queue.push_back(v);
                        }
                    }
                }
                dist
            })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.hop_distances()
            .first()
            .is_none_or(|row| row.iter().all(Option::is_some))
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// The 14-node Dutch quantum network proposal: four end nodes (Delft,
/// Groningen, Enschede, Maastricht) and ten repeater nodes.
pub fn builtin_network_14() -> NetworkTopology {
    const NAMES: [&str; 14] = [
        "delft1",
        "adam2",
        "almere",
        "zwolle2",
        "zwolle1",
        "meppel",
        "dwingeloo",
        "groningen1",
        "enschede2",
        "arnhem",
        "venlo",
        "maastricht",
        "eindhoven1",
        "nieuwegein",
    ];
    const LINKS: [(&str, &str); 16] = [
        ("delft1", "adam2"),
        ("delft1", "almere"),
        ("delft1", "nieuwegein"),
        ("adam2", "almere"),
        ("almere", "zwolle2"),
        ("zwolle2", "zwolle1"),
        ("zwolle1", "meppel"),
        ("meppel", "dwingeloo"),
        ("dwingeloo", "groningen1"),
        ("zwolle1", "enschede2"),
        ("zwolle1", "arnhem"),
        ("arnhem", "venlo"),
        ("venlo", "maastricht"),
        ("maastricht", "eindhoven1"),
        ("eindhoven1", "nieuwegein"),
        ("nieuwegein", "almere"),
    ];
    const ENDS: [&str; 4] = ["delft1", "groningen1", "enschede2", "maastricht"];

    let idx = |name: &str| NAMES.iter().position(|&n| n == name).expect("known node");
    NetworkTopology {
        names: NAMES.iter().map(|s| s.to_string()).collect(),
        links: LINKS
            .iter()
            .map(|&(a, b)| {
                let (u, v) = (idx(a), idx(b));
                (u.min(v), u.max(v))
            })
            .collect(),
        end_nodes: ENDS.iter().map(|&e| idx(e)).collect(),
    }
}

/// Random entanglement over a network: the pair `(u, v)` is an edge with
/// probability `p^(h+1)`, `h` being the hop count between `u` and `v`.
/// Disconnected pairs never get an edge.
pub fn network_graph(topo: &NetworkTopology, p: f64, seed: u64) -> Result<Graph> {
    check_probability(p)?;
    let n = topo.node_count();
    let dist = topo.hop_distances();
    let mut rng = rng(seed);
    let mut g = Graph::empty(n);
    for (idx, (u, v)) in pairs(n).enumerate() {
        let prob = match dist[u][v] {
            Some(h) => p.powi(h as i32 + 1),
            None => 0.0,
        };
        if rng.gen_bool(prob) {
            g.set_pair(idx, true);
        }
    }
    Ok(g)
}

/// GHZ graph: a star centered on the smallest party, other vertices isolated.
pub fn ghz_target(n: usize, parties: &BTreeSet<usize>) -> Result<Graph> {
    if parties.len() < 2 {
        return Err(Error::TooFewParties(parties.len()));
    }
    let mut leaves = parties.clone();
    let center = leaves.pop_first().expect("at least two parties");
    Graph::star(n, center, &leaves)
}

/// `size` distinct pairs drawn uniformly, in canonical order.
pub fn random_flips(n: usize, size: usize, seed: u64) -> Result<Vec<Pair>> {
    let available = num_pairs(n);
    if size > available {
        return Err(Error::TooManyPairs {
            requested: size,
            available,
        });
    }
    let mut chosen = sample(&mut rng(seed), available, size).into_vec();
    chosen.sort_unstable();
    let all: Vec<Pair> = pairs(n).collect();
    Ok(chosen.into_iter().map(|i| all[i]).collect())
}

/// How many flip pairs to attach to a generated instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlipPolicy {
    None,
    /// `floor(n / 2)` pairs.
    HalfVertices,
    Count(usize),
}

impl FlipPolicy {
    pub fn size(self, n: usize) -> usize {
        match self {
            FlipPolicy::None => 0,
            FlipPolicy::HalfVertices => n / 2,
            FlipPolicy::Count(k) => k,
        }
    }
}

// the flip set is drawn from a stream independent of the source graph's
fn flip_seed(seed: u64) -> u64 {
    seed ^ 0x9e37_79b9_7f4a_7c15
}

/// Erdős–Rényi source with a GHZ target on vertices `0..parties`.
pub fn er_ghz_instance(
    n: usize,
    p: f64,
    seed: u64,
    parties: usize,
    flips: FlipPolicy,
) -> Result<InstanceFile> {
    let source = erdos_renyi(n, p, seed)?;
    let target = ghz_target(n, &(0..parties.min(n)).collect())?;
    let flips = random_flips(n, flips.size(n), flip_seed(seed))?;
    let inst = SynthesisInstance::new(source, target, flips)?;
    Ok(InstanceFile::new(inst)
        .with_meta("family", "er")
        .with_meta("n", n)
        .with_meta("p", p)
        .with_meta("seed", seed)
        .with_meta("parties", parties))
}

/// Distance-decay source on the built-in network with a GHZ target over its
/// end nodes.
pub fn network_ghz_instance(p: f64, seed: u64, flips: FlipPolicy) -> Result<InstanceFile> {
    let topo = builtin_network_14();
    let n = topo.node_count();
    let source = network_graph(&topo, p, seed)?;
    let target = ghz_target(n, &topo.end_nodes)?;
    let flips = random_flips(n, flips.size(n), flip_seed(seed))?;
    let inst = SynthesisInstance::new(source, target, flips)?;
    Ok(InstanceFile::new(inst)
        .with_meta("family", "network14")
        .with_meta("p", p)
        .with_meta("seed", seed))
}

/// Built-in demo instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Demo {
    /// 4-vertex star to the complete graph (one LC on the center).
    StarToComplete,
    /// Complete graph on 4 vertices to a triangle plus an isolated vertex.
    CompleteToTriangle,
    /// Six-node network state to a 4-party GHZ state.
    SecretSharing,
}

impl Demo {
    pub const ALL: [Demo; 3] = [Demo::StarToComplete, Demo::CompleteToTriangle, Demo::SecretSharing];

    pub fn name(self) -> &'static str {
        match self {
            Demo::StarToComplete => "star-to-complete",
            Demo::CompleteToTriangle => "complete-to-triangle",
            Demo::SecretSharing => "secret-sharing",
        }
    }

    pub fn from_name(name: &str) -> Option<Demo> {
        Demo::ALL.into_iter().find(|d| d.name() == name)
    }

    pub fn instance(self) -> InstanceFile {
        let inst = match self {
            Demo::StarToComplete => SynthesisInstance::new(
                Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).expect("valid"),
                Graph::complete(4),
                vec![],
            ),
            Demo::CompleteToTriangle => SynthesisInstance::new(
                Graph::complete(4),
                Graph::from_edges(4, [(0, 1), (0, 3), (1, 3)]).expect("valid"),
                vec![],
            ),
            // Labels: A=0, B=1, C=2, D=3; the two unlabeled relay nodes are
            // 4 (between A and B) and 5 (between A and D).
            Demo::SecretSharing => SynthesisInstance::new(
                Graph::from_edges(6, [(0, 4), (1, 4), (0, 2), (0, 5), (3, 5)]).expect("valid"),
                ghz_target(6, &BTreeSet::from([0, 1, 2, 3])).expect("valid"),
                vec![],
            ),
        }
        .expect("demo instances are well formed");
        InstanceFile::new(inst).with_meta("family", format!("demo-{}", self.name()))
    }
}
