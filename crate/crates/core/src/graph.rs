//! Simple undirected graphs over a fixed vertex set and the graph-state
//! operations acting on them.
//!
//! A [`Graph`] on `n` vertices stores one bit per unordered pair `(u, v)` with
//! `u < v`. Pairs are numbered lexicographically, so `(0,1), (0,2), ..,
//! (0,n-1), (1,2), ..` get indices `0, 1, ..`. The encoder uses the same
//! numbering for its edge variables.
//!
//! Vertex deletion isolates a vertex rather than removing it, so the pair
//! universe never changes under any operation.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// An unordered vertex pair, always stored with `.0 < .1`.
pub type Pair = (usize, usize);

/// Number of unordered pairs over `n` vertices.
pub const fn num_pairs(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Canonical index of the pair `(u, v)`, `u < v < n`.
#[inline]
pub fn pair_index(n: usize, u: usize, v: usize) -> usize {
    debug_assert!(u < v && v < n);
    u * n - u * (u + 1) / 2 + (v - u - 1)
}

/// All pairs over `n` vertices in canonical order.
pub fn pairs(n: usize) -> impl Iterator<Item = Pair> {
    (0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v)))
}

/// Orders `(u, v)` so the smaller vertex comes first. Fails on `u == v`.
pub fn normalize(u: usize, v: usize) -> Result<Pair> {
    match u.cmp(&v) {
        std::cmp::Ordering::Less => Ok((u, v)),
        std::cmp::Ordering::Greater => Ok((v, u)),
        std::cmp::Ordering::Equal => Err(Error::SelfLoop(u)),
    }
}

/// One transition step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Operation {
    /// Local complementation on a vertex.
    Lc(usize),
    /// Vertex deletion: remove every edge incident to the vertex.
    Vd(usize),
    /// Flip the pair at this index of the instance's flip set.
    Ef(usize),
    /// No change; pads transformations shorter than the unrolling.
    Id,
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operation::Lc(k) => write!(f, "LC({k})"),
            Operation::Vd(k) => write!(f, "VD({k})"),
            Operation::Ef(i) => write!(f, "EF[{i}]"),
            Operation::Id => f.write_str("Id"),
        }
    }
}

type Words = SmallVec<[u64; 2]>;

/// A simple undirected graph on vertices `0..n`, stored as a packed bit set
/// over the pair universe.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    bits: Words,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let words = num_pairs(n).div_ceil(64);
        Graph {
            n,
            bits: SmallVec::from_elem(0, words),
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for idx in 0..num_pairs(n) {
            g.set_pair(idx, true);
        }
        g
    }

    /// Builds a graph from an edge list. Pairs may be given in either order;
    /// repeated pairs are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Pair>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            let (u, v) = normalize(u, v)?;
            g.check_vertex(v)?;
            let idx = pair_index(n, u, v);
            if g.pair(idx) {
                return Err(Error::DuplicatePair(u, v));
            }
            g.set_pair(idx, true);
        }
        Ok(g)
    }

    /// Star with edges `(center, l)` for every leaf `l`.
    pub fn star(n: usize, center: usize, leaves: &BTreeSet<usize>) -> Result<Self> {
        if leaves.contains(&center) {
            return Err(Error::CenterIsLeaf(center));
        }
        Graph::from_edges(n, leaves.iter().map(|&l| (center, l)))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Membership of the pair with canonical index `idx`.
    #[inline]
    pub fn pair(&self, idx: usize) -> bool {
        self.bits[idx / 64] >> (idx % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn set_pair(&mut self, idx: usize, present: bool) {
        let mask = 1u64 << (idx % 64);
        if present {
            self.bits[idx / 64] |= mask;
        } else {
            self.bits[idx / 64] &= !mask;
        }
    }

    #[inline]
    fn toggle_pair(&mut self, idx: usize) {
        self.bits[idx / 64] ^= 1u64 << (idx % 64);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u == v || u >= self.n || v >= self.n {
            return false;
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.pair(pair_index(self.n, a, b))
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Present edges in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = Pair> + '_ {
        pairs(self.n)
            .enumerate()
            .filter(|&(idx, _)| self.pair(idx))
            .map(|(_, p)| p)
    }

    fn check_vertex(&self, k: usize) -> Result<()> {
        if k < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: k,
                n: self.n,
            })
        }
    }

    /// Vertices adjacent to `k`, ascending.
    pub fn neighborhood(&self, k: usize) -> Result<Vec<usize>> {
        self.check_vertex(k)?;
        Ok(self.neighbors_unchecked(k))
    }

    fn neighbors_unchecked(&self, k: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&v| v != k && self.has_edge(k, v))
            .collect()
    }

    fn is_isolated(&self, k: usize) -> bool {
        (0..self.n).all(|v| v == k || !self.has_edge(k, v))
    }

    /// Toggles every pair inside the neighborhood of `k`.
    pub fn local_complement(&self, k: usize) -> Result<Graph> {
        self.check_vertex(k)?;
        let nbrs = self.neighbors_unchecked(k);
        let mut out = self.clone();
        for (i, &u) in nbrs.iter().enumerate() {
            for &v in &nbrs[i + 1..] {
                out.toggle_pair(pair_index(self.n, u, v));
            }
        }
        Ok(out)
    }

    /// Removes every edge incident to `k`. The vertex itself stays.
    pub fn delete_vertex_edges(&self, k: usize) -> Result<Graph> {
        self.check_vertex(k)?;
        let mut out = self.clone();
        for v in 0..self.n {
            if v != k {
                let (a, b) = if k < v { (k, v) } else { (v, k) };
                out.set_pair(pair_index(self.n, a, b), false);
            }
        }
        Ok(out)
    }

    /// Toggles the single pair `(u, v)`.
    pub fn flip_edge(&self, u: usize, v: usize) -> Result<Graph> {
        let (a, b) = normalize(u, v)?;
        self.check_vertex(b)?;
        let mut out = self.clone();
        out.toggle_pair(pair_index(self.n, a, b));
        Ok(out)
    }

    /// Applies `op`; edge flips look their pair up in `flips`.
    pub fn apply(&self, op: Operation, flips: &[Pair]) -> Result<Graph> {
        match op {
            Operation::Lc(k) => self.local_complement(k),
            Operation::Vd(k) => self.delete_vertex_edges(k),
            Operation::Ef(i) => {
                if flips.is_empty() {
                    return Err(Error::EmptyFlipSet);
                }
                let &(u, v) = flips.get(i).ok_or(Error::FlipIndexOutOfRange {
                    index: i,
                    len: flips.len(),
                })?;
                self.flip_edge(u, v)
            }
            Operation::Id => Ok(self.clone()),
        }
    }

    /// Vertices with an empty neighborhood.
    pub fn isolated_vertices(&self) -> BTreeSet<usize> {
        (0..self.n).filter(|&v| self.is_isolated(v)).collect()
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, {{", self.n)?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{u}{v}")?;
            if self.n > 10 {
                f.write_str(" ")?;
            }
        }
        f.write_str("})")
    }
}

/// Text form: `n <count>` on the first line, then one `u v` edge per line in
/// canonical order.
impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n)?;
        for (u, v) in self.edges() {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

impl Graph {
    /// Parses the text form, reporting errors with line numbers offset by
    /// `first_line - 1`. Blank lines are skipped.
    pub(crate) fn parse_lines<'a, I>(lines: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, &'a str)>,
    {
        let mut lines = lines.into_iter().filter(|(_, l)| !l.trim().is_empty());
        let (lno, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing `n <count>` header"))?;
        let mut it = header.split_whitespace();
        let n = match (it.next(), it.next(), it.next()) {
            (Some("n"), Some(count), None) => count
                .parse::<usize>()
                .map_err(|e| Error::parse(lno, format!("bad vertex count: {e}")))?,
            _ => return Err(Error::parse(lno, "expected `n <count>`")),
        };
        let mut g = Graph::empty(n);
        for (lno, line) in lines {
            let (u, v) = parse_pair(lno, line)?;
            let (u, v) = normalize(u, v).map_err(|e| Error::parse(lno, e.to_string()))?;
            if v >= n {
                return Err(Error::parse(lno, format!("vertex {v} out of range")));
            }
            let idx = pair_index(n, u, v);
            if g.pair(idx) {
                return Err(Error::parse(lno, format!("duplicate edge {u} {v}")));
            }
            g.set_pair(idx, true);
        }
        Ok(g)
    }
}

pub(crate) fn parse_pair(lno: usize, line: &str) -> Result<Pair> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize> {
        it.next()
            .ok_or_else(|| Error::parse(lno, "expected `u v`"))?
            .parse::<usize>()
            .map_err(|e| Error::parse(lno, e.to_string()))
    };
    let u = next()?;
    let v = next()?;
    if it.next().is_some() {
        return Err(Error::parse(lno, "trailing tokens after `u v`"));
    }
    Ok((u, v))
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Graph::parse_lines(s.lines().enumerate().map(|(i, l)| (i + 1, l)))
    }
}
