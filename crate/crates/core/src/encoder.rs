//! CNF encoding of the graph-state transition relation and its bounded
//! unrolling.
//!
//! Every state `t` of the unrolling owns one edge variable per vertex pair.
//! Every transition `t -> t+1` owns `m` operand bits `y` and two opcode bits
//! `z`, both read LSB-first:
//!
//! | `z` | operation                    |
//! |-----|------------------------------|
//! | 0   | local complementation on `y` |
//! | 1   | vertex deletion of `y`       |
//! | 2   | flip of the `y`-th pair of D |
//! | 3   | identity (`y` forced to 0)   |
//!
//! Variables are numbered state-major: all edge variables of state 0, then
//! state 1, and so on, followed by one `y`/`z` block per transition. No
//! auxiliary variables are introduced.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::cnf::{Clause, CnfFormula, Lit};
use crate::error::{Error, Result};
use crate::graph::{normalize, num_pairs, pair_index, pairs, Graph, Pair};

/// Opcode values carried by the two `z` bits.
pub mod opcode {
    pub const LC: u64 = 0;
    pub const VD: u64 = 1;
    pub const EF: u64 = 2;
    pub const ID: u64 = 3;
}

/// Source graph, target graph and the pairs on which edge flips are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthesisInstance {
    source: Graph,
    target: Graph,
    flips: Vec<Pair>,
}

impl SynthesisInstance {
    /// Flip pairs are normalized; duplicates and out-of-range vertices are
    /// rejected.
    pub fn new(source: Graph, target: Graph, flips: Vec<Pair>) -> Result<Self> {
        if source.n() != target.n() {
            return Err(Error::VertexCountMismatch {
                source_n: source.n(),
                target_n: target.n(),
            });
        }
        if source.n() == 0 {
            return Err(Error::EmptyInstance);
        }
        let n = source.n();
        let mut seen = BTreeSet::new();
        let mut normalized = Vec::with_capacity(flips.len());
        for (u, v) in flips {
            let (u, v) = normalize(u, v)?;
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if !seen.insert((u, v)) {
                return Err(Error::DuplicatePair(u, v));
            }
            normalized.push((u, v));
        }
        Ok(SynthesisInstance {
            source,
            target,
            flips: normalized,
        })
    }

    pub fn n(&self) -> usize {
        self.source.n()
    }

    pub fn source(&self) -> &Graph {
        &self.source
    }

    pub fn target(&self) -> &Graph {
        &self.target
    }

    pub fn flips(&self) -> &[Pair] {
        &self.flips
    }
}

/// Bits needed for the operand selector: `ceil(log2(max(n, flips) + 1))`.
pub fn selector_width(n: usize, flip_count: usize) -> usize {
    let max = n.max(flip_count) as u64;
    (u64::BITS - max.leading_zeros()) as usize
}

/// Variable map for an unrolling of `states` graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepLayout {
    states: usize,
    n: usize,
    flip_count: usize,
    width: usize,
}

impl StepLayout {
    pub fn new(n: usize, flip_count: usize, states: usize) -> Result<Self> {
        if states == 0 {
            return Err(Error::BadDepth(states));
        }
        Ok(StepLayout {
            states,
            n,
            flip_count,
            width: selector_width(n, flip_count),
        })
    }

    /// Number of states `d` in the unrolling.
    pub fn states(&self) -> usize {
        self.states
    }

    pub fn transitions(&self) -> usize {
        self.states - 1
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn flip_count(&self) -> usize {
        self.flip_count
    }

    /// Operand selector width `m`.
    pub fn selector_width(&self) -> usize {
        self.width
    }

    pub fn pairs_per_state(&self) -> usize {
        num_pairs(self.n)
    }

    /// First variable of the selector blocks.
    pub fn selector_base(&self) -> u32 {
        (self.states * self.pairs_per_state()) as u32 + 1
    }

    /// `y` plus `z` bits per transition.
    pub fn selector_stride(&self) -> usize {
        self.width + 2
    }

    /// `d * n(n-1)/2 + (d-1) * (m+2)`.
    pub fn num_vars(&self) -> u32 {
        (self.states * self.pairs_per_state() + self.transitions() * self.selector_stride()) as u32
    }

    /// Edge variable of pair index `pair` in state `step`.
    #[inline]
    pub fn edge_var(&self, step: usize, pair: usize) -> u32 {
        debug_assert!(step < self.states && pair < self.pairs_per_state());
        (step * self.pairs_per_state() + pair) as u32 + 1
    }

    #[inline]
    fn edge_var_uv(&self, step: usize, u: usize, v: usize) -> u32 {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.edge_var(step, pair_index(self.n, a, b))
    }

    /// Operand bit `bit` of transition `t`.
    #[inline]
    pub fn y_var(&self, t: usize, bit: usize) -> u32 {
        debug_assert!(t < self.transitions() && bit < self.width);
        self.selector_base() + (t * self.selector_stride() + bit) as u32
    }

    /// Opcode bit `bit` (0 or 1) of transition `t`.
    #[inline]
    pub fn z_var(&self, t: usize, bit: usize) -> u32 {
        debug_assert!(t < self.transitions() && bit < 2);
        self.selector_base() + (t * self.selector_stride() + self.width + bit) as u32
    }

    pub fn y_vars(&self, t: usize) -> Vec<u32> {
        (0..self.width).map(|j| self.y_var(t, j)).collect()
    }

    pub fn z_vars(&self, t: usize) -> [u32; 2] {
        [self.z_var(t, 0), self.z_var(t, 1)]
    }
}

/// Sidecar text describing the variable blocks, one `key value` per line.
impl fmt::Display for StepLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n)?;
        writeln!(f, "states {}", self.states)?;
        writeln!(f, "flips {}", self.flip_count)?;
        writeln!(f, "selector_width {}", self.width)?;
        writeln!(f, "edge_base 1")?;
        writeln!(f, "edges_per_state {}", self.pairs_per_state())?;
        writeln!(f, "selector_base {}", self.selector_base())?;
        writeln!(f, "selector_stride {}", self.selector_stride())?;
        writeln!(f, "num_vars {}", self.num_vars())
    }
}

impl FromStr for StepLayout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (mut n, mut states, mut flips) = (None, None, None);
        for (i, line) in s.lines().enumerate() {
            let mut it = line.split_whitespace();
            let (Some(key), Some(val)) = (it.next(), it.next()) else {
                continue;
            };
            let val: usize = val
                .parse()
                .map_err(|e| Error::parse(i + 1, format!("{key}: {e}")))?;
            match key {
                "n" => n = Some(val),
                "states" => states = Some(val),
                "flips" => flips = Some(val),
                _ => {}
            }
        }
        let missing = |k: &str| Error::parse(0, format!("layout is missing `{k}`"));
        StepLayout::new(
            n.ok_or_else(|| missing("n"))?,
            flips.ok_or_else(|| missing("flips"))?,
            states.ok_or_else(|| missing("states"))?,
        )
    }
}

/// `bits != value`: one clause, positive on the zero bits of `value` and
/// negative on its one bits.
pub fn encode_neq(bits: &[u32], value: u64) -> Result<Clause> {
    check_fits(bits, value)?;
    Ok(bits
        .iter()
        .enumerate()
        .map(|(i, &var)| {
            if value >> i & 1 == 1 {
                Lit::neg(var)
            } else {
                Lit::pos(var)
            }
        })
        .collect())
}

/// `bits <= value`: for every zero bit `i` of `value`, the clause
/// `!y_i | OR_{j > i, value_j = 1} !y_j`.
pub fn encode_leq(bits: &[u32], value: u64) -> Result<Vec<Clause>> {
    check_fits(bits, value)?;
    let one = |i: usize| value >> i & 1 == 1;
    Ok((0..bits.len())
        .filter(|&i| !one(i))
        .map(|i| {
            std::iter::once(Lit::neg(bits[i]))
                .chain((i + 1..bits.len()).filter(|&j| one(j)).map(|j| Lit::neg(bits[j])))
                .collect()
        })
        .collect())
}

fn check_fits(bits: &[u32], value: u64) -> Result<()> {
    if bits.len() < 64 && value >> bits.len() != 0 {
        return Err(Error::ValueOutOfRange {
            value,
            width: bits.len(),
        });
    }
    Ok(())
}

/// Unit clauses pinning state `step` to `graph`.
pub fn encode_graph_constraint(graph: &Graph, step: usize, layout: &StepLayout) -> Vec<Clause> {
    (0..layout.pairs_per_state())
        .map(|e| {
            let var = layout.edge_var(step, e);
            vec![if graph.pair(e) {
                Lit::pos(var)
            } else {
                Lit::neg(var)
            }]
        })
        .collect()
}

/// `x' <-> x` as two clauses.
fn equivalence(next: u32, cur: u32) -> [Clause; 2] {
    [
        vec![Lit::pos(next), Lit::neg(cur)],
        vec![Lit::neg(next), Lit::pos(cur)],
    ]
}

/// `x' xor x` as two clauses.
fn exclusive(next: u32, cur: u32) -> [Clause; 2] {
    [
        vec![Lit::pos(next), Lit::pos(cur)],
        vec![Lit::neg(next), Lit::neg(cur)],
    ]
}

/// Vertex deletion of `k` on transition `t`.
pub fn encode_vd(k: usize, t: usize, layout: &StepLayout) -> Vec<Clause> {
    let mut out = Vec::new();
    for (e, (u, v)) in pairs(layout.n).enumerate() {
        let next = layout.edge_var(t + 1, e);
        if u == k || v == k {
            out.push(vec![Lit::neg(next)]);
        } else {
            out.extend(equivalence(next, layout.edge_var(t, e)));
        }
    }
    out
}

/// Local complementation on `k` on transition `t`.
pub fn encode_lc(k: usize, t: usize, layout: &StepLayout) -> Vec<Clause> {
    let mut out = Vec::new();
    for (e, (u, v)) in pairs(layout.n).enumerate() {
        let next = layout.edge_var(t + 1, e);
        let cur = layout.edge_var(t, e);
        if u == k || v == k {
            out.extend(equivalence(next, cur));
            continue;
        }
        let a = layout.edge_var_uv(t, u, k);
        let b = layout.edge_var_uv(t, v, k);
        let (pa, na) = (Lit::pos(a), Lit::neg(a));
        let (pb, nb) = (Lit::pos(b), Lit::neg(b));
        let (pp, np) = (Lit::pos(next), Lit::neg(next));
        let (pc, nc) = (Lit::pos(cur), Lit::neg(cur));
        // both endpoints adjacent to k: the pair flips; otherwise it is copied
        out.push(vec![na, nb, pp, pc]);
        out.push(vec![na, nb, np, nc]);
        out.push(vec![pa, pp, nc]);
        out.push(vec![pb, pp, nc]);
        out.push(vec![pa, np, pc]);
        out.push(vec![pb, np, pc]);
    }
    out
}

/// Flip of the `i`-th pair of the instance's flip set on transition `t`.
pub fn encode_ef(
    i: usize,
    inst: &SynthesisInstance,
    t: usize,
    layout: &StepLayout,
) -> Result<Vec<Clause>> {
    let flips = inst.flips();
    if flips.is_empty() {
        return Err(Error::EmptyFlipSet);
    }
    let &(fu, fv) = flips.get(i).ok_or(Error::FlipIndexOutOfRange {
        index: i,
        len: flips.len(),
    })?;
    let flipped = pair_index(layout.n, fu, fv);
    let mut out = Vec::with_capacity(2 * layout.pairs_per_state());
    for e in 0..layout.pairs_per_state() {
        let (next, cur) = (layout.edge_var(t + 1, e), layout.edge_var(t, e));
        if e == flipped {
            out.extend(exclusive(next, cur));
        } else {
            out.extend(equivalence(next, cur));
        }
    }
    Ok(out)
}

/// All edge flips of transition `t` under one opcode guard.
///
/// Equivalent to widening each `encode_ef(i)` with `y != i`, but the frame of
/// each pair is written once: pairs outside D copy under any flip, and flip
/// pair `i` copies unless `y == i`, which takes one clause per selector bit.
/// That is `2(P - |D|) + |D|(2m + 2)` clauses instead of `|D| n(n - 1)`.
fn encode_ef_shared(inst: &SynthesisInstance, t: usize, layout: &StepLayout) -> Vec<Clause> {
    let mut out = Vec::new();
    if inst.flips().is_empty() {
        return out;
    }
    let y = layout.y_vars(t);
    let not_ef = encode_neq(&layout.z_vars(t), opcode::EF).expect("opcode fits");
    let mut slot = vec![None; layout.pairs_per_state()];
    for (i, &(u, v)) in inst.flips().iter().enumerate() {
        slot[pair_index(layout.n, u, v)] = Some(i);
    }
    for (e, slot) in slot.into_iter().enumerate() {
        let (next, cur) = (layout.edge_var(t + 1, e), layout.edge_var(t, e));
        match slot {
            None => guarded(&not_ef, equivalence(next, cur).to_vec(), &mut out),
            Some(i) => {
                let mut g = not_ef.clone();
                g.extend(encode_neq(&y, i as u64).expect("index fits in m bits"));
                guarded(&g, exclusive(next, cur).to_vec(), &mut out);
                // y == i, bit by bit, or the pair is copied
                for (b, &yb) in y.iter().enumerate() {
                    let lit = if i >> b & 1 == 1 { Lit::pos(yb) } else { Lit::neg(yb) };
                    let mut g = not_ef.clone();
                    g.push(lit);
                    guarded(&g, equivalence(next, cur).to_vec(), &mut out);
                }
            }
        }
    }
    out
}

/// Copy every pair unless `z != 3`.
pub fn encode_identity(t: usize, layout: &StepLayout) -> Vec<Clause> {
    let guard = encode_neq(&layout.z_vars(t), opcode::ID).expect("opcode fits in two bits");
    let mut out = Vec::with_capacity(2 * layout.pairs_per_state());
    for e in 0..layout.pairs_per_state() {
        for c in equivalence(layout.edge_var(t + 1, e), layout.edge_var(t, e)) {
            out.push(guard.iter().copied().chain(c).collect());
        }
    }
    out
}

fn guarded(guard: &Clause, body: Vec<Clause>, out: &mut Vec<Clause>) {
    out.extend(
        body.into_iter()
            .map(|c| guard.iter().copied().chain(c).collect::<Clause>()),
    );
}

/// Selector-range constraint: LC and VD operands below `n`, EF operands
/// below `|D|` (or EF forbidden when D is empty), and `y = 0` under the
/// identity opcode.
pub fn encode_selector_range(t: usize, layout: &StepLayout) -> Vec<Clause> {
    let y = layout.y_vars(t);
    let [z0, z1] = layout.z_vars(t);
    let mut out = Vec::new();

    // z in {0, 1} iff z1 is false
    for c in encode_leq(&y, layout.n as u64 - 1).expect("n - 1 fits in m bits") {
        out.push(c.into_iter().chain([Lit::pos(z1)]).collect());
    }

    let not_ef = encode_neq(&[z0, z1], opcode::EF).expect("opcode fits");
    if layout.flip_count == 0 {
        out.push(not_ef);
    } else {
        let below = encode_leq(&y, layout.flip_count as u64 - 1).expect("|D| - 1 fits in m bits");
        for c in below {
            out.push(c.into_iter().chain(not_ef.iter().copied()).collect());
        }
    }

    let not_id = encode_neq(&[z0, z1], opcode::ID).expect("opcode fits");
    for &yj in &y {
        out.push(std::iter::once(Lit::neg(yj)).chain(not_id.iter().copied()).collect());
    }
    out
}

/// The full guarded transition relation between states `t` and `t + 1`.
pub fn encode_transition(inst: &SynthesisInstance, t: usize, layout: &StepLayout) -> Vec<Clause> {
    let y = layout.y_vars(t);
    let z = layout.z_vars(t);
    let guard = |operand: usize, code: u64| -> Clause {
        let mut g = encode_neq(&y, operand as u64).expect("operand fits in m bits");
        g.extend(encode_neq(&z, code).expect("opcode fits"));
        g
    };

    let mut out = Vec::new();
    for k in 0..layout.n {
        guarded(&guard(k, opcode::LC), encode_lc(k, t, layout), &mut out);
    }
    for k in 0..layout.n {
        guarded(&guard(k, opcode::VD), encode_vd(k, t, layout), &mut out);
    }
    out.extend(encode_ef_shared(inst, t, layout));
    out.extend(encode_identity(t, layout));
    out.extend(encode_selector_range(t, layout));
    out
}

/// Clauses admitting only operation sequences in a canonical order.
///
/// Any sequence can be rewritten into this order without growing, so the
/// shortest transformation length, and satisfiability at every depth, are
/// unchanged. The search space shrinks a lot, which mostly speeds up the
/// unsatisfiable depths. Applied to all transitions of `layout`:
///
/// * identities only at the end;
/// * `LC k` only when `k` has at least two neighbours (otherwise a no-op);
/// * no `LC k` directly followed by `LC k`;
/// * `LC a` then `LC b` with `a > b` only when `a` and `b` are adjacent
///   (otherwise the two commute).
///
/// Without edge flips, also:
///
/// * vertex deletions after every local complementation, in increasing
///   vertex order;
/// * deletions only of vertices isolated in the target but not in the source;
/// * no local complementation of a vertex isolated in the source.
pub fn encode_canonical_order(inst: &SynthesisInstance, layout: &StepLayout) -> Vec<Clause> {
    let n = layout.n;
    let neq = |bits: &[u32], v: usize| encode_neq(bits, v as u64).expect("value fits");
    let op_is_not = |t: usize, code: u64, k: usize| -> Clause {
        let mut c = neq(&layout.y_vars(t), k);
        c.extend(encode_neq(&layout.z_vars(t), code).expect("opcode fits"));
        c
    };
    let lc_vd_only = inst.flips().is_empty();
    let src_iso = inst.source().isolated_vertices();
    let must_delete: BTreeSet<usize> = inst
        .target()
        .isolated_vertices()
        .difference(&src_iso)
        .copied()
        .collect();

    let mut out = Vec::new();
    for t in 0..layout.transitions() {
        // for every u, k has a neighbour other than u
        for k in 0..n {
            for u in (0..n).filter(|&u| u != k) {
                let mut c = op_is_not(t, opcode::LC, k);
                c.extend(
                    (0..n)
                        .filter(|&w| w != k && w != u)
                        .map(|w| Lit::pos(layout.edge_var_uv(t, k, w))),
                );
                out.push(c);
            }
        }
        if lc_vd_only {
            for k in 0..n {
                if src_iso.contains(&k) {
                    out.push(op_is_not(t, opcode::LC, k));
                }
                if !must_delete.contains(&k) {
                    out.push(op_is_not(t, opcode::VD, k));
                }
            }
        }
        if t + 1 == layout.transitions() {
            continue;
        }
        let u = t + 1;
        let [z0_next, z1_next] = layout.z_vars(u);
        let id_now = encode_neq(&layout.z_vars(t), opcode::ID).expect("opcode fits");
        for lit in [Lit::pos(z0_next), Lit::pos(z1_next)] {
            out.push(id_now.iter().copied().chain([lit]).collect());
        }
        for a in 0..n {
            for b in 0..=a {
                let mut c = op_is_not(t, opcode::LC, a);
                c.extend(op_is_not(u, opcode::LC, b));
                if a != b {
                    c.push(Lit::pos(layout.edge_var_uv(t, b, a)));
                }
                out.push(c);
            }
        }
        if lc_vd_only {
            // after a deletion only deletions (z0 set) follow
            let vd_now = encode_neq(&layout.z_vars(t), opcode::VD).expect("opcode fits");
            out.push(vd_now.into_iter().chain([Lit::pos(z0_next)]).collect());
            for a in 0..n {
                for b in 0..=a {
                    let mut c = op_is_not(t, opcode::VD, a);
                    c.extend(op_is_not(u, opcode::VD, b));
                    out.push(c);
                }
            }
        }
    }
    out
}

/// A bounded unrolling together with its variable map.
#[derive(Clone, Debug)]
pub struct BmcEncoding {
    pub formula: CnfFormula,
    pub layout: StepLayout,
}

/// Source constraint on state 0, `states - 1` transitions, target constraint
/// on the last state. Satisfiable iff the target is reachable in at most
/// `states - 1` operations.
///
/// With a single state, target units that repeat a source unit are not
/// emitted again.
pub fn encode_bmc(inst: &SynthesisInstance, states: usize) -> Result<BmcEncoding> {
    if states == 0 {
        return Err(Error::BadDepth(states));
    }
    let layout = StepLayout::new(inst.n(), inst.flips().len(), states)?;
    let mut formula = CnfFormula::with_vars(layout.num_vars());

    let source_units = encode_graph_constraint(inst.source(), 0, &layout);
    formula.extend(source_units.iter().cloned());
    for t in 0..layout.transitions() {
        formula.extend(encode_transition(inst, t, &layout));
    }
    let last = layout.states() - 1;
    let target_units = encode_graph_constraint(inst.target(), last, &layout);
    if last == 0 {
        formula.extend(
            target_units
                .into_iter()
                .zip(&source_units)
                .filter(|(t, s)| t != *s)
                .map(|(t, _)| t),
        );
    } else {
        formula.extend(target_units);
    }
    debug_assert_eq!(formula.num_vars(), layout.num_vars());
    Ok(BmcEncoding { formula, layout })
}

/// [`encode_bmc`] plus, when `canonical` is set, [`encode_canonical_order`].
pub fn encode_search(inst: &SynthesisInstance, states: usize, canonical: bool) -> Result<BmcEncoding> {
    let mut enc = encode_bmc(inst, states)?;
    if canonical {
        enc.formula.extend(encode_canonical_order(inst, &enc.layout));
    }
    Ok(enc)
}

/// Per-transition size ceiling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClauseBound {
    /// Selector width `m`.
    pub selector_width: usize,
    /// `m + n(n-1)`: edge variables of both states plus the operand bits.
    pub stated_vars: usize,
    /// `m + n(n-1) + 2`, counting the two opcode bits as well.
    pub vars: usize,
    /// `3.5 n^3 + 2 m n^2 + 0.5 n^2 + 0.5 |D| n^2`.
    pub clauses: f64,
}

pub fn clause_bound(n: usize, flip_count: usize) -> ClauseBound {
    let m = selector_width(n, flip_count);
    let nf = n as f64;
    let n2 = nf * nf;
    ClauseBound {
        selector_width: m,
        stated_vars: m + n * n.saturating_sub(1),
        vars: m + n * n.saturating_sub(1) + 2,
        clauses: 3.5 * n2 * nf + 2.0 * m as f64 * n2 + 0.5 * n2 + 0.5 * flip_count as f64 * n2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Assignment;

    fn star4() -> Graph {
        Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    fn holds(clauses: &[Clause], a: &Assignment) -> bool {
        clauses
            .iter()
            .all(|c| c.iter().any(|&l| a.lit_value(l) == Some(true)))
    }

    fn graph_from_bits(n: usize, bits: u64) -> Graph {
        let mut g = Graph::empty(n);
        for e in 0..num_pairs(n) {
            g.set_pair(e, bits >> e & 1 == 1);
        }
        g
    }

    /// All (G, G') pairs over n vertices whose edge bits satisfy `clauses`
    /// on transition 0, found by enumerating both states' edge variables.
    fn models_over_edges(n: usize, layout: &StepLayout, clauses: &[Clause]) -> Vec<(Graph, Graph)> {
        let p = num_pairs(n);
        let mut out = Vec::new();
        for bits in 0u64..(1 << (2 * p)) {
            let a = Assignment::from_fn(layout.num_vars(), |v| {
                let v = v as usize - 1;
                v < 2 * p && bits >> v & 1 == 1
            });
            if holds(clauses, &a) {
                out.push((graph_from_bits(n, bits), graph_from_bits(n, bits >> p)));
            }
        }
        out
    }

    #[test]
    fn selector_width_matches_log_formula() {
        for (n, d, m) in [(1, 0, 1), (2, 0, 2), (3, 0, 2), (4, 0, 3), (7, 0, 3), (8, 0, 4), (4, 8, 4), (10, 5, 4)] {
            assert_eq!(selector_width(n, d), m, "n={n} d={d}");
            let exact = ((n.max(d) + 1) as f64).log2().ceil() as usize;
            assert_eq!(m, exact);
        }
    }

    #[test]
    fn layout_ids_are_contiguous_and_distinct() {
        for (n, d, states) in [(3, 0, 1), (4, 0, 3), (5, 3, 4), (2, 1, 2)] {
            let l = StepLayout::new(n, d, states).unwrap();
            let mut ids = BTreeSet::new();
            for t in 0..states {
                for e in 0..num_pairs(n) {
                    assert!(ids.insert(l.edge_var(t, e)));
                }
            }
            for t in 0..l.transitions() {
                for j in 0..l.selector_width() {
                    assert!(ids.insert(l.y_var(t, j)));
                }
                for j in 0..2 {
                    assert!(ids.insert(l.z_var(t, j)));
                }
            }
            let expected = states * num_pairs(n) + (states - 1) * (l.selector_width() + 2);
            assert_eq!(l.num_vars() as usize, expected);
            assert_eq!(ids.len(), expected);
            assert_eq!(ids.first().copied(), if expected > 0 { Some(1) } else { None });
            assert_eq!(ids.last().copied().unwrap_or(0), l.num_vars());
        }
    }

    #[test]
    fn layout_sidecar_round_trip() {
        let l = StepLayout::new(5, 2, 4).unwrap();
        let text = l.to_string();
        assert!(text.contains("num_vars 55\n"));
        assert_eq!(text.parse::<StepLayout>().unwrap(), l);
    }

    #[test]
    fn graph_constraint_examples() {
        let l = StepLayout::new(4, 0, 1).unwrap();
        let units = encode_graph_constraint(&star4(), 0, &l);
        let dimacs: Vec<i32> = units.iter().map(|c| c[0].to_dimacs()).collect();
        // pairs 01 02 03 12 13 23
        assert_eq!(dimacs, vec![1, 2, 3, -4, -5, -6]);

        let l3 = StepLayout::new(3, 0, 1).unwrap();
        let e = encode_graph_constraint(&Graph::empty(3), 0, &l3);
        assert!(e.iter().all(|c| c.len() == 1 && !c[0].is_positive()));
        let k = encode_graph_constraint(&Graph::complete(3), 0, &l3);
        assert!(k.iter().all(|c| c.len() == 1 && c[0].is_positive()));
    }

    #[test]
    fn neq_examples() {
        let y = [1, 2, 3];
        let d = |c: Clause| c.iter().map(|l| l.to_dimacs()).collect::<Vec<_>>();
        assert_eq!(d(encode_neq(&y, 5).unwrap()), vec![-1, 2, -3]);
        assert_eq!(d(encode_neq(&y, 0).unwrap()), vec![1, 2, 3]);
        assert_eq!(d(encode_neq(&[1], 1).unwrap()), vec![-1]);
        assert!(encode_neq(&y, 8).is_err());
    }

    #[test]
    fn leq_examples() {
        let y = [1, 2, 3];
        let d = |cs: Vec<Clause>| {
            cs.iter()
                .map(|c| c.iter().map(|l| l.to_dimacs()).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        };
        assert_eq!(d(encode_leq(&y, 5).unwrap()), vec![vec![-2, -3]]);
        assert!(encode_leq(&y, 7).unwrap().is_empty());
        assert_eq!(d(encode_leq(&y, 0).unwrap()), vec![vec![-1], vec![-2], vec![-3]]);
        assert!(encode_leq(&y, 9).is_err());
    }

    #[test]
    fn neq_and_leq_agree_with_truth_table() {
        for width in 1..=4usize {
            let vars: Vec<u32> = (1..=width as u32).collect();
            for b in 0..(1u64 << width) {
                let neq = encode_neq(&vars, b).unwrap();
                let leq = encode_leq(&vars, b).unwrap();
                for value in 0..(1u64 << width) {
                    let a = Assignment::from_fn(width as u32, |v| value >> (v - 1) & 1 == 1);
                    assert_eq!(holds(std::slice::from_ref(&neq), &a), value != b);
                    assert_eq!(holds(&leq, &a), value <= b, "width {width} b {b} value {value}");
                }
            }
        }
    }

    #[test]
    fn per_operation_clause_counts() {
        let l = StepLayout::new(3, 1, 2).unwrap();
        // two units for the pairs at 0, one equivalence pair for (1, 2)
        assert_eq!(encode_vd(0, 0, &l).len(), 4);
        assert_eq!(encode_lc(2, 0, &l).len(), 10);
        let inst = SynthesisInstance::new(Graph::empty(3), Graph::empty(3), vec![(0, 1)]).unwrap();
        assert_eq!(encode_ef(0, &inst, 0, &l).unwrap().len(), 6);
        assert_eq!(encode_identity(0, &l).len(), 6);
        for n in 2..8 {
            let l = StepLayout::new(n, 0, 2).unwrap();
            let p = num_pairs(n);
            for k in 0..n {
                assert_eq!(encode_vd(k, 0, &l).len(), (n - 1) + 2 * (p - (n - 1)));
                assert_eq!(encode_lc(k, 0, &l).len(), 6 * num_pairs(n - 1) + 2 * (n - 1));
            }
        }
    }

    #[test]
    fn ef_requires_flip_set() {
        let l = StepLayout::new(3, 0, 2).unwrap();
        let inst = SynthesisInstance::new(Graph::empty(3), Graph::empty(3), vec![]).unwrap();
        assert!(matches!(encode_ef(0, &inst, 0, &l), Err(Error::EmptyFlipSet)));
    }

    #[test]
    fn vd_models_are_exactly_vertex_deletion() {
        let l = StepLayout::new(3, 0, 2).unwrap();
        for k in 0..3 {
            let models = models_over_edges(3, &l, &encode_vd(k, 0, &l));
            assert_eq!(models.len(), 8);
            for (g, h) in models {
                assert_eq!(h, g.delete_vertex_edges(k).unwrap());
                assert!(h.neighborhood(k).unwrap().is_empty());
            }
        }
    }

    #[test]
    fn lc_models_are_exactly_local_complementation() {
        for n in 3..=4 {
            let l = StepLayout::new(n, 0, 2).unwrap();
            for k in 0..n {
                let models = models_over_edges(n, &l, &encode_lc(k, 0, &l));
                assert_eq!(models.len(), 1 << num_pairs(n));
                for (g, h) in models {
                    assert_eq!(h, g.local_complement(k).unwrap());
                }
            }
        }
    }

    #[test]
    fn lc_partial_assignment_forces_toggle() {
        // n=3, k=2: x02 = x12 = true, x01 = false forces x'01 = true
        let l = StepLayout::new(3, 0, 2).unwrap();
        let clauses = encode_lc(2, 0, &l);
        for next01 in [false, true] {
            let mut a = Assignment::new();
            a.set(l.edge_var(0, 0), false);
            a.set(l.edge_var(0, 1), true);
            a.set(l.edge_var(0, 2), true);
            a.set(l.edge_var(1, 0), next01);
            a.set(l.edge_var(1, 1), true);
            a.set(l.edge_var(1, 2), true);
            assert_eq!(holds(&clauses, &a), next01);
        }
    }

    #[test]
    fn ef_models_are_exactly_edge_flips() {
        let l = StepLayout::new(3, 1, 2).unwrap();
        let inst = SynthesisInstance::new(Graph::empty(3), Graph::empty(3), vec![(0, 1)]).unwrap();
        let models = models_over_edges(3, &l, &encode_ef(0, &inst, 0, &l).unwrap());
        assert_eq!(models.len(), 8);
        for (g, h) in models {
            assert_eq!(h, g.flip_edge(0, 1).unwrap());
            assert_ne!(g.has_edge(0, 1), h.has_edge(0, 1));
        }
    }

    #[test]
    fn identity_is_guarded_by_opcode() {
        let l = StepLayout::new(3, 0, 2).unwrap();
        let clauses = encode_identity(0, &l);
        assert_eq!(clauses.len(), 6);
        let [z0, z1] = l.z_vars(0);
        for c in &clauses {
            assert_eq!(&c[..2], &[Lit::neg(z0), Lit::neg(z1)]);
        }
        for (zval, all_models_copy) in [(3u64, true), (0, false), (1, false), (2, false)] {
            let p = 3;
            let mut copies = 0;
            let mut total = 0;
            for bits in 0u64..64 {
                let a = Assignment::from_fn(l.num_vars(), |v| {
                    let i = v as usize - 1;
                    if i < 2 * p {
                        bits >> i & 1 == 1
                    } else if v == z0 {
                        zval & 1 == 1
                    } else if v == z1 {
                        zval & 2 == 2
                    } else {
                        false
                    }
                });
                if holds(&clauses, &a) {
                    total += 1;
                    if bits & 7 == bits >> 3 {
                        copies += 1;
                    }
                }
            }
            if all_models_copy {
                assert_eq!((total, copies), (8, 8));
            } else {
                assert_eq!(total, 64);
            }
        }
    }

    #[test]
    fn bound_examples() {
        let b4 = clause_bound(4, 0);
        assert_eq!(b4.selector_width, 3);
        assert_eq!(b4.clauses, 328.0);
        assert_eq!(b4.stated_vars, 15);
        assert_eq!(b4.vars, 17);
        let b2 = clause_bound(2, 0);
        assert_eq!(b2.selector_width, 2);
        assert_eq!(b2.clauses, 28.0 + 16.0 + 2.0);
        for n in 1..12 {
            for d in 0..20 {
                assert!(clause_bound(n, d).clauses <= clause_bound(n, d + 1).clauses);
            }
        }
    }

    #[test]
    fn transition_counts_stay_under_bound() {
        for n in 2..=10 {
            for d in 0..=num_pairs(n) {
                let flips: Vec<Pair> = pairs(n).take(d).collect();
                let inst = SynthesisInstance::new(Graph::empty(n), Graph::empty(n), flips).unwrap();
                let l = StepLayout::new(n, d, 2).unwrap();
                let count = encode_transition(&inst, 0, &l).len();
                assert!((count as f64) <= clause_bound(n, d).clauses, "n={n} d={d} count={count}");
            }
        }
    }

    #[test]
    fn bmc_rejects_bad_input() {
        let inst = SynthesisInstance::new(star4(), star4(), vec![]).unwrap();
        assert!(matches!(encode_bmc(&inst, 0), Err(Error::BadDepth(0))));
        assert!(matches!(
            SynthesisInstance::new(star4(), Graph::empty(3), vec![]),
            Err(Error::VertexCountMismatch { .. })
        ));
        assert!(SynthesisInstance::new(star4(), star4(), vec![(1, 1)]).is_err());
        assert!(SynthesisInstance::new(star4(), star4(), vec![(1, 2), (2, 1)]).is_err());
        assert!(SynthesisInstance::new(star4(), star4(), vec![(1, 4)]).is_err());
    }

    #[test]
    fn single_state_header() {
        let inst = SynthesisInstance::new(star4(), star4(), vec![]).unwrap();
        let enc = encode_bmc(&inst, 1).unwrap();
        assert!(enc.formula.to_dimacs().starts_with("p cnf 6 6\n"));
        let enc2 = encode_bmc(&inst, 2).unwrap();
        assert_eq!(enc2.formula.num_vars(), 17);
    }

    #[test]
    fn emitted_vars_stay_within_layout() {
        let inst = SynthesisInstance::new(star4(), Graph::complete(4), vec![(1, 2), (0, 3)]).unwrap();
        for states in 1..5 {
            let enc = encode_bmc(&inst, states).unwrap();
            let max = enc
                .formula
                .clauses()
                .iter()
                .flatten()
                .map(|l| l.var())
                .max()
                .unwrap();
            assert!(max <= enc.layout.num_vars());
            assert_eq!(enc.formula.num_vars(), enc.layout.num_vars());
        }
    }
}
