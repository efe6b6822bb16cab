//! Turning solver models into operation sequences, and checking those
//! sequences against the graph semantics.

use std::fmt::Write as _;

use crate::cnf::Assignment;
use crate::encoder::{opcode, StepLayout, SynthesisInstance};
use crate::error::{Error, Result};
use crate::graph::{normalize, parse_pair, Graph, Operation, Pair};

/// Operation sequence together with every intermediate graph.
///
/// `states.len() == ops.len() + 1`; `states[0]` is the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub ops: Vec<Operation>,
    pub states: Vec<Graph>,
}

impl Witness {
    /// Replays `ops` from `source`, recording each state.
    pub fn from_ops(source: &Graph, ops: Vec<Operation>, flips: &[Pair]) -> Result<Witness> {
        let mut states = Vec::with_capacity(ops.len() + 1);
        states.push(source.clone());
        for &op in &ops {
            let next = states.last().expect("non-empty").apply(op, flips)?;
            states.push(next);
        }
        Ok(Witness { ops, states })
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn final_state(&self) -> &Graph {
        self.states.last().expect("a witness has at least one state")
    }
}

fn read_bits(model: &Assignment, vars: &[u32]) -> Result<u64> {
    let mut value = 0u64;
    for (i, &v) in vars.iter().enumerate() {
        if model.value(v).ok_or(Error::IncompleteModel(v))? {
            value |= 1 << i;
        }
    }
    Ok(value)
}

/// Reads every state and selector block out of `model`.
pub fn decode(model: &Assignment, layout: &StepLayout, flips: &[Pair]) -> Result<Witness> {
    if let Some(v) = model.first_missing(layout.num_vars()) {
        return Err(Error::IncompleteModel(v));
    }
    let states = (0..layout.states())
        .map(|t| {
            let mut g = Graph::empty(layout.n());
            for e in 0..layout.pairs_per_state() {
                g.set_pair(e, model.value(layout.edge_var(t, e)) == Some(true));
            }
            g
        })
        .collect();

    let n = layout.n() as u64;
    let d = flips.len() as u64;
    let mut ops = Vec::with_capacity(layout.transitions());
    for t in 0..layout.transitions() {
        let y = read_bits(model, &layout.y_vars(t))?;
        let z = read_bits(model, &layout.z_vars(t))?;
        let op = match z {
            opcode::LC if y < n => Operation::Lc(y as usize),
            opcode::VD if y < n => Operation::Vd(y as usize),
            opcode::EF if y < d => Operation::Ef(y as usize),
            opcode::ID if y == 0 => Operation::Id,
            _ => return Err(Error::BadSelector { y, z }),
        };
        ops.push(op);
    }
    Ok(Witness { ops, states })
}

/// Drops identity steps and any step that leaves the graph unchanged.
pub fn strip_identities(w: &Witness) -> Witness {
    let mut ops = Vec::new();
    let mut states = vec![w.states[0].clone()];
    for (op, next) in w.ops.iter().zip(&w.states[1..]) {
        if *op == Operation::Id || next == states.last().expect("non-empty") {
            continue;
        }
        ops.push(*op);
        states.push(next.clone());
    }
    Witness { ops, states }
}

/// Where a witness stops matching the graph semantics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divergence {
    /// Index of the offending operation (0 when the start state is wrong).
    pub step: usize,
    pub reason: String,
}

/// Recomputes every transition from the instance source and compares with
/// the recorded states and the target.
pub fn replay_verify(inst: &SynthesisInstance, w: &Witness) -> std::result::Result<(), Divergence> {
    let fail = |step, reason: String| Err(Divergence { step, reason });
    if w.states.len() != w.ops.len() + 1 {
        return fail(0, format!("{} ops but {} states", w.ops.len(), w.states.len()));
    }
    if &w.states[0] != inst.source() {
        return fail(0, "first state is not the source graph".into());
    }
    let mut cur = inst.source().clone();
    for (step, (&op, recorded)) in w.ops.iter().zip(&w.states[1..]).enumerate() {
        cur = match cur.apply(op, inst.flips()) {
            Ok(g) => g,
            Err(e) => return fail(step, format!("{op} is not applicable: {e}")),
        };
        if &cur != recorded {
            return fail(step, format!("{op} yields {cur:?}, recorded {recorded:?}"));
        }
    }
    if &cur != inst.target() {
        return fail(
            w.ops.len().saturating_sub(1),
            format!("final graph {cur:?} differs from target {:?}", inst.target()),
        );
    }
    Ok(())
}

/// Witness file text: `LC k`, `VD k` or `EF u v`, one per line.
pub fn format_ops(ops: &[Operation], flips: &[Pair]) -> String {
    let mut out = String::new();
    for op in ops {
        match *op {
            Operation::Lc(k) => writeln!(out, "LC {k}"),
            Operation::Vd(k) => writeln!(out, "VD {k}"),
            Operation::Ef(i) => {
                let (u, v) = flips[i];
                writeln!(out, "EF {u} {v}")
            }
            Operation::Id => writeln!(out, "ID"),
        }
        .expect("writing to a String cannot fail");
    }
    out
}

/// Parses the witness file text. `EF u v` must name a pair of `flips`.
/// Blank lines and `#` comments are ignored.
pub fn parse_ops(text: &str, flips: &[Pair]) -> Result<Vec<Operation>> {
    let mut ops = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (tag, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let vertex = || -> Result<usize> {
            rest.trim()
                .parse()
                .map_err(|e| Error::parse(lno, format!("bad vertex: {e}")))
        };
        let op = match tag {
            "LC" => Operation::Lc(vertex()?),
            "VD" => Operation::Vd(vertex()?),
            "ID" if rest.trim().is_empty() => Operation::Id,
            "EF" => {
                let (u, v) = parse_pair(lno, rest)?;
                let pair = normalize(u, v).map_err(|e| Error::parse(lno, e.to_string()))?;
                let idx = flips
                    .iter()
                    .position(|&p| p == pair)
                    .ok_or_else(|| Error::parse(lno, format!("pair {u} {v} is not in the flip set")))?;
                Operation::Ef(idx)
            }
            _ => return Err(Error::parse(lno, format!("unknown operation `{line}`"))),
        };
        ops.push(op);
    }
    Ok(ops)
}
