//! Observability queries used to place key gates and LUTs where a wrong key
//! is guaranteed to be visible at some primary output.

use cdcl::Budget;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::netlist::{NetId, Netlist};
use crate::sat::{CheckedSolver, Encoder, SatError, Signal, SolveStatus};

use super::LockError;

/// A query running out of conflicts counts as unobservable.
const QUERY_CONFLICTS: u64 = 20_000;

/// Encodes a netlist once with its keys fixed and answers, per net, whether
/// inverting that net changes some output. Each query adds only the fanout
/// cone of the inverted net; the rest is shared by structural hashing.
pub(crate) struct Observer<'a> {
    netlist: &'a Netlist,
    enc: Encoder<CheckedSolver>,
    base: Vec<Signal>,
}

impl<'a> Observer<'a> {
    pub(crate) fn new(netlist: &'a Netlist, key: &[bool]) -> Observer<'a> {
        let mut enc = Encoder::new(CheckedSolver::new());
        let mut sig = vec![None; netlist.num_nets()];
        for &i in netlist.inputs() {
            sig[i.index()] = Some(Signal::Lit(enc.fresh()));
        }
        for (&k, &v) in netlist.keys().iter().zip(key) {
            sig[k.index()] = Some(Signal::Const(v));
        }
        enc.encode(netlist, &mut sig);
        let base = sig
            .into_iter()
            .map(|s| s.unwrap_or(Signal::Const(false)))
            .collect();
        Observer { netlist, enc, base }
    }

    /// Whether inverting `net` changes an output for some input satisfying
    /// every `(net, value)` condition.
    pub(crate) fn observable(&mut self, net: NetId, conditions: &[(NetId, bool)]) -> Result<bool, SatError> {
        let mut assumptions = Vec::new();
        for &(c, v) in conditions {
            match self.base[c.index()] {
                Signal::Const(b) if b != v => return Ok(false),
                Signal::Const(_) => {}
                Signal::Lit(l) => assumptions.push(if v { l } else { !l }),
            }
        }
        let n = self.netlist;
        let mut sig: Vec<Option<Signal>> = vec![None; n.num_nets()];
        for &s in n.inputs().iter().chain(n.keys()) {
            sig[s.index()] = Some(self.base[s.index()]);
        }
        sig[net.index()] = Some(!self.base[net.index()]);
        self.enc.encode(n, &mut sig);
        let diffs: Vec<Signal> = n
            .outputs()
            .iter()
            .map(|o| {
                let flipped = sig[o.index()].expect("encoded");
                self.enc.xor2(self.base[o.index()], flipped)
            })
            .collect();
        match self.enc.or(&diffs) {
            Signal::Const(false) => return Ok(false),
            Signal::Const(true) => {}
            Signal::Lit(l) => assumptions.push(l),
        }
        let budget = Budget {
            conflicts: Some(QUERY_CONFLICTS),
            deadline: None,
            interrupt: None,
        };
        Ok(self.enc.sink.solve_from(&assumptions, Some(budget))? == SolveStatus::Satisfiable)
    }
}

/// `count` distinct observable nets from `candidates`, in random order.
pub(crate) fn pick_observable<R: Rng>(
    netlist: &Netlist,
    candidates: &[NetId],
    count: usize,
    rng: &mut R,
) -> Result<Vec<NetId>, LockError> {
    if count > candidates.len() {
        return Err(LockError::TooFewGates {
            needed: count,
            available: candidates.len(),
        });
    }
    let mut order = candidates.to_vec();
    order.shuffle(rng);
    let mut obs = Observer::new(netlist, &[]);
    let mut chosen = Vec::with_capacity(count);
    for g in order {
        if chosen.len() == count {
            break;
        }
        if obs.observable(g, &[])? {
            chosen.push(g);
        }
    }
    if chosen.len() < count {
        return Err(LockError::TooFewGates {
            needed: count,
            available: chosen.len(),
        });
    }
    Ok(chosen)
}

/// Gate outputs that are not constants.
pub(crate) fn logic_gates(netlist: &Netlist) -> Vec<NetId> {
    netlist
        .gates()
        .iter()
        .filter(|g| !g.kind.is_const())
        .map(|g| g.output)
        .collect()
}
