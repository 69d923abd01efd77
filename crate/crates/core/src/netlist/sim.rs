//! Topological simulation, one pattern at a time or 64 patterns per word.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{NetId, Netlist};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("no value for inputs: {}", .0.join(", "))]
    MissingInputs(Vec<String>),
    #[error("expected {expected} input values, got {got}")]
    Width { expected: usize, got: usize },
}

/// A partial map from nets to bit values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    values: BTreeMap<NetId, bool>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (NetId, bool)>) -> Assignment {
        Assignment {
            values: pairs.into_iter().collect(),
        }
    }

    pub fn set(&mut self, net: NetId, value: bool) {
        self.values.insert(net, value);
    }

    pub fn get(&self, net: NetId) -> Option<bool> {
        self.values.get(&net).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NetId, bool)> + '_ {
        self.values.iter().map(|(&n, &v)| (n, v))
    }
}

/// Simulates with a full assignment over PIs and key inputs and returns the
/// values of the primary outputs.
pub fn simulate(netlist: &Netlist, assignment: &Assignment) -> Result<Assignment, SimError> {
    let mut missing = Vec::new();
    let mut pi = Vec::with_capacity(netlist.inputs().len());
    for &n in netlist.inputs() {
        match assignment.get(n) {
            Some(v) => pi.push(v),
            None => missing.push(netlist.name(n).to_string()),
        }
    }
    let mut keys = Vec::with_capacity(netlist.keys().len());
    for &n in netlist.keys() {
        match assignment.get(n) {
            Some(v) => keys.push(v),
            None => missing.push(netlist.name(n).to_string()),
        }
    }
    if !missing.is_empty() {
        return Err(SimError::MissingInputs(missing));
    }
    let outs = WordSimulator::new(netlist).eval_bits(&pi, &keys)?;
    Ok(Assignment::from_pairs(
        netlist.outputs().iter().copied().zip(outs),
    ))
}

/// Reusable bit-parallel evaluator: lane `j` of every word is an independent
/// pattern.
pub struct WordSimulator<'a> {
    netlist: &'a Netlist,
    values: Vec<u64>,
    scratch: Vec<u64>,
}

impl<'a> WordSimulator<'a> {
    pub fn new(netlist: &'a Netlist) -> WordSimulator<'a> {
        WordSimulator {
            netlist,
            values: vec![0; netlist.num_nets()],
            scratch: Vec::new(),
        }
    }

    /// Evaluates all nets; `inputs` and `keys` follow the declared orders.
    pub fn run(&mut self, inputs: &[u64], keys: &[u64]) -> Result<(), SimError> {
        let n = self.netlist;
        if inputs.len() != n.inputs().len() {
            return Err(SimError::Width {
                expected: n.inputs().len(),
                got: inputs.len(),
            });
        }
        if keys.len() != n.keys().len() {
            return Err(SimError::Width {
                expected: n.keys().len(),
                got: keys.len(),
            });
        }
        for (&net, &v) in n.inputs().iter().zip(inputs) {
            self.values[net.index()] = v;
        }
        for (&net, &v) in n.keys().iter().zip(keys) {
            self.values[net.index()] = v;
        }
        for g in n.gates() {
            self.scratch.clear();
            self.scratch
                .extend(g.inputs.iter().map(|i| self.values[i.index()]));
            self.values[g.output.index()] = g.kind.eval_words(&self.scratch);
        }
        Ok(())
    }

    pub fn value(&self, net: NetId) -> u64 {
        self.values[net.index()]
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn outputs(&self) -> Vec<u64> {
        self.netlist
            .outputs()
            .iter()
            .map(|o| self.values[o.index()])
            .collect()
    }

    /// Evaluates one pattern and returns PO values in output order.
    pub fn eval_bits(&mut self, inputs: &[bool], keys: &[bool]) -> Result<Vec<bool>, SimError> {
        let w = |b: &bool| if *b { !0u64 } else { 0 };
        let iw: Vec<u64> = inputs.iter().map(w).collect();
        let kw: Vec<u64> = keys.iter().map(w).collect();
        self.run(&iw, &kw)?;
        Ok(self.outputs().iter().map(|v| v & 1 == 1).collect())
    }
}
