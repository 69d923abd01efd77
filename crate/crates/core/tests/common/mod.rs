#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use cipherlock::netlist::{GateKind, NetId, Netlist, NetlistBuilder, WordSimulator};
use proptest::prelude::*;

/// Bit `i` of `pattern` drives primary input `i`.
pub fn pattern_bits(pattern: usize, width: usize) -> Vec<bool> {
    (0..width).map(|i| pattern >> i & 1 == 1).collect()
}

/// Output vectors for every input pattern.
pub fn truth_table(n: &Netlist, key: &[bool]) -> Vec<Vec<bool>> {
    let w = n.inputs().len();
    assert!(w <= 16);
    let mut sim = WordSimulator::new(n);
    (0..1usize << w)
        .map(|p| sim.eval_bits(&pattern_bits(p, w), key).unwrap())
        .collect()
}

/// Patterns on which the two netlists disagree (same input/output order).
pub fn corrupted(original: &Netlist, locked: &Netlist, key: &[bool]) -> Vec<usize> {
    let a = truth_table(original, &[]);
    let b = truth_table(locked, key);
    (0..a.len()).filter(|&p| a[p] != b[p]).collect()
}

/// Gate-by-gate evaluation with `flip` inverted after it is computed.
pub fn eval_with_flip(n: &Netlist, inputs: &[bool], flip: Option<NetId>) -> (Vec<bool>, Vec<bool>) {
    let mut v = vec![false; n.num_nets()];
    for (&i, &b) in n.inputs().iter().zip(inputs) {
        v[i.index()] = b;
    }
    for g in n.gates() {
        let ins: Vec<bool> = g.inputs.iter().map(|i| v[i.index()]).collect();
        v[g.output.index()] = g.kind.eval(&ins) ^ (Some(g.output) == flip);
    }
    let outs = n.outputs().iter().map(|o| v[o.index()]).collect();
    (outs, v)
}

/// Shape of a small random netlist: sources, then gates whose pins pick
/// among earlier nets, then outputs picked among the gates.
#[derive(Clone, Debug)]
pub struct Shape {
    pub inputs: usize,
    pub keys: usize,
    pub gates: Vec<(usize, [usize; 3])>,
    pub outputs: Vec<usize>,
}

pub fn shape(max_inputs: usize, max_keys: usize, max_gates: usize) -> impl Strategy<Value = Shape> {
    (
        1..=max_inputs,
        0..=max_keys,
        proptest::collection::vec((0..GateKind::ALL.len(), [0..64usize, 0..64usize, 0..64usize]), 1..=max_gates),
        proptest::collection::vec(0..64usize, 1..4),
    )
        .prop_map(|(inputs, keys, gates, outputs)| Shape {
            inputs,
            keys,
            gates,
            outputs,
        })
}

pub fn build(s: &Shape) -> Netlist {
    let mut b = NetlistBuilder::new();
    let mut nets: Vec<NetId> = (0..s.inputs)
        .map(|i| b.add_input(&format!("x{i}")).unwrap())
        .collect();
    for k in 0..s.keys {
        nets.push(b.add_key(&format!("keyinput{k}")).unwrap());
    }
    let mut gates = Vec::new();
    for (j, &(kind, picks)) in s.gates.iter().enumerate() {
        let kind = GateKind::ALL[kind];
        let arity = match kind {
            GateKind::Const0 | GateKind::Const1 => 0,
            GateKind::Not | GateKind::Buf => 1,
            GateKind::Mux2 => 3,
            _ => 2 + picks[2] % 2,
        };
        let ins = picks[..arity].iter().map(|&p| nets[p % nets.len()]).collect();
        let g = b.add_gate(&format!("g{j}"), kind, ins).unwrap();
        nets.push(g);
        gates.push(g);
    }
    let mut outs: Vec<NetId> = s.outputs.iter().map(|&p| gates[p % gates.len()]).collect();
    outs.sort();
    outs.dedup();
    for o in outs {
        b.add_output(o).unwrap();
    }
    b.finish().unwrap()
}

/// Output values by name, with every source looked up by name in `env`.
pub fn eval_named(n: &Netlist, env: &HashMap<String, bool>) -> BTreeMap<String, bool> {
    let look = |ids: &[NetId]| -> Vec<bool> { ids.iter().map(|&i| env[n.name(i)]).collect() };
    let outs = WordSimulator::new(n)
        .eval_bits(&look(n.inputs()), &look(n.keys()))
        .unwrap();
    n.output_names().into_iter().zip(outs).collect()
}

/// Every assignment of the sources of `n`, keyed by source name.
pub fn all_envs(n: &Netlist) -> Vec<HashMap<String, bool>> {
    let names: Vec<String> = n.input_names().into_iter().chain(n.key_names()).collect();
    assert!(names.len() <= 16);
    (0..1usize << names.len())
        .map(|p| {
            names
                .iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), p >> i & 1 == 1))
                .collect()
        })
        .collect()
}
