//! Benchmark circuits: small textbook fixtures and a seeded generator of
//! random combinational logic in the size range of the larger ITC'99
//! combinational cores after scaling down.

use std::collections::VecDeque;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::netlist::{parse_bench, simplify, GateKind, NetId, Netlist, NetlistBuilder};

pub const MAJORITY_BENCH: &str = include_str!("../fixtures/majority.bench");
/// Majority with two XOR/XNOR key gates; the secret key (keyinput1, keyinput0) is 01.
pub const MAJORITY_XOR_LOCKED_BENCH: &str = include_str!("../fixtures/majority_xor_locked.bench");
pub const C17_BENCH: &str = include_str!("../fixtures/c17.bench");

pub fn majority() -> Netlist {
    parse_bench(MAJORITY_BENCH).expect("fixture parses")
}

pub fn majority_xor_locked() -> Netlist {
    parse_bench(MAJORITY_XOR_LOCKED_BENCH).expect("fixture parses")
}

pub fn c17() -> Netlist {
    parse_bench(C17_BENCH).expect("fixture parses")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BenchProfile {
    pub name: &'static str,
    pub inputs: usize,
    pub outputs: usize,
    pub gates: usize,
    pub seed: u64,
}

/// Four fixed random benches used throughout the tests.
pub const B_CLASS: [BenchProfile; 4] = [
    BenchProfile {
        name: "rb1",
        inputs: 64,
        outputs: 16,
        gates: 400,
        seed: 101,
    },
    BenchProfile {
        name: "rb2",
        inputs: 80,
        outputs: 24,
        gates: 600,
        seed: 202,
    },
    BenchProfile {
        name: "rb3",
        inputs: 96,
        outputs: 24,
        gates: 800,
        seed: 303,
    },
    BenchProfile {
        name: "rb4",
        inputs: 72,
        outputs: 32,
        gates: 1000,
        seed: 404,
    },
];

pub fn b_class(i: usize) -> Netlist {
    synthetic_bench(&B_CLASS[i])
}

const KINDS: [(GateKind, u32); 7] = [
    (GateKind::And, 20),
    (GateKind::Nand, 20),
    (GateKind::Or, 15),
    (GateKind::Nor, 15),
    (GateKind::Xor, 10),
    (GateKind::Xnor, 6),
    (GateKind::Not, 8),
];

/// Random logic with mostly local connections. Every primary input is used,
/// dangling gates are merged pairwise until `outputs` remain, and the result
/// is simplified.
pub fn synthetic_bench(p: &BenchProfile) -> Netlist {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut b = NetlistBuilder::new();
    let mut nets: Vec<NetId> = (0..p.inputs)
        .map(|i| b.add_input(&format!("i{i}")).expect("fresh"))
        .collect();
    let mut unused: VecDeque<NetId> = nets.iter().copied().collect();
    let mut fanout = vec![0usize; p.inputs];
    let total: u32 = KINDS.iter().map(|k| k.1).sum();
    const WINDOW: usize = 48;
    for t in 0..p.gates {
        let mut pick = rng.gen_range(0..total);
        let kind = KINDS
            .iter()
            .find(|&&(_, w)| {
                if pick < w {
                    true
                } else {
                    pick -= w;
                    false
                }
            })
            .expect("weights cover the range")
            .0;
        let arity = match kind {
            GateKind::Not => 1,
            _ if rng.gen_bool(0.15) => 3,
            _ => 2,
        };
        let mut ins: Vec<usize> = Vec::with_capacity(arity);
        while ins.len() < arity {
            let i = match unused.pop_front() {
                Some(n) => n.index(),
                None if rng.gen_bool(0.75) => {
                    let lo = nets.len().saturating_sub(WINDOW);
                    rng.gen_range(lo..nets.len())
                }
                None => rng.gen_range(0..nets.len()),
            };
            if !ins.contains(&i) {
                ins.push(i);
            }
        }
        let inputs: Vec<NetId> = ins.iter().map(|&i| nets[i]).collect();
        for &i in &ins {
            fanout[i] += 1;
        }
        nets.push(b.add_gate(&format!("n{t}"), kind, inputs).expect("fresh"));
        fanout.push(0);
    }
    let mut dangling: VecDeque<usize> = (p.inputs..nets.len()).filter(|&i| fanout[i] == 0).collect();
    let mut extra = 0;
    while dangling.len() > p.outputs {
        let a = dangling.pop_front().expect("len > outputs");
        let c = dangling.pop_front().expect("len > outputs");
        let kind = [GateKind::Xor, GateKind::And, GateKind::Or][rng.gen_range(0..3)];
        let n = b.add_gate(&format!("m{extra}"), kind, vec![nets[a], nets[c]]).expect("fresh");
        extra += 1;
        nets.push(n);
        dangling.push_back(nets.len() - 1);
    }
    let mut outs: Vec<usize> = dangling.into_iter().collect();
    while outs.len() < p.outputs {
        let i = rng.gen_range(p.inputs..nets.len());
        if !outs.contains(&i) {
            outs.push(i);
        }
    }
    for i in outs {
        b.add_output(nets[i]).expect("distinct");
    }
    simplify(&b.finish().expect("generated netlist is valid"))
}
