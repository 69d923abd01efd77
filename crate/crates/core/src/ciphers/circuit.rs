//! A small gate-level construction layer shared by the cipher builders.
//!
//! Signals carry a lazy inversion flag and constants fold on the fly, so
//! constant round material and key-schedule negations cost no gates.

use std::collections::{HashMap, HashSet};

use crate::netlist::{GateKind, NetId, Netlist, NetlistBuilder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Bit {
    Const(bool),
    /// A net, complemented when the flag is set.
    Net(NetId, bool),
}

impl std::ops::Not for Bit {
    type Output = Bit;

    fn not(self) -> Bit {
        match self {
            Bit::Const(v) => Bit::Const(!v),
            Bit::Net(n, inv) => Bit::Net(n, !inv),
        }
    }
}

pub(crate) struct Circuit {
    b: NetlistBuilder,
    nots: HashMap<NetId, NetId>,
    claimed: HashSet<NetId>,
}

impl Circuit {
    pub(crate) fn new() -> Circuit {
        Circuit {
            b: NetlistBuilder::new(),
            nots: HashMap::new(),
            claimed: HashSet::new(),
        }
    }

    pub(crate) fn input(&mut self, name: &str) -> Bit {
        let id = self.b.add_input(name).expect("cipher input names are unique");
        self.claimed.insert(id);
        Bit::Net(id, false)
    }

    /// Inputs `{stem}[width-1]` down to `{stem}[0]`, returned LSB-first.
    pub(crate) fn input_vector(&mut self, stem: &str, width: usize) -> Vec<Bit> {
        let mut v: Vec<Bit> = (0..width)
            .rev()
            .map(|i| self.input(&format!("{stem}[{i}]")))
            .collect();
        v.reverse();
        v
    }

    /// A net carrying `bit` in positive polarity.
    fn positive(&mut self, bit: Bit) -> NetId {
        match bit {
            Bit::Net(n, false) => n,
            Bit::Net(n, true) => {
                if let Some(&m) = self.nots.get(&n) {
                    return m;
                }
                let m = self.b.gate(GateKind::Not, vec![n]);
                self.nots.insert(n, m);
                m
            }
            Bit::Const(v) => {
                let kind = if v { GateKind::Const1 } else { GateKind::Const0 };
                self.b.gate(kind, vec![])
            }
        }
    }

    pub(crate) fn and(&mut self, a: Bit, c: Bit) -> Bit {
        match (a, c) {
            (Bit::Const(false), _) | (_, Bit::Const(false)) => Bit::Const(false),
            (Bit::Const(true), x) | (x, Bit::Const(true)) => x,
            (Bit::Net(x, p), Bit::Net(y, q)) if x == y => {
                if p == q {
                    a
                } else {
                    Bit::Const(false)
                }
            }
            (Bit::Net(x, true), Bit::Net(y, true)) => {
                Bit::Net(self.b.gate(GateKind::Nor, vec![x, y]), false)
            }
            _ => {
                let x = self.positive(a);
                let y = self.positive(c);
                Bit::Net(self.b.gate(GateKind::And, vec![x, y]), false)
            }
        }
    }

    /// Balanced XOR over `terms`. Complements and constants fold into one
    /// parity bit, which turns the root into an XNOR.
    pub(crate) fn xor(&mut self, terms: &[Bit]) -> Bit {
        let mut parity = false;
        let mut level: Vec<NetId> = Vec::with_capacity(terms.len());
        for &t in terms {
            match t {
                Bit::Const(v) => parity ^= v,
                Bit::Net(n, inv) => {
                    parity ^= inv;
                    level.push(n);
                }
            }
        }
        match level.len() {
            0 => return Bit::Const(parity),
            1 => return Bit::Net(level[0], parity),
            _ => {}
        }
        while level.len() > 2 {
            let mut next = Vec::with_capacity(level.len().div_ceil(2));
            for pair in level.chunks(2) {
                next.push(match pair {
                    [a, b] => self.b.gate(GateKind::Xor, vec![*a, *b]),
                    [a] => *a,
                    _ => unreachable!(),
                });
            }
            level = next;
        }
        let kind = if parity { GateKind::Xnor } else { GateKind::Xor };
        Bit::Net(self.b.gate(kind, level), false)
    }

    pub(crate) fn xor2(&mut self, a: Bit, b: Bit) -> Bit {
        self.xor(&[a, b])
    }

    /// Drives the primary output `name` with `bit`, renaming the driving
    /// gate when it is internal and unclaimed.
    pub(crate) fn output(&mut self, name: &str, bit: Bit) {
        let id = match bit {
            Bit::Net(n, false) if !self.claimed.contains(&n) => {
                self.b.rename(n, name);
                n
            }
            Bit::Net(n, false) => self.b.add_gate(name, GateKind::Buf, vec![n]).expect("fresh output"),
            Bit::Net(n, true) => self.b.add_gate(name, GateKind::Not, vec![n]).expect("fresh output"),
            Bit::Const(v) => {
                let kind = if v { GateKind::Const1 } else { GateKind::Const0 };
                self.b.add_gate(name, kind, vec![]).expect("fresh output")
            }
        };
        self.claimed.insert(id);
        self.b.add_output(id).expect("distinct outputs");
    }

    /// Outputs `{stem}[width-1]` down to `{stem}[0]` from an LSB-first vector.
    pub(crate) fn output_vector(&mut self, stem: &str, bits: &[Bit]) {
        for i in (0..bits.len()).rev() {
            self.output(&format!("{stem}[{i}]"), bits[i]);
        }
    }

    pub(crate) fn finish(self) -> Netlist {
        self.b.finish().expect("cipher circuits are well formed")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::WordSimulator;

    #[test]
    fn xor_tree_folds_constants_and_inversions() {
        let mut c = Circuit::new();
        let v = c.input_vector("a", 3);
        let r = c.xor(&[v[0], !v[1], v[2], Bit::Const(true)]);
        assert_eq!(c.xor(&[v[0], Bit::Const(true)]), Bit::Net(match v[0] {
            Bit::Net(n, _) => n,
            _ => unreachable!(),
        }, true));
        c.output("o", r);
        let n = c.finish();
        assert_eq!(n.gates().len(), 2);
        let mut sim = WordSimulator::new(&n);
        for p in 0..8u32 {
            let ins: Vec<bool> = (0..3).rev().map(|i| p >> i & 1 == 1).collect();
            let want = (p.count_ones() % 2 == 1) ^ true ^ true;
            assert_eq!(sim.eval_bits(&ins, &[]).unwrap(), vec![want]);
        }
    }

    #[test]
    fn and_with_complements_shares_inverters() {
        let mut c = Circuit::new();
        let v = c.input_vector("a", 2);
        let x = c.and(!v[0], v[1]);
        let y = c.and(!v[0], Bit::Const(true));
        let z = c.and(!v[0], !v[1]);
        let w = c.and(v[1], x);
        c.output("x", x);
        c.output("y", y);
        c.output("z", z);
        c.output("w", w);
        let n = c.finish();
        let nots = n.gates().iter().filter(|g| g.kind == GateKind::Not).count();
        assert_eq!(nots, 2, "one shared inverter plus the inverted output");
    }
}
