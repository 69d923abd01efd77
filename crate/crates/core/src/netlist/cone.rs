//! Transitive fan-in cones and source supports.

use std::collections::BTreeSet;

use super::{NetId, Netlist, NetlistBuilder, NetlistError};

/// A dense set of small integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(capacity: usize) -> BitSet {
        BitSet {
            words: vec![0; capacity.div_ceil(64)],
        }
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| wi * 64 + b)
        })
    }
}

/// Source support of every net, indexed by net. Bit `i` of a set stands for
/// the `i`-th source, counting primary inputs first and key inputs after.
pub fn support_sets(netlist: &Netlist) -> Vec<BitSet> {
    let width = netlist.inputs().len() + netlist.keys().len();
    let mut sets: Vec<BitSet> = vec![BitSet::new(width); netlist.num_nets()];
    for (i, &s) in netlist.inputs().iter().chain(netlist.keys()).enumerate() {
        sets[s.index()].insert(i);
    }
    for g in netlist.gates() {
        let mut acc = BitSet::new(width);
        for i in &g.inputs {
            acc.union_with(&sets[i.index()]);
        }
        sets[g.output.index()] = acc;
    }
    sets
}

#[derive(Clone, Debug)]
pub struct Cone {
    /// PIs and key inputs reachable backward from the root.
    pub support: BTreeSet<NetId>,
    /// Gate outputs in the transitive fan-in, in topological order.
    pub gates: Vec<NetId>,
    /// The cone as a standalone netlist with the root as its only output.
    pub netlist: Netlist,
}

pub fn logic_cone(netlist: &Netlist, root: NetId) -> Result<Cone, NetlistError> {
    if root.index() >= netlist.num_nets() {
        return Err(NetlistError::UnknownNet(format!("#{}", root.index())));
    }
    let mut marked = vec![false; netlist.num_nets()];
    let mut stack = vec![root];
    marked[root.index()] = true;
    while let Some(net) = stack.pop() {
        if let Some(g) = netlist.gate_of(net) {
            for &i in &g.inputs {
                if !marked[i.index()] {
                    marked[i.index()] = true;
                    stack.push(i);
                }
            }
        }
    }
    let support: BTreeSet<NetId> = netlist
        .inputs()
        .iter()
        .chain(netlist.keys())
        .copied()
        .filter(|s| marked[s.index()])
        .collect();
    let gates: Vec<NetId> = netlist
        .gates()
        .iter()
        .map(|g| g.output)
        .filter(|o| marked[o.index()])
        .collect();

    let mut b = NetlistBuilder::new();
    for &i in netlist.inputs() {
        if marked[i.index()] {
            b.add_input(netlist.name(i))?;
        }
    }
    for &k in netlist.keys() {
        if marked[k.index()] {
            b.add_key(netlist.name(k))?;
        }
    }
    for &o in &gates {
        let g = netlist.gate_of(o).expect("gate");
        let ins = g.inputs.iter().map(|&i| b.net(netlist.name(i))).collect();
        b.add_gate(netlist.name(o), g.kind, ins)?;
    }
    let r = b.net(netlist.name(root));
    b.add_output(r)?;
    Ok(Cone {
        support,
        gates,
        netlist: b.finish()?,
    })
}
