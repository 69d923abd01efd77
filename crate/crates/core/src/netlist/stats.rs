use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{GateKind, Netlist};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetlistStats {
    pub gates_by_kind: BTreeMap<String, usize>,
    pub gates: usize,
    pub inputs: usize,
    pub outputs: usize,
    pub keys: usize,
    /// Longest source-to-net path counted in gates; constants have depth 0.
    pub depth: usize,
}

impl NetlistStats {
    pub fn count(&self, kind: GateKind) -> usize {
        self.gates_by_kind.get(kind.name()).copied().unwrap_or(0)
    }
}

pub fn stats(netlist: &Netlist) -> NetlistStats {
    let mut by_kind = BTreeMap::new();
    let mut depth = vec![0usize; netlist.num_nets()];
    let mut max_depth = 0;
    for g in netlist.gates() {
        *by_kind.entry(g.kind.name().to_string()).or_insert(0) += 1;
        let d = if g.kind.is_const() {
            0
        } else {
            1 + g.inputs.iter().map(|i| depth[i.index()]).max().unwrap_or(0)
        };
        depth[g.output.index()] = d;
        max_depth = max_depth.max(d);
    }
    NetlistStats {
        gates_by_kind: by_kind,
        gates: netlist.gates().len(),
        inputs: netlist.inputs().len(),
        outputs: netlist.outputs().len(),
        keys: netlist.keys().len(),
        depth: max_depth,
    }
}
