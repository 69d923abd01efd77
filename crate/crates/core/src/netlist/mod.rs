//! Gate-level combinational netlist IR.
//!
//! A [`Netlist`] is immutable once built. Every net is either a source
//! (primary input or key input) or the output of exactly one gate, and the
//! gate list is kept in a deterministic topological order. Transformations
//! produce new netlists through [`NetlistBuilder`].

mod bench;
mod cone;
mod rewrite;
mod sim;
mod stats;
mod verilog;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

pub use bench::{ParseError, ParseErrorKind, emit_bench, emit_bench_with, parse_bench, parse_bench_with, BenchOptions};
pub use cone::{logic_cone, support_sets, BitSet, Cone};
pub use rewrite::{propagate_constants, remove_dead_logic, simplify};
pub use sim::{simulate, Assignment, SimError, WordSimulator};
pub use stats::{stats, NetlistStats};
pub use verilog::{parse_structural_verilog, parse_structural_verilog_with};

/// Name prefix marking key inputs in formats without a key-input declaration.
pub const DEFAULT_KEY_PREFIX: &str = "keyinput";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NetId(u32);

impl NetId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    fn from_index(i: usize) -> NetId {
        NetId(u32::try_from(i).expect("net count exceeds u32"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    And,
    Nand,
    Or,
    Nor,
    Xor,
    Xnor,
    Not,
    Buf,
    /// Inputs `[in0, in1, select]`; output is `in1` when `select` is 1.
    Mux2,
    Const0,
    Const1,
}

impl GateKind {
    pub const ALL: [GateKind; 11] = [
        GateKind::And,
        GateKind::Nand,
        GateKind::Or,
        GateKind::Nor,
        GateKind::Xor,
        GateKind::Xnor,
        GateKind::Not,
        GateKind::Buf,
        GateKind::Mux2,
        GateKind::Const0,
        GateKind::Const1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Nand => "NAND",
            GateKind::Or => "OR",
            GateKind::Nor => "NOR",
            GateKind::Xor => "XOR",
            GateKind::Xnor => "XNOR",
            GateKind::Not => "NOT",
            GateKind::Buf => "BUF",
            GateKind::Mux2 => "MUX2",
            GateKind::Const0 => "CONST0",
            GateKind::Const1 => "CONST1",
        }
    }

    pub fn arity_ok(self, n: usize) -> bool {
        match self {
            GateKind::Not | GateKind::Buf => n == 1,
            GateKind::Mux2 => n == 3,
            GateKind::Const0 | GateKind::Const1 => n == 0,
            _ => n >= 2,
        }
    }

    pub fn is_const(self) -> bool {
        matches!(self, GateKind::Const0 | GateKind::Const1)
    }

    /// Evaluates the gate on bit-parallel words.
    pub fn eval_words(self, inputs: &[u64]) -> u64 {
        match self {
            GateKind::And => inputs.iter().fold(!0, |a, &b| a & b),
            GateKind::Nand => !inputs.iter().fold(!0, |a, &b| a & b),
            GateKind::Or => inputs.iter().fold(0, |a, &b| a | b),
            GateKind::Nor => !inputs.iter().fold(0, |a, &b| a | b),
            GateKind::Xor => inputs.iter().fold(0, |a, &b| a ^ b),
            GateKind::Xnor => !inputs.iter().fold(0, |a, &b| a ^ b),
            GateKind::Not => !inputs[0],
            GateKind::Buf => inputs[0],
            GateKind::Mux2 => (inputs[0] & !inputs[2]) | (inputs[1] & inputs[2]),
            GateKind::Const0 => 0,
            GateKind::Const1 => !0,
        }
    }

    pub fn eval(self, inputs: &[bool]) -> bool {
        let words: Vec<u64> = inputs.iter().map(|&b| if b { !0 } else { 0 }).collect();
        self.eval_words(&words) & 1 == 1
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NetRole {
    PrimaryInput,
    KeyInput,
    PrimaryOutput,
    Internal,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gate {
    pub kind: GateKind,
    pub inputs: Vec<NetId>,
    pub output: NetId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Driver {
    PrimaryInput,
    KeyInput,
    /// Index into [`Netlist::gates`].
    Gate(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetlistError {
    #[error("net `{0}` is used but never defined")]
    Undefined(String),
    #[error("net `{0}` is defined more than once")]
    Duplicate(String),
    #[error("cyclic dependency through net `{0}`")]
    Cycle(String),
    #[error("gate `{name}` of kind {kind} cannot take {got} inputs")]
    Arity {
        name: String,
        kind: GateKind,
        got: usize,
    },
    #[error("net `{0}` is listed as an output more than once")]
    DuplicateOutput(String),
    #[error("no net named `{0}`")]
    UnknownNet(String),
}

#[derive(Clone, Debug)]
pub struct Netlist {
    names: Vec<String>,
    drivers: Vec<Driver>,
    gates: Vec<Gate>,
    inputs: Vec<NetId>,
    keys: Vec<NetId>,
    outputs: Vec<NetId>,
    index: HashMap<String, NetId>,
    is_output: Vec<bool>,
}

impl Netlist {
    pub fn empty() -> Netlist {
        NetlistBuilder::new().finish().expect("empty netlist is valid")
    }

    pub fn num_nets(&self) -> usize {
        self.names.len()
    }

    pub fn net_ids(&self) -> impl Iterator<Item = NetId> {
        (0..self.names.len()).map(NetId::from_index)
    }

    pub fn name(&self, net: NetId) -> &str {
        &self.names[net.index()]
    }

    pub fn find(&self, name: &str) -> Option<NetId> {
        self.index.get(name).copied()
    }

    pub fn net(&self, name: &str) -> Result<NetId, NetlistError> {
        self.find(name)
            .ok_or_else(|| NetlistError::UnknownNet(name.to_string()))
    }

    pub fn driver(&self, net: NetId) -> Driver {
        self.drivers[net.index()]
    }

    /// The gate driving `net`, if any.
    pub fn gate_of(&self, net: NetId) -> Option<&Gate> {
        match self.drivers[net.index()] {
            Driver::Gate(g) => Some(&self.gates[g]),
            _ => None,
        }
    }

    pub fn is_source(&self, net: NetId) -> bool {
        !matches!(self.drivers[net.index()], Driver::Gate(_))
    }

    pub fn is_key(&self, net: NetId) -> bool {
        self.drivers[net.index()] == Driver::KeyInput
    }

    pub fn is_input(&self, net: NetId) -> bool {
        self.drivers[net.index()] == Driver::PrimaryInput
    }

    pub fn is_output(&self, net: NetId) -> bool {
        self.is_output[net.index()]
    }

    /// Role of a net; a source listed as an output reports its source role.
    pub fn role(&self, net: NetId) -> NetRole {
        match self.drivers[net.index()] {
            Driver::PrimaryInput => NetRole::PrimaryInput,
            Driver::KeyInput => NetRole::KeyInput,
            Driver::Gate(_) if self.is_output(net) => NetRole::PrimaryOutput,
            Driver::Gate(_) => NetRole::Internal,
        }
    }

    /// Gates in topological order.
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn inputs(&self) -> &[NetId] {
        &self.inputs
    }

    pub fn keys(&self) -> &[NetId] {
        &self.keys
    }

    pub fn outputs(&self) -> &[NetId] {
        &self.outputs
    }

    pub fn input_names(&self) -> Vec<String> {
        self.inputs.iter().map(|&n| self.name(n).to_string()).collect()
    }

    pub fn key_names(&self) -> Vec<String> {
        self.keys.iter().map(|&n| self.name(n).to_string()).collect()
    }

    pub fn output_names(&self) -> Vec<String> {
        self.outputs.iter().map(|&n| self.name(n).to_string()).collect()
    }

    /// Gate consumers of every net, indexed by net.
    pub fn fanouts(&self) -> Vec<Vec<NetId>> {
        let mut fo = vec![Vec::new(); self.num_nets()];
        for g in &self.gates {
            for &i in &g.inputs {
                if fo[i.index()].last() != Some(&g.output) {
                    fo[i.index()].push(g.output);
                }
            }
        }
        fo
    }

    /// Position of every PI and key input within its ordered list.
    pub fn source_positions(&self) -> HashMap<NetId, usize> {
        self.inputs
            .iter()
            .chain(self.keys.iter())
            .enumerate()
            .map(|(i, &n)| {
                let pos = if i < self.inputs.len() { i } else { i - self.inputs.len() };
                (n, pos)
            })
            .collect()
    }

    /// Copies the netlist into a builder for further editing.
    pub fn to_builder(&self) -> NetlistBuilder {
        let mut b = NetlistBuilder::new();
        for name in &self.names {
            b.net(name);
        }
        for &i in &self.inputs {
            b.drivers[i.index()] = Some(Pending::Input);
            b.inputs.push(i);
        }
        for &k in &self.keys {
            b.drivers[k.index()] = Some(Pending::Key);
            b.keys.push(k);
        }
        for g in &self.gates {
            b.drivers[g.output.index()] = Some(Pending::Gate(g.kind, g.inputs.clone()));
            b.gate_order.push(g.output);
        }
        b.outputs = self.outputs.clone();
        b
    }
}

/// Netlists compare equal when their emitted bench text is identical.
impl PartialEq for Netlist {
    fn eq(&self, other: &Netlist) -> bool {
        emit_bench(self) == emit_bench(other)
    }
}

#[derive(Clone, Debug)]
enum Pending {
    Input,
    Key,
    Gate(GateKind, Vec<NetId>),
}

/// Incremental netlist construction with forward references.
///
/// Nets are created on first mention by name and may be defined later.
/// [`NetlistBuilder::finish`] validates drivers, arities and acyclicity and
/// fixes the topological order.
#[derive(Clone, Debug, Default)]
pub struct NetlistBuilder {
    names: Vec<String>,
    index: HashMap<String, NetId>,
    drivers: Vec<Option<Pending>>,
    inputs: Vec<NetId>,
    keys: Vec<NetId>,
    outputs: Vec<NetId>,
    gate_order: Vec<NetId>,
    fresh: usize,
}

impl NetlistBuilder {
    pub fn new() -> NetlistBuilder {
        NetlistBuilder::default()
    }

    /// Returns the net called `name`, creating an undriven one if needed.
    pub fn net(&mut self, name: &str) -> NetId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = NetId::from_index(self.names.len());
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        self.drivers.push(None);
        id
    }

    pub fn find(&self, name: &str) -> Option<NetId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, net: NetId) -> &str {
        &self.names[net.index()]
    }

    pub fn num_nets(&self) -> usize {
        self.names.len()
    }

    pub fn contains_name(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn is_defined(&self, net: NetId) -> bool {
        self.drivers[net.index()].is_some()
    }

    /// A name of the form `{stem}{n}` not used by any net.
    pub fn fresh_name(&mut self, stem: &str) -> String {
        loop {
            let candidate = format!("{stem}{}", self.fresh);
            self.fresh += 1;
            if !self.index.contains_key(&candidate) {
                return candidate;
            }
        }
    }

    fn define(&mut self, net: NetId, driver: Pending) -> Result<(), NetlistError> {
        if self.drivers[net.index()].is_some() {
            return Err(NetlistError::Duplicate(self.names[net.index()].clone()));
        }
        self.drivers[net.index()] = Some(driver);
        Ok(())
    }

    pub fn add_input(&mut self, name: &str) -> Result<NetId, NetlistError> {
        let id = self.net(name);
        self.define(id, Pending::Input)?;
        self.inputs.push(id);
        Ok(id)
    }

    pub fn add_key(&mut self, name: &str) -> Result<NetId, NetlistError> {
        let id = self.net(name);
        self.define(id, Pending::Key)?;
        self.keys.push(id);
        Ok(id)
    }

    /// Defines the named net as the output of a new gate.
    pub fn add_gate(
        &mut self,
        name: &str,
        kind: GateKind,
        inputs: Vec<NetId>,
    ) -> Result<NetId, NetlistError> {
        let id = self.net(name);
        self.define_gate(id, kind, inputs)?;
        Ok(id)
    }

    /// Defines an existing, so far undriven net as the output of a gate.
    pub fn define_gate(
        &mut self,
        net: NetId,
        kind: GateKind,
        inputs: Vec<NetId>,
    ) -> Result<(), NetlistError> {
        if !kind.arity_ok(inputs.len()) {
            return Err(NetlistError::Arity {
                name: self.names[net.index()].clone(),
                kind,
                got: inputs.len(),
            });
        }
        self.define(net, Pending::Gate(kind, inputs))?;
        self.gate_order.push(net);
        Ok(())
    }

    /// Adds a gate on a freshly named net (`_n{k}`).
    pub fn gate(&mut self, kind: GateKind, inputs: Vec<NetId>) -> NetId {
        let name = self.fresh_name("_n");
        self.add_gate(&name, kind, inputs)
            .expect("fresh gate with checked arity")
    }

    /// Adds a gate named `preferred` when that name is free, otherwise fresh.
    pub fn gate_named(&mut self, preferred: &str, kind: GateKind, inputs: Vec<NetId>) -> NetId {
        if self.contains_name(preferred) {
            self.gate(kind, inputs)
        } else {
            self.add_gate(preferred, kind, inputs)
                .expect("unused name with checked arity")
        }
    }

    pub fn add_output(&mut self, net: NetId) -> Result<(), NetlistError> {
        if self.outputs.contains(&net) {
            return Err(NetlistError::DuplicateOutput(self.names[net.index()].clone()));
        }
        self.outputs.push(net);
        Ok(())
    }

    pub fn outputs(&self) -> &[NetId] {
        &self.outputs
    }

    pub fn inputs(&self) -> &[NetId] {
        &self.inputs
    }

    pub fn keys(&self) -> &[NetId] {
        &self.keys
    }

    pub fn gate_kind(&self, net: NetId) -> Option<(GateKind, &[NetId])> {
        match &self.drivers[net.index()] {
            Some(Pending::Gate(k, ins)) => Some((*k, ins)),
            _ => None,
        }
    }

    /// Moves the gate driving `net` onto a fresh net and returns it, leaving
    /// `net` undriven so it can be redefined. Consumers and output listings
    /// of `net` are untouched, so they observe whatever `net` becomes.
    pub fn split_driver(&mut self, net: NetId, stem: &str) -> NetId {
        let driver = self.drivers[net.index()]
            .take()
            .expect("split_driver on undriven net");
        let Pending::Gate(kind, inputs) = driver else {
            panic!("split_driver on a source net");
        };
        let name = self.fresh_name(stem);
        let moved = self.net(&name);
        self.drivers[moved.index()] = Some(Pending::Gate(kind, inputs));
        let pos = self
            .gate_order
            .iter()
            .position(|&n| n == net)
            .expect("gate in order");
        self.gate_order[pos] = moved;
        moved
    }

    /// Removes the gate driving `net`; the net must be redefined before `finish`.
    pub fn undrive(&mut self, net: NetId) {
        let old = self.drivers[net.index()].take();
        assert!(matches!(old, Some(Pending::Gate(..))), "undrive on a non-gate net");
        self.gate_order.retain(|&n| n != net);
    }

    /// Renames a net; the new name must be unused.
    pub fn rename(&mut self, net: NetId, name: &str) {
        assert!(!self.index.contains_key(name), "rename target `{name}` in use");
        let old = std::mem::replace(&mut self.names[net.index()], name.to_string());
        self.index.remove(&old);
        self.index.insert(name.to_string(), net);
    }

    /// Turns a key input into an ordinary primary input, appended last.
    pub fn demote_key(&mut self, net: NetId) {
        let pos = self.keys.iter().position(|&k| k == net).expect("key input");
        self.keys.remove(pos);
        self.drivers[net.index()] = Some(Pending::Input);
        self.inputs.push(net);
    }

    /// Copies `other` into this builder. Sources of `other` are bound through
    /// `bind`; every gate output gets a name from `rename`. Returns the map
    /// from `other`'s nets to nets of this builder (`None` for unused nets).
    pub fn import(
        &mut self,
        other: &Netlist,
        mut bind: impl FnMut(NetId) -> NetId,
        mut rename: impl FnMut(&str) -> String,
    ) -> Result<Vec<Option<NetId>>, NetlistError> {
        let mut map = vec![None; other.num_nets()];
        for &s in other.inputs().iter().chain(other.keys()) {
            map[s.index()] = Some(bind(s));
        }
        for g in other.gates() {
            let inputs = g.inputs.iter().map(|i| map[i.index()].expect("topological")).collect();
            let name = rename(other.name(g.output));
            map[g.output.index()] = Some(self.add_gate(&name, g.kind, inputs)?);
        }
        Ok(map)
    }

    /// Validates the netlist and fixes a deterministic topological order:
    /// a depth-first post-order that visits gates in definition order.
    pub fn finish(self) -> Result<Netlist, NetlistError> {
        let n = self.names.len();
        for (i, d) in self.drivers.iter().enumerate() {
            if d.is_none() {
                return Err(NetlistError::Undefined(self.names[i].clone()));
            }
        }
        let pending = |id: NetId| -> Option<&Vec<NetId>> {
            match &self.drivers[id.index()] {
                Some(Pending::Gate(_, ins)) => Some(ins),
                _ => None,
            }
        };
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; n];
        let mut order: Vec<NetId> = Vec::with_capacity(self.gate_order.len());
        let mut stack: Vec<(NetId, usize)> = Vec::new();
        for &root in &self.gate_order {
            if state[root.index()] != 0 {
                continue;
            }
            state[root.index()] = 1;
            stack.push((root, 0));
            while let Some(&mut (net, ref mut next)) = stack.last_mut() {
                let ins = pending(net).expect("gate net");
                if *next < ins.len() {
                    let child = ins[*next];
                    *next += 1;
                    if pending(child).is_none() {
                        continue;
                    }
                    match state[child.index()] {
                        0 => {
                            state[child.index()] = 1;
                            stack.push((child, 0));
                        }
                        1 => return Err(NetlistError::Cycle(self.names[child.index()].clone())),
                        _ => {}
                    }
                } else {
                    state[net.index()] = 2;
                    order.push(net);
                    stack.pop();
                }
            }
        }
        let mut drivers = vec![Driver::PrimaryInput; n];
        for &k in &self.keys {
            drivers[k.index()] = Driver::KeyInput;
        }
        let mut gates = Vec::with_capacity(order.len());
        let mut this = self;
        for (gi, &net) in order.iter().enumerate() {
            let Some(Pending::Gate(kind, inputs)) = this.drivers[net.index()].take() else {
                unreachable!("ordered nets are gates");
            };
            drivers[net.index()] = Driver::Gate(gi);
            gates.push(Gate {
                kind,
                inputs,
                output: net,
            });
        }
        let mut is_output = vec![false; n];
        for &o in &this.outputs {
            is_output[o.index()] = true;
        }
        Ok(Netlist {
            names: this.names,
            drivers,
            gates,
            inputs: this.inputs,
            keys: this.keys,
            outputs: this.outputs,
            index: this.index,
            is_output,
        })
    }
}
