//! Function-preserving rewrites: constant propagation, local simplification
//! and dead-logic removal.
//!
//! All passes keep every unassigned primary input and key input, in order,
//! even when it no longer drives anything, and never merge two sources.
//! Primary outputs keep their names.

use std::collections::HashMap;

use super::{Assignment, GateKind, NetId, Netlist, NetlistBuilder};

/// Value of an old net in terms of the netlist under construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Sig {
    Const(bool),
    Pos(NetId),
    Neg(NetId),
}

impl Sig {
    fn negate(self) -> Sig {
        match self {
            Sig::Const(b) => Sig::Const(!b),
            Sig::Pos(n) => Sig::Neg(n),
            Sig::Neg(n) => Sig::Pos(n),
        }
    }

    fn invert_if(self, cond: bool) -> Sig {
        if cond {
            self.negate()
        } else {
            self
        }
    }
}

/// Removes assigned sources and folds the constants they imply.
///
/// Gates keep their names; a gate reduced to a single live input becomes
/// `BUF`/`NOT`, and an output that becomes constant is driven by a
/// `CONST0`/`CONST1` gate of the same name. Logic that no longer reaches an
/// output is removed.
pub fn propagate_constants(netlist: &Netlist, assignment: &Assignment) -> Netlist {
    #[derive(Clone)]
    enum Val {
        Const(bool),
        Net,
    }
    let n = netlist.num_nets();
    let mut val: Vec<Val> = vec![Val::Net; n];
    for (net, v) in assignment.iter() {
        if netlist.is_source(net) {
            val[net.index()] = Val::Const(v);
        }
    }
    let mut folded: Vec<Option<Folded>> = (0..n).map(|_| None).collect();
    for g in netlist.gates() {
        let consts: Vec<Option<bool>> = g
            .inputs
            .iter()
            .map(|i| match val[i.index()] {
                Val::Const(b) => Some(b),
                Val::Net => None,
            })
            .collect();
        let f = fold_with_constants(g.kind, &g.inputs, &consts);
        if let Folded::Const(b) = f {
            val[g.output.index()] = Val::Const(b);
        }
        folded[g.output.index()] = Some(f);
    }

    // liveness from the outputs through folded structure
    let mut live = vec![false; n];
    let mut stack: Vec<NetId> = netlist.outputs().to_vec();
    while let Some(net) = stack.pop() {
        if live[net.index()] {
            continue;
        }
        live[net.index()] = true;
        if let Some(Folded::Gate(_, ins)) = &folded[net.index()] {
            stack.extend(ins.iter().copied());
        }
    }

    let mut b = NetlistBuilder::new();
    let mut const_net: [Option<NetId>; 2] = [None, None];
    for &i in netlist.inputs() {
        if matches!(val[i.index()], Val::Net) {
            b.add_input(netlist.name(i)).expect("unique");
        }
    }
    for &k in netlist.keys() {
        if matches!(val[k.index()], Val::Net) {
            b.add_key(netlist.name(k)).expect("unique");
        }
    }
    for g in netlist.gates() {
        let o = g.output;
        if !live[o.index()] {
            continue;
        }
        match &folded[o.index()] {
            Some(Folded::Gate(kind, ins)) => {
                let ins = ins
                    .iter()
                    .map(|&i| match val[i.index()] {
                        Val::Const(c) => *const_net[usize::from(c)].get_or_insert_with(|| {
                            let kind = if c { GateKind::Const1 } else { GateKind::Const0 };
                            let name = loop {
                                let name = b.fresh_name("_c");
                                if netlist.find(&name).is_none() {
                                    break name;
                                }
                            };
                            b.add_gate(&name, kind, Vec::new()).expect("fresh name")
                        }),
                        Val::Net => b.net(netlist.name(i)),
                    })
                    .collect();
                b.add_gate(netlist.name(o), *kind, ins).expect("unique");
            }
            Some(Folded::Const(c)) if netlist.is_output(o) => {
                let kind = if *c { GateKind::Const1 } else { GateKind::Const0 };
                b.add_gate(netlist.name(o), kind, Vec::new()).expect("unique");
            }
            _ => {}
        }
    }
    for &o in netlist.outputs() {
        if let Val::Const(c) = val[o.index()] {
            if netlist.is_source(o) {
                // an assigned source listed as an output
                let kind = if c { GateKind::Const1 } else { GateKind::Const0 };
                b.add_gate(netlist.name(o), kind, Vec::new()).expect("unique");
            }
        }
        let id = b.net(netlist.name(o));
        b.add_output(id).expect("unique outputs");
    }
    b.finish().expect("constant propagation preserves validity")
}

enum Folded {
    Const(bool),
    Gate(GateKind, Vec<NetId>),
}

/// Folds known constant inputs of one gate, keeping the non-constant inputs
/// in their original order.
fn fold_with_constants(kind: GateKind, inputs: &[NetId], consts: &[Option<bool>]) -> Folded {
    use GateKind::*;
    if consts.iter().all(Option::is_none) {
        return Folded::Gate(kind, inputs.to_vec());
    }
    let free: Vec<NetId> = inputs
        .iter()
        .zip(consts)
        .filter(|(_, c)| c.is_none())
        .map(|(&i, _)| i)
        .collect();
    let one = |inv: bool, net: NetId| Folded::Gate(if inv { Not } else { Buf }, vec![net]);
    match kind {
        And | Nand | Or | Nor => {
            let (controlling, inv) = match kind {
                And => (false, false),
                Nand => (false, true),
                Or => (true, false),
                _ => (true, true),
            };
            if consts.iter().any(|&c| c == Some(controlling)) {
                return Folded::Const(controlling ^ inv);
            }
            match free.len() {
                0 => Folded::Const(!controlling ^ inv),
                1 => one(inv, free[0]),
                _ => Folded::Gate(kind, free),
            }
        }
        Xor | Xnor => {
            let parity = consts.iter().flatten().fold(kind == Xnor, |p, &c| p ^ c);
            match free.len() {
                0 => Folded::Const(parity),
                1 => one(parity, free[0]),
                _ => Folded::Gate(if parity { Xnor } else { Xor }, free),
            }
        }
        Not => Folded::Const(!consts[0].expect("constant")),
        Buf => Folded::Const(consts[0].expect("constant")),
        Mux2 => {
            let (a, b, s) = (inputs[0], inputs[1], inputs[2]);
            match consts[2] {
                Some(sel) => {
                    let (pick, c) = if sel { (b, consts[1]) } else { (a, consts[0]) };
                    match c {
                        Some(v) => Folded::Const(v),
                        None => one(false, pick),
                    }
                }
                None => match (consts[0], consts[1]) {
                    (Some(x), Some(y)) if x == y => Folded::Const(x),
                    (Some(false), Some(true)) => one(false, s),
                    (Some(true), Some(false)) => one(true, s),
                    // one data input constant: keep the mux, constant is materialized
                    _ => Folded::Gate(Mux2, vec![a, b, s]),
                },
            }
        }
        Const0 => Folded::Const(false),
        Const1 => Folded::Const(true),
    }
}

/// Drops gates that do not reach any primary output.
pub fn remove_dead_logic(netlist: &Netlist) -> Netlist {
    propagate_constants(netlist, &Assignment::new())
}

/// Rewrites to a fixed point: constant folding, double-negation and buffer
/// elimination, idempotence and complement rules, XOR pair cancellation,
/// structural hashing of identical gates, and dead-logic removal.
pub fn simplify(netlist: &Netlist) -> Netlist {
    let mut current = simplify_once(&remove_dead_logic(netlist));
    for _ in 0..8 {
        let next = simplify_once(&current);
        if next == current {
            break;
        }
        current = next;
    }
    current
}

struct Rewriter {
    b: NetlistBuilder,
    sig: Vec<Sig>,
    strash: HashMap<(GateKind, Vec<NetId>), NetId>,
    not_of: HashMap<NetId, NetId>,
    /// Name of the old NOT/NAND/... that produced a `Neg`, reused on materialization.
    neg_name: HashMap<NetId, String>,
}

impl Rewriter {
    fn materialize(&mut self, s: Sig) -> NetId {
        match s {
            Sig::Pos(n) => n,
            Sig::Neg(n) => {
                if let Some(&m) = self.not_of.get(&n) {
                    return m;
                }
                let m = match self.neg_name.get(&n).cloned() {
                    Some(name) => self.b.gate_named(&name, GateKind::Not, vec![n]),
                    None => self.b.gate(GateKind::Not, vec![n]),
                };
                self.not_of.insert(n, m);
                m
            }
            Sig::Const(c) => {
                let kind = if c { GateKind::Const1 } else { GateKind::Const0 };
                self.hashed(kind, Vec::new(), None)
            }
        }
    }

    fn hashed(&mut self, kind: GateKind, inputs: Vec<NetId>, name: Option<&str>) -> NetId {
        let key = (kind, inputs);
        if let Some(&n) = self.strash.get(&key) {
            return n;
        }
        let id = match name {
            Some(nm) => self.b.gate_named(nm, kind, key.1.clone()),
            None => self.b.gate(kind, key.1.clone()),
        };
        if kind == GateKind::Not {
            self.not_of.entry(key.1[0]).or_insert(id);
        }
        self.strash.insert(key, id);
        id
    }

    /// AND (`or == false`) or OR over signals, output inverted when `inv`.
    fn and_or(&mut self, or: bool, inv: bool, ins: Vec<Sig>, name: &str) -> Sig {
        let controlling = or;
        let mut lits: Vec<Sig> = Vec::new();
        for s in ins {
            match s {
                Sig::Const(c) if c == controlling => return Sig::Const(controlling ^ inv),
                Sig::Const(_) => {}
                s => {
                    if lits.contains(&s.negate()) {
                        return Sig::Const(controlling ^ inv);
                    }
                    if !lits.contains(&s) {
                        lits.push(s);
                    }
                }
            }
        }
        match lits.len() {
            0 => Sig::Const(!controlling ^ inv),
            1 => lits[0].invert_if(inv),
            _ => {
                let mut nets: Vec<NetId> = lits.into_iter().map(|s| self.materialize(s)).collect();
                nets.sort();
                nets.dedup();
                let kind = match (or, inv) {
                    (false, false) => GateKind::And,
                    (false, true) => GateKind::Nand,
                    (true, false) => GateKind::Or,
                    (true, true) => GateKind::Nor,
                };
                Sig::Pos(self.hashed(kind, nets, Some(name)))
            }
        }
    }

    fn xor(&mut self, mut parity: bool, ins: Vec<Sig>, name: &str) -> Sig {
        let mut nets: Vec<NetId> = Vec::new();
        for s in ins {
            match s {
                Sig::Const(c) => parity ^= c,
                Sig::Pos(n) => nets.push(n),
                Sig::Neg(n) => {
                    parity = !parity;
                    nets.push(n);
                }
            }
        }
        nets.sort();
        let mut kept: Vec<NetId> = Vec::new();
        for n in nets {
            if kept.last() == Some(&n) {
                kept.pop();
            } else {
                kept.push(n);
            }
        }
        match kept.len() {
            0 => Sig::Const(parity),
            1 => Sig::Pos(kept[0]).invert_if(parity),
            _ => {
                let kind = if parity { GateKind::Xnor } else { GateKind::Xor };
                Sig::Pos(self.hashed(kind, kept, Some(name)))
            }
        }
    }

    fn mux(&mut self, a: Sig, b: Sig, s: Sig, name: &str) -> Sig {
        let (a, b, s) = match s {
            Sig::Const(false) => return a,
            Sig::Const(true) => return b,
            Sig::Neg(n) => (b, a, Sig::Pos(n)),
            s => (a, b, s),
        };
        if a == b {
            return a;
        }
        match (a, b) {
            (Sig::Const(false), Sig::Const(true)) => s,
            (Sig::Const(true), Sig::Const(false)) => s.negate(),
            (Sig::Const(false), b) => self.and_or(false, false, vec![s, b], name),
            (Sig::Const(true), b) => self.and_or(true, false, vec![s.negate(), b], name),
            (a, Sig::Const(false)) => self.and_or(false, false, vec![s.negate(), a], name),
            (a, Sig::Const(true)) => self.and_or(true, false, vec![s, a], name),
            _ if a == s => self.and_or(false, false, vec![s, b], name),
            _ if b == s => self.and_or(true, false, vec![s, a], name),
            _ => {
                let ins = vec![self.materialize(a), self.materialize(b), self.materialize(s)];
                Sig::Pos(self.hashed(GateKind::Mux2, ins, Some(name)))
            }
        }
    }
}

fn simplify_once(old: &Netlist) -> Netlist {
    let mut rw = Rewriter {
        b: NetlistBuilder::new(),
        sig: vec![Sig::Const(false); old.num_nets()],
        strash: HashMap::new(),
        not_of: HashMap::new(),
        neg_name: HashMap::new(),
    };
    for &i in old.inputs() {
        rw.sig[i.index()] = Sig::Pos(rw.b.add_input(old.name(i)).expect("unique"));
    }
    for &k in old.keys() {
        rw.sig[k.index()] = Sig::Pos(rw.b.add_key(old.name(k)).expect("unique"));
    }
    for g in old.gates() {
        let name = old.name(g.output).to_string();
        let ins: Vec<Sig> = g.inputs.iter().map(|i| rw.sig[i.index()]).collect();
        let s = match g.kind {
            GateKind::Const0 => Sig::Const(false),
            GateKind::Const1 => Sig::Const(true),
            GateKind::Buf => ins[0],
            GateKind::Not => ins[0].negate(),
            GateKind::And => rw.and_or(false, false, ins, &name),
            GateKind::Nand => rw.and_or(false, true, ins, &name),
            GateKind::Or => rw.and_or(true, false, ins, &name),
            GateKind::Nor => rw.and_or(true, true, ins, &name),
            GateKind::Xor => rw.xor(false, ins, &name),
            GateKind::Xnor => rw.xor(true, ins, &name),
            GateKind::Mux2 => rw.mux(ins[0], ins[1], ins[2], &name),
        };
        if let Sig::Neg(n) = s {
            rw.neg_name.entry(n).or_insert(name);
        }
        rw.sig[g.output.index()] = s;
    }

    // outputs keep their names
    let mut claimed: Vec<bool> = Vec::new();
    let mut out_ids = Vec::with_capacity(old.outputs().len());
    let output_names: std::collections::HashSet<&str> =
        old.outputs().iter().map(|&o| old.name(o)).collect();
    for &o in old.outputs() {
        let name = old.name(o);
        let s = rw.sig[o.index()];
        let net = match s {
            Sig::Const(_) => {
                let kind = if s == Sig::Const(true) { GateKind::Const1 } else { GateKind::Const0 };
                free_name(&mut rw.b, name);
                rw.b.add_gate(name, kind, Vec::new()).expect("name freed")
            }
            Sig::Pos(_) | Sig::Neg(_) => {
                let n = match s {
                    Sig::Neg(n) if !rw.not_of.contains_key(&n) => {
                        free_name(&mut rw.b, name);
                        let m = rw.b.add_gate(name, GateKind::Not, vec![n]).expect("name freed");
                        rw.not_of.insert(n, m);
                        m
                    }
                    _ => rw.materialize(s),
                };
                claimed.resize(rw.b.num_nets(), false);
                let is_source = rw.b.gate_kind(n).is_none();
                if rw.b.name(n) == name {
                    n
                } else if !is_source && !claimed[n.index()] && !output_names.contains(rw.b.name(n)) {
                    free_name(&mut rw.b, name);
                    rw.b.rename(n, name);
                    n
                } else {
                    free_name(&mut rw.b, name);
                    rw.b.add_gate(name, GateKind::Buf, vec![n]).expect("name freed")
                }
            }
        };
        claimed.resize(rw.b.num_nets(), false);
        claimed[net.index()] = true;
        out_ids.push(net);
    }
    for n in out_ids {
        rw.b.add_output(n).expect("distinct outputs");
    }
    remove_dead_logic(&rw.b.finish().expect("rewrite preserves validity"))
}

/// Makes `name` available by renaming the internal gate that holds it.
fn free_name(b: &mut NetlistBuilder, name: &str) {
    if let Some(n) = b.find(name) {
        debug_assert!(b.gate_kind(n).is_some(), "sources keep their own names");
        let fresh = b.fresh_name("_s");
        b.rename(n, &fresh);
    }
}
