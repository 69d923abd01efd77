//! Tseitin encodings of netlists.
//!
//! [`tseitin_encode`] is the plain textbook encoding with one variable per
//! net. [`Encoder`] is the working encoder used by the miter and the attacks:
//! it folds constants, treats inversion as free, and hashes structurally
//! identical nodes to a single variable, so identical logic shared between
//! two circuit copies costs nothing.

use std::collections::HashMap;
use std::ops::Not;

use cdcl::{Lit, Solver, Var};

use super::CnfFormula;
use crate::netlist::{GateKind, NetId, Netlist};

/// Anything that accepts fresh variables and clauses.
pub trait ClauseSink {
    fn new_var(&mut self) -> Var;
    fn add_clause(&mut self, clause: &[Lit]);
}

impl ClauseSink for CnfFormula {
    fn new_var(&mut self) -> Var {
        let v = Var::new(self.num_vars);
        self.num_vars += 1;
        v
    }

    fn add_clause(&mut self, clause: &[Lit]) {
        self.clauses.push(clause.to_vec());
    }
}

impl ClauseSink for Solver {
    fn new_var(&mut self) -> Var {
        Solver::new_var(self)
    }

    fn add_clause(&mut self, clause: &[Lit]) {
        Solver::add_clause(self, clause);
    }
}

/// A net's value in an encoding: a known constant or a literal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Signal {
    Const(bool),
    Lit(Lit),
}

impl Not for Signal {
    type Output = Signal;
    fn not(self) -> Signal {
        match self {
            Signal::Const(b) => Signal::Const(!b),
            Signal::Lit(l) => Signal::Lit(!l),
        }
    }
}

impl Signal {
    pub fn lit(self) -> Option<Lit> {
        match self {
            Signal::Lit(l) => Some(l),
            Signal::Const(_) => None,
        }
    }
}

/// Clauses for `out = AND(ins)`: `(¬out ∨ a)` per input and `(out ∨ ¬a₁ ∨ …)`.
pub(crate) fn and_clauses<S: ClauseSink>(sink: &mut S, out: Lit, ins: &[Lit]) {
    let mut big = Vec::with_capacity(ins.len() + 1);
    for &a in ins {
        big.push(!a);
    }
    big.push(out);
    sink.add_clause(&big);
    for &a in ins {
        sink.add_clause(&[!out, a]);
    }
}

pub(crate) fn xor_clauses<S: ClauseSink>(sink: &mut S, out: Lit, a: Lit, b: Lit) {
    sink.add_clause(&[!a, !b, !out]);
    sink.add_clause(&[a, b, !out]);
    sink.add_clause(&[a, !b, out]);
    sink.add_clause(&[!a, b, out]);
}

/// `out = s ? b : a`.
pub(crate) fn mux_clauses<S: ClauseSink>(sink: &mut S, out: Lit, a: Lit, b: Lit, s: Lit) {
    sink.add_clause(&[!s, !b, out]);
    sink.add_clause(&[!s, b, !out]);
    sink.add_clause(&[s, !a, out]);
    sink.add_clause(&[s, a, !out]);
}

/// Plain encoding: one variable per net (variable `i` for net id `i`).
///
/// Clause counts: AND/NAND/OR/NOR with `n` inputs `n + 1`; XOR/XNOR with `n`
/// inputs `4(n - 1)` through a chain of 2-input XORs (adding `n - 2`
/// auxiliary variables); MUX2 4; NOT/BUF 2; constants 1. Hence the clause
/// count is at most `4 · (input pins) + (constant gates)`.
pub fn tseitin_encode(netlist: &Netlist) -> CnfFormula {
    let mut f = CnfFormula {
        num_vars: netlist.num_nets(),
        clauses: Vec::new(),
        net_vars: netlist
            .net_ids()
            .map(|n| (netlist.name(n).to_string(), Var::new(n.index())))
            .collect(),
    };
    let lit = |n: NetId| Var::new(n.index()).positive();
    for g in netlist.gates() {
        let out = lit(g.output);
        let ins: Vec<Lit> = g.inputs.iter().map(|&i| lit(i)).collect();
        match g.kind {
            GateKind::And => and_clauses(&mut f, out, &ins),
            GateKind::Nand => and_clauses(&mut f, !out, &ins),
            GateKind::Or => {
                let neg: Vec<Lit> = ins.iter().map(|&l| !l).collect();
                and_clauses(&mut f, !out, &neg);
            }
            GateKind::Nor => {
                let neg: Vec<Lit> = ins.iter().map(|&l| !l).collect();
                and_clauses(&mut f, out, &neg);
            }
            GateKind::Xor | GateKind::Xnor => {
                let target = if g.kind == GateKind::Xor { out } else { !out };
                let mut acc = ins[0];
                for (j, &b) in ins.iter().enumerate().skip(1) {
                    let o = if j + 1 == ins.len() {
                        target
                    } else {
                        f.new_var().positive()
                    };
                    xor_clauses(&mut f, o, acc, b);
                    acc = o;
                }
            }
            GateKind::Not => {
                f.add_clause(&[ins[0], out]);
                f.add_clause(&[!ins[0], !out]);
            }
            GateKind::Buf => {
                f.add_clause(&[!ins[0], out]);
                f.add_clause(&[ins[0], !out]);
            }
            GateKind::Mux2 => mux_clauses(&mut f, out, ins[0], ins[1], ins[2]),
            GateKind::Const0 => f.add_clause(&[!out]),
            GateKind::Const1 => f.add_clause(&[out]),
        }
    }
    f
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    And(Vec<Lit>),
    Xor(Lit, Lit),
    Mux { s: Lit, a: Lit, b: Lit },
}

/// Folding, structurally hashing encoder over any [`ClauseSink`].
pub struct Encoder<S> {
    pub sink: S,
    strash: HashMap<Node, Lit>,
}

impl<S: ClauseSink> Encoder<S> {
    pub fn new(sink: S) -> Encoder<S> {
        Encoder {
            sink,
            strash: HashMap::new(),
        }
    }

    pub fn fresh(&mut self) -> Lit {
        self.sink.new_var().positive()
    }

    fn node(&mut self, node: Node) -> Lit {
        if let Some(&l) = self.strash.get(&node) {
            return l;
        }
        let out = self.fresh();
        match &node {
            Node::And(ins) => and_clauses(&mut self.sink, out, ins),
            Node::Xor(a, b) => xor_clauses(&mut self.sink, out, *a, *b),
            Node::Mux { s, a, b } => mux_clauses(&mut self.sink, out, *a, *b, *s),
        }
        self.strash.insert(node, out);
        out
    }

    pub fn and(&mut self, ins: &[Signal]) -> Signal {
        let mut lits: Vec<Lit> = Vec::with_capacity(ins.len());
        for s in ins {
            match *s {
                Signal::Const(false) => return Signal::Const(false),
                Signal::Const(true) => {}
                Signal::Lit(l) => lits.push(l),
            }
        }
        lits.sort();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] == !w[1]) {
            return Signal::Const(false);
        }
        match lits.len() {
            0 => Signal::Const(true),
            1 => Signal::Lit(lits[0]),
            _ => Signal::Lit(self.node(Node::And(lits))),
        }
    }

    pub fn or(&mut self, ins: &[Signal]) -> Signal {
        let neg: Vec<Signal> = ins.iter().map(|&s| !s).collect();
        !self.and(&neg)
    }

    pub fn xor2(&mut self, a: Signal, b: Signal) -> Signal {
        match (a, b) {
            (Signal::Const(x), s) | (s, Signal::Const(x)) => {
                if x {
                    !s
                } else {
                    s
                }
            }
            (Signal::Lit(x), Signal::Lit(y)) => {
                if x == y {
                    return Signal::Const(false);
                }
                if x == !y {
                    return Signal::Const(true);
                }
                let parity = x.is_negative() ^ y.is_negative();
                let (px, py) = (x.var().positive(), y.var().positive());
                let (lo, hi) = if px < py { (px, py) } else { (py, px) };
                let l = self.node(Node::Xor(lo, hi));
                Signal::Lit(if parity { !l } else { l })
            }
        }
    }

    pub fn xor(&mut self, ins: &[Signal]) -> Signal {
        ins.iter()
            .fold(Signal::Const(false), |acc, &s| self.xor2(acc, s))
    }

    /// `s ? b : a`.
    pub fn mux(&mut self, a: Signal, b: Signal, s: Signal) -> Signal {
        let s = match s {
            Signal::Const(false) => return a,
            Signal::Const(true) => return b,
            Signal::Lit(l) => l,
        };
        let (a, b, s) = if s.is_negative() { (b, a, !s) } else { (a, b, s) };
        let sl = Signal::Lit(s);
        if a == b {
            return a;
        }
        match (a, b) {
            (Signal::Const(false), b) => self.and(&[sl, b]),
            (Signal::Const(true), b) => self.or(&[!sl, b]),
            (a, Signal::Const(false)) => self.and(&[!sl, a]),
            (a, Signal::Const(true)) => self.or(&[sl, a]),
            (Signal::Lit(x), Signal::Lit(y)) => {
                if x == !y {
                    return self.xor2(sl, a);
                }
                if x == s {
                    return self.and(&[sl, b]);
                }
                if y == s {
                    return self.or(&[sl, a]);
                }
                if x == !s {
                    return self.or(&[!sl, b]);
                }
                if y == !s {
                    return self.and(&[!sl, a]);
                }
                if x.is_negative() {
                    Signal::Lit(!self.node(Node::Mux { s, a: !x, b: !y }))
                } else {
                    Signal::Lit(self.node(Node::Mux { s, a: x, b: y }))
                }
            }
        }
    }

    pub fn gate(&mut self, kind: GateKind, ins: &[Signal]) -> Signal {
        match kind {
            GateKind::And => self.and(ins),
            GateKind::Nand => !self.and(ins),
            GateKind::Or => self.or(ins),
            GateKind::Nor => !self.or(ins),
            GateKind::Xor => self.xor(ins),
            GateKind::Xnor => !self.xor(ins),
            GateKind::Not => !ins[0],
            GateKind::Buf => ins[0],
            GateKind::Mux2 => self.mux(ins[0], ins[1], ins[2]),
            GateKind::Const0 => Signal::Const(false),
            GateKind::Const1 => Signal::Const(true),
        }
    }

    /// Encodes every gate whose output has no signal yet. Sources must be
    /// pre-filled; pre-filled gate outputs are kept as given.
    pub fn encode(&mut self, netlist: &Netlist, signals: &mut [Option<Signal>]) {
        let mut buf = Vec::new();
        for g in netlist.gates() {
            if signals[g.output.index()].is_some() {
                continue;
            }
            buf.clear();
            buf.extend(
                g.inputs
                    .iter()
                    .map(|i| signals[i.index()].expect("source or earlier gate encoded")),
            );
            signals[g.output.index()] = Some(self.gate(g.kind, &buf));
        }
    }

    /// Adds `sig` as a fact. Returns false when it is the constant 0, in
    /// which case an empty clause has been added.
    pub fn assert_signal(&mut self, sig: Signal) -> bool {
        match sig {
            Signal::Const(true) => true,
            Signal::Const(false) => {
                self.sink.add_clause(&[]);
                false
            }
            Signal::Lit(l) => {
                self.sink.add_clause(&[l]);
                true
            }
        }
    }
}
