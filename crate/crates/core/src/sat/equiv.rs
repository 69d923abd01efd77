//! Miters and combinational equivalence checking.

use std::collections::HashMap;
use std::time::Instant;

use super::encode::{Encoder, Signal};
use super::{CheckedSolver, ClauseSink, CnfFormula, SatError, SolveBudget, SolveStatus};
use crate::netlist::{NetId, Netlist, WordSimulator};

/// How a netlist's key inputs enter a miter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KeyBinding {
    /// Unconstrained variables: the miter asks whether some key distinguishes.
    Free,
    /// Constants in key-input order.
    Fixed(Vec<bool>),
}

pub struct Miter {
    pub formula: CnfFormula,
    /// Shared primary inputs by name, in the order of the first netlist.
    pub inputs: Vec<(String, Signal)>,
    pub keys_a: Vec<Signal>,
    pub keys_b: Vec<Signal>,
    /// True exactly when some output pair differs.
    pub diff: Signal,
}

fn check_interface(a: &Netlist, b: &Netlist) -> Result<(), SatError> {
    let mut ai = a.input_names();
    let mut bi = b.input_names();
    ai.sort();
    bi.sort();
    if ai != bi {
        return Err(SatError::Interface(format!(
            "primary inputs differ ({} vs {})",
            a.inputs().len(),
            b.inputs().len()
        )));
    }
    let mut ao = a.output_names();
    let mut bo = b.output_names();
    ao.sort();
    bo.sort();
    if ao != bo {
        return Err(SatError::Interface(format!(
            "primary outputs differ ({} vs {})",
            a.outputs().len(),
            b.outputs().len()
        )));
    }
    Ok(())
}

fn bind_keys<S: super::ClauseSink>(
    enc: &mut Encoder<S>,
    n: &Netlist,
    binding: &KeyBinding,
    signals: &mut [Option<Signal>],
) -> Result<Vec<Signal>, SatError> {
    let mut out = Vec::with_capacity(n.keys().len());
    if let KeyBinding::Fixed(bits) = binding {
        if bits.len() != n.keys().len() {
            return Err(SatError::KeyWidth {
                expected: n.keys().len(),
                got: bits.len(),
            });
        }
    }
    for (i, &k) in n.keys().iter().enumerate() {
        let s = match binding {
            KeyBinding::Free => Signal::Lit(enc.fresh()),
            KeyBinding::Fixed(bits) => Signal::Const(bits[i]),
        };
        signals[k.index()] = Some(s);
        out.push(s);
    }
    Ok(out)
}

fn encode_pair<S: super::ClauseSink>(
    enc: &mut Encoder<S>,
    a: &Netlist,
    b: &Netlist,
    keys_a: &KeyBinding,
    keys_b: &KeyBinding,
) -> Result<(Vec<(String, Signal)>, Vec<Signal>, Vec<Signal>, Signal), SatError> {
    check_interface(a, b)?;
    let mut sa = vec![None; a.num_nets()];
    let mut sb = vec![None; b.num_nets()];
    let mut inputs = Vec::with_capacity(a.inputs().len());
    for &i in a.inputs() {
        let s = Signal::Lit(enc.fresh());
        sa[i.index()] = Some(s);
        let j = b.find(a.name(i)).expect("interface checked");
        sb[j.index()] = Some(s);
        inputs.push((a.name(i).to_string(), s));
    }
    let ka = bind_keys(enc, a, keys_a, &mut sa)?;
    let kb = bind_keys(enc, b, keys_b, &mut sb)?;
    enc.encode(a, &mut sa);
    enc.encode(b, &mut sb);
    let mut diffs = Vec::with_capacity(a.outputs().len());
    for &o in a.outputs() {
        let p = b.find(a.name(o)).expect("interface checked");
        let x = sa[o.index()].expect("encoded");
        let y = sb[p.index()].expect("encoded");
        diffs.push(enc.xor2(x, y));
    }
    let diff = enc.or(&diffs);
    Ok((inputs, ka, kb, diff))
}

/// Encodes both netlists over shared primary inputs (matched by name) and
/// ORs the XORs of same-named outputs into [`Miter::diff`], which is
/// asserted true in the formula.
pub fn build_miter(
    a: &Netlist,
    b: &Netlist,
    keys_a: &KeyBinding,
    keys_b: &KeyBinding,
) -> Result<Miter, SatError> {
    let mut enc = Encoder::new(CnfFormula::default());
    let (inputs, ka, kb, diff) = encode_pair(&mut enc, a, b, keys_a, keys_b)?;
    enc.assert_signal(diff);
    let mut formula = enc.sink;
    for (name, s) in &inputs {
        if let Signal::Lit(l) = s {
            formula.net_vars.push((name.clone(), l.var()));
        }
    }
    Ok(Miter {
        formula,
        inputs,
        keys_a: ka,
        keys_b: kb,
        diff,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    /// Primary input values in the first netlist's input order.
    pub inputs: Vec<bool>,
    pub keys_a: Vec<bool>,
    pub keys_b: Vec<bool>,
    /// Output values in the first netlist's output order.
    pub outputs_a: Vec<bool>,
    pub outputs_b: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    Counterexample(Counterexample),
    Inconclusive,
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent)
    }
}

/// Equivalence of `a` and `b`, with `b`'s key inputs fixed to `key_b` when
/// given. Any other key inputs are free.
pub fn check_equivalence(
    a: &Netlist,
    b: &Netlist,
    key_b: Option<&[bool]>,
) -> Result<Equivalence, SatError> {
    let kb = match key_b {
        Some(k) => KeyBinding::Fixed(k.to_vec()),
        None => KeyBinding::Free,
    };
    check_equivalence_with(a, b, &KeyBinding::Free, &kb, &SolveBudget::unlimited())
}

/// Miter-based equivalence. A counterexample is confirmed by simulating both
/// netlists before it is returned.
pub fn check_equivalence_with(
    a: &Netlist,
    b: &Netlist,
    keys_a: &KeyBinding,
    keys_b: &KeyBinding,
    budget: &SolveBudget,
) -> Result<Equivalence, SatError> {
    let start = Instant::now();
    let mut enc = Encoder::new(CheckedSolver::new());
    let (inputs, ka, kb, diff) = encode_pair(&mut enc, a, b, keys_a, keys_b)?;
    match diff {
        Signal::Const(false) => return Ok(Equivalence::Equivalent),
        Signal::Const(true) => {}
        Signal::Lit(l) => enc.sink.add_clause(&[l]),
    }
    let mut solver = enc.sink;
    match solver.solve(&[], budget, start)? {
        SolveStatus::Unsatisfiable => Ok(Equivalence::Equivalent),
        SolveStatus::ResourceLimit => Ok(Equivalence::Inconclusive),
        SolveStatus::Satisfiable => {
            let pi: Vec<bool> = inputs.iter().map(|(_, s)| solver.signal_value(*s)).collect();
            let ka: Vec<bool> = ka.iter().map(|&s| solver.signal_value(s)).collect();
            let kb: Vec<bool> = kb.iter().map(|&s| solver.signal_value(s)).collect();
            confirm(a, b, pi, ka, kb).map(Equivalence::Counterexample)
        }
    }
}

fn confirm(
    a: &Netlist,
    b: &Netlist,
    pi: Vec<bool>,
    ka: Vec<bool>,
    kb: Vec<bool>,
) -> Result<Counterexample, SatError> {
    let by_name: HashMap<&str, bool> = a
        .inputs()
        .iter()
        .zip(&pi)
        .map(|(&n, &v)| (a.name(n), v))
        .collect();
    let pi_b: Vec<bool> = b.inputs().iter().map(|&n| by_name[b.name(n)]).collect();
    let out_a = WordSimulator::new(a)
        .eval_bits(&pi, &ka)
        .map_err(|_| SatError::UnconfirmedCounterexample)?;
    let out_b_raw = WordSimulator::new(b)
        .eval_bits(&pi_b, &kb)
        .map_err(|_| SatError::UnconfirmedCounterexample)?;
    let pos_b: HashMap<NetId, usize> = b.outputs().iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let out_b: Vec<bool> = a
        .outputs()
        .iter()
        .map(|&o| out_b_raw[pos_b[&b.find(a.name(o)).expect("interface checked")]])
        .collect();
    if out_a == out_b {
        return Err(SatError::UnconfirmedCounterexample);
    }
    Ok(Counterexample {
        inputs: pi,
        keys_a: ka,
        keys_b: kb,
        outputs_a: out_a,
        outputs_b: out_b,
    })
}
