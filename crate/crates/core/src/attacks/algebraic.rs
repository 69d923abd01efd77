use std::collections::HashSet;
use std::time::Instant;

use cdcl::Var;

use crate::bits::Bits;
use crate::ciphers::CipherSpec;
use crate::netlist::{Netlist, NetlistBuilder, WordSimulator};
use crate::sat::{solve, tseitin_encode, SolveStatus};

use super::{AttackConfig, AttackError, AttackKind, AttackReport, Outcome, Verification};

/// The logic cones of the named nets as a standalone netlist: its primary
/// inputs are the key inputs of `locked` (same names, same order) and its
/// outputs are the named nets in the given order. `None` if a name is
/// missing or a cone reaches a primary input.
pub fn extract_cipher(locked: &Netlist, outputs: &[String]) -> Result<Option<Netlist>, AttackError> {
    let mut roots = Vec::with_capacity(outputs.len());
    for name in outputs {
        match locked.find(name) {
            Some(n) => roots.push(n),
            None => return Ok(None),
        }
    }
    let mut in_cone = HashSet::new();
    let mut stack = roots.clone();
    while let Some(n) = stack.pop() {
        if !in_cone.insert(n) {
            continue;
        }
        if locked.is_input(n) {
            return Ok(None);
        }
        if let Some(g) = locked.gate_of(n) {
            stack.extend(g.inputs.iter().copied());
        }
    }
    let mut b = NetlistBuilder::new();
    for &k in locked.keys() {
        b.add_input(locked.name(k))?;
    }
    for g in locked.gates() {
        if in_cone.contains(&g.output) {
            let ins = g.inputs.iter().map(|&i| b.net(locked.name(i))).collect();
            b.add_gate(locked.name(g.output), g.kind, ins)?;
        }
    }
    for &r in &roots {
        let n = b.net(locked.name(r));
        b.add_output(n)?;
    }
    Ok(Some(b.finish()?))
}

/// Recovers the cipher key from the cipher-output values found by a
/// removal attack: the cones of those outputs are encoded with their
/// outputs fixed, and any satisfying key is returned. `spec` only labels
/// the report; a solved full-round instance is flagged in the note.
pub fn algebraic_attack(
    locked: &Netlist,
    removal: &AttackReport,
    spec: Option<&CipherSpec>,
    config: &AttackConfig,
) -> Result<AttackReport, AttackError> {
    let start = Instant::now();
    let mut r = AttackReport::new(AttackKind::Algebraic, Outcome::NotApplicable);
    let lck = match (&removal.lck, removal.outcome) {
        (Some(l), Outcome::DesignExtracted) if !removal.bco.is_empty() => l.clone(),
        _ => return Ok(r.with_note("needs the cipher outputs and their values from a successful removal attack")),
    };
    r.bco = removal.bco.clone();
    r.lck = Some(lck.clone());
    let Some(bc) = extract_cipher(locked, &removal.bco)? else {
        return Ok(r.with_note("cipher-output cones do not depend on key inputs alone"));
    };
    let mut cnf = tseitin_encode(&bc);
    for (j, &o) in bc.outputs().iter().enumerate() {
        cnf.clauses.push(vec![Var::new(o.index()).lit(lck.get(j))]);
    }
    let out = solve(&cnf, &[], &config.budget)?;
    r.conflicts = out.conflicts;
    r.iterations = 1;
    match out.status {
        SolveStatus::ResourceLimit => {
            r.outcome = Outcome::NoSolution;
            r.note = Some("budget exhausted".into());
        }
        SolveStatus::Unsatisfiable => {
            r.outcome = Outcome::NoSolution;
            r.note = Some("no key produces the recovered cipher outputs".into());
        }
        SolveStatus::Satisfiable => {
            let model = out.model.expect("satisfiable outcome has a model");
            let key: Vec<bool> = bc.inputs().iter().map(|k| model[k.index()]).collect();
            let y = WordSimulator::new(&bc).eval_bits(&key, &[]).expect("widths match");
            if y.as_slice() != lck.lsb_first() {
                r.outcome = Outcome::NoSolution;
                r.note = Some("model does not re-derive the cipher outputs".into());
            } else {
                r.outcome = Outcome::KeyRecovered;
                r.key = Some(Bits::from_lsb_first(key));
                r.verification = Some(Verification::Resimulated);
                if let Some(s) = spec.filter(|s| !s.is_reduced()) {
                    r.note = Some(format!("full-round {s} instance solved"));
                }
            }
        }
    }
    r.wall_time = start.elapsed();
    Ok(r)
}
