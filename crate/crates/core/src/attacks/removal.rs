use std::collections::{BTreeSet, HashSet};
use std::time::Instant;

use crate::ciphers::CipherSpec;
use crate::netlist::{
    emit_bench, propagate_constants, simplify, support_sets, Assignment, BitSet, NetId, Netlist, NetlistBuilder,
};

use super::oracle::{Oracle, OracleView};
use super::sat_attack::sat_attack;
use super::{probe_mismatch, AttackConfig, AttackError, AttackKind, AttackReport, Outcome, Verification};

/// Candidate cipher outputs and the verdict on them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CipherBoundary {
    /// Gate outputs whose support is nonempty and key-only and which drive
    /// a gate with a primary input in its support, in netlist order.
    pub nets: Vec<NetId>,
    pub names: Vec<String>,
    /// The candidates' supports together contain every key input.
    pub covers_keys: bool,
    /// The candidate count is the block size of a supported cipher.
    pub block_sized: bool,
}

impl CipherBoundary {
    pub fn is_valid(&self) -> bool {
        self.covers_keys && self.block_sized
    }
}

fn key_only(sup: &[BitSet], n_in: usize, n: NetId) -> bool {
    let s = &sup[n.index()];
    !s.is_empty() && s.iter().all(|i| i >= n_in)
}

pub fn find_cipher_outputs(locked: &Netlist) -> CipherBoundary {
    let sup = support_sets(locked);
    let n_in = locked.inputs().len();
    let has_pi = |n: NetId| sup[n.index()].iter().next().is_some_and(|i| i < n_in);
    let mut candidates: HashSet<NetId> = HashSet::new();
    for g in locked.gates() {
        if !has_pi(g.output) {
            continue;
        }
        for &i in &g.inputs {
            if locked.gate_of(i).is_some() && key_only(&sup, n_in, i) {
                candidates.insert(i);
            }
        }
    }
    let nets: Vec<NetId> = locked
        .gates()
        .iter()
        .map(|g| g.output)
        .filter(|n| candidates.contains(n))
        .collect();
    let mut covered = BitSet::new(n_in + locked.keys().len());
    for &n in &nets {
        covered.union_with(&sup[n.index()]);
    }
    let covers_keys = !locked.keys().is_empty() && covered.len() == locked.keys().len();
    let sizes: BTreeSet<usize> = CipherSpec::all().iter().map(CipherSpec::block_size).collect();
    CipherBoundary {
        names: nets.iter().map(|&n| locked.name(n).to_string()).collect(),
        block_sized: sizes.contains(&nets.len()),
        covers_keys,
        nets,
    }
}

/// Deletes the cipher: every boundary net becomes a key input (in boundary
/// order) and the key-only logic feeding it disappears. `None` when
/// original key inputs or key-only outputs would be left dangling.
pub fn remove_cipher(locked: &Netlist, boundary: &[NetId]) -> Result<Option<Netlist>, AttackError> {
    let sup = support_sets(locked);
    let n_in = locked.inputs().len();
    let bco: HashSet<NetId> = boundary.iter().copied().collect();
    let dropped = |n: NetId| bco.contains(&n) || key_only(&sup, n_in, n) || locked.is_key(n);
    let mut b = NetlistBuilder::new();
    for &i in locked.inputs() {
        b.add_input(locked.name(i))?;
    }
    for &c in boundary {
        b.add_key(locked.name(c))?;
    }
    for g in locked.gates() {
        if dropped(g.output) {
            continue;
        }
        if g.inputs.iter().any(|&i| dropped(i) && !bco.contains(&i)) {
            return Ok(None);
        }
        let ins = g.inputs.iter().map(|&i| b.net(locked.name(i))).collect();
        b.add_gate(locked.name(g.output), g.kind, ins)?;
    }
    for &o in locked.outputs() {
        if dropped(o) && !bco.contains(&o) {
            return Ok(None);
        }
        let n = b.net(locked.name(o));
        b.add_output(n)?;
    }
    Ok(Some(b.finish()?))
}

/// Finds the cipher outputs, cuts the cipher off, recovers the values of
/// its outputs with the SAT attack and folds them into the design.
pub fn removal_attack(
    locked: &Netlist,
    oracle: &dyn Oracle,
    config: &AttackConfig,
) -> Result<AttackReport, AttackError> {
    let start = Instant::now();
    let view = OracleView::new(oracle, locked)?;
    let q0 = view.queries();
    let boundary = find_cipher_outputs(locked);
    let mut r = AttackReport::new(AttackKind::Removal, Outcome::NotApplicable);
    r.bco = boundary.names.clone();
    r.bco_valid = Some(boundary.is_valid());
    let finish = |mut r: AttackReport| {
        r.oracle_queries = view.queries() - q0;
        r.wall_time = start.elapsed();
        r
    };
    if !boundary.is_valid() {
        let why = match (boundary.block_sized, boundary.covers_keys) {
            (false, false) => "candidate count is no cipher block size and candidates miss key inputs",
            (false, true) => "candidate count is no cipher block size",
            _ => "candidates miss key inputs",
        };
        return Ok(finish(r.with_note(format!("{} candidates: {why}", boundary.nets.len()))));
    }
    let Some(lc) = remove_cipher(locked, &boundary.nets)? else {
        return Ok(finish(r.with_note("key inputs reach the design outside the candidates")));
    };
    let inner = sat_attack(&lc, oracle, config)?;
    r.iterations = inner.iterations;
    r.conflicts = inner.conflicts;
    if !inner.outcome.is_success() {
        r.outcome = Outcome::NoSolution;
        r.note = inner.note;
        return Ok(finish(r));
    }
    let lck = inner.key.expect("successful SAT attack returns a key");
    let a = Assignment::from_pairs(lc.keys().iter().copied().zip(lck.lsb_first().iter().copied()));
    let extracted = simplify(&propagate_constants(&lc, &a));
    if probe_mismatch(&extracted, &[], &view, config.probes, config.seed.wrapping_add(1))?.is_some() {
        r.outcome = Outcome::NoSolution;
        r.note = Some("extracted design disagrees with the oracle".into());
        return Ok(finish(r));
    }
    r.outcome = Outcome::DesignExtracted;
    r.lck = Some(lck);
    r.extracted_bench = Some(emit_bench(&extracted));
    r.verification = Some(Verification::Probes(config.probes));
    Ok(finish(r))
}
