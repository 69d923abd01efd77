use std::time::Instant;

use cdcl::{Budget, Lit};

use crate::bits::Bits;
use crate::netlist::Netlist;
use crate::sat::{CheckedSolver, ClauseSink, Encoder, SatError, Signal, SolveStatus};

use super::oracle::{Oracle, OracleView};
use super::{probe_mismatch, AttackConfig, AttackError, AttackKind, AttackReport, Outcome, Verification};

pub enum DipStep {
    /// A distinguishing input pattern in the netlist's input order.
    Dip(Vec<bool>),
    /// Every pair of keys consistent with the observations agrees everywhere.
    Exhausted,
    Limit,
}

pub enum KeyStep {
    Key(Vec<bool>),
    /// No key reproduces the observations.
    Inconsistent,
    Limit,
}

/// Incremental state of the DIP loop: two key copies over a shared input,
/// constrained by every observed input/output pair. The miter clause is
/// guarded by an activation literal so the same solver later yields a
/// consistent key with the miter switched off.
pub struct DipLoop<'a> {
    locked: &'a Netlist,
    enc: Encoder<CheckedSolver>,
    x: Vec<Signal>,
    k1: Vec<Signal>,
    k2: Vec<Signal>,
    act: Lit,
    distinguishable: bool,
    observations: u64,
}

impl<'a> DipLoop<'a> {
    pub fn new(locked: &'a Netlist) -> DipLoop<'a> {
        let mut enc = Encoder::new(CheckedSolver::new());
        let x: Vec<Signal> = locked.inputs().iter().map(|_| Signal::Lit(enc.fresh())).collect();
        let k1: Vec<Signal> = locked.keys().iter().map(|_| Signal::Lit(enc.fresh())).collect();
        let k2: Vec<Signal> = locked.keys().iter().map(|_| Signal::Lit(enc.fresh())).collect();
        let o1 = encode_copy(&mut enc, locked, &x, &k1);
        let o2 = encode_copy(&mut enc, locked, &x, &k2);
        let diffs: Vec<Signal> = o1.iter().zip(&o2).map(|(&a, &b)| enc.xor2(a, b)).collect();
        let diff = enc.or(&diffs);
        let act = enc.fresh();
        let distinguishable = match diff {
            Signal::Const(d) => d,
            Signal::Lit(l) => {
                enc.sink.add_clause(&[!act, l]);
                true
            }
        };
        DipLoop {
            locked,
            enc,
            x,
            k1,
            k2,
            act,
            distinguishable,
            observations: 0,
        }
    }

    pub fn conflicts(&self) -> u64 {
        self.enc.sink.conflicts()
    }

    pub fn observations(&self) -> u64 {
        self.observations
    }

    pub fn next_dip(&mut self, budget: Option<Budget>) -> Result<DipStep, SatError> {
        if !self.distinguishable {
            return Ok(DipStep::Exhausted);
        }
        Ok(match self.enc.sink.solve_from(&[self.act], budget)? {
            SolveStatus::Satisfiable => {
                let s = &self.enc.sink;
                DipStep::Dip(self.x.iter().map(|&v| s.signal_value(v)).collect())
            }
            SolveStatus::Unsatisfiable => DipStep::Exhausted,
            SolveStatus::ResourceLimit => DipStep::Limit,
        })
    }

    /// Restricts both key copies to keys producing `outputs` on `inputs`.
    pub fn add_observation(&mut self, inputs: &[bool], outputs: &[bool]) {
        let x: Vec<Signal> = inputs.iter().map(|&b| Signal::Const(b)).collect();
        for copy in [self.k1.clone(), self.k2.clone()] {
            let o = encode_copy(&mut self.enc, self.locked, &x, &copy);
            for (&s, &v) in o.iter().zip(outputs) {
                self.enc.assert_signal(if v { s } else { !s });
            }
        }
        self.observations += 1;
    }

    pub fn consistent_key(&mut self, budget: Option<Budget>) -> Result<KeyStep, SatError> {
        Ok(match self.enc.sink.solve_from(&[!self.act], budget)? {
            SolveStatus::Satisfiable => {
                let s = &self.enc.sink;
                KeyStep::Key(self.k1.iter().map(|&v| s.signal_value(v)).collect())
            }
            SolveStatus::Unsatisfiable => KeyStep::Inconsistent,
            SolveStatus::ResourceLimit => KeyStep::Limit,
        })
    }
}

fn encode_copy(enc: &mut Encoder<CheckedSolver>, n: &Netlist, x: &[Signal], k: &[Signal]) -> Vec<Signal> {
    let mut sig = vec![None; n.num_nets()];
    for (&i, &s) in n.inputs().iter().zip(x) {
        sig[i.index()] = Some(s);
    }
    for (&i, &s) in n.keys().iter().zip(k) {
        sig[i.index()] = Some(s);
    }
    enc.encode(n, &mut sig);
    n.outputs().iter().map(|o| sig[o.index()].expect("encoded")).collect()
}

/// The oracle-guided SAT attack. A returned key agrees with the oracle on
/// `config.probes` random patterns; otherwise the outcome is no-solution.
pub fn sat_attack(locked: &Netlist, oracle: &dyn Oracle, config: &AttackConfig) -> Result<AttackReport, AttackError> {
    if locked.keys().is_empty() {
        return Err(AttackError::NoKeys);
    }
    let view = OracleView::new(oracle, locked)?;
    let start = Instant::now();
    let q0 = view.queries();
    let mut dl = DipLoop::new(locked);
    let finish = |mut r: AttackReport, dl: &DipLoop<'_>| {
        r.iterations = dl.observations();
        r.conflicts = dl.conflicts();
        r.oracle_queries = view.queries() - q0;
        r.wall_time = start.elapsed();
        r
    };
    loop {
        match dl.next_dip(config.budget.remaining(start, dl.conflicts()))? {
            DipStep::Dip(x) => {
                let y = view.query(&x)?;
                dl.add_observation(&x, &y);
            }
            DipStep::Exhausted => break,
            DipStep::Limit => {
                let r = AttackReport::new(AttackKind::Sat, Outcome::NoSolution).with_note("budget exhausted");
                return Ok(finish(r, &dl));
            }
        }
    }
    let key = match dl.consistent_key(config.budget.remaining(start, dl.conflicts()))? {
        KeyStep::Key(k) => k,
        KeyStep::Inconsistent => {
            let r = AttackReport::new(AttackKind::Sat, Outcome::NoSolution)
                .with_note("no key reproduces the oracle responses");
            return Ok(finish(r, &dl));
        }
        KeyStep::Limit => {
            let r = AttackReport::new(AttackKind::Sat, Outcome::NoSolution).with_note("budget exhausted");
            return Ok(finish(r, &dl));
        }
    };
    let r = if let Some(x) = probe_mismatch(locked, &key, &view, config.probes, config.seed)? {
        let text: String = x.iter().map(|&b| if b { '1' } else { '0' }).collect();
        AttackReport::new(AttackKind::Sat, Outcome::NoSolution)
            .with_note(format!("recovered key disagrees with the oracle on {text}"))
    } else {
        let mut r = AttackReport::new(AttackKind::Sat, Outcome::KeyRecovered);
        r.verification = Some(Verification::Probes(config.probes));
        r.key = Some(Bits::from_lsb_first(key));
        r
    };
    Ok(finish(r, &dl))
}
