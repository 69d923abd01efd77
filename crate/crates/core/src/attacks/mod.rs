//! Oracle-guided attacks on locked netlists: the DIP-loop SAT attack, the
//! cipher removal attack, the algebraic key-recovery attack that follows it,
//! and exhaustive key search for small instances.

mod algebraic;
mod brute;
mod oracle;
mod removal;
mod sat_attack;

use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::Bits;
use crate::netlist::{Netlist, NetlistError, WordSimulator};
use crate::sat::{SatError, SolveBudget};

pub use algebraic::{algebraic_attack, extract_cipher};
pub use brute::{brute_force_key_search, MAX_BRUTE_FORCE_KEY_BITS};
pub use oracle::{NetlistOracle, Oracle, Transcript, TranscriptOracle};
pub use removal::{find_cipher_outputs, removal_attack, remove_cipher, CipherBoundary};
pub use sat_attack::{sat_attack, DipLoop, DipStep, KeyStep};

use oracle::OracleView;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AttackError {
    #[error("interface mismatch: {0}")]
    Interface(String),
    #[error("netlist has no key inputs")]
    NoKeys,
    #[error("{bits} key bits exceed the exhaustive-search limit of {limit}")]
    KeySpaceTooLarge { bits: usize, limit: usize },
    #[error("key has {got} bits, netlist has {expected} key inputs")]
    KeyWidth { expected: usize, got: usize },
    #[error("pattern {0} is not in the transcript")]
    OutsideTranscript(String),
    #[error("transcript: {0}")]
    Transcript(String),
    #[error(transparent)]
    Sat(#[from] SatError),
    #[error(transparent)]
    Netlist(#[from] NetlistError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttackKind {
    Sat,
    Removal,
    Algebraic,
    BruteForce,
}

impl AttackKind {
    pub fn name(self) -> &'static str {
        match self {
            AttackKind::Sat => "sat",
            AttackKind::Removal => "removal",
            AttackKind::Algebraic => "algebraic",
            AttackKind::BruteForce => "brute-force",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    KeyRecovered,
    DesignExtracted,
    /// The attack ran but found nothing: budget exhausted or no consistent key.
    NoSolution,
    /// A structural precondition of the attack does not hold.
    NotApplicable,
}

impl Outcome {
    pub fn is_success(self) -> bool {
        matches!(self, Outcome::KeyRecovered | Outcome::DesignExtracted)
    }
}

/// How a returned key or design was checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verification {
    /// Agreed with the oracle on this many random patterns.
    Probes(usize),
    /// Re-derived the recovered cipher outputs by simulation.
    Resimulated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackReport {
    pub attack: AttackKind,
    pub outcome: Outcome,
    /// Recovered key in key-input order of the attacked netlist.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub key: Option<Bits>,
    /// Every functionally correct key (exhaustive search only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub correct_keys: Vec<Bits>,
    /// Extracted design as bench text.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extracted_bench: Option<String>,
    /// Nets taken for cipher outputs, with the verdict on them.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bco: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bco_valid: Option<bool>,
    /// Values recovered for the cipher-output nets, in `bco` order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lck: Option<Bits>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
    pub iterations: u64,
    pub oracle_queries: u64,
    pub conflicts: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Kept out of report files so reruns are byte-identical.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl AttackReport {
    pub fn new(attack: AttackKind, outcome: Outcome) -> AttackReport {
        AttackReport {
            attack,
            outcome,
            key: None,
            correct_keys: Vec::new(),
            extracted_bench: None,
            bco: Vec::new(),
            bco_valid: None,
            lck: None,
            verification: None,
            iterations: 0,
            oracle_queries: 0,
            conflicts: 0,
            note: None,
            wall_time: Duration::ZERO,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> AttackReport {
        self.note = Some(note.into());
        self
    }

    pub fn extracted(&self) -> Option<Netlist> {
        self.extracted_bench
            .as_deref()
            .map(|t| crate::netlist::parse_bench(t).expect("extracted bench was emitted by this crate"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<AttackReport, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AttackConfig {
    pub budget: SolveBudget,
    /// Random oracle probes a recovered key or design must agree on.
    pub probes: usize,
    pub seed: u64,
}

impl Default for AttackConfig {
    fn default() -> AttackConfig {
        AttackConfig {
            budget: SolveBudget::unlimited(),
            probes: 1000,
            seed: 0,
        }
    }
}

impl AttackConfig {
    pub fn with_budget(budget: SolveBudget) -> AttackConfig {
        AttackConfig {
            budget,
            ..AttackConfig::default()
        }
    }
}

pub(crate) fn random_patterns(width: usize, count: usize, seed: u64) -> Vec<Vec<bool>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (0..width).map(|_| rng.gen()).collect()).collect()
}

/// First random probe on which `netlist` under `key` disagrees with the oracle.
pub(crate) fn probe_mismatch(
    netlist: &Netlist,
    key: &[bool],
    view: &OracleView<'_>,
    probes: usize,
    seed: u64,
) -> Result<Option<Vec<bool>>, AttackError> {
    let patterns = random_patterns(netlist.inputs().len(), probes, seed);
    let answers = view.query_batch(&patterns)?;
    let mut sim = WordSimulator::new(netlist);
    let kw: Vec<u64> = key.iter().map(|&b| if b { !0 } else { 0 }).collect();
    for (chunk, want) in patterns.chunks(64).zip(answers.chunks(64)) {
        let words: Vec<u64> = (0..netlist.inputs().len())
            .map(|i| chunk.iter().enumerate().fold(0u64, |acc, (l, x)| acc | u64::from(x[i]) << l))
            .collect();
        sim.run(&words, &kw).map_err(|e| AttackError::Interface(e.to_string()))?;
        let outs = sim.outputs();
        for (l, y) in want.iter().enumerate() {
            if outs.iter().zip(y).any(|(v, &b)| (v >> l & 1 == 1) != b) {
                return Ok(Some(chunk[l].clone()));
            }
        }
    }
    Ok(None)
}
