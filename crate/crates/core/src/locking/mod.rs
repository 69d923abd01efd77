//! Locking and obfuscation transformations.
//!
//! Every transformation returns the locked netlist and a [`LockRecord`]
//! holding the secret key in key-input order together with the structural
//! metadata that tests and attacks use as ground truth. Key inputs are named
//! `keyinput{i}` where `i` is the position in the key vector.

mod antisat;
mod cipher;
mod lut;
mod observe;
mod ttlock;
mod xor;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{hex_pattern, Bits};
use crate::ciphers::{AsconVariantParams, CipherError, CipherSpec, PatternTriple};
use crate::netlist::{
    support_sets, GateKind, NetId, Netlist, NetlistBuilder, NetlistError, DEFAULT_KEY_PREFIX,
};
use crate::sat::SatError;

pub use antisat::lock_antisat;
pub use cipher::{lock_cipher_xor, lock_compound};
pub use lut::{lock_lut, obfuscate_with_luts, LutTarget};
pub use ttlock::lock_ttlock;
pub use xor::lock_xor;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LockError {
    #[error("need {needed} candidate gates, netlist offers {available}")]
    TooFewGates { needed: usize, available: usize },
    #[error("need {needed} primary inputs, netlist has {available}")]
    TooFewInputs { needed: usize, available: usize },
    #[error("no primary output has {width} primary inputs in its cone")]
    NoEligibleOutput { width: usize },
    #[error("LUT target `{net}` has {arity} inputs, above the maximum {m}")]
    ArityExceeded { net: String, arity: usize, m: usize },
    #[error("LUT target `{0}` is not a gate bounded by its leaves")]
    BadTarget(String),
    #[error("LUT size must be between 2 and 6, got {0}")]
    LutSize(usize),
    #[error("netlist already has key inputs")]
    AlreadyLocked,
    #[error("protected pattern has {got} bits, width is {expected}")]
    PatternWidth { expected: usize, got: usize },
    #[error("{0}")]
    Placement(String),
    #[error(transparent)]
    Cipher(#[from] CipherError),
    #[error(transparent)]
    Netlist(#[from] NetlistError),
    #[error(transparent)]
    Sat(#[from] SatError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Xor,
    Lut,
    AntiSat,
    Ttlock,
    CipherXor,
    Compound,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Xor => "xor",
            Scheme::Lut => "lut",
            Scheme::AntiSat => "anti-sat",
            Scheme::Ttlock => "ttlock",
            Scheme::CipherXor => "cipher-xor",
            Scheme::Compound => "compound",
        }
    }
}

/// Where LUTs go in the compound scheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "policy")]
pub enum LutPlacement {
    /// One LUT per cipher-output boundary net, alternating between the
    /// cipher-side driver (even bits) and the restore-unit comparator (odd bits).
    BoundaryCover,
    /// Exactly `count` LUTs: first the restore comparator's first level as
    /// up to `bs/2` LUT4s over two protected inputs and the two cipher
    /// outputs they are compared with, then cipher-side LUTs over `m`-leaf
    /// cuts rooted at cipher outputs. Needs `m >= 4`.
    Forced { count: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LutConfig {
    /// Maximum LUT input count.
    pub m: usize,
    pub placement: LutPlacement,
}

impl LutConfig {
    pub fn new(m: usize, placement: LutPlacement) -> Result<LutConfig, LockError> {
        if !(2..=6).contains(&m) {
            return Err(LockError::LutSize(m));
        }
        Ok(LutConfig { m, placement })
    }
}

impl Default for LutConfig {
    fn default() -> LutConfig {
        LutConfig {
            m: 4,
            placement: LutPlacement::BoundaryCover,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LutSide {
    /// Ordinary design logic (plain LUT locking).
    Design,
    /// Inside the block cipher.
    Cipher,
    /// Inside the restore unit.
    Restore,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LutRecord {
    /// Net driven by the LUT.
    pub target: String,
    /// Select inputs; leaf `j` is bit `j` of the row index.
    pub leaves: Vec<String>,
    /// Position of row 0 in the key vector; the segment has `2^leaves` bits.
    pub key_offset: usize,
    pub side: LutSide,
}

impl LutRecord {
    pub fn key_bits(&self) -> usize {
        1 << self.leaves.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HexBits(#[serde(with = "hex_pattern")] pub Bits);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CipherRecord {
    pub spec: CipherSpec,
    pub triple: PatternTriple,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ascon: Option<AsconVariantParams>,
}

/// Secret key and structural metadata of a locked netlist. Net references
/// are names in the locked netlist.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LockRecord {
    pub scheme: Scheme,
    pub seed: u64,
    /// Secret key in key-input order, written most significant (last) first.
    pub key: Bits,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub protected_pattern: Option<HexBits>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub protected_inputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub locked_output: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cs1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cs2: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub restore_unit: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub perturb_unit: Vec<String>,
    /// Nets carrying the block-cipher outputs into the design.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub boundary: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub luts: Vec<LutRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lut_config: Option<LutConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cipher: Option<CipherRecord>,
}

impl LockRecord {
    fn new(scheme: Scheme, seed: u64, key: Bits) -> LockRecord {
        LockRecord {
            scheme,
            seed,
            key,
            protected_pattern: None,
            protected_inputs: Vec::new(),
            locked_output: None,
            cs1: None,
            cs2: None,
            restore_unit: Vec::new(),
            perturb_unit: Vec::new(),
            boundary: Vec::new(),
            luts: Vec::new(),
            lut_config: None,
            cipher: None,
        }
    }

    /// Number of key inputs.
    pub fn nok(&self) -> usize {
        self.key.len()
    }

    pub fn lut_key_bits(&self) -> usize {
        self.luts.iter().map(LutRecord::key_bits).sum()
    }

    /// The LUT key segments, in placement order.
    pub fn lut_key(&self) -> Bits {
        let bits: Vec<bool> = self
            .luts
            .iter()
            .flat_map(|l| self.key.lsb_first()[l.key_offset..l.key_offset + l.key_bits()].to_vec())
            .collect();
        Bits::from_lsb_first(bits)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records serialize")
    }

    pub fn from_json(text: &str) -> Result<LockRecord, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Drops references to nets that no longer exist in `netlist`.
    fn retain_existing(&mut self, netlist: &Netlist) {
        let exists = |n: &String| netlist.find(n).is_some();
        self.restore_unit.retain(exists);
        self.perturb_unit.retain(exists);
        self.boundary.retain(exists);
        for cs in [&mut self.cs1, &mut self.cs2] {
            if cs.as_ref().is_some_and(|n| !exists(n)) {
                *cs = None;
            }
        }
    }
}

pub fn key_input_name(i: usize) -> String {
    format!("{DEFAULT_KEY_PREFIX}{i}")
}

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A protected pattern drawn from the job generator for `seed`.
pub fn random_pattern(width: usize, seed: u64) -> Bits {
    Bits::random(&mut rng(seed), width)
}

fn ensure_unlocked(netlist: &Netlist) -> Result<(), LockError> {
    if netlist.keys().is_empty() {
        Ok(())
    } else {
        Err(LockError::AlreadyLocked)
    }
}

/// The output with the most primary inputs in its cone among those with at
/// least `width` (ties go to the earlier output), and the first `width` of
/// those inputs in declaration order.
pub(crate) fn select_output(netlist: &Netlist, width: usize) -> Result<(NetId, Vec<NetId>), LockError> {
    let sup = support_sets(netlist);
    let n_in = netlist.inputs().len();
    let mut best: Option<(usize, NetId)> = None;
    for &o in netlist.outputs() {
        let c = sup[o.index()].iter().filter(|&i| i < n_in).count();
        if c >= width && best.is_none_or(|(bc, _)| c > bc) {
            best = Some((c, o));
        }
    }
    let (_, po) = best.ok_or(LockError::NoEligibleOutput { width })?;
    let pis: Vec<NetId> = sup[po.index()]
        .iter()
        .filter(|&i| i < n_in)
        .take(width)
        .map(|i| netlist.inputs()[i])
        .collect();
    Ok((po, pis))
}

/// Balanced tree of 2-input `kind` gates pairing adjacent nets. Returns the
/// root and every gate created.
pub(crate) fn balanced_tree(
    b: &mut NetlistBuilder,
    kind: GateKind,
    nets: &[NetId],
    stem: &str,
    root_name: &str,
) -> (NetId, Vec<NetId>) {
    assert!(!nets.is_empty());
    let mut level = nets.to_vec();
    let mut made = Vec::new();
    while level.len() > 1 {
        let last = level.len() == 2;
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        for pair in level.chunks(2) {
            match pair {
                [x, y] => {
                    let n = if last {
                        b.gate_named(root_name, kind, vec![*x, *y])
                    } else {
                        let name = b.fresh_name(stem);
                        b.add_gate(&name, kind, vec![*x, *y]).expect("fresh name")
                    };
                    made.push(n);
                    next.push(n);
                }
                [x] => next.push(*x),
                _ => unreachable!(),
            }
        }
        level = next;
    }
    (level[0], made)
}

pub(crate) fn names(b: &NetlistBuilder, nets: &[NetId]) -> Vec<String> {
    nets.iter().map(|&n| b.name(n).to_string()).collect()
}
