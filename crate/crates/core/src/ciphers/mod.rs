//! Lightweight block ciphers: bit-exact reference encryptors and fully
//! unrolled combinational circuits.
//!
//! Circuits declare plaintext inputs `x[bs-1]` .. `x[0]`, then key inputs
//! `k[kl-1]` .. `k[0]`, and ciphertext outputs `y[bs-1]` .. `y[0]`. All of
//! them are ordinary primary inputs; key roles are assigned by locking.

mod ascon;
mod circuit;
mod present;
mod simon;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::bits::{hex_pattern, Bits};
use crate::netlist::{propagate_constants, simplify, Assignment, Netlist};

pub use ascon::{ASCON_IV, ASCON_NONCE};
pub(crate) use circuit::Circuit;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CipherError {
    #[error("unsupported cipher `{0}`")]
    Unsupported(String),
    #[error("{what} has {got} bits, expected {expected}")]
    Width {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("netlist has no plaintext input `{0}`")]
    MissingInput(String),
    #[error("known-answer line {line}: {message}")]
    KnownAnswer { line: usize, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CipherFamily {
    Simon,
    Present,
    Ascon,
}

impl CipherFamily {
    pub fn name(self) -> &'static str {
        match self {
            CipherFamily::Simon => "simon",
            CipherFamily::Present => "present",
            CipherFamily::Ascon => "ascon",
        }
    }
}

/// Supported (family, bs, kl, full round count) rows.
const ROWS: [(CipherFamily, usize, usize, usize); 13] = [
    (CipherFamily::Simon, 32, 64, 32),
    (CipherFamily::Simon, 48, 72, 36),
    (CipherFamily::Simon, 48, 96, 36),
    (CipherFamily::Simon, 64, 96, 42),
    (CipherFamily::Simon, 64, 128, 44),
    (CipherFamily::Simon, 96, 96, 52),
    (CipherFamily::Simon, 96, 144, 54),
    (CipherFamily::Simon, 128, 128, 68),
    (CipherFamily::Simon, 128, 192, 69),
    (CipherFamily::Simon, 128, 256, 72),
    (CipherFamily::Present, 64, 80, 31),
    (CipherFamily::Present, 64, 128, 31),
    (CipherFamily::Ascon, 128, 128, 12),
];

/// A cipher instance. Round counts below the full count are reduced-round
/// variants for cryptanalysis experiments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CipherSpec {
    family: CipherFamily,
    bs: usize,
    kl: usize,
    rounds: usize,
}

impl CipherSpec {
    pub const SIMON_32_64: CipherSpec = CipherSpec {
        family: CipherFamily::Simon,
        bs: 32,
        kl: 64,
        rounds: 32,
    };
    pub const PRESENT_80: CipherSpec = CipherSpec {
        family: CipherFamily::Present,
        bs: 64,
        kl: 80,
        rounds: 31,
    };

    pub fn new(family: CipherFamily, bs: usize, kl: usize, rounds: usize) -> Result<CipherSpec, CipherError> {
        let spec = CipherSpec {
            family,
            bs,
            kl,
            rounds,
        };
        match spec.full_rounds() {
            Some(full) if (1..=full).contains(&rounds) => Ok(spec),
            _ => Err(CipherError::Unsupported(spec.to_string())),
        }
    }

    /// Every supported full-round instance.
    pub fn all() -> Vec<CipherSpec> {
        ROWS.iter()
            .map(|&(family, bs, kl, rounds)| CipherSpec {
                family,
                bs,
                kl,
                rounds,
            })
            .collect()
    }

    pub fn family(&self) -> CipherFamily {
        self.family
    }

    pub fn block_size(&self) -> usize {
        self.bs
    }

    pub fn key_length(&self) -> usize {
        self.kl
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn full_rounds(&self) -> Option<usize> {
        ROWS.iter()
            .find(|&&(f, bs, kl, _)| f == self.family && bs == self.bs && kl == self.kl)
            .map(|r| r.3)
    }

    pub fn is_reduced(&self) -> bool {
        self.full_rounds() != Some(self.rounds)
    }

    /// The same cipher with `rounds` rounds.
    pub fn reduced(&self, rounds: usize) -> Result<CipherSpec, CipherError> {
        CipherSpec::new(self.family, self.bs, self.kl, rounds)
    }
}

impl fmt::Display for CipherSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}-{}-{}", self.family.name(), self.bs, self.kl, self.rounds)
    }
}

/// Parses `family-bs-kl-r` with `-` or `_` separators, case-insensitively
/// (`simon-32-64-32`, `PRESENT_64_80_31`). `family-bs-kl` means full rounds.
impl FromStr for CipherSpec {
    type Err = CipherError;

    fn from_str(s: &str) -> Result<CipherSpec, CipherError> {
        let bad = || CipherError::Unsupported(s.to_string());
        let parts: Vec<String> = s.split(['-', '_']).map(str::to_ascii_lowercase).collect();
        let family = match parts.first().map(String::as_str) {
            Some("simon") => CipherFamily::Simon,
            Some("present") => CipherFamily::Present,
            Some("ascon") => CipherFamily::Ascon,
            _ => return Err(bad()),
        };
        let nums: Vec<usize> = parts[1..]
            .iter()
            .map(|p| p.parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        match nums.as_slice() {
            &[bs, kl, r] => CipherSpec::new(family, bs, kl, r).map_err(|_| bad()),
            &[bs, kl] => {
                let probe = CipherSpec {
                    family,
                    bs,
                    kl,
                    rounds: 0,
                };
                let full = probe.full_rounds().ok_or_else(bad)?;
                CipherSpec::new(family, bs, kl, full)
            }
            _ => Err(bad()),
        }
    }
}

impl Serialize for CipherSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CipherSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<CipherSpec, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Plaintext, key and the ciphertext they produce.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternTriple {
    #[serde(with = "hex_pattern")]
    pub x: Bits,
    #[serde(with = "hex_pattern")]
    pub k: Bits,
    #[serde(with = "hex_pattern")]
    pub y: Bits,
}

/// The constants fixing the ASCON construction, kept in lock records.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsconVariantParams {
    pub iv: u64,
    pub nonce: u128,
}

impl Default for AsconVariantParams {
    fn default() -> AsconVariantParams {
        AsconVariantParams {
            iv: ASCON_IV,
            nonce: ASCON_NONCE,
        }
    }
}

fn check_width(what: &'static str, b: &Bits, expected: usize) -> Result<(), CipherError> {
    if b.len() != expected {
        return Err(CipherError::Width {
            what,
            expected,
            got: b.len(),
        });
    }
    Ok(())
}

pub fn reference_encrypt(spec: &CipherSpec, key: &Bits, block: &Bits) -> Result<Bits, CipherError> {
    check_width("key", key, spec.kl)?;
    check_width("block", block, spec.bs)?;
    match spec.family {
        CipherFamily::Simon => {
            let p = simon::params(spec.bs, spec.kl).ok_or_else(|| CipherError::Unsupported(spec.to_string()))?;
            let words = block.to_words(p.n);
            let (x, y) = simon::encrypt(p, spec.rounds, &key.to_words(p.n), words[1], words[0]);
            Ok(Bits::from_words(&[y, x], p.n))
        }
        CipherFamily::Present => Ok(Bits::from_u128(
            u128::from(present::encrypt(spec.kl, spec.rounds, key.to_u128(), block.to_u128() as u64)),
            64,
        )),
        CipherFamily::Ascon => Ok(Bits::from_u128(
            ascon::encrypt(spec.rounds, key.to_u128(), block.to_u128()),
            128,
        )),
    }
}

/// Name of plaintext input bit `i` (bit 0 is the least significant).
pub fn plaintext_name(i: usize) -> String {
    format!("x[{i}]")
}

pub fn key_name(i: usize) -> String {
    format!("k[{i}]")
}

pub fn ciphertext_name(i: usize) -> String {
    format!("y[{i}]")
}

pub fn build_unrolled_circuit(spec: &CipherSpec) -> Netlist {
    let mut c = Circuit::new();
    let x = c.input_vector("x", spec.bs);
    let k = c.input_vector("k", spec.kl);
    let y = match spec.family {
        CipherFamily::Simon => {
            let p = simon::params(spec.bs, spec.kl).expect("validated spec");
            simon::circuit(&mut c, p, spec.rounds, &x, &k)
        }
        CipherFamily::Present => present::circuit(&mut c, spec.kl, spec.rounds, &x, &k),
        CipherFamily::Ascon => ascon::circuit(&mut c, spec.rounds, &x, &k),
    };
    c.output_vector("y", &y);
    c.finish()
}

/// Fixes the plaintext inputs `x[..]` to `x` and simplifies; the remaining
/// sources are the key inputs.
pub fn specialize_plaintext(netlist: &Netlist, x: &Bits) -> Result<Netlist, CipherError> {
    let mut a = Assignment::new();
    for i in 0..x.len() {
        let name = plaintext_name(i);
        let net = netlist.find(&name).ok_or(CipherError::MissingInput(name))?;
        a.set(net, x.get(i));
    }
    let present = netlist
        .inputs()
        .iter()
        .filter(|&&n| {
            let nm = netlist.name(n);
            nm.starts_with("x[") && nm.ends_with(']')
        })
        .count();
    if present != x.len() {
        return Err(CipherError::Width {
            what: "plaintext",
            expected: present,
            got: x.len(),
        });
    }
    Ok(simplify(&propagate_constants(netlist, &a)))
}

pub fn sample_pattern_triple(spec: &CipherSpec, seed: u64) -> PatternTriple {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = Bits::random(&mut rng, spec.bs);
    let k = Bits::random(&mut rng, spec.kl);
    let y = reference_encrypt(spec, &k, &x).expect("widths match the cipher instance");
    PatternTriple { x, k, y }
}

/// Input vector for a cipher circuit in primary-input order.
pub fn circuit_inputs(key: &Bits, block: &Bits) -> Vec<bool> {
    let mut v = block.msb_first();
    v.extend(key.msb_first());
    v
}

/// The known-answer vectors shipped with the crate.
pub const BUILTIN_KNOWN_ANSWERS: &str = include_str!("../../fixtures/kat.txt");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnownAnswer {
    pub spec: CipherSpec,
    pub key: Bits,
    pub plaintext: Bits,
    pub ciphertext: Bits,
}

/// Parses `cipher key plaintext ciphertext` lines (hex, `#` comments).
pub fn parse_known_answers(text: &str) -> Result<Vec<KnownAnswer>, CipherError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| CipherError::KnownAnswer { line: i + 1, message };
        let f: Vec<&str> = line.split_whitespace().collect();
        let [spec, key, pt, ct] = f.as_slice() else {
            return Err(err(format!("expected 4 fields, found {}", f.len())));
        };
        let spec: CipherSpec = spec.parse().map_err(|e: CipherError| err(e.to_string()))?;
        let hex = |t: &str, w| Bits::from_hex(t, w).map_err(|e| err(e.to_string()));
        out.push(KnownAnswer {
            spec,
            key: hex(key, spec.kl)?,
            plaintext: hex(pt, spec.bs)?,
            ciphertext: hex(ct, spec.bs)?,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_names_round_trip() {
        for s in CipherSpec::all() {
            assert_eq!(s.to_string().parse::<CipherSpec>().unwrap(), s);
            assert!(!s.is_reduced());
        }
        let s: CipherSpec = "SIMON_32_64_32".parse().unwrap();
        assert_eq!(s, CipherSpec::SIMON_32_64);
        assert_eq!("present-64-80".parse::<CipherSpec>().unwrap(), CipherSpec::PRESENT_80);
        assert!("simon-32-64-33".parse::<CipherSpec>().is_err());
        assert!("simon-32-72-32".parse::<CipherSpec>().is_err());
        assert!(CipherSpec::SIMON_32_64.reduced(4).unwrap().is_reduced());
    }
}
