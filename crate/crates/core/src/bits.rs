//! Fixed-width bit patterns.
//!
//! Bit `i` of a pattern is the coefficient of `2^i`. Text forms are always
//! MSB-first: `to_hex` of a 16-bit pattern with only bit 0 set is `0x0001`,
//! and `to_bin` gives `z_{n-1} ... z_1 z_0`.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BitsError {
    #[error("`{text}` is not a valid {radix} literal")]
    Syntax { text: String, radix: &'static str },
    #[error("`{text}` does not fit in {width} bits")]
    Width { text: String, width: usize },
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Bits {
    bits: Vec<bool>,
}

impl Bits {
    pub fn zeros(width: usize) -> Bits {
        Bits {
            bits: vec![false; width],
        }
    }

    pub fn ones(width: usize) -> Bits {
        Bits {
            bits: vec![true; width],
        }
    }

    /// Bits in LSB-first order (`bits[0]` is bit 0).
    pub fn from_lsb_first(bits: Vec<bool>) -> Bits {
        Bits { bits }
    }

    /// Bits given MSB-first (`bits[0]` is bit `n-1`).
    pub fn from_msb_first(bits: &[bool]) -> Bits {
        Bits {
            bits: bits.iter().rev().copied().collect(),
        }
    }

    pub fn from_u128(value: u128, width: usize) -> Bits {
        assert!(width >= 128 || value >> width == 0, "value wider than {width} bits");
        Bits {
            bits: (0..width).map(|i| i < 128 && (value >> i) & 1 == 1).collect(),
        }
    }

    /// Little-endian words of `word_bits` bits each (`words[0]` holds bits 0..word_bits).
    pub fn from_words(words: &[u64], word_bits: usize) -> Bits {
        let mut bits = Vec::with_capacity(words.len() * word_bits);
        for &w in words {
            for i in 0..word_bits {
                bits.push((w >> i) & 1 == 1);
            }
        }
        Bits { bits }
    }

    pub fn to_words(&self, word_bits: usize) -> Vec<u64> {
        self.bits
            .chunks(word_bits)
            .map(|chunk| {
                chunk
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i))
            })
            .collect()
    }

    pub fn to_u128(&self) -> u128 {
        assert!(self.bits.len() <= 128);
        self.bits
            .iter()
            .enumerate()
            .fold(0u128, |acc, (i, &b)| acc | (u128::from(b) << i))
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, width: usize) -> Bits {
        Bits {
            bits: (0..width).map(|_| rng.gen()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] = !self.bits[i];
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn lsb_first(&self) -> &[bool] {
        &self.bits
    }

    pub fn msb_first(&self) -> Vec<bool> {
        self.bits.iter().rev().copied().collect()
    }

    /// Bits `lo..lo+width`.
    pub fn slice(&self, lo: usize, width: usize) -> Bits {
        Bits {
            bits: self.bits[lo..lo + width].to_vec(),
        }
    }

    /// `high ∥ low`: the result has `low` in its least significant bits.
    pub fn concat(high: &Bits, low: &Bits) -> Bits {
        let mut bits = low.bits.clone();
        bits.extend_from_slice(&high.bits);
        Bits { bits }
    }

    pub fn xor(&self, other: &Bits) -> Bits {
        assert_eq!(self.len(), other.len());
        Bits {
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect(),
        }
    }

    pub fn not(&self) -> Bits {
        Bits {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    /// `0x`-prefixed hexadecimal, zero-padded to `ceil(width / 4)` digits.
    pub fn to_hex(&self) -> String {
        let digits = self.len().div_ceil(4);
        let mut s = String::with_capacity(digits + 2);
        s.push_str("0x");
        for d in (0..digits).rev() {
            let mut v = 0u32;
            for j in 0..4 {
                let i = d * 4 + j;
                if i < self.len() && self.bits[i] {
                    v |= 1 << j;
                }
            }
            s.push(std::char::from_digit(v, 16).expect("nibble"));
        }
        s
    }

    /// Plain MSB-first binary string without prefix.
    pub fn to_bin(&self) -> String {
        self.bits.iter().rev().map(|&b| if b { '1' } else { '0' }).collect()
    }

    /// Parses hexadecimal (`0x` prefix optional, `_` separators allowed).
    /// Fails if the value has more digits than the width needs or does not fit.
    pub fn from_hex(text: &str, width: usize) -> Result<Bits, BitsError> {
        let body = text.trim();
        let body = body
            .strip_prefix("0x")
            .or_else(|| body.strip_prefix("0X"))
            .unwrap_or(body);
        let digits: Vec<char> = body.chars().filter(|&c| c != '_').collect();
        if digits.is_empty() {
            return Err(BitsError::Syntax {
                text: text.to_string(),
                radix: "hex",
            });
        }
        if digits.len() > width.div_ceil(4).max(1) {
            return Err(BitsError::Width {
                text: text.to_string(),
                width,
            });
        }
        let mut bits = vec![false; width];
        for (pos, c) in digits.iter().rev().enumerate() {
            let v = c.to_digit(16).ok_or_else(|| BitsError::Syntax {
                text: text.to_string(),
                radix: "hex",
            })?;
            for j in 0..4 {
                if (v >> j) & 1 == 1 {
                    let i = pos * 4 + j;
                    if i >= width {
                        return Err(BitsError::Width {
                            text: text.to_string(),
                            width,
                        });
                    }
                    bits[i] = true;
                }
            }
        }
        Ok(Bits { bits })
    }

    /// Parses an MSB-first 0/1 string (optional `0b` prefix); width is the string length.
    pub fn from_bin(text: &str) -> Result<Bits, BitsError> {
        let body = text.trim();
        let body = body.strip_prefix("0b").unwrap_or(body);
        let mut bits = Vec::with_capacity(body.len());
        for c in body.chars().rev() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                '_' => {}
                _ => {
                    return Err(BitsError::Syntax {
                        text: text.to_string(),
                        radix: "binary",
                    })
                }
            }
        }
        Ok(Bits { bits })
    }

    /// Parses `0x..` as hex or `0b..`/plain 0-1 strings as binary, checking the width.
    pub fn parse_with_width(text: &str, width: usize) -> Result<Bits, BitsError> {
        let t = text.trim();
        if t.starts_with("0x") || t.starts_with("0X") {
            return Bits::from_hex(t, width);
        }
        let b = Bits::from_bin(t)?;
        if b.len() != width {
            return Err(BitsError::Width {
                text: text.to_string(),
                width,
            });
        }
        Ok(b)
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits({}'b{})", self.len(), self.to_bin())
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bin())
    }
}

impl Serialize for Bits {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_bin())
    }
}

impl<'de> Deserialize<'de> for Bits {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Bits, D::Error> {
        let s = String::deserialize(d)?;
        Bits::from_bin(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter storing a pattern as `0x` hex with its width alongside.
pub mod hex_pattern {
    use super::Bits;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Repr {
        width: usize,
        hex: String,
    }

    pub fn serialize<S: Serializer>(b: &Bits, s: S) -> Result<S::Ok, S::Error> {
        Repr {
            width: b.len(),
            hex: b.to_hex(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Bits, D::Error> {
        let r = Repr::deserialize(d)?;
        Bits::from_hex(&r.hex, r.width).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hex_is_msb_first_and_padded() {
        let b = Bits::from_u128(0x6565_6877, 32);
        assert_eq!(b.to_hex(), "0x65656877");
        assert_eq!(Bits::from_u128(1, 16).to_hex(), "0x0001");
        assert_eq!(Bits::from_u128(0b101, 3).to_hex(), "0x5");
    }

    #[test]
    fn bin_string_is_msb_first() {
        let b = Bits::from_bin("01").unwrap();
        assert!(b.get(0));
        assert!(!b.get(1));
        assert_eq!(b.to_bin(), "01");
    }

    #[test]
    fn hex_width_errors() {
        assert!(matches!(Bits::from_hex("0x1ff", 8), Err(BitsError::Width { .. })));
        assert!(matches!(Bits::from_hex("0x1f", 4), Err(BitsError::Width { .. })));
        assert!(matches!(Bits::from_hex("0xzz", 8), Err(BitsError::Syntax { .. })));
        assert_eq!(Bits::from_hex("0x0_1", 8).unwrap(), Bits::from_u128(1, 8));
        assert!(Bits::parse_with_width("0b110", 4).is_err());
    }

    proptest! {
        #[test]
        fn hex_and_bin_round_trip(v in any::<u64>(), width in 1usize..64) {
            let v = v & ((1u64 << width) - 1);
            let b = Bits::from_u128(u128::from(v), width);
            prop_assert_eq!(Bits::from_hex(&b.to_hex(), width).unwrap(), b.clone());
            prop_assert_eq!(Bits::from_bin(&b.to_bin()).unwrap(), b.clone());
            prop_assert_eq!(b.to_u128(), u128::from(v));
        }
    }
}
