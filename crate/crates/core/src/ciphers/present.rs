//! PRESENT-80 and PRESENT-128: word-level reference and the unrolled circuit.

use super::circuit::{Bit, Circuit};

pub(crate) const SBOX: [u8; 16] = [
    0xC, 0x5, 0x6, 0xB, 0x9, 0x0, 0xA, 0xD, 0x3, 0xE, 0xF, 0x8, 0x4, 0x7, 0x1, 0x2,
];

/// Destination of state bit `i` in the permutation layer.
pub(crate) fn perm(i: usize) -> usize {
    if i == 63 {
        63
    } else {
        16 * i % 63
    }
}

fn sbox_layer(s: u64) -> u64 {
    (0..16).fold(0, |acc, j| acc | u64::from(SBOX[(s >> (4 * j) & 0xf) as usize]) << (4 * j))
}

fn p_layer(s: u64) -> u64 {
    (0..64).fold(0, |acc, i| acc | (s >> i & 1) << perm(i))
}

/// Key register as a `kl`-bit integer (kl = 80 or 128).
fn round_key(reg: u128, kl: usize) -> u64 {
    (reg >> (kl - 64)) as u64
}

fn update_key(reg: u128, kl: usize, counter: u128) -> u128 {
    let m = if kl == 128 { u128::MAX } else { (1u128 << kl) - 1 };
    let mut r = ((reg << 61) | (reg >> (kl - 61))) & m;
    let sb = |v: u128| u128::from(SBOX[v as usize]);
    r = (r & !(0xf << (kl - 4))) | sb(r >> (kl - 4) & 0xf) << (kl - 4);
    if kl == 128 {
        r = (r & !(0xf << 120)) | sb(r >> 120 & 0xf) << 120;
        r ^= counter << 62;
    } else {
        r ^= counter << 15;
    }
    r
}

pub(crate) fn encrypt(kl: usize, rounds: usize, key: u128, block: u64) -> u64 {
    let mut reg = key;
    let mut s = block;
    for i in 1..=rounds {
        s ^= round_key(reg, kl);
        s = p_layer(sbox_layer(s));
        reg = update_key(reg, kl, i as u128);
    }
    s ^ round_key(reg, kl)
}

/// Algebraic normal form of S-box output bit `out`: the set of input
/// monomials (as 4-bit masks) whose XOR yields it.
fn anf(out: usize) -> Vec<usize> {
    let mut t: Vec<u8> = (0..16).map(|x| SBOX[x] >> out & 1).collect();
    for i in 0..4 {
        for x in 0..16 {
            if x & (1 << i) != 0 {
                t[x] ^= t[x ^ (1 << i)];
            }
        }
    }
    (0..16).filter(|&m| t[m] == 1).collect()
}

pub(crate) struct SboxCircuit {
    anf: [Vec<usize>; 4],
}

impl SboxCircuit {
    pub(crate) fn new() -> SboxCircuit {
        SboxCircuit {
            anf: [anf(0), anf(1), anf(2), anf(3)],
        }
    }

    /// Applies the S-box to a nibble given LSB-first.
    pub(crate) fn apply(&self, c: &mut Circuit, x: &[Bit]) -> [Bit; 4] {
        let mut mono: [Option<Bit>; 16] = [None; 16];
        mono[0] = Some(Bit::Const(true));
        for i in 0..4 {
            mono[1 << i] = Some(x[i]);
        }
        let mut out = [Bit::Const(false); 4];
        for (o, terms) in self.anf.iter().enumerate() {
            let bits: Vec<Bit> = terms.iter().map(|&m| monomial(c, &mut mono, m)).collect();
            out[o] = c.xor(&bits);
        }
        out
    }
}

fn monomial(c: &mut Circuit, mono: &mut [Option<Bit>; 16], m: usize) -> Bit {
    if let Some(b) = mono[m] {
        return b;
    }
    let high = 1 << (usize::BITS - 1 - m.leading_zeros());
    let rest = monomial(c, mono, m ^ high);
    let top = monomial(c, mono, high);
    let b = c.and(rest, top);
    mono[m] = Some(b);
    b
}

/// Builds the cipher on LSB-first block and key vectors.
pub(crate) fn circuit(c: &mut Circuit, kl: usize, rounds: usize, block: &[Bit], key: &[Bit]) -> Vec<Bit> {
    let sbox = SboxCircuit::new();
    let mut reg = key.to_vec();
    let mut s = block.to_vec();
    for i in 1..=rounds {
        let x: Vec<Bit> = (0..64).map(|j| c.xor2(s[j], reg[kl - 64 + j])).collect();
        let mut y = vec![Bit::Const(false); 64];
        for nib in 0..16 {
            let o = sbox.apply(c, &x[4 * nib..4 * nib + 4]);
            y[4 * nib..4 * nib + 4].copy_from_slice(&o);
        }
        for j in 0..64 {
            s[perm(j)] = y[j];
        }
        let mut r: Vec<Bit> = (0..kl).map(|j| reg[(j + kl - 61) % kl]).collect();
        let tops: &[usize] = if kl == 128 { &[124, 120] } else { &[kl - 4] };
        for &t in tops {
            let o = sbox.apply(c, &r[t..t + 4]);
            r[t..t + 4].copy_from_slice(&o);
        }
        let base = if kl == 128 { 62 } else { 15 };
        for b in 0..5 {
            if i >> b & 1 == 1 {
                r[base + b] = !r[base + b];
            }
        }
        reg = r;
    }
    (0..64).map(|j| c.xor2(s[j], reg[kl - 64 + j])).collect()
}
