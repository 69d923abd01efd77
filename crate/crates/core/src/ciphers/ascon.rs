//! The reduced single-block ASCON construction: initialize with IV, key and
//! a fixed nonce, run the 12-round permutation, XOR the key into the last
//! 128 state bits, then XOR the 128-bit rate into the plaintext.

use super::circuit::{Bit, Circuit};

/// Initialization value of ASCON-AEAD128.
pub const ASCON_IV: u64 = 0x0000_1000_808c_0001;
/// Fixed nonce, bytes 00 01 .. 0f.
pub const ASCON_NONCE: u128 = 0x0001_0203_0405_0607_0809_0a0b_0c0d_0e0f;

pub(crate) const ROUND_CONSTANTS: [u64; 12] = [
    0xf0, 0xe1, 0xd2, 0xc3, 0xb4, 0xa5, 0x96, 0x87, 0x78, 0x69, 0x5a, 0x4b,
];

const ROTATIONS: [(u32, u32); 5] = [(19, 28), (61, 39), (1, 6), (10, 17), (7, 41)];

pub(crate) fn permutation(s: &mut [u64; 5], rounds: usize) {
    for &c in &ROUND_CONSTANTS[12 - rounds..] {
        s[2] ^= c;
        s[0] ^= s[4];
        s[4] ^= s[3];
        s[2] ^= s[1];
        let t: [u64; 5] = std::array::from_fn(|i| !s[i] & s[(i + 1) % 5]);
        for i in 0..5 {
            s[i] ^= t[(i + 1) % 5];
        }
        s[1] ^= s[0];
        s[0] ^= s[4];
        s[3] ^= s[2];
        s[2] = !s[2];
        for (w, &(a, b)) in s.iter_mut().zip(&ROTATIONS) {
            *w ^= w.rotate_right(a) ^ w.rotate_right(b);
        }
    }
}

pub(crate) fn encrypt(rounds: usize, key: u128, block: u128) -> u128 {
    let (k0, k1) = ((key >> 64) as u64, key as u64);
    let mut s = [ASCON_IV, k0, k1, (ASCON_NONCE >> 64) as u64, ASCON_NONCE as u64];
    permutation(&mut s, rounds);
    s[3] ^= k0;
    s[4] ^= k1;
    block ^ (u128::from(s[0]) << 64 | u128::from(s[1]))
}

fn const_word(v: u64) -> Vec<Bit> {
    (0..64).map(|i| Bit::Const(v >> i & 1 == 1)).collect()
}

/// Builds the construction on LSB-first 128-bit block and key vectors.
pub(crate) fn circuit(c: &mut Circuit, rounds: usize, block: &[Bit], key: &[Bit]) -> Vec<Bit> {
    let mut s: [Vec<Bit>; 5] = [
        const_word(ASCON_IV),
        key[64..].to_vec(),
        key[..64].to_vec(),
        const_word((ASCON_NONCE >> 64) as u64),
        const_word(ASCON_NONCE as u64),
    ];
    for &rc in &ROUND_CONSTANTS[12 - rounds..] {
        for b in 0..64 {
            if rc >> b & 1 == 1 {
                s[2][b] = !s[2][b];
            }
        }
        for b in 0..64 {
            let mut x: [Bit; 5] = std::array::from_fn(|i| s[i][b]);
            x[0] = c.xor2(x[0], x[4]);
            x[4] = c.xor2(x[4], x[3]);
            x[2] = c.xor2(x[2], x[1]);
            let t: [Bit; 5] = std::array::from_fn(|i| x[i]);
            let t: Vec<Bit> = (0..5).map(|i| c.and(!t[i], t[(i + 1) % 5])).collect();
            for i in 0..5 {
                x[i] = c.xor2(x[i], t[(i + 1) % 5]);
            }
            x[1] = c.xor2(x[1], x[0]);
            x[0] = c.xor2(x[0], x[4]);
            x[3] = c.xor2(x[3], x[2]);
            x[2] = !x[2];
            for i in 0..5 {
                s[i][b] = x[i];
            }
        }
        for (w, &(ra, rb)) in s.iter_mut().zip(&ROTATIONS) {
            let (ra, rb) = (ra as usize, rb as usize);
            let old = w.clone();
            for b in 0..64 {
                w[b] = c.xor(&[old[b], old[(b + ra) % 64], old[(b + rb) % 64]]);
            }
        }
    }
    // The final key XOR touches only the capacity words, which never reach
    // the ciphertext; it is left out of the circuit.
    (0..128)
        .map(|i| {
            let rate = if i < 64 { s[1][i] } else { s[0][i - 64] };
            c.xor2(block[i], rate)
        })
        .collect()
}
