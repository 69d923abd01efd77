//! SIMON: word-level reference and the unrolled circuit.

use super::circuit::{Bit, Circuit};

/// Round-constant sequences z0..z4, first bit first.
pub(crate) const Z: [&str; 5] = [
    "11111010001001010110000111001101111101000100101011000011100110",
    "10001110111110010011000010110101000111011111001001100001011010",
    "10101111011100000011010010011000101000010001111110010110110011",
    "11011011101011000110010111100000010010001010011100110100001111",
    "11010001111001101011011000100000010111000011001010010011101111",
];

#[derive(Clone, Copy, Debug)]
pub(crate) struct Params {
    /// Word size n = bs / 2.
    pub n: usize,
    /// Key words m = kl / n.
    pub m: usize,
    pub z: usize,
}

pub(crate) fn params(bs: usize, kl: usize) -> Option<Params> {
    let z = match (bs, kl) {
        (32, 64) | (48, 72) => 0,
        (48, 96) => 1,
        (64, 96) | (96, 96) | (128, 128) => 2,
        (64, 128) | (96, 144) | (128, 192) => 3,
        (128, 256) => 4,
        _ => return None,
    };
    Some(Params {
        n: bs / 2,
        m: kl / (bs / 2),
        z,
    })
}

fn z_bit(seq: usize, j: usize) -> u64 {
    u64::from(Z[seq].as_bytes()[j % 62] == b'1')
}

fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1 << n) - 1
    }
}

fn rotl(x: u64, s: usize, n: usize) -> u64 {
    ((x << s) | (x >> (n - s))) & mask(n)
}

fn rotr(x: u64, s: usize, n: usize) -> u64 {
    ((x >> s) | (x << (n - s))) & mask(n)
}

/// Round keys for `rounds` rounds from key words `k[0..m]` (k[0] lowest).
fn key_schedule(p: Params, key: &[u64], rounds: usize) -> Vec<u64> {
    let n = p.n;
    let mut k = key.to_vec();
    for i in p.m..rounds {
        let mut tmp = rotr(k[i - 1], 3, n);
        if p.m == 4 {
            tmp ^= k[i - 3];
        }
        tmp ^= rotr(tmp, 1, n);
        k.push((!k[i - p.m] & mask(n)) ^ tmp ^ z_bit(p.z, i - p.m) ^ 3);
    }
    k.truncate(rounds);
    k
}

/// Encrypts the block `(x, y)` (x is the high word).
pub(crate) fn encrypt(p: Params, rounds: usize, key: &[u64], x: u64, y: u64) -> (u64, u64) {
    let n = p.n;
    let (mut x, mut y) = (x, y);
    for rk in key_schedule(p, key, rounds) {
        let f = (rotl(x, 1, n) & rotl(x, 8, n)) ^ rotl(x, 2, n);
        (x, y) = (y ^ f ^ rk, x);
    }
    (x, y)
}

// Word helpers over LSB-first bit vectors; rotations are pure wiring.
fn wrotl(w: &[Bit], s: usize) -> Vec<Bit> {
    let n = w.len();
    (0..n).map(|i| w[(i + n - s) % n]).collect()
}

fn wrotr(w: &[Bit], s: usize) -> Vec<Bit> {
    let n = w.len();
    (0..n).map(|i| w[(i + s) % n]).collect()
}

/// Builds the cipher on LSB-first block and key vectors; returns the
/// LSB-first ciphertext.
pub(crate) fn circuit(c: &mut Circuit, p: Params, rounds: usize, block: &[Bit], key: &[Bit]) -> Vec<Bit> {
    let n = p.n;
    let mut k: Vec<Vec<Bit>> = key.chunks(n).map(<[Bit]>::to_vec).collect();
    for i in p.m..rounds {
        let r3 = wrotr(&k[i - 1], 3);
        let tmp: Vec<Bit> = if p.m == 4 {
            (0..n).map(|b| c.xor2(r3[b], k[i - 3][b])).collect()
        } else {
            r3
        };
        let r1 = wrotr(&tmp, 1);
        let tmp: Vec<Bit> = (0..n).map(|b| c.xor2(tmp[b], r1[b])).collect();
        let z = z_bit(p.z, i - p.m);
        let word: Vec<Bit> = (0..n)
            .map(|b| {
                // ~k[i-m] ^ z ^ 3 as constant bits: bit 0 = z, bit 1 = 0, others 1.
                let cst = match b {
                    0 => z == 1,
                    1 => false,
                    _ => true,
                };
                c.xor(&[k[i - p.m][b], tmp[b], Bit::Const(cst)])
            })
            .collect();
        k.push(word);
    }
    let mut y: Vec<Bit> = block[..n].to_vec();
    let mut x: Vec<Bit> = block[n..].to_vec();
    for rk in k.iter().take(rounds) {
        let s1 = wrotl(&x, 1);
        let s8 = wrotl(&x, 8);
        let s2 = wrotl(&x, 2);
        let nx: Vec<Bit> = (0..n)
            .map(|b| {
                let a = c.and(s1[b], s8[b]);
                c.xor(&[y[b], a, s2[b], rk[b]])
            })
            .collect();
        y = std::mem::replace(&mut x, nx);
    }
    let mut out = y;
    out.extend(x);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_sequences_repeat_with_period_31() {
        for s in &Z[..2] {
            assert_eq!(&s[..31], &s[31..]);
        }
        for s in &Z {
            assert_eq!(s.len(), 62);
        }
    }

    #[test]
    fn rotations_invert() {
        for n in [16, 24, 32, 48, 64] {
            let x = 0x0123_4567_89ab_cdef & mask(n);
            assert_eq!(rotr(rotl(x, 5, n), 5, n), x);
        }
    }
}
