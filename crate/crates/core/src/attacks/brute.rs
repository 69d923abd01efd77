use std::time::Instant;

use crate::bits::Bits;
use crate::netlist::{Netlist, WordSimulator};
use crate::sat::{check_equivalence_with, Equivalence, KeyBinding};

use super::oracle::{Oracle, OracleView};
use super::{random_patterns, AttackConfig, AttackError, AttackKind, AttackReport, Outcome, Verification};

pub const MAX_BRUTE_FORCE_KEY_BITS: usize = 24;

const PROBES: usize = 64;

fn key_bits(k: u32, n: usize) -> Vec<bool> {
    (0..n).map(|i| k >> i & 1 == 1).collect()
}

/// Every key that makes `locked` agree with the oracle. Keys surviving 64
/// random probes are then split by miters: whenever two survivors differ
/// on some input, the oracle's answer on it eliminates the wrong ones.
pub fn brute_force_key_search(
    locked: &Netlist,
    oracle: &dyn Oracle,
    config: &AttackConfig,
) -> Result<AttackReport, AttackError> {
    let n = locked.keys().len();
    if n == 0 {
        return Err(AttackError::NoKeys);
    }
    if n > MAX_BRUTE_FORCE_KEY_BITS {
        return Err(AttackError::KeySpaceTooLarge {
            bits: n,
            limit: MAX_BRUTE_FORCE_KEY_BITS,
        });
    }
    let start = Instant::now();
    let view = OracleView::new(oracle, locked)?;
    let q0 = view.queries();
    let w = locked.inputs().len();
    let probes = random_patterns(w, PROBES, config.seed);
    let answers = view.query_batch(&probes)?;
    let words: Vec<u64> = (0..w)
        .map(|i| probes.iter().enumerate().fold(0u64, |acc, (l, x)| acc | u64::from(x[i]) << l))
        .collect();
    let want: Vec<u64> = (0..locked.outputs().len())
        .map(|o| answers.iter().enumerate().fold(0u64, |acc, (l, y)| acc | u64::from(y[o]) << l))
        .collect();
    let mut sim = WordSimulator::new(locked);
    let mut survivors: Vec<u32> = Vec::new();
    for k in 0..1u32 << n {
        let kw: Vec<u64> = key_bits(k, n).iter().map(|&b| if b { !0 } else { 0 }).collect();
        sim.run(&words, &kw).expect("widths match");
        if sim.outputs() == want {
            survivors.push(k);
        }
    }
    let mut r = AttackReport::new(AttackKind::BruteForce, Outcome::NoSolution);
    'refine: while let Some(&first) = survivors.first() {
        for &s in &survivors[1..] {
            let eq = check_equivalence_with(
                locked,
                locked,
                &KeyBinding::Fixed(key_bits(first, n)),
                &KeyBinding::Fixed(key_bits(s, n)),
                &config.budget,
            )?;
            match eq {
                Equivalence::Equivalent => {}
                Equivalence::Inconclusive => {
                    r.note = Some("budget exhausted while separating candidate keys".into());
                    r.oracle_queries = view.queries() - q0;
                    r.wall_time = start.elapsed();
                    return Ok(r);
                }
                Equivalence::Counterexample(c) => {
                    let y = view.query(&c.inputs)?;
                    r.iterations += 1;
                    survivors.retain(|&k| sim.eval_bits(&c.inputs, &key_bits(k, n)).expect("widths match") == y);
                    continue 'refine;
                }
            }
        }
        break;
    }
    if survivors.is_empty() {
        r.note = Some("no key matches the oracle".into());
    } else {
        r.outcome = Outcome::KeyRecovered;
        r.correct_keys = survivors.iter().map(|&k| Bits::from_lsb_first(key_bits(k, n))).collect();
        r.key = r.correct_keys.first().cloned();
        r.verification = Some(Verification::Probes(PROBES));
    }
    r.oracle_queries = view.queries() - q0;
    r.wall_time = start.elapsed();
    Ok(r)
}
