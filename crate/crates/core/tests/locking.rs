mod common;

use cipherlock::benches::{b_class, c17, majority, majority_xor_locked};
use cipherlock::bits::Bits;
use cipherlock::ciphers::{reference_encrypt, CipherSpec};
use cipherlock::locking::{
    lock_antisat, lock_cipher_xor, lock_compound, lock_lut, lock_ttlock, lock_xor, obfuscate_with_luts,
    LockError, LockRecord, LutConfig, LutPlacement, LutSide, LutTarget, Scheme,
};
use cipherlock::netlist::{emit_bench, parse_bench, simulate, Assignment, GateKind, Netlist, WordSimulator};
use cipherlock::sat::check_equivalence;
use common::{corrupted, eval_with_flip, pattern_bits, truth_table};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn key_of(rec: &LockRecord) -> Vec<bool> {
    rec.key.lsb_first().to_vec()
}

fn assert_unlocks(original: &Netlist, locked: &Netlist, rec: &LockRecord) {
    assert_eq!(rec.nok(), locked.keys().len());
    let eq = check_equivalence(original, locked, Some(&key_of(rec))).unwrap();
    assert!(eq.is_equivalent(), "{:?} does not unlock", rec.scheme);
}

#[test]
fn fixture_majority_unlocks_only_under_01() {
    let orig = majority();
    let locked = majority_xor_locked();
    for k in 0..4 {
        let key = pattern_bits(k, 2);
        let bad = corrupted(&orig, &locked, &key);
        assert_eq!(bad.is_empty(), k == 0b01, "key {k:02b}");
    }
}

#[test]
fn xor_lock_on_majority_has_a_single_correct_key() {
    let orig = majority();
    for seed in 0..8 {
        let (locked, rec) = lock_xor(&orig, 2, seed).unwrap();
        assert_eq!(locked.keys().len(), 2);
        for k in 0..4 {
            let key = pattern_bits(k, 2);
            let ok = corrupted(&orig, &locked, &key).is_empty();
            assert_eq!(ok, key == key_of(&rec), "seed {seed} key {k:02b}");
        }
    }
}

#[test]
fn xor_lock_with_no_keys_is_the_identity() {
    let orig = c17();
    let (locked, rec) = lock_xor(&orig, 0, 3).unwrap();
    assert_eq!(locked, orig);
    assert_eq!(rec.nok(), 0);
}

#[test]
fn wrong_key_at_an_output_key_gate_flips_every_pattern() {
    let orig = c17();
    let mut seen = false;
    for seed in 0..32 {
        let (locked, rec) = lock_xor(&orig, 3, seed).unwrap();
        for (pos, &o) in locked.outputs().iter().enumerate() {
            let g = locked.gate_of(o).unwrap();
            if !matches!(g.kind, GateKind::Xor | GateKind::Xnor) {
                continue;
            }
            let Some(kpos) = locked.keys().iter().position(|k| g.inputs.contains(k)) else { continue };
            seen = true;
            let mut key = key_of(&rec);
            key[kpos] = !key[kpos];
            let good = truth_table(&orig, &[]);
            let bad = truth_table(&locked, &key);
            for p in 0..good.len() {
                assert_ne!(good[p][pos], bad[p][pos]);
            }
        }
    }
    assert!(seen);
}

#[test]
fn xor_lock_unlocks_generated_benches() {
    for i in 0..2 {
        let orig = b_class(i);
        let (locked, rec) = lock_xor(&orig, 64, 9).unwrap();
        assert_eq!(rec.nok(), 64);
        assert_unlocks(&orig, &locked, &rec);
        let mut key = key_of(&rec);
        key[17] = !key[17];
        assert!(!check_equivalence(&orig, &locked, Some(&key)).unwrap().is_equivalent());
    }
}

#[test]
fn lut3_replacing_the_majority_or_stores_its_truth_table() {
    let orig = majority();
    let out = orig.find("out").unwrap();
    let t = LutTarget::gate(&orig, out).unwrap();
    let cfg = LutConfig::new(3, LutPlacement::BoundaryCover).unwrap();
    let lo = obfuscate_with_luts(&orig, &[t], &cfg).unwrap();
    assert_eq!(lo.key.to_bin(), "11111110");
    assert_eq!(lo.netlist.keys().len(), 8);
    assert!(corrupted(&orig, &lo.netlist, lo.key.lsb_first()).is_empty());
    assert_eq!(lo.luts[0].leaves, vec!["a1", "a2", "a3"]);
}

#[test]
fn lut1_secrets_for_buffer_and_inverter() {
    let n = parse_bench("INPUT(a)\nOUTPUT(y)\nOUTPUT(z)\ny = BUFF(a)\nz = NOT(a)\n").unwrap();
    let cfg = LutConfig::new(2, LutPlacement::BoundaryCover).unwrap();
    for (name, want) in [("y", "10"), ("z", "01")] {
        let t = LutTarget::gate(&n, n.find(name).unwrap()).unwrap();
        let lo = obfuscate_with_luts(&n, &[t], &cfg).unwrap();
        assert_eq!(lo.key.to_bin(), want);
        assert!(corrupted(&n, &lo.netlist, lo.key.lsb_first()).is_empty());
    }
}

#[test]
fn empty_lut_target_set_is_the_identity() {
    let n = c17();
    let lo = obfuscate_with_luts(&n, &[], &LutConfig::default()).unwrap();
    assert_eq!(lo.netlist, n);
    assert!(lo.key.is_empty());
}

#[test]
fn lut_targets_are_validated() {
    let n = majority();
    let cfg = LutConfig::new(2, LutPlacement::BoundaryCover).unwrap();
    let t = LutTarget::gate(&n, n.find("out").unwrap()).unwrap();
    assert!(matches!(
        obfuscate_with_luts(&n, &[t], &cfg),
        Err(LockError::ArityExceeded { arity: 3, m: 2, .. })
    ));
    let a = n.find("a").unwrap();
    let bad = LutTarget {
        root: n.find("out").unwrap(),
        leaves: vec![a],
    };
    let cfg = LutConfig::default();
    assert!(matches!(obfuscate_with_luts(&n, &[bad], &cfg), Err(LockError::BadTarget(_))));
    assert!(LutConfig::new(7, LutPlacement::BoundaryCover).is_err());
    assert!(LutConfig::new(1, LutPlacement::BoundaryCover).is_err());
}

#[test]
fn wrong_lut_row_corrupts_exactly_the_minterms_reaching_it() {
    let orig = c17();
    let cfg = LutConfig::new(2, LutPlacement::BoundaryCover).unwrap();
    let (locked, rec) = lock_lut(&orig, &cfg, 3, 5).unwrap();
    assert_eq!(rec.nok(), rec.lut_key_bits());
    assert!(corrupted(&orig, &locked, &key_of(&rec)).is_empty());
    let w = orig.inputs().len();
    for lut in &rec.luts {
        let root = orig.find(&lut.target).unwrap();
        let leaves: Vec<_> = lut.leaves.iter().map(|l| orig.find(l).unwrap()).collect();
        for r in 0..lut.key_bits() {
            let mut key = key_of(&rec);
            key[lut.key_offset + r] = !key[lut.key_offset + r];
            let got = corrupted(&orig, &locked, &key);
            let want: Vec<usize> = (0..1 << w)
                .filter(|&p| {
                    let (good, vals) = eval_with_flip(&orig, &pattern_bits(p, w), None);
                    let row: usize = leaves
                        .iter()
                        .enumerate()
                        .map(|(j, l)| usize::from(vals[l.index()]) << j)
                        .sum();
                    let (flipped, _) = eval_with_flip(&orig, &pattern_bits(p, w), Some(root));
                    row == r && good != flipped
                })
                .collect();
            assert_eq!(got, want, "{} row {r}", lut.target);
            assert!(!got.is_empty(), "every placed row is live");
        }
    }
}

#[test]
fn lut_lock_prefers_full_size_luts() {
    let orig = b_class(0);
    let cfg = LutConfig::new(2, LutPlacement::BoundaryCover).unwrap();
    let (locked, rec) = lock_lut(&orig, &cfg, 32, 1).unwrap();
    assert_eq!(rec.nok(), 32 * 4);
    assert!(rec.luts.iter().all(|l| l.leaves.len() == 2 && l.side == LutSide::Design));
    assert_unlocks(&orig, &locked, &rec);
}

#[test]
fn antisat_block_is_silent_under_equal_halves() {
    let orig = c17();
    let (locked, rec) = lock_antisat(&orig, 2, 4).unwrap();
    assert_eq!(rec.nok(), 4);
    let key = key_of(&rec);
    assert_eq!(key[..2], key[2..]);
    let cs1 = locked.find(rec.cs1.as_deref().unwrap()).unwrap();
    let w = locked.inputs().len();
    let mut sim = WordSimulator::new(&locked);
    for p in 0..1 << w {
        sim.eval_bits(&pattern_bits(p, w), &key).unwrap();
        assert_eq!(sim.value(cs1) & 1, 0);
    }
    assert!(corrupted(&orig, &locked, &key).is_empty());
}

#[test]
fn antisat_one_hot_wrong_key_corrupts_one_protected_pattern() {
    let orig = c17();
    let n = 4;
    let (locked, rec) = lock_antisat(&orig, n, 8).unwrap();
    assert_eq!(rec.nok(), 2 * n);
    let prot: Vec<usize> = rec
        .protected_inputs
        .iter()
        .map(|p| orig.inputs().iter().position(|&i| orig.name(i) == p).unwrap())
        .collect();
    let w = orig.inputs().len();
    for j in 0..n {
        let mut key = key_of(&rec);
        key[n + j] = !key[n + j];
        let bad = corrupted(&orig, &locked, &key);
        let classes: std::collections::BTreeSet<Vec<bool>> = bad
            .iter()
            .map(|&p| prot.iter().map(|&i| pattern_bits(p, w)[i]).collect())
            .collect();
        assert_eq!(classes.len(), 1, "one-hot bit {j}");
        assert_eq!(bad.len(), 1 << (w - n));
        let expect: Vec<bool> = (0..n).map(|i| !key[i]).collect();
        assert_eq!(classes.into_iter().next().unwrap(), expect);
    }
}

fn protected_value(orig: &Netlist, rec: &LockRecord, p: usize) -> Bits {
    let w = orig.inputs().len();
    let bits = pattern_bits(p, w);
    let vals: Vec<bool> = rec
        .protected_inputs
        .iter()
        .map(|name| bits[orig.inputs().iter().position(|&i| orig.name(i) == name).unwrap()])
        .collect();
    Bits::from_msb_first(&vals)
}

#[test]
fn ttlock_corrupts_exactly_the_pattern_and_the_wrong_key() {
    for (orig, width, pat) in [(majority(), 3, "101"), (c17(), 4, "0110")] {
        let pattern = Bits::from_bin(pat).unwrap();
        let (locked, rec) = lock_ttlock(&orig, width, &pattern, 0).unwrap();
        assert_eq!(rec.nok(), width);
        assert_eq!(rec.key, pattern);
        assert!(corrupted(&orig, &locked, &key_of(&rec)).is_empty());
        let w = orig.inputs().len();
        for wrong in 0..1usize << width {
            let k = Bits::from_u128(wrong as u128, width);
            if k == pattern {
                continue;
            }
            let bad = corrupted(&orig, &locked, k.lsb_first());
            let want: Vec<usize> = (0..1 << w)
                .filter(|&p| {
                    let v = protected_value(&orig, &rec, p);
                    v == k || v == pattern
                })
                .collect();
            assert_eq!(bad, want, "{pat} vs {}", k.to_bin());
        }
    }
}

#[test]
fn ttlock_picks_the_widest_cone() {
    let orig = c17();
    let (_, rec) = lock_ttlock(&orig, 2, &Bits::from_bin("11").unwrap(), 0).unwrap();
    assert_eq!(rec.locked_output.as_deref(), Some("22"));
    assert_eq!(rec.protected_inputs, vec!["1", "2"]);
    assert!(matches!(
        lock_ttlock(&orig, 5, &Bits::zeros(5), 0),
        Err(LockError::NoEligibleOutput { width: 5 })
    ));
    assert!(matches!(
        lock_ttlock(&orig, 3, &Bits::zeros(4), 0),
        Err(LockError::PatternWidth { .. })
    ));
}

#[test]
fn locking_a_locked_netlist_is_refused() {
    let n = majority_xor_locked();
    assert_eq!(lock_xor(&n, 1, 0).unwrap_err(), LockError::AlreadyLocked);
    assert!(matches!(lock_xor(&majority(), 9, 0), Err(LockError::TooFewGates { .. })));
}

#[test]
fn cipher_xor_lock_unlocks_under_the_cipher_key() {
    let spec = CipherSpec::SIMON_32_64;
    let orig = b_class(0);
    let (locked, rec) = lock_cipher_xor(&orig, &spec, 21).unwrap();
    assert_eq!(rec.scheme, Scheme::CipherXor);
    assert_eq!(rec.nok(), 64);
    assert_eq!(rec.boundary.len(), 32);
    assert_unlocks(&orig, &locked, &rec);

    let c = rec.cipher.as_ref().unwrap();
    assert_eq!(reference_encrypt(&spec, &c.triple.k, &c.triple.x).unwrap(), c.triple.y);

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut sim_o = WordSimulator::new(&orig);
    let mut sim_l = WordSimulator::new(&locked);
    let wrong = Bits::random(&mut rng, 64);
    let mut miss = false;
    for _ in 0..32 {
        let x = Bits::random(&mut rng, orig.inputs().len());
        let a = sim_o.eval_bits(x.lsb_first(), &[]).unwrap();
        let b = sim_l.eval_bits(x.lsb_first(), wrong.lsb_first()).unwrap();
        miss |= a != b;
    }
    // a random key leaves all 32 cipher outputs right with odds 2^-32
    assert!(miss);
}

#[test]
fn compound_lock_unlocks_and_counts_keys() {
    let spec = CipherSpec::SIMON_32_64;
    let orig = b_class(1);
    let (locked, rec) = lock_compound(&orig, &spec, &LutConfig::default(), 3).unwrap();
    assert_eq!(rec.nok(), 64 + rec.lut_key_bits());
    assert_eq!(rec.luts.len(), 32);
    assert_eq!(rec.luts.iter().filter(|l| l.side == LutSide::Restore).count(), 16);
    assert_eq!(rec.protected_pattern.as_ref().unwrap().0, rec.cipher.as_ref().unwrap().triple.y);
    assert_eq!(rec.key.slice(0, 64), rec.cipher.as_ref().unwrap().triple.k);
    assert_eq!(rec.boundary.len(), 32);
    assert_unlocks(&orig, &locked, &rec);

    let mut key = key_of(&rec);
    key[5] = !key[5];
    assert!(!check_equivalence(&orig, &locked, Some(&key)).unwrap().is_equivalent());
}

#[test]
fn forced_placement_reproduces_448_keys() {
    let spec = CipherSpec::SIMON_32_64;
    let orig = b_class(0);
    let cfg = LutConfig::new(4, LutPlacement::Forced { count: 24 }).unwrap();
    let (locked, rec) = lock_compound(&orig, &spec, &cfg, 7).unwrap();
    assert_eq!(rec.nok(), 448);
    assert_eq!(locked.keys().len(), 448);
    assert!(rec.luts.iter().all(|l| l.leaves.len() == 4));
    assert_unlocks(&orig, &locked, &rec);
    let too_many = LutConfig::new(4, LutPlacement::Forced { count: 49 }).unwrap();
    assert!(matches!(lock_compound(&orig, &spec, &too_many, 7), Err(LockError::Placement(_))));
}

#[test]
fn compound_needs_a_wide_enough_output() {
    let r = lock_compound(&majority(), &CipherSpec::SIMON_32_64, &LutConfig::default(), 0);
    assert!(matches!(r, Err(LockError::NoEligibleOutput { width: 32 })));
}

#[test]
fn locking_is_deterministic() {
    let spec = CipherSpec::SIMON_32_64;
    type Lock = Box<dyn Fn(u64) -> (Netlist, LockRecord)>;
    let jobs: Vec<Lock> = vec![
        Box::new(|s| lock_xor(&b_class(2), 16, s).unwrap()),
        Box::new(|s| lock_lut(&b_class(2), &LutConfig::default(), 8, s).unwrap()),
        Box::new(|s| lock_antisat(&b_class(2), 8, s).unwrap()),
        Box::new(move |s| lock_cipher_xor(&b_class(2), &spec, s).unwrap()),
        Box::new(move |s| lock_compound(&b_class(2), &spec, &LutConfig::default(), s).unwrap()),
    ];
    for job in &jobs {
        let (a, ra) = job(11);
        let (b, rb) = job(11);
        assert_eq!(emit_bench(&a), emit_bench(&b));
        assert_eq!(ra.to_json(), rb.to_json());
        let (c, rc) = job(12);
        assert_ne!((emit_bench(&a), ra.to_json()), (emit_bench(&c), rc.to_json()));
    }
}

#[test]
fn lock_records_round_trip_through_json() {
    let (_, rec) = lock_compound(&b_class(0), &CipherSpec::SIMON_32_64, &LutConfig::default(), 2).unwrap();
    let text = rec.to_json();
    assert_eq!(LockRecord::from_json(&text).unwrap(), rec);
    assert!(text.contains("\"scheme\": \"compound\""));
}

#[test]
fn simulate_reports_the_restored_output() {
    let orig = majority();
    let pattern = Bits::from_bin("110").unwrap();
    let (locked, rec) = lock_ttlock(&orig, 3, &pattern, 0).unwrap();
    let mut a = Assignment::new();
    for (&i, &v) in locked.inputs().iter().zip(&[false, true, true]) {
        a.set(i, v);
    }
    for (&k, &v) in locked.keys().iter().zip(rec.key.lsb_first()) {
        a.set(k, v);
    }
    let out = simulate(&locked, &a).unwrap();
    assert_eq!(out.get(locked.outputs()[0]), Some(true));
}
