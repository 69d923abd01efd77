use cipherlock::bits::Bits;
use cipherlock::ciphers::{
    build_unrolled_circuit, circuit_inputs, parse_known_answers, reference_encrypt,
    sample_pattern_triple, specialize_plaintext, CipherSpec, BUILTIN_KNOWN_ANSWERS,
};
use cipherlock::netlist::{stats, WordSimulator};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn reference_matches_every_known_answer() {
    let kats = parse_known_answers(BUILTIN_KNOWN_ANSWERS).unwrap();
    assert_eq!(kats.len(), 16);
    for kat in &kats {
        let got = reference_encrypt(&kat.spec, &kat.key, &kat.plaintext).unwrap();
        assert_eq!(got, kat.ciphertext, "{}", kat.spec);
    }
}

#[test]
fn circuits_reproduce_known_answers() {
    for kat in parse_known_answers(BUILTIN_KNOWN_ANSWERS).unwrap() {
        let n = build_unrolled_circuit(&kat.spec);
        let out = WordSimulator::new(&n)
            .eval_bits(&circuit_inputs(&kat.key, &kat.plaintext), &[])
            .unwrap();
        assert_eq!(Bits::from_msb_first(&out), kat.ciphertext, "{}", kat.spec);
    }
}

#[test]
fn circuits_agree_with_reference_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for spec in CipherSpec::all() {
        let n = build_unrolled_circuit(&spec);
        assert_eq!(n.inputs().len(), spec.block_size() + spec.key_length());
        assert_eq!(n.outputs().len(), spec.block_size());
        assert!(n.keys().is_empty());
        let mut sim = WordSimulator::new(&n);
        for _ in 0..64 {
            let k = Bits::random(&mut rng, spec.key_length());
            let x = Bits::random(&mut rng, spec.block_size());
            let out = sim.eval_bits(&circuit_inputs(&k, &x), &[]).unwrap();
            let want = reference_encrypt(&spec, &k, &x).unwrap();
            assert_eq!(Bits::from_msb_first(&out), want, "{spec}");
        }
    }
}

#[test]
fn reduced_round_circuits_agree_with_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for spec in CipherSpec::all() {
        for r in [1, 2, 4] {
            let spec = spec.reduced(r).unwrap();
            let n = build_unrolled_circuit(&spec);
            let mut sim = WordSimulator::new(&n);
            for _ in 0..8 {
                let k = Bits::random(&mut rng, spec.key_length());
                let x = Bits::random(&mut rng, spec.block_size());
                let out = sim.eval_bits(&circuit_inputs(&k, &x), &[]).unwrap();
                assert_eq!(Bits::from_msb_first(&out), reference_encrypt(&spec, &k, &x).unwrap());
            }
        }
    }
}

#[test]
fn gate_counts_follow_cipher_complexity() {
    let count = |s: &str| stats(&build_unrolled_circuit(&s.parse().unwrap())).gates;
    let simon32 = count("simon-32-64-32");
    let simon64 = count("simon-64-96-42");
    let present80 = count("present-64-80-31");
    let present128 = count("present-64-128-31");
    let ascon = count("ascon-128-128-12");
    assert!(simon32 < simon64, "{simon32} {simon64}");
    assert!(simon64 < present80, "{simon64} {present80}");
    assert!(present80 <= present128, "{present80} {present128}");
    assert!(present128 < ascon, "{present128} {ascon}");
}

#[test]
fn ascon_is_a_keystream_on_the_plaintext() {
    let spec: CipherSpec = "ascon-128-128-12".parse().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..8 {
        let k = Bits::random(&mut rng, 128);
        let x = Bits::random(&mut rng, 128);
        let a = reference_encrypt(&spec, &k, &x).unwrap();
        let b = reference_encrypt(&spec, &k, &x.not()).unwrap();
        assert_eq!(a.xor(&b), Bits::ones(128));
    }
}

#[test]
fn specializing_the_plaintext_leaves_a_key_only_circuit() {
    let spec = CipherSpec::SIMON_32_64;
    let full = build_unrolled_circuit(&spec);
    let t = sample_pattern_triple(&spec, 11);
    let sp = specialize_plaintext(&full, &t.x).unwrap();
    assert_eq!(sp.inputs().len(), 64);
    assert!(sp.input_names().iter().all(|n| n.starts_with("k[")));
    assert!(stats(&sp).gates < stats(&full).gates);

    let other = specialize_plaintext(&full, &t.x.not()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut sim = WordSimulator::new(&sp);
    let mut sim2 = WordSimulator::new(&other);
    let y = sim.eval_bits(&t.k.msb_first(), &[]).unwrap();
    assert_eq!(Bits::from_msb_first(&y), t.y);
    let mut differs = false;
    for _ in 0..16 {
        let k = Bits::random(&mut rng, 64);
        let y = sim.eval_bits(&k.msb_first(), &[]).unwrap();
        assert_eq!(Bits::from_msb_first(&y), reference_encrypt(&spec, &k, &t.x).unwrap());
        differs |= y != sim2.eval_bits(&k.msb_first(), &[]).unwrap();
    }
    assert!(differs);
}

#[test]
fn specialization_checks_widths() {
    let full = build_unrolled_circuit(&CipherSpec::SIMON_32_64);
    assert!(specialize_plaintext(&full, &Bits::zeros(16)).is_err());
    assert!(specialize_plaintext(&full, &Bits::zeros(40)).is_err());
}

#[test]
fn pattern_triples_are_reproducible_and_consistent() {
    let spec = CipherSpec::SIMON_32_64;
    assert_eq!(sample_pattern_triple(&spec, 5), sample_pattern_triple(&spec, 5));
    for seed in 0..100 {
        let a = sample_pattern_triple(&spec, seed);
        let b = sample_pattern_triple(&spec, seed + 1000);
        assert_ne!(a.k, b.k);
        assert_eq!(reference_encrypt(&spec, &a.k, &a.x).unwrap(), a.y);
    }
}

#[test]
fn single_key_bit_flips_diffuse() {
    let spec = CipherSpec::SIMON_32_64;
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut changed = 0;
    for t in 0..32 {
        let k = Bits::random(&mut rng, 64);
        let x = Bits::random(&mut rng, 32);
        let mut k2 = k.clone();
        k2.flip(t * 2);
        let a = reference_encrypt(&spec, &k, &x).unwrap();
        let b = reference_encrypt(&spec, &k2, &x).unwrap();
        changed += a.xor(&b).count_ones();
    }
    let frac = changed as f64 / (32.0 * 32.0);
    assert!((0.25..=0.75).contains(&frac), "{frac}");
}

#[test]
fn widths_are_checked() {
    let spec = CipherSpec::PRESENT_80;
    assert!(reference_encrypt(&spec, &Bits::zeros(64), &Bits::zeros(64)).is_err());
    assert!(reference_encrypt(&spec, &Bits::zeros(80), &Bits::zeros(32)).is_err());
}
