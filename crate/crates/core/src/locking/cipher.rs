use rand::Rng;

use crate::bits::Bits;
use crate::ciphers::{
    build_unrolled_circuit, ciphertext_name, key_name, sample_pattern_triple, specialize_plaintext,
    AsconVariantParams, CipherFamily, CipherSpec, PatternTriple,
};
use crate::netlist::{simplify, support_sets, GateKind, NetId, Netlist, NetlistBuilder};

use super::lut::{obfuscate_with_luts, LutTarget};
use super::observe::{logic_gates, pick_observable};
use super::ttlock::insert_ttlock;
use super::{
    ensure_unlocked, key_input_name, names, rng, select_output, CipherRecord, HexBits, LockError, LockRecord,
    LutConfig, LutPlacement, LutSide, Scheme,
};

fn cipher_record(spec: &CipherSpec, triple: PatternTriple) -> CipherRecord {
    CipherRecord {
        spec: *spec,
        triple,
        ascon: (spec.family() == CipherFamily::Ascon).then(AsconVariantParams::default),
    }
}

/// Prefix for imported cipher nets that no net of `netlist` starts with.
fn import_prefix(netlist: &Netlist) -> String {
    let taken = |p: &str| netlist.net_ids().any(|n| netlist.name(n).starts_with(p));
    let mut prefix = "lwc_".to_string();
    let mut i = 0;
    while taken(&prefix) {
        i += 1;
        prefix = format!("lwc{i}_");
    }
    prefix
}

/// Copies a key-only cipher netlist into `b` with cipher key bit `i` bound
/// to `keys[i]`. Returns the nets carrying ciphertext bits, LSB first.
fn import_cipher(
    b: &mut NetlistBuilder,
    cipher: &Netlist,
    keys: &[NetId],
    prefix: &str,
) -> Result<Vec<NetId>, LockError> {
    let by_source: Vec<Option<NetId>> = {
        let mut v = vec![None; cipher.num_nets()];
        for (i, &k) in keys.iter().enumerate() {
            if let Some(n) = cipher.find(&key_name(i)) {
                v[n.index()] = Some(k);
            }
        }
        v
    };
    let map = b.import(
        cipher,
        |s| by_source[s.index()].expect("key-only cipher"),
        |name| format!("{prefix}{name}"),
    )?;
    Ok((0..cipher.outputs().len())
        .map(|j| {
            let o = cipher.find(&ciphertext_name(j)).expect("cipher output");
            map[o.index()].expect("imported")
        })
        .collect())
}

fn add_keys(b: &mut NetlistBuilder, count: usize) -> Result<Vec<NetId>, LockError> {
    (0..count)
        .map(|i| b.add_key(&key_input_name(i)).map_err(LockError::from))
        .collect()
}

/// For each named key gate, its input whose support is key-only and nonempty,
/// looking through inverters and buffers the simplifier may have placed.
fn key_gate_boundary(netlist: &Netlist, key_gates: &[String]) -> Vec<String> {
    let sup = support_sets(netlist);
    let n_in = netlist.inputs().len();
    let key_only = |n: NetId| {
        let s = &sup[n.index()];
        !s.is_empty() && s.iter().all(|i| i >= n_in)
    };
    let mut out = Vec::new();
    for name in key_gates {
        let Some(mut n) = netlist.find(name) else { continue };
        while let Some(g) = netlist.gate_of(n) {
            if let Some(&k) = g.inputs.iter().find(|&&i| key_only(i)) {
                out.push(netlist.name(k).to_string());
                break;
            }
            match g.kind {
                GateKind::Not | GateKind::Buf => n = g.inputs[0],
                _ => break,
            }
        }
    }
    out
}

/// Cipher-based locking with a single plaintext: the cipher specialized to
/// a random plaintext `X` drives XOR/XNOR key gates at `bs` random
/// observable gate outputs, so the design is correct exactly when the
/// cipher key inputs produce the ciphertext `Y`.
pub fn lock_cipher_xor(
    netlist: &Netlist,
    spec: &CipherSpec,
    seed: u64,
) -> Result<(Netlist, LockRecord), LockError> {
    ensure_unlocked(netlist)?;
    let (bs, kl) = (spec.block_size(), spec.key_length());
    let mut rng = rng(seed);
    let triple = sample_pattern_triple(spec, rng.gen());
    let cipher = specialize_plaintext(&build_unrolled_circuit(spec), &triple.x)?;
    let sites = pick_observable(netlist, &logic_gates(netlist), bs, &mut rng)?;

    let prefix = import_prefix(netlist);
    let mut b = netlist.to_builder();
    let keys = add_keys(&mut b, kl)?;
    let ys = import_cipher(&mut b, &cipher, &keys, &prefix)?;
    for (j, &g) in sites.iter().enumerate() {
        let moved = b.split_driver(g, "ckg_");
        let kind = if triple.y.get(j) { GateKind::Xnor } else { GateKind::Xor };
        b.define_gate(g, kind, vec![moved, ys[j]])?;
    }
    let site_names = names(&b, &sites);
    let locked = simplify(&b.finish()?);

    let mut rec = LockRecord::new(Scheme::CipherXor, seed, triple.k.clone());
    rec.protected_pattern = Some(HexBits(triple.y.clone()));
    rec.boundary = key_gate_boundary(&locked, &site_names);
    rec.cipher = Some(cipher_record(spec, triple));
    rec.retain_existing(&locked);
    Ok((locked, rec))
}

/// A cut of exactly `size` leaves below `root`, grown greedily from the
/// gate's own inputs.
fn cut_of_size(netlist: &Netlist, root: NetId, size: usize) -> Option<Vec<NetId>> {
    let mut leaves = netlist.gate_of(root)?.inputs.clone();
    leaves.dedup();
    for _ in 0..4 * size {
        if leaves.len() >= size {
            break;
        }
        let expand = |idx: usize| -> Option<Vec<NetId>> {
            let g = netlist.gate_of(leaves[idx])?;
            if g.kind.is_const() {
                return None;
            }
            let mut cand = leaves.clone();
            cand.remove(idx);
            for &i in &g.inputs {
                if !cand.contains(&i) {
                    cand.push(i);
                }
            }
            (cand.len() <= size).then_some(cand)
        };
        let options: Vec<Vec<NetId>> = (0..leaves.len()).filter_map(expand).collect();
        let Some(best) = options
            .iter()
            .find(|c| c.len() > leaves.len())
            .or_else(|| options.first())
        else {
            break;
        };
        leaves = best.clone();
    }
    (leaves.len() == size).then_some(leaves)
}

/// The compound scheme: a TTLock whose restore unit compares the protected
/// inputs against the outputs of a plaintext-specialized cipher, with the
/// protected pattern set to the ciphertext and LUTs placed across the
/// boundary between cipher and restore unit. The secret key is the cipher
/// key followed by the LUT truth tables.
pub fn lock_compound(
    netlist: &Netlist,
    spec: &CipherSpec,
    config: &LutConfig,
    seed: u64,
) -> Result<(Netlist, LockRecord), LockError> {
    ensure_unlocked(netlist)?;
    let (bs, kl) = (spec.block_size(), spec.key_length());
    let mut rng = rng(seed);
    let triple = sample_pattern_triple(spec, rng.gen());
    let original = simplify(netlist);
    let (po, pis) = select_output(&original, bs)?;
    let cipher = specialize_plaintext(&build_unrolled_circuit(spec), &triple.x)?;

    let prefix = import_prefix(&original);
    let mut b = original.to_builder();
    let keys = add_keys(&mut b, kl)?;
    let ys = import_cipher(&mut b, &cipher, &keys, &prefix)?;
    let tt = insert_ttlock(&mut b, po, &pis, &triple.y, &ys);
    let mut rec = LockRecord::new(Scheme::Compound, seed, triple.k.clone());
    rec.protected_pattern = Some(HexBits(triple.y.clone()));
    rec.protected_inputs = names(&b, &pis);
    rec.locked_output = Some(b.name(po).to_string());
    rec.cs1 = Some(b.name(tt.cs1).to_string());
    rec.cs2 = Some(b.name(tt.cs2).to_string());
    rec.restore_unit = names(&b, &tt.restore);
    rec.perturb_unit = names(&b, &tt.perturb);
    rec.boundary = names(&b, &ys);
    let staged = b.finish()?;

    let w = pis.len();
    let mut targets: Vec<(LutTarget, LutSide)> = Vec::new();
    let cipher_side = |j: usize| -> Result<LutTarget, LockError> {
        let t = LutTarget::gate(&staged, ys[j])
            .ok_or_else(|| LockError::BadTarget(staged.name(ys[j]).to_string()))?;
        if t.leaves.len() > config.m {
            return Err(LockError::ArityExceeded {
                net: staged.name(ys[j]).to_string(),
                arity: t.leaves.len(),
                m: config.m,
            });
        }
        Ok(t)
    };
    match config.placement {
        LutPlacement::BoundaryCover => {
            for j in 0..bs {
                if j % 2 == 0 {
                    targets.push((cipher_side(j)?, LutSide::Cipher));
                } else {
                    let i = w - 1 - j;
                    let t = LutTarget {
                        root: tt.xnors[i],
                        leaves: vec![pis[i], ys[j]],
                    };
                    targets.push((t, LutSide::Restore));
                }
            }
        }
        LutPlacement::Forced { count } => {
            if config.m < 4 {
                return Err(LockError::Placement(format!(
                    "forced placement needs LUTs of 4 inputs, maximum is {}",
                    config.m
                )));
            }
            if count > tt.first_level.len() + bs {
                return Err(LockError::Placement(format!(
                    "at most {} LUTs can be forced, {count} requested",
                    tt.first_level.len() + bs
                )));
            }
            let comparators = count.min(tt.first_level.len());
            for (a, &root) in tt.first_level.iter().take(comparators).enumerate() {
                let (i0, i1) = (2 * a, 2 * a + 1);
                let t = LutTarget {
                    root,
                    leaves: vec![pis[i0], pis[i1], ys[w - 1 - i0], ys[w - 1 - i1]],
                };
                targets.push((t, LutSide::Restore));
            }
            let mut needed = count - comparators;
            for &y in &ys {
                if needed == 0 {
                    break;
                }
                if let Some(leaves) = cut_of_size(&staged, y, config.m) {
                    targets.push((LutTarget { root: y, leaves }, LutSide::Cipher));
                    needed -= 1;
                }
            }
            if needed > 0 {
                return Err(LockError::Placement(format!(
                    "found no {}-input cut for {needed} cipher outputs",
                    config.m
                )));
            }
        }
    }
    let (targets, sides): (Vec<LutTarget>, Vec<LutSide>) = targets.into_iter().unzip();
    let lo = obfuscate_with_luts(&staged, &targets, config)?;
    let locked = simplify(&lo.netlist);

    rec.key = Bits::concat(&lo.key, &triple.k);
    rec.luts = lo.luts;
    for (l, side) in rec.luts.iter_mut().zip(sides) {
        l.side = side;
    }
    rec.lut_config = Some(*config);
    rec.cipher = Some(cipher_record(spec, triple));
    rec.retain_existing(&locked);
    Ok((locked, rec))
}
