use crate::bits::Bits;
use crate::netlist::{GateKind, NetId, Netlist};

use super::{
    balanced_tree, ensure_unlocked, key_input_name, names, rng, select_output, LockError, LockRecord, Scheme,
};

/// Anti-SAT block `g(X ⊕ K1) ∧ ¬g(X ⊕ K2)` with `g` an `n`-input AND over
/// `n` inputs of the output with the widest cone, XORed into that output.
/// `K1` is `keyinput0..n-1`, `K2` is `keyinput{n}..2n-1`; the secret sets
/// both to the same random value.
pub fn lock_antisat(netlist: &Netlist, n: usize, seed: u64) -> Result<(Netlist, LockRecord), LockError> {
    ensure_unlocked(netlist)?;
    if n == 0 || n > netlist.inputs().len() {
        return Err(LockError::TooFewInputs {
            needed: n.max(1),
            available: netlist.inputs().len(),
        });
    }
    let (po, pis) = select_output(netlist, n)?;
    let mut rng = rng(seed);
    let secret = Bits::random(&mut rng, n);
    let mut b = netlist.to_builder();
    let keys: Vec<NetId> = (0..2 * n)
        .map(|i| b.add_key(&key_input_name(i)))
        .collect::<Result<_, _>>()?;
    let mut unit = Vec::new();
    let mut block = |b: &mut crate::netlist::NetlistBuilder, ks: &[NetId], root: &str| {
        let xs: Vec<NetId> = pis
            .iter()
            .zip(ks)
            .map(|(&x, &k)| {
                let name = b.fresh_name("as_");
                b.add_gate(&name, GateKind::Xor, vec![x, k]).expect("fresh name")
            })
            .collect();
        let (g, tree) = balanced_tree(b, GateKind::And, &xs, "as_", root);
        unit.extend(xs);
        unit.extend(tree);
        g
    };
    let g1 = block(&mut b, &keys[..n], "as_g1");
    let g2 = block(&mut b, &keys[n..], "as_g2");
    let ng2 = b.gate_named("as_ng2", GateKind::Not, vec![g2]);
    let cs1 = b.gate_named("cs1", GateKind::And, vec![g1, ng2]);
    unit.extend([ng2, cs1]);
    let moved = b.split_driver(po, "as_");
    b.define_gate(po, GateKind::Xor, vec![moved, cs1])?;

    let mut rec = LockRecord::new(Scheme::AntiSat, seed, Bits::concat(&secret, &secret));
    rec.protected_inputs = names(&b, &pis);
    rec.locked_output = Some(b.name(po).to_string());
    rec.cs1 = Some(b.name(cs1).to_string());
    rec.restore_unit = names(&b, &unit);
    Ok((b.finish()?, rec))
}
