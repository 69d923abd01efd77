use crate::bits::Bits;
use crate::netlist::{GateKind, NetId, Netlist, NetlistBuilder};

use super::{balanced_tree, ensure_unlocked, key_input_name, names, select_output, LockError, LockRecord, Scheme};

/// Nets created by [`insert_ttlock`].
pub(crate) struct TtlockNets {
    pub cs1: NetId,
    pub cs2: NetId,
    pub restore: Vec<NetId>,
    pub perturb: Vec<NetId>,
    /// Restore comparator bit `i` for protected input `i`.
    pub xnors: Vec<NetId>,
    /// First level of the restore AND tree; entry `a` combines bits `2a` and `2a + 1`.
    pub first_level: Vec<NetId>,
}

/// Inserts perturb and restore units on `po`. Protected input `i` is
/// compared against pattern bit `w - 1 - i` and against `refs[w - 1 - i]`,
/// so the restore references equal the pattern exactly when they carry it.
pub(crate) fn insert_ttlock(
    b: &mut NetlistBuilder,
    po: NetId,
    pis: &[NetId],
    pattern: &Bits,
    refs: &[NetId],
) -> TtlockNets {
    let w = pis.len();
    let mut perturb = Vec::new();
    let literals: Vec<NetId> = pis
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            if pattern.get(w - 1 - i) {
                p
            } else {
                let name = b.fresh_name("ttp_");
                let n = b.add_gate(&name, GateKind::Not, vec![p]).expect("fresh name");
                perturb.push(n);
                n
            }
        })
        .collect();
    let (cs2, tree) = balanced_tree(b, GateKind::And, &literals, "ttp_", "cs2");
    perturb.extend(tree);

    let xnors: Vec<NetId> = pis
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let name = b.fresh_name("ttr_");
            b.add_gate(&name, GateKind::Xnor, vec![p, refs[w - 1 - i]])
                .expect("fresh name")
        })
        .collect();
    let (cs1, tree) = balanced_tree(b, GateKind::And, &xnors, "ttr_", "cs1");
    let first_level = tree[..(w / 2).min(tree.len())].to_vec();
    let mut restore = xnors.clone();
    restore.extend(tree);

    let moved = b.split_driver(po, "ttl_");
    let name = b.fresh_name("ttl_");
    let stripped = b.add_gate(&name, GateKind::Xor, vec![moved, cs2]).expect("fresh name");
    b.define_gate(po, GateKind::Xor, vec![stripped, cs1])
        .expect("split net is undriven");
    TtlockNets {
        cs1,
        cs2,
        restore,
        perturb,
        xnors,
        first_level,
    }
}

/// TTLock on the output with the widest input cone: `width` protected
/// inputs, `width` key inputs, and the secret key equal to `pattern`.
pub fn lock_ttlock(
    netlist: &Netlist,
    width: usize,
    pattern: &Bits,
    seed: u64,
) -> Result<(Netlist, LockRecord), LockError> {
    ensure_unlocked(netlist)?;
    if pattern.len() != width {
        return Err(LockError::PatternWidth {
            expected: width,
            got: pattern.len(),
        });
    }
    if width == 0 || width > netlist.inputs().len() {
        return Err(LockError::TooFewInputs {
            needed: width.max(1),
            available: netlist.inputs().len(),
        });
    }
    let (po, pis) = select_output(netlist, width)?;
    let mut b = netlist.to_builder();
    let refs: Vec<NetId> = (0..width)
        .map(|i| b.add_key(&key_input_name(i)))
        .collect::<Result<_, _>>()?;
    let nets = insert_ttlock(&mut b, po, &pis, pattern, &refs);
    let mut rec = LockRecord::new(Scheme::Ttlock, seed, pattern.clone());
    rec.protected_pattern = Some(super::HexBits(pattern.clone()));
    rec.protected_inputs = names(&b, &pis);
    rec.locked_output = Some(b.name(po).to_string());
    rec.cs1 = Some(b.name(nets.cs1).to_string());
    rec.cs2 = Some(b.name(nets.cs2).to_string());
    rec.restore_unit = names(&b, &nets.restore);
    rec.perturb_unit = names(&b, &nets.perturb);
    Ok((b.finish()?, rec))
}
