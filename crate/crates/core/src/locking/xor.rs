use crate::bits::Bits;
use crate::netlist::{GateKind, Netlist};

use super::observe::{logic_gates, pick_observable};
use super::{ensure_unlocked, key_input_name, rng, LockError, LockRecord, Scheme};

/// Reroutes `k` random observable gate outputs through XOR (key bit 0) or
/// XNOR (key bit 1) gates with fresh key inputs. The key gate takes over the
/// original net name; the original gate moves to a fresh `kg_` net.
pub fn lock_xor(netlist: &Netlist, k: usize, seed: u64) -> Result<(Netlist, LockRecord), LockError> {
    ensure_unlocked(netlist)?;
    let mut rng = rng(seed);
    let sites = pick_observable(netlist, &logic_gates(netlist), k, &mut rng)?;
    let key = Bits::random(&mut rng, k);
    let mut b = netlist.to_builder();
    for (i, &g) in sites.iter().enumerate() {
        let kin = b.add_key(&key_input_name(i))?;
        let moved = b.split_driver(g, "kg_");
        let kind = if key.get(i) { GateKind::Xnor } else { GateKind::Xor };
        b.define_gate(g, kind, vec![moved, kin])?;
    }
    let locked = b.finish()?;
    Ok((locked, LockRecord::new(Scheme::Xor, seed, key)))
}
