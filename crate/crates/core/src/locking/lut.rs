use std::collections::HashSet;

use rand::seq::SliceRandom;

use crate::bits::Bits;
use crate::netlist::{GateKind, NetId, Netlist};

use super::observe::Observer;
use super::{ensure_unlocked, key_input_name, rng, LockError, LockRecord, LutConfig, LutRecord, LutSide, Scheme};

/// A net to be redriven by a LUT over `leaves`. Every path from `root`
/// back to a source must pass through a leaf.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LutTarget {
    pub root: NetId,
    pub leaves: Vec<NetId>,
}

impl LutTarget {
    /// The gate driving `root`, with its own inputs as leaves.
    pub fn gate(netlist: &Netlist, root: NetId) -> Option<LutTarget> {
        let g = netlist.gate_of(root)?;
        Some(LutTarget {
            root,
            leaves: g.inputs.clone(),
        })
    }
}

/// Result of [`obfuscate_with_luts`].
#[derive(Clone, Debug)]
pub struct LutObfuscation {
    pub netlist: Netlist,
    pub luts: Vec<LutRecord>,
    /// Truth tables of all LUTs, concatenated in target order.
    pub key: Bits,
}

/// Truth table of `root` over `leaves`: entry `r` is the value when leaf
/// `j` carries bit `j` of `r`.
pub(crate) fn truth_table(netlist: &Netlist, target: &LutTarget) -> Result<Vec<bool>, LockError> {
    let bad = || LockError::BadTarget(netlist.name(target.root).to_string());
    let l = target.leaves.len();
    let distinct: HashSet<NetId> = target.leaves.iter().copied().collect();
    if l == 0 || l > 6 || distinct.len() != l || distinct.contains(&target.root) {
        return Err(bad());
    }
    match netlist.gate_of(target.root) {
        Some(g) if !g.kind.is_const() => {}
        _ => return Err(bad()),
    }
    let mut in_cone = vec![false; netlist.num_nets()];
    let mut stack = vec![target.root];
    while let Some(n) = stack.pop() {
        if in_cone[n.index()] || distinct.contains(&n) {
            continue;
        }
        let g = netlist.gate_of(n).ok_or_else(bad)?;
        in_cone[n.index()] = true;
        stack.extend(g.inputs.iter().copied());
    }
    let mut words = vec![0u64; netlist.num_nets()];
    for (j, &leaf) in target.leaves.iter().enumerate() {
        words[leaf.index()] = (0..64u64).filter(|r| r >> j & 1 == 1).fold(0, |w, r| w | 1 << r);
    }
    let mut buf = Vec::new();
    for g in netlist.gates() {
        if in_cone[g.output.index()] {
            buf.clear();
            buf.extend(g.inputs.iter().map(|i| words[i.index()]));
            words[g.output.index()] = g.kind.eval_words(&buf);
        }
    }
    let w = words[target.root.index()];
    Ok((0..1usize << l).map(|r| w >> r & 1 == 1).collect())
}

/// Replaces each target by a complete MUX2 tree whose data inputs are fresh
/// key inputs, one per truth-table row, appended after the existing keys.
/// Level `j` of the tree selects on leaf `j`. Deterministic.
pub fn obfuscate_with_luts(
    netlist: &Netlist,
    targets: &[LutTarget],
    config: &LutConfig,
) -> Result<LutObfuscation, LockError> {
    let mut tables = Vec::with_capacity(targets.len());
    let mut roots = HashSet::new();
    for t in targets {
        if t.leaves.len() > config.m {
            return Err(LockError::ArityExceeded {
                net: netlist.name(t.root).to_string(),
                arity: t.leaves.len(),
                m: config.m,
            });
        }
        if !roots.insert(t.root) {
            return Err(LockError::BadTarget(netlist.name(t.root).to_string()));
        }
        tables.push(truth_table(netlist, t)?);
    }
    let mut b = netlist.to_builder();
    let mut next_key = netlist.keys().len();
    let mut luts = Vec::with_capacity(targets.len());
    let mut key = Vec::new();
    for (t, table) in targets.iter().zip(tables) {
        let offset = next_key;
        let mut level: Vec<NetId> = Vec::with_capacity(table.len());
        for _ in 0..table.len() {
            level.push(b.add_key(&key_input_name(next_key))?);
            next_key += 1;
        }
        b.undrive(t.root);
        for (j, &sel) in t.leaves.iter().enumerate() {
            let last = j + 1 == t.leaves.len();
            let mut next = Vec::with_capacity(level.len() / 2);
            for pair in level.chunks(2) {
                let ins = vec![pair[0], pair[1], sel];
                if last {
                    b.define_gate(t.root, GateKind::Mux2, ins)?;
                    next.push(t.root);
                } else {
                    let name = b.fresh_name("lutm_");
                    next.push(b.add_gate(&name, GateKind::Mux2, ins)?);
                }
            }
            level = next;
        }
        luts.push(LutRecord {
            target: netlist.name(t.root).to_string(),
            leaves: t.leaves.iter().map(|&n| netlist.name(n).to_string()).collect(),
            key_offset: offset,
            side: LutSide::Design,
        });
        key.extend(table);
    }
    Ok(LutObfuscation {
        netlist: b.finish()?,
        luts,
        key: Bits::from_lsb_first(key),
    })
}

/// Replaces `count` random gates of arity at most `config.m` by LUTs of
/// their own arity, preferring gates of arity exactly `m`. A gate is used
/// only if every truth-table row is reachable and observable, so flipping
/// any single LUT key bit corrupts the design.
pub fn lock_lut(
    netlist: &Netlist,
    config: &LutConfig,
    count: usize,
    seed: u64,
) -> Result<(Netlist, LockRecord), LockError> {
    ensure_unlocked(netlist)?;
    let m = config.m;
    let mut eligible: Vec<NetId> = netlist
        .gates()
        .iter()
        .filter(|g| !g.kind.is_const() && (1..=m).contains(&g.inputs.len()))
        .map(|g| g.output)
        .collect();
    if count > eligible.len() {
        return Err(LockError::TooFewGates {
            needed: count,
            available: eligible.len(),
        });
    }
    let mut rng = rng(seed);
    eligible.shuffle(&mut rng);
    eligible.sort_by_key(|&n| netlist.gate_of(n).map_or(0, |g| m - g.inputs.len()));
    let mut obs = Observer::new(netlist, &[]);
    let mut targets = Vec::with_capacity(count);
    for root in eligible {
        if targets.len() == count {
            break;
        }
        let t = LutTarget::gate(netlist, root).expect("gate");
        if rows_live(&mut obs, &t)? {
            targets.push(t);
        }
    }
    if targets.len() < count {
        return Err(LockError::TooFewGates {
            needed: count,
            available: targets.len(),
        });
    }
    let lo = obfuscate_with_luts(netlist, &targets, config)?;
    let mut rec = LockRecord::new(Scheme::Lut, seed, lo.key);
    rec.luts = lo.luts;
    rec.lut_config = Some(*config);
    Ok((lo.netlist, rec))
}

fn rows_live(obs: &mut Observer<'_>, t: &LutTarget) -> Result<bool, LockError> {
    for r in 0..1usize << t.leaves.len() {
        let cond: Vec<(NetId, bool)> = t
            .leaves
            .iter()
            .enumerate()
            .map(|(j, &l)| (l, r >> j & 1 == 1))
            .collect();
        if !obs.observable(t.root, &cond)? {
            return Ok(false);
        }
    }
    Ok(true)
}
