use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::netlist::{propagate_constants, simplify, Assignment, Netlist, WordSimulator};

use super::AttackError;

/// A functional chip: answers input patterns with output patterns and
/// nothing else. Patterns follow [`Oracle::input_names`] and
/// [`Oracle::output_names`].
pub trait Oracle: Send + Sync {
    fn input_names(&self) -> &[String];
    fn output_names(&self) -> &[String];
    fn query(&self, inputs: &[bool]) -> Result<Vec<bool>, AttackError>;
    fn query_batch(&self, inputs: &[Vec<bool>]) -> Result<Vec<Vec<bool>>, AttackError> {
        inputs.iter().map(|x| self.query(x)).collect()
    }
    /// Patterns answered so far.
    fn queries(&self) -> u64;
}

/// Oracle backed by an unlocked netlist.
pub struct NetlistOracle {
    netlist: Netlist,
    inputs: Vec<String>,
    outputs: Vec<String>,
    count: AtomicU64,
}

impl NetlistOracle {
    pub fn new(netlist: Netlist) -> Result<NetlistOracle, AttackError> {
        if !netlist.keys().is_empty() {
            return Err(AttackError::Interface("oracle netlist has key inputs".into()));
        }
        Ok(NetlistOracle {
            inputs: netlist.input_names(),
            outputs: netlist.output_names(),
            netlist,
            count: AtomicU64::new(0),
        })
    }

    /// A locked netlist with its key inputs tied to `key` (key-input order).
    pub fn activated(locked: &Netlist, key: &[bool]) -> Result<NetlistOracle, AttackError> {
        if key.len() != locked.keys().len() {
            return Err(AttackError::KeyWidth {
                expected: locked.keys().len(),
                got: key.len(),
            });
        }
        let a = Assignment::from_pairs(locked.keys().iter().copied().zip(key.iter().copied()));
        NetlistOracle::new(simplify(&propagate_constants(locked, &a)))
    }
}

impl Oracle for NetlistOracle {
    fn input_names(&self) -> &[String] {
        &self.inputs
    }

    fn output_names(&self) -> &[String] {
        &self.outputs
    }

    fn query(&self, inputs: &[bool]) -> Result<Vec<bool>, AttackError> {
        Ok(self.query_batch(&[inputs.to_vec()])?.remove(0))
    }

    fn query_batch(&self, inputs: &[Vec<bool>]) -> Result<Vec<Vec<bool>>, AttackError> {
        let w = self.inputs.len();
        if let Some(bad) = inputs.iter().find(|x| x.len() != w) {
            return Err(AttackError::Interface(format!("query has {} bits, oracle has {w} inputs", bad.len())));
        }
        let mut sim = WordSimulator::new(&self.netlist);
        let mut out = Vec::with_capacity(inputs.len());
        for chunk in inputs.chunks(64) {
            let words: Vec<u64> = (0..w)
                .map(|i| chunk.iter().enumerate().fold(0u64, |acc, (l, x)| acc | u64::from(x[i]) << l))
                .collect();
            sim.run(&words, &[]).expect("widths checked");
            let outs = sim.outputs();
            for l in 0..chunk.len() {
                out.push(outs.iter().map(|v| v >> l & 1 == 1).collect());
            }
        }
        self.count.fetch_add(inputs.len() as u64, Ordering::Relaxed);
        Ok(out)
    }

    fn queries(&self) -> u64 {
        self.count.load(Ordering::Relaxed)
    }
}

/// Oracle answering from a recorded list of queries. Patterns outside the
/// transcript are an error.
pub struct TranscriptOracle {
    inputs: Vec<String>,
    outputs: Vec<String>,
    answers: HashMap<Vec<bool>, Vec<bool>>,
    count: AtomicU64,
}

/// On-disk transcript. Pattern strings hold one `0`/`1` per port in port order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub entries: Vec<(String, String)>,
}

fn to_text(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn from_text(text: &str, width: usize) -> Result<Vec<bool>, AttackError> {
    let bits: Vec<bool> = text
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(AttackError::Transcript(format!("bad pattern character `{c}`"))),
        })
        .collect::<Result<_, _>>()?;
    if bits.len() != width {
        return Err(AttackError::Transcript(format!(
            "pattern `{text}` has {} bits, expected {width}",
            bits.len()
        )));
    }
    Ok(bits)
}

impl Transcript {
    /// Queries `oracle` on every pattern and records the answers.
    pub fn record(oracle: &dyn Oracle, patterns: &[Vec<bool>]) -> Result<Transcript, AttackError> {
        let answers = oracle.query_batch(patterns)?;
        Ok(Transcript {
            inputs: oracle.input_names().to_vec(),
            outputs: oracle.output_names().to_vec(),
            entries: patterns.iter().zip(&answers).map(|(x, y)| (to_text(x), to_text(y))).collect(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("transcripts serialize")
    }

    pub fn from_json(text: &str) -> Result<Transcript, AttackError> {
        serde_json::from_str(text).map_err(|e| AttackError::Transcript(e.to_string()))
    }
}

impl TranscriptOracle {
    pub fn new(t: &Transcript) -> Result<TranscriptOracle, AttackError> {
        let mut answers = HashMap::with_capacity(t.entries.len());
        for (x, y) in &t.entries {
            answers.insert(from_text(x, t.inputs.len())?, from_text(y, t.outputs.len())?);
        }
        Ok(TranscriptOracle {
            inputs: t.inputs.clone(),
            outputs: t.outputs.clone(),
            answers,
            count: AtomicU64::new(0),
        })
    }
}

impl Oracle for TranscriptOracle {
    fn input_names(&self) -> &[String] {
        &self.inputs
    }

    fn output_names(&self) -> &[String] {
        &self.outputs
    }

    fn query(&self, inputs: &[bool]) -> Result<Vec<bool>, AttackError> {
        let y = self
            .answers
            .get(inputs)
            .cloned()
            .ok_or_else(|| AttackError::OutsideTranscript(to_text(inputs)))?;
        self.count.fetch_add(1, Ordering::Relaxed);
        Ok(y)
    }

    fn queries(&self) -> u64 {
        self.count.load(Ordering::Relaxed)
    }
}

/// An oracle seen through a netlist's port order.
pub(crate) struct OracleView<'a> {
    oracle: &'a dyn Oracle,
    /// Oracle input `j` is netlist input `in_map[j]`.
    in_map: Vec<usize>,
    /// Netlist output `i` is oracle output `out_map[i]`.
    out_map: Vec<usize>,
}

impl<'a> OracleView<'a> {
    pub(crate) fn new(oracle: &'a dyn Oracle, netlist: &Netlist) -> Result<OracleView<'a>, AttackError> {
        let pis = netlist.input_names();
        let pos = netlist.output_names();
        let mismatch = |what: &str| {
            AttackError::Interface(format!("{what} of the oracle and the netlist differ"))
        };
        if pis.len() != oracle.input_names().len() || pos.len() != oracle.output_names().len() {
            return Err(mismatch("port counts"));
        }
        let in_map = oracle
            .input_names()
            .iter()
            .map(|n| pis.iter().position(|p| p == n))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| mismatch("input names"))?;
        let out_map = pos
            .iter()
            .map(|n| oracle.output_names().iter().position(|p| p == n))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| mismatch("output names"))?;
        Ok(OracleView { oracle, in_map, out_map })
    }

    fn to_oracle(&self, x: &[bool]) -> Vec<bool> {
        self.in_map.iter().map(|&i| x[i]).collect()
    }

    fn from_oracle(&self, y: &[bool]) -> Vec<bool> {
        self.out_map.iter().map(|&j| y[j]).collect()
    }

    pub(crate) fn query(&self, x: &[bool]) -> Result<Vec<bool>, AttackError> {
        Ok(self.from_oracle(&self.oracle.query(&self.to_oracle(x))?))
    }

    pub(crate) fn query_batch(&self, xs: &[Vec<bool>]) -> Result<Vec<Vec<bool>>, AttackError> {
        let mapped: Vec<Vec<bool>> = xs.iter().map(|x| self.to_oracle(x)).collect();
        Ok(self
            .oracle
            .query_batch(&mapped)?
            .iter()
            .map(|y| self.from_oracle(y))
            .collect())
    }

    pub(crate) fn queries(&self) -> u64 {
        self.oracle.queries()
    }
}
