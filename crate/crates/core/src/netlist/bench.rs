//! ISCAS-style `.bench` reading and writing.
//!
//! Accepted: `INPUT(x)`, `OUTPUT(y)`, `y = KIND(a, b, ...)` and `#` comments.
//! Kinds are the eleven of [`GateKind`]; `BUFF` and `BUF` are synonyms, as
//! are `MUX` and `MUX2` (inputs `in0, in1, select`). Constants are written
//! `CONST0()` / `CONST1()`. `DFF` is rejected.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::{GateKind, Netlist, NetlistBuilder, NetlistError, DEFAULT_KEY_PREFIX};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown gate kind `{0}`")]
    UnknownGate(String),
    #[error("sequential element `{0}` is not supported")]
    Sequential(String),
    #[error("behavioral construct `{0}` is not supported")]
    Behavioral(String),
    #[error("hierarchy is not supported: {0}")]
    Hierarchy(String),
    #[error("width mismatch: {0}")]
    Width(String),
    #[error(transparent)]
    Netlist(#[from] NetlistError),
}

impl ParseError {
    pub(crate) fn new(line: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { line, kind }
    }
}

#[derive(Clone, Debug)]
pub struct BenchOptions {
    pub key_prefix: String,
    /// Write `MUX2` as its NOT/AND/AND/OR expansion.
    pub expand_mux: bool,
}

impl Default for BenchOptions {
    fn default() -> BenchOptions {
        BenchOptions {
            key_prefix: DEFAULT_KEY_PREFIX.to_string(),
            expand_mux: false,
        }
    }
}

pub(crate) fn gate_kind_from_name(name: &str) -> Option<GateKind> {
    Some(match name.to_ascii_uppercase().as_str() {
        "AND" => GateKind::And,
        "NAND" => GateKind::Nand,
        "OR" => GateKind::Or,
        "NOR" => GateKind::Nor,
        "XOR" => GateKind::Xor,
        "XNOR" => GateKind::Xnor,
        "NOT" | "INV" => GateKind::Not,
        "BUF" | "BUFF" => GateKind::Buf,
        "MUX" | "MUX2" => GateKind::Mux2,
        "CONST0" => GateKind::Const0,
        "CONST1" => GateKind::Const1,
        _ => return None,
    })
}

fn bench_name(kind: GateKind) -> &'static str {
    match kind {
        GateKind::Buf => "BUFF",
        GateKind::Mux2 => "MUX",
        k => k.name(),
    }
}

/// Resolves net-level errors raised by `finish` to the line that caused them.
pub(crate) struct LineIndex {
    first_use: HashMap<String, usize>,
    definition: HashMap<String, usize>,
}

impl LineIndex {
    pub(crate) fn new() -> LineIndex {
        LineIndex {
            first_use: HashMap::new(),
            definition: HashMap::new(),
        }
    }

    pub(crate) fn used(&mut self, name: &str, line: usize) {
        self.first_use.entry(name.to_string()).or_insert(line);
    }

    pub(crate) fn defined(&mut self, name: &str, line: usize) {
        self.definition.entry(name.to_string()).or_insert(line);
    }

    pub(crate) fn locate(&self, err: NetlistError) -> ParseError {
        let line = match &err {
            NetlistError::Undefined(n) => self.first_use.get(n).copied(),
            NetlistError::Cycle(n) | NetlistError::Duplicate(n) => self.definition.get(n).copied(),
            NetlistError::DuplicateOutput(n) => self.first_use.get(n).copied(),
            _ => None,
        };
        ParseError::new(line.unwrap_or(0), ParseErrorKind::Netlist(err))
    }
}

pub fn parse_bench(text: &str) -> Result<Netlist, ParseError> {
    parse_bench_with(text, &BenchOptions::default())
}

pub fn parse_bench_with(text: &str, opts: &BenchOptions) -> Result<Netlist, ParseError> {
    let mut b = NetlistBuilder::new();
    let mut lines = LineIndex::new();
    let mut outputs: Vec<(String, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |kind| ParseError::new(line_no, kind);
        if let Some((lhs, rhs)) = line.split_once('=') {
            let target = lhs.trim();
            if !is_identifier(target) {
                return Err(err(ParseErrorKind::Syntax(format!("bad net name `{target}`"))));
            }
            let (kind_name, args) = split_call(rhs.trim())
                .ok_or_else(|| err(ParseErrorKind::Syntax(format!("expected KIND(...) in `{line}`"))))?;
            if kind_name.eq_ignore_ascii_case("DFF") {
                return Err(err(ParseErrorKind::Sequential(kind_name.to_string())));
            }
            let kind = gate_kind_from_name(kind_name)
                .ok_or_else(|| err(ParseErrorKind::UnknownGate(kind_name.to_string())))?;
            let mut ins = Vec::with_capacity(args.len());
            for a in &args {
                if !is_identifier(a) {
                    return Err(err(ParseErrorKind::Syntax(format!("bad net name `{a}`"))));
                }
                lines.used(a, line_no);
                ins.push(b.net(a));
            }
            lines.defined(target, line_no);
            b.add_gate(target, kind, ins)
                .map_err(|e| err(ParseErrorKind::Netlist(e)))?;
        } else {
            let (decl, args) = split_call(line)
                .ok_or_else(|| err(ParseErrorKind::Syntax(format!("unrecognized line `{line}`"))))?;
            let [name] = args.as_slice() else {
                return Err(err(ParseErrorKind::Syntax(format!("{decl} takes one net"))));
            };
            if !is_identifier(name) {
                return Err(err(ParseErrorKind::Syntax(format!("bad net name `{name}`"))));
            }
            match decl.to_ascii_uppercase().as_str() {
                "INPUT" => {
                    lines.defined(name, line_no);
                    let r = if name.starts_with(opts.key_prefix.as_str()) && !opts.key_prefix.is_empty() {
                        b.add_key(name)
                    } else {
                        b.add_input(name)
                    };
                    r.map_err(|e| err(ParseErrorKind::Netlist(e)))?;
                }
                "OUTPUT" => {
                    lines.used(name, line_no);
                    outputs.push((name.to_string(), line_no));
                }
                other => {
                    return Err(err(ParseErrorKind::Syntax(format!("unknown declaration `{other}`"))))
                }
            }
        }
    }
    for (name, line_no) in outputs {
        let id = b.net(&name);
        b.add_output(id)
            .map_err(|e| ParseError::new(line_no, ParseErrorKind::Netlist(e)))?;
    }
    b.finish().map_err(|e| lines.locate(e))
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| !c.is_whitespace() && !matches!(c, '(' | ')' | ',' | '=' | '#'))
}

/// Splits `NAME(a, b, c)` into its name and trimmed arguments.
fn split_call(s: &str) -> Option<(&str, Vec<&str>)> {
    let open = s.find('(')?;
    let close = s.rfind(')')?;
    if close < open || !s[close + 1..].trim().is_empty() {
        return None;
    }
    let name = s[..open].trim();
    let inner = s[open + 1..close].trim();
    let args = if inner.is_empty() {
        Vec::new()
    } else {
        inner.split(',').map(str::trim).collect()
    };
    Some((name, args))
}

pub fn emit_bench(netlist: &Netlist) -> String {
    emit_bench_with(netlist, &BenchOptions::default())
}

/// Inputs, then key inputs, then outputs, then gates in topological order.
pub fn emit_bench_with(netlist: &Netlist, opts: &BenchOptions) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "# {} inputs, {} key inputs, {} outputs, {} gates",
        netlist.inputs().len(),
        netlist.keys().len(),
        netlist.outputs().len(),
        netlist.gates().len()
    )
    .unwrap();
    for &i in netlist.inputs().iter().chain(netlist.keys()) {
        writeln!(out, "INPUT({})", netlist.name(i)).unwrap();
    }
    for &o in netlist.outputs() {
        writeln!(out, "OUTPUT({})", netlist.name(o)).unwrap();
    }
    out.push('\n');
    let mut taken: std::collections::HashSet<String> = std::collections::HashSet::new();
    let mut fresh = 0usize;
    let mut fresh_name = |stem: &str, taken: &mut std::collections::HashSet<String>| loop {
        let c = format!("{stem}_mx{fresh}");
        fresh += 1;
        if netlist.find(&c).is_none() && taken.insert(c.clone()) {
            return c;
        }
    };
    for g in netlist.gates() {
        let name = netlist.name(g.output);
        let ins: Vec<&str> = g.inputs.iter().map(|&i| netlist.name(i)).collect();
        if g.kind == GateKind::Mux2 && opts.expand_mux {
            let ns = fresh_name(name, &mut taken);
            let t0 = fresh_name(name, &mut taken);
            let t1 = fresh_name(name, &mut taken);
            writeln!(out, "{ns} = NOT({})", ins[2]).unwrap();
            writeln!(out, "{t0} = AND({}, {ns})", ins[0]).unwrap();
            writeln!(out, "{t1} = AND({}, {})", ins[1], ins[2]).unwrap();
            writeln!(out, "{name} = OR({t0}, {t1})").unwrap();
        } else {
            writeln!(out, "{name} = {}({})", bench_name(g.kind), ins.join(", ")).unwrap();
        }
    }
    out
}
