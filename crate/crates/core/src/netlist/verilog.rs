//! Flat structural Verilog reader.
//!
//! One module with `input`/`output`/`wire` declarations (scalar or
//! `[msb:lsb]` vectors), gate primitives (`and nand or nor xor xnor not buf`)
//! and `assign` of a net or a 1-bit constant. Vector bit `i` of `x` becomes
//! the scalar net `x[i]`; vectors expand in declared order, so `[1:0]` gives
//! `x[1]` before `x[0]`.

use std::collections::HashMap;

use super::bench::{LineIndex, ParseError, ParseErrorKind};
use super::{GateKind, Netlist, NetlistBuilder, DEFAULT_KEY_PREFIX};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(String),
    Sym(char),
}

const BEHAVIORAL: &[&str] = &[
    "always", "initial", "reg", "function", "task", "if", "else", "case", "begin", "end",
    "for", "while", "posedge", "negedge", "integer", "generate",
];

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut toks = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut line = 1;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
        } else if c == '/' && chars.get(i + 1) == Some(&'*') {
            i += 2;
            while i < chars.len() && !(chars[i] == '*' && chars.get(i + 1) == Some(&'/')) {
                if chars[i] == '\n' {
                    line += 1;
                }
                i += 1;
            }
            i += 2;
        } else if c.is_ascii_alphabetic() || c == '_' || c == '\\' {
            let escaped = c == '\\';
            let start = if escaped { i + 1 } else { i };
            i = start;
            while i < chars.len()
                && if escaped {
                    !chars[i].is_whitespace()
                } else {
                    chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '$'
                }
            {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), line));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '\'') {
                i += 1;
            }
            toks.push((Tok::Number(chars[start..i].iter().collect()), line));
        } else if "()[];,:=#.{}".contains(c) {
            toks.push((Tok::Sym(c), line));
            i += 1;
        } else if "@<>&|^~?!+-*".contains(c) {
            return Err(ParseError::new(
                line,
                ParseErrorKind::Behavioral(format!("operator `{c}`")),
            ));
        } else {
            return Err(ParseError::new(
                line,
                ParseErrorKind::Syntax(format!("unexpected character `{c}`")),
            ));
        }
    }
    Ok(toks)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Dir {
    Input,
    Output,
    Wire,
}

#[derive(Clone, Debug)]
struct Decl {
    dir: Dir,
    range: Option<(usize, usize)>,
}

impl Decl {
    fn bits(&self) -> Vec<usize> {
        match self.range {
            None => Vec::new(),
            Some((msb, lsb)) if msb >= lsb => (lsb..=msb).rev().collect(),
            Some((msb, lsb)) => (msb..=lsb).collect(),
        }
    }

    fn contains(&self, i: usize) -> bool {
        match self.range {
            None => false,
            Some((a, b)) => (a.min(b)..=a.max(b)).contains(&i),
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    decls: HashMap<String, Decl>,
    decl_order: Vec<String>,
    ports: Vec<String>,
    gates: Vec<(String, GateKind, Vec<String>, usize)>,
}

fn primitive(name: &str) -> Option<GateKind> {
    Some(match name {
        "and" => GateKind::And,
        "nand" => GateKind::Nand,
        "or" => GateKind::Or,
        "nor" => GateKind::Nor,
        "xor" => GateKind::Xor,
        "xnor" => GateKind::Xnor,
        "not" => GateKind::Not,
        "buf" => GateKind::Buf,
        _ => return None,
    })
}

impl Parser {
    fn line(&self) -> usize {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map_or(0, |t| t.1)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError::new(self.line(), kind)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn next(&mut self) -> Result<Tok, ParseError> {
        let t = self
            .toks
            .get(self.pos)
            .map(|t| t.0.clone())
            .ok_or_else(|| self.err(ParseErrorKind::Syntax("unexpected end of input".into())))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        match self.next()? {
            Tok::Sym(s) if s == c => Ok(()),
            t => {
                self.pos -= 1;
                Err(self.err(ParseErrorKind::Syntax(format!("expected `{c}`, found {t:?}"))))
            }
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.next()? {
            Tok::Ident(s) => Ok(s),
            t => {
                self.pos -= 1;
                Err(self.err(ParseErrorKind::Syntax(format!("expected identifier, found {t:?}"))))
            }
        }
    }

    fn number(&mut self) -> Result<usize, ParseError> {
        match self.next()? {
            Tok::Number(n) => n
                .parse()
                .map_err(|_| self.err(ParseErrorKind::Syntax(format!("bad index `{n}`")))),
            t => {
                self.pos -= 1;
                Err(self.err(ParseErrorKind::Syntax(format!("expected number, found {t:?}"))))
            }
        }
    }

    fn range(&mut self) -> Result<Option<(usize, usize)>, ParseError> {
        if !self.eat_sym('[') {
            return Ok(None);
        }
        let msb = self.number()?;
        self.expect_sym(':')?;
        let lsb = self.number()?;
        self.expect_sym(']')?;
        Ok(Some((msb, lsb)))
    }

    fn declare(&mut self, name: String, decl: Decl) -> Result<(), ParseError> {
        match self.decls.get(&name) {
            // `output y; wire y;` style redeclarations are harmless when widths agree
            Some(prev) if prev.range == decl.range => {
                if prev.dir == Dir::Wire {
                    self.decls.insert(name, decl);
                }
                Ok(())
            }
            Some(_) => Err(self.err(ParseErrorKind::Width(format!(
                "`{name}` redeclared with a different width"
            )))),
            None => {
                self.decl_order.push(name.clone());
                self.decls.insert(name, decl);
                Ok(())
            }
        }
    }

    /// Parses `dir [range] a, b, c` up to (not including) `;` or `)`.
    fn declaration(&mut self, dir: Dir, in_port_list: bool) -> Result<(), ParseError> {
        if self.peek() == Some(&Tok::Ident("wire".into())) {
            self.pos += 1;
        }
        let range = self.range()?;
        loop {
            let name = self.ident()?;
            if in_port_list {
                self.ports.push(name.clone());
            }
            self.declare(name, Decl { dir, range })?;
            if in_port_list {
                // in ANSI headers a comma may be followed by a new direction keyword
                match self.toks.get(self.pos + 1).map(|t| &t.0) {
                    Some(Tok::Ident(k)) if self.peek() == Some(&Tok::Sym(','))
                        && matches!(k.as_str(), "input" | "output") =>
                    {
                        return Ok(())
                    }
                    _ => {}
                }
            }
            if !self.eat_sym(',') {
                return Ok(());
            }
        }
    }

    fn net_ref(&mut self) -> Result<String, ParseError> {
        let name = self.ident()?;
        let index = if self.eat_sym('[') {
            let i = self.number()?;
            if self.eat_sym(':') {
                return Err(self.err(ParseErrorKind::Width(format!(
                    "part-select of `{name}` used as a single-bit connection"
                ))));
            }
            self.expect_sym(']')?;
            Some(i)
        } else {
            None
        };
        match (self.decls.get(&name), index) {
            (Some(d), Some(i)) if d.range.is_some() => {
                if d.contains(i) {
                    Ok(format!("{name}[{i}]"))
                } else {
                    Err(self.err(ParseErrorKind::Width(format!("`{name}[{i}]` is out of range"))))
                }
            }
            (Some(d), None) if d.range.is_some() => Err(self.err(ParseErrorKind::Width(format!(
                "vector `{name}` used as a single-bit connection"
            )))),
            (_, Some(i)) => Err(self.err(ParseErrorKind::Width(format!(
                "`{name}` is scalar but indexed with [{i}]"
            )))),
            (_, None) => Ok(name),
        }
    }

    fn gate_instances(&mut self, kind: GateKind) -> Result<(), ParseError> {
        loop {
            let line = self.line();
            if let Some(Tok::Ident(_)) = self.peek() {
                self.pos += 1; // instance name
            }
            self.expect_sym('(')?;
            let mut terms = vec![self.net_ref()?];
            while self.eat_sym(',') {
                terms.push(self.net_ref()?);
            }
            self.expect_sym(')')?;
            let out = terms.remove(0);
            if !kind.arity_ok(terms.len()) {
                return Err(ParseError::new(
                    line,
                    ParseErrorKind::Syntax(format!(
                        "{} primitive cannot take {} inputs",
                        kind,
                        terms.len()
                    )),
                ));
            }
            self.gates.push((out, kind, terms, line));
            if !self.eat_sym(',') {
                break;
            }
        }
        self.expect_sym(';')
    }

    fn assign(&mut self) -> Result<(), ParseError> {
        let line = self.line();
        let lhs = self.net_ref()?;
        self.expect_sym('=')?;
        match self.peek().cloned() {
            Some(Tok::Number(n)) => {
                self.pos += 1;
                let kind = match n.as_str() {
                    "0" | "1'b0" | "1'h0" | "1'd0" => GateKind::Const0,
                    "1" | "1'b1" | "1'h1" | "1'd1" => GateKind::Const1,
                    _ => {
                        return Err(self.err(ParseErrorKind::Width(format!(
                            "constant `{n}` is not a single bit"
                        ))))
                    }
                };
                self.gates.push((lhs, kind, Vec::new(), line));
            }
            _ => {
                let rhs = self.net_ref()?;
                self.gates.push((lhs, GateKind::Buf, vec![rhs], line));
            }
        }
        if self.peek() != Some(&Tok::Sym(';')) {
            return Err(self.err(ParseErrorKind::Behavioral("expression in assign".into())));
        }
        self.expect_sym(';')
    }

    fn module(&mut self) -> Result<(), ParseError> {
        match self.next()? {
            Tok::Ident(k) if k == "module" => {}
            _ => {
                self.pos -= 1;
                return Err(self.err(ParseErrorKind::Syntax("expected `module`".into())));
            }
        }
        self.ident()?;
        if self.eat_sym('(') && !self.eat_sym(')') {
            loop {
                match self.peek().cloned() {
                    Some(Tok::Ident(k)) if k == "input" || k == "output" => {
                        self.pos += 1;
                        let dir = if k == "input" { Dir::Input } else { Dir::Output };
                        self.declaration(dir, true)?;
                    }
                    _ => {
                        let name = self.ident()?;
                        self.ports.push(name);
                    }
                }
                if self.eat_sym(')') {
                    break;
                }
                self.expect_sym(',')?;
            }
        }
        self.expect_sym(';')?;
        loop {
            let tok = self.next()?;
            let Tok::Ident(word) = tok else {
                self.pos -= 1;
                return Err(self.err(ParseErrorKind::Syntax(format!("unexpected {tok:?}"))));
            };
            match word.as_str() {
                "endmodule" => break,
                "input" | "output" | "wire" => {
                    let dir = match word.as_str() {
                        "input" => Dir::Input,
                        "output" => Dir::Output,
                        _ => Dir::Wire,
                    };
                    self.declaration(dir, false)?;
                    self.expect_sym(';')?;
                }
                "assign" => self.assign()?,
                "module" => {
                    self.pos -= 1;
                    return Err(self.err(ParseErrorKind::Hierarchy("nested module".into())));
                }
                w if BEHAVIORAL.contains(&w) => {
                    self.pos -= 1;
                    return Err(self.err(ParseErrorKind::Behavioral(w.to_string())));
                }
                w => match primitive(w) {
                    Some(kind) => self.gate_instances(kind)?,
                    None => {
                        self.pos -= 1;
                        return Err(self.err(ParseErrorKind::Hierarchy(format!(
                            "instance of module `{w}`"
                        ))));
                    }
                },
            }
        }
        if self.pos < self.toks.len() {
            return Err(self.err(ParseErrorKind::Hierarchy(
                "more than one module in the source".into(),
            )));
        }
        Ok(())
    }
}

pub fn parse_structural_verilog(text: &str) -> Result<Netlist, ParseError> {
    parse_structural_verilog_with(text, DEFAULT_KEY_PREFIX)
}

pub fn parse_structural_verilog_with(text: &str, key_prefix: &str) -> Result<Netlist, ParseError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        decls: HashMap::new(),
        decl_order: Vec::new(),
        ports: Vec::new(),
        gates: Vec::new(),
    };
    p.module()?;

    let mut order: Vec<String> = Vec::new();
    for name in p.ports.iter().chain(p.decl_order.iter()) {
        if !order.contains(name) {
            order.push(name.clone());
        }
    }
    let expand = |name: &str, d: &Decl| -> Vec<String> {
        if d.range.is_none() {
            vec![name.to_string()]
        } else {
            d.bits().into_iter().map(|i| format!("{name}[{i}]")).collect()
        }
    };
    let mut b = NetlistBuilder::new();
    let mut lines = LineIndex::new();
    for name in &order {
        let Some(d) = p.decls.get(name) else {
            return Err(ParseError::new(
                0,
                ParseErrorKind::Syntax(format!("port `{name}` has no direction")),
            ));
        };
        if d.dir == Dir::Input {
            for bit in expand(name, d) {
                let r = if !key_prefix.is_empty() && name.starts_with(key_prefix) {
                    b.add_key(&bit)
                } else {
                    b.add_input(&bit)
                };
                r.map_err(|e| ParseError::new(0, ParseErrorKind::Netlist(e)))?;
            }
        }
    }
    for (out, kind, ins, line) in &p.gates {
        let ids = ins
            .iter()
            .map(|i| {
                lines.used(i, *line);
                b.net(i)
            })
            .collect();
        lines.defined(out, *line);
        b.add_gate(out, *kind, ids)
            .map_err(|e| ParseError::new(*line, ParseErrorKind::Netlist(e)))?;
    }
    for name in &order {
        let d = &p.decls[name];
        if d.dir == Dir::Output {
            for bit in expand(name, d) {
                let id = b.net(&bit);
                b.add_output(id)
                    .map_err(|e| ParseError::new(0, ParseErrorKind::Netlist(e)))?;
            }
        }
    }
    b.finish().map_err(|e| lines.locate(e))
}
