//! Carrier file format.
//!
//! ```text
//! # comment
//! finite 3
//! 0 1 2
//! 1 2 0
//! 2 0 1
//! identity 0
//! names e a b        # optional
//! generators 1       # optional
//! ```
//!
//! or a single `lattice <d>` line.

use std::fmt::Write as _;

use fneq::carrier::CarrierError;
use fneq::{Carrier, FiniteMonoid, LatticeGroup};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error(transparent)]
    Carrier(#[from] CarrierError),
}

/// A parsed carrier plus the presentation details that live only in files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarrierFile {
    pub carrier: Carrier,
    pub names: Option<Vec<String>>,
    pub generators: Option<Vec<usize>>,
}

impl CarrierFile {
    /// Index of an element given by name or by number.
    pub fn element(&self, token: &str) -> Option<usize> {
        let n = self.carrier.as_finite()?.size();
        if let Some(i) = self.names.as_ref().and_then(|ns| ns.iter().position(|s| s == token)) {
            return Some(i);
        }
        token.parse().ok().filter(|&i| i < n)
    }

    pub fn name(&self, index: usize) -> String {
        match &self.names {
            Some(ns) => ns[index].clone(),
            None => index.to_string(),
        }
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

fn tokenize(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut start = None;
            for (pos, ch) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(pos),
                    (true, Some(s)) => {
                        tokens.push(Token { text: &body[s..pos], column: body[..s].chars().count() + 1 });
                        start = None;
                    }
                    _ => {}
                }
            }
            (!tokens.is_empty()).then_some(Line { number: i + 1, tokens })
        })
        .collect()
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, column, message: message.into() }
}

fn number(line: &Line<'_>, tok: &Token<'_>, what: &str) -> Result<usize, ParseError> {
    tok.text.parse().map_err(|_| syntax(line.number, tok.column, format!("expected {what}, found `{}`", tok.text)))
}

fn keyword_arg(line: &Line<'_>, keyword: &str) -> Result<usize, ParseError> {
    match line.tokens.as_slice() {
        [_, arg] => number(line, arg, &format!("a number after `{keyword}`")),
        [k] => Err(syntax(line.number, k.column + k.text.len(), format!("`{keyword}` needs a number"))),
        [_, _, extra, ..] => Err(syntax(line.number, extra.column, "unexpected token")),
        [] => unreachable!("blank lines are dropped"),
    }
}

pub fn parse_carrier(text: &str) -> Result<CarrierFile, ParseError> {
    let lines = tokenize(text);
    let Some(head) = lines.first() else { return Err(syntax(1, 1, "empty carrier file")) };
    match head.tokens[0].text {
        "lattice" => {
            let d = keyword_arg(head, "lattice")?;
            if let Some(extra) = lines.get(1) {
                return Err(syntax(extra.number, extra.tokens[0].column, "unexpected line after `lattice`"));
            }
            Ok(CarrierFile { carrier: Carrier::from(LatticeGroup::new(d)?), names: None, generators: None })
        }
        "finite" => parse_finite(&lines),
        other => Err(syntax(head.number, head.tokens[0].column, format!("expected `finite` or `lattice`, found `{other}`"))),
    }
}

fn parse_finite(lines: &[Line<'_>]) -> Result<CarrierFile, ParseError> {
    let head = &lines[0];
    let n = keyword_arg(head, "finite")?;
    if n == 0 {
        return Err(syntax(head.number, head.tokens[1].column, "size must be positive"));
    }
    let mut table = Vec::with_capacity(n);
    for r in 0..n {
        let Some(line) = lines.get(1 + r) else {
            let last = lines.last().map_or(1, |l| l.number);
            return Err(syntax(last + 1, 1, format!("expected {n} table rows, found {r}")));
        };
        if line.tokens.len() != n {
            let column = line.tokens.get(n).map_or(line.tokens[0].column, |t| t.column);
            return Err(syntax(line.number, column, format!("row has {} entries, expected {n}", line.tokens.len())));
        }
        let row = line.tokens.iter().map(|t| number(line, t, "an element index")).collect::<Result<Vec<_>, _>>()?;
        table.push(row);
    }
    let (mut identity, mut names, mut generators) = (None, None, None);
    for line in &lines[1 + n..] {
        let first = &line.tokens[0];
        match first.text {
            "identity" if identity.is_none() => identity = Some(keyword_arg(line, "identity")?),
            "names" if names.is_none() => {
                let given: Vec<String> = line.tokens[1..].iter().map(|t| t.text.to_string()).collect();
                if given.len() != n {
                    return Err(syntax(line.number, first.column, format!("expected {n} names, found {}", given.len())));
                }
                for (i, t) in line.tokens[1..].iter().enumerate() {
                    if given[..i].contains(&given[i]) {
                        return Err(syntax(line.number, t.column, format!("duplicate name `{}`", t.text)));
                    }
                }
                names = Some(given);
            }
            "generators" if generators.is_none() => {
                let gens = line.tokens[1..]
                    .iter()
                    .map(|t| {
                        let g = number(line, t, "an element index")?;
                        if g >= n {
                            return Err(syntax(line.number, t.column, format!("generator {g} out of range")));
                        }
                        Ok(g)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                generators = Some(gens);
            }
            "identity" | "names" | "generators" => {
                return Err(syntax(line.number, first.column, format!("duplicate `{}` line", first.text)))
            }
            other => return Err(syntax(line.number, first.column, format!("unexpected `{other}`"))),
        }
    }
    let identity = identity.ok_or_else(|| {
        let last = lines.last().map_or(1, |l| l.number);
        syntax(last + 1, 1, "missing `identity` line")
    })?;
    let monoid = FiniteMonoid::new(table, identity)?;
    Ok(CarrierFile { carrier: Carrier::from(monoid), names, generators })
}

pub fn render(file: &CarrierFile) -> String {
    let mut out = String::new();
    match &file.carrier {
        Carrier::Lattice(l) => writeln!(out, "lattice {}", l.rank()).unwrap(),
        Carrier::Finite(m) => {
            writeln!(out, "finite {}", m.size()).unwrap();
            for row in m.rows() {
                let cells: Vec<String> = row.iter().map(usize::to_string).collect();
                writeln!(out, "{}", cells.join(" ")).unwrap();
            }
            writeln!(out, "identity {}", m.identity()).unwrap();
            if let Some(names) = &file.names {
                writeln!(out, "names {}", names.join(" ")).unwrap();
            }
            if let Some(gens) = &file.generators {
                let g: Vec<String> = gens.iter().map(usize::to_string).collect();
                writeln!(out, "generators {}", g.join(" ")).unwrap();
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_and_lattice() {
        let f = parse_carrier("finite 1\n0\nidentity 0").unwrap();
        assert_eq!(f.carrier, Carrier::from(FiniteMonoid::trivial()));
        let l = parse_carrier("# plane\nlattice 2\n").unwrap();
        assert_eq!(l.carrier, Carrier::from(LatticeGroup::new(2).unwrap()));
    }

    #[test]
    fn locations() {
        let e = parse_carrier("finite 2\n0 1\n1 x\nidentity 0").unwrap_err();
        assert_eq!(e, ParseError::Syntax { line: 3, column: 3, message: "expected an element index, found `x`".into() });
        let e = parse_carrier("finite 2\n0 1\n1 0").unwrap_err();
        assert!(matches!(e, ParseError::Syntax { line: 4, .. }));
        let e = parse_carrier("group 2").unwrap_err();
        assert!(matches!(e, ParseError::Syntax { line: 1, column: 1, .. }));
    }

    #[test]
    fn semantic_errors_pass_through() {
        let e = parse_carrier("finite 3\n0 1 2\n1 2 1\n2 1 1\nidentity 0").unwrap_err();
        assert!(matches!(e, ParseError::Carrier(CarrierError::NotAssociative { .. })));
    }

    #[test]
    fn names_and_generators() {
        let f = parse_carrier("finite 2\n0 1\n1 0\nidentity 0\nnames e a\ngenerators 1\n").unwrap();
        assert_eq!(f.element("a"), Some(1));
        assert_eq!(f.element("1"), Some(1));
        assert_eq!(f.element("2"), None);
        assert_eq!(parse_carrier(&render(&f)).unwrap(), f);
    }
}
