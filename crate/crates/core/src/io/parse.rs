//! Line-oriented problem description.
//!
//! ```text
//! field Q                  # or `field F 5`
//! vertex s u d t
//! arrow a1 s u
//! nilpotency 3
//! relation a1*a2 - b1*b2   # [coeff] path, coeff = int or int/int
//! rotation s a1+ b1+       # outgoing darts around s: `id+` leaves the tail, `id-` the head
//! outer a1+
//! ```
//!
//! Names must be declared before they are used.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{AlgebraElement, AlgebraError, IdealSpec, Presentation};
use crate::field::{FieldError, FieldSpec};
use crate::planar::{Dart, RotationSystem};
use crate::quiver::{Quiver, QuiverError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}, column {column}: {message}")]
    Semantic { line: usize, column: usize, message: String },
    #[error("missing `{0}` declaration")]
    Missing(&'static str),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl InputError {
    fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        InputError::Syntax { line, column, message: message.into() }
    }

    fn semantic(line: usize, column: usize, message: impl Into<String>) -> Self {
        InputError::Semantic { line, column, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DartSpec {
    pub arrow: String,
    pub forward: bool,
}

impl fmt::Display for DartSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.arrow, if self.forward { '+' } else { '-' })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationTerm {
    pub coeff: BigRational,
    pub arrows: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowSpec {
    pub name: String,
    pub tail: String,
    pub head: String,
}

/// A parsed and name-checked problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemSpec {
    pub field: FieldSpec,
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowSpec>,
    pub nilpotency: usize,
    pub relations: Vec<Vec<RelationTerm>>,
    /// Rotation lines in input order.
    pub rotation: Vec<(String, Vec<DartSpec>)>,
    pub outer: Option<DartSpec>,
}

impl ProblemSpec {
    pub fn quiver(&self) -> Result<Quiver, InputError> {
        let arrows: Vec<(&str, &str, &str)> = self
            .arrows
            .iter()
            .map(|a| (a.name.as_str(), a.tail.as_str(), a.head.as_str()))
            .collect();
        Ok(Quiver::new(&self.vertices, &arrows)?)
    }

    /// Builds the quotient algebra over `field`, or over the declared field.
    pub fn presentation(&self, field: Option<FieldSpec>) -> Result<Presentation, InputError> {
        let field = field.unwrap_or(self.field);
        let quiver = self.quiver()?;
        let mut relations = Vec::new();
        for terms in &self.relations {
            let mut converted = Vec::new();
            for t in terms {
                let names: Vec<&str> = t.arrows.iter().map(String::as_str).collect();
                converted.push((field.from_rational(&t.coeff)?, quiver.path_by_names(&names)?));
            }
            relations.push(AlgebraElement::from_terms(field, converted));
        }
        let ideal = IdealSpec {
            relations,
            nilpotency: self.nilpotency,
        };
        Ok(Presentation::build(quiver, ideal, field)?)
    }

    /// The rotation system, if any rotation or outer dart was given.
    pub fn rotation_system(&self, q: &Quiver) -> Option<RotationSystem> {
        if self.rotation.is_empty() && self.outer.is_none() {
            return None;
        }
        let dart = |d: &DartSpec| {
            let a = q.arrow_by_name(&d.arrow).expect("checked while parsing");
            if d.forward {
                Dart::forward(a)
            } else {
                Dart::reverse(a)
            }
        };
        let mut order = vec![Vec::new(); q.vertex_count()];
        for (v, darts) in &self.rotation {
            let v = q.vertex_by_name(v).expect("checked while parsing");
            order[v.0] = darts.iter().map(dart).collect();
        }
        Some(RotationSystem {
            order,
            outer: self.outer.as_ref().map(dart),
        })
    }
}

fn write_coeff(f: &mut fmt::Formatter<'_>, c: &BigRational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.field {
            FieldSpec::Rationals => writeln!(f, "field Q")?,
            FieldSpec::PrimeField(p) => writeln!(f, "field F {p}")?,
        }
        writeln!(f, "vertex {}", self.vertices.join(" "))?;
        for a in &self.arrows {
            writeln!(f, "arrow {} {} {}", a.name, a.tail, a.head)?;
        }
        writeln!(f, "nilpotency {}", self.nilpotency)?;
        for terms in &self.relations {
            write!(f, "relation")?;
            for (i, t) in terms.iter().enumerate() {
                let negative = t.coeff.is_negative();
                match (i, negative) {
                    (0, false) => write!(f, " ")?,
                    (0, true) => write!(f, " -")?,
                    (_, false) => write!(f, " + ")?,
                    (_, true) => write!(f, " - ")?,
                }
                let magnitude = t.coeff.abs();
                if !magnitude.is_one() {
                    write_coeff(f, &magnitude)?;
                    write!(f, "*")?;
                }
                write!(f, "{}", t.arrows.join("*"))?;
            }
            writeln!(f)?;
        }
        for (v, darts) in &self.rotation {
            write!(f, "rotation {v}")?;
            for d in darts {
                write!(f, " {d}")?;
            }
            writeln!(f)?;
        }
        if let Some(o) = &self.outer {
            writeln!(f, "outer {o}")?;
        }
        Ok(())
    }
}

/// Parses a field name: `Q`, `F5`, `F:5` or `F 5`.
pub fn parse_field(text: &str) -> Result<FieldSpec, String> {
    let t = text.trim();
    if t == "Q" {
        return Ok(FieldSpec::Rationals);
    }
    let rest = t
        .strip_prefix('F')
        .ok_or_else(|| format!("unknown field `{t}`, expected Q or F<p>"))?;
    let digits = rest.trim_start_matches(':').trim();
    let p: u64 = digits.parse().map_err(|_| format!("invalid prime `{digits}`"))?;
    FieldSpec::prime_field(p).map_err(|e| e.to_string())
}

#[derive(Debug, Clone)]
struct Token {
    text: String,
    column: usize,
}

fn words(chars: &[char]) -> Vec<Token> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && !chars[i].is_whitespace() {
            i += 1;
        }
        out.push(Token {
            text: chars[start..i].iter().collect(),
            column: start + 1,
        });
    }
    out
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(is_ident_start) && cs.all(is_ident_char)
}

struct Parser {
    spec: ProblemSpec,
    seen_field: bool,
    seen_nilpotency: bool,
    names: BTreeSet<String>,
    rotated: BTreeSet<String>,
}

impl Parser {
    fn vertex_known(&self, name: &str) -> bool {
        self.spec.vertices.iter().any(|v| v == name)
    }

    fn arrow(&self, name: &str) -> Option<&ArrowSpec> {
        self.spec.arrows.iter().find(|a| a.name == name)
    }

    fn declare(&mut self, line: usize, tok: &Token) -> Result<(), InputError> {
        if !is_ident(&tok.text) {
            return Err(InputError::syntax(line, tok.column, format!("invalid name `{}`", tok.text)));
        }
        if !self.names.insert(tok.text.clone()) {
            return Err(InputError::semantic(line, tok.column, format!("`{}` declared twice", tok.text)));
        }
        Ok(())
    }

    fn dart(&self, line: usize, tok: &Token) -> Result<DartSpec, InputError> {
        let (name, forward) = if let Some(n) = tok.text.strip_suffix('+') {
            (n, true)
        } else if let Some(n) = tok.text.strip_suffix('-') {
            (n, false)
        } else {
            return Err(InputError::syntax(
                line,
                tok.column,
                format!("dart `{}` must end in `+` or `-`", tok.text),
            ));
        };
        if self.arrow(name).is_none() {
            return Err(InputError::semantic(line, tok.column, format!("unknown arrow `{name}`")));
        }
        Ok(DartSpec {
            arrow: name.to_string(),
            forward,
        })
    }

    fn line(&mut self, line: usize, chars: &[char]) -> Result<(), InputError> {
        let toks = words(chars);
        let Some(head) = toks.first() else { return Ok(()) };
        let args = &toks[1..];
        let end_column = chars.len() + 1;
        let expect = |n: usize, what: &str| -> Result<(), InputError> {
            if args.len() < n {
                return Err(InputError::syntax(line, end_column, format!("expected {what}")));
            }
            if let Some(extra) = args.get(n) {
                return Err(InputError::syntax(line, extra.column, format!("unexpected `{}`", extra.text)));
            }
            Ok(())
        };
        match head.text.as_str() {
            "field" => {
                if self.seen_field {
                    return Err(InputError::semantic(line, head.column, "field declared twice"));
                }
                let text: Vec<&str> = args.iter().map(|t| t.text.as_str()).collect();
                let column = args.first().map_or(end_column, |t| t.column);
                if text.is_empty() || text.len() > 2 {
                    return Err(InputError::syntax(line, column, "expected `Q` or `F <prime>`"));
                }
                self.spec.field =
                    parse_field(&text.join(" ")).map_err(|m| InputError::syntax(line, column, m))?;
                self.seen_field = true;
            }
            "vertex" => {
                if args.is_empty() {
                    return Err(InputError::syntax(line, end_column, "expected vertex names"));
                }
                for t in args {
                    self.declare(line, t)?;
                    self.spec.vertices.push(t.text.clone());
                }
            }
            "arrow" => {
                expect(3, "`arrow <name> <tail> <head>`")?;
                self.declare(line, &args[0])?;
                for t in &args[1..] {
                    if !self.vertex_known(&t.text) {
                        return Err(InputError::semantic(line, t.column, format!("unknown vertex `{}`", t.text)));
                    }
                }
                self.spec.arrows.push(ArrowSpec {
                    name: args[0].text.clone(),
                    tail: args[1].text.clone(),
                    head: args[2].text.clone(),
                });
            }
            "nilpotency" => {
                expect(1, "`nilpotency <N>`")?;
                if self.seen_nilpotency {
                    return Err(InputError::semantic(line, head.column, "nilpotency declared twice"));
                }
                let n: usize = args[0]
                    .text
                    .parse()
                    .map_err(|_| InputError::syntax(line, args[0].column, "expected an integer"))?;
                if n < 2 {
                    return Err(InputError::semantic(line, args[0].column, "nilpotency must be at least 2"));
                }
                self.spec.nilpotency = n;
                self.seen_nilpotency = true;
            }
            "relation" => {
                let start = args.first().map_or(chars.len(), |t| t.column - 1);
                let terms = RelationParser {
                    chars,
                    pos: start,
                    line,
                    owner: self,
                }
                .parse()?;
                self.spec.relations.push(terms);
            }
            "rotation" => {
                if args.is_empty() {
                    return Err(InputError::syntax(line, end_column, "expected `rotation <vertex> <darts>`"));
                }
                let v = &args[0];
                if !self.vertex_known(&v.text) {
                    return Err(InputError::semantic(line, v.column, format!("unknown vertex `{}`", v.text)));
                }
                if !self.rotated.insert(v.text.clone()) {
                    return Err(InputError::semantic(line, v.column, format!("rotation at `{}` given twice", v.text)));
                }
                let mut darts = Vec::new();
                for t in &args[1..] {
                    let d = self.dart(line, t)?;
                    let a = self.arrow(&d.arrow).expect("checked");
                    let origin = if d.forward { &a.tail } else { &a.head };
                    if *origin != v.text {
                        return Err(InputError::semantic(
                            line,
                            t.column,
                            format!("dart `{d}` starts at `{origin}`, not `{}`", v.text),
                        ));
                    }
                    darts.push(d);
                }
                self.spec.rotation.push((v.text.clone(), darts));
            }
            "outer" => {
                expect(1, "`outer <dart>`")?;
                if self.spec.outer.is_some() {
                    return Err(InputError::semantic(line, head.column, "outer dart given twice"));
                }
                self.spec.outer = Some(self.dart(line, &args[0])?);
            }
            other => {
                return Err(InputError::syntax(line, head.column, format!("unknown directive `{other}`")));
            }
        }
        Ok(())
    }
}

/// Recursive-descent parser for one relation:
/// `expr := [sign] term (sign term)*`, `term := [coeff ['*']] path`,
/// `coeff := INT ['/' INT]`, `path := IDENT ('*' IDENT)*`.
struct RelationParser<'a> {
    chars: &'a [char],
    pos: usize,
    line: usize,
    owner: &'a Parser,
}

impl RelationParser<'_> {
    fn column(&self) -> usize {
        self.pos + 1
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn error(&self, message: impl Into<String>) -> InputError {
        InputError::syntax(self.line, self.column(), message)
    }

    fn integer(&mut self) -> BigInt {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.chars[start..self.pos]
            .iter()
            .collect::<String>()
            .parse()
            .expect("digits")
    }

    fn ident(&mut self) -> Result<(String, usize), InputError> {
        match self.peek() {
            Some(c) if is_ident_start(c) => {}
            Some(c) => return Err(self.error(format!("expected an arrow name, found `{c}`"))),
            None => return Err(self.error("expected an arrow name")),
        }
        let column = self.column();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|&c| is_ident_char(c)) {
            self.pos += 1;
        }
        Ok((self.chars[start..self.pos].iter().collect(), column))
    }

    fn term(&mut self, sign: i32) -> Result<RelationTerm, InputError> {
        let term_column = self.peek().map(|_| self.column()).unwrap_or(self.column());
        let mut coeff = BigRational::one();
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let num = self.integer();
            let mut den = BigInt::one();
            if self.peek() == Some('/') {
                self.pos += 1;
                if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    return Err(self.error("expected a denominator"));
                }
                let den_column = self.column();
                den = self.integer();
                if den.is_zero() {
                    return Err(InputError::semantic(self.line, den_column, "zero denominator"));
                }
            }
            coeff = BigRational::new(num, den);
            if self.peek() == Some('*') {
                self.pos += 1;
            }
        }
        if sign < 0 {
            coeff = -coeff;
        }
        let mut arrows = Vec::new();
        let mut columns = Vec::new();
        loop {
            let (name, column) = self.ident()?;
            if self.owner.arrow(&name).is_none() {
                return Err(InputError::semantic(self.line, column, format!("unknown arrow `{name}`")));
            }
            arrows.push(name);
            columns.push(column);
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        for (i, w) in arrows.windows(2).enumerate() {
            let left = self.owner.arrow(&w[0]).expect("checked");
            let right = self.owner.arrow(&w[1]).expect("checked");
            if left.head != right.tail {
                return Err(InputError::semantic(
                    self.line,
                    columns[i + 1],
                    format!("non-composable path `{}`: `{}` ends at `{}`, `{}` starts at `{}`",
                        arrows.join("*"), w[0], left.head, w[1], right.tail),
                ));
            }
        }
        if arrows.len() < 2 {
            return Err(InputError::semantic(
                self.line,
                term_column,
                format!("relation term not in R^2: `{}` has length 1", arrows[0]),
            ));
        }
        Ok(RelationTerm { coeff, arrows })
    }

    fn parse(mut self) -> Result<Vec<RelationTerm>, InputError> {
        if self.peek().is_none() {
            return Err(self.error("expected a relation"));
        }
        let mut terms = Vec::new();
        let mut sign = 1;
        match self.peek() {
            Some('-') => {
                sign = -1;
                self.pos += 1;
            }
            Some('+') => self.pos += 1,
            _ => {}
        }
        loop {
            terms.push(self.term(sign)?);
            match self.peek() {
                None => break,
                Some('+') => sign = 1,
                Some('-') => sign = -1,
                Some(c) => return Err(self.error(format!("expected `+` or `-`, found `{c}`"))),
            }
            self.pos += 1;
        }
        Ok(terms)
    }
}

pub fn parse_input(text: &str) -> Result<ProblemSpec, InputError> {
    let mut p = Parser {
        spec: ProblemSpec {
            field: FieldSpec::Rationals,
            vertices: Vec::new(),
            arrows: Vec::new(),
            nilpotency: 0,
            relations: Vec::new(),
            rotation: Vec::new(),
            outer: None,
        },
        seen_field: false,
        seen_nilpotency: false,
        names: BTreeSet::new(),
        rotated: BTreeSet::new(),
    };
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let chars: Vec<char> = content.chars().collect();
        p.line(i + 1, &chars)?;
    }
    if p.spec.vertices.is_empty() {
        return Err(InputError::Missing("vertex"));
    }
    if !p.seen_nilpotency {
        return Err(InputError::Missing("nilpotency"));
    }
    Ok(p.spec)
}
