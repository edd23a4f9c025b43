//! Line-oriented text format for algebras, maps, extensions and certificates.
//!
//! ```text
//! [field]
//! rational
//! [grading]
//! rank 1
//! [algebra A]
//! [basis]
//! 1 0 0
//! u1 1 1
//! [mul]
//! 1 1 1 1
//! 1 u1 u1 1
//! u1 1 u1 1
//! [trace]
//! degree 1 1
//! u1 1
//! ```
//!
//! Basis lines are `label λ₁ … λ_r parity`; multiplication lines are
//! `i j k coeff` with labels or 0-based indices. Elements are written as
//! `label:coeff` terms (a bare label means coefficient 1) or `0`.
//! The `degree` line of `[trace]` is the degree `(λ, π)` the trace reads off,
//! so the algebra is Frobenius of degree `(-λ, π)`.
//! `#` starts a comment.

use std::collections::HashMap;
use std::fmt::{self, Write as _};
use std::sync::Arc;

use frobx_core::exactmath::{unit_vector, Field, Matrix, Scalar, Vector};
use frobx_core::extension::{DualGenerators, ExtensionCertificate, ProjectiveBasis};
use frobx_core::frobenius::check_frobenius;
use frobx_core::gsalg::{Degree, GradedLinearMap, GradedSuperAlgebra, Violation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, column: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, column, message: message.into() })
}

#[derive(Debug, Clone)]
pub struct AlgebraEntry {
    pub name: String,
    pub algebra: Arc<GradedSuperAlgebra>,
    /// `(λ_A, π_A)` and the trace, if a `[trace]` section was given.
    pub trace: Option<(Degree, GradedLinearMap)>,
}

#[derive(Debug, Clone)]
pub struct MapEntry {
    pub name: String,
    pub source: String,
    pub target: String,
    pub map: GradedLinearMap,
    pub line: usize,
}

#[derive(Debug, Clone)]
pub struct EmbedEntry {
    pub big: String,
    pub small: String,
    pub matrix: Matrix,
    pub line: usize,
}

#[derive(Debug, Clone)]
pub struct ExtensionEntry {
    /// `(λ, π)`.
    pub shift: Degree,
    pub alpha: String,
    pub beta: String,
    pub trace: Option<String>,
    pub line: usize,
}

#[derive(Debug, Clone, Default)]
pub struct Document {
    pub field: Option<Field>,
    pub rank: usize,
    pub algebras: Vec<AlgebraEntry>,
    pub maps: Vec<MapEntry>,
    pub embed: Option<EmbedEntry>,
    pub extension: Option<ExtensionEntry>,
    pub certificate: Vec<(String, String)>,
    pub is_certificate: bool,
    /// `(element, functional map name)`.
    pub projective_basis: Vec<(Vector, String)>,
    pub dual_generators: Vec<(Vector, Vector)>,
}

impl Document {
    pub fn field(&self) -> Field {
        self.field.unwrap_or(Field::Rational)
    }

    pub fn algebra(&self, name: &str) -> Option<&AlgebraEntry> {
        self.algebras.iter().find(|a| a.name == name)
    }

    pub fn map(&self, name: &str) -> Option<&MapEntry> {
        self.maps.iter().find(|m| m.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Field,
    Grading,
    Algebra,
    Basis,
    Mul,
    Unit,
    Trace,
    Map,
    Embed,
    Extension,
    Certificate,
    ProjectiveBasis,
    DualGenerators,
}

#[derive(Default)]
struct PendingAlgebra {
    name: String,
    line: usize,
    labels: Vec<String>,
    degrees: Vec<Degree>,
    basis_line: usize,
    products: Vec<(usize, usize, usize, Scalar, usize)>,
    mul_line: usize,
    unit: Option<(Vector, usize)>,
    trace_degree: Option<(Degree, usize)>,
    trace_terms: Vec<(usize, Scalar)>,
    trace_line: usize,
}

#[derive(Default)]
struct PendingMap {
    name: String,
    line: usize,
    source: Option<String>,
    target: Option<String>,
    shift: Option<Degree>,
    entries: Vec<(usize, usize, Scalar)>,
}

#[derive(Default)]
struct PendingEmbed {
    line: usize,
    big: Option<String>,
    small: Option<String>,
    entries: Vec<(usize, usize, Scalar)>,
}

#[derive(Default)]
struct PendingExtension {
    line: usize,
    lambda: Option<Vec<i64>>,
    parity: Option<u8>,
    alpha: Option<String>,
    beta: Option<String>,
    trace: Option<String>,
}

/// Whitespace-separated tokens with 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(s, t)| (line[..s].chars().count() + 1, t)).collect()
}

fn valid_label(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || matches!(c, ':' | '|' | '#' | '[' | ']'))
}

struct Parser {
    doc: Document,
    section: Section,
    algebra: Option<PendingAlgebra>,
    map: Option<PendingMap>,
    embed: Option<PendingEmbed>,
    extension: Option<PendingExtension>,
}

/// Parses a document. Algebras are fully validated; anything malformed is a
/// [`ParseError`] pointing at the offending line.
pub fn parse(text: &str) -> Result<Document, ParseError> {
    let mut p = Parser {
        doc: Document { rank: 1, ..Default::default() },
        section: Section::None,
        algebra: None,
        map: None,
        embed: None,
        extension: None,
    };
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokens(line);
        if toks.is_empty() {
            continue;
        }
        let (col, first) = toks[0];
        if first.starts_with('[') {
            p.header(line.trim(), lineno, col)?;
        } else {
            p.body(&toks, line, lineno)?;
        }
    }
    p.close_all(last_line)?;
    Ok(p.doc)
}

impl Parser {
    fn field(&self) -> Field {
        self.doc.field()
    }

    fn close_all(&mut self, line: usize) -> Result<(), ParseError> {
        self.close_algebra()?;
        self.close_map()?;
        self.close_embed()?;
        self.close_extension(line)
    }

    fn header(&mut self, text: &str, line: usize, col: usize) -> Result<(), ParseError> {
        let Some(inner) = text.strip_prefix('[').and_then(|t| t.strip_suffix(']')) else {
            return err(line, col, "malformed section header");
        };
        let mut parts = inner.split_whitespace();
        let kind = parts.next().unwrap_or("");
        let arg = parts.next();
        if parts.next().is_some() {
            return err(line, col, "section header takes at most one name");
        }
        let algebra_part = matches!(kind, "basis" | "mul" | "unit" | "trace");
        if !algebra_part {
            self.close_algebra()?;
        }
        self.close_map()?;
        self.close_embed()?;
        self.close_extension(line)?;
        let needs_name = |p: &Parser| -> Result<String, ParseError> {
            match arg {
                Some(n) if valid_label(n) => Ok(n.to_string()),
                Some(n) => err(line, col, format!("invalid name `{n}`")),
                None if kind == "algebra" => Ok(format!("A{}", p.doc.algebras.len())),
                None => err(line, col, format!("[{kind}] needs a name")),
            }
        };
        if arg.is_some() && !matches!(kind, "algebra" | "map") {
            return err(line, col, format!("[{kind}] takes no name"));
        }
        self.section = match kind {
            "field" => Section::Field,
            "grading" => {
                if !self.doc.algebras.is_empty() || self.algebra.is_some() {
                    return err(line, col, "[grading] must precede every algebra");
                }
                Section::Grading
            }
            "algebra" => {
                let name = needs_name(self)?;
                if self.doc.algebra(&name).is_some() {
                    return err(line, col, format!("duplicate algebra `{name}`"));
                }
                self.algebra = Some(PendingAlgebra { name, line, ..Default::default() });
                Section::Algebra
            }
            "basis" => {
                if self.algebra.as_ref().is_some_and(|a| !a.labels.is_empty()) {
                    return err(line, col, "duplicate [basis] section");
                }
                if self.algebra.is_none() {
                    let name = if self.doc.algebras.is_empty() { "A".to_string() } else { format!("A{}", self.doc.algebras.len()) };
                    self.algebra = Some(PendingAlgebra { name, line, ..Default::default() });
                }
                self.algebra.as_mut().unwrap().basis_line = line;
                Section::Basis
            }
            "mul" | "unit" | "trace" => {
                let Some(a) = self.algebra.as_mut() else {
                    return err(line, col, format!("[{kind}] outside an algebra"));
                };
                if a.labels.is_empty() {
                    return err(line, col, format!("[{kind}] before [basis]"));
                }
                match kind {
                    "mul" => {
                        a.mul_line = line;
                        Section::Mul
                    }
                    "unit" => Section::Unit,
                    _ => {
                        a.trace_line = line;
                        Section::Trace
                    }
                }
            }
            "map" => {
                let name = needs_name(self)?;
                if self.doc.map(&name).is_some() {
                    return err(line, col, format!("duplicate map `{name}`"));
                }
                self.map = Some(PendingMap { name, line, ..Default::default() });
                Section::Map
            }
            "embed" => {
                if self.doc.embed.is_some() {
                    return err(line, col, "duplicate [embed] section");
                }
                self.embed = Some(PendingEmbed { line, ..Default::default() });
                Section::Embed
            }
            "extension" => {
                if self.doc.extension.is_some() {
                    return err(line, col, "duplicate [extension] section");
                }
                self.extension = Some(PendingExtension { line, ..Default::default() });
                Section::Extension
            }
            "certificate" => {
                self.doc.is_certificate = true;
                Section::Certificate
            }
            "projective-basis" => Section::ProjectiveBasis,
            "dual-generators" => Section::DualGenerators,
            other => return err(line, col, format!("unknown section `[{other}]`")),
        };
        Ok(())
    }

    fn scalar(&self, tok: (usize, &str), line: usize) -> Result<Scalar, ParseError> {
        self.field().parse(tok.1).or_else(|e| err(line, tok.0, e.to_string()))
    }

    fn int(tok: (usize, &str), line: usize) -> Result<i64, ParseError> {
        tok.1.parse().or_else(|_| err(line, tok.0, format!("expected an integer, found `{}`", tok.1)))
    }

    fn parity(tok: (usize, &str), line: usize) -> Result<u8, ParseError> {
        match tok.1 {
            "0" => Ok(0),
            "1" => Ok(1),
            other => err(line, tok.0, format!("parity must be 0 or 1, found `{other}`")),
        }
    }

    fn degree(&self, toks: &[(usize, &str)], line: usize, col: usize) -> Result<Degree, ParseError> {
        let r = self.doc.rank;
        if toks.len() != r + 1 {
            return err(line, col, format!("a degree needs {r} integer(s) and a parity, found {} token(s)", toks.len()));
        }
        let lambda = toks[..r].iter().map(|&t| Self::int(t, line)).collect::<Result<_, _>>()?;
        Ok(Degree::new(lambda, Self::parity(toks[r], line)?))
    }

    fn body(&mut self, toks: &[(usize, &str)], raw: &str, line: usize) -> Result<(), ParseError> {
        let (col, first) = toks[0];
        match self.section {
            Section::None => err(line, col, "content outside any section"),
            Section::Field => {
                if self.doc.field.is_some() {
                    return err(line, col, "field already declared");
                }
                let f = match (first, toks.len()) {
                    ("rational", 1) => Field::Rational,
                    ("prime", 2) => {
                        let p: u64 = toks[1].1.parse().or_else(|_| err(line, toks[1].0, "expected a prime"))?;
                        Field::prime(p).or_else(|e| err(line, toks[1].0, e.to_string()))?
                    }
                    _ => return err(line, col, format!("unknown field declaration `{}`", raw.trim())),
                };
                self.doc.field = Some(f);
                Ok(())
            }
            Section::Grading => match (first, toks.len()) {
                ("rank", 2) => {
                    let r = Self::int(toks[1], line)?;
                    if r < 0 {
                        return err(line, toks[1].0, "rank must be non-negative");
                    }
                    self.doc.rank = r as usize;
                    Ok(())
                }
                _ => err(line, col, format!("unknown key `{first}` in [grading]")),
            },
            Section::Algebra => err(line, col, "expected a [basis] section"),
            Section::Basis => {
                if !valid_label(first) {
                    return err(line, col, format!("invalid basis label `{first}`"));
                }
                let d = self.degree(&toks[1..], line, col)?;
                let a = self.algebra.as_mut().unwrap();
                if a.labels.iter().any(|l| l == first) {
                    return err(line, col, format!("duplicate basis label `{first}`"));
                }
                a.labels.push(first.to_string());
                a.degrees.push(d);
                Ok(())
            }
            Section::Mul => {
                if toks.len() != 4 {
                    return err(line, col, "expected `i j k coeff`");
                }
                let labels = self.algebra.as_ref().unwrap().labels.clone();
                let i = resolve(&labels, toks[0], line)?;
                let j = resolve(&labels, toks[1], line)?;
                let k = resolve(&labels, toks[2], line)?;
                let c = self.scalar(toks[3], line)?;
                let a = self.algebra.as_mut().unwrap();
                let expected = &a.degrees[i] + &a.degrees[j];
                if !c.is_zero() && a.degrees[k] != expected {
                    return err(
                        line,
                        toks[2].0,
                        format!(
                            "grading violated by triple ({}, {}, {}): degree {} expected {}",
                            labels[i], labels[j], labels[k], a.degrees[k], expected
                        ),
                    );
                }
                a.products.push((i, j, k, c, line));
                Ok(())
            }
            Section::Unit => {
                let labels = self.algebra.as_ref().unwrap().labels.clone();
                let v = parse_element(self.field(), &labels, toks, line)?;
                let a = self.algebra.as_mut().unwrap();
                if a.unit.is_some() {
                    return err(line, col, "unit already given");
                }
                a.unit = Some((v, line));
                Ok(())
            }
            Section::Trace => {
                let a = self.algebra.as_ref().unwrap();
                if first == "degree" {
                    if a.trace_degree.is_some() {
                        return err(line, col, "trace degree already given");
                    }
                    let d = self.degree(&toks[1..], line, col)?;
                    self.algebra.as_mut().unwrap().trace_degree = Some((d, line));
                    return Ok(());
                }
                if a.trace_degree.is_none() {
                    return err(line, col, "expected `degree` as the first line of [trace]");
                }
                if toks.len() != 2 {
                    return err(line, col, "expected `label coeff`");
                }
                let i = resolve(&a.labels, toks[0], line)?;
                let c = self.scalar(toks[1], line)?;
                self.algebra.as_mut().unwrap().trace_terms.push((i, c));
                Ok(())
            }
            Section::Map => self.map_line(toks, line),
            Section::Embed => self.embed_line(toks, line),
            Section::Extension => self.extension_line(toks, line),
            Section::Certificate => {
                if toks.len() != 2 || !matches!(first, "format" | "source") {
                    return err(line, col, format!("unknown key `{first}` in [certificate]"));
                }
                self.doc.certificate.push((first.to_string(), toks[1].1.to_string()));
                Ok(())
            }
            Section::ProjectiveBasis => {
                let (left, right) = split_bar(toks, line)?;
                let ext = self.doc.embed.as_ref().ok_or(ParseError {
                    line,
                    column: col,
                    message: "[projective-basis] needs an earlier [embed]".into(),
                })?;
                let big = self.doc.algebra(&ext.big).unwrap().algebra.clone();
                let v = parse_element(self.field(), big.labels(), left, line)?;
                if right.len() != 1 {
                    return err(line, col, "expected `element | map-name`");
                }
                let name = right[0].1;
                if self.doc.map(name).is_none() {
                    return err(line, right[0].0, format!("unknown map `{name}`"));
                }
                self.doc.projective_basis.push((v, name.to_string()));
                Ok(())
            }
            Section::DualGenerators => {
                let (left, right) = split_bar(toks, line)?;
                let ext = self.doc.embed.as_ref().ok_or(ParseError {
                    line,
                    column: col,
                    message: "[dual-generators] needs an earlier [embed]".into(),
                })?;
                let big = self.doc.algebra(&ext.big).unwrap().algebra.clone();
                let x = parse_element(self.field(), big.labels(), left, line)?;
                let y = parse_element(self.field(), big.labels(), right, line)?;
                self.doc.dual_generators.push((x, y));
                Ok(())
            }
        }
    }

    fn known_algebra(&self, tok: (usize, &str), line: usize) -> Result<Arc<GradedSuperAlgebra>, ParseError> {
        self.doc
            .algebra(tok.1)
            .map(|a| a.algebra.clone())
            .ok_or(())
            .or_else(|_| err(line, tok.0, format!("unknown algebra `{}`", tok.1)))
    }

    fn map_line(&mut self, toks: &[(usize, &str)], line: usize) -> Result<(), ParseError> {
        let (col, first) = toks[0];
        let pending = self.map.as_ref().unwrap();
        let header_done = pending.source.is_some() && pending.target.is_some() && pending.shift.is_some();
        match first {
            "source" | "target" if toks.len() == 2 && !header_done => {
                self.known_algebra(toks[1], line)?;
                let m = self.map.as_mut().unwrap();
                let slot = if first == "source" { &mut m.source } else { &mut m.target };
                if slot.is_some() {
                    return err(line, col, format!("`{first}` given twice"));
                }
                *slot = Some(toks[1].1.to_string());
                Ok(())
            }
            "shift" if !header_done => {
                let d = self.degree(&toks[1..], line, col)?;
                self.map.as_mut().unwrap().shift = Some(d);
                Ok(())
            }
            _ if !header_done => err(line, col, format!("unknown key `{first}` in [map]; expected source, target, shift")),
            _ => {
                if toks.len() != 3 {
                    return err(line, col, "expected `source-label target-label coeff`");
                }
                let src = self.known_algebra((0, pending.source.as_deref().unwrap()), line)?;
                let tgt = self.known_algebra((0, pending.target.as_deref().unwrap()), line)?;
                let j = resolve(src.labels(), toks[0], line)?;
                let k = resolve(tgt.labels(), toks[1], line)?;
                let c = self.scalar(toks[2], line)?;
                self.map.as_mut().unwrap().entries.push((j, k, c));
                Ok(())
            }
        }
    }

    fn embed_line(&mut self, toks: &[(usize, &str)], line: usize) -> Result<(), ParseError> {
        let (col, first) = toks[0];
        let pending = self.embed.as_ref().unwrap();
        let header_done = pending.big.is_some() && pending.small.is_some();
        match first {
            "big" | "small" if toks.len() == 2 && !header_done => {
                self.known_algebra(toks[1], line)?;
                let e = self.embed.as_mut().unwrap();
                let slot = if first == "big" { &mut e.big } else { &mut e.small };
                *slot = Some(toks[1].1.to_string());
                Ok(())
            }
            _ if !header_done => err(line, col, format!("unknown key `{first}` in [embed]; expected big, small")),
            _ => {
                if toks.len() != 3 {
                    return err(line, col, "expected `small-label big-label coeff`");
                }
                let small = self.known_algebra((0, pending.small.as_deref().unwrap()), line)?;
                let big = self.known_algebra((0, pending.big.as_deref().unwrap()), line)?;
                let j = resolve(small.labels(), toks[0], line)?;
                let k = resolve(big.labels(), toks[1], line)?;
                let c = self.scalar(toks[2], line)?;
                self.embed.as_mut().unwrap().entries.push((j, k, c));
                Ok(())
            }
        }
    }

    fn extension_line(&mut self, toks: &[(usize, &str)], line: usize) -> Result<(), ParseError> {
        let (col, first) = toks[0];
        let rank = self.doc.rank;
        let e = self.extension.as_mut().unwrap();
        match first {
            "lambda" => {
                if toks.len() != rank + 1 {
                    return err(line, col, format!("lambda needs {rank} integer(s)"));
                }
                e.lambda = Some(toks[1..].iter().map(|&t| Self::int(t, line)).collect::<Result<_, _>>()?);
            }
            "parity" if toks.len() == 2 => e.parity = Some(Self::parity(toks[1], line)?),
            "alpha" if toks.len() == 2 => e.alpha = Some(toks[1].1.to_string()),
            "beta" if toks.len() == 2 => e.beta = Some(toks[1].1.to_string()),
            "trace" if toks.len() == 2 => e.trace = Some(toks[1].1.to_string()),
            _ => return err(line, col, format!("unknown key `{first}` in [extension]")),
        }
        Ok(())
    }

    fn close_algebra(&mut self) -> Result<(), ParseError> {
        let Some(a) = self.algebra.take() else { return Ok(()) };
        let field = self.field();
        if a.labels.is_empty() {
            return err(a.line, 1, format!("algebra `{}` has no basis", a.name));
        }
        let dim = a.labels.len();
        let mut seen: HashMap<(usize, usize, usize), usize> = HashMap::new();
        for &(i, j, k, _, l) in &a.products {
            seen.entry((i, j, k)).or_insert(l);
        }
        let unit = match &a.unit {
            Some((u, _)) => u.clone(),
            None => unit_vector(field, dim, 0),
        };
        let products = a.products.iter().map(|(i, j, k, c, _)| (*i, *j, *k, c.clone()));
        let alg = GradedSuperAlgebra::new(field, self.doc.rank, a.labels.clone(), a.degrees.clone(), products, unit)
            .or_else(|e| err(a.basis_line, 1, e.to_string()))?;
        if let Some(v) = alg.validate().violations.first() {
            let label = |i: usize| alg.label(i).to_string();
            return match v {
                Violation::Grading { i, j, k } => err(
                    seen.get(&(*i, *j, *k)).copied().unwrap_or(a.mul_line),
                    1,
                    format!("grading violated by triple ({}, {}, {})", label(*i), label(*j), label(*k)),
                ),
                Violation::Associativity { i, j, k } => err(
                    a.mul_line,
                    1,
                    format!("associativity fails on triple ({}, {}, {})", label(*i), label(*j), label(*k)),
                ),
                other => err(a.unit.as_ref().map_or(a.basis_line, |u| u.1), 1, other.to_string()),
            };
        }
        let alg = Arc::new(alg);
        let trace = match a.trace_degree {
            None => None,
            Some((degree, dline)) => {
                let mut m = Matrix::zeros(field, 1, dim);
                for (i, c) in &a.trace_terms {
                    m.set(0, *i, c.clone());
                }
                let map = GradedLinearMap::new(-&degree, m);
                check_frobenius(alg.clone(), &map, &degree).or_else(|e| err(dline, 1, e.to_string()))?;
                Some((degree, map))
            }
        };
        self.doc.algebras.push(AlgebraEntry { name: a.name, algebra: alg, trace });
        Ok(())
    }

    fn close_map(&mut self) -> Result<(), ParseError> {
        let Some(m) = self.map.take() else { return Ok(()) };
        let (Some(src), Some(tgt), Some(shift)) = (m.source, m.target, m.shift) else {
            return err(m.line, 1, format!("map `{}` needs source, target and shift", m.name));
        };
        let s = self.doc.algebra(&src).unwrap().algebra.clone();
        let t = self.doc.algebra(&tgt).unwrap().algebra.clone();
        let mut matrix = Matrix::zeros(self.field(), t.dim(), s.dim());
        for (j, k, c) in m.entries {
            let cur = matrix.get(k, j).clone();
            matrix.set(k, j, &cur + &c);
        }
        let map = GradedLinearMap::new(shift, matrix);
        map.check_graded(&s, &t).or_else(|e| err(m.line, 1, format!("map `{}`: {e}", m.name)))?;
        self.doc.maps.push(MapEntry { name: m.name, source: src, target: tgt, map, line: m.line });
        Ok(())
    }

    fn close_embed(&mut self) -> Result<(), ParseError> {
        let Some(e) = self.embed.take() else { return Ok(()) };
        let (Some(big), Some(small)) = (e.big, e.small) else {
            return err(e.line, 1, "[embed] needs big and small");
        };
        let b = self.doc.algebra(&big).unwrap().algebra.clone();
        let s = self.doc.algebra(&small).unwrap().algebra.clone();
        let mut matrix = Matrix::zeros(self.field(), b.dim(), s.dim());
        for (j, k, c) in e.entries {
            let cur = matrix.get(k, j).clone();
            matrix.set(k, j, &cur + &c);
        }
        self.doc.embed = Some(EmbedEntry { big, small, matrix, line: e.line });
        Ok(())
    }

    fn close_extension(&mut self, _line: usize) -> Result<(), ParseError> {
        let Some(e) = self.extension.take() else { return Ok(()) };
        let (Some(lambda), Some(parity), Some(alpha), Some(beta)) = (e.lambda, e.parity, e.alpha, e.beta) else {
            return err(e.line, 1, "[extension] needs lambda, parity, alpha and beta");
        };
        self.doc.extension = Some(ExtensionEntry {
            shift: Degree::new(lambda, parity),
            alpha,
            beta,
            trace: e.trace,
            line: e.line,
        });
        Ok(())
    }
}

fn split_bar<'a>(toks: &'a [(usize, &'a str)], line: usize) -> Result<(&'a [(usize, &'a str)], &'a [(usize, &'a str)]), ParseError> {
    match toks.iter().position(|t| t.1 == "|") {
        Some(p) => Ok((&toks[..p], &toks[p + 1..])),
        None => err(line, toks[0].0, "expected `|` separating the two parts"),
    }
}

/// A basis reference: a label, or a 0-based index when no label matches.
fn resolve(labels: &[String], tok: (usize, &str), line: usize) -> Result<usize, ParseError> {
    if let Some(i) = labels.iter().position(|l| l == tok.1) {
        return Ok(i);
    }
    match tok.1.parse::<usize>() {
        Ok(i) if i < labels.len() => Ok(i),
        _ => err(line, tok.0, format!("unknown basis element `{}`", tok.1)),
    }
}

/// Parses `label:coeff` terms (or `0`) into coordinates.
pub fn parse_element(field: Field, labels: &[String], toks: &[(usize, &str)], line: usize) -> Result<Vector, ParseError> {
    let mut v = vec![field.zero(); labels.len()];
    if toks.len() == 1 && toks[0].1 == "0" {
        return Ok(v);
    }
    if toks.is_empty() {
        return err(line, 1, "expected an element");
    }
    for &(col, t) in toks {
        let (label, coeff) = match t.split_once(':') {
            Some((l, c)) => (l, field.parse(c).or_else(|e| err(line, col + l.len() + 1, e.to_string()))?),
            None => (t, field.one()),
        };
        let i = resolve(labels, (col, label), line)?;
        v[i] = &v[i] + &coeff;
    }
    Ok(v)
}

pub fn write_element(alg: &GradedSuperAlgebra, v: &[Scalar]) -> String {
    let terms: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| format!("{}:{}", alg.label(i), c))
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" ")
    }
}

fn write_degree(d: &Degree) -> String {
    let mut parts: Vec<String> = d.lambda.iter().map(ToString::to_string).collect();
    parts.push(d.parity.to_string());
    parts.join(" ")
}

pub fn write_header(field: Field, rank: usize) -> String {
    format!("[field]\n{field}\n\n[grading]\nrank {rank}\n")
}

pub fn write_algebra(name: &str, alg: &GradedSuperAlgebra, trace: Option<(&Degree, &GradedLinearMap)>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "\n[algebra {name}]\n[basis]");
    for i in 0..alg.dim() {
        let _ = writeln!(s, "{} {}", alg.label(i), write_degree(alg.degree(i)));
    }
    let _ = writeln!(s, "[mul]");
    for (i, j, k, c) in alg.structure_constants() {
        let _ = writeln!(s, "{} {} {} {}", alg.label(i), alg.label(j), alg.label(k), c);
    }
    if alg.unit() != unit_vector(alg.field(), alg.dim(), 0) {
        let _ = writeln!(s, "[unit]\n{}", write_element(alg, &alg.unit()));
    }
    if let Some((degree, tr)) = trace {
        let _ = writeln!(s, "[trace]\ndegree {}", write_degree(degree));
        for i in 0..alg.dim() {
            let c = tr.matrix.get(0, i);
            if !c.is_zero() {
                let _ = writeln!(s, "{} {}", alg.label(i), c);
            }
        }
    }
    s
}

pub fn write_map(
    name: &str,
    source: (&str, &GradedSuperAlgebra),
    target: (&str, &GradedSuperAlgebra),
    map: &GradedLinearMap,
) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "\n[map {name}]\nsource {}\ntarget {}\nshift {}", source.0, target.0, write_degree(&map.shift));
    for j in 0..map.source_dim() {
        for k in 0..map.target_dim() {
            let c = map.matrix.get(k, j);
            if !c.is_zero() {
                let _ = writeln!(s, "{} {} {}", source.1.label(j), target.1.label(k), c);
            }
        }
    }
    s
}

/// Serializes an extension with explicit `alpha`, `beta` and `trace` maps.
pub fn write_extension(
    ext: &frobx_core::ExtensionData,
    traces: (Option<(&Degree, &GradedLinearMap)>, Option<(&Degree, &GradedLinearMap)>),
    trace: Option<&GradedLinearMap>,
) -> String {
    let a = ext.big();
    let b = ext.small();
    let mut s = write_header(a.field(), a.rank());
    s += &write_algebra("A", a, traces.0);
    s += &write_algebra("B", b, traces.1);
    let _ = writeln!(s, "\n[embed]\nbig A\nsmall B");
    let inc = ext.embedding().inclusion();
    for j in 0..b.dim() {
        for k in 0..a.dim() {
            let c = inc.matrix.get(k, j);
            if !c.is_zero() {
                let _ = writeln!(s, "{} {} {}", b.label(j), a.label(k), c);
            }
        }
    }
    s += &write_map("alpha", ("A", a), ("A", a), ext.alpha());
    s += &write_map("beta", ("B", b), ("B", b), ext.beta());
    if let Some(tr) = trace {
        s += &write_map("trace", ("A", a), ("B", b), tr);
    }
    let _ = writeln!(
        s,
        "\n[extension]\nlambda {}\nparity {}\nalpha alpha\nbeta beta",
        ext.shift().lambda.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
        ext.parity()
    );
    if trace.is_some() {
        let _ = writeln!(s, "trace trace");
    }
    s
}

pub fn write_certificate(cert: &ExtensionCertificate, source: &str) -> String {
    let a = cert.ext.big();
    let b = cert.ext.small();
    let mut s = format!("[certificate]\nformat 1\nsource {source}\n\n");
    s += &write_extension(&cert.ext, (None, None), Some(&cert.trace.map));
    for (i, phi) in cert.projective_basis.functionals.iter().enumerate() {
        s += &write_map(&format!("phi{}", i + 1), ("A", a), ("B", b), phi);
    }
    let _ = writeln!(s, "\n[projective-basis]");
    for (i, x) in cert.projective_basis.elements.iter().enumerate() {
        let _ = writeln!(s, "{} | phi{}", write_element(a, x), i + 1);
    }
    let _ = writeln!(s, "\n[dual-generators]");
    for (x, y) in cert.dual.x.iter().zip(&cert.dual.y) {
        let _ = writeln!(s, "{} | {}", write_element(a, x), write_element(a, y));
    }
    s
}

/// Rebuilds a certificate from a parsed document.
pub fn certificate_from(doc: &Document, ext: frobx_core::ExtensionData, trace: GradedLinearMap) -> Result<ExtensionCertificate, String> {
    let functionals = doc
        .projective_basis
        .iter()
        .map(|(_, name)| doc.map(name).map(|m| m.map.clone()).ok_or_else(|| format!("unknown map `{name}`")))
        .collect::<Result<Vec<_>, _>>()?;
    let projective_basis = ProjectiveBasis {
        elements: doc.projective_basis.iter().map(|(v, _)| v.clone()).collect(),
        functionals,
    };
    let dual = DualGenerators {
        x: doc.dual_generators.iter().map(|(x, _)| x.clone()).collect(),
        y: doc.dual_generators.iter().map(|(_, y)| y.clone()).collect(),
    };
    Ok(ExtensionCertificate { ext, projective_basis, trace: frobx_core::TraceMap::left(trace), dual })
}

#[cfg(test)]
mod tests {
    use super::*;

    const N2: &str = "[field]\nrational\n[grading]\nrank 1\n[algebra N2]\n[basis]\n1 0 0\nu1 1 1\n[mul]\n1 1 1 1\n1 u1 u1 1\nu1 1 u1 1\n[trace]\ndegree 1 1\nu1 1\n";

    #[test]
    fn parses_n2() {
        let doc = parse(N2).unwrap();
        let a = &doc.algebras[0];
        assert_eq!(a.name, "N2");
        assert_eq!(a.algebra.dim(), 2);
        assert!(a.trace.is_some());
    }

    #[test]
    fn duplicate_label_is_reported() {
        let text = N2.replace("u1 1 1\n[mul]", "u1 1 1\nu1 1 1\n[mul]");
        let e = parse(&text).unwrap_err();
        assert_eq!(e.line, 9);
        assert!(e.message.contains("duplicate basis label `u1`"), "{e}");
    }

    #[test]
    fn grading_violation_cites_the_triple() {
        let text = N2.replace("1 1 1 1\n", "1 1 1 1\nu1 u1 u1 1\n");
        let e = parse(&text).unwrap_err();
        assert_eq!(e.line, 11);
        assert!(e.message.contains("(u1, u1, u1)"), "{e}");
    }

    #[test]
    fn unknown_keys_and_sections_are_rejected() {
        assert!(parse("[colour]\nred\n").unwrap_err().message.contains("unknown section"));
        assert!(parse("[grading]\nrnk 1\n").unwrap_err().message.contains("unknown key"));
    }

    #[test]
    fn element_round_trip() {
        let doc = parse(N2).unwrap();
        let alg = &doc.algebras[0].algebra;
        let toks = tokens("1:2 u1:-1/3");
        let v = parse_element(Field::Rational, alg.labels(), &toks, 1).unwrap();
        assert_eq!(write_element(alg, &v), "1:2 u1:-1/3");
        let zero = parse_element(Field::Rational, alg.labels(), &tokens("0"), 1).unwrap();
        assert_eq!(write_element(alg, &zero), "0");
    }

    #[test]
    fn algebra_round_trip() {
        let doc = parse(N2).unwrap();
        let a = &doc.algebras[0];
        let text = write_header(Field::Rational, 1)
            + &write_algebra("N2", &a.algebra, a.trace.as_ref().map(|(d, m)| (d, m)));
        let again = parse(&text).unwrap();
        assert_eq!(*again.algebras[0].algebra, *a.algebra);
    }
}
