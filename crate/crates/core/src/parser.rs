//! The `.lfc` state description language.
//!
//! ```text
//! # two fermions in a double well
//! modes {L,R} x {up,dn}
//! statistics fermion
//! let B = sqrt(0.3)|L> + sqrt(0.7)|R>
//! state sqrt(0.5)|L up, B dn> + sqrt(0.5)*exp(i*0)|L dn, B up>
//! ```
//!
//! `modes` declares the spatial and internal tags; the basis is their product in spatial-major
//! order. A `let` binds either a spatial orbital (kets without an internal tag, used as
//! `B dn`) or a full single-particle vector (kets with one, used as a bare `B`). Scalars are
//! real literals, `sqrt(r)`, `exp(i*r)`, complex literals `(re+imi)`, and products of these
//! joined by `*`. `#` starts a line comment. Newlines carry no meaning.

use std::collections::HashMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::fock::{ModeBasis, SingleParticleVector, Statistics};
use crate::format::fixed12;
use crate::lfc::{LfcState, ProductKet};
use crate::ZERO_THRESHOLD;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

const RESERVED: [&str; 6] = ["modes", "statistics", "let", "state", "sqrt", "exp"];

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    Ident(String),
    Number(f64),
    Sym(char),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    kind: Kind,
    line: usize,
    column: usize,
    start: usize,
    end: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut tokens = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut k = 0;
    let byte_at = |k: usize| chars.get(k).map_or(text.len(), |&(b, _)| b);
    while k < chars.len() {
        let c = chars[k].1;
        let (tok_line, tok_col, start) = (line, column, k);
        if c == '\n' {
            line += 1;
            column = 1;
            k += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            k += 1;
            continue;
        }
        if c == '#' {
            while k < chars.len() && chars[k].1 != '\n' {
                k += 1;
                column += 1;
            }
            continue;
        }
        let digit_at = |k: usize| chars.get(k).is_some_and(|&(_, c)| c.is_ascii_digit());
        let kind = if c.is_alphabetic() || c == '_' {
            while k < chars.len() && (chars[k].1.is_alphanumeric() || chars[k].1 == '_') {
                k += 1;
            }
            Kind::Ident(text[byte_at(start)..byte_at(k)].to_string())
        } else if c.is_ascii_digit() || (c == '.' && digit_at(k + 1)) {
            while digit_at(k) {
                k += 1;
            }
            if k < chars.len() && chars[k].1 == '.' {
                k += 1;
                while digit_at(k) {
                    k += 1;
                }
            }
            if k < chars.len() && matches!(chars[k].1, 'e' | 'E') {
                let sign =
                    usize::from(chars.get(k + 1).is_some_and(|&(_, c)| c == '+' || c == '-'));
                if digit_at(k + 1 + sign) {
                    k += 1 + sign;
                    while digit_at(k) {
                        k += 1;
                    }
                }
            }
            let literal = &text[byte_at(start)..byte_at(k)];
            let value = literal.parse().map_err(|_| ParseError {
                line: tok_line,
                column: tok_col,
                message: format!("malformed number `{literal}`"),
            })?;
            Kind::Number(value)
        } else if "{},|>+-*=()".contains(c) {
            k += 1;
            Kind::Sym(c)
        } else {
            return Err(ParseError {
                line: tok_line,
                column: tok_col,
                message: format!("unexpected character `{c}`"),
            });
        };
        column += k - start;
        tokens.push(Token {
            kind,
            line: tok_line,
            column: tok_col,
            start: byte_at(start),
            end: byte_at(k),
        });
    }
    tokens.push(Token {
        kind: Kind::Eof,
        line,
        column,
        start: text.len(),
        end: text.len(),
    });
    Ok(tokens)
}

/// Byte ranges of every token in `text`, for tooling and mutation tests.
pub fn token_spans(text: &str) -> Result<Vec<std::ops::Range<usize>>, ParseError> {
    Ok(tokenize(text)?
        .into_iter()
        .filter(|t| t.kind != Kind::Eof)
        .map(|t| t.start..t.end)
        .collect())
}

/// Value bound by a `let`.
#[derive(Clone, Debug, PartialEq)]
pub enum Definition {
    /// Amplitudes over the spatial tags; combined with an internal tag at the point of use.
    Spatial(Vec<Complex64>),
    Orbital(SingleParticleVector),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub basis: ModeBasis,
    pub statistics: Statistics,
    pub definitions: Vec<(String, Definition)>,
    pub state: LfcState,
    /// Non-fatal findings, e.g. fermionic kets with two identical factors.
    pub warnings: Vec<String>,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    definitions: Vec<(String, Definition)>,
    lookup: HashMap<String, usize>,
    warnings: Vec<String>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, offset: usize) -> &Kind {
        &self.tokens[(self.pos + offset).min(self.tokens.len() - 1)].kind
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(token: &Token, message: impl Into<String>) -> ParseError {
        ParseError {
            line: token.line,
            column: token.column,
            message: message.into(),
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        Self::error_at(self.peek(), message)
    }

    fn describe(kind: &Kind) -> String {
        match kind {
            Kind::Ident(s) => format!("`{s}`"),
            Kind::Number(x) => format!("number {x}"),
            Kind::Sym(c) => format!("`{c}`"),
            Kind::Eof => "end of input".into(),
        }
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek().kind == Kind::Sym(c)
    }

    fn is_keyword(&self, word: &str) -> bool {
        matches!(&self.peek().kind, Kind::Ident(s) if s == word)
    }

    fn expect_sym(&mut self, c: char) -> PResult<()> {
        if self.is_sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!(
                "expected `{c}`, found {}",
                Self::describe(&self.peek().kind)
            )))
        }
    }

    fn expect_keyword(&mut self, word: &str, message: &str) -> PResult<()> {
        if self.is_keyword(word) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!(
                "{message}, found {}",
                Self::describe(&self.peek().kind)
            )))
        }
    }

    fn expect_ident(&mut self, what: &str) -> PResult<(String, Token)> {
        let token = self.peek().clone();
        match &token.kind {
            Kind::Ident(s) => {
                self.bump();
                Ok((s.clone(), token))
            }
            other => Err(self.error(format!("expected {what}, found {}", Self::describe(other)))),
        }
    }

    fn expect_number(&mut self) -> PResult<f64> {
        match self.peek().kind {
            Kind::Number(x) => {
                self.bump();
                Ok(x)
            }
            ref other => Err(self.error(format!(
                "expected a number, found {}",
                Self::describe(other)
            ))),
        }
    }

    fn tag_list(&mut self, what: &str) -> PResult<Vec<String>> {
        self.expect_sym('{')?;
        let mut tags: Vec<String> = Vec::new();
        loop {
            let (tag, token) = self.expect_ident(what)?;
            if RESERVED.contains(&tag.as_str()) {
                return Err(Self::error_at(&token, format!("`{tag}` is reserved")));
            }
            if tags.contains(&tag) {
                return Err(Self::error_at(&token, format!("duplicate {what} `{tag}`")));
            }
            tags.push(tag);
            if self.is_sym(',') {
                self.bump();
            } else {
                break;
            }
        }
        self.expect_sym('}')?;
        Ok(tags)
    }

    fn document(mut self) -> PResult<Document> {
        self.expect_keyword("modes", "expected `modes` declaration")?;
        let spatial = self.tag_list("spatial tag")?;
        self.expect_keyword("x", "expected `x` between spatial and internal tags")?;
        let internal = self.tag_list("internal tag")?;
        let basis = ModeBasis::new(spatial, internal).expect("tags validated");

        if !self.is_keyword("statistics") {
            return Err(self.error(format!(
                "missing `statistics` declaration, found {}",
                Self::describe(&self.peek().kind)
            )));
        }
        self.bump();
        let (name, token) = self.expect_ident("`boson` or `fermion`")?;
        let statistics = match name.as_str() {
            "boson" => Statistics::Boson,
            "fermion" => Statistics::Fermion,
            _ => {
                return Err(Self::error_at(
                    &token,
                    format!("unknown statistics `{name}`"),
                ))
            }
        };

        loop {
            if self.is_keyword("let") {
                self.definition(&basis)?;
            } else if self.is_keyword("statistics") {
                return Err(self.error("statistics declared more than once"));
            } else {
                break;
            }
        }
        self.expect_keyword("state", "expected `let` or `state`")?;
        let state = self.state(&basis, statistics)?;
        if self.is_keyword("statistics") {
            return Err(self.error("statistics declared more than once"));
        }
        if self.peek().kind != Kind::Eof {
            return Err(self.error(format!(
                "expected `+`, `-` or end of input, found {}",
                Self::describe(&self.peek().kind)
            )));
        }
        Ok(Document {
            basis,
            statistics,
            definitions: self.definitions,
            state,
            warnings: self.warnings,
        })
    }

    fn starts_factor(kind: &Kind) -> bool {
        match kind {
            Kind::Number(_) | Kind::Sym('(') => true,
            Kind::Ident(s) => s == "sqrt" || s == "exp",
            _ => false,
        }
    }

    fn factor(&mut self) -> PResult<Complex64> {
        let token = self.peek().clone();
        match &token.kind {
            Kind::Number(x) => {
                self.bump();
                Ok(Complex64::new(*x, 0.0))
            }
            Kind::Ident(s) if s == "sqrt" => {
                self.bump();
                self.expect_sym('(')?;
                let arg_token = self.peek().clone();
                let x = self.expect_number()?;
                if x < 0.0 {
                    return Err(Self::error_at(&arg_token, "sqrt of a negative number"));
                }
                self.expect_sym(')')?;
                Ok(Complex64::new(x.sqrt(), 0.0))
            }
            Kind::Ident(s) if s == "exp" => {
                self.bump();
                self.expect_sym('(')?;
                let mut sign = 1.0;
                if self.is_sym('-') {
                    self.bump();
                    sign = -1.0;
                }
                self.expect_keyword("i", "expected `i` in `exp(i*…)`")?;
                self.expect_sym('*')?;
                let phase = sign * self.signed_number()?;
                self.expect_sym(')')?;
                Ok(Complex64::from_polar(1.0, phase))
            }
            Kind::Sym('(') => {
                self.bump();
                let re = self.signed_number()?;
                let sign = if self.is_sym('+') {
                    1.0
                } else if self.is_sym('-') {
                    -1.0
                } else {
                    return Err(self.error(format!(
                        "expected `+` or `-` in complex literal, found {}",
                        Self::describe(&self.peek().kind)
                    )));
                };
                self.bump();
                let im = self.expect_number()?;
                self.expect_keyword("i", "expected `i` after imaginary part")?;
                self.expect_sym(')')?;
                Ok(Complex64::new(re, sign * im))
            }
            other => Err(self.error(format!(
                "expected a scalar, found {}",
                Self::describe(other)
            ))),
        }
    }

    fn signed_number(&mut self) -> PResult<f64> {
        let sign = if self.is_sym('-') {
            self.bump();
            -1.0
        } else {
            if self.is_sym('+') {
                self.bump();
            }
            1.0
        };
        Ok(sign * self.expect_number()?)
    }

    /// `scalar?` followed by an optional `*` when a scalar was present.
    fn scalar_prefix(&mut self) -> PResult<Complex64> {
        if !Self::starts_factor(&self.peek().kind) {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let mut value = self.factor()?;
        while self.is_sym('*') && Self::starts_factor(self.peek_at(1)) {
            self.bump();
            value *= self.factor()?;
        }
        if self.is_sym('*') {
            self.bump();
        }
        Ok(value)
    }

    /// Leading sign of a term. The first term may omit it.
    fn term_sign(&mut self, first: bool) -> PResult<Option<f64>> {
        if self.is_sym('+') {
            self.bump();
            Ok(Some(1.0))
        } else if self.is_sym('-') {
            self.bump();
            Ok(Some(-1.0))
        } else if first {
            Ok(Some(1.0))
        } else {
            Ok(None)
        }
    }

    fn definition(&mut self, basis: &ModeBasis) -> PResult<()> {
        self.bump();
        let (name, token) = self.expect_ident("a name")?;
        if RESERVED.contains(&name.as_str()) {
            return Err(Self::error_at(&token, format!("`{name}` is reserved")));
        }
        if basis.spatial_index(&name).is_some() {
            return Err(Self::error_at(
                &token,
                format!("`{name}` is already a spatial tag"),
            ));
        }
        if self.lookup.contains_key(&name) {
            return Err(Self::error_at(
                &token,
                format!("`{name}` is already defined"),
            ));
        }
        self.expect_sym('=')?;
        let single_internal = basis.internal_tags().len() == 1;
        let mut value: Option<Definition> = None;
        let mut first = true;
        while let Some(sign) = self.term_sign(first)? {
            first = false;
            let coefficient = sign * self.scalar_prefix()?;
            let term_token = self.peek().clone();
            let term = if self.is_sym('|') {
                self.bump();
                let (spatial, tag_token) = self.expect_ident("a spatial tag")?;
                let s = basis.spatial_index(&spatial).ok_or_else(|| {
                    Self::error_at(&tag_token, format!("undeclared spatial tag `{spatial}`"))
                })?;
                let term = if let Kind::Ident(internal) = &self.peek().kind {
                    let internal = internal.clone();
                    let it = self.bump();
                    let i = basis.internal_index(&internal).ok_or_else(|| {
                        Self::error_at(&it, format!("undeclared internal tag `{internal}`"))
                    })?;
                    unit_orbital(basis, s * basis.internal_tags().len() + i)
                } else if single_internal {
                    unit_orbital(basis, s)
                } else {
                    let mut amps = vec![Complex64::default(); basis.spatial_tags().len()];
                    amps[s] = Complex64::new(1.0, 0.0);
                    Definition::Spatial(amps)
                };
                self.expect_sym('>')?;
                term
            } else {
                let (other, other_token) = self.expect_ident("`|` or a defined name")?;
                let k = *self.lookup.get(&other).ok_or_else(|| {
                    Self::error_at(&other_token, format!("undeclared name `{other}`"))
                })?;
                self.definitions[k].1.clone()
            };
            value = Some(match (value, term) {
                (None, t) => scale_definition(t, coefficient),
                (Some(Definition::Spatial(mut acc)), Definition::Spatial(t)) => {
                    acc.iter_mut()
                        .zip(t)
                        .for_each(|(a, b)| *a += coefficient * b);
                    Definition::Spatial(acc)
                }
                (Some(Definition::Orbital(mut acc)), Definition::Orbital(t)) => {
                    acc.axpy(coefficient, &t);
                    Definition::Orbital(acc)
                }
                _ => {
                    return Err(Self::error_at(
                        &term_token,
                        "cannot mix spatial kets and kets with internal tags in one definition",
                    ))
                }
            });
        }
        self.lookup.insert(name.clone(), self.definitions.len());
        self.definitions
            .push((name, value.expect("at least one term")));
        Ok(())
    }

    /// One factor of a product ket; returns the vector and its source text.
    fn sp_ref(&mut self, basis: &ModeBasis) -> PResult<(SingleParticleVector, String)> {
        let (head, head_token) = self.expect_ident("a spatial tag or defined name")?;
        let single_internal = basis.internal_tags().len() == 1;
        let next_ident = match &self.peek().kind {
            Kind::Ident(s) => Some(s.clone()),
            _ => None,
        };
        let internal_index = |p: &mut Self, tag: Option<String>, what: &str| -> PResult<usize> {
            match tag {
                Some(tag) => {
                    let t = p.bump();
                    basis.internal_index(&tag).ok_or_else(|| {
                        Self::error_at(&t, format!("undeclared internal tag `{tag}`"))
                    })
                }
                None if single_internal => Ok(0),
                None => Err(p.error(format!("{what} needs an internal tag"))),
            }
        };
        if let Some(s) = basis.spatial_index(&head) {
            let i = internal_index(self, next_ident.clone(), &format!("spatial tag `{head}`"))?;
            let text = next_ident.map_or(head.clone(), |t| format!("{head} {t}"));
            return Ok((
                expect_orbital(unit_orbital(basis, s * basis.internal_tags().len() + i)),
                text,
            ));
        }
        let k = *self
            .lookup
            .get(&head)
            .ok_or_else(|| Self::error_at(&head_token, format!("undeclared label `{head}`")))?;
        match self.definitions[k].1.clone() {
            Definition::Orbital(v) => Ok((v, head)),
            Definition::Spatial(amps) => {
                let i = internal_index(
                    self,
                    next_ident.clone(),
                    &format!("spatial orbital `{head}`"),
                )?;
                let n_int = basis.internal_tags().len();
                let mut full = vec![Complex64::default(); basis.dim()];
                for (s, a) in amps.iter().enumerate() {
                    full[s * n_int + i] = *a;
                }
                let text = next_ident.map_or(head.clone(), |t| format!("{head} {t}"));
                Ok((
                    SingleParticleVector::new(basis.clone(), full).expect("basis length"),
                    text,
                ))
            }
        }
    }

    fn state(&mut self, basis: &ModeBasis, statistics: Statistics) -> PResult<LfcState> {
        let mut state = LfcState::new(basis.clone(), statistics);
        if matches!(self.peek().kind, Kind::Number(x) if x == 0.0) && *self.peek_at(1) == Kind::Eof
        {
            self.bump();
            return Ok(state);
        }
        let mut first = true;
        while let Some(sign) = self.term_sign(first)? {
            first = false;
            let coefficient = sign * self.scalar_prefix()?;
            let ket_token = self.peek().clone();
            self.expect_sym('|')?;
            let (left, left_text) = self.sp_ref(basis)?;
            self.expect_sym(',')?;
            let (right, right_text) = self.sp_ref(basis)?;
            self.expect_sym('>')?;
            if statistics == Statistics::Fermion && left_text == right_text {
                self.warnings.push(format!(
                    "{}:{}: fermionic ket |{left_text}, {right_text}> vanishes",
                    ket_token.line, ket_token.column
                ));
            }
            state
                .push(
                    coefficient,
                    ProductKet::new(left, right).expect("shared basis"),
                )
                .expect("shared basis");
        }
        Ok(state)
    }
}

fn unit_orbital(basis: &ModeBasis, mode: usize) -> Definition {
    Definition::Orbital(SingleParticleVector::mode(basis.clone(), mode).expect("mode in range"))
}

fn expect_orbital(d: Definition) -> SingleParticleVector {
    match d {
        Definition::Orbital(v) => v,
        Definition::Spatial(_) => unreachable!("unit orbitals are full vectors"),
    }
}

fn scale_definition(d: Definition, c: Complex64) -> Definition {
    match d {
        Definition::Spatial(v) => Definition::Spatial(v.into_iter().map(|z| c * z).collect()),
        Definition::Orbital(v) => Definition::Orbital(v.scaled(c)),
    }
}

pub fn parse_document(text: &str) -> Result<Document, ParseError> {
    let parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
        definitions: Vec::new(),
        lookup: HashMap::new(),
        warnings: Vec::new(),
    };
    parser.document()
}

fn scalar_literal(c: Complex64) -> String {
    if c.im == 0.0 {
        fixed12(c.re)
    } else {
        let sign = if c.im < 0.0 { '-' } else { '+' };
        format!("({}{sign}{}i)", fixed12(c.re), fixed12(c.im.abs()))
    }
}

/// The `state …` line: the coefficient tensor expanded over basis kets in row-major order.
pub fn canonical_state_line(state: &LfcState) -> String {
    let basis = state.basis();
    let tensor: DMatrix<Complex64> = state.coefficient_tensor();
    let label = |k: usize| basis.modes()[k].to_string();
    let mut out = String::from("state");
    let mut first = true;
    for i in 0..basis.dim() {
        for j in 0..basis.dim() {
            let c = tensor[(i, j)];
            if c.norm() < ZERO_THRESHOLD {
                continue;
            }
            let literal = if c.im == 0.0 && c.re < 0.0 {
                if first {
                    format!(" -{}", fixed12(-c.re))
                } else {
                    format!(" - {}", fixed12(-c.re))
                }
            } else if first {
                format!(" {}", scalar_literal(c))
            } else {
                format!(" + {}", scalar_literal(c))
            };
            first = false;
            write!(out, "{literal}|{}, {}>", label(i), label(j)).expect("string write");
        }
    }
    if first {
        out.push_str(" 0");
    }
    out
}

/// A complete document for `state`: basis, statistics and the canonical state line.
pub fn canonical_print(state: &LfcState) -> String {
    let basis = state.basis();
    format!(
        "modes {{{}}} x {{{}}}\nstatistics {}\n{}\n",
        basis.spatial_tags().join(","),
        basis.internal_tags().join(","),
        state.statistics(),
        canonical_state_line(state)
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    const DOUBLE_WELL: &str = "\
# a^2 = 0.5, theta = 0, chi = 0.3
modes {L,R} x {up,dn}
statistics fermion
let B = sqrt(0.3)|L> + sqrt(0.7)|R>
state 0.6|L up, B dn> + 0.8*exp(i*0)|L dn, B up>
";

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn parses_double_well_document() {
        let doc = parse_document(DOUBLE_WELL).unwrap();
        assert_eq!(doc.statistics, Statistics::Fermion);
        assert_eq!(doc.basis.dim(), 4);
        assert_eq!(doc.definitions.len(), 1);
        let t = doc.state.coefficient_tensor();
        // |L up, B dn⟩ → √0.3 |L up, L dn⟩ + √0.7 |L up, R dn⟩
        assert!((t[(0, 1)] - c(0.6 * 0.3f64.sqrt(), 0.0)).norm() < 1e-15);
        assert!((t[(0, 3)] - c(0.6 * 0.7f64.sqrt(), 0.0)).norm() < 1e-15);
        assert!((t[(1, 0)] - c(0.8 * 0.3f64.sqrt(), 0.0)).norm() < 1e-15);
        assert!((t[(1, 2)] - c(0.8 * 0.7f64.sqrt(), 0.0)).norm() < 1e-15);
        assert!(doc.warnings.is_empty());
    }

    #[test]
    fn single_ket() {
        let doc =
            parse_document("modes {L,R} x {up,dn}\nstatistics boson\nstate |L up, R dn>").unwrap();
        assert_eq!(doc.state.terms().len(), 1);
        assert_eq!(doc.state.terms()[0].0, c(1.0, 0.0));
        assert_eq!(
            canonical_state_line(&doc.state),
            "state 1.00000000000|L up, R dn>"
        );
    }

    #[test]
    fn zero_state() {
        let doc = parse_document("modes {L} x {s}\nstatistics boson\nstate 0").unwrap();
        assert!(doc.state.terms().is_empty());
        assert_eq!(canonical_state_line(&doc.state), "state 0");
    }

    #[test]
    fn missing_statistics() {
        let err = parse_document("modes {L,R} x {up,dn}\nstate |L up, R dn>").unwrap_err();
        assert!(err.message.contains("missing `statistics`"), "{err}");
        assert_eq!((err.line, err.column), (2, 1));
    }

    #[test]
    fn duplicate_statistics() {
        let err =
            parse_document("modes {L} x {s}\nstatistics boson\nstatistics fermion\nstate |L, L>")
                .unwrap_err();
        assert!(err.message.contains("more than once"));
        assert_eq!(err.line, 3);
    }

    #[test]
    fn undeclared_labels() {
        let err = parse_document("modes {L,R} x {up,dn}\nstatistics boson\nstate |L up, M dn>")
            .unwrap_err();
        assert!(err.message.contains("undeclared label `M`"));
        assert_eq!((err.line, err.column), (3, 14));
        let err = parse_document("modes {L,R} x {up,dn}\nstatistics boson\nstate |L up, R sd>")
            .unwrap_err();
        assert!(err.message.contains("undeclared internal tag `sd`"));
    }

    #[test]
    fn spinless_kets_may_omit_internal_tag() {
        let doc =
            parse_document("modes {a,b} x {s}\nstatistics boson\nlet m = |a> - |b>\nstate |a, m>")
                .unwrap();
        let t = doc.state.coefficient_tensor();
        assert_eq!(t[(0, 0)], c(1.0, 0.0));
        assert_eq!(t[(0, 1)], c(-1.0, 0.0));
        let err =
            parse_document("modes {a} x {u,d}\nstatistics boson\nstate |a, a u>").unwrap_err();
        assert!(err.message.contains("needs an internal tag"));
    }

    #[test]
    fn orbital_definitions() {
        let text = "modes {L,R} x {up,dn}\nstatistics boson\n\
                    let u = (0.5+0.5i)|L up> + 0.5*exp(-i*1.2)|R dn>\nlet w = 2*u\nstate |w, L dn>";
        let doc = parse_document(text).unwrap();
        let t = doc.state.coefficient_tensor();
        assert!((t[(0, 1)] - c(1.0, 1.0)).norm() < 1e-15);
        assert!((t[(3, 1)] - Complex64::from_polar(1.0, -1.2)).norm() < 1e-15);
        let err = parse_document(
            "modes {L,R} x {up,dn}\nstatistics boson\nlet u = |L> + |R up>\nstate |u, u>",
        )
        .unwrap_err();
        assert!(err.message.contains("cannot mix"));
    }

    #[test]
    fn fermionic_identical_pair_warns() {
        let doc =
            parse_document("modes {L} x {u,d}\nstatistics fermion\nstate |L u, L u>").unwrap();
        assert_eq!(doc.warnings.len(), 1);
        assert!(crate::lfc::to_fock(&doc.state).unwrap().is_zero());
    }

    #[test]
    fn lexical_errors_carry_position() {
        let err = parse_document("modes {L} x {s}\nstatistics boson\nstate |L, L> ; ").unwrap_err();
        assert_eq!((err.line, err.column), (3, 14));
    }

    #[test]
    fn printer_signs_and_complex_literals() {
        let text = "modes {L,R} x {s}\nstatistics fermion\nstate -0.25|L, R> + (0.1-2e-5i)|R, L>";
        let doc = parse_document(text).unwrap();
        let printed = canonical_print(&doc.state);
        assert_eq!(
            printed,
            "modes {L,R} x {s}\nstatistics fermion\n\
             state -0.250000000000|L s, R s> + (0.100000000000-2.00000000000e-5i)|R s, L s>\n"
        );
        let again = parse_document(&printed).unwrap();
        assert_eq!(
            again.state.coefficient_tensor(),
            doc.state.coefficient_tensor()
        );
    }
}
