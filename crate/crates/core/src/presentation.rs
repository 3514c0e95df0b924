//! Finitely presented groups and words in their generators.
//!
//! Presentations are read from a small text grammar:
//!
//! ```text
//! gens: a b; rels: a^-1 b^2 a^-3 b^2, b a^-2 b a^-2 b^3 a^-2;
//! ```
//!
//! Parenthesised groups take exponents too (`(x1 x2)^3`). Exponents are
//! expanded to letters on parse (`a^-3` becomes three inverse letters).
//! Relators keep the letters exactly as written; call [`Word::reduce`]
//! when a freely reduced form is wanted.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A single letter `g^{±1}` of a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Self { generator, inverse }
    }

    pub fn exponent(&self) -> i32 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inverted(self) -> Self {
        Self { generator: self.generator, inverse: !self.inverse }
    }

    fn cancels(&self, other: &Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

/// A word in the generators, stored letter by letter.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Self { letters }
    }

    /// `g^e` expanded to `|e|` letters.
    pub fn power(generator: usize, exponent: i64) -> Self {
        let letter = Letter::new(generator, exponent < 0);
        Self { letters: vec![letter; exponent.unsigned_abs() as usize] }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn pow(&self, n: usize) -> Word {
        let mut letters = Vec::with_capacity(self.len() * n);
        for _ in 0..n {
            letters.extend_from_slice(&self.letters);
        }
        Word { letters }
    }

    /// Free reduction: repeatedly cancel adjacent `g g^-1` pairs.
    pub fn reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            match out.last() {
                Some(last) if last.cancels(&l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word { letters: out }
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].cancels(&w[1]))
    }

    /// Reverse the letters and flip every exponent.
    pub fn invert(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inverted()).collect() }
    }

    /// `u w u^-1`.
    pub fn conjugate_by(&self, u: &Word) -> Word {
        u.concat(self).concat(&u.invert())
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.generator).max()
    }

    /// Render with the given generator names, collapsing runs into powers.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }

    /// Runs of equal letters as `(generator, signed exponent)`.
    pub fn syllables(&self) -> Vec<(usize, i64)> {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for l in &self.letters {
            let e = l.exponent() as i64;
            match out.last_mut() {
                Some((g, acc)) if *g == l.generator && acc.signum() == e => *acc += e,
                _ => out.push((l.generator, e)),
            }
        }
        out
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        for (i, (g, e)) in self.word.syllables().into_iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let name = self.names.get(g).map(String::as_str).unwrap_or("?");
            if e == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Generators and relators of a finitely presented group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    generators: Vec<String>,
    relators: Vec<Word>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("undeclared generator `{0}`")]
    UndeclaredGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("generator index {0} out of range")]
    GeneratorOutOfRange(usize),
}

impl Presentation {
    pub fn new(generators: Vec<String>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        for (i, g) in generators.iter().enumerate() {
            if g.is_empty() || !is_ident(g) {
                return Err(PresentationError::Syntax {
                    line: 1,
                    column: 1,
                    message: format!("invalid generator name `{g}`"),
                });
            }
            if generators[..i].contains(g) {
                return Err(PresentationError::DuplicateGenerator(g.clone()));
            }
        }
        for r in &relators {
            if let Some(m) = r.max_generator() {
                if m >= generators.len() {
                    return Err(PresentationError::GeneratorOutOfRange(m));
                }
            }
        }
        Ok(Self { generators, relators })
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    /// Parse a word such as `x1 x2^-1 x3^2` against this presentation's
    /// generators. The empty string and `1` denote the identity.
    pub fn parse_word(&self, text: &str) -> Result<Word, PresentationError> {
        if text.trim() == "1" && self.generator_index("1").is_none() {
            return Ok(Word::empty());
        }
        let mut p = Parser::new(text);
        p.skip_ws();
        if p.at_end() {
            return Ok(Word::empty());
        }
        let w = p.relator(&self.generators)?;
        p.skip_ws();
        if !p.at_end() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(w)
    }
}

impl std::str::FromStr for Presentation {
    type Err = PresentationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_presentation(s)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gens: {};", self.generators.join(" "))?;
        if !self.relators.is_empty() {
            write!(f, " rels: ")?;
            for (i, r) in self.relators.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", r.display_with(&self.generators))?;
            }
            write!(f, ";")?;
        }
        Ok(())
    }
}

/// Parse `gens: ...; [rels: ...;]`.
pub fn parse_presentation(text: &str) -> Result<Presentation, PresentationError> {
    let mut p = Parser::new(text);
    p.keyword("gens:")?;
    let mut generators: Vec<String> = Vec::new();
    loop {
        p.skip_ws();
        if p.peek() == Some(';') {
            p.bump();
            break;
        }
        let name = p.ident()?;
        if generators.contains(&name) {
            return Err(PresentationError::DuplicateGenerator(name));
        }
        generators.push(name);
    }
    if generators.is_empty() {
        return Err(p.error("expected at least one generator"));
    }
    let mut relators = Vec::new();
    p.skip_ws();
    if !p.at_end() {
        p.keyword("rels:")?;
        loop {
            relators.push(p.relator(&generators)?);
            p.skip_ws();
            match p.peek() {
                Some(',') => p.bump(),
                Some(';') => {
                    p.bump();
                    break;
                }
                _ => return Err(p.error("expected `,` or `;`")),
            }
        }
        p.skip_ws();
        if !p.at_end() {
            return Err(p.error("unexpected trailing input"));
        }
    }
    Presentation::new(generators, relators)
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) {
        if let Some(c) = self.peek() {
            self.pos += c.len_utf8();
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn error(&self, message: &str) -> PresentationError {
        let before = &self.src[..self.pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        PresentationError::Syntax { line, column, message: message.to_string() }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), PresentationError> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(kw) {
            self.pos += kw.len();
            Ok(())
        } else {
            Err(self.error(&format!("expected `{kw}`")))
        }
    }

    fn ident(&mut self) -> Result<String, PresentationError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => self.bump(),
            _ => return Err(self.error("expected identifier")),
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.bump();
        }
        Ok(self.src[start..self.pos].to_string())
    }

    fn signed_integer(&mut self) -> Result<i64, PresentationError> {
        let start = self.pos;
        if matches!(self.peek(), Some('-') | Some('+')) {
            self.bump();
        }
        let digits = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if self.pos == digits {
            self.pos = start;
            return Err(self.error("expected integer exponent"));
        }
        self.src[start..self.pos].parse().map_err(|_| {
            self.pos = start;
            self.error("exponent out of range")
        })
    }

    /// `term+`, stopping at `,`, `;` or end of input.
    fn relator(&mut self, generators: &[String]) -> Result<Word, PresentationError> {
        let w = self.sequence(generators)?;
        if self.peek() == Some(')') {
            return Err(self.error("unmatched `)`"));
        }
        Ok(w)
    }

    /// `term+` where `term := ident ["^" int] | "(" term+ ")" ["^" int]`.
    fn sequence(&mut self, generators: &[String]) -> Result<Word, PresentationError> {
        let mut letters = Vec::new();
        let mut terms = 0;
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some(',') | Some(';') | Some(')') => break,
                _ => {}
            }
            let base = if self.peek() == Some('(') {
                self.bump();
                let inner = self.sequence(generators)?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.bump();
                inner
            } else {
                let at = self.pos;
                let name = self.ident()?;
                let g = generators.iter().position(|x| *x == name).ok_or_else(|| {
                    self.pos = at;
                    PresentationError::UndeclaredGenerator(name.clone())
                })?;
                Word::power(g, 1)
            };
            let mut e = 1i64;
            if self.peek() == Some('^') {
                self.bump();
                e = self.signed_integer()?;
            }
            let part = if e < 0 { base.invert() } else { base };
            letters.extend(part.pow(e.unsigned_abs() as usize).letters);
            terms += 1;
        }
        if terms == 0 {
            return Err(self.error("expected a relator"));
        }
        Ok(Word { letters })
    }
}
