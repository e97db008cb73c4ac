//! Text syntax for differential polynomials.
//!
//! ```text
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := factor (['*'] factor)*
//! factor  := primary ('^' label)*
//! primary := number ['/' number] | var | '(' expr ')' | '[' expr (',' expr)+ ']'
//! label   := digits (power) | name | greek+ | '{' word '}'
//! word    := (name | greek | '1') (['^' digits] | '∘' | ' ')*
//! ```
//!
//! Variables are one letter followed by optional digits (`x`, `x3`, `y`), so `xy` is a
//! product. Labels name derivation generators (`eps`, `delta`, `delta2`, with the aliases
//! `ε`, `δ`, `δ2`). A word `{a b}` or `{a∘b}` is the operator `a∘b`, which applies `b`
//! first. A label on a bracketed or parenthesized group acts through the Leibniz rule.

use super::poly::{apply_word, DiffMonomial, DiffPolynomial};
use crate::error::{Error, Result};
use crate::exactla::Scalar;
use crate::fdalg::OperatorBasis;

/// Parses `text` with labels resolved against `w`.
///
/// Variable ids: when every variable is written `x<k>` they become `k − 1`; otherwise
/// they are numbered by first appearance.
pub fn parse_polynomial(text: &str, w: &OperatorBasis) -> Result<DiffPolynomial> {
    Parser::new(text, Some(w)).run()
}

/// Parses a polynomial without derivation labels.
pub fn parse_plain(text: &str) -> Result<DiffPolynomial> {
    Parser::new(text, None).run()
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
    w: Option<&'a OperatorBasis>,
    names: Vec<String>,
}

enum Item {
    Coef(Scalar),
    Poly(DiffPolynomial),
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, w: Option<&'a OperatorBasis>) -> Self {
        let chars = src
            .char_indices()
            .map(|(i, c)| match c {
                '−' | '–' => (i, '-'),
                '·' => (i, '*'),
                _ => (i, c),
            })
            .collect();
        Parser { src, chars, pos: 0, w, names: Vec::new() }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let byte = self.chars.get(self.pos).map_or(self.src.len(), |(i, _)| *i);
        Error::Parse { input: self.src.to_string(), pos: byte, msg: msg.into() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn run(mut self) -> Result<DiffPolynomial> {
        let p = self.expr()?;
        self.skip_ws();
        if self.peek().is_some() {
            return Err(self.err("unexpected character"));
        }
        let ids: Option<Vec<u32>> = self
            .names
            .iter()
            .map(|n| {
                n.strip_prefix('x')
                    .and_then(|d| d.parse::<u32>().ok())
                    .filter(|&k| k >= 1)
                    .map(|k| k - 1)
            })
            .collect();
        Ok(match ids {
            Some(ids) => p.rename(|v| ids[v as usize]),
            None => p,
        })
    }

    fn expr(&mut self) -> Result<DiffPolynomial> {
        let mut acc = DiffPolynomial::zero();
        let mut sign = Scalar::one();
        if self.eat('-') {
            sign = -Scalar::one();
        } else {
            self.eat('+');
        }
        loop {
            let t = self.term()?;
            acc = acc.add(&t.scale(&sign));
            if self.eat('+') {
                sign = Scalar::one();
            } else if self.eat('-') {
                sign = -Scalar::one();
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<DiffPolynomial> {
        let mut coef = Scalar::one();
        let mut poly: Option<DiffPolynomial> = None;
        loop {
            self.skip_ws();
            match self.factor()? {
                Item::Coef(c) => coef = &coef * &c,
                Item::Poly(p) => {
                    poly = Some(match poly {
                        None => p,
                        Some(q) => q.mul(&p),
                    })
                }
            }
            self.eat('*');
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_alphanumeric() || c == '(' || c == '[' => {}
                _ => break,
            }
        }
        poly.map(|p| p.scale(&coef)).ok_or_else(|| self.err("a term needs at least one variable"))
    }

    fn factor(&mut self) -> Result<Item> {
        let mut item = self.primary()?;
        while self.peek() == Some('^') {
            self.pos += 1;
            let p = match item {
                Item::Coef(_) => return Err(self.err("labels apply to polynomials only")),
                Item::Poly(p) => p,
            };
            item = Item::Poly(self.postfix(p)?);
        }
        Ok(item)
    }

    fn primary(&mut self) -> Result<Item> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let mut c = Scalar::from_big(n.into());
                if self.peek() == Some('/') {
                    self.pos += 1;
                    let d = self.integer()?;
                    if d == 0.into() {
                        return Err(self.err("zero denominator"));
                    }
                    c = c / Scalar::from_big(d.into());
                }
                Ok(Item::Coef(c))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                self.pos += 1;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().map(|(_, c)| c).collect();
                let id = match self.names.iter().position(|n| *n == name) {
                    Some(i) => i,
                    None => {
                        self.names.push(name);
                        self.names.len() - 1
                    }
                };
                Ok(Item::Poly(DiffPolynomial::var(id as u32)))
            }
            Some('(') => {
                self.pos += 1;
                let p = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(Item::Poly(p))
            }
            Some('[') => {
                self.pos += 1;
                let mut parts = vec![self.expr()?];
                while self.eat(',') {
                    parts.push(self.expr()?);
                }
                if !self.eat(']') {
                    return Err(self.err("expected ']'"));
                }
                if parts.len() < 2 {
                    return Err(self.err("a commutator needs at least two entries"));
                }
                Ok(Item::Poly(DiffPolynomial::left_normed(&parts)))
            }
            _ => Err(self.err("expected a variable, number, '(' or '['")),
        }
    }

    fn integer(&mut self) -> Result<num_bigint::BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let s: String = self.chars[start..self.pos].iter().map(|(_, c)| c).collect();
        s.parse().map_err(|_| self.err("bad integer"))
    }

    fn small_integer(&mut self) -> Result<usize> {
        let n = self.integer()?;
        usize::try_from(n).ok().filter(|&k| k <= 64).ok_or_else(|| self.err("exponent too large"))
    }

    /// Handles the text after `^`.
    fn postfix(&mut self, p: DiffPolynomial) -> Result<DiffPolynomial> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let k = self.small_integer()?;
                if k == 0 {
                    return Err(self.err("zero exponent"));
                }
                let mut out = p.clone();
                for _ in 1..k {
                    out = out.mul(&p);
                }
                Ok(out)
            }
            Some('{') => {
                self.pos += 1;
                let mut word: Vec<usize> = Vec::new();
                loop {
                    match self.peek() {
                        None => return Err(self.err("unclosed '{'")),
                        Some('}') => {
                            self.pos += 1;
                            break;
                        }
                        Some(c) if c.is_whitespace() || c == '∘' => self.pos += 1,
                        Some('1') => self.pos += 1,
                        Some('^') => {
                            self.pos += 1;
                            let k = self.small_integer()?;
                            let last = *word.last().ok_or_else(|| self.err("power of nothing"))?;
                            if k == 0 {
                                word.pop();
                            } else {
                                word.extend(std::iter::repeat(last).take(k - 1));
                            }
                        }
                        Some(_) => word.push(self.generator()?),
                    }
                }
                self.apply(&word, &p)
            }
            Some(c) if is_greek(c) => {
                let mut word = Vec::new();
                while self.peek().is_some_and(is_greek) {
                    word.push(self.generator()?);
                }
                self.apply(&word, &p)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let g = self.generator()?;
                self.apply(&[g], &p)
            }
            _ => Err(self.err("expected a label after '^'")),
        }
    }

    fn apply(&self, word: &[usize], p: &DiffPolynomial) -> Result<DiffPolynomial> {
        let w = self.w.ok_or_else(|| self.err("labels need an operator basis"))?;
        apply_word(word, p, w)
    }

    /// Reads one generator name (`eps`, `delta2`, `ε`, `δ2`) and resolves it.
    fn generator(&mut self) -> Result<usize> {
        let start = self.pos;
        let mut name = String::new();
        match self.peek() {
            Some('ε') => {
                self.pos += 1;
                name.push_str("eps");
            }
            Some('δ') => {
                self.pos += 1;
                name.push_str("delta");
            }
            Some(c) if c.is_ascii_alphabetic() => {
                while let Some(c) = self.peek().filter(|c| c.is_ascii_alphabetic() || *c == '_') {
                    name.push(c);
                    self.pos += 1;
                }
            }
            _ => return Err(self.err("expected a generator name")),
        }
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            name.push(c);
            self.pos += 1;
        }
        let w = self.w.ok_or_else(|| self.err("labels need an operator basis"))?;
        match w.generator_index(&name) {
            Some(g) => Ok(g),
            None => {
                self.pos = start;
                Err(self.err(format!("unknown derivation {name:?}")))
            }
        }
    }
}

fn is_greek(c: char) -> bool {
    c == 'ε' || c == 'δ'
}

/// Parses a `;`-separated list of polynomials.
pub fn parse_list(text: &str, w: &OperatorBasis) -> Result<Vec<DiffPolynomial>> {
    text.split(';').filter(|s| !s.trim().is_empty()).map(|s| parse_polynomial(s, w)).collect()
}

/// Convenience for tests and examples: a monomial from `(var, label)` pairs.
pub fn monomial(factors: &[(u32, usize)]) -> DiffMonomial {
    DiffMonomial::new(factors.iter().map(|&(v, l)| super::poly::Factor::new(v, l)).collect())
}
