//! Element grammar:
//!
//! ```text
//! element  := ['+'|'-'] term (('+'|'-') term)*
//! term     := rational monomial | rational | monomial
//! monomial := factor ('.' factor)*
//! factor   := id '*'?
//! ```
//!
//! A bare rational `q` stands for `q·Σ_v v`. Adjacent real edges and adjacent
//! ghost edges must compose, and `e.f*` needs `r(e) = r(f)`; every other
//! adjacency is evaluated through the relations, so `a*.b` may be zero.

use num_rational::BigRational;
use num_traits::One;

use super::{multiply, AlgebraError, Element, Generator};
use crate::graph::{Graph, Item};
use crate::qfield::parse_rational;

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        self.take_while(char::is_whitespace);
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn err(&self, message: impl Into<String>) -> AlgebraError {
        AlgebraError::Syntax { pos: self.pos, message: message.into() }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek().filter(|&c| f(c)) {
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn rational(&mut self) -> Result<Option<BigRational>, AlgebraError> {
        if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
            return Ok(None);
        }
        let start = self.pos;
        let text = self.take_while(|c| c.is_ascii_digit() || c == '/');
        parse_rational(text)
            .map(Some)
            .map_err(|_| AlgebraError::Syntax { pos: start, message: format!("bad rational '{text}'") })
    }

    /// `id '*'?`, where the vertex id `*` is accepted at factor start.
    fn factor(&mut self, g: &Graph) -> Result<Generator, AlgebraError> {
        let name = if self.peek() == Some('*') {
            self.pos += 1;
            "*"
        } else {
            let n = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
            if n.is_empty() || n.starts_with(|c: char| c.is_ascii_digit()) {
                return Err(self.err("expected an id"));
            }
            n
        };
        let starred = self.peek() == Some('*');
        if starred {
            self.pos += 1;
        }
        match (g.lookup(name), starred) {
            (None, _) => Err(AlgebraError::UnknownId(name.to_string())),
            (Some(Item::Vertex(_)), true) => Err(self.err(format!("vertex '{name}' cannot be starred"))),
            (Some(Item::Vertex(v)), false) => Ok(Generator::Vertex(v)),
            (Some(Item::Edge(e)), false) => Ok(Generator::Edge(e)),
            (Some(Item::Edge(e)), true) => Ok(Generator::Ghost(e)),
        }
    }

    fn monomial(&mut self, g: &Graph) -> Result<Vec<Generator>, AlgebraError> {
        let mut out = vec![self.factor(g)?];
        loop {
            self.skip_ws();
            if self.peek() != Some('.') {
                return Ok(out);
            }
            self.pos += 1;
            self.skip_ws();
            out.push(self.factor(g)?);
        }
    }
}

fn check_adjacent(g: &Graph, a: Generator, b: Generator) -> Result<(), AlgebraError> {
    use Generator::*;
    let pair = || format!("{}.{}", a.name(g), b.name(g));
    match (a, b) {
        (Edge(e), Edge(f)) if g.rng(e) != g.src(f) => Err(AlgebraError::NotComposable(pair())),
        (Ghost(e), Ghost(f)) if g.src(e) != g.rng(f) => Err(AlgebraError::NotComposable(pair())),
        (Edge(e), Ghost(f)) if g.rng(e) != g.rng(f) => Err(AlgebraError::RangeMismatch(pair())),
        _ => Ok(()),
    }
}

fn product(g: &Graph, factors: &[Generator]) -> Result<Element, AlgebraError> {
    for w in factors.windows(2) {
        check_adjacent(g, w[0], w[1])?;
    }
    let mut it = factors.iter();
    let first = it.next().expect("nonempty monomial").element(g);
    Ok(it.fold(first, |acc, f| multiply(&acc, &f.element(g))))
}

pub fn parse_element(g: &Graph, text: &str) -> Result<Element, AlgebraError> {
    let mut lx = Lexer { src: text, pos: 0 };
    let mut out = Element::zero();
    lx.skip_ws();
    if lx.peek().is_none() {
        return Err(lx.err("empty element"));
    }
    let mut first = true;
    loop {
        lx.skip_ws();
        let mut sign = BigRational::one();
        match lx.peek() {
            Some('+') => lx.pos += 1,
            Some('-') => {
                lx.pos += 1;
                sign = -sign;
            }
            None => break,
            _ if first => {}
            _ => return Err(lx.err("expected '+' or '-'")),
        }
        first = false;
        lx.skip_ws();
        let coeff = lx.rational()?;
        lx.skip_ws();
        let starts_factor = lx.peek().is_some_and(|c| c == '*' || c == '_' || c.is_ascii_alphabetic());
        let term = match (coeff, starts_factor) {
            (c, true) => product(g, &lx.monomial(g)?)?.scale(&(sign * c.unwrap_or_else(BigRational::one))),
            (Some(c), false) => Element::unit(g).scale(&(sign * c)),
            (None, false) => return Err(lx.err("expected a term")),
        };
        out = out + term;
    }
    Ok(out)
}
