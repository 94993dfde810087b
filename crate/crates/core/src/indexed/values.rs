//! Concrete frames, layers and paintings over finite fibres.
//!
//! Dimensions are not stored in the values: a frame of `(n, p)` is known to
//! have `p` layers, a layer of `(n, k)` has one painting of `(n-1, k)` per
//! direction, and a painting of `(n, p)` has the layers `p .. n-1` followed by
//! a cell, given as an index into the fibre over the full frame it completes.
//!
//! Canonical keys are s-expressions:
//! frame `(L0 L1 ..)`, layer `[P0 P1 ..]`, painting `i` when it has no layers
//! and `(L .. i)` otherwise. Separators are single spaces.

use std::fmt;
use std::str::FromStr;

use crate::error::IndexedError;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Frame {
    pub layers: Vec<Layer>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Layer {
    pub components: Vec<Painting>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Painting {
    pub layers: Vec<Layer>,
    pub cell: usize,
}

impl Frame {
    /// The frame of `(n, 0)`.
    pub fn unit() -> Self {
        Frame { layers: Vec::new() }
    }

    /// Number of layers, i.e. `p`.
    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_unit(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_unit()
    }

    /// The frame of the first `k` layers.
    pub fn prefix(&self, k: usize) -> Frame {
        Frame { layers: self.layers[..k].to_vec() }
    }

    /// `(d, l)`.
    pub fn extend(&self, l: Layer) -> Frame {
        let mut layers = self.layers.clone();
        layers.push(l);
        Frame { layers }
    }

    pub fn key(&self) -> String {
        self.to_string()
    }

    /// Checks that `self` has the tree shape of a frame of `(n, p)`.
    pub fn check_shape(&self, nu: usize, n: usize, p: usize) -> Result<(), IndexedError> {
        if p > n || self.layers.len() != p {
            return Err(IndexedError::Malformed(format!("frame {self} is not of shape ({n}, {p})")));
        }
        for (k, l) in self.layers.iter().enumerate() {
            l.check_shape(nu, n, k)?;
        }
        Ok(())
    }
}

impl Layer {
    /// Checks that `self` has the tree shape of a layer of `(n, k)`.
    pub fn check_shape(&self, nu: usize, n: usize, k: usize) -> Result<(), IndexedError> {
        if k >= n || self.components.len() != nu {
            return Err(IndexedError::Malformed(format!("layer {self} is not of shape ({n}, {k})")));
        }
        for c in &self.components {
            c.check_shape(nu, n - 1, k)?;
        }
        Ok(())
    }
}

impl Painting {
    pub fn cell(cell: usize) -> Self {
        Painting { layers: Vec::new(), cell }
    }

    /// The painting of `(n, p+1)` left after removing the first layer.
    pub fn tail(&self) -> Painting {
        Painting { layers: self.layers[1..].to_vec(), cell: self.cell }
    }

    /// Checks that `self` has the tree shape of a painting of `(n, p)`.
    pub fn check_shape(&self, nu: usize, n: usize, p: usize) -> Result<(), IndexedError> {
        if p > n || self.layers.len() != n - p {
            return Err(IndexedError::Malformed(format!("painting {self} is not of shape ({n}, {p})")));
        }
        for (j, l) in self.layers.iter().enumerate() {
            l.check_shape(nu, n, p + j)?;
        }
        Ok(())
    }
}

fn write_seq<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        write_seq(f, &self.layers)?;
        f.write_str(")")
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        write_seq(f, &self.components)?;
        f.write_str("]")
    }
}

impl fmt::Display for Painting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.layers.is_empty() {
            return write!(f, "{}", self.cell);
        }
        f.write_str("(")?;
        write_seq(f, &self.layers)?;
        write!(f, " {})", self.cell)
    }
}

/// Canonical key of any of the three value kinds.
pub fn serialize_frame(d: &Frame) -> String {
    d.to_string()
}

pub fn serialize_layer(l: &Layer) -> String {
    l.to_string()
}

pub fn serialize_painting(c: &Painting) -> String {
    c.to_string()
}

struct KeyParser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> KeyParser<'a> {
    fn new(src: &'a str) -> Self {
        KeyParser { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().map_or(0, char::len_utf8);
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn err(&self, msg: &str) -> IndexedError {
        IndexedError::Malformed(format!("key `{}` at offset {}: {msg}", self.src, self.pos))
    }

    fn expect(&mut self, ch: char) -> Result<(), IndexedError> {
        if self.peek() == Some(ch) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{ch}`")))
        }
    }

    fn number(&mut self) -> Result<usize, IndexedError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        if len == 0 {
            return Err(self.err("expected a cell index"));
        }
        let n = rest[..len].parse().map_err(|_| self.err("cell index too large"))?;
        self.pos += len;
        Ok(n)
    }

    fn frame(&mut self) -> Result<Frame, IndexedError> {
        self.expect('(')?;
        let mut layers = Vec::new();
        while self.peek() == Some('[') {
            layers.push(self.layer()?);
        }
        self.expect(')')?;
        Ok(Frame { layers })
    }

    fn layer(&mut self) -> Result<Layer, IndexedError> {
        self.expect('[')?;
        let mut components = Vec::new();
        while matches!(self.peek(), Some(c) if c == '(' || c.is_ascii_digit()) {
            components.push(self.painting()?);
        }
        self.expect(']')?;
        Ok(Layer { components })
    }

    fn painting(&mut self) -> Result<Painting, IndexedError> {
        if self.peek() != Some('(') {
            return Ok(Painting::cell(self.number()?));
        }
        self.expect('(')?;
        let mut layers = Vec::new();
        while self.peek() == Some('[') {
            layers.push(self.layer()?);
        }
        if layers.is_empty() {
            return Err(self.err("a painting with a cell only is written without parentheses"));
        }
        let cell = self.number()?;
        self.expect(')')?;
        Ok(Painting { layers, cell })
    }

    fn finish<T>(mut self, value: T) -> Result<T, IndexedError> {
        if self.peek().is_some() {
            return Err(self.err("trailing input"));
        }
        Ok(value)
    }
}

pub fn parse_frame(text: &str) -> Result<Frame, IndexedError> {
    let mut p = KeyParser::new(text);
    let d = p.frame()?;
    p.finish(d)
}

pub fn parse_layer(text: &str) -> Result<Layer, IndexedError> {
    let mut p = KeyParser::new(text);
    let l = p.layer()?;
    p.finish(l)
}

pub fn parse_painting(text: &str) -> Result<Painting, IndexedError> {
    let mut p = KeyParser::new(text);
    let c = p.painting()?;
    p.finish(c)
}

impl FromStr for Frame {
    type Err = IndexedError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_frame(s)
    }
}

impl FromStr for Painting {
    type Err = IndexedError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_painting(s)
    }
}

impl FromStr for Layer {
    type Err = IndexedError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_layer(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge(a: usize, b: usize, e: usize) -> Painting {
        Painting { layers: vec![Layer { components: vec![Painting::cell(a), Painting::cell(b)] }], cell: e }
    }

    #[test]
    fn unit_key() {
        assert_eq!(Frame::unit().key(), "()");
        assert_eq!(parse_frame("()").unwrap(), Frame::unit());
    }

    #[test]
    fn square_frame_key() {
        let d = Frame {
            layers: vec![
                Layer { components: vec![edge(0, 1, 0), edge(2, 3, 0)] },
                Layer { components: vec![Painting::cell(0), Painting::cell(0)] },
            ],
        };
        let key = d.key();
        assert_eq!(key, "([([0 1] 0) ([2 3] 0)] [0 0])");
        assert_eq!(parse_frame(&key).unwrap(), d);
        d.check_shape(2, 2, 2).unwrap();
        assert!(d.check_shape(2, 3, 2).is_err());
        assert!(d.check_shape(3, 2, 2).is_err());
    }

    #[test]
    fn parse_errors() {
        assert!(parse_frame("(").is_err());
        assert!(parse_frame("() x").is_err());
        assert!(parse_painting("(3)").is_err());
        assert!(parse_layer("[0 (1)]").is_err());
        assert_eq!(parse_painting(" ( [ 1  2 ]  7 ) ").unwrap(), edge(1, 2, 7));
    }
}
