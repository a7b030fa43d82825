//! Newick input and output with exact branch lengths.
//!
//! Leaves are decimal integers, internal nodes are unlabeled, and branch
//! lengths may be integers, fractions (`3/2`) or decimals. A missing branch
//! length means weight one. The root is a vertex of the unrooted tree; any
//! length written after the root is ignored.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tree::{TreeBuilder, VertexId, WeightedTree};

/// Parses a Newick string into an unrooted weighted tree.
pub fn parse_newick<S: Scalar>(text: &str) -> Result<WeightedTree<S>> {
    let mut parser = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        builder: TreeBuilder::new(),
    };
    parser.subtree(None)?;
    parser.skip_ws();
    if parser.peek() != Some(b';') {
        return Err(parser.error("expected ';'"));
    }
    parser.pos += 1;
    parser.skip_ws();
    if parser.pos != parser.bytes.len() {
        return Err(parser.error("trailing characters after ';'"));
    }
    parser.builder.build()
}

/// Serializes a tree rooted at the node next to its smallest leaf, with
/// children ordered by their smallest leaf label.
pub fn to_newick<S: Scalar>(tree: &WeightedTree<S>) -> String {
    let mut out = tree.canonical_form(true);
    out.push(';');
    out
}

/// Newick without branch lengths.
pub fn to_newick_topology<S: Scalar>(tree: &WeightedTree<S>) -> String {
    let mut out = tree.canonical_form(false);
    out.push(';');
    out
}

struct Parser<'a, S> {
    bytes: &'a [u8],
    pos: usize,
    builder: TreeBuilder<S>,
}

impl<S: Scalar> Parser<'_, S> {
    fn error(&self, message: &str) -> Error {
        Error::Parse(format!("newick: {message} at byte {}", self.pos))
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn token(&mut self) -> &str {
        let start = self.pos;
        while let Some(b) = self.peek() {
            if matches!(b, b',' | b')' | b'(' | b';' | b':') || b.is_ascii_whitespace() {
                break;
            }
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii slice")
    }

    fn label(&mut self) -> Result<Option<u32>> {
        self.skip_ws();
        let token = self.token().to_owned();
        if token.is_empty() {
            return Ok(None);
        }
        token
            .parse::<u32>()
            .map(Some)
            .map_err(|_| self.error(&format!("leaf label {token:?} is not a positive integer")))
    }

    fn length(&mut self) -> Result<Option<S>> {
        self.skip_ws();
        if self.peek() != Some(b':') {
            return Ok(None);
        }
        self.pos += 1;
        self.skip_ws();
        let token = self.token().to_owned();
        S::parse_value(&token)
            .map(Some)
            .map_err(|e| self.error(&format!("bad branch length {token:?}: {e}")))
    }

    /// Parses one subtree and attaches it below `parent`.
    fn subtree(&mut self, parent: Option<VertexId>) -> Result<VertexId> {
        self.skip_ws();
        let vertex;
        if self.peek() == Some(b'(') {
            self.pos += 1;
            vertex = self.builder.add_vertex();
            let mut children = 0;
            loop {
                self.subtree(Some(vertex))?;
                children += 1;
                self.skip_ws();
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.error("expected ',' or ')'")),
                }
            }
            if let Some(label) = self.label()? {
                // A labeled root with one child is the smaller leaf of a
                // two-leaf tree.
                if parent.is_some() || children != 1 {
                    return Err(self.error("internal nodes must be unlabeled"));
                }
                self.builder.label(vertex, label);
            }
        } else {
            let label = self
                .label()?
                .ok_or_else(|| self.error("expected a leaf label or '('"))?;
            vertex = self.builder.add_leaf(label);
        }
        let length = self.length()?;
        if let Some(parent) = parent {
            self.builder
                .add_edge(parent, vertex, length.unwrap_or_else(S::one));
        }
        Ok(vertex)
    }
}
