//! Operations, operation sequences and their one-line text form.
//!
//! The text form is whitespace separated. The four control operations are
//! written by name (`SRC_POP`, `SET_MARKER`, `JMP_FWD`, `JMP_BWD`); any other
//! token is an `INSERT` of that token. `POP_SRC` is read as `SRC_POP`.
//! A target token that collides with a reserved name (or itself starts with
//! the escape character) is written with one leading escape character.

use std::fmt;

use thiserror::Error;

use crate::token::{Token, TokenError};

pub const SRC_POP: &str = "SRC_POP";
pub const POP_SRC_ALIAS: &str = "POP_SRC";
pub const SET_MARKER: &str = "SET_MARKER";
pub const JMP_FWD: &str = "JMP_FWD";
pub const JMP_BWD: &str = "JMP_BWD";

const RESERVED: [&str; 5] = [SRC_POP, POP_SRC_ALIAS, SET_MARKER, JMP_FWD, JMP_BWD];

pub const DEFAULT_ESCAPE: char = '\\';

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpKind {
    SrcPop,
    SetMarker,
    JmpFwd,
    JmpBwd,
    Insert,
}

impl OpKind {
    pub const ALL: [OpKind; 5] = [
        OpKind::SrcPop,
        OpKind::SetMarker,
        OpKind::JmpFwd,
        OpKind::JmpBwd,
        OpKind::Insert,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OpKind::SrcPop => SRC_POP,
            OpKind::SetMarker => SET_MARKER,
            OpKind::JmpFwd => JMP_FWD,
            OpKind::JmpBwd => JMP_BWD,
            OpKind::Insert => "INSERT",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Operation {
    SrcPop,
    SetMarker,
    JmpFwd,
    JmpBwd,
    Insert(Token),
}

impl Operation {
    pub fn kind(&self) -> OpKind {
        match self {
            Operation::SrcPop => OpKind::SrcPop,
            Operation::SetMarker => OpKind::SetMarker,
            Operation::JmpFwd => OpKind::JmpFwd,
            Operation::JmpBwd => OpKind::JmpBwd,
            Operation::Insert(_) => OpKind::Insert,
        }
    }

    pub fn insert(text: &str) -> Result<Self, TokenError> {
        Token::new(text).map(Operation::Insert)
    }

    pub fn operand(&self) -> Option<&Token> {
        match self {
            Operation::Insert(t) => Some(t),
            _ => None,
        }
    }
}

/// An ordered list of operations. The source length it is read against is
/// supplied separately by whoever compiles or validates it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct OperationSequence {
    ops: Vec<Operation>,
}

impl OperationSequence {
    pub fn new(ops: Vec<Operation>) -> Self {
        OperationSequence { ops }
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    pub fn into_ops(self) -> Vec<Operation> {
        self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Operation> {
        self.ops.iter()
    }

    pub fn count(&self, kind: OpKind) -> usize {
        self.ops.iter().filter(|op| op.kind() == kind).count()
    }
}

impl From<Vec<Operation>> for OperationSequence {
    fn from(ops: Vec<Operation>) -> Self {
        OperationSequence { ops }
    }
}

impl FromIterator<Operation> for OperationSequence {
    fn from_iter<I: IntoIterator<Item = Operation>>(iter: I) -> Self {
        OperationSequence {
            ops: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a OperationSequence {
    type Item = &'a Operation;
    type IntoIter = std::slice::Iter<'a, Operation>;

    fn into_iter(self) -> Self::IntoIter {
        self.ops.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceParseError {
    #[error("empty sequence")]
    Empty,
    #[error("bare escape character at token {0}")]
    BareEscape(usize),
}

/// Reads and writes the one-line text form with a configurable escape
/// character.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SequenceCodec {
    escape: char,
}

impl Default for SequenceCodec {
    fn default() -> Self {
        SequenceCodec {
            escape: DEFAULT_ESCAPE,
        }
    }
}

impl SequenceCodec {
    pub fn new(escape: char) -> Self {
        SequenceCodec { escape }
    }

    pub fn escape(&self) -> char {
        self.escape
    }

    pub fn parse_op(&self, word: &str) -> Option<Operation> {
        if let Some(rest) = word.strip_prefix(self.escape) {
            return Token::new(rest).ok().map(Operation::Insert);
        }
        Some(match word {
            SRC_POP | POP_SRC_ALIAS => Operation::SrcPop,
            SET_MARKER => Operation::SetMarker,
            JMP_FWD => Operation::JmpFwd,
            JMP_BWD => Operation::JmpBwd,
            other => Operation::Insert(Token::new(other).ok()?),
        })
    }

    /// Parses whitespace-separated operations. An empty (or all-whitespace)
    /// line is an error.
    pub fn parse(&self, line: &str) -> Result<OperationSequence, SequenceParseError> {
        let seq = self.parse_prefix(line)?;
        if seq.is_empty() {
            return Err(SequenceParseError::Empty);
        }
        Ok(seq)
    }

    /// Like [`parse`](Self::parse) but accepts the empty line.
    pub fn parse_prefix(&self, line: &str) -> Result<OperationSequence, SequenceParseError> {
        line.split_whitespace()
            .enumerate()
            .map(|(i, w)| {
                self.parse_op(w)
                    .ok_or(SequenceParseError::BareEscape(i + 1))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(OperationSequence::new)
    }

    pub fn format_op(&self, op: &Operation, out: &mut String) {
        match op {
            Operation::Insert(t) => {
                let text = t.as_str();
                if RESERVED.contains(&text) || text.starts_with(self.escape) {
                    out.push(self.escape);
                }
                out.push_str(text);
            }
            other => out.push_str(other.kind().name()),
        }
    }

    pub fn format(&self, seq: &OperationSequence) -> String {
        let mut out = String::new();
        for (i, op) in seq.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            self.format_op(op, &mut out);
        }
        out
    }
}

pub fn parse_sequence(line: &str) -> Result<OperationSequence, SequenceParseError> {
    SequenceCodec::default().parse(line)
}

pub fn format_sequence(seq: &OperationSequence) -> String {
    SequenceCodec::default().format(seq)
}

impl fmt::Display for OperationSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_sequence(self))
    }
}
