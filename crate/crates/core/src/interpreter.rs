//! Executes an operation sequence against a source sentence.
//!
//! The read head starts on source position 1 and only moves right, one
//! position per `SRC_POP`. The target buffer starts as the single marker `X1`
//! with the write head on it. `INSERT` and `SET_MARKER` both place a symbol
//! immediately left of the write-head marker; the head stays put. Jumps move
//! the head to the adjacent marker, skipping words.

use std::fmt;

use thiserror::Error;

use crate::alignment::Alignment;
use crate::automaton::Violation;
use crate::sequence::{OpKind, Operation, OperationSequence};
use crate::token::{Sentence, Side, Token};

/// Marker `X_n`. `X1` is the initial marker; the marker made by the i-th
/// `SET_MARKER` is `X_{i+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MarkerId(usize);

impl MarkerId {
    pub const INITIAL: MarkerId = MarkerId(1);

    pub fn new(index: usize) -> Option<Self> {
        (index >= 1).then_some(MarkerId(index))
    }

    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for MarkerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Symbol {
    /// A target word and the source position the read head was on when it
    /// was inserted.
    Word {
        token: Token,
        source: usize,
    },
    Marker(MarkerId),
}

impl Symbol {
    pub fn as_marker(&self) -> Option<MarkerId> {
        match self {
            Symbol::Marker(m) => Some(*m),
            Symbol::Word { .. } => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Word { token, .. } => f.write_str(token.as_str()),
            Symbol::Marker(m) => m.fmt(f),
        }
    }
}

/// The compiled target: words and markers, with the write head on one marker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetBuffer {
    symbols: Vec<Symbol>,
    write_head: MarkerId,
}

impl Default for TargetBuffer {
    fn default() -> Self {
        TargetBuffer {
            symbols: vec![Symbol::Marker(MarkerId::INITIAL)],
            write_head: MarkerId::INITIAL,
        }
    }
}

impl TargetBuffer {
    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn write_head(&self) -> MarkerId {
        self.write_head
    }

    fn head_pos(&self) -> usize {
        self.symbols
            .iter()
            .position(|s| *s == Symbol::Marker(self.write_head))
            .expect("write head refers to a marker in the buffer")
    }

    fn insert_at_head(&mut self, symbol: Symbol) {
        let pos = self.head_pos();
        self.symbols.insert(pos, symbol);
    }

    pub fn marker_count(&self) -> usize {
        self.symbols
            .iter()
            .filter(|s| s.as_marker().is_some())
            .count()
    }

    /// Index of the write-head marker among all markers, left to right.
    pub fn head_index(&self) -> usize {
        self.symbols[..self.head_pos()]
            .iter()
            .filter(|s| s.as_marker().is_some())
            .count()
    }

    pub fn marker_left_of_head(&self) -> Option<MarkerId> {
        self.symbols[..self.head_pos()]
            .iter()
            .rev()
            .find_map(Symbol::as_marker)
    }

    pub fn marker_right_of_head(&self) -> Option<MarkerId> {
        self.symbols[self.head_pos() + 1..]
            .iter()
            .find_map(Symbol::as_marker)
    }

    /// Space-separated rendering with markers as `X1`, `X2`, ...
    pub fn render(&self) -> String {
        render_symbols(&self.symbols)
    }
}

fn render_symbols(symbols: &[Symbol]) -> String {
    symbols
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TreeNode {
    Leaf(Token),
    Marker(MarkerId),
}

/// Each marker is a node whose children are the symbols inserted at it, in
/// insertion order. The root is `X1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkerTree {
    children: Vec<Vec<TreeNode>>,
}

impl Default for MarkerTree {
    fn default() -> Self {
        MarkerTree {
            children: vec![Vec::new()],
        }
    }
}

impl MarkerTree {
    pub fn root(&self) -> MarkerId {
        MarkerId::INITIAL
    }

    pub fn marker_count(&self) -> usize {
        self.children.len()
    }

    pub fn children(&self, marker: MarkerId) -> &[TreeNode] {
        &self.children[marker.index() - 1]
    }

    fn push(&mut self, parent: MarkerId, node: TreeNode) {
        if let TreeNode::Marker(m) = node {
            debug_assert_eq!(m.index(), self.children.len() + 1);
            self.children.push(Vec::new());
        }
        self.children[parent.index() - 1].push(node);
    }

    /// Left-to-right leaves.
    pub fn flatten(&self) -> Vec<Token> {
        let mut out = Vec::new();
        let mut stack = vec![self.children(self.root()).iter()];
        while let Some(top) = stack.last_mut() {
            match top.next() {
                Some(TreeNode::Leaf(t)) => out.push(t.clone()),
                Some(TreeNode::Marker(m)) => stack.push(self.children(*m).iter()),
                None => {
                    stack.pop();
                }
            }
        }
        out
    }

    /// Single-line bracketed form, e.g. `(X1 (X2 (X3 stable operation) of) 2000 hr)`.
    pub fn to_bracketed(&self) -> String {
        let mut out = String::new();
        self.write_node(self.root(), &mut out);
        out
    }

    fn write_node(&self, marker: MarkerId, out: &mut String) {
        out.push('(');
        out.push_str(&marker.to_string());
        for child in self.children(marker) {
            out.push(' ');
            match child {
                TreeNode::Leaf(t) => out.push_str(t.as_str()),
                TreeNode::Marker(m) => self.write_node(*m, out),
            }
        }
        out.push(')');
    }
}

impl fmt::Display for MarkerTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bracketed())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecState {
    source_len: usize,
    pops: usize,
    buffer: TargetBuffer,
    tree: MarkerTree,
}

impl ExecState {
    pub fn new(source_len: usize) -> Self {
        assert!(source_len >= 1, "source sentence must be non-empty");
        ExecState {
            source_len,
            pops: 0,
            buffer: TargetBuffer::default(),
            tree: MarkerTree::default(),
        }
    }

    pub fn source_len(&self) -> usize {
        self.source_len
    }

    pub fn pops(&self) -> usize {
        self.pops
    }

    /// Source position under the read head (1-based). Saturates at the last
    /// source position.
    pub fn read_pos(&self) -> usize {
        (self.pops + 1).min(self.source_len)
    }

    pub fn is_complete(&self) -> bool {
        self.pops == self.source_len
    }

    pub fn buffer(&self) -> &TargetBuffer {
        &self.buffer
    }

    pub fn tree(&self) -> &MarkerTree {
        &self.tree
    }

    fn next_marker(&self) -> MarkerId {
        MarkerId(self.tree.marker_count() + 1)
    }

    /// `(pops, markers, head_idx)`, the part of the state the constraint
    /// automaton tracks.
    pub fn projection(&self) -> (usize, usize, usize) {
        (
            self.pops,
            self.buffer.marker_count(),
            self.buffer.head_index(),
        )
    }

    /// Applies one operation. Any operation after the last `SRC_POP` is
    /// rejected as [`Violation::TooManySrcPop`]; a jump past the first or last
    /// marker as [`Violation::WriteHeadOutOfRange`].
    pub fn step(mut self, op: &Operation) -> Result<Self, Violation> {
        if self.is_complete() {
            return Err(Violation::TooManySrcPop);
        }
        let head = self.buffer.write_head;
        match op {
            Operation::SrcPop => self.pops += 1,
            Operation::SetMarker => {
                let marker = self.next_marker();
                self.buffer.insert_at_head(Symbol::Marker(marker));
                self.tree.push(head, TreeNode::Marker(marker));
            }
            Operation::JmpFwd => {
                self.buffer.write_head = self
                    .buffer
                    .marker_right_of_head()
                    .ok_or(Violation::WriteHeadOutOfRange)?;
            }
            Operation::JmpBwd => {
                self.buffer.write_head = self
                    .buffer
                    .marker_left_of_head()
                    .ok_or(Violation::WriteHeadOutOfRange)?;
            }
            Operation::Insert(token) => {
                let source = self.read_pos();
                self.buffer.insert_at_head(Symbol::Word {
                    token: token.clone(),
                    source,
                });
                self.tree.push(head, TreeNode::Leaf(token.clone()));
            }
        }
        Ok(self)
    }

    fn finish(self) -> CompilationResult {
        let mut tokens = Vec::new();
        let mut alignment = Alignment::new();
        for sym in &self.buffer.symbols {
            if let Symbol::Word { token, source } = sym {
                tokens.push(token.clone());
                alignment
                    .link(tokens.len(), *source)
                    .expect("fresh target positions");
            }
        }
        CompilationResult {
            compiled: self.buffer.symbols,
            plain: Sentence::new(tokens, Side::Target),
            alignment,
            tree: self.tree,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("empty source sentence")]
    EmptySource,
    #[error(transparent)]
    Invalid(#[from] Violation),
}

impl CompileError {
    pub fn violation(&self) -> Option<Violation> {
        match self {
            CompileError::Invalid(v) => Some(*v),
            CompileError::EmptySource => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompilationResult {
    pub compiled: Vec<Symbol>,
    pub plain: Sentence,
    pub alignment: Alignment,
    pub tree: MarkerTree,
}

impl CompilationResult {
    /// The compiled target with markers, e.g. `stable operation X3 of X2 ...`.
    pub fn marked(&self) -> String {
        render_symbols(&self.compiled)
    }
}

pub fn compile(
    seq: &OperationSequence,
    source: &Sentence,
) -> Result<CompilationResult, CompileError> {
    compile_with_len(seq, source.len())
}

/// Compiles against a source of `source_len` tokens. Only the length of the
/// source matters to the result.
pub fn compile_with_len(
    seq: &OperationSequence,
    source_len: usize,
) -> Result<CompilationResult, CompileError> {
    if source_len == 0 {
        return Err(CompileError::EmptySource);
    }
    let state = seq
        .iter()
        .try_fold(ExecState::new(source_len), |state, op| state.step(op))?;
    if !state.is_complete() {
        return Err(Violation::NotEnoughSrcPop.into());
    }
    Ok(state.finish())
}

pub fn extract_tree(
    seq: &OperationSequence,
    source: &Sentence,
) -> Result<MarkerTree, CompileError> {
    compile(seq, source).map(|r| r.tree)
}

/// The INSERT operands in sequence order: the target words in source order.
pub fn strip_ops(seq: &OperationSequence) -> Vec<Token> {
    seq.iter().filter_map(Operation::operand).cloned().collect()
}

/// Whether two sequences produce the same target sentence and alignment.
pub fn equivalent(
    a: &OperationSequence,
    b: &OperationSequence,
    source: &Sentence,
) -> Result<bool, CompileError> {
    let ra = compile(a, source)?;
    let rb = compile(b, source)?;
    Ok(ra.plain == rb.plain && ra.alignment == rb.alignment)
}

/// Inserts `SET_MARKER` immediately before the last `SRC_POP`. Returns `None`
/// when the sequence has no `SRC_POP`.
pub fn with_marker_before_final_pop(seq: &OperationSequence) -> Option<OperationSequence> {
    let last = seq.iter().rposition(|op| op.kind() == OpKind::SrcPop)?;
    let mut ops = seq.ops().to_vec();
    ops.insert(last, Operation::SetMarker);
    Some(OperationSequence::new(ops))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::parse_sequence;

    const JA_EN: &str = "SET_MARKER 2000 SRC_POP hr SRC_POP JMP_BWD SET_MARKER of SRC_POP JMP_BWD \
                        stable SRC_POP operation SRC_POP JMP_FWD JMP_FWD was SRC_POP SRC_POP \
                        confirmed SRC_POP SRC_POP";

    fn run(prefix: &str, source_len: usize) -> ExecState {
        parse_sequence(prefix)
            .unwrap()
            .iter()
            .try_fold(ExecState::new(source_len), |s, op| s.step(op))
            .unwrap()
    }

    #[test]
    fn worked_step_six_jumps_back() {
        let state = run("SET_MARKER 2000 SRC_POP hr SRC_POP", 9);
        assert_eq!(state.buffer().render(), "X2 2000 hr X1");
        assert_eq!(state.buffer().write_head(), MarkerId::INITIAL);
        let state = state.step(&Operation::JmpBwd).unwrap();
        assert_eq!(state.buffer().render(), "X2 2000 hr X1");
        assert_eq!(state.buffer().write_head(), MarkerId(2));
        let state = state.step(&Operation::SetMarker).unwrap();
        assert_eq!(state.buffer().render(), "X3 X2 2000 hr X1");
        assert_eq!(state.buffer().write_head(), MarkerId(2));
    }

    #[test]
    fn first_insert_aligns_to_first_source_word() {
        let state = ExecState::new(3)
            .step(&Operation::insert("hello").unwrap())
            .unwrap();
        assert_eq!(state.buffer().render(), "hello X1");
        assert_eq!(state.read_pos(), 1);
    }

    #[test]
    fn worked_example_compiles() {
        let source = Sentence::source("2000 hr の 安定 動作 を 確認 し た");
        let r = compile(&parse_sequence(JA_EN).unwrap(), &source).unwrap();
        assert_eq!(
            r.plain.to_string(),
            "stable operation of 2000 hr was confirmed"
        );
        assert_eq!(
            r.marked(),
            "stable operation X3 of X2 2000 hr was confirmed X1"
        );
        assert_eq!(r.alignment.sources(), vec![4, 5, 3, 1, 2, 6, 8]);
        assert_eq!(
            r.tree.to_bracketed(),
            "(X1 (X2 (X3 stable operation) of) 2000 hr was confirmed)"
        );
    }

    #[test]
    fn minimal() {
        let r = compile(
            &parse_sequence("hello SRC_POP").unwrap(),
            &Sentence::source("a"),
        )
        .unwrap();
        assert_eq!(r.plain.to_string(), "hello");
        assert_eq!(r.alignment.sources(), vec![1]);
        assert_eq!(r.tree.to_bracketed(), "(X1 hello)");
    }

    #[test]
    fn taxonomy_errors() {
        let src = Sentence::source("a b");
        let err = |s: &str| compile(&parse_sequence(s).unwrap(), &src).unwrap_err();
        assert_eq!(err("x SRC_POP"), Violation::NotEnoughSrcPop.into());
        assert_eq!(
            err("x SRC_POP SRC_POP SRC_POP"),
            Violation::TooManySrcPop.into()
        );
        assert_eq!(err("x SRC_POP SRC_POP y"), Violation::TooManySrcPop.into());
        assert_eq!(
            err("JMP_FWD SRC_POP SRC_POP"),
            Violation::WriteHeadOutOfRange.into()
        );
        assert_eq!(
            err("SET_MARKER JMP_FWD"),
            Violation::WriteHeadOutOfRange.into()
        );
        assert_eq!(
            compile_with_len(&parse_sequence("x").unwrap(), 0),
            Err(CompileError::EmptySource)
        );
    }

    #[test]
    fn strip_keeps_operands_in_order() {
        let seq = parse_sequence(JA_EN).unwrap();
        let words: Vec<_> = strip_ops(&seq).iter().map(|t| t.to_string()).collect();
        assert_eq!(
            words,
            [
                "2000",
                "hr",
                "of",
                "stable",
                "operation",
                "was",
                "confirmed"
            ]
        );
        let pure = parse_sequence("a b c").unwrap();
        assert_eq!(strip_ops(&pure).len(), 3);
    }

    #[test]
    fn equivalence() {
        let source = Sentence::source("2000 hr の 安定 動作 を 確認 し た");
        let seq = parse_sequence(JA_EN).unwrap();
        assert!(equivalent(&seq, &seq, &source).unwrap());
        let padded = with_marker_before_final_pop(&seq).unwrap();
        assert_ne!(padded, seq);
        assert!(equivalent(&seq, &padded, &source).unwrap());
        let changed = parse_sequence(&JA_EN.replace("was", "is")).unwrap();
        assert!(!equivalent(&seq, &changed, &source).unwrap());
    }
}
