//! Step-wise legality of operations, for masking a decoder's output layer,
//! and classification of invalid sequences.
//!
//! The automaton tracks only counters: how many `SRC_POP`s were read, how
//! many markers exist and which of them (in left-to-right order) holds the
//! write head. Legality never depends on the `INSERT` operand.

use std::fmt;

use thiserror::Error;

use crate::sequence::{OpKind, Operation, OperationSequence, SequenceCodec};

/// Ways a sequence can fail to describe a translation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Error)]
pub enum Violation {
    #[error("Not enough SRC_POP")]
    NotEnoughSrcPop,
    #[error("Too many SRC_POP")]
    TooManySrcPop,
    #[error("Write head out of range")]
    WriteHeadOutOfRange,
}

impl Violation {
    pub fn label(self) -> &'static str {
        Validity::from(self).label()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Validity {
    Valid,
    NotEnoughSrcPop,
    TooManySrcPop,
    WriteHeadOutOfRange,
}

impl Validity {
    pub const ALL: [Validity; 4] = [
        Validity::Valid,
        Validity::NotEnoughSrcPop,
        Validity::TooManySrcPop,
        Validity::WriteHeadOutOfRange,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Validity::Valid => "Valid",
            Validity::NotEnoughSrcPop => "NotEnoughSrcPop",
            Validity::TooManySrcPop => "TooManySrcPop",
            Validity::WriteHeadOutOfRange => "WriteHeadOutOfRange",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Validity::Valid => "Valid",
            Validity::NotEnoughSrcPop => "Not enough SRC_POP",
            Validity::TooManySrcPop => "Too many SRC_POP",
            Validity::WriteHeadOutOfRange => "Write head out of range",
        }
    }

    pub fn is_valid(self) -> bool {
        self == Validity::Valid
    }

    pub fn violation(self) -> Option<Violation> {
        match self {
            Validity::Valid => None,
            Validity::NotEnoughSrcPop => Some(Violation::NotEnoughSrcPop),
            Validity::TooManySrcPop => Some(Violation::TooManySrcPop),
            Validity::WriteHeadOutOfRange => Some(Violation::WriteHeadOutOfRange),
        }
    }
}

impl From<Violation> for Validity {
    fn from(v: Violation) -> Self {
        match v {
            Violation::NotEnoughSrcPop => Validity::NotEnoughSrcPop,
            Violation::TooManySrcPop => Validity::TooManySrcPop,
            Violation::WriteHeadOutOfRange => Validity::WriteHeadOutOfRange,
        }
    }
}

impl fmt::Display for Validity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Entries of an output mask: the five operation kinds plus end-of-sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MaskEntry {
    SrcPop,
    SetMarker,
    JmpFwd,
    JmpBwd,
    Insert,
    Eos,
}

impl MaskEntry {
    pub const ALL: [MaskEntry; 6] = [
        MaskEntry::SrcPop,
        MaskEntry::SetMarker,
        MaskEntry::JmpFwd,
        MaskEntry::JmpBwd,
        MaskEntry::Insert,
        MaskEntry::Eos,
    ];

    /// Name used by the mask line protocol.
    pub fn name(self) -> &'static str {
        match self {
            MaskEntry::Insert => "TOK",
            MaskEntry::Eos => "EOS",
            MaskEntry::SrcPop => OpKind::SrcPop.name(),
            MaskEntry::SetMarker => OpKind::SetMarker.name(),
            MaskEntry::JmpFwd => OpKind::JmpFwd.name(),
            MaskEntry::JmpBwd => OpKind::JmpBwd.name(),
        }
    }

    fn bit(self) -> u8 {
        1 << self as u8
    }
}

impl From<OpKind> for MaskEntry {
    fn from(kind: OpKind) -> Self {
        match kind {
            OpKind::SrcPop => MaskEntry::SrcPop,
            OpKind::SetMarker => MaskEntry::SetMarker,
            OpKind::JmpFwd => MaskEntry::JmpFwd,
            OpKind::JmpBwd => MaskEntry::JmpBwd,
            OpKind::Insert => MaskEntry::Insert,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct OpMask(u8);

impl OpMask {
    pub fn contains(self, entry: MaskEntry) -> bool {
        self.0 & entry.bit() != 0
    }

    pub fn allows(self, op: &Operation) -> bool {
        self.contains(op.kind().into())
    }

    fn with(self, entry: MaskEntry, on: bool) -> Self {
        if on {
            OpMask(self.0 | entry.bit())
        } else {
            self
        }
    }

    pub fn iter(self) -> impl Iterator<Item = MaskEntry> {
        MaskEntry::ALL
            .into_iter()
            .filter(move |e| self.contains(*e))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for OpMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.iter().map(MaskEntry::name).collect();
        f.write_str(&names.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MaskState {
    source_len: usize,
    pops: usize,
    markers: usize,
    head_idx: usize,
}

impl MaskState {
    pub fn initial(source_len: usize) -> Self {
        assert!(source_len >= 1, "source sentence must be non-empty");
        MaskState {
            source_len,
            pops: 0,
            markers: 1,
            head_idx: 0,
        }
    }

    /// Builds an arbitrary state; `None` unless `pops <= source_len`,
    /// `markers >= 1` and `head_idx < markers`.
    pub fn new(source_len: usize, pops: usize, markers: usize, head_idx: usize) -> Option<Self> {
        (source_len >= 1 && pops <= source_len && markers >= 1 && head_idx < markers).then_some(
            MaskState {
                source_len,
                pops,
                markers,
                head_idx,
            },
        )
    }

    pub fn source_len(&self) -> usize {
        self.source_len
    }

    pub fn pops(&self) -> usize {
        self.pops
    }

    pub fn markers(&self) -> usize {
        self.markers
    }

    pub fn head_idx(&self) -> usize {
        self.head_idx
    }

    pub fn is_complete(&self) -> bool {
        self.pops == self.source_len
    }

    pub fn projection(&self) -> (usize, usize, usize) {
        (self.pops, self.markers, self.head_idx)
    }

    /// Why `kind` would be illegal here, if it would be.
    pub fn violation(&self, kind: OpKind) -> Option<Violation> {
        if self.is_complete() {
            return Some(Violation::TooManySrcPop);
        }
        match kind {
            OpKind::JmpFwd if self.head_idx + 1 >= self.markers => {
                Some(Violation::WriteHeadOutOfRange)
            }
            OpKind::JmpBwd if self.head_idx == 0 => Some(Violation::WriteHeadOutOfRange),
            _ => None,
        }
    }
}

pub fn legal_ops(state: &MaskState) -> OpMask {
    let open = !state.is_complete();
    OpMask::default()
        .with(MaskEntry::SrcPop, open)
        .with(MaskEntry::SetMarker, open)
        .with(
            MaskEntry::JmpFwd,
            open && state.head_idx + 1 < state.markers,
        )
        .with(MaskEntry::JmpBwd, open && state.head_idx > 0)
        .with(MaskEntry::Insert, open)
        .with(MaskEntry::Eos, !open)
}

pub fn advance(state: &MaskState, op: &Operation) -> Result<MaskState, Violation> {
    advance_kind(state, op.kind())
}

pub fn advance_kind(state: &MaskState, kind: OpKind) -> Result<MaskState, Violation> {
    if let Some(v) = state.violation(kind) {
        return Err(v);
    }
    let mut next = *state;
    match kind {
        OpKind::SrcPop => next.pops += 1,
        // the new marker lands left of the head, so the head's index shifts
        OpKind::SetMarker => {
            next.markers += 1;
            next.head_idx += 1;
        }
        OpKind::JmpFwd => next.head_idx += 1,
        OpKind::JmpBwd => next.head_idx -= 1,
        OpKind::Insert => {}
    }
    Ok(next)
}

/// Replays `ops` from the initial state, stopping at the first violation.
pub fn replay<'a>(
    source_len: usize,
    ops: impl IntoIterator<Item = &'a Operation>,
) -> Result<MaskState, Violation> {
    ops.into_iter()
        .try_fold(MaskState::initial(source_len), |s, op| advance(&s, op))
}

/// Labels a sequence by its first violation.
pub fn classify(seq: &OperationSequence, source_len: usize) -> Validity {
    match replay(source_len, seq) {
        Err(v) => v.into(),
        Ok(state) if !state.is_complete() => Validity::NotEnoughSrcPop,
        Ok(_) => Validity::Valid,
    }
}

/// Whether some continuation from `state` ends in a valid sequence. Always
/// true for reachable states: the remaining `SRC_POP`s are always legal.
pub fn completable(state: &MaskState) -> bool {
    let mut s = *state;
    while !s.is_complete() {
        match advance_kind(&s, OpKind::SrcPop) {
            Ok(next) => s = next,
            Err(_) => return false,
        }
    }
    legal_ops(&s).contains(MaskEntry::Eos)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum MaskRequestError {
    #[error("malformed")]
    Malformed,
}

/// Answers one line of the mask protocol.
///
/// Request: `MASK <source_len> <op prefix...>`. Response: the legal entries
/// separated by spaces, or `ERR <label>` when the prefix itself is invalid,
/// or `ERR malformed`.
pub fn mask_response(line: &str, codec: &SequenceCodec) -> String {
    match mask_request(line, codec) {
        Ok(Ok(mask)) => mask.to_string(),
        Ok(Err(v)) => format!("ERR {}", v.label()),
        Err(e) => format!("ERR {e}"),
    }
}

fn mask_request(
    line: &str,
    codec: &SequenceCodec,
) -> Result<Result<OpMask, Violation>, MaskRequestError> {
    let mut words = line.split_whitespace();
    if words.next() != Some("MASK") {
        return Err(MaskRequestError::Malformed);
    }
    let source_len: usize = words
        .next()
        .and_then(|n| n.parse().ok())
        .filter(|&n| n >= 1)
        .ok_or(MaskRequestError::Malformed)?;
    let ops = words
        .map(|w| codec.parse_op(w).ok_or(MaskRequestError::Malformed))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(replay(source_len, &ops).map(|s| legal_ops(&s)))
}
