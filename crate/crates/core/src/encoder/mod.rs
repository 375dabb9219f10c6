//! Turning aligned sentence pairs into reference operation sequences.
//!
//! The encoder walks the source left to right. Each marker in the target
//! buffer owns a *hole*: the span of target positions still to be written
//! left of it. Writing target word `j` means jumping to the marker whose hole
//! contains `j`, splitting off a new marker for the part of the hole left of
//! `j` when needed, and inserting the word.

mod subword;

pub use subword::{
    join_subwords, word_align_to_subword, Segmentation, SegmentationError, SubwordConvention,
};

use std::fmt;

use thiserror::Error;

use crate::alignment::{Alignment, LinkSet};
use crate::sequence::{Operation, OperationSequence};
use crate::token::Sentence;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("empty source sentence")]
    EmptySource,
    #[error("target position {0} is not aligned")]
    Unaligned(usize),
    #[error("alignment refers to target position {position} beyond sentence length {len}")]
    TargetOutOfRange { position: usize, len: usize },
    #[error("alignment refers to source position {position} beyond sentence length {len}")]
    SourceOutOfRange { position: usize, len: usize },
}

/// Inclusive end of a hole; `Unbounded` compares greater than any position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum HoleEnd {
    At(usize),
    Unbounded,
}

/// A span of unwritten target positions, 0-based and inclusive. Empty when
/// `start > end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hole {
    pub start: usize,
    pub end: HoleEnd,
}

impl Hole {
    pub fn is_empty(&self) -> bool {
        HoleEnd::At(self.start) > self.end
    }

    pub fn contains(&self, position: usize) -> bool {
        self.start <= position && HoleEnd::At(position) <= self.end
    }
}

impl fmt::Display for Hole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.end {
            HoleEnd::At(e) => write!(f, "({}, {})", self.start, e),
            HoleEnd::Unbounded => write!(f, "({}, inf)", self.start),
        }
    }
}

/// One hole per marker, in the markers' left-to-right order. Emptied holes
/// are kept because their markers stay in the buffer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoleList {
    holes: Vec<Hole>,
}

impl Default for HoleList {
    fn default() -> Self {
        HoleList {
            holes: vec![Hole {
                start: 0,
                end: HoleEnd::Unbounded,
            }],
        }
    }
}

impl HoleList {
    pub fn holes(&self) -> &[Hole] {
        &self.holes
    }

    pub fn len(&self) -> usize {
        self.holes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.holes.is_empty()
    }

    /// Index of the non-empty hole containing `position`.
    pub fn find(&self, position: usize) -> Option<usize> {
        self.holes
            .iter()
            .position(|h| !h.is_empty() && h.contains(position))
    }
}

#[derive(Debug, Clone, Default)]
struct EncoderState {
    holes: HoleList,
    head: usize,
    ops: Vec<Operation>,
}

impl EncoderState {
    fn write(&mut self, j: usize, op: Operation) {
        let idx = self
            .holes
            .find(j)
            .expect("every unwritten target position lies in some hole");
        let jump = if idx < self.head {
            Operation::JmpBwd
        } else {
            Operation::JmpFwd
        };
        let distance = idx.abs_diff(self.head);
        self.ops.extend(std::iter::repeat_n(jump, distance));
        self.head = idx;

        let Hole { start, end } = self.holes.holes[self.head];
        if start != j {
            // the new marker sits left of the current one and owns the
            // left fragment of the hole
            self.holes.holes.insert(
                self.head,
                Hole {
                    start,
                    end: HoleEnd::At(j - 1),
                },
            );
            self.head += 1;
            self.ops.push(Operation::SetMarker);
        }
        self.ops.push(op);
        self.holes.holes[self.head] = Hole { start: j + 1, end };
    }
}

/// Builds the operation sequence that writes `target` with alignment
/// `alignment` while reading `source` left to right.
///
/// `alignment` must be total over the target (see [`attach_unaligned`]).
/// Target words aligned to the same source word are written left to right.
pub fn align_to_osnmt(
    alignment: &Alignment,
    source: &Sentence,
    target: &Sentence,
) -> Result<OperationSequence, EncodeError> {
    let n_src = source.len();
    let n_trg = target.len();
    if n_src == 0 {
        return Err(EncodeError::EmptySource);
    }
    let mut by_source: Vec<Vec<usize>> = vec![Vec::new(); n_src];
    for (t, s) in alignment.iter() {
        if t > n_trg {
            return Err(EncodeError::TargetOutOfRange {
                position: t,
                len: n_trg,
            });
        }
        if s > n_src {
            return Err(EncodeError::SourceOutOfRange {
                position: s,
                len: n_src,
            });
        }
        by_source[s - 1].push(t - 1);
    }
    if let Some(j) = (1..=n_trg).find(|&j| alignment.source_of(j).is_none()) {
        return Err(EncodeError::Unaligned(j));
    }

    let mut state = EncoderState::default();
    for targets in &by_source {
        for &j in targets {
            state.write(j, Operation::Insert(target.tokens()[j].clone()));
        }
        state.ops.push(Operation::SrcPop);
    }
    Ok(OperationSequence::new(state.ops))
}

/// Drops links that break the 1:n restriction: a target position linked to
/// several source positions keeps only the smallest one.
pub fn filter_one_to_n(links: &LinkSet) -> Alignment {
    let mut out = Alignment::new();
    // (source, target) order visits the smallest source first per target
    for (s, t) in links.iter() {
        if out.source_of(t).is_none() {
            out.link(t, s).expect("target not yet linked");
        }
    }
    out
}

/// Gives every target position in `1..=n_trg` a link. Unaligned positions
/// borrow the link of the nearest aligned position to their left, else to
/// their right, else source position 1. Links beyond `n_trg` are dropped.
pub fn attach_unaligned(alignment: &Alignment, n_trg: usize) -> Alignment {
    let own: Vec<Option<usize>> = (1..=n_trg).map(|j| alignment.source_of(j)).collect();
    let first_aligned = own.iter().flatten().next().copied();
    let mut previous = None;
    own.iter()
        .enumerate()
        .map(|(i, link)| {
            let s = link.or(previous).or(first_aligned).unwrap_or(1);
            previous = Some(s);
            (i + 1, s)
        })
        .collect()
}

/// Parsed aligner links to a total 1:n alignment ready for encoding.
pub fn prepare_alignment(links: &LinkSet, n_trg: usize) -> Alignment {
    attach_unaligned(&filter_one_to_n(links), n_trg)
}
