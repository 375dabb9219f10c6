use thiserror::Error;

use crate::alignment::AlignmentError;
use crate::encoder::{EncodeError, SegmentationError};
use crate::grammar::GrammarError;
use crate::interpreter::CompileError;
use crate::metrics::MetricsError;
use crate::sequence::SequenceParseError;

/// Any failure on a single corpus line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Sequence(#[from] SequenceParseError),
    #[error(transparent)]
    Alignment(#[from] AlignmentError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Segmentation(#[from] SegmentationError),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
