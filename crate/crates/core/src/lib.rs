//! Operation-sequence (OSNMT) representation of translations.
//!
//! A translation is written as a program of five operations that walk a read
//! head monotonically over the source sentence while a write head hops between
//! markers in the target. Running the program yields the target sentence and
//! a hard 1:n word alignment.
//!
//! - [`sequence`]: operations and their one-line text form
//! - [`interpreter`]: running a sequence against a source sentence
//! - [`encoder`]: building reference sequences from aligned sentence pairs
//! - [`automaton`]: per-step legality masks and invalid-sequence labels
//! - [`grammar`]: sequences as derivations of a three-stream grammar
//! - [`metrics`]: alignment error rate
//! - [`pipeline`]: per-line corpus operations used by the CLI

pub mod alignment;
pub mod automaton;
pub mod batch;
pub mod encoder;
pub mod error;
pub mod grammar;
pub mod interpreter;
pub mod metrics;
pub mod pipeline;
pub mod sequence;
pub mod token;

pub use alignment::{format_pharaoh, parse_links, parse_pharaoh, Alignment, LinkSet};
pub use automaton::{
    advance, classify, completable, legal_ops, MaskState, OpMask, Validity, Violation,
};
pub use encoder::{align_to_osnmt, attach_unaligned, filter_one_to_n, word_align_to_subword};
pub use error::{Error, Result};
pub use grammar::{apply_rule, check_correspondence, osnmt_to_derivation, Derivation, MtgRule};
pub use interpreter::{
    compile, equivalent, extract_tree, strip_ops, CompilationResult, MarkerTree,
};
pub use metrics::{aer, corpus_aer, RefAlignment};
pub use sequence::{format_sequence, parse_sequence, Operation, OperationSequence, SequenceCodec};
pub use token::{Sentence, Token};
