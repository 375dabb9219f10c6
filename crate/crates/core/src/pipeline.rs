//! Line-level corpus operations. Each function handles one line (or one
//! aligned group of lines) and reports failures as [`Error`] so callers can
//! skip bad lines and keep going.

use std::fmt;

use crate::alignment::{format_pharaoh_based, parse_links, Alignment};
use crate::automaton::{classify, Validity};
use crate::encoder::{
    align_to_osnmt, filter_one_to_n, prepare_alignment, word_align_to_subword, Segmentation,
    SubwordConvention,
};
use crate::error::Result;
use crate::grammar::osnmt_to_derivation;
use crate::interpreter::{compile, strip_ops};
use crate::metrics::{AerCounts, RefAlignment};
use crate::sequence::SequenceCodec;
use crate::token::Sentence;

/// Pharaoh links (possibly not 1:n, possibly with gaps) plus the sentence
/// pair, to a formatted operation sequence.
pub fn encode_line(codec: &SequenceCodec, src: &str, trg: &str, align: &str) -> Result<String> {
    let source = Sentence::source(src);
    let target = Sentence::target(trg);
    let links = parse_links(align)?;
    links.check_bounds(source.len(), target.len())?;
    let alignment = prepare_alignment(&links, target.len());
    let seq = align_to_osnmt(&alignment, &source, &target)?;
    Ok(codec.format(&seq))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledLine {
    pub plain: String,
    pub alignment: String,
    pub marked: String,
    pub tree: String,
}

pub fn compile_line(
    codec: &SequenceCodec,
    seq_line: &str,
    src: &str,
    base: usize,
) -> Result<CompiledLine> {
    let seq = codec.parse_prefix(seq_line)?;
    let result = compile(&seq, &Sentence::source(src))?;
    Ok(CompiledLine {
        plain: result.plain.to_string(),
        alignment: format_pharaoh_based(&result.alignment, base),
        marked: result.marked(),
        tree: result.tree.to_bracketed(),
    })
}

/// Empty source lines count as length 1 so that every sequence gets a label.
pub fn validate_line(codec: &SequenceCodec, seq_line: &str, src: &str) -> Result<Validity> {
    let seq = codec.parse_prefix(seq_line)?;
    Ok(classify(&seq, Sentence::source(src).len().max(1)))
}

pub fn strip_line(codec: &SequenceCodec, seq_line: &str) -> Result<String> {
    let seq = codec.parse_prefix(seq_line)?;
    Ok(strip_ops(&seq)
        .iter()
        .map(|t| t.as_str())
        .collect::<Vec<_>>()
        .join(" "))
}

pub fn tree_line(codec: &SequenceCodec, seq_line: &str, src: &str) -> Result<String> {
    compile_line(codec, seq_line, src, 0).map(|c| c.tree)
}

pub fn derive_line(codec: &SequenceCodec, seq_line: &str, src: &str) -> Result<String> {
    let seq = codec.parse_prefix(seq_line)?;
    Ok(osnmt_to_derivation(&seq, &Sentence::source(src))?.dump())
}

/// Word-level Pharaoh links to subword-level ones. The word alignment is
/// restricted to 1:n first.
pub struct SubwordLine<'a> {
    pub word_align: &'a str,
    pub src_words: &'a str,
    pub src_subwords: &'a str,
    pub trg_words: &'a str,
    pub trg_subwords: &'a str,
}

pub fn subword_align_line(
    line: &SubwordLine<'_>,
    convention: &SubwordConvention,
    base: usize,
) -> Result<String> {
    let src_words: Vec<&str> = line.src_words.split_whitespace().collect();
    let trg_words: Vec<&str> = line.trg_words.split_whitespace().collect();
    let src_sub: Vec<&str> = line.src_subwords.split_whitespace().collect();
    let trg_sub: Vec<&str> = line.trg_subwords.split_whitespace().collect();
    let src_seg = Segmentation::from_subwords(&src_sub, convention);
    src_seg.check_words(&src_sub, &src_words, convention)?;
    let trg_seg = Segmentation::from_subwords(&trg_sub, convention);
    trg_seg.check_words(&trg_sub, &trg_words, convention)?;

    let links = parse_links(line.word_align)?;
    links.check_bounds(src_words.len(), trg_words.len())?;
    let word_align: Alignment = filter_one_to_n(&links);
    let sub = word_align_to_subword(&word_align, &src_seg, &trg_seg)?;
    Ok(format_pharaoh_based(&sub, base))
}

/// AER counts for one hypothesis / reference line pair. The hypothesis is a
/// plain Pharaoh line; the reference may mark possible links with
/// `possible`. With `filter_reference` the reference's sure links are
/// restricted to 1:n before scoring.
pub fn aer_line(
    hyp: &str,
    reference: &str,
    possible: char,
    filter_reference: bool,
) -> Result<AerCounts> {
    let hyp = parse_links(hyp)?;
    let mut reference = RefAlignment::parse(reference, possible)?;
    if filter_reference {
        let sure = (&filter_one_to_n(reference.sure())).into();
        reference = RefAlignment::new(sure, reference.possible().clone());
    }
    Ok(AerCounts::new(&hyp, &reference))
}

/// Frequency table of sequence labels.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidityReport {
    counts: [usize; 4],
}

impl ValidityReport {
    pub fn add(&mut self, v: Validity) {
        self.counts[v as usize] += 1;
    }

    pub fn count(&self, v: Validity) -> usize {
        self.counts[v as usize]
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Percentage of lines with label `v`; 0 for an empty report.
    pub fn percent(&self, v: Validity) -> f64 {
        match self.total() {
            0 => 0.0,
            n => 100.0 * self.count(v) as f64 / n as f64,
        }
    }
}

impl FromIterator<Validity> for ValidityReport {
    fn from_iter<I: IntoIterator<Item = Validity>>(iter: I) -> Self {
        let mut report = ValidityReport::default();
        for v in iter {
            report.add(v);
        }
        report
    }
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<26}{:>10}", "Type", "Frequency")?;
        for v in Validity::ALL {
            writeln!(f, "{:<26}{:>9.2}%", v.description(), self.percent(v))?;
        }
        write!(f, "{:<26}{:>10}", "Sentences", self.total())
    }
}
