use std::ops::Range;

use thiserror::Error;

use crate::alignment::Alignment;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SegmentationError {
    #[error("word {word} is {expected:?} but its subwords join to {found:?}")]
    Mismatch {
        word: usize,
        expected: String,
        found: String,
    },
    #[error("{words} words but subwords join to {joined} words")]
    WordCount { words: usize, joined: usize },
    #[error("{side} word {position} outside segmentation of {len} words")]
    WordOutOfRange {
        side: &'static str,
        position: usize,
        len: usize,
    },
}

/// How subword tokens mark word boundaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubwordConvention {
    /// Every non-final subword of a word ends with the marker (`pen@@ n@@ um`).
    Continuation(String),
    /// The final subword of every word ends with the marker (`pen n um_`).
    WordFinal(String),
}

impl Default for SubwordConvention {
    fn default() -> Self {
        SubwordConvention::Continuation("@@".to_string())
    }
}

impl SubwordConvention {
    fn ends_word(&self, subword: &str) -> bool {
        match self {
            SubwordConvention::Continuation(m) => !subword.ends_with(m.as_str()),
            SubwordConvention::WordFinal(m) => subword.ends_with(m.as_str()),
        }
    }

    fn marker(&self) -> &str {
        match self {
            SubwordConvention::Continuation(m) | SubwordConvention::WordFinal(m) => m,
        }
    }

    fn strip<'a>(&self, subword: &'a str) -> &'a str {
        subword.strip_suffix(self.marker()).unwrap_or(subword)
    }
}

/// For each word, the contiguous range of its subwords (0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segmentation {
    spans: Vec<Range<usize>>,
}

impl Segmentation {
    /// One subword per word.
    pub fn identity(words: usize) -> Self {
        Segmentation {
            spans: (0..words).map(|i| i..i + 1).collect(),
        }
    }

    /// Groups subwords into words. The end of the line always closes the last
    /// word, marked or not.
    pub fn from_subwords<S: AsRef<str>>(subwords: &[S], convention: &SubwordConvention) -> Self {
        let mut spans = Vec::new();
        let mut start = 0;
        for (i, sw) in subwords.iter().enumerate() {
            if convention.ends_word(sw.as_ref()) || i + 1 == subwords.len() {
                spans.push(start..i + 1);
                start = i + 1;
            }
        }
        Segmentation { spans }
    }

    pub fn from_spans(spans: Vec<Range<usize>>) -> Self {
        Segmentation { spans }
    }

    pub fn words(&self) -> usize {
        self.spans.len()
    }

    pub fn subwords(&self) -> usize {
        self.spans.last().map_or(0, |r| r.end)
    }

    /// Subword range of 1-based `word`.
    pub fn span(&self, word: usize) -> Option<Range<usize>> {
        word.checked_sub(1).and_then(|i| self.spans.get(i)).cloned()
    }

    pub fn spans(&self) -> &[Range<usize>] {
        &self.spans
    }

    /// Checks that joining the subwords reproduces `words`.
    pub fn check_words<S: AsRef<str>, W: AsRef<str>>(
        &self,
        subwords: &[S],
        words: &[W],
        convention: &SubwordConvention,
    ) -> Result<(), SegmentationError> {
        if self.words() != words.len() {
            return Err(SegmentationError::WordCount {
                words: words.len(),
                joined: self.words(),
            });
        }
        for (i, (span, word)) in self.spans.iter().zip(words).enumerate() {
            let joined = join(&subwords[span.clone()], convention);
            if joined != word.as_ref() {
                return Err(SegmentationError::Mismatch {
                    word: i + 1,
                    expected: word.as_ref().to_string(),
                    found: joined,
                });
            }
        }
        Ok(())
    }
}

fn join<S: AsRef<str>>(pieces: &[S], convention: &SubwordConvention) -> String {
    pieces
        .iter()
        .map(|p| convention.strip(p.as_ref()))
        .collect()
}

/// Joins a subword sequence back into words.
pub fn join_subwords<S: AsRef<str>>(subwords: &[S], convention: &SubwordConvention) -> Vec<String> {
    Segmentation::from_subwords(subwords, convention)
        .spans
        .into_iter()
        .map(|span| join(&subwords[span], convention))
        .collect()
}

/// Projects a word alignment onto subwords. Every subword of a target word
/// is linked to the final subword of the source word that word is aligned
/// to. Positions are 1-based.
pub fn word_align_to_subword(
    word_align: &Alignment,
    source: &Segmentation,
    target: &Segmentation,
) -> Result<Alignment, SegmentationError> {
    let mut out = Alignment::new();
    for (tw, sw) in word_align.iter() {
        let src_span = source.span(sw).ok_or(SegmentationError::WordOutOfRange {
            side: "source",
            position: sw,
            len: source.words(),
        })?;
        let trg_span = target.span(tw).ok_or(SegmentationError::WordOutOfRange {
            side: "target",
            position: tw,
            len: target.words(),
        })?;
        let anchor = src_span.end;
        for t in trg_span {
            out.link(t + 1, anchor)
                .expect("target subword spans are disjoint");
        }
    }
    Ok(out)
}
