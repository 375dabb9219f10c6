//! Alignment error rate.
//!
//! `AER = 1 - (|A∩S| + |A∩P|) / (|A| + |S|)` with hypothesis links `A`, sure
//! reference links `S` and possible reference links `P ⊇ S`. When both `A`
//! and `S` are empty the rate is 0.

use std::ops::AddAssign;

use thiserror::Error;

use crate::alignment::{parse_sure_possible, AlignmentError, LinkSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("{hyps} hypotheses but {refs} references")]
    LengthMismatch { hyps: usize, refs: usize },
}

/// Reference links split into sure and possible; `possible` includes `sure`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RefAlignment {
    sure: LinkSet,
    possible: LinkSet,
}

impl RefAlignment {
    /// A reference without a sure/possible distinction: every link is sure.
    pub fn all_sure(links: LinkSet) -> Self {
        RefAlignment {
            possible: links.clone(),
            sure: links,
        }
    }

    /// `possible` is widened to include `sure`.
    pub fn new(sure: LinkSet, possible: LinkSet) -> Self {
        let possible = sure.iter().chain(possible.iter()).collect();
        RefAlignment { sure, possible }
    }

    pub fn sure(&self) -> &LinkSet {
        &self.sure
    }

    pub fn possible(&self) -> &LinkSet {
        &self.possible
    }

    /// Parses Pharaoh pairs where `i-j` is sure and `i<possible>j` is
    /// possible.
    pub fn parse(line: &str, possible: char) -> Result<Self, AlignmentError> {
        let (sure, maybe) = parse_sure_possible(line, possible)?;
        Ok(RefAlignment::new(sure, maybe))
    }
}

/// The four counts AER is computed from. Adding counts pools them, which is
/// how corpus-level AER is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AerCounts {
    pub hyp_and_sure: usize,
    pub hyp_and_possible: usize,
    pub hyp: usize,
    pub sure: usize,
}

impl AerCounts {
    pub fn new(hyp: &LinkSet, reference: &RefAlignment) -> Self {
        let hyp_set = hyp.as_set();
        AerCounts {
            hyp_and_sure: hyp_set.intersection(reference.sure.as_set()).count(),
            hyp_and_possible: hyp_set.intersection(reference.possible.as_set()).count(),
            hyp: hyp.len(),
            sure: reference.sure.len(),
        }
    }

    /// Exact value as (numerator, denominator) of `1 - AER`; `None` when both
    /// `A` and `S` are empty.
    pub fn agreement(&self) -> Option<(usize, usize)> {
        let denominator = self.hyp + self.sure;
        (denominator > 0).then_some((self.hyp_and_sure + self.hyp_and_possible, denominator))
    }

    pub fn aer(&self) -> f64 {
        match self.agreement() {
            None => 0.0,
            Some((num, den)) => 1.0 - num as f64 / den as f64,
        }
    }
}

impl AddAssign for AerCounts {
    fn add_assign(&mut self, rhs: Self) {
        self.hyp_and_sure += rhs.hyp_and_sure;
        self.hyp_and_possible += rhs.hyp_and_possible;
        self.hyp += rhs.hyp;
        self.sure += rhs.sure;
    }
}

impl std::iter::Sum for AerCounts {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(AerCounts::default(), |mut acc, c| {
            acc += c;
            acc
        })
    }
}

pub fn aer(hyp: &LinkSet, reference: &RefAlignment) -> f64 {
    AerCounts::new(hyp, reference).aer()
}

/// Micro-averaged AER: counts are pooled over all pairs before the ratio.
pub fn corpus_aer(hyps: &[LinkSet], refs: &[RefAlignment]) -> Result<f64, MetricsError> {
    if hyps.len() != refs.len() {
        return Err(MetricsError::LengthMismatch {
            hyps: hyps.len(),
            refs: refs.len(),
        });
    }
    Ok(hyps
        .iter()
        .zip(refs)
        .map(|(h, r)| AerCounts::new(h, r))
        .sum::<AerCounts>()
        .aer())
}
