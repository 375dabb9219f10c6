//! Word alignments and the Pharaoh `i-j` text format.
//!
//! Positions are 1-based in memory and 0-based on the wire. In a Pharaoh pair
//! `i-j`, `i` indexes the source sentence and `j` the target sentence.

use std::collections::{btree_map, BTreeMap, BTreeSet};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlignmentError {
    #[error("malformed alignment pair {0:?}")]
    Malformed(String),
    #[error("source index {index} out of range for sentence of length {len}")]
    SourceOutOfRange { index: usize, len: usize },
    #[error("target index {index} out of range for sentence of length {len}")]
    TargetOutOfRange { index: usize, len: usize },
    #[error("not 1:n: target position {target} linked to source positions {first} and {second}")]
    NotOneToN {
        target: usize,
        first: usize,
        second: usize,
    },
}

/// A set of (source, target) links with no structural restriction, as read
/// from aligner output before filtering. Positions are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct LinkSet(BTreeSet<(usize, usize)>);

impl LinkSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, source: usize, target: usize) -> bool {
        self.0.insert((source, target))
    }

    pub fn contains(&self, source: usize, target: usize) -> bool {
        self.0.contains(&(source, target))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Links in (source, target) order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().copied()
    }

    pub fn as_set(&self) -> &BTreeSet<(usize, usize)> {
        &self.0
    }

    pub fn check_bounds(&self, n_src: usize, n_trg: usize) -> Result<(), AlignmentError> {
        for (s, t) in self.iter() {
            if s > n_src {
                return Err(AlignmentError::SourceOutOfRange {
                    index: s - 1,
                    len: n_src,
                });
            }
            if t > n_trg {
                return Err(AlignmentError::TargetOutOfRange {
                    index: t - 1,
                    len: n_trg,
                });
            }
        }
        Ok(())
    }
}

impl FromIterator<(usize, usize)> for LinkSet {
    fn from_iter<I: IntoIterator<Item = (usize, usize)>>(iter: I) -> Self {
        LinkSet(iter.into_iter().collect())
    }
}

impl From<&Alignment> for LinkSet {
    fn from(a: &Alignment) -> Self {
        a.links().collect()
    }
}

/// A 1:n alignment: every target position links to at most one source
/// position. Positions are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct Alignment(BTreeMap<usize, usize>);

impl Alignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `target -> source`. Re-adding the same link is a no-op; a
    /// different source for an already linked target is an error.
    pub fn link(&mut self, target: usize, source: usize) -> Result<(), AlignmentError> {
        assert!(
            target >= 1 && source >= 1,
            "alignment positions are 1-based"
        );
        match self.0.entry(target) {
            btree_map::Entry::Vacant(e) => {
                e.insert(source);
                Ok(())
            }
            btree_map::Entry::Occupied(e) if *e.get() == source => Ok(()),
            btree_map::Entry::Occupied(e) => Err(AlignmentError::NotOneToN {
                target,
                first: *e.get(),
                second: source,
            }),
        }
    }

    pub fn source_of(&self, target: usize) -> Option<usize> {
        self.0.get(&target).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(target, source)` pairs in target order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().map(|(&t, &s)| (t, s))
    }

    /// `(source, target)` pairs in target order.
    pub fn links(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().map(|(&t, &s)| (s, t))
    }

    /// True if every target position in `1..=n_trg` is linked and nothing
    /// outside it is.
    pub fn is_total(&self, n_trg: usize) -> bool {
        self.0.len() == n_trg && self.0.keys().copied().eq(1..=n_trg)
    }

    /// Source positions in target order, for total alignments.
    pub fn sources(&self) -> Vec<usize> {
        self.0.values().copied().collect()
    }
}

impl FromIterator<(usize, usize)> for Alignment {
    /// Collects `(target, source)` pairs; a later pair for the same target
    /// replaces an earlier one.
    fn from_iter<I: IntoIterator<Item = (usize, usize)>>(iter: I) -> Self {
        Alignment(iter.into_iter().collect())
    }
}

fn parse_pair(pair: &str, separators: &[char]) -> Result<(usize, usize, char), AlignmentError> {
    let malformed = || AlignmentError::Malformed(pair.to_string());
    let (pos, sep) = pair
        .char_indices()
        .find(|(_, c)| separators.contains(c))
        .ok_or_else(malformed)?;
    let (src, trg) = (&pair[..pos], &pair[pos + sep.len_utf8()..]);
    let src = src.parse::<usize>().map_err(|_| malformed())?;
    let trg = trg.parse::<usize>().map_err(|_| malformed())?;
    Ok((src, trg, sep))
}

/// Parses Pharaoh pairs into a link set without bounds or 1:n checks.
pub fn parse_links(line: &str) -> Result<LinkSet, AlignmentError> {
    line.split_whitespace()
        .map(|pair| parse_pair(pair, &['-']).map(|(s, t, _)| (s + 1, t + 1)))
        .collect()
}

/// Parses Pharaoh pairs with `-` for sure and `possible` for possible links.
/// Returns (sure, possible-only) link sets.
pub fn parse_sure_possible(
    line: &str,
    possible: char,
) -> Result<(LinkSet, LinkSet), AlignmentError> {
    let mut sure = LinkSet::new();
    let mut maybe = LinkSet::new();
    for pair in line.split_whitespace() {
        let (s, t, sep) = parse_pair(pair, &['-', possible])?;
        if sep == '-' {
            sure.insert(s + 1, t + 1);
        } else {
            maybe.insert(s + 1, t + 1);
        }
    }
    Ok((sure, maybe))
}

/// Parses a Pharaoh line into a 1:n alignment against sentences of the given
/// lengths. Conflicting links for one target position are rejected; run
/// [`crate::encoder::filter_one_to_n`] on [`parse_links`] output instead when
/// the input may violate 1:n.
pub fn parse_pharaoh(line: &str, n_src: usize, n_trg: usize) -> Result<Alignment, AlignmentError> {
    let links = parse_links(line)?;
    links.check_bounds(n_src, n_trg)?;
    let mut alignment = Alignment::new();
    for (s, t) in links.iter() {
        alignment.link(t, s)?;
    }
    Ok(alignment)
}

fn format_pairs(pairs: impl Iterator<Item = (usize, usize)>, base: usize) -> String {
    let mut sorted: Vec<_> = pairs.collect();
    sorted.sort_unstable();
    sorted
        .iter()
        .map(|(s, t)| format!("{}-{}", s - 1 + base, t - 1 + base))
        .collect::<Vec<_>>()
        .join(" ")
}

/// 0-based Pharaoh pairs sorted by (source, target).
pub fn format_pharaoh(alignment: &Alignment) -> String {
    format_pairs(alignment.links(), 0)
}

/// Pharaoh pairs printed with the given index base (0 or 1).
pub fn format_pharaoh_based(alignment: &Alignment, base: usize) -> String {
    format_pairs(alignment.links(), base)
}

pub fn format_links(links: &LinkSet) -> String {
    format_pairs(links.iter(), 0)
}
