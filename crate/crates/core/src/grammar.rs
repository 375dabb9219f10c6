//! Operation sequences as derivations in a three-stream multitext grammar.
//!
//! The three streams are the source prefix read so far, the target with its
//! markers, and the trace of write-head positions. Start symbol:
//! `[(S), (X1), (P1)]`. Stream 1 always holds the source prefix up to and
//! including the token under the read head, so an `Insert` rule aligns its
//! word to the last terminal of stream 1.
//!
//! An operation sequence maps to a derivation rule for rule: an initial
//! `PopSrc` puts the first source token under the read head, every
//! `SRC_POP` but the last pushes the next source token, and the last one
//! starts termination (`S -> T`). Termination then erases markers (highest
//! index first), erases the head symbol and emits `EOS`.

use std::fmt;

use thiserror::Error;

use crate::alignment::Alignment;
use crate::automaton::{classify, Violation};
use crate::interpreter::CompilationResult;
use crate::sequence::{Operation, OperationSequence};
use crate::token::{Sentence, Token};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("rule not applicable: {0}")]
    NotApplicable(MtgRule),
    #[error("empty source sentence")]
    EmptySource,
    #[error(transparent)]
    Invalid(#[from] Violation),
}

/// Trailing symbol of stream 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SourceEnd {
    /// Nonterminal `S`: still reading.
    Open,
    /// Nonterminal `T`: terminating.
    Terminating,
    /// Terminal `EOS`: done.
    Eos,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TargetSymbol {
    Word(Token),
    Marker(usize),
}

impl fmt::Display for TargetSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetSymbol::Word(t) => f.write_str(t.as_str()),
            TargetSymbol::Marker(i) => write!(f, "X{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MtgConfiguration {
    source: Vec<Token>,
    source_end: SourceEnd,
    target: Vec<TargetSymbol>,
    trace: Vec<usize>,
    head: Option<usize>,
    markers_created: usize,
}

impl Default for MtgConfiguration {
    fn default() -> Self {
        Self::start()
    }
}

impl MtgConfiguration {
    /// `[(S), (X1), (P1)]`
    pub fn start() -> Self {
        MtgConfiguration {
            source: Vec::new(),
            source_end: SourceEnd::Open,
            target: vec![TargetSymbol::Marker(1)],
            trace: Vec::new(),
            head: Some(1),
            markers_created: 1,
        }
    }

    /// Source terminals of stream 1 (without `EOS`).
    pub fn source(&self) -> &[Token] {
        &self.source
    }

    pub fn source_end(&self) -> SourceEnd {
        self.source_end
    }

    pub fn target(&self) -> &[TargetSymbol] {
        &self.target
    }

    /// Emitted jump origins in stream 3.
    pub fn trace(&self) -> &[usize] {
        &self.trace
    }

    /// Index `i` of the trailing `P_i` in stream 3.
    pub fn head(&self) -> Option<usize> {
        self.head
    }

    pub fn target_words(&self) -> Vec<Token> {
        self.target
            .iter()
            .filter_map(|s| match s {
                TargetSymbol::Word(t) => Some(t.clone()),
                TargetSymbol::Marker(_) => None,
            })
            .collect()
    }

    pub fn markers(&self) -> impl Iterator<Item = usize> + '_ {
        self.target.iter().filter_map(|s| match s {
            TargetSymbol::Marker(i) => Some(*i),
            TargetSymbol::Word(_) => None,
        })
    }

    fn marker_pos(&self, i: usize) -> Option<usize> {
        self.target
            .iter()
            .position(|s| *s == TargetSymbol::Marker(i))
    }

    fn neighbour_marker(&self, i: usize, forward: bool) -> Option<usize> {
        let markers: Vec<usize> = self.markers().collect();
        let k = markers.iter().position(|&m| m == i)?;
        if forward {
            markers.get(k + 1).copied()
        } else {
            k.checked_sub(1).map(|k| markers[k])
        }
    }

    pub fn stream1(&self) -> String {
        let end = match self.source_end {
            SourceEnd::Open => "S",
            SourceEnd::Terminating => "T",
            SourceEnd::Eos => "EOS",
        };
        join_or_epsilon(
            self.source
                .iter()
                .map(|t| t.to_string())
                .chain([end.to_string()]),
        )
    }

    pub fn stream2(&self) -> String {
        join_or_epsilon(self.target.iter().map(|s| s.to_string()))
    }

    pub fn stream3(&self) -> String {
        join_or_epsilon(
            self.trace
                .iter()
                .map(|i| i.to_string())
                .chain(self.head.map(|i| format!("P{i}"))),
        )
    }
}

fn join_or_epsilon(items: impl Iterator<Item = String>) -> String {
    let joined = items.collect::<Vec<_>>().join(" ");
    if joined.is_empty() {
        "ε".to_string()
    } else {
        joined
    }
}

impl fmt::Display for MtgConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[({}), ({}), ({})]",
            self.stream1(),
            self.stream2(),
            self.stream3()
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MtgRule {
    /// `S -> s S`
    PopSrc(Token),
    /// `P_from -> from P_to`
    Jmp { from: usize, to: usize },
    /// `X_at -> X_new X_at`, with `P_at` fixed.
    SetMarker { at: usize, new: usize },
    /// `X_at -> t X_at`, with `P_at` fixed.
    Insert { at: usize, token: Token },
    /// `S -> T`
    StartTerminate,
    /// `T -> EOS`
    EmitEos,
    /// `X_i -> ε` under `T`
    EraseMarker(usize),
    /// `P_i -> ε` under `T`
    EraseHead(usize),
}

impl MtgRule {
    /// Rules that correspond to an operation other than the final `SRC_POP`.
    pub fn is_content(&self) -> bool {
        matches!(
            self,
            MtgRule::PopSrc(_)
                | MtgRule::Jmp { .. }
                | MtgRule::SetMarker { .. }
                | MtgRule::Insert { .. }
        )
    }
}

impl fmt::Display for MtgRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MtgRule::PopSrc(s) => write!(f, "PopSrc({s})"),
            MtgRule::Jmp { from, to } => write!(f, "Jmp({from},{to})"),
            MtgRule::SetMarker { at, new } => write!(f, "SetMarker({at},{new})"),
            MtgRule::Insert { at, token } => write!(f, "Insert({at},{token})"),
            MtgRule::StartTerminate => f.write_str("StartTerminate()"),
            MtgRule::EmitEos => f.write_str("EmitEos()"),
            MtgRule::EraseMarker(i) => write!(f, "EraseMarker({i})"),
            MtgRule::EraseHead(i) => write!(f, "EraseHead({i})"),
        }
    }
}

/// Rewrites `cfg` with `rule`, or fails if the rule's left-hand side does not
/// match.
pub fn apply_rule(
    cfg: &MtgConfiguration,
    rule: &MtgRule,
) -> Result<MtgConfiguration, GrammarError> {
    let not_applicable = || GrammarError::NotApplicable(rule.clone());
    let mut next = cfg.clone();
    match rule {
        MtgRule::PopSrc(s) => {
            if cfg.source_end != SourceEnd::Open {
                return Err(not_applicable());
            }
            next.source.push(s.clone());
        }
        MtgRule::Jmp { from, to } => {
            if cfg.head != Some(*from) || *to == 0 {
                return Err(not_applicable());
            }
            next.trace.push(*from);
            next.head = Some(*to);
        }
        MtgRule::SetMarker { at, new } => {
            let pos = cfg.marker_pos(*at).ok_or_else(not_applicable)?;
            if cfg.head != Some(*at) || *new != cfg.markers_created + 1 {
                return Err(not_applicable());
            }
            next.target.insert(pos, TargetSymbol::Marker(*new));
            next.markers_created += 1;
        }
        MtgRule::Insert { at, token } => {
            let pos = cfg.marker_pos(*at).ok_or_else(not_applicable)?;
            if cfg.head != Some(*at) {
                return Err(not_applicable());
            }
            next.target.insert(pos, TargetSymbol::Word(token.clone()));
        }
        MtgRule::StartTerminate => {
            if cfg.source_end != SourceEnd::Open {
                return Err(not_applicable());
            }
            next.source_end = SourceEnd::Terminating;
        }
        MtgRule::EmitEos => {
            if cfg.source_end != SourceEnd::Terminating {
                return Err(not_applicable());
            }
            next.source_end = SourceEnd::Eos;
        }
        MtgRule::EraseMarker(i) => {
            let pos = cfg.marker_pos(*i).ok_or_else(not_applicable)?;
            if cfg.source_end != SourceEnd::Terminating {
                return Err(not_applicable());
            }
            next.target.remove(pos);
        }
        MtgRule::EraseHead(i) => {
            if cfg.source_end != SourceEnd::Terminating || cfg.head != Some(*i) {
                return Err(not_applicable());
            }
            next.head = None;
        }
    }
    Ok(next)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    steps: Vec<(MtgRule, MtgConfiguration)>,
}

impl Derivation {
    /// Applies `rules` one by one from the start symbol.
    pub fn from_rules(rules: impl IntoIterator<Item = MtgRule>) -> Result<Self, GrammarError> {
        let mut cfg = MtgConfiguration::start();
        let mut steps = Vec::new();
        for rule in rules {
            cfg = apply_rule(&cfg, &rule)?;
            steps.push((rule, cfg.clone()));
        }
        Ok(Derivation { steps })
    }

    /// Builds a derivation from recorded steps without checking them; see
    /// [`verify`](Self::verify).
    pub fn from_steps(steps: Vec<(MtgRule, MtgConfiguration)>) -> Self {
        Derivation { steps }
    }

    pub fn steps(&self) -> &[(MtgRule, MtgConfiguration)] {
        &self.steps
    }

    pub fn rules(&self) -> impl Iterator<Item = &MtgRule> {
        self.steps.iter().map(|(r, _)| r)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn final_configuration(&self) -> MtgConfiguration {
        self.steps
            .last()
            .map(|(_, c)| c.clone())
            .unwrap_or_default()
    }

    pub fn content_rule_count(&self) -> usize {
        self.rules().filter(|r| r.is_content()).count()
    }

    /// Re-applies every rule from the start symbol and checks that each
    /// recorded configuration is what the rule produces.
    pub fn verify(&self) -> bool {
        let mut cfg = MtgConfiguration::start();
        for (rule, recorded) in &self.steps {
            match apply_rule(&cfg, rule) {
                Ok(next) if next == *recorded => cfg = next,
                _ => return false,
            }
        }
        true
    }

    /// Reads the alignment off the `Insert` rules: each inserted word links to
    /// the last source terminal in stream 1 when it was inserted.
    pub fn recover_alignment(&self) -> Option<Alignment> {
        // stream 2 with the source link of each word riding along
        let mut shadow: Vec<Option<usize>> = vec![None];
        let mut cfg = MtgConfiguration::start();
        for (rule, next) in &self.steps {
            match rule {
                MtgRule::Insert { at, .. } => {
                    let pos = cfg.marker_pos(*at)?;
                    let link = cfg.source.len();
                    if link == 0 {
                        return None;
                    }
                    shadow.insert(pos, Some(link));
                }
                MtgRule::SetMarker { at, .. } => {
                    let pos = cfg.marker_pos(*at)?;
                    shadow.insert(pos, None);
                }
                MtgRule::EraseMarker(i) => {
                    let pos = cfg.marker_pos(*i)?;
                    shadow.remove(pos);
                }
                _ => {}
            }
            cfg = next.clone();
        }
        Some(
            shadow
                .into_iter()
                .flatten()
                .enumerate()
                .map(|(i, s)| (i + 1, s))
                .collect(),
        )
    }

    /// Maps the derivation back to the operation sequence it encodes.
    pub fn to_operations(&self) -> Option<OperationSequence> {
        let mut ops = Vec::new();
        let mut cfg = MtgConfiguration::start();
        let mut pops = 0;
        for (rule, next) in &self.steps {
            match rule {
                MtgRule::PopSrc(_) => {
                    if pops > 0 {
                        ops.push(Operation::SrcPop);
                    }
                    pops += 1;
                }
                MtgRule::StartTerminate => ops.push(Operation::SrcPop),
                MtgRule::Jmp { from, to } => {
                    if cfg.neighbour_marker(*from, true) == Some(*to) {
                        ops.push(Operation::JmpFwd);
                    } else if cfg.neighbour_marker(*from, false) == Some(*to) {
                        ops.push(Operation::JmpBwd);
                    } else {
                        return None;
                    }
                }
                MtgRule::SetMarker { .. } => ops.push(Operation::SetMarker),
                MtgRule::Insert { token, .. } => ops.push(Operation::Insert(token.clone())),
                MtgRule::EmitEos | MtgRule::EraseMarker(_) | MtgRule::EraseHead(_) => {}
            }
            cfg = next.clone();
        }
        Some(OperationSequence::new(ops))
    }

    /// Checks the derivation against the interpreter's result for `source`:
    /// every step re-derives, the streams are fully terminated, stream 1 is
    /// the source, stream 2 is the plain target and the `Insert` rules give
    /// the alignment.
    pub fn corresponds_to(&self, source: &Sentence, result: &CompilationResult) -> bool {
        if !self.verify() {
            return false;
        }
        let last = self.final_configuration();
        last.source_end == SourceEnd::Eos
            && last.head.is_none()
            && last.markers().next().is_none()
            && last.source == source.tokens()
            && last.target_words() == result.plain.tokens()
            && self.recover_alignment().as_ref() == Some(&result.alignment)
    }

    /// One line per step: `RULE <rule> || <stream1> || <stream2> || <stream3>`,
    /// preceded by a `START` line for the start symbol.
    pub fn dump(&self) -> String {
        let start = MtgConfiguration::start();
        let mut out = format!(
            "START || {} || {} || {}\n",
            start.stream1(),
            start.stream2(),
            start.stream3()
        );
        for (rule, cfg) in &self.steps {
            out.push_str(&format!(
                "RULE {} || {} || {} || {}\n",
                rule,
                cfg.stream1(),
                cfg.stream2(),
                cfg.stream3()
            ));
        }
        out
    }
}

/// Builds the derivation for a valid sequence.
pub fn osnmt_to_derivation(
    seq: &OperationSequence,
    source: &Sentence,
) -> Result<Derivation, GrammarError> {
    let n = source.len();
    if n == 0 {
        return Err(GrammarError::EmptySource);
    }
    if let Some(v) = classify(seq, n).violation() {
        return Err(v.into());
    }

    let mut cfg = MtgConfiguration::start();
    let mut steps = Vec::with_capacity(seq.len() + 8);
    let mut push = |cfg: &mut MtgConfiguration, rule: MtgRule| -> Result<(), GrammarError> {
        *cfg = apply_rule(cfg, &rule)?;
        steps.push((rule, cfg.clone()));
        Ok(())
    };

    push(&mut cfg, MtgRule::PopSrc(source.tokens()[0].clone()))?;
    let mut pops = 0;
    for op in seq {
        let head = cfg.head.expect("head present before termination");
        let rule = match op {
            Operation::SrcPop => {
                pops += 1;
                if pops < n {
                    MtgRule::PopSrc(source.tokens()[pops].clone())
                } else {
                    MtgRule::StartTerminate
                }
            }
            Operation::JmpFwd | Operation::JmpBwd => {
                let to = cfg
                    .neighbour_marker(head, matches!(op, Operation::JmpFwd))
                    .ok_or(Violation::WriteHeadOutOfRange)?;
                MtgRule::Jmp { from: head, to }
            }
            Operation::SetMarker => MtgRule::SetMarker {
                at: head,
                new: cfg.markers_created + 1,
            },
            Operation::Insert(t) => MtgRule::Insert {
                at: head,
                token: t.clone(),
            },
        };
        push(&mut cfg, rule)?;
    }

    let mut markers: Vec<usize> = cfg.markers().collect();
    markers.sort_unstable_by(|a, b| b.cmp(a));
    for m in markers {
        push(&mut cfg, MtgRule::EraseMarker(m))?;
    }
    let head = cfg.head.expect("head present before termination");
    push(&mut cfg, MtgRule::EraseHead(head))?;
    push(&mut cfg, MtgRule::EmitEos)?;
    Ok(Derivation { steps })
}

/// Whether the derivation of `seq` agrees with the interpreter on target and
/// alignment. False for sequences without a derivation.
pub fn check_correspondence(seq: &OperationSequence, source: &Sentence) -> bool {
    let Ok(derivation) = osnmt_to_derivation(seq, source) else {
        return false;
    };
    let Ok(result) = crate::interpreter::compile(seq, source) else {
        return false;
    };
    derivation.corresponds_to(source, &result) && derivation.to_operations().as_ref() == Some(seq)
}
