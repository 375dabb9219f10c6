//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

mod common;

use std::time::{Duration, Instant};

use common::*;
use osnmt::alignment::{parse_pharaoh, Alignment, LinkSet};
use osnmt::automaton::{self, classify, legal_ops, MaskEntry, MaskState, Validity};
use osnmt::encoder::{
    align_to_osnmt, attach_unaligned, join_subwords, word_align_to_subword, Segmentation,
    SubwordConvention,
};
use osnmt::grammar::{check_correspondence, osnmt_to_derivation, SourceEnd};
use osnmt::interpreter::{
    compile, compile_with_len, strip_ops, with_marker_before_final_pop, ExecState, MarkerId,
    TreeNode,
};
use osnmt::metrics::{aer, AerCounts, RefAlignment};
use osnmt::sequence::{format_sequence, parse_sequence, Operation, OperationSequence};
use osnmt::token::Sentence;
use rand::Rng;

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !($cond) {
            return Err(format!($($msg)+));
        }
    };
}

fn c1_worked_example() -> Outcome {
    let source = Sentence::source(JA_SOURCE);
    let seq = parse_sequence(&ja_en_sequence()).unwrap();
    ensure!(
        seq.len() == 22,
        "expected 21 listed ops + final pop, got {}",
        seq.len()
    );
    let _ = compile(&seq, &source);
    let start = Instant::now();
    let r = compile(&seq, &source).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure!(
        r.plain.to_string() == EN_TARGET,
        "plain {:?}",
        r.plain.to_string()
    );
    ensure!(
        r.marked() == "stable operation X3 of X2 2000 hr was confirmed X1",
        "compiled {:?}",
        r.marked()
    );
    let expected: Alignment = [(1, 4), (2, 5), (3, 3), (4, 1), (5, 2), (6, 6), (7, 8)]
        .into_iter()
        .collect();
    ensure!(r.alignment == expected, "alignment {:?}", r.alignment);
    ensure!(elapsed < Duration::from_millis(1), "took {elapsed:?}");
    Ok(format!("exact match in {elapsed:?}"))
}

fn c2_encoder_reproduction() -> Outcome {
    let x = Sentence::source(JA_SOURCE);
    let y = Sentence::target(EN_TARGET);
    let a = parse_pharaoh(JA_EN_LINKS, x.len(), y.len()).map_err(|e| e.to_string())?;
    let seq = align_to_osnmt(&a, &x, &y).map_err(|e| e.to_string())?;
    let got = format_sequence(&seq);
    ensure!(got == ja_en_sequence(), "got {got:?}");
    Ok("listed sequence + final SRC_POP".into())
}

fn c3_roundtrip() -> Outcome {
    let mut rng = rng(301);
    let start = Instant::now();
    let mut with_gaps = 0;
    for i in 0..10_000 {
        let (x, y, raw) = random_instance(&mut rng, 20);
        if !raw.is_total(y.len()) {
            with_gaps += 1;
        }
        let a = attach_unaligned(&raw, y.len());
        let seq = align_to_osnmt(&a, &x, &y).map_err(|e| format!("instance {i}: {e}"))?;
        let r = compile(&seq, &x).map_err(|e| format!("instance {i}: {e}"))?;
        ensure!(
            r.plain == y && r.alignment == a,
            "instance {i} does not round-trip"
        );
    }
    let elapsed = start.elapsed();
    ensure!(with_gaps > 0, "no instance had unaligned target words");
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    Ok(format!(
        "10000 instances ({with_gaps} with unaligned words) in {elapsed:?}"
    ))
}

fn c4_spurious_ambiguity() -> Outcome {
    let mut rng = rng(401);
    for i in 0..1_000 {
        let (seq, source) = random_valid_sequence(&mut rng, 12);
        let padded = with_marker_before_final_pop(&seq).ok_or("no SRC_POP")?;
        let a = compile(&seq, &source).map_err(|e| e.to_string())?;
        let b = compile(&padded, &source).map_err(|e| format!("sequence {i}: {e}"))?;
        ensure!(
            a.plain == b.plain && a.alignment == b.alignment,
            "sequence {i} changed"
        );
    }
    Ok("1000 sequences unchanged".into())
}

/// Whether some continuation of `state` is accepted by the interpreter.
/// Depth-first over operation kinds, bounded by the pops still needed.
fn interpreter_completable(state: &ExecState, budget: usize) -> bool {
    state.is_complete()
        || budget > 0
            && all_ops().iter().any(|op| {
                state
                    .clone()
                    .step(op)
                    .is_ok_and(|next| interpreter_completable(&next, budget - 1))
            })
}

fn all_ops() -> [Operation; 5] {
    [
        Operation::SrcPop,
        Operation::SetMarker,
        Operation::JmpFwd,
        Operation::JmpBwd,
        Operation::insert("w").unwrap(),
    ]
}

fn c5_automaton() -> Outcome {
    let mut rng = rng(501);
    for i in 0..1_000 {
        let (seq, source) = random_valid_sequence(&mut rng, 12);
        let mut state = MaskState::initial(source.len());
        for op in &seq {
            ensure!(
                legal_ops(&state).allows(op),
                "sequence {i}: {op:?} masked out"
            );
            state = automaton::advance(&state, op).map_err(|e| e.to_string())?;
        }
        ensure!(
            legal_ops(&state).contains(MaskEntry::Eos),
            "sequence {i}: EOS masked out"
        );
    }

    let start = Instant::now();
    let mut checked = 0usize;
    for n in 1..=3 {
        // depth-first over every legal prefix of length <= 8
        let mut stack = vec![(MaskState::initial(n), ExecState::new(n), 0usize)];
        while let Some((mask_state, exec, depth)) = stack.pop() {
            let mask = legal_ops(&mask_state);
            if mask.contains(MaskEntry::Eos) {
                ensure!(exec.is_complete(), "EOS allowed before completion");
            }
            for op in all_ops() {
                let allowed = mask.allows(&op);
                let stepped = exec.clone().step(&op);
                ensure!(
                    allowed == stepped.is_ok(),
                    "mask disagrees with interpreter on {op:?}"
                );
                let Ok(next_exec) = stepped else { continue };
                checked += 1;
                ensure!(
                    interpreter_completable(&next_exec, next_exec.source_len() - next_exec.pops()),
                    "masked op {op:?} leads to a dead end"
                );
                let next_mask = automaton::advance(&mask_state, &op).map_err(|e| e.to_string())?;
                ensure!(
                    automaton::completable(&next_mask),
                    "completable() disagrees"
                );
                if depth + 1 < 8 {
                    stack.push((next_mask, next_exec, depth + 1));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure!(
        elapsed < Duration::from_secs(5),
        "exhaustive check took {elapsed:?}"
    );
    Ok(format!(
        "sound on 1000 sequences; {checked} masked transitions safe in {elapsed:?}"
    ))
}

fn c6_taxonomy() -> Outcome {
    let crafted = [
        ("a SRC_POP b", 3, Validity::NotEnoughSrcPop),
        ("a SRC_POP SRC_POP", 1, Validity::TooManySrcPop),
        ("JMP_FWD a SRC_POP", 1, Validity::WriteHeadOutOfRange),
        (
            "SET_MARKER JMP_FWD SRC_POP",
            1,
            Validity::WriteHeadOutOfRange,
        ),
        (
            "SET_MARKER JMP_BWD JMP_BWD SRC_POP",
            1,
            Validity::WriteHeadOutOfRange,
        ),
    ];
    for (text, n, expected) in crafted {
        let got = classify(&parse_sequence(text).unwrap(), n);
        ensure!(got == expected, "{text:?} classified {got}");
    }
    let mut rng = rng(601);
    let mut counts = [0usize; 4];
    for _ in 0..1_000 {
        let seq = random_ops(&mut rng, 14);
        let n = rng.gen_range(1..=4);
        let label = classify(&seq, n);
        counts[label as usize] += 1;
        ensure!(
            label.is_valid() == compile_with_len(&seq, n).is_ok(),
            "classify/compile disagree on {}",
            format_sequence(&seq)
        );
    }
    ensure!(
        counts.iter().all(|&c| c > 0),
        "fuzz did not hit every class: {counts:?}"
    );
    Ok(format!("crafted classes ok; fuzz label counts {counts:?}"))
}

fn check_grammar(seq: &OperationSequence, source: &Sentence) -> Result<(), String> {
    let d = osnmt_to_derivation(seq, source).map_err(|e| e.to_string())?;
    ensure!(d.verify(), "derivation applies an inapplicable rule");
    ensure!(
        d.content_rule_count() == seq.len(),
        "{} content rules for {} ops",
        d.content_rule_count(),
        seq.len()
    );
    let last = d.final_configuration();
    ensure!(
        last.source() == source.tokens() && last.source_end() == SourceEnd::Eos,
        "stream 1 is {}",
        last.stream1()
    );
    let r = compile(seq, source).map_err(|e| e.to_string())?;
    ensure!(last.markers().next().is_none(), "markers left in stream 2");
    ensure!(
        last.target_words() == r.plain.tokens(),
        "stream 2 is {}",
        last.stream2()
    );
    ensure!(
        d.recover_alignment() == Some(r.alignment),
        "insert rules give another alignment"
    );
    ensure!(
        check_correspondence(seq, source),
        "correspondence check failed"
    );
    Ok(())
}

fn c7_grammar() -> Outcome {
    let seq = parse_sequence(&ja_en_sequence()).unwrap();
    let source = Sentence::source(JA_SOURCE);
    check_grammar(&seq, &source)?;
    let mut rng = rng(701);
    for i in 0..1_000 {
        let (seq, source) = random_valid_sequence(&mut rng, 12);
        check_grammar(&seq, &source).map_err(|e| format!("sequence {i}: {e}"))?;
    }
    Ok("worked example + 1000 sequences".into())
}

fn c8_tree() -> Outcome {
    let seq = parse_sequence(&ja_en_sequence()).unwrap();
    let r = compile(&seq, &Sentence::source(JA_SOURCE)).map_err(|e| e.to_string())?;
    let render = |m: usize| -> Vec<String> {
        r.tree
            .children(MarkerId::new(m).unwrap())
            .iter()
            .map(|c| match c {
                TreeNode::Leaf(t) => t.to_string(),
                TreeNode::Marker(m) => m.to_string(),
            })
            .collect()
    };
    ensure!(
        render(1) == ["X2", "2000", "hr", "was", "confirmed"],
        "X1: {:?}",
        render(1)
    );
    ensure!(render(2) == ["X3", "of"], "X2: {:?}", render(2));
    ensure!(render(3) == ["stable", "operation"], "X3: {:?}", render(3));
    ensure!(r.tree.flatten() == r.plain.tokens(), "flatten differs");
    let mut rng = rng(801);
    for i in 0..1_000 {
        let (seq, source) = random_valid_sequence(&mut rng, 12);
        let r = compile(&seq, &source).map_err(|e| e.to_string())?;
        ensure!(
            r.tree.flatten() == r.plain.tokens(),
            "sequence {i}: flatten differs"
        );
    }
    Ok(r.tree.to_bracketed())
}

fn c9_strip() -> Outcome {
    let seq = parse_sequence(PT_EN_SUBWORDS).unwrap();
    let stripped: Vec<String> = strip_ops(&seq).iter().map(|t| t.to_string()).collect();
    let joined = join_subwords(&stripped, &SubwordConvention::WordFinal("_".into())).join(" ");
    ensure!(
        joined == "behavior of clones pennisetum subjected to periods restriction water controlled",
        "got {joined:?}"
    );
    Ok(joined)
}

fn c10_aer() -> Outcome {
    let a: LinkSet = [(1, 1), (2, 3)].into_iter().collect();
    ensure!(
        aer(&a, &RefAlignment::all_sure(a.clone())) == 0.0,
        "identity is not 0"
    );
    let b: LinkSet = [(1, 2), (3, 3)].into_iter().collect();
    ensure!(
        aer(&a, &RefAlignment::all_sure(b)) == 1.0,
        "disjoint is not 1"
    );
    let hyp: LinkSet = [(1, 1), (2, 2)].into_iter().collect();
    let r = RefAlignment::all_sure([(1, 1), (3, 3)].into_iter().collect());
    let half = aer(&hyp, &r);
    ensure!(half == 0.5, "half overlap gives {half}");

    let mut rng = rng(1001);
    let mut additions = 0;
    while additions < 1_000 {
        let mut links = |k: usize| -> LinkSet {
            (0..k)
                .map(|_| (rng.gen_range(1..6), rng.gen_range(1..6)))
                .collect()
        };
        let (hyp, sure, extra) = (links(6), links(4), links(6));
        let r = RefAlignment::new(sure, extra);
        let candidates: Vec<_> = r
            .possible()
            .iter()
            .filter(|(s, t)| !hyp.contains(*s, *t))
            .collect();
        let Some(&(s, t)) = candidates.first() else {
            continue;
        };
        let mut grown = hyp.clone();
        grown.insert(s, t);
        let (before, after) = (AerCounts::new(&hyp, &r), AerCounts::new(&grown, &r));
        ensure!(
            after.aer() <= before.aer() + 1e-12,
            "adding {s}-{t} raised AER"
        );
        additions += 1;
    }
    Ok("0.0 / 1.0 / 0.5; monotone over 1000 additions".into())
}

fn c11_subwords() -> Outcome {
    // source word 4 spans subwords 4..8 ("pen n is et um_")
    let source = Segmentation::from_spans(vec![0..1, 1..2, 2..3, 3..8, 8..9]);
    let target = Segmentation::identity(2);
    let word_align: Alignment = [(1, 4), (2, 5)].into_iter().collect();
    let sub = word_align_to_subword(&word_align, &source, &target).map_err(|e| e.to_string())?;
    ensure!(sub.sources() == [8, 9], "links {:?}", sub.sources());

    let mut rng = rng(1101);
    for _ in 0..1_000 {
        let ns = rng.gen_range(1..8);
        let nt = rng.gen_range(1..8);
        let mut seg = |words: usize| {
            let mut start = 0;
            let spans = (0..words)
                .map(|_| {
                    let len = rng.gen_range(1..4);
                    start += len;
                    start - len..start
                })
                .collect();
            Segmentation::from_spans(spans)
        };
        let (src, trg) = (seg(ns), seg(nt));
        let word_align: Alignment = (1..=nt).map(|j| (j, rng.gen_range(1..=ns))).collect();
        let sub = word_align_to_subword(&word_align, &src, &trg).map_err(|e| e.to_string())?;
        let links = LinkSet::from(&sub);
        let targets: std::collections::BTreeSet<_> = links.iter().map(|(_, t)| t).collect();
        ensure!(targets.len() == links.len(), "not 1:n");
        for (s, _) in links.iter() {
            ensure!(
                src.spans().iter().any(|span| span.end == s),
                "link to non-final subword {s}"
            );
        }
        let identity = word_align_to_subword(
            &word_align,
            &Segmentation::identity(ns),
            &Segmentation::identity(nt),
        )
        .map_err(|e| e.to_string())?;
        ensure!(identity == word_align, "unsegmented input changed");
    }
    Ok("final-subword links, 1:n, identity on unsegmented".into())
}

fn main() {
    let criteria: [(&str, Criterion); 11] = [
        ("1 worked example compiles", c1_worked_example),
        (
            "2 encoder reproduces worked example",
            c2_encoder_reproduction,
        ),
        ("3 encode/compile round trip", c3_roundtrip),
        ("4 spurious ambiguity", c4_spurious_ambiguity),
        ("5 automaton soundness and safety", c5_automaton),
        ("6 invalid-sequence taxonomy", c6_taxonomy),
        ("7 grammar correspondence", c7_grammar),
        ("8 marker tree", c8_tree),
        ("9 strip to source order", c9_strip),
        ("10 alignment error rate", c10_aer),
        ("11 subword alignment conversion", c11_subwords),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("[PASS] criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] criterion {name}: {why}");
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
