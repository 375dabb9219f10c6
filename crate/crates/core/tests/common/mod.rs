#![allow(dead_code)]

use osnmt::alignment::Alignment;
use osnmt::interpreter::ExecState;
use osnmt::sequence::{Operation, OperationSequence};
use osnmt::token::Sentence;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub const JA_SOURCE: &str = "2000 hr の 安定 動作 を 確認 し た";
pub const EN_TARGET: &str = "stable operation of 2000 hr was confirmed";
pub const JA_EN_LINKS: &str = "0-3 1-4 2-2 3-0 4-1 5-5 7-6";
/// Japanese-English worked example, without the final pop.
pub const JA_EN_ROWS: &str = "SET_MARKER 2000 SRC_POP hr SRC_POP JMP_BWD SET_MARKER of SRC_POP \
                             JMP_BWD stable SRC_POP operation SRC_POP JMP_FWD JMP_FWD was SRC_POP \
                             SRC_POP confirmed SRC_POP";
/// Listed operations plus the final pop that completes the 9-token source.
pub fn ja_en_sequence() -> String {
    format!("{JA_EN_ROWS} SRC_POP")
}

/// Portuguese-English example with word-final `_` subwords.
pub const PT_EN_SUBWORDS: &str =
    "behavior_ SRC_POP of_ SRC_POP SET_MARKER clones_ SRC_POP SRC_POP \
                            SRC_POP SRC_POP SRC_POP JMP_BWD pen n is et um_ SRC_POP JMP_FWD \
                            subjected_ SRC_POP to_ SRC_POP SET_MARKER periods_ SRC_POP SRC_POP \
                            JMP_BWD SET_MARKER restriction_ SRC_POP JMP_BWD SET_MARKER water_ \
                            SRC_POP JMP_BWD controlled_ SRC_POP";
/// Placeholder source; only its length (the pop count) matters.
pub fn pt_en_source() -> Sentence {
    Sentence::source(
        &(1..=15)
            .map(|i| format!("s{i}"))
            .collect::<Vec<_>>()
            .join(" "),
    )
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn sentence(rng: &mut StdRng, len: usize, prefix: &str) -> Sentence {
    let words: Vec<String> = (0..len)
        .map(|_| format!("{prefix}{}", rng.gen_range(0..8)))
        .collect();
    Sentence::source(&words.join(" "))
}

/// Random sentence pair with a random 1:n alignment that may leave target
/// words unaligned. `|x| >= 1`, `|y| >= 0`, both `<= max_len`.
pub fn random_instance(rng: &mut StdRng, max_len: usize) -> (Sentence, Sentence, Alignment) {
    let n_src = rng.gen_range(1..=max_len);
    let n_trg = rng.gen_range(0..=max_len);
    let x = sentence(rng, n_src, "s");
    let y = Sentence::target(&sentence(rng, n_trg, "t").to_string());
    let unaligned = rng.gen_bool(0.3);
    let a = (1..=n_trg)
        .filter_map(|j| {
            let keep = !unaligned || rng.gen_bool(0.7);
            keep.then(|| (j, rng.gen_range(1..=n_src)))
        })
        .collect();
    (x, y, a)
}

/// Random valid sequence built by a random walk over the interpreter: draw
/// operations, keep those the interpreter accepts, stop at completion.
pub fn random_valid_sequence(rng: &mut StdRng, max_src: usize) -> (OperationSequence, Sentence) {
    let n = rng.gen_range(1..=max_src);
    let source = sentence(rng, n, "s");
    let pop_p = rng.gen_range(0.1..0.5);
    let mut state = ExecState::new(n);
    let mut ops = Vec::new();
    while !state.is_complete() {
        let op = if rng.gen_bool(pop_p) {
            Operation::SrcPop
        } else {
            match rng.gen_range(0..6) {
                0 => Operation::SetMarker,
                1 => Operation::JmpFwd,
                2 => Operation::JmpBwd,
                _ => Operation::insert(&format!("w{}", rng.gen_range(0..50))).unwrap(),
            }
        };
        if let Ok(next) = state.clone().step(&op) {
            state = next;
            ops.push(op);
        }
    }
    (OperationSequence::new(ops), source)
}

/// Unconstrained random operations.
pub fn random_ops(rng: &mut StdRng, max_len: usize) -> OperationSequence {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| match rng.gen_range(0..8) {
            0 | 1 => Operation::SrcPop,
            2 => Operation::SetMarker,
            3 => Operation::JmpFwd,
            4 => Operation::JmpBwd,
            _ => Operation::insert(["a", "b", "c"].choose(rng).unwrap()).unwrap(),
        })
        .collect()
}

/// Straightforward string-buffer interpreter kept independent of the library:
/// markers are `\u{0}X<n>` strings, the head is a marker name. Returns the
/// plain target and each word's source position, or `None` if invalid.
pub fn naive_compile(ops: &[Operation], source_len: usize) -> Option<(Vec<String>, Vec<usize>)> {
    let mut buf: Vec<(String, usize)> = vec![("\u{0}X1".into(), 0)];
    let mut head = "\u{0}X1".to_string();
    let mut markers = 1;
    let mut pops = 0;
    for op in ops {
        if pops == source_len {
            return None;
        }
        let head_at = buf.iter().position(|(s, _)| *s == head).unwrap();
        match op {
            Operation::SrcPop => pops += 1,
            Operation::SetMarker => {
                markers += 1;
                buf.insert(head_at, (format!("\u{0}X{markers}"), 0));
            }
            Operation::Insert(t) => buf.insert(head_at, (t.to_string(), pops + 1)),
            Operation::JmpFwd => {
                head = buf[head_at + 1..]
                    .iter()
                    .find(|(s, _)| s.starts_with('\u{0}'))?
                    .0
                    .clone();
            }
            Operation::JmpBwd => {
                head = buf[..head_at]
                    .iter()
                    .rev()
                    .find(|(s, _)| s.starts_with('\u{0}'))?
                    .0
                    .clone();
            }
        }
    }
    if pops != source_len {
        return None;
    }
    let words: Vec<_> = buf
        .into_iter()
        .filter(|(s, _)| !s.starts_with('\u{0}'))
        .collect();
    Some((
        words.iter().map(|(s, _)| s.clone()).collect(),
        words.iter().map(|(_, p)| *p).collect(),
    ))
}
