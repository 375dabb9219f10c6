use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use anyhow::Result;
use osnmt::batch::{map_ordered, with_threads};
use osnmt::encoder::{join_subwords, SubwordConvention};
use osnmt::interpreter::CompileError;
use osnmt::metrics::AerCounts;
use osnmt::pipeline::{self, SubwordLine, ValidityReport};
use osnmt::sequence::SequenceCodec;
use osnmt::{automaton, Error};

use crate::io::{open_input, open_output, read_parallel, Diagnostics};

/// Settings shared by every subcommand.
pub struct Job {
    pub codec: SequenceCodec,
    pub convention: SubwordConvention,
    pub base: usize,
    pub jobs: Option<usize>,
    pub diagnostics: Diagnostics,
}

/// Diagnostic text for a failed line. Invalid sequences are reported by
/// their label.
fn describe(e: &Error) -> String {
    let violation = match e {
        Error::Compile(CompileError::Invalid(v)) => Some(*v),
        Error::Grammar(osnmt::grammar::GrammarError::Invalid(v)) => Some(*v),
        _ => None,
    };
    match violation {
        Some(v) => format!("{} ({v})", v.label()),
        None => e.to_string(),
    }
}

/// Extra per-line output of `compile`.
type Field = fn(&pipeline::CompiledLine) -> &str;

impl Job {
    /// Runs `f` over line indices `0..n`, in parallel when enabled, and
    /// returns results in input order.
    fn run<T, F>(&self, n: usize, f: F) -> Vec<Result<T, Error>>
    where
        T: Send,
        F: Fn(usize) -> Result<T, Error> + Sync + Send,
    {
        let indices: Vec<usize> = (0..n).collect();
        with_threads(self.jobs, || map_ordered(&indices, |&i| f(i)))
    }

    /// Writes one line per result; failed lines become empty lines and a
    /// diagnostic.
    fn emit<T: AsRef<str>>(
        &mut self,
        out: &mut dyn Write,
        results: &[Result<T, Error>],
    ) -> Result<()> {
        for (i, r) in results.iter().enumerate() {
            match r {
                Ok(text) => writeln!(out, "{}", text.as_ref())?,
                Err(e) => {
                    writeln!(out)?;
                    self.diagnostics.error(i + 1, &describe(e))?;
                }
            }
        }
        out.flush()?;
        Ok(())
    }

    pub fn encode(
        &mut self,
        src: &Path,
        trg: &Path,
        align: &Path,
        output: &Path,
    ) -> Result<()> {
        let files = read_parallel(&[src, trg, align])?;
        let (s, t, a) = (&files[0], &files[1], &files[2]);
        let codec = &self.codec;
        let results = self.run(s.len(), |i| {
            pipeline::encode_line(codec, &s[i], &t[i], &a[i])
        });
        self.emit(&mut open_output(output)?, &results)
    }

    pub fn compile(&mut self, args: &CompileOutputs, seqs: &Path, src: &Path) -> Result<()> {
        let files = read_parallel(&[seqs, src])?;
        let (q, s) = (&files[0], &files[1]);
        let (codec, base) = (&self.codec, self.base);
        let results = self.run(q.len(), |i| {
            pipeline::compile_line(codec, &q[i], &s[i], base)
        });

        let mut target = open_output(&args.output)?;
        let mut extra: Vec<(Box<dyn Write>, Field)> = Vec::new();
        if let Some(p) = &args.alignment {
            extra.push((open_output(p)?, |c| &c.alignment));
        }
        if let Some(p) = &args.tree {
            extra.push((open_output(p)?, |c| &c.tree));
        }
        if let Some(p) = &args.marked {
            extra.push((open_output(p)?, |c| &c.marked));
        }
        for (i, r) in results.iter().enumerate() {
            match r {
                Ok(c) => {
                    writeln!(target, "{}", c.plain)?;
                    for (out, field) in &mut extra {
                        writeln!(out, "{}", field(c))?;
                    }
                }
                Err(e) => {
                    writeln!(target)?;
                    for (out, _) in &mut extra {
                        writeln!(out)?;
                    }
                    self.diagnostics.error(i + 1, &describe(e))?;
                }
            }
        }
        target.flush()?;
        for (out, _) in &mut extra {
            out.flush()?;
        }
        Ok(())
    }

    pub fn validate(&mut self, seqs: &Path, src: &Path, output: &Path) -> Result<()> {
        let files = read_parallel(&[seqs, src])?;
        let (q, s) = (&files[0], &files[1]);
        let codec = &self.codec;
        let results = self.run(q.len(), |i| pipeline::validate_line(codec, &q[i], &s[i]));
        let report: ValidityReport = results
            .iter()
            .filter_map(|r| r.as_ref().ok().copied())
            .collect();
        let labels: Vec<Result<&str, Error>> =
            results.into_iter().map(|r| r.map(|v| v.label())).collect();
        self.emit(&mut open_output(output)?, &labels)?;
        self.diagnostics.note(&report.to_string())
    }

    /// Answers mask requests one line at a time, flushing after each so it
    /// can sit behind a decoder pipe.
    pub fn mask(&mut self, input: &Path, output: &Path) -> Result<()> {
        let mut out = open_output(output)?;
        for (i, line) in open_input(input)?.lines().enumerate() {
            let response = automaton::mask_response(&line?, &self.codec);
            if response == "ERR malformed" {
                self.diagnostics.error(i + 1, "malformed request")?;
            }
            writeln!(out, "{response}")?;
            out.flush()?;
        }
        Ok(())
    }

    pub fn aer(
        &mut self,
        args: &AerOptions,
        hyp: &Path,
        reference: &Path,
        output: &Path,
    ) -> Result<()> {
        let files = read_parallel(&[hyp, reference])?;
        let (h, r) = (&files[0], &files[1]);
        let results = self.run(h.len(), |i| {
            pipeline::aer_line(&h[i], &r[i], args.possible, !args.keep_reference)
        });
        let mut out = open_output(output)?;
        let mut total = AerCounts::default();
        for (i, res) in results.iter().enumerate() {
            match res {
                Ok(c) => {
                    total += *c;
                    writeln!(out, "{}\t{:.6}", i + 1, c.aer())?;
                }
                Err(e) => {
                    writeln!(out, "{}\t-", i + 1)?;
                    self.diagnostics.error(i + 1, &describe(e))?;
                }
            }
        }
        writeln!(out, "corpus\t{:.6}", total.aer())?;
        out.flush()?;
        Ok(())
    }

    pub fn subword_align(&mut self, files: &SubwordFiles, output: &Path) -> Result<()> {
        let lines = read_parallel(&[
            files.word_align.as_path(),
            files.src_words.as_path(),
            files.src_subwords.as_path(),
            files.trg_words.as_path(),
            files.trg_subwords.as_path(),
        ])?;
        let (convention, base) = (&self.convention, self.base);
        let results = self.run(lines[0].len(), |i| {
            let line = SubwordLine {
                word_align: &lines[0][i],
                src_words: &lines[1][i],
                src_subwords: &lines[2][i],
                trg_words: &lines[3][i],
                trg_subwords: &lines[4][i],
            };
            pipeline::subword_align_line(&line, convention, base)
        });
        self.emit(&mut open_output(output)?, &results)
    }

    pub fn strip(&mut self, seqs: &Path, join: bool, output: &Path) -> Result<()> {
        let files = read_parallel(&[seqs])?;
        let (codec, convention) = (&self.codec, &self.convention);
        let results = self.run(files[0].len(), |i| {
            let stripped = pipeline::strip_line(codec, &files[0][i])?;
            Ok(if join {
                let words: Vec<&str> = stripped.split(' ').filter(|w| !w.is_empty()).collect();
                join_subwords(&words, convention).join(" ")
            } else {
                stripped
            })
        });
        self.emit(&mut open_output(output)?, &results)
    }

    pub fn tree(&mut self, seqs: &Path, src: &Path, output: &Path) -> Result<()> {
        let files = read_parallel(&[seqs, src])?;
        let codec = &self.codec;
        let results = self.run(files[0].len(), |i| {
            pipeline::tree_line(codec, &files[0][i], &files[1][i])
        });
        self.emit(&mut open_output(output)?, &results)
    }

    /// One block per input line, each followed by a blank line.
    pub fn derive(&mut self, seqs: &Path, src: &Path, output: &Path) -> Result<()> {
        let files = read_parallel(&[seqs, src])?;
        let codec = &self.codec;
        let results = self.run(files[0].len(), |i| {
            pipeline::derive_line(codec, &files[0][i], &files[1][i]).map(|d| format!("{d}\n"))
        });
        self.emit(&mut open_output(output)?, &results)
    }
}

pub struct CompileOutputs {
    pub output: PathBuf,
    pub alignment: Option<PathBuf>,
    pub tree: Option<PathBuf>,
    pub marked: Option<PathBuf>,
}

pub struct AerOptions {
    pub possible: char,
    pub keep_reference: bool,
}

pub struct SubwordFiles {
    pub word_align: PathBuf,
    pub src_words: PathBuf,
    pub src_subwords: PathBuf,
    pub trg_words: PathBuf,
    pub trg_subwords: PathBuf,
}
