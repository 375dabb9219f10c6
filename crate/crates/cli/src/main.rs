//! `osnmt`: corpus tools for operation sequences.
//!
//! Every input is UTF-8 and line-oriented; `-` stands for stdin or stdout.
//! Lines that fail are reported on the diagnostics stream (stderr by
//! default) with their 1-based line number, an empty line keeps outputs
//! aligned, and the exit status is 1 if any line failed.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use osnmt::encoder::SubwordConvention;
use osnmt::sequence::SequenceCodec;

use commands::{AerOptions, CompileOutputs, Job, SubwordFiles};

#[derive(Parser)]
#[command(name = "osnmt", version, about = "Operation-sequence corpus tools")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Prefix that marks a target word spelled like an operation
    #[arg(long, global = true, default_value_t = '\\')]
    escape: char,
    /// Suffix on non-final subwords of a word
    #[arg(
        long,
        global = true,
        default_value = "@@",
        conflicts_with = "word_final"
    )]
    continuation: String,
    /// Suffix on the final subword of a word instead
    #[arg(long, global = true)]
    word_final: Option<String>,
    /// Index base of printed alignment positions
    #[arg(long, global = true, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    base: u8,
    /// Worker threads (0 = all cores)
    #[arg(short, long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Where line-level diagnostics go (default stderr)
    #[arg(long, global = true)]
    diagnostics: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build operation sequences from sentence pairs and Pharaoh alignments
    Encode {
        src: PathBuf,
        trg: PathBuf,
        align: PathBuf,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Run operation sequences: plain targets plus optional alignments,
    /// trees and marker-annotated targets
    Compile {
        seqs: PathBuf,
        src: PathBuf,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
        #[arg(long)]
        alignment: Option<PathBuf>,
        #[arg(long)]
        tree: Option<PathBuf>,
        #[arg(long)]
        marked: Option<PathBuf>,
    },
    /// Label every sequence and print a frequency table to the diagnostics stream
    Validate {
        seqs: PathBuf,
        src: PathBuf,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Answer `MASK <source_len> <prefix>` requests line by line
    Mask {
        #[arg(default_value = "-")]
        input: PathBuf,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Alignment error rate per sentence and over the corpus
    Aer {
        hyp: PathBuf,
        reference: PathBuf,
        /// Separator of possible links in the reference
        #[arg(long, default_value_t = 'p')]
        possible: char,
        /// Score against the reference as is instead of restricting it to 1:n
        #[arg(long)]
        keep_reference: bool,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Convert word alignments to subword alignments
    SubwordAlign {
        word_align: PathBuf,
        src_words: PathBuf,
        src_subwords: PathBuf,
        trg_words: PathBuf,
        trg_subwords: PathBuf,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Drop all operations except inserted words
    Strip {
        seqs: PathBuf,
        /// Merge subwords into words
        #[arg(long)]
        join: bool,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Print the bracketed marker tree of every sequence
    Tree {
        seqs: PathBuf,
        src: PathBuf,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
    /// Dump the grammar derivation of every sequence
    Derive {
        seqs: PathBuf,
        src: PathBuf,
        #[arg(short, long, default_value = "-")]
        output: PathBuf,
    },
}

fn run(cli: Cli) -> Result<usize> {
    let g = cli.global;
    let mut job = Job {
        codec: SequenceCodec::new(g.escape),
        convention: match g.word_final {
            Some(suffix) => SubwordConvention::WordFinal(suffix),
            None => SubwordConvention::Continuation(g.continuation),
        },
        base: g.base.into(),
        jobs: Some(g.jobs),
        diagnostics: io::Diagnostics::new(g.diagnostics.as_deref())?,
    };
    match cli.command {
        Command::Encode {
            src,
            trg,
            align,
            output,
        } => job.encode(&src, &trg, &align, &output)?,
        Command::Compile {
            seqs,
            src,
            output,
            alignment,
            tree,
            marked,
        } => {
            let outputs = CompileOutputs {
                output,
                alignment,
                tree,
                marked,
            };
            job.compile(&outputs, &seqs, &src)?
        }
        Command::Validate { seqs, src, output } => job.validate(&seqs, &src, &output)?,
        Command::Mask { input, output } => job.mask(&input, &output)?,
        Command::Aer {
            hyp,
            reference,
            possible,
            keep_reference,
            output,
        } => job.aer(
            &AerOptions {
                possible,
                keep_reference,
            },
            &hyp,
            &reference,
            &output,
        )?,
        Command::SubwordAlign {
            word_align,
            src_words,
            src_subwords,
            trg_words,
            trg_subwords,
            output,
        } => {
            let files = SubwordFiles {
                word_align,
                src_words,
                src_subwords,
                trg_words,
                trg_subwords,
            };
            job.subword_align(&files, &output)?
        }
        Command::Strip { seqs, join, output } => job.strip(&seqs, join, &output)?,
        Command::Tree { seqs, src, output } => job.tree(&seqs, &src, &output)?,
        Command::Derive { seqs, src, output } => job.derive(&seqs, &src, &output)?,
    }
    job.diagnostics.flush()?;
    Ok(job.diagnostics.errors())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("osnmt: {e:#}");
            ExitCode::from(2)
        }
    }
}
