use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};

fn is_std(path: &Path) -> bool {
    path.as_os_str() == "-"
}

/// Reads a whole UTF-8 file (or stdin for `-`) as lines.
pub fn read_lines(path: &Path) -> Result<Vec<String>> {
    let mut text = String::new();
    if is_std(path) {
        io::stdin()
            .read_to_string(&mut text)
            .context("reading stdin")?;
    } else {
        File::open(path)
            .and_then(|mut f| f.read_to_string(&mut text))
            .with_context(|| format!("reading {}", path.display()))?;
    }
    Ok(text.lines().map(str::to_owned).collect())
}

/// Reads several parallel files and checks that their line counts agree.
/// At most one of them may be stdin.
pub fn read_parallel(paths: &[&Path]) -> Result<Vec<Vec<String>>> {
    if paths.iter().filter(|p| is_std(p)).count() > 1 {
        bail!("at most one input can be read from stdin");
    }
    let files = paths
        .iter()
        .map(|p| read_lines(p))
        .collect::<Result<Vec<_>>>()?;
    if let Some(first) = files.first() {
        for (path, lines) in paths.iter().zip(&files).skip(1) {
            if lines.len() != first.len() {
                bail!(
                    "line count mismatch: {} has {} lines, {} has {}",
                    paths[0].display(),
                    first.len(),
                    path.display(),
                    lines.len()
                );
            }
        }
    }
    Ok(files)
}

pub fn open_output(path: &Path) -> Result<Box<dyn Write>> {
    if is_std(path) {
        Ok(Box::new(BufWriter::new(io::stdout().lock())))
    } else {
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        Ok(Box::new(BufWriter::new(file)))
    }
}

pub fn open_input(path: &Path) -> Result<Box<dyn BufRead>> {
    if is_std(path) {
        Ok(Box::new(io::stdin().lock()))
    } else {
        let file = File::open(path).with_context(|| format!("reading {}", path.display()))?;
        Ok(Box::new(BufReader::new(file)))
    }
}

/// Line-level error sink. Messages carry 1-based line numbers.
pub struct Diagnostics {
    out: Box<dyn Write>,
    errors: usize,
}

impl Diagnostics {
    pub fn new(path: Option<&Path>) -> Result<Self> {
        let out: Box<dyn Write> = match path {
            None => Box::new(io::stderr()),
            Some(p) => open_output(p)?,
        };
        Ok(Diagnostics { out, errors: 0 })
    }

    pub fn error(&mut self, line: usize, message: &str) -> Result<()> {
        self.errors += 1;
        writeln!(self.out, "line {line}: {message}")?;
        Ok(())
    }

    pub fn note(&mut self, text: &str) -> Result<()> {
        writeln!(self.out, "{text}")?;
        Ok(())
    }

    pub fn errors(&self) -> usize {
        self.errors
    }

    pub fn flush(&mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}
