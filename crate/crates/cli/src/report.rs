use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use forestlab::{Edge, Rational};
use serde_json::{json, Value};

pub enum Failure {
    Input(String),
    Io(io::Error),
}

impl From<forestlab::Error> for Failure {
    fn from(e: forestlab::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

/// JSON-lines sink that counts failed checks.
pub struct Report {
    out: Box<dyn Write>,
    failed: usize,
}

impl Report {
    pub fn open(path: Option<&Path>) -> Result<Self, Failure> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        Ok(Report { out, failed: 0 })
    }

    pub fn line(&mut self, v: Value) -> Result<(), Failure> {
        serde_json::to_writer(&mut self.out, &v).map_err(io::Error::from)?;
        self.out.write_all(b"\n")?;
        Ok(())
    }

    /// Writes the line; a failing one is echoed to stderr as the witness.
    pub fn check(&mut self, holds: bool, v: Value) -> Result<(), Failure> {
        if !holds {
            self.failed += 1;
            eprintln!("FAILED {v}");
        }
        self.line(v)
    }

    pub fn finish(mut self) -> Result<usize, Failure> {
        self.out.flush()?;
        Ok(self.failed)
    }
}

pub fn edges_json(edges: &[Edge]) -> Value {
    json!(edges.iter().map(|e| [e.u(), e.v()]).collect::<Vec<_>>())
}

/// 1-based vertices of a bitset.
pub fn bits(mask: u64) -> Vec<usize> {
    (0..64)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| b + 1)
        .collect()
}

pub fn parse_ratio(s: &str) -> Result<Rational, Failure> {
    s.parse::<Rational>()
        .map_err(|e| Failure::Input(format!("bad rational {s:?}: {e}")))
}
