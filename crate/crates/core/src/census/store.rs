//! Append-only JSON-lines store for census records.

use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::CensusRecord;
use crate::error::{Error, Result};

pub struct RecordWriter {
    out: BufWriter<File>,
}

impl RecordWriter {
    /// Opens `path` for appending, or truncates it when `append` is false.
    pub fn open(path: &Path, append: bool) -> Result<Self> {
        let file = if append {
            OpenOptions::new().create(true).append(true).open(path)?
        } else {
            File::create(path)?
        };
        Ok(Self {
            out: BufWriter::new(file),
        })
    }

    pub fn append(&mut self, record: &CensusRecord) -> Result<()> {
        serde_json::to_writer(&mut self.out, record).map_err(std::io::Error::from)?;
        self.out.write_all(b"\n")?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}

/// Every record in file order. Blank lines are ignored.
pub fn scan_records(path: &Path) -> Result<Vec<CensusRecord>> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line).map_err(|e| Error::CorruptRecord {
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(rec);
    }
    Ok(out)
}

/// Exponent tuples already recorded under `config_hash`. Records from any
/// other configuration make the file unusable for resuming.
pub fn completed_tuples(path: &Path, config_hash: &str) -> Result<HashSet<Vec<u64>>> {
    let mut done = HashSet::new();
    for r in scan_records(path)? {
        if r.config_hash != config_hash {
            return Err(Error::Precondition(format!(
                "{} holds records for configuration {}, not {config_hash}",
                path.display(),
                r.config_hash
            )));
        }
        done.insert(r.exponents);
    }
    Ok(done)
}
