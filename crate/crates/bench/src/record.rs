use std::fs::File;
use std::io::{self, Write};
use std::path::Path;
use std::time::Duration;

use anyhow::{Context, Result};
use serde::Serialize;

pub const HEADER: &str = "experiment,algo,n,m,q,gamma,dataset,batch,workers,rep,seed,phase,nanos";

/// One timed phase of one repetition. Fields that do not apply to the
/// experiment are left empty.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RunRecord {
    pub experiment: String,
    pub algo: String,
    pub n: usize,
    pub m: Option<usize>,
    pub q: Option<usize>,
    pub gamma: Option<String>,
    pub dataset: String,
    pub batch: Option<usize>,
    pub workers: usize,
    pub rep: usize,
    pub seed: u64,
    pub phase: String,
    pub nanos: u64,
}

impl RunRecord {
    pub fn with_phase(&self, phase: &str, elapsed: Duration) -> RunRecord {
        RunRecord {
            phase: phase.to_string(),
            // a zero reading would only mean the clock was too coarse
            nanos: (elapsed.as_nanos() as u64).max(1),
            ..self.clone()
        }
    }
}

pub struct RecordSink {
    writer: csv::Writer<Box<dyn Write>>,
}

impl RecordSink {
    pub fn open(path: Option<&Path>) -> Result<Self> {
        let out: Box<dyn Write> = match path {
            Some(p) => Box::new(io::BufWriter::new(
                File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
            )),
            None => Box::new(io::stdout().lock()),
        };
        Ok(Self { writer: csv::Writer::from_writer(out) })
    }

    pub fn push(&mut self, record: &RunRecord) -> Result<()> {
        self.writer.serialize(record)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<()> {
        self.writer.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_matches_fields() {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(RunRecord::default().with_phase("build", Duration::ZERO)).unwrap();
        let text = String::from_utf8(w.into_inner().unwrap()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(HEADER));
        assert_eq!(lines.next(), Some(",,0,,,,,,0,0,0,build,1"));
    }
}
