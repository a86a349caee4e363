//! Trace files: every agent position at every iteration of a run.
//!
//! A trace is line-delimited JSON. The first line is the header, every other
//! line holds one completed iteration:
//!
//! ```text
//! {"record":"header","format":"woa-balance-trace","version":1,"function":"F1","seed":7,"agents":30,"dims":30,"iterations":500}
//! {"record":"iteration","iteration":1,"positions":[[0.25,-3.5],[1.0,2.0]]}
//! ```
//!
//! `positions` is `agents` rows of `dims` numbers. Floats are written in the
//! shortest form that parses back to the identical `f64`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::woa::{IterationHook, IterationView};

pub const TRACE_FORMAT: &str = "woa-balance-trace";
pub const TRACE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub format: String,
    pub version: u32,
    pub function: String,
    pub seed: u64,
    pub agents: usize,
    pub dims: usize,
    pub iterations: usize,
}

impl TraceHeader {
    pub fn new(function: &str, seed: u64, agents: usize, dims: usize, iterations: usize) -> Self {
        Self {
            format: TRACE_FORMAT.to_string(),
            version: TRACE_VERSION,
            function: function.to_string(),
            seed,
            agents,
            dims,
            iterations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceIteration {
    pub iteration: usize,
    pub positions: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
enum TraceLine {
    Header(TraceHeader),
    Iteration(TraceIteration),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub header: TraceHeader,
    pub iterations: Vec<TraceIteration>,
}

impl Trace {
    pub fn new(header: TraceHeader) -> Self {
        Self {
            header,
            iterations: Vec::new(),
        }
    }

    /// Checks that every iteration carries an `agents x dims` matrix.
    pub fn validate(&self) -> Result<()> {
        let h = &self.header;
        if h.agents < 2 || h.dims == 0 {
            return Err(Error::TraceFormat {
                location: "header".into(),
                message: format!(
                    "need agents >= 2 and dims >= 1, got {} and {}",
                    h.agents, h.dims
                ),
            });
        }
        if self.iterations.is_empty() {
            return Err(Error::TraceFormat {
                location: "trace".into(),
                message: "no iteration records".into(),
            });
        }
        for rec in &self.iterations {
            let bad = if rec.positions.len() != h.agents {
                Some(format!(
                    "{} agents, expected {}",
                    rec.positions.len(),
                    h.agents
                ))
            } else {
                rec.positions
                    .iter()
                    .position(|row| row.len() != h.dims)
                    .map(|i| {
                        format!(
                            "agent {i} has {} coordinates, expected {}",
                            rec.positions[i].len(),
                            h.dims
                        )
                    })
            };
            if let Some(message) = bad {
                return Err(Error::TraceFormat {
                    location: format!("iteration {}", rec.iteration),
                    message,
                });
            }
        }
        Ok(())
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        let mut line = serde_json::to_string(&TraceLine::Header(self.header.clone()))?;
        line.push('\n');
        let io = |e| Error::io("<trace>", e);
        w.write_all(line.as_bytes()).map_err(io)?;
        for rec in &self.iterations {
            // Borrowing serializer avoids cloning large matrices.
            #[derive(Serialize)]
            struct Borrowed<'a> {
                record: &'static str,
                iteration: usize,
                positions: &'a [Vec<f64>],
            }
            serde_json::to_writer(
                &mut w,
                &Borrowed {
                    record: "iteration",
                    iteration: rec.iteration,
                    positions: &rec.positions,
                },
            )?;
            w.write_all(b"\n").map_err(io)?;
        }
        w.flush().map_err(io)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_to(BufWriter::new(file)).map_err(|e| match e {
            Error::Io { source, .. } => Error::io(path, source),
            other => other,
        })
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut header: Option<TraceHeader> = None;
        let mut iterations = Vec::new();
        for (idx, line) in r.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| Error::io("<trace>", e))?;
            if line.trim().is_empty() {
                continue;
            }
            let parsed: TraceLine =
                serde_json::from_str(&line).map_err(|e| Error::TraceFormat {
                    location: format!("line {lineno}"),
                    message: e.to_string(),
                })?;
            match (parsed, header.is_some()) {
                (TraceLine::Header(h), false) => {
                    if h.format != TRACE_FORMAT || h.version != TRACE_VERSION {
                        return Err(Error::TraceFormat {
                            location: format!("line {lineno}"),
                            message: format!("unsupported format {} v{}", h.format, h.version),
                        });
                    }
                    header = Some(h);
                }
                (TraceLine::Header(_), true) => {
                    return Err(Error::TraceFormat {
                        location: format!("line {lineno}"),
                        message: "duplicate header".into(),
                    })
                }
                (TraceLine::Iteration(_), false) => {
                    return Err(Error::TraceFormat {
                        location: format!("line {lineno}"),
                        message: "iteration record before header".into(),
                    })
                }
                (TraceLine::Iteration(rec), true) => iterations.push(rec),
            }
        }
        let header = header.ok_or_else(|| Error::TraceFormat {
            location: "line 1".into(),
            message: "missing header".into(),
        })?;
        let trace = Trace { header, iterations };
        trace.validate()?;
        Ok(trace)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_from(BufReader::new(file))
    }
}

/// Hook that appends every iteration to an in-memory [`Trace`].
#[derive(Debug)]
pub struct TraceRecorder {
    trace: Trace,
}

impl TraceRecorder {
    pub fn new(header: TraceHeader) -> Self {
        Self {
            trace: Trace::new(header),
        }
    }

    pub fn into_trace(self) -> Trace {
        self.trace
    }
}

impl IterationHook for TraceRecorder {
    fn on_iteration(&mut self, view: &IterationView<'_>) {
        self.trace.iterations.push(TraceIteration {
            iteration: view.iteration,
            positions: view.agents.iter().map(|a| a.position.clone()).collect(),
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Trace {
        let mut t = Trace::new(TraceHeader::new("F1", 3, 2, 2, 2));
        t.iterations.push(TraceIteration {
            iteration: 1,
            positions: vec![vec![0.1, -2.5e-300], vec![1.0 / 3.0, 7.0]],
        });
        t.iterations.push(TraceIteration {
            iteration: 2,
            positions: vec![vec![f64::MIN_POSITIVE, 1e21], vec![0.0, -0.0]],
        });
        t
    }

    #[test]
    fn round_trip_is_exact() {
        let t = sample();
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        let back = Trace::read_from(buf.as_slice()).unwrap();
        assert_eq!(back.header, t.header);
        for (a, b) in back.iterations.iter().zip(&t.iterations) {
            for (ra, rb) in a.positions.iter().zip(&b.positions) {
                for (x, y) in ra.iter().zip(rb) {
                    assert_eq!(x.to_bits(), y.to_bits());
                }
            }
        }
    }

    #[test]
    fn ragged_trace_names_iteration() {
        let mut t = sample();
        t.iterations[1].positions[1].pop();
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        match Trace::read_from(buf.as_slice()) {
            Err(Error::TraceFormat { location, .. }) => assert_eq!(location, "iteration 2"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_header_is_rejected() {
        let text = "{\"record\":\"iteration\",\"iteration\":1,\"positions\":[[1.0],[2.0]]}\n";
        assert!(matches!(
            Trace::read_from(text.as_bytes()),
            Err(Error::TraceFormat { .. })
        ));
    }

    #[test]
    fn garbage_line_reports_line_number() {
        let mut buf = Vec::new();
        sample().write_to(&mut buf).unwrap();
        buf.extend_from_slice(b"not json\n");
        match Trace::read_from(buf.as_slice()) {
            Err(Error::TraceFormat { location, .. }) => assert_eq!(location, "line 4"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
