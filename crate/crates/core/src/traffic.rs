//! Required multicast rate per sub-frame, either constant or driven by a
//! video frame-size trace.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_SUBFRAME_S: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub index: u64,
    pub kind: String,
    pub bits: u64,
}

fn trace_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Trace {
        line,
        msg: msg.into(),
    }
}

/// Parses an ASU-style verbose frame trace.
///
/// Each data line starts with the frame index and carries a frame-type token
/// (`I`, `P`, `B`, ...) and a timestamp in some order, followed by the frame
/// size in bytes: the first integer token after the type. Trailing columns
/// (quality metrics) are ignored. Lines starting with `#` are comments.
pub fn parse_trace(text: &str) -> Result<Vec<Frame>> {
    let mut frames = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut toks = line.split_whitespace();
        let first = toks.next().unwrap_or_default();
        let index: u64 = first
            .parse()
            .map_err(|_| trace_err(line_no, format!("frame index '{first}' is not an integer")))?;
        let mut kind = None;
        let mut bytes = None;
        for tok in toks {
            if kind.is_none() {
                if tok.chars().all(|c| c.is_ascii_alphabetic()) {
                    kind = Some(tok.to_string());
                } else if tok.parse::<f64>().is_err() {
                    return Err(trace_err(line_no, format!("unexpected token '{tok}'")));
                }
                continue;
            }
            if tok.chars().all(|c| c.is_ascii_digit()) {
                bytes =
                    Some(tok.parse::<u64>().map_err(|_| {
                        trace_err(line_no, format!("frame size '{tok}' overflows"))
                    })?);
                break;
            }
        }
        let kind = kind.ok_or_else(|| trace_err(line_no, "missing frame type column"))?;
        let bytes = bytes.ok_or_else(|| trace_err(line_no, "missing frame size column"))?;
        frames.push(Frame {
            index,
            kind,
            bits: bytes
                .checked_mul(8)
                .ok_or_else(|| trace_err(line_no, "frame size overflows"))?,
        });
    }
    if frames.is_empty() {
        return Err(trace_err(0, "trace contains no frames"));
    }
    Ok(frames)
}

pub fn load_trace(path: &Path) -> Result<Vec<Frame>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_trace(&text)
}

/// Deterministic GOP-structured trace in ASU verbose layout, for runs where
/// no real trace is supplied. Frame sizes are in bytes.
pub fn synthetic_trace(num_frames: usize, fps: f64) -> String {
    const GOP: &[u8] = b"IBBPBBPBBPBB";
    let mut out = String::from("# synthetic trace: frame time type size_bytes\n");
    for i in 0..num_frames {
        let kind = GOP[i % GOP.len()] as char;
        let base: u64 = match kind {
            'I' => 2600,
            'P' => 1500,
            _ => 800,
        };
        // slow scene-complexity swing, +-25%
        let swing = ((i as f64) * 2.0 * std::f64::consts::PI / 90.0).sin() * 0.25;
        let bytes = (base as f64 * (1.0 + swing)).round() as u64;
        let _ = writeln!(out, "{i} {:.3} {kind} {bytes}", i as f64 / fps);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spread {
    /// Frame bits split evenly over the frame interval, remainder last.
    #[default]
    Uniform,
    /// All frame bits in the first sub-frame of the interval.
    Burst,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScheduleSource {
    Constant { rate: u64 },
    Trace { path: Option<PathBuf>, fps: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSchedule {
    pub subframe_s: f64,
    /// Required bits per sub-frame.
    pub rates: Vec<u64>,
    pub source: ScheduleSource,
}

/// Sub-frames per video frame, `round(1 / (fps * subframe))`, at least 1.
pub fn subframes_per_frame(fps: f64, subframe_s: f64) -> usize {
    ((1.0 / (fps * subframe_s)).round() as usize).max(1)
}

pub fn schedule_from_trace(
    frames: &[Frame],
    fps: f64,
    subframe_s: f64,
    spread: Spread,
) -> Result<TraceSchedule> {
    if !(fps.is_finite() && fps > 0.0) {
        return Err(Error::Config(format!("fps must be positive, got {fps}")));
    }
    if !(subframe_s.is_finite() && subframe_s > 0.0) {
        return Err(Error::Config("sub-frame duration must be positive".into()));
    }
    let per = subframes_per_frame(fps, subframe_s);
    let mut rates = Vec::with_capacity(frames.len() * per);
    for f in frames {
        match spread {
            Spread::Uniform => {
                let share = f.bits / per as u64;
                let rem = f.bits % per as u64;
                rates.extend(std::iter::repeat_n(share, per - 1));
                rates.push(share + rem);
            }
            Spread::Burst => {
                rates.push(f.bits);
                rates.extend(std::iter::repeat_n(0, per - 1));
            }
        }
    }
    Ok(TraceSchedule {
        subframe_s,
        rates,
        source: ScheduleSource::Trace { path: None, fps },
    })
}

pub fn schedule_constant(rate: u64, len: usize) -> TraceSchedule {
    TraceSchedule {
        subframe_s: DEFAULT_SUBFRAME_S,
        rates: vec![rate; len],
        source: ScheduleSource::Constant { rate },
    }
}

impl TraceSchedule {
    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    /// Required rate at sub-frame `t`; the schedule repeats when `t` runs
    /// past its end.
    pub fn rate_at(&self, t: usize) -> u64 {
        self.rates[t % self.rates.len()]
    }

    pub fn total_bits(&self) -> u64 {
        self.rates.iter().sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,R_bits\n");
        for (t, r) in self.rates.iter().enumerate() {
            let _ = writeln!(out, "{t},{r}");
        }
        out
    }

    /// Reads `t,R_bits` rows back. Rows must be in order starting at 0.
    pub fn rates_from_csv(text: &str) -> Result<Vec<u64>> {
        let err = |line: usize, msg: String| Error::Format {
            what: "schedule CSV",
            line,
            msg,
        };
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, "t,R_bits")) => {}
            _ => return Err(err(1, "expected header 't,R_bits'".into())),
        }
        let mut rates = Vec::new();
        for (idx, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let (t, r) = line
                .split_once(',')
                .ok_or_else(|| err(idx + 1, format!("expected 't,R_bits', got '{line}'")))?;
            let t: usize = t
                .trim()
                .parse()
                .map_err(|_| err(idx + 1, format!("bad t '{t}'")))?;
            if t != rates.len() {
                return Err(err(idx + 1, format!("expected t={}, got {t}", rates.len())));
            }
            rates.push(
                r.trim()
                    .parse()
                    .map_err(|_| err(idx + 1, format!("bad rate '{r}'")))?,
            );
        }
        Ok(rates)
    }
}
