//! Line-oriented instance format:
//!
//! ```text
//! # comment
//! instance <users> <cells> <prbs>
//! <cell> <prb> : <user> <user> ...
//! ```
//!
//! Omitted (cell, prb) lines are empty sets; a pair may appear only once.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use super::CoverageInstance;
use crate::error::Error;

const WHAT: &str = "instance";

fn format_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Format {
        what: WHAT,
        line,
        msg: msg.into(),
    }
}

impl fmt::Display for CoverageInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "instance {} {} {}",
            self.num_users, self.num_cells, self.num_prbs
        )?;
        for c in 0..self.num_cells {
            for j in 0..self.num_prbs {
                write!(f, "{c} {j} :")?;
                for u in self.set(c, j).ones() {
                    write!(f, " {u}")?;
                }
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

impl FromStr for CoverageInstance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut inst: Option<CoverageInstance> = None;
        let mut seen = HashSet::new();
        for (idx, raw) in s.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some(inst) = inst.as_mut() else {
                inst = Some(parse_header(line, line_no)?);
                continue;
            };
            let (lhs, rhs) = line
                .split_once(':')
                .ok_or_else(|| format_err(line_no, "expected '<cell> <prb> : <users>'"))?;
            let ids: Vec<usize> = lhs
                .split_whitespace()
                .map(|t| {
                    t.parse()
                        .map_err(|_| format_err(line_no, format!("bad index '{t}'")))
                })
                .collect::<Result<_, _>>()?;
            let [c, j] = ids[..] else {
                return Err(format_err(
                    line_no,
                    "expected exactly two indices before ':'",
                ));
            };
            if !seen.insert((c, j)) {
                return Err(format_err(line_no, format!("duplicate set ({c}, {j})")));
            }
            if c >= inst.num_cells() || j >= inst.num_prbs() {
                return Err(format_err(line_no, format!("({c}, {j}) out of range")));
            }
            for tok in rhs.split_whitespace() {
                let u: usize = tok
                    .parse()
                    .map_err(|_| format_err(line_no, format!("bad user id '{tok}'")))?;
                inst.insert(c, j, u)
                    .map_err(|e| format_err(line_no, e.to_string()))?;
            }
        }
        inst.ok_or_else(|| format_err(0, "missing 'instance' header"))
    }
}

fn parse_header(line: &str, line_no: usize) -> Result<CoverageInstance, Error> {
    let mut toks = line.split_whitespace();
    if toks.next() != Some("instance") {
        return Err(format_err(
            line_no,
            "expected 'instance <users> <cells> <prbs>'",
        ));
    }
    let nums: Vec<usize> = toks
        .map(|t| {
            t.parse()
                .map_err(|_| format_err(line_no, format!("bad count '{t}'")))
        })
        .collect::<Result<_, _>>()?;
    let [m, c, n] = nums[..] else {
        return Err(format_err(line_no, "header needs three counts"));
    };
    CoverageInstance::new(m, c, n).map_err(|e| format_err(line_no, e.to_string()))
}
