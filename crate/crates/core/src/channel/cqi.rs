use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Spectral efficiencies (bits per resource element) of the 15 LTE CQI
/// indices for 64-QAM.
pub const LTE_CQI_EFFICIENCIES: [f64; 15] = [
    0.1523, 0.2344, 0.3770, 0.6016, 0.8770, 1.1758, 1.4766, 1.9141, 2.4063, 2.7305, 3.3223, 3.9023,
    4.5234, 5.1152, 5.5547,
];

const REFERENCE_PRB_HZ: f64 = 180e3;
const REFERENCE_SUBFRAME_S: f64 = 1e-3;
const SHIPPED_V1: &str = include_str!("../../data/cqi_table_v1.txt");

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CqiStep {
    pub min_snr_db: f64,
    /// Bits per 180 kHz PRB per 1 ms sub-frame.
    pub bits: u32,
}

/// Monotone SNR-to-rate step table.
///
/// Text form: one `min_snr_db bits_per_prb_per_subframe` pair per line, both
/// columns strictly increasing; `#` starts a comment and a `# cqi-table <tag>`
/// comment names the version.
#[derive(Debug, Clone, PartialEq)]
pub struct CqiTable {
    version: String,
    steps: Vec<CqiStep>,
}

impl CqiTable {
    pub fn new(version: impl Into<String>, steps: Vec<CqiStep>) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::invalid("CQI table needs at least one step"));
        }
        for w in steps.windows(2) {
            if !(w[1].min_snr_db > w[0].min_snr_db && w[1].bits > w[0].bits) {
                return Err(Error::invalid(format!(
                    "CQI steps must strictly increase: ({}, {}) then ({}, {})",
                    w[0].min_snr_db, w[0].bits, w[1].min_snr_db, w[1].bits
                )));
            }
        }
        if steps.iter().any(|s| !s.min_snr_db.is_finite()) {
            return Err(Error::invalid("CQI thresholds must be finite"));
        }
        Ok(Self {
            version: version.into(),
            steps,
        })
    }

    /// The table shipped with the crate (`data/cqi_table_v1.txt`).
    pub fn shipped() -> Self {
        SHIPPED_V1.parse().expect("shipped CQI table is valid")
    }

    /// Thresholds from Shannon capacity backed off by `margin_db`:
    /// step `i` needs `10 log10(2^eff_i - 1) + margin_db`, and carries
    /// `round(eff_i * data_res_per_prb)` bits.
    pub fn shannon(margin_db: f64, data_res_per_prb: f64, efficiencies: &[f64]) -> Result<Self> {
        let steps = efficiencies
            .iter()
            .map(|&eff| CqiStep {
                min_snr_db: 10.0 * (eff.exp2() - 1.0).log10() + margin_db,
                bits: (eff * data_res_per_prb).round() as u32,
            })
            .collect();
        Self::new(format!("shannon-margin-{margin_db}"), steps)
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn steps(&self) -> &[CqiStep] {
        &self.steps
    }

    pub fn top_bits(&self) -> u32 {
        self.steps.last().map_or(0, |s| s.bits)
    }

    /// Bits per 180 kHz / 1 ms PRB at this SNR; 0 below the first threshold.
    pub fn bits_at(&self, snr_db: f64) -> u32 {
        let idx = self.steps.partition_point(|s| s.min_snr_db <= snr_db);
        if idx == 0 {
            0
        } else {
            self.steps[idx - 1].bits
        }
    }

    /// Decodable bits per sub-frame on one PRB, scaled from the reference
    /// 180 kHz / 1 ms grid.
    pub fn rate_from_snr(&self, snr_db: f64, prb_bandwidth_hz: f64, subframe_s: f64) -> u32 {
        let bits = self.bits_at(snr_db);
        let scale = (prb_bandwidth_hz / REFERENCE_PRB_HZ) * (subframe_s / REFERENCE_SUBFRAME_S);
        if scale == 1.0 {
            bits
        } else {
            (f64::from(bits) * scale).floor() as u32
        }
    }
}

impl Default for CqiTable {
    fn default() -> Self {
        Self::shipped()
    }
}

impl FromStr for CqiTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |line: usize, msg: String| Error::Format {
            what: "CQI table",
            line,
            msg,
        };
        let mut version = String::from("unversioned");
        let mut steps = Vec::new();
        for (idx, raw) in s.lines().enumerate() {
            let line = raw.trim();
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(tag) = comment.trim().strip_prefix("cqi-table") {
                    version = tag.trim().to_string();
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let [snr, bits] = toks[..] else {
                return Err(err(idx + 1, format!("expected two columns, got '{line}'")));
            };
            steps.push(CqiStep {
                min_snr_db: snr
                    .parse()
                    .map_err(|_| err(idx + 1, format!("bad SNR '{snr}'")))?,
                bits: bits
                    .parse()
                    .map_err(|_| err(idx + 1, format!("bad bit count '{bits}'")))?,
            });
        }
        Self::new(version, steps).map_err(|e| err(0, e.to_string()))
    }
}

impl fmt::Display for CqiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# cqi-table {}", self.version)?;
        for s in &self.steps {
            writeln!(f, "{} {}", s.min_snr_db, s.bits)?;
        }
        Ok(())
    }
}
