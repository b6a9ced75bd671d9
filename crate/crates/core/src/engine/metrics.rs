use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::stats;
use crate::coverage::Policy;

/// Served users of one policy in one sub-frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogRecord {
    /// Global sub-frame index, `drop * subframes + subframe`.
    pub t: usize,
    pub drop: usize,
    pub subframe: usize,
    pub served: Vec<u32>,
}

impl LogRecord {
    pub fn served_count(&self) -> usize {
        self.served.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub policy: Policy,
    pub num_users: usize,
    pub num_cells: usize,
    pub drops: usize,
    pub subframes_per_drop: usize,
    #[serde(skip)]
    pub served_counts: Vec<usize>,
    /// Mean over sub-frames of the number of UEs that received the packet.
    pub avg_packets_delivered: f64,
    /// `avg_packets_delivered / M`, comparable across user counts.
    pub avg_packets_per_ue: f64,
    /// Mean over sub-frames of `(M - served) / C`.
    pub avg_unserved_per_cell: f64,
    /// Fraction of sub-frames each UE slot was served, across drops.
    pub per_ue_service_ratio: Vec<f64>,
    pub drop_avg_packets: Vec<f64>,
    /// 95% Student-t half width over drop means; absent with one drop.
    pub ci95_packets: Option<f64>,
}

impl Metrics {
    /// Aggregates a raw log. Records must be ordered by drop.
    pub fn from_log(
        policy: Policy,
        log: &[LogRecord],
        num_users: usize,
        num_cells: usize,
        drops: usize,
        subframes_per_drop: usize,
    ) -> Self {
        let served_counts: Vec<usize> = log.iter().map(LogRecord::served_count).collect();
        let n = served_counts.len().max(1) as f64;
        let total: usize = served_counts.iter().sum();
        let avg_packets_delivered = total as f64 / n;
        let avg_packets_per_ue = if num_users == 0 {
            0.0
        } else {
            avg_packets_delivered / num_users as f64
        };
        let avg_unserved_per_cell = served_counts
            .iter()
            .map(|&s| (num_users - s) as f64 / num_cells as f64)
            .sum::<f64>()
            / n;

        let mut hits = vec![0usize; num_users];
        for r in log {
            for &k in &r.served {
                hits[k as usize] += 1;
            }
        }
        let per_ue_service_ratio = hits.iter().map(|&h| h as f64 / n).collect();

        let mut drop_avg_packets = vec![0.0; drops];
        let mut drop_len = vec![0usize; drops];
        for r in log {
            drop_avg_packets[r.drop] += r.served_count() as f64;
            drop_len[r.drop] += 1;
        }
        for (m, &len) in drop_avg_packets.iter_mut().zip(&drop_len) {
            *m /= len.max(1) as f64;
        }
        let ci95_packets = stats::ci95_half_width(&drop_avg_packets);

        Self {
            policy,
            num_users,
            num_cells,
            drops,
            subframes_per_drop,
            served_counts,
            avg_packets_delivered,
            avg_packets_per_ue,
            avg_unserved_per_cell,
            per_ue_service_ratio,
            drop_avg_packets,
            ci95_packets,
        }
    }

    pub fn summary_line(&self) -> String {
        let ci = self
            .ci95_packets
            .map_or(String::new(), |h| format!(" (+-{h:.3})"));
        format!(
            "{}: packets/sub-frame {:.3}{ci}, per UE {:.5}, unserved/cell {:.3}, users {}, drops {} x {} sub-frames",
            self.policy,
            self.avg_packets_delivered,
            self.avg_packets_per_ue,
            self.avg_unserved_per_cell,
            self.num_users,
            self.drops,
            self.subframes_per_drop
        )
    }
}

/// One-sided paired test of `a` serving more than `b`, pairing the two
/// policies sub-frame by sub-frame on shared channel draws.
pub fn paired_subframes(a: &Metrics, b: &Metrics) -> Option<stats::PairedTest> {
    let xs: Vec<f64> = a.served_counts.iter().map(|&s| s as f64).collect();
    let ys: Vec<f64> = b.served_counts.iter().map(|&s| s as f64).collect();
    stats::paired_one_sided(&xs, &ys, 0.95)
}

/// As [`paired_subframes`] with per-drop means as the paired samples.
pub fn paired_drops(a: &Metrics, b: &Metrics) -> Option<stats::PairedTest> {
    stats::paired_one_sided(&a.drop_avg_packets, &b.drop_avg_packets, 0.95)
}

/// `t,policy,served_count,served_ids` rows; ids are space separated and
/// left empty unless `with_ids`.
pub fn log_csv(policy: Policy, log: &[LogRecord], with_ids: bool) -> String {
    let mut out = String::from("t,policy,served_count,served_ids\n");
    for r in log {
        let _ = write!(out, "{},{},{},", r.t, policy, r.served_count());
        if with_ids {
            for (i, id) in r.served.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{id}");
            }
        }
        out.push('\n');
    }
    out
}
