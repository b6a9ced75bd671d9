//! Randomised comparison of the greedy against the exhaustive optimum.

use rand::Rng;
use serde::Serialize;

use crate::coverage::{solve_cga_traced, solve_exact, CoverageInstance};
use crate::error::Result;
use crate::rng::{self, tag};

pub const GREEDY_BOUND: f64 = 1.0 - 1.0 / std::f64::consts::E;

/// Random instance with `1..=max_*` users, cells and PRBs. Each user joins
/// each set independently with a per-instance probability in `[0.1, 0.6)`.
pub fn random_instance<R: Rng + ?Sized>(
    rng: &mut R,
    max_users: usize,
    max_cells: usize,
    max_prbs: usize,
) -> CoverageInstance {
    let m = rng.random_range(1..=max_users.max(1));
    let c = rng.random_range(1..=max_cells.max(1));
    let n = rng.random_range(1..=max_prbs.max(1));
    let p = rng.random_range(0.1..0.6);
    let mut inst = CoverageInstance::new(m, c, n).expect("nonzero dimensions");
    for ci in 0..c {
        for j in 0..n {
            for u in 0..m {
                if rng.random_bool(p) {
                    inst.insert(ci, j, u).expect("in range");
                }
            }
        }
    }
    inst
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceCheck {
    pub optimum: usize,
    pub greedy: usize,
    /// `greedy / optimum`, 1 when nothing can be served.
    pub ratio: f64,
    /// Per-iteration gain at least `(OPT - m_n) / C`.
    pub gain_bound_holds: bool,
    /// `OPT - m_n <= (1 - 1/C)^n OPT` after every iteration.
    pub gap_bound_holds: bool,
}

pub fn check_instance(inst: &CoverageInstance) -> Result<InstanceCheck> {
    let opt = solve_exact(inst)?.served_count;
    let (res, steps) = solve_cga_traced(inst);
    let c = inst.num_cells() as u128;
    let opt128 = opt as u128;
    let mut covered = 0u128;
    let mut gain_ok = true;
    let mut gap_ok = true;
    for (n, step) in steps.iter().enumerate() {
        let gap = opt128.saturating_sub(covered);
        if (step.gain as u128) * c < gap {
            gain_ok = false;
        }
        covered += step.gain as u128;
        // (OPT - m_n) * C^n <= (C - 1)^n * OPT
        let n = (n + 1) as u32;
        let gap = opt128.saturating_sub(covered);
        if gap * c.pow(n) > (c - 1).pow(n) * opt128 {
            gap_ok = false;
        }
    }
    Ok(InstanceCheck {
        optimum: opt,
        greedy: res.served_count,
        ratio: if opt == 0 {
            1.0
        } else {
            res.served_count as f64 / opt as f64
        },
        gain_bound_holds: gain_ok,
        gap_bound_holds: gap_ok,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub instances: usize,
    pub min_ratio: f64,
    pub ratio_violations: usize,
    pub gain_bound_violations: usize,
    pub gap_bound_violations: usize,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.ratio_violations == 0
    }

    pub fn summary_line(&self) -> String {
        format!(
            "oracle-check: {} instances, min CGA/OPT ratio {:.4} (bound {:.4}), {} below bound, per-iteration gain bound violated on {}, gap bound violated on {}",
            self.instances,
            self.min_ratio,
            GREEDY_BOUND,
            self.ratio_violations,
            self.gain_bound_violations,
            self.gap_bound_violations
        )
    }
}

pub fn run_oracle(
    instances: usize,
    max_users: usize,
    max_cells: usize,
    max_prbs: usize,
    seed: u64,
) -> Result<OracleReport> {
    let mut rng = rng::stream(seed, &[tag::ORACLE]);
    let mut report = OracleReport {
        instances,
        min_ratio: 1.0,
        ratio_violations: 0,
        gain_bound_violations: 0,
        gap_bound_violations: 0,
    };
    for _ in 0..instances {
        let inst = random_instance(&mut rng, max_users, max_cells, max_prbs);
        let check = check_instance(&inst)?;
        report.min_ratio = report.min_ratio.min(check.ratio);
        if (check.greedy as f64) < GREEDY_BOUND * check.optimum as f64 {
            report.ratio_violations += 1;
        }
        report.gain_bound_violations += usize::from(!check.gain_bound_holds);
        report.gap_bound_violations += usize::from(!check.gap_bound_holds);
    }
    Ok(report)
}
