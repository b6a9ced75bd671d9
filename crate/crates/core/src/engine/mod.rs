//! Sub-frame loop: draw channels, build the allocation problem, run a policy,
//! log who was served.
//!
//! Random streams are keyed by `(seed, purpose, drop, sub-frame)`, so every
//! policy evaluated in one call sees the same drops and the same fading, and
//! drops can be simulated in parallel without changing the output.

mod metrics;
pub mod stats;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelModel, ChannelParams, CqiTable, RateMatrix};
use crate::coverage::{
    build_instance, solve_cga, solve_dga, solve_exact_with_cap, solve_mbsfn, solve_sc,
    CoverageInstance, CoverageResult, DgaCounting, Policy, DEFAULT_EXACT_CAP,
};
use crate::error::{Error, Result};
use crate::rng::{self, tag};
use crate::topology::{self, ConnectivityMode, NetworkScenario};
use crate::traffic::{schedule_constant, TraceSchedule};

pub use metrics::{log_csv, paired_drops, paired_subframes, LogRecord, Metrics};

/// Default constant multicast rate, bits per sub-frame.
pub const DEFAULT_RATE_BITS: u64 = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DgaCountMode {
    /// A cell counts every user connected to it.
    #[default]
    Connected,
    /// A cell counts only users whose primary cell it is.
    Primary,
}

impl FromStr for DgaCountMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "connected" => Ok(Self::Connected),
            "primary" => Ok(Self::Primary),
            _ => Err(Error::Config(format!(
                "unknown dga-count '{s}' (expected primary|connected)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub ues_per_cell: usize,
    pub radius_m: f64,
    pub edge_threshold: f64,
    /// Candidate PRBs per cell.
    pub num_prbs: usize,
    pub channel: ChannelParams,
    pub cqi: CqiTable,
    pub policy: Policy,
    pub dga_count: DgaCountMode,
    pub schedule: TraceSchedule,
    /// Sub-frames per drop.
    pub subframes: usize,
    pub seed: u64,
    pub drops: usize,
    pub exact_cap: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            ues_per_cell: 10,
            radius_m: topology::DEFAULT_RADIUS_M,
            edge_threshold: topology::DEFAULT_EDGE_THRESHOLD,
            num_prbs: 100,
            channel: ChannelParams::default(),
            cqi: CqiTable::shipped(),
            policy: Policy::Cga,
            dga_count: DgaCountMode::Connected,
            schedule: schedule_constant(DEFAULT_RATE_BITS, 1000),
            subframes: 1000,
            seed: 1,
            drops: 10,
            exact_cap: DEFAULT_EXACT_CAP,
        }
    }
}

impl SimConfig {
    pub fn num_users(&self) -> usize {
        self.ues_per_cell * topology::HEX7_CELLS
    }

    pub fn validate(&self) -> Result<()> {
        if self.subframes == 0 {
            return Err(Error::Config("need at least one sub-frame".into()));
        }
        if self.drops == 0 {
            return Err(Error::Config("need at least one drop".into()));
        }
        if self.num_prbs == 0 {
            return Err(Error::Config("need at least one PRB".into()));
        }
        if self.schedule.is_empty() {
            return Err(Error::Config("rate schedule is empty".into()));
        }
        self.channel.validate()?;
        self.check_exact(self.policy)
    }

    fn check_exact(&self, policy: Policy) -> Result<()> {
        if policy != Policy::Exact {
            return Ok(());
        }
        let candidates = (0..topology::HEX7_CELLS)
            .fold(1u128, |acc, _| acc.saturating_mul(self.num_prbs as u128));
        if candidates > u128::from(self.exact_cap) {
            return Err(Error::CapExceeded {
                candidates,
                cap: self.exact_cap,
            });
        }
        Ok(())
    }
}

/// One UE placement with its static channel state.
#[derive(Debug, Clone)]
pub struct DropState {
    pub index: usize,
    pub mc: NetworkScenario,
    pub sc: NetworkScenario,
    pub channel: ChannelModel,
    mc_conn: Vec<Vec<usize>>,
    sc_conn: Vec<Vec<usize>>,
    primaries: Vec<usize>,
}

impl DropState {
    pub fn new(config: &SimConfig, index: usize) -> Result<Self> {
        let mut topo_rng = rng::stream(config.seed, &[tag::TOPOLOGY, index as u64]);
        let mc = topology::build_hex7(
            config.radius_m,
            config.ues_per_cell,
            config.edge_threshold,
            &mut topo_rng,
        )?;
        let sc = mc.connectivity_mode(ConnectivityMode::Sc);
        let mut shadow_rng = rng::stream(config.seed, &[tag::SHADOWING, index as u64]);
        let channel = ChannelModel::for_scenario(
            config.channel.clone(),
            config.cqi.clone(),
            config.num_prbs,
            &mc,
            &mut shadow_rng,
        )?;
        Ok(Self {
            index,
            mc_conn: mc.connectivity(),
            sc_conn: sc.connectivity(),
            primaries: mc.primaries(),
            mc,
            sc,
            channel,
        })
    }

    /// Rates for sub-frame `t` of this drop.
    pub fn rates(&self, config: &SimConfig, t: usize) -> RateMatrix {
        let mut s = rng::stream(config.seed, &[tag::FADING, self.index as u64, t as u64]);
        self.channel.sample_subframe(&mut s)
    }

    pub fn instance(
        &self,
        rates: &RateMatrix,
        required: u64,
        mode: ConnectivityMode,
    ) -> Result<CoverageInstance> {
        let conn = match mode {
            ConnectivityMode::Mc => &self.mc_conn,
            ConnectivityMode::Sc => &self.sc_conn,
        };
        build_instance(rates, required, conn)
    }

    /// Runs `policy` on an instance built for the policy's connectivity.
    pub fn solve(
        &self,
        config: &SimConfig,
        policy: Policy,
        inst: &CoverageInstance,
    ) -> Result<CoverageResult> {
        Ok(match policy {
            Policy::Cga => solve_cga(inst),
            Policy::Dga => match config.dga_count {
                DgaCountMode::Connected => solve_dga(inst, DgaCounting::Connected),
                DgaCountMode::Primary => solve_dga(inst, DgaCounting::Primary(&self.primaries)),
            },
            Policy::Sc => solve_sc(inst),
            Policy::Mbsfn => solve_mbsfn(inst),
            Policy::Exact => solve_exact_with_cap(inst, config.exact_cap)?,
        })
    }
}

fn mode_for(policy: Policy) -> ConnectivityMode {
    if policy.single_connectivity() {
        ConnectivityMode::Sc
    } else {
        ConnectivityMode::Mc
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub metrics: Metrics,
    pub log: Vec<LogRecord>,
}

fn simulate_drop(
    config: &SimConfig,
    policies: &[Policy],
    index: usize,
) -> Result<Vec<Vec<LogRecord>>> {
    let drop = DropState::new(config, index)?;
    let mut logs = vec![Vec::with_capacity(config.subframes); policies.len()];
    for t in 0..config.subframes {
        let rates = drop.rates(config, t);
        let required = config.schedule.rate_at(t);
        let mut mc_inst = None;
        let mut sc_inst = None;
        for (p, &policy) in policies.iter().enumerate() {
            let slot = match mode_for(policy) {
                ConnectivityMode::Mc => &mut mc_inst,
                ConnectivityMode::Sc => &mut sc_inst,
            };
            if slot.is_none() {
                *slot = Some(drop.instance(&rates, required, mode_for(policy))?);
            }
            let inst = slot.as_ref().expect("instance built above");
            let res = drop.solve(config, policy, inst)?;
            logs[p].push(LogRecord {
                t: index * config.subframes + t,
                drop: index,
                subframe: t,
                served: res.served_ids().map(|k| k as u32).collect(),
            });
        }
    }
    Ok(logs)
}

/// Evaluates every policy on the same drops and channel draws.
pub fn compare_policies(config: &SimConfig, policies: &[Policy]) -> Result<Vec<RunOutput>> {
    config.validate()?;
    for &p in policies {
        config.check_exact(p)?;
    }
    let per_drop: Vec<Vec<Vec<LogRecord>>> = (0..config.drops)
        .into_par_iter()
        .map(|d| simulate_drop(config, policies, d))
        .collect::<Result<_>>()?;

    Ok(policies
        .iter()
        .enumerate()
        .map(|(p, &policy)| {
            let log: Vec<LogRecord> = per_drop.iter().flat_map(|d| d[p].iter().cloned()).collect();
            let metrics = Metrics::from_log(
                policy,
                &log,
                config.num_users(),
                topology::HEX7_CELLS,
                config.drops,
                config.subframes,
            );
            RunOutput { metrics, log }
        })
        .collect())
}

pub fn run(config: &SimConfig) -> Result<RunOutput> {
    let mut out = compare_policies(config, &[config.policy])?;
    Ok(out.remove(0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    UsersPerCell,
    Radius,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::UsersPerCell => "users_per_cell",
            SweepAxis::Radius => "radius",
        }
    }

    fn apply(self, config: &SimConfig, value: f64) -> Result<SimConfig> {
        let mut c = config.clone();
        match self {
            SweepAxis::UsersPerCell => {
                if value < 0.0 || value.fract() != 0.0 {
                    return Err(Error::Config(format!(
                        "users per cell must be a whole number, got {value}"
                    )));
                }
                c.ues_per_cell = value as usize;
            }
            SweepAxis::Radius => c.radius_m = value,
        }
        Ok(c)
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub axis: SweepAxis,
    pub value: f64,
    pub metrics: Metrics,
}

/// One independent run per value and policy. Every point reuses the base
/// seed, so points differ only in the swept parameter.
pub fn sweep_policies(
    config: &SimConfig,
    axis: SweepAxis,
    values: &[f64],
    policies: &[Policy],
) -> Result<Vec<SweepPoint>> {
    if values.is_empty() {
        return Err(Error::Config("sweep needs at least one value".into()));
    }
    let mut points = Vec::with_capacity(values.len() * policies.len());
    for &v in values {
        let c = axis.apply(config, v)?;
        for out in compare_policies(&c, policies)? {
            points.push(SweepPoint {
                axis,
                value: v,
                metrics: out.metrics,
            });
        }
    }
    Ok(points)
}

/// [`sweep_policies`] for `config.policy` alone.
pub fn sweep(config: &SimConfig, axis: SweepAxis, values: &[f64]) -> Result<Vec<SweepPoint>> {
    sweep_policies(config, axis, values, &[config.policy])
}

pub fn sweep_csv(points: &[SweepPoint]) -> String {
    use std::fmt::Write as _;
    let mut out =
        String::from("axis,value,policy,avg_packets_delivered,avg_packets_per_ue,avg_unserved_per_cell,ci95_packets\n");
    for p in points {
        let ci = p
            .metrics
            .ci95_packets
            .map_or(String::new(), |h| format!("{h:.6}"));
        let _ = writeln!(
            out,
            "{},{},{},{:.6},{:.6},{:.6},{ci}",
            p.axis,
            p.value,
            p.metrics.policy,
            p.metrics.avg_packets_delivered,
            p.metrics.avg_packets_per_ue,
            p.metrics.avg_unserved_per_cell
        );
    }
    out
}
