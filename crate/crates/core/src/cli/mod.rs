//! Command-line front end: experiment presets, flat `key=value` config files
//! and the oracle suite.
//!
//! Precedence is preset defaults, then the config file, then flags.

pub mod oracle;

use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::channel::CqiTable;
use crate::coverage::{
    solve_cga, solve_dga, solve_exact_with_cap, solve_mbsfn, solve_sc, CoverageInstance,
    DgaCounting, Policy,
};
use crate::engine::{
    self, compare_policies, log_csv, paired_drops, paired_subframes, stats, DgaCountMode, Metrics,
    SimConfig, SweepAxis,
};
use crate::error::{Error, Result};
use crate::traffic::{self, schedule_constant, ScheduleSource, Spread};

pub const USERS_SWEEP: [f64; 4] = [5.0, 10.0, 20.0, 40.0];
pub const RADIUS_SWEEP: [f64; 4] = [250.0, 500.0, 750.0, 1000.0];
const SYNTHETIC_FRAMES: usize = 60;
const DEFAULT_FPS: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Fig4DistVsCentral,
    Fig5PacketsSweep,
    Fig6UnservedSweep,
    Fig7TraceMcVsSc,
    Fig8MbsfnVsMc,
    Custom,
}

impl Preset {
    pub const ALL: [Preset; 6] = [
        Preset::Fig4DistVsCentral,
        Preset::Fig5PacketsSweep,
        Preset::Fig6UnservedSweep,
        Preset::Fig7TraceMcVsSc,
        Preset::Fig8MbsfnVsMc,
        Preset::Custom,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Preset::Fig4DistVsCentral => "fig4_dist_vs_central",
            Preset::Fig5PacketsSweep => "fig5_packets_sweep",
            Preset::Fig6UnservedSweep => "fig6_unserved_sweep",
            Preset::Fig7TraceMcVsSc => "fig7_trace_mc_vs_sc",
            Preset::Fig8MbsfnVsMc => "fig8_mbsfn_vs_mc",
            Preset::Custom => "custom",
        }
    }

    fn is_trace(self) -> bool {
        matches!(self, Preset::Fig7TraceMcVsSc | Preset::Fig8MbsfnVsMc)
    }

    fn is_sweep(self) -> bool {
        matches!(self, Preset::Fig5PacketsSweep | Preset::Fig6UnservedSweep)
    }

    /// Policies compared by the preset; `custom` runs the configured one.
    pub fn policies(self, configured: Policy) -> Vec<Policy> {
        match self {
            Preset::Fig4DistVsCentral => vec![Policy::Cga, Policy::Dga],
            Preset::Fig5PacketsSweep | Preset::Fig6UnservedSweep | Preset::Fig7TraceMcVsSc => {
                vec![Policy::Cga, Policy::Sc]
            }
            Preset::Fig8MbsfnVsMc => vec![Policy::Cga, Policy::Mbsfn],
            Preset::Custom => vec![configured],
        }
    }

    fn defaults(self) -> Overrides {
        let mut o = Overrides::default();
        if self.is_sweep() {
            o.subframes = Some(500);
            o.drops = Some(5);
        }
        if self.is_trace() {
            o.drops = Some(5);
        }
        o
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown preset '{s}'")))
    }
}

/// Every field settable from the command line or a config file.
#[derive(Debug, Clone, Default, PartialEq, Args)]
pub struct Overrides {
    #[arg(long)]
    pub policy: Option<Policy>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// UEs dropped per cell.
    #[arg(long)]
    pub ues: Option<usize>,
    /// Cell radius in meters.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Sub-frames per drop.
    #[arg(long)]
    pub subframes: Option<usize>,
    /// ASU-format video trace; switches to trace-driven rates.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long)]
    pub fps: Option<f64>,
    /// Constant required rate, bits per sub-frame.
    #[arg(long)]
    pub rate: Option<u64>,
    #[arg(long = "edge-threshold")]
    pub edge_threshold: Option<f64>,
    #[arg(long = "dga-count")]
    pub dga_count: Option<DgaCountMode>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub drops: Option<usize>,
    /// Candidate PRBs per cell.
    #[arg(long)]
    pub prbs: Option<usize>,
    #[arg(long = "exact-cap")]
    pub exact_cap: Option<u64>,
    #[arg(long)]
    pub spread: Option<SpreadArg>,
    /// CQI table file (`min_snr_db bits` lines).
    #[arg(long = "cqi-table")]
    pub cqi_table: Option<PathBuf>,
    /// Write served UE ids into the raw logs.
    #[arg(long)]
    pub ids: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpreadArg(pub Spread);

impl FromStr for SpreadArg {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Self(Spread::Uniform)),
            "burst" => Ok(Self(Spread::Burst)),
            _ => Err(Error::Config(format!(
                "unknown spread '{s}' (expected uniform|burst)"
            ))),
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("bad value '{value}' for '{key}'")))
}

impl Overrides {
    /// Later values win field by field.
    pub fn merge(mut self, other: Overrides) -> Overrides {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(
            policy,
            seed,
            ues,
            radius,
            subframes,
            trace,
            fps,
            rate,
            edge_threshold,
            dga_count,
            out,
            drops,
            prbs,
            exact_cap,
            spread,
            cqi_table,
            ids
        );
        self
    }

    /// Applies one `key=value` pair. Keys match flag names; `_` and `-` are
    /// interchangeable. Returns the preset when the key is `preset`.
    fn set(&mut self, key: &str, value: &str) -> Result<Option<Preset>> {
        match key.replace('_', "-").as_str() {
            "preset" => return Ok(Some(value.parse()?)),
            "policy" => self.policy = Some(value.parse()?),
            "seed" => self.seed = Some(parse_value(key, value)?),
            "ues" => self.ues = Some(parse_value(key, value)?),
            "radius" => self.radius = Some(parse_value(key, value)?),
            "subframes" => self.subframes = Some(parse_value(key, value)?),
            "trace" => self.trace = Some(PathBuf::from(value)),
            "fps" => self.fps = Some(parse_value(key, value)?),
            "rate" => self.rate = Some(parse_value(key, value)?),
            "edge-threshold" => self.edge_threshold = Some(parse_value(key, value)?),
            "dga-count" => self.dga_count = Some(value.parse()?),
            "out" => self.out = Some(PathBuf::from(value)),
            "drops" => self.drops = Some(parse_value(key, value)?),
            "prbs" => self.prbs = Some(parse_value(key, value)?),
            "exact-cap" => self.exact_cap = Some(parse_value(key, value)?),
            "spread" => self.spread = Some(value.parse()?),
            "cqi-table" => self.cqi_table = Some(PathBuf::from(value)),
            "ids" => self.ids = Some(parse_value(key, value)?),
            _ => return Err(Error::Config(format!("unknown config key '{key}'"))),
        }
        Ok(None)
    }
}

/// Parses a flat `key=value` config. Blank lines and `#` comments are ignored.
pub fn parse_config(text: &str) -> Result<(Option<Preset>, Overrides)> {
    let mut o = Overrides::default();
    let mut preset = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("config line {}: expected key=value", idx + 1)))?;
        if let Some(p) = o
            .set(k.trim(), v.trim())
            .map_err(|e| Error::Config(format!("config line {}: {e}", idx + 1)))?
        {
            preset = Some(p);
        }
    }
    Ok((preset, o))
}

/// A preset plus the overrides resolved against it.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub preset: Preset,
    pub overrides: Overrides,
}

impl ExperimentSpec {
    pub fn new(preset: Preset, overrides: Overrides) -> Self {
        Self { preset, overrides }
    }

    fn resolved(&self) -> Overrides {
        self.preset.defaults().merge(self.overrides.clone())
    }

    pub fn out_dir(&self) -> PathBuf {
        self.overrides
            .out
            .clone()
            .unwrap_or_else(|| PathBuf::from("out"))
    }

    pub fn with_ids(&self) -> bool {
        self.overrides.ids.unwrap_or(false)
    }

    pub fn sim_config(&self) -> Result<SimConfig> {
        let o = self.resolved();
        let mut c = SimConfig::default();
        if let Some(v) = o.policy {
            c.policy = v;
        }
        if let Some(v) = o.seed {
            c.seed = v;
        }
        if let Some(v) = o.ues {
            c.ues_per_cell = v;
        }
        if let Some(v) = o.radius {
            c.radius_m = v;
        }
        if let Some(v) = o.edge_threshold {
            c.edge_threshold = v;
        }
        if let Some(v) = o.dga_count {
            c.dga_count = v;
        }
        if let Some(v) = o.drops {
            c.drops = v;
        }
        if let Some(v) = o.prbs {
            c.num_prbs = v;
        }
        if let Some(v) = o.exact_cap {
            c.exact_cap = v;
        }
        if let Some(path) = &o.cqi_table {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            c.cqi = text.parse::<CqiTable>()?;
        }

        let fps = o.fps.unwrap_or(DEFAULT_FPS);
        let spread = o.spread.map_or(Spread::Uniform, |s| s.0);
        let trace_driven = o.trace.is_some() || self.preset.is_trace();
        if trace_driven {
            let frames = match &o.trace {
                Some(path) => traffic::load_trace(path)?,
                None => traffic::parse_trace(&traffic::synthetic_trace(SYNTHETIC_FRAMES, fps))?,
            };
            let mut schedule =
                traffic::schedule_from_trace(&frames, fps, c.channel.subframe_s, spread)?;
            schedule.source = ScheduleSource::Trace {
                path: o.trace.clone(),
                fps,
            };
            c.subframes = o.subframes.unwrap_or(schedule.len());
            c.schedule = schedule;
            if o.rate.is_some() {
                log::warn!("--rate ignored for a trace-driven run");
            }
        } else {
            c.subframes = o.subframes.unwrap_or(c.subframes);
            let rate = o.rate.unwrap_or(engine::DEFAULT_RATE_BITS);
            c.schedule = schedule_constant(rate, c.subframes);
        }
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PairedSummary {
    pub better: Policy,
    pub worse: Policy,
    /// Pairs are sub-frames.
    pub test: Option<stats::PairedTest>,
    /// Pairs are per-drop means.
    pub drop_test: Option<stats::PairedTest>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub preset: Preset,
    pub seed: u64,
    pub metrics: Vec<Metrics>,
    pub paired: Option<PairedSummary>,
    pub files: Vec<PathBuf>,
    #[serde(skip)]
    pub lines: Vec<String>,
}

fn write_file(path: &Path, contents: &str, files: &mut Vec<PathBuf>) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))?;
    files.push(path.to_path_buf());
    Ok(())
}

/// Runs a preset and writes its CSV/JSON artifacts into the output directory.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    let config = spec.sim_config()?;
    let out_dir = spec.out_dir();
    std::fs::create_dir_all(&out_dir).map_err(|e| Error::io(&out_dir, e))?;
    let name = spec.preset.as_str();
    let policies = spec.preset.policies(config.policy);
    let mut files = Vec::new();
    let mut lines = Vec::new();
    let mut metrics = Vec::new();

    if spec.preset.is_sweep() {
        for (axis, values, suffix) in [
            (SweepAxis::UsersPerCell, &USERS_SWEEP[..], "users"),
            (SweepAxis::Radius, &RADIUS_SWEEP[..], "radius"),
        ] {
            let points = engine::sweep_policies(&config, axis, values, &policies)?;
            let path = out_dir.join(format!("{name}_{suffix}.csv"));
            write_file(&path, &engine::sweep_csv(&points), &mut files)?;
            for p in points {
                lines.push(format!(
                    "{name} {axis}={}: {}",
                    p.value,
                    p.metrics.summary_line()
                ));
                metrics.push(p.metrics);
            }
        }
    } else {
        for out in compare_policies(&config, &policies)? {
            let policy = out.metrics.policy;
            let path = out_dir.join(format!("{name}_{policy}.csv"));
            write_file(
                &path,
                &log_csv(policy, &out.log, spec.with_ids()),
                &mut files,
            )?;
            lines.push(format!("{name} {}", out.metrics.summary_line()));
            metrics.push(out.metrics);
        }
    }

    let paired = (!spec.preset.is_sweep() && metrics.len() == 2).then(|| PairedSummary {
        better: metrics[0].policy,
        worse: metrics[1].policy,
        test: paired_subframes(&metrics[0], &metrics[1]),
        drop_test: paired_drops(&metrics[0], &metrics[1]),
    });
    if let Some(PairedSummary {
        better,
        worse,
        test: Some(t),
        ..
    }) = &paired
    {
        lines.push(format!(
            "{name} paired {better} > {worse}: mean diff {:.3} packets/sub-frame, t = {:.3} (critical {:.3}), significant: {}",
            t.mean_diff, t.t_stat, t.critical, t.significant
        ));
    }

    let mut report = ExperimentReport {
        preset: spec.preset,
        seed: config.seed,
        metrics,
        paired,
        files,
        lines,
    };
    let summary_path = out_dir.join(format!("{name}_summary.json"));
    let json = serde_json::to_string_pretty(&report)?;
    std::fs::write(&summary_path, json + "\n").map_err(|e| Error::io(&summary_path, e))?;
    report.files.push(summary_path);
    Ok(report)
}

#[derive(Debug, Parser)]
#[command(
    name = "mcmulticast",
    version,
    about = "Multi-connectivity multicast allocation simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an experiment preset and write CSV/JSON artifacts.
    Run(Box<RunArgs>),
    /// Compare the greedy against the exhaustive optimum on random instances.
    OracleCheck(OracleArgs),
    /// Solve one instance file in the `c j : users` text format.
    Solve(SolveArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub preset: Option<String>,
    /// Flat key=value file with the same keys as the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 200)]
    pub instances: usize,
    #[arg(long = "max-users", default_value_t = 12)]
    pub max_users: usize,
    #[arg(long = "max-cells", default_value_t = 4)]
    pub max_cells: usize,
    #[arg(long = "max-prbs", default_value_t = 4)]
    pub max_prbs: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub instance: PathBuf,
    #[arg(long, default_value = "cga")]
    pub policy: Policy,
    #[arg(long = "exact-cap", default_value_t = crate::coverage::DEFAULT_EXACT_CAP)]
    pub exact_cap: u64,
}

/// Process exit code for an error: 2 configuration, 3 trace, 4 oracle cap.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Trace { .. } => 3,
        Error::CapExceeded { .. } => 4,
        _ => 2,
    }
}

fn run_command(args: RunArgs) -> Result<ExperimentReport> {
    let (file_preset, file_overrides) = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            parse_config(&text)?
        }
        None => (None, Overrides::default()),
    };
    let preset = match &args.preset {
        Some(p) => p.parse()?,
        None => file_preset.unwrap_or(Preset::Custom),
    };
    let spec = ExperimentSpec::new(preset, file_overrides.merge(args.overrides));
    run_experiment(&spec)
}

fn solve_command(args: SolveArgs) -> Result<String> {
    let text = std::fs::read_to_string(&args.instance).map_err(|e| Error::io(&args.instance, e))?;
    let inst: CoverageInstance = text.parse()?;
    let res = match args.policy {
        Policy::Cga => solve_cga(&inst),
        Policy::Dga => solve_dga(&inst, DgaCounting::Connected),
        Policy::Sc => solve_sc(&inst),
        Policy::Mbsfn => solve_mbsfn(&inst),
        Policy::Exact => solve_exact_with_cap(&inst, args.exact_cap)?,
    };
    let chosen: Vec<String> = res
        .allocation
        .chosen()
        .iter()
        .map(usize::to_string)
        .collect();
    let served: Vec<String> = res.served_ids().map(|k| k.to_string()).collect();
    Ok(format!(
        "{}: served {} of {} | prbs {} | users {}",
        args.policy,
        res.served_count,
        inst.num_users(),
        chosen.join(" "),
        served.join(" ")
    ))
}

/// Entry point shared by the binary and tests; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match cli.command {
        Command::Run(args) => run_command(*args).map(|report| {
            for line in &report.lines {
                println!("{line}");
            }
            0
        }),
        Command::OracleCheck(a) => {
            oracle::run_oracle(a.instances, a.max_users, a.max_cells, a.max_prbs, a.seed).map(
                |report| {
                    println!("{}", report.summary_line());
                    if report.passed() {
                        0
                    } else {
                        1
                    }
                },
            )
        }
        Command::Solve(a) => solve_command(a).map(|line| {
            println!("{line}");
            0
        }),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        exit_code(&e)
    })
}
