//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use mcmulticast::channel::{draw_shadowing_db, path_loss, ChannelParams};
use mcmulticast::cli::oracle::{run_oracle, GREEDY_BOUND};
use mcmulticast::cli::{run_experiment, ExperimentSpec, Overrides, Preset};
use mcmulticast::coverage::{
    map_solution, reduce_mcp, solve_cga, solve_dga, solve_exact, solve_mbsfn, CoverageInstance,
    DgaCounting, McpInstance, Policy,
};
use mcmulticast::engine::{compare_policies, paired_subframes, sweep_policies, Metrics, SweepAxis};
use mcmulticast::rng;
use rand::Rng;

const ORACLE_INSTANCES: usize = 200;
const ORACLE_SEED: u64 = 1;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn spec(preset: Preset, overrides: Overrides) -> ExperimentSpec {
    ExperimentSpec::new(preset, overrides)
}

fn greedy_ratio() -> Outcome {
    let start = Instant::now();
    let r = run_oracle(ORACLE_INSTANCES, 12, 4, 4, ORACLE_SEED).unwrap();
    let elapsed = start.elapsed();
    outcome(
        r.ratio_violations == 0 && elapsed < Duration::from_secs(30),
        format!(
            "{} instances, min CGA/OPT {:.4} vs {:.4}, {} below bound, {:.2?}",
            r.instances, r.min_ratio, GREEDY_BOUND, r.ratio_violations, elapsed
        ),
    )
}

fn greedy_iteration_bounds() -> Outcome {
    let r = run_oracle(ORACLE_INSTANCES, 12, 4, 4, ORACLE_SEED).unwrap();
    outcome(
        r.gain_bound_violations == 0 && r.gap_bound_violations == 0,
        format!(
            "{} instances, per-iteration gain bound violated on {}, remaining-gap bound violated on {}",
            r.instances, r.gain_bound_violations, r.gap_bound_violations
        ),
    )
}

fn worked_example() -> Outcome {
    let inst = CoverageInstance::from_sets(
        6,
        &[
            vec![vec![0, 1], vec![1, 2, 3]],
            vec![vec![], vec![2, 3, 4, 5]],
        ],
    )
    .unwrap();
    let cga = solve_cga(&inst);
    let dga = solve_dga(&inst, DgaCounting::Connected);
    let mbsfn = solve_mbsfn(&inst);
    let dga_ids: Vec<usize> = dga.served_ids().collect();
    let pass = cga.served_count == 6
        && cga.allocation.chosen() == [0, 1]
        && dga.served_count == 5
        && dga_ids == [1, 2, 3, 4, 5]
        && mbsfn.served_count == 5
        && mbsfn.allocation.chosen() == [1, 1];
    outcome(
        pass,
        format!(
            "CGA {} {:?}, DGA {} serving {:?}, MBSFN {} {:?}",
            cga.served_count,
            cga.allocation.chosen(),
            dga.served_count,
            dga_ids,
            mbsfn.served_count,
            mbsfn.allocation.chosen()
        ),
    )
}

fn brute_force_mcp(mcp: &McpInstance) -> usize {
    let m = mcp.sets.len();
    (0u32..1 << m)
        .filter(|mask| mask.count_ones() as usize <= mcp.k)
        .map(|mask| {
            let picked: Vec<usize> = (0..m).filter(|j| mask & (1 << j) != 0).collect();
            mcp.coverage(&picked)
        })
        .max()
        .unwrap_or(0)
}

fn reduction_round_trip() -> Outcome {
    let mut r = rng::stream(2, &[]);
    let trials = 300;
    let mut mismatches = 0;
    for _ in 0..trials {
        let universe = r.random_range(1..=10usize);
        let k = r.random_range(1..=3usize);
        let m = r.random_range(1..=4usize);
        let sets: Vec<Vec<usize>> = (0..m)
            .map(|_| (0..universe).filter(|_| r.random_bool(0.35)).collect())
            .collect();
        let mcp = McpInstance::new(universe, k, sets).unwrap();
        let sol = solve_exact(&reduce_mcp(&mcp)).unwrap();
        let picked = map_solution(&sol.allocation);
        let direct = brute_force_mcp(&mcp);
        if picked.len() > k || mcp.coverage(&picked) != direct || sol.served_count != direct {
            mismatches += 1;
        }
    }
    outcome(
        mismatches == 0,
        format!("{trials} random instances, {mismatches} mismatches"),
    )
}

fn centralized_beats_distributed() -> Outcome {
    let start = Instant::now();
    let config = spec(
        Preset::Fig4DistVsCentral,
        Overrides {
            ues: Some(10),
            subframes: Some(1000),
            drops: Some(5),
            ..Default::default()
        },
    )
    .sim_config()
    .unwrap();
    let out = compare_policies(&config, &[Policy::Cga, Policy::Dga]).unwrap();
    let elapsed = start.elapsed();
    let t = paired_subframes(&out[0].metrics, &out[1].metrics).unwrap();
    outcome(
        t.significant && elapsed < Duration::from_secs(120),
        format!(
            "CGA {:.4} vs DGA {:.4} served/sub-frame, paired t {:.2} (critical {:.3}), {:.2?}",
            out[0].metrics.avg_packets_delivered,
            out[1].metrics.avg_packets_delivered,
            t.t_stat,
            t.critical,
            elapsed
        ),
    )
}

/// Adjacent pairs moving the wrong way.
fn wrong_way(values: &[f64], increasing: bool) -> usize {
    values
        .windows(2)
        .filter(|w| if increasing { w[1] < w[0] } else { w[1] > w[0] })
        .count()
}

fn sweep_trends() -> Outcome {
    let config = spec(Preset::Fig5PacketsSweep, Overrides::default())
        .sim_config()
        .unwrap();
    let policies = Preset::Fig5PacketsSweep.policies(config.policy);
    let mut pass = true;
    let mut parts = Vec::new();
    for (axis, values) in [
        (SweepAxis::Radius, &mcmulticast::cli::RADIUS_SWEEP[..]),
        (SweepAxis::UsersPerCell, &mcmulticast::cli::USERS_SWEEP[..]),
    ] {
        let points = sweep_policies(&config, axis, values, &policies).unwrap();
        let mut by_policy: BTreeMap<&str, Vec<&Metrics>> = BTreeMap::new();
        for p in &points {
            by_policy
                .entry(p.metrics.policy.as_str())
                .or_default()
                .push(&p.metrics);
        }
        for (policy, ms) in by_policy {
            let packets: Vec<f64> = ms.iter().map(|m| m.avg_packets_per_ue).collect();
            let unserved: Vec<f64> = ms.iter().map(|m| m.avg_unserved_per_cell).collect();
            let (wp, wu) = (wrong_way(&packets, false), wrong_way(&unserved, true));
            pass &= wp <= 1 && wu <= 1;
            parts.push(format!("{axis}/{policy}: packets {wp}, unserved {wu}"));
        }
    }
    outcome(
        pass,
        format!("wrong-way adjacent pairs ({})", parts.join("; ")),
    )
}

fn trace_comparisons() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for preset in [Preset::Fig7TraceMcVsSc, Preset::Fig8MbsfnVsMc] {
        let config = spec(preset, Overrides::default()).sim_config().unwrap();
        let policies = preset.policies(config.policy);
        let out = compare_policies(&config, &policies).unwrap();
        let t = paired_subframes(&out[0].metrics, &out[1].metrics).unwrap();
        pass &= t.significant;
        parts.push(format!(
            "{} {:.4} vs {} {:.4} paired t {:.2}",
            policies[0],
            out[0].metrics.avg_packets_delivered,
            policies[1],
            out[1].metrics.avg_packets_delivered,
            t.t_stat
        ));
    }

    let config = spec(
        Preset::Fig8MbsfnVsMc,
        Overrides {
            prbs: Some(4),
            drops: Some(2),
            subframes: Some(300),
            ..Default::default()
        },
    )
    .sim_config()
    .unwrap();
    let out = compare_policies(&config, &[Policy::Mbsfn, Policy::Exact]).unwrap();
    let above = out[0]
        .metrics
        .served_counts
        .iter()
        .zip(&out[1].metrics.served_counts)
        .filter(|(m, e)| m > e)
        .count();
    pass &= above == 0;
    parts.push(format!(
        "MBSFN above EXACT on {above} of {} sub-frames",
        out[0].metrics.served_counts.len()
    ));
    outcome(pass, parts.join("; "))
}

fn csv_files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read(&p).unwrap())
        })
        .collect()
}

fn deterministic_output() -> Outcome {
    let mut compared = 0;
    let mut differing = Vec::new();
    for preset in Preset::ALL {
        let mut runs = Vec::new();
        for _ in 0..2 {
            let dir = tempfile::tempdir().unwrap();
            let o = Overrides {
                seed: Some(7),
                subframes: Some(40),
                drops: Some(2),
                ids: Some(true),
                out: Some(dir.path().to_path_buf()),
                ..Default::default()
            };
            run_experiment(&spec(preset, o)).unwrap();
            runs.push(csv_files(dir.path()));
        }
        compared += runs[0].len();
        if runs[0].is_empty() || runs[0] != runs[1] {
            differing.push(preset.as_str());
        }
    }
    outcome(
        differing.is_empty(),
        format!(
            "{compared} CSV files over {} presets, differing: {differing:?}",
            Preset::ALL.len()
        ),
    )
}

fn channel_units() -> Outcome {
    let params = ChannelParams::default();
    let pl = path_loss(1.0);
    let noise = params.noise_floor_dbm();
    let mut r = rng::stream(3, &[]);
    let n = 100_000;
    let xs: Vec<f64> = (0..n)
        .map(|_| draw_shadowing_db(params.shadowing_sigma_db, &mut r))
        .collect();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let sd = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
    let pass = pl == 128.1 && (noise + 116.45).abs() <= 0.01 && (sd - 10.0).abs() <= 0.5;
    outcome(
        pass,
        format!("path loss at 1 km {pl}, noise floor {noise:.4} dBm, shadowing sd {sd:.4} dB"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("greedy ratio bound", greedy_ratio),
        ("greedy per-iteration bounds", greedy_iteration_bounds),
        ("two-cell worked example", worked_example),
        ("max-coverage reduction round trip", reduction_round_trip),
        ("centralized vs distributed", centralized_beats_distributed),
        ("radius and user sweep trends", sweep_trends),
        ("trace-driven MC vs SC and MBSFN", trace_comparisons),
        ("deterministic preset output", deterministic_output),
        ("channel unit checks", channel_units),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        let tag = if result.pass { "PASS" } else { "FAIL" };
        println!("{tag} {}. {name}: {}", i + 1, result.detail);
        failed += usize::from(!result.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
