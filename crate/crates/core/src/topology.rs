//! Seven-cell hexagonal layout with uniformly dropped UEs.

use std::f64::consts::PI;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const HEX7_CELLS: usize = 7;
pub const DEFAULT_RADIUS_M: f64 = 250.0;
pub const DEFAULT_EDGE_THRESHOLD: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConnectivityMode {
    /// Edge UEs are connected to every cell.
    Mc,
    /// Every UE is connected to its primary cell only.
    Sc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub id: usize,
    pub x_m: f64,
    pub y_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ue {
    pub id: usize,
    pub x_m: f64,
    pub y_m: f64,
    pub primary: usize,
    /// Farther than `edge_threshold * radius` from the primary eNB.
    pub edge: bool,
    pub connectivity: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkScenario {
    pub radius_m: f64,
    pub edge_threshold: f64,
    pub mode: ConnectivityMode,
    pub cells: Vec<Cell>,
    pub ues: Vec<Ue>,
}

fn dist(ax: f64, ay: f64, bx: f64, by: f64) -> f64 {
    (ax - bx).hypot(ay - by)
}

/// Index of the nearest cell; the lowest id wins ties.
fn nearest_cell(cells: &[Cell], x: f64, y: f64) -> usize {
    let mut best = (0, f64::INFINITY);
    for c in cells {
        let d = dist(c.x_m, c.y_m, x, y);
        if d < best.1 {
            best = (c.id, d);
        }
    }
    best.0
}

/// Centre cell plus six neighbours at inter-site distance `sqrt(3) * radius`.
pub fn hex7_cells(radius_m: f64) -> Vec<Cell> {
    let isd = 3f64.sqrt() * radius_m;
    std::iter::once(Cell {
        id: 0,
        x_m: 0.0,
        y_m: 0.0,
    })
    .chain((0..6).map(|i| {
        let angle = PI / 6.0 + f64::from(i) * PI / 3.0;
        Cell {
            id: i as usize + 1,
            x_m: isd * angle.cos(),
            y_m: isd * angle.sin(),
        }
    }))
    .collect()
}

/// Drops `ues_per_cell` UEs uniformly in each cell's disc and assigns
/// primary cells and multi-connectivity sets.
pub fn build_hex7<R: Rng + ?Sized>(
    radius_m: f64,
    ues_per_cell: usize,
    edge_threshold: f64,
    rng: &mut R,
) -> Result<NetworkScenario> {
    if !(radius_m.is_finite() && radius_m > 0.0) {
        return Err(Error::Config(format!(
            "radius must be positive, got {radius_m}"
        )));
    }
    if !(edge_threshold.is_finite() && edge_threshold >= 0.0) {
        return Err(Error::Config(format!(
            "edge threshold must be >= 0, got {edge_threshold}"
        )));
    }
    let cells = hex7_cells(radius_m);
    let mut ues = Vec::with_capacity(cells.len() * ues_per_cell);
    for cell in &cells {
        for _ in 0..ues_per_cell {
            let r = radius_m * rng.random::<f64>().sqrt();
            let theta = 2.0 * PI * rng.random::<f64>();
            let (x, y) = (cell.x_m + r * theta.cos(), cell.y_m + r * theta.sin());
            let primary = nearest_cell(&cells, x, y);
            let pc = &cells[primary];
            let edge = dist(pc.x_m, pc.y_m, x, y) > edge_threshold * radius_m;
            ues.push(Ue {
                id: ues.len(),
                x_m: x,
                y_m: y,
                primary,
                edge,
                connectivity: Vec::new(),
            });
        }
    }
    let scenario = NetworkScenario {
        radius_m,
        edge_threshold,
        mode: ConnectivityMode::Mc,
        cells,
        ues,
    };
    Ok(scenario.connectivity_mode(ConnectivityMode::Mc))
}

impl NetworkScenario {
    /// Recomputes every connectivity set for `mode`.
    pub fn connectivity_mode(&self, mode: ConnectivityMode) -> NetworkScenario {
        let all: Vec<usize> = self.cells.iter().map(|c| c.id).collect();
        let mut out = self.clone();
        out.mode = mode;
        for ue in &mut out.ues {
            ue.connectivity = match (mode, ue.edge) {
                (ConnectivityMode::Mc, true) => all.clone(),
                _ => vec![ue.primary],
            };
        }
        out
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn num_ues(&self) -> usize {
        self.ues.len()
    }

    pub fn connectivity(&self) -> Vec<Vec<usize>> {
        self.ues.iter().map(|u| u.connectivity.clone()).collect()
    }

    pub fn primaries(&self) -> Vec<usize> {
        self.ues.iter().map(|u| u.primary).collect()
    }

    pub fn distance_km(&self, cell: usize, ue: usize) -> f64 {
        let (c, u) = (&self.cells[cell], &self.ues[ue]);
        dist(c.x_m, c.y_m, u.x_m, u.y_m) / 1000.0
    }

    /// `[cell][ue]` distances in km.
    pub fn distance_matrix_km(&self) -> Vec<Vec<f64>> {
        (0..self.num_cells())
            .map(|c| {
                (0..self.num_ues())
                    .map(|k| self.distance_km(c, k))
                    .collect()
            })
            .collect()
    }

    /// Checks the structural invariants: ids are dense, every primary cell
    /// is the nearest one, connectivity sets contain the primary and match
    /// the mode.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(format!("scenario: {msg}")));
        if self.cells.iter().enumerate().any(|(i, c)| c.id != i) {
            return bad("cell ids must be 0..C in order".into());
        }
        for (i, ue) in self.ues.iter().enumerate() {
            if ue.id != i {
                return bad(format!("ue at position {i} has id {}", ue.id));
            }
            if ue.primary != nearest_cell(&self.cells, ue.x_m, ue.y_m) {
                return bad(format!(
                    "ue {i} primary {} is not its nearest cell",
                    ue.primary
                ));
            }
            if !ue.connectivity.contains(&ue.primary) {
                return bad(format!("ue {i} connectivity lacks its primary cell"));
            }
            if ue.connectivity.iter().any(|&c| c >= self.cells.len()) {
                return bad(format!("ue {i} lists an unknown cell"));
            }
            let expected = match (self.mode, ue.edge) {
                (ConnectivityMode::Mc, true) => self.cells.len(),
                _ => 1,
            };
            if ue.connectivity.len() != expected {
                return bad(format!(
                    "ue {i} has {} connected cells, mode expects {expected}",
                    ue.connectivity.len()
                ));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: NetworkScenario = serde_json::from_str(text)?;
        s.validate()?;
        Ok(s)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    fn drop(ues: usize, threshold: f64, seed: u64) -> NetworkScenario {
        build_hex7(250.0, ues, threshold, &mut rng::stream(seed, &[])).unwrap()
    }

    #[test]
    fn empty_layout() {
        let s = drop(0, 0.8, 1);
        assert_eq!(s.num_cells(), 7);
        assert!(s.ues.is_empty());
        let isd = 3f64.sqrt() * 250.0;
        for c in &s.cells[1..] {
            assert!((c.x_m.hypot(c.y_m) - isd).abs() < 1e-9);
        }
    }

    #[test]
    fn invariants_hold() {
        let s = drop(30, 0.8, 2);
        s.validate().unwrap();
        assert_eq!(s.num_ues(), 210);
        for (k, ue) in s.ues.iter().enumerate() {
            assert!(s.distance_km(ue.primary, k) * 1000.0 <= 250.0 + 1e-9);
            let d = s.distance_km(ue.primary, k) * 1000.0;
            assert_eq!(ue.edge, d > 200.0);
            if ue.edge {
                assert_eq!(ue.connectivity.len(), 7);
            } else {
                assert_eq!(ue.connectivity, vec![ue.primary]);
            }
        }
        assert!(s.ues.iter().any(|u| u.edge));
    }

    #[test]
    fn full_threshold_means_no_edge_ues() {
        let s = drop(50, 1.0, 3);
        assert!(s.ues.iter().all(|u| !u.edge && u.connectivity.len() == 1));
        assert_eq!(
            s.connectivity(),
            s.connectivity_mode(ConnectivityMode::Sc).connectivity()
        );
    }

    #[test]
    fn mode_switch_round_trips() {
        let mc = drop(20, 0.8, 4);
        let sc = mc.connectivity_mode(ConnectivityMode::Sc);
        assert!(sc.ues.iter().all(|u| u.connectivity.len() == 1));
        sc.validate().unwrap();
        let back = sc.connectivity_mode(ConnectivityMode::Mc);
        assert_eq!(back, mc);
    }

    #[test]
    fn deterministic_under_seed() {
        assert_eq!(drop(10, 0.8, 5), drop(10, 0.8, 5));
        assert_ne!(drop(10, 0.8, 5), drop(10, 0.8, 6));
    }

    #[test]
    fn uniform_disc_mean_distance() {
        // E[r] = 2R/3 for a uniform disc.
        let s = build_hex7(300.0, 10_000, 0.8, &mut rng::stream(7, &[])).unwrap();
        let n = 10_000;
        let mean = (0..n)
            .map(|k| {
                let u = &s.ues[k];
                u.x_m.hypot(u.y_m)
            })
            .sum::<f64>()
            / n as f64;
        assert!((mean / 200.0 - 1.0).abs() < 0.02, "{mean}");
    }

    #[test]
    fn nearest_tie_goes_to_lowest_id() {
        let cells = hex7_cells(250.0);
        let (a, b) = (&cells[0], &cells[1]);
        let (mx, my) = ((a.x_m + b.x_m) / 2.0, (a.y_m + b.y_m) / 2.0);
        assert_eq!(nearest_cell(&cells, mx, my), 0);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let s = drop(5, 0.5, 8);
        let back = NetworkScenario::from_json(&s.to_json().unwrap()).unwrap();
        assert_eq!(back, s);
        let mut broken = s.clone();
        broken.ues[0].connectivity = vec![(broken.ues[0].primary + 1) % 7];
        assert!(NetworkScenario::from_json(&broken.to_json().unwrap()).is_err());
    }

    #[test]
    fn bad_parameters() {
        let mut r = rng::stream(0, &[]);
        assert!(build_hex7(0.0, 1, 0.8, &mut r).is_err());
        assert!(build_hex7(250.0, 1, -0.1, &mut r).is_err());
    }
}
