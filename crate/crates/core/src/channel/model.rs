use rand::Rng;
use rand_distr::{Distribution, Exp1, Normal};

use super::{ChannelParams, CqiTable};
use crate::error::{Error, Result};
use crate::topology::NetworkScenario;

/// `E[10 log10 X]` for `X ~ Exp(1)`, i.e. `-10 * gamma / ln 10`.
pub const RAYLEIGH_DB_MEAN: f64 = -2.506_815_781_348_522;

/// Rayleigh power fade in dB, shifted to zero mean in dB.
pub fn fast_fade_db<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let power: f64 = Exp1.sample(rng);
    10.0 * power.log10() - RAYLEIGH_DB_MEAN
}

/// One lognormal shadowing draw in dB.
pub fn draw_shadowing_db<R: Rng + ?Sized>(sigma_db: f64, rng: &mut R) -> f64 {
    if sigma_db == 0.0 {
        return 0.0;
    }
    Normal::new(0.0, sigma_db)
        .expect("sigma validated as finite and non-negative")
        .sample(rng)
}

/// Decodable bits per sub-frame for every (cell, PRB, user).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RateMatrix {
    num_cells: usize,
    num_prbs: usize,
    num_users: usize,
    data: Vec<u32>,
}

impl RateMatrix {
    pub fn zeros(num_cells: usize, num_prbs: usize, num_users: usize) -> Self {
        Self {
            num_cells,
            num_prbs,
            num_users,
            data: vec![0; num_cells * num_prbs * num_users],
        }
    }

    /// Same rate everywhere.
    pub fn filled(num_cells: usize, num_prbs: usize, num_users: usize, rate: u32) -> Self {
        Self {
            data: vec![rate; num_cells * num_prbs * num_users],
            ..Self::zeros(num_cells, num_prbs, num_users)
        }
    }

    pub fn num_cells(&self) -> usize {
        self.num_cells
    }

    pub fn num_prbs(&self) -> usize {
        self.num_prbs
    }

    pub fn num_users(&self) -> usize {
        self.num_users
    }

    fn index(&self, cell: usize, prb: usize, user: usize) -> usize {
        assert!(cell < self.num_cells && prb < self.num_prbs && user < self.num_users);
        (cell * self.num_prbs + prb) * self.num_users + user
    }

    pub fn get(&self, cell: usize, prb: usize, user: usize) -> u32 {
        self.data[self.index(cell, prb, user)]
    }

    pub fn set(&mut self, cell: usize, prb: usize, user: usize, bits: u32) {
        let i = self.index(cell, prb, user);
        self.data[i] = bits;
    }

    /// Rates of every user on one (cell, PRB).
    pub fn row(&self, cell: usize, prb: usize) -> &[u32] {
        let start = self.index(cell, prb, 0);
        &self.data[start..start + self.num_users]
    }
}

/// Per-drop channel state: distances and shadowing are fixed for the drop,
/// fast fading is redrawn every sub-frame.
#[derive(Debug, Clone)]
pub struct ChannelModel {
    params: ChannelParams,
    table: CqiTable,
    num_cells: usize,
    num_prbs: usize,
    num_users: usize,
    /// SNR without fast fading, indexed `cell * num_users + user`.
    mean_snr_db: Vec<f64>,
}

impl ChannelModel {
    /// `distances_km[cell][user]`; shadowing is drawn per (cell, user) pair
    /// from `shadow_rng` in cell-major order.
    pub fn new<R: Rng + ?Sized>(
        params: ChannelParams,
        table: CqiTable,
        num_prbs: usize,
        distances_km: &[Vec<f64>],
        shadow_rng: &mut R,
    ) -> Result<Self> {
        params.validate()?;
        if num_prbs == 0 {
            return Err(Error::Config("num_prbs must be >= 1".into()));
        }
        let num_users = distances_km.first().map_or(0, Vec::len);
        if distances_km.iter().any(|row| row.len() != num_users) {
            return Err(Error::invalid("ragged distance matrix"));
        }
        let mut mean_snr_db = Vec::with_capacity(distances_km.len() * num_users);
        for row in distances_km {
            for &d in row {
                let shadow = draw_shadowing_db(params.shadowing_sigma_db, shadow_rng);
                mean_snr_db.push(params.snr_db(d, shadow, 0.0));
            }
        }
        Ok(Self {
            params,
            table,
            num_cells: distances_km.len(),
            num_prbs,
            num_users,
            mean_snr_db,
        })
    }

    pub fn for_scenario<R: Rng + ?Sized>(
        params: ChannelParams,
        table: CqiTable,
        num_prbs: usize,
        scenario: &NetworkScenario,
        shadow_rng: &mut R,
    ) -> Result<Self> {
        Self::new(
            params,
            table,
            num_prbs,
            &scenario.distance_matrix_km(),
            shadow_rng,
        )
    }

    pub fn num_cells(&self) -> usize {
        self.num_cells
    }

    pub fn mean_snr_db(&self, cell: usize, user: usize) -> f64 {
        self.mean_snr_db[cell * self.num_users + user]
    }

    /// Draws fast fading for every (cell, PRB, user) and maps SNR to rate.
    pub fn sample_subframe<R: Rng + ?Sized>(&self, rng: &mut R) -> RateMatrix {
        let cells = self.num_cells;
        let mut out = RateMatrix::zeros(cells, self.num_prbs, self.num_users);
        let (bw, sf) = (self.params.prb_bandwidth_hz, self.params.subframe_s);
        for c in 0..cells {
            let means = &self.mean_snr_db[c * self.num_users..(c + 1) * self.num_users];
            for j in 0..self.num_prbs {
                let start = (c * self.num_prbs + j) * self.num_users;
                let row = &mut out.data[start..start + self.num_users];
                for (slot, &mean) in row.iter_mut().zip(means) {
                    let fade = if self.params.fast_fading {
                        fast_fade_db(rng)
                    } else {
                        0.0
                    };
                    *slot = self.table.rate_from_snr(mean + fade, bw, sf);
                }
            }
        }
        out
    }
}
