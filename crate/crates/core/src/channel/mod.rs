//! Urban-macro link budget and per-sub-frame decodable rates.
//!
//! SNR per PRB is
//! `tx_power - 10 log10(carrier_prbs) - path_loss - shadowing + fast_fade - noise_floor`,
//! where the noise floor integrates the thermal
//! density over one PRB and adds the noise figure. There is no interference
//! term. SNR maps to bits per sub-frame through a CQI-style step table.

mod cqi;
mod model;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use cqi::{CqiStep, CqiTable, LTE_CQI_EFFICIENCIES};
pub use model::{draw_shadowing_db, fast_fade_db, ChannelModel, RateMatrix, RAYLEIGH_DB_MEAN};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    pub tx_power_dbm: f64,
    pub noise_density_dbm_hz: f64,
    pub noise_figure_db: f64,
    pub shadowing_sigma_db: f64,
    pub bandwidth_hz: f64,
    pub prb_bandwidth_hz: f64,
    /// PRBs the transmit power is split over (100 on a 20 MHz carrier).
    pub carrier_prbs: usize,
    pub pathloss_intercept_db: f64,
    pub pathloss_slope_db: f64,
    /// Distances below this are clamped before evaluating path loss.
    pub min_distance_km: f64,
    /// Per-PRB Rayleigh fading on top of shadowing.
    pub fast_fading: bool,
    pub subframe_s: f64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            tx_power_dbm: 46.0,
            noise_density_dbm_hz: -174.0,
            noise_figure_db: 5.0,
            shadowing_sigma_db: 10.0,
            bandwidth_hz: 20e6,
            prb_bandwidth_hz: 180e3,
            carrier_prbs: 100,
            pathloss_intercept_db: 128.1,
            pathloss_slope_db: 37.6,
            min_distance_km: 0.01,
            fast_fading: true,
            subframe_s: 1e-3,
        }
    }
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.tx_power_dbm,
            self.noise_density_dbm_hz,
            self.noise_figure_db,
            self.shadowing_sigma_db,
            self.bandwidth_hz,
            self.prb_bandwidth_hz,
            self.pathloss_intercept_db,
            self.pathloss_slope_db,
            self.min_distance_km,
            self.subframe_s,
        ];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("channel parameters must be finite".into()));
        }
        if self.prb_bandwidth_hz <= 0.0 || self.bandwidth_hz <= 0.0 {
            return Err(Error::Config("bandwidths must be positive".into()));
        }
        if self.shadowing_sigma_db < 0.0 {
            return Err(Error::Config("shadowing sigma must be >= 0".into()));
        }
        if self.carrier_prbs == 0 {
            return Err(Error::Config("carrier_prbs must be >= 1".into()));
        }
        if self.min_distance_km <= 0.0 || self.subframe_s <= 0.0 {
            return Err(Error::Config(
                "min_distance_km and subframe_s must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn path_loss_db(&self, distance_km: f64) -> f64 {
        let d = if distance_km < self.min_distance_km {
            log::debug!(
                "distance {distance_km} km clamped to {} km",
                self.min_distance_km
            );
            self.min_distance_km
        } else {
            distance_km
        };
        self.pathloss_intercept_db + self.pathloss_slope_db * d.log10()
    }

    pub fn tx_power_per_prb_dbm(&self) -> f64 {
        self.tx_power_dbm - 10.0 * (self.carrier_prbs as f64).log10()
    }

    /// Thermal noise over one PRB plus the noise figure.
    pub fn noise_floor_dbm(&self) -> f64 {
        self.noise_density_dbm_hz + 10.0 * self.prb_bandwidth_hz.log10() + self.noise_figure_db
    }

    /// SNR on one PRB. `shadow_db` is a loss (positive lowers SNR),
    /// `fast_fade_db` a gain.
    pub fn snr_db(&self, distance_km: f64, shadow_db: f64, fast_fade_db: f64) -> f64 {
        self.tx_power_per_prb_dbm() - self.path_loss_db(distance_km) - shadow_db + fast_fade_db
            - self.noise_floor_dbm()
    }
}

/// Path loss with the default urban-macro coefficients.
pub fn path_loss(distance_km: f64) -> f64 {
    ChannelParams::default().path_loss_db(distance_km)
}

/// SNR with default parameters; see [`ChannelParams::snr_db`].
pub fn snr(params: &ChannelParams, distance_km: f64, shadow_db: f64, fast_fade_db: f64) -> f64 {
    params.snr_db(distance_km, shadow_db, fast_fade_db)
}
