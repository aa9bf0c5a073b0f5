//! Gaussian coupling and timing noise with reproducible per-repetition streams.
//!
//! Repetition `r` of a study seeded with `s` draws from ChaCha8 seeded with
//! `s` on stream `r`, so results do not depend on how repetitions are
//! scheduled across workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::BondOffsets;

pub const DEFAULT_REPETITIONS: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DisorderModel {
    /// Standard deviation of every bond offset, in units of `g0`.
    pub coupling_sigma: f64,
    /// Standard deviation of the total-time error, in units of the common period.
    pub timing_sigma: f64,
    /// Integration time between fresh coupling draws; `None` redraws every step.
    pub redraw_interval: Option<f64>,
    pub seed: u64,
    pub repetitions: usize,
}

impl Default for DisorderModel {
    fn default() -> Self {
        Self {
            coupling_sigma: 0.0,
            timing_sigma: 0.0,
            redraw_interval: None,
            seed: 0,
            repetitions: DEFAULT_REPETITIONS,
        }
    }
}

impl DisorderModel {
    pub fn validate(&self) -> Result<()> {
        if !(self.coupling_sigma >= 0.0 && self.coupling_sigma.is_finite()) {
            return Err(Error::Input(format!("coupling_sigma must be >= 0, got {}", self.coupling_sigma)));
        }
        if !(self.timing_sigma >= 0.0 && self.timing_sigma.is_finite()) {
            return Err(Error::Input(format!("timing_sigma must be >= 0, got {}", self.timing_sigma)));
        }
        if let Some(dt) = self.redraw_interval {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Error::Input(format!("redraw_interval must be positive, got {dt}")));
            }
        }
        if self.repetitions == 0 {
            return Err(Error::Input("repetitions must be >= 1".into()));
        }
        Ok(())
    }

    pub fn rng(&self, repetition: usize) -> ChaCha8Rng {
        repetition_rng(self.seed, repetition)
    }

    pub fn coupling_noise(&self, repetition: usize, bond_count: usize) -> CouplingNoise {
        CouplingNoise::new(self.rng(repetition), self.coupling_sigma, bond_count, self.redraw_interval)
    }
}

pub fn repetition_rng(seed: u64, repetition: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(repetition as u64);
    rng
}

/// Time-dependent bond offsets, piecewise constant over redraw epochs.
#[derive(Clone, Debug)]
pub struct CouplingNoise {
    rng: ChaCha8Rng,
    normal: Normal<f64>,
    interval: Option<f64>,
    epoch: Option<u64>,
    current: BondOffsets,
}

impl CouplingNoise {
    fn new(rng: ChaCha8Rng, sigma: f64, bond_count: usize, interval: Option<f64>) -> Self {
        Self {
            rng,
            // sigma was validated finite and non-negative
            normal: Normal::new(0.0, sigma).expect("valid sigma"),
            interval,
            epoch: None,
            current: BondOffsets(vec![0.0; bond_count]),
        }
    }

    /// Offsets in force for integration step `step`, whose midpoint is `t_mid`.
    /// Epochs must be requested in non-decreasing order.
    pub fn offsets(&mut self, step: u64, t_mid: f64) -> &BondOffsets {
        let epoch = match self.interval {
            None => step,
            Some(dt) => (t_mid / dt).floor().max(0.0) as u64,
        };
        if self.epoch != Some(epoch) {
            for x in self.current.0.iter_mut() {
                *x = self.normal.sample(&mut self.rng);
            }
            self.epoch = Some(epoch);
        }
        &self.current
    }
}

/// Draws a Gaussian time offset with standard deviation `sigma`, redrawing
/// while `nominal + offset <= 0`. Returns the offset and the number of
/// rejected draws.
pub fn draw_time_offset(rng: &mut ChaCha8Rng, nominal: f64, sigma: f64) -> (f64, usize) {
    let normal = Normal::new(0.0, sigma).expect("valid sigma");
    let mut rejected = 0;
    loop {
        let dt = normal.sample(rng);
        if nominal + dt > 0.0 {
            return (dt, rejected);
        }
        rejected += 1;
    }
}
