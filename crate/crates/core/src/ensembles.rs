//! Disorder ensembles and scans over the number of dynamical periods.
//!
//! Repetitions run on the rayon pool and are collected in repetition order.

use rayon::prelude::*;
use serde::Serialize;

use crate::disorder::{draw_time_offset, DisorderModel};
use crate::dynamics::{evolve, fidelity, transfer_experiment, EvolutionConfig, TransferOptions};
use crate::edge::{common_period, transport_block_eigensystem};
use crate::error::{Error, Result};
use crate::model::{encode_left_state, target_right_state, ChainSpec, QuantumState, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DisorderKind {
    Coupling,
    Timing,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnsembleResult {
    pub kind: DisorderKind,
    /// ξ in units of `g0` or η in units of `T`.
    pub sigma: f64,
    pub transport_count: usize,
    pub cell_count: usize,
    pub circles: f64,
    pub seed: u64,
    pub fidelities: Vec<f64>,
    pub mean: f64,
    pub std: f64,
    /// Timing draws with `t_f + δt <= 0` that were discarded.
    pub rejected_draws: usize,
}

impl EnsembleResult {
    fn new(kind: DisorderKind, sigma: f64, spec: &ChainSpec, circles: f64, seed: u64, fidelities: Vec<f64>, rejected: usize) -> Self {
        let n = fidelities.len() as f64;
        let mean = fidelities.iter().sum::<f64>() / n;
        let std = if fidelities.len() > 1 {
            (fidelities.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Self {
            kind,
            sigma,
            transport_count: spec.transport_count(),
            cell_count: spec.cell_count(),
            circles,
            seed,
            fidelities,
            mean,
            std,
            rejected_draws: rejected,
        }
    }
}

struct Setup {
    spec: ChainSpec,
    period: f64,
    initial: QuantumState,
    target: QuantumState,
}

fn setup(spec: &ChainSpec, amps: &[C64], circles: f64) -> Result<Setup> {
    if !(circles >= 1.0 && circles.is_finite()) {
        return Err(Error::Input(format!("circles must be >= 1, got {circles}")));
    }
    let block = transport_block_eigensystem(spec.intra_couplings())?;
    let period = common_period(&block)?;
    let spec = spec.with_drive_frequency(std::f64::consts::PI / (circles * period))?;
    Ok(Setup {
        initial: encode_left_state(&spec, amps)?,
        target: target_right_state(&spec, amps)?,
        spec,
        period,
    })
}

fn final_only(duration: f64, period: f64, options: &TransferOptions) -> EvolutionConfig {
    let mut config = EvolutionConfig::with_resolution(duration, period, options.steps_per_period)
        .integrator(options.integrator);
    config.record_stride = Some(config.step_count);
    config.allow_coarse_steps = options.allow_coarse_steps;
    config
}

/// Transfers with Gaussian bond offsets of standard deviation
/// `model.coupling_sigma`, one fresh stream per repetition.
pub fn coupling_disorder_ensemble(
    spec: &ChainSpec,
    amps: &[C64],
    circles: f64,
    model: &DisorderModel,
    options: &TransferOptions,
) -> Result<EnsembleResult> {
    model.validate()?;
    let s = setup(spec, amps, circles)?;
    let config = final_only(circles * s.period + options.time_offset, s.period, options);
    let fidelities = (0..model.repetitions)
        .into_par_iter()
        .map(|rep| {
            let mut noise = model.coupling_noise(rep, s.spec.bond_count());
            let traj = evolve(&s.spec, &s.initial, &config, Some(&mut noise))?;
            fidelity(&s.target, traj.final_state())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EnsembleResult::new(DisorderKind::Coupling, model.coupling_sigma, &s.spec, circles, model.seed, fidelities, 0))
}

/// Clean transfers whose duration is perturbed by `δt ~ N(0, η T)`.
pub fn timing_disorder_ensemble(
    spec: &ChainSpec,
    amps: &[C64],
    circles: f64,
    model: &DisorderModel,
    options: &TransferOptions,
) -> Result<EnsembleResult> {
    model.validate()?;
    let s = setup(spec, amps, circles)?;
    let nominal = circles * s.period + options.time_offset;
    let runs = (0..model.repetitions)
        .into_par_iter()
        .map(|rep| {
            let mut rng = model.rng(rep);
            let (dt, rejected) = draw_time_offset(&mut rng, nominal, model.timing_sigma * s.period);
            let config = final_only(nominal + dt, s.period, options);
            let traj = evolve(&s.spec, &s.initial, &config, None)?;
            Ok((fidelity(&s.target, traj.final_state())?, rejected))
        })
        .collect::<Result<Vec<(f64, usize)>>>()?;
    let rejected = runs.iter().map(|r| r.1).sum();
    let fidelities = runs.into_iter().map(|r| r.0).collect();
    Ok(EnsembleResult::new(DisorderKind::Timing, model.timing_sigma, &s.spec, circles, model.seed, fidelities, rejected))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CirclesRow {
    pub circles: f64,
    pub fidelity: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CirclesScan {
    pub rows: Vec<CirclesRow>,
    /// Fidelity never drops by more than `MONOTONE_SLACK` between
    /// consecutive entries. Reported, not enforced.
    pub monotone: bool,
}

pub const MONOTONE_SLACK: f64 = 1e-3;

/// Clean transfer fidelity for each entry of `circles`.
pub fn circles_scan(spec: &ChainSpec, amps: &[C64], circles: &[f64], options: &TransferOptions) -> Result<CirclesScan> {
    if circles.is_empty() {
        return Err(Error::Input("circles list is empty".into()));
    }
    let mut options = options.clone();
    options.compare_analytic = false;
    options.record_stride = Some(usize::MAX);
    let rows = circles
        .par_iter()
        .map(|&n| {
            let result = transfer_experiment(spec, amps, n, &options)?;
            Ok(CirclesRow { circles: n, fidelity: result.fidelity })
        })
        .collect::<Result<Vec<_>>>()?;
    let monotone = rows.windows(2).all(|w| w[1].fidelity >= w[0].fidelity - MONOTONE_SLACK);
    Ok(CirclesScan { rows, monotone })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell() -> [C64; 2] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        [C64::new(s, 0.0), C64::new(s, 0.0)]
    }

    #[test]
    fn zero_sigma_reproduces_clean_transfer() {
        let spec = ChainSpec::two_qubit(2, 0.1).unwrap();
        let options = TransferOptions::default();
        let clean = transfer_experiment(&spec, &bell(), 2.0, &options).unwrap().fidelity;
        let model = DisorderModel { repetitions: 3, ..Default::default() };
        let coupling = coupling_disorder_ensemble(&spec, &bell(), 2.0, &model, &options).unwrap();
        let timing = timing_disorder_ensemble(&spec, &bell(), 2.0, &model, &options).unwrap();
        assert!(coupling.fidelities.iter().all(|&f| f == clean));
        assert!(timing.fidelities.iter().all(|&f| f == clean));
        assert!(coupling.std < 1e-12);
    }

    #[test]
    fn mean_is_arithmetic_mean() {
        let spec = ChainSpec::two_qubit(2, 0.1).unwrap();
        let model = DisorderModel { coupling_sigma: 0.3, repetitions: 4, seed: 9, ..Default::default() };
        let r = coupling_disorder_ensemble(&spec, &bell(), 1.0, &model, &TransferOptions::default()).unwrap();
        assert_eq!(r.fidelities.len(), 4);
        assert_eq!(r.mean, r.fidelities.iter().sum::<f64>() / 4.0);
        assert!(r.fidelities.iter().all(|f| (0.0..=1.0).contains(f)));
    }

    #[test]
    fn scan_rejects_empty_and_small_circles() {
        let spec = ChainSpec::two_qubit(2, 0.1).unwrap();
        let options = TransferOptions::default();
        assert!(circles_scan(&spec, &bell(), &[], &options).is_err());
        assert!(circles_scan(&spec, &bell(), &[0.0], &options).is_err());
    }
}
