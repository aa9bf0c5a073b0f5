//! Dispatch from a validated config to the library, producing tables and
//! headline metrics.

use std::f64::consts::PI;

use serde_json::{json, Value};
use sshqst::disorder::DisorderModel;
use sshqst::dynamics::{transfer_experiment, TransferOptions};
use sshqst::edge::{common_period, transport_block_eigensystem};
use sshqst::ensembles::{circles_scan, coupling_disorder_ensemble, timing_disorder_ensemble};
use sshqst::hardware::{coupling_at_phase, flux_sweep};
use sshqst::model::Site;
use sshqst::spectra::{
    adiabaticity_metric, mediator_weight, spectrum_at_phase, sweep_spectrum, MetricMode, SampleFlag, SpectrumSample,
};
use sshqst::spectroscopy::{
    chain_at_phase, default_coupling_profile, edge_gap_from_spectrum, reflection_spectrum_scan, uniform_grid,
    ProbeSetup,
};
use sshqst::topology::{winding_number, BlochModel, Convention};
use sshqst::{ChainSpec, Error};

use crate::config::{
    input_amplitudes, CirclesConfig, ConventionChoice, EnsembleConfig, Experiment, ExperimentConfig, MetricModeConfig,
    SpectroscopyConfig, SpectrumConfig, TransferConfig, WindingConfig,
};
use crate::output::{Cell, Table};

pub struct Outcome {
    pub tables: Vec<Table>,
    pub metrics: Value,
}

/// Failure of a validated run, tagged for the error file.
#[derive(Debug)]
pub enum RunError {
    Config(crate::config::FieldError),
    Model(Error),
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Model(e)
    }
}

impl From<crate::config::FieldError> for RunError {
    fn from(e: crate::config::FieldError) -> Self {
        RunError::Config(e)
    }
}

type Run = Result<Outcome, RunError>;

/// Converts model quantities to physical units for outputs.
#[derive(Clone, Copy)]
struct Units {
    /// `g0/2π` in MHz.
    mhz: f64,
}

impl Units {
    fn energy_mhz(self, e: f64) -> f64 {
        e * self.mhz
    }

    /// `t` in `1/g0` to μs: `g0 = 2π · mhz · 10^6 s^-1`.
    fn time_us(self, t: f64) -> f64 {
        t / (2.0 * PI * self.mhz)
    }
}

pub fn run(config: &ExperimentConfig) -> Run {
    let units = Units { mhz: config.energy_unit_mhz };
    match &config.experiment {
        Experiment::Spectrum(c) => spectrum(c, units),
        Experiment::Transfer(c) => transfer(c, units),
        Experiment::EnsembleCoupling(c) => ensemble(c, units, config.seed, false),
        Experiment::EnsembleTiming(c) => ensemble(c, units, config.seed, true),
        Experiment::CirclesScan(c) => circles(c, units),
        Experiment::Winding(c) => winding(c),
        Experiment::Spectroscopy(c) => spectroscopy(c, units),
        Experiment::Hardware(c) => hardware(c, units),
    }
}

fn site_label(spec: &ChainSpec, flat: usize) -> String {
    match spec.site(flat) {
        Ok(Site::Transport { row, cell }) => format!("A({},{})", row + 1, cell + 1),
        Ok(Site::Mediator { cell }) => format!("B({})", cell + 1),
        Err(_) => "?".into(),
    }
}

fn spectrum_rows(table: &mut Table, spec: &ChainSpec, s: &SpectrumSample, omega_t: f64, units: Units) {
    for (level, &e) in s.energies.iter().enumerate() {
        let weight = mediator_weight(spec, &s.vectors.column(level).into_owned());
        table.push(vec![
            Cell::F(omega_t),
            Cell::U(level as u64),
            Cell::F(e),
            Cell::F(units.energy_mhz(e)),
            Cell::U(s.is_edge(level) as u64),
            Cell::F(weight),
        ]);
    }
}

fn spectrum(c: &SpectrumConfig, units: Units) -> Run {
    let spec = c.chain.spec(c.cell_count, "cell_count")?.with_drive_frequency(c.drive_frequency)?;
    let block = transport_block_eigensystem(spec.intra_couplings())?;
    let mut table = Table::new(
        "",
        &["omega_t [rad]", "level", "energy [g0]", "energy [MHz]", "edge", "mediator_weight"],
    );
    let mut tables = Vec::new();
    let mut edge_counts = Vec::new();
    let mut adiabatic = Value::Null;
    match &c.phases_over_pi {
        Some(phases) => {
            for &p in phases {
                let s = spectrum_at_phase(&spec, p * PI)?;
                edge_counts.push(s.edge_count());
                spectrum_rows(&mut table, &spec, &s, p * PI, units);
            }
            tables.push(table);
        }
        None => {
            let sweep = sweep_spectrum(&spec, c.samples)?;
            for s in &sweep.samples {
                edge_counts.push(s.edge_count());
                spectrum_rows(&mut table, &spec, s, s.t * spec.drive_frequency(), units);
            }
            tables.push(table);
            if let Some(a) = &c.adiabaticity {
                let mode = match a.mode {
                    MetricModeConfig::Raw => MetricMode::Raw,
                    MetricModeConfig::Projected => MetricMode::Projected,
                };
                let mut t = Table::new("adiabaticity", &["omega_t [rad]", "level_l", "level_r", "metric", "flag"]);
                let mut worst = 0.0f64;
                let mut nan = 0;
                for r in (0..sweep.level_count()).filter(|&r| r != a.level) {
                    let series = adiabaticity_metric(&sweep, a.level, r, mode)?;
                    worst = worst.max(series.max_finite());
                    nan += series.nan_count;
                    for k in 0..series.times.len() {
                        let flag = match series.flags[k] {
                            SampleFlag::Clean => "clean",
                            SampleFlag::Pole => "pole",
                            SampleFlag::Degenerate => "degenerate",
                        };
                        t.push(vec![
                            Cell::F(series.times[k] * spec.drive_frequency()),
                            Cell::U(a.level as u64),
                            Cell::U(r as u64),
                            Cell::F(series.values[k]),
                            Cell::S(flag.into()),
                        ]);
                    }
                }
                tables.push(t);
                adiabatic = json!({ "level": a.level, "max_finite": worst, "nan_samples": nan });
            }
        }
    }
    Ok(Outcome {
        tables,
        metrics: json!({
            "site_count": spec.site_count(),
            "block_energies_g0": block.energies(),
            "edge_levels_min": edge_counts.iter().min(),
            "edge_levels_max": edge_counts.iter().max(),
            "adiabaticity": adiabatic,
        }),
    })
}

fn transfer(c: &TransferConfig, units: Units) -> Run {
    let spec = c.chain.spec(c.cell_count, "cell_count")?;
    let amps = input_amplitudes(&c.input, spec.transport_count())?;
    let options = TransferOptions {
        integrator: c.integrator,
        steps_per_period: c.steps_per_period,
        time_offset: c.time_offset,
        compare_analytic: c.compare_analytic,
        ..Default::default()
    };
    let r = transfer_experiment(&spec, &amps, c.circles, &options)?;
    let mut series = Table::new("", &["t [1/g0]", "t [us]", "omega_t [rad]", "target_overlap", "analytic_overlap"]);
    let omega = r.spec.drive_frequency();
    for (k, &t) in r.trajectory.times.iter().enumerate() {
        let analytic = r.analytic_overlap.as_ref().and_then(|a| a.get(k)).copied();
        series.push(vec![
            Cell::F(t),
            Cell::F(units.time_us(t)),
            Cell::F(omega * t),
            Cell::F(r.indicator[k]),
            analytic.map_or(Cell::Empty, Cell::F),
        ]);
    }
    let mut tables = vec![series];
    if c.populations {
        let mut pop = Table::new("populations", &["t [1/g0]", "t [us]", "site", "label", "amplitude_abs"]);
        for row in r.trajectory.population_rows() {
            pop.push(vec![
                Cell::F(row.t),
                Cell::F(units.time_us(row.t)),
                Cell::U(row.site as u64),
                Cell::S(site_label(&r.spec, row.site)),
                Cell::F(row.magnitude),
            ]);
        }
        tables.push(pop);
    }
    let min_analytic = r.analytic_overlap.as_ref().map(|a| a.iter().copied().fold(f64::INFINITY, f64::min));
    Ok(Outcome {
        tables,
        metrics: json!({
            "fidelity": r.fidelity,
            "circles": r.circles,
            "site_count": r.spec.site_count(),
            "drive_frequency_g0": omega,
            "period_g0inv": r.period,
            "period_us": units.time_us(r.period),
            "duration_g0inv": r.duration,
            "duration_us": units.time_us(r.duration),
            "min_analytic_overlap": min_analytic,
            "branch_phases_rad": r.branch_phases,
            "global_phase": r.global_phase.map(|z| [z.re, z.im]),
            "input": amps.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
        }),
    })
}

fn ensemble(c: &EnsembleConfig, units: Units, seed: u64, timing: bool) -> Run {
    let amps = input_amplitudes(&c.input, c.chain.transport_count)?;
    let options = TransferOptions {
        integrator: c.integrator,
        steps_per_period: c.steps_per_period,
        ..Default::default()
    };
    let chain = c.chain.spec(2, "chain")?;
    let period = common_period(&transport_block_eigensystem(chain.intra_couplings())?)?;
    let sigma_header = if timing { ["sigma [T]", "sigma [us]"] } else { ["sigma [g0]", "sigma [MHz]"] };
    let mut summary = Table::new(
        "",
        &[
            "cell_count",
            sigma_header[0],
            sigma_header[1],
            "mean_fidelity",
            "std_fidelity",
            "min_fidelity",
            "max_fidelity",
            "rejected_draws",
        ],
    );
    let mut all = Table::new("fidelities", &["cell_count", sigma_header[0], "repetition", "fidelity"]);
    let mut points = Vec::new();
    for (mi, &m) in c.cell_counts.iter().enumerate() {
        let spec = c.chain.spec(m, &format!("cell_counts[{mi}]"))?;
        for &sigma in &c.sigmas {
            let mut model = DisorderModel {
                seed,
                repetitions: c.repetitions,
                redraw_interval: c.redraw_interval,
                ..Default::default()
            };
            let r = if timing {
                model.timing_sigma = sigma;
                timing_disorder_ensemble(&spec, &amps, c.circles, &model, &options)?
            } else {
                model.coupling_sigma = sigma;
                coupling_disorder_ensemble(&spec, &amps, c.circles, &model, &options)?
            };
            let min = r.fidelities.iter().copied().fold(f64::INFINITY, f64::min);
            let max = r.fidelities.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let physical = if timing { units.time_us(sigma * period) } else { units.energy_mhz(sigma) };
            summary.push(vec![
                Cell::U(m as u64),
                Cell::F(sigma),
                Cell::F(physical),
                Cell::F(r.mean),
                Cell::F(r.std),
                Cell::F(min),
                Cell::F(max),
                Cell::U(r.rejected_draws as u64),
            ]);
            if c.keep_fidelities {
                for (k, &f) in r.fidelities.iter().enumerate() {
                    all.push(vec![Cell::U(m as u64), Cell::F(sigma), Cell::U(k as u64), Cell::F(f)]);
                }
            }
            points.push(json!({ "cell_count": m, "sigma": sigma, "mean": r.mean, "std": r.std }));
        }
    }
    let mut tables = vec![summary];
    if c.keep_fidelities {
        tables.push(all);
    }
    Ok(Outcome {
        tables,
        metrics: json!({
            "kind": if timing { "timing" } else { "coupling" },
            "sigma_unit": if timing { "T" } else { "g0" },
            "period_g0inv": period,
            "repetitions": c.repetitions,
            "points": points,
        }),
    })
}

fn circles(c: &CirclesConfig, units: Units) -> Run {
    let amps = input_amplitudes(&c.input, c.chain.transport_count)?;
    let options = TransferOptions {
        integrator: c.integrator,
        steps_per_period: c.steps_per_period,
        ..Default::default()
    };
    let mut table = Table::new("", &["cell_count", "circles", "fidelity", "duration [us]"]);
    let mut per_chain = Vec::new();
    for (mi, &m) in c.cell_counts.iter().enumerate() {
        let spec = c.chain.spec(m, &format!("cell_counts[{mi}]"))?;
        let period = common_period(&transport_block_eigensystem(spec.intra_couplings())?)?;
        let scan = circles_scan(&spec, &amps, &c.circles, &options)?;
        for row in &scan.rows {
            table.push(vec![
                Cell::U(m as u64),
                Cell::F(row.circles),
                Cell::F(row.fidelity),
                Cell::F(units.time_us(row.circles * period)),
            ]);
        }
        let first_099 = scan.rows.iter().find(|r| r.fidelity >= 0.99).map(|r| r.circles);
        per_chain.push(json!({
            "cell_count": m,
            "monotone": scan.monotone,
            "best_fidelity": scan.rows.iter().map(|r| r.fidelity).fold(0.0, f64::max),
            "first_circles_reaching_0.99": first_099,
        }));
    }
    Ok(Outcome { tables: vec![table], metrics: json!({ "chains": per_chain }) })
}

fn winding(c: &WindingConfig) -> Run {
    let mut table = Table::new(
        "",
        &["omega_t [rad]", "v [g0]", "w [g0]", "convention", "winding", "raw", "residual", "min_modulus", "status"],
    );
    let mut values = Vec::new();
    let mut closed = 0;
    for k in 0..c.samples {
        let phase = PI * (k as f64 + 0.5) / c.samples as f64;
        let v = c.drive_amplitude * (1.0 - phase.cos());
        let w = c.drive_amplitude * (1.0 + phase.cos());
        let convention = match c.convention {
            ConventionChoice::LeftCell => Convention::LeftCell,
            ConventionChoice::RightCell => Convention::RightCell,
            ConventionChoice::Matched if v < w => Convention::LeftCell,
            ConventionChoice::Matched => Convention::RightCell,
        };
        let name = match convention {
            Convention::LeftCell => "LeftCell",
            Convention::RightCell => "RightCell",
        };
        let model = BlochModel::new(convention, v, w).with_k_points(c.k_points);
        let mut row = vec![Cell::F(phase), Cell::F(v), Cell::F(w), Cell::S(name.into())];
        match winding_number(&model) {
            Ok(wn) => {
                values.push(wn.value);
                row.extend([
                    Cell::I(wn.value),
                    Cell::F(wn.raw),
                    Cell::F(wn.residual),
                    Cell::F(wn.min_modulus),
                    Cell::S("ok".into()),
                ]);
            }
            Err(Error::GapClosed { min_modulus, .. }) => {
                closed += 1;
                row.extend([Cell::Empty, Cell::Empty, Cell::Empty, Cell::F(min_modulus), Cell::S("gap_closed".into())]);
            }
            Err(e) => return Err(e.into()),
        }
        table.push(row);
    }
    Ok(Outcome {
        tables: vec![table],
        metrics: json!({
            "samples": c.samples,
            "gap_closed_samples": closed,
            "winding_min": values.iter().min(),
            "winding_max": values.iter().max(),
        }),
    })
}

fn spectroscopy(c: &SpectroscopyConfig, units: Units) -> Run {
    let spec = c.chain.spec(c.cell_count, "cell_count")?;
    let profile = c.coupling_profile.clone().unwrap_or_else(|| default_coupling_profile(&spec, c.probe_coupling));
    let setup = ProbeSetup {
        kappa: c.kappa,
        gamma: vec![c.gamma; spec.site_count()],
        couplings: profile.clone(),
        detunings: uniform_grid(-c.detuning_max, c.detuning_max, c.points),
        cavity_detuning: c.cavity_detuning,
        drive: 1.0,
    };
    let mut response = Table::new(
        "",
        &["omega_t [rad]", "detuning [g0]", "detuning [MHz]", "reflection_abs", "reflection_arg [rad]", "transmission_abs"],
    );
    let mut peaks = Table::new("peaks", &["omega_t [rad]", "detuning [g0]", "energy [g0]", "energy [MHz]", "height"]);
    let mut profile_table = Table::new("profile", &["site", "label", "G [g0]", "G [MHz]"]);
    for (i, &g) in profile.iter().enumerate() {
        profile_table.push(vec![Cell::U(i as u64), Cell::S(site_label(&spec, i)), Cell::F(g), Cell::F(units.energy_mhz(g))]);
    }
    let mut gaps = Vec::new();
    for &p in &c.phases_over_pi {
        let omega = chain_at_phase(&spec, p * PI)?;
        let scan = reflection_spectrum_scan(&setup, &omega)?;
        for r in &scan.responses {
            response.push(vec![
                Cell::F(p * PI),
                Cell::F(r.detuning),
                Cell::F(units.energy_mhz(r.detuning)),
                Cell::F(r.reflection.norm()),
                Cell::F(r.reflection.arg()),
                Cell::F(r.transmission.norm()),
            ]);
        }
        for peak in &scan.peaks {
            peaks.push(vec![
                Cell::F(p * PI),
                Cell::F(peak.detuning),
                Cell::F(peak.energy),
                Cell::F(units.energy_mhz(peak.energy)),
                Cell::F(peak.height),
            ]);
        }
        let gap = match edge_gap_from_spectrum(&scan) {
            Ok(g) => json!({ "omega_t": p * PI, "gap_g0": g, "gap_mhz": units.energy_mhz(g), "peaks": scan.peaks.len() }),
            Err(Error::Detection { found }) => {
                json!({ "omega_t": p * PI, "gap_g0": null, "peaks": found, "status": "detection_failed" })
            }
            Err(e) => return Err(e.into()),
        };
        gaps.push(gap);
    }
    Ok(Outcome { tables: vec![response, peaks, profile_table], metrics: json!({ "phases": gaps }) })
}

fn hardware(c: &crate::config::HardwareConfig, units: Units) -> Run {
    let params = c.params();
    let rows = flux_sweep(&params, c.points)?;
    let mut table = Table::new("", &["phi_ext [rad]", "delta [rad]", "g/2pi [MHz]", "|g| [g0]", "sign"]);
    for r in &rows {
        table.push(vec![
            Cell::F(r.phi_ext),
            Cell::F(r.delta),
            Cell::F(r.coupling_mhz),
            Cell::F(r.coupling_mhz.abs() / units.mhz),
            Cell::I(if r.coupling_mhz < 0.0 { -1 } else { 1 }),
        ]);
    }
    let zero = coupling_at_phase(&params, 0.0)? / (2.0 * PI * 1e6);
    let min = rows.iter().map(|r| r.coupling_mhz).fold(f64::INFINITY, f64::min);
    let max = rows.iter().map(|r| r.coupling_mhz).fold(f64::NEG_INFINITY, f64::max);
    Ok(Outcome {
        tables: vec![table],
        metrics: json!({
            "beta": params.beta(),
            "coupling_at_zero_flux_mhz": zero,
            "coupling_min_mhz": min,
            "coupling_max_mhz": max,
        }),
    })
}
