//! Steady-state reflection of a probe waveguide coupled to the chain.
//!
//! With `M = iΔ_q + iΩ + Γ` the linear response is
//! `<a> = ε / (κ + iΔ_c + Gᵀ M⁻¹ G)` and `r_p = κ <a> / ε`, `t_p = 1 - r_p`.
//! Eigenvalue `E` of `Ω` shows up at `Δ_q = -E`.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Eigensystem;
use crate::model::{build_hamiltonian, ChainSpec, C64};

pub const DEFAULT_KAPPA: f64 = 2.5;
pub const DEFAULT_GAMMA: f64 = 0.01;
pub const DEFAULT_PROBE_COUPLING: f64 = 0.2;
pub const DEFAULT_SCAN_POINTS: usize = 2001;
pub const DEFAULT_SCAN_HALF_WIDTH: f64 = 4.0;
/// Sweep phase `ωt` at which the chain is probed by default.
pub const DEFAULT_PROBE_PHASE: f64 = std::f64::consts::PI / 6.0;
/// Peaks must rise this far above the background in `|r_bg - r_p|`.
pub const MIN_CONTRAST: f64 = 0.05;
pub const RELATIVE_PROMINENCE: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeSetup {
    pub kappa: f64,
    /// Qubit decay rates, one per site.
    pub gamma: Vec<f64>,
    /// Waveguide couplings, one per site.
    pub couplings: Vec<f64>,
    pub detunings: Vec<f64>,
    pub cavity_detuning: f64,
    /// Probe amplitude `ε`; cancels from `r_p`.
    pub drive: f64,
}

impl ProbeSetup {
    /// Defaults for `spec`: uniform decay, [`default_coupling_profile`], and a
    /// 2001-point scan over `[-4, 4]`.
    pub fn for_chain(spec: &ChainSpec) -> Self {
        Self {
            kappa: DEFAULT_KAPPA,
            gamma: vec![DEFAULT_GAMMA; spec.site_count()],
            couplings: default_coupling_profile(spec, DEFAULT_PROBE_COUPLING),
            detunings: uniform_grid(-DEFAULT_SCAN_HALF_WIDTH, DEFAULT_SCAN_HALF_WIDTH, DEFAULT_SCAN_POINTS),
            cavity_detuning: 0.0,
            drive: 1.0,
        }
    }

    pub fn validate(&self, sites: usize) -> Result<()> {
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return Err(Error::Input(format!("kappa must be positive, got {}", self.kappa)));
        }
        if self.gamma.len() != sites || self.couplings.len() != sites {
            return Err(Error::Input(format!(
                "gamma and couplings need {sites} entries, got {} and {}",
                self.gamma.len(),
                self.couplings.len()
            )));
        }
        if let Some(g) = self.gamma.iter().find(|g| !(**g >= 0.0 && g.is_finite())) {
            return Err(Error::Input(format!("qubit decay {g} must be >= 0")));
        }
        if self.couplings.iter().any(|g| !g.is_finite()) || !self.cavity_detuning.is_finite() {
            return Err(Error::Input("couplings and cavity detuning must be finite".into()));
        }
        if self.detunings.iter().any(|d| !d.is_finite()) {
            return Err(Error::Input("detuning grid must be finite".into()));
        }
        if !(self.drive != 0.0 && self.drive.is_finite()) {
            return Err(Error::Input("drive must be finite and nonzero".into()));
        }
        Ok(())
    }
}

pub fn uniform_grid(start: f64, end: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..points).map(|i| start + (end - start) * i as f64 / (points - 1) as f64).collect(),
    }
}

/// `g_probe` on the first transport qubit `A(1, m)` of every cell, zero
/// elsewhere. These are the transport qubits on the upper row of the layout,
/// next to the waveguide; branch `i` then couples through `χ_i[0]`, which
/// is nonzero for every branch of a uniform block.
pub fn default_coupling_profile(spec: &ChainSpec, g_probe: f64) -> Vec<f64> {
    let period = spec.transport_count() + 1;
    (0..spec.site_count())
        .map(|i| if i % period == 0 { g_probe } else { 0.0 })
        .collect()
}

/// Chain hopping matrix at sweep phase `ωt`.
pub fn chain_at_phase(spec: &ChainSpec, omega_t: f64) -> Result<DMatrix<f64>> {
    let (v, w) = spec.schedule().coupling_at(omega_t / spec.drive_frequency())?;
    Ok(build_hamiltonian(spec, v, w, None)?.into_matrix())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProbeResponse {
    pub detuning: f64,
    pub cavity: C64,
    pub reflection: C64,
    pub transmission: C64,
}

pub fn steady_state_response(setup: &ProbeSetup, omega: &DMatrix<f64>, detuning: f64) -> Result<ProbeResponse> {
    let n = omega.nrows();
    let m = DMatrix::from_fn(n, n, |i, j| {
        let diagonal = if i == j { C64::new(setup.gamma[i], detuning) } else { C64::new(0.0, 0.0) };
        diagonal + C64::new(0.0, omega[(i, j)])
    });
    let g = DVector::from_iterator(n, setup.couplings.iter().map(|&x| C64::new(x, 0.0)));
    let pole = || {
        let eig = Eigensystem::of(omega);
        let nearest = eig
            .values
            .iter()
            .copied()
            .min_by(|a, b| (a + detuning).abs().total_cmp(&(b + detuning).abs()))
            .unwrap_or(f64::NAN);
        Error::Pole { detuning, eigenvalue: nearest }
    };
    let x = m.lu().solve(&g).ok_or_else(pole)?;
    let self_energy = g.transpose() * &x;
    let denominator = C64::new(setup.kappa, setup.cavity_detuning) + self_energy[(0, 0)];
    if !(denominator.norm() > 0.0 && denominator.is_finite()) {
        return Err(pole());
    }
    let cavity = C64::new(setup.drive, 0.0) / denominator;
    let reflection = cavity * setup.kappa / setup.drive;
    Ok(ProbeResponse { detuning, cavity, reflection, transmission: C64::new(1.0, 0.0) - reflection })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Peak {
    pub detuning: f64,
    /// Chain eigenvalue the feature belongs to, `-detuning`.
    pub energy: f64,
    pub height: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReflectionScan {
    pub responses: Vec<ProbeResponse>,
    pub peaks: Vec<Peak>,
    pub threshold: f64,
}

pub fn reflection_spectrum_scan(setup: &ProbeSetup, omega: &DMatrix<f64>) -> Result<ReflectionScan> {
    setup.validate(omega.nrows())?;
    if omega.nrows() != omega.ncols() {
        return Err(Error::Dimension { left: omega.nrows(), right: omega.ncols() });
    }
    let responses = setup
        .detunings
        .par_iter()
        .map(|&d| steady_state_response(setup, omega, d))
        .collect::<Result<Vec<_>>>()?;
    let background = C64::new(setup.kappa, 0.0) / C64::new(setup.kappa, setup.cavity_detuning);
    let signal: Vec<f64> = responses.iter().map(|r| (r.reflection - background).norm()).collect();
    let (peaks, threshold) = find_peaks(&setup.detunings, &signal);
    Ok(ReflectionScan { responses, peaks, threshold })
}

/// Local maxima of `signal` above `max(0.5 (max - min), MIN_CONTRAST)`,
/// refined by a parabola through the three neighbouring samples.
pub fn find_peaks(x: &[f64], signal: &[f64]) -> (Vec<Peak>, f64) {
    let max = signal.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = signal.iter().copied().fold(f64::INFINITY, f64::min);
    let threshold = (RELATIVE_PROMINENCE * (max - min)).max(MIN_CONTRAST);
    let mut peaks = Vec::new();
    for i in 1..signal.len().saturating_sub(1) {
        let (a, b, c) = (signal[i - 1], signal[i], signal[i + 1]);
        if b > a && b >= c && b >= threshold {
            let curvature = a - 2.0 * b + c;
            let shift = if curvature < 0.0 { 0.5 * (a - c) / curvature } else { 0.0 };
            let h = x[i + 1] - x[i];
            let detuning = x[i] + shift * h;
            peaks.push(Peak { detuning, energy: -detuning, height: b });
        }
    }
    (peaks, threshold)
}

/// Separation of the outermost detected features.
pub fn edge_gap_from_spectrum(scan: &ReflectionScan) -> Result<f64> {
    if scan.peaks.len() < 2 {
        return Err(Error::Detection { found: scan.peaks.len() });
    }
    let lo = scan.peaks.iter().map(|p| p.detuning).fold(f64::INFINITY, f64::min);
    let hi = scan.peaks.iter().map(|p| p.detuning).fold(f64::NEG_INFINITY, f64::max);
    Ok(hi - lo)
}
