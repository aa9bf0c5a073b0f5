//! Time-ordered evolution under the sweep, the closed-form adiabatic state
//! and complete transfer runs.

use nalgebra::DVector;
use serde::Serialize;

use crate::disorder::CouplingNoise;
use crate::edge::{common_period, edge_wavefunction_with, transport_block_eigensystem, TransportBlock};
use crate::error::{Error, Result};
use crate::linalg::Eigensystem;
use crate::model::{assemble, bond_values, encode_left_state, target_right_state, Bond, ChainSpec, QuantumState, C64};

pub const DEFAULT_STEPS_PER_PERIOD: f64 = 1000.0;
/// Coarsest step accepted without `allow_coarse_steps`, per period.
pub const MIN_STEPS_PER_PERIOD: f64 = 500.0;
pub const MAX_RECORDS: usize = 500;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, serde::Deserialize)]
pub enum Integrator {
    #[default]
    ExactStepExponential,
    RungeKutta4,
    /// Taylor series of `exp(-i H Δt)` on the sparse bond list, summed until
    /// the next term is below `1e-17`. Agrees with the eigendecomposition to
    /// round-off at a fraction of its cost.
    TaylorExponential,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvolutionConfig {
    pub total_time: f64,
    pub step_count: usize,
    pub integrator: Integrator,
    /// Record every `record_stride` steps; `None` keeps about 500 snapshots.
    pub record_stride: Option<usize>,
    pub allow_coarse_steps: bool,
}

impl EvolutionConfig {
    pub fn new(total_time: f64, step_count: usize) -> Self {
        Self {
            total_time,
            step_count,
            integrator: Integrator::default(),
            record_stride: None,
            allow_coarse_steps: false,
        }
    }

    /// Steps of at most `period / steps_per_period` covering `total_time`.
    pub fn with_resolution(total_time: f64, period: f64, steps_per_period: f64) -> Self {
        let steps = (total_time / period * steps_per_period).ceil().max(1.0) as usize;
        Self::new(total_time, steps)
    }

    pub fn integrator(mut self, integrator: Integrator) -> Self {
        self.integrator = integrator;
        self
    }

    pub fn step_size(&self) -> f64 {
        self.total_time / self.step_count as f64
    }

    pub fn stride(&self) -> usize {
        self.record_stride
            .unwrap_or_else(|| self.step_count.div_ceil(MAX_RECORDS))
            .max(1)
    }

    /// `period` is the dynamical period the step size is measured against.
    pub fn validate(&self, period: Option<f64>) -> Result<()> {
        if !(self.total_time > 0.0 && self.total_time.is_finite()) {
            return Err(Error::Config(format!("total_time must be positive, got {}", self.total_time)));
        }
        if self.step_count == 0 {
            return Err(Error::Config("step_count must be >= 1".into()));
        }
        if self.record_stride == Some(0) {
            return Err(Error::Config("record_stride must be >= 1".into()));
        }
        if let Some(period) = period {
            let limit = period / MIN_STEPS_PER_PERIOD;
            if self.step_size() > limit * (1.0 + 1e-12) && !self.allow_coarse_steps {
                return Err(Error::Config(format!(
                    "step {} exceeds T/{MIN_STEPS_PER_PERIOD} = {limit}; set allow_coarse_steps to override",
                    self.step_size()
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<QuantumState>,
    pub step_size: f64,
}

impl Trajectory {
    pub fn final_state(&self) -> &QuantumState {
        self.states.last().expect("trajectory holds the initial state")
    }

    pub fn population_rows(&self) -> Vec<PopulationRow> {
        self.times
            .iter()
            .zip(&self.states)
            .flat_map(|(&t, s)| {
                s.amplitudes()
                    .iter()
                    .enumerate()
                    .map(move |(site, z)| PopulationRow { t, site, magnitude: z.norm() })
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PopulationRow {
    pub t: f64,
    pub site: usize,
    pub magnitude: f64,
}

/// Period used to police the step size: the common period if there is one,
/// otherwise the shortest edge phase cycle.
pub fn reference_period(block: &TransportBlock) -> Option<f64> {
    match common_period(block) {
        Ok(t) => Some(t),
        Err(_) => {
            let top = block.energies().iter().fold(0.0f64, |a, e| a.max(e.abs()));
            (top > 0.0).then(|| 2.0 * std::f64::consts::PI / top)
        }
    }
}

/// Integrates `i dψ/dt = H(t) ψ` from `t = 0`, freezing `H` at each step
/// midpoint. Times past `π/ω` follow the continued cosine law.
pub fn evolve(
    spec: &ChainSpec,
    initial: &QuantumState,
    config: &EvolutionConfig,
    mut noise: Option<&mut CouplingNoise>,
) -> Result<Trajectory> {
    if initial.dim() != spec.site_count() {
        return Err(Error::Dimension { left: initial.dim(), right: spec.site_count() });
    }
    if (initial.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::Input(format!("initial state has norm {}", initial.norm())));
    }
    let block = transport_block_eigensystem(spec.intra_couplings())?;
    config.validate(reference_period(&block))?;

    let schedule = spec.schedule();
    let dt = config.step_size();
    let stride = config.stride();
    let bonds = spec.bonds();
    let mut values = Vec::with_capacity(bonds.len());
    let mut psi = initial.amplitudes().clone();
    let mut times = vec![0.0];
    let mut states = vec![initial.clone()];
    for step in 0..config.step_count {
        let t_mid = (step as f64 + 0.5) * dt;
        let (v, w) = schedule.extended(t_mid);
        let offsets = noise.as_deref_mut().map(|n| n.offsets(step as u64, t_mid).0.as_slice());
        psi = match config.integrator {
            Integrator::ExactStepExponential => {
                Eigensystem::of(assemble(spec, v, w, offsets).matrix()).propagate(&psi, dt)
            }
            Integrator::RungeKutta4 => rk4_step(&assemble(spec, v, w, offsets), &psi, dt),
            Integrator::TaylorExponential => {
                bond_values(spec, &bonds, v, w, offsets, &mut values);
                taylor_step(&bonds, &values, &psi, dt)
            }
        };
        let done = step + 1;
        if done % stride == 0 || done == config.step_count {
            times.push(done as f64 * dt);
            states.push(QuantumState::from_raw(psi.clone()));
        }
    }
    Ok(Trajectory { times, states, step_size: dt })
}

fn rk4_step(h: &crate::model::Hamiltonian, psi: &DVector<C64>, dt: f64) -> DVector<C64> {
    let minus_i = C64::new(0.0, -1.0);
    let f = |x: &DVector<C64>| h.apply(x) * minus_i;
    let half = C64::new(0.5 * dt, 0.0);
    let full = C64::new(dt, 0.0);
    let k1 = f(psi);
    let k2 = f(&(psi + &k1 * half));
    let k3 = f(&(psi + &k2 * half));
    let k4 = f(&(psi + &k3 * full));
    psi + (k1 + (k2 + k3) * C64::new(2.0, 0.0) + k4) * C64::new(dt / 6.0, 0.0)
}

fn taylor_step(bonds: &[Bond], values: &[f64], psi: &DVector<C64>, dt: f64) -> DVector<C64> {
    const MAX_TERMS: usize = 60;
    let mut sum = psi.clone();
    let mut term = psi.clone();
    let mut next = DVector::zeros(psi.len());
    for k in 1..=MAX_TERMS {
        next.fill(C64::new(0.0, 0.0));
        for (bond, &h) in bonds.iter().zip(values) {
            let (a, b) = bond.sites;
            next[a] += term[b] * h;
            next[b] += term[a] * h;
        }
        // term_k = (-i dt / k) H term_{k-1}
        let factor = C64::new(0.0, -dt / k as f64);
        for (t, n) in term.iter_mut().zip(next.iter()) {
            *t = n * factor;
        }
        sum += &term;
        if term.norm() < 1e-17 {
            break;
        }
    }
    sum
}

/// `Σ_i <χ_i|amps> e^{-i E_i t} |Ψ_i(t)>` for `t` in the sweep window.
pub fn analytic_adiabatic_state(spec: &ChainSpec, t: f64, amps: &[C64]) -> Result<QuantumState> {
    let block = transport_block_eigensystem(spec.intra_couplings())?;
    analytic_state_with(spec, &block, t, amps)
}

fn analytic_state_with(spec: &ChainSpec, block: &TransportBlock, t: f64, amps: &[C64]) -> Result<QuantumState> {
    // Validates length and norm of the input.
    encode_left_state(spec, amps)?;
    let (v, w) = spec.schedule().coupling_at(t)?;
    let weights = block.decompose(amps);
    let mut total = DVector::zeros(spec.site_count());
    for (branch, &c) in weights.iter().enumerate() {
        let edge = edge_wavefunction_with(spec, block, v, w, branch)?;
        let phase = C64::from_polar(1.0, -edge.energy * t);
        total += edge.state.amplitudes() * (c * phase);
    }
    Ok(QuantumState::from_raw(total))
}

/// `|<a|b>|`, clamped to 1 against round-off.
pub fn fidelity(a: &QuantumState, b: &QuantumState) -> Result<f64> {
    Ok(a.inner(b)?.norm().min(1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransferOptions {
    pub integrator: Integrator,
    pub steps_per_period: f64,
    pub record_stride: Option<usize>,
    /// Added to the nominal duration `n T`.
    pub time_offset: f64,
    pub allow_coarse_steps: bool,
    /// Also evaluate the closed-form state at every record (sweep window only).
    pub compare_analytic: bool,
}

impl Default for TransferOptions {
    fn default() -> Self {
        Self {
            integrator: Integrator::default(),
            steps_per_period: DEFAULT_STEPS_PER_PERIOD,
            record_stride: None,
            time_offset: 0.0,
            allow_coarse_steps: false,
            compare_analytic: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TransferResult {
    pub spec: ChainSpec,
    pub circles: f64,
    pub period: f64,
    pub duration: f64,
    pub trajectory: Trajectory,
    pub fidelity: f64,
    /// `|<Ψ_F|ψ(t)>|` at each record.
    pub indicator: Vec<f64>,
    /// `|<analytic(t)|ψ(t)>|` at each record, when requested.
    pub analytic_overlap: Option<Vec<f64>>,
    /// `E_i t_f` per branch.
    pub branch_phases: Vec<f64>,
    /// The factor `e^{-i E_i t_f}` when it is shared by every branch.
    pub global_phase: Option<C64>,
}

impl TransferResult {
    pub fn final_state(&self) -> &QuantumState {
        self.trajectory.final_state()
    }
}

/// Transfer over `n` common periods: `ω = π/(n T)`.
pub fn transfer_experiment(
    spec: &ChainSpec,
    amps: &[C64],
    circles: f64,
    options: &TransferOptions,
) -> Result<TransferResult> {
    if !(circles >= 1.0 && circles.is_finite()) {
        return Err(Error::Input(format!("circles must be >= 1, got {circles}")));
    }
    let block = transport_block_eigensystem(spec.intra_couplings())?;
    let period = common_period(&block)?;
    let nominal = circles * period;
    let spec = spec.with_drive_frequency(std::f64::consts::PI / nominal)?;
    let duration = nominal + options.time_offset;
    if duration.is_nan() || duration <= 0.0 {
        return Err(Error::Input(format!("time_offset {} leaves no evolution", options.time_offset)));
    }

    let initial = encode_left_state(&spec, amps)?;
    let target = target_right_state(&spec, amps)?;
    let mut config = EvolutionConfig::with_resolution(duration, period, options.steps_per_period)
        .integrator(options.integrator);
    config.record_stride = options.record_stride;
    config.allow_coarse_steps = options.allow_coarse_steps;
    let trajectory = evolve(&spec, &initial, &config, None)?;

    let indicator = trajectory
        .states
        .iter()
        .map(|s| fidelity(&target, s))
        .collect::<Result<Vec<_>>>()?;
    let analytic_overlap = if options.compare_analytic {
        let end = spec.sweep_time();
        let mut out = Vec::new();
        for (&t, s) in trajectory.times.iter().zip(&trajectory.states) {
            if t > end * (1.0 + 1e-12) {
                break;
            }
            let reference = analytic_state_with(&spec, &block, t.min(end), amps)?;
            out.push(fidelity(&reference, s)?);
        }
        Some(out)
    } else {
        None
    };
    let fidelity_value = fidelity(&target, trajectory.final_state())?;
    let branch_phases: Vec<f64> = block.energies().iter().map(|e| e * duration).collect();
    let factors: Vec<C64> = branch_phases.iter().map(|p| C64::from_polar(1.0, -p)).collect();
    let global_phase = factors
        .iter()
        .all(|z| (z - factors[0]).norm() < 1e-9)
        .then(|| factors[0]);
    Ok(TransferResult {
        spec,
        circles,
        period,
        duration,
        fidelity: fidelity_value,
        indicator,
        analytic_overlap,
        trajectory,
        branch_phases,
        global_phase,
    })
}
