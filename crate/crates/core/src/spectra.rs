//! Instantaneous spectra along the sweep, edge/bulk classification and
//! adiabaticity diagnostics.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::edge::{transport_block_eigensystem, TransportBlock};
use crate::error::{Error, Result};
use crate::linalg::Eigensystem;
use crate::model::{assemble, BondKind, ChainSpec, C64};

/// Edge levels must sit within this distance (units of `g0`) of a block energy.
pub const EDGE_MATCH_TOL: f64 = 1e-6;
/// Below this level spacing the metric denominator is treated as zero.
pub const POLE_TOL: f64 = 1e-10;
/// Levels closer than this are one degenerate cluster.
pub const DEGENERACY_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct SpectrumSample {
    pub t: f64,
    pub v: f64,
    pub w: f64,
    /// Ascending.
    pub energies: Vec<f64>,
    /// Columns follow `energies`; signs continuous along the sweep.
    pub vectors: DMatrix<f64>,
    /// Level carrying each block branch (branch order = descending energy).
    pub edge_levels: Vec<Option<usize>>,
}

impl SpectrumSample {
    pub fn is_edge(&self, level: usize) -> bool {
        self.edge_levels.contains(&Some(level))
    }

    pub fn edge_count(&self) -> usize {
        self.edge_levels.iter().flatten().count()
    }
}

#[derive(Clone, Debug)]
pub struct SpectrumSweep {
    pub spec: ChainSpec,
    pub block: TransportBlock,
    pub samples: Vec<SpectrumSample>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub t: f64,
    pub omega_t: f64,
    pub level: usize,
    pub energy: f64,
    pub edge: bool,
}

impl SpectrumSweep {
    pub fn sample_spacing(&self) -> f64 {
        self.samples[1].t - self.samples[0].t
    }

    pub fn level_count(&self) -> usize {
        self.spec.site_count()
    }

    pub fn rows(&self) -> Vec<SpectrumRow> {
        let omega = self.spec.drive_frequency();
        self.samples
            .iter()
            .flat_map(|s| {
                s.energies.iter().enumerate().map(move |(level, &energy)| SpectrumRow {
                    t: s.t,
                    omega_t: omega * s.t,
                    level,
                    energy,
                    edge: s.is_edge(level),
                })
            })
            .collect()
    }

    /// Sum of squared mediator amplitudes of `level` at sample `k`.
    pub fn mediator_weight(&self, k: usize, level: usize) -> f64 {
        mediator_weight(&self.spec, &self.samples[k].vectors.column(level).into_owned())
    }
}

pub fn mediator_weight(spec: &ChainSpec, vector: &DVector<f64>) -> f64 {
    vector
        .iter()
        .enumerate()
        .filter(|(i, _)| spec.is_mediator(*i))
        .map(|(_, x)| x * x)
        .sum()
}

/// Diagonalises the chain at `samples` uniformly spaced times over `[0, π/ω]`.
pub fn sweep_spectrum(spec: &ChainSpec, samples: usize) -> Result<SpectrumSweep> {
    if samples < 2 {
        return Err(Error::Input(format!("need at least 2 samples, got {samples}")));
    }
    let block = transport_block_eigensystem(spec.intra_couplings())?;
    let schedule = spec.schedule();
    let end = spec.sweep_time();
    let mut computed: Vec<SpectrumSample> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let t = end * k as f64 / (samples - 1) as f64;
            let (v, w) = schedule.extended(t);
            sample_at(spec, &block, t, v, w)
        })
        .collect();

    for k in 1..computed.len() {
        let (done, rest) = computed.split_at_mut(k);
        let previous = &done[k - 1].vectors;
        let current = &mut rest[0].vectors;
        for level in 0..current.ncols() {
            if previous.column(level).dot(&current.column(level)) < 0.0 {
                current.column_mut(level).neg_mut();
            }
        }
    }
    Ok(SpectrumSweep { spec: spec.clone(), block, samples: computed })
}

fn sample_at(spec: &ChainSpec, block: &TransportBlock, t: f64, v: f64, w: f64) -> SpectrumSample {
    let eig = Eigensystem::of(assemble(spec, v, w, None).matrix());
    let edge_levels = classify_edges(spec, block, &eig);
    SpectrumSample { t, v, w, energies: eig.values, vectors: eig.vectors, edge_levels }
}

/// Spectrum at the single sweep phase `ωt ∈ [0, π]`.
pub fn spectrum_at_phase(spec: &ChainSpec, omega_t: f64) -> Result<SpectrumSample> {
    let block = transport_block_eigensystem(spec.intra_couplings())?;
    let t = omega_t / spec.drive_frequency();
    let (v, w) = spec.schedule().coupling_at(t)?;
    Ok(sample_at(spec, &block, t, v, w))
}

/// For every block energy, the closest level within [`EDGE_MATCH_TOL`],
/// ties broken by smallest mediator weight.
fn classify_edges(spec: &ChainSpec, block: &TransportBlock, eig: &Eigensystem) -> Vec<Option<usize>> {
    let scale = block.energies().iter().fold(1.0f64, |a, e| a.max(e.abs()));
    block
        .energies()
        .iter()
        .map(|&target| {
            (0..eig.len())
                .filter(|&i| (eig.values[i] - target).abs() <= EDGE_MATCH_TOL * scale)
                .min_by(|&a, &b| {
                    let wa = mediator_weight(spec, &eig.vector(a));
                    let wb = mediator_weight(spec, &eig.vector(b));
                    wa.total_cmp(&wb)
                })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MetricMode {
    /// Per-level values; samples where level `r` is degenerate are flagged.
    Raw,
    /// Norm over the degenerate cluster containing `r`; basis independent.
    Projected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SampleFlag {
    Clean,
    /// `|E_r - E_l|` below [`POLE_TOL`].
    Pole,
    /// Level `r` shares its energy with another level.
    Degenerate,
}

#[derive(Clone, Debug, Serialize)]
pub struct AdiabaticitySeries {
    pub times: Vec<f64>,
    /// NaN wherever the sample is flagged and no value is defined.
    pub values: Vec<f64>,
    pub flags: Vec<SampleFlag>,
    pub nan_count: usize,
}

impl AdiabaticitySeries {
    pub fn max_finite(&self) -> f64 {
        self.values.iter().copied().filter(|x| x.is_finite()).fold(0.0, f64::max)
    }

    pub fn flagged(&self) -> usize {
        self.flags.iter().filter(|f| **f != SampleFlag::Clean).count()
    }
}

/// `<Φ_a| dH/dt |Φ_b>` using the analytic bond rates of the schedule.
fn rate_element(spec: &ChainSpec, t: f64, a: &[f64], b: &[f64]) -> f64 {
    let (dv, dw) = spec.schedule().rates(t);
    spec.bonds()
        .iter()
        .map(|bond| {
            let rate = match bond.kind {
                BondKind::Intra { .. } => return 0.0,
                BondKind::Left { .. } => dv,
                BondKind::Right { .. } => dw,
            };
            let (i, j) = bond.sites;
            rate * (a[i] * b[j] + a[j] * b[i])
        })
        .sum()
}

/// `|<Φ_r|∂_t H|Φ_l>/(E_r - E_l)|` at every sample of the sweep.
pub fn adiabaticity_metric(
    sweep: &SpectrumSweep,
    l: usize,
    r: usize,
    mode: MetricMode,
) -> Result<AdiabaticitySeries> {
    let levels = sweep.level_count();
    if l == r || l >= levels || r >= levels {
        return Err(Error::Input(format!("levels l = {l}, r = {r} invalid for {levels} levels")));
    }
    let mut series = AdiabaticitySeries {
        times: Vec::with_capacity(sweep.samples.len()),
        values: Vec::with_capacity(sweep.samples.len()),
        flags: Vec::with_capacity(sweep.samples.len()),
        nan_count: 0,
    };
    for s in &sweep.samples {
        let column = |i: usize| s.vectors.column(i).iter().copied().collect::<Vec<f64>>();
        let phi_l = column(l);
        let gap = s.energies[r] - s.energies[l];
        let cluster: Vec<usize> = (0..levels)
            .filter(|&j| j != l && (s.energies[j] - s.energies[r]).abs() < DEGENERACY_TOL)
            .collect();
        let (value, flag) = if gap.abs() < POLE_TOL {
            (f64::NAN, SampleFlag::Pole)
        } else if cluster.len() > 1 {
            match mode {
                MetricMode::Raw => (f64::NAN, SampleFlag::Degenerate),
                MetricMode::Projected => {
                    let norm = cluster
                        .iter()
                        .map(|&j| rate_element(&sweep.spec, s.t, &column(j), &phi_l).powi(2))
                        .sum::<f64>()
                        .sqrt();
                    ((norm / gap).abs(), SampleFlag::Degenerate)
                }
            }
        } else {
            let element = rate_element(&sweep.spec, s.t, &column(r), &phi_l);
            ((element / gap).abs(), SampleFlag::Clean)
        };
        if value.is_nan() {
            series.nan_count += 1;
        }
        series.times.push(s.t);
        series.values.push(value);
        series.flags.push(flag);
    }
    Ok(series)
}

/// `max_k |Im <Φ_k|Φ̇_k>|` by central differences over a uniformly sampled path.
pub fn berry_connection_max(path: &[DVector<C64>], dt: f64) -> f64 {
    path.windows(3)
        .map(|w| (w[1].dotc(&(&w[2] - &w[0])).im / (2.0 * dt)).abs())
        .fold(0.0, f64::max)
}

/// Largest Berry connection along the sweep for an edge level. Real
/// sign-continuous eigenvectors give zero.
pub fn geometric_phase_check(sweep: &SpectrumSweep, level: usize) -> Result<f64> {
    let interior = &sweep.samples[1..sweep.samples.len() - 1];
    if level >= sweep.level_count() || !interior.iter().all(|s| s.is_edge(level)) {
        return Err(Error::Input(format!("level {level} is not an edge level along the sweep")));
    }
    let path: Vec<DVector<C64>> = sweep
        .samples
        .iter()
        .map(|s| s.vectors.column(level).map(|x| C64::new(x, 0.0)))
        .collect();
    Ok(berry_connection_max(&path, sweep.sample_spacing()))
}
