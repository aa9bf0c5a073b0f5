//! Chain geometry, the single-excitation Hamiltonian, the cosine coupling
//! schedule and encoded end states.
//!
//! Sites are numbered serially cell by cell: `A(1,1) .. A(N,1), B(1), A(1,2),
//! ..., B(M-1), A(1,M) .. A(N,M)`. The mediator of the last cell is absent, so
//! a chain of `M` cells with `N` transport qubits per cell has `(N+1)M - 1`
//! sites. All energies are in units of the intra-cell scale `g0` and all
//! times in `1/g0`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance on the norm of user-supplied input amplitudes.
pub const INPUT_NORM_TOL: f64 = 1e-12;

/// Default `g0`: 2π × 10 MHz, in rad/s.
pub const DEFAULT_ENERGY_UNIT: f64 = 2.0 * PI * 10.0e6;

/// Static description of an extended SSH(N) chain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainSpec {
    transport_count: usize,
    cell_count: usize,
    intra_couplings: Vec<f64>,
    drive_amplitude: f64,
    drive_frequency: f64,
    energy_unit: f64,
}

impl ChainSpec {
    pub fn new(
        transport_count: usize,
        cell_count: usize,
        intra_couplings: Vec<f64>,
        drive_amplitude: f64,
        drive_frequency: f64,
    ) -> Result<Self> {
        let spec = Self {
            transport_count,
            cell_count,
            intra_couplings,
            drive_amplitude,
            drive_frequency,
            energy_unit: DEFAULT_ENERGY_UNIT,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Two transport qubits per cell coupled by `g = 1`, driven with `J = 5`.
    pub fn two_qubit(cell_count: usize, drive_frequency: f64) -> Result<Self> {
        Self::new(2, cell_count, vec![1.0], 5.0, drive_frequency)
    }

    /// Three transport qubits per cell with uniform `g = 1`, driven with `J = 5`.
    pub fn three_qubit(cell_count: usize, drive_frequency: f64) -> Result<Self> {
        Self::new(3, cell_count, vec![1.0, 1.0], 5.0, drive_frequency)
    }

    pub fn with_energy_unit(mut self, energy_unit: f64) -> Result<Self> {
        self.energy_unit = energy_unit;
        self.validate()?;
        Ok(self)
    }

    pub fn with_drive_frequency(&self, drive_frequency: f64) -> Result<Self> {
        let mut spec = self.clone();
        spec.drive_frequency = drive_frequency;
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_cell_count(&self, cell_count: usize) -> Result<Self> {
        let mut spec = self.clone();
        spec.cell_count = cell_count;
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.transport_count < 1 {
            return Err(Error::Spec("transport_count must be >= 1".into()));
        }
        if self.cell_count < 2 {
            return Err(Error::Spec("cell_count must be >= 2".into()));
        }
        if self.intra_couplings.len() + 1 != self.transport_count {
            return Err(Error::Spec(format!(
                "{} transport qubits need {} intra-cell couplings, got {}",
                self.transport_count,
                self.transport_count - 1,
                self.intra_couplings.len()
            )));
        }
        if let Some(g) = self.intra_couplings.iter().find(|g| !(g.is_finite() && **g > 0.0)) {
            return Err(Error::Spec(format!("intra-cell coupling {g} must be positive")));
        }
        for (name, x) in [
            ("drive_amplitude", self.drive_amplitude),
            ("drive_frequency", self.drive_frequency),
            ("energy_unit", self.energy_unit),
        ] {
            if !(x.is_finite() && x > 0.0) {
                return Err(Error::Spec(format!("{name} must be positive, got {x}")));
            }
        }
        Ok(())
    }

    pub fn transport_count(&self) -> usize {
        self.transport_count
    }

    pub fn cell_count(&self) -> usize {
        self.cell_count
    }

    pub fn intra_couplings(&self) -> &[f64] {
        &self.intra_couplings
    }

    pub fn drive_amplitude(&self) -> f64 {
        self.drive_amplitude
    }

    pub fn drive_frequency(&self) -> f64 {
        self.drive_frequency
    }

    pub fn energy_unit(&self) -> f64 {
        self.energy_unit
    }

    /// Number of sites, `(N+1)M - 1`.
    pub fn site_count(&self) -> usize {
        (self.transport_count + 1) * self.cell_count - 1
    }

    /// `2(M-1)` staggered bonds plus `(N-1)M` intra-cell bonds.
    pub fn bond_count(&self) -> usize {
        2 * (self.cell_count - 1) + (self.transport_count - 1) * self.cell_count
    }

    /// Duration of the full sweep, `π/ω`.
    pub fn sweep_time(&self) -> f64 {
        PI / self.drive_frequency
    }

    pub fn schedule(&self) -> CouplingSchedule {
        CouplingSchedule {
            amplitude: self.drive_amplitude,
            frequency: self.drive_frequency,
        }
    }

    pub fn flat_index(&self, site: Site) -> Result<usize> {
        let stride = self.transport_count + 1;
        match site {
            Site::Transport { row, cell } if row < self.transport_count && cell < self.cell_count => {
                Ok(cell * stride + row)
            }
            Site::Mediator { cell } if cell + 1 < self.cell_count => {
                Ok(cell * stride + self.transport_count)
            }
            _ => Err(Error::Input(format!("site {site:?} does not exist"))),
        }
    }

    pub fn site(&self, flat: usize) -> Result<Site> {
        if flat >= self.site_count() {
            return Err(Error::Input(format!("flat index {flat} out of range")));
        }
        let stride = self.transport_count + 1;
        let (cell, offset) = (flat / stride, flat % stride);
        Ok(if offset == self.transport_count {
            Site::Mediator { cell }
        } else {
            Site::Transport { row: offset, cell }
        })
    }

    /// Transport site index without bounds checks; `row < N`, `cell < M`.
    pub(crate) fn transport(&self, row: usize, cell: usize) -> usize {
        cell * (self.transport_count + 1) + row
    }

    pub(crate) fn mediator(&self, cell: usize) -> usize {
        cell * (self.transport_count + 1) + self.transport_count
    }

    /// All coupled bonds in canonical order: for each cell, its intra-cell
    /// bonds, then its `v` bond and `w` bond (absent in the last cell).
    pub fn bonds(&self) -> Vec<Bond> {
        let mut bonds = Vec::with_capacity(self.bond_count());
        for cell in 0..self.cell_count {
            for row in 0..self.transport_count - 1 {
                bonds.push(Bond {
                    sites: (self.transport(row, cell), self.transport(row + 1, cell)),
                    kind: BondKind::Intra { row, cell },
                });
            }
            if cell + 1 < self.cell_count {
                bonds.push(Bond {
                    sites: (self.transport(0, cell), self.mediator(cell)),
                    kind: BondKind::Left { cell },
                });
                bonds.push(Bond {
                    sites: (self.mediator(cell), self.transport(0, cell + 1)),
                    kind: BondKind::Right { cell },
                });
            }
        }
        bonds
    }

    pub fn is_mediator(&self, flat: usize) -> bool {
        flat % (self.transport_count + 1) == self.transport_count
    }
}

/// A site of the chain. Rows and cells are zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Site {
    Transport { row: usize, cell: usize },
    Mediator { cell: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BondKind {
    /// `A(row,cell)`–`A(row+1,cell)`, strength `g_row`.
    Intra { row: usize, cell: usize },
    /// `A(1,cell)`–`B(cell)`, strength `v`.
    Left { cell: usize },
    /// `B(cell)`–`A(1,cell+1)`, strength `w`.
    Right { cell: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bond {
    pub sites: (usize, usize),
    pub kind: BondKind,
}

/// One real offset per bond, in [`ChainSpec::bonds`] order.
#[derive(Clone, Debug, PartialEq)]
pub struct BondOffsets(pub Vec<f64>);

/// Real symmetric hopping matrix of the chain in the single-excitation sector.
///
/// Every coupling in the model is real, so the Hermitian matrix is stored as
/// a real symmetric one; [`Hamiltonian::to_complex`] gives the complex view.
#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    matrix: DMatrix<f64>,
}

impl Hamiltonian {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    pub fn to_complex(&self) -> DMatrix<C64> {
        self.matrix.map(|x| C64::new(x, 0.0))
    }

    /// `max |H_ij - conj(H_ji)|`.
    pub fn max_asymmetry(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn apply(&self, state: &DVector<C64>) -> DVector<C64> {
        let re = &self.matrix * state.map(|z| z.re);
        let im = &self.matrix * state.map(|z| z.im);
        DVector::from_fn(state.len(), |i, _| C64::new(re[i], im[i]))
    }
}

/// Builds the chain Hamiltonian at staggered couplings `(v, w)`, optionally
/// shifting every bond by a per-bond offset.
pub fn build_hamiltonian(
    spec: &ChainSpec,
    v: f64,
    w: f64,
    offsets: Option<&BondOffsets>,
) -> Result<Hamiltonian> {
    if !(v >= 0.0 && w >= 0.0 && v.is_finite() && w.is_finite()) {
        return Err(Error::Input(format!("couplings must be non-negative, got v = {v}, w = {w}")));
    }
    if let Some(offsets) = offsets {
        if offsets.0.len() != spec.bond_count() {
            return Err(Error::Spec(format!(
                "disorder draw has {} offsets for {} bonds",
                offsets.0.len(),
                spec.bond_count()
            )));
        }
    }
    Ok(assemble(spec, v, w, offsets.map(|o| o.0.as_slice())))
}

/// Bond strengths in [`ChainSpec::bonds`] order, written into `out`.
pub(crate) fn bond_values(spec: &ChainSpec, bonds: &[Bond], v: f64, w: f64, offsets: Option<&[f64]>, out: &mut Vec<f64>) {
    out.clear();
    out.extend(bonds.iter().enumerate().map(|(k, bond)| {
        let base = match bond.kind {
            BondKind::Intra { row, .. } => spec.intra_couplings[row],
            BondKind::Left { .. } => v,
            BondKind::Right { .. } => w,
        };
        base + offsets.map_or(0.0, |o| o[k])
    }));
}

/// Unchecked assembly; `v`, `w` may be anything returned by the schedule.
pub(crate) fn assemble(spec: &ChainSpec, v: f64, w: f64, offsets: Option<&[f64]>) -> Hamiltonian {
    let n = spec.site_count();
    let mut matrix = DMatrix::zeros(n, n);
    for (k, bond) in spec.bonds().into_iter().enumerate() {
        let base = match bond.kind {
            BondKind::Intra { row, .. } => spec.intra_couplings[row],
            BondKind::Left { .. } => v,
            BondKind::Right { .. } => w,
        };
        let value = base + offsets.map_or(0.0, |o| o[k]);
        let (a, b) = bond.sites;
        matrix[(a, b)] = value;
        matrix[(b, a)] = value;
    }
    Hamiltonian { matrix }
}

/// Cosine sweep `v = J(1 - cos ωt)`, `w = J(1 + cos ωt)` over `t ∈ [0, π/ω]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CouplingSchedule {
    pub amplitude: f64,
    pub frequency: f64,
}

impl CouplingSchedule {
    pub fn sweep_time(&self) -> f64 {
        PI / self.frequency
    }

    pub fn coupling_at(&self, t: f64) -> Result<(f64, f64)> {
        let end = self.sweep_time();
        let slack = 1e-12 * end;
        if !(t >= -slack && t <= end + slack) {
            return Err(Error::Range { what: "t", value: t, min: 0.0, max: end });
        }
        Ok(self.extended(t.clamp(0.0, end)))
    }

    /// The same cosine law without the sweep-window check. Used when a run
    /// overshoots `π/ω` (timing disorder).
    pub fn extended(&self, t: f64) -> (f64, f64) {
        let c = (self.frequency * t).cos();
        (self.amplitude * (1.0 - c), self.amplitude * (1.0 + c))
    }

    /// `(dv/dt, dw/dt)`.
    pub fn rates(&self, t: f64) -> (f64, f64) {
        let s = self.amplitude * self.frequency * (self.frequency * t).sin();
        (s, -s)
    }
}

pub fn coupling_at(schedule: &CouplingSchedule, t: f64) -> Result<(f64, f64)> {
    schedule.coupling_at(t)
}

/// A normalised amplitude vector over the chain sites.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    amplitudes: DVector<C64>,
}

impl QuantumState {
    /// Wraps `amplitudes`, rejecting vectors whose norm differs from one by
    /// more than `tol`.
    pub fn new(amplitudes: DVector<C64>, tol: f64) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > tol {
            return Err(Error::Input(format!("state norm {norm} differs from 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Normalises `amplitudes`; fails on the zero vector.
    pub fn normalized(amplitudes: DVector<C64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Input("cannot normalise a zero vector".into()));
        }
        Ok(Self { amplitudes: amplitudes / C64::new(norm, 0.0) })
    }

    pub(crate) fn from_raw(amplitudes: DVector<C64>) -> Self {
        Self { amplitudes }
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amplitudes = DVector::zeros(dim);
        amplitudes[index] = C64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> DVector<C64> {
        self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &QuantumState) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension { left: self.dim(), right: other.dim() });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm()).collect()
    }

    pub fn scaled(&self, factor: C64) -> QuantumState {
        Self { amplitudes: &self.amplitudes * factor }
    }
}

fn check_amps(spec: &ChainSpec, amps: &[C64]) -> Result<()> {
    if amps.len() != spec.transport_count() {
        return Err(Error::Input(format!(
            "expected {} amplitudes, got {}",
            spec.transport_count(),
            amps.len()
        )));
    }
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > INPUT_NORM_TOL {
        return Err(Error::Input(format!("input amplitudes have norm {norm}, expected 1")));
    }
    Ok(())
}

fn place_on_cell(spec: &ChainSpec, amps: &[C64], cell: usize) -> Result<QuantumState> {
    check_amps(spec, amps)?;
    let mut amplitudes = DVector::zeros(spec.site_count());
    for (row, &a) in amps.iter().enumerate() {
        amplitudes[spec.transport(row, cell)] = a;
    }
    Ok(QuantumState { amplitudes })
}

/// Places `amps[r]` on `A(r, 1)`.
pub fn encode_left_state(spec: &ChainSpec, amps: &[C64]) -> Result<QuantumState> {
    place_on_cell(spec, amps, 0)
}

/// Places `amps[r]` on `A(r, M)`: the perfectly transferred state.
pub fn target_right_state(spec: &ChainSpec, amps: &[C64]) -> Result<QuantumState> {
    place_on_cell(spec, amps, spec.cell_count() - 1)
}

/// Reads the transport amplitudes of one cell back out of a state.
pub fn cell_amplitudes(spec: &ChainSpec, state: &QuantumState, cell: usize) -> Vec<C64> {
    (0..spec.transport_count())
        .map(|row| state.amplitudes[spec.transport(row, cell)])
        .collect()
}

/// Normalises an arbitrary list of amplitudes, e.g. `(1, 1, 1)` to the W state.
pub fn normalize_amplitudes(raw: &[C64]) -> Result<Vec<C64>> {
    let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::Input("amplitudes must not all vanish".into()));
    }
    Ok(raw.iter().map(|z| z / norm).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn fourteen_sites_for_five_cells() {
        let spec = ChainSpec::two_qubit(5, 0.1).unwrap();
        assert_eq!(spec.site_count(), 14);
        let h = build_hamiltonian(&spec, 1.0, 2.0, None).unwrap();
        assert_eq!(h.dim(), 14);
    }

    #[test]
    fn flat_index_round_trip() {
        let spec = ChainSpec::three_qubit(4, 0.1).unwrap();
        for flat in 0..spec.site_count() {
            let site = spec.site(flat).unwrap();
            assert_eq!(spec.flat_index(site).unwrap(), flat);
            assert_eq!(spec.is_mediator(flat), matches!(site, Site::Mediator { .. }));
        }
        assert!(spec.flat_index(Site::Mediator { cell: 3 }).is_err());
        assert_eq!(spec.flat_index(Site::Mediator { cell: 0 }).unwrap(), 3);
        assert_eq!(spec.flat_index(Site::Transport { row: 0, cell: 1 }).unwrap(), 4);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(ChainSpec::new(2, 1, vec![1.0], 5.0, 0.1).is_err());
        assert!(ChainSpec::new(2, 3, vec![], 5.0, 0.1).is_err());
        assert!(ChainSpec::new(2, 3, vec![-1.0], 5.0, 0.1).is_err());
        assert!(ChainSpec::new(2, 3, vec![1.0], 0.0, 0.1).is_err());
        assert!(ChainSpec::new(2, 3, vec![1.0], 5.0, -0.1).is_err());
        assert!(ChainSpec::new(0, 3, vec![], 5.0, 0.1).is_err());
    }

    #[test]
    fn v_zero_isolates_first_cell() {
        let spec = ChainSpec::two_qubit(4, 0.1).unwrap();
        let h = build_hamiltonian(&spec, 0.0, 2.0, None).unwrap();
        let first_cell = [0usize, 1];
        for &a in &first_cell {
            for b in 2..spec.site_count() {
                assert_eq!(h.matrix()[(a, b)], 0.0);
                assert_eq!(h.matrix()[(b, a)], 0.0);
            }
        }
    }

    #[test]
    fn bond_pattern_and_count() {
        let spec = ChainSpec::new(3, 4, vec![0.7, 1.3], 5.0, 0.1).unwrap();
        let h = build_hamiltonian(&spec, 0.4, 1.9, None).unwrap();
        assert_eq!(h.max_asymmetry(), 0.0);
        let nonzero_upper = (0..h.dim())
            .flat_map(|i| (i + 1..h.dim()).map(move |j| (i, j)))
            .filter(|&(i, j)| h.matrix()[(i, j)] != 0.0)
            .count();
        assert_eq!(nonzero_upper, spec.bond_count());
        assert_eq!(spec.bond_count(), 2 * 3 + 2 * 4);
        for bond in spec.bonds() {
            let (a, b) = bond.sites;
            let expected = match bond.kind {
                BondKind::Intra { row, .. } => spec.intra_couplings()[row],
                BondKind::Left { .. } => 0.4,
                BondKind::Right { .. } => 1.9,
            };
            assert_eq!(h.matrix()[(a, b)], expected);
        }
        assert!((0..h.dim()).all(|i| h.matrix()[(i, i)] == 0.0));
    }

    #[test]
    fn offsets_shift_every_bond() {
        let spec = ChainSpec::two_qubit(3, 0.1).unwrap();
        let offsets = BondOffsets((0..spec.bond_count()).map(|k| 0.01 * k as f64).collect());
        let h = build_hamiltonian(&spec, 1.0, 1.0, Some(&offsets)).unwrap();
        // g = v = w = 1, so every bond is 1 + offset.
        for (k, bond) in spec.bonds().iter().enumerate() {
            assert_eq!(h.matrix()[bond.sites], 1.0 + 0.01 * k as f64);
        }
        let short = BondOffsets(vec![0.0; 2]);
        assert!(matches!(build_hamiltonian(&spec, 1.0, 1.0, Some(&short)), Err(Error::Spec(_))));
        assert!(build_hamiltonian(&spec, -1.0, 1.0, None).is_err());
    }

    #[test]
    fn schedule_endpoints() {
        let s = CouplingSchedule { amplitude: 5.0, frequency: 0.1 };
        assert_eq!(s.coupling_at(0.0).unwrap(), (0.0, 10.0));
        let (v, w) = s.coupling_at(PI / 0.2).unwrap();
        assert!((v - 5.0).abs() < 1e-12 && (w - 5.0).abs() < 1e-12);
        let (v, w) = s.coupling_at(PI / 0.1).unwrap();
        assert!((v - 10.0).abs() < 1e-12 && w.abs() < 1e-12);
        assert!(matches!(s.coupling_at(-1.0), Err(Error::Range { .. })));
        assert!(s.coupling_at(PI / 0.1 + 1e-3).is_err());
    }

    #[test]
    fn encoded_states() {
        let spec = ChainSpec::two_qubit(5, 0.1).unwrap();
        let a = encode_left_state(&spec, &[c(1.0), c(0.0)]).unwrap();
        assert_eq!(a.amplitudes()[0], c(1.0));
        assert_eq!(a.norm(), 1.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = encode_left_state(&spec, &[c(s), c(s)]).unwrap();
        assert_eq!(bell.amplitudes()[1], c(s));
        let t = target_right_state(&spec, &[c(0.0), c(1.0)]).unwrap();
        assert_eq!(t.amplitudes()[13], c(1.0));
        assert_eq!(bell.inner(&target_right_state(&spec, &[c(s), c(s)]).unwrap()).unwrap(), c(0.0));
        assert!(encode_left_state(&spec, &[c(1.0)]).is_err());
        assert!(encode_left_state(&spec, &[c(1.0), c(1.0)]).is_err());

        let spec3 = ChainSpec::three_qubit(3, 0.1).unwrap();
        let w = normalize_amplitudes(&[c(1.0), c(1.0), c(1.0)]).unwrap();
        let state = encode_left_state(&spec3, &w).unwrap();
        assert_eq!(cell_amplitudes(&spec3, &state, 0), w);
    }
}
