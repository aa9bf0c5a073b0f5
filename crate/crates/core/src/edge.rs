//! Closed-form edge states.
//!
//! The in-gap eigenstates of the chain live on the transport qubits only.
//! Within a cell their amplitudes are an eigenvector `χ` of the `N×N`
//! transport block (zero diagonal, off-diagonals `g_1..g_{N-1}`); from cell
//! to cell they scale by `λ = -v/w`. The energy is the block eigenvalue and
//! does not depend on `(v, w)`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{fix_sign, Eigensystem};
use crate::model::{build_hamiltonian, ChainSpec, QuantumState, C64};

/// Largest denominator accepted when matching eigenvalue ratios.
pub const MAX_PERIOD_DENOMINATOR: u64 = 64;
/// Residual below which an eigenvalue ratio counts as rational.
pub const RATIO_TOL: f64 = 1e-9;

/// Eigensystem of the transport block, energies descending.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransportBlock {
    couplings: Vec<f64>,
    energies: Vec<f64>,
    modes: Vec<Vec<f64>>,
}

impl TransportBlock {
    pub fn size(&self) -> usize {
        self.energies.len()
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    /// Descending.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Real, orthonormal; first nonzero component positive.
    pub fn mode(&self, branch: usize) -> &[f64] {
        &self.modes[branch]
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        block_matrix(&self.couplings)
    }

    /// Projections `<χ_i|amps>` onto every branch.
    pub fn decompose(&self, amps: &[C64]) -> Vec<C64> {
        self.modes
            .iter()
            .map(|mode| mode.iter().zip(amps).map(|(&x, &a)| a * x).sum())
            .collect()
    }
}

fn block_matrix(couplings: &[f64]) -> DMatrix<f64> {
    let n = couplings.len() + 1;
    let mut m = DMatrix::zeros(n, n);
    for (r, &g) in couplings.iter().enumerate() {
        m[(r, r + 1)] = g;
        m[(r + 1, r)] = g;
    }
    m
}

pub fn transport_block_eigensystem(couplings: &[f64]) -> Result<TransportBlock> {
    if let Some(g) = couplings.iter().find(|g| !(g.is_finite() && **g > 0.0)) {
        return Err(Error::Input(format!("transport couplings must be positive, got {g}")));
    }
    let eig = Eigensystem::of(&block_matrix(couplings));
    let n = eig.len();
    let scale = couplings.iter().fold(1.0f64, |a, &g| a.max(g));
    if eig.values.windows(2).any(|p| (p[1] - p[0]).abs() < 1e-9 * scale) {
        return Err(Error::Degenerate("transport block has repeated eigenvalues".into()));
    }
    let mut energies = Vec::with_capacity(n);
    let mut modes = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let mut v = eig.vector(i);
        fix_sign(&mut v);
        energies.push(eig.values[i]);
        modes.push(v.iter().copied().collect());
    }
    Ok(TransportBlock { couplings: couplings.to_vec(), energies, modes })
}

/// Normalised per-cell weights `∝ λ^m` (zero-based `m`) for `λ = -v/w`.
///
/// `v = 0` gives the exact left limit and `w = 0` the exact right limit. In
/// between the first cell carries a positive weight, so along a sweep the
/// weights end at `(-1)^(M-1)` times the right limit; only the point `w = 0`
/// itself is sign-fixed to `+1`.
pub fn cell_profile(cells: usize, v: f64, w: f64) -> Result<Vec<f64>> {
    if !(v >= 0.0 && w >= 0.0) {
        return Err(Error::Input(format!("couplings must be non-negative, got v = {v}, w = {w}")));
    }
    let mut weights = vec![0.0; cells];
    if v == 0.0 && w == 0.0 {
        return Err(Error::Degenerate("v = w = 0 leaves the edge state undefined".into()));
    }
    if v == 0.0 {
        weights[0] = 1.0;
        return Ok(weights);
    }
    if w == 0.0 {
        weights[cells - 1] = 1.0;
        return Ok(weights);
    }
    // |λ|^m evaluated in log space and shifted by the largest exponent.
    let log_ratio = (v / w).ln();
    let top = (0..cells).map(|m| m as f64 * log_ratio).fold(f64::NEG_INFINITY, f64::max);
    for (m, x) in weights.iter_mut().enumerate() {
        let magnitude = (m as f64 * log_ratio - top).exp();
        *x = if m % 2 == 0 { magnitude } else { -magnitude };
    }
    let norm = weights.iter().map(|x| x * x).sum::<f64>().sqrt();
    weights.iter_mut().for_each(|x| *x /= norm);
    Ok(weights)
}

/// `λ = -v/w`, `-∞` at `w = 0`.
pub fn localization(v: f64, w: f64) -> f64 {
    if w == 0.0 {
        f64::NEG_INFINITY
    } else {
        -v / w
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeState {
    pub branch: usize,
    pub energy: f64,
    pub lambda: f64,
    pub state: QuantumState,
}

/// Edge eigenstate of `branch` (index into the descending block energies).
pub fn edge_wavefunction(spec: &ChainSpec, v: f64, w: f64, branch: usize) -> Result<EdgeState> {
    let block = transport_block_eigensystem(spec.intra_couplings())?;
    edge_wavefunction_with(spec, &block, v, w, branch)
}

pub(crate) fn edge_wavefunction_with(
    spec: &ChainSpec,
    block: &TransportBlock,
    v: f64,
    w: f64,
    branch: usize,
) -> Result<EdgeState> {
    if branch >= block.size() {
        return Err(Error::Input(format!("branch {branch} out of range for N = {}", block.size())));
    }
    let profile = cell_profile(spec.cell_count(), v, w)?;
    let mode = block.mode(branch);
    let mut amplitudes = DVector::zeros(spec.site_count());
    for (cell, &f) in profile.iter().enumerate() {
        for (row, &x) in mode.iter().enumerate() {
            amplitudes[spec.transport(row, cell)] = C64::new(f * x, 0.0);
        }
    }
    Ok(EdgeState {
        branch,
        energy: block.energies()[branch],
        lambda: localization(v, w),
        state: QuantumState::from_raw(amplitudes),
    })
}

/// Least `T > 0` with `E_i T ∈ 2πℤ` for every nonzero block energy.
///
/// Ratios `|E_i|/E_min` must match some `p/q` with `q <= 64` to within
/// `1e-9`; otherwise [`Error::NoCommonPeriod`] is returned.
pub fn common_period(block: &TransportBlock) -> Result<f64> {
    let scale = block.energies().iter().fold(0.0f64, |a, e| a.max(e.abs()));
    let magnitudes: Vec<f64> = block
        .energies()
        .iter()
        .map(|e| e.abs())
        .filter(|&e| e > 1e-9 * scale.max(f64::MIN_POSITIVE))
        .collect();
    let Some(smallest) = magnitudes.iter().copied().reduce(f64::min) else {
        return Err(Error::Unsupported(
            "no nonzero edge energies, so every duration is a common period".into(),
        ));
    };
    let mut fractions = Vec::with_capacity(magnitudes.len());
    for &e in &magnitudes {
        let ratio = e / smallest;
        let q = (1..=MAX_PERIOD_DENOMINATOR)
            .find(|&q| (ratio - (ratio * q as f64).round() / q as f64).abs() < RATIO_TOL)
            .ok_or(Error::NoCommonPeriod { ratio })?;
        fractions.push(((ratio * q as f64).round() as u64, q));
    }
    let lcm = fractions.iter().fold(1u64, |acc, &(_, q)| acc / gcd(acc, q) * q);
    let numerators = fractions.iter().map(|&(p, q)| p * (lcm / q));
    let common = numerators.fold(0u64, gcd);
    Ok(2.0 * PI * lcm as f64 / (smallest * common as f64))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Debug)]
pub struct RenormalizedReport {
    /// Hamiltonian in the `{χ+, χ-, B}` basis, same flat layout as the chain.
    pub conjugated: DMatrix<f64>,
    /// Largest entrywise deviation from the two-branch form.
    pub max_deviation: f64,
    /// Largest deviation between sorted spectra before and after conjugation.
    pub spectrum_deviation: f64,
}

/// Rotates each two-qubit cell to `χ± = (A1 ± A2)/√2` and checks the
/// two-branch structure: on-site `±g`, `v/√2` and `w/√2` links to the
/// mediators, no direct `χ+`–`χ-` links.
pub fn renormalized_basis_check(spec: &ChainSpec, v: f64, w: f64) -> Result<RenormalizedReport> {
    if spec.transport_count() != 2 {
        return Err(Error::Unsupported(format!(
            "renormalised basis check needs N = 2, got N = {}",
            spec.transport_count()
        )));
    }
    let g = spec.intra_couplings()[0];
    let n = spec.site_count();
    let h = build_hamiltonian(spec, v, w, None)?.into_matrix();

    let mut basis = DMatrix::<f64>::identity(n, n);
    for cell in 0..spec.cell_count() {
        let (a1, a2) = (spec.transport(0, cell), spec.transport(1, cell));
        basis[(a1, a1)] = FRAC_1_SQRT_2;
        basis[(a2, a1)] = FRAC_1_SQRT_2;
        basis[(a1, a2)] = FRAC_1_SQRT_2;
        basis[(a2, a2)] = -FRAC_1_SQRT_2;
    }
    let conjugated = basis.transpose() * &h * &basis;

    let mut expected = DMatrix::<f64>::zeros(n, n);
    for cell in 0..spec.cell_count() {
        let (plus, minus) = (spec.transport(0, cell), spec.transport(1, cell));
        expected[(plus, plus)] = g;
        expected[(minus, minus)] = -g;
        if cell + 1 < spec.cell_count() {
            let b = spec.mediator(cell);
            let (next_plus, next_minus) = (spec.transport(0, cell + 1), spec.transport(1, cell + 1));
            for (site, value) in [
                (plus, v * FRAC_1_SQRT_2),
                (minus, v * FRAC_1_SQRT_2),
                (next_plus, w * FRAC_1_SQRT_2),
                (next_minus, w * FRAC_1_SQRT_2),
            ] {
                expected[(site, b)] = value;
                expected[(b, site)] = value;
            }
        }
    }
    let max_deviation = (&conjugated - &expected).amax();

    let before = Eigensystem::of(&h).values;
    let after = Eigensystem::of(&conjugated).values;
    let spectrum_deviation = before
        .iter()
        .zip(&after)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    Ok(RenormalizedReport { conjugated, max_deviation, spectrum_deviation })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn dimer_block() {
        let block = transport_block_eigensystem(&[1.0]).unwrap();
        assert!(close(block.energies()[0], 1.0, 1e-14));
        assert!(close(block.energies()[1], -1.0, 1e-14));
        let s = FRAC_1_SQRT_2;
        assert!(close(block.mode(0)[0], s, 1e-14) && close(block.mode(0)[1], s, 1e-14));
        assert!(close(block.mode(1)[0], s, 1e-14) && close(block.mode(1)[1], -s, 1e-14));
    }

    #[test]
    fn trimer_block_vectors() {
        let block = transport_block_eigensystem(&[1.0, 1.0]).unwrap();
        let s2 = 2f64.sqrt();
        let expected = [
            (s2, [0.5, s2 / 2.0, 0.5]),
            (0.0, [FRAC_1_SQRT_2, 0.0, -FRAC_1_SQRT_2]),
            (-s2, [0.5, -s2 / 2.0, 0.5]),
        ];
        for (i, (e, v)) in expected.iter().enumerate() {
            assert!(close(block.energies()[i], *e, 1e-12));
            for (r, x) in v.iter().enumerate() {
                assert!(close(block.mode(i)[r], *x, 1e-12), "branch {i} row {r}");
            }
        }
    }

    #[test]
    fn rejects_non_positive_couplings() {
        assert!(transport_block_eigensystem(&[1.0, 0.0]).is_err());
        assert!(transport_block_eigensystem(&[-1.0]).is_err());
    }

    #[test]
    fn single_transport_qubit_has_no_period() {
        let block = transport_block_eigensystem(&[]).unwrap();
        assert_eq!(block.energies(), &[0.0]);
        assert!(matches!(common_period(&block), Err(Error::Unsupported(_))));
    }

    #[test]
    fn periods() {
        let t = |g: &[f64]| common_period(&transport_block_eigensystem(g).unwrap()).unwrap();
        assert!(close(t(&[1.0]), 2.0 * PI, 1e-12));
        assert!(close(t(&[1.0, 1.0]), 2.0 * PI / 2f64.sqrt(), 1e-12));
        assert!(close(t(&[2f64.sqrt(), 1.0, 2f64.sqrt()]), 2.0 * PI, 1e-12));
        assert!(close(t(&[1.0, 2.0, 2.0, 1.0]), 2.0 * PI, 1e-12));
        // Scaling every coupling by 3 shortens the period by 3.
        assert!(close(t(&[3.0]), 2.0 * PI / 3.0, 1e-12));
    }

    #[test]
    fn three_site_blocks_always_have_a_period() {
        // E = ±sqrt(g1² + g2²), 0: a single nonzero magnitude.
        let block = transport_block_eigensystem(&[1.0, PI / 2.0]).unwrap();
        let t = common_period(&block).unwrap();
        let e = (1.0 + PI * PI / 4.0f64).sqrt();
        assert!(close(t, 2.0 * PI / e, 1e-12));
    }

    #[test]
    fn uniform_four_site_block_has_no_period() {
        // Energies ±φ, ±1/φ: ratio φ² is irrational.
        let block = transport_block_eigensystem(&[1.0, 1.0, 1.0]).unwrap();
        match common_period(&block) {
            Err(Error::NoCommonPeriod { ratio }) => {
                let phi = (1.0 + 5f64.sqrt()) / 2.0;
                assert!(close(ratio, phi * phi, 1e-9));
            }
            other => panic!("expected NoCommonPeriod, got {other:?}"),
        }
    }

    #[test]
    fn exact_end_limits() {
        let spec = ChainSpec::two_qubit(5, 0.1).unwrap();
        let s = FRAC_1_SQRT_2;
        let left = edge_wavefunction(&spec, 0.0, 2.0, 0).unwrap();
        let a = left.state.amplitudes();
        assert!((a[0] - s).norm() < 1e-15);
        assert!((a[1] - s).norm() < 1e-15);
        assert!(a.iter().skip(2).all(|z| *z == C64::new(0.0, 0.0)));
        assert_eq!(left.lambda, 0.0);

        let right = edge_wavefunction(&spec, 2.0, 0.0, 1).unwrap();
        let a = right.state.amplitudes();
        assert!((a[12] - s).norm() < 1e-15);
        assert!((a[13] + s).norm() < 1e-15);
        assert!(a.iter().take(12).all(|z| *z == C64::new(0.0, 0.0)));
        assert_eq!(right.lambda, f64::NEG_INFINITY);
        assert_eq!(right.energy, -1.0);

        assert!(matches!(edge_wavefunction(&spec, 0.0, 0.0, 0), Err(Error::Degenerate(_))));
        assert!(edge_wavefunction(&spec, 1.0, 1.0, 2).is_err());
    }

    #[test]
    fn profile_survives_extreme_ratios() {
        for &(v, w) in &[(1e-300, 1.0), (1.0, 1e-300), (1e10, 1e-10), (1.0, 1.0)] {
            let p = cell_profile(40, v, w).unwrap();
            let norm: f64 = p.iter().map(|x| x * x).sum();
            assert!(close(norm, 1.0, 1e-12), "({v}, {w}) -> {norm}");
            assert!(p.iter().all(|x| x.is_finite()));
        }
    }

    #[test]
    fn renormalized_basis_form() {
        let spec = ChainSpec::two_qubit(4, 0.1).unwrap();
        for &(v, w) in &[(0.0, 10.0), (0.3, 1.7), (5.0, 5.0), (10.0, 0.0)] {
            let report = renormalized_basis_check(&spec, v, w).unwrap();
            assert!(report.max_deviation <= 1e-12, "deviation {}", report.max_deviation);
            assert!(report.spectrum_deviation <= 1e-10);
        }
        let three = ChainSpec::three_qubit(3, 0.1).unwrap();
        assert!(matches!(renormalized_basis_check(&three, 1.0, 1.0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn renormalized_v_zero_isolates_upper_site() {
        let spec = ChainSpec::two_qubit(4, 0.1).unwrap();
        let report = renormalized_basis_check(&spec, 0.0, 3.0).unwrap();
        let m = &report.conjugated;
        // χ_{1,+} sits at flat index 0 and χ_{1,-} at 1.
        for site in [0usize, 1] {
            for j in 0..spec.site_count() {
                if j != site {
                    assert!(m[(site, j)].abs() < 1e-15);
                }
            }
        }
        assert!(close(m[(0, 0)], 1.0, 1e-15));
        assert!(close(m[(1, 1)], -1.0, 1e-15));
    }
}
