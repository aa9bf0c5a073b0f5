use std::f64::consts::TAU;

use nalgebra::DVector;
use proptest::prelude::*;
use rand_distr::Distribution;

use sshqst::disorder::repetition_rng;
use sshqst::dynamics::{evolve, fidelity, EvolutionConfig, Integrator};
use sshqst::edge::{cell_profile, edge_wavefunction, transport_block_eigensystem};
use sshqst::hardware::{flux_to_coupling, solve_junction_phase, CouplerParams};
use sshqst::model::{build_hamiltonian, QuantumState};
use sshqst::spectroscopy::{chain_at_phase, steady_state_response, ProbeSetup};
use sshqst::topology::{winding_number, BlochModel, Convention};
use sshqst::{ChainSpec, C64};

fn sorted(mut x: Vec<f64>) -> Vec<f64> {
    x.sort_by(f64::total_cmp);
    x
}

fn chain() -> impl Strategy<Value = ChainSpec> {
    (1usize..=4, 2usize..=5, prop::collection::vec(0.3f64..2.0, 3), 0.5f64..6.0)
        .prop_map(|(n, m, g, j)| ChainSpec::new(n, m, g[..n - 1].to_vec(), j, 0.1).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hamiltonian_is_symmetric_with_paired_spectrum(spec in chain(), v in 0.0f64..10.0, w in 0.0f64..10.0) {
        let h = build_hamiltonian(&spec, v, w, None).unwrap();
        prop_assert_eq!(h.max_asymmetry(), 0.0);
        prop_assert_eq!(h.dim(), (spec.transport_count() + 1) * spec.cell_count() - 1);
        let e = sorted(h.matrix().clone().symmetric_eigen().eigenvalues.iter().copied().collect());
        let n = e.len();
        for i in 0..n {
            prop_assert!((e[i] + e[n - 1 - i]).abs() < 1e-10);
        }
    }

    #[test]
    fn flat_indices_round_trip(spec in chain()) {
        for i in 0..spec.site_count() {
            prop_assert_eq!(spec.flat_index(spec.site(i).unwrap()).unwrap(), i);
        }
    }

    #[test]
    fn schedule_conserves_the_sum(j in 0.1f64..10.0, omega in 0.01f64..2.0, x in 0.0f64..1.0) {
        let spec = ChainSpec::new(2, 3, vec![1.0], j, omega).unwrap();
        let (v, w) = spec.schedule().coupling_at(x * spec.sweep_time()).unwrap();
        prop_assert!((v + w - 2.0 * j).abs() < 1e-12 * j);
        prop_assert!(v >= 0.0 && w >= 0.0);
    }

    #[test]
    fn edge_ansatz_is_an_exact_eigenstate(spec in chain(), v in 0.01f64..10.0, w in 0.01f64..10.0, pick in 0usize..4) {
        let branch = pick % spec.transport_count();
        let edge = edge_wavefunction(&spec, v, w, branch).unwrap();
        let h = build_hamiltonian(&spec, v, w, None).unwrap();
        let psi = edge.state.amplitudes();
        let residual = (h.apply(psi) - psi * C64::new(edge.energy, 0.0)).norm();
        prop_assert!(residual < 1e-10, "residual {}", residual);
        for i in (0..spec.site_count()).filter(|&i| spec.is_mediator(i)) {
            prop_assert!(psi[i].norm() <= 1e-12);
        }
        let block = transport_block_eigensystem(spec.intra_couplings()).unwrap();
        prop_assert_eq!(edge.energy, block.energies()[branch]);
    }

    #[test]
    fn cell_profile_is_normalised(m in 1usize..40, v in 0.0f64..10.0, w in 0.0f64..10.0) {
        prop_assume!(v > 0.0 || w > 0.0);
        let p = cell_profile(m, v, w).unwrap();
        let norm: f64 = p.iter().map(|x| x * x).sum();
        prop_assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn spectrum_pairs_under_the_sublattice_sign(phase in 0.0f64..std::f64::consts::PI) {
        let spec = ChainSpec::three_qubit(3, 1.0).unwrap();
        let omega = chain_at_phase(&spec, phase).unwrap();
        let e = sorted(omega.symmetric_eigen().eigenvalues.iter().copied().collect());
        let n = e.len();
        prop_assert!((0..n).all(|i| (e[i] + e[n - 1 - i]).abs() < 1e-10));
    }

    #[test]
    fn winding_is_dual_between_cell_choices(v in 0.0f64..10.0, w in 0.0f64..10.0) {
        prop_assume!((v - w).abs() > 1e-3);
        let left = winding_number(&BlochModel::new(Convention::LeftCell, v, w)).unwrap();
        let right = winding_number(&BlochModel::new(Convention::RightCell, w, v)).unwrap();
        prop_assert_eq!(left.value, right.value);
        prop_assert_eq!(left.value, i64::from(w > v));
        let coarse = winding_number(&BlochModel::new(Convention::LeftCell, v, w).with_k_points(201)).unwrap();
        prop_assert_eq!(coarse.value, left.value);
    }

    #[test]
    fn junction_phase_is_odd_and_coupling_even(phi in -TAU..TAU) {
        let p = CouplerParams::default();
        let a = solve_junction_phase(&p, phi).unwrap();
        let b = solve_junction_phase(&p, -phi).unwrap();
        prop_assert!((a + b).abs() < 1e-12);
        prop_assert!((a + p.beta() * a.sin() - phi).abs() < 1e-12);
        let ga = flux_to_coupling(&p, phi).unwrap();
        let gb = flux_to_coupling(&p, -phi).unwrap();
        prop_assert!((ga - gb).abs() < 1e-9 * ga.abs().max(1.0));
    }

    #[test]
    fn reflection_is_passive_and_linear_in_the_drive(
        detuning in -4.0f64..4.0,
        phase in 0.0f64..std::f64::consts::PI,
        kappa in 0.1f64..10.0,
        drive in 0.01f64..100.0,
    ) {
        let spec = ChainSpec::two_qubit(3, 1.0).unwrap();
        let omega = chain_at_phase(&spec, phase).unwrap();
        let setup = ProbeSetup { kappa, ..ProbeSetup::for_chain(&spec) };
        let r = steady_state_response(&setup, &omega, detuning).unwrap();
        prop_assert!(r.reflection.norm() <= 1.0 + 1e-9);
        let scaled = ProbeSetup { drive, ..setup };
        let s = steady_state_response(&scaled, &omega, detuning).unwrap();
        prop_assert!((s.reflection - r.reflection).norm() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn evolution_is_unitary_and_linear(
        spec in chain(),
        a_re in -1.0f64..1.0,
        a_im in -1.0f64..1.0,
        theta in 0.0f64..std::f64::consts::TAU,
        taylor in any::<bool>(),
    ) {
        let dim = spec.site_count();
        let norm = a_re.hypot(a_im).max(1e-3);
        let alpha = C64::new(a_re, a_im) / norm * 0.6;
        let beta = C64::from_polar(0.8, theta);
        let integrator = if taylor { Integrator::TaylorExponential } else { Integrator::ExactStepExponential };
        let mut config = EvolutionConfig::new(3.0, 1000).integrator(integrator);
        config.record_stride = Some(1000);
        let first = QuantumState::basis(dim, 0);
        let last = QuantumState::basis(dim, dim - 1);
        let mixed = QuantumState::new(first.amplitudes() * alpha + last.amplitudes() * beta, 1e-12).unwrap();
        let run = |s: &QuantumState| evolve(&spec, s, &config, None).unwrap().final_state().clone();
        let (x, y, z) = (run(&first), run(&last), run(&mixed));
        prop_assert!((z.norm() - 1.0).abs() < 1e-9);
        let combined: DVector<C64> = x.amplitudes() * alpha + y.amplitudes() * beta;
        prop_assert!((combined - z.amplitudes()).norm() < 1e-9);
        let f = fidelity(&x, &z).unwrap();
        prop_assert!((0.0..=1.0).contains(&f));
    }
}

#[test]
fn gaussian_draws_have_the_requested_moments() {
    let normal = rand_distr::Normal::new(0.0, 0.3).unwrap();
    let mut rng = repetition_rng(11, 0);
    let draws: Vec<f64> = (0..20_000).map(|_| normal.sample(&mut rng)).collect();
    let n = draws.len() as f64;
    let mean = draws.iter().sum::<f64>() / n;
    let std = (draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    // 5 standard errors
    assert!(mean.abs() < 5.0 * 0.3 / n.sqrt());
    assert!((std - 0.3).abs() < 5.0 * 0.3 / (2.0 * n).sqrt());
}
