use sshqst::dynamics::{
    analytic_adiabatic_state, evolve, fidelity, transfer_experiment, EvolutionConfig, Integrator, TransferOptions,
};
use sshqst::edge::{common_period, transport_block_eigensystem};
use sshqst::model::{encode_left_state, target_right_state, Site};
use sshqst::{ChainSpec, C64};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn bell() -> [C64; 2] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [c(s, 0.0), c(s, 0.0)]
}

#[test]
fn halving_the_step_moves_the_final_state_by_less_than_1e6() {
    let spec = ChainSpec::two_qubit(2, 0.1).unwrap();
    let psi = encode_left_state(&spec, &[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    let total = std::f64::consts::PI / 0.1;
    let run = |steps| {
        let traj = evolve(&spec, &psi, &EvolutionConfig::new(total, steps), None).unwrap();
        traj.final_state().amplitudes().clone()
    };
    let coarse = run(4000);
    let fine = run(8000);
    assert!((coarse - fine).norm() < 1e-6);
}

#[test]
fn frozen_chain_keeps_an_eigenstate_stationary() {
    // ω so small that H barely moves: the left edge eigenstate of the block
    // at v = 0 only picks up its dynamical phase.
    let spec = ChainSpec::two_qubit(3, 1e-9).unwrap();
    let psi = encode_left_state(&spec, &bell()).unwrap();
    let traj = evolve(&spec, &psi, &EvolutionConfig::new(2.0, 2000), None).unwrap();
    let overlap = psi.inner(traj.final_state()).unwrap();
    // Bell is the +g branch; E = +1 so the phase is e^{-2i}.
    assert!((overlap - C64::from_polar(1.0, -2.0)).norm() < 1e-8, "{overlap}");
}

#[test]
fn bell_indicator_rises_while_single_site_indicator_oscillates() {
    let spec = ChainSpec::two_qubit(3, 0.1).unwrap();
    let options = TransferOptions { compare_analytic: false, ..Default::default() };
    let smooth = transfer_experiment(&spec, &bell(), 10.0, &options).unwrap();
    let wiggly = transfer_experiment(&spec, &[c(1.0, 0.0), c(0.0, 0.0)], 10.0, &options).unwrap();

    let turning_points = |x: &[f64]| {
        x.windows(3).filter(|w| (w[1] - w[0]) * (w[2] - w[1]) < 0.0 && w[1] < 0.5).count()
    };
    assert_eq!(turning_points(&smooth.indicator), 0);
    // |A11> is an equal mix of both branches: the overlap with |A1M> goes as
    // |cos(g t)| times the edge weight, so it returns to zero repeatedly.
    assert!(turning_points(&wiggly.indicator) >= 5);
    assert!(wiggly.fidelity > 0.998);
}

#[test]
fn timing_errors_follow_the_branch_phase_mismatch() {
    let spec = ChainSpec::two_qubit(3, 0.1).unwrap();
    let amps = [c(1.0, 0.0), c(0.0, 0.0)];
    let clean = transfer_experiment(&spec, &amps, 10.0, &TransferOptions::default()).unwrap();
    let block = transport_block_eigensystem(spec.intra_couplings()).unwrap();
    let weights = block.decompose(&amps);
    // Right-cell branch amplitudes of the clean final state; past t_f they
    // only rotate with e^{-i E_i δt}.
    let branch: Vec<C64> = (0..2)
        .map(|i| {
            let mode: Vec<C64> = block.mode(i).iter().map(|&x| c(x, 0.0)).collect();
            let edge = target_right_state(&clean.spec, &mode).unwrap();
            edge.inner(clean.final_state()).unwrap()
        })
        .collect();
    for dt in [0.05, 0.3, 0.9] {
        let options = TransferOptions { time_offset: dt, ..Default::default() };
        let r = transfer_experiment(&spec, &amps, 10.0, &options).unwrap();
        let predicted: C64 = (0..2)
            .map(|i| weights[i].conj() * branch[i] * C64::from_polar(1.0, -block.energies()[i] * dt))
            .sum();
        assert!((r.fidelity - predicted.norm()).abs() < 1e-4, "δt = {dt}: {} vs {}", r.fidelity, predicted.norm());
    }
}

#[test]
fn analytic_state_of_the_plain_chain_is_the_geometric_edge() {
    let spec = ChainSpec::new(1, 5, vec![], 5.0, 0.2).unwrap();
    let t = 4.0;
    let state = analytic_adiabatic_state(&spec, t, &[c(1.0, 0.0)]).unwrap();
    let omega_t = 0.2 * t;
    let (v, w) = (5.0 * (1.0 - f64::cos(omega_t)), 5.0 * (1.0 + f64::cos(omega_t)));
    let lambda = -v / w;
    let norm = (0..5).map(|m| lambda.powi(2 * m)).sum::<f64>().sqrt();
    for m in 0..5 {
        let a = spec.flat_index(Site::Transport { row: 0, cell: m }).unwrap();
        let expected = lambda.powi(m as i32) / norm;
        assert!((state.amplitudes()[a] - c(expected, 0.0)).norm() < 1e-13);
        if m < 4 {
            let b = spec.flat_index(Site::Mediator { cell: m }).unwrap();
            assert_eq!(state.amplitudes()[b], c(0.0, 0.0));
        }
    }
}

#[test]
fn analytic_overlap_with_target_is_the_last_cell_weight() {
    let spec = ChainSpec::three_qubit(4, 0.05).unwrap();
    let amps = [c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.0)];
    let target = target_right_state(&spec, &amps).unwrap();
    let end = spec.sweep_time();
    for frac in [0.3, 0.5, 0.8] {
        let t = frac * end;
        let state = analytic_adiabatic_state(&spec, t, &amps).unwrap();
        let (v, w) = spec.schedule().coupling_at(t).unwrap();
        let q = (v / w).powi(2);
        let last_weight = q.powi(3) / (0..4).map(|m| q.powi(m)).sum::<f64>();
        // Both branches of (0.6, 0.8i, 0) pick up different phases, so only
        // the magnitude of the overlap is predicted up to the branch mix.
        let block = transport_block_eigensystem(spec.intra_couplings()).unwrap();
        let weights = block.decompose(&amps);
        let mixed: C64 = weights
            .iter()
            .zip(block.energies())
            .map(|(wi, e)| wi.norm_sqr() * C64::from_polar(1.0, -e * t))
            .sum();
        let expected = last_weight.sqrt() * mixed.norm();
        let got = fidelity(&target, &state).unwrap();
        assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
    }
}

#[test]
fn swapping_amplitudes_keeps_fidelity_at_integral_circles() {
    let spec = ChainSpec::two_qubit(4, 0.1).unwrap();
    let options = TransferOptions { compare_analytic: false, ..Default::default() };
    let a = [c(0.6, 0.0), c(0.0, 0.8)];
    let b = [a[1], a[0]];
    let fa = transfer_experiment(&spec, &a, 10.0, &options).unwrap().fidelity;
    let fb = transfer_experiment(&spec, &b, 10.0, &options).unwrap().fidelity;
    assert!((fa - fb).abs() < 1e-3, "{fa} vs {fb}");
}

#[test]
fn integrators_agree_on_a_short_transfer() {
    let spec = ChainSpec::two_qubit(3, 0.1).unwrap();
    let run = |integrator| {
        let options = TransferOptions { integrator, compare_analytic: false, ..Default::default() };
        transfer_experiment(&spec, &bell(), 5.0, &options).unwrap()
    };
    let exact = run(Integrator::ExactStepExponential);
    let taylor = run(Integrator::TaylorExponential);
    let rk4 = run(Integrator::RungeKutta4);
    let diff = |a: &sshqst::dynamics::TransferResult, b: &sshqst::dynamics::TransferResult| {
        (a.final_state().amplitudes() - b.final_state().amplitudes()).norm()
    };
    assert!(diff(&exact, &taylor) < 1e-10);
    assert!(diff(&exact, &rk4) < 1e-6);
}

#[test]
fn period_of_the_default_blocks() {
    let two = transport_block_eigensystem(&[1.0]).unwrap();
    let three = transport_block_eigensystem(&[1.0, 1.0]).unwrap();
    assert!((common_period(&two).unwrap() - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    assert!((common_period(&three).unwrap() - 2.0 * std::f64::consts::PI / 2f64.sqrt()).abs() < 1e-12);
}
