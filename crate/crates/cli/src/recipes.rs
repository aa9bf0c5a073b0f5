//! Built-in configs reproducing the published figures.

use serde::Serialize;
use sshqst::dynamics::Integrator;

use crate::config::{
    AdiabaticityConfig, Amplitude, ChainConfig, CirclesConfig, ConventionChoice, EnsembleConfig, Experiment,
    ExperimentConfig, HardwareConfig, MetricModeConfig, SpectroscopyConfig, SpectrumConfig, TransferConfig,
    WindingConfig,
};

#[derive(Clone, Debug, Serialize)]
pub struct Recipe {
    pub name: &'static str,
    pub description: &'static str,
    /// Headline number the figure shows.
    pub expected: &'static str,
    pub tolerance: &'static str,
}

fn base(name: &str, experiment: Experiment) -> ExperimentConfig {
    ExperimentConfig { name: name.into(), seed: 20240601, out: None, energy_unit_mhz: 10.0, experiment }
}

fn bell() -> Vec<Amplitude> {
    vec![Amplitude::Real(1.0), Amplitude::Real(1.0)]
}

/// `(|A11> + i|A21>)/√2`: equal weight on both branches, so timing errors
/// dephase it (the plain Bell state is a single branch).
fn phased_bell() -> Vec<Amplitude> {
    vec![Amplitude::Real(1.0), Amplitude::Complex([0.0, 1.0])]
}

fn w_state() -> Vec<Amplitude> {
    vec![Amplitude::Real(1.0); 3]
}

fn first_qubit(n: usize) -> Vec<Amplitude> {
    (0..n).map(|i| Amplitude::Real(if i == 0 { 1.0 } else { 0.0 })).collect()
}

fn sweep(name: &str, chain: ChainConfig, cells: usize) -> ExperimentConfig {
    base(
        name,
        Experiment::Spectrum(SpectrumConfig { chain, cell_count: cells, samples: 201, phases_over_pi: None, adiabaticity: None, drive_frequency: 0.1 }),
    )
}

fn snapshot(name: &str, chain: ChainConfig, cells: usize) -> ExperimentConfig {
    base(
        name,
        Experiment::Spectrum(SpectrumConfig {
            chain,
            cell_count: cells,
            samples: 201,
            phases_over_pi: Some(vec![1.0 / 6.0]),
            adiabaticity: None,
            drive_frequency: 0.1,
        }),
    )
}

fn transfer(name: &str, chain: ChainConfig, cells: usize, input: Vec<Amplitude>, circles: f64) -> ExperimentConfig {
    base(
        name,
        Experiment::Transfer(TransferConfig {
            chain,
            cell_count: cells,
            input,
            circles,
            integrator: Integrator::ExactStepExponential,
            steps_per_period: 1000.0,
            time_offset: 0.0,
            compare_analytic: true,
            populations: true,
        }),
    )
}

fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    (0..points).map(|i| 10f64.powf(a + (b - a) * i as f64 / (points - 1) as f64)).collect()
}

fn ensemble(chain: ChainConfig, input: Vec<Amplitude>, sigmas: Vec<f64>, cells: Vec<usize>) -> EnsembleConfig {
    EnsembleConfig {
        chain,
        cell_counts: cells,
        input,
        circles: 10.0,
        sigmas,
        repetitions: 100,
        redraw_interval: None,
        integrator: Integrator::TaylorExponential,
        steps_per_period: 1000.0,
        keep_fidelities: false,
    }
}

fn circles_scan(chain: ChainConfig, input: Vec<Amplitude>, max: usize) -> Experiment {
    Experiment::CirclesScan(CirclesConfig {
        chain,
        cell_counts: vec![2, 4, 6, 8],
        input,
        circles: (1..=max).map(|n| n as f64).collect(),
        integrator: Integrator::TaylorExponential,
        steps_per_period: 1000.0,
    })
}

fn probe(name: &str, chain: ChainConfig, cells: usize, phases: Vec<f64>, points: usize) -> ExperimentConfig {
    base(
        name,
        Experiment::Spectroscopy(SpectroscopyConfig {
            chain,
            cell_count: cells,
            phases_over_pi: phases,
            kappa: 2.5,
            gamma: 0.01,
            probe_coupling: 0.2,
            coupling_profile: None,
            detuning_max: 4.0,
            points,
            cavity_detuning: 0.0,
        }),
    )
}

/// Phases `ωt/π` strictly inside the sweep, avoiding the closed gap at 1/2.
fn map_phases(count: usize) -> Vec<f64> {
    (0..count).map(|k| (k as f64 + 0.5) / count as f64).collect()
}

pub fn catalog() -> Vec<(Recipe, ExperimentConfig)> {
    let two = || ChainConfig::uniform(2);
    let three = || ChainConfig::uniform(3);
    let four = || ChainConfig::with_couplings(4, vec![std::f64::consts::SQRT_2, 1.0, std::f64::consts::SQRT_2]);
    let five = || ChainConfig::with_couplings(5, vec![1.0, 2.0, 2.0, 1.0]);
    let r = |name, description, expected, tolerance| Recipe { name, description, expected, tolerance };

    let mut fig2c = sweep("fig2c", two(), 5);
    if let Experiment::Spectrum(c) = &mut fig2c.experiment {
        // The fifth level from the bottom is the lower edge state.
        c.adiabaticity = Some(AdiabaticityConfig { level: 4, mode: MetricModeConfig::Projected });
    }
    let mut fig3b = ensemble(two(), bell(), vec![0.5], vec![4]);
    fig3b.keep_fidelities = true;

    vec![
        (
            r("fig2a", "N=2, M=5 spectrum over ωt ∈ [0, π]", "edge levels flat at ±g, 14 levels", "1e-8 g"),
            sweep("fig2a", two(), 5),
        ),
        (
            r("fig2b", "N=2, M=5 eigenstates at ωt = π/6", "3 bulk bands split by 2 edge states, middle band 4-fold", "1e-8 g"),
            snapshot("fig2b", two(), 5),
        ),
        (
            r("fig2c", "Adiabaticity metric against the lower edge level, ω = 0.1 g", "metric ≪ 1 for every r at ω = 0.1 g", "max below 0.5"),
            fig2c,
        ),
        (
            r("fig2d", "Bell and |A11> transfer, N=2, M=5, ω = 0.1 g (n = 5)", "final fidelity ≥ 0.999", "0.001"),
            transfer("fig2d", two(), 5, bell(), 5.0),
        ),
        (
            r("fig2e", "Populations for |A11>, N=2, M=5, n = 5", "excitation moves from A(1,1) to A(1,5) with oscillation between rows", "qualitative"),
            transfer("fig2e", two(), 5, first_qubit(2), 5.0),
        ),
        (
            r("fig2f", "Populations for the Bell input, N=2, M=5, n = 5", "both rows of cell 5 at 1/2", "qualitative"),
            transfer("fig2f", two(), 5, bell(), 5.0),
        ),
        (
            r("fig3a", "Clean fidelity against circles, N=2, M = 2..8", "M=8 needs at least 10 circles for F ≈ 1", "F ≥ 0.99"),
            base("fig3a", circles_scan(two(), bell(), 12)),
        ),
        (
            r("fig3b", "Fidelity histogram, ξ = 0.5 g, M=4, 100 repetitions", "distribution spread below 1", "qualitative"),
            base("fig3b", Experiment::EnsembleCoupling(fig3b)),
        ),
        (
            r("fig3c", "Mean fidelity against coupling disorder ξ, N=2, M = 2..8", "plateau near 1 up to ξ ≈ 0.1 g", "F ≥ 0.99 at ξ = 0.1 g"),
            base("fig3c", Experiment::EnsembleCoupling(ensemble(two(), bell(), log_grid(1e-3, 1.0, 13), vec![2, 4, 6, 8]))),
        ),
        (
            r("fig3d", "Mean fidelity against timing disorder η, N=2, M = 2..8", "plateau up to η ≈ 0.01 T", "F ≥ 0.99 at η = 0.01 T"),
            base("fig3d", Experiment::EnsembleTiming(ensemble(two(), phased_bell(), log_grid(1e-3, 0.3, 11), vec![2, 4, 6, 8]))),
        ),
        (
            r("fig4a", "N=3, M=6 spectrum over ωt ∈ [0, π]", "edge levels flat at ±√2 g and 0", "1e-8 g"),
            sweep("fig4a", three(), 6),
        ),
        (
            r("fig4b", "N=3, M=6 eigenstates at ωt = π/6", "4 bulk bands split by 3 edge states", "1e-8 g"),
            snapshot("fig4b", three(), 6),
        ),
        (
            r("fig4c", "Clean fidelity against circles, N=3, M = 2..8", "M=2 needs 5 circles, M=8 needs 20", "F ≥ 0.99"),
            base("fig4c", circles_scan(three(), w_state(), 24)),
        ),
        (
            r("fig4d", "W-state populations, N=3, M=6, n = 20", "excitation ends spread over A(1..3, 6)", "qualitative"),
            transfer("fig4d", three(), 6, w_state(), 20.0),
        ),
        (
            r("fig4e", "Mean W-state fidelity against coupling disorder, M = 2..8", "plateau up to ξ ≈ 0.1 g", "F ≥ 0.96 at ξ = 0.1 g"),
            base("fig4e", Experiment::EnsembleCoupling(EnsembleConfig {
                circles: 20.0,
                ..ensemble(three(), w_state(), log_grid(1e-3, 1.0, 13), vec![2, 4, 6, 8])
            })),
        ),
        (
            r("fig4f", "Mean W-state fidelity against timing disorder, M = 2..8", "plateau up to η ≈ 0.01 T", "qualitative"),
            base("fig4f", Experiment::EnsembleTiming(EnsembleConfig {
                circles: 20.0,
                ..ensemble(three(), w_state(), log_grid(1e-3, 0.3, 11), vec![2, 4, 6, 8])
            })),
        ),
        (
            r("fig5a", "N=4 spectrum, couplings (√2, 1, √2) g, M=5, 24 sites", "edge levels at ±2g, ±g", "1e-10 g"),
            sweep("fig5a", four(), 5),
        ),
        (
            r("fig5b", "N=4 eigenstates at ωt = π/6", "4 edge states, inner bulk bands 4-fold", "1e-10 g"),
            snapshot("fig5b", four(), 5),
        ),
        (
            r("fig5c", "N=5 spectrum, couplings (1, 2, 2, 1) g, M=5, 29 sites", "edge levels at ±3g, ±g, 0", "1e-10 g"),
            sweep("fig5c", five(), 5),
        ),
        (
            r("fig5d", "N=5 eigenstates at ωt = π/6", "5 edge states, inner bulk bands 4-fold", "1e-10 g"),
            snapshot("fig5d", five(), 5),
        ),
        (
            r("fig6ab", "Coupler phase and coupling against external flux", "g/2π from about -20 MHz to +60 MHz; -18.6 MHz at zero flux", "±15%"),
            base("fig6ab", Experiment::Hardware(HardwareConfig {
                l_g_ph: 300.0,
                l_t_ph: 1000.0,
                l_j_ph: 8000.0,
                qubit_frequency_ghz: 5.5,
                points: 801,
            })),
        ),
        (
            r("fig7e", "Winding number along the sweep with the matched cell choice", "winding 1 throughout", "exact integer"),
            base("fig7e", Experiment::Winding(WindingConfig {
                drive_amplitude: 5.0,
                samples: 100,
                convention: ConventionChoice::Matched,
                k_points: 2001,
            })),
        ),
        (
            r("fig10b", "Probe couplings and reflection at ωt = π/6, N=2, M=5", "outer features separated by 2g", "5%"),
            probe("fig10b", two(), 5, vec![1.0 / 6.0], 2001),
        ),
        (
            r("fig10c", "Reflection map over ωt, N=2, M=5", "edge features flat at ±g", "5%"),
            probe("fig10c", two(), 5, map_phases(40), 801),
        ),
        (
            r("fig10d", "Probe couplings and reflection at ωt = π/6, N=3, M=6", "outer features separated by 2√2 g", "5%"),
            probe("fig10d", three(), 6, vec![1.0 / 6.0], 2001),
        ),
        (
            r("fig10e", "Reflection map over ωt, N=3, M=6", "edge features flat at ±√2 g and 0", "5%"),
            probe("fig10e", three(), 6, map_phases(40), 801),
        ),
    ]
}

pub fn find(name: &str) -> Option<ExperimentConfig> {
    catalog().into_iter().find(|(r, _)| r.name == name).map(|(_, c)| c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique_and_configs_valid() {
        let all = catalog();
        let mut names: Vec<_> = all.iter().map(|(r, _)| r.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), all.len());
        for (r, c) in &all {
            assert_eq!(r.name, c.name);
            c.validate().unwrap_or_else(|e| panic!("{}: {e}", r.name));
        }
    }
}
