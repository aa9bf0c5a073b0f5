//! Experiment configuration files.
//!
//! A config is one JSON object. `experiment` selects the kind; the common
//! keys `name`, `seed`, `out` and `energy_unit_mhz` sit beside the kind's own
//! fields.

use std::fmt;
use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sshqst::dynamics::Integrator;
use sshqst::{ChainSpec, C64};

/// A config problem tied to one field, e.g. `sigmas[1]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl FieldError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self { field: field.into(), message: message.into() }
    }
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl std::error::Error for FieldError {}

type Check = Result<(), FieldError>;

const COMMON_KEYS: [&str; 5] = ["experiment", "name", "seed", "out", "energy_unit_mhz"];

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub seed: u64,
    pub out: Option<PathBuf>,
    /// `g0/2π` in MHz; only used to label outputs in physical units.
    pub energy_unit_mhz: f64,
    pub experiment: Experiment,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Experiment {
    Spectrum(SpectrumConfig),
    Transfer(TransferConfig),
    EnsembleCoupling(EnsembleConfig),
    EnsembleTiming(EnsembleConfig),
    CirclesScan(CirclesConfig),
    Winding(WindingConfig),
    Spectroscopy(SpectroscopyConfig),
    Hardware(HardwareConfig),
}

impl Experiment {
    pub fn kind(&self) -> &'static str {
        match self {
            Experiment::Spectrum(_) => "Spectrum",
            Experiment::Transfer(_) => "Transfer",
            Experiment::EnsembleCoupling(_) => "EnsembleCoupling",
            Experiment::EnsembleTiming(_) => "EnsembleTiming",
            Experiment::CirclesScan(_) => "CirclesScan",
            Experiment::Winding(_) => "Winding",
            Experiment::Spectroscopy(_) => "Spectroscopy",
            Experiment::Hardware(_) => "Hardware",
        }
    }

    const KINDS: [&'static str; 8] = [
        "Spectrum",
        "Transfer",
        "EnsembleCoupling",
        "EnsembleTiming",
        "CirclesScan",
        "Winding",
        "Spectroscopy",
        "Hardware",
    ];
}

fn default_name() -> String {
    "experiment".into()
}

fn default_energy_unit() -> f64 {
    10.0
}

fn default_drive() -> f64 {
    5.0
}

fn default_true() -> bool {
    true
}

fn default_steps_per_period() -> f64 {
    sshqst::dynamics::DEFAULT_STEPS_PER_PERIOD
}

fn default_repetitions() -> usize {
    sshqst::disorder::DEFAULT_REPETITIONS
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    pub transport_count: usize,
    /// `g_1 .. g_{N-1}` in units of `g0`; all 1 when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intra_couplings: Option<Vec<f64>>,
    /// `J` in units of `g0`.
    #[serde(default = "default_drive")]
    pub drive_amplitude: f64,
    /// Qubit detunings from resonance. Only all-zero values are accepted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qubit_detunings: Option<Vec<f64>>,
}

impl ChainConfig {
    pub fn uniform(transport_count: usize) -> Self {
        Self { transport_count, intra_couplings: None, drive_amplitude: 5.0, qubit_detunings: None }
    }

    pub fn with_couplings(transport_count: usize, couplings: Vec<f64>) -> Self {
        Self { intra_couplings: Some(couplings), ..Self::uniform(transport_count) }
    }

    fn couplings(&self) -> Vec<f64> {
        self.intra_couplings
            .clone()
            .unwrap_or_else(|| vec![1.0; self.transport_count.saturating_sub(1)])
    }

    fn validate(&self) -> Check {
        if self.transport_count < 1 {
            return Err(FieldError::new("chain.transport_count", "must be >= 1"));
        }
        let g = self.couplings();
        if g.len() + 1 != self.transport_count {
            return Err(FieldError::new(
                "chain.intra_couplings",
                format!("{} transport qubits need {} couplings, got {}", self.transport_count, self.transport_count - 1, g.len()),
            ));
        }
        for (i, x) in g.iter().enumerate() {
            positive(&format!("chain.intra_couplings[{i}]"), *x)?;
        }
        positive("chain.drive_amplitude", self.drive_amplitude)?;
        if let Some(d) = &self.qubit_detunings {
            if let Some(i) = d.iter().position(|x| *x != 0.0) {
                return Err(FieldError::new(
                    format!("chain.qubit_detunings[{i}]"),
                    "detuned qubits are not supported; every qubit must be resonant",
                ));
            }
        }
        Ok(())
    }

    /// Chain with `cell_count` cells and drive frequency 1 (callers that need
    /// a specific `ω` set it themselves).
    pub fn spec(&self, cell_count: usize, field: &str) -> Result<ChainSpec, FieldError> {
        self.validate()?;
        ChainSpec::new(self.transport_count, cell_count, self.couplings(), self.drive_amplitude, 1.0)
            .map_err(|e| FieldError::new(field, e.to_string()))
    }
}

/// One input amplitude: a real number or `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Amplitude {
    Real(f64),
    Complex([f64; 2]),
}

impl Amplitude {
    fn value(self) -> C64 {
        match self {
            Amplitude::Real(x) => C64::new(x, 0.0),
            Amplitude::Complex([re, im]) => C64::new(re, im),
        }
    }
}

/// Normalised amplitudes from the `input` field.
pub fn input_amplitudes(input: &[Amplitude], transport_count: usize) -> Result<Vec<C64>, FieldError> {
    if input.len() != transport_count {
        return Err(FieldError::new(
            "input",
            format!("need {transport_count} amplitudes, got {}", input.len()),
        ));
    }
    let raw: Vec<C64> = input.iter().map(|a| a.value()).collect();
    if let Some(i) = raw.iter().position(|z| !z.is_finite()) {
        return Err(FieldError::new(format!("input[{i}]"), "must be finite"));
    }
    sshqst::model::normalize_amplitudes(&raw).map_err(|e| FieldError::new("input", e.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MetricModeConfig {
    Raw,
    Projected,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdiabaticityConfig {
    /// Zero-based level index in ascending energy order.
    pub level: usize,
    #[serde(default = "default_mode")]
    pub mode: MetricModeConfig,
}

fn default_mode() -> MetricModeConfig {
    MetricModeConfig::Raw
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub chain: ChainConfig,
    pub cell_count: usize,
    /// Uniform samples of `ωt` over `[0, π]`; ignored when `phases_over_pi` is set.
    #[serde(default = "default_spectrum_samples")]
    pub samples: usize,
    /// Explicit sweep phases `ωt/π`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases_over_pi: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adiabaticity: Option<AdiabaticityConfig>,
    /// `ω` in units of `g0`; only the adiabaticity metric depends on it.
    #[serde(default = "default_omega")]
    pub drive_frequency: f64,
}

fn default_omega() -> f64 {
    0.1
}

fn default_spectrum_samples() -> usize {
    201
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransferConfig {
    pub chain: ChainConfig,
    pub cell_count: usize,
    pub input: Vec<Amplitude>,
    /// Number of common periods `n`; `t_f = n T`.
    pub circles: f64,
    #[serde(default)]
    pub integrator: Integrator,
    #[serde(default = "default_steps_per_period")]
    pub steps_per_period: f64,
    /// Added to `t_f`, in units of `1/g0`.
    #[serde(default)]
    pub time_offset: f64,
    #[serde(default = "default_true")]
    pub compare_analytic: bool,
    /// Also write per-site populations.
    #[serde(default = "default_true")]
    pub populations: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub chain: ChainConfig,
    pub cell_counts: Vec<usize>,
    pub input: Vec<Amplitude>,
    pub circles: f64,
    /// `ξ` in units of `g0` (coupling) or `η` in units of `T` (timing).
    pub sigmas: Vec<f64>,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    /// Time between coupling redraws in `1/g0`; every step when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub redraw_interval: Option<f64>,
    #[serde(default)]
    pub integrator: Integrator,
    #[serde(default = "default_steps_per_period")]
    pub steps_per_period: f64,
    /// Also write every repetition's fidelity.
    #[serde(default)]
    pub keep_fidelities: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CirclesConfig {
    pub chain: ChainConfig,
    pub cell_counts: Vec<usize>,
    pub input: Vec<Amplitude>,
    pub circles: Vec<f64>,
    #[serde(default)]
    pub integrator: Integrator,
    #[serde(default = "default_steps_per_period")]
    pub steps_per_period: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConventionChoice {
    LeftCell,
    RightCell,
    /// `LeftCell` while `v < w`, `RightCell` after.
    Matched,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindingConfig {
    #[serde(default = "default_drive")]
    pub drive_amplitude: f64,
    /// Phases `ωt = π (k + 1/2) / samples`, which never hit `v = w` for even counts.
    #[serde(default = "default_winding_samples")]
    pub samples: usize,
    #[serde(default = "default_convention")]
    pub convention: ConventionChoice,
    #[serde(default = "default_k_points")]
    pub k_points: usize,
}

fn default_winding_samples() -> usize {
    100
}

fn default_convention() -> ConventionChoice {
    ConventionChoice::Matched
}

fn default_k_points() -> usize {
    sshqst::topology::DEFAULT_K_POINTS
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectroscopyConfig {
    pub chain: ChainConfig,
    pub cell_count: usize,
    #[serde(default = "default_probe_phases")]
    pub phases_over_pi: Vec<f64>,
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    /// `G` on every `A(1, m)`; replaced by `coupling_profile` when given.
    #[serde(default = "default_probe")]
    pub probe_coupling: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling_profile: Option<Vec<f64>>,
    #[serde(default = "default_half_width")]
    pub detuning_max: f64,
    #[serde(default = "default_scan_points")]
    pub points: usize,
    #[serde(default)]
    pub cavity_detuning: f64,
}

fn default_probe_phases() -> Vec<f64> {
    vec![1.0 / 6.0]
}

fn default_kappa() -> f64 {
    sshqst::spectroscopy::DEFAULT_KAPPA
}

fn default_gamma() -> f64 {
    sshqst::spectroscopy::DEFAULT_GAMMA
}

fn default_probe() -> f64 {
    sshqst::spectroscopy::DEFAULT_PROBE_COUPLING
}

fn default_half_width() -> f64 {
    sshqst::spectroscopy::DEFAULT_SCAN_HALF_WIDTH
}

fn default_scan_points() -> usize {
    sshqst::spectroscopy::DEFAULT_SCAN_POINTS
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardwareConfig {
    #[serde(default = "default_l_g")]
    pub l_g_ph: f64,
    #[serde(default = "default_l_t")]
    pub l_t_ph: f64,
    #[serde(default = "default_l_j")]
    pub l_j_ph: f64,
    /// `ω_q/2π` in GHz.
    #[serde(default = "default_qubit_frequency")]
    pub qubit_frequency_ghz: f64,
    #[serde(default = "default_flux_points")]
    pub points: usize,
}

fn default_l_g() -> f64 {
    300.0
}

fn default_l_t() -> f64 {
    1000.0
}

fn default_l_j() -> f64 {
    8000.0
}

fn default_qubit_frequency() -> f64 {
    5.5
}

fn default_flux_points() -> usize {
    801
}

impl HardwareConfig {
    pub fn params(&self) -> sshqst::hardware::CouplerParams {
        sshqst::hardware::CouplerParams {
            l_g: self.l_g_ph * 1e-12,
            l_t: self.l_t_ph * 1e-12,
            l_j: self.l_j_ph * 1e-12,
            omega_q: 2.0 * std::f64::consts::PI * self.qubit_frequency_ghz * 1e9,
        }
    }
}

fn positive(field: &str, x: f64) -> Check {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(FieldError::new(field, format!("must be positive and finite, got {x}")))
    }
}

fn non_negative(field: &str, x: f64) -> Check {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(FieldError::new(field, format!("must be >= 0 and finite, got {x}")))
    }
}

fn cells(field: &str, m: usize) -> Check {
    if m >= 2 {
        Ok(())
    } else {
        Err(FieldError::new(field, format!("need at least 2 cells, got {m}")))
    }
}

fn non_empty<T>(field: &str, x: &[T]) -> Check {
    if x.is_empty() {
        Err(FieldError::new(field, "must not be empty"))
    } else {
        Ok(())
    }
}

fn phases(field: &str, x: &[f64]) -> Check {
    non_empty(field, x)?;
    for (i, p) in x.iter().enumerate() {
        if !(0.0..=1.0).contains(p) {
            return Err(FieldError::new(format!("{field}[{i}]"), format!("ωt/π must lie in [0, 1], got {p}")));
        }
    }
    Ok(())
}

fn steps(field: &str, x: f64) -> Check {
    positive(field, x)?;
    if x < sshqst::dynamics::MIN_STEPS_PER_PERIOD {
        return Err(FieldError::new(
            field,
            format!("must be >= {} (Δt <= T/500)", sshqst::dynamics::MIN_STEPS_PER_PERIOD),
        ));
    }
    Ok(())
}

fn circles(field: &str, n: f64) -> Check {
    if n >= 1.0 && n.is_finite() {
        Ok(())
    } else {
        Err(FieldError::new(field, format!("must be >= 1, got {n}")))
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Check {
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(FieldError::new("name", "must be a non-empty file stem"));
        }
        positive("energy_unit_mhz", self.energy_unit_mhz)?;
        match &self.experiment {
            Experiment::Spectrum(c) => {
                c.chain.spec(c.cell_count, "cell_count")?;
                cells("cell_count", c.cell_count)?;
                positive("drive_frequency", c.drive_frequency)?;
                if let Some(p) = &c.phases_over_pi {
                    phases("phases_over_pi", p)?;
                } else if c.samples < 3 {
                    return Err(FieldError::new("samples", "need at least 3 samples"));
                }
                if let Some(a) = &c.adiabaticity {
                    if c.phases_over_pi.is_some() {
                        return Err(FieldError::new("adiabaticity", "needs a uniform sweep, not phases_over_pi"));
                    }
                    let levels = (c.chain.transport_count + 1) * c.cell_count - 1;
                    if a.level >= levels {
                        return Err(FieldError::new("adiabaticity.level", format!("must be < {levels}")));
                    }
                }
            }
            Experiment::Transfer(c) => {
                cells("cell_count", c.cell_count)?;
                c.chain.spec(c.cell_count, "cell_count")?;
                input_amplitudes(&c.input, c.chain.transport_count)?;
                circles("circles", c.circles)?;
                steps("steps_per_period", c.steps_per_period)?;
                if !c.time_offset.is_finite() {
                    return Err(FieldError::new("time_offset", "must be finite"));
                }
            }
            Experiment::EnsembleCoupling(c) | Experiment::EnsembleTiming(c) => {
                non_empty("cell_counts", &c.cell_counts)?;
                for (i, &m) in c.cell_counts.iter().enumerate() {
                    cells(&format!("cell_counts[{i}]"), m)?;
                }
                c.chain.spec(c.cell_counts[0], "cell_counts")?;
                input_amplitudes(&c.input, c.chain.transport_count)?;
                circles("circles", c.circles)?;
                non_empty("sigmas", &c.sigmas)?;
                for (i, &s) in c.sigmas.iter().enumerate() {
                    non_negative(&format!("sigmas[{i}]"), s)?;
                }
                if c.repetitions == 0 {
                    return Err(FieldError::new("repetitions", "must be >= 1"));
                }
                if let Some(dt) = c.redraw_interval {
                    positive("redraw_interval", dt)?;
                    if matches!(self.experiment, Experiment::EnsembleTiming(_)) {
                        return Err(FieldError::new("redraw_interval", "only applies to coupling disorder"));
                    }
                }
                steps("steps_per_period", c.steps_per_period)?;
            }
            Experiment::CirclesScan(c) => {
                non_empty("cell_counts", &c.cell_counts)?;
                for (i, &m) in c.cell_counts.iter().enumerate() {
                    cells(&format!("cell_counts[{i}]"), m)?;
                }
                c.chain.spec(c.cell_counts[0], "cell_counts")?;
                input_amplitudes(&c.input, c.chain.transport_count)?;
                non_empty("circles", &c.circles)?;
                for (i, &n) in c.circles.iter().enumerate() {
                    circles(&format!("circles[{i}]"), n)?;
                }
                steps("steps_per_period", c.steps_per_period)?;
            }
            Experiment::Winding(c) => {
                positive("drive_amplitude", c.drive_amplitude)?;
                if c.samples == 0 {
                    return Err(FieldError::new("samples", "must be >= 1"));
                }
                if c.k_points < 3 {
                    return Err(FieldError::new("k_points", "must be >= 3"));
                }
            }
            Experiment::Spectroscopy(c) => {
                cells("cell_count", c.cell_count)?;
                let spec = c.chain.spec(c.cell_count, "cell_count")?;
                phases("phases_over_pi", &c.phases_over_pi)?;
                positive("kappa", c.kappa)?;
                non_negative("gamma", c.gamma)?;
                non_negative("probe_coupling", c.probe_coupling)?;
                if let Some(p) = &c.coupling_profile {
                    if p.len() != spec.site_count() {
                        return Err(FieldError::new(
                            "coupling_profile",
                            format!("need {} entries, got {}", spec.site_count(), p.len()),
                        ));
                    }
                    for (i, &g) in p.iter().enumerate() {
                        non_negative(&format!("coupling_profile[{i}]"), g)?;
                    }
                }
                positive("detuning_max", c.detuning_max)?;
                if c.points < 3 {
                    return Err(FieldError::new("points", "must be >= 3"));
                }
                if !c.cavity_detuning.is_finite() {
                    return Err(FieldError::new("cavity_detuning", "must be finite"));
                }
            }
            Experiment::Hardware(c) => {
                positive("l_g_ph", c.l_g_ph)?;
                positive("l_t_ph", c.l_t_ph)?;
                positive("l_j_ph", c.l_j_ph)?;
                positive("qubit_frequency_ghz", c.qubit_frequency_ghz)?;
                if c.points < 2 {
                    return Err(FieldError::new("points", "must be >= 2"));
                }
            }
        }
        Ok(())
    }

    /// Parses and validates a config document.
    pub fn from_json(text: &str) -> Result<Self, FieldError> {
        let value: Value = serde_json::from_str(text).map_err(|e| FieldError::new("$", e.to_string()))?;
        let config = Self::from_value(value)?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_value(value: Value) -> Result<Self, FieldError> {
        let Value::Object(mut map) = value else {
            return Err(FieldError::new("$", "config must be a JSON object"));
        };
        let kind = match map.remove("experiment") {
            Some(Value::String(s)) => s,
            Some(_) => return Err(FieldError::new("experiment", "must be a string")),
            None => return Err(FieldError::new("experiment", "missing; one of ".to_string() + &Experiment::KINDS.join(", "))),
        };
        let name = take(&mut map, "name")?.unwrap_or_else(default_name);
        let seed = take(&mut map, "seed")?.unwrap_or(0);
        let out = take(&mut map, "out")?;
        let energy_unit_mhz = take(&mut map, "energy_unit_mhz")?.unwrap_or_else(default_energy_unit);
        let rest = Value::Object(map);
        let experiment = match kind.as_str() {
            "Spectrum" => Experiment::Spectrum(fields(rest)?),
            "Transfer" => Experiment::Transfer(fields(rest)?),
            "EnsembleCoupling" => Experiment::EnsembleCoupling(fields(rest)?),
            "EnsembleTiming" => Experiment::EnsembleTiming(fields(rest)?),
            "CirclesScan" => Experiment::CirclesScan(fields(rest)?),
            "Winding" => Experiment::Winding(fields(rest)?),
            "Spectroscopy" => Experiment::Spectroscopy(fields(rest)?),
            "Hardware" => Experiment::Hardware(fields(rest)?),
            other => {
                return Err(FieldError::new(
                    "experiment",
                    format!("unknown kind {other:?}; expected one of {}", Experiment::KINDS.join(", ")),
                ))
            }
        };
        Ok(Self { name, seed, out, energy_unit_mhz, experiment })
    }

    pub fn to_value(&self) -> Value {
        let body = match &self.experiment {
            Experiment::Spectrum(c) => serde_json::to_value(c),
            Experiment::Transfer(c) => serde_json::to_value(c),
            Experiment::EnsembleCoupling(c) | Experiment::EnsembleTiming(c) => serde_json::to_value(c),
            Experiment::CirclesScan(c) => serde_json::to_value(c),
            Experiment::Winding(c) => serde_json::to_value(c),
            Experiment::Spectroscopy(c) => serde_json::to_value(c),
            Experiment::Hardware(c) => serde_json::to_value(c),
        };
        let Ok(Value::Object(mut map)) = body else {
            unreachable!("config structs serialise to objects")
        };
        map.insert("experiment".into(), self.experiment.kind().into());
        map.insert("name".into(), self.name.clone().into());
        map.insert("seed".into(), self.seed.into());
        if let Some(out) = &self.out {
            map.insert("out".into(), out.display().to_string().into());
        }
        map.insert("energy_unit_mhz".into(), self.energy_unit_mhz.into());
        Value::Object(map)
    }
}

fn take<T: DeserializeOwned>(map: &mut Map<String, Value>, key: &'static str) -> Result<Option<T>, FieldError> {
    debug_assert!(COMMON_KEYS.contains(&key));
    map.remove(key)
        .map(|v| serde_json::from_value(v).map_err(|e| FieldError::new(key, e.to_string())))
        .transpose()
}

fn fields<T: DeserializeOwned>(value: Value) -> Result<T, FieldError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let field = if path == "." { "$".to_string() } else { path };
        FieldError::new(field, e.into_inner().to_string())
    })
}
