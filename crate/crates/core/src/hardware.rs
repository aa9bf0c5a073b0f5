//! Flux-tunable coupling of two Xmon qubits joined by a junction coupler.
//!
//! SI units throughout: henry for inductances, rad/s for frequencies.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplerParams {
    /// Grounding inductance of each qubit's coupler leg.
    pub l_g: f64,
    /// Coupler junction inductance at zero bias.
    pub l_t: f64,
    pub l_j: f64,
    pub omega_q: f64,
}

impl Default for CouplerParams {
    fn default() -> Self {
        Self { l_g: 300e-12, l_t: 1e-9, l_j: 8e-9, omega_q: 2.0 * PI * 5.5e9 }
    }
}

impl CouplerParams {
    pub fn validate(&self) -> Result<()> {
        for (name, x) in [("l_g", self.l_g), ("l_t", self.l_t), ("l_j", self.l_j), ("omega_q", self.omega_q)] {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::Input(format!("{name} must be positive, got {x}")));
            }
        }
        Ok(())
    }

    /// `β = 2 L_g / L_T`; the flux-phase relation is single valued for `β < 1`.
    pub fn beta(&self) -> f64 {
        2.0 * self.l_g / self.l_t
    }
}

const ROOT_TOL: f64 = 1e-14;

/// Solves `φ_ext = δ + β sin δ` for the coupler phase `δ`.
pub fn solve_junction_phase(params: &CouplerParams, phi_ext: f64) -> Result<f64> {
    params.validate()?;
    if !phi_ext.is_finite() || phi_ext.abs() > 2.0 * PI * (1.0 + 1e-12) {
        return Err(Error::Range { what: "phi_ext", value: phi_ext, min: -2.0 * PI, max: 2.0 * PI });
    }
    let beta = params.beta();
    let f = |d: f64| d + beta * d.sin() - phi_ext;
    // Every root lies within β of φ_ext because |sin| <= 1.
    let (lo, hi) = (phi_ext - beta, phi_ext + beta);
    if beta < 1.0 {
        return Ok(polish(f, beta, bisect(f, lo, hi)));
    }
    let cuts = 4096;
    let mut roots = Vec::new();
    let mut a = lo;
    let mut fa = f(a);
    for i in 1..=cuts {
        let b = lo + (hi - lo) * i as f64 / cuts as f64;
        let fb = f(b);
        if fa == 0.0 {
            roots.push(a);
        } else if fa * fb < 0.0 {
            roots.push(polish(f, beta, bisect(f, a, b)));
        }
        a = b;
        fa = fb;
    }
    if fa == 0.0 {
        roots.push(a);
    }
    match roots.as_slice() {
        [single] => Ok(*single),
        _ => Err(Error::Multivalued { phi_ext, roots }),
    }
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 || hi - lo < ROOT_TOL {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn polish(f: impl Fn(f64) -> f64, beta: f64, mut d: f64) -> f64 {
    for _ in 0..3 {
        let slope = 1.0 + beta * d.cos();
        if slope.abs() < 1e-6 {
            break;
        }
        let next = d - f(d) / slope;
        if (next - d).abs() > 1e-6 {
            break;
        }
        d = next;
    }
    d
}

/// `g = -L_g² cos δ / (2 (L_J + L_g)(L_T + 2 L_g cos δ)) · ω_q`, in rad/s.
pub fn coupling_at_phase(params: &CouplerParams, delta: f64) -> Result<f64> {
    let c = delta.cos();
    let denominator = 2.0 * (params.l_j + params.l_g) * (params.l_t + 2.0 * params.l_g * c);
    let scale = 2.0 * (params.l_j + params.l_g) * (params.l_t + 2.0 * params.l_g);
    if denominator.abs() <= 1e-12 * scale {
        return Err(Error::Divergence { denominator });
    }
    Ok(-params.l_g * params.l_g * c / denominator * params.omega_q)
}

pub fn flux_to_coupling(params: &CouplerParams, phi_ext: f64) -> Result<f64> {
    coupling_at_phase(params, solve_junction_phase(params, phi_ext)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FluxRow {
    pub phi_ext: f64,
    pub delta: f64,
    pub coupling_mhz: f64,
}

/// `points` flux values spanning `[-2π, 2π]`; couplings reported as `g/2π` in MHz.
pub fn flux_sweep(params: &CouplerParams, points: usize) -> Result<Vec<FluxRow>> {
    if points < 2 {
        return Err(Error::Input(format!("need at least 2 flux points, got {points}")));
    }
    (0..points)
        .map(|i| {
            let phi_ext = -2.0 * PI + 4.0 * PI * i as f64 / (points - 1) as f64;
            let delta = solve_junction_phase(params, phi_ext)?;
            let g = coupling_at_phase(params, delta)?;
            Ok(FluxRow { phi_ext, delta, coupling_mhz: g / (2.0 * PI) / 1e6 })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_roots() {
        let p = CouplerParams::default();
        assert_eq!(solve_junction_phase(&p, 0.0).unwrap(), 0.0);
        assert!((solve_junction_phase(&p, 2.0 * PI).unwrap() - 2.0 * PI).abs() < 1e-12);
        assert!((solve_junction_phase(&p, PI).unwrap() - PI).abs() < 1e-12);
    }

    #[test]
    fn zero_bias_coupling() {
        let p = CouplerParams::default();
        let g = flux_to_coupling(&p, 0.0).unwrap() / (2.0 * PI * 1e6);
        let expected = -(0.3f64 * 0.3) / (2.0 * 8.3 * 1.6) * 5500.0;
        assert!((g - expected).abs() < 1e-9 * expected.abs(), "{g}");
    }

    #[test]
    fn out_of_range_flux() {
        assert!(solve_junction_phase(&CouplerParams::default(), 7.0).is_err());
    }

    #[test]
    fn strong_coupler_leg_is_multivalued() {
        let p = CouplerParams { l_g: 1.5e-9, ..CouplerParams::default() };
        match solve_junction_phase(&p, 3.0) {
            Err(Error::Multivalued { roots, .. }) => {
                assert_eq!(roots.len(), 3);
                for d in roots {
                    assert!((d + p.beta() * d.sin() - 3.0).abs() < 1e-12);
                }
            }
            other => panic!("expected multivalued, got {other:?}"),
        }
    }

    #[test]
    fn cos_zero_gives_zero_coupling() {
        let g = coupling_at_phase(&CouplerParams::default(), PI / 2.0).unwrap();
        assert!(g.abs() < 1e-6);
    }

    #[test]
    fn divergence_detected() {
        // L_T = 2 L_g makes the denominator vanish at δ = π.
        let p = CouplerParams { l_t: 600e-12, ..CouplerParams::default() };
        assert!(matches!(coupling_at_phase(&p, PI), Err(Error::Divergence { .. })));
    }
}
