//! Two-band Bloch Hamiltonian of the `g = 0` chain and its winding number.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_K_POINTS: usize = 2001;
/// Gap-closing threshold on `min_k |h(k)|`.
pub const GAP_TOL: f64 = 1e-9;

/// Which pair of sites forms the unit cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convention {
    /// `(A_m, B_m)`, intra-cell bond `v`.
    LeftCell,
    /// `(B_m, A_{m+1})`, intra-cell bond `w`.
    RightCell,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlochModel {
    pub convention: Convention,
    pub v: f64,
    pub w: f64,
    pub k_points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlochSample {
    pub k: f64,
    pub dx: f64,
    pub dy: f64,
}

impl BlochModel {
    pub fn new(convention: Convention, v: f64, w: f64) -> Self {
        Self { convention, v, w, k_points: DEFAULT_K_POINTS }
    }

    pub fn with_k_points(self, k_points: usize) -> Self {
        Self { k_points, ..self }
    }

    /// `(d_x, d_y)` at momentum `k`.
    pub fn d(&self, k: f64) -> (f64, f64) {
        let (intra, inter) = match self.convention {
            Convention::LeftCell => (self.v, self.w),
            Convention::RightCell => (self.w, self.v),
        };
        (intra + inter * k.cos(), inter * k.sin())
    }

    pub fn samples(&self) -> Vec<BlochSample> {
        let n = self.k_points.max(2);
        (0..n)
            .map(|i| {
                let k = -PI + 2.0 * PI * i as f64 / (n - 1) as f64;
                let (dx, dy) = self.d(k);
                BlochSample { k, dx, dy }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Winding {
    pub value: i64,
    /// Accumulated phase over `2π` before rounding.
    pub raw: f64,
    pub residual: f64,
    pub min_modulus: f64,
}

/// Total change of `arg(d_x + i d_y)` over `k ∈ [-π, π]`, divided by `2π`.
pub fn winding_number(model: &BlochModel) -> Result<Winding> {
    if model.k_points < 3 {
        return Err(Error::Input(format!("need at least 3 k points, got {}", model.k_points)));
    }
    let samples = model.samples();
    let min_modulus = samples.iter().map(|s| s.dx.hypot(s.dy)).fold(f64::INFINITY, f64::min);
    // The grid may straddle the closing point k = π only at its end, which
    // is sampled exactly, so the sampled minimum is the true one there.
    if min_modulus <= GAP_TOL {
        return Err(Error::GapClosed { v: model.v, w: model.w, min_modulus });
    }
    let mut total = 0.0;
    for pair in samples.windows(2) {
        let a = pair[0].dy.atan2(pair[0].dx);
        let b = pair[1].dy.atan2(pair[1].dx);
        let mut step = b - a;
        step -= 2.0 * PI * (step / (2.0 * PI)).round();
        total += step;
    }
    let raw = total / (2.0 * PI);
    let value = raw.round();
    Ok(Winding { value: value as i64, raw, residual: (raw - value).abs(), min_modulus })
}
