//! Dense real-symmetric eigendecomposition with sorted, sign-fixed output.

use nalgebra::{DMatrix, DVector};

use crate::model::C64;

/// Components smaller than this are skipped when fixing signs.
pub const GAUGE_ZERO: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct Eigensystem {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `i` belongs to `values[i]`.
    pub vectors: DMatrix<f64>,
}

impl Eigensystem {
    pub fn of(matrix: &DMatrix<f64>) -> Self {
        let eig = matrix.clone().symmetric_eigen();
        let n = eig.eigenvalues.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let mut vectors = DMatrix::zeros(n, n);
        for (col, &i) in order.iter().enumerate() {
            let mut v = eig.eigenvectors.column(i).into_owned();
            fix_sign(&mut v);
            vectors.set_column(col, &v);
        }
        Self { values, vectors }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, i: usize) -> DVector<f64> {
        self.vectors.column(i).into_owned()
    }

    /// `exp(-i H dt) psi` from the decomposition of `H`.
    pub fn propagate(&self, psi: &DVector<C64>, dt: f64) -> DVector<C64> {
        let re = self.vectors.tr_mul(&psi.map(|z| z.re));
        let im = self.vectors.tr_mul(&psi.map(|z| z.im));
        let mut rotated_re = DVector::zeros(self.len());
        let mut rotated_im = DVector::zeros(self.len());
        for k in 0..self.len() {
            let phase = C64::from_polar(1.0, -self.values[k] * dt);
            let z = C64::new(re[k], im[k]) * phase;
            rotated_re[k] = z.re;
            rotated_im[k] = z.im;
        }
        let out_re = &self.vectors * rotated_re;
        let out_im = &self.vectors * rotated_im;
        DVector::from_fn(psi.len(), |i, _| C64::new(out_re[i], out_im[i]))
    }
}

/// Makes the first non-negligible component positive.
pub fn fix_sign(v: &mut DVector<f64>) {
    if let Some(&first) = v.iter().find(|x| x.abs() > GAUGE_ZERO) {
        if first < 0.0 {
            v.neg_mut();
        }
    }
}

pub fn to_complex(v: &DVector<f64>) -> DVector<C64> {
    v.map(|x| C64::new(x, 0.0))
}
