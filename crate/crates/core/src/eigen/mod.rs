//! Spectra of graph operators.
//!
//! m-symmetric operators go through the similarity `B = M^{1/2} A M^{-1/2}`
//! and a Jacobi solve; everything else goes through Hessenberg QR. Indices
//! `k` in this crate are 1-based, matching `λ_1 ≤ λ_2 ≤ … ≤ λ_n`.

pub mod compare;
pub mod general;
pub mod symmetric;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{m_inner, OperatorMatrix, VertexFunction};

pub use compare::{
    complex_multiset_distance, conjugation_deviation, real_multiset_distance, zero_cluster_size, ZERO_CLUSTER_TOL,
};

/// Relative m-symmetry tolerance accepted by [`eig_m_symmetric`].
pub const SYMMETRY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Ascending, with multiplicity.
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[k]` pairs with `eigenvalues[k]`; m-orthonormal.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvectors: Option<Vec<Vec<f64>>>,
    pub residual: f64,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `λ_k`, 1-based.
    pub fn lambda(&self, k: usize) -> f64 {
        self.eigenvalues[k - 1]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn without_vectors(mut self) -> Self {
        self.eigenvectors = None;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        ComplexValue { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSpectrum {
    /// Sorted by real part, then imaginary part.
    pub eigenvalues: Vec<Complex64>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexSpectrumExport {
    pub eigenvalues: Vec<ComplexValue>,
    pub residual: f64,
}

impl ComplexSpectrum {
    fn sorted(mut eigenvalues: Vec<Complex64>, residual: f64) -> Self {
        eigenvalues.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        ComplexSpectrum { eigenvalues, residual }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `λ_k` in (Re, Im) order, 1-based.
    pub fn lambda(&self, k: usize) -> Complex64 {
        self.eigenvalues[k - 1]
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.re).collect()
    }

    pub fn to_export(&self) -> ComplexSpectrumExport {
        ComplexSpectrumExport {
            eigenvalues: self.eigenvalues.iter().map(|&z| z.into()).collect(),
            residual: self.residual,
        }
    }
}

/// Spectrum of an operator that is self-adjoint in its m-inner product.
pub fn eig_m_symmetric(a: &OperatorMatrix) -> Result<Spectrum> {
    let n = a.dim();
    let m = &a.measure.values;
    let m_max = m.iter().copied().fold(0.0, f64::max);
    let (asym, i, j) = a.max_m_asymmetry();
    if asym > SYMMETRY_TOL * a.scale() * m_max.max(1.0) {
        return Err(Error::NotMSymmetric { row: a.order[i].to_string(), col: a.order[j].to_string(), asymmetry: asym });
    }
    let root: Vec<f64> = m.iter().map(|v| v.sqrt()).collect();
    let b = DMatrix::from_fn(n, n, |r, c| root[r] * a.entries[(r, c)] / root[c]);
    let (values, w) = symmetric::jacobi_eigen(&b);

    let vectors: Vec<Vec<f64>> = (0..n).map(|k| (0..n).map(|r| w[(r, k)] / root[r]).collect()).collect();
    let norm = a.norm();
    let residual = if norm == 0.0 {
        0.0
    } else {
        vectors
            .iter()
            .zip(&values)
            .map(|(v, &lambda)| {
                (0..n)
                    .map(|r| {
                        let av: f64 = (0..n).map(|c| a.entries[(r, c)] * v[c]).sum();
                        m[r] * (av - lambda * v[r]).powi(2)
                    })
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
            / norm
    };
    Ok(Spectrum { eigenvalues: values, eigenvectors: Some(vectors), residual })
}

/// Default QR iteration budget for an `n × n` matrix.
pub fn default_iteration_cap(n: usize) -> usize {
    100 * n.max(1)
}

/// All eigenvalues of a real operator.
pub fn eig_general(a: &OperatorMatrix) -> Result<ComplexSpectrum> {
    eig_general_with_cap(a, default_iteration_cap(a.dim()))
}

pub fn eig_general_with_cap(a: &OperatorMatrix, max_iterations: usize) -> Result<ComplexSpectrum> {
    let (h, values) = general::general_eigenvalues(&a.entries, max_iterations)?;
    let residual = values.iter().map(|&z| general::hessenberg_residual(&h, z)).fold(0.0, f64::max);
    Ok(ComplexSpectrum::sorted(values, residual))
}

/// `(Af, f)_m / (f, f)_m`.
pub fn rayleigh(a: &OperatorMatrix, f: &VertexFunction) -> Result<Complex64> {
    let v = f.aligned_to(&a.order)?;
    rayleigh_values(a, &v)
}

pub(crate) fn rayleigh_values(a: &OperatorMatrix, v: &[Complex64]) -> Result<Complex64> {
    let denom = m_inner(&a.measure.values, v, v);
    if denom.re == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(a.inner(&a.apply(v), v) / denom)
}

/// Closed-form spectrum of `Δ` on the simple directed cycle `C_n`:
/// `0`, `2` when `n` is even, and `1 - e^{±2πil/n}` for `0 < l < n/2`.
pub fn cycle_delta_spectrum_closed_form(n: usize) -> Result<ComplexSpectrum> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("cycle needs n >= 2, got {n}")));
    }
    let mut values = vec![Complex64::new(0.0, 0.0)];
    if n.is_multiple_of(2) {
        values.push(Complex64::new(2.0, 0.0));
    }
    for l in 1..=((n - 1) / 2) {
        let theta = 2.0 * std::f64::consts::PI * l as f64 / n as f64;
        values.push(Complex64::new(1.0 - theta.cos(), -theta.sin()));
        values.push(Complex64::new(1.0 - theta.cos(), theta.sin()));
    }
    Ok(ComplexSpectrum::sorted(values, 0.0))
}
