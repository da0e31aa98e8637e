//! Exact propagation in the truncated number basis by full diagonalization.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::hamiltonian::QuarticModel;

#[derive(Clone, Debug)]
pub struct SpectralPropagator {
    energies: DVector<f64>,
    vectors: DMatrix<f64>,
}

impl SpectralPropagator {
    /// Eigen-decomposes the model's H matrix; eigenvalues ascending.
    pub fn diagonalize(model: &QuarticModel) -> Result<Self> {
        let h = model.h_real().clone();
        if h.iter().any(|v| !v.is_finite()) {
            return Err(Error::Eigen("H matrix has non-finite entries".into()));
        }
        let eig = SymmetricEigen::try_new(h, f64::EPSILON, 0)
            .ok_or_else(|| Error::Eigen("symmetric QR iteration did not converge".into()))?;
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let energies =
            DVector::from_iterator(order.len(), order.iter().map(|&i| eig.eigenvalues[i]));
        let vectors = eig.eigenvectors.select_columns(&order);
        Ok(Self { energies, vectors })
    }

    pub fn n_max(&self) -> usize {
        self.energies.len() - 1
    }

    pub fn energies(&self) -> &DVector<f64> {
        &self.energies
    }

    pub fn vectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    /// max |V diag(E) Vᵀ − H|
    pub fn reconstruction_error(&self, model: &QuarticModel) -> f64 {
        let rebuilt =
            &self.vectors * DMatrix::from_diagonal(&self.energies) * self.vectors.transpose();
        (rebuilt - model.h_real()).amax()
    }

    /// Eigen-coefficients Vᵀψ₀ for repeated propagation.
    pub fn evolution(&self, psi0: &FockVector) -> Result<Evolution<'_>> {
        if psi0.n_max() != self.n_max() {
            return Err(Error::DimensionMismatch {
                left: self.n_max(),
                right: psi0.n_max(),
            });
        }
        let re = DVector::from_iterator(psi0.dim(), psi0.amps().iter().map(|c| c.re));
        let im = DVector::from_iterator(psi0.dim(), psi0.amps().iter().map(|c| c.im));
        Ok(Evolution {
            propagator: self,
            coef_re: self.vectors.tr_mul(&re),
            coef_im: self.vectors.tr_mul(&im),
        })
    }

    /// ψ(t) = V e^{−iEt} Vᵀ ψ₀
    pub fn propagate(&self, psi0: &FockVector, t: f64) -> Result<FockVector> {
        Ok(self.evolution(psi0)?.at(t))
    }
}

/// An initial state resolved in the eigenbasis.
#[derive(Clone, Debug)]
pub struct Evolution<'a> {
    propagator: &'a SpectralPropagator,
    coef_re: DVector<f64>,
    coef_im: DVector<f64>,
}

impl Evolution<'_> {
    pub fn at(&self, t: f64) -> FockVector {
        let p = self.propagator;
        let dim = p.energies.len();
        let mut wre = DVector::zeros(dim);
        let mut wim = DVector::zeros(dim);
        for k in 0..dim {
            let c = C64::new(self.coef_re[k], self.coef_im[k])
                * C64::from_polar(1.0, -p.energies[k] * t);
            wre[k] = c.re;
            wim[k] = c.im;
        }
        let re = &p.vectors * wre;
        let im = &p.vectors * wim;
        FockVector::from_amps(
            re.iter()
                .zip(im.iter())
                .map(|(&r, &i)| C64::new(r, i))
                .collect(),
        )
    }

    /// Σ|c_k|² E_k
    pub fn energy(&self) -> f64 {
        (0..self.coef_re.len())
            .map(|k| {
                (self.coef_re[k].powi(2) + self.coef_im[k].powi(2)) * self.propagator.energies[k]
            })
            .sum()
    }
}
