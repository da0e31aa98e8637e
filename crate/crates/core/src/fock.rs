//! Truncated single-mode Fock space.
//!
//! States live on the number basis |0⟩..|n_max⟩. Operators are dense complex
//! matrices; the ladder operators are truncated so that a†|n_max⟩ = 0.
//!
//! Two routes to the displacement and squeeze unitaries are provided:
//! [`displacement`]/[`squeeze`] exponentiate the truncated generator as a full
//! matrix, while [`FockSpace`] applies the same exponentials to a vector through
//! cached real-symmetric eigendecompositions. The second route is the one used
//! on hot paths; the first is kept as an independent check.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, SQRT_2};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub const DEFAULT_TAIL_THRESHOLD: f64 = 1e-10;
pub const DEFAULT_GUARD: usize = 8;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Tail-norm acceptance rule for truncated vectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationCheck {
    pub threshold: f64,
    pub guard: usize,
}

impl Default for TruncationCheck {
    fn default() -> Self {
        Self {
            threshold: DEFAULT_TAIL_THRESHOLD,
            guard: DEFAULT_GUARD,
        }
    }
}

/// Complex amplitudes over |0⟩..|n_max⟩.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    amps: Vec<C64>,
}

impl FockVector {
    pub fn zeros(n_max: usize) -> Self {
        Self {
            amps: vec![ZERO; n_max + 1],
        }
    }

    pub fn number_state(n: usize, n_max: usize) -> Self {
        assert!(n <= n_max, "number state |{n}> outside truncation {n_max}");
        let mut v = Self::zeros(n_max);
        v.amps[n] = ONE;
        v
    }

    pub fn vacuum(n_max: usize) -> Self {
        Self::number_state(0, n_max)
    }

    /// Panics on an empty amplitude list.
    pub fn from_amps(amps: Vec<C64>) -> Self {
        assert!(!amps.is_empty(), "a Fock vector needs at least one level");
        Self { amps }
    }

    pub fn n_max(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amps(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            self.amps.iter_mut().for_each(|c| *c /= n);
        }
    }

    pub fn scale(&mut self, s: C64) {
        self.amps.iter_mut().for_each(|c| *c *= s);
    }

    /// Σ|c_n|² over the top `guard` levels.
    pub fn tail_norm(&self, guard: usize) -> f64 {
        let start = self.dim().saturating_sub(guard);
        self.amps[start..].iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn check_converged(&self, check: &TruncationCheck) -> Result<()> {
        let tail = self.tail_norm(check.guard);
        if tail < check.threshold {
            Ok(())
        } else {
            Err(Error::Truncation {
                tail,
                guard: check.guard,
                threshold: check.threshold,
            })
        }
    }

    /// Zero-pads to a larger truncation.
    pub fn padded(&self, n_max: usize) -> Result<Self> {
        if n_max < self.n_max() {
            return Err(Error::DimensionMismatch {
                left: self.n_max(),
                right: n_max,
            });
        }
        let mut amps = self.amps.clone();
        amps.resize(n_max + 1, ZERO);
        Ok(Self { amps })
    }

    /// ⟨self|other⟩, conjugate-linear in `self`.
    pub fn inner(&self, other: &FockVector) -> Result<C64> {
        inner(self, other)
    }

    /// a|ψ⟩ on the same truncation.
    pub fn lowered(&self) -> Self {
        let mut out = Self::zeros(self.n_max());
        for n in 1..self.dim() {
            out.amps[n - 1] = self.amps[n] * (n as f64).sqrt();
        }
        out
    }

    /// a†|ψ⟩ on the same truncation (top level dropped).
    pub fn raised(&self) -> Self {
        let mut out = Self::zeros(self.n_max());
        for n in 0..self.n_max() {
            out.amps[n + 1] = self.amps[n] * ((n + 1) as f64).sqrt();
        }
        out
    }

    /// ⟨a†a⟩ without normalizing.
    pub fn mean_number(&self) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr())
            .sum()
    }

    /// Multiplies |n⟩ by e^{iθn}.
    pub fn rotate(&mut self, theta: f64) {
        for (n, c) in self.amps.iter_mut().enumerate() {
            *c *= C64::from_polar(1.0, theta * n as f64);
        }
    }
}

pub fn inner(u: &FockVector, v: &FockVector) -> Result<C64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            left: u.n_max(),
            right: v.n_max(),
        });
    }
    Ok(u.amps.iter().zip(&v.amps).map(|(a, b)| a.conj() * b).sum())
}

/// Dense operator on the truncated space.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    entries: DMatrix<C64>,
    hermitian: bool,
    unitary: bool,
}

impl OperatorMatrix {
    pub fn new(entries: DMatrix<C64>) -> Self {
        assert!(entries.is_square(), "operator matrix must be square");
        Self {
            entries,
            hermitian: false,
            unitary: false,
        }
    }

    fn hermitian(entries: DMatrix<C64>) -> Self {
        Self {
            hermitian: true,
            ..Self::new(entries)
        }
    }

    fn unitary(entries: DMatrix<C64>) -> Self {
        Self {
            unitary: true,
            ..Self::new(entries)
        }
    }

    pub fn identity(n_max: usize) -> Self {
        Self {
            entries: DMatrix::identity(n_max + 1, n_max + 1),
            hermitian: true,
            unitary: true,
        }
    }

    pub fn n_max(&self) -> usize {
        self.entries.nrows() - 1
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.adjoint(),
            ..*self
        }
    }

    /// Matrix product; stays flagged unitary only when both factors are.
    pub fn compose(&self, rhs: &OperatorMatrix) -> Result<Self> {
        if self.entries.nrows() != rhs.entries.nrows() {
            return Err(Error::DimensionMismatch {
                left: self.n_max(),
                right: rhs.n_max(),
            });
        }
        let mut out = Self::new(&self.entries * &rhs.entries);
        out.unitary = self.unitary && rhs.unitary;
        Ok(out)
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        if v.dim() != self.entries.ncols() {
            return Err(Error::DimensionMismatch {
                left: self.n_max(),
                right: v.n_max(),
            });
        }
        let col = DVector::from_column_slice(v.amps());
        Ok(FockVector::from_amps(
            (&self.entries * col).as_slice().to_vec(),
        ))
    }

    /// ⟨u|O|v⟩
    pub fn sandwich(&self, u: &FockVector, v: &FockVector) -> Result<C64> {
        inner(u, &self.apply(v)?)
    }

    /// max |O - O†|
    pub fn hermiticity_error(&self) -> f64 {
        (&self.entries - self.entries.adjoint())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// max |O†O - I|
    pub fn unitarity_error(&self) -> f64 {
        let n = self.entries.nrows();
        (self.entries.adjoint() * &self.entries - DMatrix::<C64>::identity(n, n))
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

fn lowering_real(n_max: usize) -> DMatrix<f64> {
    assert!(n_max >= 1, "ladder operators need n_max >= 1");
    let d = n_max + 1;
    DMatrix::from_fn(
        d,
        d,
        |i, j| {
            if j == i + 1 {
                (j as f64).sqrt()
            } else {
                0.0
            }
        },
    )
}

fn complexify(m: &DMatrix<f64>) -> DMatrix<C64> {
    m.map(|x| C64::new(x, 0.0))
}

/// (a, a†) truncated at `n_max`.
pub fn ladder(n_max: usize) -> (OperatorMatrix, OperatorMatrix) {
    let a = complexify(&lowering_real(n_max));
    let adag = a.adjoint();
    (OperatorMatrix::new(a), OperatorMatrix::new(adag))
}

pub fn number(n_max: usize) -> OperatorMatrix {
    let d = n_max + 1;
    OperatorMatrix::hermitian(DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            C64::new(i as f64, 0.0)
        } else {
            ZERO
        }
    }))
}

/// x = (a + a†)/√2 and p = i(a† − a)/√2.
pub fn position_momentum(n_max: usize) -> (OperatorMatrix, OperatorMatrix) {
    let (a, adag) = ladder(n_max);
    let x = (a.entries() + adag.entries()) * C64::new(FRAC_1_SQRT_2, 0.0);
    let p = (adag.entries() - a.entries()) * C64::new(0.0, FRAC_1_SQRT_2);
    (OperatorMatrix::hermitian(x), OperatorMatrix::hermitian(p))
}

/// D(α) = exp(α a† − α* a) by Padé scaling-and-squaring.
pub fn displacement(alpha: C64, n_max: usize) -> Result<OperatorMatrix> {
    let (a, adag) = ladder(n_max);
    let generator = adag.entries() * alpha - a.entries() * alpha.conj();
    let d = OperatorMatrix::unitary(generator.exp());
    d.apply(&FockVector::vacuum(n_max))?
        .check_converged(&TruncationCheck::default())?;
    Ok(d)
}

/// S(β) = exp(β a†²/2 − β* a²/2) by Padé scaling-and-squaring.
pub fn squeeze(beta: C64, n_max: usize) -> Result<OperatorMatrix> {
    let (a, adag) = ladder(n_max);
    let a2 = a.entries() * a.entries();
    let adag2 = adag.entries() * adag.entries();
    let generator = adag2 * (beta * 0.5) - a2 * (beta.conj() * 0.5);
    let s = OperatorMatrix::unitary(generator.exp());
    s.apply(&FockVector::vacuum(n_max))?
        .check_converged(&TruncationCheck::default())?;
    Ok(s)
}

/// Real symmetric eigenbasis used to exponentiate a generator.
#[derive(Clone, Debug)]
struct Modes {
    values: DVector<f64>,
    vectors: DMatrix<f64>,
}

impl Modes {
    fn new(m: DMatrix<f64>) -> Self {
        let eig = SymmetricEigen::new(m);
        Self {
            values: eig.eigenvalues,
            vectors: eig.eigenvectors,
        }
    }

    /// V exp(−i s Λ) Vᵀ v
    fn evolve(&self, s: f64, v: &FockVector) -> FockVector {
        let re = DVector::from_iterator(v.dim(), v.amps().iter().map(|c| c.re));
        let im = DVector::from_iterator(v.dim(), v.amps().iter().map(|c| c.im));
        let cre = self.vectors.tr_mul(&re);
        let cim = self.vectors.tr_mul(&im);
        let mut wre = DVector::zeros(v.dim());
        let mut wim = DVector::zeros(v.dim());
        for k in 0..v.dim() {
            let ph = C64::from_polar(1.0, -s * self.values[k]);
            let c = C64::new(cre[k], cim[k]) * ph;
            wre[k] = c.re;
            wim[k] = c.im;
        }
        let ore = &self.vectors * wre;
        let oim = &self.vectors * wim;
        FockVector::from_amps(
            ore.iter()
                .zip(oim.iter())
                .map(|(&r, &i)| C64::new(r, i))
                .collect(),
        )
    }
}

/// Cached machinery for applying D(α) and S(β) to vectors at a fixed truncation.
///
/// Uses α a† − α* a = e^{iθN}·|α|(a† − a)·e^{−iθN} with a† − a = −i√2 p and
/// p = e^{iπN/2} x e^{−iπN/2}, so D(α) only needs the eigenbasis of the
/// truncated x. The squeeze generator reduces the same way to
/// (a†² + a²)/2 rotated by e^{iπN/4}.
#[derive(Clone, Debug)]
pub struct FockSpace {
    n_max: usize,
    position: Modes,
    pair: Modes,
    check: TruncationCheck,
}

impl FockSpace {
    pub fn new(n_max: usize) -> Self {
        Self::with_check(n_max, TruncationCheck::default())
    }

    pub fn with_check(n_max: usize, check: TruncationCheck) -> Self {
        let a = lowering_real(n_max);
        let x = (&a + a.transpose()) * FRAC_1_SQRT_2;
        let a2 = &a * &a;
        let y = (&a2 + a2.transpose()) * 0.5;
        Self {
            n_max,
            position: Modes::new(x),
            pair: Modes::new(y),
            check,
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn truncation(&self) -> &TruncationCheck {
        &self.check
    }

    /// D(α)|v⟩
    pub fn displace(&self, alpha: C64, v: &FockVector) -> FockVector {
        assert_eq!(
            v.n_max(),
            self.n_max,
            "vector truncation differs from space"
        );
        let (r, theta) = alpha.to_polar();
        if r == 0.0 {
            return v.clone();
        }
        let mut w = v.clone();
        w.rotate(-(theta + FRAC_PI_2));
        let mut out = self.position.evolve(SQRT_2 * r, &w);
        out.rotate(theta + FRAC_PI_2);
        out
    }

    /// S(β)|v⟩
    pub fn squeeze(&self, beta: C64, v: &FockVector) -> FockVector {
        assert_eq!(
            v.n_max(),
            self.n_max,
            "vector truncation differs from space"
        );
        let (r, phi) = beta.to_polar();
        if r == 0.0 {
            return v.clone();
        }
        let turn = 0.5 * phi + FRAC_PI_4;
        let mut w = v.clone();
        w.rotate(-turn);
        let mut out = self.pair.evolve(r, &w);
        out.rotate(turn);
        out
    }

    /// D(α)S(β)|v⟩
    pub fn displace_squeeze(&self, alpha: C64, beta: C64, v: &FockVector) -> FockVector {
        self.displace(alpha, &self.squeeze(beta, v))
    }

    /// Ehrenfest position mean Re⟨ψ|x|ψ⟩ without building the matrix.
    pub fn mean_x(v: &FockVector) -> f64 {
        let amps = v.amps();
        let mut acc = 0.0;
        for n in 0..v.n_max() {
            acc += (amps[n].conj() * amps[n + 1]).re * ((n + 1) as f64).sqrt();
        }
        SQRT_2 * acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn max_diff(u: &FockVector, v: &FockVector) -> f64 {
        u.amps()
            .iter()
            .zip(v.amps())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn expectation(op: &OperatorMatrix, v: &FockVector) -> C64 {
        op.sandwich(v, v).unwrap()
    }

    #[test]
    fn ladder_smallest_truncation() {
        let (a, adag) = ladder(1);
        assert_eq!(a.entries()[(0, 1)], ONE);
        assert_eq!(a.entries()[(1, 0)], ZERO);
        assert_eq!(a.entries()[(0, 0)], ZERO);
        assert_eq!(adag.entries()[(1, 0)], ONE);
    }

    #[test]
    fn lowering_annihilates_vacuum() {
        let (a, _) = ladder(10);
        let out = a.apply(&FockVector::vacuum(10)).unwrap();
        assert_eq!(out.norm_sqr(), 0.0);
        assert_eq!(FockVector::vacuum(10).lowered().norm_sqr(), 0.0);
    }

    #[test]
    fn number_operator_eigenvalue() {
        let (a, adag) = ladder(8);
        let n = adag.compose(&a).unwrap();
        let five = FockVector::number_state(5, 8);
        let out = n.apply(&five).unwrap();
        assert!((out.amps()[5] - c(5.0, 0.0)).norm() < 1e-14);
        assert!((out.norm_sqr() - 25.0).abs() < 1e-12);
        let exact = number(8).apply(&five).unwrap();
        assert_eq!(exact.amps()[5], c(5.0, 0.0));
    }

    #[test]
    fn commutator_is_identity_below_truncation() {
        let n_max = 12;
        let (a, adag) = ladder(n_max);
        let comm = a.entries() * adag.entries() - adag.entries() * a.entries();
        for i in 0..n_max {
            for j in 0..n_max {
                let want = if i == j { ONE } else { ZERO };
                // √n·√n rounds, so allow a few ulps
                assert!((comm[(i, j)] - want).norm() < 1e-14, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn vacuum_position_moments() {
        let (x, p) = position_momentum(20);
        let vac = FockVector::vacuum(20);
        assert!(expectation(&x, &vac).norm() < 1e-15);
        let x2 = x.compose(&x).unwrap();
        assert!((expectation(&x2, &vac) - c(0.5, 0.0)).norm() < 1e-14);
        let p2 = p.compose(&p).unwrap();
        assert!((expectation(&p2, &vac) - c(0.5, 0.0)).norm() < 1e-14);
        assert!(x.hermiticity_error() == 0.0 && p.hermiticity_error() == 0.0);
    }

    #[test]
    fn displaced_vacuum_has_unit_mean_position() {
        let n_max = 64;
        let d = displacement(c(FRAC_1_SQRT_2, 0.0), n_max).unwrap();
        let psi = d.apply(&FockVector::vacuum(n_max)).unwrap();
        let (x, _) = position_momentum(n_max);
        assert!((expectation(&x, &psi).re - 1.0).abs() < 1e-12);
        assert!((FockSpace::mean_x(&psi) - 1.0).abs() < 1e-12);
        assert!((psi.mean_number() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn zero_parameters_give_identity() {
        let id = OperatorMatrix::identity(16);
        let d = displacement(ZERO, 16).unwrap();
        let s = squeeze(ZERO, 16).unwrap();
        assert!((d.entries() - id.entries())
            .iter()
            .all(|z| z.norm() < 1e-15));
        assert!((s.entries() - id.entries())
            .iter()
            .all(|z| z.norm() < 1e-15));
        assert!(d.is_unitary() && s.is_unitary());
    }

    #[test]
    fn coherent_state_matches_closed_form() {
        // |α⟩ = e^{-|α|²/2} Σ α^n/√n! |n⟩
        let n_max = 64;
        let alpha = c(0.7, 0.2);
        let psi = displacement(alpha, n_max)
            .unwrap()
            .apply(&FockVector::vacuum(n_max))
            .unwrap();
        let mut term = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
        for n in 0..=n_max {
            if n > 0 {
                term *= alpha / (n as f64).sqrt();
            }
            assert!((psi.amps()[n] - term).norm() < 1e-10, "level {n}");
        }
    }

    #[test]
    fn squeezed_vacuum_is_even_with_stretched_variance() {
        let n_max = 64;
        let r = 0.1;
        let psi = squeeze(c(r, 0.0), n_max)
            .unwrap()
            .apply(&FockVector::vacuum(n_max))
            .unwrap();
        for n in (1..=n_max).step_by(2) {
            assert!(psi.amps()[n].norm() < 1e-12);
        }
        let (x, _) = position_momentum(n_max);
        let x2 = x.compose(&x).unwrap();
        let want = (2.0 * r).exp() / 2.0;
        assert!((expectation(&x2, &psi).re - want).abs() < 1e-9);
    }

    #[test]
    fn squeezed_vacuum_matches_closed_form() {
        // S(β)|0⟩ = (cosh r)^{-1/2} Σ (e^{iφ} tanh r / 2)^m √(2m)!/m! |2m⟩
        let n_max = 60;
        let beta = C64::from_polar(0.6, 0.9);
        let (r, phi) = beta.to_polar();
        let space = FockSpace::new(n_max);
        let psi = space.squeeze(beta, &FockVector::vacuum(n_max));
        let t = C64::from_polar(r.tanh(), phi);
        let mut amp = C64::new(r.cosh().powf(-0.5), 0.0);
        // levels near the truncation edge feel the cut generator
        for m in 0..=20 {
            if m > 0 {
                let k = m as f64;
                amp *= t * 0.5 * ((2.0 * k) * (2.0 * k - 1.0)).sqrt() / k;
            }
            assert!((psi.amps()[2 * m] - amp).norm() < 1e-10, "level {}", 2 * m);
        }
    }

    #[test]
    fn spectral_route_matches_pade_route() {
        let n_max = 48;
        let space = FockSpace::new(n_max);
        let alpha = C64::from_polar(0.9, -2.1);
        let beta = C64::from_polar(0.35, 1.3);
        let mut v = FockVector::zeros(n_max);
        for (n, amp) in v.amps_mut().iter_mut().enumerate().take(7) {
            *amp = C64::new(1.0 / (1.0 + n as f64), 0.3 * n as f64);
        }
        v.normalize();
        let d = displacement(alpha, n_max).unwrap();
        let s = squeeze(beta, n_max).unwrap();
        assert!(max_diff(&space.displace(alpha, &v), &d.apply(&v).unwrap()) < 1e-12);
        assert!(max_diff(&space.squeeze(beta, &v), &s.apply(&v).unwrap()) < 1e-12);
    }

    #[test]
    fn constructed_unitaries_are_unitary() {
        let n_max = 40;
        let d = displacement(C64::from_polar(0.8, 0.4), n_max).unwrap();
        let s = squeeze(C64::from_polar(0.3, -1.0), n_max).unwrap();
        // the truncated generators are exactly anti-hermitian, so the
        // exponentials are unitary on the whole truncated space
        assert!(d.unitarity_error() < 1e-10);
        assert!(s.unitarity_error() < 1e-10);
    }

    #[test]
    fn truncation_error_is_reported() {
        // |α|² = 16 puts the coherent peak far above n_max = 10
        let err = displacement(c(4.0, 0.0), 10).unwrap_err();
        assert!(matches!(err, Error::Truncation { .. }));
    }

    #[test]
    fn inner_products_and_mismatch() {
        let two = FockVector::number_state(2, 5);
        let three = FockVector::number_state(3, 5);
        assert_eq!(inner(&two, &three).unwrap(), ZERO);
        assert_eq!(inner(&two, &two).unwrap(), ONE);
        let other = FockVector::vacuum(6);
        assert!(matches!(
            inner(&two, &other),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            OperatorMatrix::identity(4).apply(&two),
            Err(Error::DimensionMismatch { .. })
        ));
        let v = FockVector::from_amps(vec![c(0.6, 0.0), c(0.0, 0.8), ZERO, ZERO, ZERO, ZERO]);
        assert_eq!(OperatorMatrix::identity(5).apply(&v).unwrap(), v);
        assert!((inner(&v, &v).unwrap() - ONE).norm() < 1e-15);
    }

    #[test]
    fn padding_preserves_amplitudes() {
        let v = FockVector::from_amps(vec![c(0.6, 0.0), c(0.0, 0.8)]);
        let w = v.padded(4).unwrap();
        assert_eq!(w.n_max(), 4);
        assert_eq!(&w.amps()[..2], v.amps());
        assert!(w.padded(2).is_err());
    }

    #[test]
    fn benchmark_gaussian_is_truncation_robust() {
        let alpha = c(FRAC_1_SQRT_2, 0.0);
        let beta = c(0.1, 0.0);
        let small = FockSpace::new(127);
        let large = FockSpace::new(255);
        let a = small.displace_squeeze(alpha, beta, &FockVector::vacuum(127));
        let b = large.displace_squeeze(alpha, beta, &FockVector::vacuum(255));
        assert!((a.norm_sqr() - 1.0).abs() < 1e-10);
        a.check_converged(small.truncation()).unwrap();
        assert!(max_diff(&a.padded(255).unwrap(), &b) < 1e-10);
    }
}
