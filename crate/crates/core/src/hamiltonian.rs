//! The quartic model H = p²/2 + a x²/2 + λ x⁴/4 and the classical Hamiltonian
//! 𝓗(J, φ) = ⟨ψ|H|ψ⟩ of a trial family.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{position_momentum, FockSpace, FockVector, OperatorMatrix};
use crate::trial::{build_state, invert_coordinates, CanonicalPoint, TrialFamily};

pub const GRADIENT_STEP: f64 = 1e-5;

/// How 𝓗 is evaluated.
///
/// `Sandwich` builds ψ in the truncated basis and contracts it with the cached
/// H matrix. `Transformed` instead conjugates the ladder operator through the
/// Gaussian part, A = (DS)† a (DS) = a cosh r + a† e^{iφ} sinh r + α, and takes
/// the moments of H(A, A†) directly in |ξ⟩. Both agree to truncation accuracy;
/// the second is much cheaper and is what the integrator uses by default.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Sandwich,
    #[default]
    Transformed,
}

#[derive(Clone, Debug)]
pub struct QuarticModel {
    a: f64,
    lambda: f64,
    space: FockSpace,
    h_matrix: OperatorMatrix,
    h_real: DMatrix<f64>,
}

impl QuarticModel {
    pub fn new(a: f64, lambda: f64, n_max: usize) -> Self {
        let (x, p) = position_momentum(n_max);
        let x2 = x.entries() * x.entries();
        let x4 = &x2 * &x2;
        let p2 = p.entries() * p.entries();
        let h = p2 * C64::new(0.5, 0.0)
            + x2 * C64::new(0.5 * a, 0.0)
            + x4 * C64::new(0.25 * lambda, 0.0);
        let h_real = h.map(|z| z.re);
        Self {
            a,
            lambda,
            space: FockSpace::new(n_max),
            h_matrix: OperatorMatrix::new(h),
            h_real,
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn n_max(&self) -> usize {
        self.space.n_max()
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn h_matrix(&self) -> &OperatorMatrix {
        &self.h_matrix
    }

    /// H is real symmetric in the number basis.
    pub fn h_real(&self) -> &DMatrix<f64> {
        &self.h_real
    }

    /// ⟨ψ|H|ψ⟩; errors if the imaginary part is not negligible.
    pub fn energy(&self, psi: &FockVector) -> Result<f64> {
        if psi.n_max() != self.n_max() {
            return Err(Error::DimensionMismatch {
                left: self.n_max(),
                right: psi.n_max(),
            });
        }
        let re = DVector::from_iterator(psi.dim(), psi.amps().iter().map(|c| c.re));
        let im = DVector::from_iterator(psi.dim(), psi.amps().iter().map(|c| c.im));
        let h_re = &self.h_real * &re;
        let h_im = &self.h_real * &im;
        let value = re.dot(&h_re) + im.dot(&h_im);
        let imag = re.dot(&h_im) - im.dot(&h_re);
        if imag.abs() > 1e-10 * value.abs().max(1.0) {
            return Err(Error::NonRealExpectation { imag });
        }
        Ok(value)
    }
}

/// 𝓗 = Re⟨ψ|H|ψ⟩ with ψ from [`build_state`].
pub fn evaluate(model: &QuarticModel, family: &TrialFamily, pt: &CanonicalPoint) -> Result<f64> {
    let psi = build_state(family, pt, model.space())?;
    model.energy(&psi)
}

/// 𝓗 from moments of the conjugated ladder operator in |ξ⟩.
pub fn evaluate_transformed(
    model: &QuarticModel,
    family: &TrialFamily,
    pt: &CanonicalPoint,
) -> Result<f64> {
    let raw = invert_coordinates(family, pt)?;
    let xi = raw.xi.vector(model.n_max())?.padded(model.n_max() + 2)?;
    let (r, phi) = raw.beta.to_polar();
    let ch = r.cosh();
    let sh = C64::from_polar(r.sinh(), phi);
    let alpha = raw.alpha;

    // A v and A† v
    let lower = |v: &FockVector| {
        let (lo, hi) = (v.lowered(), v.raised());
        combine(&lo, C64::new(ch, 0.0), &hi, sh, v, alpha)
    };
    let raise = |v: &FockVector| {
        let (lo, hi) = (v.lowered(), v.raised());
        combine(&hi, C64::new(ch, 0.0), &lo, sh.conj(), v, alpha.conj())
    };

    let a_xi = lower(&xi);
    let ad_xi = raise(&xi);
    let x_xi = sum_scaled(
        &a_xi,
        &ad_xi,
        C64::new(FRAC_1_SQRT_2, 0.0),
        C64::new(FRAC_1_SQRT_2, 0.0),
    );
    let p_xi = sum_scaled(
        &a_xi,
        &ad_xi,
        C64::new(0.0, -FRAC_1_SQRT_2),
        C64::new(0.0, FRAC_1_SQRT_2),
    );
    let xx_xi = sum_scaled(
        &lower(&x_xi),
        &raise(&x_xi),
        C64::new(FRAC_1_SQRT_2, 0.0),
        C64::new(FRAC_1_SQRT_2, 0.0),
    );
    Ok(0.5 * p_xi.norm_sqr()
        + 0.5 * model.a * x_xi.norm_sqr()
        + 0.25 * model.lambda * xx_xi.norm_sqr())
}

// s1·u + s2·w + s3·v
fn combine(
    u: &FockVector,
    s1: C64,
    w: &FockVector,
    s2: C64,
    v: &FockVector,
    s3: C64,
) -> FockVector {
    FockVector::from_amps(
        u.amps()
            .iter()
            .zip(w.amps())
            .zip(v.amps())
            .map(|((u, w), v)| s1 * u + s2 * w + s3 * v)
            .collect(),
    )
}

fn sum_scaled(u: &FockVector, w: &FockVector, s1: C64, s2: C64) -> FockVector {
    FockVector::from_amps(
        u.amps()
            .iter()
            .zip(w.amps())
            .map(|(u, w)| s1 * u + s2 * w)
            .collect(),
    )
}

pub fn evaluate_with(
    model: &QuarticModel,
    family: &TrialFamily,
    pt: &CanonicalPoint,
    route: Route,
) -> Result<f64> {
    match route {
        Route::Sandwich => evaluate(model, family, pt),
        Route::Transformed => evaluate_transformed(model, family, pt),
    }
}

/// Central-difference gradient in the Cartesian chart, flattened as
/// `[∂𝓗/∂Q₁.., ∂𝓗/∂P₁..]`. Only coordinates with `active[i]` set for their
/// pair are differentiated; the rest are reported as zero.
pub fn gradient_flat(
    model: &QuarticModel,
    family: &TrialFamily,
    y: &[f64],
    route: Route,
    h: f64,
    active: Option<&[bool]>,
) -> Result<Vec<f64>> {
    let n = y.len() / 2;
    let mut out = vec![0.0; y.len()];
    let mut probe = y.to_vec();
    for k in 0..y.len() {
        if let Some(mask) = active {
            if !mask[k % n] {
                continue;
            }
        }
        let step = h * y[k].abs().max(1.0);
        probe[k] = y[k] + step;
        let up = evaluate_with(model, family, &CanonicalPoint::from_flat(&probe), route)?;
        probe[k] = y[k] - step;
        let down = evaluate_with(model, family, &CanonicalPoint::from_flat(&probe), route)?;
        probe[k] = y[k];
        out[k] = (up - down) / (2.0 * step);
    }
    Ok(out)
}

/// `(∂𝓗/∂Q_i, ∂𝓗/∂P_i)` per canonical pair.
pub fn gradient(
    model: &QuarticModel,
    family: &TrialFamily,
    pt: &CanonicalPoint,
    route: Route,
    h: f64,
) -> Result<Vec<(f64, f64)>> {
    let y = pt.to_flat()?;
    let g = gradient_flat(model, family, &y, route, h, None)?;
    let n = y.len() / 2;
    Ok((0..n).map(|i| (g[i], g[n + i])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trial::FamilyKind;

    fn point(j: &[f64], phi: &[f64]) -> CanonicalPoint {
        CanonicalPoint::action_angle(j.to_vec(), phi.to_vec())
    }

    #[test]
    fn model_matrix_is_hermitian() {
        let m = QuarticModel::new(-1.0, 1.0, 40);
        assert!(m.h_matrix().hermiticity_error() < 1e-12);
        assert!(m.h_matrix().entries().iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn vacuum_energy() {
        // ⟨p²⟩/2 + ⟨x²⟩/2 + ⟨x⁴⟩/4 = 1/4 + 1/4 + 3/16
        let m = QuarticModel::new(1.0, 1.0, 127);
        let vac = point(&[0.0, 0.0], &[0.0, 0.0]);
        let g = TrialFamily::new(FamilyKind::G);
        assert!((evaluate(&m, &g, &vac).unwrap() - 0.6875).abs() < 1e-12);
        assert!((evaluate_transformed(&m, &g, &vac).unwrap() - 0.6875).abs() < 1e-12);
    }

    #[test]
    fn harmonic_gaussian_energy_is_linear_in_actions() {
        // ⟨a†a⟩ + ½ = r₁² + sinh² r₂ + ½ = J₁ + 2J₂ + ½
        let m = QuarticModel::new(1.0, 0.0, 127);
        let g = TrialFamily::new(FamilyKind::G);
        for (j, phi) in [
            ([0.5, 0.01], [0.0, 0.0]),
            ([1.3, 0.2], [2.0, -1.0]),
            ([0.1, 0.4], [-0.5, 0.7]),
        ] {
            let pt = point(&j, &phi);
            let want = j[0] + 2.0 * j[1] + 0.5;
            assert!((evaluate(&m, &g, &pt).unwrap() - want).abs() < 1e-10);
            assert!((evaluate_transformed(&m, &g, &pt).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn routes_agree_for_all_families() {
        let m = QuarticModel::new(-1.0, 1.0, 127);
        let cases = [
            (FamilyKind::G, vec![0.6, 0.05], vec![0.3, -0.7]),
            (FamilyKind::F1, vec![0.6, 0.05, 0.2], vec![0.3, -0.7, 1.1]),
            (FamilyKind::F2, vec![0.6, 0.05, 0.2], vec![0.3, -0.7, 1.1]),
            (
                FamilyKind::F3,
                vec![0.6, 0.05, 0.2, 0.1],
                vec![0.3, -0.7, 1.1, 2.0],
            ),
        ];
        for (kind, j, phi) in cases {
            let fam = TrialFamily::new(kind);
            let pt = CanonicalPoint::action_angle(j, phi);
            let a = evaluate(&m, &fam, &pt).unwrap();
            let b = evaluate_transformed(&m, &fam, &pt).unwrap();
            assert!((a - b).abs() < 1e-10, "{kind}: {a} vs {b}");
        }
    }

    #[test]
    fn frozen_extra_pairs_match_gaussian() {
        let m = QuarticModel::new(1.0, 1.0, 127);
        let g = evaluate(&m, &FamilyKind::G.into(), &point(&[0.5, 0.03], &[0.2, 0.4])).unwrap();
        let f1 = evaluate(
            &m,
            &FamilyKind::F1.into(),
            &point(&[0.5, 0.03, 0.0], &[0.2, 0.4, 0.0]),
        )
        .unwrap();
        assert!((g - f1).abs() < 1e-12);
    }

    #[test]
    fn harmonic_gradient_near_origin() {
        // 𝓗 = (Q₁² + P₁²)/2 + (Q₂² + P₂²) + ½
        let m = QuarticModel::new(1.0, 0.0, 127);
        let g = TrialFamily::new(FamilyKind::G);
        let pt = CanonicalPoint::cartesian(vec![0.4, 0.01], vec![-0.2, 0.02]);
        for route in [Route::Sandwich, Route::Transformed] {
            let grad = gradient(&m, &g, &pt, route, GRADIENT_STEP).unwrap();
            assert!((grad[0].0 - 0.4).abs() < 1e-6);
            assert!((grad[0].1 + 0.2).abs() < 1e-6);
            assert!((grad[1].0 - 0.02).abs() < 1e-6);
            assert!((grad[1].1 - 0.04).abs() < 1e-6);
        }
    }

    #[test]
    fn harmonic_gradient_is_odd() {
        let m = QuarticModel::new(1.0, 0.0, 127);
        let g = TrialFamily::new(FamilyKind::G);
        let z = vec![0.3, 0.1, -0.5, 0.05];
        let minus: Vec<f64> = z.iter().map(|v| -v).collect();
        let gp = gradient_flat(&m, &g, &z, Route::Transformed, GRADIENT_STEP, None).unwrap();
        let gm = gradient_flat(&m, &g, &minus, Route::Transformed, GRADIENT_STEP, None).unwrap();
        for (a, b) in gp.iter().zip(&gm) {
            assert!((a + b).abs() < 1e-9);
        }
    }

    #[test]
    fn harmonic_gaussian_is_angle_independent() {
        let m = QuarticModel::new(1.0, 0.0, 127);
        let g = TrialFamily::new(FamilyKind::G);
        let h = 1e-5;
        for k in 0..2 {
            let mut phi = [0.4, -1.2];
            phi[k] += h;
            let up = evaluate(&m, &g, &point(&[0.7, 0.1], &phi)).unwrap();
            phi[k] -= 2.0 * h;
            let down = evaluate(&m, &g, &point(&[0.7, 0.1], &phi)).unwrap();
            assert!(((up - down) / (2.0 * h)).abs() < 1e-8);
        }
    }

    #[test]
    fn gradient_step_halving_is_second_order() {
        let m = QuarticModel::new(-1.0, 1.0, 127);
        let fam = TrialFamily::new(FamilyKind::F1);
        let y = [0.9, 0.2, 0.1, 0.3, 0.05, -0.2];
        let exact = gradient_flat(&m, &fam, &y, Route::Transformed, 1e-4, None).unwrap();
        let coarse = gradient_flat(&m, &fam, &y, Route::Transformed, 4e-2, None).unwrap();
        let fine = gradient_flat(&m, &fam, &y, Route::Transformed, 2e-2, None).unwrap();
        for k in 0..y.len() {
            let ec = (coarse[k] - exact[k]).abs();
            let ef = (fine[k] - exact[k]).abs();
            if ec > 1e-9 {
                let order = (ec / ef).log2();
                assert!(order > 1.8, "component {k}: order {order}");
            }
        }
    }

    #[test]
    fn global_phase_of_xi_leaves_energy_unchanged() {
        // multiplying every c_m (c₀ included) by e^{iθ} is a global phase
        let m = QuarticModel::new(-1.0, 1.0, 127);
        let fam = TrialFamily::new(FamilyKind::F3);
        let pt = point(&[0.6, 0.05, 0.2, 0.1], &[0.3, -0.7, 1.1, 2.0]);
        let raw = invert_coordinates(&fam, &pt).unwrap();
        let mut xi = raw.xi.vector(127).unwrap();
        xi.scale(C64::from_polar(1.0, 0.37));
        let psi = m.space().displace_squeeze(raw.alpha, raw.beta, &xi);
        let rotated = m.energy(&psi).unwrap();
        assert!((rotated - evaluate(&m, &fam, &pt).unwrap()).abs() < 1e-12);
    }
}
