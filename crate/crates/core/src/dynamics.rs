//! Hamilton equations for the trial-family coordinates.
//!
//! With the canonical one-form −Σ J_i dφ_i the equations read
//! φ̇_i = −∂𝓗/∂J_i, J̇_i = ∂𝓗/∂φ_i. The Cartesian pairs
//! Q = √(2J) cos φ, P = √(2J) sin φ then obey the usual
//! Q̇ = ∂𝓗/∂P, Ṗ = −∂𝓗/∂Q, and that is the form integrated here.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::hamiltonian::{evaluate_with, gradient_flat, QuarticModel, Route, GRADIENT_STEP};
use crate::trial::{build_state, CanonicalPoint, TrialFamily};

// Dormand–Prince 5(4) tableau; the system is autonomous so the nodes are unused
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegratorSettings {
    pub atol: f64,
    pub rtol: f64,
    pub route: Route,
    pub gradient_step: f64,
    pub initial_step: f64,
    pub min_step: f64,
    pub max_steps: usize,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self {
            atol: 1e-10,
            rtol: 1e-10,
            route: Route::Transformed,
            gradient_step: GRADIENT_STEP,
            initial_step: 1e-3,
            min_step: 1e-12,
            max_steps: 10_000_000,
        }
    }
}

/// Counters from one integration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// Adaptive Dormand–Prince integration of an autonomous system `ẏ = f(y)`,
/// landing exactly on `t = k·dt_out` for `k = 0..=round(t_end/dt_out)`.
/// `sample` is called at every output time, including `t = 0`.
pub fn dormand_prince<F, S>(
    mut f: F,
    y0: &[f64],
    t_end: f64,
    dt_out: f64,
    settings: &IntegratorSettings,
    mut sample: S,
) -> Result<StepStats>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
    S: FnMut(f64, &[f64]) -> Result<()>,
{
    if !(t_end > 0.0 && dt_out > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need t_end > 0 and dt_out > 0, got {t_end} and {dt_out}"
        )));
    }
    let n_out = (t_end / dt_out).round() as usize;
    let dim = y0.len();
    let mut stats = StepStats::default();
    let mut y = y0.to_vec();
    let mut t = 0.0;
    let mut h = settings.initial_step.min(dt_out);
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; dim]; 7];
    k[0] = f(&y)?;
    stats.evaluations += 1;
    sample(0.0, &y)?;

    let mut stage = vec![0.0; dim];
    for out in 1..=n_out {
        let t_target = out as f64 * dt_out;
        while t < t_target {
            if stats.accepted + stats.rejected >= settings.max_steps {
                return Err(Error::StepFailure { t, step: h });
            }
            let remaining = t_target - t;
            let clipped = h >= remaining;
            let step = if clipped { remaining } else { h };

            for s in 1..7 {
                for i in 0..dim {
                    let mut acc = 0.0;
                    for (j, kj) in k.iter().enumerate().take(s) {
                        acc += A[s][j] * kj[i];
                    }
                    stage[i] = y[i] + step * acc;
                }
                k[s] = f(&stage)?;
                stats.evaluations += 1;
            }
            // stage 7 is evaluated at the fifth-order solution
            let y_new = stage.clone();
            let mut err = 0.0;
            for i in 0..dim {
                let e: f64 = step * (0..7).map(|s| E[s] * k[s][i]).sum::<f64>();
                let scale = settings.atol + settings.rtol * y[i].abs().max(y_new[i].abs());
                err += (e / scale).powi(2);
            }
            let err = (err / dim as f64).sqrt();
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if err <= 1.0 {
                stats.accepted += 1;
                t = if clipped { t_target } else { t + step };
                y = y_new;
                k[0] = k[6].clone();
                // a clipped step says nothing about the natural step size
                if !clipped || factor < 1.0 {
                    h = step * factor;
                }
            } else {
                stats.rejected += 1;
                h = step * factor.min(1.0);
            }
            if h < settings.min_step {
                return Err(Error::StepFailure { t, step: h });
            }
        }
        sample(t_target, &y)?;
    }
    Ok(stats)
}

/// Sampled solution of the Hamilton equations for one family.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub family: TrialFamily,
    pub times: Vec<f64>,
    pub points: Vec<CanonicalPoint>,
    pub energies: Vec<f64>,
    pub stats: StepStats,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// max_k |E_k − E_0| / max(1, |E_0|)
    pub fn max_relative_drift(&self) -> f64 {
        let e0 = self.energies[0];
        self.energies
            .iter()
            .map(|e| (e - e0).abs() / e0.abs().max(1.0))
            .fold(0.0, f64::max)
    }

    /// Trial states at every sample, in the model's truncation.
    pub fn states(&self, model: &QuarticModel) -> Result<Vec<FockVector>> {
        self.points
            .iter()
            .map(|pt| build_state(&self.family, pt, model.space()))
            .collect()
    }

    /// Angles with 2π jumps removed along the trajectory.
    pub fn unwrapped_angles(&self) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = Vec::with_capacity(self.len());
        for pt in &self.points {
            let mut phi = pt.angles();
            if let Some(prev) = out.last() {
                for (a, p) in phi.iter_mut().zip(prev) {
                    let turns = ((*p - *a) / std::f64::consts::TAU).round();
                    *a += turns * std::f64::consts::TAU;
                }
            }
            out.push(phi);
        }
        out
    }
}

/// Integrates the Hamilton equations of `family` from `initial` up to `t_end`.
///
/// `active`, when given, masks which canonical pairs evolve; the others stay
/// frozen at their initial values.
pub fn integrate(
    model: &QuarticModel,
    family: &TrialFamily,
    initial: &CanonicalPoint,
    t_end: f64,
    dt_out: f64,
    settings: &IntegratorSettings,
    active: Option<&[bool]>,
) -> Result<Trajectory> {
    if initial.dof() != family.dof() {
        return Err(Error::WrongArity {
            family: family.kind.label(),
            expected: family.dof(),
            got: initial.dof(),
        });
    }
    if let Some(mask) = active {
        if mask.len() != family.dof() {
            return Err(Error::InvalidArgument(format!(
                "active mask has {} entries for {} pairs",
                mask.len(),
                family.dof()
            )));
        }
    }
    let y0 = initial.to_flat()?;
    let n = family.dof();
    let field = |y: &[f64]| -> Result<Vec<f64>> {
        let g = gradient_flat(
            model,
            family,
            y,
            settings.route,
            settings.gradient_step,
            active,
        )?;
        let mut dy = vec![0.0; 2 * n];
        for i in 0..n {
            dy[i] = g[n + i];
            dy[n + i] = -g[i];
        }
        Ok(dy)
    };

    let capacity = (t_end / dt_out).round() as usize + 1;
    let mut times = Vec::with_capacity(capacity);
    let mut points = Vec::with_capacity(capacity);
    let mut energies = Vec::with_capacity(capacity);
    let stats = dormand_prince(field, &y0, t_end, dt_out, settings, |t, y| {
        let pt = CanonicalPoint::from_flat(y);
        energies.push(evaluate_with(model, family, &pt, settings.route)?);
        times.push(t);
        points.push(pt);
        Ok(())
    })?;
    Ok(Trajectory {
        family: *family,
        times,
        points,
        energies,
        stats,
    })
}
