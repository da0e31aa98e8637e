//! Squared overlaps, mean position and time averages.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::fock::{FockSpace, FockVector};
use crate::trial::FamilyKind;

/// |⟨ψ_exact|ψ_trial⟩|², zero-padding whichever vector is shorter.
pub fn squared_overlap(psi_exact: &FockVector, psi_trial: &FockVector) -> Result<f64> {
    let n = psi_exact.n_max().max(psi_trial.n_max());
    let u = psi_exact.padded(n)?;
    let v = psi_trial.padded(n)?;
    Ok(u.inner(&v)?.norm_sqr())
}

/// Re⟨ψ|x|ψ⟩
pub fn mean_x(psi: &FockVector) -> f64 {
    FockSpace::mean_x(psi)
}

/// Trapezoidal average over the sampled interval. A single sample is its own
/// average.
pub fn time_average(series: &[f64], times: &[f64]) -> Result<f64> {
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    if series.len() != times.len() {
        return Err(Error::DimensionMismatch {
            left: series.len(),
            right: times.len(),
        });
    }
    if series.len() == 1 {
        return Ok(series[0]);
    }
    let span = times[times.len() - 1] - times[0];
    let dt = span / (times.len() - 1) as f64;
    let uniform = times
        .windows(2)
        .all(|w| ((w[1] - w[0]) - dt).abs() <= 1e-9 * dt.abs().max(1.0));
    if span.is_nan() || span <= 0.0 || !uniform {
        return Err(Error::InvalidArgument(
            "time average needs uniform increasing samples".into(),
        ));
    }
    let interior: f64 = series[1..series.len() - 1].iter().sum();
    Ok((0.5 * (series[0] + series[series.len() - 1]) + interior) * dt / span)
}

/// Root-mean-square difference of two equally sampled series.
pub fn rms_deviation(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::EmptySeries);
    }
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok((a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>() / a.len() as f64).sqrt())
}

/// Everything reported for one run.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ObservableSeries {
    pub times: Vec<f64>,
    pub overlap: BTreeMap<FamilyKind, Vec<f64>>,
    pub x_exact: Vec<f64>,
    pub x_trial: BTreeMap<FamilyKind, Vec<f64>>,
    pub w_bar: BTreeMap<FamilyKind, f64>,
    pub energy_drift: BTreeMap<FamilyKind, f64>,
}

impl ObservableSeries {
    pub fn families(&self) -> Vec<FamilyKind> {
        self.overlap.keys().copied().collect()
    }

    /// RMS of ⟨x⟩_trial − ⟨x⟩_exact.
    pub fn x_rms_deviation(&self, kind: FamilyKind) -> Result<f64> {
        let x = self
            .x_trial
            .get(&kind)
            .ok_or_else(|| Error::InvalidArgument(format!("family {kind} not in run")))?;
        rms_deviation(x, &self.x_exact)
    }
}
