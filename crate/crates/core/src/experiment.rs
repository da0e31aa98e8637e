//! Benchmark runner: configuration, the full exact-vs-variational comparison,
//! convergence sweeps and the CSV/JSON artifacts.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{integrate, IntegratorSettings, Trajectory};
use crate::error::{Error, Result};
use crate::exact::SpectralPropagator;
use crate::fock::FockVector;
use crate::hamiltonian::QuarticModel;
use crate::observables::{mean_x, squared_overlap, time_average, ObservableSeries};
use crate::trial::{CanonicalPoint, FamilyKind, TrialFamily};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub a: f64,
    pub lambda: f64,
    /// `[re, im]`
    pub alpha0: C64,
    /// `[re, im]`
    pub beta0: C64,
    pub families: Vec<FamilyKind>,
    pub t_end: f64,
    pub dt_out: f64,
    pub n_max_var: usize,
    pub n_max_exact: usize,
    pub atol: f64,
    pub rtol: f64,
    pub output_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::benchmark(-1.0)
    }
}

impl ExperimentConfig {
    /// λ = 1, α₀ = 1/√2, β₀ = 0.1, all four families over 20 time units.
    pub fn benchmark(a: f64) -> Self {
        Self {
            a,
            lambda: 1.0,
            alpha0: C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            beta0: C64::new(0.1, 0.0),
            families: FamilyKind::ALL.to_vec(),
            t_end: 20.0,
            dt_out: 0.01,
            n_max_var: 127,
            n_max_exact: 255,
            atol: 1e-10,
            rtol: 1e-10,
            output_dir: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if !(self.a.is_finite() && self.lambda.is_finite()) {
            return fail("a and lambda must be finite".into());
        }
        if self.lambda < 0.0 || (self.lambda == 0.0 && self.a <= 0.0) {
            return fail(format!(
                "H is unbounded below for a = {}, lambda = {}",
                self.a, self.lambda
            ));
        }
        if !(self.t_end > 0.0 && self.dt_out > 0.0 && self.dt_out <= self.t_end) {
            return fail("need 0 < dt_out <= t_end".into());
        }
        let steps = self.t_end / self.dt_out;
        if (steps - steps.round()).abs() > 1e-9 * steps {
            return fail("t_end must be a whole multiple of dt_out".into());
        }
        if self.families.is_empty() {
            return fail("no trial families selected".into());
        }
        let mut seen = self.families.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.families.len() {
            return fail("duplicate trial family".into());
        }
        if self.n_max_var < 16 {
            return fail("n_max_var must be at least 16".into());
        }
        if self.n_max_exact <= self.n_max_var {
            return fail("n_max_exact must exceed n_max_var".into());
        }
        if !(self.atol > 0.0 && self.rtol > 0.0) {
            return fail("integrator tolerances must be positive".into());
        }
        Ok(())
    }

    pub fn integrator(&self) -> IntegratorSettings {
        IntegratorSettings {
            atol: self.atol,
            rtol: self.rtol,
            ..Default::default()
        }
    }

    /// The shared Gaussian start expressed in the family's Cartesian chart;
    /// every non-Gaussian pair starts at Q = P = 0.
    pub fn initial_point(&self, kind: FamilyKind) -> CanonicalPoint {
        let z1 = self.alpha0 * std::f64::consts::SQRT_2;
        let (r, phi) = self.beta0.to_polar();
        let z2 = C64::from_polar(r.sinh(), phi);
        let mut q = vec![0.0; kind.dof()];
        let mut p = vec![0.0; kind.dof()];
        q[0] = z1.re;
        p[0] = z1.im;
        q[1] = z2.re;
        p[1] = z2.im;
        CanonicalPoint::cartesian(q, p)
    }
}

/// Conservation diagnostics of the exact reference.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ExactDiagnostics {
    pub max_norm_drift: f64,
    pub max_energy_drift: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub a: f64,
    #[serde(rename = "W_bar")]
    pub w_bar: BTreeMap<String, f64>,
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub config: ExperimentConfig,
    pub series: ObservableSeries,
    pub trajectories: BTreeMap<FamilyKind, Trajectory>,
    pub exact: ExactDiagnostics,
}

impl RunOutput {
    pub fn summary(&self) -> Summary {
        Summary {
            a: self.config.a,
            w_bar: self
                .series
                .w_bar
                .iter()
                .map(|(k, v)| (k.label().to_string(), *v))
                .collect(),
        }
    }
}

/// Exact states at every output time plus conservation checks.
pub fn exact_reference(
    config: &ExperimentConfig,
) -> Result<(Vec<f64>, Vec<FockVector>, ExactDiagnostics)> {
    let model = QuarticModel::new(config.a, config.lambda, config.n_max_exact);
    let prop = SpectralPropagator::diagonalize(&model)?;
    let psi0 = model.space().displace_squeeze(
        config.alpha0,
        config.beta0,
        &FockVector::vacuum(config.n_max_exact),
    );
    psi0.check_converged(model.space().truncation())?;
    let e0 = model.energy(&psi0)?;
    let evolution = prop.evolution(&psi0)?;
    let n_out = (config.t_end / config.dt_out).round() as usize;
    let times: Vec<f64> = (0..=n_out).map(|k| k as f64 * config.dt_out).collect();
    let mut diag = ExactDiagnostics::default();
    let mut states = Vec::with_capacity(times.len());
    for &t in &times {
        let psi = evolution.at(t);
        diag.max_norm_drift = diag.max_norm_drift.max((psi.norm_sqr() - 1.0).abs());
        let e = model.energy(&psi)?;
        diag.max_energy_drift = diag.max_energy_drift.max((e - e0).abs());
        states.push(psi);
    }
    Ok((times, states, diag))
}

/// Trajectory, W(t) and ⟨x(t)⟩ of one family.
pub type FamilyRun = (Trajectory, Vec<f64>, Vec<f64>);

/// Integrates one family and compares it with the exact states.
pub fn run_family(
    config: &ExperimentConfig,
    model: &QuarticModel,
    family: &TrialFamily,
    exact: &[FockVector],
) -> Result<FamilyRun> {
    let start = config.initial_point(family.kind);
    let traj = integrate(
        model,
        family,
        &start,
        config.t_end,
        config.dt_out,
        &config.integrator(),
        None,
    )?;
    let states = traj.states(model)?;
    let mut w = Vec::with_capacity(states.len());
    let mut x = Vec::with_capacity(states.len());
    for (psi, reference) in states.iter().zip(exact) {
        w.push(squared_overlap(reference, psi)?);
        x.push(mean_x(psi));
    }
    Ok((traj, w, x))
}

/// Full benchmark: exact reference plus every configured family, the latter
/// in parallel.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    config.validate()?;
    let (times, exact, diag) = exact_reference(config)?;
    let model = QuarticModel::new(config.a, config.lambda, config.n_max_var);

    let results: Vec<(FamilyKind, Result<FamilyRun>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = config
            .families
            .iter()
            .map(|&kind| {
                let (model, exact) = (&model, &exact);
                let handle =
                    scope.spawn(move || run_family(config, model, &TrialFamily::new(kind), exact));
                (kind, handle)
            })
            .collect();
        handles
            .into_iter()
            .map(|(kind, h)| (kind, h.join().expect("family worker panicked")))
            .collect()
    });

    let mut series = ObservableSeries {
        x_exact: exact.iter().map(mean_x).collect(),
        times,
        ..Default::default()
    };
    let mut trajectories = BTreeMap::new();
    for (kind, result) in results {
        let (traj, w, x) = result.map_err(|e| Error::InFamily {
            family: kind,
            source: Box::new(e),
        })?;
        series.w_bar.insert(kind, time_average(&w, &series.times)?);
        series.energy_drift.insert(kind, traj.max_relative_drift());
        series.overlap.insert(kind, w);
        series.x_trial.insert(kind, x);
        trajectories.insert(kind, traj);
    }
    Ok(RunOutput {
        config: config.clone(),
        series,
        trajectories,
        exact: diag,
    })
}

fn fmt15(v: f64) -> String {
    format!("{v:.14e}")
}

/// CSV with columns `t, W_<fam>.., x_exact, x_<fam>..` in G, F1, F2, F3 order.
pub fn to_csv(series: &ObservableSeries) -> String {
    let fams = series.families();
    let mut out = String::from("t");
    for k in &fams {
        write!(out, ",W_{k}").unwrap();
    }
    out.push_str(",x_exact");
    for k in &fams {
        write!(out, ",x_{k}").unwrap();
    }
    out.push('\n');
    for (i, t) in series.times.iter().enumerate() {
        out.push_str(&fmt15(*t));
        for k in &fams {
            write!(out, ",{}", fmt15(series.overlap[k][i])).unwrap();
        }
        write!(out, ",{}", fmt15(series.x_exact[i])).unwrap();
        for k in &fams {
            write!(out, ",{}", fmt15(series.x_trial[k][i])).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn summary_json(summary: &Summary) -> String {
    // serde_json keeps shortest round-trip digits; W̄ is reported to 15
    // significant digits like the CSV
    let w: BTreeMap<&str, f64> = summary
        .w_bar
        .iter()
        .map(|(k, v)| (k.as_str(), fmt15(*v).parse().unwrap()))
        .collect();
    let mut ordered = serde_json::Map::new();
    ordered.insert("a".into(), serde_json::json!(summary.a));
    let mut wmap = serde_json::Map::new();
    for kind in FamilyKind::ALL {
        if let Some(v) = w.get(kind.label()) {
            wmap.insert(kind.label().into(), serde_json::json!(v));
        }
    }
    ordered.insert("W_bar".into(), serde_json::Value::Object(wmap));
    serde_json::to_string_pretty(&serde_json::Value::Object(ordered)).unwrap() + "\n"
}

/// Writes `run_a<±a>.csv` and `summary_a<±a>.json` into `dir`.
pub fn write_outputs(output: &RunOutput, dir: &Path) -> Result<(PathBuf, PathBuf)> {
    std::fs::create_dir_all(dir)?;
    let tag = format!("{:+}", output.config.a);
    let csv = dir.join(format!("run_a{tag}.csv"));
    let json = dir.join(format!("summary_a{tag}.json"));
    std::fs::write(&csv, to_csv(&output.series))?;
    std::fs::write(&json, summary_json(&output.summary()))?;
    Ok((csv, json))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Truncation,
    Tolerance,
    DtOut,
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "truncation" => Ok(SweepAxis::Truncation),
            "tolerance" => Ok(SweepAxis::Tolerance),
            "dt_out" => Ok(SweepAxis::DtOut),
            other => Err(Error::Config(format!(
                "unknown sweep axis {other:?} (expected truncation, tolerance or dt_out)"
            ))),
        }
    }
}

impl SweepAxis {
    /// Doubles both truncations, halves the tolerances or halves dt_out.
    pub fn refine(self, config: &ExperimentConfig) -> ExperimentConfig {
        let mut out = config.clone();
        match self {
            SweepAxis::Truncation => {
                out.n_max_var = 2 * config.n_max_var + 1;
                out.n_max_exact = 2 * config.n_max_exact + 1;
            }
            SweepAxis::Tolerance => {
                out.atol = 0.5 * config.atol;
                out.rtol = 0.5 * config.rtol;
            }
            SweepAxis::DtOut => out.dt_out = 0.5 * config.dt_out,
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub axis: SweepAxis,
    pub baseline: BTreeMap<String, f64>,
    pub refined: BTreeMap<String, f64>,
    pub max_abs_change: f64,
}

impl ConvergenceTable {
    pub fn from_runs(axis: SweepAxis, base: &Summary, refined: &Summary) -> Self {
        let max_abs_change = base
            .w_bar
            .iter()
            .map(|(k, v)| (v - refined.w_bar[k]).abs())
            .fold(0.0, f64::max);
        Self {
            axis,
            baseline: base.w_bar.clone(),
            refined: refined.w_bar.clone(),
            max_abs_change,
        }
    }
}

pub fn sweep(config: &ExperimentConfig, axis: SweepAxis) -> Result<ConvergenceTable> {
    let base = run(config)?.summary();
    let refined = run(&axis.refine(config))?.summary();
    Ok(ConvergenceTable::from_runs(axis, &base, &refined))
}
