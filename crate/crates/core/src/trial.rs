//! Trial families |G⟩, |F₁⟩, |F₂⟩, |F₃⟩ and their canonical coordinates.
//!
//! Every trial state has the form D(α)S(β)|ξ⟩, where |ξ⟩ is a superposition of
//! number states |3m⟩. The canonical pairs are ordered as
//! `(J₁, φ₁)` for the displacement, `(J₂, φ₂)` for the squeeze and then one pair
//! per non-Gaussian degree of freedom of |ξ⟩.
//!
//! Points are usually handled in the Cartesian chart
//! `Q = √(2J) cos φ`, `P = √(2J) sin φ`, in which the complex parameter attached
//! to each pair is simply `(Q + iP)/√2` and nothing is singular at `J = 0`.

use std::f64::consts::SQRT_2;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{FockSpace, FockVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyKind {
    G,
    F1,
    F2,
    F3,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 4] = [
        FamilyKind::G,
        FamilyKind::F1,
        FamilyKind::F2,
        FamilyKind::F3,
    ];

    /// Number of canonical pairs.
    pub fn dof(self) -> usize {
        match self {
            FamilyKind::G => 2,
            FamilyKind::F1 | FamilyKind::F2 => 3,
            FamilyKind::F3 => 4,
        }
    }

    /// Highest `m` in |ξ⟩ = Σ c_m|3m⟩ for the explicit-coefficient families.
    pub fn explicit_levels(self) -> usize {
        match self {
            FamilyKind::F2 => 1,
            FamilyKind::F3 => 2,
            _ => 0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FamilyKind::G => "G",
            FamilyKind::F1 => "F1",
            FamilyKind::F2 => "F2",
            FamilyKind::F3 => "F3",
        }
    }
}

impl std::fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "G" => Ok(FamilyKind::G),
            "F1" => Ok(FamilyKind::F1),
            "F2" => Ok(FamilyKind::F2),
            "F3" => Ok(FamilyKind::F3),
            other => Err(Error::InvalidArgument(format!(
                "unknown trial family {other:?}"
            ))),
        }
    }
}

/// Occupation weight `w` in the squeeze action `J₂ = ½(2w + 1) sinh² r₂`.
///
/// `Occupation` uses `w = ⟨ξ|a†a|ξ⟩`, which is what the Berry phase
/// `Im⟨ψ|∂ψ/∂φ₂⟩` actually equals for every family. `ScaledOccupation` uses
/// `w = ⟨ξ|a†a|ξ⟩/3` for the γ-parametrized family; it is kept only to compare
/// against that alternative reading and is not canonical.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SqueezeWeight {
    #[default]
    Occupation,
    ScaledOccupation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialFamily {
    pub kind: FamilyKind,
    pub weight: SqueezeWeight,
}

impl TrialFamily {
    pub fn new(kind: FamilyKind) -> Self {
        Self {
            kind,
            weight: SqueezeWeight::Occupation,
        }
    }

    pub fn with_weight(kind: FamilyKind, weight: SqueezeWeight) -> Self {
        Self { kind, weight }
    }

    pub fn dof(&self) -> usize {
        self.kind.dof()
    }
}

impl From<FamilyKind> for TrialFamily {
    fn from(kind: FamilyKind) -> Self {
        Self::new(kind)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    ActionAngle,
    Cartesian,
}

/// A point of the extended phase space of one trial family.
#[derive(Clone, Debug, PartialEq)]
pub enum CanonicalPoint {
    ActionAngle { actions: Vec<f64>, angles: Vec<f64> },
    Cartesian { q: Vec<f64>, p: Vec<f64> },
}

impl CanonicalPoint {
    pub fn action_angle(actions: Vec<f64>, angles: Vec<f64>) -> Self {
        assert_eq!(
            actions.len(),
            angles.len(),
            "actions and angles differ in length"
        );
        CanonicalPoint::ActionAngle { actions, angles }
    }

    pub fn cartesian(q: Vec<f64>, p: Vec<f64>) -> Self {
        assert_eq!(q.len(), p.len(), "Q and P differ in length");
        CanonicalPoint::Cartesian { q, p }
    }

    /// `[Q₁..Q_n, P₁..P_n]`
    pub fn from_flat(y: &[f64]) -> Self {
        assert!(
            y.len().is_multiple_of(2),
            "flat phase-space vector has odd length"
        );
        let n = y.len() / 2;
        Self::cartesian(y[..n].to_vec(), y[n..].to_vec())
    }

    pub fn chart(&self) -> Chart {
        match self {
            CanonicalPoint::ActionAngle { .. } => Chart::ActionAngle,
            CanonicalPoint::Cartesian { .. } => Chart::Cartesian,
        }
    }

    pub fn dof(&self) -> usize {
        match self {
            CanonicalPoint::ActionAngle { actions, .. } => actions.len(),
            CanonicalPoint::Cartesian { q, .. } => q.len(),
        }
    }

    pub fn actions(&self) -> Vec<f64> {
        match self {
            CanonicalPoint::ActionAngle { actions, .. } => actions.clone(),
            CanonicalPoint::Cartesian { q, p } => q
                .iter()
                .zip(p)
                .map(|(q, p)| 0.5 * (q * q + p * p))
                .collect(),
        }
    }

    pub fn angles(&self) -> Vec<f64> {
        match self {
            CanonicalPoint::ActionAngle { angles, .. } => angles.clone(),
            CanonicalPoint::Cartesian { q, p } => {
                q.iter().zip(p).map(|(q, p)| p.atan2(*q)).collect()
            }
        }
    }

    pub fn to_cartesian(&self) -> Result<Self> {
        match self {
            CanonicalPoint::Cartesian { .. } => Ok(self.clone()),
            CanonicalPoint::ActionAngle { actions, angles } => {
                check_actions(actions)?;
                let (q, p) = actions
                    .iter()
                    .zip(angles)
                    .map(|(j, phi)| {
                        let rho = (2.0 * j).sqrt();
                        (rho * phi.cos(), rho * phi.sin())
                    })
                    .unzip();
                Ok(CanonicalPoint::Cartesian { q, p })
            }
        }
    }

    pub fn to_action_angle(&self) -> Self {
        match self {
            CanonicalPoint::ActionAngle { .. } => self.clone(),
            CanonicalPoint::Cartesian { .. } => CanonicalPoint::ActionAngle {
                actions: self.actions(),
                angles: self.angles(),
            },
        }
    }

    /// `[Q₁..Q_n, P₁..P_n]`
    pub fn to_flat(&self) -> Result<Vec<f64>> {
        match self.to_cartesian()? {
            CanonicalPoint::Cartesian { mut q, p } => {
                q.extend(p);
                Ok(q)
            }
            CanonicalPoint::ActionAngle { .. } => unreachable!(),
        }
    }

    /// Complex pair variables `(Q + iP)/√2 = √J e^{iφ}`.
    pub fn pair_amplitudes(&self) -> Result<Vec<C64>> {
        match self {
            CanonicalPoint::Cartesian { q, p } => Ok(q
                .iter()
                .zip(p)
                .map(|(q, p)| C64::new(*q, *p) / SQRT_2)
                .collect()),
            CanonicalPoint::ActionAngle { actions, angles } => {
                check_actions(actions)?;
                Ok(actions
                    .iter()
                    .zip(angles)
                    .map(|(j, phi)| C64::from_polar(j.sqrt(), *phi))
                    .collect())
            }
        }
    }
}

fn check_actions(actions: &[f64]) -> Result<()> {
    match actions.iter().position(|j| *j < 0.0) {
        Some(index) => Err(Error::NegativeAction {
            index,
            value: actions[index],
        }),
        None => Ok(()),
    }
}

/// The non-displacement, non-squeeze part |ξ⟩.
#[derive(Clone, Debug, PartialEq)]
pub enum XiParameters {
    Vacuum,
    /// |ξ⟩ = e^{−|γ|²/2} Σ γ^m/√m! |3m⟩
    Gamma(C64),
    /// c₁..c_M; c₀ is fixed by normalization and chosen real.
    Coefficients(Vec<C64>),
}

impl XiParameters {
    /// ⟨ξ|a†a|ξ⟩ of the untruncated state.
    pub fn occupation(&self) -> f64 {
        match self {
            XiParameters::Vacuum => 0.0,
            XiParameters::Gamma(g) => 3.0 * g.norm_sqr(),
            XiParameters::Coefficients(c) => c
                .iter()
                .enumerate()
                .map(|(i, c)| 3.0 * (i + 1) as f64 * c.norm_sqr())
                .sum(),
        }
    }

    pub fn c0(&self) -> Result<f64> {
        match self {
            XiParameters::Coefficients(c) => {
                let sum: f64 = c.iter().map(|c| c.norm_sqr()).sum();
                if sum > 1.0 {
                    Err(Error::Normalization { sum })
                } else {
                    Ok((1.0 - sum).sqrt())
                }
            }
            _ => Ok(1.0),
        }
    }

    pub fn vector(&self, n_max: usize) -> Result<FockVector> {
        let mut v = FockVector::zeros(n_max);
        match self {
            XiParameters::Vacuum => v.amps_mut()[0] = C64::new(1.0, 0.0),
            XiParameters::Gamma(g) => {
                let mut c = C64::new((-0.5 * g.norm_sqr()).exp(), 0.0);
                let amps = v.amps_mut();
                let mut m = 0;
                while 3 * m <= n_max {
                    if m > 0 {
                        c *= g / (m as f64).sqrt();
                    }
                    amps[3 * m] = c;
                    m += 1;
                }
            }
            XiParameters::Coefficients(c) => {
                if 3 * c.len() > n_max {
                    return Err(Error::DimensionMismatch {
                        left: 3 * c.len(),
                        right: n_max,
                    });
                }
                let c0 = self.c0()?;
                let amps = v.amps_mut();
                amps[0] = C64::new(c0, 0.0);
                for (i, cm) in c.iter().enumerate() {
                    amps[3 * (i + 1)] = *cm;
                }
            }
        }
        Ok(v)
    }
}

/// Trial-state parameters before the canonical change of variables.
#[derive(Clone, Debug, PartialEq)]
pub struct RawParameters {
    pub alpha: C64,
    pub beta: C64,
    pub xi: XiParameters,
}

impl RawParameters {
    /// `[r₁, φ₁, r₂, φ₂, r₃, φ₃, ...]` with r₃.. being |γ| or |c_m|.
    pub fn to_polar(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(8);
        for z in [self.alpha, self.beta] {
            let (r, phi) = z.to_polar();
            out.extend([r, phi]);
        }
        match &self.xi {
            XiParameters::Vacuum => {}
            XiParameters::Gamma(g) => {
                let (r, phi) = g.to_polar();
                out.extend([r, phi]);
            }
            XiParameters::Coefficients(c) => {
                for z in c {
                    let (r, phi) = z.to_polar();
                    out.extend([r, phi]);
                }
            }
        }
        out
    }

    pub fn from_polar(kind: FamilyKind, polar: &[f64]) -> Result<Self> {
        if polar.len() != 2 * kind.dof() {
            return Err(Error::WrongArity {
                family: kind.label(),
                expected: kind.dof(),
                got: polar.len() / 2,
            });
        }
        let z: Vec<C64> = polar
            .chunks(2)
            .map(|rp| C64::from_polar(rp[0], rp[1]))
            .collect();
        let xi = match kind {
            FamilyKind::G => XiParameters::Vacuum,
            FamilyKind::F1 => XiParameters::Gamma(z[2]),
            FamilyKind::F2 | FamilyKind::F3 => XiParameters::Coefficients(z[2..].to_vec()),
        };
        xi.c0()?;
        Ok(Self {
            alpha: z[0],
            beta: z[1],
            xi,
        })
    }

    /// |ψ⟩ = D(α)S(β)|ξ⟩ without truncation checks.
    pub fn state(&self, space: &FockSpace) -> Result<FockVector> {
        let xi = self.xi.vector(space.n_max())?;
        Ok(space.displace_squeeze(self.alpha, self.beta, &xi))
    }
}

fn squeeze_weight(family: &TrialFamily, xi: &XiParameters) -> f64 {
    match (family.weight, xi) {
        (SqueezeWeight::ScaledOccupation, XiParameters::Gamma(g)) => g.norm_sqr(),
        _ => xi.occupation(),
    }
}

/// Recovers (α, β, ξ) from canonical coordinates.
pub fn invert_coordinates(family: &TrialFamily, pt: &CanonicalPoint) -> Result<RawParameters> {
    let kind = family.kind;
    if pt.dof() != kind.dof() {
        return Err(Error::WrongArity {
            family: kind.label(),
            expected: kind.dof(),
            got: pt.dof(),
        });
    }
    let z = pt.pair_amplitudes()?;
    let xi = match kind {
        FamilyKind::G => XiParameters::Vacuum,
        FamilyKind::F1 => XiParameters::Gamma(z[2]),
        FamilyKind::F2 | FamilyKind::F3 => XiParameters::Coefficients(z[2..].to_vec()),
    };
    xi.c0()?;
    let w = squeeze_weight(family, &xi);
    let j2 = z[1].norm_sqr();
    let beta = if j2 > 0.0 {
        let r2 = (2.0 * j2 / (2.0 * w + 1.0)).sqrt().asinh();
        z[1] * (r2 / j2.sqrt())
    } else {
        C64::new(0.0, 0.0)
    };
    Ok(RawParameters {
        alpha: z[0],
        beta,
        xi,
    })
}

/// Canonical actions of a raw parameter set (the forward change of variables).
pub fn actions_of(family: &TrialFamily, raw: &RawParameters) -> Vec<f64> {
    let w = squeeze_weight(family, &raw.xi);
    let mut out = vec![
        raw.alpha.norm_sqr(),
        0.5 * (2.0 * w + 1.0) * raw.beta.norm().sinh().powi(2),
    ];
    match &raw.xi {
        XiParameters::Vacuum => {}
        XiParameters::Gamma(g) => out.push(g.norm_sqr()),
        XiParameters::Coefficients(c) => out.extend(c.iter().map(|c| c.norm_sqr())),
    }
    out
}

/// Normalized D(α)S(β)|ξ⟩ at the given point; fails the tail-norm check if the
/// truncation is too small.
pub fn build_state(
    family: &TrialFamily,
    pt: &CanonicalPoint,
    space: &FockSpace,
) -> Result<FockVector> {
    let raw = invert_coordinates(family, pt)?;
    let psi = raw.state(space)?;
    psi.check_converged(space.truncation())?;
    Ok(psi)
}

/// One line of a [`CanonicityReport`].
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeResidual {
    pub parameter: String,
    pub computed: C64,
    pub expected: C64,
}

impl DerivativeResidual {
    pub fn residual(&self) -> f64 {
        (self.computed - self.expected).norm()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CanonicityReport {
    pub family: FamilyKind,
    pub step: f64,
    pub entries: Vec<DerivativeResidual>,
}

impl CanonicityReport {
    pub fn max_residual(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.residual())
            .fold(0.0, f64::max)
    }
}

fn parameter_names(kind: FamilyKind) -> Vec<String> {
    let mut names: Vec<String> = ["r1", "phi1", "r2", "phi2"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    match kind {
        FamilyKind::G => {}
        FamilyKind::F1 => names.extend(["r3".to_string(), "phi3".to_string()]),
        FamilyKind::F2 | FamilyKind::F3 => {
            for m in 1..=kind.explicit_levels() {
                names.push(format!("R{m}"));
                names.push(format!("phi_c{m}"));
            }
        }
    }
    names
}

/// Compares central-difference values of ⟨ψ|∂ψ/∂θ⟩ over the raw polar
/// parameters with the canonical structure: zero for every modulus and
/// `i J_k` for the phase of pair `k`.
pub fn canonicity_check(
    family: &TrialFamily,
    pt: &CanonicalPoint,
    h: f64,
    space: &FockSpace,
) -> Result<CanonicityReport> {
    let actions = pt.actions();
    if let Some(index) = actions.iter().position(|j| *j <= h) {
        return Err(Error::SingularPoint {
            index,
            value: actions[index],
            step: h,
        });
    }
    let raw = invert_coordinates(family, pt)?;
    let psi = raw.state(space)?;
    psi.check_converged(space.truncation())?;
    let polar = raw.to_polar();
    let expected_actions = actions_of(family, &raw);
    let names = parameter_names(family.kind);

    let mut entries = Vec::with_capacity(polar.len());
    for (k, name) in names.into_iter().enumerate() {
        let shifted = |sign: f64| -> Result<FockVector> {
            let mut theta = polar.clone();
            theta[k] += sign * h;
            RawParameters::from_polar(family.kind, &theta)?.state(space)
        };
        let plus = shifted(1.0)?;
        let minus = shifted(-1.0)?;
        let computed = (psi.inner(&plus)? - psi.inner(&minus)?) / (2.0 * h);
        let expected = if k % 2 == 0 {
            C64::new(0.0, 0.0)
        } else {
            C64::new(0.0, expected_actions[k / 2])
        };
        entries.push(DerivativeResidual {
            parameter: name,
            computed,
            expected,
        });
    }
    Ok(CanonicityReport {
        family: family.kind,
        step: h,
        entries,
    })
}

/// Observed finite-difference order per parameter from steps `h` and `h/2`.
/// Parameters whose residual at `h` is already below `floor` are reported as
/// `None` (the difference quotient is exact there up to round-off).
pub fn canonicity_order(
    family: &TrialFamily,
    pt: &CanonicalPoint,
    h: f64,
    floor: f64,
    space: &FockSpace,
) -> Result<Vec<Option<f64>>> {
    let coarse = canonicity_check(family, pt, h, space)?;
    let fine = canonicity_check(family, pt, 0.5 * h, space)?;
    Ok(coarse
        .entries
        .iter()
        .zip(&fine.entries)
        .map(|(c, f)| {
            let (rc, rf) = (c.residual(), f.residual());
            (rc > floor).then(|| (rc / rf).log2())
        })
        .collect())
}
