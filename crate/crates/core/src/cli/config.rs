//! TOML experiment configuration.
//!
//! Every table is optional and falls back to defaults, so a config only needs
//! the fields a command reads. Angle fields are given by a small closed set of
//! tagged expressions instead of a formula parser.

use std::f64::consts::PI;
use std::path::PathBuf;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::conformal::ConformalMap;
use crate::config::Tolerances;
use crate::disk::PolarGrid;
use crate::error::{Error, Result};
use crate::harmonic::series::{Singular, SingularTerm};
use crate::harmonic::{mu_to_hmu, poisson_extend, theta_to_hmu, BoundaryField, FieldKind, HarmonicFn, HarmonicPair, RotationField};

/// Boundary function as a tagged expression.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    Constant { value: f64 },
    /// `a0 + sum_k cos[k-1] cos(k t) + sin[k-1] sin(k t)`.
    Fourier {
        #[serde(default)]
        a0: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
    /// `+pi/2` on the upper half circle, `-pi/2` on the lower.
    SemicircleSplit,
    Clamp { expr: Box<FieldSpec>, limit: f64 },
    /// Whitespace or comma separated samples on the uniform grid.
    File { path: PathBuf },
}

impl FieldSpec {
    fn value(&self, t: f64) -> Option<f64> {
        match self {
            FieldSpec::Constant { value } => Some(*value),
            FieldSpec::Fourier { a0, cos, sin } => {
                let mut v = *a0;
                for (k, c) in cos.iter().enumerate() {
                    v += c * ((k + 1) as f64 * t).cos();
                }
                for (k, s) in sin.iter().enumerate() {
                    v += s * ((k + 1) as f64 * t).sin();
                }
                Some(v)
            }
            FieldSpec::Clamp { expr, limit } => expr.value(t).map(|v| v.clamp(-limit, *limit)),
            FieldSpec::SemicircleSplit | FieldSpec::File { .. } => None,
        }
    }

    pub fn build(&self, kind: FieldKind, n_grid: usize) -> Result<BoundaryField> {
        match self {
            FieldSpec::SemicircleSplit => BoundaryField::semicircle_split(n_grid)?.with_kind(kind),
            FieldSpec::File { path } => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                let values = text
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<f64>().map_err(|e| Error::Config(format!("{}: {s:?}: {e}", path.display()))))
                    .collect::<Result<Vec<f64>>>()?;
                BoundaryField::new(kind, values)
            }
            FieldSpec::Clamp { expr, limit } if !expr.is_closed_form() => {
                let inner = expr.build(kind, n_grid)?;
                BoundaryField::new(kind, inner.values().iter().map(|v| v.clamp(-limit, *limit)).collect())
            }
            _ => BoundaryField::from_fn(kind, n_grid, |t| self.value(t).unwrap_or(0.0)),
        }
    }

    fn is_closed_form(&self) -> bool {
        match self {
            FieldSpec::Constant { .. } | FieldSpec::Fourier { .. } => true,
            FieldSpec::Clamp { expr, .. } => expr.is_closed_form(),
            _ => false,
        }
    }
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec::Constant { value: 0.0 }
    }
}

/// Source of the `(h, mu0)` pair a command works with.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PairSpec {
    /// Computed from the configured angle field.
    #[default]
    FromTheta,
    /// `h = Re (1 - z e^{-i at})^(-exponent) / pi`.
    Power {
        at: f64,
        exponent: f64,
        #[serde(default)]
        mu0: f64,
    },
    /// `h` is the Poisson kernel at `e^{i at}` divided by `pi`.
    Poisson {
        at: f64,
        #[serde(default)]
        mu0: f64,
    },
    /// Rotation field given by its boundary values.
    Rotation { mu: FieldSpec },
}

impl PairSpec {
    pub fn build(&self, theta: &FieldSpec, n_grid: usize, tol: &Tolerances) -> Result<HarmonicPair> {
        let singular = |kind: Singular, mu0: f64| {
            let h = HarmonicFn::from_parts(vec![Complex64::new(0.0, 0.0)], vec![SingularTerm { weight: Complex64::new(1.0 / PI, 0.0), kind }]);
            HarmonicPair { h, mu0 }
        };
        match self {
            PairSpec::FromTheta => theta_to_hmu(&theta.build(FieldKind::Angle, n_grid)?, tol),
            PairSpec::Power { at, exponent, mu0 } => {
                if !(*exponent > 0.0 && *exponent < 1.0) {
                    return Err(Error::Config(format!("power exponent {exponent} must lie in (0, 1)")));
                }
                Ok(singular(Singular::Power { at: *at, exponent: *exponent }, *mu0))
            }
            PairSpec::Poisson { at, mu0 } => Ok(singular(Singular::Herglotz { at: *at }, *mu0)),
            PairSpec::Rotation { mu } => {
                let field = mu.build(FieldKind::Generic, n_grid)?;
                mu_to_hmu(&RotationField { mu: poisson_extend(&field, tol) }, tol)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorrespondConfig {
    /// Interior points at which all representations are tabulated.
    pub points: Vec<[f64; 2]>,
}

impl Default for CorrespondConfig {
    fn default() -> Self {
        CorrespondConfig { points: vec![[0.0, 0.0], [0.5, 0.0], [-0.5, 0.0], [0.0, 0.5], [0.3, -0.4], [0.9, 0.1]] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateConfig {
    pub x0: [f64; 2],
    pub dt: f64,
    pub horizon: f64,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        SimulateConfig { x0: [0.0, 0.0], dt: 1e-3, horizon: 10.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StationaryConfig {
    pub dt: f64,
    /// Horizon of each replica, started from the stationary law.
    pub horizon: f64,
    pub replicas: usize,
    pub grid: PolarGrid,
    /// L1 threshold reported alongside the error.
    pub threshold: f64,
}

impl Default for StationaryConfig {
    fn default() -> Self {
        StationaryConfig { dt: 1e-3, horizon: 100.0, replicas: 8, grid: PolarGrid::default(), threshold: 0.05 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RotationConfig {
    pub dt: f64,
    pub horizon: f64,
    pub points: Vec<[f64; 2]>,
}

impl Default for RotationConfig {
    fn default() -> Self {
        RotationConfig { dt: 1e-3, horizon: 200.0, points: vec![[0.0, 0.0]] }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CauchyConfig {
    pub t_values: Vec<f64>,
    pub replicas: usize,
}

impl Default for CauchyConfig {
    fn default() -> Self {
        CauchyConfig { t_values: vec![2.0, 20.0, 200.0], replicas: 2000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HittingConfig {
    pub pair: PairSpec,
    /// Boundary angles to classify.
    pub angles: Vec<f64>,
    pub r_min: f64,
}

impl Default for HittingConfig {
    fn default() -> Self {
        HittingConfig { pair: PairSpec::FromTheta, angles: vec![0.0], r_min: 0.5 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ErbmConfig {
    /// Root density on the boundary.
    pub nu: FieldSpec,
    pub eps_dep: f64,
    pub delta: f64,
    pub horizon: f64,
    pub dt: f64,
    pub grid: PolarGrid,
}

impl Default for ErbmConfig {
    fn default() -> Self {
        ErbmConfig {
            nu: FieldSpec::Constant { value: 1.0 },
            eps_dep: crate::erbm::DEFAULT_EPS_DEP,
            delta: crate::erbm::DEFAULT_DELTA,
            horizon: 200.0,
            dt: 1e-3,
            grid: PolarGrid::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransferConfig {
    pub map: ConformalMap,
    pub x0: [f64; 2],
    pub dt: f64,
    pub horizon: f64,
    /// Step of the resampled image path.
    pub target_dt: f64,
    pub grid: PolarGrid,
}

impl Default for TransferConfig {
    fn default() -> Self {
        TransferConfig { map: ConformalMap::identity(), x0: [0.0, 0.0], dt: 1e-3, horizon: 100.0, target_dt: 1e-3, grid: PolarGrid::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ApproxConfig {
    pub map: ConformalMap,
    pub r_list: Vec<f64>,
    pub runs: usize,
    pub horizon: f64,
    pub dt: f64,
}

impl Default for ApproxConfig {
    fn default() -> Self {
        ApproxConfig { map: ConformalMap::identity(), r_list: vec![0.8, 0.9, 0.95, 0.99], runs: 100, horizon: 1.0, dt: 1e-3 }
    }
}

/// Complete run description. Together with the seed it determines every output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub n_grid: usize,
    pub theta: FieldSpec,
    pub pair: PairSpec,
    pub correspond: CorrespondConfig,
    pub simulate: SimulateConfig,
    pub stationary: StationaryConfig,
    pub rotation: RotationConfig,
    pub cauchy: CauchyConfig,
    pub hitting: HittingConfig,
    pub erbm: ErbmConfig,
    pub transfer: TransferConfig,
    pub approx: ApproxConfig,
    pub tolerances: Tolerances,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 1,
            n_grid: 1024,
            theta: FieldSpec::default(),
            pair: PairSpec::FromTheta,
            correspond: CorrespondConfig::default(),
            simulate: SimulateConfig::default(),
            stationary: StationaryConfig::default(),
            rotation: RotationConfig::default(),
            cauchy: CauchyConfig::default(),
            hitting: HittingConfig::default(),
            erbm: ErbmConfig::default(),
            transfer: TransferConfig::default(),
            approx: ApproxConfig::default(),
            tolerances: Tolerances::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn theta_field(&self) -> Result<BoundaryField> {
        self.theta.build(FieldKind::Angle, self.n_grid)
    }

    pub fn pair_from(&self, spec: &PairSpec) -> Result<HarmonicPair> {
        spec.build(&self.theta, self.n_grid, &self.tolerances)
    }
}

pub fn point(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}
