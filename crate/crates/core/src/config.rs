//! TOML run configuration. Unknown keys are rejected; see the README for the schema.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grid::GridSpec;
use crate::halfspace::{separable_extension, BcKind, Domain, ProblemSpec};
use crate::io::read_field;
use crate::kuznetsov::FixedPointConfig;
use crate::linear::LinearOptions;
use crate::manufactured::{ClosedForm, PlaneWave, WavePacket};
use crate::model::ModelParams;
use crate::symbols::SampleSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridSpec,
    pub model: ModelSection,
    #[serde(default)]
    pub problem: ProblemSection,
    #[serde(default)]
    pub solver: FixedPointConfig,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplier: Option<SampleSpec>,
}

/// The period is taken from `grid.period`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub lambda: f64,
    #[serde(default)]
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub domain: Domain,
    pub bc: BcKind,
    pub forcing: FieldSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<BoundarySpec>,
    #[serde(default)]
    pub drop_zero_mode: bool,
    #[serde(default)]
    pub zero_wall_forcing: bool,
}

impl Default for ProblemSection {
    fn default() -> Self {
        Self {
            domain: Domain::PeriodicBox,
            bc: BcKind::None,
            forcing: FieldSpec::Zero,
            boundary: None,
            drop_zero_mode: false,
            zero_wall_forcing: false,
        }
    }
}

/// A field given in closed form or read from a TPWF file (relative paths
/// resolve against the config file's directory).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FieldSpec {
    Zero,
    PlaneWaves { waves: Vec<PlaneWave> },
    WavePacket(WavePacket),
    File { path: PathBuf },
}

impl FieldSpec {
    pub fn closed_form(&self) -> Option<ClosedForm> {
        match self {
            FieldSpec::Zero => Some(ClosedForm::Zero),
            FieldSpec::PlaneWaves { waves } => Some(ClosedForm::PlaneWaves { waves: waves.clone() }),
            FieldSpec::WavePacket(p) => Some(ClosedForm::WavePacket(*p)),
            FieldSpec::File { .. } => None,
        }
    }

    pub fn sample(&self, grid: GridSpec, base_dir: &Path) -> Result<Field> {
        match (self, self.closed_form()) {
            (_, Some(form)) => Ok(form.sample(grid)),
            (FieldSpec::File { path }, None) => {
                let f = read_field(&base_dir.join(path))?;
                if *f.grid() != grid {
                    return Err(Error::GridMismatch);
                }
                Ok(f)
            }
            _ => unreachable!("every non-file variant has a closed form"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum BoundarySpec {
    /// `g = amplitude cos(k t) cos(xi' . x')` with the built-in extension.
    Separable { amplitude: f64, time_index: i64, space_index: [i64; 2] },
    /// Extension field `G` from a TPWF file; `g` is its trace.
    File { extension: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    #[serde(default = "yes")]
    pub dump_fields: bool,
}

fn yes() -> bool {
    true
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: None, dump_fields: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepKind {
    Linear,
    Kuznetsov,
}

/// Cartesian product of `lambdas x periods x amplitudes`; the forcing of the
/// problem section is scaled by each amplitude.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub kind: SweepKind,
    pub lambdas: Vec<f64>,
    pub periods: Vec<f64>,
    pub amplitudes: Vec<f64>,
}

fn positive(name: &str, v: &[f64]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::Config(format!("sweep.{name} must not be empty")));
    }
    if let Some(bad) = v.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(Error::Config(format!("sweep.{name} entry {bad} must be positive")));
    }
    Ok(())
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        self.model_params()?;
        self.solver.validate()?;
        let p = &self.problem;
        match (p.domain, p.bc) {
            (Domain::PeriodicBox, BcKind::None) if p.boundary.is_none() => {}
            (Domain::PeriodicBox, _) => {
                return Err(Error::Config("problem: periodic-box takes bc = \"none\" and no boundary".into()))
            }
            (Domain::HalfSpace, BcKind::None) => {
                return Err(Error::Config("problem.bc must be dirichlet or neumann on the half-space".into()))
            }
            (Domain::HalfSpace, _) => {}
        }
        if let FieldSpec::WavePacket(w) = &p.forcing {
            if !(w.sigma > 0.0) {
                return Err(Error::Config("problem.forcing.sigma must be positive".into()));
            }
        }
        if let Some(s) = &self.sweep {
            positive("lambdas", &s.lambdas)?;
            positive("periods", &s.periods)?;
            positive("amplitudes", &s.amplitudes)?;
        }
        Ok(())
    }

    pub fn model_params(&self) -> Result<ModelParams> {
        ModelParams::new(self.model.lambda, self.model.gamma, self.grid.period)
    }

    pub fn linear_options(&self) -> LinearOptions {
        LinearOptions { drop_zero_mode: self.problem.drop_zero_mode, zero_wall_forcing: self.problem.zero_wall_forcing }
    }

    /// Assemble the problem; file paths resolve against `base_dir`.
    pub fn build_problem(&self, base_dir: &Path) -> Result<ProblemSpec> {
        self.build_problem_on(self.grid, self.model_params()?, 1.0, base_dir)
    }

    /// As [`Self::build_problem`] on another grid/parameters with the data scaled by `amplitude`.
    pub fn build_problem_on(
        &self,
        grid: GridSpec,
        params: ModelParams,
        amplitude: f64,
        base_dir: &Path,
    ) -> Result<ProblemSpec> {
        let p = &self.problem;
        let forcing = p.forcing.sample(grid, base_dir)?.scale(amplitude);
        let mut spec = ProblemSpec { domain: p.domain, bc: p.bc, params, forcing, boundary_ext: None, boundary_data: None };
        match &p.boundary {
            None => {}
            Some(BoundarySpec::Separable { amplitude: a, time_index, space_index }) => {
                let (ext, data) = separable_extension(grid, p.bc, amplitude * a, *time_index, *space_index)?;
                spec.boundary_ext = Some(ext);
                if p.bc == BcKind::Dirichlet {
                    spec.boundary_data = Some(data);
                }
            }
            Some(BoundarySpec::File { extension }) => {
                let ext = read_field(&base_dir.join(extension))?;
                if *ext.grid() != grid {
                    return Err(Error::GridMismatch);
                }
                spec.boundary_ext = Some(ext.scale(amplitude));
            }
        }
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
[grid]
n_t = 8
n_x = 8
box_len = 6.283185307179586
period = 6.283185307179586

[model]
lambda = 1.0
gamma = 1.0

[problem]
domain = "periodic-box"
bc = "none"

[problem.forcing]
kind = "plane-waves"
waves = [{ amplitude = 1.0, time_index = 1, space_index = [1, 0, 0] }]

[solver]
tol = 1e-10
max_iter = 20

[sweep]
kind = "linear"
lambdas = [0.5, 1.0]
periods = [6.283185307179586]
amplitudes = [1.0]
"#;

    #[test]
    fn parses_and_round_trips() {
        let cfg = RunConfig::from_toml_str(SAMPLE).unwrap();
        assert_eq!(cfg.solver.max_iter, 20);
        assert_eq!(cfg.solver.p, 2.75);
        let text = cfg.to_toml_string().unwrap();
        assert_eq!(RunConfig::from_toml_str(&text).unwrap(), cfg);
    }

    #[test]
    fn unknown_key_is_named() {
        let bad = SAMPLE.replace("gamma = 1.0", "gamma = 1.0\ngama = 2.0");
        let err = RunConfig::from_toml_str(&bad).unwrap_err().to_string();
        assert!(err.contains("gama"), "{err}");
    }

    #[test]
    fn packet_forcing_round_trips() {
        let text = SAMPLE.replace(
            "kind = \"plane-waves\"\nwaves = [{ amplitude = 1.0, time_index = 1, space_index = [1, 0, 0] }]",
            "kind = \"wave-packet\"\namplitude = 1.0\nsigma = 0.5\ncenter = [3.0, 3.0, 3.0]\ntime_index = 1\ncarrier = [1, 0, 0]",
        );
        let cfg = RunConfig::from_toml_str(&text).unwrap();
        assert!(matches!(cfg.problem.forcing, FieldSpec::WavePacket(_)));
        assert_eq!(RunConfig::from_toml_str(&cfg.to_toml_string().unwrap()).unwrap(), cfg);
        let bad = text.replace("sigma = 0.5", "sigma = 0.5\nsigmaa = 1.0");
        assert!(RunConfig::from_toml_str(&bad).is_err());
    }

    #[test]
    fn inconsistent_problem_is_rejected() {
        let bad = SAMPLE.replace("bc = \"none\"", "bc = \"dirichlet\"");
        assert!(RunConfig::from_toml_str(&bad).is_err());
        let bad = SAMPLE.replace("lambdas = [0.5, 1.0]", "lambdas = []");
        assert!(RunConfig::from_toml_str(&bad).is_err());
    }

    #[test]
    fn builds_problem() {
        let cfg = RunConfig::from_toml_str(SAMPLE).unwrap();
        let spec = cfg.build_problem(Path::new(".")).unwrap();
        assert!((spec.forcing.max_abs() - 1.0).abs() < 1e-12);
    }
}
