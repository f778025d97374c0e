use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bds::{t_to_probs, BellProbabilities, TVector, WernerParam, TETRAHEDRON_GRID_STEPS};
use crate::circuits::{Encoder, Template};
use crate::error::{Error, Result};
use crate::simulator::NoiseModel;

/// Noise configuration shipped with the crate.
pub const DEFAULT_NOISE_TOML: &str = include_str!("../../config/default_noise.toml");

/// The shipped noise model.
pub fn default_noise() -> NoiseModel {
    NoiseModel::from_toml_str(DEFAULT_NOISE_TOML).expect("shipped noise config is valid")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepMode {
    Tetrahedron,
    WernerLine,
    Single,
}

/// Preparation circuit family. `WernerSpecial` ignores the encoder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CircuitTemplate {
    FourQubit,
    TwoQubit,
    FourQubitAncilla,
    WernerSpecial,
}

impl CircuitTemplate {
    pub fn bds_template(self) -> Option<Template> {
        match self {
            CircuitTemplate::FourQubit => Some(Template::FourQubit),
            CircuitTemplate::TwoQubit => Some(Template::TwoQubit),
            CircuitTemplate::FourQubitAncilla => Some(Template::FourQubitAncilla),
            CircuitTemplate::WernerSpecial => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self.bds_template() {
            Some(t) => t.name(),
            None => "werner-special",
        }
    }
}

impl From<Template> for CircuitTemplate {
    fn from(t: Template) -> Self {
        match t {
            Template::FourQubit => CircuitTemplate::FourQubit,
            Template::TwoQubit => CircuitTemplate::TwoQubit,
            Template::FourQubitAncilla => CircuitTemplate::FourQubitAncilla,
        }
    }
}

impl std::str::FromStr for CircuitTemplate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('_', "-").as_str() {
            "werner-special" => Ok(CircuitTemplate::WernerSpecial),
            other => other.parse::<Template>().map(Into::into),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pipeline {
    /// Branch-exact output density matrices.
    Exact,
    /// Sampled tomography followed by linear inversion.
    ShotsTomography,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    fn from_extension(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()? {
            "csv" => Some(OutputFormat::Csv),
            "json" => Some(OutputFormat::Json),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputSpec {
    pub path: PathBuf,
    pub format: OutputFormat,
}

/// State for `single` mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SingleState {
    T(TVector),
    P(BellProbabilities),
    W(WernerParam),
}

impl SingleState {
    pub fn probabilities(self) -> Result<BellProbabilities> {
        match self {
            SingleState::T(t) => t_to_probs(t),
            SingleState::P(p) => Ok(p),
            SingleState::W(w) => Ok(w.probabilities()),
        }
    }
}

/// Validated sweep configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub mode: SweepMode,
    pub template: CircuitTemplate,
    pub encoder: Encoder,
    pub pipeline: Pipeline,
    pub shots: u64,
    pub seed: u64,
    pub noise: Option<NoiseModel>,
    pub werner_points: usize,
    pub grid_steps: usize,
    pub state: Option<SingleState>,
    /// Worker threads; 0 uses all cores.
    pub threads: usize,
    pub output: Option<OutputSpec>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            mode: SweepMode::WernerLine,
            template: CircuitTemplate::TwoQubit,
            encoder: Encoder::Compact,
            pipeline: Pipeline::ShotsTomography,
            shots: 1 << 10,
            seed: 0,
            noise: None,
            werner_points: 100,
            grid_steps: TETRAHEDRON_GRID_STEPS,
            state: None,
            threads: 0,
            output: None,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    mode: SweepMode,
    template: String,
    #[serde(default)]
    encoder: Option<String>,
    #[serde(default)]
    pipeline: Option<Pipeline>,
    #[serde(default)]
    shots: Option<u64>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    noise: Option<RawNoise>,
    #[serde(default)]
    werner_points: Option<usize>,
    #[serde(default)]
    grid_steps: Option<usize>,
    #[serde(default)]
    threads: Option<usize>,
    #[serde(default)]
    state: Option<RawState>,
    #[serde(default)]
    output: Option<RawOutput>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawNoise {
    /// `"none"`, `"default"` or a path to a noise TOML file.
    Named(String),
    Inline(NoiseModel),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    t: Option<[f64; 3]>,
    p: Option<[f64; 4]>,
    w: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    path: PathBuf,
    format: Option<OutputFormat>,
}

impl SweepConfig {
    /// Parses a TOML config; relative paths resolve against `base_dir`.
    pub fn from_toml_str(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let field = e
                .span()
                .map(|s| {
                    let line = text[..s.start].lines().count().max(1);
                    format!("line {line}")
                })
                .unwrap_or_else(|| "config".into());
            Error::config(field, e.message())
        })?;
        let resolve = |p: &Path| match base_dir {
            Some(dir) if p.is_relative() => dir.join(p),
            _ => p.to_path_buf(),
        };
        let defaults = Self::default();
        let noise = match raw.noise {
            None => None,
            Some(RawNoise::Named(name)) => match name.as_str() {
                "none" => None,
                "default" => Some(default_noise()),
                path => Some(
                    NoiseModel::load(resolve(Path::new(path)))
                        .map_err(|e| Error::config("noise", e.to_string()))?,
                ),
            },
            Some(RawNoise::Inline(m)) => {
                m.validate()?;
                Some(m)
            }
        };
        let state = raw.state.map(|s| match (s.t, s.p, s.w) {
            (Some(t), None, None) => {
                let t = TVector::new(t[0], t[1], t[2]);
                t_to_probs(t).map_err(|e| Error::config("state.t", e.to_string()))?;
                Ok(SingleState::T(t))
            }
            (None, Some(p), None) => BellProbabilities::from_array(p)
                .map(SingleState::P)
                .map_err(|e| Error::config("state.p", e.to_string())),
            (None, None, Some(w)) => WernerParam::new(w)
                .map(SingleState::W)
                .map_err(|e| Error::config("state.w", e.to_string())),
            _ => Err(Error::config("state", "give exactly one of `t`, `p` or `w`")),
        });
        let output = raw
            .output
            .map(|o| {
                let path = resolve(&o.path);
                let format = o
                    .format
                    .or_else(|| OutputFormat::from_extension(&path))
                    .ok_or_else(|| {
                        Error::config("output.format", "not given and not implied by the extension")
                    })?;
                Ok::<_, Error>(OutputSpec { path, format })
            })
            .transpose()?;
        let cfg = Self {
            mode: raw.mode,
            template: raw.template.parse()?,
            encoder: raw.encoder.as_deref().map(str::parse).transpose()?.unwrap_or(defaults.encoder),
            pipeline: raw.pipeline.unwrap_or(defaults.pipeline),
            shots: raw.shots.unwrap_or(defaults.shots),
            seed: raw.seed.unwrap_or(defaults.seed),
            noise,
            werner_points: raw.werner_points.unwrap_or(defaults.werner_points),
            grid_steps: raw.grid_steps.unwrap_or(defaults.grid_steps),
            state: state.transpose()?,
            threads: raw.threads.unwrap_or(defaults.threads),
            output,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("config", format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text, path.parent())
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(n) = &self.noise {
            n.validate()?;
        }
        if self.pipeline == Pipeline::ShotsTomography && self.shots == 0 {
            return Err(Error::config("shots", "must be positive for shot-based tomography"));
        }
        match self.mode {
            SweepMode::Tetrahedron => {
                if self.template == CircuitTemplate::WernerSpecial {
                    return Err(Error::config(
                        "template",
                        "werner-special requires werner-line or single mode with `w`",
                    ));
                }
                if self.grid_steps == 0 {
                    return Err(Error::config("grid_steps", "must be positive"));
                }
            }
            SweepMode::WernerLine => {
                if self.werner_points == 0 {
                    return Err(Error::config("werner_points", "must be positive"));
                }
            }
            SweepMode::Single => match self.state {
                None => return Err(Error::config("state", "single mode needs a [state] table")),
                Some(SingleState::W(_)) => {}
                Some(_) if self.template == CircuitTemplate::WernerSpecial => {
                    return Err(Error::config("state", "werner-special needs `w`"));
                }
                Some(_) => {}
            },
        }
        Ok(())
    }
}
