use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::laws::ScalarLaw;
use crate::levy_sim::{IntegrandSpec, LevyModel, ModelRepr, DEFAULT_BETA, DEFAULT_GRID_SIZE};
use crate::regvar::DirectionPredicate;

/// Which experiment a config runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Tails,
    Breiman,
    OneBigJump,
    TailEquivalence,
    LemmaChecks,
    Paths,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Tails => "tails",
            ExperimentKind::Breiman => "breiman",
            ExperimentKind::OneBigJump => "one-big-jump",
            ExperimentKind::TailEquivalence => "tail-equivalence",
            ExperimentKind::LemmaChecks => "lemma-checks",
            ExperimentKind::Paths => "paths",
        }
    }

    fn needs_integrand(self) -> bool {
        matches!(
            self,
            ExperimentKind::Tails | ExperimentKind::OneBigJump | ExperimentKind::TailEquivalence | ExperimentKind::Paths
        )
    }

    fn needs_levels(self) -> bool {
        self != ExperimentKind::Paths
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default)]
    pub format: OutputFormat,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            dir: default_dir(),
            format: OutputFormat::Csv,
        }
    }
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_t() -> f64 {
    1.0
}

fn default_grid() -> usize {
    DEFAULT_GRID_SIZE
}

fn default_refinement() -> usize {
    8
}

fn default_beta() -> f64 {
    DEFAULT_BETA
}

fn default_n_values() -> Vec<u64> {
    vec![100, 1_000, 10_000, 100_000]
}

fn default_analytic_mc() -> u64 {
    10_000
}

fn default_paths() -> u64 {
    3
}

/// A validated experiment description.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub model: LevyModel,
    pub integrand: Option<IntegrandSpec>,
    pub levels: Vec<f64>,
    pub epsilon: Option<f64>,
    pub t: f64,
    /// Monte Carlo replicates.
    pub n: u64,
    pub seed: u64,
    pub grid_size: usize,
    /// Dyadic candidate times in the J1 search.
    pub refinement: usize,
    /// Big-jump threshold exponent for the lemma checks.
    pub beta: f64,
    pub n_values: Vec<u64>,
    /// Law of the multiplier `Y` in the Breiman experiment.
    pub multiplier: Option<ScalarLaw>,
    /// Draws used for the analytic prediction when the integrand is random.
    pub analytic_mc: u64,
    /// Trajectories written by the path dump.
    pub paths: u64,
    pub output: OutputSpec,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    experiment: ExperimentKind,
    model: ModelRepr,
    #[serde(default)]
    integrand: Option<IntegrandSpec>,
    #[serde(default)]
    levels: Vec<f64>,
    #[serde(default)]
    epsilon: Option<f64>,
    #[serde(default = "default_t")]
    t: f64,
    n: u64,
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_grid")]
    grid_size: usize,
    #[serde(default = "default_refinement")]
    refinement: usize,
    #[serde(default = "default_beta")]
    beta: f64,
    #[serde(default = "default_n_values")]
    n_values: Vec<u64>,
    #[serde(default)]
    multiplier: Option<ScalarLaw>,
    #[serde(default = "default_analytic_mc")]
    analytic_mc: u64,
    #[serde(default = "default_paths")]
    paths: u64,
    #[serde(default)]
    output: OutputSpec,
}

impl ExperimentConfig {
    /// Parse and validate a JSON document, reporting every violation at once.
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(text)?;
        let mut errs = Vec::new();
        let kind = raw.experiment;

        let model = match LevyModel::new(
            raw.model.intensity,
            raw.model.alpha,
            raw.model.spectral,
            raw.model.diffusion,
            raw.model.drift,
        ) {
            Ok(m) => Some(m),
            Err(Error::Validation(v)) => {
                errs.extend(v.into_iter().map(|e| format!("model: {e}")));
                None
            }
            Err(e) => {
                errs.push(format!("model: {e}"));
                None
            }
        };

        if raw.n == 0 {
            errs.push("n must be positive".into());
        }
        if raw.grid_size < 2 {
            errs.push("grid_size must be at least 2".into());
        }
        if !(raw.beta > 0.5 && raw.beta < 1.0) {
            errs.push("beta must lie in (1/2, 1)".into());
        }
        if !(raw.t > 0.0 && raw.t <= 1.0) {
            errs.push("t must lie in (0, 1]".into());
        }
        if raw.analytic_mc == 0 {
            errs.push("analytic_mc must be positive".into());
        }
        if raw.paths == 0 {
            errs.push("paths must be positive".into());
        }
        if kind.needs_levels() {
            if raw.levels.is_empty() {
                errs.push("levels must be nonempty".into());
            }
            if raw.levels.iter().any(|&u| !(u > 0.0 && u.is_finite())) {
                errs.push("levels must be positive and finite".into());
            }
            if raw.levels.windows(2).any(|w| !(w[0] < w[1])) {
                errs.push("levels must be strictly increasing".into());
            }
        }

        match (&raw.integrand, kind.needs_integrand()) {
            (None, true) => errs.push(format!("{} needs an integrand", kind.name())),
            (Some(spec), _) => {
                errs.extend(spec.violations().into_iter().map(|e| format!("integrand: {e}")));
                if let Some(m) = &model {
                    if spec.dim() != m.dim() {
                        errs.push(format!(
                            "integrand dimension {} does not match model dimension {}",
                            spec.dim(),
                            m.dim()
                        ));
                    }
                }
            }
            (None, false) => {}
        }

        match kind {
            ExperimentKind::Tails | ExperimentKind::TailEquivalence => {
                if let Some(m) = &model {
                    if m.dim() != 1 {
                        errs.push(format!("{} needs a one-dimensional model", kind.name()));
                    } else if kind == ExperimentKind::Tails
                        && m.measure().spectral_mass(Some(&DirectionPredicate::positive())).unwrap_or(0.0) == 0.0
                    {
                        errs.push("tails needs spectral mass on the positive half-line".into());
                    }
                }
            }
            ExperimentKind::OneBigJump => match raw.epsilon {
                None => errs.push("one-big-jump needs epsilon".into()),
                Some(e) if !(e > 0.0 && e.is_finite()) => errs.push("epsilon must be positive".into()),
                _ => {}
            },
            ExperimentKind::Breiman => match raw.multiplier {
                None => errs.push("breiman needs a multiplier law".into()),
                Some(law) => {
                    if let Err(e) = law.validate() {
                        errs.push(format!("multiplier: {e}"));
                    }
                }
            },
            ExperimentKind::LemmaChecks => {
                if raw.n_values.is_empty() || raw.n_values.contains(&0) {
                    errs.push("n_values must be nonempty and positive".into());
                }
            }
            ExperimentKind::Paths => {}
        }

        if !errs.is_empty() {
            return Err(Error::Validation(errs));
        }
        Ok(ExperimentConfig {
            experiment: kind,
            model: model.expect("validated"),
            integrand: raw.integrand,
            levels: raw.levels,
            epsilon: raw.epsilon,
            t: raw.t,
            n: raw.n,
            seed: raw.seed,
            grid_size: raw.grid_size,
            refinement: raw.refinement,
            beta: raw.beta,
            n_values: raw.n_values,
            multiplier: raw.multiplier,
            analytic_mc: raw.analytic_mc,
            paths: raw.paths,
            output: raw.output,
        })
    }

    /// SHA-256 of the canonical JSON form (sorted keys, defaults filled in).
    pub fn hash(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        hex::encode(Sha256::digest(value.to_string().as_bytes()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "experiment": "tails",
        "model": {"intensity": 1.0, "alpha": 1.5, "spectral": [{"dir": [1.0], "w": 1.0}]},
        "integrand": {"kind": "constant", "value": [1.0]},
        "levels": [10.0],
        "n": 1000
    }"#;

    fn violations(text: &str) -> Vec<String> {
        match ExperimentConfig::parse(text) {
            Err(Error::Validation(v)) => v,
            other => panic!("expected validation errors, got {other:?}"),
        }
    }

    #[test]
    fn minimal_config_is_valid() {
        let c = ExperimentConfig::parse(MINIMAL).unwrap();
        assert_eq!(c.grid_size, DEFAULT_GRID_SIZE);
        assert_eq!(c.output.format, OutputFormat::Csv);
        assert_eq!(c.hash().len(), 64);
    }

    #[test]
    fn beta_outside_range() {
        let text = MINIMAL.replace("\"tails\"", "\"lemma-checks\"").replace("\"n\": 1000", "\"n\": 1000, \"beta\": 0.4");
        assert_eq!(violations(&text), vec!["beta must lie in (1/2, 1)".to_string()]);
    }

    #[test]
    fn every_violation_is_listed() {
        let text = MINIMAL
            .replace("[10.0]", "[]")
            .replace("\"alpha\": 1.5", "\"alpha\": -1.0")
            .replace("\"n\": 1000", "\"n\": 0");
        let v = violations(&text);
        assert!(v.contains(&"levels must be nonempty".to_string()), "{v:?}");
        assert!(v.contains(&"n must be positive".to_string()));
        assert!(v.contains(&"model: alpha must be positive".to_string()));
    }

    #[test]
    fn kind_specific_requirements() {
        let text = MINIMAL.replace("\"tails\"", "\"one-big-jump\"");
        assert_eq!(violations(&text), vec!["one-big-jump needs epsilon".to_string()]);
        let text = MINIMAL.replace("\"tails\"", "\"breiman\"");
        assert_eq!(violations(&text), vec!["breiman needs a multiplier law".to_string()]);
        let text = MINIMAL.replace("[1.0]}", "[1.0, 2.0]}");
        assert!(violations(&text)[0].contains("does not match"));
    }

    #[test]
    fn parse_errors_carry_location() {
        match ExperimentConfig::parse("{\n  \"experiment\": \"tails\",\n  oops\n}") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            ExperimentConfig::parse(&MINIMAL.replace("\"n\"", "\"n_typo\": 1, \"n\"")),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn hash_ignores_formatting_but_not_content() {
        let a = ExperimentConfig::parse(MINIMAL).unwrap();
        let b = ExperimentConfig::parse(&MINIMAL.replace('\n', " ")).unwrap();
        let c = ExperimentConfig::parse(&MINIMAL.replace("[10.0]", "[11.0]")).unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
    }
}
