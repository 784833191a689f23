//! Experiment configuration: a TOML file (or a named preset) describing
//! the sampler, the metric construction and the filtration parameters.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use srips_core::{complex::FiltrationParams, Error, Result, ScaleMap};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub sampler: SamplerConfig,
    /// Greedy density filter distance; embedded samplers only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thin_min_dist: Option<f64>,
    /// Neighborhood graph radius; embedded samplers only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub link_radius: Option<f64>,
    pub params: ParamsConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SamplerConfig {
    /// Unit sphere cut at z = height, embedded in 3-space; needs
    /// thin_min_dist and link_radius.
    CutSphere { count: usize, height: f64 },
    /// Evenly spaced points with the exact arc-length metric; seed unused.
    Circle { count: usize, circumference: f64 },
    /// Uniform random (angle, height) sample with the exact flat metric.
    Cylinder { count: usize, circumference: f64, width: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScaleSpec {
    /// r -> r.
    Identity,
    /// r -> slope * r.
    Linear { slope: f64 },
    /// r -> min(r, offset + slope * r).
    CappedLinear { offset: f64, slope: f64 },
}

impl ScaleSpec {
    pub fn to_map(&self) -> Result<ScaleMap> {
        match *self {
            ScaleSpec::Identity => Ok(ScaleMap::identity()),
            ScaleSpec::Linear { slope } => ScaleMap::linear(slope),
            ScaleSpec::CappedLinear { offset, slope } => ScaleMap::capped_linear(offset, slope),
        }
    }

    /// Parse the compact command-line form: "identity", "linear:S" or
    /// "capped:OFFSET,S".
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "identity" {
            return Ok(ScaleSpec::Identity);
        }
        if let Some(rest) = s.strip_prefix("linear:") {
            let slope: f64 = rest
                .parse()
                .map_err(|_| Error::Parse(format!("bad slope in scale spec {s:?}")))?;
            return Ok(ScaleSpec::Linear { slope });
        }
        if let Some(rest) = s.strip_prefix("capped:") {
            let (offset, slope) = rest
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("capped spec needs offset,slope: {s:?}")))?;
            let offset: f64 = offset
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad offset in scale spec {s:?}")))?;
            let slope: f64 = slope
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad slope in scale spec {s:?}")))?;
            return Ok(ScaleSpec::CappedLinear { offset, slope });
        }
        Err(Error::Parse(format!(
            "unknown scale spec {s:?}; expected identity, linear:S or capped:OFFSET,S"
        )))
    }
}

impl std::fmt::Display for ScaleSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScaleSpec::Identity => write!(f, "identity"),
            ScaleSpec::Linear { slope } => write!(f, "linear:{slope}"),
            ScaleSpec::CappedLinear { offset, slope } => write!(f, "capped:{offset},{slope}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub a: ScaleSpec,
    pub b: ScaleSpec,
    pub max_clusters: usize,
    pub max_dim: usize,
    pub r_max: f64,
    /// Field characteristic for the reduction.
    pub p: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simplex_budget: Option<usize>,
}

impl ParamsConfig {
    pub fn to_params(&self) -> Result<FiltrationParams> {
        let mut params = FiltrationParams::new(
            self.a.to_map()?,
            self.b.to_map()?,
            self.max_clusters,
            self.max_dim,
            self.r_max,
        )?;
        if let Some(budget) = self.simplex_budget {
            params = params.with_budget(budget);
        }
        Ok(params)
    }
}

impl ExperimentConfig {
    /// Module-level preconditions checked up front so failures carry
    /// config context instead of surfacing mid-pipeline.
    pub fn validate(&self) -> Result<()> {
        self.params.to_params()?;
        match self.sampler {
            SamplerConfig::CutSphere { count, height } => {
                if count == 0 {
                    return Err(Error::InvalidParams("sampler count must be positive".into()));
                }
                if !(-1.0..1.0).contains(&height) {
                    return Err(Error::InvalidParams(format!(
                        "cut height {height} outside (-1, 1)"
                    )));
                }
                let thin = self.thin_min_dist.ok_or_else(|| {
                    Error::InvalidParams("cut_sphere sampler needs thin_min_dist".into())
                })?;
                let link = self.link_radius.ok_or_else(|| {
                    Error::InvalidParams("cut_sphere sampler needs link_radius".into())
                })?;
                if !(thin > 0.0) || !(link > 0.0) {
                    return Err(Error::InvalidParams(
                        "thin_min_dist and link_radius must be positive".into(),
                    ));
                }
                if link < thin {
                    return Err(Error::InvalidParams(format!(
                        "link_radius {link} below thin_min_dist {thin}: graph would disconnect"
                    )));
                }
            }
            SamplerConfig::Circle { count, circumference } => {
                if count == 0 || !(circumference > 0.0) {
                    return Err(Error::InvalidParams(
                        "circle sampler needs positive count and circumference".into(),
                    ));
                }
            }
            SamplerConfig::Cylinder { count, circumference, width } => {
                if count == 0 || !(circumference > 0.0) || width < 0.0 {
                    return Err(Error::InvalidParams(
                        "cylinder sampler needs positive count/circumference, width >= 0".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Parse(format!("serialize config: {e}")))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let config: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Parse(format!("parse config: {e}")))?;
        config.validate()?;
        Ok(config)
    }
}

/// Named presets mirroring the standard cut-sphere experiments at desk
/// scale, plus an exact-circle smoke preset.
pub fn preset(name: &str, seed: u64) -> Result<ExperimentConfig> {
    let sphere = SamplerConfig::CutSphere { count: 6000, height: 0.35 };
    let base = |name: &str, b: ScaleSpec| ExperimentConfig {
        name: name.to_string(),
        seed,
        output_dir: PathBuf::from(format!("out/{name}-seed{seed}")),
        sampler: sphere.clone(),
        thin_min_dist: Some(0.2),
        link_radius: Some(0.45),
        params: ParamsConfig {
            a: ScaleSpec::Identity,
            b,
            max_clusters: 3,
            max_dim: 3,
            r_max: 2.2,
            p: 2,
            simplex_budget: None,
        },
    };
    let config = match name {
        "fig6-selective" => base("fig6-selective", ScaleSpec::Linear { slope: 0.3 }),
        "fig6-rips" => base("fig6-rips", ScaleSpec::Identity),
        "fig8-mixed" => base("fig8-mixed", ScaleSpec::CappedLinear { offset: 0.7, slope: 0.3 }),
        "circle" => ExperimentConfig {
            name: "circle".into(),
            seed,
            output_dir: PathBuf::from(format!("out/circle-seed{seed}")),
            sampler: SamplerConfig::Circle {
                count: 120,
                circumference: std::f64::consts::TAU,
            },
            thin_min_dist: None,
            link_radius: None,
            params: ParamsConfig {
                a: ScaleSpec::Identity,
                b: ScaleSpec::Identity,
                max_clusters: 3,
                max_dim: 2,
                r_max: std::f64::consts::TAU * 0.45,
                p: 2,
                simplex_budget: None,
            },
        },
        other => {
            return Err(Error::InvalidParams(format!(
                "unknown preset {other:?}; available: fig6-selective, fig6-rips, fig8-mixed, circle"
            )))
        }
    };
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trips_through_toml() {
        for name in ["fig6-selective", "fig6-rips", "fig8-mixed", "circle"] {
            let config = preset(name, 7).unwrap();
            let text = config.to_toml().unwrap();
            let back = ExperimentConfig::from_toml(&text).unwrap();
            assert_eq!(back, config, "preset {name}");
        }
    }

    #[test]
    fn scale_spec_parses_compact_forms() {
        assert_eq!(ScaleSpec::parse("identity").unwrap(), ScaleSpec::Identity);
        assert_eq!(
            ScaleSpec::parse("linear:0.3").unwrap(),
            ScaleSpec::Linear { slope: 0.3 }
        );
        assert_eq!(
            ScaleSpec::parse("capped:0.7,0.3").unwrap(),
            ScaleSpec::CappedLinear { offset: 0.7, slope: 0.3 }
        );
        assert!(ScaleSpec::parse("cubic:2").is_err());
        // Display form parses back.
        for spec in [
            ScaleSpec::Identity,
            ScaleSpec::Linear { slope: 0.25 },
            ScaleSpec::CappedLinear { offset: 0.5, slope: 0.1 },
        ] {
            assert_eq!(ScaleSpec::parse(&spec.to_string()).unwrap(), spec);
        }
    }

    #[test]
    fn validation_rejects_inconsistent_configs() {
        let mut config = preset("fig6-selective", 1).unwrap();
        config.link_radius = Some(0.1); // below thin_min_dist 0.2
        assert!(config.validate().is_err());

        let mut config = preset("fig6-selective", 1).unwrap();
        config.thin_min_dist = None;
        assert!(config.validate().is_err());

        // b above a violates the scale-map ordering.
        let mut config = preset("fig6-selective", 1).unwrap();
        config.params.b = ScaleSpec::Linear { slope: 2.0 };
        assert!(config.validate().is_err());
    }

    #[test]
    fn unknown_preset_is_an_error() {
        assert!(preset("fig9", 0).is_err());
    }
}
