//! JSON run configurations.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::dn_map::DEFAULT_M_MAX;
use crate::error::{Error, Result};
use crate::warping::{self, WarpingProfile, DEFAULT_NODE_COUNT, MIN_NODE_COUNT};

use super::expr;

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileSpec {
    Chebyshev { coefficients: Vec<f64> },
    Expression { text: String },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ProfileKind {
    Chebyshev,
    Expression,
}

// a flat struct rather than an internally tagged enum keeps full error paths
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProfile {
    kind: ProfileKind,
    coefficients: Option<Vec<f64>>,
    text: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    dimension: i64,
    frequency: f64,
    profile: RawProfile,
    m_max: Option<i64>,
    node_count: Option<i64>,
    #[serde(alias = "output")]
    output_path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dimension: usize,
    pub frequency: f64,
    pub profile: ProfileSpec,
    pub m_max: usize,
    pub node_count: usize,
    pub output_path: Option<PathBuf>,
}

fn field_error(field: &str, message: impl Into<String>) -> Error {
    Error::Config {
        field: field.into(),
        message: message.into(),
    }
}

impl RunConfig {
    /// Parses and validates a configuration from JSON text.
    pub fn from_json(text: &str) -> Result<Self> {
        let mut de = serde_json::Deserializer::from_str(text);
        let raw: RawConfig = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let path = e.path().to_string();
            field_error(&path, e.into_inner().to_string())
        })?;
        if raw.dimension < 2 {
            return Err(field_error("dimension", format!("must be at least 2, got {}", raw.dimension)));
        }
        if !raw.frequency.is_finite() {
            return Err(field_error("frequency", "must be finite"));
        }
        let m_max = raw.m_max.unwrap_or(DEFAULT_M_MAX as i64);
        if m_max < 0 {
            return Err(field_error("m_max", format!("must be nonnegative, got {m_max}")));
        }
        let node_count = raw.node_count.unwrap_or(DEFAULT_NODE_COUNT as i64);
        if node_count < MIN_NODE_COUNT as i64 {
            return Err(field_error(
                "node_count",
                format!("must be at least {MIN_NODE_COUNT}, got {node_count}"),
            ));
        }
        let profile = match raw.profile {
            RawProfile {
                kind: ProfileKind::Chebyshev,
                coefficients: Some(coefficients),
                text: None,
            } => ProfileSpec::Chebyshev { coefficients },
            RawProfile {
                kind: ProfileKind::Expression,
                text: Some(text),
                coefficients: None,
            } => ProfileSpec::Expression { text },
            RawProfile { kind: ProfileKind::Chebyshev, .. } => {
                return Err(field_error("profile", "kind \"chebyshev\" takes exactly `coefficients`"));
            }
            RawProfile { kind: ProfileKind::Expression, .. } => {
                return Err(field_error("profile", "kind \"expression\" takes exactly `text`"));
            }
        };
        Ok(RunConfig {
            dimension: raw.dimension as usize,
            frequency: raw.frequency,
            profile,
            m_max: m_max as usize,
            node_count: node_count as usize,
            output_path: raw.output_path,
        })
    }

    /// The warping profile; expressions are sampled at `node_count` nodes.
    pub fn warping_profile(&self) -> Result<WarpingProfile> {
        let coefficients = match &self.profile {
            ProfileSpec::Chebyshev { coefficients } => coefficients.clone(),
            ProfileSpec::Expression { text } => expr::parse_expression(text, self.node_count)?,
        };
        warping::make_profile(coefficients, self.dimension, self.frequency)
    }
}

/// Reads and validates a configuration file.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    RunConfig::from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = RunConfig::from_json(
            r#"{"dimension":2, "frequency":1.0, "profile":{"kind":"chebyshev","coefficients":[1.0]}}"#,
        )
        .unwrap();
        assert_eq!((c.m_max, c.node_count), (40, 64));
        assert_eq!(c.output_path, None);
        let p = c.warping_profile().unwrap();
        assert_eq!(p.dimension(), 2);
        assert_eq!(p.lambda(), 1.0);
    }

    #[test]
    fn field_paths_in_errors() {
        let bad_dim = r#"{"dimension":1, "frequency":0.0, "profile":{"kind":"chebyshev","coefficients":[1.0]}}"#;
        match RunConfig::from_json(bad_dim) {
            Err(Error::Config { field, .. }) => assert_eq!(field, "dimension"),
            other => panic!("{other:?}"),
        }
        let bad_coeff = r#"{"dimension":3, "frequency":0.0, "profile":{"kind":"chebyshev","coefficients":[1.0, "a"]}}"#;
        match RunConfig::from_json(bad_coeff) {
            Err(Error::Config { field, .. }) => assert_eq!(field, "profile.coefficients[1]"),
            other => panic!("{other:?}"),
        }
        let small_grid = r#"{"dimension":3, "frequency":0.0, "node_count": 8, "profile":{"kind":"chebyshev","coefficients":[1.0]}}"#;
        let mixed = r#"{"dimension":3, "frequency":0.0, "profile":{"kind":"expression","coefficients":[1.0]}}"#;
        assert!(matches!(
            RunConfig::from_json(mixed),
            Err(Error::Config { field, .. }) if field == "profile"
        ));
        assert!(matches!(
            RunConfig::from_json(small_grid),
            Err(Error::Config { field, .. }) if field == "node_count"
        ));
    }

    #[test]
    fn expression_profiles() {
        let c = RunConfig::from_json(
            r#"{"dimension":3, "frequency":0.0, "m_max": 5, "output": "s.csv",
                "profile":{"kind":"expression","text":"(1+0.2*x)^2"}}"#,
        )
        .unwrap();
        assert_eq!(c.output_path, Some(PathBuf::from("s.csv")));
        let p = c.warping_profile().unwrap();
        assert!((p.f1() - 1.44).abs() < 1e-14);
    }
}
