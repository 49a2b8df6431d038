//! Validated run configuration shared by all subcommands.

use std::fmt;
use std::path::PathBuf;

use arcsine_fock::scalar::serde_string;
use arcsine_fock::{Engine, ExactScalar, JacobiSequence, ScaleRule};
use clap::ValueEnum;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Moments,
    Converge,
    Reconstruct,
    Classical,
    Selfcheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum EngineChoice {
    Words,
    #[default]
    Tridiagonal,
}

impl From<EngineChoice> for Engine {
    fn from(e: EngineChoice) -> Self {
        match e {
            EngineChoice::Words => Engine::Words,
            EngineChoice::Tridiagonal => Engine::Tridiagonal,
        }
    }
}

/// Everything a run depends on. Computation is deterministic, so two runs
/// of equal configs write identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub jacobi: JacobiSequence,
    #[serde(rename = "N")]
    pub states: Vec<usize>,
    pub orders: Vec<usize>,
    #[serde(with = "scale_string")]
    pub scale: ScaleRule,
    #[serde(rename = "K")]
    pub k: Option<usize>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub plot: Option<PathBuf>,
    pub engine: EngineChoice,
    #[serde(rename = "A2", with = "serde_string")]
    pub amplitude_squared: ExactScalar,
    pub panels: usize,
    pub density: Option<PathBuf>,
    pub fast: bool,
}

/// A rejected configuration; the message names the offending flag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn field_error(field: &str, detail: impl fmt::Display) -> ConfigError {
    ConfigError(format!("invalid {field}: {detail}"))
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        let (states, orders) = match command {
            Command::Moments => (vec![1], vec![2, 4]),
            Command::Converge => (vec![1, 10, 100, 1000], vec![2, 4, 6, 8]),
            Command::Reconstruct => (vec![10], Vec::new()),
            Command::Classical => (Vec::new(), vec![2, 4, 6, 8]),
            Command::Selfcheck => (Vec::new(), Vec::new()),
        };
        Self {
            command,
            jacobi: JacobiSequence::standard(),
            states,
            orders,
            scale: ScaleRule::Canonical,
            k: None,
            format: Format::Csv,
            out: None,
            plot: None,
            engine: EngineChoice::Tridiagonal,
            amplitude_squared: ExactScalar::from_integer(2.into()),
            panels: 256,
            density: None,
            fast: false,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let uses_states = matches!(
            self.command,
            Command::Moments | Command::Converge | Command::Reconstruct
        );
        let uses_orders = matches!(
            self.command,
            Command::Moments | Command::Converge | Command::Classical
        );
        if uses_states && self.states.is_empty() {
            return Err(field_error("--N", "expected at least one state index"));
        }
        if uses_orders && self.orders.is_empty() {
            return Err(field_error("--orders", "expected at least one order"));
        }
        if self.command == Command::Reconstruct {
            if self.states.len() != 1 {
                return Err(field_error("--N", "reconstruct takes a single state index"));
            }
            if self.density.is_some() && !self.jacobi.is_standard() {
                return Err(field_error(
                    "--density",
                    "the Hermite density exists only for the standard sequence",
                ));
            }
        }
        if !self.amplitude_squared.is_positive() {
            return Err(field_error(
                "--A2",
                format!("must be positive, got {}", self.amplitude_squared),
            ));
        }
        if self.panels == 0 {
            return Err(field_error("--panels", "must be at least 1"));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

mod scale_string {
    use arcsine_fock::ScaleRule;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(rule: &ScaleRule, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(rule)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ScaleRule, D::Error> {
        let text = String::deserialize(d)?;
        ScaleRule::parse(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use arcsine_fock::scalar::ratio;

    #[test]
    fn configs_round_trip() {
        let mut c = RunConfig::new(Command::Reconstruct);
        c.jacobi = JacobiSequence::parse(r#"{"kind":"explicit","omega":["1","3/2","2"]}"#).unwrap();
        c.scale = ScaleRule::Fixed(ratio(7, 3));
        c.k = Some(40);
        c.out = Some("measure.csv".into());
        c.format = Format::Json;
        for cfg in [
            c,
            RunConfig::new(Command::Converge),
            RunConfig::new(Command::Selfcheck),
        ] {
            let back: RunConfig = serde_json::from_str(&cfg.to_json()).unwrap();
            assert_eq!(back, cfg);
        }
    }

    #[test]
    fn validation_names_the_field() {
        let mut c = RunConfig::new(Command::Moments);
        c.states.clear();
        assert!(c.validate().unwrap_err().0.contains("--N"));

        let mut c = RunConfig::new(Command::Classical);
        c.amplitude_squared = ratio(-1, 2);
        assert!(c.validate().unwrap_err().0.contains("--A2"));

        let mut c = RunConfig::new(Command::Reconstruct);
        c.jacobi = JacobiSequence::parse("q=1/2").unwrap();
        c.density = Some("d.csv".into());
        assert!(c.validate().unwrap_err().0.contains("--density"));
    }

    #[test]
    fn unknown_fields_rejected() {
        let mut v: serde_json::Value =
            serde_json::from_str(&RunConfig::new(Command::Moments).to_json()).unwrap();
        v["seed"] = 3.into();
        assert!(serde_json::from_value::<RunConfig>(v).is_err());
    }
}
