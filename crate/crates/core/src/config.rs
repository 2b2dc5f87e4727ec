//! Run configuration read from a TOML file with `[regime]`, `[precision]`
//! and `[output]` sections. Command-line flags override file values.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::asymptotics::RegimeParams;
use crate::error::{Error, Result};
use crate::harness::OraclePolicy;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Config(format!("format must be csv or json, got {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub format: Format,
    pub path: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub regime: RegimeParams,
    pub precision: OraclePolicy,
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.regime.validate()?;
        if self.precision.exact_cap == 0 {
            return Err(Error::Config("exact_cap must be positive".into()));
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_partial_files() {
        let cfg = RunConfig::from_toml("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        let cfg = RunConfig::from_toml("[regime]\na = 0.1\n[output]\nformat = \"json\"\n").unwrap();
        assert_eq!(cfg.regime.a, 0.1);
        assert_eq!(cfg.regime.c, RegimeParams::default().c);
        assert_eq!(cfg.output.format, Format::Json);
    }

    #[test]
    fn round_trip() {
        let cfg = RunConfig::default();
        assert_eq!(RunConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(RunConfig::from_toml("[regime]\nalpha = 0.3\n").is_err());
        assert!(RunConfig::from_toml("[regime]\na = 0.6\n").is_err());
        assert!(RunConfig::from_toml("[regime]\nbogus = 1\n").is_err());
        assert!(RunConfig::from_toml("[output]\nformat = \"xml\"\n").is_err());
    }
}
