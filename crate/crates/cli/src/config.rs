//! Experiment configuration files.
//!
//! A config is a TOML document with one table per concern:
//!
//! ```toml
//! [lattice]
//! width = 713          # ring size N
//! window = 500         # steps T to evolve
//!
//! [gliders]
//! placements = ["G38 310 0", "G18 376 9"]   # "<id> <position> <phase>", left to right
//! # catalog = "my-catalog.txt"              # default: the built-in catalog
//!
//! [errors]
//! p = 0.1              # chance of one flip at time zero
//! m = 10               # flips hit centred sites -m..=m
//!
//! [rule]
//! kind = "stability"   # or "forcing" with target = "G00+G14"
//!
//! [run]
//! settle = 60          # rows that must agree for a settled outcome
//! seed = 1
//! samples = 10000
//! ```
//!
//! Centred site `x` is lattice index `(width / 2 + x) mod width`; positions in
//! placements are lattice indices. Every table except `[lattice]` may be left
//! out.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rule110_core::{
    AsymptoticState, Catalog, ErrorModel, GliderId, LatticeConfig, Placement, WeightRule,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub lattice: LatticeSection,
    #[serde(default)]
    pub gliders: GliderSection,
    #[serde(default)]
    pub errors: ErrorSection,
    #[serde(default)]
    pub rule: RuleSection,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSection {
    pub width: usize,
    pub window: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GliderSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalog: Option<PathBuf>,
    #[serde(default)]
    pub placements: Vec<PlacementSpec>,
}

/// `"<id> <position> <phase>"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PlacementSpec(pub Placement);

impl FromStr for PlacementSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let fields: Vec<&str> = s.split_whitespace().collect();
        let [id, pos, phase] = fields[..] else {
            return Err(format!("placement `{s}` should be `<id> <position> <phase>`"));
        };
        let pos = pos
            .parse()
            .map_err(|_| format!("bad position in placement `{s}`"))?;
        let phase = phase
            .parse()
            .map_err(|_| format!("bad phase in placement `{s}`"))?;
        Ok(Self(Placement::new(GliderId::new(id), pos, phase)))
    }
}

impl TryFrom<String> for PlacementSpec {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<PlacementSpec> for String {
    fn from(p: PlacementSpec) -> String {
        p.to_string()
    }
}

impl fmt::Display for PlacementSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.0.id, self.0.position, self.0.phase)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorSection {
    pub p: f64,
    pub m: u32,
}

impl Default for ErrorSection {
    fn default() -> Self {
        Self { p: 0.1, m: 10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleKind {
    #[default]
    Stability,
    Forcing,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleSection {
    #[serde(default)]
    pub kind: RuleKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub settle: usize,
    pub seed: u64,
    pub samples: usize,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            settle: 60,
            seed: 1,
            samples: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcomes: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modified: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagrams: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn placements(&self) -> Vec<Placement> {
        self.gliders.placements.iter().map(|p| p.0.clone()).collect()
    }

    pub fn error_model(&self) -> Result<ErrorModel, CliError> {
        let m = ErrorModel::new(self.errors.p, self.errors.m)?;
        m.check_width(self.lattice.width)?;
        Ok(m)
    }

    pub fn lattice_config(&self, catalog: &Catalog) -> Result<LatticeConfig, CliError> {
        Ok(LatticeConfig::validated(
            self.lattice.width,
            self.lattice.window,
            catalog.v_max(),
        )?)
    }

    pub fn weight_rule(&self) -> Result<WeightRule, CliError> {
        match (self.rule.kind, &self.rule.target) {
            (RuleKind::Stability, None) => Ok(WeightRule::Stability),
            (RuleKind::Stability, Some(_)) => Err(CliError::Config(
                "a target is only meaningful for the forcing rule".into(),
            )),
            (RuleKind::Forcing, Some(t)) => {
                let target: AsymptoticState = t.parse()?;
                Ok(WeightRule::forcing(target)?)
            }
            (RuleKind::Forcing, None) => {
                Err(CliError::Config("the forcing rule needs a target".into()))
            }
        }
    }
}

/// A parsed config together with where it came from.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: ExperimentConfig,
    pub dir: PathBuf,
    /// First 12 hex digits of the SHA-256 of the file bytes.
    pub hash: String,
}

impl LoadedConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        let text = String::from_utf8(bytes.clone())
            .map_err(|_| CliError::Config(format!("{} is not UTF-8", path.display())))?;
        let config = ExperimentConfig::parse(&text)?;
        let digest = Sha256::digest(&bytes);
        let hash = digest[..6].iter().map(|b| format!("{b:02x}")).collect();
        Ok(Self {
            config,
            dir: path.parent().map(Path::to_path_buf).unwrap_or_default(),
            hash,
        })
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.dir.join(p)
        }
    }

    /// The configured catalog, or the built-in one.
    pub fn catalog(&self) -> Result<std::borrow::Cow<'static, Catalog>, CliError> {
        match &self.config.gliders.catalog {
            None => Ok(std::borrow::Cow::Borrowed(Catalog::builtin())),
            Some(p) => {
                let path = self.resolve(p);
                let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
                Ok(std::borrow::Cow::Owned(Catalog::parse(&text)?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL: &str = r#"
[lattice]
width = 713
window = 500

[gliders]
placements = ["G38 310 0", "G18 376 9"]

[errors]
p = 0.1
m = 10

[rule]
kind = "forcing"
target = "G00+G14"

[run]
settle = 60
seed = 7
samples = 100
"#;

    #[test]
    fn parses_all_sections() {
        let c = ExperimentConfig::parse(FULL).unwrap();
        assert_eq!(c.lattice.width, 713);
        assert_eq!(c.placements()[1], Placement::new("G18", 376, 9));
        assert_eq!(c.errors.m, 10);
        assert_eq!(c.run.seed, 7);
        assert_eq!(c.weight_rule().unwrap().to_string(), "forcing:G00+G14");
    }

    #[test]
    fn round_trip_is_identity() {
        let c = ExperimentConfig::parse(FULL).unwrap();
        let again = ExperimentConfig::parse(&c.to_toml()).unwrap();
        assert_eq!(again, c);
        let minimal = ExperimentConfig::parse("[lattice]\nwidth = 28\nwindow = 10\n").unwrap();
        assert_eq!(ExperimentConfig::parse(&minimal.to_toml()).unwrap(), minimal);
    }

    #[test]
    fn defaults_fill_missing_tables() {
        let c = ExperimentConfig::parse("[lattice]\nwidth = 28\nwindow = 10\n").unwrap();
        assert!(c.placements().is_empty());
        assert_eq!(c.errors, ErrorSection::default());
        assert_eq!(c.weight_rule().unwrap(), WeightRule::Stability);
    }

    #[test]
    fn rejects_bad_input() {
        for bad in [
            "[lattice]\nwidth = 28\n",
            "[lattice]\nwidth = 28\nwindow = 10\nextra = 1\n",
            "[lattice]\nwidth = 28\nwindow = 10\n[gliders]\nplacements = [\"G01 x 0\"]\n",
            "[lattice]\nwidth = 28\nwindow = 10\n[gliders]\nplacements = [\"G01 3\"]\n",
        ] {
            assert!(matches!(ExperimentConfig::parse(bad), Err(CliError::Config(_))), "{bad}");
        }
        let forcing = ExperimentConfig::parse(
            "[lattice]\nwidth = 28\nwindow = 10\n[rule]\nkind = \"forcing\"\n",
        )
        .unwrap();
        assert!(forcing.weight_rule().is_err());
    }
}
