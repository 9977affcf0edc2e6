use std::fmt;
use std::str::FromStr;

use sdg_core::liegroup::GroupTag;
use sdg_core::sample::DEFAULT_RANGE;
use serde::Serialize;

/// The independently selectable check suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Weil,
    Spaces,
    Calculus,
    Connection,
    Igroup,
    Liegroup,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Weil,
        Suite::Spaces,
        Suite::Calculus,
        Suite::Connection,
        Suite::Igroup,
        Suite::Liegroup,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Weil => "weil",
            Suite::Spaces => "spaces",
            Suite::Calculus => "calculus",
            Suite::Connection => "connection",
            Suite::Igroup => "igroup",
            Suite::Liegroup => "liegroup",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// Everything that determines a verification run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub dim: usize,
    pub coefficient_range: u64,
    pub suites: Vec<Suite>,
    #[serde(serialize_with = "serialize_group")]
    pub group: GroupTag,
    pub strict: bool,
    pub negative_controls: bool,
}

fn serialize_group<S: serde::Serializer>(g: &GroupTag, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&g.to_string())
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 42,
            trials: 8,
            dim: 3,
            coefficient_range: DEFAULT_RANGE,
            suites: Suite::ALL.to_vec(),
            group: GroupTag::Gl(2),
            strict: true,
            negative_controls: false,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.trials == 0 {
            return Err("trials must be at least 1".into());
        }
        if self.dim == 0 {
            return Err("dim must be at least 1".into());
        }
        if self.coefficient_range == 0 {
            return Err("range must be positive".into());
        }
        if !matches!(self.group, GroupTag::Gl(2) | GroupTag::Gl(3) | GroupTag::Heisenberg) {
            return Err(format!("unsupported group {}", self.group));
        }
        Ok(())
    }

    pub fn mode(&self) -> sdg_core::connection::Mode {
        if self.strict {
            sdg_core::connection::Mode::Strict
        } else {
            sdg_core::connection::Mode::Permissive
        }
    }
}
