//! Campaign configuration: which checks to run, over which fields and sizes.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use nilorbit::constructions::DEFAULT_SAMPLE_BOUND;
use nilorbit::FieldSpec;
use serde::{Deserialize, Serialize};

use crate::HarnessError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    UpperboundI,
    UpperboundIi,
    RankWitness,
    ExistenceWitness,
    Vanishing,
    Nonvanishing,
    TopComponent,
    MonomialBound,
    DConsistency,
    MvdkReduction,
    OracleEquivalence,
}

/// How a check ranges over the configured fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldUse {
    /// Field-independent (pure combinatorics).
    None,
    All,
    RationalOnly,
}

impl Check {
    pub const ALL: [Check; 11] = [
        Check::UpperboundI,
        Check::UpperboundIi,
        Check::RankWitness,
        Check::ExistenceWitness,
        Check::Vanishing,
        Check::Nonvanishing,
        Check::TopComponent,
        Check::MonomialBound,
        Check::DConsistency,
        Check::MvdkReduction,
        Check::OracleEquivalence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::UpperboundI => "upperbound-i",
            Check::UpperboundIi => "upperbound-ii",
            Check::RankWitness => "rank-witness",
            Check::ExistenceWitness => "existence-witness",
            Check::Vanishing => "vanishing",
            Check::Nonvanishing => "nonvanishing",
            Check::TopComponent => "top-component",
            Check::MonomialBound => "monomial-bound",
            Check::DConsistency => "d-consistency",
            Check::MvdkReduction => "mvdk-reduction",
            Check::OracleEquivalence => "oracle-equivalence",
        }
    }

    /// Size bound used when the configuration gives none. For `rank-witness`
    /// this bounds the nilpotency index `i`.
    pub fn default_n_max(self) -> usize {
        match self {
            Check::RankWitness => 12,
            Check::ExistenceWitness | Check::DConsistency => 8,
            Check::TopComponent | Check::MonomialBound => 5,
            _ => 6,
        }
    }

    /// Samples per cell when the configuration gives none; `None` for
    /// deterministic checks, whose trial count is fixed by the cell.
    pub fn default_trials(self) -> Option<u64> {
        match self {
            Check::UpperboundI => Some(50),
            Check::UpperboundIi | Check::Vanishing | Check::MvdkReduction => Some(100),
            Check::Nonvanishing => Some(nilorbit::splitting::DEFAULT_MAX_TRIALS),
            Check::TopComponent => Some(5),
            Check::OracleEquivalence => Some(100),
            Check::RankWitness
            | Check::ExistenceWitness
            | Check::MonomialBound
            | Check::DConsistency => None,
        }
    }

    pub fn field_use(self) -> FieldUse {
        match self {
            Check::MonomialBound | Check::DConsistency => FieldUse::None,
            Check::TopComponent => FieldUse::RationalOnly,
            _ => FieldUse::All,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| HarnessError::Config(format!("unknown check {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(HarnessError::Config(format!("unknown format {s:?}"))),
        }
    }
}

pub fn default_fields() -> Vec<FieldSpec> {
    vec![
        FieldSpec::Rational,
        FieldSpec::Prime(2),
        FieldSpec::Prime(3),
        FieldSpec::Prime(5),
        FieldSpec::Prime(7),
    ]
}

/// Fully resolved campaign parameters. Everything here is recorded in the
/// report, so a report alone suffices to replay any of its trials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub targets: Vec<Check>,
    /// Overrides every check's default size bound when set.
    pub n_max: Option<usize>,
    #[serde(with = "field_list")]
    pub fields: Vec<FieldSpec>,
    /// Overrides every randomized check's default sample count when set.
    pub trials: Option<u64>,
    pub seed: u64,
    /// Entries of random conjugators over ℚ are drawn from `[-bound, bound]`.
    pub bound: i64,
    /// Trial ids whose outcome is forced to a violation, for exercising the
    /// reporting and replay paths.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inject: Vec<String>,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            targets: Check::ALL.to_vec(),
            n_max: None,
            fields: default_fields(),
            trials: None,
            seed: 0,
            bound: DEFAULT_SAMPLE_BOUND,
            inject: Vec::new(),
        }
    }
}

impl CampaignConfig {
    pub fn n_max_for(&self, check: Check) -> usize {
        self.n_max.unwrap_or(check.default_n_max())
    }

    pub fn trials_for(&self, check: Check) -> Option<u64> {
        check.default_trials().map(|d| self.trials.unwrap_or(d))
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.targets.is_empty() {
            return Err(HarnessError::Config("no targets selected".into()));
        }
        if self.fields.is_empty() {
            return Err(HarnessError::Config("no fields selected".into()));
        }
        if let Some(n) = self.n_max {
            if n < 2 {
                return Err(HarnessError::Config(format!("n_max must be at least 2, got {n}")));
            }
        }
        if self.trials == Some(0) {
            return Err(HarnessError::Config("trials must be at least 1".into()));
        }
        if self.bound < 1 {
            return Err(HarnessError::Config(format!("bound must be positive, got {}", self.bound)));
        }
        for f in &self.fields {
            // re-validate moduli that arrived through a config file
            f.to_string().parse::<FieldSpec>().map_err(|e| HarnessError::Config(e.to_string()))?;
        }
        Ok(())
    }
}

/// The JSON shape accepted by `--config`: every key optional.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub targets: Option<Vec<Check>>,
    pub n_max: Option<usize>,
    #[serde(default, with = "opt_field_list")]
    pub fields: Option<Vec<FieldSpec>>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub bound: Option<i64>,
    pub inject: Option<Vec<String>>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))
    }

    /// Applies `over` on top of `self`: keys set in `over` win.
    pub fn merge(self, over: ConfigFile) -> ConfigFile {
        ConfigFile {
            targets: over.targets.or(self.targets),
            n_max: over.n_max.or(self.n_max),
            fields: over.fields.or(self.fields),
            trials: over.trials.or(self.trials),
            seed: over.seed.or(self.seed),
            bound: over.bound.or(self.bound),
            inject: over.inject.or(self.inject),
            out: over.out.or(self.out),
            format: over.format.or(self.format),
        }
    }

    pub fn resolve(self) -> Result<(CampaignConfig, Option<PathBuf>, Format), HarnessError> {
        let base = CampaignConfig::default();
        let mut targets = self.targets.unwrap_or(base.targets);
        // keep the canonical order so reports do not depend on flag order
        targets.sort();
        targets.dedup();
        let mut fields = self.fields.unwrap_or(base.fields);
        fields.sort();
        fields.dedup();
        let config = CampaignConfig {
            targets,
            n_max: self.n_max,
            fields,
            trials: self.trials,
            seed: self.seed.unwrap_or(base.seed),
            bound: self.bound.unwrap_or(base.bound),
            inject: self.inject.unwrap_or_default(),
        };
        config.validate()?;
        Ok((config, self.out, self.format.unwrap_or_default()))
    }
}

pub fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>, T::Err> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(|p| p.trim().parse()).collect()
}

pub(crate) mod field_list {
    use nilorbit::FieldSpec;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(fields: &[FieldSpec], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(fields.iter().map(|f| f.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<FieldSpec>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(D::Error::custom))
            .collect()
    }
}

mod opt_field_list {
    use nilorbit::FieldSpec;
    use serde::Deserializer;

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<FieldSpec>>, D::Error> {
        super::field_list::deserialize(d).map(Some)
    }
}

pub(crate) mod opt_field {
    use nilorbit::FieldSpec;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(field: &Option<FieldSpec>, s: S) -> Result<S::Ok, S::Error> {
        match field {
            Some(f) => s.serialize_some(&f.to_string()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<FieldSpec>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| s.parse().map_err(D::Error::custom))
            .transpose()
    }
}
