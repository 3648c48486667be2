//! Experiment configuration files.
//!
//! A config is TOML with the sections below; every section except `[group]`
//! and `[radius]` may be omitted.
//!
//! ```toml
//! experiment = "theorem_a"
//! seed = 7
//!
//! [group]
//! kind = "free"            # free | free_product | small_cancellation
//! rank = 2
//! # orders = [2, 0]        # free_product; 0 is an infinite factor
//! # relators = ["abABcdCD"]
//!
//! [subgroups]
//! h = ["a"]
//! k = ["a"]
//!
//! [elements]
//! g_h = "bab"
//! g_k = "bab"
//! extension_set = ["abab", "aBaB", "abbabb"]
//! conjugator = "b"
//! barrier = "a"
//!
//! [parameters]
//! power_m = 3
//! epsilon = 0
//! theta = 0.5
//! l_min = 3
//!
//! [radius]
//! r_min = 4
//! r_max = 10
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Budgets, GroupOracle, Presentation, DEFAULT_BALL_CAP, DEFAULT_SC_RADIUS};
use crate::word::{free_reduce, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExperimentKind {
    Growth,
    DoubleCosets,
    TheoremA,
    Injection,
    Genericity,
    BarrierStats,
    FreeProduct,
    GenericImage,
    Calibration,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 9] = [
        ExperimentKind::Growth,
        ExperimentKind::DoubleCosets,
        ExperimentKind::TheoremA,
        ExperimentKind::Injection,
        ExperimentKind::Genericity,
        ExperimentKind::BarrierStats,
        ExperimentKind::FreeProduct,
        ExperimentKind::GenericImage,
        ExperimentKind::Calibration,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Growth => "growth",
            ExperimentKind::DoubleCosets => "double_cosets",
            ExperimentKind::TheoremA => "theorem_a",
            ExperimentKind::Injection => "injection",
            ExperimentKind::Genericity => "genericity",
            ExperimentKind::BarrierStats => "barrier_stats",
            ExperimentKind::FreeProduct => "free_product",
            ExperimentKind::GenericImage => "generic_image",
            ExperimentKind::Calibration => "calibration",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            let names: Vec<&str> = ExperimentKind::ALL.iter().map(|k| k.name()).collect();
            Error::config("experiment", format!("unknown experiment `{s}`, expected one of {}", names.join(", ")))
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    Free,
    FreeProduct,
    SmallCancellation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSection {
    pub kind: GroupKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    /// Cyclic factor orders; 0 stands for an infinite factor.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub orders: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relators: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupSection {
    #[serde(default)]
    pub h: Vec<String>,
    #[serde(default)]
    pub k: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ElementSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g_h: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g_k: Option<String>,
    pub extension_set: Vec<String>,
    /// `g` in `H * gKg^-1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjugator: Option<String>,
    /// `f` of the `(ε, f)`-barriers.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub barrier: Option<String>,
}

impl Default for ElementSection {
    fn default() -> Self {
        ElementSection {
            g_h: None,
            g_k: None,
            extension_set: vec!["abab".into(), "aBaB".into(), "abbabb".into()],
            conjugator: None,
            barrier: None,
        }
    }
}

/// Double-coset predicates for the generic-image experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    All,
    None,
    /// Elements whose geodesic carries an `(ε, f)`-barrier.
    Barrier,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParameterSection {
    /// `M` in `g_H^M a t b g_K^M`.
    pub power_m: usize,
    /// `M` of the `(ε, M, f)`-barrier-free sets.
    pub barrier_m: usize,
    pub epsilon: usize,
    pub theta: f64,
    pub l_min: usize,
    /// `L` of `(L, τ)`-admissible paths.
    pub admissible_l: f64,
    pub tau: f64,
    /// Shift in `gr_{H,K}(r) >= δ gr(r - r_0)`; derived from `M`, `g_H` and the
    /// extension set when omitted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r0: Option<usize>,
    pub predicate: Predicate,
}

impl Default for ParameterSection {
    fn default() -> Self {
        ParameterSection {
            power_m: 3,
            barrier_m: 0,
            epsilon: 0,
            theta: 0.5,
            l_min: 3,
            admissible_l: 2.0,
            tau: 2.0,
            r0: None,
            predicate: Predicate::Barrier,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadiusSection {
    #[serde(default)]
    pub r_min: usize,
    pub r_max: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ThresholdSection {
    pub delta_min: f64,
    pub rate_tolerance: f64,
    pub decay_max: f64,
    pub r_squared_min: f64,
    pub lambda_max: f64,
    /// Previously recorded calibration constant, checked on rerun.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_cal: Option<f64>,
}

impl Default for ThresholdSection {
    fn default() -> Self {
        ThresholdSection {
            delta_min: 0.05,
            rate_tolerance: 0.02,
            decay_max: 0.95,
            r_squared_min: 0.98,
            lambda_max: 2.0,
            lambda_cal: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BudgetSection {
    pub ball_cap: u64,
    pub sc_radius: usize,
    /// Brute-force buffer; `2 max |generator| + 2` when omitted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub buffer: Option<usize>,
    /// Radius of the brute-force cross-check, capped by `r_max`.
    pub check_radius: usize,
    /// Formal length bound for alternating words.
    pub length_budget: usize,
    /// Alternating words examined before the verdict becomes partial.
    pub word_cap: u64,
}

impl Default for BudgetSection {
    fn default() -> Self {
        BudgetSection {
            ball_cap: DEFAULT_BALL_CAP,
            sc_radius: DEFAULT_SC_RADIUS,
            buffer: None,
            check_radius: 6,
            length_budget: 12,
            word_cap: 10_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CalibrationSection {
    pub specs: usize,
    pub l_values: Vec<u32>,
    pub tau_values: Vec<u32>,
    pub max_pieces: usize,
    pub max_connector: usize,
    /// Roots of the contracting system the axes are drawn from.
    pub roots: Vec<String>,
}

impl Default for CalibrationSection {
    fn default() -> Self {
        CalibrationSection {
            specs: 100,
            l_values: vec![5, 6, 7, 8],
            tau_values: vec![1, 2],
            max_pieces: 4,
            max_connector: 3,
            roots: vec!["a".into(), "b".into(), "ab".into(), "aB".into()],
        }
    }
}

/// The file as written, with defaults filled in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<String>,
    #[serde(default)]
    pub seed: u64,
    pub group: GroupSection,
    #[serde(default)]
    pub subgroups: SubgroupSection,
    #[serde(default)]
    pub elements: ElementSection,
    #[serde(default)]
    pub parameters: ParameterSection,
    pub radius: RadiusSection,
    #[serde(default)]
    pub thresholds: ThresholdSection,
    #[serde(default)]
    pub budgets: BudgetSection,
    #[serde(default)]
    pub calibration: CalibrationSection,
}

/// A validated configuration. Words are checked against the alphabet and
/// freely reduced; normal forms in the group are left to the experiments.
#[derive(Debug)]
pub struct ExperimentConfig {
    pub file: ConfigFile,
    pub oracle: GroupOracle,
    pub experiment: Option<ExperimentKind>,
    pub h: Vec<Word>,
    pub k: Vec<Word>,
    pub g_h: Option<Word>,
    pub g_k: Option<Word>,
    pub extension_set: Vec<Word>,
    pub conjugator: Option<Word>,
    pub barrier: Option<Word>,
    pub calibration_roots: Vec<Word>,
}

fn check(ok: bool, field: &str, message: impl Into<String>) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::config(field, message))
    }
}

fn build_oracle(group: &GroupSection, budgets: &BudgetSection) -> Result<GroupOracle> {
    let b = Budgets { ball_cap: budgets.ball_cap, sc_radius: budgets.sc_radius };
    let wrap = |field: &str| {
        let field = field.to_string();
        move |e: Error| match e {
            Error::Config { .. } => e,
            other => Error::config(field.clone(), other.to_string()),
        }
    };
    match group.kind {
        GroupKind::Free => {
            let rank = group.rank.ok_or_else(|| Error::config("group.rank", "required for a free group"))?;
            GroupOracle::with_budgets(Presentation::Free { rank }, b).map_err(wrap("group.rank"))
        }
        GroupKind::FreeProduct => {
            check(!group.orders.is_empty(), "group.orders", "required for a free product")?;
            if let Some(rank) = group.rank {
                check(rank == group.orders.len(), "group.rank", "must equal the number of orders")?;
            }
            let orders = group.orders.iter().map(|&n| (n != 0).then_some(n)).collect();
            GroupOracle::with_budgets(Presentation::FreeProduct { orders }, b).map_err(wrap("group.orders"))
        }
        GroupKind::SmallCancellation => {
            check(!group.relators.is_empty(), "group.relators", "required for a small-cancellation group")?;
            let relators = group
                .relators
                .iter()
                .map(|r| Word::parse(r).map_err(wrap("group.relators")))
                .collect::<Result<Vec<_>>>()?;
            let rank = match group.rank {
                Some(r) => r,
                None => relators.iter().filter_map(|r| r.max_generator()).max().map_or(1, |g| g + 1),
            };
            GroupOracle::build(rank, Presentation::SmallCancellation { relators }, b).map_err(wrap("group.relators"))
        }
    }
}

impl ExperimentConfig {
    /// Validate a parsed file.
    pub fn resolve(file: ConfigFile) -> Result<ExperimentConfig> {
        let p = &file.parameters;
        check(p.theta > 0.0 && p.theta <= 1.0, "parameters.theta", format!("must lie in (0, 1], got {}", p.theta))?;
        check(p.power_m >= 1, "parameters.power_m", "must be at least 1")?;
        check(p.tau > 0.0, "parameters.tau", "must be positive")?;
        check(p.admissible_l >= 0.0, "parameters.admissible_l", "must be nonnegative")?;
        check(
            file.radius.r_min < file.radius.r_max,
            "radius.r_min",
            format!("must be below r_max ({} >= {})", file.radius.r_min, file.radius.r_max),
        )?;
        let t = &file.thresholds;
        check(t.r_squared_min <= 1.0, "thresholds.r_squared_min", "must be at most 1")?;
        check(t.decay_max > 0.0, "thresholds.decay_max", "must be positive")?;
        let c = &file.calibration;
        check(!c.l_values.is_empty(), "calibration.l_values", "must not be empty")?;
        check(!c.tau_values.is_empty(), "calibration.tau_values", "must not be empty")?;
        check(c.max_pieces >= 1, "calibration.max_pieces", "must be at least 1")?;

        let experiment = file.experiment.as_deref().map(str::parse).transpose()?;
        let oracle = build_oracle(&file.group, &file.budgets)?;
        let alphabet = oracle.alphabet();
        let word = |field: &str, text: &str| -> Result<Word> {
            let w = alphabet.parse(text).map_err(|e| Error::config(field, e.to_string()))?;
            Ok(free_reduce(w.letters().iter().copied()))
        };
        let words = |field: &str, texts: &[String]| -> Result<Vec<Word>> {
            texts.iter().map(|t| word(field, t)).collect()
        };
        let opt = |field: &str, text: &Option<String>| text.as_deref().map(|t| word(field, t)).transpose();
        let nontrivial = |field: &str, w: &Option<Word>| {
            check(w.as_ref().is_none_or(|w| !w.is_empty()), field, "must be a nontrivial element")
        };

        let e = &file.elements;
        let cfg = ExperimentConfig {
            h: words("subgroups.h", &file.subgroups.h)?,
            k: words("subgroups.k", &file.subgroups.k)?,
            g_h: opt("elements.g_h", &e.g_h)?,
            g_k: opt("elements.g_k", &e.g_k)?,
            extension_set: words("elements.extension_set", &e.extension_set)?,
            conjugator: opt("elements.conjugator", &e.conjugator)?,
            barrier: opt("elements.barrier", &e.barrier)?,
            calibration_roots: words("calibration.roots", &c.roots)?,
            experiment,
            oracle,
            file,
        };
        nontrivial("elements.g_h", &cfg.g_h)?;
        nontrivial("elements.g_k", &cfg.g_k)?;
        nontrivial("elements.barrier", &cfg.barrier)?;
        check(cfg.extension_set.iter().all(|w| !w.is_empty()), "elements.extension_set", "elements must be nontrivial")?;
        check(cfg.calibration_roots.iter().all(|w| !w.is_empty()), "calibration.roots", "roots must be nontrivial")?;
        Ok(cfg)
    }

    /// `r_0`: the configured value, else `2 M max(|g_H|, |g_K|) + 2 max |f|`
    /// when `g_H` is set, else 0.
    pub fn r0(&self) -> usize {
        if let Some(r0) = self.file.parameters.r0 {
            return r0;
        }
        let g = self.g_h.iter().chain(&self.g_k).map(Word::len).max();
        match g {
            Some(g) => {
                let f = self.extension_set.iter().map(Word::len).max().unwrap_or(0);
                2 * self.file.parameters.power_m * g + 2 * f
            }
            None => 0,
        }
    }

    /// The resolved file as TOML, derived quantities included.
    pub fn echo(&self) -> String {
        let mut file = self.file.clone();
        file.parameters.r0 = Some(self.r0());
        toml::to_string(&file).expect("config serializes")
    }
}

/// Parse a TOML config without validating it, e.g. to apply overrides first.
pub fn parse_config_file(text: &str) -> Result<ConfigFile> {
    toml::from_str(text).map_err(|e| {
        let field = e.span().map_or_else(|| "config".to_string(), |s| locate(text, s.start));
        Error::config(field, e.message().trim().to_string())
    })
}

/// Parse and validate a TOML config.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    ExperimentConfig::resolve(parse_config_file(text)?)
}

fn locate(text: &str, offset: usize) -> String {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    format!("line {line}, column {col}")
}
