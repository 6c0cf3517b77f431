//! Verification suites: randomized and exhaustive desk-scale runs of the
//! structural identities, reported as JSON lines (one object per check).

mod random;
mod suites;

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use serde_json::Value;

use crate::charring::FiniteCharacter;
use crate::cli::schema::{GroupDto, ModuleDto, WeightDto};
use crate::error::{Error, Result};
use crate::genchar::Window;
use crate::lattice::{CharacterGroup, GModule, Weight};

pub use suites::{
    check_decomposition, check_exact_sequence, check_generators_membership, check_inverse_identity, check_thom_pm,
};

pub const SUITES: [&str; 5] = [
    "inverse-identity",
    "thom-pm",
    "exact-sequence",
    "generators-membership",
    "decomposition",
];

pub const DEFAULT_WINDOW: (i64, i64) = (-12, 12);

#[derive(Serialize, Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Unknown,
    /// Inadmissible instance, logged and not counted.
    Skipped,
    /// An operation raised an error where a value was expected.
    Error,
}

#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub label: String,
    pub group: GroupDto,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleDto>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, Value>,
}

impl Instance {
    pub fn new(label: impl Into<String>, v: &GModule) -> Self {
        Instance {
            label: label.into(),
            group: GroupDto::of(v.group()),
            module: Some(ModuleDto::of(v)),
            params: BTreeMap::new(),
        }
    }

    pub fn bare(label: impl Into<String>, g: &CharacterGroup) -> Self {
        Instance {
            label: label.into(),
            group: GroupDto::of(g),
            module: None,
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.params
            .insert(key.into(), serde_json::to_value(value).expect("plain data serializes"));
        self
    }
}

/// A coefficient where two sides disagree.
#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub weight: WeightDto,
    pub expected: i64,
    pub found: i64,
}

impl Counterexample {
    pub fn new(w: &Weight, expected: i64, found: i64) -> Self {
        Counterexample {
            weight: WeightDto::of(w),
            expected,
            found,
        }
    }
}

#[derive(Serialize, Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub suite: String,
    pub instance: Instance,
    pub check: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass(Option<String>),
    Fail {
        counterexample: Option<Counterexample>,
        detail: String,
    },
    Unknown(String),
    Skipped(String),
    Error(Error),
}

impl Outcome {
    pub fn pass() -> Self {
        Outcome::Pass(None)
    }

    pub fn fail(detail: impl Into<String>) -> Self {
        Outcome::Fail {
            counterexample: None,
            detail: detail.into(),
        }
    }

    pub fn mismatch(w: &Weight, expected: i64, found: i64, detail: impl Into<String>) -> Self {
        Outcome::Fail {
            counterexample: Some(Counterexample::new(w, expected, found)),
            detail: detail.into(),
        }
    }
}

/// First weight (in graded order) where `found` differs from `expected`.
pub fn first_difference(expected: &FiniteCharacter, found: &FiniteCharacter) -> Option<(Weight, i64, i64)> {
    let diff = found.sub(expected);
    diff.graded_terms()
        .first()
        .map(|(w, _)| ((*w).clone(), expected.coeff(w), found.coeff(w)))
}

pub(crate) fn compare_finite(expected: &FiniteCharacter, found: &FiniteCharacter, what: &str) -> Outcome {
    match first_difference(expected, found) {
        None => Outcome::pass(),
        Some((w, e, f)) => Outcome::mismatch(&w, e, f, what.to_string()),
    }
}

/// Builds checks for one instance.
pub(crate) struct Recorder<'a> {
    suite: &'static str,
    instance: &'a Instance,
    window: Option<String>,
    timing: bool,
    out: Vec<Check>,
}

impl<'a> Recorder<'a> {
    pub fn new(suite: &'static str, instance: &'a Instance, cfg: &VerifyConfig) -> Self {
        Recorder {
            suite,
            instance,
            window: None,
            timing: cfg.timing,
            out: Vec::new(),
        }
    }

    pub fn window(mut self, w: &Window) -> Self {
        self.window = Some(w.render());
        self
    }

    pub fn run(&mut self, name: &str, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let outcome = f();
        let elapsed = self.timing.then(|| start.elapsed().as_millis() as u64);
        let (verdict, detail, counterexample) = match outcome {
            Outcome::Pass(d) => (Verdict::Pass, d, None),
            Outcome::Fail { counterexample, detail } => (Verdict::Fail, Some(detail), counterexample),
            Outcome::Unknown(d) => (Verdict::Unknown, Some(d), None),
            Outcome::Skipped(d) => (Verdict::Skipped, Some(d), None),
            Outcome::Error(e) => (Verdict::Error, Some(format!("{}: {e}", e.code())), None),
        };
        self.out.push(Check {
            suite: self.suite.to_string(),
            instance: self.instance.clone(),
            check: name.to_string(),
            verdict,
            detail,
            counterexample,
            window: self.window.clone(),
            elapsed_ms: elapsed,
        });
    }

    pub fn finish(self) -> Vec<Check> {
        self.out
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Overrides the per-suite number of random instances.
    pub trials: Option<usize>,
    /// `lo..hi[,…]`; defaults to `[−12,12]ⁿ`.
    pub window: Option<String>,
    pub chi: Option<Vec<i64>>,
    /// Replaces the built-in module list of the membership and
    /// decomposition suites.
    pub module: Option<GModule>,
    pub flag_limit: usize,
    /// Adds wall-clock times to the report (which makes it nondeterministic).
    pub timing: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            trials: None,
            window: None,
            chi: None,
            module: None,
            flag_limit: 8,
            timing: false,
        }
    }
}

impl VerifyConfig {
    pub fn window_for(&self, n: usize) -> Result<Window> {
        match &self.window {
            Some(s) => Window::parse(s, n),
            None => Ok(Window::cube(n, DEFAULT_WINDOW.0, DEFAULT_WINDOW.1)),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn count(&self, v: Verdict) -> usize {
        self.checks.iter().filter(|c| c.verdict == v).count()
    }

    /// No check failed or errored.
    pub fn passed(&self) -> bool {
        self.count(Verdict::Fail) == 0 && self.count(Verdict::Error) == 0
    }

    pub fn to_json_lines(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&serde_json::to_string(c).expect("report serializes"));
            s.push('\n');
        }
        s
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let v = serde_json::to_value(c.verdict).expect("verdict serializes");
            s.push_str(&format!(
                "{:<8} {} {} {}",
                v.as_str().unwrap_or_default(),
                c.suite,
                c.instance.label,
                c.check
            ));
            if let Some(d) = &c.detail {
                s.push_str(&format!(" ({d})"));
            }
            s.push('\n');
        }
        s.push_str(&format!(
            "{} checks: {} pass, {} fail, {} unknown, {} skipped, {} error\n",
            self.checks.len(),
            self.count(Verdict::Pass),
            self.count(Verdict::Fail),
            self.count(Verdict::Unknown),
            self.count(Verdict::Skipped),
            self.count(Verdict::Error)
        ));
        s
    }
}

/// Runs one suite by name, or every suite for `"all"`.
pub fn run_suite(name: &str, cfg: &VerifyConfig) -> Result<Report> {
    if let Some(w) = &cfg.window {
        // surface a malformed window before any work
        Window::parse(w, w.split(',').count())?;
    }
    let checks = match name {
        "inverse-identity" => check_inverse_identity(cfg),
        "thom-pm" => check_thom_pm(cfg),
        "exact-sequence" => check_exact_sequence(cfg),
        "generators-membership" => check_generators_membership(cfg),
        "decomposition" => check_decomposition(cfg),
        "all" => SUITES
            .iter()
            .flat_map(|s| run_suite(s, cfg).map(|r| r.checks).unwrap_or_default())
            .collect(),
        other => {
            return Err(Error::Schema {
                location: "suite".into(),
                message: format!("unknown suite {other:?}; expected one of {} or all", SUITES.join(", ")),
            })
        }
    };
    Ok(Report { checks })
}

/// Rank over `ℚ` of integer row vectors (fraction-free elimination).
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let (a, b) = (m[r][c].clone(), m[i][c].clone());
            let pivot = m[r].clone();
            for (x, y) in m[i].iter_mut().zip(&pivot) {
                *x = &*x * &a - y * &b;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Coefficients of `p` at every point of `w`, in window order.
pub fn window_vector(p: &FiniteCharacter, w: &Window) -> Vec<i64> {
    w.points(p.group()).iter().map(|x| p.coeff(x)).collect()
}
