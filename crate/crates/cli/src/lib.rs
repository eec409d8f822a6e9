//! Verification suites, solvers and JSON reports behind the `echcalc` binary.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use ech_calculus::error::GluingError;
use ech_calculus::scalar::Backend;
use ech_calculus::GaussRat;
use serde::Serialize;

pub mod solve;
pub mod suites;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURES: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const NUMERIC_RANGE: i32 = 3;
    pub const INADMISSIBLE: i32 = 4;
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    UnknownSuite(String),
    Usage(String),
    NumericRange(String),
    Inadmissible(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::UnknownSuite(_) | CliError::Usage(_) => exit::USAGE,
            CliError::NumericRange(_) => exit::NUMERIC_RANGE,
            CliError::Inadmissible(_) => exit::INADMISSIBLE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::UnknownSuite(s) => write!(f, "unknown suite `{s}`"),
            CliError::Usage(s) => write!(f, "usage error: {s}"),
            CliError::NumericRange(s) => write!(f, "numeric range error: {s}"),
            CliError::Inadmissible(s) => write!(f, "inadmissible restriction: {s}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<GluingError> for CliError {
    fn from(e: GluingError) -> Self {
        match e {
            GluingError::NumericRange(s) => CliError::NumericRange(s),
            GluingError::Inadmissible => CliError::Inadmissible("entries must be nonzero and pairwise distinct".into()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Indices,
    Deficit,
    Writhe,
    Gluing,
    Degree,
    AppendixA,
    AppendixB,
    Chain,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Indices,
        Suite::Deficit,
        Suite::Writhe,
        Suite::Gluing,
        Suite::Degree,
        Suite::AppendixA,
        Suite::AppendixB,
        Suite::Chain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Indices => "indices",
            Suite::Deficit => "deficit",
            Suite::Writhe => "writhe",
            Suite::Gluing => "gluing",
            Suite::Degree => "degree",
            Suite::AppendixA => "appendix-a",
            Suite::AppendixB => "appendix-b",
            Suite::Chain => "chain",
        }
    }

    /// Range of `n` (or of `m` for the partition suites, or of the generator count for
    /// random chain complexes) used when `--n` is absent.
    pub fn default_range(self) -> NRange {
        let (lo, hi) = match self {
            Suite::Indices => (3, 8),
            Suite::Deficit => (1, 20),
            Suite::Writhe => (1, 12),
            Suite::Gluing => (4, 6),
            Suite::Degree => (3, 6),
            Suite::AppendixA => (4, 7),
            Suite::AppendixB => (4, 8),
            Suite::Chain => (2, 8),
        };
        NRange { lo, hi }
    }

    fn min_n(self) -> usize {
        match self {
            Suite::Indices | Suite::Degree => 3,
            Suite::Gluing | Suite::AppendixA | Suite::AppendixB => 4,
            Suite::Deficit | Suite::Writhe => 1,
            Suite::Chain => 1,
        }
    }
}

impl FromStr for Suite {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| CliError::UnknownSuite(s.to_string()))
    }
}

/// Inclusive range written `a..b`, `a..=b` or `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NRange {
    pub lo: usize,
    pub hi: usize,
}

impl NRange {
    pub fn values(self) -> Vec<usize> {
        (self.lo..=self.hi).collect()
    }

    /// Value used by trial `t`, cycling through the range.
    pub fn cycle(self, t: usize) -> usize {
        self.lo + t % (self.hi - self.lo + 1)
    }
}

impl FromStr for NRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("bad range `{s}`"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => (parse(s)?, parse(s)?),
        };
        if lo > hi {
            return Err(format!("empty range `{s}`"));
        }
        Ok(NRange { lo, hi })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    pub n: Option<NRange>,
    pub m: Option<usize>,
    pub backend: Backend,
    pub tol: f64,
    pub fixture: Option<PathBuf>,
}

impl SuiteConfig {
    pub fn new(suite: Suite) -> Self {
        SuiteConfig { suite, seed: 0, trials: 10, n: None, m: None, backend: Backend::Exact, tol: 1e-9, fixture: None }
    }

    pub fn range(&self) -> NRange {
        self.n.unwrap_or_else(|| self.suite.default_range())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.trials == 0 {
            return Err(CliError::Usage("--trials must be at least 1".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Usage("--tol must be positive".into()));
        }
        if self.range().lo < self.suite.min_n() {
            return Err(CliError::Usage(format!("suite {} needs n >= {}", self.suite.name(), self.suite.min_n())));
        }
        if self.m == Some(0) {
            return Err(CliError::Usage("--m must be at least 1".into()));
        }
        if self.backend == Backend::Float && matches!(self.suite, Suite::AppendixA | Suite::AppendixB) {
            return Err(CliError::Usage(format!("suite {} is exact-only", self.suite.name())));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub pass: bool,
    pub inputs: serde_json::Value,
    pub result: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    pub n_range: NRange,
    pub m: Option<usize>,
    pub backend: Backend,
    pub tolerance: f64,
    pub passed: usize,
    pub failed: usize,
    pub records: Vec<TrialRecord>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.failed == 0 { exit::OK } else { exit::FAILURES }
    }
}

/// Parses a comma-separated list of complex literals.
pub fn parse_complex_list(s: &str) -> Result<Vec<GaussRat>, CliError> {
    s.split(',')
        .map(|x| x.trim().parse::<GaussRat>().map_err(|e| CliError::Usage(format!("`{x}`: {e}"))))
        .collect()
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}
