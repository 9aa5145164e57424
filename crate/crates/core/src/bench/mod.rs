//! Benchmark families and a side-by-side report of both engines.

mod models;

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Duration;

use serde::Serialize;
use thiserror::Error;

use crate::batch::{batch_map, Execution};
use crate::explore::{run, Algorithm, ExploreError, SearchOptions, Verdict};
use crate::model::{parse_network, TargetSpec};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(90);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Parallel,
    Fischer,
    Dining,
    Corsso,
    Critical,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Parallel, Family::Fischer, Family::Dining, Family::Corsso, Family::Critical];

    pub fn name(self) -> &'static str {
        match self {
            Family::Parallel => "parallel",
            Family::Fischer => "fischer",
            Family::Dining => "dining",
            Family::Corsso => "corsso",
            Family::Critical => "critical",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BenchError {
    #[error("unknown family '{0}' (expected parallel, fischer, dining, corsso or critical)")]
    UnknownFamily(String),
    #[error("size {size} is out of range for {family} (minimum 2, maximum {max})")]
    BadSize { family: Family, size: usize, max: usize },
    #[error("invalid size range '{0}' (expected a..b with 2 <= a <= b)")]
    BadRange(String),
}

impl FromStr for Family {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Family, BenchError> {
        Family::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| BenchError::UnknownFamily(s.to_string()))
    }
}

/// Parse `a..b` (inclusive) or a single size.
pub fn parse_sizes(text: &str) -> Result<Vec<usize>, BenchError> {
    let bad = || BenchError::BadRange(text.to_string());
    let (a, b) = match text.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let n = text.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if a < 2 || a > b {
        return Err(bad());
    }
    Ok((a..=b).collect())
}

/// One instance of a family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BenchSpec {
    pub family: Family,
    pub size: usize,
}

const MAX_SIZE: usize = 16;

/// Model text and target of an instance.
pub fn generate(spec: BenchSpec) -> Result<(String, String), BenchError> {
    if spec.size < 2 || spec.size > MAX_SIZE {
        return Err(BenchError::BadSize { family: spec.family, size: spec.size, max: MAX_SIZE });
    }
    let n = spec.size;
    Ok(match spec.family {
        Family::Parallel => models::parallel(n),
        Family::Fischer => models::fischer(n),
        Family::Dining => models::dining(n),
        Family::Corsso => models::corsso(n),
        Family::Critical => models::critical(n),
    })
}

/// The instances checked by the reduction criteria.
pub fn standard_suite() -> Vec<BenchSpec> {
    let ranges = [
        (Family::Parallel, 2..=6),
        (Family::Fischer, 2..=3),
        (Family::Dining, 2..=4),
        (Family::Corsso, 2..=3),
        (Family::Critical, 2..=3),
    ];
    ranges.into_iter().flat_map(|(family, r)| r.map(move |size| BenchSpec { family, size })).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Done { verdict: Verdict, visited: u64, stored: u64 },
    Timeout,
    Aborted { reason: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub family: Family,
    pub size: usize,
    pub engine: Algorithm,
    #[serde(flatten)]
    pub outcome: Outcome,
    pub seconds: f64,
}

impl BenchRow {
    pub fn counts(&self) -> Option<(Verdict, u64, u64)> {
        match &self.outcome {
            Outcome::Done { verdict, visited, stored } => Some((*verdict, *visited, *stored)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

/// Run both engines on every instance.
pub fn run_suite(specs: &[BenchSpec], timeout: Duration, exec: Execution) -> BenchReport {
    let jobs: Vec<(BenchSpec, Algorithm)> =
        specs.iter().flat_map(|&s| [(s, Algorithm::Global), (s, Algorithm::Local)]).collect();
    let rows = batch_map(&jobs, exec, |_, &(spec, engine)| run_one(spec, engine, timeout));
    BenchReport { rows }
}

fn run_one(spec: BenchSpec, engine: Algorithm, timeout: Duration) -> BenchRow {
    let row = |outcome, seconds| BenchRow { family: spec.family, size: spec.size, engine, outcome, seconds };
    let (text, target) = match generate(spec) {
        Ok(g) => g,
        Err(e) => return row(Outcome::Aborted { reason: e.to_string() }, 0.0),
    };
    let net = parse_network(&text).unwrap_or_else(|e| panic!("generated {} {} does not parse: {e}", spec.family, spec.size));
    let target = TargetSpec::parse(&net, &target).expect("generated target names exist");
    let opts = SearchOptions { timeout: Some(timeout), ..SearchOptions::default() };
    let started = std::time::Instant::now();
    match run(&net, engine, Some(&target), &opts, false) {
        Ok(o) => row(
            Outcome::Done { verdict: o.stats.verdict, visited: o.stats.visited, stored: o.stats.stored },
            o.stats.seconds,
        ),
        Err(ExploreError::Timeout { .. }) => row(Outcome::Timeout, started.elapsed().as_secs_f64()),
        Err(e) => row(Outcome::Aborted { reason: e.to_string() }, started.elapsed().as_secs_f64()),
    }
}

impl BenchReport {
    /// Pairs of (global, local) rows per instance, in suite order.
    pub fn pairs(&self) -> Vec<(&BenchRow, &BenchRow)> {
        self.rows
            .chunks(2)
            .filter_map(|c| match c {
                [g, l] if g.engine == Algorithm::Global && l.engine == Algorithm::Local => Some((g, l)),
                _ => None,
            })
            .collect()
    }

    /// Aligned text table, one line per instance.
    pub fn render_table(&self) -> String {
        let cell = |r: &BenchRow| match &r.outcome {
            Outcome::Done { visited, stored, .. } => (visited.to_string(), stored.to_string(), format!("{:.2}", r.seconds)),
            Outcome::Timeout => ("timeout".into(), "-".into(), "-".into()),
            Outcome::Aborted { .. } => ("aborted".into(), "-".into(), "-".into()),
        };
        let verdict = |g: &BenchRow, l: &BenchRow| match (g.counts(), l.counts()) {
            (Some((a, ..)), Some((b, ..))) if a == b => a.to_string(),
            (Some((a, ..)), Some((b, ..))) => format!("MISMATCH {a}/{b}"),
            (Some((a, ..)), None) | (None, Some((a, ..))) => a.to_string(),
            (None, None) => "-".into(),
        };
        let header = ["model", "verdict", "g.visited", "g.stored", "g.sec", "l.visited", "l.stored", "l.sec"];
        let mut lines: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
        for (g, l) in self.pairs() {
            let (gv, gs, gt) = cell(g);
            let (lv, ls, lt) = cell(l);
            lines.push(vec![format!("{} {}", g.family, g.size), verdict(g, l), gv, gs, gt, lv, ls, lt]);
        }
        let widths: Vec<usize> = (0..header.len()).map(|c| lines.iter().map(|l| l[c].chars().count()).max().unwrap()).collect();
        let mut out = String::new();
        for line in &lines {
            for (c, text) in line.iter().enumerate() {
                if c == 0 {
                    write!(out, "{text:<w$}", w = widths[c]).unwrap();
                } else {
                    write!(out, "  {text:>w$}", w = widths[c]).unwrap();
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.rows).expect("report serializes")
    }
}
