//! Runnable experiments. Each produces a table, fitted quantities and
//! verdicts that depend only on the config and its seed.

mod calibration;
mod free_product;
mod genericity;
mod injection;
mod theorem;

use std::fmt;
use std::io::Write;

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::{Error, Result};
use crate::subgroup::{stallings_from_generators, StallingsGraph};

pub use calibration::calibration_experiment;
pub use free_product::free_product_experiment;
pub use genericity::{barrier_stats_experiment, genericity_experiment};
pub use injection::injection_experiment;
pub use theorem::{double_cosets_experiment, generic_image_experiment, growth_experiment, theorem_a_experiment};

/// Ordered from best to worst; a report takes the worst of its verdicts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Degenerate,
    Partial,
    Fail,
}

impl Status {
    /// 0 when everything passes, 2 for degenerate or partial runs, 1 on failure.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Degenerate | Status::Partial => 2,
            Status::Fail => 1,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Degenerate => "DEGENERATE",
            Status::Partial => "PARTIAL",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub criterion: String,
    pub measured: f64,
    pub relation: &'static str,
    pub threshold: f64,
    pub status: Status,
}

impl Verdict {
    fn compare(criterion: &str, measured: f64, relation: &'static str, threshold: f64, ok: bool) -> Verdict {
        Verdict {
            criterion: criterion.to_string(),
            measured,
            relation,
            threshold,
            status: if ok { Status::Pass } else { Status::Fail },
        }
    }

    pub fn at_most(criterion: &str, measured: f64, threshold: f64) -> Verdict {
        Self::compare(criterion, measured, "<=", threshold, measured <= threshold)
    }

    pub fn at_least(criterion: &str, measured: f64, threshold: f64) -> Verdict {
        Self::compare(criterion, measured, ">=", threshold, measured >= threshold)
    }

    pub fn below(criterion: &str, measured: f64, threshold: f64) -> Verdict {
        Self::compare(criterion, measured, "<", threshold, measured < threshold)
    }

    pub fn above(criterion: &str, measured: f64, threshold: f64) -> Verdict {
        Self::compare(criterion, measured, ">", threshold, measured > threshold)
    }

    /// Replace the status, e.g. to mark a criterion degenerate.
    pub fn with_status(mut self, status: Status) -> Verdict {
        self.status = status;
        self
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion={} measured={} relation={} threshold={} status={}",
            self.criterion, self.measured, self.relation, self.threshold, self.status
        )
    }
}

/// A CSV table with a mandatory header row.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Table {
        Table { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push<I: IntoIterator<Item = String>>(&mut self, row: I) {
        let row: Vec<String> = row.into_iter().collect();
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Column `name` parsed as numbers; empty cells are skipped.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().filter_map(|r| r[i].parse().ok()).collect())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(&self.header)?;
        for row in &self.rows {
            wtr.write_record(row)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub experiment: ExperimentKind,
    pub table: Table,
    pub fitted: Vec<(String, f64)>,
    pub verdicts: Vec<Verdict>,
    pub notes: Vec<String>,
    pub config_echo: String,
    pub version: String,
}

impl ExperimentReport {
    fn new(cfg: &ExperimentConfig, experiment: ExperimentKind, table: Table) -> ExperimentReport {
        ExperimentReport {
            experiment,
            table,
            fitted: Vec::new(),
            verdicts: Vec::new(),
            notes: Vec::new(),
            config_echo: cfg.echo(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    fn fit(&mut self, name: &str, value: f64) {
        self.fitted.push((name.to_string(), value));
    }

    pub fn fitted(&self, name: &str) -> Option<f64> {
        self.fitted.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn verdict(&self, criterion: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.criterion == criterion)
    }

    /// The worst verdict status; a report without verdicts passes.
    pub fn status(&self) -> Status {
        self.verdicts.iter().map(|v| v.status).max().unwrap_or(Status::Pass)
    }

    /// Verdict summary as `key=value` lines.
    pub fn verdict_text(&self) -> String {
        let mut out = format!(
            "experiment={}\nversion={}\nstatus={}\n",
            self.experiment,
            self.version,
            self.status()
        );
        for (name, value) in &self.fitted {
            out.push_str(&format!("fitted {name}={value}\n"));
        }
        for v in &self.verdicts {
            out.push_str(&format!("{v}\n"));
        }
        for n in &self.notes {
            out.push_str(&format!("note {n}\n"));
        }
        out
    }
}

/// Run one experiment.
pub fn run(cfg: &ExperimentConfig, kind: ExperimentKind) -> Result<ExperimentReport> {
    match kind {
        ExperimentKind::Growth => growth_experiment(cfg),
        ExperimentKind::DoubleCosets => double_cosets_experiment(cfg),
        ExperimentKind::TheoremA => theorem_a_experiment(cfg),
        ExperimentKind::Injection => injection_experiment(cfg),
        ExperimentKind::Genericity => genericity_experiment(cfg),
        ExperimentKind::BarrierStats => barrier_stats_experiment(cfg),
        ExperimentKind::FreeProduct => free_product_experiment(cfg),
        ExperimentKind::GenericImage => generic_image_experiment(cfg),
        ExperimentKind::Calibration => calibration_experiment(cfg),
    }
}

fn require_free(cfg: &ExperimentConfig, what: &str) -> Result<()> {
    if cfg.oracle.is_free() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("the {what} experiment needs a free group, got {}", cfg.oracle.presentation())))
    }
}

fn subgroups(cfg: &ExperimentConfig) -> Result<(StallingsGraph, StallingsGraph)> {
    Ok((stallings_from_generators(&cfg.oracle, &cfg.h)?, stallings_from_generators(&cfg.oracle, &cfg.k)?))
}

/// Both subgroups must have infinite index.
fn require_infinite_index(h: &StallingsGraph, k: &StallingsGraph) -> Result<()> {
    for (name, s) in [("H", h), ("K", k)] {
        if let Some(index) = s.index() {
            return Err(Error::Precondition(format!(
                "{name} = {s} has finite index {index}; the double-coset growth bound needs infinite-index subgroups"
            )));
        }
    }
    Ok(())
}

fn required<'a, T>(value: &'a Option<T>, field: &str) -> Result<&'a T> {
    value.as_ref().ok_or_else(|| Error::config(field, "required by this experiment"))
}

/// Count of `i` in `values` with `values[i + 1] >= values[i]`.
fn non_decreases(values: &[f64]) -> usize {
    values.windows(2).filter(|w| w[1] >= w[0]).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_order_and_exit_codes() {
        assert!(Status::Fail > Status::Partial);
        assert_eq!(Status::Pass.exit_code(), 0);
        assert_eq!(Status::Degenerate.exit_code(), 2);
        assert_eq!(Status::Fail.exit_code(), 1);
    }

    #[test]
    fn verdict_relations() {
        assert_eq!(Verdict::below("x", 1.0, 1.0).status, Status::Fail);
        assert_eq!(Verdict::at_most("x", 1.0, 1.0).status, Status::Pass);
        assert_eq!(Verdict::above("x", 0.5, 0.05).to_string(), "criterion=x measured=0.5 relation=> threshold=0.05 status=PASS");
    }

    #[test]
    fn table_csv() {
        let mut t = Table::new(&["r", "value"]);
        t.push(["0".to_string(), "1".to_string()]);
        t.push(["1".to_string(), String::new()]);
        assert_eq!(t.to_csv_string(), "r,value\n0,1\n1,\n");
        assert_eq!(t.column("value"), Some(vec![1.0]));
    }
}
