//! Verification reports shared by the library drivers and the CLI.

use std::time::Instant;

use serde::{Deserialize, Serialize};

/// One verified table cell or identity instance.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Cell {
    /// Where the value lives (table name plus row/column labels).
    pub location: String,
    /// Expected value: exact rational as `num/den`, or a 12-digit decimal.
    pub expected: String,
    /// Computed value, same formatting rules.
    pub got: String,
    /// Whether the comparison was decided exactly.
    pub exact: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct VerificationReport {
    pub suite: String,
    pub cells: Vec<Cell>,
    pub pass: bool,
    pub wall_ms: u128,
    pub workers: usize,
}

impl VerificationReport {
    pub fn new(suite: &str) -> ReportBuilder {
        ReportBuilder {
            suite: suite.to_string(),
            cells: Vec::new(),
            start: Instant::now(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,location,expected,got,exact,pass\n");
        for c in &self.cells {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                csv_escape(&self.suite),
                csv_escape(&c.location),
                csv_escape(&c.expected),
                csv_escape(&c.got),
                c.exact,
                c.pass
            ));
        }
        out
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub struct ReportBuilder {
    suite: String,
    cells: Vec<Cell>,
    start: Instant,
}

impl ReportBuilder {
    pub fn push(
        &mut self,
        location: impl Into<String>,
        expected: String,
        got: String,
        exact: bool,
        pass: bool,
    ) {
        self.cells.push(Cell {
            location: location.into(),
            expected,
            got,
            exact,
            pass,
        });
    }

    pub fn push_cell(&mut self, cell: Cell) {
        self.cells.push(cell);
    }

    pub fn all_pass(&self) -> bool {
        self.cells.iter().all(|c| c.pass)
    }

    pub fn finish(self) -> VerificationReport {
        let pass = self.cells.iter().all(|c| c.pass);
        VerificationReport {
            suite: self.suite,
            cells: self.cells,
            pass,
            wall_ms: self.start.elapsed().as_millis(),
            workers: rayon::current_num_threads(),
        }
    }
}
