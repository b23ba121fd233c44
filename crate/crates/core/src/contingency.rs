//! Independence tests for two-way contingency tables.
//!
//! The Bayes factor is computed from the Pearson statistic, treated as a
//! `χ²_{(r-1)(c-1)}` variable, with the UMPBT alternative matched to a
//! classical test of level `α`.

use std::io::Read;

use crate::bayes::{log_bf_ncchisq, ChiSqTestSpec};
use crate::error::{Error, Result};
use crate::solver::match_gamma_to_alpha;

/// `z = √(θ* y)` at which a zero statistic is evaluated.
const STAT_FLOOR_Z: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    counts: Vec<Vec<u64>>,
    pub row_labels: Option<Vec<String>>,
    pub col_labels: Option<Vec<String>>,
}

impl ContingencyTable {
    /// Validates shape and margins.
    pub fn new(counts: Vec<Vec<u64>>) -> Result<Self> {
        let t = ContingencyTable {
            counts,
            row_labels: None,
            col_labels: None,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn rows(&self) -> usize {
        self.counts.len()
    }

    pub fn cols(&self) -> usize {
        self.counts.first().map_or(0, Vec::len)
    }

    pub fn row_totals(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_totals(&self) -> Vec<u64> {
        (0..self.cols())
            .map(|j| self.counts.iter().map(|r| r[j]).sum())
            .collect()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.rows();
        let c = self.cols();
        if r < 2 || c < 2 {
            return Err(Error::validation(format!(
                "a contingency table needs at least 2 rows and 2 columns, got {r}x{c}"
            )));
        }
        if let Some((i, row)) = self
            .counts
            .iter()
            .enumerate()
            .find(|(_, row)| row.len() != c)
        {
            return Err(Error::validation(format!(
                "ragged table: row {} has {} cells, expected {c}",
                i + 1,
                row.len()
            )));
        }
        if let Some(i) = self.row_totals().iter().position(|&t| t == 0) {
            return Err(Error::DegenerateMargin(format!(
                "row {} sums to zero",
                i + 1
            )));
        }
        if let Some(j) = self.col_totals().iter().position(|&t| t == 0) {
            return Err(Error::DegenerateMargin(format!(
                "column {} sums to zero",
                j + 1
            )));
        }
        Ok(())
    }

    /// `E_ij = R_i C_j / N`.
    pub fn expected(&self) -> Vec<Vec<f64>> {
        let n = self.total() as f64;
        let cols = self.col_totals();
        self.row_totals()
            .iter()
            .map(|&ri| cols.iter().map(|&cj| ri as f64 * cj as f64 / n).collect())
            .collect()
    }
}

/// Reads a comma-separated table of nonnegative integer counts.
///
/// Error positions are 1-based line and field numbers of the source, with the
/// header line and label column counted.
pub fn parse_table<R: Read>(
    source: R,
    has_header: bool,
    has_row_labels: bool,
) -> Result<ContingencyTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let skip = usize::from(has_row_labels);

    let mut col_labels = None;
    let mut row_labels = Vec::new();
    let mut counts: Vec<Vec<u64>> = Vec::new();
    let mut width: Option<usize> = None;
    let mut record = csv::StringRecord::new();
    let mut first = true;

    loop {
        let more = reader.read_record(&mut record).map_err(|e| csv_error(&e))?;
        if !more {
            break;
        }
        let line = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if first && has_header {
            first = false;
            col_labels = Some(record.iter().skip(skip).map(str::to_owned).collect());
            continue;
        }
        first = false;
        if has_row_labels {
            row_labels.push(record.get(0).unwrap_or_default().to_owned());
        }
        let mut row = Vec::with_capacity(record.len().saturating_sub(skip));
        for (j, field) in record.iter().enumerate().skip(skip) {
            row.push(parse_count(field, line, j + 1)?);
        }
        match width {
            None => width = Some(row.len()),
            Some(w) if w != row.len() => {
                return Err(Error::validation(format!(
                    "ragged table: line {line} has {} counts, expected {w}",
                    row.len()
                )));
            }
            Some(_) => {}
        }
        counts.push(row);
    }

    let table = ContingencyTable {
        counts,
        row_labels: has_row_labels.then_some(row_labels),
        col_labels,
    };
    table.validate()?;
    Ok(table)
}

fn csv_error(e: &csv::Error) -> Error {
    match e.kind() {
        csv::ErrorKind::Io(io) => Error::Io(io.to_string()),
        csv::ErrorKind::Utf8 { pos, err } => Error::Parse {
            row: pos.as_ref().map_or(0, |p| p.line()),
            column: err.field() + 1,
            detail: "invalid UTF-8".into(),
        },
        _ => Error::Parse {
            row: e.position().map_or(0, |p| p.line()),
            column: 0,
            detail: e.to_string(),
        },
    }
}

fn parse_count(field: &str, row: u64, column: usize) -> Result<u64> {
    if let Ok(v) = field.parse::<u64>() {
        return Ok(v);
    }
    match field.parse::<f64>() {
        Ok(v) if v.is_finite() && v < 0.0 => Err(Error::validation(format!(
            "line {row}, field {column}: negative count {field}"
        ))),
        Ok(v) if v.is_finite() => Err(Error::validation(format!(
            "line {row}, field {column}: non-integer count {field}"
        ))),
        _ => Err(Error::Parse {
            row,
            column,
            detail: format!("expected a nonnegative integer, got {field:?}"),
        }),
    }
}

/// Pearson `Σ (O - E)² / E` (no continuity correction) and `(r-1)(c-1)`.
pub fn pearson_statistic(table: &ContingencyTable) -> Result<(f64, usize)> {
    table.validate()?;
    let expected = table.expected();
    let stat = table
        .counts
        .iter()
        .zip(&expected)
        .flat_map(|(o, e)| o.iter().zip(e))
        .map(|(&o, &e)| {
            let d = o as f64 - e;
            d * d / e
        })
        .sum();
    Ok((stat, (table.rows() - 1) * (table.cols() - 1)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndependenceResult {
    pub statistic: f64,
    pub df: usize,
    pub gamma: f64,
    pub theta_star: f64,
    pub log_bf: f64,
    /// `exp(log_bf)`; `+∞` when that overflows.
    pub bf: f64,
    /// Matched classical critical value `r(θ*)`.
    pub critical_value: f64,
    pub alpha: f64,
    /// Smallest expected count.
    pub min_expected: f64,
}

impl IndependenceResult {
    pub fn rejects(&self) -> bool {
        self.log_bf > self.gamma.ln()
    }
}

/// Bayes factor against independence with `γ` matched to level `alpha`.
///
/// A zero statistic is evaluated at `z = 10⁻¹²`, giving the continuous limit.
pub fn independence_bf(table: &ContingencyTable, alpha: f64) -> Result<IndependenceResult> {
    let (statistic, df) = pearson_statistic(table)?;
    let sol = match_gamma_to_alpha(&ChiSqTestSpec::with_alpha(df as f64, alpha)?)?;
    let y = if statistic > 0.0 {
        statistic
    } else {
        STAT_FLOOR_Z * STAT_FLOOR_Z / sol.theta_star
    };
    let log_bf = log_bf_ncchisq(y, sol.theta_star, df as f64)?;
    let min_expected = table
        .expected()
        .iter()
        .flatten()
        .copied()
        .fold(f64::INFINITY, f64::min);
    Ok(IndependenceResult {
        statistic,
        df,
        gamma: sol.gamma,
        theta_star: sol.theta_star,
        log_bf,
        bf: log_bf.exp(),
        critical_value: sol.boundary,
        alpha,
        min_expected,
    })
}
