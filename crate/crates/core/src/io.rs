//! JSON and CSV formats shared by the command line and the reports.
//!
//! A matrix is `{"dim": d, "re": [[..]; d], "im": [[..]; d]}` with rows in
//! order; `im` may be omitted for real matrices. A generator is
//! `{"H": matrix, "jumps": [matrix], "rates": [f64], "schedule": [[t, [rates]]]}`
//! where `schedule` is optional and turns the rates into a linear interpolation.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::dynamics::lindblad::{Lindbladian, ScheduledLindbladian};
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMat) -> Self {
        let rows = |part: fn(&linalg::C64) -> f64| {
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| part(&m[(i, j)])).collect())
                .collect()
        };
        let im: Vec<Vec<f64>> = rows(|z| z.im);
        let real = im.iter().flatten().all(|&x| x == 0.0);
        Self {
            dim: m.nrows(),
            re: rows(|z| z.re),
            im: (!real).then_some(im),
        }
    }

    pub fn to_matrix(&self) -> Result<CMat> {
        let d = self.dim;
        let check = |name: &str, rows: &Vec<Vec<f64>>| -> Result<()> {
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(Error::Schema(format!(
                    "`{name}` must be a {d}x{d} array of rows"
                )));
            }
            if rows.iter().flatten().any(|x| !x.is_finite()) {
                return Err(Error::Schema(format!("`{name}` has non-finite entries")));
            }
            Ok(())
        };
        if d == 0 {
            return Err(Error::Schema("`dim` must be positive".into()));
        }
        check("re", &self.re)?;
        if let Some(im) = &self.im {
            check("im", im)?;
        }
        Ok(CMat::from_fn(d, d, |i, j| {
            c(self.re[i][j], self.im.as_ref().map_or(0.0, |im| im[i][j]))
        }))
    }
}

/// `serialize_with` adapter writing a matrix in the [`MatrixJson`] layout.
pub fn ser_matrix<S: Serializer>(m: &CMat, s: S) -> std::result::Result<S::Ok, S::Error> {
    MatrixJson::from_matrix(m).serialize(s)
}

pub fn ser_matrices<S: Serializer>(ms: &[CMat], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<MatrixJson> = ms.iter().map(MatrixJson::from_matrix).collect();
    v.serialize(s)
}

/// A Hermitian input after symmetrization, with the size of the correction.
#[derive(Clone, Debug)]
pub struct HermitianInput {
    pub matrix: CMat,
    /// `‖A − (A + A†)/2‖_F` of the raw input.
    pub correction: f64,
}

/// Parses a matrix that must be Hermitian up to `1e-12 ‖A‖_F`; the stored
/// value is symmetrized and the correction recorded.
pub fn hermitian_from_json(m: &MatrixJson) -> Result<HermitianInput> {
    let raw = m.to_matrix()?;
    let dev = linalg::hermitian_deviation(&raw);
    if dev > 1e-12 * linalg::frobenius(&raw).max(1.0) {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let matrix = linalg::hermitize(&raw);
    let correction = linalg::frobenius(&(&raw - &matrix));
    Ok(HermitianInput { matrix, correction })
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeneratorJson {
    #[serde(rename = "H")]
    pub h: MatrixJson,
    #[serde(default)]
    pub jumps: Vec<MatrixJson>,
    #[serde(default)]
    pub rates: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<(f64, Vec<f64>)>>,
}

/// Either a fixed generator or one with scheduled rates.
pub enum ParsedGenerator {
    Fixed(Lindbladian),
    Scheduled(ScheduledLindbladian),
}

impl GeneratorJson {
    pub fn from_lindbladian(l: &Lindbladian) -> Self {
        Self {
            h: MatrixJson::from_matrix(&l.h),
            jumps: l.jumps.iter().map(MatrixJson::from_matrix).collect(),
            rates: l.rates.clone(),
            schedule: None,
        }
    }

    pub fn parse(&self) -> Result<ParsedGenerator> {
        let h = hermitian_from_json(&self.h)?.matrix;
        let jumps = self
            .jumps
            .iter()
            .map(|j| j.to_matrix())
            .collect::<Result<Vec<_>>>()?;
        if jumps.iter().any(|j| j.nrows() != h.nrows()) {
            return Err(Error::Schema("jump dimensions differ from H".into()));
        }
        if jumps.len() != self.rates.len() {
            return Err(Error::Schema(format!(
                "{} jumps but {} rates",
                jumps.len(),
                self.rates.len()
            )));
        }
        let base = Lindbladian::new(h, jumps, self.rates.clone())?;
        match &self.schedule {
            None => Ok(ParsedGenerator::Fixed(base)),
            Some(rows) => Ok(ParsedGenerator::Scheduled(ScheduledLindbladian::new(
                base,
                rows.clone(),
            )?)),
        }
    }
}

/// Hex SHA-256 of a canonical configuration string, first 16 digits.
pub fn config_hash(config: &str) -> String {
    let digest = Sha256::digest(config.as_bytes());
    digest.iter().take(8).fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// CSV table with `#` header comments. Floats use 17 significant digits.
/// Optional text columns precede the numeric ones.
#[derive(Clone, Debug, Default)]
pub struct CsvTable {
    pub comments: Vec<String>,
    pub label_columns: Vec<String>,
    pub columns: Vec<String>,
    pub labels: Vec<Vec<String>>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            ..Self::default()
        }
    }

    pub fn with_labels(label_columns: Vec<String>, columns: Vec<String>) -> Self {
        Self {
            label_columns,
            columns,
            ..Self::default()
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn push(&mut self, row: Vec<f64>) {
        self.push_labeled(vec![], row);
    }

    pub fn push_labeled(&mut self, labels: Vec<String>, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        debug_assert_eq!(labels.len(), self.label_columns.len());
        self.labels.push(labels);
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        let header: Vec<&str> = self
            .label_columns
            .iter()
            .chain(&self.columns)
            .map(String::as_str)
            .collect();
        let _ = writeln!(out, "{}", header.join(","));
        for (labels, row) in self.labels.iter().zip(&self.rows) {
            let cells: Vec<String> = labels
                .iter()
                .cloned()
                .chain(row.iter().map(|v| format_float(*v)))
                .collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v:.16e}")
    }
}

/// Writes through a temporary sibling file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("tmp-write");
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
