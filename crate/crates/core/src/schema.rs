//! JSON file schema for network specs and report serialization.
//!
//! The spec file is a single JSON object with keys
//! `M, N, omega_ref, delta, omega, xi, eta, g, kappa, gamma, nbar`.
//! Complex numbers are two-element arrays `[re, im]`, matrices are row-major
//! nested arrays. Unknown keys are rejected. Files always carry `f64`
//! precision; convert with [`NetworkSpec::cast`] for other scalars.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::darkmode::DarkModeReport;
use crate::error::{Error, Result};
use crate::network::NetworkSpec;
use crate::spectral::ArrowheadForm;
use crate::{CMatrix, Cx};

/// Complex number as an `[re, im]` pair in files.
pub type CxPair = [f64; 2];

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub omega_ref: f64,
    pub delta: Vec<f64>,
    pub omega: Vec<f64>,
    pub xi: Vec<Vec<CxPair>>,
    pub eta: Vec<Vec<CxPair>>,
    pub g: Vec<Vec<CxPair>>,
    pub kappa: Vec<f64>,
    pub gamma: Vec<f64>,
    pub nbar: Vec<f64>,
}

fn to_cmatrix(rows: &[Vec<CxPair>], nrows: usize, ncols: usize, field: &str) -> Result<CMatrix<f64>> {
    if rows.len() != nrows {
        return Err(Error::DimensionMismatch {
            field: field.into(),
            expected: format!("{nrows} rows"),
            got: format!("{} rows", rows.len()),
        });
    }
    let mut m = DMatrix::from_element(nrows, ncols, Cx::new(0.0, 0.0));
    for (i, row) in rows.iter().enumerate() {
        if row.len() != ncols {
            return Err(Error::DimensionMismatch {
                field: format!("{field}[{i}]"),
                expected: format!("{ncols} entries"),
                got: format!("{} entries", row.len()),
            });
        }
        for (j, [re, im]) in row.iter().enumerate() {
            m[(i, j)] = Cx::new(*re, *im);
        }
    }
    Ok(m)
}

fn to_rvector(v: &[f64], len: usize, field: &str) -> Result<DVector<f64>> {
    if v.len() != len {
        return Err(Error::DimensionMismatch {
            field: field.into(),
            expected: format!("{len} entries"),
            got: format!("{} entries", v.len()),
        });
    }
    Ok(DVector::from_column_slice(v))
}

fn from_cmatrix(m: &CMatrix<f64>) -> Vec<Vec<CxPair>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

impl SpecFile {
    pub fn into_spec(self) -> Result<NetworkSpec<f64>> {
        let (m, n) = (self.m, self.n);
        Ok(NetworkSpec {
            m,
            n,
            omega_ref: self.omega_ref,
            delta: to_rvector(&self.delta, m, "delta")?,
            omega: to_rvector(&self.omega, n, "omega")?,
            xi: to_cmatrix(&self.xi, m, m, "xi")?,
            eta: to_cmatrix(&self.eta, n, n, "eta")?,
            g: to_cmatrix(&self.g, m, n, "g")?,
            kappa: to_rvector(&self.kappa, m, "kappa")?,
            gamma: to_rvector(&self.gamma, n, "gamma")?,
            nbar: to_rvector(&self.nbar, n, "nbar")?,
        })
    }

    pub fn from_spec(spec: &NetworkSpec<f64>) -> Self {
        Self {
            m: spec.m,
            n: spec.n,
            omega_ref: spec.omega_ref,
            delta: spec.delta.iter().copied().collect(),
            omega: spec.omega.iter().copied().collect(),
            xi: from_cmatrix(&spec.xi),
            eta: from_cmatrix(&spec.eta),
            g: from_cmatrix(&spec.g),
            kappa: spec.kappa.iter().copied().collect(),
            gamma: spec.gamma.iter().copied().collect(),
            nbar: spec.nbar.iter().copied().collect(),
        }
    }
}

fn parse_error(source: &serde_json::Error) -> Error {
    Error::Parse {
        locus: format!("line {}, column {}", source.line(), source.column()),
        message: source.to_string(),
    }
}

/// Parse a spec from a JSON string.
pub fn parse_spec(text: &str) -> Result<NetworkSpec<f64>> {
    let file: SpecFile = serde_json::from_str(text).map_err(|e| parse_error(&e))?;
    file.into_spec()
}

/// Load a spec from a JSON file.
pub fn load_spec(path: impl AsRef<Path>) -> Result<NetworkSpec<f64>> {
    let text = std::fs::read_to_string(path)?;
    parse_spec(&text)
}

/// Render a spec to pretty JSON (lossless for `f64`).
pub fn spec_to_json(spec: &NetworkSpec<f64>) -> String {
    serde_json::to_string_pretty(&SpecFile::from_spec(spec)).expect("spec serialization")
}

/// Save a spec as a JSON file.
pub fn save_spec(spec: &NetworkSpec<f64>, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, spec_to_json(spec) + "\n")?;
    Ok(())
}

/// Serializable mirror of [`ArrowheadForm`], same conventions as the spec file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArrowheadFile {
    pub delta: Vec<f64>,
    pub omega: Vec<f64>,
    pub c_ab: Vec<Vec<CxPair>>,
    pub u_a: Vec<Vec<CxPair>>,
    pub u_b: Vec<Vec<CxPair>>,
}

impl ArrowheadFile {
    pub fn from_form(form: &ArrowheadForm<f64>) -> Self {
        Self {
            delta: form.delta.iter().copied().collect(),
            omega: form.omega.iter().copied().collect(),
            c_ab: from_cmatrix(&form.c_ab),
            u_a: from_cmatrix(&form.u_a),
            u_b: from_cmatrix(&form.u_b),
        }
    }
}

/// Serializable mirror of [`DarkModeReport`] with a stable field order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DarkModeReportFile {
    pub groups: Vec<GroupFile>,
    pub group_ranks: Vec<usize>,
    pub bright_count: usize,
    pub dark_count: usize,
    pub zero_columns: Vec<usize>,
    pub dark_vectors: Vec<Vec<CxPair>>,
    pub bright_vectors: Vec<Vec<CxPair>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupFile {
    pub representative: f64,
    pub members: Vec<usize>,
}

impl DarkModeReportFile {
    pub fn from_report(report: &DarkModeReport<f64>) -> Self {
        let vecs = |vs: &[crate::CVector<f64>]| {
            vs.iter()
                .map(|v| v.iter().map(|z| [z.re, z.im]).collect())
                .collect()
        };
        Self {
            groups: report
                .partition
                .groups
                .iter()
                .map(|g| GroupFile {
                    representative: g.representative,
                    members: g.members.clone(),
                })
                .collect(),
            group_ranks: report.group_ranks.clone(),
            bright_count: report.bright_count,
            dark_count: report.dark_count,
            zero_columns: report.zero_columns.clone(),
            dark_vectors: vecs(&report.dark_vectors),
            bright_vectors: vecs(&report.bright_vectors),
        }
    }
}
