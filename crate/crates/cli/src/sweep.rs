//! Grid sweeps over numeric fields of a network spec.
//!
//! Axes and overrides address fields by dotted paths into the spec's JSON
//! document (`kappa.0`, `g.1.2.0`, `omega.3`, …; the trailing `.0`/`.1` on
//! matrix entries selects the real/imaginary part). Hermitian pairs must be
//! swept together by listing both paths on one axis.

use serde::Deserialize;
use serde_json::Value;

use darkmode_lab::darkmode::count_dark_modes;
use darkmode_lab::dynamics::final_phonon_numbers;
use darkmode_lab::schema::{parse_spec, SpecFile};
use darkmode_lab::spectral::to_normal_form_with;
use darkmode_lab::{NetworkSpec, Tolerances};

use crate::output::Csv;
use crate::{maybe_parallel, CliError};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    /// One or more spec paths receiving the swept value.
    #[serde(alias = "path", deserialize_with = "one_or_many")]
    pub paths: Vec<String>,
    pub min: f64,
    pub max: f64,
    /// Grid points, linearly spaced (1 = degenerate single-point axis).
    pub count: usize,
}

fn one_or_many<'de, D: serde::Deserializer<'de>>(d: D) -> Result<Vec<String>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(String),
        Many(Vec<String>),
    }
    Ok(match OneOrMany::deserialize(d)? {
        OneOrMany::One(s) => vec![s],
        OneOrMany::Many(v) => v,
    })
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverrideEntry {
    #[serde(alias = "path", deserialize_with = "one_or_many")]
    pub paths: Vec<String>,
    pub value: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPlanFile {
    pub param1: SweepAxis,
    #[serde(default)]
    pub param2: Option<SweepAxis>,
    #[serde(default)]
    pub overrides: Vec<OverrideEntry>,
}

impl SweepAxis {
    fn values(&self) -> Vec<f64> {
        if self.count <= 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.min + step * i as f64).collect()
    }
}

/// Set a numeric leaf addressed by a dotted path.
fn set_path(doc: &mut Value, path: &str, value: f64) -> Result<(), CliError> {
    let mut cursor = doc;
    let segments: Vec<&str> = path.split('.').collect();
    for (i, seg) in segments.iter().enumerate() {
        let last = i + 1 == segments.len();
        let next = match cursor {
            Value::Object(map) => map
                .get_mut(*seg)
                .ok_or_else(|| CliError::new(2, format!("sweep path `{path}`: no field `{seg}`")))?,
            Value::Array(arr) => {
                let idx: usize = seg.parse().map_err(|_| {
                    CliError::new(2, format!("sweep path `{path}`: `{seg}` is not an index"))
                })?;
                arr.get_mut(idx).ok_or_else(|| {
                    CliError::new(2, format!("sweep path `{path}`: index {idx} out of range"))
                })?
            }
            _ => {
                return Err(CliError::new(
                    2,
                    format!("sweep path `{path}`: `{seg}` descends into a scalar"),
                ))
            }
        };
        if last {
            if !next.is_number() {
                return Err(CliError::new(
                    2,
                    format!("sweep path `{path}` does not resolve to a numeric field"),
                ));
            }
            *next = serde_json::json!(value);
            return Ok(());
        }
        cursor = next;
    }
    Err(CliError::new(2, format!("empty sweep path `{path}`")))
}

/// Run the sweep in row-major grid order and render the cooling CSV.
pub fn run_sweep(
    spec: &NetworkSpec<f64>,
    plan: &SweepPlanFile,
    tols: &Tolerances<f64>,
    jobs: usize,
) -> Result<String, CliError> {
    let base = serde_json::to_value(SpecFile::from_spec(spec)).expect("spec to json");
    let v1 = plan.param1.values();
    let v2 = plan
        .param2
        .as_ref()
        .map(|axis| axis.values().into_iter().map(Some).collect::<Vec<_>>())
        .unwrap_or_else(|| vec![None]);

    let mut points = Vec::with_capacity(v1.len() * v2.len());
    for &a in &v1 {
        for b in &v2 {
            points.push((a, *b));
        }
    }

    let results = maybe_parallel(jobs, &points, |(a, b)| -> Result<_, CliError> {
        let mut doc = base.clone();
        for entry in &plan.overrides {
            for path in &entry.paths {
                set_path(&mut doc, path, entry.value)?;
            }
        }
        for path in &plan.param1.paths {
            set_path(&mut doc, path, *a)?;
        }
        if let (Some(axis), Some(b)) = (&plan.param2, b) {
            for path in &axis.paths {
                set_path(&mut doc, path, *b)?;
            }
        }
        let probe = parse_spec(&doc.to_string())?;
        let form = to_normal_form_with(&probe, tols)?;
        let dark = count_dark_modes(&form, tols).dark_count;
        let out = final_phonon_numbers(&probe, tols)?;
        Ok((out, dark))
    });

    let mut csv = Csv::cooling_header(spec.n);
    for ((a, b), result) in points.iter().zip(results) {
        let (out, dark) = result?;
        csv.cooling_row(Some(*a), *b, &out, dark, spec.n);
    }
    Ok(csv.finish())
}
