//! JSON state documents.
//!
//! ```json
//! {
//!   "dim": 4,
//!   "re": [[...4 numbers...], ...4 rows...],
//!   "im": [[...], ...]
//! }
//! ```
//!
//! Both arrays are row-major in the |HH>, |HV>, |VH>, |VV> basis. Numbers are
//! written with 17 significant digits so a document round-trips exactly.

use std::fmt::Write as _;

use polwit_core::qmat::{DensityMatrix, Mat4};
use polwit_core::Error as CoreError;
use serde::Deserialize;
use thiserror::Error;

use crate::sweep::{format_sig, SIG_DIGITS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DocumentError {
    #[error("malformed state document: {detail}")]
    Malformed { detail: String },

    #[error("hermiticity violated: max |m - m^dagger| = {}", format_sig(*residual, SIG_DIGITS))]
    NonHermitian { residual: f64 },

    #[error("trace violated: trace = {}", format_sig(*trace, SIG_DIGITS))]
    TraceViolation { trace: f64 },

    #[error("positivity violated: min eigenvalue = {}", format_sig(*min_eigenvalue, SIG_DIGITS))]
    NegativeSpectrum { min_eigenvalue: f64 },
}

impl DocumentError {
    /// Short name of the violated invariant.
    pub fn code(&self) -> &'static str {
        match self {
            DocumentError::Malformed { .. } => "malformed",
            DocumentError::NonHermitian { .. } => "hermiticity",
            DocumentError::TraceViolation { .. } => "trace",
            DocumentError::NegativeSpectrum { .. } => "positivity",
        }
    }

    /// Process exit status for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            DocumentError::Malformed { .. } => 2,
            DocumentError::NonHermitian { .. } => 3,
            DocumentError::TraceViolation { .. } => 4,
            DocumentError::NegativeSpectrum { .. } => 5,
        }
    }
}

impl From<CoreError> for DocumentError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::NonHermitian { residual } => DocumentError::NonHermitian { residual },
            CoreError::TraceViolation { trace } => DocumentError::TraceViolation { trace },
            CoreError::NegativeSpectrum { min_eigenvalue } => {
                DocumentError::NegativeSpectrum { min_eigenvalue }
            }
            other => DocumentError::Malformed {
                detail: other.to_string(),
            },
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

fn write_array(out: &mut String, rows: &[[f64; 4]; 4]) {
    out.push_str("[\n");
    for (i, row) in rows.iter().enumerate() {
        out.push_str("    [");
        for (j, x) in row.iter().enumerate() {
            if j > 0 {
                out.push_str(", ");
            }
            // -0 has no use in a state file
            let x = if *x == 0.0 { 0.0 } else { *x };
            write!(out, "{x:.16e}").expect("write to String");
        }
        out.push(']');
        if i < 3 {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("  ]");
}

pub fn serialize_state(rho: &DensityMatrix) -> String {
    let m = rho.matrix();
    let mut out = String::from("{\n  \"dim\": 4,\n  \"re\": ");
    write_array(&mut out, &m.real_part());
    out.push_str(",\n  \"im\": ");
    write_array(&mut out, &m.imag_part());
    out.push_str("\n}\n");
    out
}

fn to_square(name: &str, rows: Vec<Vec<f64>>) -> Result<[[f64; 4]; 4], DocumentError> {
    let malformed = |detail: String| DocumentError::Malformed { detail };
    if rows.len() != 4 {
        return Err(malformed(format!(
            "\"{name}\" must have 4 rows, found {}",
            rows.len()
        )));
    }
    let mut out = [[0.0; 4]; 4];
    for (i, row) in rows.into_iter().enumerate() {
        if row.len() != 4 {
            return Err(malformed(format!(
                "\"{name}\" row {i} must have 4 entries, found {}",
                row.len()
            )));
        }
        out[i].copy_from_slice(&row);
    }
    Ok(out)
}

pub fn parse_state(doc: &str) -> Result<DensityMatrix, DocumentError> {
    let raw: RawDocument = serde_json::from_str(doc).map_err(|e| DocumentError::Malformed {
        detail: e.to_string(),
    })?;
    if raw.dim != 4 {
        return Err(DocumentError::Malformed {
            detail: format!("dim must be 4, found {}", raw.dim),
        });
    }
    let re = to_square("re", raw.re)?;
    let im = to_square("im", raw.im)?;
    Ok(DensityMatrix::new(Mat4::from_parts(re, im))?)
}
