//! Matrix JSON: `{"rows": R, "cols": C, "entries": [[re, im], ...]}`, row-major.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Complex, ComplexMatrix};
use crate::error::{Error, Result};

/// Wire form of a matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn into_matrix(self) -> Result<ComplexMatrix> {
        let data = self.entries.into_iter().map(|[re, im]| Complex::new(re, im)).collect();
        ComplexMatrix::new(self.rows, self.cols, data)
    }
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

/// Formats `x` with 17 significant digits, in a form JSON accepts.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0.0".into() } else { "0.0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let s = format!("{:.*}", (16 - exp) as usize, x);
        if s.contains('.') {
            s
        } else {
            s + ".0"
        }
    } else {
        format!("{mantissa}e{exp}")
    }
}

impl ComplexMatrix {
    /// Serializes to matrix JSON with full-precision entries.
    pub fn to_json(&self) -> String {
        let mut out = String::with_capacity(32 + self.entries().len() * 48);
        write!(out, "{{\"rows\":{},\"cols\":{},\"entries\":[", self.rows(), self.cols()).unwrap();
        for (i, z) in self.entries().iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write!(out, "[{},{}]", format_f64(z.re), format_f64(z.im)).unwrap();
        }
        out.push_str("]}");
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: MatrixJson =
            serde_json::from_str(text).map_err(|e| Error::MalformedMatrix(e.to_string()))?;
        raw.into_matrix()
    }
}
