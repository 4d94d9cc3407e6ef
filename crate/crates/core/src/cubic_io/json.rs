//! JSON encodings. Complex numbers are `[re, im]` pairs; on input each part
//! may be a JSON number or a decimal string, on output parts are always
//! decimal strings carrying the full working precision.

use serde::{Deserialize, Serialize};

use super::{CubicIoError, CubicSurface};
use crate::numerics::{BigComplex, Matrix};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonScalar {
    Text(String),
    Number(serde_json::Number),
}

impl JsonScalar {
    fn text(&self) -> String {
        match self {
            JsonScalar::Text(s) => s.trim().to_string(),
            JsonScalar::Number(n) => n.to_string(),
        }
    }
}

pub type JsonComplexIn = [JsonScalar; 2];
pub type JsonComplexOut = [String; 2];
pub type JsonMatrixOut = Vec<Vec<JsonComplexOut>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CubicInput {
    Expression(String),
    Theta { theta: Vec<JsonComplexIn> },
}

/// Request accepted by `represent --theta-file` and by batch input lines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepresentRequest {
    pub cubic: CubicInput,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Matrices file accepted by `verify`: either a bare list of four matrices
/// or any object with a `matrices` field (such as `represent` output).
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum MatricesInput {
    Wrapped { matrices: Vec<Vec<Vec<JsonComplexIn>>> },
    Bare(Vec<Vec<Vec<JsonComplexIn>>>),
}

pub fn complex_to_json(c: &BigComplex) -> JsonComplexOut {
    let (re, im) = c.to_decimal_parts();
    [re, im]
}

pub fn complex_from_json(c: &JsonComplexIn, prec: u32) -> Result<BigComplex, CubicIoError> {
    let re = c[0].text();
    let im = c[1].text();
    BigComplex::parse_parts(prec, &re, &im)
        .map_err(|_| CubicIoError::InvalidScalar(format!("[{re}, {im}]")))
}

pub fn matrix_to_json(m: &Matrix) -> JsonMatrixOut {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(complex_to_json).collect())
        .collect()
}

pub fn matrix_from_json(rows: &[Vec<JsonComplexIn>], prec: u32) -> Result<Matrix, CubicIoError> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(CubicIoError::Json("matrices must be square and nonempty".into()));
    }
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|c| complex_from_json(c, prec)).collect())
        .collect::<Result<Vec<Vec<BigComplex>>, _>>()?;
    Ok(Matrix::from_rows(parsed))
}

impl CubicInput {
    pub fn to_surface(&self, prec: u32) -> Result<CubicSurface, CubicIoError> {
        match self {
            CubicInput::Expression(text) => CubicSurface::parse(text, prec),
            CubicInput::Theta { theta } => {
                let values = theta
                    .iter()
                    .map(|c| complex_from_json(c, prec))
                    .collect::<Result<Vec<_>, _>>()?;
                CubicSurface::from_theta_vec(values)
            }
        }
    }
}

impl CubicSurface {
    pub fn theta_json(&self) -> Vec<JsonComplexOut> {
        self.theta().iter().map(complex_to_json).collect()
    }
}

pub fn parse_request(text: &str) -> Result<RepresentRequest, CubicIoError> {
    serde_json::from_str(text).map_err(|e| CubicIoError::Json(e.to_string()))
}

pub fn parse_matrices(text: &str, prec: u32) -> Result<Vec<Matrix>, CubicIoError> {
    let input: MatricesInput =
        serde_json::from_str(text).map_err(|e| CubicIoError::Json(e.to_string()))?;
    let raw = match input {
        MatricesInput::Wrapped { matrices } => matrices,
        MatricesInput::Bare(m) => m,
    };
    if raw.len() != 4 {
        return Err(CubicIoError::Json(format!("expected 4 matrices, found {}", raw.len())));
    }
    raw.iter().map(|m| matrix_from_json(m, prec)).collect()
}
