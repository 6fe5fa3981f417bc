use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::CovarianceMatrix;
use crate::error::{invalid, Result};
use crate::scalar::Real;

pub const ORDERING_XXYY: &str = "xxyy";

/// Wire format: `{n_modes, ordering: "xxyy", entries: [row-major 2N×2N]}`.
///
/// Floats are written with the shortest representation that parses back to
/// the same f64, so the round trip is exact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CovarianceJson {
    pub n_modes: usize,
    pub ordering: String,
    pub entries: Vec<f64>,
}

impl CovarianceJson {
    pub fn from_matrix<T: Real>(v: &CovarianceMatrix<T>) -> Self {
        let m = v.matrix();
        let d = m.nrows();
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push(m[(i, j)].to_f64());
            }
        }
        Self {
            n_modes: v.n_modes(),
            ordering: ORDERING_XXYY.to_string(),
            entries,
        }
    }

    /// Shape-checked matrix, without any physicality test.
    pub fn to_raw_matrix(&self) -> Result<DMatrix<f64>> {
        if self.ordering != ORDERING_XXYY {
            return invalid(format!("unsupported ordering {:?}; only \"xxyy\" is accepted", self.ordering));
        }
        let d = 2 * self.n_modes;
        if self.n_modes == 0 || self.entries.len() != d * d {
            return invalid(format!(
                "expected {} entries for {} modes, got {}",
                d * d,
                self.n_modes,
                self.entries.len()
            ));
        }
        Ok(DMatrix::from_row_slice(d, d, &self.entries))
    }

    pub fn to_covariance(&self) -> Result<CovarianceMatrix> {
        CovarianceMatrix::new(self.to_raw_matrix()?)
    }
}

impl<T: Real> CovarianceMatrix<T> {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&CovarianceJson::from_matrix(self)).expect("plain data serialises")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&CovarianceJson::from_matrix(self)).expect("plain data serialises")
    }
}

impl CovarianceMatrix<f64> {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let parsed: CovarianceJson =
            serde_json::from_str(s).map_err(|e| crate::Error::InvalidArgument(format!("covariance JSON: {e}")))?;
        parsed.to_covariance()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let (c, s) = (2f64.cosh(), 2f64.sinh());
        let v = CovarianceMatrix::from_row_slice(
            2,
            &[
                c, s, 0.0, 0.0, //
                s, c, 0.0, 0.0, //
                0.0, 0.0, c, -s, //
                0.0, 0.0, -s, c,
            ],
        )
        .unwrap();
        let text = v.to_json_string();
        let back = CovarianceMatrix::from_json_str(&text).unwrap();
        assert_eq!(back, v);
        assert!(text.contains("\"ordering\":\"xxyy\""));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(CovarianceMatrix::from_json_str(r#"{"n_modes":1,"ordering":"xpxp","entries":[1,0,0,1]}"#).is_err());
        assert!(CovarianceMatrix::from_json_str(r#"{"n_modes":1,"ordering":"xxyy","entries":[1,0,0]}"#).is_err());
        assert!(CovarianceMatrix::from_json_str(r#"{"n_modes":1,"ordering":"xxyy","entries":[0.5,0,0,0.5]}"#).is_err());
        assert!(CovarianceMatrix::from_json_str("not json").is_err());
    }
}
