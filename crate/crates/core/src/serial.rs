//! JSON forms of matrices and polynomials shared by certificates and the
//! report format.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{Matrix, PolyRing};

/// A matrix with entries written in the polynomial grammar, row by row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

impl MatrixJson {
    pub fn from_matrix(ring: &PolyRing, m: &Matrix) -> Self {
        MatrixJson { rows: m.nrows(), cols: m.ncols(), entries: m.to_strings(ring) }
    }

    pub fn to_matrix(&self, ring: &PolyRing) -> Result<Matrix> {
        if self.entries.len() != self.rows {
            return Err(Error::Parse(format!("matrix declares {} rows but lists {}", self.rows, self.entries.len())));
        }
        Matrix::from_strings(ring, &self.entries, self.cols)
    }
}
