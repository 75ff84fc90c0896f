//! JSON serialization of complex matrices as `{dims, re[][], im[][]}`.
//!
//! serde_json emits the shortest representation that round-trips every f64
//! exactly, which meets the 17-significant-digit contract.

use crate::{C64, CMat, Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct MatrixJson {
    pub dims: [usize; 2],
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_cmat(m: &CMat) -> Self {
        let (r, c) = (m.nrows(), m.ncols());
        let mut re = vec![vec![0.0; c]; r];
        let mut im = vec![vec![0.0; c]; r];
        for i in 0..r {
            for j in 0..c {
                re[i][j] = m[(i, j)].re;
                im[i][j] = m[(i, j)].im;
            }
        }
        MatrixJson { dims: [r, c], re, im }
    }

    pub fn to_cmat(&self) -> Result<CMat> {
        let [r, c] = self.dims;
        if self.re.len() != r || self.im.len() != r {
            return Err(Error::ShapeMismatch("row count in matrix JSON".into()));
        }
        let mut m = CMat::zeros((r, c));
        for i in 0..r {
            if self.re[i].len() != c || self.im[i].len() != c {
                return Err(Error::ShapeMismatch("column count in matrix JSON".into()));
            }
            for j in 0..c {
                m[(i, j)] = C64::new(self.re[i][j], self.im[i][j]);
            }
        }
        Ok(m)
    }
}

pub fn cmat_to_json(m: &CMat) -> String {
    serde_json::to_string(&MatrixJson::from_cmat(m)).expect("matrix JSON never fails")
}

pub fn cmat_from_json(s: &str) -> Result<CMat> {
    let mj: MatrixJson = serde_json::from_str(s)?;
    mj.to_cmat()
}
