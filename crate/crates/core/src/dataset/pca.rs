use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::linalg::symmetric_eigen;
use crate::{Error, Result};

/// Mean-centred principal components of a training matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    pub mean: Vec<f64>,
    /// `d` orthonormal rows of length `raw_dim`.
    pub components: Vec<Vec<f64>>,
    /// Sample variances along each component, non-increasing.
    pub explained_variance: Vec<f64>,
}

/// Fits `d` components to the rows of `data`.
///
/// Uses the `D × D` covariance when there are at least as many rows as
/// columns and the `M × M` Gram matrix otherwise. Each component's sign is
/// fixed so that its largest-magnitude entry is positive.
pub fn fit_pca(data: &[Vec<f64>], d: usize) -> Result<PcaModel> {
    let m = data.len();
    let dim = data.first().map_or(0, Vec::len);
    if m < 2 || dim == 0 {
        return Err(Error::InvalidArgument(format!("PCA needs ≥ 2 non-empty rows, got {m}")));
    }
    if data.iter().any(|r| r.len() != dim) {
        return Err(Error::InvalidArgument("PCA rows have different lengths".into()));
    }
    if d == 0 || d > m.min(dim) {
        return Err(Error::InvalidArgument(format!(
            "cannot extract {d} components from {m} rows of dimension {dim}"
        )));
    }
    let mean: Vec<f64> = (0..dim)
        .map(|j| data.iter().map(|r| r[j]).sum::<f64>() / m as f64)
        .collect();
    let x = DMatrix::from_fn(m, dim, |i, j| data[i][j] - mean[j]);
    let scale = 1.0 / (m - 1) as f64;

    let (values, vectors) = if dim <= m {
        let (vals, vecs) = symmetric_eigen(&(x.transpose() * &x * scale));
        (vals, vecs)
    } else {
        let (vals, vecs) = symmetric_eigen(&(&x * x.transpose() * scale));
        // v_i = Xᵀ u_i / ‖Xᵀ u_i‖
        let mut mapped = x.transpose() * vecs;
        for mut col in mapped.column_iter_mut() {
            let n = col.norm();
            if n > 0.0 {
                col /= n;
            }
        }
        (vals, mapped)
    };
    // eigen-solver returns ascending order
    let order: Vec<usize> = (0..values.len()).rev().collect();
    let top = values[order[0]].max(0.0);
    let rank = values.iter().filter(|&&v| v > 1e-12 * top.max(f64::MIN_POSITIVE)).count();
    if d > rank {
        return Err(Error::Dataset(format!(
            "requested {d} components but the training features have rank {rank}"
        )));
    }
    let mut components = Vec::with_capacity(d);
    let mut explained_variance = Vec::with_capacity(d);
    for &k in order.iter().take(d) {
        let mut v: Vec<f64> = vectors.column(k).iter().copied().collect();
        let pivot = v.iter().copied().fold(0.0f64, |a, b| if b.abs() > a.abs() { b } else { a });
        if pivot < 0.0 {
            v.iter_mut().for_each(|c| *c = -*c);
        }
        components.push(v);
        explained_variance.push(values[k]);
    }
    Ok(PcaModel {
        mean,
        components,
        explained_variance,
    })
}

impl PcaModel {
    pub fn raw_dim(&self) -> usize {
        self.mean.len()
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn transform(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.raw_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.raw_dim(),
                actual: row.len(),
            });
        }
        Ok(self
            .components
            .iter()
            .map(|c| c.iter().zip(row).zip(&self.mean).map(|((a, x), mu)| a * (x - mu)).sum())
            .collect())
    }

    pub fn inverse_transform(&self, scores: &[f64]) -> Vec<f64> {
        let mut out = self.mean.clone();
        for (s, c) in scores.iter().zip(&self.components) {
            out.iter_mut().zip(c).for_each(|(o, a)| *o += s * a);
        }
        out
    }
}

/// Projects every row onto the model's components.
pub fn apply_pca(model: &PcaModel, data: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    data.iter().map(|r| model.transform(r)).collect()
}
