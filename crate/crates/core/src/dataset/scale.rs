use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Per-dimension affine map of training ranges onto `[0, π]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleBounds {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl AngleBounds {
    pub fn fit(train: &[Vec<f64>]) -> Result<Self> {
        let first = train
            .first()
            .ok_or_else(|| Error::InvalidArgument("cannot fit angle bounds on no rows".into()))?;
        let mut min = first.clone();
        let mut max = first.clone();
        for row in train {
            if row.len() != min.len() {
                return Err(Error::DimensionMismatch {
                    expected: min.len(),
                    actual: row.len(),
                });
            }
            for (j, &x) in row.iter().enumerate() {
                min[j] = min[j].min(x);
                max[j] = max[j].max(x);
            }
        }
        Ok(Self { min, max })
    }
}

/// Maps each dimension to `[0, π]`; values outside the training range are
/// clipped and a constant training column maps to `π/2`.
pub fn scale_to_angles(scores: &[f64], bounds: &AngleBounds) -> Result<Vec<f64>> {
    if scores.len() != bounds.min.len() {
        return Err(Error::DimensionMismatch {
            expected: bounds.min.len(),
            actual: scores.len(),
        });
    }
    Ok(scores
        .iter()
        .zip(bounds.min.iter().zip(&bounds.max))
        .map(|(&x, (&lo, &hi))| {
            if hi > lo {
                (PI * (x - lo) / (hi - lo)).clamp(0.0, PI)
            } else {
                FRAC_PI_2
            }
        })
        .collect())
}
