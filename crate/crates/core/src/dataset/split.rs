use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Indices (into the caller's sample list) of a balanced train/test split.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalancedSplit {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Downsamples the majority class to the minority count and splits each
/// class so that `round(test_fraction · n)` of its samples go to test.
///
/// Both lists come back sorted, so membership, not order, is what the
/// seed decides.
pub fn balance_and_split(labels: &[u8], test_fraction: f64, seed: u64) -> Result<BalancedSplit> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!("test fraction {test_fraction} outside (0, 1)")));
    }
    let mut classes: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (i, &y) in labels.iter().enumerate() {
        match y {
            0 | 1 => classes[y as usize].push(i),
            other => return Err(Error::Dataset(format!("label {other} at sample {i} is not binary"))),
        }
    }
    let counts = [classes[0].len(), classes[1].len()];
    if counts[0] < 2 || counts[1] < 2 {
        return Err(Error::Dataset(format!(
            "need at least 2 samples per class, got class 0: {}, class 1: {}",
            counts[0], counts[1]
        )));
    }
    let keep = counts[0].min(counts[1]);
    let n_test = ((test_fraction * keep as f64).round() as usize).clamp(1, keep - 1);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut split = BalancedSplit {
        train: Vec::with_capacity(2 * (keep - n_test)),
        test: Vec::with_capacity(2 * n_test),
    };
    for members in &mut classes {
        members.shuffle(&mut rng);
        split.test.extend_from_slice(&members[..n_test]);
        split.train.extend_from_slice(&members[n_test..keep]);
    }
    split.train.sort_unstable();
    split.test.sort_unstable();
    Ok(split)
}
