//! Separation-time detection, central excess entropy and threshold labels.

use crate::{Error, Result};

fn extremum_gap(row: &[f64]) -> usize {
    // first occurrence wins on ties, so the result is deterministic
    let mut imax = 0;
    let mut imin = 0;
    for (i, &x) in row.iter().enumerate() {
        if x > row[imax] {
            imax = i;
        }
        if x < row[imin] {
            imin = i;
        }
    }
    imax.abs_diff(imin)
}

/// Index of the separation time `t*` in a density image, or `None`.
///
/// With `d(t) = |argmax − argmin|` of the excess-density row, the packets
/// have collided at the first step `c ≥ 1` with `d(c) < d(0)` and
/// `d(c) ≤ f_sep·N`; `t*` is the first step after `c` with `d > f_sep·N`.
/// Requiring the collision first keeps the rule from firing on packets that
/// simply start far apart.
pub fn detect_separation_time(image: &[Vec<f64>], f_sep: f64) -> Option<usize> {
    let first = image.first()?;
    let limit = f_sep * first.len() as f64;
    let gaps: Vec<usize> = image.iter().map(|row| extremum_gap(row)).collect();
    let collision = (1..gaps.len()).find(|&i| gaps[i] < gaps[0] && gaps[i] as f64 <= limit)?;
    (collision + 1..gaps.len()).find(|&i| gaps[i] as f64 > limit)
}

/// `ΔS_mid = (ΔS_{N/2−1} + ΔS_{N/2}) / 2` from one row of excess entropies
/// indexed by `cut − 1`.
pub fn central_excess_entropy(entropy_row: &[f64]) -> Result<f64> {
    let sites = entropy_row.len() + 1;
    if !sites.is_multiple_of(2) || sites < 4 {
        return Err(Error::InvalidArgument(format!(
            "central entropy needs an even number of sites ≥ 4, got {sites}"
        )));
    }
    let half = sites / 2;
    Ok(0.5 * (entropy_row[half - 2] + entropy_row[half - 1]))
}

/// Class 1 strictly above the threshold; a tie is class 0.
pub fn assign_label(delta_s_mid: f64, threshold: f64) -> u8 {
    u8::from(delta_s_mid > threshold)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn peaks(n: usize, plus: usize, minus: usize) -> Vec<f64> {
        let mut row = vec![0.0; n];
        row[plus] = 1.0;
        row[minus] = -1.0;
        row
    }

    #[test]
    fn fires_after_crossing() {
        let image = vec![
            peaks(40, 12, 28),
            peaks(40, 17, 23),
            peaks(40, 20, 21),
            peaks(40, 5, 35),
            peaks(40, 5, 35),
        ];
        assert_eq!(detect_separation_time(&image, 0.5), Some(3));
    }

    #[test]
    fn never_separated_is_absent() {
        let image = vec![peaks(40, 12, 28), peaks(40, 19, 21), peaks(40, 15, 25)];
        assert_eq!(detect_separation_time(&image, 0.5), None);
    }

    #[test]
    fn far_apart_start_does_not_fire_without_collision() {
        let image = vec![peaks(40, 2, 38); 5];
        assert_eq!(detect_separation_time(&image, 0.5), None);
    }

    #[test]
    fn central_entropy_is_mean_of_middle_cuts() {
        let mut row = vec![0.0; 11];
        row[4] = 0.8;
        row[5] = 1.0;
        assert!((central_excess_entropy(&row).unwrap() - 0.9).abs() < 1e-15);
        assert_eq!(central_excess_entropy(&[0.3; 39]).unwrap(), 0.3);
        assert!(central_excess_entropy(&[0.0; 10]).is_err());
    }

    #[test]
    fn forty_sites_use_cuts_19_and_20() {
        let row: Vec<f64> = (1..40).map(f64::from).collect();
        assert_eq!(central_excess_entropy(&row).unwrap(), 19.5);
    }

    #[test]
    fn ties_go_to_class_zero() {
        assert_eq!(assign_label(1.0, 0.9), 1);
        assert_eq!(assign_label(0.5, 0.9), 0);
        assert_eq!(assign_label(0.9, 0.9), 0);
    }
}
