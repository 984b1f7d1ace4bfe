use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Mean of `(p_i − y_i)²`.
pub fn mse_loss(preds: &[f64], labels: &[f64]) -> Result<f64> {
    if preds.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            actual: preds.len(),
        });
    }
    if preds.is_empty() {
        return Err(Error::InvalidArgument("MSE of an empty batch".into()));
    }
    Ok(preds.iter().zip(labels).map(|(p, y)| (p - y).powi(2)).sum::<f64>() / preds.len() as f64)
}

/// Fraction of samples where `(p ≥ 0.5)` agrees with the label.
pub fn accuracy(preds: &[f64], labels: &[u8]) -> f64 {
    if preds.is_empty() {
        return 0.0;
    }
    let hits = preds
        .iter()
        .zip(labels)
        .filter(|(&p, &y)| u8::from(p >= 0.5) == y)
        .count();
    hits as f64 / preds.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.01,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// First and second moment estimates and the step counter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: u64,
}

impl AdamState {
    pub fn new(n: usize) -> Self {
        Self {
            m: vec![0.0; n],
            v: vec![0.0; n],
            t: 0,
        }
    }
}

/// One bias-corrected Adam update in place.
pub fn adam_step(params: &mut [f64], grads: &[f64], state: &mut AdamState, cfg: &AdamConfig) -> Result<()> {
    if params.len() != grads.len() || state.m.len() != params.len() || state.v.len() != params.len() {
        return Err(Error::DimensionMismatch {
            expected: params.len(),
            actual: grads.len(),
        });
    }
    state.t += 1;
    let t = state.t as i32;
    let c1 = 1.0 - cfg.beta1.powi(t);
    let c2 = 1.0 - cfg.beta2.powi(t);
    for i in 0..params.len() {
        let g = grads[i];
        state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * g;
        state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * g * g;
        let m_hat = state.m[i] / c1;
        let v_hat = state.v[i] / c2;
        params[i] -= cfg.learning_rate * m_hat / (v_hat.sqrt() + cfg.epsilon);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mse_examples() {
        assert_eq!(mse_loss(&[1.0, 0.0], &[1.0, 0.0]).unwrap(), 0.0);
        assert_eq!(mse_loss(&[0.5; 4], &[0.0, 1.0, 1.0, 0.0]).unwrap(), 0.25);
        assert!((mse_loss(&[0.9], &[0.0]).unwrap() - 0.81).abs() < 1e-15);
        assert!(mse_loss(&[], &[]).is_err());
        assert!(mse_loss(&[0.1], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn accuracy_uses_half_as_class_one() {
        assert_eq!(accuracy(&[0.5, 0.49, 0.9, 0.1], &[1, 0, 0, 0]), 0.75);
    }

    #[test]
    fn first_adam_step_moves_by_learning_rate() {
        // m̂ = g and v̂ = g², so the update is lr·g/(|g| + ε)
        let cfg = AdamConfig::default();
        let grads = [3.0, -0.02, 150.0];
        let mut p = [0.0; 3];
        let mut s = AdamState::new(3);
        adam_step(&mut p, &grads, &mut s, &cfg).unwrap();
        for (x, g) in p.iter().zip(grads) {
            let expected = -cfg.learning_rate * g / (g.abs() + cfg.epsilon);
            assert!((x - expected).abs() < 1e-15);
            assert!((x + cfg.learning_rate * g.signum()).abs() < 1e-6);
        }
    }

    #[test]
    fn zero_gradients_leave_parameters() {
        let mut p = [0.3, -1.0];
        let mut s = AdamState::new(2);
        for _ in 0..10 {
            adam_step(&mut p, &[0.0, 0.0], &mut s, &AdamConfig::default()).unwrap();
        }
        assert_eq!(p, [0.3, -1.0]);
    }

    #[test]
    fn adam_is_deterministic() {
        let run = || {
            let mut p = vec![0.1, 0.2];
            let mut s = AdamState::new(2);
            adam_step(&mut p, &[0.5, -0.25], &mut s, &AdamConfig::default()).unwrap();
            (p, s)
        };
        assert_eq!(run(), run());
    }
}
