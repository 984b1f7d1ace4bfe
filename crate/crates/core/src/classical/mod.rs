//! Small 1-D convolutional classifiers with an exact trainable-parameter
//! budget, trained by hand-written backpropagation.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// `conv1d(1 → channels, kernel) → ReLU → [maxpool 2] → flatten →
/// dense(hidden) → ReLU → dense(1) → sigmoid`, all layers with bias.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CnnArchitecture {
    pub input_dim: usize,
    pub channels: usize,
    pub kernel: usize,
    pub pool: bool,
    pub hidden: usize,
}

impl CnnArchitecture {
    /// Length of each convolution output channel (valid padding, stride 1).
    pub fn conv_len(&self) -> usize {
        self.input_dim + 1 - self.kernel
    }

    /// Length of each channel after optional pooling.
    pub fn pooled_len(&self) -> usize {
        if self.pool {
            self.conv_len() / 2
        } else {
            self.conv_len()
        }
    }

    /// Number of leading inputs that can influence the flattened features;
    /// a trailing conv position dropped by pooling loses its last input.
    pub fn covered_inputs(&self) -> usize {
        let used = if self.pool { 2 * self.pooled_len() } else { self.conv_len() };
        used + self.kernel - 1
    }

    pub fn flat_len(&self) -> usize {
        self.channels * self.pooled_len()
    }

    pub fn num_params(&self) -> usize {
        let conv = self.channels * self.kernel + self.channels;
        let dense = self.flat_len() * self.hidden + self.hidden;
        conv + dense + self.hidden + 1
    }

    fn validate(&self) -> Result<()> {
        if self.channels == 0 || self.hidden == 0 || self.kernel == 0 || self.kernel > self.input_dim || self.pooled_len() == 0
        {
            return Err(Error::InvalidArgument(format!("degenerate CNN architecture {self:?}")));
        }
        if self.covered_inputs() < self.input_dim {
            return Err(Error::InvalidArgument(format!(
                "CNN architecture {self:?} never reads input {}",
                self.input_dim - 1
            )));
        }
        Ok(())
    }

    /// First architecture with exactly `target` parameters, searching
    /// pooling (on, then off), then channels `≥ 2`, kernel `2..input_dim`
    /// and hidden width in increasing order. Shapes whose pooling drops an
    /// input are skipped.
    pub fn for_budget(input_dim: usize, target: usize) -> Result<Self> {
        for pool in [true, false] {
            for channels in 2..=16 {
                for kernel in 2..input_dim {
                    for hidden in 1..=512 {
                        let a = Self {
                            input_dim,
                            channels,
                            kernel,
                            pool,
                            hidden,
                        };
                        if a.pooled_len() == 0 || a.covered_inputs() < input_dim {
                            break;
                        }
                        match a.num_params().cmp(&target) {
                            std::cmp::Ordering::Equal => return Ok(a),
                            std::cmp::Ordering::Greater => break,
                            std::cmp::Ordering::Less => {}
                        }
                    }
                }
            }
        }
        Err(Error::InvalidArgument(format!(
            "no conv+dense architecture on {input_dim} inputs has exactly {target} parameters"
        )))
    }

    /// `"conv1d(1→2,k=3) → ReLU → maxpool2 → dense(2→26) → ReLU → dense(26→1) → sigmoid"`.
    pub fn describe(&self) -> String {
        format!(
            "conv1d(1→{},k={}) → ReLU{} → dense({}→{}) → ReLU → dense({}→1) → sigmoid",
            self.channels,
            self.kernel,
            if self.pool { " → maxpool2" } else { "" },
            self.flat_len(),
            self.hidden,
            self.hidden
        )
    }
}

/// A CNN with its flat parameter vector.
///
/// Layout: conv weights (`channels × kernel`, channel-major), conv biases,
/// dense weights (`hidden × flat`, row-major), dense biases, output weights,
/// output bias.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "CnnRecord", try_from = "CnnRecord")]
pub struct CnnModel {
    arch: CnnArchitecture,
    params: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CnnRecord {
    architecture: CnnArchitecture,
    description: String,
    param_count: usize,
    parameters: Vec<f64>,
}

impl From<CnnModel> for CnnRecord {
    fn from(m: CnnModel) -> Self {
        CnnRecord {
            architecture: m.arch,
            description: m.arch.describe(),
            param_count: m.params.len(),
            parameters: m.params,
        }
    }
}

impl TryFrom<CnnRecord> for CnnModel {
    type Error = Error;

    fn try_from(r: CnnRecord) -> Result<Self> {
        r.architecture.validate()?;
        let expected = r.architecture.num_params();
        if r.parameters.len() != expected || r.param_count != expected {
            return Err(Error::InvalidArgument(format!(
                "CNN checkpoint declares {} / holds {} parameters, architecture needs {expected}",
                r.param_count,
                r.parameters.len()
            )));
        }
        Ok(CnnModel {
            arch: r.architecture,
            params: r.parameters,
        })
    }
}

struct Offsets {
    conv_w: usize,
    conv_b: usize,
    dense_w: usize,
    dense_b: usize,
    out_w: usize,
    out_b: usize,
}

/// Intermediate values of one forward pass.
struct Tape {
    conv_pre: Vec<f64>,
    pooled: Vec<f64>,
    pool_src: Vec<usize>,
    hidden_pre: Vec<f64>,
    hidden: Vec<f64>,
    p: f64,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

impl CnnModel {
    pub fn zeros(arch: CnnArchitecture) -> Result<Self> {
        arch.validate()?;
        Ok(Self {
            arch,
            params: vec![0.0; arch.num_params()],
        })
    }

    /// Weights and biases uniform in `±1/√fan_in` of their layer.
    pub fn random(arch: CnnArchitecture, rng: &mut impl Rng) -> Result<Self> {
        let mut m = Self::zeros(arch)?;
        let o = m.offsets();
        let fans = [
            (o.conv_w, o.dense_w, arch.kernel),
            (o.dense_w, o.out_w, arch.flat_len()),
            (o.out_w, m.params.len(), arch.hidden),
        ];
        for (start, end, fan_in) in fans {
            let bound = 1.0 / (fan_in as f64).sqrt();
            for p in &mut m.params[start..end] {
                *p = rng.random_range(-bound..bound);
            }
        }
        Ok(m)
    }

    /// The smallest-first architecture with `target` parameters on `input_dim`
    /// inputs, randomly initialized.
    pub fn with_budget(input_dim: usize, target: usize, rng: &mut impl Rng) -> Result<Self> {
        Self::random(CnnArchitecture::for_budget(input_dim, target)?, rng)
    }

    pub fn architecture(&self) -> CnnArchitecture {
        self.arch
    }

    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    fn offsets(&self) -> Offsets {
        let a = &self.arch;
        let conv_w = 0;
        let conv_b = conv_w + a.channels * a.kernel;
        let dense_w = conv_b + a.channels;
        let dense_b = dense_w + a.hidden * a.flat_len();
        let out_w = dense_b + a.hidden;
        let out_b = out_w + a.hidden;
        Offsets {
            conv_w,
            conv_b,
            dense_w,
            dense_b,
            out_w,
            out_b,
        }
    }

    fn run(&self, x: &[f64]) -> Result<Tape> {
        let a = &self.arch;
        if x.len() != a.input_dim {
            return Err(Error::DimensionMismatch {
                expected: a.input_dim,
                actual: x.len(),
            });
        }
        let o = self.offsets();
        let w = &self.params;
        let (cl, pl) = (a.conv_len(), a.pooled_len());
        let mut conv_pre = vec![0.0; a.channels * cl];
        for c in 0..a.channels {
            for t in 0..cl {
                let mut z = w[o.conv_b + c];
                for j in 0..a.kernel {
                    z += w[o.conv_w + c * a.kernel + j] * x[t + j];
                }
                conv_pre[c * cl + t] = z;
            }
        }
        let act: Vec<f64> = conv_pre.iter().map(|&z| z.max(0.0)).collect();
        let mut pooled = vec![0.0; a.channels * pl];
        let mut pool_src = vec![0; a.channels * pl];
        for c in 0..a.channels {
            for t in 0..pl {
                let src = if a.pool {
                    let (i0, i1) = (c * cl + 2 * t, c * cl + 2 * t + 1);
                    if act[i1] > act[i0] {
                        i1
                    } else {
                        i0
                    }
                } else {
                    c * cl + t
                };
                pooled[c * pl + t] = act[src];
                pool_src[c * pl + t] = src;
            }
        }
        let f = a.flat_len();
        let hidden_pre: Vec<f64> = (0..a.hidden)
            .map(|h| {
                w[o.dense_b + h]
                    + w[o.dense_w + h * f..o.dense_w + (h + 1) * f]
                        .iter()
                        .zip(&pooled)
                        .map(|(wi, xi)| wi * xi)
                        .sum::<f64>()
            })
            .collect();
        let hidden: Vec<f64> = hidden_pre.iter().map(|&z| z.max(0.0)).collect();
        let logit = w[o.out_b]
            + w[o.out_w..o.out_w + a.hidden]
                .iter()
                .zip(&hidden)
                .map(|(wi, hi)| wi * hi)
                .sum::<f64>();
        Ok(Tape {
            conv_pre,
            pooled,
            pool_src,
            hidden_pre,
            hidden,
            p: sigmoid(logit),
        })
    }

    /// Class-1 probability.
    pub fn forward(&self, x: &[f64]) -> Result<f64> {
        Ok(self.run(x)?.p)
    }

    /// Smallest `|pre-activation|` over both ReLU layers; finite differences
    /// are only meaningful away from the kinks.
    pub fn min_abs_preactivation(&self, x: &[f64]) -> Result<f64> {
        let tape = self.run(x)?;
        Ok(tape
            .conv_pre
            .iter()
            .chain(&tape.hidden_pre)
            .fold(f64::INFINITY, |m, z| m.min(z.abs())))
    }

    /// `(p, ∂(p − y)²/∂θ)` by reverse-mode accumulation.
    pub fn backward(&self, x: &[f64], label: f64) -> Result<(f64, Vec<f64>)> {
        let a = &self.arch;
        let tape = self.run(x)?;
        let o = self.offsets();
        let w = &self.params;
        let mut g = vec![0.0; w.len()];
        let p = tape.p;
        let dlogit = 2.0 * (p - label) * p * (1.0 - p);

        g[o.out_b] = dlogit;
        let mut dhidden_pre = vec![0.0; a.hidden];
        for h in 0..a.hidden {
            g[o.out_w + h] = dlogit * tape.hidden[h];
            if tape.hidden_pre[h] > 0.0 {
                dhidden_pre[h] = dlogit * w[o.out_w + h];
            }
        }

        let f = a.flat_len();
        let mut dpooled = vec![0.0; f];
        for h in 0..a.hidden {
            let d = dhidden_pre[h];
            g[o.dense_b + h] = d;
            for i in 0..f {
                g[o.dense_w + h * f + i] = d * tape.pooled[i];
                dpooled[i] += d * w[o.dense_w + h * f + i];
            }
        }

        let cl = a.conv_len();
        let mut dconv_pre = vec![0.0; a.channels * cl];
        for (i, &src) in tape.pool_src.iter().enumerate() {
            if tape.conv_pre[src] > 0.0 {
                dconv_pre[src] += dpooled[i];
            }
        }
        for c in 0..a.channels {
            for t in 0..cl {
                let d = dconv_pre[c * cl + t];
                g[o.conv_b + c] += d;
                for j in 0..a.kernel {
                    g[o.conv_w + c * a.kernel + j] += d * x[t + j];
                }
            }
        }
        Ok((p, g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
        rand_chacha::ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn budgets_are_met_exactly() {
        for d in [4, 8, 16] {
            for target in [51, 113] {
                let a = CnnArchitecture::for_budget(d, target).unwrap();
                assert_eq!(a.num_params(), target, "d={d}: {a:?}");
                assert!(a.channels >= 2 && a.kernel < d);
                assert_eq!(a.covered_inputs(), d, "{a:?}");
            }
        }
        let small = CnnArchitecture::for_budget(4, 51).unwrap();
        assert_eq!((small.channels, small.kernel, small.pool, small.hidden), (2, 3, false, 7));
        let large = CnnArchitecture::for_budget(4, 113).unwrap();
        assert_eq!((large.channels, large.kernel, large.pool, large.hidden), (2, 3, true, 26));
    }

    #[test]
    fn every_input_reaches_the_output() {
        // without pooling the gradient with respect to every input is live
        let m = CnnModel::with_budget(4, 51, &mut rng(4)).unwrap();
        assert!(!m.architecture().pool);
        let x = [0.3, 0.5, 0.7, 0.9];
        let p = m.forward(&x).unwrap();
        for i in 0..4 {
            let mut y = x;
            y[i] += 0.05;
            assert_ne!(m.forward(&y).unwrap(), p, "input {i} ignored");
        }
        let dropping = CnnArchitecture {
            input_dim: 4,
            channels: 2,
            kernel: 2,
            pool: true,
            hidden: 11,
        };
        assert_eq!(dropping.covered_inputs(), 3);
        assert!(CnnModel::zeros(dropping).is_err());
    }

    #[test]
    fn zero_weights_give_one_half() {
        let m = CnnModel::zeros(CnnArchitecture::for_budget(4, 51).unwrap()).unwrap();
        assert_eq!(m.forward(&[0.1, 0.9, 0.4, 0.7]).unwrap(), 0.5);
    }

    #[test]
    fn rejects_wrong_input_length() {
        let m = CnnModel::with_budget(4, 51, &mut rng(0)).unwrap();
        assert!(m.forward(&[0.0; 3]).is_err());
    }

    #[test]
    fn backward_matches_finite_differences() {
        let mut r = rng(1);
        let mut checked = 0;
        while checked < 20 {
            let target = if checked % 2 == 0 { 51 } else { 113 };
            let m = CnnModel::with_budget(4, target, &mut r).unwrap();
            let x: Vec<f64> = (0..4).map(|_| r.random_range(0.0..1.0)).collect();
            if m.min_abs_preactivation(&x).unwrap() < 1e-3 {
                continue;
            }
            let (_, g) = m.backward(&x, 1.0).unwrap();
            let loss = |mm: &CnnModel| (mm.forward(&x).unwrap() - 1.0).powi(2);
            for i in 0..m.num_params() {
                let h = 1e-5;
                let mut a = m.clone();
                a.params_mut()[i] += h;
                let mut b = m.clone();
                b.params_mut()[i] -= h;
                let fd = (loss(&a) - loss(&b)) / (2.0 * h);
                assert!((g[i] - fd).abs() <= 1e-6 * fd.abs().max(1e-3), "param {i}: {} vs {fd}", g[i]);
            }
            checked += 1;
        }
    }

    #[test]
    fn matching_label_zeroes_gradient() {
        let m = CnnModel::with_budget(4, 113, &mut rng(2)).unwrap();
        let x = [0.2, 0.4, 0.6, 0.8];
        let p = m.forward(&x).unwrap();
        assert!(m.backward(&x, p).unwrap().1.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn checkpoint_round_trip_keeps_count() {
        let m = CnnModel::with_budget(4, 113, &mut rng(3)).unwrap();
        let text = crate::json::to_line(&m);
        let back: CnnModel = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.num_params(), 113);
        let bad = text.replacen("\"hidden\":26", "\"hidden\":25", 1);
        assert!(serde_json::from_str::<CnnModel>(&bad).is_err());
    }
}
