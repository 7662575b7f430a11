//! Fully connected feed-forward network with mean-squared-error
//! backpropagation, finite-difference gradient checking, and dead-unit /
//! vanishing-gradient diagnostics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Activation, NeuralError, Result};

/// `(input, target)` pairs.
pub type Batch = [(Vec<f64>, Vec<f64>)];

#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    layer_sizes: Vec<usize>,
    /// Per layer `l`, a `sizes[l+1] × sizes[l]` row-major matrix.
    weights: Vec<Vec<f64>>,
    biases: Vec<Vec<f64>>,
    /// One activation per non-input layer.
    activations: Vec<Activation>,
    seed: Option<u64>,
}

/// Pre- and post-activation values of every layer; `post[0]` is the input.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardPass {
    pub pre: Vec<Vec<f64>>,
    pub post: Vec<Vec<f64>>,
}

impl ForwardPass {
    pub fn output(&self) -> &[f64] {
        self.post.last().expect("at least one layer")
    }
}

/// Loss gradient for every parameter, same shapes as the network.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
    pub loss: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientReport {
    /// Mean |∂loss/∂w| for each weight layer, input side first.
    pub mean_abs_grad: Vec<f64>,
    /// Per non-input layer, whether each unit never activates on the data.
    pub dead: Vec<Vec<bool>>,
}

impl GradientReport {
    /// `(layer, unit)` pairs of dead units; layer 1 is the first hidden layer.
    pub fn dead_neurons(&self) -> Vec<(usize, usize)> {
        self.dead
            .iter()
            .enumerate()
            .flat_map(|(l, units)| {
                units
                    .iter()
                    .enumerate()
                    .filter(|(_, &d)| d)
                    .map(move |(i, _)| (l + 1, i))
            })
            .collect()
    }

    pub fn dead_count(&self) -> usize {
        self.dead.iter().flatten().filter(|&&d| d).count()
    }

    /// `layer,mean_abs_grad` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("layer,mean_abs_grad\n");
        for (l, g) in self.mean_abs_grad.iter().enumerate() {
            out.push_str(&format!("{},{}\n", l + 1, g));
        }
        out
    }
}

const DOCUMENT_FORMAT: &str = "flybot-mlp";
const DOCUMENT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct MlpDocument {
    format: String,
    version: u32,
    layer_sizes: Vec<usize>,
    weights: Vec<Vec<f64>>,
    biases: Vec<Vec<f64>>,
    activations: Vec<Activation>,
    seed: Option<u64>,
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(NeuralError::DimensionMismatch { expected, got })
    }
}

fn validate_topology(layer_sizes: &[usize]) -> Result<()> {
    if layer_sizes.len() < 3 {
        return Err(NeuralError::BadTopology(format!(
            "need input, hidden and output layers, got {} layers",
            layer_sizes.len()
        )));
    }
    if let Some(i) = layer_sizes.iter().position(|&n| n == 0) {
        return Err(NeuralError::BadTopology(format!("layer {i} has no units")));
    }
    Ok(())
}

impl Mlp {
    /// Seeded initialization: every weight and bias uniform in [-0.5, 0.5].
    pub fn init(layer_sizes: &[usize], activation: Activation, seed: u64) -> Result<Self> {
        validate_topology(layer_sizes)?;
        activation.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for pair in layer_sizes.windows(2) {
            let (fan_in, fan_out) = (pair[0], pair[1]);
            weights.push(
                (0..fan_in * fan_out)
                    .map(|_| rng.random_range(-0.5..=0.5))
                    .collect(),
            );
            biases.push((0..fan_out).map(|_| rng.random_range(-0.5..=0.5)).collect());
        }
        Ok(Self {
            layer_sizes: layer_sizes.to_vec(),
            weights,
            biases,
            activations: vec![activation; layer_sizes.len() - 1],
            seed: Some(seed),
        })
    }

    /// Builds a network from explicit parameters.
    pub fn from_parts(
        layer_sizes: &[usize],
        weights: Vec<Vec<f64>>,
        biases: Vec<Vec<f64>>,
        activations: Vec<Activation>,
    ) -> Result<Self> {
        validate_topology(layer_sizes)?;
        let layers = layer_sizes.len() - 1;
        check_len(layers, weights.len())?;
        check_len(layers, biases.len())?;
        check_len(layers, activations.len())?;
        for (l, pair) in layer_sizes.windows(2).enumerate() {
            check_len(pair[0] * pair[1], weights[l].len())?;
            check_len(pair[1], biases[l].len())?;
            activations[l].validate()?;
        }
        Ok(Self {
            layer_sizes: layer_sizes.to_vec(),
            weights,
            biases,
            activations,
            seed: None,
        })
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn biases(&self) -> &[Vec<f64>] {
        &self.biases
    }

    pub fn activations(&self) -> &[Activation] {
        &self.activations
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn weights_mut(&mut self) -> &mut [Vec<f64>] {
        &mut self.weights
    }

    pub fn biases_mut(&mut self) -> &mut [Vec<f64>] {
        &mut self.biases
    }

    fn input_size(&self) -> usize {
        self.layer_sizes[0]
    }

    fn output_size(&self) -> usize {
        *self.layer_sizes.last().expect("validated")
    }

    pub fn forward(&self, x: &[f64]) -> Result<ForwardPass> {
        check_len(self.input_size(), x.len())?;
        let mut pre = Vec::with_capacity(self.weights.len());
        let mut post = vec![x.to_vec()];
        for (l, act) in self.activations.iter().enumerate() {
            let (fan_in, fan_out) = (self.layer_sizes[l], self.layer_sizes[l + 1]);
            let input = &post[l];
            let w = &self.weights[l];
            let z: Vec<f64> = (0..fan_out)
                .map(|j| {
                    let row = &w[j * fan_in..(j + 1) * fan_in];
                    self.biases[l][j] + row.iter().zip(input).map(|(a, b)| a * b).sum::<f64>()
                })
                .collect();
            post.push(z.iter().map(|&v| act.apply(v)).collect());
            pre.push(z);
        }
        Ok(ForwardPass { pre, post })
    }

    pub fn predict(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.forward(x)?.output().to_vec())
    }

    /// Mean over the batch of the per-sample mean squared output error.
    pub fn loss(&self, batch: &Batch) -> Result<f64> {
        if batch.is_empty() {
            return Err(NeuralError::EmptyDataset);
        }
        let mut total = 0.0;
        for (x, t) in batch {
            check_len(self.output_size(), t.len())?;
            let y = self.predict(x)?;
            total += sample_loss(&y, t);
        }
        Ok(total / batch.len() as f64)
    }

    pub fn gradients(&self, batch: &Batch) -> Result<Gradients> {
        if batch.is_empty() {
            return Err(NeuralError::EmptyDataset);
        }
        let mut gw: Vec<Vec<f64>> = self.weights.iter().map(|w| vec![0.0; w.len()]).collect();
        let mut gb: Vec<Vec<f64>> = self.biases.iter().map(|b| vec![0.0; b.len()]).collect();
        let m = self.output_size() as f64;
        let scale = 1.0 / batch.len() as f64;
        let mut loss = 0.0;
        for (x, t) in batch {
            check_len(self.output_size(), t.len())?;
            let pass = self.forward(x)?;
            let y = pass.output();
            loss += sample_loss(y, t);
            // delta = dL/dz for the current layer, starting at the output.
            let last = self.weights.len() - 1;
            let mut delta: Vec<f64> = y
                .iter()
                .zip(t)
                .zip(&pass.pre[last])
                .map(|((yj, tj), zj)| 2.0 * (yj - tj) / m * self.activations[last].derivative(*zj))
                .collect();
            for l in (0..self.weights.len()).rev() {
                let fan_in = self.layer_sizes[l];
                let input = &pass.post[l];
                for (j, dj) in delta.iter().enumerate() {
                    gb[l][j] += scale * dj;
                    let row = &mut gw[l][j * fan_in..(j + 1) * fan_in];
                    for (g, xi) in row.iter_mut().zip(input) {
                        *g += scale * dj * xi;
                    }
                }
                if l > 0 {
                    let w = &self.weights[l];
                    delta = (0..fan_in)
                        .map(|i| {
                            let back: f64 = delta
                                .iter()
                                .enumerate()
                                .map(|(j, dj)| w[j * fan_in + i] * dj)
                                .sum();
                            back * self.activations[l - 1].derivative(pass.pre[l - 1][i])
                        })
                        .collect();
                }
            }
        }
        Ok(Gradients {
            weights: gw,
            biases: gb,
            loss: loss * scale,
        })
    }

    /// One full-batch gradient-descent step; returns the loss measured before
    /// the update.
    pub fn train_step(&mut self, batch: &Batch, learning_rate: f64) -> Result<f64> {
        if !(learning_rate >= 0.0) || !learning_rate.is_finite() {
            return Err(NeuralError::BadLearningRate(learning_rate));
        }
        let g = self.gradients(batch)?;
        for (w, gw) in self.weights.iter_mut().zip(&g.weights) {
            for (a, b) in w.iter_mut().zip(gw) {
                *a -= learning_rate * b;
            }
        }
        for (bias, gb) in self.biases.iter_mut().zip(&g.biases) {
            for (a, b) in bias.iter_mut().zip(gb) {
                *a -= learning_rate * b;
            }
        }
        Ok(g.loss)
    }

    /// Largest relative disagreement between backprop and central finite
    /// differences over every weight and bias, for one sample.
    ///
    /// The loss change is formed from the output change directly rather than
    /// by subtracting two full losses.
    ///
    /// The relative error of a pair is `|a - n| / max(|a|, |n|)`, or 0 when
    /// both vanish. Evaluation points must stay clear of ReLU kinks.
    pub fn gradient_check(&self, x: &[f64], target: &[f64], epsilon: f64) -> Result<f64> {
        let batch = [(x.to_vec(), target.to_vec())];
        let analytic = self.gradients(&batch)?;
        let mut probe = self.clone();
        let mut worst = 0.0f64;
        for l in 0..self.weights.len() {
            for i in 0..self.weights[l].len() {
                let base = self.weights[l][i];
                probe.weights[l][i] = base + epsilon;
                let up = probe.predict(x)?;
                probe.weights[l][i] = base - epsilon;
                let down = probe.predict(x)?;
                probe.weights[l][i] = base;
                let numeric = loss_difference(&up, &down, target) / (2.0 * epsilon);
                worst = worst.max(relative_error(analytic.weights[l][i], numeric));
            }
            for i in 0..self.biases[l].len() {
                let base = self.biases[l][i];
                probe.biases[l][i] = base + epsilon;
                let up = probe.predict(x)?;
                probe.biases[l][i] = base - epsilon;
                let down = probe.predict(x)?;
                probe.biases[l][i] = base;
                let numeric = loss_difference(&up, &down, target) / (2.0 * epsilon);
                worst = worst.max(relative_error(analytic.biases[l][i], numeric));
            }
        }
        Ok(worst)
    }

    /// Dead-unit flags and per-layer gradient magnitudes over `inputs`.
    ///
    /// A unit is dead when it uses ReLU and its pre-activation is negative
    /// for every input. Gradients come from one backprop pass against an
    /// all-zero target.
    pub fn diagnose(&self, inputs: &[Vec<f64>]) -> Result<GradientReport> {
        if inputs.is_empty() {
            return Err(NeuralError::EmptyDataset);
        }
        let mut dead: Vec<Vec<bool>> = self.layer_sizes[1..]
            .iter()
            .zip(&self.activations)
            .map(|(&n, act)| vec![act.has_flat_negative_half(); n])
            .collect();
        for x in inputs {
            let pass = self.forward(x)?;
            for (flags, z) in dead.iter_mut().zip(&pass.pre) {
                for (d, &v) in flags.iter_mut().zip(z) {
                    if v >= 0.0 {
                        *d = false;
                    }
                }
            }
        }
        let zero = vec![0.0; self.output_size()];
        let batch: Vec<(Vec<f64>, Vec<f64>)> =
            inputs.iter().map(|x| (x.clone(), zero.clone())).collect();
        let g = self.gradients(&batch)?;
        let mean_abs_grad = g
            .weights
            .iter()
            .map(|w| w.iter().map(|v| v.abs()).sum::<f64>() / w.len() as f64)
            .collect();
        Ok(GradientReport {
            mean_abs_grad,
            dead,
        })
    }

    pub fn to_json(&self) -> String {
        let doc = MlpDocument {
            format: DOCUMENT_FORMAT.into(),
            version: DOCUMENT_VERSION,
            layer_sizes: self.layer_sizes.clone(),
            weights: self.weights.clone(),
            biases: self.biases.clone(),
            activations: self.activations.clone(),
            seed: self.seed,
        };
        serde_json::to_string_pretty(&doc).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: MlpDocument =
            serde_json::from_str(text).map_err(|e| NeuralError::BadDocument(e.to_string()))?;
        if doc.format != DOCUMENT_FORMAT || doc.version != DOCUMENT_VERSION {
            return Err(NeuralError::BadDocument(format!(
                "expected {DOCUMENT_FORMAT} v{DOCUMENT_VERSION}, got {} v{}",
                doc.format, doc.version
            )));
        }
        let mut net = Self::from_parts(&doc.layer_sizes, doc.weights, doc.biases, doc.activations)?;
        net.seed = doc.seed;
        Ok(net)
    }
}

fn sample_loss(y: &[f64], t: &[f64]) -> f64 {
    y.iter().zip(t).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / y.len() as f64
}

/// `L(up) - L(down)` for the per-sample mean squared error, expanded as
/// `Σ (u - d)(u + d - 2t) / m` so that tiny perturbations are not lost to
/// cancellation against the full loss.
fn loss_difference(up: &[f64], down: &[f64], target: &[f64]) -> f64 {
    let sum: f64 = up
        .iter()
        .zip(down)
        .zip(target)
        .map(|((u, d), t)| (u - d) * (u + d - 2.0 * t))
        .sum();
    sum / target.len() as f64
}

fn relative_error(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
