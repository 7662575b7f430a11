//! Binary Hopfield associative memory with Hebbian storage and synchronous
//! sign updates.
//!
//! Weights are `W = (1/n) · Σ p·pᵀ` with a zero diagonal. Internally the
//! integer sums `Σ pᵢ·pⱼ` are kept, so local fields are exact and a field of
//! exactly zero is detected without rounding noise; the positive `1/n`
//! factor never changes a sign.

use serde::{Deserialize, Serialize};

use super::{NeuralError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopfieldNet {
    n: usize,
    couplings: Vec<i64>,
    patterns: Vec<Vec<i8>>,
}

/// Fixed point reached by [`HopfieldNet::recall`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recall {
    pub state: Vec<i8>,
    /// Synchronous sweeps performed, including the one that confirmed the
    /// fixed point. A stored pattern presented as input reports 1.
    pub iterations: usize,
}

const DOCUMENT_FORMAT: &str = "flybot-hopfield";
const DOCUMENT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct HopfieldDocument {
    format: String,
    version: u32,
    n: usize,
    weights: Vec<f64>,
    patterns: Vec<Vec<i8>>,
}

fn check_bipolar(p: &[i8]) -> Result<()> {
    match p.iter().position(|&v| v != 1 && v != -1) {
        Some(index) => Err(NeuralError::NonBipolarPattern {
            index,
            value: p[index],
        }),
        None => Ok(()),
    }
}

impl HopfieldNet {
    pub fn train(patterns: &[Vec<i8>], n: usize) -> Result<Self> {
        let mut couplings = vec![0i64; n * n];
        for p in patterns {
            if p.len() != n {
                return Err(NeuralError::LengthMismatch {
                    expected: n,
                    got: p.len(),
                });
            }
            check_bipolar(p)?;
            for i in 0..n {
                for j in i + 1..n {
                    let c = (p[i] * p[j]) as i64;
                    couplings[i * n + j] += c;
                    couplings[j * n + i] += c;
                }
            }
        }
        Ok(Self {
            n,
            couplings,
            patterns: patterns.to_vec(),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn patterns(&self) -> &[Vec<i8>] {
        &self.patterns
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.couplings[i * self.n + j] as f64 / self.n as f64
    }

    /// Row-major `n × n` weight matrix.
    pub fn weights(&self) -> Vec<f64> {
        let n = self.n as f64;
        self.couplings.iter().map(|&c| c as f64 / n).collect()
    }

    fn check_state(&self, state: &[i8]) -> Result<()> {
        if state.len() != self.n {
            return Err(NeuralError::LengthMismatch {
                expected: self.n,
                got: state.len(),
            });
        }
        match state.iter().position(|v| !(-1..=1).contains(v)) {
            Some(index) => Err(NeuralError::NonTernaryState {
                index,
                value: state[index],
            }),
            None => Ok(()),
        }
    }

    /// Exact local fields scaled by `n`.
    fn scaled_fields(&self, state: &[i8]) -> Vec<i64> {
        (0..self.n)
            .map(|i| {
                self.couplings[i * self.n..(i + 1) * self.n]
                    .iter()
                    .zip(state)
                    .map(|(&c, &s)| c * s as i64)
                    .sum()
            })
            .collect()
    }

    /// Local fields `W·s`.
    pub fn fields(&self, state: &[i8]) -> Result<Vec<f64>> {
        self.check_state(state)?;
        let n = self.n as f64;
        Ok(self
            .scaled_fields(state)
            .into_iter()
            .map(|h| h as f64 / n)
            .collect())
    }

    /// One synchronous update `s ← sign(W·s)`; a zero field keeps the
    /// neuron's previous value.
    pub fn sweep(&self, state: &[i8]) -> Result<Vec<i8>> {
        self.check_state(state)?;
        Ok(self
            .scaled_fields(state)
            .into_iter()
            .zip(state)
            .map(|(h, &s)| match h.signum() {
                0 => s,
                sign => sign as i8,
            })
            .collect())
    }

    /// Iterates synchronous sweeps until the state stops changing.
    ///
    /// Fails with [`NeuralError::NonConvergent`] when `max_iter` sweeps pass
    /// without a fixed point, when the trajectory enters a cycle, or when the
    /// fixed point still holds an undecided (0) neuron.
    pub fn recall(&self, input: &[i8], max_iter: usize) -> Result<Recall> {
        if max_iter == 0 {
            return Err(NeuralError::ZeroIterations);
        }
        self.check_state(input)?;
        let mut state = input.to_vec();
        let mut seen = vec![state.clone()];
        for iteration in 1..=max_iter {
            let next = self.sweep(&state)?;
            if next == state {
                if state.contains(&0) {
                    return Err(NeuralError::NonConvergent {
                        iterations: iteration,
                        state,
                    });
                }
                return Ok(Recall {
                    state,
                    iterations: iteration,
                });
            }
            if seen.contains(&next) {
                return Err(NeuralError::NonConvergent {
                    iterations: iteration,
                    state: next,
                });
            }
            seen.push(next.clone());
            state = next;
        }
        Err(NeuralError::NonConvergent {
            iterations: max_iter,
            state,
        })
    }

    pub fn is_fixed_point(&self, state: &[i8]) -> Result<bool> {
        Ok(self.sweep(state)? == state)
    }

    /// `E = -½ · sᵀ W s` for a bipolar state.
    pub fn energy(&self, state: &[i8]) -> Result<f64> {
        if state.len() != self.n {
            return Err(NeuralError::LengthMismatch {
                expected: self.n,
                got: state.len(),
            });
        }
        check_bipolar(state)?;
        let quad: i64 = self
            .scaled_fields(state)
            .iter()
            .zip(state)
            .map(|(h, &s)| h * s as i64)
            .sum();
        Ok(-0.5 * quad as f64 / self.n as f64)
    }

    pub fn to_json(&self) -> String {
        let doc = HopfieldDocument {
            format: DOCUMENT_FORMAT.into(),
            version: DOCUMENT_VERSION,
            n: self.n,
            weights: self.weights(),
            patterns: self.patterns.clone(),
        };
        serde_json::to_string_pretty(&doc).expect("plain data serializes")
    }

    /// Rebuilds the network from its stored patterns and checks that the
    /// document's weights agree with them.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: HopfieldDocument =
            serde_json::from_str(text).map_err(|e| NeuralError::BadDocument(e.to_string()))?;
        if doc.format != DOCUMENT_FORMAT || doc.version != DOCUMENT_VERSION {
            return Err(NeuralError::BadDocument(format!(
                "expected {DOCUMENT_FORMAT} v{DOCUMENT_VERSION}, got {} v{}",
                doc.format, doc.version
            )));
        }
        let net = Self::train(&doc.patterns, doc.n)?;
        let expected = net.weights();
        if doc.weights.len() != expected.len()
            || doc
                .weights
                .iter()
                .zip(&expected)
                .any(|(a, b)| (a - b).abs() > 1e-12)
        {
            return Err(NeuralError::BadDocument(
                "weights disagree with the stored patterns".into(),
            ));
        }
        Ok(net)
    }
}
