use serde::{Deserialize, Serialize};

use super::{NeuralError, Result};

pub const DEFAULT_LEAKY_ALPHA: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Activation {
    Sigmoid,
    Relu,
    LeakyRelu { alpha: f64 },
}

impl Activation {
    pub fn leaky_relu(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha < 1.0 {
            Ok(Activation::LeakyRelu { alpha })
        } else {
            Err(NeuralError::BadAlpha(alpha))
        }
    }

    /// Leaky ReLU with slope 0.01.
    pub fn leaky() -> Self {
        Activation::LeakyRelu {
            alpha: DEFAULT_LEAKY_ALPHA,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Activation::LeakyRelu { alpha } => Self::leaky_relu(alpha).map(|_| ()),
            _ => Ok(()),
        }
    }

    pub fn apply(&self, x: f64) -> f64 {
        match *self {
            Activation::Sigmoid => 1.0 / (1.0 + (-x).exp()),
            Activation::Relu => x.max(0.0),
            Activation::LeakyRelu { alpha } => {
                if x >= 0.0 {
                    x
                } else {
                    alpha * x
                }
            }
        }
    }

    /// Derivative with respect to the pre-activation. ReLU's derivative at
    /// exactly 0 is taken as 0.
    pub fn derivative(&self, x: f64) -> f64 {
        match *self {
            Activation::Sigmoid => {
                let s = self.apply(x);
                s * (1.0 - s)
            }
            Activation::Relu => {
                if x > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::LeakyRelu { alpha } => {
                if x >= 0.0 {
                    1.0
                } else {
                    alpha
                }
            }
        }
    }

    /// Whether the unit can get stuck at zero output for negative inputs.
    pub fn has_flat_negative_half(&self) -> bool {
        matches!(self, Activation::Relu)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Activation::Sigmoid => "sigmoid",
            Activation::Relu => "relu",
            Activation::LeakyRelu { .. } => "leaky_relu",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert_eq!(Activation::Sigmoid.apply(0.0), 0.5);
        assert_eq!(Activation::Relu.apply(-3.0), 0.0);
        assert_eq!(Activation::Relu.derivative(-3.0), 0.0);
        assert_eq!(Activation::Relu.derivative(0.0), 0.0);
        assert_eq!(Activation::Relu.apply(2.5), 2.5);
        let leaky = Activation::leaky_relu(0.01).unwrap();
        assert!((leaky.apply(-3.0) + 0.03).abs() < 1e-15);
        assert_eq!(leaky.derivative(-3.0), 0.01);
        assert_eq!(leaky.derivative(4.0), 1.0);
    }

    #[test]
    fn alpha_bounds() {
        assert!(Activation::leaky_relu(0.0).is_err());
        assert!(Activation::leaky_relu(1.0).is_err());
        assert!(Activation::leaky_relu(0.2).is_ok());
    }

    #[test]
    fn sigmoid_derivative_matches_slope() {
        let h = 1e-6;
        for x in [-4.0, -0.3, 0.0, 1.7] {
            let fd =
                (Activation::Sigmoid.apply(x + h) - Activation::Sigmoid.apply(x - h)) / (2.0 * h);
            assert!((fd - Activation::Sigmoid.derivative(x)).abs() < 1e-9);
        }
    }

    #[test]
    fn serde_shape() {
        let json = serde_json::to_string(&Activation::leaky()).unwrap();
        assert_eq!(json, r#"{"kind":"leaky_relu","alpha":0.01}"#);
        let back: Activation = serde_json::from_str(r#"{"kind":"sigmoid"}"#).unwrap();
        assert_eq!(back, Activation::Sigmoid);
    }
}
