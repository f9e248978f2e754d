//! Dense feed-forward network IR with deterministic forward evaluation.
//!
//! A network is an ordered list of affine layers, each followed by an
//! elementwise activation; the final layer is always identity-activated.
//! Values are immutable after construction, so evaluation is safe to run
//! concurrently.

use crate::act::ActivationSpec;
use crate::error::NetError;
use alloc::vec;
use alloc::vec::Vec;

/// Per-layer activation. The literal `Relu` and `Identity` tags coexist with
/// registry-backed specs so a half-rewritten network can still contain plain
/// ReLU layers.
#[derive(Debug, Clone, PartialEq)]
pub enum ActivationTag {
    Relu,
    Identity,
    Spec(ActivationSpec),
}

impl ActivationTag {
    #[inline]
    pub fn apply(&self, x: f64) -> f64 {
        match self {
            ActivationTag::Relu => {
                if x > 0.0 {
                    x
                } else {
                    0.0
                }
            }
            ActivationTag::Identity => x,
            ActivationTag::Spec(s) => s.eval(x),
        }
    }
}

/// One affine layer: `y = W x + b`, weights row-major with `rows` = fan-out.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<f64>,
    pub activation: ActivationTag,
}

impl Layer {
    pub fn new(weights: Vec<Vec<f64>>, bias: Vec<f64>, activation: ActivationTag) -> Self {
        Layer {
            weights,
            bias,
            activation,
        }
    }

    pub fn rows(&self) -> usize {
        self.weights.len()
    }

    pub fn cols(&self) -> usize {
        self.weights.first().map_or(0, |r| r.len())
    }
}

/// A feed-forward network over `input_dim` inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    pub input_dim: usize,
    pub layers: Vec<Layer>,
}

/// The symmetric evaluation domain `[-half_width, half_width]^dim`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputBox {
    pub half_width: f64,
    pub dim: usize,
}

impl InputBox {
    pub fn new(half_width: f64, dim: usize) -> Result<Self, NetError> {
        if half_width <= 0.0 || !half_width.is_finite() || dim == 0 {
            return Err(NetError::InvalidBox);
        }
        Ok(InputBox { half_width, dim })
    }
}

/// Shape summary produced by [`validate_network`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeReport {
    /// Maximum hidden-layer fan-out; 0 for a purely affine network.
    pub width: usize,
    /// Number of hidden (non-final) layers.
    pub depth: usize,
    /// (fan-in, fan-out) per layer.
    pub layer_dims: Vec<(usize, usize)>,
}

impl Network {
    pub fn output_dim(&self) -> usize {
        self.layers.last().map_or(self.input_dim, |l| l.rows())
    }

    pub fn width(&self) -> usize {
        let n = self.layers.len();
        self.layers[..n.saturating_sub(1)]
            .iter()
            .map(Layer::rows)
            .max()
            .unwrap_or(0)
    }

    pub fn depth(&self) -> usize {
        self.layers.len().saturating_sub(1)
    }
}

/// Check dimension chaining, parameter finiteness, and the identity-activated
/// final layer; returns the width/depth summary.
pub fn validate_network(net: &Network) -> Result<ShapeReport, NetError> {
    let mut fan_in = net.input_dim;
    let mut dims = Vec::with_capacity(net.layers.len());
    for (li, layer) in net.layers.iter().enumerate() {
        if layer.cols() != fan_in || layer.rows() == 0 {
            return Err(NetError::DimensionMismatch {
                layer: li,
                expected: fan_in,
                found: layer.cols(),
            });
        }
        if layer.bias.len() != layer.rows() {
            return Err(NetError::DimensionMismatch {
                layer: li,
                expected: layer.rows(),
                found: layer.bias.len(),
            });
        }
        for (r, row) in layer.weights.iter().enumerate() {
            if row.len() != layer.cols() {
                return Err(NetError::DimensionMismatch {
                    layer: li,
                    expected: layer.cols(),
                    found: row.len(),
                });
            }
            for (c, w) in row.iter().enumerate() {
                if !w.is_finite() {
                    return Err(NetError::NonFiniteParameter {
                        layer: li,
                        row: r,
                        col: c,
                        bias: false,
                    });
                }
            }
        }
        for (r, b) in layer.bias.iter().enumerate() {
            if !b.is_finite() {
                return Err(NetError::NonFiniteParameter {
                    layer: li,
                    row: r,
                    col: 0,
                    bias: true,
                });
            }
        }
        dims.push((layer.cols(), layer.rows()));
        fan_in = layer.rows();
    }
    if let Some(last) = net.layers.last() {
        if last.activation != ActivationTag::Identity {
            return Err(NetError::InvalidFinalActivation);
        }
    }
    Ok(ShapeReport {
        width: net.width(),
        depth: net.depth(),
        layer_dims: dims,
    })
}

/// Exact forward pass: alternate affine map and elementwise activation; the
/// final layer is affine only. Deterministic: the accumulation order is fixed.
pub fn eval_network(net: &Network, x: &[f64]) -> Result<Vec<f64>, NetError> {
    if x.len() != net.input_dim {
        return Err(NetError::InputLength {
            expected: net.input_dim,
            found: x.len(),
        });
    }
    let mut cur = x.to_vec();
    for layer in &net.layers {
        cur = eval_layer(layer, &cur);
    }
    Ok(cur)
}

#[inline]
pub(crate) fn eval_layer(layer: &Layer, input: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; layer.rows()];
    for (o, (row, b)) in out
        .iter_mut()
        .zip(layer.weights.iter().zip(layer.bias.iter()))
    {
        let mut acc = 0.0;
        for (w, v) in row.iter().zip(input.iter()) {
            acc += w * v;
        }
        *o = layer.activation.apply(acc + b);
    }
    out
}

/// Forward pass that also reports, per hidden layer, the largest |pre-activation|.
pub(crate) fn eval_tracking_preacts(net: &Network, x: &[f64], max_abs: &mut [f64]) -> Vec<f64> {
    let mut cur = x.to_vec();
    let hidden = net.depth();
    for (li, layer) in net.layers.iter().enumerate() {
        let mut out = vec![0.0; layer.rows()];
        for (o, (row, b)) in out
            .iter_mut()
            .zip(layer.weights.iter().zip(layer.bias.iter()))
        {
            let mut acc = 0.0;
            for (w, v) in row.iter().zip(cur.iter()) {
                acc += w * v;
            }
            let pre = acc + b;
            if li < hidden {
                let a = pre.abs();
                if a > max_abs[li] {
                    max_abs[li] = a;
                }
            }
            *o = layer.activation.apply(pre);
        }
        cur = out;
    }
    cur
}

/// Convenience constructor for the 1-input scalar nets used by gadgets.
pub(crate) fn scalar_chain(input_dim: usize, layers: Vec<Layer>) -> Network {
    Network { input_dim, layers }
}
