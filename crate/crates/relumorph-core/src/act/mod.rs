//! Activation registry: closed-form evaluation, analytic derivatives, and
//! class metadata for the built-in activations plus user-defined entries.
//!
//! Built-in evaluation is overflow-safe on the whole of `[-1e6, 1e6]`; the
//! formulas are rewritten where the naive expression would overflow (softplus,
//! sigmoid-family tails).

mod classify;

pub(crate) use classify::gap_tail_limits;
pub use classify::{
    classify, s_shape_normalize, Asymptotes, Classification, KinkWitness, Membership,
    NormalizedDecomposition, PointValue, SDecomp,
};

use crate::error::ActError;
use crate::fmath;
use crate::util::eps_root;
use alloc::borrow::ToOwned;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

/// Scalar function shared by classification witnesses and custom activations.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Smoothness metadata used by derivative evaluation and gadget construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmoothnessHint {
    /// Globally `C^k` but not `C^{k+1}`; the kink sits at a single point.
    PiecewiseSmooth(u32),
    Smooth,
}

/// A user-defined activation. Derivatives fall back to central differences
/// when no closed form is supplied.
#[derive(Clone)]
pub struct CustomActivation {
    pub name: String,
    pub f: ScalarFn,
    pub d1: Option<ScalarFn>,
    pub d2: Option<ScalarFn>,
    pub smoothness: SmoothnessHint,
}

impl fmt::Debug for CustomActivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomActivation")
            .field("name", &self.name)
            .field("smoothness", &self.smoothness)
            .finish()
    }
}

/// Built-in activation kinds with their resolved parameters.
#[derive(Debug, Clone)]
pub enum ActKind {
    Relu,
    LeakyRelu { alpha: f64 },
    Relu2,
    Elu { alpha: f64 },
    Celu { alpha: f64 },
    Selu { lambda: f64, alpha: f64 },
    Softplus,
    Gelu { mu: f64, sigma: f64 },
    Silu,
    Swish { beta: f64 },
    Mish,
    Sigmoid,
    Tanh,
    Arctan,
    Softsign,
    Dsilu,
    Srs { alpha: f64, beta: f64 },
    XDsilu,
    XSoftsignShift,
    XArctanShift,
    Custom(CustomActivation),
}

/// A named activation with parameters, closed-form evaluation, derivative
/// evaluation, and smoothness metadata.
#[derive(Debug, Clone)]
pub struct ActivationSpec {
    kind: ActKind,
}

/// How a derivative value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivMethod {
    Analytic,
    CentralDiff,
}

/// A derivative value together with the method that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivValue {
    pub value: f64,
    pub method: DerivMethod,
}

/// Names of the registered built-in activations, in registry order.
pub fn builtin_names() -> [&'static str; 20] {
    [
        "relu",
        "leaky_relu",
        "relu2",
        "elu",
        "celu",
        "selu",
        "softplus",
        "gelu",
        "silu",
        "swish",
        "mish",
        "sigmoid",
        "tanh",
        "arctan",
        "softsign",
        "dsilu",
        "srs",
        "x_dsilu",
        "x_softsign_shift",
        "x_arctan_shift",
    ]
}

fn param(params: &[(String, f64)], key: &str, default: f64) -> f64 {
    params
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| *v)
        .unwrap_or(default)
}

fn check_keys(name: &str, params: &[(String, f64)], allowed: &[&str]) -> Result<(), ActError> {
    for (k, _) in params {
        if !allowed.contains(&k.as_str()) {
            return Err(ActError::UnknownParam {
                activation: name.to_owned(),
                param: k.clone(),
            });
        }
    }
    Ok(())
}

fn invalid(name: &str, p: &str, v: f64, reason: &'static str) -> ActError {
    ActError::InvalidParam {
        activation: name.to_owned(),
        param: p.to_owned(),
        value: v,
        reason,
    }
}

/// Build a registered activation from its name and a parameter map.
///
/// Parameter domains are enforced here; omitted parameters take the
/// conventional defaults (`leaky_relu` alpha=0.01, `elu`/`celu` alpha=1,
/// `selu` the self-normalizing constants, `gelu` mu=0 sigma=1, `swish`
/// beta=1, `srs` alpha=2 beta=3).
pub fn builtin(name: &str, params: &[(String, f64)]) -> Result<ActivationSpec, ActError> {
    for (k, v) in params {
        if !v.is_finite() {
            return Err(invalid(name, k, *v, "must be finite"));
        }
    }
    let kind = match name {
        "relu" => {
            check_keys(name, params, &[])?;
            ActKind::Relu
        }
        "leaky_relu" => {
            check_keys(name, params, &["alpha"])?;
            let alpha = param(params, "alpha", 0.01);
            if alpha == 1.0 {
                // alpha = 1 collapses the kink: the function degenerates to
                // the identity map, which has no admissible class.
                return Err(invalid(
                    name,
                    "alpha",
                    alpha,
                    "alpha = 1 degenerates to identity",
                ));
            }
            ActKind::LeakyRelu { alpha }
        }
        "relu2" => {
            check_keys(name, params, &[])?;
            ActKind::Relu2
        }
        "elu" => {
            check_keys(name, params, &["alpha"])?;
            ActKind::Elu {
                alpha: param(params, "alpha", 1.0),
            }
        }
        "celu" => {
            check_keys(name, params, &["alpha"])?;
            let alpha = param(params, "alpha", 1.0);
            if alpha <= 0.0 {
                return Err(invalid(name, "alpha", alpha, "alpha must be > 0"));
            }
            ActKind::Celu { alpha }
        }
        "selu" => {
            check_keys(name, params, &["lambda", "alpha"])?;
            let lambda = param(params, "lambda", 1.050_700_987_355_480_5);
            let alpha = param(params, "alpha", 1.673_263_242_354_377_2);
            if lambda <= 0.0 {
                return Err(invalid(name, "lambda", lambda, "lambda must be > 0"));
            }
            ActKind::Selu { lambda, alpha }
        }
        "softplus" => {
            check_keys(name, params, &[])?;
            ActKind::Softplus
        }
        "gelu" => {
            check_keys(name, params, &["mu", "sigma"])?;
            let mu = param(params, "mu", 0.0);
            let sigma = param(params, "sigma", 1.0);
            if sigma <= 0.0 {
                return Err(invalid(name, "sigma", sigma, "sigma must be > 0"));
            }
            ActKind::Gelu { mu, sigma }
        }
        "silu" => {
            check_keys(name, params, &[])?;
            ActKind::Silu
        }
        "swish" => {
            check_keys(name, params, &["beta"])?;
            let beta = param(params, "beta", 1.0);
            if beta <= 0.0 {
                return Err(invalid(name, "beta", beta, "beta must be > 0"));
            }
            ActKind::Swish { beta }
        }
        "mish" => {
            check_keys(name, params, &[])?;
            ActKind::Mish
        }
        "sigmoid" => {
            check_keys(name, params, &[])?;
            ActKind::Sigmoid
        }
        "tanh" => {
            check_keys(name, params, &[])?;
            ActKind::Tanh
        }
        "arctan" => {
            check_keys(name, params, &[])?;
            ActKind::Arctan
        }
        "softsign" => {
            check_keys(name, params, &[])?;
            ActKind::Softsign
        }
        "dsilu" => {
            check_keys(name, params, &[])?;
            ActKind::Dsilu
        }
        "srs" => {
            check_keys(name, params, &["alpha", "beta"])?;
            let alpha = param(params, "alpha", 2.0);
            let beta = param(params, "beta", 3.0);
            if alpha <= 0.0 {
                return Err(invalid(name, "alpha", alpha, "alpha must be > 0"));
            }
            if beta <= 0.0 {
                return Err(invalid(name, "beta", beta, "beta must be > 0"));
            }
            // The denominator x/alpha + e^{-x/beta} vanishes for some x < 0
            // whenever beta >= alpha*e, which makes the function unbounded.
            if beta >= alpha * core::f64::consts::E {
                return Err(invalid(
                    name,
                    "beta",
                    beta,
                    "requires beta < alpha * e (pole otherwise)",
                ));
            }
            ActKind::Srs { alpha, beta }
        }
        "x_dsilu" => {
            check_keys(name, params, &[])?;
            ActKind::XDsilu
        }
        "x_softsign_shift" => {
            check_keys(name, params, &[])?;
            ActKind::XSoftsignShift
        }
        "x_arctan_shift" => {
            check_keys(name, params, &[])?;
            ActKind::XArctanShift
        }
        _ => {
            return Err(ActError::UnknownActivation {
                name: name.to_owned(),
            })
        }
    };
    Ok(ActivationSpec { kind })
}

fn dsilu_raw(x: f64) -> f64 {
    let s = fmath::sigmoid(x);
    s * (1.0 + x * (1.0 - s))
}

impl ActivationSpec {
    pub fn custom(custom: CustomActivation) -> Self {
        ActivationSpec {
            kind: ActKind::Custom(custom),
        }
    }

    pub fn kind(&self) -> &ActKind {
        &self.kind
    }

    pub fn name(&self) -> &str {
        match &self.kind {
            ActKind::Relu => "relu",
            ActKind::LeakyRelu { .. } => "leaky_relu",
            ActKind::Relu2 => "relu2",
            ActKind::Elu { .. } => "elu",
            ActKind::Celu { .. } => "celu",
            ActKind::Selu { .. } => "selu",
            ActKind::Softplus => "softplus",
            ActKind::Gelu { .. } => "gelu",
            ActKind::Silu => "silu",
            ActKind::Swish { .. } => "swish",
            ActKind::Mish => "mish",
            ActKind::Sigmoid => "sigmoid",
            ActKind::Tanh => "tanh",
            ActKind::Arctan => "arctan",
            ActKind::Softsign => "softsign",
            ActKind::Dsilu => "dsilu",
            ActKind::Srs { .. } => "srs",
            ActKind::XDsilu => "x_dsilu",
            ActKind::XSoftsignShift => "x_softsign_shift",
            ActKind::XArctanShift => "x_arctan_shift",
            ActKind::Custom(c) => &c.name,
        }
    }

    /// Canonical parameter list, in the order the registry documents them.
    pub fn params(&self) -> Vec<(String, f64)> {
        let mut out = Vec::new();
        match &self.kind {
            ActKind::LeakyRelu { alpha } | ActKind::Elu { alpha } | ActKind::Celu { alpha } => {
                out.push(("alpha".to_owned(), *alpha));
            }
            ActKind::Selu { lambda, alpha } => {
                out.push(("lambda".to_owned(), *lambda));
                out.push(("alpha".to_owned(), *alpha));
            }
            ActKind::Gelu { mu, sigma } => {
                out.push(("mu".to_owned(), *mu));
                out.push(("sigma".to_owned(), *sigma));
            }
            ActKind::Swish { beta } => out.push(("beta".to_owned(), *beta)),
            ActKind::Srs { alpha, beta } => {
                out.push(("alpha".to_owned(), *alpha));
                out.push(("beta".to_owned(), *beta));
            }
            _ => {}
        }
        out
    }

    pub fn smoothness(&self) -> SmoothnessHint {
        use SmoothnessHint::*;
        match &self.kind {
            ActKind::Relu | ActKind::LeakyRelu { .. } => PiecewiseSmooth(0),
            ActKind::Relu2 => PiecewiseSmooth(1),
            ActKind::Elu { alpha } => {
                if *alpha == 1.0 {
                    PiecewiseSmooth(1)
                } else {
                    PiecewiseSmooth(0)
                }
            }
            ActKind::Celu { .. } => PiecewiseSmooth(1),
            ActKind::Selu { alpha, .. } => {
                if *alpha == 1.0 {
                    PiecewiseSmooth(1)
                } else {
                    PiecewiseSmooth(0)
                }
            }
            ActKind::Softsign => PiecewiseSmooth(1),
            ActKind::XSoftsignShift => PiecewiseSmooth(2),
            ActKind::Custom(c) => c.smoothness,
            _ => Smooth,
        }
    }

    /// Location of the single kink for piecewise-smooth built-ins.
    pub(crate) fn kink_location(&self) -> Option<f64> {
        match self.smoothness() {
            SmoothnessHint::PiecewiseSmooth(_) => match &self.kind {
                ActKind::Custom(_) => None,
                _ => Some(0.0),
            },
            SmoothnessHint::Smooth => None,
        }
    }

    /// Closed-form evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        match &self.kind {
            ActKind::Relu => relu(x),
            ActKind::LeakyRelu { alpha } => {
                if x >= 0.0 {
                    x
                } else {
                    alpha * x
                }
            }
            ActKind::Relu2 => {
                let r = relu(x);
                r * r
            }
            ActKind::Elu { alpha } => {
                if x >= 0.0 {
                    x
                } else {
                    alpha * fmath::expm1(x)
                }
            }
            ActKind::Celu { alpha } => {
                if x >= 0.0 {
                    x
                } else {
                    alpha * fmath::expm1(x / alpha)
                }
            }
            ActKind::Selu { lambda, alpha } => {
                if x >= 0.0 {
                    lambda * x
                } else {
                    lambda * alpha * fmath::expm1(x)
                }
            }
            ActKind::Softplus => fmath::softplus(x),
            ActKind::Gelu { mu, sigma } => x * fmath::norm_cdf((x - mu) / sigma),
            ActKind::Silu => x * fmath::sigmoid(x),
            ActKind::Swish { beta } => x * fmath::sigmoid(beta * x),
            ActKind::Mish => x * fmath::tanh(fmath::softplus(x)),
            ActKind::Sigmoid => fmath::sigmoid(x),
            ActKind::Tanh => fmath::tanh(x),
            ActKind::Arctan => fmath::atan(x),
            ActKind::Softsign => x / (1.0 + fmath::abs(x)),
            ActKind::Dsilu => dsilu_raw(x),
            ActKind::Srs { alpha, beta } => {
                let d = x / alpha + fmath::exp(-x / beta);
                if d.is_infinite() {
                    // Deep negative tail: x / e^{-x/beta} -> -0.
                    0.0
                } else {
                    x / d
                }
            }
            ActKind::XDsilu => x * dsilu_raw(x),
            ActKind::XSoftsignShift => x * (0.5 * (x / (1.0 + fmath::abs(x))) + 0.5),
            ActKind::XArctanShift => x * (fmath::atan(x) / core::f64::consts::PI + 0.5),
            ActKind::Custom(c) => (c.f)(x),
        }
    }

    /// First or second derivative.
    ///
    /// Uses the registered closed form when available, otherwise a central
    /// finite difference with step `eps^(1/3) * max(1, |x|)` (order 1) or
    /// `eps^(1/4) * max(1, |x|)` (order 2); the method is recorded in the
    /// result. Errors with [`ActError::AtKink`] when `x` is the registered
    /// kink and the order exceeds the smoothness there.
    pub fn derivative(&self, order: u32, x: f64) -> Result<DerivValue, ActError> {
        assert!(
            order == 1 || order == 2,
            "only orders 1 and 2 are supported"
        );
        if let (SmoothnessHint::PiecewiseSmooth(k), Some(x0)) =
            (self.smoothness(), self.kink_location())
        {
            if x == x0 && order > k {
                return Err(ActError::AtKink { x, order });
            }
        }
        if let Some(v) = self.analytic_derivative(order, x) {
            return Ok(DerivValue {
                value: v,
                method: DerivMethod::Analytic,
            });
        }
        let f = |t: f64| self.eval(t);
        let value = if order == 1 {
            let h = eps_root(3) * fmath::abs(x).max(1.0);
            (f(x + h) - f(x - h)) / (2.0 * h)
        } else {
            let h = eps_root(4) * fmath::abs(x).max(1.0);
            (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
        };
        Ok(DerivValue {
            value,
            method: DerivMethod::CentralDiff,
        })
    }

    fn analytic_derivative(&self, order: u32, x: f64) -> Option<f64> {
        let sig = fmath::sigmoid;
        Some(match (&self.kind, order) {
            (ActKind::Relu, 1) => {
                if x > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            (ActKind::Relu, 2) => 0.0,
            (ActKind::LeakyRelu { alpha }, 1) => {
                if x > 0.0 {
                    1.0
                } else {
                    *alpha
                }
            }
            (ActKind::LeakyRelu { .. }, 2) => 0.0,
            (ActKind::Relu2, 1) => 2.0 * relu(x),
            (ActKind::Relu2, 2) => {
                if x > 0.0 {
                    2.0
                } else {
                    0.0
                }
            }
            (ActKind::Elu { alpha }, 1) => {
                if x >= 0.0 {
                    1.0
                } else {
                    alpha * fmath::exp(x)
                }
            }
            (ActKind::Elu { alpha }, 2) => {
                if x >= 0.0 {
                    0.0
                } else {
                    alpha * fmath::exp(x)
                }
            }
            (ActKind::Celu { alpha }, 1) => {
                if x >= 0.0 {
                    1.0
                } else {
                    fmath::exp(x / alpha)
                }
            }
            (ActKind::Celu { alpha }, 2) => {
                if x >= 0.0 {
                    0.0
                } else {
                    fmath::exp(x / alpha) / alpha
                }
            }
            (ActKind::Selu { lambda, alpha }, 1) => {
                if x >= 0.0 {
                    *lambda
                } else {
                    lambda * alpha * fmath::exp(x)
                }
            }
            (ActKind::Selu { lambda, alpha }, 2) => {
                if x >= 0.0 {
                    0.0
                } else {
                    lambda * alpha * fmath::exp(x)
                }
            }
            (ActKind::Softplus, 1) => sig(x),
            (ActKind::Softplus, 2) => {
                let s = sig(x);
                s * (1.0 - s)
            }
            (ActKind::Gelu { mu, sigma }, 1) => {
                let z = (x - mu) / sigma;
                fmath::norm_cdf(z) + x * fmath::norm_pdf(z) / sigma
            }
            (ActKind::Gelu { mu, sigma }, 2) => {
                let z = (x - mu) / sigma;
                let pdf = fmath::norm_pdf(z);
                2.0 * pdf / sigma - x * z * pdf / (sigma * sigma)
            }
            (ActKind::Silu, 1) => {
                let s = sig(x);
                s + x * s * (1.0 - s)
            }
            (ActKind::Silu, 2) => {
                let s = sig(x);
                let sp = s * (1.0 - s);
                2.0 * sp + x * sp * (1.0 - 2.0 * s)
            }
            (ActKind::Swish { beta }, 1) => {
                let s = sig(beta * x);
                s + beta * x * s * (1.0 - s)
            }
            (ActKind::Swish { beta }, 2) => {
                let s = sig(beta * x);
                let sp = s * (1.0 - s);
                let spp = sp * (1.0 - 2.0 * s);
                2.0 * beta * sp + beta * beta * x * spp
            }
            (ActKind::Mish, 1) => {
                let t = fmath::tanh(fmath::softplus(x));
                let s = sig(x);
                t + x * (1.0 - t * t) * s
            }
            (ActKind::Mish, 2) => {
                let t = fmath::tanh(fmath::softplus(x));
                let s = sig(x);
                let u = 1.0 - t * t;
                2.0 * u * s + x * u * (s * (1.0 - s) - 2.0 * t * s * s)
            }
            (ActKind::Sigmoid, 1) => {
                let s = sig(x);
                s * (1.0 - s)
            }
            (ActKind::Sigmoid, 2) => {
                let s = sig(x);
                s * (1.0 - s) * (1.0 - 2.0 * s)
            }
            (ActKind::Tanh, 1) => {
                let t = fmath::tanh(x);
                1.0 - t * t
            }
            (ActKind::Tanh, 2) => {
                let t = fmath::tanh(x);
                -2.0 * t * (1.0 - t * t)
            }
            (ActKind::Arctan, 1) => 1.0 / (1.0 + x * x),
            (ActKind::Arctan, 2) => {
                let d = 1.0 + x * x;
                -2.0 * x / (d * d)
            }
            (ActKind::Softsign, 1) => {
                let d = 1.0 + fmath::abs(x);
                1.0 / (d * d)
            }
            (ActKind::Softsign, 2) => {
                let d = 1.0 + fmath::abs(x);
                let s = if x > 0.0 { 1.0 } else { -1.0 };
                -2.0 * s / (d * d * d)
            }
            (ActKind::Dsilu, 1) => silu_d2(x),
            (ActKind::Dsilu, 2) => silu_d3(x),
            (ActKind::Srs { alpha, beta }, 1) => {
                let e = fmath::exp(-x / beta);
                if e.is_infinite() {
                    0.0
                } else {
                    let d = x / alpha + e;
                    let dp = 1.0 / alpha - e / beta;
                    (d - x * dp) / (d * d)
                }
            }
            (ActKind::Srs { alpha, beta }, 2) => {
                let e = fmath::exp(-x / beta);
                if e.is_infinite() {
                    0.0
                } else {
                    let d = x / alpha + e;
                    let dp = 1.0 / alpha - e / beta;
                    let dpp = e / (beta * beta);
                    (-x * dpp * d - 2.0 * dp * (d - x * dp)) / (d * d * d)
                }
            }
            (ActKind::XDsilu, 1) => dsilu_raw(x) + x * silu_d2(x),
            (ActKind::XDsilu, 2) => 2.0 * silu_d2(x) + x * silu_d3(x),
            (ActKind::XSoftsignShift, 1) => {
                let d = 1.0 + fmath::abs(x);
                let g = x / d;
                0.5 * g + 0.5 + 0.5 * x / (d * d)
            }
            (ActKind::XSoftsignShift, 2) => {
                let d = 1.0 + fmath::abs(x);
                let s = if x > 0.0 { 1.0 } else { -1.0 };
                1.0 / (d * d) - s * x / (d * d * d)
            }
            (ActKind::XArctanShift, 1) => {
                const PI: f64 = core::f64::consts::PI;
                fmath::atan(x) / PI + 0.5 + x / (PI * (1.0 + x * x))
            }
            (ActKind::XArctanShift, 2) => {
                const PI: f64 = core::f64::consts::PI;
                let d = 1.0 + x * x;
                2.0 / (PI * d) - 2.0 * x * x / (PI * d * d)
            }
            (ActKind::Custom(c), 1) => (c.d1.as_ref()?)(x),
            (ActKind::Custom(c), 2) => (c.d2.as_ref()?)(x),
            _ => return None,
        })
    }
}

impl PartialEq for ActivationSpec {
    fn eq(&self, other: &Self) -> bool {
        self.name() == other.name()
            && self
                .params()
                .iter()
                .zip(other.params().iter())
                .all(|((ka, va), (kb, vb))| ka == kb && va.to_bits() == vb.to_bits())
            && self.params().len() == other.params().len()
    }
}

#[inline]
fn relu(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        0.0
    }
}

// silu'' and silu''' in terms of sigmoid derivatives; dsilu = silu'.
fn silu_d2(x: f64) -> f64 {
    let s = fmath::sigmoid(x);
    let sp = s * (1.0 - s);
    let spp = sp * (1.0 - 2.0 * s);
    2.0 * sp + x * spp
}

fn silu_d3(x: f64) -> f64 {
    let s = fmath::sigmoid(x);
    let sp = s * (1.0 - s);
    let spp = sp * (1.0 - 2.0 * s);
    let sppp = spp * (1.0 - 2.0 * s) - 2.0 * sp * sp;
    3.0 * spp + x * sppp
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(name: &str) -> ActivationSpec {
        builtin(name, &[]).unwrap()
    }

    #[test]
    fn softplus_at_zero_is_ln_two() {
        assert_eq!(spec("softplus").eval(0.0), core::f64::consts::LN_2);
    }

    #[test]
    fn gelu_and_mish_vanish_at_zero() {
        assert_eq!(spec("gelu").eval(0.0), 0.0);
        assert_eq!(spec("mish").eval(0.0), 0.0);
    }

    #[test]
    fn sigmoid_derivatives_at_known_points() {
        let s = spec("sigmoid");
        assert_eq!(s.derivative(1, 0.0).unwrap().value, 0.25);
        assert_eq!(s.derivative(2, 0.0).unwrap().value, 0.0);
        // Frozen from the closed form sigma(1)(1-sigma(1))(1-2 sigma(1)),
        // cross-checked against a high-precision finite difference.
        let d2 = s.derivative(2, 1.0).unwrap().value;
        assert!((d2 - (-0.090_857_747_672_948_4)).abs() < 1e-14);
    }

    #[test]
    fn eval_is_finite_across_the_contract_range() {
        for name in builtin_names() {
            let s = spec(name);
            for &x in &[-1e6, -710.0, -30.0, -1.0, 0.0, 1.0, 30.0, 710.0, 1e6] {
                let v = s.eval(x);
                assert!(v.is_finite(), "{name}({x}) = {v}");
            }
        }
    }

    #[test]
    fn parameter_domains_are_enforced() {
        assert!(builtin("gelu", &[("sigma".into(), -1.0)]).is_err());
        assert!(builtin("celu", &[("alpha".into(), 0.0)]).is_err());
        assert!(builtin("swish", &[("beta".into(), -2.0)]).is_err());
        assert!(builtin("srs", &[("alpha".into(), 1.0), ("beta".into(), 3.0)]).is_err());
        assert!(builtin("leaky_relu", &[("alpha".into(), 1.0)]).is_err());
        assert!(builtin("selu", &[("lambda".into(), -1.0)]).is_err());
        assert!(builtin("softplus", &[("alpha".into(), 1.0)]).is_err());
        assert!(builtin("nope", &[]).is_err());
    }

    #[test]
    fn kink_errors_only_past_the_smoothness_order() {
        let r = spec("relu");
        assert!(matches!(r.derivative(1, 0.0), Err(ActError::AtKink { .. })));
        assert!(r.derivative(1, 1e-9).is_ok());

        let r2 = spec("relu2");
        assert_eq!(r2.derivative(1, 0.0).unwrap().value, 0.0);
        assert!(matches!(
            r2.derivative(2, 0.0),
            Err(ActError::AtKink { .. })
        ));

        let elu1 = spec("elu");
        assert_eq!(elu1.derivative(1, 0.0).unwrap().value, 1.0);
        assert!(matches!(
            elu1.derivative(2, 0.0),
            Err(ActError::AtKink { .. })
        ));

        let elu2 = builtin("elu", &[("alpha".into(), 2.0)]).unwrap();
        assert!(matches!(
            elu2.derivative(1, 0.0),
            Err(ActError::AtKink { .. })
        ));
    }

    #[test]
    fn custom_spec_falls_back_to_central_difference() {
        let c = ActivationSpec::custom(CustomActivation {
            name: "cube".into(),
            f: Arc::new(|x| x * x * x),
            d1: None,
            d2: None,
            smoothness: SmoothnessHint::Smooth,
        });
        let d1 = c.derivative(1, 2.0).unwrap();
        assert_eq!(d1.method, DerivMethod::CentralDiff);
        assert!((d1.value - 12.0).abs() < 1e-6);
        let d2 = c.derivative(2, 2.0).unwrap();
        assert!((d2.value - 12.0).abs() < 1e-4);
    }
}
