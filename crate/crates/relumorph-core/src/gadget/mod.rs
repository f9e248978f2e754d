//! Scalar sub-networks ("gadgets") used by the transpiler: finite-difference
//! derivative approximations, identity linearization, two-input products, and
//! the class-specific ReLU emulators.

mod gap;
mod relu;

pub use gap::{estimate_gap_constants, GapConstants};
pub use relu::{relu_gadget, relu_gadget_forced, relu_gadget_with_scale, GadgetClass};

use crate::act::{ActivationSpec, Classification};
use crate::error::GadgetError;
use crate::fmath;
use crate::net::{eval_network, scalar_chain, ActivationTag, Layer, Network};
use crate::util::eps_root;
use alloc::vec;
use alloc::vec::Vec;

/// What a gadget approximates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetTarget {
    Relu,
    /// The k-th derivative of the source activation.
    Derivative(u32),
    Identity,
    Product,
}

/// A tiny scalar network (1 or 2 inputs, one output, one or two hidden
/// layers) approximating its target, together with the scale parameter used
/// and the sampled sup error achieved on `[-M, M]` (or `[-M, M]^2`).
#[derive(Debug, Clone)]
pub struct Gadget {
    pub net: Network,
    pub target: GadgetTarget,
    pub scale_param: f64,
    pub domain_half_width: f64,
    pub reported_error: f64,
}

impl Gadget {
    /// Hidden width of the gadget network.
    pub fn width(&self) -> usize {
        self.net.width()
    }

    /// Hidden depth of the gadget network.
    pub fn depth(&self) -> usize {
        self.net.depth()
    }

    /// Evaluate a 1-input gadget.
    pub fn eval(&self, x: f64) -> f64 {
        eval_network(&self.net, &[x]).expect("gadget nets are valid")[0]
    }

    /// Evaluate a 2-input gadget.
    pub fn eval2(&self, x: f64, y: f64) -> f64 {
        eval_network(&self.net, &[x, y]).expect("gadget nets are valid")[0]
    }
}

/// Exact alternating binomial sum `sum_l (-1)^l C(n,l) l^i` in integer
/// arithmetic. Equals 0 for `i < n` and `(-1)^n n!` for `i = n`.
pub fn binom_alternating_sum(n: u32, i: u32) -> Result<i64, GadgetError> {
    if n > 20 {
        return Err(GadgetError::Overflow { n });
    }
    if i > n {
        return Err(GadgetError::InvalidInput {
            reason: "requires i <= n",
        });
    }
    let mut sum: i128 = 0;
    for l in 0..=n {
        let mut term = binom_i128(n, l) * pow_i128(l as i128, i);
        if l % 2 == 1 {
            term = -term;
        }
        sum += term;
    }
    // |result| <= 20! which fits comfortably in i64.
    Ok(sum as i64)
}

fn binom_i128(n: u32, k: u32) -> i128 {
    let k = k.min(n - k.min(n));
    let mut c: i128 = 1;
    for j in 0..k {
        c = c * (n - j) as i128 / (j + 1) as i128;
    }
    c
}

fn pow_i128(base: i128, exp: u32) -> i128 {
    let mut acc: i128 = 1;
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Forward-difference gadget for the k-th derivative:
/// `psi_eta(x) = sum_l (-1)^l C(k,l) rho(x + l eta) / (-eta)^k`.
///
/// Width k+1, depth 1: hidden weights all 1, hidden biases `l eta`, output
/// coefficients `(-1)^l C(k,l) / (-eta)^k`. The reported error is measured on
/// the unit reference domain against the activation's k-th derivative.
///
/// This is also the building block for rewriting a network whose hidden
/// activation is `rho^(k)` into a `rho`-activated one of width (k+1)N: fuse
/// this gadget into each neuron exactly as [`crate::transpile::substitute`]
/// fuses ReLU gadgets. The transpiler does not automate that host path
/// (reference evaluation of `rho^(k)` is only registered for k <= 2).
pub fn derivative_gadget(spec: &ActivationSpec, k: u32, eta: f64) -> Result<Gadget, GadgetError> {
    if eta <= 0.0 || !eta.is_finite() {
        return Err(GadgetError::InvalidInput {
            reason: "eta must be positive and finite",
        });
    }
    let floor = eps_root(k + 2);
    if eta < floor {
        return Err(GadgetError::EtaTooSmall { eta, floor });
    }
    if k > 20 {
        return Err(GadgetError::Overflow { n: k });
    }

    let denom = fmath::powf(-eta, k as f64);
    let mut w0 = Vec::with_capacity((k + 1) as usize);
    let mut b0 = Vec::with_capacity((k + 1) as usize);
    let mut w1 = Vec::with_capacity((k + 1) as usize);
    for l in 0..=k {
        w0.push(vec![1.0]);
        b0.push(l as f64 * eta);
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        w1.push(sign * binom_i128(k, l) as f64 / denom);
    }
    let net = scalar_chain(
        1,
        vec![
            Layer::new(w0, b0, ActivationTag::Spec(spec.clone())),
            Layer::new(vec![w1], vec![0.0], ActivationTag::Identity),
        ],
    );
    let gadget = Gadget {
        reported_error: 0.0,
        net,
        target: GadgetTarget::Derivative(k),
        scale_param: eta,
        domain_half_width: 1.0,
    };
    let reference = |x: f64| -> f64 {
        match k {
            0 => spec.eval(x),
            1 | 2 => spec.derivative(k, x).map(|d| d.value).unwrap_or(f64::NAN),
            // Independent high-order central difference for k >= 3.
            _ => central_kth(spec, k, x, floor * 8.0),
        }
    };
    let mut err = 0.0f64;
    for i in 0..=200 {
        let x = -1.0 + i as f64 * 0.01;
        let r = reference(x);
        if r.is_finite() {
            err = err.max(fmath::abs(gadget.eval(x) - r));
        }
    }
    Ok(Gadget {
        reported_error: err,
        ..gadget
    })
}

fn central_kth(spec: &ActivationSpec, k: u32, x: f64, h: f64) -> f64 {
    // Centered k-th difference, used only as an error reference.
    let mut acc = 0.0;
    for l in 0..=k {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        let c = binom_i128(k, l) as f64;
        acc += sign * c * spec.eval(x + (k as f64 / 2.0 - l as f64) * h);
    }
    acc / fmath::powf(h, k as f64)
}

/// Identity-map gadget `g_eta(x) = (rho(x1 + eta x) - rho(x1)) / (eta rho'(x1))`
/// built at the classification's slope point. Width 1, depth 1; `g_eta(0)` is
/// exactly zero because the output bias is the negated rounded product.
pub fn identity_gadget(cls: &Classification, eta: f64) -> Result<Gadget, GadgetError> {
    if eta <= 0.0 || !eta.is_finite() {
        return Err(GadgetError::InvalidInput {
            reason: "eta must be positive and finite",
        });
    }
    let slope = cls.slope_point.ok_or(GadgetError::NoSlopePoint)?;
    if slope.value == 0.0 {
        return Err(GadgetError::NoSlopePoint);
    }
    let out_w = 1.0 / (eta * slope.value);
    let rho_x1 = cls.spec.eval(slope.x);
    let out_b = -(out_w * rho_x1);
    let net = scalar_chain(
        1,
        vec![
            Layer::new(
                vec![vec![eta]],
                vec![slope.x],
                ActivationTag::Spec(cls.spec.clone()),
            ),
            Layer::new(vec![vec![out_w]], vec![out_b], ActivationTag::Identity),
        ],
    );
    let gadget = Gadget {
        reported_error: 0.0,
        net,
        target: GadgetTarget::Identity,
        scale_param: eta,
        domain_half_width: 1.0,
    };
    let mut err = 0.0f64;
    for i in 0..=200 {
        let x = -1.0 + i as f64 * 0.01;
        err = err.max(fmath::abs(gadget.eval(x) - x));
    }
    Ok(Gadget {
        reported_error: err,
        ..gadget
    })
}

/// The four-point second-difference form behind the product gadget.
///
/// `eval` groups the four terms into value-sorted pairs, which keeps
/// `Gamma(x, 0)`, `Gamma(0, y)`, and the x/y symmetry exact in floating
/// point; the generic network forward pass does not.
#[derive(Debug, Clone)]
pub struct ProductForm {
    pub spec: ActivationSpec,
    pub x0: f64,
    pub rho_x0: f64,
    pub inv_denom: f64,
    pub eps: f64,
}

impl ProductForm {
    pub fn new(cls: &Classification, eps: f64) -> Result<Self, GadgetError> {
        if eps <= 0.0 || !eps.is_finite() {
            return Err(GadgetError::InvalidInput {
                reason: "eps must be positive and finite",
            });
        }
        let floor = eps_root(4);
        if eps < floor {
            return Err(GadgetError::EpsTooSmall { eps, floor });
        }
        let curv = cls.curvature_point.ok_or(GadgetError::NoCurvaturePoint)?;
        if curv.value == 0.0 {
            return Err(GadgetError::NoCurvaturePoint);
        }
        let rho_x0 = cls.spec.eval(curv.x);
        Ok(ProductForm {
            spec: cls.spec.clone(),
            x0: curv.x,
            rho_x0,
            inv_denom: 1.0 / (eps * eps * curv.value),
            eps,
        })
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let e = self.eps;
        let a = self.spec.eval(self.x0 + (e * x + e * y));
        let bx = self.spec.eval(self.x0 + e * x);
        let by = self.spec.eval(self.x0 + e * y);
        let (p, q) = if bx >= by { (bx, by) } else { (by, bx) };
        ((a - p) - (q - self.rho_x0)) * self.inv_denom
    }
}

/// Two-input product gadget `Gamma(x, y) -> x y`, built at the
/// classification's curvature point. Width 3, depth 1.
pub fn product_gadget(cls: &Classification, eps_g: f64) -> Result<Gadget, GadgetError> {
    let form = ProductForm::new(cls, eps_g)?;
    let e = eps_g;
    let c = form.inv_denom;
    let tag = ActivationTag::Spec(cls.spec.clone());
    let net = Network {
        input_dim: 2,
        layers: vec![
            Layer::new(
                vec![vec![e, e], vec![e, 0.0], vec![0.0, e]],
                vec![form.x0, form.x0, form.x0],
                tag,
            ),
            Layer::new(
                vec![vec![c, -c, -c]],
                vec![c * form.rho_x0],
                ActivationTag::Identity,
            ),
        ],
    };
    let mut err = 0.0f64;
    for i in 0..=64 {
        for j in 0..=64 {
            let x = -1.0 + i as f64 / 32.0;
            let y = -1.0 + j as f64 / 32.0;
            err = err.max(fmath::abs(form.eval(x, y) - x * y));
        }
    }
    Ok(Gadget {
        net,
        target: GadgetTarget::Product,
        scale_param: eps_g,
        domain_half_width: 1.0,
        reported_error: err,
    })
}
