//! Class membership of activations and the witnesses each gadget needs.
//!
//! Built-ins are classified from a table; user-defined activations go through
//! numeric probing and come back flagged. Witness points for bounded S-shaped
//! activations are chosen by maximizing |rho''| (and |rho'|) rather than at
//! arbitrary points: a large denominator keeps the gadget's parameter
//! magnitudes and rounding error small.

use super::{ActKind, ActivationSpec, ScalarFn};
use crate::error::ActError;
use crate::fmath;
use crate::util::grid_then_golden_max;
use alloc::borrow::ToOwned;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

/// Membership in one of the admissible activation classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    /// Piecewise-smooth with a kink of the given order.
    A1k(u32),
    /// `(x + b0) * h(x) + b1` with bounded S-shaped `h`.
    A2,
    /// The A2 subclass where one limit of `h` is zero.
    A2Tilde,
    /// Bounded S-shaped activation with a point of non-zero curvature.
    A3,
}

/// A kink witness: one-sided slopes of the k-th derivative differ at `x0`.
/// `smooth_lo..smooth_hi` is an open interval around `x0` on which the
/// activation is C^k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinkWitness {
    pub x0: f64,
    pub order: u32,
    pub l1: f64,
    pub l2: f64,
    pub smooth_lo: f64,
    pub smooth_hi: f64,
}

/// S-shape decomposition `rho(x) = (x + b0) * h(x) + b1` with
/// `h -> l1` at -inf and `h -> l2` at +inf.
#[derive(Clone)]
pub struct SDecomp {
    pub b0: f64,
    pub b1: f64,
    pub l1: f64,
    pub l2: f64,
    pub h: ScalarFn,
}

impl fmt::Debug for SDecomp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SDecomp")
            .field("b0", &self.b0)
            .field("b1", &self.b1)
            .field("l1", &self.l1)
            .field("l2", &self.l2)
            .finish()
    }
}

/// A distinguished point together with the derivative value there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointValue {
    pub x: f64,
    pub value: f64,
}

/// Horizontal asymptotes of a bounded activation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Asymptotes {
    pub l1: f64,
    pub l2: f64,
}

/// Which classes an activation belongs to, with the construction witnesses.
#[derive(Debug, Clone)]
pub struct Classification {
    pub spec: ActivationSpec,
    pub memberships: Vec<Membership>,
    pub kink: Option<KinkWitness>,
    pub s_decomp: Option<SDecomp>,
    /// Asymptotes of the activation itself (bounded members only).
    pub asymptotes: Option<Asymptotes>,
    pub curvature_point: Option<PointValue>,
    pub slope_point: Option<PointValue>,
    /// True when the witnesses came from numeric probing of a user-defined
    /// activation rather than the registry table.
    pub probed: bool,
}

impl Classification {
    pub fn is_member(&self, m: Membership) -> bool {
        self.memberships.contains(&m)
    }

    pub fn kink_order(&self) -> Option<u32> {
        self.memberships.iter().find_map(|m| match m {
            Membership::A1k(k) => Some(*k),
            _ => None,
        })
    }
}

/// The normalization produced by [`s_shape_normalize`]: affine maps and a
/// rescaled `h` whose limits are exactly 0 at -inf and 1 at +inf.
#[derive(Clone)]
pub struct NormalizedDecomposition {
    /// w0, w1, b0, b1 of the rewritten decomposition
    /// `rho(x) = (w0 x + b0) * h(w1 x) + b1`.
    pub w0: f64,
    pub w1: f64,
    pub b0: f64,
    pub b1: f64,
    /// Inner affine: `L(x) = in_scale * x + in_shift`, so that
    /// `rho(L(y)) = sign * y * h_hat(y) + b1`.
    pub in_scale: f64,
    pub in_shift: f64,
    /// Output sign `sign = sgn(w0 w1)`.
    pub sign: f64,
    /// Normalized S-shape with limits 0 and 1.
    pub h_hat: ScalarFn,
}

impl NormalizedDecomposition {
    /// The inner affine map.
    pub fn affine_in(&self, x: f64) -> f64 {
        self.in_scale * x + self.in_shift
    }

    /// The output map `t -> sign * (t - b1)`.
    pub fn affine_out(&self, t: f64) -> f64 {
        self.sign * (t - self.b1)
    }
}

impl fmt::Debug for NormalizedDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NormalizedDecomposition")
            .field("w0", &self.w0)
            .field("w1", &self.w1)
            .field("b0", &self.b0)
            .field("b1", &self.b1)
            .field("in_scale", &self.in_scale)
            .field("in_shift", &self.in_shift)
            .field("sign", &self.sign)
            .finish()
    }
}

// Search domain for curvature/slope witnesses. Softsign's second derivative
// jumps at 0, so its curvature search stays on the positive branch away from
// the jump; everything else searches [-10, 10].
fn curvature_domain(spec: &ActivationSpec) -> (f64, f64) {
    match spec.kind() {
        ActKind::Softsign => (0.25, 10.0),
        _ => (-10.0, 10.0),
    }
}

fn find_extremum_point(spec: &ActivationSpec, order: u32, lo: f64, hi: f64) -> Option<PointValue> {
    let score = |x: f64| match spec.derivative(order, x) {
        Ok(d) => fmath::abs(d.value),
        Err(_) => f64::NEG_INFINITY,
    };
    let (x, s) = grid_then_golden_max(score, lo, hi, 2001);
    if !s.is_finite() || s <= 1e-9 {
        return None;
    }
    let value = spec.derivative(order, x).ok()?.value;
    Some(PointValue { x, value })
}

fn a3_witnesses(spec: &ActivationSpec, l1: f64, l2: f64, cls: &mut Classification) {
    cls.memberships.push(Membership::A3);
    cls.asymptotes = Some(Asymptotes { l1, l2 });
    let (lo, hi) = curvature_domain(spec);
    cls.curvature_point = find_extremum_point(spec, 2, lo, hi);
    cls.slope_point = find_extremum_point(spec, 1, lo, hi);
}

// h(x) = (rho(x) - b1) / x for the built-ins whose decomposition has b0 = 0,
// patched at x = 0 with the registered value.
fn ratio_h(spec: ActivationSpec, b1: f64, at_zero: f64) -> ScalarFn {
    Arc::new(move |x: f64| {
        if x == 0.0 {
            at_zero
        } else {
            (spec.eval(x) - b1) / x
        }
    })
}

/// Classify an activation into the admissible classes with witnesses.
///
/// Built-ins are table-driven; [`ActivationSpec::custom`] entries are probed
/// numerically and the result carries `probed = true`. Deterministic and
/// idempotent.
pub fn classify(spec: &ActivationSpec) -> Result<Classification, ActError> {
    let mut cls = Classification {
        spec: spec.clone(),
        memberships: Vec::new(),
        kink: None,
        s_decomp: None,
        asymptotes: None,
        curvature_point: None,
        slope_point: None,
        probed: false,
    };

    let kink_interval = 1e9;
    match spec.kind() {
        ActKind::Relu => {
            cls.memberships.push(Membership::A1k(0));
            cls.kink = Some(KinkWitness {
                x0: 0.0,
                order: 0,
                l1: 0.0,
                l2: 1.0,
                smooth_lo: -kink_interval,
                smooth_hi: kink_interval,
            });
        }
        ActKind::LeakyRelu { alpha } => {
            cls.memberships.push(Membership::A1k(0));
            cls.kink = Some(KinkWitness {
                x0: 0.0,
                order: 0,
                l1: *alpha,
                l2: 1.0,
                smooth_lo: -kink_interval,
                smooth_hi: kink_interval,
            });
        }
        ActKind::Relu2 => {
            cls.memberships.push(Membership::A1k(1));
            cls.kink = Some(KinkWitness {
                x0: 0.0,
                order: 1,
                l1: 0.0,
                l2: 2.0,
                smooth_lo: -kink_interval,
                smooth_hi: kink_interval,
            });
        }
        ActKind::Elu { alpha } => {
            // alpha = 1 makes ELU continuously differentiable: the kink moves
            // to order 1 (the second derivative jumps from 1 to 0).
            let kink = if *alpha == 1.0 {
                KinkWitness {
                    x0: 0.0,
                    order: 1,
                    l1: 1.0,
                    l2: 0.0,
                    smooth_lo: -kink_interval,
                    smooth_hi: kink_interval,
                }
            } else {
                KinkWitness {
                    x0: 0.0,
                    order: 0,
                    l1: *alpha,
                    l2: 1.0,
                    smooth_lo: -kink_interval,
                    smooth_hi: kink_interval,
                }
            };
            cls.memberships.push(Membership::A1k(kink.order));
            cls.kink = Some(kink);
            cls.memberships.push(Membership::A2Tilde);
            let a = *alpha;
            cls.s_decomp = Some(SDecomp {
                b0: 0.0,
                b1: 0.0,
                l1: 0.0,
                l2: 1.0,
                h: ratio_h(spec.clone(), 0.0, 0.5 * (1.0 + a)),
            });
        }
        ActKind::Celu { alpha } => {
            // CELU is C^1 by construction for every alpha > 0.
            cls.memberships.push(Membership::A1k(1));
            cls.kink = Some(KinkWitness {
                x0: 0.0,
                order: 1,
                l1: 1.0 / alpha,
                l2: 0.0,
                smooth_lo: -kink_interval,
                smooth_hi: kink_interval,
            });
            cls.memberships.push(Membership::A2Tilde);
            cls.s_decomp = Some(SDecomp {
                b0: 0.0,
                b1: 0.0,
                l1: 0.0,
                l2: 1.0,
                h: ratio_h(spec.clone(), 0.0, 1.0),
            });
        }
        ActKind::Selu { lambda, alpha } => {
            let kink = if *alpha == 1.0 {
                KinkWitness {
                    x0: 0.0,
                    order: 1,
                    l1: *lambda,
                    l2: 0.0,
                    smooth_lo: -kink_interval,
                    smooth_hi: kink_interval,
                }
            } else {
                KinkWitness {
                    x0: 0.0,
                    order: 0,
                    l1: lambda * alpha,
                    l2: *lambda,
                    smooth_lo: -kink_interval,
                    smooth_hi: kink_interval,
                }
            };
            cls.memberships.push(Membership::A1k(kink.order));
            cls.kink = Some(kink);
            cls.memberships.push(Membership::A2Tilde);
            let patch = 0.5 * lambda * (1.0 + alpha);
            cls.s_decomp = Some(SDecomp {
                b0: 0.0,
                b1: 0.0,
                l1: 0.0,
                l2: *lambda,
                h: ratio_h(spec.clone(), 0.0, patch),
            });
        }
        ActKind::Softplus => {
            cls.memberships.push(Membership::A2Tilde);
            cls.s_decomp = Some(SDecomp {
                b0: 0.0,
                b1: core::f64::consts::LN_2,
                l1: 0.0,
                l2: 1.0,
                h: ratio_h(spec.clone(), core::f64::consts::LN_2, 0.5),
            });
        }
        ActKind::Gelu { mu, sigma } => {
            cls.memberships.push(Membership::A2Tilde);
            let (mu, sigma) = (*mu, *sigma);
            cls.s_decomp = Some(SDecomp {
                b0: 0.0,
                b1: 0.0,
                l1: 0.0,
                l2: 1.0,
                h: Arc::new(move |x| fmath::norm_cdf((x - mu) / sigma)),
            });
        }
        ActKind::Silu => {
            cls.memberships.push(Membership::A2Tilde);
            cls.s_decomp = Some(SDecomp {
                b0: 0.0,
                b1: 0.0,
                l1: 0.0,
                l2: 1.0,
                h: Arc::new(fmath::sigmoid),
            });
        }
        ActKind::Swish { beta } => {
            cls.memberships.push(Membership::A2Tilde);
            let b = *beta;
            cls.s_decomp = Some(SDecomp {
                b0: 0.0,
                b1: 0.0,
                l1: 0.0,
                l2: 1.0,
                h: Arc::new(move |x| fmath::sigmoid(b * x)),
            });
        }
        ActKind::Mish => {
            cls.memberships.push(Membership::A2Tilde);
            cls.s_decomp = Some(SDecomp {
                b0: 0.0,
                b1: 0.0,
                l1: 0.0,
                l2: 1.0,
                h: Arc::new(|x| fmath::tanh(fmath::softplus(x))),
            });
        }
        ActKind::Sigmoid => a3_witnesses(spec, 0.0, 1.0, &mut cls),
        ActKind::Tanh => a3_witnesses(spec, -1.0, 1.0, &mut cls),
        ActKind::Arctan => a3_witnesses(
            spec,
            -core::f64::consts::FRAC_PI_2,
            core::f64::consts::FRAC_PI_2,
            &mut cls,
        ),
        ActKind::Softsign => a3_witnesses(spec, -1.0, 1.0, &mut cls),
        ActKind::Dsilu => a3_witnesses(spec, 0.0, 1.0, &mut cls),
        ActKind::Srs { alpha, .. } => a3_witnesses(spec, 0.0, *alpha, &mut cls),
        ActKind::XDsilu => {
            cls.memberships.push(Membership::A2Tilde);
            cls.s_decomp = Some(SDecomp {
                b0: 0.0,
                b1: 0.0,
                l1: 0.0,
                l2: 1.0,
                h: Arc::new(super::dsilu_raw),
            });
        }
        ActKind::XSoftsignShift => {
            cls.memberships.push(Membership::A2Tilde);
            cls.s_decomp = Some(SDecomp {
                b0: 0.0,
                b1: 0.0,
                l1: 0.0,
                l2: 1.0,
                h: Arc::new(|x| 0.5 * (x / (1.0 + fmath::abs(x))) + 0.5),
            });
        }
        ActKind::XArctanShift => {
            cls.memberships.push(Membership::A2Tilde);
            cls.s_decomp = Some(SDecomp {
                b0: 0.0,
                b1: 0.0,
                l1: 0.0,
                l2: 1.0,
                h: Arc::new(|x| fmath::atan(x) / core::f64::consts::PI + 0.5),
            });
        }
        ActKind::Custom(_) => {
            probe(spec, &mut cls)?;
        }
    }

    // Slope point for kinked built-ins: the A1k (k >= 1) construction needs a
    // point of non-zero first derivative inside the smoothness interval.
    if cls.slope_point.is_none() {
        if let Some(k) = &cls.kink {
            let lo = k.smooth_lo.max(-10.0);
            let hi = k.smooth_hi.min(10.0);
            // Keep a margin from the kink so the identity gadget's difference
            // quotient stays on one smooth branch.
            let margin = 1e-3_f64.max((hi - lo) * 1e-4);
            let side = |a: f64, b: f64| {
                if b - a > 2.0 * margin {
                    find_extremum_point(spec, 1, a, b)
                } else {
                    None
                }
            };
            let right = side(k.x0 + margin, hi);
            let left = side(lo, k.x0 - margin);
            cls.slope_point = match (right, left) {
                (Some(r), Some(l)) => Some(if fmath::abs(r.value) >= fmath::abs(l.value) {
                    r
                } else {
                    l
                }),
                (r, l) => r.or(l),
            };
        }
    }

    Ok(cls)
}

// ---------------------------------------------------------------------------
// Numeric probing for user-defined activations
// ---------------------------------------------------------------------------

const TAIL_PROBE: [f64; 3] = [1e4, 1e5, 1e6];

fn stable_limit(f: &dyn Fn(f64) -> f64, sign: f64) -> Option<f64> {
    let v: Vec<f64> = TAIL_PROBE.iter().map(|&t| f(sign * t)).collect();
    if v.iter().any(|x| !x.is_finite()) {
        return None;
    }
    if (v[2] - v[1]).abs() < 1e-4 && (v[1] - v[0]).abs() < 1e-2 {
        Some(v[2])
    } else {
        None
    }
}

fn probe(spec: &ActivationSpec, cls: &mut Classification) -> Result<(), ActError> {
    cls.probed = true;
    let f = |x: f64| spec.eval(x);
    let mut found = false;

    // Bounded with distinct limits and a curvature point -> A3.
    let lim_neg = stable_limit(&f, -1.0);
    let lim_pos = stable_limit(&f, 1.0);
    if let (Some(l1), Some(l2)) = (lim_neg, lim_pos) {
        if (l2 - l1).abs() > 1e-6 {
            let bound = l1.abs().max(l2.abs()) + 1.0;
            let bounded = (0..=200).all(|i| {
                let x = -1e4 + i as f64 * 100.0;
                fmath::abs(f(x)) <= 10.0 * bound
            });
            if bounded {
                a3_witnesses(spec, l1, l2, cls);
                found = cls.curvature_point.is_some();
                if !found {
                    // bounded but flat: drop the speculative membership
                    cls.memberships.retain(|m| *m != Membership::A3);
                    cls.asymptotes = None;
                }
            }
        }
    }

    // x * h(x) + b1 shape (b0 = 0): h = (rho(x) - rho(0)) / x.
    let b1 = f(0.0);
    let h = move |x: f64| (f(x) - b1) / x;
    let hl1 = stable_limit(&h, -1.0);
    let hl2 = stable_limit(&h, 1.0);
    if let (Some(mut l1), Some(mut l2)) = (hl1, hl2) {
        if l1.abs() < 1e-8 {
            l1 = 0.0;
        }
        if l2.abs() < 1e-8 {
            l2 = 0.0;
        }
        if (l2 - l1).abs() > 1e-6 {
            let hb = h(1e-3)
                .abs()
                .max(h(-1e-3).abs())
                .max(l1.abs())
                .max(l2.abs())
                + 1.0;
            let bounded = (1..=200).all(|i| {
                let x = i as f64 * 50.0;
                h(x).abs() <= 10.0 * hb && h(-x).abs() <= 10.0 * hb
            });
            if bounded {
                let spec2 = spec.clone();
                let patch = h(1e-8);
                cls.s_decomp = Some(SDecomp {
                    b0: 0.0,
                    b1,
                    l1,
                    l2,
                    h: Arc::new(move |x: f64| {
                        if x == 0.0 {
                            patch
                        } else {
                            (spec2.eval(x) - b1) / x
                        }
                    }),
                });
                if l1 * l2 == 0.0 {
                    cls.memberships.push(Membership::A2Tilde);
                } else {
                    cls.memberships.push(Membership::A2);
                }
                found = true;
            }
        }
    }

    if let Some(k) = probe_kink(spec) {
        cls.memberships.insert(0, Membership::A1k(k.order));
        cls.kink = Some(k);
        found = true;
    }

    if !found {
        return Err(ActError::NotInA {
            name: spec.name().to_owned(),
        });
    }
    Ok(())
}

// Detect an order-0 or order-1 kink on [-8, 8]. A corner of g makes the
// centered second difference ratio |g(x+h) - 2 g(x) + g(x-h)| / h approach
// |l2 - l1| / 2 instead of vanishing like O(h).
fn probe_kink(spec: &ActivationSpec) -> Option<KinkWitness> {
    for order in 0..=1u32 {
        let g: alloc::boxed::Box<dyn Fn(f64) -> f64> = if order == 0 {
            let s = spec.clone();
            alloc::boxed::Box::new(move |x| s.eval(x))
        } else {
            let s = spec.clone();
            let h = 1e-6;
            alloc::boxed::Box::new(move |x| (s.eval(x + h) - s.eval(x - h)) / (2.0 * h))
        };
        let corner_score = |x: f64| {
            let h = if order == 0 {
                fmath::exp2i(-22)
            } else {
                fmath::exp2i(-10)
            };
            fmath::abs(g(x + h) - 2.0 * g(x) + g(x - h)) / h
        };
        let (x0, score) = grid_then_golden_max(corner_score, -8.0, 8.0, 4097);
        if score < 1e-4 {
            continue;
        }
        // One-sided difference quotients at shrinking steps.
        let slope = |sgn: f64| {
            let g0 = g(x0);
            let t1 = sgn * fmath::exp2i(if order == 0 { -18 } else { -8 });
            let t2 = t1 * 0.5;
            let s1 = (g(x0 + t1) - g0) / t1;
            let s2 = (g(x0 + t2) - g0) / t2;
            (s1, s2)
        };
        let (l1a, l1b) = slope(-1.0);
        let (l2a, l2b) = slope(1.0);
        let stable = (l1a - l1b).abs() < 1e-2 * (1.0 + l1a.abs())
            && (l2a - l2b).abs() < 1e-2 * (1.0 + l2a.abs());
        if stable && (l2b - l1b).abs() > 1e-4 {
            return Some(KinkWitness {
                x0,
                order,
                l1: l1b,
                l2: l2b,
                smooth_lo: x0 - 8.0,
                smooth_hi: x0 + 8.0,
            });
        }
    }
    None
}

// ---------------------------------------------------------------------------
// S-shape normalization
// ---------------------------------------------------------------------------

/// Rewrite the decomposition so the S-shape has limits exactly 0 at -inf and
/// 1 at +inf.
///
/// For the one-sided case (`l1 * l2 = 0`) this is the reflection/rescaling
/// `w0 = l1 + l2`, `w1 = +/-1`, `h(x) = h~(w1 x) / (l1 + l2)`; for the
/// general case it is `g1 = (h - l1) / (l2 - l1)` with a unit inner map.
/// Numeric tails of the result are checked at +/-1e6 and must agree with
/// {0, 1} to 1e-4, else [`ActError::LimitMismatch`].
pub fn s_shape_normalize(cls: &Classification) -> Result<NormalizedDecomposition, ActError> {
    let d = cls.s_decomp.as_ref().ok_or(ActError::NoDecomposition)?;
    let (l1, l2) = (d.l1, d.l2);
    let h = d.h.clone();

    let norm = if l1 * l2 == 0.0 && l1 + l2 != 0.0 {
        let w0 = l1 + l2;
        let w1 = if l1 == 0.0 { 1.0 } else { -1.0 };
        let b0 = (l1 + l2) * d.b0;
        let b1 = d.b1;
        let sign = if w0 * w1 > 0.0 { 1.0 } else { -1.0 };
        let in_scale = w1 / fmath::abs(w0 * w1);
        let in_shift = -b0 / w0;
        // h_hat(y) = h(w1 L(y)) with h(t) = h~(w1 t) / (l1 + l2); the two w1
        // factors cancel (w1^2 = 1), leaving h~(L(y)) / (l1 + l2).
        let hh_scale = in_scale;
        let hh_shift = in_shift;
        let denom = w0;
        let h_hat: ScalarFn = Arc::new(move |y: f64| h(hh_scale * y + hh_shift) / denom);
        NormalizedDecomposition {
            w0,
            w1,
            b0,
            b1,
            in_scale,
            in_shift,
            sign,
            h_hat,
        }
    } else if l1 != l2 {
        // General A2 path: g1 = (h(x - b0) - l1) / (l2 - l1).
        let b0 = d.b0;
        let span = l2 - l1;
        let h_hat: ScalarFn = Arc::new(move |y: f64| (h(y - b0) - l1) / span);
        NormalizedDecomposition {
            w0: 1.0,
            w1: 1.0,
            b0,
            b1: d.b1,
            in_scale: 1.0,
            in_shift: -b0,
            sign: 1.0,
            h_hat,
        }
    } else {
        return Err(ActError::LimitMismatch {
            side: "both",
            expected: l1,
            found: l2,
        });
    };

    let tail_neg = (norm.h_hat)(-1e6);
    if fmath::abs(tail_neg) > 1e-4 {
        return Err(ActError::LimitMismatch {
            side: "-inf",
            expected: 0.0,
            found: tail_neg,
        });
    }
    let tail_pos = (norm.h_hat)(1e6);
    if fmath::abs(tail_pos - 1.0) > 1e-4 {
        return Err(ActError::LimitMismatch {
            side: "+inf",
            expected: 1.0,
            found: tail_pos,
        });
    }
    Ok(norm)
}

/// Analytic limits of the gap function `y (1_{y>0} - h_hat(y))` at -inf and
/// +inf for the built-in decompositions. `None` for user specs, whose tails
/// stay unverified.
pub(crate) fn gap_tail_limits(spec: &ActivationSpec) -> Option<(f64, f64)> {
    match spec.kind() {
        ActKind::Elu { alpha } => Some((*alpha, 0.0)),
        ActKind::Celu { alpha } => Some((*alpha, 0.0)),
        ActKind::Selu { lambda, alpha } => Some((lambda * alpha, 0.0)),
        ActKind::Softplus => Some((core::f64::consts::LN_2, core::f64::consts::LN_2)),
        ActKind::Gelu { .. }
        | ActKind::Silu
        | ActKind::Swish { .. }
        | ActKind::Mish
        | ActKind::XDsilu => Some((0.0, 0.0)),
        ActKind::XSoftsignShift => Some((0.5, 0.5)),
        ActKind::XArctanShift => Some((core::f64::consts::FRAC_1_PI, core::f64::consts::FRAC_1_PI)),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::act::{builtin, CustomActivation, SmoothnessHint};

    fn cls(name: &str) -> Classification {
        classify(&builtin(name, &[]).unwrap()).unwrap()
    }

    #[test]
    fn relu_is_the_canonical_order_zero_kink() {
        let c = cls("relu");
        assert_eq!(c.memberships, alloc::vec![Membership::A1k(0)]);
        let k = c.kink.unwrap();
        assert_eq!((k.x0, k.l1, k.l2), (0.0, 0.0, 1.0));
    }

    #[test]
    fn relu2_has_an_order_one_kink() {
        let c = cls("relu2");
        assert_eq!(c.kink_order(), Some(1));
        let k = c.kink.unwrap();
        assert_eq!((k.l1, k.l2), (0.0, 2.0));
    }

    #[test]
    fn softplus_decomposes_with_b1_ln_two() {
        let c = cls("softplus");
        assert_eq!(c.memberships, alloc::vec![Membership::A2Tilde]);
        let d = c.s_decomp.as_ref().unwrap();
        assert_eq!(d.b1, core::f64::consts::LN_2);
        assert_eq!((d.h)(0.0), 0.5);
        assert_eq!((d.l1, d.l2), (0.0, 1.0));
    }

    #[test]
    fn sigmoid_curvature_point_matches_dense_grid_oracle() {
        let c = cls("sigmoid");
        assert!(c.is_member(Membership::A3));
        let a = c.asymptotes.unwrap();
        assert_eq!((a.l1, a.l2), (0.0, 1.0));
        let cp = c.curvature_point.unwrap();
        // |sigma''| is maximized at -+1.3169578969..., where it equals
        // +-0.0962250448649... (frozen from a dense grid over the closed form).
        assert!(
            (cp.x.abs() - 1.316_957_896_924_8).abs() < 1e-6,
            "x0 = {}",
            cp.x
        );
        assert!((cp.value.abs() - 0.096_225_044_864_937).abs() < 1e-9);
        let sp = c.slope_point.unwrap();
        assert!(sp.x.abs() < 1e-6);
        assert!((sp.value - 0.25).abs() < 1e-12);
    }

    #[test]
    fn elu_alpha_one_is_c1_and_keeps_a2tilde() {
        let c = cls("elu");
        assert!(c.is_member(Membership::A1k(1)));
        assert!(c.is_member(Membership::A2Tilde));
        let k = c.kink.unwrap();
        assert_eq!((k.order, k.l1, k.l2), (1, 1.0, 0.0));

        let c2 = classify(&builtin("elu", &[("alpha".into(), 2.0)]).unwrap()).unwrap();
        assert!(c2.is_member(Membership::A1k(0)));
        let k2 = c2.kink.unwrap();
        assert_eq!((k2.l1, k2.l2), (2.0, 1.0));
    }

    #[test]
    fn classify_is_deterministic() {
        let a = cls("tanh");
        let b = cls("tanh");
        assert_eq!(a.memberships, b.memberships);
        assert_eq!(a.curvature_point, b.curvature_point);
        assert_eq!(a.slope_point, b.slope_point);
    }

    #[test]
    fn silu_normalization_is_identity() {
        let c = cls("silu");
        let n = s_shape_normalize(&c).unwrap();
        assert_eq!((n.w0, n.w1, n.b0, n.b1, n.sign), (1.0, 1.0, 0.0, 0.0, 1.0));
        assert_eq!((n.h_hat)(0.0), 0.5);
    }

    #[test]
    fn mirrored_silu_normalizes_by_reflection() {
        let mirrored = ActivationSpec::custom(CustomActivation {
            name: "mirrored_silu".into(),
            f: Arc::new(|x| -x * fmath::sigmoid(-x)),
            d1: None,
            d2: None,
            smoothness: SmoothnessHint::Smooth,
        });
        let c = classify(&mirrored).unwrap();
        assert!(c.probed);
        assert!(c.is_member(Membership::A2Tilde));
        let n = s_shape_normalize(&c).unwrap();
        assert_eq!(n.w1, -1.0);
        // The reflected h_hat recovers a sigmoid: tails 0 and 1.
        assert!(fmath::abs((n.h_hat)(-1e6)) < 1e-9);
        assert!(fmath::abs((n.h_hat)(1e6) - 1.0) < 1e-9);
        // The probed h patches x = 0 with a one-sided sample at 1e-8.
        assert!(fmath::abs((n.h_hat)(0.0) - 0.5) < 1e-7);
    }

    #[test]
    fn polynomials_are_rejected() {
        let poly = ActivationSpec::custom(CustomActivation {
            name: "square".into(),
            f: Arc::new(|x| x * x),
            d1: None,
            d2: None,
            smoothness: SmoothnessHint::Smooth,
        });
        assert!(matches!(classify(&poly), Err(ActError::NotInA { .. })));
    }

    #[test]
    fn probing_finds_a_shifted_corner() {
        let shifted = ActivationSpec::custom(CustomActivation {
            name: "shifted_relu".into(),
            f: Arc::new(|x| if x > 2.0 { x - 2.0 } else { 0.0 } + 0.3),
            d1: None,
            d2: None,
            smoothness: SmoothnessHint::PiecewiseSmooth(0),
        });
        let c = classify(&shifted).unwrap();
        let k = c.kink.expect("corner should be found");
        assert_eq!(k.order, 0);
        assert!((k.x0 - 2.0).abs() < 1e-3, "x0 = {}", k.x0);
        assert!(k.l1.abs() < 1e-3);
        assert!((k.l2 - 1.0).abs() < 1e-3);
    }
}
