//! ReLU emulation gadgets, one construction per activation class, plus the
//! calibration search over the scale parameter.
//!
//! Calibration contract: geometric search starting at scale 1, halving up to
//! 60 times, accepting the first scale whose verification-grid error meets
//! the tolerance, followed by a 20-step bisection back toward the largest
//! passing scale so the result stays clear of the cancellation floor.

use super::{binom_i128, Gadget, GadgetTarget};
use crate::act::{s_shape_normalize, ActKind, ActivationSpec, SDecomp};
use crate::act::{Classification, KinkWitness, Membership, NormalizedDecomposition, PointValue};
use crate::error::GadgetError;
use crate::fmath;
use crate::net::{ActivationTag, Layer, Network};
use crate::util::eps_root;
use alloc::vec;
use alloc::vec::Vec;

/// Which construction a ReLU gadget uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GadgetClass {
    /// Single active neuron (width 1, depth 1).
    A2Tilde,
    /// Two-neuron shifted construction (width 2, depth 1).
    A2,
    /// Kink construction (width k+2, depth 1).
    A1k,
    /// Step-times-identity product construction (width 3, depth 2).
    A3,
}

const GRID_POINTS: usize = 4096;

/// Calibrated ReLU gadget for the best class the activation belongs to.
///
/// Class priority is A2~ > A2 > A1k(0) > A1k(k>=1) > A3, i.e. smallest
/// width/depth factors first; use [`relu_gadget_forced`] to override. ReLU
/// itself short-circuits to a width-1 gadget that is algebraically ReLU.
///
/// Achievable tolerances are bounded by cancellation floors: the k >= 1 kink
/// construction divides a forward difference (step floor `eps^(1/(k+2))`) by
/// its outer scale, so for sources whose difference quotient is not exact the
/// best error plateaus near `4 sqrt(eta_floor) ~ 1e-2` at k = 1; positively
/// homogeneous sources like ReLU^2 are unaffected. The other classes floor
/// well below 1e-6.
pub fn relu_gadget(cls: &Classification, m: f64, tol: f64) -> Result<Gadget, GadgetError> {
    check_domain(m)?;
    if tol <= 0.0 || tol.is_nan() {
        return Err(GadgetError::InvalidInput {
            reason: "tol must be positive",
        });
    }
    let mut best = f64::INFINITY;
    let mut last_err = GadgetError::NoUsableClass;
    for class in candidate_classes(cls) {
        match Family::new(cls, m, class).and_then(|f| calibrate(&f, m, tol)) {
            Ok(g) => return Ok(g),
            Err(GadgetError::CalibrationFailed { best_error }) => {
                best = best.min(best_error);
                last_err = GadgetError::CalibrationFailed { best_error: best };
            }
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

/// Calibrated ReLU gadget using one specific class construction.
pub fn relu_gadget_forced(
    cls: &Classification,
    m: f64,
    tol: f64,
    class: GadgetClass,
) -> Result<Gadget, GadgetError> {
    check_domain(m)?;
    if tol <= 0.0 || tol.is_nan() {
        return Err(GadgetError::InvalidInput {
            reason: "tol must be positive",
        });
    }
    let family = Family::new(cls, m, class)?;
    calibrate(&family, m, tol)
}

/// ReLU gadget at a caller-chosen scale, with no tolerance gate. The scale is
/// `1/K` for the A2~/A2 constructions and the difference step for the others.
pub fn relu_gadget_with_scale(
    cls: &Classification,
    m: f64,
    scale: f64,
    class: Option<GadgetClass>,
) -> Result<Gadget, GadgetError> {
    check_domain(m)?;
    if scale <= 0.0 || !scale.is_finite() {
        return Err(GadgetError::InvalidInput {
            reason: "scale must be positive and finite",
        });
    }
    let class = match class {
        Some(c) => c,
        None => candidate_classes(cls)
            .into_iter()
            .next()
            .ok_or(GadgetError::NoUsableClass)?,
    };
    let family = Family::new(cls, m, class)?;
    if scale < family.floor() {
        return Err(GadgetError::EpsTooSmall {
            eps: scale,
            floor: family.floor(),
        });
    }
    let aux = family.pick_aux(scale, f64::INFINITY);
    Ok(family.finish(scale, aux, m))
}

fn check_domain(m: f64) -> Result<(), GadgetError> {
    if m <= 0.0 || !m.is_finite() {
        return Err(GadgetError::InvalidInput {
            reason: "domain half-width must be positive",
        });
    }
    Ok(())
}

fn candidate_classes(cls: &Classification) -> Vec<GadgetClass> {
    let mut out = Vec::new();
    if matches!(cls.spec.kind(), ActKind::Relu) {
        // Exact short-circuit handled inside Family::new via A1k.
        out.push(GadgetClass::A1k);
        return out;
    }
    if cls.is_member(Membership::A2Tilde) && cls.s_decomp.is_some() {
        out.push(GadgetClass::A2Tilde);
    }
    if cls.s_decomp.is_some()
        && (cls.is_member(Membership::A2) || cls.is_member(Membership::A2Tilde))
    {
        out.push(GadgetClass::A2);
    }
    if cls.kink.is_some() {
        out.push(GadgetClass::A1k);
    }
    if cls.is_member(Membership::A3) {
        out.push(GadgetClass::A3);
    }
    out
}

// ---------------------------------------------------------------------------
// Construction families
// ---------------------------------------------------------------------------

enum Family {
    /// ReLU source: positive homogeneity makes rho(eps x)/eps = ReLU(x), so a
    /// single pass-through neuron is algebraically exact.
    ExactRelu { spec: ActivationSpec },
    A2Tilde {
        spec: ActivationSpec,
        norm: NormalizedDecomposition,
    },
    A2 {
        spec: ActivationSpec,
        b0: f64,
        b1: f64,
        l1: f64,
        l2: f64,
        m: f64,
    },
    A1kZero {
        spec: ActivationSpec,
        kink: KinkWitness,
        m: f64,
    },
    A1kHigh {
        spec: ActivationSpec,
        kink: KinkWitness,
        slope: PointValue,
        rho_k_x0: f64,
        rho_x1: f64,
        m: f64,
    },
    A3 {
        spec: ActivationSpec,
        l1: f64,
        l2: f64,
        curv: PointValue,
        slope: PointValue,
        rho_x0: f64,
        rho_x1: f64,
        m: f64,
    },
}

impl Family {
    fn new(cls: &Classification, m: f64, class: GadgetClass) -> Result<Self, GadgetError> {
        if matches!(cls.spec.kind(), ActKind::Relu) {
            return Ok(Family::ExactRelu {
                spec: cls.spec.clone(),
            });
        }
        match class {
            GadgetClass::A2Tilde => {
                let norm = s_shape_normalize(cls)?;
                Ok(Family::A2Tilde {
                    spec: cls.spec.clone(),
                    norm,
                })
            }
            GadgetClass::A2 => {
                let SDecomp { b0, b1, l1, l2, .. } =
                    cls.s_decomp.clone().ok_or(GadgetError::NoUsableClass)?;
                if l1 == l2 {
                    return Err(GadgetError::NoUsableClass);
                }
                Ok(Family::A2 {
                    spec: cls.spec.clone(),
                    b0,
                    b1,
                    l1,
                    l2,
                    m,
                })
            }
            GadgetClass::A1k => {
                let kink = cls.kink.ok_or(GadgetError::NoUsableClass)?;
                if kink.l1 == kink.l2 {
                    return Err(GadgetError::NoUsableClass);
                }
                if kink.order == 0 {
                    Ok(Family::A1kZero {
                        spec: cls.spec.clone(),
                        kink,
                        m,
                    })
                } else {
                    let slope = cls.slope_point.ok_or(GadgetError::NoSlopePoint)?;
                    if slope.value == 0.0 {
                        return Err(GadgetError::NoSlopePoint);
                    }
                    let rho_k_x0 = kth_derivative_at(&cls.spec, kink.order, kink.x0)?;
                    let rho_x1 = cls.spec.eval(slope.x);
                    Ok(Family::A1kHigh {
                        spec: cls.spec.clone(),
                        kink,
                        slope,
                        rho_k_x0,
                        rho_x1,
                        m,
                    })
                }
            }
            GadgetClass::A3 => {
                let asym = cls.asymptotes.ok_or(GadgetError::NoUsableClass)?;
                let curv = cls.curvature_point.ok_or(GadgetError::NoCurvaturePoint)?;
                let slope = cls.slope_point.ok_or(GadgetError::NoSlopePoint)?;
                if curv.value == 0.0 {
                    return Err(GadgetError::NoCurvaturePoint);
                }
                if slope.value == 0.0 || asym.l1 == asym.l2 {
                    return Err(GadgetError::NoSlopePoint);
                }
                Ok(Family::A3 {
                    spec: cls.spec.clone(),
                    l1: asym.l1,
                    l2: asym.l2,
                    curv,
                    slope,
                    rho_x0: cls.spec.eval(curv.x),
                    rho_x1: cls.spec.eval(slope.x),
                    m,
                })
            }
        }
    }

    /// Smallest admissible scale before cancellation dominates.
    fn floor(&self) -> f64 {
        match self {
            Family::ExactRelu { .. } => 1e-18,
            Family::A2Tilde { .. } | Family::A2 { .. } => 1e-18,
            Family::A1kZero { .. } => eps_root(2),
            Family::A1kHigh { .. } => eps_root(2),
            Family::A3 { .. } => 2.0 * eps_root(2),
        }
    }

    /// Largest sensible starting scale; keeps kink constructions inside the
    /// registered smoothness interval.
    fn start_scale(&self, m: f64) -> f64 {
        match self {
            Family::A1kZero { kink, .. } | Family::A1kHigh { kink, .. } => {
                let c0 = 0.5 * (kink.x0 - kink.smooth_lo).min(kink.smooth_hi - kink.x0);
                (c0 / (2.0 * m)).min(1.0)
            }
            _ => 1.0,
        }
    }

    /// Inner step (eta) for the k >= 1 kink construction; everything else is
    /// single-scale.
    fn pick_aux(&self, scale: f64, tol: f64) -> f64 {
        match self {
            Family::A1kHigh { kink, m, .. } => {
                let k = kink.order;
                let c0 = 0.5 * (kink.x0 - kink.smooth_lo).min(kink.smooth_hi - kink.x0);
                let floor = 1.25 * eps_root(k + 2);
                let mut eta = (c0 / (k as f64 + 1.0)).min(1.0);
                let mut best = (f64::INFINITY, eta);
                while eta >= floor {
                    let err = self.grid_accept_error(scale, eta, *m);
                    if err <= tol {
                        return eta;
                    }
                    if err < best.0 {
                        best = (err, eta);
                    }
                    eta *= 0.5;
                }
                best.1
            }
            _ => 0.0,
        }
    }

    fn eval(&self, scale: f64, aux: f64, x: f64) -> f64 {
        match self {
            Family::ExactRelu { spec } => spec.eval(x),
            Family::A2Tilde { spec, norm } => {
                let t = spec.eval(norm.in_scale * (x / scale) + norm.in_shift);
                norm.sign * (t - norm.b1) * scale
            }
            Family::A2 {
                spec,
                b0,
                b1,
                l1,
                l2,
                m,
            } => {
                let psi = |t: f64| (spec.eval(t / scale - b0) - b1) * scale / (l2 - l1);
                psi(x) - psi(x - m) - l1 * m / (l2 - l1)
            }
            Family::A1kZero { spec, kink, m } => {
                let rho_x0 = spec.eval(kink.x0);
                let psi = |t: f64| (spec.eval(kink.x0 + scale * t) - rho_x0) / scale;
                (psi(x) - psi(x - m) - kink.l1 * m) / (kink.l2 - kink.l1)
            }
            Family::A1kHigh {
                spec,
                kink,
                slope,
                rho_k_x0,
                rho_x1,
                ..
            } => {
                let eta = aux;
                let k = kink.order;
                let span = kink.l2 - kink.l1;
                let h_eta = forward_kth(spec, k, kink.x0 + scale * x, eta);
                let g_eta = (spec.eval(slope.x + eta * x) - rho_x1) / (eta * slope.value);
                (h_eta - rho_k_x0) / (span * scale) - kink.l1 / span * g_eta
            }
            Family::A3 {
                spec,
                l1,
                l2,
                curv,
                slope,
                rho_x0,
                rho_x1,
                m,
            } => {
                let delta = scale;
                let eta = fmath::abs(aux).max(1.25 * eps_root(4));
                let u = (spec.eval(x / scale) - l1) / (l2 - l1);
                // Second product input rescaled to unit range; the output is
                // scaled back by m so the difference form multiplies numbers
                // of size O(1) instead of O(m).
                let v = (spec.eval(slope.x + delta * x) - rho_x1) / (delta * slope.value * m);
                let gamma = (spec.eval(curv.x + (eta * u + eta * v))
                    - spec.eval(curv.x + eta * v)
                    - spec.eval(curv.x + eta * u)
                    + rho_x0)
                    / (eta * eta * curv.value);
                m * gamma
            }
        }
    }

    /// Extra acceptance metric beyond the [-m, m] grid. The two-neuron
    /// constructions shift by exactly m, so their inner approximation is
    /// validated on the enlarged domain [-2m, 2m].
    fn extra_metric(&self, scale: f64, m: f64) -> f64 {
        match self {
            Family::A2 {
                spec,
                b0,
                b1,
                l1,
                l2,
                ..
            } => {
                let psi = |t: f64| (spec.eval(t / scale - b0) - b1) * scale / (l2 - l1);
                let lim = |t: f64| l1 * t / (l2 - l1) + relu(t);
                let mut sup = 0.0f64;
                for i in 0..GRID_POINTS {
                    let t = -2.0 * m + 4.0 * m * i as f64 / (GRID_POINTS - 1) as f64;
                    sup = sup.max(fmath::abs(psi(t) - lim(t)));
                }
                2.0 * sup
            }
            Family::A1kZero { spec, kink, .. } => {
                let rho_x0 = spec.eval(kink.x0);
                let span = kink.l2 - kink.l1;
                let mut sup = 0.0f64;
                for i in 0..GRID_POINTS {
                    let t = -2.0 * m + 4.0 * m * i as f64 / (GRID_POINTS - 1) as f64;
                    let psi = (spec.eval(kink.x0 + scale * t) - rho_x0) / scale;
                    let tau = if t < 0.0 { kink.l1 * t } else { kink.l2 * t };
                    sup = sup.max(fmath::abs((psi - tau) / span));
                }
                2.0 * sup
            }
            _ => 0.0,
        }
    }

    /// Sup of |phi - ReLU| over the uniform reporting grid on [-m, m].
    fn grid_report_error(&self, scale: f64, aux: f64, m: f64) -> f64 {
        let mut sup = 0.0f64;
        for i in 0..GRID_POINTS {
            let x = -m + 2.0 * m * i as f64 / (GRID_POINTS - 1) as f64;
            sup = sup.max(fmath::abs(self.eval(scale, aux, x) - relu(x)));
        }
        sup
    }

    /// Acceptance error: the reporting grid plus geometrically clustered
    /// points near the origin (where the single-neuron error concentrates at
    /// large K and a uniform grid under-samples) plus the family's extra
    /// metric.
    fn grid_accept_error(&self, scale: f64, aux: f64, m: f64) -> f64 {
        let mut sup = self.grid_report_error(scale, aux, m);
        let mut x = m;
        for _ in 0..128 {
            x *= core::f64::consts::FRAC_1_SQRT_2;
            sup = sup.max(fmath::abs(self.eval(scale, aux, x) - relu(x)));
            sup = sup.max(fmath::abs(self.eval(scale, aux, -x) - relu(-x)));
        }
        sup = sup.max(fmath::abs(self.eval(scale, aux, 0.0)));
        sup.max(self.extra_metric(scale, m))
    }

    /// Build the gadget network at the accepted scale.
    fn finish(&self, scale: f64, aux: f64, m: f64) -> Gadget {
        let net = self.build_net(scale, aux, m);
        Gadget {
            net,
            target: GadgetTarget::Relu,
            scale_param: scale,
            domain_half_width: m,
            reported_error: self.grid_report_error(scale, aux, m),
        }
    }

    fn build_net(&self, scale: f64, aux: f64, m: f64) -> Network {
        match self {
            Family::ExactRelu { .. } => Network {
                input_dim: 1,
                layers: vec![
                    Layer::new(vec![vec![1.0]], vec![0.0], ActivationTag::Relu),
                    Layer::new(vec![vec![1.0]], vec![0.0], ActivationTag::Identity),
                ],
            },
            Family::A2Tilde { spec, norm } => Network {
                input_dim: 1,
                layers: vec![
                    Layer::new(
                        vec![vec![norm.in_scale / scale]],
                        vec![norm.in_shift],
                        ActivationTag::Spec(spec.clone()),
                    ),
                    Layer::new(
                        vec![vec![norm.sign * scale]],
                        vec![-norm.sign * norm.b1 * scale],
                        ActivationTag::Identity,
                    ),
                ],
            },
            Family::A2 {
                spec, b0, l1, l2, ..
            } => {
                let c = scale / (l2 - l1);
                Network {
                    input_dim: 1,
                    layers: vec![
                        Layer::new(
                            vec![vec![1.0 / scale], vec![1.0 / scale]],
                            vec![-b0, -m / scale - b0],
                            ActivationTag::Spec(spec.clone()),
                        ),
                        Layer::new(
                            vec![vec![c, -c]],
                            vec![-l1 * m / (l2 - l1)],
                            ActivationTag::Identity,
                        ),
                    ],
                }
            }
            Family::A1kZero { spec, kink, .. } => {
                let c = 1.0 / (scale * (kink.l2 - kink.l1));
                Network {
                    input_dim: 1,
                    layers: vec![
                        Layer::new(
                            vec![vec![scale], vec![scale]],
                            vec![kink.x0, kink.x0 - scale * m],
                            ActivationTag::Spec(spec.clone()),
                        ),
                        Layer::new(
                            vec![vec![c, -c]],
                            vec![-kink.l1 * m / (kink.l2 - kink.l1)],
                            ActivationTag::Identity,
                        ),
                    ],
                }
            }
            Family::A1kHigh {
                spec,
                kink,
                slope,
                rho_k_x0,
                rho_x1,
                ..
            } => {
                let eta = aux;
                let k = kink.order;
                let span = kink.l2 - kink.l1;
                let denom = fmath::powf(-eta, k as f64);
                let mut w0 = Vec::new();
                let mut b0v = Vec::new();
                let mut w1 = Vec::new();
                for i in 0..=k {
                    w0.push(vec![scale]);
                    b0v.push(kink.x0 + i as f64 * eta);
                    let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                    w1.push(sign * binom_i128(k, i) as f64 / (denom * span * scale));
                }
                let c_id = 1.0 / (span * eta * slope.value);
                w0.push(vec![eta]);
                b0v.push(slope.x);
                w1.push(-kink.l1 * c_id);
                let bias = -rho_k_x0 / (span * scale) + kink.l1 * rho_x1 * c_id;
                Network {
                    input_dim: 1,
                    layers: vec![
                        Layer::new(w0, b0v, ActivationTag::Spec(spec.clone())),
                        Layer::new(vec![w1], vec![bias], ActivationTag::Identity),
                    ],
                }
            }
            Family::A3 {
                spec,
                l1,
                l2,
                curv,
                slope,
                rho_x0,
                rho_x1,
                m,
            } => {
                let delta = scale;
                let eta = fmath::abs(aux).max(1.25 * eps_root(4));
                let p = 1.0 / (l2 - l1);
                let q = -l1 * p;
                let r = 1.0 / (delta * slope.value * m);
                let s2 = -rho_x1 * r;
                let c = m / (eta * eta * curv.value);
                let tag = ActivationTag::Spec(spec.clone());
                Network {
                    input_dim: 1,
                    layers: vec![
                        Layer::new(
                            vec![vec![1.0 / scale], vec![delta]],
                            vec![0.0, slope.x],
                            tag.clone(),
                        ),
                        Layer::new(
                            vec![
                                vec![eta * p, eta * r],
                                vec![eta * p, 0.0],
                                vec![0.0, eta * r],
                            ],
                            vec![curv.x + eta * (q + s2), curv.x + eta * q, curv.x + eta * s2],
                            tag,
                        ),
                        Layer::new(
                            vec![vec![c, -c, -c]],
                            vec![c * rho_x0],
                            ActivationTag::Identity,
                        ),
                    ],
                }
            }
        }
    }
}

fn kth_derivative_at(spec: &ActivationSpec, k: u32, x0: f64) -> Result<f64, GadgetError> {
    match k {
        0 => Ok(spec.eval(x0)),
        1 | 2 => Ok(spec.derivative(k, x0)?.value),
        _ => Ok(super::central_kth(spec, k, x0, 16.0 * eps_root(k + 2))),
    }
}

fn forward_kth(spec: &ActivationSpec, k: u32, z: f64, eta: f64) -> f64 {
    let denom = fmath::powf(-eta, k as f64);
    let mut acc = 0.0;
    for i in 0..=k {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binom_i128(k, i) as f64 * spec.eval(z + i as f64 * eta);
    }
    acc / denom
}

#[inline]
fn relu(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        0.0
    }
}

fn calibrate(family: &Family, m: f64, tol: f64) -> Result<Gadget, GadgetError> {
    let floor = family.floor();
    let mut scale = family.start_scale(m);
    let assess = |s: f64| {
        let aux = family.pick_aux(s, tol);
        (family.grid_accept_error(s, aux, m), aux)
    };

    let (err, aux) = assess(scale);
    if err <= tol {
        return Ok(family.finish(scale, aux, m));
    }
    let mut best_err = err;
    let mut fail_scale = scale;
    for _ in 0..60 {
        if scale * 0.5 < floor {
            break;
        }
        scale *= 0.5;
        let (err, aux) = assess(scale);
        best_err = best_err.min(err);
        if err <= tol {
            // Bisect back toward the largest passing scale.
            let (mut lo, mut hi) = (scale, fail_scale);
            let mut chosen = (scale, aux);
            for _ in 0..20 {
                let mid = fmath::sqrt(lo * hi);
                let (e, a) = assess(mid);
                if e <= tol {
                    lo = mid;
                    chosen = (mid, a);
                } else {
                    hi = mid;
                }
            }
            return Ok(family.finish(chosen.0, chosen.1, m));
        }
        fail_scale = scale;
    }
    Err(GadgetError::CalibrationFailed {
        best_error: best_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::act::{builtin, classify};

    fn cls_of(name: &str) -> Classification {
        classify(&builtin(name, &[]).unwrap()).unwrap()
    }

    #[test]
    fn relu_source_degenerates_to_relu() {
        let cls = cls_of("relu");
        let g = relu_gadget(&cls, 5.0, 1e-12).unwrap();
        assert_eq!((g.width(), g.depth()), (1, 1));
        assert_eq!(g.reported_error, 0.0);
        for &x in &[-3.0, -0.1, 0.0, 0.7, 4.9] {
            assert_eq!(g.eval(x), relu(x));
        }
    }

    #[test]
    fn softplus_single_neuron_meets_tolerance() {
        let cls = cls_of("softplus");
        let g = relu_gadget(&cls, 5.0, 1e-2).unwrap();
        assert_eq!((g.width(), g.depth()), (1, 1));
        assert!(g.reported_error <= 1e-2);
        // Table-style bound: error <= ln2 / K, so K must be at least ~69.
        let k = 1.0 / g.scale_param;
        assert!((69.0..400.0).contains(&k), "K = {k}");
    }

    #[test]
    fn sigmoid_a3_gadget_is_width_three_depth_two() {
        let cls = cls_of("sigmoid");
        let g = relu_gadget(&cls, 3.0, 5e-2).unwrap();
        assert_eq!((g.width(), g.depth()), (3, 2));
        assert!(g.reported_error <= 5e-2);
    }

    #[test]
    fn relu2_uses_the_kink_construction() {
        let cls = cls_of("relu2");
        let g = relu_gadget(&cls, 4.0, 1e-3).unwrap();
        assert_eq!((g.width(), g.depth()), (3, 1));
        assert!(g.reported_error <= 1e-3);
    }

    #[test]
    fn leaky_relu_two_neuron_construction_is_exact() {
        let cls = cls_of("leaky_relu");
        let g = relu_gadget(&cls, 2.0, 1e-9).unwrap();
        assert_eq!((g.width(), g.depth()), (2, 1));
        assert!(g.reported_error <= 1e-9);
    }

    #[test]
    fn forced_a2_path_gives_width_two() {
        let cls = cls_of("x_softsign_shift");
        let g = relu_gadget_forced(&cls, 3.0, 1e-2, GadgetClass::A2).unwrap();
        assert_eq!((g.width(), g.depth()), (2, 1));
        assert!(g.reported_error <= 1e-2);
    }

    #[test]
    fn class_priority_prefers_the_single_neuron_for_elu() {
        // ELU is both A1k and A2~; the A2~ construction (width 1) must win.
        let cls = cls_of("elu");
        let g = relu_gadget(&cls, 4.0, 1e-2).unwrap();
        assert_eq!((g.width(), g.depth()), (1, 1));
    }

    #[test]
    fn fixed_scale_construction_matches_the_tail_bound() {
        let cls = cls_of("softplus");
        let g = relu_gadget_with_scale(&cls, 2.0, 0.1, None).unwrap();
        // error <= ln2 / K with K = 10
        assert!(g.reported_error <= core::f64::consts::LN_2 / 10.0 + 1e-12);
        assert!(g.reported_error > 0.05);
    }

    #[test]
    fn unreachable_tolerance_reports_calibration_failure() {
        let cls = cls_of("sigmoid");
        let err = relu_gadget_forced(&cls, 3.0, 1e-14, GadgetClass::A3).unwrap_err();
        match err {
            GadgetError::CalibrationFailed { best_error } => {
                assert!(best_error.is_finite() && best_error > 1e-14);
            }
            other => panic!("expected CalibrationFailed, got {other:?}"),
        }
    }

    #[test]
    fn gadget_error_shrinks_as_scale_halves() {
        // Monotone convergence up to a 10% float-floor allowance.
        for (name, class) in [
            ("softplus", None),
            ("silu", None),
            ("x_softsign_shift", Some(GadgetClass::A2)),
            ("sigmoid", Some(GadgetClass::A3)),
        ] {
            let cls = cls_of(name);
            let mut scale = 0.5;
            let mut prev = f64::INFINITY;
            for _ in 0..6 {
                let g = relu_gadget_with_scale(&cls, 3.0, scale, class).unwrap();
                assert!(
                    g.reported_error <= prev * 1.10,
                    "{name}: error {} after {prev} at scale {scale}",
                    g.reported_error
                );
                prev = g.reported_error;
                scale *= 0.5;
            }
        }
    }
}
