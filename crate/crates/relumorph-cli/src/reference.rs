//! Reference values for the single-neuron gap constants of the standard
//! one-sided activations, used by the `constants` command to grade the
//! numeric estimator. Values with closed forms are exact; the others carry
//! three significant digits, which is why the comparison gate is 1e-3.

use relumorph_core::act::{ActKind, ActivationSpec};
use std::f64::consts::{FRAC_1_PI, LN_2};

/// Reference `(m, M_sup)` for an activation, scaled by its parameters where
/// the reference row says so. `None` when no reference exists for this
/// activation/parameter combination.
pub fn paper_reference(spec: &ActivationSpec) -> Option<(f64, f64)> {
    match spec.kind() {
        ActKind::Elu { alpha } if *alpha > 0.0 => Some((0.0, *alpha)),
        ActKind::Celu { alpha } => Some((0.0, *alpha)),
        ActKind::Softplus => Some((0.0, LN_2)),
        ActKind::Gelu { mu, sigma } if *mu == 0.0 => Some((0.0, 0.170 * sigma)),
        ActKind::Silu => Some((0.0, 0.278)),
        ActKind::Swish { beta } => Some((0.0, 0.278 / beta)),
        ActKind::Mish => Some((0.0, 0.309)),
        ActKind::XDsilu => Some((-0.265, 0.131)),
        ActKind::XSoftsignShift => Some((0.0, 0.5)),
        ActKind::XArctanShift => Some((0.0, FRAC_1_PI)),
        _ => None,
    }
}

/// The activations the `constants` command grades by default.
pub fn default_constant_rows() -> [&'static str; 10] {
    [
        "elu",
        "celu",
        "softplus",
        "gelu",
        "silu",
        "swish",
        "mish",
        "x_dsilu",
        "x_softsign_shift",
        "x_arctan_shift",
    ]
}
