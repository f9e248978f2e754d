//! Single-neuron gap constants: the extrema of `y (1_{y>0} - h_hat(y))`,
//! which bound the one-neuron ReLU approximation error `ReLU(x) - phi_K(x)`
//! to `[m / K, M_sup / K]`.

use crate::act::{gap_tail_limits, s_shape_normalize, Classification};
use crate::error::{ActError, GadgetError};
use crate::util::golden_section_max;

/// Extrema of the gap function for one activation's normalized decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapConstants {
    /// Infimum of the gap function.
    pub m: f64,
    /// Supremum of the gap function.
    pub m_sup: f64,
    /// False when the tails beyond the search grid carry no registered
    /// analytic bound (user-defined activations).
    pub tail_verified: bool,
}

const GRID_HALF_WIDTH: f64 = 200.0;
const GRID_STEP: f64 = 1e-3;

/// Numerically extremize the gap function over a dense grid on [-200, 200]
/// (step 1e-3) with golden-section refinement around the best cells; the
/// registered analytic tail limits of the built-ins are folded in, and user
/// specs come back flagged `tail_verified = false` instead.
pub fn estimate_gap_constants(cls: &Classification) -> Result<GapConstants, GadgetError> {
    let norm = s_shape_normalize(cls).map_err(|e| match e {
        ActError::NoDecomposition => GadgetError::NotA2Tilde,
        other => GadgetError::Act(other),
    })?;
    let h = norm.h_hat.clone();
    let gap = move |y: f64| {
        let step = if y > 0.0 { 1.0 } else { 0.0 };
        y * (step - h(y))
    };

    let n = (2.0 * GRID_HALF_WIDTH / GRID_STEP) as usize; // 400_000 intervals
    let mut max_v = f64::NEG_INFINITY;
    let mut max_i = 0usize;
    let mut min_v = f64::INFINITY;
    let mut min_i = 0usize;
    for i in 0..=n {
        let y = (i as f64 - (n / 2) as f64) * GRID_STEP;
        let v = gap(y);
        if v > max_v {
            max_v = v;
            max_i = i;
        }
        if v < min_v {
            min_v = v;
            min_i = i;
        }
    }
    let at = |i: usize| (i as f64 - (n / 2) as f64) * GRID_STEP;
    let refine = |i: usize, sign: f64| {
        let lo = at(i.saturating_sub(1));
        let hi = at((i + 1).min(n));
        let (_, v) = golden_section_max(|y| sign * gap(y), lo, hi);
        sign * v
    };
    max_v = max_v.max(refine(max_i, 1.0));
    min_v = min_v.min(refine(min_i, -1.0));

    match gap_tail_limits(&cls.spec) {
        Some((tail_neg, tail_pos)) => Ok(GapConstants {
            m: min_v.min(tail_neg).min(tail_pos),
            m_sup: max_v.max(tail_neg).max(tail_pos),
            tail_verified: true,
        }),
        None => {
            // No analytic tail: refuse if the extremum sits at the boundary
            // and the gap is still moving outward there.
            let growing_max = (max_i == 0 || max_i == n)
                && gap(at(max_i)).abs() > gap(at(if max_i == 0 { 1 } else { n - 1 })).abs();
            let growing_min = (min_i == 0 || min_i == n)
                && gap(at(min_i)).abs() > gap(at(if min_i == 0 { 1 } else { n - 1 })).abs();
            if growing_max || growing_min {
                return Err(GadgetError::Unbounded);
            }
            Ok(GapConstants {
                m: min_v,
                m_sup: max_v,
                tail_verified: false,
            })
        }
    }
}
