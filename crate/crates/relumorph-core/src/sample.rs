//! Deterministic sampling of the evaluation box and the sampled sup-norm
//! distance between networks.
//!
//! The sampler draws three point families: a rank-1 low-discrepancy lattice,
//! the box corners, and seeded uniform random points. Everything is a pure
//! function of `(box, n_samples, seed)`, so reports reproduce exactly.

use crate::error::NetError;
use crate::fmath;
use crate::net::{eval_network, InputBox, Network};
use crate::util::{fract, SplitMix64};
use alloc::vec;

/// Iterator-style generator over the sample families for one box.
#[derive(Debug, Clone)]
pub struct BoxSampler {
    pub boxed: InputBox,
    pub n_samples: usize,
    pub seed: u64,
}

impl BoxSampler {
    pub fn new(boxed: InputBox, n_samples: usize, seed: u64) -> Self {
        BoxSampler {
            boxed,
            n_samples,
            seed,
        }
    }

    /// Total number of points the sampler visits.
    pub fn len(&self) -> usize {
        2 * self.n_samples + self.corner_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn corner_count(&self) -> usize {
        1usize << self.boxed.dim.min(10)
    }

    /// Visit every sample point, reusing one scratch buffer.
    pub fn for_each(&self, mut visit: impl FnMut(&[f64])) {
        let d = self.boxed.dim;
        let a = self.boxed.half_width;
        let mut x = vec![0.0; d];

        // Rank-1 Kronecker lattice driven by the generalized golden ratio:
        // phi_d is the positive root of t^(d+1) = t + 1 and the per-axis
        // increments are phi_d^-(j+1).
        let phi = generalized_golden(d);
        let mut alphas = vec![0.0; d];
        let mut p = 1.0;
        for alpha in alphas.iter_mut() {
            p /= phi;
            *alpha = p;
        }
        for i in 0..self.n_samples {
            for (xj, alpha) in x.iter_mut().zip(alphas.iter()) {
                let u = fract(0.5 + (i as f64 + 1.0) * alpha);
                *xj = (2.0 * u - 1.0) * a;
            }
            visit(&x);
        }

        // Box corners; for d > 10 the first 10 axes vary and the rest sit at +a.
        let vary = d.min(10);
        for mask in 0..(1usize << vary) {
            for (j, xj) in x.iter_mut().enumerate() {
                *xj = if j < vary && (mask >> j) & 1 == 1 {
                    -a
                } else {
                    a
                };
            }
            visit(&x);
        }

        // Seeded uniform random points.
        let mut rng = SplitMix64::new(self.seed);
        for _ in 0..self.n_samples {
            for xj in x.iter_mut() {
                *xj = rng.next_in_box(a);
            }
            visit(&x);
        }
    }
}

fn generalized_golden(d: usize) -> f64 {
    // Newton iteration on t^(d+1) - t - 1 = 0 starting from 2.
    let p = (d + 1) as i32;
    let mut t: f64 = 2.0;
    for _ in 0..64 {
        let tp = fmath::powf(t, (p - 1) as f64);
        let f = tp * t - t - 1.0;
        let fp = p as f64 * tp - 1.0;
        let next = t - f / fp;
        if next == t {
            break;
        }
        t = next;
    }
    t
}

/// Sampled sup-norm distance between two networks on a box.
///
/// Returns the maximum over all sample points of the largest absolute
/// component difference. This is a lower estimate of the true sup distance;
/// callers must label the value "sampled".
pub fn sup_distance(
    a: &Network,
    b: &Network,
    boxed: &InputBox,
    n_samples: usize,
    seed: u64,
) -> Result<f64, NetError> {
    if boxed.half_width <= 0.0 || !boxed.half_width.is_finite() || boxed.dim == 0 {
        return Err(NetError::InvalidBox);
    }
    if a.input_dim != b.input_dim || a.output_dim() != b.output_dim() || a.input_dim != boxed.dim {
        return Err(NetError::ShapeMismatch);
    }
    let sampler = BoxSampler::new(*boxed, n_samples, seed);
    let mut worst = 0.0f64;
    sampler.for_each(|x| {
        let ya = eval_network(a, x).expect("validated dims");
        let yb = eval_network(b, x).expect("validated dims");
        for (u, v) in ya.iter().zip(yb.iter()) {
            let diff = fmath::abs(u - v);
            if diff > worst {
                worst = diff;
            }
        }
    });
    Ok(worst)
}
