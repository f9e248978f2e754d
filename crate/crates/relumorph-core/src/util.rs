//! Small numeric helpers shared across modules.

use crate::fmath;

/// Golden-section maximization of `f` on `[a, b]`.
///
/// Runs a fixed number of iterations so results are deterministic; 96
/// iterations shrink the bracket by ~1e-20 relative to `b - a`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..96 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Maximize `f` over a uniform grid on `[lo, hi]`, then refine the best cell
/// with golden-section search. Returns `(argmax, max)`.
pub fn grid_then_golden_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> (f64, f64) {
    debug_assert!(n >= 2);
    let step = (hi - lo) / (n - 1) as f64;
    let mut best_i = 0usize;
    let mut best = f64::NEG_INFINITY;
    for i in 0..n {
        let x = lo + step * i as f64;
        let v = f(x);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let a = lo + step * best_i.saturating_sub(1) as f64;
    let b = lo + step * (best_i + 1).min(n - 1) as f64;
    let (x, v) = golden_section_max(&f, a, b);
    if v > best {
        (x, v)
    } else {
        (lo + step * best_i as f64, best)
    }
}

/// SplitMix64: tiny deterministic PRNG. Used for the seed-driven random
/// sample points so reports reproduce bit-for-bit across platforms.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [-half_width, half_width].
    pub fn next_in_box(&mut self, half_width: f64) -> f64 {
        (2.0 * self.next_f64() - 1.0) * half_width
    }
}

/// Fractional part in [0, 1).
#[inline]
pub fn fract(x: f64) -> f64 {
    x - fmath::floor(x)
}

/// Machine epsilon raised to `1/p`, the usual cancellation-floor scale for
/// p-th-order difference quotients.
#[inline]
pub fn eps_root(p: u32) -> f64 {
    fmath::powf(f64::EPSILON, 1.0 / p as f64)
}
