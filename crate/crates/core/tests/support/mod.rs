//! Shared oracle helpers for the integration suites. Everything here
//! recomputes results from first principles, independent of the library's
//! own solver paths.

#![allow(dead_code)]

/// Plain Bernoulli KL divergence, written out directly.
pub fn bernoulli_kl(p: f64, q: f64) -> f64 {
    let mut total = 0.0;
    for (a, b) in [(p, q), (1.0 - p, 1.0 - q)] {
        if a > 0.0 {
            if b <= 0.0 {
                return f64::INFINITY;
            }
            total += a * (a / b).ln();
        }
    }
    total
}

/// The two-member capacity objective at weight `w` on `lo`.
pub fn binary_objective(w: f64, lo: f64, hi: f64) -> f64 {
    let m = w * lo + (1.0 - w) * hi;
    w * bernoulli_kl(lo, m) + (1.0 - w) * bernoulli_kl(hi, m)
}

/// Exhaustive grid maximization of the two-member objective over the
/// weight in [0, 1] at the given step.
pub fn binary_weight_oracle(lo: f64, hi: f64, step: f64) -> (f64, f64) {
    let n = (1.0 / step).round() as usize;
    let mut best_w = 0.0;
    let mut best_val = f64::NEG_INFINITY;
    for k in 0..=n {
        let w = k as f64 / n as f64;
        let v = binary_objective(w, lo, hi);
        if v > best_val {
            best_val = v;
            best_w = w;
        }
    }
    (best_w, best_val)
}

/// Direct numeric minimax: the Bernoulli parameter q minimizing the worst
/// divergence from the given family, by coarse grid plus local
/// refinement. The max of convex functions is convex in q, so zooming is
/// sound.
pub fn binary_minimax_oracle(probs: &[f64]) -> (f64, f64) {
    let worst = |q: f64| -> f64 {
        probs
            .iter()
            .map(|&p| bernoulli_kl(p, q))
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut best_q = 0.5;
    let mut best_val = f64::INFINITY;
    let mut step: f64 = 1e-3;
    loop {
        let n = ((hi - lo) / step).round() as usize;
        for k in 0..=n {
            let q = lo + k as f64 * step;
            let v = worst(q);
            if v < best_val {
                best_val = v;
                best_q = q;
            }
        }
        if step <= 1e-7 {
            break;
        }
        lo = (best_q - 3.0 * step).max(0.0);
        hi = (best_q + 3.0 * step).min(1.0);
        step /= 10.0;
    }
    (best_q, best_val)
}

/// Simple deterministic generator (xorshift-style splitmix64) so the
/// suites do not depend on the library's RNG choices.
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    pub fn index(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// Distinct Bernoulli parameters in [0.02, 0.98] separated by at least
/// `min_gap`, rejection-sampled.
pub fn distinct_bernoulli_params(rng: &mut SplitMix64, count: usize, min_gap: f64) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(count);
    while out.len() < count {
        let candidate = rng.uniform(0.02, 0.98);
        if out.iter().all(|&p| (p - candidate).abs() >= min_gap) {
            out.push(candidate);
        }
    }
    out
}
