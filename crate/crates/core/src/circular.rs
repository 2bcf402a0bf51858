//! Discretized probability distributions on the circle.
//!
//! Phases live on the half-open interval `(-pi, pi]`. A [`CircularDistribution`]
//! holds non-negative weights over `n_bins` equal arcs; bin `i` is centered at
//! `-pi + (i + 1/2) * (2*pi/n_bins)`. Convolution kernels reuse the same weight
//! vector but index bins by *offset*: kernel bin `d` carries the probability of
//! a jump by `d` bins, i.e. a signed angle of `d * 2*pi/n_bins` reduced to the
//! principal interval.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use rustfft::{num_complex::Complex, Fft, FftPlanner};
use thiserror::Error;

/// Smallest grid the library accepts.
pub const MIN_BINS: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircularError {
    #[error("phase must be finite, got {0}")]
    NonFinitePhase(f64),
    #[error("distribution needs at least {MIN_BINS} bins, got {0}")]
    TooFewBins(usize),
    #[error("kernel variance must be positive and finite, got {0}")]
    NonPositiveVariance(f64),
    #[error("bin counts differ: {0} vs {1}")]
    BinCountMismatch(usize, usize),
    #[error("bin index {index} out of range for {n_bins} bins")]
    BinOutOfRange { index: usize, n_bins: usize },
    #[error("weights must be finite and non-negative")]
    InvalidWeights,
    #[error("weights sum to zero; cannot normalize")]
    ZeroMass,
}

/// An angle in radians, kept in `(-pi, pi]` by construction.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Phase(f64);

impl Phase {
    pub const ZERO: Phase = Phase(0.0);

    /// Raw radians in `(-pi, pi]`.
    pub fn radians(self) -> f64 {
        self.0
    }

    /// Adds `delta` radians and rewraps. `delta` must be finite.
    pub fn offset_by(self, delta: f64) -> Phase {
        debug_assert!(delta.is_finite());
        Phase(wrap_radians(self.0 + delta))
    }

    /// Signed circular difference `self - other`, rewrapped.
    pub fn difference(self, other: Phase) -> Phase {
        Phase(wrap_radians(self.0 - other.0))
    }

    /// Shortest arc length to `other`, in `[0, pi]`.
    pub fn distance(self, other: Phase) -> f64 {
        self.difference(other).0.abs()
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Reduces any real angle to `(-pi, pi]`. Fallible only on non-finite input.
pub fn wrap_phase(radians: f64) -> Result<Phase, CircularError> {
    if !radians.is_finite() {
        return Err(CircularError::NonFinitePhase(radians));
    }
    Ok(Phase(wrap_radians(radians)))
}

/// In-range values pass through unchanged so rewrapping is bit-stable.
fn wrap_radians(x: f64) -> f64 {
    if x > -PI && x <= PI {
        return x;
    }
    let r = x.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Pairwise summation; error grows like log2(n) rather than n.
fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 8 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Summation whose result depends only on the multiset of values, so that
/// rotated weight vectors normalize through the exact same divisor.
fn order_invariant_sum(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.iter().sum()
}

/// Probability weights over a circular grid. Normalized to unit mass by every
/// constructor and operation.
#[derive(Clone, Debug, PartialEq)]
pub struct CircularDistribution {
    weights: Vec<f64>,
}

impl CircularDistribution {
    /// Uniform distribution, the no-knowledge prior.
    pub fn uniform(n_bins: usize) -> Result<Self, CircularError> {
        if n_bins < MIN_BINS {
            return Err(CircularError::TooFewBins(n_bins));
        }
        Ok(Self {
            weights: vec![1.0 / n_bins as f64; n_bins],
        })
    }

    /// Point mass on one bin.
    pub fn delta(n_bins: usize, bin: usize) -> Result<Self, CircularError> {
        if n_bins < MIN_BINS {
            return Err(CircularError::TooFewBins(n_bins));
        }
        if bin >= n_bins {
            return Err(CircularError::BinOutOfRange { index: bin, n_bins });
        }
        let mut weights = vec![0.0; n_bins];
        weights[bin] = 1.0;
        Ok(Self { weights })
    }

    /// Wrapped Gaussian step kernel with the given variance (rad^2).
    ///
    /// Bin `d` is the signed offset `d * 2*pi/n_bins` reduced to the principal
    /// interval; its weight is proportional to the Gaussian density summed over
    /// enough `2*pi` translates that the truncated tail mass is below 1e-15.
    /// A zero-variance (identity) kernel is deliberately rejected; callers
    /// model the no-diffusion case by skipping the convolution.
    pub fn wrapped_gaussian_kernel(n_bins: usize, variance: f64) -> Result<Self, CircularError> {
        if n_bins < MIN_BINS {
            return Err(CircularError::TooFewBins(n_bins));
        }
        if !variance.is_finite() || variance <= 0.0 {
            return Err(CircularError::NonPositiveVariance(variance));
        }
        let wraps = wrap_count(variance.sqrt()) as i64;
        let delta = TAU / n_bins as f64;
        let inv_two_var = 1.0 / (2.0 * variance);
        let mut weights = vec![0.0; n_bins];
        for (d, w) in weights.iter_mut().enumerate() {
            let signed = if d <= n_bins / 2 {
                d as f64
            } else {
                d as f64 - n_bins as f64
            };
            let center = signed * delta;
            let mut acc = 0.0;
            for m in -wraps..=wraps {
                let x = center + TAU * m as f64;
                acc += (-x * x * inv_two_var).exp();
            }
            *w = acc;
        }
        let mut dist = Self { weights };
        dist.normalize()?;
        Ok(dist)
    }

    /// Builds a distribution from raw non-negative weights, normalizing them.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self, CircularError> {
        if weights.len() < MIN_BINS {
            return Err(CircularError::TooFewBins(weights.len()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(CircularError::InvalidWeights);
        }
        let mut dist = Self { weights };
        dist.normalize()?;
        Ok(dist)
    }

    pub fn n_bins(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, bin: usize) -> f64 {
        self.weights[bin]
    }

    pub(crate) fn weights_mut(&mut self) -> &mut [f64] {
        &mut self.weights
    }

    /// Arc width of one bin, `2*pi / n_bins`.
    pub fn bin_width(&self) -> f64 {
        TAU / self.n_bins() as f64
    }

    /// Center phase of bin `i`: `-pi + (i + 1/2) * bin_width`.
    pub fn bin_center(&self, bin: usize) -> Phase {
        debug_assert!(bin < self.n_bins());
        Phase(-PI + (bin as f64 + 0.5) * self.bin_width())
    }

    /// `(bin_center, weight)` pairs in bin order, for snapshot export.
    pub fn pairs(&self) -> impl Iterator<Item = (Phase, f64)> + '_ {
        (0..self.n_bins()).map(move |i| (self.bin_center(i), self.weights[i]))
    }

    /// Copy rotated forward by `offset` bins: `out[(i + offset) % n] = self[i]`.
    pub fn rotated(&self, offset: usize) -> Self {
        let n = self.n_bins();
        let mut weights = vec![0.0; n];
        for (i, &w) in self.weights.iter().enumerate() {
            weights[(i + offset) % n] = w;
        }
        Self { weights }
    }

    /// Rescales to unit mass. Errors if the total mass is zero or not finite.
    pub fn normalize(&mut self) -> Result<(), CircularError> {
        let total = pairwise_sum(&self.weights);
        if !total.is_finite() || total <= 0.0 {
            return Err(CircularError::ZeroMass);
        }
        let inv = 1.0 / total;
        for w in &mut self.weights {
            *w *= inv;
        }
        Ok(())
    }

    fn normalize_order_invariant(&mut self) -> Result<(), CircularError> {
        let total = order_invariant_sum(&self.weights);
        if !total.is_finite() || total <= 0.0 {
            return Err(CircularError::ZeroMass);
        }
        let inv = 1.0 / total;
        for w in &mut self.weights {
            *w *= inv;
        }
        Ok(())
    }
}

/// Extra `2*pi` translates needed so the omitted Gaussian tail mass stays
/// below 1e-15: erfc(x/sqrt(2)) < 1e-15 once x >= 8.4, so it suffices that
/// `(2M+1)*pi >= 8.4*sigma`.
fn wrap_count(sigma: f64) -> usize {
    let needed = 8.4 * sigma / PI;
    if needed <= 1.0 {
        0
    } else {
        ((needed - 1.0) / 2.0).ceil() as usize
    }
}

/// Exact circular convolution: `out[i] = sum_j dist[j] * kernel[(i - j) mod n]`.
///
/// Accumulation runs in kernel-offset order for every output bin, which makes
/// the result bit-exactly equivariant under rotations of `dist`.
pub fn circular_convolve(
    dist: &CircularDistribution,
    kernel: &CircularDistribution,
) -> Result<CircularDistribution, CircularError> {
    if dist.n_bins() != kernel.n_bins() {
        return Err(CircularError::BinCountMismatch(
            dist.n_bins(),
            kernel.n_bins(),
        ));
    }
    let n = dist.n_bins();
    let d_w = dist.weights();
    let mut out = vec![0.0; n];
    for (off, &k) in kernel.weights().iter().enumerate() {
        // out[i] += k * dist[(i - off) mod n], split at the wrap point.
        let (head, tail) = out.split_at_mut(off);
        for (o, &d) in tail.iter_mut().zip(&d_w[..n - off]) {
            *o += k * d;
        }
        for (o, &d) in head.iter_mut().zip(&d_w[n - off..]) {
            *o += k * d;
        }
    }
    let mut result = CircularDistribution { weights: out };
    result.normalize_order_invariant()?;
    Ok(result)
}

/// Center phase of the heaviest bin; ties go to the lowest bin index.
pub fn argmax_phase(dist: &CircularDistribution) -> Phase {
    dist.bin_center(argmax_bin(dist))
}

/// Index of the heaviest bin; ties go to the lowest index.
pub fn argmax_bin(dist: &CircularDistribution) -> usize {
    let mut best = 0;
    let mut best_w = dist.weights[0];
    for (i, &w) in dist.weights.iter().enumerate().skip(1) {
        if w > best_w {
            best = i;
            best_w = w;
        }
    }
    best
}

/// FFT-backed circular convolution against a fixed kernel.
///
/// Agrees with [`circular_convolve`] to well below 1e-10 per bin and runs in
/// `O(n log n)`; the recursive filter uses it for its per-slot predict step.
#[derive(Clone)]
pub struct CircularConvolver {
    n_bins: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    kernel_spectrum: Vec<Complex<f64>>,
}

impl CircularConvolver {
    pub fn new(kernel: &CircularDistribution) -> Self {
        let n = kernel.n_bins();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let mut spectrum: Vec<Complex<f64>> = kernel
            .weights()
            .iter()
            .map(|&w| Complex::new(w, 0.0))
            .collect();
        forward.process(&mut spectrum);
        Self {
            n_bins: n,
            forward,
            inverse,
            kernel_spectrum: spectrum,
        }
    }

    pub fn n_bins(&self) -> usize {
        self.n_bins
    }

    pub fn convolve(
        &self,
        dist: &CircularDistribution,
    ) -> Result<CircularDistribution, CircularError> {
        if dist.n_bins() != self.n_bins {
            return Err(CircularError::BinCountMismatch(dist.n_bins(), self.n_bins));
        }
        let mut buf: Vec<Complex<f64>> = dist
            .weights()
            .iter()
            .map(|&w| Complex::new(w, 0.0))
            .collect();
        self.forward.process(&mut buf);
        for (b, k) in buf.iter_mut().zip(&self.kernel_spectrum) {
            *b *= *k;
        }
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.n_bins as f64;
        // Round-trip rounding can leave tiny negatives; clamp before renormalizing.
        let weights: Vec<f64> = buf.iter().map(|c| (c.re * scale).max(0.0)).collect();
        let mut out = CircularDistribution { weights };
        out.normalize()?;
        Ok(out)
    }
}

impl fmt::Debug for CircularConvolver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CircularConvolver")
            .field("n_bins", &self.n_bins)
            .finish_non_exhaustive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_dist(n: usize, seed: u64) -> CircularDistribution {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-6).collect();
        CircularDistribution::from_weights(weights).unwrap()
    }

    /// Straight transcription of the convolution formula, summed in `j` order.
    fn naive_convolve(a: &CircularDistribution, b: &CircularDistribution) -> Vec<f64> {
        let n = a.n_bins();
        let mut out = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                out[i] += a.weight(j) * b.weight((i + n - j) % n);
            }
        }
        let total: f64 = out.iter().sum();
        out.iter().map(|w| w / total).collect()
    }

    #[test]
    fn wrap_folds_three_half_pi_to_negative_half_pi() {
        let p = wrap_phase(1.5 * PI).unwrap();
        assert!((p.radians() + PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn wrap_keeps_pi_and_maps_negative_pi_to_pi() {
        assert_eq!(wrap_phase(PI).unwrap().radians(), PI);
        assert_eq!(wrap_phase(-PI).unwrap().radians(), PI);
    }

    #[test]
    fn wrap_rejects_non_finite() {
        assert!(wrap_phase(f64::NAN).is_err());
        assert!(wrap_phase(f64::INFINITY).is_err());
    }

    #[test]
    fn wrap_is_identity_inside_the_interval() {
        for &x in &[0.0, 1.0, -3.0, PI, -PI + 1e-12, 2.5] {
            assert_eq!(wrap_phase(x).unwrap().radians(), x);
        }
    }

    #[test]
    fn uniform_splits_mass_evenly() {
        let d8 = CircularDistribution::uniform(8).unwrap();
        assert!(d8.weights().iter().all(|&w| w == 0.125));
        let d1024 = CircularDistribution::uniform(1024).unwrap();
        assert!(d1024.weights().iter().all(|&w| w == 1.0 / 1024.0));
        let total: f64 = d1024.weights().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_rejects_small_grids() {
        assert_eq!(
            CircularDistribution::uniform(7),
            Err(CircularError::TooFewBins(7))
        );
    }

    #[test]
    fn kernel_rejects_bad_variance() {
        assert!(matches!(
            CircularDistribution::wrapped_gaussian_kernel(64, 0.0),
            Err(CircularError::NonPositiveVariance(_))
        ));
        assert!(matches!(
            CircularDistribution::wrapped_gaussian_kernel(64, -1.0),
            Err(CircularError::NonPositiveVariance(_))
        ));
    }

    /// Independent quadrature oracle: integrate the normal density over each
    /// bin arc with Simpson's rule, then normalize over the circle.
    fn quadrature_kernel(n: usize, variance: f64) -> Vec<f64> {
        let delta = TAU / n as f64;
        let density = |x: f64| (-x * x / (2.0 * variance)).exp();
        let mut masses = vec![0.0; n];
        for (d, m) in masses.iter_mut().enumerate() {
            let signed = if d <= n / 2 {
                d as f64
            } else {
                d as f64 - n as f64
            };
            let lo = signed * delta - delta / 2.0;
            let steps = 64;
            let h = delta / steps as f64;
            let mut acc = density(lo) + density(lo + delta);
            for k in 1..steps {
                let w = if k % 2 == 1 { 4.0 } else { 2.0 };
                acc += w * density(lo + k as f64 * h);
            }
            *m = acc * h / 3.0;
        }
        let total: f64 = masses.iter().sum();
        masses.iter().map(|m| m / total).collect()
    }

    #[test]
    fn kernel_matches_quadrature_oracle_at_working_scale() {
        // variance = 2*D*dt with D = 0.05, dt = 0.01
        let variance = 0.001;
        let n = 1024;
        let kernel = CircularDistribution::wrapped_gaussian_kernel(n, variance).unwrap();
        let oracle = quadrature_kernel(n, variance);
        for (d, (&w, &o)) in kernel.weights().iter().zip(&oracle).enumerate() {
            assert!(
                (w - o).abs() < 5e-4,
                "bin {d}: point-sampled {w} vs integrated {o}"
            );
        }

        // Aggregate shape: std ~ sigma and ~99.7% of mass within 3 sigma.
        let sigma = variance.sqrt();
        let delta = kernel.bin_width();
        let mut second_moment = 0.0;
        let mut mass_3_sigma = 0.0;
        for (d, &w) in kernel.weights().iter().enumerate() {
            let signed = if d <= n / 2 {
                d as f64
            } else {
                d as f64 - n as f64
            };
            let c = signed * delta;
            second_moment += w * c * c;
            if c.abs() <= 3.0 * sigma {
                mass_3_sigma += w;
            }
        }
        assert!((second_moment.sqrt() - sigma).abs() < 1e-3 * sigma.max(1.0));
        assert!((mass_3_sigma - 0.9973).abs() < 3e-3);
    }

    /// Fourier-series oracle for the wrapped normal: density proportional to
    /// 1 + 2 * sum_k exp(-k^2 v / 2) cos(k theta). Independent of the
    /// translate-sum construction.
    #[test]
    fn kernel_matches_fourier_series_oracle() {
        let n = 64;
        let variance = 1.0;
        let kernel = CircularDistribution::wrapped_gaussian_kernel(n, variance).unwrap();
        let delta = TAU / n as f64;
        for d in 0..n {
            let signed = if d <= n / 2 {
                d as f64
            } else {
                d as f64 - n as f64
            };
            let theta = signed * delta;
            let mut series = 1.0;
            let mut k = 1.0;
            loop {
                let amp = (-k * k * variance / 2.0).exp();
                if amp < 1e-18 {
                    break;
                }
                series += 2.0 * amp * (k * theta).cos();
                k += 1.0;
            }
            let expected = series / n as f64;
            assert!(
                (kernel.weight(d) - expected).abs() < 1e-13,
                "bin {d}: {} vs {expected}",
                kernel.weight(d)
            );
        }
    }

    #[test]
    fn huge_variance_kernel_is_uniform() {
        let n = 1024;
        let kernel = CircularDistribution::wrapped_gaussian_kernel(n, 100.0).unwrap();
        for &w in kernel.weights() {
            assert!((w - 1.0 / n as f64).abs() < 1e-6);
        }
    }

    #[test]
    fn kernel_sums_to_one_and_is_symmetric() {
        for &variance in &[1e-6, 0.001, 0.1, 3.0, 100.0] {
            let kernel = CircularDistribution::wrapped_gaussian_kernel(128, variance).unwrap();
            let total: f64 = kernel.weights().iter().sum();
            assert!((total - 1.0).abs() < 1e-12, "variance {variance}");
            for d in 1..128 {
                assert!(
                    (kernel.weight(d) - kernel.weight(128 - d)).abs() < 1e-12,
                    "variance {variance}, bin {d}"
                );
            }
        }
    }

    #[test]
    fn convolve_with_uniform_is_uniform() {
        let n = 64;
        let uniform = CircularDistribution::uniform(n).unwrap();
        let kernel = CircularDistribution::wrapped_gaussian_kernel(n, 0.01).unwrap();
        let out = circular_convolve(&uniform, &kernel).unwrap();
        for &w in out.weights() {
            assert!((w - 1.0 / n as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn convolve_delta_recenters_the_kernel() {
        let n = 64;
        let j = 17;
        let delta = CircularDistribution::delta(n, j).unwrap();
        let kernel = CircularDistribution::wrapped_gaussian_kernel(n, 0.05).unwrap();
        let out = circular_convolve(&delta, &kernel).unwrap();
        let rotated = kernel.rotated(j);
        for i in 0..n {
            assert!((out.weight(i) - rotated.weight(i)).abs() < 1e-15);
        }
    }

    #[test]
    fn convolve_matches_naive_double_loop() {
        let a = random_dist(64, 11);
        let b = random_dist(64, 23);
        let out = circular_convolve(&a, &b).unwrap();
        let oracle = naive_convolve(&a, &b);
        for i in 0..64 {
            assert!((out.weight(i) - oracle[i]).abs() < 1e-10, "bin {i}");
        }
    }

    #[test]
    fn convolve_rejects_mismatched_grids() {
        let a = CircularDistribution::uniform(32).unwrap();
        let b = CircularDistribution::uniform(64).unwrap();
        assert_eq!(
            circular_convolve(&a, &b),
            Err(CircularError::BinCountMismatch(32, 64))
        );
    }

    #[test]
    fn convolve_is_shift_equivariant_bit_exactly() {
        let a = random_dist(48, 7);
        let kernel = CircularDistribution::wrapped_gaussian_kernel(48, 0.02).unwrap();
        let base = circular_convolve(&a, &kernel).unwrap();
        for &r in &[1usize, 5, 13, 47] {
            let shifted = circular_convolve(&a.rotated(r), &kernel).unwrap();
            for i in 0..48 {
                assert_eq!(
                    shifted.weight((i + r) % 48).to_bits(),
                    base.weight(i).to_bits(),
                    "rotation {r}, bin {i}"
                );
            }
        }
    }

    #[test]
    fn fft_convolver_agrees_with_reference_convolution() {
        for &n in &[64usize, 100, 1024] {
            let dist = random_dist(n, 3);
            let kernel = CircularDistribution::wrapped_gaussian_kernel(n, 0.004).unwrap();
            let convolver = CircularConvolver::new(&kernel);
            let fast = convolver.convolve(&dist).unwrap();
            let reference = circular_convolve(&dist, &kernel).unwrap();
            for i in 0..n {
                assert!(
                    (fast.weight(i) - reference.weight(i)).abs() < 1e-12,
                    "n {n}, bin {i}"
                );
            }
        }
    }

    #[test]
    fn fft_convolver_rejects_mismatched_grids() {
        let kernel = CircularDistribution::wrapped_gaussian_kernel(64, 0.01).unwrap();
        let convolver = CircularConvolver::new(&kernel);
        let dist = CircularDistribution::uniform(128).unwrap();
        assert!(convolver.convolve(&dist).is_err());
    }

    #[test]
    fn argmax_picks_delta_bin() {
        let d = CircularDistribution::delta(16, 5).unwrap();
        assert_eq!(argmax_bin(&d), 5);
        assert_eq!(argmax_phase(&d), d.bin_center(5));
    }

    #[test]
    fn argmax_tie_breaks_to_lowest_bin() {
        let uniform = CircularDistribution::uniform(16).unwrap();
        assert_eq!(argmax_bin(&uniform), 0);
        assert_eq!(argmax_phase(&uniform), uniform.bin_center(0));
    }

    #[test]
    fn argmax_takes_strict_maximum_of_bimodal() {
        let n = 64;
        let rest = 0.39 / (n - 2) as f64;
        let mut weights = vec![rest; n];
        weights[10] = 0.30;
        weights[50] = 0.31;
        let d = CircularDistribution::from_weights(weights).unwrap();
        assert_eq!(argmax_bin(&d), 50);
    }

    #[test]
    fn from_weights_rejects_negative_or_non_finite() {
        assert_eq!(
            CircularDistribution::from_weights(vec![1.0, -0.1, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0]),
            Err(CircularError::InvalidWeights)
        );
        assert_eq!(
            CircularDistribution::from_weights(vec![f64::NAN; 8]),
            Err(CircularError::InvalidWeights)
        );
        assert_eq!(
            CircularDistribution::from_weights(vec![0.0; 8]),
            Err(CircularError::ZeroMass)
        );
    }

    proptest! {
        #[test]
        fn all_operations_keep_unit_mass(seed in 0u64..1000, n in 8usize..200, variance in 1e-4f64..10.0) {
            let dist = random_dist(n, seed);
            let kernel = CircularDistribution::wrapped_gaussian_kernel(n, variance).unwrap();
            for d in [&dist, &kernel, &circular_convolve(&dist, &kernel).unwrap()] {
                let total: f64 = d.weights().iter().sum();
                prop_assert!((total - 1.0).abs() < 1e-12);
                prop_assert!(d.weights().iter().all(|&w| w >= 0.0));
            }
        }

        #[test]
        fn convolution_commutes(sa in 0u64..500, sb in 500u64..1000) {
            let a = random_dist(32, sa);
            let b = random_dist(32, sb);
            let ab = circular_convolve(&a, &b).unwrap();
            let ba = circular_convolve(&b, &a).unwrap();
            for i in 0..32 {
                prop_assert!((ab.weight(i) - ba.weight(i)).abs() < 1e-10);
            }
        }

        #[test]
        fn argmax_survives_positive_rescaling(seed in 0u64..1000, scale in 1e-3f64..1e3) {
            let dist = random_dist(40, seed);
            let before = argmax_bin(&dist);
            let scaled: Vec<f64> = dist.weights().iter().map(|w| w * scale).collect();
            let rescaled = CircularDistribution::from_weights(scaled).unwrap();
            prop_assert_eq!(argmax_bin(&rescaled), before);
        }

        #[test]
        fn wrap_lands_in_the_half_open_interval(x in -1e6f64..1e6) {
            let p = wrap_phase(x).unwrap();
            prop_assert!(p.radians() > -PI && p.radians() <= PI);
        }
    }
}
