//! Cosine coefficients of quantile traces and discrete Fourier analysis of
//! boundary traces.
//!
//! The quantile expansion `Q(|θ|/π) = Σ a_n cos(nθ)` is computed per kind:
//! exact closed-form integration for piecewise-linear quantiles (uniform,
//! piecewise densities) and step quantiles (atomic, empirical), adaptive
//! quadrature for the smooth closed-form kinds. The empirical path never
//! discretizes the quantile, so the only error in a Monte Carlo pipeline is
//! the sampling itself.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::quad;
use crate::rearrange::BoundaryTrace;

/// Absolute tolerance of the per-coefficient adaptive quadrature.
const COEFF_QUAD_TOL: f64 = 1e-10;

/// Cosine coefficients `a_1..a_N` of a quantile trace (`a_0 = 0` for
/// centered laws).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CosineSeries {
    coeffs: Vec<f64>,
    truncation: usize,
}

impl CosineSeries {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("series needs at least one term".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("coefficients must be finite".into()));
        }
        let truncation = coeffs.len();
        Ok(CosineSeries { coeffs, truncation })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// 1-based coefficient access: `coeff(n)` returns `a_n`.
    pub fn coeff(&self, n: usize) -> f64 {
        self.coeffs[n - 1]
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// `Σ a_n²`; equals twice the second moment captured by the truncation.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|a| a * a).sum()
    }
}

/// Cosine and sine projections of a boundary trace, mean listed separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSpectrum {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub mean_term: f64,
    pub truncation: usize,
}

impl TraceSpectrum {
    /// 1-based mode energy `α_n² + β_n²`.
    pub fn mode_energy(&self, n: usize) -> f64 {
        self.alpha[n - 1] * self.alpha[n - 1] + self.beta[n - 1] * self.beta[n - 1]
    }
}

/// Piecewise-linear description of a quantile: `(u0, u1, q0, q1)` segments
/// with `Q` affine on `(u0, u1)`. Step quantiles use `q0 == q1`.
fn linear_segments(m: &Measure) -> Option<Vec<(f64, f64, f64, f64)>> {
    match m {
        Measure::Uniform { a, b } => Some(vec![(0.0, 1.0, *a, *b)]),
        Measure::PiecewiseDensity {
            breakpoints,
            values,
        } => {
            let mut segs = Vec::with_capacity(values.len());
            let mut acc = 0.0;
            for (w, &v) in breakpoints.windows(2).zip(values) {
                let cell = v * (w[1] - w[0]);
                if cell > 0.0 {
                    segs.push((acc, acc + cell, w[0], w[1]));
                }
                acc += cell;
            }
            Some(segs)
        }
        _ => None,
    }
}

/// Step description `(u_i, x_i)`: `Q = x_i` on `(u_{i-1}, u_i]`, `u_K = 1`.
fn step_levels(m: &Measure) -> Option<Vec<(f64, f64)>> {
    match m {
        Measure::Atomic { atoms } => {
            let mut acc = 0.0;
            Some(
                atoms
                    .iter()
                    .map(|&(x, w)| {
                        acc += w;
                        (acc.min(1.0), x)
                    })
                    .collect(),
            )
        }
        Measure::Empirical { samples } => {
            let m_count = samples.len() as f64;
            Some(
                samples
                    .iter()
                    .enumerate()
                    .map(|(i, &x)| ((i as f64 + 1.0) / m_count, x))
                    .collect(),
            )
        }
        _ => None,
    }
}

/// Exact coefficients for an affine-per-segment quantile.
fn coeffs_from_linear_segments(segs: &[(f64, f64, f64, f64)], n_terms: usize) -> Vec<f64> {
    (1..=n_terms)
        .into_par_iter()
        .map(|n| {
            let omega = n as f64 * PI;
            let mut acc = 0.0;
            for &(u0, u1, q0, q1) in segs {
                let slope = (q1 - q0) / (u1 - u0);
                acc += (q1 * (omega * u1).sin() - q0 * (omega * u0).sin()) / omega
                    + slope * ((omega * u1).cos() - (omega * u0).cos()) / (omega * omega);
            }
            2.0 * acc
        })
        .collect()
}

/// Exact coefficients for a step quantile via Abel summation:
/// `a_n = (2/(nπ)) Σ_i (x_i - x_{i+1}) sin(nπ u_i)` over interior level
/// boundaries (the endpoint terms vanish since `sin(nπ) = 0`).
fn coeffs_from_steps(levels: &[(f64, f64)], n_terms: usize) -> Vec<f64> {
    let diffs: Vec<(f64, f64)> = levels
        .windows(2)
        .filter_map(|w| {
            let dx = w[0].1 - w[1].1;
            (dx != 0.0).then_some((w[0].0, dx))
        })
        .collect();
    let partials: Vec<Vec<f64>> = diffs
        .par_chunks(4096)
        .map(|chunk| {
            let mut acc = vec![0.0; n_terms];
            for &(u, dx) in chunk {
                // sin(nπu) by angle-addition recurrence over n.
                let (s1, c1) = (PI * u).sin_cos();
                let (mut s, mut c) = (s1, c1);
                acc[0] += dx * s;
                for slot in acc.iter_mut().skip(1) {
                    let sn = s * c1 + c * s1;
                    let cn = c * c1 - s * s1;
                    s = sn;
                    c = cn;
                    *slot += dx * s;
                }
            }
            acc
        })
        .collect();
    let mut out = vec![0.0; n_terms];
    for p in partials {
        for (o, v) in out.iter_mut().zip(p) {
            *o += v;
        }
    }
    for (k, o) in out.iter_mut().enumerate() {
        *o *= 2.0 / ((k as f64 + 1.0) * PI);
    }
    out
}

/// Cosine coefficients `a_n = 2 ∫_0^1 Q(u) cos(nπu) du`, `n = 1..N`.
pub fn quantile_cosine_coeffs(m: &Measure, n_terms: usize) -> Result<CosineSeries> {
    if n_terms == 0 {
        return Err(Error::InvalidArgument("need at least one coefficient".into()));
    }
    let coeffs = if let Some(segs) = linear_segments(m) {
        coeffs_from_linear_segments(&segs, n_terms)
    } else if let Some(levels) = step_levels(m) {
        coeffs_from_steps(&levels, n_terms)
    } else {
        let q = m.quantile_fn();
        (1..=n_terms)
            .into_par_iter()
            .map(|n| {
                let omega = n as f64 * PI;
                2.0 * quad::integrate(|u| q.eval(u) * (omega * u).cos(), 0.0, 1.0, COEFF_QUAD_TOL)
                    .value
            })
            .collect()
    };
    CosineSeries::new(coeffs)
}

/// Discrete Fourier projections of a trace on the midpoint grid:
/// `α_n = (2/G) Σ_j u_j cos(nθ_j)`, `β_n = (2/G) Σ_j u_j sin(nθ_j)`.
/// Exact for trigonometric polynomials of degree ≤ N once `G ≥ 2(N+1)`.
pub fn trace_spectrum(trace: &BoundaryTrace, n_terms: usize) -> Result<TraceSpectrum> {
    let g = trace.grid_size();
    if n_terms == 0 || n_terms > g / 2 - 1 {
        return Err(Error::InvalidArgument(format!(
            "truncation must satisfy 1 ≤ N ≤ G/2 - 1 (N = {n_terms}, G = {g})"
        )));
    }
    let values = trace.values();
    let partials: Vec<(Vec<f64>, Vec<f64>, f64)> = (0..g)
        .collect::<Vec<_>>()
        .par_chunks(2048)
        .map(|chunk| {
            let mut alpha = vec![0.0; n_terms];
            let mut beta = vec![0.0; n_terms];
            let mut sum = 0.0;
            for &j in chunk {
                let u = values[j];
                sum += u;
                let (s1, c1) = trace.theta(j).sin_cos();
                let (mut s, mut c) = (s1, c1);
                alpha[0] += u * c;
                beta[0] += u * s;
                for k in 1..n_terms {
                    let sn = s * c1 + c * s1;
                    let cn = c * c1 - s * s1;
                    s = sn;
                    c = cn;
                    alpha[k] += u * c;
                    beta[k] += u * s;
                }
            }
            (alpha, beta, sum)
        })
        .collect();
    let mut alpha = vec![0.0; n_terms];
    let mut beta = vec![0.0; n_terms];
    let mut mean = 0.0;
    for (pa, pb, ps) in partials {
        for (a, v) in alpha.iter_mut().zip(pa) {
            *a += v;
        }
        for (b, v) in beta.iter_mut().zip(pb) {
            *b += v;
        }
        mean += ps;
    }
    let scale = 2.0 / g as f64;
    alpha.iter_mut().for_each(|a| *a *= scale);
    beta.iter_mut().for_each(|b| *b *= scale);
    Ok(TraceSpectrum {
        alpha,
        beta,
        mean_term: mean / g as f64,
        truncation: n_terms,
    })
}

/// Evaluates `Σ a_n cos(nθ)` by the Clenshaw recurrence.
pub fn evaluate_series(s: &CosineSeries, theta: f64) -> f64 {
    let c = theta.cos();
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &a in s.coeffs().iter().rev() {
        let b0 = a + 2.0 * c * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    b1 * c - b2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Measure;
    use crate::rearrange::quantile_sdr;
    use approx::assert_abs_diff_eq;

    fn uniform_coeff(n: usize) -> f64 {
        if n % 2 == 1 {
            -8.0 / (PI * PI * (n * n) as f64)
        } else {
            0.0
        }
    }

    #[test]
    fn uniform_coefficients_closed_form() {
        let m = Measure::uniform(-1.0, 1.0).unwrap();
        let s = quantile_cosine_coeffs(&m, 6).unwrap();
        for n in 1..=6 {
            assert_abs_diff_eq!(s.coeff(n), uniform_coeff(n), epsilon = 1e-14);
        }
    }

    #[test]
    fn uniform_coefficients_match_quadrature_oracle() {
        // Independent route: integrate Q(u) cos(nπu) adaptively.
        let m = Measure::uniform(-1.0, 1.0).unwrap();
        let s = quantile_cosine_coeffs(&m, 8).unwrap();
        let q = m.quantile_fn();
        for n in 1..=8usize {
            let omega = n as f64 * PI;
            let oracle =
                2.0 * quad::integrate(|u| q.eval(u) * (omega * u).cos(), 0.0, 1.0, 1e-12).value;
            assert_abs_diff_eq!(s.coeff(n), oracle, epsilon = 1e-10);
        }
    }

    #[test]
    fn arcsine_coefficients() {
        let s = quantile_cosine_coeffs(&Measure::ArcsineShifted, 4).unwrap();
        assert_abs_diff_eq!(s.coeff(1), -1.0, epsilon = 1e-10);
        for n in 2..=4 {
            assert_abs_diff_eq!(s.coeff(n), 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn point_mass_coefficients_vanish() {
        let m = Measure::atomic(vec![(0.0, 1.0)]).unwrap();
        let s = quantile_cosine_coeffs(&m, 5).unwrap();
        assert!(s.coeffs().iter().all(|a| *a == 0.0));
    }

    #[test]
    fn two_point_coefficients_closed_form() {
        // Q = -1 on (0, 1/2], 1 on (1/2, 1): a_n = -4 sin(nπ/2)/(nπ).
        let m = Measure::atomic(vec![(-1.0, 0.5), (1.0, 0.5)]).unwrap();
        let s = quantile_cosine_coeffs(&m, 6).unwrap();
        for n in 1..=6usize {
            let expected = -4.0 * (n as f64 * PI / 2.0).sin() / (n as f64 * PI);
            assert_abs_diff_eq!(s.coeff(n), expected, epsilon = 1e-13);
        }
    }

    #[test]
    fn empirical_coefficients_match_quadrature_of_step_quantile() {
        let m = Measure::empirical(vec![-0.9, -0.3, 0.1, 0.4, 0.7]).unwrap();
        let s = quantile_cosine_coeffs(&m, 5).unwrap();
        let q = m.quantile_fn();
        for n in 1..=5usize {
            let omega = n as f64 * PI;
            let oracle =
                2.0 * quad::integrate(|u| q.eval(u) * (omega * u).cos(), 0.0, 1.0, 1e-11).value;
            assert_abs_diff_eq!(s.coeff(n), oracle, epsilon = 1e-8);
        }
    }

    #[test]
    fn piecewise_density_coefficients_match_quadrature() {
        let m = Measure::piecewise_density(vec![-1.0, -0.2, 0.5, 1.0], vec![0.5, 0.6, 0.44]).unwrap();
        let s = quantile_cosine_coeffs(&m, 4).unwrap();
        let q = m.quantile_fn();
        for n in 1..=4usize {
            let omega = n as f64 * PI;
            let oracle =
                2.0 * quad::integrate(|u| q.eval(u) * (omega * u).cos(), 0.0, 1.0, 1e-11).value;
            assert_abs_diff_eq!(s.coeff(n), oracle, epsilon = 1e-9);
        }
    }

    #[test]
    fn spectrum_orthogonality() {
        let t = BoundaryTrace::from_fn(64, |t| (3.0 * t).cos()).unwrap();
        let s = trace_spectrum(&t, 5).unwrap();
        for n in 1..=5usize {
            assert_abs_diff_eq!(s.alpha[n - 1], if n == 3 { 1.0 } else { 0.0 }, epsilon = 1e-12);
            assert_abs_diff_eq!(s.beta[n - 1], 0.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(s.mean_term, 0.0, epsilon = 1e-13);

        let t = BoundaryTrace::from_fn(64, |t| 2.0 * t.sin() + (2.0 * t).cos()).unwrap();
        let s = trace_spectrum(&t, 4).unwrap();
        assert_abs_diff_eq!(s.beta[0], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.alpha[1], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.alpha[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.beta[1], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn spectrum_rejects_oversized_truncation() {
        let t = BoundaryTrace::from_fn(16, |t| t.cos()).unwrap();
        assert!(trace_spectrum(&t, 7).is_err());
        assert!(trace_spectrum(&t, 8).is_err());
        assert!(trace_spectrum(&t, 6).is_ok());
    }

    #[test]
    fn rearranged_quantile_trace_flips_coefficient_signs() {
        // The trace Q(1 - |θ|/π) carries the coefficients (-1)^n a_n.
        let m = Measure::uniform(-1.0, 1.0).unwrap();
        let trace = quantile_sdr(&m.quantile_fn(), 4096).unwrap();
        let s = trace_spectrum(&trace, 6).unwrap();
        for n in 1..=6usize {
            let expected = if n % 2 == 0 { 1.0 } else { -1.0 } * uniform_coeff(n);
            assert_abs_diff_eq!(s.alpha[n - 1], expected, epsilon = 1e-6);
            assert_abs_diff_eq!(s.beta[n - 1], 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn quantile_trace_mean_term_vanishes_for_centered_fixtures() {
        let fixtures = [
            Measure::uniform(-1.0, 1.0).unwrap(),
            Measure::ArcsineShifted,
            Measure::shifted_disk_exit(0.5).unwrap(),
        ];
        for m in &fixtures {
            let q = m.quantile_fn();
            let trace =
                BoundaryTrace::from_fn(4096, |t| q.eval((t.abs() / PI).clamp(1e-12, 1.0 - 1e-12)))
                    .unwrap();
            let s = trace_spectrum(&trace, 4).unwrap();
            assert!(s.mean_term.abs() < 1e-6, "{m}: mean {}", s.mean_term);
        }
    }

    #[test]
    fn evaluate_series_examples() {
        let arcsine = quantile_cosine_coeffs(&Measure::ArcsineShifted, 4).unwrap();
        assert_abs_diff_eq!(evaluate_series(&arcsine, 0.0), -1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(evaluate_series(&arcsine, PI / 2.0), 0.0, epsilon = 1e-9);

        // Partial sum at θ = π: 1 minus the tail 8/π² Σ_{odd n > N} n^{-2},
        // computed here as the independent oracle.
        let n_terms = 200;
        let uni = quantile_cosine_coeffs(&Measure::uniform(-1.0, 1.0).unwrap(), n_terms).unwrap();
        let tail: f64 = (n_terms + 1..200_000)
            .filter(|n| n % 2 == 1)
            .map(|n| 8.0 / (PI * PI * (n * n) as f64))
            .sum();
        assert_abs_diff_eq!(evaluate_series(&uni, PI), 1.0 - tail, epsilon = 1e-7);
    }

    #[test]
    fn parseval_partial_sums_capture_second_moment() {
        // moment(m, 2) = Σ a_n²/2 + tail, with ≤ and 1% capture at N = 1000.
        let fixtures = [
            Measure::uniform(-1.0, 1.0).unwrap(),
            Measure::ArcsineShifted,
            Measure::shifted_disk_exit(0.5).unwrap(),
        ];
        for m in &fixtures {
            let s = quantile_cosine_coeffs(m, 1000).unwrap();
            let captured = s.energy() / 2.0;
            let m2 = m.moment(2.0).unwrap();
            assert!(captured <= m2 + 1e-9, "{m}: captured {captured} > {m2}");
            assert!(captured >= 0.99 * m2, "{m}: captured {captured} < 99% of {m2}");
        }
    }

    #[test]
    fn coefficients_agree_with_sampled_trace_spectrum() {
        // Smooth kinds: a_n vs the DFT of θ ↦ Q(|θ|/π) at G = 4096.
        for m in [Measure::ArcsineShifted, Measure::shifted_disk_exit(0.5).unwrap()] {
            let s = quantile_cosine_coeffs(&m, 8).unwrap();
            let q = m.quantile_fn();
            let trace =
                BoundaryTrace::from_fn(4096, |t| q.eval((t.abs() / PI).clamp(1e-12, 1.0 - 1e-12)))
                    .unwrap();
            let spec = trace_spectrum(&trace, 8).unwrap();
            for n in 1..=8usize {
                assert_abs_diff_eq!(s.coeff(n), spec.alpha[n - 1], epsilon = 1e-8);
            }
        }
    }
}
