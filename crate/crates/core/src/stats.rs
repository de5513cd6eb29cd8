//! Sample statistics and goodness-of-fit tests used by the Monte Carlo
//! verification paths.

use statrs::function::gamma::gamma_ur;

/// Asymptotic one-sample Kolmogorov–Smirnov critical coefficient at the 1%
/// level: reject when `D_n > 1.63 / √n`.
pub const KS_CRIT_1PCT: f64 = 1.63;

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance (Welford).
pub fn variance(xs: &[f64]) -> f64 {
    let mut n = 0.0f64;
    let mut m = 0.0f64;
    let mut m2 = 0.0f64;
    for &x in xs {
        n += 1.0;
        let d = x - m;
        m += d / n;
        m2 += d * (x - m);
    }
    if n > 1.0 {
        m2 / (n - 1.0)
    } else {
        0.0
    }
}

/// Asymptotic standard error of the sample variance,
/// `√((m₄ - s⁴)/n)` with `m₄` the central fourth moment.
pub fn variance_standard_error(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mu = mean(xs);
    let s2 = variance(xs);
    let m4 = xs.iter().map(|x| (x - mu).powi(4)).sum::<f64>() / n;
    ((m4 - s2 * s2).max(0.0) / n).sqrt()
}

/// Standard error of the sample mean.
pub fn mean_standard_error(xs: &[f64]) -> f64 {
    (variance(xs) / xs.len() as f64).sqrt()
}

/// One-sample KS statistic `sup |F_n - F|` against a reference CDF.
/// `sorted` must be ascending.
pub fn ks_statistic_sorted(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut sup = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        sup = sup.max((f - i as f64 / n).abs());
        sup = sup.max(((i as f64 + 1.0) / n - f).abs());
    }
    sup
}

/// Two-sample KS statistic; both inputs must be sorted ascending.
pub fn ks_two_sample_sorted(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let mut i = 0;
    let mut j = 0;
    let mut sup = 0.0f64;
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        sup = sup.max((i as f64 / na - j as f64 / nb).abs());
    }
    sup
}

/// Critical value for the two-sample KS test at the 1% level:
/// `c(α)·√((n+m)/(nm))` with `c(0.01) ≈ 1.628`.
pub fn ks_two_sample_threshold_1pct(n: usize, m: usize) -> f64 {
    1.628 * (((n + m) as f64) / ((n * m) as f64)).sqrt()
}

/// Histogram over `bins` equal cells of `(lo, hi)`; values outside are
/// clamped into the edge cells.
pub fn histogram(samples: &[f64], lo: f64, hi: f64, bins: usize) -> Vec<u64> {
    let mut counts = vec![0u64; bins];
    let w = (hi - lo) / bins as f64;
    for &x in samples {
        let idx = (((x - lo) / w).floor() as i64).clamp(0, bins as i64 - 1) as usize;
        counts[idx] += 1;
    }
    counts
}

/// Pearson chi-square result against known expected counts.
#[derive(Debug, Clone, Copy)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Chi-square test with `len - 1` degrees of freedom. Expected counts must
/// be positive.
pub fn chi_square(observed: &[u64], expected: &[f64]) -> ChiSquare {
    assert_eq!(observed.len(), expected.len());
    let statistic: f64 = observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| {
            let d = o as f64 - e;
            d * d / e
        })
        .sum();
    let dof = observed.len() - 1;
    // Upper regularized incomplete gamma Q(k/2, x/2) is the χ² survival function.
    let p_value = gamma_ur(dof as f64 / 2.0, statistic / 2.0);
    ChiSquare {
        statistic,
        dof,
        p_value,
    }
}
