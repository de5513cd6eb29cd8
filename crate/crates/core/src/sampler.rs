//! Exit-law sampling: realizations of `Re(Z_τ)` for planar Brownian motion
//! stopped on the boundary of a domain.
//!
//! Three routes:
//!
//! * [`conformal_exit_samples`] — exact via the uniformizing series: with
//!   `Θ ~ Uniform(-π, π)` the value `Re f(e^{iΘ})` has the exit law of
//!   `f(𝔻)` (conformal invariance of harmonic measure).
//! * [`mobius_shifted_disk_samples`] — exact for the shifted disk `𝔻 - κi`
//!   through the Möbius map `g(z) = z(1-κ²)/(1 - iκz)`.
//! * [`wos_exit_samples`] — walk-on-spheres for any [`GeometricDomain`],
//!   with an `O(ε)` boundary-shell bias and a step budget.
//!
//! All samplers draw from ChaCha streams split by chunk index, so a given
//! `(seed, sampler, domain, n)` produces the same `SampleSet` regardless of
//! thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gross::PowerSeriesDomain;
use crate::measure::Measure;
use crate::stats;
use num_complex::Complex64;

/// Samples per RNG stream; one rayon task handles one stream.
const CHUNK: usize = 1 << 14;

/// A bounded planar shape containing the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GeometricDomain {
    /// Disk of the given radius centered at the origin.
    Disk { radius: f64 },
    /// Unit disk shifted down by `κ`: `{|z + κi| < 1}`, `κ ∈ [0, 1)`.
    ShiftedDisk { kappa: f64 },
    /// Axis-aligned rectangle `(-hw, hw) × (-hh, hh)`.
    Rectangle { half_width: f64, half_height: f64 },
}

impl GeometricDomain {
    pub fn disk(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "disk radius must be positive, got {radius}"
            )));
        }
        Ok(GeometricDomain::Disk { radius })
    }

    pub fn shifted_disk(kappa: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&kappa) {
            return Err(Error::InvalidArgument(format!(
                "kappa must lie in [0, 1), got {kappa}"
            )));
        }
        Ok(GeometricDomain::ShiftedDisk { kappa })
    }

    pub fn rectangle(half_width: f64, half_height: f64) -> Result<Self> {
        if !(half_width > 0.0 && half_height > 0.0)
            || !half_width.is_finite()
            || !half_height.is_finite()
        {
            return Err(Error::InvalidArgument(format!(
                "rectangle half-sizes must be positive, got ({half_width}, {half_height})"
            )));
        }
        Ok(GeometricDomain::Rectangle {
            half_width,
            half_height,
        })
    }

    pub fn area(&self) -> f64 {
        match self {
            GeometricDomain::Disk { radius } => std::f64::consts::PI * radius * radius,
            GeometricDomain::ShiftedDisk { .. } => std::f64::consts::PI,
            GeometricDomain::Rectangle {
                half_width,
                half_height,
            } => 4.0 * half_width * half_height,
        }
    }

    /// Distance from an interior point to the boundary (nonpositive outside).
    pub fn distance_to_boundary(&self, p: (f64, f64)) -> f64 {
        match self {
            GeometricDomain::Disk { radius } => radius - (p.0 * p.0 + p.1 * p.1).sqrt(),
            GeometricDomain::ShiftedDisk { kappa } => {
                let dy = p.1 + kappa;
                1.0 - (p.0 * p.0 + dy * dy).sqrt()
            }
            GeometricDomain::Rectangle {
                half_width,
                half_height,
            } => (half_width - p.0.abs()).min(half_height - p.1.abs()),
        }
    }

    pub fn contains(&self, p: (f64, f64)) -> bool {
        self.distance_to_boundary(p) > 0.0
    }

    /// Nearest boundary point to an interior point. Rectangle corner ties
    /// resolve toward the vertical edges.
    pub fn nearest_boundary_point(&self, p: (f64, f64)) -> (f64, f64) {
        match self {
            GeometricDomain::Disk { radius } => {
                let r = (p.0 * p.0 + p.1 * p.1).sqrt();
                if r == 0.0 {
                    (*radius, 0.0)
                } else {
                    (p.0 * radius / r, p.1 * radius / r)
                }
            }
            GeometricDomain::ShiftedDisk { kappa } => {
                let c = (0.0, -kappa);
                let (dx, dy) = (p.0 - c.0, p.1 - c.1);
                let r = (dx * dx + dy * dy).sqrt();
                if r == 0.0 {
                    (1.0, -kappa)
                } else {
                    (c.0 + dx / r, c.1 + dy / r)
                }
            }
            GeometricDomain::Rectangle {
                half_width,
                half_height,
            } => {
                if half_width - p.0.abs() <= half_height - p.1.abs() {
                    (half_width.copysign(p.0), p.1)
                } else {
                    (p.0, half_height.copysign(p.1))
                }
            }
        }
    }

    /// Parses `disk`, `disk:R`, `diskexit:KAPPA`, `rect:HW,HH`.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        let (head, rest) = match spec.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (spec, None),
        };
        let parse = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("`{s}` is not a real number")))
        };
        match head {
            "disk" => GeometricDomain::disk(rest.map_or(Ok(1.0), parse)?),
            "diskexit" => {
                let k = rest.ok_or_else(|| {
                    Error::InvalidArgument("diskexit:KAPPA needs a parameter".into())
                })?;
                GeometricDomain::shifted_disk(parse(k)?)
            }
            "rect" => {
                let args = rest
                    .ok_or_else(|| Error::InvalidArgument("rect:HW,HH needs half-sizes".into()))?;
                let (hw, hh) = args
                    .split_once(',')
                    .ok_or_else(|| Error::InvalidArgument(format!("`{args}` must be HW,HH")))?;
                GeometricDomain::rectangle(parse(hw)?, parse(hh)?)
            }
            other => Err(Error::InvalidArgument(format!(
                "unknown domain `{other}` (only bounded shapes are supported: disk[:R] | diskexit:KAPPA | rect:HW,HH)"
            ))),
        }
    }
}

impl std::fmt::Display for GeometricDomain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GeometricDomain::Disk { radius } => write!(f, "disk:{radius}"),
            GeometricDomain::ShiftedDisk { kappa } => write!(f, "diskexit:{kappa}"),
            GeometricDomain::Rectangle {
                half_width,
                half_height,
            } => write!(f, "rect:{half_width},{half_height}"),
        }
    }
}

/// Which sampler produced a [`SampleSet`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SamplerKind {
    ConformalExact,
    Mobius,
    Wos { eps: f64 },
}

impl std::fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SamplerKind::ConformalExact => write!(f, "conformal"),
            SamplerKind::Mobius => write!(f, "mobius"),
            SamplerKind::Wos { eps } => write!(f, "wos(eps={eps})"),
        }
    }
}

/// Monte Carlo draws of `Re(Z_τ)` with their provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    values: Vec<f64>,
    seed: u64,
    sampler: SamplerKind,
    /// Walks that exhausted the step budget (excluded from `values`).
    excluded: usize,
}

impl SampleSet {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn count(&self) -> usize {
        self.values.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn sampler(&self) -> SamplerKind {
        self.sampler
    }

    pub fn excluded(&self) -> usize {
        self.excluded
    }

    pub fn sample_mean(&self) -> f64 {
        stats::mean(&self.values)
    }

    pub fn sample_variance(&self) -> f64 {
        stats::variance(&self.values)
    }

    /// One value per line, preceded by `#` header lines recording the
    /// provenance.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W, domain: &str) -> std::io::Result<()> {
        writeln!(w, "# domain={domain}")?;
        writeln!(w, "# sampler={}", self.sampler)?;
        writeln!(w, "# seed={}", self.seed)?;
        writeln!(w, "# count={}", self.count())?;
        writeln!(w, "# excluded={}", self.excluded)?;
        writeln!(w, "value")?;
        for v in &self.values {
            writeln!(w, "{v:.17e}")?;
        }
        Ok(())
    }
}

/// Runs `draw` once per sample over chunked ChaCha streams; stream `c`
/// serves samples `[c·CHUNK, (c+1)·CHUNK)`. `None` marks an excluded walk.
fn chunked_draws(
    n: usize,
    seed: u64,
    draw: impl Fn(&mut ChaCha8Rng) -> Option<f64> + Sync,
) -> (Vec<f64>, usize) {
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<(Vec<f64>, usize)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = CHUNK.min(n - c * CHUNK);
            let mut vals = Vec::with_capacity(len);
            let mut excluded = 0usize;
            for _ in 0..len {
                match draw(&mut rng) {
                    Some(v) => vals.push(v),
                    None => excluded += 1,
                }
            }
            (vals, excluded)
        })
        .collect();
    let mut values = Vec::with_capacity(n);
    let mut excluded = 0;
    for (v, e) in parts {
        values.extend(v);
        excluded += e;
    }
    (values, excluded)
}

/// Exact exit-law samples of a power-series domain: `Re f(e^{iΘ})` with
/// `Θ ~ Uniform(-π, π)`. Exact up to the series truncation; callers should
/// screen univalence first if the series is untrusted.
pub fn conformal_exit_samples(d: &PowerSeriesDomain, n: usize, seed: u64) -> SampleSet {
    let (values, excluded) = chunked_draws(n, seed, |rng| {
        let theta = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        Some(d.eval(Complex64::from_polar(1.0, theta)).re)
    });
    SampleSet {
        values,
        seed,
        sampler: SamplerKind::ConformalExact,
        excluded,
    }
}

/// Exact exit-law samples of the shifted disk `𝔻 - κi` via the Möbius map
/// `g(z) = z(1-κ²)/(1 - iκz)`, which fixes the origin and carries the unit
/// circle onto `|w + κi| = 1`. On the circle,
/// `Re g(e^{iθ}) = (1-κ²) cos θ / (1 + 2κ sin θ + κ²)`.
pub fn mobius_shifted_disk_samples(kappa: f64, n: usize, seed: u64) -> Result<SampleSet> {
    if !(0.0..1.0).contains(&kappa) {
        return Err(Error::InvalidArgument(format!(
            "kappa must lie in [0, 1), got {kappa}"
        )));
    }
    let scale = 1.0 - kappa * kappa;
    let shift = 1.0 + kappa * kappa;
    let (values, excluded) = chunked_draws(n, seed, |rng| {
        let theta = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let (s, c) = theta.sin_cos();
        Some(scale * c / (shift + 2.0 * kappa * s))
    });
    Ok(SampleSet {
        values,
        seed,
        sampler: SamplerKind::Mobius,
        excluded,
    })
}

/// Walk-on-spheres exit samples: jump along maximal inscribed circles until
/// within `eps` of the boundary, then project to the nearest boundary point
/// and return its real part. Walks exceeding `max_steps` are excluded and
/// counted.
pub fn wos_exit_samples(
    g: &GeometricDomain,
    eps: f64,
    n: usize,
    seed: u64,
    max_steps: usize,
) -> Result<SampleSet> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "eps must be positive, got {eps}"
        )));
    }
    if !g.contains((0.0, 0.0)) {
        return Err(Error::InvalidArgument(
            "walk-on-spheres starts at the origin, which must be interior".into(),
        ));
    }
    let domain = *g;
    let (values, excluded) = chunked_draws(n, seed, move |rng| {
        let mut p = (0.0f64, 0.0f64);
        for _ in 0..max_steps {
            let r = domain.distance_to_boundary(p);
            if r < eps {
                return Some(domain.nearest_boundary_point(p).0);
            }
            let phi = rng.gen_range(0.0..std::f64::consts::TAU);
            p.0 += r * phi.cos();
            p.1 += r * phi.sin();
        }
        None
    });
    Ok(SampleSet {
        values,
        seed,
        sampler: SamplerKind::Wos { eps },
        excluded,
    })
}

/// Empirical measure of a sample set together with the recentering
/// diagnostic.
#[derive(Debug, Clone)]
pub struct CenteredEmpirical {
    pub measure: Measure,
    /// True when the sample mean exceeded three standard errors and was
    /// subtracted.
    pub recentred: bool,
    /// Mean before any recentering.
    pub raw_mean: f64,
}

/// Closes the loop `U ↦ μ_U`: the empirical law of the samples, recentred
/// when the sample mean is statistically distinguishable from zero (beyond
/// three standard errors). Exact exit laws are centered; finite Monte Carlo
/// runs are not, and silent drift would bias the Gross coefficients.
pub fn empirical_measure(s: &SampleSet) -> Result<CenteredEmpirical> {
    if s.count() < 2 {
        return Err(Error::InvalidArgument(
            "empirical measure needs at least two samples".into(),
        ));
    }
    let raw_mean = s.sample_mean();
    let se = stats::mean_standard_error(s.values());
    let recentred = raw_mean.abs() > 3.0 * se && se > 0.0;
    let values = if recentred {
        s.values().iter().map(|x| x - raw_mean).collect()
    } else {
        s.values().to_vec()
    };
    Ok(CenteredEmpirical {
        measure: Measure::empirical(values)?,
        recentred,
        raw_mean,
    })
}
