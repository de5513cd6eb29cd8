//! Centered one-dimensional probability laws with CDF, quantile, and moment
//! access.
//!
//! Every supported law has compact support, so all absolute moments are
//! finite. The quantile uses the pseudo-inverse convention
//! `Q(u) = inf{x : F(x) ≥ u}`; at jump points of `F` this picks the left
//! endpoint, and the empirical quantile is the `⌈uM⌉`-th order statistic.

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;

/// Tolerance on total mass during construction.
pub const MASS_TOL: f64 = 1e-12;
/// Default tolerance used by centering checks.
pub const CENTERING_TOL: f64 = 1e-10;

/// A probability measure on the real line.
///
/// Invariants (enforced by the constructors):
/// * total mass 1 within [`MASS_TOL`] for atomic and piecewise kinds,
/// * weights and density values nonnegative,
/// * `Empirical` samples sorted ascending,
/// * `kappa ∈ [0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Measure {
    /// Uniform law on `(a, b)`.
    Uniform { a: f64, b: f64 },
    /// Arcsine law on `(-1, 1)` with density `1/(π√(1-x²))`.
    ArcsineShifted,
    /// Law of `Re(Z_τ)` for Brownian motion exiting the unit disk shifted to
    /// `𝔻 - κi`, started at the origin. Density
    /// `(1-κ⁴) / (π((1-κ²)² + 4κ²x²)√(1-x²))` on `(-1, 1)`.
    ShiftedDiskExit { kappa: f64 },
    /// Finitely many atoms `(position, weight)`, sorted by position.
    Atomic { atoms: Vec<(f64, f64)> },
    /// Piecewise-constant density: `values[i]` on `[breakpoints[i], breakpoints[i+1])`.
    PiecewiseDensity {
        breakpoints: Vec<f64>,
        values: Vec<f64>,
    },
    /// Empirical law of a sorted sample, each point carrying mass `1/M`.
    Empirical { samples: Vec<f64> },
}

impl Measure {
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidMeasure(format!(
                "uniform endpoints must be finite with a < b, got ({a}, {b})"
            )));
        }
        Ok(Measure::Uniform { a, b })
    }

    pub fn arcsine() -> Self {
        Measure::ArcsineShifted
    }

    pub fn shifted_disk_exit(kappa: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&kappa) {
            return Err(Error::InvalidMeasure(format!(
                "kappa must lie in [0, 1), got {kappa}"
            )));
        }
        Ok(Measure::ShiftedDiskExit { kappa })
    }

    /// Builds an atomic measure; atoms are sorted by position and atoms at
    /// equal positions are merged.
    pub fn atomic(mut atoms: Vec<(f64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("atomic measure needs atoms".into()));
        }
        for &(x, w) in &atoms {
            if !x.is_finite() || !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidMeasure(format!(
                    "atom ({x}, {w}) must be finite with nonnegative weight"
                )));
            }
        }
        atoms.sort_by(|l, r| l.0.total_cmp(&r.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
        for (x, w) in atoms {
            match merged.last_mut() {
                Some(last) if last.0 == x => last.1 += w,
                _ => merged.push((x, w)),
            }
        }
        let mass: f64 = merged.iter().map(|&(_, w)| w).sum();
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidMeasure(format!(
                "atomic weights sum to {mass}, expected 1"
            )));
        }
        Ok(Measure::Atomic { atoms: merged })
    }

    pub fn piecewise_density(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 || values.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidMeasure(
                "need n+1 breakpoints for n density cells".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidMeasure(
                "breakpoints must be strictly ascending".into(),
            ));
        }
        if breakpoints.iter().any(|x| !x.is_finite())
            || values.iter().any(|v| !v.is_finite() || *v < 0.0)
        {
            return Err(Error::InvalidMeasure(
                "breakpoints must be finite, densities finite and nonnegative".into(),
            ));
        }
        let mass: f64 = breakpoints
            .windows(2)
            .zip(&values)
            .map(|(w, v)| v * (w[1] - w[0]))
            .sum();
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidMeasure(format!(
                "density integrates to {mass}, expected 1"
            )));
        }
        Ok(Measure::PiecewiseDensity {
            breakpoints,
            values,
        })
    }

    /// Builds the empirical law of `samples` (sorted internally).
    pub fn empirical(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidMeasure("empirical measure needs samples".into()));
        }
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidMeasure("samples must be finite".into()));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Measure::Empirical { samples })
    }

    /// Cumulative distribution function; right-continuous and nondecreasing.
    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            Measure::Uniform { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
            Measure::ArcsineShifted => {
                if x <= -1.0 {
                    0.0
                } else if x >= 1.0 {
                    1.0
                } else {
                    0.5 + x.asin() / PI
                }
            }
            Measure::ShiftedDiskExit { kappa } => {
                if x <= -1.0 {
                    0.0
                } else if x >= 1.0 {
                    1.0
                } else {
                    let c = (1.0 + kappa * kappa) / (1.0 - kappa * kappa);
                    0.5 + (c * x / (1.0 - x * x).sqrt()).atan() / PI
                }
            }
            Measure::Atomic { atoms } => atoms
                .iter()
                .take_while(|&&(pos, _)| pos <= x)
                .map(|&(_, w)| w)
                .sum::<f64>()
                .min(1.0),
            Measure::PiecewiseDensity {
                breakpoints,
                values,
            } => {
                if x <= breakpoints[0] {
                    return 0.0;
                }
                let mut acc = 0.0;
                for (w, &v) in breakpoints.windows(2).zip(values) {
                    if x >= w[1] {
                        acc += v * (w[1] - w[0]);
                    } else {
                        acc += v * (x - w[0]);
                        break;
                    }
                }
                acc.min(1.0)
            }
            Measure::Empirical { samples } => {
                let below = samples.partition_point(|&s| s <= x);
                below as f64 / samples.len() as f64
            }
        }
    }

    /// Quantile `Q(u) = inf{x : F(x) ≥ u}` for `u ∈ (0, 1)`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "quantile argument must lie in (0, 1), got {u}"
            )));
        }
        Ok(self.quantile_unchecked(u))
    }

    fn quantile_unchecked(&self, u: f64) -> f64 {
        debug_assert!(u > 0.0 && u < 1.0);
        match self {
            Measure::Uniform { a, b } => a + (b - a) * u,
            Measure::ArcsineShifted => -(PI * u).cos(),
            Measure::ShiftedDiskExit { kappa } => {
                let c = (1.0 + kappa * kappa) / (1.0 - kappa * kappa);
                let w = (PI * (u - 0.5)).tan() / c;
                w / (1.0 + w * w).sqrt()
            }
            Measure::Atomic { atoms } => {
                let mut acc = 0.0;
                for &(x, w) in atoms {
                    acc += w;
                    if acc >= u {
                        return x;
                    }
                }
                atoms.last().expect("nonempty atoms").0
            }
            Measure::PiecewiseDensity {
                breakpoints,
                values,
            } => {
                let mut acc = 0.0;
                for (w, &v) in breakpoints.windows(2).zip(values) {
                    let cell = v * (w[1] - w[0]);
                    if acc + cell >= u && v > 0.0 {
                        return w[0] + (u - acc) / v;
                    }
                    acc += cell;
                }
                *breakpoints.last().expect("nonempty breakpoints")
            }
            Measure::Empirical { samples } => {
                let m = samples.len();
                let idx = ((u * m as f64).ceil() as usize).clamp(1, m);
                samples[idx - 1]
            }
        }
    }

    /// Borrowing view used by the Fourier and rearrangement stages.
    pub fn quantile_fn(&self) -> QuantileFn<'_> {
        QuantileFn { measure: self }
    }

    /// Absolute moment `∫ |x|^p dμ` for `p > 0`.
    pub fn moment(&self, p: f64) -> Result<f64> {
        if !(p > 0.0) || !p.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "moment order must be positive and finite, got {p}"
            )));
        }
        Ok(match self {
            Measure::Uniform { a, b } => {
                (abs_power_primitive(*b, p) - abs_power_primitive(*a, p)) / (b - a)
            }
            Measure::ArcsineShifted => {
                if p == 2.0 {
                    0.5
                } else {
                    self.quantile_moment_by_quadrature(p)
                }
            }
            Measure::ShiftedDiskExit { kappa } => {
                if p == 2.0 {
                    // Verified against quadrature of the density in the tests.
                    (1.0 - kappa * kappa) / 2.0
                } else {
                    self.quantile_moment_by_quadrature(p)
                }
            }
            Measure::Atomic { atoms } => atoms.iter().map(|&(x, w)| w * x.abs().powf(p)).sum(),
            Measure::PiecewiseDensity {
                breakpoints,
                values,
            } => breakpoints
                .windows(2)
                .zip(values)
                .map(|(w, &v)| v * (abs_power_primitive(w[1], p) - abs_power_primitive(w[0], p)))
                .sum(),
            Measure::Empirical { samples } => {
                samples.iter().map(|x| x.abs().powf(p)).sum::<f64>() / samples.len() as f64
            }
        })
    }

    fn quantile_moment_by_quadrature(&self, p: f64) -> f64 {
        quad::integrate(|u| self.quantile_unchecked(u).abs().powf(p), 0.0, 1.0, 1e-12).value
    }

    /// First moment `∫ x dμ`.
    pub fn mean(&self) -> f64 {
        match self {
            Measure::Uniform { a, b } => 0.5 * (a + b),
            Measure::ArcsineShifted | Measure::ShiftedDiskExit { .. } => 0.0,
            Measure::Atomic { atoms } => atoms.iter().map(|&(x, w)| w * x).sum(),
            Measure::PiecewiseDensity {
                breakpoints,
                values,
            } => breakpoints
                .windows(2)
                .zip(values)
                .map(|(w, &v)| v * 0.5 * (w[1] * w[1] - w[0] * w[0]))
                .sum(),
            Measure::Empirical { samples } => {
                samples.iter().sum::<f64>() / samples.len() as f64
            }
        }
    }

    /// Central second moment.
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.moment(2.0).expect("second moment") - m * m
    }

    /// True when `|mean| ≤ tol`.
    pub fn is_centered(&self, tol: f64) -> bool {
        self.mean().abs() <= tol
    }

    /// The normalization integral `(1/π) ∫_{-π}^{π} Q(|θ|/π) cos(θ) dθ`,
    /// which equals the first cosine coefficient `a₁` of the Gross
    /// expansion. The measure is Schlicht-normalized when the returned value
    /// has absolute value 1; the sign is reported as computed (the arcsine
    /// extremal has `a₁ = -1`, a rotation by π of the unit disk).
    pub fn schlicht_normalization(&self) -> f64 {
        crate::fourier::quantile_cosine_coeffs(self, 1)
            .expect("one cosine coefficient")
            .coeff(1)
    }

    /// Parses the CLI literal syntax:
    /// `uniform:A,B`, `arcsine`, `diskexit:KAPPA`, `atoms:X1:W1,X2:W2,...`,
    /// `empirical:PATH` (one real per line), `density:PATH`
    /// (`breakpoint,value` rows; the last row closes the support and its
    /// value is ignored).
    pub fn parse_spec(spec: &str) -> Result<Self> {
        let bad = |msg: String| Error::InvalidArgument(msg);
        let (head, rest) = match spec.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (spec, None),
        };
        match head {
            "arcsine" => Ok(Measure::ArcsineShifted),
            "uniform" => {
                let args = rest.ok_or_else(|| bad("uniform:A,B needs endpoints".into()))?;
                let (a, b) = args
                    .split_once(',')
                    .ok_or_else(|| bad(format!("uniform endpoints `{args}` must be A,B")))?;
                Measure::uniform(parse_f64(a)?, parse_f64(b)?)
            }
            "diskexit" => {
                let k = rest.ok_or_else(|| bad("diskexit:KAPPA needs a parameter".into()))?;
                Measure::shifted_disk_exit(parse_f64(k)?)
            }
            "atoms" => {
                let args = rest.ok_or_else(|| bad("atoms:X:W,... needs entries".into()))?;
                let mut atoms = Vec::new();
                for entry in args.split(',') {
                    let (x, w) = entry
                        .split_once(':')
                        .ok_or_else(|| bad(format!("atom `{entry}` must be X:W")))?;
                    atoms.push((parse_f64(x)?, parse_f64(w)?));
                }
                Measure::atomic(atoms)
            }
            "empirical" => {
                let path = rest.ok_or_else(|| bad("empirical:PATH needs a file".into()))?;
                Measure::empirical(read_reals(Path::new(path))?)
            }
            "density" => {
                let path = rest.ok_or_else(|| bad("density:PATH needs a file".into()))?;
                let rows = read_pairs(Path::new(path))?;
                if rows.len() < 2 {
                    return Err(bad("density file needs at least two rows".into()));
                }
                let breakpoints: Vec<f64> = rows.iter().map(|r| r.0).collect();
                let values: Vec<f64> = rows[..rows.len() - 1].iter().map(|r| r.1).collect();
                Measure::piecewise_density(breakpoints, values)
            }
            other => Err(bad(format!(
                "unknown measure `{other}` (expected uniform:A,B | arcsine | diskexit:K | atoms:X:W,... | empirical:PATH | density:PATH)"
            ))),
        }
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::InvalidArgument(format!("`{s}` is not a real number")))
}

fn read_reals(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        out.push(parse_f64(line)?);
    }
    Ok(out)
}

fn read_pairs(path: &Path) -> Result<Vec<(f64, f64)>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (a, b) = line.split_once(',').ok_or_else(|| {
            Error::InvalidArgument(format!("row `{line}` must be breakpoint,value"))
        })?;
        out.push((parse_f64(a)?, parse_f64(b)?));
    }
    Ok(out)
}

/// Signed primitive of `|x|^p`: `sign(x) |x|^{p+1} / (p+1)`.
fn abs_power_primitive(x: f64, p: f64) -> f64 {
    x.signum() * x.abs().powf(p + 1.0) / (p + 1.0)
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::Uniform { a, b } => write!(f, "uniform:{a},{b}"),
            Measure::ArcsineShifted => write!(f, "arcsine"),
            Measure::ShiftedDiskExit { kappa } => write!(f, "diskexit:{kappa}"),
            Measure::Atomic { atoms } => {
                write!(f, "atoms:")?;
                for (i, (x, w)) in atoms.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}:{w}")?;
                }
                Ok(())
            }
            Measure::PiecewiseDensity { breakpoints, .. } => {
                write!(f, "density[{} cells]", breakpoints.len() - 1)
            }
            Measure::Empirical { samples } => write!(f, "empirical[{}]", samples.len()),
        }
    }
}

/// Quantile of a measure as a callable, valid on the open interval `(0, 1)`.
#[derive(Debug, Clone, Copy)]
pub struct QuantileFn<'a> {
    measure: &'a Measure,
}

impl QuantileFn<'_> {
    /// Evaluates `Q(u)`. Callers must keep `u` inside `(0, 1)`.
    pub fn eval(&self, u: f64) -> f64 {
        self.measure.quantile_unchecked(u)
    }

    pub fn measure(&self) -> &Measure {
        self.measure
    }
}
