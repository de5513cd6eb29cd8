//! Power-series domains `f(𝔻)`, the Gross construction, and shape
//! functionals.
//!
//! A domain is held as a truncated series `f(z) = Σ c_n zⁿ`. For a centered
//! law `μ` the Gross domain takes `c_n = a_n`, the cosine coefficients of the
//! quantile trace. The functionals below depend only on the coefficients:
//!
//! * area `π Σ n |c_n|²`
//! * Skorokhod energy `(1/4) Σ n² |c_n|²`
//! * expected exit time `(1/2) Σ |c_n|²` (equals `Var(μ_U)`)
//!
//! Univalence of a truncated series is screened numerically, not proven: the
//! boundary polyline is checked for self-intersections, the winding number
//! about the origin must be 1, and `|f'|` must stay positive near `|z| = 1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier;
use crate::measure::Measure;
use crate::rearrange::BoundaryTrace;

/// Truncated complex power series `Σ_{n=1}^{N} c_n zⁿ` viewed as the domain
/// `f(𝔻)`. Univalence is not an invariant; see [`PowerSeriesDomain::univalence_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DomainFile", into = "DomainFile")]
pub struct PowerSeriesDomain {
    coeffs: Vec<Complex64>,
    provenance: String,
}

/// JSON schema: `{"coeffs": [[re, im], ...], "provenance": "...", "truncation": N}`.
#[derive(Serialize, Deserialize)]
struct DomainFile {
    coeffs: Vec<[f64; 2]>,
    provenance: String,
    truncation: usize,
}

impl From<PowerSeriesDomain> for DomainFile {
    fn from(d: PowerSeriesDomain) -> Self {
        DomainFile {
            truncation: d.coeffs.len(),
            coeffs: d.coeffs.iter().map(|c| [c.re, c.im]).collect(),
            provenance: d.provenance,
        }
    }
}

impl TryFrom<DomainFile> for PowerSeriesDomain {
    type Error = Error;
    fn try_from(f: DomainFile) -> Result<Self> {
        if f.truncation != f.coeffs.len() {
            return Err(Error::InvalidArgument(format!(
                "truncation {} does not match {} coefficients",
                f.truncation,
                f.coeffs.len()
            )));
        }
        PowerSeriesDomain::new(
            f.coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect(),
            f.provenance,
        )
    }
}

impl PowerSeriesDomain {
    pub fn new(coeffs: Vec<Complex64>, provenance: impl Into<String>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidArgument("coefficients must be finite".into()));
        }
        Ok(PowerSeriesDomain {
            coeffs,
            provenance: provenance.into(),
        })
    }

    pub fn from_real_coeffs(coeffs: &[f64], provenance: impl Into<String>) -> Result<Self> {
        Self::new(
            coeffs.iter().map(|&a| Complex64::new(a, 0.0)).collect(),
            provenance,
        )
    }

    /// Coefficients `c_1..c_N`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// 1-based coefficient access.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs[n - 1]
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm_sqr() == 0.0)
    }

    /// Rescales every coefficient; the image scales accordingly.
    pub fn scaled(&self, factor: f64) -> PowerSeriesDomain {
        PowerSeriesDomain {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
            provenance: format!("{} * {factor}", self.provenance),
        }
    }

    /// `f(z)` by Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc * z
    }

    /// `f'(z)` by Horner evaluation.
    pub fn eval_derivative(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, c) in self.coeffs.iter().enumerate().rev() {
            acc = acc * z + c * (n as f64 + 1.0);
        }
        acc
    }

    /// Area of the image counted with multiplicity: `π Σ n |c_n|²`.
    pub fn area(&self) -> f64 {
        PI * self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (i as f64 + 1.0) * c.norm_sqr())
            .sum::<f64>()
    }

    /// Partial Skorokhod energy `(1/4) Σ n² |c_n|²`.
    pub fn skorokhod_energy(&self) -> f64 {
        0.25 * self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let n = i as f64 + 1.0;
                n * n * c.norm_sqr()
            })
            .sum::<f64>()
    }

    /// Skorokhod energy with a convergence diagnostic: the partial sum plus
    /// the fraction contributed by the last decade of modes `(N/10, N]`.
    /// Slowly decaying coefficients (`~ n^{-3/2}`) make the full series
    /// diverge; the report flags that instead of pretending convergence.
    pub fn skorokhod_energy_report(&self) -> EnergyReport {
        let total = self.skorokhod_energy();
        let cutoff = self.coeffs.len() / 10;
        let last_decade: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .skip(cutoff)
            .map(|(i, c)| {
                let n = i as f64 + 1.0;
                0.25 * n * n * c.norm_sqr()
            })
            .sum();
        let fraction = if total > 0.0 { last_decade / total } else { 0.0 };
        EnergyReport {
            value: total,
            last_decade_fraction: fraction,
            converged: fraction <= 0.01,
        }
    }

    /// Expected exit time `(1/2) Σ |c_n|²`, equal to the variance of the
    /// exit law of the domain.
    pub fn expected_exit_time(&self) -> f64 {
        0.5 * self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }

    /// Boundary traces `(Re f(e^{iθ_j}), Im f(e^{iθ_j}))` on the midpoint grid.
    pub fn boundary_trace(&self, grid_size: usize) -> Result<(BoundaryTrace, BoundaryTrace)> {
        let min = (2 * self.truncation() + 2).max(4);
        if grid_size % 2 != 0 || grid_size < min {
            return Err(Error::InvalidArgument(format!(
                "grid size must be even and ≥ {min}, got {grid_size}"
            )));
        }
        let pts = self.boundary_points(grid_size);
        let re = BoundaryTrace::new(pts.iter().map(|p| p.re).collect())?;
        let im = BoundaryTrace::new(pts.iter().map(|p| p.im).collect())?;
        Ok((re, im))
    }

    pub(crate) fn boundary_points(&self, grid_size: usize) -> Vec<Complex64> {
        (0..grid_size)
            .map(|j| {
                let theta = -PI + (j as f64 + 0.5) * std::f64::consts::TAU / grid_size as f64;
                self.eval(Complex64::from_polar(1.0, theta))
            })
            .collect()
    }

    /// Numeric univalence screen on a `G`-point boundary polyline
    /// (`G ≥ 4N`): no self-intersections, winding number 1 about the origin,
    /// and `min |f'| > 0` on `|z| = 0.99`.
    pub fn univalence_check(&self, grid_size: usize) -> Result<UnivalenceReport> {
        let min = (4 * self.truncation()).max(8);
        if grid_size % 2 != 0 || grid_size < min {
            return Err(Error::InvalidArgument(format!(
                "univalence screen needs an even grid ≥ {min}, got {grid_size}"
            )));
        }
        if self.is_zero() {
            return Ok(UnivalenceReport {
                pass: false,
                grid_size,
                self_intersections: 0,
                winding_number: 0,
                min_boundary_derivative: 0.0,
                reason: Some("degenerate zero series".into()),
            });
        }
        let pts = self.boundary_points(grid_size);
        let self_intersections = polyline_self_intersections(&pts);
        let winding_number = winding_about_origin(&pts);
        let min_boundary_derivative = (0..grid_size)
            .map(|j| {
                let theta = -PI + (j as f64 + 0.5) * std::f64::consts::TAU / grid_size as f64;
                self.eval_derivative(Complex64::from_polar(0.99, theta)).norm()
            })
            .fold(f64::INFINITY, f64::min);
        let pass = self_intersections == 0 && winding_number == 1 && min_boundary_derivative > 0.0;
        let reason = if pass {
            None
        } else if self_intersections > 0 {
            Some(format!("{self_intersections} boundary self-intersections"))
        } else if winding_number != 1 {
            Some(format!("winding number {winding_number} about the origin"))
        } else {
            Some("vanishing derivative near the boundary".into())
        };
        Ok(UnivalenceReport {
            pass,
            grid_size,
            self_intersections,
            winding_number,
            min_boundary_derivative,
            reason,
        })
    }
}

/// Evidence gathered by the univalence screen.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UnivalenceReport {
    pub pass: bool,
    pub grid_size: usize,
    pub self_intersections: usize,
    pub winding_number: i64,
    pub min_boundary_derivative: f64,
    pub reason: Option<String>,
}

/// Partial-sum Skorokhod energy with its tail diagnostic.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EnergyReport {
    pub value: f64,
    pub last_decade_fraction: f64,
    pub converged: bool,
}

/// Builds the Gross domain of a measure: the power series whose coefficients
/// are the cosine coefficients of `Q(|θ|/π)`.
pub fn gross_domain(m: &Measure, n_terms: usize) -> Result<PowerSeriesDomain> {
    let series = fourier::quantile_cosine_coeffs(m, n_terms)?;
    PowerSeriesDomain::from_real_coeffs(series.coeffs(), format!("gross({m})"))
}

/// Inner-circle comparison for the oscillation `cos(nθ)` against its
/// rearrangement `cos(θ)`: the circle integrals of `|∂_θ zⁿ|²` and
/// `|∂_θ z|²` at radius `r` are `π n² r^{2n}` and `π r²`. The rearranged
/// side is dominated on the full circle (`r = 1`) but not on inner circles.
pub fn inner_circle_counterexample(mode: u32, radius: f64) -> InnerCircleReport {
    let n = mode as f64;
    let original_energy = PI * n * n * radius.powi(2 * mode as i32);
    let rearranged_energy = PI * radius * radius;
    let ratio = n * n * radius.powi(2 * mode as i32 - 2);
    InnerCircleReport {
        mode,
        radius,
        original_energy,
        rearranged_energy,
        ratio,
        holds: rearranged_energy <= original_energy,
    }
}

/// Output of [`inner_circle_counterexample`]. `holds` reports whether the
/// inner-circle domination `π r² ≤ π n² r^{2n}` survives at this `(n, r)`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct InnerCircleReport {
    pub mode: u32,
    pub radius: f64,
    pub original_energy: f64,
    pub rearranged_energy: f64,
    /// `n² r^{2n-2}`; the domination holds iff this is ≥ 1.
    pub ratio: f64,
    pub holds: bool,
}

fn winding_about_origin(pts: &[Complex64]) -> i64 {
    let mut total = 0.0;
    for i in 0..pts.len() {
        let a = pts[i];
        let b = pts[(i + 1) % pts.len()];
        if a.norm_sqr() == 0.0 || b.norm_sqr() == 0.0 {
            return 0;
        }
        total += (b * a.conj()).arg();
    }
    (total / std::f64::consts::TAU).round() as i64
}

/// Counts proper self-intersections of the closed polyline. Segments are
/// sorted by their minimal x and only x-overlapping pairs are tested;
/// adjacent segments (sharing an endpoint) are skipped.
fn polyline_self_intersections(pts: &[Complex64]) -> usize {
    let n = pts.len();
    struct Seg {
        idx: usize,
        ax: f64,
        ay: f64,
        bx: f64,
        by: f64,
        min_x: f64,
        max_x: f64,
        min_y: f64,
        max_y: f64,
    }
    let mut segs: Vec<Seg> = (0..n)
        .map(|i| {
            let a = pts[i];
            let b = pts[(i + 1) % n];
            Seg {
                idx: i,
                ax: a.re,
                ay: a.im,
                bx: b.re,
                by: b.im,
                min_x: a.re.min(b.re),
                max_x: a.re.max(b.re),
                min_y: a.im.min(b.im),
                max_y: a.im.max(b.im),
            }
        })
        .collect();
    segs.sort_by(|l, r| l.min_x.total_cmp(&r.min_x));

    let cross = |ox: f64, oy: f64, px: f64, py: f64, qx: f64, qy: f64| -> f64 {
        (px - ox) * (qy - oy) - (py - oy) * (qx - ox)
    };
    let mut count = 0;
    for i in 0..segs.len() {
        let s = &segs[i];
        for t in segs.iter().skip(i + 1) {
            if t.min_x > s.max_x {
                break;
            }
            let gap = (s.idx as i64 - t.idx as i64).rem_euclid(n as i64);
            if gap <= 1 || gap >= n as i64 - 1 {
                continue; // same or adjacent segment
            }
            if t.min_y > s.max_y || t.max_y < s.min_y {
                continue;
            }
            let d1 = cross(s.ax, s.ay, s.bx, s.by, t.ax, t.ay);
            let d2 = cross(s.ax, s.ay, s.bx, s.by, t.bx, t.by);
            let d3 = cross(t.ax, t.ay, t.bx, t.by, s.ax, s.ay);
            let d4 = cross(t.ax, t.ay, t.bx, t.by, s.bx, s.by);
            if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
                && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
            {
                count += 1;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const ZETA_3: f64 = 1.202_056_903_159_594_3;

    fn identity() -> PowerSeriesDomain {
        PowerSeriesDomain::from_real_coeffs(&[1.0], "manual").unwrap()
    }

    #[test]
    fn gross_domain_examples() {
        let arc = gross_domain(&Measure::ArcsineShifted, 8).unwrap();
        assert_abs_diff_eq!(arc.coeff(1).re, -1.0, epsilon = 1e-10);
        for n in 2..=8 {
            assert_abs_diff_eq!(arc.coeff(n).norm(), 0.0, epsilon = 1e-10);
        }

        let uni = gross_domain(&Measure::uniform(-1.0, 1.0).unwrap(), 6).unwrap();
        for k in 1..=3usize {
            let n = 2 * k - 1;
            assert_abs_diff_eq!(
                uni.coeff(n).re,
                -8.0 / (PI * PI * (n * n) as f64),
                epsilon = 1e-13
            );
            if n + 1 <= 6 {
                assert_abs_diff_eq!(uni.coeff(n + 1).norm(), 0.0, epsilon = 1e-13);
            }
        }

        let point = gross_domain(&Measure::atomic(vec![(0.0, 1.0)]).unwrap(), 4).unwrap();
        assert!(point.is_zero());
        assert_eq!(point.area(), 0.0);
    }

    #[test]
    fn area_examples() {
        let arc = gross_domain(&Measure::ArcsineShifted, 64).unwrap();
        assert_abs_diff_eq!(arc.area(), PI, epsilon = 1e-10);
        assert_abs_diff_eq!(identity().area(), PI);

        let uni = gross_domain(&Measure::uniform(-1.0, 1.0).unwrap(), 10_000).unwrap();
        assert_abs_diff_eq!(uni.area(), 56.0 * ZETA_3 / PI.powi(3), epsilon = 1e-6);
    }

    #[test]
    fn skorokhod_energy_examples() {
        assert_abs_diff_eq!(identity().skorokhod_energy(), 0.25);
        let arc = gross_domain(&Measure::ArcsineShifted, 16).unwrap();
        assert_abs_diff_eq!(arc.skorokhod_energy(), 0.25, epsilon = 1e-9);

        // Analytic limit (16/π⁴) Σ_{odd} n^{-2} = 2/π² as the oracle.
        let uni = gross_domain(&Measure::uniform(-1.0, 1.0).unwrap(), 100_000).unwrap();
        let report = uni.skorokhod_energy_report();
        assert_abs_diff_eq!(report.value, 2.0 / (PI * PI), epsilon = 1e-6);
        assert!(report.converged);
    }

    #[test]
    fn divergent_energy_is_flagged() {
        // |c_n| = n^{-3/2} makes n²|c_n|² = 1/n: the partial sums diverge and
        // the last decade keeps contributing a fixed share.
        let coeffs: Vec<f64> = (1..=4096).map(|n| (n as f64).powf(-1.5)).collect();
        let d = PowerSeriesDomain::from_real_coeffs(&coeffs, "manual").unwrap();
        let report = d.skorokhod_energy_report();
        assert!(!report.converged);
        assert!(report.last_decade_fraction > 0.2);
    }

    #[test]
    fn exit_time_examples() {
        let uni = gross_domain(&Measure::uniform(-1.0, 1.0).unwrap(), 4000).unwrap();
        assert_abs_diff_eq!(uni.expected_exit_time(), 1.0 / 3.0, epsilon = 1e-7);
        // Var of the arcsine law is 1/2 (quadrature oracle in measure tests).
        let arc = gross_domain(&Measure::ArcsineShifted, 16).unwrap();
        assert_abs_diff_eq!(arc.expected_exit_time(), 0.5, epsilon = 1e-9);
        let zero = PowerSeriesDomain::from_real_coeffs(&[], "manual").unwrap();
        assert_eq!(zero.expected_exit_time(), 0.0);
    }

    #[test]
    fn exit_time_increases_to_variance() {
        let fixtures = [
            Measure::uniform(-1.0, 1.0).unwrap(),
            Measure::ArcsineShifted,
            Measure::shifted_disk_exit(0.5).unwrap(),
        ];
        for m in &fixtures {
            let var = m.variance();
            let mut prev = 0.0;
            for n in [10, 100, 1000] {
                let et = gross_domain(m, n).unwrap().expected_exit_time();
                assert!(et >= prev - 1e-12);
                assert!(et <= var + 1e-9, "{m}: E[tau] {et} exceeds Var {var}");
                prev = et;
            }
            assert!(prev >= 0.99 * var, "{m}: captured {prev} < 99% of {var}");
        }
    }

    #[test]
    fn boundary_trace_examples() {
        let (re, im) = identity().boundary_trace(16).unwrap();
        for j in 0..16 {
            assert_abs_diff_eq!(re.values()[j], re.theta(j).cos(), epsilon = 1e-14);
            assert_abs_diff_eq!(im.values()[j], im.theta(j).sin(), epsilon = 1e-14);
        }
        let arc = gross_domain(&Measure::ArcsineShifted, 4).unwrap();
        let (re, im) = arc.boundary_trace(32).unwrap();
        for j in 0..32 {
            assert_abs_diff_eq!(re.values()[j], -re.theta(j).cos(), epsilon = 1e-9);
            assert_abs_diff_eq!(im.values()[j], -im.theta(j).sin(), epsilon = 1e-9);
        }
    }

    #[test]
    fn gross_imaginary_trace_is_odd() {
        // Real coefficients make the domain symmetric about the real axis.
        let d = gross_domain(&Measure::uniform(-1.0, 1.0).unwrap(), 64).unwrap();
        let (_, im) = d.boundary_trace(256).unwrap();
        let v = im.values();
        for j in 0..128 {
            assert_abs_diff_eq!(v[255 - j], -v[j], epsilon = 1e-12);
        }
    }

    #[test]
    fn area_dominates_exit_time_termwise() {
        // area ≥ 2π E[τ] and 4Λ ≥ area/π, both exact on finite series.
        let d = PowerSeriesDomain::new(
            vec![
                Complex64::new(1.0, 0.2),
                Complex64::new(-0.3, 0.05),
                Complex64::new(0.0, 0.11),
            ],
            "manual",
        )
        .unwrap();
        assert!(d.area() >= 2.0 * PI * d.expected_exit_time() - 1e-12);
        assert!(4.0 * d.skorokhod_energy() >= d.area() / PI - 1e-12);
        let disk = identity();
        assert_abs_diff_eq!(disk.area(), 2.0 * PI * disk.expected_exit_time());
    }

    #[test]
    fn univalence_examples() {
        assert!(identity().univalence_check(64).unwrap().pass);

        let z2 = PowerSeriesDomain::from_real_coeffs(&[0.0, 1.0], "manual").unwrap();
        let report = z2.univalence_check(64).unwrap();
        assert!(!report.pass);
        assert_eq!(report.winding_number, 2);

        let zero = PowerSeriesDomain::from_real_coeffs(&[0.0], "manual").unwrap();
        assert!(!zero.univalence_check(64).unwrap().pass);

        let uni = gross_domain(&Measure::uniform(-1.0, 1.0).unwrap(), 512).unwrap();
        let report = uni.univalence_check(4096).unwrap();
        assert!(report.pass, "{:?}", report.reason);
    }

    #[test]
    fn self_intersection_detected() {
        // f(z) = z + 1.5 z³ is not univalent: the boundary curve loops.
        let d = PowerSeriesDomain::from_real_coeffs(&[1.0, 0.0, 1.5], "manual").unwrap();
        let report = d.univalence_check(256).unwrap();
        assert!(!report.pass);
    }

    #[test]
    fn inner_circle_examples() {
        let r = inner_circle_counterexample(3, 0.5);
        assert_abs_diff_eq!(r.ratio, 9.0 / 16.0);
        assert!(!r.holds);
        assert_abs_diff_eq!(r.rearranged_energy, PI * 0.25);
        assert_abs_diff_eq!(r.original_energy, PI * 9.0 * 0.5f64.powi(6));

        let eq = inner_circle_counterexample(1, 0.73);
        assert_abs_diff_eq!(eq.ratio, 1.0);
        assert!(eq.holds);

        let r2 = inner_circle_counterexample(2, 0.9);
        assert_abs_diff_eq!(r2.ratio, 4.0 * 0.81, epsilon = 1e-12);
        assert!(r2.holds);
    }

    #[test]
    fn json_round_trip() {
        let d = gross_domain(&Measure::uniform(-1.0, 1.0).unwrap(), 8).unwrap();
        let text = serde_json::to_string(&d).unwrap();
        assert!(text.contains("\"truncation\":8"));
        let back: PowerSeriesDomain = serde_json::from_str(&text).unwrap();
        assert_eq!(back, d);
    }
}
