//! Brownian symmetrization `𝔅(U) = U^G_{μ_U}`, Steiner symmetrization on
//! rasters, the area ratio `ρ`, and the area-minimality trials.
//!
//! `𝔅` of a concrete shape is always computed through samples: exit law →
//! empirical measure → Gross domain → functionals. The report carries the
//! truncation and sample count so every inequality check has an explicit
//! error budget; the exact objects of the theory are compared here through
//! estimators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::trace_spectrum;
use crate::gross::{gross_domain, PowerSeriesDomain};
use crate::measure::Measure;
use crate::rearrange::sdr;
use crate::sampler::{
    conformal_exit_samples, empirical_measure, mobius_shifted_disk_samples, wos_exit_samples,
    GeometricDomain, SampleSet,
};

const WOS_MAX_STEPS: usize = 10_000;

/// Occupancy raster over a square box `[-L, L]²` centered at the origin.
/// The real axis lies on a cell boundary (even resolution), which makes the
/// Steiner restacking exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RasterDomain {
    resolution: usize,
    cell_size: f64,
    /// Column-major occupancy: cell `(col, row)` at `col * resolution + row`.
    occupancy: Vec<bool>,
}

impl RasterDomain {
    /// Rasterizes a geometric shape by cell-center containment.
    pub fn from_geometric(g: &GeometricDomain, resolution: usize) -> Result<Self> {
        let l = match g {
            GeometricDomain::Disk { radius } => *radius,
            GeometricDomain::ShiftedDisk { kappa } => 1.0 + kappa,
            GeometricDomain::Rectangle {
                half_width,
                half_height,
            } => half_width.max(*half_height),
        } * 1.02;
        Self::fill(resolution, l, |p| g.contains(p))
    }

    /// Rasterizes the image of a power-series domain: the boundary polyline
    /// is filled row by row with even–odd crossing counts.
    pub fn from_series_boundary(
        d: &PowerSeriesDomain,
        boundary_grid: usize,
        resolution: usize,
    ) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::InvalidArgument(
                "cannot rasterize a degenerate zero series".into(),
            ));
        }
        let pts = d.boundary_points(boundary_grid);
        let l = pts
            .iter()
            .map(|p| p.re.abs().max(p.im.abs()))
            .fold(0.0f64, f64::max)
            * 1.02;
        let (resolution, cell, centers) = grid_geometry(resolution, l)?;
        let mut occupancy = vec![false; resolution * resolution];
        for (row, &y) in centers.iter().enumerate() {
            let mut crossings: Vec<f64> = Vec::new();
            for i in 0..pts.len() {
                let a = pts[i];
                let b = pts[(i + 1) % pts.len()];
                if (a.im <= y && y < b.im) || (b.im <= y && y < a.im) {
                    crossings.push(a.re + (y - a.im) * (b.re - a.re) / (b.im - a.im));
                }
            }
            crossings.sort_by(f64::total_cmp);
            for pair in crossings.chunks_exact(2) {
                for (col, &x) in centers.iter().enumerate() {
                    if x >= pair[0] && x < pair[1] {
                        occupancy[col * resolution + row] = true;
                    }
                }
            }
        }
        let raster = RasterDomain {
            resolution,
            cell_size: cell,
            occupancy,
        };
        raster.require_origin()?;
        Ok(raster)
    }

    fn fill(resolution: usize, l: f64, inside: impl Fn((f64, f64)) -> bool) -> Result<Self> {
        let (resolution, cell, centers) = grid_geometry(resolution, l)?;
        let mut occupancy = vec![false; resolution * resolution];
        for (col, &x) in centers.iter().enumerate() {
            for (row, &y) in centers.iter().enumerate() {
                if inside((x, y)) {
                    occupancy[col * resolution + row] = true;
                }
            }
        }
        let raster = RasterDomain {
            resolution,
            cell_size: cell,
            occupancy,
        };
        raster.require_origin()?;
        Ok(raster)
    }

    fn require_origin(&self) -> Result<()> {
        let r = self.resolution;
        let mid = r / 2;
        let corners = [
            (mid, mid),
            (mid - 1, mid),
            (mid, mid - 1),
            (mid - 1, mid - 1),
        ];
        if corners.iter().any(|&(c, w)| self.occupancy[c * r + w]) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(
                "raster does not cover the origin".into(),
            ))
        }
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn occupied_count(&self) -> usize {
        self.occupancy.iter().filter(|b| **b).count()
    }

    pub fn area(&self) -> f64 {
        self.occupied_count() as f64 * self.cell_size * self.cell_size
    }

    pub fn is_occupied(&self, col: usize, row: usize) -> bool {
        self.occupancy[col * self.resolution + row]
    }

    fn column(&self, col: usize) -> &[bool] {
        &self.occupancy[col * self.resolution..(col + 1) * self.resolution]
    }

    pub fn column_count(&self, col: usize) -> usize {
        self.column(col).iter().filter(|b| **b).count()
    }

    /// Occupied row runs per column, for silhouette export.
    pub fn column_runs(&self, col: usize) -> Vec<(usize, usize)> {
        let mut runs = Vec::new();
        let mut start = None;
        for (row, &occ) in self.column(col).iter().enumerate() {
            match (occ, start) {
                (true, None) => start = Some(row),
                (false, Some(s)) => {
                    runs.push((s, row));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            runs.push((s, self.resolution));
        }
        runs
    }

    /// Physical coordinate of the center of cell `(col, row)`.
    pub fn cell_center(&self, col: usize, row: usize) -> (f64, f64) {
        let offset = |i: usize| (i as f64 + 0.5 - self.resolution as f64 / 2.0) * self.cell_size;
        (offset(col), offset(row))
    }
}

fn grid_geometry(resolution: usize, l: f64) -> Result<(usize, f64, Vec<f64>)> {
    if resolution < 4 || resolution % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "raster resolution must be even and ≥ 4, got {resolution}"
        )));
    }
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "raster extent must be positive, got {l}"
        )));
    }
    let cell = 2.0 * l / resolution as f64;
    let centers: Vec<f64> = (0..resolution)
        .map(|i| (i as f64 + 0.5 - resolution as f64 / 2.0) * cell)
        .collect();
    Ok((resolution, cell, centers))
}

/// Steiner symmetrization with respect to the real axis: every column keeps
/// its occupied-cell count and is restacked as a contiguous block centered
/// on the axis. Total count is preserved exactly and the map is idempotent.
pub fn steiner_raster(r: &RasterDomain) -> RasterDomain {
    let res = r.resolution;
    let mut occupancy = vec![false; res * res];
    for col in 0..res {
        let k = r.column_count(col);
        let start = (res - k) / 2;
        for row in start..start + k {
            occupancy[col * res + row] = true;
        }
    }
    RasterDomain {
        resolution: res,
        cell_size: r.cell_size,
        occupancy,
    }
}

/// Input of [`brownian_symmetrize`].
#[derive(Debug, Clone)]
pub enum SymmetrizeSource {
    Geometric(GeometricDomain),
    Series(PowerSeriesDomain),
}

impl SymmetrizeSource {
    fn area(&self) -> f64 {
        match self {
            SymmetrizeSource::Geometric(g) => g.area(),
            SymmetrizeSource::Series(d) => d.area(),
        }
    }

    fn label(&self) -> String {
        match self {
            SymmetrizeSource::Geometric(g) => g.to_string(),
            SymmetrizeSource::Series(d) => format!("series[{}]", d.truncation()),
        }
    }

    fn sample(&self, n: usize, eps: f64, seed: u64) -> Result<SampleSet> {
        match self {
            SymmetrizeSource::Geometric(GeometricDomain::Disk { radius }) => {
                let id = PowerSeriesDomain::from_real_coeffs(&[*radius], "disk")?;
                Ok(conformal_exit_samples(&id, n, seed))
            }
            SymmetrizeSource::Geometric(GeometricDomain::ShiftedDisk { kappa }) => {
                mobius_shifted_disk_samples(*kappa, n, seed)
            }
            SymmetrizeSource::Geometric(g @ GeometricDomain::Rectangle { .. }) => {
                wos_exit_samples(g, eps, n, seed, WOS_MAX_STEPS)
            }
            SymmetrizeSource::Series(d) => Ok(conformal_exit_samples(d, n, seed)),
        }
    }
}

/// Diagnostics attached to a symmetrization run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetrizeDiagnostics {
    pub source: String,
    pub seed: u64,
    pub sample_count: usize,
    pub excluded: usize,
    pub truncation: usize,
    pub recentred: bool,
    pub raw_mean: f64,
    pub sample_variance: f64,
    /// Fraction of the sample variance captured by the truncated series:
    /// `E[τ](𝔅) / Var(μ̂)`.
    pub captured_energy: f64,
    /// Point-mass samples produce a zero-area symmetrization.
    pub degenerate: bool,
}

/// Result of one Brownian symmetrization pipeline run.
#[derive(Debug, Clone)]
pub struct SymmetrizationReport {
    pub mu_hat: Measure,
    pub gross: PowerSeriesDomain,
    pub area_b: f64,
    pub area_u: f64,
    /// `area_b / area_u`; 0 with a note when `area_u` is not finite-positive.
    pub rho: f64,
    pub rho_note: Option<String>,
    pub diagnostics: SymmetrizeDiagnostics,
}

/// The ratio `ρ(U) = A(𝔅(U)) / A(U)`. Undefined for zero or infinite
/// source area; the report's `rho`/`rho_note` pair carries the annotation
/// in that case.
pub fn rho(report: &SymmetrizationReport) -> Result<f64> {
    if report.area_u.is_finite() && report.area_u > 0.0 {
        Ok(report.area_b / report.area_u)
    } else {
        Err(Error::Unsupported(format!(
            "rho undefined for source area {}; see rho_note",
            report.area_u
        )))
    }
}

/// Runs the Brownian symmetrization pipeline: sample the exit law of the
/// source, form the empirical measure, build its Gross domain, and compare
/// areas. Exact samplers are used where available (conformal for series and
/// disks, Möbius for shifted disks); rectangles go through walk-on-spheres.
pub fn brownian_symmetrize(
    source: &SymmetrizeSource,
    n_samples: usize,
    n_terms: usize,
    eps: f64,
    seed: u64,
) -> Result<SymmetrizationReport> {
    let samples = source.sample(n_samples, eps, seed)?;
    let centered = empirical_measure(&samples)?;
    let sample_variance = centered.measure.variance();
    let area_u = source.area();

    let degenerate = sample_variance == 0.0;
    let gross = if degenerate {
        PowerSeriesDomain::from_real_coeffs(&[0.0], format!("gross({})", source.label()))?
    } else {
        let mut g = gross_domain(&centered.measure, n_terms)?;
        g = PowerSeriesDomain::new(g.coeffs().to_vec(), format!("gross({})", source.label()))?;
        g
    };
    let area_b = gross.area();

    let (rho, rho_note) = if degenerate {
        (
            0.0,
            Some("degenerate point-mass sample: zero-area symmetrization".to_string()),
        )
    } else if area_u.is_finite() && area_u > 0.0 {
        (area_b / area_u, None)
    } else {
        (
            0.0,
            Some(format!("source area {area_u}: rho annotated 0")),
        )
    };

    let captured_energy = if degenerate {
        0.0
    } else {
        gross.expected_exit_time() / sample_variance
    };

    Ok(SymmetrizationReport {
        mu_hat: centered.measure,
        gross,
        area_b,
        area_u,
        rho,
        rho_note,
        diagnostics: SymmetrizeDiagnostics {
            source: source.label(),
            seed,
            sample_count: samples.count(),
            excluded: samples.excluded(),
            truncation: n_terms,
            recentred: centered.recentred,
            raw_mean: centered.raw_mean,
            sample_variance,
            captured_energy,
            degenerate,
        },
    })
}

/// Analytic fixture with no Monte Carlo: the uniform law on `(-1, 1)` arises
/// as the exit law of an unbounded domain, yet its Gross domain has finite
/// area `56ζ(3)/π³`. The source area is infinite, so `ρ` is annotated 0.
pub fn uniform_bm_fixture(n_terms: usize) -> Result<SymmetrizationReport> {
    let measure = Measure::uniform(-1.0, 1.0)?;
    let gross = gross_domain(&measure, n_terms)?;
    let area_b = gross.area();
    let variance = measure.variance();
    let captured_energy = gross.expected_exit_time() / variance;
    Ok(SymmetrizationReport {
        mu_hat: measure,
        gross,
        area_b,
        area_u: f64::INFINITY,
        rho: 0.0,
        rho_note: Some("source area inf: rho annotated 0".to_string()),
        diagnostics: SymmetrizeDiagnostics {
            source: "uniform-law unbounded fixture".to_string(),
            seed: 0,
            sample_count: 0,
            excluded: 0,
            truncation: n_terms,
            recentred: false,
            raw_mean: 0.0,
            sample_variance: variance,
            captured_energy,
            degenerate: false,
        },
    })
}

/// One deterministic area-minimality comparison.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AreaMinimalityTrial {
    /// Area of the series rebuilt from the rearranged boundary trace.
    pub area_gross: f64,
    /// Area of the input series.
    pub area_u: f64,
    /// Discretization allowance: `10·(π·tail_energy + 1/G)`.
    pub tol: f64,
    pub ok: bool,
}

/// Deterministic (no Monte Carlo) area-minimality trial: take the real
/// boundary trace of `u`, rearrange it, project on `N` modes, and compare
/// the resulting area against the area of `u`. The input must pass the
/// univalence screen, so that it is a genuine domain for its own exit law.
pub fn area_minimality_trial(
    u: &PowerSeriesDomain,
    grid_size: usize,
    n_terms: usize,
) -> Result<AreaMinimalityTrial> {
    let screen = u.univalence_check(grid_size)?;
    if !screen.pass {
        return Err(Error::Unsupported(format!(
            "univalence screen failed: {}",
            screen.reason.unwrap_or_else(|| "no reason recorded".into())
        )));
    }
    let (re, _) = u.boundary_trace(grid_size)?;
    let rearranged = sdr(&re);
    let spec = trace_spectrum(&rearranged, n_terms)?;
    let area_gross = std::f64::consts::PI
        * (1..=n_terms)
            .map(|n| n as f64 * spec.mode_energy(n))
            .sum::<f64>();
    let area_u = u.area();

    // Spectral energy of the rearranged trace not captured by the N modes.
    let g = grid_size as f64;
    let total2 = rearranged.values().iter().map(|v| v * v).sum::<f64>() / g;
    let captured2 = spec.mean_term * spec.mean_term
        + 0.5 * (1..=n_terms).map(|n| spec.mode_energy(n)).sum::<f64>();
    let tail = (2.0 * (total2 - captured2)).max(0.0);
    let tol = 10.0 * (std::f64::consts::PI * tail + 1.0 / g);

    Ok(AreaMinimalityTrial {
        area_gross,
        area_u,
        tol,
        ok: area_gross <= area_u + tol,
    })
}

/// Family swept by [`variance_collapse_sweep`].
#[derive(Debug, Clone, Copy)]
pub enum SweepKind {
    /// `𝔻 - κi` for the listed `κ` values.
    ShiftedDisk,
    /// Rectangles of fixed area `a`: parameter `b` gives `(a/(2b)) × (b/2)`
    /// half-sizes.
    ThinRectangle { area: f64 },
}

/// One row of a variance-collapse sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub parameter: f64,
    pub variance: f64,
    pub closed_form_variance: Option<f64>,
    pub area_u: f64,
    pub gross_area: f64,
    pub rho: f64,
    pub sample_count: usize,
    pub excluded: usize,
    pub seed: u64,
}

/// Sweeps a domain family, reporting per parameter the estimated exit-law
/// variance, the source area, the reconstructed Gross area, and `ρ`.
/// Row `i` uses seed `seed + i` so rows are independent and reproducible.
pub fn variance_collapse_sweep(
    kind: SweepKind,
    params: &[f64],
    n_samples: usize,
    n_terms: usize,
    eps: f64,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    if params.is_empty() {
        return Err(Error::InvalidArgument("sweep needs parameters".into()));
    }
    params
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let row_seed = seed + i as u64;
            let (source, closed_form_variance) = match kind {
                SweepKind::ShiftedDisk => (
                    SymmetrizeSource::Geometric(GeometricDomain::shifted_disk(p)?),
                    Some((1.0 - p * p) / 2.0),
                ),
                SweepKind::ThinRectangle { area } => {
                    if !(p > 0.0) {
                        return Err(Error::InvalidArgument(format!(
                            "rectangle parameter must be positive, got {p}"
                        )));
                    }
                    (
                        SymmetrizeSource::Geometric(GeometricDomain::rectangle(
                            area / (2.0 * p),
                            p / 2.0,
                        )?),
                        None,
                    )
                }
            };
            let report = brownian_symmetrize(&source, n_samples, n_terms, eps, row_seed)?;
            Ok(SweepRow {
                parameter: p,
                variance: report.diagnostics.sample_variance,
                closed_form_variance,
                area_u: report.area_u,
                gross_area: report.area_b,
                rho: report.rho,
                sample_count: report.diagnostics.sample_count,
                excluded: report.diagnostics.excluded,
                seed: row_seed,
            })
        })
        .collect()
}

/// Summary of the empirical measure used in serialized reports (the full
/// sample list stays in memory only).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureSummary {
    pub kind: String,
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub min: f64,
    pub max: f64,
}

impl MeasureSummary {
    pub fn of(m: &Measure) -> Self {
        let (kind, count, min, max) = match m {
            Measure::Empirical { samples } => (
                "empirical".to_string(),
                samples.len(),
                samples.first().copied().unwrap_or(f64::NAN),
                samples.last().copied().unwrap_or(f64::NAN),
            ),
            other => (other.to_string(), 0, f64::NAN, f64::NAN),
        };
        MeasureSummary {
            kind,
            count,
            mean: m.mean(),
            variance: m.variance(),
            min,
            max,
        }
    }
}

/// Serializable view of a [`SymmetrizationReport`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetrizationRecord {
    pub mu_hat: MeasureSummary,
    pub gross: PowerSeriesDomain,
    pub area_b: f64,
    pub area_u: f64,
    pub rho: f64,
    pub rho_note: Option<String>,
    pub diagnostics: SymmetrizeDiagnostics,
}

impl From<&SymmetrizationReport> for SymmetrizationRecord {
    fn from(r: &SymmetrizationReport) -> Self {
        SymmetrizationRecord {
            mu_hat: MeasureSummary::of(&r.mu_hat),
            gross: r.gross.clone(),
            area_b: r.area_b,
            area_u: r.area_u,
            rho: r.rho,
            rho_note: r.rho_note.clone(),
            diagnostics: r.diagnostics.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    const ZETA_3: f64 = 1.202_056_903_159_594_3;

    #[test]
    fn steiner_preserves_counts_and_is_idempotent() {
        let g = GeometricDomain::shifted_disk(0.5).unwrap();
        let r = RasterDomain::from_geometric(&g, 128).unwrap();
        let s = steiner_raster(&r);
        assert_eq!(r.occupied_count(), s.occupied_count());
        for col in 0..r.resolution() {
            assert_eq!(r.column_count(col), s.column_count(col));
        }
        assert_eq!(steiner_raster(&s), s);
    }

    #[test]
    fn steiner_fixes_symmetric_shapes() {
        let g = GeometricDomain::disk(1.0).unwrap();
        let r = RasterDomain::from_geometric(&g, 128).unwrap();
        assert_eq!(steiner_raster(&r), r);
        let sq = GeometricDomain::rectangle(0.5, 0.5).unwrap();
        let r = RasterDomain::from_geometric(&sq, 64).unwrap();
        assert_eq!(steiner_raster(&r), r);
    }

    #[test]
    fn steiner_centers_the_shifted_disk() {
        // Column lengths of a disk do not depend on the vertical shift, so
        // Steiner of the shifted disk is the centered disk, cell for cell.
        let shifted = RasterDomain::from_geometric(
            &GeometricDomain::shifted_disk(0.5).unwrap(),
            200,
        )
        .unwrap();
        let s = steiner_raster(&shifted);
        // Compare column run midpoints against 0 (within one cell).
        for col in 0..s.resolution() {
            let runs = s.column_runs(col);
            if let Some(&(start, end)) = runs.first() {
                assert_eq!(runs.len(), 1);
                let mid = (start + end) as f64 / 2.0;
                assert!((mid - s.resolution() as f64 / 2.0).abs() <= 1.0);
            }
        }
    }

    #[test]
    fn steiner_restacks_an_l_shape() {
        // Hand-built raster: column 0 occupies rows {0, 1, 5}, column 1 row {2}.
        let mut occupancy = vec![false; 36];
        occupancy[0] = true;
        occupancy[1] = true;
        occupancy[5] = true;
        occupancy[6 + 2] = true;
        occupancy[2 * 6 + 3] = true; // origin block
        let r = RasterDomain {
            resolution: 6,
            cell_size: 0.5,
            occupancy,
        };
        let s = steiner_raster(&r);
        assert_eq!(s.occupied_count(), r.occupied_count());
        assert_eq!(s.column_runs(0), vec![(1, 4)]);
        assert_eq!(s.column_runs(1), vec![(2, 3)]);
    }

    #[test]
    fn disk_is_a_fixed_point_of_brownian_symmetrization() {
        let source = SymmetrizeSource::Geometric(GeometricDomain::disk(1.0).unwrap());
        let report = brownian_symmetrize(&source, 200_000, 128, 1e-6, 42).unwrap();
        let a1 = report.gross.coeff(1).norm();
        assert!((a1 - 1.0).abs() < 0.02, "a1 = {a1}");
        let tail: f64 = (2..=report.gross.truncation())
            .map(|n| report.gross.coeff(n).norm_sqr())
            .sum();
        assert!(tail < 1e-3, "tail energy {tail}");
        assert!((report.rho - 1.0).abs() < 0.02, "rho = {}", report.rho);
    }

    #[test]
    fn shifted_disk_strictly_contracts() {
        let source = SymmetrizeSource::Geometric(GeometricDomain::shifted_disk(0.9).unwrap());
        let report = brownian_symmetrize(&source, 200_000, 256, 1e-6, 42).unwrap();
        assert!(report.rho < 1.0);
        // area_B ≥ 2π Var(μ) = π (1 - κ²).
        assert!(report.area_b >= PI * (1.0 - 0.81) * 0.95);
        assert!(report.area_b <= report.area_u * 1.03);
        assert_abs_diff_eq!(rho(&report).unwrap(), report.rho);
    }

    #[test]
    fn square_is_nearly_fixed() {
        let source =
            SymmetrizeSource::Geometric(GeometricDomain::rectangle(0.5, 0.5).unwrap());
        let report = brownian_symmetrize(&source, 200_000, 256, 1e-6, 42).unwrap();
        assert!((report.rho - 1.0).abs() < 0.03, "rho = {}", report.rho);
    }

    #[test]
    fn degenerate_point_mass_is_flagged() {
        let zero = PowerSeriesDomain::from_real_coeffs(&[0.0], "manual").unwrap();
        let source = SymmetrizeSource::Series(zero);
        let report = brownian_symmetrize(&source, 1000, 16, 1e-6, 1).unwrap();
        assert!(report.diagnostics.degenerate);
        assert_eq!(report.area_b, 0.0);
        assert!(report.rho_note.is_some());
    }

    #[test]
    fn exit_time_identity_holds_exactly_on_the_reconstruction() {
        // E[τ](𝔅) = ½ Σ a_n², the spectral variance of the same series.
        let source = SymmetrizeSource::Geometric(GeometricDomain::shifted_disk(0.5).unwrap());
        let report = brownian_symmetrize(&source, 50_000, 64, 1e-6, 7).unwrap();
        let spectral: f64 = (1..=report.gross.truncation())
            .map(|n| report.gross.coeff(n).norm_sqr())
            .sum::<f64>()
            / 2.0;
        assert_abs_diff_eq!(report.gross.expected_exit_time(), spectral, epsilon = 1e-15);
        // And it never exceeds the sample variance (Bessel).
        assert!(
            report.gross.expected_exit_time()
                <= report.diagnostics.sample_variance * (1.0 + 1e-9)
        );
        assert!(report.diagnostics.captured_energy <= 1.0 + 1e-9);
    }

    #[test]
    fn uniform_fixture_reports_annotated_rho() {
        let report = uniform_bm_fixture(10_000).unwrap();
        assert_abs_diff_eq!(report.area_b, 56.0 * ZETA_3 / PI.powi(3), epsilon = 1e-6);
        assert!(report.area_u.is_infinite());
        assert_eq!(report.rho, 0.0);
        assert!(report.rho_note.is_some());
        assert!(rho(&report).is_err());
    }

    #[test]
    fn area_minimality_on_the_arcsine_fixed_point() {
        let arc = gross_domain(&Measure::ArcsineShifted, 4).unwrap();
        let trial = area_minimality_trial(&arc, 1024, 64).unwrap();
        assert!(trial.ok);
        assert_abs_diff_eq!(trial.area_gross, trial.area_u, epsilon = 1e-8);
        assert_abs_diff_eq!(trial.area_u, PI, epsilon = 1e-9);
    }

    #[test]
    fn area_minimality_on_a_perturbed_disk() {
        let u = PowerSeriesDomain::new(
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.1)],
            "manual",
        )
        .unwrap();
        assert_abs_diff_eq!(u.area(), PI * 1.02, epsilon = 1e-12);
        let trial = area_minimality_trial(&u, 1024, 128).unwrap();
        assert!(trial.ok, "{trial:?}");
        assert!(trial.area_gross <= trial.area_u + trial.tol);
    }

    #[test]
    fn area_minimality_skips_non_univalent_input() {
        let bad = PowerSeriesDomain::from_real_coeffs(&[0.0, 1.0], "manual").unwrap();
        let err = area_minimality_trial(&bad, 256, 32).unwrap_err();
        assert!(err.to_string().contains("univalence"));
    }

    #[test]
    fn random_perturbed_disks_satisfy_area_minimality() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for trial in 0..40 {
            let mut coeffs = vec![Complex64::new(1.0, 0.0)];
            for n in 2..=8usize {
                let r = rng.gen_range(0.0..0.5 / (n * n * n) as f64);
                let phi = rng.gen_range(0.0..std::f64::consts::TAU);
                coeffs.push(Complex64::from_polar(r, phi));
            }
            let u = PowerSeriesDomain::new(coeffs, "manual").unwrap();
            let t = area_minimality_trial(&u, 1024, 256).unwrap();
            assert!(
                t.ok,
                "trial {trial}: area_gross {} > area_u {} + tol {}",
                t.area_gross, t.area_u, t.tol
            );
        }
    }

    #[test]
    fn gross_outputs_are_steiner_fixed_up_to_one_cell() {
        let d = gross_domain(&Measure::uniform(-1.0, 1.0).unwrap(), 128).unwrap();
        let raster = RasterDomain::from_series_boundary(&d, 2048, 256).unwrap();
        let steinered = steiner_raster(&raster);
        assert_eq!(raster.occupied_count(), steinered.occupied_count());
        for col in 0..raster.resolution() {
            let diff: usize = (0..raster.resolution())
                .filter(|&row| raster.is_occupied(col, row) != steinered.is_occupied(col, row))
                .count();
            assert!(diff <= 2, "column {col} moved {diff} cells");
        }
    }

    #[test]
    fn sweep_shifted_disks() {
        let rows = variance_collapse_sweep(
            SweepKind::ShiftedDisk,
            &[0.0, 0.5, 0.9],
            50_000,
            128,
            1e-6,
            42,
        )
        .unwrap();
        assert_eq!(rows.len(), 3);
        for row in &rows {
            let expected = row.closed_form_variance.unwrap();
            assert!(
                (row.variance - expected).abs() < 0.01,
                "kappa={}: var {} vs {}",
                row.parameter,
                row.variance,
                expected
            );
            assert!(row.rho <= 1.0 + 0.05);
            assert_abs_diff_eq!(row.area_u, PI);
        }
        assert!(rows[2].variance < rows[0].variance);
    }

    #[test]
    fn sweep_rejects_empty_params() {
        assert!(variance_collapse_sweep(SweepKind::ShiftedDisk, &[], 10, 4, 1e-6, 1).is_err());
    }

    #[test]
    fn raster_of_series_matches_its_area() {
        let d = gross_domain(&Measure::uniform(-1.0, 1.0).unwrap(), 256).unwrap();
        let raster = RasterDomain::from_series_boundary(&d, 2048, 512).unwrap();
        assert!(
            (raster.area() - d.area()).abs() / d.area() < 0.02,
            "raster {} vs series {}",
            raster.area(),
            d.area()
        );
    }
}
