//! Numerical toolkit for the planar Skorokhod embedding problem.
//!
//! Given a centered one-dimensional probability law `μ`, the library builds the
//! Gross domain — the image of the unit disc under the power series whose
//! coefficients are the cosine coefficients of the quantile trace
//! `θ ↦ Q(|θ|/π)` — and evaluates the geometric functionals attached to it:
//! area, Skorokhod energy, expected exit time, and fractional boundary
//! seminorms. A Monte Carlo layer samples the exit law `Re(Z_τ)` of planar
//! Brownian motion from concrete shapes (disks, shifted disks, rectangles),
//! closing the loop `U ↦ μ_U ↦ 𝔅(U)` known as Brownian symmetrization.
//!
//! Module map:
//!
//! * [`measure`] — probability laws with CDF / quantile / moment access
//! * [`rearrange`] — boundary traces and symmetric decreasing rearrangement
//! * [`fourier`] — cosine coefficients of quantiles, trace spectra
//! * [`gross`] — power-series domains and their shape functionals
//! * [`sobolev`] — periodic Gagliardo and Fourier fractional seminorms
//! * [`sampler`] — exit-law sampling (conformal, Möbius, walk-on-spheres)
//! * [`symmetrize`] — Brownian/Steiner symmetrization and the ratio ρ
//! * [`verify`] — the numerical acceptance suite run by the CLI

pub mod error;
pub mod fourier;
pub mod gross;
pub mod measure;
pub mod quad;
pub mod rearrange;
pub mod sampler;
pub mod sobolev;
pub mod stats;
pub mod svg;
pub mod symmetrize;
pub mod verify;

pub use error::{Error, Result};
pub use fourier::{evaluate_series, quantile_cosine_coeffs, trace_spectrum, CosineSeries, TraceSpectrum};
pub use gross::{gross_domain, inner_circle_counterexample, PowerSeriesDomain, UnivalenceReport};
pub use measure::{Measure, QuantileFn};
pub use rearrange::{equimeasurable, quantile_sdr, sdr, BoundaryTrace};
pub use sampler::{
    conformal_exit_samples, empirical_measure, mobius_shifted_disk_samples, wos_exit_samples,
    GeometricDomain, SampleSet, SamplerKind,
};
pub use sobolev::{eta_constant, fourier_seminorm, gagliardo_seminorm, polya_szego_check, SeminormReport};
pub use symmetrize::{
    area_minimality_trial, brownian_symmetrize, steiner_raster, variance_collapse_sweep,
    RasterDomain, SymmetrizationReport, SymmetrizeSource,
};
