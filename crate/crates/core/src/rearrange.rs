//! Boundary traces on the midpoint angular grid and their symmetric
//! decreasing rearrangement.
//!
//! The grid `θ_j = -π + (j + 1/2)·2π/G` avoids `θ = 0` and `θ = ±π`, so
//! nodes pair up exactly as `(θ, -θ)` and the fractional kernels downstream
//! never see a singular abscissa.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::QuantileFn;

/// Real-valued samples on the uniform midpoint grid over `(-π, π]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TraceFile", into = "TraceFile")]
pub struct BoundaryTrace {
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct TraceFile {
    grid_size: usize,
    values: Vec<f64>,
}

impl From<BoundaryTrace> for TraceFile {
    fn from(t: BoundaryTrace) -> Self {
        TraceFile {
            grid_size: t.values.len(),
            values: t.values,
        }
    }
}

impl TryFrom<TraceFile> for BoundaryTrace {
    type Error = Error;
    fn try_from(f: TraceFile) -> Result<Self> {
        if f.grid_size != f.values.len() {
            return Err(Error::GridMismatch(format!(
                "header says {} values, payload has {}",
                f.grid_size,
                f.values.len()
            )));
        }
        BoundaryTrace::new(f.values)
    }
}

impl BoundaryTrace {
    /// Wraps raw samples; the length must be even and at least 4.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 4 || values.len() % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "grid size must be even and ≥ 4, got {}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("trace values must be finite".into()));
        }
        Ok(BoundaryTrace { values })
    }

    /// Samples `f` on the midpoint grid of size `g`.
    pub fn from_fn(g: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let thetas = grid(g)?;
        BoundaryTrace::new(thetas.into_iter().map(f).collect())
    }

    pub fn grid_size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Grid node `θ_j = -π + (j + 1/2)·2π/G`.
    pub fn theta(&self, j: usize) -> f64 {
        node(self.values.len(), j)
    }

    pub fn thetas(&self) -> Vec<f64> {
        (0..self.values.len()).map(|j| self.theta(j)).collect()
    }

    /// Writes `theta,value` rows preceded by a `# grid_size=G` header.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# grid_size={}", self.grid_size())?;
        writeln!(w, "theta,value")?;
        for (j, v) in self.values.iter().enumerate() {
            writeln!(w, "{:.17e},{:.17e}", self.theta(j), v)?;
        }
        Ok(())
    }
}

fn node(g: usize, j: usize) -> f64 {
    -std::f64::consts::PI + (j as f64 + 0.5) * std::f64::consts::TAU / g as f64
}

fn grid(g: usize) -> Result<Vec<f64>> {
    if g < 4 || g % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "grid size must be even and ≥ 4, got {g}"
        )));
    }
    Ok((0..g).map(|j| node(g, j)).collect())
}

/// Symmetric decreasing rearrangement of a trace.
///
/// Sorts the values descending and assigns them to nodes ordered by `|θ|`
/// ascending; each symmetric pair `(θ, -θ)` receives two consecutive sorted
/// values, the larger one going to the nonnegative node. The output is a
/// permutation of the input multiset, nonincreasing in `|θ|`.
pub fn sdr(trace: &BoundaryTrace) -> BoundaryTrace {
    let g = trace.grid_size();
    let mut sorted = trace.values().to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut out = vec![0.0; g];
    for m in 0..g / 2 {
        // Nodes g/2 + m and g/2 - 1 - m sit at ±(m + 1/2)·2π/G.
        out[g / 2 + m] = sorted[2 * m];
        out[g / 2 - 1 - m] = sorted[2 * m + 1];
    }
    BoundaryTrace { values: out }
}

/// The trace `θ_j ↦ Q(1 - |θ_j|/π)`, the rearranged quantile trace.
pub fn quantile_sdr(q: &QuantileFn<'_>, grid_size: usize) -> Result<BoundaryTrace> {
    let thetas = grid(grid_size)?;
    BoundaryTrace::new(
        thetas
            .into_iter()
            .map(|t| q.eval(1.0 - t.abs() / std::f64::consts::PI))
            .collect(),
    )
}

/// True when the two traces carry the same value multiset within `tol`.
pub fn equimeasurable(a: &BoundaryTrace, b: &BoundaryTrace, tol: f64) -> Result<bool> {
    if a.grid_size() != b.grid_size() {
        return Err(Error::GridMismatch(format!(
            "traces have grid sizes {} and {}",
            a.grid_size(),
            b.grid_size()
        )));
    }
    let mut sa = a.values().to_vec();
    let mut sb = b.values().to_vec();
    sa.sort_by(f64::total_cmp);
    sb.sort_by(f64::total_cmp);
    Ok(sa
        .iter()
        .zip(&sb)
        .all(|(x, y)| (x - y).abs() <= tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Measure;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn is_even_and_unimodal(t: &BoundaryTrace) -> bool {
        let g = t.grid_size();
        let v = t.values();
        // Pairs share |θ|; across pairs values must not increase with |θ|.
        let mut prev = f64::INFINITY;
        for m in 0..g / 2 {
            let hi = v[g / 2 + m];
            let lo = v[g / 2 - 1 - m];
            if hi > prev || lo > hi {
                return false;
            }
            prev = lo;
        }
        true
    }

    #[test]
    fn sdr_of_oscillation_approaches_cosine() {
        // sdr(cos(Nθ)) = cos(θ) in the continuum; on the grid the match is
        // within the O(N/G) staircase resolution.
        for n in [1usize, 2, 3] {
            let g = 4 * n * 64;
            let trace = BoundaryTrace::from_fn(g, |t| (n as f64 * t).cos()).unwrap();
            let r = sdr(&trace);
            assert!(is_even_and_unimodal(&r));
            assert!(equimeasurable(&trace, &r, 0.0).unwrap());
            let cosine = BoundaryTrace::from_fn(g, |t| t.cos()).unwrap();
            let sup = r
                .values()
                .iter()
                .zip(cosine.values())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            let budget = if n == 1 { 1e-12 } else { 1.7 * PI * n as f64 / g as f64 };
            assert!(sup <= budget, "N={n}: sup error {sup} > {budget}");
        }
    }

    #[test]
    fn sdr_fixed_points() {
        let c = BoundaryTrace::from_fn(64, |_| 2.5).unwrap();
        assert_eq!(sdr(&c), c);
        let already = sdr(&BoundaryTrace::from_fn(64, |t| t.sin() + 0.3 * (2.0 * t).cos()).unwrap());
        assert_eq!(sdr(&already), already);
    }

    #[test]
    fn sdr_is_idempotent_and_norm_preserving() {
        let t = BoundaryTrace::from_fn(128, |t| (3.0 * t).sin() - 0.4 * t.cos()).unwrap();
        let r = sdr(&t);
        assert_eq!(sdr(&r), r);
        for p in [1.0, 2.0] {
            let np = |v: &[f64]| v.iter().map(|x| x.abs().powf(p)).sum::<f64>();
            assert_abs_diff_eq!(np(t.values()), np(r.values()), epsilon = 1e-12);
        }
        let sup = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        assert_abs_diff_eq!(sup(t.values()), sup(r.values()));
    }

    #[test]
    fn quantile_sdr_examples() {
        let uni = Measure::uniform(-1.0, 1.0).unwrap();
        let t = quantile_sdr(&uni.quantile_fn(), 64).unwrap();
        for (j, v) in t.values().iter().enumerate() {
            assert_abs_diff_eq!(*v, 1.0 - 2.0 * t.theta(j).abs() / PI, epsilon = 1e-14);
        }
        let arc = Measure::ArcsineShifted;
        let t = quantile_sdr(&arc.quantile_fn(), 64).unwrap();
        for (j, v) in t.values().iter().enumerate() {
            assert_abs_diff_eq!(*v, t.theta(j).cos(), epsilon = 1e-13);
        }
        let point = Measure::atomic(vec![(0.0, 1.0)]).unwrap();
        let t = quantile_sdr(&point.quantile_fn(), 64).unwrap();
        assert!(t.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn equimeasurable_examples() {
        let g = 256;
        let cos = BoundaryTrace::from_fn(g, |t| t.cos()).unwrap();
        let sin = BoundaryTrace::from_fn(g, |t| t.sin()).unwrap();
        // Both sample the arcsine law on this grid (sin values are the cos
        // values shifted by a quarter turn, G divisible by 4).
        assert!(equimeasurable(&cos, &sin, 1e-12).unwrap());
        let double = BoundaryTrace::from_fn(g, |t| 2.0 * t.cos()).unwrap();
        assert!(!equimeasurable(&cos, &double, 1e-12).unwrap());
        let small = BoundaryTrace::from_fn(64, |t| t.cos()).unwrap();
        assert!(equimeasurable(&cos, &small, 1e-12).is_err());
    }

    #[test]
    fn sorted_step_functions_with_equal_values_coincide() {
        // Discrete form of the a.e. uniqueness of nondecreasing equimeasurable
        // functions: two sdr outputs built from permutations of the same
        // multiset are identical.
        let base = BoundaryTrace::from_fn(96, |t| (5.0 * t).cos() + 0.2 * t).unwrap();
        let mut shuffled = base.values().to_vec();
        shuffled.reverse();
        shuffled.swap(3, 77);
        let other = BoundaryTrace::new(shuffled).unwrap();
        assert_eq!(sdr(&base), sdr(&other));
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(BoundaryTrace::new(vec![1.0, 2.0]).is_err());
        assert!(BoundaryTrace::new(vec![1.0; 7]).is_err());
        assert!(BoundaryTrace::new(vec![f64::NAN; 8]).is_err());
    }

    #[test]
    fn csv_round_trip_header() {
        let t = BoundaryTrace::from_fn(8, |t| t.cos()).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# grid_size=8\n"));
        assert_eq!(text.lines().count(), 10);
    }
}
