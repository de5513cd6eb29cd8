//! Static SVG export of domain boundaries and raster silhouettes.

use std::io::Write;

use crate::error::Result;
use crate::gross::PowerSeriesDomain;
use crate::symmetrize::RasterDomain;

struct ViewBox {
    min_x: f64,
    min_y: f64,
    width: f64,
    height: f64,
}

fn view_box(points: impl Iterator<Item = (f64, f64)>) -> ViewBox {
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for (x, y) in points {
        min_x = min_x.min(x);
        max_x = max_x.max(x);
        min_y = min_y.min(y);
        max_y = max_y.max(y);
    }
    let pad = 0.05 * (max_x - min_x).max(max_y - min_y).max(1e-9);
    ViewBox {
        min_x: min_x - pad,
        min_y: min_y - pad,
        width: max_x - min_x + 2.0 * pad,
        height: max_y - min_y + 2.0 * pad,
    }
}

fn open_svg<W: Write>(w: &mut W, vb: &ViewBox) -> std::io::Result<()> {
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.6} {:.6} {:.6} {:.6}" width="640" height="640">"#,
        vb.min_x, vb.min_y, vb.width, vb.height
    )?;
    // SVG y grows downward; flip so the upper half-plane is on top.
    writeln!(
        w,
        r#"<g transform="scale(1,-1) translate(0,{:.6})">"#,
        -(2.0 * vb.min_y + vb.height)
    )
}

fn close_svg<W: Write>(w: &mut W) -> std::io::Result<()> {
    writeln!(w, "</g>")?;
    writeln!(w, "</svg>")
}

fn path_from_points<W: Write>(
    w: &mut W,
    pts: &[(f64, f64)],
    stroke: &str,
    stroke_width: f64,
) -> std::io::Result<()> {
    write!(w, r#"<path fill="none" stroke="{stroke}" stroke-width="{stroke_width:.6}" d=""#)?;
    for (i, (x, y)) in pts.iter().enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        write!(w, "{cmd}{x:.6} {y:.6} ")?;
    }
    writeln!(w, r#"Z"/>"#)
}

fn origin_marker<W: Write>(w: &mut W, size: f64) -> std::io::Result<()> {
    writeln!(
        w,
        r##"<path stroke="#c22" stroke-width="{:.6}" d="M{:.6} 0 L{:.6} 0 M0 {:.6} L0 {:.6}"/>"##,
        size / 6.0,
        -size,
        size,
        -size,
        size
    )
}

/// Boundary polyline of a power-series domain with the origin marked.
pub fn write_domain_boundary<W: Write>(
    w: &mut W,
    d: &PowerSeriesDomain,
    grid_size: usize,
) -> Result<()> {
    let pts: Vec<(f64, f64)> = d
        .boundary_points(grid_size)
        .iter()
        .map(|p| (p.re, p.im))
        .collect();
    let vb = view_box(pts.iter().copied().chain([(0.0, 0.0)]));
    open_svg(w, &vb)?;
    path_from_points(w, &pts, "#1f4e8c", vb.width / 400.0)?;
    origin_marker(w, vb.width / 60.0)?;
    close_svg(w)?;
    Ok(())
}

/// Overlay: raster silhouette of the source (column run rectangles) under the
/// boundary curve of its Brownian symmetrization.
pub fn write_symmetrize_overlay<W: Write>(
    w: &mut W,
    source: &RasterDomain,
    gross: &PowerSeriesDomain,
    grid_size: usize,
) -> Result<()> {
    let pts: Vec<(f64, f64)> = if gross.is_zero() {
        Vec::new()
    } else {
        gross
            .boundary_points(grid_size)
            .iter()
            .map(|p| (p.re, p.im))
            .collect()
    };
    let res = source.resolution();
    let cell = source.cell_size();
    let half = res as f64 / 2.0 * cell;
    let corners = [(-half, -half), (half, half)];
    let vb = view_box(pts.iter().copied().chain(corners));
    open_svg(w, &vb)?;
    for col in 0..res {
        for (start, end) in source.column_runs(col) {
            let (x, _) = source.cell_center(col, 0);
            let y0 = (start as f64 - res as f64 / 2.0) * cell;
            let h = (end - start) as f64 * cell;
            writeln!(
                w,
                r##"<rect x="{:.6}" y="{:.6}" width="{:.6}" height="{:.6}" fill="#9bbbdd" fill-opacity="0.55"/>"##,
                x - cell / 2.0,
                y0,
                cell,
                h
            )?;
        }
    }
    if !pts.is_empty() {
        path_from_points(w, &pts, "#0a2a55", vb.width / 400.0)?;
    }
    origin_marker(w, vb.width / 60.0)?;
    close_svg(w)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gross::gross_domain;
    use crate::measure::Measure;
    use crate::sampler::GeometricDomain;

    #[test]
    fn domain_svg_is_well_formed() {
        let d = gross_domain(&Measure::uniform(-1.0, 1.0).unwrap(), 32).unwrap();
        let mut buf = Vec::new();
        write_domain_boundary(&mut buf, &d, 256).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("<svg"));
        assert!(text.trim_end().ends_with("</svg>"));
        assert!(text.contains("<path"));
    }

    #[test]
    fn overlay_svg_contains_both_layers() {
        let g = GeometricDomain::shifted_disk(0.5).unwrap();
        let raster = RasterDomain::from_geometric(&g, 64).unwrap();
        let d = gross_domain(&Measure::shifted_disk_exit(0.5).unwrap(), 32).unwrap();
        let mut buf = Vec::new();
        write_symmetrize_overlay(&mut buf, &raster, &d, 256).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("<rect"));
        assert!(text.contains("<path"));
    }
}
