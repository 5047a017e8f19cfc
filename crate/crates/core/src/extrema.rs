//! Local extrema of a sampled curve with three-point parabolic refinement.

use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtremumKind {
    Min,
    Max,
}

impl ExtremumKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Min => "min",
            Self::Max => "max",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    /// Grid index of the sampled extremum.
    pub index: usize,
    /// Refined coordinate.
    pub coordinate: f64,
    /// Refined value.
    pub value: f64,
    pub kind: ExtremumKind,
}

/// Vertex of the parabola through three points, as (coordinate, value).
/// Falls back to the middle sample when the points are collinear.
pub fn parabolic_vertex(x: [f64; 3], y: [f64; 3]) -> (f64, f64) {
    let (x0, x1, x2) = (x[0], x[1], x[2]);
    let (y0, y1, y2) = (y[0], y[1], y[2]);
    let denom = (x0 - x1) * (x0 - x2) * (x1 - x2);
    if denom == 0.0 {
        return (x1, y1);
    }
    let a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom;
    let b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom;
    if a == 0.0 || !a.is_finite() {
        return (x1, y1);
    }
    let c = y1 - a * x1 * x1 - b * x1;
    let xv = (-b / (2.0 * a)).clamp(x0.min(x2), x0.max(x2));
    (xv, a * xv * xv + b * xv + c)
}

fn refine(coords: &[f64], values: &[f64], i: usize, kind: ExtremumKind) -> Extremum {
    let (coordinate, value) = parabolic_vertex(
        [coords[i - 1], coords[i], coords[i + 1]],
        [values[i - 1], values[i], values[i + 1]],
    );
    Extremum {
        index: i,
        coordinate,
        value,
        kind,
    }
}

/// Interior local extrema in ascending coordinate order; endpoints are never
/// reported. Differences smaller than `1e-9·max(|l|,|m|,|r|) + 1e-14` over a
/// three-point window count as flat, so rounding noise yields no extrema.
pub fn locate_extrema(coords: &[f64], values: &[f64]) -> Result<Vec<Extremum>> {
    if coords.len() != values.len() {
        return Err(Error::DimensionMismatch {
            expected: coords.len(),
            found: values.len(),
        });
    }
    let mut out = Vec::new();
    for i in 1..values.len().saturating_sub(1) {
        let (l, m, r) = (values[i - 1], values[i], values[i + 1]);
        if !(l.is_finite() && m.is_finite() && r.is_finite()) {
            continue;
        }
        let tol = 1e-9 * l.abs().max(m.abs()).max(r.abs()) + 1e-14;
        if m > l + tol && m > r + tol {
            out.push(refine(coords, values, i, ExtremumKind::Max));
        } else if m < l - tol && m < r - tol {
            out.push(refine(coords, values, i, ExtremumKind::Min));
        }
    }
    if out.is_empty() {
        return Err(Error::NoInteriorExtremum);
    }
    Ok(out)
}

/// Global minimum or maximum over finite samples, refined when interior.
pub fn global_extremum(coords: &[f64], values: &[f64], kind: ExtremumKind) -> Option<Extremum> {
    let better = |a: f64, b: f64| match kind {
        ExtremumKind::Min => a < b,
        ExtremumKind::Max => a > b,
    };
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        if v.is_finite() && best.map_or(true, |b| better(v, values[b])) {
            best = Some(i);
        }
    }
    let i = best?;
    if i == 0 || i + 1 == values.len() {
        return Some(Extremum {
            index: i,
            coordinate: coords[i],
            value: values[i],
            kind,
        });
    }
    Some(refine(coords, values, i, kind))
}
