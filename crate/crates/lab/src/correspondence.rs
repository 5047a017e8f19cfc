//! Pairing of antibunching minima with coherence maxima along a detuning axis.

use std::fmt;

use blockade_core::extrema::{Extremum, ExtremumKind};

use crate::error::{LabError, Result};
use crate::sweep::{locate_extrema, SweepParam, SweepResult};

pub const DEFAULT_GAP_THRESHOLD: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Analytic,
    Numeric,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Self::Analytic => "analytic",
            Self::Numeric => "numeric",
        }
    }

    fn columns(self) -> (&'static str, &'static str) {
        match self {
            Self::Analytic => ("g2_analytic", "coh_analytic"),
            Self::Numeric => ("g2_numeric", "coh_numeric"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pair {
    pub g2_min: Extremum,
    /// Nearest coherence maximum, if the curve has one.
    pub coherence_max: Option<Extremum>,
    /// Coordinate distance in grid steps; infinite without a partner.
    pub gap_steps: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchReport {
    pub branch: Branch,
    pub pairs: Vec<Pair>,
    /// C at the sample nearest Δ = 0 over the smallest paired coherence maximum.
    pub dark_ratio: f64,
    /// Largest coherence maximum over C(Δ ≈ 0).
    pub coherence_contrast: f64,
    /// g²(Δ ≈ 0) over the deepest g² minimum.
    pub g2_contrast: f64,
    pub pass: bool,
}

impl BranchReport {
    pub fn max_gap(&self) -> f64 {
        self.pairs.iter().fold(0.0, |m, p| m.max(p.gap_steps))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondenceReport {
    pub threshold: f64,
    pub branches: Vec<BranchReport>,
}

impl CorrespondenceReport {
    pub fn pass(&self) -> bool {
        self.branches.iter().all(|b| b.pass)
    }

    /// Set when any pairing misses the threshold.
    pub fn degraded(&self) -> bool {
        !self.pass()
    }

    pub fn branch(&self, branch: Branch) -> Option<&BranchReport> {
        self.branches.iter().find(|b| b.branch == branch)
    }
}

impl fmt::Display for CorrespondenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.branches {
            write!(f, "{}:", b.branch.name())?;
            for p in &b.pairs {
                match p.coherence_max {
                    Some(c) => write!(
                        f,
                        " [g2 min {:.6} <-> coh max {:.6}, gap {:.2} steps]",
                        p.g2_min.coordinate, c.coordinate, p.gap_steps
                    )?,
                    None => write!(f, " [g2 min {:.6} unpaired]", p.g2_min.coordinate)?,
                }
            }
            writeln!(
                f,
                " dark ratio {:.4e}, coherence contrast {:.3e}, g2 contrast {:.3e}, {}",
                b.dark_ratio,
                b.coherence_contrast,
                b.g2_contrast,
                if b.pass { "PASS" } else { "FAIL" }
            )?;
        }
        let verdict = if self.pass() {
            "PASS"
        } else {
            "FAIL (degraded)"
        };
        write!(
            f,
            "correspondence (threshold {} steps): {verdict}",
            self.threshold
        )
    }
}

fn nearest_index(xs: &[f64], target: f64) -> usize {
    let mut best = 0;
    for (i, x) in xs.iter().enumerate() {
        if (x - target).abs() < (xs[best] - target).abs() {
            best = i;
        }
    }
    best
}

fn check_branch(result: &SweepResult, branch: Branch, threshold: f64) -> Result<BranchReport> {
    let (g2_col, coh_col) = branch.columns();
    let step = result.axes[0].step();
    let xs = result.coordinates(0);

    // only sub-Poissonian dips are blockade points
    let minima: Vec<Extremum> = locate_extrema(result, g2_col)?
        .into_iter()
        .filter(|e| e.kind == ExtremumKind::Min && e.value < 1.0)
        .collect();
    let maxima: Vec<Extremum> = match locate_extrema(result, coh_col) {
        Ok(v) => v
            .into_iter()
            .filter(|e| e.kind == ExtremumKind::Max)
            .collect(),
        Err(LabError::Solver(blockade_core::Error::NoInteriorExtremum)) => Vec::new(),
        Err(e) => return Err(e),
    };

    let pairs: Vec<Pair> = minima
        .iter()
        .map(|m| {
            let partner = maxima.iter().copied().min_by(|a, b| {
                (a.coordinate - m.coordinate)
                    .abs()
                    .total_cmp(&(b.coordinate - m.coordinate).abs())
            });
            Pair {
                g2_min: *m,
                coherence_max: partner,
                gap_steps: partner.map_or(f64::INFINITY, |c| {
                    (c.coordinate - m.coordinate).abs() / step
                }),
            }
        })
        .collect();

    let i0 = nearest_index(&xs, 0.0);
    let coh = result.column(coh_col).expect("checked by locate_extrema");
    let g2 = result.column(g2_col).expect("checked by locate_extrema");
    let paired_peak = pairs
        .iter()
        .filter_map(|p| p.coherence_max.map(|c| c.value))
        .fold(f64::INFINITY, f64::min);
    let highest_peak = maxima.iter().fold(f64::NAN, |m, e| m.max(e.value));
    let deepest = minima.iter().fold(f64::NAN, |m, e| m.min(e.value));

    Ok(BranchReport {
        branch,
        dark_ratio: coh[i0] / paired_peak,
        coherence_contrast: highest_peak / coh[i0],
        g2_contrast: g2[i0] / deepest,
        pass: !pairs.is_empty() && pairs.iter().all(|p| p.gap_steps <= threshold),
        pairs,
    })
}

/// Runs the pairing on every branch that has both a g² and a coherence
/// column. The sweep must be 1D over `Delta`.
pub fn check_correspondence(result: &SweepResult, threshold: f64) -> Result<CorrespondenceReport> {
    if result.is_2d() {
        return Err(LabError::config(
            "correspondence needs a 1D sweep; slice a 2D result with `row`",
        ));
    }
    if result.axes[0].param != SweepParam::Delta {
        return Err(LabError::MissingColumn(SweepParam::Delta.name().to_owned()));
    }
    let mut branches = Vec::new();
    for branch in [Branch::Analytic, Branch::Numeric] {
        let (g2_col, coh_col) = branch.columns();
        if result.column(g2_col).is_some() && result.column(coh_col).is_some() {
            branches.push(check_branch(result, branch, threshold)?);
        }
    }
    if branches.is_empty() {
        return Err(LabError::MissingColumn(
            "g2_* and coh_* of the same branch".to_owned(),
        ));
    }
    Ok(CorrespondenceReport {
        threshold,
        branches,
    })
}
