//! Preset parameter sets. Rates are in units of g for fig1 and fig4 and in
//! units of κ for fig2 and fig3.

use blockade_core::correlations::default_tau_grid;
use blockade_core::{HilbertConfig, SystemParams};

use crate::sweep::{Axis, OutputSet, SweepParam, SweepSpec};

pub const GRID_1D: usize = 401;
pub const GRID_2D: usize = 101;

fn both_branches() -> OutputSet {
    OutputSet {
        mean_photon: false,
        ..OutputSet::all()
    }
}

fn axis(param: SweepParam, min: f64, max: f64, count: usize) -> Axis {
    Axis {
        param,
        min,
        max,
        count,
    }
}

/// g²(0) and atomic coherence against Δ at γ/g = κ/g = 0.05, η/g = 0.01.
pub fn fig1(grid: Option<usize>, hilbert: HilbertConfig) -> SweepSpec {
    SweepSpec {
        base: SystemParams {
            g: 1.0,
            kappa: 0.05,
            gamma: 0.05,
            eta: 0.01,
            delta_a: 0.0,
            delta: 0.0,
        },
        axis1: axis(SweepParam::Delta, -2.0, 2.0, grid.unwrap_or(GRID_1D)),
        axis2: None,
        hilbert,
        outputs: both_branches(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig2 {
    pub params: SystemParams,
    pub tau: Vec<f64>,
}

/// g²(τ) at γ/κ = 1, Δ/κ = δ/κ = −20, g/κ = 20. The drive η/κ = 0.1 keeps
/// the cavity in the weak-drive regime.
pub fn fig2(grid: Option<usize>) -> Fig2 {
    let params = SystemParams {
        g: 20.0,
        kappa: 1.0,
        gamma: 1.0,
        eta: 0.1,
        delta_a: -20.0,
        delta: -20.0,
    };
    let tau = match grid {
        Some(n) => {
            let span = 20.0 / params.kappa.min(params.gamma);
            (0..n.max(2))
                .map(|i| span * i as f64 / (n.max(2) - 1) as f64)
                .collect()
        }
        None => default_tau_grid(&params),
    };
    Fig2 { params, tau }
}

/// g²(0) and coherence over g × Δ at γ/κ = 0.5, η/κ = 0.1.
pub fn fig3(grid: Option<usize>, hilbert: HilbertConfig) -> SweepSpec {
    let n = grid.unwrap_or(GRID_2D);
    SweepSpec {
        base: SystemParams {
            g: 5.0,
            kappa: 1.0,
            gamma: 0.5,
            eta: 0.1,
            delta_a: 0.0,
            delta: 0.0,
        },
        axis1: axis(SweepParam::G, 5.0, 30.0, n),
        axis2: Some(axis(SweepParam::Delta, -40.0, 40.0, n)),
        hilbert,
        outputs: both_branches(),
    }
}

/// g²(0) and coherence over κ × Δ at γ/g = 0.01, η/g = 0.001.
pub fn fig4(grid: Option<usize>, hilbert: HilbertConfig) -> SweepSpec {
    let n = grid.unwrap_or(GRID_2D);
    SweepSpec {
        base: SystemParams {
            g: 1.0,
            kappa: 0.01,
            gamma: 0.01,
            eta: 0.001,
            delta_a: 0.0,
            delta: 0.0,
        },
        axis1: axis(SweepParam::Kappa, 0.01, 0.5, n),
        axis2: Some(axis(SweepParam::Delta, -2.0, 2.0, n)),
        hilbert,
        outputs: both_branches(),
    }
}
