//! Photon statistics and atomic coherence of numerically obtained states.

use alloc::vec::Vec;
use core::cmp::Ordering;

#[cfg(not(feature = "std"))]
use num_traits::Float as _;

use crate::error::{Error, Result};
use crate::lindblad::{steady_state, unvec, vectorize, Liouvillian, LiouvillianBasis, Propagator};
use crate::operators::{
    l1_coherence, partial_trace_cavity, CompositeOperators, DensityMatrix, Operator,
};
use crate::params::{HilbertConfig, SystemParams};

/// Below this ⟨a†a⟩ the normalised correlation is undefined.
pub const VACUUM_THRESHOLD: f64 = 1e-14;

/// Allowed imaginary residue of Tr(ρO) for Hermitian O, relative to
/// max(|Tr(ρO)|, Tr(ρ)·max|O|).
const IMAG_TOLERANCE: f64 = 1e-10;

fn real_expectation(rho: &DensityMatrix, op: &Operator) -> Result<f64> {
    let z = rho.expectation(op)?;
    let scale = z.re.abs().max(rho.trace().norm() * op.max_abs());
    if z.im.abs() > IMAG_TOLERANCE * scale {
        return Err(Error::ComplexResidue(z.im));
    }
    Ok(z.re)
}

/// ⟨a†a⟩ = Tr(ρ a†a).
pub fn mean_photon(rho: &DensityMatrix, h: &HilbertConfig) -> Result<f64> {
    let ops = CompositeOperators::new(*h);
    real_expectation(rho, &ops.number())
}

/// Tr(ρ a†² a²) / Tr(ρ a†a)².
pub fn g2_zero_numeric(rho: &DensityMatrix, h: &HilbertConfig) -> Result<f64> {
    let ops = CompositeOperators::new(*h);
    let n = real_expectation(rho, &ops.number())?;
    if n < VACUUM_THRESHOLD {
        return Err(Error::VacuumState(n));
    }
    let a2 = &ops.a * &ops.a;
    let num = real_expectation(rho, &(&a2.adjoint() * &a2))?;
    Ok(num / (n * n))
}

/// l1-norm coherence of the atomic marginal, 2·|ρ_A(g, e)|.
pub fn atom_coherence_numeric(rho: &DensityMatrix, h: &HilbertConfig) -> Result<f64> {
    Ok(l1_coherence(&partial_trace_cavity(rho, h)?))
}

/// g²(τ) on a delay grid, normalised by the stationary ⟨a†a⟩².
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationCurve {
    pub tau: Vec<f64>,
    pub values: Vec<f64>,
    pub mean_photon: f64,
}

impl CorrelationCurve {
    /// Index of the first interior local maximum, or the last index when the
    /// curve has none. Samples `0..=end` form the initial rise.
    pub fn initial_rise_end(&self) -> usize {
        let v = &self.values;
        (1..v.len().saturating_sub(1))
            .find(|&i| v[i] > v[i - 1] && v[i] >= v[i + 1])
            .unwrap_or(v.len().saturating_sub(1))
    }
}

/// Delayed intensity correlation by the quantum regression theorem:
/// G²(τ) = Tr[a†a e^{Lτ}(a ρ_ss a†)], g²(τ) = G²(τ)/⟨a†a⟩².
///
/// The grid is walked in order and each segment continues from the previous
/// one. `dt` bounds the RK4 step.
pub fn g2_tau(
    l: &Liouvillian,
    rho_ss: &DensityMatrix,
    h: &HilbertConfig,
    tau_grid: &[f64],
    dt: f64,
) -> Result<CorrelationCurve> {
    if tau_grid.is_empty() || tau_grid[0] < 0.0 {
        return Err(Error::InvalidParameter {
            name: "tau_grid",
            reason: "must be non-empty and start at a non-negative delay",
        });
    }
    if tau_grid
        .windows(2)
        .any(|w| w[1].partial_cmp(&w[0]) != Some(Ordering::Greater))
    {
        return Err(Error::InvalidParameter {
            name: "tau_grid",
            reason: "must be strictly ascending",
        });
    }
    if rho_ss.dim() != h.dim() || l.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: rho_ss.dim(),
        });
    }
    let ops = CompositeOperators::new(*h);
    let number = ops.number();
    let n_ss = real_expectation(rho_ss, &number)?;
    if n_ss < VACUUM_THRESHOLD {
        return Err(Error::VacuumState(n_ss));
    }
    let norm = n_ss * n_ss;

    let collapsed =
        DensityMatrix::from_matrix(ops.a.matrix() * rho_ss.matrix() * ops.a.adjoint().matrix())?;
    let mut state = vectorize(&collapsed);
    let mut prop = Propagator::new(l, dt)?;

    let mut values = Vec::with_capacity(tau_grid.len());
    let mut t = 0.0;
    for &tau in tau_grid {
        prop.advance(&mut state, tau - t);
        t = tau;
        let g = real_expectation(&unvec(&state, h.dim()), &number)?;
        values.push(g / norm);
    }
    Ok(CorrelationCurve {
        tau: tau_grid.to_vec(),
        values,
        mean_photon: n_ss,
    })
}

/// 200 delays over [0, 20/min(κ, γ)]: 50 linear points up to 1% of the span,
/// then 150 logarithmically spaced points.
pub fn default_tau_grid(p: &SystemParams) -> Vec<f64> {
    let slowest = match (p.kappa > 0.0, p.gamma > 0.0) {
        (true, true) => p.kappa.min(p.gamma),
        (true, false) => p.kappa,
        (false, true) => p.gamma,
        (false, false) => 1.0,
    };
    let span = 20.0 / slowest;
    let knee = span / 100.0;
    let mut grid: Vec<f64> = (0..50).map(|k| knee * k as f64 / 49.0).collect();
    grid.extend((1..=150).map(|j| knee * 100f64.powf(j as f64 / 150.0)));
    grid
}

/// Steady-state observables of the master equation at one parameter point.
#[derive(Debug, Clone)]
pub struct NumericObservables {
    pub rho: DensityMatrix,
    pub g2: f64,
    pub coherence: f64,
    pub mean_photon: f64,
}

pub fn solve_point(p: &SystemParams, h: &HilbertConfig) -> Result<NumericObservables> {
    let l = LiouvillianBasis::new(*h).assemble(p)?;
    observables_of(&l, h)
}

pub fn observables_of(l: &Liouvillian, h: &HilbertConfig) -> Result<NumericObservables> {
    let rho = steady_state(l)?;
    Ok(NumericObservables {
        g2: g2_zero_numeric(&rho, h)?,
        coherence: atom_coherence_numeric(&rho, h)?,
        mean_photon: mean_photon(&rho, h)?,
        rho,
    })
}

/// Relative shift of g²(0) and of the atomic coherence when the cutoff is
/// raised from `n_max` to `n_max + 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationShift {
    pub g2: f64,
    pub coherence: f64,
}

impl TruncationShift {
    pub fn max(&self) -> f64 {
        self.g2.max(self.coherence)
    }
}

pub fn truncation_shift(p: &SystemParams, n_max: usize) -> Result<TruncationShift> {
    let lo = solve_point(p, &HilbertConfig::new(n_max)?)?;
    let hi = solve_point(p, &HilbertConfig::new(n_max + 2)?)?;
    let rel = |a: f64, b: f64| {
        if b == 0.0 {
            (a - b).abs()
        } else {
            ((a - b) / b).abs()
        }
    };
    Ok(TruncationShift {
        g2: rel(lo.g2, hi.g2),
        coherence: rel(lo.coherence, hi.coherence),
    })
}
