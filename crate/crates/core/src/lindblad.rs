//! Liouvillian superoperator, steady state and time evolution of the
//! master equation
//!
//! ```text
//! dρ/dt = −i[H, ρ] + κ D[a]ρ + γ D[σ⁻]ρ,   D[c]ρ = cρc† − ½{c†c, ρ}
//! ```
//!
//! With this normalisation κ is the photon-number decay rate and field
//! amplitudes decay at κ/2, matching β = κ/2 + iΔ_a in the analytic model.
//!
//! Density matrices are vectorised by column stacking: column j of ρ occupies
//! slots `j·d .. j·d + d`. Under that convention vec(AρB) = (Bᵀ ⊗ A) vec(ρ).

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

#[cfg(not(feature = "std"))]
use num_traits::Float as _;

use crate::error::{Error, Result};
use crate::operators::{
    build_hamiltonian, CMatrix, CVector, CompositeOperators, DensityMatrix, Operator,
};
use crate::params::{HilbertConfig, SystemParams};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const MINUS_I: Complex64 = Complex64::new(0.0, -1.0);

/// Minimum ratio between the two smallest singular values of L for the
/// steady state to count as unique.
pub const NULL_SPACE_GAP: f64 = 1e6;

/// Largest admissible ‖L‖∞·dt for the RK4 integrator.
pub const MAX_STEP_NORM: f64 = 0.1;

#[derive(Debug, Clone)]
pub struct CollapseChannel {
    pub operator: Operator,
    pub rate: f64,
}

/// Hamiltonian plus collapse channels sharing one dimension.
#[derive(Debug, Clone)]
pub struct LindbladModel {
    hamiltonian: Operator,
    channels: Vec<CollapseChannel>,
}

impl LindbladModel {
    pub fn new(hamiltonian: Operator, channels: Vec<CollapseChannel>) -> Result<Self> {
        let d = hamiltonian.dim();
        for ch in &channels {
            if ch.operator.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: ch.operator.dim(),
                });
            }
            if !(ch.rate >= 0.0 && ch.rate.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "rate",
                    reason: "collapse rates must be finite and non-negative",
                });
            }
        }
        Ok(Self {
            hamiltonian,
            channels,
        })
    }

    /// Driven Jaynes–Cummings model with channels (a, κ) and (σ⁻, γ).
    pub fn cavity_qed(p: &SystemParams, h: &HilbertConfig) -> Result<Self> {
        p.validate()?;
        let ops = CompositeOperators::new(*h);
        Self::new(
            build_hamiltonian(p, h),
            alloc::vec![
                CollapseChannel {
                    operator: ops.a,
                    rate: p.kappa,
                },
                CollapseChannel {
                    operator: ops.sigma_minus,
                    rate: p.gamma,
                },
            ],
        )
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    pub fn channels(&self) -> &[CollapseChannel] {
        &self.channels
    }
}

/// Dense d²×d² generator acting on column-stacked density matrices.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    dim: usize,
    matrix: CMatrix,
    dissipative: bool,
}

impl Liouvillian {
    /// Hilbert-space dimension d (the superoperator is d²×d²).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn is_dissipative(&self) -> bool {
        self.dissipative
    }

    /// vec(dρ/dt) for the given state.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.check_dim(rho)?;
        Ok(unvec(&(&self.matrix * vectorize(rho)), self.dim))
    }

    /// ‖L vec(ρ)‖∞.
    pub fn residual(&self, rho: &DensityMatrix) -> Result<f64> {
        self.check_dim(rho)?;
        let r = &self.matrix * vectorize(rho);
        Ok(r.iter().map(|z| z.norm()).fold(0.0, f64::max))
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.matrix
            .row_iter()
            .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// The two smallest and the largest singular value of L.
    pub fn null_space_gap(&self) -> NullSpaceGap {
        let mut sv: Vec<f64> = self
            .matrix
            .clone()
            .singular_values()
            .iter()
            .copied()
            .collect();
        sv.sort_by(f64::total_cmp);
        NullSpaceGap {
            smallest: sv[0],
            second: sv.get(1).copied().unwrap_or(f64::INFINITY),
            largest: sv[sv.len() - 1],
        }
    }

    fn check_dim(&self, rho: &DensityMatrix) -> Result<()> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rho.dim(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullSpaceGap {
    pub smallest: f64,
    pub second: f64,
    pub largest: f64,
}

impl NullSpaceGap {
    pub fn ratio(&self) -> f64 {
        self.second / self.smallest
    }

    /// The second singular value must clear the gap factor above both the
    /// smallest one and the rounding floor ε·σ_max.
    pub fn is_unique(&self) -> bool {
        let floor = f64::EPSILON * self.largest;
        self.second >= NULL_SPACE_GAP * self.smallest.max(floor)
    }
}

pub fn vectorize(rho: &DensityMatrix) -> CVector {
    // nalgebra stores column-major, which is exactly column stacking
    CVector::from_column_slice(rho.matrix().as_slice())
}

pub fn unvec(v: &CVector, dim: usize) -> DensityMatrix {
    DensityMatrix::from_matrix(CMatrix::from_column_slice(dim, dim, v.as_slice()))
        .expect("square by construction")
}

/// vec(Aρ) = (I ⊗ A) vec(ρ)
fn left(a: &CMatrix) -> CMatrix {
    CMatrix::identity(a.nrows(), a.nrows()).kronecker(a)
}

/// vec(ρB) = (Bᵀ ⊗ I) vec(ρ)
fn right(b: &CMatrix) -> CMatrix {
    b.transpose()
        .kronecker(&CMatrix::identity(b.nrows(), b.nrows()))
}

fn hamiltonian_part(h: &CMatrix) -> CMatrix {
    (left(h) - right(h)) * MINUS_I
}

/// D[c] at unit rate.
fn dissipator(c: &CMatrix) -> CMatrix {
    let cdc = c.adjoint() * c;
    c.conjugate().kronecker(c) - (left(&cdc) + right(&cdc)) * Complex64::new(0.5, 0.0)
}

pub fn build_liouvillian(model: &LindbladModel) -> Result<Liouvillian> {
    let h = model.hamiltonian.matrix();
    let mut matrix = hamiltonian_part(h);
    let mut dissipative = false;
    for ch in &model.channels {
        if ch.rate > 0.0 {
            dissipative = true;
            matrix += dissipator(ch.operator.matrix()) * Complex64::new(ch.rate, 0.0);
        }
    }
    Ok(Liouvillian {
        dim: h.nrows(),
        matrix,
        dissipative,
    })
}

/// The cavity-QED Liouvillian is linear in each of Δ_a, δ, g, η, κ and γ.
/// This keeps the six unit-coefficient superoperators for one truncation so a
/// sweep only recombines them per point.
#[derive(Debug, Clone)]
pub struct LiouvillianBasis {
    hilbert: HilbertConfig,
    number: CMatrix,
    excited: CMatrix,
    exchange: CMatrix,
    drive: CMatrix,
    cavity_decay: CMatrix,
    atom_decay: CMatrix,
}

impl LiouvillianBasis {
    pub fn new(hilbert: HilbertConfig) -> Self {
        let ops = CompositeOperators::new(hilbert);
        Self {
            hilbert,
            number: hamiltonian_part(ops.number().matrix()),
            excited: hamiltonian_part(ops.excited_projector().matrix()),
            exchange: hamiltonian_part(ops.exchange().matrix()),
            drive: hamiltonian_part(ops.drive().matrix()),
            cavity_decay: dissipator(ops.a.matrix()),
            atom_decay: dissipator(ops.sigma_minus.matrix()),
        }
    }

    pub fn hilbert(&self) -> HilbertConfig {
        self.hilbert
    }

    pub fn assemble(&self, p: &SystemParams) -> Result<Liouvillian> {
        p.validate()?;
        let d2 = self.number.nrows();
        let mut matrix = DMatrix::zeros(d2, d2);
        let terms = [
            (p.delta_a, &self.number),
            (p.delta, &self.excited),
            (p.g, &self.exchange),
            (p.eta, &self.drive),
            (p.kappa, &self.cavity_decay),
            (p.gamma, &self.atom_decay),
        ];
        for (coef, part) in terms {
            if coef != 0.0 {
                matrix.zip_apply(part, |m, x| *m += x * coef);
            }
        }
        Ok(Liouvillian {
            dim: self.hilbert.dim(),
            matrix,
            dissipative: p.kappa > 0.0 || p.gamma > 0.0,
        })
    }
}

/// Stationary state of L: first checks that the null space is
/// one-dimensional, then solves L ρ = 0 with the first equation replaced by
/// Tr ρ = 1.
pub fn steady_state(l: &Liouvillian) -> Result<DensityMatrix> {
    if !l.dissipative {
        return Err(Error::NoDissipation);
    }
    let gap = l.null_space_gap();
    if !gap.is_unique() {
        return Err(Error::DegenerateNullSpace {
            smallest: gap.smallest,
            second: gap.second,
        });
    }
    solve_with_trace_constraint(l)
}

/// Same linear solve as [`steady_state`] without the singular-value check.
pub fn steady_state_unchecked(l: &Liouvillian) -> Result<DensityMatrix> {
    if !l.dissipative {
        return Err(Error::NoDissipation);
    }
    solve_with_trace_constraint(l)
}

fn solve_with_trace_constraint(l: &Liouvillian) -> Result<DensityMatrix> {
    let d = l.dim;
    let mut system = l.matrix.clone();
    for col in 0..d * d {
        system[(0, col)] = ZERO;
    }
    for j in 0..d {
        system[(0, j * d + j)] = ONE;
    }
    let mut rhs = CVector::zeros(d * d);
    rhs[0] = ONE;
    let x = system.lu().solve(&rhs).ok_or(Error::SingularSystem)?;
    if x.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::SingularSystem);
    }
    Ok(unvec(&x, d))
}

/// 0.01 / max(κ, γ, g, |Δ_a|, |δ|, 1).
pub fn default_time_step(p: &SystemParams) -> f64 {
    0.01 / p.max_rate()
}

/// Fixed-step RK4 integrator for d vec(ρ)/dt = L vec(ρ). No renormalisation
/// or symmetrisation is applied.
#[derive(Debug)]
pub struct Propagator<'a> {
    generator: &'a CMatrix,
    max_step: f64,
    k1: CVector,
    k2: CVector,
    k3: CVector,
    k4: CVector,
    stage: CVector,
}

impl<'a> Propagator<'a> {
    pub fn new(l: &'a Liouvillian, max_step: f64) -> Result<Self> {
        if !(max_step > 0.0 && max_step.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "dt",
                reason: "must be positive",
            });
        }
        let scaled = l.norm_inf() * max_step;
        if scaled > MAX_STEP_NORM {
            return Err(Error::StepTooLarge(scaled));
        }
        let n = l.matrix.nrows();
        Ok(Self {
            generator: &l.matrix,
            max_step,
            k1: CVector::zeros(n),
            k2: CVector::zeros(n),
            k3: CVector::zeros(n),
            k4: CVector::zeros(n),
            stage: CVector::zeros(n),
        })
    }

    /// Advances `state` by `duration` in equal steps no longer than the
    /// configured maximum.
    pub fn advance(&mut self, state: &mut CVector, duration: f64) {
        if duration <= 0.0 {
            return;
        }
        let steps = (duration / self.max_step).ceil().max(1.0) as usize;
        let dt = duration / steps as f64;
        for _ in 0..steps {
            self.step(state, dt);
        }
    }

    fn step(&mut self, y: &mut CVector, dt: f64) {
        let l = self.generator;
        let half = Complex64::new(0.5 * dt, 0.0);
        let full = Complex64::new(dt, 0.0);

        self.k1.gemv(ONE, l, y, ZERO);

        self.stage.copy_from(y);
        self.stage.axpy(half, &self.k1, ONE);
        self.k2.gemv(ONE, l, &self.stage, ZERO);

        self.stage.copy_from(y);
        self.stage.axpy(half, &self.k2, ONE);
        self.k3.gemv(ONE, l, &self.stage, ZERO);

        self.stage.copy_from(y);
        self.stage.axpy(full, &self.k3, ONE);
        self.k4.gemv(ONE, l, &self.stage, ZERO);

        let sixth = Complex64::new(dt / 6.0, 0.0);
        let third = Complex64::new(dt / 3.0, 0.0);
        y.axpy(sixth, &self.k1, ONE);
        y.axpy(third, &self.k2, ONE);
        y.axpy(third, &self.k3, ONE);
        y.axpy(sixth, &self.k4, ONE);
    }
}

/// ρ(t_final) from ρ(0) = `rho0` by RK4 with steps no longer than `dt`.
pub fn evolve(
    l: &Liouvillian,
    rho0: &DensityMatrix,
    t_final: f64,
    dt: f64,
) -> Result<DensityMatrix> {
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "t_final",
            reason: "must be finite and non-negative",
        });
    }
    l.check_dim(rho0)?;
    let mut prop = Propagator::new(l, dt)?;
    let mut v = vectorize(rho0);
    prop.advance(&mut v, t_final);
    Ok(unvec(&v, l.dim))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{annihilation, Operator};

    fn fig1(detuning: f64) -> SystemParams {
        SystemParams::resonant(1.0, 0.05, 0.05, 0.01, detuning).unwrap()
    }

    #[test]
    fn basis_assembly_matches_direct_build() {
        let h = HilbertConfig::new(3).unwrap();
        let p = SystemParams::new(0.8, 0.3, 0.2, 0.05, -0.4, 0.7).unwrap();
        let direct = build_liouvillian(&LindbladModel::cavity_qed(&p, &h).unwrap()).unwrap();
        let assembled = LiouvillianBasis::new(h).assemble(&p).unwrap();
        let diff = (direct.matrix() - assembled.matrix()).camax();
        assert!(diff < 1e-14, "{diff}");
    }

    #[test]
    fn cavity_decay_rate_is_kappa() {
        // single cavity mode, H = 0, one channel (a, κ)
        let kappa = 0.37;
        let a = annihilation(3).unwrap();
        let model = LindbladModel::new(
            Operator::zeros(4),
            alloc::vec![CollapseChannel {
                operator: a.clone(),
                rate: kappa,
            }],
        )
        .unwrap();
        let l = build_liouvillian(&model).unwrap();
        let rho = DensityMatrix::basis_projector(4, 1);
        let n = &a.adjoint() * &a;
        let dn = l.apply(&rho).unwrap().expectation(&n).unwrap();
        assert!((dn.re + kappa).abs() < 1e-14);
    }

    #[test]
    fn undriven_empty_cavity_relaxes_to_vacuum() {
        let h = HilbertConfig::new(4).unwrap();
        let p = SystemParams::resonant(0.0, 0.3, 0.2, 0.0, 0.5).unwrap();
        let l = LiouvillianBasis::new(h).assemble(&p).unwrap();
        let rho = steady_state(&l).unwrap();
        let vac = DensityMatrix::basis_projector(h.dim(), h.index(0, false));
        assert!(rho.max_abs_diff(&vac) < 1e-12);
    }

    #[test]
    fn no_dissipation_is_rejected() {
        let h = HilbertConfig::new(2).unwrap();
        let p = SystemParams::resonant(1.0, 0.0, 0.0, 0.1, 0.0).unwrap();
        let l = LiouvillianBasis::new(h).assemble(&p).unwrap();
        assert_eq!(steady_state(&l).unwrap_err(), Error::NoDissipation);
    }

    #[test]
    fn decoupled_atom_without_decay_is_degenerate() {
        // g = 0 and γ = 0: the atomic populations are separately conserved
        let h = HilbertConfig::new(2).unwrap();
        let p = SystemParams::resonant(0.0, 0.5, 0.0, 0.1, 0.0).unwrap();
        let l = LiouvillianBasis::new(h).assemble(&p).unwrap();
        assert!(matches!(
            steady_state(&l),
            Err(Error::DegenerateNullSpace { .. })
        ));
    }

    #[test]
    fn weak_drive_hierarchy_at_blockade_point() {
        let h = HilbertConfig::default();
        let l = LiouvillianBasis::new(h).assemble(&fig1(1.0)).unwrap();
        let rho = steady_state(&l).unwrap();
        // photon-number distribution from the diagonal
        let pn = |n: usize| {
            rho.get(h.index(n, false), h.index(n, false)).re
                + rho.get(h.index(n, true), h.index(n, true)).re
        };
        assert!(pn(1) / pn(2) > 1e2, "p1 = {}, p2 = {}", pn(1), pn(2));
    }

    #[test]
    fn step_size_guard() {
        let h = HilbertConfig::default();
        let l = LiouvillianBasis::new(h).assemble(&fig1(0.0)).unwrap();
        let rho = DensityMatrix::basis_projector(h.dim(), 0);
        let too_big = 0.2 / l.norm_inf();
        assert!(matches!(
            evolve(&l, &rho, 1.0, too_big),
            Err(Error::StepTooLarge(_))
        ));
        assert!(evolve(&l, &rho, 1.0, -1.0).is_err());
        assert!(evolve(&l, &rho, -1.0, 0.01).is_err());
    }

    #[test]
    fn steady_state_is_a_fixed_point_of_evolve() {
        let h = HilbertConfig::default();
        let p = fig1(0.6);
        let l = LiouvillianBasis::new(h).assemble(&p).unwrap();
        let rho = steady_state(&l).unwrap();
        assert!(l.residual(&rho).unwrap() < 1e-10);
        let later = evolve(&l, &rho, 5.0, default_time_step(&p)).unwrap();
        assert!(later.max_abs_diff(&rho) < 1e-8);
    }
}
