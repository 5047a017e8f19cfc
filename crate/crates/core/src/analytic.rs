//! Two-excitation amplitude model of the weakly driven system.
//!
//! The state is restricted to |0,g⟩, |1,g⟩, |0,e⟩, |2,g⟩, |1,e⟩ and evolved
//! under the non-Hermitian H − (i/2)(κ a†a + γ σ⁺σ⁻) with the vacuum amplitude
//! frozen at 1. Everything is expressed through
//!
//! ```text
//! α = γ/2 + iδ,   β = κ/2 + iΔ_a
//! ```
//!
//! The closed-form amplitudes keep the leading order in η of each amplitude:
//! C₁g, C₀e at order η and C₂g, C₁e at order η².

use core::f64::consts::SQRT_2;

use num_complex::Complex64;

#[cfg(not(feature = "std"))]
use num_traits::Float as _;

use crate::error::{Error, Result};
use crate::operators::{CMatrix, DensityMatrix};
use crate::params::SystemParams;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaBeta {
    /// γ/2 + iδ
    pub alpha: Complex64,
    /// κ/2 + iΔ_a
    pub beta: Complex64,
}

impl AlphaBeta {
    pub fn new(p: &SystemParams) -> Self {
        Self {
            alpha: Complex64::new(p.gamma / 2.0, p.delta),
            beta: Complex64::new(p.kappa / 2.0, p.delta_a),
        }
    }
}

/// Amplitudes of |0,g⟩, |1,g⟩, |0,e⟩, |2,g⟩, |1,e⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeSet {
    pub c0g: Complex64,
    pub c1g: Complex64,
    pub c0e: Complex64,
    pub c2g: Complex64,
    pub c1e: Complex64,
}

impl AmplitudeSet {
    pub fn ground() -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self {
            c0g: re(1.0),
            c1g: z,
            c0e: z,
            c2g: z,
            c1e: z,
        }
    }

    /// One-photon probability |C₁g|².
    pub fn p1(&self) -> f64 {
        self.c1g.norm_sqr()
    }

    /// Two-photon probability |C₂g|².
    pub fn p2(&self) -> f64 {
        self.c2g.norm_sqr()
    }

    /// 2p₂/p₁², the weak-drive form of Σn(n−1)pₙ / (Σnpₙ)².
    pub fn g2_weak_drive(&self) -> f64 {
        2.0 * self.p2() / (self.p1() * self.p1())
    }

    /// 2p₂/(p₁ + 2p₂)².
    pub fn g2_from_probabilities(&self) -> f64 {
        let denom = self.p1() + 2.0 * self.p2();
        2.0 * self.p2() / (denom * denom)
    }

    /// Excited amplitudes in ODE order (C₁g, C₀e, C₂g, C₁e).
    fn excited(&self) -> [Complex64; 4] {
        [self.c1g, self.c0e, self.c2g, self.c1e]
    }

    fn from_excited(c: [Complex64; 4]) -> Self {
        Self {
            c0g: re(1.0),
            c1g: c[0],
            c0e: c[1],
            c2g: c[2],
            c1e: c[3],
        }
    }
}

/// Energies E_{n±} = nΔ ± g√n of the n-excitation doublet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedLevel {
    pub n: usize,
    pub energy_plus: f64,
    pub energy_minus: f64,
}

impl DressedLevel {
    pub fn splitting(&self) -> f64 {
        self.energy_plus - self.energy_minus
    }
}

/// Requires Δ_a = δ.
pub fn dressed_energies(p: &SystemParams, n: usize) -> Result<DressedLevel> {
    if n < 1 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: "excitation number must be at least 1",
        });
    }
    let scale = p.delta_a.abs().max(p.delta.abs()).max(1.0);
    if (p.delta_a - p.delta).abs() > 1e-12 * scale {
        return Err(Error::UnequalDetunings {
            delta_a: p.delta_a,
            delta: p.delta,
        });
    }
    let nf = n as f64;
    let centre = nf * p.delta;
    let half = p.g * nf.sqrt();
    Ok(DressedLevel {
        n,
        energy_plus: centre + half,
        energy_minus: centre - half,
    })
}

/// Denominators below this modulus are treated as singular.
const DENOMINATOR_FLOOR: f64 = 1e-12;

/// Closed-form steady amplitudes with C₀g = 1:
///
/// ```text
/// C₁g = −iηα / D₁
/// C₀e = −gη / D₁
/// C₂g = η²(g² − α² − αβ) / (√2 D₁ D₂)
/// C₁e = igη²(α + β) / (D₁ D₂)
/// D₁ = g² + αβ,  D₂ = g² + β² + αβ
/// ```
pub fn steady_amplitudes(p: &SystemParams) -> Result<AmplitudeSet> {
    let AlphaBeta { alpha, beta } = AlphaBeta::new(p);
    let g2 = re(p.g * p.g);
    let d1 = g2 + alpha * beta;
    let d2 = g2 + beta * beta + alpha * beta;
    for d in [d1, d2] {
        if d.norm() < DENOMINATOR_FLOOR {
            return Err(Error::SingularDenominator(d.norm()));
        }
    }
    let eta = p.eta;
    let eta2 = eta * eta;
    Ok(AmplitudeSet {
        c0g: re(1.0),
        c1g: -I * eta * alpha / d1,
        c0e: re(-p.g * eta) / d1,
        c2g: (g2 - alpha * alpha - alpha * beta) * eta2 / (SQRT_2 * d1 * d2),
        c1e: I * (p.g * eta2) * (alpha + beta) / (d1 * d2),
    })
}

/// The four amplitude equations of the truncated ansatz with C₀g ≡ 1.
#[derive(Debug, Clone, Copy)]
pub struct AmplitudeOdes {
    g: f64,
    eta: f64,
    ab: AlphaBeta,
}

impl AmplitudeOdes {
    pub fn new(p: &SystemParams) -> Self {
        Self {
            g: p.g,
            eta: p.eta,
            ab: AlphaBeta::new(p),
        }
    }

    /// d/dt of (C₁g, C₀e, C₂g, C₁e).
    pub fn rhs(&self, c: &[Complex64; 4]) -> [Complex64; 4] {
        let AlphaBeta { alpha, beta } = self.ab;
        let (g, eta) = (self.g, self.eta);
        let [c1g, c0e, c2g, c1e] = *c;
        [
            -beta * c1g - I * eta - I * g * c0e - I * (SQRT_2 * eta) * c2g,
            -alpha * c0e - I * g * c1g - I * eta * c1e,
            -2.0 * beta * c2g - I * (SQRT_2 * g) * c1e - I * (SQRT_2 * eta) * c1g,
            -(alpha + beta) * c1e - I * (SQRT_2 * g) * c2g - I * eta * c0e,
        ]
    }

    fn step(&self, c: &mut [Complex64; 4], dt: f64) {
        let add = |a: &[Complex64; 4], k: &[Complex64; 4], h: f64| -> [Complex64; 4] {
            core::array::from_fn(|i| a[i] + k[i] * h)
        };
        let k1 = self.rhs(c);
        let k2 = self.rhs(&add(c, &k1, dt / 2.0));
        let k3 = self.rhs(&add(c, &k2, dt / 2.0));
        let k4 = self.rhs(&add(c, &k3, dt));
        for i in 0..4 {
            c[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0);
        }
    }

    /// RK4 over `duration` in equal steps of at most `dt`.
    pub fn advance(&self, amps: &mut AmplitudeSet, duration: f64, dt: f64) {
        if duration <= 0.0 {
            return;
        }
        let steps = (duration / dt).ceil().max(1.0) as usize;
        let h = duration / steps as f64;
        let mut c = amps.excited();
        for _ in 0..steps {
            self.step(&mut c, h);
        }
        *amps = AmplitudeSet::from_excited(c);
    }
}

fn check_step(dt: f64, t_final: f64) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "dt",
            reason: "must be positive",
        });
    }
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "t_final",
            reason: "must be finite and non-negative",
        });
    }
    Ok(())
}

/// Amplitudes at `t` starting from |0,g⟩, with no convergence requirement.
pub fn evolve_amplitudes(p: &SystemParams, t: f64, dt: f64) -> Result<AmplitudeSet> {
    check_step(dt, t)?;
    let mut amps = AmplitudeSet::ground();
    AmplitudeOdes::new(p).advance(&mut amps, t, dt);
    Ok(amps)
}

/// Integrates the amplitude equations from |0,g⟩ to `t_final` and requires
/// the relative change over the final 10% of the run to be at most 1e-6.
pub fn integrate_amplitude_odes(p: &SystemParams, t_final: f64, dt: f64) -> Result<AmplitudeSet> {
    check_step(dt, t_final)?;
    let odes = AmplitudeOdes::new(p);
    let mut amps = AmplitudeSet::ground();
    odes.advance(&mut amps, 0.9 * t_final, dt);
    let before = amps.excited();
    odes.advance(&mut amps, 0.1 * t_final, dt);
    let after = amps.excited();

    let norm = |c: &[Complex64; 4]| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let diff: [Complex64; 4] = core::array::from_fn(|i| after[i] - before[i]);
    let change = norm(&diff);
    let size = norm(&after);
    let relative = if size > 0.0 { change / size } else { change };
    if relative > 1e-6 {
        return Err(Error::NotConverged(relative));
    }
    Ok(amps)
}

/// The x, y, z of g²(0) ≈ xy/z, each a product of a number and its conjugate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockadeFactors {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
}

impl BlockadeFactors {
    pub fn new(p: &SystemParams) -> Self {
        let AlphaBeta { alpha, beta } = AlphaBeta::new(p);
        let (ac, bc) = (alpha.conj(), beta.conj());
        let g2 = re(p.g * p.g);
        Self {
            x: (g2 + alpha * beta) * (g2 + ac * bc),
            y: (g2 - alpha * (alpha + beta)) * (g2 - ac * (ac + bc)),
            z: alpha * alpha * ac * ac * (g2 + beta * (alpha + beta)) * (g2 + bc * (ac + bc)),
        }
    }
}

/// g²(0) ≈ xy/z. η cancels exactly.
pub fn g2_zero_analytic(p: &SystemParams) -> Result<f64> {
    let BlockadeFactors { x, y, z } = BlockadeFactors::new(p);
    let scale = (x * y).norm().max(f64::MIN_POSITIVE);
    if z.norm() < 1e-300 * scale || z.norm() == 0.0 {
        return Err(Error::SingularZ);
    }
    let ratio = x * y / z;
    if ratio.im.abs() > 1e-12 * ratio.norm() {
        return Err(Error::ComplexResidue(ratio.im));
    }
    Ok(ratio.re)
}

/// Reduced atomic state of the five-amplitude ket, normalised by its own
/// trace:
///
/// ```text
/// ρ_gg = |C₀g|² + |C₁g|² + |C₂g|²    ρ_ge = C₀g C₀e* + C₁g C₁e*
/// ρ_ee = |C₀e|² + |C₁e|²              ρ_eg = ρ_ge*
/// ```
pub fn atom_rho_from_amplitudes(amps: &AmplitudeSet) -> DensityMatrix {
    let a = amps;
    let gg = a.c0g.norm_sqr() + a.c1g.norm_sqr() + a.c2g.norm_sqr();
    let ee = a.c0e.norm_sqr() + a.c1e.norm_sqr();
    let ge = a.c0g * a.c0e.conj() + a.c1g * a.c1e.conj();
    let tr = gg + ee;
    let m = CMatrix::from_row_slice(2, 2, &[re(gg / tr), ge / tr, ge.conj() / tr, re(ee / tr)]);
    DensityMatrix::from_matrix(m).expect("2x2")
}

/// C(ρ_A) = 2gη/√x.
pub fn atom_coherence_analytic(p: &SystemParams) -> f64 {
    let x = BlockadeFactors::new(p).x.re;
    2.0 * p.g * p.eta / x.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::l1_coherence;

    fn fig1(detuning: f64) -> SystemParams {
        SystemParams::resonant(1.0, 0.05, 0.05, 0.01, detuning).unwrap()
    }

    #[test]
    fn dressed_levels() {
        let p = SystemParams::resonant(1.0, 0.1, 0.1, 0.0, 0.0).unwrap();
        let l1 = dressed_energies(&p, 1).unwrap();
        assert_eq!((l1.energy_plus, l1.energy_minus), (1.0, -1.0));
        let l2 = dressed_energies(&p, 2).unwrap();
        assert!((l2.energy_plus - SQRT_2).abs() < 1e-15);
        assert!((l2.energy_minus + SQRT_2).abs() < 1e-15);
        assert!((l2.splitting() - 2.0 * SQRT_2).abs() < 1e-15);

        // drive at Δ = g is resonant with |0,g⟩ → |1,−⟩
        let p = p.with_detuning(1.0);
        assert_eq!(dressed_energies(&p, 1).unwrap().energy_minus, 0.0);

        let skew = SystemParams::new(1.0, 0.1, 0.1, 0.0, 0.5, 0.4).unwrap();
        assert!(matches!(
            dressed_energies(&skew, 1),
            Err(Error::UnequalDetunings { .. })
        ));
        assert!(dressed_energies(&p, 0).is_err());
    }

    #[test]
    fn uncoupled_amplitudes_are_the_driven_cavity() {
        let p = SystemParams::new(0.0, 0.4, 0.2, 0.01, 0.3, -0.1).unwrap();
        let a = steady_amplitudes(&p).unwrap();
        let beta = AlphaBeta::new(&p).beta;
        assert!((a.c1g - (-I * 0.01 / beta)).norm() < 1e-15);
        assert_eq!(a.c0e.norm(), 0.0);
        assert_eq!(a.c1e.norm(), 0.0);
        // coherent-state two-photon amplitude (−iη/β)²/√2
        let coh = -(0.01 * 0.01) / (beta * beta * SQRT_2);
        assert!((a.c2g - coh).norm() < 1e-15);
    }

    #[test]
    fn undriven_amplitudes_vanish() {
        let p = fig1(0.3);
        let p = SystemParams { eta: 0.0, ..p };
        let a = steady_amplitudes(&p).unwrap();
        for z in a.excited() {
            assert_eq!(z.norm(), 0.0);
        }
        let t = evolve_amplitudes(&p, 10.0, 0.01).unwrap();
        for z in t.excited() {
            assert_eq!(z.norm(), 0.0);
        }
    }

    #[test]
    fn lossless_resonance_is_singular() {
        let p = SystemParams::resonant(1.0, 0.0, 0.0, 0.01, 1.0).unwrap();
        assert!(matches!(
            steady_amplitudes(&p),
            Err(Error::SingularDenominator(_))
        ));
        let p = SystemParams::resonant(1.0, 0.1, 0.0, 0.01, 0.0).unwrap();
        assert_eq!(g2_zero_analytic(&p), Err(Error::SingularZ));
    }

    #[test]
    fn coherent_limit_of_g2() {
        for d in [-3.0, -0.5, 0.0, 0.7, 2.0] {
            let p = SystemParams::resonant(0.0, 0.3, 0.1, 0.01, d).unwrap();
            assert!((g2_zero_analytic(&p).unwrap() - 1.0).abs() <= 1e-12);
            assert_eq!(atom_coherence_analytic(&p), 0.0);
        }
    }

    #[test]
    fn tunnelling_peak_at_zero_detuning() {
        let at_zero = g2_zero_analytic(&fig1(0.0)).unwrap();
        assert!(at_zero > 1e5);
        let amps = steady_amplitudes(&fig1(0.0)).unwrap();
        assert!(((amps.g2_weak_drive() - at_zero) / at_zero).abs() < 1e-10);
    }

    #[test]
    fn coherence_is_linear_in_drive_and_even_in_detuning() {
        let p = fig1(0.8);
        let half = SystemParams {
            eta: p.eta / 2.0,
            ..p
        };
        let ratio = atom_coherence_analytic(&p) / atom_coherence_analytic(&half);
        assert!((ratio - 2.0).abs() < 1e-12);
        let g_a = g2_zero_analytic(&p).unwrap();
        assert!(((g2_zero_analytic(&half).unwrap() - g_a) / g_a).abs() < 1e-12);

        for d in [0.1, 0.5, 1.0, 1.7] {
            let (plus, minus) = (fig1(d), fig1(-d));
            let gp = g2_zero_analytic(&plus).unwrap();
            let gm = g2_zero_analytic(&minus).unwrap();
            assert!(((gp - gm) / gp).abs() < 1e-12);
            let cp = atom_coherence_analytic(&plus);
            let cm = atom_coherence_analytic(&minus);
            assert!(((cp - cm) / cp).abs() < 1e-12);
        }
    }

    #[test]
    fn atomic_state_from_amplitudes() {
        let rho = atom_rho_from_amplitudes(&AmplitudeSet::ground());
        assert_eq!(rho.get(0, 0), re(1.0));
        assert_eq!(l1_coherence(&rho), 0.0);

        let p = SystemParams::resonant(0.0, 0.1, 0.1, 0.01, 0.2).unwrap();
        let rho = atom_rho_from_amplitudes(&steady_amplitudes(&p).unwrap());
        assert_eq!(l1_coherence(&rho), 0.0);
        assert!((rho.trace() - re(1.0)).norm() < 1e-15);
    }

    #[test]
    fn off_diagonal_dominated_by_leading_term() {
        let p = fig1(1.0);
        let amps = steady_amplitudes(&p).unwrap();
        let rho = atom_rho_from_amplitudes(&amps);
        let tr = amps.c0g.norm_sqr()
            + amps.c1g.norm_sqr()
            + amps.c2g.norm_sqr()
            + amps.c0e.norm_sqr()
            + amps.c1e.norm_sqr();
        let full = rho.get(0, 1).norm() * tr;
        let leading = p.g * p.eta / BlockadeFactors::new(&p).x.re.sqrt();
        // the C₁g C₁e* correction is O(η³) against the O(η) leading term
        let correction = (amps.c1g * amps.c1e.conj()).norm();
        assert!((full - leading).abs() <= correction * (1.0 + 1e-9));
        assert!(correction / leading < 1e-2);
    }

    #[test]
    fn free_cavity_amplitude_follows_exponential() {
        // g = 0, Δ_a = 0: C₁g(t) = −(2iη/κ)(1 − e^{−κt/2}) up to the O(η²/κ²)
        // back-action of C₂g
        let (kappa, eta) = (0.4, 1e-4);
        let p = SystemParams::new(0.0, kappa, 0.3, eta, 0.0, 0.0).unwrap();
        let t = 2.0 / kappa;
        let amps = evolve_amplitudes(&p, t, 1e-3).unwrap();
        let want = -I * (2.0 * eta / kappa) * (1.0 - (-kappa * t / 2.0).exp());
        assert!((amps.c1g - want).norm() < 1e-6 * want.norm());
    }

    #[test]
    fn unconverged_run_is_reported() {
        let p = fig1(1.0);
        assert!(matches!(
            integrate_amplitude_odes(&p, 5.0, 0.01),
            Err(Error::NotConverged(_))
        ));
        assert!(integrate_amplitude_odes(&p, 5.0, 0.0).is_err());
    }
}
