//! Physical parameters and the truncation of the cavity mode.

use crate::error::{Error, Result};

/// Rates and detunings of the rotating-frame model, all in one common rate
/// unit (ħ = 1).
///
/// `delta_a` is the laser–cavity detuning ω_a − ω_L and `delta` the
/// laser–atom detuning ω_e − ω_L.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub g: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub eta: f64,
    pub delta_a: f64,
    pub delta: f64,
}

impl SystemParams {
    pub fn new(g: f64, kappa: f64, gamma: f64, eta: f64, delta_a: f64, delta: f64) -> Result<Self> {
        let p = Self {
            g,
            kappa,
            gamma,
            eta,
            delta_a,
            delta,
        };
        p.validate()?;
        Ok(p)
    }

    /// Atom and cavity resonant with each other, both detuned by `detuning`
    /// from the laser.
    pub fn resonant(g: f64, kappa: f64, gamma: f64, eta: f64, detuning: f64) -> Result<Self> {
        Self::new(g, kappa, gamma, eta, detuning, detuning)
    }

    pub fn validate(&self) -> Result<()> {
        let rates = [
            ("g", self.g),
            ("kappa", self.kappa),
            ("gamma", self.gamma),
            ("eta", self.eta),
        ];
        for (name, v) in rates {
            if !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: "must be finite",
                });
            }
            if v < 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    reason: "must be non-negative",
                });
            }
        }
        for (name, v) in [("delta_a", self.delta_a), ("delta", self.delta)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: "must be finite",
                });
            }
        }
        Ok(())
    }

    /// Sets Δ_a = δ = `detuning`.
    pub fn with_detuning(mut self, detuning: f64) -> Self {
        self.delta_a = detuning;
        self.delta = detuning;
        self
    }

    /// Soft check for the regime where the two-excitation amplitude model is
    /// meaningful: η ≤ 0.1·max(g, κ). Nothing is enforced.
    pub fn is_weak_drive(&self) -> bool {
        self.eta <= 0.1 * self.g.max(self.kappa)
    }

    /// Largest rate or detuning magnitude, floored at 1.
    pub fn max_rate(&self) -> f64 {
        [
            self.kappa,
            self.gamma,
            self.g,
            self.delta_a.abs(),
            self.delta.abs(),
            1.0,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Truncation of the cavity Fock space. The composite ordering is atom ⊗
/// cavity with basis (|g⟩, |e⟩) and ascending photon number, so the state
/// |n, s⟩ sits at index `s·(n_max+1) + n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HilbertConfig {
    n_max: usize,
}

impl HilbertConfig {
    pub const DEFAULT_N_MAX: usize = 4;

    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidParameter {
                name: "n_max",
                reason: "must be at least 1",
            });
        }
        Ok(Self { n_max })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn cavity_dim(&self) -> usize {
        self.n_max + 1
    }

    /// Composite dimension 2·(n_max+1).
    pub fn dim(&self) -> usize {
        2 * self.cavity_dim()
    }

    /// Index of |n, g⟩ (`excited == false`) or |n, e⟩.
    pub fn index(&self, photons: usize, excited: bool) -> usize {
        debug_assert!(photons <= self.n_max);
        usize::from(excited) * self.cavity_dim() + photons
    }
}

impl Default for HilbertConfig {
    fn default() -> Self {
        Self {
            n_max: Self::DEFAULT_N_MAX,
        }
    }
}
