//! Dense operators on the truncated atom ⊗ cavity space and the
//! rotating-frame Hamiltonian.

use core::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

#[cfg(not(feature = "std"))]
use num_traits::Float as _;

use crate::error::{Error, Result};
use crate::params::{HilbertConfig, SystemParams};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator(CMatrix);

impl Operator {
    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        Ok(Self(m))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(CMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self(self.0.map(|z| z * factor))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    pub fn apply(&self, ket: &Ket) -> Ket {
        Ket(&self.0 * &ket.0)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// max |O − O†|.
    pub fn hermiticity_error(&self) -> f64 {
        max_abs_diff(&self.0, &self.0.adjoint())
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        Operator(&self.0 + &rhs.0)
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        Operator(&self.0 - &rhs.0)
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        Operator(&self.0 * &rhs.0)
    }
}

/// State vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket(CVector);

impl Ket {
    pub fn new(v: CVector) -> Self {
        Self(v)
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = CVector::zeros(dim);
        v[index] = ONE;
        Self(v)
    }

    pub fn from_amplitudes(amps: &[Complex64]) -> Self {
        Self(CVector::from_column_slice(amps))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn vector(&self) -> &CVector {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn normalized(&self) -> Self {
        Self(self.0.normalize())
    }
}

/// Density matrix. Physicality (Hermitian, unit trace, positive) is checked by
/// the accessors below rather than enforced at construction, since
/// intermediate operator-weighted states such as aρa† are not normalised.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        Ok(Self(m))
    }

    /// |ψ⟩⟨ψ| without normalisation.
    pub fn from_ket(ket: &Ket) -> Self {
        Self(&ket.0 * ket.0.adjoint())
    }

    pub fn basis_projector(dim: usize, index: usize) -> Self {
        Self::from_ket(&Ket::basis(dim, index))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// Tr(ρ O).
    pub fn expectation(&self, op: &Operator) -> Result<Complex64> {
        if op.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: op.dim(),
            });
        }
        let mut acc = ZERO;
        for i in 0..self.dim() {
            for k in 0..self.dim() {
                acc += self.0[(i, k)] * op.0[(k, i)];
            }
        }
        Ok(acc)
    }

    pub fn hermiticity_error(&self) -> f64 {
        max_abs_diff(&self.0, &self.0.adjoint())
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.0 + self.0.adjoint()).map(|z| z * 0.5);
        herm.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest entrywise modulus of the difference with `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs_diff(&self.0, &other.0)
    }

    pub fn normalized(&self) -> Self {
        let tr = self.trace();
        Self(self.0.map(|z| z / tr))
    }
}

pub(crate) fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Truncated cavity annihilation operator, a[n−1, n] = √n.
pub fn annihilation(n_max: usize) -> Result<Operator> {
    if n_max < 1 {
        return Err(Error::InvalidParameter {
            name: "n_max",
            reason: "must be at least 1",
        });
    }
    let dim = n_max + 1;
    let mut m = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        m[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    Ok(Operator(m))
}

/// σ⁻ = |g⟩⟨e| in the basis (|g⟩, |e⟩).
pub fn atom_lowering() -> Operator {
    let mut m = CMatrix::zeros(2, 2);
    m[(0, 1)] = ONE;
    Operator(m)
}

/// Kronecker product with `a` on the slow (atom) index.
pub fn tensor(a: &Operator, b: &Operator) -> Operator {
    Operator(a.0.kronecker(&b.0))
}

/// The cavity and atom ladder operators embedded in the composite space.
#[derive(Debug, Clone)]
pub struct CompositeOperators {
    pub hilbert: HilbertConfig,
    /// I₂ ⊗ a
    pub a: Operator,
    /// σ⁻ ⊗ I
    pub sigma_minus: Operator,
}

impl CompositeOperators {
    pub fn new(hilbert: HilbertConfig) -> Self {
        // n_max >= 1 is guaranteed by HilbertConfig
        let a = annihilation(hilbert.n_max()).expect("valid cutoff");
        Self {
            hilbert,
            a: tensor(&Operator::identity(2), &a),
            sigma_minus: tensor(&atom_lowering(), &Operator::identity(hilbert.cavity_dim())),
        }
    }

    pub fn number(&self) -> Operator {
        &self.a.adjoint() * &self.a
    }

    pub fn excited_projector(&self) -> Operator {
        &self.sigma_minus.adjoint() * &self.sigma_minus
    }

    /// a†a + σ⁺σ⁻
    pub fn excitation_number(&self) -> Operator {
        &self.number() + &self.excited_projector()
    }

    /// σ⁺a + a†σ⁻
    pub fn exchange(&self) -> Operator {
        let x = &self.sigma_minus.adjoint() * &self.a;
        &x + &x.adjoint()
    }

    /// a + a†
    pub fn drive(&self) -> Operator {
        &self.a + &self.a.adjoint()
    }
}

/// H = Δ_a a†a + δ σ⁺σ⁻ + g(σ⁺a + a†σ⁻) + η(a† + a) on the truncated space.
pub fn build_hamiltonian(p: &SystemParams, h: &HilbertConfig) -> Operator {
    let ops = CompositeOperators::new(*h);
    let terms = [
        (p.delta_a, ops.number()),
        (p.delta, ops.excited_projector()),
        (p.g, ops.exchange()),
        (p.eta, ops.drive()),
    ];
    terms.iter().fold(Operator::zeros(h.dim()), |acc, (c, op)| {
        &acc + &op.scale(*c)
    })
}

/// Trace over the cavity: ρ_A[s, s'] = Σ_n ρ[(s,n), (s',n)].
pub fn partial_trace_cavity(rho: &DensityMatrix, h: &HilbertConfig) -> Result<DensityMatrix> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: rho.dim(),
        });
    }
    let mut out = CMatrix::zeros(2, 2);
    for s in 0..2 {
        for t in 0..2 {
            out[(s, t)] = (0..=h.n_max())
                .map(|n| rho.get(h.index(n, s == 1), h.index(n, t == 1)))
                .sum();
        }
    }
    Ok(DensityMatrix(out))
}

/// l1-norm coherence Σ_{i≠j} |ρ_ij| in the matrix's own basis.
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    let d = rho.dim();
    let mut c = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                c += rho.get(i, j).norm();
            }
        }
    }
    c
}
