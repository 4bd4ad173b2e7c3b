//! Exact complex linear algebra on the single-photon (2-d) and photon-pair
//! (4-d) polarization spaces.
//!
//! Two-photon vectors and matrices use the basis order |HH>, |HV>, |VH>, |VV>
//! with arm A as the major index, so amplitude `2*a + b` belongs to the pair
//! outcome `(a, b)`.

mod eigen;
mod matrix;

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use eigen::{eigenvalues_hermitian, HermitianEigen};
pub use matrix::{CMatrix, Mat2, Mat4};

/// Entrywise Hermiticity tolerance for accepting a state.
pub const HERMITIAN_TOL: f64 = 1e-9;
/// Trace tolerance for accepting a state.
pub const TRACE_TOL: f64 = 1e-9;
/// Lowest admissible eigenvalue of a state.
pub const POSITIVITY_TOL: f64 = -1e-9;
/// Norm tolerance for kets.
pub const NORM_TOL: f64 = 1e-12;
/// Unitarity tolerance for Jones matrices.
pub const UNITARY_TOL: f64 = 1e-12;
/// Tolerance on the total weight of a mixture.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Detector site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arm {
    A,
    B,
}

fn check_finite(zs: &[Complex64], what: &'static str) -> Result<()> {
    if zs.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite { what })
    }
}

fn norm(zs: &[Complex64]) -> f64 {
    zs.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Normalized single-photon polarization state, components (H, V).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationKet([Complex64; 2]);

impl PolarizationKet {
    pub fn new(h: Complex64, v: Complex64) -> Result<Self> {
        let amp = [h, v];
        check_finite(&amp, "polarization ket")?;
        let n = norm(&amp);
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(Self(amp))
    }

    /// Rescales an arbitrary nonzero finite vector to unit norm.
    pub fn normalized(h: Complex64, v: Complex64) -> Result<Self> {
        let amp = [h, v];
        check_finite(&amp, "polarization ket")?;
        let n = norm(&amp);
        if n == 0.0 {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(Self([h / n, v / n]))
    }

    pub const fn h() -> Self {
        Self([Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])
    }

    pub const fn v() -> Self {
        Self([Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)])
    }

    /// (|H> + |V>)/√2
    pub const fn d() -> Self {
        Self([
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(FRAC_1_SQRT_2, 0.0),
        ])
    }

    /// (|H> - |V>)/√2
    pub const fn f() -> Self {
        Self([
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(-FRAC_1_SQRT_2, 0.0),
        ])
    }

    /// (|H> + i|V>)/√2
    pub const fn l() -> Self {
        Self([
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.0, FRAC_1_SQRT_2),
        ])
    }

    /// (|H> - i|V>)/√2
    pub const fn r() -> Self {
        Self([
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.0, -FRAC_1_SQRT_2),
        ])
    }

    pub fn amplitudes(&self) -> &[Complex64; 2] {
        &self.0
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.0[0].conj() * other.0[0] + self.0[1].conj() * other.0[1]
    }

    pub fn projector(&self) -> Mat2 {
        Mat2::outer(&self.0, &self.0)
    }

    pub(crate) fn from_raw(amp: [Complex64; 2]) -> Self {
        Self(amp)
    }
}

/// Normalized photon-pair state in the |HH>, |HV>, |VH>, |VV> basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitKet([Complex64; 4]);

impl TwoQubitKet {
    pub fn new(amp: [Complex64; 4]) -> Result<Self> {
        check_finite(&amp, "two-qubit ket")?;
        let n = norm(&amp);
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(Self(amp))
    }

    pub fn amplitudes(&self) -> &[Complex64; 4] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        norm(&self.0)
    }

    pub fn inner(&self, other: &Self) -> Complex64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    pub(crate) fn from_raw(amp: [Complex64; 4]) -> Self {
        Self(amp)
    }
}

/// `a ⊗ b` with arm A major.
pub fn tensor(a: &PolarizationKet, b: &PolarizationKet) -> TwoQubitKet {
    let (x, y) = (a.amplitudes(), b.amplitudes());
    TwoQubitKet([x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1]])
}

/// Hermitian, unit-trace, positive semidefinite 4x4 matrix.
#[derive(Clone, Copy, PartialEq)]
pub struct DensityMatrix(Mat4);

impl DensityMatrix {
    /// Validates `m` against the state invariants.
    ///
    /// The accepted matrix is replaced by its exact Hermitian part.
    pub fn new(m: Mat4) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite {
                what: "density matrix",
            });
        }
        let residual = m.hermiticity_residual();
        if residual > HERMITIAN_TOL {
            return Err(Error::NonHermitian { residual });
        }
        let m = m.hermitian_part();
        let trace = m.trace().re;
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceViolation { trace });
        }
        let min_eigenvalue = HermitianEigen::decompose(m).values[0];
        if min_eigenvalue < POSITIVITY_TOL {
            return Err(Error::NegativeSpectrum { min_eigenvalue });
        }
        Ok(Self(m))
    }

    /// Wraps a matrix that is a state by construction.
    pub(crate) fn from_trusted(m: Mat4) -> Self {
        Self(m.hermitian_part())
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    /// The maximally mixed state 1/4.
    pub fn maximally_mixed() -> Self {
        Self(Mat4::identity().scale(0.25))
    }

    /// Ascending spectrum.
    pub fn eigenvalues(&self) -> [f64; 4] {
        HermitianEigen::decompose(self.0).values
    }

    /// Largest entrywise modulus of the difference of two states.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0.max_abs_diff(&other.0)
    }

    pub fn product(a: &Mat2, b: &Mat2) -> Result<Self> {
        Self::new(a.kron(b))
    }
}

impl fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensityMatrix{:?}", self.0)
    }
}

/// Unitary 2x2 operator acting on one arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesMatrix(Mat2);

impl JonesMatrix {
    pub fn new(u: Mat2) -> Result<Self> {
        if !u.is_finite() {
            return Err(Error::NonFinite {
                what: "Jones matrix",
            });
        }
        let residual = u.unitarity_residual();
        if residual > UNITARY_TOL {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self(u))
    }

    pub(crate) fn from_trusted(u: Mat2) -> Self {
        Self(u)
    }

    pub fn identity() -> Self {
        Self(Mat2::identity())
    }

    /// Polarization flip H <-> V.
    pub fn flip() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self(Mat2::from_rows([[zero, one], [one, zero]]))
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn apply(&self, k: &PolarizationKet) -> PolarizationKet {
        PolarizationKet(self.0.apply(k.amplitudes()))
    }

    /// `self` after `first`: light meets `first` before `self`.
    pub fn after(&self, first: &JonesMatrix) -> JonesMatrix {
        JonesMatrix(self.0 * first.0)
    }
}

/// `|k><k|`
pub fn projector(k: &TwoQubitKet) -> DensityMatrix {
    DensityMatrix::from_trusted(Mat4::outer(k.amplitudes(), k.amplitudes()))
}

/// Convex combination of states. Weights must be nonnegative and sum to 1.
pub fn mix(terms: &[(f64, DensityMatrix)]) -> Result<DensityMatrix> {
    if terms.is_empty() {
        return Err(Error::EmptyMixture);
    }
    let mut sum = 0.0;
    for &(w, _) in terms {
        if !w.is_finite() {
            return Err(Error::NonFinite {
                what: "mixture weight",
            });
        }
        if w < 0.0 {
            return Err(Error::NegativeWeight { weight: w });
        }
        sum += w;
    }
    if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(Error::WeightSum { sum });
    }
    let m = terms
        .iter()
        .fold(Mat4::zeros(), |acc, (w, rho)| acc + rho.matrix().scale(*w));
    Ok(DensityMatrix::from_trusted(m))
}

/// Lifts a single-arm operator to the pair space with identity on the other arm.
pub fn lift(arm: Arm, u: &Mat2) -> Mat4 {
    match arm {
        Arm::A => u.kron(&Mat2::identity()),
        Arm::B => Mat2::identity().kron(u),
    }
}

/// `(U ⊗ 1) ρ (U ⊗ 1)^dagger` or the arm-B analogue.
pub fn apply_local(rho: &DensityMatrix, arm: Arm, u: &JonesMatrix) -> DensityMatrix {
    let big = lift(arm, u.matrix());
    DensityMatrix::from_trusted(big * *rho.matrix() * big.adjoint())
}

/// Zeroes every off-diagonal element in the computational basis.
pub fn dephase_diagonal(rho: &DensityMatrix) -> DensityMatrix {
    let mut m = Mat4::zeros();
    for i in 0..4 {
        m[(i, i)] = Complex64::new(rho.get(i, i).re, 0.0);
    }
    DensityMatrix(m)
}

/// Transposes the indices of one arm: `(ab, a'b') -> (ab', a'b)` for arm B.
///
/// The result is Hermitian with unit trace but need not be positive.
pub fn partial_transpose(rho: &DensityMatrix, arm: Arm) -> Mat4 {
    partial_transpose_matrix(rho.matrix(), arm)
}

pub fn partial_transpose_matrix(m: &Mat4, arm: Arm) -> Mat4 {
    let mut out = Mat4::zeros();
    for a in 0..2 {
        for b in 0..2 {
            for a2 in 0..2 {
                for b2 in 0..2 {
                    let (row, col) = match arm {
                        Arm::B => (2 * a + b2, 2 * a2 + b),
                        Arm::A => (2 * a2 + b, 2 * a + b2),
                    };
                    out[(row, col)] = m[(2 * a + b, 2 * a2 + b2)];
                }
            }
        }
    }
    out
}

/// `Re Tr[M ρ]` for a Hermitian observable `M`.
pub fn expectation(observable: &Mat4, rho: &DensityMatrix) -> Result<f64> {
    let residual = observable.hermiticity_residual();
    if residual > HERMITIAN_TOL {
        return Err(Error::NonHermitian { residual });
    }
    Ok(trace_product(observable, rho.matrix()))
}

/// `Re Tr[a b]` without forming the product.
pub(crate) fn trace_product(a: &Mat4, b: &Mat4) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..4 {
        for k in 0..4 {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    debug_assert!(
        acc.im.abs() < 1e-10 * (1.0 + acc.re.abs()),
        "imaginary residue {} in Tr[M rho]",
        acc.im
    );
    acc.re
}
