use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

/// Dense complex square matrix of fixed size, stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct CMatrix<const N: usize> {
    pub(crate) data: [[Complex64; N]; N],
}

/// Single-photon operator.
pub type Mat2 = CMatrix<2>;
/// Two-photon operator in the |HH>, |HV>, |VH>, |VV> basis.
pub type Mat4 = CMatrix<4>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

impl<const N: usize> CMatrix<N> {
    pub fn zeros() -> Self {
        CMatrix {
            data: [[ZERO; N]; N],
        }
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.data[i][i] = ONE;
        }
        m
    }

    pub fn from_rows(data: [[Complex64; N]; N]) -> Self {
        CMatrix { data }
    }

    /// Builds a matrix from separate real and imaginary row-major parts.
    pub fn from_parts(re: [[f64; N]; N], im: [[f64; N]; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.data[i][j] = Complex64::new(re[i][j], im[i][j]);
            }
        }
        m
    }

    pub fn from_diagonal(diag: [f64; N]) -> Self {
        let mut m = Self::zeros();
        for (i, d) in diag.into_iter().enumerate() {
            m.data[i][i] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Outer product `v w^dagger`.
    pub fn outer(v: &[Complex64; N], w: &[Complex64; N]) -> Self {
        CMatrix {
            data: v.map(|vi| w.map(|wj| vi * wj.conj())),
        }
    }

    pub fn rows(&self) -> &[[Complex64; N]; N] {
        &self.data
    }

    pub fn real_part(&self) -> [[f64; N]; N] {
        self.data.map(|row| row.map(|z| z.re))
    }

    pub fn imag_part(&self) -> [[f64; N]; N] {
        self.data.map(|row| row.map(|z| z.im))
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.data[i][j] = self.data[j][i].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.data[i][j] = self.data[j][i];
            }
        }
        m
    }

    pub fn conj(&self) -> Self {
        CMatrix {
            data: self.data.map(|row| row.map(|z| z.conj())),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        CMatrix {
            data: self.data.map(|row| row.map(|z| z * s)),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..N).map(|i| self.data[i][i]).sum()
    }

    pub fn diagonal(&self) -> [Complex64; N] {
        std::array::from_fn(|i| self.data[i][i])
    }

    pub fn apply(&self, v: &[Complex64; N]) -> [Complex64; N] {
        std::array::from_fn(|i| (0..N).map(|j| self.data[i][j] * v[j]).sum())
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..N {
            for j in 0..N {
                worst = worst.max((self.data[i][j] - other.data[i][j]).norm());
            }
        }
        worst
    }

    /// Largest entrywise modulus of `self - self^dagger`.
    pub fn hermiticity_residual(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// Largest entrywise modulus of `u u^dagger - 1`.
    pub fn unitarity_residual(&self) -> f64 {
        (*self * self.adjoint()).max_abs_diff(&Self::identity())
    }

    /// Averages the matrix with its adjoint, removing rounding asymmetry.
    pub(crate) fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.data[i][j] = (self.data[i][j] + adj.data[i][j]) * 0.5;
            }
        }
        m
    }
}

impl Mat2 {
    /// Kronecker product `self ⊗ other`, arm A major.
    pub fn kron(&self, other: &Mat2) -> Mat4 {
        let mut m = Mat4::zeros();
        for a in 0..2 {
            for b in 0..2 {
                for a2 in 0..2 {
                    for b2 in 0..2 {
                        m.data[2 * a + b][2 * a2 + b2] = self.data[a][a2] * other.data[b][b2];
                    }
                }
            }
        }
        m
    }
}

impl<const N: usize> Default for CMatrix<N> {
    fn default() -> Self {
        Self::zeros()
    }
}

impl<const N: usize> Index<(usize, usize)> for CMatrix<N> {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for CMatrix<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i][j]
    }
}

impl<const N: usize> Mul for CMatrix<N> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.data[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..N {
                    m.data[i][j] += a * rhs.data[k][j];
                }
            }
        }
        m
    }
}

impl<const N: usize> Add for CMatrix<N> {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        for i in 0..N {
            for j in 0..N {
                self.data[i][j] += rhs.data[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Sub for CMatrix<N> {
    type Output = Self;

    fn sub(mut self, rhs: Self) -> Self {
        for i in 0..N {
            for j in 0..N {
                self.data[i][j] -= rhs.data[i][j];
            }
        }
        self
    }
}

impl<const N: usize> Neg for CMatrix<N> {
    type Output = Self;

    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl<const N: usize> fmt::Debug for CMatrix<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for row in &self.data {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
