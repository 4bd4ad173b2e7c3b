//! Cyclic Jacobi eigensolver for small complex Hermitian matrices.
//!
//! Each rotation annihilates one off-diagonal pair `(p, q)`. The rotation is
//! the real Jacobi rotation conjugated by the phase of `a[p][q]`, so it works
//! unchanged for complex entries. Sweeps repeat until the off-diagonal mass
//! falls below machine precision relative to the Frobenius norm.

use num_complex::Complex64;

use super::matrix::{CMatrix, Mat4, ZERO};
use super::HERMITIAN_TOL;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;

/// Eigendecomposition `m = V diag(values) V^dagger`.
#[derive(Debug, Clone)]
pub struct HermitianEigen<const N: usize> {
    /// Eigenvalues in ascending order.
    pub values: [f64; N],
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: CMatrix<N>,
}

impl<const N: usize> HermitianEigen<N> {
    /// Decomposes `m`, which must be Hermitian within `1e-9` entrywise.
    pub fn new(m: &CMatrix<N>) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::NonFinite { what: "matrix" });
        }
        let residual = m.hermiticity_residual();
        if residual > HERMITIAN_TOL {
            return Err(Error::NonHermitian { residual });
        }
        Ok(Self::decompose(m.hermitian_part()))
    }

    /// Caller guarantees `a` is exactly Hermitian.
    pub(crate) fn decompose(mut a: CMatrix<N>) -> Self {
        let mut v = CMatrix::<N>::identity();
        let frob: f64 = a
            .data
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt();
        if frob == 0.0 {
            return Self {
                values: [0.0; N],
                vectors: v,
            };
        }
        let threshold = f64::EPSILON * frob * 1e-3;

        for _ in 0..MAX_SWEEPS {
            let off: f64 = (0..N)
                .flat_map(|i| (0..N).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a.data[i][j].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if off <= threshold {
                break;
            }
            for p in 0..N {
                for q in (p + 1)..N {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }

        let mut order: [usize; N] = std::array::from_fn(|i| i);
        order.sort_by(|&i, &j| a.data[i][i].re.total_cmp(&a.data[j][j].re));
        let values = order.map(|i| a.data[i][i].re);
        let mut vectors = CMatrix::<N>::zeros();
        for (col, &src) in order.iter().enumerate() {
            for row in 0..N {
                vectors.data[row][col] = v.data[row][src];
            }
        }
        Self { values, vectors }
    }
}

fn rotate<const N: usize>(a: &mut CMatrix<N>, v: &mut CMatrix<N>, p: usize, q: usize) {
    let apq = a.data[p][q];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let phase = apq / mag;
    let app = a.data[p][p].re;
    let aqq = a.data[q][q].re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // U = [[c, s e], [-s e*, c]] on the (p, q) plane; A <- U^dagger A U.
    let se = phase * s;
    let se_conj = se.conj();

    for k in 0..N {
        let akp = a.data[k][p];
        let akq = a.data[k][q];
        a.data[k][p] = akp * c - akq * se_conj;
        a.data[k][q] = akp * se + akq * c;
    }
    for k in 0..N {
        let apk = a.data[p][k];
        let aqk = a.data[q][k];
        a.data[p][k] = apk * c - aqk * se;
        a.data[q][k] = apk * se_conj + aqk * c;
    }
    a.data[p][q] = ZERO;
    a.data[q][p] = ZERO;
    a.data[p][p] = Complex64::new(app - t * mag, 0.0);
    a.data[q][q] = Complex64::new(aqq + t * mag, 0.0);

    for k in 0..N {
        let vkp = v.data[k][p];
        let vkq = v.data[k][q];
        v.data[k][p] = vkp * c - vkq * se_conj;
        v.data[k][q] = vkp * se + vkq * c;
    }
}

/// Ascending eigenvalues of a Hermitian 4x4 matrix.
pub fn eigenvalues_hermitian(m: &Mat4) -> Result<[f64; 4]> {
    HermitianEigen::new(m).map(|e| e.values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::matrix::Mat2;

    #[test]
    fn diagonal_input_is_sorted() {
        let m = Mat4::from_diagonal([0.4, 0.3, 0.2, 0.1]);
        let vals = eigenvalues_hermitian(&m).unwrap();
        assert_eq!(vals, [0.1, 0.2, 0.3, 0.4]);
    }

    #[test]
    fn scaled_identity() {
        let m = Mat4::identity().scale(0.25);
        assert_eq!(eigenvalues_hermitian(&m).unwrap(), [0.25; 4]);
    }

    #[test]
    fn complex_two_by_two() {
        // [[1, i], [-i, 1]] has spectrum {0, 2}.
        let i = Complex64::new(0.0, 1.0);
        let m = Mat2::from_rows([
            [Complex64::new(1.0, 0.0), i],
            [-i, Complex64::new(1.0, 0.0)],
        ]);
        let e = HermitianEigen::new(&m).unwrap();
        assert!((e.values[0] - 0.0).abs() < 1e-15);
        assert!((e.values[1] - 2.0).abs() < 1e-15);
        let back = e.vectors * Mat2::from_diagonal(e.values) * e.vectors.adjoint();
        assert!(back.max_abs_diff(&m) < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = Mat4::identity();
        m[(0, 1)] = Complex64::new(0.3, 0.0);
        m[(1, 0)] = Complex64::new(0.1, 0.0);
        assert!(matches!(
            eigenvalues_hermitian(&m),
            Err(Error::NonHermitian { .. })
        ));
    }

    #[test]
    fn zero_matrix() {
        let e = HermitianEigen::new(&Mat4::zeros()).unwrap();
        assert_eq!(e.values, [0.0; 4]);
    }
}
