//! Entanglement detection for photon pairs: the six-projector witness tuned
//! to singlet-weighted states, the partial-transpose test, and Wootters
//! concurrence as an independent check.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmat::{
    partial_transpose, tensor, trace_product, Arm, CMatrix, DensityMatrix, HermitianEigen, Mat2,
    Mat4, PolarizationKet,
};
use crate::states::WernerParam;

/// A partial-transpose eigenvalue below this marks the state entangled.
pub const ENTANGLEMENT_THRESHOLD: f64 = -1e-10;

/// Hermitian, unit-trace, indefinite operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessOperator(Mat4);

impl WitnessOperator {
    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    /// `Tr[W ρ]`
    pub fn expectation(&self, rho: &DensityMatrix) -> f64 {
        trace_product(&self.0, rho.matrix())
    }
}

fn pair_projector(a: PolarizationKet, b: PolarizationKet) -> Mat4 {
    let k = tensor(&a, &b);
    Mat4::outer(k.amplitudes(), k.amplitudes())
}

fn build_witness() -> WitnessOperator {
    use PolarizationKet as K;
    let same = pair_projector(K::h(), K::h())
        + pair_projector(K::v(), K::v())
        + pair_projector(K::d(), K::d())
        + pair_projector(K::f(), K::f());
    let crossed = pair_projector(K::l(), K::r()) + pair_projector(K::r(), K::l());
    WitnessOperator((same - crossed).scale(0.5).hermitian_part())
}

/// `½(P_HH + P_VV + P_DD + P_FF - P_LR - P_RL)`, built once and shared.
pub fn witness_operator() -> &'static WitnessOperator {
    static W: OnceLock<WitnessOperator> = OnceLock::new();
    W.get_or_init(build_witness)
}

pub fn witness_expectation(rho: &DensityMatrix) -> f64 {
    witness_operator().expectation(rho)
}

/// Closed form of `Tr[W ρ_W(p)]`.
pub fn witness_analytic_werner(p: WernerParam) -> f64 {
    (1.0 - 3.0 * p.value()) / 4.0
}

/// Joint probabilities of the six product projectors in the witness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectorProbabilities {
    pub p_hh: f64,
    pub p_vv: f64,
    pub p_dd: f64,
    pub p_ff: f64,
    pub p_lr: f64,
    pub p_rl: f64,
}

impl ProjectorProbabilities {
    /// `½(p_hh + p_vv + p_dd + p_ff - p_lr - p_rl)`
    pub fn witness_value(&self) -> f64 {
        0.5 * (self.p_hh + self.p_vv + self.p_dd + self.p_ff - self.p_lr - self.p_rl)
    }

    pub fn as_array(&self) -> [f64; 6] {
        [
            self.p_hh, self.p_vv, self.p_dd, self.p_ff, self.p_lr, self.p_rl,
        ]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// `Tr[P_xy ρ]` for each witness term.
pub fn witness_decomposition(rho: &DensityMatrix) -> ProjectorProbabilities {
    use PolarizationKet as K;
    let prob = |a, b| trace_product(&pair_projector(a, b), rho.matrix());
    ProjectorProbabilities {
        p_hh: prob(K::h(), K::h()),
        p_vv: prob(K::v(), K::v()),
        p_dd: prob(K::d(), K::d()),
        p_ff: prob(K::f(), K::f()),
        p_lr: prob(K::l(), K::r()),
        p_rl: prob(K::r(), K::l()),
    }
}

/// Outcome of the partial-transpose test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PptResult {
    pub min_eigenvalue: f64,
    pub entangled: bool,
}

/// Smallest eigenvalue of the arm-B partial transpose.
pub fn ppt_check(rho: &DensityMatrix) -> PptResult {
    ppt_check_on(rho, Arm::B)
}

pub fn ppt_check_on(rho: &DensityMatrix, arm: Arm) -> PptResult {
    let pt = partial_transpose(rho, arm);
    let min_eigenvalue = HermitianEigen::decompose(pt.hermitian_part()).values[0];
    PptResult {
        min_eigenvalue,
        entangled: min_eigenvalue < ENTANGLEMENT_THRESHOLD,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementVerdict {
    pub witness_value: f64,
    pub ppt_min_eigenvalue: f64,
    /// `witness_value < 0`
    pub witnessed: bool,
    pub ppt_entangled: bool,
}

pub fn is_witnessed_entangled(rho: &DensityMatrix) -> EntanglementVerdict {
    let witness_value = witness_expectation(rho);
    let ppt = ppt_check(rho);
    EntanglementVerdict {
        witness_value,
        ppt_min_eigenvalue: ppt.min_eigenvalue,
        witnessed: witness_value < 0.0,
        ppt_entangled: ppt.entangled,
    }
}

/// Wootters concurrence `max(0, λ1 - λ2 - λ3 - λ4)`.
///
/// The λ are the singular values of `A = √ρ (Y⊗Y) √ρ*`, since
/// `A A^dagger = √ρ ρ̃ √ρ` shares its spectrum with `ρ ρ̃`. They are read off
/// the Hermitian dilation `[[0, A], [A^dagger, 0]]`, whose spectrum is `±λ`,
/// which keeps small λ accurate instead of taking square roots of rounding
/// noise.
pub fn concurrence(rho: &DensityMatrix) -> f64 {
    let eig = HermitianEigen::decompose(*rho.matrix());
    let scale = eig.values[3].max(0.0);
    let roots = eig
        .values
        .map(|v| if v > scale * 1e-15 { v.sqrt() } else { 0.0 });
    let sqrt_rho = eig.vectors * Mat4::from_diagonal(roots) * eig.vectors.adjoint();

    let yy = {
        let i = Complex64::new(0.0, 1.0);
        let y = Mat2::from_rows([[0.0.into(), -i], [i, 0.0.into()]]);
        y.kron(&y)
    };
    let a = sqrt_rho * yy * sqrt_rho.conj();

    let mut dilation = CMatrix::<8>::zeros();
    for i in 0..4 {
        for j in 0..4 {
            dilation[(i, j + 4)] = a[(i, j)];
            dilation[(j + 4, i)] = a[(i, j)].conj();
        }
    }
    let vals = HermitianEigen::decompose(dilation).values;
    // top four, descending
    let l = [vals[7], vals[6], vals[5], vals[4]].map(|v| v.max(0.0));
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

/// Rejects operators that cannot act as a witness.
pub fn validate_witness(m: &Mat4) -> Result<()> {
    let residual = m.hermiticity_residual();
    if residual > 1e-12 {
        return Err(Error::NonHermitian { residual });
    }
    let trace = m.trace().re;
    if (trace - 1.0).abs() > 1e-12 {
        return Err(Error::TraceViolation { trace });
    }
    let min_eigenvalue = HermitianEigen::decompose(m.hermitian_part()).values[0];
    if min_eigenvalue >= 0.0 {
        return Err(Error::NegativeSpectrum { min_eigenvalue });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{eigenvalues_hermitian, projector};
    use crate::states::{bell_phi, chaotic, werner, BellPhase};

    fn w(p: f64) -> DensityMatrix {
        werner(WernerParam::new(p).unwrap())
    }

    #[test]
    fn witness_matches_explicit_matrix() {
        let mut explicit = Mat4::from_diagonal([0.5, 0.0, 0.0, 0.5]);
        explicit[(1, 2)] = Complex64::new(0.5, 0.0);
        explicit[(2, 1)] = Complex64::new(0.5, 0.0);
        let m = witness_operator().matrix();
        assert!(m.max_abs_diff(&explicit) < 1e-14, "{m:?}");
        assert!((m.trace().re - 1.0).abs() < 1e-14);
        let vals = eigenvalues_hermitian(m).unwrap();
        for (g, e) in vals.iter().zip([-0.5, 0.5, 0.5, 0.5]) {
            assert!((g - e).abs() < 1e-14);
        }
        validate_witness(m).unwrap();
        assert!(validate_witness(&Mat4::identity().scale(0.25)).is_err());
    }

    #[test]
    fn witness_on_werner_endpoints() {
        assert!((witness_expectation(&w(1.0)) + 0.5).abs() < 1e-15);
        assert!((witness_expectation(&w(0.0)) - 0.25).abs() < 1e-15);
        assert!(witness_expectation(&w(1.0 / 3.0)).abs() < 1e-15);
        assert!((witness_expectation(&chaotic()) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn analytic_formula() {
        let a = |p| witness_analytic_werner(WernerParam::new(p).unwrap());
        assert_eq!(a(1.0), -0.5);
        assert_eq!(a(0.0), 0.25);
        assert_eq!(a(0.5), -0.125);
        assert!(WernerParam::new(1.5).is_err());
    }

    #[test]
    fn decomposition_on_werner() {
        for p in [0.0, 0.25, 0.7, 1.0] {
            let d = witness_decomposition(&w(p));
            let same = (1.0 - p) / 4.0;
            let crossed = p / 2.0 + (1.0 - p) / 4.0;
            for v in [d.p_hh, d.p_vv, d.p_dd, d.p_ff] {
                assert!((v - same).abs() < 1e-15);
            }
            assert!((d.p_lr - crossed).abs() < 1e-15);
            assert!((d.p_rl - crossed).abs() < 1e-15);
            assert!((d.witness_value() - witness_expectation(&w(p))).abs() < 1e-15);
        }
        let c = witness_decomposition(&chaotic());
        for v in c.as_array() {
            assert!((v - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn ppt_examples() {
        let r = ppt_check(&w(0.5));
        assert!((r.min_eigenvalue + 0.125).abs() < 1e-14);
        assert!(r.entangled);
        let r = ppt_check(&w(1.0 / 3.0));
        assert!(r.min_eigenvalue.abs() < 1e-15);
        assert!(!r.entangled);
        let prod = DensityMatrix::product(
            &PolarizationKet::d().projector(),
            &PolarizationKet::l().projector(),
        )
        .unwrap();
        let r = ppt_check(&prod);
        assert!(r.min_eigenvalue >= -1e-10 && !r.entangled);
    }

    #[test]
    fn verdict_examples() {
        let v = is_witnessed_entangled(&w(0.9));
        assert!(v.witnessed && v.ppt_entangled);
        let v = is_witnessed_entangled(&w(0.2));
        assert!(!v.witnessed && !v.ppt_entangled);
        let phi_plus = projector(&bell_phi(BellPhase::new(0.0).unwrap()));
        let v = is_witnessed_entangled(&phi_plus);
        assert!((v.witness_value - 0.5).abs() < 1e-15);
        assert!((v.ppt_min_eigenvalue + 0.5).abs() < 1e-14);
        assert!(!v.witnessed && v.ppt_entangled);
    }

    #[test]
    fn concurrence_examples() {
        assert!((concurrence(&w(1.0)) - 1.0).abs() < 1e-10);
        for p in [0.0, 0.1, 0.2, 0.3, 1.0 / 3.0] {
            assert!(concurrence(&w(p)).abs() < 1e-10, "p={p}");
        }
        assert!((concurrence(&w(2.0 / 3.0)) - 0.5).abs() < 1e-10);
        let phi_plus = projector(&bell_phi(BellPhase::new(0.4).unwrap()));
        assert!((concurrence(&phi_plus) - 1.0).abs() < 1e-10);
        let prod = DensityMatrix::product(
            &PolarizationKet::h().projector(),
            &PolarizationKet::r().projector(),
        )
        .unwrap();
        assert!(concurrence(&prod) < 1e-10);
    }
}
