//! Singlet, phase-tunable Bell state, the Werner family, and the sector
//! ("patchwork") construction that assembles a Werner state from an
//! entangled source.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polarimeter::{waveplate_jones, Waveplate};
use crate::qmat::{
    apply_local, dephase_diagonal, mix, projector, Arm, DensityMatrix, Mat4, TwoQubitKet,
};

const PARTITION_TOL: f64 = 1e-12;

/// Singlet weight `p` of a Werner state, in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct WernerParam(f64);

impl WernerParam {
    pub fn new(p: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&p) {
            Ok(Self(p))
        } else {
            Err(Error::WernerOutOfRange { p })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for WernerParam {
    type Error = Error;

    fn try_from(p: f64) -> Result<Self> {
        Self::new(p)
    }
}

/// Relative phase of the |VV> component of the source state, radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellPhase(f64);

impl BellPhase {
    pub fn new(phi: f64) -> Result<Self> {
        if phi.is_finite() {
            Ok(Self(phi))
        } else {
            Err(Error::NonFinite { what: "Bell phase" })
        }
    }

    pub fn radians(self) -> f64 {
        self.0
    }
}

/// Fractions of the emission ring routed into each sector.
///
/// Sector A carries the singlet; sectors B and C are decohered and must
/// carry equal weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorPartition {
    f_singlet: f64,
    f_b: f64,
    f_c: f64,
}

impl SectorPartition {
    pub fn new(f_singlet: f64, f_b: f64, f_c: f64) -> Result<Self> {
        let all = [f_singlet, f_b, f_c];
        if all.iter().any(|f| !f.is_finite()) {
            return Err(Error::NonFinite {
                what: "sector fraction",
            });
        }
        let in_range = all
            .iter()
            .all(|f| (-PARTITION_TOL..=1.0 + PARTITION_TOL).contains(f));
        if !in_range || (f_singlet + f_b + f_c - 1.0).abs() > PARTITION_TOL {
            return Err(Error::PartitionSum {
                f_singlet,
                f_b,
                f_c,
            });
        }
        if (f_b - f_c).abs() > PARTITION_TOL {
            return Err(Error::UnbalancedPartition { f_b, f_c });
        }
        Ok(Self {
            f_singlet,
            f_b,
            f_c,
        })
    }

    /// Sector A takes `f`, the remainder is split evenly between B and C.
    pub fn balanced(f_singlet: f64) -> Result<Self> {
        let rest = (1.0 - f_singlet) / 2.0;
        Self::new(f_singlet, rest, rest)
    }

    pub fn f_singlet(&self) -> f64 {
        self.f_singlet
    }

    pub fn f_b(&self) -> f64 {
        self.f_b
    }

    pub fn f_c(&self) -> f64 {
        self.f_c
    }
}

/// (|HV> - |VH>)/√2
pub fn singlet() -> TwoQubitKet {
    let s = FRAC_1_SQRT_2;
    TwoQubitKet::from_raw([0.0.into(), s.into(), (-s).into(), 0.0.into()])
}

/// (|HH> + e^{iφ}|VV>)/√2
pub fn bell_phi(phase: BellPhase) -> TwoQubitKet {
    let s = FRAC_1_SQRT_2;
    let vv = Complex64::from_polar(s, phase.radians());
    TwoQubitKet::from_raw([s.into(), 0.0.into(), 0.0.into(), vv])
}

/// The maximally mixed state 1/4.
pub fn chaotic() -> DensityMatrix {
    DensityMatrix::maximally_mixed()
}

/// `p |Ψ-><Ψ-| + (1-p)/4 · 1`, written entry by entry.
pub fn werner(p: WernerParam) -> DensityMatrix {
    let p = p.value();
    let lo = (1.0 - p) / 4.0;
    let hi = (1.0 + p) / 4.0;
    let mut m = Mat4::from_diagonal([lo, hi, hi, lo]);
    m[(1, 2)] = Complex64::new(-p / 2.0, 0.0);
    m[(2, 1)] = Complex64::new(-p / 2.0, 0.0);
    DensityMatrix::from_trusted(m)
}

/// The three sector states produced by the source before mixing.
#[derive(Debug, Clone, Copy)]
pub struct SectorStates {
    /// Untouched singlet.
    pub a: DensityMatrix,
    /// Decohered singlet, ½(P_HV + P_VH).
    pub b: DensityMatrix,
    /// Decohered singlet with arm A flipped, ½(P_HH + P_VV).
    pub c: DensityMatrix,
}

/// Runs the source optics on the phase-π Bell state and returns each sector.
pub fn patchwork_sectors() -> SectorStates {
    let hwp45 = waveplate_jones(Waveplate::Half, FRAC_PI_4);
    let source = projector(&bell_phi(BellPhase(std::f64::consts::PI)));
    // half-wave plate in front of detector B turns the source into the singlet
    let a = apply_local(&source, Arm::B, &hwp45);
    // the delay plate destroys every coherence in the intercepted sectors
    let b = dephase_diagonal(&a);
    let c = apply_local(&b, Arm::A, &hwp45);
    SectorStates { a, b, c }
}

/// Mixes the sector states with the weights of `part`.
pub fn patchwork_pipeline(part: &SectorPartition) -> Result<DensityMatrix> {
    let s = patchwork_sectors();
    mix(&[(part.f_singlet, s.a), (part.f_b, s.b), (part.f_c, s.c)])
}
