//! Polarization analysis and coincidence counting.
//!
//! Each arm carries a quarter-wave plate, then a half-wave plate, then a
//! polarizing beam splitter whose transmitted port selects |H> and whose
//! reflected port selects |V>. Waveplate angles are measured from the
//! horizontal. Global phases of the Jones matrices are dropped.
//!
//! The counting model draws the number of coincidences in an acquisition
//! window from a Poisson law with mean `rate * duration`, then splits it over
//! the four outcome channels with one multinomial draw. Every setting gets
//! its own random stream derived from the master seed, so records are
//! reproducible and independent of evaluation order.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};
use std::fmt;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Poisson};

use crate::error::{Error, Result};
use crate::qmat::{trace_product, DensityMatrix, JonesMatrix, Mat2, PolarizationKet};
use crate::witness::ProjectorProbabilities;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Waveplate {
    Half,
    Quarter,
}

/// Jones matrix of an ideal waveplate with its fast axis at `angle`.
///
/// Half: `[[cos2θ, sin2θ], [sin2θ, -cos2θ]]`.
/// Quarter: `[[cos²θ + i sin²θ, (1-i) sinθ cosθ], [(1-i) sinθ cosθ, sin²θ + i cos²θ]]`.
pub fn waveplate_jones(kind: Waveplate, angle: f64) -> JonesMatrix {
    let (s, c) = angle.sin_cos();
    let m = match kind {
        Waveplate::Half => {
            let (s2, c2) = (2.0 * angle).sin_cos();
            Mat2::from_rows([[c2.into(), s2.into()], [s2.into(), (-c2).into()]])
        }
        Waveplate::Quarter => {
            let off = Complex64::new(s * c, -s * c);
            Mat2::from_rows([
                [Complex64::new(c * c, s * s), off],
                [off, Complex64::new(s * s, c * c)],
            ])
        }
    };
    JonesMatrix::from_trusted(m)
}

/// Output port of the polarizing beam splitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Port {
    /// Passes |H>.
    Transmit,
    /// Passes |V>.
    Reflect,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyzerConfig {
    pub qwp_angle: f64,
    pub hwp_angle: f64,
    pub port: Port,
}

impl AnalyzerConfig {
    pub fn new(qwp_angle: f64, hwp_angle: f64, port: Port) -> Result<Self> {
        if !(qwp_angle.is_finite() && hwp_angle.is_finite()) {
            return Err(Error::NonFinite {
                what: "analyzer angle",
            });
        }
        Ok(Self {
            qwp_angle,
            hwp_angle,
            port,
        })
    }

    /// The polarization state this analyzer passes.
    pub fn analyzed_ket(&self) -> PolarizationKet {
        let port = match self.port {
            Port::Transmit => PolarizationKet::h(),
            Port::Reflect => PolarizationKet::v(),
        };
        // light meets the QWP, then the HWP, then the PBS
        let chain = waveplate_jones(Waveplate::Half, self.hwp_angle)
            .after(&waveplate_jones(Waveplate::Quarter, self.qwp_angle));
        let back = chain.matrix().adjoint();
        PolarizationKet::from_raw(back.apply(port.amplitudes()))
    }
}

/// Rank-1 projector selected by the analyzer.
pub fn analyzer_projector(cfg: &AnalyzerConfig) -> Mat2 {
    cfg.analyzed_ket().projector()
}

/// One of the three local polarization bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LocalBasis {
    /// Outcomes H / V.
    Linear,
    /// Outcomes D / F.
    Diagonal,
    /// Outcomes L / R.
    Circular,
}

impl LocalBasis {
    pub const ALL: [LocalBasis; 3] = [
        LocalBasis::Linear,
        LocalBasis::Diagonal,
        LocalBasis::Circular,
    ];

    pub fn ordinal(self) -> u64 {
        match self {
            LocalBasis::Linear => 0,
            LocalBasis::Diagonal => 1,
            LocalBasis::Circular => 2,
        }
    }

    /// Analyzer settings for the (first, second) outcome of the basis.
    ///
    /// | basis    | outcome | QWP  | HWP   | port     |
    /// |----------|---------|------|-------|----------|
    /// | Linear   | H       | 0    | 0     | transmit |
    /// | Linear   | V       | 0    | 0     | reflect  |
    /// | Diagonal | D       | π/4  | π/8   | transmit |
    /// | Diagonal | F       | π/4  | π/8   | reflect  |
    /// | Circular | L       | π/4  | 0     | transmit |
    /// | Circular | R       | π/4  | 0     | reflect  |
    pub fn analyzers(self) -> (AnalyzerConfig, AnalyzerConfig) {
        let (q, h) = match self {
            LocalBasis::Linear => (0.0, 0.0),
            LocalBasis::Diagonal => (FRAC_PI_4, FRAC_PI_8),
            LocalBasis::Circular => (FRAC_PI_4, 0.0),
        };
        (
            AnalyzerConfig {
                qwp_angle: q,
                hwp_angle: h,
                port: Port::Transmit,
            },
            AnalyzerConfig {
                qwp_angle: q,
                hwp_angle: h,
                port: Port::Reflect,
            },
        )
    }

    fn label(self) -> (&'static str, &'static str) {
        match self {
            LocalBasis::Linear => ("H", "V"),
            LocalBasis::Diagonal => ("D", "F"),
            LocalBasis::Circular => ("L", "R"),
        }
    }
}

impl fmt::Display for LocalBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            LocalBasis::Linear => "linear",
            LocalBasis::Diagonal => "diagonal",
            LocalBasis::Circular => "circular",
        };
        f.write_str(name)
    }
}

/// Reference kets of each basis, (first outcome, second outcome).
pub fn basis_kets(b: LocalBasis) -> (PolarizationKet, PolarizationKet) {
    use PolarizationKet as K;
    match b {
        LocalBasis::Linear => (K::h(), K::v()),
        LocalBasis::Diagonal => (K::d(), K::f()),
        LocalBasis::Circular => (K::l(), K::r()),
    }
}

/// Bases chosen on arm A and arm B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MeasurementSetting {
    pub basis_a: LocalBasis,
    pub basis_b: LocalBasis,
}

impl MeasurementSetting {
    pub fn new(basis_a: LocalBasis, basis_b: LocalBasis) -> Self {
        Self { basis_a, basis_b }
    }

    /// Same basis on both arms.
    pub fn correlated(basis: LocalBasis) -> Self {
        Self {
            basis_a: basis,
            basis_b: basis,
        }
    }

    pub fn is_correlated(&self) -> bool {
        self.basis_a == self.basis_b
    }

    /// `3 * a + b`, used to derive the per-setting random stream.
    pub fn index(&self) -> u64 {
        3 * self.basis_a.ordinal() + self.basis_b.ordinal()
    }

    /// Channel labels in record order (++, +-, -+, --).
    pub fn channel_labels(&self) -> [String; 4] {
        let (a0, a1) = self.basis_a.label();
        let (b0, b1) = self.basis_b.label();
        [
            format!("{a0}{b0}"),
            format!("{a0}{b1}"),
            format!("{a1}{b0}"),
            format!("{a1}{b1}"),
        ]
    }
}

impl fmt::Display for MeasurementSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.basis_a, self.basis_b)
    }
}

/// The three correlated settings that measure the witness.
pub const WITNESS_SETTINGS: [MeasurementSetting; 3] = [
    MeasurementSetting {
        basis_a: LocalBasis::Linear,
        basis_b: LocalBasis::Linear,
    },
    MeasurementSetting {
        basis_a: LocalBasis::Diagonal,
        basis_b: LocalBasis::Diagonal,
    },
    MeasurementSetting {
        basis_a: LocalBasis::Circular,
        basis_b: LocalBasis::Circular,
    },
];

/// Joint outcome probabilities `Tr[(P_i ⊗ P_j) ρ]`, ordered (++, +-, -+, --).
///
/// The projectors come from the analyzer Jones chain, not from the
/// reference kets.
pub fn outcome_probabilities(rho: &DensityMatrix, s: &MeasurementSetting) -> [f64; 4] {
    let (a0, a1) = s.basis_a.analyzers();
    let (b0, b1) = s.basis_b.analyzers();
    let pa = [analyzer_projector(&a0), analyzer_projector(&a1)];
    let pb = [analyzer_projector(&b0), analyzer_projector(&b1)];
    let mut out = [0.0; 4];
    for i in 0..2 {
        for j in 0..2 {
            out[2 * i + j] = trace_product(&pa[i].kron(&pb[j]), rho.matrix()).max(0.0);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    /// Coincidences per second.
    pub rate: f64,
    /// Acquisition time per setting, seconds.
    pub duration: f64,
    pub seed: u64,
}

impl SimulationConfig {
    pub const DEFAULT_RATE: f64 = 4000.0;
    pub const DEFAULT_DURATION: f64 = 30.0;

    pub fn new(rate: f64, duration: f64, seed: u64) -> Result<Self> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "rate must be positive, got {rate}"
            )));
        }
        if !(duration.is_finite() && duration > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "duration must be positive, got {duration}"
            )));
        }
        Ok(Self {
            rate,
            duration,
            seed,
        })
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    /// Expected coincidences per setting.
    pub fn mean_total(&self) -> f64 {
        self.rate * self.duration
    }
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            rate: Self::DEFAULT_RATE,
            duration: Self::DEFAULT_DURATION,
            seed: 0,
        }
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for stream `index` under `master`: `splitmix64(splitmix64(master) ^ index)`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master) ^ index)
}

/// Raw coincidence counts for one setting, ordered (++, +-, -+, --).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoincidenceRecord {
    pub setting: MeasurementSetting,
    pub counts: [u64; 4],
    pub total: u64,
}

impl CoincidenceRecord {
    pub fn new(setting: MeasurementSetting, counts: [u64; 4]) -> Self {
        Self {
            setting,
            counts,
            total: counts.iter().sum(),
        }
    }
}

fn multinomial(rng: &mut ChaCha8Rng, n: u64, probs: &[f64; 4]) -> [u64; 4] {
    let mut counts = [0u64; 4];
    let mut left = n;
    let mut mass: f64 = probs.iter().sum();
    for (i, &p) in probs.iter().enumerate() {
        if left == 0 {
            break;
        }
        if i == probs.len() - 1 {
            counts[i] = left;
            break;
        }
        let q = if mass > 0.0 {
            (p / mass).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let k = if q == 0.0 {
            0
        } else if q == 1.0 {
            left
        } else {
            Binomial::new(left, q)
                .expect("binomial parameters are valid")
                .sample(rng)
        };
        counts[i] = k;
        left -= k;
        mass -= p;
    }
    counts
}

/// Simulates one acquisition window of `s` on `rho`.
pub fn sample_counts(
    rho: &DensityMatrix,
    s: &MeasurementSetting,
    cfg: &SimulationConfig,
) -> CoincidenceRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, s.index()));
    let mean = cfg.mean_total();
    let total = Poisson::new(mean).expect("validated mean").sample(&mut rng) as u64;
    let probs = outcome_probabilities(rho, s);
    let counts = multinomial(&mut rng, total, &probs);
    CoincidenceRecord {
        setting: *s,
        counts,
        total,
    }
}

/// Witness value estimated from counts, with its statistical error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessEstimate {
    pub value: f64,
    pub std_error: f64,
    pub probabilities: ProjectorProbabilities,
}

/// Channel weights of the witness in each correlated setting.
fn channel_coefficients(b: LocalBasis) -> [f64; 4] {
    match b {
        LocalBasis::Linear | LocalBasis::Diagonal => [0.5, 0.0, 0.0, 0.5],
        LocalBasis::Circular => [0.0, -0.5, -0.5, 0.0],
    }
}

/// Combines per-setting outcome frequencies into a witness estimate.
///
/// `frequencies[k]` and `totals[k]` belong to `WITNESS_SETTINGS[k]`. The
/// variance uses the plug-in multinomial covariance within each setting;
/// settings are independent. An infinite total gives zero error.
pub fn estimate_from_frequencies(
    frequencies: &[[f64; 4]; 3],
    totals: &[f64; 3],
) -> WitnessEstimate {
    let [lin, diag, circ] = frequencies;
    let probabilities = ProjectorProbabilities {
        p_hh: lin[0],
        p_vv: lin[3],
        p_dd: diag[0],
        p_ff: diag[3],
        p_lr: circ[1],
        p_rl: circ[2],
    };
    let mut variance = 0.0;
    for (k, setting) in WITNESS_SETTINGS.iter().enumerate() {
        let coef = channel_coefficients(setting.basis_a);
        let f = &frequencies[k];
        let second: f64 = coef.iter().zip(f).map(|(c, p)| c * c * p).sum();
        let first: f64 = coef.iter().zip(f).map(|(c, p)| c * p).sum();
        variance += ((second - first * first) / totals[k]).max(0.0);
    }
    WitnessEstimate {
        value: probabilities.witness_value(),
        std_error: variance.sqrt(),
        probabilities,
    }
}

/// Estimates the witness from one record per correlated setting, in any order.
pub fn estimate_witness(records: &[CoincidenceRecord]) -> Result<WitnessEstimate> {
    for r in records {
        if !r.setting.is_correlated() {
            return Err(Error::UncorrelatedSetting { setting: r.setting });
        }
    }
    let mut frequencies = [[0.0; 4]; 3];
    let mut totals = [0.0; 3];
    for (k, setting) in WITNESS_SETTINGS.iter().enumerate() {
        let mut matching = records.iter().filter(|r| r.setting == *setting);
        let (Some(r), None) = (matching.next(), matching.next()) else {
            return Err(Error::MissingOrDuplicateSetting { setting: *setting });
        };
        let sum: u64 = r.counts.iter().sum();
        if sum != r.total {
            return Err(Error::CountMismatch {
                sum,
                total: r.total,
            });
        }
        if r.total == 0 {
            return Err(Error::ZeroTotal { setting: *setting });
        }
        let n = r.total as f64;
        frequencies[k] = r.counts.map(|c| c as f64 / n);
        totals[k] = n;
    }
    Ok(estimate_from_frequencies(&frequencies, &totals))
}

/// Samples all three witness settings and estimates the witness.
pub fn measure_witness(
    rho: &DensityMatrix,
    cfg: &SimulationConfig,
) -> Result<([CoincidenceRecord; 3], WitnessEstimate)> {
    let records = WITNESS_SETTINGS.map(|s| sample_counts(rho, &s, cfg));
    let estimate = estimate_witness(&records)?;
    Ok((records, estimate))
}
