//! Exact finite-dimensional quantum mechanics for the bipartite `d ⊗ d`
//! system: the generalized Bell basis, Born-rule measurements, and
//! density-operator utilities.
//!
//! The entangled basis is the Weyl (generalized Pauli) Bell family
//!
//! ```text
//! ψ_(a,b) = (1/√d) Σ_k ω^{b·k} |k⟩_A ⊗ |k+a mod d⟩_B,   ω = exp(2πi/d)
//! ```
//!
//! with `a, b ∈ {0..d−1}`. Each basis state has exactly `d` nonzero
//! amplitudes, so overlaps against the whole basis cost `O(d³)` for pure
//! states rather than the dense `O(d⁴)`; Monte Carlo batches lean on this.
//!
//! Labels are ordered `ℓ = a·d + b`, and the protocol datum is `i = ℓ + 1`,
//! giving a stable wire format for transcripts.
//!
//! All arithmetic is double precision. Tolerances: unit norm and
//! Hermiticity/trace within 1e−12, distribution sums within 1e−10,
//! eigenvalue floor −1e−10.

use alloc::vec;
use alloc::vec::Vec;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Smallest supported qudit dimension.
pub const MIN_DIMENSION: usize = 2;
/// Largest supported qudit dimension; keeps bipartite density operators
/// (`d² × d²`, so 256×256) fast under exact dense algebra.
pub const MAX_DIMENSION: usize = 16;

/// Tolerance on state norms, Hermiticity, and traces.
pub const STATE_TOL: f64 = 1e-12;
/// Eigenvalue floor for positive semidefiniteness checks.
pub const PSD_TOL: f64 = 1e-10;
/// Tolerance on probability-distribution sums.
pub const DIST_TOL: f64 = 1e-10;

/// Errors from state construction and measurement.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuditError {
    #[error("dimension {0} outside supported range [{MIN_DIMENSION}, {MAX_DIMENSION}]")]
    DimensionOutOfRange(usize),
    #[error("label ({a}, {b}) out of range for dimension {d}")]
    LabelOutOfRange { a: u32, b: u32, d: usize },
    #[error("datum index {i} out of range 1..={max}")]
    DatumOutOfRange { i: u32, max: u32 },
    #[error("amplitude vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("state norm {0} deviates from 1 beyond tolerance")]
    NotNormalized(f64),
    #[error("amplitude or entry is not finite")]
    NonFinite,
    #[error("matrix deviates from Hermitian symmetry by {0}")]
    NotHermitian(f64),
    #[error("trace {0} deviates from 1 beyond tolerance")]
    BadTrace(f64),
    #[error("matrix has eigenvalue {0} below the positivity floor")]
    NotPositiveSemidefinite(f64),
}

/// One of the two qudit subsystems of the entangled pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Subsystem {
    A,
    B,
}

impl Subsystem {
    pub fn other(self) -> Subsystem {
        match self {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        }
    }
}

/// A generalized Bell-basis label `(a, b)` with `a, b ∈ {0..d−1}`.
///
/// Bijective with the datum `i ∈ {1..d²}` via `i = a·d + b + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BellLabel {
    pub a: u32,
    pub b: u32,
}

impl BellLabel {
    pub fn new(a: u32, b: u32, d: usize) -> Result<Self, QuditError> {
        if (a as usize) < d && (b as usize) < d {
            Ok(BellLabel { a, b })
        } else {
            Err(QuditError::LabelOutOfRange { a, b, d })
        }
    }

    /// Zero-based basis index `ℓ = a·d + b`.
    pub fn index(&self, d: usize) -> usize {
        self.a as usize * d + self.b as usize
    }

    /// One-based datum `i = a·d + b + 1`.
    pub fn datum(&self, d: usize) -> u32 {
        (self.index(d) + 1) as u32
    }

    pub fn from_index(ell: usize, d: usize) -> Result<Self, QuditError> {
        if ell >= d * d {
            return Err(QuditError::DatumOutOfRange {
                i: (ell + 1) as u32,
                max: (d * d) as u32,
            });
        }
        Ok(BellLabel {
            a: (ell / d) as u32,
            b: (ell % d) as u32,
        })
    }

    pub fn from_datum(i: u32, d: usize) -> Result<Self, QuditError> {
        if i == 0 {
            return Err(QuditError::DatumOutOfRange {
                i,
                max: (d * d) as u32,
            });
        }
        Self::from_index(i as usize - 1, d)
    }
}

fn check_dimension(d: usize) -> Result<(), QuditError> {
    if !(MIN_DIMENSION..=MAX_DIMENSION).contains(&d) {
        return Err(QuditError::DimensionOutOfRange(d));
    }
    Ok(())
}

/// The `d` complex roots `ω^m = exp(2πi·m/d)` for `m ∈ {0..d−1}`.
fn unit_roots(d: usize) -> Vec<Complex64> {
    (0..d)
        .map(|m| {
            let theta = core::f64::consts::TAU * m as f64 / d as f64;
            Complex64::new(libm::cos(theta), libm::sin(theta))
        })
        .collect()
}

/// A pure state of the bipartite pair, stored as `d²` amplitudes over the
/// ordered product basis `|k⟩_A ⊗ |l⟩_B` (index `k·d + l`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PureStateRepr", into = "PureStateRepr")]
pub struct PureState {
    d: usize,
    amps: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct PureStateRepr {
    d: usize,
    amplitudes: Vec<(f64, f64)>,
}

impl From<PureState> for PureStateRepr {
    fn from(s: PureState) -> Self {
        PureStateRepr {
            d: s.d,
            amplitudes: s.amps.iter().map(|c| (c.re, c.im)).collect(),
        }
    }
}

impl TryFrom<PureStateRepr> for PureState {
    type Error = QuditError;
    fn try_from(r: PureStateRepr) -> Result<Self, Self::Error> {
        PureState::new(
            r.d,
            r.amplitudes
                .into_iter()
                .map(|(re, im)| Complex64::new(re, im))
                .collect(),
        )
    }
}

impl PureState {
    pub fn new(d: usize, amps: Vec<Complex64>) -> Result<Self, QuditError> {
        check_dimension(d)?;
        if amps.len() != d * d {
            return Err(QuditError::DimensionMismatch {
                expected: d * d,
                got: amps.len(),
            });
        }
        if amps.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(QuditError::NonFinite);
        }
        let norm2: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
        if (libm::sqrt(norm2) - 1.0).abs() > STATE_TOL {
            return Err(QuditError::NotNormalized(libm::sqrt(norm2)));
        }
        Ok(PureState { d, amps })
    }

    /// The product basis state `|k⟩_A ⊗ |l⟩_B`.
    pub fn product_basis(d: usize, k: u32, l: u32) -> Result<Self, QuditError> {
        check_dimension(d)?;
        if k as usize >= d || l as usize >= d {
            return Err(QuditError::LabelOutOfRange { a: k, b: l, d });
        }
        let mut amps = vec![Complex64::ZERO; d * d];
        amps[k as usize * d + l as usize] = Complex64::ONE;
        Ok(PureState { d, amps })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, k: usize, l: usize) -> Complex64 {
        self.amps[k * self.d + l]
    }

    /// Inner product `⟨self|other⟩`.
    pub fn overlap(&self, other: &PureState) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(s, o)| s.conj() * o)
            .sum()
    }
}

/// The generalized Bell state `ψ_(a,b)` on the `d ⊗ d` pair.
pub fn bell_state(d: usize, label: BellLabel) -> Result<PureState, QuditError> {
    check_dimension(d)?;
    let label = BellLabel::new(label.a, label.b, d)?;
    let roots = unit_roots(d);
    let scale = 1.0 / libm::sqrt(d as f64);
    let mut amps = vec![Complex64::ZERO; d * d];
    for k in 0..d {
        let l = (k + label.a as usize) % d;
        amps[k * d + l] = roots[(label.b as usize * k) % d] * scale;
    }
    Ok(PureState { d, amps })
}

/// A density operator: square, Hermitian, trace 1, positive semidefinite
/// (all within the module tolerances). Side length is `d²` for the full
/// pair or `d` for one subsystem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityOperatorRepr", into = "DensityOperatorRepr")]
pub struct DensityOperator {
    n: usize,
    entries: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct DensityOperatorRepr {
    n: usize,
    entries: Vec<(f64, f64)>,
}

impl From<DensityOperator> for DensityOperatorRepr {
    fn from(r: DensityOperator) -> Self {
        DensityOperatorRepr {
            n: r.n,
            entries: r.entries.iter().map(|c| (c.re, c.im)).collect(),
        }
    }
}

impl TryFrom<DensityOperatorRepr> for DensityOperator {
    type Error = QuditError;
    fn try_from(r: DensityOperatorRepr) -> Result<Self, Self::Error> {
        DensityOperator::new(
            r.n,
            r.entries
                .into_iter()
                .map(|(re, im)| Complex64::new(re, im))
                .collect(),
        )
    }
}

impl DensityOperator {
    /// Validates all invariants, including an eigenvalue check performed on
    /// the real symmetric embedding `[[Re ρ, −Im ρ], [Im ρ, Re ρ]]`, whose
    /// spectrum is the Hermitian spectrum doubled.
    pub fn new(n: usize, entries: Vec<Complex64>) -> Result<Self, QuditError> {
        if entries.len() != n * n || n == 0 {
            return Err(QuditError::DimensionMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        if entries
            .iter()
            .any(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(QuditError::NonFinite);
        }
        let mut herm_dev: f64 = 0.0;
        for r in 0..n {
            for c in r..n {
                let dev = (entries[r * n + c] - entries[c * n + r].conj()).norm();
                herm_dev = herm_dev.max(dev);
            }
        }
        if herm_dev > STATE_TOL {
            return Err(QuditError::NotHermitian(herm_dev));
        }
        let trace: f64 = (0..n).map(|r| entries[r * n + r].re).sum();
        if (trace - 1.0).abs() > STATE_TOL {
            return Err(QuditError::BadTrace(trace));
        }
        let mut embed = DMatrix::<f64>::zeros(2 * n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                let e = entries[r * n + c];
                embed[(r, c)] = e.re;
                embed[(n + r, n + c)] = e.re;
                embed[(r, n + c)] = -e.im;
                embed[(n + r, c)] = e.im;
            }
        }
        let eigenvalues = embed.symmetric_eigenvalues();
        let min_eig = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if min_eig < -PSD_TOL {
            return Err(QuditError::NotPositiveSemidefinite(min_eig));
        }
        Ok(DensityOperator { n, entries })
    }

    /// `|ψ⟩⟨ψ|` for a bipartite pure state.
    pub fn from_pure(state: &PureState) -> DensityOperator {
        let n = state.d * state.d;
        let mut entries = vec![Complex64::ZERO; n * n];
        for r in 0..n {
            for c in 0..n {
                entries[r * n + c] = state.amps[r] * state.amps[c].conj();
            }
        }
        DensityOperator { n, entries }
    }

    /// `I/n` on an `n`-dimensional space.
    pub fn maximally_mixed(n: usize) -> DensityOperator {
        let mut entries = vec![Complex64::ZERO; n * n];
        let p = 1.0 / n as f64;
        for r in 0..n {
            entries[r * n + r] = Complex64::new(p, 0.0);
        }
        DensityOperator { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.n + c]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }
}

/// Either exact representation of the pair's joint state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuantumState {
    Pure(PureState),
    Mixed { d: usize, rho: DensityOperator },
}

impl QuantumState {
    pub fn mixed(d: usize, rho: DensityOperator) -> Result<Self, QuditError> {
        check_dimension(d)?;
        if rho.n != d * d {
            return Err(QuditError::DimensionMismatch {
                expected: d * d,
                got: rho.n,
            });
        }
        Ok(QuantumState::Mixed { d, rho })
    }

    pub fn d(&self) -> usize {
        match self {
            QuantumState::Pure(s) => s.d,
            QuantumState::Mixed { d, .. } => *d,
        }
    }
}

impl From<PureState> for QuantumState {
    fn from(s: PureState) -> Self {
        QuantumState::Pure(s)
    }
}

/// Born-rule probabilities of the joint Bell-basis measurement, ordered by
/// basis index `ℓ = a·d + b`. Entries are clamped to `[0, 1]` after a
/// negativity check at −1e−12; the sum is checked against 1 within 1e−10.
pub fn bell_outcome_distribution(state: &QuantumState) -> Result<Vec<f64>, QuditError> {
    let d = state.d();
    let roots = unit_roots(d);
    let mut probs = Vec::with_capacity(d * d);
    match state {
        QuantumState::Pure(s) => {
            let scale = 1.0 / libm::sqrt(d as f64);
            for a in 0..d {
                for b in 0..d {
                    // ⟨ψ_(a,b)|φ⟩ touches only the d nonzero basis amplitudes.
                    let mut overlap = Complex64::ZERO;
                    for k in 0..d {
                        let l = (k + a) % d;
                        overlap += roots[(b * k) % d].conj() * s.amps[k * d + l];
                    }
                    probs.push((overlap * scale).norm_sqr());
                }
            }
        }
        QuantumState::Mixed { d: _, rho } => {
            let n = rho.n;
            for a in 0..d {
                for b in 0..d {
                    let mut acc = Complex64::ZERO;
                    for k in 0..d {
                        let row = k * d + (k + a) % d;
                        for k2 in 0..d {
                            let col = k2 * d + (k2 + a) % d;
                            let phase = roots[(b * k) % d].conj() * roots[(b * k2) % d];
                            acc += phase * rho.entries[row * n + col];
                        }
                    }
                    probs.push(acc.re / d as f64);
                }
            }
        }
    }
    normalize_distribution(&mut probs)?;
    Ok(probs)
}

fn normalize_distribution(probs: &mut [f64]) -> Result<(), QuditError> {
    let mut sum = 0.0;
    for p in probs.iter_mut() {
        if *p < -1e-12 {
            return Err(QuditError::NotPositiveSemidefinite(*p));
        }
        *p = p.max(0.0);
        sum += *p;
    }
    if (sum - 1.0).abs() > DIST_TOL {
        return Err(QuditError::BadTrace(sum));
    }
    Ok(())
}

/// Draws an index from a probability vector using one uniform variate.
fn sample_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (idx, p) in probs.iter().enumerate() {
        if *p > 0.0 {
            last_nonzero = idx;
        }
        acc += p;
        if u < acc {
            return idx;
        }
    }
    last_nonzero
}

/// Samples the joint Bell-basis measurement; the post-measurement state is
/// the observed basis state. Deterministic given the generator state.
pub fn bell_measure<R: Rng + ?Sized>(
    state: &QuantumState,
    rng: &mut R,
) -> Result<(BellLabel, PureState), QuditError> {
    let d = state.d();
    let probs = bell_outcome_distribution(state)?;
    let ell = sample_index(&probs, rng);
    let label = BellLabel::from_index(ell, d)?;
    Ok((label, bell_state(d, label)?))
}

/// Born-rule distribution of a computational-basis measurement on one
/// subsystem: `p(m) = Σ_other |amp|²` (or the matching diagonal sums for a
/// density operator).
pub fn computational_distribution(
    state: &QuantumState,
    subsystem: Subsystem,
) -> Result<Vec<f64>, QuditError> {
    let d = state.d();
    let mut probs = vec![0.0; d];
    match state {
        QuantumState::Pure(s) => {
            for k in 0..d {
                for l in 0..d {
                    let p = s.amps[k * d + l].norm_sqr();
                    match subsystem {
                        Subsystem::A => probs[k] += p,
                        Subsystem::B => probs[l] += p,
                    }
                }
            }
        }
        QuantumState::Mixed { d: _, rho } => {
            let n = rho.n;
            for k in 0..d {
                for l in 0..d {
                    let idx = k * d + l;
                    let p = rho.entries[idx * n + idx].re;
                    match subsystem {
                        Subsystem::A => probs[k] += p,
                        Subsystem::B => probs[l] += p,
                    }
                }
            }
        }
    }
    normalize_distribution(&mut probs)?;
    Ok(probs)
}

/// Samples a local computational-basis measurement and returns the outcome
/// with the normalized projected state.
pub fn computational_measure<R: Rng + ?Sized>(
    state: &QuantumState,
    subsystem: Subsystem,
    rng: &mut R,
) -> Result<(u32, QuantumState), QuditError> {
    let probs = computational_distribution(state, subsystem)?;
    let m = sample_index(&probs, rng);
    let post = project_computational(state, subsystem, m as u32, probs[m])?;
    Ok((m as u32, post))
}

/// The normalized projection of `state` onto local outcome `m`, given its
/// probability. Used by both sampling and exact branch enumeration.
pub fn project_computational(
    state: &QuantumState,
    subsystem: Subsystem,
    m: u32,
    prob: f64,
) -> Result<QuantumState, QuditError> {
    let d = state.d();
    let m = m as usize;
    if m >= d {
        return Err(QuditError::LabelOutOfRange {
            a: m as u32,
            b: 0,
            d,
        });
    }
    if prob <= 0.0 {
        return Err(QuditError::BadTrace(prob));
    }
    let keeps = |k: usize, l: usize| match subsystem {
        Subsystem::A => k == m,
        Subsystem::B => l == m,
    };
    match state {
        QuantumState::Pure(s) => {
            let scale = 1.0 / libm::sqrt(prob);
            let mut amps = vec![Complex64::ZERO; d * d];
            for k in 0..d {
                for l in 0..d {
                    if keeps(k, l) {
                        amps[k * d + l] = s.amps[k * d + l] * scale;
                    }
                }
            }
            Ok(QuantumState::Pure(PureState::new(d, amps)?))
        }
        QuantumState::Mixed { d: _, rho } => {
            let n = rho.n;
            let mut entries = vec![Complex64::ZERO; n * n];
            for rk in 0..d {
                for rl in 0..d {
                    if !keeps(rk, rl) {
                        continue;
                    }
                    for ck in 0..d {
                        for cl in 0..d {
                            if keeps(ck, cl) {
                                let r = rk * d + rl;
                                let c = ck * d + cl;
                                entries[r * n + c] = rho.entries[r * n + c] / prob;
                            }
                        }
                    }
                }
            }
            Ok(QuantumState::Mixed {
                d,
                rho: DensityOperator::new(n, entries)?,
            })
        }
    }
}

/// Partial trace over the complementary subsystem, returning the `d × d`
/// reduced density operator of the named subsystem.
pub fn reduced_density(
    state: &QuantumState,
    subsystem: Subsystem,
) -> Result<DensityOperator, QuditError> {
    let d = state.d();
    let mut entries = vec![Complex64::ZERO; d * d];
    match state {
        QuantumState::Pure(s) => {
            for r in 0..d {
                for c in 0..d {
                    let mut acc = Complex64::ZERO;
                    for other in 0..d {
                        let (ri, ci) = match subsystem {
                            Subsystem::A => (r * d + other, c * d + other),
                            Subsystem::B => (other * d + r, other * d + c),
                        };
                        acc += s.amps[ri] * s.amps[ci].conj();
                    }
                    entries[r * d + c] = acc;
                }
            }
        }
        QuantumState::Mixed { d: _, rho } => {
            let n = rho.n;
            for r in 0..d {
                for c in 0..d {
                    let mut acc = Complex64::ZERO;
                    for other in 0..d {
                        let (ri, ci) = match subsystem {
                            Subsystem::A => (r * d + other, c * d + other),
                            Subsystem::B => (other * d + r, other * d + c),
                        };
                        acc += rho.entries[ri * n + ci];
                    }
                    entries[r * d + c] = acc;
                }
            }
        }
    }
    DensityOperator::new(d, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn label_datum_round_trip() {
        for d in [2usize, 3, 5, 16] {
            for i in 1..=(d * d) as u32 {
                let label = BellLabel::from_datum(i, d).unwrap();
                assert_eq!(label.datum(d), i);
            }
            assert!(BellLabel::from_datum(0, d).is_err());
            assert!(BellLabel::from_datum((d * d + 1) as u32, d).is_err());
        }
    }

    #[test]
    fn bell_state_d2_phi_plus() {
        // (a,b) = (0,0) at d = 2 is (|00⟩ + |11⟩)/√2.
        let s = bell_state(2, BellLabel { a: 0, b: 0 }).unwrap();
        let r = 1.0 / libm::sqrt(2.0);
        assert_abs_diff_eq!(s.amplitude(0, 0).re, r, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitude(1, 1).re, r, epsilon = 1e-15);
        assert_eq!(s.amplitude(0, 1), Complex64::ZERO);
        assert_eq!(s.amplitude(1, 0), Complex64::ZERO);
    }

    #[test]
    fn bell_state_d2_singlet_phases() {
        // (a,b) = (1,1) at d = 2 is (|01⟩ − |10⟩)/√2.
        let s = bell_state(2, BellLabel { a: 1, b: 1 }).unwrap();
        let r = 1.0 / libm::sqrt(2.0);
        assert_abs_diff_eq!(s.amplitude(0, 1).re, r, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitude(1, 0).re, -r, epsilon = 1e-12);
        assert_abs_diff_eq!(s.amplitude(1, 0).im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn bell_state_rejects_bad_inputs() {
        assert!(bell_state(1, BellLabel { a: 0, b: 0 }).is_err());
        assert!(bell_state(17, BellLabel { a: 0, b: 0 }).is_err());
        assert!(bell_state(3, BellLabel { a: 3, b: 0 }).is_err());
    }

    #[test]
    fn reduced_density_of_bell_states_is_maximally_mixed() {
        for d in [2usize, 3, 5] {
            for ell in 0..d * d {
                let label = BellLabel::from_index(ell, d).unwrap();
                let s = QuantumState::Pure(bell_state(d, label).unwrap());
                for sub in [Subsystem::A, Subsystem::B] {
                    let rho = reduced_density(&s, sub).unwrap();
                    let expect = DensityOperator::maximally_mixed(d);
                    for r in 0..d {
                        for c in 0..d {
                            assert_abs_diff_eq!(
                                (rho.entry(r, c) - expect.entry(r, c)).norm(),
                                0.0,
                                epsilon = 1e-12
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn reduced_density_of_product_state() {
        let s = QuantumState::Pure(PureState::product_basis(2, 0, 0).unwrap());
        let rho = reduced_density(&s, Subsystem::A).unwrap();
        assert_abs_diff_eq!(rho.entry(0, 0).re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.entry(1, 1).re, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn distribution_on_basis_state_is_point_mass() {
        let label = BellLabel { a: 1, b: 2 };
        let s = QuantumState::Pure(bell_state(3, label).unwrap());
        let probs = bell_outcome_distribution(&s).unwrap();
        for (ell, p) in probs.iter().enumerate() {
            let expect = if ell == label.index(3) { 1.0 } else { 0.0 };
            assert_abs_diff_eq!(*p, expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn distribution_on_product_state_d2() {
        // |00⟩ overlaps only the a = 0 states: probability 1/2 each on
        // (0,0) and (0,1).
        let s = QuantumState::Pure(PureState::product_basis(2, 0, 0).unwrap());
        let probs = bell_outcome_distribution(&s).unwrap();
        assert_abs_diff_eq!(probs[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(probs[1], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(probs[2], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(probs[3], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn distribution_on_maximally_mixed_is_uniform() {
        for d in [2usize, 3] {
            let s =
                QuantumState::mixed(d, DensityOperator::maximally_mixed(d * d)).unwrap();
            let probs = bell_outcome_distribution(&s).unwrap();
            for p in probs {
                assert_abs_diff_eq!(p, 1.0 / (d * d) as f64, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn mixed_distribution_matches_pure_for_projector() {
        let s = bell_state(3, BellLabel { a: 2, b: 1 }).unwrap();
        let probs_pure =
            bell_outcome_distribution(&QuantumState::Pure(s.clone())).unwrap();
        let rho = DensityOperator::from_pure(&s);
        let probs_mixed =
            bell_outcome_distribution(&QuantumState::mixed(3, rho).unwrap()).unwrap();
        for (p, q) in probs_pure.iter().zip(&probs_mixed) {
            assert_abs_diff_eq!(*p, *q, epsilon = 1e-10);
        }
    }

    #[test]
    fn bell_measure_certain_case() {
        let label = BellLabel { a: 1, b: 0 };
        let s = QuantumState::Pure(bell_state(2, label).unwrap());
        let mut rng = ChaCha12Rng::seed_from_u64(99);
        let (got, post) = bell_measure(&s, &mut rng).unwrap();
        assert_eq!(got, label);
        assert_eq!(post, bell_state(2, label).unwrap());
    }

    #[test]
    fn bell_measure_deterministic_per_seed() {
        let s = QuantumState::Pure(PureState::product_basis(2, 0, 0).unwrap());
        let draw = |seed: u64| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            bell_measure(&s, &mut rng).unwrap().0
        };
        assert_eq!(draw(7), draw(7));
        assert_eq!(draw(8), draw(8));
    }

    #[test]
    fn computational_measure_product_state_certain() {
        let s = QuantumState::Pure(PureState::product_basis(2, 0, 0).unwrap());
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let (m, _) = computational_measure(&s, Subsystem::A, &mut rng).unwrap();
        assert_eq!(m, 0);
    }

    #[test]
    fn computational_outcomes_differ_by_a() {
        // Measuring both halves of ψ_(a,b) yields (k, k+a mod d): the
        // difference of the outcomes recovers a exactly.
        for d in [2usize, 3, 5] {
            for a in 0..d as u32 {
                for b in 0..d as u32 {
                    let s = QuantumState::Pure(bell_state(d, BellLabel { a, b }).unwrap());
                    for seed in 0..4u64 {
                        let mut rng = ChaCha12Rng::seed_from_u64(seed);
                        let (ka, mid) = computational_measure(&s, Subsystem::A, &mut rng).unwrap();
                        let (kb, _) = computational_measure(&mid, Subsystem::B, &mut rng).unwrap();
                        assert_eq!((kb + d as u32 - ka) % d as u32, a);
                    }
                }
            }
        }
    }

    #[test]
    fn density_operator_rejects_bad_matrices() {
        // Non-Hermitian.
        let bad = vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.1, 0.0),
            Complex64::new(0.3, 0.0),
            Complex64::new(0.5, 0.0),
        ];
        assert!(matches!(
            DensityOperator::new(2, bad),
            Err(QuditError::NotHermitian(_))
        ));
        // Trace 2.
        let bad_trace = vec![
            Complex64::ONE,
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::ONE,
        ];
        assert!(matches!(
            DensityOperator::new(2, bad_trace),
            Err(QuditError::BadTrace(_))
        ));
        // Hermitian, trace 1, but indefinite: diag(2, -1).
        let indefinite = vec![
            Complex64::new(2.0, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::new(-1.0, 0.0),
        ];
        assert!(matches!(
            DensityOperator::new(2, indefinite),
            Err(QuditError::NotPositiveSemidefinite(_))
        ));
    }

    #[test]
    fn density_operator_accepts_rank_one_projector() {
        let s = bell_state(2, BellLabel { a: 0, b: 1 }).unwrap();
        let rho = DensityOperator::from_pure(&s);
        assert!(DensityOperator::new(rho.n(), rho.entries().to_vec()).is_ok());
    }

    #[test]
    fn reduced_density_d5_bell() {
        let s = QuantumState::Pure(bell_state(5, BellLabel { a: 3, b: 4 }).unwrap());
        let rho = reduced_density(&s, Subsystem::B).unwrap();
        for r in 0..5 {
            for c in 0..5 {
                let expect = if r == c { 0.2 } else { 0.0 };
                assert_abs_diff_eq!(rho.entry(r, c).re, expect, epsilon = 1e-12);
                assert_abs_diff_eq!(rho.entry(r, c).im, 0.0, epsilon = 1e-12);
            }
        }
    }
}
