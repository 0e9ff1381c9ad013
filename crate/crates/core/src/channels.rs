//! Quantum channels in Kraus form: constructors, composition, Choi
//! conversion, fidelity measures, twirls, teleportation-noise absorption
//! and diamond-distance machinery.
//!
//! Channel equality throughout this crate means action-equality on the six
//! Pauli eigenstates; qubit channels are affine in the Bloch picture, so
//! agreement on that spanning set pins the map exactly.

use crate::linalg::{
    gates, hermitian_eigenvalues, overlap, ComplexMatrix, DensityMatrix, LinalgError, PureState,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Kraus completeness must hold to this tolerance: sum K^dag K = I.
pub const COMPLETENESS_TOL: f64 = 1e-9;
/// Unitarity tolerance for ideal channels and mixed-unitary elements.
pub const UNITARY_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("channel requires at least one Kraus operator")]
    Empty,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("Kraus operators are not trace-preserving (deviation {0:.3e})")]
    NotTracePreserving(f64),
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("probabilities sum to {0} (expected 1)")]
    BadProbabilitySum(f64),
    #[error("matrix is not unitary")]
    NotUnitary,
    #[error("non-finite entry in Kraus operator")]
    NonFinite,
    #[error("upper diamond bound requires a unitary reference channel")]
    NonUnitaryReference,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, ChannelError>;

/// A CPTP map given by a non-empty list of Kraus operators.
#[derive(Debug, Clone)]
pub struct QuantumChannel {
    dim: usize,
    kraus: Vec<ComplexMatrix>,
}

impl QuantumChannel {
    /// Builds a channel and checks Kraus completeness at 1e-9.
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or(ChannelError::Empty)?;
        let dim = first.dim();
        let mut sum = ComplexMatrix::zeros(dim);
        for k in &kraus {
            if k.dim() != dim {
                return Err(ChannelError::DimensionMismatch(k.dim(), dim));
            }
            if !k.is_finite() {
                return Err(ChannelError::NonFinite);
            }
            sum = sum.add(&k.adjoint().matmul(k)?)?;
        }
        let dev = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if dev > COMPLETENESS_TOL {
            return Err(ChannelError::NotTracePreserving(dev));
        }
        Ok(Self { dim, kraus })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            kraus: vec![ComplexMatrix::identity(dim)],
        }
    }

    /// The unitary channel rho -> U rho U^dag.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        if !u.is_unitary(UNITARY_TOL) {
            return Err(ChannelError::NotUnitary);
        }
        let dim = u.dim();
        Ok(Self { dim, kraus: vec![u] })
    }

    /// D(rho) = p rho + (1-p) I/2, as the Pauli channel
    /// (p + (1-p)/4, (1-p)/4, (1-p)/4, (1-p)/4).
    pub fn depolarizing(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(ChannelError::InvalidProbability(p));
        }
        Ok(PauliChannel::depolarizing(p)?.to_channel())
    }

    /// F(rho) = q rho + (1-q) Z rho Z^dag, Kraus {sqrt(q) I, sqrt(1-q) Z}.
    pub fn dephasing(q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(ChannelError::InvalidProbability(q));
        }
        let k0 = gates::identity().scale(Complex64::new(q.sqrt(), 0.0));
        let k1 = gates::pauli_z().scale(Complex64::new((1.0 - q).sqrt(), 0.0));
        Self::new(vec![k0, k1])
    }

    /// Mixture of unitaries: rho -> sum p_l U_l rho U_l^dag.
    pub fn mixed_unitary(pairs: &[(f64, ComplexMatrix)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(ChannelError::Empty);
        }
        let total: f64 = pairs.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(ChannelError::BadProbabilitySum(total));
        }
        let mut kraus = Vec::with_capacity(pairs.len());
        for (p, u) in pairs {
            if !(0.0..=1.0).contains(p) {
                return Err(ChannelError::InvalidProbability(*p));
            }
            if !u.is_unitary(UNITARY_TOL) {
                return Err(ChannelError::NotUnitary);
            }
            kraus.push(u.scale(Complex64::new(p.sqrt(), 0.0)));
        }
        Self::new(kraus)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// Applies the channel: rho -> sum K rho K^dag.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim {
            return Err(ChannelError::DimensionMismatch(rho.dim(), self.dim));
        }
        let mut out = ComplexMatrix::zeros(self.dim);
        for k in &self.kraus {
            out = out.add(&k.matmul(rho.mat())?.matmul(&k.adjoint())?)?;
        }
        Ok(DensityMatrix::new(out)?)
    }

    /// `self` after `other`: the composition self . other (other acts first).
    pub fn compose_after(&self, other: &QuantumChannel) -> Result<QuantumChannel> {
        if self.dim != other.dim {
            return Err(ChannelError::DimensionMismatch(self.dim, other.dim));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for ko in &self.kraus {
            for ki in &other.kraus {
                kraus.push(ko.matmul(ki)?);
            }
        }
        QuantumChannel::new(kraus)
    }

    /// Choi state (self (x) id)(Phi+), ordered output (x) input-copy.
    pub fn choi(&self) -> Result<DensityMatrix> {
        if self.dim != 2 {
            return Err(ChannelError::DimensionMismatch(self.dim, 2));
        }
        let phi = max_entangled().projector();
        let id2 = ComplexMatrix::identity(2);
        let mut out = ComplexMatrix::zeros(4);
        for k in &self.kraus {
            let big = k.kron(&id2);
            out = out.add(&big.matmul(&phi)?.matmul(&big.adjoint())?)?;
        }
        Ok(DensityMatrix::new(out)?)
    }
}

/// The maximally entangled two-qubit state (|00> + |11>)/sqrt(2).
pub fn max_entangled() -> PureState {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    PureState::new(vec![
        Complex64::new(r, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(r, 0.0),
    ])
    .expect("fixed normalized amplitudes")
}

/// The six Pauli eigenstates in the fixed canonical order
/// |0>, |1>, |+>, |->, |+i>, |-i>.
///
/// This ordering is part of the transcript file contract and never changes.
pub fn pauli_eigenstates() -> [PureState; 6] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let c = Complex64::new;
    let mk = |a, b| PureState::new(vec![a, b]).expect("fixed normalized amplitudes");
    [
        mk(c(1.0, 0.0), c(0.0, 0.0)),
        mk(c(0.0, 0.0), c(1.0, 0.0)),
        mk(c(r, 0.0), c(r, 0.0)),
        mk(c(r, 0.0), c(-r, 0.0)),
        mk(c(r, 0.0), c(0.0, r)),
        mk(c(r, 0.0), c(0.0, -r)),
    ]
}

/// Discrete average fidelity over the six Pauli eigenstates,
/// (1/6) sum_psi Tr[ch(psi) ideal(psi)].
///
/// Because the six states form a projective 2-design this equals the Haar
/// average fidelity; it doubles as the independent oracle for
/// [`avg_fidelity_analytic`].
pub fn six_state_avg_fidelity(ch: &QuantumChannel, ideal: &QuantumChannel) -> Result<f64> {
    let mut acc = 0.0;
    for psi in pauli_eigenstates() {
        let rho = DensityMatrix::from_pure(&psi);
        let out = ch.apply(&rho)?;
        let target = ideal.apply(&rho)?;
        acc += overlap(out.mat(), target.mat())?;
    }
    Ok(acc / 6.0)
}

/// Haar average fidelity of `ch` against a unitary `ideal`, via the
/// entanglement-fidelity relation Fbar = (d Fe + 1)/(d + 1) with
/// Fe = <Phi+| Choi(ideal^-1 . ch) |Phi+>.
pub fn avg_fidelity_analytic(ch: &QuantumChannel, ideal: &QuantumChannel) -> Result<f64> {
    if ideal.kraus().len() != 1 || !ideal.kraus()[0].is_unitary(UNITARY_TOL) {
        return Err(ChannelError::NotUnitary);
    }
    let inverse = QuantumChannel::unitary(ideal.kraus()[0].adjoint())?;
    let relative = inverse.compose_after(ch)?;
    let choi = relative.choi()?;
    let fe = overlap(choi.mat(), &max_entangled().projector())?;
    Ok((2.0 * fe + 1.0) / 3.0)
}

/// Average fidelity to the identity channel.
pub fn avg_fidelity_to_identity(ch: &QuantumChannel) -> Result<f64> {
    avg_fidelity_analytic(ch, &QuantumChannel::identity(2))
}

/// Depolarizing parameter of the twirled channel: p = 2 Fbar - 1.
///
/// Always lies in [-1/3, 1] for a CPTP qubit channel.
pub fn twirl_parameter(ch: &QuantumChannel) -> Result<f64> {
    Ok(2.0 * avg_fidelity_to_identity(ch)? - 1.0)
}

/// The Clifford twirl (1/24) sum_C C^dag . ch . C, returned in its
/// depolarizing-equivalent form: twirling over a unitary 2-design yields
/// the depolarizing channel with the same average fidelity, so the compact
/// 4-Kraus representation is action-equal to the literal 24-term sum.
pub fn clifford_twirl(ch: &QuantumChannel) -> Result<QuantumChannel> {
    Ok(PauliChannel::depolarizing_extended(twirl_parameter(ch)?)?.to_channel())
}

/// Literal twirl (1/N) sum_U U^dag . ch . U over an explicit set of
/// unitaries; Kraus set has N * |kraus| elements.
pub fn group_twirl(ch: &QuantumChannel, unitaries: &[ComplexMatrix]) -> Result<QuantumChannel> {
    if unitaries.is_empty() {
        return Err(ChannelError::Empty);
    }
    let w = Complex64::new((unitaries.len() as f64).recip().sqrt(), 0.0);
    let mut kraus = Vec::with_capacity(unitaries.len() * ch.kraus.len());
    for u in unitaries {
        for k in &ch.kraus {
            kraus.push(u.adjoint().matmul(k)?.matmul(u)?.scale(w));
        }
    }
    QuantumChannel::new(kraus)
}

/// The effective channel of teleporting through a memory-degraded EPR half:
/// the Pauli twirl (1/4) sum_m U_m^dag . memory . U_m over {I, X, Y, Z}.
pub fn teleport_memory(memory: &QuantumChannel) -> Result<QuantumChannel> {
    group_twirl(memory, &gates::paulis())
}

/// Absorbs all teleportation noise into one effective memory channel:
/// the per-half EPR noise is pushed onto the receiving side (becoming
/// epr . epr^T), composed with bell-measurement and recovery noise around
/// the physical memory, and the result wrapped in the teleportation twirl.
pub fn absorb_teleportation_noise(
    bell_noise: &QuantumChannel,
    memory: &QuantumChannel,
    recovery_noise: &QuantumChannel,
    epr_noise: &PauliChannel,
) -> Result<QuantumChannel> {
    let pushed = epr_noise.compose(&epr_noise.transposed()).to_channel();
    let effective = recovery_noise
        .compose_after(memory)?
        .compose_after(bell_noise)?
        .compose_after(&pushed)?;
    teleport_memory(&effective)
}

/// True when the two channels act identically on all six Pauli eigenstates
/// (elementwise within `tol`), which pins a qubit channel exactly.
pub fn action_equal(a: &QuantumChannel, b: &QuantumChannel, tol: f64) -> Result<bool> {
    for psi in pauli_eigenstates() {
        let rho = DensityMatrix::from_pure(&psi);
        let out_a = a.apply(&rho)?;
        let out_b = b.apply(&rho)?;
        if out_a.mat().max_abs_diff(out_b.mat()) > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Mixed-unitary Pauli noise: probabilities (p_I, p_X, p_Y, p_Z).
#[derive(Debug, Clone, PartialEq)]
pub struct PauliChannel {
    probs: [f64; 4],
}

impl PauliChannel {
    pub fn new(probs: [f64; 4]) -> Result<Self> {
        for p in probs {
            if !(0.0..=1.0).contains(&p) {
                return Err(ChannelError::InvalidProbability(p));
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(ChannelError::BadProbabilitySum(total));
        }
        Ok(Self { probs })
    }

    pub fn identity() -> Self {
        Self {
            probs: [1.0, 0.0, 0.0, 0.0],
        }
    }

    pub fn depolarizing(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(ChannelError::InvalidProbability(p));
        }
        Self::depolarizing_extended(p)
    }

    /// Depolarizing with parameter in [-1/3, 1]; the sub-zero range arises
    /// as the twirl of low-fidelity channels and is still CPTP. Parameters
    /// within 1e-9 of the boundary are snapped onto it so fidelities
    /// computed in floating point stay constructible.
    pub fn depolarizing_extended(p: f64) -> Result<Self> {
        if !(-1.0 / 3.0 - 1e-9..=1.0 + 1e-9).contains(&p) {
            return Err(ChannelError::InvalidProbability(p));
        }
        let p = p.clamp(-1.0 / 3.0, 1.0);
        let off = (1.0 - p) / 4.0;
        Self::new([p + off, off, off, off])
    }

    /// The Pauli form of the trace-preserving dephasing channel.
    pub fn dephasing(q: f64) -> Result<Self> {
        Self::new([q, 0.0, 0.0, 1.0 - q])
    }

    pub fn probs(&self) -> [f64; 4] {
        self.probs
    }

    /// Composition of two Pauli channels: probabilities convolve under the
    /// Pauli group product (xor of (x, z) bit pairs).
    pub fn compose(&self, other: &PauliChannel) -> PauliChannel {
        // Index -> (x, z) bits: I=(0,0), X=(1,0), Y=(1,1), Z=(0,1).
        const BITS: [(u8, u8); 4] = [(0, 0), (1, 0), (1, 1), (0, 1)];
        let idx = |x: u8, z: u8| match (x, z) {
            (0, 0) => 0,
            (1, 0) => 1,
            (1, 1) => 2,
            _ => 3,
        };
        let mut probs = [0.0; 4];
        for a in 0..4 {
            for b in 0..4 {
                let (xa, za) = BITS[a];
                let (xb, zb) = BITS[b];
                probs[idx(xa ^ xb, za ^ zb)] += self.probs[a] * other.probs[b];
            }
        }
        PauliChannel { probs }
    }

    /// The transpose channel sum p_l U_l^T (.) (U_l^T)^dag; for Pauli
    /// operators the transpose is the same Pauli up to phase, so the
    /// probabilities are unchanged.
    pub fn transposed(&self) -> PauliChannel {
        self.clone()
    }

    /// Average fidelity to the identity: p_I + (1 - p_I)/3.
    pub fn avg_fidelity(&self) -> f64 {
        self.probs[0] + (1.0 - self.probs[0]) / 3.0
    }

    pub fn to_channel(&self) -> QuantumChannel {
        let paulis = gates::paulis();
        let kraus = self
            .probs
            .iter()
            .zip(paulis.iter())
            .filter(|(p, _)| **p > 0.0)
            .map(|(p, u)| u.scale(Complex64::new(p.sqrt(), 0.0)))
            .collect();
        QuantumChannel::new(kraus).expect("Pauli mixture is trace-preserving")
    }
}

/// Exact diamond distance between two Pauli channels: the L1 distance of
/// their probability vectors. Reproduces 3(1-p)/2 for depolarizing noise
/// against the identity.
pub fn diamond_distance_pauli(a: &PauliChannel, b: &PauliChannel) -> f64 {
    a.probs
        .iter()
        .zip(b.probs.iter())
        .map(|(x, y)| (x - y).abs())
        .sum()
}

/// Sandwich bounds on the diamond distance between arbitrary qubit
/// channels: the Choi trace-distance lower bound and the average-fidelity
/// upper bound 2 sqrt(d(d+1)) sqrt(1 - Fbar), which needs `b` unitary.
pub fn diamond_bounds_general(a: &QuantumChannel, b: &QuantumChannel) -> Result<(f64, f64)> {
    if a.dim() != 2 || b.dim() != 2 {
        return Err(ChannelError::DimensionMismatch(a.dim(), b.dim()));
    }
    let diff = a.choi()?.mat().sub(b.choi()?.mat())?;
    let lower = diff.trace_norm()?;
    if b.kraus().len() != 1 || !b.kraus()[0].is_unitary(UNITARY_TOL) {
        return Err(ChannelError::NonUnitaryReference);
    }
    let fbar = avg_fidelity_analytic(a, b)?;
    let upper = 2.0 * 6.0_f64.sqrt() * (1.0 - fbar).max(0.0).sqrt();
    Ok((lower, upper))
}

/// Channel literal as it appears in JSON config files.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChannelSpec {
    Depolarizing { p: f64 },
    Dephasing { q: f64 },
    MixedUnitary { terms: Vec<MixedUnitaryTerm> },
    Kraus { operators: Vec<Mat2Spec> },
}

/// 2x2 complex matrix literal: rows of [re, im] pairs.
pub type Mat2Spec = [[[f64; 2]; 2]; 2];

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixedUnitaryTerm {
    pub prob: f64,
    pub unitary: Mat2Spec,
}

fn mat_from_spec(spec: &Mat2Spec) -> ComplexMatrix {
    ComplexMatrix::from_rows2([
        [
            Complex64::new(spec[0][0][0], spec[0][0][1]),
            Complex64::new(spec[0][1][0], spec[0][1][1]),
        ],
        [
            Complex64::new(spec[1][0][0], spec[1][0][1]),
            Complex64::new(spec[1][1][0], spec[1][1][1]),
        ],
    ])
}

impl ChannelSpec {
    pub fn build(&self) -> Result<QuantumChannel> {
        match self {
            ChannelSpec::Depolarizing { p } => QuantumChannel::depolarizing(*p),
            ChannelSpec::Dephasing { q } => QuantumChannel::dephasing(*q),
            ChannelSpec::MixedUnitary { terms } => {
                let pairs: Vec<(f64, ComplexMatrix)> = terms
                    .iter()
                    .map(|t| (t.prob, mat_from_spec(&t.unitary)))
                    .collect();
                QuantumChannel::mixed_unitary(&pairs)
            }
            ChannelSpec::Kraus { operators } => {
                QuantumChannel::new(operators.iter().map(mat_from_spec).collect())
            }
        }
    }
}

/// Trace distance (1/2)||rho - sigma||_1 between density matrices.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    let diff = a.mat().sub(b.mat())?;
    Ok(0.5 * hermitian_eigenvalues(&diff)?.iter().map(|e| e.abs()).sum::<f64>())
}
