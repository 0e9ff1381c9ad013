//! Canonical finite 2-designs for a qubit: the six Pauli eigenstates and
//! the 24 single-qubit Clifford gates, plus verifiers of their design
//! properties and Haar samplers used as Monte Carlo oracles.
//!
//! The element orderings fixed here are part of the transcript file
//! contract: state indices 0-5 and gate indices 0-23 are stable across
//! versions (see `CliffordGroup::enumerate` for the ordering rule).

use crate::channels::{
    action_equal, clifford_twirl, group_twirl, pauli_eigenstates, QuantumChannel,
};
use crate::linalg::{gates, ComplexMatrix, PureState};
use num_complex::Complex64;
use rand::Rng;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DesignError {
    #[error("Clifford closure produced {0} elements (expected 24)")]
    ClosureCount(usize),
    #[error("matrix entry {0:.6e} off the Clifford grid by {1:.3e}")]
    OffGrid(f64, f64),
}

/// The six Pauli eigenstates |0>, |1>, |+>, |->, |+i>, |-i> with uniform
/// weight 1/6, forming a projective 2-design.
#[derive(Debug, Clone)]
pub struct PauliStateSet {
    states: [PureState; 6],
}

impl PauliStateSet {
    pub fn canonical() -> Self {
        Self {
            states: pauli_eigenstates(),
        }
    }

    pub fn states(&self) -> &[PureState; 6] {
        &self.states
    }

    pub fn state(&self, idx: usize) -> &PureState {
        &self.states[idx]
    }
}

/// The 24 single-qubit Clifford gates, phase-canonicalized, with the
/// identity at index 0.
#[derive(Debug, Clone)]
pub struct CliffordGroup {
    elements: Vec<ComplexMatrix>,
    index: HashMap<Vec<u64>, usize>,
}

/// Entry components of phase-canonical Clifford matrices lie on this grid.
const GRID: [f64; 7] = [
    -1.0,
    -std::f64::consts::FRAC_1_SQRT_2,
    -0.5,
    0.0,
    0.5,
    std::f64::consts::FRAC_1_SQRT_2,
    1.0,
];

fn snap_component(x: f64) -> Result<f64, DesignError> {
    let mut best = GRID[0];
    let mut err = (x - GRID[0]).abs();
    for &g in &GRID[1..] {
        let e = (x - g).abs();
        if e < err {
            best = g;
            err = e;
        }
    }
    if err > 1e-6 {
        return Err(DesignError::OffGrid(x, err));
    }
    // +0.0 so bitwise keys are stable.
    Ok(if best == 0.0 { 0.0 } else { best })
}

/// Divides out the global phase (first entry of norm > 0.25 made real
/// positive) and snaps every component onto the exact Clifford grid.
fn canonicalize(m: &ComplexMatrix) -> Result<ComplexMatrix, DesignError> {
    let pivot = m
        .entries()
        .iter()
        .find(|e| e.norm() > 0.25)
        .expect("unitary matrix has an entry of norm >= 1/2");
    let phase = pivot / pivot.norm();
    let mut out = ComplexMatrix::zeros(2);
    for i in 0..2 {
        for j in 0..2 {
            let e = m.get(i, j) / phase;
            out.set(i, j, Complex64::new(snap_component(e.re)?, snap_component(e.im)?));
        }
    }
    Ok(out)
}

fn key(m: &ComplexMatrix) -> Vec<u64> {
    m.entries()
        .iter()
        .flat_map(|e| [e.re.to_bits(), e.im.to_bits()])
        .collect()
}

/// Descending lexicographic comparison over entries as (re, im) pairs;
/// puts the identity at index 0.
fn canonical_order(a: &ComplexMatrix, b: &ComplexMatrix) -> std::cmp::Ordering {
    for (x, y) in a.entries().iter().zip(b.entries()) {
        match y.re.partial_cmp(&x.re).unwrap().then(y.im.partial_cmp(&x.im).unwrap()) {
            std::cmp::Ordering::Equal => continue,
            ord => return ord,
        }
    }
    std::cmp::Ordering::Equal
}

impl CliffordGroup {
    /// Enumerates the closure of {H, S} under multiplication, canonicalized
    /// by global phase, deduplicated and sorted by `canonical_order`.
    pub fn enumerate() -> Result<Self, DesignError> {
        let generators = [gates::hadamard(), gates::phase_s()];
        let mut seen: HashMap<Vec<u64>, ComplexMatrix> = HashMap::new();
        let start = canonicalize(&gates::identity())?;
        let mut queue = vec![start.clone()];
        seen.insert(key(&start), start);
        while let Some(m) = queue.pop() {
            for g in &generators {
                let prod = canonicalize(&m.matmul(g).expect("dims match"))?;
                let k = key(&prod);
                if !seen.contains_key(&k) {
                    seen.insert(k, prod.clone());
                    queue.push(prod);
                }
            }
        }
        if seen.len() != 24 {
            return Err(DesignError::ClosureCount(seen.len()));
        }
        let mut elements: Vec<ComplexMatrix> = seen.into_values().collect();
        elements.sort_by(canonical_order);
        let index = elements.iter().enumerate().map(|(i, m)| (key(m), i)).collect();
        Ok(Self { elements, index })
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn gate(&self, idx: usize) -> &ComplexMatrix {
        &self.elements[idx]
    }

    /// Index of a unitary in the canonical ordering, up to global phase.
    pub fn index_of(&self, m: &ComplexMatrix) -> Option<usize> {
        canonicalize(m).ok().and_then(|c| self.index.get(&key(&c)).copied())
    }

    /// The Clifford twirl of a channel in depolarizing-equivalent form.
    pub fn twirl(&self, ch: &QuantumChannel) -> crate::channels::Result<QuantumChannel> {
        clifford_twirl(ch)
    }
}

/// Checks sum_i w_i |psi_i><psi_i|^(x2) == P_sym / 3 elementwise at `tol`;
/// P_sym is the projector onto the two-qubit symmetric subspace.
pub fn is_projective_2design(states: &[PureState], weights: &[f64], tol: f64) -> bool {
    assert_eq!(states.len(), weights.len());
    let mut acc = ComplexMatrix::zeros(4);
    for (psi, w) in states.iter().zip(weights) {
        let proj = psi.projector();
        acc = acc
            .add(&proj.kron(&proj).scale(Complex64::new(*w, 0.0)))
            .expect("dims match");
    }
    let mut swap = ComplexMatrix::zeros(4);
    swap.set(0, 0, Complex64::new(1.0, 0.0));
    swap.set(1, 2, Complex64::new(1.0, 0.0));
    swap.set(2, 1, Complex64::new(1.0, 0.0));
    swap.set(3, 3, Complex64::new(1.0, 0.0));
    let sym = ComplexMatrix::identity(4)
        .add(&swap)
        .expect("dims match")
        .scale(Complex64::new(0.5 / 3.0, 0.0));
    acc.max_abs_diff(&sym) <= tol
}

/// True iff the uniform average over `set` reproduces the symmetric-subspace
/// projector at 1e-12, the defining property of a projective 2-design.
pub fn verify_state_2design(set: &PauliStateSet) -> bool {
    is_projective_2design(set.states(), &[1.0 / 6.0; 6], 1e-12)
}

/// True iff the discrete twirl of `probe` over the group equals its
/// depolarizing-equivalent on all six Pauli states within 1e-9.
pub fn verify_unitary_2design(elements: &[ComplexMatrix], probe: &QuantumChannel) -> bool {
    let literal = match group_twirl(probe, elements) {
        Ok(ch) => ch,
        Err(_) => return false,
    };
    let equivalent = match clifford_twirl(probe) {
        Ok(ch) => ch,
        Err(_) => return false,
    };
    action_equal(&literal, &equivalent, 1e-9).unwrap_or(false)
}

fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box-Muller; avoids ln(0) by sampling the open interval.
    let u1: f64 = loop {
        let u = rng.gen::<f64>();
        if u > 0.0 {
            break u;
        }
    };
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(standard_normal(rng), standard_normal(rng))
}

/// Haar-random qubit pure state: normalized pair of complex Gaussians.
pub fn haar_random_state<R: Rng + ?Sized>(rng: &mut R) -> PureState {
    loop {
        let amps = vec![complex_gaussian(rng), complex_gaussian(rng)];
        if let Ok(s) = PureState::normalized(amps) {
            return s;
        }
    }
}

/// Haar-random 2x2 unitary: Gram-Schmidt orthonormalization of a complex
/// Gaussian matrix (the unique QR with positive diagonal R).
pub fn haar_random_unitary<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    loop {
        let a = [complex_gaussian(rng), complex_gaussian(rng)];
        let b = [complex_gaussian(rng), complex_gaussian(rng)];
        let na = (a[0].norm_sqr() + a[1].norm_sqr()).sqrt();
        if na < 1e-12 {
            continue;
        }
        let q1 = [a[0] / na, a[1] / na];
        let r12 = q1[0].conj() * b[0] + q1[1].conj() * b[1];
        let p = [b[0] - r12 * q1[0], b[1] - r12 * q1[1]];
        let np = (p[0].norm_sqr() + p[1].norm_sqr()).sqrt();
        if np < 1e-12 {
            continue;
        }
        let q2 = [p[0] / np, p[1] / np];
        return ComplexMatrix::from_rows2([[q1[0], q2[0]], [q1[1], q2[1]]]);
    }
}
