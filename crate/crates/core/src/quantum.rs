//! Finite-dimensional quantum measurement: Born-rule sampling over a
//! declared eigenbasis, Schrödinger evolution via eigendecomposition
//! (ħ = 1), the two-spin singlet and its joint measurement statistics,
//! quasi-cardinality-labelled ensembles that collapse to distinguishable
//! macro-atoms, and occupancy counting for labelled vs unlabelled
//! particles.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::qset::{MacroId, QSet, Species};
use crate::seeding;
use crate::vec3::Vec3;

const NORM_TOL: f64 = 1e-12;
const ORTHO_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum QuantumError {
    #[error("dimension mismatch: {a} vs {b}")]
    DimensionMismatch { a: usize, b: usize },
    #[error("direction must be a unit vector")]
    NonUnitDirection,
    #[error("eigenvectors are not orthonormal within {ORTHO_TOL}")]
    NotOrthonormal,
    #[error("cannot normalize a (near-)zero vector")]
    ZeroVector,
    #[error("count does not fit the integer representation")]
    Overflow,
}

/// Normalized complex state vector.
#[derive(Debug, Clone)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Builds a normalized state from arbitrary non-zero amplitudes.
    pub fn new(amps: Vec<Complex64>) -> Result<Self, QuantumError> {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < NORM_TOL || !norm.is_finite() {
            return Err(QuantumError::ZeroVector);
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(StateVector { amps })
    }

    pub fn from_reals(amps: &[f64]) -> Result<Self, QuantumError> {
        StateVector::new(amps.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational basis vector `|k⟩` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut amps = vec![Complex64::ZERO; dim];
        amps[k] = Complex64::ONE;
        StateVector { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64, QuantumError> {
        if self.dim() != other.dim() {
            return Err(QuantumError::DimensionMismatch {
                a: self.dim(),
                b: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        StateVector { amps }
    }
}

/// Hermitian operator given by its declared orthonormal eigenbasis with
/// real eigenvalues. The declared basis is the sampling basis of the
/// measurement function; for degenerate eigenvalues the basis choice is
/// part of the observable.
#[derive(Debug, Clone)]
pub struct Observable {
    id: String,
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<StateVector>,
}

impl Observable {
    pub fn from_eigensystem(
        id: impl Into<String>,
        eigenvalues: Vec<f64>,
        eigenvectors: Vec<StateVector>,
    ) -> Result<Self, QuantumError> {
        let dim = eigenvectors
            .first()
            .map(|v| v.dim())
            .ok_or(QuantumError::ZeroVector)?;
        if eigenvectors.len() != dim || eigenvalues.len() != dim {
            return Err(QuantumError::DimensionMismatch {
                a: dim,
                b: eigenvectors.len().max(eigenvalues.len()),
            });
        }
        for (i, u) in eigenvectors.iter().enumerate() {
            for (j, v) in eigenvectors.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                if (u.inner(v)?.norm() - want).abs() > ORTHO_TOL {
                    return Err(QuantumError::NotOrthonormal);
                }
            }
        }
        Ok(Observable {
            id: id.into(),
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn dim(&self) -> usize {
        self.eigenvectors.len()
    }

    pub fn eigenpairs(&self) -> impl Iterator<Item = (f64, &StateVector)> {
        self.eigenvalues
            .iter()
            .copied()
            .zip(self.eigenvectors.iter())
    }

    /// Dense matrix `Σ λ |s⟩⟨s|` (row-major), Hermitian by construction.
    pub fn matrix(&self) -> Vec<Complex64> {
        let d = self.dim();
        let mut m = vec![Complex64::ZERO; d * d];
        for (lambda, s) in self.eigenpairs() {
            for r in 0..d {
                for c in 0..d {
                    m[r * d + c] += lambda * s.amplitudes()[r] * s.amplitudes()[c].conj();
                }
            }
        }
        m
    }
}

/// Born weight `Pr(u, v) = |⟨u|v⟩|²`.
pub fn pr(u: &StateVector, v: &StateVector) -> Result<f64, QuantumError> {
    Ok(u.inner(v)?.norm_sqr())
}

/// Outcome of one measurement.
#[derive(Debug, Clone)]
pub struct MeasurementRecord {
    pub observable: String,
    pub outcome: f64,
    pub post_state: StateVector,
    pub probability: f64,
}

/// Samples an eigenbasis element `s` of `o` with probability `Pr(u, s)`
/// and collapses onto it.
pub fn measure(
    o: &Observable,
    u: &StateVector,
    rng: &mut impl Rng,
) -> Result<MeasurementRecord, QuantumError> {
    if o.dim() != u.dim() {
        return Err(QuantumError::DimensionMismatch {
            a: o.dim(),
            b: u.dim(),
        });
    }
    let weights: Vec<f64> = o
        .eigenpairs()
        .map(|(_, s)| pr(u, s))
        .collect::<Result<_, _>>()?;
    let total: f64 = weights.iter().sum();
    let mut x = rng.random::<f64>() * total;
    let mut chosen = weights.len() - 1;
    for (i, w) in weights.iter().enumerate() {
        if x < *w {
            chosen = i;
            break;
        }
        x -= w;
    }
    Ok(MeasurementRecord {
        observable: o.id().to_string(),
        outcome: o.eigenvalues[chosen],
        post_state: o.eigenvectors[chosen].clone(),
        probability: weights[chosen],
    })
}

/// `u(dt) = exp(−i·H·dt)·u` via the declared eigendecomposition, ħ = 1.
pub fn evolve(ham: &Observable, u: &StateVector, dt: f64) -> Result<StateVector, QuantumError> {
    if ham.dim() != u.dim() {
        return Err(QuantumError::DimensionMismatch {
            a: ham.dim(),
            b: u.dim(),
        });
    }
    let mut amps = vec![Complex64::ZERO; u.dim()];
    for (lambda, s) in ham.eigenpairs() {
        let phase = Complex64::new(0.0, -lambda * dt).exp();
        let coeff = s.inner(u)?;
        for (a, sa) in amps.iter_mut().zip(s.amplitudes()) {
            *a += phase * coeff * sa;
        }
    }
    StateVector::new(amps)
}

/// The two-spin singlet `(1/√2)(|z+;z−⟩ − |z−;z+⟩)` in the ordered basis
/// `{|++⟩, |+−⟩, |−+⟩, |−−⟩}`.
pub fn singlet() -> StateVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::from_reals(&[0.0, s, -s, 0.0]).unwrap()
}

/// Spin component observable `n̂·σ` with eigenvalues ±1 and the standard
/// eigenbasis for the direction `n̂`.
pub fn spin_observable(n: Vec3) -> Result<Observable, QuantumError> {
    if (crate::vec3::norm(n) - 1.0).abs() > 1e-9 {
        return Err(QuantumError::NonUnitDirection);
    }
    let (plus, minus) = spin_eigenvectors(n);
    Observable::from_eigensystem(
        format!("spin({:.6},{:.6},{:.6})", n[0], n[1], n[2]),
        vec![1.0, -1.0],
        vec![plus, minus],
    )
}

fn spin_eigenvectors(n: Vec3) -> (StateVector, StateVector) {
    let theta = n[2].clamp(-1.0, 1.0).acos();
    let phi = n[1].atan2(n[0]);
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let e_pos = Complex64::new(0.0, phi).exp();
    let e_neg = Complex64::new(0.0, -phi).exp();
    let plus = StateVector {
        amps: vec![Complex64::new(c, 0.0), e_pos * s],
    };
    let minus = StateVector {
        amps: vec![-e_neg * s, Complex64::new(c, 0.0)],
    };
    (plus, minus)
}

/// `(a·σ) ⊗ I` lifted to the product space. The declared eigenbasis is
/// `{|a s⟩ ⊗ |a r⟩}`, i.e. the degenerate factor is resolved along the
/// same direction, so collapse of a singlet lands on a product basis
/// vector with the partner spin opposite along `a`.
pub fn first_spin_observable(a: Vec3) -> Result<Observable, QuantumError> {
    lifted_spin_observable(a, a, true)
}

/// `I ⊗ (b·σ)` with declared eigenbasis `{|a s⟩ ⊗ |b t⟩}`; the spectator
/// factor is resolved along `a`, matching the post states of the first
/// measurement.
pub fn second_spin_observable(a: Vec3, b: Vec3) -> Result<Observable, QuantumError> {
    lifted_spin_observable(a, b, false)
}

fn lifted_spin_observable(
    first: Vec3,
    second: Vec3,
    eigenvalue_from_first: bool,
) -> Result<Observable, QuantumError> {
    for n in [first, second] {
        if (crate::vec3::norm(n) - 1.0).abs() > 1e-9 {
            return Err(QuantumError::NonUnitDirection);
        }
    }
    let (fp, fm) = spin_eigenvectors(first);
    let (sp, sm) = spin_eigenvectors(second);
    let mut eigenvalues = Vec::with_capacity(4);
    let mut eigenvectors = Vec::with_capacity(4);
    for (sv1, v1) in [(1.0, &fp), (-1.0, &fm)] {
        for (sv2, v2) in [(1.0, &sp), (-1.0, &sm)] {
            eigenvalues.push(if eigenvalue_from_first { sv1 } else { sv2 });
            eigenvectors.push(v1.tensor(v2));
        }
    }
    let tag = if eigenvalue_from_first { "first" } else { "second" };
    Observable::from_eigensystem(format!("{tag}-spin"), eigenvalues, eigenvectors)
}

/// Measures `(a·σ)⊗I` on `psi`, collapses, then measures `I⊗(b·σ)` on the
/// post state. Returns the eigenvalue pair as ±1.
pub fn joint_spin_measure(
    psi: &StateVector,
    a: Vec3,
    b: Vec3,
    rng: &mut impl Rng,
) -> Result<(i8, i8), QuantumError> {
    if psi.dim() != 4 {
        return Err(QuantumError::DimensionMismatch {
            a: 4,
            b: psi.dim(),
        });
    }
    let first = first_spin_observable(a)?;
    let second = second_spin_observable(a, b)?;
    let rec1 = measure(&first, psi, rng)?;
    let rec2 = measure(&second, &rec1.post_state, rng)?;
    Ok((rec1.outcome as i8, rec2.outcome as i8))
}

/// Monte Carlo summary of repeated joint singlet measurements.
#[derive(Debug, Clone)]
pub struct EprbStats {
    /// counts[i][j]: outcome (a, b) with index 0 ↦ −1, 1 ↦ +1.
    pub counts: [[u64; 2]; 2],
    pub trials: u64,
    pub correlation: f64,
    pub std_error: f64,
}

impl EprbStats {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }
}

fn outcome_index(o: i8) -> usize {
    usize::from(o > 0)
}

/// Repeated joint singlet measurement along directions `a` and `b` with
/// deterministic per-trial sub-seeds; trials run in parallel and the
/// aggregation is order-independent.
pub fn eprb_statistics(a: Vec3, b: Vec3, trials: u64, seed: u64) -> Result<EprbStats, QuantumError> {
    let psi = singlet();
    let counts = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = seeding::trial_rng(seed, trial);
            joint_spin_measure(&psi, a, b, &mut rng).map(|(oa, ob)| {
                let mut c = [[0u64; 2]; 2];
                c[outcome_index(oa)][outcome_index(ob)] = 1;
                c
            })
        })
        .try_reduce(
            || [[0u64; 2]; 2],
            |mut acc, c| {
                for i in 0..2 {
                    for j in 0..2 {
                        acc[i][j] += c[i][j];
                    }
                }
                Ok(acc)
            },
        )?;
    let total: u64 = counts.iter().flatten().sum();
    let same = counts[0][0] + counts[1][1];
    let diff = counts[0][1] + counts[1][0];
    let correlation = if total == 0 {
        0.0
    } else {
        (same as f64 - diff as f64) / total as f64
    };
    let std_error = if total == 0 {
        0.0
    } else {
        ((1.0 - correlation * correlation) / total as f64).sqrt()
    };
    Ok(EprbStats {
        counts,
        trials,
        correlation,
        std_error,
    })
}

/// Intrinsic (state-independent) properties as a fixed tuple of reals.
pub type IntrinsicProps = Vec<f64>;

/// An ensemble of `n` pairwise indistinguishable particle triples
/// (micro-atom, intrinsic properties, shared quantum state); `n` is the
/// quasi-cardinality of the member quasi-set.
#[derive(Debug, Clone)]
pub struct QuasiQuantumSystem {
    ensemble: QSet,
    species: Species,
    props: IntrinsicProps,
    state: StateVector,
    n: u64,
}

impl QuasiQuantumSystem {
    pub fn ensemble(&self) -> &QSet {
        &self.ensemble
    }

    pub fn species(&self) -> &Species {
        &self.species
    }

    pub fn props(&self) -> &IntrinsicProps {
        &self.props
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    /// Quasi-cardinality of the member quasi-set.
    pub fn qc_members(&self) -> u64 {
        self.n
    }
}

/// Builds the n-singleton ensemble `[⟨x, i_p, u⟩]_N`: one shared state
/// for `n` members, all pairwise indistinguishable.
pub fn ensemble(
    species: Species,
    props: IntrinsicProps,
    state: StateVector,
    n: u64,
) -> QuasiQuantumSystem {
    QuasiQuantumSystem {
        ensemble: QSet::empty().with_micro(species.clone(), n),
        species,
        props,
        state,
        n,
    }
}

/// One independent measurement per member. The records mint macro-atom
/// ids: after measurement the members are distinguishable (labelled) by
/// their post states.
pub fn collapse_ensemble(
    x: &QuasiQuantumSystem,
    o: &Observable,
    seed: u64,
) -> Result<Vec<(MacroId, MeasurementRecord)>, QuantumError> {
    (0..x.n)
        .map(|i| {
            let mut rng = seeding::trial_rng(seed, i);
            let rec = measure(o, &x.state, &mut rng)?;
            Ok((MacroId::new(format!("m{i}")), rec))
        })
        .collect()
}

/// Occupancy counting mode: labelled individuals (every assignment of
/// particles to states counts) vs non-individuals (only the occupancy
/// vector counts).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OccupancyMode {
    Individuals,
    NonIndividuals,
}

/// Number of configurations of `n` particles over `k` states.
/// Individuals: `k^n`. NonIndividuals: `C(n+k−1, n)`.
pub fn count_configurations(n: u64, k: u64, mode: OccupancyMode) -> Result<u64, QuantumError> {
    if k == 0 {
        return Ok(u64::from(n == 0));
    }
    match mode {
        OccupancyMode::Individuals => {
            let exp: u32 = n.try_into().map_err(|_| QuantumError::Overflow)?;
            k.checked_pow(exp).ok_or(QuantumError::Overflow)
        }
        OccupancyMode::NonIndividuals => {
            // C(n + k - 1, n) with exact intermediate division
            let mut acc: u128 = 1;
            for i in 1..=n.min(k - 1) as u128 {
                let top = (n as u128 + k as u128 - 1) - (n.min(k - 1) as u128) + i;
                acc = acc.checked_mul(top).ok_or(QuantumError::Overflow)? / i;
            }
            acc.try_into().map_err(|_| QuantumError::Overflow)
        }
    }
}
