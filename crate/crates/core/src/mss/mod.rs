//! Classical particle mechanics as a finite, checkable structure:
//! sampled trajectories, internal/external force fields, an axiom
//! validator (non-degeneracy, positive masses, force antisymmetry,
//! line-of-centers, Newton's second law), subsystem/equivalence/isolation
//! predicates, an isolating embedding for uniform-field systems and an
//! RK4 trajectory generator.

mod simulate;
mod system;
mod trajectory;
mod validate;

pub use simulate::{circular_two_body, simulate, SimBody, SimConfig, SimForce};
pub use system::{
    absorb_external, equivalent, is_isolated, is_subsystem, isolation_witness, restrict,
    total_angular_momentum, total_momentum, ExternalForce, ForceField, InternalForce, MSSSystem,
    ParticleId,
};
pub use trajectory::Trajectory;
pub use validate::{validate, AxiomCheck, ValidationReport, Witness};

use crate::vec3::Vec3;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MssError {
    #[error("time {t} outside interval [{t0}, {t1}]")]
    OutOfInterval { t: f64, t0: f64, t1: f64 },
    #[error("particle selection must be non-empty")]
    EmptySelection,
    #[error("unknown particle `{0}`")]
    UnknownParticle(ParticleId),
    #[error("environment trajectory degenerates: d(t) reaches 0 at t = {t_zero} inside the interval")]
    DegenerateWitness { t_zero: f64 },
    #[error("non-finite force evaluation at t = {t}")]
    StepRejected { t: f64 },
    #[error("bad trajectory: {0}")]
    BadTrajectory(&'static str),
    #[error("trajectories do not share the sampling grid")]
    GridMismatch,
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
}

/// Uniform field embedding: separation of the added environment particle
/// from its partner, as a function of elapsed time.
pub(crate) fn embedding_gap(g_mag: f64, m_p: f64, m_e: f64, elapsed: f64) -> f64 {
    1.0 - 0.5 * g_mag * (1.0 / m_e + 1.0 / m_p) * elapsed * elapsed
}

/// Extends a non-interacting uniform-field system into an isolated one:
/// every particle with a constant non-zero external force gains an
/// environment partner of mass `m_e` that exerts that force internally.
/// The original system is equivalent to the restriction of the result to
/// the original particle ids.
pub fn embed_isolated_uniform(sys: &MSSSystem, m_e: f64) -> Result<MSSSystem, MssError> {
    system::embed_isolated_uniform_impl(sys, m_e)
}

pub(crate) fn finite_or_rejected(v: Vec3, t: f64) -> Result<Vec3, MssError> {
    if crate::vec3::is_finite(v) {
        Ok(v)
    } else {
        Err(MssError::StepRejected { t })
    }
}
