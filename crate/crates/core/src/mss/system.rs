use std::collections::{BTreeMap, BTreeSet};

use super::{embedding_gap, MssError, Trajectory};
use crate::vec3::{self, Vec3};

pub type ParticleId = String;

/// Internal (pairwise) force specification. `f(p, q, t)` is the force
/// that particle `q` exerts on `p`.
#[derive(Debug, Clone)]
pub enum InternalForce {
    Zero,
    /// Newtonian gravitation with coupling constant `gamma`, evaluated
    /// from the system trajectories.
    Gravity { gamma: f64 },
    /// Tabulated force per ordered pair, one vector per sample time.
    /// Missing pairs are zero.
    PairTable(BTreeMap<(ParticleId, ParticleId), Vec<Vec3>>),
}

/// External force specification. `g(p, t)`.
#[derive(Debug, Clone)]
pub enum ExternalForce {
    Zero,
    /// Time-constant force per particle; missing particles are zero.
    Constant(BTreeMap<ParticleId, Vec3>),
    /// Tabulated per particle, one vector per sample time.
    Table(BTreeMap<ParticleId, Vec<Vec3>>),
}

#[derive(Debug, Clone)]
pub struct ForceField {
    pub internal: InternalForce,
    pub external: ExternalForce,
}

impl ForceField {
    pub fn free() -> Self {
        ForceField {
            internal: InternalForce::Zero,
            external: ExternalForce::Zero,
        }
    }
}

/// Particles, shared time interval, trajectories, masses and force
/// fields. Immutable after construction; the axiom validator decides
/// whether the content is mechanically sound.
#[derive(Debug, Clone)]
pub struct MSSSystem {
    trajectories: BTreeMap<ParticleId, Trajectory>,
    masses: BTreeMap<ParticleId, f64>,
    pub forces: ForceField,
}

impl MSSSystem {
    pub fn new(
        trajectories: BTreeMap<ParticleId, Trajectory>,
        masses: BTreeMap<ParticleId, f64>,
        forces: ForceField,
    ) -> Result<Self, MssError> {
        if trajectories.is_empty() {
            return Err(MssError::EmptySelection);
        }
        let first = trajectories.values().next().unwrap();
        if !trajectories.values().all(|t| t.shares_grid(first)) {
            return Err(MssError::GridMismatch);
        }
        for id in trajectories.keys() {
            if !masses.contains_key(id) {
                return Err(MssError::UnknownParticle(id.clone()));
            }
        }
        for id in masses.keys() {
            if !trajectories.contains_key(id) {
                return Err(MssError::UnknownParticle(id.clone()));
            }
        }
        Ok(MSSSystem {
            trajectories,
            masses,
            forces,
        })
    }

    pub fn particles(&self) -> impl Iterator<Item = &ParticleId> {
        self.trajectories.keys()
    }

    pub fn particle_set(&self) -> BTreeSet<ParticleId> {
        self.trajectories.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.trajectories.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn trajectory(&self, p: &str) -> Result<&Trajectory, MssError> {
        self.trajectories
            .get(p)
            .ok_or_else(|| MssError::UnknownParticle(p.to_string()))
    }

    pub fn mass(&self, p: &str) -> Result<f64, MssError> {
        self.masses
            .get(p)
            .copied()
            .ok_or_else(|| MssError::UnknownParticle(p.to_string()))
    }

    pub fn masses(&self) -> &BTreeMap<ParticleId, f64> {
        &self.masses
    }

    pub fn interval(&self) -> (f64, f64) {
        let tr = self.trajectories.values().next().unwrap();
        (tr.t0(), tr.t1())
    }

    pub fn step(&self) -> f64 {
        self.trajectories.values().next().unwrap().step()
    }

    pub fn sample_times(&self) -> Vec<f64> {
        self.trajectories
            .values()
            .next()
            .unwrap()
            .sample_times()
            .collect()
    }

    fn sample_index(&self, t: f64) -> Result<usize, MssError> {
        self.trajectories.values().next().unwrap().nearest_index(t)
    }

    /// Force that `q` exerts on `p` at time `t`.
    pub fn internal_force(&self, p: &str, q: &str, t: f64) -> Result<Vec3, MssError> {
        if !self.trajectories.contains_key(p) {
            return Err(MssError::UnknownParticle(p.to_string()));
        }
        if !self.trajectories.contains_key(q) {
            return Err(MssError::UnknownParticle(q.to_string()));
        }
        match &self.forces.internal {
            InternalForce::Zero => Ok(vec3::ZERO),
            InternalForce::Gravity { gamma } => {
                if p == q {
                    return Ok(vec3::ZERO);
                }
                let sp = self.trajectory(p)?.position(t)?;
                let sq = self.trajectory(q)?.position(t)?;
                let d = vec3::sub(sq, sp);
                let r = vec3::norm(d);
                let k = gamma * self.mass(p)? * self.mass(q)? / (r * r * r);
                super::finite_or_rejected(vec3::scale(d, k), t)
            }
            InternalForce::PairTable(table) => {
                match table.get(&(p.to_string(), q.to_string())) {
                    None => Ok(vec3::ZERO),
                    Some(rows) => {
                        let i = self.sample_index(t)?;
                        Ok(rows.get(i).copied().unwrap_or(vec3::ZERO))
                    }
                }
            }
        }
    }

    /// External force on `p` at time `t`.
    pub fn external_force(&self, p: &str, t: f64) -> Result<Vec3, MssError> {
        if !self.trajectories.contains_key(p) {
            return Err(MssError::UnknownParticle(p.to_string()));
        }
        match &self.forces.external {
            ExternalForce::Zero => Ok(vec3::ZERO),
            ExternalForce::Constant(map) => {
                self.sample_index(t)?;
                Ok(map.get(p).copied().unwrap_or(vec3::ZERO))
            }
            ExternalForce::Table(map) => {
                let i = self.sample_index(t)?;
                Ok(map
                    .get(p)
                    .and_then(|rows| rows.get(i))
                    .copied()
                    .unwrap_or(vec3::ZERO))
            }
        }
    }

    /// `Σ_q f(p,q,t) + g(p,t)`. For equivalent systems this agrees
    /// regardless of the force split, both sides being `m·a`.
    pub fn total_applied_force(&self, p: &str, t: f64) -> Result<Vec3, MssError> {
        let mut total = self.external_force(p, t)?;
        for q in self.particles() {
            total = vec3::add(total, self.internal_force(p, q, t)?);
        }
        Ok(total)
    }
}

/// Plain restriction of a system to the particle set `ids`: trajectories,
/// masses and external forces keep their values, internal forces are
/// restricted to `ids × ids`.
pub fn restrict(parent: &MSSSystem, ids: &BTreeSet<ParticleId>) -> Result<MSSSystem, MssError> {
    if ids.is_empty() {
        return Err(MssError::EmptySelection);
    }
    for id in ids {
        if parent.trajectory(id).is_err() {
            return Err(MssError::UnknownParticle(id.clone()));
        }
    }
    let trajectories = parent
        .trajectories
        .iter()
        .filter(|(k, _)| ids.contains(*k))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    let masses = parent
        .masses
        .iter()
        .filter(|(k, _)| ids.contains(*k))
        .map(|(k, v)| (k.clone(), *v))
        .collect();
    let internal = match &parent.forces.internal {
        InternalForce::Zero => InternalForce::Zero,
        InternalForce::Gravity { gamma } => InternalForce::Gravity { gamma: *gamma },
        InternalForce::PairTable(tab) => InternalForce::PairTable(
            tab.iter()
                .filter(|((p, q), _)| ids.contains(p) && ids.contains(q))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        ),
    };
    let external = match &parent.forces.external {
        ExternalForce::Zero => ExternalForce::Zero,
        ExternalForce::Constant(map) => ExternalForce::Constant(
            map.iter()
                .filter(|(k, _)| ids.contains(*k))
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
        ),
        ExternalForce::Table(map) => ExternalForce::Table(
            map.iter()
                .filter(|(k, _)| ids.contains(*k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        ),
    };
    MSSSystem::new(trajectories, masses, ForceField { internal, external })
}

/// Subsystem predicate: the restriction to `ids` must still satisfy the
/// Newton equation within `tol` at every grid time.
pub fn is_subsystem(
    parent: &MSSSystem,
    ids: &BTreeSet<ParticleId>,
    tol: f64,
    grid: &[f64],
) -> Result<bool, MssError> {
    let sub = restrict(parent, ids)?;
    for p in sub.particles() {
        let m = sub.mass(p)?;
        for &t in grid {
            let a = sub.trajectory(p)?.accel(t)?;
            let f = sub.total_applied_force(p, t)?;
            if vec3::norm(vec3::sub(vec3::scale(a, m), f)) > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Restriction that folds the dropped internal forces into the external
/// field: `g'(p,t) = g(p,t) + Σ_{q ∉ ids} f(p,q,t)`. Bookkeeping variant;
/// always yields a valid system when the parent was valid.
pub fn absorb_external(
    parent: &MSSSystem,
    ids: &BTreeSet<ParticleId>,
) -> Result<MSSSystem, MssError> {
    let mut sub = restrict(parent, ids)?;
    let outside: Vec<&ParticleId> = parent.particles().filter(|p| !ids.contains(*p)).collect();
    let times = parent.sample_times();
    let mut table = BTreeMap::new();
    for p in ids {
        let mut rows = Vec::with_capacity(times.len());
        for &t in &times {
            let mut g = parent.external_force(p, t)?;
            for q in &outside {
                g = vec3::add(g, parent.internal_force(p, q, t)?);
            }
            rows.push(g);
        }
        table.insert(p.clone(), rows);
    }
    sub.forces.external = ExternalForce::Table(table);
    Ok(sub)
}

/// Equivalence of systems: same particles, same interval, samplewise
/// equal trajectories and equal masses, within the representation
/// tolerance `eps`. Force fields are free to differ.
pub fn equivalent(a: &MSSSystem, b: &MSSSystem, eps: f64) -> bool {
    if a.particle_set() != b.particle_set() {
        return false;
    }
    for p in a.particles() {
        let (ta, tb) = (a.trajectory(p).unwrap(), b.trajectory(p).unwrap());
        if !ta.samplewise_close(tb, eps) {
            return false;
        }
        if (a.mass(p).unwrap() - b.mass(p).unwrap()).abs() > eps {
            return false;
        }
    }
    true
}

/// First (particle, time) where the external force is non-zero, if any.
pub fn isolation_witness(sys: &MSSSystem) -> Option<(ParticleId, f64)> {
    for p in sys.particles() {
        for t in sys.sample_times() {
            let g = sys.external_force(p, t).ok()?;
            if !vec3::is_zero(g) {
                return Some((p.clone(), t));
            }
        }
    }
    None
}

/// Isolated: external force identically zero at every sample time.
pub fn is_isolated(sys: &MSSSystem) -> bool {
    isolation_witness(sys).is_none()
}

/// Total linear momentum `Σ m v` at time `t`, velocities from the
/// trajectory finite differences.
pub fn total_momentum(sys: &MSSSystem, t: f64) -> Result<Vec3, MssError> {
    let mut p_tot = vec3::ZERO;
    for p in sys.particles() {
        let v = sys.trajectory(p)?.velocity(t)?;
        p_tot = vec3::add(p_tot, vec3::scale(v, sys.mass(p)?));
    }
    Ok(p_tot)
}

/// Total angular momentum `Σ m (s × v)` about the origin at time `t`.
pub fn total_angular_momentum(sys: &MSSSystem, t: f64) -> Result<Vec3, MssError> {
    let mut l_tot = vec3::ZERO;
    for p in sys.particles() {
        let tr = sys.trajectory(p)?;
        let s = tr.position(t)?;
        let v = tr.velocity(t)?;
        l_tot = vec3::add(l_tot, vec3::scale(vec3::cross(s, v), sys.mass(p)?));
    }
    Ok(l_tot)
}

pub(super) fn embed_isolated_uniform_impl(
    sys: &MSSSystem,
    m_e: f64,
) -> Result<MSSSystem, MssError> {
    if !matches!(sys.forces.internal, InternalForce::Zero) {
        return Err(MssError::Precondition(
            "embedding requires a non-interacting system (internal forces zero)",
        ));
    }
    let constant = match &sys.forces.external {
        ExternalForce::Zero => BTreeMap::new(),
        ExternalForce::Constant(map) => map.clone(),
        ExternalForce::Table(_) => {
            return Err(MssError::Precondition(
                "embedding covers constant per-particle external forces only",
            ))
        }
    };
    if !(m_e > 0.0) {
        return Err(MssError::Precondition("environment mass must be positive"));
    }
    let forced: Vec<(&ParticleId, Vec3)> = constant
        .iter()
        .filter(|(_, g)| !vec3::is_zero(**g))
        .map(|(p, g)| (p, *g))
        .collect();
    if forced.is_empty() {
        // already isolated up to zero entries
        let mut out = sys.clone();
        out.forces.external = ExternalForce::Zero;
        return Ok(out);
    }

    let (t0, t1) = sys.interval();
    let mut trajectories = sys.trajectories.clone();
    let mut masses = sys.masses.clone();
    let mut table = BTreeMap::new();
    for (p, g) in forced {
        let m_p = sys.mass(p)?;
        let g_mag = vec3::norm(g);
        let horizon = t0 + (2.0 / (g_mag * (1.0 / m_e + 1.0 / m_p))).sqrt();
        if horizon <= t1 {
            return Err(MssError::DegenerateWitness { t_zero: horizon });
        }
        let g_hat = vec3::scale(g, 1.0 / g_mag);
        let tr = sys.trajectory(p)?;
        let env_samples: Vec<Vec3> = tr
            .sample_times()
            .zip(tr.samples())
            .map(|(t, s)| vec3::add(*s, vec3::scale(g_hat, embedding_gap(g_mag, m_p, m_e, t - t0))))
            .collect();
        let env_id = format!("{p}__env");
        let env_tr = Trajectory::new(tr.t0(), tr.step(), env_samples)?;
        let n = env_tr.len();
        trajectories.insert(env_id.clone(), env_tr);
        masses.insert(env_id.clone(), m_e);
        table.insert((p.clone(), env_id.clone()), vec![g; n]);
        table.insert((env_id, p.clone()), vec![vec3::neg(g); n]);
    }
    MSSSystem::new(
        trajectories,
        masses,
        ForceField {
            internal: InternalForce::PairTable(table),
            external: ExternalForce::Zero,
        },
    )
}
