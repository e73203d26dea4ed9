//! Particle mechanics over non-individual particles: each particle is a
//! (micro-atom, mass, trajectory) triple drawn from one n-singleton
//! ensemble, forces are required to be congruent (indistinguishable
//! argument tuples get identical force vectors), and the Newtonian
//! gravity law keeps states pairwise distinct, which is what individuates
//! the particles.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::mss::{AxiomCheck, MssError, Trajectory, ValidationReport, Witness};
use crate::qset::{QSet, Species};
use crate::vec3::{self, Vec3};

#[derive(Debug, Error)]
pub enum QmssError {
    #[error("trajectories do not share interval and step")]
    IntervalMismatch,
    #[error("coinciding positions at t = {t}: singular gravitational potential")]
    Singularity { t: f64 },
    #[error("separation of particles {i} and {j} fell below {eps_min} at t = {t}")]
    SingularityError {
        i: usize,
        j: usize,
        t: f64,
        eps_min: f64,
    },
    #[error(transparent)]
    Mechanics(#[from] MssError),
    #[error("system must contain at least one particle")]
    Empty,
    #[error("time {0} outside the report interval")]
    OutOfInterval(f64),
}

/// A non-individual particle: micro-atom species, mass, trajectory.
#[derive(Debug, Clone)]
pub struct QParticle {
    pub species: Species,
    pub mass: f64,
    pub traj: Trajectory,
}

/// Internal force specification over ordered particle indices.
#[derive(Debug, Clone)]
pub enum QInternalForce {
    Zero,
    Gravity { gamma: f64 },
    /// Tabulated per ordered index pair and sample time. Index-addressed
    /// tables can break congruence, so the validator checks it
    /// explicitly; analytic laws are congruent by construction.
    PairTable(BTreeMap<(usize, usize), Vec<Vec3>>),
}

#[derive(Debug, Clone)]
pub enum QExternalForce {
    Zero,
    /// Time-constant external force per particle index.
    PerParticle(Vec<Vec3>),
}

/// The ensemble carrier: an n-singleton of one species plus the n
/// particle triples and their force quasi-functions.
#[derive(Debug, Clone)]
pub struct QMSSSystem {
    ensemble: QSet,
    species: Species,
    particles: Vec<QParticle>,
    pub internal: QInternalForce,
    pub external: QExternalForce,
}

impl QMSSSystem {
    pub fn new(
        species: Species,
        particles: Vec<QParticle>,
        internal: QInternalForce,
        external: QExternalForce,
    ) -> Result<Self, QmssError> {
        if particles.is_empty() {
            return Err(QmssError::Empty);
        }
        let first = &particles[0].traj;
        if !particles.iter().all(|p| p.traj.shares_grid(first)) {
            return Err(QmssError::IntervalMismatch);
        }
        let n = particles.len() as u64;
        let ensemble = QSet::empty().with_micro(species.clone(), n);
        Ok(QMSSSystem {
            ensemble,
            species,
            particles,
            internal,
            external,
        })
    }

    pub fn ensemble(&self) -> &QSet {
        &self.ensemble
    }

    pub fn species(&self) -> &Species {
        &self.species
    }

    pub fn particles(&self) -> &[QParticle] {
        &self.particles
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.particles[0].traj.t0(), self.particles[0].traj.t1())
    }

    pub fn sample_times(&self) -> Vec<f64> {
        self.particles[0].traj.sample_times().collect()
    }

    /// Force on particle `i` exerted by particle `j` at time `t`.
    pub fn internal_force(&self, i: usize, j: usize, t: f64) -> Result<Vec3, QmssError> {
        match &self.internal {
            QInternalForce::Zero => Ok(vec3::ZERO),
            QInternalForce::Gravity { gamma } => {
                if i == j {
                    return Ok(vec3::ZERO);
                }
                newtonian_gravity(&self.particles[j], &self.particles[i], t, *gamma)
            }
            QInternalForce::PairTable(table) => match table.get(&(i, j)) {
                None => Ok(vec3::ZERO),
                Some(rows) => {
                    let idx = self.particles[i].traj.nearest_index(t)?;
                    Ok(rows.get(idx).copied().unwrap_or(vec3::ZERO))
                }
            },
        }
    }

    pub fn external_force(&self, i: usize) -> Vec3 {
        match &self.external {
            QExternalForce::Zero => vec3::ZERO,
            QExternalForce::PerParticle(rows) => rows.get(i).copied().unwrap_or(vec3::ZERO),
        }
    }
}

/// Indistinguishability of particle triples: micro-atoms of one ensemble
/// are always `≡`, so the triples are `≡` iff masses are exactly equal
/// and the trajectories agree samplewise within `eps`.
///
/// For `eps = 0` this is an equivalence relation; for `eps > 0` only
/// reflexivity and symmetry hold (transitivity can fail).
pub fn qparticle_indist(p1: &QParticle, p2: &QParticle, eps: f64) -> Result<bool, QmssError> {
    if !p1.traj.shares_grid(&p2.traj) {
        return Err(QmssError::IntervalMismatch);
    }
    Ok(p1.species == p2.species && p1.mass == p2.mass && p1.traj.samplewise_close(&p2.traj, eps))
}

/// Newtonian gravitation between two particle triples: the force on
/// `p2`'s side, `γ m₁ m₂ (s₁(t) − s₂(t)) / ‖s₁(t) − s₂(t)‖³`.
/// Antisymmetric under argument swap; errors when positions coincide.
pub fn newtonian_gravity(
    p1: &QParticle,
    p2: &QParticle,
    t: f64,
    gamma: f64,
) -> Result<Vec3, QmssError> {
    let s1 = p1.traj.position(t)?;
    let s2 = p2.traj.position(t)?;
    let d = vec3::sub(s1, s2);
    let r = vec3::norm(d);
    if r == 0.0 {
        return Err(QmssError::Singularity { t });
    }
    let k = gamma * p1.mass * p2.mass / (r * r * r);
    let f = vec3::scale(d, k);
    if !vec3::is_finite(f) {
        return Err(QmssError::Singularity { t });
    }
    Ok(f)
}

struct Tracker {
    max: f64,
    witness: Option<Witness>,
}

impl Tracker {
    fn new() -> Self {
        Tracker {
            max: 0.0,
            witness: None,
        }
    }

    fn record(&mut self, residual: f64, indices: &[usize], t: f64) {
        if residual > self.max {
            self.max = residual;
            self.witness = Some(Witness {
                particles: indices.iter().map(|i| format!("#{i}")).collect(),
                t,
            });
        }
    }

    fn fail(&mut self, indices: &[usize], t: f64) {
        self.record(f64::INFINITY, indices, t);
    }

    fn into_check(self, axiom: &str, tol: f64) -> AxiomCheck {
        let pass = self.max <= tol;
        AxiomCheck {
            axiom: axiom.to_string(),
            pass,
            max_residual: self.max,
            witness: if pass { None } else { self.witness },
        }
    }
}

/// Validates the quasi-mechanics axioms on the given grid: structural
/// axioms, pairwise force antisymmetry and line-of-centers, the Newton
/// equation summed over the n−1 counterpart terms, and force congruence
/// (`≡` argument tuples must receive identical vectors; between fully
/// `≡` pairs the force must therefore be the zero vector).
pub fn validate_q(sys: &QMSSSystem, tol: f64, grid: &[f64]) -> ValidationReport {
    let n = sys.len();
    let mut checks = Vec::new();

    // QP1/QP5: the ensemble is a non-empty n-singleton matching |P|.
    let mut qp1 = Tracker::new();
    if sys.ensemble().qc() != n as u64 || n == 0 {
        qp1.fail(&[], 0.0);
    }
    checks.push(qp1.into_check("QP1", tol));

    // QP2: non-degenerate shared interval.
    let mut qp2 = Tracker::new();
    let (t0, t1) = sys.interval();
    if !(t1 > t0) {
        qp2.fail(&[], t0);
    }
    checks.push(qp2.into_check("QP2", tol));

    // QP3: twice differentiable trajectories at every grid time.
    let mut qp3 = Tracker::new();
    for (i, p) in sys.particles().iter().enumerate() {
        for &t in grid {
            match p.traj.accel(t) {
                Ok(a) if vec3::is_finite(a) => {}
                _ => qp3.fail(&[i], t),
            }
        }
    }
    checks.push(qp3.into_check("QP3", tol));

    // QP4: positive masses.
    let mut qp4 = Tracker::new();
    for (i, p) in sys.particles().iter().enumerate() {
        if !(p.mass > 0.0) {
            qp4.fail(&[i], t0);
        }
    }
    checks.push(qp4.into_check("QP4", tol));

    let mut qp5 = Tracker::new();
    if sys.particles().len() as u64 != sys.ensemble().qc() {
        qp5.fail(&[], t0);
    }
    checks.push(qp5.into_check("QP5", tol));

    // QP8: f(i,j,t) = -f(j,i,t).
    let mut qp8 = Tracker::new();
    for i in 0..n {
        for j in 0..n {
            for &t in grid {
                match (sys.internal_force(i, j, t), sys.internal_force(j, i, t)) {
                    (Ok(fij), Ok(fji)) => {
                        qp8.record(vec3::norm(vec3::add(fij, fji)), &[i, j], t)
                    }
                    _ => qp8.fail(&[i, j], t),
                }
            }
        }
    }
    checks.push(qp8.into_check("QP8", tol));

    // QP9: [s_i, f(i,j,t)] = -[s_j, f(j,i,t)].
    let mut qp9 = Tracker::new();
    for i in 0..n {
        for j in 0..n {
            for &t in grid {
                let r = (|| -> Result<f64, QmssError> {
                    let si = sys.particles()[i].traj.position(t)?;
                    let sj = sys.particles()[j].traj.position(t)?;
                    let fij = sys.internal_force(i, j, t)?;
                    let fji = sys.internal_force(j, i, t)?;
                    Ok(vec3::norm(vec3::add(
                        vec3::cross(si, fij),
                        vec3::cross(sj, fji),
                    )))
                })();
                match r {
                    Ok(res) if res.is_finite() => qp9.record(res, &[i, j], t),
                    _ => qp9.fail(&[i, j], t),
                }
            }
        }
    }
    checks.push(qp9.into_check("QP9", tol));

    // QP10: m a = Σ_j f(i,j,t) + g(i); the self-term is zero and the
    // summation runs over the n-1 counterpart particles.
    let mut qp10 = Tracker::new();
    for i in 0..n {
        for &t in grid {
            let r = (|| -> Result<f64, QmssError> {
                let a = sys.particles()[i].traj.accel(t)?;
                let m = sys.particles()[i].mass;
                let mut f = sys.external_force(i);
                for j in 0..n {
                    f = vec3::add(f, sys.internal_force(i, j, t)?);
                }
                Ok(vec3::norm(vec3::sub(vec3::scale(a, m), f)))
            })();
            match r {
                Ok(res) if res.is_finite() => qp10.record(res, &[i], t),
                _ => qp10.fail(&[i], t),
            }
        }
    }
    checks.push(qp10.into_check("QP10", tol));

    // Congruence: indistinguishable tuples map to identical forces, and
    // the force between a fully `≡` pair equals its own negation, hence
    // the zero vector.
    let mut cong = Tracker::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let indist = qparticle_indist(&sys.particles()[i], &sys.particles()[j], 0.0)
                .unwrap_or(false);
            if !indist {
                continue;
            }
            for &t in grid {
                match sys.internal_force(i, j, t) {
                    Ok(fij) => cong.record(vec3::norm(fij), &[i, j], t),
                    Err(_) => cong.fail(&[i, j], t),
                }
                for k in 0..n {
                    let pairs = [(i, k), (j, k)];
                    match (
                        sys.internal_force(pairs[0].0, pairs[0].1, t),
                        sys.internal_force(pairs[1].0, pairs[1].1, t),
                    ) {
                        (Ok(a), Ok(b)) if a == b => {}
                        _ => cong.fail(&[i, j, k], t),
                    }
                    match (sys.internal_force(k, i, t), sys.internal_force(k, j, t)) {
                        (Ok(a), Ok(b)) if a == b => {}
                        _ => cong.fail(&[k, i, j], t),
                    }
                }
            }
        }
    }
    checks.push(cong.into_check("Congruence", tol));

    ValidationReport { tol, checks }
}

#[derive(Debug, Clone)]
pub struct QBody {
    pub mass: f64,
    pub pos: Vec3,
    pub vel: Vec3,
}

/// RK4 integration of the n-body gravity system over one species
/// ensemble. Aborts with [`QmssError::SingularityError`] as soon as any
/// pairwise separation falls below `eps_min`.
#[allow(clippy::too_many_arguments)]
pub fn simulate_gravity(
    species: Species,
    bodies: &[QBody],
    gamma: f64,
    h: f64,
    eps_min: f64,
    t0: f64,
    t1: f64,
) -> Result<QMSSSystem, QmssError> {
    if bodies.is_empty() {
        return Err(QmssError::Empty);
    }
    if !(h > 0.0) || !(t1 > t0) {
        return Err(QmssError::Mechanics(MssError::BadTrajectory(
            "need h > 0 and t1 > t0",
        )));
    }
    let n = bodies.len();
    let steps = ((t1 - t0) / h).round() as usize;
    if steps < 4 {
        return Err(QmssError::Mechanics(MssError::BadTrajectory(
            "need at least 5 samples",
        )));
    }

    let check_separation = |pos: &[Vec3], t: f64| -> Result<(), QmssError> {
        for i in 0..n {
            for j in (i + 1)..n {
                if vec3::norm(vec3::sub(pos[i], pos[j])) < eps_min {
                    return Err(QmssError::SingularityError { i, j, t, eps_min });
                }
            }
        }
        Ok(())
    };

    let accel = |pos: &[Vec3]| -> Vec<Vec3> {
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut a = vec3::ZERO;
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let d = vec3::sub(pos[j], pos[i]);
                    let r = vec3::norm(d);
                    a = vec3::add(a, vec3::scale(d, gamma * bodies[j].mass / (r * r * r)));
                }
                a
            })
            .collect()
    };

    let mut pos: Vec<Vec3> = bodies.iter().map(|b| b.pos).collect();
    let mut vel: Vec<Vec3> = bodies.iter().map(|b| b.vel).collect();
    check_separation(&pos, t0)?;
    let mut tracks: Vec<Vec<Vec3>> = pos.iter().map(|p| vec![*p]).collect();

    for k in 0..steps {
        let t = t0 + k as f64 * h;
        let shift = |p: &[Vec3], d: &[Vec3], s: f64| -> Vec<Vec3> {
            p.iter()
                .zip(d)
                .map(|(x, dx)| vec3::add(*x, vec3::scale(*dx, s)))
                .collect()
        };
        let a1 = accel(&pos);
        let p2 = shift(&pos, &vel, h / 2.0);
        let v2 = shift(&vel, &a1, h / 2.0);
        let a2 = accel(&p2);
        let p3 = shift(&pos, &v2, h / 2.0);
        let v3 = shift(&vel, &a2, h / 2.0);
        let a3 = accel(&p3);
        let p4 = shift(&pos, &v3, h);
        let v4 = shift(&vel, &a3, h);
        let a4 = accel(&p4);
        for i in 0..n {
            let dp = vec3::add(
                vec3::add(vel[i], vec3::scale(vec3::add(v2[i], v3[i]), 2.0)),
                v4[i],
            );
            let dv = vec3::add(
                vec3::add(a1[i], vec3::scale(vec3::add(a2[i], a3[i]), 2.0)),
                a4[i],
            );
            pos[i] = vec3::add(pos[i], vec3::scale(dp, h / 6.0));
            vel[i] = vec3::add(vel[i], vec3::scale(dv, h / 6.0));
            if !vec3::is_finite(pos[i]) || !vec3::is_finite(vel[i]) {
                return Err(QmssError::Singularity { t: t + h });
            }
        }
        check_separation(&pos, t + h)?;
        for (i, track) in tracks.iter_mut().enumerate() {
            track.push(pos[i]);
        }
    }

    let particles = bodies
        .iter()
        .zip(tracks)
        .map(|(b, track)| {
            Ok(QParticle {
                species: species.clone(),
                mass: b.mass,
                traj: Trajectory::new(t0, h, track)?,
            })
        })
        .collect::<Result<Vec<_>, MssError>>()?;
    QMSSSystem::new(
        species,
        particles,
        QInternalForce::Gravity { gamma },
        QExternalForce::Zero,
    )
}

/// Per-time partition of the particles into `≡`-classes on
/// (mass, position, velocity).
#[derive(Debug, Clone)]
pub struct IndividuationReport {
    pub rows: Vec<IndividuationRow>,
}

#[derive(Debug, Clone)]
pub struct IndividuationRow {
    pub t: f64,
    pub class_sizes: Vec<usize>,
}

impl IndividuationReport {
    /// True when every row partitions the particles into singletons.
    pub fn all_singletons(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.class_sizes.iter().all(|&s| s == 1))
    }
}

/// Partitions the particles at each requested time by `≡` on
/// (mass, position, velocity) within `eps` (masses compared exactly).
pub fn individuation_report(
    sys: &QMSSSystem,
    times: &[f64],
    eps: f64,
) -> Result<IndividuationReport, QmssError> {
    let n = sys.len();
    let mut rows = Vec::with_capacity(times.len());
    for &t in times {
        let mut states = Vec::with_capacity(n);
        for p in sys.particles() {
            states.push((p.mass, p.traj.position(t)?, p.traj.velocity(t)?));
        }
        // greedy partition into classes of pairwise-close states
        let mut reps: Vec<usize> = Vec::new();
        let mut sizes: Vec<usize> = Vec::new();
        'particles: for i in 0..n {
            for (c, &r) in reps.iter().enumerate() {
                let same_mass = states[i].0 == states[r].0;
                let close_pos = vec3::norm(vec3::sub(states[i].1, states[r].1)) <= eps;
                let close_vel = vec3::norm(vec3::sub(states[i].2, states[r].2)) <= eps;
                if same_mass && close_pos && close_vel {
                    sizes[c] += 1;
                    continue 'particles;
                }
            }
            reps.push(i);
            sizes.push(1);
        }
        debug_assert_eq!(sizes.iter().sum::<usize>(), n);
        rows.push(IndividuationRow {
            t,
            class_sizes: sizes,
        });
    }
    Ok(IndividuationReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn species() -> Species {
        Species::new("classical")
    }

    fn straight(mass: f64, x0: f64, v: f64) -> QParticle {
        QParticle {
            species: species(),
            mass,
            traj: Trajectory::from_fn(0.0, 0.1, 11, |t| [x0 + v * t, 0.0, 0.0]).unwrap(),
        }
    }

    #[test]
    fn indistinguishable_triples() {
        let a = straight(1.0, 0.0, 1.0);
        let b = straight(1.0, 0.0, 1.0);
        assert!(qparticle_indist(&a, &b, 0.0).unwrap());
        let heavier = straight(2.0, 0.0, 1.0);
        assert!(!qparticle_indist(&a, &heavier, 0.0).unwrap());
        let shifted = straight(1.0, 1e-3, 1.0);
        assert!(!qparticle_indist(&a, &shifted, 4e-4).unwrap());
        assert!(qparticle_indist(&a, &shifted, 2e-3).unwrap());
    }

    #[test]
    fn interval_mismatch_detected() {
        let a = straight(1.0, 0.0, 1.0);
        let b = QParticle {
            species: species(),
            mass: 1.0,
            traj: Trajectory::from_fn(0.0, 0.2, 11, |t| [t, 0.0, 0.0]).unwrap(),
        };
        assert!(matches!(
            qparticle_indist(&a, &b, 0.0),
            Err(QmssError::IntervalMismatch)
        ));
    }

    #[test]
    fn gravity_formula_and_antisymmetry() {
        let p1 = straight(1.0, 0.0, 0.0);
        let p2 = straight(1.0, 1.0, 0.0);
        let f = newtonian_gravity(&p1, &p2, 0.0, 1.0).unwrap();
        // force on p2 points from p2 toward p1, magnitude 1 at unit values
        assert!((f[0] + 1.0).abs() < 1e-12 && f[1].abs() < 1e-12);
        let swapped = newtonian_gravity(&p2, &p1, 0.0, 1.0).unwrap();
        assert_eq!(swapped, vec3::neg(f));
        let far = straight(1.0, 2.0, 0.0);
        let weak = newtonian_gravity(&p1, &far, 0.0, 1.0).unwrap();
        assert!((vec3::norm(weak) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn gravity_singularity_on_coincident_positions() {
        let p1 = straight(1.0, 0.0, 0.0);
        let p2 = straight(1.0, 0.0, 0.0);
        assert!(matches!(
            newtonian_gravity(&p1, &p2, 0.0, 1.0),
            Err(QmssError::Singularity { .. })
        ));
    }

    #[test]
    fn free_single_particle_validates() {
        let sys = QMSSSystem::new(
            species(),
            vec![straight(1.0, 0.0, 1.0)],
            QInternalForce::Zero,
            QExternalForce::Zero,
        )
        .unwrap();
        let grid = sys.sample_times();
        let report = validate_q(&sys, 1e-9, &grid);
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn congruence_violation_by_index_table() {
        // two indistinguishable particles, but the table hands them
        // different force vectors
        let n = 11;
        let table = BTreeMap::from([
            ((0usize, 1usize), vec![[1.0, 0.0, 0.0]; n]),
            ((1usize, 0usize), vec![[-1.0, 0.0, 0.0]; n]),
        ]);
        let sys = QMSSSystem::new(
            species(),
            vec![straight(1.0, 0.0, 1.0), straight(1.0, 0.0, 1.0)],
            QInternalForce::PairTable(table),
            QExternalForce::Zero,
        )
        .unwrap();
        let grid = sys.sample_times();
        let report = validate_q(&sys, 1e-9, &grid);
        let cong = report.check("Congruence").unwrap();
        assert!(!cong.pass);
        assert!(cong.witness.is_some());
        // antisymmetry itself holds for this table
        assert!(report.check("QP8").unwrap().pass);
    }

    #[test]
    fn equal_pair_forces_are_zero_under_congruence() {
        // congruent table: identical (zero) forces everywhere
        let sys = QMSSSystem::new(
            species(),
            vec![straight(1.0, 0.0, 1.0), straight(1.0, 0.0, 1.0)],
            QInternalForce::Zero,
            QExternalForce::Zero,
        )
        .unwrap();
        let grid = sys.sample_times();
        let report = validate_q(&sys, 1e-9, &grid);
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn two_body_circular_orbit_validates() {
        let omega = 2.0f64.sqrt();
        let bodies = vec![
            QBody {
                mass: 1.0,
                pos: [-0.5, 0.0, 0.0],
                vel: [0.0, -omega * 0.5, 0.0],
            },
            QBody {
                mass: 1.0,
                pos: [0.5, 0.0, 0.0],
                vel: [0.0, omega * 0.5, 0.0],
            },
        ];
        let sys =
            simulate_gravity(species(), &bodies, 1.0, 1e-3, 1e-6, 0.0, 1.0).unwrap();
        let grid = sys.sample_times();
        let report = validate_q(&sys, 1e-4, &grid);
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn head_on_collapse_raises_singularity() {
        let bodies = vec![
            QBody {
                mass: 1.0,
                pos: [-0.5, 0.0, 0.0],
                vel: vec3::ZERO,
            },
            QBody {
                mass: 1.0,
                pos: [0.5, 0.0, 0.0],
                vel: vec3::ZERO,
            },
        ];
        match simulate_gravity(species(), &bodies, 1.0, 1e-4, 5e-2, 0.0, 1.0) {
            Err(QmssError::SingularityError { t, .. }) => {
                // free-fall collision time t = (π/2)·sqrt(r0³/(2γM)), r0 = 1, γM = 2
                let t_collision = std::f64::consts::PI / 2.0 * (1.0f64 / 4.0).sqrt();
                assert!(t < t_collision, "t = {t}, analytic = {t_collision}");
            }
            other => panic!("expected SingularityError, got {other:?}"),
        }
    }

    #[test]
    fn single_body_goes_straight() {
        let bodies = vec![QBody {
            mass: 1.0,
            pos: [0.0, 0.0, 0.0],
            vel: [1.0, 0.0, 0.0],
        }];
        let sys = simulate_gravity(species(), &bodies, 1.0, 0.01, 1e-6, 0.0, 1.0).unwrap();
        let tr = &sys.particles()[0].traj;
        for (t, s) in tr.sample_times().zip(tr.samples()) {
            assert!((s[0] - t).abs() < 1e-12);
        }
    }

    #[test]
    fn individuation_partitions() {
        // 2 identical + 1 distinct, force free
        let sys = QMSSSystem::new(
            species(),
            vec![
                straight(1.0, 0.0, 1.0),
                straight(1.0, 0.0, 1.0),
                straight(1.0, 3.0, -1.0),
            ],
            QInternalForce::Zero,
            QExternalForce::Zero,
        )
        .unwrap();
        let times = sys.sample_times();
        let report = individuation_report(&sys, &times, 1e-9).unwrap();
        for row in &report.rows {
            let mut sizes = row.class_sizes.clone();
            sizes.sort_unstable();
            assert_eq!(sizes, vec![1, 2]);
        }
    }
}
