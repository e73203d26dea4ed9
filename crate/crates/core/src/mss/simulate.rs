use std::collections::BTreeMap;

use super::{ExternalForce, ForceField, InternalForce, MSSSystem, MssError, ParticleId, Trajectory};
use crate::vec3::{self, Vec3};

#[derive(Debug, Clone)]
pub struct SimBody {
    pub id: ParticleId,
    pub mass: f64,
    pub pos: Vec3,
    pub vel: Vec3,
}

#[derive(Debug, Clone, Copy)]
pub enum SimForce {
    None,
    Gravity { gamma: f64 },
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub bodies: Vec<SimBody>,
    pub internal: SimForce,
    /// Constant external force per particle; missing entries are zero.
    pub external: BTreeMap<ParticleId, Vec3>,
    pub t0: f64,
    pub t1: f64,
    pub h: f64,
}

#[derive(Clone)]
struct State {
    pos: Vec<Vec3>,
    vel: Vec<Vec3>,
}

impl State {
    fn axpy(&self, k: f64, d: &Derivative) -> State {
        State {
            pos: self
                .pos
                .iter()
                .zip(&d.dpos)
                .map(|(p, v)| vec3::add(*p, vec3::scale(*v, k)))
                .collect(),
            vel: self
                .vel
                .iter()
                .zip(&d.dvel)
                .map(|(v, a)| vec3::add(*v, vec3::scale(*a, k)))
                .collect(),
        }
    }
}

struct Derivative {
    dpos: Vec<Vec3>,
    dvel: Vec<Vec3>,
}

fn derivative(cfg: &SimConfig, state: &State, t: f64) -> Result<Derivative, MssError> {
    let n = cfg.bodies.len();
    let mut dvel = Vec::with_capacity(n);
    for (i, body) in cfg.bodies.iter().enumerate() {
        let mut f = cfg.external.get(&body.id).copied().unwrap_or(vec3::ZERO);
        if let SimForce::Gravity { gamma } = cfg.internal {
            for (j, other) in cfg.bodies.iter().enumerate() {
                if i == j {
                    continue;
                }
                let d = vec3::sub(state.pos[j], state.pos[i]);
                let r = vec3::norm(d);
                let k = gamma * body.mass * other.mass / (r * r * r);
                f = vec3::add(f, vec3::scale(d, k));
            }
        }
        f = super::finite_or_rejected(f, t)?;
        dvel.push(vec3::scale(f, 1.0 / body.mass));
    }
    Ok(Derivative {
        dpos: state.vel.clone(),
        dvel,
    })
}

fn rk4_step(cfg: &SimConfig, state: &State, t: f64, h: f64) -> Result<State, MssError> {
    let k1 = derivative(cfg, state, t)?;
    let k2 = derivative(cfg, &state.axpy(h / 2.0, &k1), t + h / 2.0)?;
    let k3 = derivative(cfg, &state.axpy(h / 2.0, &k2), t + h / 2.0)?;
    let k4 = derivative(cfg, &state.axpy(h, &k3), t + h)?;
    let n = cfg.bodies.len();
    let mut pos = Vec::with_capacity(n);
    let mut vel = Vec::with_capacity(n);
    for i in 0..n {
        let dp = vec3::add(
            vec3::add(k1.dpos[i], vec3::scale(vec3::add(k2.dpos[i], k3.dpos[i]), 2.0)),
            k4.dpos[i],
        );
        let dv = vec3::add(
            vec3::add(k1.dvel[i], vec3::scale(vec3::add(k2.dvel[i], k3.dvel[i]), 2.0)),
            k4.dvel[i],
        );
        pos.push(vec3::add(state.pos[i], vec3::scale(dp, h / 6.0)));
        vel.push(vec3::add(state.vel[i], vec3::scale(dv, h / 6.0)));
    }
    Ok(State { pos, vel })
}

/// Integrates the configured force law with classical fourth-order
/// Runge-Kutta and packages the sampled trajectories as an [`MSSSystem`]
/// carrying the matching force field.
pub fn simulate(cfg: &SimConfig) -> Result<MSSSystem, MssError> {
    if cfg.bodies.is_empty() {
        return Err(MssError::EmptySelection);
    }
    if !(cfg.h > 0.0) || !(cfg.t1 > cfg.t0) {
        return Err(MssError::BadTrajectory("need h > 0 and t1 > t0"));
    }
    let steps = ((cfg.t1 - cfg.t0) / cfg.h).round() as usize;
    if steps < 4 {
        return Err(MssError::BadTrajectory("need at least 5 samples"));
    }
    let mut state = State {
        pos: cfg.bodies.iter().map(|b| b.pos).collect(),
        vel: cfg.bodies.iter().map(|b| b.vel).collect(),
    };
    let mut tracks: Vec<Vec<Vec3>> = cfg.bodies.iter().map(|b| vec![b.pos]).collect();
    for k in 0..steps {
        let t = cfg.t0 + k as f64 * cfg.h;
        state = rk4_step(cfg, &state, t, cfg.h)?;
        for (i, track) in tracks.iter_mut().enumerate() {
            track.push(state.pos[i]);
        }
    }

    let mut trajectories = BTreeMap::new();
    let mut masses = BTreeMap::new();
    for (body, track) in cfg.bodies.iter().zip(tracks) {
        trajectories.insert(body.id.clone(), Trajectory::new(cfg.t0, cfg.h, track)?);
        masses.insert(body.id.clone(), body.mass);
    }
    let internal = match cfg.internal {
        SimForce::None => InternalForce::Zero,
        SimForce::Gravity { gamma } => InternalForce::Gravity { gamma },
    };
    let external = if cfg.external.values().all(|g| vec3::is_zero(*g)) {
        ExternalForce::Zero
    } else {
        ExternalForce::Constant(cfg.external.clone())
    };
    MSSSystem::new(trajectories, masses, ForceField { internal, external })
}

/// Two equal-mass bodies on a circular orbit about their barycenter,
/// separated by `d` along x. Returns the configuration and the analytic
/// orbital period.
pub fn circular_two_body(gamma: f64, mass: f64, d: f64, h: f64, periods: f64) -> (SimConfig, f64) {
    let omega = (gamma * 2.0 * mass / (d * d * d)).sqrt();
    let period = 2.0 * std::f64::consts::PI / omega;
    let r = d / 2.0;
    let v = omega * r;
    let cfg = SimConfig {
        bodies: vec![
            SimBody {
                id: "a".into(),
                mass,
                pos: [-r, 0.0, 0.0],
                vel: [0.0, -v, 0.0],
            },
            SimBody {
                id: "b".into(),
                mass,
                pos: [r, 0.0, 0.0],
                vel: [0.0, v, 0.0],
            },
        ],
        internal: SimForce::Gravity { gamma },
        external: BTreeMap::new(),
        t0: 0.0,
        t1: periods * period,
        h,
    };
    (cfg, period)
}
