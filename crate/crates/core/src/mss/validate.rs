use serde::Serialize;

use super::{MSSSystem, MssError, ParticleId};
use crate::vec3::{self, Vec3};

/// Location of the worst residual of an axiom check.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub particles: Vec<ParticleId>,
    pub t: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomCheck {
    pub axiom: String,
    pub pass: bool,
    pub max_residual: f64,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub tol: f64,
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, axiom: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.axiom == axiom)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks
            .iter()
            .map(|c| c.max_residual)
            .fold(0.0, f64::max)
    }
}

struct ResidualTracker {
    max: f64,
    witness: Option<Witness>,
}

impl ResidualTracker {
    fn new() -> Self {
        ResidualTracker {
            max: 0.0,
            witness: None,
        }
    }

    fn record(&mut self, residual: f64, particles: Vec<ParticleId>, t: f64) {
        if residual > self.max || self.witness.is_none() && residual > 0.0 {
            self.max = residual;
            self.witness = Some(Witness { particles, t });
        }
    }

    fn record_err(&mut self, particles: Vec<ParticleId>, t: f64) {
        self.record(f64::INFINITY, particles, t);
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

/// Checks the seven mechanics axioms against `sys` on the given time
/// grid. Failures never abort; they surface as report entries whose
/// `max_residual` exceeds `tol`.
pub fn validate(sys: &MSSSystem, tol: f64, grid: &[f64]) -> ValidationReport {
    let ids: Vec<ParticleId> = sys.particles().cloned().collect();
    let mut checks = Vec::with_capacity(7);

    // P1: non-empty finite particle set (guaranteed by construction).
    let mut p1 = ResidualTracker::new();
    if ids.is_empty() {
        p1.record_err(vec![], 0.0);
    }
    checks.push(p1.into_check("P1", tol));

    // P2: non-degenerate time interval.
    let mut p2 = ResidualTracker::new();
    let (t0, t1) = sys.interval();
    if !(t1 > t0) {
        p2.record_err(vec![], t0);
    }
    checks.push(p2.into_check("P2", tol));

    // P3: second derivative exists (finite) at every grid time.
    let mut p3 = ResidualTracker::new();
    for p in &ids {
        for &t in grid {
            match sys.trajectory(p).and_then(|tr| tr.accel(t)) {
                Ok(a) if vec3::is_finite(a) => {}
                _ => p3.record_err(vec![p.clone()], t),
            }
        }
    }
    checks.push(p3.into_check("P3", tol));

    // P4: positive masses.
    let mut p4 = ResidualTracker::new();
    for p in &ids {
        let m = sys.mass(p).unwrap_or(f64::NAN);
        if !(m > 0.0) {
            p4.record_err(vec![p.clone()], t0);
        }
    }
    checks.push(p4.into_check("P4", tol));

    let force =
        |p: &str, q: &str, t: f64| -> Result<Vec3, MssError> { sys.internal_force(p, q, t) };

    // P5: f(p,q,t) = -f(q,p,t); at p = q this forces a zero self-force.
    let mut p5 = ResidualTracker::new();
    for p in &ids {
        for q in &ids {
            for &t in grid {
                match (force(p, q, t), force(q, p, t)) {
                    (Ok(fpq), Ok(fqp)) => p5.record(
                        vec3::norm(vec3::add(fpq, fqp)),
                        vec![p.clone(), q.clone()],
                        t,
                    ),
                    _ => p5.record_err(vec![p.clone(), q.clone()], t),
                }
            }
        }
    }
    checks.push(p5.into_check("P5", tol));

    // P6: [s_p, f(p,q,t)] = -[s_q, f(q,p,t)] (cross products).
    let mut p6 = ResidualTracker::new();
    for p in &ids {
        for q in &ids {
            for &t in grid {
                let r = (|| -> Result<f64, MssError> {
                    let sp = sys.trajectory(p)?.position(t)?;
                    let sq = sys.trajectory(q)?.position(t)?;
                    let fpq = force(p, q, t)?;
                    let fqp = force(q, p, t)?;
                    Ok(vec3::norm(vec3::add(
                        vec3::cross(sp, fpq),
                        vec3::cross(sq, fqp),
                    )))
                })();
                match r {
                    Ok(res) if res.is_finite() => p6.record(res, vec![p.clone(), q.clone()], t),
                    _ => p6.record_err(vec![p.clone(), q.clone()], t),
                }
            }
        }
    }
    checks.push(p6.into_check("P6", tol));

    // P7: m a = Σ_q f(p,q,t) + g(p,t).
    let mut p7 = ResidualTracker::new();
    for p in &ids {
        for &t in grid {
            let r = (|| -> Result<f64, MssError> {
                let a = sys.trajectory(p)?.accel(t)?;
                let m = sys.mass(p)?;
                let f = sys.total_applied_force(p, t)?;
                Ok(vec3::norm(vec3::sub(vec3::scale(a, m), f)))
            })();
            match r {
                Ok(res) if res.is_finite() => p7.record(res, vec![p.clone()], t),
                _ => p7.record_err(vec![p.clone()], t),
            }
        }
    }
    checks.push(p7.into_check("P7", tol));

    ValidationReport { tol, checks }
}
