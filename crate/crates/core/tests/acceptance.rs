//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line. Oracles are independent of the implementation under
//! test (brute-force enumeration, closed-form mechanics, binomial
//! statistics).

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs;
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quasiq::mss::{
    circular_two_body, embed_isolated_uniform, equivalent, is_isolated, is_subsystem,
    restrict, simulate, total_angular_momentum, total_momentum, validate, ExternalForce,
    ForceField, InternalForce, MSSSystem, MssError, Trajectory,
};
use quasiq::qmss::{
    individuation_report, qparticle_indist, simulate_gravity, validate_q, QBody, QExternalForce,
    QInternalForce, QMSSSystem, QParticle, QmssError,
};
use quasiq::qset::suite::{exhaustive_universes, random_universe, run_suite};
use quasiq::qset::{
    enumerate_sub_classes, power_qc, validate_qf, Element, MacroId, QSet, QuasiFunction, Species,
};
use quasiq::quantum::{
    count_configurations, eprb_statistics, joint_spin_measure, measure, pr, singlet,
    spin_observable, OccupancyMode, StateVector,
};
use quasiq::seeding;
use quasiq::vec3::{self, Vec3};

fn report(criterion: u32, name: &str, pass: bool) {
    println!(
        "acceptance {criterion} ({name}): {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "acceptance criterion {criterion} ({name}) failed");
}

const Z: Vec3 = [0.0, 0.0, 1.0];

// --- 1: quasi-set axiom suite over exhaustive + randomized universes ---

#[test]
fn criterion_01_qset_axiom_suite() {
    let start = std::time::Instant::now();
    let mut universes = exhaustive_universes();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        universes.push(random_universe(&mut rng));
    }
    let checks = run_suite(&universes);
    let all = checks.iter().all(|c| c.pass && c.cases > 0);
    let in_time = start.elapsed().as_secs_f64() < 10.0;
    for c in &checks {
        assert!(c.pass, "suite check {} failed", c.name);
    }
    report(1, "qset axiom suite", all && in_time);
}

// --- 2: power quasi-set vs enumerable sub-quasi-set classes ---

/// Brute-force oracle: label the n copies, enumerate all 2^n subsets and
/// quotient by what a quasi-set can distinguish (the count).
fn oracle_single_species_classes(n: u32) -> usize {
    let mut seen = HashSet::new();
    for mask in 0u32..(1 << n) {
        seen.insert(mask.count_ones());
    }
    seen.len()
}

#[test]
fn criterion_02_power_qc_vs_enumeration() {
    let mut ok = true;
    for n in 0..=12u64 {
        let q = QSet::empty().with_micro(Species::new("e"), n);
        let declared = power_qc(&q).unwrap();
        let classes = enumerate_sub_classes(&q).unwrap().len();
        let oracle = oracle_single_species_classes(n as u32);
        println!("qc={n}: power_qc={declared} sub-classes={classes}");
        ok &= declared == 1u64 << n;
        ok &= classes == (n + 1) as usize;
        ok &= classes == oracle;
    }
    report(2, "power quasi-set vs enumeration", ok);
}

// --- 3: quasi-function congruence, zero false verdicts ---

#[test]
fn criterion_03_quasi_function_congruence() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let universe = QSet::empty()
        .with_micro(Species::new("a"), 4)
        .with_micro(Species::new("b"), 4)
        .with_macro(MacroId::new("M0"))
        .with_macro(MacroId::new("M1"));
    let mut ok = true;

    for _ in 0..1000 {
        // class-constant mapping: each input class gets one fixed output
        let mut pairs = Vec::new();
        for (species, out) in [("a", "M0"), ("b", "M1")] {
            let copies = rng.random_range(1..=3);
            for _ in 0..copies {
                pairs.push((
                    Element::Micro(Species::new(species)),
                    Element::Macro(MacroId::new(out)),
                ));
            }
        }
        let f = QuasiFunction {
            domain: universe.clone(),
            codomain: universe.clone(),
            pairs,
        };
        ok &= validate_qf(&f).is_ok();
    }

    for _ in 0..1000 {
        // violation: one input class, two non-≡ outputs, plus noise
        let species = if rng.random_bool(0.5) { "a" } else { "b" };
        let mut pairs = vec![
            (
                Element::Micro(Species::new(species)),
                Element::Macro(MacroId::new("M0")),
            ),
            (
                Element::Micro(Species::new(species)),
                Element::Macro(MacroId::new("M1")),
            ),
        ];
        for _ in 0..rng.random_range(0..3) {
            pairs.push((
                Element::Macro(MacroId::new("M0")),
                Element::Micro(Species::new("a")),
            ));
        }
        let f = QuasiFunction {
            domain: universe.clone(),
            codomain: universe.clone(),
            pairs,
        };
        ok &= validate_qf(&f).is_err();
    }

    report(3, "quasi-function congruence", ok);
}

// --- 4: two-body gravity vs closed-form orbit ---

#[test]
fn criterion_04_mss_two_body_orbit() {
    let start = std::time::Instant::now();
    let (cfg, period) = circular_two_body(1.0, 1.0, 1.0, 1e-3, 1.0);
    let sys = simulate(&cfg).unwrap();
    let grid = sys.sample_times();
    let rep = validate(&sys, 1e-4, &grid);
    let mut ok = rep.all_pass() && rep.max_residual() < 1e-4;

    let p0 = total_momentum(&sys, grid[0]).unwrap();
    let l0 = total_angular_momentum(&sys, grid[0]).unwrap();
    let mut p_drift: f64 = 0.0;
    let mut l_drift: f64 = 0.0;
    for &t in &grid {
        let p = total_momentum(&sys, t).unwrap();
        let l = total_angular_momentum(&sys, t).unwrap();
        p_drift = p_drift.max(vec3::norm(vec3::sub(p, p0)));
        l_drift = l_drift.max(vec3::norm(vec3::sub(l, l0)));
    }
    ok &= p_drift < 1e-6 && l_drift < 1e-6;

    // period from the swept angle of the relative vector
    let ta = sys.trajectory("a").unwrap();
    let tb = sys.trajectory("b").unwrap();
    let mut swept = 0.0;
    let mut prev: Option<Vec3> = None;
    for (&sa, &sb) in ta.samples().iter().zip(tb.samples()) {
        let r = vec3::sub(sa, sb);
        if let Some(q) = prev {
            let cross = q[0] * r[1] - q[1] * r[0];
            let dot = q[0] * r[0] + q[1] * r[1];
            swept += cross.atan2(dot);
        }
        prev = Some(r);
    }
    let (t0, t1) = sys.interval();
    let period_sim = (t1 - t0) * std::f64::consts::TAU / swept;
    ok &= (period_sim - period).abs() / period < 1e-3;
    ok &= start.elapsed().as_secs_f64() < 5.0;
    println!(
        "orbit: max residual {:.3e}, |dP| {p_drift:.3e}, |dL| {l_drift:.3e}, period {period_sim:.6} vs {period:.6}",
        rep.max_residual()
    );
    report(4, "two-body gravity vs closed form", ok);
}

// --- shared machinery for 5 and 6: exactly constructed random systems ---

struct Poly3 {
    c: [Vec3; 4],
}

impl Poly3 {
    fn random(rng: &mut impl Rng) -> Self {
        let mut c = [vec3::ZERO; 4];
        for ck in &mut c {
            for x in ck.iter_mut() {
                *x = rng.random_range(-1.0..1.0);
            }
        }
        Poly3 { c }
    }

    fn pos(&self, t: f64) -> Vec3 {
        let mut s = vec3::ZERO;
        let mut tk = 1.0;
        for ck in &self.c {
            s = vec3::add(s, vec3::scale(*ck, tk));
            tk *= t;
        }
        s
    }

    fn accel(&self, t: f64) -> Vec3 {
        vec3::add(vec3::scale(self.c[2], 2.0), vec3::scale(self.c[3], 6.0 * t))
    }
}

/// A validated system built exactly: cubic trajectories, symmetric
/// scalar line-of-centers internal forces that vanish across the split
/// `group_a` / rest, and the external field defined as `m·a − Σf`.
fn random_exact_system(rng: &mut impl Rng) -> (MSSSystem, BTreeSet<String>) {
    let n = rng.random_range(3..=5usize);
    let t0 = 0.0;
    let h = 0.05;
    let samples = 21;
    let ids: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let split = rng.random_range(1..n);
    let group_a: BTreeSet<String> = ids[..split].iter().cloned().collect();

    let polys: Vec<Poly3> = (0..n).map(|_| Poly3::random(rng)).collect();
    let masses: BTreeMap<String, f64> = ids
        .iter()
        .map(|id| (id.clone(), rng.random_range(0.5..2.0)))
        .collect();
    let times: Vec<f64> = (0..samples).map(|k| t0 + h * k as f64).collect();

    // symmetric scalar couplings, zero across the split
    let mut coupling = BTreeMap::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let cross = group_a.contains(&ids[i]) != group_a.contains(&ids[j]);
            let c = if cross { 0.0 } else { rng.random_range(-1.0..1.0) };
            coupling.insert((i, j), c);
        }
    }
    let force = |i: usize, j: usize, t: f64| -> Vec3 {
        let c = *coupling
            .get(&(i.min(j), i.max(j)))
            .expect("pair coupling");
        vec3::scale(vec3::sub(polys[j].pos(t), polys[i].pos(t)), c)
    };

    let mut pair_table = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let rows: Vec<Vec3> = times.iter().map(|&t| force(i, j, t)).collect();
            pair_table.insert((ids[i].clone(), ids[j].clone()), rows);
        }
    }

    let mut external = BTreeMap::new();
    for i in 0..n {
        let m = masses[&ids[i]];
        let rows: Vec<Vec3> = times
            .iter()
            .map(|&t| {
                let mut g = vec3::scale(polys[i].accel(t), m);
                for j in 0..n {
                    if j != i {
                        g = vec3::sub(g, force(i, j, t));
                    }
                }
                g
            })
            .collect();
        external.insert(ids[i].clone(), rows);
    }

    let trajectories: BTreeMap<String, Trajectory> = ids
        .iter()
        .zip(&polys)
        .map(|(id, p)| {
            (
                id.clone(),
                Trajectory::from_fn(t0, h, samples, |t| p.pos(t)).unwrap(),
            )
        })
        .collect();

    let sys = MSSSystem::new(
        trajectories,
        masses,
        ForceField {
            internal: InternalForce::PairTable(pair_table),
            external: ExternalForce::Table(external),
        },
    )
    .unwrap();
    (sys, group_a)
}

const EXACT_TOL: f64 = 1e-6;

#[test]
fn criterion_05_theorem_1_subsystems() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut ok = true;
    let mut positives = 0u32;
    for _ in 0..100 {
        let (sys, group_a) = random_exact_system(&mut rng);
        let grid = sys.sample_times();
        ok &= validate(&sys, EXACT_TOL, &grid).all_pass();

        let all = sys.particle_set();
        let group_b: BTreeSet<String> = all.difference(&group_a).cloned().collect();
        let mut candidates = vec![group_a, group_b, all.clone()];
        for _ in 0..4 {
            let pick: BTreeSet<String> = all
                .iter()
                .filter(|_| rng.random_bool(0.5))
                .cloned()
                .collect();
            if !pick.is_empty() {
                candidates.push(pick);
            }
        }
        for ids in candidates {
            if is_subsystem(&sys, &ids, EXACT_TOL, &grid).unwrap() {
                positives += 1;
                let sub = restrict(&sys, &ids).unwrap();
                ok &= validate(&sub, EXACT_TOL, &grid).all_pass();
            }
        }
    }
    // the designated split and the full set must have produced positives
    ok &= positives >= 200;
    println!("theorem 1: {positives} subsystem-positive restrictions re-validated");
    report(5, "theorem 1 subsystem closure", ok);
}

#[test]
fn criterion_06_theorem_2_force_split_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut ok = true;
    for _ in 0..100 {
        let (sys_a, _) = random_exact_system(&mut rng);
        // re-split: scale every internal pair force, push the rest into g'
        let lambda: f64 = rng.random_range(-1.0..2.0);
        let grid = sys_a.sample_times();
        let ids: Vec<String> = sys_a.particle_set().into_iter().collect();
        let mut pair_table = BTreeMap::new();
        for p in &ids {
            for q in &ids {
                if p == q {
                    continue;
                }
                let rows: Vec<Vec3> = grid
                    .iter()
                    .map(|&t| vec3::scale(sys_a.internal_force(p, q, t).unwrap(), lambda))
                    .collect();
                pair_table.insert((p.clone(), q.clone()), rows);
            }
        }
        let mut external = BTreeMap::new();
        for p in &ids {
            let rows: Vec<Vec3> = grid
                .iter()
                .map(|&t| {
                    let mut g = sys_a.external_force(p, t).unwrap();
                    for q in &ids {
                        if q != p {
                            let f = sys_a.internal_force(p, q, t).unwrap();
                            g = vec3::add(g, vec3::scale(f, 1.0 - lambda));
                        }
                    }
                    g
                })
                .collect();
            external.insert(p.clone(), rows);
        }
        let trajectories: BTreeMap<String, Trajectory> = ids
            .iter()
            .map(|p| (p.clone(), sys_a.trajectory(p).unwrap().clone()))
            .collect();
        let masses = sys_a.masses().clone();
        let sys_b = MSSSystem::new(
            trajectories,
            masses,
            ForceField {
                internal: InternalForce::PairTable(pair_table),
                external: ExternalForce::Table(external),
            },
        )
        .unwrap();

        ok &= validate(&sys_b, EXACT_TOL, &grid).all_pass();
        ok &= equivalent(&sys_a, &sys_b, 0.0);
        for p in &ids {
            for &t in &grid {
                let fa = sys_a.total_applied_force(p, t).unwrap();
                let fb = sys_b.total_applied_force(p, t).unwrap();
                ok &= vec3::norm(vec3::sub(fa, fb)) < 10.0 * EXACT_TOL;
            }
        }
    }
    report(6, "theorem 2 total force invariance", ok);
}

// --- 7: theorem 3, isolating embedding for uniform fields ---

#[test]
fn criterion_07_theorem_3_embedding() {
    let m_p = 1.0;
    let g: Vec3 = [0.0, 0.0, -0.5];
    let tr = Trajectory::from_fn(0.0, 0.01, 101, |t| {
        [0.3 * t, 0.0, 1.0 - 0.25 * t * t]
    })
    .unwrap();
    let sys = MSSSystem::new(
        BTreeMap::from([("p".to_string(), tr)]),
        BTreeMap::from([("p".to_string(), m_p)]),
        ForceField {
            internal: InternalForce::Zero,
            external: ExternalForce::Constant(BTreeMap::from([("p".to_string(), g)])),
        },
    )
    .unwrap();
    let grid = sys.sample_times();
    let mut ok = validate(&sys, 1e-9, &grid).all_pass();
    ok &= !is_isolated(&sys);

    let embedded = embed_isolated_uniform(&sys, 1.0).unwrap();
    ok &= is_isolated(&embedded);
    ok &= validate(&embedded, 1e-9, &grid).all_pass();
    let back = restrict(&embedded, &BTreeSet::from(["p".to_string()])).unwrap();
    ok &= equivalent(&sys, &back, 0.0);

    // |g| = 1, m_p = m_e = 1: gap closes at t0 + sqrt(2/(1·(1+1))) = 1
    let steep = MSSSystem::new(
        BTreeMap::from([(
            "p".to_string(),
            Trajectory::from_fn(0.0, 0.01, 101, |t| [0.0, 0.0, -0.5 * t * t]).unwrap(),
        )]),
        BTreeMap::from([("p".to_string(), 1.0)]),
        ForceField {
            internal: InternalForce::Zero,
            external: ExternalForce::Constant(BTreeMap::from([(
                "p".to_string(),
                [0.0, 0.0, -1.0],
            )])),
        },
    )
    .unwrap();
    match embed_isolated_uniform(&steep, 1.0) {
        Err(MssError::DegenerateWitness { t_zero }) => ok &= (t_zero - 1.0).abs() < 1e-12,
        other => {
            println!("expected DegenerateWitness, got {other:?}");
            ok = false;
        }
    }
    report(7, "theorem 3 isolating embedding", ok);
}

// --- 8: quasi-MSS individuation and singularity ---

#[test]
fn criterion_08_quasi_mss() {
    let mut ok = true;

    // (a) ≡ particles: identical force values, zero force between them
    let tr = Trajectory::from_fn(0.0, 0.1, 11, |t| [t, 0.0, 0.0]).unwrap();
    let twins = QMSSSystem::new(
        Species::new("e"),
        vec![
            QParticle {
                species: Species::new("e"),
                mass: 1.0,
                traj: tr.clone(),
            },
            QParticle {
                species: Species::new("e"),
                mass: 1.0,
                traj: tr.clone(),
            },
        ],
        QInternalForce::Zero,
        QExternalForce::Zero,
    )
    .unwrap();
    ok &= qparticle_indist(&twins.particles()[0], &twins.particles()[1], 0.0).unwrap();
    let grid = twins.sample_times();
    let rep = validate_q(&twins, 1e-9, &grid);
    ok &= rep.all_pass();
    ok &= rep.check("Congruence").map(|c| c.pass).unwrap_or(false);
    // any non-zero force between ≡ particles must be flagged
    let bad = QMSSSystem::new(
        Species::new("e"),
        twins.particles().to_vec(),
        QInternalForce::PairTable(BTreeMap::from([((0usize, 1usize), vec![[1.0, 0.0, 0.0]; 11])])),
        QExternalForce::Zero,
    )
    .unwrap();
    ok &= !validate_q(&bad, 1e-9, &grid)
        .check("Congruence")
        .map(|c| c.pass)
        .unwrap_or(true);

    // (b) five same-mass bodies from distinct states stay individuated
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let bodies: Vec<QBody> = (0..5)
        .map(|_| QBody {
            mass: 1.0,
            pos: [
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
                rng.random_range(-2.0..2.0),
            ],
            vel: [
                rng.random_range(-0.3..0.3),
                rng.random_range(-0.3..0.3),
                rng.random_range(-0.3..0.3),
            ],
        })
        .collect();
    let sys = simulate_gravity(Species::new("star"), &bodies, 0.1, 1e-3, 1e-3, 0.0, 2.0).unwrap();
    let times = sys.sample_times();
    let ind = individuation_report(&sys, &times, 1e-9).unwrap();
    ok &= ind.all_singletons();
    ok &= ind.rows.iter().all(|r| r.class_sizes.len() == 5);

    // (c) head-on collapse flagged before the free-fall collision time
    let pair = [
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
    // t_collision = (π/2)·sqrt(r0³ / (2γM)) with r0 = 1, γ = 1, M = 2
    let t_collision = std::f64::consts::FRAC_PI_2 * 0.5;
    match simulate_gravity(Species::new("star"), &pair, 1.0, 1e-4, 5e-2, 0.0, 1.0) {
        Err(QmssError::SingularityError { t, .. }) => ok &= t < t_collision,
        other => {
            println!("expected SingularityError, got {other:?}");
            ok = false;
        }
    }

    report(8, "quasi-MSS individuation and singularity", ok);
}

// --- 9: EPRB statistics ---

#[test]
fn criterion_09_eprb() {
    let mut ok = true;

    // same axis: anti-correlated in every single trial
    let stats = eprb_statistics(Z, Z, 10_000, 9).unwrap();
    ok &= stats.correlation == -1.0;
    ok &= stats.counts[0][0] == 0 && stats.counts[1][1] == 0;

    for theta in [
        0.0,
        std::f64::consts::FRAC_PI_6,
        std::f64::consts::FRAC_PI_4,
        std::f64::consts::FRAC_PI_3,
        std::f64::consts::FRAC_PI_2,
    ] {
        let start = std::time::Instant::now();
        let b = [theta.sin(), 0.0, theta.cos()];
        let stats = eprb_statistics(Z, b, 100_000, 97).unwrap();
        let want = -theta.cos();
        let se = ((1.0 - want * want) / 100_000.0).sqrt().max(1e-4);
        let within = (stats.correlation - want).abs() <= 3.0 * se;
        println!(
            "theta {theta:.4}: corr {:+.4} want {want:+.4} (3σ = {:.4})",
            stats.correlation,
            3.0 * se
        );
        ok &= within && start.elapsed().as_secs_f64() < 10.0;
    }

    // Born frequencies of measure vs pr, and Pr(u, M(u)) ∈ [0,1]
    let sz = spin_observable(Z).unwrap();
    let u = StateVector::from_reals(&[0.6, 0.8]).unwrap();
    let p_plus = 0.36;
    let mut plus = 0u64;
    let trials = 100_000u64;
    for i in 0..trials {
        let mut rng = seeding::trial_rng(99, i);
        let rec = measure(&sz, &u, &mut rng).unwrap();
        let prob = pr(&u, &rec.post_state).unwrap();
        ok &= (0.0..=1.0).contains(&prob);
        if rec.outcome > 0.0 {
            plus += 1;
        }
    }
    let freq = plus as f64 / trials as f64;
    let se = (p_plus * (1.0 - p_plus) / trials as f64).sqrt();
    ok &= (freq - p_plus).abs() <= 3.0 * se;

    // joint measurement on the singlet keeps per-trial probabilities sane
    let psi = singlet();
    for i in 0..100 {
        let mut rng = seeding::trial_rng(100, i);
        let (a, b) = joint_spin_measure(&psi, Z, [1.0, 0.0, 0.0], &mut rng).unwrap();
        ok &= (a == 1 || a == -1) && (b == 1 || b == -1);
    }

    report(9, "EPRB statistics", ok);
}

// --- 10: occupancy counting vs brute-force oracle ---

/// Enumerates every assignment of `n` labelled particles to `k` states;
/// the non-individual count quotients by the occupancy vector.
fn occupancy_oracle(n: u64, k: u64) -> (u64, u64) {
    let mut labelled = 0u64;
    let mut occupancies = HashSet::new();
    let mut assign = vec![0u64; n as usize];
    loop {
        labelled += 1;
        let mut occ = vec![0u64; k as usize];
        for &a in &assign {
            occ[a as usize] += 1;
        }
        occupancies.insert(occ);
        // odometer increment
        let mut i = 0;
        loop {
            if i == assign.len() {
                return (labelled, occupancies.len() as u64);
            }
            assign[i] += 1;
            if assign[i] < k {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn criterion_10_occupancy_counting() {
    let mut ok = true;
    for n in 0..=6u64 {
        for k in 1..=6u64 {
            let (labelled, unlabelled) = occupancy_oracle(n, k);
            ok &= count_configurations(n, k, OccupancyMode::Individuals).unwrap() == labelled;
            ok &= count_configurations(n, k, OccupancyMode::NonIndividuals).unwrap() == unlabelled;
        }
    }
    ok &= count_configurations(2, 2, OccupancyMode::Individuals).unwrap() == 4;
    ok &= count_configurations(2, 2, OccupancyMode::NonIndividuals).unwrap() == 3;
    ok &= count_configurations(3, 2, OccupancyMode::Individuals).unwrap() == 8;
    ok &= count_configurations(3, 2, OccupancyMode::NonIndividuals).unwrap() == 4;
    report(10, "occupancy counting", ok);
}

// --- 11: CLI byte-determinism under fixed (config, seed) ---

#[test]
fn criterion_11_cli_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("eprb.toml");
    fs::write(
        &cfg,
        "kind = \"eprb\"\nseed = 11\n[eprb]\na_theta = 0.0\na_phi = 0.0\nb_theta = 0.7853981633974483\nb_phi = 0.0\ntrials = 20000\n",
    )
    .unwrap();
    let mut ok = true;
    let outs = [dir.path().join("r1"), dir.path().join("r2")];
    for out in &outs {
        let status = Command::new(env!("CARGO_BIN_EXE_quasiq"))
            .args(["run"])
            .arg(&cfg)
            .arg("--out")
            .arg(out)
            .status()
            .unwrap();
        ok &= status.success();
    }
    for name in ["trials.csv", "eprb.jsonl"] {
        let a = fs::read(outs[0].join(name)).unwrap();
        let b = fs::read(outs[1].join(name)).unwrap();
        ok &= a == b;
    }
    // summary is byte-stable except for the trailing wall-clock record
    let strip = |p: &std::path::Path| -> String {
        fs::read_to_string(p.join("summary.jsonl"))
            .unwrap()
            .lines()
            .filter(|l| !l.contains("duration_secs"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    ok &= strip(&outs[0]) == strip(&outs[1]);
    report(11, "CLI determinism", ok);
}
