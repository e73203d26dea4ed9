//! Axiom suite over generated universes: equivalence laws for `≡`,
//! substitutivity of extensional equality, weak-pair membership,
//! Separation, the quasi-cardinality sum rule, sub-quasi-set existence
//! and the Weak Extensionality ⇔ quotient-matching equivalence.

use rand::Rng;

use super::{
    ext_eq, indist, quotient, separation, sub_qset_with_qc, weak_ext_indist, weak_pair, Element,
    MacroId, Predicate, QSet, Species,
};

/// Aggregated verdict of one suite check.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SuiteCheck {
    pub name: String,
    pub pass: bool,
    pub cases: u64,
}

/// Window of cross-universe pairs examined by the pairwise checks.
const PAIR_WINDOW: usize = 25;

fn sp(i: usize) -> Species {
    Species::new(format!("s{i}"))
}

fn mk(i: usize) -> MacroId {
    MacroId::new(format!("M{i}"))
}

/// Structured enumeration of small universes: every flat quasi-set over
/// two species (counts 0..=3) and two macro-atoms, each flat shape with
/// every depth-1 nesting from a fixed representative pool, and depth-2
/// nestings over the depth-1 pool.
pub fn exhaustive_universes() -> Vec<QSet> {
    let mut flats = Vec::new();
    for c0 in 0..=3u64 {
        for c1 in 0..=3u64 {
            for mset in 0..4usize {
                let mut q = QSet::empty()
                    .with_micro(sp(0), c0)
                    .with_micro(sp(1), c1);
                if mset & 1 != 0 {
                    q = q.with_macro(mk(0));
                }
                if mset & 2 != 0 {
                    q = q.with_macro(mk(1));
                }
                flats.push(q);
            }
        }
    }
    let pool: Vec<QSet> = vec![
        QSet::empty(),
        QSet::empty().with_micro(sp(0), 1),
        QSet::empty().with_micro(sp(1), 2),
        QSet::empty().with_macro(mk(0)),
    ];
    let mut out = flats.clone();
    for f in &flats {
        for rep in &pool {
            for mult in 1..=2u64 {
                out.push(f.clone().with_sub(rep.clone(), mult));
            }
        }
    }
    for rep in &pool {
        let inner = QSet::empty().with_sub(rep.clone(), 1).with_micro(sp(2), 1);
        out.push(QSet::empty().with_sub(inner.clone(), 1));
        out.push(flats[1].clone().with_sub(inner, 2));
    }
    out
}

/// Random universe: up to 5 species with counts ≤ 4, up to 4 macro-atoms,
/// nesting depth ≤ 2.
pub fn random_universe(rng: &mut impl Rng) -> QSet {
    random_universe_depth(rng, 2)
}

fn random_universe_depth(rng: &mut impl Rng, depth: u32) -> QSet {
    let mut q = QSet::empty();
    for i in 0..5 {
        q = q.with_micro(sp(i), rng.random_range(0..=4u64));
    }
    for i in 0..4 {
        if rng.random_bool(0.4) {
            q = q.with_macro(mk(i));
        }
    }
    if depth > 0 {
        for _ in 0..rng.random_range(0..=2) {
            let rep = random_universe_depth(rng, depth - 1);
            q = q.with_sub(rep, rng.random_range(1..=3u64));
        }
    }
    q
}

/// Independent quotient-matching oracle: the quotients agree as multisets
/// of (class, multiplicity) under `≡` on class representatives.
fn quotients_match(x: &QSet, y: &QSet) -> bool {
    let qx = quotient(x);
    let qy = quotient(y);
    if qx.len() != qy.len() {
        return false;
    }
    let mut used = vec![false; qy.len()];
    'outer: for (ex, cx) in &qx {
        for (j, (ey, cy)) in qy.iter().enumerate() {
            if !used[j] && cx == cy && indist(ex, ey) {
                used[j] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}

struct Tally {
    name: &'static str,
    pass: bool,
    cases: u64,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            pass: true,
            cases: 0,
        }
    }

    fn record(&mut self, ok: bool) {
        self.cases += 1;
        self.pass &= ok;
    }

    fn done(self) -> SuiteCheck {
        SuiteCheck {
            name: self.name.to_string(),
            pass: self.pass,
            cases: self.cases,
        }
    }
}

/// Runs every suite check over `universes` and returns one aggregated
/// verdict per check.
pub fn run_suite(universes: &[QSet]) -> Vec<SuiteCheck> {
    let mut equiv = Tally::new("equivalence-laws");
    let mut subst = Tally::new("ext-eq-substitutivity");
    let mut pair = Tally::new("weak-pair");
    let mut sep = Tally::new("separation");
    let mut qc_sum = Tally::new("qc-sum-rule");
    let mut sub_exist = Tally::new("sub-qset-existence");
    let mut weak_ext = Tally::new("weak-extensionality");

    qc_sum.record(QSet::empty().qc() == 0);

    for u in universes {
        let elems: Vec<Element> = quotient(u).into_iter().map(|(e, _)| e).collect();

        for a in &elems {
            equiv.record(indist(a, a));
        }
        for (i, a) in elems.iter().enumerate() {
            for b in &elems[i..] {
                equiv.record(indist(a, b) == indist(b, a));
            }
        }
        for a in &elems {
            for b in &elems {
                for c in &elems {
                    if indist(a, b) && indist(b, c) {
                        equiv.record(indist(a, c));
                    }
                }
            }
        }

        // substitutivity: extensional equality implies interchangeability
        // under ≡ and membership
        for a in &elems {
            for b in &elems {
                if let Ok(true) = ext_eq(a, b) {
                    subst.record(indist(a, b) && u.contains(a) == u.contains(b));
                }
            }
        }

        for x in &elems {
            for y in &elems {
                let wp = weak_pair(x, y, u);
                let mut ok = wp.is_sub_qset_of(u);
                for (e, _) in quotient(&wp) {
                    ok &= indist(&e, x) || indist(&e, y);
                }
                for (e, c) in quotient(u) {
                    if indist(&e, x) || indist(&e, y) {
                        // the full ≡ class survives with its multiplicity
                        ok &= match &e {
                            Element::Micro(s) => wp.micro_count(s) == c,
                            _ => wp.contains(&e),
                        };
                    }
                }
                if indist(x, y) {
                    ok &= weak_ext_indist(&wp, &weak_pair(x, x, u));
                }
                pair.record(ok);
            }
        }

        let preds = [
            Predicate::True,
            Predicate::False,
            Predicate::SpeciesIs(sp(0)),
            Predicate::Or(
                Box::new(Predicate::MacroIdIs(mk(0))),
                Box::new(Predicate::IsCollection),
            ),
            Predicate::Not(Box::new(Predicate::SpeciesIs(sp(1)))),
        ];
        for p in &preds {
            let s = separation(u, p);
            let mut ok = s.is_sub_qset_of(u);
            for (e, _) in quotient(&s) {
                ok &= p.eval(&e);
            }
            for (e, _) in quotient(u) {
                if p.eval(&e) {
                    ok &= s.contains(&e);
                } else {
                    ok &= !s.contains(&e);
                }
            }
            sep.record(ok);
        }

        let total: u64 = quotient(u).iter().map(|(_, c)| c).sum();
        qc_sum.record(total == u.qc());

        for beta in 0..=u.qc() {
            match sub_qset_with_qc(u, beta) {
                Ok(s) => sub_exist.record(s.qc() == beta && s.is_sub_qset_of(u)),
                Err(_) => sub_exist.record(false),
            }
        }
        sub_exist.record(sub_qset_with_qc(u, u.qc() + 1).is_err());
    }

    for (i, x) in universes.iter().enumerate() {
        weak_ext.record(weak_ext_indist(x, x) && quotients_match(x, x));
        for y in universes.iter().skip(i + 1).take(PAIR_WINDOW) {
            weak_ext.record(weak_ext_indist(x, y) == quotients_match(x, y));
        }
    }

    vec![
        equiv.done(),
        subst.done(),
        pair.done(),
        sep.done(),
        qc_sum.done(),
        sub_exist.done(),
        weak_ext.done(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exhaustive_family_passes() {
        let universes = exhaustive_universes();
        assert!(universes.len() > 500);
        for check in run_suite(&universes) {
            assert!(check.pass, "{} failed", check.name);
            assert!(check.cases > 0);
        }
    }

    #[test]
    fn random_universes_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let universes: Vec<QSet> = (0..100).map(|_| random_universe(&mut rng)).collect();
        for check in run_suite(&universes) {
            assert!(check.pass, "{} failed", check.name);
        }
    }

    #[test]
    fn quotient_oracle_detects_mismatch() {
        let x = QSet::empty().with_micro(sp(0), 2);
        let y = QSet::empty().with_micro(sp(0), 3);
        assert!(!quotients_match(&x, &y));
        assert!(quotients_match(&x, &x.clone()));
    }
}
