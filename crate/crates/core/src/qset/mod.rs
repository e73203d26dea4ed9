//! Finite quasi-sets: collections that may hold micro-atoms (no identity,
//! only the indistinguishability relation `≡`), macro-atoms (ordinary
//! Urelemente with identity) and nested sub-quasi-sets.
//!
//! Micro-atoms are represented purely as a (species, count) pair; the
//! public surface deliberately offers no handle, index or ordering on
//! individual micro-atoms.

mod io;
mod predicate;
pub mod suite;

pub use io::{parse_universe, serialize_universe, UniverseParseError};
pub use predicate::Predicate;

use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Cardinal-valued size of a quasi-set.
pub type QuasiCardinal = u64;

/// Hard bound on enumerate_sub_classes.
pub const ENUMERATION_QC_LIMIT: QuasiCardinal = 12;

/// Cap on the multiplicity of a nested sub-quasi-set class.
pub const SUB_MULT_CAP: QuasiCardinal = 64;

#[derive(Debug, Error)]
pub enum QsetError {
    #[error("extensional equality is not a formula on micro-atoms")]
    IllFormed,
    #[error("requested quasi-cardinal {requested} exceeds capacity {capacity}")]
    CapacityExceeded {
        requested: QuasiCardinal,
        capacity: QuasiCardinal,
    },
    #[error("2^{0} does not fit the quasi-cardinal representation")]
    Overflow(QuasiCardinal),
    #[error("quasi-cardinal {0} exceeds the enumeration limit {ENUMERATION_QC_LIMIT}")]
    TooLarge(QuasiCardinal),
    #[error("operation requires a pure quasi-set (micro-atoms only)")]
    NotPure,
    #[error("n-singleton requires a micro-atom argument")]
    NotMicro,
}

/// One indistinguishability class of micro-atoms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Species(String);

impl Species {
    pub fn new(label: impl Into<String>) -> Self {
        Species(label.into())
    }

    pub fn label(&self) -> &str {
        &self.0
    }
}

/// Identifier of a macro-atom. Globally unique by convention of the caller.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MacroId(String);

impl MacroId {
    pub fn new(id: impl Into<String>) -> Self {
        MacroId(id.into())
    }

    pub fn id(&self) -> &str {
        &self.0
    }
}

/// A member of a quasi-set.
#[derive(Debug, Clone)]
pub enum Element {
    Micro(Species),
    Macro(MacroId),
    Collection(QSet),
}

/// Finite quasi-set: species-counted micro-atoms, identified macro-atoms
/// and nested sub-quasi-set classes with multiplicities.
///
/// Invariants kept by construction: micro counts are >= 1, sub-class
/// representatives are pairwise non-`≡` and sub multiplicities are >= 1.
#[derive(Debug, Clone, Default)]
pub struct QSet {
    micro: BTreeMap<Species, QuasiCardinal>,
    macros: BTreeSet<MacroId>,
    subs: Vec<(QSet, QuasiCardinal)>,
}

impl QSet {
    pub fn empty() -> Self {
        QSet::default()
    }

    /// Builder step: add `count` micro-atoms of `species`.
    pub fn with_micro(mut self, species: Species, count: QuasiCardinal) -> Self {
        if count > 0 {
            *self.micro.entry(species).or_insert(0) += count;
        }
        self
    }

    /// Builder step: add one macro-atom.
    pub fn with_macro(mut self, id: MacroId) -> Self {
        self.macros.insert(id);
        self
    }

    /// Builder step: add `mult` indistinguishable copies of the collection
    /// `rep`. Copies merge into an existing `≡` class if one is present.
    ///
    /// # Panics
    /// Panics when the class multiplicity would exceed [`SUB_MULT_CAP`].
    pub fn with_sub(mut self, rep: QSet, mult: QuasiCardinal) -> Self {
        if mult == 0 {
            return self;
        }
        for (existing, m) in &mut self.subs {
            if weak_ext_indist(existing, &rep) {
                *m += mult;
                assert!(*m <= SUB_MULT_CAP, "sub-quasi-set multiplicity cap exceeded");
                return self;
            }
        }
        assert!(mult <= SUB_MULT_CAP, "sub-quasi-set multiplicity cap exceeded");
        self.subs.push((rep, mult));
        self
    }

    pub fn micro_classes(&self) -> impl Iterator<Item = (&Species, QuasiCardinal)> {
        self.micro.iter().map(|(s, c)| (s, *c))
    }

    pub fn micro_count(&self, species: &Species) -> QuasiCardinal {
        self.micro.get(species).copied().unwrap_or(0)
    }

    pub fn macro_ids(&self) -> impl Iterator<Item = &MacroId> {
        self.macros.iter()
    }

    pub fn sub_classes(&self) -> &[(QSet, QuasiCardinal)] {
        &self.subs
    }

    /// Quasi-cardinal: the sum rule over the three component kinds.
    pub fn qc(&self) -> QuasiCardinal {
        self.micro.values().sum::<u64>()
            + self.macros.len() as u64
            + self.subs.iter().map(|(_, m)| m).sum::<u64>()
    }

    pub fn is_empty(&self) -> bool {
        self.qc() == 0
    }

    /// Pure: every element is a micro-atom.
    pub fn is_pure(&self) -> bool {
        self.macros.is_empty() && self.subs.is_empty()
    }

    /// True when nothing in the transitive closure is a micro-atom and
    /// every sub class has multiplicity 1; such a quasi-set is a set.
    pub fn is_classical_set(&self) -> bool {
        self.micro.is_empty()
            && self
                .subs
                .iter()
                .all(|(rep, m)| *m == 1 && rep.is_classical_set())
    }

    /// Membership up to `≡`.
    pub fn contains(&self, e: &Element) -> bool {
        match e {
            Element::Micro(s) => self.micro_count(s) > 0,
            Element::Macro(id) => self.macros.contains(id),
            Element::Collection(q) => self.subs.iter().any(|(rep, _)| weak_ext_indist(rep, q)),
        }
    }

    /// True when every `≡`-class of `self` is present in `other` with at
    /// least the same multiplicity.
    pub fn is_sub_qset_of(&self, other: &QSet) -> bool {
        self.micro
            .iter()
            .all(|(s, c)| other.micro_count(s) >= *c)
            && self.macros.is_subset(&other.macros)
            && self.subs.iter().all(|(rep, m)| {
                other
                    .subs
                    .iter()
                    .any(|(orep, om)| om >= m && weak_ext_indist(orep, rep))
            })
    }
}

/// The indistinguishability relation `≡` on elements.
pub fn indist(a: &Element, b: &Element) -> bool {
    match (a, b) {
        (Element::Micro(x), Element::Micro(y)) => x == y,
        (Element::Macro(x), Element::Macro(y)) => x == y,
        (Element::Collection(x), Element::Collection(y)) => weak_ext_indist(x, y),
        _ => false,
    }
}

/// Extensional equality. Not a formula when either argument is a
/// micro-atom; on collections it compares membership with multiplicity.
pub fn ext_eq(a: &Element, b: &Element) -> Result<bool, QsetError> {
    match (a, b) {
        (Element::Micro(_), _) | (_, Element::Micro(_)) => Err(QsetError::IllFormed),
        (Element::Macro(x), Element::Macro(y)) => Ok(x == y),
        (Element::Collection(x), Element::Collection(y)) => Ok(weak_ext_indist(x, y)),
        _ => Ok(false),
    }
}

/// `≡` decision procedure for quasi-sets: the quotients must match
/// pairwise by QSim (same class, same count), recursively on nested
/// collections.
pub fn weak_ext_indist(x: &QSet, y: &QSet) -> bool {
    if x.micro != y.micro || x.macros != y.macros || x.subs.len() != y.subs.len() {
        return false;
    }
    let mut used = vec![false; y.subs.len()];
    'outer: for (rx, mx) in &x.subs {
        for (j, (ry, my)) in y.subs.iter().enumerate() {
            if !used[j] && mx == my && weak_ext_indist(rx, ry) {
                used[j] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Weak pair `[x, y]` relative to the universe `u`: every element of `u`
/// indistinguishable from `x` or from `y`. With `x ≡ y` this is `[x]`.
pub fn weak_pair(x: &Element, y: &Element, u: &QSet) -> QSet {
    let keep = |e: &Element| indist(e, x) || indist(e, y);
    let mut out = QSet::empty();
    for (s, c) in &u.micro {
        if keep(&Element::Micro(s.clone())) {
            out = out.with_micro(s.clone(), *c);
        }
    }
    for id in &u.macros {
        if keep(&Element::Macro(id.clone())) {
            out = out.with_macro(id.clone());
        }
    }
    for (rep, m) in &u.subs {
        if keep(&Element::Collection(rep.clone())) {
            out = out.with_sub(rep.clone(), *m);
        }
    }
    out
}

/// The n-singleton `[x]_n ⊆ [x]` with quasi-cardinal `n`, relative to the
/// universe `u`. `n = 1` is the strong singleton.
pub fn n_singleton(x: &Element, n: QuasiCardinal, u: &QSet) -> Result<QSet, QsetError> {
    let species = match x {
        Element::Micro(s) => s,
        _ => return Err(QsetError::NotMicro),
    };
    let capacity = u.micro_count(species);
    if n > capacity {
        return Err(QsetError::CapacityExceeded {
            requested: n,
            capacity,
        });
    }
    Ok(QSet::empty().with_micro(species.clone(), n))
}

/// A sub-quasi-set of `q` with quasi-cardinal `beta`. Selection is
/// deterministic: species in label order, then macro ids, then sub
/// classes in stored order.
pub fn sub_qset_with_qc(q: &QSet, beta: QuasiCardinal) -> Result<QSet, QsetError> {
    let total = q.qc();
    if beta > total {
        return Err(QsetError::CapacityExceeded {
            requested: beta,
            capacity: total,
        });
    }
    let mut remaining = beta;
    let mut out = QSet::empty();
    for (s, c) in &q.micro {
        let take = remaining.min(*c);
        out = out.with_micro(s.clone(), take);
        remaining -= take;
    }
    for id in &q.macros {
        if remaining == 0 {
            break;
        }
        out = out.with_macro(id.clone());
        remaining -= 1;
    }
    for (rep, m) in &q.subs {
        let take = remaining.min(*m);
        out = out.with_sub(rep.clone(), take);
        remaining -= take;
    }
    Ok(out)
}

/// Quasi-cardinal of the power quasi-set: `2^qc(q)`, declared per axiom
/// and never materialized.
pub fn power_qc(q: &QSet) -> Result<QuasiCardinal, QsetError> {
    let n = q.qc();
    if n >= 64 {
        return Err(QsetError::Overflow(n));
    }
    Ok(1u64 << n)
}

/// All pairwise non-`≡` sub-quasi-sets of `q`. For pure single-species
/// quasi-sets this yields `qc + 1` classes, strictly fewer than the
/// declared power quasi-cardinal.
pub fn enumerate_sub_classes(q: &QSet) -> Result<Vec<QSet>, QsetError> {
    let n = q.qc();
    if n > ENUMERATION_QC_LIMIT {
        return Err(QsetError::TooLarge(n));
    }
    let mut acc = vec![QSet::empty()];
    for (s, c) in &q.micro {
        let mut next = Vec::new();
        for base in &acc {
            for take in 0..=*c {
                next.push(base.clone().with_micro(s.clone(), take));
            }
        }
        acc = next;
    }
    for id in &q.macros {
        let mut next = Vec::new();
        for base in &acc {
            next.push(base.clone());
            next.push(base.clone().with_macro(id.clone()));
        }
        acc = next;
    }
    for (rep, m) in &q.subs {
        let mut next = Vec::new();
        for base in &acc {
            for take in 0..=*m {
                next.push(base.clone().with_sub(rep.clone(), take));
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// Separation: `[t ∈ q : p(t)]`. The predicate algebra is `≡`-invariant
/// by construction, so classes are kept or dropped wholesale.
pub fn separation(q: &QSet, p: &Predicate) -> QSet {
    let mut out = QSet::empty();
    for (s, c) in &q.micro {
        if p.eval(&Element::Micro(s.clone())) {
            out = out.with_micro(s.clone(), *c);
        }
    }
    for id in &q.macros {
        if p.eval(&Element::Macro(id.clone())) {
            out = out.with_macro(id.clone());
        }
    }
    for (rep, m) in &q.subs {
        if p.eval(&Element::Collection(rep.clone())) {
            out = out.with_sub(rep.clone(), *m);
        }
    }
    out
}

/// Similar quasi-sets: every element of `x` is `≡` every element of `y`.
/// Defined on pure quasi-sets only.
pub fn similar(x: &QSet, y: &QSet) -> Result<bool, QsetError> {
    if !x.is_pure() || !y.is_pure() {
        return Err(QsetError::NotPure);
    }
    if x.is_empty() || y.is_empty() {
        return Ok(true);
    }
    Ok(x.micro.len() == 1 && y.micro.len() == 1 && x.micro.keys().eq(y.micro.keys()))
}

/// Q-Similar: similar with equal quasi-cardinality.
pub fn qsim(x: &QSet, y: &QSet) -> Result<bool, QsetError> {
    Ok(similar(x, y)? && x.qc() == y.qc())
}

/// The quotient `q/≡`: one entry per indistinguishability class with its
/// total multiplicity, in canonical order.
pub fn quotient(q: &QSet) -> Vec<(Element, QuasiCardinal)> {
    let mut out = Vec::new();
    for (s, c) in &q.micro {
        out.push((Element::Micro(s.clone()), *c));
    }
    for id in &q.macros {
        out.push((Element::Macro(id.clone()), 1));
    }
    for (rep, m) in &q.subs {
        out.push((Element::Collection(rep.clone()), *m));
    }
    out
}

/// Finite mapping required to send `≡` inputs to `≡` outputs.
#[derive(Debug, Clone)]
pub struct QuasiFunction {
    pub domain: QSet,
    pub codomain: QSet,
    pub pairs: Vec<(Element, Element)>,
}

/// Counterexample to quasi-function congruence.
#[derive(Debug, Clone)]
pub struct CongruenceViolation {
    pub input_a: Element,
    pub output_a: Element,
    pub input_b: Element,
    pub output_b: Element,
}

/// Checks the congruence invariant of a quasi-function: for every two
/// pairs with `≡` inputs the outputs must be `≡` as well.
#[allow(clippy::result_large_err)] // the Err is the counterexample payload
pub fn validate_qf(f: &QuasiFunction) -> Result<(), CongruenceViolation> {
    for (i, (in_a, out_a)) in f.pairs.iter().enumerate() {
        for (in_b, out_b) in f.pairs.iter().skip(i + 1) {
            if indist(in_a, in_b) && !indist(out_a, out_b) {
                return Err(CongruenceViolation {
                    input_a: in_a.clone(),
                    output_a: out_a.clone(),
                    input_b: in_b.clone(),
                    output_b: out_b.clone(),
                });
            }
        }
    }
    Ok(())
}
