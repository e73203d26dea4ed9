use super::{Element, MacroId, QuasiCardinal, Species};

/// Separation predicates form a closed algebra whose atoms cannot
/// distinguish `≡` elements, so every predicate is `≡`-invariant by
/// construction. Arbitrary host-language closures are deliberately not
/// accepted here.
#[derive(Debug, Clone)]
pub enum Predicate {
    True,
    False,
    SpeciesIs(Species),
    MacroIdIs(MacroId),
    IsCollection,
    /// True for a collection with exactly this quasi-cardinal.
    QcEquals(QuasiCardinal),
    /// True for a collection with quasi-cardinal at most this value.
    QcAtMost(QuasiCardinal),
    And(Box<Predicate>, Box<Predicate>),
    Or(Box<Predicate>, Box<Predicate>),
    Not(Box<Predicate>),
}

impl Predicate {
    pub fn eval(&self, e: &Element) -> bool {
        match self {
            Predicate::True => true,
            Predicate::False => false,
            Predicate::SpeciesIs(s) => matches!(e, Element::Micro(t) if t == s),
            Predicate::MacroIdIs(id) => matches!(e, Element::Macro(m) if m == id),
            Predicate::IsCollection => matches!(e, Element::Collection(_)),
            Predicate::QcEquals(n) => matches!(e, Element::Collection(q) if q.qc() == *n),
            Predicate::QcAtMost(n) => matches!(e, Element::Collection(q) if q.qc() <= *n),
            Predicate::And(a, b) => a.eval(e) && b.eval(e),
            Predicate::Or(a, b) => a.eval(e) || b.eval(e),
            Predicate::Not(a) => !a.eval(e),
        }
    }
}
