//! Signotope assignments: one orientation bit per sorted triple.
//!
//! Also home of the two clause families every other module shares: the
//! four-point axioms and the eight convexity clauses of a 5-tuple.

use std::fmt;

use thiserror::Error;

use crate::combin::{for_each_tuple, num_triples, TripleIndex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SignotopeError {
    #[error("expected {expected} triple values for n = {n}, got {got}")]
    WrongLength { n: usize, expected: usize, got: usize },
    #[error("assignment violates {0} axiom clause(s); first: {1}")]
    Inconsistent(usize, AxiomViolation),
    #[error("malformed signotope text: {0}")]
    Parse(String),
}

/// A literal over the orientation variable of a sorted triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SigmaLit {
    pub triple: (usize, usize, usize),
    pub positive: bool,
}

const fn pos(a: usize, b: usize, c: usize) -> SigmaLit {
    SigmaLit { triple: (a, b, c), positive: true }
}

const fn neg(a: usize, b: usize, c: usize) -> SigmaLit {
    SigmaLit { triple: (a, b, c), positive: false }
}

/// The eight axiom clauses of a sorted quadruple, ordered as
/// `[1a, 1b, 2a, 2b, 3a, 3b, 4a, 4b]`.
pub fn axiom_clauses([a, b, c, d]: [usize; 4]) -> [[SigmaLit; 3]; 8] {
    [
        [pos(a, b, c), neg(a, b, d), pos(a, c, d)],
        [neg(a, b, c), pos(a, b, d), neg(a, c, d)],
        [pos(a, b, c), neg(a, c, d), pos(b, c, d)],
        [neg(a, b, c), pos(a, c, d), neg(b, c, d)],
        [pos(a, b, c), neg(a, b, d), pos(b, c, d)],
        [neg(a, b, c), pos(a, b, d), neg(b, c, d)],
        [pos(a, b, d), neg(a, c, d), pos(b, c, d)],
        [neg(a, b, d), pos(a, c, d), neg(b, c, d)],
    ]
}

/// The eight convexity clauses of a sorted 5-tuple. Each convex 5-tuple
/// falsifies exactly one of them; clause `2i` and `2i + 1` belong to case `i`.
pub fn pentagon_clauses([a, b, c, d, e]: [usize; 5]) -> [[SigmaLit; 3]; 8] {
    [
        [pos(a, b, c), pos(b, c, d), pos(c, d, e)],
        [neg(a, b, c), neg(b, c, d), neg(c, d, e)],
        [pos(a, b, c), pos(b, c, e), neg(a, d, e)],
        [neg(a, b, c), neg(b, c, e), pos(a, d, e)],
        [pos(a, b, d), pos(b, d, e), neg(a, c, e)],
        [neg(a, b, d), neg(b, d, e), pos(a, c, e)],
        [pos(a, b, e), neg(a, c, d), neg(c, d, e)],
        [neg(a, b, e), pos(a, c, d), pos(c, d, e)],
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Conjunct {
    First,
    Second,
}

/// A falsified axiom clause.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AxiomViolation {
    pub quadruple: [usize; 4],
    /// 1 through 4.
    pub axiom: u8,
    pub conjunct: Conjunct,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.quadruple;
        let part = match self.conjunct {
            Conjunct::First => 'a',
            Conjunct::Second => 'b',
        };
        write!(f, "axiom {}{} on ({a}, {b}, {c}, {d})", self.axiom, part)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConvexCase {
    CaseI,
    CaseII,
    CaseIII,
    CaseIV,
}

/// Orientation bits for all sorted triples of `n` points, in lexicographic
/// triple order.
#[derive(Clone)]
pub struct SignotopeAssignment {
    n: usize,
    values: Vec<bool>,
    index: std::sync::Arc<TripleIndex>,
}

impl fmt::Debug for SignotopeAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignotopeAssignment(n = {}, {})", self.n, self.sign_string())
    }
}

impl PartialEq for SignotopeAssignment {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.values == other.values
    }
}

impl Eq for SignotopeAssignment {}

impl SignotopeAssignment {
    pub fn from_values(n: usize, values: Vec<bool>) -> Result<Self, SignotopeError> {
        let expected = num_triples(n);
        if values.len() != expected {
            return Err(SignotopeError::WrongLength { n, expected, got: values.len() });
        }
        Ok(SignotopeAssignment { n, values, index: std::sync::Arc::new(TripleIndex::new(n)) })
    }

    pub fn all_true(n: usize) -> Self {
        Self::from_values(n, vec![true; num_triples(n)]).expect("length matches")
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> bool) -> Self {
        let mut values = Vec::with_capacity(num_triples(n));
        for_each_tuple::<3>(n, |&[a, b, c]| values.push(f(a, b, c)));
        Self::from_values(n, values).expect("length matches")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn index(&self) -> &TripleIndex {
        &self.index
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> bool {
        self.values[self.index.rank(a, b, c)]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, value: bool) {
        let r = self.index.rank(a, b, c);
        self.values[r] = value;
    }

    #[inline]
    pub fn lit(&self, l: SigmaLit) -> bool {
        self.get(l.triple.0, l.triple.1, l.triple.2) == l.positive
    }

    fn sign_string(&self) -> String {
        self.values.iter().map(|&v| if v { '+' } else { '-' }).collect()
    }

    /// Two-line text form: `n`, then one `+`/`-` per triple.
    pub fn to_text(&self) -> String {
        format!("{}\n{}\n", self.n, self.sign_string())
    }

    /// Inverse of [`to_text`](Self::to_text); the Unicode minus sign is
    /// accepted as well.
    pub fn from_text(text: &str) -> Result<Self, SignotopeError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| SignotopeError::Parse("empty input".into()))?
            .parse()
            .map_err(|_| SignotopeError::Parse("first line must be the point count".into()))?;
        let signs = lines.next().unwrap_or("");
        if lines.next().is_some() {
            return Err(SignotopeError::Parse("trailing content after sign string".into()));
        }
        let values = signs
            .chars()
            .map(|ch| match ch {
                '+' => Ok(true),
                '-' | '\u{2212}' => Ok(false),
                other => Err(SignotopeError::Parse(format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_values(n, values)
    }
}

/// Every falsified axiom clause over all sorted quadruples.
pub fn check_axioms(a: &SignotopeAssignment) -> Vec<AxiomViolation> {
    let mut out = Vec::new();
    for_each_tuple::<4>(a.n(), |&q| {
        for (i, clause) in axiom_clauses(q).iter().enumerate() {
            if !clause.iter().any(|&l| a.lit(l)) {
                out.push(AxiomViolation {
                    quadruple: q,
                    axiom: (i / 2 + 1) as u8,
                    conjunct: if i % 2 == 0 { Conjunct::First } else { Conjunct::Second },
                });
            }
        }
    });
    out
}

/// Which convex-pentagon pattern, if any, the 5-tuple matches. Cases are
/// tried in order I..IV, so on inconsistent input the first match wins.
pub fn convex_case(a: &SignotopeAssignment, t: [usize; 5]) -> Option<ConvexCase> {
    let [p, q, r, s, u] = t;
    debug_assert!(p >= 1 && p < q && q < r && r < s && s < u && u <= a.n());
    let g = |x, y, z| a.get(x, y, z);
    if g(p, q, r) == g(q, r, s) && g(q, r, s) == g(r, s, u) {
        return Some(ConvexCase::CaseI);
    }
    if g(p, q, r) == g(q, r, u) && g(q, r, u) != g(p, s, u) {
        return Some(ConvexCase::CaseII);
    }
    if g(p, q, s) == g(q, s, u) && g(q, s, u) != g(p, r, u) {
        return Some(ConvexCase::CaseIII);
    }
    if g(p, q, u) != g(p, r, s) && g(p, r, s) == g(r, s, u) {
        return Some(ConvexCase::CaseIV);
    }
    None
}

/// Convex 5-tuples of an axiom-consistent assignment.
pub fn count_convex_pentagons(a: &SignotopeAssignment) -> Result<u64, SignotopeError> {
    let violations = check_axioms(a);
    if let Some(first) = violations.first() {
        return Err(SignotopeError::Inconsistent(violations.len(), *first));
    }
    Ok(count_convex_cases(a))
}

/// Convex-case count without the consistency check.
pub fn count_convex_cases(a: &SignotopeAssignment) -> u64 {
    let mut count = 0;
    for_each_tuple::<5>(a.n(), |&t| {
        if convex_case(a, t).is_some() {
            count += 1;
        }
    });
    count
}
