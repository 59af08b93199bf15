//! SAT and MaxSAT formulas for minimizing convex pentagons, with DIMACS and
//! WCNF writers, cube splitting and model decoding.
//!
//! Variable numbering is fixed: orientation variables `1..=C(n,3)` in
//! lexicographic triple order, then relaxation variables in lexicographic
//! 5-tuple order.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::combin::{binomial, for_each_tuple, TripleIndex};
use crate::signotope::{axiom_clauses, pentagon_clauses, SigmaLit, SignotopeAssignment};

#[derive(Debug, Error)]
pub enum EncodeError {
    #[error("n = {0} is too small; at least 5 points are required")]
    TooFewPoints(usize),
    #[error("model does not assign variable {0}")]
    MissingVariable(usize),
    #[error("model literal {lit} is outside 1..={max}")]
    OutOfRange { lit: i64, max: usize },
    #[error("model assigns variable {0} both ways")]
    Contradictory(usize),
    #[error("bad splitting triple ({0}, {1}, {2}) for n = {3}")]
    BadSplit(usize, usize, usize, usize),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Deterministic variable numbering for a given point count.
#[derive(Clone, Debug)]
pub struct VarMap {
    n: usize,
    triples: TripleIndex,
    relax: bool,
    binom: Vec<u64>,
}

impl VarMap {
    pub fn new(n: usize, with_relaxation: bool) -> Self {
        let triples = TripleIndex::new(n);
        // binom[m * 6 + j] = C(m, j) for j <= 5.
        let binom = (0..=n)
            .flat_map(|m| (0..6).map(move |j| binomial(m as u64, j as u64) as u64))
            .collect();
        VarMap { n, triples, relax: with_relaxation, binom }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_sigma(&self) -> usize {
        self.triples.len()
    }

    pub fn num_relax(&self) -> usize {
        if self.relax {
            binomial(self.n as u64, 5) as usize
        } else {
            0
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_sigma() + self.num_relax()
    }

    #[inline]
    pub fn sigma(&self, a: usize, b: usize, c: usize) -> i32 {
        self.triples.rank(a, b, c) as i32 + 1
    }

    /// Relaxation variable of a sorted 5-tuple.
    pub fn relax(&self, t: [usize; 5]) -> i32 {
        assert!(self.relax, "variable map has no relaxation variables");
        // Lexicographic rank = C(n,5) - 1 - sum_i C(n - t_i, 5 - i).
        let total = self.binom[self.n * 6 + 5];
        let tail: u64 = t.iter().enumerate().map(|(i, &x)| self.binom[(self.n - x) * 6 + 5 - i]).sum();
        (self.num_sigma() as u64 + total - tail) as i32
    }

    pub fn lit(&self, l: SigmaLit) -> i32 {
        let v = self.sigma(l.triple.0, l.triple.1, l.triple.2);
        if l.positive {
            v
        } else {
            -v
        }
    }

    /// The sorted triple behind an orientation variable.
    pub fn sigma_triple(&self, var: usize) -> Option<(usize, usize, usize)> {
        (1..=self.num_sigma()).contains(&var).then(|| self.triples.unrank(var - 1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    /// Number of clauses falsified by a total assignment (`assignment[v - 1]`).
    pub fn count_falsified(&self, assignment: &[bool]) -> usize {
        self.clauses.iter().filter(|c| !clause_satisfied(c, assignment)).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoftClause {
    pub weight: u64,
    pub lits: Vec<i32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WcnfFormula {
    pub num_vars: usize,
    pub hard: Vec<Vec<i32>>,
    pub soft: Vec<SoftClause>,
    pub top: u64,
}

impl WcnfFormula {
    pub fn total_soft_weight(&self) -> u64 {
        self.soft.iter().map(|s| s.weight).sum()
    }

    /// Falsified soft weight of a total assignment, or `None` when a hard
    /// clause is falsified.
    pub fn cost(&self, assignment: &[bool]) -> Option<u64> {
        if !self.hard.iter().all(|c| clause_satisfied(c, assignment)) {
            return None;
        }
        Some(
            self.soft
                .iter()
                .filter(|s| !clause_satisfied(&s.lits, assignment))
                .map(|s| s.weight)
                .sum(),
        )
    }

    /// Copy with the cube literals appended as hard units.
    pub fn restricted(&self, cube: &Cube) -> WcnfFormula {
        let mut f = self.clone();
        f.hard.extend(cube.literals.iter().map(|&l| vec![l]));
        f
    }
}

fn clause_satisfied(clause: &[i32], assignment: &[bool]) -> bool {
    clause.iter().any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
}

/// Converts a literal list into a dense assignment over `num_vars` variables;
/// unmentioned variables default to false.
pub fn model_to_assignment(model: &[i32], num_vars: usize) -> Vec<bool> {
    let mut out = vec![false; num_vars];
    for &l in model {
        let v = l.unsigned_abs() as usize;
        if v >= 1 && v <= num_vars {
            out[v - 1] = l > 0;
        }
    }
    out
}

fn check_n(n: usize) -> Result<(), EncodeError> {
    if n < 5 {
        Err(EncodeError::TooFewPoints(n))
    } else {
        Ok(())
    }
}

fn push_axioms(vm: &VarMap, out: &mut Vec<Vec<i32>>) {
    for_each_tuple::<4>(vm.n(), |&q| {
        for clause in axiom_clauses(q) {
            out.push(clause.iter().map(|&l| vm.lit(l)).collect());
        }
    });
}

/// Signotope axioms (optional) followed by the eight convexity clauses of
/// every 5-tuple, over orientation variables only.
pub fn encode_sat(n: usize, with_axioms: bool) -> Result<CnfFormula, EncodeError> {
    check_n(n)?;
    let vm = VarMap::new(n, false);
    let mut clauses = Vec::new();
    if with_axioms {
        push_axioms(&vm, &mut clauses);
    }
    for_each_tuple::<5>(n, |&t| {
        for clause in pentagon_clauses(t) {
            clauses.push(clause.iter().map(|&l| vm.lit(l)).collect());
        }
    });
    Ok(CnfFormula { num_vars: vm.num_vars(), clauses })
}

/// Hard: axioms, convexity clauses relaxed by `r_abcde`, and optionally the
/// symmetry units. Soft: `-r_abcde` with weight 1 for every 5-tuple.
pub fn encode_maxsat(n: usize, symmetry: bool) -> Result<WcnfFormula, EncodeError> {
    check_n(n)?;
    let vm = VarMap::new(n, true);
    let mut hard = Vec::new();
    push_axioms(&vm, &mut hard);
    let mut soft = Vec::new();
    for_each_tuple::<5>(n, |&t| {
        let r = vm.relax(t);
        for clause in pentagon_clauses(t) {
            let mut c: Vec<i32> = clause.iter().map(|&l| vm.lit(l)).collect();
            c.push(r);
            hard.push(c);
        }
        soft.push(SoftClause { weight: 1, lits: vec![-r] });
    });
    if symmetry {
        hard.extend(symmetry_units(n));
    }
    let top = soft.len() as u64 + 1;
    Ok(WcnfFormula { num_vars: vm.num_vars(), hard, soft, top })
}

/// Positive units `sigma(1, b, c)` for all `1 < b < c <= n`.
pub fn symmetry_units(n: usize) -> Vec<Vec<i32>> {
    let vm = VarMap::new(n, false);
    let mut out = Vec::new();
    for b in 2..=n {
        for c in b + 1..=n {
            out.push(vec![vm.sigma(1, b, c)]);
        }
    }
    out
}

/// A conjunction of orientation literals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cube {
    pub literals: Vec<i32>,
}

/// Default splitting triples `(3,4,5), (5,6,7), ...` while they fit in `1..=n`.
pub fn default_split(n: usize) -> Vec<(usize, usize, usize)> {
    (1..).map(|i| (2 * i + 1, 2 * i + 2, 2 * i + 3)).take_while(|t| t.2 <= n).collect()
}

pub fn make_cubes(n: usize) -> Result<Vec<Cube>, EncodeError> {
    check_n(n)?;
    make_cubes_with(n, &default_split(n))
}

/// All `2^c` sign patterns over the given splitting triples. Pattern `p`
/// negates the `i`-th triple iff bit `i` of `p` is set.
pub fn make_cubes_with(n: usize, split: &[(usize, usize, usize)]) -> Result<Vec<Cube>, EncodeError> {
    let vm = VarMap::new(n, false);
    let vars = split
        .iter()
        .map(|&(a, b, c)| {
            if 1 <= a && a < b && b < c && c <= n {
                Ok(vm.sigma(a, b, c))
            } else {
                Err(EncodeError::BadSplit(a, b, c, n))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let cubes = (0u64..1 << vars.len())
        .map(|p| Cube {
            literals: vars
                .iter()
                .enumerate()
                .map(|(i, &v)| if p >> i & 1 == 1 { -v } else { v })
                .collect(),
        })
        .collect();
    Ok(cubes)
}

/// Reads the orientation variables of a model back into an assignment.
/// Relaxation variables and anything above `C(n,3)` are ignored.
pub fn decode_model(n: usize, model: &[i32]) -> Result<SignotopeAssignment, EncodeError> {
    let m = crate::combin::num_triples(n);
    let mut values: Vec<Option<bool>> = vec![None; m];
    for &lit in model {
        let v = lit.unsigned_abs() as usize;
        if lit == 0 {
            return Err(EncodeError::OutOfRange { lit: 0, max: m });
        }
        if v > m {
            continue;
        }
        match values[v - 1] {
            Some(old) if old != (lit > 0) => return Err(EncodeError::Contradictory(v)),
            _ => values[v - 1] = Some(lit > 0),
        }
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or(EncodeError::MissingVariable(i + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SignotopeAssignment::from_values(n, values).expect("length matches"))
}

/// Like [`decode_model`] but rejects literals above the formula's variable count.
pub fn decode_model_checked(n: usize, num_vars: usize, model: &[i32]) -> Result<SignotopeAssignment, EncodeError> {
    if let Some(&bad) = model.iter().find(|l| l.unsigned_abs() as usize > num_vars) {
        return Err(EncodeError::OutOfRange { lit: bad as i64, max: num_vars });
    }
    decode_model(n, model)
}

fn write_clause<W: Write>(w: &mut W, prefix: Option<&str>, lits: &[i32]) -> io::Result<()> {
    if let Some(p) = prefix {
        write!(w, "{p} ")?;
    }
    for l in lits {
        write!(w, "{l} ")?;
    }
    writeln!(w, "0")
}

pub fn write_dimacs<W: Write>(f: &CnfFormula, mut w: W) -> io::Result<()> {
    writeln!(w, "p cnf {} {}", f.num_vars, f.clauses.len())?;
    for c in &f.clauses {
        write_clause(&mut w, None, c)?;
    }
    w.flush()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WcnfStyle {
    /// `p wcnf <vars> <clauses> <top>` header, hard clauses weighted by top.
    #[default]
    Classic,
    /// Header-less format with `h`-prefixed hard clauses.
    Modern,
}

pub fn write_wcnf<W: Write>(f: &WcnfFormula, mut w: W, style: WcnfStyle) -> io::Result<()> {
    let top = f.top.to_string();
    let hard_prefix = match style {
        WcnfStyle::Classic => {
            writeln!(w, "p wcnf {} {} {}", f.num_vars, f.hard.len() + f.soft.len(), f.top)?;
            top.as_str()
        }
        WcnfStyle::Modern => "h",
    };
    for c in &f.hard {
        write_clause(&mut w, Some(hard_prefix), c)?;
    }
    for s in &f.soft {
        write_clause(&mut w, Some(&s.weight.to_string()), &s.lits)?;
    }
    w.flush()
}

/// Cube list, one `a <lit>* 0` line per cube.
pub fn write_cubes<W: Write>(cubes: &[Cube], mut w: W) -> io::Result<()> {
    for c in cubes {
        write_clause(&mut w, Some("a"), &c.literals)?;
    }
    w.flush()
}

pub fn wcnf_bytes(f: &WcnfFormula, style: WcnfStyle) -> Vec<u8> {
    let mut out = Vec::new();
    write_wcnf(f, &mut out, style).expect("writing to memory");
    out
}

pub fn dimacs_bytes(f: &CnfFormula) -> Vec<u8> {
    let mut out = Vec::new();
    write_dimacs(f, &mut out).expect("writing to memory");
    out
}

fn parse_lits(tokens: &[&str], line: usize) -> Result<Vec<i32>, EncodeError> {
    let err = |msg: String| EncodeError::Parse { line, msg };
    let (last, body) = tokens.split_last().ok_or_else(|| err("empty clause line".into()))?;
    if *last != "0" {
        return Err(err("clause must end with 0".into()));
    }
    body.iter()
        .map(|t| match t.parse::<i32>() {
            Ok(0) => Err(err("literal 0 inside clause".into())),
            Ok(l) => Ok(l),
            Err(_) => Err(err(format!("bad literal {t:?}"))),
        })
        .collect()
}

/// Reads classic (`p wcnf`) or modern (`h`-prefixed) WCNF.
pub fn parse_wcnf<R: BufRead>(r: R) -> Result<WcnfFormula, EncodeError> {
    let mut header: Option<(usize, u64)> = None;
    let mut hard = Vec::new();
    let mut soft = Vec::new();
    let mut max_var = 0usize;
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        let tokens: Vec<&str> = t.split_whitespace().collect();
        if tokens[0] == "p" {
            if tokens.len() < 4 || tokens[1] != "wcnf" {
                return Err(EncodeError::Parse { line: lineno, msg: "expected `p wcnf` header".into() });
            }
            let nv = tokens[2].parse().map_err(|_| EncodeError::Parse { line: lineno, msg: "bad var count".into() })?;
            let top = match tokens.get(4) {
                Some(t) => t.parse().map_err(|_| EncodeError::Parse { line: lineno, msg: "bad top".into() })?,
                None => u64::MAX,
            };
            header = Some((nv, top));
            continue;
        }
        let (weight, lits) = if tokens[0] == "h" {
            (None, parse_lits(&tokens[1..], lineno)?)
        } else {
            let w: u64 = tokens[0]
                .parse()
                .map_err(|_| EncodeError::Parse { line: lineno, msg: format!("bad weight {:?}", tokens[0]) })?;
            let lits = parse_lits(&tokens[1..], lineno)?;
            match header {
                Some((_, top)) if w >= top => (None, lits),
                _ => (Some(w), lits),
            }
        };
        max_var = max_var.max(lits.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0));
        match weight {
            None => hard.push(lits),
            Some(w) => soft.push(SoftClause { weight: w, lits }),
        }
    }
    let num_vars = header.map_or(max_var, |(nv, _)| nv.max(max_var));
    let total: u64 = soft.iter().map(|s| s.weight).sum();
    let top = match header {
        Some((_, top)) if top != u64::MAX => top,
        _ => total + 1,
    };
    Ok(WcnfFormula { num_vars, hard, soft, top })
}

pub fn parse_dimacs<R: BufRead>(r: R) -> Result<CnfFormula, EncodeError> {
    let mut num_vars = 0;
    let mut clauses = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        let tokens: Vec<&str> = t.split_whitespace().collect();
        if tokens[0] == "p" {
            num_vars = tokens
                .get(2)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| EncodeError::Parse { line: i + 1, msg: "bad header".into() })?;
            continue;
        }
        clauses.push(parse_lits(&tokens, i + 1)?);
    }
    Ok(CnfFormula { num_vars, clauses })
}

/// Reads solver output or a bare literal list: `v` lines and plain integer
/// lines are collected, `s`/`o`/`c` lines skipped, zeros dropped.
pub fn parse_model<R: BufRead>(r: R) -> Result<Vec<i32>, EncodeError> {
    let mut lits = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        let body = match t.split_whitespace().next() {
            None => continue,
            Some("s" | "o" | "c") => continue,
            Some("v") => &t[1..],
            Some(_) => t,
        };
        for tok in body.split_whitespace() {
            let l: i32 = tok
                .parse()
                .map_err(|_| EncodeError::Parse { line: i + 1, msg: format!("bad literal {tok:?}") })?;
            if l != 0 {
                lits.push(l);
            }
        }
    }
    Ok(lits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sat_sizes() {
        let f = encode_sat(5, true).unwrap();
        assert_eq!((f.num_vars, f.clauses.len()), (10, 48));
        let f = encode_sat(9, true).unwrap();
        assert_eq!((f.num_vars, f.clauses.len()), (84, 2016));
        let f = encode_sat(9, false).unwrap();
        assert_eq!((f.num_vars, f.clauses.len()), (84, 1008));
        assert!(matches!(encode_sat(4, true), Err(EncodeError::TooFewPoints(4))));
        assert!(matches!(encode_maxsat(3, true), Err(EncodeError::TooFewPoints(3))));
    }

    #[test]
    fn maxsat_sizes() {
        for (n, vars, hard, soft, sym) in [(9, 210, 2016, 126, 28), (11, 627, 6336, 462, 45), (13, 1573, 16016, 1287, 66)] {
            let f = encode_maxsat(n, true).unwrap();
            assert_eq!(f.num_vars, vars);
            assert_eq!(f.hard.len(), hard + sym);
            assert_eq!(f.soft.len(), soft);
            assert_eq!(symmetry_units(n).len(), sym);
            assert_eq!(f.top, soft as u64 + 1);
            assert!(f.soft.iter().all(|s| s.weight == 1 && s.lits.len() == 1 && s.lits[0] < 0));
        }
        assert_eq!(symmetry_units(5).len(), 6);
    }

    #[test]
    fn variable_numbering() {
        let vm = VarMap::new(6, true);
        assert_eq!(vm.sigma(1, 2, 3), 1);
        assert_eq!(vm.sigma(4, 5, 6), 20);
        assert_eq!(vm.relax([1, 2, 3, 4, 5]), 21);
        assert_eq!(vm.relax([2, 3, 4, 5, 6]), 26);
        assert_eq!(vm.num_vars(), 26);
        assert_eq!(vm.sigma_triple(2), Some((1, 2, 4)));
        assert_eq!(vm.sigma_triple(21), None);
        let vm = VarMap::new(9, true);
        let mut next = 85;
        for_each_tuple::<5>(9, |&t| {
            assert_eq!(vm.relax(t), next);
            next += 1;
        });
        assert_eq!(next, 211);
    }

    #[test]
    fn cubes() {
        for (n, vars) in [(9, 3), (11, 4), (13, 5), (15, 6), (10, 3)] {
            let cubes = make_cubes(n).unwrap();
            assert_eq!(cubes.len(), 1 << vars);
            assert!(cubes.iter().all(|c| c.literals.len() == vars));
        }
        let vm = VarMap::new(9, false);
        let cubes = make_cubes(9).unwrap();
        assert_eq!(cubes[0].literals, vec![vm.sigma(3, 4, 5), vm.sigma(5, 6, 7), vm.sigma(7, 8, 9)]);
        assert_eq!(cubes[5].literals, vec![-vm.sigma(3, 4, 5), vm.sigma(5, 6, 7), -vm.sigma(7, 8, 9)]);
        assert!(matches!(make_cubes_with(6, &[(1, 2, 7)]), Err(EncodeError::BadSplit(..))));
        let mut out = Vec::new();
        write_cubes(&cubes[..2], &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "a 50 75 84 0\na -50 75 84 0\n");
    }

    #[test]
    fn headers() {
        let text = String::from_utf8(dimacs_bytes(&encode_sat(5, true).unwrap())).unwrap();
        assert!(text.starts_with("p cnf 10 48\n"));
        let f = encode_maxsat(9, true).unwrap();
        let text = String::from_utf8(wcnf_bytes(&f, WcnfStyle::Classic)).unwrap();
        assert!(text.starts_with("p wcnf 210 2170 127\n"));
        assert_eq!(text.lines().count(), 2171);
        assert!(text.ends_with("1 -210 0\n"));
        let modern = String::from_utf8(wcnf_bytes(&f, WcnfStyle::Modern)).unwrap();
        assert!(modern.starts_with("h "));
        assert_eq!(wcnf_bytes(&f, WcnfStyle::Classic), wcnf_bytes(&encode_maxsat(9, true).unwrap(), WcnfStyle::Classic));
    }

    #[test]
    fn parse_roundtrip() {
        let f = encode_maxsat(6, true).unwrap();
        for style in [WcnfStyle::Classic, WcnfStyle::Modern] {
            let back = parse_wcnf(&wcnf_bytes(&f, style)[..]).unwrap();
            assert_eq!(back, f);
        }
        let c = encode_sat(6, false).unwrap();
        assert_eq!(parse_dimacs(&dimacs_bytes(&c)[..]).unwrap(), c);
        assert!(parse_wcnf(&b"p wcnf 2 1 3\n3 1 2\n"[..]).is_err());
    }

    #[test]
    fn model_decoding() {
        let all: Vec<i32> = (1..=20).collect();
        assert_eq!(decode_model(6, &all).unwrap(), SignotopeAssignment::all_true(6));
        assert!(matches!(decode_model(6, &all[..19]), Err(EncodeError::MissingVariable(20))));
        let mut contradictory = all.clone();
        contradictory.push(-3);
        assert!(matches!(decode_model(6, &contradictory), Err(EncodeError::Contradictory(3))));
        assert!(matches!(decode_model_checked(6, 20, &[21]), Err(EncodeError::OutOfRange { .. })));
        let parsed = parse_model(&b"c comment\ns OPTIMUM FOUND\no 1\nv 1 -2 3\nv -4 0\n"[..]).unwrap();
        assert_eq!(parsed, vec![1, -2, 3, -4]);
        assert!(parse_model(&b"v 1 x 0\n"[..]).is_err());
    }
}
