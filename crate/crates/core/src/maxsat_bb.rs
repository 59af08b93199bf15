//! Exact branch-and-bound MaxSAT for weighted partial formulas.
//!
//! Depth-first search over decision variables with two-watched-literal unit
//! propagation on the hard clauses. The lower bound at a node is the soft
//! weight already falsified by the partial assignment. A soft literal whose
//! violation would reach the incumbent is fixed to its satisfying value,
//! which turns relaxed clauses back into hard ones near the bound.
//!
//! Non-unit soft clauses are relaxed with a fresh variable before search, so
//! every soft constraint the search sees is a single literal.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::encoder::{Cube, WcnfFormula};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("hard clauses are unsatisfiable")]
    HardUnsat,
    #[error("propagation budget exhausted; optimum lies in [{lower}, {}]", upper.map_or("?".to_string(), |u| u.to_string()))]
    BudgetExceeded {
        lower: u64,
        upper: Option<u64>,
        model: Option<Vec<i32>>,
        propagations: u64,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BranchOrder {
    /// Decision variables by increasing id.
    Lexicographic,
    /// Decision variables by decreasing number of hard-clause occurrences,
    /// ties by id. Much faster than id order on the pentagon formulas.
    #[default]
    Occurrences,
}

#[derive(Clone, Debug)]
pub struct SolveConfig {
    /// A known upper bound on the optimum.
    pub ub_hint: Option<u64>,
    /// `None` means unlimited.
    pub max_propagations: Option<u64>,
    pub order: BranchOrder,
    /// Try the positive phase of a decision variable first.
    pub true_first: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            ub_hint: None,
            max_propagations: Some(1_000_000_000),
            order: BranchOrder::Occurrences,
            true_first: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub optimum: u64,
    /// One literal per original variable, `1..=num_vars`.
    pub model: Vec<i32>,
    pub propagations: u64,
    pub decisions: u64,
    pub elapsed: Duration,
}

const UNASSIGNED: i8 = 0;

#[inline]
fn lit_of(dimacs: i32) -> u32 {
    let v = dimacs.unsigned_abs() - 1;
    2 * v + (dimacs < 0) as u32
}

#[inline]
fn var_of(lit: u32) -> usize {
    (lit >> 1) as usize
}

#[inline]
fn neg(lit: u32) -> u32 {
    lit ^ 1
}

struct Frame {
    trail_len: usize,
    decision: u32,
    flipped: bool,
    cost: u64,
    scan: usize,
}

/// Search state: the partial assignment, its trail, and the current cost.
struct SearchState {
    orig_vars: usize,
    value: Vec<i8>,
    clause_lits: Vec<u32>,
    clause_start: Vec<u32>,
    watches: Vec<Vec<u32>>,
    /// Weight incurred when the literal becomes true.
    penalty: Vec<u64>,
    /// Penalized literals by decreasing weight.
    penalized: Vec<(u32, u64)>,
    decision_order: Vec<usize>,
    trail: Vec<u32>,
    qhead: usize,
    cost: u64,
    ub: u64,
    propagations: u64,
    budget: Option<u64>,
    out_of_budget: bool,
    root_units: Vec<u32>,
    root_conflict: bool,
}

impl SearchState {
    fn new(f: &WcnfFormula, cfg: &SolveConfig) -> Self {
        let orig_vars = f
            .hard
            .iter()
            .chain(f.soft.iter().map(|s| &s.lits))
            .flatten()
            .map(|l| l.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
            .max(f.num_vars);
        let mut num_vars = orig_vars;
        let mut hard: Vec<Vec<i32>> = f.hard.clone();
        let mut soft_lits: Vec<(i32, u64)> = Vec::new();
        for s in &f.soft {
            match s.lits.as_slice() {
                [] => soft_lits.push((0, s.weight)),
                [l] => soft_lits.push((*l, s.weight)),
                lits => {
                    num_vars += 1;
                    let r = num_vars as i32;
                    let mut c = lits.to_vec();
                    c.push(r);
                    hard.push(c);
                    soft_lits.push((-r, s.weight));
                }
            }
        }

        let mut penalty = vec![0u64; 2 * num_vars];
        let mut base_cost = 0;
        for &(l, w) in &soft_lits {
            if l == 0 {
                base_cost += w;
            } else {
                // Soft literal l is violated when its negation is true.
                penalty[lit_of(-l) as usize] += w;
            }
        }
        let mut penalized: Vec<(u32, u64)> = penalty
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0)
            .map(|(l, &w)| (l as u32, w))
            .collect();
        penalized.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

        let mut s = SearchState {
            orig_vars,
            value: vec![UNASSIGNED; num_vars],
            clause_lits: Vec::new(),
            clause_start: vec![0],
            watches: vec![Vec::new(); 2 * num_vars],
            penalty,
            penalized,
            decision_order: Vec::new(),
            trail: Vec::with_capacity(num_vars),
            qhead: 0,
            cost: base_cost,
            ub: u64::MAX,
            propagations: 0,
            budget: cfg.max_propagations,
            out_of_budget: false,
            root_units: Vec::new(),
            root_conflict: false,
        };

        let mut occurrences = vec![0usize; num_vars];
        for clause in &hard {
            let mut lits: Vec<u32> = clause.iter().map(|&l| lit_of(l)).collect();
            lits.sort_unstable();
            lits.dedup();
            if lits.windows(2).any(|w| w[0] == neg(w[1])) {
                continue;
            }
            for &l in &lits {
                occurrences[var_of(l)] += 1;
            }
            match lits.len() {
                0 => s.root_conflict = true,
                1 => s.root_units.push(lits[0]),
                _ => {
                    let id = (s.clause_start.len() - 1) as u32;
                    s.watches[lits[0] as usize].push(id);
                    s.watches[lits[1] as usize].push(id);
                    s.clause_lits.extend_from_slice(&lits);
                    s.clause_start.push(s.clause_lits.len() as u32);
                }
            }
        }

        let soft_var: Vec<bool> = (0..num_vars)
            .map(|v| s.penalty[2 * v] > 0 || s.penalty[2 * v + 1] > 0)
            .collect();
        let mut order: Vec<usize> = (0..num_vars).filter(|&v| !soft_var[v]).collect();
        if cfg.order == BranchOrder::Occurrences {
            order.sort_by(|&a, &b| occurrences[b].cmp(&occurrences[a]).then(a.cmp(&b)));
        }
        order.extend((0..num_vars).filter(|&v| soft_var[v]));
        s.decision_order = order;
        s
    }

    #[inline]
    fn lit_value(&self, lit: u32) -> i8 {
        let v = self.value[var_of(lit)];
        if lit & 1 == 1 {
            -v
        } else {
            v
        }
    }

    /// Makes `lit` true. Returns false when the cost reaches the incumbent.
    #[inline]
    fn assign(&mut self, lit: u32) -> bool {
        self.value[var_of(lit)] = if lit & 1 == 1 { -1 } else { 1 };
        self.trail.push(lit);
        self.cost += self.penalty[lit as usize];
        self.propagations += 1;
        if let Some(b) = self.budget {
            if self.propagations >= b {
                self.out_of_budget = true;
            }
        }
        self.cost < self.ub
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let lit = self.trail.pop().expect("trail non-empty");
            self.cost -= self.penalty[lit as usize];
            self.value[var_of(lit)] = UNASSIGNED;
        }
        self.qhead = self.qhead.min(len);
    }

    /// Unit propagation to fixpoint. Returns false on conflict.
    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = neg(p);
            let mut ws = std::mem::take(&mut self.watches[false_lit as usize]);
            let mut i = 0;
            let mut j = 0;
            let mut ok = true;
            while i < ws.len() {
                let cid = ws[i];
                i += 1;
                let start = self.clause_start[cid as usize] as usize;
                let end = self.clause_start[cid as usize + 1] as usize;
                // Keep the false literal in slot 1.
                if self.clause_lits[start] == false_lit {
                    self.clause_lits.swap(start, start + 1);
                }
                let first = self.clause_lits[start];
                if self.lit_value(first) == 1 {
                    ws[j] = cid;
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in start + 2..end {
                    let l = self.clause_lits[k];
                    if self.lit_value(l) != -1 {
                        self.clause_lits.swap(start + 1, k);
                        self.watches[l as usize].push(cid);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = cid;
                j += 1;
                match self.lit_value(first) {
                    -1 => {
                        ok = false;
                        break;
                    }
                    UNASSIGNED
                        if !self.assign(first) => {
                            ok = false;
                            break;
                        }
                    _ => {}
                }
            }
            while i < ws.len() {
                ws[j] = ws[i];
                i += 1;
                j += 1;
            }
            ws.truncate(j);
            self.watches[false_lit as usize] = ws;
            if !ok {
                return false;
            }
        }
        true
    }

    /// Unit propagation plus bound-driven fixing of soft literals.
    fn propagate_all(&mut self) -> bool {
        loop {
            if !self.propagate() {
                return false;
            }
            if self.ub == u64::MAX {
                return true;
            }
            let slack = self.ub - self.cost;
            let mut fixed = false;
            for idx in 0..self.penalized.len() {
                let (bad, w) = self.penalized[idx];
                if w < slack {
                    break;
                }
                // Already true would have pushed cost to the bound.
                if self.lit_value(bad) == UNASSIGNED {
                    if !self.assign(neg(bad)) {
                        return false;
                    }
                    fixed = true;
                }
            }
            if !fixed {
                return true;
            }
        }
    }

    fn next_unassigned(&self, from: usize) -> Option<usize> {
        (from..self.decision_order.len()).find(|&i| self.value[self.decision_order[i]] == UNASSIGNED)
    }

    fn model(&self) -> Vec<i32> {
        (0..self.orig_vars)
            .map(|v| {
                let d = v as i32 + 1;
                if self.value[v] == 1 {
                    d
                } else {
                    -d
                }
            })
            .collect()
    }
}

struct SearchOutcome {
    best: Option<(u64, Vec<i32>)>,
    complete: bool,
    lower: u64,
    propagations: u64,
    decisions: u64,
    hard_unsat: bool,
}

fn search(f: &WcnfFormula, cfg: &SolveConfig, ub: u64, budget: Option<u64>) -> SearchOutcome {
    let mut st = SearchState::new(f, &SolveConfig { max_propagations: budget, ..cfg.clone() });
    st.ub = ub;
    let mut outcome = SearchOutcome {
        best: None,
        complete: true,
        lower: ub,
        propagations: 0,
        decisions: 0,
        hard_unsat: false,
    };
    let soft_var = |st: &SearchState, v: usize| st.penalty[2 * v] > 0 || st.penalty[2 * v + 1] > 0;

    // Root units are propagated without a bound so that a conflict here
    // means the hard clauses alone are unsatisfiable.
    st.ub = u64::MAX;
    let mut root_ok = !st.root_conflict;
    for u in std::mem::take(&mut st.root_units) {
        if !root_ok {
            break;
        }
        match st.lit_value(u) {
            1 => {}
            -1 => root_ok = false,
            _ => {
                st.assign(u);
            }
        }
    }
    root_ok = root_ok && st.propagate();
    outcome.propagations = st.propagations;
    if !root_ok {
        outcome.hard_unsat = true;
        outcome.lower = 0;
        return outcome;
    }
    st.ub = ub;
    if st.cost >= st.ub {
        return outcome;
    }

    let mut stack: Vec<Frame> = Vec::new();
    let mut scan = 0usize;
    let mut conflict = false;
    'outer: loop {
        if st.out_of_budget {
            outcome.complete = false;
            let pending = stack.iter().filter(|fr| !fr.flipped).map(|fr| fr.cost).min();
            let current = st.cost.min(st.ub);
            outcome.lower = pending.map_or(current, |p| p.min(current));
            break;
        }
        if !conflict && st.propagate_all() {
            match st.next_unassigned(scan) {
                None => {
                    outcome.best = Some((st.cost, st.model()));
                    st.ub = st.cost;
                }
                Some(pos) => {
                    let v = st.decision_order[pos];
                    let positive_first = if soft_var(&st, v) {
                        // Satisfying phase of the soft literal first.
                        st.penalty[2 * v] == 0
                    } else {
                        cfg.true_first
                    };
                    let lit = 2 * v as u32 + (!positive_first) as u32;
                    stack.push(Frame { trail_len: st.trail.len(), decision: lit, flipped: false, cost: st.cost, scan: pos });
                    outcome.decisions += 1;
                    scan = pos + 1;
                    conflict = !st.assign(lit);
                    continue;
                }
            }
        }
        // Backtrack to the most recent decision whose other phase is open.
        while let Some(fr) = stack.last_mut() {
            let (len, flipped, cost) = (fr.trail_len, fr.flipped, fr.cost);
            if !flipped && cost < st.ub {
                fr.flipped = true;
                let lit = neg(fr.decision);
                scan = fr.scan;
                st.undo_to(len);
                conflict = !st.assign(lit);
                continue 'outer;
            }
            st.undo_to(len);
            stack.pop();
        }
        break;
    }
    if outcome.complete {
        outcome.lower = outcome.best.as_ref().map_or(ub, |b| b.0);
    }
    outcome.propagations = st.propagations;
    outcome
}

/// Minimum falsified soft weight over assignments satisfying every hard
/// clause, with a witnessing model.
pub fn solve_exact(f: &WcnfFormula, ub_hint: Option<u64>) -> Result<Solution, SolveError> {
    solve_exact_with(f, &SolveConfig { ub_hint, ..SolveConfig::default() })
}

pub fn solve_exact_with(f: &WcnfFormula, cfg: &SolveConfig) -> Result<Solution, SolveError> {
    let start = Instant::now();
    let no_bound = f.total_soft_weight().saturating_add(1);
    let first_ub = cfg.ub_hint.map_or(no_bound, |h| h.saturating_add(1).min(no_bound));
    let mut out = search(f, cfg, first_ub, cfg.max_propagations);
    let mut propagations = out.propagations;
    let mut decisions = out.decisions;
    if out.hard_unsat {
        return Err(SolveError::HardUnsat);
    }
    if out.complete && out.best.is_none() && first_ub < no_bound {
        // The hint was below the optimum; search again without it.
        let remaining = cfg.max_propagations.map(|b| b.saturating_sub(propagations));
        let lower_from_hint = first_ub;
        out = search(f, cfg, no_bound, remaining);
        propagations += out.propagations;
        decisions += out.decisions;
        if !out.complete {
            out.lower = out.lower.max(lower_from_hint);
        }
    }
    if !out.complete {
        let (upper, model) = match out.best {
            Some((c, m)) => (Some(c), Some(m)),
            None => (None, None),
        };
        return Err(SolveError::BudgetExceeded { lower: out.lower, upper, model, propagations });
    }
    match out.best {
        Some((optimum, model)) => Ok(Solution { optimum, model, propagations, decisions, elapsed: start.elapsed() }),
        None => Err(SolveError::HardUnsat),
    }
}

#[derive(Clone, Debug)]
pub struct CubeResult {
    pub index: usize,
    pub cube: Cube,
    pub result: Result<Solution, SolveError>,
}

/// Solves every cube-restricted formula independently, in parallel over
/// `jobs` workers, returned in cube order.
pub fn solve_cubes(f: &WcnfFormula, cubes: &[Cube], cfg: &SolveConfig, jobs: usize) -> Vec<CubeResult> {
    let run = || {
        cubes
            .par_iter()
            .enumerate()
            .map(|(index, cube)| CubeResult {
                index,
                cube: cube.clone(),
                result: solve_exact_with(&f.restricted(cube), cfg),
            })
            .collect::<Vec<_>>()
    };
    match rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
        Ok(pool) => pool.install(run),
        Err(_) => run(),
    }
}

/// Minimum over cube results; an unsatisfiable cube contributes nothing.
pub fn combine_cube_results(results: &[CubeResult]) -> Result<Solution, SolveError> {
    let mut best: Option<&Solution> = None;
    let mut propagations = 0;
    for r in results {
        match &r.result {
            Ok(s) => {
                propagations += s.propagations;
                if best.is_none_or(|b| s.optimum < b.optimum) {
                    best = Some(s);
                }
            }
            Err(SolveError::HardUnsat) => {}
            Err(e) => return Err(e.clone()),
        }
    }
    best.map(|b| Solution { propagations, ..b.clone() }).ok_or(SolveError::HardUnsat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::SoftClause;

    fn wcnf(num_vars: usize, hard: Vec<Vec<i32>>, soft: Vec<(u64, Vec<i32>)>) -> WcnfFormula {
        let soft: Vec<SoftClause> = soft.into_iter().map(|(weight, lits)| SoftClause { weight, lits }).collect();
        let top = soft.iter().map(|s| s.weight).sum::<u64>() + 1;
        WcnfFormula { num_vars, hard, soft, top }
    }

    fn brute_force(f: &WcnfFormula) -> Option<u64> {
        (0u32..1 << f.num_vars)
            .filter_map(|bits| {
                let a: Vec<bool> = (0..f.num_vars).map(|i| bits >> i & 1 == 1).collect();
                f.cost(&a)
            })
            .min()
    }

    #[test]
    fn tiny_formulas_match_brute_force() {
        let cases = vec![
            wcnf(2, vec![vec![1, 2]], vec![(1, vec![-1]), (1, vec![-2])]),
            wcnf(3, vec![vec![1, 2], vec![-1, 3], vec![-2, 3]], vec![(3, vec![-3]), (1, vec![1]), (1, vec![2])]),
            wcnf(3, vec![vec![1], vec![-1, 2, 3]], vec![(2, vec![-2, -3]), (5, vec![-2]), (1, vec![3])]),
            wcnf(3, vec![], vec![(1, vec![1, 2]), (1, vec![-1]), (1, vec![-2]), (4, vec![3])]),
        ];
        for f in cases {
            let s = solve_exact(&f, None).unwrap();
            assert_eq!(Some(s.optimum), brute_force(&f));
            let a = crate::encoder::model_to_assignment(&s.model, f.num_vars);
            assert_eq!(f.cost(&a), Some(s.optimum));
            for hint in 0..4 {
                assert_eq!(solve_exact(&f, Some(hint)).unwrap().optimum, s.optimum);
            }
        }
    }

    #[test]
    fn unsatisfiable_hard_clauses() {
        let f = wcnf(1, vec![vec![1], vec![-1]], vec![(1, vec![1])]);
        assert_eq!(solve_exact(&f, None).unwrap_err(), SolveError::HardUnsat);
        let f = wcnf(2, vec![vec![1, 2], vec![-1, 2], vec![1, -2], vec![-1, -2]], vec![]);
        assert_eq!(solve_exact(&f, None).unwrap_err(), SolveError::HardUnsat);
    }

    #[test]
    fn budget_is_reported() {
        let f = crate::encoder::encode_maxsat(8, false).unwrap();
        let cfg = SolveConfig { max_propagations: Some(50), ..SolveConfig::default() };
        match solve_exact_with(&f, &cfg) {
            Err(SolveError::BudgetExceeded { lower, upper, .. }) => {
                assert!(upper.is_none_or(|u| lower <= u));
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn eight_points_need_no_convex_pentagon() {
        let f = crate::encoder::encode_maxsat(8, true).unwrap();
        let s = solve_exact(&f, None).unwrap();
        assert_eq!(s.optimum, 0);
    }
}
