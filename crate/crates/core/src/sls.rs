//! Clause-weighting local search (DDFW) for the pentagon formulas.
//!
//! The search keeps a total assignment of the orientation variables and a
//! weight per clause. It greedily flips variables that lower the weighted
//! cost; on a local minimum it moves weight from satisfied clauses to the
//! falsified clauses next to them, which reshapes the landscape instead of
//! randomizing the assignment. The raw (unweighted) falsified count of the
//! best assignment seen is what gets reported.

use std::time::{Duration, Instant};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::encoder::{encode_sat, CnfFormula, EncodeError};
use crate::signotope::{check_axioms, SignotopeAssignment};

#[derive(Clone, Debug, PartialEq)]
pub struct SlsConfig {
    pub seed: u64,
    pub max_flips: u64,
    /// Fresh random assignment and weights every this many flips.
    pub restart_interval: u64,
    pub include_axioms: bool,
    pub init_weight: u64,
    /// Weight moved from a donor heavier than `init_weight`; lighter donors
    /// give 1.
    pub quantum: u64,
    /// Probability of taking a zero-gain flip at a local minimum.
    pub sideways_prob: f64,
    /// Stop as soon as the best count is at most this.
    pub target: Option<u64>,
    /// Emit progress every this many flips.
    pub progress_interval: Option<u64>,
    /// Wall-clock cutoff. Runs that hit it are not reproducible.
    pub time_limit: Option<Duration>,
    /// Keep the best assignment of every restart period.
    pub harvest_restarts: bool,
}

impl Default for SlsConfig {
    fn default() -> Self {
        SlsConfig {
            seed: 0,
            max_flips: 10_000_000,
            restart_interval: 100_000,
            include_axioms: true,
            init_weight: 8,
            quantum: 2,
            sideways_prob: 0.15,
            target: None,
            progress_interval: None,
            time_limit: None,
            harvest_restarts: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SlsResult {
    pub n: usize,
    pub seed: u64,
    pub best_falsified: u64,
    pub best_assignment: SignotopeAssignment,
    /// Flip count at which the best was first reached.
    pub best_at_flip: u64,
    pub flips_used: u64,
    pub restarts: u64,
    pub wall_time: Duration,
    /// `(flip, best)` each time the best improved.
    pub trace: Vec<(u64, u64)>,
    /// Best assignment of each restart period, when requested.
    pub restart_bests: Vec<(u64, SignotopeAssignment)>,
    /// Axiom clauses falsified by the best assignment.
    pub axiom_violations: usize,
}

/// JSON summary line printed at the end of a run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlsSummary {
    pub n: usize,
    pub best: u64,
    pub flips: u64,
    pub restarts: u64,
    pub seed: u64,
}

impl SlsResult {
    pub fn summary(&self) -> SlsSummary {
        SlsSummary { n: self.n, best: self.best_falsified, flips: self.flips_used, restarts: self.restarts, seed: self.seed }
    }
}

/// Vector with O(1) insert, remove and membership.
struct IndexedSet {
    items: Vec<u32>,
    pos: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl IndexedSet {
    fn new(capacity: usize) -> Self {
        IndexedSet { items: Vec::new(), pos: vec![ABSENT; capacity] }
    }

    fn insert(&mut self, x: u32) {
        if self.pos[x as usize] == ABSENT {
            self.pos[x as usize] = self.items.len() as u32;
            self.items.push(x);
        }
    }

    fn remove(&mut self, x: u32) {
        let p = self.pos[x as usize];
        if p != ABSENT {
            let last = self.items.pop().expect("non-empty");
            if last != x {
                self.items[p as usize] = last;
                self.pos[last as usize] = p;
            }
            self.pos[x as usize] = ABSENT;
        }
    }

    fn clear(&mut self) {
        for &x in &self.items {
            self.pos[x as usize] = ABSENT;
        }
        self.items.clear();
    }

    fn len(&self) -> usize {
        self.items.len()
    }
}

struct Ddfw<'a> {
    cfg: &'a SlsConfig,
    num_vars: usize,
    /// Literal as `(var, positive)`, flattened.
    lits: Vec<(u32, bool)>,
    start: Vec<u32>,
    /// Clause ids per variable.
    occ: Vec<Vec<u32>>,
    value: Vec<bool>,
    weight: Vec<u64>,
    true_count: Vec<u32>,
    /// XOR of the variables of the true literals; the critical variable when
    /// exactly one literal is true.
    crit: Vec<u32>,
    score: Vec<i64>,
    falsified: IndexedSet,
    improving: IndexedSet,
    rng: ChaCha8Rng,
}

impl<'a> Ddfw<'a> {
    fn new(f: &CnfFormula, cfg: &'a SlsConfig) -> Self {
        let num_vars = f.num_vars;
        let mut lits = Vec::new();
        let mut start = vec![0u32];
        let mut occ = vec![Vec::new(); num_vars];
        for (cid, clause) in f.clauses.iter().enumerate() {
            for &l in clause {
                let v = l.unsigned_abs() - 1;
                lits.push((v, l > 0));
                occ[v as usize].push(cid as u32);
            }
            start.push(lits.len() as u32);
        }
        let m = f.clauses.len();
        Ddfw {
            cfg,
            num_vars,
            lits,
            start,
            occ,
            value: vec![false; num_vars],
            weight: vec![cfg.init_weight.max(1); m],
            true_count: vec![0; m],
            crit: vec![0; m],
            score: vec![0; num_vars],
            falsified: IndexedSet::new(m),
            improving: IndexedSet::new(num_vars),
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        }
    }

    fn clause(&self, c: usize) -> &[(u32, bool)] {
        &self.lits[self.start[c] as usize..self.start[c + 1] as usize]
    }

    fn touch(&mut self, v: u32) {
        if self.score[v as usize] > 0 {
            self.improving.insert(v);
        } else {
            self.improving.remove(v);
        }
    }

    /// Random assignment, initial weights, and scores from scratch.
    fn reset(&mut self) {
        for v in 0..self.num_vars {
            self.value[v] = self.rng.random_bool(0.5);
        }
        self.weight.fill(self.cfg.init_weight.max(1));
        self.score.fill(0);
        self.falsified.clear();
        self.improving.clear();
        for c in 0..self.weight.len() {
            let mut count = 0;
            let mut crit = 0;
            for &(v, pos) in self.clause(c) {
                if self.value[v as usize] == pos {
                    count += 1;
                    crit ^= v;
                }
            }
            self.true_count[c] = count;
            self.crit[c] = crit;
            let w = self.weight[c] as i64;
            match count {
                0 => {
                    self.falsified.insert(c as u32);
                    for i in self.start[c]..self.start[c + 1] {
                        let v = self.lits[i as usize].0;
                        self.score[v as usize] += w;
                    }
                }
                1 => self.score[crit as usize] -= w,
                _ => {}
            }
        }
        for v in 0..self.num_vars as u32 {
            self.touch(v);
        }
    }

    fn flip(&mut self, v: u32) {
        let new_value = !self.value[v as usize];
        self.value[v as usize] = new_value;
        for k in 0..self.occ[v as usize].len() {
            let c = self.occ[v as usize][k] as usize;
            let w = self.weight[c] as i64;
            let (s, e) = (self.start[c] as usize, self.start[c + 1] as usize);
            // A variable may occur once per clause in these formulas, but be
            // safe against duplicates by handling each occurrence.
            for i in s..e {
                let (u, pos) = self.lits[i];
                if u != v {
                    continue;
                }
                if pos == new_value {
                    match self.true_count[c] {
                        0 => {
                            self.falsified.remove(c as u32);
                            for j in s..e {
                                let x = self.lits[j].0;
                                self.score[x as usize] -= w;
                                self.touch(x);
                            }
                            self.score[v as usize] -= w;
                        }
                        1 => {
                            let x = self.crit[c];
                            self.score[x as usize] += w;
                            self.touch(x);
                        }
                        _ => {}
                    }
                    self.true_count[c] += 1;
                    self.crit[c] ^= v;
                } else {
                    self.true_count[c] -= 1;
                    self.crit[c] ^= v;
                    match self.true_count[c] {
                        0 => {
                            self.falsified.insert(c as u32);
                            self.score[v as usize] += w;
                            for j in s..e {
                                let x = self.lits[j].0;
                                self.score[x as usize] += w;
                                self.touch(x);
                            }
                        }
                        1 => {
                            let x = self.crit[c];
                            self.score[x as usize] -= w;
                            self.touch(x);
                        }
                        _ => {}
                    }
                }
            }
        }
        self.touch(v);
    }

    /// Highest positive gain, ties broken uniformly.
    fn pick_improving(&mut self) -> Option<u32> {
        let mut best = 0i64;
        let mut count = 0u32;
        let mut choice = None;
        for i in 0..self.improving.len() {
            let v = self.improving.items[i];
            let s = self.score[v as usize];
            if s > best {
                best = s;
                count = 1;
                choice = Some(v);
            } else if s == best {
                count += 1;
                if self.rng.random_range(0..count) == 0 {
                    choice = Some(v);
                }
            }
        }
        choice
    }

    fn pick_sideways(&mut self) -> Option<u32> {
        let mut candidates = Vec::new();
        for &c in &self.falsified.items {
            for &(v, _) in self.clause(c as usize) {
                if self.score[v as usize] == 0 {
                    candidates.push(v);
                }
            }
        }
        candidates.choose(&mut self.rng).copied()
    }

    fn move_weight(&mut self, from: usize, to: usize, amount: u64) {
        let d = amount as i64;
        self.weight[from] -= amount;
        if self.true_count[from] == 1 {
            let x = self.crit[from];
            self.score[x as usize] += d;
            self.touch(x);
        }
        self.weight[to] += amount;
        for i in self.start[to]..self.start[to + 1] {
            let x = self.lits[i as usize].0;
            self.score[x as usize] += d;
            self.touch(x);
        }
    }

    /// Each falsified clause takes weight from its heaviest satisfied
    /// neighbour, or from a random satisfied clause if no neighbour can give.
    fn redistribute(&mut self) {
        let targets = self.falsified.items.clone();
        let init = self.cfg.init_weight.max(1);
        for c in targets {
            let c = c as usize;
            let mut donor = None;
            let mut donor_w = 0;
            for &(v, _) in self.clause(c) {
                for &d in &self.occ[v as usize] {
                    let d = d as usize;
                    if self.true_count[d] > 0 && self.weight[d] > donor_w {
                        donor_w = self.weight[d];
                        donor = Some(d);
                    }
                }
            }
            if donor_w < init {
                donor = None;
                let m = self.weight.len();
                for _ in 0..32 {
                    let d = self.rng.random_range(0..m);
                    if self.true_count[d] > 0 && self.weight[d] >= init {
                        donor = Some(d);
                        donor_w = self.weight[d];
                        break;
                    }
                }
            }
            let Some(d) = donor else { continue };
            let amount = if donor_w > init { self.cfg.quantum.min(donor_w - 1) } else { 1 };
            if amount > 0 && donor_w > amount {
                self.move_weight(d, c, amount);
            }
        }
    }
}

fn to_assignment(n: usize, values: &[bool]) -> SignotopeAssignment {
    SignotopeAssignment::from_values(n, values.to_vec()).expect("one value per triple")
}

/// Runs the local search on `encode_sat(n, cfg.include_axioms)`.
pub fn sls_minimize(n: usize, cfg: &SlsConfig) -> Result<SlsResult, EncodeError> {
    sls_minimize_with_progress(n, cfg, &mut |_, _| {})
}

/// As [`sls_minimize`], calling `progress(flips, best)` every
/// `cfg.progress_interval` flips.
pub fn sls_minimize_with_progress(
    n: usize,
    cfg: &SlsConfig,
    progress: &mut dyn FnMut(u64, u64),
) -> Result<SlsResult, EncodeError> {
    let formula = encode_sat(n, cfg.include_axioms)?;
    Ok(run_on(n, &formula, cfg, progress))
}

fn run_on(n: usize, formula: &CnfFormula, cfg: &SlsConfig, progress: &mut dyn FnMut(u64, u64)) -> SlsResult {
    let started = Instant::now();
    let mut s = Ddfw::new(formula, cfg);
    s.reset();
    let mut best = s.falsified.len() as u64;
    let mut best_values = s.value.clone();
    let mut best_at_flip = 0;
    let mut trace = vec![(0, best)];
    let mut restart_bests = Vec::new();
    let mut period_best = best;
    let mut period_values = s.value.clone();
    let mut flips = 0u64;
    let mut restarts = 0u64;
    let restart_interval = cfg.restart_interval.max(1);
    let reached = |b: u64| cfg.target.is_some_and(|t| b <= t);

    while flips < cfg.max_flips && !reached(best) {
        if flips > 0 && flips.is_multiple_of(restart_interval) {
            if cfg.harvest_restarts {
                restart_bests.push((period_best, to_assignment(n, &period_values)));
            }
            s.reset();
            restarts += 1;
            period_best = s.falsified.len() as u64;
            period_values.copy_from_slice(&s.value);
        }
        if s.falsified.len() == 0 {
            break;
        }
        let v = match s.pick_improving() {
            Some(v) => Some(v),
            None if s.rng.random_bool(cfg.sideways_prob) => s.pick_sideways(),
            None => None,
        };
        match v {
            Some(v) => {
                s.flip(v);
                flips += 1;
            }
            None => {
                s.redistribute();
                continue;
            }
        }
        let current = s.falsified.len() as u64;
        if current < period_best {
            period_best = current;
            if cfg.harvest_restarts {
                period_values.copy_from_slice(&s.value);
            }
        }
        if current < best {
            best = current;
            best_values.copy_from_slice(&s.value);
            best_at_flip = flips;
            trace.push((flips, best));
        }
        if let Some(every) = cfg.progress_interval {
            if every > 0 && flips.is_multiple_of(every) {
                progress(flips, best);
            }
        }
        if let Some(limit) = cfg.time_limit {
            if flips.is_multiple_of(1024) && started.elapsed() >= limit {
                break;
            }
        }
    }
    if cfg.harvest_restarts {
        restart_bests.push((period_best, to_assignment(n, &period_values)));
    }
    let best_assignment = to_assignment(n, &best_values);
    let axiom_violations = check_axioms(&best_assignment).len();
    SlsResult {
        n,
        seed: cfg.seed,
        best_falsified: best,
        best_assignment,
        best_at_flip,
        flips_used: flips,
        restarts,
        wall_time: started.elapsed(),
        trace,
        restart_bests,
        axiom_violations,
    }
}

/// How a portfolio spreads its effort and harvests assignments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PortfolioMode {
    /// One run per seed; the harvest is each run's best assignment.
    DistinctSeeds,
    /// One run with the first seed; the harvest is the best assignment of
    /// each restart period.
    DistinctRestarts,
}

#[derive(Clone, Debug)]
pub struct PortfolioResult {
    pub mode: PortfolioMode,
    /// Runs sorted by seed.
    pub runs: Vec<SlsResult>,
    /// Index into `runs` of the best run (lowest count, then lowest seed).
    pub best: usize,
    pub harvest: Vec<(u64, SignotopeAssignment)>,
}

impl PortfolioResult {
    pub fn best_run(&self) -> &SlsResult {
        &self.runs[self.best]
    }
}

/// Runs a seed portfolio over `jobs` workers. The formula is built once and
/// shared read-only.
pub fn sls_portfolio(
    n: usize,
    cfg: &SlsConfig,
    seeds: &[u64],
    mode: PortfolioMode,
    jobs: usize,
) -> Result<PortfolioResult, EncodeError> {
    let formula = encode_sat(n, cfg.include_axioms)?;
    let seeds: Vec<u64> = match mode {
        PortfolioMode::DistinctSeeds => {
            let mut s = seeds.to_vec();
            s.sort_unstable();
            s.dedup();
            s
        }
        PortfolioMode::DistinctRestarts => seeds.iter().copied().min().into_iter().collect(),
    };
    let run = |seed: u64| {
        let c = SlsConfig { seed, harvest_restarts: mode == PortfolioMode::DistinctRestarts, ..cfg.clone() };
        run_on(n, &formula, &c, &mut |_, _| {})
    };
    let runs: Vec<SlsResult> = match rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build() {
        Ok(pool) => pool.install(|| seeds.par_iter().map(|&s| run(s)).collect()),
        Err(_) => seeds.iter().map(|&s| run(s)).collect(),
    };
    let best = runs
        .iter()
        .enumerate()
        .min_by_key(|(_, r)| (r.best_falsified, r.seed))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let harvest = match mode {
        PortfolioMode::DistinctSeeds => runs.iter().map(|r| (r.best_falsified, r.best_assignment.clone())).collect(),
        PortfolioMode::DistinctRestarts => runs.iter().flat_map(|r| r.restart_bests.iter().cloned()).collect(),
    };
    Ok(PortfolioResult { mode, runs, best, harvest })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signotope::count_convex_pentagons;

    #[test]
    fn finds_zero_for_eight_points() {
        let r = sls_minimize(8, &SlsConfig { target: Some(0), ..SlsConfig::default() }).unwrap();
        assert_eq!(r.best_falsified, 0);
        assert_eq!(r.axiom_violations, 0);
    }

    #[test]
    fn nine_points_reach_one_and_recount() {
        let cfg = SlsConfig { seed: 3, target: Some(1), ..SlsConfig::default() };
        let r = sls_minimize(9, &cfg).unwrap();
        assert_eq!(r.best_falsified, 1);
        let f = encode_sat(9, true).unwrap();
        assert_eq!(f.count_falsified(r.best_assignment.values()) as u64, r.best_falsified);
        assert_eq!(count_convex_pentagons(&r.best_assignment).unwrap(), 1);
        assert!(r.trace.windows(2).all(|w| w[0].1 > w[1].1));
    }

    #[test]
    fn deterministic_for_a_seed() {
        let cfg = SlsConfig { seed: 11, max_flips: 20_000, restart_interval: 5_000, ..SlsConfig::default() };
        let a = sls_minimize(10, &cfg).unwrap();
        let b = sls_minimize(10, &cfg).unwrap();
        assert_eq!(a.summary(), b.summary());
        assert_eq!(a.best_assignment, b.best_assignment);
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.restarts, 3);
    }

    #[test]
    fn progress_lines() {
        let cfg = SlsConfig { max_flips: 1000, progress_interval: Some(250), ..SlsConfig::default() };
        let mut seen = Vec::new();
        sls_minimize_with_progress(9, &cfg, &mut |f, b| seen.push((f, b))).unwrap();
        assert_eq!(seen.iter().map(|s| s.0).collect::<Vec<_>>(), vec![250, 500, 750, 1000]);
    }

    #[test]
    fn portfolio_modes() {
        let cfg = SlsConfig { max_flips: 3000, restart_interval: 1000, ..SlsConfig::default() };
        let p = sls_portfolio(9, &cfg, &[4, 2, 2, 9], PortfolioMode::DistinctSeeds, 2).unwrap();
        assert_eq!(p.runs.iter().map(|r| r.seed).collect::<Vec<_>>(), vec![2, 4, 9]);
        assert_eq!(p.harvest.len(), 3);
        let p = sls_portfolio(9, &cfg, &[4, 2], PortfolioMode::DistinctRestarts, 1).unwrap();
        assert_eq!(p.runs.len(), 1);
        assert_eq!(p.harvest.len(), 3);
    }
}
