//! Point realizations of signotopes by penalized hill climbing.
//!
//! The search works on floating coordinates in `[0, K]^2` and maximizes the
//! smallest pairwise distance minus a hinge penalty for every orientation
//! whose signed area falls below the margin and every x-gap that is too
//! small. Any candidate that reaches zero penalty is rounded to rationals
//! and checked with exact arithmetic; only verified sets are returned.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use thiserror::Error;

use crate::geom::{signotope_of, Point, PointSet};
use crate::signotope::{check_axioms, AxiomViolation, SignotopeAssignment};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RealizeError {
    #[error("assignment violates {} axiom clause(s), first: {}", .0.len(), .0[0])]
    AxiomInconsistent(Vec<AxiomViolation>),
    #[error("invalid realizer configuration: {0}")]
    BadConfig(&'static str),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RealizerConfig {
    /// Required signed-area margin for every triple and x-gap.
    pub epsilon: f64,
    /// Side of the bounding box.
    pub k: f64,
    pub restarts: usize,
    pub max_iters: usize,
    pub step_init: f64,
    pub step_min: f64,
    pub penalty_weight: f64,
    /// Extra iterations spent increasing the minimum distance once the
    /// constraints hold.
    pub polish_iters: usize,
    pub seed: u64,
    pub time_limit: Option<Duration>,
    pub jobs: usize,
}

impl Default for RealizerConfig {
    fn default() -> Self {
        RealizerConfig {
            epsilon: 1e-3,
            k: 10.0,
            restarts: 20,
            max_iters: 200_000,
            step_init: 2.0,
            step_min: 1e-5,
            penalty_weight: 1e3,
            polish_iters: 2_000,
            seed: 0,
            time_limit: Some(Duration::from_secs(120)),
            jobs: 1,
        }
    }
}

impl RealizerConfig {
    fn validate(&self) -> Result<(), RealizeError> {
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(RealizeError::BadConfig("epsilon must be positive"));
        }
        if self.k.is_nan() || self.k <= 0.0 {
            return Err(RealizeError::BadConfig("K must be positive"));
        }
        if !(self.step_init > self.step_min && self.step_min > 0.0) {
            return Err(RealizeError::BadConfig("steps must decrease to a positive minimum"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealizationStatus {
    Realized,
    NotFound,
}

#[derive(Clone, Debug)]
pub struct RealizationResult {
    pub status: RealizationStatus,
    pub points: Option<PointSet>,
    /// Lower bound on the minimum pairwise distance of `points`.
    pub achieved_margin: f64,
    /// Smallest signed area `sigma * det` over all triples of `points`.
    pub min_orientation_slack: f64,
    /// Restart that produced the result, if any.
    pub restart: Option<usize>,
    pub elapsed: Duration,
}

/// Triples in lexicographic order with their required sign.
struct Problem {
    n: usize,
    triples: Vec<([usize; 3], f64)>,
    /// Triple indices touching each point.
    by_point: Vec<Vec<usize>>,
}

impl Problem {
    fn new(a: &SignotopeAssignment) -> Self {
        let n = a.n();
        let mut triples = Vec::new();
        let mut by_point = vec![Vec::new(); n];
        for x in 1..=n {
            for y in x + 1..=n {
                for z in y + 1..=n {
                    let id = triples.len();
                    let sign = if a.get(x, y, z) { 1.0 } else { -1.0 };
                    triples.push(([x - 1, y - 1, z - 1], sign));
                    by_point[x - 1].push(id);
                    by_point[y - 1].push(id);
                    by_point[z - 1].push(id);
                }
            }
        }
        Problem { n, triples, by_point }
    }
}

fn det(p: &[(f64, f64)], [a, b, c]: [usize; 3]) -> f64 {
    let (xa, ya) = p[a];
    let (xb, yb) = p[b];
    let (xc, yc) = p[c];
    (yc - ya) * (xb - xa) - (xc - xa) * (yb - ya)
}

fn min_distance(p: &[(f64, f64)]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            best = best.min((p[i].0 - p[j].0).hypot(p[i].1 - p[j].1));
        }
    }
    if best.is_finite() {
        best
    } else {
        0.0
    }
}

struct Climber<'a> {
    prob: &'a Problem,
    cfg: &'a RealizerConfig,
    pts: Vec<(f64, f64)>,
    tri_pen: Vec<f64>,
    gap_pen: Vec<f64>,
    penalty: f64,
}

impl<'a> Climber<'a> {
    fn new(prob: &'a Problem, cfg: &'a RealizerConfig, pts: Vec<(f64, f64)>) -> Self {
        let mut c = Climber { prob, cfg, pts, tri_pen: vec![0.0; prob.triples.len()], gap_pen: vec![0.0; prob.n.saturating_sub(1)], penalty: 0.0 };
        for t in 0..prob.triples.len() {
            c.tri_pen[t] = c.triple_penalty(t);
        }
        for g in 0..c.gap_pen.len() {
            c.gap_pen[g] = c.gap_penalty(g);
        }
        c.penalty = c.tri_pen.iter().sum::<f64>() + c.gap_pen.iter().sum::<f64>();
        c
    }

    fn triple_penalty(&self, t: usize) -> f64 {
        let (idx, sign) = self.prob.triples[t];
        (self.cfg.epsilon - sign * det(&self.pts, idx)).max(0.0)
    }

    fn gap_penalty(&self, g: usize) -> f64 {
        (self.cfg.epsilon - (self.pts[g + 1].0 - self.pts[g].0)).max(0.0)
    }

    /// Penalty change if point `i` moved to `to`; the move is applied.
    fn move_point(&mut self, i: usize, to: (f64, f64)) -> f64 {
        self.pts[i] = to;
        let mut delta = 0.0;
        for &t in &self.prob.by_point[i] {
            let new = self.triple_penalty(t);
            delta += new - self.tri_pen[t];
            self.tri_pen[t] = new;
        }
        for g in [i.wrapping_sub(1), i] {
            if g < self.gap_pen.len() {
                let new = self.gap_penalty(g);
                delta += new - self.gap_pen[g];
                self.gap_pen[g] = new;
            }
        }
        self.penalty += delta;
        delta
    }

    fn objective(&self) -> f64 {
        min_distance(&self.pts) - self.cfg.penalty_weight * self.penalty
    }

    fn feasible(&self) -> bool {
        self.tri_pen.iter().all(|&p| p == 0.0) && self.gap_pen.iter().all(|&p| p == 0.0)
    }
}

fn rationalize(pts: &[(f64, f64)], exact: bool) -> Option<PointSet> {
    let conv = |v: f64| -> Option<BigRational> {
        if exact {
            BigRational::from_f64(v)
        } else {
            let scaled = (v * 1e6).round();
            Some(BigRational::new(BigInt::from_f64(scaled)?, BigInt::from(1_000_000)))
        }
    };
    let points = pts
        .iter()
        .map(|&(x, y)| Some(Point::new(conv(x)?, conv(y)?)))
        .collect::<Option<Vec<_>>>()?;
    PointSet::new(points).ok()
}

fn verify(points: &PointSet, target: &SignotopeAssignment) -> bool {
    matches!(signotope_of(points), Ok(s) if s == *target)
}

/// Exact minimum pairwise distance (as a slightly shrunk `f64`) and exact
/// minimum signed slack of a verified set.
fn measure(points: &PointSet, target: &SignotopeAssignment) -> (f64, f64) {
    let p = points.points();
    let mut min_d2: Option<BigRational> = None;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let dx = &p[i].x - &p[j].x;
            let dy = &p[i].y - &p[j].y;
            let d2 = &dx * &dx + &dy * &dy;
            if min_d2.as_ref().is_none_or(|m| d2 < *m) {
                min_d2 = Some(d2);
            }
        }
    }
    let margin = min_d2.map_or(0.0, |d2| {
        let v = d2.to_f64().unwrap_or(0.0).sqrt();
        // Guard against rounding up in the conversion and square root.
        (v * (1.0 - 1e-12)).max(0.0)
    });
    let mut min_slack: Option<BigRational> = None;
    for a in 0..p.len() {
        for b in a + 1..p.len() {
            for c in b + 1..p.len() {
                let d = (&p[c].y - &p[a].y) * (&p[b].x - &p[a].x) - (&p[c].x - &p[a].x) * (&p[b].y - &p[a].y);
                let s = if target.get(a + 1, b + 1, c + 1) { d } else { -d };
                if min_slack.as_ref().is_none_or(|m| s < *m) {
                    min_slack = Some(s);
                }
            }
        }
    }
    let slack = min_slack.map_or(f64::INFINITY, |s| {
        let v = s.to_f64().unwrap_or(0.0);
        if s.is_positive() && v <= 0.0 {
            f64::MIN_POSITIVE
        } else {
            v
        }
    });
    (margin, slack)
}

fn one_restart(prob: &Problem, target: &SignotopeAssignment, cfg: &RealizerConfig, restart: usize, deadline: Option<Instant>) -> Option<PointSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart as u64);
    let n = prob.n;
    let mut xs: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..cfg.k)).collect();
    xs.sort_by(f64::total_cmp);
    let pts: Vec<(f64, f64)> = xs.into_iter().map(|x| (x, rng.random_range(0.0..cfg.k))).collect();
    let mut c = Climber::new(prob, cfg, pts);
    let mut obj = c.objective();
    let decay = (cfg.step_min / cfg.step_init).powf(1.0 / cfg.max_iters.max(1) as f64);
    let mut step = cfg.step_init;
    let unit = Normal::new(0.0, 1.0).expect("valid normal");
    let mut polish_left = None;

    for iter in 0..cfg.max_iters {
        if iter % 4096 == 0 && deadline.is_some_and(|d| Instant::now() >= d) {
            return None;
        }
        if polish_left.is_none() && c.feasible() {
            polish_left = Some(cfg.polish_iters);
        }
        if let Some(left) = polish_left.as_mut() {
            if *left == 0 {
                break;
            }
            *left -= 1;
        }
        let i = rng.random_range(0..n);
        let old = c.pts[i];
        let to = (
            (old.0 + step * unit.sample(&mut rng)).clamp(0.0, cfg.k),
            (old.1 + step * unit.sample(&mut rng)).clamp(0.0, cfg.k),
        );
        c.move_point(i, to);
        let new_obj = c.objective();
        let keeps_feasible = polish_left.is_none() || c.feasible();
        if new_obj >= obj && keeps_feasible {
            obj = new_obj;
        } else {
            c.move_point(i, old);
        }
        step = (step * decay).max(cfg.step_min);
    }
    if !c.feasible() {
        return None;
    }
    [false, true]
        .into_iter()
        .filter_map(|exact| rationalize(&c.pts, exact))
        .find(|ps| verify(ps, target))
}

/// Searches for points whose orientations equal `a`.
///
/// A `NotFound` result says nothing about realizability.
pub fn realize(a: &SignotopeAssignment, cfg: &RealizerConfig) -> Result<RealizationResult, RealizeError> {
    cfg.validate()?;
    let violations = check_axioms(a);
    if !violations.is_empty() {
        return Err(RealizeError::AxiomInconsistent(violations));
    }
    let started = Instant::now();
    let deadline = cfg.time_limit.map(|t| started + t);
    let prob = Problem::new(a);
    let attempt = |r: usize| one_restart(&prob, a, cfg, r, deadline).map(|ps| (r, ps));
    // The lowest successful restart index wins, whatever the worker count.
    let found = match rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs.max(1)).build() {
        Ok(pool) => pool.install(|| (0..cfg.restarts).into_par_iter().find_map_first(attempt)),
        Err(_) => (0..cfg.restarts).find_map(attempt),
    };
    Ok(match found {
        Some((restart, points)) => {
            let (achieved_margin, min_orientation_slack) = measure(&points, a);
            RealizationResult {
                status: RealizationStatus::Realized,
                points: Some(points),
                achieved_margin,
                min_orientation_slack,
                restart: Some(restart),
                elapsed: started.elapsed(),
            }
        }
        None => RealizationResult {
            status: RealizationStatus::NotFound,
            points: None,
            achieved_margin: 0.0,
            min_orientation_slack: 0.0,
            restart: None,
            elapsed: started.elapsed(),
        },
    })
}

fn hull(p: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts = p.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut h: Vec<(f64, f64)> = Vec::new();
    for pass in 0..2 {
        let start = h.len();
        let iter: Box<dyn Iterator<Item = &(f64, f64)>> = if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &q in iter {
            while h.len() >= start + 2 && cross(h[h.len() - 2], h[h.len() - 1], q) <= 0.0 {
                h.pop();
            }
            h.push(q);
        }
        h.pop();
    }
    h
}

/// A standalone SVG picture of the points, labelled left to right.
pub fn to_svg(points: &PointSet, hull_edges: bool) -> String {
    let p: Vec<(f64, f64)> = points.points().iter().map(|q| q.to_f64()).collect();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &p {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    if p.is_empty() {
        (x0, y0, x1, y1) = (0.0, 0.0, 1.0, 1.0);
    }
    let size = 400.0;
    let pad = 20.0;
    let span = (x1 - x0).max(y1 - y0).max(1e-12);
    let map = |(x, y): (f64, f64)| (pad + (x - x0) / span * size, pad + (y1 - y) / span * size);
    let mut svg = String::new();
    let side = size + 2.0 * pad;
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{side}" height="{side}" viewBox="0 0 {side} {side}">"#);
    if hull_edges && p.len() >= 2 {
        let h: Vec<String> = hull(&p).into_iter().map(map).map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = writeln!(svg, r##"<polygon points="{}" fill="none" stroke="#888"/>"##, h.join(" "));
    }
    for (i, &q) in p.iter().enumerate() {
        let (x, y) = map(q);
        let _ = writeln!(svg, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3"/>"#);
        let _ = writeln!(svg, r#"<text x="{:.2}" y="{:.2}" font-size="10">{}</text>"#, x + 4.0, y - 4.0, i + 1);
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{parabolic, pinwheel};
    use crate::geom::count_convex_kgons;

    #[test]
    fn realizes_parabolic_eight() {
        let target = signotope_of(&parabolic(8).unwrap()).unwrap();
        let r = realize(&target, &RealizerConfig::default()).unwrap();
        assert_eq!(r.status, RealizationStatus::Realized);
        let pts = r.points.unwrap();
        assert_eq!(signotope_of(&pts).unwrap(), target);
        assert!(r.min_orientation_slack > 0.0);
        assert!(r.achieved_margin > 0.0);
    }

    #[test]
    fn realizes_pinwheel_two() {
        let target = signotope_of(&pinwheel(2).unwrap()).unwrap();
        let r = realize(&target, &RealizerConfig { seed: 5, ..RealizerConfig::default() }).unwrap();
        let pts = r.points.expect("realized");
        assert_eq!(count_convex_kgons(&pts, 5).unwrap(), 0);
    }

    #[test]
    fn rejects_axiom_violations() {
        let mut a = SignotopeAssignment::all_true(4);
        a.set(1, 2, 3, false);
        a.set(2, 3, 4, false);
        assert!(matches!(realize(&a, &RealizerConfig::default()), Err(RealizeError::AxiomInconsistent(v)) if v.len() == 2));
    }

    #[test]
    fn rejects_bad_config() {
        let a = SignotopeAssignment::all_true(4);
        let cfg = RealizerConfig { epsilon: 0.0, ..RealizerConfig::default() };
        assert!(matches!(realize(&a, &cfg), Err(RealizeError::BadConfig(_))));
    }

    #[test]
    fn svg_has_every_point() {
        let svg = to_svg(&parabolic(6).unwrap(), true);
        assert_eq!(svg.matches("<circle").count(), 6);
        assert!(svg.contains("<polygon"));
    }
}
