//! Exact planar geometry over rational coordinates.
//!
//! Everything here is the ground truth the abstract counters are checked
//! against, so no floating point value ever enters a predicate.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::combin::{next_combination, TripleIndex};
use crate::signotope::SignotopeAssignment;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("points {0} and {1} share the x-coordinate {2}")]
    DuplicateX(usize, usize, String),
    #[error("points are not sorted by strictly increasing x at position {0}")]
    NotSorted(usize),
    #[error("collinear triple ({0}, {1}, {2})")]
    Collinear(usize, usize, usize),
    #[error("k = {k} must satisfy 3 <= k <= n = {n}")]
    BadK { k: usize, n: usize },
    #[error("malformed coordinate {0:?}")]
    BadNumber(String),
    #[error("malformed point-set document: {0}")]
    BadDocument(String),
}

/// A point with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: BigRational,
    pub y: BigRational,
}

impl Point {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point {
            x: BigRational::from_integer(x.into()),
            y: BigRational::from_integer(y.into()),
        }
    }

    pub fn from_big_ints(x: BigInt, y: BigInt) -> Self {
        Point {
            x: BigRational::from_integer(x),
            y: BigRational::from_integer(y),
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (
            self.x.to_f64().unwrap_or(f64::NAN),
            self.y.to_f64().unwrap_or(f64::NAN),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
    Collinear,
}

impl Orientation {
    pub fn reversed(self) -> Self {
        match self {
            Orientation::CounterClockwise => Orientation::Clockwise,
            Orientation::Clockwise => Orientation::CounterClockwise,
            Orientation::Collinear => Orientation::Collinear,
        }
    }
}

/// Sign of `(y_c - y_a)(x_b - x_a) - (x_c - x_a)(y_b - y_a)`.
pub fn orientation(pa: &Point, pb: &Point, pc: &Point) -> Orientation {
    let lhs = (&pc.y - &pa.y) * (&pb.x - &pa.x);
    let rhs = (&pc.x - &pa.x) * (&pb.y - &pa.y);
    match lhs.cmp(&rhs) {
        Ordering::Greater => Orientation::CounterClockwise,
        Ordering::Less => Orientation::Clockwise,
        Ordering::Equal => Orientation::Collinear,
    }
}

/// Points ordered by strictly increasing x. Point `i` (0-based) carries the
/// label `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    /// Accepts points that are already in strictly increasing x order.
    pub fn new(points: Vec<Point>) -> Result<Self, GeomError> {
        for i in 1..points.len() {
            match points[i - 1].x.cmp(&points[i].x) {
                Ordering::Less => {}
                Ordering::Equal => {
                    return Err(GeomError::DuplicateX(i, i + 1, points[i].x.to_string()))
                }
                Ordering::Greater => return Err(GeomError::NotSorted(i + 1)),
            }
        }
        Ok(PointSet { points })
    }

    /// Sorts by x; ties are rejected, never perturbed.
    pub fn from_unsorted(mut points: Vec<Point>) -> Result<Self, GeomError> {
        points.sort_by(|p, q| p.x.cmp(&q.x));
        PointSet::new(points)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Point with 1-based label `label`.
    pub fn label(&self, label: usize) -> &Point {
        &self.points[label - 1]
    }

    /// Same point set with every coordinate multiplied by the common
    /// denominator, which leaves all orientations unchanged.
    fn integer_coordinates(&self) -> Vec<(BigInt, BigInt)> {
        let mut lcm = BigInt::one();
        for p in &self.points {
            lcm = num_integer::Integer::lcm(&lcm, p.x.denom());
            lcm = num_integer::Integer::lcm(&lcm, p.y.denom());
        }
        self.points
            .iter()
            .map(|p| {
                let x = p.x.numer() * (&lcm / p.x.denom());
                let y = p.y.numer() * (&lcm / p.y.denom());
                (x, y)
            })
            .collect()
    }

    /// Reads the JSON point-set document `{"n": .., "points": [["x","y"], ..]}`.
    pub fn from_json(text: &str) -> Result<Self, GeomError> {
        let doc: Value =
            serde_json::from_str(text).map_err(|e| GeomError::BadDocument(e.to_string()))?;
        let pts = doc
            .get("points")
            .and_then(Value::as_array)
            .ok_or_else(|| GeomError::BadDocument("missing \"points\" array".into()))?;
        let mut points = Vec::with_capacity(pts.len());
        for entry in pts {
            let pair = entry
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| GeomError::BadDocument(format!("bad point entry {entry}")))?;
            points.push(Point::new(json_coordinate(&pair[0])?, json_coordinate(&pair[1])?));
        }
        if let Some(n) = doc.get("n") {
            let n = n
                .as_u64()
                .ok_or_else(|| GeomError::BadDocument("\"n\" must be a non-negative integer".into()))?;
            if n as usize != points.len() {
                return Err(GeomError::BadDocument(format!(
                    "\"n\" is {n} but {} points are listed",
                    points.len()
                )));
            }
        }
        PointSet::from_unsorted(points)
    }

    pub fn to_json(&self) -> String {
        let points: Vec<[String; 2]> = self
            .points
            .iter()
            .map(|p| [format_rational(&p.x), format_rational(&p.y)])
            .collect();
        let doc = serde_json::json!({ "n": self.points.len(), "points": points });
        let mut s = serde_json::to_string(&doc).expect("point set serializes");
        s.push('\n');
        s
    }
}

fn json_coordinate(v: &Value) -> Result<BigRational, GeomError> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => Ok(BigRational::from_integer(n.as_i64().unwrap().into())),
        other => Err(GeomError::BadNumber(other.to_string())),
    }
}

/// Parses `"p/q"`, an integer, or a plain decimal such as `"-12.375"` or `"1e-3"`.
pub fn parse_rational(s: &str) -> Result<BigRational, GeomError> {
    let bad = || GeomError::BadNumber(s.to_string());
    let t = s.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(BigInt::from_str(&all_digits).map_err(|_| bad())?);
    let shift = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(10.into());
    if shift >= 0 {
        value *= num_traits::pow(ten, shift as usize);
    } else {
        value /= num_traits::pow(ten, (-shift) as usize);
    }
    Ok(if negative { -value } else { value })
}

/// Integers print bare, everything else as `p/q` in lowest terms.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.points.iter().enumerate() {
            writeln!(f, "{}: ({}, {})", i + 1, format_rational(&p.x), format_rational(&p.y))?;
        }
        Ok(())
    }
}

/// Counter-clockwise flag for every sorted triple, computed once in exact
/// integer arithmetic.
pub(crate) struct OrientationTable {
    index: TripleIndex,
    ccw: Vec<bool>,
}

impl OrientationTable {
    pub(crate) fn build(s: &PointSet) -> Result<Self, GeomError> {
        let n = s.len();
        let coords = s.integer_coordinates();
        let index = TripleIndex::new(n);
        let mut ccw = Vec::with_capacity(index.len());
        let mut collinear = None;
        crate::combin::for_each_tuple::<3>(n, |&[a, b, c]| {
            let (xa, ya) = &coords[a - 1];
            let (xb, yb) = &coords[b - 1];
            let (xc, yc) = &coords[c - 1];
            let det = (yc - ya) * (xb - xa) - (xc - xa) * (yb - ya);
            if det.is_zero() && collinear.is_none() {
                collinear = Some((a, b, c));
            }
            ccw.push(det.is_positive());
        });
        if let Some((a, b, c)) = collinear {
            return Err(GeomError::Collinear(a, b, c));
        }
        Ok(OrientationTable { index, ccw })
    }

    #[inline]
    fn ccw(&self, a: usize, b: usize, c: usize) -> bool {
        self.ccw[self.index.rank(a, b, c)]
    }

    /// Convex-position test for labels sorted by x: all points must lie on
    /// the upper or the lower monotone chain.
    fn in_convex_position(&self, subset: &[usize], upper: &mut Vec<usize>, lower: &mut Vec<usize>) -> bool {
        upper.clear();
        lower.clear();
        for &p in subset {
            while upper.len() >= 2 && self.ccw(upper[upper.len() - 2], upper[upper.len() - 1], p) {
                upper.pop();
            }
            upper.push(p);
            while lower.len() >= 2 && !self.ccw(lower[lower.len() - 2], lower[lower.len() - 1], p) {
                lower.pop();
            }
            lower.push(p);
        }
        upper.len() + lower.len() - 2 == subset.len()
    }
}

pub fn is_general_position(s: &PointSet) -> bool {
    let pts = s.points();
    let n = pts.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if orientation(&pts[a], &pts[b], &pts[c]) == Orientation::Collinear {
                    return false;
                }
            }
        }
    }
    true
}

fn check_k(s: &PointSet, k: usize) -> Result<(), GeomError> {
    if k < 3 || k > s.len() {
        return Err(GeomError::BadK { k, n: s.len() });
    }
    Ok(())
}

/// Number of k-subsets in convex position, by exhaustive enumeration.
pub fn count_convex_kgons(s: &PointSet, k: usize) -> Result<u64, GeomError> {
    check_k(s, k)?;
    let table = OrientationTable::build(s)?;
    let n = s.len();
    let total = (1..=n + 1 - k)
        .into_par_iter()
        .map(|first| {
            let mut upper = Vec::with_capacity(k);
            let mut lower = Vec::with_capacity(k);
            let mut subset: Vec<usize> = (first..first + k).collect();
            let mut count = 0u64;
            loop {
                if table.in_convex_position(&subset, &mut upper, &mut lower) {
                    count += 1;
                }
                if !next_combination(&mut subset[1..], n) {
                    break;
                }
            }
            count
        })
        .sum();
    Ok(total)
}

/// The convex k-subsets themselves (1-based labels), in lexicographic order.
pub fn convex_kgons(s: &PointSet, k: usize) -> Result<Vec<Vec<usize>>, GeomError> {
    check_k(s, k)?;
    let table = OrientationTable::build(s)?;
    let mut out = Vec::new();
    let mut upper = Vec::with_capacity(k);
    let mut lower = Vec::with_capacity(k);
    let mut subset: Vec<usize> = (1..=k).collect();
    loop {
        if table.in_convex_position(&subset, &mut upper, &mut lower) {
            out.push(subset.clone());
        }
        if !next_combination(&mut subset, s.len()) {
            break;
        }
    }
    Ok(out)
}

/// The signotope of a point set in general position.
pub fn signotope_of(s: &PointSet) -> Result<SignotopeAssignment, GeomError> {
    let table = OrientationTable::build(s)?;
    Ok(SignotopeAssignment::from_values(s.len(), table.ccw).expect("one value per triple"))
}
