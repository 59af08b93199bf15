//! The pinwheel and parabolic point sets, and the conjectured optimum.
//!
//! Both constructions are scaled to integer coordinates. Uniform positive
//! scaling and shears with positive determinant preserve every
//! orientation, so convexity counts are unaffected.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combin::binomial;
use crate::geom::{is_general_position, GeomError, Point, PointSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("pinwheel needs k >= 1, got {0}")]
    BadPinwheelSize(usize),
    #[error("parabolic construction needs n >= 1, got {0}")]
    BadParabolicSize(usize),
    #[error("generated point set is not in general position")]
    NotGeneralPosition,
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ConstructionSpec {
    /// Four spokes of `k` points, `n = 4k`.
    Pinwheel { k: usize },
    Parabolic { n: usize },
}

impl ConstructionSpec {
    pub fn n(&self) -> usize {
        match *self {
            ConstructionSpec::Pinwheel { k } => 4 * k,
            ConstructionSpec::Parabolic { n } => n,
        }
    }

    pub fn build(&self) -> Result<PointSet, ConstructionError> {
        match *self {
            ConstructionSpec::Pinwheel { k } => pinwheel(k),
            ConstructionSpec::Parabolic { n } => parabolic(n),
        }
    }
}

fn finish(points: Vec<Point>) -> Result<PointSet, ConstructionError> {
    let set = PointSet::from_unsorted(points)?;
    if !is_general_position(&set) {
        return Err(ConstructionError::NotGeneralPosition);
    }
    Ok(set)
}

/// `4k` points on four slightly curved spokes, scaled by `k^3`.
///
/// The vertical spokes repeat x-coordinates (`j` and `k - j` give the same
/// offset), so the set is sheared by `(x, y) -> (M x + y, y)` with `M` larger
/// than any y-difference. Distinct x-coordinates keep their order and equal
/// ones are separated by their y-coordinates.
pub fn pinwheel(k: usize) -> Result<PointSet, ConstructionError> {
    if k == 0 {
        return Err(ConstructionError::BadPinwheelSize(k));
    }
    let k = k as i64;
    let k3 = k * k * k;
    let mut raw = Vec::with_capacity(4 * k as usize);
    for j in 0..k {
        let bend = j * (k - j);
        raw.push((k3 * (k + j), k3 - bend));
        raw.push((-k3 * (k + j), bend - k3));
        raw.push((bend - k3, k3 * (k + j)));
        raw.push((k3 - bend, -k3 * (k + j)));
    }
    let max_abs_y = raw.iter().map(|p| p.1.abs()).max().unwrap_or(0);
    let shear = BigInt::from(2 * max_abs_y + 1);
    let points = raw
        .into_iter()
        .map(|(x, y)| Point::from_big_ints(&shear * x + y, BigInt::from(y)))
        .collect();
    finish(points)
}

/// Upper chain `(i n^2, 2n^2 + i^2)` for `i <= floor(n/2)` and lower chain
/// `(i n^2 + 1, -2n^2 - i^2)` for `i <= ceil(n/2)`; the lower chain is moved
/// right by one unit so no two points share an x-coordinate.
pub fn parabolic(n: usize) -> Result<PointSet, ConstructionError> {
    if n == 0 {
        return Err(ConstructionError::BadParabolicSize(n));
    }
    let nn = (n * n) as i64;
    let top = n / 2;
    let bottom = n - top;
    let mut points = Vec::with_capacity(n);
    for i in 1..=top as i64 {
        points.push(Point::from_ints(i * nn, 2 * nn + i * i));
    }
    for i in 1..=bottom as i64 {
        points.push(Point::from_ints(i * nn + 1, -2 * nn - i * i));
    }
    finish(points)
}

/// `C(floor(n/2), 5) + C(ceil(n/2), 5)`.
pub fn conjectured_mu5(n: u64) -> u128 {
    binomial(n / 2, 5) + binomial(n - n / 2, 5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::count_convex_kgons;

    #[test]
    fn conjectured_values() {
        assert_eq!(conjectured_mu5(9), 1);
        assert_eq!(conjectured_mu5(17), 182);
        assert_eq!(conjectured_mu5(20), 504);
        assert_eq!(conjectured_mu5(4), 0);
        assert_eq!(conjectured_mu5(0), 0);
    }

    #[test]
    fn small_constructions() {
        assert_eq!(count_convex_kgons(&pinwheel(2).unwrap(), 5).unwrap(), 0);
        assert_eq!(count_convex_kgons(&pinwheel(3).unwrap(), 5).unwrap(), 12);
        assert_eq!(count_convex_kgons(&parabolic(5).unwrap(), 5).unwrap(), 0);
        assert_eq!(count_convex_kgons(&parabolic(12).unwrap(), 5).unwrap(), 12);
        assert_eq!(parabolic(1).unwrap().len(), 1);
        assert_eq!(pinwheel(1).unwrap().len(), 4);
    }

    #[test]
    fn bad_sizes() {
        assert_eq!(pinwheel(0).unwrap_err(), ConstructionError::BadPinwheelSize(0));
        assert_eq!(parabolic(0).unwrap_err(), ConstructionError::BadParabolicSize(0));
    }

    #[test]
    fn spec_roundtrip() {
        let spec = ConstructionSpec::Pinwheel { k: 2 };
        assert_eq!(spec.n(), 8);
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(json, r#"{"kind":"pinwheel","k":2}"#);
        assert_eq!(spec.build().unwrap().len(), 8);
    }
}
