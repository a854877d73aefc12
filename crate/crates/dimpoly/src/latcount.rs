//! Brute-force lattice-point counting oracles.
//!
//! These enumerators are the ground truth the interpolated quasi-polynomials
//! are checked against: weighted simplex counts, dilated H-polytope counts
//! over an exact bounding box, and counts of the staircase complement of a
//! point set, both by direct filtering and by the dimension recursion. All
//! of them are exact; the only concession to scale is an explicit cap on the
//! number of points a box scan may visit.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::kolchin::PointSet;
use crate::par;

/// Default guard on the number of lattice points a single enumeration may
/// visit (10^8).
pub const DEFAULT_ENUMERATION_CAP: u64 = 100_000_000;

/// Strictly positive integer weights `(w_1, ..., w_m)`, one per coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct WeightVector {
    weights: Vec<u64>,
}

impl WeightVector {
    pub fn new(weights: Vec<u64>) -> Result<Self, Error> {
        if weights.is_empty() {
            return Err(Error::EmptyWeights);
        }
        if let Some(position) = weights.iter().position(|&w| w == 0) {
            return Err(Error::ZeroWeight { position });
        }
        Ok(Self { weights })
    }

    pub fn dimension(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// Least common multiple of the weights: the canonical period bound for
    /// every quasi-polynomial built over this weight vector.
    pub fn lcm(&self) -> u64 {
        self.weights.iter().fold(1u64, |acc, &w| acc.lcm(&w))
    }
}

impl<'de> Deserialize<'de> for WeightVector {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Vec::<u64>::deserialize(deserializer)?;
        WeightVector::new(raw).map_err(serde::de::Error::custom)
    }
}

/// Weighted order of a point: `ord_w(a) = w_1 a_1 + ... + w_m a_m`.
pub fn ord_w(point: &[u64], w: &WeightVector) -> Result<u64, Error> {
    if point.len() != w.dimension() {
        return Err(Error::DimensionMismatch {
            expected: w.dimension(),
            found: point.len(),
        });
    }
    Ok(point
        .iter()
        .zip(w.weights())
        .map(|(&a, &wi)| a * wi)
        .sum())
}

/// Rational polytope `{x : A x <= b}` with integer row data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPolytope {
    a: Vec<Vec<i64>>,
    b: Vec<i64>,
}

impl HPolytope {
    pub fn new(a: Vec<Vec<i64>>, b: Vec<i64>) -> Result<Self, Error> {
        if a.is_empty() {
            return Err(Error::InvalidInput(
                "polytope needs at least one inequality row".to_string(),
            ));
        }
        let d = a[0].len();
        if d == 0 {
            return Err(Error::InvalidInput(
                "polytope rows need at least one coordinate".to_string(),
            ));
        }
        if a.iter().any(|row| row.len() != d) {
            return Err(Error::InvalidInput(
                "all inequality rows must have the same length".to_string(),
            ));
        }
        if b.len() != a.len() {
            return Err(Error::DimensionMismatch {
                expected: a.len(),
                found: b.len(),
            });
        }
        Ok(Self { a, b })
    }

    /// Ambient dimension `d`.
    pub fn dimension(&self) -> usize {
        self.a[0].len()
    }

    pub fn num_rows(&self) -> usize {
        self.a.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&[i64], i64)> {
        self.a.iter().map(Vec::as_slice).zip(self.b.iter().copied())
    }
}

impl Serialize for HPolytope {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("HPolytope", 2)?;
        s.serialize_field("A", &self.a)?;
        s.serialize_field("b", &self.b)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for HPolytope {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(rename = "A")]
            a: Vec<Vec<i64>>,
            b: Vec<i64>,
        }
        let raw = Raw::deserialize(deserializer)?;
        HPolytope::new(raw.a, raw.b).map_err(serde::de::Error::custom)
    }
}

/// Number of points of `N^m` with weighted order at most `t`; zero for
/// negative `t`. This is the counting function of the weighted simplex
/// `{x >= 0 : w . x <= t}`.
pub fn count_simplex(w: &WeightVector, t: i64) -> u64 {
    if t < 0 {
        return 0;
    }
    let budget = t as u64;
    let ws = w.weights();
    if ws.len() == 1 {
        return budget / ws[0] + 1;
    }
    par::sum_range(0..budget / ws[0] + 1, |x| {
        simplex_tail(&ws[1..], budget - x * ws[0])
    })
}

fn simplex_tail(weights: &[u64], budget: u64) -> u64 {
    match weights {
        [] => 1,
        [w] => budget / w + 1,
        [w0, rest @ ..] => (0..=budget / w0)
            .map(|x| simplex_tail(rest, budget - x * w0))
            .sum(),
    }
}

/// Number of lattice points in the dilate `r P`, by scanning the exact
/// bounding box derived from the vertex set. Fails when the box holds more
/// than `cap` points, or when `P` is unbounded or empty.
pub fn count_polytope(p: &HPolytope, r: u64, cap: u64) -> Result<u64, Error> {
    let vs = crate::ehrhart::vertices(p)?;
    let d = p.dimension();
    let r_int = BigInt::from(r);

    let mut lo = Vec::with_capacity(d);
    let mut hi = Vec::with_capacity(d);
    let mut required = BigInt::from(1u32);
    for coord in 0..d {
        let coords = vs.vertices().iter().map(|v| &v[coord]);
        let min = coords.clone().min().unwrap();
        let max = coords.max().unwrap();
        let lo_c = (min * &r_int).ceil().to_integer();
        let hi_c = (max * &r_int).floor().to_integer();
        if hi_c < lo_c {
            return Ok(0);
        }
        required *= &hi_c - &lo_c + 1;
        lo.push(lo_c);
        hi.push(hi_c);
    }
    if required > BigInt::from(cap) {
        return Err(Error::EnumerationCapExceeded {
            required: required.to_u128().unwrap_or(u128::MAX),
            cap,
        });
    }
    let over_cap = || Error::EnumerationCapExceeded {
        required: u128::MAX,
        cap,
    };
    let lo: Vec<i64> = lo
        .into_iter()
        .map(|v| v.to_i64().ok_or_else(over_cap))
        .collect::<Result<_, _>>()?;
    let hi: Vec<i64> = hi
        .into_iter()
        .map(|v| v.to_i64().ok_or_else(over_cap))
        .collect::<Result<_, _>>()?;

    let rows: Vec<(&[i64], i128)> = p
        .rows()
        .map(|(a, b)| (a, b as i128 * r as i128))
        .collect();
    let width = (hi[0] - lo[0] + 1) as u64;
    Ok(par::sum_range(0..width, |k| {
        let mut point = vec![0i64; d];
        point[0] = lo[0] + k as i64;
        box_tail(&rows, &lo, &hi, &mut point, 1)
    }))
}

fn box_tail(rows: &[(&[i64], i128)], lo: &[i64], hi: &[i64], point: &mut Vec<i64>, next: usize) -> u64 {
    if next == lo.len() {
        let feasible = rows.iter().all(|(a, rb)| {
            let lhs: i128 = a
                .iter()
                .zip(point.iter())
                .map(|(&c, &x)| c as i128 * x as i128)
                .sum();
            lhs <= *rb
        });
        return feasible as u64;
    }
    let mut total = 0;
    for x in lo[next]..=hi[next] {
        point[next] = x;
        total += box_tail(rows, lo, hi, point, next + 1);
    }
    total
}

/// Number of points of weighted order at most `r` that do not dominate any
/// point of `a` (componentwise), counted by direct enumeration with a
/// filter. Zero for negative `r`.
pub fn count_va(a: &PointSet, w: &WeightVector, r: i64) -> Result<u64, Error> {
    check_dimensions(a, w)?;
    if r < 0 {
        return Ok(0);
    }
    let budget = r as u64;
    let ws = w.weights();
    let points = a.points();
    if ws.len() == 1 {
        let mut count = 0;
        for v in 0..=budget / ws[0] {
            if !points.iter().any(|p| p[0] <= v) {
                count += 1;
            }
        }
        return Ok(count);
    }
    Ok(par::sum_range(0..budget / ws[0] + 1, |x| {
        let mut prefix = Vec::with_capacity(ws.len());
        prefix.push(x);
        va_tail(points, ws, &mut prefix, budget - x * ws[0])
    }))
}

fn va_tail(points: &[Vec<u64>], weights: &[u64], prefix: &mut Vec<u64>, budget: u64) -> u64 {
    let idx = prefix.len();
    if idx == weights.len() {
        let dominates = points
            .iter()
            .any(|p| p.iter().zip(prefix.iter()).all(|(a, v)| a <= v));
        return !dominates as u64;
    }
    let mut total = 0;
    for x in 0..=budget / weights[idx] {
        prefix.push(x);
        total += va_tail(points, weights, prefix, budget - x * weights[idx]);
        prefix.pop();
    }
    total
}

/// The same count as [`count_va`], by the recursion that splits on the last
/// coordinate instead of enumerating: with `A_0` the points of `A` whose
/// last coordinate is zero (dropped) and `A_1` the points of `A` with the
/// last coordinate decremented (clamped at zero),
/// `N_A(r) = N_{A_0}(r) + N_{A_1}(r - w_m)`.
pub fn count_va_recursive(a: &PointSet, w: &WeightVector, r: i64) -> Result<u64, Error> {
    check_dimensions(a, w)?;
    Ok(va_recursion(a.points().to_vec(), w.weights(), r))
}

fn va_recursion(points: Vec<Vec<u64>>, weights: &[u64], r: i64) -> u64 {
    if points.iter().any(|p| p.iter().all(|&c| c == 0)) {
        return 0;
    }
    if points.is_empty() {
        return if r < 0 {
            0
        } else {
            simplex_tail(weights, r as u64)
        };
    }
    if r < 0 {
        return 0;
    }
    let m = weights.len();
    if m == 1 {
        // Points below min(A), capped by the order budget; min(A) >= 1
        // because the origin case is already handled.
        let a_min = points.iter().map(|p| p[0]).min().unwrap();
        return (a_min - 1).min(r as u64 / weights[0]) + 1;
    }
    let mut a0: Vec<Vec<u64>> = points
        .iter()
        .filter(|p| p[m - 1] == 0)
        .map(|p| p[..m - 1].to_vec())
        .collect();
    a0.sort();
    a0.dedup();
    let mut a1: Vec<Vec<u64>> = points
        .iter()
        .map(|p| {
            let mut q = p.clone();
            q[m - 1] = q[m - 1].saturating_sub(1);
            q
        })
        .collect();
    a1.sort();
    a1.dedup();
    va_recursion(a0, &weights[..m - 1], r) + va_recursion(a1, weights, r - weights[m - 1] as i64)
}

fn check_dimensions(a: &PointSet, w: &WeightVector) -> Result<(), Error> {
    if a.dimension() != w.dimension() {
        return Err(Error::DimensionMismatch {
            expected: w.dimension(),
            found: a.dimension(),
        });
    }
    Ok(())
}
