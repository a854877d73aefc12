//! Dimension quasi-polynomials of subsets of `N^m` under weighted order.
//!
//! For a finite `A` in `N^m` and positive integer weights `w`, let `V_A(r)`
//! be the set of points of weighted order at most `r` that dominate no
//! element of `A` componentwise. Its cardinality agrees, for all `r` past an
//! explicit threshold, with a quasi-polynomial obtained from the weighted
//! simplex count by inclusion and exclusion over the corners of `A`. The
//! same alternating sum with truncated shifts reproduces `#V_A(r)` exactly
//! for every `r >= 0`, which [`exact_count_eval`] exploits.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

use crate::error::Error;
use crate::exactnum::Rational;
use crate::latcount::{count_simplex, ord_w, WeightVector};
use crate::quasipoly::QuasiPolynomial;

/// Refuse inclusion and exclusion over antichains larger than this: the
/// corner scan is a sum over `2^size` subsets.
pub const MAX_ANTICHAIN_FOR_EXPANSION: usize = 20;

/// A finite set of lattice points in `N^m`, kept sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    dimension: usize,
    points: Vec<Vec<u64>>,
}

impl PointSet {
    /// Build a point set in `N^m`. Every point must have length `m`;
    /// duplicates are collapsed. The empty set is allowed.
    pub fn new(dimension: usize, points: Vec<Vec<u64>>) -> Result<Self, Error> {
        if dimension == 0 {
            return Err(Error::InvalidInput(
                "point sets need at least one coordinate".into(),
            ));
        }
        for p in &points {
            if p.len() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: p.len(),
                });
            }
        }
        let mut points = points;
        points.sort();
        points.dedup();
        Ok(PointSet { dimension, points })
    }

    /// The empty set in `N^m`.
    pub fn empty(dimension: usize) -> Self {
        PointSet {
            dimension,
            points: Vec::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn points(&self) -> &[Vec<u64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Whether some element of the set is dominated by `point` in every
    /// coordinate.
    pub fn dominates_some(&self, point: &[u64]) -> bool {
        self.points
            .iter()
            .any(|p| p.iter().zip(point).all(|(a, v)| a <= v))
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.points.is_empty() {
            return write!(f, "(empty)");
        }
        let rendered: Vec<String> = self
            .points
            .iter()
            .map(|p| {
                let coords: Vec<String> = p.iter().map(u64::to_string).collect();
                format!("({})", coords.join(", "))
            })
            .collect();
        write!(f, "{}", rendered.join("; "))
    }
}

#[derive(Serialize, Deserialize)]
struct PointSetRepr {
    m: usize,
    points: Vec<Vec<u64>>,
}

impl Serialize for PointSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PointSetRepr {
            m: self.dimension,
            points: self.points.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = PointSetRepr::deserialize(deserializer)?;
        PointSet::new(repr.m, repr.points).map_err(D::Error::custom)
    }
}

/// The minimal elements of `a` under componentwise order. Dropping
/// non-minimal points changes neither `V_A` nor any quantity derived from
/// it, so all entry points reduce to this antichain first.
pub fn minimal_antichain(a: &PointSet) -> PointSet {
    let minimal: Vec<Vec<u64>> = a
        .points
        .iter()
        .filter(|p| {
            !a.points
                .iter()
                .any(|q| q.as_slice() != p.as_slice() && q.iter().zip(p.iter()).all(|(x, y)| x <= y))
        })
        .cloned()
        .collect();
    PointSet {
        dimension: a.dimension,
        points: minimal,
    }
}

/// A dimension quasi-polynomial together with its validity threshold and
/// the antichain that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimensionResult {
    pub chi: QuasiPolynomial,
    pub threshold: u64,
    pub antichain: PointSet,
}

/// Integer shift multiplicities: the inclusion-exclusion corner scan
/// collapsed by shift amount. Index `s` holds the signed number of subsets
/// whose corner has weighted order `s`.
fn shift_coefficients(antichain: &PointSet, w: &WeightVector) -> Result<Vec<i64>, Error> {
    let points = antichain.points();
    let d = points.len();
    let m = antichain.dimension();
    let mut top = vec![0u64; m];
    for p in points {
        for (t, &c) in top.iter_mut().zip(p) {
            *t = (*t).max(c);
        }
    }
    let r0 = ord_w(&top, w)?;
    let weights = w.weights().to_vec();
    let points: Vec<Vec<u64>> = points.to_vec();
    let coeffs = crate::par::fold_range(
        0..(1u64 << d),
        || vec![0i64; r0 as usize + 1],
        move |mut acc, mask| {
            let mut corner = vec![0u64; m];
            for (j, p) in points.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    for (c, &v) in corner.iter_mut().zip(p) {
                        *c = (*c).max(v);
                    }
                }
            }
            let shift: u64 = corner.iter().zip(&weights).map(|(&c, &w)| c * w).sum();
            let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
            acc[shift as usize] += sign;
            acc
        },
        |mut a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
            a
        },
    );
    Ok(coeffs)
}

/// Compute the dimension quasi-polynomial of a subset of `N^m`.
///
/// Returns the quasi-polynomial `chi` with `chi(r) = #V_A(r)` for all
/// `r >= threshold`, where the threshold is the weighted order of the
/// componentwise maximum of the minimal antichain. The degree is `m` with
/// leading coefficient `1/(m! w_1 ... w_m)` exactly when `A` is empty, and
/// `chi = 0` exactly when `A` contains the origin.
pub fn dimension_quasipoly(a: &PointSet, w: &WeightVector) -> Result<DimensionResult, Error> {
    if a.dimension() != w.dimension() {
        return Err(Error::DimensionMismatch {
            expected: w.dimension(),
            found: a.dimension(),
        });
    }
    let antichain = minimal_antichain(a);
    if antichain.len() > MAX_ANTICHAIN_FOR_EXPANSION {
        return Err(Error::SubsetExplosion {
            size: antichain.len(),
            max: MAX_ANTICHAIN_FOR_EXPANSION,
        });
    }
    let lambda = crate::ehrhart::lambda_w(w)?;
    let coeffs = shift_coefficients(&antichain, w)?;
    let mut chi = QuasiPolynomial::zero();
    for (s, &c) in coeffs.iter().enumerate() {
        if c != 0 {
            chi = chi.add(&lambda.shifted(s as u64).scale(&Rational::from_integer(c.into())));
        }
    }
    let threshold = coeffs.len() as u64 - 1;
    Ok(DimensionResult {
        chi,
        threshold,
        antichain,
    })
}

/// The dimension quasi-polynomial of a single excluded point, valid from
/// its weighted order on: the full simplex count minus the count of the
/// cone above the point.
pub fn dimension_single_point(point: &[u64], w: &WeightVector) -> Result<DimensionResult, Error> {
    let a = PointSet::new(w.dimension(), vec![point.to_vec()])?;
    dimension_quasipoly(&a, w)
}

/// Evaluate `#V_A(r)` exactly for any `r >= 0` by the truncated alternating
/// sum: shifted simplex counts drop out entirely once their argument is
/// negative, which is precisely what the brute-force count does. Agrees
/// with `chi(r)` for `r >= threshold` and stays correct below it.
pub fn exact_count_eval(result: &DimensionResult, w: &WeightVector, r: i64) -> Result<u64, Error> {
    if r < 0 {
        return Ok(0);
    }
    let coeffs = shift_coefficients(&result.antichain, w)?;
    let mut total: i128 = 0;
    for (s, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let arg = r - s as i64;
        if arg >= 0 {
            total += c as i128 * count_simplex(w, arg) as i128;
        }
    }
    u64::try_from(total).map_err(|_| {
        Error::InvalidInput(format!("alternating sum evaluated to {total} at r = {r}"))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{integer, ratio, PeriodicRational};
    use crate::latcount::count_va;
    use crate::quasipoly::QuasiPolynomial;
    use proptest::prelude::*;

    fn wv(ws: &[u64]) -> WeightVector {
        WeightVector::new(ws.to_vec()).unwrap()
    }

    fn ps(m: usize, points: &[&[u64]]) -> PointSet {
        PointSet::new(m, points.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    fn pr(values: &[(i64, i64)]) -> PeriodicRational {
        PeriodicRational::new(values.iter().map(|&(n, d)| ratio(n, d)).collect())
    }

    fn qp(coeffs: &[&[(i64, i64)]]) -> QuasiPolynomial {
        QuasiPolynomial::from_coefficients(coeffs.iter().map(|c| pr(c)).collect())
    }

    #[test]
    fn point_sets_sort_dedup_and_render() {
        let a = ps(2, &[&[2, 1], &[0, 3], &[2, 1]]);
        assert_eq!(a.points(), &[vec![0, 3], vec![2, 1]]);
        assert_eq!(a.to_string(), "(0, 3); (2, 1)");
        assert_eq!(ps(2, &[]).to_string(), "(empty)");
        assert!(matches!(
            PointSet::new(2, vec![vec![1, 2, 3]]),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn point_set_serde_round_trip() {
        let a = ps(2, &[&[0, 3], &[2, 1]]);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"m":2,"points":[[0,3],[2,1]]}"#);
        let back: PointSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
        // Wrong-length points are rejected at the boundary.
        assert!(serde_json::from_str::<PointSet>(r#"{"m":2,"points":[[1,2,3]]}"#).is_err());
    }

    #[test]
    fn antichain_drops_dominated_points() {
        let a = ps(2, &[&[0, 3], &[2, 1], &[2, 4], &[5, 1]]);
        assert_eq!(minimal_antichain(&a), ps(2, &[&[0, 3], &[2, 1]]));
        let b = ps(3, &[&[1, 1, 1]]);
        assert_eq!(minimal_antichain(&b), b);
        assert_eq!(minimal_antichain(&ps(2, &[])), ps(2, &[]));
    }

    #[test]
    fn two_corner_staircase_with_weights_two_one() {
        let a = ps(2, &[&[0, 3], &[2, 1]]);
        let w = wv(&[2, 1]);
        let res = dimension_quasipoly(&a, &w).unwrap();
        assert_eq!(res.chi, qp(&[&[(5, 1), (9, 2)], &[(1, 2)]]));
        assert_eq!(res.threshold, 7);
        assert_eq!(res.antichain, a);
        for r in 7..40 {
            assert_eq!(res.chi.eval(r), integer(count_va(&a, &w, r).unwrap() as i64));
        }
    }

    #[test]
    fn truncated_sum_is_exact_below_the_threshold() {
        let a = ps(2, &[&[0, 3], &[2, 1]]);
        let w = wv(&[2, 1]);
        let res = dimension_quasipoly(&a, &w).unwrap();
        let expected = [1u64, 2, 4, 5, 7, 7, 8, 8];
        for (r, &want) in expected.iter().enumerate() {
            assert_eq!(exact_count_eval(&res, &w, r as i64).unwrap(), want);
        }
        assert_eq!(exact_count_eval(&res, &w, -3).unwrap(), 0);
        // At the threshold and beyond the truncated sum meets the
        // quasi-polynomial.
        for r in 7..30 {
            assert_eq!(
                integer(exact_count_eval(&res, &w, r).unwrap() as i64),
                res.chi.eval(r)
            );
        }
    }

    #[test]
    fn single_point_matches_the_two_term_formula() {
        let w = wv(&[2, 1]);
        let res = dimension_single_point(&[2, 1], &w).unwrap();
        let lambda = crate::ehrhart::lambda_w(&w).unwrap();
        assert_eq!(res.chi, lambda.sub(&lambda.shifted(5)));
        assert_eq!(res.threshold, 5);
        assert_eq!(res.chi.eval(5), integer(11));
        let direct = ps(2, &[&[2, 1]]);
        for r in 5..30 {
            assert_eq!(
                res.chi.eval(r),
                integer(count_va(&direct, &w, r).unwrap() as i64)
            );
        }
    }

    #[test]
    fn empty_set_gives_the_full_simplex_count() {
        let w = wv(&[2, 1]);
        let res = dimension_quasipoly(&ps(2, &[]), &w).unwrap();
        assert_eq!(res.chi, crate::ehrhart::lambda_w(&w).unwrap());
        assert_eq!(res.threshold, 0);
        assert_eq!(res.chi.degree(), 2);
    }

    #[test]
    fn origin_kills_everything() {
        let w = wv(&[3, 2]);
        let res = dimension_quasipoly(&ps(2, &[&[0, 0], &[4, 7]]), &w).unwrap();
        assert!(res.chi.is_zero());
        assert_eq!(res.threshold, 0);
        assert_eq!(exact_count_eval(&res, &w, 12).unwrap(), 0);
    }

    #[test]
    fn unit_weights_diagonal_point() {
        // Excluding (1, 1) with unit weights leaves the two axes:
        // 2t + 1 points of order at most t.
        let w = wv(&[1, 1]);
        let res = dimension_quasipoly(&ps(2, &[&[1, 1]]), &w).unwrap();
        assert_eq!(res.chi, qp(&[&[(1, 1)], &[(2, 1)]]));
        assert_eq!(res.threshold, 2);
    }

    #[test]
    fn antichain_guard_trips_on_huge_inputs() {
        let points: Vec<Vec<u64>> = (0..21).map(|i| vec![i, 20 - i]).collect();
        let a = PointSet::new(2, points).unwrap();
        let w = wv(&[1, 1]);
        assert!(matches!(
            dimension_quasipoly(&a, &w),
            Err(Error::SubsetExplosion { size: 21, max: 20 })
        ));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = ps(3, &[&[1, 1, 1]]);
        let w = wv(&[2, 1]);
        assert!(matches!(
            dimension_quasipoly(&a, &w),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        /// The quasi-polynomial agrees with the brute-force count from the
        /// threshold on, and the truncated sum agrees everywhere.
        #[test]
        fn chi_matches_brute_force(
            m in 1usize..=3,
            seed_points in proptest::collection::vec(
                proptest::collection::vec(0u64..=4, 3), 0..4),
            ws in proptest::collection::vec(1u64..=3, 3),
        ) {
            let points: Vec<Vec<u64>> = seed_points
                .iter()
                .map(|p| p[..m].to_vec())
                .collect();
            let a = PointSet::new(m, points).unwrap();
            let w = WeightVector::new(ws[..m].to_vec()).unwrap();
            let res = dimension_quasipoly(&a, &w).unwrap();
            let horizon = (res.threshold as i64 + 12).min(40);
            for r in 0..=horizon {
                let brute = count_va(&a, &w, r).unwrap();
                prop_assert_eq!(exact_count_eval(&res, &w, r).unwrap(), brute);
                if r >= res.threshold as i64 {
                    prop_assert_eq!(res.chi.eval(r), integer(brute as i64));
                }
            }
        }

        /// Reduction to the minimal antichain never changes the result.
        #[test]
        fn dominated_points_are_irrelevant(
            base in proptest::collection::vec(
                proptest::collection::vec(0u64..=3, 2), 1..4),
            bumps in proptest::collection::vec(
                proptest::collection::vec(0u64..=2, 2), 1..4),
            ws in proptest::collection::vec(1u64..=3, 2),
        ) {
            let w = WeightVector::new(ws).unwrap();
            let a = PointSet::new(2, base.clone()).unwrap();
            let mut fat = base.clone();
            for (p, bump) in base.iter().cycle().zip(&bumps) {
                fat.push(vec![p[0] + bump[0], p[1] + bump[1]]);
            }
            let b = PointSet::new(2, fat).unwrap();
            let ra = dimension_quasipoly(&a, &w).unwrap();
            let rb = dimension_quasipoly(&b, &w).unwrap();
            prop_assert_eq!(&ra.chi, &rb.chi);
            prop_assert_eq!(ra.threshold, rb.threshold);
            prop_assert_eq!(&ra.antichain, &rb.antichain);
        }
    }
}
