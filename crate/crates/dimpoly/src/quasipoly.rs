//! Quasi-polynomials with rational periodic coefficients.
//!
//! A quasi-polynomial is `f(n) = c_d(n) n^d + ... + c_1(n) n + c_0(n)` where
//! each coefficient is a [`PeriodicRational`]. The module provides exact
//! arithmetic, argument shift, evaluation, the bracket-notation formatter,
//! and interpolation from a counting function with a mandatory extra-sample
//! self-check.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::exactnum::{coefficient_text, PeriodicRational, Rational};

/// Quasi-polynomial in canonical form.
///
/// Invariants: the coefficient list is non-empty, ordered from degree zero
/// upward, every coefficient is in minimal-period form, and the top
/// coefficient is not identically zero unless the polynomial is zero (which
/// is stored as the single zero coefficient). Structural equality therefore
/// coincides with equality as functions.
#[derive(Clone, PartialEq, Eq)]
pub struct QuasiPolynomial {
    coeffs: Vec<PeriodicRational>,
}

impl QuasiPolynomial {
    /// Build from coefficients `c_0, c_1, ...`, trimming zero leading terms.
    pub fn from_coefficients(coeffs: Vec<PeriodicRational>) -> Self {
        let mut coeffs = coeffs;
        if coeffs.is_empty() {
            coeffs.push(PeriodicRational::zero());
        }
        while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self {
            coeffs: vec![PeriodicRational::zero()],
        }
    }

    pub fn constant(value: Rational) -> Self {
        Self {
            coeffs: vec![PeriodicRational::constant(value)],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    /// Degree of the canonical form; the zero polynomial has degree zero.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Least common period of all coefficients.
    pub fn period(&self) -> usize {
        self.coeffs
            .iter()
            .fold(1, |q, c| num_integer::lcm(q, c.period()))
    }

    /// Coefficient of `n^i`; identically zero above the degree.
    pub fn coefficient(&self, i: usize) -> PeriodicRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(PeriodicRational::zero)
    }

    pub fn coefficients(&self) -> &[PeriodicRational] {
        &self.coeffs
    }

    pub fn leading_coefficient(&self) -> &PeriodicRational {
        self.coeffs.last().unwrap()
    }

    /// Exact value at `n`, by Horner evaluation with the coefficients taken
    /// at `n`'s residue class.
    pub fn eval(&self, n: i64) -> Rational {
        let x = Rational::from_integer(BigInt::from(n));
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &x + c.eval(n);
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, PeriodicRational::add)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, PeriodicRational::sub)
    }

    /// Multiply every coefficient by a fixed rational.
    pub fn scale(&self, factor: &Rational) -> Self {
        Self::from_coefficients(self.coeffs.iter().map(|c| c.scale(factor)).collect())
    }

    /// The function `n -> f(n - shift)`, expanded back into canonical form:
    /// coefficients rotate by the shift and recombine through the binomial
    /// theorem.
    pub fn shifted(&self, shift: u64) -> Self {
        if shift == 0 || self.is_zero() {
            return self.clone();
        }
        let d = self.degree();
        let rotated: Vec<PeriodicRational> =
            self.coeffs.iter().map(|c| c.rotated(shift)).collect();
        let neg_s = -BigInt::from(shift);
        let mut out = vec![PeriodicRational::zero(); d + 1];
        for (i, coeff) in rotated.iter().enumerate() {
            // c_i(n - s) (n - s)^i spreads over degrees k <= i with factor
            // C(i, k) (-s)^(i - k).
            let mut pow = BigInt::one();
            for k in (0..=i).rev() {
                let factor = num_integer::binomial(BigInt::from(i), BigInt::from(k)) * &pow;
                out[k] = out[k].add(&coeff.scale(&Rational::from_integer(factor)));
                pow *= &neg_s;
            }
        }
        Self::from_coefficients(out)
    }

    fn combine(
        &self,
        other: &Self,
        op: impl Fn(&PeriodicRational, &PeriodicRational) -> PeriodicRational,
    ) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| op(&self.coefficient(i), &other.coefficient(i)))
            .collect();
        Self::from_coefficients(coeffs)
    }

    /// Bracket-notation text, highest degree first, e.g.
    /// `(1/4) t^2 + t + [1, 3/4]_t`.
    pub fn format_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for i in (0..=self.degree()).rev() {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            let (negative, body) = term_text(c, i, var);
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
                out.push_str(&body);
            } else {
                out.push_str(if negative { " - " } else { " + " });
                out.push_str(&body);
            }
        }
        out
    }

    /// Interpolate a quasi-polynomial of degree at most `degree_bound` and
    /// period dividing `period` from an exact counting function, then verify
    /// it against extra samples well past the solve window.
    ///
    /// For each residue class mod `period`, the `degree_bound + 1` smallest
    /// arguments `>= base` in that class feed a Vandermonde system, solved by
    /// fraction-free Gaussian elimination. The counting function is consulted
    /// sequentially. If the hypothesis (degree, period, validity from `base`)
    /// does not hold, the self-check fails with
    /// [`Error::HypothesisViolated`] rather than returning a bad fit.
    pub fn interpolate<F>(
        mut counter: F,
        degree_bound: usize,
        period: usize,
        base: i64,
    ) -> Result<Self, Error>
    where
        F: FnMut(i64) -> Result<BigInt, Error>,
    {
        assert!(period > 0, "period must be positive");
        let m = degree_bound;
        let mut per_class: Vec<Vec<Rational>> = Vec::with_capacity(period);
        for class in 0..period as i64 {
            let start = base + (class - base).rem_euclid(period as i64);
            let mut system: Vec<Vec<BigInt>> = Vec::with_capacity(m + 1);
            for j in 0..=m {
                let t = start + (j * period) as i64;
                let mut row: Vec<BigInt> = Vec::with_capacity(m + 2);
                let mut pow = BigInt::one();
                for _ in 0..=m {
                    row.push(pow.clone());
                    pow *= t;
                }
                row.push(counter(t)?);
                system.push(row);
            }
            per_class.push(solve_fraction_free(system).ok_or(Error::SingularSystem)?);
        }
        let coeffs = (0..=m)
            .map(|i| {
                PeriodicRational::new(per_class.iter().map(|sol| sol[i].clone()).collect())
            })
            .collect();
        let qp = Self::from_coefficients(coeffs);

        // Self-check on fresh samples: the solve window ends near
        // base + (m+1)q, so this covers more than m+2 extra periods.
        for n in base..=base + ((2 * m + 3) * period) as i64 {
            let counted = counter(n)?;
            let interpolated = qp.eval(n);
            if interpolated != Rational::from_integer(counted.clone()) {
                return Err(Error::HypothesisViolated {
                    argument: n,
                    interpolant: interpolated.to_string(),
                    counted: counted.to_string(),
                });
            }
        }
        Ok(qp)
    }
}

/// One formatted term: sign flag and body like `(1/4) t^2` or `[1, 3/4]_t`.
fn term_text(c: &PeriodicRational, degree: usize, var: &str) -> (bool, String) {
    let power = match degree {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{degree}"),
    };
    match c.as_constant() {
        Some(value) => {
            let negative = value < &Rational::zero();
            let magnitude = if negative { -value } else { value.clone() };
            let body = if degree == 0 {
                coefficient_text(&magnitude)
            } else if magnitude.is_one() {
                power
            } else {
                format!("{} {power}", coefficient_text(&magnitude))
            };
            (negative, body)
        }
        None => {
            // Mixed-sign value lists stay inside the brackets.
            let brackets = format!("{c}_{var}");
            let body = if degree == 0 {
                brackets
            } else {
                format!("{brackets} {power}")
            };
            (false, body)
        }
    }
}

/// Solve an `n x (n+1)` augmented integer system exactly via Bareiss
/// fraction-free elimination; `None` when singular.
fn solve_fraction_free(mut a: Vec<Vec<BigInt>>) -> Option<Vec<Rational>> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n + 1));
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n).find(|&r| !a[r][k].is_zero())?;
        a.swap(k, pivot);
        for i in k + 1..n {
            for j in k + 1..=n {
                let num = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from_integer(a[i][n].clone());
        for j in i + 1..n {
            acc -= Rational::from_integer(a[i][j].clone()) * &x[j];
        }
        x[i] = acc / Rational::from_integer(a[i][i].clone());
    }
    Some(x)
}

impl fmt::Display for QuasiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with("t"))
    }
}

impl fmt::Debug for QuasiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuasiPolynomial({self})")
    }
}

impl Serialize for QuasiPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("QuasiPolynomial", 3)?;
        s.serialize_field("degree", &self.degree())?;
        s.serialize_field("period", &self.period())?;
        s.serialize_field("coefficients", &self.coeffs)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for QuasiPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            degree: usize,
            period: usize,
            coefficients: Vec<PeriodicRational>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let qp = QuasiPolynomial::from_coefficients(raw.coefficients);
        if qp.degree() != raw.degree {
            return Err(D::Error::custom(format!(
                "declared degree {} but canonical degree is {}",
                raw.degree,
                qp.degree()
            )));
        }
        if qp.period() != raw.period {
            return Err(D::Error::custom(format!(
                "declared period {} but canonical period is {}",
                raw.period,
                qp.period()
            )));
        }
        Ok(qp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{integer, ratio};
    use proptest::prelude::*;

    fn pr(values: &[(i64, i64)]) -> PeriodicRational {
        PeriodicRational::new(values.iter().map(|&(n, d)| ratio(n, d)).collect())
    }

    fn qp(coeffs: &[&[(i64, i64)]]) -> QuasiPolynomial {
        QuasiPolynomial::from_coefficients(coeffs.iter().map(|c| pr(c)).collect())
    }

    /// Count of {(x, y) in N^2 : 2x + y <= t}, the running weighted-simplex
    /// example; its quasi-polynomial is (1/4) t^2 + t + [1, 3/4]_t.
    fn simplex_21(t: i64) -> BigInt {
        if t < 0 {
            return BigInt::zero();
        }
        let mut count = 0i64;
        for x in 0..=(t / 2) {
            count += t - 2 * x + 1;
        }
        BigInt::from(count)
    }

    fn lambda_21() -> QuasiPolynomial {
        qp(&[&[(1, 1), (3, 4)], &[(1, 1)], &[(1, 4)]])
    }

    #[test]
    fn canonical_form_trims_zero_leading_coefficients() {
        let f = QuasiPolynomial::from_coefficients(vec![
            pr(&[(1, 1)]),
            PeriodicRational::zero(),
            PeriodicRational::zero(),
        ]);
        assert_eq!(f.degree(), 0);
        assert!(QuasiPolynomial::zero().is_zero());
        assert_eq!(QuasiPolynomial::zero().degree(), 0);
    }

    #[test]
    fn eval_takes_coefficients_at_the_residue_class() {
        let f = lambda_21();
        let values: Vec<Rational> = (0..=8).map(|t| f.eval(t)).collect();
        let expected = [1, 2, 4, 6, 9, 12, 16, 20, 25];
        for (got, want) in values.iter().zip(expected) {
            assert_eq!(got, &integer(want));
        }
    }

    #[test]
    fn arithmetic_is_coefficientwise() {
        // (t + [0,1]_t) + (t + 1) has coefficient [1,2]_t and degree 1.
        let a = qp(&[&[(0, 1), (1, 1)], &[(1, 1)]]);
        let b = qp(&[&[(1, 1)], &[(1, 1)]]);
        let sum = a.add(&b);
        assert_eq!(sum, qp(&[&[(1, 1), (2, 1)], &[(2, 1)]]));
        // Subtraction cancels the degree-1 part entirely.
        let diff = a.sub(&b);
        assert_eq!(diff.degree(), 0);
        assert_eq!(diff, qp(&[&[(-1, 1), (0, 1)]]));
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn inclusion_exclusion_of_shifts_matches_the_dimension_example() {
        // lambda - lambda(t-3) - lambda(t-5) + lambda(t-7) = (1/2) t + [5, 9/2]_t.
        let f = lambda_21();
        let combined = f
            .sub(&f.shifted(3))
            .sub(&f.shifted(5))
            .add(&f.shifted(7));
        assert_eq!(combined, qp(&[&[(5, 1), (9, 2)], &[(1, 2)]]));
    }

    #[test]
    fn shift_rewrites_the_argument() {
        let f = lambda_21();
        let g = f.shifted(3);
        // g(n) = f(n - 3); the count of {2x + y <= 5} is 12, so g(8) = 12.
        assert_eq!(g.eval(8), integer(12));
        for n in -5..20 {
            assert_eq!(g.eval(n), f.eval(n - 3));
        }
        // t + 1 shifted by 2 is t - 1.
        let line = qp(&[&[(1, 1)], &[(1, 1)]]);
        assert_eq!(line.shifted(2), qp(&[&[(-1, 1)], &[(1, 1)]]));
        assert_eq!(line.shifted(2).format_with("t"), "t - 1");
    }

    #[test]
    fn shift_by_zero_is_identity_and_shifts_compose() {
        let f = lambda_21();
        assert_eq!(f.shifted(0), f);
        assert_eq!(f.shifted(2).shifted(3), f.shifted(5));
    }

    #[test]
    fn format_matches_bracket_notation() {
        assert_eq!(
            lambda_21().format_with("t"),
            "(1/4) t^2 + t + [1, 3/4]_t"
        );
        assert_eq!(
            qp(&[&[(5, 1), (9, 2)], &[(1, 2)]]).format_with("t"),
            "(1/2) t + [5, 9/2]_t"
        );
        assert_eq!(qp(&[&[(1, 1)], &[(1, 1)]]).format_with("t"), "t + 1");
        assert_eq!(QuasiPolynomial::zero().format_with("t"), "0");
        assert_eq!(
            qp(&[&[(0, 1)], &[(-2, 1)], &[(1, 1), (1, 2)]]).format_with("r"),
            "[1, 1/2]_r r^2 - 2 r"
        );
    }

    #[test]
    fn interpolation_recovers_the_weighted_simplex_polynomial() {
        let f = QuasiPolynomial::interpolate(|t| Ok(simplex_21(t)), 2, 2, 0).unwrap();
        assert_eq!(f, lambda_21());
    }

    #[test]
    fn interpolation_recovers_a_polytope_quasi_polynomial() {
        // Dilations of {x >= 0, y >= 0, x + y <= 3, 2x <= 5}: direct double
        // loop as the counting oracle. The quadratic coefficient must equal
        // the region's area, 35/8; a commonly misprinted value for this
        // example, 38/5, fails both the sample equations and the area law.
        let counter = |r: i64| {
            let mut count = 0i64;
            for x in 0..=(5 * r) / 2 {
                for y in 0..=(3 * r - x).max(-1) {
                    if x + y <= 3 * r && 2 * x <= 5 * r {
                        count += 1;
                    }
                }
            }
            Ok(BigInt::from(count))
        };
        let f = QuasiPolynomial::interpolate(counter, 2, 2, 0).unwrap();
        assert_eq!(
            f,
            qp(&[&[(1, 1), (5, 8)], &[(17, 4), (4, 1)], &[(35, 8)]])
        );
        let counts: Vec<Rational> = (0..=4).map(|r| f.eval(r)).collect();
        let expected = [1, 9, 27, 52, 88];
        for (got, want) in counts.iter().zip(expected) {
            assert_eq!(got, &integer(want));
        }
    }

    #[test]
    fn interpolation_rejects_a_wrong_hypothesis() {
        // 2^n is no quasi-polynomial of degree <= 2; the self-check must
        // catch it rather than return the bad fit.
        let err = QuasiPolynomial::interpolate(|t| Ok(BigInt::from(1i64 << t)), 2, 1, 0)
            .unwrap_err();
        assert!(matches!(err, Error::HypothesisViolated { .. }));

        // Period-3 behavior declared as period 2 must also fail.
        let err = QuasiPolynomial::interpolate(|t| Ok(BigInt::from(t.rem_euclid(3))), 1, 2, 0)
            .unwrap_err();
        assert!(matches!(err, Error::HypothesisViolated { .. }));
    }

    #[test]
    fn interpolation_propagates_counter_errors() {
        let err = QuasiPolynomial::interpolate(
            |_| Err(Error::EnumerationCapExceeded { required: 10, cap: 1 }),
            1,
            1,
            0,
        )
        .unwrap_err();
        assert!(matches!(err, Error::EnumerationCapExceeded { .. }));
    }

    #[test]
    fn serde_matches_the_documented_schema() {
        let f = qp(&[&[(5, 1), (9, 2)], &[(1, 2)]]);
        let json = serde_json::to_value(&f).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "degree": 1,
                "period": 2,
                "coefficients": [["5", "9/2"], ["1/2"]],
            })
        );
        let back: QuasiPolynomial = serde_json::from_value(json).unwrap();
        assert_eq!(back, f);

        // Inconsistent metadata is rejected.
        let bad = serde_json::json!({
            "degree": 2,
            "period": 2,
            "coefficients": [["5", "9/2"], ["1/2"]],
        });
        assert!(serde_json::from_value::<QuasiPolynomial>(bad).is_err());
    }

    fn arb_qp() -> impl Strategy<Value = QuasiPolynomial> {
        prop::collection::vec(
            prop::collection::vec((-9i64..=9, 1i64..=6), 1..=4),
            1..=4,
        )
        .prop_map(|cs| {
            QuasiPolynomial::from_coefficients(
                cs.into_iter()
                    .map(|c| PeriodicRational::new(c.into_iter().map(|(n, d)| ratio(n, d)).collect()))
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn add_and_sub_are_pointwise(a in arb_qp(), b in arb_qp(), n in -50i64..50) {
            prop_assert_eq!(a.add(&b).eval(n), a.eval(n) + b.eval(n));
            prop_assert_eq!(a.sub(&b).eval(n), a.eval(n) - b.eval(n));
        }

        #[test]
        fn shift_is_argument_substitution(f in arb_qp(), s in 0u64..8, n in -40i64..40) {
            prop_assert_eq!(f.shifted(s).eval(n), f.eval(n - s as i64));
        }

        #[test]
        fn shift_preserves_degree_and_composes(f in arb_qp(), s1 in 0u64..6, s2 in 0u64..6) {
            prop_assert_eq!(f.shifted(s1).degree(), f.degree());
            prop_assert_eq!(f.shifted(s1).shifted(s2), f.shifted(s1 + s2));
        }

        #[test]
        fn shift_fixes_constant_leading_coefficients(f in arb_qp(), s in 0u64..6) {
            // The leading coefficient rotates under shift; when it is
            // constant (as for every counting polynomial here) it is fixed.
            prop_assume!(f.leading_coefficient().as_constant().is_some());
            let shifted = f.shifted(s);
            prop_assert_eq!(shifted.leading_coefficient(), f.leading_coefficient());
        }

        #[test]
        fn scale_multiplies_values(f in arb_qp(), num in -6i64..=6, den in 1i64..=4, n in -30i64..30) {
            let c = ratio(num, den);
            prop_assert_eq!(f.scale(&c).eval(n), f.eval(n) * &c);
        }
    }
}
