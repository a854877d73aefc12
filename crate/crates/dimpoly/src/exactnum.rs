//! Exact rational scalars and rational periodic numbers.
//!
//! Everything downstream is built from two number types: [`Rational`], an
//! arbitrary-precision fraction, and [`PeriodicRational`], a function
//! `Z -> Q` that is constant on residue classes modulo its period. Periodic
//! rationals are the coefficients of quasi-polynomials; all arithmetic here
//! is exact, there is no floating point anywhere in the crate.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

pub use num_bigint::BigInt;

/// Exact arbitrary-precision fraction. Always stored reduced, with a
/// positive denominator; `to_string()` gives `"35/8"`, `"-3/4"`, `"5"`.
pub type Rational = num_rational::BigRational;

/// Rational from a small numerator/denominator pair.
///
/// Panics if `denom` is zero; intended for literals, not user input
/// (use [`parse_rational`] for that).
pub fn ratio(numer: i64, denom: i64) -> Rational {
    assert!(denom != 0, "zero denominator");
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Rational with denominator one.
pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parse `"p/q"` or `"p"` with optional sign into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let bad = || Error::InvalidRational {
        input: s.to_string(),
    };
    let trimmed = s.trim();
    let (numer, denom) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (trimmed, None),
    };
    let n: BigInt = numer.parse().map_err(|_| bad())?;
    let d: BigInt = match denom {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// A rational periodic number: a function `Z -> Q` constant on residue
/// classes modulo its period, stored as the value list `[a_0, ..., a_{q-1}]`
/// where `a_i` is the value on arguments congruent to `i` mod `q`.
///
/// Invariant: the value list is non-empty and the stored period is minimal,
/// so two periodic numbers are equal as functions iff they are structurally
/// equal. A constant is exactly a periodic number of period one.
#[derive(Clone, PartialEq, Eq)]
pub struct PeriodicRational {
    values: Vec<Rational>,
}

impl PeriodicRational {
    /// Build from one full period of values, canonicalizing to the minimal
    /// period. Panics on an empty list.
    pub fn new(values: Vec<Rational>) -> Self {
        assert!(!values.is_empty(), "periodic number needs at least one value");
        Self {
            values: normalize(values),
        }
    }

    /// The constant function `n -> value`.
    pub fn constant(value: Rational) -> Self {
        Self {
            values: vec![value],
        }
    }

    /// The identically-zero periodic number.
    pub fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    /// Minimal period `q >= 1`.
    pub fn period(&self) -> usize {
        self.values.len()
    }

    /// One full period of values, `a_0` first.
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Value at `n`; negative arguments use the representative in
    /// `{0, ..., q-1}`, so the function is defined on all of `Z`.
    pub fn eval(&self, n: i64) -> &Rational {
        let q = self.values.len() as i64;
        &self.values[n.rem_euclid(q) as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.values.len() == 1 && self.values[0].is_zero()
    }

    /// The constant value if the period is one.
    pub fn as_constant(&self) -> Option<&Rational> {
        if self.values.len() == 1 {
            Some(&self.values[0])
        } else {
            None
        }
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
    }

    /// Pointwise difference.
    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a - b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a * b)
    }

    /// Multiply every value by a fixed rational.
    pub fn scale(&self, factor: &Rational) -> Self {
        Self::new(self.values.iter().map(|v| v * factor).collect())
    }

    /// The function `n -> self(n - shift)`: a cyclic rotation of the value
    /// list. This is what happens to a quasi-polynomial coefficient under
    /// argument shift.
    pub fn rotated(&self, shift: u64) -> Self {
        let q = self.values.len();
        let s = (shift % q as u64) as usize;
        let values = (0..q)
            .map(|i| self.values[(i + q - s) % q].clone())
            .collect();
        // Rotation cannot shrink the minimal period, but normalizing again
        // keeps the invariant self-evident.
        Self::new(values)
    }

    fn combine(&self, other: &Self, op: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let q = num_integer::lcm(self.values.len(), other.values.len());
        let values = (0..q)
            .map(|i| {
                op(
                    &self.values[i % self.values.len()],
                    &other.values[i % other.values.len()],
                )
            })
            .collect();
        Self::new(values)
    }
}

/// Truncate to the smallest divisor period that reproduces every value.
fn normalize(values: Vec<Rational>) -> Vec<Rational> {
    let q = values.len();
    for cand in 1..q {
        if q.is_multiple_of(cand) && (0..q).all(|i| values[i] == values[i % cand]) {
            return values[..cand].to_vec();
        }
    }
    values
}

impl fmt::Display for PeriodicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for PeriodicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PeriodicRational{self}")
    }
}

impl Serialize for PeriodicRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.values.iter().map(|v| v.to_string()))
    }
}

impl<'de> Deserialize<'de> for PeriodicRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(deserializer)?;
        if raw.is_empty() {
            return Err(D::Error::custom("periodic number needs at least one value"));
        }
        let values = raw
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        Ok(Self::new(values))
    }
}

/// Format a rational as a quasi-polynomial coefficient: integers bare,
/// proper fractions parenthesized.
pub(crate) fn coefficient_text(r: &Rational) -> String {
    if r.is_integer() {
        r.to_string()
    } else if r.is_negative() {
        format!("-({})", -r)
    } else {
        format!("({r})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pr(values: &[(i64, i64)]) -> PeriodicRational {
        PeriodicRational::new(values.iter().map(|&(n, d)| ratio(n, d)).collect())
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["35/8", "-3/4", "5", "0", "-12"] {
            assert_eq!(parse_rational(s).unwrap().to_string(), s);
        }
        assert_eq!(parse_rational(" 6/8 ").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational("3/-6").unwrap(), ratio(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("a/b").is_err());
    }

    #[test]
    fn normalization_finds_minimal_period() {
        assert_eq!(pr(&[(1, 1), (1, 1)]), pr(&[(1, 1)]));
        assert_eq!(pr(&[(1, 2), (3, 4), (1, 1)]).period(), 3);
        assert_eq!(pr(&[(2, 1), (5, 1), (2, 1), (5, 1)]), pr(&[(2, 1), (5, 1)]));
    }

    #[test]
    fn arithmetic_is_pointwise_over_the_lcm_period() {
        let a = pr(&[(1, 1)]);
        let b = pr(&[(0, 1), (1, 1)]);
        assert_eq!(a.add(&b), pr(&[(1, 1), (2, 1)]));

        let two = pr(&[(2, 1)]);
        let c = pr(&[(1, 2), (3, 4), (1, 1)]);
        assert_eq!(two.mul(&c), pr(&[(1, 1), (3, 2), (2, 1)]));

        let d = pr(&[(1, 2), (3, 4)]);
        assert!(d.sub(&d).is_zero());
        assert_eq!(d.sub(&d).period(), 1);
    }

    #[test]
    fn eval_uses_euclidean_residues() {
        let p = pr(&[(1, 2), (3, 4), (1, 1)]);
        assert_eq!(*p.eval(4), ratio(3, 4));
        assert_eq!(*p.eval(-5), *p.eval(1));
        let c = pr(&[(7, 1)]);
        assert_eq!(*c.eval(-5), ratio(7, 1));
        let q = pr(&[(1, 1), (3, 4)]);
        assert_eq!(*q.eval(3), ratio(3, 4));
    }

    #[test]
    fn rotation_shifts_the_argument() {
        let p = pr(&[(1, 1), (3, 4)]);
        assert_eq!(p.rotated(1), pr(&[(3, 4), (1, 1)]));
        assert_eq!(p.rotated(2), p);
        let c = pr(&[(5, 1)]);
        assert_eq!(c.rotated(3), c);
    }

    #[test]
    fn display_uses_bracket_notation() {
        assert_eq!(pr(&[(5, 1), (9, 2)]).to_string(), "[5, 9/2]");
        assert_eq!(pr(&[(1, 4)]).to_string(), "[1/4]");
    }

    #[test]
    fn serde_round_trips_fraction_strings() {
        let p = pr(&[(1, 2), (3, 4), (1, 1)]);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"["1/2","3/4","1"]"#);
        let back: PeriodicRational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);

        // Non-minimal input canonicalizes on the way in.
        let padded: PeriodicRational = serde_json::from_str(r#"["2","2"]"#).unwrap();
        assert_eq!(padded.period(), 1);
        assert!(serde_json::from_str::<PeriodicRational>("[]").is_err());
        assert!(serde_json::from_str::<PeriodicRational>(r#"["1/0"]"#).is_err());
    }

    fn arb_periodic() -> impl Strategy<Value = PeriodicRational> {
        prop::collection::vec((-20i64..=20, 1i64..=12), 1..=6)
            .prop_map(|vs| PeriodicRational::new(vs.into_iter().map(|(n, d)| ratio(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn add_matches_pointwise_semantics(a in arb_periodic(), b in arb_periodic(), n in -60i64..60) {
            let sum = a.add(&b);
            prop_assert_eq!(sum.eval(n).clone(), a.eval(n) + b.eval(n));
        }

        #[test]
        fn mul_matches_pointwise_semantics(a in arb_periodic(), b in arb_periodic(), n in -60i64..60) {
            let prod = a.mul(&b);
            prop_assert_eq!(prod.eval(n).clone(), a.eval(n) * b.eval(n));
        }

        #[test]
        fn normalization_preserves_every_value(a in arb_periodic(), k in 1usize..4) {
            // Repeating the value list k times describes the same function.
            let mut repeated = Vec::new();
            for _ in 0..k {
                repeated.extend_from_slice(a.values());
            }
            let b = PeriodicRational::new(repeated);
            prop_assert_eq!(&a, &b);
            for n in -10..10 {
                prop_assert_eq!(a.eval(n), b.eval(n));
            }
        }

        #[test]
        fn equal_functions_are_structurally_equal(a in arb_periodic(), b in arb_periodic()) {
            let q = num_integer::lcm(a.period(), b.period()) as i64;
            let agree = (0..q).all(|n| a.eval(n) == b.eval(n));
            prop_assert_eq!(agree, a == b);
        }

        #[test]
        fn rotation_composes_and_shifts(a in arb_periodic(), s in 0u64..10, n in -40i64..40) {
            prop_assert_eq!(a.rotated(s).eval(n).clone(), a.eval(n - s as i64).clone());
        }
    }
}
