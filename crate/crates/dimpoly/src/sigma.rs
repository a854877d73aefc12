//! Linear difference systems under commuting weighted translations.
//!
//! Terms are translated indeterminates `s1^k1 ... sm^km y_j`, ranked first
//! by weighted order, then lexicographically by exponents, then by
//! indeterminate index. A linear system is completed to a characteristic
//! set: a basis whose leaders generate all leaders of the module, pairwise
//! autoreduced. The exponent sets of the leaders, one per indeterminate,
//! then feed the lattice counting machinery: the number of terms of order
//! at most `r` that are reducible by no leader is eventually a
//! quasi-polynomial in `r`, and its sum over the indeterminates measures
//! the size of a solution of the system.

use serde::Deserialize;
use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::Error;
use crate::exactnum::{coefficient_text, parse_rational, Rational};
use crate::kolchin::{dimension_quasipoly, DimensionResult, PointSet};
use crate::latcount::WeightVector;
use crate::quasipoly::QuasiPolynomial;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A translated indeterminate: the product `s1^k1 ... sm^km` applied to
/// `y_{j+1}`. The derived ordering is for storage only; all ranking
/// comparisons go through [`Ranking::term_compare`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    pub exponents: Vec<u64>,
    pub indeterminate: usize,
}

impl Term {
    pub fn new(exponents: Vec<u64>, indeterminate: usize) -> Self {
        Term {
            exponents,
            indeterminate,
        }
    }

    fn translated(&self, shift: &[u64]) -> Term {
        debug_assert_eq!(shift.len(), self.exponents.len());
        Term {
            exponents: self
                .exponents
                .iter()
                .zip(shift)
                .map(|(e, s)| e + s)
                .collect(),
            indeterminate: self.indeterminate,
        }
    }

    /// Whether `self` divides `other`: same indeterminate and componentwise
    /// smaller exponents, so that a translation maps one to the other.
    pub fn divides(&self, other: &Term) -> bool {
        self.indeterminate == other.indeterminate
            && self
                .exponents
                .iter()
                .zip(&other.exponents)
                .all(|(a, b)| a <= b)
    }
}

/// The term ranking: weighted order first, then exponents
/// lexicographically, then the indeterminate index.
#[derive(Clone, Debug)]
pub struct Ranking {
    weights: WeightVector,
    indeterminates: usize,
}

impl Ranking {
    pub fn new(weights: WeightVector, indeterminates: usize) -> Result<Self, Error> {
        if indeterminates == 0 {
            return Err(Error::InvalidInput(
                "a system needs at least one indeterminate".into(),
            ));
        }
        Ok(Ranking {
            weights,
            indeterminates,
        })
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn indeterminates(&self) -> usize {
        self.indeterminates
    }

    /// The weighted order of a term.
    pub fn order(&self, term: &Term) -> u64 {
        debug_assert_eq!(term.exponents.len(), self.weights.dimension());
        term.exponents
            .iter()
            .zip(self.weights.weights())
            .map(|(&e, &w)| e * w)
            .sum()
    }

    /// Validate a term against this ranking's dimensions.
    pub fn check_term(&self, term: &Term) -> Result<(), Error> {
        if term.exponents.len() != self.weights.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.dimension(),
                found: term.exponents.len(),
            });
        }
        if term.indeterminate >= self.indeterminates {
            return Err(Error::InvalidInput(format!(
                "indeterminate index {} out of range for {} indeterminates",
                term.indeterminate, self.indeterminates
            )));
        }
        Ok(())
    }

    /// Compare two terms of matching dimension under the ranking.
    pub fn term_compare(&self, a: &Term, b: &Term) -> Ordering {
        self.order(a)
            .cmp(&self.order(b))
            .then_with(|| a.exponents.cmp(&b.exponents))
            .then_with(|| a.indeterminate.cmp(&b.indeterminate))
    }
}

/// A linear difference polynomial: a rational combination of translated
/// indeterminates. Translations fix the coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSigmaPolynomial {
    terms: BTreeMap<Term, Rational>,
}

impl LinearSigmaPolynomial {
    /// Build from term-coefficient pairs; repeated terms are summed and
    /// zero coefficients dropped.
    pub fn new(pairs: Vec<(Term, Rational)>) -> Self {
        let mut terms: BTreeMap<Term, Rational> = BTreeMap::new();
        for (t, c) in pairs {
            let entry = terms.entry(t).or_insert_with(Rational::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        LinearSigmaPolynomial { terms }
    }

    pub fn zero() -> Self {
        LinearSigmaPolynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Term, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, term: &Term) -> Option<&Rational> {
        self.terms.get(term)
    }

    /// The highest-ranked term.
    pub fn leader(&self, rk: &Ranking) -> Result<&Term, Error> {
        self.terms
            .keys()
            .max_by(|a, b| rk.term_compare(a, b))
            .ok_or(Error::ZeroPolynomial)
    }

    /// The coefficient of the leader.
    pub fn initial(&self, rk: &Ranking) -> Result<&Rational, Error> {
        let leader = self.leader(rk)?;
        Ok(&self.terms[leader])
    }

    /// Divide through by the initial so the leader has coefficient one.
    pub fn normalized(&self, rk: &Ranking) -> Result<Self, Error> {
        let init = self.initial(rk)?.clone();
        Ok(self.scale(&(Rational::one() / init)))
    }

    /// Apply the translation `s1^shift1 ... sm^shiftm` to every term.
    pub fn translated(&self, shift: &[u64]) -> Self {
        LinearSigmaPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (t.translated(shift), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        LinearSigmaPolynomial {
            terms: self.terms.iter().map(|(t, c)| (t.clone(), c * factor)).collect(),
        }
    }

    /// `self + factor * other`.
    pub fn add_scaled(&self, other: &Self, factor: &Rational) -> Self {
        let mut terms = self.terms.clone();
        for (t, c) in &other.terms {
            let entry = terms.entry(t.clone()).or_insert_with(Rational::zero);
            *entry += c * factor;
        }
        terms.retain(|_, c| !c.is_zero());
        LinearSigmaPolynomial { terms }
    }

    /// Render with terms in descending rank, translations as `s1, s2, ...`
    /// and indeterminates as `y1, y2, ...`.
    pub fn format(&self, rk: &Ranking) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Term, &Rational)> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| rk.term_compare(b, a));
        let mut out = String::new();
        for (idx, (t, c)) in terms.iter().enumerate() {
            let negative = c.is_negative();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else if negative {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let magnitude = c.abs();
            if !magnitude.is_one() {
                out.push_str(&coefficient_text(&magnitude));
                out.push(' ');
            }
            out.push_str(&monomial_text(t));
        }
        out
    }
}

fn monomial_text(t: &Term) -> String {
    let mut parts = Vec::new();
    for (i, &e) in t.exponents.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("s{}", i + 1)),
            _ => parts.push(format!("s{}^{}", i + 1, e)),
        }
    }
    parts.push(format!("y{}", t.indeterminate + 1));
    parts.join(" ")
}

/// Fully reduce `f` by the set: while some term of `f` is a translation of
/// a leader of some element, cancel the highest such term against the
/// first matching element. The result has no term divisible by any leader.
pub fn reduce(
    f: &LinearSigmaPolynomial,
    set: &[LinearSigmaPolynomial],
    rk: &Ranking,
) -> Result<LinearSigmaPolynomial, Error> {
    let heads: Vec<(Term, Rational)> = set
        .iter()
        .map(|g| Ok((g.leader(rk)?.clone(), g.initial(rk)?.clone())))
        .collect::<Result<_, Error>>()?;
    let mut current = f.clone();
    loop {
        let mut step: Option<(Rational, usize, Vec<u64>)> = None;
        let mut keys: Vec<&Term> = current.terms.keys().collect();
        keys.sort_by(|a, b| rk.term_compare(b, a));
        'scan: for t in keys {
            for (gi, (lead, _)) in heads.iter().enumerate() {
                if lead.divides(t) {
                    let shift: Vec<u64> = t
                        .exponents
                        .iter()
                        .zip(&lead.exponents)
                        .map(|(e, l)| e - l)
                        .collect();
                    step = Some((current.terms[t].clone(), gi, shift));
                    break 'scan;
                }
            }
        }
        let Some((coef, gi, shift)) = step else {
            return Ok(current);
        };
        let factor = -(coef / &heads[gi].1);
        current = current.add_scaled(&set[gi].translated(&shift), &factor);
    }
}

/// The cross-multiplied difference of two polynomials whose leaders share
/// an indeterminate, translated to the componentwise maximum of the two
/// leader exponents; the common leader image cancels.
fn s_polynomial(
    f: &LinearSigmaPolynomial,
    g: &LinearSigmaPolynomial,
    rk: &Ranking,
) -> Result<LinearSigmaPolynomial, Error> {
    let lf = f.leader(rk)?.clone();
    let lg = g.leader(rk)?.clone();
    debug_assert_eq!(lf.indeterminate, lg.indeterminate);
    let lcm: Vec<u64> = lf
        .exponents
        .iter()
        .zip(&lg.exponents)
        .map(|(a, b)| *a.max(b))
        .collect();
    let shift_f: Vec<u64> = lcm.iter().zip(&lf.exponents).map(|(l, e)| l - e).collect();
    let shift_g: Vec<u64> = lcm.iter().zip(&lg.exponents).map(|(l, e)| l - e).collect();
    let init_f = f.initial(rk)?.clone();
    let init_g = g.initial(rk)?.clone();
    let a = f.translated(&shift_f).scale(&(Rational::one() / init_f));
    let b = g.translated(&shift_g);
    Ok(a.add_scaled(&b, &(-(Rational::one() / init_g))))
}

/// A completed, autoreduced basis together with its leader exponent sets,
/// one per indeterminate, each a minimal antichain.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacteristicSet {
    elements: Vec<LinearSigmaPolynomial>,
    leader_sets: Vec<PointSet>,
}

impl CharacteristicSet {
    /// The basis elements, normalized, sorted by leader rank.
    pub fn elements(&self) -> &[LinearSigmaPolynomial] {
        &self.elements
    }

    /// Leader exponent sets indexed by indeterminate.
    pub fn leader_sets(&self) -> &[PointSet] {
        &self.leader_sets
    }
}

/// Complete a linear system to a characteristic set.
///
/// Pairs of basis elements whose leaders share an indeterminate are
/// cross-multiplied, reduced, and kept when nonzero, smallest common
/// leader first; once no pair survives reduction, the basis is
/// autoreduced to a fixpoint and sorted by leader rank. Every leader of
/// the module generated by the input is then a translation of a basis
/// leader, which is what the counting functions need.
pub fn characteristic_set(
    generators: &[LinearSigmaPolynomial],
    rk: &Ranking,
) -> Result<CharacteristicSet, Error> {
    for g in generators {
        if g.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        for (t, _) in g.terms() {
            rk.check_term(t)?;
        }
    }

    let mut basis: Vec<LinearSigmaPolynomial> = Vec::new();
    for g in generators {
        let h = reduce(g, &basis, rk)?;
        if !h.is_zero() {
            basis.push(h.normalized(rk)?);
        }
    }

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let same_ind = |basis: &[LinearSigmaPolynomial], i: usize, j: usize| -> Result<bool, Error> {
        Ok(basis[i].leader(rk)?.indeterminate == basis[j].leader(rk)?.indeterminate)
    };
    for j in 0..basis.len() {
        for i in 0..j {
            if same_ind(&basis, i, j)? {
                pairs.push((i, j));
            }
        }
    }
    while !pairs.is_empty() {
        let mut best = 0;
        let mut best_key = pair_lcm(&basis, pairs[0], rk)?;
        for (idx, &pair) in pairs.iter().enumerate().skip(1) {
            let key = pair_lcm(&basis, pair, rk)?;
            if rk.term_compare(&key, &best_key) == Ordering::Less
                || (rk.term_compare(&key, &best_key) == Ordering::Equal && pair < pairs[best])
            {
                best = idx;
                best_key = key;
            }
        }
        let (i, j) = pairs.remove(best);
        let s = s_polynomial(&basis[i], &basis[j], rk)?;
        if s.is_zero() {
            continue;
        }
        let h = reduce(&s, &basis, rk)?;
        if h.is_zero() {
            continue;
        }
        let h = h.normalized(rk)?;
        let k = basis.len();
        basis.push(h);
        for i in 0..k {
            if same_ind(&basis, i, k)? {
                pairs.push((i, k));
            }
        }
    }

    // Autoreduce to a fixpoint: every element ends up irreducible by the
    // others, and elements swallowed entirely drop out.
    loop {
        let mut changed = false;
        for i in 0..basis.len() {
            let others: Vec<LinearSigmaPolynomial> = basis
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, g)| g.clone())
                .collect();
            let h = reduce(&basis[i], &others, rk)?;
            if h.is_zero() {
                basis.remove(i);
                changed = true;
                break;
            }
            let h = h.normalized(rk)?;
            if h != basis[i] {
                basis[i] = h;
                changed = true;
                break;
            }
        }
        if !changed {
            break;
        }
    }

    let mut keyed: Vec<(Term, LinearSigmaPolynomial)> = basis
        .into_iter()
        .map(|g| Ok((g.leader(rk)?.clone(), g)))
        .collect::<Result<_, Error>>()?;
    keyed.sort_by(|(a, _), (b, _)| rk.term_compare(a, b));

    let mut by_ind: Vec<Vec<Vec<u64>>> = vec![Vec::new(); rk.indeterminates()];
    for (lead, _) in &keyed {
        by_ind[lead.indeterminate].push(lead.exponents.clone());
    }
    let leader_sets: Vec<PointSet> = by_ind
        .into_iter()
        .map(|pts| PointSet::new(rk.weights().dimension(), pts))
        .collect::<Result<_, Error>>()?;

    Ok(CharacteristicSet {
        elements: keyed.into_iter().map(|(_, g)| g).collect(),
        leader_sets,
    })
}

/// The least common translate of the two leaders of a pair.
fn pair_lcm(
    basis: &[LinearSigmaPolynomial],
    (i, j): (usize, usize),
    rk: &Ranking,
) -> Result<Term, Error> {
    let a = basis[i].leader(rk)?;
    let b = basis[j].leader(rk)?;
    Ok(Term {
        exponents: a
            .exponents
            .iter()
            .zip(&b.exponents)
            .map(|(x, y)| *x.max(y))
            .collect(),
        indeterminate: a.indeterminate,
    })
}

/// The dimension quasi-polynomial of a system, with the per-indeterminate
/// pieces it sums.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SystemDimension {
    pub phi: QuasiPolynomial,
    pub threshold: u64,
    pub components: Vec<DimensionResult>,
}

/// Sum the dimension quasi-polynomials of the leader sets, one per
/// indeterminate. `phi(r)` counts, for `r` at or past the threshold, the
/// terms of order at most `r` that no leader reduces.
pub fn dimension_quasipoly_system(
    leader_sets: &[PointSet],
    w: &WeightVector,
) -> Result<SystemDimension, Error> {
    if leader_sets.is_empty() {
        return Err(Error::InvalidInput(
            "a system needs at least one indeterminate".into(),
        ));
    }
    let mut phi = QuasiPolynomial::zero();
    let mut threshold = 0;
    let mut components = Vec::with_capacity(leader_sets.len());
    for e in leader_sets {
        let res = dimension_quasipoly(e, w)?;
        phi = phi.add(&res.chi);
        threshold = threshold.max(res.threshold);
        components.push(res);
    }
    Ok(SystemDimension {
        phi,
        threshold,
        components,
    })
}

/// Read the difference transcendence degree off a dimension
/// quasi-polynomial: `m! w_1 ... w_m` times the coefficient of `t^m`,
/// where `m` is the number of translations. The coefficient must be
/// constant and the product a non-negative integer; anything else means
/// the polynomial did not come from a system over these weights.
pub fn sigma_trdeg(phi: &QuasiPolynomial, w: &WeightVector) -> Result<u64, Error> {
    let m = w.dimension();
    if phi.is_zero() || phi.degree() < m {
        return Ok(0);
    }
    if phi.degree() > m {
        return Err(Error::InvalidInput(format!(
            "degree {} exceeds the number of translations {}",
            phi.degree(),
            m
        )));
    }
    let lead = phi.leading_coefficient();
    let Some(c) = lead.as_constant() else {
        return Err(Error::NonConstantLeadingCoefficient { degree: m });
    };
    let mut factor = BigInt::one();
    for k in 2..=m {
        factor *= k;
    }
    for &wi in w.weights() {
        factor *= wi;
    }
    let a = c.clone() * Rational::from_integer(factor);
    if !a.is_integer() || a.is_negative() {
        return Err(Error::NonIntegerTranscendenceDegree {
            degree: m,
            value: coefficient_text(c),
        });
    }
    a.to_integer().to_u64().ok_or_else(|| Error::NonIntegerTranscendenceDegree {
        degree: m,
        value: coefficient_text(c),
    })
}

/// On-disk description of a system: weighted translations plus either
/// explicit polynomials or pre-computed leader exponent sets.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemInput {
    pub m: usize,
    pub n: usize,
    pub weights: Vec<u64>,
    #[serde(default)]
    pub polynomials: Option<Vec<PolynomialInput>>,
    #[serde(default)]
    pub leaders: Option<Vec<Vec<Vec<u64>>>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialInput {
    pub terms: Vec<TermInput>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermInput {
    pub coef: String,
    pub exps: Vec<u64>,
    pub ind: usize,
}

/// The validated content of a [`SystemInput`].
pub enum SystemSpec {
    Polynomials(Vec<LinearSigmaPolynomial>),
    Leaders(Vec<PointSet>),
}

impl SystemInput {
    /// Check dimensions and parse coefficients, producing the ranking and
    /// the system body. Exactly one of `polynomials` and `leaders` must be
    /// present; indeterminate indices are zero-based.
    pub fn validate(&self) -> Result<(Ranking, SystemSpec), Error> {
        if self.weights.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: self.weights.len(),
            });
        }
        let w = WeightVector::new(self.weights.clone())?;
        let rk = Ranking::new(w, self.n)?;
        match (&self.polynomials, &self.leaders) {
            (Some(polys), None) => {
                let mut out = Vec::with_capacity(polys.len());
                for p in polys {
                    let mut pairs = Vec::with_capacity(p.terms.len());
                    for t in &p.terms {
                        let term = Term::new(t.exps.clone(), t.ind);
                        rk.check_term(&term)?;
                        pairs.push((term, parse_rational(&t.coef)?));
                    }
                    out.push(LinearSigmaPolynomial::new(pairs));
                }
                Ok((rk, SystemSpec::Polynomials(out)))
            }
            (None, Some(leaders)) => {
                if leaders.len() != self.n {
                    return Err(Error::InvalidInput(format!(
                        "expected one leader set per indeterminate ({}), found {}",
                        self.n,
                        leaders.len()
                    )));
                }
                let sets = leaders
                    .iter()
                    .map(|pts| PointSet::new(self.m, pts.clone()))
                    .collect::<Result<Vec<_>, Error>>()?;
                Ok((rk, SystemSpec::Leaders(sets)))
            }
            (Some(_), Some(_)) => Err(Error::InvalidInput(
                "provide either polynomials or leaders, not both".into(),
            )),
            (None, None) => Err(Error::InvalidInput(
                "provide polynomials or leaders".into(),
            )),
        }
    }
}
