//! Truncated formal Puiseux series over an exact scalar ring.
//!
//! A series stores finitely many terms `c * q^e` with rational exponents `e`
//! strictly below a truncation bound; arithmetic updates the bound to the
//! tightest valid value.  Multiplying series with truncations `T1, T2` and
//! valuations `v1, v2` yields truncation `min(T1 + v2, T2 + v1)`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

use super::cyclotomic::CycSqrt;
use super::Expo;

/// Scalar rings a Puiseux series can be built over.
pub trait Coefficient: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn from_rational(c: &BigRational) -> Self;
    /// Multiplication by the root of unity `e(x)`; the rational scalar ring
    /// only admits `x` with `e(x)` rational.
    fn mul_root_of_unity(&self, x: Expo) -> Self;
}

impl Coefficient for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_rational(c: &BigRational) -> Self {
        c.clone()
    }
    fn mul_root_of_unity(&self, x: Expo) -> Self {
        let t = super::frac_mod1(x);
        if t == Ratio::default() {
            self.clone()
        } else if t == Ratio::new(1, 2) {
            -self
        } else {
            panic!("rational series cannot absorb the root of unity e({})", x)
        }
    }
}

impl Coefficient for CycSqrt {
    fn zero() -> Self {
        CycSqrt::zero()
    }
    fn one() -> Self {
        CycSqrt::one()
    }
    fn is_zero(&self) -> bool {
        CycSqrt::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        CycSqrt::add(self, other)
    }
    fn neg(&self) -> Self {
        CycSqrt::neg(self)
    }
    fn mul(&self, other: &Self) -> Self {
        CycSqrt::mul(self, other)
    }
    fn inv(&self) -> Option<Self> {
        CycSqrt::inv(self)
    }
    fn from_rational(c: &BigRational) -> Self {
        CycSqrt::from_rational(c.clone())
    }
    fn mul_root_of_unity(&self, x: Expo) -> Self {
        CycSqrt::mul(self, &CycSqrt::e(x))
    }
}

/// Truncated Puiseux series: finitely many exact terms below `trunc`.
#[derive(Clone, PartialEq)]
pub struct PuiseuxSeries<C: Coefficient> {
    terms: BTreeMap<Expo, C>,
    trunc: Expo,
}

pub type QSeries = PuiseuxSeries<BigRational>;
pub type CSeries = PuiseuxSeries<CycSqrt>;

impl<C: Coefficient> PuiseuxSeries<C> {
    /// The zero series known up to (exclusive) `trunc`.
    pub fn zero(trunc: Expo) -> Self {
        PuiseuxSeries { terms: BTreeMap::new(), trunc }
    }

    pub fn one(trunc: Expo) -> Self {
        Self::monomial(Ratio::default(), C::one(), trunc)
    }

    pub fn monomial(e: Expo, c: C, trunc: Expo) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() && e < trunc {
            terms.insert(e, c);
        }
        PuiseuxSeries { terms, trunc }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Expo, C)>, trunc: Expo) -> Self {
        let mut s = Self::zero(trunc);
        for (e, c) in it {
            s.add_term(e, c);
        }
        s
    }

    pub fn trunc(&self) -> Expo {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Valuation: exponent of the lowest non-zero term, or the truncation
    /// bound for a series with no visible terms.
    pub fn valuation(&self) -> Expo {
        self.terms.keys().next().copied().unwrap_or(self.trunc)
    }

    pub fn coefficient(&self, e: Expo) -> C {
        assert!(e < self.trunc, "coefficient {} beyond truncation {}", e, self.trunc);
        self.terms.get(&e).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &C)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(Expo, &C)> {
        self.terms.iter().next().map(|(e, c)| (*e, c))
    }

    /// Common denominator of all stored exponents (the `t` of `q^{m/t}`).
    pub fn exponent_denominator(&self) -> i64 {
        let mut t = 1i64;
        for e in self.terms.keys() {
            t = num_integer::lcm(t, *e.denom());
        }
        t
    }

    pub fn add_term(&mut self, e: Expo, c: C) {
        if e >= self.trunc || c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(C::zero);
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Restrict to a smaller truncation bound.
    pub fn truncate(&self, trunc: Expo) -> Self {
        let t = self.trunc.min(trunc);
        let terms = self.terms.iter().filter(|(e, _)| **e < t).map(|(e, c)| (*e, c.clone())).collect();
        PuiseuxSeries { terms, trunc: t }
    }

    pub fn add(&self, other: &Self) -> Self {
        let trunc = self.trunc.min(other.trunc);
        let mut out = self.truncate(trunc);
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (*e, c.neg())).collect();
        PuiseuxSeries { terms, trunc: self.trunc }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.trunc);
        }
        let mut out = Self::zero(self.trunc);
        for (e, a) in &self.terms {
            out.add_term(*e, a.mul(c));
        }
        out
    }

    /// Multiply by the monomial `c * q^e` (truncation shifts along).
    pub fn shift(&self, e: Expo, c: &C) -> Self {
        let mut out = Self::zero(self.trunc + e);
        for (f, a) in &self.terms {
            out.add_term(*f + e, a.mul(c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let v1 = self.valuation();
        let v2 = other.valuation();
        let trunc = (self.trunc + v2).min(other.trunc + v1);
        let mut out = Self::zero(trunc);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = *e1 + *e2;
                if e >= trunc {
                    break;
                }
                out.add_term(e, c1.mul(c2));
            }
        }
        out
    }

    /// Inverse of a series whose leading coefficient is a unit.
    pub fn inv(&self) -> Result<Self, SeriesError> {
        let (v, lead) = match self.leading() {
            Some((e, c)) => (e, c.clone()),
            None => return Err(SeriesError::NotInvertible),
        };
        let lead_inv = lead.inv().ok_or(SeriesError::NotInvertible)?;
        // write self = c*q^v * (1 + u) and invert the unit by the geometric
        // series; u has positive valuation so the loop terminates.
        let unit = self.shift(-v, &lead_inv);
        let prec = unit.trunc;
        let u = unit.sub(&Self::one(prec));
        let mut result = Self::one(prec);
        if !u.is_zero() {
            assert!(u.valuation() > Ratio::default(), "leading term did not normalise");
            let mut power = Self::one(prec);
            let mut sign = false;
            let mut acc = Self::one(prec);
            loop {
                power = power.mul(&u).truncate(prec);
                if power.is_zero() {
                    break;
                }
                sign = !sign;
                acc = if sign { acc.sub(&power) } else { acc.add(&power) };
            }
            result = acc;
        }
        Ok(result.shift(-v, &lead_inv))
    }

    pub fn pow_i64(&self, n: i64) -> Result<Self, SeriesError> {
        if n == 0 {
            let v = self.valuation();
            return Ok(Self::one(self.trunc - v));
        }
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut out: Option<Self> = None;
        let mut sq = base;
        let mut e = n.unsigned_abs();
        loop {
            if e & 1 == 1 {
                out = Some(match out {
                    None => sq.clone(),
                    Some(acc) => acc.mul(&sq),
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            sq = sq.mul(&sq);
        }
        Ok(out.unwrap())
    }

    /// Substitute `q -> e(shift) * q^scale` with `scale > 0`.
    pub fn substitute(&self, scale: Expo, shift: Expo) -> Self {
        let mut out = Self::zero(self.trunc * scale);
        for (e, c) in &self.terms {
            out.add_term(*e * scale, c.mul_root_of_unity(shift * *e));
        }
        out
    }

    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> PuiseuxSeries<D> {
        let mut out = PuiseuxSeries::zero(self.trunc);
        for (e, c) in &self.terms {
            out.add_term(*e, f(c));
        }
        out
    }
}

impl PuiseuxSeries<BigRational> {
    pub fn to_cyc(&self) -> PuiseuxSeries<CycSqrt> {
        self.map_coefficients(|c| CycSqrt::from_rational(c.clone()))
    }
}

impl PuiseuxSeries<CycSqrt> {
    /// Convert to a rational series, failing on any irrational coefficient.
    pub fn try_rational(&self) -> Option<PuiseuxSeries<BigRational>> {
        let mut out = PuiseuxSeries::zero(self.trunc);
        for (e, c) in &self.terms {
            out.add_term(*e, c.try_rational()?);
        }
        Some(out)
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series is not invertible: leading coefficient is not a unit")]
    NotInvertible,
}

impl<C: Coefficient + fmt::Display> fmt::Display for PuiseuxSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "O(q^{})", self.trunc)?;
            return Ok(());
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if *e == Ratio::default() {
                write!(f, "({})", c)?;
            } else {
                write!(f, "({})q^{}", c, e)?;
            }
        }
        write!(f, " + O(q^{})", self.trunc)
    }
}

/// The JSON shape `{ "denom": t, "terms": [[m, coeff-string], ...] }` for
/// rational series; coefficients are exact strings `p/q`.
pub fn qseries_to_json(s: &QSeries) -> serde_json::Value {
    let t = s.exponent_denominator();
    let terms: Vec<serde_json::Value> = s
        .terms()
        .map(|(e, c)| {
            let m = e.numer() * (t / e.denom());
            serde_json::json!([m, format!("{}", c)])
        })
        .collect();
    serde_json::json!({ "denom": t, "terms": terms })
}

pub fn qseries_from_json(v: &serde_json::Value) -> Option<QSeries> {
    let t = v.get("denom")?.as_i64()?;
    let terms = v.get("terms")?.as_array()?;
    let mut max_e: Expo = Ratio::default();
    let mut parsed = Vec::new();
    for term in terms {
        let pair = term.as_array()?;
        let m = pair[0].as_i64()?;
        let c: BigRational = pair[1].as_str()?.parse::<BigRational>().ok()?;
        let e = Ratio::new(m, t);
        if e > max_e {
            max_e = e;
        }
        parsed.push((e, c));
    }
    Some(PuiseuxSeries::from_terms(parsed, max_e + Ratio::new(1, t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rint};

    fn q(n: i64, d: i64) -> Expo {
        Ratio::new(n, d)
    }

    #[test]
    fn simple_product() {
        // (q^-1 + 24)(q) = 1 + 24q
        let a = QSeries::from_terms([(q(-1, 1), rint(1)), (q(0, 1), rint(24))], q(10, 1));
        let b = QSeries::monomial(q(1, 1), rint(1), q(10, 1));
        let p = a.mul(&b);
        assert_eq!(p.coefficient(q(0, 1)), rint(1));
        assert_eq!(p.coefficient(q(1, 1)), rint(24));
    }

    #[test]
    fn truncation_rule() {
        // T1 = 5 with valuation 1, T2 = 7 with valuation -1:
        // product truncation = min(5 + (-1), 7 + 1) = 4
        let a = QSeries::monomial(q(1, 1), rint(1), q(5, 1));
        let b = QSeries::monomial(q(-1, 1), rint(2), q(7, 1));
        assert_eq!(a.mul(&b).trunc(), q(4, 1));
    }

    #[test]
    fn geometric_series_inverse() {
        // 1/(1-q) = 1 + q + q^2 + ...
        let one_minus_q =
            QSeries::from_terms([(q(0, 1), rint(1)), (q(1, 1), rint(-1))], q(8, 1));
        let inv = one_minus_q.inv().unwrap();
        for k in 0..8 {
            assert_eq!(inv.coefficient(q(k, 1)), rint(1), "coefficient of q^{k}");
        }
    }

    #[test]
    fn inverse_is_two_sided_up_to_truncation() {
        let s = QSeries::from_terms(
            [
                (q(-2, 3), rat(2, 1)),
                (q(0, 1), rat(5, 7)),
                (q(1, 3), rat(-3, 2)),
            ],
            q(4, 1),
        );
        let inv = s.inv().unwrap();
        let p = s.mul(&inv);
        assert_eq!(p.coefficient(q(0, 1)), rint(1));
        assert!(p.terms().all(|(e, c)| *e == q(0, 1) || Zero::is_zero(c)));
    }

    #[test]
    fn substitution_scales_exponents() {
        let s = QSeries::from_terms([(q(1, 2), rint(3)), (q(2, 1), rint(5))], q(3, 1));
        let t = s.substitute(q(2, 1), q(0, 1));
        assert_eq!(t.coefficient(q(1, 1)), rint(3));
        assert_eq!(t.coefficient(q(4, 1)), rint(5));
        assert_eq!(t.trunc(), q(6, 1));
    }
}
