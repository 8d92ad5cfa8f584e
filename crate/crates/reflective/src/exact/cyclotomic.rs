//! Cyclotomic numbers times square roots of positive rationals.
//!
//! A [`CycSqrt`] stores `(sum_j c_j zeta_n^j) * sqrt(r)` with `c_j` rational
//! and `r` a squarefree positive integer.  Zero testing is exact: the
//! cyclotomic part is reduced modulo the `n`-th cyclotomic polynomial, which
//! yields a unique normal form.  Products stay in closed form (radicands
//! multiply and renormalise, orders merge to the lcm); sums of values with
//! different radicands fall back to the embedding of `sqrt(r)` into a
//! cyclotomic field via quadratic Gauss sums.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Mutex;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Expo;

/// Exact scalar `(sum_j c_j zeta_order^j) * sqrt(radicand)`.
#[derive(Clone, PartialEq, Eq)]
pub struct CycSqrt {
    order: u32,
    coeffs: BTreeMap<u32, BigRational>,
    radicand: u64,
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// Squarefree decomposition `r = s^2 * f` of a positive integer; returns `(s, f)`.
fn squarefree_part(mut r: u64) -> (u64, u64) {
    let mut square = 1u64;
    let mut free = 1u64;
    let mut p = 2u64;
    while p * p <= r {
        if r % p == 0 {
            let mut e = 0u32;
            while r % p == 0 {
                r /= p;
                e += 1;
            }
            square *= p.pow(e / 2);
            if e % 2 == 1 {
                free *= p;
            }
        }
        p += 1;
    }
    free *= r;
    (square, free)
}

/// Dense polynomial arithmetic over the rationals, used only for reduction
/// modulo cyclotomic polynomials.
fn poly_rem(mut num: Vec<BigRational>, modulus: &[BigInt]) -> Vec<BigRational> {
    let deg_m = modulus.len() - 1;
    while num.len() > deg_m {
        let lead = num.pop().unwrap();
        if lead.is_zero() {
            continue;
        }
        let k = num.len() - deg_m;
        for (i, m) in modulus.iter().take(deg_m).enumerate() {
            let t = &lead * BigRational::from(m.clone());
            num[k + i] -= t;
        }
    }
    num
}

/// The `n`-th cyclotomic polynomial, computed once and cached.
fn cyclotomic_polynomial(n: u32) -> &'static Vec<BigInt> {
    static CACHE: OnceLock<Mutex<BTreeMap<u32, &'static Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    let mut guard = cache.lock().unwrap();
    if let Some(p) = guard.get(&n) {
        return p;
    }
    // Start with x - 1 and use phi_{np}(x) = phi_n(x^p)/phi_n(x) for new
    // primes p, phi_{np}(x) = phi_n(x^p) for repeated ones.
    let mut rem = n;
    let mut poly: Vec<BigInt> = vec![BigInt::from(-1), BigInt::from(1)];
    let mut stretch = 1u32;
    let mut p = 2u32;
    while p <= rem {
        if rem % p == 0 {
            // substitute x -> x^p, then divide by the previous polynomial
            let subst = |poly: &[BigInt], p: u32| -> Vec<BigInt> {
                let mut out = vec![BigInt::zero(); (poly.len() - 1) * p as usize + 1];
                for (i, c) in poly.iter().enumerate() {
                    out[i * p as usize] = c.clone();
                }
                out
            };
            let num = subst(&poly, p);
            poly = poly_div_exact(&num, &poly);
            rem /= p;
            while rem % p == 0 {
                stretch *= p;
                rem /= p;
            }
        }
        p += 1;
    }
    if stretch > 1 {
        let mut out = vec![BigInt::zero(); (poly.len() - 1) * stretch as usize + 1];
        for (i, c) in poly.iter().enumerate() {
            out[i * stretch as usize] = c.clone();
        }
        poly = out;
    }
    let leaked: &'static Vec<BigInt> = Box::leak(Box::new(poly));
    guard.insert(n, leaked);
    leaked
}

/// Exact division of integer polynomials (the divisor is monic up to sign).
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut num: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    let mut q = vec![BigInt::zero(); num.len() - dd];
    for k in (0..q.len()).rev() {
        let c = &num[k + dd] / &lead;
        q[k] = c.clone();
        for (i, d) in den.iter().enumerate() {
            let t = &c * d;
            num[k + i] -= t;
        }
    }
    q
}

impl CycSqrt {
    pub fn zero() -> Self {
        CycSqrt { order: 1, coeffs: BTreeMap::new(), radicand: 1 }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(c: BigRational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(0, c);
        }
        CycSqrt { order: 1, coeffs, radicand: 1 }
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_rational(BigRational::from(BigInt::from(c)))
    }

    /// The exact root of unity `e(a/b) = exp(2 pi i a / b)`.
    pub fn root_of_unity(a: i64, b: i64) -> Self {
        assert!(b >= 1, "root_of_unity needs a positive denominator");
        let mut a = a.rem_euclid(b);
        let g = num_integer::gcd(a, b);
        let (mut aa, bb) = (a / g, b / g);
        a = aa.rem_euclid(bb);
        aa = a;
        let mut coeffs = BTreeMap::new();
        coeffs.insert(aa as u32, BigRational::one());
        CycSqrt { order: bb as u32, coeffs, radicand: 1 }.normalised()
    }

    /// The exact value `e(x)` for a rational turn `x`.
    pub fn e(x: Expo) -> Self {
        Self::root_of_unity(*x.numer(), *x.denom())
    }

    /// `sqrt(r)` for a positive rational `r`, as `sqrt(num*den)/den`.
    pub fn sqrt_rational(r: &BigRational) -> Self {
        assert!(r.is_positive(), "sqrt of a non-positive rational");
        let num: u64 = r.numer().try_into().expect("radicand numerator too large");
        let den: u64 = r.denom().try_into().expect("radicand denominator too large");
        let (s, f) = squarefree_part(num * den);
        let mut coeffs = BTreeMap::new();
        coeffs.insert(0, BigRational::new(BigInt::from(s), BigInt::from(den)));
        CycSqrt { order: 1, coeffs, radicand: f }
    }

    /// `1/sqrt(r)` for a positive rational `r`.
    pub fn inv_sqrt_rational(r: &BigRational) -> Self {
        Self::sqrt_rational(&r.recip())
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn is_zero(&self) -> bool {
        if self.coeffs.is_empty() {
            return true;
        }
        if self.order == 1 {
            return self.coeffs.values().all(|c| c.is_zero());
        }
        self.canonical_coeffs().is_empty()
    }

    /// Coefficients of the unique normal form of the cyclotomic part, i.e.
    /// the remainder modulo the cyclotomic polynomial of the stored order.
    fn canonical_coeffs(&self) -> BTreeMap<u32, BigRational> {
        let phi = cyclotomic_polynomial(self.order);
        let mut dense = vec![BigRational::zero(); self.order as usize];
        for (&j, c) in &self.coeffs {
            dense[j as usize] += c;
        }
        let rem = poly_rem(dense, phi);
        rem.into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (j as u32, c))
            .collect()
    }

    /// Rewrite with every coefficient in canonical reduced position and the
    /// order shrunk when the support allows it.
    pub fn reduce(&self) -> Self {
        if self.coeffs.is_empty() || self.coeffs.values().all(|c| c.is_zero()) {
            return Self::zero();
        }
        let coeffs = self.canonical_coeffs();
        if coeffs.is_empty() {
            return Self::zero();
        }
        CycSqrt { order: self.order, coeffs, radicand: self.radicand }.normalised()
    }

    /// Cheap normalisation: drop zero coefficients and shrink the order by
    /// the gcd of the exponent support.
    fn normalised(mut self) -> Self {
        self.coeffs.retain(|_, c| !c.is_zero());
        if self.coeffs.is_empty() {
            return CycSqrt { order: 1, coeffs: BTreeMap::new(), radicand: self.radicand };
        }
        let mut g = self.order;
        for &j in self.coeffs.keys() {
            g = gcd_u64(g as u64, j as u64) as u32;
            if g == 1 {
                break;
            }
        }
        if g > 1 {
            self.coeffs = self.coeffs.into_iter().map(|(j, c)| (j / g, c)).collect();
            self.order /= g;
        }
        self
    }

    pub fn is_one(&self) -> bool {
        (self.clone() - CycSqrt::one()).is_zero()
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero();
        }
        let n = num_integer::lcm(self.order as u64, other.order as u64) as u32;
        let (sa, sb) = (n / self.order, n / other.order);
        let mut coeffs: BTreeMap<u32, BigRational> = BTreeMap::new();
        for (&i, a) in &self.coeffs {
            for (&j, b) in &other.coeffs {
                let k = (i * sa + j * sb) % n;
                let t = a * b;
                *coeffs.entry(k).or_insert_with(BigRational::zero) += t;
            }
        }
        let r = self.radicand * other.radicand;
        let (s, f) = squarefree_part(r);
        if s != 1 {
            let sc = BigRational::from(BigInt::from(s));
            for c in coeffs.values_mut() {
                *c *= &sc;
            }
        }
        CycSqrt { order: n, coeffs, radicand: f }.normalised()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() {
            return other.clone();
        }
        if other.coeffs.is_empty() {
            return self.clone();
        }
        if self.radicand != other.radicand {
            return self.embed_radicand().add(&other.embed_radicand());
        }
        let n = num_integer::lcm(self.order as u64, other.order as u64) as u32;
        let (sa, sb) = (n / self.order, n / other.order);
        let mut coeffs: BTreeMap<u32, BigRational> = BTreeMap::new();
        for (&i, a) in &self.coeffs {
            *coeffs.entry(i * sa).or_insert_with(BigRational::zero) += a;
        }
        for (&j, b) in &other.coeffs {
            *coeffs.entry(j * sb).or_insert_with(BigRational::zero) += b;
        }
        CycSqrt { order: n, coeffs, radicand: self.radicand }.normalised()
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|(&j, c)| (j, -c)).collect();
        CycSqrt { order: self.order, coeffs, radicand: self.radicand }
    }

    /// Complex conjugation: `zeta^j -> zeta^-j`, `sqrt(r)` fixed.
    pub fn conj(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&j, c)| (if j == 0 { 0 } else { self.order - j }, c.clone()))
            .collect();
        CycSqrt { order: self.order, coeffs, radicand: self.radicand }.normalised()
    }

    /// Rewrite `sqrt(radicand)` as an explicit cyclotomic number, leaving
    /// radicand `1`.
    pub fn embed_radicand(&self) -> Self {
        if self.radicand == 1 {
            return self.clone();
        }
        let mut out = CycSqrt { order: self.order, coeffs: self.coeffs.clone(), radicand: 1 };
        let mut r = self.radicand;
        let mut p = 2u64;
        while p <= r {
            if r % p == 0 {
                out = out.mul(&Self::sqrt_prime(p));
                r /= p;
            }
            p += 1;
        }
        out
    }

    /// `sqrt(p)` for a prime, via quadratic Gauss sums.
    fn sqrt_prime(p: u64) -> Self {
        if p == 2 {
            // zeta_8 - zeta_8^3 = sqrt(2)
            let mut coeffs = BTreeMap::new();
            coeffs.insert(1, BigRational::one());
            coeffs.insert(3, -BigRational::one());
            return CycSqrt { order: 8, coeffs, radicand: 1 };
        }
        let mut gauss = CycSqrt::zero();
        for a in 1..p {
            let symbol = legendre(a as i64, p as i64);
            let term = CycSqrt::root_of_unity(a as i64, p as i64);
            gauss = if symbol == 1 { gauss.add(&term) } else { gauss.add(&term.neg()) };
        }
        if p % 4 == 1 {
            gauss
        } else {
            // gauss sum equals i*sqrt(p); multiply by -i
            gauss.mul(&CycSqrt::root_of_unity(3, 4))
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let coeffs = self.coeffs.iter().map(|(&j, a)| (j, a * c)).collect();
        CycSqrt { order: self.order, coeffs, radicand: self.radicand }
    }

    /// Multiplicative inverse (the value must be non-zero).
    pub fn inv(&self) -> Option<Self> {
        let red = self.reduce();
        if red.coeffs.is_empty() {
            return None;
        }
        // 1/(c*sqrt(r)) = (1/c) * sqrt(r)/r
        let n = red.order;
        let phi = cyclotomic_polynomial(n);
        let mut dense = vec![BigRational::zero(); phi.len() - 1];
        for (&j, c) in &red.coeffs {
            dense[j as usize] += c;
        }
        let inv = poly_mod_inverse(&dense, phi)?;
        let coeffs: BTreeMap<u32, BigRational> = inv
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (j as u32, c))
            .collect();
        let r = BigRational::from(BigInt::from(red.radicand));
        let out = CycSqrt { order: n, coeffs, radicand: red.radicand }
            .scale(&r.recip())
            .normalised();
        Some(out)
    }

    /// The rational value, if the scalar is rational.
    pub fn try_rational(&self) -> Option<BigRational> {
        let red = self.reduce();
        if red.coeffs.is_empty() {
            return Some(BigRational::zero());
        }
        if red.radicand != 1 {
            // a non-zero rational multiple of sqrt(r), r squarefree > 1, is
            // irrational; but the cyclotomic part could itself contain the
            // compensating sqrt.  Embed and retry once.
            let emb = red.embed_radicand().reduce();
            if emb.radicand == 1 {
                return emb.try_rational();
            }
            return None;
        }
        if red.order == 1 {
            return Some(red.coeffs.get(&0).cloned().unwrap_or_else(BigRational::zero));
        }
        None
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        out
    }

    /// Multiplicative order, if the value is a root of unity.
    pub fn multiplicative_order(&self, cap: u32) -> Option<u32> {
        let mut x = self.clone();
        for k in 1..=cap {
            if x.is_one() {
                return Some(k);
            }
            x = x.mul(self);
        }
        None
    }
}

fn legendre(mut a: i64, p: i64) -> i64 {
    a = a.rem_euclid(p);
    if a == 0 {
        return 0;
    }
    let mut result: i64 = 1;
    let mut x = a;
    let mut e = (p - 1) / 2;
    let mut acc = 1i64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * x % p;
        }
        x = x * x % p;
        e >>= 1;
    }
    result *= if acc == 1 { 1 } else { -1 };
    result
}

/// Inverse of a polynomial modulo an integer polynomial, over Q.
fn poly_mod_inverse(a: &[BigRational], modulus: &[BigInt]) -> Option<Vec<BigRational>> {
    // extended Euclid over Q[x]
    let m: Vec<BigRational> = modulus.iter().map(|c| BigRational::from(c.clone())).collect();
    let mut r0 = m;
    let mut r1: Vec<BigRational> = a.to_vec();
    trim(&mut r1);
    if r1.is_empty() {
        return None;
    }
    let mut s0: Vec<BigRational> = vec![];
    let mut s1: Vec<BigRational> = vec![BigRational::one()];
    while degree(&r1) > 0 {
        let (q, r) = poly_divmod(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = r1;
        r1 = r;
        trim(&mut r1);
        if r1.is_empty() {
            return None;
        }
        s0 = s1;
        s1 = s;
    }
    let c = r1[0].clone();
    if c.is_zero() {
        return None;
    }
    let inv_c = c.recip();
    Some(s1.into_iter().map(|x| x * &inv_c).collect())
}

fn degree(p: &[BigRational]) -> usize {
    p.len().saturating_sub(1)
}

fn trim(p: &mut Vec<BigRational>) {
    while matches!(p.last(), Some(c) if c.is_zero()) {
        p.pop();
    }
}

fn poly_divmod(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem: Vec<BigRational> = num.to_vec();
    let dd = degree(den);
    let lead = den[dd].clone();
    if rem.len() <= dd {
        return (vec![], rem);
    }
    let mut q = vec![BigRational::zero(); rem.len() - dd];
    for k in (0..q.len()).rev() {
        let c = &rem[k + dd] / &lead;
        q[k] = c.clone();
        for (i, d) in den.iter().enumerate() {
            let t = &c * d;
            rem[k + i] -= t;
        }
    }
    rem.truncate(dd);
    (q, rem)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let t = x * y;
            out[i + j] += t;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    let mut out = out;
    trim(&mut out);
    out
}

impl std::ops::Add for CycSqrt {
    type Output = CycSqrt;
    fn add(self, rhs: CycSqrt) -> CycSqrt {
        CycSqrt::add(&self, &rhs)
    }
}

impl std::ops::Sub for CycSqrt {
    type Output = CycSqrt;
    fn sub(self, rhs: CycSqrt) -> CycSqrt {
        CycSqrt::add(&self, &rhs.neg())
    }
}

impl std::ops::Mul for CycSqrt {
    type Output = CycSqrt;
    fn mul(self, rhs: CycSqrt) -> CycSqrt {
        CycSqrt::mul(&self, &rhs)
    }
}

impl std::ops::Neg for CycSqrt {
    type Output = CycSqrt;
    fn neg(self) -> CycSqrt {
        CycSqrt::neg(&self)
    }
}

impl fmt::Debug for CycSqrt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let red = self.reduce();
        if red.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in &red.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if *j == 0 {
                write!(f, "{}", c)?;
            } else {
                write!(f, "{}*z{}^{}", c, red.order, j)?;
            }
        }
        if red.radicand != 1 {
            write!(f, " * sqrt({})", red.radicand)?;
        }
        Ok(())
    }
}

impl fmt::Display for CycSqrt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn roots_of_unity_trivial_cases() {
        assert!(CycSqrt::root_of_unity(0, 1).is_one());
        let half_turn = CycSqrt::root_of_unity(1, 2);
        assert!((half_turn + CycSqrt::one()).is_zero());
    }

    #[test]
    fn eighth_root_closes_cycle() {
        let z = CycSqrt::root_of_unity(1, 8);
        assert!(z.pow(8).is_one());
        assert!(!z.pow(4).is_one());
    }

    #[test]
    fn multiplicative_order_is_b_over_gcd() {
        for (a, b) in [(1i64, 12i64), (2, 12), (3, 12), (4, 12), (5, 12), (7, 9), (6, 9)] {
            let expect = (b / num_integer::gcd(a, b)) as u32;
            let ord = CycSqrt::root_of_unity(a, b).multiplicative_order(100).unwrap();
            assert_eq!(ord, expect, "order of e({a}/{b})");
        }
    }

    #[test]
    fn sqrt_two_squares_to_two() {
        let s = CycSqrt::sqrt_rational(&rat(2, 1));
        let t = s.mul(&s);
        assert_eq!(t.try_rational().unwrap(), rat(2, 1));
        // and the embedded form agrees with the factored form
        let e = s.embed_radicand();
        assert!((e - s).is_zero());
    }

    #[test]
    fn gauss_sum_sqrt_primes() {
        for p in [3u64, 5, 7, 11, 13] {
            let s = CycSqrt::sqrt_rational(&rat(p as i64, 1));
            let sq = s.mul(&s).try_rational().unwrap();
            assert_eq!(sq, rat(p as i64, 1), "sqrt({p})^2");
            let emb = s.embed_radicand();
            assert!((emb.clone() - s).is_zero());
            assert_eq!(emb.mul(&emb).try_rational().unwrap(), rat(p as i64, 1));
        }
    }

    #[test]
    fn conj_product_of_monomials_is_nonneg_rational() {
        // the scalars occurring as Weil matrix entries: c * zeta^j * sqrt(r)
        for (c, a, b, r) in [(rat(3, 4), 2, 7, rat(3, 5)), (rat(-5, 2), 5, 8, rat(2, 1))] {
            let x = CycSqrt::root_of_unity(a, b).scale(&c).mul(&CycSqrt::sqrt_rational(&r));
            let norm = x.mul(&x.conj()).try_rational().unwrap();
            assert_eq!(norm, &c * &c * r);
            assert!(norm >= rat(0, 1));
        }
    }

    #[test]
    fn conj_product_is_always_real() {
        let x = CycSqrt::root_of_unity(2, 7)
            .scale(&rat(3, 4))
            .add(&CycSqrt::root_of_unity(5, 7))
            .mul(&CycSqrt::sqrt_rational(&rat(3, 5)));
        let norm = x.mul(&x.conj());
        assert!((norm.clone() - norm.conj()).is_zero());
    }

    #[test]
    fn mixed_radicand_addition() {
        let a = CycSqrt::sqrt_rational(&rat(2, 1));
        let b = CycSqrt::sqrt_rational(&rat(8, 1)); // 2*sqrt(2)
        let sum = a.clone().add(&b);
        let expect = a.scale(&rat(3, 1));
        assert!((sum - expect).is_zero());
    }

    #[test]
    fn inverse_of_unit() {
        let x = CycSqrt::root_of_unity(1, 5)
            .add(&CycSqrt::from_int(2))
            .mul(&CycSqrt::sqrt_rational(&rat(3, 1)));
        let inv = x.inv().unwrap();
        assert!(x.mul(&inv).is_one());
    }

    #[test]
    fn rational_detection_through_gauss_sum() {
        // zeta_3 + zeta_3^2 = -1
        let x = CycSqrt::root_of_unity(1, 3).add(&CycSqrt::root_of_unity(2, 3));
        assert_eq!(x.try_rational().unwrap(), rat(-1, 1));
    }
}
