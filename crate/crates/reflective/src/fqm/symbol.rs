//! Jordan components and genus symbols in the classical notation.
//!
//! A symbol like `2_2^{+2}4_{II}^{+6}` or `7^{-5}` lists Jordan components:
//! scale (a prime power), oddity subscript for odd 2-adic components (`II`
//! marks even ones), and `^{sign rank}`.  Full genera are written
//! `II_{n,m}(...)`.

use std::fmt;

use serde::{Deserialize, Serialize};

/// One Jordan component of a discriminant form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct JordanComponent {
    pub prime: u64,
    /// Scale is `prime^exponent`.
    pub exponent: u32,
    pub rank: u32,
    /// `+1` or `-1`.
    pub sign: i8,
    /// Odd type (`2_t`) versus even type (`2_II`); always `false` for odd primes.
    pub odd: bool,
    /// Oddity `t` mod 8 for odd 2-adic components.
    pub oddity: Option<u8>,
}

impl JordanComponent {
    pub fn scale(&self) -> u64 {
        self.prime.pow(self.exponent)
    }

    /// Order of the subgroup this component contributes: `scale^rank`.
    pub fn group_order(&self) -> u64 {
        self.scale().pow(self.rank)
    }

    /// Level contribution: `scale` for even components, `2*scale` for odd
    /// 2-adic ones.
    pub fn level(&self) -> u64 {
        if self.odd {
            2 * self.scale()
        } else {
            self.scale()
        }
    }

    /// Basic well-formedness: odd primes have even type and no oddity; odd
    /// 2-adic components have an oddity compatible with sign and rank.
    pub fn is_valid(&self) -> bool {
        if self.rank == 0 || self.exponent == 0 {
            return false;
        }
        if self.sign != 1 && self.sign != -1 {
            return false;
        }
        if self.prime != 2 {
            return !self.odd && self.oddity.is_none();
        }
        if !self.odd {
            // even 2-adic components have even rank at least 2
            return self.oddity.is_none() && self.rank % 2 == 0;
        }
        match self.oddity {
            None => false,
            Some(t) => oddity_tuple(self.rank, self.sign, t).is_some(),
        }
    }
}

/// Diagonal units `a_i in {1,3,5,7}` realising an odd 2-adic component of
/// given rank, sign and oddity: `sum a_i = t (mod 8)` and
/// `prod a_i = +-1 (mod 8)` iff the sign is `+`.  Returns one witness.
pub fn oddity_tuple(rank: u32, sign: i8, t: u8) -> Option<Vec<u8>> {
    // dynamic programme over (taken, sum mod 8, det mod 8)
    let units = [1u8, 3, 5, 7];
    let mut reach: Vec<Vec<Vec<Option<u8>>>> =
        vec![vec![vec![None; 8]; 8]; rank as usize + 1];
    reach[0][0][1] = Some(0); // empty product has det 1
    for k in 0..rank as usize {
        for s in 0..8 {
            for d in [1usize, 3, 5, 7] {
                if reach[k][s][d].is_none() {
                    continue;
                }
                for &a in &units {
                    let s2 = (s + a as usize) % 8;
                    let d2 = (d * a as usize) % 8;
                    if reach[k + 1][s2][d2].is_none() {
                        reach[k + 1][s2][d2] = Some(a);
                    }
                }
            }
        }
    }
    let good_dets: &[usize] = if sign == 1 { &[1, 7] } else { &[3, 5] };
    let mut target = None;
    for &d in good_dets {
        if reach[rank as usize][t as usize % 8][d].is_some() {
            target = Some(d);
            break;
        }
    }
    let mut d = target?;
    let mut s = t as usize % 8;
    let mut out = Vec::new();
    for k in (1..=rank as usize).rev() {
        let a = reach[k][s][d].expect("dp reconstruction") as usize;
        out.push(a as u8);
        s = (s + 8 - a % 8) % 8;
        // divide d by a mod 8 (odd units are self-inverse-ish: a*a = 1 mod 8)
        d = (d * a) % 8;
    }
    out.reverse();
    Some(out)
}

/// A genus symbol: signature plus Jordan components.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GenusSymbol {
    pub pos: u32,
    pub neg: u32,
    pub components: Vec<JordanComponent>,
}

impl GenusSymbol {
    pub fn new(pos: u32, neg: u32, mut components: Vec<JordanComponent>) -> Self {
        components.sort();
        GenusSymbol { pos, neg, components }
    }

    pub fn rank(&self) -> u32 {
        self.pos + self.neg
    }

    pub fn determinant(&self) -> u64 {
        self.components.iter().map(|c| c.group_order()).product()
    }

    pub fn level(&self) -> u64 {
        self.components.iter().fold(1, |l, c| num_integer::lcm(l, c.level()))
    }

    /// The inner part, e.g. `2_2^{+2}4_{II}^{+6}`; empty for unimodular.
    pub fn local_string(&self) -> String {
        let mut out = String::new();
        for c in &self.components {
            out.push_str(&format!("{}", c.scale()));
            if c.prime == 2 {
                if c.odd {
                    out.push_str(&format!("_{}", c.oddity.unwrap()));
                } else {
                    out.push_str("_{II}");
                }
            }
            let sgn = if c.sign == 1 { '+' } else { '-' };
            out.push_str(&format!("^{{{}{}}}", sgn, c.rank));
        }
        out
    }
}

impl fmt::Display for GenusSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "II_{{{},{}}}", self.pos, self.neg)?;
        if !self.components.is_empty() {
            write!(f, "({})", self.local_string())?;
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SymbolParseError {
    #[error("malformed genus symbol near `{0}`")]
    Malformed(String),
    #[error("scale {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("component fails the oddity/sign compatibility: {0}")]
    Incompatible(String),
}

fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut m = n;
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            return if m == 1 { Some((p, e)) } else { None };
        }
        p += 1;
    }
    Some((n, 1))
}

/// Parse the local part, e.g. `2_7^{+1}4_7^{+1}8_{II}^{+4}`.
pub fn parse_local(s: &str) -> Result<Vec<JordanComponent>, SymbolParseError> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bytes = compact.as_bytes();
    let mut i = 0usize;
    let mut out = Vec::new();
    let err = |i: usize| SymbolParseError::Malformed(compact[i.min(compact.len())..].to_string());
    while i < bytes.len() {
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i == start {
            return Err(err(i));
        }
        let scale: u64 = compact[start..i].parse().map_err(|_| err(start))?;
        let (prime, exponent) =
            prime_power(scale).ok_or(SymbolParseError::NotPrimePower(scale))?;
        let mut odd = false;
        let mut oddity = None;
        if i < bytes.len() && bytes[i] == b'_' {
            i += 1;
            let braced = i < bytes.len() && bytes[i] == b'{';
            if braced {
                i += 1;
            }
            if compact[i..].starts_with("II") {
                i += 2;
            } else {
                let t0 = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i == t0 {
                    return Err(err(i));
                }
                odd = true;
                oddity = Some(compact[t0..i].parse::<u8>().map_err(|_| err(t0))? % 8);
            }
            if braced {
                if i >= bytes.len() || bytes[i] != b'}' {
                    return Err(err(i));
                }
                i += 1;
            }
        }
        if i >= bytes.len() || bytes[i] != b'^' {
            return Err(err(i));
        }
        i += 1;
        let braced = i < bytes.len() && bytes[i] == b'{';
        if braced {
            i += 1;
        }
        let sign = match bytes.get(i) {
            Some(b'+') => 1i8,
            Some(b'-') => -1i8,
            _ => return Err(err(i)),
        };
        i += 1;
        let r0 = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i == r0 {
            return Err(err(i));
        }
        let rank: u32 = compact[r0..i].parse().map_err(|_| err(r0))?;
        if braced {
            if i >= bytes.len() || bytes[i] != b'}' {
                return Err(err(i));
            }
            i += 1;
        }
        let comp = JordanComponent { prime, exponent, rank, sign, odd, oddity };
        if !comp.is_valid() {
            return Err(SymbolParseError::Incompatible(format!("{:?}", comp)));
        }
        out.push(comp);
    }
    Ok(out)
}

/// Parse a full genus symbol `II_{n,m}(local)` or a bare local part with a
/// given signature.
pub fn parse_genus(s: &str) -> Result<GenusSymbol, SymbolParseError> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let rest = compact
        .strip_prefix("II_{")
        .or_else(|| compact.strip_prefix("II_("))
        .ok_or_else(|| SymbolParseError::Malformed(compact.clone()))?;
    let close = rest
        .find(['}', ')'])
        .ok_or_else(|| SymbolParseError::Malformed(compact.clone()))?;
    let sig = &rest[..close];
    let (p, n) = sig
        .split_once(',')
        .ok_or_else(|| SymbolParseError::Malformed(compact.clone()))?;
    let pos: u32 = p.parse().map_err(|_| SymbolParseError::Malformed(compact.clone()))?;
    let neg: u32 = n.parse().map_err(|_| SymbolParseError::Malformed(compact.clone()))?;
    let tail = &rest[close + 1..];
    let components = if tail.is_empty() {
        Vec::new()
    } else {
        let inner = tail
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| SymbolParseError::Malformed(tail.to_string()))?;
        parse_local(inner)?
    };
    Ok(GenusSymbol::new(pos, neg, components))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        for s in [
            "II_{26,2}",
            "II_{18,2}(2_{II}^{+10})",
            "II_{14,2}(2_{II}^{-10}4_{II}^{-2})",
            "II_{12,2}(2_2^{+2}4_{II}^{+6})",
            "II_{8,2}(2_7^{+1}4_7^{+1}8_{II}^{+4})",
            "II_{8,2}(7^{-5})",
            "II_{6,2}(2_{II}^{-2}4_{II}^{-2}5^{+4})",
        ] {
            let g = parse_genus(s).unwrap();
            assert_eq!(format!("{}", g), s, "round trip of {s}");
        }
    }

    #[test]
    fn component_orders_multiply() {
        let g = parse_genus("II_{14,2}(2_{II}^{-10}4_{II}^{-2})").unwrap();
        assert_eq!(g.determinant(), 1u64 << 14);
        assert_eq!(g.level(), 4);
        let g = parse_genus("II_{8,2}(7^{-5})").unwrap();
        assert_eq!(g.determinant(), 7u64.pow(5));
        assert_eq!(g.level(), 7);
    }

    #[test]
    fn oddity_compatibility() {
        // 2_4^{+2} is impossible, 2_2^{+2} and 2_4^{-2} exist
        assert!(oddity_tuple(2, 1, 4).is_none());
        assert!(oddity_tuple(2, 1, 2).is_some());
        assert!(oddity_tuple(2, -1, 4).is_some());
        // rank 1: t determines the sign
        assert!(oddity_tuple(1, 1, 1).is_some());
        assert!(oddity_tuple(1, -1, 1).is_none());
        assert!(oddity_tuple(1, -1, 3).is_some());
        // odd scale-2 level
        let c = JordanComponent {
            prime: 2,
            exponent: 1,
            rank: 1,
            sign: 1,
            odd: true,
            oddity: Some(1),
        };
        assert_eq!(c.level(), 4);
    }
}
