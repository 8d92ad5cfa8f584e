//! Concrete finite quadratic modules.
//!
//! A module is stored as a list of elementary Jordan blocks (rank 1 for
//! cyclic blocks, rank 2 for even 2-adic ones), each with an explicit
//! quadratic form.  Elements are coefficient vectors modulo the generator
//! orders.  All set computations are exhaustive up to `|D| <= 2*10^6` and
//! refuse beyond; cardinality queries use block-wise convolution instead and
//! have no size limit.

use std::collections::BTreeMap;

use num_rational::Ratio;

use crate::exact::cyclotomic::CycSqrt;
use crate::exact::{frac_mod1, rat, Expo};

use super::symbol::{oddity_tuple, GenusSymbol, JordanComponent};

/// Elementary building block of a discriminant form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Block {
    /// `Z/p^e` with `q(x) = a x^2 / p^e`, `p` odd, `gcd(a, p) = 1`.
    OddPrime { p: i64, e: u32, a: i64 },
    /// `Z/2^e` with `q(x) = a x^2 / 2^(e+1)`, `a` odd.
    Odd2 { e: u32, a: i64 },
    /// `(Z/2^e)^2` with `q = xy/2^e` (`v = false`) or `(x^2+xy+y^2)/2^e`.
    Even2 { e: u32, v: bool },
}

impl Block {
    pub fn orders(&self) -> Vec<i64> {
        match self {
            Block::OddPrime { p, e, .. } => vec![p.pow(*e)],
            Block::Odd2 { e, .. } => vec![1i64 << e],
            Block::Even2 { e, .. } => vec![1i64 << e, 1i64 << e],
        }
    }

    pub fn level(&self) -> i64 {
        match self {
            Block::OddPrime { p, e, .. } => p.pow(*e),
            Block::Odd2 { e, .. } => 1i64 << (e + 1),
            Block::Even2 { e, .. } => 1i64 << e,
        }
    }

    pub fn prime(&self) -> i64 {
        match self {
            Block::OddPrime { p, .. } => *p,
            _ => 2,
        }
    }

    /// q of a block element given by its coordinates.
    pub fn q(&self, x: &[i64]) -> Expo {
        match self {
            Block::OddPrime { p, e, a } => {
                let m = p.pow(*e);
                let xr = x[0].rem_euclid(m);
                frac_mod1(Ratio::new((a * xr % m) * xr, m))
            }
            Block::Odd2 { e, a } => {
                let m = 1i64 << e;
                let xr = x[0].rem_euclid(m);
                frac_mod1(Ratio::new((a * xr % (2 * m)) * xr, 2 * m))
            }
            Block::Even2 { e, v } => {
                let m = 1i64 << e;
                let (x1, x2) = (x[0].rem_euclid(m), x[1].rem_euclid(m));
                let n = if *v { x1 * x1 + x1 * x2 + x2 * x2 } else { x1 * x2 };
                frac_mod1(Ratio::new(n % m, m))
            }
        }
    }

    /// The associated bilinear form `(x, y) = q(x+y) - q(x) - q(y)` mod 1.
    pub fn bilinear(&self, x: &[i64], y: &[i64]) -> Expo {
        match self {
            Block::OddPrime { p, e, a } => {
                let m = p.pow(*e);
                frac_mod1(Ratio::new(2 * (a * x[0].rem_euclid(m) % m) * y[0].rem_euclid(m), m))
            }
            Block::Odd2 { e, a } => {
                let m = 1i64 << e;
                frac_mod1(Ratio::new((a * x[0].rem_euclid(m) % m) * y[0].rem_euclid(m), m))
            }
            Block::Even2 { e, v } => {
                let m = 1i64 << e;
                let (x1, x2) = (x[0].rem_euclid(m), x[1].rem_euclid(m));
                let (y1, y2) = (y[0].rem_euclid(m), y[1].rem_euclid(m));
                let n = if *v {
                    2 * x1 * y1 + x1 * y2 + x2 * y1 + 2 * x2 * y2
                } else {
                    x1 * y2 + x2 * y1
                };
                frac_mod1(Ratio::new(n % m, m))
            }
        }
    }

    /// Gauss sum `sum_x e(u * q(x))` over the block.
    pub fn gauss_sum(&self, u: i64) -> CycSqrt {
        let orders = self.orders();
        let mut total = CycSqrt::zero();
        let mut coords = vec![0i64; orders.len()];
        loop {
            let q = self.q(&coords);
            total = total.add(&CycSqrt::e(q * Ratio::from_integer(u)));
            // advance
            let mut i = 0;
            loop {
                if i == coords.len() {
                    return total;
                }
                coords[i] += 1;
                if coords[i] < orders[i] {
                    break;
                }
                coords[i] = 0;
                i += 1;
            }
        }
    }
}

/// Elements are coordinate vectors over the flattened generator slots.
pub type Elem = Vec<i64>;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FqmError {
    #[error("genus symbol does not define a discriminant form: {0}")]
    Existence(String),
    #[error("module too large to materialise ({0} elements; limit {1})")]
    TooLarge(u64, u64),
    #[error("operation needs an even-signature module")]
    OddSignature,
}

/// Hard cap for exhaustive element enumeration.
pub const ENUMERATION_LIMIT: u64 = 2_000_000;

/// A finite quadratic module presented by elementary Jordan blocks.
#[derive(Clone, Debug)]
pub struct Fqm {
    blocks: Vec<Block>,
    /// Flattened generator slots: `(block index, generator order)`.
    slots: Vec<(usize, i64)>,
}

impl Fqm {
    pub fn trivial() -> Self {
        Fqm { blocks: vec![], slots: vec![] }
    }

    pub fn from_blocks(blocks: Vec<Block>) -> Self {
        let mut slots = Vec::new();
        for (i, b) in blocks.iter().enumerate() {
            for o in b.orders() {
                slots.push((i, o));
            }
        }
        Fqm { blocks, slots }
    }

    /// Build the canonical module for a list of Jordan components.
    pub fn from_components(components: &[JordanComponent]) -> Result<Self, FqmError> {
        let mut blocks = Vec::new();
        for c in components {
            if !c.is_valid() {
                return Err(FqmError::Existence(format!("{:?}", c)));
            }
            if c.prime != 2 {
                let p = c.prime as i64;
                // rank-1 pieces with units 1,...,1,u; sign = prod (2a_i | p)
                let two_pow = legendre_i64(2, p).pow(c.rank);
                let want = c.sign as i64 * two_pow as i64;
                let last = if legendre_i64(1, p) as i64 == want {
                    1
                } else {
                    smallest_nonresidue(p)
                };
                for i in 0..c.rank {
                    let a = if i + 1 == c.rank { last } else { 1 };
                    blocks.push(Block::OddPrime { p, e: c.exponent, a });
                }
            } else if c.odd {
                let tuple = oddity_tuple(c.rank, c.sign, c.oddity.unwrap())
                    .ok_or_else(|| FqmError::Existence(format!("{:?}", c)))?;
                for a in tuple {
                    blocks.push(Block::Odd2 { e: c.exponent, a: a as i64 });
                }
            } else {
                // even: rank/2 two-dimensional blocks, one V iff sign is -
                let pairs = c.rank / 2;
                for i in 0..pairs {
                    blocks.push(Block::Even2 { e: c.exponent, v: c.sign == -1 && i == 0 });
                }
            }
        }
        Ok(Self::from_blocks(blocks))
    }

    pub fn from_genus(g: &GenusSymbol) -> Result<Self, FqmError> {
        Self::from_components(&g.components)
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn slots(&self) -> &[(usize, i64)] {
        &self.slots
    }

    pub fn orders(&self) -> Vec<i64> {
        self.slots.iter().map(|&(_, o)| o).collect()
    }

    pub fn size(&self) -> u64 {
        self.slots.iter().map(|&(_, o)| o as u64).product()
    }

    pub fn level(&self) -> i64 {
        self.blocks.iter().fold(1, |l, b| num_integer::lcm(l, b.level()))
    }

    pub fn zero(&self) -> Elem {
        vec![0; self.slots.len()]
    }

    pub fn is_zero_elem(&self, x: &Elem) -> bool {
        x.iter().zip(&self.slots).all(|(c, &(_, o))| c.rem_euclid(o) == 0)
    }

    pub fn reduce_elem(&self, x: &Elem) -> Elem {
        x.iter().zip(&self.slots).map(|(c, &(_, o))| c.rem_euclid(o)).collect()
    }

    pub fn add_elem(&self, x: &Elem, y: &Elem) -> Elem {
        x.iter()
            .zip(y)
            .zip(&self.slots)
            .map(|((a, b), &(_, o))| (a + b).rem_euclid(o))
            .collect()
    }

    pub fn neg_elem(&self, x: &Elem) -> Elem {
        x.iter().zip(&self.slots).map(|(a, &(_, o))| (-a).rem_euclid(o)).collect()
    }

    pub fn smul_elem(&self, k: i64, x: &Elem) -> Elem {
        x.iter()
            .zip(&self.slots)
            .map(|(a, &(_, o))| ((k % o) * a).rem_euclid(o))
            .collect()
    }

    pub fn order_of(&self, x: &Elem) -> i64 {
        let mut ord = 1i64;
        for (a, &(_, o)) in x.iter().zip(&self.slots) {
            let a = a.rem_euclid(o);
            let g = num_integer::gcd(a, o);
            ord = num_integer::lcm(ord, o / g);
        }
        ord
    }

    /// Slice out the coordinates of block `i` from a full element.
    fn block_coords<'a>(&self, x: &'a Elem, i: usize) -> Vec<i64> {
        self.slots
            .iter()
            .zip(x)
            .filter(|((b, _), _)| *b == i)
            .map(|(_, c)| *c)
            .collect()
    }

    pub fn q(&self, x: &Elem) -> Expo {
        let mut total = Ratio::default();
        for (i, b) in self.blocks.iter().enumerate() {
            total += b.q(&self.block_coords(x, i));
        }
        frac_mod1(total)
    }

    pub fn bilinear(&self, x: &Elem, y: &Elem) -> Expo {
        let mut total = Ratio::default();
        for (i, b) in self.blocks.iter().enumerate() {
            total += b.bilinear(&self.block_coords(x, i), &self.block_coords(y, i));
        }
        frac_mod1(total)
    }

    /// Exhaustive element iterator (respects [`ENUMERATION_LIMIT`]).
    pub fn elements(&self) -> Result<ElemIter, FqmError> {
        let size = self.size();
        if size > ENUMERATION_LIMIT {
            return Err(FqmError::TooLarge(size, ENUMERATION_LIMIT));
        }
        Ok(ElemIter { orders: self.orders(), next: Some(self.zero()) })
    }

    /// The Milgram signature: `sum_gamma e(q(gamma)) = sqrt(|D|) e(sign/8)`.
    pub fn milgram_signature(&self) -> u8 {
        let mut total = CycSqrt::one();
        for b in &self.blocks {
            total = total.mul(&b.gauss_sum(1));
        }
        let size = rat(self.size() as i64, 1);
        let scaled = total.mul(&CycSqrt::inv_sqrt_rational(&size));
        for s in 0..8u8 {
            if (scaled.clone() - CycSqrt::root_of_unity(s as i64, 8)).is_zero() {
                return s;
            }
        }
        panic!("degenerate quadratic module: Milgram sum is not sqrt(|D|) * e(s/8)");
    }

    /// Gauss sum `sum e(u 2^j q)` over the 2-part, used as an isomorphism
    /// invariant.
    pub fn two_adic_gauss(&self, u: i64, j: u32) -> CycSqrt {
        let mut total = CycSqrt::one();
        for b in &self.blocks {
            if b.prime() == 2 {
                total = total.mul(&b.gauss_sum(u << j));
            }
        }
        total
    }

    /// Generators of the subgroup `D_c = {x : cx = 0}`.
    pub fn dc_generators(&self, c: i64) -> Vec<Elem> {
        let mut gens = Vec::new();
        for (k, &(_, o)) in self.slots.iter().enumerate() {
            // the subgroup of Z/o killed by c is generated by o/gcd(c,o)
            let gen_ord = num_integer::gcd(c, o);
            if gen_ord > 1 {
                let mut e = self.zero();
                e[k] = o / gen_ord;
                gens.push(e);
            }
        }
        gens
    }

    /// Size of `D_c`.
    pub fn dc_size(&self, c: i64) -> u64 {
        self.slots.iter().map(|&(_, o)| num_integer::gcd(c, o) as u64).product()
    }

    /// The canonical 2-torsion representative `x_c` of the coset `D^{c*}`,
    /// fixed by the Jordan decomposition recorded at construction: on each
    /// odd 2-adic block of scale equal to the 2-part of `c` it is
    /// `2^{e-1} * generator`, elsewhere zero.
    pub fn x_c(&self, c: i64) -> Elem {
        let v2 = c.trailing_zeros();
        let mut x = self.zero();
        if c == 0 {
            return x;
        }
        for (k, &(bi, _)) in self.slots.iter().enumerate() {
            if let Block::Odd2 { e, .. } = self.blocks[bi] {
                if e == v2 {
                    x[k] = 1i64 << (e - 1).max(0);
                    if e == 0 {
                        x[k] = 0;
                    }
                }
            }
        }
        x
    }

    /// Membership in `D^{c*} = { gamma : c q(a) + (a, gamma) = 0 for a in D_c }`.
    pub fn in_dcstar(&self, c: i64, gamma: &Elem) -> bool {
        for a in self.dc_generators(c) {
            let lhs = frac_mod1(
                self.q(&a) * Ratio::from_integer(c) + self.bilinear(&a, gamma),
            );
            if lhs != Ratio::default() {
                return false;
            }
        }
        true
    }

    /// The reduced norm `q_c(gamma) = c q(mu) + (x_c, mu)` for
    /// `gamma = x_c + c mu`; requires `gamma` in `D^{c*}`.  The value does
    /// not depend on the choice of `mu`.
    pub fn q_c(&self, c: i64, gamma: &Elem) -> Expo {
        let xc = self.x_c(c);
        // solve c*mu = gamma - x_c slotwise
        let diff = self.add_elem(gamma, &self.neg_elem(&xc));
        let mut mu = self.zero();
        for (k, &(_, o)) in self.slots.iter().enumerate() {
            let cr = c.rem_euclid(o);
            let g = num_integer::gcd(cr, o); // = gcd(c, o), also when cr = 0
            let rhs = diff[k].rem_euclid(o);
            assert!(rhs % g == 0, "element not in D^(c*): slot {k}");
            let oo = o / g;
            if oo > 1 {
                let inv = mod_inverse((cr / g).rem_euclid(oo), oo)
                    .expect("c/g is a unit modulo o/g");
                mu[k] = ((rhs / g) * inv).rem_euclid(oo);
            }
        }
        frac_mod1(self.q(&mu) * Ratio::from_integer(c) + self.bilinear(&xc, &mu))
    }

    /// Regularity: `D^{N/p}` contains a non-trivial isotropic element for
    /// every prime `p` dividing the level `N`.
    pub fn is_regular(&self) -> bool {
        let level = self.level();
        let mut n = level;
        let mut p = 2i64;
        let mut primes = Vec::new();
        while p * p <= n {
            if n % p == 0 {
                primes.push(p);
                while n % p == 0 {
                    n /= p;
                }
            }
            p += 1;
        }
        if n > 1 {
            primes.push(n);
        }
        'outer: for p in primes {
            let c = level / p;
            // D^{c} = image of multiplication by c; enumerate via generators
            let mut image_gens: Vec<Elem> = Vec::new();
            for (k, &(_, o)) in self.slots.iter().enumerate() {
                let g = num_integer::gcd(c, o);
                if g < o {
                    let mut e = self.zero();
                    e[k] = c.rem_euclid(o);
                    image_gens.push(e);
                }
            }
            // exhaustive search over the image subgroup
            let mut members = vec![self.zero()];
            for g in &image_gens {
                let mut next = Vec::new();
                for m in &members {
                    let mut cur = m.clone();
                    loop {
                        next.push(cur.clone());
                        cur = self.add_elem(&cur, g);
                        if cur == *m {
                            break;
                        }
                    }
                }
                next.sort();
                next.dedup();
                members = next;
                if members.len() as u64 > ENUMERATION_LIMIT {
                    panic!("regularity search exceeded the enumeration limit");
                }
            }
            for m in &members {
                if !self.is_zero_elem(m) && self.q(m) == Ratio::default() {
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }
}

fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    if m <= 1 {
        return Some(0);
    }
    let (mut t, mut newt) = (0i64, 1i64);
    let (mut r, mut newr) = (m, a.rem_euclid(m));
    while newr != 0 {
        let q = r / newr;
        (t, newt) = (newt, t - q * newt);
        (r, newr) = (newr, r - q * newr);
    }
    if r > 1 {
        None
    } else {
        Some(t.rem_euclid(m))
    }
}

pub fn legendre_i64(a: i64, p: i64) -> i32 {
    let a = a.rem_euclid(p);
    if a == 0 {
        return 0;
    }
    let mut acc = 1i64;
    let mut x = a;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * x % p;
        }
        x = x * x % p;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

fn smallest_nonresidue(p: i64) -> i64 {
    (2..p).find(|&a| legendre_i64(a, p) == -1).expect("odd prime has a non-residue")
}

pub struct ElemIter {
    orders: Vec<i64>,
    next: Option<Elem>,
}

impl Iterator for ElemIter {
    type Item = Elem;
    fn next(&mut self) -> Option<Elem> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = 0;
        loop {
            if i == succ.len() {
                // overflow: end of iteration (keep next = None)
                break;
            }
            succ[i] += 1;
            if succ[i] < self.orders[i] {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
            i += 1;
        }
        if cur.is_empty() {
            // trivial module has exactly one element
            self.next = None;
        }
        Some(cur)
    }
}

/// Exact block-wise histogram of `q`-values over a torsion subgroup, used for
/// stratum cardinalities without materialising the module.
pub fn q_histogram(fqm: &Fqm, torsion: i64) -> BTreeMap<Expo, u64> {
    let mut acc: BTreeMap<Expo, u64> = BTreeMap::new();
    acc.insert(Ratio::default(), 1);
    for (i, b) in fqm.blocks().iter().enumerate() {
        let _ = i;
        let orders = b.orders();
        let mut local: BTreeMap<Expo, u64> = BTreeMap::new();
        let mut coords = vec![0i64; orders.len()];
        'el: loop {
            if coords
                .iter()
                .zip(&orders)
                .all(|(c, o)| (c * torsion).rem_euclid(*o) == 0)
            {
                *local.entry(b.q(&coords)).or_insert(0) += 1;
            }
            let mut i = 0;
            loop {
                if i == coords.len() {
                    break 'el;
                }
                coords[i] += 1;
                if coords[i] < orders[i] {
                    break;
                }
                coords[i] = 0;
                i += 1;
            }
        }
        let mut next: BTreeMap<Expo, u64> = BTreeMap::new();
        for (q1, n1) in &acc {
            for (q2, n2) in &local {
                *next.entry(frac_mod1(*q1 + *q2)).or_insert(0) += n1 * n2;
            }
        }
        acc = next;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fqm::symbol::parse_genus;

    fn fqm(s: &str) -> Fqm {
        Fqm::from_genus(&parse_genus(s).unwrap()).unwrap()
    }

    #[test]
    fn trivial_module() {
        let d = Fqm::trivial();
        assert_eq!(d.size(), 1);
        assert_eq!(d.level(), 1);
        assert_eq!(d.milgram_signature(), 0);
        assert_eq!(d.elements().unwrap().count(), 1);
    }

    #[test]
    fn orders_from_symbols() {
        assert_eq!(fqm("II_{14,2}(2_{II}^{-10}4_{II}^{-2})").size(), 16384);
        assert_eq!(fqm("II_{8,2}(7^{-5})").size(), 7u64.pow(5));
        assert_eq!(fqm("II_{8,2}(7^{-5})").level(), 7);
        assert_eq!(fqm("II_{12,2}(2_2^{+2}4_{II}^{+6})").level(), 4);
        assert_eq!(fqm("II_{6,2}(2_{II}^{-2}4_{II}^{-2}5^{+4})").level(), 20);
    }

    #[test]
    fn milgram_matches_lattice_signatures() {
        // sign(D) = n - 2 mod 8 for the shipped genera
        for (s, n) in [
            ("II_{18,2}(2_{II}^{+10})", 18u32),
            ("II_{14,2}(3^{-8})", 14),
            ("II_{14,2}(2_{II}^{-10}4_{II}^{-2})", 14),
            ("II_{12,2}(2_2^{+2}4_{II}^{+6})", 12),
            ("II_{10,2}(5^{+6})", 10),
            ("II_{10,2}(2_{II}^{+6}3^{-6})", 10),
            ("II_{8,2}(7^{-5})", 8),
            ("II_{8,2}(2_7^{+1}4_7^{+1}8_{II}^{+4})", 8),
            ("II_{8,2}(2_{II}^{+4}4_{II}^{-2}3^{+5})", 8),
            ("II_{6,2}(2_{II}^{-2}4_{II}^{-2}5^{+4})", 6),
        ] {
            assert_eq!(fqm(s).milgram_signature() as u32, (n - 2) % 8, "sign of {s}");
        }
    }

    #[test]
    fn milgram_examples() {
        assert_eq!(fqm("II_{14,2}(3^{-8})").milgram_signature(), 4);
        assert_eq!(fqm("II_{18,2}(2_{II}^{+10})").milgram_signature(), 0);
    }

    #[test]
    fn regularity_examples() {
        assert!(Fqm::trivial().is_regular());
        assert!(fqm("II_{18,2}(2_{II}^{+10})").is_regular());
        // a lone anisotropic plane: all three non-zero elements have q = 1/2
        let v = Fqm::from_blocks(vec![Block::Even2 { e: 1, v: true }]);
        assert!(!v.is_regular());
    }

    #[test]
    fn dc_and_dcstar_basics() {
        let d = fqm("II_{12,2}(2_2^{+2}4_{II}^{+6})");
        // |D_c| * |D^c| = |D|
        for c in [1i64, 2, 4] {
            let dc = d.dc_size(c);
            let image: u64 = d
                .slots()
                .iter()
                .map(|&(_, o)| (o / num_integer::gcd(c, o)) as u64)
                .product();
            assert_eq!(dc * image, d.size(), "c = {c}");
        }
        // x_2 is 2-torsion and lies in D^{2*}
        let x2 = d.x_c(2);
        assert!(d.is_zero_elem(&d.smul_elem(2, &x2)));
        assert!(d.in_dcstar(2, &x2));
    }

    #[test]
    fn q_c_is_independent_of_mu() {
        // small module so every mu can be brute-forced
        let d = Fqm::from_blocks(vec![
            Block::Odd2 { e: 1, a: 1 },
            Block::Odd2 { e: 1, a: 1 },
            Block::Even2 { e: 2, v: false },
        ]);
        for c in [2i64, 4] {
            let xc = d.x_c(c);
            for gamma in d.elements().unwrap() {
                if !d.in_dcstar(c, &gamma) {
                    continue;
                }
                let qc = d.q_c(c, &gamma);
                let mut values = std::collections::BTreeSet::new();
                for mu in d.elements().unwrap() {
                    if d.add_elem(&xc, &d.smul_elem(c, &mu)) == gamma {
                        values.insert(frac_mod1(
                            d.q(&mu) * Ratio::from_integer(c) + d.bilinear(&xc, &mu),
                        ));
                    }
                }
                assert_eq!(values.len(), 1, "q_c well-defined for gamma = {gamma:?}");
                assert!(values.contains(&qc));
            }
        }
    }

    #[test]
    fn q_histogram_counts_known_strata() {
        // II_{18,2}(2_II^{+10}): |D_{2,1/2}| = 496
        let d = fqm("II_{18,2}(2_{II}^{+10})");
        let h = q_histogram(&d, 2);
        assert_eq!(h.get(&Ratio::new(1, 2)).copied().unwrap_or(0), 496);
        assert_eq!(h.get(&Ratio::default()).copied().unwrap_or(0), 528);
        // case D: |D_{2,1/2}| = 2112 inside 2_II^{-10}4_II^{-2}
        let d = fqm("II_{14,2}(2_{II}^{-10}4_{II}^{-2})");
        let h = q_histogram(&d, 2);
        assert_eq!(h.get(&Ratio::new(1, 2)).copied().unwrap_or(0), 2112);
    }
}
