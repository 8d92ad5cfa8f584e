//! Strata of a discriminant form.
//!
//! For `d | N` the set `D_{d,1/d}` of `d`-torsion elements of norm `1/d`
//! decomposes by the invariants `(c, q_c)`: for odd `d` it is a single
//! stratum `O_d`; for even `d` it splits into the part `O_d` meeting no
//! `D^{c*}` with `c` even and the strata `O_{d,c,x}` classified by the
//! largest 2-power `c` with `gamma` in `D^{c*}` together with `x = q_c`.
//!
//! Cardinalities are computed by convolving per-block profiles, so they work
//! far beyond the materialisation limit; explicit element lists and stratum
//! representatives are also available.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;

use crate::exact::{frac_mod1, Expo};

use super::module::{Elem, Fqm, FqmError};

/// Labels of the strata entering the Eisenstein condition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum StratumLabel {
    /// `O_d`: the whole of `D_{d,1/d}` for odd `d`; the unsplit part for even `d`.
    Plain,
    /// `O_{d,c,x}` for an even 2-power `c`.
    Split { c: i64, x: Expo },
}

impl StratumLabel {
    pub fn display(&self, d: i64) -> String {
        match self {
            StratumLabel::Plain => format!("O_{}", d),
            StratumLabel::Split { c, x } => format!("O_{{{},{},{}}}", d, c, x),
        }
    }
}

/// General stratum queries from the classical notation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StratumQuery {
    /// `O_d`
    Od { d: i64 },
    /// `O_{d,c,x}`
    Odcx { d: i64, c: i64, x: Expo },
    /// `D_{c,x}`: `c`-torsion of norm `x`
    Dcx { c: i64, x: Expo },
    /// `D_{c,x,n}`: additionally of exact order `n`
    Dcxn { c: i64, x: Expo, n: i64 },
    /// `D^{c*}_x`: the coset `D^{c*}` cut by reduced norm `x`
    DcStarX { c: i64, x: Expo },
}

/// The even 2-power divisors `2 | c | 2^j` of `N`.
fn even_two_powers(level: i64) -> Vec<i64> {
    let mut out = Vec::new();
    let mut c = 2i64;
    while level % c == 0 {
        out.push(c);
        c *= 2;
    }
    out
}

pub fn divisors(n: i64) -> Vec<i64> {
    let mut out: Vec<i64> = (1..=n).filter(|d| n % d == 0).collect();
    out.sort();
    out
}

/// Invariants of a single element: its norm together with, for every even
/// 2-power `c | N`, the reduced norm `q_c` when the element lies in `D^{c*}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct State {
    q: Expo,
    cs: Vec<Option<Expo>>,
}

impl State {
    fn combine(&self, other: &State) -> State {
        State {
            q: frac_mod1(self.q + other.q),
            cs: self
                .cs
                .iter()
                .zip(&other.cs)
                .map(|(a, b)| match (a, b) {
                    (Some(x), Some(y)) => Some(frac_mod1(*x + *y)),
                    _ => None,
                })
                .collect(),
        }
    }
}

/// Classify a total state into a stratum label (for elements of `D_{d,1/d}`).
fn classify(d: i64, cpowers: &[i64], st: &State) -> StratumLabel {
    if d % 2 != 0 {
        return StratumLabel::Plain;
    }
    let mut best: Option<(i64, Expo)> = None;
    for (i, &c) in cpowers.iter().enumerate() {
        if let Some(x) = st.cs[i] {
            best = Some((c, x));
        }
    }
    match best {
        None => StratumLabel::Plain,
        Some((c, x)) => StratumLabel::Split { c, x },
    }
}

/// Per-block element profiles for `d`-torsion elements: deduplicated states
/// with multiplicities and one witness element per state.
fn block_profile(
    fqm: &Fqm,
    block_index: usize,
    d: i64,
    cpowers: &[i64],
) -> Vec<(State, u64, Vec<i64>)> {
    let block = &fqm.blocks()[block_index];
    let orders = block.orders();
    let mut map: BTreeMap<State, (u64, Vec<i64>)> = BTreeMap::new();
    let mut coords = vec![0i64; orders.len()];
    // a small embedded module consisting of this block alone shares all
    // block-local invariants with the full module
    let solo = Fqm::from_blocks(vec![block.clone()]);
    'el: loop {
        if coords.iter().zip(&orders).all(|(c, o)| (c * d).rem_euclid(*o) == 0) {
            let el: Elem = coords.clone();
            let q = solo.q(&el);
            let cs = cpowers
                .iter()
                .map(|&c| {
                    if solo.in_dcstar(c, &el) {
                        Some(solo.q_c(c, &el))
                    } else {
                        None
                    }
                })
                .collect();
            let st = State { q, cs };
            let entry = map.entry(st).or_insert_with(|| (0, el.clone()));
            entry.0 += 1;
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
    map.into_iter().map(|(st, (n, w))| (st, n, w)).collect()
}

/// Cardinalities of the strata of `D_{d,1/d}`, computed block-wise.
pub fn stratum_cardinalities(fqm: &Fqm, d: i64) -> BTreeMap<StratumLabel, u64> {
    let cpowers = even_two_powers(fqm.level());
    let mut acc: Vec<(State, u64)> =
        vec![(State { q: Ratio::default(), cs: vec![Some(Ratio::default()); cpowers.len()] }, 1)];
    for i in 0..fqm.blocks().len() {
        let profile = block_profile(fqm, i, d, &cpowers);
        let mut next: BTreeMap<State, u64> = BTreeMap::new();
        for (s1, n1) in &acc {
            for (s2, n2, _) in &profile {
                *next.entry(s1.combine(s2)).or_insert(0) += n1 * n2;
            }
        }
        acc = next.into_iter().collect();
    }
    let target = frac_mod1(Ratio::new(1, d));
    let mut out: BTreeMap<StratumLabel, u64> = BTreeMap::new();
    for (st, n) in acc {
        if st.q == target {
            *out.entry(classify(d, &cpowers, &st)).or_insert(0) += n;
        }
    }
    out
}

/// The full decomposition over all `d | N`, in table order.
pub fn decomposition(fqm: &Fqm) -> Vec<(i64, Vec<(StratumLabel, u64)>)> {
    let level = fqm.level();
    divisors(level)
        .into_iter()
        .map(|d| {
            let strata = stratum_cardinalities(fqm, d).into_iter().collect();
            (d, strata)
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    profiles: &[Vec<(State, u64, Vec<i64>)>],
    suffix: &[BTreeSet<State>],
    i: usize,
    partial: &State,
    chosen: &mut Vec<Vec<i64>>,
    target_q: Expo,
    d: i64,
    cpowers: &[i64],
    label: &StratumLabel,
) -> bool {
    if i == profiles.len() {
        return partial.q == target_q && classify(d, cpowers, partial) == *label;
    }
    for (st, _, witness) in &profiles[i] {
        let combined = partial.combine(st);
        // feasibility: some suffix completion must reach the target
        let ok = suffix[i + 1].iter().any(|tail| {
            let tot = combined.combine(tail);
            tot.q == target_q && classify(d, cpowers, &tot) == *label
        });
        if !ok {
            continue;
        }
        chosen.push(witness.clone());
        if dfs(profiles, suffix, i + 1, &combined, chosen, target_q, d, cpowers, label) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// One explicit element of the given stratum of `D_{d,1/d}`, constructed
/// block-wise (no materialisation of the module).
pub fn representative(fqm: &Fqm, d: i64, label: &StratumLabel) -> Option<Elem> {
    let cpowers = even_two_powers(fqm.level());
    let profiles: Vec<Vec<(State, u64, Vec<i64>)>> = (0..fqm.blocks().len())
        .map(|i| block_profile(fqm, i, d, &cpowers))
        .collect();
    let unit = State { q: Ratio::default(), cs: vec![Some(Ratio::default()); cpowers.len()] };
    let mut suffix: Vec<BTreeSet<State>> = vec![BTreeSet::new(); profiles.len() + 1];
    suffix[profiles.len()].insert(unit.clone());
    for i in (0..profiles.len()).rev() {
        let mut set = BTreeSet::new();
        for (st, _, _) in &profiles[i] {
            for tail in &suffix[i + 1] {
                set.insert(st.combine(tail));
            }
        }
        suffix[i] = set;
    }
    let target_q = frac_mod1(Ratio::new(1, d));
    let mut chosen = Vec::new();
    if !dfs(&profiles, &suffix, 0, &unit, &mut chosen, target_q, d, &cpowers, label) {
        return None;
    }
    // assemble the element from per-block witnesses
    let mut out = fqm.zero();
    let mut cursor = vec![0usize; fqm.blocks().len()];
    for (k, &(bi, _)) in fqm.slots().iter().enumerate() {
        out[k] = chosen[bi][cursor[bi]];
        cursor[bi] += 1;
    }
    Some(out)
}

/// Stratum label of a materialised element; `None` when the element lies in
/// no `D_{d,1/d}`.
pub fn label_of(fqm: &Fqm, gamma: &Elem) -> Option<(i64, StratumLabel)> {
    let level = fqm.level();
    let q = fqm.q(gamma);
    let d = divisors(level)
        .into_iter()
        .find(|&d| q == frac_mod1(Ratio::new(1, d)) && fqm.is_zero_elem(&fqm.smul_elem(d, gamma)))?;
    if d % 2 != 0 {
        return Some((d, StratumLabel::Plain));
    }
    let mut best = None;
    for c in even_two_powers(level) {
        if fqm.in_dcstar(c, gamma) {
            best = Some((c, fqm.q_c(c, gamma)));
        }
    }
    Some(match best {
        None => (d, StratumLabel::Plain),
        Some((c, x)) => (d, StratumLabel::Split { c, x }),
    })
}

/// Materialised element list for a general stratum query.
pub fn stratum_elements(fqm: &Fqm, query: &StratumQuery) -> Result<Vec<Elem>, FqmError> {
    let mut out = Vec::new();
    for el in fqm.elements()? {
        let keep = match query {
            StratumQuery::Od { d } => label_of(fqm, &el) == Some((*d, StratumLabel::Plain)),
            StratumQuery::Odcx { d, c, x } => {
                label_of(fqm, &el) == Some((*d, StratumLabel::Split { c: *c, x: frac_mod1(*x) }))
            }
            StratumQuery::Dcx { c, x } => {
                fqm.is_zero_elem(&fqm.smul_elem(*c, &el)) && fqm.q(&el) == frac_mod1(*x)
            }
            StratumQuery::Dcxn { c, x, n } => {
                fqm.is_zero_elem(&fqm.smul_elem(*c, &el))
                    && fqm.q(&el) == frac_mod1(*x)
                    && fqm.order_of(&el) == *n
            }
            StratumQuery::DcStarX { c, x } => {
                fqm.in_dcstar(*c, &el) && fqm.q_c(*c, &el) == frac_mod1(*x)
            }
        };
        if keep {
            out.push(el);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fqm::symbol::parse_genus;

    fn fqm(s: &str) -> Fqm {
        Fqm::from_genus(&parse_genus(s).unwrap()).unwrap()
    }

    #[test]
    fn case_e_strata() {
        // the level-4 signature-(12,2) module: strata O_1, O_{2,2,0},
        // O_{2,2,1/2}, O_4 with cardinalities 1, 36, 28, 4160
        let d = fqm("II_{12,2}(2_2^{+2}4_{II}^{+6})");
        let s1 = stratum_cardinalities(&d, 1);
        assert_eq!(s1.get(&StratumLabel::Plain), Some(&1));
        let s2 = stratum_cardinalities(&d, 2);
        assert_eq!(s2.get(&StratumLabel::Split { c: 2, x: Ratio::default() }), Some(&36));
        assert_eq!(s2.get(&StratumLabel::Split { c: 2, x: Ratio::new(1, 2) }), Some(&28));
        assert_eq!(s2.get(&StratumLabel::Plain), None);
        let s4 = stratum_cardinalities(&d, 4);
        assert_eq!(s4.get(&StratumLabel::Plain), Some(&4160));
    }

    #[test]
    fn case_i_strata() {
        // O_1, O_{2,4,0}, O_{2,4,1/2}, O_{4,2,1/4}, O_{4,2,3/4}, O_8 with
        // cardinalities 1, 10, 6, 120, 136, 4032
        let d = fqm("II_{8,2}(2_7^{+1}4_7^{+1}8_{II}^{+4})");
        let get = |s: &BTreeMap<StratumLabel, u64>, c: i64, num: i64, den: i64| {
            s.get(&StratumLabel::Split { c, x: frac_mod1(Ratio::new(num, den)) })
                .copied()
                .unwrap_or(0)
        };
        let s2 = stratum_cardinalities(&d, 2);
        assert_eq!(get(&s2, 4, 0, 1), 10);
        assert_eq!(get(&s2, 4, 1, 2), 6);
        let s4 = stratum_cardinalities(&d, 4);
        assert_eq!(get(&s4, 2, 1, 4), 120);
        assert_eq!(get(&s4, 2, 3, 4), 136);
        let s8 = stratum_cardinalities(&d, 8);
        assert_eq!(s8.get(&StratumLabel::Plain), Some(&4032));
    }

    #[test]
    fn strata_partition_d_torsion_layer() {
        let d = fqm("II_{8,2}(2_{II}^{+4}4_{II}^{-2}3^{+5})");
        for dd in [1i64, 2, 3, 4, 6, 12] {
            let total: u64 = stratum_cardinalities(&d, dd).values().sum();
            let hist = crate::fqm::module::q_histogram(&d, dd);
            let expect =
                hist.get(&frac_mod1(Ratio::new(1, dd))).copied().unwrap_or(0);
            assert_eq!(total, expect, "d = {dd}");
        }
    }

    #[test]
    fn representatives_land_in_their_stratum() {
        let d = fqm("II_{12,2}(2_2^{+2}4_{II}^{+6})");
        for (dd, strata) in decomposition(&d) {
            for (label, count) in strata {
                assert!(count > 0);
                let rep = representative(&d, dd, &label).expect("nonempty stratum");
                assert_eq!(label_of(&d, &rep), Some((dd, label)));
            }
        }
    }

    #[test]
    fn case_k_strata_sizes() {
        // sizes 1, 12, 24, 120, 1440, 2880 across d | 20
        let d = fqm("II_{6,2}(2_{II}^{-2}4_{II}^{-2}5^{+4})");
        let expected: &[(i64, u64)] =
            &[(1, 1), (2, 12), (4, 24), (5, 120), (10, 1440), (20, 2880)];
        for &(dd, n) in expected {
            let s = stratum_cardinalities(&d, dd);
            assert_eq!(s.values().sum::<u64>(), n, "|D_({dd},1/{dd})|");
            assert_eq!(s.len(), 1, "single stratum for d = {dd}");
        }
    }

    #[test]
    fn case_b_and_d_layer_sizes() {
        let b = fqm("II_{18,2}(2_{II}^{+10})");
        assert_eq!(stratum_cardinalities(&b, 2).values().sum::<u64>(), 496);
        let d = fqm("II_{14,2}(2_{II}^{-10}4_{II}^{-2})");
        assert_eq!(stratum_cardinalities(&d, 2).values().sum::<u64>(), 2112);
        assert_eq!(stratum_cardinalities(&d, 4).values().sum::<u64>(), 6144);
    }
}
