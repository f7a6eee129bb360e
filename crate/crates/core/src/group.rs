//! Finite abelian groups presented as direct sums of cyclic factors,
//! with componentwise element arithmetic, k-torsion subgroups and
//! p-primary structure.

use crate::arith::{factorize, gcd, lcm, log_exact, valuation};
use crate::error::Error;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// A group Z/d1 x ... x Z/dr, identified by its ordered factor list.
///
/// Two groups with different factor lists compare unequal even when
/// isomorphic; isomorphism-level questions go through [`primary_ranks`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
    order: u64,
    exponent: u64,
    /// Mixed-radix strides for lexicographic element indexing.
    strides: Vec<u64>,
}

/// An element of a specific group: residues a_i with 0 <= a_i < d_i.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    coords: Vec<u64>,
}

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn from_coords(coords: Vec<u64>) -> GroupElement {
        GroupElement { coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FiniteAbelianGroup {
    /// Builds a group from its cyclic factor list. An empty list is the
    /// trivial group `[1]`; nonpositive entries are rejected.
    pub fn new(factors: &[u64]) -> Result<Arc<FiniteAbelianGroup>, Error> {
        if factors.contains(&0) {
            return Err(Error::InvalidGroup(
                "cyclic factors must be positive".into(),
            ));
        }
        let factors: Vec<u64> = if factors.is_empty() {
            vec![1]
        } else {
            factors.to_vec()
        };
        let mut order: u64 = 1;
        let mut exponent: u64 = 1;
        for &d in &factors {
            order = order
                .checked_mul(d)
                .ok_or_else(|| Error::InvalidGroup("group order overflows u64".into()))?;
            exponent = lcm(exponent, d);
        }
        let mut strides = vec![1u64; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * factors[i + 1];
        }
        Ok(Arc::new(FiniteAbelianGroup {
            factors,
            order,
            exponent,
            strides,
        }))
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.factors.len()],
        }
    }

    /// The i-th standard generator (coordinate vector e_i); zero if d_i = 1.
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut coords = vec![0; self.factors.len()];
        if self.factors[i] > 1 {
            coords[i] = 1;
        }
        GroupElement { coords }
    }

    pub fn element(&self, coords: &[u64]) -> Result<GroupElement, Error> {
        if coords.len() != self.factors.len() {
            return Err(Error::InvalidGroup(format!(
                "element has {} coordinates, group has {} factors",
                coords.len(),
                self.factors.len()
            )));
        }
        Ok(GroupElement {
            coords: coords
                .iter()
                .zip(&self.factors)
                .map(|(&c, &d)| c % d)
                .collect(),
        })
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .zip(&self.factors)
                .map(|((&x, &y), &d)| (x + y) % d)
                .collect(),
        }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&self.factors)
                .map(|(&x, &d)| if x == 0 { 0 } else { d - x })
                .collect(),
        }
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    /// Integer scaling k*a (k may be negative).
    pub fn scale(&self, k: i64, a: &GroupElement) -> GroupElement {
        GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&self.factors)
                .map(|(&x, &d)| {
                    let m = (x as i128 * k as i128).rem_euclid(d as i128);
                    m as u64
                })
                .collect(),
        }
    }

    /// Additive order of an element.
    pub fn order_of(&self, a: &GroupElement) -> u64 {
        a.coords
            .iter()
            .zip(&self.factors)
            .fold(1, |acc, (&x, &d)| lcm(acc, d / gcd(x, d)))
    }

    /// Lexicographic index of an element (first coordinate most significant).
    pub fn index_of(&self, a: &GroupElement) -> usize {
        a.coords
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| (c * s) as usize)
            .sum()
    }

    pub fn element_at(&self, index: usize) -> GroupElement {
        debug_assert!((index as u64) < self.order);
        let mut coords = Vec::with_capacity(self.factors.len());
        let mut rem = index as u64;
        for &s in &self.strides {
            coords.push(rem / s);
            rem %= s;
        }
        GroupElement { coords }
    }

    /// All elements in lexicographic coordinate order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order as usize).map(move |i| self.element_at(i))
    }
}

/// |A_k| = prod_i gcd(k, d_i), with gcd(0, d) = d so |A_0| = |A|.
pub fn torsion_order(group: &FiniteAbelianGroup, k: u64) -> u64 {
    group.factors().iter().map(|&d| gcd(k, d)).product()
}

/// The subgroup A_k = { a : k*a = 0 }, in lexicographic order.
pub fn torsion_subgroup(group: &FiniteAbelianGroup, k: u64) -> Vec<GroupElement> {
    let mut out = Vec::with_capacity(torsion_order(group, k) as usize);
    // a_i must be a multiple of d_i / gcd(k, d_i).
    let steps: Vec<u64> = group.factors().iter().map(|&d| d / gcd(k, d)).collect();
    collect_multiples(group, &steps, &mut out);
    out
}

fn collect_multiples(
    group: &FiniteAbelianGroup,
    steps: &[u64],
    out: &mut Vec<GroupElement>,
) {
    let rank = group.rank();
    let mut coords = vec![0u64; rank];
    loop {
        out.push(GroupElement {
            coords: coords.clone(),
        });
        // Odometer increment by `steps`, most significant coordinate first
        // in lexicographic order means we bump the last coordinate fastest.
        let mut i = rank;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            coords[i] += steps[i];
            if coords[i] < group.factors()[i] {
                break;
            }
            coords[i] = 0;
        }
    }
}

/// Multiplicities r_{p,s} of Z/p^s in the p-primary part of a group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimaryRanks {
    pub p: u64,
    /// s -> r_{p,s}, only levels with r > 0 are stored.
    pub ranks: BTreeMap<u32, u32>,
}

impl PrimaryRanks {
    /// log_p of the order of the p-primary component.
    pub fn log_order(&self) -> u32 {
        self.ranks.iter().map(|(&s, &r)| s * r).sum()
    }
}

/// Counts cyclic factors whose p-part is exactly p^s.
pub fn primary_ranks(group: &FiniteAbelianGroup, p: u64) -> PrimaryRanks {
    let mut ranks = BTreeMap::new();
    for &d in group.factors() {
        let s = valuation(d, p);
        if s > 0 {
            *ranks.entry(s).or_insert(0) += 1;
        }
    }
    PrimaryRanks { p, ranks }
}

/// The p-primary component A^(p) together with the images of its
/// generators inside the ambient group.
pub struct PrimaryComponent {
    pub subgroup: Arc<FiniteAbelianGroup>,
    /// Image in the ambient group of each subgroup generator.
    pub embedding: Vec<GroupElement>,
}

/// Extracts A^(p): for each factor d_i = p^s * m with s >= 1, the element
/// m * e_i generates the p-part of that cyclic factor.
pub fn primary_component(group: &FiniteAbelianGroup, p: u64) -> PrimaryComponent {
    let mut sub_factors = Vec::new();
    let mut embedding = Vec::new();
    for (i, &d) in group.factors().iter().enumerate() {
        let s = valuation(d, p);
        if s == 0 {
            continue;
        }
        let pk = p.pow(s);
        let m = d / pk;
        sub_factors.push(pk);
        let mut coords = vec![0u64; group.rank()];
        coords[i] = m;
        embedding.push(GroupElement { coords });
    }
    let subgroup = FiniteAbelianGroup::new(&sub_factors).expect("prime powers are positive");
    PrimaryComponent {
        subgroup,
        embedding,
    }
}

/// Recovers r_{p,s} from the torsion orders |A_{p^m}|, m = 1..=M, where
/// p^M annihilates the p-part. Inverts
/// log_p(|A_{p^{m+1}}| / |A_{p^m}|) = r_{p,m+1} + r_{p,m+2} + ...
pub fn reconstruct_primary_from_torsion(
    orders: &BTreeMap<u32, u64>,
    p: u64,
) -> Result<PrimaryRanks, Error> {
    if orders.is_empty() {
        return Ok(PrimaryRanks {
            p,
            ranks: BTreeMap::new(),
        });
    }
    let max_m = *orders.keys().last().unwrap();
    if (1..=max_m).any(|m| !orders.contains_key(&m)) {
        return Err(Error::InconsistentInput(
            "torsion orders must be given for m = 1..=M without gaps".into(),
        ));
    }
    // tail[m] = sum_{s > m} r_s; tail[0] = log_p |A_p| is the total rank.
    let mut tails = Vec::with_capacity(max_m as usize + 1);
    let first = orders[&1];
    tails.push(log_exact(first, p).ok_or_else(|| {
        Error::InconsistentInput(format!("|A_p| = {first} is not a power of p = {p}"))
    })?);
    for m in 1..max_m {
        let lo = orders[&m];
        let hi = orders[&(m + 1)];
        if hi % lo != 0 {
            return Err(Error::InconsistentInput(
                "torsion orders must be monotone and divide each other".into(),
            ));
        }
        tails.push(log_exact(hi / lo, p).ok_or_else(|| {
            Error::InconsistentInput("torsion order ratio is not a power of p".into())
        })?);
    }
    tails.push(0); // p^M annihilates the p-part.
    let mut ranks = BTreeMap::new();
    for m in 1..=max_m {
        let hi = tails[(m - 1) as usize];
        let lo = tails[m as usize];
        if hi < lo {
            return Err(Error::InconsistentInput(
                "torsion orders imply a negative rank".into(),
            ));
        }
        if hi > lo {
            ranks.insert(m, hi - lo);
        }
    }
    Ok(PrimaryRanks { p, ranks })
}

/// The distinct primes dividing the group order.
pub fn prime_support(group: &FiniteAbelianGroup) -> Vec<u64> {
    factorize(group.order()).into_iter().map(|(p, _)| p).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(factors: &[u64]) -> Arc<FiniteAbelianGroup> {
        FiniteAbelianGroup::new(factors).unwrap()
    }

    #[test]
    fn make_group_basics() {
        let a = g(&[3]);
        assert_eq!(a.order(), 3);
        let b = g(&[2, 12]);
        assert_eq!(b.order(), 24);
        assert_eq!(b.exponent(), 12);
        let t = g(&[1]);
        assert_eq!(t.order(), 1);
        // Empty list is the trivial group.
        assert_eq!(FiniteAbelianGroup::new(&[]).unwrap().factors(), &[1]);
        assert!(FiniteAbelianGroup::new(&[0, 3]).is_err());
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let a = g(&[2, 3]);
        let elems: Vec<_> = a.elements().collect();
        assert_eq!(elems.len(), 6);
        assert_eq!(elems[0].coords(), &[0, 0]);
        assert_eq!(elems[1].coords(), &[0, 1]);
        assert_eq!(elems[3].coords(), &[1, 0]);
        for (i, e) in elems.iter().enumerate() {
            assert_eq!(a.index_of(e), i);
        }
    }

    #[test]
    fn arithmetic_laws() {
        let a = g(&[4, 6]);
        let x = a.element(&[3, 5]).unwrap();
        let y = a.element(&[2, 4]).unwrap();
        assert_eq!(a.add(&x, &y).coords(), &[1, 3]);
        assert_eq!(a.add(&x, &a.neg(&x)), a.zero());
        assert_eq!(a.scale(a.exponent() as i64, &x), a.zero());
        assert_eq!(a.order_of(&x), 12);
    }

    #[test]
    fn torsion_orders_match_spec() {
        assert_eq!(torsion_order(&g(&[6]), 4), 2);
        assert_eq!(torsion_order(&g(&[3]), 0), 3);
        assert_eq!(torsion_order(&g(&[2, 12]), 3), 3);
    }

    #[test]
    fn torsion_subgroups() {
        let z4 = g(&[4]);
        let t = torsion_subgroup(&z4, 2);
        assert_eq!(t.len(), 2);
        assert_eq!(t[1].coords(), &[2]);

        let z3 = g(&[3]);
        assert_eq!(torsion_subgroup(&z3, 2).len(), 1);

        let v = g(&[2, 2]);
        assert_eq!(torsion_subgroup(&v, 2).len(), 4);

        // Closure under addition and size = torsion_order, a few cases.
        for (factors, k) in [(vec![2u64, 12], 4u64), (vec![9, 3], 6), (vec![8], 12)] {
            let grp = g(&factors);
            let sub = torsion_subgroup(&grp, k);
            assert_eq!(sub.len() as u64, torsion_order(&grp, k));
            for x in &sub {
                for y in &sub {
                    let s = grp.add(x, y);
                    assert!(sub.contains(&s));
                }
            }
        }
    }

    #[test]
    fn primary_ranks_examples() {
        let r = primary_ranks(&g(&[2, 12]), 2);
        assert_eq!(r.ranks, BTreeMap::from([(1, 1), (2, 1)]));
        let r = primary_ranks(&g(&[2, 12]), 3);
        assert_eq!(r.ranks, BTreeMap::from([(1, 1)]));
        let r = primary_ranks(&g(&[9, 9]), 3);
        assert_eq!(r.ranks, BTreeMap::from([(2, 2)]));
    }

    #[test]
    fn primary_component_examples() {
        // Z/6 at p=3: subgroup Z/3 embedded via 2.
        let pc = primary_component(&g(&[6]), 3);
        assert_eq!(pc.subgroup.factors(), &[3]);
        assert_eq!(pc.embedding[0].coords(), &[2]);

        let pc = primary_component(&g(&[5]), 2);
        assert_eq!(pc.subgroup.order(), 1);

        let pc = primary_component(&g(&[2, 12]), 2);
        assert_eq!(pc.subgroup.factors(), &[2, 4]);
        // CRT oracle: embedding images have p-power orders multiplying to the p-part.
        let amb = g(&[2, 12]);
        let orders: Vec<u64> = pc.embedding.iter().map(|e| amb.order_of(e)).collect();
        assert_eq!(orders, vec![2, 4]);
    }

    #[test]
    fn reconstruct_examples() {
        let orders = BTreeMap::from([(1, 3), (2, 9), (3, 9)]);
        let r = reconstruct_primary_from_torsion(&orders, 3).unwrap();
        assert_eq!(r.ranks, BTreeMap::from([(2, 1)]));

        let orders = BTreeMap::from([(1, 1)]);
        let r = reconstruct_primary_from_torsion(&orders, 2).unwrap();
        assert!(r.ranks.is_empty());

        let orders = BTreeMap::from([(1, 9), (2, 9)]);
        let r = reconstruct_primary_from_torsion(&orders, 3).unwrap();
        assert_eq!(r.ranks, BTreeMap::from([(1, 2)]));

        // Non-integral log rejected.
        let orders = BTreeMap::from([(1, 6)]);
        assert!(reconstruct_primary_from_torsion(&orders, 3).is_err());
        // Non-monotone rejected.
        let orders = BTreeMap::from([(1, 9), (2, 3)]);
        assert!(reconstruct_primary_from_torsion(&orders, 3).is_err());
    }

    #[test]
    fn reconstruct_round_trips_torsion() {
        for factors in [
            vec![9u64],
            vec![3, 3],
            vec![3, 9, 27],
            vec![2, 4, 8],
            vec![6, 12],
        ] {
            let grp = g(&factors);
            for p in prime_support(&grp) {
                let expected = primary_ranks(&grp, p);
                let max_s = expected.ranks.keys().last().copied().unwrap_or(0).max(1);
                let orders: BTreeMap<u32, u64> = (1..=max_s)
                    .map(|m| (m, torsion_order(&grp, p.pow(m))))
                    .collect();
                let got = reconstruct_primary_from_torsion(&orders, p).unwrap();
                assert_eq!(got, expected, "group {factors:?} p={p}");
            }
        }
    }

    #[test]
    fn torsion_multiplicative_over_coprime() {
        for factors in [vec![6u64, 10], vec![12, 9], vec![30]] {
            let grp = g(&factors);
            for (k, l) in [(2u64, 3u64), (4, 9), (5, 6), (0, 7)] {
                if gcd(k, l) == 1 {
                    assert_eq!(
                        torsion_order(&grp, k * l),
                        torsion_order(&grp, k) * torsion_order(&grp, l)
                    );
                }
            }
        }
    }
}
