//! Orthogonal splitting of bicharacters on odd p-groups, the complete
//! rank/sign invariants, and isomorphism testing of bicharacter pairs
//! (both through the invariants and by brute-force search).

use crate::arith::{factorize, gcd, mod_pow, valuation};
use crate::dense::{DenseForm, GroupCtx};
use crate::error::Error;
use crate::form::{Bicharacter, SymmetricForm};
use crate::gauss::legendre;
use crate::group::{primary_component, GroupElement};
use crate::phase::PhaseQZ;
use std::collections::BTreeMap;
use std::fmt;

/// One rank-1 block of an orthogonal splitting: the pairing
/// (a, b) -> delta a b / p^s on Z/p^s, with delta coprime to p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalBlock {
    pub p: u64,
    pub s: u32,
    pub delta: u64,
}

/// The result of diagonalizing a bicharacter on an odd p-group.
#[derive(Debug, Clone)]
pub struct OrthogonalSplit {
    pub p: u64,
    pub blocks: Vec<DiagonalBlock>,
    /// Ambient elements realizing the blocks: basis[i] generates the i-th
    /// summand and chi(basis[i], basis[j]) = 0 for i != j.
    pub basis: Vec<GroupElement>,
}

impl OrthogonalSplit {
    /// The block-diagonal form on prod Z/p^{s_i} determined by the blocks.
    pub fn block_form(&self) -> SymmetricForm {
        let factors: Vec<u64> = self.blocks.iter().map(|b| b.p.pow(b.s)).collect();
        let group = crate::group::FiniteAbelianGroup::new(&factors)
            .expect("prime powers are positive");
        let rank = self.blocks.len();
        let mut rows = vec![vec![PhaseQZ::ZERO; rank]; rank];
        for (i, b) in self.blocks.iter().enumerate() {
            rows[i][i] = PhaseQZ::new(b.delta as i64, b.p.pow(b.s));
        }
        SymmetricForm::new(group, rows).expect("block form is admissible")
    }
}

/// Diagonalizes a nondegenerate form on a group of odd prime-power order
/// by repeatedly splitting off the element whose diagonal value has
/// maximal order (lexicographically least such element, for determinism)
/// and passing to its orthogonal complement.
pub fn orthogonal_split_odd_p(chi: &Bicharacter) -> Result<OrthogonalSplit, Error> {
    let group = chi.group().clone();
    let order = group.order();
    let facs = factorize(order);
    let p = match facs.as_slice() {
        [(p, _)] if *p % 2 == 1 => *p,
        _ => {
            return Err(Error::Unsupported(format!(
                "orthogonal splitting requires an odd prime-power order, got {order}"
            )))
        }
    };
    let ctx = GroupCtx::new(&group);
    let dense = chi.form().to_dense(&ctx);
    split_dense(&ctx, &dense, p)
}

/// The splitting algorithm over prebuilt dense tables; `p` must be the
/// odd prime with |A| a power of p, and the form must be nondegenerate.
pub fn split_dense(ctx: &GroupCtx, dense: &DenseForm, p: u64) -> Result<OrthogonalSplit, Error> {
    let group = ctx.group.clone();
    let order = group.order();
    let l = ctx.l as u64;

    // Current subgroup as generator indices; initially the standard basis.
    let mut gens: Vec<usize> = (0..ctx.rank)
        .filter(|&i| group.factors()[i] > 1)
        .map(|i| crate::dense::gen_index(ctx, i))
        .collect();
    let mut blocks = Vec::new();
    let mut basis = Vec::new();

    loop {
        let span = span_of(ctx, &gens);
        if span.len() == 1 {
            break;
        }
        // Lexicographically least element with chi(a,a) of maximal order.
        let mut best: Option<(u64, usize)> = None;
        for &a in &span {
            if a == 0 {
                continue;
            }
            let v = dense.eval(ctx, a, a) as u64;
            let ord = l / gcd(v, l);
            match best {
                Some((b_ord, _)) if b_ord >= ord => {}
                _ => best = Some((ord, a)),
            }
        }
        let (ord, a) = best.ok_or_else(|| {
            Error::Internal("no element with nonzero diagonal value in a nonzero complement".into())
        })?;
        if ord == 1 {
            return Err(Error::Internal(
                "diagonal values all vanish on a nonzero complement".into(),
            ));
        }
        let s = valuation(ord, p);
        if p.pow(s) != ord {
            return Err(Error::Internal(format!(
                "diagonal order {ord} is not a power of {p}"
            )));
        }
        let ps = ord;
        let vaa = dense.eval(ctx, a, a) as u64;
        // chi(a,a) = delta / p^s.
        let delta = vaa / (l / ps);
        debug_assert!(gcd(delta, p) == 1);
        blocks.push(DiagonalBlock { p, s, delta });
        basis.push(group.element_at(a));
        // Project every generator onto the orthogonal complement of a:
        // g' = g - lambda a with lambda = chi(a,g) / chi(a,a) mod p^s.
        let delta_inv = mod_pow(delta % ps, euler_phi_pp(p, s) - 1, ps);
        let mut new_gens = Vec::with_capacity(gens.len());
        for &g in &gens {
            let vag = dense.eval(ctx, a, g) as u64;
            if vag % (l / ps) != 0 {
                return Err(Error::Internal(
                    "off-diagonal value exceeds the maximal diagonal order".into(),
                ));
            }
            let num = vag / (l / ps);
            let lambda = num * delta_inv % ps;
            let proj = ctx.add_idx(g, ctx.scale_idx(-(lambda as i64), a));
            if proj != 0 {
                new_gens.push(proj);
            }
        }
        gens = new_gens;
    }

    // Transport check: the chosen basis must diagonalize chi with the
    // recorded blocks and span the whole group.
    let mut span_order: u64 = 1;
    for (i, bi) in blocks.iter().enumerate() {
        span_order = span_order.saturating_mul(bi.p.pow(bi.s));
        let ai = group.index_of(&basis[i]);
        for (j, bj) in blocks.iter().enumerate() {
            let aj = group.index_of(&basis[j]);
            let got = dense.eval(ctx, ai, aj) as u64;
            let expect = if i == j {
                bj.delta * (l / bj.p.pow(bj.s)) % l
            } else {
                0
            };
            if got != expect {
                return Err(Error::Internal(format!(
                    "basis change failed to diagonalize at ({i},{j})"
                )));
            }
        }
    }
    let full_span = span_of(ctx, &basis.iter().map(|b| group.index_of(b)).collect::<Vec<_>>());
    if span_order != order || full_span.len() as u64 != order {
        return Err(Error::Internal(
            "orthogonal basis does not span the group".into(),
        ));
    }
    Ok(OrthogonalSplit { p, blocks, basis })
}

fn euler_phi_pp(p: u64, s: u32) -> u64 {
    p.pow(s) - p.pow(s - 1)
}

/// Element indices of the subgroup generated by `gens`, sorted ascending.
fn span_of(ctx: &GroupCtx, gens: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; ctx.n];
    seen[0] = true;
    let mut elems = vec![0usize];
    for &g in gens {
        if g == 0 || seen[g] {
            continue;
        }
        let order_g = ctx.orders[g] as usize;
        let current = elems.clone();
        for &e in &current {
            let mut x = e;
            for _ in 1..order_g {
                x = ctx.add_idx(x, g);
                if !seen[x] {
                    seen[x] = true;
                    elems.push(x);
                }
            }
        }
    }
    elems.sort_unstable();
    elems
}

/// Rank and Legendre-sign invariants per (p, s) level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelInvariant {
    pub r: u32,
    pub sigma: i32,
}

/// The complete invariant of a bicharacter pair away from 2: for every odd
/// prime p and level s, the rank r_{p,s} and the sign sigma_{p,s}. The
/// 2-primary part carries no invariants here and is only flagged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallInvariants {
    pub entries: BTreeMap<(u64, u32), LevelInvariant>,
    /// Factors of the 2-part when present (unclassified).
    pub two_part: Option<Vec<u64>>,
}

impl WallInvariants {
    /// JSON wire form: {"p^s": {"r": .., "sigma": ..}, "2-part": "unclassified"}.
    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for (&(p, s), inv) in &self.entries {
            map.insert(
                format!("{p}^{s}"),
                serde_json::json!({"r": inv.r, "sigma": inv.sigma}),
            );
        }
        if self.two_part.is_some() {
            map.insert("2-part".into(), serde_json::Value::String("unclassified".into()));
        }
        serde_json::Value::Object(map)
    }
}

impl fmt::Display for WallInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

/// Splits off every odd primary component and records (r, sigma) per level;
/// sigma_{p,s} is the Legendre symbol of the product of the level's
/// diagonal units.
pub fn wall_invariants(chi: &Bicharacter) -> Result<WallInvariants, Error> {
    let group = chi.group();
    let mut entries = BTreeMap::new();
    let mut two_part = None;
    for (p, _) in factorize(group.order()) {
        let comp = primary_component(group, p);
        if p == 2 {
            two_part = Some(comp.subgroup.factors().to_vec());
            continue;
        }
        let restricted = chi.form().restrict(&comp.subgroup, &comp.embedding)?;
        let restricted = Bicharacter::new(restricted)?;
        let split = orthogonal_split_odd_p(&restricted)?;
        let mut levels: BTreeMap<u32, (u32, u64)> = BTreeMap::new();
        for b in &split.blocks {
            let e = levels.entry(b.s).or_insert((0, 1));
            e.0 += 1;
            e.1 = e.1 * (b.delta % p) % p;
        }
        for (s, (r, prod)) in levels {
            let sigma = legendre(prod as i64, p)?;
            entries.insert((p, s), LevelInvariant { r, sigma });
        }
    }
    Ok(WallInvariants { entries, two_part })
}

/// Isomorphism of bicharacter pairs on odd-order groups, decided by the
/// completeness of the (r, sigma) system.
pub fn is_isomorphic_odd(a: &Bicharacter, b: &Bicharacter) -> Result<bool, Error> {
    if a.group().order() % 2 == 0 || b.group().order() % 2 == 0 {
        return Err(Error::Unsupported(
            "invariant-based comparison covers odd-order groups only; use the brute-force oracle"
                .into(),
        ));
    }
    Ok(wall_invariants(a)?.entries == wall_invariants(b)?.entries)
}

/// Default order cap for the brute-force isomorphism search.
pub const DEFAULT_BRUTE_BOUND: u64 = 250;

/// Exhaustive isomorphism oracle: searches for a group isomorphism f with
/// chi2(f(a), f(b)) = chi1(a, b), pruning candidate generator images by
/// element order and by partial Gram agreement.
pub fn is_isomorphic_bruteforce(a: &Bicharacter, b: &Bicharacter) -> Result<bool, Error> {
    Ok(find_isomorphism(a, b, DEFAULT_BRUTE_BOUND)?.is_some())
}

/// As `is_isomorphic_bruteforce`, returning the generator images of a
/// witness isomorphism when one exists.
pub fn find_isomorphism(
    a: &Bicharacter,
    b: &Bicharacter,
    bound: u64,
) -> Result<Option<Vec<GroupElement>>, Error> {
    let ga = a.group();
    let gb = b.group();
    if ga.order() != gb.order() {
        return Ok(None);
    }
    if ga.order() > bound {
        return Err(Error::BoundExceeded(format!(
            "brute-force isomorphism search capped at order {bound}, got {}",
            ga.order()
        )));
    }
    let ctx_a = GroupCtx::new(ga);
    let ctx_b = GroupCtx::new(gb);
    let da = a.form().to_dense(&ctx_a);
    let db = b.form().to_dense(&ctx_b);
    // Common phase modulus for cross-group comparison.
    let lcm_l = crate::arith::lcm(ctx_a.l as u64, ctx_b.l as u64);
    let sa = lcm_l / ctx_a.l as u64;
    let sb = lcm_l / ctx_b.l as u64;

    let gens_a: Vec<usize> = (0..ctx_a.rank)
        .map(|i| crate::dense::gen_index(&ctx_a, i))
        .collect();
    let mut images: Vec<usize> = Vec::new();
    let found = dfs_isomorphism(
        &ctx_a, &da, &ctx_b, &db, sa, sb, &gens_a, &mut images,
    );
    Ok(found.map(|imgs| imgs.iter().map(|&y| gb.element_at(y)).collect()))
}

#[allow(clippy::too_many_arguments)]
fn dfs_isomorphism(
    ctx_a: &GroupCtx,
    da: &DenseForm,
    ctx_b: &GroupCtx,
    db: &DenseForm,
    sa: u64,
    sb: u64,
    gens_a: &[usize],
    images: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    let i = images.len();
    if i == gens_a.len() {
        // Generator images must span all of B.
        let span = span_of(ctx_b, images);
        if span.len() == ctx_b.n {
            return Some(images.clone());
        }
        return None;
    }
    let ei = gens_a[i];
    let di = ctx_a.group.factors()[i];
    let diag_target = da.eval(ctx_a, ei, ei) as u64 * sa;
    'cand: for y in 0..ctx_b.n {
        if di % ctx_b.orders[y] as u64 != 0 {
            continue;
        }
        if db.eval(ctx_b, y, y) as u64 * sb != diag_target {
            continue;
        }
        for (j, &yj) in images.iter().enumerate() {
            let want = da.eval(ctx_a, gens_a[j], ei) as u64 * sa;
            if db.eval(ctx_b, yj, y) as u64 * sb != want {
                continue 'cand;
            }
        }
        images.push(y);
        if let Some(w) = dfs_isomorphism(ctx_a, da, ctx_b, db, sa, sb, gens_a, images) {
            return Some(w);
        }
        images.pop();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::enumerate_bicharacters;
    use crate::group::FiniteAbelianGroup;
    use std::sync::Arc;

    fn group(factors: &[u64]) -> Arc<FiniteAbelianGroup> {
        FiniteAbelianGroup::new(factors).unwrap()
    }

    fn bich(factors: &[u64], rows: &[&[(i64, u64)]]) -> Bicharacter {
        let g = group(factors);
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&(n, d)| PhaseQZ::new(n, d)).collect())
            .collect();
        Bicharacter::new(SymmetricForm::new(g, rows).unwrap()).unwrap()
    }

    #[test]
    fn split_already_diagonal() {
        let chi = bich(&[3], &[&[(2, 3)]]);
        let split = orthogonal_split_odd_p(&chi).unwrap();
        assert_eq!(split.blocks, vec![DiagonalBlock { p: 3, s: 1, delta: 2 }]);

        let chi = bich(&[9], &[&[(1, 9)]]);
        let split = orthogonal_split_odd_p(&chi).unwrap();
        assert_eq!(split.blocks, vec![DiagonalBlock { p: 3, s: 2, delta: 1 }]);
    }

    #[test]
    fn split_hyperbolic_plane() {
        // Hyperbolic pairing on (Z/3)^2: off-diagonal 1/3.
        let chi = bich(&[3, 3], &[&[(0, 1), (1, 3)], &[(1, 3), (0, 1)]]);
        let split = orthogonal_split_odd_p(&chi).unwrap();
        assert_eq!(split.blocks.len(), 2);
        let prod: u64 = split.blocks.iter().map(|b| b.delta).product();
        // Determinant class of the hyperbolic plane is -1 mod 3.
        assert_eq!(legendre(prod as i64, 3).unwrap(), -1);
        // Reconstruction is isomorphic to the input.
        let rec = Bicharacter::new(split.block_form()).unwrap();
        assert!(is_isomorphic_bruteforce(&chi, &rec).unwrap());
    }

    #[test]
    fn split_rejects_even_and_degenerate() {
        let chi = bich(&[2], &[&[(1, 2)]]);
        assert!(orthogonal_split_odd_p(&chi).is_err());
        let chi = bich(&[6], &[&[(1, 6)]]);
        assert!(orthogonal_split_odd_p(&chi).is_err());
    }

    #[test]
    fn wall_invariants_examples() {
        let chi = bich(&[3], &[&[(1, 3)]]);
        let w = wall_invariants(&chi).unwrap();
        assert_eq!(w.entries[&(3, 1)], LevelInvariant { r: 1, sigma: 1 });

        let chi = bich(&[3], &[&[(2, 3)]]);
        let w = wall_invariants(&chi).unwrap();
        assert_eq!(w.entries[&(3, 1)], LevelInvariant { r: 1, sigma: -1 });
        assert_eq!(w.to_json().to_string(), r#"{"3^1":{"r":1,"sigma":-1}}"#);

        let chi = bich(&[3, 3], &[&[(1, 3), (0, 1)], &[(0, 1), (2, 3)]]);
        let w = wall_invariants(&chi).unwrap();
        assert_eq!(w.entries[&(3, 1)], LevelInvariant { r: 2, sigma: -1 });

        // 2-part flagged.
        let chi = bich(&[2], &[&[(1, 2)]]);
        let w = wall_invariants(&chi).unwrap();
        assert!(w.entries.is_empty());
        assert_eq!(w.two_part, Some(vec![2]));
    }

    #[test]
    fn wall_invariants_split_over_primes() {
        // Z/15 with chi(1,1) = 1/15 -> 3-part and 5-part blocks.
        let chi = bich(&[15], &[&[(1, 15)]]);
        let w = wall_invariants(&chi).unwrap();
        assert_eq!(w.entries.len(), 2);
        assert!(w.entries.contains_key(&(3, 1)));
        assert!(w.entries.contains_key(&(5, 1)));
        assert!(w.two_part.is_none());
    }

    #[test]
    fn iso_odd_examples() {
        let a = bich(&[3, 3], &[&[(1, 3), (0, 1)], &[(0, 1), (1, 3)]]);
        let b = bich(&[3, 3], &[&[(2, 3), (0, 1)], &[(0, 1), (2, 3)]]);
        let c = bich(&[3, 3], &[&[(1, 3), (0, 1)], &[(0, 1), (2, 3)]]);
        assert!(is_isomorphic_odd(&a, &b).unwrap());
        assert!(!is_isomorphic_odd(&a, &c).unwrap());
        assert!(is_isomorphic_odd(&a, &a).unwrap());
        // Brute force agrees.
        assert!(is_isomorphic_bruteforce(&a, &b).unwrap());
        assert!(!is_isomorphic_bruteforce(&a, &c).unwrap());
        // Even order rejected.
        let e = bich(&[2], &[&[(1, 2)]]);
        assert!(is_isomorphic_odd(&e, &e).is_err());
    }

    #[test]
    fn brute_force_examples() {
        // Different orders: trivially false.
        let a = bich(&[3], &[&[(1, 3)]]);
        let b = bich(&[5], &[&[(1, 5)]]);
        assert!(!is_isomorphic_bruteforce(&a, &b).unwrap());
        // a -> 2a transports 1/3 to 4/3 = 1/3.
        let c = bich(&[3], &[&[(1, 3)]]);
        assert!(is_isomorphic_bruteforce(&a, &c).unwrap());
        // Non-isomorphic signs.
        let d = bich(&[3], &[&[(2, 3)]]);
        assert!(!is_isomorphic_bruteforce(&a, &d).unwrap());
        // Isomorphic but differently presented groups are handled.
        let e = bich(&[9], &[&[(1, 9)]]);
        let f = bich(&[3, 3], &[&[(1, 3), (0, 1)], &[(0, 1), (1, 3)]]);
        assert!(!is_isomorphic_bruteforce(&e, &f).unwrap());
    }

    #[test]
    fn witness_transports_the_form() {
        // The returned generator images define a homomorphism carrying
        // chi1 to chi2 on every pair, not just on generators.
        let a = bich(&[3, 3], &[&[(1, 3), (0, 1)], &[(0, 1), (1, 3)]]);
        let b = bich(&[3, 3], &[&[(2, 3), (0, 1)], &[(0, 1), (2, 3)]]);
        let images = find_isomorphism(&a, &b, 250).unwrap().expect("isomorphic");
        let ga = a.group();
        let gb = b.group();
        let apply = |x: &crate::group::GroupElement| {
            let mut out = gb.zero();
            for (i, &c) in x.coords().iter().enumerate() {
                out = gb.add(&out, &gb.scale(c as i64, &images[i]));
            }
            out
        };
        let mut seen = std::collections::HashSet::new();
        for x in ga.elements() {
            seen.insert(apply(&x));
            for y in ga.elements() {
                assert_eq!(
                    b.evaluate(&apply(&x), &apply(&y)),
                    a.evaluate(&x, &y),
                    "transport fails at ({x}, {y})"
                );
            }
        }
        assert_eq!(seen.len() as u64, gb.order(), "witness is bijective");
    }

    #[test]
    fn invariants_agree_with_bruteforce_z3_squared() {
        // Exhaustive over all bicharacters on (Z/3)^2.
        let g = group(&[3, 3]);
        let all = enumerate_bicharacters(&g).unwrap();
        assert!(!all.is_empty());
        let invs: Vec<_> = all.iter().map(|c| wall_invariants(c).unwrap()).collect();
        for i in 0..all.len() {
            for j in i..all.len() {
                let by_inv = invs[i] == invs[j];
                let by_brute = is_isomorphic_bruteforce(&all[i], &all[j]).unwrap();
                assert_eq!(by_inv, by_brute, "forms {i} and {j}");
            }
        }
    }

    #[test]
    fn split_soundness_small_corpus() {
        for factors in [vec![9u64], vec![3, 3], vec![27], vec![3, 9], vec![5, 5]] {
            let g = group(&factors);
            for chi in enumerate_bicharacters(&g).unwrap() {
                let split = orthogonal_split_odd_p(&chi).unwrap();
                let rec = Bicharacter::new(split.block_form()).unwrap();
                assert!(
                    is_isomorphic_bruteforce(&chi, &rec).unwrap(),
                    "split reconstruction differs for {chi}"
                );
            }
        }
    }
}
