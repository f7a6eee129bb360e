//! Flat integer tables for the hot enumeration loops.
//!
//! Every circle value attached to a form on a group A lives in the cyclic
//! subgroup (1/L)Z/Z with L = 2 * exponent(A): Gram entries have
//! denominators dividing exponent(A), and homogeneous base maps at worst
//! double that. Phases therefore become u32 residues mod L and the inner
//! loops reduce to integer adds plus a complex lookup table.

use crate::arith::gcd;
use crate::group::FiniteAbelianGroup;
use num_complex::Complex64;
use std::sync::Arc;

/// Per-group scratch shared by all forms on the same group.
pub struct GroupCtx {
    pub group: Arc<FiniteAbelianGroup>,
    pub n: usize,
    pub rank: usize,
    /// Phase modulus L = 2 * exponent.
    pub l: u32,
    /// lut[v] = e^{2 pi i v / L}.
    pub lut: Vec<Complex64>,
    /// n x n index addition table; empty above `ADD_TABLE_MAX_ORDER`, in
    /// which case sums are recomputed from coordinates.
    add: Vec<u32>,
    /// Flattened coordinates, rank entries per element, lex order.
    coords: Vec<u32>,
    /// Mixed-radix strides matching the lexicographic element order.
    strides: Vec<u64>,
    /// Additive order of every element.
    pub orders: Vec<u32>,
}

/// Largest group order that gets the quadratic-size addition table.
const ADD_TABLE_MAX_ORDER: usize = 4096;

impl GroupCtx {
    pub fn new(group: &Arc<FiniteAbelianGroup>) -> GroupCtx {
        let n = group.order() as usize;
        let rank = group.rank();
        let l = (2 * group.exponent()) as u32;
        let lut = (0..l)
            .map(|v| {
                let theta = 2.0 * std::f64::consts::PI * v as f64 / l as f64;
                Complex64::new(theta.cos(), theta.sin())
            })
            .collect();
        let factors = group.factors();
        let mut coords = vec![0u32; n * rank];
        for idx in 1..n {
            let (head, tail) = coords.split_at_mut(idx * rank);
            let prev = &head[(idx - 1) * rank..];
            let cur = &mut tail[..rank];
            cur.copy_from_slice(prev);
            for i in (0..rank).rev() {
                cur[i] += 1;
                if (cur[i] as u64) < factors[i] {
                    break;
                }
                cur[i] = 0;
            }
        }
        let mut orders = vec![1u32; n];
        for idx in 0..n {
            let c = &coords[idx * rank..(idx + 1) * rank];
            let mut o: u64 = 1;
            for (i, &x) in c.iter().enumerate() {
                let d = factors[i];
                let oi = d / gcd(x as u64, d);
                o = o / gcd(o, oi) * oi;
            }
            orders[idx] = o as u32;
        }
        // Strides let index arithmetic replace coordinate arithmetic.
        let mut strides = vec![1u64; rank];
        for i in (0..rank.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * factors[i + 1];
        }
        let mut add = Vec::new();
        if n <= ADD_TABLE_MAX_ORDER {
            add.resize(n * n, 0);
            for a in 0..n {
                let ca = &coords[a * rank..(a + 1) * rank];
                let row = &mut add[a * n..(a + 1) * n];
                for (b, slot) in row.iter_mut().enumerate() {
                    let cb = &coords[b * rank..(b + 1) * rank];
                    let mut idx: u64 = 0;
                    for i in 0..rank {
                        let s = (ca[i] as u64 + cb[i] as u64) % factors[i];
                        idx += s * strides[i];
                    }
                    *slot = idx as u32;
                }
            }
        }
        GroupCtx {
            group: group.clone(),
            n,
            rank,
            l,
            lut,
            add,
            coords,
            strides,
            orders,
        }
    }

    #[inline]
    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        if !self.add.is_empty() {
            return self.add[a * self.n + b] as usize;
        }
        let factors = self.group.factors();
        let ca = self.coords_of(a);
        let cb = self.coords_of(b);
        let mut idx: u64 = 0;
        for i in 0..self.rank {
            let s = (ca[i] as u64 + cb[i] as u64) % factors[i];
            idx += s * self.strides[i];
        }
        idx as usize
    }

    #[inline]
    pub fn coords_of(&self, idx: usize) -> &[u32] {
        &self.coords[idx * self.rank..(idx + 1) * self.rank]
    }

    /// Index of k * a, k arbitrary.
    pub fn scale_idx(&self, k: i64, a: usize) -> usize {
        let factors = self.group.factors();
        let c = self.coords_of(a);
        let mut idx: u64 = 0;
        for i in 0..self.rank {
            let d = factors[i] as i128;
            let s = (c[i] as i128 * k as i128).rem_euclid(d) as u64;
            idx += s * self.strides[i];
        }
        idx as usize
    }

    pub fn neg_idx(&self, a: usize) -> usize {
        self.scale_idx(-1, a)
    }
}

/// A symmetric form on the context group with Gram numerators over L.
pub struct DenseForm {
    /// rank x rank numerators mod L.
    pub gram_l: Vec<u32>,
    /// rows[i][b] = chi(e_i, b), rank rows of length n.
    pub rows: Vec<u32>,
}

impl DenseForm {
    /// `gram_l` is row-major rank x rank, entries already reduced mod L.
    pub fn new(ctx: &GroupCtx, gram_l: Vec<u32>) -> DenseForm {
        let rows = build_rows(ctx, &gram_l);
        DenseForm { gram_l, rows }
    }

    #[inline]
    pub fn row(&self, i: usize, ctx: &GroupCtx) -> &[u32] {
        &self.rows[i * ctx.n..(i + 1) * ctx.n]
    }

    /// True iff only 0 pairs trivially with every generator.
    pub fn is_nondegenerate(&self, ctx: &GroupCtx) -> bool {
        'outer: for b in 1..ctx.n {
            for i in 0..ctx.rank {
                if self.rows[i * ctx.n + b] != 0 {
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }

    /// Indices of radical elements (always contains 0).
    pub fn radical_indices(&self, ctx: &GroupCtx) -> Vec<u32> {
        let mut out = Vec::new();
        'outer: for b in 0..ctx.n {
            for i in 0..ctx.rank {
                if self.rows[i * ctx.n + b] != 0 {
                    continue 'outer;
                }
            }
            out.push(b as u32);
        }
        out
    }

    /// chi(a, b) via the generator rows; O(rank).
    #[inline]
    pub fn eval(&self, ctx: &GroupCtx, a: usize, b: usize) -> u32 {
        let ca = ctx.coords_of(a);
        let mut v: u64 = 0;
        for i in 0..ctx.rank {
            v += ca[i] as u64 * self.rows[i * ctx.n + b] as u64;
        }
        (v % ctx.l as u64) as u32
    }

    /// Column chi(., c) for all elements; O(n) via the linear-functional DP.
    pub fn fill_column(&self, ctx: &GroupCtx, c: usize, out: &mut Vec<u32>) {
        let gen_vals: Vec<u32> = (0..ctx.rank).map(|i| self.rows[i * ctx.n + c]).collect();
        fill_linear(ctx, &gen_vals, out);
    }

    /// The homogeneous base map mu0 over L, verified after construction:
    /// coboundary against this form on all (element, generator) pairs and
    /// homogeneity mu0(k a) = k^2 mu0(a) for 0 <= k < exponent.
    pub fn homogeneous_mu0(&self, ctx: &GroupCtx) -> Result<Vec<u32>, String> {
        let factors = ctx.group.factors();
        let l = ctx.l as u64;
        let exp = ctx.group.exponent();
        // Per-factor quadratic term tables q_i(c), c in 0..d_i.
        let mut q: Vec<Vec<u32>> = Vec::with_capacity(ctx.rank);
        for (i, &d) in factors.iter().enumerate() {
            let g = self.gram_l[i * ctx.rank + i] as u64;
            let mut tab = Vec::with_capacity(d as usize);
            for c in 0..d {
                let v = if d % 2 == 1 {
                    // h = (d+1)/2 halves the diagonal exactly mod d, and
                    // g is a multiple of L/d, so c^2 h may be reduced mod d.
                    let h = (d + 1) / 2;
                    (c * c) % d * h % d * g % l
                } else {
                    // chi(e_i, e_i) = c_i / d_i; q_i(c) = c^2 c_i / (2 d_i).
                    debug_assert!(g % (l / d) == 0);
                    let ci = g / (l / d);
                    let step = l / (2 * d);
                    (c * c) % (2 * d) * ci % (2 * d) * step % l
                };
                tab.push(v as u32);
            }
            q.push(tab);
        }
        let mut mu = vec![0u32; ctx.n];
        for (a, slot) in mu.iter_mut().enumerate() {
            let ca = ctx.coords_of(a);
            let mut v: u64 = 0;
            for i in 0..ctx.rank {
                v += q[i][ca[i] as usize] as u64;
                for j in (i + 1)..ctx.rank {
                    v += ca[i] as u64 * ca[j] as u64 % l
                        * self.gram_l[i * ctx.rank + j] as u64;
                }
            }
            *slot = (v % l) as u32;
        }
        // Guard: coboundary on (a, e_j) pairs; all pairs follow by
        // bilinearity of the verified Gram rows.
        for j in 0..ctx.rank {
            if factors[j] == 1 {
                continue;
            }
            let ej = gen_index(ctx, j);
            let row = self.row(j, ctx);
            for a in 0..ctx.n {
                let lhs = mu[ctx.add_idx(a, ej)] as u64 + ctx.l as u64 * 2
                    - mu[a] as u64
                    - mu[ej] as u64;
                if (lhs % ctx.l as u64) as u32 != row[a] {
                    return Err(format!(
                        "coboundary guard failed at element {a}, generator {j}"
                    ));
                }
            }
        }
        for a in 0..ctx.n {
            let base = mu[a] as u64;
            for k in 0..exp {
                let ka = ctx.scale_idx(k as i64, a);
                if mu[ka] as u64 != base * ((k * k) % l) % l {
                    return Err(format!("homogeneity guard failed at element {a}, k={k}"));
                }
            }
        }
        Ok(mu)
    }
}

/// Index of the j-th standard generator (zero when the factor is trivial).
pub fn gen_index(ctx: &GroupCtx, j: usize) -> usize {
    if ctx.group.factors()[j] == 1 {
        return 0;
    }
    let mut stride: u64 = 1;
    for i in (j + 1)..ctx.rank {
        stride *= ctx.group.factors()[i];
    }
    stride as usize
}

/// Fills out[a] = sum_i a_i * gen_vals[i] mod L for every element index a.
pub fn fill_linear(ctx: &GroupCtx, gen_vals: &[u32], out: &mut Vec<u32>) {
    let factors = ctx.group.factors();
    out.clear();
    out.resize(ctx.n, 0);
    let mut len = 1usize;
    for i in (0..ctx.rank).rev() {
        let d = factors[i] as usize;
        let g = gen_vals[i];
        for c in 1..d {
            let (done, rest) = out.split_at_mut(c * len);
            let prev = &done[(c - 1) * len..];
            for t in 0..len {
                let mut v = prev[t] + g;
                if v >= ctx.l {
                    v -= ctx.l;
                }
                rest[t] = v;
            }
        }
        len *= d;
    }
    debug_assert_eq!(len, ctx.n);
}

fn build_rows(ctx: &GroupCtx, gram_l: &[u32]) -> Vec<u32> {
    let mut rows = vec![0u32; ctx.rank * ctx.n];
    let mut scratch = Vec::new();
    for i in 0..ctx.rank {
        let gen_vals: Vec<u32> = (0..ctx.rank).map(|j| gram_l[i * ctx.rank + j]).collect();
        fill_linear(ctx, &gen_vals, &mut scratch);
        rows[i * ctx.n..(i + 1) * ctx.n].copy_from_slice(&scratch);
    }
    rows
}

/// Iterator over every admissible symmetric Gram matrix on the group:
/// entry (i,j) ranges over the multiples of 1/gcd(d_i, d_j), scaled to
/// numerators mod L. Yields row-major rank x rank vectors.
pub struct GramCandidates<'c> {
    ctx: &'c GroupCtx,
    /// Entry slots (i, j, #admissible values), i <= j.
    slots: Vec<(usize, usize, u64)>,
    values: Vec<u64>,
    done: bool,
}

impl<'c> GramCandidates<'c> {
    pub fn new(ctx: &'c GroupCtx) -> GramCandidates<'c> {
        let factors = ctx.group.factors();
        let mut slots = Vec::new();
        for i in 0..ctx.rank {
            for j in i..ctx.rank {
                slots.push((i, j, gcd(factors[i], factors[j])));
            }
        }
        GramCandidates {
            ctx,
            values: vec![0u64; slots.len()],
            slots,
            done: false,
        }
    }
}

impl Iterator for GramCandidates<'_> {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let rank = self.ctx.rank;
        let mut gram_l = vec![0u32; rank * rank];
        for (t, &(i, j, m)) in self.slots.iter().enumerate() {
            let v = (self.values[t] * (self.ctx.l as u64 / m)) as u32;
            gram_l[i * rank + j] = v;
            gram_l[j * rank + i] = v;
        }
        // Odometer advance.
        let mut t = self.slots.len();
        loop {
            if t == 0 {
                self.done = true;
                break;
            }
            t -= 1;
            self.values[t] += 1;
            if self.values[t] < self.slots[t].2 {
                break;
            }
            self.values[t] = 0;
        }
        Some(gram_l)
    }
}

/// Streams every admissible symmetric Gram matrix on the group.
/// Degenerate forms are skipped unless `include_degenerate` is set.
pub fn visit_grams(ctx: &GroupCtx, include_degenerate: bool, mut f: impl FnMut(&DenseForm)) {
    for gram_l in GramCandidates::new(ctx) {
        let form = DenseForm::new(ctx, gram_l);
        if include_degenerate || form.is_nondegenerate(ctx) {
            f(&form);
        }
    }
}

/// Number of admissible symmetric Gram matrices on the group.
pub fn gram_candidate_count(group: &FiniteAbelianGroup) -> u128 {
    let factors = group.factors();
    let mut count: u128 = 1;
    for i in 0..factors.len() {
        for j in i..factors.len() {
            count = count.saturating_mul(gcd(factors[i], factors[j]) as u128);
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx_of(factors: &[u64]) -> GroupCtx {
        GroupCtx::new(&FiniteAbelianGroup::new(factors).unwrap())
    }

    #[test]
    fn add_table_matches_coords() {
        let ctx = ctx_of(&[2, 3]);
        let g = &ctx.group;
        for a in 0..ctx.n {
            for b in 0..ctx.n {
                let ea = g.element_at(a);
                let eb = g.element_at(b);
                assert_eq!(ctx.add_idx(a, b), g.index_of(&g.add(&ea, &eb)));
            }
        }
    }

    #[test]
    fn linear_fill_matches_direct() {
        let ctx = ctx_of(&[4, 6]);
        let gen_vals = [3u32, 2];
        let mut out = Vec::new();
        fill_linear(&ctx, &gen_vals, &mut out);
        for a in 0..ctx.n {
            let c = ctx.coords_of(a);
            let direct = (c[0] * gen_vals[0] + c[1] * gen_vals[1]) % ctx.l;
            assert_eq!(out[a], direct);
        }
    }

    #[test]
    fn candidate_counts() {
        let g = FiniteAbelianGroup::new(&[3]).unwrap();
        assert_eq!(gram_candidate_count(&g), 3);
        let g = FiniteAbelianGroup::new(&[2, 4]).unwrap();
        assert_eq!(gram_candidate_count(&g), 16);
        let g = FiniteAbelianGroup::new(&[2, 2, 2, 2, 2, 2]).unwrap();
        assert_eq!(gram_candidate_count(&g), 1 << 21);
    }

    #[test]
    fn nondegenerate_count_z3() {
        let ctx = ctx_of(&[3]);
        let mut total = 0;
        let mut nondeg = 0;
        visit_grams(&ctx, true, |f| {
            total += 1;
            if f.is_nondegenerate(&ctx) {
                nondeg += 1;
            }
        });
        assert_eq!(total, 3);
        assert_eq!(nondeg, 2);
    }

    #[test]
    fn mu0_z3_spec_values() {
        // Z/3 with chi(1,1) = 1/3: mu0 = (0, 2/3, 2/3), i.e. (0, 4, 4) mod 6.
        let ctx = ctx_of(&[3]);
        let gram = vec![ctx.l / 3];
        let form = DenseForm::new(&ctx, gram);
        let mu = form.homogeneous_mu0(&ctx).unwrap();
        assert_eq!(mu, vec![0, 4, 4]);
    }

    #[test]
    fn mu0_z2_even_branch() {
        // Z/2 with chi(1,1) = 1/2: mu0 = (0, 1/4) = (0, 1) mod 4.
        let ctx = ctx_of(&[2]);
        let gram = vec![ctx.l / 2];
        let form = DenseForm::new(&ctx, gram);
        let mu = form.homogeneous_mu0(&ctx).unwrap();
        assert_eq!(mu, vec![0, 1]);
    }
}
