//! Symmetric S^1-valued pairings on finite abelian groups, their radicals
//! and powers, and quadratic refinements.

use crate::dense::{self, DenseForm, GroupCtx};
use crate::error::Error;
use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::phase::PhaseQZ;
use std::fmt;
use std::sync::Arc;

/// A possibly degenerate symmetric bilinear pairing chi: A x A -> Q/Z,
/// stored as the Gram matrix on the standard generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricForm {
    group: Arc<FiniteAbelianGroup>,
    /// Row-major rank x rank, entry (i,j) = chi(e_i, e_j).
    gram: Vec<PhaseQZ>,
}

impl SymmetricForm {
    /// Validates symmetry and well-definedness: the entry (i,j) must be a
    /// root of unity of order dividing gcd(d_i, d_j).
    pub fn new(
        group: Arc<FiniteAbelianGroup>,
        rows: Vec<Vec<PhaseQZ>>,
    ) -> Result<SymmetricForm, Error> {
        let rank = group.rank();
        if rows.len() != rank || rows.iter().any(|r| r.len() != rank) {
            return Err(Error::InvalidForm(format!(
                "gram matrix must be {rank} x {rank}"
            )));
        }
        let factors = group.factors();
        for i in 0..rank {
            for j in 0..rank {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::InvalidForm(format!(
                        "gram matrix is not symmetric at ({i},{j})"
                    )));
                }
                let m = crate::arith::gcd(factors[i], factors[j]);
                if m % rows[i][j].denominator() != 0 {
                    return Err(Error::InvalidForm(format!(
                        "entry ({i},{j}) = {} is not annihilated by gcd({},{})",
                        rows[i][j], factors[i], factors[j]
                    )));
                }
            }
        }
        let gram = rows.into_iter().flatten().collect();
        Ok(SymmetricForm { group, gram })
    }

    /// The zero pairing.
    pub fn zero(group: Arc<FiniteAbelianGroup>) -> SymmetricForm {
        let rank = group.rank();
        SymmetricForm {
            group,
            gram: vec![PhaseQZ::ZERO; rank * rank],
        }
    }

    pub fn group(&self) -> &Arc<FiniteAbelianGroup> {
        &self.group
    }

    pub fn gram(&self, i: usize, j: usize) -> PhaseQZ {
        self.gram[i * self.group.rank() + j]
    }

    /// chi(a, b) = sum_ij a_i b_j chi(e_i, e_j).
    pub fn evaluate(&self, a: &GroupElement, b: &GroupElement) -> PhaseQZ {
        let rank = self.group.rank();
        let mut acc = PhaseQZ::ZERO;
        for i in 0..rank {
            let ai = a.coords()[i];
            if ai == 0 {
                continue;
            }
            for j in 0..rank {
                let bj = b.coords()[j];
                if bj == 0 {
                    continue;
                }
                acc = acc.add(&self.gram[i * rank + j].scale((ai * bj) as i64));
            }
        }
        acc
    }

    /// The annihilator {a : chi(a, b) = 0 for all b}, checked against the
    /// generators, in lexicographic order.
    pub fn radical(&self) -> Vec<GroupElement> {
        let ctx = GroupCtx::new(&self.group);
        let dense = self.to_dense(&ctx);
        dense
            .radical_indices(&ctx)
            .into_iter()
            .map(|i| self.group.element_at(i as usize))
            .collect()
    }

    pub fn is_nondegenerate(&self) -> bool {
        let ctx = GroupCtx::new(&self.group);
        self.to_dense(&ctx).is_nondegenerate(&ctx)
    }

    /// chi^k: every Gram entry scaled by k (k may be negative).
    pub fn power(&self, k: i64) -> SymmetricForm {
        SymmetricForm {
            group: self.group.clone(),
            gram: self.gram.iter().map(|p| p.scale(k)).collect(),
        }
    }

    /// Block-diagonal sum on the concatenated factor list.
    pub fn orthogonal_sum(&self, other: &SymmetricForm) -> SymmetricForm {
        let mut factors = self.group.factors().to_vec();
        factors.extend_from_slice(other.group.factors());
        let group = FiniteAbelianGroup::new(&factors).expect("factors stay positive");
        let r1 = self.group.rank();
        let r2 = other.group.rank();
        let rank = r1 + r2;
        let mut gram = vec![PhaseQZ::ZERO; rank * rank];
        for i in 0..r1 {
            for j in 0..r1 {
                gram[i * rank + j] = self.gram[i * r1 + j];
            }
        }
        for i in 0..r2 {
            for j in 0..r2 {
                gram[(r1 + i) * rank + (r1 + j)] = other.gram[i * r2 + j];
            }
        }
        SymmetricForm { group, gram }
    }

    /// Pullback along a subgroup embedding: entry (i,j) = chi(f(e_i), f(e_j)).
    /// The embedding must be an injective homomorphism; the order condition
    /// d_i * f(e_i) = 0 is checked.
    pub fn restrict(
        &self,
        subgroup: &Arc<FiniteAbelianGroup>,
        embedding: &[GroupElement],
    ) -> Result<SymmetricForm, Error> {
        if embedding.len() != subgroup.rank() {
            return Err(Error::InvalidForm(
                "embedding must map every subgroup generator".into(),
            ));
        }
        for (i, img) in embedding.iter().enumerate() {
            let d = subgroup.factors()[i];
            if !self.group.scale(d as i64, img).is_zero() {
                return Err(Error::InvalidForm(format!(
                    "embedding image {i} is not annihilated by {d}"
                )));
            }
        }
        let rank = subgroup.rank();
        let mut rows = vec![vec![PhaseQZ::ZERO; rank]; rank];
        for i in 0..rank {
            for j in 0..rank {
                rows[i][j] = self.evaluate(&embedding[i], &embedding[j]);
            }
        }
        SymmetricForm::new(subgroup.clone(), rows)
    }

    /// Scaled Gram numerators over the context modulus L.
    pub fn to_dense(&self, ctx: &GroupCtx) -> DenseForm {
        let rank = self.group.rank();
        let gram_l = (0..rank * rank)
            .map(|t| self.gram[t].numerator_over(ctx.l as u64) as u32)
            .collect();
        DenseForm::new(ctx, gram_l)
    }

    /// Rebuilds the phase-valued Gram matrix from dense numerators.
    pub fn from_dense(ctx: &GroupCtx, form: &DenseForm) -> SymmetricForm {
        let rank = ctx.rank;
        let gram = (0..rank * rank)
            .map(|t| PhaseQZ::new(form.gram_l[t] as i64, ctx.l as u64))
            .collect();
        SymmetricForm {
            group: ctx.group.clone(),
            gram,
        }
    }

    /// Parses `group=3,3; gram=1/3,0;0,2/3` (row-major, `;` between rows).
    pub fn parse_literal(s: &str) -> Result<SymmetricForm, Error> {
        let (left, gram_part) = s
            .split_once("gram=")
            .ok_or_else(|| Error::InvalidForm("missing `gram=` section".into()))?;
        let group_part = left
            .trim()
            .strip_prefix("group=")
            .ok_or_else(|| Error::InvalidForm("missing `group=` section".into()))?
            .trim_end()
            .trim_end_matches(';')
            .trim();
        let group = parse_group_literal(group_part)?;
        let rows = parse_gram_literal(gram_part)?;
        SymmetricForm::new(group, rows)
    }
}

impl fmt::Display for SymmetricForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "group=")?;
        for (i, d) in self.group.factors().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "; gram=")?;
        let rank = self.group.rank();
        for i in 0..rank {
            if i > 0 {
                write!(f, ";")?;
            }
            for j in 0..rank {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.gram[i * rank + j])?;
            }
        }
        Ok(())
    }
}

/// Comma-separated factor list, e.g. `2,12`.
pub fn parse_group_literal(s: &str) -> Result<Arc<FiniteAbelianGroup>, Error> {
    let mut factors = Vec::new();
    for tok in s.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let d: u64 = tok
            .parse()
            .map_err(|_| Error::InvalidGroup(format!("bad cyclic factor `{tok}`")))?;
        factors.push(d);
    }
    FiniteAbelianGroup::new(&factors)
}

fn parse_gram_literal(s: &str) -> Result<Vec<Vec<PhaseQZ>>, Error> {
    let mut rows = Vec::new();
    for row in s.trim().split(';') {
        let mut entries = Vec::new();
        for tok in row.split(',') {
            entries.push(PhaseQZ::parse(tok).map_err(Error::InvalidForm)?);
        }
        rows.push(entries);
    }
    Ok(rows)
}

/// A symmetric form certified nondegenerate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bicharacter(SymmetricForm);

impl Bicharacter {
    pub fn new(form: SymmetricForm) -> Result<Bicharacter, Error> {
        if !form.is_nondegenerate() {
            return Err(Error::DegenerateForm(format!("{form}")));
        }
        Ok(Bicharacter(form))
    }

    /// For callers that already verified nondegeneracy on the dense side.
    pub(crate) fn new_unchecked(form: SymmetricForm) -> Bicharacter {
        Bicharacter(form)
    }

    pub fn form(&self) -> &SymmetricForm {
        &self.0
    }
}

impl std::ops::Deref for Bicharacter {
    type Target = SymmetricForm;
    fn deref(&self) -> &SymmetricForm {
        &self.0
    }
}

impl fmt::Display for Bicharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A quadratic map mu with coboundary chi: mu(a+b) - mu(a) - mu(b) = chi(a,b).
/// Stored as a materialized base table plus a translation element c, so
/// mu(a) = base(a) + chi(a, c).
#[derive(Debug, Clone)]
pub struct QuadraticMap {
    form: SymmetricForm,
    /// Lex-indexed value table of the base map, shared across translates.
    base: Arc<Vec<PhaseQZ>>,
    shift: GroupElement,
}

impl QuadraticMap {
    pub fn form(&self) -> &SymmetricForm {
        &self.form
    }

    pub fn shift(&self) -> &GroupElement {
        &self.shift
    }

    pub fn evaluate(&self, a: &GroupElement) -> PhaseQZ {
        let v = self.base[self.form.group.index_of(a)];
        if self.shift.is_zero() {
            v
        } else {
            v.add(&self.form.evaluate(a, &self.shift))
        }
    }

    /// The full value table in lexicographic element order.
    pub fn values(&self) -> Vec<PhaseQZ> {
        if self.shift.is_zero() {
            return self.base.as_ref().clone();
        }
        self.form
            .group
            .elements()
            .map(|a| self.evaluate(&a))
            .collect()
    }

    /// mu^k: a -> k * mu(a), a quadratic map for chi^k.
    pub fn power(&self, k: i64) -> QuadraticMap {
        QuadraticMap {
            form: self.form.power(k),
            base: Arc::new(self.base.iter().map(|p| p.scale(k)).collect()),
            shift: self.shift.clone(),
        }
    }

    /// Builds a map from an explicit value table, checking the coboundary
    /// property exhaustively.
    pub fn from_table(
        form: SymmetricForm,
        values: Vec<PhaseQZ>,
    ) -> Result<QuadraticMap, Error> {
        if values.len() as u64 != form.group.order() {
            return Err(Error::InvalidForm(
                "value table must cover the whole group".into(),
            ));
        }
        if !is_quadratic(&values, &form) {
            return Err(Error::InvalidForm(
                "table is not a quadratic map for the form".into(),
            ));
        }
        let shift = form.group.zero();
        Ok(QuadraticMap {
            form,
            base: Arc::new(values),
            shift,
        })
    }
}

/// A homogeneous quadratic map mu0 for the form: mu0(n a) = n^2 mu0(a).
///
/// Per-factor construction: q_i(a) = h_i a^2 chi(e_i,e_i) with
/// h_i = (d_i+1)/2 for odd d_i, and q_i(a) = a^2 c_i/(2 d_i) with
/// chi(e_i,e_i) = c_i/d_i for even d_i; cross terms a_i a_j chi(e_i,e_j).
/// Both the coboundary property and homogeneity are re-verified after
/// construction; failure is an internal error.
pub fn homogeneous_base_map(form: &SymmetricForm) -> Result<QuadraticMap, Error> {
    let ctx = GroupCtx::new(&form.group);
    let dense = form.to_dense(&ctx);
    let mu = dense
        .homogeneous_mu0(&ctx)
        .map_err(Error::Internal)?;
    let base: Vec<PhaseQZ> = mu
        .into_iter()
        .map(|v| PhaseQZ::new(v as i64, ctx.l as u64))
        .collect();
    Ok(QuadraticMap {
        form: form.clone(),
        base: Arc::new(base),
        shift: form.group.zero(),
    })
}

/// All |A| quadratic maps for a nondegenerate chi: the translates
/// mu_c(a) = chi(a, c) + mu0(a), one per c in lexicographic order.
/// (Enumeration by translation is complete only in the nondegenerate
/// case, which the `Bicharacter` argument certifies.)
pub fn enumerate_quadratic_maps(chi: &Bicharacter) -> Result<Vec<QuadraticMap>, Error> {
    let mu0 = homogeneous_base_map(chi.form())?;
    Ok(chi
        .group()
        .elements()
        .map(|c| QuadraticMap {
            form: mu0.form.clone(),
            base: mu0.base.clone(),
            shift: c,
        })
        .collect())
}

/// The standard character a -> sum_i a_i c_i / d_i attached to c.
pub fn standard_character(group: &FiniteAbelianGroup, c: &GroupElement) -> Vec<PhaseQZ> {
    group
        .elements()
        .map(|a| {
            let mut acc = PhaseQZ::ZERO;
            for (i, (&ai, &ci)) in a.coords().iter().zip(c.coords()).enumerate() {
                acc = acc.add(&PhaseQZ::new((ai * ci) as i64, group.factors()[i]));
            }
            acc
        })
        .collect()
}

/// All |A| quadratic maps of a possibly degenerate form: the homogeneous
/// base map twisted by every character of A. (Any two quadratic maps for
/// the same form differ by a homomorphism A -> S^1, and the standard
/// pairing realizes every such homomorphism.)
pub fn quadratic_maps_any(form: &SymmetricForm) -> Result<Vec<QuadraticMap>, Error> {
    let mu0 = homogeneous_base_map(form)?;
    let group = form.group().clone();
    Ok(group
        .elements()
        .map(|c| {
            let chr = standard_character(&group, &c);
            let base: Vec<PhaseQZ> = mu0
                .base
                .iter()
                .zip(&chr)
                .map(|(v, t)| v.add(t))
                .collect();
            QuadraticMap {
                form: form.clone(),
                base: Arc::new(base),
                shift: group.zero(),
            }
        })
        .collect())
}

/// Exhaustive coboundary check: mu(a+b) - mu(a) - mu(b) = chi(a,b) for all
/// pairs. `values` is lex-indexed over the whole group.
pub fn is_quadratic(values: &[PhaseQZ], form: &SymmetricForm) -> bool {
    let group = &form.group;
    let n = group.order() as usize;
    if values.len() != n {
        return false;
    }
    let ctx = GroupCtx::new(group);
    let dense = form.to_dense(&ctx);
    let l = ctx.l as u64;
    // Scale the table to mod L; reject values outside (1/L)Z/Z, which can
    // never satisfy the coboundary against Gram entries in (1/L)Z/Z.
    let mut tab = Vec::with_capacity(n);
    for v in values {
        if l % v.denominator() != 0 {
            return false;
        }
        tab.push(v.numerator_over(l) as u32);
    }
    let mut col = Vec::new();
    for b in 0..n {
        dense.fill_column(&ctx, b, &mut col);
        for a in 0..n {
            let lhs = (tab[ctx.add_idx(a, b)] as u64 + 2 * l - tab[a] as u64 - tab[b] as u64)
                % l;
            if lhs as u32 != col[a] {
                return false;
            }
        }
    }
    true
}

/// True iff mu(n a) = n^2 mu(a) for all a and 0 <= n < exponent.
pub fn is_homogeneous(map: &QuadraticMap) -> bool {
    let group = &map.form.group;
    let values = map.values();
    let exp = group.exponent();
    for (ai, a) in group.elements().enumerate() {
        for n in 0..exp {
            let na = group.scale(n as i64, &a);
            let lhs = values[group.index_of(&na)];
            let rhs = values[ai].scale((n * n) as i64);
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Default cap on the number of candidate Gram matrices the exhaustive
/// enumerators will walk.
pub const DEFAULT_GRAM_CANDIDATE_BOUND: u128 = 1 << 22;

/// Streams every nondegenerate symmetric form on the group.
pub fn visit_bicharacters(
    group: &Arc<FiniteAbelianGroup>,
    bound: u128,
    mut f: impl FnMut(&Bicharacter),
) -> Result<(), Error> {
    let count = dense::gram_candidate_count(group);
    if count > bound {
        return Err(Error::BoundExceeded(format!(
            "{count} candidate gram matrices on group {:?} (bound {bound})",
            group.factors()
        )));
    }
    let ctx = GroupCtx::new(group);
    dense::visit_grams(&ctx, false, |dense_form| {
        let form = SymmetricForm::from_dense(&ctx, dense_form);
        f(&Bicharacter::new_unchecked(form));
    });
    Ok(())
}

/// All bicharacters on the group (exhaustive over admissible Gram entries).
pub fn enumerate_bicharacters(
    group: &Arc<FiniteAbelianGroup>,
) -> Result<Vec<Bicharacter>, Error> {
    let mut out = Vec::new();
    visit_bicharacters(group, DEFAULT_GRAM_CANDIDATE_BOUND, |b| out.push(b.clone()))?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(factors: &[u64]) -> Arc<FiniteAbelianGroup> {
        FiniteAbelianGroup::new(factors).unwrap()
    }

    fn form(factors: &[u64], rows: &[&[(i64, u64)]]) -> SymmetricForm {
        let g = group(factors);
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&(n, d)| PhaseQZ::new(n, d)).collect())
            .collect();
        SymmetricForm::new(g, rows).unwrap()
    }

    #[test]
    fn validate_form_examples() {
        // Z/3 with chi(1,1) = 1/3: valid, nondegenerate.
        let f = form(&[3], &[&[(1, 3)]]);
        assert!(f.is_nondegenerate());
        // Z/2 zero form: valid, degenerate with full radical.
        let f = form(&[2], &[&[(0, 1)]]);
        assert!(!f.is_nondegenerate());
        assert_eq!(f.radical().len(), 2);
        // Denominator 4 on a (2,4) cross entry: ill-defined.
        let g = group(&[2, 4]);
        let rows = vec![
            vec![PhaseQZ::ZERO, PhaseQZ::new(1, 4)],
            vec![PhaseQZ::new(1, 4), PhaseQZ::ZERO],
        ];
        assert!(matches!(
            SymmetricForm::new(g.clone(), rows),
            Err(Error::InvalidForm(_))
        ));
        // Asymmetric rejected.
        let rows = vec![
            vec![PhaseQZ::ZERO, PhaseQZ::new(1, 2)],
            vec![PhaseQZ::ZERO, PhaseQZ::ZERO],
        ];
        assert!(SymmetricForm::new(g, rows).is_err());
    }

    #[test]
    fn radical_examples() {
        let f = form(&[3], &[&[(1, 3)]]);
        assert_eq!(f.radical().len(), 1);
        let f = form(&[9], &[&[(3, 9)]]);
        let rad = f.radical();
        let coords: Vec<u64> = rad.iter().map(|e| e.coords()[0]).collect();
        assert_eq!(coords, vec![0, 3, 6]);
    }

    #[test]
    fn power_form_examples() {
        let f = form(&[3], &[&[(1, 3)]]);
        assert_eq!(f.power(3).gram(0, 0), PhaseQZ::ZERO);
        assert_eq!(f.power(-1).gram(0, 0), PhaseQZ::new(2, 3));
        let f9 = form(&[9], &[&[(1, 9)]]);
        let p3 = f9.power(3);
        assert_eq!(p3.gram(0, 0), PhaseQZ::new(1, 3));
        assert_eq!(p3.radical().len(), 3);
    }

    #[test]
    fn radical_of_negative_power_is_torsion() {
        // radical(chi^{-k}) = A_k for nondegenerate chi.
        let f = form(&[9], &[&[(2, 9)]]);
        for k in 0..12i64 {
            let r = f.power(-k).radical().len() as u64;
            assert_eq!(r, crate::group::torsion_order(f.group(), k as u64));
        }
    }

    #[test]
    fn orthogonal_sum_examples() {
        let a = form(&[3], &[&[(1, 3)]]);
        let b = form(&[5], &[&[(1, 5)]]);
        let s = a.orthogonal_sum(&b);
        assert_eq!(s.group().factors(), &[3, 5]);
        assert_eq!(s.gram(0, 1), PhaseQZ::ZERO);
        assert_eq!(s.gram(1, 1), PhaseQZ::new(1, 5));
        // Summing with the trivial form only pads a factor [1].
        let t = SymmetricForm::zero(group(&[1])).orthogonal_sum(&a);
        assert_eq!(t.group().factors(), &[1, 3]);
        assert_eq!(t.gram(1, 1), a.gram(0, 0));
        assert_eq!(t.radical().len(), 1);
    }

    #[test]
    fn is_quadratic_rejects_zero_table_on_nonzero_form() {
        let f = form(&[3], &[&[(1, 3)]]);
        let zeros = vec![PhaseQZ::ZERO; 3];
        assert!(!is_quadratic(&zeros, &f));
        // And accepts it on the zero form.
        let z = SymmetricForm::zero(group(&[3]));
        assert!(is_quadratic(&zeros, &z));
    }

    #[test]
    fn restrict_examples() {
        // Z/6 with chi(1,1)=1/6 restricted to the 3-part generated by 2.
        let f = form(&[6], &[&[(1, 6)]]);
        let sub = group(&[3]);
        let emb = vec![f.group().element(&[2]).unwrap()];
        let r = f.restrict(&sub, &emb).unwrap();
        assert_eq!(r.gram(0, 0), PhaseQZ::new(2, 3));
        // 2-part generated by 3.
        let sub2 = group(&[2]);
        let emb2 = vec![f.group().element(&[3]).unwrap()];
        let r2 = f.restrict(&sub2, &emb2).unwrap();
        assert_eq!(r2.gram(0, 0), PhaseQZ::new(1, 2));
        // Restriction to the trivial subgroup.
        let triv = group(&[1]);
        let r0 = f.restrict(&triv, &[f.group().zero()]).unwrap();
        assert_eq!(r0.gram(0, 0), PhaseQZ::ZERO);
    }

    #[test]
    fn homogeneous_base_map_examples() {
        let f = form(&[3], &[&[(1, 3)]]);
        let mu = homogeneous_base_map(&f).unwrap();
        let vals = mu.values();
        assert_eq!(
            vals,
            vec![PhaseQZ::ZERO, PhaseQZ::new(2, 3), PhaseQZ::new(2, 3)]
        );
        assert!(is_quadratic(&vals, &f));
        assert!(is_homogeneous(&mu));

        let trivial = SymmetricForm::zero(group(&[1]));
        let mu = homogeneous_base_map(&trivial).unwrap();
        assert_eq!(mu.values(), vec![PhaseQZ::ZERO]);

        let f2 = form(&[2], &[&[(1, 2)]]);
        let mu = homogeneous_base_map(&f2).unwrap();
        assert_eq!(mu.values(), vec![PhaseQZ::ZERO, PhaseQZ::new(1, 4)]);
    }

    #[test]
    fn enumerate_quadratic_maps_examples() {
        let triv = Bicharacter::new(SymmetricForm::zero(group(&[1]))).unwrap();
        let maps = enumerate_quadratic_maps(&triv).unwrap();
        assert_eq!(maps.len(), 1);
        assert!(maps[0].values()[0].is_zero());

        let chi = Bicharacter::new(form(&[3], &[&[(1, 3)]])).unwrap();
        let maps = enumerate_quadratic_maps(&chi).unwrap();
        assert_eq!(maps.len(), 3);
        for m in &maps {
            assert!(is_quadratic(&m.values(), chi.form()));
        }

        let chi2 = Bicharacter::new(form(&[2], &[&[(1, 2)]])).unwrap();
        let maps = enumerate_quadratic_maps(&chi2).unwrap();
        let tables: Vec<Vec<PhaseQZ>> = maps.iter().map(|m| m.values()).collect();
        assert_eq!(
            tables,
            vec![
                vec![PhaseQZ::ZERO, PhaseQZ::new(1, 4)],
                vec![PhaseQZ::ZERO, PhaseQZ::new(3, 4)],
            ]
        );
    }

    #[test]
    fn quadratic_map_completeness_bruteforce() {
        // Raw brute force on tiny groups: every table A -> (1/L)Z/Z that
        // satisfies the coboundary equals one of the |A| translates.
        for (factors, rows) in [
            (vec![3u64], vec![vec![(1i64, 3u64)]]),
            (vec![4], vec![vec![(1, 4)]]),
            (vec![2, 2], vec![vec![(1, 2), (1, 2)], vec![(1, 2), (0, 1)]]),
        ] {
            let rows: Vec<&[(i64, u64)]> = rows.iter().map(|r| r.as_slice()).collect();
            let f = form(&factors, &rows);
            let chi = Bicharacter::new(f.clone()).unwrap();
            let maps = enumerate_quadratic_maps(&chi).unwrap();
            let mut tables: Vec<Vec<PhaseQZ>> = maps.iter().map(|m| m.values()).collect();
            for i in 0..tables.len() {
                for j in (i + 1)..tables.len() {
                    assert_ne!(tables[i], tables[j]);
                }
            }
            tables.sort();
            let n = f.group().order() as usize;
            let l = 2 * f.group().exponent();
            let mut found = Vec::new();
            let mut vals = vec![0u64; n];
            'outer: loop {
                let table: Vec<PhaseQZ> =
                    vals.iter().map(|&v| PhaseQZ::new(v as i64, l)).collect();
                if is_quadratic(&table, &f) {
                    found.push(table);
                }
                let mut i = n;
                loop {
                    if i == 0 {
                        break 'outer;
                    }
                    i -= 1;
                    vals[i] += 1;
                    if vals[i] < l {
                        break;
                    }
                    vals[i] = 0;
                }
            }
            found.sort();
            assert_eq!(found, tables, "completeness on {factors:?}");
        }
    }

    #[test]
    fn character_twist_enumeration_matches_translates() {
        // On nondegenerate forms the two complete enumerations agree.
        for (factors, rows) in [
            (vec![8u64], vec![vec![(3i64, 8u64)]]),
            (vec![3, 3], vec![vec![(1, 3), (0, 1)], vec![(0, 1), (2, 3)]]),
            (vec![2, 4], vec![vec![(1, 2), (1, 2)], vec![(1, 2), (1, 4)]]),
        ] {
            let rows: Vec<&[(i64, u64)]> = rows.iter().map(|r| r.as_slice()).collect();
            let f = form(&factors, &rows);
            let chi = Bicharacter::new(f.clone()).unwrap();
            let mut a: Vec<Vec<PhaseQZ>> = enumerate_quadratic_maps(&chi)
                .unwrap()
                .iter()
                .map(|m| m.values())
                .collect();
            let mut b: Vec<Vec<PhaseQZ>> = quadratic_maps_any(&f)
                .unwrap()
                .iter()
                .map(|m| m.values())
                .collect();
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
        // And the twist route works for degenerate forms.
        let f = SymmetricForm::zero(group(&[2]));
        let maps = quadratic_maps_any(&f).unwrap();
        let tables: Vec<Vec<PhaseQZ>> = maps.iter().map(|m| m.values()).collect();
        assert_eq!(tables.len(), 2);
        for t in &tables {
            assert!(is_quadratic(t, &f));
        }
    }

    #[test]
    fn homogeneity_examples() {
        let f = form(&[3], &[&[(1, 3)]]);
        let chi = Bicharacter::new(f).unwrap();
        let maps = enumerate_quadratic_maps(&chi).unwrap();
        let homog: Vec<bool> = maps.iter().map(is_homogeneous).collect();
        assert_eq!(homog, vec![true, false, false]);
    }

    #[test]
    fn mu0_has_order_dividing_2n() {
        // 2n * mu0(a) = 0 for n = |A|.
        for (factors, rows) in [
            (vec![4u64], vec![vec![(1i64, 4u64)]]),
            (vec![3], vec![vec![(2, 3)]]),
            (vec![2, 4], vec![vec![(1, 2), (1, 2)], vec![(1, 2), (3, 4)]]),
        ] {
            let rows: Vec<&[(i64, u64)]> = rows.iter().map(|r| r.as_slice()).collect();
            let f = form(&factors, &rows);
            let n = f.group().order();
            let mu = homogeneous_base_map(&f).unwrap();
            for v in mu.values() {
                assert!(v.scale(2 * n as i64).is_zero());
            }
        }
    }

    #[test]
    fn enumerate_bicharacters_examples() {
        let b = enumerate_bicharacters(&group(&[3])).unwrap();
        assert_eq!(b.len(), 2);
        let b = enumerate_bicharacters(&group(&[1])).unwrap();
        assert_eq!(b.len(), 1);
        let b = enumerate_bicharacters(&group(&[2])).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].gram(0, 0), PhaseQZ::new(1, 2));
    }

    #[test]
    fn enumerate_bound_rejected() {
        let g = group(&[2; 8]);
        let err = visit_bicharacters(&g, 1 << 22, |_| {}).unwrap_err();
        assert!(matches!(err, Error::BoundExceeded(_)));
    }

    #[test]
    fn parse_literal_round_trip() {
        let f = SymmetricForm::parse_literal("group=3,3; gram=1/3,0;0,2/3").unwrap();
        assert_eq!(f.group().factors(), &[3, 3]);
        assert_eq!(f.gram(0, 0), PhaseQZ::new(1, 3));
        assert_eq!(f.gram(1, 1), PhaseQZ::new(2, 3));
        let s = f.to_string();
        let f2 = SymmetricForm::parse_literal(&s).unwrap();
        assert_eq!(f, f2);
        assert!(SymmetricForm::parse_literal("group=3; gram=1/4").is_err());
    }
}
