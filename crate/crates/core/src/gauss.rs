//! Normalized Gauss sums of quadratic maps and the invariants zeta_k of
//! bicharacters, computed by three independent routes:
//!
//! - `zeta_bruteforce`: full enumeration of the |A| quadratic maps,
//!   summing gamma(mu)^k directly;
//! - `zeta_via_prin`: the factorization zeta_k = gamma(mu0^{-k}) gamma(mu0)^k
//!   through a homogeneous base map, in exact eighth-root arithmetic;
//! - `zeta_closed_form_p`: the odd-prime closed form in terms of the
//!   orthogonal splitting invariants and Legendre symbols.
//!
//! The classical Gauss formulas over Z/p^s and the Legendre symbol also
//! live here.

use crate::arith::{gcd, is_prime, lcm, mod_pow};
use crate::classify;
use crate::cyclotomic::CyclotomicInt;
use crate::dense::{DenseForm, GroupCtx};
use crate::error::Error;
use crate::form::{Bicharacter, QuadraticMap};
use crate::group::torsion_order;
use num_complex::Complex64;

/// Snapping policy: values with modulus below this collapse to zero, and
/// values within this distance of an eighth root snap to it. Valid inputs
/// always produce snapped results; an unsnapped `Unit` signals a bug.
pub const SNAP_TOL: f64 = 1e-6;

/// Exactly zero, an exact eighth root of unity, or an unsnapped unit.
#[derive(Debug, Clone, Copy)]
pub enum AlgebraicUnit {
    Zero,
    /// e^{2 pi i j / 8}.
    EighthRoot(u8),
    /// Modulus ~1 but not within tolerance of an eighth root.
    Unit(Complex64),
}

impl AlgebraicUnit {
    pub const ONE: AlgebraicUnit = AlgebraicUnit::EighthRoot(0);
    pub const I: AlgebraicUnit = AlgebraicUnit::EighthRoot(2);
    pub const MINUS_ONE: AlgebraicUnit = AlgebraicUnit::EighthRoot(4);

    /// Snaps a complex value: zero first, then the nearest eighth root,
    /// otherwise the raw unit is kept and marked unsnapped.
    pub fn snap(z: Complex64) -> AlgebraicUnit {
        if z.norm() < SNAP_TOL {
            return AlgebraicUnit::Zero;
        }
        let j = ((z.arg() / (std::f64::consts::PI / 4.0)).round().rem_euclid(8.0)) as u8 % 8;
        if (z - EIGHTH_ROOTS[j as usize]).norm() < SNAP_TOL {
            AlgebraicUnit::EighthRoot(j)
        } else {
            AlgebraicUnit::Unit(z)
        }
    }

    pub fn is_snapped(&self) -> bool {
        !matches!(self, AlgebraicUnit::Unit(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, AlgebraicUnit::Zero)
    }

    pub fn mul(&self, other: &AlgebraicUnit) -> AlgebraicUnit {
        use AlgebraicUnit::*;
        match (self, other) {
            (Zero, _) | (_, Zero) => Zero,
            (EighthRoot(a), EighthRoot(b)) => EighthRoot((a + b) % 8),
            _ => Unit(self.to_complex() * other.to_complex()),
        }
    }

    /// k-th power; k = 0 yields 1 (only taken of units in this crate).
    pub fn pow(&self, k: u64) -> AlgebraicUnit {
        use AlgebraicUnit::*;
        if k == 0 {
            return AlgebraicUnit::ONE;
        }
        match self {
            Zero => Zero,
            EighthRoot(j) => EighthRoot(((*j as u64 * (k % 8)) % 8) as u8),
            Unit(z) => Unit(Complex64::from_polar(
                z.norm().powi(k.min(i32::MAX as u64) as i32),
                z.arg() * k as f64,
            )),
        }
    }

    pub fn conj(&self) -> AlgebraicUnit {
        use AlgebraicUnit::*;
        match self {
            Zero => Zero,
            EighthRoot(j) => EighthRoot((8 - j) % 8),
            Unit(z) => Unit(z.conj()),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            AlgebraicUnit::Zero => Complex64::new(0.0, 0.0),
            AlgebraicUnit::EighthRoot(j) => eighth_root(*j),
            AlgebraicUnit::Unit(z) => *z,
        }
    }

    /// Wire form: `0` or `zeta8^j`; unsnapped units render their value.
    pub fn label(&self) -> String {
        match self {
            AlgebraicUnit::Zero => "0".into(),
            AlgebraicUnit::EighthRoot(j) => format!("zeta8^{j}"),
            AlgebraicUnit::Unit(z) => format!("unsnapped({},{})", z.re, z.im),
        }
    }
}

/// Structural equality of snapped values; unsnapped units never compare
/// equal (like NaN), so oracle agreement requires snapping.
impl PartialEq for AlgebraicUnit {
    fn eq(&self, other: &Self) -> bool {
        use AlgebraicUnit::*;
        match (self, other) {
            (Zero, Zero) => true,
            (EighthRoot(a), EighthRoot(b)) => a == b,
            _ => false,
        }
    }
}

impl std::fmt::Display for AlgebraicUnit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label())
    }
}

const R: f64 = std::f64::consts::FRAC_1_SQRT_2;
static EIGHTH_ROOTS: [Complex64; 8] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(R, R),
    Complex64::new(0.0, 1.0),
    Complex64::new(-R, R),
    Complex64::new(-1.0, 0.0),
    Complex64::new(-R, -R),
    Complex64::new(0.0, -1.0),
    Complex64::new(R, -R),
];

pub fn eighth_root(j: u8) -> Complex64 {
    EIGHTH_ROOTS[(j % 8) as usize]
}

/// gamma(mu) = |A|^{-1/2} |A_perp|^{-1/2} sum_a mu(a).
///
/// Returns `Zero` iff mu is nonzero somewhere on the radical of its form
/// (an exact test); otherwise the modulus is 1 and the value snaps to an
/// eighth root whenever mu is homogeneous.
pub fn gauss_sum(map: &QuadraticMap) -> AlgebraicUnit {
    let group = map.form().group();
    let ctx = GroupCtx::new(group);
    let dense = map.form().to_dense(&ctx);
    let radical = dense.radical_indices(&ctx);
    let values = map.values();
    if radical
        .iter()
        .any(|&r| !values[r as usize].is_zero())
    {
        return AlgebraicUnit::Zero;
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for v in &values {
        sum += v.to_complex();
    }
    let norm = ((ctx.n as f64) * (radical.len() as f64)).sqrt();
    AlgebraicUnit::snap(sum / norm)
}

/// The unnormalized sum sum_a mu(a) as an exact cyclotomic integer with
/// conductor N = lcm(2 * exponent(A), 8).
pub fn gauss_sum_exact(map: &QuadraticMap) -> CyclotomicInt {
    let group = map.form().group();
    let n = lcm(2 * group.exponent(), 8) as u32;
    let mut sum = CyclotomicInt::zero(n);
    for v in map.values() {
        sum.add_root(v.numerator_over(n as u64), 1);
    }
    sum
}

/// Precomputed per-bicharacter state for evaluating zeta_k at many k.
pub struct ZetaEngine<'c> {
    ctx: &'c GroupCtx,
    dense: DenseForm,
    /// Homogeneous base map over the context modulus.
    mu0: Vec<u32>,
    /// gamma(mu0), always an exact eighth root for valid input.
    gamma0: AlgebraicUnit,
    /// gamma(mu_c) for every translate c (built on demand).
    profile: std::cell::OnceCell<Vec<Complex64>>,
}

impl<'c> ZetaEngine<'c> {
    pub fn new(ctx: &'c GroupCtx, chi: &Bicharacter) -> Result<ZetaEngine<'c>, Error> {
        ZetaEngine::from_dense(ctx, chi.form().to_dense(ctx))
    }

    /// Builds the engine from prebuilt dense tables; the form must be
    /// nondegenerate.
    pub fn from_dense(ctx: &'c GroupCtx, dense: DenseForm) -> Result<ZetaEngine<'c>, Error> {
        let mu0 = dense.homogeneous_mu0(ctx).map_err(Error::Internal)?;
        let mut sum = Complex64::new(0.0, 0.0);
        for &v in &mu0 {
            sum += ctx.lut[v as usize];
        }
        let gamma0 = AlgebraicUnit::snap(sum / (ctx.n as f64).sqrt());
        Ok(ZetaEngine {
            ctx,
            dense,
            mu0,
            gamma0,
            profile: std::cell::OnceCell::new(),
        })
    }

    pub fn gamma0(&self) -> AlgebraicUnit {
        self.gamma0
    }

    pub fn dense_form(&self) -> &DenseForm {
        &self.dense
    }

    /// The Gauss sums of all |A| quadratic maps, by direct summation.
    pub fn gamma_profile(&self) -> &[Complex64] {
        self.profile.get_or_init(|| {
            let ctx = self.ctx;
            let n = ctx.n;
            let norm = (n as f64).sqrt();
            let mut gammas = Vec::with_capacity(n);
            let mut col = Vec::new();
            for c in 0..n {
                self.dense.fill_column(ctx, c, &mut col);
                let mut sum = Complex64::new(0.0, 0.0);
                for a in 0..n {
                    let mut v = self.mu0[a] + col[a];
                    if v >= ctx.l {
                        v -= ctx.l;
                    }
                    sum += ctx.lut[v as usize];
                }
                gammas.push(sum / norm);
            }
            gammas
        })
    }

    /// zeta_k by explicit enumeration of Q_chi.
    pub fn brute(&self, k: u64) -> AlgebraicUnit {
        let n = self.ctx.n as f64;
        let ak = torsion_order(&self.ctx.group, k) as f64;
        let mut sum = Complex64::new(0.0, 0.0);
        let k = u32::try_from(k).expect("k fits in u32");
        for gamma in self.gamma_profile() {
            sum += gamma.powu(k);
        }
        AlgebraicUnit::snap(sum / (n * ak).sqrt())
    }

    /// zeta_k for every k in 0..=k_max, walking the powers incrementally.
    pub fn brute_range(&self, k_max: u64) -> Vec<AlgebraicUnit> {
        let gammas = self.gamma_profile();
        let n = self.ctx.n as f64;
        let mut cur = vec![Complex64::new(1.0, 0.0); gammas.len()];
        let mut out = Vec::with_capacity(k_max as usize + 1);
        for k in 0..=k_max {
            let ak = torsion_order(&self.ctx.group, k) as f64;
            let sum: Complex64 = cur.iter().sum();
            out.push(AlgebraicUnit::snap(sum / (n * ak).sqrt()));
            for (c, g) in cur.iter_mut().zip(gammas) {
                *c *= g;
            }
        }
        out
    }

    /// zeta_k = gamma(mu0^{-k}) * gamma(mu0)^k.
    pub fn prin(&self, k: u64) -> AlgebraicUnit {
        self.gamma_power(k).mul(&self.gamma0.pow(k))
    }

    /// zeta_k by the principal factorization for every k in 0..=k_max,
    /// with the per-k scaling folded into a value lookup table.
    pub fn prin_range(&self, k_max: u64) -> Vec<AlgebraicUnit> {
        self.prin_range_with_radicals(k_max).0
    }

    /// As `prin_range`, also reporting the radical size of chi^{-k} per k
    /// (which must reproduce the k-torsion order |A_k|).
    pub fn prin_range_with_radicals(&self, k_max: u64) -> (Vec<AlgebraicUnit>, Vec<u64>) {
        let ctx = self.ctx;
        let l = ctx.l as u64;
        let n = ctx.n;
        // neg_scaled[v] = (-k v) mod l for the current k.
        let mut neg_scaled = vec![0u32; ctx.l as usize];
        let mut out = Vec::with_capacity(k_max as usize + 1);
        let mut radicals = Vec::with_capacity(k_max as usize + 1);
        for k in 0..=k_max {
            let km = k % l;
            for (v, slot) in neg_scaled.iter_mut().enumerate() {
                *slot = ((l - v as u64 * km % l) % l) as u32;
            }
            // Radical of chi^{-k}: all generator rows scale to zero.
            let mut rad_size = 0u64;
            let mut zero_on_radical = true;
            'elems: for b in 0..n {
                for i in 0..ctx.rank {
                    if neg_scaled[self.dense.rows[i * n + b] as usize] != 0 {
                        continue 'elems;
                    }
                }
                rad_size += 1;
                if neg_scaled[self.mu0[b] as usize] != 0 {
                    zero_on_radical = false;
                }
            }
            radicals.push(rad_size);
            if !zero_on_radical {
                out.push(AlgebraicUnit::Zero);
                continue;
            }
            let mut sum = Complex64::new(0.0, 0.0);
            for &v in &self.mu0 {
                sum += ctx.lut[neg_scaled[v as usize] as usize];
            }
            let gamma_neg = AlgebraicUnit::snap(sum / ((n as f64) * rad_size as f64).sqrt());
            out.push(gamma_neg.mul(&self.gamma0.pow(k)));
        }
        (out, radicals)
    }

    /// gamma(mu0^{-k}): the Gauss sum of a -> -k mu0(a) over the form
    /// chi^{-k}, whose radical is computed honestly from the scaled rows.
    fn gamma_power(&self, k: u64) -> AlgebraicUnit {
        let ctx = self.ctx;
        let l = ctx.l as u64;
        let km = k % l;
        // Radical of chi^{-k}: elements pairing to 0 with every generator
        // under the k-scaled rows.
        let mut rad: Vec<u32> = Vec::new();
        'outer: for b in 0..ctx.n {
            for i in 0..ctx.rank {
                if (self.dense.row(i, ctx)[b] as u64 * km) % l != 0 {
                    continue 'outer;
                }
            }
            rad.push(b as u32);
        }
        for &b in &rad {
            if (self.mu0[b as usize] as u64 * km) % l != 0 {
                return AlgebraicUnit::Zero;
            }
        }
        let mut sum = Complex64::new(0.0, 0.0);
        for &v in &self.mu0 {
            let w = (l - (v as u64 * km) % l) % l;
            sum += ctx.lut[w as usize];
        }
        AlgebraicUnit::snap(sum / ((ctx.n as f64) * rad.len() as f64).sqrt())
    }
}

/// zeta_k(chi) by full enumeration of the quadratic maps.
pub fn zeta_bruteforce(chi: &Bicharacter, k: u64) -> Result<AlgebraicUnit, Error> {
    let ctx = GroupCtx::new(chi.group());
    Ok(ZetaEngine::new(&ctx, chi)?.brute(k))
}

/// zeta_k(chi) through the principal factorization.
pub fn zeta_via_prin(chi: &Bicharacter, k: u64) -> Result<AlgebraicUnit, Error> {
    let ctx = GroupCtx::new(chi.group());
    Ok(ZetaEngine::new(&ctx, chi)?.prin(k))
}

/// The principal factorization evaluated with a caller-chosen homogeneous
/// base map (used to confirm the value does not depend on the choice).
pub fn zeta_via_prin_with(mu: &QuadraticMap, k: u64) -> AlgebraicUnit {
    let gamma = gauss_sum(mu);
    let gamma_neg_k = gauss_sum(&mu.power(-(k as i64)));
    gamma_neg_k.mul(&gamma.pow(k))
}

/// zeta_k(chi) for |A| an odd prime power, via the closed form
/// prod_s beta_{k,s}^{r_s} sigma_s^{alpha_{k,s}}.
pub fn zeta_closed_form_p(chi: &Bicharacter, k: u64) -> Result<AlgebraicUnit, Error> {
    let order = chi.group().order();
    let facs = crate::arith::factorize(order);
    let p = match facs.as_slice() {
        [(p, _)] if *p % 2 == 1 => *p,
        [] => {
            return Err(Error::Unsupported(
                "closed form needs a nontrivial odd prime-power order".into(),
            ))
        }
        _ => {
            return Err(Error::Unsupported(format!(
                "closed form needs an odd prime-power order, got {order}"
            )))
        }
    };
    let split = classify::orthogonal_split_odd_p(chi)?;
    zeta_closed_from_blocks(&split.blocks, p, k)
}

/// The closed form evaluated from an already computed splitting.
pub fn zeta_closed_from_blocks(
    blocks: &[classify::DiagonalBlock],
    p: u64,
    k: u64,
) -> Result<AlgebraicUnit, Error> {
    if k == 0 {
        return Ok(AlgebraicUnit::ONE);
    }
    // Group blocks by level s: rank and Legendre class of the product of
    // the diagonal units.
    let mut levels: std::collections::BTreeMap<u32, (u64, u64)> = std::collections::BTreeMap::new();
    for block in blocks {
        let e = levels.entry(block.s).or_insert((0, 1));
        e.0 += 1;
        e.1 = e.1 * (block.delta % p) % p;
    }
    // Work with exponents of zeta_8; every factor is a fourth root.
    let mut j: u64 = 0;
    let vk = crate::arith::valuation(k, p);
    for (&s, &(r, delta_prod)) in &levels {
        let t = vk.min(s);
        let st = (s - t) as u64;
        let alpha = k * s as u64 + st;
        // epsilon_{p^s}^k / epsilon_{p^{s-t}}
        if p % 4 == 3 && s % 2 == 1 {
            j += 2 * (k % 4) * r;
        }
        if p % 4 == 3 && st % 2 == 1 {
            j += 6 * r; // dividing by i = multiplying by zeta_8^6
        }
        let h = (p.pow(s) + 1) / 2;
        if legendre(h as i64, p)? == -1 && alpha % 2 == 1 {
            j += 4 * r;
        }
        if t < s {
            let kp = k / p.pow(t);
            if legendre(kp as i64, p)? == -1 && st % 2 == 1 {
                j += 4 * r;
            }
        }
        // sigma_s^alpha
        if legendre(delta_prod as i64, p)? == -1 && alpha % 2 == 1 {
            j += 4;
        }
    }
    Ok(AlgebraicUnit::EighthRoot((j % 8) as u8))
}

/// Closed form of the quadratic Gauss sum sum_{j<p^s} e^{2 pi i d j^2 / p^s}:
/// value = p^{half_power/2} * unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalGauss {
    pub p: u64,
    pub s: u32,
    /// p^t = gcd(d, p^s).
    pub t: u32,
    /// The value is p^{half_power / 2} times `unit`.
    pub half_power: u32,
    pub unit: AlgebraicUnit,
}

impl ClassicalGauss {
    pub fn to_complex(&self) -> Complex64 {
        (self.p as f64).powf(self.half_power as f64 / 2.0) * self.unit.to_complex()
    }
}

/// Evaluates the classical Gauss formula for odd p: with gcd(d, p^s) = p^t
/// and d' = d/p^t, the sum equals p^{(s+t)/2} epsilon_{p^{s-t}} (d'/p)^{s-t},
/// where the Legendre factor is 1 when t = s.
pub fn classical_gauss(d: i64, p: u64, s: u32) -> Result<ClassicalGauss, Error> {
    if p % 2 == 0 || !is_prime(p) {
        return Err(Error::Unsupported(format!("p = {p} must be an odd prime")));
    }
    if s == 0 {
        return Err(Error::Unsupported("s must be at least 1".into()));
    }
    let ps = p.pow(s);
    let d_mod = d.rem_euclid(ps as i64) as u64;
    let t = if d_mod == 0 {
        s
    } else {
        crate::arith::valuation(gcd(d_mod, ps), p)
    };
    let unit = if t == s {
        AlgebraicUnit::ONE
    } else {
        let st = s - t;
        let dp = d_mod / p.pow(t);
        let mut j: u8 = 0;
        // epsilon_{p^{s-t}} = i when p^{s-t} = 3 mod 4.
        if p % 4 == 3 && st % 2 == 1 {
            j = (j + 2) % 8;
        }
        if legendre(dp as i64, p)? == -1 && st % 2 == 1 {
            j = (j + 4) % 8;
        }
        AlgebraicUnit::EighthRoot(j)
    };
    Ok(ClassicalGauss {
        p,
        s,
        t,
        half_power: s + t,
        unit,
    })
}

/// Legendre symbol (d/p) for odd prime p via Euler's criterion; rejects p | d.
pub fn legendre(d: i64, p: u64) -> Result<i32, Error> {
    if p % 2 == 0 || !is_prime(p) {
        return Err(Error::Unsupported(format!("p = {p} must be an odd prime")));
    }
    let dm = d.rem_euclid(p as i64) as u64;
    if dm == 0 {
        return Err(Error::InvalidGroup(format!("{p} divides {d}")));
    }
    let e = mod_pow(dm, (p - 1) / 2, p);
    Ok(if e == 1 { 1 } else { -1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::{
        enumerate_quadratic_maps, homogeneous_base_map, is_homogeneous, QuadraticMap,
        SymmetricForm,
    };
    use crate::group::FiniteAbelianGroup;
    use crate::phase::PhaseQZ;
    use std::sync::Arc;

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

    fn bich(factors: &[u64], rows: &[&[(i64, u64)]]) -> Bicharacter {
        Bicharacter::new(form(factors, rows)).unwrap()
    }

    #[test]
    fn gauss_sum_examples() {
        // Trivial group.
        let triv = SymmetricForm::zero(group(&[1]));
        let mu = homogeneous_base_map(&triv).unwrap();
        assert_eq!(gauss_sum(&mu), AlgebraicUnit::ONE);

        // Z/3 homogeneous: gamma = -i.
        let f = form(&[3], &[&[(1, 3)]]);
        let mu = homogeneous_base_map(&f).unwrap();
        assert_eq!(gauss_sum(&mu), AlgebraicUnit::EighthRoot(6));

        // Z/2 with zero form and mu = (0, 1/2): nonzero on the radical.
        let z = SymmetricForm::zero(group(&[2]));
        let mu = QuadraticMap::from_table(z, vec![PhaseQZ::ZERO, PhaseQZ::HALF]).unwrap();
        assert_eq!(gauss_sum(&mu), AlgebraicUnit::Zero);
    }

    #[test]
    fn gauss_sum_exact_examples() {
        let triv = SymmetricForm::zero(group(&[1]));
        let mu = homogeneous_base_map(&triv).unwrap();
        let s = gauss_sum_exact(&mu);
        assert_eq!(s, CyclotomicInt::one(8));

        // Z/3: S = 1 + 2 zeta_3^2 and S^2 = -3 exactly.
        let f = form(&[3], &[&[(1, 3)]]);
        let mu = homogeneous_base_map(&f).unwrap();
        let s = gauss_sum_exact(&mu);
        let n = s.conductor();
        let mut expected = CyclotomicInt::one(n);
        expected.add_root((n as u64) * 2 / 3, 2);
        assert_eq!(s, expected);
        assert_eq!(s.mul(&s), CyclotomicInt::from_integer(n, -3));

        // Z/2, zero form, mu = (0,1/2): sum is exactly 0.
        let z = SymmetricForm::zero(group(&[2]));
        let mu = QuadraticMap::from_table(z, vec![PhaseQZ::ZERO, PhaseQZ::HALF]).unwrap();
        assert!(gauss_sum_exact(&mu).is_zero());
    }

    #[test]
    fn exact_sum_consistent_with_normalized_gauss_sum() {
        for (factors, rows) in [
            (vec![3u64], vec![vec![(1i64, 3u64)]]),
            (vec![4], vec![vec![(1, 4)]]),
            (vec![2, 2], vec![vec![(1, 2), (1, 2)], vec![(1, 2), (0, 1)]]),
            (vec![9], vec![vec![(3, 9)]]), // degenerate
        ] {
            let rows: Vec<&[(i64, u64)]> = rows.iter().map(|r| r.as_slice()).collect();
            let f = form(&factors, &rows);
            let n = f.group().order() as f64;
            let rad = f.radical().len() as f64;
            for mu in crate::form::quadratic_maps_any(&f).unwrap() {
                let exact = gauss_sum_exact(&mu).to_complex() / (n * rad).sqrt();
                let snapped = gauss_sum(&mu).to_complex();
                assert!((exact - snapped).norm() < 1e-9, "{f}");
            }
        }
    }

    #[test]
    fn zeta_fixed_points() {
        for chi in [
            bich(&[3], &[&[(1, 3)]]),
            bich(&[4], &[&[(1, 4)]]),
            bich(&[5], &[&[(2, 5)]]),
            bich(&[2, 2], &[&[(1, 2), (1, 2)], &[(1, 2), (0, 1)]]),
        ] {
            let n = chi.group().order();
            assert_eq!(zeta_bruteforce(&chi, 0).unwrap(), AlgebraicUnit::ONE);
            assert_eq!(zeta_bruteforce(&chi, 1).unwrap(), AlgebraicUnit::ONE);
            assert_eq!(zeta_via_prin(&chi, 1).unwrap(), AlgebraicUnit::ONE);
            assert_eq!(zeta_via_prin(&chi, 8 * n).unwrap(), AlgebraicUnit::ONE);
            assert_eq!(zeta_bruteforce(&chi, 8 * n).unwrap(), AlgebraicUnit::ONE);
        }
    }

    #[test]
    fn zeta_z3_k2_is_i() {
        let chi = bich(&[3], &[&[(1, 3)]]);
        assert_eq!(zeta_bruteforce(&chi, 2).unwrap(), AlgebraicUnit::I);
        assert_eq!(zeta_via_prin(&chi, 2).unwrap(), AlgebraicUnit::I);
        assert_eq!(zeta_closed_form_p(&chi, 2).unwrap(), AlgebraicUnit::I);
    }

    #[test]
    fn zeta_triple_agreement_small() {
        let cases: Vec<Bicharacter> = vec![
            bich(&[3], &[&[(1, 3)]]),
            bich(&[3], &[&[(2, 3)]]),
            bich(&[5], &[&[(1, 5)]]),
            bich(&[7], &[&[(3, 7)]]),
            bich(&[9], &[&[(1, 9)]]),
            bich(&[9], &[&[(2, 9)]]),
            bich(&[3, 3], &[&[(1, 3), (0, 1)], &[(0, 1), (2, 3)]]),
            bich(&[3, 9], &[&[(2, 3), (0, 1)], &[(0, 1), (4, 9)]]),
        ];
        for chi in &cases {
            let ctx = GroupCtx::new(chi.group());
            let engine = ZetaEngine::new(&ctx, chi).unwrap();
            for k in 0..=24 {
                let b = engine.brute(k);
                let p = engine.prin(k);
                let c = zeta_closed_form_p(chi, k).unwrap();
                assert!(b.is_snapped(), "brute unsnapped at {chi} k={k}");
                assert_eq!(b, p, "brute vs prin at {chi} k={k}");
                assert_eq!(b, c, "brute vs closed at {chi} k={k}");
            }
        }
    }

    #[test]
    fn zeta_closed_rejects_non_odd_prime_power() {
        let chi = bich(&[2], &[&[(1, 2)]]);
        assert!(zeta_closed_form_p(&chi, 2).is_err());
        let chi = bich(&[6], &[&[(1, 6)]]);
        assert!(zeta_closed_form_p(&chi, 2).is_err());
    }

    #[test]
    fn zeta_independent_of_homogeneous_base() {
        // Every homogeneous element of Q_chi gives the same prin value.
        for chi in [
            bich(&[4], &[&[(1, 4)]]),
            bich(&[2, 2], &[&[(1, 2), (1, 2)], &[(1, 2), (0, 1)]]),
            bich(&[3], &[&[(1, 3)]]),
            bich(&[8], &[&[(3, 8)]]),
        ] {
            let maps = enumerate_quadratic_maps(&chi).unwrap();
            let homogeneous: Vec<&QuadraticMap> =
                maps.iter().filter(|m| is_homogeneous(m)).collect();
            assert!(!homogeneous.is_empty());
            for k in 0..=10 {
                let reference = zeta_via_prin(&chi, k).unwrap();
                for mu in &homogeneous {
                    assert_eq!(zeta_via_prin_with(mu, k), reference, "{chi} k={k}");
                }
            }
        }
    }

    #[test]
    fn zeta_multiplicative_over_orthogonal_sum() {
        let pairs = [
            (bich(&[3], &[&[(1, 3)]]), bich(&[5], &[&[(2, 5)]])),
            (bich(&[4], &[&[(3, 4)]]), bich(&[9], &[&[(2, 9)]])),
            (
                bich(&[2, 2], &[&[(1, 2), (1, 2)], &[(1, 2), (0, 1)]]),
                bich(&[3], &[&[(2, 3)]]),
            ),
            (bich(&[8], &[&[(3, 8)]]), bich(&[8], &[&[(1, 8)]])),
        ];
        for (a, b) in &pairs {
            let sum = Bicharacter::new(a.form().orthogonal_sum(b.form())).unwrap();
            for k in 0..=20 {
                let lhs = zeta_bruteforce(&sum, k).unwrap();
                let rhs = zeta_bruteforce(a, k)
                    .unwrap()
                    .mul(&zeta_bruteforce(b, k).unwrap());
                assert_eq!(lhs, rhs, "{a} (+) {b} at k={k}");
            }
        }
    }

    #[test]
    fn classical_gauss_examples() {
        // d=1, p=3, s=1: sqrt(3) * i.
        let g = classical_gauss(1, 3, 1).unwrap();
        assert_eq!(g.half_power, 1);
        assert_eq!(g.unit, AlgebraicUnit::I);
        // d=2: sqrt(3) * i * (2/3) = -sqrt(3) i.
        let g = classical_gauss(2, 3, 1).unwrap();
        assert_eq!(g.unit, AlgebraicUnit::EighthRoot(6));
        // d=3, s=1: t=s, value 3.
        let g = classical_gauss(3, 3, 1).unwrap();
        assert_eq!(g.half_power, 2);
        assert_eq!(g.unit, AlgebraicUnit::ONE);
    }

    #[test]
    fn classical_gauss_matches_direct_sum() {
        for p in [3u64, 5, 7] {
            for s in 1..=3u32 {
                let ps = p.pow(s);
                for d in 0..ps {
                    let closed = classical_gauss(d as i64, p, s).unwrap();
                    let mut direct = Complex64::new(0.0, 0.0);
                    for j in 0..ps {
                        let theta = 2.0 * std::f64::consts::PI * ((d as u128 * (j as u128 * j as u128) % ps as u128) as f64)
                            / ps as f64;
                        direct += Complex64::new(theta.cos(), theta.sin());
                    }
                    assert!(
                        (closed.to_complex() - direct).norm() < 1e-6 * ps as f64,
                        "p={p} s={s} d={d}: closed {} direct {}",
                        closed.to_complex(),
                        direct
                    );
                }
            }
        }
    }

    #[test]
    fn legendre_examples() {
        for p in [3u64, 5, 7, 11, 13] {
            assert_eq!(legendre(1, p).unwrap(), 1);
        }
        assert_eq!(legendre(2, 3).unwrap(), -1);
        assert_eq!(legendre(4, 7).unwrap(), 1);
        assert!(legendre(6, 3).is_err());
        assert!(legendre(1, 4).is_err());
    }
}
