//! The Tambara-Yamagami category TY(A, chi, nu): its center's simple
//! object catalog, the twist power sums tau_k, the lens-space invariants
//! |L_k|, and Frobenius-Schur indicators. Structural verification of the
//! category data (pentagon, duality) lives in the `pentagon` submodule.

pub mod pentagon;

use crate::cyclotomic::CyclotomicInt;
use crate::dense::GroupCtx;
use crate::error::Error;
use crate::form::Bicharacter;
use crate::gauss::AlgebraicUnit;
use crate::group::{torsion_order, GroupElement};
use crate::phase::PhaseQZ;
use num_complex::Complex64;
use std::fmt;

/// A reduced rational p/q with q >= 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i64,
    den: u64,
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    pub fn new(num: i64, den: u64) -> Rational {
        assert!(den != 0, "zero denominator");
        let g = crate::arith::gcd(num.unsigned_abs(), den);
        Rational {
            num: num / g as i64,
            den: den / g,
        }
    }

    pub fn from_int(v: i64) -> Rational {
        Rational { num: v, den: 1 }
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn add(&self, other: &Rational) -> Rational {
        let den = (self.den as u128) * (other.den as u128);
        let num = self.num as i128 * other.den as i128 + other.num as i128 * self.den as i128;
        Self::reduce_128(num, den)
    }

    pub fn mul(&self, other: &Rational) -> Rational {
        Self::reduce_128(
            self.num as i128 * other.num as i128,
            self.den as u128 * other.den as u128,
        )
    }

    pub fn neg(&self) -> Rational {
        Rational {
            num: -self.num,
            den: self.den,
        }
    }

    fn reduce_128(num: i128, den: u128) -> Rational {
        let g = gcd_u128(num.unsigned_abs(), den);
        let num = num / g as i128;
        let den = den / g;
        Rational {
            num: i64::try_from(num).expect("rational overflow"),
            den: u64::try_from(den).expect("rational overflow"),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Parses "p/q" or "p".
    pub fn parse(s: &str) -> Result<Rational, Error> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (
                n.trim()
                    .parse()
                    .map_err(|_| Error::InconsistentInput(format!("bad rational `{s}`")))?,
                d.trim()
                    .parse()
                    .map_err(|_| Error::InconsistentInput(format!("bad rational `{s}`")))?,
            ),
            None => (
                s.parse()
                    .map_err(|_| Error::InconsistentInput(format!("bad rational `{s}`")))?,
                1,
            ),
        };
        if d == 0 {
            return Err(Error::InconsistentInput(format!("bad rational `{s}`")));
        }
        Ok(Rational::new(n, d))
    }
}

fn gcd_u128(a: u128, b: u128) -> u128 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// An exact value (a + b sqrt(m)) + i (c + d sqrt(m)) with rational
/// a, b, c, d and squarefree m >= 1; canonical form has b = d = 0 when
/// m = 1, and m = 1 when both radical coefficients vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LensInvariant {
    pub re_rat: Rational,
    pub re_coef: Rational,
    pub im_rat: Rational,
    pub im_coef: Rational,
    pub m: u64,
}

impl LensInvariant {
    pub fn rational(re: Rational) -> LensInvariant {
        LensInvariant {
            re_rat: re,
            re_coef: Rational::ZERO,
            im_rat: Rational::ZERO,
            im_coef: Rational::ZERO,
            m: 1,
        }
    }

    pub const ZERO: LensInvariant = LensInvariant {
        re_rat: Rational::ZERO,
        re_coef: Rational::ZERO,
        im_rat: Rational::ZERO,
        im_coef: Rational::ZERO,
        m: 1,
    };

    /// rat + coef * sqrt(under_root) * root, canonicalized: the square part
    /// of the radicand folds into the coefficient, real eighth roots fold
    /// into the sign, and odd eighth roots split into (1 +- i)/sqrt(2).
    pub fn with_radical(
        rat: Rational,
        coef: Rational,
        under_root: u64,
        root: AlgebraicUnit,
    ) -> Result<LensInvariant, Error> {
        let j = match root {
            AlgebraicUnit::Zero => return Ok(LensInvariant::rational(rat)),
            AlgebraicUnit::EighthRoot(j) => j,
            AlgebraicUnit::Unit(z) => {
                return Err(Error::Internal(format!(
                    "unsnapped unit {z} in a symbolic value"
                )))
            }
        };
        if coef.is_zero() || under_root == 0 {
            return Ok(LensInvariant::rational(rat));
        }
        let (square, mut m) = crate::arith::squarefree_split(under_root);
        let mut coef = coef.mul(&Rational::from_int(square as i64));
        let (mut re_coef, mut im_coef) = (Rational::ZERO, Rational::ZERO);
        if j % 2 == 0 {
            // 1, i, -1, -i: fold into a signed real or imaginary coefficient.
            let signed = if j == 4 || j == 6 { coef.neg() } else { coef };
            if j % 4 == 0 {
                re_coef = signed;
            } else {
                im_coef = signed;
            }
        } else {
            // zeta_8^j = (s_re + i s_im)/sqrt(2).
            let (s_re, s_im) = match j {
                1 => (1, 1),
                3 => (-1, 1),
                5 => (-1, -1),
                _ => (1, -1),
            };
            // sqrt(m)/sqrt(2): either sqrt(m/2) or sqrt(2m)/2.
            if m % 2 == 0 {
                m /= 2;
            } else {
                m *= 2;
                coef = coef.mul(&Rational::new(1, 2));
            }
            re_coef = coef.mul(&Rational::from_int(s_re));
            im_coef = coef.mul(&Rational::from_int(s_im));
        }
        let mut out = LensInvariant {
            re_rat: rat,
            re_coef,
            im_rat: Rational::ZERO,
            im_coef,
            m,
        };
        out.canonicalize();
        Ok(out)
    }

    fn canonicalize(&mut self) {
        if self.m == 1 {
            self.re_rat = self.re_rat.add(&self.re_coef);
            self.im_rat = self.im_rat.add(&self.im_coef);
            self.re_coef = Rational::ZERO;
            self.im_coef = Rational::ZERO;
        }
        if self.re_coef.is_zero() && self.im_coef.is_zero() {
            self.m = 1;
        }
    }

    pub fn scale(&self, r: Rational) -> LensInvariant {
        let mut out = LensInvariant {
            re_rat: self.re_rat.mul(&r),
            re_coef: self.re_coef.mul(&r),
            im_rat: self.im_rat.mul(&r),
            im_coef: self.im_coef.mul(&r),
            m: self.m,
        };
        out.canonicalize();
        out
    }

    pub fn to_complex(&self) -> Complex64 {
        let s = (self.m as f64).sqrt();
        Complex64::new(
            self.re_rat.to_f64() + self.re_coef.to_f64() * s,
            self.im_rat.to_f64() + self.im_coef.to_f64() * s,
        )
    }

    /// JSON wire form {re: [rat, coef], im: [rat, coef], m: int}, rationals
    /// as "p/q" strings.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "re": [self.re_rat.to_string(), self.re_coef.to_string()],
            "im": [self.im_rat.to_string(), self.im_coef.to_string()],
            "m": self.m,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<LensInvariant, Error> {
        let bad = || Error::InconsistentInput(format!("bad lens invariant JSON: {v}"));
        let pair = |key: &str| -> Result<(Rational, Rational), Error> {
            let arr = v.get(key).and_then(|x| x.as_array()).ok_or_else(bad)?;
            if arr.len() != 2 {
                return Err(bad());
            }
            Ok((
                Rational::parse(arr[0].as_str().ok_or_else(bad)?)?,
                Rational::parse(arr[1].as_str().ok_or_else(bad)?)?,
            ))
        };
        let (re_rat, re_coef) = pair("re")?;
        let (im_rat, im_coef) = pair("im")?;
        let m = v.get("m").and_then(|x| x.as_u64()).ok_or_else(bad)?;
        let mut out = LensInvariant {
            re_rat,
            re_coef,
            im_rat,
            im_coef,
            m,
        };
        out.canonicalize();
        Ok(out)
    }
}

impl fmt::Display for LensInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "{}", self.re_rat)?;
        } else {
            write!(f, "{} + {}*sqrt({})", self.re_rat, self.re_coef, self.m)?;
        }
        if !(self.im_rat.is_zero() && self.im_coef.is_zero()) {
            if self.m == 1 {
                write!(f, " + i*{}", self.im_rat)?;
            } else {
                write!(f, " + i*({} + {}*sqrt({}))", self.im_rat, self.im_coef, self.m)?;
            }
        }
        Ok(())
    }
}

/// The data of a Tambara-Yamagami category: a bicharacter and a sign.
#[derive(Debug, Clone)]
pub struct TYData {
    chi: Bicharacter,
    nu: i8,
}

impl TYData {
    pub fn new(chi: Bicharacter, nu: i8) -> Result<TYData, Error> {
        if nu != 1 && nu != -1 {
            return Err(Error::InconsistentInput(format!("nu must be +-1, got {nu}")));
        }
        Ok(TYData { chi, nu })
    }

    pub fn chi(&self) -> &Bicharacter {
        &self.chi
    }

    pub fn nu(&self) -> i8 {
        self.nu
    }

    pub fn n(&self) -> u64 {
        self.chi.group().order()
    }
}

/// A simple object of the center, with exact twist data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CenterSimple {
    /// Invertible object X_(a, eps) with eps^2 = chi(a,a)^{-1}; dim 1,
    /// twist chi(a,a)^{-1}.
    X { a: GroupElement, eps: PhaseQZ },
    /// Y_{a,b} for an unordered pair a != b; dim 2, twist chi(a,b)^{-1}.
    Y { a: GroupElement, b: GroupElement },
    /// Z_(mu, Delta) with mu the translate of the base map by `shift` and
    /// Delta^2 = nu gamma(mu); dim sqrt(n), twist Delta.
    Z { shift: GroupElement, delta: PhaseQZ },
}

impl CenterSimple {
    /// Twist as an exact phase.
    pub fn twist(&self, chi: &Bicharacter) -> PhaseQZ {
        match self {
            CenterSimple::X { eps, .. } => eps.double(),
            CenterSimple::Y { a, b } => chi.evaluate(a, b).neg(),
            CenterSimple::Z { delta, .. } => *delta,
        }
    }

    /// Squared dimension (1, 4, or n).
    pub fn dim_sq(&self, n: u64) -> u64 {
        match self {
            CenterSimple::X { .. } => 1,
            CenterSimple::Y { .. } => 4,
            CenterSimple::Z { .. } => n,
        }
    }
}

/// Exact phases of gamma(mu_c) for every translate c, in lexicographic
/// order of c. Values are snapped to the grid (1/lcm(2 exp, 8))Z; a snap
/// failure is an internal error.
pub fn gamma_phases(chi: &Bicharacter) -> Result<Vec<PhaseQZ>, Error> {
    let ctx = GroupCtx::new(chi.group());
    let dense = chi.form().to_dense(&ctx);
    let mu0 = dense.homogeneous_mu0(&ctx).map_err(Error::Internal)?;
    let grid = crate::arith::lcm(ctx.l as u64, 8);
    let mut out = Vec::with_capacity(ctx.n);
    let mut col = Vec::new();
    let norm = (ctx.n as f64).sqrt();
    for c in 0..ctx.n {
        dense.fill_column(&ctx, c, &mut col);
        let mut sum = Complex64::new(0.0, 0.0);
        for a in 0..ctx.n {
            let mut v = mu0[a] + col[a];
            if v >= ctx.l {
                v -= ctx.l;
            }
            sum += ctx.lut[v as usize];
        }
        let gamma = sum / norm;
        out.push(snap_phase(gamma, grid)?);
    }
    Ok(out)
}

/// Snaps a unit complex number to the nearest exact phase j/grid; the
/// residual must be below 1e-9.
pub fn snap_phase(z: Complex64, grid: u64) -> Result<PhaseQZ, Error> {
    let frac = z.arg() / (2.0 * std::f64::consts::PI);
    let j = (frac * grid as f64).round().rem_euclid(grid as f64) as u64 % grid;
    let phase = PhaseQZ::new(j as i64, grid);
    if (z - phase.to_complex()).norm() > 1e-9 {
        return Err(Error::Internal(format!(
            "phase snap failed: {z} is not on the 1/{grid} grid"
        )));
    }
    Ok(phase)
}

/// The full catalog of simple objects of the center: 2n invertibles X,
/// n(n-1)/2 two-dimensional Y, and 2n objects Z of dimension sqrt(n).
pub fn center_simples(data: &TYData) -> Result<Vec<CenterSimple>, Error> {
    let chi = &data.chi;
    let group = chi.group();
    let mut out = Vec::new();
    for a in group.elements() {
        let twist = chi.evaluate(&a, &a).neg();
        for eps in twist.square_roots() {
            out.push(CenterSimple::X { a: a.clone(), eps });
        }
    }
    let elems: Vec<GroupElement> = group.elements().collect();
    for i in 0..elems.len() {
        for j in (i + 1)..elems.len() {
            out.push(CenterSimple::Y {
                a: elems[i].clone(),
                b: elems[j].clone(),
            });
        }
    }
    let gammas = gamma_phases(chi)?;
    for (c, gamma) in elems.iter().zip(&gammas) {
        let mut nu_gamma = *gamma;
        if data.nu == -1 {
            nu_gamma = nu_gamma.add(&PhaseQZ::HALF);
        }
        for delta in nu_gamma.square_roots() {
            out.push(CenterSimple::Z {
                shift: c.clone(),
                delta,
            });
        }
    }
    Ok(out)
}

/// Sum of squared dimensions over the catalog; checked against 4n^2.
pub fn global_dim_center(data: &TYData) -> Result<u64, Error> {
    let n = data.n();
    let total: u64 = center_simples(data)?
        .iter()
        .map(|s| s.dim_sq(n))
        .sum();
    if total != 4 * n * n {
        return Err(Error::Internal(format!(
            "center dimension {total} differs from 4n^2 = {}",
            4 * n * n
        )));
    }
    Ok(total)
}

/// tau_k = sum_i theta_i^k dim(i)^2 over the center catalog, as an exact
/// cyclotomic integer (conductor 2 lcm(2 exp, 8)).
pub fn tau_k_direct(data: &TYData, k: u64) -> Result<CyclotomicInt, Error> {
    let chi = &data.chi;
    let group = chi.group();
    let n = group.order();
    let conductor = (2 * crate::arith::lcm(2 * group.exponent(), 8)) as u32;
    let mut tau = CyclotomicInt::zero(conductor);
    for simple in center_simples(data)? {
        let twist = simple.twist(chi);
        let dim_sq = simple.dim_sq(n) as i64;
        let j = twist.numerator_over(conductor as u64) * (k % conductor as u64) % conductor as u64;
        tau.add_root(j, dim_sq);
    }
    Ok(tau)
}

/// tau_k in closed form: 2n |A_k| for odd k, and
/// 2n (|A_k| + nu^{k/2} sqrt(|A| |A_{k/2}|) zeta_{k/2}) for even k.
pub fn tau_k_closed(data: &TYData, k: u64) -> Result<LensInvariant, Error> {
    let group = data.chi.group();
    let n = group.order();
    let ak = torsion_order(group, k);
    let rat = Rational::from_int((2 * n * ak) as i64);
    if k % 2 == 1 {
        return Ok(LensInvariant::rational(rat));
    }
    let half = k / 2;
    let zeta = crate::gauss::zeta_via_prin(&data.chi, half)?;
    let sign = if data.nu == -1 && half % 2 == 1 { -1 } else { 1 };
    let coef = Rational::from_int(2 * n as i64 * sign);
    let under_root = n * torsion_order(group, half);
    LensInvariant::with_radical(rat, coef, under_root, zeta)
}

/// The closed-form tau_k as an exact cyclotomic integer over the same
/// conductor as `tau_k_direct`, for exact comparison of the two routes.
pub fn tau_k_closed_cyclotomic(data: &TYData, k: u64) -> Result<CyclotomicInt, Error> {
    let group = data.chi.group();
    let n = group.order();
    let conductor = (2 * crate::arith::lcm(2 * group.exponent(), 8)) as u32;
    let ak = torsion_order(group, k);
    let base = CyclotomicInt::from_integer(conductor, (2 * n * ak) as i64);
    if k % 2 == 1 {
        return Ok(base);
    }
    let half = k / 2;
    let j = match crate::gauss::zeta_via_prin(&data.chi, half)? {
        AlgebraicUnit::Zero => return Ok(base),
        AlgebraicUnit::EighthRoot(j) => j,
        AlgebraicUnit::Unit(z) => {
            return Err(Error::Internal(format!("unsnapped zeta {z} at k/2 = {half}")))
        }
    };
    let (square, m) = crate::arith::squarefree_split(n * torsion_order(group, half));
    let root_m = crate::cyclotomic::sqrt_cyclotomic(m, conductor).map_err(Error::Internal)?;
    let sign: i64 = if data.nu == -1 && half % 2 == 1 { -1 } else { 1 };
    let term = root_m
        .mul(&CyclotomicInt::root(conductor, j as u64 * conductor as u64 / 8))
        .scale(sign * (2 * n * square) as i64);
    Ok(base.add(&term))
}

/// |L_k| by the closed formulas: |A_k| / 2|A| for odd k, and
/// (|A_k| + nu^{k/2} |A|^{1/2} |A_{k/2}|^{1/2} zeta_{k/2}) / 2|A| for even k.
/// Equals tau_k / (2n)^2.
pub fn lens_invariant(data: &TYData, k: u64) -> Result<LensInvariant, Error> {
    let n = data.n();
    Ok(tau_k_closed(data, k)?.scale(Rational::new(1, 4 * n * n)))
}

/// |L_k| for every k in 0..=k_max, sharing one zeta engine across the
/// whole range.
pub fn lens_sequence(data: &TYData, k_max: u64) -> Result<Vec<LensInvariant>, Error> {
    let group = data.chi.group();
    let n = group.order();
    let ctx = GroupCtx::new(group);
    let engine = crate::gauss::ZetaEngine::new(&ctx, &data.chi)?;
    let scale = Rational::new(1, 2 * n);
    let mut out = Vec::with_capacity(k_max as usize + 1);
    for k in 0..=k_max {
        let ak = torsion_order(group, k);
        let rat = Rational::from_int(ak as i64);
        let value = if k % 2 == 1 {
            LensInvariant::rational(rat)
        } else {
            let half = k / 2;
            let zeta = engine.prin(half);
            let sign = if data.nu == -1 && half % 2 == 1 { -1 } else { 1 };
            LensInvariant::with_radical(
                rat,
                Rational::from_int(sign),
                n * torsion_order(group, half),
                zeta,
            )?
        };
        out.push(value.scale(scale));
    }
    Ok(out)
}

/// Frobenius-Schur indicator of the object m: nu^k |A_k|^{1/2} zeta_k(chi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FsIndicator {
    /// nu^k zeta_k: exactly zero or an eighth root.
    pub unit: AlgebraicUnit,
    /// |A_k|; the indicator is unit * sqrt(torsion).
    pub torsion: u64,
}

impl FsIndicator {
    pub fn to_complex(&self) -> Complex64 {
        self.unit.to_complex() * (self.torsion as f64).sqrt()
    }

    pub fn symbolic(&self) -> Result<LensInvariant, Error> {
        LensInvariant::with_radical(Rational::ZERO, Rational::ONE, self.torsion, self.unit)
    }
}

pub fn fs_indicator(data: &TYData, k: u64) -> Result<FsIndicator, Error> {
    let zeta = crate::gauss::zeta_via_prin(&data.chi, k)?;
    let nu_k = if data.nu == -1 && k % 2 == 1 {
        AlgebraicUnit::MINUS_ONE
    } else {
        AlgebraicUnit::ONE
    };
    Ok(FsIndicator {
        unit: nu_k.mul(&zeta),
        torsion: torsion_order(data.chi.group(), k),
    })
}

/// Independent route to the indicator: sum_{mu, Delta} Delta^{2k} / (2 sqrt n)
/// over the center catalog.
pub fn fs_indicator_center_sum(data: &TYData, k: u64) -> Result<Complex64, Error> {
    let n = data.n();
    let mut sum = Complex64::new(0.0, 0.0);
    for simple in center_simples(data)? {
        if let CenterSimple::Z { delta, .. } = simple {
            sum += delta.scale((2 * k) as i64).to_complex();
        }
    }
    Ok(sum / (2.0 * (n as f64).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::SymmetricForm;
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

    fn trivial_ty(nu: i8) -> TYData {
        let chi = Bicharacter::new(SymmetricForm::zero(group(&[1]))).unwrap();
        TYData::new(chi, nu).unwrap()
    }

    fn z3_ty(nu: i8) -> TYData {
        TYData::new(bich(&[3], &[&[(1, 3)]]), nu).unwrap()
    }

    #[test]
    fn census_and_global_dim() {
        let t = trivial_ty(1);
        let simples = center_simples(&t).unwrap();
        assert_eq!(simples.len(), 4);
        assert_eq!(global_dim_center(&t).unwrap(), 4);

        let t = z3_ty(1);
        let simples = center_simples(&t).unwrap();
        assert_eq!(simples.len(), 15);
        assert_eq!(global_dim_center(&t).unwrap(), 36);

        let t = TYData::new(bich(&[4], &[&[(1, 4)]]), -1).unwrap();
        assert_eq!(global_dim_center(&t).unwrap(), 64);
    }

    #[test]
    fn z_twists_square_to_nu_gamma() {
        for nu in [1i8, -1] {
            for t in [
                z3_ty(nu),
                TYData::new(bich(&[4], &[&[(1, 4)]]), nu).unwrap(),
                TYData::new(
                    bich(&[2, 2], &[&[(1, 2), (1, 2)], &[(1, 2), (0, 1)]]),
                    nu,
                )
                .unwrap(),
                TYData::new(bich(&[9], &[&[(2, 9)]]), nu).unwrap(),
            ] {
                let gammas = gamma_phases(t.chi()).unwrap();
                let group = t.chi().group().clone();
                for simple in center_simples(&t).unwrap() {
                    if let CenterSimple::Z { shift, delta } = simple {
                        let mut expect = gammas[group.index_of(&shift)];
                        if nu == -1 {
                            expect = expect.add(&PhaseQZ::HALF);
                        }
                        assert_eq!(delta.double(), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn tau_direct_small_values() {
        // k=1: tau_1 = 2n; k=0: 4n^2; odd k: 2n |A_k|.
        for (t, n) in [(trivial_ty(1), 1u64), (z3_ty(1), 3), (z3_ty(-1), 3)] {
            let tau0 = tau_k_direct(&t, 0).unwrap().to_complex();
            assert!((tau0.re - (4 * n * n) as f64).abs() < 1e-9, "{tau0}");
            assert!(tau0.im.abs() < 1e-9);
            let tau1 = tau_k_direct(&t, 1).unwrap().to_complex();
            assert!((tau1.re - (2 * n) as f64).abs() < 1e-9);
            assert!(tau1.im.abs() < 1e-9);
            let tau3 = tau_k_direct(&t, 3).unwrap().to_complex();
            let a3 = torsion_order(t.chi().group(), 3);
            assert!((tau3.re - (2 * n * a3) as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn tau_closed_matches_direct_numerically() {
        let cases = vec![
            trivial_ty(1),
            trivial_ty(-1),
            z3_ty(1),
            z3_ty(-1),
            TYData::new(bich(&[4], &[&[(1, 4)]]), 1).unwrap(),
            TYData::new(bich(&[2, 2], &[&[(1, 2), (1, 2)], &[(1, 2), (0, 1)]]), -1).unwrap(),
            TYData::new(bich(&[5], &[&[(2, 5)]]), 1).unwrap(),
        ];
        for t in &cases {
            for k in 0..=20 {
                let direct = tau_k_direct(t, k).unwrap().to_complex();
                let closed = tau_k_closed(t, k).unwrap().to_complex();
                assert!(
                    (direct - closed).norm() < 1e-9,
                    "chi={} nu={} k={k}: direct {direct} closed {closed}",
                    t.chi(),
                    t.nu()
                );
            }
        }
    }

    #[test]
    fn tau_closed_spec_values() {
        // Z/3, k=2, nu=+1: 6(1 + sqrt 3).
        let t = z3_ty(1);
        let v = tau_k_closed(&t, 2).unwrap();
        assert_eq!(v.re_rat, Rational::from_int(6));
        assert_eq!(v.re_coef, Rational::from_int(6));
        assert_eq!(v.m, 3);
        // Trivial group, k=2, nu=-1: 0.
        let t = trivial_ty(-1);
        assert_eq!(tau_k_closed(&t, 2).unwrap(), LensInvariant::ZERO);
        // Z/3, odd k=3: 2 * 3 * |A_3| = 18.
        let t = z3_ty(1);
        assert_eq!(
            tau_k_closed(&t, 3).unwrap(),
            LensInvariant::rational(Rational::from_int(18))
        );
    }

    #[test]
    fn lens_sequence_matches_pointwise() {
        for t in [z3_ty(1), z3_ty(-1), TYData::new(bich(&[4], &[&[(1, 4)]]), -1).unwrap()] {
            let seq = lens_sequence(&t, 20).unwrap();
            for (k, v) in seq.iter().enumerate() {
                assert_eq!(*v, lens_invariant(&t, k as u64).unwrap(), "k={k}");
            }
        }
    }

    #[test]
    fn lens_invariant_fixed_points() {
        for t in [trivial_ty(1), trivial_ty(-1), z3_ty(1), z3_ty(-1)] {
            let n = t.n();
            // |L_0| = 1 exactly.
            assert_eq!(
                lens_invariant(&t, 0).unwrap(),
                LensInvariant::rational(Rational::ONE)
            );
            // |L_1| = 1/(2n) exactly.
            assert_eq!(
                lens_invariant(&t, 1).unwrap(),
                LensInvariant::rational(Rational::new(1, 2 * n))
            );
        }
    }

    #[test]
    fn lens_z3_k2_spec_value() {
        // (1 + sqrt 3)/6 for nu = +1.
        let t = z3_ty(1);
        let v = lens_invariant(&t, 2).unwrap();
        assert_eq!(v.re_rat, Rational::new(1, 6));
        assert_eq!(v.re_coef, Rational::new(1, 6));
        assert_eq!(v.m, 3);
        assert!(v.im_rat.is_zero() && v.im_coef.is_zero());
        // Numeric agreement with tau/(2n)^2.
        let tau = tau_k_direct(&t, 2).unwrap().to_complex();
        assert!((v.to_complex() - tau / 36.0).norm() < 1e-12);
    }

    #[test]
    fn lens_trivial_nu_minus_table() {
        // Spec CLI example: values 1, 1/2, 0, 1/2, 1 for k = 0..4.
        let t = trivial_ty(-1);
        let expect = [
            LensInvariant::rational(Rational::ONE),
            LensInvariant::rational(Rational::new(1, 2)),
            LensInvariant::ZERO,
            LensInvariant::rational(Rational::new(1, 2)),
            LensInvariant::rational(Rational::ONE),
        ];
        for (k, e) in expect.iter().enumerate() {
            assert_eq!(lens_invariant(&t, k as u64).unwrap(), *e, "k={k}");
        }
    }

    #[test]
    fn fs_indicator_examples() {
        // Trivial group, k=1: the indicator is nu.
        for nu in [1i8, -1] {
            let t = trivial_ty(nu);
            let fs = fs_indicator(&t, 1).unwrap();
            assert_eq!(fs.torsion, 1);
            let expect = if nu == 1 {
                AlgebraicUnit::ONE
            } else {
                AlgebraicUnit::MINUS_ONE
            };
            assert_eq!(fs.unit, expect);
        }
        // Z/3, nu=+1: k=2 -> i, k=1 -> 1.
        let t = z3_ty(1);
        let fs = fs_indicator(&t, 2).unwrap();
        assert_eq!(fs.unit, AlgebraicUnit::I);
        assert_eq!(fs.torsion, 1);
        let fs = fs_indicator(&t, 1).unwrap();
        assert_eq!(fs.unit, AlgebraicUnit::ONE);
    }

    #[test]
    fn fs_indicator_matches_center_sum() {
        for t in [z3_ty(1), z3_ty(-1), TYData::new(bich(&[4], &[&[(3, 4)]]), 1).unwrap()] {
            for k in 1..=12 {
                let direct = fs_indicator(&t, k).unwrap().to_complex();
                let via_center = fs_indicator_center_sum(&t, k).unwrap();
                assert!(
                    (direct - via_center).norm() < 1e-9,
                    "nu={} k={k}: {direct} vs {via_center}",
                    t.nu()
                );
            }
        }
    }

    #[test]
    fn lens_json_round_trip() {
        let t = z3_ty(1);
        for k in 0..=10 {
            let v = lens_invariant(&t, k).unwrap();
            let j = v.to_json();
            let back = LensInvariant::from_json(&j).unwrap();
            assert_eq!(v, back, "k={k}: {j}");
        }
    }

    #[test]
    fn radical_canonicalization_cases() {
        // Odd eighth root with even radicand: sqrt(2) zeta_8 = 1 + i.
        let v = LensInvariant::with_radical(
            Rational::ZERO,
            Rational::ONE,
            2,
            AlgebraicUnit::EighthRoot(1),
        )
        .unwrap();
        assert_eq!(v.m, 1);
        assert_eq!(v.re_rat, Rational::ONE);
        assert_eq!(v.im_rat, Rational::ONE);
        // Odd radicand: sqrt(3) zeta_8^1 = sqrt(6)/2 (1 + i).
        let v = LensInvariant::with_radical(
            Rational::ZERO,
            Rational::ONE,
            3,
            AlgebraicUnit::EighthRoot(1),
        )
        .unwrap();
        assert_eq!(v.m, 6);
        assert_eq!(v.re_coef, Rational::new(1, 2));
        assert_eq!(v.im_coef, Rational::new(1, 2));
        let z = v.to_complex();
        let expect = Complex64::from_polar((3.0f64).sqrt(), std::f64::consts::PI / 4.0);
        assert!((z - expect).norm() < 1e-12);
        // Square radicand folds completely.
        let v = LensInvariant::with_radical(
            Rational::ONE,
            Rational::ONE,
            9,
            AlgebraicUnit::MINUS_ONE,
        )
        .unwrap();
        assert_eq!(v, LensInvariant::rational(Rational::from_int(-2)));
    }
}
