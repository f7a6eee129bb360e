//! Mechanical verification of the category axioms for TY(A, chi, nu):
//! the pentagon identity over every ordered quadruple of simple objects,
//! and the zigzag (duality) identities with the stated morphism scalings.
//!
//! Morphisms between iterated tensor products of simples are matrices over
//! fusion-path bases. The fusion rules are multiplicity-free, so a path is
//! determined by its chain of intermediate simples, and every associator
//! is block-scalar in those bases.

use super::TYData;
use crate::dense::GroupCtx;
use crate::error::Error;
use num_complex::Complex64;
use std::collections::HashMap;

/// Residual above which an identity counts as violated.
pub const STRUCT_TOL: f64 = 1e-9;

/// Default cap on |A| for the quadruple sweep.
pub const DEFAULT_PENTAGON_BOUND: u64 = 16;

/// A simple object: a group element (by index) or the non-invertible m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Simple {
    El(u32),
    M,
}

/// Deliberate corruptions used as negative controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Perturbation {
    None,
    /// Add 1/2 to the pairing value at one (a, b) cell (and its mirror),
    /// destroying bilinearity while keeping symmetry.
    FlipPairing { a: usize, b: usize },
    /// Scale the m,m,m associator by this factor.
    ScaleMmm(f64),
    /// Scale the left duality projection m (x) m -> 1 by this factor.
    ScaleLeftProjection(f64),
    /// Scale the right duality inclusion 1 -> m (x) m by this factor
    /// (e.g. -1 drops the sign nu).
    ScaleRightInclusion(f64),
}

/// Outcome of a structural sweep.
#[derive(Debug, Clone)]
pub struct StructuralReport {
    pub checked: usize,
    pub failures: Vec<String>,
    pub max_residual: f64,
}

impl StructuralReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Engine {
    ctx: GroupCtx,
    /// Pairing values over the context modulus, possibly perturbed.
    chi_tab: Vec<u32>,
    nu: f64,
    inv_sqrt_n: f64,
    mmm_scale: f64,
}

impl Engine {
    fn new(data: &TYData, perturbation: Perturbation) -> Engine {
        let ctx = GroupCtx::new(data.chi().group());
        let dense = data.chi().form().to_dense(&ctx);
        let n = ctx.n;
        let mut chi_tab = vec![0u32; n * n];
        let mut col = Vec::new();
        for b in 0..n {
            dense.fill_column(&ctx, b, &mut col);
            for a in 0..n {
                chi_tab[a * n + b] = col[a];
            }
        }
        Engine::from_raw(ctx, chi_tab, data.nu(), perturbation)
    }

    fn from_raw(ctx: GroupCtx, mut chi_tab: Vec<u32>, nu: i8, perturbation: Perturbation) -> Engine {
        let n = ctx.n;
        let mut mmm_scale = 1.0;
        match perturbation {
            Perturbation::FlipPairing { a, b } => {
                let half = ctx.l / 2;
                chi_tab[a * n + b] = (chi_tab[a * n + b] + half) % ctx.l;
                if a != b {
                    chi_tab[b * n + a] = (chi_tab[b * n + a] + half) % ctx.l;
                }
            }
            Perturbation::ScaleMmm(s) => mmm_scale = s,
            _ => {}
        }
        Engine {
            inv_sqrt_n: 1.0 / (n as f64).sqrt(),
            chi_tab,
            nu: nu as f64,
            ctx,
            mmm_scale,
        }
    }

    fn chi(&self, a: u32, b: u32) -> Complex64 {
        self.ctx.lut[self.chi_tab[a as usize * self.ctx.n + b as usize] as usize]
    }

    fn chi_inv(&self, a: u32, b: u32) -> Complex64 {
        let v = self.chi_tab[a as usize * self.ctx.n + b as usize];
        self.ctx.lut[((self.ctx.l - v) % self.ctx.l) as usize]
    }

    fn fusion(&self, x: Simple, y: Simple) -> Vec<Simple> {
        match (x, y) {
            (Simple::El(a), Simple::El(b)) => {
                vec![Simple::El(self.ctx.add_idx(a as usize, b as usize) as u32)]
            }
            (Simple::M, Simple::El(_)) | (Simple::El(_), Simple::M) => vec![Simple::M],
            (Simple::M, Simple::M) => (0..self.ctx.n as u32).map(Simple::El).collect(),
        }
    }

    fn fusion_contains(&self, x: Simple, y: Simple, s: Simple) -> bool {
        match (x, y) {
            (Simple::El(a), Simple::El(b)) => {
                s == Simple::El(self.ctx.add_idx(a as usize, b as usize) as u32)
            }
            (Simple::M, Simple::El(_)) | (Simple::El(_), Simple::M) => s == Simple::M,
            (Simple::M, Simple::M) => matches!(s, Simple::El(_)),
        }
    }

    /// Scalar of phi_{x,y,z} from path (u in x y, tot in u z) to
    /// (v in y z, tot in x v). The caller guarantees both paths are valid
    /// fusion chains with the same total.
    fn f_scalar(&self, x: Simple, y: Simple, z: Simple, u: Simple, v: Simple, tot: Simple) -> Complex64 {
        use Simple::*;
        match (x, y, z) {
            (El(_), El(_), El(_)) | (El(_), El(_), M) | (M, El(_), El(_)) => {
                Complex64::new(1.0, 0.0)
            }
            (El(a), M, El(b)) => {
                let _ = (u, v, tot);
                self.chi(a, b)
            }
            (El(_), M, M) | (M, M, El(_)) => Complex64::new(1.0, 0.0),
            (M, El(a), M) => match tot {
                El(b) => self.chi(a, b),
                M => unreachable!("total of (m a m) is a group element"),
            },
            (M, M, M) => match (u, v) {
                (El(a), El(b)) => self.chi_inv(a, b) * (self.nu * self.inv_sqrt_n * self.mmm_scale),
                _ => unreachable!("paths through (m m m) are labeled by group elements"),
            },
        }
    }

    /// Checks the pentagon for one ordered quadruple; returns the largest
    /// entrywise residual between the two composite associators.
    fn pentagon_residual(&self, w: Simple, x: Simple, y: Simple, z: Simple) -> f64 {
        // Path bases for the five parenthesizations.
        let basis1 = self.basis_left(w, x, y, z); // ((wx)y)z: (u, t, tot)
        let basis2 = self.basis2(w, x, y, z); // (w(xy))z: (v, t, tot)
        let basis3 = self.basis3(w, x, y, z); // w((xy)z): (v, s, tot)
        let basis4 = self.basis4(w, x, y, z); // w(x(yz)): (q, y2, tot)
        let basis5 = self.basis5(w, x, y, z); // (wx)(yz): (u, q, tot)

        let idx2 = index_map(&basis2);
        let idx3 = index_map(&basis3);
        let idx4 = index_map(&basis4);
        let idx5 = index_map(&basis5);

        // M1: ((wx)y)z -> (w(xy))z by phi_{w,x,y} (x) id_z.
        let mut m1 = Matrix::zero(basis2.len(), basis1.len());
        for (s_i, &(u, t, tot)) in basis1.iter().enumerate() {
            for v in self.fusion(x, y) {
                if self.fusion_contains(w, v, t) {
                    let c = self.f_scalar(w, x, y, u, v, t);
                    if let Some(&d_i) = idx2.get(&(v, t, tot)) {
                        m1.add(d_i, s_i, c);
                    }
                }
            }
        }
        // M2: (w(xy))z -> w((xy)z) by phi_{w, xy, z} = sum over v.
        let mut m2 = Matrix::zero(basis3.len(), basis2.len());
        for (s_i, &(v, t, tot)) in basis2.iter().enumerate() {
            for s in self.fusion(v, z) {
                if self.fusion_contains(w, s, tot) {
                    let c = self.f_scalar(w, v, z, t, s, tot);
                    if let Some(&d_i) = idx3.get(&(v, s, tot)) {
                        m2.add(d_i, s_i, c);
                    }
                }
            }
        }
        // M3: w((xy)z) -> w(x(yz)) by id_w (x) phi_{x,y,z}.
        let mut m3 = Matrix::zero(basis4.len(), basis3.len());
        for (s_i, &(v, s, tot)) in basis3.iter().enumerate() {
            for q in self.fusion(y, z) {
                if self.fusion_contains(x, q, s) {
                    let c = self.f_scalar(x, y, z, v, q, s);
                    if let Some(&d_i) = idx4.get(&(q, s, tot)) {
                        m3.add(d_i, s_i, c);
                    }
                }
            }
        }
        // M4: ((wx)y)z -> (wx)(yz) by phi_{wx, y, z} = sum over u.
        let mut m4 = Matrix::zero(basis5.len(), basis1.len());
        for (s_i, &(u, t, tot)) in basis1.iter().enumerate() {
            for q in self.fusion(y, z) {
                if self.fusion_contains(u, q, tot) {
                    let c = self.f_scalar(u, y, z, t, q, tot);
                    if let Some(&d_i) = idx5.get(&(u, q, tot)) {
                        m4.add(d_i, s_i, c);
                    }
                }
            }
        }
        // M5: (wx)(yz) -> w(x(yz)) by phi_{w, x, yz} = sum over q.
        let mut m5 = Matrix::zero(basis4.len(), basis5.len());
        for (s_i, &(u, q, tot)) in basis5.iter().enumerate() {
            for y2 in self.fusion(x, q) {
                if self.fusion_contains(w, y2, tot) {
                    let c = self.f_scalar(w, x, q, u, y2, tot);
                    if let Some(&d_i) = idx4.get(&(q, y2, tot)) {
                        m5.add(d_i, s_i, c);
                    }
                }
            }
        }
        let lhs = m3.mul(&m2.mul(&m1));
        let rhs = m5.mul(&m4);
        lhs.max_diff(&rhs)
    }

    // Basis builders: chains of intermediate simples for each bracketing.
    fn basis_left(&self, w: Simple, x: Simple, y: Simple, z: Simple) -> Vec<(Simple, Simple, Simple)> {
        let mut out = Vec::new();
        for u in self.fusion(w, x) {
            for t in self.fusion(u, y) {
                for tot in self.fusion(t, z) {
                    out.push((u, t, tot));
                }
            }
        }
        out
    }

    fn basis2(&self, w: Simple, x: Simple, y: Simple, z: Simple) -> Vec<(Simple, Simple, Simple)> {
        let mut out = Vec::new();
        for v in self.fusion(x, y) {
            for t in self.fusion(w, v) {
                for tot in self.fusion(t, z) {
                    out.push((v, t, tot));
                }
            }
        }
        out
    }

    fn basis3(&self, w: Simple, x: Simple, y: Simple, z: Simple) -> Vec<(Simple, Simple, Simple)> {
        let mut out = Vec::new();
        for v in self.fusion(x, y) {
            for s in self.fusion(v, z) {
                for tot in self.fusion(w, s) {
                    out.push((v, s, tot));
                }
            }
        }
        out
    }

    fn basis4(&self, w: Simple, x: Simple, y: Simple, z: Simple) -> Vec<(Simple, Simple, Simple)> {
        let mut out = Vec::new();
        for q in self.fusion(y, z) {
            for y2 in self.fusion(x, q) {
                for tot in self.fusion(w, y2) {
                    out.push((q, y2, tot));
                }
            }
        }
        out
    }

    fn basis5(&self, w: Simple, x: Simple, y: Simple, z: Simple) -> Vec<(Simple, Simple, Simple)> {
        let mut out = Vec::new();
        for u in self.fusion(w, x) {
            for q in self.fusion(y, z) {
                for tot in self.fusion(u, q) {
                    out.push((u, q, tot));
                }
            }
        }
        out
    }

}

fn index_map(basis: &[(Simple, Simple, Simple)]) -> HashMap<(Simple, Simple, Simple), usize> {
    basis.iter().enumerate().map(|(i, &p)| (p, i)).collect()
}

struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    fn zero(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    fn add(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] += v;
    }

    fn mul(&self, other: &Matrix) -> Matrix {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        out
    }

    fn max_diff(&self, other: &Matrix) -> f64 {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn simples(n: usize) -> Vec<Simple> {
    let mut out: Vec<Simple> = (0..n as u32).map(Simple::El).collect();
    out.push(Simple::M);
    out
}

/// Checks the pentagon identity for every ordered quadruple of simples.
pub fn verify_pentagon(data: &TYData) -> Result<StructuralReport, Error> {
    verify_pentagon_perturbed(data, Perturbation::None, DEFAULT_PENTAGON_BOUND)
}

pub fn verify_pentagon_perturbed(
    data: &TYData,
    perturbation: Perturbation,
    bound: u64,
) -> Result<StructuralReport, Error> {
    if data.n() > bound {
        return Err(Error::BoundExceeded(format!(
            "pentagon sweep capped at |A| = {bound}, got {}",
            data.n()
        )));
    }
    let engine = Engine::new(data, perturbation);
    Ok(pentagon_sweep(&engine))
}

fn pentagon_sweep(engine: &Engine) -> StructuralReport {
    let objs = simples(engine.ctx.n);
    let mut failures = Vec::new();
    let mut max_residual: f64 = 0.0;
    let mut checked = 0;
    for &w in &objs {
        for &x in &objs {
            for &y in &objs {
                for &z in &objs {
                    let r = engine.pentagon_residual(w, x, y, z);
                    checked += 1;
                    max_residual = max_residual.max(r);
                    if r > STRUCT_TOL {
                        failures.push(format!(
                            "pentagon fails at ({w:?}, {x:?}, {y:?}, {z:?}): residual {r:.3e}"
                        ));
                    }
                }
            }
        }
    }
    StructuralReport {
        checked,
        failures,
        max_residual,
    }
}

/// Checks the zigzag identities for the stated left/right duality
/// morphisms and that left and right dimensions agree on every simple.
pub fn verify_duality(data: &TYData) -> Result<StructuralReport, Error> {
    verify_duality_perturbed(data, Perturbation::None, DEFAULT_PENTAGON_BOUND)
}

pub fn verify_duality_perturbed(
    data: &TYData,
    perturbation: Perturbation,
    bound: u64,
) -> Result<StructuralReport, Error> {
    if data.n() > bound {
        return Err(Error::BoundExceeded(format!(
            "duality sweep capped at |A| = {bound}, got {}",
            data.n()
        )));
    }
    let engine = Engine::new(data, perturbation);
    let n = engine.ctx.n;
    let sqrt_n = (n as f64).sqrt();
    let nu = engine.nu;
    // Morphism scalings, possibly perturbed.
    let mut left_proj = nu * sqrt_n; // ev_m : m (x) m -> 1
    let left_incl = 1.0; // coev_m : 1 -> m (x) m
    let mut right_incl = nu; // coev'_m : 1 -> m (x) m
    let right_proj = sqrt_n; // ev'_m : m (x) m -> 1
    match perturbation {
        Perturbation::ScaleLeftProjection(s) => left_proj *= s,
        Perturbation::ScaleRightInclusion(s) => right_incl *= s,
        _ => {}
    }

    let mut failures = Vec::new();
    let mut max_residual: f64 = 0.0;
    let mut check = |label: &str, value: Complex64, expect: f64| {
        let r = (value - Complex64::new(expect, 0.0)).norm();
        max_residual = max_residual.max(r);
        if r > STRUCT_TOL {
            failures.push(format!("{label}: got {value}, expected {expect}"));
        }
    };

    // Group-like objects: all four composites have coefficient 1 and both
    // dimensions are 1 (their duality morphisms are identities).
    for a in 0..n {
        check(&format!("zigzag left 1 at element {a}"), Complex64::new(1.0, 0.0), 1.0);
        check(&format!("dim left = dim right at element {a}"), Complex64::new(1.0, 0.0), 1.0);
    }

    // The object m. phi = phi_{m,m,m} as an n x n matrix on the path
    // labels, and its honest numerical inverse.
    let mut phi = Matrix::zero(n, n);
    for b in 0..n {
        for a in 0..n {
            phi.add(
                b,
                a,
                engine.chi_inv(a as u32, b as u32) * (nu * engine.inv_sqrt_n * engine.mmm_scale),
            );
        }
    }
    let phi_inv = match invert(&phi) {
        Some(m) => m,
        None => {
            failures.push("phi_{m,m,m} is singular".into());
            return Ok(StructuralReport {
                checked: 2 * n + 6,
                failures,
                max_residual: f64::INFINITY,
            });
        }
    };

    // Left zigzag 1: m = 1 m -> ((m m) m) -> (m (m m)) -> m 1 = m:
    // inject at path u = 0, apply phi, project out v = 0.
    let z = phi.data[0] * left_incl * left_proj;
    check("left zigzag on m", z, 1.0);
    // Left zigzag 2: m = m 1 -> m (m m) -> (m m) m -> 1 m = m, via phi^{-1}.
    let z = phi_inv.data[0] * left_incl * left_proj;
    check("left zigzag (dual) on m", z, 1.0);
    // Right zigzag 1: m = m 1 -> m (m m) -> (m m) m -> 1 m, with right morphisms.
    let z = phi_inv.data[0] * right_incl * right_proj;
    check("right zigzag on m", z, 1.0);
    // Right zigzag 2: m = 1 m -> (m m) m -> m (m m) -> m 1.
    let z = phi.data[0] * right_incl * right_proj;
    check("right zigzag (dual) on m", z, 1.0);
    // Sphericity: left and right dimensions of m agree (both nu sqrt n).
    let dim_left = left_proj * left_incl;
    let dim_right = right_proj * right_incl;
    check(
        "dim left = dim right on m",
        Complex64::new(dim_left - dim_right, 0.0),
        0.0,
    );

    Ok(StructuralReport {
        checked: 2 * n + 6,
        failures,
        max_residual,
    })
}

fn invert(m: &Matrix) -> Option<Matrix> {
    let n = m.rows;
    let mut a: Vec<Complex64> = m.data.clone();
    let mut inv = Matrix::zero(n, n);
    for i in 0..n {
        inv.data[i * n + i] = Complex64::new(1.0, 0.0);
    }
    for col in 0..n {
        // Partial pivot.
        let mut pivot = col;
        for r in col..n {
            if a[r * n + col].norm() > a[pivot * n + col].norm() {
                pivot = r;
            }
        }
        if a[pivot * n + col].norm() < 1e-12 {
            return None;
        }
        if pivot != col {
            for j in 0..n {
                a.swap(pivot * n + j, col * n + j);
                inv.data.swap(pivot * n + j, col * n + j);
            }
        }
        let d = a[col * n + col];
        for j in 0..n {
            a[col * n + j] /= d;
            inv.data[col * n + j] /= d;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r * n + col];
            if f.norm() == 0.0 {
                continue;
            }
            for j in 0..n {
                let v = a[col * n + j];
                let w = inv.data[col * n + j];
                a[r * n + j] -= f * v;
                inv.data[r * n + j] -= f * w;
            }
        }
    }
    Some(inv)
}

/// Pentagon sweep against a raw pairing table (no nondegeneracy or
/// bilinearity assumed); used to drive degenerate negative controls.
pub fn verify_pentagon_raw_table(
    group: &std::sync::Arc<crate::group::FiniteAbelianGroup>,
    chi_tab_over_l: Vec<u32>,
    nu: i8,
) -> StructuralReport {
    let ctx = GroupCtx::new(group);
    assert_eq!(chi_tab_over_l.len(), ctx.n * ctx.n);
    let engine = Engine::from_raw(ctx, chi_tab_over_l, nu, Perturbation::None);
    pentagon_sweep(&engine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::{Bicharacter, SymmetricForm};
    use crate::group::FiniteAbelianGroup;
    use crate::phase::PhaseQZ;
    use std::sync::Arc;

    fn group(factors: &[u64]) -> Arc<FiniteAbelianGroup> {
        FiniteAbelianGroup::new(factors).unwrap()
    }

    fn ty(factors: &[u64], rows: &[&[(i64, u64)]], nu: i8) -> TYData {
        let g = group(factors);
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&(n, d)| PhaseQZ::new(n, d)).collect())
            .collect();
        let chi = Bicharacter::new(SymmetricForm::new(g, rows).unwrap()).unwrap();
        TYData::new(chi, nu).unwrap()
    }

    #[test]
    fn pentagon_passes_z2_both_signs() {
        for nu in [1i8, -1] {
            let t = ty(&[2], &[&[(1, 2)]], nu);
            let report = verify_pentagon(&t).unwrap();
            assert!(report.passed(), "nu={nu}: {:?}", report.failures);
            assert_eq!(report.checked, 81);
            assert!(report.max_residual < 1e-12);
        }
    }

    #[test]
    fn pentagon_passes_z3_and_z2z2() {
        let t = ty(&[3], &[&[(1, 3)]], 1);
        assert!(verify_pentagon(&t).unwrap().passed());
        let t = ty(&[2, 2], &[&[(1, 2), (1, 2)], &[(1, 2), (0, 1)]], -1);
        assert!(verify_pentagon(&t).unwrap().passed());
    }

    #[test]
    fn duality_passes() {
        for nu in [1i8, -1] {
            for t in [
                ty(&[2], &[&[(1, 2)]], nu),
                ty(&[3], &[&[(2, 3)]], nu),
                ty(&[4], &[&[(1, 4)]], nu),
            ] {
                let report = verify_duality(&t).unwrap();
                assert!(report.passed(), "{:?}", report.failures);
            }
        }
    }

    #[test]
    fn negative_controls_fail() {
        let t = ty(&[3], &[&[(1, 3)]], 1);
        // Non-bilinear pairing table.
        let r = verify_pentagon_perturbed(
            &t,
            Perturbation::FlipPairing { a: 1, b: 1 },
            DEFAULT_PENTAGON_BOUND,
        )
        .unwrap();
        assert!(!r.passed());
        // Scaled m,m,m associator.
        let r =
            verify_pentagon_perturbed(&t, Perturbation::ScaleMmm(2.0), DEFAULT_PENTAGON_BOUND)
                .unwrap();
        assert!(!r.passed());
        // Degenerate pairing: zero table on Z/2.
        let g = group(&[2]);
        let r = verify_pentagon_raw_table(&g, vec![0; 4], 1);
        assert!(!r.passed());
        // Scaled left projection breaks the zigzag.
        let r = verify_duality_perturbed(
            &t,
            Perturbation::ScaleLeftProjection(2.0),
            DEFAULT_PENTAGON_BOUND,
        )
        .unwrap();
        assert!(!r.passed());
        // Dropping the nu on the right inclusion breaks sphericity/zigzags.
        let r = verify_duality_perturbed(
            &t,
            Perturbation::ScaleRightInclusion(-1.0),
            DEFAULT_PENTAGON_BOUND,
        )
        .unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn bound_rejected() {
        let rows: Vec<Vec<PhaseQZ>> = (0..1)
            .map(|_| vec![PhaseQZ::new(1, 17)])
            .collect();
        let g = group(&[17]);
        let chi = Bicharacter::new(SymmetricForm::new(g, rows).unwrap()).unwrap();
        let t = TYData::new(chi, 1).unwrap();
        assert!(matches!(
            verify_pentagon(&t),
            Err(Error::BoundExceeded(_))
        ));
    }
}
