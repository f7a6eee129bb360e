//! Exact arithmetic in Z[zeta_N], used as an independent oracle for
//! unnormalized Gauss sums and for symbolic twist sums.
//!
//! Elements are stored as integer coefficient vectors over the redundant
//! basis 1, zeta, ..., zeta^{N-1}; products are convolutions mod x^N - 1.
//! Equality is decided exactly: a vector represents zero iff the N-th
//! cyclotomic polynomial divides it, which is checked division-free by
//! multiplying with the cofactor (x^N - 1)/Phi_N.

use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// An element of Z[zeta_N] as sum_j coeffs[j] * zeta_N^j.
#[derive(Debug, Clone)]
pub struct CyclotomicInt {
    n: u32,
    coeffs: Vec<i64>,
}

impl CyclotomicInt {
    pub fn zero(n: u32) -> CyclotomicInt {
        assert!(n >= 1);
        CyclotomicInt {
            n,
            coeffs: vec![0; n as usize],
        }
    }

    pub fn from_integer(n: u32, value: i64) -> CyclotomicInt {
        let mut z = CyclotomicInt::zero(n);
        z.coeffs[0] = value;
        z
    }

    pub fn one(n: u32) -> CyclotomicInt {
        CyclotomicInt::from_integer(n, 1)
    }

    /// zeta_N^j (j taken mod N).
    pub fn root(n: u32, j: u64) -> CyclotomicInt {
        let mut z = CyclotomicInt::zero(n);
        z.coeffs[(j % n as u64) as usize] = 1;
        z
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn add_root(&mut self, j: u64, scale: i64) {
        self.coeffs[(j % self.n as u64) as usize] += scale;
    }

    pub fn add(&self, other: &CyclotomicInt) -> CyclotomicInt {
        assert_eq!(self.n, other.n, "conductor mismatch");
        CyclotomicInt {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.checked_add(*b).expect("cyclotomic overflow"))
                .collect(),
        }
    }

    pub fn sub(&self, other: &CyclotomicInt) -> CyclotomicInt {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CyclotomicInt {
        CyclotomicInt {
            n: self.n,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> CyclotomicInt {
        CyclotomicInt {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .map(|a| a.checked_mul(k).expect("cyclotomic overflow"))
                .collect(),
        }
    }

    pub fn mul(&self, other: &CyclotomicInt) -> CyclotomicInt {
        assert_eq!(self.n, other.n, "conductor mismatch");
        let n = self.n as usize;
        let mut acc = vec![0i128; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let a = a as i128;
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let mut k = i + j;
                if k >= n {
                    k -= n;
                }
                acc[k] += a * b as i128;
            }
        }
        CyclotomicInt {
            n: self.n,
            coeffs: acc
                .into_iter()
                .map(|c| i64::try_from(c).expect("cyclotomic overflow"))
                .collect(),
        }
    }

    /// Complex conjugate: zeta^j -> zeta^{N-j}.
    pub fn conj(&self) -> CyclotomicInt {
        let n = self.n as usize;
        let mut coeffs = vec![0i64; n];
        for (j, &c) in self.coeffs.iter().enumerate() {
            coeffs[(n - j) % n] = c;
        }
        CyclotomicInt { n: self.n, coeffs }
    }

    /// |self|^2 = self * conj(self).
    pub fn norm_value(&self) -> CyclotomicInt {
        self.mul(&self.conj())
    }

    /// Exact zero test: true iff Phi_N divides the coefficient polynomial.
    pub fn is_zero(&self) -> bool {
        if self.coeffs.iter().all(|&c| c == 0) {
            return true;
        }
        let psi = cofactor(self.n);
        // self * psi == 0 mod (x^N - 1)  <=>  Phi_N | self, since
        // x^N - 1 = Phi_N * psi is squarefree.
        let n = self.n as usize;
        let mut acc = vec![0i128; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let a = a as i128;
            for (j, &b) in psi.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let mut k = i + j;
                if k >= n {
                    k -= n;
                }
                acc[k] = acc[k].checked_add(a * b as i128).expect("cyclotomic overflow");
            }
        }
        acc.iter().all(|&c| c == 0)
    }

    pub fn to_complex(&self) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / self.n as f64;
                z += Complex64::new(theta.cos(), theta.sin()) * c as f64;
            }
        }
        z
    }

    /// Re-embeds into Z[zeta_M] for N | M.
    pub fn lift(&self, m: u32) -> CyclotomicInt {
        assert!(m % self.n == 0, "conductor {} does not divide {}", self.n, m);
        let stride = (m / self.n) as usize;
        let mut out = CyclotomicInt::zero(m);
        for (j, &c) in self.coeffs.iter().enumerate() {
            out.coeffs[j * stride] = c;
        }
        out
    }
}

impl PartialEq for CyclotomicInt {
    fn eq(&self, other: &Self) -> bool {
        assert_eq!(self.n, other.n, "conductor mismatch");
        self.sub(other).is_zero()
    }
}

impl Eq for CyclotomicInt {}

/// sqrt(m) as an exact element of Z[zeta_N] for squarefree m >= 1; N must
/// be divisible by 8 and by every odd prime factor of m. Uses the
/// quadratic Gauss sum g_p = sum_j zeta_p^{j^2}, which equals sqrt(p) for
/// p = 1 mod 4 and i sqrt(p) for p = 3 mod 4, and sqrt(2) = zeta_8 + zeta_8^7.
pub fn sqrt_cyclotomic(m: u64, n: u32) -> Result<CyclotomicInt, String> {
    if n % 8 != 0 {
        return Err(format!("conductor {n} is not divisible by 8"));
    }
    let mut out = CyclotomicInt::one(n);
    for (p, e) in crate::arith::factorize(m) {
        if e != 1 {
            return Err(format!("{m} is not squarefree"));
        }
        if p == 2 {
            let mut s2 = CyclotomicInt::zero(n);
            s2.add_root(n as u64 / 8, 1);
            s2.add_root(7 * n as u64 / 8, 1);
            out = out.mul(&s2);
            continue;
        }
        if n as u64 % p != 0 {
            return Err(format!("conductor {n} is not divisible by {p}"));
        }
        let step = n as u64 / p;
        let mut gp = CyclotomicInt::zero(n);
        for j in 0..p {
            gp.add_root(j * j % p * step, 1);
        }
        if p % 4 == 3 {
            // sqrt(p) = -i g_p.
            gp = gp.mul(&CyclotomicInt::root(n, 3 * n as u64 / 4));
        }
        out = out.mul(&gp);
    }
    Ok(out)
}

/// Coefficients of the N-th cyclotomic polynomial, low degree first.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i64>> {
    phi_cache(n).0
}

/// Coefficients of (x^N - 1)/Phi_N, low degree first.
fn cofactor(n: u32) -> Arc<Vec<i64>> {
    phi_cache(n).1
}

fn phi_cache(n: u32) -> (Arc<Vec<i64>>, Arc<Vec<i64>>) {
    static CACHE: OnceLock<Mutex<HashMap<u32, (Arc<Vec<i64>>, Arc<Vec<i64>>)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&n) {
        return hit.clone();
    }
    let phi = compute_phi(n);
    let psi = divide_exact(&xn_minus_1(n), &phi);
    let entry = (Arc::new(phi), Arc::new(psi));
    cache.lock().unwrap().insert(n, entry.clone());
    entry
}

fn xn_minus_1(n: u32) -> Vec<i64> {
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    p
}

fn compute_phi(n: u32) -> Vec<i64> {
    if n == 1 {
        return vec![-1, 1]; // x - 1
    }
    let mut poly = xn_minus_1(n);
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            poly = divide_exact(&poly, &phi_d);
        }
    }
    poly
}

/// Exact division of integer polynomials; divisor must be monic and divide
/// the dividend exactly.
fn divide_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(den[dd] == 1, "divisor must be monic");
    assert!(dn >= dd);
    let mut rem: Vec<i128> = num.iter().map(|&c| c as i128).collect();
    let mut quot = vec![0i64; dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let lead = rem[k + dd];
        quot[k] = i64::try_from(lead).expect("quotient overflow");
        if lead == 0 {
            continue;
        }
        for (i, &dc) in den.iter().enumerate() {
            rem[k + i] -= lead * dc as i128;
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "inexact polynomial division");
    quot
}
