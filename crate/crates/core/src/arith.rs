//! Small-integer number theory helpers shared across the crate.
//!
//! Everything here operates on machine integers; group orders in this
//! crate stay far below 2^32, so u64/i64 with i128 intermediates is
//! plenty of headroom.

/// Greatest common divisor, with the convention gcd(0, n) = n.
pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Least common multiple; lcm(0, n) = 0.
pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Signed gcd helper used by fraction reduction; always returns >= 0.
pub fn gcd_i64(a: i64, b: i64) -> i64 {
    gcd(a.unsigned_abs(), b.unsigned_abs()) as i64
}

/// Modular exponentiation base^exp mod m (m > 1).
pub fn mod_pow(base: u64, exp: u64, m: u64) -> u64 {
    debug_assert!(m > 1);
    let mut result: u128 = 1;
    let mut b: u128 = (base % m) as u128;
    let mut e = exp;
    let m = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    result as u64
}

/// Trial-division primality; adequate for the group orders handled here.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization as (prime, multiplicity) pairs in increasing prime order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut push = |p: u64, e: u32| {
        if e > 0 {
            out.push((p, e));
        }
    };
    let mut e = 0;
    while n % 2 == 0 {
        n /= 2;
        e += 1;
    }
    push(2, e);
    let mut p = 3;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        push(p, e);
        p += 2;
    }
    if n > 1 {
        push(n, 1);
    }
    out
}

/// The p-adic valuation v_p(n) for n > 0.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    debug_assert!(n > 0 && p > 1);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Splits n > 0 as s^2 * m with m squarefree; returns (s, m).
pub fn squarefree_split(n: u64) -> (u64, u64) {
    let mut square = 1u64;
    let mut free = 1u64;
    for (p, e) in factorize(n) {
        square *= p.pow(e / 2);
        if e % 2 == 1 {
            free *= p;
        }
    }
    (square, free)
}

/// Integer base-p logarithm of n, or None if n is not a power of p.
pub fn log_exact(n: u64, p: u64) -> Option<u32> {
    debug_assert!(p > 1);
    if n == 0 {
        return None;
    }
    let mut n = n;
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    (n == 1).then_some(e)
}

/// Deterministic splittable PRNG (splitmix64); used for seeded corpus sampling.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform draw from 0..bound (bound > 0).
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        // Rejection sampling keeps the draw unbiased.
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % bound;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_zero_convention() {
        assert_eq!(gcd(0, 6), 6);
        assert_eq!(gcd(4, 6), 2);
        assert_eq!(gcd(3, 12), 3);
    }

    #[test]
    fn factorize_small() {
        assert_eq!(factorize(12), vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(97), vec![(97, 1)]);
    }

    #[test]
    fn squarefree() {
        assert_eq!(squarefree_split(12), (2, 3));
        assert_eq!(squarefree_split(1), (1, 1));
        assert_eq!(squarefree_split(18), (3, 2));
        assert_eq!(squarefree_split(49), (7, 1));
    }

    #[test]
    fn mod_pow_euler() {
        assert_eq!(mod_pow(2, 6, 7), 1);
        assert_eq!(mod_pow(3, 4, 5), 1);
    }

    #[test]
    fn log_exact_powers() {
        assert_eq!(log_exact(27, 3), Some(3));
        assert_eq!(log_exact(12, 2), None);
        assert_eq!(log_exact(1, 5), Some(0));
    }
}
