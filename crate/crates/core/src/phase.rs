//! Elements of Q/Z written additively.
//!
//! A `PhaseQZ` with value q stands for the circle element e^{2*pi*i*q}.
//! Multiplying roots of unity becomes adding phases mod 1, so exact
//! equality of circle values is exact equality of reduced fractions.

use crate::arith::gcd;
use std::fmt;

/// A reduced fraction num/den in [0, 1), i.e. an element of Q/Z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhaseQZ {
    num: u64,
    den: u64,
}

impl PhaseQZ {
    pub const ZERO: PhaseQZ = PhaseQZ { num: 0, den: 1 };
    /// The phase 1/2, i.e. the circle value -1.
    pub const HALF: PhaseQZ = PhaseQZ { num: 1, den: 2 };

    /// Builds num/den reduced mod 1. `den` must be nonzero; `num` may be
    /// any integer (negative values wrap).
    pub fn new(num: i64, den: u64) -> PhaseQZ {
        assert!(den != 0, "phase denominator must be nonzero");
        let den_i = den as i64;
        let mut n = num % den_i;
        if n < 0 {
            n += den_i;
        }
        let g = gcd(n as u64, den);
        PhaseQZ {
            num: n as u64 / g,
            den: den / g,
        }
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    /// Reduced denominator; equals the multiplicative order of the
    /// corresponding root of unity.
    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn add(&self, other: &PhaseQZ) -> PhaseQZ {
        let den = self.den / gcd(self.den, other.den) * other.den;
        let n = (self.num as u128 * (den / self.den) as u128
            + other.num as u128 * (den / other.den) as u128)
            % den as u128;
        let g = gcd(n as u64, den);
        PhaseQZ {
            num: n as u64 / g,
            den: den / g,
        }
    }

    pub fn neg(&self) -> PhaseQZ {
        if self.num == 0 {
            *self
        } else {
            PhaseQZ {
                num: self.den - self.num,
                den: self.den,
            }
        }
    }

    pub fn sub(&self, other: &PhaseQZ) -> PhaseQZ {
        self.add(&other.neg())
    }

    /// Integer scaling k*q mod 1 (k may be negative).
    pub fn scale(&self, k: i64) -> PhaseQZ {
        let den = self.den as i128;
        let mut n = (self.num as i128 * k as i128) % den;
        if n < 0 {
            n += den;
        }
        let g = gcd(n as u64, self.den);
        PhaseQZ {
            num: n as u64 / g,
            den: self.den / g,
        }
    }

    /// The two square roots of this phase: q/2 and q/2 + 1/2.
    pub fn square_roots(&self) -> [PhaseQZ; 2] {
        let a = PhaseQZ::new(self.num as i64, 2 * self.den);
        let b = a.add(&PhaseQZ::HALF);
        [a, b]
    }

    /// Doubles the phase (the square of the circle value).
    pub fn double(&self) -> PhaseQZ {
        self.scale(2)
    }

    /// The numerator after rescaling to the given denominator, which must
    /// be a multiple of the reduced denominator.
    pub fn numerator_over(&self, den: u64) -> u64 {
        debug_assert!(den % self.den == 0, "denominator {} not a multiple of {}", den, self.den);
        self.num * (den / self.den)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// The complex circle value e^{2*pi*i*q}.
    pub fn to_complex(&self) -> num_complex::Complex64 {
        let theta = 2.0 * std::f64::consts::PI * self.to_f64();
        num_complex::Complex64::new(theta.cos(), theta.sin())
    }

    /// Parses "a/b" or "a" (integer phases reduce to zero).
    pub fn parse(s: &str) -> Result<PhaseQZ, String> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => {
                let num: i64 = n.trim().parse().map_err(|_| format!("bad phase numerator `{n}`"))?;
                let den: u64 = d.trim().parse().map_err(|_| format!("bad phase denominator `{d}`"))?;
                (num, den)
            }
            None => {
                let num: i64 = s.parse().map_err(|_| format!("bad phase `{s}`"))?;
                (num, 1)
            }
        };
        if den == 0 {
            return Err(format!("zero denominator in `{s}`"));
        }
        Ok(PhaseQZ::new(num, den))
    }
}

impl fmt::Display for PhaseQZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}
