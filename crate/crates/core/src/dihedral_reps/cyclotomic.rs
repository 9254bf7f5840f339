//! Exact arithmetic in ℚ(ζ_M), M = pⁿ, restricted to the integers ℤ[ζ_M].
//!
//! Elements are kept in the power basis 1, ζ, …, ζ^{φ(M)−1}, reduced modulo
//! Φ_M(x) = Σ_{i<p} x^{i·p^{n−1}}. Products are formed in ℤ[x]/(x^M − 1)
//! first and then reduced, which is valid because Φ_M divides x^M − 1.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    p: u64,
    n: u32,
    coeffs: Vec<i64>,
}

fn order(p: u64, n: u32) -> usize {
    p.pow(n) as usize
}

fn phi(p: u64, n: u32) -> usize {
    if n == 0 {
        1
    } else {
        (p.pow(n) - p.pow(n - 1)) as usize
    }
}

impl Cyclotomic {
    /// Reduces a vector indexed by exponents mod M into the power basis.
    fn from_cyclic(p: u64, n: u32, mut full: Vec<i64>) -> Self {
        let m = order(p, n);
        debug_assert_eq!(full.len(), m);
        let d = phi(p, n);
        if n > 0 {
            let q = m / p as usize;
            for k in (d..m).rev() {
                let c = full[k];
                if c == 0 {
                    continue;
                }
                full[k] = 0;
                let base = k - (p as usize - 1) * q;
                for i in 0..(p as usize - 1) {
                    full[base + i * q] -= c;
                }
            }
        }
        full.truncate(d);
        Cyclotomic { p, n, coeffs: full }
    }

    pub fn zero(p: u64, n: u32) -> Self {
        Cyclotomic { p, n, coeffs: vec![0; phi(p, n)] }
    }

    pub fn from_int(p: u64, n: u32, v: i64) -> Self {
        let mut z = Self::zero(p, n);
        z.coeffs[0] = v;
        z
    }

    /// ζ_M^k for any integer k.
    pub fn zeta_pow(p: u64, n: u32, k: i64) -> Self {
        let m = order(p, n);
        let mut full = vec![0; m];
        full[k.rem_euclid(m as i64) as usize] = 1;
        Self::from_cyclic(p, n, full)
    }

    /// ζ^j + ζ^{−j}.
    pub fn trace_pair(p: u64, n: u32, j: i64) -> Self {
        Self::zeta_pow(p, n, j) + Self::zeta_pow(p, n, -j)
    }

    pub fn level(&self) -> (u64, u32) {
        (self.p, self.n)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The rational integer this equals, if it is one.
    pub fn as_integer(&self) -> Option<i64> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    /// Complex conjugation ζ ↦ ζ⁻¹.
    pub fn conj(&self) -> Self {
        let m = order(self.p, self.n);
        let mut full = vec![0; m];
        for (k, &c) in self.coeffs.iter().enumerate() {
            full[(m - k) % m] += c;
        }
        Self::from_cyclic(self.p, self.n, full)
    }

    /// Galois action ζ ↦ ζ^a, for a coprime to p.
    pub fn galois(&self, a: i64) -> Self {
        let m = order(self.p, self.n) as i64;
        let mut full = vec![0; m as usize];
        for (k, &c) in self.coeffs.iter().enumerate() {
            full[(k as i64 * a).rem_euclid(m) as usize] += c;
        }
        Self::from_cyclic(self.p, self.n, full)
    }

    pub fn scale(&self, k: i64) -> Self {
        Cyclotomic { p: self.p, n: self.n, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Division by a rational integer; `None` unless every coordinate is divisible.
    pub fn div_exact(&self, d: i64) -> Option<Self> {
        if d == 0 || self.coeffs.iter().any(|c| c % d != 0) {
            return None;
        }
        Some(Cyclotomic { p: self.p, n: self.n, coeffs: self.coeffs.iter().map(|c| c / d).collect() })
    }

    /// Re-embeds into ℚ(ζ_{p^N}) for N ≥ n via ζ_{pⁿ} = ζ_{p^N}^{p^{N−n}}.
    pub fn lift_to(&self, big_n: u32) -> Self {
        assert!(big_n >= self.n);
        let stride = self.p.pow(big_n - self.n) as usize;
        let mut full = vec![0; order(self.p, big_n)];
        for (k, &c) in self.coeffs.iter().enumerate() {
            full[k * stride] += c;
        }
        Self::from_cyclic(self.p, big_n, full)
    }

    fn check(&self, other: &Self) {
        assert_eq!((self.p, self.n), (other.p, other.n), "cyclotomic level mismatch");
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(mut self, rhs: Cyclotomic) -> Cyclotomic {
        self.check(&rhs);
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
        self
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.clone() + rhs.clone()
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        self + (-rhs)
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(mut self) -> Cyclotomic {
        for a in self.coeffs.iter_mut() {
            *a = -*a;
        }
        self
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.check(rhs);
        let m = order(self.p, self.n);
        let mut full = vec![0i64; m];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                full[(i + j) % m] += a * b;
            }
        }
        Cyclotomic::from_cyclic(self.p, self.n, full)
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.as_integer() {
            return write!(f, "{v}");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            let term = match (k, mag) {
                (0, _) => format!("{mag}"),
                (1, 1) => "z".to_string(),
                (1, _) => format!("{mag}z"),
                (_, 1) => format!("z^{k}"),
                _ => format!("{mag}z^{k}"),
            };
            write!(f, "{sign}{term}")?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_unity_sum_to_zero() {
        for (p, n) in [(3, 1), (5, 1), (5, 2), (7, 1)] {
            let m = order(p, n) as i64;
            let total = (0..m).fold(Cyclotomic::zero(p, n), |acc, k| acc + Cyclotomic::zeta_pow(p, n, k));
            assert!(total.is_zero());
        }
    }

    #[test]
    fn zeta_has_order_m() {
        let z = Cyclotomic::zeta_pow(5, 2, 1);
        let mut acc = Cyclotomic::from_int(5, 2, 1);
        for k in 1..=25 {
            acc = &acc * &z;
            assert_eq!(acc == Cyclotomic::from_int(5, 2, 1), k == 25);
        }
    }

    #[test]
    fn conj_and_norm() {
        let z = Cyclotomic::zeta_pow(7, 1, 3);
        assert_eq!(&z * &z.conj(), Cyclotomic::from_int(7, 1, 1));
        // |ζ + ζ⁻¹|: product over Galois orbit of 2cos is ±1
        let t = Cyclotomic::trace_pair(7, 1, 1);
        let norm = (1..=3).fold(Cyclotomic::from_int(7, 1, 1), |acc, a| &acc * &t.galois(a));
        assert_eq!(norm.as_integer().map(i64::abs), Some(1));
    }

    #[test]
    fn lift_preserves_products() {
        let a = Cyclotomic::zeta_pow(5, 1, 2) + Cyclotomic::from_int(5, 1, 3);
        let b = Cyclotomic::trace_pair(5, 1, 1);
        assert_eq!((&a * &b).lift_to(2), &a.lift_to(2) * &b.lift_to(2));
        assert_eq!(Cyclotomic::zeta_pow(5, 1, 1).lift_to(2), Cyclotomic::zeta_pow(5, 2, 5));
    }

    #[test]
    fn exact_division() {
        let x = Cyclotomic::trace_pair(5, 1, 1).scale(6);
        assert_eq!(x.div_exact(3), Some(Cyclotomic::trace_pair(5, 1, 1).scale(2)));
        assert_eq!(Cyclotomic::trace_pair(5, 1, 1).div_exact(2), None);
    }
}
