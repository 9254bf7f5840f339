//! Integer helpers: valuations, residues, CRT, primality and factoring.
//!
//! Everything here is exact. Factoring is trial division followed by a
//! bounded Pollard–Brent search; callers that need a complete answer must
//! check [`Factorization::cofactor`].

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Valuation returned for zero.
pub const INFINITE_VALUATION: u32 = u32::MAX;

/// `ord_p(n)`, or [`INFINITE_VALUATION`] when `n == 0`.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    if n.is_zero() {
        return INFINITE_VALUATION;
    }
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `ord_p` of a nonzero rational.
pub fn rational_valuation(q: &BigRational, p: u64) -> i64 {
    assert!(!q.is_zero(), "valuation of zero rational");
    valuation(q.numer(), p) as i64 - valuation(q.denom(), p) as i64
}

/// Strips every factor of `p` from `n`, returning the exponent and the rest.
pub fn split_off(n: &BigInt, p: &BigInt) -> (u32, BigInt) {
    let mut n = n.clone();
    let mut v = 0;
    if n.is_zero() || p.abs() <= BigInt::one() {
        return (0, n);
    }
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return (v, n);
        }
        n = q;
        v += 1;
    }
}

/// Least nonnegative residue of `a` modulo `m`.
pub fn residue(a: &BigInt, m: u64) -> u64 {
    a.mod_floor(&BigInt::from(m)).to_u64().unwrap()
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let g = BigInt::from(a).extended_gcd(&BigInt::from(m));
    if !g.gcd.is_one() {
        return None;
    }
    Some(residue(&g.x, m))
}

/// Inverse of `a` modulo `m` for big moduli.
pub fn inv_mod_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.mod_floor(m).extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
pub fn legendre(a: &BigInt, p: u64) -> i8 {
    debug_assert!(p % 2 == 1);
    let a = residue(a, p);
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller–Rabin over the first 20 prime bases. Deterministic below 3.3·10^24,
/// a strong probable-prime test above.
pub fn is_probable_prime(n: &BigInt) -> bool {
    if n.sign() != Sign::Plus {
        return false;
    }
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    const BASES: [u32; 20] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
    ];
    for &p in &BASES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap();
    let d = &n_minus_1 >> s;
    'witness: for &a in &BASES {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigInt::from(2), n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn ensure_prime(p: u64) -> Result<()> {
    if is_prime_u64(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p.to_string()))
    }
}

/// Chinese remainder theorem: the least nonnegative `x` with `x ≡ r_i (mod m_i)`.
pub fn crt(congruences: &[(BigInt, BigInt)]) -> Result<BigInt> {
    let mut x = BigInt::zero();
    let mut modulus = BigInt::one();
    for (r, m) in congruences {
        if m.is_zero() {
            return Err(Error::NonCoprimeModuli);
        }
        let m = m.abs();
        if !modulus.gcd(&m).is_one() {
            return Err(Error::NonCoprimeModuli);
        }
        // x + modulus * k ≡ r (mod m)
        let inv = inv_mod_big(&modulus, &m).expect("coprime moduli");
        let k = ((r - &x) * inv).mod_floor(&m);
        x += &modulus * k;
        modulus *= m;
        x = x.mod_floor(&modulus);
    }
    Ok(x)
}

/// Splits `n` as `(a, b)` with `n = a·b`, where `a` is coprime to `against`
/// and every prime of `b` divides `against`. Uses only gcds.
pub fn coprime_split(n: &BigInt, against: &BigInt) -> (BigInt, BigInt) {
    let mut free = n.abs();
    loop {
        let g = free.gcd(against);
        if g.is_one() || g.is_zero() {
            break;
        }
        while (&free % &g).is_zero() {
            free /= &g;
        }
    }
    let rest = n.abs() / &free;
    (free, rest)
}

pub fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// Prime factors with multiplicity, ascending.
    pub primes: Vec<(BigInt, u32)>,
    /// Unfactored part (1 when the factorization is complete).
    pub cofactor: BigInt,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }
}

const TRIAL_BOUND: u64 = 10_000;

/// Factors `|n|` (n ≠ 0). `rho_budget` caps the Pollard–Brent iterations
/// spent on each composite cofactor.
pub fn factor(n: &BigInt, rho_budget: u64) -> Factorization {
    assert!(!n.is_zero(), "factor(0)");
    let mut n = n.abs();
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut d = 2u64;
    while d <= TRIAL_BOUND {
        let bd = BigInt::from(d);
        if &bd * &bd > n {
            break;
        }
        let (e, rest) = split_off(&n, &bd);
        if e > 0 {
            primes.push((bd, e));
            n = rest;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut cofactor = BigInt::one();
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if BigInt::from(TRIAL_BOUND) * BigInt::from(TRIAL_BOUND) > m || is_probable_prime(&m) {
            push_prime(&mut primes, m, 1);
            continue;
        }
        if is_square(&m) {
            let r = m.sqrt();
            stack.push(r.clone());
            stack.push(r);
            continue;
        }
        match pollard_brent(&m, rho_budget) {
            Some(f) => {
                let other = &m / &f;
                stack.push(f);
                stack.push(other);
            }
            None => cofactor *= m,
        }
    }
    primes.sort();
    Factorization { primes, cofactor }
}

fn push_prime(primes: &mut Vec<(BigInt, u32)>, p: BigInt, e: u32) {
    if let Some(entry) = primes.iter_mut().find(|(q, _)| *q == p) {
        entry.1 += e;
    } else {
        primes.push((p, e));
    }
}

fn pollard_brent(n: &BigInt, budget: u64) -> Option<BigInt> {
    if n.is_even() {
        return Some(BigInt::from(2));
    }
    let one = BigInt::one();
    for c in 1u32..8 {
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut y = BigInt::from(2);
        let mut r: u64 = 1;
        let mut q = one.clone();
        let mut g = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut spent = 0u64;
        const BLOCK: u64 = 64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..BLOCK.min(r - k) {
                    y = f(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += BLOCK;
            }
            spent += r;
            r *= 2;
            if spent > budget {
                break;
            }
        }
        if g == *n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() && g != *n {
            return Some(g);
        }
    }
    None
}

/// The squarefree kernel of `|n|` with the sign of `n`, provided `n`
/// factors completely within the budget.
pub fn squarefree_part(n: &BigInt) -> Option<BigInt> {
    let fac = factor(n, 1 << 20);
    if !fac.is_complete() {
        return None;
    }
    let mut out = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    for (p, e) in fac.primes {
        if e % 2 == 1 {
            out *= p;
        }
    }
    Some(out)
}

/// Primes up to `bound` in increasing order.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| is_prime_u64(n)).collect()
}
