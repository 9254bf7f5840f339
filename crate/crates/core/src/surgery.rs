//! Moving a curve over ℚ p₀-adically close to one that is semistable away
//! from p₀ and has non-integral j-invariant.
//!
//! Every shift is ≡ 0 mod p₀ⁿ, so the local data at p₀ is preserved once n
//! is large enough; n starts at the plan's value and doubles until
//! [`closeness_check`] passes.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

pub use crate::arith::crt;
use crate::arith::{coprime_split, factor, inv_mod_big, is_prime_u64, rational_valuation, split_off, valuation};
use crate::error::{Error, Result};
use crate::tate::{self, ReductionClass};
use crate::weierstrass::WeierstrassCurve;

pub const MAX_CLOSENESS_EXPONENT: u32 = 1024;
const RHO_BUDGET: u64 = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurgeryTrace {
    pub d1: BigInt,
    pub d2: BigInt,
    pub d3: BigInt,
    pub d4: BigInt,
    pub c: BigInt,
    /// Exponents tried, the last one succeeding.
    pub attempts: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurgeryPlan {
    pub p0: u64,
    pub n: u32,
    pub v: u64,
    pub trace: Option<SurgeryTrace>,
}

impl SurgeryPlan {
    pub fn new(p0: u64, v: u64, n: u32) -> Result<Self> {
        if !is_prime_u64(p0) {
            return Err(Error::NotPrime(p0.to_string()));
        }
        if !is_prime_u64(v) {
            return Err(Error::NotPrime(v.to_string()));
        }
        if v == p0 || v == 2 {
            return Err(Error::InvalidPlan(format!("auxiliary prime v = {v} must be odd and differ from p0 = {p0}")));
        }
        if n == 0 {
            return Err(Error::InvalidPlan("n must be >= 1".into()));
        }
        Ok(SurgeryPlan { p0, n, v, trace: None })
    }
}

impl fmt::Display for SurgeryPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p0={} v={} n={}", self.p0, self.v, self.n)?;
        if let Some(t) = &self.trace {
            let tried: Vec<String> = t.attempts.iter().map(|n| n.to_string()).collect();
            write!(f, "\nd1={}\nd2={}\nd3={}\nd4={}\nc={}\nattempts n={}", t.d1, t.d2, t.d3, t.d4, t.c, tried.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryResult {
    pub curve: WeierstrassCurve,
    pub plan: SurgeryPlan,
}

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

fn raw_invariants(a: &[BigInt; 5]) -> (BigInt, BigInt) {
    let [a1, a2, a3, a4, a6] = a;
    let b2 = a1 * a1 + 4 * a2;
    let b4 = a1 * a3 + 2 * a4;
    let b6 = a3 * a3 + 4 * a6;
    let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    let c4 = &b2 * &b2 - 24 * &b4;
    let disc = -&b2 * &b2 * &b8 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6;
    (c4, disc)
}

/// One pass of the three CRT steps at closeness exponent `n`.
fn attempt(curve: &WeierstrassCurve, p0: u64, v: u64, n: u32) -> Result<Option<(WeierstrassCurve, SurgeryTrace)>> {
    let q = big(p0).pow(n);
    let vb = big(v);
    let zero = || (BigInt::zero(), q.clone());
    let [a1, a2, a3, a4, a6] = curve.coeffs().map(Clone::clone);

    // Step 1: a1' odd (so 2 ∤ c4') and a1' ≡ 0 mod v
    let mut sys = vec![zero(), (-&a1, vb.clone())];
    if p0 != 2 {
        sys.push((BigInt::one() - &a1, big(2)));
    }
    let d1 = crt(&sys)?;
    let a1p = &a1 + &d1;

    // Step 2: a2' ≡ 1, a3', a4' ≡ 0 mod v, so v ∤ c4'; also 3 ∤ b2' unless 3 ∈ {p0, v},
    // since otherwise Δ mod 3 cannot be moved by the a6 shift
    let mut sys = vec![zero(), (BigInt::one() - &a2, vb.clone())];
    if p0 != 3 && v != 3 {
        sys.push((BigInt::one() - &a1p * &a1p - &a2, big(3)));
    }
    let d2 = crt(&sys)?;
    let d3 = crt(&[zero(), (-&a3, vb.clone())])?;
    let d4 = crt(&[zero(), (-&a4, vb.clone())])?;
    let shifted = [a1p, &a2 + &d2, &a3 + &d3, &a4 + &d4, a6.clone()];
    let (c4, disc) = raw_invariants(&shifted);

    // Step 3: a6'' = a6' + c with Δ'' = Δ' + c(γ' − 432c)
    let (_, stripped) = split_off(&c4.abs(), &big(p0));
    let (_, stripped) = split_off(&stripped, &vb);
    let (a_good, a_bad) = coprime_split(&stripped, &disc);
    let b2 = &shifted[0] * &shifted[0] + 4 * &shifted[1];
    let b4 = &shifted[0] * &shifted[2] + 2 * &shifted[3];
    let beta = -&b2 * &b2 * &b2 - 216 * &shifted[2] * &shifted[2] + 36 * &b2 * &b4;
    let gamma = beta - 864 * &a6;
    let mut sys = vec![zero(), (-&a6, vb), (BigInt::zero(), a_good)];
    if !a_bad.is_one() {
        let inv432 = inv_mod_big(&big(432), &a_bad).ok_or_else(|| Error::SurgeryFailed("2 or 3 divides c4'".into()))?;
        let prod: BigInt = &gamma * &inv432;
        let t = prod.mod_floor(&a_bad);
        // primes where γ'/432 ≡ 1 take c ≡ 2, the others c ≡ 1
        let (m_a, m_b) = coprime_split(&a_bad, &(t - 1));
        sys.push((BigInt::one(), m_a));
        sys.push((big(2), m_b));
    }
    let c = crt(&sys)?;
    let mut out = shifted;
    out[4] = &a6 + &c;
    let (_, disc2) = raw_invariants(&out);
    if disc2.is_zero() {
        return Ok(None);
    }
    let [a1, a2, a3, a4, a6] = out;
    let curve2 = WeierstrassCurve::new(a1, a2, a3, a4, a6)?;
    Ok(Some((curve2, SurgeryTrace { d1, d2, d3, d4, c, attempts: vec![] })))
}

/// Runs the three steps, doubling n until the local data at p₀ is unchanged.
pub fn make_semistable(curve: &WeierstrassCurve, plan: &SurgeryPlan) -> Result<SurgeryResult> {
    let plan0 = SurgeryPlan::new(plan.p0, plan.v, plan.n)?;
    let mut n = plan0.n;
    let mut attempts = Vec::new();
    while n <= MAX_CLOSENESS_EXPONENT {
        attempts.push(n);
        let step = match attempt(curve, plan0.p0, plan0.v, n) {
            Ok(x) => x,
            Err(Error::SingularModel) => None,
            Err(e) => return Err(e),
        };
        if let Some((out, mut trace)) = step {
            if closeness_check(curve, &out, plan0.p0)? {
                trace.attempts = attempts;
                return Ok(SurgeryResult { curve: out, plan: SurgeryPlan { n, trace: Some(trace), ..plan0 } });
            }
        }
        n *= 2;
    }
    Err(Error::SurgeryFailed(format!("local data at {} not preserved up to n = {MAX_CLOSENESS_EXPONENT}", plan0.p0)))
}

/// Kodaira symbol, δ, Tamagawa number and conductor exponent agree at p₀.
pub fn closeness_check(e: &WeierstrassCurve, e2: &WeierstrassCurve, p0: u64) -> Result<bool> {
    let a = tate::local_reduction(e, p0)?;
    let b = tate::local_reduction(e2, p0)?;
    Ok(a.kodaira == b.kodaira
        && a.delta == b.delta
        && a.tamagawa == b.tamagawa
        && a.conductor_exp == b.conductor_exp)
}

/// Difference Δ(a6 + c) − Δ(a6) against c·(γ − 432c) with γ = β − 864·a6.
pub fn shift_identity_holds(curve: &WeierstrassCurve, c: &BigInt) -> Result<bool> {
    let shifted = curve.with_a6(curve.a6() + c);
    let lhs = match shifted {
        Ok(s) => s.discriminant(),
        Err(Error::SingularModel) => BigInt::zero(),
        Err(e) => return Err(e),
    } - curve.discriminant();
    Ok(lhs == c * (curve.a6_shift_gamma() - 432 * c))
}

/// The printed form Δ = α + β·a6 + 16·a6², i.e. Δ(a6 + c) − Δ(a6) = c·(γ + 16c) with γ = β + 32·a6.
pub fn printed_shift_identity_holds(curve: &WeierstrassCurve, c: &BigInt) -> Result<bool> {
    let shifted = curve.with_a6(curve.a6() + c);
    let lhs = match shifted {
        Ok(s) => s.discriminant(),
        Err(Error::SingularModel) => BigInt::zero(),
        Err(e) => return Err(e),
    } - curve.discriminant();
    let gamma = curve.a6_expansion().beta + 32 * curve.a6();
    Ok(lhs == c * (gamma + 16 * c))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeReport {
    pub prime: BigInt,
    pub class: ReductionClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertifyReport {
    pub primes: Vec<PrimeReport>,
    /// Part of Δ left unfactored; it is coprime to c4, so multiplicative.
    pub unfactored: Option<BigInt>,
    pub additive_outside_p0: Vec<BigInt>,
    pub ord_v_j: i64,
    pub pass: bool,
}

impl fmt::Display for CertifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.primes {
            writeln!(f, "prime {}: {:?}", r.prime, r.class)?;
        }
        if let Some(u) = &self.unfactored {
            writeln!(f, "unfactored cofactor {u}: Multiplicative")?;
        }
        writeln!(f, "ord_v(j) = {}", self.ord_v_j)?;
        write!(f, "certify: {}", if self.pass { "PASS" } else { "FAIL" })
    }
}

/// Reduction class from valuations alone, after minimalizing (ℓ ≥ 5).
fn class_from_valuations(c4: &BigInt, disc: &BigInt, ell: &BigInt) -> ReductionClass {
    let (vc, _) = if c4.is_zero() { (u32::MAX, BigInt::zero()) } else { split_off(c4, ell) };
    let (vd, _) = split_off(disc, ell);
    let k = (vc / 4).min(vd / 12);
    if vd == 12 * k {
        ReductionClass::Good
    } else if vc == 4 * k {
        ReductionClass::Multiplicative
    } else {
        ReductionClass::Additive
    }
}

fn classify(curve: &WeierstrassCurve, ell: &BigInt) -> Result<ReductionClass> {
    match u64::try_from(ell) {
        Ok(l) => Ok(tate::local_reduction(curve, l)?.reduction_class),
        Err(_) => Ok(class_from_valuations(&curve.c4(), &curve.discriminant(), ell)),
    }
}

/// Checks semistability away from p₀ and ord_v(j) < 0.
pub fn certify(curve: &WeierstrassCurve, p0: u64, v: u64) -> Result<CertifyReport> {
    let c4 = curve.c4();
    let disc = curve.discriminant();
    let fac = factor(&disc, RHO_BUDGET);
    let mut primes: Vec<BigInt> = fac.primes.iter().map(|(q, _)| q.clone()).collect();
    let unfactored = if fac.is_complete() { None } else { Some(fac.cofactor.abs()) };
    // additive candidates divide gcd(c4, Δ); make sure all of them are listed
    let (_, g) = split_off(&c4.gcd(&disc), &big(p0));
    if let Some(u) = &unfactored {
        if !u.gcd(&g).is_one() {
            let extra = factor(&u.gcd(&g), RHO_BUDGET);
            if !extra.is_complete() {
                return Err(Error::SurgeryFailed("could not factor gcd(c4, disc)".into()));
            }
            primes.extend(extra.primes.into_iter().map(|(q, _)| q));
        }
    }
    primes.sort();
    primes.dedup();
    let mut reports = Vec::new();
    let mut additive = Vec::new();
    for q in primes {
        let class = classify(curve, &q)?;
        if class == ReductionClass::Additive && q != big(p0) {
            additive.push(q.clone());
        }
        reports.push(PrimeReport { prime: q, class });
    }
    let j = curve.j_invariant();
    let ord_v_j = if j.is_zero() { i64::MAX } else { rational_valuation(&j, v) };
    let pass = additive.is_empty() && ord_v_j < 0;
    Ok(CertifyReport { primes: reports, unfactored, additive_outside_p0: additive, ord_v_j, pass })
}

/// Whether the coefficients agree modulo p₀ⁿ.
pub fn congruent_mod(e: &WeierstrassCurve, e2: &WeierstrassCurve, p0: u64, n: u32) -> bool {
    let q = big(p0).pow(n);
    e.coeffs().iter().zip(e2.coeffs()).all(|(a, b)| (*a - b).mod_floor(&q).is_zero())
}

/// ord_ℓ of the discriminant, for reporting.
pub fn discriminant_valuation(curve: &WeierstrassCurve, ell: u64) -> u32 {
    valuation(&curve.discriminant(), ell)
}
