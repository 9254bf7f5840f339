//! Integral Weierstrass models `y² + a1·xy + a3·y = x³ + a2·x² + a4·x + a6`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeierstrassCurve {
    a1: BigInt,
    a2: BigInt,
    a3: BigInt,
    a4: BigInt,
    a6: BigInt,
}

/// The standard b-, c-invariants, the discriminant and `j = c4³/Δ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invariants {
    pub b2: BigInt,
    pub b4: BigInt,
    pub b6: BigInt,
    pub b8: BigInt,
    pub c4: BigInt,
    pub c6: BigInt,
    pub discriminant: BigInt,
    pub j: BigRational,
}

/// `Δ` as a polynomial in `a6`: `Δ = alpha + beta·a6 + quadratic·a6²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct A6Expansion {
    pub alpha: BigInt,
    pub beta: BigInt,
    pub quadratic: BigInt,
}

/// Coefficient of `a6²` in the discriminant (`-27·4²`).
pub const A6_QUADRATIC_COEFFICIENT: i64 = -432;

fn raw_b_invariants(a: [&BigInt; 5]) -> [BigInt; 4] {
    let [a1, a2, a3, a4, a6] = a;
    let b2 = a1 * a1 + 4 * a2;
    let b4 = 2 * a4 + a1 * a3;
    let b6 = a3 * a3 + 4 * a6;
    let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    [b2, b4, b6, b8]
}

fn raw_discriminant(a: [&BigInt; 5]) -> BigInt {
    let [b2, b4, b6, b8] = raw_b_invariants(a);
    -&b2 * &b2 * &b8 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
}

impl WeierstrassCurve {
    pub fn new(a1: BigInt, a2: BigInt, a3: BigInt, a4: BigInt, a6: BigInt) -> Result<Self> {
        if raw_discriminant([&a1, &a2, &a3, &a4, &a6]).is_zero() {
            return Err(Error::SingularModel);
        }
        Ok(WeierstrassCurve { a1, a2, a3, a4, a6 })
    }

    pub fn from_coeffs(a: [i64; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = a.map(BigInt::from);
        Self::new(a1, a2, a3, a4, a6)
    }

    pub fn a1(&self) -> &BigInt {
        &self.a1
    }
    pub fn a2(&self) -> &BigInt {
        &self.a2
    }
    pub fn a3(&self) -> &BigInt {
        &self.a3
    }
    pub fn a4(&self) -> &BigInt {
        &self.a4
    }
    pub fn a6(&self) -> &BigInt {
        &self.a6
    }

    pub fn coeffs(&self) -> [&BigInt; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    pub fn b_invariants(&self) -> [BigInt; 4] {
        raw_b_invariants(self.coeffs())
    }

    pub fn c4(&self) -> BigInt {
        let [b2, b4, ..] = self.b_invariants();
        &b2 * &b2 - 24 * b4
    }

    pub fn c6(&self) -> BigInt {
        let [b2, b4, b6, _] = self.b_invariants();
        -&b2 * &b2 * &b2 + 36 * &b2 * &b4 - 216 * b6
    }

    pub fn discriminant(&self) -> BigInt {
        raw_discriminant(self.coeffs())
    }

    pub fn j_invariant(&self) -> BigRational {
        let c4 = self.c4();
        BigRational::new(&c4 * &c4 * &c4, self.discriminant())
    }

    pub fn invariants(&self) -> Invariants {
        let [b2, b4, b6, b8] = self.b_invariants();
        let c4 = &b2 * &b2 - 24 * &b4;
        let c6 = -&b2 * &b2 * &b2 + 36 * &b2 * &b4 - 216 * &b6;
        let discriminant = self.discriminant();
        let j = BigRational::new(&c4 * &c4 * &c4, discriminant.clone());
        Invariants { b2, b4, b6, b8, c4, c6, discriminant, j }
    }

    /// Splits off the `a6` dependence of the discriminant.
    pub fn a6_expansion(&self) -> A6Expansion {
        let (a1, a2, a3, a4) = (&self.a1, &self.a2, &self.a3, &self.a4);
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let a3sq = a3 * a3;
        let b8_without_a6 = -(a1 * a3 * a4) + a2 * &a3sq - a4 * a4;
        let alpha = -&b2 * &b2 * b8_without_a6 - 8 * &b4 * &b4 * &b4 - 27 * &a3sq * &a3sq
            + 9 * &b2 * &b4 * &a3sq;
        let beta = -&b2 * &b2 * &b2 - 216 * &a3sq + 36 * &b2 * &b4;
        A6Expansion { alpha, beta, quadratic: BigInt::from(A6_QUADRATIC_COEFFICIENT) }
    }

    /// The linear coefficient of `Δ(a6 + c) − Δ(a6) = c·(gamma + quadratic·c)`.
    pub fn a6_shift_gamma(&self) -> BigInt {
        let e = self.a6_expansion();
        e.beta + 2 * e.quadratic * &self.a6
    }

    pub fn with_a6(&self, a6: BigInt) -> Result<Self> {
        Self::new(self.a1.clone(), self.a2.clone(), self.a3.clone(), self.a4.clone(), a6)
    }

    /// Applies `x = u²x' + r`, `y = u³y' + su²x' + t`.
    pub fn transform(&self, t: &Transform) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = t.apply_rational(self.coeffs())?;
        let to_int = |q: BigRational| -> Result<BigInt> {
            if q.is_integer() {
                Ok(q.to_integer())
            } else {
                Err(Error::NonIntegralModel)
            }
        };
        Self::new(to_int(a1)?, to_int(a2)?, to_int(a3)?, to_int(a4)?, to_int(a6)?)
    }

    /// Integer translation `(u, r, s, t) = (1, r, s, t)`.
    pub(crate) fn translate(&self, r: &BigInt, s: &BigInt, t: &BigInt) -> Self {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let n1 = a1 + 2 * s;
        let n2 = a2 - s * a1 + 3 * r - s * s;
        let n3 = a3 + r * a1 + 2 * t;
        let n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
        let n6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
        WeierstrassCurve { a1: n1, a2: n2, a3: n3, a4: n4, a6: n6 }
    }

    /// Divides `a_i` by `u^i`; the caller guarantees divisibility.
    pub(crate) fn scale_down(&self, u: &BigInt) -> Self {
        let u2 = u * u;
        let u3 = &u2 * u;
        let u4 = &u2 * &u2;
        let u6 = &u3 * &u3;
        debug_assert!((&self.a6 % &u6).is_zero());
        WeierstrassCurve {
            a1: &self.a1 / u,
            a2: &self.a2 / &u2,
            a3: &self.a3 / &u3,
            a4: &self.a4 / &u4,
            a6: &self.a6 / &u6,
        }
    }
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{},{},{}]", self.a1, self.a2, self.a3, self.a4, self.a6)
    }
}

impl FromStr for WeierstrassCurve {
    type Err = Error;

    /// Five whitespace-separated integers `a1 a2 a3 a4 a6`.
    fn from_str(s: &str) -> Result<Self> {
        let parse_err = |msg: String| Error::Parse { line: 1, msg };
        let fields: Vec<&str> = s.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(parse_err(format!("expected 5 integers, found {}", fields.len())));
        }
        let mut a = Vec::with_capacity(5);
        for f in fields {
            a.push(
                f.parse::<BigInt>()
                    .map_err(|_| parse_err(format!("not an integer: {f:?}")))?,
            );
        }
        let [a1, a2, a3, a4, a6]: [BigInt; 5] = a.try_into().unwrap();
        Self::new(a1, a2, a3, a4, a6)
    }
}

/// An admissible change of variables `[u, r, s, t]` over ℚ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transform {
    pub u: BigRational,
    pub r: BigRational,
    pub s: BigRational,
    pub t: BigRational,
}

impl Transform {
    pub fn new(u: BigRational, r: BigRational, s: BigRational, t: BigRational) -> Result<Self> {
        if u.is_zero() {
            return Err(Error::InvalidTransform);
        }
        Ok(Transform { u, r, s, t })
    }

    pub fn from_ints(u: i64, r: i64, s: i64, t: i64) -> Result<Self> {
        let q = |n: i64| BigRational::from_integer(BigInt::from(n));
        Self::new(q(u), q(r), q(s), q(t))
    }

    pub fn identity() -> Self {
        Self::from_ints(1, 0, 0, 0).unwrap()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Transform) -> Transform {
        let (u1, r1, s1, t1) = (&self.u, &self.r, &self.s, &self.t);
        let (u2, r2, s2, t2) = (&other.u, &other.r, &other.s, &other.t);
        let u1sq = u1 * u1;
        Transform {
            u: u1 * u2,
            r: r1 + &u1sq * r2,
            s: s1 + u1 * s2,
            t: t1 + &u1sq * u1 * t2 + s1 * &u1sq * r2,
        }
    }

    fn apply_rational(&self, a: [&BigInt; 5]) -> Result<[BigRational; 5]> {
        if self.u.is_zero() {
            return Err(Error::InvalidTransform);
        }
        let q = |n: &BigInt| BigRational::from_integer(n.clone());
        let [a1, a2, a3, a4, a6] = a.map(q);
        let (u, r, s, t) = (&self.u, &self.r, &self.s, &self.t);
        let two = BigRational::from_integer(BigInt::from(2));
        let three = BigRational::from_integer(BigInt::from(3));
        let n1 = &a1 + &two * s;
        let n2 = &a2 - s * &a1 + &three * r - s * s;
        let n3 = &a3 + r * &a1 + &two * t;
        let n4 = &a4 - s * &a3 + &two * r * &a2 - (t + r * s) * &a1 + &three * r * r
            - &two * s * t;
        let n6 = &a6 + r * &a4 + r * r * &a2 + r * r * r - t * &a3 - t * t - r * t * &a1;
        let mut upow = BigRational::one();
        let mut out = Vec::with_capacity(5);
        let degrees = [1, 2, 3, 4, 6];
        let mut d = 0;
        for (n, deg) in [n1, n2, n3, n4, n6].into_iter().zip(degrees) {
            while d < deg {
                upow *= u;
                d += 1;
            }
            out.push(n / &upow);
        }
        Ok(out.try_into().unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn curve(a: [i64; 5]) -> WeierstrassCurve {
        WeierstrassCurve::from_coeffs(a).unwrap()
    }

    #[test]
    fn congruent_number_curve_invariants() {
        let inv = curve([0, 0, 0, -1, 0]).invariants();
        assert_eq!(inv.discriminant, BigInt::from(64));
        assert_eq!(inv.c4, BigInt::from(48));
        assert_eq!(inv.j, BigRational::from_integer(BigInt::from(1728)));
    }

    #[test]
    fn mordell_curve_invariants() {
        let inv = curve([0, 0, 0, 0, 1]).invariants();
        assert_eq!(inv.b2, BigInt::from(0));
        assert_eq!(inv.b4, BigInt::from(0));
        assert_eq!(inv.b6, BigInt::from(4));
        assert_eq!(inv.discriminant, BigInt::from(-432));
    }

    #[test]
    fn conductor_eleven_invariants() {
        let inv = curve([0, -1, 1, -10, -20]).invariants();
        assert_eq!(inv.discriminant, BigInt::from(-161051));
        assert_eq!(inv.c4, BigInt::from(496));
        assert_eq!(inv.c6, BigInt::from(20008));
    }

    #[test]
    fn singular_models_rejected() {
        assert_eq!(WeierstrassCurve::from_coeffs([0, 0, 0, 0, 0]), Err(Error::SingularModel));
        assert_eq!(WeierstrassCurve::from_coeffs([0, 0, 0, -3, 2]), Err(Error::SingularModel));
    }

    #[test]
    fn zero_scale_rejected() {
        assert_eq!(Transform::from_ints(0, 1, 0, 0), Err(Error::InvalidTransform));
    }

    #[test]
    fn identity_and_scaling() {
        let e = curve([1, -1, 1, -10, -20]);
        assert_eq!(e.transform(&Transform::identity()).unwrap(), e);

        // y² = x³ + 2^4·x + 2^6 rescaled by u = 2 is y² = x³ + x + 1.
        let big = curve([0, 0, 0, 16, 64]);
        let small = big.transform(&Transform::from_ints(2, 0, 0, 0).unwrap()).unwrap();
        assert_eq!(small, curve([0, 0, 0, 1, 1]));
        assert_eq!(small.discriminant() * BigInt::from(4096), big.discriminant());
        assert_eq!(small.c4() * BigInt::from(16), big.c4());

        let half = Transform::from_ints(3, 0, 0, 0).unwrap();
        assert_eq!(big.transform(&half), Err(Error::NonIntegralModel));
    }

    #[test]
    fn display_and_parse() {
        let e: WeierstrassCurve = "0 -1 1 -10 -20".parse().unwrap();
        assert_eq!(e.to_string(), "[0,-1,1,-10,-20]");
        assert!("0 0 0".parse::<WeierstrassCurve>().is_err());
        assert!("0 0 0 x 1".parse::<WeierstrassCurve>().is_err());
    }

    fn coeffs() -> impl Strategy<Value = [i64; 5]> {
        prop::array::uniform5(-200i64..200)
    }

    proptest! {
        #[test]
        fn c4_c6_discriminant_identity(a in coeffs()) {
            if let Ok(e) = WeierstrassCurve::from_coeffs(a) {
                let inv = e.invariants();
                let lhs = BigInt::from(1728) * &inv.discriminant;
                let rhs = &inv.c4 * &inv.c4 * &inv.c4 - &inv.c6 * &inv.c6;
                prop_assert_eq!(lhs, rhs);
                // 4·b8 = b2·b6 − b4²
                prop_assert_eq!(BigInt::from(4) * &inv.b8, &inv.b2 * &inv.b6 - &inv.b4 * &inv.b4);
            }
        }

        #[test]
        fn integral_translations_preserve_j_and_discriminant(
            a in coeffs(), r in -20i64..20, s in -20i64..20, t in -20i64..20, neg in any::<bool>()
        ) {
            if let Ok(e) = WeierstrassCurve::from_coeffs(a) {
                let u = if neg { -1 } else { 1 };
                let tr = Transform::from_ints(u, r, s, t).unwrap();
                let e2 = e.transform(&tr).unwrap();
                prop_assert_eq!(e2.discriminant(), e.discriminant());
                prop_assert_eq!(e2.j_invariant(), e.j_invariant());
                prop_assert_eq!(e2.c4(), e.c4());
            }
        }

        #[test]
        fn transform_composition(
            a in coeffs(),
            t1 in prop::array::uniform3(-9i64..9),
            t2 in prop::array::uniform3(-9i64..9),
        ) {
            if let Ok(e) = WeierstrassCurve::from_coeffs(a) {
                let f = Transform::from_ints(1, t1[0], t1[1], t1[2]).unwrap();
                let g = Transform::from_ints(-1, t2[0], t2[1], t2[2]).unwrap();
                let stepwise = e.transform(&f).unwrap().transform(&g).unwrap();
                let composite = e.transform(&f.then(&g)).unwrap();
                prop_assert_eq!(stepwise, composite);
            }
        }

        #[test]
        fn a6_shift_identity(a in coeffs(), c in -10_000i64..10_000) {
            let e = WeierstrassCurve { a1: a[0].into(), a2: a[1].into(), a3: a[2].into(), a4: a[3].into(), a6: a[4].into() };
            let ex = e.a6_expansion();
            let d = e.discriminant();
            prop_assert_eq!(&d, &(&ex.alpha + &ex.beta * &e.a6 + &ex.quadratic * &e.a6 * &e.a6));
            let shifted = WeierstrassCurve { a6: &e.a6 + c, ..e.clone() };
            let c = BigInt::from(c);
            let gamma = e.a6_shift_gamma();
            prop_assert_eq!(shifted.discriminant() - d, &c * (gamma + BigInt::from(A6_QUADRATIC_COEFFICIENT) * &c));
        }
    }

    #[test]
    fn rational_scaling_roundtrip() {
        let e = curve([1, 0, 1, 4, -6]);
        let two = BigRational::from_integer(BigInt::from(2));
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let zero = BigRational::zero();
        let up = Transform::new(half, zero.clone(), zero.clone(), zero.clone()).unwrap();
        let down = Transform::new(two, zero.clone(), zero.clone(), zero).unwrap();
        let scaled = e.transform(&up).unwrap();
        assert_eq!(scaled.discriminant(), e.discriminant() * BigInt::from(4096));
        assert_eq!(scaled.transform(&down).unwrap(), e);
        assert_eq!(scaled.j_invariant(), e.j_invariant());
    }
}
