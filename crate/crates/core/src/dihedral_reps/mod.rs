//! Character theory of D_{2pⁿ} = ⟨r, s | r^{pⁿ}, s², srs = r⁻¹⟩ and its
//! subgroups ⟨r^{p^{n−k}}⟩ and ⟨r^{p^{n−k}}, s⟩.
//!
//! Elements are pairs `(a, b)` standing for `r^a s^b`. Values of class
//! functions are exact elements of ℤ[ζ_{p^F}] where `F` is the level of the
//! ambient group the function was built from.

pub mod cyclotomic;

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::arith::is_prime_u64;
use crate::error::{Error, Result};
pub use cyclotomic::Cyclotomic;

/// `r^a s^b` in D_{2M}, M = p^level; `a` is reduced mod M.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    pub a: u64,
    pub b: bool,
}

/// The dihedral group D_{2M} with M = p^level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DihedralGroup {
    pub p: u64,
    pub level: u32,
}

impl DihedralGroup {
    pub fn new(p: u64, level: u32) -> Result<Self> {
        check_odd_prime(p)?;
        Ok(DihedralGroup { p, level })
    }

    pub fn rotation_order(&self) -> u64 {
        self.p.pow(self.level)
    }

    pub fn order(&self) -> u64 {
        2 * self.rotation_order()
    }

    pub fn identity(&self) -> Element {
        Element { a: 0, b: false }
    }

    pub fn mul(&self, x: Element, y: Element) -> Element {
        let m = self.rotation_order();
        let a = if x.b { (x.a + m - y.a % m) % m } else { (x.a + y.a) % m };
        Element { a, b: x.b ^ y.b }
    }

    pub fn inv(&self, x: Element) -> Element {
        if x.b {
            x
        } else {
            Element { a: (self.rotation_order() - x.a) % self.rotation_order(), b: false }
        }
    }

    pub fn conjugate(&self, x: Element, g: Element) -> Element {
        self.mul(self.mul(x, g), self.inv(x))
    }

    pub fn elements(&self) -> Vec<Element> {
        let m = self.rotation_order();
        (0..m)
            .map(|a| Element { a, b: false })
            .chain((0..m).map(|a| Element { a, b: true }))
            .collect()
    }

    /// Elements of the subgroup `tag`, written in this group's coordinates.
    pub fn subgroup_elements(&self, tag: SubgroupTag) -> Result<Vec<Element>> {
        let (dihedral, k) = tag.shape();
        if k > self.level {
            return Err(Error::InvalidSubgroup(format!("{tag} is not a subgroup of D{}", self.order())));
        }
        let step = self.p.pow(self.level - k);
        let rots = (0..self.p.pow(k)).map(|i| Element { a: i * step, b: false });
        let mut out: Vec<Element> = rots.clone().collect();
        if dihedral {
            out.extend(rots.map(|e| Element { a: e.a, b: true }));
        }
        Ok(out)
    }

    pub fn in_subgroup(&self, tag: SubgroupTag, x: Element) -> bool {
        let (dihedral, k) = tag.shape();
        k <= self.level && (dihedral || !x.b) && x.a.is_multiple_of(self.p.pow(self.level - k))
    }
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p.is_multiple_of(2) || !is_prime_u64(p) {
        return Err(Error::InvalidGroup(format!("p = {p} must be an odd prime")));
    }
    Ok(())
}

/// Subgroup classes of D_{2pⁿ}: `Cyclic(k) = ⟨r^{p^{n−k}}⟩`, `Dihedral(k) = ⟨r^{p^{n−k}}, s⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SubgroupTag {
    Trivial,
    Order2,
    Cyclic(u32),
    Dihedral(u32),
}

impl SubgroupTag {
    /// `(is dihedral, level)`.
    pub fn shape(self) -> (bool, u32) {
        match self {
            SubgroupTag::Trivial => (false, 0),
            SubgroupTag::Order2 => (true, 0),
            SubgroupTag::Cyclic(k) => (false, k),
            SubgroupTag::Dihedral(k) => (true, k),
        }
    }

    pub fn normalized(self) -> Self {
        match self {
            SubgroupTag::Cyclic(0) => SubgroupTag::Trivial,
            SubgroupTag::Dihedral(0) => SubgroupTag::Order2,
            t => t,
        }
    }

    pub fn order(self, p: u64) -> u64 {
        let (dihedral, k) = self.shape();
        p.pow(k) * if dihedral { 2 } else { 1 }
    }

    pub fn is_subgroup_of(self, other: SubgroupTag) -> bool {
        let (d1, k1) = self.shape();
        let (d2, k2) = other.shape();
        k1 <= k2 && (!d1 || d2)
    }

    /// Conjugacy classes of the tagged group in its own coordinates, as
    /// `(representative, size)`.
    pub fn classes(self, p: u64) -> Vec<(Element, u64)> {
        let (dihedral, k) = self.shape();
        let m = p.pow(k);
        if dihedral {
            let mut out = vec![(Element { a: 0, b: false }, 1)];
            out.extend((1..=(m - 1) / 2).map(|j| (Element { a: j, b: false }, 2)));
            out.push((Element { a: 0, b: true }, m));
            out
        } else {
            (0..m).map(|a| (Element { a, b: false }, 1)).collect()
        }
    }

    /// Index of the class containing `x` (own coordinates).
    pub fn class_of(self, p: u64, x: Element) -> usize {
        let (dihedral, k) = self.shape();
        let m = p.pow(k);
        if !dihedral {
            return x.a as usize;
        }
        if x.b {
            (m as usize - 1) / 2 + 1
        } else {
            x.a.min(m - x.a) as usize
        }
    }

    pub fn class_labels(self, p: u64) -> Vec<String> {
        let (dihedral, _) = self.shape();
        self.classes(p)
            .iter()
            .map(|(e, _)| match (dihedral, e.b, e.a) {
                (_, true, _) => "s".to_string(),
                (_, false, 0) => "1".to_string(),
                (true, false, a) => format!("r^±{a}"),
                (false, false, a) => format!("r^{a}"),
            })
            .collect()
    }
}

impl fmt::Display for SubgroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.normalized() {
            SubgroupTag::Trivial => f.write_str("1"),
            SubgroupTag::Order2 => f.write_str("D2"),
            SubgroupTag::Cyclic(1) => f.write_str("Cp"),
            SubgroupTag::Dihedral(1) => f.write_str("D2p"),
            SubgroupTag::Cyclic(k) => write!(f, "Cp^{k}"),
            SubgroupTag::Dihedral(k) => write!(f, "D2p^{k}"),
        }
    }
}

/// A ℤ-valued combination of irreducible characters of a subgroup of
/// D_{2p^F}, stored as its values on conjugacy classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VirtualCharacter {
    p: u64,
    field_level: u32,
    group: SubgroupTag,
    values: Vec<Cyclotomic>,
}

impl VirtualCharacter {
    pub fn from_values(p: u64, field_level: u32, group: SubgroupTag, values: Vec<Cyclotomic>) -> Result<Self> {
        check_odd_prime(p)?;
        let group = group.normalized();
        if group.shape().1 > field_level {
            return Err(Error::InvalidSubgroup(format!("{group} exceeds level {field_level}")));
        }
        if values.len() != group.classes(p).len() || values.iter().any(|v| v.level() != (p, field_level)) {
            return Err(Error::InvalidGroup("value vector does not match the class list".into()));
        }
        Ok(VirtualCharacter { p, field_level, group, values })
    }

    pub fn zero(p: u64, field_level: u32, group: SubgroupTag) -> Self {
        let group = group.normalized();
        let len = group.classes(p).len();
        VirtualCharacter { p, field_level, group, values: vec![Cyclotomic::zero(p, field_level); len] }
    }

    fn from_fn(p: u64, field_level: u32, group: SubgroupTag, f: impl Fn(Element) -> Cyclotomic) -> Self {
        let group = group.normalized();
        let values = group.classes(p).into_iter().map(|(e, _)| f(e)).collect();
        VirtualCharacter { p, field_level, group, values }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn field_level(&self) -> u32 {
        self.field_level
    }

    pub fn group(&self) -> SubgroupTag {
        self.group
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn value_at(&self, x: Element) -> &Cyclotomic {
        &self.values[self.group.class_of(self.p, x)]
    }

    pub fn degree(&self) -> i64 {
        self.values[0].as_integer().expect("value at the identity is rational")
    }

    pub fn dual(&self) -> Self {
        VirtualCharacter { values: self.values.iter().map(Cyclotomic::conj).collect(), ..self.clone() }
    }

    pub fn is_self_dual(&self) -> bool {
        self.values.iter().all(|v| v.conj() == *v)
    }

    pub fn scale(&self, k: i64) -> Self {
        VirtualCharacter { values: self.values.iter().map(|v| v.scale(k)).collect(), ..self.clone() }
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if (self.p, self.field_level, self.group) != (other.p, other.field_level, other.group) {
            return Err(Error::GroupMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(VirtualCharacter { values, ..self.clone() })
    }

    /// Pointwise product (tensor product of representations).
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(VirtualCharacter { values, ..self.clone() })
    }
}

impl Add for VirtualCharacter {
    type Output = VirtualCharacter;
    fn add(self, rhs: VirtualCharacter) -> VirtualCharacter {
        self.try_add(&rhs).expect("characters of the same group")
    }
}

impl Neg for VirtualCharacter {
    type Output = VirtualCharacter;
    fn neg(self) -> VirtualCharacter {
        self.scale(-1)
    }
}

impl Sub for VirtualCharacter {
    type Output = VirtualCharacter;
    fn sub(self, rhs: VirtualCharacter) -> VirtualCharacter {
        self + (-rhs)
    }
}

impl fmt::Display for VirtualCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Trivial character of the tagged subgroup.
pub fn trivial(p: u64, field_level: u32, group: SubgroupTag) -> VirtualCharacter {
    VirtualCharacter::from_fn(p, field_level, group, |_| Cyclotomic::from_int(p, field_level, 1))
}

/// The sign character: −1 on reflections (trivial on cyclic groups).
pub fn eta(p: u64, field_level: u32, group: SubgroupTag) -> VirtualCharacter {
    VirtualCharacter::from_fn(p, field_level, group, |e| Cyclotomic::from_int(p, field_level, if e.b { -1 } else { 1 }))
}

/// χ_j(r^a) = ζ_{p^k}^{ja} on the cyclic group of level `k`.
pub fn cyclic_character(p: u64, field_level: u32, k: u32, j: i64) -> VirtualCharacter {
    let stride = p.pow(field_level - k) as i64;
    VirtualCharacter::from_fn(p, field_level, SubgroupTag::Cyclic(k), |e| {
        Cyclotomic::zeta_pow(p, field_level, j * e.a as i64 * stride)
    })
}

/// I(χ_j) = Ind from the rotations of χ_j, on the dihedral group of level `k`.
pub fn induced_rotation_character(p: u64, field_level: u32, k: u32, j: i64) -> VirtualCharacter {
    let stride = p.pow(field_level - k) as i64;
    VirtualCharacter::from_fn(p, field_level, SubgroupTag::Dihedral(k), |e| {
        if e.b {
            Cyclotomic::zero(p, field_level)
        } else {
            Cyclotomic::trace_pair(p, field_level, j * e.a as i64 * stride)
        }
    })
}

/// Irreducible characters of any tagged subgroup of D_{2p^F}.
pub fn irreducibles_of(p: u64, field_level: u32, group: SubgroupTag) -> Result<Vec<VirtualCharacter>> {
    check_odd_prime(p)?;
    let (dihedral, k) = group.shape();
    if k > field_level {
        return Err(Error::InvalidSubgroup(format!("{group} exceeds level {field_level}")));
    }
    let m = p.pow(k) as i64;
    if dihedral {
        let mut out = vec![trivial(p, field_level, group), eta(p, field_level, group)];
        out.extend((1..=(m - 1) / 2).map(|j| induced_rotation_character(p, field_level, k, j)));
        Ok(out)
    } else {
        Ok((0..m).map(|j| cyclic_character(p, field_level, k, j)).collect())
    }
}

/// `1, η, I(χ_1), …, I(χ_{(pⁿ−1)/2})` for D_{2pⁿ}.
pub fn irreducibles(p: u64, n: u32) -> Result<Vec<VirtualCharacter>> {
    if n == 0 {
        return Err(Error::InvalidGroup("n must be positive".into()));
    }
    irreducibles_of(p, n, SubgroupTag::Dihedral(n))
}

/// `(1/|G|) Σ_g χ₁(g)·conj(χ₂(g))`, required to be a rational integer.
pub fn inner_product(a: &VirtualCharacter, b: &VirtualCharacter) -> Result<i64> {
    a.same_group(b)?;
    let mut total = Cyclotomic::zero(a.p, a.field_level);
    for ((_, size), (x, y)) in a.group.classes(a.p).into_iter().zip(a.values.iter().zip(&b.values)) {
        total = total + (x * &y.conj()).scale(size as i64);
    }
    total
        .div_exact(a.group.order(a.p) as i64)
        .and_then(|v| v.as_integer())
        .ok_or(Error::NonIntegralInnerProduct)
}

/// Multiplicities of each irreducible of the character's group.
pub fn decompose(chi: &VirtualCharacter) -> Result<Vec<i64>> {
    irreducibles_of(chi.p, chi.field_level, chi.group)?
        .iter()
        .map(|irr| inner_product(chi, irr))
        .collect()
}

/// Restriction to a subgroup `to` of the character's group.
pub fn restrict(chi: &VirtualCharacter, to: SubgroupTag) -> Result<VirtualCharacter> {
    let to = to.normalized();
    if !to.is_subgroup_of(chi.group) {
        return Err(Error::InvalidSubgroup(format!("{to} is not contained in {}", chi.group)));
    }
    let step = chi.p.pow(chi.group.shape().1 - to.shape().1);
    Ok(VirtualCharacter::from_fn(chi.p, chi.field_level, to, |e| {
        chi.value_at(Element { a: e.a * step, b: e.b }).clone()
    }))
}

/// Induction from the character's group to an overgroup `to`.
pub fn induce(chi: &VirtualCharacter, to: SubgroupTag) -> Result<VirtualCharacter> {
    let to = to.normalized();
    if !chi.group.is_subgroup_of(to) {
        return Err(Error::InvalidSubgroup(format!("{} is not contained in {to}", chi.group)));
    }
    let p = chi.p;
    let (h_dihedral, h_level) = chi.group.shape();
    let (_, g_level) = to.shape();
    let step = p.pow(g_level - h_level);
    let g = DihedralGroup { p, level: g_level };
    let g_elems = g.subgroup_elements(to)?;
    let h_order = chi.group.order(p) as i64;
    let mut values = Vec::new();
    for (rep, _) in to.classes(p) {
        let mut acc = Cyclotomic::zero(p, chi.field_level);
        for &x in &g_elems {
            let y = g.conjugate(x, rep);
            if y.a.is_multiple_of(step) && (h_dihedral || !y.b) {
                acc = acc + chi.value_at(Element { a: y.a / step, b: y.b }).clone();
            }
        }
        values.push(acc.div_exact(h_order).ok_or(Error::NonIntegralInnerProduct)?);
    }
    Ok(VirtualCharacter { p, field_level: chi.field_level, group: to, values })
}

/// One instance of the D_{2p^{N−1}} → D_{2p^N} decomposition check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTerm {
    /// χ = χ_j on C_{p^N}.
    pub j: u64,
    /// The `j₀ ≡ j (mod p^{N−1})`, normalised into `1..p^N/2`, whose I(χ_{j₀}) make up the sum.
    pub matching: Vec<u64>,
    pub holds: bool,
}

/// For each injective χ = χ_j on C_{p^N}, compares Ind Res I(χ) (through
/// D_{2p^{N−1}}) with Σ I(χ₀) over the p characters χ₀ agreeing with χ on
/// C_{p^{N−1}}.
pub fn reduction_identity_terms(p: u64, big_n: u32) -> Result<Vec<ReductionTerm>> {
    check_odd_prime(p)?;
    if big_n < 2 {
        return Err(Error::InvalidGroup("N must be at least 2".into()));
    }
    let m = p.pow(big_n);
    let q = p.pow(big_n - 1);
    let full = SubgroupTag::Dihedral(big_n);
    let sub = SubgroupTag::Dihedral(big_n - 1);
    let mut out = Vec::new();
    for j in (1..=(m - 1) / 2).filter(|j| j % p != 0) {
        let tau = induced_rotation_character(p, big_n, big_n, j as i64);
        let lhs = induce(&restrict(&tau, sub)?, full)?;
        let mut rhs = VirtualCharacter::zero(p, big_n, full);
        let mut matching = Vec::new();
        for t in 0..p {
            let j0 = (j + t * q) % m;
            rhs = rhs + induced_rotation_character(p, big_n, big_n, j0 as i64);
            matching.push(j0.min(m - j0));
        }
        out.push(ReductionTerm { j, matching, holds: lhs == rhs });
    }
    Ok(out)
}

pub fn verify_reduction_identity(p: u64, big_n: u32) -> Result<bool> {
    Ok(reduction_identity_terms(p, big_n)?.iter().all(|t| t.holds))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degrees(chars: &[VirtualCharacter]) -> Vec<i64> {
        chars.iter().map(|c| c.degree()).collect()
    }

    #[test]
    fn irreducible_counts() {
        assert_eq!(degrees(&irreducibles(5, 1).unwrap()), vec![1, 1, 2, 2]);
        let d14: i64 = degrees(&irreducibles(7, 1).unwrap()).iter().map(|d| d * d).sum();
        assert_eq!(d14, 14);
        let d50 = irreducibles(5, 2).unwrap();
        assert_eq!(d50.len(), 14);
        assert_eq!(degrees(&d50).iter().filter(|&&d| d == 2).count(), 12);
        assert!(irreducibles(4, 1).is_err());
        assert!(irreducibles(2, 1).is_err());
    }

    #[test]
    fn class_count() {
        for (p, n) in [(3u64, 1u32), (5, 1), (5, 2), (7, 1)] {
            let m = p.pow(n);
            assert_eq!(SubgroupTag::Dihedral(n).classes(p).len() as u64, 1 + (m - 1) / 2 + 1);
            let total: u64 = SubgroupTag::Dihedral(n).classes(p).iter().map(|c| c.1).sum();
            assert_eq!(total, 2 * m);
        }
    }

    #[test]
    fn row_orthonormality() {
        for (p, n) in [(5, 1), (7, 1), (5, 2), (3, 2)] {
            let irr = irreducibles(p, n).unwrap();
            for (i, a) in irr.iter().enumerate() {
                for (j, b) in irr.iter().enumerate() {
                    assert_eq!(inner_product(a, b).unwrap(), (i == j) as i64);
                }
            }
        }
    }

    #[test]
    fn column_orthogonality() {
        for (p, n) in [(5u64, 1u32), (7, 1), (5, 2)] {
            let g = SubgroupTag::Dihedral(n);
            let irr = irreducibles(p, n).unwrap();
            let classes = g.classes(p);
            let order = g.order(p) as i64;
            for (i, (_, si)) in classes.iter().enumerate() {
                for (j, _) in classes.iter().enumerate() {
                    let sum = irr.iter().fold(Cyclotomic::zero(p, n), |acc, chi| {
                        acc + &chi.values()[i] * &chi.values()[j].conj()
                    });
                    let expected = if i == j { order / *si as i64 } else { 0 };
                    assert_eq!(sum, Cyclotomic::from_int(p, n, expected), "D{} classes {i},{j}", 2 * p.pow(n));
                }
            }
        }
    }

    #[test]
    fn reflections_vanish_on_two_dimensionals() {
        for chi in irreducibles(7, 1).unwrap().iter().skip(2) {
            assert!(chi.value_at(Element { a: 3, b: true }).is_zero());
            assert_eq!(chi.degree(), 2);
        }
    }

    #[test]
    fn induced_character_is_inverse_symmetric() {
        for j in 1..12 {
            let a = induced_rotation_character(5, 2, 2, j);
            let b = induced_rotation_character(5, 2, 2, -j);
            assert_eq!(a, b);
            let from_cyclic = induce(&cyclic_character(5, 2, 2, j), SubgroupTag::Dihedral(2)).unwrap();
            assert_eq!(from_cyclic, a);
        }
    }

    #[test]
    fn induction_of_trivial_from_rotations() {
        let one = trivial(5, 1, SubgroupTag::Cyclic(1));
        let ind = induce(&one, SubgroupTag::Dihedral(1)).unwrap();
        assert_eq!(ind, trivial(5, 1, SubgroupTag::Dihedral(1)) + eta(5, 1, SubgroupTag::Dihedral(1)));
    }

    #[test]
    fn restriction_to_rotations_splits() {
        let tau = induced_rotation_character(7, 1, 1, 2);
        let res = restrict(&tau, SubgroupTag::Cyclic(1)).unwrap();
        assert_eq!(inner_product(&res, &cyclic_character(7, 1, 1, 2)).unwrap(), 1);
        assert_eq!(inner_product(&res, &cyclic_character(7, 1, 1, 5)).unwrap(), 1);
        assert_eq!(decompose(&res).unwrap().iter().sum::<i64>(), 2);
    }

    #[test]
    fn induction_degree_is_index_times_degree() {
        let sigma = induced_rotation_character(5, 2, 1, 1);
        let ind = induce(&sigma, SubgroupTag::Dihedral(2)).unwrap();
        assert_eq!(ind.degree(), 5 * sigma.degree());
    }

    #[test]
    fn frobenius_reciprocity_small() {
        let p = 5;
        let g = SubgroupTag::Dihedral(1);
        for h in [SubgroupTag::Trivial, SubgroupTag::Order2, SubgroupTag::Cyclic(1)] {
            for alpha in irreducibles_of(p, 1, h).unwrap() {
                for beta in irreducibles_of(p, 1, g).unwrap() {
                    let lhs = inner_product(&induce(&alpha, g).unwrap(), &beta).unwrap();
                    let rhs = inner_product(&alpha, &restrict(&beta, h).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn reduction_identity() {
        assert!(verify_reduction_identity(5, 2).unwrap());
        assert!(verify_reduction_identity(3, 2).unwrap());
        let terms = reduction_identity_terms(5, 2).unwrap();
        assert_eq!(terms.len(), 10);
        assert!(terms.iter().all(|t| t.matching.len() == 5));
        assert!(verify_reduction_identity(5, 1).is_err());
    }

    #[test]
    fn decomposition_recovers_multiplicities() {
        let irr = irreducibles(5, 2).unwrap();
        let mut chi = VirtualCharacter::zero(5, 2, SubgroupTag::Dihedral(2));
        let mult = [2i64, -1, 0, 3, 0, 0, 1, 0, 0, 0, -2, 0, 0, 1];
        for (m, x) in mult.iter().zip(&irr) {
            chi = chi + x.scale(*m);
        }
        assert_eq!(decompose(&chi).unwrap(), mult.to_vec());
    }

    #[test]
    fn mismatched_groups_rejected() {
        let a = trivial(5, 1, SubgroupTag::Dihedral(1));
        let b = trivial(7, 1, SubgroupTag::Dihedral(1));
        assert_eq!(inner_product(&a, &b), Err(Error::GroupMismatch));
        assert!(restrict(&trivial(5, 1, SubgroupTag::Cyclic(1)), SubgroupTag::Order2).is_err());
    }

    #[test]
    fn group_law() {
        let g = DihedralGroup::new(7, 1).unwrap();
        let elems = g.elements();
        for &x in &elems {
            assert_eq!(g.mul(x, g.inv(x)), g.identity());
            for &y in &elems {
                for &z in elems.iter().step_by(3) {
                    assert_eq!(g.mul(g.mul(x, y), z), g.mul(x, g.mul(y, z)));
                }
            }
        }
        let r = Element { a: 1, b: false };
        let s = Element { a: 0, b: true };
        assert_eq!(g.mul(g.mul(s, r), s), g.inv(r));
    }
}
