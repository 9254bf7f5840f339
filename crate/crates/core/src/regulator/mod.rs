//! Regulator constants for G = D_{2p} and the relation
//! Θ = {1} − 2·D₂ − C_p + 2·G.
//!
//! C_Θ(ρ) = det(B|ρ^{1}) · det(½B|ρ^{D₂})⁻² · det((1/p)B|ρ^{C_p})⁻¹ · det((1/2p)B|ρ^{G})²
//! for a G-invariant non-degenerate pairing B, taken modulo squares.

pub mod matrix;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{is_prime_u64, is_square, rational_valuation, squarefree_part};
use crate::dihedral_reps::{self, Cyclotomic, SubgroupTag, VirtualCharacter};
use crate::error::{Error, Result};
pub use matrix::Matrix;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// A representation of D_{2p} on ℚ^d, given by the images of a rotation of
/// order p and a reflection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalRep {
    p: u64,
    rotation: Matrix,
    reflection: Matrix,
}

impl RationalRep {
    pub fn new(p: u64, rotation: Matrix, reflection: Matrix) -> Result<Self> {
        if p.is_multiple_of(2) || !is_prime_u64(p) {
            return Err(Error::InvalidGroup(format!("p = {p} must be an odd prime")));
        }
        let d = rotation.rows();
        if !rotation.is_square() || !reflection.is_square() || reflection.rows() != d {
            return Err(Error::InvalidRepresentation("matrices must be square of equal size".into()));
        }
        let id = Matrix::identity(d);
        if rotation.pow(p) != id {
            return Err(Error::InvalidRepresentation("rotation^p != 1".into()));
        }
        if &reflection * &reflection != id {
            return Err(Error::InvalidRepresentation("reflection^2 != 1".into()));
        }
        let trt = &(&reflection * &rotation) * &reflection;
        if &trt * &rotation != id {
            return Err(Error::InvalidRepresentation("t r t != r^-1".into()));
        }
        Ok(RationalRep { p, rotation, reflection })
    }

    pub fn trivial(p: u64) -> Result<Self> {
        Self::new(p, Matrix::identity(1), Matrix::identity(1))
    }

    pub fn eta(p: u64) -> Result<Self> {
        Self::new(p, Matrix::identity(1), Matrix::from_i64(&[vec![-1]]))
    }

    /// ℚ(ζ_p) with basis 1, ζ, …, ζ^{p−2}: the rotation multiplies by ζ and
    /// the reflection is complex conjugation.
    pub fn rho2(p: u64) -> Result<Self> {
        let d = (p - 1) as usize;
        // column k holds the image of ζ^k
        let mut rot = Matrix::zeros(d, d);
        for k in 0..d - 1 {
            rot[(k + 1, k)] = BigRational::one();
        }
        for i in 0..d {
            rot[(i, d - 1)] = rat(-1);
        }
        let mut refl = Matrix::zeros(d, d);
        refl[(0, 0)] = BigRational::one();
        for k in 1..d {
            // ζ^k ↦ ζ^{p−k}; p−k = p−1 only when k = 1
            if k == 1 {
                for i in 0..d {
                    refl[(i, 1)] = rat(-1);
                }
            } else {
                refl[(p as usize - k, k)] = BigRational::one();
            }
        }
        Self::new(p, rot, refl)
    }

    /// ℚ[G/C_p]: trivial rotation, reflection swapping the two cosets.
    pub fn coset_permutation(p: u64) -> Result<Self> {
        Self::new(p, Matrix::identity(2), Matrix::from_i64(&[vec![0, 1], vec![1, 0]]))
    }

    /// The regular representation ℚ[G] on the basis r^a s^b.
    pub fn regular(p: u64) -> Result<Self> {
        let g = dihedral_reps::DihedralGroup::new(p, 1)?;
        let elems = g.elements();
        let index = |e: dihedral_reps::Element| elems.iter().position(|&x| x == e).unwrap();
        let perm = |by: dihedral_reps::Element| {
            let mut m = Matrix::zeros(elems.len(), elems.len());
            for (j, &x) in elems.iter().enumerate() {
                m[(index(g.mul(by, x)), j)] = BigRational::one();
            }
            m
        };
        Self::new(p, perm(dihedral_reps::Element { a: 1, b: false }), perm(dihedral_reps::Element { a: 0, b: true }))
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.p != other.p {
            return Err(Error::GroupMismatch);
        }
        Ok(RationalRep {
            p: self.p,
            rotation: Matrix::block_diag(&self.rotation, &other.rotation),
            reflection: Matrix::block_diag(&self.reflection, &other.reflection),
        })
    }

    /// The isomorphic representation P⁻¹ρP.
    pub fn conjugate_by(&self, change: &Matrix) -> Result<Self> {
        let inv = change
            .inverse()
            .ok_or_else(|| Error::InvalidRepresentation("change of basis is singular".into()))?;
        Self::new(
            self.p,
            &(&inv * &self.rotation) * change,
            &(&inv * &self.reflection) * change,
        )
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.rotation.rows()
    }

    pub fn rotation(&self) -> &Matrix {
        &self.rotation
    }

    pub fn reflection(&self) -> &Matrix {
        &self.reflection
    }

    /// ρ(r^a s^b) for every element, ordered rotations first.
    fn images(&self) -> Vec<Matrix> {
        let mut rots = vec![Matrix::identity(self.dim())];
        for _ in 1..self.p {
            let next = rots.last().unwrap() * &self.rotation;
            rots.push(next);
        }
        let refls: Vec<Matrix> = rots.iter().map(|m| m * &self.reflection).collect();
        rots.into_iter().chain(refls).collect()
    }

    fn subgroup_images(&self, h: SubgroupTag) -> Vec<Matrix> {
        let all = self.images();
        let p = self.p as usize;
        match h.normalized() {
            SubgroupTag::Trivial => vec![all[0].clone()],
            SubgroupTag::Order2 => vec![all[0].clone(), all[p].clone()],
            SubgroupTag::Cyclic(_) => all[..p].to_vec(),
            _ => all,
        }
    }

    /// Basis (as columns) of ρ^H, the image of the averaging projector.
    pub fn fixed_subspace(&self, h: SubgroupTag) -> Matrix {
        let imgs = self.subgroup_images(h);
        let mut sum = Matrix::zeros(self.dim(), self.dim());
        for m in &imgs {
            sum = &sum + m;
        }
        sum.scale(&rat(imgs.len() as i64).recip()).column_space()
    }

    /// Character of ρ as a class function on D_{2p}, at cyclotomic level `field_level`.
    pub fn character(&self, field_level: u32) -> Result<VirtualCharacter> {
        let trace = |m: &Matrix| -> Result<i64> {
            let t: BigRational = (0..m.rows()).map(|i| m[(i, i)].clone()).sum();
            if !t.is_integer() {
                return Err(Error::InvalidRepresentation("non-integral trace".into()));
            }
            i64::try_from(t.to_integer()).map_err(|_| Error::InvalidRepresentation("trace overflow".into()))
        };
        let imgs = self.images();
        let g = SubgroupTag::Dihedral(1);
        let values = g
            .classes(self.p)
            .into_iter()
            .map(|(e, _)| {
                let idx = e.a as usize + if e.b { self.p as usize } else { 0 };
                Ok(Cyclotomic::from_int(self.p, field_level, trace(&imgs[idx])?))
            })
            .collect::<Result<Vec<_>>>()?;
        VirtualCharacter::from_values(self.p, field_level, g, values)
    }
}

/// Group average (1/|G|) Σ ρ(g)ᵀ·seed·ρ(g).
pub fn invariant_pairing(rep: &RationalRep, seed: &Matrix) -> Result<Matrix> {
    if seed.rows() != rep.dim() || !seed.is_square() {
        return Err(Error::InvalidRepresentation("seed has the wrong size".into()));
    }
    let imgs = rep.images();
    let mut sum = Matrix::zeros(rep.dim(), rep.dim());
    for m in &imgs {
        sum = &sum + &(&(&m.transpose() * seed) * m);
    }
    let avg = sum.scale(&rat(imgs.len() as i64).recip());
    if avg.det().is_zero() {
        return Err(Error::DegenerateSeed);
    }
    Ok(avg)
}

/// A nonzero rational modulo squares of ℚ*.
#[derive(Debug, Clone)]
pub struct SquareClass {
    value: BigRational,
}

impl SquareClass {
    pub fn new(value: BigRational) -> Option<Self> {
        (!value.is_zero()).then_some(SquareClass { value })
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    /// ord_p mod 2.
    pub fn ord_p_parity(&self, p: u64) -> u32 {
        rational_valuation(&self.value, p).rem_euclid(2) as u32
    }

    pub fn ord_p_is_odd(&self, p: u64) -> bool {
        self.ord_p_parity(p) == 1
    }

    /// (squarefree numerator, squarefree denominator), when both factor.
    pub fn representative(&self) -> Option<(BigInt, BigInt)> {
        Some((squarefree_part(self.value.numer())?, squarefree_part(self.value.denom())?))
    }

    pub fn mul(&self, other: &SquareClass) -> SquareClass {
        SquareClass { value: &self.value * &other.value }
    }
}

impl PartialEq for SquareClass {
    fn eq(&self, other: &Self) -> bool {
        let q = &self.value / &other.value;
        q.is_positive() && is_square(q.numer()) && is_square(q.denom())
    }
}

impl Eq for SquareClass {}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.representative() {
            Some((n, d)) if d.is_one() => write!(f, "{n}"),
            Some((n, d)) => write!(f, "{n}/{d}"),
            None => write!(f, "{}", self.value),
        }
    }
}

/// The four terms of Θ: subgroup, coefficient, pairing scale.
fn theta_terms(p: u64) -> [(SubgroupTag, i32, BigRational); 4] {
    let p = p as i64;
    [
        (SubgroupTag::Trivial, 1, rat(1)),
        (SubgroupTag::Order2, -2, rat(2).recip()),
        (SubgroupTag::Cyclic(1), -1, rat(p).recip()),
        (SubgroupTag::Dihedral(1), 2, rat(2 * p).recip()),
    ]
}

pub fn regulator_constant(rep: &RationalRep, pairing: &Matrix) -> Result<SquareClass> {
    let mut total = BigRational::one();
    for (h, coef, scale) in theta_terms(rep.p) {
        let v = rep.fixed_subspace(h);
        if v.cols() == 0 {
            continue;
        }
        let gram = (&(&v.transpose() * pairing) * &v).scale(&scale);
        let det = gram.det();
        if det.is_zero() {
            return Err(Error::DegeneratePairing(h.to_string()));
        }
        let factor = if coef < 0 { det.recip() } else { det };
        for _ in 0..coef.unsigned_abs() {
            total *= &factor;
        }
    }
    Ok(SquareClass::new(total).expect("nonzero product"))
}

/// C_Θ computed with the identity matrix as seed.
pub fn regulator_constant_default(rep: &RationalRep) -> Result<SquareClass> {
    let seed = Matrix::identity(rep.dim());
    regulator_constant(rep, &invariant_pairing(rep, &seed)?)
}

/// dim ρ^{1} − 2·dim ρ^{D₂} − dim ρ^{C_p} + 2·dim ρ^{G}, zero for any ρ.
pub fn theta_dimension_defect(rep: &RationalRep) -> i64 {
    theta_terms(rep.p)
        .iter()
        .map(|(h, coef, _)| *coef as i64 * rep.fixed_subspace(*h).cols() as i64)
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipRow {
    pub basis: &'static str,
    pub multiplicity: i64,
    pub ord_p_parity: u32,
    pub agrees: bool,
}

/// The congruence ⟨σ, ρ⟩ ≡ ord_p C_Θ(ρ) (mod 2) for ρ ∈ {1, η, ρ₂}.
pub fn t_theta_rows(sigma: &VirtualCharacter, p: u64) -> Result<Vec<MembershipRow>> {
    if p < 5 {
        return Err(Error::PrimeTooSmall(p));
    }
    if sigma.p() != p || sigma.group() != SubgroupTag::Dihedral(1) {
        return Err(Error::InvalidGroup(format!("expected a class function on D{}", 2 * p)));
    }
    if !sigma.is_self_dual() {
        return Err(Error::NotSelfDual);
    }
    let basis = [
        ("1", RationalRep::trivial(p)?),
        ("eta", RationalRep::eta(p)?),
        ("rho2", RationalRep::rho2(p)?),
    ];
    basis
        .into_iter()
        .map(|(name, rep)| {
            let chi = rep.character(sigma.field_level())?;
            let multiplicity = dihedral_reps::inner_product(sigma, &chi)?;
            let ord_p_parity = regulator_constant_default(&rep)?.ord_p_parity(p);
            Ok(MembershipRow {
                basis: name,
                multiplicity,
                ord_p_parity,
                agrees: multiplicity.rem_euclid(2) as u32 == ord_p_parity,
            })
        })
        .collect()
}

pub fn t_theta_member(sigma: &VirtualCharacter, p: u64) -> Result<bool> {
    Ok(t_theta_rows(sigma, p)?.iter().all(|r| r.agrees))
}

/// 1 ⊕ η ⊕ I(χ) on D_{2p}, with χ a faithful character of C_p.
pub fn one_eta_tau(p: u64) -> VirtualCharacter {
    let g = SubgroupTag::Dihedral(1);
    dihedral_reps::trivial(p, 1, g)
        + dihedral_reps::eta(p, 1, g)
        + dihedral_reps::induced_rotation_character(p, 1, 1, 1)
}
