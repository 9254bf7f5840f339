//! Local invariants of E over the fields (L^H)_w, derived from the base
//! reduction type and the decomposition/inertia data of the D_{2p}-extension,
//! without re-running Tate's algorithm over extensions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dihedral_reps::{DihedralGroup, Element, SubgroupTag};
use crate::error::{Error, Result};
use crate::tate::{LocalReductionData, ReductionClass, SplitFlag};

/// Reduction of E over K_v as far as the parity computations need it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseReduction {
    Good,
    SplitMult(u32),
    NonsplitMult(u32),
    /// Additive, becoming multiplicative of type I_n over a quadratic extension.
    AdditivePotMult(u32),
    /// Additive, potentially good, with minimal discriminant valuation δ.
    AdditivePotGood(u32),
}

impl BaseReduction {
    pub fn is_semistable(self) -> bool {
        matches!(self, BaseReduction::Good | BaseReduction::SplitMult(_) | BaseReduction::NonsplitMult(_))
    }

    pub fn is_potentially_multiplicative(self) -> bool {
        matches!(
            self,
            BaseReduction::SplitMult(_) | BaseReduction::NonsplitMult(_) | BaseReduction::AdditivePotMult(_)
        )
    }

    /// Combines Tate's output with `ord_ℓ(j)` (only consulted for additive reduction).
    pub fn from_local_data(data: &LocalReductionData, ord_j: i64) -> Self {
        match data.reduction_class {
            ReductionClass::Good => BaseReduction::Good,
            ReductionClass::Multiplicative => match data.split {
                SplitFlag::Split => BaseReduction::SplitMult(data.delta),
                _ => BaseReduction::NonsplitMult(data.delta),
            },
            ReductionClass::Additive if ord_j < 0 => BaseReduction::AdditivePotMult((-ord_j) as u32),
            ReductionClass::Additive => BaseReduction::AdditivePotGood(data.delta),
        }
    }
}

impl fmt::Display for BaseReduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseReduction::Good => f.write_str("good"),
            BaseReduction::SplitMult(n) => write!(f, "split({n})"),
            BaseReduction::NonsplitMult(n) => write!(f, "nonsplit({n})"),
            BaseReduction::AdditivePotMult(n) => write!(f, "addmult({n})"),
            BaseReduction::AdditivePotGood(d) => write!(f, "addgood({d})"),
        }
    }
}

/// `(G_v, I_v)` pairs with I_v normal in G_v and G_v/I_v cyclic, up to conjugacy in D_{2p}.
pub fn admissible_pair(g_v: SubgroupTag, i_v: SubgroupTag) -> Result<()> {
    use SubgroupTag::*;
    let ok = matches!(
        (g_v.normalized(), i_v.normalized()),
        (Trivial, Trivial)
            | (Order2, Trivial)
            | (Order2, Order2)
            | (Cyclic(1), Trivial)
            | (Cyclic(1), Cyclic(1))
            | (Dihedral(1), Cyclic(1))
            | (Dihedral(1), Dihedral(1))
    );
    if ok {
        Ok(())
    } else {
        Err(Error::InadmissiblePair(format!("G_v = {g_v}, I_v = {i_v}")))
    }
}

fn check_subgroup_of_d2p(h: SubgroupTag) -> Result<()> {
    if h.shape().1 > 1 {
        return Err(Error::InvalidSubgroup(format!("{h} is not a subgroup of D2p")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalDegreeData {
    pub h: SubgroupTag,
    pub e: u32,
    pub f: u32,
}

/// A place w of L^H above v.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceData {
    pub e: u32,
    pub f: u32,
    /// The quadratic character η of G_v is trivial on Gal(L_z/(L^H)_w).
    pub kills_eta: bool,
}

fn group_elements(g: &DihedralGroup, tag: SubgroupTag) -> Vec<Element> {
    g.subgroup_elements(tag).expect("level checked")
}

/// Places of L^H above v, via the double cosets H\G/G_v.
pub fn places(p: u64, g_v: SubgroupTag, i_v: SubgroupTag, h: SubgroupTag) -> Result<Vec<PlaceData>> {
    admissible_pair(g_v, i_v)?;
    check_subgroup_of_d2p(h)?;
    let g = DihedralGroup::new(p, 1)?;
    let all = g.elements();
    let gv = group_elements(&g, g_v);
    let iv = group_elements(&g, i_v);
    let hs = group_elements(&g, h);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for &x in &all {
        if seen.contains(&x) {
            continue;
        }
        for &a in &hs {
            for &b in &gv {
                seen.insert(g.mul(g.mul(a, x), b));
            }
        }
        // Gal(L_z'/(L^H)_w) = H ∩ x G_v x⁻¹ for z' = x z
        let conj = |s: &[Element]| -> Vec<Element> { s.iter().map(|&y| g.conjugate(x, y)).collect() };
        let d_w: Vec<Element> = conj(&gv).into_iter().filter(|y| hs.contains(y)).collect();
        let i_w = conj(&iv).into_iter().filter(|y| hs.contains(y)).count();
        let e = (iv.len() / i_w) as u32;
        let degree = (gv.len() / d_w.len()) as u32;
        out.push(PlaceData { e, f: degree / e, kills_eta: d_w.iter().all(|y| !y.b) });
    }
    Ok(out)
}

/// e and f at the place of L^H below the fixed place z of L.
pub fn degrees(p: u64, g_v: SubgroupTag, i_v: SubgroupTag, h: SubgroupTag) -> Result<LocalDegreeData> {
    admissible_pair(g_v, i_v)?;
    check_subgroup_of_d2p(h)?;
    let g = DihedralGroup::new(p, 1)?;
    let gv = group_elements(&g, g_v);
    let iv = group_elements(&g, i_v);
    let hs = group_elements(&g, h);
    let d = gv.iter().filter(|y| hs.contains(y)).count();
    let i = iv.iter().filter(|y| hs.contains(y)).count();
    let e = (iv.len() / i) as u32;
    Ok(LocalDegreeData { h: h.normalized(), e, f: (gv.len() / d) as u32 / e })
}

/// A Tamagawa number that is either known exactly or only bounded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TamagawaValue {
    Exact(u64),
    OneOf(Vec<u64>),
}

impl TamagawaValue {
    /// ord_p, which vanishes on every bounded range once p ≥ 5.
    pub fn ord_p(&self, p: u64) -> u32 {
        match self {
            TamagawaValue::Exact(c) => crate::arith::valuation(&(*c).into(), p),
            TamagawaValue::OneOf(vals) => {
                debug_assert!(vals.iter().all(|v| v % p != 0));
                0
            }
        }
    }
}

impl fmt::Display for TamagawaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TamagawaValue::Exact(c) => write!(f, "{c}"),
            TamagawaValue::OneOf(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
        }
    }
}

/// c(E/(L^H)_w) from the base type, the ramification index and whether E
/// is split multiplicative over (L^H)_w.
pub fn tamagawa_over(base: BaseReduction, e: u32, acquires_split: bool, ell: u64) -> TamagawaValue {
    let small = || TamagawaValue::OneOf(vec![1, 2, 3, 4]);
    match base {
        BaseReduction::Good => TamagawaValue::Exact(1),
        BaseReduction::SplitMult(n) => TamagawaValue::Exact(n as u64 * e as u64),
        BaseReduction::NonsplitMult(n) if acquires_split => TamagawaValue::Exact(n as u64 * e as u64),
        BaseReduction::NonsplitMult(_) => TamagawaValue::OneOf(vec![1, 2]),
        BaseReduction::AdditivePotGood(_) => small(),
        BaseReduction::AdditivePotMult(n) if acquires_split && ell != 2 => TamagawaValue::Exact(n as u64 * e as u64),
        BaseReduction::AdditivePotMult(_) => small(),
    }
}

/// Reduction of E over (L^H)_w.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtensionReduction {
    Good,
    Split,
    Nonsplit,
    Additive,
    /// ℓ = 2 cases where the twisting character's behaviour is not determined.
    Undetermined,
}

/// Where the twisting quadratic character χ stands relative to η_v.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadraticContext {
    pub ell: u64,
    /// η_v (the quadratic character of G_v) is ramified.
    pub eta_ramified: bool,
    /// χ = η_v for a ramified χ.
    pub chi_is_eta: bool,
}

pub fn reduction_over(base: BaseReduction, place: &PlaceData, ctx: QuadraticContext) -> ExtensionReduction {
    let unramified_split = |f: u32| if f.is_multiple_of(2) { ExtensionReduction::Split } else { ExtensionReduction::Nonsplit };
    match base {
        BaseReduction::Good => ExtensionReduction::Good,
        BaseReduction::SplitMult(_) => ExtensionReduction::Split,
        BaseReduction::NonsplitMult(_) => unramified_split(place.f),
        BaseReduction::AdditivePotGood(_) => {
            if place.e == 1 {
                ExtensionReduction::Additive
            } else {
                ExtensionReduction::Undetermined
            }
        }
        BaseReduction::AdditivePotMult(_) => {
            if ctx.chi_is_eta && place.kills_eta {
                ExtensionReduction::Split
            } else if ctx.chi_is_eta {
                ExtensionReduction::Additive
            } else if ctx.eta_ramified && place.kills_eta {
                if ctx.ell == 2 {
                    ExtensionReduction::Undetermined
                } else {
                    // χ·η_v is the unramified quadratic character
                    unramified_split(place.f)
                }
            } else if place.e % 2 == 1 {
                ExtensionReduction::Additive
            } else {
                ExtensionReduction::Undetermined
            }
        }
    }
}

/// ord_p ω(H) with its parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaParity {
    pub exponent: u64,
    pub sign: i8,
}

impl OmegaParity {
    fn from_exponent(exponent: u64) -> Self {
        OmegaParity { exponent, sign: if exponent.is_multiple_of(2) { 1 } else { -1 } }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OmegaContext {
    pub ell: u64,
    pub p: u64,
    /// q = ℓ^r.
    pub r: u32,
    pub e: u32,
    pub f: u32,
    pub over: ExtensionReduction,
}

/// ord_p of ω(H) = |ω⁰_{K_v} / ω⁰_{(L^H)_w}|, a power of q.
pub fn omega_ordp_parity(base: BaseReduction, ctx: OmegaContext) -> Result<OmegaParity> {
    if base.is_semistable() || ctx.ell != ctx.p {
        return Ok(OmegaParity::from_exponent(0));
    }
    if ctx.ell <= 3 {
        return Err(Error::UnsupportedCase(format!("differential quotient at residue characteristic {}", ctx.ell)));
    }
    let (r, e, f) = (ctx.r as u64, ctx.e as u64, ctx.f as u64);
    let exponent = match base {
        BaseReduction::AdditivePotGood(delta) => r * f * ((delta as u64 * e) / 12),
        BaseReduction::AdditivePotMult(_) => match ctx.over {
            // δ = n + 6 over K_v and δ_H = n·e over the extension
            ExtensionReduction::Split | ExtensionReduction::Nonsplit if e % 2 == 0 => r * (e * f / 2),
            // I_n* becomes I_{ne}*: δ_H = n·e + 6
            ExtensionReduction::Additive if e % 2 == 1 => r * ((e - 1) * f / 2),
            other => {
                return Err(Error::UnsupportedCase(format!(
                    "additive potentially multiplicative reduction becoming {other:?} with e = {e}"
                )))
            }
        },
        _ => unreachable!("semistable handled above"),
    };
    Ok(OmegaParity::from_exponent(exponent))
}

/// C_w = c_w · ω(H) at one place, reduced to what ord_p needs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseChangeResult {
    pub place: PlaceData,
    pub over: ExtensionReduction,
    pub c_w: TamagawaValue,
    pub omega: OmegaParity,
    /// ord_p C_w.
    pub ord_p: u64,
}

pub fn base_change(
    base: BaseReduction,
    place: PlaceData,
    quad: QuadraticContext,
    p: u64,
    r: u32,
) -> Result<BaseChangeResult> {
    let over = reduction_over(base, &place, quad);
    let c_w = tamagawa_over(base, place.e, over == ExtensionReduction::Split, quad.ell);
    let omega = omega_ordp_parity(base, OmegaContext { ell: quad.ell, p, r, e: place.e, f: place.f, over })?;
    let ord_p = c_w.ord_p(p) as u64 + omega.exponent;
    Ok(BaseChangeResult { place, over, c_w, omega, ord_p })
}
