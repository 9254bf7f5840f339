//! Both sides of the local identity
//! W(E/K_v, τ_v) / W(E/K_v, (1⊕η)_v) = (−1)^{ord_p C_v}
//! for every admissible local setting, plus enumeration, the p mod 12 tables
//! and the global product over bad primes.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime_u64, legendre, pow_mod, rational_valuation};
use crate::base_change::{self, admissible_pair, BaseReduction, PlaceData, QuadraticContext};
use crate::dihedral_reps::{self, SubgroupTag};
use crate::error::{Error, Result};
use crate::tate;
use crate::weierstrass::WeierstrassCurve;

pub const D2P: SubgroupTag = SubgroupTag::Dihedral(1);
pub const CP: SubgroupTag = SubgroupTag::Cyclic(1);

/// Valid δ for additive potentially good reduction when ℓ ≥ 5.
pub const POT_GOOD_DELTAS: [u32; 7] = [2, 3, 4, 6, 8, 9, 10];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalSetting {
    pub p: u64,
    pub ell: u64,
    pub r: u32,
    pub g_v: SubgroupTag,
    pub i_v: SubgroupTag,
    pub base: BaseReduction,
    pub eta_equals_chi: Option<bool>,
}

impl LocalSetting {
    pub fn new(
        p: u64,
        ell: u64,
        r: u32,
        g_v: SubgroupTag,
        i_v: SubgroupTag,
        base: BaseReduction,
        eta_equals_chi: Option<bool>,
    ) -> Result<Self> {
        let s = LocalSetting { p, ell, r, g_v: g_v.normalized(), i_v: i_v.normalized(), base, eta_equals_chi };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        check_p(self.p)?;
        if !is_prime_u64(self.ell) {
            return Err(Error::NotPrime(self.ell.to_string()));
        }
        if self.r == 0 {
            return Err(Error::InadmissibleSetting("r must be positive".into()));
        }
        admissible_pair(self.g_v, self.i_v)?;
        if self.g_v == D2P && self.ell != self.p && self.i_v != CP {
            return Err(Error::InadmissibleSetting(format!("l = {} != p forces I_v = Cp", self.ell)));
        }
        match self.base {
            BaseReduction::SplitMult(0) | BaseReduction::NonsplitMult(0) | BaseReduction::AdditivePotMult(0) => {
                return Err(Error::InadmissibleSetting("n must be >= 1".into()))
            }
            BaseReduction::AdditivePotGood(d) if self.ell > 3 && !POT_GOOD_DELTAS.contains(&d) => {
                return Err(Error::InadmissibleSetting(format!("delta = {d} is not a potentially good valuation")))
            }
            BaseReduction::AdditivePotGood(d) if d < 2 => {
                return Err(Error::InadmissibleSetting(format!("delta = {d} is too small for additive reduction")))
            }
            _ => {}
        }
        let needs_flag = matches!(self.base, BaseReduction::AdditivePotMult(_)) && self.i_v == D2P;
        if needs_flag != self.eta_equals_chi.is_some() {
            return Err(Error::InadmissibleSetting(
                "eta_equals_chi is given exactly for additive potentially multiplicative reduction with I_v = D2p"
                    .into(),
            ));
        }
        Ok(())
    }

    pub fn q_mod(&self, m: u64) -> u64 {
        pow_mod(self.ell % m, self.r as u64, m)
    }

    /// Class of χ, the character of K_v(√−c₆).
    pub fn chi(&self) -> Option<QuadCharClass> {
        match self.base {
            BaseReduction::SplitMult(_) => Some(QuadCharClass::Trivial),
            BaseReduction::NonsplitMult(_) => Some(QuadCharClass::Unramified),
            BaseReduction::AdditivePotMult(_) => Some(QuadCharClass::Ramified),
            _ => None,
        }
    }

    /// Class of η_v, the restriction of η to G_v, when G_v has one.
    pub fn eta_v(&self) -> Option<QuadCharClass> {
        match self.g_v {
            SubgroupTag::Dihedral(1) | SubgroupTag::Order2 => Some(if self.i_v == self.g_v {
                QuadCharClass::Ramified
            } else {
                QuadCharClass::Unramified
            }),
            _ => None,
        }
    }

    /// ⟨a, b⟩ for two quadratic characters of K_v.
    fn pairing(&self, a: QuadCharClass, b: QuadCharClass) -> u32 {
        match (a, b) {
            (QuadCharClass::Ramified, QuadCharClass::Ramified) => self.eta_equals_chi.unwrap_or(false) as u32,
            _ => (a == b) as u32,
        }
    }
}

impl fmt::Display for LocalSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} l={} r={} G={} I={} base={}", self.p, self.ell, self.r, self.g_v, self.i_v, self.base)?;
        match self.eta_equals_chi {
            Some(true) => write!(f, " eta=chi"),
            Some(false) => write!(f, " eta!=chi"),
            None => Ok(()),
        }
    }
}

fn check_p(p: u64) -> Result<()> {
    if p < 5 {
        return Err(Error::PrimeTooSmall(p));
    }
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuadCharClass {
    Trivial,
    Unramified,
    Ramified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideResult {
    pub sign: i8,
    pub trace: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalVerdict {
    pub setting: String,
    pub w_ratio: i8,
    pub c_parity: i8,
    pub equal: bool,
    pub case_trace: Vec<String>,
}

fn sign_of(exp: i64) -> i8 {
    if exp.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn quad_context(s: &LocalSetting) -> QuadraticContext {
    QuadraticContext {
        ell: s.ell,
        eta_ramified: s.eta_v() == Some(QuadCharClass::Ramified),
        chi_is_eta: s.eta_equals_chi.unwrap_or(false),
    }
}

/// Σ_w ord_p C_w(E/L^H) over the places of L^H above v.
fn ord_p_c(s: &LocalSetting, h: SubgroupTag, trace: &mut Vec<String>) -> Result<i64> {
    let places: Vec<PlaceData> = base_change::places(s.p, s.g_v, s.i_v, h)?;
    let mut total = 0i64;
    for (k, w) in places.iter().enumerate() {
        let res = base_change::base_change(s.base, *w, quad_context(s), s.p, s.r)?;
        if k == 0 {
            trace.push(format!(
                "H={h}: {} place(s), e={} f={} over={:?} c={} ord_p(omega)={}",
                places.len(),
                w.e,
                w.f,
                res.over,
                res.c_w,
                res.omega.exponent
            ));
        }
        total += res.ord_p as i64;
    }
    Ok(total)
}

fn c_branch(s: &LocalSetting) -> String {
    let g = match s.g_v {
        SubgroupTag::Trivial => return "G_v=1: C_v({1}), C_v(Cp) squares".into(),
        SubgroupTag::Cyclic(1) => return "G_v=Cp: C_v({1}), C_v(Cp) squares".into(),
        SubgroupTag::Order2 => return "G_v=D2: C_v = C_v(Cp)^(p-1)".into(),
        _ => "G_v=D2p",
    };
    let kind = match s.base {
        BaseReduction::Good => "good",
        b if b.is_potentially_multiplicative() => "pot-mult",
        _ if s.i_v == CP => "pot-good, I_v=Cp",
        _ if s.r.is_multiple_of(2) => "pot-good, I_v=D2p, r even",
        _ => "pot-good, I_v=D2p, r odd (p mod 12 table)",
    };
    format!("{g}: {kind}")
}

/// (−1)^{ord_p C_v}; only C_v({1}) and C_v(C_p) contribute to the parity.
pub fn c_parity(s: &LocalSetting) -> Result<SideResult> {
    s.validate()?;
    let mut trace = vec![format!("c: {}", c_branch(s))];
    let full = ord_p_c(s, SubgroupTag::Trivial, &mut trace)?;
    let cp = ord_p_c(s, CP, &mut trace)?;
    if let BaseReduction::SplitMult(n) = s.base {
        let k = crate::arith::valuation(&BigInt::from(n), s.p);
        trace.push(format!("ord_p(n)={k} cancels"));
    }
    trace.push(format!("ord_p C({{1}})={full} ord_p C(Cp)={cp}"));
    Ok(SideResult { sign: sign_of(full - cp), trace })
}

/// ε of the potentially good formula; it cancels in every ratio.
pub fn epsilon(p: u64, r: u32, frak_e: u32) -> i8 {
    if r.is_multiple_of(2) || frak_e == 1 {
        return 1;
    }
    let a = match frak_e {
        2 | 6 => -1,
        3 => -3,
        4 => -2,
        _ => return 1,
    };
    legendre(&BigInt::from(a), p)
}

pub fn frak_e(delta: u32) -> u32 {
    tate::semistability_defect(delta)
}

/// W(E/K_v, τ_v) / W(E/K_v, (1⊕η)_v).
pub fn w_ratio(s: &LocalSetting) -> Result<SideResult> {
    s.validate()?;
    let mut trace = Vec::new();
    let sign = match s.g_v {
        SubgroupTag::Trivial | SubgroupTag::Order2 => {
            let tau = dihedral_reps::induced_rotation_character(s.p, 1, 1, 1);
            let one_eta = dihedral_reps::trivial(s.p, 1, D2P) + dihedral_reps::eta(s.p, 1, D2P);
            let same = dihedral_reps::restrict(&tau, s.g_v)? == dihedral_reps::restrict(&one_eta, s.g_v)?;
            if !same {
                return Err(Error::InvalidRepresentation(format!("restrictions to {} differ", s.g_v)));
            }
            trace.push(format!("w: G_v={}: tau_v = (1+eta)_v", s.g_v));
            1
        }
        SubgroupTag::Cyclic(1) => {
            trace.push("w: G_v=Cp: both root numbers are 1".into());
            1
        }
        _ => match s.base {
            BaseReduction::Good => {
                trace.push("w: G_v=D2p: good reduction, unramified twist".into());
                1
            }
            b if b.is_potentially_multiplicative() => {
                let chi = s.chi().expect("potentially multiplicative");
                let eta_v = s.eta_v().expect("dihedral");
                let k = s.pairing(chi, QuadCharClass::Trivial) + s.pairing(chi, eta_v);
                trace.push(format!("w: G_v=D2p: pot-mult, chi={chi:?} eta_v={eta_v:?}, <chi,(1+eta)_v>={k}"));
                if k.is_multiple_of(2) {
                    1
                } else {
                    -1
                }
            }
            BaseReduction::AdditivePotGood(delta) if s.ell == s.p => {
                let e = frak_e(delta);
                let q = s.q_mod(e as u64);
                trace.push(format!("w: G_v=D2p: pot-good, l=p, frak_e={e}, eps={}", epsilon(s.p, s.r, e)));
                if s.r.is_multiple_of(2) || q == 1 % e as u64 {
                    trace.push("q = 1 mod frak_e".into());
                    1
                } else if q == e as u64 - 1 && matches!(e, 3 | 4 | 6) {
                    let eta_v = s.eta_v().expect("dihedral");
                    let k = 1 + s.pairing(QuadCharClass::Unramified, eta_v);
                    trace.push(format!("q = -1 mod frak_e, <1+eta_nr,1+eta_v>={k}"));
                    if k.is_multiple_of(2) {
                        1
                    } else {
                        -1
                    }
                } else {
                    return Err(Error::UnsupportedCase(format!("q = {q} mod {e}")));
                }
            }
            _ => {
                trace.push("w: G_v=D2p: pot-good, l!=p, epsilon_0 congruence".into());
                1
            }
        },
    };
    Ok(SideResult { sign, trace })
}

pub fn verify_local(s: &LocalSetting) -> Result<LocalVerdict> {
    let w = w_ratio(s)?;
    let c = c_parity(s)?;
    let mut case_trace = w.trace;
    case_trace.extend(c.trace);
    Ok(LocalVerdict {
        setting: s.to_string(),
        w_ratio: w.sign,
        c_parity: c.sign,
        equal: w.sign == c.sign,
        case_trace,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationBounds {
    pub max_n: u32,
    pub rs: Vec<u32>,
    pub ells: Vec<u64>,
    /// Drop tame settings whose Frobenius action is impossible.
    pub strict: bool,
}

impl Default for EnumerationBounds {
    fn default() -> Self {
        EnumerationBounds { max_n: 3, rs: vec![1, 2], ells: vec![2, 3, 5, 7, 11, 13], strict: false }
    }
}

/// Tame totally ramified inertia C_p needs q ≡ ±1 mod p (+ for C_p, − for D_{2p}).
pub fn realizable(s: &LocalSetting) -> bool {
    if s.ell == s.p || s.i_v != CP {
        return true;
    }
    let q = s.q_mod(s.p);
    match s.g_v {
        SubgroupTag::Cyclic(1) => q == 1,
        _ => q == s.p - 1,
    }
}

const PAIRS: [(SubgroupTag, SubgroupTag); 7] = [
    (SubgroupTag::Trivial, SubgroupTag::Trivial),
    (SubgroupTag::Order2, SubgroupTag::Trivial),
    (SubgroupTag::Order2, SubgroupTag::Order2),
    (CP, SubgroupTag::Trivial),
    (CP, CP),
    (D2P, CP),
    (D2P, D2P),
];

pub fn enumerate_settings(p: u64, bounds: &EnumerationBounds) -> Result<Vec<LocalSetting>> {
    check_p(p)?;
    let mut ells = bounds.ells.clone();
    ells.sort_unstable();
    ells.dedup();
    let mut rs = bounds.rs.clone();
    rs.sort_unstable();
    rs.dedup();
    let mut bases = vec![BaseReduction::Good];
    for n in 1..=bounds.max_n {
        bases.extend([BaseReduction::SplitMult(n), BaseReduction::NonsplitMult(n), BaseReduction::AdditivePotMult(n)]);
    }
    bases.extend(POT_GOOD_DELTAS.iter().map(|&d| BaseReduction::AdditivePotGood(d)));
    let mut out = Vec::new();
    for &ell in &ells {
        if !is_prime_u64(ell) {
            return Err(Error::NotPrime(ell.to_string()));
        }
        for &r in &rs {
            for &(g_v, i_v) in &PAIRS {
                if i_v == D2P && ell != p {
                    continue;
                }
                for &base in &bases {
                    let flags: &[Option<bool>] = if matches!(base, BaseReduction::AdditivePotMult(_)) && i_v == D2P {
                        &[Some(true), Some(false)]
                    } else {
                        &[None]
                    };
                    for &flag in flags {
                        let s = LocalSetting::new(p, ell, r, g_v, i_v, base, flag)?;
                        if !bounds.strict || realizable(&s) {
                            out.push(s);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Rows 𝔢 = 6, 4, 3, 2; columns p ≡ 1, 5, 7, 11 mod 12.
pub type ParityTable = [[i8; 4]; 4];

pub const TABLE_ROWS: [(u32, &str, [u32; 2]); 4] =
    [(6, "II,II*", [2, 10]), (4, "III,III*", [3, 9]), (3, "IV,IV*", [4, 8]), (2, "I0*", [6, 6])];
pub const TABLE_COLUMNS: [(u64, [u64; 2]); 4] = [(1, [13, 37]), (5, [5, 17]), (7, [7, 19]), (11, [11, 23])];

/// The printed table of (−1)^{ord_p C_v}, which both sides must reproduce.
pub const PRINTED_TABLE: ParityTable = [[1, -1, 1, -1], [1, 1, -1, -1], [1, -1, 1, -1], [1, 1, 1, 1]];

fn table_from(side: fn(&LocalSetting) -> Result<SideResult>) -> Result<ParityTable> {
    let mut t = [[0i8; 4]; 4];
    for (i, (_, label, deltas)) in TABLE_ROWS.iter().enumerate() {
        for (j, (_, primes)) in TABLE_COLUMNS.iter().enumerate() {
            let mut seen = None;
            for &delta in deltas {
                for &p in primes {
                    let s = LocalSetting::new(p, p, 1, D2P, D2P, BaseReduction::AdditivePotGood(delta), None)?;
                    let v = side(&s)?.sign;
                    if seen.is_some_and(|x| x != v) {
                        return Err(Error::UnsupportedCase(format!("row {label} is not constant on its class")));
                    }
                    seen = Some(v);
                }
            }
            t[i][j] = seen.expect("non-empty");
        }
    }
    Ok(t)
}

pub fn c_table() -> Result<ParityTable> {
    table_from(c_parity)
}

pub fn w_table() -> Result<ParityTable> {
    table_from(w_ratio)
}

/// Entries `(row, column)` where the tables differ.
pub fn compare_tables(a: &ParityTable, b: &ParityTable) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..4 {
        for j in 0..4 {
            if a[i][j] != b[i][j] {
                out.push((i, j));
            }
        }
    }
    out
}

pub fn render_table(t: &ParityTable) -> String {
    let mut s = format!("{:<16}", "type \\ p mod 12");
    for (res, _) in TABLE_COLUMNS {
        s.push_str(&format!("{res:>4}"));
    }
    s.push('\n');
    for (i, (e, label, _)) in TABLE_ROWS.iter().enumerate() {
        s.push_str(&format!("{:<16}", format!("{label} (e={e})")));
        for v in t[i] {
            s.push_str(&format!("{v:>4}"));
        }
        s.push('\n');
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalCompletion {
    pub g_v: SubgroupTag,
    pub i_v: SubgroupTag,
    pub eta_equals_chi: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalVerdict {
    pub w_product: i8,
    pub c_product: i8,
    pub equal: bool,
    pub locals: Vec<(u64, LocalVerdict)>,
}

/// Product of both sides over the bad primes of `curve`, with r = 1 at each.
pub fn global_parity(
    curve: &WeierstrassCurve,
    p: u64,
    completion: &BTreeMap<u64, LocalCompletion>,
) -> Result<GlobalVerdict> {
    check_p(p)?;
    let bad = tate::bad_primes(curve)
        .ok_or_else(|| Error::UnsupportedCase("discriminant could not be fully factored".into()))?;
    let j = curve.j_invariant();
    let mut locals = Vec::new();
    let (mut w, mut c) = (1i8, 1i8);
    for ell in bad {
        let comp = completion.get(&ell).ok_or_else(|| Error::MissingBadPrime(ell.to_string()))?;
        let data = tate::local_reduction(curve, ell)?;
        let ord_j = if j.is_zero() { 0 } else { rational_valuation(&j, ell) };
        let base = BaseReduction::from_local_data(&data, ord_j);
        let s = LocalSetting::new(p, ell, 1, comp.g_v, comp.i_v, base, comp.eta_equals_chi)?;
        let v = verify_local(&s)?;
        w *= v.w_ratio;
        c *= v.c_parity;
        locals.push((ell, v));
    }
    Ok(GlobalVerdict { w_product: w, c_product: c, equal: w == c, locals })
}
