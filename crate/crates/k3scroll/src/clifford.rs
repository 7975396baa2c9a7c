//! Clifford index of the polarization, Clifford divisors and case tags.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cohomology::{decompose, h0, h0_value, h1_value, is_base_point_free, is_nef, K3Config};
use crate::error::{Error, Result};
use crate::lattice::{enumerate_classes, DivisorClass};
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseTag {
    General,
    Q,
    E0,
    E1,
    E2,
    E3,
    E4,
    C1_0,
    C1_0a,
    C2_0,
    C2_0a,
    C2_0b,
    C2_0c,
    C2_2,
    C2_2a,
    C2_2b,
    C2_4,
    C3_0,
    C3_0a,
    C3_0b,
    C3_0c,
    C3_2,
    C3_2a,
    C3_4,
    CG1,
    CG2,
    CG3,
    CG4,
    CG5,
    CG6,
    CG7,
    CG1p,
    CG2p,
    CG3p,
    CG4p,
}

impl CaseTag {
    pub const ALL: [CaseTag; 35] = [
        CaseTag::General,
        CaseTag::Q,
        CaseTag::E0,
        CaseTag::E1,
        CaseTag::E2,
        CaseTag::E3,
        CaseTag::E4,
        CaseTag::C1_0,
        CaseTag::C1_0a,
        CaseTag::C2_0,
        CaseTag::C2_0a,
        CaseTag::C2_0b,
        CaseTag::C2_0c,
        CaseTag::C2_2,
        CaseTag::C2_2a,
        CaseTag::C2_2b,
        CaseTag::C2_4,
        CaseTag::C3_0,
        CaseTag::C3_0a,
        CaseTag::C3_0b,
        CaseTag::C3_0c,
        CaseTag::C3_2,
        CaseTag::C3_2a,
        CaseTag::C3_4,
        CaseTag::CG1,
        CaseTag::CG2,
        CaseTag::CG3,
        CaseTag::CG4,
        CaseTag::CG5,
        CaseTag::CG6,
        CaseTag::CG7,
        CaseTag::CG1p,
        CaseTag::CG2p,
        CaseTag::CG3p,
        CaseTag::CG4p,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseTag::General => "General",
            CaseTag::Q => "Q",
            CaseTag::E0 => "E0",
            CaseTag::E1 => "E1",
            CaseTag::E2 => "E2",
            CaseTag::E3 => "E3",
            CaseTag::E4 => "E4",
            CaseTag::C1_0 => "C1_0",
            CaseTag::C1_0a => "C1_0a",
            CaseTag::C2_0 => "C2_0",
            CaseTag::C2_0a => "C2_0a",
            CaseTag::C2_0b => "C2_0b",
            CaseTag::C2_0c => "C2_0c",
            CaseTag::C2_2 => "C2_2",
            CaseTag::C2_2a => "C2_2a",
            CaseTag::C2_2b => "C2_2b",
            CaseTag::C2_4 => "C2_4",
            CaseTag::C3_0 => "C3_0",
            CaseTag::C3_0a => "C3_0a",
            CaseTag::C3_0b => "C3_0b",
            CaseTag::C3_0c => "C3_0c",
            CaseTag::C3_2 => "C3_2",
            CaseTag::C3_2a => "C3_2a",
            CaseTag::C3_4 => "C3_4",
            CaseTag::CG1 => "CG1",
            CaseTag::CG2 => "CG2",
            CaseTag::CG3 => "CG3",
            CaseTag::CG4 => "CG4",
            CaseTag::CG5 => "CG5",
            CaseTag::CG6 => "CG6",
            CaseTag::CG7 => "CG7",
            CaseTag::CG1p => "CG1p",
            CaseTag::CG2p => "CG2p",
            CaseTag::CG3p => "CG3p",
            CaseTag::CG4p => "CG4p",
        }
    }

    /// Notation as printed in tables: {c,D^2} with a variant letter, (E0),
    /// (CG1)' and so on.
    pub fn notation(self) -> String {
        let n = self.name();
        if let Some(rest) = n.strip_prefix('C').filter(|r| r.starts_with(|ch: char| ch.is_ascii_digit())) {
            let (cd, var) = match rest.find(|ch: char| ch.is_ascii_alphabetic()) {
                Some(i) => (&rest[..i], &rest[i..]),
                None => (rest, ""),
            };
            let (c, d) = cd.split_once('_').unwrap();
            return if var.is_empty() { format!("{{{c},{d}}}") } else { format!("{{{c},{d}}}^{var}") };
        }
        match n.strip_suffix('p') {
            Some(base) if n.starts_with("CG") => format!("({base})'"),
            _ => format!("({n})"),
        }
    }

    pub fn parse(s: &str) -> Option<CaseTag> {
        CaseTag::ALL.iter().copied().find(|t| t.name() == s)
    }

    pub fn is_e12(self) -> bool {
        matches!(self, CaseTag::E1 | CaseTag::E2 | CaseTag::C2_2a | CaseTag::C2_2b)
    }

    pub fn is_e0(self) -> bool {
        matches!(self, CaseTag::E0 | CaseTag::C3_4)
    }

    pub fn is_cg(self) -> bool {
        self.name().starts_with("CG")
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Perfect {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliffordData {
    pub g: i64,
    pub c: i64,
    /// None when no class computes a Clifford index (mu is infinite).
    pub mu: Option<i64>,
    #[serde(rename = "D")]
    pub d: Option<DivisorClass>,
    pub case_tag: CaseTag,
    pub aux: BTreeMap<String, DivisorClass>,
    pub perfect: Perfect,
    /// Every free Clifford divisor found, in tie-break order.
    pub free_divisors: Vec<DivisorClass>,
}

impl CliffordData {
    pub fn dsq(&self, cfg: &K3Config) -> Option<i64> {
        self.d.as_ref().map(|d| cfg.sq(d))
    }

    pub fn divisor(&self) -> Result<&DivisorClass> {
        self.d.as_ref().ok_or_else(|| Error::NotCliffordDivisor("no Clifford divisor".into()))
    }
}

pub fn clifford_upper(g: i64) -> i64 {
    (g - 1) / 2
}

fn value(cfg: &K3Config, x: &DivisorClass) -> i64 {
    cfg.degree(x) - cfg.sq(x) - 2
}

/// Classes x with h0(x) >= 2, h0(L-x) >= 2, x.L <= L^2/2 and
/// x.L - x^2 - 2 <= c_upper, together with their value.
fn candidates(cfg: &K3Config) -> Result<Vec<(DivisorClass, i64)>> {
    let l2 = cfg.sq(&cfg.l);
    let cu = clifford_upper(cfg.genus());
    let squares: Vec<i64> = (-2..=cu + 2).filter(|s| s % 2 == 0).collect();
    let per_square = par::map(&squares, |&s| -> Result<Vec<(DivisorClass, i64)>> {
        let kmax = (l2 / 2).min(cu + s + 2);
        let xs = enumerate_classes(&cfg.lattice, &cfg.l, s, 1, kmax)?;
        let mut out = Vec::new();
        for x in xs {
            let hx = h0(cfg, &x).value.ok_or_else(|| Error::AbstainedCandidate(x.clone()))?;
            if hx < 2 {
                continue;
            }
            let f = &cfg.l - &x;
            let hf = h0(cfg, &f).value.ok_or_else(|| Error::AbstainedCandidate(f.clone()))?;
            if hf < 2 {
                continue;
            }
            let v = value(cfg, &x);
            out.push((x, v));
        }
        Ok(out)
    });
    let mut all = Vec::new();
    for p in per_square {
        all.extend(p?);
    }
    all.sort_by_key(|(x, v)| (*v, cfg.sq(x), cfg.degree(x), x.clone()));
    Ok(all)
}

/// (C2): D.L <= F.L, and on equality L ~ 2D or h0(2D - L) = 0.
fn satisfies_c2(cfg: &K3Config, d: &DivisorClass) -> Result<bool> {
    let f = &cfg.l - d;
    let (dl, fl) = (cfg.degree(d), cfg.degree(&f));
    if dl > fl {
        return Ok(false);
    }
    if dl < fl {
        return Ok(true);
    }
    let two_d_minus_l = &(2 * d) - &cfg.l;
    Ok(two_d_minus_l.is_zero() || h0_value(cfg, &two_d_minus_l)? == 0)
}

/// (C4) and (C5): the fixed part of L - D is contracted by L, and |D| is base
/// point free with smooth general member.
fn is_free(cfg: &K3Config, d: &DivisorClass) -> Result<bool> {
    let s = cfg.sq(d);
    if s < 0 || !is_nef(cfg, d)? || !is_base_point_free(cfg, d)? {
        return Ok(false);
    }
    if s == 0 && d.content() != 1 {
        return Ok(false);
    }
    let f = &cfg.l - d;
    let (_, delta) = decompose(cfg, &f)?;
    Ok(cfg.degree(&delta) == 0)
}

fn is_e12_shape(cfg: &K3Config, c: i64, d: &DivisorClass) -> Result<bool> {
    let r = &cfg.l - &(2 * d);
    Ok(cfg.sq(d) == c && cfg.sq(&r) == -4 && h0_value(cfg, &r)? > 0)
}

/// Contracted curves meeting D positively.
pub fn r_set(cfg: &K3Config, d: &DivisorClass) -> Result<Vec<DivisorClass>> {
    let curves = cfg.curves()?;
    let out: Vec<DivisorClass> = curves.contracted.iter().filter(|g| cfg.dot(g, d) > 0).cloned().collect();
    if let Some(g) = out.iter().find(|g| cfg.dot(g, d) != 1) {
        return Err(Error::CaseConflict(
            format!("contracted curve {g} meets D in {}", cfg.dot(g, d)),
            "every contracted curve meets a free Clifford divisor at most once".into(),
        ));
    }
    Ok(out)
}

/// Minimize over candidates, then pick a free Clifford divisor by (C2), (C5),
/// maximality (C6), the preference (C7), and (D^2, D.L, coords).
pub fn clifford_index(cfg: &K3Config) -> Result<CliffordData> {
    if !is_base_point_free(cfg, &cfg.l)? {
        return Err(Error::NotCliffordDivisor("L is not base point free".into()));
    }
    let g = cfg.genus();
    let cu = clifford_upper(g);
    let cands = candidates(cfg)?;
    let mu = cands.first().map(|(_, v)| *v);
    let c = mu.map_or(cu, |m| m.min(cu));
    let minimizers: Vec<DivisorClass> = cands.iter().filter(|(_, v)| *v == c).map(|(x, _)| x.clone()).collect();
    let mut free = Vec::new();
    for x in &minimizers {
        if satisfies_c2(cfg, x)? && is_free(cfg, x)? {
            free.push(x.clone());
        }
    }
    let chosen = choose(cfg, c, &free)?;
    let mut cd = CliffordData {
        g,
        c,
        mu,
        d: chosen,
        case_tag: CaseTag::General,
        aux: BTreeMap::new(),
        perfect: Perfect::Unknown,
        free_divisors: free,
    };
    cd = tag_case(cfg, cd)?;
    Ok(cd)
}

fn choose(cfg: &K3Config, c: i64, free: &[DivisorClass]) -> Result<Option<DivisorClass>> {
    if free.is_empty() {
        return Ok(None);
    }
    let mut c6 = Vec::new();
    for d in free {
        if satisfies_c6(cfg, c, d, free)? {
            c6.push(d.clone());
        }
    }
    let pool = if c6.is_empty() { free.to_vec() } else { c6 };
    let mut non_e12 = Vec::new();
    for d in &pool {
        if !is_e12_shape(cfg, c, d)? {
            non_e12.push(d.clone());
        }
    }
    let pool = if non_e12.is_empty() { pool } else { non_e12 };
    Ok(pool.into_iter().min_by_key(|d| (cfg.sq(d), cfg.degree(d), d.clone())))
}

/// No other free Clifford divisor contains D, unless L - D has a base divisor
/// and the larger one is of type (E1)/(E2).
fn satisfies_c6(cfg: &K3Config, c: i64, d: &DivisorClass, free: &[DivisorClass]) -> Result<bool> {
    let (_, delta) = decompose(cfg, &(&cfg.l - d))?;
    for other in free {
        if other == d {
            continue;
        }
        let diff = other - d;
        if h0_value(cfg, &diff)? > 0 && (delta.is_zero() || !is_e12_shape(cfg, c, other)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Clifford data for a prescribed divisor D, checked to be a free Clifford
/// divisor computing the Clifford index.
pub fn with_divisor(cfg: &K3Config, d: &DivisorClass) -> Result<CliffordData> {
    let mut cd = clifford_index(cfg)?;
    if cd.d.as_ref() == Some(d) {
        return Ok(cd);
    }
    let v = value(cfg, d);
    if v != cd.c {
        return Err(Error::NotCliffordDivisor(format!("D.L - D^2 - 2 = {v} but c = {}", cd.c)));
    }
    if h0_value(cfg, d)? < 2 || h0_value(cfg, &(&cfg.l - d))? < 2 {
        return Err(Error::NotCliffordDivisor(format!("{d} does not move with L - D")));
    }
    if !satisfies_c2(cfg, d)? {
        return Err(Error::NotCliffordDivisor(format!("{d} violates the ordering condition")));
    }
    if !is_free(cfg, d)? {
        return Err(Error::NotCliffordDivisor(format!("{d} is not free")));
    }
    cd.d = Some(d.clone());
    cd.aux.clear();
    tag_case(cfg, cd)
}

/// Refine the tag of cd from lattice-level evidence, fill aux classes and the
/// perfectness verdict.
pub fn tag_case(cfg: &K3Config, mut cd: CliffordData) -> Result<CliffordData> {
    let g = cd.g;
    let cu = clifford_upper(g);
    let c = cd.c;
    cd.aux.clear();
    let Some(d) = cd.d.clone() else {
        cd.case_tag = CaseTag::General;
        cd.perfect = Perfect::Unknown;
        return Ok(cd);
    };
    let l = cfg.l.clone();
    let s = cfg.sq(&d);
    let f = &l - &d;
    let r = &l - &(2 * &d);
    let (fmov, delta) = decompose(cfg, &f)?;
    let a = &fmov - &d;
    let rset = r_set(cfg, &d)?;
    cd.aux.insert("F".into(), f.clone());
    cd.aux.insert("R".into(), r.clone());
    cd.aux.insert("Δ".into(), delta.clone());
    cd.aux.insert("A".into(), a.clone());
    for (i, gm) in rset.iter().enumerate() {
        cd.aux.insert(format!("Γ{}", i + 1), gm.clone());
    }
    let h0r = h0_value(cfg, &r)?;
    let h1r = h1_value(cfg, &r)?;
    let d_delta = cfg.dot(&d, &delta);

    if c == cu {
        cd.case_tag = if bn_general(cfg)? { CaseTag::General } else { cg_tag(cfg, g, &d, &r, h0r, &rset)? };
        cd.perfect = Perfect::Unknown;
        return Ok(cd);
    }

    let tag = if r.is_zero() {
        if c == 2 {
            CaseTag::C2_4
        } else {
            CaseTag::Q
        }
    } else if s == c + 1 {
        match c {
            3 => CaseTag::C3_4,
            _ => CaseTag::E0,
        }
    } else if c == 0 && e3_e4(cfg, &d)?.is_some() {
        e3_e4(cfg, &d)?.unwrap()
    } else if is_e12_shape(cfg, c, &d)? {
        let two = rset.len() == 2;
        match (c, two) {
            (2, true) => CaseTag::C2_2a,
            (2, false) => CaseTag::C2_2b,
            (_, true) => CaseTag::E1,
            (_, false) => CaseTag::E2,
        }
    } else if h1r == 0 {
        match (c, s) {
            (1, 0) => CaseTag::C1_0,
            (2, 0) => CaseTag::C2_0,
            (2, 2) => CaseTag::C2_2,
            (3, 0) => CaseTag::C3_0,
            (3, 2) => CaseTag::C3_2,
            _ => CaseTag::General,
        }
    } else {
        let variant = match d_delta {
            1 => 'a',
            2 if rset.len() >= 2 => 'b',
            2 => 'c',
            _ => '?',
        };
        match (c, s, variant) {
            (1, 0, 'a') => CaseTag::C1_0a,
            (2, 0, 'a') => CaseTag::C2_0a,
            (2, 0, 'b') => CaseTag::C2_0b,
            (2, 0, 'c') => CaseTag::C2_0c,
            (3, 0, 'a') => CaseTag::C3_0a,
            (3, 0, 'b') => CaseTag::C3_0b,
            (3, 0, 'c') => CaseTag::C3_0c,
            (3, 2, 'a') => CaseTag::C3_2a,
            _ => {
                return Err(Error::CaseConflict(
                    format!("h1(L-2D) = {h1r} with D.Δ = {d_delta}"),
                    format!("no listed case for c = {c}, D^2 = {s}"),
                ))
            }
        }
    };
    cd.case_tag = tag;

    // h1(L - 2D) = D.Δ - 1 in (E0)-(E2), D.Δ otherwise, when R > 0.
    let expected = if tag.is_e0() || tag.is_e12() { d_delta - 1 } else { d_delta };
    let identity = r.is_zero() || h0r == 0 || h1r == expected;
    let free = cd.free_divisors.clone();
    let c6 = satisfies_c6(cfg, c, &d, &free)?;
    cd.perfect = if identity && c6 {
        Perfect::Yes
    } else if identity {
        Perfect::Unknown
    } else {
        Perfect::No
    };
    Ok(cd)
}

fn e3_e4(cfg: &K3Config, d: &DivisorClass) -> Result<Option<CaseTag>> {
    let l2 = cfg.sq(&cfg.l);
    if cfg.sq(d) != 0 {
        return Ok(None);
    }
    if l2 == 8 {
        let rest = &cfg.l - &(4 * d);
        if rest.0.iter().all(|x| x % 2 == 0) {
            let gm = DivisorClass(rest.0.iter().map(|x| x / 2).collect());
            if cfg.sq(&gm) == -2 && cfg.dot(&gm, d) == 1 && h0_value(cfg, &gm)? > 0 {
                return Ok(Some(CaseTag::E4));
            }
        }
    }
    if l2 == 6 {
        let rest = &cfg.l - &(3 * d);
        if cfg.sq(&rest) == -6 && h0_value(cfg, &rest)? > 0 {
            return Ok(Some(CaseTag::E3));
        }
    }
    Ok(None)
}

fn cg_tag(
    cfg: &K3Config,
    g: i64,
    d: &DivisorClass,
    r: &DivisorClass,
    h0r: i64,
    rset: &[DivisorClass],
) -> Result<CaseTag> {
    let s = cfg.sq(d);
    if s != 2 || !(g == 8 || g == 10) {
        return Err(Error::CaseConflict(
            format!("g = {g}, D^2 = {s}"),
            "Clifford general but not BN general needs g = 8 or 10 and D^2 = 2".into(),
        ));
    }
    let prime = g == 10;
    let tag = match (prime, h0r, rset.len()) {
        (false, 0, 0) => CaseTag::CG1,
        (false, 0, 1) => CaseTag::CG2,
        (true, 0, 0) => CaseTag::CG1p,
        (true, 0, 1) => CaseTag::CG2p,
        (false, 1, 3) => CaseTag::CG3,
        (false, 1, 2) => CaseTag::CG4,
        (false, 1, 1) => {
            // Δ = L - 2D; the number of its components separates the last three.
            let curves = cfg.curves()?;
            let (_, delta) = decompose(cfg, r)?;
            let comps = curves.contracted.iter().filter(|gm| support_contains(cfg, &delta, gm)).count();
            match comps {
                5 => CaseTag::CG5,
                6 => CaseTag::CG6,
                7 => CaseTag::CG7,
                n => {
                    return Err(Error::CaseConflict(
                        format!("base divisor with {n} components"),
                        "expected 5, 6 or 7".into(),
                    ))
                }
            }
        }
        (true, 1, 2) => CaseTag::CG3p,
        (true, 1, 1) => CaseTag::CG4p,
        (_, h, n) => {
            return Err(Error::CaseConflict(
                format!("h0(L-2D) = {h}, |R_LD| = {n}"),
                "no listed Clifford general case".into(),
            ))
        }
    };
    Ok(tag)
}

/// Whether the curve gm is a component of the effective contracted class e.
fn support_contains(cfg: &K3Config, e: &DivisorClass, gm: &DivisorClass) -> bool {
    let rest = e - gm;
    matches!(h0(cfg, &rest).value, Some(v) if v > 0) || rest.is_zero()
}

/// No nontrivial decomposition L = M + N with h0(M) h0(N) >= g + 1. It
/// suffices to let M run over nef classes (moving parts).
pub fn bn_general(cfg: &K3Config) -> Result<bool> {
    let g = cfg.genus();
    let l2 = cfg.sq(&cfg.l);
    let squares: Vec<i64> = (0..l2).step_by(2).collect();
    let hits = par::map(&squares, |&s| -> Result<bool> {
        // Hodge index: s L^2 <= k^2.
        let kmin = (1..l2).find(|k| k * k >= s * l2).unwrap_or(l2);
        let xs = enumerate_classes(&cfg.lattice, &cfg.l, s, kmin, l2 - 1)?;
        for x in xs {
            if !is_nef(cfg, &x)? {
                continue;
            }
            let hx = h0_value(cfg, &x)?;
            if hx < 2 {
                continue;
            }
            let hn = h0(cfg, &(&cfg.l - &x)).value.ok_or_else(|| Error::Abstained(&cfg.l - &x))?;
            if hx * hn > g {
                return Ok(true);
            }
        }
        Ok(false)
    });
    for h in hits {
        if h? {
            return Ok(false);
        }
    }
    Ok(true)
}
