//! Effectivity, nefness and h0/h1 of divisor classes on a K3 surface with a
//! given Picard lattice and nef polarization L.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{enumerate_classes, nikulin_exists, riemann_roch_chi, DivisorClass, Lattice, LatticeFile};

const REFLECTION_BUDGET: usize = 10_000;

/// The irreducible (-2)-curves up to the configured L-degree, split by degree.
#[derive(Clone, Debug)]
pub struct Curves {
    /// Contracted curves (L-degree 0).
    pub contracted: Vec<DivisorClass>,
    /// Irreducible curves of positive degree, sorted by (degree, coords).
    pub positive: Vec<DivisorClass>,
}

impl Curves {
    pub fn all(&self) -> impl Iterator<Item = &DivisorClass> {
        self.contracted.iter().chain(self.positive.iter())
    }
}

pub struct K3Config {
    pub lattice: Lattice,
    pub l: DivisorClass,
    pub search_degree_bound: i64,
    pub coeff_bound: i64,
    declared: Vec<DivisorClass>,
    curves: OnceLock<std::result::Result<Curves, Error>>,
}

impl Clone for K3Config {
    fn clone(&self) -> Self {
        K3Config {
            lattice: self.lattice.clone(),
            l: self.l.clone(),
            search_degree_bound: self.search_degree_bound,
            coeff_bound: self.coeff_bound,
            declared: self.declared.clone(),
            curves: OnceLock::new(),
        }
    }
}

impl std::fmt::Debug for K3Config {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("K3Config")
            .field("lattice", &self.lattice)
            .field("l", &self.l)
            .field("search_degree_bound", &self.search_degree_bound)
            .field("declared", &self.declared)
            .finish()
    }
}

/// A name marks a declared effective curve when it starts with Γ or G.
pub fn is_curve_name(name: &str) -> bool {
    name.starts_with('Γ') || name.starts_with('G')
}

impl K3Config {
    /// `declared` lists curves known to be effective; only the contracted
    /// ones matter, since they fix the sign of every root orthogonal to L.
    pub fn new(lattice: Lattice, l: DivisorClass, declared: Vec<DivisorClass>) -> Result<Self> {
        if l.len() != lattice.rank() {
            return Err(Error::LatticeMismatch(l.len(), lattice.rank()));
        }
        if !nikulin_exists(&lattice) {
            return Err(Error::Malformed("lattice is not even hyperbolic of rank <= 10".into()));
        }
        let l2 = lattice.square(&l);
        if l2 < 2 || l2 % 2 != 0 {
            return Err(Error::Malformed(format!("L^2 = {l2}")));
        }
        for d in &declared {
            if d.len() != lattice.rank() {
                return Err(Error::LatticeMismatch(d.len(), lattice.rank()));
            }
        }
        Ok(K3Config {
            lattice,
            l,
            search_degree_bound: l2,
            coeff_bound: 20,
            declared,
            curves: OnceLock::new(),
        })
    }

    pub fn with_bound(mut self, bound: i64) -> Self {
        self.search_degree_bound = bound;
        self.curves = OnceLock::new();
        self
    }

    /// L is the class named "L"; declared curves are the classes and basis
    /// vectors whose names start with Γ or G.
    pub fn from_file(f: &LatticeFile) -> Result<Self> {
        let l = f.class("L").cloned().ok_or_else(|| Error::Malformed("no class L".into()))?;
        let mut declared: Vec<DivisorClass> = Vec::new();
        for (i, n) in f.lattice.basis_names().iter().enumerate() {
            if is_curve_name(n) {
                declared.push(f.lattice.basis_vector(i));
            }
        }
        for (n, c) in &f.classes {
            if is_curve_name(n) && !declared.contains(c) {
                declared.push(c.clone());
            }
        }
        K3Config::new(f.lattice.clone(), l, declared)
    }

    pub fn declared(&self) -> &[DivisorClass] {
        &self.declared
    }

    pub fn dot(&self, a: &DivisorClass, b: &DivisorClass) -> i64 {
        self.lattice.dot(a, b)
    }

    pub fn sq(&self, a: &DivisorClass) -> i64 {
        self.lattice.square(a)
    }

    pub fn degree(&self, a: &DivisorClass) -> i64 {
        self.lattice.dot(a, &self.l)
    }

    pub fn genus(&self) -> i64 {
        self.sq(&self.l) / 2 + 1
    }

    pub fn curves(&self) -> Result<&Curves> {
        self.curves
            .get_or_init(|| compute_curves(self))
            .as_ref()
            .map_err(|e| e.clone())
    }
}

/// Solve sum n_j g_j = r over Q for independent g_j; None if r is outside
/// their span.
fn coefficients(lat: &Lattice, gens: &[DivisorClass], r: &DivisorClass) -> Result<Option<Vec<BigRational>>> {
    let k = gens.len();
    if k == 0 {
        return Ok(if r.is_zero() { Some(vec![]) } else { None });
    }
    let q = |x: i64| BigRational::from_integer(BigInt::from(x));
    let mut m: Vec<Vec<BigRational>> = (0..k)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..k).map(|j| q(lat.dot(&gens[i], &gens[j]))).collect();
            row.push(q(lat.dot(&gens[i], r)));
            row
        })
        .collect();
    for col in 0..k {
        let piv = (col..k).find(|&i| !m[i][col].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => return Err(Error::Malformed("declared contracted curves are dependent".into())),
        };
        m.swap(col, piv);
        for i in 0..k {
            if i != col && !m[i][col].is_zero() {
                let f = &m[i][col] / &m[col][col];
                for j in col..=k {
                    let v = &f * &m[col][j];
                    m[i][j] -= v;
                }
            }
        }
    }
    let n: Vec<BigRational> = (0..k).map(|i| &m[i][k] / &m[i][i]).collect();
    let mut back = vec![BigRational::zero(); r.len()];
    for (c, g) in n.iter().zip(gens) {
        for (b, x) in back.iter_mut().zip(&g.0) {
            *b += c * q(*x);
        }
    }
    let exact = back.iter().zip(&r.0).all(|(b, x)| *b == q(*x));
    Ok(if exact { Some(n) } else { None })
}

fn compute_curves(cfg: &K3Config) -> Result<Curves> {
    let lat = &cfg.lattice;
    for d in &cfg.declared {
        if cfg.degree(d) < 0 {
            return Err(Error::PolarizationNotNef(format!("L.{d} = {}", cfg.degree(d))));
        }
    }
    let gens: Vec<DivisorClass> = cfg
        .declared
        .iter()
        .filter(|d| cfg.degree(d) == 0 && lat.square(d) == -2)
        .cloned()
        .collect();
    let roots0 = enumerate_classes(lat, &cfg.l, -2, 0, 0)?;
    let mut positive0 = Vec::new();
    for r in &roots0 {
        let n = coefficients(lat, &gens, r)?.ok_or_else(|| Error::UnorientedRoot(r.clone()))?;
        if n.iter().any(|c| !c.is_integer()) {
            return Err(Error::UnorientedRoot(r.clone()));
        }
        if n.iter().all(|c| !c.is_negative()) {
            positive0.push(r.clone());
        } else if !n.iter().all(|c| !c.is_positive()) {
            return Err(Error::UnorientedRoot(r.clone()));
        }
    }
    // A positive root of a finite root system is simple iff it is not a sum
    // of two positive roots.
    let contracted: Vec<DivisorClass> = positive0
        .iter()
        .filter(|r| !positive0.iter().any(|p| positive0.contains(&(*r - p))))
        .cloned()
        .collect();
    // A root of positive degree is effective. It is irreducible iff it meets
    // every irreducible curve of smaller degree non-negatively: an effective
    // root has a component it meets negatively, and a same-degree component
    // would leave a contracted remainder that the root meets negatively.
    let mut positive: Vec<DivisorClass> = Vec::new();
    let mut roots = enumerate_classes(lat, &cfg.l, -2, 1, cfg.search_degree_bound)?;
    roots.sort_by_key(|r| (cfg.degree(r), r.clone()));
    for r in roots {
        let deg = cfg.degree(&r);
        let ok = contracted.iter().all(|g| lat.dot(&r, g) >= 0)
            && positive
                .iter()
                .take_while(|g| cfg.degree(g) < deg)
                .all(|g| lat.dot(&r, g) >= 0);
        if ok {
            positive.push(r);
        }
    }
    Ok(Curves { contracted, positive })
}

/// Irreducible (-2)-curves of L-degree between 0 and the search bound.
pub fn effective_roots(cfg: &K3Config) -> Result<Vec<DivisorClass>> {
    Ok(cfg.curves()?.all().cloned().collect())
}

/// First irreducible curve of degree at most `max_deg` meeting d negatively,
/// by (degree, coords).
fn negative_curve<'a>(cfg: &K3Config, curves: &'a Curves, d: &DivisorClass, max_deg: i64) -> Option<&'a DivisorClass> {
    let mut best: Option<&DivisorClass> = None;
    for g in curves.contracted.iter() {
        if cfg.dot(d, g) < 0 && best.is_none_or(|b| g < b) {
            best = Some(g);
        }
    }
    if best.is_some() {
        return best;
    }
    curves
        .positive
        .iter()
        .take_while(|g| cfg.degree(g) <= max_deg)
        .find(|g| cfg.dot(d, g) < 0)
}

pub fn is_nef(cfg: &K3Config, d: &DivisorClass) -> Result<bool> {
    let curves = cfg.curves()?;
    Ok(cfg.degree(d) >= 0 && cfg.sq(d) >= 0 && curves.all().all(|g| cfg.dot(d, g) >= 0))
}

/// Reflect d at curves it meets negatively until it is nef.
pub fn make_nef(cfg: &K3Config, d: &DivisorClass) -> Result<DivisorClass> {
    if d.len() != cfg.lattice.rank() {
        return Err(Error::LatticeMismatch(d.len(), cfg.lattice.rank()));
    }
    if cfg.sq(d) < 0 || cfg.degree(d) <= 0 {
        return Err(Error::NotInPositiveCone(d.clone()));
    }
    let curves = cfg.curves()?;
    let mut cur = d.clone();
    for _ in 0..REFLECTION_BUDGET {
        match negative_curve(cfg, curves, &cur, cfg.search_degree_bound) {
            None => return Ok(cur),
            Some(g) => {
                let k = cfg.dot(&cur, g);
                cur = &cur + &(k * g);
            }
        }
    }
    Err(Error::ReductionBudgetExceeded(REFLECTION_BUDGET))
}

/// Base point freeness of a nef class: for d^2 > 0 no elliptic E with
/// E.d = 1; a nef isotropic class is always a multiple of a pencil.
pub fn is_base_point_free(cfg: &K3Config, d: &DivisorClass) -> Result<bool> {
    let curves = cfg.curves()?;
    if let Some(g) = curves.all().find(|g| cfg.dot(d, g) < 0) {
        return Err(Error::NotNef(d.clone(), g.clone()));
    }
    let s = cfg.sq(d);
    if s < 0 || cfg.degree(d) < 0 {
        return Err(Error::NotNef(d.clone(), cfg.l.clone()));
    }
    if d.is_zero() {
        return Ok(true);
    }
    if s == 0 {
        // d = kE with E primitive and nef, hence an elliptic pencil.
        return Ok(true);
    }
    let e = enumerate_classes(&cfg.lattice, d, 0, 1, 1)?;
    Ok(e.is_empty())
}

/// h0 of a class, h1, and the fixed curves stripped on the way.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H0Verdict {
    pub value: Option<i64>,
    pub h1: Option<i64>,
    pub reduction_trace: Vec<DivisorClass>,
}

impl H0Verdict {
    fn undecided(trace: Vec<DivisorClass>) -> Self {
        H0Verdict { value: None, h1: None, reduction_trace: trace }
    }
}

/// Outcome of the effectivity walk.
enum Walk {
    NotEffective,
    Effective { h0: i64, moving: DivisorClass },
    Undecided,
}

/// Strip irreducible curves meeting the class negatively. For such a curve
/// C, d is effective iff d - C is, with the same h0, so the walk decides
/// effectivity as long as every curve of degree at most d.L is known.
fn walk(cfg: &K3Config, d: &DivisorClass, trace: &mut Vec<DivisorClass>) -> Result<Walk> {
    let curves = cfg.curves()?;
    let mut cur = d.clone();
    loop {
        if cur.is_zero() {
            return Ok(Walk::Effective { h0: 1, moving: cur });
        }
        let deg = cfg.degree(&cur);
        if deg < 0 {
            return Ok(Walk::NotEffective);
        }
        if deg > cfg.search_degree_bound {
            return Ok(Walk::Undecided);
        }
        match negative_curve(cfg, curves, &cur, deg) {
            Some(g) => {
                trace.push(g.clone());
                cur -= g;
            }
            None => {
                let s = cfg.sq(&cur);
                if deg == 0 {
                    // Nonzero and orthogonal to L: negative square, so an
                    // effective representative would meet a component
                    // negatively.
                    return Ok(Walk::NotEffective);
                }
                if s < -2 {
                    return Ok(Walk::NotEffective);
                }
                if s == -2 {
                    // Effective by Riemann-Roch yet meeting no curve negatively:
                    // only possible if the curve list is incomplete.
                    return Ok(Walk::Undecided);
                }
                let h0 = if s > 0 { s / 2 + 2 } else { cur.content() + 1 };
                return Ok(Walk::Effective { h0, moving: cur });
            }
        }
    }
}

pub fn h0(cfg: &K3Config, d: &DivisorClass) -> H0Verdict {
    let mut trace = Vec::new();
    let chi = match riemann_roch_chi(&cfg.lattice, d) {
        Ok(c) => c,
        Err(_) => return H0Verdict::undecided(trace),
    };
    let pos = walk(cfg, d, &mut trace);
    match pos {
        Ok(Walk::Effective { h0, .. }) => {
            // -d is not effective (d is a nonzero effective class) unless d = 0.
            H0Verdict { value: Some(h0), h1: Some(h0 - chi), reduction_trace: trace }
        }
        Ok(Walk::NotEffective) => {
            let mut t2 = Vec::new();
            let neg = walk(cfg, &-d, &mut t2);
            match neg {
                Ok(Walk::Effective { h0: h2, .. }) => {
                    H0Verdict { value: Some(0), h1: Some(h2 - chi), reduction_trace: trace }
                }
                Ok(Walk::NotEffective) => H0Verdict { value: Some(0), h1: Some(-chi), reduction_trace: trace },
                _ => H0Verdict { value: Some(0), h1: None, reduction_trace: trace },
            }
        }
        _ => H0Verdict::undecided(trace),
    }
}

/// h0 as a plain number, or the abstention as an error.
pub fn h0_value(cfg: &K3Config, d: &DivisorClass) -> Result<i64> {
    h0(cfg, d).value.ok_or_else(|| Error::Abstained(d.clone()))
}

pub fn h1_value(cfg: &K3Config, d: &DivisorClass) -> Result<i64> {
    h0(cfg, d).h1.ok_or_else(|| Error::Abstained(d.clone()))
}

/// Moving part and fixed part of an effective class.
pub fn decompose(cfg: &K3Config, d: &DivisorClass) -> Result<(DivisorClass, DivisorClass)> {
    let mut trace = Vec::new();
    match walk(cfg, d, &mut trace)? {
        Walk::Effective { mut moving, .. } => {
            // A nef big class kE + Γ with E.(kE + Γ) = 1 still has Γ fixed.
            if cfg.sq(&moving) > 0 {
                if let Some(e) = enumerate_classes(&cfg.lattice, &moving, 0, 1, 1)?.first() {
                    let k = cfg.sq(&moving) / 2 + 1;
                    moving = k * e;
                }
            }
            let fixed = d - &moving;
            Ok((moving, fixed))
        }
        Walk::NotEffective => Err(Error::Malformed(format!("{d} is not effective"))),
        Walk::Undecided => Err(Error::Abstained(d.clone())),
    }
}

pub fn is_effective(cfg: &K3Config, d: &DivisorClass) -> Result<bool> {
    Ok(h0_value(cfg, d)? > 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(gram: Vec<Vec<i64>>, l: Vec<i64>, declared: Vec<Vec<i64>>) -> K3Config {
        K3Config::new(
            Lattice::from_gram(gram).unwrap(),
            DivisorClass(l),
            declared.into_iter().map(DivisorClass).collect(),
        )
        .unwrap()
    }

    #[test]
    fn g5_rank_two() {
        let c = cfg(vec![vec![8, 3], vec![3, 0]], vec![1, 0], vec![]).with_bound(12);
        assert!(effective_roots(&c).unwrap().is_empty());
        let l = DivisorClass(vec![1, 0]);
        let e = DivisorClass(vec![0, 1]);
        let v = h0(&c, &l);
        assert_eq!(v.value, Some(6));
        assert_eq!(v.h1, Some(0));
        assert_eq!(h0(&c, &(&l - &(2 * &e))).value, Some(0));
        assert_eq!(h0(&c, &(&l - &e)).value, Some(3));
        let k = h0(&c, &(3 * &e));
        assert_eq!((k.value, k.h1), (Some(4), Some(2)));
        assert!(is_base_point_free(&c, &l).unwrap());
        assert!(is_base_point_free(&c, &e).unwrap());
    }

    #[test]
    fn elliptic_plus_section() {
        // E, G with E^2=0, E.G=1, G^2=-2; d = 2E + G has a base curve.
        let c = cfg(vec![vec![0, 1], vec![1, -2]], vec![3, 1], vec![vec![0, 1]]);
        let d = DivisorClass(vec![2, 1]);
        assert!(!is_base_point_free(&c, &d).unwrap());
        let v = h0(&c, &d);
        assert_eq!((v.value, v.h1), (Some(3), Some(0)));
        assert!(v.reduction_trace.is_empty());
        let (m, f) = decompose(&c, &d).unwrap();
        assert_eq!((m, f), (DivisorClass(vec![2, 0]), DivisorClass(vec![0, 1])));
    }

    #[test]
    fn reflection_to_nef() {
        let c = cfg(vec![vec![-2, 1], vec![1, 0]], vec![1, 3], vec![]);
        let d = DivisorClass(vec![1, 1]);
        assert_eq!(make_nef(&c, &d).unwrap(), DivisorClass(vec![0, 1]));
        let n = DivisorClass(vec![0, 1]);
        assert_eq!(make_nef(&c, &n).unwrap(), n);
    }

    #[test]
    fn contracted_chain() {
        // D, G1, G2 with D.G1 = 1, G1.G2 = 1, L = 5D + 3G1 + ... style chain.
        let gram = vec![vec![0, 1, 0, 0], vec![1, -2, 1, 0], vec![0, 1, -2, 1], vec![0, 0, 1, -2]];
        let l = vec![5, 3, 2, 1];
        let c = cfg(gram, l, vec![vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]);
        assert_eq!(c.sq(&c.l), 18);
        let curves = c.curves().unwrap();
        assert_eq!(curves.contracted, vec![DivisorClass(vec![0, 0, 0, 1]), DivisorClass(vec![0, 0, 1, 0])]);
        assert!(curves.positive.contains(&DivisorClass(vec![0, 1, 0, 0])));
        assert!(!curves.positive.contains(&DivisorClass(vec![0, 1, 1, 0])));
        // Sum of the two contracted curves is effective with h0 = 1.
        let s = DivisorClass(vec![0, 0, 1, 1]);
        assert_eq!(h0(&c, &s).value, Some(1));
        assert_eq!(h0(&c, &DivisorClass(vec![0, 0, 1, -1])).value, Some(0));
    }
}
