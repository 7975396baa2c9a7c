//! Sections of aH - bF on a smooth scroll as weighted monomials
//! P_m(t,u) Z_1^{i_1} ... Z_d^{i_d} with m = -b + sum i_k e_k.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scroll::{for_each_multi_index, ScrollType};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Monomial {
    pub index: Vec<i64>,
    /// Degree of the coefficient polynomial in (t,u).
    pub m: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialBasis {
    pub st: ScrollType,
    pub a: i64,
    pub b: i64,
    pub monomials: Vec<Monomial>,
}

impl MonomialBasis {
    /// Number of coefficients, sum of m + 1.
    pub fn slots(&self) -> i64 {
        self.monomials.iter().map(|x| x.m + 1).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Rolling-factors notation, monomials in lex-descending order.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        let mut seen_m: std::collections::BTreeMap<i64, usize> = Default::default();
        let mut consts = 0;
        for (n, mono) in self.monomials.iter().enumerate() {
            if n > 0 {
                out.push_str(" + ");
            }
            if mono.m == 0 {
                consts += 1;
                write!(out, "c_{consts}").unwrap();
            } else {
                let k = seen_m.entry(mono.m).or_insert(0);
                *k += 1;
                write!(out, "P_{{{},{}}}(t,u)", mono.m, k).unwrap();
            }
            for (v, &i) in mono.index.iter().enumerate() {
                match i {
                    0 => {}
                    1 => write!(out, "Z_{}", v + 1).unwrap(),
                    _ => write!(out, "Z_{}^{}", v + 1, i).unwrap(),
                }
            }
        }
        out
    }
}

/// All monomials of total degree a in Z with m = -b + sum i_k e_k >= 0.
pub fn basis(st: &ScrollType, a: i64, b: i64) -> MonomialBasis {
    let e = st.entries();
    let mut monomials = Vec::new();
    for_each_multi_index(e.len(), a, |idx| {
        let m = -b + idx.iter().zip(e).map(|(i, e)| i * e).sum::<i64>();
        if m >= 0 {
            monomials.push(Monomial { index: idx.to_vec(), m });
        }
    });
    MonomialBasis { st: st.clone(), a, b, monomials }
}

/// Every section of aH - bF lies in the ideal (Z_k : k in vars). Indices are
/// 1-based.
pub fn forced_factor(st: &ScrollType, a: i64, b: i64, vars: &BTreeSet<usize>) -> bool {
    basis(st, a, b)
        .monomials
        .iter()
        .all(|x| vars.iter().any(|&k| x.index.get(k - 1).is_some_and(|&i| i > 0)))
}

/// Restriction to the subscroll Z_k = 0 for k in kill (1-based).
pub fn restrict_subscroll(mb: &MonomialBasis, kill: &BTreeSet<usize>) -> MonomialBasis {
    let monomials = mb
        .monomials
        .iter()
        .filter(|x| kill.iter().all(|&k| x.index.get(k - 1).is_none_or(|&i| i == 0)))
        .cloned()
        .collect();
    MonomialBasis { st: mb.st.clone(), a: mb.a, b: mb.b, monomials }
}

/// Whether at least `need` of the twists in b_list leave a nonzero section on
/// the (1,...,1) subscroll cut out by kill.
pub fn cutting_capacity(
    st: &ScrollType,
    a: i64,
    b_list: &[i64],
    kill: &BTreeSet<usize>,
    need: usize,
) -> Result<bool> {
    let rest: Vec<i64> = st
        .entries()
        .iter()
        .enumerate()
        .filter(|(k, _)| !kill.contains(&(k + 1)))
        .map(|(_, &e)| e)
        .collect();
    if rest.is_empty() || rest.iter().any(|&e| e != 1) {
        return Err(Error::UnsupportedSubscroll(rest));
    }
    let count = b_list.iter().filter(|&&b| !restrict_subscroll(&basis(st, a, b), kill).is_empty()).count();
    Ok(count >= need)
}

/// Homogeneous coordinates X_{k,j} = t^j u^{e_k - j} Z_k, as text.
pub fn coordinate_names(st: &ScrollType) -> Vec<String> {
    let mut out = Vec::new();
    for (k, &e) in st.entries().iter().enumerate() {
        for j in 0..=e {
            out.push(format!("X_{{{},{}}} = t^{}u^{}Z_{}", k + 1, j, j, e - j, k + 1));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scroll::h0_scroll;

    fn st(s: &str) -> ScrollType {
        s.parse().unwrap()
    }

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn g7_cubic() {
        let mb = basis(&st("(3,1,1)"), 3, 3);
        assert_eq!(
            mb.pretty(),
            "P_{6,1}(t,u)Z_1^3 + P_{4,1}(t,u)Z_1^2Z_2 + P_{4,2}(t,u)Z_1^2Z_3 + P_{2,1}(t,u)Z_1Z_2^2 + \
             P_{2,2}(t,u)Z_1Z_2Z_3 + P_{2,3}(t,u)Z_1Z_3^2 + c_1Z_2^3 + c_2Z_2^2Z_3 + c_3Z_2Z_3^2 + c_4Z_3^3"
        );
        assert_eq!(mb.slots(), h0_scroll(&st("(3,1,1)"), 3, -3));
    }

    #[test]
    fn no_z3_cube() {
        let mb = basis(&st("(3,2,1)"), 3, 4);
        assert!(!mb.monomials.iter().any(|x| x.index == vec![0, 0, 3]));
        assert!(basis(&st("(3,2,1)"), 3, 10).is_empty());
    }

    #[test]
    fn factors() {
        for g in 8..14 {
            let t = ScrollType::new(vec![g - 4, 1, 1]).unwrap();
            assert!(forced_factor(&t, 3, g - 4, &set(&[1])));
        }
        assert!(!forced_factor(&st("(3,1,1)"), 3, 3, &set(&[1])));
        let t = st("(3,2,2,1,1,1)");
        assert!(forced_factor(&t, 2, 5, &set(&[1])));
        assert!(!forced_factor(&t, 2, 4, &set(&[1])));
        assert!(!forced_factor(&t, 2, 0, &set(&[1, 2])));
    }

    #[test]
    fn restriction() {
        let t = st("(3,2,2,1,1)");
        let r = restrict_subscroll(&basis(&t, 2, 1), &set(&[1, 2, 3]));
        let idx: Vec<_> = r.monomials.iter().map(|x| (x.index.clone(), x.m)).collect();
        assert_eq!(idx, vec![(vec![0, 0, 0, 2, 0], 1), (vec![0, 0, 0, 1, 1], 1), (vec![0, 0, 0, 0, 2], 1)]);
        let full = basis(&t, 2, 1);
        assert_eq!(restrict_subscroll(&full, &set(&[])), full);
        assert!(restrict_subscroll(&full, &set(&[1, 2, 3, 4, 5])).is_empty());
    }

    #[test]
    fn capacity() {
        let t = st("(2,2,2,2,1,1)");
        let kill = set(&[1, 2, 3, 4]);
        assert!(cutting_capacity(&t, 2, &[2, 2, 3], &kill, 2).unwrap());
        assert!(!cutting_capacity(&t, 2, &[2, 3, 3], &kill, 2).unwrap());
        assert!(cutting_capacity(&t, 2, &[], &kill, 0).unwrap());
        assert!(cutting_capacity(&t, 2, &[1], &set(&[1]), 1).is_err());
    }
}
