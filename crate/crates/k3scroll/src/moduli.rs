//! Dimension counts for scrolls and for the projective models inside them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rolling::basis;
use crate::scroll::{for_each_multi_index, h1_scroll, ScrollType};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuliData {
    pub delta1: i64,
    pub delta2: i64,
    pub delta3: i64,
    pub delta4: i64,
    pub num_moduli: i64,
    /// Dimension of the family of models inside one fixed scroll.
    pub family_dim_in_scroll: i64,
}

/// Sum over ordered pairs of max(0, e_i - e_j - 1).
pub fn delta1(st: &ScrollType) -> i64 {
    let e = st.entries();
    let mut s = 0;
    for &a in e {
        for &b in e {
            s += (a - b - 1).max(0);
        }
    }
    s
}

/// Dimension of the set of scrolls of type st in P^g.
pub fn scroll_family_dim(st: &ScrollType, g: i64) -> i64 {
    (g + 1) * (g + 1) - 3 - st.dim() * st.dim() - delta1(st)
}

fn check_c1(st: &ScrollType, g: i64) -> Result<[i64; 3]> {
    let e = st.entries();
    if e.len() != 3 || st.deg() != g - 2 {
        return Err(Error::NumericsMismatch(format!("{st} is not a 3-dimensional scroll of degree {}", g - 2)));
    }
    Ok([e[0], e[1], e[2]])
}

/// Closed five-term form, valid for e_1 >= e_2 >= e_3.
fn delta2_c1_closed(e: [i64; 3]) -> i64 {
    let [e1, e2, e3] = e;
    [e1 - e2 - 3, e1 - e3 - 3, e2 - e3 - 3, e1 + e2 - 2 * e3 - 3, e1 - 2 * e2 + e3 - 3]
        .iter()
        .map(|&x| x.max(0))
        .sum()
}

/// Sum of max(0, g - 5 - sum a_i e_i) over a with |a| = 3.
fn delta2_c1_multi(st: &ScrollType, g: i64) -> i64 {
    let mut s = 0;
    for_each_multi_index(3, 3, |a| {
        let w: i64 = a.iter().zip(st.entries()).map(|(a, e)| a * e).sum();
        s += (g - 5 - w).max(0);
    });
    s
}

/// h1 excess of 3H - (g-4)F, computed both ways.
pub fn delta2_c1(st: &ScrollType, g: i64) -> Result<i64> {
    let e = check_c1(st, g)?;
    let closed = delta2_c1_closed(e);
    let multi = delta2_c1_multi(st, g);
    if closed != multi {
        return Err(Error::NumericsMismatch(format!("delta2 of {st}: closed form {closed}, sum {multi}")));
    }
    Ok(closed)
}

pub fn moduli_c1(st: &ScrollType, g: i64) -> Result<ModuliData> {
    let d1 = delta1(st);
    let d2 = delta2_c1(st, g)?;
    if d1 < d2 {
        return Err(Error::ImpossibleType(st.to_string(), d1, d2));
    }
    Ok(ModuliData {
        delta1: d1,
        delta2: d2,
        delta3: 0,
        delta4: 0,
        num_moduli: 18 + d2 - d1,
        family_dim_in_scroll: 29 + d2,
    })
}

/// Why a smooth c = 1 scroll cannot carry a model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum C1Obstruction {
    /// Z_1 divides every section of 3H - (g-4)F.
    Z1Factor,
    /// No section has a Z_i Z_3^2 term, so every fiber cubic is singular on
    /// the last directrix.
    SingularAlongDirectrix,
}

/// Rolling-factors test on a smooth c = 1 scroll.
pub fn c1_obstruction(st: &ScrollType, g: i64) -> Result<Option<C1Obstruction>> {
    check_c1(st, g)?;
    let mb = basis(st, 3, g - 4);
    if mb.monomials.iter().all(|m| m.index[0] > 0) {
        return Ok(Some(C1Obstruction::Z1Factor));
    }
    if !mb.monomials.iter().any(|m| m.index[2] == 2) {
        return Ok(Some(C1Obstruction::SingularAlongDirectrix));
    }
    Ok(None)
}

/// Partitions of n into k positive parts, non-increasing, lex-descending.
fn partitions(n: i64, k: usize, min: i64) -> Vec<Vec<i64>> {
    fn rec(n: i64, k: usize, max: i64, min: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if k == 0 {
            if n == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for p in (min..=max.min(n)).rev() {
            if p * (k as i64) < n {
                break;
            }
            cur.push(p);
            rec(n - p, k - 1, p, min, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, n, min, &mut Vec::new(), &mut out);
    out
}

/// Smooth c = 1 scroll types in P^g that survive the rolling-factors test.
pub fn c1_smooth_types(g: i64) -> Vec<ScrollType> {
    partitions(g - 2, 3, 1)
        .into_iter()
        .filter_map(|p| ScrollType::new(p).ok())
        .filter(|st| matches!(c1_obstruction(st, g), Ok(None)))
        .collect()
}

/// Singular c = 1 types (a,b,0) in P^g whose raised type (a+1,b+1,1) is a
/// possible smooth type in P^{g+3}.
pub fn c1_singular_types(g: i64) -> Vec<ScrollType> {
    partitions(g - 2, 2, 0)
        .into_iter()
        .filter_map(|mut p| {
            p.push(0);
            ScrollType::new(p).ok()
        })
        .filter(|st| {
            let up = ScrollType::new(st.entries().iter().map(|e| e + 1).collect()).unwrap();
            matches!(c1_obstruction(&up, g + 3), Ok(None))
        })
        .collect()
}

pub fn moduli_c2(st: &ScrollType, b1: i64, g: i64) -> Result<ModuliData> {
    let e = st.entries();
    if e.len() != 4 || st.deg() != g - 3 {
        return Err(Error::NumericsMismatch(format!("{st} is not a 4-dimensional scroll of degree {}", g - 3)));
    }
    let b2 = g - 5 - b1;
    if b1 < b2 {
        return Err(Error::NumericsMismatch(format!("b1 = {b1} < b2 = {b2}")));
    }
    let sym2 = |b: i64| {
        let mut s = 0;
        for i in 0..4 {
            for j in i..4 {
                s += (b - e[i] - e[j] - 1).max(0);
            }
        }
        s
    };
    let (d3, d4) = (sym2(b1), sym2(b2));
    if d3 != h1_scroll(st, 2, -b1) || d4 != h1_scroll(st, 2, -b2) {
        return Err(Error::NumericsMismatch(format!("Sym^2 count of {st} disagrees with h1")));
    }
    let d1 = delta1(st);
    let d2 = (b1 - b2 - 1).max(0);
    Ok(ModuliData {
        delta1: d1,
        delta2: d2,
        delta3: d3,
        delta4: d4,
        num_moduli: 18 - d1 - d2 + d3 + d4,
        family_dim_in_scroll: 36 - d2 + d3 + d4,
    })
}

/// Dimension of the models of Clifford index c inside one scroll.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GeneralDim {
    /// Maximally balanced: exact, and 18 after quotienting by Aut(P^g).
    Exact { in_scroll: i64, projective: i64 },
    /// Otherwise only an upper bound (or the family is empty).
    AtMost(i64),
}

pub fn moduli_general(c: i64, delta1: i64) -> Result<GeneralDim> {
    if c < 1 || delta1 < 0 {
        return Err(Error::NumericsMismatch(format!("c = {c}, delta1 = {delta1}")));
    }
    let base = (c + 2) * (c + 2) + 20;
    Ok(if delta1 == 0 { GeneralDim::Exact { in_scroll: base, projective: 18 } } else { GeneralDim::AtMost(base + delta1) })
}

/// The c = 3 count 45 + delta2 - delta3. Not a theorem: it assumes the
/// matrix descriptions of a model form one orbit of dimension 25 + delta3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct C3Count {
    pub delta2: i64,
    pub delta3: i64,
    /// Choices of the ten skew entries, 70 + delta2.
    pub matrix_entries: i64,
    /// Choices of the change-of-basis matrix, 25 + delta3.
    pub base_change: i64,
    pub value: i64,
    pub conjectural: bool,
}

/// `a` are the quadric twists a_1 <= ... <= a_5; b_i = g - 6 - a_i.
pub fn moduli_c3(st: &ScrollType, a: &[i64], g: i64) -> Result<C3Count> {
    if st.dim() != 5 || a.len() != 5 || st.deg() != g - 4 {
        return Err(Error::NumericsMismatch(format!("{st} with a = {a:?} is not c = 3 data for g = {g}")));
    }
    if a.iter().sum::<i64>() != 2 * g - 12 {
        return Err(Error::NumericsMismatch(format!("sum of {a:?} is not 2g - 12")));
    }
    let b: Vec<i64> = a.iter().map(|x| g - 6 - x).collect();
    let mut d2 = 0;
    let mut d3 = 0;
    for i in 0..5 {
        for j in 0..i {
            d2 += h1_scroll(st, 1, a[j] - b[i]);
            d3 += ((a[i] - a[j]).abs() - 1).max(0);
        }
    }
    Ok(C3Count {
        delta2: d2,
        delta3: d3,
        matrix_entries: 70 + d2,
        base_change: 25 + d3,
        value: 45 + d2 - d3,
        conjectural: true,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
struct RawTable<R> {
    rows: Vec<R>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct C1Row {
    pub g: i64,
    pub st: ScrollType,
    pub num_moduli: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct C2Row {
    pub g: i64,
    pub st: ScrollType,
    pub b1: i64,
    pub smooth: bool,
    pub num_moduli: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct C2SingularRow {
    pub g: i64,
    pub st: ScrollType,
    pub b1: Vec<i64>,
    pub virt: String,
    /// False for the rows that need only a free (not perfect) divisor.
    pub perfect: bool,
}

fn st_of(e: Vec<i64>) -> ScrollType {
    ScrollType::new(e).expect("table scroll types are non-negative")
}

pub fn c1_table() -> Vec<C1Row> {
    let raw: RawTable<(i64, Vec<i64>, i64)> =
        serde_json::from_str(include_str!("../data/tables/c1_smooth.json")).expect("embedded table");
    raw.rows.into_iter().map(|(g, e, m)| C1Row { g, st: st_of(e), num_moduli: m }).collect()
}

pub fn c1_singular_table() -> Vec<(i64, Vec<ScrollType>)> {
    let raw: RawTable<(i64, Vec<Vec<i64>>)> =
        serde_json::from_str(include_str!("../data/tables/c1_singular.json")).expect("embedded table");
    raw.rows.into_iter().map(|(g, l)| (g, l.into_iter().map(st_of).collect())).collect()
}

pub fn c2_table() -> Vec<C2Row> {
    let raw: RawTable<(i64, Vec<i64>, i64, String, i64)> =
        serde_json::from_str(include_str!("../data/tables/c2_smooth.json")).expect("embedded table");
    raw.rows
        .into_iter()
        .map(|(g, e, b1, ci, m)| C2Row { g, st: st_of(e), b1, smooth: ci == "Smooth", num_moduli: m })
        .collect()
}

pub fn c2_singular_table() -> Vec<C2SingularRow> {
    type Raw = (i64, Vec<i64>, Vec<i64>, String, bool);
    let raw: RawTable<Raw> =
        serde_json::from_str(include_str!("../data/tables/c2_singular.json")).expect("embedded table");
    raw.rows
        .into_iter()
        .map(|(g, e, b1, virt, perfect)| C2SingularRow { g, st: st_of(e), b1, virt, perfect })
        .collect()
}

/// Singular c = 2 candidates in P^g: smooth rows in P^{g+4} with last entry
/// 1, lowered by one in every entry and by 2 in b_1.
pub fn c2_singular_candidates(g: i64) -> Vec<(ScrollType, i64)> {
    let mut out: Vec<(ScrollType, i64)> = c2_table()
        .into_iter()
        .filter(|r| r.g == g + 4 && r.st.entries()[3] == 1)
        .map(|r| (st_of(r.st.entries().iter().map(|e| e - 1).collect()), r.b1 - 2))
        .collect();
    out.sort();
    out
}

/// One line of a moduli table comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuliCheck {
    pub row: String,
    pub expected: i64,
    pub computed: std::result::Result<i64, String>,
}

impl ModuliCheck {
    pub fn ok(&self) -> bool {
        self.computed.as_ref().is_ok_and(|&v| v == self.expected)
    }
}

pub fn check_c1_table() -> Vec<ModuliCheck> {
    c1_table()
        .into_iter()
        .map(|r| ModuliCheck {
            row: format!("g={} {}", r.g, r.st),
            expected: r.num_moduli,
            computed: moduli_c1(&r.st, r.g).map(|m| m.num_moduli).map_err(|e| e.to_string()),
        })
        .collect()
}

pub fn check_c2_table() -> Vec<ModuliCheck> {
    c2_table()
        .into_iter()
        .map(|r| ModuliCheck {
            row: format!("g={} {} b1={}", r.g, r.st, r.b1),
            expected: r.num_moduli,
            computed: moduli_c2(&r.st, r.b1, r.g).map(|m| m.num_moduli).map_err(|e| e.to_string()),
        })
        .collect()
}
