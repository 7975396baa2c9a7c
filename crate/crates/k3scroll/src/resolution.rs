//! Betti tables of the fiber curves, resolutions of the surface over the
//! scroll, b-exponent sums and b-vector enumeration.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::par;
use crate::rolling::{basis, cutting_capacity};
use crate::scroll::{h0_scroll, Frame, ScrollDivisor, ScrollType};

type Q = BigRational;

fn q(x: i64) -> Q {
    Q::from_integer(BigInt::from(x))
}

fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i64, |acc, t| acc * (n - t) / (t + 1))
}

/// x(x-1)...(x-k+1)/k! for any integer x.
fn binom_poly(x: i64, k: i64) -> Q {
    let mut num = Q::one();
    for t in 0..k {
        num *= q(x - t);
        num /= q(t + 1);
    }
    num
}

fn to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

enum Solution {
    Unique(Vec<Q>),
    Free(Vec<usize>),
    Inconsistent(usize),
}

/// Exact Gauss-Jordan on the augmented system rows * x = rhs.
fn solve(mut rows: Vec<Vec<Q>>, mut rhs: Vec<Q>, unknowns: usize) -> Solution {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..unknowns {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        rhs.swap(r, p);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        rhs[r] *= &inv;
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for j in 0..unknowns {
                    let sub = &f * &rows[r][j];
                    rows[i][j] -= sub;
                }
                let sub = &f * &rhs[r];
                rhs[i] -= sub;
            }
        }
        pivots.push(col);
        r += 1;
    }
    if let Some(i) = (r..rows.len()).find(|&i| !rhs[i].is_zero()) {
        return Solution::Inconsistent(i);
    }
    if pivots.len() < unknowns {
        return Solution::Free((0..unknowns).filter(|c| !pivots.contains(c)).collect());
    }
    let mut x = vec![Q::zero(); unknowns];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rhs[i].clone();
    }
    Solution::Unique(x)
}

/// Graded Betti numbers beta(i,j) of a fiber curve; only nonzero entries are
/// stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub c: i64,
    pub dsq: i64,
    beta: BTreeMap<(i64, i64), i64>,
}

impl BettiTable {
    fn from_entries(c: i64, dsq: i64, entries: impl IntoIterator<Item = ((i64, i64), i64)>) -> Self {
        let mut beta: BTreeMap<_, _> = entries.into_iter().filter(|(_, v)| *v != 0).collect();
        beta.insert((0, 0), 1);
        BettiTable { c, dsq, beta }
    }

    pub fn get(&self, i: i64, j: i64) -> i64 {
        self.beta.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Nonzero entries with i >= 1, ordered by (i, j).
    pub fn entries(&self) -> impl Iterator<Item = ((i64, i64), i64)> + '_ {
        self.beta.iter().filter(|((i, _), _)| *i >= 1).map(|(&k, &v)| (k, v))
    }

    /// c + D^2/2, the last possibly nonzero homological degree.
    pub fn top(&self) -> i64 {
        self.c + self.dsq / 2
    }

    /// "0 -> R(-5)^2 -> R(-3)^2 ⊕ R(-4)^3 -> R(-2)^4 -> R".
    pub fn resolution_string(&self) -> String {
        let len = self.entries().map(|((i, _), _)| i).max().unwrap_or(0);
        let mut parts = vec!["0".to_string()];
        for i in (1..=len).rev() {
            let terms: Vec<String> = self
                .entries()
                .filter(|((a, _), _)| *a == i)
                .map(|((_, j), v)| if v == 1 { format!("R(-{j})") } else { format!("R(-{j})^{v}") })
                .collect();
            parts.push(terms.join(" ⊕ "));
        }
        parts.push("R".into());
        parts.join(" -> ")
    }

    /// Hilbert polynomial of the curve minus the alternating sum of the twisted
    /// free modules, at n. Zero for a consistent table.
    pub fn euler_defect(&self, n: i64) -> Q {
        let r = self.c + 1 + self.dsq / 2;
        let hilb = q((self.c + 2 + self.dsq) * n - self.dsq / 2);
        let mut rhs = binom_poly(n + r, r);
        for ((i, j), v) in self.entries() {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            rhs += q(sign * v) * binom_poly(n + r - j, r);
        }
        hilb - rhs
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.resolution_string())
    }
}

impl Serialize for BettiTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let beta: BTreeMap<String, i64> = self.beta.iter().map(|((i, j), v)| (format!("{i},{j}"), *v)).collect();
        let mut st = s.serialize_struct("BettiTable", 3)?;
        st.serialize_field("c", &self.c)?;
        st.serialize_field("Dsq", &self.dsq)?;
        st.serialize_field("beta", &beta)?;
        st.end()
    }
}

/// Fiber of a smooth scroll: an elliptic normal curve of degree c + 2.
pub fn betti_smooth_case(c: i64) -> BettiTable {
    let mut e: Vec<((i64, i64), i64)> =
        (1..c).map(|i| ((i, i + 1), i * binom(c + 1, i + 1) - binom(c, i - 1))).collect();
    e.push(((c, c + 2), 1));
    BettiTable::from_entries(c, 0, e)
}

/// beta(i,i+1) - beta(i-1,i+1), independent of the fiber.
pub fn koszul_diffs(c: i64, dsq: i64, i: i64) -> i64 {
    let h = dsq / 2;
    binom(c + h, i) * (dsq + 2 + i) + binom(c + h, i + 1) * (h + 1 + i) - binom(c + 2 + h, i + 1) * (h + 1)
}

/// Solves the linear constraints on beta(i,i+1), beta(i,i+2) and checks the
/// nonvanishing conditions and the Euler identity.
pub fn betti_fiber(c: i64, dsq: i64) -> Result<BettiTable> {
    if c < 1 || dsq < 0 || dsq % 2 != 0 {
        return Err(Error::Malformed(format!("betti_fiber needs c >= 1 and even D^2 >= 0, got ({c},{dsq})")));
    }
    if dsq == 0 {
        return Ok(betti_smooth_case(c));
    }
    let n = c + dsq / 2;
    let nu = 2 * n as usize;
    // x_i = beta(i,i+1) at i-1, y_i = beta(i,i+2) at n+i-1.
    let x = |i: i64| (i - 1) as usize;
    let y = |i: i64| (n + i - 1) as usize;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut labels = Vec::new();
    let mut eq = |terms: &[(usize, i64)], v: i64, label: String| {
        let mut row = vec![Q::zero(); nu];
        for &(k, coef) in terms {
            row[k] += q(coef);
        }
        rows.push(row);
        rhs.push(q(v));
        labels.push(label);
    };
    for i in 1..=n + 1 {
        let mut t = Vec::new();
        if i <= n {
            t.push((x(i), 1));
        }
        if i >= 2 {
            t.push((y(i - 1), -1));
        }
        eq(&t, koszul_diffs(c, dsq, i), format!("(e) i={i}"));
    }
    for i in 1..c {
        eq(&[(y(i), 1)], 0, format!("(b) beta({i},{}) = 0", i + 2));
    }
    eq(&[(x(n), 1)], 0, "(f)".into());
    if dsq >= 4 && c >= 3 {
        eq(&[(x(n - 1), 1)], 0, "(g)".into());
    }
    if (c, dsq) == (2, 4) {
        eq(&[(x(3), 1)], 3, "(h)".into());
    }
    let sol = match solve(rows, rhs, nu) {
        Solution::Unique(s) => s,
        Solution::Free(free) => {
            let names: Vec<String> = free
                .iter()
                .map(|&k| {
                    let k = k as i64;
                    if k < n {
                        format!("beta({},{})", k + 1, k + 2)
                    } else {
                        format!("beta({},{})", k - n + 1, k - n + 3)
                    }
                })
                .collect();
            return Err(Error::BettiIndeterminate { c, dsq, detail: format!("free: {}", names.join(", ")) });
        }
        Solution::Inconsistent(row) => {
            return Err(Error::BettiConflict { c, dsq, detail: labels[row].clone() });
        }
    };
    let conflict = |detail: String| Error::BettiConflict { c, dsq, detail };
    let mut entries = Vec::new();
    for i in 1..=n {
        for (j, v) in [(i + 1, &sol[x(i)]), (i + 2, &sol[y(i)])] {
            let v = to_i64(v).filter(|v| *v >= 0).ok_or_else(|| conflict(format!("beta({i},{j}) = {v}")))?;
            entries.push(((i, j), v));
        }
    }
    let t = BettiTable::from_entries(c, dsq, entries);
    for i in 1..c {
        if t.get(i, i + 1) == 0 {
            return Err(conflict(format!("(b) beta({i},{}) vanishes", i + 1)));
        }
    }
    if t.get(c, c + 1) == 0 {
        return Err(conflict("(i)".into()));
    }
    if t.get(c, c + 2) == 0 {
        return Err(conflict("(j)".into()));
    }
    if let Some(m) = (0..=n + 4).find(|&m| !t.euler_defect(m).is_zero()) {
        return Err(conflict(format!("Euler identity fails at n={m}")));
    }
    Ok(t)
}

/// chi(aH + bF) on a smooth scroll of dimension d and degree f, as a
/// polynomial in a.
pub fn chi_oracle(d: i64, f: i64, a: i64, b: i64) -> Q {
    binom_poly(a + d - 1, d - 1) * (q(a * f) / q(d) + q(1 + b))
}

/// chi(O_S''(nH0)) from H0^2 = deg S'' and H0.K = D^2.
pub fn chi_surface_t0(g: i64, c: i64, dsq: i64, n: i64) -> Q {
    let h2 = 2 * g + 2 * c + 2 + 2 * dsq;
    q(2) + q(n * n * h2 - n * dsq) / q(2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SumDifference {
    /// Position (j-1, j).
    pub plus: (i64, i64),
    /// Position (j-2, j).
    pub minus: (i64, i64),
    pub value: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BSumLedger {
    pub frame: Frame,
    /// Sum of b(i,j)^k over k, where it is determined on its own.
    #[serde(serialize_with = "ser_pairs")]
    pub sums: BTreeMap<(i64, i64), i64>,
    /// Both beta(j-1,j) and beta(j-2,j) nonzero: only the difference is fixed.
    pub differences: Vec<SumDifference>,
    pub solved_from: Vec<i64>,
}

fn ser_pairs<S: Serializer>(m: &BTreeMap<(i64, i64), i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let out: BTreeMap<String, i64> = m.iter().map(|((i, j), v)| (format!("{i},{j}"), *v)).collect();
    out.serialize(s)
}

impl BSumLedger {
    pub fn sum(&self, i: i64, j: i64) -> Option<i64> {
        self.sums.get(&(i, j)).copied()
    }

    /// Sum at (j-1,j) minus sum at (j-2,j), an empty position counting 0.
    pub fn difference(&self, j: i64) -> Option<i64> {
        if let Some(d) = self.differences.iter().find(|d| d.plus.1 == j) {
            return Some(d.value);
        }
        let plus = self.sums.get(&(j - 1, j));
        let minus = self.sums.get(&(j - 2, j));
        if plus.is_none() && minus.is_none() {
            return None;
        }
        Some(plus.copied().unwrap_or(0) - minus.copied().unwrap_or(0))
    }
}

/// Solves the Euler identity chi(T, nH) - chi(S, nH) = sum (-1)^{i+1}
/// chi(F_i(nH)) for the per-degree combinations of b-sums.
fn solve_sums(
    frame: Frame,
    d: i64,
    f: i64,
    betti: &BettiTable,
    chi_s: impl Fn(i64) -> Q,
) -> Result<BSumLedger> {
    let js: Vec<i64> = betti.entries().map(|((_, j), _)| j).collect::<BTreeSet<_>>().into_iter().collect();
    let ns: Vec<i64> = (0..js.len() as i64 + 3).collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for &n in &ns {
        let mut known = chi_oracle(d, f, n, 0) - chi_s(n);
        for ((i, j), v) in betti.entries() {
            let sign = if i % 2 == 0 { -1 } else { 1 };
            known -= q(sign * v) * chi_oracle(d, f, n - j, 0);
        }
        rows.push(js.iter().map(|&j| binom_poly(n - j + d - 1, d - 1)).collect());
        rhs.push(known);
    }
    let y = match solve(rows, rhs, js.len()) {
        Solution::Unique(y) => y,
        Solution::Free(free) => {
            let which: Vec<i64> = free.iter().map(|&k| js[k]).collect();
            return Err(Error::SumIndeterminate(format!("twists -{which:?}H undetermined")));
        }
        Solution::Inconsistent(r) => {
            return Err(Error::NumericsMismatch(format!("Euler identity inconsistent at n={}", ns[r])));
        }
    };
    let mut sums = BTreeMap::new();
    let mut differences = Vec::new();
    for (k, &j) in js.iter().enumerate() {
        let yj = to_i64(&y[k]).ok_or_else(|| Error::NumericsMismatch(format!("non-integral b-sum {}", y[k])))?;
        let at: Vec<i64> = [j - 2, j - 1].into_iter().filter(|&i| i >= 1 && betti.get(i, j) > 0).collect();
        match at.as_slice() {
            [i] => {
                let sign = if i % 2 == 0 { -1 } else { 1 };
                sums.insert((*i, j), sign * yj);
            }
            _ => {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                differences.push(SumDifference { plus: (j - 1, j), minus: (j - 2, j), value: sign * yj });
            }
        }
    }
    Ok(BSumLedger { frame, sums, differences, solved_from: ns })
}

/// b-sums in the H0 frame on T0. Checks the quadric sum against
/// (D^2/2 + c - 1)g + 1 - c - D^2.
pub fn bsum_solver(g: i64, c: i64, dsq: i64, betti: &BettiTable) -> Result<BSumLedger> {
    let d = c + 2 + dsq / 2;
    let ledger = solve_sums(Frame::H0OnT0, d, g + 1, betti, |n| chi_surface_t0(g, c, dsq, n))?;
    let expect = (dsq / 2 + c - 1) * g + (1 - c - dsq);
    if c + dsq / 2 >= 2 && ledger.sum(1, 2) != Some(expect) {
        return Err(Error::NumericsMismatch(format!(
            "quadric b-sum {:?}, expected {expect}",
            ledger.sum(1, 2)
        )));
    }
    Ok(ledger)
}

/// b-sums in the H frame on a smooth T (D^2 = 0), where S' has sectional
/// genus g and H^2 = 2g - 2.
pub fn bsum_solver_smooth(g: i64, c: i64, betti: &BettiTable) -> Result<BSumLedger> {
    solve_sums(Frame::HOnT, c + 2, g - c - 1, betti, |n| q(2 + n * n * (g - 1)))
}

/// What the top sum would be under the +1 variant of the n = 0 evaluation.
pub fn top_sum_plus_variant(g: i64, dsq: i64) -> i64 {
    g * (dsq / 2 + 1) + 1
}

/// Twists per homological degree, terms[0] being the structure sheaf.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionShape {
    pub frame: Frame,
    pub terms: Vec<Vec<(ScrollDivisor, usize)>>,
}

impl ResolutionShape {
    /// Terms from twists (a, b) per homological degree >= 1; equal twists are
    /// merged.
    pub fn new(frame: Frame, degrees: Vec<Vec<(i64, i64)>>) -> Self {
        let mut terms = vec![vec![(ScrollDivisor::new(0, 0, frame), 1)]];
        for deg in degrees {
            let mut out: Vec<(ScrollDivisor, usize)> = Vec::new();
            for (a, b) in deg {
                let x = ScrollDivisor::new(a, b, frame);
                match out.iter_mut().find(|(y, _)| *y == x) {
                    Some(slot) => slot.1 += 1,
                    None => out.push((x, 1)),
                }
            }
            terms.push(out);
        }
        ResolutionShape { frame, terms }
    }

    /// Shape from a Betti table and the individual b's at each (i,j).
    pub fn from_table(frame: Frame, betti: &BettiTable, b: &BTreeMap<(i64, i64), Vec<i64>>) -> Result<Self> {
        let len = betti.entries().map(|((i, _), _)| i).max().unwrap_or(0);
        let mut degrees = vec![Vec::new(); len as usize];
        for ((i, j), v) in betti.entries() {
            let bs = b.get(&(i, j)).ok_or_else(|| Error::Malformed(format!("no b's for ({i},{j})")))?;
            if bs.len() as i64 != v {
                return Err(Error::Malformed(format!("({i},{j}) has {} b's, beta is {v}", bs.len())));
            }
            degrees[i as usize - 1].extend(bs.iter().map(|&x| (-j, x)));
        }
        Ok(ResolutionShape::new(frame, degrees))
    }

    /// Alternating rank sum, 0 for a resolution of a proper quotient.
    pub fn rank_sum(&self) -> i64 {
        self.terms
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let r: usize = t.iter().map(|(_, m)| m).sum();
                if i % 2 == 0 {
                    r as i64
                } else {
                    -(r as i64)
                }
            })
            .sum()
    }
}

fn twist_string(x: &ScrollDivisor) -> String {
    let h = match x.frame {
        Frame::H0OnT0 => "H0",
        _ => "H",
    };
    let mut s = String::new();
    match x.a {
        0 => {}
        1 => s.push_str(h),
        -1 => s.push_str(&format!("-{h}")),
        a => s.push_str(&format!("{a}{h}")),
    }
    let fpart = match x.b {
        0 => String::new(),
        1 => "F".into(),
        -1 => "-F".into(),
        b => format!("{b}F"),
    };
    if !fpart.is_empty() && !s.is_empty() && !fpart.starts_with('-') {
        s.push('+');
    }
    s.push_str(&fpart);
    if s.is_empty() {
        "O".into()
    } else {
        format!("O({s})")
    }
}

impl fmt::Display for ResolutionShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let target = match self.frame {
            Frame::HOnT => "O_S'",
            _ => "O_S''",
        };
        let mut parts = vec!["0".to_string()];
        for t in self.terms.iter().skip(1).rev() {
            let items: Vec<String> = t
                .iter()
                .map(|(x, m)| if *m == 1 { twist_string(x) } else { format!("{}^{m}", twist_string(x)) })
                .collect();
            parts.push(items.join(" ⊕ "));
        }
        parts.push("O".into());
        parts.push(target.into());
        parts.push("0".into());
        f.write_str(&parts.join(" -> "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pushdown {
    pub shape: ResolutionShape,
    /// Every twist has F-coefficient >= -1 in the H frame.
    pub full: bool,
    /// Same bound on the first two terms only, enough for the ideal generators.
    pub generators: bool,
}

/// Rewrites a T0 resolution in the H frame on T and tests the F >= -1 bounds.
pub fn pushdown_check(shape: &ResolutionShape) -> Pushdown {
    let terms: Vec<Vec<(ScrollDivisor, usize)>> = shape
        .terms
        .iter()
        .map(|t| {
            t.iter()
                .map(|(x, m)| {
                    let h = x.to_h();
                    (ScrollDivisor::new(h.a, h.b, Frame::HOnT), *m)
                })
                .collect()
        })
        .collect();
    let ok = |k: usize| terms[k].iter().all(|(x, _)| x.b >= -1);
    let full = (1..terms.len()).all(ok);
    let generators = (1..terms.len().min(3)).all(ok);
    Pushdown { shape: ResolutionShape { frame: Frame::HOnT, terms }, full, generators }
}

/// At most `max` of the b's are >= at_least, from a geometric argument the
/// lattice data cannot see.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaxCount {
    pub at_least: i64,
    pub max: usize,
    pub reason: String,
}

/// Input for the quadric b-vector search: 2H0 - bF on T0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BvectorSpec {
    pub g: i64,
    pub c: i64,
    pub dsq: i64,
    pub t0: ScrollType,
    /// Independent quadrics needed on each fiber of the subscroll over Sing T.
    pub need: usize,
    pub asserted: Vec<MaxCount>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BvectorReport {
    pub vectors: Vec<Vec<i64>>,
    pub generated: usize,
    /// (filter, candidates it removed), in application order.
    pub removed: Vec<(String, usize)>,
}

/// Largest number of generators of twist >= b0: each must stay independent
/// of the others modulo every single Z_k, and a quadric in two variables
/// splits.
fn elimination_cap(t0: &ScrollType, b0: i64) -> usize {
    let mb = basis(t0, 2, b0);
    let vars: BTreeSet<usize> =
        mb.monomials.iter().flat_map(|m| m.index.iter().enumerate().filter(|(_, &i)| i > 0).map(|(k, _)| k)).collect();
    if vars.len() <= 2 {
        return 0;
    }
    (0..t0.entries().len())
        .map(|k| mb.monomials.iter().filter(|m| m.index[k] == 0).count())
        .min()
        .unwrap_or(0)
}

fn refined_cut(b: &[i64], need: usize) -> bool {
    let t = b.iter().filter(|&&x| x == 2).count();
    let p = b.iter().filter(|&&x| x < 2).count();
    t >= need || p + t > need
}

/// All non-increasing b-vectors of length beta(1,2) and the ledger's quadric
/// sum surviving the filters. `bound` caps the raw candidates visited.
pub fn enumerate_bvectors(
    spec: &BvectorSpec,
    betti: &BettiTable,
    ledger: &BSumLedger,
    bound: Option<usize>,
) -> Result<BvectorReport> {
    let len = betti.get(1, 2) as usize;
    let total = ledger.sum(1, 2).ok_or_else(|| Error::SumIndeterminate("quadric sum".into()))?;
    if len == 0 {
        return Err(Error::Malformed("no quadric generators".into()));
    }
    let t0 = &spec.t0;
    // (i): h0(2H0 - bF) > 0.
    let hi = 2 * t0.entries()[0];
    debug_assert!(h0_scroll(t0, 2, -hi) > 0 && h0_scroll(t0, 2, -hi - 1) == 0);
    let lo = total - (len as i64 - 1) * hi;
    // (ii): cumulative caps, caps[b - lo] = min over b0 <= b.
    let mut caps = Vec::new();
    let mut run = usize::MAX;
    for b0 in lo..=hi {
        run = run.min(elimination_cap(t0, b0));
        caps.push(run);
    }
    let top = (lo..=hi).rev().find(|&b| caps[(b - lo) as usize] >= 1).unwrap_or(lo - 1);
    if top < lo {
        return Err(Error::FilterTooStrong("elimination".into()));
    }
    let firsts: Vec<i64> = (lo..=top).rev().collect();
    let per_first = par::map(&firsts, |&b1| {
        let mut out = Vec::new();
        let mut cur = vec![b1];
        grow(&mut cur, len, total - b1, lo, &caps, bound, &mut out).map(|_| out)
    });
    let mut cands: Vec<Vec<i64>> = Vec::new();
    for part in per_first {
        cands.extend(part?);
        if bound.is_some_and(|m| cands.len() > m) {
            return Err(Error::EnumerationBudget(bound.unwrap_or(0)));
        }
    }
    let generated = cands.len();
    let rest: Vec<i64> = t0.entries().iter().copied().filter(|&e| e == 1).collect();
    let kill: BTreeSet<usize> = (1..=t0.entries().len()).filter(|&k| t0.entries()[k - 1] >= 2).collect();
    type Filter<'a> = (&'a str, Box<dyn Fn(&[i64]) -> Result<bool> + Sync + 'a>);
    let filters: Vec<Filter> = vec![
        ("cutting capacity", Box::new(|b: &[i64]| {
            if rest.is_empty() {
                return Ok(true);
            }
            cutting_capacity(t0, 2, b, &kill, spec.need)
        })),
        ("generic cutting", Box::new(|b: &[i64]| Ok(rest.is_empty() || refined_cut(b, spec.need)))),
        ("asserted", Box::new(|b: &[i64]| {
            Ok(spec.asserted.iter().all(|m| b.iter().filter(|&&x| x >= m.at_least).count() <= m.max))
        })),
        ("duality", Box::new(|b: &[i64]| {
            if spec.dsq != 0 || spec.c != 2 {
                return Ok(true);
            }
            let mut dual: Vec<i64> = b.iter().map(|x| spec.g - 1 - x).collect();
            dual.sort_unstable_by(|x, y| y.cmp(x));
            Ok(dual == b)
        })),
    ];
    let mut removed = Vec::new();
    for (name, keep) in &filters {
        let before = cands.len();
        let flags = par::map(&cands, |b: &Vec<i64>| keep(b));
        let mut next = Vec::new();
        for (b, f) in cands.into_iter().zip(flags) {
            if f? {
                next.push(b);
            }
        }
        cands = next;
        removed.push((name.to_string(), before - cands.len()));
        if cands.is_empty() && before > 0 {
            return Err(Error::FilterTooStrong(name.to_string()));
        }
    }
    cands.sort_unstable_by(|x, y| y.cmp(x));
    Ok(BvectorReport { vectors: cands, generated, removed })
}

fn grow(
    cur: &mut Vec<i64>,
    len: usize,
    left: i64,
    lo: i64,
    caps: &[usize],
    bound: Option<usize>,
    out: &mut Vec<Vec<i64>>,
) -> Result<()> {
    let k = cur.len();
    let last = *cur.last().expect("nonempty prefix");
    if caps[(last - lo) as usize] < k {
        return Ok(());
    }
    if k == len {
        if left == 0 {
            out.push(cur.clone());
            if bound.is_some_and(|m| out.len() > m) {
                return Err(Error::EnumerationBudget(bound.unwrap_or(0)));
            }
        }
        return Ok(());
    }
    let r = (len - k) as i64;
    let min_b = left.div_euclid(r) + i64::from(left.rem_euclid(r) != 0);
    let max_b = last.min(left - (r - 1) * lo);
    for b in (min_b.max(lo)..=max_b).rev() {
        cur.push(b);
        grow(cur, len, left - b, lo, caps, bound, out)?;
        cur.pop();
    }
    Ok(())
}

/// A named search with the candidate list printed alongside it.
#[derive(Clone, Debug, Serialize)]
pub struct BvectorCase {
    pub name: &'static str,
    pub spec: BvectorSpec,
    pub listed: Vec<Vec<i64>>,
}

impl BvectorCase {
    pub fn betti(&self) -> Result<BettiTable> {
        betti_fiber(self.spec.c, self.spec.dsq)
    }

    pub fn run(&self, bound: Option<usize>) -> Result<BvectorReport> {
        let betti = self.betti()?;
        let ledger = bsum_solver(self.spec.g, self.spec.c, self.spec.dsq, &betti)?;
        enumerate_bvectors(&self.spec, &betti, &ledger, bound)
    }

    /// Listed vectors whose length or sum disagrees with beta(1,2) and the
    /// quadric sum.
    pub fn malformed_listed(&self) -> Result<Vec<Vec<i64>>> {
        let betti = self.betti()?;
        let ledger = bsum_solver(self.spec.g, self.spec.c, self.spec.dsq, &betti)?;
        let len = betti.get(1, 2) as usize;
        let total = ledger.sum(1, 2);
        Ok(self
            .listed
            .iter()
            .filter(|b| b.len() != len || Some(b.iter().sum::<i64>()) != total)
            .cloned()
            .collect())
    }
}

/// Quadrics in the P^{r-1} fibers over Sing T (r = number of entries 1 in
/// T0) through a scheme of the given length spanning the fiber.
pub fn quadrics_through(t0: &ScrollType, points: usize) -> usize {
    let r = t0.entries().iter().filter(|&&e| e == 1).count();
    (r * (r + 1) / 2).saturating_sub(points)
}

fn mc(at_least: i64, max: usize, reason: &str) -> MaxCount {
    MaxCount { at_least, max, reason: reason.into() }
}

pub fn bvector_cases() -> Vec<BvectorCase> {
    let st = |s: &str| s.parse::<ScrollType>().expect("static scroll type");
    let case = |name, g, c, dsq, t0: &str, points, asserted: Vec<MaxCount>, listed: Vec<Vec<i64>>| {
        let t0 = st(t0);
        let need = quadrics_through(&t0, points);
        BvectorCase { name, spec: BvectorSpec { g, c, dsq, t0, need, asserted }, listed }
    };
    let unwritten = "bound on quadratic relations among the degree-2 coordinates, stated without argument";
    let plane_map = "Z1,Z2,Z3 map the genus-2 fiber to P^2 by a degree-4 series, at most 2:1, so they satisfy at most one quadratic relation";
    vec![
        case("c2d2g7a", 7, 2, 2, "(2,2,2,1,1)", 2, vec![mc(4, 1, plane_map)], vec![vec![3, 3, 3, 2], vec![4, 3, 2, 2]]),
        case("c2d2g7b", 7, 2, 2, "(3,2,1,1,1)", 4, vec![], vec![vec![4, 3, 2, 2]]),
        case("c2d2g8", 8, 2, 2, "(3,2,2,1,1)", 2, vec![], vec![vec![5, 4, 2, 2], vec![5, 3, 3, 2], vec![4, 4, 3, 2]]),
        case("c2d2g9", 9, 2, 2, "(3,3,2,1,1)", 2, vec![mc(5, 1, plane_map)], vec![vec![5, 4, 4, 2]]),
        case("c2d2g10", 10, 2, 2, "(4,3,2,1,1)", 2, vec![], vec![vec![6, 5, 4, 2], vec![5, 5, 5, 2]]),
        case("c2d4g9", 9, 2, 4, "(3,2,2,1,1,1)", 4, vec![], vec![vec![4, 4, 4, 3, 3, 2, 2]]),
        case(
            "c3d2g9a",
            9,
            3,
            2,
            "(2,2,2,2,1,1)",
            2,
            vec![mc(4, 1, "Z1..Z4 embed the fiber as a genus-2 quintic in P^3, which lies on a single quadric")],
            vec![vec![4, 3, 3, 3, 3, 3, 2, 2], vec![3, 3, 3, 3, 3, 3, 3, 2]],
        ),
        case(
            "c3d2g9b",
            9,
            3,
            2,
            "(3,2,2,1,1,1)",
            3,
            vec![],
            vec![vec![4, 4, 4, 3, 2, 2, 2, 2], vec![4, 4, 3, 3, 3, 2, 2, 2]],
        ),
        case(
            "c3d2g10",
            10,
            3,
            2,
            "(3,2,2,2,1,1)",
            2,
            vec![mc(4, 3, "carried over from the genus-9 analysis without a written argument")],
            vec![vec![4, 4, 4, 3, 3, 3, 3, 2]],
        ),
        case("c3d4g10", 10, 3, 4, "(3,2,2,1,1,1,1)", 5, vec![], vec![vec![4, 4, 4, 3, 3, 3, 3, 2, 2, 2, 2, 2]]),
        case(
            "cg1",
            8,
            3,
            2,
            "(2,2,2,1,1,1)",
            2,
            vec![mc(4, 1, unwritten)],
            vec![vec![4, 3, 3, 3, 2, 2, 2, 1], vec![4, 3, 3, 2, 2, 2, 2, 2], vec![3, 3, 3, 3, 2, 2, 2, 2]],
        ),
        case(
            "cg2",
            8,
            3,
            2,
            "(2,2,2,1,1,1)",
            3,
            vec![mc(4, 1, unwritten)],
            vec![vec![4, 3, 3, 3, 2, 2, 2, 1], vec![4, 3, 3, 2, 2, 2, 2, 2], vec![3, 3, 3, 3, 2, 2, 2, 2]],
        ),
        case("cg3", 8, 3, 2, "(3,2,1,1,1,1)", 5, vec![], vec![vec![4, 3, 3, 2, 2, 2, 2, 2]]),
        case(
            "cg1p",
            10,
            4,
            2,
            "(2,2,2,2,1,1,1)",
            2,
            vec![mc(4, 1, unwritten)],
            vec![vec![4, 3, 3, 3, 3, 3, 3, 3, 2, 2, 2, 2, 2], vec![3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 2, 2, 2, 2]],
        ),
        case(
            "cg2p",
            10,
            4,
            2,
            "(2,2,2,2,1,1,1)",
            3,
            vec![mc(4, 1, unwritten)],
            vec![
                vec![4, 3, 3, 3, 3, 3, 3, 3, 2, 2, 2, 2, 2, 2],
                vec![3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 2, 2, 2, 2],
                vec![4, 3, 3, 3, 3, 3, 3, 3, 3, 2, 2, 2, 1],
            ],
        ),
        case(
            "cg3p",
            10,
            4,
            2,
            "(3,2,2,1,1,1,1)",
            4,
            vec![],
            vec![vec![4, 4, 4, 3, 3, 3, 2, 2, 2, 2, 2, 2, 2, 2], vec![4, 4, 3, 3, 3, 3, 3, 2, 2, 2, 2, 2, 2, 2]],
        ),
    ]
}

pub fn bvector_case(name: &str) -> Option<BvectorCase> {
    bvector_cases().into_iter().find(|c| c.name == name)
}
