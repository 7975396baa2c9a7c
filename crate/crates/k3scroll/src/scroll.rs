//! Scroll types, numerics and section counts on P(E).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::clifford::{CliffordData, Perfect};
use crate::cohomology::{h0, h1_value, K3Config};
use crate::error::{Error, Result};
use crate::lattice::DivisorClass;

/// Type (e_1, ..., e_d) of a rational normal scroll, non-increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScrollType(Vec<i64>);

impl ScrollType {
    pub fn new(mut e: Vec<i64>) -> Result<Self> {
        if e.iter().any(|&x| x < 0) {
            return Err(Error::Parse(format!("negative scroll entry in {e:?}")));
        }
        e.sort_unstable_by(|a, b| b.cmp(a));
        Ok(ScrollType(e))
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> i64 {
        self.0.len() as i64
    }

    pub fn deg(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Number of zero entries.
    pub fn zeros(&self) -> i64 {
        self.0.iter().filter(|&&e| e == 0).count() as i64
    }

    pub fn is_smooth(&self) -> bool {
        self.0.last().is_some_and(|&e| e >= 1)
    }

    pub fn is_balanced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(a), Some(b)) => a - b <= 1,
            _ => true,
        }
    }
}

impl fmt::Display for ScrollType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for ScrollType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("scroll type {s:?} must be parenthesized")))?;
        let e = inner
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad scroll entry {t:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if e.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!("scroll type {s} is not non-increasing")));
        }
        ScrollType::new(e)
    }
}

impl Serialize for ScrollType {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ScrollType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Frame {
    /// H on the blown-up scroll T0.
    HOnT0,
    /// H0 = H + F on T0.
    H0OnT0,
    /// H on the singular scroll T.
    HOnT,
}

/// The class aH + bF (or aH0 + bF) in a named frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScrollDivisor {
    pub a: i64,
    pub b: i64,
    pub frame: Frame,
}

impl ScrollDivisor {
    pub fn new(a: i64, b: i64, frame: Frame) -> Self {
        ScrollDivisor { a, b, frame }
    }

    pub fn to_h(self) -> ScrollDivisor {
        match self.frame {
            Frame::H0OnT0 => ScrollDivisor::new(self.a, self.a + self.b, Frame::HOnT0),
            _ => self,
        }
    }

    pub fn to_h0(self) -> Result<ScrollDivisor> {
        match self.frame {
            Frame::HOnT0 => Ok(ScrollDivisor::new(self.a, self.b - self.a, Frame::H0OnT0)),
            Frame::H0OnT0 => Ok(self),
            Frame::HOnT => Err(Error::Malformed("H0 lives on the blown-up scroll only".into())),
        }
    }
}

/// d_i = h0(L - iD) - h0(L - (i+1)D) for i = 0, 1, ... up to the first zero
/// (not included).
pub fn dual_invariants(cfg: &K3Config, cd: &CliffordData) -> Result<Vec<i64>> {
    let d = cd.divisor()?;
    let hv = |i: i64| -> Result<i64> {
        let x = &cfg.l - &(i * d);
        h0(cfg, &x).value.ok_or(Error::AbstainedInvariant(x))
    };
    let mut out = Vec::new();
    let mut prev = hv(0)?;
    for i in 0.. {
        let next = hv(i + 1)?;
        let di = prev - next;
        if di == 0 {
            break;
        }
        out.push(di);
        prev = next;
    }
    if out.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::MonotonicityViolation(out));
    }
    Ok(out)
}

/// e_i = #{j : d_j >= i} - 1 for i = 1..d_0.
pub fn scroll_type(d_seq: &[i64]) -> Result<ScrollType> {
    let d0 = *d_seq.first().ok_or(Error::EmptyInvariants)?;
    let e = (1..=d0).map(|i| d_seq.iter().filter(|&&d| d >= i).count() as i64 - 1).collect();
    ScrollType::new(e)
}

/// r with Sing T a P^{r-1}: D^2 - 1 if L ~ 2D, else D^2 + h1(L - 2D). For a
/// perfect divisor this is checked against D^2 + D.Δ (minus one in E0-E2).
pub fn singular_locus_dim(cfg: &K3Config, cd: &CliffordData) -> Result<i64> {
    let d = cd.divisor()?;
    let s = cfg.sq(d);
    let r = &cfg.l - &(2 * d);
    if r.is_zero() {
        return Ok(s - 1);
    }
    let h1 = h1_value(cfg, &r).map_err(|_| Error::Abstained(r.clone()))?;
    let value = s + h1;
    if cd.perfect == Perfect::Yes {
        let delta = cd.aux.get("Δ").cloned().unwrap_or_else(|| DivisorClass::zero(d.len()));
        let shift = if cd.case_tag.is_e0() || cd.case_tag.is_e12() { 1 } else { 0 };
        let expected = s + cfg.dot(d, &delta) - shift;
        if expected != value {
            return Err(Error::NumericsMismatch(format!(
                "r = {value} from h1(L-2D) but {expected} from D.Δ"
            )));
        }
    }
    Ok(value)
}

/// (dim, deg) = (c + 2 + D^2/2, g - c - 1 - D^2/2), checked against st.
pub fn scroll_numerics(st: &ScrollType, g: i64, c: i64, dsq: i64) -> Result<(i64, i64)> {
    let dim = c + 2 + dsq / 2;
    let deg = g - c - 1 - dsq / 2;
    if st.dim() != dim || st.deg() != deg || dim + deg != g + 1 {
        return Err(Error::NumericsMismatch(format!(
            "type {st} has dim {} deg {}, expected {dim} and {deg}",
            st.dim(),
            st.deg()
        )));
    }
    Ok((dim, deg))
}

/// Type of the blown-up scroll T0: every entry raised by one.
pub fn t0_type(st: &ScrollType) -> ScrollType {
    ScrollType(st.0.iter().map(|e| e + 1).collect())
}

/// Calls f on every multi-index of length d summing to a.
pub fn for_each_multi_index(d: usize, a: i64, mut f: impl FnMut(&[i64])) {
    fn rec(idx: &mut Vec<i64>, pos: usize, left: i64, f: &mut dyn FnMut(&[i64])) {
        if pos + 1 == idx.len() {
            idx[pos] = left;
            f(idx);
            return;
        }
        for k in (0..=left).rev() {
            idx[pos] = k;
            rec(idx, pos + 1, left - k, f);
        }
    }
    if d == 0 || a < 0 {
        return;
    }
    let mut idx = vec![0; d];
    rec(&mut idx, 0, a, &mut f);
}

fn scroll_sum(st: &ScrollType, a: i64, b: i64, term: impl Fn(i64) -> i64) -> i64 {
    let mut total = 0;
    for_each_multi_index(st.0.len(), a, |idx| {
        let w: i64 = idx.iter().zip(&st.0).map(|(i, e)| i * e).sum();
        total += term(b + w);
    });
    total
}

/// h0(aH + bF) on P(E) of type st. Zero for a < 0.
pub fn h0_scroll(st: &ScrollType, a: i64, b: i64) -> i64 {
    scroll_sum(st, a, b, |m| (m + 1).max(0))
}

/// h1(aH + bF) on P(E) of type st. Zero for a < 0.
pub fn h1_scroll(st: &ScrollType, a: i64, b: i64) -> i64 {
    scroll_sum(st, a, b, |m| (-m - 1).max(0))
}

/// h0 - h1 on P(E).
pub fn chi_scroll(st: &ScrollType, a: i64, b: i64) -> i64 {
    scroll_sum(st, a, b, |m| m + 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ChowClass {
    /// Coefficients (m, n) of H^{d-2} and H^{d-3}F for S'' in T0.
    pub t0: (i64, i64),
    /// Same for S' in T, in the pushed-down classes.
    pub t: (i64, i64),
}

/// Chow classes of the surface in T0 and T, with d = c + 2 + D^2/2. Checks
/// S''.H0^2 = 2g + 2c + 2 + 2D^2 and S''.H0.F = c + 2 + D^2.
pub fn chow_class(g: i64, c: i64, dsq: i64) -> Result<ChowClass> {
    let d = c + 2 + dsq / 2;
    let m = dsq + c + 2;
    let n = c - c * g - dsq * (g - 1);
    // H0^d = g + 1 and H0^{d-1}F = 1 on T0.
    if m * (g + 1) + n != 2 * g + 2 * c + 2 + 2 * dsq {
        return Err(Error::NumericsMismatch("S''.H0^2".into()));
    }
    let nt = dsq * (d - 1 - g) - 4 - c * g - c + c * d + 2 * d;
    Ok(ChowClass { t0: (m, n), t: (m, nt) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s: &str) -> ScrollType {
        s.parse().unwrap()
    }

    #[test]
    fn types_from_invariants() {
        assert_eq!(scroll_type(&[3, 3]).unwrap(), st("(1,1,1)"));
        assert_eq!(scroll_type(&[3, 2, 1]).unwrap(), st("(2,1,0)"));
        assert_eq!(scroll_type(&[5, 3, 2, 1]).unwrap(), st("(3,2,1,0,0)"));
        assert_eq!(scroll_type(&[6, 4]).unwrap(), st("(1,1,1,1,0,0)"));
        assert_eq!(scroll_type(&[]), Err(Error::EmptyInvariants));
    }

    #[test]
    fn serialization() {
        let t = st("(3, 2,1,0,0)");
        assert_eq!(t.to_string(), "(3,2,1,0,0)");
        assert_eq!(serde_json::to_string(&t).unwrap(), "\"(3,2,1,0,0)\"");
        assert!("(1,2)".parse::<ScrollType>().is_err());
        assert!("1,2".parse::<ScrollType>().is_err());
    }

    #[test]
    fn numerics() {
        assert_eq!(scroll_numerics(&st("(2,1,1)"), 6, 1, 0).unwrap(), (3, 4));
        assert_eq!(scroll_numerics(&st("(2,1,1,0,0,0)"), 9, 2, 4).unwrap(), (6, 4));
        assert!(scroll_numerics(&st("(2,1,1)"), 7, 1, 0).is_err());
    }

    #[test]
    fn t0() {
        assert_eq!(t0_type(&st("(2,1,0,0)")), st("(3,2,1,1)"));
        assert_eq!(t0_type(&st("(1,1,1,1,0,0)")), st("(2,2,2,2,1,1)"));
    }

    #[test]
    fn sections() {
        assert_eq!(h0_scroll(&st("(3,2,1)"), 3, -4), 30);
        assert_eq!(h0_scroll(&st("(2,1,1)"), 1, 0), 7);
        assert_eq!(h0_scroll(&st("(2,1)"), -1, 5), 0);
        // Only monomials touching Z1, Z2 survive.
        let t = st("(2,2,1,1)");
        assert_eq!(h0_scroll(&t, 2, -3), 3 * 2 + 4);
        assert_eq!(h0_scroll(&t, 2, 0) - h1_scroll(&t, 2, 0), chi_scroll(&t, 2, 0));
    }

    #[test]
    fn frames() {
        let x = ScrollDivisor::new(2, -3, Frame::H0OnT0);
        assert_eq!(x.to_h(), ScrollDivisor::new(2, -1, Frame::HOnT0));
        assert_eq!(x.to_h().to_h0().unwrap(), x);
        assert!(ScrollDivisor::new(1, 0, Frame::HOnT).to_h0().is_err());
    }

    #[test]
    fn chow() {
        for g in 3..12 {
            assert_eq!(chow_class(g, 1, 0).unwrap().t0, (3, 1 - g));
        }
        let c = chow_class(9, 2, 4).unwrap();
        assert_eq!(c.t0.0, 8);
    }
}
