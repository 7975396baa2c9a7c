//! Integer lattices with a symmetric bilinear form.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;

/// Integer coordinate vector in some lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorClass(pub Vec<i64>);

impl DivisorClass {
    pub fn zero(rank: usize) -> Self {
        DivisorClass(vec![0; rank])
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        DivisorClass(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// gcd of the coordinates (0 for the zero class).
    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &x| num_integer::gcd(g, x))
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, o: &DivisorClass) -> DivisorClass {
        assert_eq!(self.len(), o.len(), "rank mismatch");
        DivisorClass(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, o: &DivisorClass) -> DivisorClass {
        assert_eq!(self.len(), o.len(), "rank mismatch");
        DivisorClass(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, o: DivisorClass) -> DivisorClass {
        &self + &o
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, o: DivisorClass) -> DivisorClass {
        &self - &o
    }
}

impl AddAssign<&DivisorClass> for DivisorClass {
    fn add_assign(&mut self, o: &DivisorClass) {
        assert_eq!(self.len(), o.len(), "rank mismatch");
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a += b;
        }
    }
}

impl SubAssign<&DivisorClass> for DivisorClass {
    fn sub_assign(&mut self, o: &DivisorClass) {
        assert_eq!(self.len(), o.len(), "rank mismatch");
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a -= b;
        }
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass(self.0.iter().map(|a| -a).collect())
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        -&self
    }
}

impl Mul<&DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, d: &DivisorClass) -> DivisorClass {
        DivisorClass(d.0.iter().map(|a| self * a).collect())
    }
}

impl Mul<DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, d: DivisorClass) -> DivisorClass {
        self * &d
    }
}

/// Counts of positive, negative and zero eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub positives: usize,
    pub negatives: usize,
    pub zeros: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.positives, self.negatives, self.zeros)
    }
}

/// A free Z-module with a symmetric integer Gram matrix and named basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    gram: Vec<Vec<i64>>,
    basis_names: Vec<String>,
}

impl Lattice {
    pub fn new(gram: Vec<Vec<i64>>, basis_names: Vec<String>) -> Result<Self> {
        let n = gram.len();
        if n == 0 {
            return Err(Error::Malformed("rank 0".into()));
        }
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Malformed(format!("row {i} has length {}", row.len())));
            }
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Malformed(format!("gram not symmetric at ({i},{j})")));
                }
            }
        }
        if basis_names.len() != n {
            return Err(Error::Malformed(format!(
                "{} basis names for rank {n}",
                basis_names.len()
            )));
        }
        Ok(Lattice { gram, basis_names })
    }

    /// Lattice with generic names e1, e2, ...
    pub fn from_gram(gram: Vec<Vec<i64>>) -> Result<Self> {
        let names = (1..=gram.len()).map(|i| format!("e{i}")).collect();
        Lattice::new(gram, names)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[i][i] % 2 == 0)
    }

    pub fn basis_vector(&self, i: usize) -> DivisorClass {
        DivisorClass::basis(self.rank(), i)
    }

    /// The form on coordinate vectors; panics on length mismatch.
    pub fn dot(&self, a: &DivisorClass, b: &DivisorClass) -> i64 {
        let n = self.rank();
        assert!(a.len() == n && b.len() == n, "class not in this lattice");
        let mut s = 0i64;
        for i in 0..n {
            if a.0[i] == 0 {
                continue;
            }
            let mut t = 0i64;
            for j in 0..n {
                t += self.gram[i][j] * b.0[j];
            }
            s += a.0[i] * t;
        }
        s
    }

    pub fn square(&self, a: &DivisorClass) -> i64 {
        self.dot(a, a)
    }

    /// G·a as a plain vector.
    pub fn apply(&self, a: &DivisorClass) -> Vec<i64> {
        self.gram
            .iter()
            .map(|row| row.iter().zip(&a.0).map(|(g, x)| g * x).sum())
            .collect()
    }
}

pub fn intersect(lat: &Lattice, a: &DivisorClass, b: &DivisorClass) -> Result<i64> {
    if a.len() != lat.rank() || b.len() != lat.rank() {
        return Err(Error::LatticeMismatch(a.len(), b.len()));
    }
    Ok(lat.dot(a, b))
}

fn rational_gram(gram: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    gram.iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect()
}

/// Signature by symmetric Gaussian elimination over Q. A zero diagonal with a
/// nonzero off-diagonal entry a_jk is repaired by the congruence e_j += e_k,
/// which puts 2a_jk on the diagonal.
pub fn signature_of(gram: &[Vec<i64>]) -> Signature {
    let n = gram.len();
    let mut a = rational_gram(gram);
    let (mut pos, mut neg) = (0, 0);
    let mut i = 0;
    while i < n {
        let piv = (i..n).find(|&j| !a[j][j].is_zero());
        let piv = match piv {
            Some(j) => j,
            None => {
                let pair = (i..n)
                    .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
                    .find(|&(j, k)| !a[j][k].is_zero());
                match pair {
                    Some((j, k)) => {
                        for c in 0..n {
                            let v = a[k][c].clone();
                            a[j][c] += v;
                        }
                        for r in 0..n {
                            let v = a[r][k].clone();
                            a[r][j] += v;
                        }
                        j
                    }
                    None => break,
                }
            }
        };
        a.swap(i, piv);
        for row in a.iter_mut() {
            row.swap(i, piv);
        }
        let p = a[i][i].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for r in i + 1..n {
            if a[r][i].is_zero() {
                continue;
            }
            let f = &a[r][i] / &p;
            for c in i..n {
                let v = &f * &a[i][c];
                a[r][c] -= v;
            }
        }
        for r in i + 1..n {
            a[i][r] = BigRational::zero();
        }
        i += 1;
    }
    Signature { positives: pos, negatives: neg, zeros: n - pos - neg }
}

pub fn signature(lat: &Lattice) -> Signature {
    signature_of(lat.gram())
}

/// Characteristic polynomial det(xI - G), coefficients from x^0 upward
/// (Faddeev-LeVerrier, exact).
pub fn charpoly(gram: &[Vec<i64>]) -> Vec<BigInt> {
    let n = gram.len();
    let a = rational_gram(gram);
    let mut coeffs = vec![BigRational::zero(); n + 1];
    coeffs[n] = BigRational::one();
    let mut m = vec![vec![BigRational::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I ; c_{n-k} = -tr(A M_k)/k
        let mut next = vec![vec![BigRational::zero(); n]; n];
        for r in 0..n {
            for c in 0..n {
                let mut s = BigRational::zero();
                for t in 0..n {
                    if !a[r][t].is_zero() && !m[t][c].is_zero() {
                        s += &a[r][t] * &m[t][c];
                    }
                }
                next[r][c] = s;
            }
            next[r][r] += &coeffs[n - k + 1];
        }
        let mut tr = BigRational::zero();
        for r in 0..n {
            for t in 0..n {
                tr += &a[r][t] * &next[t][r];
            }
        }
        coeffs[n - k] = -tr / BigRational::from_integer(BigInt::from(k as i64));
        m = next;
    }
    coeffs
        .into_iter()
        .map(|c| {
            assert!(c.is_integer());
            c.to_integer()
        })
        .collect()
}

fn sign_changes(c: &[BigInt]) -> usize {
    let signs: Vec<bool> = c.iter().filter(|x| !x.is_zero()).map(|x| x.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Signature from Descartes' rule on the characteristic polynomial; exact
/// because a symmetric matrix has only real eigenvalues.
pub fn signature_charpoly(gram: &[Vec<i64>]) -> Signature {
    let p = charpoly(gram);
    let zeros = p.iter().take_while(|c| c.is_zero()).count();
    let pos = sign_changes(&p);
    let q: Vec<BigInt> = p
        .iter()
        .enumerate()
        .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
        .collect();
    let neg = sign_changes(&q);
    Signature { positives: pos, negatives: neg, zeros }
}

/// Existence of a K3 surface with this Picard lattice: even, hyperbolic,
/// rank at most 10.
pub fn nikulin_exists(lat: &Lattice) -> bool {
    let n = lat.rank();
    n <= 10
        && lat.is_even()
        && signature(lat) == Signature { positives: 1, negatives: n - 1, zeros: 0 }
}

/// Picard-Lefschetz reflection d + (d.gamma) gamma.
pub fn reflect(lat: &Lattice, d: &DivisorClass, gamma: &DivisorClass) -> Result<DivisorClass> {
    intersect(lat, d, gamma)?;
    let g2 = lat.square(gamma);
    if g2 != -2 {
        return Err(Error::NotARoot(gamma.clone(), g2));
    }
    let k = lat.dot(d, gamma);
    Ok(d + &(k * gamma))
}

pub fn riemann_roch_chi(lat: &Lattice, d: &DivisorClass) -> Result<i64> {
    intersect(lat, d, d)?;
    let s = lat.square(d);
    if s % 2 != 0 {
        return Err(Error::OddSquare(d.clone(), s));
    }
    Ok(s / 2 + 2)
}

/// Gram-Schmidt data q_ii, q_ij of a positive definite form, so that
/// Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2.
fn definite_decomposition(q: &[Vec<i64>]) -> Option<Vec<Vec<BigRational>>> {
    let n = q.len();
    let mut a = rational_gram(q);
    for i in 0..n {
        if !a[i][i].is_positive() {
            return None;
        }
        for j in i + 1..n {
            let t = &a[i][j] / &a[i][i];
            for k in j..n {
                let v = &t * &a[i][k];
                a[j][k] -= v;
            }
            a[j][i] = t.clone();
        }
    }
    // Store q_ij (j > i) in the upper triangle, q_ii on the diagonal.
    let mut out = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        out[i][i] = a[i][i].clone();
        for j in i + 1..n {
            out[i][j] = a[j][i].clone();
        }
    }
    Some(out)
}

fn floor_rat(x: &BigRational) -> BigInt {
    x.floor().to_integer()
}

struct ShortVectorSearch<'a> {
    q: &'a [Vec<BigRational>],
    n: usize,
}

impl ShortVectorSearch<'_> {
    /// Integer candidates t for coordinate i with q_ii (t - center)^2 <= budget.
    fn range(&self, i: usize, center: &BigRational, budget: &BigRational) -> Vec<i64> {
        let qi = &self.q[i][i];
        let fits = |t: &BigInt| {
            let d = BigRational::from_integer(t.clone()) - center;
            &(qi * &d * &d) <= budget
        };
        let mut out = Vec::new();
        let start = floor_rat(center);
        let mut t = start.clone();
        while fits(&t) {
            out.push(t.clone());
            t -= 1;
        }
        let mut t = start + 1;
        while fits(&t) {
            out.push(t.clone());
            t += 1;
        }
        out.into_iter()
            .map(|t| i64::try_from(t).expect("coordinate overflow"))
            .collect()
    }

    fn center(&self, i: usize, x: &[i64]) -> BigRational {
        let mut c = BigRational::zero();
        for j in i + 1..self.n {
            if x[j] != 0 {
                c -= &self.q[i][j] * BigRational::from_integer(BigInt::from(x[j]));
            }
        }
        c
    }

    fn recurse(&self, i: usize, x: &mut Vec<i64>, budget: BigRational, out: &mut Vec<Vec<i64>>) {
        let center = self.center(i, x);
        for t in self.range(i, &center, &budget) {
            x[i] = t;
            let d = BigRational::from_integer(BigInt::from(t)) - &center;
            let rest = &budget - &self.q[i][i] * &d * &d;
            if i == 0 {
                out.push(x.clone());
            } else {
                self.recurse(i - 1, x, rest, out);
            }
        }
        x[i] = 0;
    }
}

impl ShortVectorSearch<'_> {
    /// Points with the top coordinate fixed to t and Q(x) <= bound, split
    /// into independent jobs on the next coordinate.
    fn jobs(&self, t: i64, bound: &BigRational) -> Vec<(Vec<i64>, BigRational)> {
        let top = self.n - 1;
        let d = BigRational::from_integer(BigInt::from(t));
        let rest = bound - &self.q[top][top] * &d * &d;
        let mut x = vec![0i64; self.n];
        x[top] = t;
        if rest.is_negative() {
            return Vec::new();
        }
        if top == 0 {
            return vec![(x, rest)];
        }
        let i = top - 1;
        let center = self.center(i, &x);
        self.range(i, &center, &rest)
            .into_iter()
            .map(|u| {
                let mut y = x.clone();
                y[i] = u;
                let d = BigRational::from_integer(BigInt::from(u)) - &center;
                (y, &rest - &self.q[i][i] * &d * &d)
            })
            .collect()
    }

    fn finish(&self, mut x: Vec<i64>, budget: BigRational) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        if self.n <= 2 {
            out.push(x);
        } else {
            self.recurse(self.n - 3, &mut x, budget, &mut out);
        }
        out
    }
}

/// All integer x with x^T Q x <= bound for a positive definite integer Q
/// (Fincke-Pohst with exact rational bounds). Returns None if Q is not
/// positive definite.
pub fn short_vectors(q: &[Vec<i64>], bound: i64) -> Option<Vec<Vec<i64>>> {
    let n = q.len();
    let dec = definite_decomposition(q)?;
    if bound < 0 {
        return Some(Vec::new());
    }
    let search = ShortVectorSearch { q: &dec, n };
    let budget = BigRational::from_integer(BigInt::from(bound));
    let zero = BigRational::zero();
    let jobs: Vec<_> = search
        .range(n - 1, &zero, &budget)
        .into_iter()
        .flat_map(|t| search.jobs(t, &budget))
        .collect();
    let mut all: Vec<Vec<i64>> = par::map(&jobs, |(x, b)| search.finish(x.clone(), b.clone()))
        .into_iter()
        .flatten()
        .collect();
    all.sort();
    Some(all)
}

/// Unimodular U with v^T U = (0, .., 0, g), g = gcd(v) >= 0.
fn hyperplane_frame(v: &[i64]) -> (Vec<Vec<i64>>, i64) {
    let n = v.len();
    let mut w = v.to_vec();
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    loop {
        let nz: Vec<usize> = (0..n).filter(|&i| w[i] != 0).collect();
        let Some(&p) = nz.iter().min_by_key(|&&i| w[i].abs()) else {
            return (u, 0);
        };
        if nz.len() == 1 {
            let last = n - 1;
            w.swap(p, last);
            for row in u.iter_mut() {
                row.swap(p, last);
            }
            if w[last] < 0 {
                w[last] = -w[last];
                for row in u.iter_mut() {
                    row[last] = -row[last];
                }
            }
            return (u, w[last]);
        }
        for &j in &nz {
            if j != p {
                let f = w[j] / w[p];
                w[j] -= f * w[p];
                for row in u.iter_mut() {
                    row[j] -= f * row[p];
                }
            }
        }
    }
}

/// Every x with x^2 = square and deg_min <= x.h <= deg_max. The form
/// 2(x.h)^2 - h^2 x^2 is positive definite when the lattice is hyperbolic
/// and equals 2k^2 - h^2 square on the target set, so each degree slice is
/// a bounded search.
pub fn enumerate_classes(
    lat: &Lattice,
    h: &DivisorClass,
    square: i64,
    deg_min: i64,
    deg_max: i64,
) -> Result<Vec<DivisorClass>> {
    intersect(lat, h, h)?;
    let h2 = lat.square(h);
    if h2 <= 0 {
        return Err(Error::HeightNotBig(h.clone(), h2));
    }
    if deg_min > deg_max {
        return Ok(Vec::new());
    }
    let gh = lat.apply(h);
    let n = lat.rank();
    // In coordinates y with x = U y the degree is g * y_last.
    let (u, g) = hyperplane_frame(&gh);
    let gram = lat.gram();
    let gu: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| u[k][i] * gram[k][j]).sum()).collect())
        .collect();
    let q: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let gp: i64 = (0..n).map(|k| gu[i][k] * u[k][j]).sum();
                    let e = if i == n - 1 && j == n - 1 { 2 * g * g } else { 0 };
                    e - h2 * gp
                })
                .collect()
        })
        .collect();
    let dec = definite_decomposition(&q).ok_or_else(|| Error::NotHyperbolic(h.clone()))?;
    let search = ShortVectorSearch { q: &dec, n };
    let jobs: Vec<_> = (deg_min..=deg_max)
        .filter(|&k| k % g == 0)
        .flat_map(|k| {
            let b = 2 * k * k - h2 * square;
            if b < 0 {
                return Vec::new();
            }
            search.jobs(k / g, &BigRational::from_integer(BigInt::from(b)))
        })
        .collect();
    let pts = par::map(&jobs, |(y, b)| {
        search
            .finish(y.clone(), b.clone())
            .into_iter()
            .map(|y| DivisorClass((0..n).map(|i| (0..n).map(|j| u[i][j] * y[j]).sum()).collect()))
            .filter(|x| lat.square(x) == square)
            .collect::<Vec<_>>()
    });
    let mut out: Vec<DivisorClass> = pts.into_iter().flatten().collect();
    out.sort_by_key(|x| (lat.dot(x, h), x.clone()));
    Ok(out)
}

/// The shared lattice input format: rank, gram, basis names, named classes,
/// plus a free-form `meta` object carried through untouched.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeFile {
    pub lattice: Lattice,
    pub classes: Vec<(String, DivisorClass)>,
    pub meta: serde_json::Map<String, serde_json::Value>,
}

fn int_row(v: &serde_json::Value, what: &str) -> Result<Vec<i64>> {
    v.as_array()
        .ok_or_else(|| Error::Malformed(format!("{what} is not an array")))?
        .iter()
        .map(|x| x.as_i64().ok_or_else(|| Error::Malformed(format!("{what} has a non-integer entry"))))
        .collect()
}

impl LatticeFile {
    pub fn parse(text: &str) -> Result<Self> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let obj = v.as_object().ok_or_else(|| Error::Malformed("top level is not an object".into()))?;
        let rank = obj
            .get("rank")
            .and_then(|r| r.as_u64())
            .ok_or_else(|| Error::Malformed("missing rank".into()))? as usize;
        let gram: Vec<Vec<i64>> = obj
            .get("gram")
            .and_then(|g| g.as_array())
            .ok_or_else(|| Error::Malformed("missing gram".into()))?
            .iter()
            .map(|row| int_row(row, "gram row"))
            .collect::<Result<_>>()?;
        if gram.len() != rank {
            return Err(Error::Malformed(format!("rank {rank} but {} gram rows", gram.len())));
        }
        let names: Vec<String> = match obj.get("basis_names") {
            Some(n) => n
                .as_array()
                .ok_or_else(|| Error::Malformed("basis_names is not an array".into()))?
                .iter()
                .map(|x| x.as_str().map(str::to_string).ok_or_else(|| Error::Malformed("basis name".into())))
                .collect::<Result<_>>()?,
            None => (1..=rank).map(|i| format!("e{i}")).collect(),
        };
        let lattice = Lattice::new(gram, names)?;
        let mut classes = Vec::new();
        if let Some(c) = obj.get("classes") {
            let c = c.as_object().ok_or_else(|| Error::Malformed("classes is not an object".into()))?;
            for (k, v) in c {
                let coords = int_row(v, k)?;
                if coords.len() != rank {
                    return Err(Error::Malformed(format!("class {k} has length {}", coords.len())));
                }
                classes.push((k.clone(), DivisorClass(coords)));
            }
        }
        let meta = match obj.get("meta") {
            Some(serde_json::Value::Object(m)) => m.clone(),
            Some(_) => return Err(Error::Malformed("meta is not an object".into())),
            None => serde_json::Map::new(),
        };
        for k in obj.keys() {
            if !["rank", "gram", "basis_names", "classes", "meta"].contains(&k.as_str()) {
                return Err(Error::Malformed(format!("unknown field {k}")));
            }
        }
        Ok(LatticeFile { lattice, classes, meta })
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn class(&self, name: &str) -> Option<&DivisorClass> {
        self.classes.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }

    /// Look a class up by name, then by basis name, then as a literal
    /// coordinate tuple "(a,b,...)" or "a,b,...".
    pub fn resolve(&self, spec: &str) -> Result<DivisorClass> {
        if let Some(c) = self.class(spec) {
            return Ok(c.clone());
        }
        if let Some(i) = self.lattice.basis_names().iter().position(|n| n == spec) {
            return Ok(self.lattice.basis_vector(i));
        }
        let body = spec.trim().trim_start_matches('(').trim_end_matches(')');
        let coords: std::result::Result<Vec<i64>, _> =
            body.split(',').map(|t| t.trim().parse::<i64>()).collect();
        match coords {
            Ok(c) if c.len() == self.lattice.rank() => Ok(DivisorClass(c)),
            Ok(c) => Err(Error::LatticeMismatch(c.len(), self.lattice.rank())),
            Err(_) => Err(Error::Parse(format!("unknown class {spec}"))),
        }
    }

    /// Canonical text form; `parse` followed by `to_text` reproduces a
    /// canonical file byte for byte.
    pub fn to_text(&self) -> String {
        let row = |v: &[i64]| {
            let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
            format!("[{}]", parts.join(", "))
        };
        let quote = |s: &str| serde_json::Value::String(s.to_string()).to_string();
        let mut out = String::from("{\n");
        out += &format!("  \"rank\": {},\n", self.lattice.rank());
        out += "  \"gram\": [\n";
        let rows: Vec<String> = self.lattice.gram().iter().map(|r| format!("    {}", row(r))).collect();
        out += &rows.join(",\n");
        out += "\n  ],\n";
        let names: Vec<String> = self.lattice.basis_names().iter().map(|n| quote(n)).collect();
        out += &format!("  \"basis_names\": [{}],\n", names.join(", "));
        out += "  \"classes\": {";
        if self.classes.is_empty() {
            out += "}";
        } else {
            out += "\n";
            let cl: Vec<String> = self
                .classes
                .iter()
                .map(|(n, c)| format!("    {}: {}", quote(n), row(&c.0)))
                .collect();
            out += &cl.join(",\n");
            out += "\n  }";
        }
        if !self.meta.is_empty() {
            let m = serde_json::to_string_pretty(&serde_json::Value::Object(self.meta.clone()))
                .expect("meta serializes");
            out += ",\n  \"meta\": ";
            out += &m.replace('\n', "\n  ");
        }
        out += "\n}\n";
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(g: Vec<Vec<i64>>) -> Lattice {
        Lattice::from_gram(g).unwrap()
    }

    #[test]
    fn intersection_numbers() {
        let l = lat(vec![vec![8, 3], vec![3, 0]]);
        let big_l = DivisorClass(vec![1, 0]);
        let e = DivisorClass(vec![0, 1]);
        assert_eq!(intersect(&l, &big_l, &big_l).unwrap(), 8);
        assert_eq!(intersect(&l, &e, &e).unwrap(), 0);
        assert_eq!(intersect(&l, &big_l, &e).unwrap(), 3);
        assert!(matches!(
            intersect(&l, &big_l, &DivisorClass(vec![1, 0, 0])),
            Err(Error::LatticeMismatch(2, 3))
        ));
    }

    #[test]
    fn signatures() {
        let s = |g| signature(&lat(g));
        assert_eq!(s(vec![vec![8, 3], vec![3, 0]]), Signature { positives: 1, negatives: 1, zeros: 0 });
        assert_eq!(s(vec![vec![-2]]), Signature { positives: 0, negatives: 1, zeros: 0 });
        assert_eq!(s(vec![vec![0, 1], vec![1, 0]]), Signature { positives: 1, negatives: 1, zeros: 0 });
        assert_eq!(s(vec![vec![0, 0], vec![0, 0]]), Signature { positives: 0, negatives: 0, zeros: 2 });
        assert_eq!(
            s(vec![vec![1, 1], vec![1, 1]]),
            Signature { positives: 1, negatives: 0, zeros: 1 }
        );
    }

    #[test]
    fn charpoly_small() {
        // [[2,1],[1,2]]: x^2 - 4x + 3
        let p = charpoly(&[vec![2, 1], vec![1, 2]]);
        assert_eq!(p, vec![BigInt::from(3), BigInt::from(-4), BigInt::from(1)]);
        assert_eq!(
            signature_charpoly(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 0]]),
            Signature { positives: 1, negatives: 1, zeros: 1 }
        );
    }

    #[test]
    fn nikulin() {
        assert!(nikulin_exists(&lat(vec![vec![8, 3], vec![3, 0]])));
        assert!(nikulin_exists(&lat(vec![vec![2]])));
        assert!(!nikulin_exists(&lat(vec![vec![2, 0], vec![0, 2]])));
        assert!(!nikulin_exists(&lat(vec![vec![1, 0], vec![0, -1]])));
    }

    #[test]
    fn reflections() {
        let l = lat(vec![vec![-2, 1], vec![1, 0]]);
        let g = DivisorClass(vec![1, 0]);
        assert_eq!(reflect(&l, &g, &g).unwrap(), DivisorClass(vec![-1, 0]));
        let e = DivisorClass(vec![0, 1]);
        assert!(matches!(reflect(&l, &g, &e), Err(Error::NotARoot(_, 0))));
        let d = DivisorClass(vec![1, 2]);
        assert_eq!(lat(vec![vec![-2, 1], vec![1, 0]]).dot(&d, &g), 0);
        assert_eq!(reflect(&l, &d, &g).unwrap(), d);
    }

    #[test]
    fn rr_chi() {
        let l = lat(vec![vec![8, 3], vec![3, 0]]);
        assert_eq!(riemann_roch_chi(&l, &DivisorClass(vec![0, 1])).unwrap(), 2);
        assert_eq!(riemann_roch_chi(&l, &DivisorClass(vec![1, 0])).unwrap(), 6);
        let odd = lat(vec![vec![1]]);
        assert!(matches!(riemann_roch_chi(&odd, &DivisorClass(vec![1])), Err(Error::OddSquare(_, 1))));
    }

    #[test]
    fn enumeration_basics() {
        let l = lat(vec![vec![8, 3], vec![3, 0]]);
        let h = DivisorClass(vec![1, 0]);
        assert!(enumerate_classes(&l, &h, -2, 0, 8).unwrap().is_empty());
        let own = enumerate_classes(&l, &h, 8, 8, 8).unwrap();
        assert!(own.contains(&h));
        let iso = enumerate_classes(&l, &h, 0, 1, 3).unwrap();
        assert_eq!(iso, vec![DivisorClass(vec![0, 1])]);
        assert!(matches!(
            enumerate_classes(&l, &DivisorClass(vec![0, 1]), -2, 0, 3),
            Err(Error::HeightNotBig(_, 0))
        ));
    }

    #[test]
    fn file_round_trip() {
        let text = "{\n  \"rank\": 2,\n  \"gram\": [\n    [8, 3],\n    [3, 0]\n  ],\n  \"basis_names\": [\"L\", \"E\"],\n  \"classes\": {\n    \"L\": [1, 0],\n    \"D\": [0, 1]\n  },\n  \"meta\": {\n    \"genus\": 5\n  }\n}\n";
        let f = LatticeFile::parse(text).unwrap();
        assert_eq!(f.to_text(), text);
        assert_eq!(LatticeFile::parse(&f.to_text()).unwrap(), f);
        assert_eq!(f.resolve("D").unwrap(), DivisorClass(vec![0, 1]));
        assert_eq!(f.resolve("E").unwrap(), DivisorClass(vec![0, 1]));
        assert_eq!(f.resolve("(1,-2)").unwrap(), DivisorClass(vec![1, -2]));
        assert!(LatticeFile::parse("{\"rank\": 1, \"gram\": [[2]], \"bogus\": 1}").is_err());
    }

    #[test]
    fn short_vectors_of_identity() {
        let pts = short_vectors(&[vec![1, 0], vec![0, 1]], 1).unwrap();
        assert_eq!(pts.len(), 5);
        assert!(short_vectors(&[vec![1, 0], vec![0, -1]], 1).is_none());
    }
}
