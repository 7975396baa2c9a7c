//! Classification rows: from a fixture lattice to scroll type, moduli count,
//! case tag and singularities, and the diff against the embedded tables.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize, Serializer};

use crate::clifford::{clifford_index, with_divisor, CaseTag, Perfect};
use crate::cohomology::K3Config;
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, LatticeFile};
use crate::moduli::{
    c1_singular_table, c1_singular_types, c1_table, c2_singular_table, c2_table, check_c1_table, check_c2_table,
    moduli_c1, moduli_c2, ModuliCheck,
};
use crate::par;
use crate::resolution::{
    betti_fiber, bsum_solver, bsum_solver_smooth, bvector_case, bvector_cases, top_sum_plus_variant, BSumLedger,
    MaxCount,
};
use crate::scroll::{dual_invariants, scroll_numerics, t0_type, ScrollType};

/// One rational double point type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ade {
    A(usize),
    D(usize),
    E(usize),
}

impl fmt::Display for Ade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ade::A(n) => write!(f, "A{n}"),
            Ade::D(n) => write!(f, "D{n}"),
            Ade::E(n) => write!(f, "E{n}"),
        }
    }
}

/// Multiset of singularities; empty means smooth.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Singularities(pub Vec<Ade>);

impl Singularities {
    pub fn new(mut v: Vec<Ade>) -> Self {
        v.sort();
        Singularities(v)
    }

    pub fn is_smooth(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses "sm.", "A1", "2A1", "A1 + A3", "A_2 + 2A_1".
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "sm." || s == "sm" || s.is_empty() {
            return Ok(Singularities::default());
        }
        let mut out = Vec::new();
        for part in s.split('+') {
            let p: String = part.chars().filter(|c| !c.is_whitespace() && *c != '_').collect();
            let pos = p.find(['A', 'D', 'E']).ok_or_else(|| Error::Parse(format!("singularity {part:?}")))?;
            let mult: usize = if pos == 0 { 1 } else { p[..pos].parse().map_err(|_| Error::Parse(p.clone()))? };
            let n: usize = p[pos + 1..].parse().map_err(|_| Error::Parse(p.clone()))?;
            let t = match &p[pos..pos + 1] {
                "A" => Ade::A(n),
                "D" => Ade::D(n),
                _ => Ade::E(n),
            };
            out.extend(std::iter::repeat_n(t, mult));
        }
        Ok(Singularities::new(out))
    }
}

impl fmt::Display for Singularities {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("sm.");
        }
        let mut counts: BTreeMap<Ade, usize> = BTreeMap::new();
        for a in &self.0 {
            *counts.entry(*a).or_default() += 1;
        }
        let parts: Vec<String> =
            counts.iter().map(|(a, &k)| if k == 1 { a.to_string() } else { format!("{k}{a}") }).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Serialize for Singularities {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Dual graph of the contracted curves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdeGraph {
    pub vertices: Vec<DivisorClass>,
    /// (i, j, intersection) for i < j with positive intersection.
    pub edges: Vec<(usize, usize, i64)>,
}

impl AdeGraph {
    pub fn new(cfg: &K3Config, curves: &[DivisorClass]) -> Self {
        let mut edges = Vec::new();
        for i in 0..curves.len() {
            for j in i + 1..curves.len() {
                let m = cfg.dot(&curves[i], &curves[j]);
                if m > 0 {
                    edges.push((i, j, m));
                }
            }
        }
        AdeGraph { vertices: curves.to_vec(), edges }
    }

    fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            let mut members = Vec::new();
            comp[s] = id;
            while let Some(v) = stack.pop() {
                members.push(v);
                for &(a, b, _) in &self.edges {
                    let w = if a == v { b } else if b == v { a } else { continue };
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    fn classify_component(&self, members: &[usize]) -> Result<Ade> {
        let n = members.len();
        let inside: Vec<&(usize, usize, i64)> =
            self.edges.iter().filter(|(a, b, _)| members.contains(a) && members.contains(b)).collect();
        let bad = || Error::SingularityNotADE(format!("{n} curves, edges {:?}", inside));
        if inside.iter().any(|(_, _, m)| *m != 1) || inside.len() + 1 != n {
            return Err(bad());
        }
        let deg = |v: usize| inside.iter().filter(|(a, b, _)| *a == v || *b == v).count();
        let branches: Vec<usize> = members.iter().copied().filter(|&v| deg(v) >= 3).collect();
        if branches.is_empty() {
            return Ok(Ade::A(n));
        }
        if branches.len() > 1 || deg(branches[0]) > 3 {
            return Err(bad());
        }
        // Arm lengths from the branch vertex.
        let b = branches[0];
        let mut arms = Vec::new();
        for &(x, y, _) in inside.iter().filter(|(x, y, _)| *x == b || *y == b) {
            let mut prev = b;
            let mut cur = if *x == b { *y } else { *x };
            let mut len = 1;
            loop {
                let next = inside
                    .iter()
                    .filter_map(|(p, q, _)| if *p == cur { Some(*q) } else if *q == cur { Some(*p) } else { None })
                    .find(|&w| w != prev);
                match next {
                    Some(w) => {
                        prev = cur;
                        cur = w;
                        len += 1;
                    }
                    None => break,
                }
            }
            arms.push(len);
        }
        arms.sort_unstable();
        match arms[..] {
            [1, 1, _] => Ok(Ade::D(n)),
            [1, 2, 2] | [1, 2, 3] | [1, 2, 4] => Ok(Ade::E(n)),
            _ => Err(bad()),
        }
    }

    pub fn classify(&self) -> Result<Singularities> {
        let mut out = Vec::new();
        for c in self.components() {
            out.push(self.classify_component(&c)?);
        }
        Ok(Singularities::new(out))
    }
}

/// Rational double points of the model: the Dynkin types of the curves
/// contracted by L.
pub fn singularity_type(cfg: &K3Config) -> Result<Singularities> {
    let curves = cfg.curves()?;
    AdeGraph::new(cfg, &curves.contracted).classify()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Computed,
    PaperAsserted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BData {
    /// Quadric twists b in 2H0 - bF on T0, from the named searches.
    Vectors { cases: Vec<String>, vectors: Vec<Vec<i64>>, asserted: Vec<MaxCount> },
    /// Only the sums of the twists are determined.
    Sums { ledger: BSumLedger },
    Unavailable { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModuliCross {
    pub formula: String,
    /// One value per admissible b1 (a single value for c = 1).
    pub values: Vec<i64>,
    pub agrees: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseRecord {
    pub g: i64,
    pub c: i64,
    #[serde(rename = "Dsq")]
    pub dsq: i64,
    pub case_tag: CaseTag,
    pub perfect: Perfect,
    pub d_seq: Vec<i64>,
    pub scroll_type: ScrollType,
    pub t0_type: ScrollType,
    pub b_data: BData,
    pub rank: usize,
    /// 20 - rank.
    pub num_moduli: i64,
    pub moduli_check: Option<ModuliCross>,
    pub singularity: Singularities,
    pub provenance: BTreeMap<&'static str, Provenance>,
}

fn raised(st: &ScrollType, by: i64) -> Result<ScrollType> {
    ScrollType::new(st.entries().iter().map(|e| e + by).collect())
}

/// The moduli count predicted by the c = 1 and c = 2 formulas. Singular
/// types are counted through their raised smooth type (g + 3 for c = 1,
/// g + 4 for c = 2).
pub fn moduli_cross(g: i64, c: i64, dsq: i64, st: &ScrollType, num_moduli: i64) -> Option<ModuliCross> {
    if dsq != 0 {
        return None;
    }
    let (formula, values) = match (c, st.is_smooth()) {
        (1, true) => ("c=1 count".to_string(), moduli_c1(st, g).map(|m| vec![m.num_moduli]).unwrap_or_default()),
        (1, false) => {
            let up = raised(st, 1).ok()?;
            (
                format!("c=1 count of {up} in P^{}", g + 3),
                moduli_c1(&up, g + 3).map(|m| vec![m.num_moduli]).unwrap_or_default(),
            )
        }
        (2, true) => {
            let vals = c2_table()
                .into_iter()
                .filter(|r| r.g == g && &r.st == st)
                .filter_map(|r| moduli_c2(st, r.b1, g).ok().map(|m| m.num_moduli))
                .collect();
            ("c=2 count over admissible b1".to_string(), vals)
        }
        (2, false) => {
            let up = raised(st, 1).ok()?;
            let vals = c2_singular_table()
                .into_iter()
                .filter(|r| r.g == g && &r.st == st)
                .flat_map(|r| r.b1)
                .filter_map(|b1| moduli_c2(&up, b1 + 2, g + 4).ok().map(|m| m.num_moduli))
                .collect();
            (format!("c=2 count of {up} in P^{}", g + 4), vals)
        }
        _ => return None,
    };
    let mut values: Vec<i64> = values;
    values.sort_unstable();
    values.dedup();
    let agrees = values.contains(&num_moduli);
    Some(ModuliCross { formula, values, agrees })
}

fn case_names(g: i64, c: i64, dsq: i64, t0: &ScrollType, tag: CaseTag) -> Vec<&'static str> {
    let by_tag: &[&str] = match tag {
        CaseTag::CG1 => &["cg1"],
        CaseTag::CG2 => &["cg2"],
        CaseTag::CG3 | CaseTag::CG4 | CaseTag::CG5 | CaseTag::CG6 | CaseTag::CG7 => &["cg3"],
        CaseTag::CG1p => &["cg1p"],
        CaseTag::CG2p => &["cg2p"],
        CaseTag::CG3p | CaseTag::CG4p => &["cg3p"],
        _ => &[],
    };
    if !by_tag.is_empty() {
        return by_tag.to_vec();
    }
    bvector_cases()
        .into_iter()
        .filter(|k| !k.name.starts_with("cg"))
        .filter(|k| k.spec.g == g && k.spec.c == c && k.spec.dsq == dsq && &k.spec.t0 == t0)
        .map(|k| k.name)
        .collect()
}

/// Union of the b-vectors found by the named searches, sorted.
pub fn bvectors_of(cases: &[&str]) -> Result<(Vec<Vec<i64>>, Vec<MaxCount>)> {
    let mut vectors = BTreeSet::new();
    let mut asserted = Vec::new();
    for name in cases {
        let case = bvector_case(name).ok_or_else(|| Error::Parse(format!("unknown b-vector case {name}")))?;
        vectors.extend(case.run(None)?.vectors);
        for m in &case.spec.asserted {
            if !asserted.contains(m) {
                asserted.push(m.clone());
            }
        }
    }
    Ok((vectors.into_iter().rev().collect(), asserted))
}

fn b_data(g: i64, c: i64, dsq: i64, st: &ScrollType, tag: CaseTag) -> Result<BData> {
    let t0 = t0_type(st);
    let cases = case_names(g, c, dsq, &t0, tag);
    if !cases.is_empty() {
        let (vectors, asserted) = bvectors_of(&cases)?;
        return Ok(BData::Vectors { cases: cases.iter().map(|s| s.to_string()).collect(), vectors, asserted });
    }
    let betti = match betti_fiber(c, dsq) {
        Ok(b) => b,
        Err(e) => return Ok(BData::Unavailable { reason: e.to_string() }),
    };
    let ledger = if dsq == 0 && st.is_smooth() { bsum_solver_smooth(g, c, &betti) } else { bsum_solver(g, c, dsq, &betti) };
    Ok(match ledger {
        Ok(ledger) => BData::Sums { ledger },
        Err(e) => BData::Unavailable { reason: e.to_string() },
    })
}

/// Full pipeline for one fixture. Uses the class named "D" as Clifford
/// divisor when present, otherwise the one chosen by `clifford_index`.
pub fn run_case(f: &LatticeFile) -> Result<CaseRecord> {
    let cfg = K3Config::from_file(f)?;
    let cd = match f.class("D") {
        Some(d) => with_divisor(&cfg, d)?,
        None => clifford_index(&cfg)?,
    };
    let dsq = cd.dsq(&cfg).ok_or_else(|| Error::NotCliffordDivisor("no Clifford divisor".into()))?;
    let (g, c) = (cd.g, cd.c);
    let d_seq = dual_invariants(&cfg, &cd)?;
    let st = crate::scroll::scroll_type(&d_seq)?;
    scroll_numerics(&st, g, c, dsq)?;
    if c == 1 && dsq == 0 && st.entries() == [g - 2, 0, 0] {
        return Err(Error::NumericsMismatch(format!("type ({},0,0) cannot carry a model", g - 2)));
    }
    let singularity = singularity_type(&cfg)?;
    let rank = cfg.lattice.rank();
    let num_moduli = 20 - rank as i64;
    let b_data = b_data(g, c, dsq, &st, cd.case_tag)?;
    let mut provenance: BTreeMap<&'static str, Provenance> = [
        "g",
        "c",
        "Dsq",
        "case_tag",
        "perfect",
        "d_seq",
        "scroll_type",
        "t0_type",
        "rank",
        "num_moduli",
        "moduli_check",
        "singularity",
    ]
    .into_iter()
    .map(|k| (k, Provenance::Computed))
    .collect();
    let b_prov = match &b_data {
        BData::Vectors { asserted, .. } if !asserted.is_empty() => Provenance::PaperAsserted,
        _ => Provenance::Computed,
    };
    provenance.insert("b_data", b_prov);
    Ok(CaseRecord {
        g,
        c,
        dsq,
        case_tag: cd.case_tag,
        perfect: cd.perfect,
        d_seq,
        t0_type: t0_type(&st),
        moduli_check: moduli_cross(g, c, dsq, &st, num_moduli),
        scroll_type: st,
        b_data,
        rank,
        num_moduli,
        singularity,
        provenance,
    })
}

/// One row of an embedded model table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedRow {
    /// For variant rows: index of the main row they refine.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub of: Option<usize>,
    pub c: i64,
    pub dsq: i64,
    pub scroll: String,
    #[serde(rename = "mod")]
    pub num_moduli: i64,
    #[serde(rename = "type")]
    pub type_of_l: String,
    /// Case tags the "type of L" column allows.
    pub tags: Vec<String>,
    pub sing: String,
    /// Twists as printed: (b1, b2) or b_i in the T resolution for D^2 = 0,
    /// quadric twists on T0 otherwise.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub b: Vec<Vec<i64>>,
    /// b-vector searches whose union must reproduce `b`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bcase: Vec<String>,
    #[serde(default, rename = "L", skip_serializing_if = "Option::is_none")]
    pub l_expr: Option<String>,
    /// Fields taken on the table's word alone.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub asserted: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedTable {
    pub genus: i64,
    /// The general projective model.
    pub banner: String,
    pub rows: Vec<ExpectedRow>,
    pub variants: Vec<ExpectedRow>,
}

pub fn expected_table(g: i64) -> Option<ExpectedTable> {
    let text = match g {
        5 => include_str!("../data/tables/models_g5.json"),
        6 => include_str!("../data/tables/models_g6.json"),
        7 => include_str!("../data/tables/models_g7.json"),
        8 => include_str!("../data/tables/models_g8.json"),
        9 => include_str!("../data/tables/models_g9.json"),
        10 => include_str!("../data/tables/models_g10.json"),
        _ => return None,
    };
    Some(serde_json::from_str(text).expect("embedded table"))
}

pub const FIXTURE_ENV: &str = "K3SCROLL_FIXTURES";

/// `$K3SCROLL_FIXTURES` if set, else the fixtures shipped with the crate.
pub fn fixture_dir() -> PathBuf {
    match std::env::var_os(FIXTURE_ENV) {
        Some(p) => PathBuf::from(p),
        None => PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/data/fixtures")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    Row,
    Variant,
}

impl RowKind {
    fn file_stem(self) -> &'static str {
        match self {
            RowKind::Row => "row",
            RowKind::Variant => "var",
        }
    }
}

pub fn fixture_path(dir: &Path, g: i64, kind: RowKind, index: usize) -> PathBuf {
    dir.join(format!("g{g}")).join(format!("{}{:02}.json", kind.file_stem(), index + 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldCheck {
    pub field: &'static str,
    pub expected: String,
    pub computed: String,
    pub ok: bool,
    pub expected_provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BCheck {
    pub cases: Vec<String>,
    pub expected: Vec<Vec<i64>>,
    pub computed: Vec<Vec<i64>>,
    pub ok: bool,
    pub asserted: Vec<MaxCount>,
    /// Alternative printed lists of a case whose length or sum is wrong.
    pub source_inconsistent: Vec<(String, Vec<Vec<i64>>)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Match,
    Mismatch,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct RowReport {
    pub g: i64,
    pub kind: RowKind,
    pub index: usize,
    pub expected: ExpectedRow,
    pub fixture: String,
    pub record: Option<CaseRecord>,
    pub error: Option<String>,
    pub checks: Vec<FieldCheck>,
    pub b_check: Option<BCheck>,
    pub status: RowStatus,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenusReport {
    pub g: i64,
    pub banner: String,
    pub rows: Vec<RowReport>,
    pub variants: Vec<RowReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftCheck {
    pub g: i64,
    pub singular: ScrollType,
    pub raised: ScrollType,
    pub in_table: bool,
}

/// A b-sum where the stated values disagree among themselves or with the
/// Euler characteristic solve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BSumNote {
    pub g: i64,
    pub c: i64,
    pub dsq: i64,
    pub quantity: String,
    pub computed: i64,
    /// (where stated, value).
    pub stated: Vec<(String, i64)>,
}

/// The (c, D^2) = (2, 2) b-sums for each genus with g >= 7.
pub fn bsum_notes(genera: std::ops::RangeInclusive<i64>) -> Result<Vec<BSumNote>> {
    let betti = betti_fiber(2, 2)?;
    let mut out = Vec::new();
    for g in genera.filter(|&g| g >= 7) {
        let l = bsum_solver(g, 2, 2, &betti)?;
        let top = l.sum(3, 5).ok_or_else(|| Error::SumIndeterminate("top b-sum".into()))?;
        let diff = l.difference(4).ok_or_else(|| Error::SumIndeterminate("degree-4 difference".into()))?;
        out.push(BSumNote {
            g,
            c: 2,
            dsq: 2,
            quantity: "sum b(3,5)".into(),
            computed: top,
            stated: vec![("worked example".into(), 2 * g - 1), ("closed form".into(), top_sum_plus_variant(g, 2))],
        });
        out.push(BSumNote {
            g,
            c: 2,
            dsq: 2,
            quantity: "sum b(3,4) - sum b(2,4)".into(),
            computed: diff,
            stated: vec![("worked example".into(), -2 * g - 7)],
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub genera: Vec<GenusReport>,
    pub c1_table: Vec<ModuliCheck>,
    pub c2_table: Vec<ModuliCheck>,
    pub shift_law: Vec<ShiftCheck>,
    /// No c = 1 type (g-2,0,0) among the computed types or records.
    pub no_rational_normal_cone: bool,
    pub bsum_notes: Vec<BSumNote>,
}

impl RowReport {
    pub fn ok(&self) -> bool {
        self.status == RowStatus::Match
    }
}

impl Report {
    pub fn rows(&self) -> impl Iterator<Item = &RowReport> {
        self.genera.iter().flat_map(|g| g.rows.iter())
    }

    pub fn variants(&self) -> impl Iterator<Item = &RowReport> {
        self.genera.iter().flat_map(|g| g.variants.iter())
    }

    pub fn ok(&self) -> bool {
        self.rows().all(RowReport::ok)
            && self.variants().all(RowReport::ok)
            && self.c1_table.iter().all(ModuliCheck::ok)
            && self.c2_table.iter().all(ModuliCheck::ok)
            && self.shift_law.iter().all(|s| s.in_table)
            && self.no_rational_normal_cone
    }
}

fn field_prov(row: &ExpectedRow, name: &str) -> Provenance {
    if row.asserted.iter().any(|a| a == name) {
        Provenance::PaperAsserted
    } else {
        Provenance::Computed
    }
}

fn check(row: &ExpectedRow, field: &'static str, key: &str, expected: String, computed: String, ok: bool) -> FieldCheck {
    FieldCheck { field, expected, computed, ok, expected_provenance: field_prov(row, key) }
}

fn tag_label(names: &[String]) -> String {
    let parts: Vec<String> =
        names.iter().map(|n| CaseTag::parse(n).map_or_else(|| n.clone(), |t| t.notation())).collect();
    parts.join(" or ")
}

fn compare(kind: RowKind, row: &ExpectedRow, rec: &CaseRecord) -> Result<(Vec<FieldCheck>, Option<BCheck>)> {
    let mut out = Vec::new();
    out.push(check(row, "c", "c", row.c.to_string(), rec.c.to_string(), row.c == rec.c));
    out.push(check(row, "Dsq", "dsq", row.dsq.to_string(), rec.dsq.to_string(), row.dsq == rec.dsq));
    let st: ScrollType = row.scroll.parse()?;
    out.push(check(row, "scroll_type", "scroll", st.to_string(), rec.scroll_type.to_string(), st == rec.scroll_type));
    out.push(check(
        row,
        "num_moduli",
        "mod",
        row.num_moduli.to_string(),
        rec.num_moduli.to_string(),
        row.num_moduli == rec.num_moduli,
    ));
    let tag_ok = row.tags.iter().any(|t| t == rec.case_tag.name());
    out.push(check(row, "case_tag", "tags", tag_label(&row.tags), rec.case_tag.notation(), tag_ok));
    let sing = Singularities::parse(&row.sing)?;
    out.push(check(row, "singularity", "sing", sing.to_string(), rec.singularity.to_string(), sing == rec.singularity));
    if let Some(m) = &rec.moduli_check {
        let vals: Vec<String> = m.values.iter().map(|v| v.to_string()).collect();
        // A variant is a proper subfamily of its row, so it sits strictly
        // below the count for the whole scroll type.
        let (expected, ok) = match kind {
            RowKind::Row => (rec.num_moduli.to_string(), m.agrees),
            RowKind::Variant => {
                (format!("more than {}", rec.num_moduli), m.values.iter().any(|&v| v > rec.num_moduli))
            }
        };
        out.push(FieldCheck {
            field: "moduli_formula",
            expected,
            computed: format!("{} = {{{}}}", m.formula, vals.join(", ")),
            ok,
            expected_provenance: Provenance::Computed,
        });
    }
    let b_check = if row.bcase.is_empty() {
        None
    } else {
        let names: Vec<&str> = row.bcase.iter().map(String::as_str).collect();
        let (computed, asserted) = bvectors_of(&names)?;
        let mut expected = row.b.clone();
        expected.sort_by(|a, b| b.cmp(a));
        let mut source_inconsistent = Vec::new();
        for n in &names {
            if let Some(case) = bvector_case(n) {
                let bad = case.malformed_listed()?;
                if !bad.is_empty() {
                    source_inconsistent.push((n.to_string(), bad));
                }
            }
        }
        Some(BCheck { cases: row.bcase.clone(), ok: computed == expected, expected, computed, asserted, source_inconsistent })
    };
    Ok((out, b_check))
}

fn report_row(g: i64, kind: RowKind, index: usize, row: &ExpectedRow, path: &Path) -> RowReport {
    let fixture = path.display().to_string();
    let result = LatticeFile::read(path).and_then(|f| run_case(&f)).and_then(|rec| {
        let (checks, b_check) = compare(kind, row, &rec)?;
        Ok((rec, checks, b_check))
    });
    match result {
        Ok((rec, checks, b_check)) => {
            let ok = checks.iter().all(|c| c.ok) && b_check.as_ref().is_none_or(|b| b.ok);
            RowReport {
                g,
                kind,
                index,
                expected: row.clone(),
                fixture,
                record: Some(rec),
                error: None,
                checks,
                b_check,
                status: if ok { RowStatus::Match } else { RowStatus::Mismatch },
            }
        }
        Err(e) => RowReport {
            g,
            kind,
            index,
            expected: row.clone(),
            fixture,
            record: None,
            error: Some(e.to_string()),
            checks: Vec::new(),
            b_check: None,
            status: RowStatus::Error,
        },
    }
}

pub fn shift_law_checks() -> Vec<ShiftCheck> {
    let upper = c1_table();
    let mut out = Vec::new();
    for (g, types) in c1_singular_table() {
        for t in types {
            let up = raised(&t, 1).expect("raised type");
            let in_table = upper.iter().any(|r| r.g == g + 3 && r.st == up);
            out.push(ShiftCheck { g, singular: t, raised: up, in_table });
        }
    }
    out
}

/// Runs every table row (and variant) of the given genera from the fixtures
/// in `dir`. Cases run concurrently; the report is in table order.
pub fn regenerate_tables(genera: std::ops::RangeInclusive<i64>, dir: &Path) -> Result<Report> {
    let mut jobs = Vec::new();
    let mut gaps = Vec::new();
    let mut banners = BTreeMap::new();
    for g in genera.clone() {
        let t = expected_table(g).ok_or_else(|| Error::FixtureGap(format!("no table for g = {g}")))?;
        banners.insert(g, t.banner.clone());
        for (kind, rows) in [(RowKind::Row, &t.rows), (RowKind::Variant, &t.variants)] {
            for (i, r) in rows.iter().enumerate() {
                let p = fixture_path(dir, g, kind, i);
                if !p.exists() {
                    gaps.push(format!("g={g} {} {} {}", kind.file_stem(), i + 1, r.scroll));
                }
                jobs.push((g, kind, i, r.clone(), p));
            }
        }
    }
    if !gaps.is_empty() {
        return Err(Error::FixtureGap(gaps.join("; ")));
    }
    let done = par::map(&jobs, |(g, kind, i, r, p)| report_row(*g, *kind, *i, r, p));
    let mut genera_out: Vec<GenusReport> = banners
        .into_iter()
        .map(|(g, banner)| GenusReport { g, banner, rows: Vec::new(), variants: Vec::new() })
        .collect();
    for rr in done {
        let gr = genera_out.iter_mut().find(|x| x.g == rr.g).expect("genus present");
        match rr.kind {
            RowKind::Row => gr.rows.push(rr),
            RowKind::Variant => gr.variants.push(rr),
        }
    }
    let no_cone = genera.clone().all(|g| !c1_singular_types(g).iter().any(|t| t.entries() == [g - 2, 0, 0]))
        && genera_out.iter().flat_map(|gr| gr.rows.iter().chain(&gr.variants)).all(|rr| {
            rr.record
                .as_ref()
                .is_none_or(|r| !(r.c == 1 && r.dsq == 0 && r.scroll_type.entries() == [r.g - 2, 0, 0]))
        });
    Ok(Report {
        genera: genera_out,
        c1_table: check_c1_table(),
        c2_table: check_c2_table(),
        shift_law: shift_law_checks(),
        no_rational_normal_cone: no_cone,
        bsum_notes: bsum_notes(genera)?,
    })
}

fn status_word(r: &RowReport) -> &'static str {
    match r.status {
        RowStatus::Match => "match",
        RowStatus::Mismatch => "MISMATCH",
        RowStatus::Error => "ERROR",
    }
}

fn render_row(out: &mut String, r: &RowReport) {
    let e = &r.expected;
    let label = match r.kind {
        RowKind::Row => format!("{:>2}", r.index + 1),
        RowKind::Variant => format!("v{}", r.index + 1),
    };
    let asserted = if e.asserted.is_empty() { "" } else { " *" };
    let (tag, sing, moduli) = match &r.record {
        Some(rec) => (rec.case_tag.notation(), rec.singularity.to_string(), rec.num_moduli.to_string()),
        None => ("-".into(), "-".into(), "-".into()),
    };
    let _ = writeln!(
        out,
        "  {label} {} {} {:<22} {:>3} {:<10} {:<9} {}{asserted}",
        e.c,
        e.dsq,
        e.scroll,
        moduli,
        tag,
        sing,
        status_word(r)
    );
    if let Some(err) = &r.error {
        let _ = writeln!(out, "       error: {err}");
    }
    for c in r.checks.iter().filter(|c| !c.ok) {
        let _ = writeln!(out, "       {}: expected {}, computed {}", c.field, c.expected, c.computed);
    }
    if let Some(b) = &r.b_check {
        let fmt = |v: &[Vec<i64>]| v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(" ");
        let _ = writeln!(
            out,
            "       b-lists [{}]: {}{}",
            b.cases.join(","),
            if b.ok { "match " } else { "MISMATCH " },
            fmt(&b.computed)
        );
        if !b.ok {
            let _ = writeln!(out, "         expected {}", fmt(&b.expected));
        }
        for m in &b.asserted {
            let _ = writeln!(out, "         asserted: at most {} twists >= {} ({})", m.max, m.at_least, m.reason);
        }
        for (n, bad) in &b.source_inconsistent {
            let _ = writeln!(out, "         source-inconsistent list for {n}: {}", fmt(bad));
        }
    }
    if let Some(note) = &e.note {
        let _ = writeln!(out, "       * {}: {note}", e.asserted.join(", "));
    }
}

impl Report {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for gr in &self.genera {
            let _ = writeln!(out, "g = {}: general model is a {}", gr.g, gr.banner);
            let _ = writeln!(out, "   # c D2 scroll type            mod type       sing      status");
            for r in &gr.rows {
                render_row(&mut out, r);
            }
            for r in &gr.variants {
                render_row(&mut out, r);
            }
            out.push('\n');
        }
        let bad = |v: &[ModuliCheck]| v.iter().filter(|c| !c.ok()).count();
        let _ = writeln!(out, "c=1 moduli table: {} rows, {} mismatches", self.c1_table.len(), bad(&self.c1_table));
        let _ = writeln!(out, "c=2 moduli table: {} rows, {} mismatches", self.c2_table.len(), bad(&self.c2_table));
        let shift_bad = self.shift_law.iter().filter(|s| !s.in_table).count();
        let _ = writeln!(out, "shift law: {} singular types, {} without raised type", self.shift_law.len(), shift_bad);
        let _ = writeln!(out, "no type (g-2,0,0): {}", self.no_rational_normal_cone);
        for n in &self.bsum_notes {
            let stated: Vec<String> = n
                .stated
                .iter()
                .map(|(w, v)| format!("{v} ({w}{})", if *v == n.computed { "" } else { ", differs" }))
                .collect();
            let _ = writeln!(
                out,
                "b-sums g={} (c,D2)=({},{}): {} = {} by the Euler solve; stated {}",
                n.g,
                n.c,
                n.dsq,
                n.quantity,
                n.computed,
                stated.join(", ")
            );
        }
        let rows = self.rows().count();
        let ok = self.rows().filter(|r| r.ok()).count();
        let vrows = self.variants().count();
        let vok = self.variants().filter(|r| r.ok()).count();
        let _ = writeln!(out, "rows: {ok}/{rows} match; variants: {vok}/{vrows} match");
        out
    }
}
