use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use k3scroll::classify::{fixture_dir, regenerate_tables, run_case};
use k3scroll::clifford::{clifford_index, with_divisor};
use k3scroll::cohomology::{h0, is_base_point_free, is_nef, K3Config};
use k3scroll::lattice::{nikulin_exists, signature, LatticeFile};
use k3scroll::moduli::{
    c1_obstruction, check_c1_table, check_c2_table, delta2_c1, moduli_c1, moduli_c2, ModuliCheck,
};
use k3scroll::resolution::{betti_fiber, bvector_case, bvector_cases};
use k3scroll::scroll::{chi_scroll, dual_invariants, h0_scroll, h1_scroll, scroll_type, t0_type, ScrollType};
use k3scroll::Error;
use serde_json::{json, Value};

const USAGE: u8 = 64;
const MISMATCH: u8 = 2;

/// Scroll-embedding invariants of K3 surfaces from Picard lattice data.
///
/// Twists are written aH + bF with b taken literally, so `sections "(3,2,1)" 3 -4`
/// counts sections of 3H - 4F.
#[derive(Parser)]
#[command(name = "k3scroll", version)]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Cap on enumerations (b-vector candidates).
    #[arg(long, global = true)]
    bound: Option<usize>,
    /// Run on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FrameArg {
    /// aH + bF
    #[value(name = "H")]
    H,
    /// aH0 + bF with H0 = H + F on the blown-up scroll
    #[value(name = "H0")]
    H0,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lattice file checks: rank, signature, parity, existence, L.
    Lattice {
        #[command(subcommand)]
        cmd: LatticeCmd,
    },
    /// h0 of a class (name, basis name or coordinates).
    H0 { file: PathBuf, class: String },
    /// Clifford index, divisor and case.
    Clifford {
        file: PathBuf,
        /// Use this class as the Clifford divisor instead of searching.
        #[arg(long)]
        divisor: Option<String>,
    },
    /// d-sequence and scroll type of the model.
    ScrollType { file: PathBuf },
    /// h0 of aH + bF on a scroll of the given type, e.g. "(3,2,1)".
    Sections {
        #[arg(value_name = "TYPE")]
        st: String,
        a: i64,
        #[arg(allow_hyphen_values = true)]
        b: i64,
        #[arg(long, value_enum, default_value = "H")]
        frame: FrameArg,
    },
    /// Betti numbers of the general fiber of the scroll.
    Betti { c: i64, dsq: i64 },
    /// b-vector search for a named case ("list" shows the names).
    Bvectors { case: String },
    /// Moduli counts.
    Moduli {
        #[command(subcommand)]
        cmd: ModuliCmd,
    },
    /// Full classification record for one lattice file.
    Case { file: PathBuf },
    /// Classification rows from the fixtures.
    Classify {
        /// "G..H" or a single genus.
        #[arg(long, default_value = "5..10")]
        genus: String,
        /// Compare against the embedded tables; exit 2 on any mismatch.
        #[arg(long)]
        diff: bool,
        /// Fixture directory (default: $K3SCROLL_FIXTURES or the shipped set).
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum LatticeCmd {
    Check { file: PathBuf },
}

#[derive(Subcommand)]
enum ModuliCmd {
    /// c = 1, smooth type in P^g.
    C1 {
        #[arg(value_name = "TYPE")]
        st: String,
        g: i64,
    },
    /// c = 2, smooth type with b1.
    C2 {
        #[arg(value_name = "TYPE")]
        st: String,
        b1: i64,
        g: i64,
    },
    /// Check the embedded c = 1 and c = 2 tables.
    Tables,
}

enum Failure {
    Usage(String),
    Compute(Error),
    Mismatch,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::Malformed(_) | Error::Io(_) => Failure::Usage(e.to_string()),
            e => Failure::Compute(e),
        }
    }
}

type Out = Result<(String, Value), Failure>;

fn parse_type(s: &str) -> Result<ScrollType, Failure> {
    s.parse().map_err(|e: Error| Failure::Usage(format!("scroll type {s:?}: {e}")))
}

fn parse_genus(s: &str) -> Result<std::ops::RangeInclusive<i64>, Failure> {
    let bad = || Failure::Usage(format!("genus range {s:?}, expected G..H"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

fn read(path: &Path) -> Result<LatticeFile, Failure> {
    Ok(LatticeFile::read(path)?)
}

fn lattice_check(path: &Path) -> Out {
    let f = read(path)?;
    let lat = &f.lattice;
    let sig = signature(lat);
    let mut text = format!(
        "rank {}\nsignature {}\neven {}\nexists {}\n",
        lat.rank(),
        sig,
        lat.is_even(),
        nikulin_exists(lat)
    );
    let mut v = json!({
        "rank": lat.rank(),
        "signature": sig,
        "even": lat.is_even(),
        "exists": nikulin_exists(lat),
    });
    if f.class("L").is_some() {
        let cfg = K3Config::from_file(&f)?;
        let l = cfg.l.clone();
        let nef = is_nef(&cfg, &l)?;
        let bpf = is_base_point_free(&cfg, &l)?;
        text += &format!("L^2 {}\ngenus {}\nL nef {nef}\nL base point free {bpf}\n", cfg.sq(&l), cfg.genus());
        v["L"] = json!({"square": cfg.sq(&l), "genus": cfg.genus(), "nef": nef, "base_point_free": bpf});
    }
    Ok((text, v))
}

fn h0_cmd(path: &Path, class: &str) -> Out {
    let f = read(path)?;
    let cfg = K3Config::from_file(&f)?;
    let d = f.resolve(class)?;
    let verdict = h0(&cfg, &d);
    let text = match verdict.value {
        Some(n) => format!("{n}\n"),
        None => "undecided\n".to_string(),
    };
    let v = serde_json::to_value(&verdict).expect("serializable");
    if verdict.value.is_none() {
        return Err(Failure::Compute(Error::Abstained(d)));
    }
    Ok((text, v))
}

fn clifford_cmd(path: &Path, divisor: Option<&str>) -> Out {
    let f = read(path)?;
    let cfg = K3Config::from_file(&f)?;
    let cd = match divisor {
        Some(name) => with_divisor(&cfg, &f.resolve(name)?)?,
        None => clifford_index(&cfg)?,
    };
    let mut text = format!("g {}\nc {}\n", cd.g, cd.c);
    if let Some(d) = &cd.d {
        text += &format!("D {:?}\nD^2 {}\n", d.0, cfg.sq(d));
    }
    text += &format!("case {}\nperfect {:?}\n", cd.case_tag.notation(), cd.perfect);
    Ok((text, serde_json::to_value(&cd).expect("serializable")))
}

fn scroll_cmd(path: &Path) -> Out {
    let f = read(path)?;
    let cfg = K3Config::from_file(&f)?;
    let cd = match f.class("D") {
        Some(d) => with_divisor(&cfg, d)?,
        None => clifford_index(&cfg)?,
    };
    let ds = dual_invariants(&cfg, &cd)?;
    let st = scroll_type(&ds)?;
    let t0 = t0_type(&st);
    let text = format!("d {ds:?}\ntype {st}\nT0 {t0}\n");
    Ok((text, json!({"d_seq": ds, "scroll_type": st, "t0_type": t0})))
}

fn sections_cmd(st: &str, a: i64, b: i64, frame: FrameArg) -> Out {
    let st = parse_type(st)?;
    let bh = match frame {
        FrameArg::H => b,
        FrameArg::H0 => a + b,
    };
    let (h0v, h1v, chi) = (h0_scroll(&st, a, bh), h1_scroll(&st, a, bh), chi_scroll(&st, a, bh));
    Ok((format!("{h0v}\n"), json!({"type": st, "a": a, "b": bh, "h0": h0v, "h1": h1v, "chi": chi})))
}

fn betti_cmd(c: i64, dsq: i64) -> Out {
    let t = betti_fiber(c, dsq)?;
    let mut text = String::new();
    for ((i, j), v) in t.entries() {
        text += &format!("beta({i},{j}) = {v}\n");
    }
    text += &format!("{}\n", t.resolution_string());
    Ok((text, serde_json::to_value(&t).expect("serializable")))
}

fn bvectors_cmd(name: &str, bound: Option<usize>) -> Out {
    if name == "list" {
        let cases = bvector_cases();
        let mut text = String::new();
        for k in &cases {
            text += &format!("{:<6} g={} c={} D^2={} T0={}\n", k.name, k.spec.g, k.spec.c, k.spec.dsq, k.spec.t0);
        }
        let names: Vec<&str> = cases.iter().map(|k| k.name).collect();
        return Ok((text, json!(names)));
    }
    let case = bvector_case(name).ok_or_else(|| Failure::Usage(format!("unknown case {name:?}; try `bvectors list`")))?;
    let report = case.run(bound)?;
    let mut text = String::new();
    for v in &report.vectors {
        let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        text += &format!("({})\n", parts.join(","));
    }
    for m in &case.spec.asserted {
        text += &format!("# asserted: at most {} b >= {} ({})\n", m.max, m.at_least, m.reason);
    }
    Ok((text, json!({"case": name, "spec": case.spec, "report": report})))
}

fn table_text(name: &str, rows: &[ModuliCheck]) -> String {
    let mut text = String::new();
    for r in rows {
        let got = match &r.computed {
            Ok(v) => v.to_string(),
            Err(e) => e.clone(),
        };
        text += &format!("{name} {:<24} {:>3} {:>3} {}\n", r.row, r.expected, got, if r.ok() { "ok" } else { "MISMATCH" });
    }
    text
}

fn moduli_cmd(cmd: &ModuliCmd) -> Out {
    match cmd {
        ModuliCmd::C1 { st, g } => {
            let st = parse_type(st)?;
            let m = moduli_c1(&st, *g)?;
            let d2 = delta2_c1(&st, *g)?;
            let obs = c1_obstruction(&st, *g)?;
            let mut text = format!("moduli {}\ndelta1 {}\ndelta2 {d2}\n", m.num_moduli, m.delta1);
            if let Some(o) = &obs {
                text += &format!("excluded {o:?}\n");
            }
            Ok((text, json!({"moduli": m, "obstruction": obs.map(|o| format!("{o:?}"))})))
        }
        ModuliCmd::C2 { st, b1, g } => {
            let st = parse_type(st)?;
            let m = moduli_c2(&st, *b1, *g)?;
            let text = format!(
                "moduli {}\ndelta1 {}\ndelta2 {}\ndelta3 {}\ndelta4 {}\n",
                m.num_moduli, m.delta1, m.delta2, m.delta3, m.delta4
            );
            Ok((text, serde_json::to_value(&m).expect("serializable")))
        }
        ModuliCmd::Tables => {
            let (c1, c2) = (check_c1_table(), check_c2_table());
            let text = table_text("c1", &c1) + &table_text("c2", &c2);
            let v = json!({"c1": c1, "c2": c2});
            if c1.iter().chain(&c2).all(ModuliCheck::ok) {
                Ok((text, v))
            } else {
                print_out(&text, &v, false);
                Err(Failure::Mismatch)
            }
        }
    }
}

fn case_cmd(path: &Path) -> Out {
    let rec = run_case(&read(path)?)?;
    let text = format!(
        "g {}\nc {}\nD^2 {}\ncase {}\nscroll type {}\nT0 {}\nmoduli {}\nsingularities {}\n",
        rec.g,
        rec.c,
        rec.dsq,
        rec.case_tag.notation(),
        rec.scroll_type,
        rec.t0_type,
        rec.num_moduli,
        rec.singularity
    );
    Ok((text, serde_json::to_value(&rec).expect("serializable")))
}

fn classify_cmd(genus: &str, diff: bool, fixtures: Option<&Path>, json_out: bool) -> Out {
    let range = parse_genus(genus)?;
    let dir = fixtures.map(Path::to_path_buf).unwrap_or_else(fixture_dir);
    let report = regenerate_tables(range, &dir)?;
    let v = serde_json::to_value(&report).expect("serializable");
    let text = report.to_text();
    if diff && !report.ok() {
        print_out(&text, &v, json_out);
        return Err(Failure::Mismatch);
    }
    Ok((text, v))
}

fn print_out(text: &str, v: &Value, json_out: bool) {
    if json_out {
        println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
    } else {
        print!("{text}");
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.sequential {
        k3scroll::par::set_sequential(true);
    }
    let result = match &cli.cmd {
        Cmd::Lattice { cmd: LatticeCmd::Check { file } } => lattice_check(file),
        Cmd::H0 { file, class } => h0_cmd(file, class),
        Cmd::Clifford { file, divisor } => clifford_cmd(file, divisor.as_deref()),
        Cmd::ScrollType { file } => scroll_cmd(file),
        Cmd::Sections { st, a, b, frame } => sections_cmd(st, *a, *b, *frame),
        Cmd::Betti { c, dsq } => betti_cmd(*c, *dsq),
        Cmd::Bvectors { case } => bvectors_cmd(case, cli.bound),
        Cmd::Moduli { cmd } => moduli_cmd(cmd),
        Cmd::Case { file } => case_cmd(file),
        Cmd::Classify { genus, diff, fixtures } => classify_cmd(genus, *diff, fixtures.as_deref(), cli.json),
    };
    match result {
        Ok((text, v)) => {
            print_out(&text, &v, cli.json);
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
        Err(Failure::Mismatch) => ExitCode::from(MISMATCH),
    }
}
