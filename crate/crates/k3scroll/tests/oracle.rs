//! Values frozen from an independent brute force (monomial counting, exact
//! characteristic polynomial roots, box search over lattice points).

use k3scroll::lattice::{enumerate_classes, signature_of, DivisorClass, Lattice};
use k3scroll::scroll::{h0_scroll, ScrollType};

const H0: &[(&str, i64, i64, i64)] = &[
    ("(1,1,1)", 0, -12, 0),
    ("(1,1,1)", 0, -7, 0),
    ("(1,1,1)", 0, -4, 0),
    ("(1,1,1)", 0, -1, 0),
    ("(1,1,1)", 0, 0, 1),
    ("(1,1,1)", 0, 3, 4),
    ("(1,1,1)", 0, 9, 10),
    ("(1,1,1)", 1, -12, 0),
    ("(1,1,1)", 1, -7, 0),
    ("(1,1,1)", 1, -4, 0),
    ("(1,1,1)", 1, -1, 3),
    ("(1,1,1)", 1, 0, 6),
    ("(1,1,1)", 1, 3, 15),
    ("(1,1,1)", 1, 9, 33),
    ("(1,1,1)", 2, -12, 0),
    ("(1,1,1)", 2, -7, 0),
    ("(1,1,1)", 2, -4, 0),
    ("(1,1,1)", 2, -1, 12),
    ("(1,1,1)", 2, 0, 18),
    ("(1,1,1)", 2, 3, 36),
    ("(1,1,1)", 2, 9, 72),
    ("(1,1,1)", 3, -12, 0),
    ("(1,1,1)", 3, -7, 0),
    ("(1,1,1)", 3, -4, 0),
    ("(1,1,1)", 3, -1, 30),
    ("(1,1,1)", 3, 0, 40),
    ("(1,1,1)", 3, 3, 70),
    ("(1,1,1)", 3, 9, 130),
    ("(2,1,0)", 0, -12, 0),
    ("(2,1,0)", 0, -7, 0),
    ("(2,1,0)", 0, -4, 0),
    ("(2,1,0)", 0, -1, 0),
    ("(2,1,0)", 0, 0, 1),
    ("(2,1,0)", 0, 3, 4),
    ("(2,1,0)", 0, 9, 10),
    ("(2,1,0)", 1, -12, 0),
    ("(2,1,0)", 1, -7, 0),
    ("(2,1,0)", 1, -4, 0),
    ("(2,1,0)", 1, -1, 3),
    ("(2,1,0)", 1, 0, 6),
    ("(2,1,0)", 1, 3, 15),
    ("(2,1,0)", 1, 9, 33),
    ("(2,1,0)", 2, -12, 0),
    ("(2,1,0)", 2, -7, 0),
    ("(2,1,0)", 2, -4, 1),
    ("(2,1,0)", 2, -1, 12),
    ("(2,1,0)", 2, 0, 18),
    ("(2,1,0)", 2, 3, 36),
    ("(2,1,0)", 2, 9, 72),
    ("(2,1,0)", 3, -12, 0),
    ("(2,1,0)", 3, -7, 0),
    ("(2,1,0)", 3, -4, 7),
    ("(2,1,0)", 3, -1, 30),
    ("(2,1,0)", 3, 0, 40),
    ("(2,1,0)", 3, 3, 70),
    ("(2,1,0)", 3, 9, 130),
    ("(3,2,1)", 0, -12, 0),
    ("(3,2,1)", 0, -7, 0),
    ("(3,2,1)", 0, -4, 0),
    ("(3,2,1)", 0, -1, 0),
    ("(3,2,1)", 0, 0, 1),
    ("(3,2,1)", 0, 3, 4),
    ("(3,2,1)", 0, 9, 10),
    ("(3,2,1)", 1, -12, 0),
    ("(3,2,1)", 1, -7, 0),
    ("(3,2,1)", 1, -4, 0),
    ("(3,2,1)", 1, -1, 6),
    ("(3,2,1)", 1, 0, 9),
    ("(3,2,1)", 1, 3, 18),
    ("(3,2,1)", 1, 9, 36),
    ("(3,2,1)", 2, -12, 0),
    ("(3,2,1)", 2, -7, 0),
    ("(3,2,1)", 2, -4, 7),
    ("(3,2,1)", 2, -1, 24),
    ("(3,2,1)", 2, 0, 30),
    ("(3,2,1)", 2, 3, 48),
    ("(3,2,1)", 2, 9, 84),
    ("(3,2,1)", 3, -12, 0),
    ("(3,2,1)", 3, -7, 7),
    ("(3,2,1)", 3, -4, 30),
    ("(3,2,1)", 3, -1, 60),
    ("(3,2,1)", 3, 0, 70),
    ("(3,2,1)", 3, 3, 100),
    ("(3,2,1)", 3, 9, 160),
    ("(2,2,1,1)", 0, -12, 0),
    ("(2,2,1,1)", 0, -7, 0),
    ("(2,2,1,1)", 0, -4, 0),
    ("(2,2,1,1)", 0, -1, 0),
    ("(2,2,1,1)", 0, 0, 1),
    ("(2,2,1,1)", 0, 3, 4),
    ("(2,2,1,1)", 0, 9, 10),
    ("(2,2,1,1)", 1, -12, 0),
    ("(2,2,1,1)", 1, -7, 0),
    ("(2,2,1,1)", 1, -4, 0),
    ("(2,2,1,1)", 1, -1, 6),
    ("(2,2,1,1)", 1, 0, 10),
    ("(2,2,1,1)", 1, 3, 22),
    ("(2,2,1,1)", 1, 9, 46),
    ("(2,2,1,1)", 2, -12, 0),
    ("(2,2,1,1)", 2, -7, 0),
    ("(2,2,1,1)", 2, -4, 3),
    ("(2,2,1,1)", 2, -1, 30),
    ("(2,2,1,1)", 2, 0, 40),
    ("(2,2,1,1)", 2, 3, 70),
    ("(2,2,1,1)", 2, 9, 130),
    ("(2,2,1,1)", 3, -12, 0),
    ("(2,2,1,1)", 3, -7, 0),
    ("(2,2,1,1)", 3, -4, 30),
    ("(2,2,1,1)", 3, -1, 90),
    ("(2,2,1,1)", 3, 0, 110),
    ("(2,2,1,1)", 3, 3, 170),
    ("(2,2,1,1)", 3, 9, 290),
    ("(4,1,1,1)", 0, -12, 0),
    ("(4,1,1,1)", 0, -7, 0),
    ("(4,1,1,1)", 0, -4, 0),
    ("(4,1,1,1)", 0, -1, 0),
    ("(4,1,1,1)", 0, 0, 1),
    ("(4,1,1,1)", 0, 3, 4),
    ("(4,1,1,1)", 0, 9, 10),
    ("(4,1,1,1)", 1, -12, 0),
    ("(4,1,1,1)", 1, -7, 0),
    ("(4,1,1,1)", 1, -4, 1),
    ("(4,1,1,1)", 1, -1, 7),
    ("(4,1,1,1)", 1, 0, 11),
    ("(4,1,1,1)", 1, 3, 23),
    ("(4,1,1,1)", 1, 9, 47),
    ("(4,1,1,1)", 2, -12, 0),
    ("(4,1,1,1)", 2, -7, 2),
    ("(4,1,1,1)", 2, -4, 11),
    ("(4,1,1,1)", 2, -1, 35),
    ("(4,1,1,1)", 2, 0, 45),
    ("(4,1,1,1)", 2, 3, 75),
    ("(4,1,1,1)", 2, 9, 135),
    ("(4,1,1,1)", 3, -12, 1),
    ("(4,1,1,1)", 3, -7, 15),
    ("(4,1,1,1)", 3, -4, 45),
    ("(4,1,1,1)", 3, -1, 105),
    ("(4,1,1,1)", 3, 0, 125),
    ("(4,1,1,1)", 3, 3, 185),
    ("(4,1,1,1)", 3, 9, 305),
    ("(3,1,1,0,0)", 0, -12, 0),
    ("(3,1,1,0,0)", 0, -7, 0),
    ("(3,1,1,0,0)", 0, -4, 0),
    ("(3,1,1,0,0)", 0, -1, 0),
    ("(3,1,1,0,0)", 0, 0, 1),
    ("(3,1,1,0,0)", 0, 3, 4),
    ("(3,1,1,0,0)", 0, 9, 10),
    ("(3,1,1,0,0)", 1, -12, 0),
    ("(3,1,1,0,0)", 1, -7, 0),
    ("(3,1,1,0,0)", 1, -4, 0),
    ("(3,1,1,0,0)", 1, -1, 5),
    ("(3,1,1,0,0)", 1, 0, 10),
    ("(3,1,1,0,0)", 1, 3, 25),
    ("(3,1,1,0,0)", 1, 9, 55),
    ("(3,1,1,0,0)", 2, -12, 0),
    ("(3,1,1,0,0)", 2, -7, 0),
    ("(3,1,1,0,0)", 2, -4, 5),
    ("(3,1,1,0,0)", 2, -1, 30),
    ("(3,1,1,0,0)", 2, 0, 45),
    ("(3,1,1,0,0)", 2, 3, 90),
    ("(3,1,1,0,0)", 2, 9, 180),
    ("(3,1,1,0,0)", 3, -12, 0),
    ("(3,1,1,0,0)", 3, -7, 5),
    ("(3,1,1,0,0)", 3, -4, 30),
    ("(3,1,1,0,0)", 3, -1, 105),
    ("(3,1,1,0,0)", 3, 0, 140),
    ("(3,1,1,0,0)", 3, 3, 245),
    ("(3,1,1,0,0)", 3, 9, 455),
    ("(2,1,1,0,0,0)", 0, -12, 0),
    ("(2,1,1,0,0,0)", 0, -7, 0),
    ("(2,1,1,0,0,0)", 0, -4, 0),
    ("(2,1,1,0,0,0)", 0, -1, 0),
    ("(2,1,1,0,0,0)", 0, 0, 1),
    ("(2,1,1,0,0,0)", 0, 3, 4),
    ("(2,1,1,0,0,0)", 0, 9, 10),
    ("(2,1,1,0,0,0)", 1, -12, 0),
    ("(2,1,1,0,0,0)", 1, -7, 0),
    ("(2,1,1,0,0,0)", 1, -4, 0),
    ("(2,1,1,0,0,0)", 1, -1, 4),
    ("(2,1,1,0,0,0)", 1, 0, 10),
    ("(2,1,1,0,0,0)", 1, 3, 28),
    ("(2,1,1,0,0,0)", 1, 9, 64),
    ("(2,1,1,0,0,0)", 2, -12, 0),
    ("(2,1,1,0,0,0)", 2, -7, 0),
    ("(2,1,1,0,0,0)", 2, -4, 1),
    ("(2,1,1,0,0,0)", 2, -1, 28),
    ("(2,1,1,0,0,0)", 2, 0, 49),
    ("(2,1,1,0,0,0)", 2, 3, 112),
    ("(2,1,1,0,0,0)", 2, 9, 238),
    ("(2,1,1,0,0,0)", 3, -12, 0),
    ("(2,1,1,0,0,0)", 3, -7, 0),
    ("(2,1,1,0,0,0)", 3, -4, 13),
    ("(2,1,1,0,0,0)", 3, -1, 112),
    ("(2,1,1,0,0,0)", 3, 0, 168),
    ("(2,1,1,0,0,0)", 3, 3, 336),
    ("(2,1,1,0,0,0)", 3, 9, 672),
];
const SIGNATURES: &[(&str, (usize, usize, usize))] = &[
    ("[[-4, 2], [2, 2]]", (1, 1, 0)),
    ("[[2, 2], [2, 4]]", (2, 0, 0)),
    ("[[0, 1], [1, -2]]", (1, 1, 0)),
    ("[[0, -2], [-2, -6]]", (1, 1, 0)),
    ("[[4, 1, 3], [1, 2, -2], [3, -2, 2]]", (2, 1, 0)),
    ("[[-2, -3, -2], [-3, 4, 3], [-2, 3, 4]]", (2, 1, 0)),
    ("[[4, 3, 2], [3, 4, 2], [2, 2, -6]]", (2, 1, 0)),
    ("[[4, -3, 2], [-3, 2, 0], [2, 0, -2]]", (2, 1, 0)),
    ("[[2, 0, 2, 2], [0, 4, -1, 1], [2, -1, 0, 0], [2, 1, 0, -6]]", (2, 2, 0)),
    ("[[0, 2, 0, -1], [2, -6, 1, 1], [0, 1, -4, 2], [-1, 1, 2, 4]]", (2, 2, 0)),
    ("[[-6, 0, -2, 1], [0, 2, -1, 3], [-2, -1, -4, 3], [1, 3, 3, -4]]", (1, 3, 0)),
    ("[[-2, 3, 3, 1], [3, 2, -2, 3], [3, -2, -6, 3], [1, 3, 3, 0]]", (2, 2, 0)),
    ("[[0, 0, -3, -1, -2], [0, -6, -2, 3, -1], [-3, -2, 4, -1, 2], [-1, 3, -1, -6, 0], [-2, -1, 2, 0, -2]]", (1, 4, 0)),
    ("[[2, 1, 2, -3, -3], [1, -2, -3, -1, -3], [2, -3, 2, 3, -3], [-3, -1, 3, 0, 2], [-3, -3, -3, 2, 4]]", (3, 2, 0)),
    ("[[4, -3, 3, -2, 0], [-3, 2, -3, 2, -2], [3, -3, -2, 1, -2], [-2, 2, 1, -2, -1], [0, -2, -2, -1, 0]]", (2, 3, 0)),
    ("[[-6, -2, 1, 2, 3], [-2, 2, 0, 1, -1], [1, 0, -4, 3, 0], [2, 1, 3, 4, -3], [3, -1, 0, -3, 0]]", (2, 3, 0)),
    ("[[2, 1, 0], [1, 2, 1], [0, 1, 2]]", (3, 0, 0)),
    ("[[0, 1], [1, 0]]", (1, 1, 0)),
    ("[[2, 4], [4, 8]]", (1, 0, 1)),
];
/// (gram, L, square, lowest degree, highest degree, count).
type ClassCount = (&'static str, &'static [i64], i64, i64, i64, usize);

const CLASS_COUNTS: &[ClassCount] = &[
    ("[[4, 3], [3, 0]]", &[1, 0], -2, 1, 6, 1),
    ("[[6, 2, 1], [2, 0, 1], [1, 1, -2]]", &[1, 0, 0], -2, 0, 6, 3),
    ("[[8, 3, 0], [3, 0, 1], [0, 1, -2]]", &[1, 0, 0], 0, 1, 5, 2),
    ("[[2, 1, 0], [1, -2, 1], [0, 1, -2]]", &[2, 1, 0], -2, 0, 4, 6),
    ("[[4, 2, 1], [2, -2, 0], [1, 0, -2]]", &[1, 0, 0], 2, 1, 7, 1),
];

fn gram(s: &str) -> Vec<Vec<i64>> {
    serde_json::from_str(s).unwrap()
}

#[test]
fn scroll_sections() {
    for &(t, a, b, want) in H0 {
        let st: ScrollType = t.parse().unwrap();
        assert_eq!(h0_scroll(&st, a, b), want, "h0({a}H + {b}F) on {t}");
    }
}

#[test]
fn signatures() {
    for &(g, (p, n, z)) in SIGNATURES {
        let s = signature_of(&gram(g));
        assert_eq!((s.positives, s.negatives, s.zeros), (p, n, z), "{g}");
    }
}

#[test]
fn class_counts() {
    for &(g, l, square, lo, hi, want) in CLASS_COUNTS {
        let lat = Lattice::from_gram(gram(g)).unwrap();
        let found = enumerate_classes(&lat, &DivisorClass(l.to_vec()), square, lo, hi).unwrap();
        assert_eq!(found.len(), want, "{g} square {square} degrees {lo}..{hi}");
    }
}
