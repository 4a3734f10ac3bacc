//! Closed-form locus semi-axes for the confocal and homothetic families,
//! special aspect ratios, and checks against fitted loci.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::families::{confocal_caustic, excentral_triangle, family_pair, sweep, unit_lambdas, ConcentricPair, Family};
use crate::geometry::{delta, fit_conic_with, ConicFit, ConicKind, Tolerances};
use crate::locus;

/// A confocal formula entry: a center, or the three excenters together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormulaKey {
    Center(u32),
    Excenters,
}

impl fmt::Display for FormulaKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulaKey::Center(k) => write!(f, "X{k}"),
            FormulaKey::Excenters => f.write_str("excenters"),
        }
    }
}

impl FromStr for FormulaKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("excenters") || t.eq_ignore_ascii_case("e") {
            return Ok(FormulaKey::Excenters);
        }
        let digits = t.strip_prefix(['X', 'x']).unwrap_or(t);
        digits
            .parse()
            .map(FormulaKey::Center)
            .map_err(|_| Error::Domain(format!("bad formula key '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShapeNote {
    SimilarBilliard,
    SimilarCaustic,
    SimilarRotatedBilliard,
    SimilarRotatedCaustic,
    IdenticalBilliard,
    IdenticalCaustic,
    Circle,
    Plain,
}

impl ShapeNote {
    pub fn as_str(self) -> &'static str {
        match self {
            ShapeNote::SimilarBilliard => "similar_billiard",
            ShapeNote::SimilarCaustic => "similar_caustic",
            ShapeNote::SimilarRotatedBilliard => "similar_rotated_billiard",
            ShapeNote::SimilarRotatedCaustic => "similar_rotated_caustic",
            ShapeNote::IdenticalBilliard => "identical_billiard",
            ShapeNote::IdenticalCaustic => "identical_caustic",
            ShapeNote::Circle => "circle",
            ShapeNote::Plain => "plain",
        }
    }
}

/// Semi-axes along `x` and `y`, or a radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Axes {
    Ellipse(f64, f64),
    Circle(f64),
}

impl Axes {
    pub fn along_xy(self) -> (f64, f64) {
        match self {
            Axes::Ellipse(x, y) => (x, y),
            Axes::Circle(r) => (r, r),
        }
    }
}

pub const CONFOCAL_KEYS: [FormulaKey; 30] = {
    use FormulaKey::{Center as C, Excenters as E};
    [
        C(1), E, C(2), C(3), C(4), C(5), C(7), C(8), C(10), C(11), C(12), C(20), C(21), C(35), C(36), C(40), C(46),
        C(55), C(56), C(57), C(63), C(65), C(72), C(78), C(79), C(80), C(84), C(88), C(90), C(100),
    ]
};

pub const HOMOTHETIC_KEYS: [u32; 31] = [
    3, 4, 5, 6, 13, 14, 15, 16, 17, 18, 20, 32, 39, 61, 62, 69, 76, 83, 98, 99, 114, 115, 140, 141, 147, 148, 182, 187,
    190, 193, 194,
];

fn require_ab(a: f64, b: f64) -> Result<()> {
    if !(a > b && b > 0.0 && a.is_finite()) {
        return Err(Error::Domain(format!("need a > b > 0, got ({a}, {b})")));
    }
    Ok(())
}

type Helper = fn(f64, f64) -> f64;

/// `a_k = (s₁ w'(a,b) + s₂ w''(a,b) δ) / w(a,b)` and the same with the
/// arguments swapped for `b_k`.
fn helper_axes(a: f64, b: f64, d: f64, w1: Helper, w2: Helper, w: Helper, sa: (f64, f64), sb: (f64, f64)) -> (f64, f64) {
    (
        (sa.0 * w1(a, b) + sa.1 * w2(a, b) * d) / w(a, b),
        (sb.0 * w1(b, a) + sb.1 * w2(b, a) * d) / w(b, a),
    )
}

const NEG_POS: (f64, f64) = (-1.0, 1.0);
const POS_NEG: (f64, f64) = (1.0, -1.0);
const POS_POS: (f64, f64) = (1.0, 1.0);
const NEG_NEG: (f64, f64) = (-1.0, -1.0);

/// Confocal locus semi-axes `(a_k, b_k)` along `x` and `y`; signs are kept.
pub fn confocal_axes(key: FormulaKey, a: f64, b: f64) -> Result<(f64, f64)> {
    require_ab(a, b)?;
    let d = delta(a, b)?;
    let (a2, b2) = (a * a, b * b);
    let c2 = a2 - b2;
    let k = match key {
        FormulaKey::Excenters => return Ok(((b2 + d) / a, (a2 + d) / b)),
        FormulaKey::Center(k) => k,
    };
    let h = |w1: Helper, w2: Helper, w: Helper, sa, sb| helper_axes(a, b, d, w1, w2, w, sa, sb);
    Ok(match k {
        1 => ((d - b2) / a, (a2 - d) / b),
        2 => {
            let k2 = (2.0 * d - a2 - b2) / (3.0 * c2);
            (k2 * a, k2 * b)
        }
        3 => ((a2 - d) / (2.0 * a), (d - b2) / (2.0 * b)),
        4 => {
            let k4 = ((a2 + b2) * d - 2.0 * a2 * b2) / c2;
            (k4 / a, k4 / b)
        }
        5 => h(
            |u, v| u * u * (u * u + 3.0 * v * v),
            |u, v| 3.0 * u * u + v * v,
            |u, v| 4.0 * u * (u * u - v * v),
            NEG_POS,
            POS_NEG,
        ),
        7 => {
            let k7 = (2.0 * d - a2 - b2) / c2;
            (k7 * a, k7 * b)
        }
        8 => ((b2 - d).powi(2) / (a * c2), (a2 - d).powi(2) / (b * c2)),
        10 => {
            let k10 = ((a2 + b2) * d - a2 * a2 - b2 * b2) / (2.0 * c2);
            (k10 / a, k10 / b)
        }
        11 => confocal_caustic(a, b)?,
        12 => h(
            |u, v| v * v * (15.0 * u.powi(6) + 12.0 * v * v * u.powi(4) + 3.0 * u * u * v.powi(4) + 2.0 * v.powi(6)),
            |u, v| 7.0 * u.powi(6) + 12.0 * v * v * u.powi(4) + 11.0 * u * u * v.powi(4) + 2.0 * v.powi(6),
            |u, v| u * (7.0 * u.powi(6) + 11.0 * v * v * u.powi(4) - 11.0 * u * u * v.powi(4) - 7.0 * v.powi(6)),
            NEG_POS,
            POS_NEG,
        ),
        20 => ((a2 * (3.0 * b2 - a2) - 2.0 * b2 * d) / (a * c2), (b2 * (b2 - 3.0 * a2) + 2.0 * a2 * d) / (b * c2)),
        21 => h(
            |u, v| u.powi(4) + u * u * v * v + v.powi(4),
            |u, v| 2.0 * (u * u + v * v),
            |u, v| u * (3.0 * u * u + 5.0 * v * v),
            NEG_POS,
            POS_NEG,
        ),
        35 => h(
            |u, v| v * v * (11.0 * u.powi(4) + 4.0 * u * u * v * v + v.powi(4)),
            |u, v| (7.0 * u * u + v * v) * (u * u + v * v),
            |u, v| u * (7.0 * u.powi(4) + 18.0 * u * u * v * v + 7.0 * v.powi(4)),
            NEG_POS,
            NEG_POS,
        ),
        36 => h(
            |u, v| v * v * (u * u + v * v),
            |u, v| 3.0 * u * u - v * v,
            |u, v| 3.0 * u * (u * u - v * v),
            POS_POS,
            NEG_NEG,
        ),
        40 => (c2 / a, c2 / b),
        46 => h(
            |u, v| v * v * (3.0 * u * u - v * v) * (u * u - v * v),
            |u, v| (5.0 * u * u + v * v) * (u * u - v * v),
            |u, v| v * (5.0 * u.powi(4) - 6.0 * u * u * v * v + 5.0 * v.powi(4)),
            POS_POS,
            NEG_NEG,
        ),
        55 => (a * (d - b2) / (a2 + b2), b * (a2 - d) / (a2 + b2)),
        56 => h(
            |u, v| v * v * (u.powi(4) - u * u * v * v + 2.0 * v.powi(4)),
            |u, v| 5.0 * u.powi(4) - 5.0 * u * u * v * v + 2.0 * v.powi(4),
            |u, v| u * (5.0 * u.powi(4) - 6.0 * u * u * v * v + 5.0 * v.powi(4)),
            NEG_POS,
            POS_NEG,
        ),
        57 => (a * c2 / d, b * c2 / d),
        63 => (a * c2 / (a2 + b2), b * c2 / (a2 + b2)),
        65 => h(
            |u, v| u.powi(4) * v * v + u * u * v.powi(4) + 2.0 * v.powi(6),
            |u, v| u.powi(4) - 3.0 * u * u * v * v - 2.0 * v.powi(4),
            |u, v| u * (u * u - v * v).powi(2),
            POS_POS,
            NEG_NEG,
        ),
        72 => h(
            |u, v| u.powi(6) + 2.0 * u * u * v.powi(4) + v.powi(6),
            |u, v| (3.0 * u * u + v * v) * v * v,
            |u, v| u * (u * u - v * v).powi(2),
            POS_NEG,
            NEG_POS,
        ),
        78 => h(
            |u, v| 5.0 * u.powi(6) - 4.0 * u.powi(4) * v * v + u * u * v.powi(4) + 2.0 * v.powi(6),
            |u, v| 2.0 * v * v * (u * u + v * v),
            |u, v| u * (5.0 * u.powi(4) - 6.0 * v * v * u * u + 5.0 * v.powi(4)),
            POS_NEG,
            NEG_POS,
        ),
        79 => h(
            |u, v| v * v * (11.0 * u.powi(4) + 4.0 * v * v * u * u + v.powi(4)),
            |u, v| 3.0 * u.powi(4) + 12.0 * u * u * v * v + v.powi(4),
            |u, v| u * (u * u - v * v) * (3.0 * u * u + 5.0 * v * v),
            NEG_POS,
            POS_NEG,
        ),
        80 => ((d - b2) * (a2 + b2) / (a * c2), (a2 - d) * (a2 + b2) / (b * c2)),
        84 => ((b2 + d) * c2 / a.powi(3), (a2 + d) * c2 / b.powi(3)),
        88 | 100 => (a, b),
        90 => h(
            |u, v| v * v * (3.0 * u * u - v * v) * (u * u - v * v),
            |u, v| u.powi(4) - v.powi(4),
            |u, v| u * (u.powi(4) + 2.0 * u * u * v * v - 7.0 * v.powi(4)),
            POS_POS,
            POS_POS,
        ),
        _ => return Err(Error::MissingFormula(format!("confocal {key}"))),
    })
}

pub fn confocal_shape(key: FormulaKey) -> ShapeNote {
    match key {
        FormulaKey::Center(2 | 7 | 57 | 63) => ShapeNote::SimilarBilliard,
        FormulaKey::Center(3 | 84) => ShapeNote::SimilarRotatedCaustic,
        FormulaKey::Center(4 | 10 | 40) => ShapeNote::SimilarRotatedBilliard,
        FormulaKey::Center(11) => ShapeNote::IdenticalCaustic,
        FormulaKey::Center(55) => ShapeNote::SimilarCaustic,
        FormulaKey::Center(88 | 100) => ShapeNote::IdenticalBilliard,
        _ => ShapeNote::Plain,
    }
}

/// Homothetic locus semi-axes along `x` and `y`, or a radius.
pub fn homothetic_axes(k: u32, a: f64, b: f64) -> Result<Axes> {
    require_ab(a, b)?;
    let (a2, b2) = (a * a, b * b);
    let e = a2 - b2;
    let s = a2 + b2;
    let el = |x: f64, y: f64| Axes::Ellipse(x, y);
    Ok(match k {
        3 => el(e / (4.0 * a), e / (4.0 * b)),
        4 => el(e / (2.0 * a), e / (2.0 * b)),
        5 => el(e / (8.0 * a), e / (8.0 * b)),
        6 => el(a * e / (2.0 * s), b * e / (2.0 * s)),
        13 => Axes::Circle((a - b) / 2.0),
        14 => Axes::Circle((a + b) / 2.0),
        15 => Axes::Circle((a - b).powi(2) / (2.0 * (a + b))),
        16 => Axes::Circle((a + b).powi(2) / (2.0 * (a - b))),
        17 => el(e / (2.0 * (a + 3.0 * b)), e / (2.0 * (3.0 * a + b))),
        18 => el(e / (2.0 * (a - 3.0 * b)), e / (2.0 * (3.0 * a - b))),
        20 => el(e / a, e / b),
        32 => {
            let den = 2.0 * (3.0 * a2 * a2 + 2.0 * a2 * b2 + 3.0 * b2 * b2);
            let num = e * (3.0 * a2 + 5.0 * b2);
            el(a * num / den, b * num / den)
        }
        39 => el(e * a / (2.0 * (a2 + 3.0 * b2)), e * b / (2.0 * (3.0 * a2 + b2))),
        61 => {
            let den = 2.0 * (3.0 * a2 + 2.0 * a * b + 3.0 * b2);
            el(e * (3.0 * a - b) / den, e * (a - 3.0 * b) / den)
        }
        62 => {
            let den = 2.0 * (3.0 * a2 - 2.0 * a * b + 3.0 * b2);
            el(e * (3.0 * a + b) / den, e * (a + 3.0 * b) / den)
        }
        69 => el(e * a / s, e * b / s),
        76 => el(e * a / (a2 + 3.0 * b2), e * b / (3.0 * a2 + b2)),
        83 => el(e * a / (5.0 * a2 + 3.0 * b2), e * b / (3.0 * a2 + 5.0 * b2)),
        98 => el(s / (2.0 * a), s / (2.0 * b)),
        99 | 190 => el(a, b),
        114 => el(s / (4.0 * a), s / (4.0 * b)),
        115 => el(a / 2.0, b / 2.0),
        140 => el(e / (16.0 * a), e / (16.0 * b)),
        141 => el(e * a / (4.0 * s), e * b / (4.0 * s)),
        147 => el(s / a, s / b),
        148 => el(2.0 * a, 2.0 * b),
        182 => el(e * e / (8.0 * a * s), e * e / (8.0 * b * s)),
        187 => el(a * (a2 + 3.0 * b2) / (2.0 * e), b * (3.0 * a2 + b2) / (2.0 * e)),
        193 => el(2.0 * e * a / s, 2.0 * e * b / s),
        194 => el(2.0 * e * a / (a2 + 3.0 * b2), 2.0 * e * b / (3.0 * a2 + b2)),
        _ => return Err(Error::MissingFormula(format!("homothetic X{k}"))),
    })
}

/// Shape of a homothetic formula, read off its values at a generic ratio.
pub fn homothetic_shape(k: u32) -> Result<ShapeNote> {
    let (a, b) = (1.37, 1.0);
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs());
    Ok(match homothetic_axes(k, a, b)? {
        Axes::Circle(_) => ShapeNote::Circle,
        Axes::Ellipse(x, y) if close(x, a) && close(y, b) => ShapeNote::IdenticalBilliard,
        Axes::Ellipse(x, y) if close(x, a / 2.0) && close(y, b / 2.0) => ShapeNote::IdenticalCaustic,
        Axes::Ellipse(x, y) if close(x / y, a / b) => ShapeNote::SimilarBilliard,
        Axes::Ellipse(x, y) if close(x / y, b / a) => ShapeNote::SimilarRotatedBilliard,
        Axes::Ellipse(..) => ShapeNote::Plain,
    })
}

/// One aspect-ratio coincidence.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecialRatio {
    pub k: u32,
    pub description: &'static str,
    /// The closed-form ratio.
    pub a_over_b: f64,
    /// The ratio located by bisection on the stated equality.
    pub bisected: f64,
    /// Largest residual of the stated equality at `a_over_b` (with `b = 1`).
    pub residual: f64,
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    while hi - lo > 1e-14 {
        let m = 0.5 * (lo + hi);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = m;
            flo = fm;
        } else {
            hi = m;
        }
    }
    0.5 * (lo + hi)
}

fn axis(key: u32, x: f64, pick_b: bool) -> f64 {
    let (p, q) = confocal_axes(FormulaKey::Center(key), x, 1.0).unwrap_or((f64::NAN, f64::NAN));
    if pick_b {
        q
    } else {
        p
    }
}

/// Polynomial whose positive root makes the `X4` locus a rotated billiard.
pub fn x4_rotation_polynomial(x: f64) -> f64 {
    x.powi(6) + x.powi(4) - 4.0 * x.powi(3) - x * x - 1.0
}

pub fn special_ratios() -> Vec<SpecialRatio> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let r3 = (2.0 * 33f64.sqrt() + 2.0).sqrt() / 2.0;
    let r4 = (2.0 * 2f64.sqrt() - 1.0).sqrt();
    let r4_star = bisect(x4_rotation_polynomial, 1.2, 2.0);
    vec![
        SpecialRatio {
            k: 3,
            description: "b3 = b",
            a_over_b: r3,
            bisected: bisect(|x| axis(3, x, true) - 1.0, 1.5, 2.5),
            residual: (axis(3, r3, true) - 1.0).abs(),
        },
        SpecialRatio {
            k: 4,
            description: "b4 = b",
            a_over_b: r4,
            bisected: bisect(|x| axis(4, x, true) - 1.0, 1.1, 1.45),
            residual: (axis(4, r4, true) - 1.0).abs(),
        },
        SpecialRatio {
            k: 4,
            description: "X4 locus is the billiard rotated: (a4, b4) = (b, a); x^6 + x^4 - 4x^3 - x^2 - 1 = 0",
            a_over_b: r4_star,
            bisected: bisect(|x| axis(4, x, false) - 1.0, 1.45, 2.0),
            residual: x4_rotation_polynomial(r4_star)
                .abs()
                .max((axis(4, r4_star, false) - 1.0).abs())
                .max((axis(4, r4_star, true) - r4_star).abs()),
        },
        SpecialRatio {
            k: 40,
            description: "b40 = b",
            a_over_b: 2f64.sqrt(),
            bisected: bisect(|x| axis(40, x, true) - 1.0, 1.1, 1.55),
            residual: (axis(40, 2f64.sqrt(), true) - 1.0).abs(),
        },
        SpecialRatio {
            k: 40,
            description: "X40 locus is the billiard rotated: (a40, b40) = (b, a)",
            a_over_b: phi,
            bisected: bisect(|x| axis(40, x, false) - 1.0, 1.55, 2.0),
            residual: (axis(40, phi, false) - 1.0).abs().max((axis(40, phi, true) - phi).abs()),
        },
    ]
}

/// A named identity between formula values.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeCheck {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
}

impl ShapeCheck {
    pub fn gap(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.rhs.abs().max(1e-300)
    }
}

pub fn shape_relations(a: f64, b: f64) -> Result<Vec<ShapeCheck>> {
    require_ab(a, b)?;
    let ax = |k: u32| confocal_axes(FormulaKey::Center(k), a, b);
    let (ac, bc) = confocal_caustic(a, b)?;
    let mut out = Vec::new();
    let mut push = |name: String, lhs: f64, rhs: f64| out.push(ShapeCheck { name, lhs, rhs });
    for k in [2, 7, 57, 63] {
        let (x, y) = ax(k)?;
        push(format!("X{k} similar to billiard: a_k/b_k = a/b"), x / y, a / b);
    }
    let (x2, _) = ax(2)?;
    let (x7, _) = ax(7)?;
    push("k7 / k2 = 3".into(), x7 / x2, 3.0);
    for k in [3, 84] {
        let (x, y) = ax(k)?;
        push(format!("X{k} similar to rotated caustic: a_k/b_k = b_c/a_c"), x / y, bc / ac);
    }
    for k in [4, 10, 40] {
        let (x, y) = ax(k)?;
        push(format!("X{k} similar to rotated billiard: a_k/b_k = b/a"), x / y, b / a);
    }
    let (x11, y11) = ax(11)?;
    push("a11 = a_c".into(), x11, ac);
    push("b11 = b_c".into(), y11, bc);
    let (x55, y55) = ax(55)?;
    let factor = (a * a - b * b) / (a * a + b * b);
    push("a55 = a_c c^2/(a^2+b^2)".into(), x55, ac * factor);
    push("b55 = b_c c^2/(a^2+b^2)".into(), y55, bc * factor);
    for k in [88, 100] {
        let (x, y) = ax(k)?;
        push(format!("a{k} = a"), x, a);
        push(format!("b{k} = b"), y, b);
    }
    let (x1, y1) = ax(1)?;
    let (xe, ye) = confocal_axes(FormulaKey::Excenters, a, b)?;
    push("(a1/b1)(a_e/b_e) = 1".into(), (x1 / y1) * (xe / ye), 1.0);
    Ok(out)
}

/// A closed form compared with a fitted locus.
#[derive(Debug, Clone, PartialEq)]
pub struct FormulaCheck {
    pub family: Family,
    pub key: FormulaKey,
    pub a: f64,
    pub b: f64,
    /// Formula values along `x` and `y`, signs kept.
    pub formula: (f64, f64),
    pub fitted: ConicFit,
    /// Worst relative gap between the unordered axis pairs.
    pub rel_err: f64,
    /// A formula value came out negative.
    pub sign_flipped: bool,
    /// The fitted major axis lies along the formula's larger axis.
    pub orientation_agrees: bool,
}

impl FormulaCheck {
    pub fn passed(&self, tol: f64) -> bool {
        self.rel_err <= tol
    }
}

/// Fit of the locus swept by all three excenters.
pub fn excenter_fit(pair: &ConcentricPair, n: usize, tol: &Tolerances) -> Result<ConicFit> {
    let mut pts = Vec::with_capacity(3 * n);
    for t in sweep(pair, &unit_lambdas(n, 1))? {
        pts.extend(excentral_triangle(&t)?.vertices);
    }
    fit_conic_with(&pts, tol)
}

fn compare(family: Family, key: FormulaKey, a: f64, b: f64, formula: (f64, f64), fitted: ConicFit) -> FormulaCheck {
    let (fx, fy) = (formula.0.abs(), formula.1.abs());
    let (hi, lo) = (fx.max(fy), fx.min(fy));
    let rel = |x: f64, y: f64| (x - y).abs() / y.abs();
    // A collapsed locus has no minor axis to be relative to.
    let minor_scale = match fitted.kind {
        ConicKind::Segment | ConicKind::Point => fitted.semi_major,
        _ => fitted.semi_minor,
    };
    let usable = fitted.kind.is_elliptic() || fitted.kind == ConicKind::Segment;
    let rel_err = if usable && formula.0.is_finite() && formula.1.is_finite() {
        rel(hi, fitted.semi_major).max((lo - fitted.semi_minor).abs() / minor_scale)
    } else {
        f64::INFINITY
    };
    let major_along_x = fitted.angle.cos().abs() >= std::f64::consts::FRAC_1_SQRT_2;
    let orientation_agrees = fitted.kind == ConicKind::Circle || (fx - fy).abs() <= 1e-9 * hi || (fx > fy) == major_along_x;
    FormulaCheck {
        family,
        key,
        a,
        b,
        formula,
        fitted,
        rel_err,
        sign_flipped: formula.0 < 0.0 || formula.1 < 0.0,
        orientation_agrees,
    }
}

/// Samples per locus when checking formulas.
pub const CHECK_SAMPLES: usize = 1440;

pub fn check_confocal(key: FormulaKey, a: f64, b: f64, tol: &Tolerances) -> Result<FormulaCheck> {
    let formula = confocal_axes(key, a, b)?;
    let pair = family_pair(Family::Confocal, a, b)?;
    let fitted = match key {
        FormulaKey::Excenters => excenter_fit(&pair, CHECK_SAMPLES, tol)?,
        FormulaKey::Center(k) => {
            locus::classify_locus_with(crate::centers::CenterTable::builtin(), &pair, k, CHECK_SAMPLES, tol)?.fit
        }
    };
    Ok(compare(Family::Confocal, key, a, b, formula, fitted))
}

pub fn check_homothetic(k: u32, a: f64, b: f64, tol: &Tolerances) -> Result<FormulaCheck> {
    let formula = homothetic_axes(k, a, b)?.along_xy();
    let pair = family_pair(Family::Homothetic, a, b)?;
    let fitted = locus::classify_locus_with(crate::centers::CenterTable::builtin(), &pair, k, CHECK_SAMPLES, tol)?.fit;
    Ok(compare(Family::Homothetic, FormulaKey::Center(k), a, b, formula, fitted))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values() {
        let (a1, b1) = confocal_axes(FormulaKey::Center(1), 1.5, 1.0).unwrap();
        assert!((a1 - 0.635041).abs() < 1e-6 && (b1 - 0.297438).abs() < 1e-6);
        let (a40, b40) = confocal_axes(FormulaKey::Center(40), 1.5, 1.0).unwrap();
        assert!((a40 - 0.833333).abs() < 1e-6 && (b40 - 1.25).abs() < 1e-15);
        let (ae, be) = confocal_axes(FormulaKey::Excenters, 1.5, 1.0).unwrap();
        assert!((ae - 1.968375).abs() < 1e-6 && (be - 4.202562).abs() < 1e-6);
        assert_eq!(homothetic_axes(13, 1.5, 1.0).unwrap(), Axes::Circle(0.25));
        assert_eq!(homothetic_axes(115, 1.5, 1.0).unwrap(), Axes::Ellipse(0.75, 0.5));
        assert_eq!(homothetic_axes(99, 1.5, 1.0).unwrap(), Axes::Ellipse(1.5, 1.0));
        assert!(confocal_axes(FormulaKey::Center(6), 1.5, 1.0).is_err());
        assert!(homothetic_axes(1, 1.5, 1.0).is_err());
        assert!(confocal_axes(FormulaKey::Center(1), 1.0, 1.5).is_err());
    }

    #[test]
    fn key_parsing() {
        assert_eq!("X40".parse::<FormulaKey>().unwrap(), FormulaKey::Center(40));
        assert_eq!("excenters".parse::<FormulaKey>().unwrap(), FormulaKey::Excenters);
        assert!("Xq".parse::<FormulaKey>().is_err());
        assert_eq!(CONFOCAL_KEYS.len(), 30);
    }

    #[test]
    fn specials() {
        let s = special_ratios();
        assert_eq!(s.len(), 5);
        for r in &s {
            assert!(r.residual < 1e-10, "{} {}", r.k, r.description);
            assert!((r.bisected - r.a_over_b).abs() < 1e-10, "{} {}", r.k, r.description);
        }
        assert!((s[2].a_over_b - 1.51).abs() < 5e-3);
        let (a40, b40) = confocal_axes(FormulaKey::Center(40), s[4].a_over_b, 1.0).unwrap();
        assert!((a40 - 1.0).abs() < 1e-12 && (b40 - s[4].a_over_b).abs() < 1e-12);
    }

    #[test]
    fn shapes() {
        for c in shape_relations(1.5, 1.0).unwrap() {
            assert!(c.gap() < 1e-12, "{}: {} vs {}", c.name, c.lhs, c.rhs);
        }
        assert_eq!(homothetic_shape(99).unwrap(), ShapeNote::IdenticalBilliard);
        assert_eq!(homothetic_shape(115).unwrap(), ShapeNote::IdenticalCaustic);
        assert_eq!(homothetic_shape(3).unwrap(), ShapeNote::SimilarRotatedBilliard);
        assert_eq!(homothetic_shape(14).unwrap(), ShapeNote::Circle);
        assert_eq!(confocal_shape(FormulaKey::Center(11)), ShapeNote::IdenticalCaustic);
    }

    #[test]
    fn fitted_checks() {
        let tol = Tolerances::default();
        for key in [FormulaKey::Center(1), FormulaKey::Center(11), FormulaKey::Excenters, FormulaKey::Center(40)] {
            let c = check_confocal(key, 1.5, 1.0, &tol).unwrap();
            assert!(c.passed(1e-6), "{key}: {:e}", c.rel_err);
            assert!(c.orientation_agrees, "{key}");
        }
        let c = check_homothetic(13, 1.5, 1.0, &tol).unwrap();
        assert!(c.passed(1e-6));
    }
}
