//! Triangle centers from barycentric weights, and linear combinations of
//! `X1`, `X2`, `X3` that reproduce them.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::error::{Error, ParseError, Result};
use crate::expr::{parse_expr_at, Expr};
use crate::families::TriangleSample;
use crate::geometry::PlaneComplex;

const BUILTIN: &str = include_str!("../data/centers.txt");

/// One table record: `X_k` has first barycentric `f(a, b, c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CenterSpec {
    pub k: u32,
    pub source: String,
    pub first: Expr,
    pub second: Expr,
    pub third: Expr,
    pub squared_rational: bool,
}

impl CenterSpec {
    /// Weights `(f(a,b,c), f(b,c,a), f(c,a,b))` for side lengths `s`.
    pub fn weights(&self, s: [f64; 3]) -> [f64; 3] {
        [
            self.first.eval(s[0], s[1], s[2]),
            self.second.eval(s[0], s[1], s[2]),
            self.third.eval(s[0], s[1], s[2]),
        ]
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CenterTable {
    specs: BTreeMap<u32, CenterSpec>,
}

impl CenterTable {
    /// Parse `k; expr; flag` records. `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut specs = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = raw.split(';').collect();
            if fields.len() != 3 {
                return Err(ParseError::new(line, 1, format!("expected 3 fields, found {}", fields.len())));
            }
            let k: u32 = fields[0]
                .trim()
                .parse()
                .map_err(|_| ParseError::new(line, 1, format!("bad index '{}'", fields[0].trim())))?;
            if k == 0 {
                return Err(ParseError::new(line, 1, "index must be positive"));
            }
            let expr_col = fields[0].len() + 2;
            let first = parse_expr_at(fields[1], line).map_err(|e| ParseError::new(line, expr_col + e.column - 1, e.message))?;
            let flag_col = expr_col + fields[1].len() + 1;
            let flag = match fields[2].trim() {
                "true" => true,
                "false" => false,
                other => return Err(ParseError::new(line, flag_col, format!("bad flag '{other}'"))),
            };
            if flag != first.is_squared_rational() {
                return Err(ParseError::new(
                    line,
                    flag_col,
                    format!("flag {flag} disagrees with the expression structure"),
                ));
            }
            if specs.contains_key(&k) {
                return Err(ParseError::new(line, 1, format!("duplicate index {k}")));
            }
            let second = first.rotated();
            let third = second.rotated();
            specs.insert(
                k,
                CenterSpec {
                    k,
                    source: fields[1].trim().to_string(),
                    first,
                    second,
                    third,
                    squared_rational: flag,
                },
            );
        }
        Ok(CenterTable { specs })
    }

    /// The table shipped with the crate.
    pub fn builtin() -> &'static CenterTable {
        static TABLE: OnceLock<CenterTable> = OnceLock::new();
        TABLE.get_or_init(|| CenterTable::parse(BUILTIN).expect("built-in center table parses"))
    }

    pub fn get(&self, k: u32) -> Option<&CenterSpec> {
        self.specs.get(&k)
    }

    pub fn indices(&self) -> impl Iterator<Item = u32> + '_ {
        self.specs.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }

    pub fn center_point(&self, t: &TriangleSample, k: u32) -> Result<PlaneComplex> {
        let spec = self.get(k).ok_or(Error::MissingCenter(k))?;
        let s = side_lengths(t)?;
        let w = spec.weights(s);
        let sum = w[0] + w[1] + w[2];
        if !sum.is_finite() || sum == 0.0 || w.iter().any(|x| !x.is_finite()) {
            return Err(Error::Evaluation(k));
        }
        let v = t.vertices;
        Ok((v[0] * w[0] + v[1] * w[1] + v[2] * w[2]) / sum)
    }
}

/// Sides opposite each vertex: `a = |V2 V3|`, `b = |V3 V1|`, `c = |V1 V2|`.
pub fn side_lengths(t: &TriangleSample) -> Result<[f64; 3]> {
    let v = t.vertices;
    let s = [(v[1] - v[2]).norm(), (v[2] - v[0]).norm(), (v[0] - v[1]).norm()];
    let area = signed_area(t).abs();
    let scale = s.iter().fold(0.0f64, |m, x| m.max(*x));
    if !(area > 1e-12 * scale * scale) {
        return Err(Error::Geometry(format!("degenerate triangle (area {area:e})")));
    }
    Ok(s)
}

pub fn signed_area(t: &TriangleSample) -> f64 {
    let [p, q, r] = t.vertices;
    let (u, w) = (q - p, r - p);
    (u.re * w.im - u.im * w.re) / 2.0
}

/// `X_k` of `t` from the built-in table.
pub fn center_point(t: &TriangleSample, k: u32) -> Result<PlaneComplex> {
    CenterTable::builtin().center_point(t, k)
}

/// Inradius, circumradius and their ratio `ρ = r/R`.
pub fn inradius_circumradius(t: &TriangleSample) -> Result<(f64, f64, f64)> {
    let [a, b, c] = side_lengths(t)?;
    let area = signed_area(t).abs();
    let r = 2.0 * area / (a + b + c);
    let big_r = a * b * c / (4.0 * area);
    Ok((r, big_r, r / big_r))
}

/// Rows `X_k = α X1 + β X2 + γ X3` as rational functions of `ρ`.
/// Each entry is `(numerators, denominator)` with numerators and denominator
/// given as polynomial coefficients `[c0, c1, c2]`.
type Poly = [f64; 3];

struct ComboRow {
    k: u32,
    num: [Poly; 3],
    den: Poly,
}

const ONE: Poly = [1.0, 0.0, 0.0];
const fn c(x: f64) -> Poly {
    [x, 0.0, 0.0]
}
const fn lin(c0: f64, c1: f64) -> Poly {
    [c0, c1, 0.0]
}

#[rustfmt::skip]
const COMBO_ROWS: &[ComboRow] = &[
    ComboRow { k: 1, num: [c(1.0), c(0.0), c(0.0)], den: ONE },
    ComboRow { k: 2, num: [c(0.0), c(1.0), c(0.0)], den: ONE },
    ComboRow { k: 3, num: [c(0.0), c(0.0), c(1.0)], den: ONE },
    ComboRow { k: 4, num: [c(0.0), c(3.0), c(-2.0)], den: ONE },
    ComboRow { k: 5, num: [c(0.0), c(1.5), c(-0.5)], den: ONE },
    ComboRow { k: 7, num: [lin(4.0, 2.0), lin(0.0, 3.0), lin(0.0, -4.0)], den: lin(4.0, 1.0) },
    ComboRow { k: 8, num: [c(-2.0), c(3.0), c(0.0)], den: ONE },
    ComboRow { k: 9, num: [lin(-2.0, -1.0), c(6.0), lin(0.0, 2.0)], den: lin(4.0, 1.0) },
    ComboRow { k: 10, num: [c(-0.5), c(1.5), c(0.0)], den: ONE },
    ComboRow { k: 11, num: [c(1.0), lin(0.0, -3.0), lin(0.0, 1.0)], den: lin(1.0, -2.0) },
    ComboRow { k: 12, num: [c(1.0), lin(0.0, 3.0), lin(0.0, -1.0)], den: lin(1.0, 2.0) },
    ComboRow { k: 20, num: [c(0.0), c(-3.0), c(4.0)], den: ONE },
    ComboRow { k: 21, num: [c(0.0), c(3.0), lin(0.0, 2.0)], den: lin(3.0, 2.0) },
    ComboRow { k: 35, num: [c(1.0), c(0.0), lin(0.0, 2.0)], den: lin(1.0, 2.0) },
    ComboRow { k: 36, num: [c(1.0), c(0.0), lin(0.0, -2.0)], den: lin(1.0, -2.0) },
    ComboRow { k: 40, num: [c(-1.0), c(0.0), c(2.0)], den: ONE },
    ComboRow { k: 46, num: [lin(1.0, 1.0), c(0.0), lin(0.0, -2.0)], den: lin(1.0, -1.0) },
    ComboRow { k: 55, num: [c(1.0), c(0.0), lin(0.0, 1.0)], den: lin(1.0, 1.0) },
    ComboRow { k: 56, num: [c(1.0), c(0.0), lin(0.0, -1.0)], den: lin(1.0, -1.0) },
    ComboRow { k: 57, num: [lin(2.0, 1.0), c(0.0), lin(0.0, -2.0)], den: lin(2.0, -1.0) },
    ComboRow { k: 63, num: [lin(-2.0, -1.0), c(3.0), lin(0.0, 2.0)], den: lin(1.0, 1.0) },
    ComboRow { k: 65, num: [lin(1.0, 1.0), c(0.0), lin(0.0, -1.0)], den: ONE },
    ComboRow { k: 72, num: [lin(-2.0, -1.0), c(3.0), lin(0.0, 1.0)], den: ONE },
    ComboRow { k: 78, num: [lin(2.0, 1.0), c(-3.0), c(0.0)], den: lin(-1.0, 1.0) },
    ComboRow { k: 79, num: [lin(3.0, 2.0), lin(0.0, 6.0), lin(0.0, -6.0)], den: lin(3.0, 2.0) },
    ComboRow { k: 80, num: [lin(1.0, 2.0), lin(0.0, -6.0), lin(0.0, 2.0)], den: lin(1.0, -2.0) },
    ComboRow { k: 84, num: [lin(-2.0, -1.0), c(6.0), lin(-4.0, 2.0)], den: lin(0.0, 1.0) },
    ComboRow { k: 90, num: [[-1.0, -2.0, -1.0], lin(0.0, 6.0), [0.0, -2.0, 2.0]], den: [-1.0, 2.0, 1.0] },
    ComboRow { k: 100, num: [c(2.0), c(-3.0), lin(0.0, 2.0)], den: lin(-1.0, 2.0) },
    ComboRow { k: 104, num: [c(-2.0), c(3.0), lin(-2.0, 2.0)], den: lin(-1.0, 2.0) },
    ComboRow { k: 119, num: [c(1.0), lin(-3.0, 3.0), lin(1.0, -1.0)], den: lin(-1.0, 2.0) },
    ComboRow { k: 140, num: [c(0.0), c(0.75), c(0.25)], den: ONE },
    ComboRow { k: 142, num: [lin(2.0, 1.0), lin(6.0, 3.0), lin(0.0, -2.0)], den: lin(8.0, 2.0) },
    ComboRow { k: 144, num: [lin(-8.0, -4.0), lin(12.0, -3.0), lin(0.0, 8.0)], den: lin(4.0, 1.0) },
    ComboRow { k: 145, num: [c(4.0 / 7.0), c(3.0 / 7.0), c(0.0)], den: ONE },
    ComboRow { k: 149, num: [c(-4.0), lin(9.0, -6.0), lin(-8.0, 12.0)], den: lin(-3.0, 6.0) },
    ComboRow { k: 153, num: [c(4.0), lin(-3.0, -6.0), lin(-4.0, 12.0)], den: lin(-3.0, 6.0) },
    ComboRow { k: 165, num: [c(-1.0 / 3.0), c(0.0), c(4.0 / 3.0)], den: ONE },
    ComboRow { k: 191, num: [lin(-3.0, -2.0), c(6.0), lin(0.0, 4.0)], den: lin(3.0, 2.0) },
    ComboRow { k: 200, num: [lin(4.0, 1.0), c(-6.0), c(0.0)], den: lin(-2.0, 1.0) },
];

fn poly(p: &Poly, x: f64) -> f64 {
    p[0] + x * (p[1] + x * p[2])
}

/// Indices that have a combination row.
pub fn combo_indices() -> impl Iterator<Item = u32> {
    COMBO_ROWS.iter().map(|r| r.k)
}

/// `(α, β, γ)` with `X_k = α X1 + β X2 + γ X3` for a triangle with `r/R = ρ`.
pub fn combo_coefficients(k: u32, rho: f64) -> Result<(f64, f64, f64)> {
    let row = COMBO_ROWS.iter().find(|r| r.k == k).ok_or(Error::MissingRow(k))?;
    let den = poly(&row.den, rho);
    if den.abs() < 1e-12 {
        return Err(Error::Pole { k, rho });
    }
    let [x, y, z] = row.num.map(|p| poly(&p, rho) / den);
    Ok((x, y, z))
}

/// `|X_k - (α X1 + β X2 + γ X3)| / R`.
pub fn combo_residual(t: &TriangleSample, k: u32) -> Result<f64> {
    let (_, big_r, rho) = inradius_circumradius(t)?;
    let (al, be, ga) = combo_coefficients(k, rho)?;
    let x = center_point(t, k)?;
    let pred = center_point(t, 1)? * al + center_point(t, 2)? * be + center_point(t, 3)? * ga;
    Ok((x - pred).norm() / big_r)
}

/// `X1 = α X2 + β X3 + γ X9` for a triangle with `r/R = ρ`.
pub fn incenter_in_x2_x3_x9(rho: f64) -> (f64, f64, f64) {
    let d = rho + 2.0;
    (6.0 / d, 2.0 * rho / d, -(rho + 4.0) / d)
}

/// Euler-line centers with constant `X_k = α X2 + β X3`.
pub const EULER_FIXED: [(u32, f64, f64); 6] = [
    (2, 1.0, 0.0),
    (3, 0.0, 1.0),
    (4, 3.0, -2.0),
    (5, 1.5, -0.5),
    (20, -3.0, 4.0),
    (140, 0.75, 0.25),
];

pub fn x2x3_fixed_combos() -> &'static [(u32, f64, f64)] {
    &EULER_FIXED
}
