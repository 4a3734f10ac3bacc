//! Concentric axis-parallel Poncelet pairs and their 3-periodic triangles.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::centers::{self, CenterTable};
use crate::error::{Error, Result};
use crate::geometry::{delta, solve_cubic, PlaneComplex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Confocal,
    Incircle,
    Circumcircle,
    Homothetic,
    Excentral,
    Dual,
    Custom,
}

impl Family {
    /// The six named families.
    pub const NAMED: [Family; 6] = [
        Family::Confocal,
        Family::Incircle,
        Family::Circumcircle,
        Family::Homothetic,
        Family::Dual,
        Family::Excentral,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Confocal => "confocal",
            Family::Incircle => "incircle",
            Family::Circumcircle => "circumcircle",
            Family::Homothetic => "homothetic",
            Family::Excentral => "excentral",
            Family::Dual => "dual",
            Family::Custom => "custom",
        }
    }

    /// The center that stays put over the family, if there is one.
    pub fn stationary_center(self) -> Option<u32> {
        match self {
            Family::Confocal => Some(9),
            Family::Incircle => Some(1),
            Family::Circumcircle => Some(3),
            Family::Homothetic => Some(2),
            Family::Excentral => Some(6),
            Family::Dual => Some(4),
            Family::Custom => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "confocal" | "billiard" => Family::Confocal,
            "incircle" => Family::Incircle,
            "circumcircle" => Family::Circumcircle,
            "homothetic" => Family::Homothetic,
            "excentral" => Family::Excentral,
            "dual" => Family::Dual,
            "custom" => Family::Custom,
            other => return Err(Error::Domain(format!("unknown family '{other}'"))),
        })
    }
}

/// Outer ellipse `(a, b)` with a concentric, axis-parallel caustic `(a_c, b_c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcentricPair {
    pub a: f64,
    pub b: f64,
    pub a_c: f64,
    pub b_c: f64,
    pub family: Family,
}

impl ConcentricPair {
    pub fn new(a: f64, b: f64, a_c: f64, b_c: f64, family: Family) -> Result<Self> {
        let finite = [a, b, a_c, b_c].iter().all(|x| x.is_finite());
        if !finite || !(a > 0.0 && b > 0.0 && a_c > 0.0 && b_c > 0.0) {
            return Err(Error::Domain(format!("semi-axes must be positive: ({a}, {b}, {a_c}, {b_c})")));
        }
        if !(a_c < a && b_c < b) {
            return Err(Error::Domain(format!("caustic ({a_c}, {b_c}) is not nested in ({a}, {b})")));
        }
        Ok(ConcentricPair { a, b, a_c, b_c, family })
    }
}

/// The pair after the outer ellipse is sent to the unit circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedPair {
    /// Caustic foci.
    pub f: PlaneComplex,
    pub g: PlaneComplex,
    /// Normalized caustic semi-axes `(a_c/a, b_c/b)`.
    pub a_n: f64,
    pub b_n: f64,
    /// `(a_n + b_n)/2` and `(a_n - b_n)/2`.
    pub p: f64,
    pub q: f64,
    /// Outer semi-axes of the original pair.
    pub outer_a: f64,
    pub outer_b: f64,
}

/// One 3-periodic and the Blaschke parameter that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleSample {
    pub vertices: [PlaneComplex; 3],
    pub lambda: PlaneComplex,
}

pub fn confocal_caustic(a: f64, b: f64) -> Result<(f64, f64)> {
    if !(a > b && b > 0.0) {
        return Err(Error::Domain(format!("confocal caustic needs a > b > 0, got ({a}, {b})")));
    }
    let d = delta(a, b)?;
    let c2 = a * a - b * b;
    Ok((a * (d - b * b) / c2, b * (a * a - d) / c2))
}

/// `a_c/a + b_c/b - 1`; zero exactly when the pair carries a 3-periodic family.
pub fn closure_residual(pair: &ConcentricPair) -> f64 {
    pair.a_c / pair.a + pair.b_c / pair.b - 1.0
}

/// Excentral outer ellipse `((b² + δ)/a, (a² + δ)/b)`.
pub fn excentral_outer(a: f64, b: f64) -> Result<(f64, f64)> {
    let d = delta(a, b)?;
    Ok(((b * b + d) / a, (a * a + d) / b))
}

/// Default circumcircle caustic: `a_c = 0.6 a`.
pub const CIRCUMCIRCLE_CAUSTIC_RATIO: f64 = 0.6;

pub fn circumcircle_pair(radius: f64, a_c: f64) -> Result<ConcentricPair> {
    ConcentricPair::new(radius, radius, a_c, radius - a_c, Family::Circumcircle)
}

pub fn family_pair(family: Family, a: f64, b: f64) -> Result<ConcentricPair> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(format!("outer semi-axes must be positive, got ({a}, {b})")));
    }
    let pair = match family {
        Family::Confocal => {
            let (a_c, b_c) = confocal_caustic(a, b)?;
            ConcentricPair::new(a, b, a_c, b_c, family)?
        }
        Family::Incircle => {
            let r = a * b / (a + b);
            ConcentricPair::new(a, b, r, r, family)?
        }
        Family::Circumcircle => circumcircle_pair(a, CIRCUMCIRCLE_CAUSTIC_RATIO * a)?,
        Family::Homothetic => ConcentricPair::new(a, b, a / 2.0, b / 2.0, family)?,
        Family::Excentral => {
            let (ae, be) = excentral_outer(a, b)?;
            ConcentricPair::new(ae, be, a, b, family)?
        }
        Family::Dual => {
            let s = find_stationary_caustic(a, b, 4)?;
            ConcentricPair::new(a, b, s.a_c, s.b_c, family)?
        }
        Family::Custom => {
            return Err(Error::Domain("a custom pair needs an explicit caustic".into()));
        }
    };
    let res = closure_residual(&pair);
    if res.abs() > 1e-10 {
        return Err(Error::Closure(res));
    }
    Ok(pair)
}

pub fn normalize(pair: &ConcentricPair) -> NormalizedPair {
    let a_n = pair.a_c / pair.a;
    let b_n = pair.b_c / pair.b;
    let (f, g) = if a_n >= b_n {
        let c = (a_n * a_n - b_n * b_n).sqrt();
        (PlaneComplex::new(-c, 0.0), PlaneComplex::new(c, 0.0))
    } else {
        let c = (b_n * b_n - a_n * a_n).sqrt();
        (PlaneComplex::new(0.0, -c), PlaneComplex::new(0.0, c))
    };
    NormalizedPair {
        f,
        g,
        a_n,
        b_n,
        p: (a_n + b_n) / 2.0,
        q: (a_n - b_n) / 2.0,
        outer_a: pair.a,
        outer_b: pair.b,
    }
}

/// `B(z) = z (z - f)/(1 - f̄ z) (z - g)/(1 - ḡ z)`.
pub fn blaschke(np: &NormalizedPair, z: PlaneComplex) -> PlaneComplex {
    let one = PlaneComplex::new(1.0, 0.0);
    z * (z - np.f) / (one - np.f.conj() * z) * (z - np.g) / (one - np.g.conj() * z)
}

/// The three solutions of `B(z) = λ`, sorted by argument.
pub fn blaschke_triangle(np: &NormalizedPair, lambda: PlaneComplex) -> Result<[PlaneComplex; 3]> {
    if (lambda.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("|lambda| = {} is not 1", lambda.norm())));
    }
    if np.f.norm() >= 1.0 || np.g.norm() >= 1.0 {
        return Err(Error::Domain("caustic foci must lie inside the unit disk".into()));
    }
    let (f, g) = (np.f, np.g);
    let (fb, gb) = (f.conj(), g.conj());
    let one = PlaneComplex::new(1.0, 0.0);
    let mut roots = solve_cubic(one, -(f + g + lambda * fb * gb), f * g + lambda * (fb + gb), -lambda)?;
    roots.sort_by(|x, y| x.arg().total_cmp(&y.arg()));
    Ok(roots)
}

fn denormalize(pair: &ConcentricPair, z: PlaneComplex) -> PlaneComplex {
    PlaneComplex::new(pair.a * z.re, pair.b * z.im)
}

pub fn triangle_at(pair: &ConcentricPair, lambda: PlaneComplex) -> Result<TriangleSample> {
    let np = normalize(pair);
    let z = blaschke_triangle(&np, lambda)?;
    Ok(TriangleSample {
        vertices: z.map(|w| denormalize(pair, w)),
        lambda,
    })
}

/// Triangles along `lambdas` with vertex labels carried by nearest continuation.
pub fn sweep(pair: &ConcentricPair, lambdas: &[PlaneComplex]) -> Result<Vec<TriangleSample>> {
    let np = normalize(pair);
    let mut out = Vec::with_capacity(lambdas.len());
    let mut prev: Option<[PlaneComplex; 3]> = None;
    for &lambda in lambdas {
        let mut z = blaschke_triangle(&np, lambda)?;
        if let Some(p) = prev {
            z = match_labels(&p, &z);
        }
        prev = Some(z);
        out.push(TriangleSample {
            vertices: z.map(|w| denormalize(pair, w)),
            lambda,
        });
    }
    Ok(out)
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn match_labels(prev: &[PlaneComplex; 3], next: &[PlaneComplex; 3]) -> [PlaneComplex; 3] {
    let cost = |p: &[usize; 3]| (0..3).map(|i| (prev[i] - next[p[i]]).norm()).sum::<f64>();
    let best = PERMS
        .iter()
        .min_by(|x, y| cost(x).total_cmp(&cost(y)))
        .copied()
        .unwrap_or([0, 1, 2]);
    best.map(|i| next[i])
}

/// Uniform points `e^{2πi j/n}`, `j = 0..turns·n`.
pub fn unit_lambdas(n: usize, turns: usize) -> Vec<PlaneComplex> {
    (0..n * turns)
        .map(|j| PlaneComplex::from_polar(1.0, 2.0 * PI * j as f64 / n as f64))
        .collect()
}

/// Distance-to-tangency of the line through `p` and `q` against the caustic.
pub fn tangency_residual(pair: &ConcentricPair, p: PlaneComplex, q: PlaneComplex) -> f64 {
    let d = q - p;
    let len = d.norm();
    if len == 0.0 {
        return f64::INFINITY;
    }
    let n = PlaneComplex::new(-d.im, d.re) / len;
    let dist = n.re * p.re + n.im * p.im;
    ((pair.a_c * n.re).hypot(pair.b_c * n.im) - dist.abs()).abs()
}

/// Worst tangency residual over the three sides.
pub fn side_tangency(pair: &ConcentricPair, t: &TriangleSample) -> f64 {
    let v = &t.vertices;
    (0..3)
        .map(|i| tangency_residual(pair, v[i], v[(i + 1) % 3]))
        .fold(0.0, f64::max)
}

/// Residual of the outer-ellipse equation at a vertex.
pub fn outer_residual(pair: &ConcentricPair, z: PlaneComplex) -> f64 {
    ((z.re / pair.a).powi(2) + (z.im / pair.b).powi(2) - 1.0).abs()
}

/// A triangle built by drawing tangents from a vertex, with its closure residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentTriangle {
    pub sample: TriangleSample,
    pub closure_residual: f64,
}

/// Second intersection of the line `p + s d` with the outer ellipse.
fn second_intersection(pair: &ConcentricPair, p: PlaneComplex, d: PlaneComplex) -> PlaneComplex {
    let (a2, b2) = (pair.a * pair.a, pair.b * pair.b);
    let s = -2.0 * (p.re * d.re / a2 + p.im * d.im / b2) / (d.re * d.re / a2 + d.im * d.im / b2);
    p + d * s
}

/// Poncelet construction from `P₁ = (a cos t, b sin t)` without the Blaschke map.
pub fn tangent_construction(pair: &ConcentricPair, vertex_angle: f64) -> Result<TangentTriangle> {
    let p1 = PlaneComplex::new(pair.a * vertex_angle.cos(), pair.b * vertex_angle.sin());
    let q = PlaneComplex::new(p1.re / pair.a_c, p1.im / pair.b_c);
    let r = q.norm();
    if r <= 1.0 {
        return Err(Error::Geometry("vertex lies inside the caustic; no real tangents".into()));
    }
    let spread = (1.0 / r).acos();
    let touch = |theta: f64| PlaneComplex::new(pair.a_c * theta.cos(), pair.b_c * theta.sin());
    let t_plus = touch(q.arg() + spread);
    let t_minus = touch(q.arg() - spread);
    let p2 = second_intersection(pair, p1, t_plus - p1);
    let p3 = second_intersection(pair, p1, t_minus - p1);
    let np = normalize(pair);
    let lambda = blaschke(&np, PlaneComplex::new(p1.re / pair.a, p1.im / pair.b));
    Ok(TangentTriangle {
        sample: TriangleSample {
            vertices: [p1, p2, p3],
            lambda: lambda / lambda.norm(),
        },
        closure_residual: tangency_residual(pair, p2, p3),
    })
}

/// Excentral triangle: vertices `(-a:b:c)`, `(a:-b:c)`, `(a:b:-c)`.
pub fn excentral_triangle(t: &TriangleSample) -> Result<TriangleSample> {
    let [s1, s2, s3] = centers::side_lengths(t)?;
    let v = t.vertices;
    let ex = |w: [f64; 3]| (v[0] * w[0] + v[1] * w[1] + v[2] * w[2]) / (w[0] + w[1] + w[2]);
    Ok(TriangleSample {
        vertices: [ex([-s1, s2, s3]), ex([s1, -s2, s3]), ex([s1, s2, -s3])],
        lambda: t.lambda,
    })
}

/// A caustic `(t a, (1 - t) b)` over which a chosen center is stationary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryCaustic {
    pub t: f64,
    pub a_c: f64,
    pub b_c: f64,
    pub diameter: f64,
}

const DIAMETER_SAMPLES: usize = 64;

/// Max pairwise distance of the `X_k` locus over `DIAMETER_SAMPLES` triangles.
pub fn locus_diameter(table: &CenterTable, pair: &ConcentricPair, k: u32) -> Result<f64> {
    let lambdas: Vec<_> = (0..DIAMETER_SAMPLES)
        .map(|j| PlaneComplex::from_polar(1.0, 2.0 * PI * (j as f64 + 0.5) / DIAMETER_SAMPLES as f64))
        .collect();
    let mut pts = Vec::with_capacity(lambdas.len());
    for l in lambdas {
        pts.push(table.center_point(&triangle_at(pair, l)?, k)?);
    }
    let mut d: f64 = 0.0;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            d = d.max((pts[i] - pts[j]).norm());
        }
    }
    Ok(d)
}

pub fn find_stationary_caustic(a: f64, b: f64, k: u32) -> Result<StationaryCaustic> {
    find_stationary_caustic_in(CenterTable::builtin(), a, b, k)
}

/// Grid search then golden-section on `t` over the closure family `(t a, (1 - t) b)`.
pub fn find_stationary_caustic_in(table: &CenterTable, a: f64, b: f64, k: u32) -> Result<StationaryCaustic> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(format!("outer semi-axes must be positive, got ({a}, {b})")));
    }
    table.get(k).ok_or(Error::MissingCenter(k))?;
    let diam = |t: f64| -> f64 {
        ConcentricPair::new(a, b, t * a, (1.0 - t) * b, Family::Custom)
            .and_then(|pair| locus_diameter(table, &pair, k))
            .unwrap_or(f64::INFINITY)
    };
    const GRID: usize = 97;
    let ts: Vec<f64> = (0..GRID).map(|i| 0.02 + 0.96 * i as f64 / (GRID - 1) as f64).collect();
    let ds: Vec<f64> = ts.iter().map(|&t| diam(t)).collect();
    let best = (0..GRID).min_by(|&i, &j| ds[i].total_cmp(&ds[j])).unwrap_or(0);
    let (mut lo, mut hi) = (ts[best.saturating_sub(1)], ts[(best + 1).min(GRID - 1)]);

    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut m1 = hi - ratio * (hi - lo);
    let mut m2 = lo + ratio * (hi - lo);
    let (mut d1, mut d2) = (diam(m1), diam(m2));
    while hi - lo > 1e-12 {
        if d1 < d2 {
            hi = m2;
            m2 = m1;
            d2 = d1;
            m1 = hi - ratio * (hi - lo);
            d1 = diam(m1);
        } else {
            lo = m1;
            m1 = m2;
            d1 = d2;
            m2 = lo + ratio * (hi - lo);
            d2 = diam(m2);
        }
    }
    let mut t = (lo + hi) / 2.0;
    let mut diameter = diam(t);
    if ds[best] < diameter {
        t = ts[best];
        diameter = ds[best];
    }
    if !(diameter <= 1e-7 * a) {
        return Err(Error::NoStationary { k, t, diameter });
    }
    Ok(StationaryCaustic {
        t,
        a_c: t * a,
        b_c: (1.0 - t) * b,
        diameter,
    })
}
