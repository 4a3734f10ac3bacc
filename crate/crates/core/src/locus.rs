//! Center loci over a family: tracing, analytic prediction via `u λ + v/λ + w`,
//! classification, degeneracy and circularity ratios, speed and winding.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};

use crate::centers::{self, CenterTable};
use crate::error::{Error, Result};
use crate::families::{normalize, sweep, unit_lambdas, ConcentricPair, Family, NormalizedPair, TriangleSample};
use crate::geometry::{
    delta, ellipse_from_uvw_with, fit_conic_with, winding_number, ConicFit, ConicKind, PlaneComplex, Tolerances, Uvw,
};

pub const DEFAULT_SAMPLES: usize = 720;
pub const REFINED_SAMPLES: usize = 2880;

#[derive(Debug, Clone, PartialEq)]
pub struct LocusTrace {
    /// Center index; 0 for a custom combination.
    pub k: u32,
    pub pair: ConcentricPair,
    pub samples: Vec<(PlaneComplex, PlaneComplex)>,
    pub n: usize,
    /// Sample indices where the center is undefined (a weight is infinite or
    /// the weights sum to zero); these are left out of `samples`.
    pub skipped: Vec<usize>,
}

impl LocusTrace {
    pub fn points(&self) -> Vec<PlaneComplex> {
        self.samples.iter().map(|s| s.1).collect()
    }
}

/// Trace any point function over `turns` λ-cycles of `n` samples each.
pub fn trace_with<F>(pair: &ConcentricPair, k: u32, n: usize, turns: usize, f: F) -> Result<LocusTrace>
where
    F: Fn(&TriangleSample) -> Result<PlaneComplex>,
{
    trace_with_phase(pair, k, n, turns, 0.0, f)
}

/// As [`trace_with`], with every `λ` rotated by `e^{i phase}`.
pub fn trace_with_phase<F>(pair: &ConcentricPair, k: u32, n: usize, turns: usize, phase: f64, f: F) -> Result<LocusTrace>
where
    F: Fn(&TriangleSample) -> Result<PlaneComplex>,
{
    if n < 64 {
        return Err(Error::Domain(format!("a trace needs at least 64 samples, got {n}")));
    }
    let rot = PlaneComplex::from_polar(1.0, phase);
    let lambdas: Vec<_> = unit_lambdas(n, turns.max(1)).into_iter().map(|l| l * rot).collect();
    let tris = sweep(pair, &lambdas)?;
    let mut samples = Vec::with_capacity(tris.len());
    let mut skipped = Vec::new();
    for (j, t) in tris.iter().enumerate() {
        match f(t) {
            Ok(x) => samples.push((t.lambda, x)),
            Err(Error::Evaluation(_)) => skipped.push(j),
            Err(e) => return Err(e),
        }
    }
    if skipped.len() * 10 > tris.len() {
        return Err(Error::Evaluation(k));
    }
    Ok(LocusTrace {
        k,
        pair: *pair,
        samples,
        n,
        skipped,
    })
}

pub fn trace_locus(pair: &ConcentricPair, k: u32, n: usize) -> Result<LocusTrace> {
    trace_locus_in(CenterTable::builtin(), pair, k, n)
}

pub fn trace_locus_in(table: &CenterTable, pair: &ConcentricPair, k: u32, n: usize) -> Result<LocusTrace> {
    table.get(k).ok_or(Error::MissingCenter(k))?;
    trace_with(pair, k, n, 1, |t| table.center_point(t, k))
}

/// Locus of `α X2 + β X3`.
pub fn trace_combo(pair: &ConcentricPair, alpha: f64, beta: f64, n: usize) -> Result<LocusTrace> {
    trace_with(pair, 0, n, 1, |t| {
        Ok(centers::center_point(t, 2)? * alpha + centers::center_point(t, 3)? * beta)
    })
}

/// Which semi-axes `(p, q)` stand for in the `u, v, w` expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PqReading {
    /// `p, q` from the outer ellipse; the result is in the original frame.
    Outer,
    /// `p, q` from the normalized caustic; the result is in the normalized frame.
    NormalizedCaustic,
}

impl PqReading {
    pub fn as_str(self) -> &'static str {
        match self {
            PqReading::Outer => "outer",
            PqReading::NormalizedCaustic => "normalized-caustic",
        }
    }
}

/// The reading that matches traced loci.
pub const PQ_READING: PqReading = PqReading::Outer;

pub fn uvw_from_combo(np: &NormalizedPair, alpha: PlaneComplex, beta: PlaneComplex) -> Result<Uvw> {
    uvw_from_combo_with(np, alpha, beta, PQ_READING)
}

pub fn uvw_from_combo_with(
    np: &NormalizedPair,
    alpha: PlaneComplex,
    beta: PlaneComplex,
    reading: PqReading,
) -> Result<Uvw> {
    let (p, q) = match reading {
        PqReading::Outer => ((np.outer_a + np.outer_b) / 2.0, (np.outer_a - np.outer_b) / 2.0),
        PqReading::NormalizedCaustic => (np.p, np.q),
    };
    let den = (p - q) * (p + q);
    if den.abs() <= 1e-14 * (p * p + q * q) || !den.is_finite() {
        return Err(Error::Singular { p, q });
    }
    let (f, g) = (np.f, np.g);
    let (fb, gb) = (f.conj(), g.conj());
    let (al, be) = (alpha, beta);
    let u = fb * gb * (al * p * p - (al + be * 3.0) * q * q) * p / (3.0 * den) + be * p * p * q / den;
    let v = be * p * q * (q - f * g * p) / (-den) + al * f * g * q / 3.0;
    let w = ((fb + gb) * q * ((al + be * 3.0) * p * p - al * q * q) + (f + g) * p * (al * p * p - (al + be * 3.0) * q * q))
        / (3.0 * den);
    Ok(Uvw { u, v, w })
}

fn frame(pair: &ConcentricPair) -> Matrix2<f64> {
    Matrix2::new(pair.a, 0.0, 0.0, pair.b)
}

fn unframe(pair: &ConcentricPair) -> Matrix2<f64> {
    Matrix2::new(1.0 / pair.a, 0.0, 0.0, 1.0 / pair.b)
}

/// Predicted locus of `α X2 + β X3 + γ X_fixed` in both frames.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    /// Parametrization in the original frame.
    pub uvw: Uvw,
    pub original: ConicFit,
    pub normalized: ConicFit,
}

pub fn predict(
    pair: &ConcentricPair,
    alpha: PlaneComplex,
    beta: PlaneComplex,
    gamma: PlaneComplex,
    fixed_point: PlaneComplex,
    reading: PqReading,
    tol: &Tolerances,
) -> Result<Prediction> {
    let np = normalize(pair);
    let raw = uvw_from_combo_with(&np, alpha, beta, reading)?;
    let shift = gamma * fixed_point;
    let uvw = match reading {
        PqReading::Outer => Uvw {
            w: raw.w + shift,
            ..raw
        },
        PqReading::NormalizedCaustic => {
            let scale = |z: PlaneComplex| PlaneComplex::new(pair.a * z.re, pair.b * z.im);
            // `x ↦ (a x, b y)` is real-linear, so it acts on `u λ + v/λ` through
            // the matrix form of `(u, v)`.
            let m = frame(pair) * crate::geometry::matrix_from_uv(raw.u, raw.v);
            let (u, v) = crate::geometry::uv_from_matrix(&m);
            Uvw {
                u,
                v,
                w: scale(raw.w) + shift,
            }
        }
    };
    let original = ellipse_from_uvw_with(&uvw, tol);
    let normalized = original.affine_image(&unframe(pair), Vector2::zeros(), tol);
    Ok(Prediction {
        uvw,
        original,
        normalized,
    })
}

/// Predicted locus in the original frame.
pub fn predict_locus(
    pair: &ConcentricPair,
    alpha: PlaneComplex,
    beta: PlaneComplex,
    gamma: PlaneComplex,
    fixed_point: PlaneComplex,
) -> Result<ConicFit> {
    Ok(predict(pair, alpha, beta, gamma, fixed_point, PQ_READING, &Tolerances::default())?.original)
}

/// Worst pointwise gap between the two readings' predictions and traced
/// `α X2 + β X3` for a few `(α, β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PqResolution {
    pub outer_gap: f64,
    pub caustic_gap: f64,
    pub chosen: PqReading,
}

pub fn resolve_pq_reading(pair: &ConcentricPair) -> Result<PqResolution> {
    let tol = Tolerances::default();
    let mut gaps = [0.0f64; 2];
    for (al, be) in [(1.0, 0.0), (0.0, 1.0), (0.7, -1.3)] {
        let trace = trace_combo(pair, al, be, 64)?;
        for (slot, reading) in [PqReading::Outer, PqReading::NormalizedCaustic].into_iter().enumerate() {
            let pred = predict(pair, al.into(), be.into(), 0.0.into(), 0.0.into(), reading, &tol)?;
            for &(l, x) in &trace.samples {
                gaps[slot] = gaps[slot].max((pred.uvw.eval(l) - x).norm());
            }
        }
    }
    let chosen = if gaps[0] <= gaps[1] {
        PqReading::Outer
    } else {
        PqReading::NormalizedCaustic
    };
    Ok(PqResolution {
        outer_gap: gaps[0],
        caustic_gap: gaps[1],
        chosen,
    })
}

/// `X_k = α X2 + β X3 + γ X_fixed` over a family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Combo {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub fixed: Option<u32>,
}

/// The combination for `X_k` over `family`, when one is known. `rho` is the
/// family's `r/R` (only used by the confocal and incircle families).
pub fn family_combo(family: Family, k: u32, rho: f64) -> Option<Combo> {
    if let Some(&(_, alpha, beta)) = centers::x2x3_fixed_combos().iter().find(|c| c.0 == k) {
        return Some(Combo {
            alpha,
            beta,
            gamma: 0.0,
            fixed: None,
        });
    }
    let (c1, c2, c3) = match family {
        Family::Confocal | Family::Incircle => centers::combo_coefficients(k, rho).ok()?,
        _ => return None,
    };
    Some(match family {
        Family::Confocal => {
            let (p, q, r) = centers::incenter_in_x2_x3_x9(rho);
            Combo {
                alpha: c2 + c1 * p,
                beta: c3 + c1 * q,
                gamma: c1 * r,
                fixed: Some(9),
            }
        }
        _ => Combo {
            alpha: c2,
            beta: c3,
            gamma: c1,
            fixed: Some(1),
        },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocusVerdict {
    pub k: u32,
    pub kind: ConicKind,
    pub fit: ConicFit,
    pub combo: Option<Combo>,
    pub predicted: Option<Prediction>,
    /// Worst pointwise distance between trace and prediction.
    pub max_prediction_gap: Option<f64>,
    /// Winding about the fitted center over three λ-cycles.
    pub winding: Option<i64>,
    pub min_speed: f64,
}

pub fn classify_locus(pair: &ConcentricPair, k: u32, n: usize) -> Result<LocusVerdict> {
    classify_locus_with(CenterTable::builtin(), pair, k, n, &Tolerances::default())
}

pub fn classify_locus_with(
    table: &CenterTable,
    pair: &ConcentricPair,
    k: u32,
    n: usize,
    tol: &Tolerances,
) -> Result<LocusVerdict> {
    let trace = trace_locus_in(table, pair, k, n)?;
    let first = sweep(pair, &[PlaneComplex::new(1.0, 0.0)])?[0];
    let rho = centers::inradius_circumradius(&first)?.2;
    let combo = family_combo(pair.family, k, rho);
    let mut predicted = None;
    let mut gap = None;
    if let Some(c) = combo {
        let fixed_point = match c.fixed {
            Some(j) => table.center_point(&first, j)?,
            None => PlaneComplex::new(0.0, 0.0),
        };
        let pred = predict(pair, c.alpha.into(), c.beta.into(), c.gamma.into(), fixed_point, PQ_READING, tol)?;
        gap = Some(
            trace
                .samples
                .iter()
                .map(|&(l, x)| (pred.uvw.eval(l) - x).norm())
                .fold(0.0, f64::max),
        );
        predicted = Some(pred);
    }
    let mut verdict = verdict_from_trace(&trace, combo, predicted, gap, tol)?;
    if !trace.skipped.is_empty() && verdict.min_speed > 0.0 {
        // Undefined samples tend to sit where the speed is extreme; retrace
        // half a step over so the minimum can be refined.
        let shifted = trace_with_phase(pair, k, n, 1, PI / n as f64, |t| table.center_point(t, k))?;
        if shifted.skipped.is_empty() {
            verdict.min_speed = min_speed_of_samples(&shifted.points());
        }
    }
    Ok(verdict)
}

fn verdict_from_trace(
    trace: &LocusTrace,
    combo: Option<Combo>,
    predicted: Option<Prediction>,
    max_prediction_gap: Option<f64>,
    tol: &Tolerances,
) -> Result<LocusVerdict> {
    let pts = trace.points();
    let fit = fit_conic_with(&pts, tol)?;
    let kind = fit.kind;
    let winding = if matches!(kind, ConicKind::Ellipse | ConicKind::Circle) {
        let three: Vec<_> = pts.iter().cycle().take(3 * pts.len()).copied().collect();
        winding_number(&three, fit.center).ok()
    } else {
        None
    };
    let min_speed = if matches!(kind, ConicKind::Point | ConicKind::Segment) {
        0.0
    } else if trace.skipped.is_empty() {
        min_speed_of_samples(&pts)
    } else {
        min_speed_with_gaps(trace)
    };
    Ok(LocusVerdict {
        k: trace.k,
        kind,
        fit,
        combo,
        predicted,
        max_prediction_gap,
        winding,
        min_speed,
    })
}

/// Minimum of `|dX/dt|` over a closed curve sampled at uniform `t`.
///
/// Chords are rescaled by `h / (2 sin(h/2))`, and the minimum of the squared
/// speeds is refined with a parabola through its neighbours.
pub fn min_speed_of_samples(points: &[PlaneComplex]) -> f64 {
    let n = points.len();
    if n < 3 {
        return 0.0;
    }
    let h = 2.0 * PI / n as f64;
    let chord = 2.0 * (h / 2.0).sin();
    let sq: Vec<f64> = (0..n)
        .map(|i| ((points[(i + 1) % n] - points[i]).norm() / chord).powi(2))
        .collect();
    let (i, &m) = sq
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .unwrap_or((0, &0.0));
    let (l, r) = (sq[(i + n - 1) % n], sq[(i + 1) % n]);
    let curv = l - 2.0 * m + r;
    let refined = if curv > 0.0 {
        m - (r - l).powi(2) / (8.0 * curv)
    } else {
        m
    };
    refined.max(0.0).sqrt()
}

/// Minimum chord speed over neighbouring samples that are both present.
fn min_speed_with_gaps(trace: &LocusTrace) -> f64 {
    let total = trace.samples.len() + trace.skipped.len();
    let h = 2.0 * PI / trace.n as f64;
    let chord = 2.0 * (h / 2.0).sin();
    let mut slots: Vec<Option<PlaneComplex>> = vec![None; total];
    let mut it = trace.samples.iter();
    for (j, slot) in slots.iter_mut().enumerate() {
        if trace.skipped.binary_search(&j).is_err() {
            *slot = it.next().map(|s| s.1);
        }
    }
    (0..total)
        .filter_map(|j| match (slots[j], slots[(j + 1) % total]) {
            (Some(x), Some(y)) => Some((y - x).norm() / chord),
            _ => None,
        })
        .fold(f64::INFINITY, f64::min)
}

/// Least-squares `(u, v, w)` with `X(λ) ≈ uλ + v/λ + w` over the traced
/// samples, and the worst pointwise residual of that fit.
pub fn uvw_of_trace(trace: &LocusTrace) -> Result<(Uvw, f64)> {
    let mut ata = Matrix3::<PlaneComplex>::zeros();
    let mut atb = Vector3::<PlaneComplex>::zeros();
    for &(l, x) in &trace.samples {
        let row = Vector3::new(l, l.inv(), PlaneComplex::new(1.0, 0.0));
        let conj = row.map(|z| z.conj());
        ata += conj * row.transpose();
        atb += conj * x;
    }
    let sol = ata
        .try_inverse()
        .ok_or_else(|| Error::Geometry("trace too short for a u,v,w fit".into()))?
        * atb;
    let uvw = Uvw {
        u: sol[0],
        v: sol[1],
        w: sol[2],
    };
    let worst = trace
        .samples
        .iter()
        .map(|&(l, x)| (uvw.eval(l) - x).norm())
        .fold(0.0, f64::max);
    Ok((uvw, worst))
}

/// `u e^{it} + v e^{-it} + w` at `n` uniform `t`.
pub fn sample_uvw(p: &Uvw, n: usize) -> Vec<PlaneComplex> {
    unit_lambdas(n, 1).into_iter().map(|l| p.eval(l)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonicityReport {
    pub min_speed: f64,
    /// `(|u| - |v|)²`, the lower bound for the squared speed.
    pub analytic_min: f64,
    pub monotonic: bool,
}

impl MonotonicityReport {
    /// Relative gap between the numeric squared minimum and `analytic_min`.
    pub fn relative_gap(&self) -> f64 {
        let s2 = self.min_speed * self.min_speed;
        if self.analytic_min == 0.0 {
            s2
        } else {
            (s2 - self.analytic_min).abs() / self.analytic_min
        }
    }
}

pub fn monotonicity_report(points: &[PlaneComplex], p: &Uvw) -> MonotonicityReport {
    let (nu, nv) = (p.u.norm(), p.v.norm());
    let analytic_min = (nu - nv).powi(2);
    if analytic_min <= 1e-12 * (nu + nv).powi(2) {
        return MonotonicityReport {
            min_speed: 0.0,
            analytic_min,
            monotonic: false,
        };
    }
    let min_speed = min_speed_of_samples(points);
    MonotonicityReport {
        min_speed,
        analytic_min,
        monotonic: min_speed > 0.0,
    }
}

/// Winding about the fitted center over three λ-cycles.
pub fn winding_of_locus(pair: &ConcentricPair, k: u32) -> Result<i64> {
    winding_over(pair, k, 3)
}

/// Winding about the fitted center over `turns` λ-cycles.
pub fn winding_over(pair: &ConcentricPair, k: u32, turns: usize) -> Result<i64> {
    let table = CenterTable::builtin();
    table.get(k).ok_or(Error::MissingCenter(k))?;
    let trace = trace_with(pair, k, DEFAULT_SAMPLES, turns, |t| table.center_point(t, k))?;
    let pts = trace.points();
    let fit = fit_conic_with(&pts[..pts.len() / turns.max(1)], &Tolerances::default())?;
    if !matches!(fit.kind, ConicKind::Ellipse | ConicKind::Circle) {
        return Err(Error::UndefinedWinding);
    }
    winding_number(&pts, fit.center).map_err(|_| Error::UndefinedWinding)
}

/// The two `α/β` at which `α X2 + β X3` collapses to a segment (confocal).
pub fn degenerate_ratios(a: f64, b: f64) -> Result<(f64, f64)> {
    if !(a > b && b > 0.0) {
        return Err(Error::Domain(format!("need a > b > 0, got ({a}, {b})")));
    }
    let d = delta(a, b)?;
    Ok(((2.0 * a * a - b * b + d) / (2.0 * b * b), (2.0 * b * b - a * a + d) / (2.0 * a * a)))
}

/// The same ratios written in terms of `ρ = r/R`.
pub fn degenerate_ratios_rho(rho: f64) -> Result<(f64, f64)> {
    if !(rho > 0.0 && rho <= 0.5) {
        return Err(Error::Domain(format!("rho must lie in (0, 1/2], got {rho}")));
    }
    let s = (1.0 - 2.0 * rho).sqrt();
    Ok((1.5 * (1.0 + s) / (rho + 1.0 - s), 1.5 * (1.0 - s) / (rho + 1.0 + s)))
}

/// `γ` with `(1 - γ) X2 + γ X3 ∝ r X2 + X3`.
pub fn gamma_of_ratio(r: f64) -> f64 {
    1.0 / (1.0 + r)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircularRatios {
    /// `(δ - 3ab ± 2(a² + b²)) / (2ab)`.
    pub printed: (f64, f64),
    /// Ratios found by scanning traced loci, ascending.
    pub scanned: Vec<f64>,
    /// `δ/(ab) - 3`.
    pub printed_sum: f64,
    pub scanned_sum: Option<f64>,
}

impl CircularRatios {
    /// The claimed sum of the two circular ratios.
    pub const CLAIMED_SUM: f64 = -3.0;
}

pub fn circular_ratios(a: f64, b: f64) -> Result<CircularRatios> {
    if !(a > b && b > 0.0) {
        return Err(Error::Domain(format!("need a > b > 0, got ({a}, {b})")));
    }
    let d = delta(a, b)?;
    let s = 2.0 * (a * a + b * b);
    let printed = ((d - 3.0 * a * b + s) / (2.0 * a * b), (d - 3.0 * a * b - s) / (2.0 * a * b));
    let pair = crate::families::family_pair(Family::Confocal, a, b)?;
    let scanned = scan_circular_ratios(&pair, -5.0, 5.0, 2001)?;
    let scanned_sum = (scanned.len() == 2).then(|| scanned[0] + scanned[1]);
    Ok(CircularRatios {
        printed,
        scanned,
        printed_sum: d / (a * b) - 3.0,
        scanned_sum,
    })
}

/// Ratios `r` in `[lo, hi]` where the locus of `r X2 + X3` is a circle.
///
/// The loci of `X2` and `X3` are traced once and their `λ` and `1/λ` Fourier
/// coefficients extracted; a circle needs one of the two combined coefficients
/// to vanish. Sign changes on the grid are refined by bisection and each root
/// is confirmed with a conic fit.
pub fn scan_circular_ratios(pair: &ConcentricPair, lo: f64, hi: f64, grid: usize) -> Result<Vec<f64>> {
    let n = REFINED_SAMPLES;
    let t2 = trace_combo(pair, 1.0, 0.0, n)?;
    let t3 = trace_combo(pair, 0.0, 1.0, n)?;
    let coeff = |t: &LocusTrace| -> (PlaneComplex, PlaneComplex) {
        let mut u = PlaneComplex::new(0.0, 0.0);
        let mut v = PlaneComplex::new(0.0, 0.0);
        for &(l, x) in &t.samples {
            u += x * l.conj();
            v += x * l;
        }
        (u / n as f64, v / n as f64)
    };
    let (u2, v2) = coeff(&t2);
    let (u3, v3) = coeff(&t3);
    // Project onto the direction each coefficient takes so the sign is meaningful.
    let signed = |c2: PlaneComplex, c3: PlaneComplex| {
        let dir = if c2.norm() > c3.norm() { c2 } else { c3 };
        let dir = dir / dir.norm();
        move |r: f64| {
            let c = c2 * r + c3;
            (c * dir.conj()).re
        }
    };
    let fu = signed(u2, u3);
    let fv = signed(v2, v3);
    let step = (hi - lo) / (grid - 1) as f64;
    let mut roots = Vec::new();
    for f in [&fu as &dyn Fn(f64) -> f64, &fv] {
        for i in 0..grid - 1 {
            let (mut x0, mut x1) = (lo + step * i as f64, lo + step * (i + 1) as f64);
            let (mut f0, f1) = (f(x0), f(x1));
            if f0 == 0.0 {
                roots.push(x0);
                continue;
            }
            if f0 * f1 >= 0.0 {
                continue;
            }
            while x1 - x0 > 1e-14 * x0.abs().max(1.0) {
                let m = 0.5 * (x0 + x1);
                let fm = f(m);
                if fm == 0.0 {
                    x0 = m;
                    x1 = m;
                } else if (fm < 0.0) == (f0 < 0.0) {
                    x0 = m;
                    f0 = fm;
                } else {
                    x1 = m;
                }
            }
            roots.push(0.5 * (x0 + x1));
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|x, y| (*x - *y).abs() < 1e-9);
    let tol = Tolerances::default();
    let mut confirmed = Vec::new();
    for r in roots {
        let pts: Vec<_> = t2
            .samples
            .iter()
            .zip(&t3.samples)
            .map(|(x2, x3)| x2.1 * r + x3.1)
            .collect();
        if fit_conic_with(&pts, &tol)?.kind == ConicKind::Circle {
            confirmed.push(r);
        }
    }
    Ok(confirmed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::family_pair;

    fn c(re: f64, im: f64) -> PlaneComplex {
        PlaneComplex::new(re, im)
    }

    #[test]
    fn stationary_centers() {
        for (fam, k) in [(Family::Confocal, 9), (Family::Incircle, 1), (Family::Homothetic, 2)] {
            let pair = family_pair(fam, 1.5, 1.0).unwrap();
            let t = trace_locus(&pair, k, 64).unwrap();
            assert!(t.points().iter().all(|z| z.norm() < 1e-9), "{fam} X{k}");
        }
        let pair = family_pair(Family::Confocal, 1.5, 1.0).unwrap();
        assert!(trace_locus(&pair, 2, 10).is_err());
    }

    #[test]
    fn outer_reading_matches_traces() {
        for fam in [Family::Confocal, Family::Incircle, Family::Homothetic, Family::Dual, Family::Excentral] {
            let pair = family_pair(fam, 1.5, 1.0).unwrap();
            let res = resolve_pq_reading(&pair).unwrap();
            assert_eq!(res.chosen, PqReading::Outer, "{fam}");
            assert!(res.outer_gap < 1e-8, "{fam}: {:e}", res.outer_gap);
        }
        let res = resolve_pq_reading(&family_pair(Family::Confocal, 1.5, 1.0).unwrap()).unwrap();
        assert!(res.caustic_gap > 1e-3);
    }

    #[test]
    fn concentric_uvw_real() {
        let np = normalize(&family_pair(Family::Confocal, 1.5, 1.0).unwrap());
        for (al, be) in [(1.0, 0.0), (0.3, 2.0), (-1.2, 0.4)] {
            let p = uvw_from_combo(&np, c(al, 0.0), c(be, 0.0)).unwrap();
            assert!(p.u.im.abs() < 1e-12 && p.v.im.abs() < 1e-12 && p.w.norm() < 1e-12);
        }
    }

    #[test]
    fn x1_and_x2_predictions() {
        let pair = family_pair(Family::Confocal, 1.5, 1.0).unwrap();
        let v1 = classify_locus(&pair, 1, DEFAULT_SAMPLES).unwrap();
        let p1 = v1.predicted.unwrap().original;
        assert!((p1.semi_major - 0.635041).abs() < 1e-6 && (p1.semi_minor - 0.297438).abs() < 1e-6);
        assert!(v1.max_prediction_gap.unwrap() < 1e-8);
        let p2 = predict_locus(&pair, c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!((p2.semi_major - 0.262050).abs() < 1e-6 && (p2.semi_minor - 0.174700).abs() < 1e-6);
    }

    #[test]
    fn caustic_and_billiard_copies() {
        let pair = family_pair(Family::Confocal, 1.5, 1.0).unwrap();
        let v = classify_locus(&pair, 11, DEFAULT_SAMPLES).unwrap();
        assert!((v.fit.semi_major - pair.a_c).abs() < 1e-7 && (v.fit.semi_minor - pair.b_c).abs() < 1e-7);
        let v = classify_locus(&pair, 88, DEFAULT_SAMPLES).unwrap();
        assert!((v.fit.semi_major - 1.5).abs() < 1e-7 && (v.fit.semi_minor - 1.0).abs() < 1e-7);
        assert_eq!(v.winding.map(i64::abs), Some(3));
    }

    #[test]
    fn circumcircle_x99_circle() {
        let pair = family_pair(Family::Circumcircle, 1.5, 1.0).unwrap();
        assert_eq!(classify_locus(&pair, 99, DEFAULT_SAMPLES).unwrap().kind, ConicKind::Circle);
    }

    #[test]
    fn degenerate_ratio_forms_agree() {
        let (r1, r2) = degenerate_ratios(1.5, 1.0).unwrap();
        assert!((r1 - 2.726281).abs() < 5e-7 && (r2 - 0.378347).abs() < 5e-7);
        assert!((gamma_of_ratio(r1) - 0.268).abs() < 1e-3 && (gamma_of_ratio(r2) - 0.726).abs() < 1e-3);
        let pair = family_pair(Family::Confocal, 1.5, 1.0).unwrap();
        let t = sweep(&pair, &[c(1.0, 0.0)]).unwrap()[0];
        let rho = centers::inradius_circumradius(&t).unwrap().2;
        let (s1, s2) = degenerate_ratios_rho(rho).unwrap();
        assert!((s1 - r1).abs() < 1e-10 && (s2 - r2).abs() < 1e-10);
        let (h1, h2) = degenerate_ratios_rho(0.5).unwrap();
        assert!((h1 - 1.0).abs() < 1e-15 && (h2 - 1.0).abs() < 1e-15);
        assert!(degenerate_ratios_rho(0.6).is_err());
        for r in [r1, r2] {
            let fit = fit_conic_with(&trace_combo(&pair, r, 1.0, REFINED_SAMPLES).unwrap().points(), &Tolerances::default()).unwrap();
            assert_eq!(fit.kind, ConicKind::Segment);
        }
    }

    #[test]
    fn circular_scan() {
        let cr = circular_ratios(1.5, 1.0).unwrap();
        assert!((cr.printed.0 - 1.317521).abs() < 5e-7);
        assert_eq!(cr.scanned.len(), 2);
        assert!((cr.scanned[1] - 1.317521).abs() < 1e-6);
        assert!((cr.scanned[0] + 4.317521).abs() < 1e-6);
        assert!((cr.scanned_sum.unwrap() - CircularRatios::CLAIMED_SUM).abs() < 1e-6);
        assert!((gamma_of_ratio(cr.scanned[1]) - 0.431).abs() < 1e-3);
    }

    #[test]
    fn speeds() {
        let circle = Uvw { u: c(2.0, 0.0), v: c(0.0, 0.0), w: c(0.0, 0.0) };
        let r = monotonicity_report(&sample_uvw(&circle, 720), &circle);
        assert!((r.min_speed - 2.0).abs() < 1e-12 && r.monotonic);
        let ell = Uvw { u: c(2.0, 0.0), v: c(0.3, 0.91_f64.sqrt()), w: c(5.0, -1.0) };
        let r = monotonicity_report(&sample_uvw(&ell, 720), &ell);
        assert!((r.min_speed - 1.0).abs() < 1e-6 && r.relative_gap() < 1e-4);
        let seg = Uvw { u: c(1.0, 0.0), v: c(0.0, 1.0), w: c(0.0, 0.0) };
        let r = monotonicity_report(&sample_uvw(&seg, 720), &seg);
        assert_eq!(r.min_speed, 0.0);
        assert!(!r.monotonic);
    }

    #[test]
    fn uvw_recovered_from_trace() {
        let pair = family_pair(Family::Confocal, 1.5, 1.0).unwrap();
        let v = classify_locus(&pair, 1, DEFAULT_SAMPLES).unwrap();
        let (fit, worst) = uvw_of_trace(&trace_locus(&pair, 1, DEFAULT_SAMPLES).unwrap()).unwrap();
        let p = v.predicted.unwrap().uvw;
        assert!(worst < 1e-9);
        assert!((fit.u - p.u).norm() < 1e-9 && (fit.v - p.v).norm() < 1e-9 && (fit.w - p.w).norm() < 1e-9);
    }

    #[test]
    fn windings() {
        let pair = family_pair(Family::Confocal, 1.5, 1.0).unwrap();
        assert_eq!(winding_of_locus(&pair, 1).unwrap().abs(), 3);
        assert_eq!(winding_over(&pair, 1, 1).unwrap().abs(), 1);
        let np = normalize(&pair);
        for (k, al, be) in [(2u32, 1.0, 0.0), (4, 3.0, -2.0)] {
            let p = uvw_from_combo(&np, c(al, 0.0), c(be, 0.0)).unwrap();
            let sign = crate::geometry::winding_sign_from_uvw(&p) as i64;
            assert_eq!(winding_over(&pair, k, 1).unwrap(), sign, "X{k}");
        }
        assert_eq!(winding_of_locus(&pair, 9), Err(Error::UndefinedWinding));
    }
}
