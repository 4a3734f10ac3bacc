//! Complex-plane numerics: cubic roots, conic fitting and classification,
//! winding numbers and the `u λ + v/λ + w` ellipse map.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, Matrix2, SymmetricEigen, Vector2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// A point of the real plane viewed as a complex number.
pub type PlaneComplex = Complex64;

/// Classification tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative axis equality for circles.
    pub circle_tol: f64,
    /// Absolute collapse threshold for points and segments.
    pub degen_tol: f64,
    /// Maximum RMS algebraic residual accepted for a conic.
    pub fit_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            circle_tol: 1e-6,
            degen_tol: 1e-7,
            fit_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConicKind {
    Ellipse,
    Circle,
    Segment,
    Point,
    Other,
}

impl ConicKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ConicKind::Ellipse => "ellipse",
            ConicKind::Circle => "circle",
            ConicKind::Segment => "segment",
            ConicKind::Point => "point",
            ConicKind::Other => "other",
        }
    }

    /// Ellipse, circle or point: the closed conics a center locus may be.
    pub fn is_elliptic(self) -> bool {
        matches!(self, ConicKind::Ellipse | ConicKind::Circle | ConicKind::Point)
    }
}

impl std::fmt::Display for ConicKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A fitted or predicted conic `Ax² + Bxy + Cy² + Dx + Ey + F = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConicFit {
    /// Unit-norm coefficient vector `(A, B, C, D, E, F)`.
    pub coeffs: [f64; 6],
    pub kind: ConicKind,
    pub center: PlaneComplex,
    pub semi_major: f64,
    pub semi_minor: f64,
    /// Direction of the major axis in `(-π/2, π/2]`; zero for circles.
    pub angle: f64,
    pub residual_rms: f64,
}

impl ConicFit {
    /// Discriminant `B² - 4AC`.
    pub fn discriminant(&self) -> f64 {
        let [a, b, c, ..] = self.coeffs;
        b * b - 4.0 * a * c
    }

    /// Real 2x2 matrix sending the unit circle onto the conic (about its center).
    pub fn shape_matrix(&self) -> Matrix2<f64> {
        let (s, c) = self.angle.sin_cos();
        Matrix2::new(c, -s, s, c) * Matrix2::new(self.semi_major, 0.0, 0.0, self.semi_minor)
    }

    /// Image of the conic under `x -> m x + t`.
    pub fn affine_image(&self, m: &Matrix2<f64>, t: Vector2<f64>, tol: &Tolerances) -> ConicFit {
        let c = m * Vector2::new(self.center.re, self.center.im) + t;
        let center = PlaneComplex::new(c.x, c.y);
        if self.kind == ConicKind::Other {
            let mut out = self.clone();
            out.coeffs = transform_conic(self.coeffs, m, t);
            out.center = center;
            return out;
        }
        let (u, v) = uv_from_matrix(&(m * self.shape_matrix()));
        let mut out = ellipse_from_uvw_with(&Uvw { u, v, w: center }, tol);
        out.residual_rms = self.residual_rms;
        out
    }
}

/// Coefficients of the image of a conic under `x = m y + t`.
pub fn transform_conic(coeffs: [f64; 6], m: &Matrix2<f64>, t: Vector2<f64>) -> [f64; 6] {
    let [a, b, c, d, e, f] = coeffs;
    let n = m.try_inverse().unwrap_or_else(Matrix2::zeros);
    let q = Matrix2::new(a, b / 2.0, b / 2.0, c);
    let l = Vector2::new(d, e);
    let qx = n.transpose() * q * n;
    let lx = n.transpose() * l - 2.0 * qx * t;
    let fx = t.dot(&(qx * t)) - l.dot(&(n * t)) + f;
    normalize_coeffs([qx[(0, 0)], 2.0 * qx[(0, 1)], qx[(1, 1)], lx.x, lx.y, fx])
}

fn normalize_coeffs(c: [f64; 6]) -> [f64; 6] {
    let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return c;
    }
    let sign = if c[0] + c[2] < 0.0 { -1.0 } else { 1.0 };
    c.map(|x| sign * x / norm)
}

/// The parameters of `F(λ) = u λ + v/λ + w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uvw {
    pub u: PlaneComplex,
    pub v: PlaneComplex,
    pub w: PlaneComplex,
}

impl Uvw {
    pub fn eval(&self, lambda: PlaneComplex) -> PlaneComplex {
        self.u * lambda + self.v / lambda + self.w
    }
}

/// `(u, v)` such that `m (cos t, sin t)ᵀ = u e^{it} + v e^{-it}`.
pub fn uv_from_matrix(m: &Matrix2<f64>) -> (PlaneComplex, PlaneComplex) {
    let u = PlaneComplex::new(m[(0, 0)] + m[(1, 1)], m[(1, 0)] - m[(0, 1)]) / 2.0;
    let v = PlaneComplex::new(m[(0, 0)] - m[(1, 1)], m[(1, 0)] + m[(0, 1)]) / 2.0;
    (u, v)
}

pub fn matrix_from_uv(u: PlaneComplex, v: PlaneComplex) -> Matrix2<f64> {
    Matrix2::new(u.re + v.re, -u.im + v.im, u.im + v.im, u.re - v.re)
}

/// `sqrt(a⁴ - a²b² + b⁴)`.
pub fn delta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!("delta needs positive finite axes, got ({a}, {b})")));
    }
    let (a2, b2) = (a * a, b * b);
    Ok((a2 * a2 - a2 * b2 + b2 * b2).sqrt())
}

/// All three roots of `c3 z³ + c2 z² + c1 z + c0`, with multiplicity.
pub fn solve_cubic(
    c3: PlaneComplex,
    c2: PlaneComplex,
    c1: PlaneComplex,
    c0: PlaneComplex,
) -> Result<[PlaneComplex; 3]> {
    if c3 == PlaneComplex::new(0.0, 0.0) {
        return Err(Error::Degree);
    }
    let b = c2 / c3;
    let c = c1 / c3;
    let d = c0 / c3;
    let shift = b / 3.0;
    let p = c - b * b / 3.0;
    let q = b * b * b * (2.0 / 27.0) - b * c / 3.0 + d;

    let disc = (q / 2.0).powu(2) + (p / 3.0).powu(3);
    let s = disc.sqrt();
    let t1 = -q / 2.0 + s;
    let t2 = -q / 2.0 - s;
    let t = if t1.norm() >= t2.norm() { t1 } else { t2 };

    let mut roots = if t.norm() == 0.0 {
        [-shift; 3]
    } else {
        let u = t.cbrt();
        let v = -p / (3.0 * u);
        let omega = PlaneComplex::from_polar(1.0, 2.0 * PI / 3.0);
        let omega2 = omega.conj();
        [u + v - shift, omega * u + omega2 * v - shift, omega2 * u + omega * v - shift]
    };

    let poly = |z: PlaneComplex| ((c3 * z + c2) * z + c1) * z + c0;
    let deriv = |z: PlaneComplex| (3.0 * c3 * z + 2.0 * c2) * z + c1;
    for z in roots.iter_mut() {
        let dz = deriv(*z);
        if dz.norm() == 0.0 {
            continue;
        }
        let cand = *z - poly(*z) / dz;
        if cand.is_finite() && poly(cand).norm() < poly(*z).norm() {
            *z = cand;
        }
    }
    Ok(roots)
}

pub fn reduce_angle(theta: f64) -> f64 {
    let mut t = theta % PI;
    if t <= -FRAC_PI_2 {
        t += PI;
    } else if t > FRAC_PI_2 {
        t -= PI;
    }
    t
}

/// Shape classification from axes, discriminant and residual.
pub fn classify_conic(fit: &ConicFit, tol: &Tolerances) -> ConicKind {
    let (major, minor) = (fit.semi_major, fit.semi_minor);
    if major <= tol.degen_tol {
        ConicKind::Point
    } else if minor <= tol.degen_tol * major.max(1.0) {
        ConicKind::Segment
    } else if fit.residual_rms > tol.fit_tol || fit.discriminant() >= 0.0 {
        ConicKind::Other
    } else if (major - minor).abs() <= tol.circle_tol * major {
        ConicKind::Circle
    } else {
        ConicKind::Ellipse
    }
}

/// The ellipse traced by `u λ + v/λ + w`, classified with default tolerances.
pub fn ellipse_from_uvw(p: &Uvw) -> ConicFit {
    ellipse_from_uvw_with(p, &Tolerances::default())
}

pub fn ellipse_from_uvw_with(p: &Uvw, tol: &Tolerances) -> ConicFit {
    let (nu, nv) = (p.u.norm(), p.v.norm());
    let semi_major = nu + nv;
    let semi_minor = (nu - nv).abs();
    let m = matrix_from_uv(p.u, p.v);
    let coeffs = if semi_major == 0.0 {
        point_conic(p.w)
    } else {
        let adj = Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]);
        let q = adj.transpose() * adj;
        let det = m.determinant();
        let c = Vector2::new(p.w.re, p.w.im);
        let l = -2.0 * q * c;
        let f = c.dot(&(q * c)) - det * det;
        normalize_coeffs([q[(0, 0)], 2.0 * q[(0, 1)], q[(1, 1)], l.x, l.y, f])
    };
    let mut fit = ConicFit {
        coeffs,
        kind: ConicKind::Other,
        center: p.w,
        semi_major,
        semi_minor,
        angle: 0.0,
        residual_rms: 0.0,
    };
    fit.kind = classify_conic(&fit, tol);
    if fit.kind != ConicKind::Circle && fit.kind != ConicKind::Point && nu > 0.0 && nv > 0.0 {
        fit.angle = reduce_angle((p.u.arg() + p.v.arg()) / 2.0);
    }
    fit
}

fn point_conic(c: PlaneComplex) -> [f64; 6] {
    normalize_coeffs([1.0, 0.0, 1.0, -2.0 * c.re, -2.0 * c.im, c.norm_sqr()])
}

fn line_conic(c: PlaneComplex, normal: Vector2<f64>) -> [f64; 6] {
    let (nx, ny) = (normal.x, normal.y);
    let k = nx * c.re + ny * c.im;
    normalize_coeffs([nx * nx, 2.0 * nx * ny, ny * ny, -2.0 * k * nx, -2.0 * k * ny, k * k])
}

fn conic_value(c: &[f64; 6], x: f64, y: f64) -> f64 {
    c[0] * x * x + c[1] * x * y + c[2] * y * y + c[3] * x + c[4] * y + c[5]
}

/// Least-squares conic through `points` with default tolerances.
pub fn fit_conic(points: &[PlaneComplex]) -> Result<ConicFit> {
    fit_conic_with(points, &Tolerances::default())
}

/// Algebraic least-squares conic fit.
///
/// Points are centered and whitened by their principal axes before the
/// design matrix is built; point and segment sets are recognized from the
/// principal extents before any fitting happens.
pub fn fit_conic_with(points: &[PlaneComplex], tol: &Tolerances) -> Result<ConicFit> {
    let n = points.len();
    if n < 6 {
        return Err(Error::Arity(n));
    }
    let nf = n as f64;
    let mean = points.iter().sum::<PlaneComplex>() / nf;
    let mut cov = Matrix2::zeros();
    for z in points {
        let d = Vector2::new(z.re - mean.re, z.im - mean.im);
        cov += d * d.transpose();
    }
    cov /= nf;
    let eig = SymmetricEigen::new(cov);
    let (i_major, i_minor) = if eig.eigenvalues[0] >= eig.eigenvalues[1] { (0, 1) } else { (1, 0) };
    let e1: Vector2<f64> = eig.eigenvectors.column(i_major).into();
    let e2: Vector2<f64> = eig.eigenvectors.column(i_minor).into();

    let (mut lo1, mut hi1, mut lo2, mut hi2) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for z in points {
        let d = Vector2::new(z.re - mean.re, z.im - mean.im);
        let (p1, p2) = (d.dot(&e1), d.dot(&e2));
        lo1 = lo1.min(p1);
        hi1 = hi1.max(p1);
        lo2 = lo2.min(p2);
        hi2 = hi2.max(p2);
    }
    let half1 = (hi1 - lo1) / 2.0;
    let half2 = (hi2 - lo2) / 2.0;

    if half1 <= tol.degen_tol || half2 <= tol.degen_tol * half1.max(1.0) {
        let mid = Vector2::new(mean.re, mean.im) + e1 * (hi1 + lo1) / 2.0 + e2 * (hi2 + lo2) / 2.0;
        let center = PlaneComplex::new(mid.x, mid.y);
        let coeffs = if half1 <= tol.degen_tol { point_conic(center) } else { line_conic(center, e2) };
        let rms = (points.iter().map(|z| conic_value(&coeffs, z.re, z.im).powi(2)).sum::<f64>() / nf).sqrt();
        let mut fit = ConicFit {
            coeffs,
            kind: ConicKind::Other,
            center,
            semi_major: half1,
            semi_minor: half2,
            angle: if half1 <= tol.degen_tol { 0.0 } else { reduce_angle(e1.y.atan2(e1.x)) },
            residual_rms: rms,
        };
        fit.kind = classify_conic(&fit, tol);
        return Ok(fit);
    }

    let s1 = eig.eigenvalues[i_major].sqrt();
    let s2 = eig.eigenvalues[i_minor].sqrt();
    // whitened coordinates: w = diag(1/s) [e1 e2]ᵀ (z - mean)
    let mut design = DMatrix::zeros(n, 6);
    for (i, z) in points.iter().enumerate() {
        let d = Vector2::new(z.re - mean.re, z.im - mean.im);
        let (x, y) = (d.dot(&e1) / s1, d.dot(&e2) / s2);
        for (j, val) in [x * x, x * y, y * y, x, y, 1.0].into_iter().enumerate() {
            design[(i, j)] = val;
        }
    }
    let svd = design.clone().svd(false, true);
    let v_t = svd.v_t.as_ref().ok_or_else(|| Error::Geometry("SVD failed".into()))?;
    let imin = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(5);
    let co: [f64; 6] = std::array::from_fn(|j| v_t[(imin, j)]);
    let resid = &design * nalgebra::DVector::from_row_slice(&co);
    let residual_rms = (resid.norm_squared() / nf).sqrt();

    let basis = Matrix2::from_columns(&[e1 * s1, e2 * s2]);
    let mean_v = Vector2::new(mean.re, mean.im);
    let coeffs = transform_conic(co, &basis, mean_v);

    let q = Matrix2::new(co[0], co[1] / 2.0, co[1] / 2.0, co[2]);
    let l = Vector2::new(co[3], co[4]);
    let other = |coeffs| ConicFit {
        coeffs,
        kind: ConicKind::Other,
        center: mean,
        semi_major: half1,
        semi_minor: half2,
        angle: reduce_angle(e1.y.atan2(e1.x)),
        residual_rms,
    };
    if co[1] * co[1] - 4.0 * co[0] * co[2] >= 0.0 || residual_rms > tol.fit_tol {
        return Ok(other(coeffs));
    }
    let Some(q_inv) = q.try_inverse() else {
        return Ok(other(coeffs));
    };
    let cw = -0.5 * q_inv * l;
    let f_c = co[5] + 0.5 * l.dot(&cw);
    if f_c == 0.0 {
        return Ok(other(coeffs));
    }
    let qn = q / (-f_c);
    let qe = SymmetricEigen::new(qn);
    if qe.eigenvalues.iter().any(|&x| x <= 0.0) {
        return Ok(other(coeffs));
    }
    let ew = qe.eigenvectors * Matrix2::from_diagonal(&qe.eigenvalues.map(|x| 1.0 / x.sqrt()));
    let shape = basis * ew;
    let c = basis * cw + mean_v;
    let (u, v) = uv_from_matrix(&shape);
    let mut fit = ellipse_from_uvw_with(&Uvw { u, v, w: PlaneComplex::new(c.x, c.y) }, tol);
    fit.coeffs = coeffs;
    fit.residual_rms = residual_rms;
    fit.kind = classify_conic(&fit, tol);
    if fit.kind == ConicKind::Circle {
        fit.angle = 0.0;
    }
    Ok(fit)
}

/// Turning number of a closed path about `origin` from summed argument increments.
///
/// The closing segment from the last point back to the first is included, so
/// the path may or may not repeat its first point.
pub fn winding_number(closed_path: &[PlaneComplex], origin: PlaneComplex) -> Result<i64> {
    if closed_path.len() < 3 {
        return Err(Error::Geometry("a closed path needs at least 3 points".into()));
    }
    let mut lo = PlaneComplex::new(f64::MAX, f64::MAX);
    let mut hi = PlaneComplex::new(f64::MIN, f64::MIN);
    let mut nearest = f64::MAX;
    for z in closed_path {
        lo = PlaneComplex::new(lo.re.min(z.re), lo.im.min(z.im));
        hi = PlaneComplex::new(hi.re.max(z.re), hi.im.max(z.im));
        nearest = nearest.min((z - origin).norm());
    }
    let diameter = (hi - lo).norm();
    if nearest <= 1e-9 * diameter {
        return Err(Error::Proximity { distance: nearest });
    }
    let n = closed_path.len();
    let total: f64 = (0..n)
        .map(|i| {
            let a = closed_path[i] - origin;
            let b = closed_path[(i + 1) % n] - origin;
            (b / a).arg()
        })
        .sum();
    Ok((total / (2.0 * PI)).round() as i64)
}

/// `sign(|u|² - |v|²)`; zero marks a degenerate locus.
pub fn winding_sign_from_uvw(p: &Uvw) -> i32 {
    let (a, b) = (p.u.norm_sqr(), p.v.norm_sqr());
    let gap = a - b;
    if gap.abs() <= 1e-12 * (a + b) || a + b == 0.0 {
        0
    } else if gap > 0.0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> PlaneComplex {
        PlaneComplex::new(re, im)
    }

    fn sample(n: usize, f: impl Fn(f64) -> PlaneComplex) -> Vec<PlaneComplex> {
        (0..n).map(|j| f(2.0 * PI * j as f64 / n as f64)).collect()
    }

    #[test]
    fn delta_values() {
        assert_eq!(delta(1.0, 1.0).unwrap(), 1.0);
        assert!((delta(1.5, 1.0).unwrap() - 3.8125f64.sqrt()).abs() < 1e-15);
        assert!((delta(1.5, 1.0).unwrap() - 1.952562).abs() < 5e-7);
        assert!((delta(2.0, 1.0).unwrap() - 13f64.sqrt()).abs() < 1e-15);
        assert!(delta(0.0, 1.0).is_err());
        assert!(delta(-1.0, 1.0).is_err());
    }

    #[test]
    fn cubic_roots_of_unity() {
        let r = solve_cubic(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)).unwrap();
        for k in 0..3 {
            let want = PlaneComplex::from_polar(1.0, 2.0 * PI * k as f64 / 3.0);
            assert!(r.iter().any(|z| (z - want).norm() < 1e-14), "{r:?}");
        }
    }

    #[test]
    fn cubic_triple_root() {
        let r = solve_cubic(c(1.0, 0.0), c(-6.0, 0.0), c(12.0, 0.0), c(-8.0, 0.0)).unwrap();
        for z in r {
            assert!((z - 2.0).norm() < 1e-12);
        }
    }

    #[test]
    fn cubic_rejects_zero_leading() {
        assert_eq!(solve_cubic(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)), Err(Error::Degree));
    }

    #[test]
    fn fit_unit_circle() {
        let pts = sample(360, |t| PlaneComplex::from_polar(1.0, t));
        let fit = fit_conic(&pts).unwrap();
        assert_eq!(fit.kind, ConicKind::Circle);
        assert!((fit.semi_major - 1.0).abs() < 1e-12 && (fit.semi_minor - 1.0).abs() < 1e-12);
        assert!(fit.residual_rms <= 1e-12);
    }

    #[test]
    fn fit_rotated_ellipse() {
        let rot = PlaneComplex::from_polar(1.0, PI / 6.0);
        let pts = sample(360, |t| rot * c(2.0 * t.cos(), t.sin()));
        let fit = fit_conic(&pts).unwrap();
        assert_eq!(fit.kind, ConicKind::Ellipse);
        assert!((fit.semi_major - 2.0).abs() < 1e-10);
        assert!((fit.semi_minor - 1.0).abs() < 1e-10);
        assert!((fit.angle - PI / 6.0).abs() < 1e-9);
        for z in &pts {
            assert!(conic_value(&fit.coeffs, z.re, z.im).abs() < 1e-10);
        }
    }

    #[test]
    fn fit_collinear_is_segment() {
        let pts: Vec<_> = (0..360).map(|j| c(-1.0 + 2.0 * j as f64 / 359.0, 0.0)).collect();
        let fit = fit_conic(&pts).unwrap();
        assert_eq!(fit.kind, ConicKind::Segment);
        assert!((fit.semi_major - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fit_needs_six_points() {
        let pts = sample(5, |t| PlaneComplex::from_polar(1.0, t));
        assert_eq!(fit_conic(&pts), Err(Error::Arity(5)));
    }

    #[test]
    fn classify_by_axes() {
        let tol = Tolerances::default();
        let circle = ellipse_from_uvw(&Uvw { u: c(0.5, 0.0), v: c(0.0, 0.0), w: c(0.0, 0.0) });
        assert_eq!(classify_conic(&circle, &tol), ConicKind::Circle);
        let seg = ellipse_from_uvw(&Uvw { u: c(0.25, 0.0), v: c(0.25, 0.0), w: c(0.0, 0.0) });
        assert_eq!((seg.semi_major, seg.semi_minor), (0.5, 0.0));
        assert_eq!(classify_conic(&seg, &tol), ConicKind::Segment);
        let pt = ellipse_from_uvw(&Uvw { u: c(0.0, 0.0), v: c(0.0, 0.0), w: c(1.0, 2.0) });
        assert_eq!(classify_conic(&pt, &tol), ConicKind::Point);
    }

    #[test]
    fn uvw_unit_circle_and_segment() {
        let fit = ellipse_from_uvw(&Uvw { u: c(1.0, 0.0), v: c(0.0, 0.0), w: c(0.0, 0.0) });
        assert_eq!(fit.kind, ConicKind::Circle);
        assert_eq!((fit.semi_major, fit.semi_minor), (1.0, 1.0));
        let seg = ellipse_from_uvw(&Uvw { u: c(1.0, 0.0), v: c(1.0, 0.0), w: c(0.0, 0.0) });
        assert_eq!(seg.kind, ConicKind::Segment);
        assert_eq!((seg.semi_major, seg.semi_minor, seg.angle), (2.0, 0.0, 0.0));
    }

    #[test]
    fn uvw_rotated_matches_fit() {
        let p = Uvw { u: PlaneComplex::from_polar(2.0, PI / 3.0), v: c(1.0, 0.0), w: c(3.0, 4.0) };
        let pred = ellipse_from_uvw(&p);
        assert!((pred.semi_major - 3.0).abs() < 1e-15 && (pred.semi_minor - 1.0).abs() < 1e-15);
        assert!((pred.angle - PI / 6.0).abs() < 1e-15);
        let pts = sample(360, |t| p.eval(PlaneComplex::from_polar(1.0, t)));
        let fit = fit_conic(&pts).unwrap();
        assert!((fit.center - c(3.0, 4.0)).norm() < 1e-10);
        assert!((fit.semi_major - 3.0).abs() < 1e-10 && (fit.semi_minor - 1.0).abs() < 1e-10);
        assert!((fit.angle - PI / 6.0).abs() < 1e-10);
        for z in &pts {
            assert!(conic_value(&pred.coeffs, z.re, z.im).abs() < 1e-12);
        }
    }

    #[test]
    fn conic_transform_agrees_with_shape_map() {
        let p = Uvw { u: c(0.7, 0.2), v: c(-0.1, 0.3), w: c(0.4, -0.2) };
        let fit = ellipse_from_uvw(&p);
        let m = Matrix2::new(1.5, 0.0, 0.0, 1.0);
        let t = Vector2::new(0.0, 0.0);
        let img = fit.affine_image(&m, t, &Tolerances::default());
        let direct = transform_conic(fit.coeffs, &m, t);
        for (x, y) in img.coeffs.iter().zip(direct.iter()) {
            assert!((x - y).abs() < 1e-12, "{:?} vs {:?}", img.coeffs, direct);
        }
    }

    #[test]
    fn winding_basic() {
        let ccw = sample(100, |t| PlaneComplex::from_polar(1.0, t));
        assert_eq!(winding_number(&ccw, c(0.0, 0.0)).unwrap(), 1);
        let cw2 = sample(200, |t| PlaneComplex::from_polar(1.0, -2.0 * t));
        assert_eq!(winding_number(&cw2, c(0.0, 0.0)).unwrap(), -2);
        assert_eq!(winding_number(&ccw, c(3.0, 0.0)).unwrap(), 0);
        assert!(matches!(winding_number(&ccw, c(1.0, 0.0)), Err(Error::Proximity { .. })));
    }

    #[test]
    fn winding_of_uvw_curve() {
        let p = Uvw { u: c(2.0, 0.0), v: c(1.0, 0.0), w: c(0.0, 0.0) };
        let pts = sample(360, |t| p.eval(PlaneComplex::from_polar(1.0, t)));
        assert_eq!(winding_number(&pts, p.w).unwrap(), 1);
        assert_eq!(winding_sign_from_uvw(&p), 1);
        let q = Uvw { u: c(1.0, 0.0), v: c(2.0, 0.0), w: c(0.0, 0.0) };
        assert_eq!(winding_sign_from_uvw(&q), -1);
        let r = Uvw { u: c(0.0, 1.0), v: c(1.0, 0.0), w: c(0.0, 0.0) };
        assert_eq!(winding_sign_from_uvw(&r), 0);
    }
}
