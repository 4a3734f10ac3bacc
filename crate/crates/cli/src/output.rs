use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use poncelet_core::families::ConcentricPair;
use poncelet_core::PlaneComplex;

use crate::error::CliError;

pub const OUT_DIR_ENV: &str = "PONCELET_OUT_DIR";

/// C-style `%.{prec}g`.
pub fn fmt_g(x: f64, prec: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let p = prec.max(1);
    let sci = format!("{:.*e}", p - 1, x);
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let mant = trim_zeros(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mant}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn g(x: f64) -> String {
    fmt_g(x, 15)
}

/// `lambda_arg,x,y` rows, LF endings.
pub fn locus_csv(samples: &[(PlaneComplex, PlaneComplex)]) -> String {
    let mut s = String::from("lambda_arg,x,y\n");
    for (l, p) in samples {
        let _ = writeln!(s, "{},{},{}", g(l.arg()), g(p.re), g(p.im));
    }
    s
}

const LOCUS_COLORS: [&str; 6] = ["#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

pub struct SvgCurve<'a> {
    pub label: String,
    pub points: &'a [PlaneComplex],
}

fn ellipse_points(a: f64, b: f64, n: usize) -> Vec<PlaneComplex> {
    (0..n)
        .map(|j| {
            let t = std::f64::consts::TAU * j as f64 / n as f64;
            PlaneComplex::new(a * t.cos(), b * t.sin())
        })
        .collect()
}

fn closed_path(points: &[PlaneComplex]) -> String {
    let mut d = String::new();
    for (i, p) in points.iter().enumerate() {
        let _ = write!(d, "{}{} {} ", if i == 0 { "M" } else { "L" }, g(p.re), g(0.0 - p.im));
    }
    d.push('Z');
    d
}

/// Billiard and caustic in black, loci in color, one triangle in blue.
/// Each curve is a single `<path>`; the triangle is a `<polygon>`.
pub fn scene_svg(pair: &ConcentricPair, loci: &[SvgCurve<'_>], triangle: Option<[PlaneComplex; 3]>) -> String {
    let mut reach = pair.a.max(pair.b);
    for c in loci {
        for p in c.points {
            reach = reach.max(p.re.abs()).max(p.im.abs());
        }
    }
    let half = 1.1 * reach;
    let stroke = 2.0 * half / 600.0;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="600" height="600" viewBox="{} {} {} {}">"#,
        g(-half),
        g(-half),
        g(2.0 * half),
        g(2.0 * half)
    );
    let _ = writeln!(s, r#"<g fill="none" stroke-width="{}">"#, g(stroke));
    let outer = ellipse_points(pair.a, pair.b, 360);
    let inner = ellipse_points(pair.a_c, pair.b_c, 360);
    let _ = writeln!(s, r#"<path id="billiard" stroke="black" d="{}"/>"#, closed_path(&outer));
    let _ = writeln!(s, r#"<path id="caustic" stroke="black" d="{}"/>"#, closed_path(&inner));
    for (i, c) in loci.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<path id="{}" stroke="{}" d="{}"/>"#,
            xml_escape(&c.label),
            LOCUS_COLORS[i % LOCUS_COLORS.len()],
            closed_path(c.points)
        );
    }
    if let Some(t) = triangle {
        let pts: Vec<String> = t.iter().map(|p| format!("{},{}", g(p.re), g(0.0 - p.im))).collect();
        let _ = writeln!(s, r#"<polygon id="triangle" stroke="blue" points="{}"/>"#, pts.join(" "));
    }
    s.push_str("</g>\n</svg>\n");
    s
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Write through a temp file in the target directory, then rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(contents)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

/// Where output should go.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sink {
    Stdout,
    File(PathBuf),
    Dir(PathBuf),
}

/// `--out` wins; an existing directory or a trailing slash means a directory.
/// Without `--out`, `PONCELET_OUT_DIR` is used, then stdout.
pub fn resolve_sink(out: Option<&Path>, env_dir: Option<&str>) -> Sink {
    match out {
        Some(p) if p.as_os_str() == "-" => Sink::Stdout,
        Some(p) if p.is_dir() || p.to_string_lossy().ends_with('/') => Sink::Dir(p.to_path_buf()),
        Some(p) => Sink::File(p.to_path_buf()),
        None => match env_dir {
            Some(d) if !d.is_empty() => Sink::Dir(PathBuf::from(d)),
            _ => Sink::Stdout,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_format() {
        assert_eq!(fmt_g(0.0, 15), "0");
        assert_eq!(fmt_g(1.0, 15), "1");
        assert_eq!(fmt_g(0.1, 15), "0.1");
        assert_eq!(fmt_g(1.0 / 3.0, 15), "0.333333333333333");
        assert_eq!(fmt_g(-2.5, 15), "-2.5");
        assert_eq!(fmt_g(1e-5, 15), "1e-05");
        assert_eq!(fmt_g(0.0001, 15), "0.0001");
        assert_eq!(fmt_g(1e15, 15), "1e+15");
        assert_eq!(fmt_g(123456789012345.0, 15), "123456789012345");
        assert_eq!(fmt_g(1.5e-300, 15), "1.5e-300");
        assert_eq!(fmt_g(std::f64::consts::PI, 6), "3.14159");
        assert_eq!(fmt_g(99999.96, 6), "100000");
        assert_eq!(fmt_g(999999.5, 6), "1e+06");
    }

    #[test]
    fn csv_shape() {
        let rows = vec![(PlaneComplex::new(1.0, 0.0), PlaneComplex::new(0.5, -0.25))];
        assert_eq!(locus_csv(&rows), "lambda_arg,x,y\n0,0.5,-0.25\n");
    }

    #[test]
    fn sinks() {
        assert_eq!(resolve_sink(None, None), Sink::Stdout);
        assert_eq!(resolve_sink(None, Some("d")), Sink::Dir("d".into()));
        assert_eq!(resolve_sink(Some(Path::new("x.csv")), Some("d")), Sink::File("x.csv".into()));
        assert_eq!(resolve_sink(Some(Path::new("o/")), None), Sink::Dir("o/".into()));
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("f.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
