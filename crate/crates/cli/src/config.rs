use std::path::PathBuf;
use std::str::FromStr;

use poncelet_core::families::Family;
use poncelet_core::fixtures::parse_kv_lines;
use poncelet_core::{ParseError, Tolerances};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "svg" => Ok(OutputFormat::Svg),
            other => Err(format!("unknown format '{other}' (expected csv, json or svg)")),
        }
    }
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
            OutputFormat::Svg => "svg",
        }
    }
}

/// Settings that may come from a config file or from flags. Unset fields
/// leave the lower layer alone.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigPatch {
    pub family: Option<Family>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub a_over_b: Option<f64>,
    pub centers: Option<Vec<u32>>,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
    pub circle_tol: Option<f64>,
    pub degen_tol: Option<f64>,
    pub fit_tol: Option<f64>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub ab_grid: Option<Vec<f64>>,
    pub waive: Option<Vec<u32>>,
    pub threads: Option<usize>,
}

fn bad(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::new(line, 1, msg)
}

fn num<T: FromStr>(v: &str, line: usize, key: &str) -> Result<T, ParseError> {
    v.parse().map_err(|_| bad(line, format!("bad value '{v}' for '{key}'")))
}

impl ConfigPatch {
    /// Parse flat `key = value` text.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut p = ConfigPatch::default();
        let mut seen = std::collections::BTreeSet::new();
        for kv in parse_kv_lines(text)? {
            let (line, key, v) = (kv.line, kv.key, kv.value);
            if !seen.insert(key.to_string()) {
                return Err(bad(line, format!("duplicate key '{key}'")));
            }
            match key {
                "family" => p.family = Some(v.parse().map_err(|e: poncelet_core::Error| bad(line, e.to_string()))?),
                "a" => p.a = Some(num(v, line, key)?),
                "b" => p.b = Some(num(v, line, key)?),
                "ab" | "a_over_b" => p.a_over_b = Some(num(v, line, key)?),
                "center" | "centers" => p.centers = Some(parse_centers(v).map_err(|m| bad(line, m))?),
                "samples" => p.samples = Some(num(v, line, key)?),
                "tol" => p.tol = Some(num(v, line, key)?),
                "circle_tol" => p.circle_tol = Some(num(v, line, key)?),
                "degen_tol" => p.degen_tol = Some(num(v, line, key)?),
                "fit_tol" => p.fit_tol = Some(num(v, line, key)?),
                "format" => p.format = Some(v.parse().map_err(|m: String| bad(line, m))?),
                "out" => p.out = Some(PathBuf::from(v)),
                "seed" => p.seed = Some(num(v, line, key)?),
                "ab_grid" => p.ab_grid = Some(parse_grid(v).map_err(|m| bad(line, m))?),
                "waive" => p.waive = Some(parse_centers(v).map_err(|m| bad(line, m))?),
                "threads" => p.threads = Some(num(v, line, key)?),
                other => return Err(bad(line, format!("unknown key '{other}'"))),
            }
        }
        Ok(p)
    }

    /// Overlay `other` on top of `self`.
    pub fn merge(mut self, other: ConfigPatch) -> ConfigPatch {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(family, a, b, a_over_b, centers, samples, tol, circle_tol, degen_tol, fit_tol, format, out, seed, ab_grid, waive, threads);
        // An explicit ratio on the upper layer beats explicit axes below it and vice versa.
        if other.a_over_b.is_some() && other.a.is_none() && other.b.is_none() {
            self.a = None;
            self.b = None;
        }
        if (other.a.is_some() || other.b.is_some()) && other.a_over_b.is_none() {
            self.a_over_b = None;
        }
        self
    }
}

/// `1,2,5`, `1..200` or a mix such as `1..10, 20`.
pub fn parse_centers(s: &str) -> Result<Vec<u32>, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let t = part.trim();
        if t.is_empty() {
            continue;
        }
        if let Some((lo, hi)) = t.split_once("..") {
            let lo: u32 = lo.trim().parse().map_err(|_| format!("bad range start in '{t}'"))?;
            let hi: u32 = hi.trim().trim_start_matches('=').parse().map_err(|_| format!("bad range end in '{t}'"))?;
            if lo == 0 || hi < lo || hi - lo > 100_000 {
                return Err(format!("bad range '{t}'"));
            }
            out.extend(lo..=hi);
        } else {
            let k: u32 = t.parse().map_err(|_| format!("bad center '{t}'"))?;
            if k == 0 {
                return Err("center indices start at 1".into());
            }
            out.push(k);
        }
    }
    if out.is_empty() {
        return Err("empty center list".into());
    }
    let mut seen = std::collections::BTreeSet::new();
    out.retain(|k| seen.insert(*k));
    Ok(out)
}

pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| format!("bad ratio '{t}'")))
        .collect::<Result<_, _>>()?;
    if v.is_empty() {
        return Err("empty ratio grid".into());
    }
    Ok(v)
}

/// Validated settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub family: Family,
    pub a: f64,
    pub b: f64,
    /// Empty means "the command's default set".
    pub centers: Vec<u32>,
    pub samples: usize,
    pub tol: f64,
    pub tolerances: Tolerances,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub ab_grid: Option<Vec<f64>>,
    pub waive: Vec<u32>,
    pub threads: usize,
}

pub const DEFAULT_AB: f64 = 1.5;
pub const DEFAULT_SAMPLES: usize = 720;

impl RunConfig {
    pub fn from_patch(p: ConfigPatch) -> Result<Self, CliError> {
        let (a, b) = match (p.a, p.b, p.a_over_b) {
            (Some(a), Some(b), _) => (a, b),
            (Some(a), None, _) => (a, 1.0),
            (None, Some(_), _) => return Err(CliError::Usage("--b needs --a".into())),
            (None, None, Some(r)) => (r, 1.0),
            (None, None, None) => (DEFAULT_AB, 1.0),
        };
        if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) {
            return Err(CliError::Usage(format!("semi-axes must be positive, got ({a}, {b})")));
        }
        let defaults = Tolerances::default();
        let tolerances = Tolerances {
            circle_tol: p.circle_tol.unwrap_or(defaults.circle_tol),
            degen_tol: p.degen_tol.unwrap_or(defaults.degen_tol),
            fit_tol: p.fit_tol.unwrap_or(defaults.fit_tol),
        };
        let tol = p.tol.unwrap_or(1e-6);
        for (name, v) in [
            ("tol", tol),
            ("circle_tol", tolerances.circle_tol),
            ("degen_tol", tolerances.degen_tol),
            ("fit_tol", tolerances.fit_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Usage(format!("{name} must be positive, got {v}")));
            }
        }
        let samples = p.samples.unwrap_or(DEFAULT_SAMPLES);
        if !(64..=1_000_000).contains(&samples) {
            return Err(CliError::Usage(format!("samples must lie in 64..=1000000, got {samples}")));
        }
        if let Some(grid) = &p.ab_grid {
            if grid.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
                return Err(CliError::Usage("aspect ratios must be positive".into()));
            }
        }
        let threads = p.threads.unwrap_or(0);
        if threads > 1024 {
            return Err(CliError::Usage(format!("too many threads: {threads}")));
        }
        Ok(RunConfig {
            family: p.family.unwrap_or(Family::Confocal),
            a,
            b,
            centers: p.centers.unwrap_or_default(),
            samples,
            tol,
            tolerances,
            format: p.format,
            out: p.out,
            seed: p.seed.unwrap_or(0),
            ab_grid: p.ab_grid,
            waive: p.waive.unwrap_or_default(),
            threads,
        })
    }

    pub fn a_over_b(&self) -> f64 {
        self.a / self.b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_file() {
        let p = ConfigPatch::parse("# run\nfamily = incircle\nab = 2\ncenters = 1..3, 7\nformat = json\n").unwrap();
        assert_eq!(p.family, Some(Family::Incircle));
        assert_eq!(p.centers, Some(vec![1, 2, 3, 7]));
        let c = RunConfig::from_patch(p).unwrap();
        assert_eq!((c.a, c.b), (2.0, 1.0));
        assert_eq!(c.format, Some(OutputFormat::Json));
    }

    #[test]
    fn flags_override_file() {
        let file = ConfigPatch::parse("a = 3\nb = 2\nsamples = 100").unwrap();
        let flags = ConfigPatch {
            a_over_b: Some(1.25),
            ..Default::default()
        };
        let c = RunConfig::from_patch(file.merge(flags)).unwrap();
        assert_eq!((c.a, c.b, c.samples), (1.25, 1.0, 100));
    }

    #[test]
    fn rejects() {
        assert!(ConfigPatch::parse("nope = 1").is_err());
        assert!(ConfigPatch::parse("a = x").is_err());
        assert!(ConfigPatch::parse("a = 1\na = 2").is_err());
        assert!(ConfigPatch::parse("just text").is_err());
        let neg = ConfigPatch::parse("tol = -1").unwrap();
        assert!(RunConfig::from_patch(neg).is_err());
        let few = ConfigPatch::parse("samples = 10").unwrap();
        assert!(RunConfig::from_patch(few).is_err());
        assert!(parse_centers("0").is_err());
        assert!(parse_centers("5..2").is_err());
        assert!(parse_centers(",").is_err());
        assert_eq!(parse_centers("3,3,1..2").unwrap(), vec![3, 1, 2]);
    }
}
