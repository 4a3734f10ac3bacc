use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use poncelet_core::centers::{self, CenterTable};
use poncelet_core::families::{self, ConcentricPair, Family, TriangleSample};
use poncelet_core::fixtures::Fixture;
use poncelet_core::formulas::{self, FormulaCheck, FormulaKey};
use poncelet_core::geometry::{delta, fit_conic_with, winding_sign_from_uvw};
use poncelet_core::locus::{self, CircularRatios, LocusTrace, LocusVerdict, MonotonicityReport};
use poncelet_core::{ConicKind, Error, Tolerances, Uvw};

use crate::config::RunConfig;
use crate::error::CliError;

pub const DEFAULT_GRID: [f64; 4] = [1.2, 1.5, 2.0, 3.0];

fn pool(threads: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Failed(format!("worker pool: {e}")))
}

/// Map over `items` on a bounded pool, keeping input order.
fn par_map<T: Sync, R: Send>(threads: usize, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Result<Vec<R>, CliError> {
    Ok(pool(threads)?.install(|| items.par_iter().map(f).collect()))
}

pub fn pair_for(family: Family, a: f64, b: f64) -> Result<ConcentricPair, CliError> {
    if family == Family::Custom {
        return Err(CliError::Usage("the custom family has no built-in pair".into()));
    }
    families::family_pair(family, a, b).map_err(|e| match e {
        Error::Domain(m) => CliError::Usage(m),
        other => CliError::Engine(other),
    })
}

// ---------------------------------------------------------------- scan

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Match {
    Yes,
    No,
    Untested,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CenterRecord {
    pub k: u32,
    pub kind: String,
    pub axes: Option<[f64; 2]>,
    pub center: Option<[f64; 2]>,
    pub angle: Option<f64>,
    pub residual: Option<f64>,
    pub winding: Option<i64>,
    pub expected: Option<String>,
    pub matches_appendix: Match,
    pub waived: bool,
    pub diagnostic: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureEntry {
    pub k: u32,
    pub squared_rational: bool,
    pub observed: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub family: String,
    pub a_over_b: f64,
    pub a: f64,
    pub b: f64,
    pub samples: usize,
    pub centers: Vec<CenterRecord>,
    pub matched: usize,
    pub mismatched: usize,
    pub waived: usize,
    pub untested: usize,
    pub conjecture: Vec<ConjectureEntry>,
}

impl ScanReport {
    /// Mismatches not covered by a waiver.
    pub fn failures(&self) -> usize {
        self.centers.iter().filter(|c| c.matches_appendix == Match::No && !c.waived).count()
    }
}

fn kind_name(r: &Result<LocusVerdict, Error>) -> String {
    match r {
        Ok(v) => v.kind.as_str().to_string(),
        Err(Error::MissingCenter(_)) => "undefined".into(),
        Err(_) => "error".into(),
    }
}

fn diagnose(v: &LocusVerdict, expected: ConicKind, tol: &Tolerances) -> String {
    let f = &v.fit;
    let ratio = if f.semi_major > 0.0 { f.semi_minor / f.semi_major } else { f64::NAN };
    let mut s = format!(
        "expected {expected}, observed {}: semi-axes ({:.9}, {:.9}), minor/major {:.9}, fit residual {:.3e}",
        v.kind, f.semi_major, f.semi_minor, ratio, f.residual_rms
    );
    if expected == ConicKind::Circle {
        s.push_str(&format!(
            ", axis gap {:.3e} vs circle tolerance {:.1e}",
            (f.semi_major - f.semi_minor).abs() / f.semi_major.max(1e-300),
            tol.circle_tol
        ));
    }
    if let Some(g) = v.max_prediction_gap {
        s.push_str(&format!(", prediction gap {g:.3e}"));
    }
    s
}

fn record(
    k: u32,
    res: &Result<LocusVerdict, Error>,
    fixture: &Fixture,
    waive: &[u32],
    tol: &Tolerances,
) -> CenterRecord {
    let expected = fixture.expected(k);
    let mut rec = CenterRecord {
        k,
        kind: kind_name(res),
        axes: None,
        center: None,
        angle: None,
        residual: None,
        winding: None,
        expected: expected.map(|e| e.as_str().to_string()),
        matches_appendix: Match::Untested,
        waived: false,
        diagnostic: None,
    };
    match res {
        Ok(v) => {
            rec.axes = Some([v.fit.semi_major, v.fit.semi_minor]);
            rec.center = Some([v.fit.center.re, v.fit.center.im]);
            rec.angle = Some(v.fit.angle);
            rec.residual = Some(v.fit.residual_rms);
            rec.winding = v.winding;
            if let Some(e) = expected {
                if v.kind == e {
                    rec.matches_appendix = Match::Yes;
                } else {
                    rec.matches_appendix = Match::No;
                    rec.diagnostic = Some(diagnose(v, e, tol));
                }
            }
        }
        Err(Error::MissingCenter(_)) => {
            rec.diagnostic = Some(format!("X{k} has no definition in the center table"));
        }
        Err(e) => {
            if expected.is_some() {
                rec.matches_appendix = Match::No;
            }
            rec.diagnostic = Some(e.to_string());
        }
    }
    if rec.matches_appendix == Match::No && waive.contains(&k) {
        rec.waived = true;
    }
    rec
}

pub fn scan(cfg: &RunConfig) -> Result<ScanReport, CliError> {
    let pair = pair_for(cfg.family, cfg.a, cfg.b)?;
    let fixture = Fixture::builtin(cfg.family).ok_or_else(|| CliError::Usage("no fixture for the custom family".into()))?;
    let ks: Vec<u32> = if cfg.centers.is_empty() {
        fixture.indices().into_iter().collect()
    } else {
        cfg.centers.clone()
    };
    let table = CenterTable::builtin();
    let tol = cfg.tolerances;
    let results = par_map(cfg.threads, &ks, |&k| locus::classify_locus_with(table, &pair, k, cfg.samples, &tol))?;
    let centers: Vec<CenterRecord> = ks
        .iter()
        .zip(&results)
        .map(|(&k, r)| record(k, r, &fixture, &cfg.waive, &tol))
        .collect();
    let conjecture = ks
        .iter()
        .zip(&results)
        .filter_map(|(&k, r)| {
            table.get(k).map(|spec| ConjectureEntry {
                k,
                squared_rational: spec.squared_rational,
                observed: kind_name(r),
            })
        })
        .collect();
    let count = |m: Match| centers.iter().filter(|c| c.matches_appendix == m).count();
    Ok(ScanReport {
        family: cfg.family.as_str().to_string(),
        a_over_b: cfg.a_over_b(),
        a: cfg.a,
        b: cfg.b,
        samples: cfg.samples,
        matched: count(Match::Yes),
        mismatched: count(Match::No),
        waived: centers.iter().filter(|c| c.waived).count(),
        untested: count(Match::Untested),
        centers,
        conjecture,
    })
}

// ---------------------------------------------------------------- verify

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Warn,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub value: Option<f64>,
    pub limit: Option<f64>,
    pub detail: Option<String>,
}

impl Check {
    fn bound(name: impl Into<String>, value: f64, limit: f64) -> Check {
        Check {
            name: name.into(),
            status: if value <= limit { Status::Pass } else { Status::Fail },
            value: Some(value),
            limit: Some(limit),
            detail: None,
        }
    }

    fn flag(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            value: None,
            limit: None,
            detail: Some(detail.into()),
        }
    }

    fn error(name: impl Into<String>, e: impl std::fmt::Display) -> Check {
        Check {
            name: name.into(),
            status: Status::Fail,
            value: None,
            limit: None,
            detail: Some(e.to_string()),
        }
    }

    /// A registered known discrepancy: never worse than a warning.
    fn known(mut self, note: &str) -> Check {
        if self.status == Status::Fail {
            self.status = Status::Warn;
            self.detail = Some(match self.detail {
                Some(d) => format!("{d}; known discrepancy: {note}"),
                None => format!("known discrepancy: {note}"),
            });
        }
        self
    }

    fn detail(mut self, d: impl Into<String>) -> Check {
        self.detail = Some(d.into());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    ConfocalFormulas,
    HomotheticFormulas,
    Combos,
    Degeneracy,
    Winding,
    Monotonicity,
    Closure,
    Blaschke,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::ConfocalFormulas,
        Suite::HomotheticFormulas,
        Suite::Combos,
        Suite::Degeneracy,
        Suite::Winding,
        Suite::Monotonicity,
        Suite::Closure,
        Suite::Blaschke,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::ConfocalFormulas => "confocal-formulas",
            Suite::HomotheticFormulas => "homothetic-formulas",
            Suite::Combos => "combos",
            Suite::Degeneracy => "degeneracy",
            Suite::Winding => "winding",
            Suite::Monotonicity => "monotonicity",
            Suite::Closure => "closure",
            Suite::Blaschke => "blaschke",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Suite::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Suite::ALL.iter().map(|x| x.as_str()).collect();
                CliError::Usage(format!("unknown suite '{s}' (expected one of {})", names.join(", ")))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub family: Option<String>,
    pub a_over_b: Vec<f64>,
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub warnings: usize,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    fn new(suite: Suite, family: Option<Family>, grid: Vec<f64>, seed: u64, checks: Vec<Check>) -> Self {
        let n = |s: Status| checks.iter().filter(|c| c.status == s).count();
        VerifyReport {
            suite: suite.as_str().to_string(),
            family: family.map(|f| f.as_str().to_string()),
            a_over_b: grid,
            seed,
            passed: n(Status::Pass),
            failed: n(Status::Fail),
            warnings: n(Status::Warn),
            checks,
        }
    }
}

fn grid_of(cfg: &RunConfig) -> Vec<f64> {
    cfg.ab_grid.clone().unwrap_or_else(|| DEFAULT_GRID.to_vec())
}

pub fn verify(cfg: &RunConfig, suite: Suite) -> Result<VerifyReport, CliError> {
    let grid = grid_of(cfg);
    let single = vec![cfg.a_over_b()];
    let (family, ratios, checks) = match suite {
        Suite::ConfocalFormulas => (None, grid.clone(), confocal_formulas(cfg, &grid)?),
        Suite::HomotheticFormulas => (None, grid.clone(), homothetic_formulas(cfg, &grid)?),
        Suite::Combos => (None, Vec::new(), combos(cfg)),
        Suite::Degeneracy => (None, single, degeneracy(cfg)?),
        Suite::Winding => (Some(cfg.family), single, winding(cfg)?),
        Suite::Monotonicity => (Some(cfg.family), single, monotonicity(cfg)?),
        Suite::Closure => (None, grid.clone(), closure(cfg, &grid)),
        Suite::Blaschke => (None, single, blaschke(cfg)?),
    };
    Ok(VerifyReport::new(suite, family, ratios, cfg.seed, checks))
}

fn formula_check(name: String, res: Result<FormulaCheck, Error>, tol: f64) -> Check {
    match res {
        Ok(c) => {
            let mut ch = Check::bound(name, c.rel_err, tol);
            let mut notes = vec![format!(
                "formula ({:.9}, {:.9}), fitted ({:.9}, {:.9}) {}",
                c.formula.0, c.formula.1, c.fitted.semi_major, c.fitted.semi_minor, c.fitted.kind
            )];
            if c.sign_flipped {
                notes.push("formula value negative".into());
            }
            if !c.orientation_agrees {
                notes.push("major axis orientation differs".into());
            }
            ch.detail = Some(notes.join("; "));
            ch
        }
        Err(e) => Check::error(name, e),
    }
}

/// Marks keys that fail at every ratio of the grid.
fn flag_errata(checks: &mut [Check], keys: &[String], per_key: usize) {
    for (i, key) in keys.iter().enumerate() {
        let cells = &mut checks[i * per_key..(i + 1) * per_key];
        if per_key > 1 && cells.iter().all(|c| c.status == Status::Fail) {
            for c in cells {
                let d = c.detail.take().unwrap_or_default();
                c.detail = Some(format!("{d}; {key} fails at every ratio: suspected erratum"));
            }
        }
    }
}

fn confocal_formulas(cfg: &RunConfig, grid: &[f64]) -> Result<Vec<Check>, CliError> {
    let cells: Vec<(FormulaKey, f64)> = formulas::CONFOCAL_KEYS
        .iter()
        .flat_map(|&k| grid.iter().map(move |&r| (k, r)))
        .collect();
    let tol = cfg.tolerances;
    let mut checks = par_map(cfg.threads, &cells, |&(key, r)| {
        formula_check(format!("confocal {key} at a/b={r}"), formulas::check_confocal(key, r, 1.0, &tol), cfg.tol)
    })?;
    let keys: Vec<String> = formulas::CONFOCAL_KEYS.iter().map(|k| k.to_string()).collect();
    flag_errata(&mut checks, &keys, grid.len());
    for &r in grid {
        match formulas::shape_relations(r, 1.0) {
            Ok(rel) => checks.extend(
                rel.into_iter()
                    .map(|s| Check::bound(format!("{} at a/b={r}", s.name), s.gap(), 1e-10)),
            ),
            Err(e) => checks.push(Check::error(format!("shape relations at a/b={r}"), e)),
        }
    }
    for s in formulas::special_ratios() {
        checks.push(
            Check::bound(format!("X{} {}", s.k, s.description), s.residual, 1e-10)
                .detail(format!("a/b = {:.12}, bisected {:.12}", s.a_over_b, s.bisected)),
        );
    }
    Ok(checks)
}

fn homothetic_formulas(cfg: &RunConfig, grid: &[f64]) -> Result<Vec<Check>, CliError> {
    let cells: Vec<(u32, f64)> = formulas::HOMOTHETIC_KEYS
        .iter()
        .flat_map(|&k| grid.iter().map(move |&r| (k, r)))
        .collect();
    let tol = cfg.tolerances;
    let mut checks = par_map(cfg.threads, &cells, |&(k, r)| {
        formula_check(format!("homothetic X{k} at a/b={r}"), formulas::check_homothetic(k, r, 1.0, &tol), cfg.tol)
    })?;
    let keys: Vec<String> = formulas::HOMOTHETIC_KEYS.iter().map(|k| format!("X{k}")).collect();
    flag_errata(&mut checks, &keys, grid.len());
    Ok(checks)
}

pub const COMBO_TRIANGLES: usize = 1000;
pub const COMBO_TOL: f64 = 1e-8;

/// Vertices uniform in `[-2, 2]²`, rejecting slivers with `r/R ≤ 0.05`.
pub fn random_triangle(rng: &mut ChaCha8Rng) -> TriangleSample {
    loop {
        let v = [0, 1, 2].map(|_| Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)));
        let t = TriangleSample {
            vertices: v,
            lambda: Complex64::new(1.0, 0.0),
        };
        if let Ok((_, _, rho)) = centers::inradius_circumradius(&t) {
            if rho > 0.05 {
                return t;
            }
        }
    }
}

pub fn random_triangles(seed: u64, n: usize) -> Vec<TriangleSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_triangle(&mut rng)).collect()
}

fn combos(cfg: &RunConfig) -> Vec<Check> {
    let tris = random_triangles(cfg.seed, COMBO_TRIANGLES);
    let ks: Vec<u32> = centers::combo_indices().collect();
    let mut checks = Vec::new();
    for &k in &ks {
        let mut worst: f64 = 0.0;
        let mut skipped = 0;
        let mut err = None;
        for t in &tris {
            match centers::combo_residual(t, k) {
                Ok(r) => worst = worst.max(r),
                Err(Error::Evaluation(_)) | Err(Error::Pole { .. }) => skipped += 1,
                Err(e) => {
                    err = Some(e);
                    break;
                }
            }
        }
        let name = format!("row X{k} on {} random triangles", tris.len());
        checks.push(match err {
            Some(e) => Check::error(name, e),
            None => Check::bound(name, worst, COMBO_TOL).detail(format!("{skipped} triangles undefined")),
        });
    }
    let rhos: Vec<f64> = (1..=49).map(|i| i as f64 / 100.0).collect();
    for &k in &ks {
        let mut worst: f64 = 0.0;
        for &rho in &rhos {
            if let Ok((a, b, c)) = centers::combo_coefficients(k, rho) {
                worst = worst.max((a + b + c - 1.0).abs());
            }
        }
        checks.push(Check::bound(format!("row X{k} weights sum to 1 on rho grid"), worst, 1e-12));
    }
    checks
}

pub const DEGENERATE_MINOR_TOL: f64 = 1e-7;

fn degeneracy(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let (a, b) = (cfg.a, cfg.b);
    let pair = pair_for(Family::Confocal, a, b)?;
    let mut checks = Vec::new();
    let (r1, r2) = locus::degenerate_ratios(a, b)?;
    for r in [r1, r2] {
        let name = format!("X2:X3 ratio {r:.6} collapses to a segment");
        let res = locus::trace_combo(&pair, r, 1.0, locus::REFINED_SAMPLES)
            .and_then(|t| fit_conic_with(&t.points(), &cfg.tolerances));
        checks.push(match res {
            Ok(fit) => {
                let ratio = fit.semi_minor / fit.semi_major;
                let mut c = Check::bound(name, ratio, DEGENERATE_MINOR_TOL);
                if fit.kind != ConicKind::Segment {
                    c.status = Status::Fail;
                }
                c.detail(format!("kind {}, gamma {:.6}", fit.kind, locus::gamma_of_ratio(r)))
            }
            Err(e) => Check::error(name, e),
        });
    }
    match locus::circular_ratios(a, b) {
        Ok(cr) => checks.extend(circular_checks(&cr)),
        Err(e) => checks.push(Check::error("circular ratios", e)),
    }
    Ok(checks)
}

fn circular_checks(cr: &CircularRatios) -> Vec<Check> {
    let mut out = Vec::new();
    let scanned = |i: usize| cr.scanned.get(i).copied();
    out.push(Check::flag(
        "circle scan finds two ratios",
        cr.scanned.len() == 2,
        format!("scanned {:?}", cr.scanned),
    ));
    if let Some(hi) = cr.scanned.iter().copied().fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x)))) {
        out.push(
            Check::bound("printed r+ matches scan", (cr.printed.0 - hi).abs(), 1e-6)
                .detail(format!("printed {:.9}, scanned {:.9}, gamma {:.6}", cr.printed.0, hi, locus::gamma_of_ratio(hi))),
        );
    }
    if let (Some(lo), true) = (scanned(0), cr.scanned.len() == 2) {
        out.push(
            Check::bound("printed r- matches scan", (cr.printed.1 - lo).abs(), 1e-6)
                .detail(format!("printed {:.9}, scanned {:.9}", cr.printed.1, lo))
                .known("printed r- does not match the v = 0 root"),
        );
    }
    out.push(
        Check::bound(
            "printed ratio sum equals -3",
            (cr.printed_sum - CircularRatios::CLAIMED_SUM).abs(),
            1e-6,
        )
        .detail(format!("printed sum {:.9}", cr.printed_sum))
        .known("circular-ratio sum observation"),
    );
    if let Some(s) = cr.scanned_sum {
        out.push(
            Check::bound("scanned ratio sum equals -3", (s - CircularRatios::CLAIMED_SUM).abs(), 1e-6)
                .detail(format!("scanned sum {s:.9}"))
                .known("circular-ratio sum observation"),
        );
    }
    out
}

fn tabulated(cfg: &RunConfig) -> Vec<u32> {
    if !cfg.centers.is_empty() {
        return cfg.centers.clone();
    }
    Fixture::builtin(cfg.family).map(|f| f.indices().into_iter().collect()).unwrap_or_default()
}

/// Pointwise tolerance, relative to `a`, for accepting a `u,v,w` description.
pub const UVW_TOL: f64 = 1e-7;

/// Where the `u,v,w` of a locus came from.
#[derive(Debug, Clone, Copy, PartialEq)]
enum UvwSource {
    Prediction(Uvw),
    TraceFit(Uvw),
}

impl UvwSource {
    fn uvw(&self) -> &Uvw {
        match self {
            UvwSource::Prediction(p) | UvwSource::TraceFit(p) => p,
        }
    }

    fn label(&self) -> &'static str {
        match self {
            UvwSource::Prediction(_) => "combination",
            UvwSource::TraceFit(_) => "trace fit",
        }
    }
}

/// The combination's prediction when it matches the trace, else a
/// least-squares fit of the trace when that fits.
fn locus_uvw(v: &LocusVerdict, trace: &LocusTrace, scale: f64) -> Option<UvwSource> {
    if let (Some(p), Some(gap)) = (&v.predicted, v.max_prediction_gap) {
        if gap <= UVW_TOL * scale {
            return Some(UvwSource::Prediction(p.uvw));
        }
    }
    match locus::uvw_of_trace(trace) {
        Ok((p, worst)) if worst <= UVW_TOL * scale => Some(UvwSource::TraceFit(p)),
        _ => None,
    }
}

/// Classified elliptic loci of the tabulated centers, with their traces.
fn elliptic_loci(cfg: &RunConfig, pair: &ConcentricPair, what: &str) -> Result<Vec<Result<(LocusVerdict, LocusTrace), Check>>, CliError> {
    let table = CenterTable::builtin();
    let tol = cfg.tolerances;
    let ks = tabulated(cfg);
    let per = par_map(cfg.threads, &ks, |&k| {
        let res = locus::trace_locus_in(table, pair, k, cfg.samples).and_then(|t| {
            locus::classify_locus_with(table, pair, k, cfg.samples, &tol).map(|v| (v, t))
        });
        match res {
            Ok((v, t)) if matches!(v.kind, ConicKind::Ellipse | ConicKind::Circle) => Some(Ok((v, t))),
            Ok(_) | Err(Error::MissingCenter(_)) => None,
            Err(e) => Some(Err(Check::error(format!("X{k} {what}"), e))),
        }
    })?;
    Ok(per.into_iter().flatten().collect())
}

fn winding(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let pair = pair_for(cfg.family, cfg.a, cfg.b)?;
    let mut checks = Vec::new();
    for item in elliptic_loci(cfg, &pair, "winding")? {
        let (v, trace) = match item {
            Ok(x) => x,
            Err(c) => {
                checks.push(c);
                continue;
            }
        };
        let k = v.k;
        checks.push(Check::flag(
            format!("X{k} winds +-3 over three cycles"),
            v.winding.map(i64::abs) == Some(3),
            format!("winding {:?}, kind {}", v.winding, v.kind),
        ));
        let name = format!("X{k} winds +-1 per cycle");
        match locus::winding_over(&pair, k, 1) {
            Ok(w1) => {
                let mut c = Check::flag(name, w1.abs() == 1, format!("winding {w1}"));
                if let Some(src) = locus_uvw(&v, &trace, pair.a.max(pair.b)) {
                    let sign = winding_sign_from_uvw(src.uvw()) as i64;
                    if sign != w1 {
                        c.status = Status::Fail;
                    }
                    c.detail = Some(format!("winding {w1}, sign(|u|^2-|v|^2) {sign} from {}", src.label()));
                }
                checks.push(c);
            }
            Err(e) => checks.push(Check::error(name, e)),
        }
    }
    Ok(checks)
}

pub const SPEED_TOL: f64 = 1e-4;

fn monotonicity(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let pair = pair_for(cfg.family, cfg.a, cfg.b)?;
    let mut checks = Vec::new();
    for item in elliptic_loci(cfg, &pair, "minimum speed")? {
        let (v, trace) = match item {
            Ok(x) => x,
            Err(c) => {
                checks.push(c);
                continue;
            }
        };
        let Some(src) = locus_uvw(&v, &trace, pair.a.max(pair.b)) else {
            continue;
        };
        let p = src.uvw();
        let rep = MonotonicityReport {
            min_speed: v.min_speed,
            analytic_min: (p.u.norm() - p.v.norm()).powi(2),
            monotonic: v.min_speed > 0.0,
        };
        checks.push(
            Check::bound(format!("X{} minimum speed matches |u|-|v|", v.k), rep.relative_gap(), SPEED_TOL).detail(
                format!(
                    "numeric {:.12}, analytic {:.12} from {}",
                    rep.min_speed,
                    rep.analytic_min.sqrt(),
                    src.label()
                ),
            ),
        );
    }
    Ok(checks)
}

pub const CLOSURE_TOL: f64 = 1e-12;
pub const TANGENT_TOL: f64 = 1e-8;
pub const TANGENT_STARTS: usize = 100;

fn closure(cfg: &RunConfig, grid: &[f64]) -> Vec<Check> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for &r in grid {
        let (a, b) = (r, 1.0);
        match families::confocal_caustic(a, b) {
            Ok((ac, bc)) => {
                checks.push(Check::bound(
                    format!("confocal a_c/a + b_c/b = 1 at a/b={r}"),
                    (ac / a + bc / b - 1.0).abs(),
                    CLOSURE_TOL,
                ));
                checks.push(
                    Check::bound(
                        format!("printed form a/a_c + b/b_c = 1 at a/b={r}"),
                        (a / ac + b / bc - 1.0).abs(),
                        CLOSURE_TOL,
                    )
                    .known("closure identity printed with inverted ratios"),
                );
            }
            Err(e) => checks.push(Check::error(format!("confocal caustic at a/b={r}"), e)),
        }
        for fam in Family::NAMED {
            let name = format!("{fam} tangent construction closes at a/b={r}");
            let pair = match families::family_pair(fam, a, b) {
                Ok(p) => p,
                Err(e) => {
                    checks.push(Check::error(name, e));
                    continue;
                }
            };
            let mut worst: f64 = 0.0;
            let mut err = None;
            for _ in 0..TANGENT_STARTS {
                let angle = rng.random_range(0.0..std::f64::consts::TAU);
                match families::tangent_construction(&pair, angle) {
                    Ok(t) => worst = worst.max(t.closure_residual),
                    Err(e) => {
                        err = Some(e);
                        break;
                    }
                }
            }
            checks.push(match err {
                Some(e) => Check::error(name, e),
                None => Check::bound(name, worst, TANGENT_TOL),
            });
        }
    }
    checks
}

pub const RHO_TOL: f64 = 1e-10;
pub const TANGENCY_TOL: f64 = 1e-9;

fn blaschke(cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    let lambdas = families::unit_lambdas(cfg.samples, 1);
    for fam in Family::NAMED {
        let pair = pair_for(fam, cfg.a, cfg.b)?;
        let tris = match families::sweep(&pair, &lambdas) {
            Ok(t) => t,
            Err(e) => {
                checks.push(Check::error(format!("{fam} sweep"), e));
                continue;
            }
        };
        let side = tris.iter().map(|t| families::side_tangency(&pair, t)).fold(0.0, f64::max);
        let outer = tris
            .iter()
            .flat_map(|t| t.vertices.iter().map(|&z| families::outer_residual(&pair, z)))
            .fold(0.0, f64::max);
        checks.push(Check::bound(format!("{fam} sides tangent to caustic"), side, TANGENCY_TOL));
        checks.push(Check::bound(format!("{fam} vertices on outer conic"), outer, TANGENCY_TOL));
        if fam != Family::Circumcircle {
            match locus::resolve_pq_reading(&pair) {
                Ok(res) => checks.push(
                    Check::bound(format!("{fam} u,v,w prediction matches trace"), res.outer_gap, 1e-8)
                        .detail(format!("reading {}, other reading gap {:.3e}", res.chosen.as_str(), res.caustic_gap)),
                ),
                Err(e) => checks.push(Check::error(format!("{fam} u,v,w prediction"), e)),
            }
        }
        if matches!(fam, Family::Confocal | Family::Incircle) {
            let rr: Result<Vec<_>, _> = tris.iter().map(centers::inradius_circumradius).collect();
            match rr {
                Ok(rr) => {
                    let spread = |f: fn(&(f64, f64, f64)) -> f64| {
                        let (lo, hi) = rr.iter().map(f).fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), x| (l.min(x), h.max(x)));
                        hi - lo
                    };
                    checks.push(Check::bound(format!("{fam} r/R invariant"), spread(|x| x.2), RHO_TOL));
                    if fam == Family::Incircle {
                        checks.push(Check::bound("incircle R constant", spread(|x| x.1), RHO_TOL));
                    }
                }
                Err(e) => checks.push(Check::error(format!("{fam} r/R"), e)),
            }
        }
    }
    Ok(checks)
}

// ---------------------------------------------------------------- find-caustic

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CausticReport {
    pub k: u32,
    pub a: f64,
    pub b: f64,
    pub t: f64,
    pub a_c: f64,
    pub b_c: f64,
    pub diameter: f64,
    /// `(δ - b²)/c²`, printed for the Mittenpunkt.
    pub closed_form_t: Option<f64>,
    /// `ab/(a+b)`, printed for the incenter.
    pub closed_form_radius: Option<f64>,
}

pub fn find_caustic(cfg: &RunConfig, k: u32) -> Result<CausticReport, CliError> {
    let (a, b) = (cfg.a, cfg.b);
    if CenterTable::builtin().get(k).is_none() {
        return Err(CliError::Usage(format!("center X{k} is not in the table")));
    }
    let sc = families::find_stationary_caustic(a, b, k).map_err(|e| match e {
        Error::NoStationary { .. } => CliError::NoSolution(e.to_string()),
        other => CliError::Engine(other),
    })?;
    let closed_form_t = if k == 9 && a != b {
        Some((delta(a, b)? - b * b) / (a * a - b * b))
    } else {
        None
    };
    Ok(CausticReport {
        k,
        a,
        b,
        t: sc.t,
        a_c: sc.a_c,
        b_c: sc.b_c,
        diameter: sc.diameter,
        closed_form_t,
        closed_form_radius: (k == 1).then(|| a * b / (a + b)),
    })
}

impl CausticReport {
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "stationary X{}\nt = {:.9}\na_c = {:.9}\nb_c = {:.9}\ndiameter = {:.3e}\n",
            self.k, self.t, self.a_c, self.b_c, self.diameter
        );
        if let Some(t) = self.closed_form_t {
            s.push_str(&format!("confocal closed form t = {t:.9}\n"));
        }
        if let Some(r) = self.closed_form_radius {
            s.push_str(&format!("circle closed form r = {r:.9}\n"));
        }
        s
    }
}

// ---------------------------------------------------------------- conjecture

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureCell {
    pub family: String,
    pub observed: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureRow {
    pub k: u32,
    pub squared_rational: bool,
    pub excluded: bool,
    pub cells: Vec<ConjectureCell>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureTally {
    pub family: String,
    pub support: usize,
    pub violations: usize,
    pub undefined: usize,
}

impl ConjectureTally {
    fn add(&mut self, kind: &str) {
        match supports(kind) {
            Some(true) => self.support += 1,
            Some(false) => self.violations += 1,
            None => self.undefined += 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub a_over_b: f64,
    pub statement: String,
    pub support: usize,
    pub violations: usize,
    pub undefined: usize,
    pub by_family: Vec<ConjectureTally>,
    pub rows: Vec<ConjectureRow>,
}

fn supports(kind: &str) -> Option<bool> {
    match kind {
        "ellipse" | "circle" | "point" => Some(true),
        "segment" | "other" => Some(false),
        _ => None,
    }
}

pub fn conjecture(cfg: &RunConfig) -> Result<ConjectureReport, CliError> {
    let table = CenterTable::builtin();
    let ks: Vec<u32> = if cfg.centers.is_empty() {
        table.indices().filter(|&k| table.get(k).is_some_and(|s| s.squared_rational)).collect()
    } else {
        cfg.centers.clone()
    };
    let pairs: Vec<(Family, ConcentricPair)> = Family::NAMED
        .iter()
        .map(|&f| pair_for(f, cfg.a, cfg.b).map(|p| (f, p)))
        .collect::<Result<_, _>>()?;
    let tol = cfg.tolerances;
    let rows = par_map(cfg.threads, &ks, |&k| {
        let flagged = table.get(k).is_some_and(|s| s.squared_rational);
        let cells = if flagged {
            pairs
                .iter()
                .map(|(f, p)| ConjectureCell {
                    family: f.as_str().to_string(),
                    observed: kind_name(&locus::classify_locus_with(table, p, k, cfg.samples, &tol)),
                })
                .collect()
        } else {
            Vec::new()
        };
        ConjectureRow {
            k,
            squared_rational: flagged,
            excluded: !flagged,
            cells,
        }
    })?;
    let tally = |family: &str| ConjectureTally {
        family: family.to_string(),
        support: 0,
        violations: 0,
        undefined: 0,
    };
    let mut total = tally("all");
    let mut by_family: Vec<ConjectureTally> = Family::NAMED.iter().map(|f| tally(f.as_str())).collect();
    for c in rows.iter().flat_map(|r| &r.cells) {
        total.add(&c.observed);
        if let Some(t) = by_family.iter_mut().find(|t| t.family == c.family) {
            t.add(&c.observed);
        }
    }
    Ok(ConjectureReport {
        a_over_b: cfg.a_over_b(),
        statement: "weights rational in the squared sidelengths give an elliptic locus".into(),
        support: total.support,
        violations: total.violations,
        undefined: total.undefined,
        by_family,
        rows,
    })
}
