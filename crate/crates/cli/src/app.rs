use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use poncelet_core::centers::CenterTable;
use poncelet_core::families::{self, Family};
use poncelet_core::locus::{self, LocusTrace};
use poncelet_core::{Error, PlaneComplex};

use crate::config::{parse_centers, parse_grid, ConfigPatch, OutputFormat, RunConfig};
use crate::error::CliError;
use crate::output::{self, fmt_g, resolve_sink, Sink, SvgCurve};
use crate::report::{self, Suite};

#[derive(Debug, Parser)]
#[command(name = "poncelet", version, about = "Trace, classify and verify triangle-center loci over Poncelet families")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct GlobalArgs {
    /// confocal, incircle, circumcircle, homothetic, excentral or dual
    #[arg(long, global = true)]
    pub family: Option<String>,
    /// Aspect ratio a/b with b = 1
    #[arg(long, global = true, conflicts_with_all = ["a", "b"])]
    pub ab: Option<f64>,
    #[arg(long, global = true)]
    pub a: Option<f64>,
    #[arg(long, global = true)]
    pub b: Option<f64>,
    #[arg(long, global = true, conflicts_with = "centers")]
    pub center: Option<String>,
    /// List or range, e.g. `1..200` or `1,2,5`
    #[arg(long, global = true)]
    pub centers: Option<String>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub circle_tol: Option<f64>,
    #[arg(long, global = true)]
    pub degen_tol: Option<f64>,
    #[arg(long, global = true)]
    pub fit_tol: Option<f64>,
    /// csv, json or svg
    #[arg(long, global = true)]
    pub format: Option<String>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub ab_grid: Option<String>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Centers whose fixture mismatches do not fail a scan
    #[arg(long, global = true)]
    pub waive: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the locus of each requested center
    Trace,
    /// Classify loci and compare them with the bundled fixtures
    Scan,
    /// Run one invariant suite
    Verify {
        #[arg(long)]
        suite: String,
    },
    /// Search for a caustic over which a center stays put
    FindCaustic {
        #[arg(long)]
        stationary: u32,
    },
    /// Observed locus kinds of squared-rational centers in every family
    Conjecture,
}

impl GlobalArgs {
    fn patch(&self) -> Result<ConfigPatch, CliError> {
        let usage = CliError::Usage;
        Ok(ConfigPatch {
            family: self
                .family
                .as_deref()
                .map(str::parse::<Family>)
                .transpose()
                .map_err(|e| usage(e.to_string()))?,
            a: self.a,
            b: self.b,
            a_over_b: self.ab,
            centers: self
                .center
                .as_deref()
                .or(self.centers.as_deref())
                .map(parse_centers)
                .transpose()
                .map_err(usage)?,
            samples: self.samples,
            tol: self.tol,
            circle_tol: self.circle_tol,
            degen_tol: self.degen_tol,
            fit_tol: self.fit_tol,
            format: self
                .format
                .as_deref()
                .map(str::parse::<OutputFormat>)
                .transpose()
                .map_err(usage)?,
            out: self.out.clone(),
            seed: self.seed,
            ab_grid: self.ab_grid.as_deref().map(parse_grid).transpose().map_err(usage)?,
            waive: self.waive.as_deref().map(parse_centers).transpose().map_err(usage)?,
            threads: self.threads,
        })
    }

    /// Defaults, then the config file, then flags.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
                ConfigPatch::parse(&text).map_err(|source| CliError::Config {
                    path: path.display().to_string(),
                    source,
                })?
            }
            None => ConfigPatch::default(),
        };
        RunConfig::from_patch(file.merge(self.patch()?))
    }
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    64
                }
            };
        }
    };
    let env_dir = std::env::var(output::OUT_DIR_ENV).ok();
    match execute(&cli, env_dir.as_deref(), stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli, env_dir: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = cli.global.resolve()?;
    let sink = resolve_sink(cfg.out.as_deref(), env_dir);
    match &cli.command {
        Command::Trace => trace(&cfg, &sink, stdout, stderr),
        Command::Scan => {
            json_only(&cfg)?;
            let rep = report::scan(&cfg)?;
            emit(&sink, &format!("{}_scan.json", rep.family), &to_json(&rep)?, stdout, stderr)?;
            let _ = writeln!(
                stderr,
                "{} a/b={}: {} match, {} mismatch ({} waived), {} untested",
                rep.family,
                fmt_g(rep.a_over_b, 15),
                rep.matched,
                rep.mismatched,
                rep.waived,
                rep.untested
            );
            for c in rep.centers.iter().filter(|c| c.diagnostic.is_some() && c.matches_appendix == report::Match::No) {
                let _ = writeln!(stderr, "X{}: {}", c.k, c.diagnostic.as_deref().unwrap_or(""));
            }
            Ok(if rep.failures() > 0 { 1 } else { 0 })
        }
        Command::Verify { suite } => {
            json_only(&cfg)?;
            let suite: Suite = suite.parse()?;
            let rep = report::verify(&cfg, suite)?;
            emit(&sink, &format!("verify_{}.json", rep.suite), &to_json(&rep)?, stdout, stderr)?;
            for c in rep.checks.iter().filter(|c| c.status != report::Status::Pass) {
                let tag = if c.status == report::Status::Fail { "FAIL" } else { "WARN" };
                let _ = writeln!(stderr, "{tag} {}: {}", c.name, c.detail.as_deref().unwrap_or(""));
            }
            let _ = writeln!(
                stderr,
                "{}: {} passed, {} failed, {} warnings",
                rep.suite, rep.passed, rep.failed, rep.warnings
            );
            Ok(if rep.failed > 0 { 1 } else { 0 })
        }
        Command::FindCaustic { stationary } => {
            let rep = report::find_caustic(&cfg, *stationary)?;
            let body = match cfg.format {
                Some(OutputFormat::Json) => to_json(&rep)?,
                None => rep.to_text(),
                Some(f) => return Err(CliError::Usage(format!("find-caustic cannot write {}", f.extension()))),
            };
            emit(&sink, &format!("caustic_X{stationary}.txt"), &body, stdout, stderr)?;
            Ok(0)
        }
        Command::Conjecture => {
            json_only(&cfg)?;
            let rep = report::conjecture(&cfg)?;
            emit(&sink, "conjecture.json", &to_json(&rep)?, stdout, stderr)?;
            let _ = writeln!(
                stderr,
                "conjecture: {} supporting, {} violating, {} undefined cells",
                rep.support, rep.violations, rep.undefined
            );
            Ok(0)
        }
    }
}

fn json_only(cfg: &RunConfig) -> Result<(), CliError> {
    match cfg.format {
        None | Some(OutputFormat::Json) => Ok(()),
        Some(f) => Err(CliError::Usage(format!("this command writes json, not {}", f.extension()))),
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn emit(sink: &Sink, default_name: &str, body: &str, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match sink {
        Sink::Stdout => {
            stdout.write_all(body.as_bytes())?;
            Ok(())
        }
        Sink::File(p) => write_file(p, body, stderr),
        Sink::Dir(d) => write_file(&d.join(default_name), body, stderr),
    }
}

fn write_file(p: &Path, body: &str, stderr: &mut dyn Write) -> Result<(), CliError> {
    output::write_atomic(p, body.as_bytes())?;
    let _ = writeln!(stderr, "wrote {}", p.display());
    Ok(())
}

#[derive(Serialize)]
struct TraceJson<'a> {
    family: &'a str,
    a: f64,
    b: f64,
    samples: usize,
    traces: Vec<TraceEntry>,
}

#[derive(Serialize)]
struct TraceEntry {
    k: u32,
    skipped: Vec<usize>,
    rows: Vec<[f64; 3]>,
}

fn trace(cfg: &RunConfig, sink: &Sink, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    if cfg.centers.is_empty() {
        return Err(CliError::Usage("trace needs --center or --centers".into()));
    }
    let format = cfg.format.unwrap_or(OutputFormat::Csv);
    if format == OutputFormat::Csv && cfg.centers.len() > 1 && !matches!(sink, Sink::Dir(_)) {
        return Err(CliError::Usage(format!(
            "csv output for several centers needs --out DIR or {}",
            output::OUT_DIR_ENV
        )));
    }
    let pair = report::pair_for(cfg.family, cfg.a, cfg.b)?;
    let table = CenterTable::builtin();
    let traces: Vec<LocusTrace> = cfg
        .centers
        .iter()
        .map(|&k| {
            locus::trace_locus_in(table, &pair, k, cfg.samples).map_err(|e| match e {
                Error::MissingCenter(k) => CliError::Usage(format!("unknown center X{k}")),
                other => CliError::Engine(other),
            })
        })
        .collect::<Result<_, _>>()?;
    for t in traces.iter().filter(|t| !t.skipped.is_empty()) {
        let _ = writeln!(stderr, "X{}: {} samples undefined and skipped", t.k, t.skipped.len());
    }
    let fam = cfg.family.as_str();
    let joined = cfg.centers.iter().map(|k| format!("X{k}")).collect::<Vec<_>>().join("-");
    match format {
        OutputFormat::Csv => {
            for t in &traces {
                emit(sink, &format!("{fam}_X{}.csv", t.k), &output::locus_csv(&t.samples), stdout, stderr)?;
            }
        }
        OutputFormat::Json => {
            let doc = TraceJson {
                family: fam,
                a: cfg.a,
                b: cfg.b,
                samples: cfg.samples,
                traces: traces
                    .iter()
                    .map(|t| TraceEntry {
                        k: t.k,
                        skipped: t.skipped.clone(),
                        rows: t.samples.iter().map(|(l, p)| [l.arg(), p.re, p.im]).collect(),
                    })
                    .collect(),
            };
            emit(sink, &format!("{fam}_{joined}.json"), &to_json(&doc)?, stdout, stderr)?;
        }
        OutputFormat::Svg => {
            let pts: Vec<Vec<PlaneComplex>> = traces.iter().map(LocusTrace::points).collect();
            let curves: Vec<SvgCurve<'_>> = traces
                .iter()
                .zip(&pts)
                .map(|(t, p)| SvgCurve {
                    label: format!("X{}", t.k),
                    points: p,
                })
                .collect();
            let tri = families::triangle_at(&pair, PlaneComplex::from_polar(1.0, 0.3)).ok().map(|t| t.vertices);
            emit(sink, &format!("{fam}_{joined}.svg"), &output::scene_svg(&pair, &curves, tri), stdout, stderr)?;
        }
    }
    Ok(0)
}
