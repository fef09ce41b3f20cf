//! Command-line driver: flag and config-file parsing, the verbs, and JSON or
//! CSV emission.
//!
//! Exit status is 0 on success, 1 when an identity or route check fails and 2
//! on usage, configuration or I/O errors. Output never contains timings or
//! other run-dependent data, so identical configurations give identical bytes.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::MSeries;
use crate::gf::{BoundaryKind, BoundarySpec, CylinderKind, GFResult, Gf};
use crate::oracle::{self, Census, Family, Limits};
use crate::par::{self, Exec};
use crate::report::SuiteReport;
use crate::slices::{self, solve_slice_system, Color, DegreeBounds};
use crate::walks::appendix::appendix_a_suite;
use crate::{gf, grand, Error, Result};

#[derive(Parser, Debug)]
#[command(name = "hyperslice", version, about = "Exact generating functions of planar hypermaps")]
pub struct Cli {
    #[command(flatten)]
    pub flags: Flags,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Flags {
    /// Largest white face degree.
    #[arg(long, global = true)]
    pub dw: Option<usize>,
    /// Largest black face degree.
    #[arg(long, global = true)]
    pub db: Option<usize>,
    /// Total degree kept in the weight variables (the s-order for walks).
    #[arg(long, global = true)]
    pub order: Option<u32>,
    /// Inverse powers kept in all-perimeter series (the u-range for walks).
    #[arg(long, global = true)]
    pub tail: Option<u32>,
    /// Largest first perimeter.
    #[arg(long, global = true)]
    pub p_max: Option<u32>,
    /// Largest second perimeter.
    #[arg(long, global = true)]
    pub q_max: Option<u32>,
    /// Edge budget of the map census.
    #[arg(long, global = true)]
    pub emax: Option<usize>,
    /// Boundary color of disks.
    #[arg(long, global = true, value_enum)]
    pub color: Option<ColorArg>,
    /// Cylinder family.
    #[arg(long, global = true, value_enum)]
    pub kind: Option<KindArg>,
    /// Suite run by `verify`.
    #[arg(long, global = true, value_enum)]
    pub suite: Option<SuiteArg>,
    /// Largest walk increment for the generic walk suite.
    #[arg(long, global = true)]
    pub max_step: Option<usize>,
    /// Write here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Flat `key=value` file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Disable the thread pool.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Verb {
    /// Solve the slice system.
    Solve,
    /// Monochromatic disks, all three routes required to agree.
    Disks,
    /// Cylinders of the selected kinds.
    Cylinders,
    /// Disks with a Dobrushin boundary.
    Dobrushin,
    /// Generic walk identities.
    Walks {
        #[command(subcommand)]
        cmd: WalksVerb,
    },
    /// Run verification suites.
    Verify,
    /// Brute-force counts of small hypermaps.
    Oracle,
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum WalksVerb {
    /// Excursion, arch, cycle lemma and factorization checks with generic step weights.
    VerifyAppendixA,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorArg {
    #[value(alias = "white")]
    W,
    #[value(alias = "black")]
    B,
    Both,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum KindArg {
    Ww,
    Bb,
    Wb,
    OneWay,
    TwoWayBw,
    All,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteArg {
    Slices,
    Gf,
    Grand,
    Oracle,
    Appendix,
    All,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Fully resolved configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub bounds: DegreeBounds,
    pub order: u32,
    pub tail: u32,
    pub p_max: u32,
    pub q_max: u32,
    pub emax: usize,
    pub colors: Vec<Color>,
    pub kinds: Vec<CylinderKind>,
    pub suite: SuiteArg,
    pub max_step: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub exec: Exec,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

fn parse_enum<T: ValueEnum>(key: &str, v: &str) -> Result<T> {
    T::from_str(v, true).map_err(|_| usage(format!("invalid value `{v}` for `{key}`")))
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| usage(format!("invalid value `{v}` for `{key}`")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(usage(format!("invalid value `{v}` for `{key}`"))),
    }
}

/// Reads `key=value` lines; `#` starts a comment, keys accept `-` or `_`.
pub fn parse_config(text: &str) -> Result<Flags> {
    let mut f = Flags::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| usage(format!("config line {}: expected key=value", i + 1)))?;
        let (k, v) = (k.trim().replace('_', "-"), v.trim());
        match k.as_str() {
            "dw" => f.dw = Some(parse_num(&k, v)?),
            "db" => f.db = Some(parse_num(&k, v)?),
            "order" => f.order = Some(parse_num(&k, v)?),
            "tail" => f.tail = Some(parse_num(&k, v)?),
            "p-max" => f.p_max = Some(parse_num(&k, v)?),
            "q-max" => f.q_max = Some(parse_num(&k, v)?),
            "emax" => f.emax = Some(parse_num(&k, v)?),
            "max-step" => f.max_step = Some(parse_num(&k, v)?),
            "color" => f.color = Some(parse_enum(&k, v)?),
            "kind" => f.kind = Some(parse_enum(&k, v)?),
            "suite" => f.suite = Some(parse_enum(&k, v)?),
            "format" => f.format = Some(parse_enum(&k, v)?),
            "out" => f.out = Some(PathBuf::from(v)),
            "sequential" => f.sequential = parse_bool(&k, v)?,
            _ => return Err(usage(format!("config line {}: unknown key `{k}`", i + 1))),
        }
    }
    Ok(f)
}

impl RunConfig {
    /// Flags over config file over defaults.
    pub fn resolve(flags: &Flags) -> Result<RunConfig> {
        let file = match &flags.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
                parse_config(&text)?
            }
            None => Flags::default(),
        };
        let dw = flags.dw.or(file.dw).unwrap_or(2);
        let db = flags.db.or(file.db).unwrap_or(2);
        let bounds = DegreeBounds::new(dw, db).map_err(|_| usage("--dw and --db must be at least 1"))?;
        let colors = match flags.color.or(file.color).unwrap_or(ColorArg::Both) {
            ColorArg::W => vec![Color::White],
            ColorArg::B => vec![Color::Black],
            ColorArg::Both => vec![Color::White, Color::Black],
        };
        let kinds = match flags.kind.or(file.kind).unwrap_or(KindArg::All) {
            KindArg::Ww => vec![CylinderKind::Ww],
            KindArg::Bb => vec![CylinderKind::Bb],
            KindArg::Wb => vec![CylinderKind::Wb],
            KindArg::OneWay => vec![CylinderKind::OneWay],
            KindArg::TwoWayBw => vec![CylinderKind::TwoWayBw],
            KindArg::All => CylinderKind::ALL.to_vec(),
        };
        let tail = flags.tail.or(file.tail).unwrap_or(6);
        if tail == 0 {
            return Err(usage("--tail must be at least 1"));
        }
        let max_step = flags.max_step.or(file.max_step).unwrap_or(2);
        if max_step == 0 {
            return Err(usage("--max-step must be at least 1"));
        }
        Ok(RunConfig {
            bounds,
            order: flags.order.or(file.order).unwrap_or(4),
            tail,
            p_max: flags.p_max.or(file.p_max).unwrap_or(3),
            q_max: flags.q_max.or(file.q_max).unwrap_or(3),
            emax: flags.emax.or(file.emax).unwrap_or(3),
            colors,
            kinds,
            suite: flags.suite.or(file.suite).unwrap_or(SuiteArg::All),
            max_step,
            out: flags.out.clone().or(file.out),
            format: flags.format.or(file.format).unwrap_or_default(),
            exec: if flags.sequential || file.sequential { Exec::Sequential } else { Exec::default_mode() },
        })
    }

    fn params(&self) -> Value {
        json!({
            "dw": self.bounds.white,
            "db": self.bounds.black,
            "order": self.order,
            "tail": self.tail,
            "p_max": self.p_max,
            "q_max": self.q_max,
            "emax": self.emax,
        })
    }
}

/// What a verb produced: the JSON document, the CSV table and the verdict.
#[derive(Clone, Debug)]
pub struct Emission {
    pub json: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub passed: bool,
}

const SERIES_HEADER: [&str; 7] = ["family", "colors", "degrees", "route", "monomial", "numerator", "denominator"];
const REPORT_HEADER: [&str; 7] = ["suite", "check", "passed", "location", "monomial", "left", "right"];

fn series_rows(family: &str, colors: &str, degrees: &str, route: &str, s: &MSeries) -> Vec<Vec<String>> {
    s.terms()
        .map(|(e, c)| {
            vec![
                family.into(),
                colors.into(),
                degrees.into(),
                route.into(),
                MSeries::format_monomial(s.vars(), e),
                c.numer().to_string(),
                c.denom().to_string(),
            ]
        })
        .collect()
}

fn color_code(c: Color) -> &'static str {
    match c {
        Color::White => "w",
        Color::Black => "b",
    }
}

fn result_rows(results: &[GFResult]) -> Vec<Vec<String>> {
    results
        .iter()
        .flat_map(|r| {
            let family = serde_json::to_value(r.spec.kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
            let colors: String = r.spec.colors.iter().map(|c| color_code(*c)).collect();
            let degrees = r.spec.degrees.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
            series_rows(&family, &colors, &degrees, &r.route, &r.value)
        })
        .collect()
}

fn results_emission(command: &str, cfg: &RunConfig, results: Vec<GFResult>) -> Result<Emission> {
    let rows = result_rows(&results);
    Ok(Emission {
        json: json!({ "command": command, "params": cfg.params(), "results": serde_json::to_value(&results)? }),
        header: SERIES_HEADER.to_vec(),
        rows,
        passed: true,
    })
}

fn reports_emission(cfg: &RunConfig, reports: Vec<SuiteReport>) -> Result<Emission> {
    let passed = reports.iter().all(SuiteReport::passed);
    let mut rows = Vec::new();
    for r in &reports {
        for c in &r.checks {
            let m = c.mismatch.clone().unwrap_or_else(|| crate::report::Mismatch {
                location: String::new(),
                monomial: String::new(),
                left: String::new(),
                right: String::new(),
            });
            rows.push(vec![r.suite.clone(), c.name.clone(), c.passed.to_string(), m.location, m.monomial, m.left, m.right]);
        }
    }
    Ok(Emission {
        json: json!({
            "command": "verify",
            "params": cfg.params(),
            "passed": passed,
            "suites": serde_json::to_value(&reports)?,
        }),
        header: REPORT_HEADER.to_vec(),
        rows,
        passed,
    })
}

/// Runs one suite.
pub fn run_suite(cfg: &RunConfig, suite: SuiteArg) -> Vec<SuiteReport> {
    let sol = || solve_slice_system(cfg.bounds, cfg.order);
    match suite {
        SuiteArg::Slices => vec![slices::verify(&sol())],
        SuiteArg::Gf => vec![gf::verify(&sol(), cfg.p_max)],
        SuiteArg::Grand => vec![grand::verify(cfg.bounds, cfg.order, cfg.tail, cfg.p_max, cfg.q_max)],
        SuiteArg::Oracle => vec![oracle::verify(cfg.emax, &[cfg.bounds], Limits::default())],
        SuiteArg::Appendix => vec![appendix_a_suite(cfg.max_step, cfg.order, cfg.tail as i32)],
        SuiteArg::All => [SuiteArg::Slices, SuiteArg::Gf, SuiteArg::Grand, SuiteArg::Oracle, SuiteArg::Appendix]
            .into_iter()
            .flat_map(|s| run_suite(cfg, s))
            .collect(),
    }
}

fn oracle_results(cfg: &RunConfig) -> Vec<GFResult> {
    let census = Census::new(cfg.emax);
    let entry = |kind: BoundaryKind, colors: Vec<Color>, degrees: Vec<u32>, fam: Family| GFResult {
        spec: BoundarySpec { kind, colors, degrees, girth: None },
        route: "oracle".into(),
        value: census.get(fam),
    };
    let mut out = Vec::new();
    for &c in &cfg.colors {
        for p in 0..=cfg.p_max {
            out.push(entry(BoundaryKind::Disk, vec![c], vec![p], Family::Disk(c, p)));
        }
        for p in 0..=cfg.p_max {
            out.push(entry(BoundaryKind::PointedDisk, vec![c], vec![p], Family::PointedDisk(c, p)));
        }
    }
    for &k in &cfg.kinds {
        let (a, b) = k.colors();
        let bk = if k == CylinderKind::OneWay { BoundaryKind::OneWayCylinder } else { BoundaryKind::Cylinder };
        for p in 1..=cfg.p_max {
            for q in 1..=cfg.q_max {
                out.push(entry(bk, vec![a, b], vec![p, q], Family::Cylinder(k, p, q)));
            }
        }
    }
    for p in 0..=cfg.p_max {
        for q in 0..=cfg.q_max {
            out.push(entry(BoundaryKind::Dobrushin, vec![Color::White, Color::Black], vec![p, q], Family::Dobrushin(p, q)));
        }
    }
    out
}

/// Executes a verb under a resolved configuration.
pub fn run(verb: &Verb, cfg: &RunConfig) -> Result<Emission> {
    par::with_mode(cfg.exec, || match verb {
        Verb::Solve => {
            let sol = solve_slice_system(cfg.bounds, cfg.order);
            let mut rows = Vec::new();
            for (name, len, get) in [
                ("a", cfg.bounds.black, &(|k| sol.a(k)) as &dyn Fn(i32) -> MSeries),
                ("b", cfg.bounds.white, &|k| sol.b(k)),
            ] {
                for k in -1..len as i32 {
                    rows.extend(series_rows(name, "", &k.to_string(), "slice_system", &get(k)));
                }
            }
            Ok(Emission {
                json: json!({ "command": "solve", "params": cfg.params(), "solution": serde_json::to_value(&sol)? }),
                header: SERIES_HEADER.to_vec(),
                rows,
                passed: true,
            })
        }
        Verb::Disks => {
            let sol = solve_slice_system(cfg.bounds, cfg.order);
            let gf = Gf::for_perimeters(&sol, cfg.p_max);
            let mut results = Vec::new();
            for &c in &cfg.colors {
                results.extend(gf.disk_table(c, cfg.p_max)?);
            }
            results_emission("disks", cfg, results)
        }
        Verb::Cylinders => {
            let sol = solve_slice_system(cfg.bounds, cfg.order);
            let gf = Gf::for_perimeters(&sol, cfg.p_max.max(cfg.q_max));
            let results = cfg.kinds.iter().flat_map(|&k| gf.cylinder_table(k, cfg.p_max, cfg.q_max)).collect();
            results_emission("cylinders", cfg, results)
        }
        Verb::Dobrushin => {
            let sol = solve_slice_system(cfg.bounds, cfg.order);
            let gf = Gf::new(&sol, cfg.p_max.max(cfg.q_max) + 1);
            results_emission("dobrushin", cfg, gf.dobrushin(cfg.p_max, cfg.q_max)?.table())
        }
        Verb::Walks { cmd: WalksVerb::VerifyAppendixA } => {
            reports_emission(cfg, run_suite(cfg, SuiteArg::Appendix))
        }
        Verb::Verify => reports_emission(cfg, run_suite(cfg, cfg.suite)),
        Verb::Oracle => results_emission("oracle", cfg, oracle_results(cfg)),
    })
}

/// Serializes an emission in the configured format.
pub fn render(e: &Emission, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut v = serde_json::to_vec_pretty(&e.json)?;
            v.push(b'\n');
            Ok(v)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
            w.write_record(&e.header).map_err(csv_err)?;
            for r in &e.rows {
                w.write_record(r).map_err(csv_err)?;
            }
            w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
        }
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::RouteMismatch { .. } => 1,
        _ => 2,
    }
}

/// Parses `args` (program name first), runs and writes the output. Returns
/// the exit status.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    let outcome = RunConfig::resolve(&cli.flags).and_then(|cfg| {
        let em = run(&cli.verb, &cfg)?;
        let bytes = render(&em, cfg.format)?;
        match &cfg.out {
            Some(path) => fs::write(path, &bytes)?,
            None => stdout.write_all(&bytes)?,
        }
        Ok(em.passed)
    });
    match outcome {
        Ok(true) => 0,
        Ok(false) => {
            let _ = writeln!(stderr, "verification failed");
            1
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["hyperslice"];
        full.extend_from_slice(args);
        let code = main_with(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn solve_emits_the_slice_series() {
        let (code, out, _) = call(&["solve", "--dw", "2", "--db", "2", "--order", "3"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        let sol: slices::SliceSolution = serde_json::from_value(v["solution"].clone()).unwrap();
        assert_eq!(sol.b(-1), MSeries::one(sol.vars()));
        assert_eq!(sol.a(-1).truncate(1), sol.weights().t().truncate(1));
    }

    #[test]
    fn first_white_disk_is_t() {
        let (code, out, _) = call(&["disks", "--color", "w", "--p-max", "0", "--dw", "1", "--db", "1", "--order", "1", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().nth(1), Some("disk,w,0,compact=expanded=appendix_b,t,1,1"));
    }

    #[test]
    fn usage_errors_exit_with_two() {
        assert_eq!(call(&["solve", "--dw", "0"]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["verify", "--suite", "nope"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn config_file_is_overridden_by_flags() {
        let f = parse_config("# bounds\ndw = 3\ndb=1\np_max=2\nformat=csv\n").unwrap();
        assert_eq!((f.dw, f.db, f.p_max, f.format), (Some(3), Some(1), Some(2), Some(Format::Csv)));
        assert!(parse_config("colour=w").is_err());
        assert!(parse_config("dw").is_err());

        let dir = std::env::temp_dir().join(format!("hyperslice-cli-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        fs::write(&path, "dw=3\ndb=3\norder=2\n").unwrap();
        let flags = Flags { config: Some(path.clone()), db: Some(1), ..Flags::default() };
        let cfg = RunConfig::resolve(&flags).unwrap();
        assert_eq!((cfg.bounds.white, cfg.bounds.black, cfg.order), (3, 1, 2));
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn verify_is_deterministic() {
        let args = ["verify", "--suite", "grand", "--order", "3", "--tail", "3", "--p-max", "2", "--q-max", "2"];
        let (c1, a, _) = call(&args);
        let (c2, b, _) = call(&args);
        assert_eq!((c1, c2), (0, 0));
        assert_eq!(a, b);
        let seq: Vec<&str> = args.iter().copied().chain(["--sequential"]).collect();
        assert_eq!(call(&seq).1, a);
    }
}
