//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails or exceeds its time budget.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;

use hyperslice::algebra::{rat, MSeries, VarSet};
use hyperslice::gf::{self, DiskRoute, Gf};
use hyperslice::oracle::{self, Limits};
use hyperslice::report::SuiteReport;
use hyperslice::slices::{self, solve_slice_system, Color, DegreeBounds, SliceSolution};
use hyperslice::walks::appendix::appendix_a_suite;
use hyperslice::{cli, grand};

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn pass(detail: impl Into<String>) -> Outcome {
        Outcome { passed: true, detail: detail.into() }
    }

    fn fail(detail: impl Into<String>) -> Outcome {
        Outcome { passed: false, detail: detail.into() }
    }
}

fn bounds(w: usize, b: usize) -> DegreeBounds {
    DegreeBounds::new(w, b).expect("positive degrees")
}

fn all_bounds() -> Vec<DegreeBounds> {
    (1..=3).flat_map(|w| (1..=3).map(move |b| bounds(w, b))).collect()
}

fn tag(b: DegreeBounds) -> String {
    format!("({},{})", b.white, b.black)
}

fn first_failure(reports: &[SuiteReport]) -> Option<String> {
    reports.iter().find_map(|r| {
        r.failures().next().map(|c| {
            let m = c.mismatch.as_ref().map(|m| format!(" at {} {}: {} vs {}", m.location, m.monomial, m.left, m.right));
            format!("{} {:?}: {}{}", r.suite, r.params, c.name, m.unwrap_or_default())
        })
    })
}

fn summarize(reports: &[SuiteReport]) -> Outcome {
    let checks: usize = reports.iter().map(|r| r.checks.len()).sum();
    match first_failure(reports) {
        None => Outcome::pass(format!("{} reports, {checks} checks", reports.len())),
        Some(f) => Outcome::fail(f),
    }
}

fn slice_system() -> Outcome {
    for b in all_bounds() {
        let sol = solve_slice_system(b, 5);
        if let Some(m) = slices::residual(&sol) {
            return Outcome::fail(format!("{}: back-substitution {} at {}", tag(b), m.location, m.monomial));
        }
        if sol.b(-1) != MSeries::one(sol.vars()) {
            return Outcome::fail(format!("{}: b[-1] != 1", tag(b)));
        }
        if !slices::check_alternative(&sol) {
            return Outcome::fail(format!("{}: alternative relation", tag(b)));
        }
    }
    Outcome::pass("9 degree bounds at N=5")
}

/// `c · Σ_k m^k` written out monomial by monomial, truncated at `order`.
fn geometric_times(vars: &Arc<VarSet>, c: &[(&str, i64)], m: &[&str], order: u32) -> MSeries {
    let mut terms = Vec::new();
    for k in 0..=order as u16 {
        for &(name, coeff) in c {
            let mut e = vec![0u16; vars.len()];
            for n in m {
                e[vars.index_of(n).unwrap()] += k;
            }
            if !name.is_empty() {
                for part in name.split('*') {
                    e[vars.index_of(part).unwrap()] += 1;
                }
            }
            terms.push((e, rat(coeff)));
        }
    }
    MSeries::from_terms(vars, terms)
}

fn closed_forms() -> Outcome {
    let n = 8;
    let sol = solve_slice_system(bounds(2, 2), n);
    let v = sol.vars();
    let w = sol.weights();
    let (tw1, tw2, tb2) = (w.white(1).unwrap(), w.white(2).unwrap(), w.black(2).unwrap());
    let am1 = geometric_times(v, &[("t", 1)], &["tw2", "tb2"], n);
    let a0 = geometric_times(v, &[("tb1", 1), ("tb2*tw1", 1)], &["tw2", "tb2"], n);
    let b0 = &tw1 + &(&tw2 * &a0);
    let b1 = &tw2 * &am1;
    let cases = [
        ("a[-1]", sol.a(-1), am1.clone()),
        ("a[0]", sol.a(0), a0),
        ("a[1]", sol.a(1), tb2.clone()),
        ("b[0]", sol.b(0), b0),
        ("b[1]", sol.b(1), b1),
        ("a[-1](1 - tw2 tb2)", &sol.a(-1) - &(&(&sol.a(-1) * &tw2) * &tb2), w.t()),
    ];
    for (name, got, want) in cases {
        if got != want {
            return Outcome::fail(format!("{name} differs from its closed form"));
        }
    }
    Outcome::pass("a[-1], a[0], a[1], b[0], b[1] exact to order 8")
}

fn kakbk_sign() -> Outcome {
    let mut plus_form = false;
    let mut runs = 0;
    let cases = all_bounds().into_iter().map(|b| (b, 5)).chain([(bounds(2, 2), 8)]);
    for (b, n) in cases {
        let sol = solve_slice_system(b, n);
        let t = sol.weights().t();
        let kk = sol.kakbk();
        plus_form |= kk == t;
        if kk != -&t {
            return Outcome::fail(format!("{} N={n}: sum k a_k b_k != -t", tag(b)));
        }
        let gf = Gf::for_perimeters(&sol, 0);
        for c in [Color::White, Color::Black] {
            if gf.disk(c, 0, DiskRoute::Compact) != t {
                return Outcome::fail(format!("{} N={n}: F_0 ({c:?}) != t", tag(b)));
            }
        }
        runs += 1;
    }
    Outcome::pass(format!(
        "sum k a_k b_k = -t and F_0 = t on {runs} runs; +t form holds: {plus_form}"
    ))
}

fn disk_routes() -> Outcome {
    let mut cells = 0;
    for b in all_bounds() {
        let sol = solve_slice_system(b, 5);
        let gf = Gf::for_perimeters(&sol, 5);
        for c in [Color::White, Color::Black] {
            for p in 0..=5 {
                if let Err(e) = gf.disk_checked(c, p) {
                    return Outcome::fail(format!("{}: {e}", tag(b)));
                }
                cells += 1;
            }
        }
    }
    Outcome::pass(format!("{cells} disks agree by compact, expanded and appendix_b routes"))
}

fn cylinder_suite() -> Outcome {
    let reports: Vec<SuiteReport> = all_bounds().into_iter().map(|b| gf::verify(&solve_slice_system(b, 5), 4)).collect();
    summarize(&reports)
}

fn oracle_equivalence() -> Outcome {
    let mut out = summarize(&[oracle::verify(4, &all_bounds(), Limits::default())]);
    // The stretch budget is reported without affecting the verdict.
    let start = Instant::now();
    let stretch = summarize(&[oracle::verify(5, &all_bounds(), Limits::default())]);
    let verdict = if stretch.passed { "pass" } else { "fail" };
    out.detail.push_str(&format!("; stretch E_max=5: {verdict} in {:.2}s", start.elapsed().as_secs_f64()));
    if !stretch.passed {
        out.detail.push_str(&format!(" ({})", stretch.detail));
    }
    out
}

fn quadrangulations() -> Outcome {
    let expected = [2, 9, 54].map(BigInt::from);
    let closed: Vec<BigInt> = (1..=3).map(oracle::quadrangulations_closed_form).collect();
    let enumerated: Vec<BigInt> = (1..=3).map(|n| BigInt::from(oracle::quadrangulations(n))).collect();
    let disks = oracle::quadrangulations_from_disks(3);
    for (name, got) in [("closed form", &closed), ("oracle", &enumerated), ("disk series", &disks)] {
        if got[..] != expected[..] {
            return Outcome::fail(format!("{name} gives {got:?}"));
        }
    }
    Outcome::pass("2, 9, 54 from oracle, disk series and closed form")
}

fn appendix_a() -> Outcome {
    let reports: Vec<SuiteReport> = (1..=3).map(|d| appendix_a_suite(d, 6, 6)).collect();
    summarize(&reports)
}

fn grand_suite() -> Outcome {
    let reports: Vec<SuiteReport> =
        [(1, 1), (1, 2), (2, 1), (2, 2)].iter().map(|&(w, b)| grand::verify(bounds(w, b), 4, 6, 3, 3)).collect();
    let clearing = reports
        .iter()
        .flat_map(|r| &r.checks)
        .find(|c| c.name == "parametrization_y_of_x")
        .and_then(|c| c.notes.get("clearing_exponent").cloned());
    let mut out = summarize(&reports);
    if let Some(e) = clearing {
        out.detail.push_str(&format!("; clearing exponent {e}"));
    }
    out
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::main_with(std::iter::once("hyperslice").chain(args.iter().copied()), &mut out, &mut err);
    (code, out)
}

fn determinism() -> Outcome {
    let (c1, first) = run_cli(&["verify", "--suite", "all"]);
    let (c2, second) = run_cli(&["verify", "--suite", "all"]);
    if c1 != 0 || c2 != 0 {
        return Outcome::fail(format!("verify exited with {c1} and {c2}"));
    }
    if first != second {
        return Outcome::fail("two runs differ");
    }
    let doc: serde_json::Value = match serde_json::from_slice(&first) {
        Ok(v) => v,
        Err(e) => return Outcome::fail(format!("output is not JSON: {e}")),
    };
    let reports: Vec<SuiteReport> = match serde_json::from_value(doc["suites"].clone()) {
        Ok(r) => r,
        Err(e) => return Outcome::fail(format!("reports do not parse: {e}")),
    };
    if serde_json::to_value(&reports).ok() != Some(doc["suites"].clone()) {
        return Outcome::fail("reports change after a JSON round trip");
    }
    let sol = solve_slice_system(bounds(3, 2), 5);
    let back: Option<SliceSolution> = serde_json::to_string(&sol).ok().and_then(|s| serde_json::from_str(&s).ok());
    if back.as_ref() != Some(&sol) {
        return Outcome::fail("slice solution changes after a JSON round trip");
    }
    Outcome::pass(format!("{} identical bytes over two runs, reports and solution round-trip", first.len()))
}

type Criterion = (&'static str, Duration, fn() -> Outcome);

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria: [Criterion; 10] = [
        ("slice system exactness", secs(30), slice_system),
        ("closed forms at (2,2)", secs(5), closed_forms),
        ("sum k a_k b_k = -t", secs(60), kakbk_sign),
        ("three disk routes", secs(60), disk_routes),
        ("cylinder suite", secs(300), cylinder_suite),
        ("oracle equivalence", secs(600), oracle_equivalence),
        ("quadrangulations", secs(120), quadrangulations),
        ("walk identities", secs(60), appendix_a),
        ("all-perimeter identities", secs(300), grand_suite),
        ("determinism and serialization", secs(300), determinism),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut out = run();
        let elapsed = start.elapsed();
        if elapsed > *budget {
            out.passed = false;
            out.detail.push_str(&format!("; over budget of {}s", budget.as_secs()));
        }
        let status = if out.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status} [{name}] {:.2}s: {}", i + 1, elapsed.as_secs_f64(), out.detail);
        failed += usize::from(!out.passed);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
