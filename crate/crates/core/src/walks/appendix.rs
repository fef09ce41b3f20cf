//! Generic-weight identities for skip-free walks with steps `-1..=d` and
//! weights `p_{-1}, .., p_d`, each step also weighted by `s`.
//!
//! Series in `s` are stored as [`InvTail`]s in the variable `s` with the
//! coefficient of `s^l` at exponent `-l`, so the tail machinery (truncation,
//! log, geometric series) applies unchanged.

use std::sync::Arc;


use super::{excursion_tail, walk_count_interior, StepWeights};
use crate::algebra::{frac, BiTail, InvTail, MSeries, VarSet};
use crate::report::{compare_bitails, compare_series, compare_tails, Check, Mismatch, SuiteReport};

/// Series computed for one instance of the suite.
pub struct ArchSeries {
    pub vars: Arc<VarSet>,
    pub s_order: u32,
    pub weights: StepWeights,
    /// Excursions `U(s)`.
    pub u: InvTail,
    /// Strict arches `A_h^>(s)`, `h = 0..=d`.
    pub strict: Vec<InvTail>,
    /// Arches `A_h^≥(s)`, `h = 0..=d`.
    pub arches: Vec<InvTail>,
}

fn s_one(vars: &Arc<VarSet>) -> InvTail {
    InvTail::constant(MSeries::one(vars), "s")
}

/// The series `s`.
fn s_var(vars: &Arc<VarSet>) -> InvTail {
    InvTail::polynomial(vars, "s", [(-1, MSeries::one(vars))])
}

/// `d/ds` in the `s^l ↔ exponent -l` encoding.
fn s_derivative(t: &InvTail) -> InvTail {
    InvTail::from_coeffs(
        t.vars(),
        "s",
        t.top() + 1,
        t.floor().map(|f| f + 1),
        t.iter().filter(|(e, _)| *e < 0).map(|(e, c)| (e + 1, c.scale_int(-e as i64))),
    )
}

impl ArchSeries {
    /// `U` from its fixed-point equation, then `A_h^> = s Σ_{j≥h} p_j U^{j-h}`,
    /// `A_0^≥ = 1/(1-A_0^>)` and `A_h^≥ = A_h^> A_0^≥`.
    pub fn new(d: usize, s_order: u32) -> ArchSeries {
        let vars = VarSet::walk_weights(d, s_order);
        let weights = StepWeights::generic(&vars);
        let floor = -(s_order as i32);
        let u = excursion_tail(&weights, "s", s_order);
        let s = s_var(&vars);
        let powers: Vec<InvTail> = (0..=d as u32).map(|k| u.pow(k).truncate(floor)).collect();
        let strict: Vec<InvTail> = (0..=d as i32)
            .map(|h| {
                let mut acc = InvTail::with_order(&vars, "s", s_order, []);
                for j in h..=d as i32 {
                    acc = acc.add(&powers[(j - h) as usize].scale(&weights.weight(j)));
                }
                acc.mul(&s).truncate(floor)
            })
            .collect();
        let a0 = s_one(&vars).add(&strict[0].geometric().expect("A_0^> has no constant term"));
        let arches = std::iter::once(a0.clone())
            .chain(strict[1..].iter().map(|a| a.mul(&a0).truncate(floor)))
            .collect();
        ArchSeries { vars, s_order, weights, u, strict, arches }
    }

    fn d(&self) -> i32 {
        self.weights.d()
    }

    fn floor(&self) -> i32 {
        -(self.s_order as i32)
    }

    /// Direct position-by-position count of an arch family, as an `s`-series.
    fn counted(&self, tilt: i32, strict: bool) -> InvTail {
        let coeffs = (0..=self.s_order).filter_map(|l| {
            if strict && l == 0 {
                return None;
            }
            let lower = if strict { tilt + 1 } else { tilt };
            Some((-(l as i32), walk_count_interior(&self.weights, l, tilt, lower)))
        });
        InvTail::with_order(&self.vars, "s", self.s_order, coeffs)
    }

    /// `1 - sP(u)` as a series in `s` and `u` (`u` exponents `-1..=d`).
    fn kernel(&self) -> BiTail {
        let mut coeffs = vec![((0, 0), MSeries::one(&self.vars))];
        for j in -1..=self.d() {
            coeffs.push(((-1, j), -&self.weights.weight(j)));
        }
        self.su(coeffs, self.d())
    }

    fn su(&self, coeffs: Vec<((i32, i32), MSeries)>, u_top: i32) -> BiTail {
        BiTail::from_coeffs(&self.vars, ("s", "u"), (0, u_top), (Some(self.floor()), None), coeffs)
    }

    fn lift(&self, t: &InvTail, u_exp: i32) -> Vec<((i32, i32), MSeries)> {
        t.iter().map(|(e, c)| ((e, u_exp), c.clone())).collect()
    }
}

fn compare_u_window(left: &BiTail, right: &BiTail, u_range: (i32, i32), s_floor: i32) -> Option<Mismatch> {
    for ue in u_range.0..=u_range.1 {
        for se in (s_floor..=0).rev() {
            let loc = format!("s^{} u^{ue}", -se);
            if let Some(m) = compare_series(&loc, &left.coeff((se, ue)), &right.coeff((se, ue))) {
                return Some(m);
            }
        }
    }
    None
}

/// Runs the generic suite with walk steps up to `d`, series in `s` up to
/// `s^{s_order}` and `u` exponents in `[-1, u_range]`.
pub fn appendix_a_suite(d: usize, s_order: u32, u_range: i32) -> SuiteReport {
    let a = ArchSeries::new(d, s_order);
    let vars = &a.vars;
    let floor = a.floor();
    let one = s_one(vars);
    let s = s_var(vars);
    let mut checks = Vec::new();

    // U = s Σ_j p_j U^{j+1}, the form of 1 = sP(U) multiplied by U.
    let mut rhs = InvTail::with_order(vars, "s", s_order, []);
    for j in -1..=a.d() {
        rhs = rhs.add(&a.u.pow((j + 1) as u32).scale(&a.weights.weight(j)));
    }
    let rhs = rhs.mul(&s).truncate(floor);
    checks.push(Check::new("excursion_equation", compare_tails(&a.u, &rhs).0));

    // Excursions and arches against direct counts.
    let excursions = InvTail::with_order(
        vars,
        "s",
        s_order,
        (1..=s_order).map(|l| (-(l as i32), walk_count_interior(&a.weights, l, -1, 0))),
    );
    checks.push(Check::new("excursions_counted", compare_tails(&a.u, &excursions).0));
    let mut strict_ok = None;
    let mut arch_ok = None;
    for h in 0..=a.d() {
        strict_ok = strict_ok.or(compare_tails(&a.strict[h as usize], &a.counted(h, true)).0);
        arch_ok = arch_ok.or(compare_tails(&a.arches[h as usize], &a.counted(h, false)).0);
    }
    checks.push(Check::new("strict_arches_counted", strict_ok));
    checks.push(Check::new("arches_counted", arch_ok));

    // U (1 - A_0^>) = s p_{-1}.
    let lhs = a.u.mul(&one.sub(&a.strict[0])).truncate(floor);
    let rhs = s.scale(&a.weights.weight(-1)).truncate(floor);
    checks.push(Check::new("excursion_from_arches", compare_tails(&lhs, &rhs).0));

    // Cycle lemma: [s^l] U^k = (k/l) [u^{-k}] P^l.
    let p_u = a.weights.laurent("u");
    let p_pows = p_u.powers(s_order);
    let mut cycle = None;
    'outer: for k in 1..=s_order {
        let uk = a.u.pow(k).truncate(floor);
        for l in 1..=s_order {
            let left = uk.coeff(-(l as i32));
            let right = p_pows[l as usize].coeff(-(k as i32)).scale(&frac(k as i64, l as i64));
            if let Some(m) = compare_series(&format!("[s^{l}] U^{k}"), &left, &right) {
                cycle = Some(m);
                break 'outer;
            }
        }
    }
    checks.push(Check::new("cycle_lemma", cycle));

    // Σ_l P_{l,-k} s^l = s U^{k-1} U'(s).
    let du = s_derivative(&a.u);
    let mut pexc = None;
    for k in 1..=s_order {
        let right = s.mul(&a.u.pow(k - 1)).mul(&du).truncate(floor);
        let left = InvTail::with_order(vars, "s", s_order, (0..=s_order).map(|l| (-(l as i32), p_pows[l as usize].coeff(-(k as i32)))));
        if let (Some(m), _) = compare_tails(&left, &right) {
            pexc = Some(Mismatch { location: format!("k={k}, {}", m.location), ..m });
            break;
        }
    }
    checks.push(Check::new("walks_to_negative_positions", pexc));

    // Both lines of the factorization of 1 - sP(u).
    let kernel = a.kernel();
    let mut f1 = vec![((0, 0), MSeries::one(vars))];
    f1.extend(a.lift(&a.u.neg(), -1));
    let f1 = a.su(f1, 0);
    let mut f2 = vec![((0, 0), MSeries::one(vars))];
    for h in 0..=a.d() {
        f2.extend(a.lift(&a.strict[h as usize].neg(), h));
    }
    let f2 = a.su(f2, a.d());
    let line1 = f1.mul(&f2);
    checks.push(Check::new("factorization_strict_arches", compare_u_window(&kernel, &line1, (-1, u_range), floor)));

    // U (1 - sP(u)) = s p_{-1} (1 - U/u)(1 - Σ_{h>0} A_h^≥ u^h).
    let mut f3 = vec![((0, 0), MSeries::one(vars))];
    for h in 1..=a.d() {
        f3.extend(a.lift(&a.arches[h as usize].neg(), h));
    }
    let f3 = a.su(f3, a.d());
    let lhs = a.su(a.lift(&a.u, 0), 0).mul(&kernel);
    let sp = a.su(a.lift(&s.scale(&a.weights.weight(-1)), 0), 0);
    let line2 = sp.mul(&f1).mul(&f3);
    checks.push(Check::new("factorization_arches", compare_u_window(&lhs, &line2, (-1, u_range), floor)));

    // Σ_l P_{l,0} s^l / l = ln(U/(s p_{-1})) = -ln(1 - A_0^>), and
    // Σ_l P_{l,-h} s^l / l = U^h / h.
    let log_left = |h: i32| {
        InvTail::with_order(
            vars,
            "s",
            s_order,
            (1..=s_order).map(|l| (-(l as i32), p_pows[l as usize].coeff(h).scale(&frac(1, l as i64)))),
        )
    };
    let mut logs = compare_tails(&log_left(0), &a.strict[0].neg().log1p().expect("no constant").neg()).0;
    for h in 1..=s_order as i32 {
        let right = a.u.pow(h as u32).truncate(floor).scale_q(&frac(1, h as i64));
        logs = logs.or(compare_tails(&log_left(-h), &right).0);
    }
    checks.push(Check::new("log_series", logs));

    // Σ_{h≥1} Σ_l P_{l,h} s^l u^h / l = -ln(1 - Σ_{h>0} A_h^≥ u^h), with u
    // encoded as an inverse variable so the log applies.
    if u_range >= 1 {
        let v = BiTail::with_orders(
            vars,
            ("s", "ubar"),
            (s_order, u_range as u32),
            (1..=a.d().min(u_range)).flat_map(|h| a.arches[h as usize].iter().map(move |(e, c)| ((e, -h), c.clone())).collect::<Vec<_>>()),
        );
        let right = v.neg().log1p().expect("no constant").neg();
        let left = BiTail::with_orders(
            vars,
            ("s", "ubar"),
            (s_order, u_range as u32),
            (1..=u_range).flat_map(|h| {
                (1..=s_order).map(move |l| ((-(l as i32), -h), (l, h)))
            })
            .map(|(e, (l, h))| (e, p_pows[l as usize].coeff(h).scale(&frac(1, l as i64)))),
        );
        checks.push(Check::new("arch_log_series", compare_bitails(&left, &right).0));
    }

    SuiteReport::new("appendix_a")
        .param("d", d)
        .param("s_order", s_order)
        .param("u_range", u_range)
        .with_checks(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn excursions_for_unit_increments() {
        let a = ArchSeries::new(1, 4);
        let p: Vec<MSeries> = (0..3).map(|i| MSeries::var(&a.vars, i)).collect();
        assert_eq!(a.u.coeff(-1), p[0]);
        assert_eq!(a.u.coeff(-2), &p[0] * &p[1]);
        assert_eq!(a.u.coeff(-3), &(&p[0] * &(&p[1] * &p[1])) + &(&(&p[0] * &p[0]) * &p[2]));
        // A_0^> = s p_0 + s p_1 U.
        assert_eq!(a.strict[0].coeff(-1), p[1]);
        assert_eq!(a.strict[0].coeff(-2), &p[2] * &p[0]);
    }

    #[test]
    fn order_zero_is_vacuous() {
        let r = appendix_a_suite(2, 0, 2);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn small_suite_passes() {
        for d in 1..=2 {
            let r = appendix_a_suite(d, 4, 4);
            assert!(r.passed(), "{}", serde_json::to_string_pretty(&r).unwrap());
        }
    }
}
