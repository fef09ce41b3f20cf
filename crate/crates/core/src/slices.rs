//! Elementary slice series `a_k`, `b_k` and the Laurent polynomials
//!
//! ```text
//! x(z) = Σ_{k=-1}^{Δ•-1} a_k z^{-k},    y(z) = z^{-1} + Σ_{k=0}^{Δ°-1} b_k z^k,
//! ```
//!
//! determined by `b_k = Σ_d t°_d [z^k] x^{d-1}` (k ≥ 0) and
//! `a_k = t δ_{k,-1} + Σ_d t•_d [z^{-k}] y^{d-1}` (k ≥ -1).

use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{LaurentPoly, MSeries, SeriesJson, VarSet};
use crate::error::{Error, Result};
use crate::par;
use crate::report::{compare_series, Check, Mismatch, SuiteReport};

/// Maximal white and black face degrees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeBounds {
    pub white: usize,
    pub black: usize,
}

impl DegreeBounds {
    pub fn new(white: usize, black: usize) -> Result<DegreeBounds> {
        if white == 0 || black == 0 {
            return Err(Error::Domain("degree bounds must be at least 1".into()));
        }
        Ok(DegreeBounds { white, black })
    }
}

/// Positions of the hypermap weights `t`, `t°_d` (`tw<d>`), `t•_d` (`tb<d>`)
/// inside a variable set. A face weight missing from the set is zero, which is
/// how specializations such as quadrangulations are expressed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weights {
    vars: Arc<VarSet>,
    bounds: DegreeBounds,
    t: usize,
    white: Vec<Option<usize>>,
    black: Vec<Option<usize>>,
}

impl Weights {
    /// All weights `t, tw1..twΔ°, tb1..tbΔ•` at truncation order `order`.
    pub fn full(bounds: DegreeBounds, order: u32) -> Weights {
        Weights::new(VarSet::hypermap(bounds.white, bounds.black, order), bounds).expect("full hypermap variable set")
    }

    pub fn new(vars: Arc<VarSet>, bounds: DegreeBounds) -> Result<Weights> {
        let t = vars.index_of("t").ok_or_else(|| Error::UnknownVariable("t".into()))?;
        for name in vars.names() {
            let ok = name == "t"
                || parse_weight(name, "tw").is_some_and(|d| d <= bounds.white)
                || parse_weight(name, "tb").is_some_and(|d| d <= bounds.black);
            if !ok {
                return Err(Error::Domain(format!("variable `{name}` is not a hypermap weight within the degree bounds")));
            }
        }
        let white = (1..=bounds.white).map(|d| vars.index_of(&format!("tw{d}"))).collect();
        let black = (1..=bounds.black).map(|d| vars.index_of(&format!("tb{d}"))).collect();
        Ok(Weights { vars, bounds, t, white, black })
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn bounds(&self) -> DegreeBounds {
        self.bounds
    }

    pub fn order(&self) -> u32 {
        self.vars.order()
    }

    pub fn t_index(&self) -> usize {
        self.t
    }

    pub fn t(&self) -> MSeries {
        MSeries::var(&self.vars, self.t)
    }

    /// Index of `t°_d`, `None` if the weight is absent or `d` out of range.
    pub fn white_index(&self, d: usize) -> Option<usize> {
        d.checked_sub(1).and_then(|i| self.white.get(i).copied().flatten())
    }

    pub fn black_index(&self, d: usize) -> Option<usize> {
        d.checked_sub(1).and_then(|i| self.black.get(i).copied().flatten())
    }

    pub fn white(&self, d: usize) -> Option<MSeries> {
        self.white_index(d).map(|i| MSeries::var(&self.vars, i))
    }

    pub fn black(&self, d: usize) -> Option<MSeries> {
        self.black_index(d).map(|i| MSeries::var(&self.vars, i))
    }

    /// Same weights at another truncation order.
    pub fn with_order(&self, order: u32) -> Weights {
        Weights::new(self.vars.with_order(order), self.bounds).expect("same names")
    }
}

fn parse_weight(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix)?.parse().ok().filter(|d| *d >= 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "w")]
    White,
    #[serde(rename = "b")]
    Black,
}

impl Color {
    pub fn swap(self) -> Color {
        match self {
            Color::White => Color::Black,
            Color::Black => Color::White,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceSolution {
    weights: Weights,
    a: Vec<MSeries>,
    b: Vec<MSeries>,
    x: LaurentPoly,
    y: LaurentPoly,
    iterations: usize,
}

fn build_x(vars: &Arc<VarSet>, a: &[MSeries]) -> LaurentPoly {
    LaurentPoly::from_coeffs(vars, "z", a.iter().enumerate().map(|(i, c)| (1 - i as i32, c.clone())))
}

fn build_y(vars: &Arc<VarSet>, b: &[MSeries]) -> LaurentPoly {
    LaurentPoly::from_coeffs(vars, "z", b.iter().enumerate().map(|(i, c)| (i as i32 - 1, c.clone())))
}

/// One Jacobi pass: the right-hand sides of the slice system evaluated at
/// `x`, `y`. Returns `(a_{-1..Δ•-1}, b_{-1..Δ°-1})`.
fn jacobi_step(w: &Weights, x: &LaurentPoly, y: &LaurentPoly) -> (Vec<MSeries>, Vec<MSeries>) {
    let bd = w.bounds();
    let vars = w.vars();
    let (xp, yp) = par::join(|| x.powers(bd.white as u32 - 1), || y.powers(bd.black as u32 - 1));
    let b = par::map_range(bd.white + 1, |i| {
        let k = i as i32 - 1;
        if k == -1 {
            return MSeries::one(vars);
        }
        let mut acc = MSeries::zero(vars);
        for d in 1..=bd.white {
            if let Some(tw) = w.white(d) {
                acc += &(&tw * &xp[d - 1].coeff(k));
            }
        }
        acc
    });
    let a = par::map_range(bd.black + 1, |i| {
        let k = i as i32 - 1;
        let mut acc = if k == -1 { w.t() } else { MSeries::zero(vars) };
        for d in 1..=bd.black {
            if let Some(tb) = w.black(d) {
                acc += &(&tb * &yp[d - 1].coeff(-k));
            }
        }
        acc
    });
    (a, b)
}

/// Solves the slice system at the given bounds with every weight present.
pub fn solve_slice_system(bounds: DegreeBounds, order: u32) -> SliceSolution {
    solve(Weights::full(bounds, order))
}

/// Fixed-point iteration from `a = 0`, `b = (1, 0, …)`. Every right-hand side
/// carries a weight factor, so each pass fixes one more degree and `order`
/// passes suffice; the loop stops earlier at an exact fixed point.
pub fn solve(weights: Weights) -> SliceSolution {
    let bd = weights.bounds();
    let vars = weights.vars().clone();
    let mut a = vec![MSeries::zero(&vars); bd.black + 1];
    let mut b = vec![MSeries::zero(&vars); bd.white + 1];
    b[0] = MSeries::one(&vars);
    let mut x = build_x(&vars, &a);
    let mut y = build_y(&vars, &b);
    let mut iterations = 0;
    for _ in 0..weights.order() {
        let (na, nb) = jacobi_step(&weights, &x, &y);
        iterations += 1;
        if na == a && nb == b {
            break;
        }
        a = na;
        b = nb;
        x = build_x(&vars, &a);
        y = build_y(&vars, &b);
    }
    SliceSolution { weights, a, b, x, y, iterations }
}

impl SliceSolution {
    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        self.weights.vars()
    }

    pub fn bounds(&self) -> DegreeBounds {
        self.weights.bounds()
    }

    pub fn order(&self) -> u32 {
        self.weights.order()
    }

    /// Number of fixed-point passes performed.
    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// `a_k`, zero outside `-1..=Δ•-1`.
    pub fn a(&self, k: i32) -> MSeries {
        usize::try_from(k + 1)
            .ok()
            .and_then(|i| self.a.get(i).cloned())
            .unwrap_or_else(|| MSeries::zero(self.vars()))
    }

    /// `b_k`, zero outside `-1..=Δ°-1`.
    pub fn b(&self, k: i32) -> MSeries {
        usize::try_from(k + 1)
            .ok()
            .and_then(|i| self.b.get(i).cloned())
            .unwrap_or_else(|| MSeries::zero(self.vars()))
    }

    pub fn x(&self) -> &LaurentPoly {
        &self.x
    }

    pub fn y(&self) -> &LaurentPoly {
        &self.y
    }

    /// The Laurent polynomial of the given color: `x` for white, `y` for black.
    pub fn poly(&self, color: Color) -> &LaurentPoly {
        match color {
            Color::White => &self.x,
            Color::Black => &self.y,
        }
    }

    /// Weight `t°_d` or `t•_d`.
    pub fn face_weight(&self, color: Color, d: usize) -> Option<MSeries> {
        match color {
            Color::White => self.weights.white(d),
            Color::Black => self.weights.black(d),
        }
    }

    pub fn max_degree(&self, color: Color) -> usize {
        match color {
            Color::White => self.bounds().white,
            Color::Black => self.bounds().black,
        }
    }

    /// One more fixed-point pass applied to this solution.
    pub fn step(&self) -> SliceSolution {
        let (a, b) = jacobi_step(&self.weights, &self.x, &self.y);
        let x = build_x(self.vars(), &a);
        let y = build_y(self.vars(), &b);
        SliceSolution { weights: self.weights.clone(), a, b, x, y, iterations: self.iterations + 1 }
    }

    /// The same solution truncated at a lower order.
    pub fn truncate(&self, order: u32) -> SliceSolution {
        let weights = self.weights.with_order(order.min(self.order()));
        let vars = weights.vars().clone();
        let cut = |s: &MSeries| s.truncate(order).embed(&vars).expect("same names");
        let a: Vec<MSeries> = self.a.iter().map(cut).collect();
        let b: Vec<MSeries> = self.b.iter().map(cut).collect();
        let x = build_x(&vars, &a);
        let y = build_y(&vars, &b);
        SliceSolution { weights, a, b, x, y, iterations: self.iterations }
    }

    /// `Σ_k k a_k b_k`.
    pub fn kakbk(&self) -> MSeries {
        let mut acc = MSeries::zero(self.vars());
        let top = self.bounds().white.max(self.bounds().black) as i32;
        for k in -1..top {
            if k != 0 {
                acc += &(&self.a(k) * &self.b(k)).scale_int(k as i64);
            }
        }
        acc
    }

    /// `Σ_k a_k b_k`.
    pub fn sum_akbk(&self) -> MSeries {
        let mut acc = MSeries::zero(self.vars());
        let top = self.bounds().white.max(self.bounds().black) as i32;
        for k in -1..top {
            acc += &(&self.a(k) * &self.b(k));
        }
        acc
    }
}

/// Back-substitution: every equation of the system, first failure reported.
pub fn residual(sol: &SliceSolution) -> Option<Mismatch> {
    let next = sol.step();
    for k in -1..sol.bounds().black as i32 {
        if let Some(m) = compare_series(&format!("a[{k}]"), &sol.a(k), &next.a(k)) {
            return Some(m);
        }
    }
    for k in -1..sol.bounds().white as i32 {
        if let Some(m) = compare_series(&format!("b[{k}]"), &sol.b(k), &next.b(k)) {
            return Some(m);
        }
    }
    None
}

/// `a_{-1} (1 - Σ_d t°_d [z^{-1}] x^{d-1}) = t`.
pub fn alternative_mismatch(sol: &SliceSolution) -> Option<Mismatch> {
    let vars = sol.vars();
    let xp = sol.x().powers(sol.bounds().white as u32 - 1);
    let mut s = MSeries::one(vars);
    for d in 1..=sol.bounds().white {
        if let Some(tw) = sol.weights().white(d) {
            s -= &(&tw * &xp[d - 1].coeff(-1));
        }
    }
    compare_series("a[-1](1 - Σ t°_d P°_{d-1,1})", &(&sol.a(-1) * &s), &sol.weights().t())
}

pub fn check_alternative(sol: &SliceSolution) -> bool {
    alternative_mismatch(sol).is_none()
}

/// Slice-level identity suite for one solution.
pub fn verify(sol: &SliceSolution) -> SuiteReport {
    let vars = sol.vars();
    let t = sol.weights().t();
    let mut checks = vec![Check::new("back_substitution", residual(sol))];
    checks.push(Check::new("b[-1] = 1", compare_series("b[-1]", &sol.b(-1), &MSeries::one(vars))));
    let constant_free = (0..sol.bounds().black as i32).all(|k| sol.a(k).constant_term().is_zero())
        && (0..sol.bounds().white as i32).all(|k| sol.b(k).constant_term().is_zero())
        && sol.a(-1).constant_term().is_zero();
    checks.push(Check::flag("no_constant_terms", constant_free, "a_k or b_k (k >= 0) has a constant term"));
    checks.push(Check::new("alternative_relation", alternative_mismatch(sol)));
    let kk = sol.kakbk();
    checks.push(
        Check::new("sum k a_k b_k = -t", compare_series("Σ k a_k b_k", &kk, &-&t))
            .note("sign", -1)
            .note("holds_with_plus_sign", kk == t),
    );
    SuiteReport::new("slices")
        .param("dw", sol.bounds().white)
        .param("db", sol.bounds().black)
        .param("order", sol.order())
        .param("iterations", sol.iterations())
        .with_checks(checks)
}

#[derive(Serialize, Deserialize)]
struct SolutionJson {
    dw: usize,
    db: usize,
    order: u32,
    vars: Vec<String>,
    a: Vec<IndexedSeries>,
    b: Vec<IndexedSeries>,
    #[serde(default)]
    iterations: usize,
}

#[derive(Serialize, Deserialize)]
struct IndexedSeries {
    k: i32,
    series: SeriesJson,
}

impl Serialize for SliceSolution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let index = |v: &[MSeries]| {
            v.iter().enumerate().map(|(i, c)| IndexedSeries { k: i as i32 - 1, series: c.into() }).collect()
        };
        SolutionJson {
            dw: self.bounds().white,
            db: self.bounds().black,
            order: self.order(),
            vars: self.vars().names().to_vec(),
            a: index(&self.a),
            b: index(&self.b),
            iterations: self.iterations,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SliceSolution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<SliceSolution, D::Error> {
        use serde::de::Error as _;
        let j = SolutionJson::deserialize(d)?;
        let bounds = DegreeBounds::new(j.dw, j.db).map_err(D::Error::custom)?;
        let vars = VarSet::new(j.vars, j.order).map_err(D::Error::custom)?;
        let weights = Weights::new(vars.clone(), bounds).map_err(D::Error::custom)?;
        let collect = |items: Vec<IndexedSeries>, len: usize| -> std::result::Result<Vec<MSeries>, D::Error> {
            if items.len() != len {
                return Err(D::Error::custom("wrong number of slice series"));
            }
            items
                .into_iter()
                .enumerate()
                .map(|(i, it)| {
                    if it.k != i as i32 - 1 {
                        return Err(D::Error::custom("slice series out of order"));
                    }
                    it.series.to_series().map_err(D::Error::custom)?.embed(&vars).map_err(D::Error::custom)
                })
                .collect()
        };
        let a = collect(j.a, bounds.black + 1)?;
        let b = collect(j.b, bounds.white + 1)?;
        let x = build_x(&vars, &a);
        let y = build_y(&vars, &b);
        Ok(SliceSolution { weights, a, b, x, y, iterations: j.iterations })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn two_two(order: u32) -> SliceSolution {
        solve_slice_system(DegreeBounds::new(2, 2).unwrap(), order)
    }

    #[test]
    fn order_zero() {
        let sol = two_two(0);
        assert_eq!(sol.b(-1), MSeries::one(sol.vars()));
        for k in -1..2 {
            assert!(sol.a(k).is_zero());
        }
        assert!(sol.b(0).is_zero() && sol.b(1).is_zero());
    }

    #[test]
    fn closed_form_two_two() {
        let sol = two_two(6);
        let w = sol.weights();
        let (t, tw1, tw2, tb1, tb2) =
            (w.t(), w.white(1).unwrap(), w.white(2).unwrap(), w.black(1).unwrap(), w.black(2).unwrap());
        let one = MSeries::one(sol.vars());
        let k = &one - &(&tw2 * &tb2);
        assert_eq!(sol.a(1), tb2);
        assert_eq!(sol.b(1), &tw2 * &sol.a(-1));
        assert_eq!(&sol.a(-1) * &k, t);
        assert_eq!(&sol.a(0) * &k, &tb1 + &(&tb2 * &tw1));
        assert_eq!(sol.b(0), &tw1 + &(&tw2 * &sol.a(0)));
        assert_eq!(sol.x().coeff(1), sol.a(-1));
        assert_eq!(sol.y().coeff(-1), one);
        assert!(sol.x().coeff(5).is_zero());
    }

    #[test]
    fn square_of_x_two_two() {
        let sol = two_two(4);
        let x2 = sol.x().pow(2);
        assert_eq!(x2.coeff(1), (&sol.a(-1) * &sol.a(0)).scale_int(2));
    }

    #[test]
    fn suite_passes_and_reports_sign() {
        let sol = two_two(5);
        let r = verify(&sol);
        assert!(r.passed(), "{r:?}");
        let kk = r.checks.iter().find(|c| c.name.starts_with("sum k")).unwrap();
        assert_eq!(kk.notes["holds_with_plus_sign"], serde_json::Value::Bool(false));
        assert_eq!(sol.kakbk(), sol.weights().t().scale(&rat(-1)));
    }

    #[test]
    fn one_pass_more_changes_nothing() {
        let sol = two_two(5);
        let next = sol.step();
        assert_eq!(next.a, sol.a);
        assert_eq!(next.b, sol.b);
    }

    #[test]
    fn truncation_commutes_with_solving() {
        let bd = DegreeBounds::new(3, 2).unwrap();
        let high = solve_slice_system(bd, 5).truncate(3);
        let low = solve_slice_system(bd, 3);
        assert_eq!(high.a, low.a);
        assert_eq!(high.b, low.b);
    }

    #[test]
    fn non_bicolored_specialization() {
        // Only t°_4 and t•_2 present, t•_2 = 1 afterwards: x = z^{-1} + S + R z
        // with R = t + b_1, S = b_0.
        let bd = DegreeBounds::new(4, 2).unwrap();
        let vars = VarSet::new(["t", "tw4", "tb2"], 7).unwrap();
        let sol = solve(Weights::new(vars, bd).unwrap());
        // a_1 = t•_2, so a_1 = 1 after specialization.
        assert_eq!(sol.a(1), sol.weights().black(2).unwrap());
        // a_{-1} = t + t•_2 b_1 and a_0 = t•_2 b_0 before specialization.
        let tb = sol.weights().black(2).unwrap();
        assert_eq!(sol.a(-1), &sol.weights().t() + &(&tb * &sol.b(1)));
        assert_eq!(sol.a(0), &tb * &sol.b(0));
    }

    #[test]
    fn json_round_trip() {
        let sol = two_two(3);
        let s = serde_json::to_string(&sol).unwrap();
        let back: SliceSolution = serde_json::from_str(&s).unwrap();
        assert_eq!(back.a, sol.a);
        assert_eq!(back.b, sol.b);
        assert_eq!(back.x, sol.x);
    }

    #[test]
    fn weights_reject_foreign_names() {
        let bd = DegreeBounds::new(2, 2).unwrap();
        assert!(Weights::new(VarSet::new(["t", "tw3"], 3).unwrap(), bd).is_err());
        assert!(Weights::new(VarSet::new(["tw1"], 3).unwrap(), bd).is_err());
    }
}
