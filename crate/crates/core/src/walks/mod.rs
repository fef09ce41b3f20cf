//! Downward skip-free walks: steps of increment `j >= -1` with weights `w_j`.
//!
//! Walk counts come either from coefficients of Laurent powers (`[z^{-h}] x^p`
//! for white steps, `[z^h] y^p` for black steps, `[u^h] P(u)^p` for generic
//! weights) or from an independent position-by-position dynamic program.

pub mod appendix;

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{InvTail, LaurentPoly, MSeries, VarSet};
use crate::slices::{Color, SliceSolution};

/// Walks with `p` steps from 0 to `h` counted from a Laurent power. White
/// steps are read off `x(z)` (increment `k` ↔ `z^{-k}`), black and generic
/// steps off `y(z)` or `P(u)` (increment `k` ↔ `z^k`).
pub fn walk_count(poly: &LaurentPoly, color: Color, p: u32, h: i32) -> MSeries {
    let e = match color {
        Color::White => -h,
        Color::Black => h,
    };
    poly.pow(p).coeff(e)
}

/// Step weights `w_{-1}, .., w_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepWeights {
    w: Vec<MSeries>,
}

impl StepWeights {
    /// `w[0]` is the weight of the down-step.
    pub fn new(w: Vec<MSeries>) -> StepWeights {
        assert!(!w.is_empty(), "a down-step weight is required");
        StepWeights { w }
    }

    /// Steps weighted by `a_k` (white) or `b_k` (black).
    pub fn from_solution(sol: &SliceSolution, color: Color) -> StepWeights {
        let d = sol.max_degree(color.swap()) as i32 - 1;
        let w = match color {
            Color::White => (-1..=d).map(|k| sol.a(k)).collect(),
            Color::Black => (-1..=d).map(|k| sol.b(k)).collect(),
        };
        StepWeights { w }
    }

    /// Generic weights `p_{-1}, .., p_d` of a walk-weight variable set.
    pub fn generic(vars: &Arc<VarSet>) -> StepWeights {
        StepWeights { w: (0..vars.len()).map(|i| MSeries::var(vars, i)).collect() }
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        self.w[0].vars()
    }

    /// Largest increment.
    pub fn d(&self) -> i32 {
        self.w.len() as i32 - 2
    }

    pub fn weight(&self, j: i32) -> MSeries {
        usize::try_from(j + 1)
            .ok()
            .and_then(|i| self.w.get(i).cloned())
            .unwrap_or_else(|| MSeries::zero(self.vars()))
    }

    /// `P(u) = Σ_j w_j u^j`.
    pub fn laurent(&self, aux: &str) -> LaurentPoly {
        LaurentPoly::from_coeffs(self.vars(), aux, (-1..=self.d()).map(|j| (j, self.weight(j))))
    }
}

/// Position-by-position count of walks with `p` steps from 0 to `h` whose
/// visited positions (endpoints included) never drop below `floor`.
pub fn walk_count_dp(w: &StepWeights, p: u32, h: i32, floor: Option<i32>) -> MSeries {
    constrained_dp(w, p, h, |_, pos| floor.is_none_or(|f| pos >= f))
}

/// Walks with `p` steps from 0 to `h` whose intermediate positions (after
/// steps `1..p-1`) are all `>= lower`.
pub fn walk_count_interior(w: &StepWeights, p: u32, h: i32, lower: i32) -> MSeries {
    constrained_dp(w, p, h, |step, pos| step == 0 || step == p || pos >= lower)
}

fn constrained_dp(w: &StepWeights, p: u32, h: i32, allowed: impl Fn(u32, i32) -> bool) -> MSeries {
    let vars = w.vars().clone();
    let mut dist: BTreeMap<i32, MSeries> = BTreeMap::new();
    if allowed(0, 0) {
        dist.insert(0, MSeries::one(&vars));
    }
    for step in 1..=p {
        let mut next: BTreeMap<i32, MSeries> = BTreeMap::new();
        // Positions from which `h` is still reachable: each step goes down by
        // at most one.
        let remaining = (p - step) as i32;
        for (pos, c) in &dist {
            for j in -1..=w.d() {
                let q = pos + j;
                if q - remaining > h || !allowed(step, q) {
                    continue;
                }
                let wj = w.weight(j);
                if wj.is_zero() {
                    continue;
                }
                let term = c * &wj;
                let slot = next.entry(q).or_insert_with(|| MSeries::zero(&vars));
                *slot += &term;
            }
        }
        next.retain(|_, c| !c.is_zero());
        dist = next;
    }
    dist.remove(&h).unwrap_or_else(|| MSeries::zero(&vars))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExcursionKind {
    /// `z•(y)`, steps weighted by `b_k`, variable `y`.
    Black,
    /// `z̃°(x) = 1/z°(x)`, steps weighted by `a_k`, variable `x`.
    White,
    /// `U(s)` for generic weights.
    Generic,
}

/// Excursion series: the unique tail without constant term such that
/// `T = aux^{-1} Σ_j w_j T^{j+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcursionTail {
    pub kind: ExcursionKind,
    pub tail: InvTail,
}

/// Solves the excursion equation to order `m` by fixed-point iteration; each
/// pass fixes one more inverse power.
pub fn excursion_tail(w: &StepWeights, aux: &str, m: u32) -> InvTail {
    let vars = w.vars().clone();
    let mut t = InvTail::with_order(&vars, aux, m, []);
    for _ in 0..=m {
        let next = excursion_rhs(w, &t, aux, m);
        if next == t {
            break;
        }
        t = next;
    }
    t
}

/// `aux^{-1} Σ_j w_j T^{j+1}`, truncated at order `m`.
pub fn excursion_rhs(w: &StepWeights, t: &InvTail, aux: &str, m: u32) -> InvTail {
    let vars = w.vars();
    let mut acc = InvTail::with_order(vars, aux, m, []);
    let mut power = InvTail::constant(MSeries::one(vars), aux);
    for j in -1..=w.d() {
        let wj = w.weight(j);
        if !wj.is_zero() {
            acc = acc.add(&power.scale(&wj));
        }
        power = power.mul(t).truncate(-(m as i32));
    }
    acc.shift(-1).truncate(-(m as i32))
}

pub fn excursion(sol: &SliceSolution, color: Color, m: u32) -> ExcursionTail {
    let w = StepWeights::from_solution(sol, color);
    let (kind, aux) = match color {
        Color::White => (ExcursionKind::White, "x"),
        Color::Black => (ExcursionKind::Black, "y"),
    };
    ExcursionTail { kind, tail: excursion_tail(&w, aux, m) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slices::{solve_slice_system, DegreeBounds};

    fn sol22(n: u32) -> SliceSolution {
        solve_slice_system(DegreeBounds::new(2, 2).unwrap(), n)
    }

    #[test]
    fn empty_and_single_step_walks() {
        let sol = sol22(3);
        assert_eq!(walk_count(sol.x(), Color::White, 0, 0), MSeries::one(sol.vars()));
        assert!(walk_count(sol.x(), Color::White, 0, 2).is_zero());
        assert_eq!(walk_count(sol.y(), Color::Black, 1, -1), MSeries::one(sol.vars()));
        assert_eq!(walk_count(sol.x(), Color::White, 2, -1), (&sol.a(-1) * &sol.a(0)).scale_int(2));
    }

    #[test]
    fn nonnegative_black_walks_of_length_two() {
        let sol = sol22(4);
        let w = StepWeights::from_solution(&sol, Color::Black);
        let b0 = sol.b(0);
        assert_eq!(walk_count_dp(&w, 2, 0, Some(0)), &(&b0 * &b0) + &sol.b(1));
        assert_eq!(walk_count_dp(&w, 0, 0, Some(-3)), MSeries::one(sol.vars()));
    }

    #[test]
    fn dp_matches_laurent_powers() {
        let sol = solve_slice_system(DegreeBounds::new(3, 2).unwrap(), 4);
        for color in [Color::White, Color::Black] {
            let w = StepWeights::from_solution(&sol, color);
            for p in 0..5 {
                for h in -5..=5 {
                    assert_eq!(
                        walk_count_dp(&w, p, h, None),
                        walk_count(sol.poly(color), color, p, h),
                        "{color:?} p={p} h={h}"
                    );
                }
            }
        }
    }

    #[test]
    fn black_excursion_expansion() {
        let sol = sol22(5);
        let z = excursion(&sol, Color::Black, 4).tail;
        let (b0, b1) = (sol.b(0), sol.b(1));
        let one = MSeries::one(sol.vars());
        assert_eq!(z.offset(1), one);
        assert_eq!(z.offset(2), b0);
        assert_eq!(z.offset(3), &(&b0 * &b0) + &b1);
        assert_eq!(z.offset(4), &b0.pow(3) + &(&b0 * &b1).scale_int(3));
        assert!(z.offset(0).is_zero());
    }

    #[test]
    fn white_excursion_leads_with_a_minus_one() {
        let sol = sol22(4);
        let z = excursion(&sol, Color::White, 5).tail;
        assert_eq!(z.offset(1), sol.a(-1));
        // y(z•(y)) = y: z•^{-1} + Σ_k b_k z•^k.
        let zb = excursion(&sol, Color::Black, 5).tail;
        let mut lhs = zb.monic_inverse().unwrap();
        let mut power = InvTail::constant(MSeries::one(sol.vars()), "y");
        for k in 0..2 {
            lhs = lhs.add(&power.scale(&sol.b(k)));
            power = power.mul(&zb);
        }
        let y = InvTail::polynomial(sol.vars(), "y", [(1, MSeries::one(sol.vars()))]);
        let (m, n) = crate::report::compare_tails(&lhs, &y);
        assert!(m.is_none(), "{m:?}");
        assert!(n >= 5);
    }

    #[test]
    fn perturbed_excursion_breaks_its_equation() {
        let sol = sol22(4);
        let w = StepWeights::from_solution(&sol, Color::Black);
        let z = excursion_tail(&w, "y", 5);
        assert_eq!(excursion_rhs(&w, &z, "y", 5), z);
        for j in 1..=5 {
            let bumped = z.add(&InvTail::with_order(sol.vars(), "y", 5, [(-j, sol.weights().t())]));
            assert_ne!(excursion_rhs(&w, &bumped, "y", 5), bumped, "offset {j}");
        }
    }
}
