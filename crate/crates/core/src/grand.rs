//! All-perimeter generating functions and their identities: pointed disks,
//! cylinders, disks, the rational parametrization and the resultant formula
//! for Dobrushin disks.
//!
//! `a_{-1}` has no constant term, so it is never inverted. Identities whose
//! natural form divides by it are checked after multiplying through.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{BiTail, InvTail, LaurentPoly, MSeries};
use crate::gf::{CylinderKind, DiskRoute, Gf};
use crate::report::{compare_bitails, compare_series, compare_tails, Check, SuiteReport};
use crate::slices::{solve_slice_system, Color, DegreeBounds, SliceSolution};
use crate::walks::{excursion, ExcursionTail};
use crate::{par, Error, Result};

/// `Y(x)` or `X(y)`: an exact polynomial part plus a disk resolvent tail.
#[derive(Clone, Debug)]
pub struct SplitTail {
    pub poly: InvTail,
    pub tail: InvTail,
}

impl SplitTail {
    pub fn full(&self) -> InvTail {
        self.poly.add(&self.tail)
    }
}

/// Resolvents of one solution, exact down to `aux^{-m}`.
#[derive(Clone, Debug)]
pub struct ResolventBundle {
    pub sol: SliceSolution,
    pub m: u32,
    /// `W°(x) = Σ F°_p x^{-p-1}`.
    pub wdisk_white: InvTail,
    /// `W•(y) = Σ F•_p y^{-p-1}`.
    pub wdisk_black: InvTail,
    /// `∂_t W°(x)`.
    pub wpt_white: InvTail,
    pub wpt_black: InvTail,
    /// `z̃°(x) = 1/z°(x)`.
    pub z_exc_white: ExcursionTail,
    pub z_exc_black: ExcursionTail,
    /// `Y(x) = Σ t°_d x^{d-1} + W°(x)`.
    pub y_of_x: SplitTail,
    /// `X(y) = Σ t•_d y^{d-1} + W•(y)`.
    pub x_of_y: SplitTail,
}

fn aux(color: Color) -> &'static str {
    match color {
        Color::White => "x",
        Color::Black => "y",
    }
}

pub fn build_resolvents(sol: &SliceSolution, m: u32) -> ResolventBundle {
    assert!(m >= 1, "tail order must be positive");
    let gf = Gf::for_perimeters(sol, m);
    let vars = sol.vars();
    let resolvent = |color: Color, f: &dyn Fn(u32) -> MSeries| {
        InvTail::with_order(vars, aux(color), m, (0..m).map(|p| (-(p as i32) - 1, f(p))))
    };
    let disk = |c: Color| resolvent(c, &|p| gf.disk(c, p, DiskRoute::Compact));
    let pointed = |c: Color| resolvent(c, &|p| gf.pointed_disk(c, p));
    let poly_part = |c: Color| {
        let terms = (1..=sol.max_degree(c)).filter_map(|d| Some((d as i32 - 1, sol.face_weight(c, d)?)));
        InvTail::polynomial(vars, aux(c), terms)
    };
    let (wdisk_white, wdisk_black) = (disk(Color::White), disk(Color::Black));
    ResolventBundle {
        sol: sol.clone(),
        m,
        y_of_x: SplitTail { poly: poly_part(Color::White), tail: wdisk_white.clone() },
        x_of_y: SplitTail { poly: poly_part(Color::Black), tail: wdisk_black.clone() },
        wdisk_white,
        wdisk_black,
        wpt_white: pointed(Color::White),
        wpt_black: pointed(Color::Black),
        z_exc_white: excursion(sol, Color::White, m),
        z_exc_black: excursion(sol, Color::Black, m),
    }
}

fn tail_check(name: &str, left: &InvTail, right: &InvTail) -> Check {
    let (m, n) = compare_tails(left, right);
    Check::new(name, m).note("coefficients", n)
}

fn bitail_check(name: &str, left: &BiTail, right: &BiTail) -> Check {
    let (m, n) = compare_bitails(left, right);
    Check::new(name, m).note("coefficients", n)
}

/// `∂_t W°(x) = -d/dx ln z̃°(x)` checked as `z̃°·∂_t W° + z̃°' = 0`, and
/// `∂_t W•(y) = 1/y - d/dy log(1+u)` with `z•(y) = y^{-1}(1+u)`.
pub fn check_pointed_grand(b: &ResolventBundle) -> Vec<Check> {
    let vars = b.sol.vars();
    let zw = &b.z_exc_white.tail;
    let left = zw.mul(&b.wpt_white);
    let right = zw.derivative().neg();
    let white = tail_check("pointed_grand_white", &left, &right).note("form", "cleared by z̃°(x)");

    let zb = &b.z_exc_black.tail;
    let one = InvTail::constant(MSeries::one(vars), "y");
    let u = zb.shift(1).sub(&one);
    let black = match u.log1p() {
        Ok(l) => {
            let inv_y = InvTail::polynomial(vars, "y", [(-1, MSeries::one(vars))]);
            tail_check("pointed_grand_black", &b.wpt_black, &inv_y.sub(&l.derivative()))
        }
        Err(e) => Check::flag("pointed_grand_black", false, &e.to_string()),
    };
    vec![white, black]
}

/// `W°(x) = z̃° - Σ_d t°_d Σ_h z̃°^h [z^{-h}]x^{d-1}` and
/// `W•(y) = a_{-1} z• - Σ_d t•_d Σ_h z•^h [z^h]y^{d-1}`.
pub fn check_disk_grand(b: &ResolventBundle) -> Vec<Check> {
    let sol = &b.sol;
    let floor = -(b.m as i32);
    let side = |color: Color, z: &InvTail, lead: MSeries| {
        let dmax = sol.max_degree(color);
        let gf = Gf::new(sol, dmax.saturating_sub(1) as u32);
        let mut acc = z.scale(&lead);
        let mut zp = vec![InvTail::constant(MSeries::one(sol.vars()), z.aux())];
        for d in 2..=dmax {
            let Some(td) = sol.face_weight(color, d) else { continue };
            let power = gf.pow(color, d as u32 - 1);
            for (e, c) in power.iter() {
                let h = match color {
                    Color::White => -e,
                    Color::Black => e,
                };
                if h < 1 {
                    continue;
                }
                while zp.len() <= h as usize {
                    let next = zp.last().unwrap().mul(z).truncate(floor);
                    zp.push(next);
                }
                acc = acc.sub(&zp[h as usize].scale(&(&td * c)));
            }
        }
        acc
    };
    let one = MSeries::one(sol.vars());
    let white = side(Color::White, &b.z_exc_white.tail, one);
    let black = side(Color::Black, &b.z_exc_black.tail, sol.a(-1));
    vec![
        tail_check("disk_grand_white", &b.wdisk_white, &white),
        tail_check("disk_grand_black", &b.wdisk_black, &black),
    ]
}

/// `c · x1^{m.0} x2^{m.1} · (1 + u)` with a rational constant `c` and `u`
/// without constant term. Only `u` matters for mixed log-derivatives.
#[derive(Clone, Debug)]
pub struct FactoredBiLog {
    pub lead: BigRational,
    pub monomial: (i32, i32),
    pub unit: BiTail,
}

impl FactoredBiLog {
    /// Factors `h` at the given leading monomial. Fails when the leading
    /// coefficient is not a nonzero rational constant.
    pub fn factor(h: &BiTail, monomial: (i32, i32)) -> Result<FactoredBiLog> {
        let shifted = h.shift((-monomial.0, -monomial.1));
        let c = shifted.coeff((0, 0));
        let lead = c.constant_term();
        if lead.is_zero() || c.terms().any(|(e, _)| e.iter().any(|&k| k > 0)) {
            return Err(Error::Domain("leading coefficient is not a nonzero constant".into()));
        }
        let one = BiTail::constant(MSeries::one(h.vars()), h.aux());
        let unit = shifted.scale_q(&lead.recip()).sub(&one);
        Ok(FactoredBiLog { lead, monomial, unit })
    }

    /// `∂1 ∂2 log(1 + u)`.
    pub fn mixed_log_derivative(&self) -> Result<BiTail> {
        Ok(self.unit.log1p()?.derivative(0).derivative(1))
    }
}

/// `∂1∂2 ln H = W` in the form `W·H² = H·H₁₂ - H₁·H₂`, valid whatever the
/// leading coefficient of `H`. Returns both sides.
pub fn cleared_mixed_log(h: &BiTail, w: &BiTail) -> (BiTail, BiTail) {
    let (h1, h2) = (h.derivative(0), h.derivative(1));
    let h12 = h1.derivative(1);
    (w.mul(&h.mul(h)), h.mul(&h12).sub(&h1.mul(&h2)))
}

/// `Σ_n c_n Σ_{i+j=n+1} x1^{-i} x2^{-j}` for `f = Σ c_n x^{-n}`, which is
/// `(f(x2) - f(x1))/(x1 - x2)`. Exact in each variable down to `-(m+1)/2`
/// when `f` is exact down to `x^{-m}`.
fn divided_difference(f: &InvTail, a: (&str, &str)) -> BiTail {
    let m = f.tail_order().expect("truncated tail");
    let k = (m + 1) / 2;
    let coeffs = f.iter().filter(|(e, _)| *e < 0).flat_map(|(e, c)| {
        let n = -e;
        (1..=n).map(move |i| ((-i, -(n + 1 - i)), c.clone()))
    });
    BiTail::from_coeffs(f.vars(), a, (-1, -1), (Some(-k), Some(-k)), coeffs)
}

fn cylinder_series(gf: &Gf, kind: CylinderKind, a: (&str, &str), m: u32) -> BiTail {
    let cells: Vec<(u32, u32)> = (1..m).flat_map(|p| (1..m).map(move |q| (p, q))).collect();
    let vals = par::map(&cells, |&(p, q)| ((-(p as i32) - 1, -(q as i32) - 1), gf.cylinder(kind, p, q)));
    BiTail::with_orders(gf.sol().vars(), a, (m, m), vals)
}

/// The three cylinder resolvents against logarithms of excursion series,
/// bivariate orders `(m, m)`.
pub fn check_cylinder_grand(b: &ResolventBundle) -> Vec<Check> {
    let sol = &b.sol;
    let m = b.m;
    let gf = Gf::for_perimeters(sol, m);
    let mut checks = Vec::new();

    // W°• = -∂x∂y log(1 - z•(y) z̃°(x)).
    let wb = cylinder_series(&gf, CylinderKind::Wb, ("x", "y"), m);
    let prod = BiTail::outer(&b.z_exc_white.tail, &b.z_exc_black.tail);
    checks.push(match prod.neg().log1p() {
        Ok(l) => bitail_check("cylinder_grand_wb", &wb, &l.derivative(0).derivative(1).neg()),
        Err(e) => Check::flag("cylinder_grand_wb", false, &e.to_string()),
    });

    // W°° and W•• = ∂1∂2 ln of the divided difference of the excursion
    // series, which needs the excursions to order 2m - 1.
    for (kind, color, name) in [
        (CylinderKind::Ww, Color::White, "cylinder_grand_ww"),
        (CylinderKind::Bb, Color::Black, "cylinder_grand_bb"),
    ] {
        let a = if color == Color::White { ("x1", "x2") } else { ("y1", "y2") };
        let w = cylinder_series(&gf, kind, a, m);
        let z = excursion(sol, color, 2 * m - 1).tail;
        let h = divided_difference(&z, a);
        let check = match FactoredBiLog::factor(&h, (-1, -1)) {
            Ok(f) => match f.mixed_log_derivative() {
                Ok(r) => bitail_check(name, &w, &r).note("form", "log of the unit part"),
                Err(e) => Check::flag(name, false, &e.to_string()),
            },
            Err(_) => {
                let (l, r) = cleared_mixed_log(&h, &w);
                bitail_check(name, &l, &r).note("form", "cleared by the divided difference squared")
            }
        };
        checks.push(check);
    }
    checks
}

/// `C(-n, m)`.
fn neg_binomial(n: u32, m: u32) -> BigRational {
    let mut c = BigRational::one();
    for i in 0..m {
        c = c * BigRational::from_integer((n + i).into()) / BigRational::from_integer((i + 1).into());
    }
    if m % 2 == 1 {
        -c
    } else {
        c
    }
}

fn keep_up_to(p: &LaurentPoly, max_e: i32) -> LaurentPoly {
    LaurentPoly::from_coeffs(p.vars(), p.aux(), p.iter().filter(|(e, _)| *e <= max_e).map(|(e, c)| (e, c.clone())))
}

/// Polynomial part of `Y(x(z))` or `X(y(z))`: `Σ t_d poly^{d-1}`.
fn substituted_poly(sol: &SliceSolution, color: Color) -> LaurentPoly {
    let poly = sol.poly(color);
    let powers = poly.powers(sol.max_degree(color).saturating_sub(1) as u32);
    let mut acc = LaurentPoly::zero(sol.vars(), "z");
    for d in 1..=sol.max_degree(color) {
        if let Some(td) = sol.face_weight(color, d) {
            acc = acc.add(&powers[d - 1].scale(&td));
        }
    }
    acc
}

/// `Y(x(z)) = y(z)` and `X(y(z)) = x(z)`.
///
/// With `x(z) = a_{-1} z (1 + w/a_{-1})`, `w = Σ_{k≥0} a_k z^{-k-1}`, the
/// coefficient of `z^e` in `x(z)^{-n}` is `num_{n,j} / a_{-1}^{-e}` with
/// `j = -e - n` and `num_{n,j} = Σ_m C(-n,m) a_{-1}^{j-m} [z^{-j}] w^m`. The
/// white identity is compared at `z^e` after multiplying by `a_{-1}^{-e}`,
/// down to `z^{-m}`; the clearing exponent reported is `m`. The cleared
/// identity holds to the solution order but only pins `Y` to that order
/// minus the exponent, so callers wanting full precision lift the solution.
pub fn check_parametrization(b: &ResolventBundle) -> Vec<Check> {
    let sol = &b.sol;
    let vars = sol.vars();
    let m = b.m as i32;
    let am1 = sol.a(-1);
    let am1_pow: Vec<MSeries> = {
        let mut v = vec![MSeries::one(vars)];
        for i in 1..=m as usize {
            v.push(&v[i - 1] * &am1);
        }
        v
    };

    // White: Y(x(z)) = y(z), z^e for e = -m ..= top.
    let w = LaurentPoly::from_coeffs(vars, "z", (0..sol.max_degree(Color::Black) as i32).map(|k| (-k - 1, sol.a(k))));
    let wp = w.powers(m as u32);
    let num = |n: i32, j: i32| {
        let mut acc = MSeries::zero(vars);
        for mm in 0..=j {
            let c = wp[mm as usize].coeff(-j);
            if !c.is_zero() {
                acc += &(&am1_pow[(j - mm) as usize] * &c).scale(&neg_binomial(n as u32, mm as u32));
            }
        }
        acc
    };
    let poly = substituted_poly(sol, Color::White);
    let y = sol.y();
    let top = poly.max_exp().unwrap_or(0).max(y.max_exp().unwrap_or(0));
    let exps: Vec<i32> = (-m..=top).rev().collect();
    let white = par::map(&exps, |&e| {
        let clear = &am1_pow[(-e).max(0) as usize];
        let left_poly = &(&poly.coeff(e) - &y.coeff(e)) * clear;
        let mut left = left_poly;
        for n in 1..=-e {
            left += &(&b.wdisk_white.offset(n) * &num(n, -e - n));
        }
        compare_series(&format!("z^{e}"), &left, &MSeries::zero(vars))
    });
    let white = white.into_iter().flatten().next();

    // Black: X(y(z)) = x(z), with y(z)^{-1} = z (1 + v)^{-1} a power series.
    let yz = LaurentPoly::from_coeffs(vars, "z", y.iter().map(|(e, c)| (e + 1, c.clone())));
    let one = LaurentPoly::one(vars, "z");
    let v = yz.sub(&one);
    let mut g = one.clone();
    let mut vk = one.clone();
    for k in 1..=m {
        vk = keep_up_to(&vk.mul(&v), m);
        g = if k % 2 == 1 { g.sub(&vk) } else { g.add(&vk) };
    }
    let inv_y = LaurentPoly::monomial("z", 1, MSeries::one(vars)).mul(&g);
    let mut lhs = substituted_poly(sol, Color::Black);
    let mut p = one;
    for n in 1..=m {
        p = keep_up_to(&p.mul(&inv_y), m);
        lhs = lhs.add(&p.scale(&b.wdisk_black.offset(n)));
    }
    let x = sol.x();
    let lo = lhs.min_exp().unwrap_or(0).min(x.min_exp().unwrap_or(0));
    let black = (lo..=m).find_map(|e| compare_series(&format!("z^{e}"), &lhs.coeff(e), &x.coeff(e)));

    vec![
        Check::new("parametrization_y_of_x", white)
            .note("clearing_exponent", m)
            .note("z_window", format!("[{}, {}]", -m, top))
            .note("solution_order", sol.order())
            .note("pinned_order", (sol.order() as i32 - m).max(0)),
        Check::new("parametrization_x_of_y", black)
            .note("clearing_exponent", 0)
            .note("z_window", format!("[{lo}, {m}]")),
    ]
}

/// Largest matrix handled by the resultant check.
pub const MAX_SYLVESTER: usize = 12;

fn bi_const(c: MSeries) -> BiTail {
    BiTail::constant(c, ("x", "y"))
}

fn bi_var(sol: &SliceSolution, axis: usize) -> BiTail {
    let e = if axis == 0 { (1, 0) } else { (0, 1) };
    BiTail::from_coeffs(sol.vars(), ("x", "y"), e, (None, None), [(e, MSeries::one(sol.vars()))])
}

/// Determinant by Laplace expansion along rows with memoized minors; no
/// division is needed.
pub fn determinant(m: &[Vec<BiTail>]) -> BiTail {
    let n = m.len();
    let zero = m[0][0].sub(&m[0][0]);
    let mut minor: Vec<Option<BiTail>> = vec![None; 1 << n];
    minor[0] = Some(zero.add(&BiTail::constant(MSeries::one(zero.vars()), zero.aux())));
    let mut masks: Vec<usize> = (1..1usize << n).collect();
    masks.sort_by_key(|s| s.count_ones());
    for mask in masks {
        let row = n - mask.count_ones() as usize;
        let mut acc = zero.clone();
        for (pos, j) in (0..n).filter(|j| mask >> j & 1 == 1).enumerate() {
            let entry = &m[row][j];
            if entry.iter().next().is_none() {
                continue;
            }
            let sub = minor[mask & !(1 << j)].as_ref().expect("smaller minors first");
            let term = entry.mul(sub);
            acc = if pos % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        minor[mask] = Some(acc);
    }
    minor.pop().flatten().expect("full minor")
}

/// Sylvester matrix of `z^{Δ•-1}(x(z) - x)` and `z(y(z) - y)`.
pub fn sylvester(sol: &SliceSolution) -> Result<Vec<Vec<BiTail>>> {
    let (dw, db) = (sol.max_degree(Color::White), sol.max_degree(Color::Black));
    let n = dw + db;
    if n > MAX_SYLVESTER {
        return Err(Error::Domain(format!("Sylvester matrix of size {n} exceeds {MAX_SYLVESTER}")));
    }
    let zero = bi_const(MSeries::zero(sol.vars()));
    let mut mat = vec![vec![zero; n]; n];
    let (x, y) = (bi_var(sol, 0), bi_var(sol, 1));
    for i in 0..dw {
        for k in -1..db as i32 {
            let mut e = bi_const(sol.a(k));
            if k == 0 {
                e = e.sub(&x);
            }
            mat[i][(i as i32 + k + 1) as usize] = e;
        }
    }
    for j in 0..db {
        for k in -1..dw as i32 {
            let mut e = bi_const(sol.b(k));
            if k == 0 {
                e = e.sub(&y);
            }
            mat[dw + j][(dw as i32 - 1 - k + j as i32) as usize] = e;
        }
    }
    Ok(mat)
}

/// `(1 + Σ F◐_{p,q} x^{-p-1} y^{-q-1}) · a_{-1}^{Δ°-1} (x - X(y)) (y - Y(x))`
/// against the resultant `r(x,y)`, for `p ≤ p_max`, `q ≤ q_max`. The product
/// equals `-r`; the check records whether `+r` holds as well.
pub fn resultant_check(b: &ResolventBundle, p_max: u32, q_max: u32) -> Vec<Check> {
    let sol = &b.sol;
    let vars = sol.vars();
    let name = "resultant";
    let r = match sylvester(sol) {
        Ok(mat) => determinant(&mat),
        Err(e) => return vec![Check::flag(name, false, &e.to_string())],
    };
    let gf = Gf::new(sol, p_max.max(q_max) + 1);
    let dob = match gf.dobrushin(p_max, q_max) {
        Ok(d) => d,
        Err(e) => return vec![Check::flag(name, false, &e.to_string())],
    };
    let one = bi_const(MSeries::one(vars));
    let d = one.add(&dob.w);
    let xm = bi_var(sol, 0).sub(&BiTail::from_second("x", &b.x_of_y.full()));
    let ym = bi_var(sol, 1).sub(&BiTail::from_first(&b.y_of_x.full(), "y"));
    let lead = sol.a(-1).pow(sol.max_degree(Color::White) as u32 - 1);
    let left = d.mul(&xm).mul(&ym).scale(&lead);
    let (m, n) = compare_bitails(&left, &r.neg());
    let (literal, _) = compare_bitails(&left, &r);
    let window = left.floor();
    vec![Check::new(name, m)
        .note("coefficients", n)
        .note("matrix_size", sol.max_degree(Color::White) + sol.max_degree(Color::Black))
        .note("sign", -1)
        .note("holds_with_plus_sign", literal.is_none())
        .note("window_floor", serde_json::json!([window.0, window.1]))]
}

/// The grand suite at bounds `bounds`, series order `n`, tail order `m`.
/// The parametrization is checked on a solution lifted to order `n + m` so
/// that clearing by `a_{-1}^m` still pins every coefficient to order `n`.
pub fn verify(bounds: DegreeBounds, n: u32, m: u32, p_max: u32, q_max: u32) -> SuiteReport {
    let sol = solve_slice_system(bounds, n);
    let bundle = build_resolvents(&sol, m);
    let lifted = build_resolvents(&solve_slice_system(bounds, n + m), m);
    let parts: Vec<Vec<Check>> = par::map(&[0, 1, 2, 3, 4], |&i| match i {
        0 => check_pointed_grand(&bundle),
        1 => check_disk_grand(&bundle),
        2 => check_cylinder_grand(&bundle),
        3 => check_parametrization(&lifted),
        _ => resultant_check(&bundle, p_max, q_max),
    });
    SuiteReport::new("grand")
        .param("dw", bounds.white)
        .param("db", bounds.black)
        .param("order", n)
        .param("tail", m)
        .param("p_max", p_max)
        .param("q_max", q_max)
        .with_checks(parts.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{frac, VarSet};

    fn bounds(w: usize, b: usize) -> DegreeBounds {
        DegreeBounds::new(w, b).unwrap()
    }

    fn failures(checks: &[Check]) -> Vec<&Check> {
        checks.iter().filter(|c| !c.passed).collect()
    }

    #[test]
    fn bundle_leading_terms() {
        let sol = solve_slice_system(bounds(2, 2), 4);
        let b = build_resolvents(&sol, 3);
        assert_eq!(b.wdisk_white.offset(1), sol.weights().t());
        assert_eq!(b.z_exc_black.tail.offset(1), MSeries::one(sol.vars()));
        let tw = |d| sol.face_weight(Color::White, d).unwrap();
        assert_eq!(b.y_of_x.poly.coeff(0), tw(1));
        assert_eq!(b.y_of_x.poly.coeff(1), tw(2));
    }

    #[test]
    fn identities_at_small_bounds() {
        for (w, bl) in [(1, 1), (2, 1), (2, 2)] {
            let sol = solve_slice_system(bounds(w, bl), 3);
            let b = build_resolvents(&sol, 4);
            for checks in [check_pointed_grand(&b), check_disk_grand(&b), check_cylinder_grand(&b), resultant_check(&b, 2, 2)] {
                assert!(failures(&checks).is_empty(), "{w}x{bl}: {:?}", failures(&checks));
            }
        }
    }

    #[test]
    fn parametrization_with_lifted_order() {
        let sol = solve_slice_system(bounds(2, 2), 6);
        let checks = check_parametrization(&build_resolvents(&sol, 3));
        assert!(failures(&checks).is_empty(), "{:?}", failures(&checks));
    }

    #[test]
    fn resultant_sign() {
        let sol = solve_slice_system(bounds(1, 1), 4);
        let c = resultant_check(&build_resolvents(&sol, 4), 2, 2);
        assert!(c[0].passed);
        assert_eq!(c[0].notes["holds_with_plus_sign"], false);
    }

    #[test]
    fn broken_resolvent_is_caught() {
        let sol = solve_slice_system(bounds(2, 2), 3);
        let mut b = build_resolvents(&sol, 4);
        let bump = InvTail::with_order(sol.vars(), "x", 4, [(-2, sol.weights().t().pow(2))]);
        b.wdisk_white = b.wdisk_white.add(&bump);
        assert!(!check_disk_grand(&b)[0].passed);
        b.y_of_x.tail = b.wdisk_white.clone();
        assert!(!resultant_check(&b, 2, 2)[0].passed);
    }

    #[test]
    fn factored_log_matches_cleared_form() {
        let v = VarSet::new(["c", "d"], 4).unwrap();
        let (c, d) = (MSeries::var(&v, 0), MSeries::var(&v, 1));
        let u = BiTail::with_orders(&v, ("x", "y"), (4, 4), [((-1, 0), c.clone()), ((-1, -2), d.clone()), ((0, -1), &c * &d)]);
        let one = BiTail::constant(MSeries::one(&v), ("x", "y"));
        let h = one.add(&u).scale_q(&frac(-3, 2)).shift((-1, -2));
        let f = FactoredBiLog::factor(&h, (-1, -2)).unwrap();
        assert_eq!(f.lead, frac(-3, 2));
        let w = f.mixed_log_derivative().unwrap();
        let (l, r) = cleared_mixed_log(&h, &w);
        let (m, n) = compare_bitails(&l, &r);
        assert!(m.is_none(), "{m:?}");
        assert!(n > 0);
    }

    #[test]
    fn determinant_of_a_triangular_matrix() {
        let sol = solve_slice_system(bounds(1, 1), 2);
        let mat = sylvester(&sol).unwrap();
        // [[a_{-1}, a_0 - x], [b_0 - y, 1]].
        let det = determinant(&mat);
        let expected = bi_const(sol.a(-1))
            .sub(&bi_const(sol.a(0)).sub(&bi_var(&sol, 0)).mul(&bi_const(sol.b(0)).sub(&bi_var(&sol, 1))));
        assert_eq!(det, expected);
    }
}
