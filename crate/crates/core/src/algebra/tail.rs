use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::mseries::MSeries;
use super::varset::VarSet;
use crate::error::{Error, Result};
use crate::par;

pub(crate) fn max_floor(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Floor of a product: a coefficient of `A*B` at exponent `e` only involves
/// unknown coefficients of `A` when `e < floor_a + top_b`.
pub(crate) fn product_floor(fa: Option<i32>, ta: i32, fb: Option<i32>, tb: i32) -> Option<i32> {
    max_floor(fa.map(|f| f + tb), fb.map(|f| f + ta))
}

/// Truncated Laurent series in `aux⁻¹`, for example `W(x) = Σ F_p x^{-p-1}`.
///
/// `top` bounds the exponents of the underlying exact object. Coefficients
/// with exponent `>= floor` are exact and stored; everything below `floor` is
/// unknown and dropped. `floor = None` marks an exact (polynomial) object.
/// A tail of order `M` in the usual sense has `floor = -M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvTail {
    vars: Arc<VarSet>,
    aux: String,
    top: i32,
    floor: Option<i32>,
    coeffs: BTreeMap<i32, MSeries>,
}

impl InvTail {
    pub fn zero(vars: &Arc<VarSet>, aux: &str, top: i32, floor: Option<i32>) -> InvTail {
        InvTail { vars: vars.clone(), aux: aux.into(), top, floor, coeffs: BTreeMap::new() }
    }

    /// Tail of order `m` (exact down to `aux^-m`) with the given coefficients.
    pub fn with_order(vars: &Arc<VarSet>, aux: &str, m: u32, coeffs: impl IntoIterator<Item = (i32, MSeries)>) -> InvTail {
        InvTail::from_coeffs(vars, aux, 0, Some(-(m as i32)), coeffs)
    }

    pub fn from_coeffs(
        vars: &Arc<VarSet>,
        aux: &str,
        top: i32,
        floor: Option<i32>,
        coeffs: impl IntoIterator<Item = (i32, MSeries)>,
    ) -> InvTail {
        let mut t = InvTail::zero(vars, aux, top, floor);
        for (e, c) in coeffs {
            assert!(e <= top, "coefficient at {aux}^{e} above declared top {top}");
            if floor.is_some_and(|f| e < f) || c.is_zero() {
                continue;
            }
            let s = &t.coeff(e) + &c;
            t.set(e, s);
        }
        // Everything at or above the floor is known, so the support bounds
        // the true object.
        if let Some(f) = floor {
            let hi = t.coeffs.keys().next_back().copied().unwrap_or(f - 1);
            t.top = t.top.min(hi.max(f - 1));
        }
        t
    }

    /// Exact polynomial in `aux` and `aux⁻¹`.
    pub fn polynomial(vars: &Arc<VarSet>, aux: &str, coeffs: impl IntoIterator<Item = (i32, MSeries)>) -> InvTail {
        let coeffs: Vec<(i32, MSeries)> = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let top = coeffs.iter().map(|(e, _)| *e).max().unwrap_or(0);
        InvTail::from_coeffs(vars, aux, top, None, coeffs)
    }

    pub fn constant(c: MSeries, aux: &str) -> InvTail {
        let vars = c.vars().clone();
        InvTail::polynomial(&vars, aux, [(0, c)])
    }

    fn set(&mut self, e: i32, c: MSeries) {
        if c.is_zero() {
            self.coeffs.remove(&e);
        } else {
            self.coeffs.insert(e, c);
        }
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn aux(&self) -> &str {
        &self.aux
    }

    pub fn top(&self) -> i32 {
        self.top
    }

    pub fn floor(&self) -> Option<i32> {
        self.floor
    }

    /// Number of exact inverse powers, when finite.
    pub fn tail_order(&self) -> Option<i32> {
        self.floor.map(|f| -f)
    }

    pub fn coeff(&self, e: i32) -> MSeries {
        self.coeffs.get(&e).cloned().unwrap_or_else(|| MSeries::zero(&self.vars))
    }

    /// Coefficient of `aux^-j`.
    pub fn offset(&self, j: i32) -> MSeries {
        self.coeff(-j)
    }

    pub fn is_exact_at(&self, e: i32) -> bool {
        self.floor.is_none_or(|f| e >= f)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, &MSeries)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    fn check(&self, other: &InvTail) {
        assert_eq!(self.aux, other.aux, "tails in different variables");
    }

    pub fn add(&self, other: &InvTail) -> InvTail {
        self.check(other);
        let floor = max_floor(self.floor, other.floor);
        let top = self.top.max(other.top);
        let mut out = InvTail::zero(&self.vars, &self.aux, top, floor);
        for (e, c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            if out.is_exact_at(*e) {
                let s = &out.coeff(*e) + c;
                out.set(*e, s);
            }
        }
        out
    }

    pub fn neg(&self) -> InvTail {
        self.map(|c| -c)
    }

    pub fn sub(&self, other: &InvTail) -> InvTail {
        self.add(&other.neg())
    }

    pub fn map(&self, f: impl Fn(&MSeries) -> MSeries) -> InvTail {
        InvTail::from_coeffs(&self.vars, &self.aux, self.top, self.floor, self.coeffs.iter().map(|(e, c)| (*e, f(c))))
    }

    pub fn scale(&self, c: &MSeries) -> InvTail {
        self.map(|x| x * c)
    }

    pub fn scale_q(&self, c: &BigRational) -> InvTail {
        self.map(|x| x.scale(c))
    }

    /// Multiplication by `aux^k`.
    pub fn shift(&self, k: i32) -> InvTail {
        InvTail::from_coeffs(
            &self.vars,
            &self.aux,
            self.top + k,
            self.floor.map(|f| f + k),
            self.coeffs.iter().map(|(e, c)| (e + k, c.clone())),
        )
    }

    /// Raises the floor, forgetting coefficients below `floor`.
    pub fn truncate(&self, floor: i32) -> InvTail {
        let f = max_floor(self.floor, Some(floor));
        InvTail::from_coeffs(&self.vars, &self.aux, self.top, f, self.coeffs.iter().map(|(e, c)| (*e, c.clone())))
    }

    pub fn mul(&self, other: &InvTail) -> InvTail {
        self.check(other);
        let top = self.top + other.top;
        let floor = product_floor(self.floor, self.top, other.floor, other.top);
        let (Some(lo_a), Some(lo_b)) = (self.coeffs.keys().next(), other.coeffs.keys().next()) else {
            return InvTail::zero(&self.vars, &self.aux, top, floor);
        };
        let lo = floor.map_or(lo_a + lo_b, |f| f.max(lo_a + lo_b));
        let hi = self.coeffs.keys().next_back().unwrap() + other.coeffs.keys().next_back().unwrap();
        let exps: Vec<i32> = (lo..=hi).collect();
        let cells = par::map(&exps, |&e| {
            let mut acc = MSeries::zero(&self.vars);
            for (i, a) in &self.coeffs {
                if let Some(b) = other.coeffs.get(&(e - i)) {
                    acc += &(a * b);
                }
            }
            (e, acc)
        });
        InvTail::from_coeffs(&self.vars, &self.aux, top, floor, cells)
    }

    pub fn pow(&self, k: u32) -> InvTail {
        let mut out = InvTail::constant(MSeries::one(&self.vars), &self.aux);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// `d/d aux`.
    pub fn derivative(&self) -> InvTail {
        InvTail::from_coeffs(
            &self.vars,
            &self.aux,
            self.top - 1,
            self.floor.map(|f| f - 1),
            self.coeffs
                .iter()
                .filter(|(e, _)| **e != 0)
                .map(|(e, c)| (e - 1, c.scale_int(*e as i64))),
        )
    }

    fn require_small(&self, what: &str) -> Result<i32> {
        if let Some((e, _)) = self.coeffs.iter().next_back() {
            if *e >= 0 {
                return Err(if *e == 0 { Error::NonZeroConstant } else {
                    Error::Domain(format!("{what}: argument has positive powers of {}", self.aux))
                });
            }
        }
        self.floor.ok_or_else(|| Error::Domain(format!("{what}: argument must be a truncated tail")))
    }

    /// Σ_{k≥1} c_k u^k for a tail `u` without nonnegative powers, truncated at
    /// the floor of `u`.
    fn power_sum(&self, what: &str, c: impl Fn(u32) -> BigRational) -> Result<InvTail> {
        let floor = self.require_small(what)?;
        let u = InvTail { top: self.top.min(-1), ..self.clone() };
        let mut out = InvTail::zero(&self.vars, &self.aux, -1, Some(floor));
        let mut pk = u.clone();
        let mut k = 1u32;
        while !pk.coeffs.is_empty() && (k as i32) <= -floor {
            out = out.add(&pk.scale_q(&c(k)));
            pk = pk.mul(&u).truncate(floor);
            k += 1;
        }
        Ok(out)
    }

    /// `log(1+u)`.
    pub fn log1p(&self) -> Result<InvTail> {
        self.power_sum("log1p", |k| {
            let s = if k % 2 == 1 { 1 } else { -1 };
            BigRational::new(BigInt::from(s), BigInt::from(k))
        })
    }

    /// `exp(u) - 1`.
    pub fn expm1(&self) -> Result<InvTail> {
        let mut fact = vec![BigInt::one()];
        for k in 1..=64u32 {
            let next = &fact[k as usize - 1] * BigInt::from(k);
            fact.push(next);
        }
        self.power_sum("exp", |k| BigRational::new(BigInt::one(), fact[k as usize].clone()))
    }

    /// `exp(u)`.
    pub fn exp(&self) -> Result<InvTail> {
        Ok(self.expm1()?.add(&InvTail::constant(MSeries::one(&self.vars), &self.aux)))
    }

    /// `1/(1-u) - 1 = Σ_{k≥1} u^k`.
    pub fn geometric(&self) -> Result<InvTail> {
        self.power_sum("geometric", |_| BigRational::one())
    }

    /// Inverse of a tail whose leading coefficient (at `top`) is exactly 1.
    pub fn monic_inverse(&self) -> Result<InvTail> {
        let lead = self.coeff(self.top);
        if lead != MSeries::one(&self.vars) {
            return Err(Error::Domain("leading coefficient is not 1".into()));
        }
        let one = InvTail::constant(MSeries::one(&self.vars), &self.aux);
        let v = self.shift(-self.top).sub(&one);
        let inv = one.add(&v.neg().geometric()?);
        Ok(inv.shift(-self.top))
    }

    /// Exponents where both tails are exact, highest first.
    pub fn common_window(&self, other: &InvTail) -> Vec<i32> {
        let hi = self.top.max(other.top);
        let lo = max_floor(self.floor, other.floor).expect("comparison of two exact polynomials needs a window");
        (lo..=hi).rev().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars() -> Arc<VarSet> {
        VarSet::new(["a", "b"], 6).unwrap()
    }

    #[test]
    fn log_and_exp_of_zero() {
        let v = vars();
        let z = InvTail::zero(&v, "x", -1, Some(-5));
        assert!(z.log1p().unwrap().iter().next().is_none());
        assert_eq!(z.exp().unwrap().coeff(0), MSeries::one(&v));
    }

    #[test]
    fn nonzero_constant_is_rejected() {
        let v = vars();
        let u = InvTail::with_order(&v, "x", 4, [(0, MSeries::one(&v))]);
        assert!(matches!(u.log1p(), Err(Error::NonZeroConstant)));
    }

    #[test]
    fn geometric_series_inverts() {
        let v = vars();
        let a = MSeries::var(&v, 0);
        let u = InvTail::with_order(&v, "x", 6, [(-1, a.clone()), (-3, MSeries::var(&v, 1))]);
        let one = InvTail::constant(MSeries::one(&v), "x");
        let g = one.add(&u.geometric().unwrap());
        let prod = g.mul(&one.sub(&u));
        for e in prod.common_window(&one) {
            assert_eq!(prod.coeff(e), one.coeff(e), "x^{e}");
        }
    }

    #[test]
    fn product_floor_improves_for_pure_tails() {
        let v = vars();
        let u = InvTail::with_order(&v, "x", 3, [(-1, MSeries::var(&v, 0))]);
        assert_eq!(u.mul(&u).floor(), Some(-4));
        let p = InvTail::polynomial(&v, "x", [(2, MSeries::one(&v))]);
        assert_eq!(u.mul(&p).floor(), Some(-1));
    }

    #[test]
    fn monic_inverse() {
        let v = vars();
        let b = MSeries::var(&v, 1);
        let t = InvTail::with_order(&v, "y", 6, [(-1, MSeries::one(&v)), (-2, b.clone())]);
        let inv = t.monic_inverse().unwrap();
        assert_eq!(inv.coeff(1), MSeries::one(&v));
        assert_eq!(inv.coeff(0), -&b);
        let prod = t.mul(&inv);
        let one = InvTail::constant(MSeries::one(&v), "y");
        for e in prod.common_window(&one) {
            assert_eq!(prod.coeff(e), one.coeff(e));
        }
    }
}
