use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::mseries::MSeries;
use super::tail::{max_floor, product_floor, InvTail};
use super::varset::VarSet;
use crate::error::{Error, Result};
use crate::par;

/// Truncated series in two inverse variables.
///
/// Same conventions as [`InvTail`], applied to each variable independently: a
/// coefficient at `(e1, e2)` is exact and stored iff `e1 >= floor.0` and
/// `e2 >= floor.1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiTail {
    vars: Arc<VarSet>,
    aux: (String, String),
    top: (i32, i32),
    floor: (Option<i32>, Option<i32>),
    coeffs: BTreeMap<(i32, i32), MSeries>,
}

impl BiTail {
    pub fn zero(vars: &Arc<VarSet>, aux: (&str, &str), top: (i32, i32), floor: (Option<i32>, Option<i32>)) -> BiTail {
        BiTail { vars: vars.clone(), aux: (aux.0.into(), aux.1.into()), top, floor, coeffs: BTreeMap::new() }
    }

    pub fn from_coeffs(
        vars: &Arc<VarSet>,
        aux: (&str, &str),
        top: (i32, i32),
        floor: (Option<i32>, Option<i32>),
        coeffs: impl IntoIterator<Item = ((i32, i32), MSeries)>,
    ) -> BiTail {
        let mut t = BiTail::zero(vars, aux, top, floor);
        for (e, c) in coeffs {
            assert!(e.0 <= top.0 && e.1 <= top.1, "coefficient at {e:?} above declared top {top:?}");
            if !t.is_exact_at(e) || c.is_zero() {
                continue;
            }
            let s = &t.coeff(e) + &c;
            t.set(e, s);
        }
        t
    }

    /// Series in inverse powers of both variables with orders `(m1, m2)`.
    pub fn with_orders(
        vars: &Arc<VarSet>,
        aux: (&str, &str),
        m: (u32, u32),
        coeffs: impl IntoIterator<Item = ((i32, i32), MSeries)>,
    ) -> BiTail {
        BiTail::from_coeffs(vars, aux, (0, 0), (Some(-(m.0 as i32)), Some(-(m.1 as i32))), coeffs)
    }

    pub fn constant(c: MSeries, aux: (&str, &str)) -> BiTail {
        let vars = c.vars().clone();
        BiTail::from_coeffs(&vars, aux, (0, 0), (None, None), [((0, 0), c)])
    }

    /// `f(first variable)` viewed as a two-variable series.
    pub fn from_first(t: &InvTail, second: &str) -> BiTail {
        BiTail::from_coeffs(t.vars(), (t.aux(), second), (t.top(), 0), (t.floor(), None), t.iter().map(|(e, c)| ((e, 0), c.clone())))
    }

    /// `g(second variable)` viewed as a two-variable series.
    pub fn from_second(first: &str, t: &InvTail) -> BiTail {
        BiTail::from_coeffs(t.vars(), (first, t.aux()), (0, t.top()), (None, t.floor()), t.iter().map(|(e, c)| ((0, e), c.clone())))
    }

    /// `f(x1) * g(x2)`.
    pub fn outer(f: &InvTail, g: &InvTail) -> BiTail {
        BiTail::from_first(f, g.aux()).mul(&BiTail::from_second(f.aux(), g))
    }

    fn set(&mut self, e: (i32, i32), c: MSeries) {
        if c.is_zero() {
            self.coeffs.remove(&e);
        } else {
            self.coeffs.insert(e, c);
        }
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn aux(&self) -> (&str, &str) {
        (&self.aux.0, &self.aux.1)
    }

    pub fn top(&self) -> (i32, i32) {
        self.top
    }

    pub fn floor(&self) -> (Option<i32>, Option<i32>) {
        self.floor
    }

    pub fn is_exact_at(&self, e: (i32, i32)) -> bool {
        self.floor.0.is_none_or(|f| e.0 >= f) && self.floor.1.is_none_or(|f| e.1 >= f)
    }

    pub fn coeff(&self, e: (i32, i32)) -> MSeries {
        self.coeffs.get(&e).cloned().unwrap_or_else(|| MSeries::zero(&self.vars))
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i32, i32), &MSeries)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    fn check(&self, other: &BiTail) {
        assert_eq!(self.aux, other.aux, "bivariate tails in different variables");
    }

    pub fn add(&self, other: &BiTail) -> BiTail {
        self.check(other);
        let floor = (max_floor(self.floor.0, other.floor.0), max_floor(self.floor.1, other.floor.1));
        let top = (self.top.0.max(other.top.0), self.top.1.max(other.top.1));
        let mut out = BiTail::zero(&self.vars, self.aux(), top, floor);
        for (e, c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            if out.is_exact_at(*e) {
                let s = &out.coeff(*e) + c;
                out.set(*e, s);
            }
        }
        out
    }

    pub fn map(&self, f: impl Fn(&MSeries) -> MSeries) -> BiTail {
        BiTail::from_coeffs(&self.vars, self.aux(), self.top, self.floor, self.coeffs.iter().map(|(e, c)| (*e, f(c))))
    }

    pub fn neg(&self) -> BiTail {
        self.map(|c| -c)
    }

    pub fn sub(&self, other: &BiTail) -> BiTail {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &MSeries) -> BiTail {
        self.map(|x| x * c)
    }

    pub fn scale_q(&self, c: &BigRational) -> BiTail {
        self.map(|x| x.scale(c))
    }

    /// Multiplication by `x1^k.0 x2^k.1`.
    pub fn shift(&self, k: (i32, i32)) -> BiTail {
        BiTail::from_coeffs(
            &self.vars,
            self.aux(),
            (self.top.0 + k.0, self.top.1 + k.1),
            (self.floor.0.map(|f| f + k.0), self.floor.1.map(|f| f + k.1)),
            self.coeffs.iter().map(|(e, c)| ((e.0 + k.0, e.1 + k.1), c.clone())),
        )
    }

    /// Raises floors, forgetting coefficients outside the new window.
    pub fn truncate(&self, floor: (i32, i32)) -> BiTail {
        let f = (max_floor(self.floor.0, Some(floor.0)), max_floor(self.floor.1, Some(floor.1)));
        BiTail::from_coeffs(&self.vars, self.aux(), self.top, f, self.coeffs.iter().map(|(e, c)| (*e, c.clone())))
    }

    pub fn mul(&self, other: &BiTail) -> BiTail {
        self.check(other);
        let top = (self.top.0 + other.top.0, self.top.1 + other.top.1);
        let floor = (
            product_floor(self.floor.0, self.top.0, other.floor.0, other.top.0),
            product_floor(self.floor.1, self.top.1, other.floor.1, other.top.1),
        );
        let probe = BiTail::zero(&self.vars, self.aux(), top, floor);
        let mut targets = BTreeSet::new();
        for i in self.coeffs.keys() {
            for j in other.coeffs.keys() {
                let e = (i.0 + j.0, i.1 + j.1);
                if probe.is_exact_at(e) {
                    targets.insert(e);
                }
            }
        }
        let targets: Vec<(i32, i32)> = targets.into_iter().collect();
        let cells = par::map(&targets, |&e| {
            let mut acc = MSeries::zero(&self.vars);
            for (i, a) in &self.coeffs {
                if let Some(b) = other.coeffs.get(&(e.0 - i.0, e.1 - i.1)) {
                    acc += &(a * b);
                }
            }
            (e, acc)
        });
        BiTail::from_coeffs(&self.vars, self.aux(), top, floor, cells)
    }

    /// Partial derivative in the first (`axis = 0`) or second variable.
    pub fn derivative(&self, axis: usize) -> BiTail {
        let (top, floor) = if axis == 0 {
            ((self.top.0 - 1, self.top.1), (self.floor.0.map(|f| f - 1), self.floor.1))
        } else {
            ((self.top.0, self.top.1 - 1), (self.floor.0, self.floor.1.map(|f| f - 1)))
        };
        let coeffs = self.coeffs.iter().filter_map(|(e, c)| {
            let k = if axis == 0 { e.0 } else { e.1 };
            (k != 0).then(|| {
                let f = if axis == 0 { (e.0 - 1, e.1) } else { (e.0, e.1 - 1) };
                (f, c.scale_int(k as i64))
            })
        });
        BiTail::from_coeffs(&self.vars, self.aux(), top, floor, coeffs)
    }

    /// Exchanges the two variables.
    pub fn transpose(&self) -> BiTail {
        BiTail::from_coeffs(
            &self.vars,
            (&self.aux.1, &self.aux.0),
            (self.top.1, self.top.0),
            (self.floor.1, self.floor.0),
            self.coeffs.iter().map(|(e, c)| ((e.1, e.0), c.clone())),
        )
    }

    /// Renames the variables (same coefficients).
    pub fn rename(&self, aux: (&str, &str)) -> BiTail {
        BiTail { aux: (aux.0.into(), aux.1.into()), ..self.clone() }
    }

    fn power_sum(&self, what: &str, c: impl Fn(u32) -> BigRational) -> Result<BiTail> {
        for e in self.coeffs.keys() {
            if e.0 > 0 || e.1 > 0 {
                return Err(Error::Domain(format!("{what}: argument has positive powers")));
            }
            if *e == (0, 0) {
                return Err(Error::NonZeroConstant);
            }
        }
        let (Some(f0), Some(f1)) = self.floor else {
            return Err(Error::Domain(format!("{what}: argument must be truncated in both variables")));
        };
        let u = BiTail { top: (self.top.0.min(0), self.top.1.min(0)), ..self.clone() };
        let mut out = BiTail::zero(&self.vars, self.aux(), (0, 0), (Some(f0), Some(f1)));
        let mut pk = u.clone();
        let mut k = 1u32;
        while !pk.coeffs.is_empty() && (k as i32) <= -(f0 + f1) {
            out = out.add(&pk.scale_q(&c(k)));
            pk = pk.mul(&u).truncate((f0, f1));
            k += 1;
        }
        Ok(out)
    }

    /// `log(1+u)`.
    pub fn log1p(&self) -> Result<BiTail> {
        self.power_sum("log1p", |k| {
            let s = if k % 2 == 1 { 1 } else { -1 };
            BigRational::new(BigInt::from(s), BigInt::from(k))
        })
    }

    /// `exp(u) - 1`.
    pub fn expm1(&self) -> Result<BiTail> {
        let mut fact = vec![BigInt::one()];
        for k in 1..=64u32 {
            let next = &fact[k as usize - 1] * BigInt::from(k);
            fact.push(next);
        }
        self.power_sum("exp", |k| BigRational::new(BigInt::one(), fact[k as usize].clone()))
    }

    /// `1/(1-u) - 1`.
    pub fn geometric(&self) -> Result<BiTail> {
        self.power_sum("geometric", |_| BigRational::one())
    }

    /// Exponents where both series are exact and at least one may be nonzero,
    /// sorted by decreasing total exponent.
    pub fn common_window(&self, other: &BiTail) -> Vec<(i32, i32)> {
        let lo0 = max_floor(self.floor.0, other.floor.0).expect("window needs a floor in the first variable");
        let lo1 = max_floor(self.floor.1, other.floor.1).expect("window needs a floor in the second variable");
        let hi0 = self.top.0.max(other.top.0);
        let hi1 = self.top.1.max(other.top.1);
        let mut out: Vec<(i32, i32)> = (lo0..=hi0).flat_map(|a| (lo1..=hi1).map(move |b| (a, b))).collect();
        out.sort_by_key(|e| (std::cmp::Reverse(e.0 + e.1), std::cmp::Reverse(e.0)));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outer_product_and_derivatives() {
        let v = VarSet::new(["c"], 4).unwrap();
        let c = MSeries::var(&v, 0);
        let f = InvTail::with_order(&v, "x", 3, [(-1, MSeries::one(&v)), (-2, c.clone())]);
        let g = InvTail::with_order(&v, "y", 3, [(-1, c.clone())]);
        let fg = BiTail::outer(&f, &g);
        assert_eq!(fg.coeff((-2, -1)), &c * &c);
        assert_eq!(fg.floor(), (Some(-3), Some(-3)));
        let d = fg.derivative(0).derivative(1);
        assert_eq!(d.coeff((-3, -2)), (&c * &c).scale_int(2));
        assert_eq!(fg.transpose().coeff((-1, -2)), &c * &c);
    }

    #[test]
    fn exp_log_round_trip() {
        let v = VarSet::new(["c"], 5).unwrap();
        let c = MSeries::var(&v, 0);
        let u = BiTail::with_orders(&v, ("x", "y"), (4, 3), [((-1, -1), c.clone()), ((-2, 0), MSeries::one(&v)), ((0, -1), c.scale_int(3))]);
        let back = u.log1p().unwrap().expm1().unwrap();
        for e in back.common_window(&u) {
            assert_eq!(back.coeff(e), u.coeff(e), "{e:?}");
        }
    }

    #[test]
    fn constant_term_rejected() {
        let v = VarSet::new(["c"], 2).unwrap();
        let u = BiTail::with_orders(&v, ("x", "y"), (2, 2), [((0, 0), MSeries::one(&v))]);
        assert!(matches!(u.log1p(), Err(Error::NonZeroConstant)));
    }
}
