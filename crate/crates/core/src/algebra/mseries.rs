use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::varset::VarSet;
use crate::error::{Error, Result};
use crate::par;

/// Exponent vector, one entry per variable of the owning [`VarSet`].
pub type Exps = Box<[u16]>;

fn degree(e: &[u16]) -> u32 {
    e.iter().map(|&x| x as u32).sum()
}

/// Truncated multivariate power series with exact rational coefficients.
///
/// Terms of total degree above the variable set's order are never stored and
/// no stored coefficient is zero, so structural equality is series equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MSeries {
    vars: Arc<VarSet>,
    terms: BTreeMap<Exps, BigRational>,
}

#[derive(Default)]
struct Acc {
    int: BigInt,
    frac: Option<BigRational>,
}

impl Acc {
    fn push(&mut self, a: &BigRational, b: &BigRational) {
        if a.is_integer() && b.is_integer() {
            self.int += a.numer() * b.numer();
        } else {
            let p = a * b;
            match &mut self.frac {
                Some(f) => *f += p,
                None => self.frac = Some(p),
            }
        }
    }

    fn merge(&mut self, other: Acc) {
        self.int += other.int;
        if let Some(f) = other.frac {
            match &mut self.frac {
                Some(g) => *g += f,
                None => self.frac = Some(f),
            }
        }
    }

    fn finish(self) -> BigRational {
        let int = BigRational::from_integer(self.int);
        match self.frac {
            Some(f) => f + int,
            None => int,
        }
    }
}

const PAR_MUL_THRESHOLD: usize = 1 << 14;

impl MSeries {
    pub fn zero(vars: &Arc<VarSet>) -> MSeries {
        MSeries { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &Arc<VarSet>) -> MSeries {
        MSeries::constant(vars, BigRational::one())
    }

    pub fn constant(vars: &Arc<VarSet>, c: BigRational) -> MSeries {
        MSeries::monomial(vars, &vec![0; vars.len()], c)
    }

    pub fn from_int(vars: &Arc<VarSet>, c: i64) -> MSeries {
        MSeries::constant(vars, BigRational::from_integer(c.into()))
    }

    /// `c * x^e`, or zero if the degree exceeds the truncation order.
    pub fn monomial(vars: &Arc<VarSet>, exps: &[u16], c: BigRational) -> MSeries {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut s = MSeries::zero(vars);
        if !c.is_zero() && degree(exps) <= vars.order() {
            s.terms.insert(exps.into(), c);
        }
        s
    }

    /// The variable with index `idx`.
    pub fn var(vars: &Arc<VarSet>, idx: usize) -> MSeries {
        let mut e = vec![0u16; vars.len()];
        e[idx] = 1;
        MSeries::monomial(vars, &e, BigRational::one())
    }

    pub fn var_named(vars: &Arc<VarSet>, name: &str) -> Result<MSeries> {
        let idx = vars.index_of(name).ok_or_else(|| Error::UnknownVariable(name.into()))?;
        Ok(MSeries::var(vars, idx))
    }

    /// Builds a series from raw terms, dropping zeros and over-degree terms and
    /// summing repeated exponent vectors.
    pub fn from_terms(vars: &Arc<VarSet>, terms: impl IntoIterator<Item = (Vec<u16>, BigRational)>) -> MSeries {
        let mut s = MSeries::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length");
            if degree(&e) > vars.order() {
                continue;
            }
            s.add_term(e.into_boxed_slice(), c);
        }
        s
    }

    fn add_term(&mut self, e: Exps, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &Arc<VarSet> {
        &self.vars
    }

    pub fn order(&self) -> u32 {
        self.vars.order()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl Iterator<Item = (&[u16], &BigRational)> {
        self.terms.iter().map(|(e, c)| (&**e, c))
    }

    pub fn coeff(&self, exps: &[u16]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&vec![0; self.vars.len()])
    }

    /// Smallest total degree present, `None` for zero.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.keys().map(|e| degree(e)).min()
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    fn same_vars(&self, other: &MSeries) -> Result<()> {
        if Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::VarSetMismatch)
        }
    }

    pub fn checked_add(&self, other: &MSeries) -> Result<MSeries> {
        self.same_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &MSeries) -> Result<MSeries> {
        self.same_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &MSeries) -> Result<MSeries> {
        self.same_vars(other)?;
        let n = self.order();
        if self.is_zero() || other.is_zero() {
            return Ok(MSeries::zero(&self.vars));
        }
        let mut right: Vec<(u32, &Exps, &BigRational)> =
            other.terms.iter().map(|(e, c)| (degree(e), e, c)).collect();
        right.sort_by_key(|r| r.0);
        let left: Vec<(u32, &Exps, &BigRational)> = self
            .terms
            .iter()
            .map(|(e, c)| (degree(e), e, c))
            .filter(|l| l.0 <= n)
            .collect();

        let kernel = |chunk: &[(u32, &Exps, &BigRational)]| {
            let mut acc: HashMap<Exps, Acc> = HashMap::new();
            for &(da, ea, ca) in chunk {
                for &(db, eb, cb) in &right {
                    if da + db > n {
                        break;
                    }
                    let e: Exps = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                    acc.entry(e).or_default().push(ca, cb);
                }
            }
            acc
        };

        let acc = if left.len() * right.len() >= PAR_MUL_THRESHOLD && left.len() > 1 {
            let pieces = left.len().min(32);
            let size = left.len().div_ceil(pieces);
            let chunks: Vec<&[(u32, &Exps, &BigRational)]> = left.chunks(size).collect();
            let parts = par::map(&chunks, |c| kernel(c));
            let mut it = parts.into_iter();
            let mut acc = it.next().unwrap_or_default();
            for part in it {
                for (e, a) in part {
                    acc.entry(e).or_default().merge(a);
                }
            }
            acc
        } else {
            kernel(&left)
        };

        let terms = acc
            .into_iter()
            .map(|(e, a)| (e, a.finish()))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Ok(MSeries { vars: self.vars.clone(), terms })
    }

    pub fn scale(&self, c: &BigRational) -> MSeries {
        if c.is_zero() {
            return MSeries::zero(&self.vars);
        }
        MSeries {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> MSeries {
        self.scale(&BigRational::from_integer(c.into()))
    }

    pub fn pow(&self, k: u32) -> MSeries {
        let mut out = MSeries::one(&self.vars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = &out * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        out
    }

    /// Partial derivative in the variable with index `idx`.
    pub fn derivative(&self, idx: usize) -> MSeries {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e[idx];
            if k == 0 {
                continue;
            }
            let mut f = e.clone();
            f[idx] -= 1;
            terms.insert(f, c * BigRational::from_integer(k.into()));
        }
        MSeries { vars: self.vars.clone(), terms }
    }

    pub fn derivative_by(&self, name: &str) -> Result<MSeries> {
        let idx = self.vars.index_of(name).ok_or_else(|| Error::UnknownVariable(name.into()))?;
        Ok(self.derivative(idx))
    }

    /// Drops every term of total degree above `order`; the result lives in the
    /// same variables at the lower order.
    pub fn truncate(&self, order: u32) -> MSeries {
        let vars = self.vars.with_order(order.min(self.order()));
        self.truncate_into(&vars)
    }

    fn truncate_into(&self, vars: &Arc<VarSet>) -> MSeries {
        MSeries {
            vars: vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| degree(e) <= vars.order())
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Re-expresses the series over `target`, matching variables by name.
    /// Variables absent from `target` must not occur; terms above the target
    /// order are dropped.
    pub fn embed(&self, target: &Arc<VarSet>) -> Result<MSeries> {
        let map: Vec<Option<usize>> = self.vars.names().iter().map(|n| target.index_of(n)).collect();
        let mut out = MSeries::zero(target);
        for (e, c) in &self.terms {
            let mut f = vec![0u16; target.len()];
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => f[j] = k,
                    None => return Err(Error::UnknownVariable(self.vars.names()[i].clone())),
                }
            }
            if degree(&f) <= target.order() {
                out.add_term(f.into_boxed_slice(), c.clone());
            }
        }
        Ok(out)
    }

    /// Keeps the terms whose exponent vector satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&[u16]) -> bool) -> MSeries {
        MSeries {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Renders one exponent vector as `t^2*tw1`, or `1` for the empty monomial.
    pub fn format_monomial(vars: &VarSet, exps: &[u16]) -> String {
        let parts: Vec<String> = exps
            .iter()
            .zip(vars.names())
            .filter(|(k, _)| **k > 0)
            .map(|(k, n)| if *k == 1 { n.clone() } else { format!("{n}^{k}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// First exponent vector (lexicographic) where the two series differ.
    pub fn first_difference(&self, other: &MSeries) -> Option<(Exps, BigRational, BigRational)> {
        let mut keys: Vec<&Exps> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        for e in keys {
            let a = self.coeff(e);
            let b = other.coeff(e);
            if a != b {
                return Some((e.clone(), a, b));
            }
        }
        None
    }
}

impl fmt::Display for MSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Exps, &BigRational)> = self.terms.iter().collect();
        terms.sort_by(|a, b| degree(a.0).cmp(&degree(b.0)).then_with(|| b.0.cmp(a.0)));
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let mono = MSeries::format_monomial(&self.vars, e);
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            match (mag.is_one(), mono == "1") {
                (true, _) => write!(f, "{mono}")?,
                (false, true) => write!(f, "{mag}")?,
                (false, false) => write!(f, "{mag}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl Add for &MSeries {
    type Output = MSeries;
    fn add(self, rhs: &MSeries) -> MSeries {
        self.checked_add(rhs).expect("series addition")
    }
}

impl Sub for &MSeries {
    type Output = MSeries;
    fn sub(self, rhs: &MSeries) -> MSeries {
        self.checked_sub(rhs).expect("series subtraction")
    }
}

impl Mul for &MSeries {
    type Output = MSeries;
    fn mul(self, rhs: &MSeries) -> MSeries {
        self.checked_mul(rhs).expect("series multiplication")
    }
}

impl Neg for &MSeries {
    type Output = MSeries;
    fn neg(self) -> MSeries {
        MSeries {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl AddAssign<&MSeries> for MSeries {
    fn add_assign(&mut self, rhs: &MSeries) {
        self.same_vars(rhs).expect("series addition");
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), c.clone());
        }
    }
}

impl SubAssign<&MSeries> for MSeries {
    fn sub_assign(&mut self, rhs: &MSeries) {
        self.same_vars(rhs).expect("series subtraction");
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), -c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn truncated_products() {
        let v2 = VarSet::new(["t"], 2).unwrap();
        let t = MSeries::var(&v2, 0);
        assert_eq!((&t * &t).coeff(&[2]), q(1, 1));

        let v1 = VarSet::new(["t"], 1).unwrap();
        let t = MSeries::var(&v1, 0);
        assert!((&t * &t).is_zero());

        let v3 = VarSet::new(["t"], 3).unwrap();
        let one = MSeries::one(&v3);
        let t = MSeries::var(&v3, 0);
        let p = &(&one + &t) * &(&one - &t);
        assert_eq!(p, &one - &(&t * &t));
    }

    #[test]
    fn derivatives() {
        let v = VarSet::hypermap(2, 2, 4);
        let t = MSeries::var(&v, 0);
        let tw1 = MSeries::var(&v, 1);
        let tw2 = MSeries::var(&v, 2);
        let tb2 = MSeries::var(&v, 4);
        assert_eq!((&t * &t).derivative_by("t").unwrap(), t.scale_int(2));
        assert!(tw1.derivative_by("t").unwrap().is_zero());
        let m = &(&t * &tw2) * &tb2;
        assert_eq!(m.derivative_by("tw2").unwrap(), &t * &tb2);
        assert!(matches!(m.derivative_by("x"), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn mismatch_is_reported() {
        let a = MSeries::one(&VarSet::new(["t"], 2).unwrap());
        let b = MSeries::one(&VarSet::new(["s"], 2).unwrap());
        assert!(matches!(a.checked_mul(&b), Err(Error::VarSetMismatch)));
    }

    #[test]
    fn rational_coefficients() {
        let v = VarSet::new(["t"], 4).unwrap();
        let t = MSeries::var(&v, 0);
        let half = t.scale(&q(1, 2));
        let third = t.scale(&q(1, 3));
        assert_eq!((&half * &third).coeff(&[2]), q(1, 6));
        assert_eq!((&half + &third).coeff(&[1]), q(5, 6));
    }

    #[test]
    fn display() {
        let v = VarSet::hypermap(1, 1, 3);
        let t = MSeries::var(&v, 0);
        let s = &(&t * &t).scale_int(2) - &MSeries::var(&v, 1).scale(&q(1, 2));
        assert_eq!(s.to_string(), "-1/2*tw1 + 2*t^2");
    }

    #[test]
    fn embed_and_truncate() {
        let v = VarSet::hypermap(1, 1, 4);
        let t = MSeries::var(&v, 0);
        let s = (&MSeries::one(&v) + &t).pow(4);
        assert_eq!(s.truncate(2).len(), 3);
        let w = VarSet::new(["tb1", "t", "tw1"], 6).unwrap();
        let e = s.embed(&w).unwrap();
        assert_eq!(e.coeff(&[0, 3, 0]), q(4, 1));
    }
}
