use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::mseries::MSeries;
use super::varset::VarSet;
use crate::par;

/// Laurent polynomial in one auxiliary variable with series coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    vars: Arc<VarSet>,
    aux: String,
    coeffs: BTreeMap<i32, MSeries>,
}

impl LaurentPoly {
    pub fn zero(vars: &Arc<VarSet>, aux: &str) -> LaurentPoly {
        LaurentPoly { vars: vars.clone(), aux: aux.into(), coeffs: BTreeMap::new() }
    }

    pub fn one(vars: &Arc<VarSet>, aux: &str) -> LaurentPoly {
        LaurentPoly::monomial(aux, 0, MSeries::one(vars))
    }

    /// `c * aux^e`.
    pub fn monomial(aux: &str, e: i32, c: MSeries) -> LaurentPoly {
        let mut p = LaurentPoly::zero(c.vars(), aux);
        p.set(e, c);
        p
    }

    pub fn from_coeffs(vars: &Arc<VarSet>, aux: &str, coeffs: impl IntoIterator<Item = (i32, MSeries)>) -> LaurentPoly {
        let mut p = LaurentPoly::zero(vars, aux);
        for (e, c) in coeffs {
            let sum = &p.coeff(e) + &c;
            p.set(e, sum);
        }
        p
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

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `aux^e`, zero outside the support.
    pub fn coeff(&self, e: i32) -> MSeries {
        self.coeffs.get(&e).cloned().unwrap_or_else(|| MSeries::zero(&self.vars))
    }

    pub fn coeff_ref(&self, e: i32) -> Option<&MSeries> {
        self.coeffs.get(&e)
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, &MSeries)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            let s = &out.coeff(*e) + c;
            out.set(*e, s);
        }
        out
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.scale_int(-1))
    }

    pub fn scale(&self, c: &MSeries) -> LaurentPoly {
        LaurentPoly::from_coeffs(&self.vars, &self.aux, self.coeffs.iter().map(|(e, x)| (*e, x * c)))
    }

    pub fn scale_int(&self, c: i64) -> LaurentPoly {
        LaurentPoly::from_coeffs(&self.vars, &self.aux, self.coeffs.iter().map(|(e, x)| (*e, x.scale_int(c))))
    }

    /// Product; each output coefficient is an independent convolution.
    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let (Some(lo_a), Some(hi_a), Some(lo_b), Some(hi_b)) =
            (self.min_exp(), self.max_exp(), other.min_exp(), other.max_exp())
        else {
            return LaurentPoly::zero(&self.vars, &self.aux);
        };
        let exps: Vec<i32> = (lo_a + lo_b..=hi_a + hi_b).collect();
        let cells = par::map(&exps, |&e| {
            let mut acc = MSeries::zero(&self.vars);
            for (i, a) in &self.coeffs {
                if let Some(b) = other.coeffs.get(&(e - i)) {
                    acc += &(a * b);
                }
            }
            (e, acc)
        });
        LaurentPoly::from_coeffs(&self.vars, &self.aux, cells)
    }

    pub fn pow(&self, p: u32) -> LaurentPoly {
        let mut out = LaurentPoly::one(&self.vars, &self.aux);
        for _ in 0..p {
            out = out.mul(self);
        }
        out
    }

    /// Powers `self^0 ..= self^p`.
    pub fn powers(&self, p: u32) -> Vec<LaurentPoly> {
        let mut out = Vec::with_capacity(p as usize + 1);
        out.push(LaurentPoly::one(&self.vars, &self.aux));
        for k in 1..=p as usize {
            let next = out[k - 1].mul(self);
            out.push(next);
        }
        out
    }

    /// Applies `f` to every coefficient.
    pub fn map(&self, f: impl Fn(&MSeries) -> MSeries) -> LaurentPoly {
        LaurentPoly::from_coeffs(&self.vars, &self.aux, self.coeffs.iter().map(|(e, c)| (*e, f(c))))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.coeffs.iter().rev().map(|(e, c)| format!("({c})*{}^{e}", self.aux)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_of_a_three_term_polynomial() {
        let v = VarSet::new(["a-1", "a0", "a1"], 4).unwrap();
        let a: Vec<MSeries> = (0..3).map(|i| MSeries::var(&v, i)).collect();
        let x = LaurentPoly::from_coeffs(&v, "z", [(1, a[0].clone()), (0, a[1].clone()), (-1, a[2].clone())]);
        let x2 = x.pow(2);
        assert_eq!(x2.coeff(1), (&a[0] * &a[1]).scale_int(2));
        assert_eq!(x2.min_exp(), Some(-2));
        assert_eq!(x2.max_exp(), Some(2));
        assert!(x.coeff(5).is_zero());
        assert_eq!(x.pow(0), LaurentPoly::one(&v, "z"));
        assert_eq!(x.pow(1), x);
    }

    #[test]
    fn powers_match_pow() {
        let v = VarSet::new(["u"], 5).unwrap();
        let u = MSeries::var(&v, 0);
        let p = LaurentPoly::from_coeffs(&v, "z", [(-1, MSeries::one(&v)), (2, u)]);
        let ps = p.powers(4);
        for (k, q) in ps.iter().enumerate() {
            assert_eq!(*q, p.pow(k as u32));
        }
    }
}
