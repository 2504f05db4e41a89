//! Sparse multivariate Laurent polynomials over a number field.
//!
//! Terms live in a `BTreeMap` keyed by exponent vector, so iteration (and
//! the canonical text form) follows ascending lexicographic exponent order.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use smallvec::SmallVec;

use super::number_field::{NfElem, NumberField};
use super::rational::Rational;
use crate::error::{Error, Result};

/// Integer exponent vector; doubles as a lattice cell in `Z^d`.
pub type Exponent = SmallVec<[i32; 4]>;

pub fn exponent(v: &[i32]) -> Exponent {
    SmallVec::from_slice(v)
}

#[derive(Clone)]
pub struct LaurentPoly {
    field: Arc<NumberField>,
    nvars: usize,
    terms: BTreeMap<Exponent, NfElem>,
}

impl LaurentPoly {
    pub fn zero(field: &Arc<NumberField>, nvars: usize) -> Self {
        LaurentPoly { field: field.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: &Arc<NumberField>, nvars: usize, c: NfElem) -> Self {
        Self::monomial(field, exponent(&vec![0; nvars]), c)
    }

    pub fn one(field: &Arc<NumberField>, nvars: usize) -> Self {
        Self::constant(field, nvars, NfElem::from_i64(1))
    }

    pub fn monomial(field: &Arc<NumberField>, exp: Exponent, c: NfElem) -> Self {
        let nvars = exp.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { field: field.clone(), nvars, terms }
    }

    /// `z_i` (zero-based index).
    pub fn var(field: &Arc<NumberField>, nvars: usize, i: usize) -> Self {
        let mut e = exponent(&vec![0; nvars]);
        e[i] = 1;
        Self::monomial(field, e, NfElem::from_i64(1))
    }

    /// Builds from `(exponent, rational coefficient)` pairs, merging repeats.
    pub fn from_terms<I>(field: &Arc<NumberField>, nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, NfElem)>,
    {
        let mut p = Self::zero(field, nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length does not match the number of variables");
            p.add_term(e, &c);
        }
        p
    }

    /// Convenience constructor with small integer coefficients.
    pub fn from_int_terms(field: &Arc<NumberField>, nvars: usize, terms: &[(&[i32], i64)]) -> Self {
        Self::from_terms(
            field,
            nvars,
            terms.iter().map(|(e, c)| (exponent(e), NfElem::from_i64(*c))),
        )
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, NfElem> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Exponent, NfElem> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[i32]) -> NfElem {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    /// The constant coefficient if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<NfElem> {
        match self.terms.len() {
            0 => Some(NfElem::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add_term(&mut self, e: Exponent, c: &NfElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = v.add(c);
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DomainMismatch(format!(
                "{} variables vs {} variables",
                self.nvars, other.nvars
            )));
        }
        if !self.field.same_as(&other.field) {
            return Err(Error::DomainMismatch(format!("{:?} vs {:?}", self.field, other.field)));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        if self.field.is_rational() && !other.field.is_rational() {
            out.field = other.field.clone();
        }
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let field = if self.field.is_rational() { &other.field } else { &self.field };
        let mut out = Self::zero(field, self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponent = ea.iter().zip(eb.iter()).map(|(a, b)| a + b).collect();
                let c = field.mul(ca, cb);
                out.add_term(e, &c);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &NfElem) -> Self {
        if c.is_zero() {
            return Self::zero(&self.field, self.nvars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, a)| (e.clone(), self.field.mul(a, c)))
            .collect();
        LaurentPoly { field: self.field.clone(), nvars: self.nvars, terms }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale(&NfElem::from_rational(q.clone()))
    }

    /// Multiplication by the monomial `z^shift`.
    pub fn shift(&self, shift: &[i32]) -> Self {
        assert_eq!(shift.len(), self.nvars);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
            .collect();
        LaurentPoly { field: self.field.clone(), nvars: self.nvars, terms }
    }

    /// The substitution `z -> z^-1`.
    pub fn conjugate_z(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().map(|x| -x).collect(), c.clone()))
            .collect();
        LaurentPoly { field: self.field.clone(), nvars: self.nvars, terms }
    }

    /// Reinterprets the coefficients in a (compatible) larger field.
    pub fn with_field(&self, field: &Arc<NumberField>) -> Self {
        assert!(
            self.field.is_rational() || self.field.same_as(field),
            "coefficients cannot be moved between distinct number fields"
        );
        LaurentPoly { field: field.clone(), nvars: self.nvars, terms: self.terms.clone() }
    }

    /// Componentwise minimum exponent (`None` for zero).
    pub fn min_exponents(&self) -> Option<Exponent> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| acc.iter().zip(e.iter()).map(|(a, b)| *a.min(b)).collect()))
    }

    pub fn max_exponents(&self) -> Option<Exponent> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| acc.iter().zip(e.iter()).map(|(a, b)| *a.max(b)).collect()))
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x >= 0))
    }

    /// Evaluates at a point of `k^d` with nonzero coordinates where needed.
    pub fn eval(&self, point: &[NfElem]) -> Option<NfElem> {
        let f = &self.field;
        let mut acc = NfElem::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e.iter()) {
                let base = if k < 0 { f.inv(x)? } else { x.clone() };
                for _ in 0..k.unsigned_abs() {
                    t = f.mul(&t, &base);
                }
            }
            acc = acc.add(&t);
        }
        Some(acc)
    }

    /// Groups the terms by the first `k` exponents, returning the remaining
    /// variables as coefficient polynomials.
    pub fn split_leading_vars(&self, k: usize) -> BTreeMap<Exponent, LaurentPoly> {
        let mut out: BTreeMap<Exponent, LaurentPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let head: Exponent = e[..k].iter().copied().collect();
            let tail: Exponent = e[k..].iter().copied().collect();
            out.entry(head)
                .or_insert_with(|| LaurentPoly::zero(&self.field, self.nvars - k))
                .add_term(tail, c);
        }
        out
    }

    /// Exact quotient `self / d` in the Laurent ring, or `None` if `d` does
    /// not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        self.check(d).ok()?;
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(&self.field, self.nvars));
        }
        let field = if self.field.is_rational() { d.field.clone() } else { self.field.clone() };
        // clear denominators: divisor without monomial content, dividend nonnegative
        let dmin = d.min_exponents().unwrap();
        let pmin = self.min_exponents().unwrap();
        let neg = |e: &Exponent| -> Exponent { e.iter().map(|x| -x).collect() };
        let dd = d.shift(&neg(&dmin));
        let mut rem = self.shift(&neg(&pmin));
        let (dlead_e, dlead_c) = dd.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone()))?;
        let dlead_inv = field.inv(&dlead_c)?;
        let mut quot = Self::zero(&field, self.nvars);
        while let Some((e, c)) = rem.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            let qe: Exponent = e.iter().zip(dlead_e.iter()).map(|(a, b)| a - b).collect();
            if qe.iter().any(|&x| x < 0) {
                return None;
            }
            let qc = field.mul(&c, &dlead_inv);
            let step = Self::monomial(&field, qe.clone(), qc.clone());
            rem = rem.try_sub(&dd.try_mul(&step).ok()?).ok()?;
            quot.add_term(qe, &qc);
        }
        let back: Exponent = pmin.iter().zip(dmin.iter()).map(|(p, q)| p - q).collect();
        Some(quot.shift(&back))
    }

    /// Canonical text: ascending lexicographic exponent order, `z1..zd`.
    pub fn render(&self) -> String {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("z{i}")).collect();
        self.render_with(&names, "a")
    }

    pub fn render_with(&self, names: &[String], field_var: &str) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (e, c) in &self.terms {
            let mono: Vec<String> = e
                .iter()
                .zip(names)
                .filter(|(k, _)| **k != 0)
                .map(|(k, n)| if *k == 1 { n.clone() } else { format!("{n}^{k}") })
                .collect();
            let mono = mono.join("*");
            parts.push(if mono.is_empty() {
                c.render(field_var)
            } else if c.is_one() {
                mono
            } else {
                format!("{}*{}", c.render(field_var), mono)
            });
        }
        parts.join(" + ")
    }
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.field.same_as(&other.field) && self.terms == other.terms
    }
}

impl Eq for LaurentPoly {}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

// Operator forms panic on domain mismatch; the `try_*` methods report it.
impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_add(rhs).expect("Laurent polynomial domain mismatch")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_sub(rhs).expect("Laurent polynomial domain mismatch")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_mul(rhs).expect("Laurent polynomial domain mismatch")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }
}

impl LaurentPoly {
    pub fn neg(&self) -> Self {
        -self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::ratio;

    fn q() -> Arc<NumberField> {
        NumberField::rationals()
    }

    #[test]
    fn distributivity_example() {
        let k = q();
        let a = LaurentPoly::from_int_terms(&k, 2, &[(&[0, 0], 1), (&[0, 1], 1)]);
        let b = LaurentPoly::from_int_terms(&k, 2, &[(&[0, 0], 1), (&[-1, 0], -1)]);
        let expected = LaurentPoly::from_int_terms(
            &k,
            2,
            &[(&[0, 0], 1), (&[0, 1], 1), (&[-1, 0], -1), (&[-1, 1], -1)],
        );
        assert_eq!(&a * &b, expected);
    }

    #[test]
    fn monomial_shift_and_cancellation() {
        let k = q();
        let f = LaurentPoly::from_int_terms(&k, 2, &[(&[1, 0], 1), (&[0, 1], -1)]);
        let g = f.shift(&[1, 1]);
        assert_eq!(g, LaurentPoly::from_int_terms(&k, 2, &[(&[2, 1], 1), (&[1, 2], -1)]));
        let z = &f + &(-&f);
        assert!(z.is_zero());
        assert!(z.terms().is_empty());
    }

    #[test]
    fn conjugation_examples() {
        let k = q();
        let a = LaurentPoly::from_int_terms(&k, 2, &[(&[0, 0], 1), (&[0, 1], 1)]);
        assert_eq!(a.conjugate_z(), LaurentPoly::from_int_terms(&k, 2, &[(&[0, 0], 1), (&[0, -1], 1)]));
        let c = LaurentPoly::constant(&k, 2, NfElem::from_rational(ratio(3, 7)));
        assert_eq!(c.conjugate_z(), c);
        let m = LaurentPoly::from_int_terms(&k, 2, &[(&[1, -1], 1)]);
        assert_eq!(m.conjugate_z(), LaurentPoly::from_int_terms(&k, 2, &[(&[-1, 1], 1)]));
    }

    #[test]
    fn domain_mismatch_is_reported() {
        let a = LaurentPoly::var(&q(), 2, 0);
        let b = LaurentPoly::var(&q(), 3, 0);
        assert!(matches!(a.try_add(&b), Err(Error::DomainMismatch(_))));
        let sqrt2 = NumberField::new(&crate::algebra::UniPoly::from_i64(&[-2, 0, 1])).unwrap();
        let sqrt3 = NumberField::new(&crate::algebra::UniPoly::from_i64(&[-3, 0, 1])).unwrap();
        let c = LaurentPoly::constant(&sqrt2, 1, sqrt2.generator());
        let d = LaurentPoly::constant(&sqrt3, 1, sqrt3.generator());
        assert!(c.try_mul(&d).is_err());
    }

    #[test]
    fn canonical_rendering() {
        let k = q();
        let p = LaurentPoly::from_terms(
            &k,
            2,
            vec![
                (exponent(&[0, 0]), NfElem::from_rational(ratio(-1, 2))),
                (exponent(&[1, 0]), NfElem::from_i64(1)),
                (exponent(&[0, -1]), NfElem::from_i64(1)),
            ],
        );
        assert_eq!(p.render(), "z2^-1 + (-1/2) + z1");
    }

    #[test]
    fn exact_division() {
        let k = q();
        let a = LaurentPoly::from_int_terms(&k, 2, &[(&[1, 0], 1), (&[0, -1], -2), (&[0, 0], 3)]);
        let b = LaurentPoly::from_int_terms(&k, 2, &[(&[-1, 1], 1), (&[2, 0], 1)]);
        let p = &a * &b;
        assert_eq!(p.exact_div(&b).unwrap(), a);
        assert_eq!(p.exact_div(&a).unwrap(), b);
        let c = LaurentPoly::from_int_terms(&k, 2, &[(&[1, 0], 1), (&[0, 0], 1)]);
        assert!(a.exact_div(&c).is_none());
    }
}
