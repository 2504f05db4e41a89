//! Number fields `Q[x]/(q)` with residue arithmetic, and exact algebraic
//! numbers built on them.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::factor::is_irreducible;
use super::rational::{coeff_text, rat, to_decimal, Rational};
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

/// `Q[x]/(minpoly)` for a monic irreducible `minpoly`. Every degree-one field
/// is the field of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NumberField {
    minpoly: UniPoly,
}

/// Residue class, stored as the reduced representative's coefficients
/// (lowest degree first, no trailing zeros).
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct NfElem(Vec<Rational>);

impl NfElem {
    pub fn zero() -> Self {
        NfElem(Vec::new())
    }

    pub fn from_rational(q: Rational) -> Self {
        if q.is_zero() {
            NfElem(Vec::new())
        } else {
            NfElem(vec![q])
        }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    fn from_vec(mut v: Vec<Rational>) -> Self {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        NfElem(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.0.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.0[0].clone()),
            _ => None,
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn to_unipoly(&self) -> UniPoly {
        UniPoly::new(self.0.clone())
    }

    pub fn neg(&self) -> Self {
        NfElem(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let z = Rational::zero();
        Self::from_vec(
            (0..n)
                .map(|k| self.0.get(k).unwrap_or(&z) + o.0.get(k).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let z = Rational::zero();
        Self::from_vec(
            (0..n)
                .map(|k| self.0.get(k).unwrap_or(&z) - o.0.get(k).unwrap_or(&z))
                .collect(),
        )
    }

    /// Multiplication by a rational scalar needs no field context.
    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        NfElem(self.0.iter().map(|c| c * q).collect())
    }

    /// Residue text in the variable `var`, parenthesized unless it is a
    /// nonnegative integer.
    pub fn render(&self, var: &str) -> String {
        match self.as_rational() {
            Some(q) => coeff_text(&q),
            None => format!("({})", self.to_unipoly().render(var)),
        }
    }
}

impl fmt::Debug for NfElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("a"))
    }
}

impl NumberField {
    /// Builds the field after checking that `minpoly` is irreducible.
    pub fn new(minpoly: &UniPoly) -> Result<Arc<Self>> {
        if minpoly.degree().unwrap_or(0) == 0 {
            return Err(Error::Invalid("number field needs a nonconstant minimal polynomial".into()));
        }
        if !is_irreducible(minpoly) {
            return Err(Error::Invalid(format!("{} is reducible over Q", minpoly.render("x"))));
        }
        Ok(Arc::new(NumberField { minpoly: minpoly.monic() }))
    }

    /// Trusted constructor for a polynomial already known to be irreducible.
    pub fn from_irreducible(minpoly: &UniPoly) -> Arc<Self> {
        Arc::new(NumberField { minpoly: minpoly.monic() })
    }

    /// The rationals, presented as `Q[x]/(x)`.
    pub fn rationals() -> Arc<Self> {
        Arc::new(NumberField { minpoly: UniPoly::x() })
    }

    pub fn minpoly(&self) -> &UniPoly {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap()
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    /// Same field up to the presentation of the rationals.
    pub fn same_as(&self, other: &NumberField) -> bool {
        (self.is_rational() && other.is_rational()) || self.minpoly == other.minpoly
    }

    /// The class of `x`, i.e. a root of the minimal polynomial.
    pub fn generator(&self) -> NfElem {
        self.reduce(&UniPoly::x())
    }

    pub fn reduce(&self, p: &UniPoly) -> NfElem {
        NfElem::from_vec(p.rem(&self.minpoly).coeffs().to_vec())
    }

    pub fn mul(&self, a: &NfElem, b: &NfElem) -> NfElem {
        if a.is_zero() || b.is_zero() {
            return NfElem::zero();
        }
        if a.0.len() == 1 {
            return b.scale(&a.0[0]);
        }
        if b.0.len() == 1 {
            return a.scale(&b.0[0]);
        }
        self.reduce(&a.to_unipoly().mul(&b.to_unipoly()))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &NfElem) -> Option<NfElem> {
        if a.is_zero() {
            return None;
        }
        if a.0.len() == 1 {
            return Some(NfElem(vec![Rational::one() / &a.0[0]]));
        }
        let (g, s, _) = a.to_unipoly().ext_gcd(&self.minpoly);
        debug_assert!(g.degree() == Some(0));
        Some(self.reduce(&s))
    }

    pub fn div(&self, a: &NfElem, b: &NfElem) -> Option<NfElem> {
        self.inv(b).map(|ib| self.mul(a, &ib))
    }

    /// Substitutes a field element into a rational polynomial.
    pub fn eval_poly(&self, p: &UniPoly, x: &NfElem) -> NfElem {
        let mut acc = NfElem::zero();
        for c in p.coeffs().iter().rev() {
            acc = self.mul(&acc, x).add(&NfElem::from_rational(c.clone()));
        }
        acc
    }
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[x]/({})", self.minpoly.render("x"))
    }
}

/// An exact algebraic number: a residue in `Q[x]/(minpoly)` together with
/// optional isolating intervals selecting its real embeddings.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraicScalar {
    pub minpoly: UniPoly,
    pub representative: UniPoly,
    /// One `(a, b]` interval per real root of `minpoly`, ascending.
    pub real_roots: Vec<(Rational, Rational)>,
}

impl AlgebraicScalar {
    /// The root class of an irreducible polynomial.
    pub fn root_of(minpoly: &UniPoly) -> Self {
        let m = minpoly.monic();
        let representative = if m.degree() == Some(1) {
            UniPoly::constant(-m.coeff(0))
        } else {
            UniPoly::x()
        };
        AlgebraicScalar {
            real_roots: m.isolate_real_roots(),
            minpoly: m,
            representative,
        }
    }

    pub fn rational(q: &Rational) -> Self {
        Self::root_of(&UniPoly::linear_root(q))
    }

    /// `self + c`, for a root class (representative `x` or a constant).
    pub fn shifted(&self, c: &Rational) -> Self {
        // if a is a root of m then a + c is a root of m(x - c)
        let m = self.minpoly.shift(&-c);
        Self::root_of(&m)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        (self.minpoly.degree() == Some(1)).then(|| -self.minpoly.coeff(0))
    }

    /// Decimal approximations of the real roots, `digits` places after the
    /// point; for display only.
    pub fn approximations(&self, digits: usize) -> Vec<String> {
        let mut width = Rational::one();
        for _ in 0..digits + 2 {
            width /= rat(10);
        }
        self.real_roots
            .iter()
            .map(|(a, b)| match self.as_rational() {
                Some(q) => to_decimal(&q, digits),
                None => {
                    let (a, b) = self.minpoly.refine_root(a.clone(), b.clone(), &width);
                    to_decimal(&((a + b) / rat(2)), digits)
                }
            })
            .collect()
    }

    /// Whether every real root lies in the closed interval `[lo, hi]`.
    pub fn real_roots_within(&self, lo: &Rational, hi: &Rational) -> bool {
        let inside = self.minpoly.count_roots_in(lo, hi) + usize::from(self.minpoly.eval(lo).is_zero());
        inside == self.real_roots.len()
    }
}
