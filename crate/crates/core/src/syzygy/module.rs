//! Sparse vectors over `k[z_1..z_d]` ordered position-over-term with graded
//! reverse lexicographic monomials.

use std::cmp::Ordering;
use std::sync::Arc;

use smallvec::SmallVec;

use crate::algebra::{Cancel, Exponent, LaurentPoly, NfElem, NumberField};
use crate::error::{Error, Result};

pub type Mono = SmallVec<[u32; 4]>;

pub fn mono_degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

/// Graded reverse lexicographic comparison.
pub fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    match mono_degree(a).cmp(&mono_degree(b)) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.iter().zip(b).rev() {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

pub fn mono_mul(a: &[u32], b: &[u32]) -> Mono {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `a / b` when `b` divides `a`.
pub fn mono_div(a: &[u32], b: &[u32]) -> Option<Mono> {
    a.iter().zip(b).map(|(x, y)| x.checked_sub(*y)).collect()
}

pub fn mono_lcm(a: &[u32], b: &[u32]) -> Mono {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn mono_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// A module monomial `z^mono e_pos`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Term {
    pub pos: usize,
    pub mono: Mono,
}

impl Ord for Term {
    /// `Greater` means larger in the order; a lower position is larger.
    fn cmp(&self, other: &Self) -> Ordering {
        other.pos.cmp(&self.pos).then_with(|| grevlex(&self.mono, &other.mono))
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Element of the free module `k[z]^rank`, terms in strictly descending order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ModuleElement {
    rank: usize,
    terms: Vec<(Term, NfElem)>,
}

impl ModuleElement {
    pub fn zero(rank: usize) -> Self {
        ModuleElement { rank, terms: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> &[(Term, NfElem)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&(Term, NfElem)> {
        self.terms.first()
    }

    /// Terms of one component as `(mono, coeff)` pairs.
    pub fn component(&self, pos: usize) -> Vec<(Mono, NfElem)> {
        self.terms
            .iter()
            .filter(|(t, _)| t.pos == pos)
            .map(|(t, c)| (t.mono.clone(), c.clone()))
            .collect()
    }

    /// Largest total degree among the terms.
    pub fn max_degree(&self) -> u32 {
        self.terms.iter().map(|(t, _)| mono_degree(&t.mono)).max().unwrap_or(0)
    }

    fn from_sorted(rank: usize, terms: Vec<(Term, NfElem)>) -> Self {
        ModuleElement { rank, terms }
    }
}

/// The coefficient ring `k[z_1..z_d]` with its cancellation flag.
#[derive(Clone, Debug)]
pub struct Ring {
    pub field: Arc<NumberField>,
    pub nvars: usize,
    pub cancel: Cancel,
}

impl Ring {
    pub fn new(field: &Arc<NumberField>, nvars: usize) -> Self {
        Ring { field: field.clone(), nvars, cancel: Cancel::new() }
    }

    pub fn one_mono(&self) -> Mono {
        SmallVec::from_elem(0, self.nvars)
    }

    pub fn unit(&self, rank: usize, pos: usize) -> ModuleElement {
        self.monomial(rank, pos, self.one_mono(), NfElem::from_i64(1))
    }

    pub fn monomial(&self, rank: usize, pos: usize, mono: Mono, c: NfElem) -> ModuleElement {
        if c.is_zero() {
            return ModuleElement::zero(rank);
        }
        ModuleElement::from_sorted(rank, vec![(Term { pos, mono }, c)])
    }

    /// Builds an element from arbitrary terms, combining duplicates.
    pub fn from_terms(&self, rank: usize, mut terms: Vec<(Term, NfElem)>) -> ModuleElement {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Term, NfElem)> = Vec::with_capacity(terms.len());
        for (t, c) in terms {
            match out.last_mut() {
                Some((lt, lc)) if *lt == t => *lc = lc.add(&c),
                _ => out.push((t, c)),
            }
            if out.last().is_some_and(|(_, c)| c.is_zero()) {
                out.pop();
            }
        }
        ModuleElement::from_sorted(rank, out)
    }

    /// `a + c * z^m * b`.
    pub fn axpy(&self, a: &ModuleElement, c: &NfElem, m: &[u32], b: &ModuleElement) -> ModuleElement {
        if c.is_zero() || b.is_zero() {
            return a.clone();
        }
        let f = &self.field;
        let shift = |t: &Term| Term { pos: t.pos, mono: mono_mul(&t.mono, m) };
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut x, mut y) = (0, 0);
        let mut bt = b.terms.first().map(|(t, _)| shift(t));
        while x < a.terms.len() || bt.is_some() {
            let ord = match (&a.terms.get(x), &bt) {
                (Some((ta, _)), Some(tb)) => ta.cmp(tb),
                (Some(_), None) => Ordering::Greater,
                (None, _) => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    out.push(a.terms[x].clone());
                    x += 1;
                }
                Ordering::Less => {
                    out.push((bt.take().unwrap(), f.mul(c, &b.terms[y].1)));
                    y += 1;
                    bt = b.terms.get(y).map(|(t, _)| shift(t));
                }
                Ordering::Equal => {
                    let v = a.terms[x].1.add(&f.mul(c, &b.terms[y].1));
                    if !v.is_zero() {
                        out.push((bt.take().unwrap(), v));
                    }
                    x += 1;
                    y += 1;
                    bt = b.terms.get(y).map(|(t, _)| shift(t));
                }
            }
        }
        ModuleElement::from_sorted(a.rank, out)
    }

    pub fn add(&self, a: &ModuleElement, b: &ModuleElement) -> ModuleElement {
        self.axpy(a, &NfElem::from_i64(1), &self.one_mono(), b)
    }

    pub fn sub(&self, a: &ModuleElement, b: &ModuleElement) -> ModuleElement {
        self.axpy(a, &NfElem::from_i64(-1), &self.one_mono(), b)
    }

    pub fn scale(&self, a: &ModuleElement, c: &NfElem) -> ModuleElement {
        if c.is_zero() {
            return ModuleElement::zero(a.rank);
        }
        let terms = a.terms.iter().map(|(t, x)| (t.clone(), self.field.mul(x, c))).collect();
        ModuleElement::from_sorted(a.rank, terms)
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self, a: &ModuleElement) -> ModuleElement {
        match a.lead() {
            Some((_, c)) => self.scale(a, &self.field.inv(c).unwrap()),
            None => a.clone(),
        }
    }

    /// `sum_i v_i * rows_i` for a vector `v` of rank `rows.len()`.
    pub fn combine(&self, v: &ModuleElement, rows: &[ModuleElement], out_rank: usize) -> ModuleElement {
        let mut acc = ModuleElement::zero(out_rank);
        for (t, c) in &v.terms {
            acc = self.axpy(&acc, c, &t.mono, &rows[t.pos]);
        }
        acc
    }

    /// Inner product `sum_i v_i * p_i` with polynomial entries given as
    /// rank-one elements; the result has rank one.
    pub fn dot(&self, v: &ModuleElement, entries: &[ModuleElement]) -> ModuleElement {
        self.combine(v, entries, 1)
    }

    pub fn from_components(&self, comps: &[LaurentPoly]) -> Result<ModuleElement> {
        let mut terms = Vec::new();
        for (pos, p) in comps.iter().enumerate() {
            if p.nvars() != self.nvars {
                return Err(Error::DomainMismatch(format!("{} variables vs {}", p.nvars(), self.nvars)));
            }
            for (e, c) in p.terms() {
                let mono: Option<Mono> = e.iter().map(|&x| u32::try_from(x).ok()).collect();
                let mono = mono.ok_or_else(|| Error::Invalid("negative exponent in a polynomial module element".into()))?;
                terms.push((Term { pos, mono }, c.clone()));
            }
        }
        Ok(self.from_terms(comps.len(), terms))
    }

    pub fn to_components(&self, v: &ModuleElement) -> Vec<LaurentPoly> {
        let mut out: Vec<LaurentPoly> = (0..v.rank).map(|_| LaurentPoly::zero(&self.field, self.nvars)).collect();
        for (t, c) in &v.terms {
            let e: Exponent = t.mono.iter().map(|&x| x as i32).collect();
            out[t.pos].add_term(e, c);
        }
        out
    }

    /// Canonical text of each component.
    pub fn render(&self, v: &ModuleElement) -> Vec<String> {
        self.to_components(v).iter().map(|p| p.render_with(&var_names(self.nvars), "mu")).collect()
    }
}

pub fn var_names(d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("z{i}")).collect()
}
