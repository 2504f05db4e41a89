//! Factorization of rational univariate polynomials into monic irreducibles.
//!
//! Square-free decomposition first, then rational roots, then Kronecker's
//! interpolation search for the remaining nonlinear factors. The degrees met
//! here are bounded by the size of a fundamental domain, which keeps the
//! Kronecker search small.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rational::{rat, Rational};
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

/// Monic irreducible factors with multiplicities. Multiplying them out
/// reproduces `p` up to its leading coefficient.
pub fn factor_rational(p: &UniPoly) -> Result<Vec<(UniPoly, usize)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out: Vec<(UniPoly, usize)> = Vec::new();
    for (part, mult) in p.square_free_decomposition() {
        for f in factor_square_free(&part) {
            out.push((f, mult));
        }
    }
    out.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
    });
    Ok(out)
}

pub fn is_irreducible(p: &UniPoly) -> bool {
    match factor_rational(p) {
        Ok(f) => f.len() == 1 && f[0].1 == 1,
        Err(_) => false,
    }
}

fn factor_square_free(p: &UniPoly) -> Vec<UniPoly> {
    let mut rest = p.monic();
    let mut out = Vec::new();
    for r in rational_roots(&rest) {
        let lin = UniPoly::linear_root(&r);
        rest = rest.div_rem(&lin).0;
        out.push(lin);
    }
    if rest.degree().unwrap_or(0) > 0 {
        kronecker(&rest, &mut out);
    }
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return Vec::new();
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Distinct rational roots of `p`.
pub fn rational_roots(p: &UniPoly) -> Vec<Rational> {
    let mut roots = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return roots;
    }
    let mut ints = p.primitive_integer();
    if ints[0].is_zero() {
        roots.push(Rational::zero());
        while ints.first().is_some_and(|c| c.is_zero()) {
            ints.remove(0);
        }
    }
    if ints.len() >= 2 {
        let q = UniPoly::from_integers(&ints);
        let lead = ints.last().unwrap().clone();
        for num in divisors(&ints[0]) {
            for den in divisors(&lead) {
                for s in [1i64, -1] {
                    let cand = BigRational::new(&num * BigInt::from(s), den.clone());
                    if q.eval(&cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
    }
    roots.sort();
    roots
}

/// Splits a square-free polynomial without rational roots into irreducibles.
fn kronecker(p: &UniPoly, out: &mut Vec<UniPoly>) {
    let n = p.degree().unwrap();
    if n <= 3 {
        out.push(p.monic());
        return;
    }
    let ints = p.primitive_integer();
    let f = UniPoly::from_integers(&ints);
    for k in 2..=n / 2 {
        if let Some(g) = find_factor_of_degree(&f, k) {
            let (q, _) = f.div_rem(&g);
            kronecker(&g, out);
            kronecker(&q, out);
            return;
        }
    }
    out.push(p.monic());
}

fn find_factor_of_degree(f: &UniPoly, k: usize) -> Option<UniPoly> {
    // evaluation points with the fewest divisor choices
    let mut cands: Vec<(usize, BigInt, BigInt)> = (-12i64..=12)
        .map(|x| {
            let v = f.eval(&rat(x)).to_integer();
            (divisors(&v).len(), BigInt::from(x), v)
        })
        .filter(|(c, _, _)| *c > 0)
        .collect();
    cands.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.abs().cmp(&b.1.abs())));
    if cands.len() < k + 1 {
        return None;
    }
    let xs: Vec<Rational> = cands[..k + 1]
        .iter()
        .map(|(_, x, _)| BigRational::from_integer(x.clone()))
        .collect();
    // g and -g are both factors, so the first value is taken positive
    let options: Vec<Vec<Rational>> = cands[..k + 1]
        .iter()
        .enumerate()
        .map(|(i, (_, _, v))| {
            let mut o: Vec<Rational> = Vec::new();
            for d in divisors(v) {
                o.push(BigRational::from_integer(d.clone()));
                if i > 0 {
                    o.push(BigRational::from_integer(-d));
                }
            }
            o
        })
        .collect();
    let mut choice = vec![0usize; k + 1];
    loop {
        let values: Vec<Rational> = (0..=k).map(|i| options[i][choice[i]].clone()).collect();
        let g = lagrange(&xs, &values);
        if g.degree() == Some(k) && g.coeffs().iter().all(|c| c.is_integer()) && f.rem(&g).is_zero() {
            return Some(g.monic());
        }
        let mut i = 0;
        loop {
            if i > k {
                return None;
            }
            choice[i] += 1;
            if choice[i] < options[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn lagrange(xs: &[Rational], ys: &[Rational]) -> UniPoly {
    let mut acc = UniPoly::zero();
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        let mut term = UniPoly::constant(yi.clone());
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                let inv = Rational::one() / (xi - xj);
                term = term.mul(&UniPoly::new(vec![-xj * &inv, inv]));
            }
        }
        acc = acc.add(&term);
    }
    acc
}
