//! Bloch matrices of periodic graphs, exact flat-band detection and the
//! inverse transform from kernel vectors to eigenfunctions.
//!
//! The normalized Laplacian is handled through `A - mu D` with `mu = 1 + lambda`;
//! `g = D^{-1/2} f` turns Laplacian eigenfunctions into kernel vectors of this
//! system without changing supports.
//!
//! Transform convention: the value at `(cell g, vertex i)` is the coefficient
//! of `z^g` in component `i`, so translation by `h` is multiplication by `z^h`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::algebra::{
    determinant, exponent, factor_rational, univariate_gcd, AlgebraicScalar, Exponent, LaurentPoly, NfElem,
    NumberField, PolyMatrix, Rational, UniPoly,
};
use crate::algebra::rational::rat;
use crate::error::{Error, Result};
use crate::lattice::{CellVertex, QuotientGraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlochSystem {
    pub dim: usize,
    /// Rational Laurent entries in `z_1..z_d`.
    pub a_hat: PolyMatrix,
    /// Diagonal of `D`.
    pub degrees: Vec<usize>,
}

impl BlochSystem {
    pub fn n(&self) -> usize {
        self.degrees.len()
    }
}

pub fn build_bloch(g: &QuotientGraph) -> BlochSystem {
    let q = NumberField::rationals();
    let (n, d) = (g.n(), g.dim());
    let mut a = PolyMatrix::zeros(&q, d, n, n);
    for i in 0..n {
        // (c, i) ~ (c + delta, j) puts z^{-delta} into entry (i, j)
        let mut rows: Vec<LaurentPoly> = (0..n).map(|_| LaurentPoly::zero(&q, d)).collect();
        for (j, delta) in g.incidence(i) {
            let e: Exponent = delta.iter().map(|x| -x).collect();
            rows[*j].add_term(e, &NfElem::from_i64(1));
        }
        for (j, p) in rows.into_iter().enumerate() {
            a.set(i, j, p);
        }
    }
    BlochSystem { dim: d, a_hat: a, degrees: g.degrees() }
}

/// `det(A(z) - mu D)` as a map from `z`-exponents to coefficient polynomials
/// in `mu`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharDet {
    pub dim: usize,
    pub coeffs: BTreeMap<Exponent, UniPoly>,
}

impl CharDet {
    /// Monic gcd of the `z`-coefficients; `1` when there are none.
    pub fn coefficient_gcd(&self) -> UniPoly {
        let cs: Vec<UniPoly> = self.coeffs.values().cloned().collect();
        univariate_gcd(&cs).unwrap_or_else(|_| UniPoly::one())
    }

    /// Specialization at a rational `mu`.
    pub fn at(&self, mu: &Rational) -> LaurentPoly {
        let q = NumberField::rationals();
        LaurentPoly::from_terms(
            &q,
            self.dim,
            self.coeffs.iter().map(|(e, c)| (e.clone(), NfElem::from_rational(c.eval(mu)))),
        )
    }

    /// The determinant as a Laurent polynomial in `z_1..z_d, mu`.
    pub fn to_laurent(&self) -> LaurentPoly {
        let q = NumberField::rationals();
        let mut out = LaurentPoly::zero(&q, self.dim + 1);
        for (e, c) in &self.coeffs {
            for (k, ck) in c.coeffs().iter().enumerate() {
                let mut ex = e.clone();
                ex.push(k as i32);
                out.add_term(ex, &NfElem::from_rational(ck.clone()));
            }
        }
        out
    }

    pub fn render(&self) -> String {
        let mut names: Vec<String> = (1..=self.dim).map(|i| format!("z{i}")).collect();
        names.push("mu".into());
        self.to_laurent().render_with(&names, "a")
    }
}

pub fn char_det(b: &BlochSystem) -> Result<CharDet> {
    let q = NumberField::rationals();
    let (n, d) = (b.n(), b.dim);
    let mut m = PolyMatrix::zeros(&q, d + 1, n, n);
    for i in 0..n {
        for j in 0..n {
            let mut p = LaurentPoly::zero(&q, d + 1);
            for (e, c) in b.a_hat.get(i, j).terms() {
                let mut ex = e.clone();
                ex.push(0);
                p.add_term(ex, c);
            }
            if i == j {
                let mut ex = exponent(&vec![0; d]);
                ex.push(1);
                p.add_term(ex, &NfElem::from_i64(-(b.degrees[i] as i64)));
            }
            m.set(i, j, p);
        }
    }
    let det = determinant(&m)?;
    let coeffs = det
        .split_leading_vars(d)
        .into_iter()
        .map(|(e, p)| {
            let mut cs: Vec<Rational> = Vec::new();
            for (k, c) in p.terms() {
                let k = k[0] as usize;
                if cs.len() <= k {
                    cs.resize(k + 1, Rational::zero());
                }
                cs[k] = c.as_rational().expect("rational coefficients");
            }
            (e, UniPoly::new(cs))
        })
        .collect();
    Ok(CharDet { dim: d, coeffs })
}

/// One Galois orbit of flat-band eigenvalues.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatBand {
    pub mu: AlgebraicScalar,
    pub lambda: AlgebraicScalar,
    /// Monic irreducible polynomial in `mu`.
    pub minpoly_factor: UniPoly,
    pub multiplicity_in_gcd: usize,
}

impl FlatBand {
    pub fn from_factor(minpoly_factor: &UniPoly, multiplicity_in_gcd: usize) -> Self {
        let mu = AlgebraicScalar::root_of(minpoly_factor);
        let lambda = mu.shifted(&rat(-1));
        FlatBand { mu, lambda, minpoly_factor: minpoly_factor.monic(), multiplicity_in_gcd }
    }

    /// `Q[mu]/(minpoly_factor)`.
    pub fn field(&self) -> Arc<NumberField> {
        NumberField::from_irreducible(&self.minpoly_factor)
    }

    /// Smallest real root of `lambda`'s minimal polynomial, as an isolating
    /// interval.
    pub fn lowest_root(&self) -> Option<&(Rational, Rational)> {
        self.lambda.real_roots.first()
    }

    pub fn lambda_in_spectrum_range(&self) -> bool {
        self.lambda.real_roots_within(&rat(-2), &rat(0))
    }

    /// `mu` as a rational if the band is rational.
    pub fn rational_mu(&self) -> Option<Rational> {
        self.mu.as_rational()
    }
}

/// Flat bands sorted by ascending lowest real root.
pub fn flat_bands(b: &BlochSystem) -> Result<Vec<FlatBand>> {
    let det = char_det(b)?;
    let p = det.coefficient_gcd();
    if p.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let mut bands: Vec<FlatBand> = factor_rational(&p)?
        .into_iter()
        .map(|(f, m)| FlatBand::from_factor(&f, m))
        .filter(|band| !band.mu.real_roots.is_empty())
        .collect();
    bands.sort_by(|a, b| {
        let ka = a.lowest_root().map(|r| r.1.clone());
        let kb = b.lowest_root().map(|r| r.1.clone());
        ka.cmp(&kb).then_with(|| a.minpoly_factor.coeffs().cmp(b.minpoly_factor.coeffs()))
    });
    Ok(bands)
}

/// `A(z) - mu D` over `Q[mu]/(minpoly_factor)`.
pub fn specialize(b: &BlochSystem, band: &FlatBand) -> PolyMatrix {
    let k = band.field();
    specialize_at(b, &k, &k.generator())
}

/// `A(z) - mu D` for an arbitrary field element `mu`.
pub fn specialize_at(b: &BlochSystem, field: &Arc<NumberField>, mu: &NfElem) -> PolyMatrix {
    let (n, d) = (b.n(), b.dim);
    let mut m = b.a_hat.map(|e| e.with_field(field));
    for i in 0..n {
        let c = mu.scale(&rat(-(b.degrees[i] as i64)));
        let diag = m.get(i, i).try_add(&LaurentPoly::constant(field, d, c)).expect("same domain");
        m.set(i, i, diag);
    }
    m
}

/// A finitely supported function on the vertices, with values in a number
/// field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenfunctionTable {
    pub field: Arc<NumberField>,
    pub entries: BTreeMap<CellVertex, NfElem>,
}

impl EigenfunctionTable {
    pub fn support(&self) -> impl Iterator<Item = &CellVertex> {
        self.entries.keys()
    }

    pub fn value(&self, v: &CellVertex) -> NfElem {
        self.entries.get(v).cloned().unwrap_or_default()
    }

    /// The forward transform: component `i` collects `value * z^cell`.
    pub fn to_bloch(&self, n: usize, d: usize) -> Vec<LaurentPoly> {
        let mut out: Vec<LaurentPoly> = (0..n).map(|_| LaurentPoly::zero(&self.field, d)).collect();
        for (v, c) in &self.entries {
            out[v.vertex].add_term(v.cell.clone(), c);
        }
        out
    }

    pub fn translated(&self, h: &[i32]) -> Self {
        EigenfunctionTable {
            field: self.field.clone(),
            entries: self.entries.iter().map(|(v, c)| (v.translated(h), c.clone())).collect(),
        }
    }

    /// Componentwise minimum of the support cells.
    pub fn min_cell(&self) -> Option<Exponent> {
        let mut it = self.entries.keys().map(|v| v.cell.clone());
        let first = it.next()?;
        Some(it.fold(first, |acc, c| acc.iter().zip(c.iter()).map(|(a, b)| *a.min(b)).collect()))
    }
}

/// Inverse transform of a kernel vector.
pub fn realize_eigenfunction(v: &[LaurentPoly], g: &QuotientGraph) -> Result<EigenfunctionTable> {
    if v.len() != g.n() {
        return Err(Error::RankMismatch { expected: g.n(), found: v.len() });
    }
    if v.iter().all(|p| p.is_zero()) {
        return Err(Error::ZeroVector);
    }
    let field = v
        .iter()
        .map(|p| p.field())
        .find(|f| !f.is_rational())
        .unwrap_or_else(|| v[0].field())
        .clone();
    let mut entries = BTreeMap::new();
    for (i, p) in v.iter().enumerate() {
        for (e, c) in p.terms() {
            entries.insert(CellVertex { cell: e.clone(), vertex: i }, c.clone());
        }
    }
    Ok(EigenfunctionTable { field, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::ratio;
    use crate::lattice::builtins::*;

    fn lp(d: usize, terms: &[(&[i32], i64)]) -> LaurentPoly {
        LaurentPoly::from_int_terms(&NumberField::rationals(), d, terms)
    }

    #[test]
    fn kagome_bloch_matrix() {
        let b = build_bloch(&kagome());
        let zero = lp(2, &[]);
        let expect = [
            [zero.clone(), lp(2, &[(&[0, 0], 1), (&[0, 1], 1)]), lp(2, &[(&[0, 0], 1), (&[1, 0], 1)])],
            [lp(2, &[(&[0, 0], 1), (&[0, -1], 1)]), zero.clone(), lp(2, &[(&[0, 0], 1), (&[1, -1], 1)])],
            [lp(2, &[(&[0, 0], 1), (&[-1, 0], 1)]), lp(2, &[(&[0, 0], 1), (&[-1, 1], 1)]), zero.clone()],
        ];
        for (i, row) in expect.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                assert_eq!(b.a_hat.get(i, j), e, "entry ({i},{j})");
            }
        }
        assert_eq!(b.degrees, vec![4, 4, 4]);
    }

    #[test]
    fn one_vertex_systems() {
        let c = build_bloch(&cycle());
        assert_eq!(c.a_hat.get(0, 0), &lp(1, &[(&[1], 1), (&[-1], 1)]));
        let det = char_det(&c).unwrap();
        assert_eq!(det.coeffs[&exponent(&[0])], UniPoly::from_i64(&[0, -2]));
        assert!(flat_bands(&c).unwrap().is_empty());
        let s = build_bloch(&square());
        assert_eq!(s.a_hat.get(0, 0), &lp(2, &[(&[1, 0], 1), (&[-1, 0], 1), (&[0, 1], 1), (&[0, -1], 1)]));
        assert!(flat_bands(&s).unwrap().is_empty());
    }

    #[test]
    fn kagome_flat_band() {
        let b = build_bloch(&kagome());
        let bands = flat_bands(&b).unwrap();
        assert_eq!(bands.len(), 1);
        assert_eq!(bands[0].rational_mu(), Some(ratio(-1, 2)));
        assert_eq!(bands[0].lambda.as_rational(), Some(ratio(-3, 2)));
        assert!(bands[0].lambda_in_spectrum_range());
        let m = specialize(&b, &bands[0]);
        assert_eq!(m.get(0, 0), &lp(2, &[(&[0, 0], 2)]));
    }

    #[test]
    fn comb_flat_band() {
        let b = build_bloch(&comb2());
        let det = char_det(&b).unwrap();
        assert_eq!(det.coefficient_gcd(), UniPoly::x());
        let bands = flat_bands(&b).unwrap();
        assert_eq!(bands.len(), 1);
        assert_eq!(bands[0].lambda.as_rational(), Some(rat(-1)));
        assert_eq!(specialize(&b, &bands[0]), b.a_hat);
    }

    #[test]
    fn realize_kagome_generator() {
        let g = kagome();
        let v = vec![
            lp(2, &[(&[1, 0], 1), (&[0, 1], -1)]),
            lp(2, &[(&[0, 0], 1), (&[1, 0], -1)]),
            lp(2, &[(&[0, 1], 1), (&[0, 0], -1)]),
        ];
        let t = realize_eigenfunction(&v, &g).unwrap();
        assert_eq!(t.entries.len(), 6);
        assert_eq!(t.value(&CellVertex::new(&[1, 0], 0)), NfElem::from_i64(1));
        assert_eq!(t.value(&CellVertex::new(&[0, 1], 0)), NfElem::from_i64(-1));
        assert_eq!(t.value(&CellVertex::new(&[0, 0], 1)), NfElem::from_i64(1));
        assert_eq!(t.value(&CellVertex::new(&[1, 0], 1)), NfElem::from_i64(-1));
        assert_eq!(t.value(&CellVertex::new(&[0, 1], 2)), NfElem::from_i64(1));
        assert_eq!(t.value(&CellVertex::new(&[0, 0], 2)), NfElem::from_i64(-1));
        assert_eq!(t.to_bloch(3, 2), v);

        // the realized function satisfies the eigen-equation at mu = -1/2 everywhere
        let mu = ratio(-1, 2);
        let mut probe = g.folner_vertices(3);
        probe.extend(t.support().cloned());
        for x in &probe {
            let mut acc = Rational::zero();
            for y in g.neighbors(x) {
                acc += t.value(&y).as_rational().unwrap();
            }
            acc -= &mu * rat(4) * t.value(x).as_rational().unwrap();
            assert!(acc.is_zero(), "residual at {x:?}");
        }
    }

    #[test]
    fn realize_edge_cases() {
        let g = comb2();
        let unit = vec![lp(1, &[(&[0], 1)]), lp(1, &[]), lp(1, &[])];
        let t = realize_eigenfunction(&unit, &g).unwrap();
        assert_eq!(t.entries.len(), 1);
        assert_eq!(t.value(&CellVertex::new(&[0], 0)), NfElem::from_i64(1));
        let zero = vec![lp(1, &[]); 3];
        assert_eq!(realize_eigenfunction(&zero, &g), Err(Error::ZeroVector));
        assert!(matches!(realize_eigenfunction(&zero[..2], &g), Err(Error::RankMismatch { .. })));
    }
}
