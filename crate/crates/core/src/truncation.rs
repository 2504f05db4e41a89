//! Finite-section counts: eigenfunctions supported in Følner balls, eigenvalue
//! multiplicities of induced subgraphs, and their error envelopes around the
//! density.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;

use crate::algebra::{rational::rat, sparse_nullity, Cancel, NfElem, NumberField, Rational, SparseRow};
use crate::bloch::{EigenfunctionTable, FlatBand};
use crate::error::{Error, Result};
use crate::lattice::{CellVertex, QuotientGraph};

/// Largest sup-norm of a support cell after translating each table so that
/// its componentwise minimum cell is the origin; at least one.
pub fn support_width(tables: &[EigenfunctionTable]) -> Result<usize> {
    if tables.is_empty() {
        return Err(Error::EmptyInput("no eigenfunctions"));
    }
    let mut width = 1;
    for t in tables {
        let Some(lo) = t.min_cell() else { continue };
        for v in t.support() {
            for (c, l) in v.cell.iter().zip(lo.iter()) {
                width = width.max((c - l).unsigned_abs() as usize);
            }
        }
    }
    Ok(width)
}

fn ratio(a: usize, b: usize) -> Rational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// Nullity of `(A - mu D)` acting on functions supported in `F_j`, with the
/// equation imposed at every vertex of `F_j` and its 1-thick boundary.
pub fn dim_finite_support_at(
    g: &QuotientGraph,
    field: &Arc<NumberField>,
    mu: &NfElem,
    j: usize,
    cancel: &Cancel,
) -> Result<usize> {
    let f = g.folner_vertices(j);
    let index: HashMap<&CellVertex, usize> = f.iter().enumerate().map(|(k, v)| (v, k)).collect();
    let boundary = g.thick_boundary(&f, 1);
    let rows = f.iter().chain(boundary.iter()).map(|x| {
        let mut row: Vec<(usize, NfElem)> = Vec::new();
        for y in g.neighbors(x) {
            if let Some(&k) = index.get(&y) {
                row.push((k, NfElem::from_i64(1)));
            }
        }
        if let Some(&k) = index.get(x) {
            row.push((k, mu.scale(&rat(-(g.degree(x.vertex) as i64)))));
        }
        combine_row(row)
    });
    sparse_nullity(field, f.len(), rows, cancel)
}

pub fn dim_finite_support_eigs(g: &QuotientGraph, band: &FlatBand, j: usize) -> Result<usize> {
    let k = band.field();
    dim_finite_support_at(g, &k, &k.generator(), j, &Cancel::new())
}

fn combine_row(mut row: Vec<(usize, NfElem)>) -> SparseRow {
    row.sort_by_key(|(k, _)| *k);
    let mut out: SparseRow = Vec::with_capacity(row.len());
    for (k, c) in row {
        match out.last_mut() {
            Some((lk, lc)) if *lk == k => *lc = lc.add(&c),
            _ => out.push((k, c)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

/// `F_j` together with its `j0`-thick boundary.
pub fn shubin_region(g: &QuotientGraph, j: usize, j0: usize) -> (BTreeSet<CellVertex>, BTreeSet<CellVertex>) {
    let f = g.folner_vertices(j);
    let b = g.thick_boundary(&f, j0);
    (f, b)
}

/// Nullity of `A - mu D` on the induced subgraph of `F_j` and its `j0`-thick
/// boundary, with internal degrees.
pub fn shubin_multiplicity_at(
    g: &QuotientGraph,
    field: &Arc<NumberField>,
    mu: &NfElem,
    j: usize,
    j0: usize,
    cancel: &Cancel,
) -> Result<usize> {
    let (mut s, b) = shubin_region(g, j, j0);
    s.extend(b);
    section_nullity(g, &s, field, mu, cancel)
}

/// Nullity of `A - mu D_internal` on the subgraph induced by `s`.
pub fn section_nullity(
    g: &QuotientGraph,
    s: &BTreeSet<CellVertex>,
    field: &Arc<NumberField>,
    mu: &NfElem,
    cancel: &Cancel,
) -> Result<usize> {
    let sec = g.induced_section(s);
    if let Some(k) = sec.degrees_internal.iter().position(|&d| d == 0) {
        return Err(Error::IsolatedSectionVertex(format!("{:?}", sec.vertices[k])));
    }
    let mut rows: Vec<Vec<(usize, NfElem)>> = (0..sec.len())
        .map(|k| vec![(k, mu.scale(&rat(-(sec.degrees_internal[k] as i64))))])
        .collect();
    for &(a, b) in &sec.adjacency {
        rows[a].push((b, NfElem::from_i64(1)));
        rows[b].push((a, NfElem::from_i64(1)));
    }
    sparse_nullity(field, sec.len(), rows.into_iter().map(combine_row), cancel)
}

pub fn shubin_multiplicity(g: &QuotientGraph, band: &FlatBand, j: usize, j0: usize) -> Result<usize> {
    if j == 0 {
        return Err(Error::Invalid("the Shubin radius must be at least 1".into()));
    }
    let k = band.field();
    shubin_multiplicity_at(g, &k, &k.generator(), j, j0, &Cancel::new())
}

/// One radius of the finite-section comparison. Densities are exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationRow {
    pub j: usize,
    pub f_size: usize,
    pub boundary_size: usize,
    pub dim_finite_support: usize,
    pub shubin_mult: usize,
    pub avg_density: Rational,
    pub shubin_density: Rational,
    /// `|boundary_{j0} F_j| / |F_j|`
    pub bound: Rational,
    pub j0: usize,
    pub density: Option<Rational>,
}

impl TruncationRow {
    /// Envelope checks, vacuous below `j0` or without a reference density.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let Some(dk) = &self.density else { return out };
        if self.j < self.j0 {
            return out;
        }
        if (&self.avg_density - dk).abs() > self.bound {
            out.push(format!(
                "j={}: |avg_density - density| = |{} - {}| exceeds {}",
                self.j, self.avg_density, dk, self.bound
            ));
        }
        let two = &self.bound * rat(2);
        if (&self.shubin_density - dk).abs() > two {
            out.push(format!(
                "j={}: |shubin_density - density| = |{} - {}| exceeds {}",
                self.j, self.shubin_density, dk, two
            ));
        }
        if self.shubin_mult < self.dim_finite_support {
            out.push(format!(
                "j={}: Shubin multiplicity {} below the interior count {}",
                self.j, self.shubin_mult, self.dim_finite_support
            ));
        }
        out
    }
}

/// Rows for every `j >= 1` in `js` (ascending); rows are computed in parallel.
pub fn convergence_report(
    g: &QuotientGraph,
    band: &FlatBand,
    js: &[usize],
    j0: usize,
    density: Option<&Rational>,
) -> Result<Vec<TruncationRow>> {
    if js.is_empty() {
        return Err(Error::EmptyInput("no radii"));
    }
    if js[0] == 0 {
        return Err(Error::Invalid("radii must be at least 1".into()));
    }
    if js.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid("radii must be strictly ascending".into()));
    }
    let field = band.field();
    let mu = field.generator();
    js.par_iter()
        .map(|&j| {
            let cancel = Cancel::new();
            let (f, b) = shubin_region(g, j, j0);
            let dim = dim_finite_support_at(g, &field, &mu, j, &cancel)?;
            let mult = shubin_multiplicity_at(g, &field, &mu, j, j0, &cancel)?;
            Ok(TruncationRow {
                j,
                f_size: f.len(),
                boundary_size: b.len(),
                dim_finite_support: dim,
                shubin_mult: mult,
                avg_density: ratio(dim, f.len()),
                shubin_density: ratio(mult, f.len()),
                bound: ratio(b.len(), f.len()),
                j0,
                density: density.cloned(),
            })
        })
        .collect()
}

/// Problems across a report: per-row envelope violations and any decrease
/// of the interior count.
pub fn report_violations(rows: &[TruncationRow]) -> Vec<String> {
    let mut out: Vec<String> = rows.iter().flat_map(|r| r.violations()).collect();
    for w in rows.windows(2) {
        if w[1].dim_finite_support < w[0].dim_finite_support {
            out.push(format!(
                "j={}: interior count {} decreased from {}",
                w[1].j, w[1].dim_finite_support, w[0].dim_finite_support
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::ratio as q;
    use crate::bloch::{build_bloch, flat_bands};
    use crate::lattice::builtins::*;

    #[test]
    fn kagome_counts() {
        let g = kagome();
        let band = &flat_bands(&build_bloch(&g)).unwrap()[0];
        assert_eq!(dim_finite_support_eigs(&g, band, 1).unwrap(), 4);
        assert_eq!(dim_finite_support_eigs(&g, band, 2).unwrap(), 16);
        let m = shubin_multiplicity(&g, band, 3, 1).unwrap();
        let (f, b) = shubin_region(&g, 3, 1);
        let dev = (ratio(m, f.len()) - q(1, 3)).abs();
        assert!(dev <= ratio(2 * b.len(), f.len()));
    }

    #[test]
    fn comb_counts() {
        let g = comb2();
        let band = &flat_bands(&build_bloch(&g)).unwrap()[0];
        assert_eq!(dim_finite_support_eigs(&g, band, 1).unwrap(), 3);
        assert!(shubin_multiplicity(&g, band, 2, 1).unwrap() >= 5);
        let rows = convergence_report(&g, band, &[1, 2, 3], 1, Some(&q(1, 3))).unwrap();
        assert!(rows.iter().all(|r| r.avg_density == q(1, 3)));
        assert!(report_violations(&rows).is_empty());
    }

    #[test]
    fn probes_without_bands() {
        let q0 = NumberField::rationals();
        let c = Cancel::new();
        for mu in [q(1, 3), q(-1, 2), rat(0)] {
            let mu = NfElem::from_rational(mu);
            assert_eq!(dim_finite_support_at(&square(), &q0, &mu, 2, &c).unwrap(), 0);
        }
    }

    #[test]
    fn single_triangle_has_no_kernel_off_spectrum() {
        let g = kagome();
        let tri: BTreeSet<_> = (0..3).map(|i| CellVertex::new(&[0, 0], i)).collect();
        let q0 = NumberField::rationals();
        assert_eq!(section_nullity(&g, &tri, &q0, &NfElem::from_rational(q(1, 3)), &Cancel::new()).unwrap(), 0);
        // triangle: A - mu*2I is singular at mu = -1/2
        assert_eq!(section_nullity(&g, &tri, &q0, &NfElem::from_rational(q(-1, 2)), &Cancel::new()).unwrap(), 2);
    }

    #[test]
    fn width_is_translation_invariant() {
        let q0 = NumberField::rationals();
        let t = EigenfunctionTable {
            field: q0,
            entries: [
                (CellVertex::new(&[1, 0], 0), NfElem::from_i64(1)),
                (CellVertex::new(&[0, 1], 0), NfElem::from_i64(-1)),
                (CellVertex::new(&[0, 0], 1), NfElem::from_i64(1)),
            ]
            .into_iter()
            .collect(),
        };
        assert_eq!(support_width(std::slice::from_ref(&t)).unwrap(), 1);
        assert_eq!(support_width(&[t.translated(&[5, 0])]).unwrap(), 1);
        assert!(support_width(&[]).is_err());
    }
}
