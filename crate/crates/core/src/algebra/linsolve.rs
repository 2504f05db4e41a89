//! Exact sparse Gaussian elimination over a number field.

use std::collections::HashMap;
use std::sync::Arc;

use super::matrix::Cancel;
use super::number_field::{NfElem, NumberField};
use crate::error::Result;

/// Sparse row: strictly increasing column indices, nonzero values.
pub type SparseRow = Vec<(usize, NfElem)>;

/// Incremental row echelon form. Rows are reduced against the stored pivots
/// on insertion; a row that reduces to zero is dependent.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Arc<NumberField>,
    pivots: HashMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new(field: &Arc<NumberField>) -> Self {
        Echelon { field: field.clone(), pivots: HashMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces a row against the pivots until its leading column is free.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        row.retain(|(_, c)| !c.is_zero());
        row.sort_by_key(|(k, _)| *k);
        while let Some((col, c)) = row.first().cloned() {
            match self.pivots.get(&col) {
                Some(p) => row = axpy(&self.field, &row, &c.neg(), p),
                None => break,
            }
        }
        row
    }

    /// Inserts a row, returning whether it increased the rank.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let row = self.reduce(row);
        let Some((col, c)) = row.first().cloned() else { return false };
        let inv = self.field.inv(&c).expect("nonzero leading entry");
        let normalized = row.into_iter().map(|(k, v)| (k, self.field.mul(&v, &inv))).collect();
        self.pivots.insert(col, normalized);
        true
    }

    /// Whether the row lies in the span of the inserted rows.
    pub fn contains(&self, row: &SparseRow) -> bool {
        self.reduce(row.clone()).is_empty()
    }
}

/// `a + s * b` for sorted sparse rows.
fn axpy(field: &NumberField, a: &SparseRow, s: &NfElem, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut x, mut y) = (0, 0);
    while x < a.len() || y < b.len() {
        let ka = a.get(x).map(|t| t.0);
        let kb = b.get(y).map(|t| t.0);
        match (ka, kb) {
            (Some(i), Some(j)) if i == j => {
                let v = a[x].1.add(&field.mul(s, &b[y].1));
                if !v.is_zero() {
                    out.push((i, v));
                }
                x += 1;
                y += 1;
            }
            (Some(i), Some(j)) if i < j => {
                out.push(a[x].clone());
                x += 1;
            }
            (Some(_), None) => {
                out.push(a[x].clone());
                x += 1;
            }
            (_, Some(j)) => {
                out.push((j, field.mul(s, &b[y].1)));
                y += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Rank of a sparse matrix given by rows.
pub fn sparse_rank(field: &Arc<NumberField>, rows: impl IntoIterator<Item = SparseRow>, cancel: &Cancel) -> Result<usize> {
    let mut e = Echelon::new(field);
    for r in rows {
        cancel.check()?;
        e.insert(r);
    }
    Ok(e.rank())
}

/// Dimension of the right null space of a `? x ncols` sparse matrix.
pub fn sparse_nullity(
    field: &Arc<NumberField>,
    ncols: usize,
    rows: impl IntoIterator<Item = SparseRow>,
    cancel: &Cancel,
) -> Result<usize> {
    Ok(ncols - sparse_rank(field, rows, cancel)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::unipoly::UniPoly;

    fn row(v: &[(usize, i64)]) -> SparseRow {
        v.iter().map(|&(k, c)| (k, NfElem::from_i64(c))).collect()
    }

    #[test]
    fn rational_ranks() {
        let q = NumberField::rationals();
        let c = Cancel::new();
        let rows = vec![row(&[(0, 1), (1, 2)]), row(&[(0, 2), (1, 4)]), row(&[(2, 3)])];
        assert_eq!(sparse_rank(&q, rows.clone(), &c).unwrap(), 2);
        assert_eq!(sparse_nullity(&q, 4, rows, &c).unwrap(), 2);
        assert_eq!(sparse_rank(&q, Vec::<SparseRow>::new(), &c).unwrap(), 0);
    }

    #[test]
    fn number_field_rank() {
        // [[1, s], [s, 2]] is singular when s^2 = 2
        let k = NumberField::new(&UniPoly::from_i64(&[-2, 0, 1])).unwrap();
        let s = k.generator();
        let rows = vec![
            vec![(0, NfElem::from_i64(1)), (1, s.clone())],
            vec![(0, s.clone()), (1, NfElem::from_i64(2))],
        ];
        assert_eq!(sparse_rank(&k, rows, &Cancel::new()).unwrap(), 1);
    }

    #[test]
    fn membership() {
        let q = NumberField::rationals();
        let mut e = Echelon::new(&q);
        e.insert(row(&[(0, 1), (2, -1)]));
        e.insert(row(&[(1, 1), (2, -1)]));
        assert!(e.contains(&row(&[(0, 1), (1, -1)])));
        assert!(!e.contains(&row(&[(2, 1)])));
        assert_eq!(e.rank(), 2);
    }
}
