//! Dense matrices of Laurent polynomials: determinants and ranks over the
//! rational function field.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use super::laurent::LaurentPoly;
use super::number_field::{NfElem, NumberField};
use crate::error::{Error, Result};

/// Cooperative cancellation flag checked between elimination steps.
#[derive(Clone, Default, Debug)]
pub struct Cancel(Arc<AtomicBool>);

impl Cancel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cancel(&self) {
        self.0.store(true, Ordering::Relaxed);
    }

    pub fn check(&self) -> Result<()> {
        if self.0.load(Ordering::Relaxed) {
            Err(Error::Cancelled)
        } else {
            Ok(())
        }
    }
}

/// Below this size determinants use cofactor expansion.
const COFACTOR_LIMIT: usize = 6;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<LaurentPoly>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count does not match dimensions");
        PolyMatrix { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        PolyMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn zeros(field: &Arc<NumberField>, nvars: usize, rows: usize, cols: usize) -> Self {
        PolyMatrix::new(rows, cols, vec![LaurentPoly::zero(field, nvars); rows * cols])
    }

    pub fn identity(field: &Arc<NumberField>, nvars: usize, n: usize) -> Self {
        let mut m = Self::zeros(field, nvars, n, n);
        for i in 0..n {
            m.set(i, i, LaurentPoly::one(field, nvars));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LaurentPoly) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[LaurentPoly] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[LaurentPoly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<LaurentPoly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn map(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> Self {
        PolyMatrix::new(self.rows, self.cols, self.entries.iter().map(f).collect())
    }

    pub fn conjugate_transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).conjugate_z());
            }
        }
        PolyMatrix::new(self.cols, self.rows, entries)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DomainMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.get(i, 0).try_mul(other.get(0, j))?;
                for k in 1..self.cols {
                    acc = acc.try_add(&self.get(i, k).try_mul(other.get(k, j))?)?;
                }
                entries.push(acc);
            }
        }
        Ok(PolyMatrix::new(self.rows, other.cols, entries))
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[LaurentPoly]) -> Result<Vec<LaurentPoly>> {
        if v.len() != self.cols {
            return Err(Error::RankMismatch { expected: self.cols, found: v.len() });
        }
        (0..self.rows)
            .map(|i| {
                let mut acc = self.get(i, 0).try_mul(&v[0])?;
                for (k, vk) in v.iter().enumerate().skip(1) {
                    acc = acc.try_add(&self.get(i, k).try_mul(vk)?)?;
                }
                Ok(acc)
            })
            .collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn nvars(&self) -> usize {
        self.entries.first().map_or(0, |e| e.nvars())
    }

    fn field(&self) -> Arc<NumberField> {
        self.entries
            .iter()
            .map(|e| e.field())
            .find(|f| !f.is_rational())
            .or_else(|| self.entries.first().map(|e| e.field()))
            .cloned()
            .unwrap_or_else(NumberField::rationals)
    }

    /// Evaluates every entry at a point (coordinates nonzero where needed).
    pub fn eval(&self, point: &[NfElem]) -> Option<Vec<Vec<NfElem>>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).eval(point)).collect())
            .collect()
    }
}

/// Exact determinant.
pub fn determinant(m: &PolyMatrix) -> Result<LaurentPoly> {
    determinant_with(m, &Cancel::new())
}

pub fn determinant_with(m: &PolyMatrix, cancel: &Cancel) -> Result<LaurentPoly> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    let field = m.field();
    let nvars = m.nvars();
    if m.rows == 0 {
        return Ok(LaurentPoly::one(&field, nvars));
    }
    if m.rows <= COFACTOR_LIMIT {
        let idx: Vec<usize> = (0..m.cols).collect();
        return cofactor(m, 0, &idx, &field, nvars);
    }
    bareiss_determinant(m, cancel, &field, nvars)
}

fn cofactor(
    m: &PolyMatrix,
    row: usize,
    cols: &[usize],
    field: &Arc<NumberField>,
    nvars: usize,
) -> Result<LaurentPoly> {
    if cols.len() == 1 {
        let e = m.get(row, cols[0]);
        return Ok(if e.field().is_rational() { e.with_field(field) } else { e.clone() });
    }
    let mut acc = LaurentPoly::zero(field, nvars);
    for (k, &c) in cols.iter().enumerate() {
        let a = m.get(row, c);
        if a.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = cofactor(m, row + 1, &rest, field, nvars)?;
        let term = a.try_mul(&minor)?;
        acc = if k % 2 == 0 { acc.try_add(&term)? } else { acc.try_sub(&term)? };
    }
    Ok(acc)
}

fn bareiss_determinant(
    m: &PolyMatrix,
    cancel: &Cancel,
    field: &Arc<NumberField>,
    nvars: usize,
) -> Result<LaurentPoly> {
    let n = m.rows;
    let mut a: Vec<Vec<LaurentPoly>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut prev = LaurentPoly::one(field, nvars);
    let mut sign = false;
    for k in 0..n - 1 {
        cancel.check()?;
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = !sign;
                }
                None => return Ok(LaurentPoly::zero(field, nvars)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].try_mul(&a[k][k])?.try_sub(&a[i][k].try_mul(&a[k][j])?)?;
                a[i][j] = num
                    .exact_div(&prev)
                    .ok_or_else(|| Error::Engine("inexact division in fraction-free elimination".into()))?;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if sign { det.neg() } else { det })
}

/// Rank over the field of rational functions in `z`.
pub fn fraction_field_rank(m: &PolyMatrix) -> Result<usize> {
    fraction_field_rank_with(m, &Cancel::new())
}

pub fn fraction_field_rank_with(m: &PolyMatrix, cancel: &Cancel) -> Result<usize> {
    let field = m.field();
    let nvars = m.nvars();
    let (r, c) = (m.rows, m.cols);
    let mut a: Vec<Vec<LaurentPoly>> = (0..r).map(|i| m.row(i).to_vec()).collect();
    let mut prev = LaurentPoly::one(&field, nvars);
    let mut rank = 0;
    for k in 0..r.min(c) {
        cancel.check()?;
        // deterministic pivot: first nonzero in row-major order of the trailing block
        let pivot = (k..r).flat_map(|i| (k..c).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero());
        let Some((pi, pj)) = pivot else { break };
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        for i in k + 1..r {
            for j in k + 1..c {
                let num = a[i][j].try_mul(&a[k][k])?.try_sub(&a[i][k].try_mul(&a[k][j])?)?;
                a[i][j] = num
                    .exact_div(&prev)
                    .ok_or_else(|| Error::Engine("inexact division in fraction-free elimination".into()))?;
            }
            a[i][k] = LaurentPoly::zero(&field, nvars);
        }
        prev = a[k][k].clone();
        rank += 1;
    }
    Ok(rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Arc<NumberField> {
        NumberField::rationals()
    }

    fn p(terms: &[(&[i32], i64)]) -> LaurentPoly {
        LaurentPoly::from_int_terms(&q(), 2, terms)
    }

    #[test]
    fn one_by_one_and_diagonal() {
        let k = q();
        let e = LaurentPoly::from_int_terms(&k, 1, &[(&[1], 1), (&[-1], 1), (&[0], -3)]);
        let m = PolyMatrix::from_rows(vec![vec![e.clone()]]);
        assert_eq!(determinant(&m).unwrap(), e);

        let a = p(&[(&[1, 0], 1), (&[0, 0], 2)]);
        let b = p(&[(&[0, -1], 1)]);
        let c = p(&[(&[1, 1], 3), (&[0, 0], -1)]);
        let z = LaurentPoly::zero(&k, 2);
        let d = PolyMatrix::from_rows(vec![
            vec![a.clone(), z.clone(), z.clone()],
            vec![z.clone(), b.clone(), z.clone()],
            vec![z.clone(), z.clone(), c.clone()],
        ]);
        assert_eq!(determinant(&d).unwrap(), &(&a * &b) * &c);
    }

    #[test]
    fn non_square_rejected() {
        let m = PolyMatrix::zeros(&q(), 2, 2, 3);
        assert!(matches!(determinant(&m), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn bareiss_matches_cofactor() {
        // 7x7 banded matrix: Bareiss path vs cofactor on the same entries
        let n = 7;
        let mut rows = Vec::new();
        for i in 0..n {
            let mut row = Vec::new();
            for j in 0..n {
                let v = if i == j {
                    p(&[(&[1, 0], 1), (&[0, 0], (i as i64) + 2)])
                } else if j == i + 1 {
                    p(&[(&[0, 1], 1)])
                } else if i == j + 1 {
                    p(&[(&[0, -1], 1), (&[0, 0], 1)])
                } else if i == 0 && j == n - 1 {
                    p(&[(&[0, 0], 2)])
                } else {
                    LaurentPoly::zero(&q(), 2)
                };
                row.push(v);
            }
            rows.push(row);
        }
        let m = PolyMatrix::from_rows(rows);
        let fast = determinant(&m).unwrap();
        let idx: Vec<usize> = (0..n).collect();
        let slow = cofactor(&m, 0, &idx, &q(), 2).unwrap();
        assert_eq!(fast, slow);
    }

    #[test]
    fn ranks() {
        let k = q();
        assert_eq!(fraction_field_rank(&PolyMatrix::zeros(&k, 2, 3, 3)).unwrap(), 0);
        assert_eq!(fraction_field_rank(&PolyMatrix::identity(&k, 2, 4)).unwrap(), 4);
        let a = p(&[(&[1, 0], 1), (&[0, 0], 1)]);
        let b = p(&[(&[0, 1], 1)]);
        let m = PolyMatrix::from_rows(vec![
            vec![a.clone(), b.clone()],
            vec![&a * &b, &b * &b],
        ]);
        assert_eq!(fraction_field_rank(&m).unwrap(), 1);
    }

    #[test]
    fn cancellation_is_observed() {
        let c = Cancel::new();
        c.cancel();
        let m = PolyMatrix::identity(&q(), 1, 2);
        assert_eq!(fraction_field_rank_with(&m, &c), Err(Error::Cancelled));
    }
}
