//! Independent oracles: dense rational elimination over plain coefficient
//! maps, with no use of the library's algebra beyond reading its outputs.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use flatband::algebra::NfElem;
use flatband::lattice::QuotientGraph;
use flatband::syzygy::{ModuleElement, Ring, Term};

pub type Q = BigRational;
/// Laurent polynomial as exponent -> coefficient, no zero coefficients.
pub type QPoly = BTreeMap<Vec<i32>, Q>;

pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    q(n, 1)
}

pub fn poly(terms: &[(&[i32], i64)]) -> QPoly {
    let mut out = QPoly::new();
    for (e, c) in terms {
        add_into(&mut out, e.to_vec(), qi(*c));
    }
    out
}

fn add_into(p: &mut QPoly, e: Vec<i32>, c: Q) {
    let v = p.remove(&e).unwrap_or_else(Q::zero) + c;
    if !v.is_zero() {
        p.insert(e, v);
    }
}

pub fn padd(a: &QPoly, b: &QPoly) -> QPoly {
    let mut out = a.clone();
    for (e, c) in b {
        add_into(&mut out, e.clone(), c.clone());
    }
    out
}

pub fn pscale(a: &QPoly, c: &Q) -> QPoly {
    if c.is_zero() {
        return QPoly::new();
    }
    a.iter().map(|(e, x)| (e.clone(), x * c)).collect()
}

pub fn pmul(a: &QPoly, b: &QPoly) -> QPoly {
    let mut out = QPoly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            add_into(&mut out, e, ca * cb);
        }
    }
    out
}

/// Determinant of a 3x3 matrix by the six-permutation expansion.
pub fn det3(m: &[[QPoly; 3]; 3]) -> QPoly {
    const PERMS: [([usize; 3], i64); 6] =
        [([0, 1, 2], 1), ([1, 2, 0], 1), ([2, 0, 1], 1), ([0, 2, 1], -1), ([2, 1, 0], -1), ([1, 0, 2], -1)];
    let mut out = QPoly::new();
    for (p, s) in PERMS {
        let t = pmul(&pmul(&m[0][p[0]], &m[1][p[1]]), &m[2][p[2]]);
        out = padd(&out, &pscale(&t, &qi(s)));
    }
    out
}

/// Reduced row echelon form; returns the pivot rows and pivot columns.
pub fn rref(mut rows: Vec<Vec<Q>>, ncols: usize) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut pivots = Vec::new();
    for c in 0..ncols {
        let r = pivots.len();
        let Some(p) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = Q::one() / &rows[r][c];
        let pivot: Vec<Q> = rows[r].iter().map(|x| x * &inv).collect();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        rows[r] = pivot;
        pivots.push(c);
    }
    rows.truncate(pivots.len());
    (rows, pivots)
}

/// Rank of a dense matrix.
pub fn rank(rows: Vec<Vec<Q>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    rref(rows, ncols).1.len()
}

/// Rank of a family of sparse vectors.
pub fn rank_of<K: Ord + Clone>(vecs: &[BTreeMap<K, Q>]) -> usize {
    let keys: BTreeSet<&K> = vecs.iter().flat_map(|v| v.keys()).collect();
    let index: BTreeMap<&K, usize> = keys.into_iter().enumerate().map(|(i, k)| (k, i)).collect();
    let rows = vecs
        .iter()
        .map(|v| {
            let mut row = vec![Q::zero(); index.len()];
            for (k, c) in v {
                row[index[k]] = c.clone();
            }
            row
        })
        .collect();
    rank(rows)
}

/// All exponent vectors in `{0..=max}^d`.
pub fn box_monomials(d: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out.into_iter().flat_map(|m| (0..=max).map(move |x| [m.clone(), vec![x]].concat())).collect();
    }
    out
}

/// All exponent vectors of total degree at most `b`.
pub fn degree_monomials(d: usize, b: u32) -> Vec<Vec<u32>> {
    box_monomials(d, b).into_iter().filter(|m| m.iter().sum::<u32>() <= b).collect()
}

/// Sparse form of a module element over the rationals.
pub fn sparse(v: &ModuleElement) -> BTreeMap<(usize, Vec<u32>), Q> {
    v.terms()
        .iter()
        .map(|(t, c)| ((t.pos, t.mono.to_vec()), c.as_rational().expect("rational coefficient")))
        .collect()
}

fn shifted(v: &BTreeMap<(usize, Vec<u32>), Q>, m: &[u32]) -> BTreeMap<(usize, Vec<u32>), Q> {
    v.iter().map(|((p, e), c)| ((*p, e.iter().zip(m).map(|(a, b)| a + b).collect()), c.clone())).collect()
}

/// Whether `f = sum_i h_i gens_i` is solvable with every `deg h_i <= bound`.
pub fn member_within(gens: &[ModuleElement], f: &ModuleElement, d: usize, bound: u32) -> bool {
    let gs: Vec<_> = gens.iter().map(sparse).collect();
    let mut cols: Vec<BTreeMap<(usize, Vec<u32>), Q>> = Vec::new();
    for g in &gs {
        for m in degree_monomials(d, bound) {
            cols.push(shifted(g, &m));
        }
    }
    let without = rank_of(&cols);
    cols.push(sparse(f));
    rank_of(&cols) == without
}

/// Dimension of `{ h : sum_i h_i gens_i = 0 }` with `h_i` in the box of
/// exponents at most `max`.
pub fn relation_ball(gens: &[ModuleElement], d: usize, max: u32) -> usize {
    let gs: Vec<_> = gens.iter().map(sparse).collect();
    let mut cols = Vec::new();
    for g in &gs {
        for m in box_monomials(d, max) {
            cols.push(shifted(g, &m));
        }
    }
    cols.len() - rank_of(&cols)
}

/// Dimension of `{ v in Q[z]^cols : M v = 0 }` with every exponent of `v` at
/// most `max`; `m` has polynomial entries.
pub fn kernel_ball(m: &[Vec<QPoly>], d: usize, max: u32) -> usize {
    let mut cols: Vec<BTreeMap<(usize, Vec<i32>), Q>> = Vec::new();
    let ncols = m[0].len();
    for c in 0..ncols {
        for mono in box_monomials(d, max) {
            let mono: Vec<i32> = mono.iter().map(|&x| x as i32).collect();
            let mut col = BTreeMap::new();
            for (r, row) in m.iter().enumerate() {
                for (e, x) in &row[c] {
                    let key = (r, e.iter().zip(&mono).map(|(a, b)| a + b).collect());
                    col.insert(key, x.clone());
                }
            }
            cols.push(col);
        }
    }
    cols.len() - rank_of(&cols)
}

/// Neighbours of a vertex with multiplicity, read straight from the edge
/// list.
pub fn neighbours_of(g: &QuotientGraph, cell: &[i32], v: usize) -> Vec<(Vec<i32>, usize)> {
    let mut out = Vec::new();
    for e in g.edges() {
        // i in cell c is adjacent to j in cell c - offset
        if e.i == v {
            out.push((cell.iter().zip(e.offset.iter()).map(|(c, o)| c - o).collect(), e.j));
        }
        if e.j == v {
            out.push((cell.iter().zip(e.offset.iter()).map(|(c, o)| c + o).collect(), e.i));
        }
    }
    out
}

pub fn window(g: &QuotientGraph, j: i32) -> Vec<(Vec<i32>, usize)> {
    let cells = box_monomials(g.dim(), 2 * j as u32);
    let mut out = Vec::new();
    for c in cells {
        let c: Vec<i32> = c.iter().map(|&x| x as i32 - j).collect();
        for v in 0..g.n() {
            out.push((c.clone(), v));
        }
    }
    out
}

/// Dense `(A - mu D)` with unknowns on the window of radius `j`; rows on the
/// window, plus its outer neighbours when `with_boundary`. Returns
/// `(unknowns, nullity)`.
pub fn window_nullity(g: &QuotientGraph, j: i32, mu: &Q, with_boundary: bool) -> (usize, usize) {
    let inside = window(g, j);
    let index: HashMap<&(Vec<i32>, usize), usize> = inside.iter().enumerate().map(|(k, x)| (x, k)).collect();
    let mut row_vertices = inside.clone();
    if with_boundary {
        let mut extra = BTreeSet::new();
        for (c, v) in &inside {
            for y in neighbours_of(g, c, *v) {
                if !index.contains_key(&y) {
                    extra.insert(y);
                }
            }
        }
        row_vertices.extend(extra);
    }
    let rows = row_vertices
        .iter()
        .map(|(c, v)| {
            let mut row = vec![Q::zero(); inside.len()];
            let nb = neighbours_of(g, c, *v);
            for y in &nb {
                if let Some(&k) = index.get(y) {
                    row[k] += Q::one();
                }
            }
            if let Some(&k) = index.get(&(c.clone(), *v)) {
                row[k] -= mu * qi(nb.len() as i64);
            }
            row
        })
        .collect();
    (inside.len(), inside.len() - rank(rows))
}

/// Random polynomial in `d` variables with total degree at most `deg` and
/// small integer coefficients; each monomial present with probability `p`.
pub fn random_poly(rng: &mut ChaCha8Rng, d: usize, deg: u32, p: f64) -> Vec<(Vec<u32>, i64)> {
    let mut out = Vec::new();
    for m in degree_monomials(d, deg) {
        if rng.gen_bool(p) {
            out.push((m, [-3, -2, -1, 1, 2, 3][rng.gen_range(0..6)]));
        }
    }
    out
}

pub fn element(ring: &Ring, rank: usize, comps: &[Vec<(Vec<u32>, i64)>]) -> ModuleElement {
    let mut terms = Vec::new();
    for (pos, c) in comps.iter().enumerate() {
        for (m, x) in c {
            terms.push((Term { pos, mono: m.iter().copied().collect() }, NfElem::from_i64(*x)));
        }
    }
    ring.from_terms(rank, terms)
}

/// Basis of the null space of a dense matrix.
pub fn nullspace(rows: Vec<Vec<Q>>, ncols: usize) -> Vec<Vec<Q>> {
    let (rows, pivots) = rref(rows, ncols);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::zero(); ncols];
            v[free] = Q::one();
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = -row[free].clone();
            }
            v
        })
        .collect()
}

/// Explicit basis of the relations counted by [`relation_ball`], keyed by
/// `(generator, monomial)`.
pub fn relation_basis(gens: &[ModuleElement], d: usize, max: u32) -> Vec<BTreeMap<(usize, Vec<u32>), Q>> {
    let gs: Vec<_> = gens.iter().map(sparse).collect();
    let mut unknowns = Vec::new();
    let mut cols = Vec::new();
    for (i, g) in gs.iter().enumerate() {
        for m in box_monomials(d, max) {
            cols.push(shifted(g, &m));
            unknowns.push((i, m));
        }
    }
    let keys: BTreeSet<&(usize, Vec<u32>)> = cols.iter().flat_map(|c| c.keys()).collect();
    let rows: Vec<Vec<Q>> =
        keys.iter().map(|k| cols.iter().map(|c| c.get(*k).cloned().unwrap_or_else(Q::zero)).collect()).collect();
    nullspace(rows, cols.len())
        .into_iter()
        .map(|v| unknowns.iter().cloned().zip(v).filter(|(_, c)| !c.is_zero()).collect())
        .collect()
}

pub fn from_sparse(ring: &Ring, rank: usize, v: &BTreeMap<(usize, Vec<u32>), Q>) -> ModuleElement {
    let terms = v
        .iter()
        .map(|((pos, m), c)| (Term { pos: *pos, mono: m.iter().copied().collect() }, NfElem::from_rational(c.clone())))
        .collect();
    ring.from_terms(rank, terms)
}
