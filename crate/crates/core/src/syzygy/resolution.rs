//! Kernels, syzygy modules and free resolutions, and the eigenvalue density
//! read off from the alternating sum of resolution ranks.

use num_rational::BigRational;
use num_bigint::BigInt;

use crate::algebra::matrix::fraction_field_rank_with;
use crate::algebra::{Exponent, PolyMatrix, Rational};
use crate::error::{Error, Result};

use super::groebner::{buchberger, buchberger_with_traces, s_vector_with_cofactors};
use super::module::{ModuleElement, Ring};

/// Multiplies every entry by the smallest `z^P` that clears all negative
/// exponents; returns the polynomial matrix and `P`.
pub fn polynomialize(m: &PolyMatrix) -> (PolyMatrix, Exponent) {
    let d = m.entries().first().map_or(0, |e| e.nvars());
    let mut shift: Exponent = std::iter::repeat_n(0, d).collect();
    for e in m.entries() {
        if let Some(lo) = e.min_exponents() {
            for (s, x) in shift.iter_mut().zip(lo.iter()) {
                *s = (*s).max(-x);
            }
        }
    }
    (m.map(|e| e.shift(&shift)), shift)
}

/// Columns of a polynomial matrix as elements of `k[z]^rows`.
pub fn columns(ring: &Ring, m: &PolyMatrix) -> Result<Vec<ModuleElement>> {
    (0..m.cols()).map(|c| ring.from_components(&m.column(c))).collect()
}

/// Drops generators lying in the span of the others, starting from the
/// reduced Groebner basis of their span.
pub fn minimize(ring: &Ring, rank: usize, gens: &[ModuleElement]) -> Result<Vec<ModuleElement>> {
    let nonzero: Vec<ModuleElement> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if nonzero.is_empty() {
        return Ok(Vec::new());
    }
    let mut keep = buchberger(ring, rank, &nonzero)?.generators().to_vec();
    let mut k = keep.len();
    while k > 0 {
        k -= 1;
        if keep.len() == 1 {
            break;
        }
        let others: Vec<ModuleElement> = keep.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, g)| g.clone()).collect();
        if buchberger(ring, rank, &others)?.contains(&keep[k])? {
            keep.remove(k);
        }
    }
    Ok(keep)
}

/// Generators of `{ h : sum_i h_i gens_i = 0 }`, by Schreyer's construction
/// from the Buchberger trace, minimized.
pub fn syzygies(ring: &Ring, rank: usize, gens: &[ModuleElement]) -> Result<Vec<ModuleElement>> {
    let m = gens.len();
    if m == 0 {
        return Ok(Vec::new());
    }
    let gb = buchberger_with_traces(ring, rank, gens)?;
    let g = gb.generators();
    let a = gb.traces().expect("traces requested");
    let s = g.len();
    let mut out = Vec::new();
    for (i, j) in gb.critical_pairs() {
        ring.cancel.check()?;
        let (sv, (mi, ai), (mj, aj)) = s_vector_with_cofactors(ring, &g[i], &g[j]);
        let div = gb.divide(&sv)?;
        if !div.remainder.is_zero() {
            return Err(Error::Engine("S-vector of a Groebner basis has a nonzero remainder".into()));
        }
        let mut sigma = ring.scale(&div.quotients, &crate::algebra::NfElem::from_i64(-1));
        sigma = ring.axpy(&sigma, &ai, &mi, &ring.unit(s, i));
        sigma = ring.axpy(&sigma, &aj.neg(), &mj, &ring.unit(s, j));
        out.push(ring.combine(&sigma, a, m));
    }
    for (j, f) in gens.iter().enumerate() {
        let div = gb.divide(f)?;
        if !div.remainder.is_zero() {
            return Err(Error::Engine("generator not reduced to zero by its own Groebner basis".into()));
        }
        out.push(ring.sub(&ring.unit(m, j), &ring.combine(&div.quotients, a, m)));
    }
    for v in &out {
        if !ring.combine(v, gens, rank).is_zero() {
            return Err(Error::Engine("emitted syzygy does not annihilate the generators".into()));
        }
    }
    minimize(ring, m, &out)
}

/// Generators of `{ v : M v = 0 }` for a polynomial matrix `M`.
pub fn kernel_of_map(ring: &Ring, m: &PolyMatrix) -> Result<Vec<ModuleElement>> {
    let cols = columns(ring, m)?;
    syzygies(ring, m.rows(), &cols)
}

#[derive(Clone, Debug)]
pub struct FreeResolution {
    /// `r_0, r_1, ...`
    pub ranks: Vec<usize>,
    /// `maps[t]` lists the images of the basis of `k[z]^{r_t}` in
    /// `k[z]^{r_{t-1}}` (with `r_{-1}` the target rank).
    pub maps: Vec<Vec<ModuleElement>>,
    pub target_rank: usize,
}

impl FreeResolution {
    pub fn euler_characteristic(&self) -> i64 {
        self.ranks.iter().enumerate().map(|(k, &r)| if k % 2 == 0 { r as i64 } else { -(r as i64) }).sum()
    }

    /// Whether consecutive maps compose to zero.
    pub fn is_complex(&self, ring: &Ring) -> bool {
        (1..self.maps.len()).all(|t| {
            let prev = &self.maps[t - 1];
            let rank = if t == 1 { self.target_rank } else { self.maps[t - 2].len() };
            self.maps[t].iter().all(|v| ring.combine(v, prev, rank).is_zero())
        })
    }
}

/// Iterates minimized syzygies until none remain. At most `stage_bound`
/// free modules are produced.
pub fn free_resolution(ring: &Ring, rank: usize, gens: &[ModuleElement], stage_bound: usize) -> Result<FreeResolution> {
    let mut ranks = Vec::new();
    let mut maps = Vec::new();
    let mut cur = gens.to_vec();
    let mut cur_rank = rank;
    while !cur.is_empty() {
        if ranks.len() >= stage_bound {
            return Err(Error::StageBoundExceeded(stage_bound));
        }
        ranks.push(cur.len());
        let next = syzygies(ring, cur_rank, &cur)?;
        cur_rank = cur.len();
        maps.push(std::mem::replace(&mut cur, next));
    }
    Ok(FreeResolution { ranks, maps, target_rank: rank })
}

#[derive(Clone, Debug)]
pub struct DensityResult {
    pub density: Rational,
    pub ranks: Vec<usize>,
    pub kernel_rank: usize,
    /// Kernel generators of the polynomialized system; they also span the
    /// Laurent kernel.
    pub generators: Vec<ModuleElement>,
    pub shift: Exponent,
    pub resolution: FreeResolution,
}

/// Density of the eigenvalue whose specialized Bloch matrix is `m`
/// (Laurent entries over the band's number field).
pub fn density(ring: &Ring, m: &PolyMatrix, stage_bound: usize) -> Result<DensityResult> {
    let n = m.cols();
    let (p, shift) = polynomialize(m);
    let kernel = kernel_of_map(ring, &p)?;
    if kernel.is_empty() {
        return Err(Error::ZeroKernel);
    }
    let resolution = free_resolution(ring, n, &kernel, stage_bound)?;
    let alt = resolution.euler_characteristic();
    let oracle = n as i64 - fraction_field_rank_with(m, &ring.cancel)? as i64;
    if alt != oracle {
        return Err(Error::DensityMismatch { resolution: alt, oracle });
    }
    Ok(DensityResult {
        density: BigRational::new(BigInt::from(alt), BigInt::from(n)),
        ranks: resolution.ranks.clone(),
        kernel_rank: oracle as usize,
        generators: kernel,
        shift,
        resolution,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{LaurentPoly, NfElem, NumberField};
    use crate::syzygy::module::Term;

    fn ring(d: usize) -> Ring {
        Ring::new(&NumberField::rationals(), d)
    }

    fn el(r: &Ring, rank: usize, terms: &[(usize, &[u32], i64)]) -> ModuleElement {
        r.from_terms(
            rank,
            terms
                .iter()
                .map(|(p, m, c)| (Term { pos: *p, mono: m.iter().copied().collect() }, NfElem::from_i64(*c)))
                .collect(),
        )
    }

    #[test]
    fn koszul_relation() {
        let r = ring(2);
        let gens = [el(&r, 1, &[(0, &[1, 0], 1)]), el(&r, 1, &[(0, &[0, 1], 1)])];
        let syz = syzygies(&r, 1, &gens).unwrap();
        assert_eq!(syz.len(), 1);
        let expect = el(&r, 2, &[(0, &[0, 1], 1), (1, &[1, 0], -1)]);
        assert!(syz[0] == expect || syz[0] == r.scale(&expect, &NfElem::from_i64(-1)));
        let res = free_resolution(&r, 1, &gens, 5).unwrap();
        assert_eq!(res.ranks, vec![2, 1]);
        assert!(res.is_complex(&r));
    }

    #[test]
    fn free_generators_have_no_syzygies() {
        let r = ring(2);
        let gens = [r.unit(2, 0), r.unit(2, 1)];
        assert!(syzygies(&r, 2, &gens).unwrap().is_empty());
        assert!(free_resolution(&r, 2, &[], 5).unwrap().ranks.is_empty());
    }

    #[test]
    fn multiple_of_a_generator() {
        let r = ring(2);
        let f = el(&r, 1, &[(0, &[1, 1], 1), (0, &[0, 0], -2)]);
        let zf = el(&r, 1, &[(0, &[2, 1], 1), (0, &[1, 0], -2)]);
        let syz = syzygies(&r, 1, &[f, zf]).unwrap();
        assert_eq!(syz.len(), 1);
        let expect = el(&r, 2, &[(0, &[1, 0], 1), (1, &[0, 0], -1)]);
        assert!(syz[0] == expect || syz[0] == r.scale(&expect, &NfElem::from_i64(-1)));
    }

    #[test]
    fn polynomialize_shifts() {
        let q = NumberField::rationals();
        let m = PolyMatrix::from_rows(vec![vec![LaurentPoly::from_int_terms(&q, 1, &[(&[-3], 1)])]]);
        let (p, s) = polynomialize(&m);
        assert_eq!(s.as_slice(), &[3]);
        assert_eq!(p.get(0, 0), &LaurentPoly::from_int_terms(&q, 1, &[(&[0], 1)]));
        let id = PolyMatrix::identity(&q, 2, 2);
        assert_eq!(polynomialize(&id).1.as_slice(), &[0, 0]);
        assert!(kernel_of_map(&ring(2), &id).unwrap().is_empty());
    }
}
