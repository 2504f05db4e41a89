//! Buchberger's algorithm for submodules of `k[z]^r`, with optional traces
//! expressing each basis element in terms of the input generators.

use std::collections::BTreeSet;

use crate::algebra::NfElem;
use crate::error::{Error, Result};

use super::module::{mono_degree, mono_div, mono_divides, mono_lcm, Mono, ModuleElement, Ring, Term};

/// Position-over-term with graded reverse lexicographic monomials; the only
/// order the engine uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialOrder {
    PotGrevlex,
}

#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Ring,
    rank: usize,
    generators: Vec<ModuleElement>,
    /// `generators[k] = sum_j traces[k]_j * input_j`.
    traces: Option<Vec<ModuleElement>>,
}

/// Result of dividing by a basis: `f = sum_k quotients_k * g_k + remainder`.
#[derive(Clone, Debug)]
pub struct Division {
    pub quotients: ModuleElement,
    pub remainder: ModuleElement,
}

fn divisor_of(basis: &[ModuleElement], t: &Term) -> Option<usize> {
    basis.iter().position(|g| {
        let (lt, _) = g.lead().expect("basis elements are nonzero");
        lt.pos == t.pos && mono_divides(&lt.mono, &t.mono)
    })
}

/// Full reduction of `f` by `basis`; each step applied to `f` is mirrored on
/// `tag` using `tags`.
fn reduce_tagged(
    ring: &Ring,
    f: &ModuleElement,
    basis: &[ModuleElement],
    mut tag: Option<(ModuleElement, &[ModuleElement])>,
) -> Result<(ModuleElement, Option<ModuleElement>)> {
    let mut p = f.clone();
    let mut i = 0;
    let mut steps = 0usize;
    while i < p.terms().len() {
        steps += 1;
        if steps.is_multiple_of(256) {
            ring.cancel.check()?;
        }
        let (t, c) = p.terms()[i].clone();
        match divisor_of(basis, &t) {
            Some(k) => {
                let (lt, lc) = basis[k].lead().unwrap();
                let q = mono_div(&t.mono, &lt.mono).unwrap();
                let coef = ring.field.div(&c, lc).unwrap().neg();
                p = ring.axpy(&p, &coef, &q, &basis[k]);
                if let Some((acc, tags)) = tag.as_mut() {
                    *acc = ring.axpy(acc, &coef, &q, &tags[k]);
                }
            }
            None => i += 1,
        }
    }
    Ok((p, tag.map(|(a, _)| a)))
}

/// S-vector of two elements sharing a leading position, with its cofactors
/// `(a_i, a_j)` so that `s = a_i g_i - a_j g_j`.
pub(crate) fn s_vector_with_cofactors(ring: &Ring, gi: &ModuleElement, gj: &ModuleElement) -> (ModuleElement, (Mono, NfElem), (Mono, NfElem)) {
    let (ti, ci) = gi.lead().unwrap();
    let (tj, cj) = gj.lead().unwrap();
    let l = mono_lcm(&ti.mono, &tj.mono);
    let mi = mono_div(&l, &ti.mono).unwrap();
    let mj = mono_div(&l, &tj.mono).unwrap();
    let ai = ring.field.inv(ci).unwrap();
    let aj = ring.field.inv(cj).unwrap();
    let zero = ModuleElement::zero(gi.rank());
    let s = ring.axpy(&ring.axpy(&zero, &ai, &mi, gi), &aj.neg(), &mj, gj);
    (s, (mi, ai), (mj, aj))
}

impl GroebnerBasis {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> MonomialOrder {
        MonomialOrder::PotGrevlex
    }

    pub fn generators(&self) -> &[ModuleElement] {
        &self.generators
    }

    pub fn traces(&self) -> Option<&[ModuleElement]> {
        self.traces.as_deref()
    }

    fn check_rank(&self, f: &ModuleElement) -> Result<()> {
        if f.rank() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: f.rank() });
        }
        Ok(())
    }

    pub fn normal_form(&self, f: &ModuleElement) -> Result<ModuleElement> {
        self.check_rank(f)?;
        Ok(reduce_tagged(&self.ring, f, &self.generators, None)?.0)
    }

    pub fn contains(&self, f: &ModuleElement) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// Division with quotients indexed by the basis elements.
    pub fn divide(&self, f: &ModuleElement) -> Result<Division> {
        self.check_rank(f)?;
        let s = self.generators.len();
        let units: Vec<ModuleElement> = (0..s).map(|k| self.ring.unit(s, k)).collect();
        let (remainder, tag) = reduce_tagged(&self.ring, f, &self.generators, Some((ModuleElement::zero(s), &units)))?;
        let quotients = self.ring.scale(&tag.unwrap(), &NfElem::from_i64(-1));
        Ok(Division { quotients, remainder })
    }

    /// Pairs `(i, j)`, `i < j`, whose leading terms share a position.
    pub fn critical_pairs(&self) -> Vec<(usize, usize)> {
        let g = &self.generators;
        let mut out = Vec::new();
        for j in 0..g.len() {
            for i in 0..j {
                if g[i].lead().unwrap().0.pos == g[j].lead().unwrap().0.pos {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn s_vector(&self, i: usize, j: usize) -> ModuleElement {
        s_vector_with_cofactors(&self.ring, &self.generators[i], &self.generators[j]).0
    }

    /// Whether every S-vector reduces to zero.
    pub fn is_groebner(&self) -> Result<bool> {
        for (i, j) in self.critical_pairs() {
            if !self.normal_form(&self.s_vector(i, j))?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Reduced Groebner basis of the submodule generated by `gens` in
/// `k[z]^rank`.
pub fn buchberger(ring: &Ring, rank: usize, gens: &[ModuleElement]) -> Result<GroebnerBasis> {
    run(ring, rank, gens, false)
}

/// As [`buchberger`], also recording traces.
pub fn buchberger_with_traces(ring: &Ring, rank: usize, gens: &[ModuleElement]) -> Result<GroebnerBasis> {
    run(ring, rank, gens, true)
}

fn run(ring: &Ring, rank: usize, gens: &[ModuleElement], with_traces: bool) -> Result<GroebnerBasis> {
    let m = gens.len();
    if let Some(f) = gens.iter().find(|f| f.rank() != rank) {
        return Err(Error::RankMismatch { expected: rank, found: f.rank() });
    }
    let mut basis: Vec<ModuleElement> = Vec::new();
    let mut traces: Vec<ModuleElement> = Vec::new();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();

    let push = |basis: &mut Vec<ModuleElement>,
                traces: &mut Vec<ModuleElement>,
                pending: &mut BTreeSet<(usize, usize)>,
                f: ModuleElement,
                tr: ModuleElement| {
        let inv = ring.field.inv(&f.lead().unwrap().1).unwrap();
        let n = basis.len();
        let pos = f.lead().unwrap().0.pos;
        for (i, g) in basis.iter().enumerate() {
            if g.lead().unwrap().0.pos == pos {
                pending.insert((i, n));
            }
        }
        basis.push(ring.scale(&f, &inv));
        if with_traces {
            traces.push(ring.scale(&tr, &inv));
        }
    };

    for (k, f) in gens.iter().enumerate() {
        if !f.is_zero() {
            let tr = if with_traces { ring.unit(m, k) } else { ModuleElement::zero(m) };
            push(&mut basis, &mut traces, &mut pending, f.clone(), tr);
        }
    }

    let lcm_of = |basis: &[ModuleElement], i: usize, j: usize| {
        mono_lcm(&basis[i].lead().unwrap().0.mono, &basis[j].lead().unwrap().0.mono)
    };
    let key = |p: &(usize, usize), basis: &[ModuleElement]| (mono_degree(&lcm_of(basis, p.0, p.1)), p.1, p.0);
    loop {
        let next = pending.iter().min_by_key(|p| key(p, &basis)).copied();
        let Some(pair) = next else { break };
        ring.cancel.check()?;
        pending.remove(&pair);
        let (i, j) = pair;
        let l = lcm_of(&basis, i, j);
        let pos = basis[i].lead().unwrap().0.pos;
        let sorted = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].lead().unwrap().0.pos == pos
                && mono_divides(&basis[k].lead().unwrap().0.mono, &l)
                && !pending.contains(&sorted(i, k))
                && !pending.contains(&sorted(j, k))
        });
        if chain {
            continue;
        }
        let (s, (mi, ai), (mj, aj)) = s_vector_with_cofactors(ring, &basis[i], &basis[j]);
        let tag = if with_traces {
            let z = ModuleElement::zero(m);
            Some((ring.axpy(&ring.axpy(&z, &ai, &mi, &traces[i]), &aj.neg(), &mj, &traces[j]), traces.as_slice()))
        } else {
            None
        };
        let (r, rt) = reduce_tagged(ring, &s, &basis, tag)?;
        if !r.is_zero() {
            push(&mut basis, &mut traces, &mut pending, r, rt.unwrap_or_else(|| ModuleElement::zero(m)));
        }
    }

    // minimal: drop elements whose leading term is divisible by another's
    let n = basis.len();
    let keep: Vec<usize> = (0..n)
        .filter(|&k| {
            let tk = &basis[k].lead().unwrap().0;
            !(0..n).any(|l| {
                let tl = &basis[l].lead().unwrap().0;
                l != k && tl.pos == tk.pos && mono_divides(&tl.mono, &tk.mono) && (tl.mono != tk.mono || l < k)
            })
        })
        .collect();
    let mut gens_min: Vec<ModuleElement> = keep.iter().map(|&k| basis[k].clone()).collect();
    let mut tr_min: Vec<ModuleElement> = if with_traces { keep.iter().map(|&k| traces[k].clone()).collect() } else { Vec::new() };

    // tail reduction against the others
    for k in 0..gens_min.len() {
        let others: Vec<ModuleElement> = gens_min.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, g)| g.clone()).collect();
        let other_tr: Vec<ModuleElement> = if with_traces {
            tr_min.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, g)| g.clone()).collect()
        } else {
            Vec::new()
        };
        let tag = with_traces.then(|| (tr_min[k].clone(), other_tr.as_slice()));
        let (r, rt) = reduce_tagged(ring, &gens_min[k], &others, tag)?;
        gens_min[k] = r;
        if let Some(rt) = rt {
            tr_min[k] = rt;
        }
    }

    let mut order: Vec<usize> = (0..gens_min.len()).collect();
    order.sort_by(|&a, &b| gens_min[b].lead().unwrap().0.cmp(&gens_min[a].lead().unwrap().0));
    let generators = order.iter().map(|&k| gens_min[k].clone()).collect();
    let traces = with_traces.then(|| order.iter().map(|&k| tr_min[k].clone()).collect());
    Ok(GroebnerBasis { ring: ring.clone(), rank, generators, traces })
}
