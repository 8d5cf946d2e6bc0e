//! Polynomial ideals at desk scale: multivariate division, Buchberger's
//! algorithm with Gebauer–Möller pair pruning, and elimination ideals.
//!
//! This engine is the independent cross-check for the closed-form chart
//! computations in [`crate::blowup`]; it shares nothing with them beyond the
//! polynomial type.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{grlex_cmp, GaussRat, Poly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("Gröbner cap exceeded: {what} limit {limit} (basis size {basis_len}, {pairs_left} pairs pending, pair degree {degree})")]
    CapExceeded { what: &'static str, limit: usize, basis_len: usize, pairs_left: usize, degree: u32 },
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("variable `{0}` is not part of the ideal's ring")]
    UnknownVariable(String),
}

/// Monomial order on the ideal's variable list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MonomialOrder {
    /// Graded lexicographic.
    Grlex,
    /// Block order: graded-lex on the first `split` variables, ties broken by
    /// graded-lex on the rest. Eliminates the first block.
    Elim { split: usize },
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match *self {
            MonomialOrder::Grlex => grlex_cmp(a, b),
            MonomialOrder::Elim { split } => {
                let s = split.min(a.len());
                grlex_cmp(&a[..s], &b[..s]).then_with(|| grlex_cmp(&a[s..], &b[s..]))
            }
        }
    }
}

/// Resource limits for Buchberger runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub max_degree: u32,
    pub max_basis: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_degree: 24, max_basis: 500 }
    }
}

impl Caps {
    /// Parse `"<max_degree>,<max_basis>"` or `"max_degree=..,max_basis=.."`;
    /// omitted fields keep their defaults.
    pub fn parse(s: &str) -> Result<Caps, String> {
        let mut caps = Caps::default();
        let parts: Vec<&str> = s.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
        for (i, part) in parts.iter().enumerate() {
            let (key, val) = match part.split_once('=') {
                Some((k, v)) => (k.trim(), v.trim()),
                None => (if i == 0 { "max_degree" } else { "max_basis" }, *part),
            };
            match key {
                "max_degree" | "degree" => caps.max_degree = val.parse().map_err(|_| format!("bad degree cap `{val}`"))?,
                "max_basis" | "basis" => caps.max_basis = val.parse().map_err(|_| format!("bad basis cap `{val}`"))?,
                other => return Err(format!("unknown cap `{other}`")),
            }
        }
        if caps.max_degree == 0 || caps.max_basis == 0 {
            return Err("caps must be positive".into());
        }
        Ok(caps)
    }

    /// Caps from the `MFK_CAPS` environment variable, defaults when unset.
    pub fn from_env() -> Result<Caps, String> {
        match std::env::var("MFK_CAPS") {
            Ok(s) => Caps::parse(&s),
            Err(_) => Ok(Caps::default()),
        }
    }
}

/// Polynomial in the ideal's ring, terms sorted decreasing in the active order.
#[derive(Clone, Debug)]
struct Sp {
    terms: Vec<(Vec<u32>, GaussRat)>,
}

impl Sp {
    fn zero() -> Sp {
        Sp { terms: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lm(&self) -> &[u32] {
        &self.terms[0].0
    }

    fn lc(&self) -> &GaussRat {
        &self.terms[0].1
    }

    fn scale(&mut self, c: &GaussRat) {
        for t in &mut self.terms {
            t.1 = &t.1 * c;
        }
    }


    /// `self - c·x^shift·other`, merging in `order`.
    fn sub_mul(&self, c: &GaussRat, shift: &[u32], other: &Sp, order: &MonomialOrder) -> Sp {
        let shifted = other.terms.iter().map(|(e, k)| (e.iter().zip(shift).map(|(a, b)| a + b).collect::<Vec<u32>>(), k * c));
        merge_sub(&self.terms, shifted, order)
    }

    fn add(&self, other: &Sp, order: &MonomialOrder) -> Sp {
        merge_sub(&self.terms, other.terms.iter().map(|(e, c)| (e.clone(), -c)), order)
    }

    fn to_poly(&self, vars: &[String]) -> Poly {
        Poly::from_terms(vars, self.terms.iter().cloned())
    }

    fn from_poly(p: &Poly, vars: &[String], order: &MonomialOrder) -> Result<Sp, PolyError> {
        let p = p.with_vars(vars)?;
        let mut terms: Vec<(Vec<u32>, GaussRat)> = p.terms().map(|(e, c)| (e.to_vec(), c.clone())).collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Ok(Sp { terms })
    }

    fn monomial(e: Vec<u32>, c: GaussRat) -> Sp {
        Sp { terms: vec![(e, c)] }
    }
}

fn merge_sub(
    a: &[(Vec<u32>, GaussRat)],
    b: impl Iterator<Item = (Vec<u32>, GaussRat)>,
    order: &MonomialOrder,
) -> Sp {
    let mut out = Vec::with_capacity(a.len());
    let mut i = 0;
    for (eb, cb) in b {
        while i < a.len() && order.cmp(&a[i].0, &eb) == Ordering::Greater {
            out.push(a[i].clone());
            i += 1;
        }
        if i < a.len() && a[i].0 == eb {
            let c = &a[i].1 - &cb;
            if !c.is_zero() {
                out.push((eb, c));
            }
            i += 1;
        } else {
            out.push((eb, -cb));
        }
    }
    out.extend_from_slice(&a[i..]);
    Sp { terms: out }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

fn degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

/// Full normal form of `p` by `basis`; optionally accumulates quotients so that
/// `p = Σ q_j·basis_j + r`.
fn normal_form(p: &Sp, basis: &[&Sp], order: &MonomialOrder, mut quotients: Option<&mut Vec<Sp>>) -> Sp {
    let mut rem: Vec<(Vec<u32>, GaussRat)> = Vec::new();
    let mut cur = p.clone();
    'outer: while !cur.is_zero() {
        let (lm, lc) = (cur.lm().to_vec(), cur.lc().clone());
        for (j, g) in basis.iter().enumerate() {
            if divides(g.lm(), &lm) {
                let shift: Vec<u32> = lm.iter().zip(g.lm()).map(|(a, b)| a - b).collect();
                let c = &lc / g.lc();
                cur = cur.sub_mul(&c, &shift, g, order);
                if let Some(qs) = quotients.as_deref_mut() {
                    qs[j] = qs[j].add(&Sp::monomial(shift, c), order);
                }
                continue 'outer;
            }
        }
        rem.push(cur.terms.remove(0));
    }
    Sp { terms: rem }
}

/// An ideal given by generators, together with the monomial order used for
/// division and Gröbner computations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ideal {
    pub vars: Vec<String>,
    pub order: MonomialOrder,
    pub gens: Vec<Poly>,
}

/// Gröbner basis plus, when requested, each basis element written as a
/// combination of the original generators.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    pub basis: Ideal,
    /// `cofactors[i][j]`: coefficient of original generator `j` in basis element `i`.
    pub cofactors: Option<Vec<Vec<Poly>>>,
    pub pairs_processed: usize,
}

struct Elem {
    sp: Sp,
    cof: Option<Vec<Sp>>,
}

impl Ideal {
    /// Embed the generators in `vars`; zero generators are dropped.
    pub fn new(vars: Vec<String>, gens: Vec<Poly>, order: MonomialOrder) -> Result<Ideal, IdealError> {
        let gens = gens
            .into_iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.with_vars(&vars))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Ideal { vars, order, gens })
    }

    /// Ideal over the union of the generators' variables, graded-lex.
    pub fn from_gens(gens: Vec<Poly>) -> Ideal {
        let mut vars: Vec<String> = Vec::new();
        for g in &gens {
            for v in g.vars() {
                if !vars.contains(v) {
                    vars.push(v.clone());
                }
            }
        }
        Ideal::new(vars, gens, MonomialOrder::Grlex).expect("all variables declared")
    }

    fn sps(&self) -> Vec<Sp> {
        self.gens.iter().map(|g| Sp::from_poly(g, &self.vars, &self.order).expect("embedded")).collect()
    }

    /// Leading monomial of a polynomial in this ideal's order.
    pub fn leading_monomial(&self, p: &Poly) -> Result<Option<Vec<u32>>, IdealError> {
        let sp = Sp::from_poly(p, &self.vars, &self.order)?;
        Ok((!sp.is_zero()).then(|| sp.lm().to_vec()))
    }

    /// Normal form of `p` by the generators (multivariate division). Zero
    /// certifies membership when the generators are a Gröbner basis.
    pub fn reduce(&self, p: &Poly) -> Result<Poly, IdealError> {
        Ok(self.reduce_with_quotients(p)?.1)
    }

    /// Division with quotients: `p = Σ q_j·gens_j + r`.
    pub fn reduce_with_quotients(&self, p: &Poly) -> Result<(Vec<Poly>, Poly), IdealError> {
        let sp = Sp::from_poly(p, &self.vars, &self.order)?;
        let basis = self.sps();
        let refs: Vec<&Sp> = basis.iter().collect();
        let mut qs = vec![Sp::zero(); basis.len()];
        let r = normal_form(&sp, &refs, &self.order, Some(&mut qs));
        Ok((qs.iter().map(|q| q.to_poly(&self.vars)).collect(), r.to_poly(&self.vars)))
    }

    /// Reduced Gröbner basis (see [`Ideal::groebner`]).
    pub fn buchberger(&self, caps: Caps) -> Result<Ideal, IdealError> {
        Ok(self.groebner(caps, false)?.basis)
    }

    /// Buchberger's algorithm. Pairs are taken by increasing LCM degree, then
    /// lexicographically by generator index; the Gebauer–Möller criteria
    /// discard redundant pairs. The result is reduced, monic, and sorted by
    /// increasing leading monomial.
    pub fn groebner(&self, caps: Caps, track_cofactors: bool) -> Result<GroebnerBasis, IdealError> {
        let order = self.order;
        let nvars = self.vars.len();
        let ngens = self.gens.len();
        let mut elems: Vec<Elem> = Vec::new();
        let mut active: Vec<usize> = Vec::new();
        let mut pairs: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
        let mut processed = 0usize;

        let unit_cof = |j: usize, c: &GaussRat| -> Vec<Sp> {
            (0..ngens)
                .map(|k| if k == j { Sp::monomial(vec![0; nvars], c.clone()) } else { Sp::zero() })
                .collect()
        };

        for (j, g) in self.sps().into_iter().enumerate() {
            let inv = g.lc().inv().expect("nonzero");
            let mut sp = g;
            sp.scale(&inv);
            let cof = track_cofactors.then(|| unit_cof(j, &inv));
            let d = degree(sp.lm());
            if d > caps.max_degree {
                return Err(IdealError::CapExceeded {
                    what: "degree",
                    limit: caps.max_degree as usize,
                    basis_len: elems.len(),
                    pairs_left: pairs.len(),
                    degree: d,
                });
            }
            elems.push(Elem { sp, cof });
            update(&elems, &mut active, &mut pairs, elems.len() - 1);
        }

        while let Some(&(d, i, j)) = pairs.iter().next() {
            pairs.remove(&(d, i, j));
            if d > caps.max_degree {
                return Err(IdealError::CapExceeded {
                    what: "degree",
                    limit: caps.max_degree as usize,
                    basis_len: elems.len(),
                    pairs_left: pairs.len() + 1,
                    degree: d,
                });
            }
            processed += 1;
            let (gi, gj) = (&elems[i], &elems[j]);
            let l = lcm(gi.sp.lm(), gj.sp.lm());
            let si: Vec<u32> = l.iter().zip(gi.sp.lm()).map(|(a, b)| a - b).collect();
            let sj: Vec<u32> = l.iter().zip(gj.sp.lm()).map(|(a, b)| a - b).collect();
            // both are monic: S = x^si·g_i − x^sj·g_j
            let s = Sp::zero()
                .sub_mul(&-GaussRat::one(), &si, &gi.sp, &order)
                .sub_mul(&GaussRat::one(), &sj, &gj.sp, &order);
            let basis: Vec<&Sp> = active.iter().map(|&k| &elems[k].sp).collect();
            let mut qs = track_cofactors.then(|| vec![Sp::zero(); basis.len()]);
            let mut h = normal_form(&s, &basis, &order, qs.as_mut());
            if h.is_zero() {
                continue;
            }
            let cof = if track_cofactors {
                let (ci, cj) = (gi.cof.as_ref().unwrap(), gj.cof.as_ref().unwrap());
                let qs = qs.unwrap();
                let mut cof: Vec<Sp> = (0..ngens)
                    .map(|k| {
                        Sp::zero()
                            .sub_mul(&-GaussRat::one(), &si, &ci[k], &order)
                            .sub_mul(&GaussRat::one(), &sj, &cj[k], &order)
                    })
                    .collect();
                for (q, &a) in qs.iter().zip(&active) {
                    let ca = elems[a].cof.as_ref().unwrap();
                    for (e, c) in &q.terms {
                        for k in 0..ngens {
                            cof[k] = cof[k].sub_mul(c, e, &ca[k], &order);
                        }
                    }
                }
                Some(cof)
            } else {
                None
            };
            let inv = h.lc().inv().expect("nonzero");
            h.scale(&inv);
            let cof = cof.map(|c| {
                c.into_iter()
                    .map(|mut x| {
                        x.scale(&inv);
                        x
                    })
                    .collect()
            });
            elems.push(Elem { sp: h, cof });
            if elems.len() > caps.max_basis {
                return Err(IdealError::CapExceeded {
                    what: "basis",
                    limit: caps.max_basis,
                    basis_len: elems.len(),
                    pairs_left: pairs.len(),
                    degree: d,
                });
            }
            update(&elems, &mut active, &mut pairs, elems.len() - 1);
        }

        // interreduce: tail-reduce each element by the others
        active.sort_by(|&a, &b| order.cmp(elems[a].sp.lm(), elems[b].sp.lm()));
        let mut out_sp: Vec<Sp> = Vec::with_capacity(active.len());
        let mut out_cof: Vec<Vec<Sp>> = Vec::new();
        for &k in &active {
            let others: Vec<&Sp> = active.iter().filter(|&&o| o != k).map(|&o| &elems[o].sp).collect();
            let other_idx: Vec<usize> = active.iter().copied().filter(|&o| o != k).collect();
            let g = &elems[k].sp;
            // leading term is irreducible by the others (minimal basis), reduce the tail
            let tail = Sp { terms: g.terms[1..].to_vec() };
            let mut qs = track_cofactors.then(|| vec![Sp::zero(); others.len()]);
            let r = normal_form(&tail, &others, &order, qs.as_mut());
            let mut terms = vec![g.terms[0].clone()];
            terms.extend(r.terms);
            out_sp.push(Sp { terms });
            if track_cofactors {
                let mut cof = elems[k].cof.clone().unwrap();
                for (q, &a) in qs.unwrap().iter().zip(&other_idx) {
                    let ca = elems[a].cof.as_ref().unwrap();
                    for (e, c) in &q.terms {
                        for kk in 0..ngens {
                            cof[kk] = cof[kk].sub_mul(c, e, &ca[kk], &order);
                        }
                    }
                }
                out_cof.push(cof);
            }
        }

        let basis = Ideal {
            vars: self.vars.clone(),
            order,
            gens: out_sp.iter().map(|s| s.to_poly(&self.vars)).collect(),
        };
        let cofactors = track_cofactors
            .then(|| out_cof.iter().map(|row| row.iter().map(|c| c.to_poly(&self.vars)).collect()).collect());
        Ok(GroebnerBasis { basis, cofactors, pairs_processed: processed })
    }

    /// Post-hoc check that the generators form a Gröbner basis: every
    /// S-polynomial reduces to zero.
    pub fn is_groebner(&self) -> bool {
        let sps = self.sps();
        let refs: Vec<&Sp> = sps.iter().collect();
        for i in 0..sps.len() {
            for j in (i + 1)..sps.len() {
                let l = lcm(sps[i].lm(), sps[j].lm());
                let si: Vec<u32> = l.iter().zip(sps[i].lm()).map(|(a, b)| a - b).collect();
                let sj: Vec<u32> = l.iter().zip(sps[j].lm()).map(|(a, b)| a - b).collect();
                let ci = sps[i].lc().inv().unwrap();
                let cj = sps[j].lc().inv().unwrap();
                let s = Sp::zero().sub_mul(&-ci, &si, &sps[i], &self.order).sub_mul(&cj, &sj, &sps[j], &self.order);
                if !normal_form(&s, &refs, &self.order, None).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Generators of `I ∩ K[keep]`. The ring is reordered so that the
    /// eliminated variables come first under a block order.
    pub fn elimination_ideal(&self, keep: &[String], caps: Caps) -> Result<Ideal, IdealError> {
        for k in keep {
            if !self.vars.contains(k) {
                return Err(IdealError::UnknownVariable(k.clone()));
            }
        }
        let elim: Vec<String> = self.vars.iter().filter(|v| !keep.contains(v)).cloned().collect();
        let kept: Vec<String> = self.vars.iter().filter(|v| keep.contains(v)).cloned().collect();
        let mut vars = elim.clone();
        vars.extend(kept.iter().cloned());
        let order = if elim.is_empty() { MonomialOrder::Grlex } else { MonomialOrder::Elim { split: elim.len() } };
        let gb = Ideal::new(vars, self.gens.clone(), order)?.buchberger(caps)?;
        let gens = gb
            .gens
            .iter()
            .filter(|g| elim.iter().all(|v| !g.occurs(v)))
            .map(|g| g.with_vars(&kept))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Ideal { vars: kept, order: MonomialOrder::Grlex, gens })
    }

    /// Membership test via a Gröbner basis.
    pub fn contains(&self, p: &Poly, caps: Caps) -> Result<bool, IdealError> {
        Ok(self.buchberger(caps)?.reduce(p)?.is_zero())
    }

    /// Ideal equality, decided by comparing reduced Gröbner bases in a common ring.
    pub fn same_ideal(&self, other: &Ideal, caps: Caps) -> Result<bool, IdealError> {
        let mut vars = self.vars.clone();
        for v in &other.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        let a = Ideal::new(vars.clone(), self.gens.clone(), MonomialOrder::Grlex)?.buchberger(caps)?;
        let b = Ideal::new(vars, other.gens.clone(), MonomialOrder::Grlex)?.buchberger(caps)?;
        Ok(a.gens == b.gens)
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(|g| g.constant_value().is_some_and(|c| !c.is_zero()))
    }
}

/// Gebauer–Möller update: add element `h` to the active set and pair queue.
fn update(elems: &[Elem], active: &mut Vec<usize>, pairs: &mut BTreeSet<(u32, usize, usize)>, h: usize) {
    let lh = elems[h].sp.lm().to_vec();
    // candidate new pairs (g, h)
    let cands: Vec<(usize, Vec<u32>)> = active.iter().map(|&g| (g, lcm(elems[g].sp.lm(), &lh))).collect();
    let mut keep: Vec<(usize, Vec<u32>)> = Vec::new();
    for (idx, (g, l)) in cands.iter().enumerate() {
        let lg = elems[*g].sp.lm();
        if coprime(lg, &lh) {
            keep.push((*g, l.clone()));
            continue;
        }
        // chain criterion among the new pairs: drop (g,h) if another new pair's
        // lcm properly divides this one (or equals it and comes earlier)
        let dominated = cands.iter().enumerate().any(|(o, (_, l2))| {
            o != idx && divides(l2, l) && (l2 != l || o < idx)
        });
        if !dominated {
            keep.push((*g, l.clone()));
        }
    }
    // product criterion: coprime leading monomials need no pair
    let new_pairs: Vec<(u32, usize, usize)> = keep
        .into_iter()
        .filter(|(g, _)| !coprime(elems[*g].sp.lm(), &lh))
        .map(|(g, l)| (degree(&l), g.min(h), g.max(h)))
        .collect();
    // prune old pairs whose lcm is divisible by lm(h) strictly on both sides
    pairs.retain(|&(_, a, b)| {
        let lab = lcm(elems[a].sp.lm(), elems[b].sp.lm());
        !(divides(&lh, &lab) && lcm(elems[a].sp.lm(), &lh) != lab && lcm(elems[b].sp.lm(), &lh) != lab)
    });
    pairs.extend(new_pairs);
    active.retain(|&g| !divides(&lh, elems[g].sp.lm()));
    active.push(h);
}
