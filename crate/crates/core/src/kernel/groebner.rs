//! Buchberger's algorithm for submodules of `P^rank`, `P` a polynomial ring
//! over a field or over `ℤ`. Module terms use position-over-term order with
//! lower component indices counting as larger, so the elements of a basis
//! whose leading component is `≥ k` generate the intersection with the last
//! `rank - k` coordinates.
//!
//! Over `ℤ` the basis is a strong basis: S-polynomials and gcd-polynomials
//! are formed for every pair, and reduction divides leading coefficients
//! with non-negative remainder.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::domain::{div_rem_euclid, int, Arith, Coeff};
use super::monomial::{Monomial, MonomialOrder};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct Term {
    pub comp: usize,
    pub mono: Monomial,
}

/// Sparse module element, terms sorted from largest to smallest.
pub(crate) type ModVec = Vec<(Term, Coeff)>;

#[derive(Debug, Clone)]
pub(crate) struct Engine {
    pub order: MonomialOrder,
    pub arith: Arith,
    pub cap: u32,
}

struct Elem {
    v: ModVec,
    sugar: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Pair {
    sugar: u32,
    lcm: Term,
    i: usize,
    j: usize,
}

impl Engine {
    pub fn cmp_terms(&self, a: &Term, b: &Term) -> Ordering {
        b.comp.cmp(&a.comp).then_with(|| self.order.cmp(&a.mono, &b.mono))
    }

    fn check_degree(&self, degree: u32) -> Result<()> {
        if degree > self.cap {
            Err(Error::DegreeCapExceeded { cap: self.cap, degree })
        } else {
            Ok(())
        }
    }

    pub fn sort(&self, v: &mut ModVec) {
        v.sort_by(|a, b| self.cmp_terms(&b.0, &a.0));
    }

    /// `a - c·m·b`, where `m` shifts every monomial of `b`.
    fn sub_mul(&self, a: &[(Term, Coeff)], c: &Coeff, m: &Monomial, b: &[(Term, Coeff)]) -> ModVec {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut ia, mut ib) = (0, 0);
        while ia < a.len() || ib < b.len() {
            let shifted = b.get(ib).map(|(t, y)| (Term { comp: t.comp, mono: t.mono.mul(m) }, y));
            match (a.get(ia), shifted) {
                (Some(x), None) => {
                    out.push(x.clone());
                    ia += 1;
                }
                (None, Some((t, y))) => {
                    out.push((t, self.arith.norm(-(y * c))));
                    ib += 1;
                }
                (Some(x), Some((t, y))) => match self.cmp_terms(&x.0, &t) {
                    Ordering::Greater => {
                        out.push(x.clone());
                        ia += 1;
                    }
                    Ordering::Less => {
                        out.push((t, self.arith.norm(-(y * c))));
                        ib += 1;
                    }
                    Ordering::Equal => {
                        let s = self.arith.norm(&x.1 - y * c);
                        if !s.is_zero() {
                            out.push((t, s));
                        }
                        ia += 1;
                        ib += 1;
                    }
                },
                (None, None) => unreachable!(),
            }
        }
        out
    }

    fn scale(&self, v: &ModVec, c: &Coeff) -> ModVec {
        v.iter()
            .filter_map(|(t, x)| {
                let y = self.arith.mul(x, c);
                (!y.is_zero()).then(|| (t.clone(), y))
            })
            .collect()
    }

    fn shift(&self, v: &ModVec, m: &Monomial) -> ModVec {
        v.iter().map(|(t, x)| (Term { comp: t.comp, mono: t.mono.mul(m) }, x.clone())).collect()
    }

    fn add(&self, a: &ModVec, b: &ModVec) -> ModVec {
        let one = Monomial::one(a.first().or(b.first()).map_or(0, |t| t.0.mono.nvars()));
        self.sub_mul(a, &-Coeff::one(), &one, b)
    }

    /// Monic over fields, positive leading coefficient over `ℤ`.
    pub fn normalize(&self, v: ModVec) -> ModVec {
        let Some(lc) = v.first().map(|t| t.1.clone()) else { return v };
        if self.arith.is_field() {
            if lc.is_one() {
                v
            } else {
                self.scale(&v, &self.arith.inv(&lc))
            }
        } else if lc.is_negative() {
            self.scale(&v, &-Coeff::one())
        } else {
            v
        }
    }

    fn degree(v: &ModVec) -> u32 {
        v.iter().map(|t| t.0.mono.degree()).max().unwrap_or(0)
    }

    /// Full reduction of `v` by `basis`; `index` maps a component to the
    /// basis elements leading there.
    fn reduce_with(&self, mut rem: ModVec, basis: &[&ModVec], index: &HashMap<usize, Vec<usize>>) -> ModVec {
        let mut pos = 0;
        while pos < rem.len() {
            let (term, c) = rem[pos].clone();
            let candidates = index.get(&term.comp).map(Vec::as_slice).unwrap_or(&[]);
            let mut chosen: Option<usize> = None;
            for &k in candidates {
                let lead = &basis[k][0];
                if !lead.0.mono.divides(&term.mono) {
                    continue;
                }
                if self.arith.is_field() {
                    chosen = Some(k);
                    break;
                }
                let better = match chosen {
                    None => true,
                    Some(prev) => lead.1.abs() < basis[prev][0].1.abs(),
                };
                if better {
                    chosen = Some(k);
                }
            }
            let Some(k) = chosen else {
                pos += 1;
                continue;
            };
            let g = basis[k];
            let shift = term.mono.div(&g[0].0.mono);
            let q = if self.arith.is_field() {
                self.arith.mul(&c, &self.arith.inv(&g[0].1))
            } else {
                let (q, _) = div_rem_euclid(&int(&c), &int(&g[0].1));
                if q.is_zero() {
                    pos += 1;
                    continue;
                }
                Coeff::from_integer(q)
            };
            let tail = self.sub_mul(&rem[pos..], &q, &shift, g);
            rem.truncate(pos);
            rem.extend(tail);
        }
        rem
    }

    pub fn reduce(&self, v: ModVec, basis: &[ModVec]) -> ModVec {
        let refs: Vec<&ModVec> = basis.iter().collect();
        let index = build_index(&refs);
        self.reduce_with(v, &refs, &index)
    }

    /// Reduced (strong over `ℤ`) Gröbner basis of the submodule generated by
    /// `gens`, sorted by leading term.
    pub fn groebner(&self, gens: Vec<ModVec>) -> Result<Vec<ModVec>> {
        let mut basis: Vec<Elem> = Vec::new();
        let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut queue: Vec<Pair> = Vec::new();

        let mut inputs: Vec<ModVec> = gens.into_iter().filter(|v| !v.is_empty()).collect();
        for v in &mut inputs {
            self.sort(v);
            self.check_degree(Self::degree(v))?;
        }
        inputs.sort_by(|a, b| self.cmp_terms(&a[0].0, &b[0].0).then_with(|| a.len().cmp(&b.len())));

        for v in inputs {
            let sugar = Self::degree(&v);
            self.insert(&mut basis, &mut pending, &mut queue, v, sugar)?;
        }

        while let Some(pair) = self.pop_pair(&mut queue) {
            pending.remove(&(pair.i, pair.j));
            if self.arith.is_field() && self.chain_criterion(&basis, &pending, &pair) {
                continue;
            }
            for s in self.pair_polys(&basis[pair.i].v, &basis[pair.j].v) {
                self.insert(&mut basis, &mut pending, &mut queue, s, pair.sugar)?;
            }
        }
        Ok(self.interreduce(basis.into_iter().map(|e| e.v).collect()))
    }

    fn insert(
        &self,
        basis: &mut Vec<Elem>,
        pending: &mut BTreeSet<(usize, usize)>,
        queue: &mut Vec<Pair>,
        v: ModVec,
        sugar: u32,
    ) -> Result<()> {
        let refs: Vec<&ModVec> = basis.iter().map(|e| &e.v).collect();
        let index = build_index(&refs);
        let r = self.normalize(self.reduce_with(v, &refs, &index));
        if r.is_empty() {
            return Ok(());
        }
        let sugar = sugar.max(Self::degree(&r));
        let j = basis.len();
        let lead = r[0].0.clone();
        for (i, e) in basis.iter().enumerate() {
            let other = &e.v[0].0;
            if other.comp != lead.comp {
                continue;
            }
            let lcm = other.mono.lcm(&lead.mono);
            self.check_degree(lcm.degree())?;
            let s = (e.sugar + lcm.degree() - other.mono.degree())
                .max(sugar + lcm.degree() - lead.mono.degree());
            pending.insert((i, j));
            queue.push(Pair { sugar: s, lcm: Term { comp: lead.comp, mono: lcm }, i, j });
        }
        basis.push(Elem { v: r, sugar });
        Ok(())
    }

    fn pop_pair(&self, queue: &mut Vec<Pair>) -> Option<Pair> {
        if queue.is_empty() {
            return None;
        }
        let mut best = 0;
        for k in 1..queue.len() {
            let (a, b) = (&queue[k], &queue[best]);
            let ord = a
                .sugar
                .cmp(&b.sugar)
                .then_with(|| self.cmp_terms(&a.lcm, &b.lcm))
                .then_with(|| (a.j, a.i).cmp(&(b.j, b.i)));
            if ord == Ordering::Less {
                best = k;
            }
        }
        Some(queue.swap_remove(best))
    }

    fn chain_criterion(&self, basis: &[Elem], pending: &BTreeSet<(usize, usize)>, pair: &Pair) -> bool {
        let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
        basis.iter().enumerate().any(|(k, e)| {
            k != pair.i
                && k != pair.j
                && e.v[0].0.comp == pair.lcm.comp
                && e.v[0].0.mono.divides(&pair.lcm.mono)
                && !pending.contains(&key(pair.i, k))
                && !pending.contains(&key(pair.j, k))
        })
    }

    /// S-polynomial, plus the gcd-polynomial over `ℤ`.
    fn pair_polys(&self, f: &ModVec, g: &ModVec) -> Vec<ModVec> {
        let (tf, cf) = &f[0];
        let (tg, cg) = &g[0];
        let lcm = tf.mono.lcm(&tg.mono);
        let mf = lcm.div(&tf.mono);
        let mg = lcm.div(&tg.mono);
        if self.arith.is_field() {
            let a = self.scale(&self.shift(f, &mf), &self.arith.inv(cf));
            let b = self.scale(&self.shift(g, &mg), &self.arith.inv(cg));
            return vec![self.sub_mul(&a, &Coeff::one(), &Monomial::one(lcm.nvars()), &b)];
        }
        let (a, b) = (int(cf), int(cg));
        let l = a.lcm(&b);
        let s = self.sub_mul(
            &self.scale(&self.shift(f, &mf), &Coeff::from_integer(&l / &a)),
            &Coeff::from_integer(&l / &b),
            &mg,
            g,
        );
        let mut out = vec![s];
        let divides = |x: &BigInt, y: &BigInt| (y % x).is_zero();
        if !divides(&a, &b) && !divides(&b, &a) {
            let e = a.extended_gcd(&b);
            let gpoly = self.add(
                &self.scale(&self.shift(f, &mf), &Coeff::from_integer(e.x)),
                &self.scale(&self.shift(g, &mg), &Coeff::from_integer(e.y)),
            );
            out.push(gpoly);
        }
        out
    }

    fn interreduce(&self, elems: Vec<ModVec>) -> Vec<ModVec> {
        let n = elems.len();
        let mut keep = vec![true; n];
        for i in 0..n {
            for j in 0..n {
                if i == j || !keep[j] {
                    continue;
                }
                let (ti, ci) = &elems[i][0];
                let (tj, cj) = &elems[j][0];
                if ti.comp != tj.comp || !tj.mono.divides(&ti.mono) {
                    continue;
                }
                let coeff_ok = self.arith.is_field() || (int(ci) % int(cj)).is_zero();
                if !coeff_ok {
                    continue;
                }
                let same = ti == tj && (self.arith.is_field() || int(ci) == int(cj));
                if !same || j < i {
                    keep[i] = false;
                    break;
                }
            }
        }
        let minimal: Vec<ModVec> =
            elems.into_iter().zip(keep).filter_map(|(e, k)| k.then_some(e)).collect();
        let mut out: Vec<ModVec> = Vec::with_capacity(minimal.len());
        for (i, e) in minimal.iter().enumerate() {
            let others: Vec<&ModVec> =
                minimal.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, x)| x).collect();
            let index = build_index(&others);
            let lead = e[0].clone();
            let tail = self.reduce_with(e[1..].to_vec(), &others, &index);
            let mut v = vec![lead];
            v.extend(tail);
            out.push(self.normalize(v));
        }
        out.sort_by(|a, b| self.cmp_terms(&a[0].0, &b[0].0));
        out
    }
}

fn build_index(basis: &[&ModVec]) -> HashMap<usize, Vec<usize>> {
    let mut index: HashMap<usize, Vec<usize>> = HashMap::new();
    for (k, v) in basis.iter().enumerate() {
        index.entry(v[0].0.comp).or_default().push(k);
    }
    index
}
