use num_traits::Zero;

use super::domain::{Coeff, CoefficientDomain};
use super::groebner::{Engine, ModVec, Term};
use super::matrix::Matrix;
use super::monomial::Monomial;
use super::poly::{Poly, PolyRing};
use super::smith::smith_normal_form;
use crate::error::Result;

pub const DEFAULT_DEGREE_CAP: u32 = 24;

pub(crate) fn engine(ring: &PolyRing, cap: u32) -> Engine {
    Engine { order: ring.order, arith: ring.domain.arith(), cap }
}

pub(crate) fn to_modvec(engine: &Engine, v: &[Poly], offset: usize) -> ModVec {
    let mut out: ModVec = v
        .iter()
        .enumerate()
        .flat_map(|(i, p)| {
            p.terms().map(move |(m, c)| (Term { comp: i + offset, mono: m.clone() }, c.clone()))
        })
        .collect();
    engine.sort(&mut out);
    out
}

pub(crate) fn from_modvec(ring: &PolyRing, v: &ModVec, offset: usize, rank: usize) -> Vec<Poly> {
    let mut out = vec![Poly::zero(); rank];
    for (t, c) in v {
        if t.comp >= offset && t.comp < offset + rank {
            let p = ring.monomial(t.mono.clone(), c.clone());
            out[t.comp - offset] = ring.add(&out[t.comp - offset], &p);
        }
    }
    out
}

fn shifted_ideal(ideal: &ModuleBasis, comp: usize) -> impl Iterator<Item = ModVec> + '_ {
    ideal.elems.iter().map(move |v| {
        v.iter().map(|(t, c)| (Term { comp, mono: t.mono.clone() }, c.clone())).collect()
    })
}

/// Gröbner basis of a submodule of `R^rank`, `R = P/J`, with `J` folded in.
/// Decides membership and computes canonical normal forms.
#[derive(Debug, Clone)]
pub struct ModuleBasis {
    ring: PolyRing,
    engine: Engine,
    rank: usize,
    elems: Vec<ModVec>,
}

impl ModuleBasis {
    /// Basis of the ideal generated by `gens` in the polynomial ring itself;
    /// over `ℤ/m` the modulus is adjoined.
    pub fn ideal(ring: &PolyRing, gens: &[Poly], cap: u32) -> Result<Self> {
        let engine = engine(ring, cap);
        let mut vs: Vec<ModVec> = gens.iter().map(|g| to_modvec(&engine, std::slice::from_ref(g), 0)).collect();
        if let Some(m) = ring.domain.implicit_modulus() {
            vs.push(vec![(Term { comp: 0, mono: Monomial::one(ring.nvars()) }, Coeff::from_integer(m.into()))]);
        }
        let elems = engine.groebner(vs)?;
        Ok(ModuleBasis { ring: ring.clone(), engine, rank: 1, elems })
    }

    /// Basis of the submodule of `(P/J)^rank` generated by `gens`, where
    /// `ideal` is the basis of `J`.
    pub fn module(ideal: &ModuleBasis, rank: usize, gens: &[Vec<Poly>]) -> Result<Self> {
        let engine = ideal.engine.clone();
        let mut vs: Vec<ModVec> = gens.iter().map(|g| to_modvec(&engine, g, 0)).collect();
        for i in 0..rank {
            vs.extend(shifted_ideal(ideal, i));
        }
        let elems = engine.groebner(vs)?;
        Ok(ModuleBasis { ring: ideal.ring.clone(), engine, rank, elems })
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cap(&self) -> u32 {
        self.engine.cap
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn reduce(&self, v: &[Poly]) -> Vec<Poly> {
        let r = self.engine.reduce(to_modvec(&self.engine, v, 0), &self.elems);
        from_modvec(&self.ring, &r, 0, self.rank)
    }

    pub fn reduce_poly(&self, p: &Poly) -> Poly {
        self.reduce(std::slice::from_ref(p)).pop().expect("rank one")
    }

    pub fn contains(&self, v: &[Poly]) -> bool {
        self.engine.reduce(to_modvec(&self.engine, v, 0), &self.elems).is_empty()
    }

    /// True when the submodule is all of `R^rank`.
    pub fn is_everything(&self) -> bool {
        (0..self.rank).all(|i| {
            let mut e = vec![Poly::zero(); self.rank];
            e[i] = self.ring.one();
            self.contains(&e)
        })
    }

    /// Basis elements as vectors over the ring's own coefficient domain;
    /// elements that vanish there (the modulus over `ℤ/m`) are dropped.
    pub fn generators(&self) -> Vec<Vec<Poly>> {
        self.elems
            .iter()
            .map(|v| from_modvec(&self.ring, v, 0, self.rank))
            .filter(|v| v.iter().any(|p| !p.is_zero()))
            .collect()
    }

    /// Leading monomials with their component, used for standard-monomial
    /// counting.
    pub(crate) fn leading_terms(&self) -> Vec<(usize, Monomial, Coeff)> {
        self.elems.iter().map(|v| (v[0].0.comp, v[0].0.mono.clone(), v[0].1.clone())).collect()
    }
}

/// Gröbner basis of the graph `{(Σ s_j a_j, s)}` for columns `a_j` of a
/// matrix over `P/J`: yields lifts through the matrix and its syzygies.
#[derive(Debug, Clone)]
pub struct LiftingBasis {
    ring: PolyRing,
    engine: Engine,
    ideal: ModuleBasis,
    rank: usize,
    ncols: usize,
    elems: Vec<ModVec>,
}

impl LiftingBasis {
    pub fn new(ideal: &ModuleBasis, a: &Matrix) -> Result<Self> {
        let engine = ideal.engine.clone();
        let g = a.nrows();
        let c = a.ncols();
        let mut vs: Vec<ModVec> = Vec::new();
        let one = ideal.ring.one();
        for (j, col) in a.columns().iter().enumerate() {
            let mut v = to_modvec(&engine, col, 0);
            v.extend(to_modvec(&engine, std::slice::from_ref(&one), g + j));
            engine.sort(&mut v);
            vs.push(v);
        }
        for i in 0..g + c {
            vs.extend(shifted_ideal(ideal, i));
        }
        let elems = engine.groebner(vs)?;
        Ok(LiftingBasis { ring: ideal.ring.clone(), engine, ideal: ideal.clone(), rank: g, ncols: c, elems })
    }

    /// Coefficients `s` with `a·s ≡ v` modulo `J`, if any exist.
    pub fn lift(&self, v: &[Poly]) -> Option<Vec<Poly>> {
        let r = self.engine.reduce(to_modvec(&self.engine, v, 0), &self.elems);
        if r.iter().any(|(t, _)| t.comp < self.rank) {
            return None;
        }
        let s = from_modvec(&self.ring, &r, self.rank, self.ncols);
        Some(s.iter().map(|p| self.ring.neg(p)).collect())
    }

    pub fn contains(&self, v: &[Poly]) -> bool {
        let r = self.engine.reduce(to_modvec(&self.engine, v, 0), &self.elems);
        r.iter().all(|(t, _)| t.comp >= self.rank)
    }

    /// Generators of the syzygy module of the columns, modulo `J`.
    pub fn syzygies(&self) -> Vec<Vec<Poly>> {
        self.elems
            .iter()
            .filter(|v| v[0].0.comp >= self.rank)
            .map(|v| {
                let s = from_modvec(&self.ring, v, self.rank, self.ncols);
                s.iter().map(|p| self.ideal.reduce_poly(p)).collect::<Vec<_>>()
            })
            .filter(|s| s.iter().any(|p| !p.is_zero()))
            .collect()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }
}

/// Reduced Gröbner basis (strong over `ℤ` and `ℤ/m`) of the ideal generated
/// by `gens`, as polynomials over the ring's coefficient domain.
pub fn groebner_basis(ring: &PolyRing, gens: &[Poly]) -> Result<Vec<Poly>> {
    groebner_basis_with_cap(ring, gens, DEFAULT_DEGREE_CAP)
}

pub fn groebner_basis_with_cap(ring: &PolyRing, gens: &[Poly], cap: u32) -> Result<Vec<Poly>> {
    Ok(ModuleBasis::ideal(ring, gens, cap)?.generators().into_iter().map(|mut v| v.remove(0)).collect())
}

/// Columns generating `{v : A·v ≡ 0 mod J}`. Over plain `ℤ` without
/// variables the kernel is read off the Smith normal form.
pub fn syzygy_matrix(ideal: &ModuleBasis, a: &Matrix) -> Result<Matrix> {
    let ring = ideal.ring();
    if ring.domain == CoefficientDomain::Integers && ring.nvars() == 0 && ideal.generators().is_empty() {
        return Ok(integer_kernel(ring, a));
    }
    let lb = LiftingBasis::new(ideal, a)?;
    Ok(Matrix::from_columns(a.ncols(), lb.syzygies()))
}

fn integer_kernel(ring: &PolyRing, a: &Matrix) -> Matrix {
    let rows: Vec<Vec<num_bigint::BigInt>> = (0..a.nrows())
        .map(|i| {
            (0..a.ncols())
                .map(|j| a.entry(i, j).constant_term().map(|c| c.to_integer()).unwrap_or_default())
                .collect()
        })
        .collect();
    let snf = smith_normal_form(&rows, a.ncols());
    let rank = (0..a.nrows().min(a.ncols())).take_while(|&k| !snf.d[k][k].is_zero()).count();
    let columns = (rank..a.ncols())
        .map(|j| (0..a.ncols()).map(|i| ring.constant(Coeff::from_integer(snf.v[i][j].clone()))).collect())
        .collect();
    Matrix::from_columns(a.ncols(), columns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::monomial::MonomialOrder;

    fn ring(dom: CoefficientDomain, vars: &[&str], order: MonomialOrder) -> PolyRing {
        PolyRing::new(dom, vars.iter().map(|s| s.to_string()).collect(), order).unwrap()
    }

    fn polys(r: &PolyRing, s: &[&str]) -> Vec<Poly> {
        s.iter().map(|x| r.parse(x).unwrap()).collect()
    }

    fn fmt(r: &PolyRing, ps: &[Poly]) -> Vec<String> {
        ps.iter().map(|p| r.format(p)).collect()
    }

    #[test]
    fn two_monomials_are_already_a_basis() {
        let r = ring(CoefficientDomain::Rationals, &["x", "y"], MonomialOrder::Lex);
        let g = groebner_basis(&r, &polys(&r, &["x^2", "x*y"])).unwrap();
        let mut got = fmt(&r, &g);
        got.sort();
        assert_eq!(got, vec!["x*y", "x^2"]);
    }

    #[test]
    fn unit_ideal() {
        let r = ring(CoefficientDomain::Rationals, &["x"], MonomialOrder::Grevlex);
        let g = groebner_basis(&r, &polys(&r, &["x", "x - 1"])).unwrap();
        assert_eq!(fmt(&r, &g), vec!["1"]);
    }

    #[test]
    fn twisted_cubic_elimination() {
        // z > y > x in lex: y - x^2 and z - x^3 are already a reduced basis
        // (coprime leading monomials y and z).
        let r = ring(CoefficientDomain::Rationals, &["z", "y", "x"], MonomialOrder::Lex);
        let g = groebner_basis(&r, &polys(&r, &["y - x^2", "z - x^3"])).unwrap();
        let mut got = fmt(&r, &g);
        got.sort();
        assert_eq!(got, vec!["y - x^2", "z - x^3"]);
        let ideal = ModuleBasis::ideal(&r, &g, 24).unwrap();
        assert!(ideal.contains(&[r.parse("z*y - x^5").unwrap()]));
        assert!(!ideal.contains(&[r.parse("z - x").unwrap()]));
    }

    #[test]
    fn strong_basis_over_integers() {
        let r = ring(CoefficientDomain::Integers, &["x", "y"], MonomialOrder::Grevlex);
        let ideal = ModuleBasis::ideal(&r, &polys(&r, &["2*x", "3*y"]), 24).unwrap();
        // x*y = 2x*(-y) + 3y*(x) lies in the ideal; x does not.
        assert!(ideal.contains(&[r.parse("x*y").unwrap()]));
        assert!(!ideal.contains(&[r.parse("x").unwrap()]));
        let z = ring(CoefficientDomain::Integers, &[], MonomialOrder::Grevlex);
        let g = groebner_basis(&z, &polys(&z, &["4", "6"])).unwrap();
        assert_eq!(fmt(&z, &g), vec!["2"]);
    }

    #[test]
    fn integers_mod_four() {
        let r = ring(CoefficientDomain::IntegersMod(4), &["u"], MonomialOrder::Grevlex);
        let ideal = ModuleBasis::ideal(&r, &polys(&r, &["u - 2", "u^2"]), 24).unwrap();
        // u^2 ≡ 4 ≡ 0, so (u - 2, u^2) = (u - 2) and 2 is not a member
        assert!(!ideal.contains(&[r.int(2)]));
        let ideal = ModuleBasis::ideal(&r, &polys(&r, &["u - 2", "u^2 - 2"]), 24).unwrap();
        assert!(ideal.contains(&[r.int(2)]));
    }

    #[test]
    fn syzygies_of_koszul_pair() {
        let r = ring(CoefficientDomain::Rationals, &["x", "y"], MonomialOrder::Grevlex);
        let ideal = ModuleBasis::ideal(&r, &[], 24).unwrap();
        for row in [["x", "y"], ["x^2", "x*y"]] {
            let a = Matrix::from_rows(vec![polys(&r, &row)], 2);
            let s = syzygy_matrix(&ideal, &a).unwrap();
            assert_eq!(s.ncols(), 1);
            assert!(a.mul(&r, &s).is_zero());
            let col = s.column(0);
            let expected = polys(&r, &["y", "-x"]);
            let neg: Vec<Poly> = expected.iter().map(|p| r.neg(p)).collect();
            assert!(col == expected.as_slice() || col == neg.as_slice());
        }
        let id = Matrix::identity(&r, 3);
        assert_eq!(syzygy_matrix(&ideal, &id).unwrap().ncols(), 0);
    }

    #[test]
    fn lifting_through_a_matrix_modulo_the_ring_ideal() {
        let r = ring(CoefficientDomain::Rationals, &["x"], MonomialOrder::Grevlex);
        let ideal = ModuleBasis::ideal(&r, &polys(&r, &["x^3"]), 24).unwrap();
        let a = Matrix::from_rows(vec![polys(&r, &["x"])], 1);
        let lb = LiftingBasis::new(&ideal, &a).unwrap();
        let s = lb.lift(&polys(&r, &["x^2 + 2*x"])).unwrap();
        assert_eq!(fmt(&r, &s), vec!["x + 2"]);
        assert!(lb.lift(&polys(&r, &["1"])).is_none());
        // x·x^2 = 0 in Q[x]/(x^3)
        assert_eq!(fmt(&r, &lb.syzygies()[0]), vec!["x^2"]);
    }

    #[test]
    fn integer_kernel_via_smith_form() {
        let z = ring(CoefficientDomain::Integers, &[], MonomialOrder::Grevlex);
        let ideal = ModuleBasis::ideal(&z, &[], 24).unwrap();
        let a = Matrix::from_rows(vec![polys(&z, &["4", "6"])], 2);
        let k = syzygy_matrix(&ideal, &a).unwrap();
        assert_eq!(k.ncols(), 1);
        assert!(a.mul(&z, &k).is_zero());
        // generator must be ±(3, -2)
        let c: Vec<String> = fmt(&z, k.column(0));
        assert!(c == vec!["3", "-2"] || c == vec!["-3", "2"]);
    }

    #[test]
    fn reduced_basis_is_idempotent() {
        let r = ring(CoefficientDomain::PrimeField(7), &["x", "y", "z"], MonomialOrder::Grevlex);
        let g = groebner_basis(&r, &polys(&r, &["x^2 + y*z", "x*y - z^2", "y^3 + x"])).unwrap();
        assert_eq!(groebner_basis(&r, &g).unwrap(), g);
    }
}
