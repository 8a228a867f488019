//! Finitely presented modules `coker(R^c → R^g)`, maps between them and
//! subquotients re-presented as cokernels.

use std::sync::{Arc, OnceLock};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::kernel::{Coeff, CoefficientDomain, LiftingBasis, Matrix, ModuleBasis, Monomial, Poly};
use crate::rings::{Ideal, RingPresentation};

pub(crate) fn unit_vector(ring: &RingPresentation, n: usize, i: usize) -> Vec<Poly> {
    let mut v = vec![Poly::zero(); n];
    v[i] = ring.one();
    v
}

/// `M = R^g / im(relations)`. Relation entries are kept in normal form
/// modulo the ring ideal; zero and repeated columns are dropped.
#[derive(Debug, Clone)]
pub struct FpModule {
    ring: Arc<RingPresentation>,
    ngens: usize,
    relations: Matrix,
    basis: ModuleBasis,
    lifting: OnceLock<std::result::Result<LiftingBasis, Error>>,
}

impl FpModule {
    pub fn new(ring: Arc<RingPresentation>, ngens: usize, relations: Matrix) -> Result<Self> {
        if relations.nrows() != ngens {
            return Err(Error::Invalid(format!(
                "relation matrix has {} rows but the module has {ngens} generators",
                relations.nrows()
            )));
        }
        let mut cols: Vec<Vec<Poly>> = Vec::new();
        for c in relations.into_columns() {
            let c: Vec<Poly> = c.iter().map(|p| ring.reduce(p)).collect();
            if c.iter().all(Poly::is_zero) || cols.contains(&c) {
                continue;
            }
            cols.push(c);
        }
        let basis = ModuleBasis::module(ring.ideal_basis(), ngens, &cols)?;
        Ok(FpModule { ring, ngens, relations: Matrix::from_columns(ngens, cols), basis, lifting: OnceLock::new() })
    }

    pub fn free(ring: Arc<RingPresentation>, n: usize) -> Result<Self> {
        Self::new(ring, n, Matrix::empty(n))
    }

    pub fn zero(ring: Arc<RingPresentation>) -> Result<Self> {
        Self::free(ring, 0)
    }

    /// `R/I` for an ideal given by generators.
    pub fn cyclic(ring: Arc<RingPresentation>, gens: &[Poly]) -> Result<Self> {
        let rel = Matrix::from_rows(vec![gens.to_vec()], gens.len());
        Self::new(ring, 1, rel)
    }

    pub fn quotient_ring(ideal: &Ideal) -> Result<Self> {
        Self::cyclic(ideal.ring().clone(), ideal.generators())
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ring
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn relations(&self) -> &Matrix {
        &self.relations
    }

    pub fn relation_basis(&self) -> &ModuleBasis {
        &self.basis
    }

    /// Normal form of a vector of `R^g` modulo the relations.
    pub fn reduce(&self, v: &[Poly]) -> Vec<Poly> {
        self.basis.reduce(v)
    }

    pub fn is_zero_element(&self, v: &[Poly]) -> bool {
        self.basis.contains(v)
    }

    pub fn elements_equal(&self, a: &[Poly], b: &[Poly]) -> bool {
        let p = self.ring.poly_ring();
        let d: Vec<Poly> = a.iter().zip(b).map(|(x, y)| p.sub(x, y)).collect();
        self.is_zero_element(&d)
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_everything()
    }

    pub fn same_ring(&self, other: &FpModule) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || self.ring.same_as(&other.ring)
    }

    fn lifting(&self) -> Result<&LiftingBasis> {
        self.lifting
            .get_or_init(|| LiftingBasis::new(self.ring.ideal_basis(), &self.relations))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Coefficients `s` with `relations·s ≡ v` modulo the ring ideal, when
    /// `v` is zero in the module.
    pub fn relation_lift(&self, v: &[Poly]) -> Result<Option<Vec<Poly>>> {
        Ok(self.lifting()?.lift(v))
    }

    pub fn direct_sum(mods: &[&FpModule]) -> Result<FpModule> {
        let ring = mods.first().map(|m| m.ring.clone()).ok_or_else(|| Error::Invalid("empty direct sum".into()))?;
        let mut rel = Matrix::empty(0);
        for m in mods {
            rel = rel.block_diagonal(&m.relations);
        }
        let n = rel.nrows();
        FpModule::new(ring, n, rel)
    }

    /// `M/IM` for an ideal given by generators.
    pub fn tensor_quotient(&self, gens: &[Poly]) -> Result<FpModule> {
        let mut rel = self.relations.clone();
        for a in gens {
            for j in 0..self.ngens {
                let mut c = vec![Poly::zero(); self.ngens];
                c[j] = a.clone();
                rel.push_column(c);
            }
        }
        FpModule::new(self.ring.clone(), self.ngens, rel)
    }

    /// `M/N` for a submodule generated by the given columns.
    pub fn quotient(&self, sub: &Matrix) -> Result<FpModule> {
        FpModule::new(self.ring.clone(), self.ngens, self.relations.hcat(sub))
    }

    /// Standard monomials per generator (with the coefficient range of each
    /// over `ℤ`). `None` when the module is not finite over the coefficients.
    fn standard_monomials(&self) -> Option<Vec<(usize, Monomial, Coeff)>> {
        let nvars = self.ring.poly_ring().nvars();
        let field = self.ring.domain().is_field();
        let leads = self.basis.leading_terms();
        let mut out = Vec::new();
        for comp in 0..self.ngens {
            let here: Vec<&(usize, Monomial, Coeff)> = leads.iter().filter(|l| l.0 == comp).collect();
            // bound for every variable from a pure power with unit coefficient
            let mut bounds = Vec::with_capacity(nvars);
            for i in 0..nvars {
                let b = here
                    .iter()
                    .filter(|l| (field || l.2.abs().is_one()) && l.1.exponents().iter().enumerate().all(|(k, &e)| k == i || e == 0))
                    .map(|l| l.1.exponents()[i])
                    .min()?;
                bounds.push(b);
            }
            let mut exps = vec![0u32; nvars];
            loop {
                let mono = Monomial::from_exponents(exps.clone());
                let divisors: Vec<&&(usize, Monomial, Coeff)> = here.iter().filter(|l| l.1.divides(&mono)).collect();
                if field {
                    if divisors.is_empty() {
                        out.push((comp, mono, Coeff::zero()));
                    }
                } else {
                    let d = divisors.iter().map(|l| l.2.abs()).min()?;
                    if !d.is_one() {
                        out.push((comp, mono, d));
                    }
                }
                // odometer over the box
                let mut k = 0;
                loop {
                    if k == nvars {
                        break;
                    }
                    exps[k] += 1;
                    if exps[k] < bounds[k] {
                        break;
                    }
                    exps[k] = 0;
                    k += 1;
                }
                if k == nvars {
                    break;
                }
            }
        }
        Some(out)
    }

    /// Dimension over the coefficient field, if finite.
    pub fn vector_space_dimension(&self) -> Option<usize> {
        if !self.ring.domain().is_field() {
            return None;
        }
        self.standard_monomials().map(|v| v.len())
    }

    /// Length as a module over the coefficients (over `ℤ`: total number of
    /// prime factors of the cyclic pieces), if finite.
    pub fn coefficient_length(&self) -> Option<usize> {
        let mons = self.standard_monomials()?;
        if self.ring.domain().is_field() {
            return Some(mons.len());
        }
        Some(mons.iter().map(|(_, _, d)| prime_factor_count(&d.to_integer())).sum())
    }

    /// Finite length over `R` follows from finite length over the
    /// coefficients.
    pub fn has_finite_length(&self) -> bool {
        self.coefficient_length().is_some()
    }

    pub fn describe(&self) -> String {
        let p = self.ring.poly_ring();
        let rels: Vec<String> = self
            .relations
            .columns()
            .iter()
            .map(|c| format!("[{}]", c.iter().map(|x| p.format(x)).collect::<Vec<_>>().join(", ")))
            .collect();
        format!("coker of {} relation(s) on {} generator(s): {}", rels.len(), self.ngens, rels.join(" "))
    }
}

fn prime_factor_count(n: &num_bigint::BigInt) -> usize {
    let mut n = n.abs();
    let mut count = 0;
    let mut d = num_bigint::BigInt::from(2);
    while &d * &d <= n {
        while (&n % &d).is_zero() {
            n /= &d;
            count += 1;
        }
        d += 1;
    }
    if n > num_bigint::BigInt::one() {
        count += 1;
    }
    count
}

/// A homomorphism given by the images of the source generators, columns in
/// normal form modulo the target relations.
#[derive(Debug, Clone)]
pub struct ModuleMap {
    source: Arc<FpModule>,
    target: Arc<FpModule>,
    matrix: Matrix,
}

impl ModuleMap {
    /// Verifies that relations map into relations.
    pub fn new(source: Arc<FpModule>, target: Arc<FpModule>, matrix: Matrix) -> Result<Self> {
        if matrix.nrows() != target.ngens() || matrix.ncols() != source.ngens() {
            return Err(Error::Invalid(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                target.ngens(),
                source.ngens()
            )));
        }
        if !source.same_ring(&target) {
            return Err(Error::Invalid("source and target live over different rings".into()));
        }
        let ring = source.ring().clone();
        let images = ring.mul_matrices(&matrix, source.relations());
        if let Some(j) = images.columns().iter().position(|c| !target.is_zero_element(c)) {
            return Err(Error::Invalid(format!("map is not well defined: relation {j} does not map to zero")));
        }
        let cols = matrix.columns().iter().map(|c| target.reduce(c)).collect();
        let matrix = Matrix::from_columns(target.ngens(), cols);
        Ok(ModuleMap { source, target, matrix })
    }

    pub fn identity(m: Arc<FpModule>) -> Result<Self> {
        let id = Matrix::identity(m.ring().poly_ring(), m.ngens());
        Self::new(m.clone(), m, id)
    }

    pub fn zero(source: Arc<FpModule>, target: Arc<FpModule>) -> Result<Self> {
        let z = Matrix::zero(target.ngens(), source.ngens());
        Self::new(source, target, z)
    }

    /// Multiplication by a ring element, `M → M`.
    pub fn scalar(m: Arc<FpModule>, c: &Poly) -> Result<Self> {
        let s = Matrix::scalar(m.ngens(), c);
        Self::new(m.clone(), m, s)
    }

    pub fn source(&self) -> &Arc<FpModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FpModule> {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        self.source.ring()
    }

    pub fn apply(&self, v: &[Poly]) -> Vec<Poly> {
        let w = self.matrix.apply(self.ring().poly_ring(), v);
        self.target.reduce(&w)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ModuleMap) -> Result<ModuleMap> {
        if first.target.ngens() != self.source.ngens() {
            return Err(Error::Invalid("maps are not composable".into()));
        }
        let m = self.ring().mul_matrices(&self.matrix, &first.matrix);
        ModuleMap::new(first.source.clone(), self.target.clone(), m)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Columns `L` with `matrix ≡ target_relations · L` modulo the ring
    /// ideal; exists exactly when the map is zero.
    pub fn zero_lift(&self) -> Result<Option<Matrix>> {
        let mut cols = Vec::new();
        for c in self.matrix.columns() {
            match self.target.relation_lift(c)? {
                Some(s) => cols.push(s),
                None => return Ok(None),
            }
        }
        Ok(Some(Matrix::from_columns(self.target.relations().ncols(), cols)))
    }

    pub fn equals(&self, other: &ModuleMap) -> bool {
        self.matrix == other.matrix
    }

    pub fn sub(&self, other: &ModuleMap) -> Result<ModuleMap> {
        let m = self.matrix.sub(self.ring().poly_ring(), &other.matrix);
        ModuleMap::new(self.source.clone(), self.target.clone(), m)
    }

    pub fn kernel(&self) -> Result<Subquotient> {
        let zero_in = Arc::new(FpModule::zero(self.ring().clone())?);
        let incoming = ModuleMap::zero(zero_in, self.source.clone())?;
        homology_at(&incoming, self)
    }

    pub fn image(&self) -> Result<Subquotient> {
        Subquotient::new(self.target.clone(), self.matrix.clone(), Matrix::empty(self.target.ngens()))
    }

    pub fn cokernel(&self) -> Result<FpModule> {
        self.target.quotient(&self.matrix)
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.kernel()?.module.is_zero())
    }

    pub fn is_surjective(&self) -> Result<bool> {
        let span = ModuleBasis::module(
            self.ring().ideal_basis(),
            self.target.ngens(),
            &self.matrix.hcat(self.target.relations()).into_columns(),
        )?;
        Ok(span.is_everything())
    }

    pub fn is_isomorphism(&self) -> Result<bool> {
        Ok(self.is_surjective()? && self.is_injective()?)
    }

    /// Preimage of a target vector, if it lies in the image.
    pub fn preimage(&self, v: &[Poly]) -> Result<Option<Vec<Poly>>> {
        let lb = LiftingBasis::new(self.ring().ideal_basis(), &self.matrix.hcat(self.target.relations()))?;
        Ok(lb.lift(v).map(|mut s| {
            s.truncate(self.source.ngens());
            self.source.reduce(&s)
        }))
    }

    /// Inverse of an isomorphism, verified to compose to the identity on
    /// both sides.
    pub fn inverse(&self) -> Result<Option<ModuleMap>> {
        if !self.is_isomorphism()? {
            return Ok(None);
        }
        let ring = self.ring().clone();
        let mut cols = Vec::new();
        for j in 0..self.target.ngens() {
            match self.preimage(&unit_vector(&ring, self.target.ngens(), j))? {
                Some(s) => cols.push(s),
                None => return Ok(None),
            }
        }
        let inv = ModuleMap::new(self.target.clone(), self.source.clone(), Matrix::from_columns(self.source.ngens(), cols))?;
        let cert = IsoCertificate::check(self, &inv)?;
        Ok(cert.map(|_| inv))
    }
}

/// Mutual maps `f: M → N`, `g: N → M` with `g∘f = id` and `f∘g = id`
/// modulo relations.
#[derive(Debug, Clone)]
pub struct IsoCertificate {
    pub forward: Matrix,
    pub backward: Matrix,
}

impl IsoCertificate {
    pub fn check(f: &ModuleMap, g: &ModuleMap) -> Result<Option<IsoCertificate>> {
        let gf = g.compose(f)?;
        let fg = f.compose(g)?;
        let id_m = ModuleMap::identity(f.source().clone())?;
        let id_n = ModuleMap::identity(f.target().clone())?;
        if gf.equals(&id_m) && fg.equals(&id_n) {
            Ok(Some(IsoCertificate { forward: f.matrix().clone(), backward: g.matrix().clone() }))
        } else {
            Ok(None)
        }
    }

    /// Re-verify from scratch against the two presentations.
    pub fn replay(&self, m: &Arc<FpModule>, n: &Arc<FpModule>) -> Result<bool> {
        let (Ok(f), Ok(g)) = (
            ModuleMap::new(m.clone(), n.clone(), self.forward.clone()),
            ModuleMap::new(n.clone(), m.clone(), self.backward.clone()),
        ) else {
            return Ok(false);
        };
        Ok(IsoCertificate::check(&f, &g)?.is_some())
    }
}

/// `(numerator + D)/D` inside an ambient module, where `D` is generated by
/// `denominator` together with the ambient relations, re-presented as a
/// cokernel whose generators are the columns of `representatives`.
#[derive(Debug, Clone)]
pub struct Subquotient {
    pub module: Arc<FpModule>,
    ambient: Arc<FpModule>,
    representatives: Matrix,
    denominator: Matrix,
    lifting: OnceLock<std::result::Result<LiftingBasis, Error>>,
}

impl Subquotient {
    pub fn new(ambient: Arc<FpModule>, numerator: Matrix, denominator: Matrix) -> Result<Self> {
        let ring = ambient.ring().clone();
        let g = ambient.ngens();
        let denom_full = denominator.hcat(ambient.relations());
        let denom_basis = ModuleBasis::module(ring.ideal_basis(), g, denom_full.columns())?;
        let mut reps: Vec<Vec<Poly>> = Vec::new();
        for c in numerator.columns() {
            let r = denom_basis.reduce(c);
            if r.iter().all(Poly::is_zero) || reps.contains(&r) {
                continue;
            }
            reps.push(r);
        }
        // generators ordered by their first nonzero coordinate
        reps.sort_by_cached_key(|r| {
            let i = r.iter().position(|x| !x.is_zero()).unwrap_or(g);
            (i, r[i].total_degree(), r[i].num_terms())
        });
        let k = reps.len();
        let reps = Matrix::from_columns(g, reps);
        let lb = LiftingBasis::new(ring.ideal_basis(), &reps.hcat(&denom_full))?;
        let rel: Vec<Vec<Poly>> = lb.syzygies().into_iter().map(|mut s| {
            s.truncate(k);
            s
        }).collect();
        let (keep, rel) = prune(&ring, k, Matrix::from_columns(k, rel));
        let reps = reps.select_columns(&keep);
        let module = Arc::new(FpModule::new(ring, keep.len(), rel)?);
        Ok(Subquotient { module, ambient, representatives: reps, denominator, lifting: OnceLock::new() })
    }

    pub fn ambient(&self) -> &Arc<FpModule> {
        &self.ambient
    }

    pub fn representatives(&self) -> &Matrix {
        &self.representatives
    }

    pub fn denominator(&self) -> &Matrix {
        &self.denominator
    }

    fn lifting(&self) -> Result<&LiftingBasis> {
        self.lifting
            .get_or_init(|| {
                let full = self.representatives.hcat(&self.denominator).hcat(self.ambient.relations());
                LiftingBasis::new(self.ambient.ring().ideal_basis(), &full)
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Coordinates of an ambient vector in terms of the generators, when the
    /// vector lies in numerator + denominator.
    pub fn coordinates(&self, v: &[Poly]) -> Result<Option<Vec<Poly>>> {
        let k = self.module.ngens();
        Ok(self.lifting()?.lift(v).map(|mut s| {
            s.truncate(k);
            self.module.reduce(&s)
        }))
    }

    /// The map on subquotients induced by an ambient matrix.
    pub fn induced_map(&self, target: &Subquotient, phi: &Matrix) -> Result<ModuleMap> {
        let ring = self.ambient.ring().clone();
        let images = ring.mul_matrices(phi, &self.representatives);
        let mut cols = Vec::with_capacity(images.ncols());
        for (j, c) in images.columns().iter().enumerate() {
            match target.coordinates(c)? {
                Some(s) => cols.push(s),
                None => {
                    return Err(Error::Invalid(format!(
                        "ambient map does not carry generator {j} into the target subquotient"
                    )))
                }
            }
        }
        ModuleMap::new(self.module.clone(), target.module.clone(), Matrix::from_columns(target.module.ngens(), cols))
    }

    /// Inclusion of a submodule (empty denominator) into its ambient module.
    pub fn inclusion(&self) -> Result<ModuleMap> {
        ModuleMap::new(self.module.clone(), self.ambient.clone(), self.representatives.clone())
    }

    pub fn direct_sum(parts: &[&Subquotient]) -> Result<Subquotient> {
        let ambients: Vec<&FpModule> = parts.iter().map(|p| p.ambient.as_ref()).collect();
        let ambient = Arc::new(FpModule::direct_sum(&ambients)?);
        let mut num = Matrix::empty(0);
        let mut den = Matrix::empty(0);
        for p in parts {
            num = num.block_diagonal(&p.representatives);
            den = den.block_diagonal(&p.denominator);
        }
        Subquotient::new(ambient, num, den)
    }
}

/// Eliminate generators that some relation expresses through the others
/// with a unit coefficient. Returns the surviving generator indices and the
/// relations among them.
fn prune(ring: &RingPresentation, k: usize, rel: Matrix) -> (Vec<usize>, Matrix) {
    let p = ring.poly_ring();
    let mut alive: Vec<usize> = (0..k).collect();
    let mut cols: Vec<Vec<Poly>> = rel.into_columns();
    loop {
        let pivot = cols.iter().enumerate().find_map(|(ci, c)| {
            c.iter().position(|x| unit_constant(ring, x).is_some()).map(|i| (ci, i))
        });
        let Some((ci, i)) = pivot else { break };
        let r = cols.remove(ci);
        let inv = unit_constant(ring, &r[i]).expect("pivot is a unit");
        let scaled: Vec<Poly> = r.iter().map(|x| p.scale(x, &inv)).collect();
        for c in cols.iter_mut() {
            if c[i].is_zero() {
                continue;
            }
            let f = c[i].clone();
            for (x, y) in c.iter_mut().zip(&scaled) {
                *x = ring.reduce(&p.sub(x, &p.mul(&f, y)));
            }
        }
        for c in cols.iter_mut() {
            c.remove(i);
        }
        alive.remove(i);
        cols.retain(|c| c.iter().any(|x| !x.is_zero()));
    }
    let n = alive.len();
    (alive, Matrix::from_columns(n, cols))
}

/// Inverse of `x` when `x` is a nonzero constant that is a unit of the
/// coefficient domain.
fn unit_constant(ring: &RingPresentation, x: &Poly) -> Option<Coeff> {
    if x.num_terms() != 1 {
        return None;
    }
    let c = x.constant_term()?;
    match ring.domain() {
        CoefficientDomain::Rationals => Some(c.recip()),
        CoefficientDomain::PrimeField(q) | CoefficientDomain::IntegersMod(q) => {
            let m = num_bigint::BigInt::from(*q);
            let e = c.to_integer().extended_gcd(&m);
            e.gcd.is_one().then(|| Coeff::from_integer(e.x.mod_floor(&m)))
        }
        CoefficientDomain::Integers => c.abs().is_one().then(|| c.clone()),
    }
}

/// `ker(g)/im(f)` for composable `f: A → B`, `g: B → C` with `g∘f = 0`.
pub fn homology_at(f: &ModuleMap, g: &ModuleMap) -> Result<Subquotient> {
    if f.target().ngens() != g.source().ngens() {
        return Err(Error::Invalid("maps are not composable".into()));
    }
    if !g.compose(f)?.is_zero() {
        return Err(Error::NotAComplex("composite of the two maps is nonzero".into()));
    }
    let b = g.source().clone();
    let ring = b.ring().clone();
    let nb = b.ngens();
    let kernel_gens = if g.target().ngens() == 0 {
        Matrix::identity(ring.poly_ring(), nb)
    } else {
        let stacked = g.matrix().hcat(g.target().relations());
        let lb = LiftingBasis::new(ring.ideal_basis(), &stacked)?;
        let cols = lb
            .syzygies()
            .into_iter()
            .map(|mut s| {
                s.truncate(nb);
                s
            })
            .collect();
        Matrix::from_columns(nb, cols)
    };
    Subquotient::new(b, kernel_gens, f.matrix().clone())
}

/// `(N :_M f)/N`, the kernel of multiplication by `f` on `M/N`.
pub fn colon(m: &FpModule, n: &Matrix, f: &Poly) -> Result<Subquotient> {
    let q = Arc::new(m.quotient(n)?);
    ModuleMap::scalar(q, f)?.kernel()
}

/// Exactness of `0 → A → B → C → 0`.
pub fn is_short_exact(f: &ModuleMap, g: &ModuleMap) -> Result<bool> {
    Ok(f.is_injective()? && g.is_surjective()? && homology_at(f, g)?.module.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qx() -> Arc<RingPresentation> {
        Arc::new(RingPresentation::parse("QQ", &["x"], &[]).unwrap())
    }

    #[test]
    fn zero_module_tests() {
        let r = qx();
        let id = Matrix::identity(r.poly_ring(), 2);
        assert!(FpModule::new(r.clone(), 2, id).unwrap().is_zero());
        let m = FpModule::cyclic(r.clone(), &[r.element("x^3").unwrap()]).unwrap();
        assert!(!m.is_zero());
        assert_eq!(m.vector_space_dimension(), Some(3));
        let m = Arc::new(m);
        let x3 = ModuleMap::scalar(m.clone(), &r.element("x^3").unwrap()).unwrap();
        assert!(x3.is_zero());
    }

    #[test]
    fn koszul_on_x_cubed() {
        let r = qx();
        let m = Arc::new(FpModule::cyclic(r.clone(), &[r.element("x^3").unwrap()]).unwrap());
        let h1 = ModuleMap::scalar(m.clone(), &r.element("x").unwrap()).unwrap().kernel().unwrap();
        // 0 :_M x = (x^2)/(x^3), one-dimensional
        assert_eq!(h1.module.vector_space_dimension(), Some(1));
        let c = colon(&m, &Matrix::empty(1), &r.element("x^2").unwrap()).unwrap();
        // 0 :_M x^2 = (x)/(x^3), two-dimensional
        assert_eq!(c.module.vector_space_dimension(), Some(2));
        let free = FpModule::free(r.clone(), 1).unwrap();
        let c = colon(&free, &Matrix::empty(1), &r.element("x").unwrap()).unwrap();
        assert!(c.module.is_zero());
        let c = colon(&free, &Matrix::empty(1), &r.element("5").unwrap()).unwrap();
        assert!(c.module.is_zero());
    }

    #[test]
    fn homology_of_zero_maps_is_the_module() {
        let r = qx();
        let m = Arc::new(FpModule::cyclic(r.clone(), &[r.element("x^2").unwrap()]).unwrap());
        let z = ModuleMap::zero(m.clone(), m.clone()).unwrap();
        let h = homology_at(&z, &z).unwrap();
        let f = h.inclusion().unwrap();
        let inv = f.inverse().unwrap().expect("isomorphic");
        assert!(IsoCertificate::check(&f, &inv).unwrap().is_some());
    }

    #[test]
    fn not_a_complex() {
        let r = qx();
        let m = Arc::new(FpModule::free(r.clone(), 1).unwrap());
        let x = ModuleMap::scalar(m.clone(), &r.element("x").unwrap()).unwrap();
        assert!(matches!(homology_at(&x, &x), Err(Error::NotAComplex(_))));
    }

    #[test]
    fn tensor_quotients() {
        let r = Arc::new(RingPresentation::parse("QQ", &["x", "y"], &[]).unwrap());
        let m = FpModule::free(r.clone(), 1).unwrap();
        let q = m.tensor_quotient(&[r.element("x").unwrap(), r.element("y").unwrap()]).unwrap();
        assert_eq!(q.vector_space_dimension(), Some(1));
        let m2 = FpModule::free(r.clone(), 2).unwrap().tensor_quotient(&[r.element("x").unwrap()]).unwrap();
        assert_eq!(m2.relations().ncols(), 2);
        assert_eq!(m2.vector_space_dimension(), None);
    }

    #[test]
    fn integer_lengths() {
        let z = Arc::new(RingPresentation::parse("ZZ", &[], &[]).unwrap());
        let m = FpModule::cyclic(z.clone(), &[z.element("12").unwrap()]).unwrap();
        assert_eq!(m.coefficient_length(), Some(3));
        assert!(FpModule::free(z, 1).unwrap().coefficient_length().is_none());
    }

    #[test]
    fn split_sequence_is_exact() {
        let r = qx();
        let a = Arc::new(FpModule::cyclic(r.clone(), &[r.element("x").unwrap()]).unwrap());
        let c = Arc::new(FpModule::cyclic(r.clone(), &[r.element("x^2").unwrap()]).unwrap());
        let b = Arc::new(FpModule::direct_sum(&[&a, &c]).unwrap());
        let p = r.poly_ring();
        let inc = ModuleMap::new(a.clone(), b.clone(), Matrix::from_rows(vec![vec![p.one()], vec![Poly::zero()]], 1)).unwrap();
        let proj = ModuleMap::new(b.clone(), c.clone(), Matrix::from_rows(vec![vec![Poly::zero(), p.one()]], 2)).unwrap();
        assert!(is_short_exact(&inc, &proj).unwrap());
        assert!(homology_at(&inc, &proj).unwrap().module.is_zero());
    }
}
