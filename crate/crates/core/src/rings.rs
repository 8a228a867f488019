//! Rings `R = coefficients[vars]/J`, ideals, powers and localization.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::{CoefficientDomain, Matrix, ModuleBasis, MonomialOrder, Poly, PolyRing, DEFAULT_DEGREE_CAP};

/// A finitely presented algebra over one of the supported coefficient
/// domains, with a reduced Gröbner basis of its defining ideal.
#[derive(Debug, Clone)]
pub struct RingPresentation {
    poly: PolyRing,
    generators: Vec<Poly>,
    basis: ModuleBasis,
    degree_cap: u32,
}

impl RingPresentation {
    pub fn new(poly: PolyRing, generators: Vec<Poly>) -> Result<Self> {
        Self::with_cap(poly, generators, DEFAULT_DEGREE_CAP)
    }

    pub fn with_cap(poly: PolyRing, generators: Vec<Poly>, degree_cap: u32) -> Result<Self> {
        let basis = ModuleBasis::ideal(&poly, &generators, degree_cap)?;
        Ok(RingPresentation { poly, generators, basis, degree_cap })
    }

    /// Convenience constructor from strings, e.g. `("QQ", &["a", "b"], &["a^2 + b^2 - 1"])`.
    pub fn parse(domain: &str, vars: &[&str], relations: &[&str]) -> Result<Self> {
        let domain: CoefficientDomain = domain.parse()?;
        let poly = PolyRing::new(domain, vars.iter().map(|s| s.to_string()).collect(), MonomialOrder::Grevlex)?;
        let gens = relations.iter().map(|s| poly.parse(s)).collect::<Result<Vec<_>>>()?;
        Self::new(poly, gens)
    }

    pub fn poly_ring(&self) -> &PolyRing {
        &self.poly
    }

    pub fn domain(&self) -> &CoefficientDomain {
        &self.poly.domain
    }

    pub fn relations(&self) -> &[Poly] {
        &self.generators
    }

    pub fn ideal_basis(&self) -> &ModuleBasis {
        &self.basis
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    /// Same ring with a different degree cap.
    pub fn with_degree_cap(&self, cap: u32) -> Result<Self> {
        Self::with_cap(self.poly.clone(), self.generators.clone(), cap)
    }

    pub fn element(&self, s: &str) -> Result<Poly> {
        Ok(self.reduce(&self.poly.parse(s)?))
    }

    pub fn reduce(&self, p: &Poly) -> Poly {
        self.basis.reduce_poly(p)
    }

    pub fn is_zero(&self, p: &Poly) -> bool {
        self.basis.contains(std::slice::from_ref(p))
    }

    pub fn equal(&self, a: &Poly, b: &Poly) -> bool {
        self.is_zero(&self.poly.sub(a, b))
    }

    pub fn is_zero_ring(&self) -> bool {
        self.is_zero(&self.poly.one())
    }

    pub fn one(&self) -> Poly {
        self.reduce(&self.poly.one())
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&self.poly.add(a, b))
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&self.poly.sub(a, b))
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(&self.poly.mul(a, b))
    }

    pub fn pow(&self, a: &Poly, e: u32) -> Poly {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn format(&self, p: &Poly) -> String {
        self.poly.format(p)
    }

    /// Entrywise normal form.
    pub fn reduce_matrix(&self, m: &Matrix) -> Matrix {
        m.map(|p| self.reduce(p))
    }

    pub fn mul_matrices(&self, a: &Matrix, b: &Matrix) -> Matrix {
        self.reduce_matrix(&a.mul(&self.poly, b))
    }

    pub fn matrices_equal(&self, a: &Matrix, b: &Matrix) -> bool {
        a.nrows() == b.nrows()
            && a.ncols() == b.ncols()
            && a.columns().iter().flatten().zip(b.columns().iter().flatten()).all(|(x, y)| self.equal(x, y))
    }

    /// `u ∈ R` is a unit.
    pub fn is_unit(&self, u: &Poly) -> Result<bool> {
        Ok(Ideal::new(Arc::new(self.clone()), vec![u.clone()])?.is_unit_ideal())
    }

    /// Presentations are identical: same polynomial ring and the same ideal.
    pub fn same_as(&self, other: &RingPresentation) -> bool {
        self.poly == other.poly && self.basis.generators() == other.basis.generators()
    }

    /// `R_f = R[t]/(J, t·f − 1)` with a fresh variable `t`.
    pub fn localize(&self, f: &Poly) -> Result<Localization> {
        if self.is_zero(f) {
            return Err(Error::ZeroLocalization);
        }
        let name = fresh_name(&self.poly.variables, "t");
        let mut vars = self.poly.variables.clone();
        vars.push(name);
        let target = PolyRing::new(self.poly.domain.clone(), vars, self.poly.order)?;
        let t = target.var(target.nvars() - 1);
        let mut gens: Vec<Poly> = self.generators.iter().map(|g| self.poly.embed_into(g, &target)).collect();
        let fe = self.poly.embed_into(f, &target);
        gens.push(target.sub(&target.mul(&t, &fe), &target.one()));
        let ring = RingPresentation::with_cap(target, gens, self.degree_cap)?;
        Ok(Localization { source: self.clone(), element: f.clone(), ring: Arc::new(ring) })
    }

    /// `1 ∈ (f₁,…,f_r)R`; the empty list covers only the zero ring.
    pub fn is_covering_sequence(&self, fs: &[Poly]) -> Result<bool> {
        Ok(Ideal::new(Arc::new(self.clone()), fs.to_vec())?.is_unit_ideal())
    }
}

impl fmt::Display for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.poly.domain, self.poly.variables.join(","))?;
        if !self.generators.is_empty() {
            let rels: Vec<String> = self.generators.iter().map(|g| self.poly.format(g)).collect();
            write!(f, "/({})", rels.join(", "))?;
        }
        Ok(())
    }
}

fn fresh_name(existing: &[String], base: &str) -> String {
    if !existing.iter().any(|v| v == base) {
        return base.to_string();
    }
    (1..).map(|i| format!("{base}{i}")).find(|c| !existing.contains(c)).expect("unbounded")
}

/// `R → R_f` together with the presentation of `R_f`.
#[derive(Debug, Clone)]
pub struct Localization {
    pub source: RingPresentation,
    pub element: Poly,
    pub ring: Arc<RingPresentation>,
}

impl Localization {
    /// Image of an element of `R` in `R_f`.
    pub fn map(&self, p: &Poly) -> Poly {
        self.ring.reduce(&self.source.poly_ring().embed_into(p, self.ring.poly_ring()))
    }

    pub fn map_matrix(&self, m: &Matrix) -> Matrix {
        m.map(|p| self.map(p))
    }

    /// The inverse `1/f` as the adjoined variable.
    pub fn inverse(&self) -> Poly {
        let r = self.ring.poly_ring();
        r.var(r.nvars() - 1)
    }
}

/// An ideal of a presented ring, generators kept in normal form.
#[derive(Debug, Clone)]
pub struct Ideal {
    ring: Arc<RingPresentation>,
    generators: Vec<Poly>,
    basis: ModuleBasis,
}

impl Ideal {
    pub fn new(ring: Arc<RingPresentation>, generators: Vec<Poly>) -> Result<Self> {
        let generators: Vec<Poly> =
            generators.iter().map(|g| ring.reduce(g)).filter(|g| !g.is_zero()).collect();
        let mut all = generators.clone();
        all.extend(ring.ideal_basis().generators().into_iter().map(|mut v| v.remove(0)));
        let basis = ModuleBasis::ideal(ring.poly_ring(), &all, ring.degree_cap())?;
        Ok(Ideal { ring, generators, basis })
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    /// Gröbner basis of the preimage of the ideal in the polynomial ring.
    pub fn basis(&self) -> &ModuleBasis {
        &self.basis
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.basis.contains(std::slice::from_ref(p))
    }

    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        other.generators.iter().all(|g| self.contains(g))
    }

    pub fn equals(&self, other: &Ideal) -> bool {
        self.contains_ideal(other) && other.contains_ideal(self)
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.contains(&self.ring.poly_ring().one())
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        let mut gens = Vec::new();
        for a in &self.generators {
            for b in &other.generators {
                gens.push(self.ring.mul(a, b));
            }
        }
        Ideal::new(self.ring.clone(), gens)
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Ideal::new(self.ring.clone(), gens)
    }

    /// `Iⁿ`, generated by all `n`-fold products of the generators.
    pub fn power(&self, n: u32) -> Result<Ideal> {
        if n == 0 {
            return Ideal::new(self.ring.clone(), vec![self.ring.one()]);
        }
        let mut gens: Vec<Poly> = vec![self.ring.one()];
        for _ in 0..n {
            let mut seen = std::collections::HashSet::new();
            let mut next = Vec::new();
            for h in &gens {
                for g in &self.generators {
                    let p = self.ring.mul(h, g);
                    if seen.insert(p.clone()) {
                        next.push(p);
                    }
                }
            }
            gens = next;
        }
        Ideal::new(self.ring.clone(), gens)
    }

    /// Image of the ideal in a localization of its ring.
    pub fn localize(&self, loc: &Localization) -> Result<Ideal> {
        Ideal::new(loc.ring.clone(), self.generators.iter().map(|g| loc.map(g)).collect())
    }

    pub fn format(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(|g| self.ring.format(g)).collect();
        format!("({})", gens.join(", "))
    }
}

/// `Iⁿ` as a free-standing operation.
pub fn ideal_power(ideal: &Ideal, n: u32) -> Result<Ideal> {
    ideal.power(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> Arc<RingPresentation> {
        Arc::new(RingPresentation::parse("QQ", &["a", "b"], &["a^2 + b^2 - 1"]).unwrap())
    }

    #[test]
    fn localization_adds_an_inverse() {
        let r = RingPresentation::parse("QQ", &["x"], &[]).unwrap();
        let x = r.element("x").unwrap();
        let loc = r.localize(&x).unwrap();
        let prod = loc.ring.mul(&loc.map(&x), &loc.inverse());
        assert!(loc.ring.equal(&prod, &loc.ring.one()));
        assert_eq!(loc.ring.to_string(), "QQ[x,t]/(x*t - 1)");
        assert!(matches!(r.localize(&r.element("0").unwrap()), Err(Error::ZeroLocalization)));
        let two = r.localize(&r.element("2").unwrap()).unwrap();
        assert!(!two.ring.is_zero_ring());
    }

    #[test]
    fn covering_sequences() {
        let z = RingPresentation::parse("ZZ", &[], &[]).unwrap();
        let (two, three) = (z.element("2").unwrap(), z.element("3").unwrap());
        assert!(z.is_covering_sequence(&[two.clone(), three]).unwrap());
        assert!(!z.is_covering_sequence(&[two]).unwrap());
        let q = RingPresentation::parse("QQ", &["x"], &[]).unwrap();
        assert!(!q.is_covering_sequence(&[q.element("x").unwrap()]).unwrap());
        assert!(!q.is_covering_sequence(&[]).unwrap());
        let c = circle();
        assert!(c.is_covering_sequence(&[c.element("1 + a").unwrap(), c.element("1 - a").unwrap()]).unwrap());
    }

    #[test]
    fn powers() {
        let r = Arc::new(RingPresentation::parse("QQ", &["x", "y"], &[]).unwrap());
        let m = Ideal::new(r.clone(), vec![r.element("x").unwrap(), r.element("y").unwrap()]).unwrap();
        let sq = m.power(2).unwrap();
        let expected =
            Ideal::new(r.clone(), ["x^2", "x*y", "y^2"].iter().map(|s| r.element(s).unwrap()).collect()).unwrap();
        assert!(sq.equals(&expected));
        assert_eq!(sq.generators().len(), 3);
        let c = circle();
        let i = Ideal::new(c.clone(), vec![c.element("1 - a").unwrap(), c.element("b").unwrap()]).unwrap();
        let i2 = i.power(2).unwrap();
        for s in ["(1 - a)^2", "b*(1 - a)", "b^2"] {
            assert!(i2.contains(&c.element(s).unwrap()));
        }
        // b^2 + (1 - a)^2 = (1 - a)(1 + a) + (1 - a)^2 = 2(1 - a) on the circle
        assert!(i2.contains(&c.element("1 - a").unwrap()));
        assert!(!i2.contains(&c.element("b").unwrap()));
    }
}
