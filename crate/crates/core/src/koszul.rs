//! Koszul complexes `K(x₁ⁿ,…,x_rⁿ; M)`, their homology and cohomology,
//! and the comparison maps between exponents.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fpmod::{homology_at, FpModule, ModuleMap, Subquotient};
use crate::kernel::{Matrix, Poly};
use crate::rings::RingPresentation;
use crate::towers::{DirectTower, InverseTower};

/// An ordered sequence `x₁,…,x_r` of ring elements, `r ≥ 1`.
#[derive(Debug, Clone)]
pub struct SequenceSpec {
    ring: Arc<RingPresentation>,
    elements: Vec<Poly>,
}

impl SequenceSpec {
    pub fn new(ring: Arc<RingPresentation>, elements: Vec<Poly>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Invalid("a sequence needs at least one element".into()));
        }
        let elements = elements.iter().map(|p| ring.reduce(p)).collect();
        Ok(SequenceSpec { ring, elements })
    }

    pub fn parse(ring: Arc<RingPresentation>, elements: &[&str]) -> Result<Self> {
        let els = elements.iter().map(|s| ring.element(s)).collect::<Result<Vec<_>>>()?;
        Self::new(ring, els)
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ring
    }

    pub fn elements(&self) -> &[Poly] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `x₁,…,x_i`, `1 ≤ i ≤ r`.
    pub fn prefix(&self, i: usize) -> Result<SequenceSpec> {
        if i == 0 || i > self.len() {
            return Err(Error::DegreeOutOfRange { degree: i, max: self.len() });
        }
        Ok(SequenceSpec { ring: self.ring.clone(), elements: self.elements[..i].to_vec() })
    }

    /// `x_{σ(1)},…,x_{σ(r)}`.
    pub fn permuted(&self, sigma: &[usize]) -> Result<SequenceSpec> {
        let mut seen = vec![false; self.len()];
        for &s in sigma {
            if s >= self.len() || std::mem::replace(&mut seen[s], true) {
                return Err(Error::Invalid(format!("{sigma:?} is not a permutation of 0..{}", self.len())));
            }
        }
        if sigma.len() != self.len() {
            return Err(Error::Invalid(format!("{sigma:?} is not a permutation of 0..{}", self.len())));
        }
        Ok(SequenceSpec { ring: self.ring.clone(), elements: sigma.iter().map(|&s| self.elements[s].clone()).collect() })
    }

    /// `x₁ⁿ,…,x_rⁿ`.
    pub fn powers(&self, n: u32) -> Vec<Poly> {
        self.elements.iter().map(|x| self.ring.pow(x, n)).collect()
    }

    pub fn format(&self) -> String {
        self.elements.iter().map(|x| self.ring.format(x)).collect::<Vec<_>>().join(", ")
    }
}

/// `k`-element subsets of `0..r` in lexicographic order.
pub fn subsets(r: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, r: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..r {
            cur.push(i);
            go(i + 1, r, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= r {
        go(0, r, k, &mut Vec::new(), &mut out);
    }
    out
}

fn subset_index(basis: &[Vec<usize>], s: &[usize]) -> usize {
    basis.binary_search_by(|b| b.as_slice().cmp(s)).expect("subset present in the exterior basis")
}

/// Block matrix with a `g × g` scalar block `c` at each listed position.
fn block_matrix(g: usize, rows: usize, cols: usize, entries: &[(usize, usize, Poly)]) -> Matrix {
    let mut m = Matrix::zero(rows * g, cols * g);
    for (i, j, c) in entries {
        for t in 0..g {
            m.set(i * g + t, j * g + t, c.clone());
        }
    }
    m
}

/// `K(x̲^{(n)}; M)` with chain modules `C_k = M^{binom(r,k)}` on the
/// lexicographic exterior basis.
#[derive(Debug, Clone)]
pub struct KoszulLevel {
    sequence: SequenceSpec,
    exponent: u32,
    module: Arc<FpModule>,
    chain: Vec<Arc<FpModule>>,
    /// `differentials[k-1]: C_k → C_{k-1}`.
    differentials: Vec<ModuleMap>,
    /// `codifferentials[k]: C^k → C^{k+1}`.
    codifferentials: Vec<ModuleMap>,
}

impl KoszulLevel {
    /// Builds the complex and verifies `d ∘ d = 0`.
    pub fn new(sequence: &SequenceSpec, exponent: u32, module: Arc<FpModule>) -> Result<Self> {
        if !(Arc::ptr_eq(module.ring(), sequence.ring()) || module.ring().same_as(sequence.ring())) {
            return Err(Error::Invalid("sequence and module live over different rings".into()));
        }
        let ring = sequence.ring().clone();
        let r = sequence.len();
        let g = module.ngens();
        let pw = sequence.powers(exponent);
        let chain: Vec<Arc<FpModule>> = (0..=r)
            .map(|k| {
                let copies = vec![module.as_ref(); subsets(r, k).len()];
                if copies.is_empty() {
                    FpModule::zero(ring.clone()).map(Arc::new)
                } else {
                    FpModule::direct_sum(&copies).map(Arc::new)
                }
            })
            .collect::<Result<_>>()?;
        let p = ring.poly_ring();
        let mut differentials = Vec::with_capacity(r);
        for k in 1..=r {
            let src = subsets(r, k);
            let dst = subsets(r, k - 1);
            let mut entries = Vec::new();
            for (j, s) in src.iter().enumerate() {
                for (pos, &x) in s.iter().enumerate() {
                    let mut t = s.clone();
                    t.remove(pos);
                    let c = if pos % 2 == 0 { pw[x].clone() } else { p.neg(&pw[x]) };
                    entries.push((subset_index(&dst, &t), j, c));
                }
            }
            let m = block_matrix(g, dst.len(), src.len(), &entries);
            differentials.push(ModuleMap::new(chain[k].clone(), chain[k - 1].clone(), m)?);
        }
        let mut codifferentials = Vec::with_capacity(r);
        for k in 0..r {
            let src = subsets(r, k);
            let dst = subsets(r, k + 1);
            let mut entries = Vec::new();
            for (j, s) in src.iter().enumerate() {
                for x in (0..r).filter(|x| !s.contains(x)) {
                    let before = s.iter().filter(|&&y| y < x).count();
                    let mut t = s.clone();
                    t.push(x);
                    t.sort_unstable();
                    let c = if before % 2 == 0 { pw[x].clone() } else { p.neg(&pw[x]) };
                    entries.push((subset_index(&dst, &t), j, c));
                }
            }
            let m = block_matrix(g, dst.len(), src.len(), &entries);
            codifferentials.push(ModuleMap::new(chain[k].clone(), chain[k + 1].clone(), m)?);
        }
        let level = KoszulLevel { sequence: sequence.clone(), exponent, module, chain, differentials, codifferentials };
        level.verify_complex()?;
        Ok(level)
    }

    fn verify_complex(&self) -> Result<()> {
        for pair in self.differentials.windows(2) {
            if !pair[0].compose(&pair[1])?.is_zero() {
                return Err(Error::NotAComplex("d ∘ d ≠ 0".into()));
            }
        }
        for pair in self.codifferentials.windows(2) {
            if !pair[1].compose(&pair[0])?.is_zero() {
                return Err(Error::NotAComplex("δ ∘ δ ≠ 0".into()));
            }
        }
        Ok(())
    }

    pub fn sequence(&self) -> &SequenceSpec {
        &self.sequence
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn module(&self) -> &Arc<FpModule> {
        &self.module
    }

    pub fn length(&self) -> usize {
        self.sequence.len()
    }

    pub fn chain_module(&self, k: usize) -> &Arc<FpModule> {
        &self.chain[k]
    }

    /// `d_k: C_k → C_{k-1}`, `1 ≤ k ≤ r`.
    pub fn differential(&self, k: usize) -> &ModuleMap {
        &self.differentials[k - 1]
    }

    /// `δ^k: C^k → C^{k+1}`, `0 ≤ k < r`.
    pub fn codifferential(&self, k: usize) -> &ModuleMap {
        &self.codifferentials[k]
    }

    fn zero_into(&self, k: usize) -> Result<ModuleMap> {
        let z = Arc::new(FpModule::zero(self.sequence.ring().clone())?);
        ModuleMap::zero(z, self.chain[k].clone())
    }

    fn zero_out_of(&self, k: usize) -> Result<ModuleMap> {
        let z = Arc::new(FpModule::zero(self.sequence.ring().clone())?);
        ModuleMap::zero(self.chain[k].clone(), z)
    }

    /// `H_i` as a subquotient of `C_i`.
    pub fn homology(&self, i: usize) -> Result<Subquotient> {
        let r = self.length();
        if i > r {
            return Err(Error::DegreeOutOfRange { degree: i, max: r });
        }
        let incoming = if i == r { self.zero_into(r)? } else { self.differential(i + 1).clone() };
        let outgoing = if i == 0 { self.zero_out_of(0)? } else { self.differential(i).clone() };
        homology_at(&incoming, &outgoing)
    }

    /// `H^i` as a subquotient of `C^i`.
    pub fn cohomology(&self, i: usize) -> Result<Subquotient> {
        let r = self.length();
        if i > r {
            return Err(Error::DegreeOutOfRange { degree: i, max: r });
        }
        let incoming = if i == 0 { self.zero_into(0)? } else { self.codifferential(i - 1).clone() };
        let outgoing = if i == r { self.zero_out_of(r)? } else { self.codifferential(i).clone() };
        homology_at(&incoming, &outgoing)
    }
}

/// Chain map `C_k(x̲^{(m)}) → C_k(x̲^{(n)})`, `e_S ↦ x_S^{m−n} e_S`. The same
/// matrix gives the cochain map `C^k(x̲^{(n)}) → C^k(x̲^{(m)})`.
pub fn comparison_matrix(sequence: &SequenceSpec, k: usize, m: u32, n: u32, g: usize) -> Result<Matrix> {
    if m < n {
        return Err(Error::BadLevels { source_level: m as usize, target_level: n as usize });
    }
    let ring = sequence.ring();
    let p = ring.poly_ring();
    let basis = subsets(sequence.len(), k);
    let entries: Vec<(usize, usize, Poly)> = basis
        .iter()
        .enumerate()
        .map(|(j, s)| {
            let factors: Vec<Poly> = s.iter().map(|&x| ring.pow(&sequence.elements()[x], m - n)).collect();
            (j, j, ring.reduce(&p.product(&factors)))
        })
        .collect();
    Ok(block_matrix(g, basis.len(), basis.len(), &entries))
}

/// `H_i(x̲^{(n)}; M)`.
pub fn koszul_homology(i: usize, sequence: &SequenceSpec, n: u32, module: &Arc<FpModule>) -> Result<Subquotient> {
    if i > sequence.len() {
        return Err(Error::DegreeOutOfRange { degree: i, max: sequence.len() });
    }
    KoszulLevel::new(sequence, n, module.clone())?.homology(i)
}

/// `H^i(x̲^{(n)}; M)`.
pub fn koszul_cohomology(i: usize, sequence: &SequenceSpec, n: u32, module: &Arc<FpModule>) -> Result<Subquotient> {
    if i > sequence.len() {
        return Err(Error::DegreeOutOfRange { degree: i, max: sequence.len() });
    }
    KoszulLevel::new(sequence, n, module.clone())?.cohomology(i)
}

/// `H_i(x̲^{(m)}; M) → H_i(x̲^{(n)}; M)` between already computed homology
/// modules.
pub fn transition_between(
    i: usize,
    sequence: &SequenceSpec,
    m: u32,
    n: u32,
    source: &Subquotient,
    target: &Subquotient,
    module: &FpModule,
) -> Result<ModuleMap> {
    let phi = comparison_matrix(sequence, i, m, n, module.ngens())?;
    source.induced_map(target, &phi)
}

/// `H_i(x̲^{(m)}; M) → H_i(x̲^{(n)}; M)`, `m ≥ n ≥ 1`.
pub fn koszul_transition(i: usize, m: u32, n: u32, sequence: &SequenceSpec, module: &Arc<FpModule>) -> Result<ModuleMap> {
    if m < n || n == 0 {
        return Err(Error::BadLevels { source_level: m as usize, target_level: n as usize });
    }
    let src = koszul_homology(i, sequence, m, module)?;
    let dst = koszul_homology(i, sequence, n, module)?;
    transition_between(i, sequence, m, n, &src, &dst, module)
}

/// `{H_i(x̲^{(n)}; M)}_{n ≤ W}` with the comparison maps.
pub fn koszul_tower(i: usize, sequence: &SequenceSpec, module: &Arc<FpModule>, window: usize) -> Result<InverseTower> {
    if i > sequence.len() {
        return Err(Error::DegreeOutOfRange { degree: i, max: sequence.len() });
    }
    let homs: Vec<Subquotient> = {
        use rayon::prelude::*;
        (1..=window)
            .into_par_iter()
            .map(|n| koszul_homology(i, sequence, n as u32, module))
            .collect::<Result<_>>()?
    };
    let label = format!("H_{i}(({})^n; M)", sequence.format());
    InverseTower::from_rule(
        label,
        window,
        vec![],
        |n| Ok(homs[n - 1].module.clone()),
        |n, _, _| Ok(transition_between(i, sequence, n as u32 + 1, n as u32, &homs[n], &homs[n - 1], module)?.matrix().clone()),
    )
}

/// `{H^i(x̲^{(n)}; M)}_{n ≤ W}` with `e_S ↦ x_S^{m−n} e_S`.
pub fn koszul_cotower(i: usize, sequence: &SequenceSpec, module: &Arc<FpModule>, window: usize) -> Result<DirectTower> {
    if i > sequence.len() {
        return Err(Error::DegreeOutOfRange { degree: i, max: sequence.len() });
    }
    let cohs: Vec<Subquotient> = {
        use rayon::prelude::*;
        (1..=window)
            .into_par_iter()
            .map(|n| koszul_cohomology(i, sequence, n as u32, module))
            .collect::<Result<_>>()?
    };
    let label = format!("H^{i}(({})^n; M)", sequence.format());
    DirectTower::from_rule(
        label,
        window,
        |n| Ok(cohs[n - 1].module.clone()),
        |n, _, _| {
            let phi = comparison_matrix(sequence, i, n as u32 + 1, n as u32, module.ngens())?;
            Ok(cohs[n - 1].induced_map(&cohs[n], &phi)?.matrix().clone())
        },
    )
}

/// `Γ_{x̲}(M)`: the union of `0 :_M (x₁ⁿ,…,x_rⁿ)`. Each `0 :_M x_iⁿ`
/// stabilizes at some `s_i`; the union is then `0 :_M (x₁^s,…,x_r^s)` with
/// `s = max s_i`. Returns the torsion submodule and the least exponent at
/// which the joint annihilator reaches it.
#[derive(Debug, Clone)]
pub struct GammaTorsion {
    pub torsion: Subquotient,
    pub stabilization: u32,
}

pub fn gamma_torsion(sequence: &SequenceSpec, module: &Arc<FpModule>) -> Result<Option<GammaTorsion>> {
    let ring = sequence.ring();
    let cap = ring.degree_cap();
    let mut s_max = 0u32;
    for x in sequence.elements() {
        let mut prev = crate::fpmod::colon(module, &Matrix::empty(module.ngens()), &ring.one())?;
        let mut stable = None;
        for s in 1..=cap {
            let cur = crate::fpmod::colon(module, &Matrix::empty(module.ngens()), &ring.pow(x, s))?;
            if same_submodule(&prev, &cur)? {
                stable = Some(s - 1);
                break;
            }
            prev = cur;
        }
        match stable {
            Some(s) => s_max = s_max.max(s),
            None => return Ok(None),
        }
    }
    let joint = |n: u32| -> Result<Subquotient> { KoszulLevel::new(sequence, n, module.clone())?.cohomology(0) };
    let top = joint(s_max)?;
    for n in 0..=s_max {
        let cand = joint(n)?;
        if same_submodule(&cand, &top)? {
            return Ok(Some(GammaTorsion { torsion: cand, stabilization: n }));
        }
    }
    unreachable!("the joint annihilator at the maximal exponent equals itself")
}

/// Equality of two submodules of `M` given as subquotients with empty
/// denominators.
pub(crate) fn same_submodule(a: &Subquotient, b: &Subquotient) -> Result<bool> {
    let contains = |x: &Subquotient, y: &Subquotient| -> Result<bool> {
        for c in y.representatives().columns() {
            if x.coordinates(c)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    };
    Ok(contains(a, b)? && contains(b, a)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(vars: &[&str], rels: &[&str]) -> Arc<RingPresentation> {
        Arc::new(RingPresentation::parse("QQ", vars, rels).unwrap())
    }

    #[test]
    fn exterior_basis_order() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(2, 0), vec![Vec::<usize>::new()]);
        assert!(subsets(2, 3).is_empty());
    }

    #[test]
    fn regular_pair_has_no_higher_homology() {
        let r = ring(&["x", "y"], &[]);
        let m = Arc::new(FpModule::free(r.clone(), 1).unwrap());
        let seq = SequenceSpec::parse(r, &["x", "y"]).unwrap();
        for n in 1..=3 {
            let k = KoszulLevel::new(&seq, n, m.clone()).unwrap();
            assert!(k.homology(1).unwrap().module.is_zero());
            assert!(k.homology(2).unwrap().module.is_zero());
            assert_eq!(k.homology(0).unwrap().module.vector_space_dimension(), Some((n * n) as usize));
        }
    }

    #[test]
    fn transitions_on_nilpotent_module() {
        let r = ring(&["x"], &[]);
        let m = Arc::new(FpModule::cyclic(r.clone(), &[r.element("x^3").unwrap()]).unwrap());
        let seq = SequenceSpec::parse(r.clone(), &["x"]).unwrap();
        assert!(!koszul_transition(1, 3, 1, &seq, &m).unwrap().is_zero());
        assert!(koszul_transition(1, 4, 1, &seq, &m).unwrap().is_zero());
        assert!(matches!(koszul_transition(1, 1, 2, &seq, &m), Err(Error::BadLevels { .. })));
        assert!(matches!(koszul_homology(2, &seq, 1, &m), Err(Error::DegreeOutOfRange { .. })));
    }

    #[test]
    fn torsion_of_monomial_fixtures() {
        let r = ring(&["x", "y"], &[]);
        let m = Arc::new(FpModule::cyclic(r.clone(), &[r.element("x*y").unwrap()]).unwrap());
        let seq = SequenceSpec::parse(r.clone(), &["x"]).unwrap();
        let g = gamma_torsion(&seq, &m).unwrap().unwrap();
        assert_eq!(g.stabilization, 1);
        let y = vec![r.element("y").unwrap()];
        assert!(g.torsion.coordinates(&y).unwrap().is_some());
        assert!(g.torsion.coordinates(&[r.one()]).unwrap().is_none());
        let q = ring(&["x"], &[]);
        let m = Arc::new(FpModule::cyclic(q.clone(), &[q.element("x^3").unwrap()]).unwrap());
        let seq = SequenceSpec::parse(q.clone(), &["x"]).unwrap();
        let g = gamma_torsion(&seq, &m).unwrap().unwrap();
        assert_eq!(g.stabilization, 3);
        assert_eq!(g.torsion.module.vector_space_dimension(), Some(3));
        let free = Arc::new(FpModule::free(q, 1).unwrap());
        let g = gamma_torsion(&seq, &free).unwrap().unwrap();
        assert!(g.torsion.module.is_zero());
        assert_eq!(g.stabilization, 0);
    }
}
