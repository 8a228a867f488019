//! Effective Cartier divisors given by charts `(f_i, x_i)`, pro-regular
//! pairs `(ℐ, x)`, the chart-by-chart torsion audit and the prism membership
//! condition `p ∈ ℐ + φ(ℐ)R`.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fpmod::{FpModule, Subquotient};
use crate::kernel::{syzygy_matrix, LiftingBasis, Matrix, Poly};
use crate::koszul::{comparison_matrix, gamma_torsion, koszul_homology, SequenceSpec};
use crate::regularity::{index_text, is_bounded_torsion, BoundedVerdict, FaceStatus};
use crate::rings::{Ideal, Localization, RingPresentation};
use crate::towers::{is_pro_zero, Certificate, InverseTower, Verdict};

/// Coefficients `c` with `Σ c_j g_j ≡ target` in `ring`.
pub fn combination(ring: &RingPresentation, gens: &[Poly], target: &Poly) -> Result<Option<Vec<Poly>>> {
    let row = Matrix::from_columns(1, gens.iter().map(|g| vec![g.clone()]).collect());
    let lb = LiftingBasis::new(ring.ideal_basis(), &row)?;
    Ok(lb.lift(std::slice::from_ref(target)).map(|c| c.iter().map(|p| ring.reduce(p)).collect()))
}

/// `Σ c_j g_j ≡ target` in `ring`.
pub fn check_combination(ring: &RingPresentation, gens: &[Poly], coefficients: &[Poly], target: &Poly) -> bool {
    if gens.len() != coefficients.len() {
        return false;
    }
    let sum = gens.iter().zip(coefficients).fold(Poly::zero(), |acc, (g, c)| ring.add(&acc, &ring.mul(g, c)));
    ring.equal(&sum, target)
}

#[derive(Debug, Clone)]
pub struct Chart {
    pub f: Poly,
    pub x: Poly,
}

/// Evidence for one chart, all in the presentation `R[t]/(J, t·f − 1)`.
#[derive(Debug, Clone)]
pub struct ChartEvidence {
    pub index: usize,
    pub localization: Localization,
    /// `g_j/1 = a_j · x/1` for each generator `g_j` of `ℐ`.
    pub ideal_over_x: Option<Vec<Poly>>,
    /// `x/1 = Σ c_j g_j/1`.
    pub x_over_ideal: Option<Vec<Poly>>,
    pub nonzerodivisor: bool,
}

impl ChartEvidence {
    pub fn holds(&self) -> bool {
        self.ideal_over_x.is_some() && self.x_over_ideal.is_some() && self.nonzerodivisor
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CartierCheck {
    Covering,
    IdealEquality,
    Nonzerodivisor,
    Containment,
}

impl CartierCheck {
    pub fn name(&self) -> &'static str {
        match self {
            CartierCheck::Covering => "covering",
            CartierCheck::IdealEquality => "ideal equality",
            CartierCheck::Nonzerodivisor => "nonzerodivisor",
            CartierCheck::Containment => "containment in (x_1,...,x_r)",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CartierReport {
    pub verified: bool,
    /// `1 = Σ c_i f_i`.
    pub covering: Option<Vec<Poly>>,
    pub charts: Vec<ChartEvidence>,
    /// Row `j`: `g_j = Σ d_ji x_i` in `R`.
    pub containment: Option<Vec<Vec<Poly>>>,
    pub failing_chart: Option<usize>,
    pub failing_check: Option<CartierCheck>,
}

fn chart_evidence(index: usize, ideal: &Ideal, chart: &Chart) -> Result<ChartEvidence> {
    let loc = ideal.ring().localize(&chart.f)?;
    let lring = loc.ring.clone();
    let x = loc.map(&chart.x);
    let gens: Vec<Poly> = ideal.generators().iter().map(|g| loc.map(g)).collect();
    let mut over_x = Some(Vec::with_capacity(gens.len()));
    for g in &gens {
        match combination(&lring, std::slice::from_ref(&x), g)? {
            Some(c) => over_x.as_mut().expect("set above").push(c[0].clone()),
            None => {
                over_x = None;
                break;
            }
        }
    }
    let x_over_ideal = combination(&lring, &gens, &x)?;
    let syz = syzygy_matrix(lring.ideal_basis(), &Matrix::from_columns(1, vec![vec![x]]))?;
    let nonzerodivisor = syz.columns().iter().flatten().all(|p| lring.is_zero(p));
    Ok(ChartEvidence { index, localization: loc, ideal_over_x: over_x, x_over_ideal, nonzerodivisor })
}

/// Runs the covering, chart-equality and nonzerodivisor checks, then the
/// containment `ℐ ⊆ (x_1,…,x_r)R`.
pub fn verify_cartier(ideal: &Ideal, charts: &[Chart]) -> Result<CartierReport> {
    let ring = ideal.ring();
    let fs: Vec<Poly> = charts.iter().map(|c| c.f.clone()).collect();
    let covering = combination(ring, &fs, &ring.one())?;
    let evidence: Vec<ChartEvidence> =
        charts.par_iter().enumerate().map(|(i, c)| chart_evidence(i, ideal, c)).collect::<Result<_>>()?;
    let xs: Vec<Poly> = charts.iter().map(|c| c.x.clone()).collect();
    let mut containment = Some(Vec::new());
    for g in ideal.generators() {
        match combination(ring, &xs, g)? {
            Some(d) => containment.as_mut().expect("set above").push(d),
            None => {
                containment = None;
                break;
            }
        }
    }
    let mut failing_chart = None;
    let mut failing_check = None;
    if covering.is_none() {
        failing_check = Some(CartierCheck::Covering);
    } else if let Some(e) = evidence.iter().find(|e| !e.holds()) {
        failing_chart = Some(e.index);
        failing_check =
            Some(if e.nonzerodivisor { CartierCheck::IdealEquality } else { CartierCheck::Nonzerodivisor });
    } else if containment.is_none() {
        failing_check = Some(CartierCheck::Containment);
    }
    Ok(CartierReport { verified: failing_check.is_none(), covering, charts: evidence, containment, failing_chart, failing_check })
}

/// A verified effective Cartier divisor.
#[derive(Debug, Clone)]
pub struct CartierDivisor {
    ideal: Ideal,
    charts: Vec<Chart>,
    report: CartierReport,
}

impl CartierDivisor {
    pub fn new(ideal: Ideal, charts: Vec<Chart>) -> Result<Self> {
        let report = verify_cartier(&ideal, &charts)?;
        if !report.verified {
            let check = report.failing_check.map(|c| c.name()).unwrap_or("unknown");
            return Err(Error::NotCartier(match report.failing_chart {
                Some(i) => format!("chart {} fails the {check} check", i + 1),
                None => format!("the {check} check fails"),
            }));
        }
        Ok(CartierDivisor { ideal, charts, report })
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        self.ideal.ring()
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn report(&self) -> &CartierReport {
        &self.report
    }

    /// `ℐⁿR_{f_i} = x_iⁿR_{f_i}` for `n = 1..=window`, per chart.
    pub fn chart_power_consistency(&self, window: usize) -> Result<Vec<Vec<bool>>> {
        self.report
            .charts
            .par_iter()
            .map(|e| {
                let loc = &e.localization;
                let x = loc.map(&self.charts[e.index].x);
                (1..=window as u32)
                    .map(|n| {
                        let lhs = self.ideal.power(n)?.localize(loc)?;
                        let rhs = Ideal::new(loc.ring.clone(), vec![loc.ring.pow(&x, n)])?;
                        Ok(lhs.equals(&rhs))
                    })
                    .collect()
            })
            .collect()
    }
}

/// `{H_1(xⁿ; R/ℐⁿ)}` with transitions `×x` composed with the projections.
pub fn pro_regular_pair_tower(ideal: &Ideal, x: &Poly, window: usize) -> Result<InverseTower> {
    let ring = ideal.ring().clone();
    let seq = SequenceSpec::new(ring.clone(), vec![x.clone()])?;
    let levels: Vec<Subquotient> = (1..=window as u32)
        .into_par_iter()
        .map(|n| {
            let quotient = Arc::new(FpModule::quotient_ring(&ideal.power(n)?)?);
            koszul_homology(1, &seq, n, &quotient)
        })
        .collect::<Result<_>>()?;
    let phi = comparison_matrix(&seq, 1, 2, 1, 1)?;
    InverseTower::new(
        format!("H_1({}^n; R/I^n)", ring.format(x)),
        levels.iter().map(|l| l.module.clone()).collect(),
        (1..window).map(|n| Ok(levels[n].induced_map(&levels[n - 1], &phi)?.matrix().clone())).collect::<Result<_>>()?,
        vec![],
    )
}

pub fn is_pro_regular_pair(ideal: &Ideal, x: &Poly, window: usize) -> Result<Certificate> {
    is_pro_zero(&pro_regular_pair_tower(ideal, x, window)?)
}

/// `M → ⊕ M_{f_i}` is injective: `Γ_{f_i}(M) = 0 :_M f_i^{s_i}` and
/// `1 ∈ (f_1^{s_1},…,f_r^{s_r})`, so anything dying in every chart is zero.
#[derive(Debug, Clone)]
pub struct InjectivityWitness {
    pub level: usize,
    pub exponents: Vec<u32>,
    pub combination: Vec<Poly>,
}

impl InjectivityWitness {
    pub fn check(&self, ring: &RingPresentation, fs: &[Poly]) -> bool {
        let powers: Vec<Poly> = fs.iter().zip(&self.exponents).map(|(f, &s)| ring.pow(f, s)).collect();
        check_combination(ring, &powers, &self.combination, &ring.one())
    }
}

fn injectivity_witness(module: &Arc<FpModule>, fs: &[Poly], level: usize) -> Result<Option<InjectivityWitness>> {
    let ring = module.ring();
    let mut exponents = Vec::with_capacity(fs.len());
    for f in fs {
        let seq = SequenceSpec::new(ring.clone(), vec![f.clone()])?;
        match gamma_torsion(&seq, module)? {
            Some(g) => exponents.push(g.stabilization),
            None => return Ok(None),
        }
    }
    let powers: Vec<Poly> = fs.iter().zip(&exponents).map(|(f, &s)| ring.pow(f, s)).collect();
    Ok(combination(ring, &powers, &ring.one())?.map(|combination| InjectivityWitness { level, exponents, combination }))
}

#[derive(Debug, Clone)]
pub struct ChartAuditFace {
    pub name: String,
    pub positive: Option<bool>,
    pub details: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct ChartAuditReport {
    pub status: FaceStatus,
    pub faces: Vec<ChartAuditFace>,
    /// Levels `n = 1..=window`: `R/ℐⁿ → ⊕ (R/ℐⁿ)_{f_i}` is injective.
    pub injectivity: Vec<InjectivityWitness>,
    pub pair_certificate: Option<Certificate>,
    pub diagnostics: Vec<String>,
}

impl ChartAuditReport {
    pub fn all_agree(&self) -> bool {
        self.status == FaceStatus::Agree
    }

    pub fn verdict(&self) -> Option<bool> {
        match self.status {
            FaceStatus::Agree => self.faces[0].positive,
            _ => None,
        }
    }
}

/// Compares bounded `x`-torsion of `R/ℐ`, bounded `x/1`-torsion of every
/// `R_{f_i}/x_iR_{f_i}` and pro-regularity of the pair `(ℐ, x)`.
pub fn chart_audit(divisor: &CartierDivisor, x: &Poly, window: usize) -> Result<ChartAuditReport> {
    let ring = divisor.ring().clone();
    let ideal = divisor.ideal();
    let mut faces = Vec::new();
    let mut diagnostics = Vec::new();

    let quotient = Arc::new(FpModule::quotient_ring(ideal)?);
    faces.push(match is_bounded_torsion(&quotient, x, window) {
        Ok(b) => ChartAuditFace {
            name: "bounded x-torsion of R/I".into(),
            positive: Some(b.verdict == BoundedVerdict::Bounded),
            details: vec![format!("{} (index {})", b.verdict.name(), index_text(b.index))],
        },
        Err(e) => ChartAuditFace { name: "bounded x-torsion of R/I".into(), positive: None, details: vec![e.to_string()] },
    });

    let chart_results: Vec<Result<(bool, String)>> = divisor
        .report
        .charts
        .par_iter()
        .map(|e| {
            let loc = &e.localization;
            let xi = loc.map(&divisor.charts[e.index].x);
            let m = Arc::new(FpModule::cyclic(loc.ring.clone(), &[xi])?);
            let b = is_bounded_torsion(&m, &loc.map(x), window)?;
            Ok((b.verdict == BoundedVerdict::Bounded, format!("chart {}: {} (index {})", e.index + 1, b.verdict.name(), index_text(b.index))))
        })
        .collect();
    let mut chart_face = ChartAuditFace { name: "bounded x/1-torsion on every chart".into(), positive: Some(true), details: vec![] };
    for r in chart_results {
        match r {
            Ok((pos, d)) => {
                chart_face.details.push(d);
                if !pos {
                    chart_face.positive = chart_face.positive.map(|_| false);
                }
            }
            Err(e) => {
                chart_face.details.push(e.to_string());
                chart_face.positive = None;
            }
        }
    }
    faces.push(chart_face);

    let pair_certificate = match is_pro_regular_pair(ideal, x, window) {
        Ok(c) => {
            faces.push(ChartAuditFace {
                name: "pro-regular pair (I, x)".into(),
                positive: Some(c.verdict == Verdict::ProZero),
                details: vec![c.verdict.name().to_string()],
            });
            Some(c)
        }
        Err(e) => {
            faces.push(ChartAuditFace { name: "pro-regular pair (I, x)".into(), positive: None, details: vec![e.to_string()] });
            None
        }
    };

    let fs: Vec<Poly> = divisor.charts.iter().map(|c| c.f.clone()).collect();
    let injectivity: Vec<Option<InjectivityWitness>> = (1..=window)
        .into_par_iter()
        .map(|n| {
            let m = Arc::new(FpModule::quotient_ring(&ideal.power(n as u32)?)?);
            injectivity_witness(&m, &fs, n)
        })
        .collect::<Result<_>>()?;
    let mut witnesses = Vec::new();
    for (n, w) in (1..).zip(injectivity) {
        match w {
            Some(w) if w.check(&ring, &fs) => witnesses.push(w),
            _ => diagnostics.push(format!("level {n}: injectivity into the charts not certified")),
        }
    }

    let verdicts: Vec<Option<bool>> = faces.iter().map(|f| f.positive).collect();
    let status = if verdicts.iter().any(Option::is_none) || witnesses.len() < window {
        FaceStatus::Partial
    } else if verdicts.windows(2).all(|w| w[0] == w[1]) {
        FaceStatus::Agree
    } else {
        FaceStatus::Disagree
    };
    Ok(ChartAuditReport { status, faces, injectivity: witnesses, pair_certificate, diagnostics })
}

/// A ring with an ideal, a prime `p` and images of the variables under a
/// lift `φ` of Frobenius.
#[derive(Debug, Clone)]
pub struct PrismData {
    ideal: Ideal,
    p: u64,
    frobenius: Vec<Poly>,
}

impl PrismData {
    /// Verifies that `φ` respects the relations and that `φ(v) ≡ v^p mod p`.
    pub fn new(ideal: Ideal, p: u64, frobenius: Vec<Poly>) -> Result<Self> {
        let ring = ideal.ring().clone();
        let pr = ring.poly_ring();
        if frobenius.len() != pr.nvars() {
            return Err(Error::Invalid(format!("{} Frobenius images for {} variables", frobenius.len(), pr.nvars())));
        }
        let data = PrismData { ideal, p, frobenius };
        for rel in ring.relations() {
            if !ring.is_zero(&data.apply(rel)) {
                return Err(Error::Invalid(format!("φ does not respect the relation {}", ring.format(rel))));
            }
        }
        let p_ideal = Ideal::new(ring.clone(), vec![pr.int(p as i64)])?;
        for (i, img) in data.frobenius.iter().enumerate() {
            let v = pr.var(i);
            if !p_ideal.contains(&ring.sub(img, &ring.pow(&v, p as u32))) {
                return Err(Error::Invalid(format!("φ({}) is not congruent to its p-th power mod p", pr.format(&v))));
            }
        }
        Ok(data)
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        self.ideal.ring()
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn frobenius(&self) -> &[Poly] {
        &self.frobenius
    }

    pub fn apply(&self, a: &Poly) -> Poly {
        let ring = self.ring();
        ring.reduce(&ring.poly_ring().substitute(a, &self.frobenius, ring.poly_ring()))
    }

    /// Generators of `ℐ + φ(ℐ)R`: those of `ℐ` followed by their images.
    pub fn condition_generators(&self) -> Vec<Poly> {
        let mut gens = self.ideal.generators().to_vec();
        gens.extend(self.ideal.generators().iter().map(|g| self.apply(g)));
        gens
    }
}

#[derive(Debug, Clone)]
pub struct PrismWitness {
    pub generators: Vec<Poly>,
    pub coefficients: Vec<Poly>,
}

impl PrismWitness {
    pub fn check(&self, prism: &PrismData) -> bool {
        let ring = prism.ring();
        self.generators == prism.condition_generators()
            && check_combination(ring, &self.generators, &self.coefficients, &ring.poly_ring().int(prism.p as i64))
    }
}

/// Decides `p ∈ ℐ + φ(ℐ)R`, with the combination when it holds.
pub fn prism_condition(prism: &PrismData) -> Result<Option<PrismWitness>> {
    let ring = prism.ring();
    let generators = prism.condition_generators();
    let p = ring.poly_ring().int(prism.p as i64);
    Ok(combination(ring, &generators, &p)?.map(|coefficients| PrismWitness { generators, coefficients }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> (Arc<RingPresentation>, Ideal) {
        let r = Arc::new(RingPresentation::parse("QQ", &["a", "b"], &["a^2+b^2-1"]).unwrap());
        let i = Ideal::new(r.clone(), vec![r.element("1-a").unwrap(), r.element("b").unwrap()]).unwrap();
        (r, i)
    }

    fn chart(r: &RingPresentation, f: &str, x: &str) -> Chart {
        Chart { f: r.element(f).unwrap(), x: r.element(x).unwrap() }
    }

    #[test]
    fn circle_divisor_verifies() {
        let (r, i) = circle();
        let d = CartierDivisor::new(i, vec![chart(&r, "1+a", "b"), chart(&r, "1-a", "1")]).unwrap();
        let rep = d.report();
        assert!(check_combination(&r, &[r.element("1+a").unwrap(), r.element("1-a").unwrap()], rep.covering.as_ref().unwrap(), &r.one()));
        for row in d.chart_power_consistency(3).unwrap() {
            assert!(row.iter().all(|&b| b));
        }
    }

    #[test]
    fn non_principal_chart_rejected() {
        let r = Arc::new(RingPresentation::parse("QQ", &["x", "y"], &[]).unwrap());
        let i = Ideal::new(r.clone(), vec![r.element("x").unwrap(), r.element("y").unwrap()]).unwrap();
        let rep = verify_cartier(&i, &[chart(&r, "1", "x")]).unwrap();
        assert!(!rep.verified);
        assert_eq!(rep.failing_chart, Some(0));
        assert_eq!(rep.failing_check, Some(CartierCheck::IdealEquality));
    }

    #[test]
    fn pro_regular_pair_on_axes() {
        let r = Arc::new(RingPresentation::parse("QQ", &["x", "y"], &["x*y"]).unwrap());
        let i = Ideal::new(r.clone(), vec![r.element("y").unwrap()]).unwrap();
        let c = is_pro_regular_pair(&i, &r.element("x").unwrap(), 6).unwrap();
        assert_eq!(c.verdict, Verdict::ProZero);
    }

    #[test]
    fn prism_membership() {
        let r = Arc::new(RingPresentation::parse("ZZ/4", &["u"], &[]).unwrap());
        let phi = vec![r.element("u^2").unwrap()];
        let good = PrismData::new(Ideal::new(r.clone(), vec![r.element("u-2").unwrap()]).unwrap(), 2, phi.clone()).unwrap();
        let w = prism_condition(&good).unwrap().unwrap();
        assert!(w.check(&good));
        let bad = PrismData::new(Ideal::new(r.clone(), vec![r.element("u").unwrap()]).unwrap(), 2, phi).unwrap();
        assert!(prism_condition(&bad).unwrap().is_none());
    }
}
