//! Regular, pro-regular and weakly pro-regular sequences, bounded torsion,
//! and audits of the implications between them.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::Result;
use crate::fpmod::{colon, FpModule, Subquotient};
use crate::kernel::{Matrix, Poly};
use crate::koszul::{koszul_tower, same_submodule, SequenceSpec};
use crate::towers::{
    bi_pro_zero_equivalence, is_pro_zero, lim_lim1, BiTower, Certificate, InverseTower, Lim1Status, LimStatus, Verdict,
};

/// `x₁ⁿ,…,x_kⁿ` times every generator of `M`, as columns.
fn power_submodule(module: &FpModule, elements: &[Poly], n: u32) -> Matrix {
    let ring = module.ring();
    let g = module.ngens();
    let mut cols = Vec::new();
    for x in elements {
        let xn = ring.pow(x, n);
        for j in 0..g {
            let mut c = vec![Poly::zero(); g];
            c[j] = xn.clone();
            cols.push(c);
        }
    }
    Matrix::from_columns(g, cols)
}

#[derive(Debug, Clone)]
pub struct RegularWitness {
    pub regular: bool,
    /// First index `i` (1-based) whose colon quotient is nonzero.
    pub failing_index: Option<usize>,
    /// A nonzero element of that colon quotient.
    pub failing_element: Option<Vec<Poly>>,
    pub quotient_nonzero: bool,
}

/// `x̲` is `M`-regular: every `x̲_{i−1}M :_M x_i / x̲_{i−1}M` vanishes and
/// `M/x̲M ≠ 0`.
pub fn is_regular_sequence(sequence: &SequenceSpec, module: &Arc<FpModule>) -> Result<RegularWitness> {
    let quotient_nonzero = !module.tensor_quotient(sequence.elements())?.is_zero();
    let mut failing_index = None;
    let mut failing_element = None;
    for i in 1..=sequence.len() {
        let n = power_submodule(module, &sequence.elements()[..i - 1], 1);
        let q = colon(module, &n, &sequence.elements()[i - 1])?;
        if !q.module.is_zero() {
            failing_index = Some(i);
            failing_element = Some(q.representatives().column(0).to_vec());
            break;
        }
    }
    Ok(RegularWitness {
        regular: quotient_nonzero && failing_index.is_none(),
        failing_index,
        failing_element,
        quotient_nonzero,
    })
}

/// `e` with `x^k e = 0` and `x^{k−1} e ≠ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct EscalationWitness {
    pub k: usize,
    pub element: Vec<Poly>,
}

impl EscalationWitness {
    pub fn verify(&self, module: &FpModule, x: &Poly) -> bool {
        let ring = module.ring();
        let p = ring.poly_ring();
        let scale = |e: u32| -> Vec<Poly> {
            let c = ring.pow(x, e);
            self.element.iter().map(|v| p.mul(&c, v)).collect()
        };
        self.k >= 1 && module.is_zero_element(&scale(self.k as u32)) && !module.is_zero_element(&scale(self.k as u32 - 1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundedVerdict {
    Bounded,
    NotBoundedWithinWindow,
}

impl BoundedVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            BoundedVerdict::Bounded => "BOUNDED",
            BoundedVerdict::NotBoundedWithinWindow => "NOT_BOUNDED_WITHIN_WINDOW",
        }
    }
}

/// Torsion index for messages; `-` when no stabilization was found.
pub(crate) fn index_text(index: Option<usize>) -> String {
    index.map_or_else(|| "-".to_string(), |s| s.to_string())
}

#[derive(Debug, Clone)]
pub struct BoundedTorsionReport {
    pub verdict: BoundedVerdict,
    /// Least `s` with `0 :_M x^s = 0 :_M x^{s+1}`, when found in the window.
    pub index: Option<usize>,
    /// Pro-zero certificate of `{0 :_M xⁿ}` under multiplication by `x`.
    pub certificate: Certificate,
    /// For each `k` up to the stabilization (or the window), an element
    /// killed by `x^k` but not by `x^{k−1}`.
    pub escalation: Vec<EscalationWitness>,
    pub diagnostics: Vec<String>,
}

fn annihilator(module: &Arc<FpModule>, x: &Poly, k: u32) -> Result<Subquotient> {
    colon(module, &Matrix::empty(module.ngens()), &module.ring().pow(x, k))
}

/// `0 :_M xⁿ ⊆ 0 :_M x^{n+1} ⊆ …` once equal stays equal: if
/// `x^{s+2}e = 0` then `xe ∈ 0 :_M x^{s+1} = 0 :_M x^s`.
pub fn is_bounded_torsion(module: &Arc<FpModule>, x: &Poly, window: usize) -> Result<BoundedTorsionReport> {
    let chain: Vec<Subquotient> =
        (0..=window as u32).into_par_iter().map(|k| annihilator(module, x, k)).collect::<Result<_>>()?;
    let mut index = None;
    let mut escalation = Vec::new();
    for k in 1..=window {
        if same_submodule(&chain[k - 1], &chain[k])? {
            index = Some(k - 1);
            break;
        }
        let mut fresh = Vec::new();
        for c in chain[k].representatives().columns() {
            if chain[k - 1].coordinates(c)?.is_none() {
                fresh.push(c.to_vec());
            }
        }
        let simplest = fresh.into_iter().min_by_key(|e| {
            let support = e.iter().filter(|p| !p.is_zero()).count();
            let deg = e.iter().filter_map(Poly::total_degree).max().unwrap_or(0);
            let terms: usize = e.iter().map(Poly::num_terms).sum();
            (support, deg, terms)
        });
        if let Some(element) = simplest {
            escalation.push(EscalationWitness { k, element });
        }
    }
    let tower = colon_tower(module, &[], x, window)?;
    let certificate = is_pro_zero(&tower)?;
    let verdict = if certificate.verdict == Verdict::ProZero {
        BoundedVerdict::Bounded
    } else {
        BoundedVerdict::NotBoundedWithinWindow
    };
    let mut diagnostics = Vec::new();
    match (index, verdict) {
        (Some(s), BoundedVerdict::NotBoundedWithinWindow) => diagnostics.push(format!(
            "annihilator chain stabilizes at {s}, but m(n) = n + {s} exceeds window {window}"
        )),
        (None, _) => diagnostics.push(format!("annihilator chain strictly increases through level {window}")),
        _ => {}
    }
    Ok(BoundedTorsionReport { verdict, index, certificate, escalation, diagnostics })
}

/// `{x̲^{(n)}M :_M yⁿ / x̲^{(n)}M}` with multiplication by `y` as transitions.
pub fn colon_tower(module: &Arc<FpModule>, prefix: &[Poly], y: &Poly, window: usize) -> Result<InverseTower> {
    let levels: Vec<Subquotient> = (1..=window as u32)
        .into_par_iter()
        .map(|n| colon(module, &power_submodule(module, prefix, n), &module.ring().pow(y, n)))
        .collect::<Result<_>>()?;
    let ring = module.ring().clone();
    let ymat = Matrix::scalar(module.ngens(), y);
    let label = format!("colon tower of {}", ring.format(y));
    InverseTower::from_rule(
        label,
        window,
        vec![],
        |n| Ok(levels[n - 1].module.clone()),
        |n, _, _| Ok(levels[n].induced_map(&levels[n - 1], &ymat)?.matrix().clone()),
    )
}

/// Tower `i` (1-based) of the pro-regularity test.
pub fn pro_regular_tower(sequence: &SequenceSpec, module: &Arc<FpModule>, i: usize, window: usize) -> Result<InverseTower> {
    let els = sequence.elements();
    colon_tower(module, &els[..i - 1], &els[i - 1], window)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Predicate {
    ProRegular,
    WeaklyProRegular,
}

#[derive(Debug, Clone)]
pub struct RegularityVerdict {
    pub predicate: Predicate,
    pub holds: bool,
    /// `(i, certificate)` for `i = 1..r`.
    pub per_index: Vec<(usize, Certificate)>,
    pub implications_checked: Vec<String>,
}

impl RegularityVerdict {
    pub fn name(&self) -> &'static str {
        match (self.predicate, self.holds) {
            (Predicate::ProRegular, true) => "PRO_REGULAR",
            (Predicate::ProRegular, false) => "NOT_PRO_REGULAR_WITHIN_WINDOW",
            (Predicate::WeaklyProRegular, true) => "WEAKLY_PRO_REGULAR",
            (Predicate::WeaklyProRegular, false) => "NOT_WEAKLY_PRO_REGULAR_WITHIN_WINDOW",
        }
    }
}

fn aggregate(predicate: Predicate, per_index: Vec<(usize, Certificate)>) -> RegularityVerdict {
    let holds = per_index.iter().all(|(_, c)| c.verdict == Verdict::ProZero);
    RegularityVerdict { predicate, holds, per_index, implications_checked: Vec::new() }
}

/// Every colon-quotient tower is pro-zero.
pub fn is_pro_regular(sequence: &SequenceSpec, module: &Arc<FpModule>, window: usize) -> Result<RegularityVerdict> {
    let per_index = (1..=sequence.len())
        .into_par_iter()
        .map(|i| Ok((i, is_pro_zero(&pro_regular_tower(sequence, module, i, window)?)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(Predicate::ProRegular, per_index))
}

/// Every Koszul homology tower in positive degree is pro-zero.
pub fn is_weakly_pro_regular(sequence: &SequenceSpec, module: &Arc<FpModule>, window: usize) -> Result<RegularityVerdict> {
    let per_index = (1..=sequence.len())
        .into_par_iter()
        .map(|i| Ok((i, is_pro_zero(&koszul_tower(i, sequence, module, window)?)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(Predicate::WeaklyProRegular, per_index))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceStatus {
    Agree,
    Disagree,
    Partial,
}

impl FaceStatus {
    pub fn name(&self) -> &'static str {
        match self {
            FaceStatus::Agree => "AGREE",
            FaceStatus::Disagree => "DISAGREE",
            FaceStatus::Partial => "PARTIAL",
        }
    }
}

#[derive(Debug, Clone)]
pub struct AuditFace {
    pub name: String,
    pub status: FaceStatus,
    pub positive: Option<bool>,
    pub details: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct AuditReport {
    pub regular: RegularWitness,
    pub pro_regular: RegularityVerdict,
    pub weakly_pro_regular: RegularityVerdict,
    pub faces: Vec<AuditFace>,
}

impl AuditReport {
    pub fn all_agree(&self) -> bool {
        self.faces.iter().all(|f| f.status == FaceStatus::Agree)
    }
}

/// `B_i(n, m) = H_1(x_iⁿ; M/x̲_{i−1}^{(m)}M)`, whose diagonal is the
/// pro-regularity tower `i`.
pub fn colon_bitower(sequence: &SequenceSpec, module: &Arc<FpModule>, i: usize, window: usize) -> Result<BiTower> {
    let els = sequence.elements();
    let (prefix, y) = (&els[..i - 1], &els[i - 1]);
    let ring = module.ring().clone();
    let w = window;
    let cells: Vec<Subquotient> = (0..w * w)
        .into_par_iter()
        .map(|k| {
            let (n, m) = (k / w + 1, k % w + 1);
            colon(module, &power_submodule(module, prefix, m as u32), &ring.pow(y, n as u32))
        })
        .collect::<Result<_>>()?;
    let at = |n: usize, m: usize| &cells[(n - 1) * w + (m - 1)];
    let g = module.ngens();
    let ymat = Matrix::scalar(g, y);
    let id = Matrix::identity(ring.poly_ring(), g);
    BiTower::from_rule(
        format!("H_1({}^n; M/M_m)", ring.format(y)),
        window,
        |n, m| Ok(at(n, m).module.clone()),
        |n, m, _, _| Ok(at(n + 1, m).induced_map(at(n, m), &ymat)?.matrix().clone()),
        |n, m, _, _| Ok(at(n, m + 1).induced_map(at(n, m), &id)?.matrix().clone()),
    )
}

/// Cross-checks of the regularity predicates on one instance.
pub fn audit_equivalences(sequence: &SequenceSpec, module: &Arc<FpModule>, window: usize) -> Result<AuditReport> {
    let regular = is_regular_sequence(sequence, module)?;
    let pro_regular = is_pro_regular(sequence, module, window)?;
    let weakly_pro_regular = is_weakly_pro_regular(sequence, module, window)?;
    let mut faces = Vec::new();

    // pro-regularity index by index against the bi-indexed colon system
    let mut details = Vec::new();
    let mut status = FaceStatus::Agree;
    for (i, cert) in &pro_regular.per_index {
        let bt = colon_bitower(sequence, module, *i, window)?;
        let rep = bi_pro_zero_equivalence(&bt)?;
        let levels = (1..=window)
            .map(|m| {
                let quotient = Arc::new(module.quotient(&power_submodule(module, &sequence.elements()[..i - 1], m as u32))?);
                is_bounded_torsion(&quotient, &sequence.elements()[i - 1], window).map(|r| r.index)
            })
            .collect::<Result<Vec<_>>>()?;
        details.push(format!(
            "index {i}: tower {}, bi-indexed {}, diagonal {}, torsion indices of the quotients [{}]",
            cert.verdict.name(),
            rep.bi_verdict.name(),
            rep.diagonal.verdict.name(),
            levels.iter().map(|s| index_text(*s)).collect::<Vec<_>>().join(", ")
        ));
        if !rep.holds() || rep.bi_verdict != cert.verdict || rep.diagonal.verdict != cert.verdict {
            status = FaceStatus::Disagree;
        }
    }
    faces.push(AuditFace {
        name: "pro-regular vs bounded torsion of the partial quotients".into(),
        status,
        positive: Some(pro_regular.holds),
        details,
    });

    // pro-zero of the colon towers against their lim/lim¹ classification
    let mut details = Vec::new();
    let mut status = FaceStatus::Agree;
    let mut positive = Some(true);
    for (i, cert) in &pro_regular.per_index {
        let tower = pro_regular_tower(sequence, module, *i, window)?;
        let lim = lim_lim1(&tower)?;
        let both_zero = matches!(lim.lim, LimStatus::ZeroCertified) && lim.lim1 == Lim1Status::ZeroCertified;
        let classified = !matches!(lim.lim, LimStatus::Undetermined) && lim.lim1 != Lim1Status::Undetermined;
        details.push(format!("index {i}: {} with lim {} / lim¹ {} by {}", cert.verdict.name(), lim.lim.name(), lim.lim1.name(), lim.rule));
        match (cert.verdict == Verdict::ProZero, both_zero, classified) {
            (true, true, _) => {}
            (true, false, _) => status = FaceStatus::Disagree,
            (false, _, false) => {
                // a negative verdict within the window is not contradicted by
                // limits the window cannot classify
                positive = Some(false);
                details.push(format!("index {i}: lim/lim¹ not classifiable within window {window}; no contradiction"));
            }
            (false, true, _) => {
                positive = Some(false);
                details.push(format!("index {i}: limits vanish without pro-zero (only the polynomial extension decides)"));
            }
            (false, false, true) => positive = Some(false),
        }
    }
    faces.push(AuditFace { name: "pro-zero vs lim/lim¹ of the colon towers".into(), status, positive, details });

    // regular ⇒ pro-regular ⇒ weakly pro-regular
    let chain_ok = (!regular.regular || pro_regular.holds) && (!pro_regular.holds || weakly_pro_regular.holds);
    let mut regular_witness_ok = true;
    if regular.regular {
        regular_witness_ok = pro_regular.per_index.iter().all(|(_, c)| c.indices().iter().all(|&(n, m)| n == m));
    }
    faces.push(AuditFace {
        name: "regular ⇒ pro-regular ⇒ weakly pro-regular".into(),
        status: if chain_ok && regular_witness_ok { FaceStatus::Agree } else { FaceStatus::Disagree },
        positive: Some(regular.regular),
        details: vec![format!(
            "regular {}, {}, {}",
            regular.regular,
            pro_regular.name(),
            weakly_pro_regular.name()
        )],
    });

    let mut pro_regular = pro_regular;
    pro_regular.implications_checked.push("regular ⇒ pro-regular".into());
    let mut weakly_pro_regular = weakly_pro_regular;
    weakly_pro_regular.implications_checked.push("pro-regular ⇒ weakly pro-regular".into());
    Ok(AuditReport { regular, pro_regular, weakly_pro_regular, faces })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::RingPresentation;

    fn setup(vars: &[&str], rels: &[&str], module_rels: &[&str]) -> (Arc<RingPresentation>, Arc<FpModule>) {
        let r = Arc::new(RingPresentation::parse("QQ", vars, rels).unwrap());
        let gens: Vec<Poly> = module_rels.iter().map(|s| r.element(s).unwrap()).collect();
        let m = Arc::new(FpModule::cyclic(r.clone(), &gens).unwrap());
        (r, m)
    }

    #[test]
    fn regular_sequences() {
        let (r, m) = setup(&["x", "y"], &[], &[]);
        assert!(is_regular_sequence(&SequenceSpec::parse(r.clone(), &["x", "y"]).unwrap(), &m).unwrap().regular);
        let (r1, m1) = setup(&["x"], &[], &[]);
        let w = is_regular_sequence(&SequenceSpec::parse(r1.clone(), &["x", "x"]).unwrap(), &m1).unwrap();
        assert!(!w.regular);
        assert_eq!(w.failing_index, Some(2));
        let zero = Arc::new(FpModule::zero(r1.clone()).unwrap());
        let w = is_regular_sequence(&SequenceSpec::parse(r1, &["x"]).unwrap(), &zero).unwrap();
        assert!(!w.regular && !w.quotient_nonzero);
        let _ = r;
    }

    #[test]
    fn bounded_torsion_indices() {
        let (r, m) = setup(&["x"], &[], &["x^3"]);
        let x = r.element("x").unwrap();
        let rep = is_bounded_torsion(&m, &x, 8).unwrap();
        assert_eq!(rep.verdict, BoundedVerdict::Bounded);
        assert_eq!(rep.index, Some(3));
        assert_eq!(rep.certificate.indices(), vec![(1, 4), (2, 5), (3, 6), (4, 7)]);
        assert!(rep.escalation.iter().all(|e| e.verify(&m, &x)));
        let (r, m) = setup(&["x"], &[], &[]);
        let rep = is_bounded_torsion(&m, &r.element("x").unwrap(), 4).unwrap();
        assert_eq!(rep.index, Some(0));
    }

    #[test]
    fn pro_regular_on_nilpotent_module() {
        let (r, m) = setup(&["x"], &[], &["x^3"]);
        let seq = SequenceSpec::parse(r, &["x"]).unwrap();
        let v = is_pro_regular(&seq, &m, 8).unwrap();
        assert!(v.holds);
        assert_eq!(v.per_index[0].1.indices()[0], (1, 4));
        assert!(is_weakly_pro_regular(&seq, &m, 8).unwrap().holds);
    }

    #[test]
    fn audit_of_a_regular_pair() {
        let (r, m) = setup(&["x", "y"], &[], &[]);
        let seq = SequenceSpec::parse(r, &["x", "y"]).unwrap();
        let a = audit_equivalences(&seq, &m, 4).unwrap();
        assert!(a.all_agree(), "{:?}", a.faces);
        assert!(a.regular.regular && a.pro_regular.holds && a.weakly_pro_regular.holds);
    }
}
