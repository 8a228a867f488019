//! Adic and filtration completions as towers, Čech homology reports from
//! Koszul towers, and the composite-completion check for a filtration.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fpmod::{FpModule, IsoCertificate, ModuleMap, Subquotient};
use crate::kernel::{Matrix, Poly};
use crate::koszul::{comparison_matrix, koszul_homology, koszul_tower, SequenceSpec};
use crate::rings::Ideal;
use crate::towers::{
    bi_pro_zero_equivalence, lim_lim1, BiProZeroReport, BiTower, InverseTower, Lim1Status, LimReport, LimStatus,
    StructuralTag, Verdict,
};

/// A decreasing chain `M ⊇ M_1 ⊇ M_2 ⊇ …` of submodules, each given by
/// generators in the coordinates of `M`.
#[derive(Debug, Clone)]
pub struct Filtration {
    module: Arc<FpModule>,
    levels: Vec<Matrix>,
}

impl Filtration {
    /// `levels[n-1]` generates `M_n`; containment `M_{n+1} ⊆ M_n` is verified.
    pub fn new(module: Arc<FpModule>, levels: Vec<Matrix>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Invalid("a filtration needs at least one level".into()));
        }
        for (n, pair) in levels.windows(2).enumerate() {
            let span = Subquotient::new(module.clone(), pair[0].clone(), Matrix::empty(module.ngens()))?;
            for c in pair[1].columns() {
                if span.coordinates(c)?.is_none() {
                    return Err(Error::Invalid(format!("filtration level {} is not contained in level {}", n + 2, n + 1)));
                }
            }
        }
        Ok(Filtration { module, levels })
    }

    /// `M_n = Iⁿ M`.
    pub fn ideal_powers(module: Arc<FpModule>, ideal: &Ideal, window: usize) -> Result<Self> {
        let g = module.ngens();
        let levels = (1..=window as u32)
            .map(|n| {
                let pw = ideal.power(n)?;
                let mut cols = Vec::new();
                for a in pw.generators() {
                    for j in 0..g {
                        let mut c = vec![Poly::zero(); g];
                        c[j] = a.clone();
                        cols.push(c);
                    }
                }
                Ok(Matrix::from_columns(g, cols))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(module, levels)
    }

    /// `M_n = 0` for all `n`.
    pub fn zero(module: Arc<FpModule>, window: usize) -> Result<Self> {
        let g = module.ngens();
        Self::new(module, vec![Matrix::empty(g); window])
    }

    pub fn module(&self) -> &Arc<FpModule> {
        &self.module
    }

    pub fn window(&self) -> usize {
        self.levels.len()
    }

    /// Generators of `M_n`, 1-based.
    pub fn level(&self, n: usize) -> &Matrix {
        &self.levels[n - 1]
    }

    /// `M/M_n`.
    pub fn quotient(&self, n: usize) -> Result<FpModule> {
        self.module.quotient(self.level(n))
    }
}

/// `{M/x̲^{(n)}M}` with the canonical surjections.
pub fn adic_tower(module: &Arc<FpModule>, sequence: &SequenceSpec, window: usize) -> Result<InverseTower> {
    let id = Matrix::identity(module.ring().poly_ring(), module.ngens());
    InverseTower::from_rule(
        format!("adic tower of ({})", sequence.format()),
        window,
        vec![StructuralTag::SurjectiveByConstruction],
        |n| Ok(Arc::new(module.tensor_quotient(&sequence.powers(n as u32))?)),
        |_, _, _| Ok(id.clone()),
    )
}

/// `{M/M_n}` with the canonical surjections.
pub fn filtration_tower(filtration: &Filtration) -> Result<InverseTower> {
    let m = filtration.module();
    let id = Matrix::identity(m.ring().poly_ring(), m.ngens());
    InverseTower::from_rule(
        "filtration tower",
        filtration.window(),
        vec![StructuralTag::SurjectiveByConstruction],
        |n| Ok(Arc::new(filtration.quotient(n)?)),
        |_, _, _| Ok(id.clone()),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CechConclusion {
    Vanishes,
    IsomorphicToCompletion,
    Undetermined,
}

impl CechConclusion {
    pub fn name(&self) -> &'static str {
        match self {
            CechConclusion::Vanishes => "VANISHES",
            CechConclusion::IsomorphicToCompletion => "ISOMORPHIC_TO_COMPLETION",
            CechConclusion::Undetermined => "UNDETERMINED",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CechHomologyReport {
    pub degree: usize,
    pub conclusion: CechConclusion,
    /// Classification of `{H_i}`.
    pub lower: LimReport,
    /// Classification of `{H_{i+1}}`; `None` above the top degree, where the
    /// tower is zero.
    pub upper: Option<LimReport>,
    pub diagnostics: Vec<String>,
}

/// Assembles `Ȟ_i` from the short exact sequence
/// `0 → lim¹ H_{i+1} → Ȟ_i → lim H_i → 0`.
pub fn cech_homology_report(i: usize, sequence: &SequenceSpec, module: &Arc<FpModule>, window: usize) -> Result<CechHomologyReport> {
    let r = sequence.len();
    if i > r {
        return Err(Error::DegreeOutOfRange { degree: i, max: r });
    }
    let lower = if i == 0 { lim_lim1(&adic_tower(module, sequence, window)?)? } else { lim_lim1(&koszul_tower(i, sequence, module, window)?)? };
    let upper = if i < r { Some(lim_lim1(&koszul_tower(i + 1, sequence, module, window)?)?) } else { None };
    let upper_lim1_zero = upper.as_ref().is_none_or(|u| u.lim1 == Lim1Status::ZeroCertified);
    let mut diagnostics = Vec::new();
    let conclusion = if i == 0 {
        if upper_lim1_zero {
            CechConclusion::IsomorphicToCompletion
        } else {
            CechConclusion::Undetermined
        }
    } else if upper_lim1_zero && matches!(lower.lim, LimStatus::ZeroCertified) {
        CechConclusion::Vanishes
    } else {
        CechConclusion::Undetermined
    };
    if conclusion == CechConclusion::Undetermined {
        for (deg, rep) in [(i, Some(&lower)), (i + 1, upper.as_ref())] {
            let Some(rep) = rep else { continue };
            if let Some(c) = &rep.evidence.certificate {
                if c.verdict == Verdict::NotProZeroWithinWindow {
                    diagnostics.push(format!("H_{deg} tower: {}", c.verdict.name()));
                    diagnostics.extend(c.diagnostics.iter().map(|d| format!("H_{deg} tower: {d}")));
                }
            }
            diagnostics.push(format!("H_{deg} tower: lim {}, lim¹ {} ({})", rep.lim.name(), rep.lim1.name(), rep.rule));
        }
    }
    Ok(CechHomologyReport { degree: i, conclusion, lower, upper, diagnostics })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompositeStatus {
    Passed,
    Failed,
    NotCheckable,
}

impl CompositeStatus {
    pub fn name(&self) -> &'static str {
        match self {
            CompositeStatus::Passed => "PASSED",
            CompositeStatus::Failed => "FAILED",
            CompositeStatus::NotCheckable => "NOT_CHECKABLE",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CompositeReport {
    pub status: CompositeStatus,
    /// How `lim_n lim¹_m H_1(x̲^{(n)}; M/M_m) = 0` was certified.
    pub vanishing_route: Option<String>,
    /// Level `n`: `M/(x̲^{(n)}M + M_n) ≅ H_0(x̲^{(n)}; M/M_n)`.
    pub level_isomorphisms: Vec<IsoCertificate>,
    pub natural: bool,
    pub diagonal: BiProZeroReport,
    pub diagnostics: Vec<String>,
}

impl CompositeReport {
    pub fn passed(&self) -> bool {
        self.status == CompositeStatus::Passed
    }
}

/// `B(n, m) = H_1(x̲^{(n)}; M/M_m)`.
pub fn filtration_bitower(filtration: &Filtration, sequence: &SequenceSpec) -> Result<BiTower> {
    let w = filtration.window();
    let quotients: Vec<Arc<FpModule>> =
        (1..=w).into_par_iter().map(|m| filtration.quotient(m).map(Arc::new)).collect::<Result<_>>()?;
    let cells: Vec<Subquotient> = (0..w * w)
        .into_par_iter()
        .map(|k| koszul_homology(1, sequence, (k / w + 1) as u32, &quotients[k % w]))
        .collect::<Result<_>>()?;
    let at = |n: usize, m: usize| &cells[(n - 1) * w + (m - 1)];
    let g = filtration.module().ngens();
    let r = sequence.len();
    let id = Matrix::identity(filtration.module().ring().poly_ring(), g * r);
    BiTower::from_rule(
        format!("H_1(({})^n; M/M_m)", sequence.format()),
        w,
        |n, m| Ok(at(n, m).module.clone()),
        |n, m, _, _| {
            let phi = comparison_matrix(sequence, 1, n as u32 + 1, n as u32, g)?;
            Ok(at(n + 1, m).induced_map(at(n, m), &phi)?.matrix().clone())
        },
        |n, m, _, _| Ok(at(n, m + 1).induced_map(at(n, m), &id)?.matrix().clone()),
    )
}

/// Column `n` of a bi-indexed system: `m ↦ B(n, m)`.
fn column_tower(bt: &BiTower, n: usize) -> Result<InverseTower> {
    let w = bt.window();
    let levels = (1..=w).map(|m| bt.cell(n, m).clone()).collect();
    let maps = (1..w).map(|m| bt.vertical(n, m).matrix().clone()).collect();
    InverseTower::new(format!("column {n}"), levels, maps, vec![])
}

/// Compares the towers `{H_0(x̲^{(n)}; M/M_n)}` and `{M/(x̲^{(n)}M + M_n)}`
/// level by level once `lim_n lim¹_m H_1(x̲^{(n)}; M/M_m) = 0` is certified.
pub fn composite_completion_check(filtration: &Filtration, sequence: &SequenceSpec) -> Result<CompositeReport> {
    let w = filtration.window();
    let module = filtration.module();
    let ring = module.ring().clone();
    let bt = filtration_bitower(filtration, sequence)?;
    let diagonal = bi_pro_zero_equivalence(&bt)?;
    let mut diagnostics = Vec::new();

    let columns: Vec<LimReport> =
        (1..=w).into_par_iter().map(|n| lim_lim1(&column_tower(&bt, n)?)).collect::<Result<_>>()?;
    let vanishing_route = if columns.iter().all(|c| c.lim1 == Lim1Status::ZeroCertified) {
        Some("inner towers have lim¹ = 0".to_string())
    } else if diagonal.bi_verdict == Verdict::ProZero && diagonal.holds() {
        Some("bi-indexed system pro-zero, so its lim¹ and the inner lim¹ terms vanish".to_string())
    } else {
        None
    };
    if vanishing_route.is_none() {
        for (n, c) in (1..).zip(&columns) {
            if c.lim1 != Lim1Status::ZeroCertified {
                diagnostics.push(format!("column {n}: lim¹ {} ({})", c.lim1.name(), c.rule));
            }
        }
        return Ok(CompositeReport {
            status: CompositeStatus::NotCheckable,
            vanishing_route,
            level_isomorphisms: Vec::new(),
            natural: false,
            diagonal,
            diagnostics,
        });
    }

    let g = module.ngens();
    let levels: Vec<(Arc<FpModule>, Subquotient)> = (1..=w)
        .into_par_iter()
        .map(|n| {
            let quotient = Arc::new(filtration.quotient(n)?);
            let h0 = koszul_homology(0, sequence, n as u32, &quotient)?;
            let direct = Arc::new(module.tensor_quotient(&sequence.powers(n as u32))?.quotient(filtration.level(n))?);
            Ok((direct, h0))
        })
        .collect::<Result<_>>()?;
    let mut isos = Vec::with_capacity(w);
    let mut ok = true;
    for (n, (direct, h0)) in (1..).zip(&levels) {
        let mut cols = Vec::with_capacity(g);
        for j in 0..g {
            let e = crate::fpmod::unit_vector(&ring, g, j);
            match h0.coordinates(&e)? {
                Some(c) => cols.push(c),
                None => return Err(Error::Invalid("generator outside the degree-0 homology".into())),
            }
        }
        let forward = ModuleMap::new(direct.clone(), h0.module.clone(), Matrix::from_columns(h0.module.ngens(), cols))?;
        let backward = ModuleMap::new(h0.module.clone(), direct.clone(), h0.representatives().clone())?;
        match IsoCertificate::check(&forward, &backward)? {
            Some(c) => isos.push(c),
            None => {
                ok = false;
                diagnostics.push(format!("level {n}: comparison maps are not mutually inverse"));
            }
        }
    }
    let mut natural = ok;
    if ok {
        let id = Matrix::identity(ring.poly_ring(), g);
        for n in 1..w {
            let (d_hi, h_hi) = &levels[n];
            let (d_lo, h_lo) = &levels[n - 1];
            let t_direct = ModuleMap::new(d_hi.clone(), d_lo.clone(), id.clone())?;
            let t_h0 = h_hi.induced_map(h_lo, &id)?;
            let f_hi = ModuleMap::new(d_hi.clone(), h_hi.module.clone(), isos[n].forward.clone())?;
            let f_lo = ModuleMap::new(d_lo.clone(), h_lo.module.clone(), isos[n - 1].forward.clone())?;
            if !t_h0.compose(&f_hi)?.equals(&f_lo.compose(&t_direct)?) {
                natural = false;
                diagnostics.push(format!("comparison maps do not commute with the transition {}→{n}", n + 1));
            }
        }
    }
    if !diagonal.holds() {
        diagnostics.push("diagonal and bi-indexed pro-zero verdicts are inconsistent".into());
    }
    let status = if ok && natural && diagonal.holds() { CompositeStatus::Passed } else { CompositeStatus::Failed };
    Ok(CompositeReport { status, vanishing_route, level_isomorphisms: isos, natural, diagonal, diagnostics })
}

/// Re-verifies recorded level isomorphisms against freshly built levels.
pub fn replay_composite_isomorphisms(filtration: &Filtration, sequence: &SequenceSpec, isos: &[IsoCertificate]) -> Result<bool> {
    if isos.len() != filtration.window() {
        return Ok(false);
    }
    for (n, iso) in (1..).zip(isos) {
        let quotient = Arc::new(filtration.quotient(n)?);
        let h0 = koszul_homology(0, sequence, n as u32, &quotient)?;
        let direct = Arc::new(filtration.module().tensor_quotient(&sequence.powers(n as u32))?.quotient(filtration.level(n))?);
        if !iso.replay(&direct, &h0.module)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::RingPresentation;

    #[test]
    fn adic_tower_dimensions() {
        let r = Arc::new(RingPresentation::parse("QQ", &["x", "y"], &[]).unwrap());
        let m = Arc::new(FpModule::free(r.clone(), 1).unwrap());
        let seq = SequenceSpec::parse(r, &["x", "y"]).unwrap();
        let t = adic_tower(&m, &seq, 4).unwrap();
        for n in 1..=4 {
            assert_eq!(t.level(n).vector_space_dimension(), Some(n * n));
        }
        let rep = lim_lim1(&t).unwrap();
        assert_eq!(rep.lim1, Lim1Status::ZeroCertified);
        assert!(matches!(rep.lim, LimStatus::Undetermined));
    }

    #[test]
    fn cech_report_on_nilpotent_module() {
        let r = Arc::new(RingPresentation::parse("QQ", &["x"], &[]).unwrap());
        let m = Arc::new(FpModule::cyclic(r.clone(), &[r.element("x^3").unwrap()]).unwrap());
        let seq = SequenceSpec::parse(r, &["x"]).unwrap();
        let rep = cech_homology_report(0, &seq, &m, 8).unwrap();
        assert_eq!(rep.conclusion, CechConclusion::IsomorphicToCompletion);
        let pz = rep.upper.unwrap().evidence.certificate.unwrap();
        assert_eq!(pz.verdict, Verdict::ProZero);
        assert_eq!(pz.indices()[0], (1, 4));
    }

    #[test]
    fn composite_check_on_monomial_curve() {
        let r = Arc::new(RingPresentation::parse("QQ", &["x", "y"], &["x*y"]).unwrap());
        let m = Arc::new(FpModule::free(r.clone(), 1).unwrap());
        let ideal = Ideal::new(r.clone(), vec![r.element("y").unwrap()]).unwrap();
        let f = Filtration::ideal_powers(m, &ideal, 5).unwrap();
        let seq = SequenceSpec::parse(r, &["x"]).unwrap();
        let rep = composite_completion_check(&f, &seq).unwrap();
        assert!(rep.passed(), "{:?}", rep.diagnostics);
        assert!(replay_composite_isomorphisms(&f, &seq, &rep.level_isomorphisms).unwrap());
    }
}
