use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::certificate::{is_mittag_leffler, is_pro_zero, Certificate, Verdict};
use super::{InverseTower, StructuralTag};
use crate::error::Result;
use crate::fpmod::{is_short_exact, FpModule, ModuleMap, Subquotient};
use crate::kernel::{smith_normal_form, CoefficientDomain, Matrix};

#[derive(Debug, Clone)]
pub enum LimStatus {
    ZeroCertified,
    /// `lim` is isomorphic to the given module, realized as a submodule of
    /// the level `at`.
    Presented { module: Arc<FpModule>, at: usize },
    Undetermined,
}

impl LimStatus {
    pub fn name(&self) -> &'static str {
        match self {
            LimStatus::ZeroCertified => "ZERO_CERTIFIED",
            LimStatus::Presented { .. } => "PRESENTED",
            LimStatus::Undetermined => "UNDETERMINED",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lim1Status {
    ZeroCertified,
    Undetermined,
}

impl Lim1Status {
    pub fn name(&self) -> &'static str {
        match self {
            Lim1Status::ZeroCertified => "ZERO_CERTIFIED",
            Lim1Status::Undetermined => "UNDETERMINED",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct LimEvidence {
    /// Pro-zero or Mittag-Leffler certificate.
    pub certificate: Option<Certificate>,
    pub tags: Vec<String>,
    /// Inverses of the transitions `M_{n+1} → M_n` for `n ≥ from`.
    pub inverses: Vec<(usize, Matrix)>,
    /// Invariant factors of the common transition of a free `ℤ`-tower.
    pub invariant_factors: Vec<BigInt>,
}

#[derive(Debug, Clone)]
pub struct LimReport {
    pub lim: LimStatus,
    pub lim1: Lim1Status,
    pub rule: String,
    pub evidence: LimEvidence,
    pub diagnostics: Vec<String>,
}

pub const VANISHING_WITHOUT_PRO_ZERO: &str = "VANISHING_WITHOUT_PRO_ZERO";

fn inverses_from(tower: &InverseTower, from: usize) -> Result<Option<Vec<(usize, Matrix)>>> {
    let mut out = Vec::new();
    for n in from..tower.window() {
        match tower.transition(n).inverse()? {
            Some(inv) => out.push((n, inv.matrix().clone())),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Common transition of a tower of free `ℤ`-modules with identical
/// transitions whose smallest invariant factor is at least 2. Then
/// `T^k ℤ^r ⊆ d₁^k ℤ^r`, so the images meet in zero.
fn integer_divisibility(tower: &InverseTower) -> Option<Vec<BigInt>> {
    let ring = tower.ring();
    if *ring.domain() != CoefficientDomain::Integers || ring.poly_ring().nvars() != 0 || !ring.relations().is_empty() {
        return None;
    }
    let r = tower.level(1).ngens();
    if r == 0 || tower.levels().iter().any(|m| m.ngens() != r || m.relations().ncols() != 0) {
        return None;
    }
    let t = tower.transition(1).matrix();
    if (2..tower.window()).any(|n| tower.transition(n).matrix() != t) {
        return None;
    }
    let rows: Vec<Vec<BigInt>> = (0..r)
        .map(|i| (0..r).map(|j| t.entry(i, j).constant_term().map_or_else(BigInt::zero, |c| c.to_integer())).collect())
        .collect();
    let snf = smith_normal_form(&rows, r);
    let d = snf.invariant_factors();
    (snf.rank() == r && d[0] > BigInt::one()).then_some(d)
}

/// Stable images `Im φ_{n,W}` as subquotients of the levels `n ≤ upto`.
fn stable_images(tower: &InverseTower, upto: usize) -> Result<Vec<Subquotient>> {
    (1..=upto)
        .map(|n| {
            let p = tower.composite_matrix(n, tower.window())?;
            Subquotient::new(tower.level(n).clone(), p, Matrix::empty(tower.level(n).ngens()))
        })
        .collect()
}

/// Classifies `lim` and `lim¹` by the first applicable certified rule.
pub fn lim_lim1(tower: &InverseTower) -> Result<LimReport> {
    let mut report = LimReport {
        lim: LimStatus::Undetermined,
        lim1: Lim1Status::Undetermined,
        rule: "NONE".into(),
        evidence: LimEvidence::default(),
        diagnostics: Vec::new(),
    };
    let pz = is_pro_zero(tower)?;
    if pz.verdict == Verdict::ProZero {
        report.lim = LimStatus::ZeroCertified;
        report.lim1 = Lim1Status::ZeroCertified;
        report.rule = "PRO_ZERO".into();
        report.evidence.certificate = Some(pz);
        return Ok(report);
    }
    if let Some(from) = tower.eventually_constant_from() {
        if let Some(inv) = inverses_from(tower, from)? {
            report.lim = LimStatus::Presented { module: tower.level(from).clone(), at: from };
            report.lim1 = Lim1Status::ZeroCertified;
            report.rule = "EVENTUALLY_CONSTANT".into();
            report.evidence.tags.push(StructuralTag::EventuallyConstant { from }.name().into());
            report.evidence.inverses = inv;
            return Ok(report);
        }
    }
    if tower.has_tag(StructuralTag::SurjectiveByConstruction) {
        report.lim1 = Lim1Status::ZeroCertified;
        report.rule = "SURJECTIVE".into();
        report.evidence.tags.push(StructuralTag::SurjectiveByConstruction.name().into());
        report.diagnostics.push("limit of surjective transitions is not presented from finitely many levels".into());
        return Ok(report);
    }
    if tower.has_tag(StructuralTag::FiniteLengthLevels) {
        let ml = is_mittag_leffler(tower)?;
        report.lim1 = Lim1Status::ZeroCertified;
        report.rule = "FINITE_LENGTH".into();
        report.evidence.tags.push(StructuralTag::FiniteLengthLevels.name().into());
        if ml.failing_levels.is_empty() {
            let upto = tower.window().div_ceil(2);
            let images = stable_images(tower, upto)?;
            let iso_from = (1..upto).rev().take_while(|&n| {
                images[n]
                    .induced_map(&images[n - 1], tower.transition(n).matrix())
                    .and_then(|f| f.is_isomorphism())
                    .unwrap_or(false)
            });
            if let Some(n0) = iso_from.last() {
                report.lim = LimStatus::Presented { module: images[n0 - 1].module.clone(), at: n0 };
                report.diagnostics.push(format!("stable images isomorphic from level {n0} through level {upto}"));
            }
        }
        report.evidence.certificate = Some(ml);
        return Ok(report);
    }
    if let Some(d) = integer_divisibility(tower) {
        report.lim = LimStatus::ZeroCertified;
        report.rule = "INTEGER_DIVISIBILITY".into();
        report.evidence.invariant_factors = d;
        report.diagnostics.push(format!(
            "{VANISHING_WITHOUT_PRO_ZERO}: lim = 0 is certified while the tower is not pro-zero within window {}",
            tower.window()
        ));
        report.diagnostics.push("lim¹ of injective non-surjective integer transitions is left undetermined".into());
        report.evidence.certificate = Some(pz);
        return Ok(report);
    }
    report.diagnostics.extend(pz.diagnostics.iter().cloned());
    report.evidence.certificate = Some(pz);
    Ok(report)
}

/// `0 → A → B → C → 0` of towers: `f[n-1]: A_n → B_n`, `g[n-1]: B_n → C_n`.
#[derive(Debug, Clone)]
pub struct TowerSes {
    pub a: InverseTower,
    pub b: InverseTower,
    pub c: InverseTower,
    pub f: Vec<Matrix>,
    pub g: Vec<Matrix>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SixTermStatus {
    Exact,
    NotExact,
    NotCheckable,
}

impl SixTermStatus {
    pub fn name(&self) -> &'static str {
        match self {
            SixTermStatus::Exact => "EXACT",
            SixTermStatus::NotExact => "NOT_EXACT",
            SixTermStatus::NotCheckable => "NOT_CHECKABLE",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SixTermReport {
    pub status: SixTermStatus,
    pub levelwise_exact: bool,
    pub commutes: bool,
    /// Level at which the limits are realized.
    pub level: Option<usize>,
    pub limits: Vec<LimReport>,
    pub diagnostics: Vec<String>,
}

impl SixTermReport {
    pub fn passed(&self) -> bool {
        self.status == SixTermStatus::Exact
    }
}

fn commutes(
    src: &InverseTower,
    dst: &InverseTower,
    maps: &[Matrix],
) -> Result<bool> {
    let ring = src.ring();
    for n in 1..src.window() {
        let down_then_across = ring.mul_matrices(&maps[n - 1], src.transition(n).matrix());
        let across_then_down = ring.mul_matrices(dst.transition(n).matrix(), &maps[n]);
        let diff = down_then_across.sub(ring.poly_ring(), &across_then_down);
        if diff.columns().iter().any(|c| !dst.level(n).is_zero_element(c)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks the sequence `0 → lim A → lim B → lim C → lim¹A → lim¹B → lim¹C → 0`
/// on towers whose limits are all classified.
pub fn six_term_check(ses: &TowerSes) -> Result<SixTermReport> {
    let w = ses.a.window();
    let mut report = SixTermReport {
        status: SixTermStatus::NotCheckable,
        levelwise_exact: false,
        commutes: false,
        level: None,
        limits: Vec::new(),
        diagnostics: Vec::new(),
    };
    if ses.b.window() != w || ses.c.window() != w || ses.f.len() != w || ses.g.len() != w {
        report.diagnostics.push("towers and level maps must share one window".into());
        return Ok(report);
    }
    let mut exact = true;
    for n in 1..=w {
        let f = ModuleMap::new(ses.a.level(n).clone(), ses.b.level(n).clone(), ses.f[n - 1].clone())?;
        let g = ModuleMap::new(ses.b.level(n).clone(), ses.c.level(n).clone(), ses.g[n - 1].clone())?;
        if !is_short_exact(&f, &g)? {
            exact = false;
            report.diagnostics.push(format!("level {n} is not short exact"));
        }
    }
    report.levelwise_exact = exact;
    report.commutes = commutes(&ses.a, &ses.b, &ses.f)? && commutes(&ses.b, &ses.c, &ses.g)?;
    if !report.commutes {
        report.diagnostics.push("level maps do not commute with the transitions".into());
    }
    report.limits = vec![lim_lim1(&ses.a)?, lim_lim1(&ses.b)?, lim_lim1(&ses.c)?];
    if !exact || !report.commutes {
        report.status = SixTermStatus::NotExact;
        return Ok(report);
    }
    let unclassified: Vec<&str> = ["A", "B", "C"]
        .into_iter()
        .zip(&report.limits)
        .filter(|(_, l)| matches!(l.lim, LimStatus::Undetermined) || l.lim1 == Lim1Status::Undetermined)
        .map(|(name, _)| name)
        .collect();
    if !unclassified.is_empty() {
        report.diagnostics.push(format!("unclassified tower(s): {}", unclassified.join(", ")));
        return Ok(report);
    }
    // every lim¹ vanishes, so the sequence reduces to 0 → lim A → lim B → lim C → 0
    let level = report
        .limits
        .iter()
        .filter_map(|l| match l.lim {
            LimStatus::Presented { at, .. } => Some(at),
            _ => None,
        })
        .max()
        .unwrap_or(1);
    report.level = Some(level);
    let towers = [&ses.a, &ses.b, &ses.c];
    let mut limits = Vec::with_capacity(3);
    for (t, l) in towers.iter().zip(&report.limits) {
        let ambient = t.level(level).clone();
        let numerator = match l.lim {
            LimStatus::Presented { .. } => t.composite_matrix(level, w)?,
            _ => Matrix::empty(ambient.ngens()),
        };
        limits.push(Subquotient::new(ambient.clone(), numerator, Matrix::empty(ambient.ngens()))?);
    }
    let f = limits[0].induced_map(&limits[1], &ses.f[level - 1])?;
    let g = limits[1].induced_map(&limits[2], &ses.g[level - 1])?;
    report.status = if is_short_exact(&f, &g)? { SixTermStatus::Exact } else { SixTermStatus::NotExact };
    Ok(report)
}
