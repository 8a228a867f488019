use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{DirectTower, InverseTower, StructuralTag};
use crate::error::Result;
use crate::fpmod::FpModule;
use crate::kernel::{LiftingBasis, Matrix, PolyRing};
use crate::rings::RingPresentation;
use crate::serial::MatrixJson;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    ProZero,
    NotProZeroWithinWindow,
    MlCertified,
    MlStabilizedWithinWindow,
    NotMlWithinWindow,
    IndZero,
    NotIndZeroWithinWindow,
    Undetermined,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::ProZero => "PRO_ZERO",
            Verdict::NotProZeroWithinWindow => "NOT_PRO_ZERO_WITHIN_WINDOW",
            Verdict::MlCertified => "ML_CERTIFIED",
            Verdict::MlStabilizedWithinWindow => "ML_STABILIZED_WITHIN_WINDOW",
            Verdict::NotMlWithinWindow => "NOT_ML_WITHIN_WINDOW",
            Verdict::IndZero => "IND_ZERO",
            Verdict::NotIndZeroWithinWindow => "NOT_IND_ZERO_WITHIN_WINDOW",
            Verdict::Undetermined => "UNDETERMINED",
        }
    }
}

/// The composite between levels `n` and `m` is zero: every column of
/// `composite` equals `relations_of_target · lift` modulo the ring ideal.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroMapWitness {
    pub n: usize,
    pub m: usize,
    pub composite: Matrix,
    pub lift: Matrix,
}

impl ZeroMapWitness {
    fn check(&self, ring: &RingPresentation, recomputed: &Matrix, target: &FpModule) -> std::result::Result<(), String> {
        if !ring.matrices_equal(recomputed, &self.composite) {
            return Err(format!("composite {}→{} does not match the recorded matrix", self.m, self.n));
        }
        if self.lift.nrows() != target.relations().ncols() || self.lift.ncols() != self.composite.ncols() {
            return Err(format!("lift for {}→{} has the wrong shape", self.m, self.n));
        }
        let rl = ring.mul_matrices(target.relations(), &self.lift);
        if !ring.matrices_equal(&rl, &self.composite) {
            return Err(format!("lift for {}→{} does not reproduce the composite", self.m, self.n));
        }
        Ok(())
    }

    pub fn to_json(&self, ring: &PolyRing) -> ZeroMapJson {
        ZeroMapJson {
            n: self.n,
            m: self.m,
            composite: MatrixJson::from_matrix(ring, &self.composite),
            lift: MatrixJson::from_matrix(ring, &self.lift),
        }
    }

    pub fn from_json(ring: &PolyRing, j: &ZeroMapJson) -> Result<Self> {
        Ok(ZeroMapWitness { n: j.n, m: j.m, composite: j.composite.to_matrix(ring)?, lift: j.lift.to_matrix(ring)? })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroMapJson {
    pub n: usize,
    pub m: usize,
    pub composite: MatrixJson,
    pub lift: MatrixJson,
}

/// `Im φ_{n,m0} = Im φ_{n,W}`: the columns of `φ_{n,m0}` equal
/// `[φ_{n,W} | relations_n] · coefficients` modulo the ring ideal (the other
/// inclusion holds because `φ_{n,W}` factors through `φ_{n,m0}`).
#[derive(Debug, Clone, PartialEq)]
pub struct ImageWitness {
    pub n: usize,
    pub m0: usize,
    pub top: usize,
    pub coefficients: Matrix,
}

impl ImageWitness {
    fn check(&self, tower: &InverseTower) -> std::result::Result<(), String> {
        let ring = tower.ring();
        let err = |e: crate::Error| e.to_string();
        let low = tower.composite_matrix(self.n, self.m0).map_err(err)?;
        let high = tower.composite_matrix(self.n, self.top).map_err(err)?;
        let span = high.hcat(tower.level(self.n).relations());
        if self.coefficients.nrows() != span.ncols() || self.coefficients.ncols() != low.ncols() {
            return Err(format!("image coefficients at level {} have the wrong shape", self.n));
        }
        if !ring.matrices_equal(&ring.mul_matrices(&span, &self.coefficients), &low) {
            return Err(format!("image equality at level {} ({} vs {}) fails", self.n, self.m0, self.top));
        }
        Ok(())
    }

    pub fn to_json(&self, ring: &PolyRing) -> ImageJson {
        ImageJson { n: self.n, m0: self.m0, top: self.top, coefficients: MatrixJson::from_matrix(ring, &self.coefficients) }
    }

    pub fn from_json(ring: &PolyRing, j: &ImageJson) -> Result<Self> {
        Ok(ImageWitness { n: j.n, m0: j.m0, top: j.top, coefficients: j.coefficients.to_matrix(ring)? })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageJson {
    pub n: usize,
    pub m0: usize,
    pub top: usize,
    pub coefficients: MatrixJson,
}

/// Replayable evidence behind a verdict.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Witness {
    pub zero_maps: Vec<ZeroMapWitness>,
    pub images: Vec<ImageWitness>,
    /// Structural tags the verdict relies on (re-verified when the tower is
    /// rebuilt).
    pub tags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub verdict: Verdict,
    pub window: usize,
    pub witness: Witness,
    /// Levels for which no witness was found inside the window.
    pub failing_levels: Vec<usize>,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub verdict: Verdict,
    pub window: usize,
    #[serde(default)]
    pub zero_maps: Vec<ZeroMapJson>,
    #[serde(default)]
    pub images: Vec<ImageJson>,
    #[serde(default)]
    pub tags: Vec<String>,
    #[serde(default)]
    pub failing_levels: Vec<usize>,
    #[serde(default)]
    pub diagnostics: Vec<String>,
}

impl Certificate {
    fn new(verdict: Verdict, window: usize) -> Self {
        Certificate { verdict, window, witness: Witness::default(), failing_levels: Vec::new(), diagnostics: Vec::new() }
    }

    /// `n ↦ m(n)` from the zero-map witnesses.
    pub fn indices(&self) -> Vec<(usize, usize)> {
        self.witness.zero_maps.iter().map(|w| (w.n, w.m)).collect()
    }

    /// Re-verifies every recorded zero map and image equality against a
    /// freshly built tower.
    pub fn replay(&self, tower: &InverseTower) -> std::result::Result<(), String> {
        let covered = |levels: Vec<usize>| levels == (1..=half(self.window)).collect::<Vec<_>>();
        if self.verdict == Verdict::ProZero && !covered(self.witness.zero_maps.iter().map(|w| w.n).collect()) {
            return Err("pro-zero witnesses do not cover every level of the half window".into());
        }
        if self.window != tower.window() {
            return Err(format!("certificate window {} differs from tower window {}", self.window, tower.window()));
        }
        for w in &self.witness.zero_maps {
            if w.m < w.n || w.m > tower.window() || w.n == 0 {
                return Err(format!("witness levels {}→{} outside the tower", w.m, w.n));
            }
            let c = tower.composite_matrix(w.n, w.m).map_err(|e| e.to_string())?;
            w.check(tower.ring(), &c, tower.level(w.n))?;
        }
        for w in &self.witness.images {
            if w.m0 < w.n || w.top < w.m0 || w.top > tower.window() || w.n == 0 {
                return Err(format!("image witness levels at {} outside the tower", w.n));
            }
            w.check(tower)?;
        }
        for t in &self.witness.tags {
            let present = t == "PRO_ZERO" || tower.tags().iter().any(|x| x.name() == t);
            if !present {
                return Err(format!("tower does not carry the cited tag {t}"));
            }
        }
        Ok(())
    }

    pub fn replay_direct(&self, tower: &DirectTower) -> std::result::Result<(), String> {
        for w in &self.witness.zero_maps {
            if w.m < w.n || w.m > tower.window() || w.n == 0 {
                return Err(format!("witness levels {}→{} outside the tower", w.n, w.m));
            }
            let c = tower.composite_matrix(w.n, w.m).map_err(|e| e.to_string())?;
            w.check(tower.ring(), &c, tower.level(w.m))?;
        }
        Ok(())
    }

    pub fn to_json(&self, ring: &PolyRing) -> CertificateJson {
        CertificateJson {
            verdict: self.verdict,
            window: self.window,
            zero_maps: self.witness.zero_maps.iter().map(|w| w.to_json(ring)).collect(),
            images: self.witness.images.iter().map(|w| w.to_json(ring)).collect(),
            tags: self.witness.tags.clone(),
            failing_levels: self.failing_levels.clone(),
            diagnostics: self.diagnostics.clone(),
        }
    }

    pub fn from_json(ring: &PolyRing, j: &CertificateJson) -> Result<Self> {
        Ok(Certificate {
            verdict: j.verdict,
            window: j.window,
            witness: Witness {
                zero_maps: j.zero_maps.iter().map(|w| ZeroMapWitness::from_json(ring, w)).collect::<Result<_>>()?,
                images: j.images.iter().map(|w| ImageWitness::from_json(ring, w)).collect::<Result<_>>()?,
                tags: j.tags.clone(),
            },
            failing_levels: j.failing_levels.clone(),
            diagnostics: j.diagnostics.clone(),
        })
    }
}

fn half(window: usize) -> usize {
    window.div_ceil(2)
}

fn relation_lift(target: &FpModule, m: &Matrix) -> Result<Option<Matrix>> {
    let mut cols = Vec::with_capacity(m.ncols());
    for c in m.columns() {
        match target.relation_lift(c)? {
            Some(s) => cols.push(s),
            None => return Ok(None),
        }
    }
    Ok(Some(Matrix::from_columns(target.relations().ncols(), cols)))
}

fn surviving_generators(target: &FpModule, m: &Matrix) -> Vec<usize> {
    m.columns().iter().enumerate().filter(|(_, c)| !target.is_zero_element(c)).map(|(j, _)| j + 1).collect()
}

enum Search {
    Found(ZeroMapWitness),
    Missing { survivors: Vec<usize>, ngens: usize },
}

fn search_zero(tower: &InverseTower, n: usize) -> Result<Search> {
    let ring = tower.ring();
    let target = tower.level(n);
    let mut acc = Matrix::identity(ring.poly_ring(), target.ngens());
    for m in n..=tower.window() {
        if m > n {
            acc = ring.mul_matrices(&acc, tower.transition(m - 1).matrix());
        }
        if acc.columns().iter().all(|c| target.is_zero_element(c)) {
            let lift = relation_lift(target, &acc)?.expect("zero columns lift through the relations");
            return Ok(Search::Found(ZeroMapWitness { n, m, composite: acc, lift }));
        }
    }
    Ok(Search::Missing { survivors: surviving_generators(target, &acc), ngens: acc.ncols() })
}

/// For each `n ≤ ⌈W/2⌉` the least `m ≤ W` with `φ_{n,m} = 0`.
pub fn is_pro_zero(tower: &InverseTower) -> Result<Certificate> {
    let w = tower.window();
    let found = (1..=half(w)).into_par_iter().map(|n| search_zero(tower, n)).collect::<Result<Vec<_>>>()?;
    let mut zero_maps = Vec::new();
    let mut cert = Certificate::new(Verdict::ProZero, w);
    for (n, s) in (1..).zip(found) {
        match s {
            Search::Found(z) => zero_maps.push(z),
            Search::Missing { survivors, ngens } => {
                cert.failing_levels.push(n);
                cert.diagnostics.push(format!(
                    "level {n}: composites from levels {n}..{w} are all nonzero; at level {w} generator(s) {:?} of {ngens} survive",
                    survivors
                ));
            }
        }
    }
    if cert.failing_levels.is_empty() {
        cert.witness.zero_maps = zero_maps;
    } else {
        cert.verdict = Verdict::NotProZeroWithinWindow;
    }
    Ok(cert)
}

struct Stabilization {
    witness: Option<ImageWitness>,
    n: usize,
}

fn stabilization(tower: &InverseTower, n: usize) -> Result<Stabilization> {
    let w = tower.window();
    let ring = tower.ring();
    let level = tower.level(n);
    let mut composites = Vec::with_capacity(w - n + 1);
    let mut acc = Matrix::identity(ring.poly_ring(), level.ngens());
    composites.push(acc.clone());
    for m in n + 1..=w {
        acc = ring.mul_matrices(&acc, tower.transition(m - 1).matrix());
        composites.push(acc.clone());
    }
    let top = composites.last().expect("at least one composite");
    let span = top.hcat(level.relations());
    let lb = LiftingBasis::new(ring.ideal_basis(), &span)?;
    for (i, low) in composites.iter().enumerate().take(composites.len() - 1) {
        let lifts: Option<Vec<Vec<_>>> = low.columns().iter().map(|c| lb.lift(c)).collect();
        if let Some(cols) = lifts {
            let coefficients = Matrix::from_columns(span.ncols(), cols);
            return Ok(Stabilization { witness: Some(ImageWitness { n, m0: n + i, top: w, coefficients }), n });
        }
    }
    Ok(Stabilization { witness: None, n })
}

/// Pro-zero first, then image stabilization with a permanence tag.
pub fn is_mittag_leffler(tower: &InverseTower) -> Result<Certificate> {
    let w = tower.window();
    let pz = is_pro_zero(tower)?;
    if pz.verdict == Verdict::ProZero {
        let mut cert = Certificate::new(Verdict::MlCertified, w);
        cert.witness.zero_maps = pz.witness.zero_maps;
        cert.witness.tags.push("PRO_ZERO".into());
        return Ok(cert);
    }
    let stab = (1..=half(w)).into_par_iter().map(|n| stabilization(tower, n)).collect::<Result<Vec<_>>>()?;
    let mut cert = Certificate::new(Verdict::MlStabilizedWithinWindow, w);
    for s in stab {
        match s.witness {
            Some(iw) => cert.witness.images.push(iw),
            None => cert.failing_levels.push(s.n),
        }
    }
    let permanence = tower.tags().iter().find(|t| {
        matches!(
            t,
            StructuralTag::SurjectiveByConstruction
                | StructuralTag::FiniteLengthLevels
                | StructuralTag::EventuallyConstant { .. }
        )
    });
    match (permanence, cert.failing_levels.is_empty()) {
        (Some(tag), true) => {
            cert.verdict = Verdict::MlCertified;
            cert.witness.tags.push(tag.name().into());
        }
        (None, true) => {
            cert.diagnostics.push("images agree within the window but no structural tag certifies permanence".into());
        }
        (_, false) if tower.has_tag(StructuralTag::FiniteLengthLevels) => {
            cert.verdict = Verdict::MlCertified;
            cert.witness.tags.push(StructuralTag::FiniteLengthLevels.name().into());
            cert.diagnostics.push(format!(
                "levels of finite length: image chains stabilize, for levels {:?} beyond the window",
                cert.failing_levels
            ));
        }
        (_, false) => {
            cert.verdict = Verdict::NotMlWithinWindow;
            for &n in &cert.failing_levels {
                cert.diagnostics.push(format!("level {n}: images of levels {} and {w} differ", w - 1));
            }
            cert.diagnostics
                .push("for countable levels, failure of the condition at every stage would force lim¹ ≠ 0".into());
        }
    }
    Ok(cert)
}

/// Every generator of every level `n ≤ ⌈W/2⌉` dies by some level `≤ W`.
pub fn is_ind_zero(tower: &DirectTower) -> Result<Certificate> {
    let w = tower.window();
    let ring = tower.ring();
    let found = (1..=half(w))
        .into_par_iter()
        .map(|n| -> Result<std::result::Result<ZeroMapWitness, Vec<usize>>> {
            let mut acc = Matrix::identity(ring.poly_ring(), tower.level(n).ngens());
            for m in n..=w {
                if m > n {
                    acc = ring.mul_matrices(tower.transition(m - 1).matrix(), &acc);
                }
                let target = tower.level(m);
                if acc.columns().iter().all(|c| target.is_zero_element(c)) {
                    let lift = relation_lift(target, &acc)?.expect("zero columns lift through the relations");
                    return Ok(Ok(ZeroMapWitness { n, m, composite: acc, lift }));
                }
            }
            Ok(Err(surviving_generators(tower.level(w), &acc)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut cert = Certificate::new(Verdict::IndZero, w);
    let mut maps = Vec::new();
    for (n, f) in (1..).zip(found) {
        match f {
            Ok(z) => maps.push(z),
            Err(surv) => {
                cert.failing_levels.push(n);
                cert.diagnostics.push(format!("level {n}: generator(s) {surv:?} still nonzero at level {w}"));
            }
        }
    }
    if cert.failing_levels.is_empty() {
        cert.witness.zero_maps = maps;
    } else {
        cert.verdict = Verdict::NotIndZeroWithinWindow;
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn ring(dom: &str, vars: &[&str]) -> Arc<RingPresentation> {
        Arc::new(RingPresentation::parse(dom, vars, &[]).unwrap())
    }

    #[test]
    fn zero_tower_is_pro_zero_immediately() {
        let r = ring("QQ", &["x"]);
        let z = Arc::new(FpModule::zero(r.clone()).unwrap());
        let t = InverseTower::new("zero", vec![z; 4], vec![Matrix::zero(0, 0); 3], vec![]).unwrap();
        let c = is_pro_zero(&t).unwrap();
        assert_eq!(c.verdict, Verdict::ProZero);
        assert_eq!(c.indices(), vec![(1, 1), (2, 2)]);
        assert!(c.replay(&t).is_ok());
    }

    #[test]
    fn doubling_tower_is_not_mittag_leffler() {
        let r = ring("ZZ", &[]);
        let z = Arc::new(FpModule::free(r.clone(), 1).unwrap());
        let two = Matrix::scalar(1, &r.element("2").unwrap());
        let t = InverseTower::new("doubling", vec![z; 6], vec![two; 5], vec![]).unwrap();
        assert_eq!(is_pro_zero(&t).unwrap().verdict, Verdict::NotProZeroWithinWindow);
        let ml = is_mittag_leffler(&t).unwrap();
        assert_eq!(ml.verdict, Verdict::NotMlWithinWindow);
        assert_eq!(ml.failing_levels, vec![1, 2, 3]);
    }

    #[test]
    fn surjective_tower_is_mittag_leffler() {
        let r = ring("QQ", &["x"]);
        let t = InverseTower::from_rule(
            "adic",
            5,
            vec![StructuralTag::SurjectiveByConstruction],
            |n| Ok(Arc::new(FpModule::cyclic(r.clone(), &[r.pow(&r.element("x")?, n as u32)])?)),
            |_, _, _| Ok(Matrix::identity(r.poly_ring(), 1)),
        )
        .unwrap();
        let ml = is_mittag_leffler(&t).unwrap();
        assert_eq!(ml.verdict, Verdict::MlCertified);
        assert!(ml.witness.images.iter().all(|w| w.m0 == w.n));
        assert!(ml.replay(&t).is_ok());
    }

    #[test]
    fn tampered_lift_fails_replay() {
        let r = ring("QQ", &["x"]);
        let m = Arc::new(FpModule::cyclic(r.clone(), &[r.element("x^2").unwrap()]).unwrap());
        let x = Matrix::scalar(1, &r.element("x").unwrap());
        let t = InverseTower::new("times x", vec![m; 4], vec![x; 3], vec![]).unwrap();
        let mut c = is_pro_zero(&t).unwrap();
        assert_eq!(c.indices(), vec![(1, 3), (2, 4)]);
        assert!(c.replay(&t).is_ok());
        let w = &mut c.witness.zero_maps[0];
        w.lift.set(0, 0, r.element("2").unwrap());
        assert!(c.replay(&t).is_err());
    }

    #[test]
    fn direct_towers() {
        let r = ring("QQ", &["x"]);
        let m = Arc::new(FpModule::cyclic(r.clone(), &[r.element("x^2").unwrap()]).unwrap());
        let x = Matrix::scalar(1, &r.element("x").unwrap());
        let t = DirectTower::new("times x", vec![m.clone(); 4], vec![x; 3]).unwrap();
        let c = is_ind_zero(&t).unwrap();
        assert_eq!(c.verdict, Verdict::IndZero);
        assert!(c.replay_direct(&t).is_ok());
        let id = Matrix::identity(r.poly_ring(), 1);
        let t = DirectTower::new("identity", vec![m; 4], vec![id; 3]).unwrap();
        assert_eq!(is_ind_zero(&t).unwrap().verdict, Verdict::NotIndZeroWithinWindow);
    }
}
