//! Inverse and direct systems of finitely presented modules indexed by
//! `1..=W`, with certified pro-zero, Mittag-Leffler and lim/lim¹ verdicts.

mod bitower;
mod certificate;
mod lim;

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fpmod::{FpModule, ModuleMap};
use crate::kernel::Matrix;
use crate::rings::RingPresentation;

pub use bitower::{bi_pro_zero_equivalence, BiProZeroReport, BiTower, CellWitness};
pub use certificate::{
    is_ind_zero, is_mittag_leffler, is_pro_zero, Certificate, CertificateJson, ImageJson, ImageWitness, Verdict, Witness,
    ZeroMapJson, ZeroMapWitness,
};
pub use lim::{lim_lim1, six_term_check, Lim1Status, LimEvidence, LimReport, LimStatus, SixTermReport, SixTermStatus, TowerSes,
    VANISHING_WITHOUT_PRO_ZERO};

pub const DEFAULT_WINDOW: usize = 8;

/// Structural facts asserted by a tower's construction rule. Each tag is
/// re-verified on the materialized levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructuralTag {
    SurjectiveByConstruction,
    FiniteLengthLevels,
    /// The transitions `M_{n+1} → M_n` with `n ≥ from` are isomorphisms.
    EventuallyConstant { from: usize },
}

impl StructuralTag {
    pub fn name(&self) -> &'static str {
        match self {
            StructuralTag::SurjectiveByConstruction => "SURJECTIVE_BY_CONSTRUCTION",
            StructuralTag::FiniteLengthLevels => "FINITE_LENGTH_LEVELS",
            StructuralTag::EventuallyConstant { .. } => "EVENTUALLY_CONSTANT_BY_CONSTRUCTION",
        }
    }
}

/// `M_1 ← M_2 ← … ← M_W`. `transition(n)` is the map `M_{n+1} → M_n`.
#[derive(Debug, Clone)]
pub struct InverseTower {
    ring: Arc<RingPresentation>,
    label: String,
    levels: Vec<Arc<FpModule>>,
    transitions: Vec<ModuleMap>,
    tags: Vec<StructuralTag>,
}

fn check_window(window: usize) -> Result<()> {
    if window < 2 {
        return Err(Error::Invalid(format!("window must be at least 2, got {window}")));
    }
    Ok(())
}

impl InverseTower {
    /// Builds a tower from explicit levels and transition matrices
    /// (`matrices[n-1]` presents `M_{n+1} → M_n`) and verifies every tag.
    pub fn new(
        label: impl Into<String>,
        levels: Vec<Arc<FpModule>>,
        matrices: Vec<Matrix>,
        tags: Vec<StructuralTag>,
    ) -> Result<Self> {
        check_window(levels.len())?;
        if matrices.len() + 1 != levels.len() {
            return Err(Error::Invalid(format!(
                "{} levels need {} transitions, got {}",
                levels.len(),
                levels.len() - 1,
                matrices.len()
            )));
        }
        let ring = levels[0].ring().clone();
        let transitions = matrices
            .into_par_iter()
            .enumerate()
            .map(|(i, m)| ModuleMap::new(levels[i + 1].clone(), levels[i].clone(), m))
            .collect::<Result<Vec<_>>>()?;
        let tower = InverseTower { ring, label: label.into(), levels, transitions, tags };
        tower.verify_tags()?;
        Ok(tower)
    }

    /// Levels and transitions generated by rules evaluated concurrently.
    pub fn from_rule<L, T>(label: impl Into<String>, window: usize, tags: Vec<StructuralTag>, level: L, transition: T) -> Result<Self>
    where
        L: Fn(usize) -> Result<Arc<FpModule>> + Sync,
        T: Fn(usize, &FpModule, &FpModule) -> Result<Matrix> + Sync,
    {
        check_window(window)?;
        let levels = (1..=window).into_par_iter().map(&level).collect::<Result<Vec<_>>>()?;
        let matrices = (1..window)
            .into_par_iter()
            .map(|n| transition(n, &levels[n], &levels[n - 1]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(label, levels, matrices, tags)
    }

    /// The same module at every level with identity transitions.
    pub fn constant(label: impl Into<String>, m: Arc<FpModule>, window: usize) -> Result<Self> {
        let id = Matrix::identity(m.ring().poly_ring(), m.ngens());
        let levels = vec![m; window];
        let matrices = vec![id; window.saturating_sub(1)];
        Self::new(label, levels, matrices, vec![StructuralTag::EventuallyConstant { from: 1 }])
    }

    fn verify_tags(&self) -> Result<()> {
        for tag in &self.tags {
            let ok = match tag {
                StructuralTag::SurjectiveByConstruction => {
                    self.transitions.par_iter().map(ModuleMap::is_surjective).collect::<Result<Vec<_>>>()?.into_iter().all(|b| b)
                }
                StructuralTag::FiniteLengthLevels => self.levels.par_iter().all(|m| m.has_finite_length()),
                StructuralTag::EventuallyConstant { from } => {
                    if *from == 0 || *from > self.window() {
                        false
                    } else {
                        self.transitions[from - 1..]
                            .par_iter()
                            .map(ModuleMap::is_isomorphism)
                            .collect::<Result<Vec<_>>>()?
                            .into_iter()
                            .all(|b| b)
                    }
                }
            };
            if !ok {
                return Err(Error::Invalid(format!("tag {} does not hold on tower {}", tag.name(), self.label)));
            }
        }
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ring
    }

    pub fn window(&self) -> usize {
        self.levels.len()
    }

    pub fn tags(&self) -> &[StructuralTag] {
        &self.tags
    }

    pub fn has_tag(&self, tag: StructuralTag) -> bool {
        self.tags.contains(&tag)
    }

    pub fn eventually_constant_from(&self) -> Option<usize> {
        self.tags.iter().find_map(|t| match t {
            StructuralTag::EventuallyConstant { from } => Some(*from),
            _ => None,
        })
    }

    /// `M_n`, 1-based.
    pub fn level(&self, n: usize) -> &Arc<FpModule> {
        &self.levels[n - 1]
    }

    pub fn levels(&self) -> &[Arc<FpModule>] {
        &self.levels
    }

    /// `M_{n+1} → M_n`.
    pub fn transition(&self, n: usize) -> &ModuleMap {
        &self.transitions[n - 1]
    }

    /// Matrix of the composite `M_m → M_n` as a product of transition
    /// matrices, reduced only modulo the ring ideal.
    pub fn composite_matrix(&self, n: usize, m: usize) -> Result<Matrix> {
        if m < n || m > self.window() || n == 0 {
            return Err(Error::BadLevels { source_level: m, target_level: n });
        }
        let p = self.ring.poly_ring();
        let mut acc = Matrix::identity(p, self.level(n).ngens());
        for k in n..m {
            acc = self.ring.mul_matrices(&acc, self.transition(k).matrix());
        }
        Ok(acc)
    }

    pub fn composite(&self, n: usize, m: usize) -> Result<ModuleMap> {
        let mat = self.composite_matrix(n, m)?;
        ModuleMap::new(self.level(m).clone(), self.level(n).clone(), mat)
    }

    /// The first `w` levels.
    pub fn truncate(&self, w: usize) -> Result<InverseTower> {
        check_window(w)?;
        let w = w.min(self.window());
        let tags = self
            .tags
            .iter()
            .copied()
            .filter(|t| !matches!(t, StructuralTag::EventuallyConstant { from } if *from >= w))
            .collect();
        Ok(InverseTower {
            ring: self.ring.clone(),
            label: self.label.clone(),
            levels: self.levels[..w].to_vec(),
            transitions: self.transitions[..w - 1].to_vec(),
            tags,
        })
    }
}

/// `D_1 → D_2 → … → D_W`. `transition(n)` is the map `D_n → D_{n+1}`.
#[derive(Debug, Clone)]
pub struct DirectTower {
    ring: Arc<RingPresentation>,
    label: String,
    levels: Vec<Arc<FpModule>>,
    transitions: Vec<ModuleMap>,
}

impl DirectTower {
    /// `matrices[n-1]` presents `D_n → D_{n+1}`.
    pub fn new(label: impl Into<String>, levels: Vec<Arc<FpModule>>, matrices: Vec<Matrix>) -> Result<Self> {
        check_window(levels.len())?;
        if matrices.len() + 1 != levels.len() {
            return Err(Error::Invalid("direct tower needs one transition per adjacent pair of levels".into()));
        }
        let ring = levels[0].ring().clone();
        let transitions = matrices
            .into_par_iter()
            .enumerate()
            .map(|(i, m)| ModuleMap::new(levels[i].clone(), levels[i + 1].clone(), m))
            .collect::<Result<Vec<_>>>()?;
        Ok(DirectTower { ring, label: label.into(), levels, transitions })
    }

    pub fn from_rule<L, T>(label: impl Into<String>, window: usize, level: L, transition: T) -> Result<Self>
    where
        L: Fn(usize) -> Result<Arc<FpModule>> + Sync,
        T: Fn(usize, &FpModule, &FpModule) -> Result<Matrix> + Sync,
    {
        check_window(window)?;
        let levels = (1..=window).into_par_iter().map(&level).collect::<Result<Vec<_>>>()?;
        let matrices = (1..window)
            .into_par_iter()
            .map(|n| transition(n, &levels[n - 1], &levels[n]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(label, levels, matrices)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ring
    }

    pub fn window(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, n: usize) -> &Arc<FpModule> {
        &self.levels[n - 1]
    }

    pub fn transition(&self, n: usize) -> &ModuleMap {
        &self.transitions[n - 1]
    }

    /// Matrix of `D_n → D_m`, `m ≥ n`.
    pub fn composite_matrix(&self, n: usize, m: usize) -> Result<Matrix> {
        if m < n || m > self.window() || n == 0 {
            return Err(Error::BadLevels { source_level: n, target_level: m });
        }
        let mut acc = Matrix::identity(self.ring.poly_ring(), self.level(n).ngens());
        for k in n..m {
            acc = self.ring.mul_matrices(self.transition(k).matrix(), &acc);
        }
        Ok(acc)
    }
}
