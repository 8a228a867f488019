use std::sync::Arc;

use rayon::prelude::*;

use super::certificate::{is_pro_zero, Certificate, Verdict};
use super::InverseTower;
use crate::error::{Error, Result};
use crate::fpmod::{FpModule, ModuleMap};
use crate::kernel::Matrix;
use crate::rings::RingPresentation;

/// Modules `B(n, m)` for `1 ≤ n, m ≤ W` with horizontal maps
/// `B(n+1, m) → B(n, m)` and vertical maps `B(n, m+1) → B(n, m)`.
#[derive(Debug, Clone)]
pub struct BiTower {
    ring: Arc<RingPresentation>,
    label: String,
    window: usize,
    cells: Vec<Arc<FpModule>>,
    horizontal: Vec<ModuleMap>,
    vertical: Vec<ModuleMap>,
}

impl BiTower {
    /// `h(n, m, src, dst)` presents `B(n+1, m) → B(n, m)`, `v(n, m, src, dst)`
    /// presents `B(n, m+1) → B(n, m)`. Every square is checked to commute.
    pub fn from_rule<C, H, V>(label: impl Into<String>, window: usize, cell: C, h: H, v: V) -> Result<Self>
    where
        C: Fn(usize, usize) -> Result<Arc<FpModule>> + Sync,
        H: Fn(usize, usize, &FpModule, &FpModule) -> Result<Matrix> + Sync,
        V: Fn(usize, usize, &FpModule, &FpModule) -> Result<Matrix> + Sync,
    {
        if window < 2 {
            return Err(Error::Invalid(format!("window must be at least 2, got {window}")));
        }
        let w = window;
        let idx = |n: usize, m: usize| (n - 1) * w + (m - 1);
        let cells = (0..w * w)
            .into_par_iter()
            .map(|i| cell(i / w + 1, i % w + 1))
            .collect::<Result<Vec<_>>>()?;
        // horizontal maps indexed by (n, m) with n < W, stored row-major over n
        let horizontal = (0..(w - 1) * w)
            .into_par_iter()
            .map(|i| {
                let (n, m) = (i / w + 1, i % w + 1);
                let (src, dst) = (&cells[idx(n + 1, m)], &cells[idx(n, m)]);
                ModuleMap::new(src.clone(), dst.clone(), h(n, m, src, dst)?)
            })
            .collect::<Result<Vec<_>>>()?;
        let vertical = (0..w * (w - 1))
            .into_par_iter()
            .map(|i| {
                let (n, m) = (i / (w - 1) + 1, i % (w - 1) + 1);
                let (src, dst) = (&cells[idx(n, m + 1)], &cells[idx(n, m)]);
                ModuleMap::new(src.clone(), dst.clone(), v(n, m, src, dst)?)
            })
            .collect::<Result<Vec<_>>>()?;
        let ring = cells[0].ring().clone();
        let bt = BiTower { ring, label: label.into(), window, cells, horizontal, vertical };
        bt.verify_squares()?;
        Ok(bt)
    }

    fn verify_squares(&self) -> Result<()> {
        let w = self.window;
        let bad = (1..w)
            .flat_map(|n| (1..w).map(move |m| (n, m)))
            .collect::<Vec<_>>()
            .into_par_iter()
            .find_first(|&(n, m)| {
                let a = self.ring.mul_matrices(self.horizontal(n, m).matrix(), self.vertical(n + 1, m).matrix());
                let b = self.ring.mul_matrices(self.vertical(n, m).matrix(), self.horizontal(n, m + 1).matrix());
                let d = a.sub(self.ring.poly_ring(), &b);
                d.columns().iter().any(|c| !self.cell(n, m).is_zero_element(c))
            });
        match bad {
            Some((n, m)) => Err(Error::Invalid(format!("square at ({n}, {m}) of {} does not commute", self.label))),
            None => Ok(()),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ring
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn cell(&self, n: usize, m: usize) -> &Arc<FpModule> {
        &self.cells[(n - 1) * self.window + (m - 1)]
    }

    /// `B(n+1, m) → B(n, m)`.
    pub fn horizontal(&self, n: usize, m: usize) -> &ModuleMap {
        &self.horizontal[(n - 1) * self.window + (m - 1)]
    }

    /// `B(n, m+1) → B(n, m)`.
    pub fn vertical(&self, n: usize, m: usize) -> &ModuleMap {
        &self.vertical[(n - 1) * (self.window - 1) + (m - 1)]
    }

    /// Matrix of `B(n2, m2) → B(n, m)`: down the column `n2`, then along the
    /// row `m`.
    pub fn composite_matrix(&self, (n, m): (usize, usize), (n2, m2): (usize, usize)) -> Result<Matrix> {
        if n2 < n || m2 < m || n == 0 || m == 0 || n2 > self.window || m2 > self.window {
            return Err(Error::BadLevels { source_level: n2.max(m2), target_level: n.min(m) });
        }
        let p = self.ring.poly_ring();
        let mut acc = Matrix::identity(p, self.cell(n, m).ngens());
        for k in n..n2 {
            acc = self.ring.mul_matrices(&acc, self.horizontal(k, m).matrix());
        }
        for k in m..m2 {
            acc = self.ring.mul_matrices(&acc, self.vertical(n2, k).matrix());
        }
        Ok(acc)
    }

    fn composite_is_zero(&self, target: (usize, usize), source: (usize, usize)) -> Result<bool> {
        let c = self.composite_matrix(target, source)?;
        let cell = self.cell(target.0, target.1);
        Ok(c.columns().iter().all(|col| cell.is_zero_element(col)))
    }

    /// `n ↦ B(n, n)` with transitions through `B(n+1, n)`.
    pub fn diagonal(&self) -> Result<InverseTower> {
        let w = self.window;
        let levels = (1..=w).map(|n| self.cell(n, n).clone()).collect();
        let matrices = (1..w)
            .map(|n| self.ring.mul_matrices(self.horizontal(n, n).matrix(), self.vertical(n + 1, n).matrix()))
            .collect();
        InverseTower::new(format!("diagonal of {}", self.label), levels, matrices, vec![])
    }
}

/// `B(source) → B(target)` is zero; `lift` expresses the composite through
/// the relations of the target cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellWitness {
    pub target: (usize, usize),
    pub source: (usize, usize),
    pub lift: Matrix,
}

impl CellWitness {
    pub fn check(&self, bt: &BiTower) -> std::result::Result<(), String> {
        let (n, m) = self.target;
        let (a, b) = self.source;
        let w = bt.window();
        if n == 0 || m == 0 || a < n || b < m || a > w || b > w {
            return Err(format!("cell witness {:?}→{:?} outside the window", self.source, self.target));
        }
        let c = bt.composite_matrix(self.target, self.source).map_err(|e| e.to_string())?;
        let cell = bt.cell(n, m);
        let ring = bt.ring();
        if self.lift.nrows() != cell.relations().ncols() || self.lift.ncols() != c.ncols() {
            return Err(format!("cell witness {:?}→{:?} has the wrong shape", self.source, self.target));
        }
        if !ring.matrices_equal(&ring.mul_matrices(cell.relations(), &self.lift), &c) {
            return Err(format!("cell witness {:?}→{:?} does not reproduce the composite", self.source, self.target));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct BiProZeroReport {
    pub bi_verdict: Verdict,
    pub cell_witnesses: Vec<CellWitness>,
    pub failing_cells: Vec<(usize, usize)>,
    pub diagonal: Certificate,
    /// Both verdicts coincide.
    pub agree: bool,
    /// Each side's witnesses were converted into witnesses for the other
    /// side and re-verified.
    pub cross_checked: bool,
    pub diagnostics: Vec<String>,
}

impl BiProZeroReport {
    pub fn holds(&self) -> bool {
        self.agree && self.cross_checked
    }
}

fn search_cell(bt: &BiTower, n: usize, m: usize) -> Result<Option<CellWitness>> {
    let w = bt.window();
    let mut candidates: Vec<(usize, usize)> = (n..=w).flat_map(|a| (m..=w).map(move |b| (a, b))).collect();
    candidates.sort_by_key(|&(a, b)| (a.max(b), a + b, a));
    for src in candidates {
        let c = bt.composite_matrix((n, m), src)?;
        let cell = bt.cell(n, m);
        if c.columns().iter().all(|col| cell.is_zero_element(col)) {
            let mut cols = Vec::with_capacity(c.ncols());
            for col in c.columns() {
                cols.push(cell.relation_lift(col)?.expect("zero column lifts through the relations"));
            }
            let lift = Matrix::from_columns(cell.relations().ncols(), cols);
            return Ok(Some(CellWitness { target: (n, m), source: src, lift }));
        }
    }
    Ok(None)
}

/// Independent pro-zero searches on the bi-indexed system and on its
/// diagonal, each side's witnesses then transported to the other.
pub fn bi_pro_zero_equivalence(bt: &BiTower) -> Result<BiProZeroReport> {
    let w = bt.window();
    let h = w.div_ceil(2);
    let cells: Vec<(usize, usize)> = (1..=h).flat_map(|n| (1..=h).map(move |m| (n, m))).collect();
    let found = cells.par_iter().map(|&(n, m)| search_cell(bt, n, m)).collect::<Result<Vec<_>>>()?;
    let mut cell_witnesses = Vec::new();
    let mut failing_cells = Vec::new();
    for (cell, f) in cells.iter().zip(found) {
        match f {
            Some(wt) => cell_witnesses.push(wt),
            None => failing_cells.push(*cell),
        }
    }
    let bi_verdict =
        if failing_cells.is_empty() { Verdict::ProZero } else { Verdict::NotProZeroWithinWindow };
    let diagonal_tower = bt.diagonal()?;
    let diagonal = is_pro_zero(&diagonal_tower)?;
    let mut diagnostics = Vec::new();
    let mut cross_checked = true;
    if bi_verdict == Verdict::ProZero {
        // B(k, k) → B(n, n) factors through the witnessing cell
        for wt in cell_witnesses.iter().filter(|wt| wt.target.0 == wt.target.1) {
            let k = wt.source.0.max(wt.source.1);
            if !bt.composite_is_zero(wt.target, (k, k))? {
                cross_checked = false;
                diagnostics.push(format!("diagonal composite {k}→{} is nonzero", wt.target.0));
            }
        }
    }
    if diagonal.verdict == Verdict::ProZero {
        for &(n, m) in &cells {
            let k = n.max(m);
            let Some(z) = diagonal.witness.zero_maps.iter().find(|z| z.n == k) else {
                cross_checked = false;
                continue;
            };
            if !bt.composite_is_zero((n, m), (z.m, z.m))? {
                cross_checked = false;
                diagnostics.push(format!("cell composite ({0}, {0})→({n}, {m}) is nonzero", z.m));
            }
        }
    }
    let agree = bi_verdict == diagonal.verdict;
    if !agree {
        diagnostics.push(format!("bi-indexed verdict {} but diagonal verdict {}", bi_verdict.name(), diagonal.verdict.name()));
    }
    for c in &failing_cells {
        diagnostics.push(format!("cell {c:?}: every composite from cells within window {w} is nonzero"));
    }
    Ok(BiProZeroReport { bi_verdict, cell_witnesses, failing_cells, diagonal, agree, cross_checked, diagnostics })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_nonzero_bitower_fails_on_both_sides() {
        let r = Arc::new(RingPresentation::parse("QQ", &["x"], &[]).unwrap());
        let m = Arc::new(FpModule::cyclic(r.clone(), &[r.element("x").unwrap()]).unwrap());
        let id = |_: usize, _: usize, _: &FpModule, _: &FpModule| Ok(Matrix::identity(r.poly_ring(), 1));
        let bt = BiTower::from_rule("const", 4, |_, _| Ok(m.clone()), id, id).unwrap();
        let rep = bi_pro_zero_equivalence(&bt).unwrap();
        assert_eq!(rep.bi_verdict, Verdict::NotProZeroWithinWindow);
        assert_eq!(rep.diagonal.verdict, Verdict::NotProZeroWithinWindow);
        assert!(rep.holds());
    }

    #[test]
    fn nilpotent_bitower_is_pro_zero_on_both_sides() {
        let r = Arc::new(RingPresentation::parse("QQ", &["x"], &[]).unwrap());
        let m = Arc::new(FpModule::cyclic(r.clone(), &[r.element("x^3").unwrap()]).unwrap());
        let x = |_: usize, _: usize, _: &FpModule, _: &FpModule| Ok(Matrix::scalar(1, &r.element("x").unwrap()));
        let id = |_: usize, _: usize, _: &FpModule, _: &FpModule| Ok(Matrix::identity(r.poly_ring(), 1));
        let bt = BiTower::from_rule("nil", 6, |_, _| Ok(m.clone()), x, id).unwrap();
        let rep = bi_pro_zero_equivalence(&bt).unwrap();
        assert_eq!(rep.bi_verdict, Verdict::ProZero);
        assert_eq!(rep.diagonal.verdict, Verdict::ProZero);
        assert!(rep.holds());
        assert_eq!(rep.cell_witnesses[0].source, (4, 1));
    }
}
