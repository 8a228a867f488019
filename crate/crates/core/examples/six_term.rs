//! The six-term sequence for `0 → xⁿM → M → M/xⁿM → 0`, `M = ℚ[x]/(x³)`.

use std::sync::Arc;

use proreg::fpmod::{FpModule, Subquotient};
use proreg::kernel::Matrix;
use proreg::rings::RingPresentation;
use proreg::towers::{six_term_check, InverseTower, StructuralTag, TowerSes};

fn main() -> proreg::Result<()> {
    let w = 8;
    let ring = Arc::new(RingPresentation::parse("QQ", &["x"], &[])?);
    let x = ring.element("x")?;
    let id = Matrix::identity(ring.poly_ring(), 1);
    let m = Arc::new(FpModule::cyclic(ring.clone(), &[ring.pow(&x, 3)])?);

    let subs = (1..=w as u32)
        .map(|n| Subquotient::new(m.clone(), Matrix::from_columns(1, vec![vec![ring.pow(&x, n)]]), Matrix::empty(1)))
        .collect::<proreg::Result<Vec<_>>>()?;
    let inclusions = (1..w)
        .map(|n| Ok(subs[n].induced_map(&subs[n - 1], &id)?.matrix().clone()))
        .collect::<proreg::Result<Vec<_>>>()?;
    let a = InverseTower::new("x^n M", subs.iter().map(|s| s.module.clone()).collect(), inclusions, vec![])?;
    let quotients = (1..=w as u32)
        .map(|n| m.tensor_quotient(&[ring.pow(&x, n)]).map(Arc::new))
        .collect::<proreg::Result<Vec<_>>>()?;
    let tags = vec![StructuralTag::SurjectiveByConstruction, StructuralTag::EventuallyConstant { from: 3 }];
    let c = InverseTower::new("M/x^n M", quotients, vec![id.clone(); w - 1], tags)?;

    let ses = TowerSes {
        a,
        b: InverseTower::constant("M", m, w)?,
        c,
        f: subs.iter().map(|s| s.representatives().clone()).collect(),
        g: vec![id; w],
    };
    let rep = six_term_check(&ses)?;
    println!("six-term sequence: {} (limits realized at level {:?})", rep.status.name(), rep.level);
    for (name, l) in ["A", "B", "C"].iter().zip(&rep.limits) {
        println!("  {name}: lim {}, lim¹ {} ({})", l.lim.name(), l.lim1.name(), l.rule);
    }
    Ok(())
}
