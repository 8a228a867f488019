//! `lim` and `lim¹` by certified rules, including `ℤ ← ℤ ← …` under `×2`.

use std::sync::Arc;

use proreg::completion::adic_tower;
use proreg::fpmod::FpModule;
use proreg::kernel::Matrix;
use proreg::koszul::SequenceSpec;
use proreg::rings::RingPresentation;
use proreg::towers::{is_mittag_leffler, lim_lim1, InverseTower, LimStatus};

fn main() -> proreg::Result<()> {
    let z = Arc::new(RingPresentation::parse("ZZ", &[], &[])?);
    let zmod = Arc::new(FpModule::free(z.clone(), 1)?);
    let two = Matrix::from_columns(1, vec![vec![z.element("2")?]]);
    let doubling = InverseTower::new("Z <-2- Z", vec![zmod; 8], vec![two; 7], vec![])?;
    println!("{}: {}", doubling.label(), is_mittag_leffler(&doubling)?.verdict.name());
    let rep = lim_lim1(&doubling)?;
    println!("  lim {}, lim¹ {} ({})", rep.lim.name(), rep.lim1.name(), rep.rule);
    for d in &rep.diagnostics {
        println!("  {d}");
    }

    let q = Arc::new(RingPresentation::parse("QQ", &["x"], &["x^2"])?);
    let m = Arc::new(FpModule::free(q.clone(), 1)?);
    let constant = InverseTower::constant("constant Q[x]/(x^2)", m.clone(), 8)?;
    let rep = lim_lim1(&constant)?;
    if let LimStatus::Presented { module, at } = &rep.lim {
        println!("{}: lim ≅ level {at} = {}", constant.label(), module.describe());
    }
    let adic = adic_tower(&m, &SequenceSpec::parse(q, &["x"])?, 8)?;
    let rep = lim_lim1(&adic)?;
    println!("{}: lim {}, lim¹ {} ({})", adic.label(), rep.lim.name(), rep.lim1.name(), rep.rule);
    Ok(())
}
