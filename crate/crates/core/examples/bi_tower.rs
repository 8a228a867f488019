//! A bi-indexed system and its diagonal are pro-zero together.

use std::sync::Arc;

use proreg::completion::{filtration_bitower, Filtration};
use proreg::fpmod::FpModule;
use proreg::koszul::SequenceSpec;
use proreg::rings::{Ideal, RingPresentation};
use proreg::towers::bi_pro_zero_equivalence;

fn main() -> proreg::Result<()> {
    let ring = Arc::new(RingPresentation::parse("QQ", &["x", "y"], &["x*y"])?);
    let m = Arc::new(FpModule::free(ring.clone(), 1)?);
    let y = Ideal::new(ring.clone(), vec![ring.element("y")?])?;
    let f = Filtration::ideal_powers(m, &y, 6)?;
    let bt = filtration_bitower(&f, &SequenceSpec::parse(ring, &["x"])?)?;
    let rep = bi_pro_zero_equivalence(&bt)?;
    println!("{}", bt.label());
    println!("  bi-indexed {}, diagonal {}", rep.bi_verdict.name(), rep.diagonal.verdict.name());
    println!("  agree {}, cross-checked {}", rep.agree, rep.cross_checked);
    for w in rep.cell_witnesses.iter().take(4) {
        println!("  cell {:?} killed from {:?}", w.target, w.source);
    }
    Ok(())
}
