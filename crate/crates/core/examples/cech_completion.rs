//! Čech homology against the adic completion.

use std::sync::Arc;

use proreg::completion::cech_homology_report;
use proreg::fpmod::FpModule;
use proreg::koszul::SequenceSpec;
use proreg::rings::RingPresentation;

fn main() -> proreg::Result<()> {
    let ring = Arc::new(RingPresentation::parse("QQ", &["x"], &[])?);
    let m = Arc::new(FpModule::cyclic(ring.clone(), &[ring.element("x^3")?])?);
    let seq = SequenceSpec::parse(ring, &["x"])?;
    let rep = cech_homology_report(0, &seq, &m, 8)?;
    println!("Q[x]/(x^3), degree 0: {}", rep.conclusion.name());
    if let Some(c) = rep.upper.as_ref().and_then(|u| u.evidence.certificate.as_ref()) {
        println!("  H_1 tower {} with m(n) = {:?}", c.verdict.name(), c.indices());
    }

    let poly = Arc::new(RingPresentation::parse("QQ", &["x", "y"], &[])?);
    let free = Arc::new(FpModule::free(poly.clone(), 1)?);
    let seq = SequenceSpec::parse(poly, &["x", "y"])?;
    for i in 0..=2 {
        println!("Q[x,y], degree {i}: {}", cech_homology_report(i, &seq, &free, 8)?.conclusion.name());
    }
    Ok(())
}
