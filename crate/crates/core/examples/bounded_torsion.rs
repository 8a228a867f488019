//! Bounded torsion and escalation witnesses on
//! `ℚ[x, y1, …, y10]/(x y1, x² y2, …, x¹⁰ y10)`.

use std::sync::Arc;

use proreg::fpmod::FpModule;
use proreg::rings::RingPresentation;
use proreg::regularity::is_bounded_torsion;

fn main() -> proreg::Result<()> {
    let n = 10;
    let vars: Vec<String> = std::iter::once("x".to_string()).chain((1..=n).map(|k| format!("y{k}"))).collect();
    let rels: Vec<String> = (1..=n).map(|k| format!("x^{k}*y{k}")).collect();
    let vars: Vec<&str> = vars.iter().map(String::as_str).collect();
    let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
    let ring = Arc::new(RingPresentation::parse("QQ", &vars, &rels)?);
    let m = Arc::new(FpModule::free(ring.clone(), 1)?);
    let x = ring.element("x")?;

    let rep = is_bounded_torsion(&m, &x, 8)?;
    println!("window 8: {}", rep.verdict.name());
    for w in &rep.escalation {
        println!("  k = {}: {} (verified {})", w.k, ring.format(&w.element[0]), w.verify(&m, &x));
    }

    let small = Arc::new(FpModule::cyclic(ring.clone(), &[ring.pow(&x, 3)])?);
    let rep = is_bounded_torsion(&small, &x, 8)?;
    println!("R/(x^3): {} at index {:?}", rep.verdict.name(), rep.index);
    Ok(())
}
