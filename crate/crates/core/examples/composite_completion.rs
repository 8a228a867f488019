//! Completion along `x` of the `y`-adic tower of `ℚ[x,y]/(xy)`.

use std::sync::Arc;

use proreg::completion::{composite_completion_check, replay_composite_isomorphisms, Filtration};
use proreg::fpmod::FpModule;
use proreg::koszul::SequenceSpec;
use proreg::rings::{Ideal, RingPresentation};

fn main() -> proreg::Result<()> {
    let ring = Arc::new(RingPresentation::parse("QQ", &["x", "y"], &["x*y"])?);
    let m = Arc::new(FpModule::free(ring.clone(), 1)?);
    let f = Filtration::ideal_powers(m, &Ideal::new(ring.clone(), vec![ring.element("y")?])?, 8)?;
    let seq = SequenceSpec::parse(ring, &["x"])?;
    let rep = composite_completion_check(&f, &seq)?;
    println!("{}", rep.status.name());
    if let Some(route) = &rep.vanishing_route {
        println!("  vanishing: {route}");
    }
    println!("  natural {}, diagonal consistent {}", rep.natural, rep.diagonal.holds());
    println!("  level isomorphisms replay: {}", replay_composite_isomorphisms(&f, &seq, &rep.level_isomorphisms)?);
    Ok(())
}
