//! Koszul homology of `(x, y)` on `ℚ[x,y]/(x², xy)` for a few exponents.

use std::sync::Arc;

use proreg::fpmod::FpModule;
use proreg::koszul::{KoszulLevel, SequenceSpec};
use proreg::rings::RingPresentation;

fn main() -> proreg::Result<()> {
    let ring = Arc::new(RingPresentation::parse("QQ", &["x", "y"], &[])?);
    let m = Arc::new(FpModule::cyclic(ring.clone(), &[ring.element("x^2")?, ring.element("x*y")?])?);
    let seq = SequenceSpec::parse(ring.clone(), &["x", "y"])?;
    for n in 1..=3 {
        let level = KoszulLevel::new(&seq, n, m.clone())?;
        for i in 0..=seq.len() {
            let h = level.homology(i)?;
            println!("H_{i}(x^{n}, y^{n}; M) = {}", h.module.describe());
        }
    }
    Ok(())
}
