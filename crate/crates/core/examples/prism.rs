//! `p ∈ ℐ + φ(ℐ)R` on `(ℤ/4)[u]` with `φ(u) = u²`.

use std::sync::Arc;

use proreg::cartier::{prism_condition, PrismData};
use proreg::rings::{Ideal, RingPresentation};

fn main() -> proreg::Result<()> {
    let ring = Arc::new(RingPresentation::parse("ZZ/4", &["u"], &[])?);
    let phi = vec![ring.element("u^2")?];
    for g in ["u-2", "u"] {
        let ideal = Ideal::new(ring.clone(), vec![ring.element(g)?])?;
        let prism = PrismData::new(ideal, 2, phi.clone())?;
        match prism_condition(&prism)? {
            Some(w) => {
                let terms: Vec<String> =
                    w.generators.iter().zip(&w.coefficients).map(|(g, c)| format!("({})·({})", ring.format(c), ring.format(g))).collect();
                println!("({g}): 2 = {} [replays: {}]", terms.join(" + "), w.check(&prism));
            }
            None => println!("({g}): 2 is not in the condition ideal"),
        }
    }
    Ok(())
}
