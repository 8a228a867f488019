//! The point `(1, 0)` on the circle as a Cartier divisor, with two chart
//! sets, and the three-way chart audit.

use std::sync::Arc;

use proreg::cartier::{chart_audit, CartierDivisor, Chart};
use proreg::rings::{Ideal, RingPresentation};

fn main() -> proreg::Result<()> {
    let ring = Arc::new(RingPresentation::parse("QQ", &["a", "b"], &["a^2+b^2-1"])?);
    let ideal = Ideal::new(ring.clone(), vec![ring.element("1-a")?, ring.element("b")?])?;
    let chart = |f: &str, x: &str| -> proreg::Result<Chart> { Ok(Chart { f: ring.element(f)?, x: ring.element(x)? }) };
    let sets = [
        vec![chart("1+a", "b")?, chart("1-a", "1")?],
        vec![chart("1+a", "b")?, chart("b", "1")?, chart("1-a", "1-a")?],
    ];
    for charts in sets {
        let d = CartierDivisor::new(ideal.clone(), charts)?;
        let cover = d.report().covering.as_ref().expect("verified divisors carry a covering");
        let cover: Vec<String> = cover.iter().map(|c| ring.format(c)).collect();
        println!("{} charts, 1 = Σ c_i f_i with c = [{}]", d.charts().len(), cover.join(", "));
        let consistent = d.chart_power_consistency(8)?.iter().flatten().all(|&b| b);
        println!("  I^n R_f = x^n R_f for n ≤ 8: {consistent}");
        let audit = chart_audit(&d, &ring.element("b")?, 4)?;
        for f in &audit.faces {
            println!("  {}: {:?}", f.name, f.positive);
        }
        println!("  audit {}", audit.status.name());
    }
    Ok(())
}
