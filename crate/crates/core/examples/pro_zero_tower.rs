//! Pro-zero certificates: `{H_1(xⁿ; ℚ[x]/(x³))}` dies after three steps,
//! while the truncation sum `⊕_{k≤10} ℚ[x]/(x^k)` survives a window of 6.

use std::sync::Arc;

use proreg::fpmod::FpModule;
use proreg::kernel::{Matrix, Poly};
use proreg::koszul::{koszul_cotower, koszul_tower, SequenceSpec};
use proreg::rings::RingPresentation;
use proreg::towers::{is_ind_zero, is_pro_zero};

fn main() -> proreg::Result<()> {
    let ring = Arc::new(RingPresentation::parse("QQ", &["x"], &[])?);
    let x = SequenceSpec::parse(ring.clone(), &["x"])?;

    let m = Arc::new(FpModule::cyclic(ring.clone(), &[ring.element("x^3")?])?);
    let tower = koszul_tower(1, &x, &m, 8)?;
    let cert = is_pro_zero(&tower)?;
    println!("{}: {} with m(n) = {:?}", tower.label(), cert.verdict.name(), cert.indices());
    cert.replay(&tower).expect("certificate replays");

    let co = koszul_cotower(1, &x, &m, 8)?;
    println!("{}: {}", co.label(), is_ind_zero(&co)?.verdict.name());

    let n = 10;
    let cols = (0..n)
        .map(|k| {
            let mut v = vec![Poly::zero(); n];
            v[k] = ring.pow(&ring.element("x")?, k as u32 + 1);
            Ok(v)
        })
        .collect::<proreg::Result<Vec<_>>>()?;
    let a = Arc::new(FpModule::new(ring.clone(), n, Matrix::from_columns(n, cols))?);
    let cert = is_pro_zero(&koszul_tower(1, &x, &a, 6)?)?;
    println!("truncation sum, window 6: {}", cert.verdict.name());
    for d in &cert.diagnostics {
        println!("  {d}");
    }
    Ok(())
}
