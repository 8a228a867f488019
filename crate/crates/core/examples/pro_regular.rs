//! Regular, pro-regular and weakly pro-regular sequences, with the audit.

use std::sync::Arc;

use proreg::fpmod::FpModule;
use proreg::koszul::SequenceSpec;
use proreg::regularity::{audit_equivalences, is_pro_regular, is_regular_sequence, is_weakly_pro_regular};
use proreg::rings::RingPresentation;

fn main() -> proreg::Result<()> {
    let ring = Arc::new(RingPresentation::parse("QQ", &["x", "y"], &[])?);
    let m = Arc::new(FpModule::free(ring.clone(), 1)?);
    for elems in [["x", "y"], ["x^2", "x*y"]] {
        let seq = SequenceSpec::parse(ring.clone(), &elems)?;
        let reg = is_regular_sequence(&seq, &m)?;
        let pro = is_pro_regular(&seq, &m, 8)?;
        let weak = is_weakly_pro_regular(&seq, &m, 8)?;
        println!("({}): regular {}, {}, {}", seq.format(), reg.regular, pro.name(), weak.name());
        for (i, c) in &pro.per_index {
            println!("  colon tower {i}: m(n) = {:?}", c.indices());
        }
        let audit = audit_equivalences(&seq, &m, 8)?;
        for f in &audit.faces {
            println!("  {}: {}", f.name, f.status.name());
        }
    }
    Ok(())
}
