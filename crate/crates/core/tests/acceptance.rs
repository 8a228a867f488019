//! Acceptance criteria 1–8, one PASS/FAIL line each.

mod common;

use std::error::Error as StdError;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use common::*;
use proreg::cartier::{chart_audit, prism_condition, verify_cartier, CartierDivisor, Chart, PrismData};
use proreg::completion::{
    cech_homology_report, composite_completion_check, filtration_bitower, replay_composite_isomorphisms, CechConclusion,
    Filtration,
};
use proreg::fpmod::{FpModule, IsoCertificate, ModuleMap, Subquotient};
use proreg::kernel::{Matrix, Poly};
use proreg::koszul::{koszul_homology, koszul_tower, KoszulLevel, SequenceSpec};
use proreg::regularity::{
    is_bounded_torsion, is_pro_regular, is_regular_sequence, is_weakly_pro_regular, pro_regular_tower, BoundedVerdict,
};
use proreg::rings::{Ideal, RingPresentation};
use proreg::towers::{
    bi_pro_zero_equivalence, is_mittag_leffler, is_pro_zero, lim_lim1, six_term_check, InverseTower, Lim1Status,
    LimStatus, StructuralTag, TowerSes, Verdict, VANISHING_WITHOUT_PRO_ZERO,
};

type Outcome = Result<(), Box<dyn StdError>>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+).into());
        }
    };
}

const WINDOW: usize = 8;

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("Koszul complexes and homology", koszul_correctness),
        ("truncation sum H_1 tower", truncation_sum_tower),
        ("tower implications, lim and six-term", towers),
        ("regularity implications and bounded torsion", regularity),
        ("Čech homology versus completion", cech),
        ("composite completion", composite),
        ("Cartier divisors and prism condition", cartier),
        ("deterministic reports, replay, malformed input", engineering),
    ];
    let mut failed = 0;
    for (k, (name, run)) in (1..).zip(criteria) {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()).into())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {k} ({name}): PASS [{secs:.3}s]"),
            Err(e) => {
                failed += 1;
                println!("criterion {k} ({name}): FAIL [{secs:.1}s]: {e}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

// ---------------------------------------------------------------- criterion 1

fn koszul_fixtures() -> Vec<(&'static str, SequenceSpec, Arc<FpModule>)> {
    let qxy = ring("QQ", &["x", "y"], &[]);
    let qx = ring("QQ", &["x"], &[]);
    let node = ring("QQ", &["x", "y"], &["x*y"]);
    let qxyz = ring("QQ", &["x", "y", "z"], &[]);
    let zx = ring("ZZ", &["x"], &[]);
    let gf = ring("GF(5)", &["a", "b"], &[]);
    let z4 = ring("ZZ/4", &["u"], &[]);
    let (circ, _) = circle();
    let two = {
        let cols = vec![vec![el(&qxy, "x"), el(&qxy, "y")]];
        Arc::new(FpModule::new(qxy.clone(), 2, Matrix::from_columns(2, cols)).unwrap())
    };
    let a4 = truncation_sum(4);
    vec![
        ("Q[x,y] on (x,y)", seq(&qxy, &["x", "y"]), free(&qxy)),
        ("Q[x]/(x^3) on (x)", seq(&qx, &["x"]), cyclic(&qx, &["x^3"])),
        ("Q[x,y]/(xy) on (x)", seq(&node, &["x"]), free(&node)),
        ("Q[x,y]/(xy) on (x,y)", seq(&node, &["x", "y"]), free(&node)),
        ("Q[x,y,z] on (x,y,z)", seq(&qxyz, &["x", "y", "z"]), free(&qxyz)),
        ("Z[x]/(2x) on (x)", seq(&zx, &["x"]), cyclic(&zx, &["2*x"])),
        ("Z[x] on (2,x)", seq(&zx, &["2", "x"]), free(&zx)),
        ("Q[x,y]/(x^2,xy) on (x,y)", seq(&qxy, &["x", "y"]), cyclic(&qxy, &["x^2", "x*y"])),
        ("R^2/(x,y)^T on (x+y,y)", seq(&qxy, &["x+y", "y"]), two),
        ("GF(5)[a,b]/(a^2 b) on (a,b)", seq(&gf, &["a", "b"]), cyclic(&gf, &["a^2*b"])),
        ("(Z/4)[u] on (u)", seq(&z4, &["u"]), free(&z4)),
        ("circle on (1-a,b)", seq(&circ, &["1-a", "b"]), free(&circ)),
        ("truncation sum N=4 on (x)", seq(&a4.ring().clone(), &["x"]), a4),
    ]
}

/// `ker(M → M^r, v ↦ (x_i^n v)_i)`, built without the Koszul complex.
fn joint_annihilator(module: &Arc<FpModule>, powers: &[Poly]) -> Result<Subquotient, Box<dyn StdError>> {
    let g = module.ngens();
    let copies = vec![module.as_ref(); powers.len()];
    let target = Arc::new(FpModule::direct_sum(&copies)?);
    let mut stacked = Matrix::zero(0, g);
    for p in powers {
        stacked = stacked.vcat(&Matrix::scalar(g, p));
    }
    Ok(ModuleMap::new(module.clone(), target, stacked)?.kernel()?)
}

fn same_span(a: &Subquotient, b: &Subquotient) -> Result<bool, Box<dyn StdError>> {
    for col in a.representatives().columns() {
        if b.coordinates(col)?.is_none() {
            return Ok(false);
        }
    }
    for col in b.representatives().columns() {
        if a.coordinates(col)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn koszul_correctness() -> Outcome {
    let fixtures = koszul_fixtures();
    ensure!(fixtures.len() >= 10, "only {} fixtures", fixtures.len());
    for (name, s, m) in &fixtures {
        let ring = s.ring().clone();
        let r = s.len();
        let g = m.ngens();
        for n in 1..=3u32 {
            let level = KoszulLevel::new(s, n, m.clone())?;
            for k in 1..r {
                ensure!(level.differential(k).compose(level.differential(k + 1))?.is_zero(), "{name}: d∘d ≠ 0 at n={n}");
            }
            let h0 = level.homology(0)?;
            let direct = Arc::new(m.tensor_quotient(&s.powers(n))?);
            let mut cols = Vec::with_capacity(g);
            for j in 0..g {
                let c = h0.coordinates(&unit(&ring, g, j, ring.one()))?;
                ensure!(c.is_some(), "{name}: generator {j} outside H_0 at n={n}");
                cols.push(c.unwrap());
            }
            let forward = ModuleMap::new(direct.clone(), h0.module.clone(), Matrix::from_columns(h0.module.ngens(), cols))?;
            let backward = ModuleMap::new(h0.module.clone(), direct, h0.representatives().clone())?;
            ensure!(IsoCertificate::check(&forward, &backward)?.is_some(), "{name}: H_0 ≇ M/x^(n)M at n={n}");

            let hr = level.homology(r)?;
            let powers = s.powers(n);
            for col in hr.representatives().columns() {
                for p in &powers {
                    let scaled: Vec<Poly> = col.iter().map(|v| ring.mul(p, v)).collect();
                    ensure!(m.is_zero_element(&scaled), "{name}: H_r class not killed by x_i^n at n={n}");
                }
            }
            let ann = joint_annihilator(m, &powers)?;
            ensure!(same_span(&hr, &ann)?, "{name}: H_r differs from the joint annihilator at n={n}");
        }
    }
    let qxy = ring("QQ", &["x", "y"], &[]);
    let (s, m) = (seq(&qxy, &["x", "y"]), free(&qxy));
    for n in 1..=WINDOW as u32 {
        for i in 1..=2 {
            ensure!(koszul_homology(i, &s, n, &m)?.module.is_zero(), "Q[x,y]: H_{i}(x^{n},y^{n}) ≠ 0");
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- criterion 2

fn component(module: &FpModule, v: &[Poly], k: usize) -> bool {
    let r = module.ring();
    !module.is_zero_element(&unit(r, v.len(), k - 1, v[k - 1].clone()))
}

fn truncation_sum_tower() -> Outcome {
    const N: usize = 10;
    const W: usize = 6;
    let a = truncation_sum(N);
    let ring = a.ring().clone();
    let s = seq(&ring, &["x"]);
    let tower = koszul_tower(1, &s, &a, W)?;
    let levels: Vec<Subquotient> = (1..=W as u32).map(|n| koszul_homology(1, &s, n, &a)).collect::<Result<_, _>>()?;
    for (n, h) in (1..).zip(&levels) {
        let cols = (1..=N).map(|k| unit(&ring, N, k - 1, ring.pow(&el(&ring, "x"), k.saturating_sub(n) as u32))).collect();
        let expected = Subquotient::new(a.clone(), Matrix::from_columns(N, cols), Matrix::empty(N))?;
        ensure!(same_span(h, &expected)?, "H_1(x^{n}) is not ⊕ (x^max(k-n,0))/(x^k)");
        ensure!(tower.level(n).ngens() == h.module.ngens(), "tower level {n} is presented differently");
    }
    for n in 1..W {
        for m in n + 1..=W {
            let comp = tower.composite_matrix(n, m)?;
            let hn = &levels[n - 1];
            let hm = &levels[m - 1];
            let images = ring.mul_matrices(hn.representatives(), &comp);
            let shift = ring.pow(&el(&ring, "x"), (m - n) as u32);
            let mut top = false;
            for (j, img) in images.columns().iter().enumerate() {
                let direct: Vec<Poly> = hm.representatives().column(j).iter().map(|v| ring.mul(&shift, v)).collect();
                ensure!(a.elements_equal(img, &direct), "transition {m}→{n} is not multiplication by x^{}", m - n);
                for k in 1..=m - n {
                    ensure!(!component(&a, img, k), "image {m}→{n} has nonzero component {k}");
                }
                top |= component(&a, img, m - n + 1);
            }
            ensure!(top, "image {m}→{n} vanishes at component {}", m - n + 1);
        }
    }
    let cert = is_pro_zero(&tower)?;
    ensure!(cert.verdict == Verdict::NotProZeroWithinWindow, "pro-zero verdict {}", cert.verdict.name());
    let cech = cech_homology_report(0, &s, &a, W)?;
    ensure!(cech.conclusion == CechConclusion::Undetermined, "degree-0 Čech conclusion {}", cech.conclusion.name());
    ensure!(cech.diagnostics.iter().any(|d| d.contains("NOT_PRO_ZERO")), "no NOT_PRO_ZERO diagnostic: {:?}", cech.diagnostics);
    Ok(())
}

// ---------------------------------------------------------------- criterion 3

fn tower_corpus() -> Result<Vec<(&'static str, InverseTower)>, Box<dyn StdError>> {
    let qx = ring("QQ", &["x"], &[]);
    let qxy = ring("QQ", &["x", "y"], &[]);
    let node = ring("QQ", &["x", "y"], &["x*y"]);
    let z = ring("ZZ", &[], &[]);
    let two = Matrix::from_columns(1, vec![vec![el(&z, "2")]]);
    let r3 = escalating_ring(3);
    let a4 = truncation_sum(4);
    let a10 = truncation_sum(10);
    let y = ideal(&qxy, &["y"]);
    Ok(vec![
        ("H_1(x^n; Q[x]/(x^3))", koszul_tower(1, &seq(&qx, &["x"]), &cyclic(&qx, &["x^3"]), WINDOW)?),
        ("H_1(x^n; Q[x,y]/(xy))", koszul_tower(1, &seq(&node, &["x"]), &free(&node), WINDOW)?),
        ("H_1(x^n,y^n; Q[x,y])", koszul_tower(1, &seq(&qxy, &["x", "y"]), &free(&qxy), WINDOW)?),
        ("H_1(x^n; A_4)", koszul_tower(1, &seq(a4.ring(), &["x"]), &a4, WINDOW)?),
        ("H_1(x^n; A_10)", koszul_tower(1, &seq(a10.ring(), &["x"]), &a10, WINDOW)?),
        ("0 :_{R_3} x^n", koszul_tower(1, &seq(&r3, &["x"]), &free(&r3), WINDOW)?),
        ("Q[x]/(x^n)", proreg::completion::adic_tower(&free(&qx), &seq(&qx, &["x"]), WINDOW)?),
        ("Q[x,y]/(y^n)", proreg::completion::filtration_tower(&Filtration::ideal_powers(free(&qxy), &y, WINDOW)?)?),
        ("constant Q[x]/(x^2)", InverseTower::constant("constant", cyclic(&qx, &["x^2"]), WINDOW)?),
        ("colon (x^2n):(xy)^n", pro_regular_tower(&seq(&qxy, &["x^2", "x*y"]), &free(&qxy), 2, WINDOW)?),
        ("Z <-2- Z", InverseTower::new("Z", vec![free(&z); WINDOW], vec![two; WINDOW - 1], vec![])?),
    ])
}

fn six_term_fixtures() -> Result<Vec<(&'static str, TowerSes)>, Box<dyn StdError>> {
    let qx = ring("QQ", &["x"], &[]);
    let p = qx.poly_ring();
    let id = |n: usize| Matrix::identity(p, n);
    let mut out = Vec::new();

    let m = cyclic(&qx, &["x^2"]);
    let zero = Arc::new(FpModule::zero(qx.clone())?);
    out.push((
        "0 → M → M",
        TowerSes {
            a: InverseTower::constant("0", zero, WINDOW)?,
            b: InverseTower::constant("B", m.clone(), WINDOW)?,
            c: InverseTower::constant("C", m, WINDOW)?,
            f: vec![Matrix::zero(1, 0); WINDOW],
            g: vec![id(1); WINDOW],
        },
    ));

    let m1 = cyclic(&qx, &["x"]);
    let m2 = cyclic(&qx, &["x^2"]);
    let sum = Arc::new(FpModule::direct_sum(&[m1.as_ref(), m2.as_ref()])?);
    let inj = Matrix::from_columns(2, vec![vec![qx.one(), Poly::zero()]]);
    let proj = Matrix::from_columns(1, vec![vec![Poly::zero()], vec![qx.one()]]);
    out.push((
        "split",
        TowerSes {
            a: InverseTower::constant("A", m1, WINDOW)?,
            b: InverseTower::constant("B", sum, WINDOW)?,
            c: InverseTower::constant("C", m2, WINDOW)?,
            f: vec![inj; WINDOW],
            g: vec![proj; WINDOW],
        },
    ));

    // 0 → xⁿM → M → M/xⁿM → 0 with M = ℚ[x]/(x³)
    let m = cyclic(&qx, &["x^3"]);
    let subs: Vec<Subquotient> = (1..=WINDOW as u32)
        .map(|n| Subquotient::new(m.clone(), Matrix::from_columns(1, vec![vec![qx.pow(&el(&qx, "x"), n)]]), Matrix::empty(1)))
        .collect::<Result<_, _>>()?;
    let a_maps = (1..WINDOW).map(|n| Ok(subs[n].induced_map(&subs[n - 1], &id(1))?.matrix().clone())).collect::<Result<Vec<_>, Box<dyn StdError>>>()?;
    let a = InverseTower::new("x^n M", subs.iter().map(|s| s.module.clone()).collect(), a_maps, vec![])?;
    let quotients: Vec<Arc<FpModule>> = (1..=WINDOW as u32)
        .map(|n| m.tensor_quotient(&[qx.pow(&el(&qx, "x"), n)]).map(Arc::new))
        .collect::<Result<_, _>>()?;
    let c = InverseTower::new(
        "M/x^n M",
        quotients,
        vec![id(1); WINDOW - 1],
        vec![StructuralTag::SurjectiveByConstruction, StructuralTag::EventuallyConstant { from: 3 }],
    )?;
    out.push((
        "x^n M ⊂ M",
        TowerSes {
            a,
            b: InverseTower::constant("M", m, WINDOW)?,
            c,
            f: subs.iter().map(|s| s.representatives().clone()).collect(),
            g: vec![id(1); WINDOW],
        },
    ));
    Ok(out)
}

fn towers() -> Outcome {
    let mut pro_zero = 0;
    for (name, t) in tower_corpus()? {
        let pz = is_pro_zero(&t)?;
        let ml = is_mittag_leffler(&t)?;
        let lim = lim_lim1(&t)?;
        if let Some(w) = pz.witness.zero_maps.first() {
            ensure!(pz.replay(&t).is_ok(), "{name}: pro-zero certificate does not replay ({w:?})");
        }
        if pz.verdict == Verdict::ProZero {
            pro_zero += 1;
            ensure!(ml.verdict == Verdict::MlCertified, "{name}: pro-zero but ML verdict {}", ml.verdict.name());
        }
        if ml.verdict == Verdict::MlCertified {
            ensure!(lim.lim1 == Lim1Status::ZeroCertified, "{name}: ML but lim¹ {}", lim.lim1.name());
        }
    }
    ensure!(pro_zero >= 3, "only {pro_zero} pro-zero towers in the corpus");

    let z = ring("ZZ", &[], &[]);
    let two = Matrix::from_columns(1, vec![vec![el(&z, "2")]]);
    let t = InverseTower::new("Z", vec![free(&z); WINDOW], vec![two; WINDOW - 1], vec![])?;
    let ml = is_mittag_leffler(&t)?;
    ensure!(ml.verdict == Verdict::NotMlWithinWindow, "Z <-2- Z: ML verdict {}", ml.verdict.name());
    let lim = lim_lim1(&t)?;
    ensure!(matches!(lim.lim, LimStatus::ZeroCertified), "Z <-2- Z: lim {}", lim.lim.name());
    ensure!(lim.diagnostics.iter().any(|d| d.contains(VANISHING_WITHOUT_PRO_ZERO)), "Z <-2- Z: diagnostics {:?}", lim.diagnostics);

    let ses = six_term_fixtures()?;
    ensure!(ses.len() >= 3, "only {} six-term fixtures", ses.len());
    for (name, s) in &ses {
        let rep = six_term_check(s)?;
        ensure!(rep.passed(), "{name}: six-term {} {:?}", rep.status.name(), rep.diagnostics);
    }

    let qx = ring("QQ", &["x"], &[]);
    let qxy = ring("QQ", &["x", "y"], &[]);
    let node = ring("QQ", &["x", "y"], &["x*y"]);
    let a4 = truncation_sum(4);
    let bis = [
        ("Q[x,y], y^n", Filtration::ideal_powers(free(&qxy), &ideal(&qxy, &["y"]), 6)?, seq(&qxy, &["x"])),
        ("Q[x,y]/(xy), y^n", Filtration::ideal_powers(free(&node), &ideal(&node, &["y"]), 6)?, seq(&node, &["x"])),
        ("Q[x]/(x^3), zero", Filtration::zero(cyclic(&qx, &["x^3"]), 6)?, seq(&qx, &["x"])),
        ("A_4, zero", Filtration::zero(a4.clone(), 6)?, seq(a4.ring(), &["x"])),
    ];
    for (name, f, s) in &bis {
        let rep = bi_pro_zero_equivalence(&filtration_bitower(f, s)?)?;
        ensure!(rep.holds(), "{name}: bi-indexed and diagonal verdicts disagree {:?}", rep.diagnostics);
    }
    Ok(())
}

// ---------------------------------------------------------------- criterion 4

fn regularity_corpus() -> Vec<(&'static str, SequenceSpec, Arc<FpModule>)> {
    let qx = ring("QQ", &["x"], &[]);
    let qxy = ring("QQ", &["x", "y"], &[]);
    let qxyz = ring("QQ", &["x", "y", "z"], &[]);
    let node = ring("QQ", &["x", "y"], &["x*y"]);
    let zx = ring("ZZ", &["x"], &[]);
    vec![
        ("Q[x] on (x)", seq(&qx, &["x"]), free(&qx)),
        ("Q[x,y] on (x,y)", seq(&qxy, &["x", "y"]), free(&qxy)),
        ("Q[x,y,z] on (x,y,z)", seq(&qxyz, &["x", "y", "z"]), free(&qxyz)),
        ("Z[x] on (2,x)", seq(&zx, &["2", "x"]), free(&zx)),
        ("Q[x]/(x^3) on (x)", seq(&qx, &["x"]), cyclic(&qx, &["x^3"])),
        ("Q[x,y]/(xy) on (x)", seq(&node, &["x"]), free(&node)),
        ("Q[x,y]/(xy) on (x,y)", seq(&node, &["x", "y"]), free(&node)),
        ("Q[x,y]/(x^2,xy) on (x,y)", seq(&qxy, &["x", "y"]), cyclic(&qxy, &["x^2", "x*y"])),
        ("Q[x,y] on (x^2,xy)", seq(&qxy, &["x^2", "x*y"]), free(&qxy)),
        ("Q[x,y]/(x) on (y,x)", seq(&qxy, &["y", "x"]), cyclic(&qxy, &["x"])),
    ]
}

fn regularity() -> Outcome {
    let mut strict = 0;
    for (name, s, m) in regularity_corpus() {
        let reg = is_regular_sequence(&s, &m)?;
        let pro = is_pro_regular(&s, &m, WINDOW)?;
        let weak = is_weakly_pro_regular(&s, &m, WINDOW)?;
        ensure!(!reg.regular || pro.holds, "{name}: regular but {}", pro.name());
        ensure!(!pro.holds || weak.holds, "{name}: pro-regular but {}", weak.name());
        ensure!(weak.holds, "{name}: no weak pro-regularity witness within window {WINDOW}");
        for (i, c) in &weak.per_index {
            ensure!(c.replay(&koszul_tower(*i, &s, &m, WINDOW)?).is_ok(), "{name}: H_{i} witness does not replay");
        }
        if pro.holds {
            for (i, c) in &pro.per_index {
                ensure!(c.replay(&pro_regular_tower(&s, &m, *i, WINDOW)?).is_ok(), "{name}: colon witness {i} does not replay");
            }
        }
        strict += usize::from(pro.holds && !reg.regular);
    }
    ensure!(strict >= 2, "corpus has only {strict} pro-regular, non-regular fixtures");

    let qx = ring("QQ", &["x"], &[]);
    let qxy = ring("QQ", &["x", "y"], &[]);
    let node = ring("QQ", &["x", "y"], &["x*y"]);
    let a4 = truncation_sum(4);
    let r3 = escalating_ring(3);
    let singles = [
        ("Q[x]/(x^3)", cyclic(&qx, &["x^3"])),
        ("Q[x,y]/(xy)", free(&node)),
        ("Q[x,y]", free(&qxy)),
        ("A_4", a4),
        ("R_3", free(&r3)),
    ];
    for (name, m) in &singles {
        let s = seq(m.ring(), &["x"]);
        let pro = is_pro_regular(&s, m, WINDOW)?;
        let bt = is_bounded_torsion(m, &el(m.ring(), "x"), WINDOW)?;
        ensure!(pro.per_index[0].1 == bt.certificate, "{name}: single-element witnesses differ");
        ensure!(pro.holds == (bt.verdict == BoundedVerdict::Bounded), "{name}: verdicts differ");
    }

    let rn = escalating_ring(10);
    let m = free(&rn);
    let x = el(&rn, "x");
    let bt = is_bounded_torsion(&m, &x, WINDOW)?;
    ensure!(bt.verdict == BoundedVerdict::NotBoundedWithinWindow, "R_10: {}", bt.verdict.name());
    for k in 1..=WINDOW {
        let w = bt.escalation.get(k - 1).ok_or_else(|| format!("R_10: no escalation witness for k={k}"))?;
        ensure!(w.k == k && w.verify(&m, &x), "R_10: escalation witness {k} fails");
        ensure!(m.elements_equal(&w.element, &[el(&rn, &format!("y{k}"))]), "R_10: witness {k} is not y{k}");
    }
    let pro = is_pro_regular(&seq(&rn, &["x"]), &m, WINDOW)?;
    ensure!(!pro.holds, "R_10: {}", pro.name());
    Ok(())
}

// ---------------------------------------------------------------- criterion 5

fn cech() -> Outcome {
    let qx = ring("QQ", &["x"], &[]);
    let m = cyclic(&qx, &["x^3"]);
    let rep = cech_homology_report(0, &seq(&qx, &["x"]), &m, WINDOW)?;
    ensure!(rep.conclusion == CechConclusion::IsomorphicToCompletion, "Q[x]/(x^3): {}", rep.conclusion.name());
    let upper = rep.upper.as_ref().and_then(|u| u.evidence.certificate.as_ref()).ok_or("no H_1 certificate")?;
    ensure!(upper.verdict == Verdict::ProZero, "H_1 tower: {}", upper.verdict.name());
    let expected: Vec<(usize, usize)> = (1..=WINDOW / 2).map(|n| (n, n + 3)).collect();
    ensure!(upper.indices() == expected, "H_1 indices {:?}", upper.indices());

    for (name, s, m) in regularity_corpus().into_iter().take(4) {
        ensure!(is_regular_sequence(&s, &m)?.regular, "{name} is not regular");
        for i in 1..=s.len() {
            let rep = cech_homology_report(i, &s, &m, WINDOW)?;
            ensure!(rep.conclusion == CechConclusion::Vanishes, "{name}: degree {i} {}", rep.conclusion.name());
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- criterion 6

fn composite() -> Outcome {
    let qx = ring("QQ", &["x"], &[]);
    let qxy = ring("QQ", &["x", "y"], &[]);
    let node = ring("QQ", &["x", "y"], &["x*y"]);
    let fixtures = [
        ("Q[x,y], y^n M", Filtration::ideal_powers(free(&qxy), &ideal(&qxy, &["y"]), WINDOW)?, seq(&qxy, &["x"])),
        ("Q[x]/(x^3), zero", Filtration::zero(cyclic(&qx, &["x^3"]), WINDOW)?, seq(&qx, &["x"])),
        ("Q[x,y]/(xy), y^n M", Filtration::ideal_powers(free(&node), &ideal(&node, &["y"]), WINDOW)?, seq(&node, &["x"])),
    ];
    for (name, f, s) in &fixtures {
        let rep = composite_completion_check(f, s)?;
        ensure!(rep.passed(), "{name}: {} {:?}", rep.status.name(), rep.diagnostics);
        ensure!(replay_composite_isomorphisms(f, s, &rep.level_isomorphisms)?, "{name}: level isomorphisms do not replay");
        ensure!(rep.diagonal.holds(), "{name}: diagonal inconsistent");
        let fresh = bi_pro_zero_equivalence(&filtration_bitower(f, s)?)?;
        ensure!(fresh.bi_verdict == rep.diagonal.bi_verdict && fresh.holds(), "{name}: diagonal check not reproducible");
    }
    Ok(())
}

// ---------------------------------------------------------------- criterion 7

fn charts(r: &RingPresentation, pairs: &[(&str, &str)]) -> Vec<Chart> {
    pairs.iter().map(|(f, x)| Chart { f: el(r, f), x: el(r, x) }).collect()
}

/// `ℐⁿR_f = xⁿR_f`, recomputed in the localized presentation.
fn chart_powers_agree(ideal: &Ideal, chart: &Chart, window: usize) -> Result<bool, Box<dyn StdError>> {
    let loc = ideal.ring().localize(&chart.f)?;
    let local = ideal.localize(&loc)?;
    let x = Ideal::new(loc.ring.clone(), vec![loc.map(&chart.x)])?;
    for n in 1..=window as u32 {
        if !local.power(n)?.equals(&x.power(n)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn cartier() -> Outcome {
    let (circ, ci) = circle();
    let set1 = charts(&circ, &[("1+a", "b"), ("1-a", "1")]);
    let set2 = charts(&circ, &[("1+a", "b"), ("b", "1"), ("1-a", "1-a")]);
    let qxy = ring("QQ", &["x", "y"], &[]);
    let dual = ring("QQ", &["x", "y"], &["x^2"]);
    let divisors = [
        ("circle, two charts", ci.clone(), set1, "b"),
        ("circle, three charts", ci.clone(), set2, "b"),
        ("Q[x,y], (y)", ideal(&qxy, &["y"]), charts(&qxy, &[("1", "y")]), "x"),
        ("Q[x,y]/(x^2), (y)", ideal(&dual, &["y"]), charts(&dual, &[("1", "y")]), "x"),
    ];
    let mut circle_verdicts = Vec::new();
    for (name, i, cs, x) in divisors {
        let rep = verify_cartier(&i, &cs)?;
        ensure!(rep.verified, "{name}: not Cartier ({:?} at chart {:?})", rep.failing_check, rep.failing_chart);
        for c in &cs {
            ensure!(chart_powers_agree(&i, c, WINDOW)?, "{name}: ℐⁿR_f ≠ xⁿR_f");
        }
        let d = CartierDivisor::new(i, cs)?;
        ensure!(d.chart_power_consistency(WINDOW)?.iter().flatten().all(|&b| b), "{name}: chart power consistency fails");
        let audit = chart_audit(&d, &el(d.ring(), x), WINDOW)?;
        ensure!(audit.all_agree(), "{name}: audit faces {}: {:?} {:?}", audit.status.name(), audit.faces, audit.diagnostics);
        for w in &audit.injectivity {
            let fs: Vec<Poly> = d.charts().iter().map(|c| c.f.clone()).collect();
            ensure!(w.check(d.ring(), &fs), "{name}: injectivity witness at level {} fails", w.level);
        }
        if name.starts_with("circle") {
            circle_verdicts.push(audit.verdict());
        }
    }
    ensure!(circle_verdicts.windows(2).all(|w| w[0] == w[1]), "circle verdict depends on the chart set");

    let z4 = ring("ZZ/4", &["u"], &[]);
    let phi = vec![el(&z4, "u^2")];
    let good = PrismData::new(ideal(&z4, &["u-2"]), 2, phi.clone())?;
    let w = prism_condition(&good)?.ok_or("(u-2): no combination found")?;
    ensure!(w.check(&good), "(u-2): combination does not replay");
    let bad = PrismData::new(ideal(&z4, &["u"]), 2, phi)?;
    ensure!(prism_condition(&bad)?.is_none(), "(u): condition reported as holding");
    Ok(())
}

// ---------------------------------------------------------------- criterion 8

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_proreg"))
}

fn json_files(dir: &Path) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)
        .expect("fixture directory")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    v.sort();
    v
}

/// Appends `+1` to the first polynomial inside the first `lift` matrix.
fn mutate_lift(v: &mut serde_json::Value) -> bool {
    fn first_string(v: &mut serde_json::Value) -> bool {
        match v {
            serde_json::Value::String(s) => {
                s.push_str("+1");
                true
            }
            serde_json::Value::Array(a) => a.iter_mut().any(first_string),
            serde_json::Value::Object(o) => o.values_mut().any(first_string),
            _ => false,
        }
    }
    match v {
        serde_json::Value::Object(o) => {
            if let Some(l) = o.get_mut("lift") {
                if first_string(l) {
                    return true;
                }
            }
            o.values_mut().any(mutate_lift)
        }
        serde_json::Value::Array(a) => a.iter_mut().any(mutate_lift),
        _ => false,
    }
}

fn engineering() -> Outcome {
    let tmp = tempfile::tempdir()?;
    let problems = json_files(&fixtures_dir().join("problems"));
    ensure!(problems.len() >= 5, "only {} problem fixtures", problems.len());
    for p in &problems {
        let stem = p.file_stem().unwrap().to_string_lossy().to_string();
        let mut outputs = Vec::new();
        for (run, jobs) in [(0, "1"), (1, "4"), (2, "1")] {
            let out = tmp.path().join(format!("{stem}.{run}.json"));
            let st = binary().arg(p).args(["--jobs", jobs, "-o"]).arg(&out).status()?;
            ensure!(st.code() == Some(0), "{stem}: exit {:?} with --jobs {jobs}", st.code());
            outputs.push(std::fs::read(&out)?);
        }
        ensure!(outputs.windows(2).all(|w| w[0] == w[1]), "{stem}: reports differ across runs or --jobs");
        let report = tmp.path().join(format!("{stem}.0.json"));
        let st = binary().arg(p).arg("--replay").arg(&report).output()?;
        ensure!(st.status.code() == Some(0), "{stem}: replay failed: {}", String::from_utf8_lossy(&st.stdout));

        let mut v: serde_json::Value = serde_json::from_slice(&outputs[0])?;
        if mutate_lift(&mut v) {
            let bad = tmp.path().join(format!("{stem}.mutated.json"));
            std::fs::write(&bad, serde_json::to_vec_pretty(&v)?)?;
            let st = binary().arg(p).arg("--replay").arg(&bad).output()?;
            ensure!(st.status.code() == Some(1), "{stem}: mutated witness replayed with exit {:?}", st.status.code());
        }
    }
    let bt = fixtures_dir().join("problems").join("bounded_torsion.json");
    let out = tmp.path().join("bt.json");
    binary().arg(&bt).arg("-o").arg(&out).status()?;
    let mut v: serde_json::Value = serde_json::from_slice(&std::fs::read(&out)?)?;
    ensure!(mutate_lift(&mut v), "bounded_torsion report carries no lift to mutate");

    let malformed = json_files(&fixtures_dir().join("malformed"));
    ensure!(malformed.len() >= 8, "only {} malformed fixtures", malformed.len());
    for p in &malformed {
        let out = binary().arg(p).output()?;
        ensure!(out.status.code() == Some(2), "{}: exit {:?}", p.display(), out.status.code());
        ensure!(out.stdout.is_empty(), "{}: wrote a report", p.display());
    }
    Ok(())
}
