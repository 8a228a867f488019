#![allow(dead_code)]

use std::sync::Arc;

use proreg::fpmod::FpModule;
use proreg::kernel::{Matrix, Poly};
use proreg::koszul::SequenceSpec;
use proreg::rings::{Ideal, RingPresentation};

pub fn ring(domain: &str, vars: &[&str], relations: &[&str]) -> Arc<RingPresentation> {
    Arc::new(RingPresentation::parse(domain, vars, relations).expect("fixture ring"))
}

pub fn el(r: &RingPresentation, s: &str) -> Poly {
    r.element(s).expect("fixture element")
}

pub fn free(r: &Arc<RingPresentation>) -> Arc<FpModule> {
    Arc::new(FpModule::free(r.clone(), 1).expect("free module"))
}

/// `R/(gens)`.
pub fn cyclic(r: &Arc<RingPresentation>, gens: &[&str]) -> Arc<FpModule> {
    let gens: Vec<Poly> = gens.iter().map(|g| el(r, g)).collect();
    Arc::new(FpModule::cyclic(r.clone(), &gens).expect("cyclic module"))
}

pub fn seq(r: &Arc<RingPresentation>, elements: &[&str]) -> SequenceSpec {
    SequenceSpec::parse(r.clone(), elements).expect("fixture sequence")
}

pub fn ideal(r: &Arc<RingPresentation>, gens: &[&str]) -> Ideal {
    Ideal::new(r.clone(), gens.iter().map(|g| el(r, g)).collect()).expect("fixture ideal")
}

pub fn unit(r: &RingPresentation, len: usize, j: usize, c: Poly) -> Vec<Poly> {
    let mut v = vec![Poly::zero(); len];
    v[j] = r.reduce(&c);
    v
}

/// `⊕_{k=1}^{n} ℚ[x]/(x^k)`.
pub fn truncation_sum(n: usize) -> Arc<FpModule> {
    let r = ring("QQ", &["x"], &[]);
    let cols = (0..n).map(|k| unit(&r, n, k, el(&r, &format!("x^{}", k + 1)))).collect();
    Arc::new(FpModule::new(r, n, Matrix::from_columns(n, cols)).expect("truncation sum"))
}

/// `ℚ[x, y1, …, yn]/(x y1, x² y2, …, xⁿ yn)`.
pub fn escalating_ring(n: usize) -> Arc<RingPresentation> {
    let names: Vec<String> = std::iter::once("x".to_string()).chain((1..=n).map(|k| format!("y{k}"))).collect();
    let rels: Vec<String> = (1..=n).map(|k| format!("x^{k}*y{k}")).collect();
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
    ring("QQ", &names, &rels)
}

/// The circle `ℚ[a,b]/(a²+b²−1)` with `ℐ = (1−a, b)`.
pub fn circle() -> (Arc<RingPresentation>, Ideal) {
    let r = ring("QQ", &["a", "b"], &["a^2+b^2-1"]);
    let i = ideal(&r, &["1-a", "b"]);
    (r, i)
}

pub fn fixtures_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}
