//! Re-verification of a report against the problem it came from. Recorded
//! witnesses are checked against freshly built objects; tasks whose verdicts
//! carry no compact witness are recomputed and compared.

use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde_json::Value;

use super::problem::{Problem, Task, TaskKind, SCHEMA_VERSION};
use super::report::{Report, TaskReport, TaskStatus, ENGINE, ENGINE_VERSION};
use super::tasks::{divisor, run_task};
use crate::cartier::{check_combination, pro_regular_pair_tower, InjectivityWitness, PrismWitness};
use crate::completion::{adic_tower, filtration_bitower, replay_composite_isomorphisms};
use crate::error::{Error, Result};
use crate::fpmod::{IsoCertificate, ModuleMap};
use crate::kernel::{Poly, PolyRing};
use crate::koszul::koszul_tower;
use crate::regularity::{colon_tower, pro_regular_tower, EscalationWitness};
use crate::rings::RingPresentation;
use crate::serial::MatrixJson;
use crate::towers::{BiTower, Certificate, CertificateJson, CellWitness, InverseTower};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayOutcome {
    /// One entry per failed check, naming the task and the check.
    pub failures: Vec<String>,
    pub tasks_checked: usize,
}

impl ReplayOutcome {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

type Check = std::result::Result<(), String>;

fn field<T: DeserializeOwned>(v: &Value, key: &str) -> std::result::Result<T, String> {
    serde_json::from_value(v.get(key).cloned().unwrap_or(Value::Null)).map_err(|e| format!("malformed `{key}`: {e}"))
}

fn parse_polys(ring: &RingPresentation, ss: &[String]) -> std::result::Result<Vec<Poly>, String> {
    ss.iter().map(|s| ring.element(s).map_err(|e| e.to_string())).collect()
}

fn certificate(v: &Value, ring: &PolyRing) -> std::result::Result<Certificate, String> {
    let j: CertificateJson = serde_json::from_value(v.clone()).map_err(|e| format!("malformed certificate: {e}"))?;
    Certificate::from_json(ring, &j).map_err(|e| e.to_string())
}

fn replay_tower(v: &Value, tower: &InverseTower) -> Check {
    let c = certificate(v, tower.ring().poly_ring())?;
    c.replay(tower)
}

fn replay_bitower(v: &Value, bt: &BiTower) -> Check {
    let diag = bt.diagonal().map_err(|e| e.to_string())?;
    replay_tower(&v["diagonal"], &diag).map_err(|e| format!("diagonal: {e}"))?;
    let cells: Vec<Value> = field(v, "cells")?;
    let pr = bt.ring().poly_ring();
    for c in cells {
        let target: [usize; 2] = field(&c, "target")?;
        let source: [usize; 2] = field(&c, "source")?;
        let lift: MatrixJson = field(&c, "lift")?;
        let w = CellWitness {
            target: (target[0], target[1]),
            source: (source[0], source[1]),
            lift: lift.to_matrix(pr).map_err(|e| e.to_string())?,
        };
        w.check(bt)?;
    }
    Ok(())
}

fn err(e: Error) -> String {
    e.to_string()
}

fn replay_per_index(v: &Value, build: impl Fn(usize) -> Result<InverseTower>) -> Check {
    let entries: Vec<Value> = serde_json::from_value(v.clone()).map_err(|e| format!("malformed per-index list: {e}"))?;
    for e in entries {
        let i: usize = field(&e, "index")?;
        let tower = build(i).map_err(err)?;
        replay_tower(&e["certificate"], &tower).map_err(|m| format!("index {i}: {m}"))?;
    }
    Ok(())
}

fn recompute(problem: &Problem, task: &Task, recorded: &TaskReport) -> Check {
    let fresh = run_task(problem, task);
    if fresh.verdict != recorded.verdict || fresh.details != recorded.details {
        return Err(format!("recomputed verdict {} differs from recorded {}", fresh.verdict, recorded.verdict));
    }
    Ok(())
}

fn check_task(problem: &Problem, task: &Task, r: &TaskReport) -> Check {
    let w = task.window;
    let cert = &r.certificate;
    match task.kind {
        TaskKind::ProZero | TaskKind::MittagLeffler => {
            let t = problem.tower(task.subject("tower"), w).map_err(err)?;
            let c = certificate(&cert["tower"], t.ring().poly_ring())?;
            if c.verdict.name() != r.verdict {
                return Err("certificate verdict differs from the reported verdict".into());
            }
            c.replay(&t)
        }
        TaskKind::Lim => {
            let t = problem.tower(task.subject("tower"), w).map_err(err)?;
            if !cert["tower"].is_null() {
                replay_tower(&cert["tower"], &t)?;
            }
            let inverses: Vec<Value> = field(cert, "inverses")?;
            for inv in inverses {
                let n: usize = field(&inv, "level")?;
                let m: MatrixJson = field(&inv, "matrix")?;
                if n == 0 || n >= t.window() {
                    return Err(format!("inverse at level {n} outside the tower"));
                }
                let m = m.to_matrix(t.ring().poly_ring()).map_err(err)?;
                let back = ModuleMap::new(t.level(n).clone(), t.level(n + 1).clone(), m).map_err(err)?;
                let fwd = t.transition(n);
                let ok = IsoCertificate::check(fwd, &back).map_err(err)?.is_some();
                if !ok {
                    return Err(format!("recorded inverse of the transition {}→{n} is not inverse", n + 1));
                }
            }
            recompute(problem, task, r)
        }
        TaskKind::SixTerm | TaskKind::Regular => recompute(problem, task, r),
        TaskKind::BiProZero => {
            let f = problem.filtration(task.subject("filtration"), w).map_err(err)?;
            let bt = filtration_bitower(&f, &problem.sequences[task.subject("sequence")]).map_err(err)?;
            replay_bitower(cert, &bt)
        }
        TaskKind::BoundedTorsion => {
            let m = &problem.modules[task.subject("module")];
            let x = task.element.as_ref().expect("validated");
            let t = colon_tower(m, &[], x, w).map_err(err)?;
            replay_tower(&cert["tower"], &t)?;
            let esc: Vec<Value> = field(cert, "escalation")?;
            for e in esc {
                let k: usize = field(&e, "k")?;
                let el: Vec<String> = field(&e, "element")?;
                let wt = EscalationWitness { k, element: parse_polys(m.ring(), &el)? };
                if !wt.verify(m, x) {
                    return Err(format!("escalation witness at k = {k} does not verify"));
                }
            }
            Ok(())
        }
        TaskKind::ProRegular | TaskKind::WeaklyProRegular | TaskKind::Audit => {
            let seq = &problem.sequences[task.subject("sequence")];
            let m = &problem.modules[task.subject("module")];
            let pro = |v: &Value| replay_per_index(v, |i| pro_regular_tower(seq, m, i, w));
            let weak = |v: &Value| replay_per_index(v, |i| koszul_tower(i, seq, m, w));
            match task.kind {
                TaskKind::ProRegular => pro(&cert["per_index"]),
                TaskKind::WeaklyProRegular => weak(&cert["per_index"]),
                _ => {
                    pro(&cert["pro_regular"])?;
                    weak(&cert["weakly_pro_regular"])?;
                    recompute(problem, task, r)
                }
            }
        }
        TaskKind::CechHomology => {
            let seq = &problem.sequences[task.subject("sequence")];
            let m = &problem.modules[task.subject("module")];
            let i = task.degree.expect("validated");
            if !cert["lower"].is_null() {
                let t = if i == 0 { adic_tower(m, seq, w) } else { koszul_tower(i, seq, m, w) }.map_err(err)?;
                replay_tower(&cert["lower"], &t).map_err(|e| format!("H_{i} tower: {e}"))?;
            }
            if !cert["upper"].is_null() {
                let t = koszul_tower(i + 1, seq, m, w).map_err(err)?;
                replay_tower(&cert["upper"], &t).map_err(|e| format!("H_{} tower: {e}", i + 1))?;
            }
            Ok(())
        }
        TaskKind::CompositeCompletion => {
            let f = problem.filtration(task.subject("filtration"), w).map_err(err)?;
            let seq = &problem.sequences[task.subject("sequence")];
            let pr = seq.ring().poly_ring();
            let isos: Vec<Value> = field(cert, "isomorphisms")?;
            let isos = isos
                .iter()
                .map(|v| {
                    let fwd: MatrixJson = field(v, "forward")?;
                    let bwd: MatrixJson = field(v, "backward")?;
                    Ok(IsoCertificate { forward: fwd.to_matrix(pr).map_err(err)?, backward: bwd.to_matrix(pr).map_err(err)? })
                })
                .collect::<std::result::Result<Vec<_>, String>>()?;
            if r.verdict == "PASSED" && !replay_composite_isomorphisms(&f, seq, &isos).map_err(err)? {
                return Err("levelwise isomorphism certificates do not replay".into());
            }
            let bt = filtration_bitower(&f, seq).map_err(err)?;
            replay_bitower(&cert["bitower"], &bt)
        }
        TaskKind::VerifyCartier => {
            let (ideal, charts) = &problem.divisors[task.subject("divisor")];
            let ring = ideal.ring();
            if let Some(c) = field::<Option<Vec<String>>>(cert, "covering")? {
                let fs: Vec<Poly> = charts.iter().map(|c| c.f.clone()).collect();
                if !check_combination(ring, &fs, &parse_polys(ring, &c)?, &ring.one()) {
                    return Err("covering combination does not sum to 1".into());
                }
            }
            let recorded: Vec<Value> = field(cert, "charts")?;
            if recorded.len() != charts.len() {
                return Err("chart evidence count differs from the divisor".into());
            }
            for (i, (c, ev)) in charts.iter().zip(&recorded).enumerate() {
                let loc = ring.localize(&c.f).map_err(err)?;
                let lr = &loc.ring;
                let x = loc.map(&c.x);
                let gens: Vec<Poly> = ideal.generators().iter().map(|g| loc.map(g)).collect();
                if let Some(a) = field::<Option<Vec<String>>>(ev, "ideal_over_x")? {
                    let a = parse_polys(lr, &a)?;
                    if a.len() != gens.len() || gens.iter().zip(&a).any(|(g, a)| !lr.equal(g, &lr.mul(a, &x))) {
                        return Err(format!("chart {}: generators are not the recorded multiples of x", i + 1));
                    }
                }
                if let Some(cs) = field::<Option<Vec<String>>>(ev, "x_over_ideal")? {
                    if !check_combination(lr, &gens, &parse_polys(lr, &cs)?, &x) {
                        return Err(format!("chart {}: x is not the recorded combination of the generators", i + 1));
                    }
                }
            }
            if let Some(rows) = field::<Option<Vec<Vec<String>>>>(cert, "containment")? {
                let xs: Vec<Poly> = charts.iter().map(|c| c.x.clone()).collect();
                for (g, row) in ideal.generators().iter().zip(&rows) {
                    if !check_combination(ring, &xs, &parse_polys(ring, row)?, g) {
                        return Err("containment combination does not reproduce a generator".into());
                    }
                }
            }
            recompute(problem, task, r)
        }
        TaskKind::ProRegularPair => {
            let ideal = &problem.ideals[task.subject("ideal")];
            let t = pro_regular_pair_tower(ideal, task.element.as_ref().expect("validated"), w).map_err(err)?;
            replay_tower(&cert["tower"], &t)
        }
        TaskKind::ChartAudit => {
            let d = divisor(problem, task).map_err(err)?;
            let ring = d.ring().clone();
            if !cert["pair"].is_null() {
                let t = pro_regular_pair_tower(d.ideal(), task.element.as_ref().expect("validated"), w).map_err(err)?;
                replay_tower(&cert["pair"], &t).map_err(|e| format!("pro-regular pair: {e}"))?;
            }
            let fs: Vec<Poly> = d.charts().iter().map(|c| c.f.clone()).collect();
            let inj: Vec<Value> = field(cert, "injectivity")?;
            for v in inj {
                let wt = InjectivityWitness {
                    level: field(&v, "level")?,
                    exponents: field(&v, "exponents")?,
                    combination: parse_polys(&ring, &field::<Vec<String>>(&v, "combination")?)?,
                };
                if !wt.check(&ring, &fs) {
                    return Err(format!("level {}: injectivity combination does not sum to 1", wt.level));
                }
            }
            Ok(())
        }
        TaskKind::PrismCondition => {
            let p = &problem.prisms[task.subject("prism")];
            let ring: &Arc<RingPresentation> = p.ring();
            if r.verdict == "HOLDS" {
                let wt = PrismWitness {
                    generators: parse_polys(ring, &field::<Vec<String>>(cert, "generators")?)?,
                    coefficients: parse_polys(ring, &field::<Vec<String>>(cert, "coefficients")?)?,
                };
                if !wt.check(p) {
                    return Err("membership combination does not reproduce p".into());
                }
                Ok(())
            } else {
                recompute(problem, task, r)
            }
        }
    }
}

/// Re-verifies every task of `report` against `problem`.
pub fn replay(report: &Report, problem: &Problem) -> Result<ReplayOutcome> {
    if report.engine != ENGINE || report.engine_version != ENGINE_VERSION || report.schema_version != SCHEMA_VERSION {
        return Err(Error::ReplayIncompatible(format!(
            "report from {} {} (schema {}), this is {ENGINE} {ENGINE_VERSION} (schema {SCHEMA_VERSION})",
            report.engine, report.engine_version, report.schema_version
        )));
    }
    if report.problem_sha256 != problem.digest {
        return Err(Error::ReplayIncompatible("report was produced from a different problem file".into()));
    }
    if report.tasks.len() != problem.tasks.len() {
        return Err(Error::ReplayIncompatible(format!(
            "report lists {} tasks, problem has {}",
            report.tasks.len(),
            problem.tasks.len()
        )));
    }
    let mut failures = Vec::new();
    let mut checked = 0;
    for (task, r) in problem.tasks.iter().zip(&report.tasks) {
        let label = format!("task {} ({})", task.index, task.kind.name());
        if r.index != task.index || r.kind != task.kind || r.subjects != task.subjects || r.window != task.window {
            failures.push(format!("{label}: header does not match the problem"));
            continue;
        }
        if r.status != TaskStatus::Ok {
            continue;
        }
        checked += 1;
        if let Err(e) = check_task(problem, task, r) {
            failures.push(format!("{label}: {e}"));
        }
    }
    Ok(ReplayOutcome { failures, tasks_checked: checked })
}
