use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::problem::{Problem, Task, TaskKind};
use super::report::{Report, TaskReport, TaskStatus, TaskTiming, Timing};
use crate::cartier::{chart_audit, is_pro_regular_pair, prism_condition, verify_cartier, CartierDivisor};
use crate::completion::{cech_homology_report, composite_completion_check, filtration_bitower};
use crate::error::{Error, Result};
use crate::kernel::{Poly, PolyRing};
use crate::regularity::{
    audit_equivalences, is_bounded_torsion, is_pro_regular, is_regular_sequence, is_weakly_pro_regular, RegularityVerdict,
};
use crate::rings::RingPresentation;
use crate::serial::MatrixJson;
use crate::towers::{
    bi_pro_zero_equivalence, is_mittag_leffler, is_pro_zero, lim_lim1, six_term_check, BiProZeroReport, Certificate, LimReport,
    LimStatus,
};

pub(crate) struct Outcome {
    pub verdict: String,
    pub details: Value,
    pub certificate: Value,
    pub diagnostics: Vec<String>,
}

pub(crate) fn cert_json(c: &Certificate, ring: &PolyRing) -> Value {
    serde_json::to_value(c.to_json(ring)).expect("certificates serialize")
}

pub(crate) fn polys(ring: &RingPresentation, ps: &[Poly]) -> Vec<String> {
    ps.iter().map(|p| ring.format(p)).collect()
}

fn lim_details(r: &LimReport) -> Value {
    let mut d = json!({ "lim": r.lim.name(), "lim1": r.lim1.name(), "rule": r.rule });
    if let LimStatus::Presented { module, at } = &r.lim {
        d["presented"] = json!({ "at": at, "module": module.describe() });
    }
    d
}

fn lim_certificate(r: &LimReport, ring: &PolyRing) -> Value {
    json!({
        "tower": r.evidence.certificate.as_ref().map(|c| cert_json(c, ring)),
        "tags": r.evidence.tags,
        "inverses": r.evidence.inverses.iter().map(|(n, m)| json!({ "level": n, "matrix": MatrixJson::from_matrix(ring, m) })).collect::<Vec<_>>(),
        "invariant_factors": r.evidence.invariant_factors.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
    })
}

fn per_index(v: &RegularityVerdict, ring: &PolyRing) -> Value {
    Value::Array(v.per_index.iter().map(|(i, c)| json!({ "index": i, "certificate": cert_json(c, ring) })).collect())
}

fn bi_certificate(r: &BiProZeroReport, ring: &PolyRing) -> Value {
    json!({
        "diagonal": cert_json(&r.diagonal, ring),
        "cells": r.cell_witnesses.iter().map(|w| json!({
            "target": [w.target.0, w.target.1],
            "source": [w.source.0, w.source.1],
            "lift": MatrixJson::from_matrix(ring, &w.lift),
        })).collect::<Vec<_>>(),
    })
}

fn bi_details(r: &BiProZeroReport) -> Value {
    json!({
        "bi_verdict": r.bi_verdict.name(),
        "diagonal_verdict": r.diagonal.verdict.name(),
        "agree": r.agree,
        "cross_checked": r.cross_checked,
        "failing_cells": r.failing_cells.iter().map(|c| [c.0, c.1]).collect::<Vec<_>>(),
    })
}

pub(crate) fn divisor(problem: &Problem, task: &Task) -> Result<CartierDivisor> {
    let (ideal, charts) = &problem.divisors[task.subject("divisor")];
    CartierDivisor::new(ideal.clone(), charts.clone())
}

fn execute(problem: &Problem, task: &Task) -> Result<Outcome> {
    let w = task.window;
    let out = |verdict: &str, details: Value, certificate: Value, diagnostics: Vec<String>| Outcome {
        verdict: verdict.to_string(),
        details,
        certificate,
        diagnostics,
    };
    Ok(match task.kind {
        TaskKind::ProZero | TaskKind::MittagLeffler => {
            let t = problem.tower(task.subject("tower"), w)?;
            let c = if task.kind == TaskKind::ProZero { is_pro_zero(&t)? } else { is_mittag_leffler(&t)? };
            let indices: Vec<[usize; 2]> = c.indices().into_iter().map(|(n, m)| [n, m]).collect();
            let pr = t.ring().poly_ring();
            out(
                c.verdict.name(),
                json!({ "levels": t.window(), "indices": indices, "failing_levels": c.failing_levels }),
                json!({ "tower": cert_json(&c, pr) }),
                c.diagnostics.clone(),
            )
        }
        TaskKind::Lim => {
            let t = problem.tower(task.subject("tower"), w)?;
            let r = lim_lim1(&t)?;
            let verdict = format!("LIM_{} LIM1_{}", r.lim.name(), r.lim1.name());
            out(&verdict, lim_details(&r), lim_certificate(&r, t.ring().poly_ring()), r.diagnostics.clone())
        }
        TaskKind::SixTerm => {
            let ses = problem.tower_ses(task.subject("f"), task.subject("g"), w)?;
            let r = six_term_check(&ses)?;
            out(
                r.status.name(),
                json!({
                    "levelwise_exact": r.levelwise_exact,
                    "commutes": r.commutes,
                    "level": r.level,
                    "limits": r.limits.iter().map(lim_details).collect::<Vec<_>>(),
                }),
                Value::Null,
                r.diagnostics.clone(),
            )
        }
        TaskKind::BiProZero => {
            let f = problem.filtration(task.subject("filtration"), w)?;
            let bt = filtration_bitower(&f, &problem.sequences[task.subject("sequence")])?;
            let r = bi_pro_zero_equivalence(&bt)?;
            let verdict = if r.holds() { "EQUIVALENCE_HOLDS" } else { "EQUIVALENCE_FAILS" };
            out(verdict, bi_details(&r), bi_certificate(&r, bt.ring().poly_ring()), r.diagnostics.clone())
        }
        TaskKind::Regular => {
            let seq = &problem.sequences[task.subject("sequence")];
            let m = &problem.modules[task.subject("module")];
            let r = is_regular_sequence(seq, m)?;
            out(
                if r.regular { "REGULAR" } else { "NOT_REGULAR" },
                json!({ "failing_index": r.failing_index, "quotient_nonzero": r.quotient_nonzero }),
                json!({ "failing_element": r.failing_element.as_ref().map(|e| polys(m.ring(), e)) }),
                vec![],
            )
        }
        TaskKind::BoundedTorsion => {
            let m = &problem.modules[task.subject("module")];
            let x = task.element.as_ref().expect("validated");
            let r = is_bounded_torsion(m, x, w)?;
            let esc: Vec<Value> =
                r.escalation.iter().map(|e| json!({ "k": e.k, "element": polys(m.ring(), &e.element) })).collect();
            let mut diagnostics = r.certificate.diagnostics.clone();
            diagnostics.extend(r.diagnostics.iter().cloned());
            out(
                r.verdict.name(),
                json!({ "index": r.index, "escalation": esc }),
                json!({ "tower": cert_json(&r.certificate, m.ring().poly_ring()), "escalation": esc }),
                diagnostics,
            )
        }
        TaskKind::ProRegular | TaskKind::WeaklyProRegular => {
            let seq = &problem.sequences[task.subject("sequence")];
            let m = &problem.modules[task.subject("module")];
            let v = if task.kind == TaskKind::ProRegular { is_pro_regular(seq, m, w)? } else { is_weakly_pro_regular(seq, m, w)? };
            let pr = m.ring().poly_ring();
            let mut diagnostics = Vec::new();
            for (i, c) in &v.per_index {
                diagnostics.extend(c.diagnostics.iter().map(|d| format!("index {i}: {d}")));
            }
            diagnostics.extend(v.implications_checked.iter().cloned());
            out(
                v.name(),
                json!({ "per_index": v.per_index.iter().map(|(i, c)| json!({ "index": i, "verdict": c.verdict.name(), "indices": c.indices() })).collect::<Vec<_>>() }),
                json!({ "per_index": per_index(&v, pr) }),
                diagnostics,
            )
        }
        TaskKind::Audit => {
            let seq = &problem.sequences[task.subject("sequence")];
            let m = &problem.modules[task.subject("module")];
            let r = audit_equivalences(seq, m, w)?;
            let pr = m.ring().poly_ring();
            let verdict = if r.all_agree() {
                "AGREE"
            } else if r.faces.iter().any(|f| f.status == crate::regularity::FaceStatus::Disagree) {
                "DISAGREE"
            } else {
                "PARTIAL"
            };
            out(
                verdict,
                json!({
                    "regular": r.regular.regular,
                    "pro_regular": r.pro_regular.name(),
                    "weakly_pro_regular": r.weakly_pro_regular.name(),
                    "faces": r.faces.iter().map(|f| json!({ "name": f.name, "status": f.status.name(), "positive": f.positive, "details": f.details })).collect::<Vec<_>>(),
                }),
                json!({ "pro_regular": per_index(&r.pro_regular, pr), "weakly_pro_regular": per_index(&r.weakly_pro_regular, pr) }),
                vec![],
            )
        }
        TaskKind::CechHomology => {
            let seq = &problem.sequences[task.subject("sequence")];
            let m = &problem.modules[task.subject("module")];
            let r = cech_homology_report(task.degree.expect("validated"), seq, m, w)?;
            let pr = m.ring().poly_ring();
            let cert = |l: &LimReport| l.evidence.certificate.as_ref().map(|c| cert_json(c, pr));
            out(
                r.conclusion.name(),
                json!({ "degree": r.degree, "lower": lim_details(&r.lower), "upper": r.upper.as_ref().map(lim_details) }),
                json!({ "lower": cert(&r.lower), "upper": r.upper.as_ref().and_then(cert) }),
                r.diagnostics.clone(),
            )
        }
        TaskKind::CompositeCompletion => {
            let f = problem.filtration(task.subject("filtration"), w)?;
            let seq = &problem.sequences[task.subject("sequence")];
            let r = composite_completion_check(&f, seq)?;
            let pr = seq.ring().poly_ring();
            let mut diagnostics = r.diagnostics.clone();
            diagnostics.extend(r.diagonal.diagnostics.iter().cloned());
            out(
                r.status.name(),
                json!({
                    "vanishing_route": r.vanishing_route,
                    "natural": r.natural,
                    "levels_checked": r.level_isomorphisms.len(),
                    "diagonal": bi_details(&r.diagonal),
                }),
                json!({
                    "isomorphisms": r.level_isomorphisms.iter().map(|c| json!({
                        "forward": MatrixJson::from_matrix(pr, &c.forward),
                        "backward": MatrixJson::from_matrix(pr, &c.backward),
                    })).collect::<Vec<_>>(),
                    "bitower": bi_certificate(&r.diagonal, pr),
                }),
                diagnostics,
            )
        }
        TaskKind::VerifyCartier => {
            let (ideal, charts) = &problem.divisors[task.subject("divisor")];
            let r = verify_cartier(ideal, charts)?;
            let ring = ideal.ring();
            out(
                if r.verified { "CARTIER" } else { "NOT_CARTIER" },
                json!({
                    "failing_chart": r.failing_chart.map(|i| i + 1),
                    "failing_check": r.failing_check.map(|c| c.name()),
                    "charts": r.charts.iter().map(|e| json!({ "chart": e.index + 1, "ideal_equality": e.ideal_over_x.is_some() && e.x_over_ideal.is_some(), "nonzerodivisor": e.nonzerodivisor })).collect::<Vec<_>>(),
                }),
                json!({
                    "covering": r.covering.as_ref().map(|c| polys(ring, c)),
                    "charts": r.charts.iter().map(|e| {
                        let lr = &e.localization.ring;
                        json!({
                            "ideal_over_x": e.ideal_over_x.as_ref().map(|c| polys(lr, c)),
                            "x_over_ideal": e.x_over_ideal.as_ref().map(|c| polys(lr, c)),
                        })
                    }).collect::<Vec<_>>(),
                    "containment": r.containment.as_ref().map(|rows| rows.iter().map(|c| polys(ring, c)).collect::<Vec<_>>()),
                }),
                vec![],
            )
        }
        TaskKind::ProRegularPair => {
            let ideal = &problem.ideals[task.subject("ideal")];
            let c = is_pro_regular_pair(ideal, task.element.as_ref().expect("validated"), w)?;
            let indices: Vec<[usize; 2]> = c.indices().into_iter().map(|(n, m)| [n, m]).collect();
            out(
                c.verdict.name(),
                json!({ "indices": indices, "failing_levels": c.failing_levels }),
                json!({ "tower": cert_json(&c, ideal.ring().poly_ring()) }),
                c.diagnostics.clone(),
            )
        }
        TaskKind::ChartAudit => {
            let d = divisor(problem, task)?;
            let r = chart_audit(&d, task.element.as_ref().expect("validated"), w)?;
            let ring = d.ring();
            out(
                r.status.name(),
                json!({
                    "positive": r.verdict(),
                    "faces": r.faces.iter().map(|f| json!({ "name": f.name, "positive": f.positive, "details": f.details })).collect::<Vec<_>>(),
                    "injective_levels": r.injectivity.len(),
                }),
                json!({
                    "pair": r.pair_certificate.as_ref().map(|c| cert_json(c, ring.poly_ring())),
                    "injectivity": r.injectivity.iter().map(|i| json!({ "level": i.level, "exponents": i.exponents, "combination": polys(ring, &i.combination) })).collect::<Vec<_>>(),
                }),
                r.diagnostics.clone(),
            )
        }
        TaskKind::PrismCondition => {
            let p = &problem.prisms[task.subject("prism")];
            let ring = p.ring();
            match prism_condition(p)? {
                Some(wt) => out(
                    "HOLDS",
                    json!({ "p": p.prime() }),
                    json!({ "generators": polys(ring, &wt.generators), "coefficients": polys(ring, &wt.coefficients) }),
                    vec![],
                ),
                None => out(
                    "FAILS",
                    json!({ "p": p.prime() }),
                    Value::Null,
                    vec![format!("{} has nonzero normal form modulo I + φ(I)R", p.prime())],
                ),
            }
        }
    })
}

pub(crate) fn run_task(problem: &Problem, task: &Task) -> TaskReport {
    let base = |status, verdict: String| TaskReport {
        index: task.index,
        id: task.id.clone(),
        kind: task.kind,
        subjects: task.subjects.clone(),
        window: task.window,
        status,
        verdict,
        details: Value::Null,
        certificate: Value::Null,
        diagnostics: vec![],
        error: None,
    };
    match execute(problem, task) {
        Ok(o) => TaskReport {
            details: o.details,
            certificate: o.certificate,
            diagnostics: o.diagnostics,
            ..base(TaskStatus::Ok, o.verdict)
        },
        Err(e @ Error::DegreeCapExceeded { .. }) => {
            TaskReport { error: Some(e.to_string()), ..base(TaskStatus::CapExceeded, e.code().into()) }
        }
        Err(e) => TaskReport { error: Some(e.to_string()), ..base(TaskStatus::Error, e.code().into()) },
    }
}

/// Runs every task on a pool of `jobs` threads; results are assembled in
/// task order, so the report does not depend on scheduling.
pub fn run_problem(problem: &Problem, jobs: usize) -> Result<(Report, Timing)> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
    let results: Vec<(TaskReport, u128)> = pool.install(|| {
        problem
            .tasks
            .par_iter()
            .map(|t| {
                let start = Instant::now();
                let r = run_task(problem, t);
                (r, start.elapsed().as_millis())
            })
            .collect()
    });
    let timing = Timing {
        problem_sha256: problem.digest.clone(),
        jobs: jobs.max(1),
        tasks: results.iter().map(|(r, ms)| TaskTiming { index: r.index, millis: *ms }).collect(),
    };
    Ok((Report::new(problem.digest.clone(), results.into_iter().map(|(r, _)| r).collect()), timing))
}
