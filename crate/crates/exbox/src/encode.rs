//! JSON renderings of core results. Rationals become `"p/q"` strings and
//! events become `"(01|x1,x2)"`.

use exbox_core::exclusivity::E1ViolationCertificate;
use exbox_core::gm::{self, Bound, BoundKind, ExclusiveSet, GmSideExtension, Side, UnphysicalityCertificate};
use exbox_core::marginal::{verify_certificate, ChValue, Extension, FeasibilityResult};
use exbox_core::polytope::{NdViolation, Vertex};
use exbox_core::{ProbabilityBox, Rational, Scenario};
use serde_json::{json, Map, Value};

use crate::format::BoxFile;

pub fn rat(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn rats<'a>(rs: impl IntoIterator<Item = &'a Rational>) -> Value {
    Value::Array(rs.into_iter().map(rat).collect())
}

pub fn nd_violation(s: &Scenario, v: &NdViolation) -> Value {
    json!({
        "event": s.format_event(&v.event),
        "contexts": [s.context_key(v.contexts.0), s.context_key(v.contexts.1)],
        "values": [rat(&v.values.0), rat(&v.values.1)],
    })
}

pub fn e1_certificate(pbox: &ProbabilityBox, c: &E1ViolationCertificate) -> Value {
    let s = pbox.scenario();
    json!({
        "events": c.events.iter().map(|e| s.format_event(e)).collect::<Vec<_>>(),
        "probabilities": rats(&c.probabilities),
        "total": rat(&c.total),
        "verified": c.verify(pbox),
    })
}

pub fn extension(s: &Scenario, ext: &Extension, verified: bool) -> Value {
    let vars: Vec<&str> = ext.problem.variables.iter().map(|i| s.input(*i).label.as_str()).collect();
    let mut out = Map::new();
    out.insert("variables".into(), json!(vars));
    match &ext.result {
        FeasibilityResult::Feasible { joint } => {
            out.insert("feasible".into(), json!(true));
            let atoms: Map<String, Value> = joint
                .iter()
                .enumerate()
                .map(|(k, p)| (Scenario::outcome_string(&ext.problem.atom(k)), rat(p)))
                .collect();
            out.insert("joint".into(), Value::Object(atoms));
        }
        FeasibilityResult::Infeasible { farkas } => {
            out.insert("feasible".into(), json!(false));
            let rows: Vec<Value> = ext
                .problem
                .rows
                .iter()
                .zip(farkas)
                .zip(&ext.problem.rhs)
                .filter(|((_, y), _)| !y.is_zero())
                .map(|((e, y), b)| json!({"event": s.format_event(e), "multiplier": rat(y), "probability": rat(b)}))
                .collect();
            out.insert("farkas".into(), Value::Array(rows));
        }
    }
    out.insert("verified".into(), json!(verified));
    Value::Object(out)
}

pub fn ch_value(s: &Scenario, v: &ChValue) -> Value {
    let l = |i: usize| s.input(i).label.clone();
    json!({
        "a": [l(v.a[0]), l(v.a[1])],
        "b": [l(v.b[0]), l(v.b[1])],
        "outcome": v.outcome,
        "value": rat(&v.value),
        "within_bounds": v.within_bounds(),
    })
}

pub fn vertex(name: &str, v: &Vertex) -> Value {
    json!({
        "name": name,
        "deterministic": v.deterministic,
        "parameters": rats(&v.params.to_array()),
        "box": BoxFile::from_box(&v.to_box()),
    })
}

fn exclusive_set(s: &Scenario, set: &ExclusiveSet) -> Value {
    json!({
        "name": set.name,
        "side": set.side.to_string(),
        "events": set.events.iter().map(|e| s.format_event(e)).collect::<Vec<_>>(),
        "total": set.total.to_string(),
    })
}

fn bound(s: &Scenario, b: &Bound) -> Value {
    let claim = match b.kind {
        BoundKind::Upper(k) => format!("{} <= {}", ["alpha", "beta", "gamma"][k], b.value),
        BoundKind::LowerSum => format!("alpha + beta + gamma >= {}", b.value),
    };
    json!({"bound": claim, "value": rat(&b.value), "witness": exclusive_set(s, &b.witness)})
}

pub fn unphysicality(cert: &UnphysicalityCertificate) -> Value {
    let s = gm::extended_scenario();
    let f = &cert.fine_check;
    let sides: Vec<Value> = cert
        .side_witnesses
        .iter()
        .zip([Side::A, Side::B])
        .map(|(w, side)| {
            let ext = GmSideExtension::new(
                side,
                cert.forced_point[0].clone(),
                cert.forced_point[1].clone(),
                cert.forced_point[2].clone(),
                cert.c.clone(),
            )
            .expect("forced point in range");
            let verified = verify_certificate(&w.result, &w.problem) == Ok(true);
            extension(ext.to_box().scenario(), w, verified)
        })
        .collect();
    let lhv_verified = verify_certificate(&cert.lhv_witness.result, &cert.lhv_witness.problem) == Ok(true);
    json!({
        "c": rat(&cert.c),
        "upper_bounds": cert.bounds.upper.iter().map(|b| bound(&s, b)).collect::<Vec<_>>(),
        "lower_bound": bound(&s, &cert.bounds.lower),
        "forced_point": rats(&cert.forced_point),
        "fine_check": {
            "sum_lower": f.sum_lower,
            "beta_gamma": f.beta_gamma,
            "alpha_beta": f.alpha_beta,
            "alpha_gamma": f.alpha_gamma,
        },
        "side_tri_joints": sides,
        "lhv_witness": extension(&gm::gm_scenario(), &cert.lhv_witness, lhv_verified),
        "verified": cert.verify(),
    })
}
