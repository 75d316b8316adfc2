//! The frozen regression suite: named claims, the reference counter-models,
//! and the property survey.

use std::path::Path;
use std::time::Instant;

use serde_json::json;

use crate::domain::{accepts, truth_at, KVariant};
use crate::error::Result;
use crate::stable::supports;
use crate::sweep::Bound;
use crate::syntax::{parse, Formula};

use super::report::FactReport;
use super::{check_claim, domain_point, isomorphism, stable_point, survey, Claim, ClaimKind, Expected, Semantics, Witness};

/// Known counter-models, with worlds `w1, w2` numbered `0, 1`.
pub mod reference {
    use std::collections::BTreeMap;

    use crate::models::{BoundedModel, ClassicalModel, InformationModel};
    use crate::Intension;

    fn set(ws: &[usize]) -> Intension {
        ws.iter().copied().collect()
    }

    fn base(atoms: &[(&str, &[usize])]) -> InformationModel {
        let v: BTreeMap<String, Intension> = atoms.iter().map(|(a, ws)| (a.to_string(), set(ws))).collect();
        InformationModel::new(2, v).expect("two worlds")
    }

    /// `I(p) = {w2}`, `k^{w1} = W`; `k^{w2}` is left open, so both completions.
    pub fn verification_models() -> [ClassicalModel; 2] {
        [set(&[1]), set(&[0, 1])].map(|k2| ClassicalModel::new(base(&[("p", &[1])]), vec![set(&[0, 1]), k2]).expect("k is reflexive"))
    }

    /// The evaluation state `{w1}` of the verification counter-model.
    pub fn verification_state() -> Intension {
        set(&[0])
    }

    /// `p` only at `w1`, `q` only at `w2`, `k^w = {w1, w2}`.
    pub fn transparency_model() -> ClassicalModel {
        ClassicalModel::new(base(&[("p", &[0]), ("q", &[1])]), vec![set(&[0, 1]), set(&[0, 1])]).expect("k is reflexive")
    }

    /// `i^w = k^w = {w}`, `p` only at `w1`.
    pub fn uniformity_model() -> BoundedModel {
        BoundedModel::single_agent(base(&[("p", &[0])]), vec![set(&[0]), set(&[1])], vec![set(&[0]), set(&[1])])
            .expect("valid bounded model")
    }

    pub fn full_state() -> Intension {
        set(&[0, 1])
    }
}

fn f(s: &str) -> Formula {
    parse(s).expect("suite formulas parse")
}

/// The search claims of the suite, in report order.
pub fn suite_claims() -> Vec<Claim> {
    use ClaimKind::*;
    use Expected::*;
    use Semantics::*;
    type Row = (&'static str, ClaimKind, &'static str, Option<&'static str>, Semantics, Expected);
    let rows: [Row; 22] = [
        ("classic/ntrans", AcceptanceEntails, "K~<>p", Some("K~p"), DomainClassic, Holds),
        ("classic/ntrans-converse", AcceptanceEntails, "K~p", Some("K~<>p"), DomainClassic, Holds),
        ("classic/ver", TruthEntails, "K<>p", Some("<>p"), DomainClassic, Fails),
        ("modified/ver", TruthEntails, "K<>p", Some("<>p"), DomainModified, Holds),
        ("modified/ntrans-truth", TruthEntails, "K~p", Some("K~<>p"), DomainModified, Fails),
        ("modified/ntrans", AcceptanceEntails, "K~<>p", Some("K~p"), DomainModified, Holds),
        ("modified/ntrans-converse", AcceptanceEntails, "K~p", Some("K~<>p"), DomainModified, Holds),
        ("modified/gent", AcceptanceEntails, "K~(p & q)", Some("K~(p & <>q)"), DomainModified, Fails),
        ("contradiction/domain", Incoherent, "p & <>~p", None, DomainClassic, Holds),
        ("contradiction/domain-dual", Incoherent, "~p & <>p", None, DomainClassic, Holds),
        ("contradiction/truth-consistent", TruthEntails, "p & <>~p", Some("~(p & <>~p)"), DomainClassic, Fails),
        ("contradiction/stable", Incoherent, "p & <>~p", None, Stable, Holds),
        ("contradiction/stable-dual", Incoherent, "~p & <>p", None, Stable, Holds),
        ("stable/gent", CoherentEntails, "K~(p & <>q)", Some("K~(p & q)"), Stable, Holds),
        ("stable/gent-converse", CoherentEntails, "K~(p & q)", Some("K~(p & <>q)"), Stable, Holds),
        ("stable/ntrans", CoherentEntails, "K~<>p", Some("K~p"), Stable, Holds),
        ("stable/ntrans-converse", CoherentEntails, "K~p", Some("K~<>p"), Stable, Holds),
        ("stable/ntrans-assertoric", AssertoricEquiv, "K~<>p", Some("K~p"), Stable, Holds),
        ("stable/ver-might", CoherentEntails, "K<>p", Some("<>p"), Stable, Holds),
        ("stable/eluk", CoherentEntails, "K~p", Some("~<>p"), Stable, Holds),
        ("stable/uniformity-i", CoherentEntails, "<>p", Some("~K~p"), Stable, Fails),
        ("stable/uniformity-ii", CoherentEntails, "K{1}<>p", Some("~K{2}~p"), Stable, Holds),
    ];
    rows.into_iter()
        .map(|(id, kind, p, c, sem, exp)| Claim::new(id, kind, f(p), c.map(f), sem, exp).expect("suite claims are well formed"))
        .collect()
}

/// Reference witnesses a search claim's witness must be isomorphic to.
fn expected_shapes(id: &str) -> Vec<Witness> {
    match id {
        "classic/ver" => reference::verification_models()
            .into_iter()
            .map(|m| domain_point(m, reference::verification_state(), Some(0)))
            .collect(),
        "stable/uniformity-i" => vec![stable_point(reference::uniformity_model(), reference::full_state())],
        _ => Vec::new(),
    }
}

fn point_report(id: &str, text: &str, holds: bool, witness: &Witness) -> FactReport {
    let mut r = FactReport::bare(id, text.to_string(), text.to_string(), Expected::Holds, holds, None);
    r.witness = Some(witness.to_json());
    r
}

/// Exact values on the reference counter-models.
fn reference_model_reports() -> Result<Vec<FactReport>> {
    let mut out = Vec::new();

    let [m, _] = reference::verification_models();
    let i = reference::verification_state();
    let k = truth_at(&m, 0, i, &f("K<>p"), KVariant::Classic)?;
    let d = truth_at(&m, 0, i, &f("<>p"), KVariant::Classic)?;
    let mut r = point_report(
        "classic/ver-model",
        "[K<>p]^{w1,{w1}} = 1 and [<>p]^{w1,{w1}} = 0 [domain-classic]",
        k && !d,
        &domain_point(m.clone(), i, Some(0)),
    );
    r.note(format!("[K<>p] = {}, [<>p] = {}", k as u8, d as u8));
    let km = truth_at(&m, 0, i, &f("K<>p"), KVariant::ModifiedFactive)?;
    r.note(format!("under the factive clause [K<>p] = {}", km as u8));
    out.push(r);

    let m = reference::transparency_model();
    let i = reference::full_state();
    let v = KVariant::ModifiedFactive;
    let a = accepts(&m, i, &f("K~(p & q)"), v)?;
    let b = accepts(&m, i, &f("K~(p & <>q)"), v)?;
    let mut r = point_report(
        "modified/gent-model",
        "{w1,w2} ||- K~(p & q) and not {w1,w2} ||- K~(p & <>q) [domain-modified]",
        a && !b,
        &domain_point(m, i, None),
    );
    r.note(format!("accepts K~(p & q): {a}, accepts K~(p & <>q): {b}"));
    out.push(r);

    let m = reference::uniformity_model();
    let i = reference::full_state();
    let might = supports(&m, i, &f("<>p"))?;
    let unif = supports(&m, i, &f("~K~p"))?;
    let mut r = point_report(
        "stable/uniformity-model",
        "{w1,w2} ||- <>p and not {w1,w2} ||- ~K~p [stable]",
        m.is_internally_coherent(i) && might && !unif,
        &stable_point(m.clone(), i),
    );
    r.note(format!("coherent: {}, supports <>p: {might}, supports ~K~p: {unif}", m.is_internally_coherent(i)));
    out.push(r);
    Ok(out)
}

fn survey_reports(bound: Bound) -> Result<Vec<FactReport>> {
    let start = Instant::now();
    let s = survey(bound)?;
    let elapsed = start.elapsed() / s.checks.len().max(1) as u32;
    Ok(s.checks
        .into_iter()
        .map(|c| {
            let mut r = FactReport::bare(c.id, c.title.to_string(), c.title.to_string(), Expected::Holds, c.violation.is_none(), Some(bound));
            r.note(format!("{} bounded models, {} formulas over p, q", s.models, s.formulas));
            if let Some(v) = c.violation {
                let mut w = json!({ "model": v.model.to_json(), "detail": v.detail });
                if let Some(i) = v.state {
                    w["state"] = json!(i.iter().collect::<Vec<_>>());
                }
                if let Some(phi) = v.formula {
                    w["formula"] = json!(phi.to_string());
                }
                r.witness = Some(w);
            }
            r.elapsed = elapsed;
            r
        })
        .collect())
}

/// Run the whole suite at the given bound: search claims (with isomorphism
/// checks against the reference witnesses), exact values on the reference
/// models, and the property survey.
pub fn run_suite(bound: Bound) -> Result<Vec<FactReport>> {
    let bound = bound.with_formula_size(bound.formula_size());
    bound.check()?;
    let mut reports = Vec::new();
    for claim in suite_claims() {
        let mut r = check_claim(&claim, bound, Path::new("."))?;
        let shapes = expected_shapes(&claim.id);
        if !shapes.is_empty() {
            match &r.witness {
                Some(v) => {
                    let w = Witness::from_json(v)?;
                    match shapes.iter().find_map(|s| isomorphism(&w, s)) {
                        Some(perm) => r.note(format!("witness is isomorphic to the reference model (world map {perm:?})")),
                        None => r.mismatch("witness is not isomorphic to the reference model"),
                    }
                }
                None => r.mismatch("no witness to compare with the reference model"),
            }
        }
        if claim.id == "modified/gent" {
            let reference_witness = domain_point(reference::transparency_model(), reference::full_state(), None);
            if claim.refuted_by(&reference_witness)? {
                r.note("the reference model refutes it as well");
            } else {
                r.mismatch("the reference model does not refute it");
            }
        }
        if claim.kind == ClaimKind::Incoherent && claim.semantics == Semantics::Stable {
            let empty = crate::Intension::empty();
            let m = reference::uniformity_model();
            r.note(format!("the empty state supports it: {}", supports(&m, empty, &claim.premise)?));
        }
        reports.push(r);
    }
    reports.extend(reference_model_reports()?);
    reports.extend(survey_reports(bound)?);
    Ok(reports)
}
