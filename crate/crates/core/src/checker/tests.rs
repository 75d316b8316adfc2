use std::io::Write;

use super::*;
use crate::domain::truth_at;

fn f(s: &str) -> Formula {
    parse(s).unwrap()
}

fn claim(kind: ClaimKind, p: &str, c: &str, sem: Semantics) -> Claim {
    Claim::entails("t", kind, p, c, sem, Expected::Holds).unwrap()
}

#[test]
fn empty_claims_file_has_no_claims() {
    assert!(parse_claims("").unwrap().is_empty());
    assert!(parse_claims("  \n\t").unwrap().is_empty());
    assert!(parse_claims("[]").unwrap().is_empty());
}

#[test]
fn claim_schema_errors_report_lines() {
    let text = "[\n  {\"id\": \"a\", \"kind\": \"coherent_entails\",\n   \"premise\": \"p &\", \"conclusion\": \"p\", \"semantics\": \"stable\", \"expected\": \"holds\"}\n]";
    match parse_claims(text) {
        Err(Error::Json { line, message, .. }) => {
            assert_eq!(line, 2);
            assert!(message.contains("syntax error"), "{message}");
        }
        other => panic!("unexpected {other:?}"),
    }
    let unknown = "[{\"id\": \"a\", \"kind\": \"coherent_entails\", \"premise\": \"p\", \"conclusion\": \"p\",\n \"semantics\": \"stable\", \"expected\": \"holds\", \"extra\": 1}]";
    assert!(matches!(parse_claims(unknown), Err(Error::Json { line: 2, .. })));
    let mismatch = "[{\"id\": \"a\", \"kind\": \"truth_entails\", \"premise\": \"p\", \"conclusion\": \"p\", \"semantics\": \"stable\", \"expected\": \"holds\"}]";
    assert!(parse_claims(mismatch).is_err());
    let missing = "[{\"id\": \"a\", \"kind\": \"coherent_entails\", \"premise\": \"p\", \"semantics\": \"stable\", \"expected\": \"holds\"}]";
    assert!(parse_claims(missing).is_err());
}

#[test]
fn kinds_and_semantics_must_fit() {
    assert!(Claim::entails("x", ClaimKind::TruthEntails, "p", "p", Semantics::Stable, Expected::Holds).is_err());
    assert!(Claim::entails("x", ClaimKind::CoherentEntails, "p", "p", Semantics::DomainClassic, Expected::Holds).is_err());
    assert!(Claim::entails("x", ClaimKind::AcceptanceEntails, "p", "p", Semantics::DomainModified, Expected::Holds).is_ok());
}

#[test]
fn statements() {
    let c = claim(ClaimKind::CoherentEntails, "K~p", "~<>p", Semantics::Stable);
    assert_eq!(c.statement(Style::Ascii), "K~p ||= ~<>p [stable]");
    assert_eq!(c.statement(Style::Unicode), "K¬p ⊫ ¬◇p [stable]");
    let c = claim(ClaimKind::TruthEntails, "K<>p", "<>p", Semantics::DomainClassic);
    assert_eq!(c.statement(Style::Ascii), "K<>p |= <>p [domain-classic]");
}

#[test]
fn valid_claims_have_no_countermodel() {
    let b = Bound::worlds(2);
    assert_eq!(find_countermodel(&claim(ClaimKind::CoherentEntails, "p", "p", Semantics::Stable), b).unwrap(), None);
    assert_eq!(find_countermodel(&claim(ClaimKind::AssertoricEquiv, "K~<>p", "K~p", Semantics::Stable), b).unwrap(), None);
    assert_eq!(
        find_countermodel(&claim(ClaimKind::AssertoricEquiv, "p & q", "q & p", Semantics::Stable), b).unwrap(),
        None
    );
}

#[test]
fn uniformity_countermodel_matches_the_reference_model() {
    let c = claim(ClaimKind::CoherentEntails, "<>p", "~K~p", Semantics::Stable);
    let w = find_countermodel(&c, Bound::worlds(3)).unwrap().unwrap();
    assert_eq!(w.worlds(), 2);
    let target = stable_point(reference::uniformity_model(), reference::full_state());
    assert!(isomorphism(&w, &target).is_some());
}

#[test]
fn veridicality_countermodel_matches_the_reference_model() {
    let c = claim(ClaimKind::TruthEntails, "K<>p", "<>p", Semantics::DomainClassic);
    let w = find_countermodel(&c, Bound::worlds(3)).unwrap().unwrap();
    let Witness::Domain(d) = &w else { panic!("domain witness expected") };
    let world = d.world.unwrap();
    assert!(d.state.contains(world));
    assert!(truth_at(&d.model, world, d.state, &f("K<>p"), KVariant::Classic).unwrap());
    assert!(!truth_at(&d.model, world, d.state, &f("<>p"), KVariant::Classic).unwrap());
    let targets = reference::verification_models().map(|m| domain_point(m, reference::verification_state(), Some(0)));
    assert!(targets.iter().any(|t| isomorphism(&w, t).is_some()));
}

#[test]
fn minimized_witnesses_are_fixpoints() {
    let c = claim(ClaimKind::CoherentEntails, "<>p", "~K~p", Semantics::Stable);
    let first = first_countermodel(&c, Bound::worlds(3)).unwrap().unwrap();
    let small = minimize(&c, first.clone()).unwrap();
    assert!(small.worlds() <= first.worlds());
    assert_eq!(minimize(&c, small.clone()).unwrap(), small);
}

#[test]
fn empty_states_never_refute_truth_claims() {
    let [m, _] = reference::verification_models();
    let c = claim(ClaimKind::TruthEntails, "K<>p", "<>p", Semantics::DomainClassic);
    assert!(c.refuted_by(&domain_point(m.clone(), reference::verification_state(), Some(0))).unwrap());
    assert!(!c.refuted_by(&domain_point(m, Intension::empty(), Some(0))).unwrap());
}

#[test]
fn witnesses_survive_json() {
    let ws = [
        stable_point(reference::uniformity_model(), reference::full_state()),
        domain_point(reference::transparency_model(), reference::full_state(), None),
        domain_point(reference::verification_models()[0].clone(), reference::verification_state(), Some(0)),
    ];
    for w in ws {
        assert_eq!(Witness::from_json(&w.to_json()).unwrap(), w);
    }
    assert!(Witness::from_json(&json!({"state": [0]})).is_err());
}

#[test]
fn second_uniformity_principle_holds_with_two_agents() {
    let c = claim(ClaimKind::CoherentEntails, "K{1}<>p", "~K{2}~p", Semantics::Stable);
    assert_eq!(find_countermodel(&c, Bound::worlds(3)).unwrap(), None);
}

#[test]
fn bounds_over_the_cap_are_errors() {
    let c = claim(ClaimKind::CoherentEntails, "p", "p", Semantics::Stable);
    assert!(matches!(find_countermodel(&c, Bound::worlds(99)), Err(Error::CapExceeded { .. })));
    assert!(matches!(find_countermodel(&c, Bound::worlds(0)), Err(Error::CapExceeded { .. })));
}

#[test]
fn supports_claims_read_models_relative_to_the_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("m.json"), reference::uniformity_model().to_json().to_string()).unwrap();
    let mut file = std::fs::File::create(dir.path().join("claims.json")).unwrap();
    write!(
        file,
        r#"[
  {{"id": "might", "kind": "supports", "premise": "<>p", "model": "m.json", "state": [0, 1], "semantics": "stable", "expected": "holds"}},
  {{"id": "not-known", "kind": "supports", "premise": "~K~p", "model": "m.json", "state": [0, 1], "semantics": "stable", "expected": "fails"}},
  {{"id": "ntrans", "kind": "assertoric_equiv", "premise": "K~<>p", "conclusion": "K~p", "semantics": "stable", "expected": "holds"}}
]"#
    )
    .unwrap();
    let reports = check_claims_file(dir.path().join("claims.json"), Bound::worlds(2)).unwrap();
    let ids: Vec<&str> = reports.iter().map(|r| r.id.as_str()).collect();
    assert_eq!(ids, ["might", "not-known", "ntrans"]);
    assert!(reports.iter().all(FactReport::matches));
    assert_eq!(reports[0].bound, None);

    let bad = r#"[{"id": "x", "kind": "supports", "premise": "p", "model": "m.json", "state": [7], "semantics": "stable", "expected": "holds"}]"#;
    std::fs::write(dir.path().join("bad.json"), bad).unwrap();
    assert!(check_claims_file(dir.path().join("bad.json"), Bound::worlds(2)).is_err());
}

#[test]
fn failing_claims_carry_verified_witnesses() {
    let c = Claim::entails("g", ClaimKind::AcceptanceEntails, "K~(p & q)", "K~(p & <>q)", Semantics::DomainModified, Expected::Fails)
        .unwrap();
    let r = check_claim(&c, Bound::worlds(2), Path::new(".")).unwrap();
    assert!(r.matches());
    let w = Witness::from_json(r.witness.as_ref().unwrap()).unwrap();
    assert!(c.refuted_by(&w).unwrap());
}
