use super::*;
use crate::arena::formulas_up_to;
use crate::models::{bounded_frames, enumerate_bounded_models, InformationModel};
use crate::syntax::parse;
use std::collections::BTreeMap;

fn f(s: &str) -> Formula {
    parse(s).unwrap()
}

fn set(ws: &[usize]) -> Intension {
    ws.iter().copied().collect()
}

/// w1, w2 as 0, 1; p only at w1; i^w = k^w = {w}.
fn uniformity_model() -> BoundedModel {
    let base = InformationModel::new(2, BTreeMap::from([("p".to_string(), set(&[0]))])).unwrap();
    BoundedModel::single_agent(base, vec![set(&[0]), set(&[1])], vec![set(&[0]), set(&[1])]).unwrap()
}

const B2: Bound = Bound { max_worlds: 2, max_formula_size: None };
const B3: Bound = Bound { max_worlds: 3, max_formula_size: None };

#[test]
fn might_without_not_known_not() {
    let m = uniformity_model();
    let i = set(&[0, 1]);
    assert!(m.is_internally_coherent(i));
    assert!(supports(&m, i, &f("<>p")).unwrap());
    assert!(!supports(&m, i, &f("~K~p")).unwrap());
    assert_eq!(verdict(&m, i, &f("K~p")).unwrap(), Verdict { supports: false, rejects: false });
}

#[test]
fn pointwise_k_on_the_uniformity_model() {
    let m = uniformity_model();
    let i = set(&[0, 1]);
    // w2's conjunct: every u in k^{w2} has i^u supporting ~p, so no witness for rejection there
    assert!(!rejects_k_pointwise(&m, set(&[1]), Agent::ONE, &f("~p")).unwrap());
    assert!(rejects_k_pointwise(&m, set(&[0]), Agent::ONE, &f("~p")).unwrap());
    assert!(!rejects_k_pointwise(&m, i, Agent::ONE, &f("~p")).unwrap());
    assert!(!supports_k_pointwise(&m, i, Agent::ONE, &f("~p")).unwrap());
}

#[test]
fn single_world_pointwise_k() {
    for m in enumerate_bounded_models(1, &["p"], &[Agent::ONE]).unwrap() {
        let w0 = set(&[0]);
        let want = m.base().extension("p").unwrap().contains(0);
        assert_eq!(supports_k_pointwise(&m, w0, Agent::ONE, &f("p")).unwrap(), want);
    }
}

#[test]
fn singletons_collapse_might() {
    let phis = formulas_up_to(&["p", "q"], &[Agent::ONE], 4);
    for m in enumerate_bounded_models(2, &["p", "q"], &[Agent::ONE]).unwrap().step_by(7) {
        for w in 0..2 {
            let s = Intension::singleton(w);
            for phi in &phis {
                assert_eq!(supports(&m, s, &Formula::might(phi.clone())).unwrap(), supports(&m, s, phi).unwrap());
            }
        }
    }
}

#[test]
fn empty_state_is_vacuous_except_for_might() {
    let m = uniformity_model();
    let e = Intension::empty();
    assert_eq!(verdict(&m, e, &f("p")).unwrap(), Verdict { supports: true, rejects: true });
    assert_eq!(verdict(&m, e, &f("K<>p")).unwrap(), Verdict { supports: true, rejects: true });
    assert!(!supports(&m, e, &f("<>p")).unwrap());
    assert!(rejects(&m, e, &f("<>p")).unwrap());
}

#[test]
fn atoms_never_both_on_nonempty_states() {
    for m in enumerate_bounded_models(3, &["p"], &[]).unwrap() {
        for i in m.universe().subsets().skip(1) {
            let v = verdict(&m, i, &f("p")).unwrap();
            assert!(!(v.supports && v.rejects));
        }
    }
}

#[test]
fn disjunction_support_is_a_split() {
    for m in enumerate_bounded_models(3, &["p", "q"], &[]).unwrap() {
        for i in m.universe().subsets() {
            let split = i.subsets().any(|i1| {
                supports(&m, i1, &f("p")).unwrap() && supports(&m, i.difference(i1), &f("q")).unwrap()
            });
            assert_eq!(supports(&m, i, &f("p | q")).unwrap(), split);
        }
    }
}

#[test]
fn query_errors() {
    let m = uniformity_model();
    assert!(matches!(supports(&m, set(&[0]), &f("q")), Err(Error::UnknownAtom(_))));
    assert!(matches!(supports(&m, set(&[0]), &f("K{2}p")), Err(Error::UnknownAgent(_))));
    assert!(matches!(supports(&m, set(&[3]), &f("p")), Err(Error::OutOfRange { .. })));
}

#[test]
fn tables_agree_with_reference_evaluator() {
    let mut arena = FormulaArena::new();
    let ids: Vec<NodeId> = arena.enumerate(&["p", "q"], &[Agent::ONE], 4).into_iter().flatten().collect();
    let formulas: Vec<Formula> = ids.iter().map(|&id| arena.formula(id)).collect();
    for n in 1..=2 {
        for m in enumerate_bounded_models(n, &["p", "q"], &[Agent::ONE]).unwrap() {
            for clause in [KClause::Refinements, KClause::Pointwise] {
                let t = StableTables::build(&m, &arena, clause).unwrap();
                for (&id, phi) in ids.iter().zip(&formulas) {
                    for i in m.universe().subsets() {
                        assert_eq!(t.supports(id, i), supports(&m, i, phi).unwrap(), "{phi} at {i}");
                        assert_eq!(t.rejects(id, i), rejects(&m, i, phi).unwrap(), "{phi} at {i}");
                    }
                }
            }
        }
    }
}

#[test]
fn tables_agree_with_reference_on_three_worlds() {
    let mut arena = FormulaArena::new();
    let ids: Vec<NodeId> = arena.enumerate(&["p"], &[Agent::ONE], 4).into_iter().flatten().collect();
    for frame in bounded_frames(3, &[Agent::ONE]).iter().step_by(5) {
        for ext in 0..8usize {
            let m = frame.with_valuation(3, BTreeMap::from([("p".to_string(), Intension::from_index(ext))]));
            let t = StableTables::build(&m, &arena, KClause::Refinements).unwrap();
            for &id in &ids {
                let phi = arena.formula(id);
                for i in m.universe().subsets() {
                    assert_eq!(t.supports(id, i), supports(&m, i, &phi).unwrap());
                    assert_eq!(t.rejects(id, i), rejects(&m, i, &phi).unwrap());
                }
            }
        }
    }
}

#[test]
fn k_clauses_agree_on_small_models() {
    let mut arena = FormulaArena::new();
    arena.enumerate(&["p", "q"], &[Agent::ONE], 5);
    for n in 1..=3 {
        for m in enumerate_bounded_models(n, &["p", "q"], &[Agent::ONE]).unwrap().step_by(3) {
            let a = StableTables::build(&m, &arena, KClause::Refinements).unwrap();
            let b = StableTables::build(&m, &arena, KClause::Pointwise).unwrap();
            assert_eq!(a.first_disagreement(&b), None);
        }
    }
}

#[test]
fn coherent_consequence_examples() {
    assert!(coherent_entails(&f("K<>p"), &f("<>p"), B3).unwrap().is_valid());
    assert!(coherent_entails(&f("K~(p & <>q)"), &f("K~(p & q)"), B3).unwrap().is_valid());
    assert!(coherent_entails(&f("K~(p & q)"), &f("K~(p & <>q)"), B3).unwrap().is_valid());
    assert!(coherent_entails(&f("K~p"), &f("~<>p"), B3).unwrap().is_valid());
    let ce = coherent_entails(&f("<>p"), &f("~K~p"), B3).unwrap().into_counterexample().unwrap();
    assert_eq!(ce.model.worlds(), 2);
    assert!(refutes_coherent(&ce, &f("<>p"), &f("~K~p")).unwrap());
    assert!(coherent_entails(&f("p"), &f("p"), B3).unwrap().is_valid());
}

#[test]
fn assertoric_equivalence_examples() {
    assert!(assertorically_equivalent(&f("p & q"), &f("q & p"), B3, StateScope::All).unwrap().is_valid());
    assert!(assertorically_equivalent(&f("p"), &f("p"), B3, StateScope::All).unwrap().is_valid());
    assert!(assertorically_equivalent(&f("K~<>p"), &f("K~p"), B3, StateScope::All).unwrap().is_valid());
    let ce = assertorically_equivalent(&f("<>p"), &f("p"), B2, StateScope::All).unwrap().into_counterexample().unwrap();
    assert!(refutes_equivalence(&ce, &f("<>p"), &f("p"), StateScope::All).unwrap());
    // the empty state supports p vacuously; every nonempty witness at n=2 is the full state with p at one world
    assert!(ce.state.is_empty());
    let mut nonempty = 0;
    for m in enumerate_bounded_models(2, &["p"], &[]).unwrap() {
        let p = m.base().extension("p").unwrap();
        for i in m.universe().subsets().skip(1) {
            if supports(&m, i, &f("<>p")).unwrap() != supports(&m, i, &f("p")).unwrap() {
                assert_eq!((i.len(), i.intersection(p).len()), (2, 1));
                nonempty += 1;
            }
        }
    }
    assert!(nonempty > 0);
}

#[test]
fn epistemic_contradictions_are_unsupportable() {
    assert!(supportable(&f("p & <>~p"), B3).unwrap().is_valid());
    assert!(supportable(&f("~p & <>p"), B3).unwrap().is_valid());
    assert!(!supportable(&f("<>p & <>~p"), B3).unwrap().is_valid());
}
