//! One pass over every bounded model up to a bound, checking the structural
//! properties of stable semantics against every enumerated formula.

use rayon::prelude::*;

use crate::arena::{FormulaArena, NodeId};
use crate::error::Result;
use crate::models::{enumerate_bounded_models, BoundedModel};
use crate::normal_form::normal_form;
use crate::stable::{KClause, StableTables};
use crate::sweep::Bound;
use crate::syntax::{Agent, Formula};
use crate::{Intension, StateSet};

const ATOMS: [&str; 2] = ["p", "q"];

/// First violation of one property, in enumeration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurveyViolation {
    pub model: BoundedModel,
    pub state: Option<Intension>,
    pub formula: Option<Formula>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurveyCheck {
    pub id: &'static str,
    pub title: &'static str,
    pub violation: Option<SurveyViolation>,
}

/// Survey totals alongside the per-property results.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Survey {
    pub checks: Vec<SurveyCheck>,
    pub models: usize,
    pub formulas: usize,
}

const CHECKS: [(&str, &str); 8] = [
    ("coherent-union", "coherent i is the union of i^w over w in i"),
    ("union-closure", "support and rejection are closed under unions"),
    ("k-clause-agreement", "refinement-based and pointwise K clauses agree"),
    ("k-refinements", "on coherent i, all of Acc(i) support f iff every i^u does"),
    ("flatness", "diamond-restricted formulas are flat"),
    ("might-rejection", "for diamond-restricted f, i rejects <>f iff i rejects f"),
    ("veridicality", "Kf ||= f"),
    ("normal-forms", "support and rejection match the normal forms on coherent states"),
];

/// A violation found inside one model: check index, state, offending node, detail.
type Hit = (usize, Option<Intension>, Option<NodeId>, String);

struct Plan {
    arena: FormulaArena,
    phis: Vec<NodeId>,
    knows: Vec<NodeId>,
    restricted: Vec<(NodeId, NodeId)>,
    nfs: Vec<(NodeId, NodeId, NodeId)>,
}

impl Plan {
    fn new(max_size: usize) -> Plan {
        let mut arena = FormulaArena::new();
        let phis: Vec<NodeId> = arena.enumerate(&ATOMS, &[Agent::ONE], max_size).into_iter().flatten().collect();
        let knows = phis.iter().map(|&f| arena.know(Agent::ONE, f)).collect();
        let flat: Vec<NodeId> = phis.iter().copied().filter(|&f| arena.is_diamond_restricted(f)).collect();
        let restricted = flat.into_iter().map(|f| (f, arena.might(f))).collect();
        let nfs = phis
            .iter()
            .map(|&f| {
                let nf = normal_form(&arena.formula(f));
                (f, arena.intern(&nf.support.denote()), arena.intern(&nf.reject.denote()))
            })
            .collect();
        Plan { arena, phis, knows, restricted, nfs }
    }

    fn inspect(&self, m: &BoundedModel) -> Vec<Hit> {
        let t = StableTables::build(m, &self.arena, KClause::Pointwise).expect("signature matches");
        let reference = StableTables::build(m, &self.arena, KClause::Refinements).expect("signature matches");
        let states = 1usize << m.worlds();
        let downsets: Vec<StateSet> =
            (0..states).map(|s| Intension::from_index(s).subsets().map(Intension::index).collect()).collect();
        let coherent = t.coherent();
        let mut hits = Vec::new();

        // coherent states are unions of worldly information
        if let Some(i) = coherent.iter().map(Intension::from_index).find(|&i| {
            i.iter().fold(Intension::empty(), |acc, w| acc.union(m.info(w))) != i
        }) {
            hits.push((0, Some(i), None, "i differs from the union of its worldly information".into()));
        }

        // union closure
        if let Some(hit) = self.phis.iter().find_map(|&f| {
            let (which, (x, y)) = union_gap(t.support_set(f))
                .map(|g| ("support", g))
                .or_else(|| union_gap(t.reject_set(f)).map(|g| ("reject", g)))?;
            let (x, y) = (Intension::from_index(x), Intension::from_index(y));
            Some((1, Some(x.union(y)), Some(f), format!("{x} and {y} {which} it but their union does not")))
        }) {
            hits.push(hit);
        }

        // K clauses
        if let Some(id) = t.first_disagreement(&reference) {
            hits.push((2, None, Some(id), "the two K clauses give different support or rejection sets".into()));
        }
        if let Some(hit) = coherent.iter().map(Intension::from_index).find_map(|i| {
            let acc: Vec<usize> = m.accessible_refinements(i).into_iter().map(Intension::index).collect();
            let infos: Vec<usize> = i.iter().map(|u| m.info(u).index()).collect();
            self.phis.iter().find_map(|&f| {
                let s = t.support_set(f);
                let a = acc.iter().all(|&j| s.contains(j));
                let b = infos.iter().all(|&j| s.contains(j));
                (a != b).then(|| (3, Some(i), Some(f), format!("over Acc(i): {a}, over i^u: {b}")))
            })
        }) {
            hits.push(hit);
        }

        // diamond-restricted formulas
        let singles = |set: StateSet| -> Intension { (0..m.worlds()).filter(|&w| set.contains(1 << w)).collect() };
        if let Some(hit) = self.restricted.iter().find_map(|&(f, _)| {
            let (s, r) = (t.support_set(f), t.reject_set(f));
            if s != downsets[singles(s).index()] {
                return Some((4, None, Some(f), "support is not determined by singletons".into()));
            }
            (r != downsets[singles(r).index()]).then(|| (4, None, Some(f), "rejection is not determined by singletons".into()))
        }) {
            hits.push(hit);
        }
        if let Some(hit) = self.restricted.iter().find_map(|&(f, mf)| {
            let diff = t.reject_set(f).difference(t.reject_set(mf)).union(t.reject_set(mf).difference(t.reject_set(f)));
            diff.first().map(|s| (5, Some(Intension::from_index(s)), Some(f), "rejection of f and <>f differ".into()))
        }) {
            hits.push(hit);
        }

        // veridicality
        if let Some(hit) = self.phis.iter().zip(&self.knows).find_map(|(&f, &k)| {
            let bad = t.support_set(k).intersection(coherent).difference(t.support_set(f));
            bad.first().map(|s| (6, Some(Intension::from_index(s)), Some(f), "coherent state supports Kf but not f".into()))
        }) {
            hits.push(hit);
        }

        // normal forms
        if let Some(hit) = self.nfs.iter().find_map(|&(f, s, r)| {
            let bad = |a: StateSet, b: StateSet| a.difference(b).union(b.difference(a)).intersection(coherent).first();
            bad(t.support_set(f), t.support_set(s))
                .map(|x| (x, "support"))
                .or_else(|| bad(t.reject_set(f), t.support_set(r)).map(|x| (x, "rejection")))
                .map(|(x, which)| (7, Some(Intension::from_index(x)), Some(f), format!("{which} differs from its normal form")))
        }) {
            hits.push(hit);
        }
        hits
    }
}

/// Two members of `s` whose union is missing, if any.
fn union_gap(s: StateSet) -> Option<(usize, usize)> {
    s.iter().find_map(|x| s.iter().filter(|&y| y > x).find(|&y| !s.contains(x | y)).map(|y| (x, y)))
}

const CHUNK: usize = 2048;

/// Check every property over all bounded models (atoms p and q, one agent)
/// with up to `bound.max_worlds` worlds and all formulas up to
/// `bound.formula_size()`.
pub fn survey(bound: Bound) -> Result<Survey> {
    bound.check()?;
    let plan = Plan::new(bound.formula_size());
    let mut first: Vec<Option<(BoundedModel, Hit)>> = vec![None; CHECKS.len()];
    let mut models = 0;
    for n in 1..=bound.max_worlds {
        let mut stream = enumerate_bounded_models(n, &ATOMS, &[Agent::ONE])?;
        loop {
            let chunk: Vec<BoundedModel> = stream.by_ref().take(CHUNK).collect();
            if chunk.is_empty() {
                break;
            }
            models += chunk.len();
            let found: Vec<Vec<Hit>> = chunk.par_iter().map(|m| plan.inspect(m)).collect();
            for (m, hits) in chunk.iter().zip(found) {
                for hit in hits {
                    let slot = &mut first[hit.0];
                    if slot.is_none() {
                        *slot = Some((m.clone(), hit));
                    }
                }
            }
        }
    }
    let checks = CHECKS
        .iter()
        .zip(first)
        .map(|(&(id, title), hit)| SurveyCheck {
            id,
            title,
            violation: hit.map(|(model, (_, state, node, detail))| SurveyViolation {
                model,
                state,
                formula: node.map(|id| plan.arena.formula(id)),
                detail,
            }),
        })
        .collect();
    Ok(Survey { checks, models, formulas: plan.phis.len() })
}
