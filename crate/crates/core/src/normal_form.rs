//! Support and rejection normal forms.
//!
//! Every formula is equivalent, on internally coherent states, to a
//! ◇-restricted head conjoined with ◇-prefixed ◇-restricted conjuncts. The
//! construction is by induction on the formula and yields one such form for
//! support and one for rejection.

use std::fmt;

use crate::arena::{FormulaArena, NodeId};
use crate::error::Result;
use crate::stable::{signature, sweep_models, StableWitness};
use crate::sweep::{Bound, Outcome};
use crate::syntax::{Formula, Style};
use crate::Intension;

/// `head ∧ ◇d₁ ∧ … ∧ ◇dₘ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub head: Formula,
    pub diamonds: Vec<Formula>,
}

impl NormalForm {
    fn flat(head: Formula) -> NormalForm {
        NormalForm { head, diamonds: Vec::new() }
    }

    /// The formula this normal form stands for.
    pub fn denote(&self) -> Formula {
        self.diamonds.iter().fold(self.head.clone(), |acc, d| Formula::and(acc, Formula::might(d.clone())))
    }

    /// Head and every diamond conjunct are ◇-restricted.
    pub fn is_well_formed(&self) -> bool {
        self.head.is_diamond_restricted() && self.diamonds.iter().all(Formula::is_diamond_restricted)
    }

    /// Head and conjunct list as `head | [d1, d2]`.
    pub fn display(&self, style: Style) -> String {
        let ds: Vec<String> = self.diamonds.iter().map(|d| d.display(style).to_string()).collect();
        format!("{} | [{}]", self.head.display(style), ds.join(", "))
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display(Style::Ascii))
    }
}

/// Support and rejection normal forms of one formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForms {
    pub support: NormalForm,
    pub reject: NormalForm,
}

fn build(f: &Formula, top: &Formula) -> NormalForms {
    match f {
        Formula::Atom(_) | Formula::Know(..) => {
            NormalForms { support: NormalForm::flat(f.clone()), reject: NormalForm::flat(Formula::neg(f.clone())) }
        }
        Formula::Neg(g) => {
            let NormalForms { support, reject } = build(g, top);
            NormalForms { support: reject, reject: support }
        }
        Formula::And(a, b) => {
            let l = build(a, top);
            let r = build(b, top);
            let support = NormalForm {
                head: Formula::and(l.support.head, r.support.head),
                diamonds: l.support.diamonds.into_iter().chain(r.support.diamonds).collect(),
            };
            let (beta, eps) = (l.reject.head, r.reject.head);
            let diamonds = l
                .reject
                .diamonds
                .into_iter()
                .map(|b| Formula::and(beta.clone(), b))
                .chain(r.reject.diamonds.into_iter().map(|e| Formula::and(eps.clone(), e)))
                .collect();
            NormalForms { support, reject: NormalForm { head: Formula::or(beta, eps), diamonds } }
        }
        Formula::Might(g) => {
            let NormalForms { support: a, reject: b } = build(g, top);
            let support = NormalForm { head: tautology(top), diamonds: vec![conjoin(a)] };
            let reject = NormalForm::flat(conjoin(b));
            NormalForms { support, reject }
        }
    }
}

fn conjoin(nf: NormalForm) -> Formula {
    Formula::conjoin(std::iter::once(nf.head).chain(nf.diamonds)).expect("head is present")
}

/// `a | ~a` for the alphabetically first atom of `f`, or `p` if it has none.
fn tautology(f: &Formula) -> Formula {
    let a = Formula::atom(f.atoms().into_iter().min().unwrap_or_else(|| "p".to_string()));
    Formula::or(a.clone(), Formula::neg(a))
}

pub fn normal_form(f: &Formula) -> NormalForms {
    build(f, f)
}

/// A formula whose normal form disagrees with it somewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFormFailure {
    pub formula: Formula,
    pub witness: StableWitness,
}

/// Check on every internally coherent state of every bounded model up to the
/// bound that each formula's support and rejection match its normal forms.
///
/// All formulas are checked against models over their joint signature.
pub fn verify_normal_forms(fs: &[Formula], bound: Bound) -> Result<Outcome<NormalFormFailure>> {
    let refs: Vec<&Formula> = fs.iter().collect();
    let (atoms, agents) = signature(&refs);
    let mut arena = FormulaArena::new();
    for a in &atoms {
        arena.atom(a);
    }
    let triples: Vec<(NodeId, NodeId, NodeId)> = fs
        .iter()
        .map(|f| {
            let nf = normal_form(f);
            (arena.intern(f), arena.intern(&nf.support.denote()), arena.intern(&nf.reject.denote()))
        })
        .collect();
    let hit = sweep_models(&arena, &agents, bound, |_, t| {
        let coherent = t.coherent();
        triples.iter().enumerate().find_map(|(k, &(f, s, r))| {
            let bad = t.support_set(f).intersection(coherent) != t.support_set(s).intersection(coherent)
                || t.reject_set(f).intersection(coherent) != t.support_set(r).intersection(coherent);
            if !bad {
                return None;
            }
            let state = coherent
                .iter()
                .map(Intension::from_index)
                .find(|&x| t.supports(f, x) != t.supports(s, x) || t.rejects(f, x) != t.supports(r, x))
                .expect("disagreement on some coherent state");
            Some((k, state))
        })
    })?;
    Ok(match hit {
        Some((model, (k, state))) => Outcome::CounterExample(NormalFormFailure {
            formula: fs[k].clone(),
            witness: StableWitness { model, state },
        }),
        None => Outcome::Valid(bound),
    })
}

pub fn verify_normal_form(f: &Formula, bound: Bound) -> Result<Outcome<StableWitness>> {
    Ok(verify_normal_forms(std::slice::from_ref(f), bound)?.map(|fail| fail.witness))
}
