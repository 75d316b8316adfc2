//! Stable acceptance semantics over bounded models.
//!
//! Support (`⊩`) and rejection (`⊣`) are defined by mutual recursion directly
//! on information states. Knowledge quantifies over the accessible
//! refinements of each epistemic state:
//!
//! ```text
//! i ⊩ Kφ  iff  ∀w ∈ i, ∀j ∈ Acc(k^w): j ⊩ φ
//! i ⊣ Kφ  iff  ∀w ∈ i, ∃j ∈ Acc(k^w): j ⊮ φ
//! ```
//!
//! On valid models this coincides with the pointwise form that quantifies
//! over the worldly information `i^u` of each `u ∈ k^w`; both forms are kept
//! and [`KClause`] selects one.

use crate::arena::{FormulaArena, Node, NodeId};
use crate::error::{Error, Result};
use crate::models::{enumerate_bounded_models, BoundedModel, World, HARD_ENUMERATION_CAP};
use crate::sweep::{first_hit, Bound, Outcome};
use crate::syntax::{Agent, Formula};
use crate::{Intension, StateSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KClause {
    /// Quantify over `Acc(k^w)`.
    Refinements,
    /// Quantify over `i^u` for `u ∈ k^w`.
    Pointwise,
}

/// Support and rejection for one `(model, state, formula)` query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub supports: bool,
    pub rejects: bool,
}

struct Eval<'m> {
    m: &'m BoundedModel,
    clause: KClause,
}

impl Eval<'_> {
    fn k(&self, agent: Agent, w: World) -> Intension {
        self.m.k_functions()[&agent][w]
    }

    fn supports(&self, i: Intension, f: &Formula) -> bool {
        match f {
            Formula::Atom(p) => i.is_subset(self.m.base().valuation()[p]),
            Formula::Neg(g) => self.rejects(i, g),
            Formula::And(a, b) => self.supports(i, a) && self.supports(i, b),
            Formula::Might(g) => i.iter().any(|w| self.supports(Intension::singleton(w), g)),
            Formula::Know(a, g) => i.iter().all(|w| self.knows_at(*a, w, g)),
        }
    }

    fn rejects(&self, i: Intension, f: &Formula) -> bool {
        match f {
            Formula::Atom(p) => i.is_disjoint(self.m.base().valuation()[p]),
            Formula::Neg(g) => self.supports(i, g),
            Formula::And(a, b) => i.subsets().any(|i1| {
                // i2 ranges over every set with i1 ∪ i2 = i
                let rest = i.difference(i1);
                self.rejects(i1, a) && i1.subsets().any(|extra| self.rejects(rest.union(extra), b))
            }),
            Formula::Might(g) => i.iter().all(|w| self.rejects(Intension::singleton(w), g)),
            Formula::Know(a, g) => i.iter().all(|w| self.unstable_at(*a, w, g)),
        }
    }

    /// Every refinement (or every `i^u`) of `k_a^w` supports `g`.
    fn knows_at(&self, a: Agent, w: World, g: &Formula) -> bool {
        let kw = self.k(a, w);
        match self.clause {
            KClause::Refinements => self.m.accessible_refinements(kw).into_iter().all(|j| self.supports(j, g)),
            KClause::Pointwise => kw.iter().all(|u| self.supports(self.m.info(u), g)),
        }
    }

    /// Some refinement (or some `i^u`) of `k_a^w` fails to support `g`.
    fn unstable_at(&self, a: Agent, w: World, g: &Formula) -> bool {
        let kw = self.k(a, w);
        match self.clause {
            KClause::Refinements => self.m.accessible_refinements(kw).into_iter().any(|j| !self.supports(j, g)),
            KClause::Pointwise => kw.iter().any(|u| !self.supports(self.m.info(u), g)),
        }
    }
}

fn check_query(m: &BoundedModel, i: Intension, f: &Formula) -> Result<()> {
    for a in f.atoms() {
        m.base().extension(&a)?;
    }
    for a in f.agents() {
        m.k_function(a)?;
    }
    if let Some(w) = i.difference(m.universe()).first() {
        return Err(Error::OutOfRange { what: "information state".into(), world: w, worlds: m.worlds() });
    }
    Ok(())
}

/// `i ⊩ f`.
pub fn supports(m: &BoundedModel, i: Intension, f: &Formula) -> Result<bool> {
    check_query(m, i, f)?;
    let r = Eval { m, clause: KClause::Refinements }.supports(i, f);
    debug_assert_eq!(r, Eval { m, clause: KClause::Pointwise }.supports(i, f), "K clauses disagree on {f}");
    Ok(r)
}

/// `i ⊣ f`.
pub fn rejects(m: &BoundedModel, i: Intension, f: &Formula) -> Result<bool> {
    check_query(m, i, f)?;
    let r = Eval { m, clause: KClause::Refinements }.rejects(i, f);
    debug_assert_eq!(r, Eval { m, clause: KClause::Pointwise }.rejects(i, f), "K clauses disagree on {f}");
    Ok(r)
}

pub fn verdict(m: &BoundedModel, i: Intension, f: &Formula) -> Result<Verdict> {
    Ok(Verdict { supports: supports(m, i, f)?, rejects: rejects(m, i, f)? })
}

/// `i ⊩ K_a f` through the worldly-information form: `∀w ∈ i, ∀u ∈ k_a^w: i^u ⊩ f`.
pub fn supports_k_pointwise(m: &BoundedModel, i: Intension, agent: Agent, f: &Formula) -> Result<bool> {
    check_query(m, i, f)?;
    let ks = m.k_function(agent)?;
    let e = Eval { m, clause: KClause::Refinements };
    Ok(i.iter().all(|w| ks[w].iter().all(|u| e.supports(m.info(u), f))))
}

/// `i ⊣ K_a f` through the worldly-information form: `∀w ∈ i, ∃u ∈ k_a^w: i^u ⊮ f`.
pub fn rejects_k_pointwise(m: &BoundedModel, i: Intension, agent: Agent, f: &Formula) -> Result<bool> {
    check_query(m, i, f)?;
    let ks = m.k_function(agent)?;
    let e = Eval { m, clause: KClause::Refinements };
    Ok(i.iter().all(|w| ks[w].iter().any(|u| !e.supports(m.info(u), f))))
}

/// Support and rejection sets, over all `2^n` states, for every node of an arena.
pub struct StableTables {
    support: Vec<StateSet>,
    reject: Vec<StateSet>,
    coherent: StateSet,
    states: usize,
}

impl StableTables {
    pub fn build(m: &BoundedModel, arena: &FormulaArena, clause: KClause) -> Result<StableTables> {
        let n = m.worlds();
        if n > HARD_ENUMERATION_CAP {
            return Err(Error::CapExceeded { requested: n, cap: HARD_ENUMERATION_CAP });
        }
        let states = 1usize << n;
        let universe = m.universe();
        // downsets[mask]: every state contained in mask
        let downsets: Vec<StateSet> = (0..states)
            .map(|mask| Intension::from_index(mask).subsets().map(Intension::index).collect())
            .collect();
        let all = StateSet::full(states);
        let meets = |mask: Intension| all.difference(downsets[universe.difference(mask).index()]);
        let coherent: StateSet = (0..states).filter(|&s| m.is_internally_coherent(Intension::from_index(s))).collect();

        let atom_ext: Vec<Intension> =
            arena.atoms().iter().map(|a| m.base().extension(a)).collect::<Result<_>>()?;

        let mut support: Vec<StateSet> = Vec::with_capacity(arena.len());
        let mut reject: Vec<StateSet> = Vec::with_capacity(arena.len());
        for id in arena.ids() {
            let (s, r) = match arena.node(id) {
                Node::Atom(a) => {
                    let ext = atom_ext[a as usize];
                    (downsets[ext.index()], downsets[universe.difference(ext).index()])
                }
                Node::Neg(c) => (reject[c.index()], support[c.index()]),
                Node::And(a, b) => {
                    let s = support[a.index()].intersection(support[b.index()]);
                    let mut r = StateSet::empty();
                    for x in reject[a.index()].iter() {
                        for y in reject[b.index()].iter() {
                            r.insert(x | y);
                        }
                    }
                    (s, r)
                }
                Node::Might(c) => {
                    let sup_single: Intension = (0..n).filter(|&w| support[c.index()].contains(1 << w)).collect();
                    let rej_single: Intension = (0..n).filter(|&w| reject[c.index()].contains(1 << w)).collect();
                    (meets(sup_single), downsets[rej_single.index()])
                }
                Node::Know(agent, c) => {
                    let ks = m.k_function(agent)?;
                    let sup = support[c.index()];
                    let mut good = Intension::empty();
                    let mut shaky = Intension::empty();
                    for (w, &kw) in ks.iter().enumerate() {
                        let probes: Vec<Intension> = match clause {
                            KClause::Refinements => m.accessible_refinements(kw),
                            KClause::Pointwise => kw.iter().map(|u| m.info(u)).collect(),
                        };
                        if probes.iter().all(|j| sup.contains(j.index())) {
                            good.insert(w);
                        }
                        if probes.iter().any(|j| !sup.contains(j.index())) {
                            shaky.insert(w);
                        }
                    }
                    (downsets[good.index()], downsets[shaky.index()])
                }
            };
            support.push(s);
            reject.push(r);
        }
        Ok(StableTables { support, reject, coherent, states })
    }

    pub fn support_set(&self, id: NodeId) -> StateSet {
        self.support[id.index()]
    }

    pub fn reject_set(&self, id: NodeId) -> StateSet {
        self.reject[id.index()]
    }

    pub fn supports(&self, id: NodeId, state: Intension) -> bool {
        self.support[id.index()].contains(state.index())
    }

    pub fn rejects(&self, id: NodeId, state: Intension) -> bool {
        self.reject[id.index()].contains(state.index())
    }

    /// Internally coherent states, as a state set.
    pub fn coherent(&self) -> StateSet {
        self.coherent
    }

    pub fn all_states(&self) -> StateSet {
        StateSet::full(self.states)
    }

    /// First node whose support or rejection set differs from `other`'s.
    pub fn first_disagreement(&self, other: &StableTables) -> Option<NodeId> {
        (0..self.support.len().min(other.support.len()))
            .find(|&k| self.support[k] != other.support[k] || self.reject[k] != other.reject[k])
            .map(NodeId::from_index)
    }
}

/// A refuting bounded model and state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableWitness {
    pub model: BoundedModel,
    pub state: Intension,
}

/// Which states an equivalence sweep ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum StateScope {
    #[default]
    All,
    Coherent,
}

pub(crate) fn signature(fs: &[&Formula]) -> (Vec<String>, Vec<Agent>) {
    let mut atoms: Vec<String> = fs.iter().flat_map(|f| f.atoms()).collect();
    atoms.sort();
    atoms.dedup();
    let mut agents: Vec<Agent> = fs.iter().flat_map(|f| f.agents()).collect();
    agents.sort();
    agents.dedup();
    (atoms, agents)
}

/// Build tables for every bounded model over `atoms` and `agents` with up to
/// `bound.max_worlds` worlds, returning the first model the probe flags.
pub fn sweep_models<R, F>(
    arena: &FormulaArena,
    agents: &[Agent],
    bound: Bound,
    probe: F,
) -> Result<Option<(BoundedModel, R)>>
where
    R: Send,
    F: Fn(&BoundedModel, &StableTables) -> Option<R> + Sync + Send,
{
    bound.check()?;
    let atom_refs: Vec<&str> = arena.atoms().iter().map(String::as_str).collect();
    for n in 1..=bound.max_worlds {
        let hit = first_hit(enumerate_bounded_models(n, &atom_refs, agents)?, |m| {
            let t = StableTables::build(m, arena, KClause::Pointwise).expect("signature matches model");
            probe(m, &t).map(|r| (m.clone(), r))
        });
        if hit.is_some() {
            return Ok(hit);
        }
    }
    Ok(None)
}

/// Sweep every bounded model over the formulas' signature up to the bound,
/// returning the first `(model, state)` the probe flags.
pub(crate) fn sweep<F>(fs: &[&Formula], bound: Bound, probe: F) -> Result<Outcome<StableWitness>>
where
    F: Fn(&StableTables, &[NodeId]) -> Option<usize> + Sync + Send,
{
    let (atoms, agents) = signature(fs);
    let mut arena = FormulaArena::new();
    for a in &atoms {
        arena.atom(a);
    }
    let ids: Vec<NodeId> = fs.iter().map(|f| arena.intern(f)).collect();
    let hit = sweep_models(&arena, &agents, bound, |_, t| probe(t, &ids))?;
    Ok(match hit {
        Some((model, s)) => Outcome::CounterExample(StableWitness { model, state: Intension::from_index(s) }),
        None => Outcome::Valid(bound),
    })
}

/// `f ⊫ g`: every internally coherent state supporting `f` supports `g`.
pub fn coherent_entails(f: &Formula, g: &Formula, bound: Bound) -> Result<Outcome<StableWitness>> {
    sweep(&[f, g], bound, |t, ids| {
        t.support_set(ids[0]).intersection(t.coherent()).difference(t.support_set(ids[1])).first()
    })
}

/// `f` and `g` are supported by exactly the same states.
pub fn assertorically_equivalent(
    f: &Formula,
    g: &Formula,
    bound: Bound,
    scope: StateScope,
) -> Result<Outcome<StableWitness>> {
    sweep(&[f, g], bound, |t, ids| {
        let (a, b) = (t.support_set(ids[0]), t.support_set(ids[1]));
        let diff = a.difference(b).union(b.difference(a));
        match scope {
            StateScope::All => diff.first(),
            StateScope::Coherent => diff.intersection(t.coherent()).first(),
        }
    })
}

/// First nonempty state supporting `f`, if any.
pub fn supportable(f: &Formula, bound: Bound) -> Result<Outcome<StableWitness>> {
    sweep(&[f], bound, |t, ids| t.support_set(ids[0]).without(0).first())
}

/// Re-check a coherent-consequence witness with the reference evaluator.
pub fn refutes_coherent(w: &StableWitness, f: &Formula, g: &Formula) -> Result<bool> {
    Ok(w.model.is_internally_coherent(w.state) && supports(&w.model, w.state, f)? && !supports(&w.model, w.state, g)?)
}

pub fn refutes_equivalence(w: &StableWitness, f: &Formula, g: &Formula, scope: StateScope) -> Result<bool> {
    let in_scope = scope == StateScope::All || w.model.is_internally_coherent(w.state);
    Ok(in_scope && supports(&w.model, w.state, f)? != supports(&w.model, w.state, g)?)
}

#[cfg(test)]
mod tests;
