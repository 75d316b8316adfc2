//! Domain semantics: truth at a world relative to an information state, with
//! classical knowledge ascriptions.
//!
//! `◇φ` is true at `(w, i)` iff `φ` is true at `(u, i)` for some `u ∈ i`; a
//! state accepts `φ` iff `φ` is true at every member under that state. `Kφ`
//! is true at `(w, i)` iff `k^w` accepts `φ`; the factive variant also
//! requires `φ` itself to be true at `(w, i)`.

use serde::{Deserialize, Serialize};

use crate::arena::{FormulaArena, Node, NodeId};
use crate::error::{Error, Result};
use crate::models::{enumerate_classical_models, ClassicalModel, World};
use crate::sweep::{first_hit, Bound, Outcome};
use crate::syntax::{Agent, Formula};
use crate::Intension;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KVariant {
    /// `Kφ` iff `k^w` accepts `φ`.
    Classic,
    /// Classic plus the truth of `φ` at the point of evaluation.
    ModifiedFactive,
}

fn check_signature(m: &ClassicalModel, f: &Formula) -> Result<()> {
    for a in f.atoms() {
        m.base().extension(&a)?;
    }
    if let Some(a) = f.agents().into_iter().find(|&a| a != Agent::ONE) {
        return Err(Error::UnsupportedAgent(a));
    }
    Ok(())
}

fn truth(m: &ClassicalModel, w: World, i: Intension, f: &Formula, v: KVariant) -> bool {
    match f {
        Formula::Atom(p) => m.base().valuation()[p].contains(w),
        Formula::Neg(g) => !truth(m, w, i, g, v),
        Formula::And(a, b) => truth(m, w, i, a, v) && truth(m, w, i, b, v),
        Formula::Might(g) => i.iter().any(|u| truth(m, u, i, g, v)),
        Formula::Know(_, g) => {
            let kw = m.k(w);
            let known = kw.iter().all(|u| truth(m, u, kw, g, v));
            match v {
                KVariant::Classic => known,
                KVariant::ModifiedFactive => known && truth(m, w, i, g, v),
            }
        }
    }
}

/// `[f]^{w,i}`.
pub fn truth_at(m: &ClassicalModel, w: World, i: Intension, f: &Formula, v: KVariant) -> Result<bool> {
    check_signature(m, f)?;
    if w >= m.worlds() {
        return Err(Error::OutOfRange { what: "evaluation world".into(), world: w, worlds: m.worlds() });
    }
    Ok(truth(m, w, i, f, v))
}

/// `i ⊩ f`: `f` is true at every `w ∈ i` relative to `i`.
pub fn accepts(m: &ClassicalModel, i: Intension, f: &Formula, v: KVariant) -> Result<bool> {
    check_signature(m, f)?;
    Ok(i.iter().all(|w| truth(m, w, i, f, v)))
}

/// Truth tables for every formula in an arena over one classical model:
/// `table[node][state]` is the set of worlds where the node is true relative
/// to that state.
pub struct DomainTables {
    states: usize,
    table: Vec<Vec<Intension>>,
}

impl DomainTables {
    pub fn build(m: &ClassicalModel, arena: &FormulaArena, v: KVariant) -> Result<DomainTables> {
        let n = m.worlds();
        if n > crate::models::HARD_ENUMERATION_CAP {
            return Err(Error::CapExceeded { requested: n, cap: crate::models::HARD_ENUMERATION_CAP });
        }
        let states = 1usize << n;
        let universe = m.base().universe();
        let atom_ext: Vec<Intension> =
            arena.atoms().iter().map(|a| m.base().extension(a)).collect::<Result<_>>()?;
        let mut table: Vec<Vec<Intension>> = Vec::with_capacity(arena.len());
        for id in arena.ids() {
            let row: Vec<Intension> = match arena.node(id) {
                Node::Atom(a) => vec![atom_ext[a as usize]; states],
                Node::Neg(c) => table[c.index()].iter().map(|t| universe.difference(*t)).collect(),
                Node::And(a, b) => {
                    table[a.index()].iter().zip(&table[b.index()]).map(|(x, y)| x.intersection(*y)).collect()
                }
                Node::Might(c) => (0..states)
                    .map(|s| {
                        let t = table[c.index()][s];
                        if t.is_disjoint(Intension::from_index(s)) {
                            Intension::empty()
                        } else {
                            universe
                        }
                    })
                    .collect(),
                Node::Know(agent, c) => {
                    if agent != Agent::ONE {
                        return Err(Error::UnsupportedAgent(agent));
                    }
                    let inner = &table[c.index()];
                    let known: Intension =
                        (0..n).filter(|&w| m.k(w).is_subset(inner[m.k(w).index()])).collect();
                    match v {
                        KVariant::Classic => vec![known; states],
                        KVariant::ModifiedFactive => inner.iter().map(|t| t.intersection(known)).collect(),
                    }
                }
            };
            table.push(row);
        }
        Ok(DomainTables { states, table })
    }

    pub fn true_worlds(&self, id: NodeId, state: Intension) -> Intension {
        self.table[id.index()][state.index()]
    }

    pub fn accepts(&self, id: NodeId, state: Intension) -> bool {
        state.is_subset(self.true_worlds(id, state))
    }

    pub fn states(&self) -> impl Iterator<Item = Intension> {
        (0..self.states).map(Intension::from_index)
    }
}

/// A refuting point: the model, the state, and (for truth-level claims) the world.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainWitness {
    pub model: ClassicalModel,
    pub state: Intension,
    pub world: Option<World>,
}

fn atoms_of(fs: &[&Formula]) -> Vec<String> {
    let mut atoms: Vec<String> = fs.iter().flat_map(|f| f.atoms()).collect();
    atoms.sort();
    atoms.dedup();
    atoms
}

fn sweep<F>(fs: &[&Formula], bound: Bound, v: KVariant, probe: F) -> Result<Outcome<DomainWitness>>
where
    F: Fn(&ClassicalModel, &DomainTables, &[NodeId]) -> Option<(Intension, Option<World>)> + Sync + Send,
{
    bound.check()?;
    for f in fs {
        if let Some(a) = f.agents().into_iter().find(|&a| a != Agent::ONE) {
            return Err(Error::UnsupportedAgent(a));
        }
    }
    let mut arena = FormulaArena::new();
    let ids: Vec<NodeId> = fs.iter().map(|f| arena.intern(f)).collect();
    let atoms = atoms_of(fs);
    let atom_refs: Vec<&str> = atoms.iter().map(String::as_str).collect();
    for n in 1..=bound.max_worlds {
        let hit = first_hit(enumerate_classical_models(n, &atom_refs)?, |m| {
            let tables = DomainTables::build(m, &arena, v).expect("signature checked");
            probe(m, &tables, &ids).map(|(state, world)| DomainWitness { model: m.clone(), state, world })
        });
        if let Some(w) = hit {
            return Ok(Outcome::CounterExample(w));
        }
    }
    Ok(Outcome::Valid(bound))
}

/// `f ⊨ g`: truth at every `(w, i)` is preserved, checked over all classical
/// models up to the bound and every nonempty state. Counterexamples with
/// `w ∈ i` are searched for first over the whole bound; otherwise the first
/// in enumeration order (model, then state, then world) is returned.
pub fn entails_truth(f: &Formula, g: &Formula, bound: Bound, v: KVariant) -> Result<Outcome<DomainWitness>> {
    let search = |veridical: bool| {
        sweep(&[f, g], bound, v, |_, t, ids| {
            t.states().skip(1).find_map(|s| {
                let bad = t.true_worlds(ids[0], s).difference(t.true_worlds(ids[1], s));
                let bad = if veridical { bad.intersection(s) } else { bad };
                bad.first().map(|w| (s, Some(w)))
            })
        })
    };
    match search(true)? {
        Outcome::Valid(_) => search(false),
        found => Ok(found),
    }
}

/// `f ⊩ g`: acceptance is preserved by every state of every classical model up to the bound.
pub fn entails_acceptance(f: &Formula, g: &Formula, bound: Bound, v: KVariant) -> Result<Outcome<DomainWitness>> {
    sweep(&[f, g], bound, v, |_, t, ids| {
        t.states().find(|&s| t.accepts(ids[0], s) && !t.accepts(ids[1], s)).map(|s| (s, None))
    })
}

/// Some nonempty state accepts `f`, up to the bound; returns the first such state.
pub fn acceptable(f: &Formula, bound: Bound, v: KVariant) -> Result<Outcome<DomainWitness>> {
    sweep(&[f], bound, v, |_, t, ids| t.states().find(|&s| !s.is_empty() && t.accepts(ids[0], s)).map(|s| (s, None)))
}

/// Re-check a witness against the reference evaluator.
pub fn refutes_truth(w: &DomainWitness, f: &Formula, g: &Formula, v: KVariant) -> Result<bool> {
    let world = w.world.ok_or_else(|| Error::Claim("truth-level witness needs a world".into()))?;
    Ok(!w.state.is_empty()
        && truth_at(&w.model, world, w.state, f, v)? && !truth_at(&w.model, world, w.state, g, v)?)
}

pub fn refutes_acceptance(w: &DomainWitness, f: &Formula, g: &Formula, v: KVariant) -> Result<bool> {
    Ok(accepts(&w.model, w.state, f, v)? && !accepts(&w.model, w.state, g, v)?)
}
