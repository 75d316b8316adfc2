//! Information, classical, and bounded models.

mod enumerate;
mod json;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::syntax::Agent;
use crate::Intension;

pub use enumerate::{
    bounded_frames, classical_k_functions, enumerate_bounded_models, enumerate_classical_models,
    enumerate_information_models, enumeration_cap, valuations, BoundedFrame, DEFAULT_ENUMERATION_CAP,
    HARD_ENUMERATION_CAP,
};
pub use json::{load_model, AnyModel};

pub type World = usize;

/// Largest world count an [`Intension`] can hold.
pub const MAX_WORLDS: usize = Intension::CAPACITY;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InformationModel {
    worlds: usize,
    valuation: BTreeMap<String, Intension>,
}

impl InformationModel {
    pub fn new(worlds: usize, valuation: BTreeMap<String, Intension>) -> Result<Self> {
        if worlds == 0 || worlds > MAX_WORLDS {
            return Err(Error::WorldCount { worlds, cap: MAX_WORLDS });
        }
        let all = Intension::full(worlds);
        for (atom, ext) in &valuation {
            if let Some(w) = ext.difference(all).first() {
                return Err(Error::OutOfRange { what: format!("I({atom})"), world: w, worlds });
            }
        }
        Ok(InformationModel { worlds, valuation })
    }

    pub fn worlds(&self) -> usize {
        self.worlds
    }

    /// `W` as an intension.
    pub fn universe(&self) -> Intension {
        Intension::full(self.worlds)
    }

    pub fn valuation(&self) -> &BTreeMap<String, Intension> {
        &self.valuation
    }

    pub fn extension(&self, atom: &str) -> Result<Intension> {
        self.valuation.get(atom).copied().ok_or_else(|| Error::UnknownAtom(atom.to_string()))
    }

    /// Keep only the worlds in `keep`, renumbered in ascending order.
    pub fn restrict(&self, keep: Intension) -> (InformationModel, Vec<Option<World>>) {
        let map = renumbering(self.worlds, keep);
        let valuation = self.valuation.iter().map(|(a, e)| (a.clone(), e.remap(&map))).collect();
        (InformationModel { worlds: keep.len(), valuation }, map)
    }
}

pub(crate) fn renumbering(worlds: usize, keep: Intension) -> Vec<Option<World>> {
    let mut next = 0;
    (0..worlds)
        .map(|w| {
            keep.contains(w).then(|| {
                next += 1;
                next - 1
            })
        })
        .collect()
}

fn check_component(what: &str, world: World, set: Intension, worlds: usize) -> Result<()> {
    if let Some(u) = set.difference(Intension::full(worlds)).first() {
        return Err(Error::OutOfRange { what: format!("{what}^{world}"), world: u, worlds });
    }
    Ok(())
}

/// Which stipulation a model breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clause {
    /// `w ∉ i^w`.
    InfoVeridicality,
    /// `w ∉ k_a^w`.
    KnowledgeVeridicality(Agent),
    /// `u ∈ i^w` but `i^u ⊄ i^w`.
    InfoCoherence,
    /// `u ∈ k_a^w` but `i^u ⊄ k_a^w`.
    KnowledgeCoherence(Agent),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Violation {
    pub world: World,
    pub other: Option<World>,
    pub clause: Clause,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.world;
        match (self.clause, self.other) {
            (Clause::InfoVeridicality, _) => write!(f, "world {w} is not in its own worldly information i^{w}"),
            (Clause::KnowledgeVeridicality(a), _) => write!(f, "world {w} is not in k_{a}^{w}"),
            (Clause::InfoCoherence, Some(u)) => write!(f, "{u} is in i^{w} but i^{u} is not a subset of i^{w}"),
            (Clause::KnowledgeCoherence(a), Some(u)) => {
                write!(f, "{u} is in k_{a}^{w} but i^{u} is not a subset of k_{a}^{w}")
            }
            (clause, None) => write!(f, "{clause:?} fails at world {w}"),
        }
    }
}

/// An information model plus one epistemic state per world, with `w ∈ k^w` at every world.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassicalModel {
    base: InformationModel,
    k: Vec<Intension>,
}

impl ClassicalModel {
    pub fn new(base: InformationModel, k: Vec<Intension>) -> Result<Self> {
        let m = ClassicalModel::from_parts(base, k)?;
        m.validate().map_err(Error::InvalidModel)?;
        Ok(m)
    }

    fn from_parts(base: InformationModel, k: Vec<Intension>) -> Result<Self> {
        let n = base.worlds();
        if k.len() != n {
            return Err(Error::MissingWorld { what: "k".into(), world: k.len().min(n) });
        }
        for (w, &kw) in k.iter().enumerate() {
            check_component("k", w, kw, n)?;
        }
        Ok(ClassicalModel { base, k })
    }

    pub(crate) fn new_unchecked(base: InformationModel, k: Vec<Intension>) -> Self {
        ClassicalModel { base, k }
    }

    pub fn base(&self) -> &InformationModel {
        &self.base
    }

    pub fn worlds(&self) -> usize {
        self.base.worlds
    }

    pub fn k(&self, w: World) -> Intension {
        self.k[w]
    }

    pub fn k_function(&self) -> &[Intension] {
        &self.k
    }

    pub fn validate(&self) -> Result<(), Violation> {
        for (w, kw) in self.k.iter().enumerate() {
            if !kw.contains(w) {
                return Err(Violation { world: w, other: None, clause: Clause::KnowledgeVeridicality(Agent::ONE) });
            }
        }
        Ok(())
    }

    /// Drop the worlds outside `keep`. `None` if some world leaves its own epistemic state.
    pub fn restrict(&self, keep: Intension) -> Option<ClassicalModel> {
        if keep.is_empty() {
            return None;
        }
        let (base, map) = self.base.restrict(keep);
        let k = keep.iter().map(|w| self.k[w].remap(&map)).collect();
        let m = ClassicalModel { base, k };
        m.validate().ok().map(|_| m)
    }

    /// Replace one world's epistemic state. `None` if some world leaves its own epistemic state.
    pub fn with_k(&self, w: World, kw: Intension) -> Option<ClassicalModel> {
        let mut m = self.clone();
        m.k[w] = kw;
        m.validate().ok().map(|_| m)
    }
}

/// An information model plus worldly information `i^w` and per-agent
/// epistemic states `k_a^w`, all accessible at their world.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundedModel {
    base: InformationModel,
    ifun: Vec<Intension>,
    kfun: BTreeMap<Agent, Vec<Intension>>,
}

impl BoundedModel {
    pub fn new(base: InformationModel, ifun: Vec<Intension>, kfun: BTreeMap<Agent, Vec<Intension>>) -> Result<Self> {
        let n = base.worlds();
        if ifun.len() != n {
            return Err(Error::MissingWorld { what: "ifun".into(), world: ifun.len().min(n) });
        }
        for (w, &iw) in ifun.iter().enumerate() {
            check_component("i", w, iw, n)?;
        }
        for (a, ks) in &kfun {
            if ks.len() != n {
                return Err(Error::MissingWorld { what: format!("kfun[{a}]"), world: ks.len().min(n) });
            }
            for (w, &kw) in ks.iter().enumerate() {
                check_component(&format!("k_{a}"), w, kw, n)?;
            }
        }
        let m = BoundedModel { base, ifun, kfun };
        m.validate().map_err(Error::InvalidModel)?;
        Ok(m)
    }

    /// Single-agent convenience constructor.
    pub fn single_agent(base: InformationModel, ifun: Vec<Intension>, kfun: Vec<Intension>) -> Result<Self> {
        BoundedModel::new(base, ifun, BTreeMap::from([(Agent::ONE, kfun)]))
    }

    pub(crate) fn new_unchecked(
        base: InformationModel,
        ifun: Vec<Intension>,
        kfun: BTreeMap<Agent, Vec<Intension>>,
    ) -> Self {
        BoundedModel { base, ifun, kfun }
    }

    pub fn base(&self) -> &InformationModel {
        &self.base
    }

    pub fn worlds(&self) -> usize {
        self.base.worlds
    }

    pub fn universe(&self) -> Intension {
        self.base.universe()
    }

    /// Worldly information `i^w`.
    pub fn info(&self, w: World) -> Intension {
        self.ifun[w]
    }

    pub fn info_function(&self) -> &[Intension] {
        &self.ifun
    }

    pub fn agents(&self) -> impl Iterator<Item = Agent> + '_ {
        self.kfun.keys().copied()
    }

    pub fn k_function(&self, agent: Agent) -> Result<&[Intension]> {
        self.kfun.get(&agent).map(Vec::as_slice).ok_or(Error::UnknownAgent(agent))
    }

    pub fn k_functions(&self) -> &BTreeMap<Agent, Vec<Intension>> {
        &self.kfun
    }

    /// Nonempty, and `i^w ⊆ i` for every `w ∈ i`.
    pub fn is_internally_coherent(&self, i: Intension) -> bool {
        !i.is_empty() && i.iter().all(|w| self.ifun[w].is_subset(i))
    }

    /// Internally coherent and veridical at `w`.
    pub fn is_accessible(&self, j: Intension, w: World) -> bool {
        j.contains(w) && self.is_internally_coherent(j)
    }

    /// `Acc(i)`: subsets of `i` accessible at some world of `i`, ascending by mask.
    pub fn accessible_refinements(&self, i: Intension) -> Vec<Intension> {
        i.subsets().filter(|&j| i.iter().any(|w| self.is_accessible(j, w))).collect()
    }

    pub fn validate(&self) -> Result<(), Violation> {
        let n = self.worlds();
        for w in 0..n {
            let iw = self.ifun[w];
            if !iw.contains(w) {
                return Err(Violation { world: w, other: None, clause: Clause::InfoVeridicality });
            }
            for (&a, ks) in &self.kfun {
                if !ks[w].contains(w) {
                    return Err(Violation { world: w, other: None, clause: Clause::KnowledgeVeridicality(a) });
                }
            }
            if let Some(u) = iw.iter().find(|&u| !self.ifun[u].is_subset(iw)) {
                return Err(Violation { world: w, other: Some(u), clause: Clause::InfoCoherence });
            }
            for (&a, ks) in &self.kfun {
                if let Some(u) = ks[w].iter().find(|&u| !self.ifun[u].is_subset(ks[w])) {
                    return Err(Violation { world: w, other: Some(u), clause: Clause::KnowledgeCoherence(a) });
                }
            }
        }
        Ok(())
    }

    /// Drop the worlds outside `keep`. `None` if the result is not a bounded model.
    pub fn restrict(&self, keep: Intension) -> Option<BoundedModel> {
        if keep.is_empty() {
            return None;
        }
        let (base, map) = self.base.restrict(keep);
        let ifun = keep.iter().map(|w| self.ifun[w].remap(&map)).collect();
        let kfun = self
            .kfun
            .iter()
            .map(|(&a, ks)| (a, keep.iter().map(|w| ks[w].remap(&map)).collect()))
            .collect();
        let m = BoundedModel { base, ifun, kfun };
        m.validate().ok().map(|_| m)
    }

    pub fn with_info(&self, w: World, iw: Intension) -> Option<BoundedModel> {
        let mut m = self.clone();
        m.ifun[w] = iw;
        m.validate().ok().map(|_| m)
    }

    pub fn with_k(&self, agent: Agent, w: World, kw: Intension) -> Option<BoundedModel> {
        let mut m = self.clone();
        m.kfun.get_mut(&agent)?[w] = kw;
        m.validate().ok().map(|_| m)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn set(ws: &[usize]) -> Intension {
        ws.iter().copied().collect()
    }

    pub fn info_model(worlds: usize, atoms: &[(&str, &[usize])]) -> InformationModel {
        let valuation = atoms.iter().map(|(a, ws)| (a.to_string(), set(ws))).collect();
        InformationModel::new(worlds, valuation).unwrap()
    }

    /// Two worlds, `i^w = k^w = {w}`, `p` only at world 0.
    pub fn uniformity_model() -> BoundedModel {
        BoundedModel::single_agent(info_model(2, &[("p", &[0])]), vec![set(&[0]), set(&[1])], vec![set(&[0]), set(&[1])])
            .unwrap()
    }
}
