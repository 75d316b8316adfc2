//! Exhaustive, deterministic model enumeration.
//!
//! Every stream is lexicographic: earlier worlds (and agents, and atoms in
//! name order) vary slowest, and each component runs through its candidate
//! masks in ascending order.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::models::{BoundedModel, ClassicalModel, InformationModel};
use crate::syntax::Agent;
use crate::Intension;

pub const DEFAULT_ENUMERATION_CAP: usize = 4;

/// State tables index information states by mask in a 64-bit word.
pub const HARD_ENUMERATION_CAP: usize = 6;

const CAP_ENV: &str = "MODAL_WB_MAX_WORLDS";

/// Enumeration cap: `MODAL_WB_MAX_WORLDS` if set and parseable, clamped to
/// [`HARD_ENUMERATION_CAP`]; otherwise [`DEFAULT_ENUMERATION_CAP`].
pub fn enumeration_cap() -> usize {
    std::env::var(CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map(|v| v.clamp(1, HARD_ENUMERATION_CAP))
        .unwrap_or(DEFAULT_ENUMERATION_CAP)
}

fn check_cap(n: usize) -> Result<()> {
    let cap = enumeration_cap();
    if n == 0 || n > cap {
        return Err(Error::CapExceeded { requested: n, cap });
    }
    Ok(())
}

/// Mixed-radix counter over `radices`, most significant digit first.
struct Odometer {
    radices: Vec<usize>,
    digits: Option<Vec<usize>>,
}

impl Odometer {
    fn new(radices: Vec<usize>) -> Self {
        let digits = if radices.contains(&0) { None } else { Some(vec![0; radices.len()]) };
        Odometer { radices, digits }
    }
}

impl Iterator for Odometer {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.digits.clone()?;
        let digits = self.digits.as_mut().expect("checked above");
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                self.digits = None;
                break;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < self.radices[pos] {
                break;
            }
            digits[pos] = 0;
        }
        Some(cur)
    }
}

fn product<T: Copy>(choices: Vec<Vec<T>>) -> impl Iterator<Item = Vec<T>> {
    let radices = choices.iter().map(Vec::len).collect();
    Odometer::new(radices).map(move |idx| idx.iter().enumerate().map(|(k, &d)| choices[k][d]).collect())
}

/// All `(2^n)^|atoms|` valuations; atoms are sorted and deduplicated first.
pub fn valuations(n: usize, atoms: &[&str]) -> Vec<BTreeMap<String, Intension>> {
    let mut names: Vec<&str> = atoms.to_vec();
    names.sort_unstable();
    names.dedup();
    let masks: Vec<Intension> = Intension::full(n).subsets().collect();
    product(vec![masks; names.len()])
        .map(|exts| names.iter().map(|a| a.to_string()).zip(exts).collect())
        .collect()
}

pub fn enumerate_information_models(n: usize, atoms: &[&str]) -> Result<impl Iterator<Item = InformationModel>> {
    check_cap(n)?;
    Ok(valuations(n, atoms).into_iter().map(move |v| InformationModel::new_unchecked(n, v)))
}

/// Nonempty intensions containing `w`, ascending.
fn reflexive_candidates(n: usize, w: usize) -> Vec<Intension> {
    Intension::full(n).subsets().filter(|s| s.contains(w)).collect()
}

/// Every reflexive epistemic-state function on `n` worlds.
pub fn classical_k_functions(n: usize) -> Vec<Vec<Intension>> {
    product((0..n).map(|w| reflexive_candidates(n, w)).collect()).collect()
}

pub fn enumerate_classical_models(n: usize, atoms: &[&str]) -> Result<impl Iterator<Item = ClassicalModel>> {
    check_cap(n)?;
    let vals = valuations(n, atoms);
    Ok(classical_k_functions(n).into_iter().flat_map(move |k| {
        vals.clone()
            .into_iter()
            .map(move |v| ClassicalModel::new_unchecked(InformationModel::new_unchecked(n, v), k.clone()))
    }))
}

/// The valuation-free part of a bounded model.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundedFrame {
    pub ifun: Vec<Intension>,
    pub kfun: BTreeMap<Agent, Vec<Intension>>,
}

impl BoundedFrame {
    pub fn with_valuation(&self, n: usize, valuation: BTreeMap<String, Intension>) -> BoundedModel {
        BoundedModel::new_unchecked(InformationModel::new_unchecked(n, valuation), self.ifun.clone(), self.kfun.clone())
    }
}

fn coherent_info_functions(n: usize) -> Vec<Vec<Intension>> {
    product((0..n).map(|w| reflexive_candidates(n, w)).collect())
        .filter(|ifun| (0..n).all(|w| ifun[w].iter().all(|u| ifun[u].is_subset(ifun[w]))))
        .collect()
}

/// Every (ifun, kfun) pair meeting the bounded-model stipulations.
pub fn bounded_frames(n: usize, agents: &[Agent]) -> Vec<BoundedFrame> {
    let mut agents = agents.to_vec();
    agents.sort_unstable();
    agents.dedup();
    let mut out = Vec::new();
    for ifun in coherent_info_functions(n) {
        let per_world: Vec<Vec<Intension>> = (0..n)
            .map(|w| {
                reflexive_candidates(n, w).into_iter().filter(|k| k.iter().all(|u| ifun[u].is_subset(*k))).collect()
            })
            .collect();
        let k_functions: Vec<Vec<Intension>> = product(per_world).collect();
        let radices = vec![k_functions.len(); agents.len()];
        for pick in Odometer::new(radices) {
            let kfun = agents.iter().zip(&pick).map(|(&a, &d)| (a, k_functions[d].clone())).collect();
            out.push(BoundedFrame { ifun: ifun.clone(), kfun });
        }
    }
    out
}

pub fn enumerate_bounded_models(
    n: usize,
    atoms: &[&str],
    agents: &[Agent],
) -> Result<impl Iterator<Item = BoundedModel>> {
    check_cap(n)?;
    let vals = valuations(n, atoms);
    Ok(bounded_frames(n, agents)
        .into_iter()
        .flat_map(move |frame| vals.clone().into_iter().map(move |v| frame.with_valuation(n, v))))
}

impl InformationModel {
    pub(crate) fn new_unchecked(worlds: usize, valuation: BTreeMap<String, Intension>) -> Self {
        InformationModel { worlds, valuation }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    const ONE: &[Agent] = &[Agent::ONE];

    #[test]
    fn information_model_counts() {
        assert_eq!(enumerate_information_models(1, &["p"]).unwrap().count(), 2);
        assert_eq!(enumerate_information_models(2, &["p"]).unwrap().count(), 4);
        assert_eq!(enumerate_information_models(3, &["p", "q"]).unwrap().count(), 64);
        let first: Vec<_> = enumerate_information_models(2, &["q", "p"]).unwrap().take(3).collect();
        assert_eq!(first[0].extension("p").unwrap().bits(), 0);
        assert_eq!(first[1].extension("q").unwrap().bits(), 1);
        assert_eq!(first[2].extension("q").unwrap().bits(), 2);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(enumerate_bounded_models(7, &["p"], ONE), Err(Error::CapExceeded { requested: 7, .. })));
        assert!(matches!(enumerate_classical_models(0, &["p"]), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn single_world_is_forced() {
        let ms: Vec<_> = enumerate_bounded_models(1, &["p"], ONE).unwrap().collect();
        assert_eq!(ms.len(), 2);
        for m in &ms {
            assert_eq!(m.info(0).bits(), 1);
            assert_eq!(m.k_function(Agent::ONE).unwrap()[0].bits(), 1);
        }
        let cs: Vec<_> = enumerate_classical_models(1, &["p"]).unwrap().collect();
        assert_eq!(cs.len(), 2);
        assert!(cs.iter().all(|c| c.k(0).bits() == 1));
    }

    /// Independent count: filter every pair of arbitrary world-to-set maps by the stipulations.
    fn naive_bounded_frame_count(n: usize, agents: usize) -> usize {
        let sets: Vec<Intension> = Intension::full(n).subsets().collect();
        let maps: Vec<Vec<Intension>> = product(vec![sets; n]).collect();
        let mut count = 0;
        for ifun in &maps {
            let imodel_ok = (0..n).all(|w| ifun[w].contains(w) && ifun[w].iter().all(|u| ifun[u].is_subset(ifun[w])));
            if !imodel_ok {
                continue;
            }
            let good_k = maps
                .iter()
                .filter(|k| (0..n).all(|w| k[w].contains(w) && k[w].iter().all(|u| ifun[u].is_subset(k[w]))))
                .count();
            count += good_k.pow(agents as u32);
        }
        count
    }

    #[test]
    fn bounded_counts_match_naive_filter() {
        for n in 1..=3 {
            assert_eq!(bounded_frames(n, ONE).len(), naive_bounded_frame_count(n, 1), "n={n}");
        }
        assert_eq!(bounded_frames(2, &[Agent::ONE, Agent::new(2).unwrap()]).len(), naive_bounded_frame_count(2, 2));
        // frozen regression constants
        assert_eq!(enumerate_bounded_models(2, &["p"], ONE).unwrap().count(), 36);
        assert_eq!(bounded_frames(3, ONE).len(), 362);
    }

    #[test]
    fn classical_counts() {
        // brute force: every map world -> set, filtered by reflexivity
        let sets: Vec<Intension> = Intension::full(2).subsets().collect();
        let naive = product(vec![sets; 2]).filter(|k| (0..2).all(|w| k[w].contains(w))).count();
        assert_eq!(naive, 4);
        assert_eq!(classical_k_functions(2).len(), naive);
        assert_eq!(enumerate_classical_models(2, &["p"]).unwrap().count(), 16);
        assert_eq!(classical_k_functions(3).len(), 64);
    }

    #[test]
    fn every_model_validates_and_streams_are_duplicate_free() {
        let mut seen = HashSet::new();
        for m in enumerate_bounded_models(3, &["p"], ONE).unwrap() {
            assert_eq!(m.validate(), Ok(()));
            assert!(seen.insert(m));
        }
        let mut seen = HashSet::new();
        for m in enumerate_classical_models(3, &["p"]).unwrap() {
            assert_eq!(m.validate(), Ok(()));
            assert!(seen.insert(m));
        }
        let two = [Agent::ONE, Agent::new(2).unwrap()];
        let mut seen = HashSet::new();
        for m in enumerate_bounded_models(2, &["p"], &two).unwrap() {
            assert_eq!(m.validate(), Ok(()));
            assert!(seen.insert(m));
        }
    }

    #[test]
    fn order_is_deterministic() {
        let a: Vec<_> = enumerate_bounded_models(2, &["p", "q"], ONE).unwrap().collect();
        let b: Vec<_> = enumerate_bounded_models(2, &["q", "p"], ONE).unwrap().collect();
        assert_eq!(a, b);
        assert_eq!(a[0].info(0).bits(), 1);
        assert_eq!(a[0].info(1).bits(), 2);
    }

    #[test]
    fn coherent_states_are_unions_of_worldly_information() {
        // an internally coherent state is the union of the worldly information of its members
        for n in 1..=3 {
            for frame in bounded_frames(n, ONE) {
                let m = frame.with_valuation(n, BTreeMap::new());
                for i in m.universe().subsets() {
                    if m.is_internally_coherent(i) {
                        let union = i.iter().fold(Intension::empty(), |acc, w| acc.union(m.info(w)));
                        assert_eq!(union, i);
                        let acc = m.accessible_refinements(i);
                        assert!(acc.contains(&i));
                        assert!(!acc.contains(&Intension::empty()));
                    }
                }
            }
        }
    }
}
