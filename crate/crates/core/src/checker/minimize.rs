//! Greedy witness minimization.
//!
//! Worlds are dropped first, then the worldly-information and epistemic
//! states are shrunk one world at a time, until nothing more can be removed
//! without breaking the model or losing the refutation. Candidates are tried
//! in ascending order, so the result is deterministic.

use crate::domain::DomainWitness;
use crate::error::Result;
use crate::models::renumbering;
use crate::stable::StableWitness;
use crate::Intension;

use super::{Claim, Witness};

pub fn minimize(claim: &Claim, mut w: Witness) -> Result<Witness> {
    loop {
        match step(claim, &w)? {
            Some(next) => w = next,
            None => return Ok(w),
        }
    }
}

/// The first one-step reduction that still refutes the claim.
fn step(claim: &Claim, w: &Witness) -> Result<Option<Witness>> {
    for cand in candidates(w) {
        if claim.refuted_by(&cand)? {
            return Ok(Some(cand));
        }
    }
    Ok(None)
}

fn candidates(w: &Witness) -> Vec<Witness> {
    match w {
        Witness::Domain(d) => domain_candidates(d),
        Witness::Stable(s) => stable_candidates(s),
    }
}

fn domain_candidates(d: &DomainWitness) -> Vec<Witness> {
    let n = d.model.worlds();
    let universe = d.model.base().universe();
    let mut out = Vec::new();
    for drop in 0..n {
        if d.world == Some(drop) {
            continue;
        }
        let keep = universe.without(drop);
        if let Some(model) = d.model.restrict(keep) {
            let map = renumbering(n, keep);
            let world = d.world.map(|x| map[x].expect("kept"));
            out.push(Witness::Domain(DomainWitness { model, state: d.state.remap(&map), world }));
        }
    }
    for w in 0..n {
        for u in d.model.k(w).iter().filter(|&u| u != w) {
            if let Some(model) = d.model.with_k(w, d.model.k(w).without(u)) {
                out.push(Witness::Domain(DomainWitness { model, ..d.clone() }));
            }
        }
    }
    out
}

fn stable_candidates(s: &StableWitness) -> Vec<Witness> {
    let n = s.model.worlds();
    let universe = s.model.universe();
    let mut out = Vec::new();
    for drop in 0..n {
        let keep = universe.without(drop);
        if let Some(model) = s.model.restrict(keep) {
            let map = renumbering(n, keep);
            out.push(Witness::Stable(StableWitness { model, state: s.state.remap(&map) }));
        }
    }
    for w in 0..n {
        let iw: Intension = s.model.info(w);
        for u in iw.iter().filter(|&u| u != w) {
            if let Some(model) = s.model.with_info(w, iw.without(u)) {
                out.push(Witness::Stable(StableWitness { model, state: s.state }));
            }
        }
    }
    for (&agent, ks) in s.model.k_functions() {
        for (w, &kw) in ks.iter().enumerate() {
            for u in kw.iter().filter(|&u| u != w) {
                if let Some(model) = s.model.with_k(agent, w, kw.without(u)) {
                    out.push(Witness::Stable(StableWitness { model, state: s.state }));
                }
            }
        }
    }
    out
}
