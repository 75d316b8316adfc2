//! Brute-force isomorphism of pointed models.

use crate::models::World;
use crate::Intension;

use super::Witness;

fn map_set(s: Intension, perm: &[World]) -> Intension {
    s.iter().map(|w| perm[w]).collect()
}

/// Next permutation in lexicographic order; false after the last one.
fn next_permutation(p: &mut [World]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot has a successor");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn same_under(a: &Witness, b: &Witness, perm: &[World]) -> bool {
    let sets_match = |xs: &[Intension], ys: &[Intension]| xs.iter().enumerate().all(|(w, &x)| ys[perm[w]] == map_set(x, perm));
    if map_set(a.state(), perm) != b.state() {
        return false;
    }
    match (a, b) {
        (Witness::Domain(x), Witness::Domain(y)) => {
            x.world.map(|w| perm[w]) == y.world
                && x.model.base().valuation().iter().all(|(p, &e)| y.model.base().valuation()[p] == map_set(e, perm))
                && sets_match(x.model.k_function(), y.model.k_function())
        }
        (Witness::Stable(x), Witness::Stable(y)) => {
            x.model.base().valuation().iter().all(|(p, &e)| y.model.base().valuation()[p] == map_set(e, perm))
                && sets_match(x.model.info_function(), y.model.info_function())
                && x.model.k_functions().iter().all(|(ag, ks)| sets_match(ks, &y.model.k_functions()[ag]))
        }
        _ => false,
    }
}

fn signature_matches(a: &Witness, b: &Witness) -> bool {
    match (a, b) {
        (Witness::Domain(x), Witness::Domain(y)) => {
            x.model.base().valuation().keys().eq(y.model.base().valuation().keys()) && x.world.is_some() == y.world.is_some()
        }
        (Witness::Stable(x), Witness::Stable(y)) => {
            x.model.base().valuation().keys().eq(y.model.base().valuation().keys())
                && x.model.k_functions().keys().eq(y.model.k_functions().keys())
        }
        _ => false,
    }
}

/// A world bijection carrying `a` onto `b` (model, state and evaluation
/// world), if one exists. `result[w]` is the image of `a`'s world `w`.
pub fn isomorphism(a: &Witness, b: &Witness) -> Option<Vec<World>> {
    if a.worlds() != b.worlds() || !signature_matches(a, b) {
        return None;
    }
    let mut perm: Vec<World> = (0..a.worlds()).collect();
    loop {
        if same_under(a, b, &perm) {
            return Some(perm);
        }
        if !next_permutation(&mut perm) {
            return None;
        }
    }
}
