//! Bounds, outcomes, and the ordered parallel search used by every sweep.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::models::enumeration_cap;

/// Finite search bound. "Valid" always means valid up to this bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bound {
    pub max_worlds: usize,
    /// Only meaningful for schematic sweeps over enumerated formulas.
    pub max_formula_size: Option<usize>,
}

impl Bound {
    pub fn worlds(max_worlds: usize) -> Bound {
        Bound { max_worlds, max_formula_size: None }
    }

    pub fn with_formula_size(self, size: usize) -> Bound {
        Bound { max_formula_size: Some(size), ..self }
    }

    pub fn check(&self) -> Result<()> {
        let cap = enumeration_cap();
        if self.max_worlds == 0 || self.max_worlds > cap {
            return Err(Error::CapExceeded { requested: self.max_worlds, cap });
        }
        Ok(())
    }

    pub fn formula_size(&self) -> usize {
        self.max_formula_size.unwrap_or(6)
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n<={} worlds", self.max_worlds)?;
        if let Some(s) = self.max_formula_size {
            write!(f, ", formula size <={s}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome<W> {
    /// No counterexample up to the bound.
    Valid(Bound),
    CounterExample(W),
}

impl<W> Outcome<W> {
    pub fn is_valid(&self) -> bool {
        matches!(self, Outcome::Valid(_))
    }

    pub fn counterexample(&self) -> Option<&W> {
        match self {
            Outcome::CounterExample(w) => Some(w),
            Outcome::Valid(_) => None,
        }
    }

    pub fn into_counterexample(self) -> Option<W> {
        match self {
            Outcome::CounterExample(w) => Some(w),
            Outcome::Valid(_) => None,
        }
    }

    pub fn map<V>(self, f: impl FnOnce(W) -> V) -> Outcome<V> {
        match self {
            Outcome::Valid(b) => Outcome::Valid(b),
            Outcome::CounterExample(w) => Outcome::CounterExample(f(w)),
        }
    }
}

const CHUNK: usize = 2048;

/// First `Some` in stream order, searching each chunk in parallel.
///
/// The result does not depend on the thread count.
pub fn first_hit<T, R, I, F>(items: I, f: F) -> Option<R>
where
    I: IntoIterator<Item = T>,
    T: Send + Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    let mut iter = items.into_iter();
    loop {
        let chunk: Vec<T> = iter.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            return None;
        }
        if let Some(hit) = chunk.par_iter().find_map_first(&f) {
            return Some(hit);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_hit_is_stream_order() {
        let hit = first_hit(0..10_000u32, |&x| (x % 1000 == 999).then_some(x));
        assert_eq!(hit, Some(999));
        assert_eq!(first_hit(0..10u32, |_| None::<u32>), None);
    }

    #[test]
    fn bound_labels() {
        assert_eq!(Bound::worlds(3).to_string(), "n<=3 worlds");
        assert_eq!(Bound::worlds(3).with_formula_size(6).to_string(), "n<=3 worlds, formula size <=6");
        assert!(Bound::worlds(9).check().is_err());
        assert!(Bound::worlds(3).check().is_ok());
    }
}
