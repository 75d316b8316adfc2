//! JSON model files.
//!
//! ```json
//! {"worlds": 2, "valuation": {"p": [0]},
//!  "ifun": {"0": [0], "1": [1]},
//!  "kfun": {"1": {"0": [0], "1": [1]}}}
//! ```
//!
//! Classical models carry `"k": {"0": [...], ...}` in place of `ifun`/`kfun`.
//! World lists are written in ascending order; loading validates the model.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{BoundedModel, ClassicalModel, InformationModel, World};
use crate::syntax::Agent;
use crate::Intension;

type WorldMap = BTreeMap<World, Vec<World>>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundedJson {
    worlds: usize,
    valuation: BTreeMap<String, Vec<World>>,
    ifun: WorldMap,
    kfun: BTreeMap<u32, WorldMap>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassicalJson {
    worlds: usize,
    valuation: BTreeMap<String, Vec<World>>,
    k: WorldMap,
}

fn to_list(s: Intension) -> Vec<World> {
    s.iter().collect()
}

fn from_list(what: &str, list: &[World], worlds: usize) -> Result<Intension> {
    match list.iter().find(|&&w| w >= worlds) {
        Some(&w) => Err(Error::OutOfRange { what: what.to_string(), world: w, worlds }),
        None => Ok(list.iter().copied().collect()),
    }
}

fn world_map(what: &str, map: &WorldMap, worlds: usize) -> Result<Vec<Intension>> {
    if let Some(&w) = map.keys().find(|&&w| w >= worlds) {
        return Err(Error::OutOfRange { what: what.to_string(), world: w, worlds });
    }
    (0..worlds)
        .map(|w| match map.get(&w) {
            Some(list) => from_list(&format!("{what}^{w}"), list, worlds),
            None => Err(Error::MissingWorld { what: what.to_string(), world: w }),
        })
        .collect()
}

fn base(worlds: usize, valuation: &BTreeMap<String, Vec<World>>) -> Result<InformationModel> {
    if worlds == 0 || worlds > super::MAX_WORLDS {
        return Err(Error::WorldCount { worlds, cap: super::MAX_WORLDS });
    }
    let v = valuation
        .iter()
        .map(|(a, ws)| Ok((a.clone(), from_list(&format!("I({a})"), ws, worlds)?)))
        .collect::<Result<_>>()?;
    InformationModel::new(worlds, v)
}

fn valuation_json(m: &InformationModel) -> BTreeMap<String, Vec<World>> {
    m.valuation().iter().map(|(a, e)| (a.clone(), to_list(*e))).collect()
}

fn map_json(f: &[Intension]) -> WorldMap {
    f.iter().enumerate().map(|(w, s)| (w, to_list(*s))).collect()
}

impl BoundedModel {
    pub fn to_json(&self) -> serde_json::Value {
        let j = BoundedJson {
            worlds: self.worlds(),
            valuation: valuation_json(self.base()),
            ifun: map_json(self.info_function()),
            kfun: self.k_functions().iter().map(|(a, ks)| (a.index(), map_json(ks))).collect(),
        };
        serde_json::to_value(j).expect("model serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let j: BoundedJson = serde_json::from_str(text)?;
        Self::from_raw(j)
    }

    fn from_raw(j: BoundedJson) -> Result<Self> {
        let base = base(j.worlds, &j.valuation)?;
        let ifun = world_map("i", &j.ifun, j.worlds)?;
        let mut kfun = BTreeMap::new();
        for (a, map) in &j.kfun {
            let agent = Agent::new(*a).ok_or_else(|| Error::Claim("agent keys start at 1".into()))?;
            kfun.insert(agent, world_map(&format!("k_{a}"), map, j.worlds)?);
        }
        BoundedModel::new(base, ifun, kfun)
    }
}

impl ClassicalModel {
    pub fn to_json(&self) -> serde_json::Value {
        let j = ClassicalJson {
            worlds: self.worlds(),
            valuation: valuation_json(self.base()),
            k: map_json(self.k_function()),
        };
        serde_json::to_value(j).expect("model serializes")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let j: ClassicalJson = serde_json::from_str(text)?;
        Self::from_raw(j)
    }

    fn from_raw(j: ClassicalJson) -> Result<Self> {
        let base = base(j.worlds, &j.valuation)?;
        let k = world_map("k", &j.k, j.worlds)?;
        ClassicalModel::new(base, k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyModel {
    Bounded(BoundedModel),
    Classical(ClassicalModel),
}

impl AnyModel {
    /// Dispatch on the presence of a `"k"` key.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        if value.get("k").is_some() {
            ClassicalModel::from_json_str(text).map(AnyModel::Classical)
        } else {
            BoundedModel::from_json_str(text).map(AnyModel::Bounded)
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            AnyModel::Bounded(m) => m.to_json(),
            AnyModel::Classical(m) => m.to_json(),
        }
    }

    pub fn worlds(&self) -> usize {
        match self {
            AnyModel::Bounded(m) => m.worlds(),
            AnyModel::Classical(m) => m.worlds(),
        }
    }

    pub fn into_bounded(self) -> Result<BoundedModel> {
        match self {
            AnyModel::Bounded(m) => Ok(m),
            AnyModel::Classical(_) => Err(Error::ModelKind { expected: "bounded" }),
        }
    }

    pub fn into_classical(self) -> Result<ClassicalModel> {
        match self {
            AnyModel::Classical(m) => Ok(m),
            AnyModel::Bounded(_) => Err(Error::ModelKind { expected: "classical" }),
        }
    }
}

pub fn load_model(path: impl AsRef<Path>) -> Result<AnyModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    AnyModel::from_json_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::fixtures::uniformity_model;
    use crate::models::{enumerate_bounded_models, enumerate_classical_models, Clause};
    use proptest::prelude::*;

    #[test]
    fn writes_documented_shape() {
        let text = serde_json::to_string(&uniformity_model().to_json()).unwrap();
        assert_eq!(
            text,
            r#"{"ifun":{"0":[0],"1":[1]},"kfun":{"1":{"0":[0],"1":[1]}},"valuation":{"p":[0]},"worlds":2}"#
        );
    }

    #[test]
    fn loads_documented_example() {
        let m = AnyModel::from_json_str(
            r#"{"worlds": 3, "valuation": {"p": [0,2]}, "ifun": {"0": [0], "1": [1], "2": [2]},
                "kfun": {"1": {"0": [0,1], "1": [1], "2": [2]}}}"#,
        )
        .unwrap()
        .into_bounded()
        .unwrap();
        assert_eq!(m.base().extension("p").unwrap(), [0, 2].into_iter().collect());
        let c = AnyModel::from_json_str(r#"{"worlds": 2, "valuation": {"p": [1]}, "k": {"0": [0,1], "1": [1]}}"#)
            .unwrap()
            .into_classical()
            .unwrap();
        assert_eq!(c.k(0).len(), 2);
    }

    #[test]
    fn rejects_invalid_files() {
        let bad_k = r#"{"worlds": 2, "valuation": {}, "ifun": {"0": [0], "1": [1]}, "kfun": {"1": {"0": [1], "1": [1]}}}"#;
        match AnyModel::from_json_str(bad_k) {
            Err(Error::InvalidModel(v)) => assert_eq!(v.clause, Clause::KnowledgeVeridicality(Agent::ONE)),
            other => panic!("{other:?}"),
        }
        let missing = r#"{"worlds": 2, "valuation": {}, "ifun": {"0": [0]}, "kfun": {}}"#;
        assert!(matches!(AnyModel::from_json_str(missing), Err(Error::MissingWorld { world: 1, .. })));
        let range = r#"{"worlds": 1, "valuation": {"p": [3]}, "k": {"0": [0]}}"#;
        assert!(matches!(AnyModel::from_json_str(range), Err(Error::OutOfRange { world: 3, .. })));
        let extra = r#"{"worlds": 1, "valuation": {}, "k": {"0": [0]}, "colour": 1}"#;
        assert!(matches!(AnyModel::from_json_str(extra), Err(Error::Json { .. })));
        let agent0 = r#"{"worlds": 1, "valuation": {}, "ifun": {"0": [0]}, "kfun": {"0": {"0": [0]}}}"#;
        assert!(AnyModel::from_json_str(agent0).is_err());
        assert!(matches!(
            AnyModel::from_json_str(r#"{"worlds": 1, "valuation": {}, "k": {"0": [0]}}"#).unwrap().into_bounded(),
            Err(Error::ModelKind { .. })
        ));
    }

    proptest! {
        #[test]
        fn bounded_round_trip(idx in 0usize..2896) {
            let m = enumerate_bounded_models(3, &["p"], &[Agent::ONE]).unwrap().nth(idx).unwrap();
            let text = m.to_json().to_string();
            prop_assert_eq!(AnyModel::from_json_str(&text).unwrap(), AnyModel::Bounded(m));
        }

        #[test]
        fn classical_round_trip(idx in 0usize..1024) {
            let m = enumerate_classical_models(3, &["p", "q"]).unwrap().nth(idx).unwrap();
            let text = m.to_json().to_string();
            prop_assert_eq!(AnyModel::from_json_str(&text).unwrap(), AnyModel::Classical(m));
        }
    }
}
