//! Claims, counter-model search, and the regression suite.
//!
//! A [`Claim`] pairs a formula-level question with the semantics it is asked
//! in and the expected answer. Claims are evaluated by exhaustive search up to
//! a [`Bound`]; a failing claim comes with a minimized witness that is
//! re-checked with the reference evaluators before it is reported.

mod facts;
mod iso;
mod minimize;
mod report;
mod survey;

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::domain::{self, DomainWitness, KVariant};
use crate::error::{Error, Result};
use crate::models::{AnyModel, BoundedModel, ClassicalModel, World};
use crate::stable::{self, StableWitness, StateScope};
use crate::sweep::Bound;
use crate::syntax::{parse, Formula, Style};
use crate::Intension;

pub use facts::{reference, run_suite, suite_claims};
pub use iso::isomorphism;
pub use minimize::minimize;
pub use report::{render_human, render_json, FactReport, RenderOptions};
pub use survey::{survey, Survey, SurveyCheck, SurveyViolation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Semantics {
    DomainClassic,
    DomainModified,
    Stable,
}

impl Semantics {
    pub fn variant(self) -> Option<KVariant> {
        match self {
            Semantics::DomainClassic => Some(KVariant::Classic),
            Semantics::DomainModified => Some(KVariant::ModifiedFactive),
            Semantics::Stable => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Semantics::DomainClassic => "domain-classic",
            Semantics::DomainModified => "domain-modified",
            Semantics::Stable => "stable",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expected {
    Holds,
    Fails,
}

impl Expected {
    pub fn name(self) -> &'static str {
        match self {
            Expected::Holds => "holds",
            Expected::Fails => "fails",
        }
    }
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClaimKind {
    /// `premise ⊨ conclusion` (domain semantics).
    TruthEntails,
    /// `premise ⊩ conclusion` (domain semantics).
    AcceptanceEntails,
    /// `premise ⊫ conclusion` (stable semantics).
    CoherentEntails,
    /// Same supporting states (stable semantics).
    AssertoricEquiv,
    /// No nonempty state supports (or accepts) the premise.
    Incoherent,
    /// The given state of the given model supports (or accepts) the premise.
    Supports { model: PathBuf, state: Vec<World> },
}

impl ClaimKind {
    pub fn name(&self) -> &'static str {
        match self {
            ClaimKind::TruthEntails => "truth_entails",
            ClaimKind::AcceptanceEntails => "acceptance_entails",
            ClaimKind::CoherentEntails => "coherent_entails",
            ClaimKind::AssertoricEquiv => "assertoric_equiv",
            ClaimKind::Incoherent => "incoherent",
            ClaimKind::Supports { .. } => "supports",
        }
    }

    fn needs_conclusion(&self) -> bool {
        !matches!(self, ClaimKind::Incoherent | ClaimKind::Supports { .. })
    }

    fn allows(&self, s: Semantics) -> bool {
        match self {
            ClaimKind::TruthEntails | ClaimKind::AcceptanceEntails => s != Semantics::Stable,
            ClaimKind::CoherentEntails | ClaimKind::AssertoricEquiv => s == Semantics::Stable,
            ClaimKind::Incoherent | ClaimKind::Supports { .. } => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(try_from = "RawClaim")]
pub struct Claim {
    pub id: String,
    pub kind: ClaimKind,
    pub premise: Formula,
    pub conclusion: Option<Formula>,
    pub semantics: Semantics,
    pub expected: Expected,
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum RawKind {
    TruthEntails,
    AcceptanceEntails,
    CoherentEntails,
    AssertoricEquiv,
    Incoherent,
    Supports,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClaim {
    id: String,
    kind: RawKind,
    premise: String,
    #[serde(default)]
    conclusion: Option<String>,
    semantics: Semantics,
    expected: Expected,
    #[serde(default)]
    model: Option<PathBuf>,
    #[serde(default)]
    state: Option<Vec<World>>,
}

impl TryFrom<RawClaim> for Claim {
    type Error = String;

    fn try_from(raw: RawClaim) -> Result<Claim, String> {
        let extras = raw.model.is_some() || raw.state.is_some();
        let kind = match raw.kind {
            RawKind::TruthEntails => ClaimKind::TruthEntails,
            RawKind::AcceptanceEntails => ClaimKind::AcceptanceEntails,
            RawKind::CoherentEntails => ClaimKind::CoherentEntails,
            RawKind::AssertoricEquiv => ClaimKind::AssertoricEquiv,
            RawKind::Incoherent => ClaimKind::Incoherent,
            RawKind::Supports => match (raw.model, raw.state) {
                (Some(model), Some(state)) => ClaimKind::Supports { model, state },
                _ => return Err(format!("claim `{}`: supports needs `model` and `state`", raw.id)),
            },
        };
        if !matches!(kind, ClaimKind::Supports { .. }) && extras {
            return Err(format!("claim `{}`: `model` and `state` only apply to supports", raw.id));
        }
        let premise = parse(&raw.premise).map_err(|e| format!("claim `{}`: premise: {e}", raw.id))?;
        let conclusion = match raw.conclusion {
            Some(text) => Some(parse(&text).map_err(|e| format!("claim `{}`: conclusion: {e}", raw.id))?),
            None => None,
        };
        Claim::new(raw.id, kind, premise, conclusion, raw.semantics, raw.expected).map_err(|e| match e {
            Error::Claim(m) => m,
            other => other.to_string(),
        })
    }
}

impl Claim {
    pub fn new(
        id: impl Into<String>,
        kind: ClaimKind,
        premise: Formula,
        conclusion: Option<Formula>,
        semantics: Semantics,
        expected: Expected,
    ) -> Result<Claim> {
        let id = id.into();
        if !kind.allows(semantics) {
            return Err(Error::Claim(format!("claim `{id}`: {} is not defined for {} semantics", kind.name(), semantics.name())));
        }
        if kind.needs_conclusion() != conclusion.is_some() {
            let what = if kind.needs_conclusion() { "needs" } else { "takes no" };
            return Err(Error::Claim(format!("claim `{id}`: {} {what} conclusion", kind.name())));
        }
        Ok(Claim { id, kind, premise, conclusion, semantics, expected })
    }

    /// A two-formula claim.
    pub fn entails(id: &str, kind: ClaimKind, premise: &str, conclusion: &str, semantics: Semantics, expected: Expected) -> Result<Claim> {
        Claim::new(id, kind, parse(premise)?, Some(parse(conclusion)?), semantics, expected)
    }

    /// The claim as one line, e.g. `<>p ||= ~K~p [stable]`.
    pub fn statement(&self, style: Style) -> String {
        let p = self.premise.display(style).to_string();
        let c = self.conclusion.as_ref().map(|c| c.display(style).to_string()).unwrap_or_default();
        let (truth, accept, coherent, equiv) = match style {
            Style::Ascii => ("|=", "||-", "||=", "=="),
            Style::Unicode => ("⊨", "⊩", "⊫", "≡"),
        };
        let body = match &self.kind {
            ClaimKind::TruthEntails => format!("{p} {truth} {c}"),
            ClaimKind::AcceptanceEntails => format!("{p} {accept} {c}"),
            ClaimKind::CoherentEntails => format!("{p} {coherent} {c}"),
            ClaimKind::AssertoricEquiv => format!("{p} {equiv} {c}"),
            ClaimKind::Incoherent => format!("incoherent {p}"),
            ClaimKind::Supports { model, state } => format!("{}:{state:?} supports {p}", model.display()),
        };
        format!("{body} [{}]", self.semantics.name())
    }

    fn conclusion(&self) -> &Formula {
        self.conclusion.as_ref().expect("validated at construction")
    }

    /// Whether `w` refutes the claim, by the reference evaluators.
    pub fn refuted_by(&self, w: &Witness) -> Result<bool> {
        match (&self.kind, w, self.semantics.variant()) {
            (ClaimKind::TruthEntails, Witness::Domain(d), Some(v)) => {
                domain::refutes_truth(d, &self.premise, self.conclusion(), v)
            }
            (ClaimKind::AcceptanceEntails, Witness::Domain(d), Some(v)) => {
                domain::refutes_acceptance(d, &self.premise, self.conclusion(), v)
            }
            (ClaimKind::Incoherent, Witness::Domain(d), Some(v)) => {
                Ok(!d.state.is_empty() && domain::accepts(&d.model, d.state, &self.premise, v)?)
            }
            (ClaimKind::CoherentEntails, Witness::Stable(s), None) => {
                stable::refutes_coherent(s, &self.premise, self.conclusion())
            }
            (ClaimKind::AssertoricEquiv, Witness::Stable(s), None) => {
                stable::refutes_equivalence(s, &self.premise, self.conclusion(), StateScope::All)
            }
            (ClaimKind::Incoherent, Witness::Stable(s), None) => {
                Ok(!s.state.is_empty() && stable::supports(&s.model, s.state, &self.premise)?)
            }
            _ => Ok(false),
        }
    }
}

/// A refuting point in either semantics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Domain(DomainWitness),
    Stable(StableWitness),
}

impl Witness {
    pub fn worlds(&self) -> usize {
        match self {
            Witness::Domain(d) => d.model.worlds(),
            Witness::Stable(s) => s.model.worlds(),
        }
    }

    pub fn state(&self) -> Intension {
        match self {
            Witness::Domain(d) => d.state,
            Witness::Stable(s) => s.state,
        }
    }

    /// `{"model": ..., "state": [...], "world": w}`; `world` only for truth-level witnesses.
    pub fn to_json(&self) -> Value {
        let (model, state, world) = match self {
            Witness::Domain(d) => (d.model.to_json(), d.state, d.world),
            Witness::Stable(s) => (s.model.to_json(), s.state, None),
        };
        let state: Vec<World> = state.iter().collect();
        match world {
            Some(w) => json!({ "model": model, "state": state, "world": w }),
            None => json!({ "model": model, "state": state }),
        }
    }

    pub fn from_json(value: &Value) -> Result<Witness> {
        let field = |k: &str| value.get(k).ok_or_else(|| Error::Claim(format!("witness has no `{k}`")));
        let model = AnyModel::from_json_str(&field("model")?.to_string())?;
        let list: Vec<World> = serde_json::from_value(field("state")?.clone())?;
        if let Some(&w) = list.iter().find(|&&w| w >= model.worlds()) {
            return Err(Error::OutOfRange { what: "witness state".into(), world: w, worlds: model.worlds() });
        }
        let state: Intension = list.into_iter().collect();
        let world: Option<World> = value.get("world").map(|w| serde_json::from_value(w.clone())).transpose()?;
        Ok(match model {
            AnyModel::Classical(model) => Witness::Domain(DomainWitness { model, state, world }),
            AnyModel::Bounded(model) => Witness::Stable(StableWitness { model, state }),
        })
    }
}

/// Outcome of evaluating one claim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub holds: bool,
    /// A minimized, re-verified refutation when the claim fails by search.
    pub witness: Option<Witness>,
}

/// First counterexample in enumeration order, without minimization.
pub fn first_countermodel(claim: &Claim, bound: Bound) -> Result<Option<Witness>> {
    let found = search(claim, bound)?;
    if let Some(w) = &found {
        if !claim.refuted_by(w)? {
            return Err(Error::Claim(format!("claim `{}`: search witness does not re-verify", claim.id)));
        }
    }
    Ok(found)
}

fn search(claim: &Claim, bound: Bound) -> Result<Option<Witness>> {
    let p = &claim.premise;
    let found = match (&claim.kind, claim.semantics.variant()) {
        (ClaimKind::TruthEntails, Some(v)) => domain::entails_truth(p, claim.conclusion(), bound, v)?.map(Witness::Domain),
        (ClaimKind::AcceptanceEntails, Some(v)) => {
            domain::entails_acceptance(p, claim.conclusion(), bound, v)?.map(Witness::Domain)
        }
        (ClaimKind::Incoherent, Some(v)) => domain::acceptable(p, bound, v)?.map(Witness::Domain),
        (ClaimKind::CoherentEntails, None) => stable::coherent_entails(p, claim.conclusion(), bound)?.map(Witness::Stable),
        (ClaimKind::AssertoricEquiv, None) => {
            stable::assertorically_equivalent(p, claim.conclusion(), bound, StateScope::All)?.map(Witness::Stable)
        }
        (ClaimKind::Incoherent, None) => stable::supportable(p, bound)?.map(Witness::Stable),
        (kind, _) => return Err(Error::Claim(format!("{} claims are not decided by search", kind.name()))),
    };
    Ok(found.into_counterexample())
}

/// First counterexample in enumeration order, minimized and re-verified.
///
/// `Ok(None)` means none exists up to the bound; a bound over the cap is an error.
pub fn find_countermodel(claim: &Claim, bound: Bound) -> Result<Option<Witness>> {
    let Some(first) = first_countermodel(claim, bound)? else {
        return Ok(None);
    };
    let small = minimize(claim, first)?;
    if !claim.refuted_by(&small)? {
        return Err(Error::Claim(format!("claim `{}`: minimized witness does not re-verify", claim.id)));
    }
    Ok(Some(small))
}

/// Decide a claim. `base` resolves relative model paths in `Supports` claims.
pub fn evaluate(claim: &Claim, bound: Bound, base: &Path) -> Result<Evaluation> {
    if let ClaimKind::Supports { model, state } = &claim.kind {
        let path = if model.is_absolute() { model.clone() } else { base.join(model) };
        let m = crate::models::load_model(&path)?;
        if let Some(&w) = state.iter().find(|&&w| w >= m.worlds()) {
            return Err(Error::OutOfRange { what: "state".into(), world: w, worlds: m.worlds() });
        }
        let i: Intension = state.iter().copied().collect();
        let holds = match (claim.semantics.variant(), m) {
            (None, AnyModel::Bounded(m)) => stable::supports(&m, i, &claim.premise)?,
            (Some(v), AnyModel::Classical(m)) => domain::accepts(&m, i, &claim.premise, v)?,
            (None, AnyModel::Classical(_)) => return Err(Error::ModelKind { expected: "bounded" }),
            (Some(_), AnyModel::Bounded(_)) => return Err(Error::ModelKind { expected: "classical" }),
        };
        return Ok(Evaluation { holds, witness: None });
    }
    let witness = find_countermodel(claim, bound)?;
    Ok(Evaluation { holds: witness.is_none(), witness })
}

/// Parse a claims file: a JSON array of claim objects. Whitespace-only files
/// hold no claims.
pub fn parse_claims(text: &str) -> Result<Vec<Claim>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let items: Vec<&serde_json::value::RawValue> = serde_json::from_str(text)?;
    items
        .into_iter()
        .map(|raw| {
            serde_json::from_str(raw.get()).map_err(|e| {
                let offset = raw.get().as_ptr() as usize - text.as_ptr() as usize;
                let before = &text[..offset];
                let line = before.matches('\n').count() + 1;
                let column = offset - before.rfind('\n').map_or(0, |i| i + 1) + 1;
                match Error::from(e) {
                    Error::Json { line: 0, message, .. } => Error::Json { line, column, message },
                    Error::Json { line: l, column: c, message } => Error::Json {
                        line: line + l - 1,
                        column: if l == 1 { column + c - 1 } else { c },
                        message,
                    },
                    other => other,
                }
            })
        })
        .collect()
}

/// Evaluate every claim of a file, in file order.
pub fn check_claims_file(path: impl AsRef<Path>, bound: Bound) -> Result<Vec<FactReport>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    let claims = parse_claims(&text)?;
    let base = path.parent().unwrap_or(Path::new("."));
    bound.check()?;
    claims.iter().map(|c| check_claim(c, bound, base)).collect()
}

/// Evaluate one claim into a report line, including the witness round-trip check.
pub fn check_claim(claim: &Claim, bound: Bound, base: &Path) -> Result<FactReport> {
    let start = Instant::now();
    let eval = evaluate(claim, bound, base)?;
    let swept = (!matches!(claim.kind, ClaimKind::Supports { .. })).then_some(bound);
    let mut report = FactReport::new(claim, eval.holds, swept);
    if let Some(w) = &eval.witness {
        let value = w.to_json();
        if !claim.refuted_by(&Witness::from_json(&value)?)? {
            report.mismatch("witness does not refute the claim after a JSON round trip");
        }
        report.witness = Some(value);
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Domain witness for one classical model and state, re-used by the suite.
pub(crate) fn domain_point(model: ClassicalModel, state: Intension, world: Option<World>) -> Witness {
    Witness::Domain(DomainWitness { model, state, world })
}

pub(crate) fn stable_point(model: BoundedModel, state: Intension) -> Witness {
    Witness::Stable(StableWitness { model, state })
}


#[cfg(test)]
mod tests;
