use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use modal_wb::checker::{
    check_claims_file, find_countermodel, first_countermodel, render_human, render_json, run_suite, Claim,
    ClaimKind, Expected, FactReport, RenderOptions, Semantics, Witness,
};
use modal_wb::domain::{accepts, truth_at};
use modal_wb::models::{load_model, AnyModel};
use modal_wb::normal_form::{normal_form, verify_normal_form, NormalForm};
use modal_wb::stable::verdict;
use modal_wb::sweep::Bound;
use modal_wb::syntax::Style;
use modal_wb::{parse, Error, Formula, Intension};

#[derive(Parser)]
#[command(name = "modal-wb", version, about = "Model checker for epistemic modal logic")]
struct Cli {
    /// Worker threads for model sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    /// Print formulas with ¬ ◇ ∧ ∨ instead of ASCII.
    #[arg(long, global = true)]
    unicode: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SemanticsArg {
    Stable,
    DomainClassic,
    DomainModified,
}

impl From<SemanticsArg> for Semantics {
    fn from(s: SemanticsArg) -> Semantics {
        match s {
            SemanticsArg::Stable => Semantics::Stable,
            SemanticsArg::DomainClassic => Semantics::DomainClassic,
            SemanticsArg::DomainModified => Semantics::DomainModified,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Truth,
    Acceptance,
    Coherent,
    Assertoric,
}

#[derive(Args)]
struct BoundArgs {
    /// Largest model size to enumerate.
    #[arg(long, default_value_t = 3)]
    max_worlds: usize,
}

#[derive(Args)]
struct EntailArgs {
    /// Consequence relation; defaults to coherent (stable) or acceptance (domain).
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    #[arg(short, long)]
    premise: String,
    #[arg(short, long)]
    conclusion: String,
    #[arg(long, value_enum, default_value_t = SemanticsArg::Stable)]
    semantics: SemanticsArg,
    #[command(flatten)]
    bound: BoundArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a formula at a state of a model file.
    Eval {
        #[arg(short, long)]
        model: PathBuf,
        /// Comma-separated world indices, e.g. `0,1`; empty for the empty state.
        #[arg(short, long, default_value = "")]
        state: String,
        #[arg(short, long)]
        formula: String,
        /// Evaluation world for domain-semantics truth.
        #[arg(short, long)]
        world: Option<usize>,
        #[arg(long, value_enum, default_value_t = SemanticsArg::Stable)]
        semantics: SemanticsArg,
    },
    /// Decide a consequence claim up to a bound.
    Entail(EntailArgs),
    /// Print the support and rejection normal forms.
    Nf {
        #[arg(short, long)]
        formula: String,
        /// Check the normal forms against the formula on all models up to the bound.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        bound: BoundArgs,
    },
    /// Search for a counter-model and minimize it.
    Countermodel(EntailArgs),
    /// Run the regression suite.
    Facts {
        #[command(flatten)]
        bound: BoundArgs,
        /// Largest formula size for the schematic sweeps.
        #[arg(long, default_value_t = 6)]
        max_size: usize,
        /// Include elapsed times in the report.
        #[arg(long)]
        timings: bool,
    },
    /// Validate a model file.
    Validate {
        #[arg(short, long)]
        model: PathBuf,
    },
    /// Evaluate a JSON file of claims.
    Check {
        file: PathBuf,
        #[command(flatten)]
        bound: BoundArgs,
        #[arg(long)]
        timings: bool,
    },
}

struct Ctx {
    format: Format,
    style: Style,
}

impl Ctx {
    fn formula(&self, f: &Formula) -> String {
        f.display(self.style).to_string()
    }

    fn nf(&self, nf: &NormalForm) -> serde_json::Value {
        json!({
            "head": self.formula(&nf.head),
            "diamonds": nf.diamonds.iter().map(|d| self.formula(d)).collect::<Vec<_>>(),
        })
    }
}

fn parse_state(text: &str, worlds: usize) -> Result<Intension, String> {
    let mut state = Intension::empty();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let w: usize = part.parse().map_err(|_| format!("bad world index `{part}` in state"))?;
        if w >= worlds {
            return Err(format!("state mentions world {w}, but the model has only {worlds} worlds"));
        }
        state.insert(w);
    }
    Ok(state)
}

fn formula(text: &str) -> Result<Formula, String> {
    parse(text).map_err(|e| format!("in `{text}`: {e}"))
}

fn entail_claim(a: &EntailArgs) -> Result<Claim, String> {
    let semantics: Semantics = a.semantics.into();
    let kind = match (a.kind, semantics) {
        (Some(KindArg::Truth), _) => ClaimKind::TruthEntails,
        (Some(KindArg::Acceptance), _) => ClaimKind::AcceptanceEntails,
        (Some(KindArg::Coherent), _) => ClaimKind::CoherentEntails,
        (Some(KindArg::Assertoric), _) => ClaimKind::AssertoricEquiv,
        (None, Semantics::Stable) => ClaimKind::CoherentEntails,
        (None, _) => ClaimKind::AcceptanceEntails,
    };
    Claim::new("cli", kind, formula(&a.premise)?, Some(formula(&a.conclusion)?), semantics, Expected::Holds)
        .map_err(|e| e.to_string())
}

fn print_outcome(ctx: &Ctx, bound: Bound, witness: Option<Witness>) {
    match (ctx.format, witness) {
        (Format::Human, None) => println!("holds (valid up to {bound})"),
        (Format::Human, Some(w)) => {
            println!("fails");
            println!("witness: {}", w.to_json());
        }
        (Format::Json, None) => println!("{}", json!({ "verdict": "holds", "bound": bound.to_string() })),
        (Format::Json, Some(w)) => println!("{}", json!({ "verdict": "fails", "witness": w.to_json() })),
    }
}

/// Exit code 1 when any report does not match its expectation.
fn print_reports(ctx: &Ctx, reports: &[FactReport], timings: bool) -> ExitCode {
    let opts = RenderOptions { style: ctx.style, timings };
    match ctx.format {
        Format::Human => print!("{}", render_human(reports, opts)),
        Format::Json => println!("{}", render_json(reports, opts)),
    }
    if reports.iter().all(FactReport::matches) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let ctx = Ctx { format: cli.format, style: if cli.unicode { Style::Unicode } else { Style::Ascii } };
    let lib = |e: Error| e.to_string();
    match cli.command {
        Command::Eval { model, state, formula: text, world, semantics } => {
            let f = formula(&text)?;
            let m = load_model(&model).map_err(lib)?;
            let i = parse_state(&state, m.worlds())?;
            match (Semantics::from(semantics).variant(), m) {
                (None, AnyModel::Bounded(m)) => {
                    if world.is_some() {
                        return Err("--world applies to domain semantics only".into());
                    }
                    let v = verdict(&m, i, &f).map_err(lib)?;
                    match ctx.format {
                        Format::Human => println!("supports: {}\nrejects: {}", v.supports, v.rejects),
                        Format::Json => println!("{}", json!({ "supports": v.supports, "rejects": v.rejects })),
                    }
                }
                (Some(v), AnyModel::Classical(m)) => match world {
                    Some(w) => {
                        let t = truth_at(&m, w, i, &f, v).map_err(lib)?;
                        match ctx.format {
                            Format::Human => println!("truth: {}", t as u8),
                            Format::Json => println!("{}", json!({ "truth": t })),
                        }
                    }
                    None => {
                        let a = accepts(&m, i, &f, v).map_err(lib)?;
                        match ctx.format {
                            Format::Human => println!("accepts: {a}"),
                            Format::Json => println!("{}", json!({ "accepts": a })),
                        }
                    }
                },
                (None, AnyModel::Classical(_)) => return Err("stable semantics needs a bounded model file".into()),
                (Some(_), AnyModel::Bounded(_)) => return Err("domain semantics needs a classical model file".into()),
            }
        }
        Command::Entail(a) => {
            let claim = entail_claim(&a)?;
            let bound = Bound::worlds(a.bound.max_worlds);
            let w = first_countermodel(&claim, bound).map_err(lib)?;
            print_outcome(&ctx, bound, w);
        }
        Command::Countermodel(a) => {
            let claim = entail_claim(&a)?;
            let bound = Bound::worlds(a.bound.max_worlds);
            let w = find_countermodel(&claim, bound).map_err(lib)?;
            print_outcome(&ctx, bound, w);
        }
        Command::Nf { formula: text, verify, bound } => {
            let f = formula(&text)?;
            let nf = normal_form(&f);
            let checked = if verify {
                let b = Bound::worlds(bound.max_worlds);
                Some((b, verify_normal_form(&f, b).map_err(lib)?))
            } else {
                None
            };
            match ctx.format {
                Format::Human => {
                    println!("support: {}", nf.support.display(ctx.style));
                    println!("reject: {}", nf.reject.display(ctx.style));
                    if let Some((b, outcome)) = &checked {
                        match outcome.counterexample() {
                            None => println!("verified: holds (valid up to {b})"),
                            Some(w) => println!("verified: fails\nwitness: {}", Witness::Stable(w.clone()).to_json()),
                        }
                    }
                }
                Format::Json => {
                    let mut v = json!({ "support": ctx.nf(&nf.support), "reject": ctx.nf(&nf.reject) });
                    if let Some((b, outcome)) = &checked {
                        v["verified"] = match outcome.counterexample() {
                            None => json!({ "verdict": "holds", "bound": b.to_string() }),
                            Some(w) => json!({ "verdict": "fails", "witness": Witness::Stable(w.clone()).to_json() }),
                        };
                    }
                    println!("{v}");
                }
            }
        }
        Command::Facts { bound, max_size, timings } => {
            let b = Bound::worlds(bound.max_worlds).with_formula_size(max_size);
            let reports = run_suite(b).map_err(lib)?;
            return Ok(print_reports(&ctx, &reports, timings));
        }
        Command::Validate { model } => {
            let m = load_model(&model).map_err(lib)?;
            let (kind, agents) = match &m {
                AnyModel::Bounded(b) => ("bounded", b.agents().map(|a| a.index()).collect::<Vec<_>>()),
                AnyModel::Classical(_) => ("classical", vec![1]),
            };
            match ctx.format {
                Format::Human => println!("valid {kind} model: {} worlds, agents {agents:?}", m.worlds()),
                Format::Json => println!("{}", json!({ "valid": true, "kind": kind, "worlds": m.worlds(), "agents": agents })),
            }
        }
        Command::Check { file, bound, timings } => {
            let reports = check_claims_file(&file, Bound::worlds(bound.max_worlds)).map_err(lib)?;
            return Ok(print_reports(&ctx, &reports, timings));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if n == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
