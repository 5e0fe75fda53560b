//! `poreli`: evaluate proportional-odds systems, check stochastic orders,
//! verify comparison theorems and reproduce counterexamples.
//!
//! Exit status: 0 on success, 1 when a check fails, a theorem instance is
//! inconsistent or a reproduction does not match, 2 on usage or
//! configuration errors.

mod commands;
mod output;
mod scenario;
mod spec;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use poreli::order_checks::Relation;
use poreli::theorems::{CaseInputs, CounterexampleId, Shape, TheoremCase, TheoremId};
use poreli::{BaselineSpec, GridSpec, ParamVector, Preorder, SystemModel};

use commands::{Named, Outcome};
use output::Sink;
use scenario::{Scenario, Task};

#[derive(Parser)]
#[command(name = "poreli", version, about = "Proportional-odds series and parallel systems")]
struct Cli {
    /// Directory for report files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct ModelArgs {
    /// exponential:RATE or weibull:SHAPE,SCALE
    #[arg(long)]
    baseline: Option<String>,
    /// log:T_MIN,T_MAX,COUNT or linear:T_MIN,T_MAX,COUNT
    #[arg(long)]
    grid: Option<String>,
    /// Scenario file supplying the baseline, grid and named systems.
    #[arg(long)]
    scenario: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Lifetime curves of each system over the grid, one CSV per system.
    Eval {
        #[command(flatten)]
        model: ModelArgs,
        /// [NAME=]series:P1,P2,... or [NAME=]parallel:..., or a scenario name.
        #[arg(required = true)]
        systems: Vec<String>,
    },
    /// Checks one order between systems A and B.
    Check {
        #[arg(long, value_enum)]
        relation: RelationArg,
        #[command(flatten)]
        model: ModelArgs,
        a: String,
        b: String,
    },
    /// Verifies one theorem instance.
    Verify {
        #[arg(long)]
        theorem: Option<TheoremId>,
        /// JSON theorem case; replaces the parameter flags.
        #[arg(long)]
        case: Option<PathBuf>,
        #[command(flatten)]
        model: ModelArgs,
        /// λ vector, or λ1,λ2 for outlier pairs, or λ1 with a common η.
        #[arg(long)]
        lambda: Option<String>,
        /// μ vector, or μ1,μ2 for outlier pairs, or μ1 with a common η.
        #[arg(long)]
        mu: Option<String>,
        #[arg(long)]
        homogeneous: Option<f64>,
        #[arg(long)]
        eta: Option<f64>,
        /// n1,n2
        #[arg(long)]
        counts: Option<String>,
    },
    /// Reproduces a fixed-parameter counterexample.
    Reproduce {
        #[arg(long)]
        case: CounterexampleId,
    },
    /// Seeded random instances of a theorem's hypothesis, each verified.
    Sweep {
        #[arg(long)]
        theorem: TheoremId,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Restrict to one hypothesis branch.
        #[arg(long)]
        branch: Option<String>,
    },
    /// Evaluates a preorder: majorize --relation R x... -- y...
    Majorize {
        #[arg(long, value_enum)]
        relation: PreorderArg,
        #[arg(required = true, allow_negative_numbers = true)]
        x: Vec<f64>,
        #[arg(last = true, required = true, allow_negative_numbers = true)]
        y: Vec<f64>,
    },
    /// Runs every task of a scenario file.
    Run { scenario: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum RelationArg {
    St,
    Hr,
    Rhr,
    Lr,
    AgeHr,
    AgeRhr,
}

impl From<RelationArg> for Relation {
    fn from(r: RelationArg) -> Self {
        match r {
            RelationArg::St => Relation::St,
            RelationArg::Hr => Relation::Hr,
            RelationArg::Rhr => Relation::Rhr,
            RelationArg::Lr => Relation::Lr,
            RelationArg::AgeHr => Relation::AgeingHr,
            RelationArg::AgeRhr => Relation::AgeingRhr,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PreorderArg {
    M,
    Wsup,
    Wsub,
    P,
    Rm,
}

impl From<PreorderArg> for Preorder {
    fn from(p: PreorderArg) -> Self {
        match p {
            PreorderArg::M => Preorder::Majorization,
            PreorderArg::Wsup => Preorder::WeakSuper,
            PreorderArg::Wsub => Preorder::WeakSub,
            PreorderArg::P => Preorder::PLarger,
            PreorderArg::Rm => Preorder::Reciprocal,
        }
    }
}

fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Scenario::from_json(&text).with_context(|| format!("in {}", path.display()))
}

/// Baseline, grid and named systems from the flags, falling back to the
/// scenario file; flags win.
struct Model {
    baseline: Option<BaselineSpec>,
    grid: GridSpec,
    scenario: Option<Scenario>,
}

impl Model {
    fn from_args(args: &ModelArgs) -> Result<Self> {
        let scenario = args.scenario.as_deref().map(load_scenario).transpose()?;
        let baseline = match &args.baseline {
            Some(b) => Some(spec::baseline(b)?),
            None => scenario.as_ref().map(|s| s.baseline),
        };
        let grid = match &args.grid {
            Some(g) => spec::grid(g)?,
            None => scenario.as_ref().map(|s| s.grid).unwrap_or_default(),
        };
        Ok(Self {
            baseline,
            grid,
            scenario,
        })
    }

    fn baseline(&self) -> Result<BaselineSpec> {
        self.baseline.context("no baseline: pass --baseline or --scenario")
    }

    /// Resolves `arg` to a named system; inline systems without a name get
    /// `default_name`.
    fn system(&self, arg: &str, default_name: String) -> Result<(String, SystemModel)> {
        if spec::is_inline_system(arg) {
            let s = spec::system(arg)?;
            let m = SystemModel::new(s.topology, self.baseline()?, s.params)?;
            return Ok((s.name.unwrap_or(default_name), m));
        }
        let Some(scenario) = &self.scenario else {
            bail!("{arg:?} is not an inline system and no --scenario names it");
        };
        let mut m = scenario.system(arg)?;
        if let Some(b) = self.baseline {
            m.base = b;
        }
        Ok((arg.to_string(), m))
    }
}

fn report(outcome: &Outcome) {
    for line in &outcome.summary {
        println!("{line}");
    }
}

fn status(passed: bool) -> ExitCode {
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn vector(flag: &str, value: &Option<String>) -> Result<Vec<f64>> {
    let v = value
        .as_deref()
        .with_context(|| format!("--{flag} is required for this theorem"))?;
    spec::numbers(v)
}

fn scalar(flag: &str, values: Vec<f64>) -> Result<f64> {
    match values.as_slice() {
        [v] => Ok(*v),
        _ => bail!("--{flag} takes a single value here"),
    }
}

fn pair(flag: &str, values: Vec<f64>) -> Result<(f64, f64)> {
    match values.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => bail!("--{flag} takes two values here"),
    }
}

#[allow(clippy::too_many_arguments)]
fn case_from_flags(
    theorem: TheoremId,
    model: &Model,
    lambda: &Option<String>,
    mu: &Option<String>,
    homogeneous: Option<f64>,
    eta: Option<f64>,
    counts: &Option<String>,
) -> Result<TheoremCase> {
    let counts = || -> Result<(usize, usize)> {
        spec::counts(counts.as_deref().context("--counts is required for this theorem")?)
    };
    let inputs = match theorem.shape() {
        Shape::Heterogeneous => CaseInputs::Heterogeneous {
            lambda: ParamVector::new(vector("lambda", lambda)?)?,
            mu: ParamVector::new(vector("mu", mu)?)?,
        },
        Shape::VersusHomogeneous => CaseInputs::VersusHomogeneous {
            lambda: ParamVector::new(vector("lambda", lambda)?)?,
            homogeneous: homogeneous.context("--homogeneous is required for this theorem")?,
        },
        Shape::OutlierPair => {
            let (lambda1, lambda2) = pair("lambda", vector("lambda", lambda)?)?;
            let (mu1, mu2) = pair("mu", vector("mu", mu)?)?;
            let (n1, n2) = counts()?;
            CaseInputs::OutlierPair {
                lambda1,
                lambda2,
                mu1,
                mu2,
                n1,
                n2,
            }
        }
        Shape::CommonOutlier => {
            let (n1, n2) = counts()?;
            CaseInputs::CommonOutlier {
                lambda1: scalar("lambda", vector("lambda", lambda)?)?,
                mu1: scalar("mu", vector("mu", mu)?)?,
                eta: eta.context("--eta is required for this theorem")?,
                n1,
                n2,
            }
        }
    };
    Ok(TheoremCase::new(theorem, model.baseline()?, inputs, model.grid)?)
}

fn run_scenario(path: &Path, sink: &Sink) -> Result<bool> {
    let scenario = load_scenario(path)?;
    // the parsed scenario, re-serialized, records exactly what ran
    sink.write("scenario.json", &scenario.to_json()?)?;
    let mut passed = true;
    for (i, task) in scenario.tasks.iter().enumerate() {
        let sink = sink.with_prefix(format!("task{i:02}_"));
        let outcome = match task {
            Task::EvalCurves { systems } => {
                let names: Vec<&str> = if systems.is_empty() {
                    scenario.systems.iter().map(|s| s.name.as_str()).collect()
                } else {
                    systems.iter().map(String::as_str).collect()
                };
                let models = names.iter().map(|n| scenario.system(n)).collect::<Result<Vec<_>>>()?;
                let named: Vec<Named<'_>> = names
                    .iter()
                    .zip(&models)
                    .map(|(name, system)| Named { name, system })
                    .collect();
                commands::eval_curves(&named, &scenario.grid, &sink)?
            }
            Task::CheckOrder { relation, a, b } => {
                let (ma, mb) = (scenario.system(a)?, scenario.system(b)?);
                commands::check_order(
                    *relation,
                    Named { name: a, system: &ma },
                    Named { name: b, system: &mb },
                    &scenario.grid,
                    &sink,
                )?
            }
            Task::VerifyTheorem { theorem, inputs } => {
                commands::verify_theorem(&scenario.theorem_case(*theorem, inputs)?, &sink)?
            }
            Task::Reproduce { case } => commands::reproduce(*case, &sink)?,
            Task::Sweep {
                theorem,
                trials,
                seed,
                branch,
            } => commands::run_sweep(*theorem, branch.as_deref(), *trials, *seed, &sink)?,
        };
        for line in &outcome.summary {
            println!("task {i}: {line}");
        }
        passed &= outcome.passed;
    }
    Ok(passed)
}

fn execute(cli: Cli) -> Result<ExitCode> {
    if let Command::Majorize { relation, x, y } = &cli.command {
        let holds = Preorder::from(*relation).holds(&ParamVector::new(x.clone())?, &ParamVector::new(y.clone())?)?;
        println!("{holds}");
        return Ok(status(holds));
    }
    let sink = Sink::new(&cli.out)?;
    let outcome = match &cli.command {
        Command::Eval { model, systems } => {
            let model = Model::from_args(model)?;
            let resolved = systems
                .iter()
                .enumerate()
                .map(|(i, s)| model.system(s, format!("system{}", i + 1)))
                .collect::<Result<Vec<_>>>()?;
            let mut names = std::collections::HashSet::new();
            for (n, _) in &resolved {
                if !names.insert(n.as_str()) {
                    bail!("system {n:?} given twice");
                }
            }
            let named: Vec<Named<'_>> = resolved.iter().map(|(name, system)| Named { name, system }).collect();
            commands::eval_curves(&named, &model.grid, &sink)?
        }
        Command::Check { relation, model, a, b } => {
            let model = Model::from_args(model)?;
            let (na, ma) = model.system(a, "A".into())?;
            let (nb, mb) = model.system(b, "B".into())?;
            commands::check_order(
                (*relation).into(),
                Named { name: &na, system: &ma },
                Named { name: &nb, system: &mb },
                &model.grid,
                &sink,
            )?
        }
        Command::Verify {
            theorem,
            case,
            model,
            lambda,
            mu,
            homogeneous,
            eta,
            counts,
        } => {
            let case = match case {
                Some(path) => {
                    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
                    let c: TheoremCase = serde_json::from_str(&text).context("malformed theorem case")?;
                    c.validate()?;
                    if theorem.is_some_and(|t| t != c.id) {
                        bail!("--theorem disagrees with the case file ({})", c.id);
                    }
                    c
                }
                None => {
                    let theorem = theorem.context("--theorem or --case is required")?;
                    case_from_flags(
                        theorem,
                        &Model::from_args(model)?,
                        lambda,
                        mu,
                        *homogeneous,
                        *eta,
                        counts,
                    )?
                }
            };
            commands::verify_theorem(&case, &sink)?
        }
        Command::Reproduce { case } => commands::reproduce(*case, &sink)?,
        Command::Sweep {
            theorem,
            trials,
            seed,
            branch,
        } => commands::run_sweep(*theorem, branch.as_deref(), *trials, *seed, &sink)?,
        Command::Run { scenario } => return Ok(status(run_scenario(scenario, &sink)?)),
        Command::Majorize { .. } => unreachable!("handled above"),
    };
    report(&outcome);
    Ok(status(outcome.passed))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
