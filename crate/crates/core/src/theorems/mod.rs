//! Hypothesis predicates and conclusion checks for the comparison theorems
//! on series and parallel PO systems, plus randomized sweeps and
//! counterexample reproduction.

mod counterexamples;
mod sweep;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use counterexamples::{
    reproduce_counterexample, CounterexampleId, CounterexampleReport, Quantity, QuotedValue, RatioCurve,
};
pub use sweep::{generate_case, majorizing_pair, sweep, BranchTally, SweepReport, MAX_ATTEMPTS};

use crate::error::{Error, Result};
use crate::majorization::{expand_outlier, majorizes, p_larger, weak_supermajorizes, OutlierSpec, ParamVector};
use crate::order_checks::{GridSpec, OrderVerdict, Relation};
use crate::po_model::BaselineSpec;
use crate::systems::{SystemModel, Topology};

/// Relative tolerance for "λ equals the geometric mean".
pub const TOL_GEOMETRIC: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "T3.1")]
    T3_1,
    #[serde(rename = "C3.1")]
    C3_1,
    #[serde(rename = "T3.2")]
    T3_2,
    #[serde(rename = "C3.2")]
    C3_2,
    #[serde(rename = "T3.3")]
    T3_3,
    #[serde(rename = "T3.4")]
    T3_4,
    #[serde(rename = "T3.5")]
    T3_5,
    #[serde(rename = "T3.6")]
    T3_6,
    #[serde(rename = "T3.7")]
    T3_7,
    #[serde(rename = "T3.8")]
    T3_8,
    #[serde(rename = "T3.9")]
    T3_9,
    #[serde(rename = "T4.1")]
    T4_1,
    #[serde(rename = "C4.1")]
    C4_1,
    #[serde(rename = "T4.2")]
    T4_2,
    #[serde(rename = "T4.3")]
    T4_3,
    #[serde(rename = "T4.4")]
    T4_4,
}

/// Which operand sits on the left of the conclusion's order check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Operands {
    /// check(X, Y)
    XY,
    /// check(Y, X)
    YX,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Heterogeneous,
    VersusHomogeneous,
    OutlierPair,
    CommonOutlier,
}

impl TheoremId {
    pub const ALL: [TheoremId; 16] = [
        TheoremId::T3_1,
        TheoremId::C3_1,
        TheoremId::T3_2,
        TheoremId::C3_2,
        TheoremId::T3_3,
        TheoremId::T3_4,
        TheoremId::T3_5,
        TheoremId::T3_6,
        TheoremId::T3_7,
        TheoremId::T3_8,
        TheoremId::T3_9,
        TheoremId::T4_1,
        TheoremId::C4_1,
        TheoremId::T4_2,
        TheoremId::T4_3,
        TheoremId::T4_4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::T3_1 => "T3.1",
            TheoremId::C3_1 => "C3.1",
            TheoremId::T3_2 => "T3.2",
            TheoremId::C3_2 => "C3.2",
            TheoremId::T3_3 => "T3.3",
            TheoremId::T3_4 => "T3.4",
            TheoremId::T3_5 => "T3.5",
            TheoremId::T3_6 => "T3.6",
            TheoremId::T3_7 => "T3.7",
            TheoremId::T3_8 => "T3.8",
            TheoremId::T3_9 => "T3.9",
            TheoremId::T4_1 => "T4.1",
            TheoremId::C4_1 => "C4.1",
            TheoremId::T4_2 => "T4.2",
            TheoremId::T4_3 => "T4.3",
            TheoremId::T4_4 => "T4.4",
        }
    }

    pub fn topology(self) -> Topology {
        use TheoremId::*;
        match self {
            T4_1 | C4_1 | T4_2 | T4_3 | T4_4 => Topology::Parallel,
            _ => Topology::Series,
        }
    }

    pub fn shape(self) -> Shape {
        use TheoremId::*;
        match self {
            T3_1 | T3_2 | T4_1 => Shape::Heterogeneous,
            C3_1 | C3_2 | T3_7 | T3_9 | C4_1 | T4_2 => Shape::VersusHomogeneous,
            T3_3 | T3_4 | T3_6 | T3_8 => Shape::OutlierPair,
            T3_5 | T4_3 | T4_4 => Shape::CommonOutlier,
        }
    }

    /// The order check that the conclusion asserts, and its operand order.
    pub fn conclusion(self) -> (Relation, Operands) {
        use TheoremId::*;
        match self {
            T3_1 | C3_1 => (Relation::St, Operands::XY),
            T3_2 | C3_2 => (Relation::Hr, Operands::XY),
            // X ≳hr Y: Y ages faster, r_Y/r_X nondecreasing
            T3_3 | T3_4 | T3_5 | T3_6 | T3_7 => (Relation::AgeingHr, Operands::YX),
            T3_8 | T3_9 | T4_4 => (Relation::Lr, Operands::XY),
            T4_1 | C4_1 => (Relation::Rhr, Operands::XY),
            // X ≥st Y
            T4_2 => (Relation::St, Operands::YX),
            T4_3 => (Relation::AgeingRhr, Operands::XY),
        }
    }

    /// Names of the alternative hypothesis branches, in report order.
    pub fn branches(self) -> &'static [&'static str] {
        use TheoremId::*;
        match self {
            T3_1 => &["p_larger"],
            C3_1 => &["above_geometric_mean"],
            T3_2 | T4_1 | T3_5 => &["weak_supermajorization"],
            C3_2 | T3_7 | T3_9 | C4_1 => &["above_arithmetic_mean"],
            T3_3 => &["majorization_increasing", "majorization_decreasing"],
            T3_4 => &["separated"],
            T3_6 => &["weak_increasing_chain", "weak_decreasing_chain"],
            T3_8 => &[
                "majorization_increasing",
                "majorization_decreasing",
                "weak_increasing_chain",
                "weak_decreasing_chain",
            ],
            T4_2 => &["geometric_mean"],
            T4_3 | T4_4 => &["eta_between"],
        }
    }

    pub fn branch_index(self, name: &str) -> Option<usize> {
        self.branches().iter().position(|b| *b == name)
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown theorem id {s:?}")))
    }
}

/// Parameter inputs of a theorem instance. X is built from the λ side and Y
/// from the μ side (or the homogeneous value).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum CaseInputs {
    Heterogeneous {
        lambda: ParamVector,
        mu: ParamVector,
    },
    VersusHomogeneous {
        lambda: ParamVector,
        homogeneous: f64,
    },
    /// X: n1 × lambda1, n2 × lambda2. Y: n1 × mu1, n2 × mu2.
    OutlierPair {
        lambda1: f64,
        lambda2: f64,
        mu1: f64,
        mu2: f64,
        n1: usize,
        n2: usize,
    },
    /// X: n1 × lambda1, n2 × eta. Y: n1 × mu1, n2 × eta.
    CommonOutlier {
        lambda1: f64,
        mu1: f64,
        eta: f64,
        n1: usize,
        n2: usize,
    },
}

impl CaseInputs {
    pub fn shape(&self) -> Shape {
        match self {
            CaseInputs::Heterogeneous { .. } => Shape::Heterogeneous,
            CaseInputs::VersusHomogeneous { .. } => Shape::VersusHomogeneous,
            CaseInputs::OutlierPair { .. } => Shape::OutlierPair,
            CaseInputs::CommonOutlier { .. } => Shape::CommonOutlier,
        }
    }

    /// The (λ, μ) parameter vectors of X and Y.
    pub fn vectors(&self) -> Result<(ParamVector, ParamVector)> {
        let outlier = |a, b, n1, n2| expand_outlier(&OutlierSpec::new(a, b, n1, n2)?);
        match self {
            CaseInputs::Heterogeneous { lambda, mu } => {
                if lambda.len() != mu.len() {
                    return Err(Error::Dimension {
                        left: lambda.len(),
                        right: mu.len(),
                    });
                }
                Ok((lambda.clone(), mu.clone()))
            }
            CaseInputs::VersusHomogeneous { lambda, homogeneous } => {
                Ok((lambda.clone(), ParamVector::homogeneous(*homogeneous, lambda.len())?))
            }
            CaseInputs::OutlierPair {
                lambda1,
                lambda2,
                mu1,
                mu2,
                n1,
                n2,
            } => Ok((outlier(*lambda1, *lambda2, *n1, *n2)?, outlier(*mu1, *mu2, *n1, *n2)?)),
            CaseInputs::CommonOutlier {
                lambda1,
                mu1,
                eta,
                n1,
                n2,
            } => Ok((outlier(*lambda1, *eta, *n1, *n2)?, outlier(*mu1, *eta, *n1, *n2)?)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremCase {
    pub id: TheoremId,
    pub baseline: BaselineSpec,
    pub inputs: CaseInputs,
    #[serde(default)]
    pub grid: GridSpec,
}

impl TheoremCase {
    pub fn new(id: TheoremId, baseline: BaselineSpec, inputs: CaseInputs, grid: GridSpec) -> Result<Self> {
        let case = Self {
            id,
            baseline,
            inputs,
            grid,
        };
        case.validate()?;
        Ok(case)
    }

    pub fn validate(&self) -> Result<()> {
        if self.inputs.shape() != self.id.shape() {
            return Err(Error::Config(format!(
                "{} expects {:?} inputs, got {:?}",
                self.id,
                self.id.shape(),
                self.inputs.shape()
            )));
        }
        self.baseline.validate()?;
        self.grid.validate()?;
        self.inputs.vectors().map(|_| ())
    }

    /// The systems X and Y.
    pub fn systems(&self) -> Result<(SystemModel, SystemModel)> {
        let (lambda, mu) = self.inputs.vectors()?;
        let topology = self.id.topology();
        Ok((
            SystemModel::new(topology, self.baseline, lambda)?,
            SystemModel::new(topology, self.baseline, mu)?,
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub name: String,
    /// All conditions hold.
    pub holds: bool,
    pub conditions: Vec<Condition>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    /// Some branch holds.
    pub holds: bool,
    pub branches: Vec<Branch>,
}

impl Hypothesis {
    pub fn branch(&self, name: &str) -> Option<&Branch> {
        self.branches.iter().find(|b| b.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub id: TheoremId,
    pub case: TheoremCase,
    pub hypothesis: Hypothesis,
    pub relation: Relation,
    pub operands: Operands,
    /// Present iff the hypothesis holds.
    pub conclusion: Option<OrderVerdict>,
    /// The hypothesis fails or the conclusion holds.
    pub consistent: bool,
}

fn cond(name: &str, holds: bool) -> Condition {
    Condition {
        name: name.to_string(),
        holds,
    }
}

fn branch(name: &str, conditions: Vec<Condition>) -> Branch {
    Branch {
        name: name.to_string(),
        holds: conditions.iter().all(|c| c.holds),
        conditions,
    }
}

/// Evaluates every hypothesis branch of the case's theorem.
pub fn hypothesis(case: &TheoremCase) -> Result<Hypothesis> {
    case.validate()?;
    let (lambda, mu) = case.inputs.vectors()?;
    let names = case.id.branches();
    use TheoremId::*;
    let branches = match (case.id, &case.inputs) {
        (T3_1, _) => vec![branch(
            names[0],
            vec![cond("lambda p-larger than mu", p_larger(&lambda, &mu)?)],
        )],
        (T3_2 | T4_1, _) => vec![branch(
            names[0],
            vec![cond(
                "lambda weakly supermajorizes mu",
                weak_supermajorizes(&lambda, &mu)?,
            )],
        )],
        (C3_1, CaseInputs::VersusHomogeneous { homogeneous, .. }) => vec![branch(
            names[0],
            vec![cond(
                "lambda >= geometric mean",
                *homogeneous >= lambda.geometric_mean(),
            )],
        )],
        (C3_2 | T3_7 | T3_9 | C4_1, CaseInputs::VersusHomogeneous { homogeneous, .. }) => vec![branch(
            names[0],
            vec![cond(
                "lambda >= arithmetic mean",
                *homogeneous >= lambda.arithmetic_mean(),
            )],
        )],
        (T4_2, CaseInputs::VersusHomogeneous { homogeneous, .. }) => {
            let gm = lambda.geometric_mean();
            vec![branch(
                names[0],
                vec![cond(
                    "lambda = geometric mean",
                    (homogeneous - gm).abs() <= TOL_GEOMETRIC * gm,
                )],
            )]
        }
        (
            T3_3 | T3_4 | T3_6 | T3_8,
            &CaseInputs::OutlierPair {
                lambda1: l1,
                lambda2: l2,
                mu1: m1,
                mu2: m2,
                n1,
                n2,
            },
        ) => {
            let maj =
                || -> Result<Condition> { Ok(cond("expanded lambda majorizes expanded mu", majorizes(&lambda, &mu)?)) };
            let wsup = || -> Result<Condition> {
                Ok(cond(
                    "expanded lambda weakly supermajorizes expanded mu",
                    weak_supermajorizes(&lambda, &mu)?,
                ))
            };
            let increasing = || {
                vec![
                    cond("(lambda1, lambda2) in E+", l1 <= l2),
                    cond("(mu1, mu2) in E+", m1 <= m2),
                    cond("n1 >= n2", n1 >= n2),
                ]
            };
            let decreasing = || {
                vec![
                    cond("(lambda1, lambda2) in D+", l1 >= l2),
                    cond("(mu1, mu2) in D+", m1 >= m2),
                    cond("n1 <= n2", n1 <= n2),
                ]
            };
            let up_chain = || {
                vec![
                    cond("lambda1 <= mu1 <= mu2 <= lambda2", l1 <= m1 && m1 <= m2 && m2 <= l2),
                    cond("n1 >= n2", n1 >= n2),
                ]
            };
            let down_chain = || {
                vec![
                    cond("lambda1 >= mu1 >= mu2 >= lambda2", l1 >= m1 && m1 >= m2 && m2 >= l2),
                    cond("n1 <= n2", n1 <= n2),
                ]
            };
            let with = |first: Condition, rest: Vec<Condition>| {
                let mut v = vec![first];
                v.extend(rest);
                v
            };
            match case.id {
                T3_3 => vec![
                    branch(names[0], with(maj()?, increasing())),
                    branch(names[1], with(maj()?, decreasing())),
                ],
                T3_4 => vec![branch(
                    names[0],
                    vec![cond("max(lambda1, lambda2) <= min(mu1, mu2)", l1.max(l2) <= m1.min(m2))],
                )],
                T3_6 => vec![
                    branch(names[0], with(wsup()?, up_chain())),
                    branch(names[1], with(wsup()?, down_chain())),
                ],
                _ => vec![
                    branch(names[0], with(maj()?, increasing())),
                    branch(names[1], with(maj()?, decreasing())),
                    branch(names[2], with(wsup()?, up_chain())),
                    branch(names[3], with(wsup()?, down_chain())),
                ],
            }
        }
        (T3_5, _) => vec![branch(
            names[0],
            vec![cond(
                "(lambda1^n1, eta^n2) weakly supermajorizes (mu1^n1, eta^n2)",
                weak_supermajorizes(&lambda, &mu)?,
            )],
        )],
        (T4_3 | T4_4, &CaseInputs::CommonOutlier { lambda1, mu1, eta, .. }) => vec![branch(
            names[0],
            vec![cond("lambda1 <= eta <= mu1", lambda1 <= eta && eta <= mu1)],
        )],
        _ => unreachable!("shape validated above"),
    };
    Ok(Hypothesis {
        holds: branches.iter().any(|b| b.holds),
        branches,
    })
}

/// Runs the hypothesis and, when it holds, the conclusion's order check.
pub fn verify(case: &TheoremCase) -> Result<TheoremReport> {
    let hyp = hypothesis(case)?;
    let (relation, operands) = case.id.conclusion();
    let conclusion = if hyp.holds {
        let (x, y) = case.systems()?;
        let (a, b) = match operands {
            Operands::XY => (&x, &y),
            Operands::YX => (&y, &x),
        };
        Some(relation.check(a, b, &case.grid)?)
    } else {
        None
    };
    let consistent = conclusion.as_ref().is_none_or(|v| v.holds);
    Ok(TheoremReport {
        id: case.id,
        case: case.clone(),
        hypothesis: hyp,
        relation,
        operands,
        conclusion,
        consistent,
    })
}
