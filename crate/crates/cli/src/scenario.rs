//! Scenario files: a baseline, named systems, a grid, and a task list.

use std::collections::HashSet;

use anyhow::{bail, Context, Result};
use poreli::order_checks::Relation;
use poreli::theorems::{CaseInputs, CounterexampleId, TheoremCase, TheoremId};
use poreli::{BaselineSpec, GridSpec, ParamVector, SystemModel, Topology};
use serde::{Deserialize, Serialize};

use crate::spec::check_name;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDef {
    pub name: String,
    pub topology: Topology,
    pub params: ParamVector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "snake_case", deny_unknown_fields)]
pub enum Task {
    /// Every system when `systems` is empty.
    EvalCurves {
        #[serde(default)]
        systems: Vec<String>,
    },
    CheckOrder {
        relation: Relation,
        a: String,
        b: String,
    },
    /// Runs on the scenario baseline and grid.
    VerifyTheorem {
        theorem: TheoremId,
        inputs: CaseInputs,
    },
    Reproduce {
        case: CounterexampleId,
    },
    Sweep {
        theorem: TheoremId,
        trials: usize,
        seed: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        branch: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub baseline: BaselineSpec,
    #[serde(default)]
    pub systems: Vec<SystemDef>,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub tasks: Vec<Task>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Scenario = serde_json::from_str(text).context("malformed scenario")?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Names are unique and well-formed, every reference resolves, and
    /// every task is well-typed.
    pub fn validate(&self) -> Result<()> {
        self.baseline.validate()?;
        self.grid.validate()?;
        let mut seen = HashSet::new();
        for s in &self.systems {
            check_name(&s.name)?;
            if !seen.insert(s.name.as_str()) {
                bail!("system {:?} is defined twice", s.name);
            }
        }
        for (i, task) in self.tasks.iter().enumerate() {
            self.validate_task(task).with_context(|| format!("task {i}"))?;
        }
        Ok(())
    }

    fn validate_task(&self, task: &Task) -> Result<()> {
        match task {
            Task::EvalCurves { systems } => {
                for name in systems {
                    self.system(name)?;
                }
            }
            Task::CheckOrder { a, b, .. } => {
                self.system(a)?;
                self.system(b)?;
            }
            Task::VerifyTheorem { theorem, inputs } => {
                self.theorem_case(*theorem, inputs)?;
            }
            Task::Reproduce { .. } => {}
            Task::Sweep {
                theorem,
                trials,
                branch,
                ..
            } => {
                if *trials == 0 {
                    bail!("sweep needs at least one trial");
                }
                if let Some(b) = branch {
                    if theorem.branch_index(b).is_none() {
                        bail!(
                            "{theorem} has no branch {b:?} (expected one of {:?})",
                            theorem.branches()
                        );
                    }
                }
            }
        }
        Ok(())
    }

    pub fn system(&self, name: &str) -> Result<SystemModel> {
        let def = self
            .systems
            .iter()
            .find(|s| s.name == name)
            .with_context(|| format!("undefined system {name:?}"))?;
        Ok(SystemModel::new(def.topology, self.baseline, def.params.clone())?)
    }

    pub fn theorem_case(&self, theorem: TheoremId, inputs: &CaseInputs) -> Result<TheoremCase> {
        Ok(TheoremCase::new(theorem, self.baseline, inputs.clone(), self.grid)?)
    }
}
