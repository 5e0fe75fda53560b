//! Proportional-odds lifetime models for series and parallel systems.
//!
//! - [`po_model`]: baselines and the single-component PO transform.
//! - [`systems`]: series and parallel systems of PO components.
//! - [`majorization`]: vector preorders and multiple-outlier vectors.
//! - [`order_checks`]: grid-based stochastic-order and ageing checks.
//! - [`theorems`]: hypothesis predicates, verification, randomized sweeps and
//!   counterexample reproduction.

pub mod error;
pub mod majorization;
pub mod order_checks;
pub mod po_model;
pub mod systems;
pub mod theorems;

pub use error::{Error, Result};
pub use majorization::{expand_outlier, OutlierSpec, ParamVector, Preorder};
pub use order_checks::{GridSpec, Monotonicity, OrderVerdict, Relation, Spacing, Witness};
pub use po_model::{BaselineSpec, POParameter};
pub use systems::{SystemModel, SystemPoint, Topology};
