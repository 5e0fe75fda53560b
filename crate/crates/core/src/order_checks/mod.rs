//! Numerical checks of stochastic orders and relative ageing between two
//! system lifetimes on a finite grid.
//!
//! A verdict that holds is evidence on the recorded grid, not a proof.

mod grid;
mod monotone;

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use grid::{GridSpec, Spacing};
pub use monotone::{classify, detect_nonmonotone, sample, CurvePoint, Monotonicity, Turn, TOL_MONO};

use crate::error::{Error, Result};
use crate::systems::SystemModel;
use monotone::{breaks, Direction};

/// Absolute slack on probabilities.
pub const TOL_PROB: f64 = 1e-9;
/// Relative slack on rates.
pub const TOL_RATE: f64 = 1e-9;
/// Fraction of skipped grid points above which a verdict is degraded.
pub const DEGRADED_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    St,
    Hr,
    Rhr,
    Lr,
    AgeingHr,
    AgeingRhr,
}

impl Relation {
    pub const ALL: [Relation; 6] = [
        Relation::St,
        Relation::Hr,
        Relation::Rhr,
        Relation::Lr,
        Relation::AgeingHr,
        Relation::AgeingRhr,
    ];

    pub fn check(self, a: &SystemModel, b: &SystemModel, grid: &GridSpec) -> Result<OrderVerdict> {
        match self {
            Relation::St => check_st(a, b, grid),
            Relation::Hr => check_hr(a, b, grid),
            Relation::Rhr => check_rhr(a, b, grid),
            Relation::Lr => check_lr(a, b, grid),
            Relation::AgeingHr => check_ageing_hr(a, b, grid),
            Relation::AgeingRhr => check_ageing_rhr(a, b, grid),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Relation::St => "st",
            Relation::Hr => "hr",
            Relation::Rhr => "rhr",
            Relation::Lr => "lr",
            Relation::AgeingHr => "ageing_hr",
            Relation::AgeingRhr => "ageing_rhr",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A grid point where the relation fails.
///
/// Pointwise relations: `lhs` and `rhs` are the A and B values at `t`, and
/// `t_prev` is `None`. Ratio relations: `lhs` is the ratio at `t_prev`,
/// `rhs` the ratio at `t`, and the step between them breaks monotonicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_prev: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderVerdict {
    pub relation: Relation,
    /// True iff `witnesses` is empty.
    pub holds: bool,
    /// Ascending in `t`.
    pub witnesses: Vec<Witness>,
    pub grid: GridSpec,
    /// Grid points where a compared quantity was not representable.
    pub skipped: usize,
    /// More than [`DEGRADED_FRACTION`] of the grid was skipped.
    pub degraded: bool,
}

impl OrderVerdict {
    fn new(relation: Relation, grid: GridSpec, witnesses: Vec<Witness>, skipped: usize) -> Self {
        Self {
            relation,
            holds: witnesses.is_empty(),
            witnesses,
            grid,
            skipped,
            degraded: skipped as f64 > DEGRADED_FRACTION * grid.count as f64,
        }
    }

    /// The witness closest to `t`, if any.
    pub fn nearest_witness(&self, t: f64) -> Option<&Witness> {
        self.witnesses
            .iter()
            .min_by(|a, b| (a.t - t).abs().total_cmp(&(b.t - t).abs()))
    }
}

/// A grid point and the compared pair there, `None` when skipped.
type PairAt = (f64, Option<(f64, f64)>);

/// Evaluates `f` at every grid point in parallel; `Ok(None)` marks a skipped
/// point. Results come back in grid order.
fn evaluate_pairs<F>(grid: &GridSpec, f: F) -> Result<Vec<PairAt>>
where
    F: Fn(f64) -> Result<Option<(f64, f64)>> + Sync,
{
    grid.validate()?;
    grid.points().into_par_iter().map(|t| f(t).map(|v| (t, v))).collect()
}

/// `Range` errors mean the quantity underflowed at `t`; the point is skipped.
fn skip_range<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Range { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn pointwise<F>(
    relation: Relation,
    grid: &GridSpec,
    eval: F,
    violates: impl Fn(f64, f64) -> bool,
) -> Result<OrderVerdict>
where
    F: Fn(f64) -> Result<Option<(f64, f64)>> + Sync,
{
    let values = evaluate_pairs(grid, eval)?;
    let mut witnesses = Vec::new();
    let mut skipped = 0;
    for (t, v) in values {
        match v {
            Some((lhs, rhs)) if lhs.is_finite() && rhs.is_finite() => {
                if violates(lhs, rhs) {
                    witnesses.push(Witness {
                        t,
                        lhs,
                        rhs,
                        t_prev: None,
                    });
                }
            }
            Some((lhs, rhs)) if lhs.is_nan() || rhs.is_nan() => {
                return Err(Error::Evaluation {
                    t,
                    value: if lhs.is_nan() { lhs } else { rhs },
                })
            }
            _ => skipped += 1,
        }
    }
    Ok(OrderVerdict::new(relation, *grid, witnesses, skipped))
}

/// Monotonicity of exp(log_a − log_b) in the given direction. Points where
/// either log is infinite are skipped; the test compares each evaluated
/// point with the previous evaluated one.
fn ratio_monotone<F>(relation: Relation, grid: &GridSpec, direction: Direction, logs: F) -> Result<OrderVerdict>
where
    F: Fn(f64) -> Result<Option<(f64, f64)>> + Sync,
{
    let values = evaluate_pairs(grid, logs)?;
    let mut witnesses = Vec::new();
    let mut skipped = 0;
    let mut prev: Option<(f64, f64)> = None;
    for (t, v) in values {
        let ratio = match v {
            Some((la, lb)) if la.is_nan() || lb.is_nan() => return Err(Error::Evaluation { t, value: f64::NAN }),
            Some((la, lb)) if la.is_finite() && lb.is_finite() => (la - lb).exp(),
            _ => {
                skipped += 1;
                continue;
            }
        };
        if !ratio.is_finite() || ratio == 0.0 {
            skipped += 1;
            continue;
        }
        if let Some((tp, rp)) = prev {
            if breaks(direction, rp, ratio) {
                witnesses.push(Witness {
                    t,
                    lhs: rp,
                    rhs: ratio,
                    t_prev: Some(tp),
                });
            }
        }
        prev = Some((t, ratio));
    }
    Ok(OrderVerdict::new(relation, *grid, witnesses, skipped))
}

fn rate_violation(smaller: f64, larger: f64) -> bool {
    smaller > larger + TOL_RATE * smaller.abs().max(larger.abs())
}

/// A ≤st B: S_A(t) ≤ S_B(t) at every grid point.
pub fn check_st(a: &SystemModel, b: &SystemModel, grid: &GridSpec) -> Result<OrderVerdict> {
    pointwise(
        Relation::St,
        grid,
        |t| Ok(Some((a.survival(t)?, b.survival(t)?))),
        |sa, sb| sa > sb + TOL_PROB,
    )
}

/// A ≤hr B: r_A(t) ≥ r_B(t) at every grid point.
pub fn check_hr(a: &SystemModel, b: &SystemModel, grid: &GridSpec) -> Result<OrderVerdict> {
    pointwise(
        Relation::Hr,
        grid,
        |t| {
            let (ra, rb) = (skip_range(a.hazard(t))?, skip_range(b.hazard(t))?);
            Ok(ra.zip(rb))
        },
        |ra, rb| rate_violation(rb, ra),
    )
}

/// A ≤rhr B: r̃_A(t) ≤ r̃_B(t) at every grid point.
pub fn check_rhr(a: &SystemModel, b: &SystemModel, grid: &GridSpec) -> Result<OrderVerdict> {
    pointwise(
        Relation::Rhr,
        grid,
        |t| {
            let (ra, rb) = (skip_range(a.reversed_hazard(t))?, skip_range(b.reversed_hazard(t))?);
            Ok(ra.zip(rb))
        },
        rate_violation,
    )
}

/// A ≤lr B: f_A(t)/f_B(t) is nonincreasing in t.
pub fn check_lr(a: &SystemModel, b: &SystemModel, grid: &GridSpec) -> Result<OrderVerdict> {
    ratio_monotone(Relation::Lr, grid, Direction::Down, |t| {
        Ok(Some((a.log_density(t)?, b.log_density(t)?)))
    })
}

/// A ages faster than B in hazard: r_A(t)/r_B(t) is nondecreasing in t.
pub fn check_ageing_hr(a: &SystemModel, b: &SystemModel, grid: &GridSpec) -> Result<OrderVerdict> {
    ratio_monotone(Relation::AgeingHr, grid, Direction::Up, |t| {
        let (ra, rb) = (skip_range(a.hazard(t))?, skip_range(b.hazard(t))?);
        Ok(ra.zip(rb).map(|(x, y)| (x.ln(), y.ln())))
    })
}

/// A ≲rhr B: r̃_B(t)/r̃_A(t) is nondecreasing in t.
pub fn check_ageing_rhr(a: &SystemModel, b: &SystemModel, grid: &GridSpec) -> Result<OrderVerdict> {
    ratio_monotone(Relation::AgeingRhr, grid, Direction::Up, |t| {
        let (ra, rb) = (skip_range(a.reversed_hazard(t))?, skip_range(b.reversed_hazard(t))?);
        Ok(ra.zip(rb).map(|(x, y)| (y.ln(), x.ln())))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::majorization::{expand_outlier, OutlierSpec, ParamVector};
    use crate::po_model::BaselineSpec;

    fn pv(v: &[f64]) -> ParamVector {
        ParamVector::new(v.to_vec()).unwrap()
    }

    fn series(rate: f64, v: &[f64]) -> SystemModel {
        SystemModel::series(BaselineSpec::exponential(rate).unwrap(), pv(v)).unwrap()
    }

    fn parallel(rate: f64, v: &[f64]) -> SystemModel {
        SystemModel::parallel(BaselineSpec::exponential(rate).unwrap(), pv(v)).unwrap()
    }

    fn outlier(l1: f64, l2: f64, n1: usize, n2: usize) -> Vec<f64> {
        expand_outlier(&OutlierSpec::new(l1, l2, n1, n2).unwrap())
            .unwrap()
            .values()
            .to_vec()
    }

    fn ce_grid() -> GridSpec {
        GridSpec::linear(0.01, 5.0, 1000).unwrap()
    }

    #[test]
    fn every_relation_holds_reflexively() {
        let g = GridSpec::default();
        for m in [series(2.0, &[2.2, 3.0, 5.0]), parallel(1.8, &[2.0, 3.0, 5.0])] {
            for r in Relation::ALL {
                let v = r.check(&m, &m, &g).unwrap();
                assert!(v.holds, "{r} fails reflexively: {:?}", v.witnesses.first());
                assert!(!v.degraded);
            }
        }
    }

    #[test]
    fn st_fails_for_the_series_counterexample_near_0_8() {
        let v = check_st(
            &series(2.0, &[2.2, 3.0, 5.0]),
            &series(2.0, &[2.8, 3.2, 3.3]),
            &ce_grid(),
        )
        .unwrap();
        assert!(!v.holds);
        let w = v.nearest_witness(0.8).unwrap();
        assert!((w.t - 0.8).abs() < 0.01);
        assert!(w.lhs > w.rhs);
    }

    #[test]
    fn st_holds_for_p_larger_series() {
        let v = check_st(
            &series(1.0, &[2.0, 3.0]),
            &series(1.0, &[3.0, 3.0]),
            &GridSpec::default(),
        )
        .unwrap();
        assert!(v.holds);
    }

    #[test]
    fn hr_fails_for_the_hazard_counterexample_near_1_8() {
        let v = check_hr(
            &series(1.2, &[2.0, 3.0, 5.0]),
            &series(1.2, &[2.8, 3.2, 3.4]),
            &ce_grid(),
        )
        .unwrap();
        assert!(!v.holds);
        assert!(v.witnesses.iter().any(|w| (w.t - 1.8).abs() < 0.05));
    }

    #[test]
    fn hr_holds_for_weakly_supermajorized_series() {
        let v = check_hr(
            &series(1.0, &[1.0, 4.0]),
            &series(1.0, &[2.0, 3.0]),
            &GridSpec::default(),
        )
        .unwrap();
        assert!(v.holds);
    }

    #[test]
    fn rhr_holds_for_weakly_supermajorized_parallel() {
        let v = check_rhr(
            &parallel(1.0, &[1.0, 4.0]),
            &parallel(1.0, &[2.0, 3.0]),
            &GridSpec::default(),
        )
        .unwrap();
        assert!(v.holds);
    }

    #[test]
    fn rhr_fails_with_st_for_the_first_parallel_counterexample() {
        let (x, y) = (parallel(1.8, &[2.0, 3.0, 5.0]), parallel(1.8, &[2.6, 3.2, 3.7]));
        let st = check_st(&x, &y, &ce_grid()).unwrap();
        let rhr = check_rhr(&x, &y, &ce_grid()).unwrap();
        assert!(!st.holds);
        assert!(st.witnesses.iter().any(|w| (w.t - 1.5).abs() < 0.01));
        assert!(!rhr.holds);
    }

    #[test]
    fn lr_holds_for_common_outlier_parallel() {
        let x = parallel(1.0, &outlier(1.0, 2.0, 1, 1));
        let y = parallel(1.0, &outlier(3.0, 2.0, 1, 1));
        assert!(check_lr(&x, &y, &GridSpec::default()).unwrap().holds);
    }

    #[test]
    fn lr_fails_for_the_six_component_parallel_counterexample() {
        let x = parallel(2.0, &outlier(2.0, 6.0, 2, 4));
        let y = parallel(2.0, &outlier(3.0, 5.5, 2, 4));
        let g = GridSpec::linear(0.01, 3.0, 1000).unwrap();
        assert!(!check_lr(&x, &y, &g).unwrap().holds);
    }

    #[test]
    fn ageing_hr_examples() {
        let x = series(1.0, &[1.0, 2.0]);
        let y = series(1.0, &[3.0, 4.0]);
        assert!(check_ageing_hr(&y, &x, &GridSpec::default()).unwrap().holds);
        let x = series(1.0, &[2.0, 3.0, 5.0]);
        let y = series(1.0, &[4.0, 4.0, 4.0]);
        assert!(check_ageing_hr(&y, &x, &GridSpec::default()).unwrap().holds);
    }

    #[test]
    fn ageing_rhr_examples() {
        let x = parallel(1.0, &outlier(1.0, 2.0, 1, 1));
        let y = parallel(1.0, &outlier(3.0, 2.0, 1, 1));
        assert!(check_ageing_rhr(&x, &y, &GridSpec::default()).unwrap().holds);
        let x = parallel(2.0, &outlier(0.2, 0.9, 1, 1));
        let y = parallel(2.0, &outlier(0.4, 0.9, 1, 1));
        let g = GridSpec::linear(0.01, 3.0, 1000).unwrap();
        let v = check_ageing_rhr(&x, &y, &g).unwrap();
        assert!(!v.holds);
        let w = v.witnesses[0];
        assert!(w.t_prev.unwrap() < w.t);
        assert!(w.rhs < w.lhs);
    }

    #[test]
    fn underflowed_points_are_skipped_and_flagged() {
        let x = series(1.0, &[0.5; 50]);
        let g = GridSpec::linear(1.0, 40.0, 100).unwrap();
        let v = check_hr(&x, &x, &g).unwrap();
        assert!(v.holds);
        assert!(v.skipped > 5);
        assert!(v.degraded);
    }

    #[test]
    fn invalid_grid_is_a_configuration_error() {
        let x = series(1.0, &[1.0]);
        let g = GridSpec {
            t_min: 2.0,
            t_max: 1.0,
            count: 10,
            spacing: Spacing::Linear,
        };
        assert!(matches!(check_st(&x, &x, &g), Err(Error::Config(_))));
    }

    #[test]
    fn witnesses_are_ascending() {
        let v = check_st(
            &series(2.0, &[2.2, 3.0, 5.0]),
            &series(2.0, &[2.8, 3.2, 3.3]),
            &ce_grid(),
        )
        .unwrap();
        assert!(v.witnesses.windows(2).all(|w| w[0].t < w[1].t));
    }
}
