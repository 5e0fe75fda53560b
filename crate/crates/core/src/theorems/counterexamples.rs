//! Fixed-parameter counterexamples: reference values at fixed time points,
//! the order verdict each one refutes, and the ratio curves that show
//! nonmonotonicity.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::majorization::ParamVector;
use crate::order_checks::{detect_nonmonotone, sample, CurvePoint, GridSpec, Monotonicity, OrderVerdict, Relation};
use crate::po_model::BaselineSpec;
use crate::systems::SystemModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CounterexampleId {
    #[serde(rename = "CE3.1")]
    Ce3_1,
    #[serde(rename = "CE3.2")]
    Ce3_2,
    #[serde(rename = "CE4.1a")]
    Ce4_1a,
    #[serde(rename = "CE4.1b")]
    Ce4_1b,
    #[serde(rename = "CE4.2")]
    Ce4_2,
    #[serde(rename = "CE4.3a")]
    Ce4_3a,
    #[serde(rename = "CE4.3b")]
    Ce4_3b,
    #[serde(rename = "CE4.4")]
    Ce4_4,
}

impl CounterexampleId {
    pub const ALL: [CounterexampleId; 8] = [
        CounterexampleId::Ce3_1,
        CounterexampleId::Ce3_2,
        CounterexampleId::Ce4_1a,
        CounterexampleId::Ce4_1b,
        CounterexampleId::Ce4_2,
        CounterexampleId::Ce4_3a,
        CounterexampleId::Ce4_3b,
        CounterexampleId::Ce4_4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CounterexampleId::Ce3_1 => "CE3.1",
            CounterexampleId::Ce3_2 => "CE3.2",
            CounterexampleId::Ce4_1a => "CE4.1a",
            CounterexampleId::Ce4_1b => "CE4.1b",
            CounterexampleId::Ce4_2 => "CE4.2",
            CounterexampleId::Ce4_3a => "CE4.3a",
            CounterexampleId::Ce4_3b => "CE4.3b",
            CounterexampleId::Ce4_4 => "CE4.4",
        }
    }

    /// Judged by ratio-curve shape rather than quoted values.
    pub fn is_curve_case(self) -> bool {
        matches!(
            self,
            CounterexampleId::Ce4_2 | CounterexampleId::Ce4_3a | CounterexampleId::Ce4_3b | CounterexampleId::Ce4_4
        )
    }
}

impl fmt::Display for CounterexampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CounterexampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CounterexampleId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown counterexample id {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Survival,
    Hazard,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotedValue {
    /// "X" or "Y".
    pub system: String,
    pub quantity: Quantity,
    pub t: f64,
    pub reference: f64,
    pub computed: f64,
    pub abs_error: f64,
    pub tolerance: f64,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioCurve {
    /// For example "rhr_Y/rhr_X".
    pub label: String,
    pub points: Vec<CurvePoint>,
    pub monotonicity: Monotonicity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub id: CounterexampleId,
    pub x: SystemModel,
    pub y: SystemModel,
    pub grid: GridSpec,
    pub values: Vec<QuotedValue>,
    /// The order the counterexample refutes, checked on `grid`.
    pub verdict: OrderVerdict,
    pub curves: Vec<RatioCurve>,
    /// Every quoted value is within its tolerance.
    pub values_match: bool,
    /// The verdict fails and every curve is nonmonotone.
    pub demonstrated: bool,
    pub reproduced: bool,
}

const TOL_VALUE: f64 = 1e-4;
const TOL_HAZARD: f64 = 1e-3;

struct Setup {
    x: SystemModel,
    y: SystemModel,
    grid: GridSpec,
    quoted: Vec<(&'static str, Quantity, f64, f64)>,
    relation: Relation,
    swap: bool,
    curves: Vec<Curve>,
}

#[derive(Clone, Copy)]
enum Curve {
    ReversedHazardRatio,
    DensityRatio,
}

fn pv(v: &[f64]) -> ParamVector {
    ParamVector::new(v.to_vec()).expect("fixed parameters are positive")
}

fn exponential(rate: f64) -> BaselineSpec {
    BaselineSpec::Exponential { rate }
}

fn series(base: BaselineSpec, v: &[f64]) -> SystemModel {
    SystemModel::series(base, pv(v)).expect("fixed baseline is valid")
}

fn parallel(base: BaselineSpec, v: &[f64]) -> SystemModel {
    SystemModel::parallel(base, pv(v)).expect("fixed baseline is valid")
}

fn grid(t_max: f64) -> GridSpec {
    GridSpec::linear(0.01, t_max, 1000).expect("fixed grid is valid")
}

fn setup(id: CounterexampleId) -> Setup {
    use CounterexampleId::*;
    use Quantity::*;
    let fig = |x, y, g, curves| Setup {
        x,
        y,
        grid: g,
        quoted: vec![],
        relation: Relation::AgeingRhr,
        swap: false,
        curves,
    };
    match id {
        Ce3_1 => Setup {
            x: series(exponential(2.0), &[2.2, 3.0, 5.0]),
            y: series(exponential(2.0), &[2.8, 3.2, 3.3]),
            grid: grid(5.0),
            quoted: vec![
                ("X", Survival, 0.2, 0.63929),
                ("Y", Survival, 0.2, 0.641646),
                ("X", Survival, 0.8, 0.0861549),
                ("Y", Survival, 0.8, 0.084394),
            ],
            relation: Relation::St,
            swap: false,
            curves: vec![],
        },
        Ce3_2 => Setup {
            x: series(exponential(1.2), &[2.0, 3.0, 5.0]),
            y: series(exponential(1.2), &[2.8, 3.2, 3.4]),
            grid: grid(5.0),
            quoted: vec![
                ("X", Hazard, 0.2, 1.2297),
                ("Y", Hazard, 0.2, 1.1687),
                ("X", Hazard, 1.8, 2.3935),
                ("Y", Hazard, 1.8, 2.4089),
            ],
            relation: Relation::Hr,
            swap: false,
            curves: vec![],
        },
        Ce4_1a => Setup {
            x: parallel(exponential(1.8), &[2.0, 3.0, 5.0]),
            y: parallel(exponential(1.8), &[2.6, 3.2, 3.7]),
            grid: grid(5.0),
            quoted: vec![("X", Survival, 1.5, 0.471629), ("Y", Survival, 1.5, 0.459619)],
            relation: Relation::St,
            swap: false,
            curves: vec![],
        },
        Ce4_1b => Setup {
            x: parallel(exponential(1.8), &[2.5, 3.0, 5.0]),
            y: parallel(exponential(1.8), &[3.0, 3.8, 4.4]),
            grid: grid(5.0),
            quoted: vec![("X", Survival, 1.2, 0.67176), ("Y", Survival, 1.2, 0.69449)],
            relation: Relation::St,
            swap: true,
            curves: vec![],
        },
        Ce4_2 => fig(
            parallel(exponential(2.0), &[2.0, 2.0, 6.0, 6.0, 6.0, 6.0]),
            parallel(exponential(2.0), &[3.0, 3.0, 5.5, 5.5, 5.5, 5.5]),
            grid(3.0),
            vec![Curve::ReversedHazardRatio, Curve::DensityRatio],
        ),
        Ce4_3a | Ce4_3b => {
            let (lambda, scale) = if id == Ce4_3a { (3.6, 0.8) } else { (3.4, 3.0) };
            let base = BaselineSpec::Weibull { shape: 2.0, scale };
            fig(
                parallel(base, &[2.0, 3.0, 4.0, 5.0]),
                parallel(base, &[lambda; 4]),
                grid(3.0 * scale),
                vec![Curve::ReversedHazardRatio],
            )
        }
        Ce4_4 => fig(
            parallel(exponential(2.0), &[0.2, 0.9]),
            parallel(exponential(2.0), &[0.4, 0.9]),
            grid(3.0),
            vec![Curve::ReversedHazardRatio],
        ),
    }
}

type RatioFn<'a> = Box<dyn Fn(f64) -> Result<f64> + 'a>;

fn ratio_curve(kind: Curve, x: &SystemModel, y: &SystemModel, g: &GridSpec) -> Result<RatioCurve> {
    let (label, f): (&str, RatioFn<'_>) = match kind {
        Curve::ReversedHazardRatio => (
            "rhr_Y/rhr_X",
            Box::new(|t| Ok(y.reversed_hazard(t)? / x.reversed_hazard(t)?)),
        ),
        Curve::DensityRatio => (
            "f_Y/f_X",
            Box::new(|t| Ok((y.log_density(t)? - x.log_density(t)?).exp())),
        ),
    };
    let (ts, vs) = sample(&f, g)?;
    let monotonicity = detect_nonmonotone(&f, g)?;
    Ok(RatioCurve {
        label: label.to_string(),
        points: ts
            .into_iter()
            .zip(vs)
            .map(|(t, value)| CurvePoint { t, value })
            .collect(),
        monotonicity,
    })
}

/// Recomputes the counterexample's quoted values, order verdict and ratio
/// curves from its fixed parameters.
pub fn reproduce_counterexample(id: CounterexampleId) -> Result<CounterexampleReport> {
    let s = setup(id);
    let tolerance = if id == CounterexampleId::Ce3_2 {
        TOL_HAZARD
    } else {
        TOL_VALUE
    };
    let values = s
        .quoted
        .iter()
        .map(|&(who, quantity, t, reference)| {
            let m = if who == "X" { &s.x } else { &s.y };
            let computed = match quantity {
                Quantity::Survival => m.survival(t)?,
                Quantity::Hazard => m.hazard(t)?,
            };
            let abs_error = (computed - reference).abs();
            Ok(QuotedValue {
                system: who.to_string(),
                quantity,
                t,
                reference,
                computed,
                abs_error,
                tolerance,
                matches: abs_error <= tolerance,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (a, b) = if s.swap { (&s.y, &s.x) } else { (&s.x, &s.y) };
    let verdict = s.relation.check(a, b, &s.grid)?;
    let curves = s
        .curves
        .iter()
        .map(|&c| ratio_curve(c, &s.x, &s.y, &s.grid))
        .collect::<Result<Vec<_>>>()?;
    let values_match = values.iter().all(|v| v.matches);
    let demonstrated = !verdict.holds && curves.iter().all(|c| c.monotonicity.is_nonmonotone());
    Ok(CounterexampleReport {
        id,
        x: s.x,
        y: s.y,
        grid: s.grid,
        values,
        verdict,
        curves,
        values_match,
        demonstrated,
        reproduced: values_match && demonstrated,
    })
}
