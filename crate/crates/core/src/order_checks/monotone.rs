//! Monotonicity classification of sampled curves.

use serde::{Deserialize, Serialize};

use super::grid::GridSpec;
use crate::error::{Error, Result};

/// Relative slack between adjacent grid values.
pub const TOL_MONO: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub t: f64,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Turn {
    /// f(a) < f(b) > f(c)
    Peak,
    /// f(a) > f(b) < f(c)
    Valley,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Monotonicity {
    /// Non-strictly increasing; a constant curve lands here.
    MonotoneUp,
    MonotoneDown,
    Nonmonotone {
        turn: Turn,
        witness: [CurvePoint; 3],
    },
}

impl Monotonicity {
    pub fn is_nonmonotone(&self) -> bool {
        matches!(self, Monotonicity::Nonmonotone { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Direction {
    Up,
    Down,
}

/// True when `next` breaks the direction relative to `prev` by more than the
/// slack.
pub(crate) fn breaks(direction: Direction, prev: f64, next: f64) -> bool {
    let slack = TOL_MONO * prev.abs().max(next.abs());
    match direction {
        Direction::Up => next < prev - slack,
        Direction::Down => next > prev + slack,
    }
}

/// Classifies `values` (sampled at ascending `ts`) as nondecreasing,
/// nonincreasing, or neither, with slack [`TOL_MONO`].
pub fn classify(ts: &[f64], values: &[f64]) -> Monotonicity {
    assert_eq!(ts.len(), values.len());
    let first_break = |dir| (1..values.len()).find(|&i| breaks(dir, values[i - 1], values[i]));
    let Some(drop) = first_break(Direction::Up) else {
        return Monotonicity::MonotoneUp;
    };
    let Some(rise) = first_break(Direction::Down) else {
        return Monotonicity::MonotoneDown;
    };
    let pt = |i: usize| CurvePoint {
        t: ts[i],
        value: values[i],
    };
    // drop: values[drop] < values[drop-1]; rise: values[rise] > values[rise-1]
    if rise < drop {
        // climbs into [rise, drop-1], then falls at drop
        let b = (rise..drop)
            .max_by(|&i, &j| values[i].total_cmp(&values[j]))
            .expect("nonempty range");
        Monotonicity::Nonmonotone {
            turn: Turn::Peak,
            witness: [pt(rise - 1), pt(b), pt(drop)],
        }
    } else {
        let b = (drop..rise)
            .min_by(|&i, &j| values[i].total_cmp(&values[j]))
            .expect("nonempty range");
        Monotonicity::Nonmonotone {
            turn: Turn::Valley,
            witness: [pt(drop - 1), pt(b), pt(rise)],
        }
    }
}

/// Samples `f` on the grid and classifies the resulting curve.
pub fn detect_nonmonotone<F>(f: F, grid: &GridSpec) -> Result<Monotonicity>
where
    F: Fn(f64) -> Result<f64>,
{
    let (ts, vs) = sample(f, grid)?;
    Ok(classify(&ts, &vs))
}

/// Samples `f` on the grid; any non-finite value is an evaluation error.
pub fn sample<F>(f: F, grid: &GridSpec) -> Result<(Vec<f64>, Vec<f64>)>
where
    F: Fn(f64) -> Result<f64>,
{
    grid.validate()?;
    let ts = grid.points();
    let mut vs = Vec::with_capacity(ts.len());
    for &t in &ts {
        let v = f(t)?;
        if !v.is_finite() {
            return Err(Error::Evaluation { t, value: v });
        }
        vs.push(v);
    }
    Ok((ts, vs))
}
