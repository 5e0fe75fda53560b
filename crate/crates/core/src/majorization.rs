//! Vector preorders on positive parameter vectors.
//!
//! Every predicate compares the increasing arrangements of its arguments, so
//! callers pass vectors in any order. The chain
//!
//! ```text
//! x ⪰m y  ⇒  x ⪰w y  ⇒  x ⪰p y  ⇒  x ⪰rm y
//! ```
//!
//! holds for positive vectors and is exercised by the property tests.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute slack for sum (and log-product) comparisons.
pub const TOL_SUM: f64 = 1e-9;

/// An ordered, nonempty sequence of strictly positive PO parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ParamVector(Vec<f64>);

impl ParamVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Config("parameter vector must be nonempty".into()));
        }
        for &v in &values {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "lambda",
                    value: v,
                    reason: "PO parameters must be finite and strictly positive",
                });
            }
        }
        Ok(Self(values))
    }

    /// `n` copies of `value`.
    pub fn homogeneous(value: f64, n: usize) -> Result<Self> {
        Self::new(vec![value; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().copied()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn arithmetic_mean(&self) -> f64 {
        self.sum() / self.len() as f64
    }

    /// Computed in log space so long vectors do not overflow.
    pub fn geometric_mean(&self) -> f64 {
        (self.0.iter().map(|v| v.ln()).sum::<f64>() / self.len() as f64).exp()
    }

    /// Increasing arrangement x₍₁₎ ≤ … ≤ x₍ₙ₎.
    pub fn sorted(&self) -> Vec<f64> {
        let mut v = self.0.clone();
        v.sort_by(f64::total_cmp);
        v
    }
}

impl TryFrom<Vec<f64>> for ParamVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<ParamVector> for Vec<f64> {
    fn from(v: ParamVector) -> Self {
        v.0
    }
}

impl fmt::Display for ParamVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Two-valued parameter vector: `n1` copies of `lambda1` followed by `n2`
/// copies of `lambda2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutlierSpec {
    pub lambda1: f64,
    pub lambda2: f64,
    pub n1: usize,
    pub n2: usize,
}

impl OutlierSpec {
    pub fn new(lambda1: f64, lambda2: f64, n1: usize, n2: usize) -> Result<Self> {
        let spec = Self {
            lambda1,
            lambda2,
            n1,
            n2,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n1 == 0 || self.n2 == 0 {
            return Err(Error::Config(format!(
                "outlier block sizes must be at least 1 (got n1 = {}, n2 = {})",
                self.n1, self.n2
            )));
        }
        for (name, v) in [("lambda1", self.lambda1), ("lambda2", self.lambda2)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "PO parameters must be finite and strictly positive",
                });
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n1 + self.n2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn expand_outlier(spec: &OutlierSpec) -> Result<ParamVector> {
    spec.validate()?;
    let mut v = Vec::with_capacity(spec.len());
    v.extend(std::iter::repeat_n(spec.lambda1, spec.n1));
    v.extend(std::iter::repeat_n(spec.lambda2, spec.n2));
    ParamVector::new(v)
}

/// The five preorders, addressable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preorder {
    /// `x ⪰m y`
    Majorization,
    /// `x ⪰w y` (weak supermajorization)
    WeakSuper,
    /// `x ⪰_w y` (weak submajorization)
    WeakSub,
    /// `x ⪰p y`
    PLarger,
    /// `x ⪰rm y`
    Reciprocal,
}

impl Preorder {
    pub const ALL: [Preorder; 5] = [
        Preorder::Majorization,
        Preorder::WeakSuper,
        Preorder::WeakSub,
        Preorder::PLarger,
        Preorder::Reciprocal,
    ];

    pub fn holds(self, x: &ParamVector, y: &ParamVector) -> Result<bool> {
        match self {
            Preorder::Majorization => majorizes(x, y),
            Preorder::WeakSuper => weak_supermajorizes(x, y),
            Preorder::WeakSub => weak_submajorizes(x, y),
            Preorder::PLarger => p_larger(x, y),
            Preorder::Reciprocal => reciprocally_majorizes(x, y),
        }
    }
}

fn same_len(x: &ParamVector, y: &ParamVector) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::Dimension {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(())
}

fn prefix_sums(v: impl IntoIterator<Item = f64>) -> Vec<f64> {
    v.into_iter()
        .scan(0.0, |acc, x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

/// `x ⪰m y`: increasing-arrangement prefix sums of `x` never exceed those of
/// `y`, and the totals agree.
pub fn majorizes(x: &ParamVector, y: &ParamVector) -> Result<bool> {
    same_len(x, y)?;
    let px = prefix_sums(x.sorted());
    let py = prefix_sums(y.sorted());
    let n = px.len();
    let prefixes = px[..n - 1].iter().zip(&py[..n - 1]).all(|(a, b)| *a <= b + TOL_SUM);
    Ok(prefixes && (px[n - 1] - py[n - 1]).abs() <= TOL_SUM)
}

/// `x ⪰w y`: every increasing-arrangement prefix sum of `x` is at most that
/// of `y`, including the total.
pub fn weak_supermajorizes(x: &ParamVector, y: &ParamVector) -> Result<bool> {
    same_len(x, y)?;
    let px = prefix_sums(x.sorted());
    let py = prefix_sums(y.sorted());
    Ok(px.iter().zip(&py).all(|(a, b)| *a <= b + TOL_SUM))
}

/// `x ⪰_w y`: every increasing-arrangement suffix sum of `x` is at least that
/// of `y`.
pub fn weak_submajorizes(x: &ParamVector, y: &ParamVector) -> Result<bool> {
    same_len(x, y)?;
    let sx = prefix_sums(x.sorted().into_iter().rev());
    let sy = prefix_sums(y.sorted().into_iter().rev());
    Ok(sx.iter().zip(&sy).all(|(a, b)| *a >= b - TOL_SUM))
}

/// `x ⪰p y`: every increasing-arrangement prefix product of `x` is at most
/// that of `y`. Products are compared as sums of logarithms.
pub fn p_larger(x: &ParamVector, y: &ParamVector) -> Result<bool> {
    same_len(x, y)?;
    let lx = prefix_sums(x.sorted().into_iter().map(f64::ln));
    let ly = prefix_sums(y.sorted().into_iter().map(f64::ln));
    Ok(lx.iter().zip(&ly).all(|(a, b)| *a <= b + TOL_SUM))
}

/// `x ⪰rm y`: every increasing-arrangement prefix sum of reciprocals of `x`
/// is at least that of `y`.
pub fn reciprocally_majorizes(x: &ParamVector, y: &ParamVector) -> Result<bool> {
    same_len(x, y)?;
    let rx = prefix_sums(x.sorted().into_iter().map(f64::recip));
    let ry = prefix_sums(y.sorted().into_iter().map(f64::recip));
    Ok(rx.iter().zip(&ry).all(|(a, b)| *a >= b - TOL_SUM))
}
