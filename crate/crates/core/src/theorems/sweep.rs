//! Seeded randomized validation: constructive generators for every
//! hypothesis branch, and aggregation of the resulting verifications.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{hypothesis, verify, CaseInputs, TheoremCase, TheoremId, TheoremReport};
use crate::error::{Error, Result};
use crate::majorization::ParamVector;
use crate::order_checks::GridSpec;
use crate::po_model::BaselineSpec;

/// Candidate draws per trial before generation gives up.
pub const MAX_ATTEMPTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchTally {
    pub name: String,
    pub trials: usize,
    pub consistent: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub id: TheoremId,
    /// `None` when trials rotate through every branch.
    pub branch: Option<String>,
    pub trials: usize,
    pub seed: u64,
    pub consistent: usize,
    /// Verdicts with more than the allowed share of skipped grid points.
    pub degraded: usize,
    pub branches: Vec<BranchTally>,
    /// Full reports of every inconsistent trial, in trial order.
    pub inconsistent: Vec<TheoremReport>,
}

impl SweepReport {
    pub fn all_consistent(&self) -> bool {
        self.consistent == self.trials
    }
}

/// Generates `trials` instances satisfying the hypothesis (one named branch,
/// or all branches in rotation) and verifies each on the default grid.
///
/// Trial `i` draws from its own ChaCha stream, so results do not depend on
/// scheduling.
pub fn sweep(id: TheoremId, branch: Option<&str>, trials: usize, seed: u64) -> Result<SweepReport> {
    if trials == 0 {
        return Err(Error::Config("sweep needs at least one trial".into()));
    }
    let names = id.branches();
    let fixed = match branch {
        Some(b) => Some(id.branch_index(b).ok_or_else(|| {
            Error::Config(format!(
                "{id} has no hypothesis branch {b:?} (expected one of {names:?})"
            ))
        })?),
        None => None,
    };
    let reports: Vec<(usize, TheoremReport)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let b = fixed.unwrap_or(i % names.len());
            let case = generate_case(id, b, &mut rng)?;
            Ok((b, verify(&case)?))
        })
        .collect::<Result<_>>()?;

    let mut tallies: Vec<BranchTally> = names
        .iter()
        .map(|n| BranchTally {
            name: n.to_string(),
            trials: 0,
            consistent: 0,
        })
        .collect();
    let mut inconsistent = Vec::new();
    let mut degraded = 0;
    for (b, r) in reports {
        tallies[b].trials += 1;
        if r.conclusion.as_ref().is_some_and(|v| v.degraded) {
            degraded += 1;
        }
        if r.consistent {
            tallies[b].consistent += 1;
        } else {
            inconsistent.push(r);
        }
    }
    if fixed.is_some() {
        tallies.retain(|t| t.trials > 0);
    }
    Ok(SweepReport {
        id,
        branch: fixed.map(|b| names[b].to_string()),
        trials,
        seed,
        consistent: trials - inconsistent.len(),
        degraded,
        branches: tallies,
        inconsistent,
    })
}

/// Draws one case whose hypothesis branch `branch` holds, retrying up to
/// [`MAX_ATTEMPTS`] times.
pub fn generate_case<R: Rng>(id: TheoremId, branch: usize, rng: &mut R) -> Result<TheoremCase> {
    let name = id.branches().get(branch).ok_or_else(|| {
        Error::Config(format!(
            "{id} has {} hypothesis branches, index {branch} given",
            id.branches().len()
        ))
    })?;
    for _ in 0..MAX_ATTEMPTS {
        let case = TheoremCase {
            id,
            baseline: draw_baseline(rng),
            inputs: draw_inputs(id, branch, rng)?,
            grid: GridSpec::default(),
        };
        if hypothesis(&case)?.branch(name).is_some_and(|b| b.holds) {
            return Ok(case);
        }
    }
    Err(Error::Generation {
        constraint: format!("{id} hypothesis branch {name}"),
        attempts: MAX_ATTEMPTS,
    })
}

/// Exponential rates in [0.5, 2] or Weibull shapes in [0.7, 1.5] with scales
/// in [1, 3]; on the default grid the cumulative hazard stays below 90.
fn draw_baseline<R: Rng>(rng: &mut R) -> BaselineSpec {
    if rng.gen_bool(0.5) {
        BaselineSpec::Exponential {
            rate: rng.gen_range(0.5..=2.0),
        }
    } else {
        BaselineSpec::Weibull {
            shape: rng.gen_range(0.7..=1.5),
            scale: rng.gen_range(1.0..=3.0),
        }
    }
}

fn draw_inputs<R: Rng>(id: TheoremId, branch: usize, rng: &mut R) -> Result<CaseInputs> {
    use TheoremId::*;
    Ok(match id {
        T3_1 => {
            let (lambda, mu) = p_larger_pair(rng);
            CaseInputs::Heterogeneous {
                lambda: ParamVector::new(lambda)?,
                mu: ParamVector::new(mu)?,
            }
        }
        T3_2 | T4_1 => {
            let (lambda, mu) = weak_super_pair(rng);
            CaseInputs::Heterogeneous {
                lambda: ParamVector::new(lambda)?,
                mu: ParamVector::new(mu)?,
            }
        }
        C3_1 | C3_2 | T3_7 | T3_9 | C4_1 | T4_2 => {
            let n = rng.gen_range(2..=6);
            let lambda = ParamVector::new((0..n).map(|_| rng.gen_range(0.5..=5.0)).collect())?;
            let centre = match id {
                C3_1 | T4_2 => lambda.geometric_mean(),
                _ => lambda.arithmetic_mean(),
            };
            let homogeneous = if id == T4_2 || rng.gen_bool(0.2) {
                centre
            } else {
                centre * rng.gen_range(1.0..=1.5)
            };
            CaseInputs::VersusHomogeneous { lambda, homogeneous }
        }
        T3_3 | T3_6 | T3_8 => {
            // T3.8 branches: the T3.3 pair, then the T3.6 pair
            let kind = match (id, branch) {
                (T3_6, b) => 2 + b,
                (_, b) => b,
            };
            outlier_pair(kind, rng)
        }
        T3_4 => {
            let (n1, n2) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            let (lambda1, lambda2): (f64, f64) = (rng.gen_range(0.3..=3.0), rng.gen_range(0.3..=3.0));
            let c = lambda1.max(lambda2);
            CaseInputs::OutlierPair {
                lambda1,
                lambda2,
                mu1: c + rng.gen_range(0.0..=3.0),
                mu2: c + rng.gen_range(0.0..=3.0),
                n1,
                n2,
            }
        }
        T3_5 => {
            let mu1 = rng.gen_range(0.3..=4.0);
            CaseInputs::CommonOutlier {
                lambda1: mu1 * rng.gen_range(0.05..=1.0),
                mu1,
                eta: rng.gen_range(0.3..=5.0),
                n1: rng.gen_range(1..=4),
                n2: rng.gen_range(1..=4),
            }
        }
        T4_3 | T4_4 => {
            let mut v = [
                rng.gen_range(0.1..=5.0),
                rng.gen_range(0.1..=5.0),
                rng.gen_range(0.1..=5.0),
            ];
            v.sort_by(f64::total_cmp);
            CaseInputs::CommonOutlier {
                lambda1: v[0],
                mu1: v[2],
                eta: v[1],
                n1: rng.gen_range(1..=4),
                n2: rng.gen_range(1..=4),
            }
        }
    })
}

/// Block sizes with n1 ≥ n2 (`larger_first`) or n1 ≤ n2.
fn block_sizes<R: Rng>(larger_first: bool, rng: &mut R) -> (usize, usize) {
    let small = rng.gen_range(1..=3);
    let large = rng.gen_range(small..=4);
    if larger_first {
        (large, small)
    } else {
        (small, large)
    }
}

/// Two-valued pairs. Kinds 0 and 1: equal totals with
/// λ1 ≤ μ1 ≤ μ2 ≤ λ2, n1 ≥ n2 (or the mirror with n1 ≤ n2), which gives
/// majorization. Kinds 2 and 3: the same chains with a strictly smaller λ
/// total, which gives weak supermajorization.
fn outlier_pair<R: Rng>(kind: usize, rng: &mut R) -> CaseInputs {
    let increasing = kind.is_multiple_of(2);
    let (n1, n2) = block_sizes(increasing, rng);
    let (f1, f2) = (n1 as f64, n2 as f64);
    let (lambda1, lambda2, mu1, mu2) = if kind < 2 {
        let low = rng.gen_range(0.3..=3.0);
        let high = low + rng.gen_range(0.0..=3.0);
        let (l1, l2) = if increasing { (low, high) } else { (high, low) };
        let total = f1 * l1 + f2 * l2;
        let mean = total / (f1 + f2);
        // μ1 between λ1 and the mean; μ2 restores the total
        let m1 = l1 + rng.gen::<f64>() * (mean - l1);
        (l1, l2, m1, (total - f1 * m1) / f2)
    } else if increasing {
        let m1 = rng.gen_range(0.3..=3.0);
        let m2 = m1 + rng.gen_range(0.0..=3.0);
        let total = f1 * m1 + f2 * m2;
        let l2 = m2 + rng.gen::<f64>() * (total / f2 - m2);
        let l1 = rng.gen_range(0.05..=1.0) * (total - f2 * l2) / f1;
        (l1, l2, m1, m2)
    } else {
        let m2 = rng.gen_range(0.3..=3.0);
        let m1 = m2 + rng.gen_range(0.0..=3.0);
        let total = f1 * m1 + f2 * m2;
        let l1 = m1 + rng.gen::<f64>() * (total / f1 - m1);
        let l2 = rng.gen_range(0.05..=1.0) * (total - f1 * l1) / f2;
        (l1, l2, m1, m2)
    };
    CaseInputs::OutlierPair {
        lambda1,
        lambda2,
        mu1,
        mu2,
        n1,
        n2,
    }
}

/// Applies random transfers from a smaller entry to a larger one. Each
/// transfer preserves the total and spreads the vector, so the result
/// majorizes the input. `floor` bounds the fraction of the smaller entry
/// that may move (entries stay positive) or, when `None`, moves up to one
/// unit regardless of sign.
fn spread<R: Rng>(x: &mut [f64], floor: Option<f64>, rng: &mut R) {
    let n = x.len();
    for _ in 0..rng.gen_range(1..=2 * n) {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let (lo, hi) = if x[i] <= x[j] { (i, j) } else { (j, i) };
        let delta = match floor {
            Some(frac) => rng.gen::<f64>() * frac * x[lo],
            None => rng.gen::<f64>(),
        };
        x[lo] -= delta;
        x[hi] += delta;
    }
}

/// Lowers a random subset of entries by nonnegative amounts, which can only
/// decrease increasing-arrangement prefix sums.
fn lower<R: Rng>(x: &mut [f64], by: impl Fn(f64, f64) -> f64, rng: &mut R) {
    if rng.gen_bool(0.3) {
        return;
    }
    for v in x.iter_mut() {
        if rng.gen_bool(0.5) {
            *v = by(*v, rng.gen::<f64>());
        }
    }
}

fn base_vector<R: Rng>(rng: &mut R) -> Vec<f64> {
    let n = rng.gen_range(2..=6);
    (0..n).map(|_| rng.gen_range(0.5..=5.0)).collect()
}

/// (λ, μ) with λ weakly supermajorizing μ.
fn weak_super_pair<R: Rng>(rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    let mu = base_vector(rng);
    let mut lambda = mu.clone();
    spread(&mut lambda, Some(0.9), rng);
    lower(&mut lambda, |v, u| v * (1.0 - 0.5 * u), rng);
    (lambda, mu)
}

/// (λ, μ) with λ p-larger than μ: the weak supermajorization construction
/// applied to logarithms.
fn p_larger_pair<R: Rng>(rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    let mu = base_vector(rng);
    let mut a: Vec<f64> = mu.iter().map(|v| v.ln()).collect();
    spread(&mut a, None, rng);
    lower(&mut a, |v, u| v - 0.5 * u, rng);
    (a.into_iter().map(f64::exp).collect(), mu)
}

/// Pairs (x, y) with x majorizing y, for property tests of the preorder
/// chain.
pub fn majorizing_pair<R: Rng>(n: usize, rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    let y: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..=5.0)).collect();
    let mut x = y.clone();
    spread(&mut x, Some(0.9), rng);
    (x, y)
}
