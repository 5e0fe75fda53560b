//! Series (X₁:ₙ) and parallel (Xₙ:ₙ) systems of independent PO components.
//!
//! Survival products for series systems and cdf products for parallel
//! systems are accumulated in log space, so long systems never underflow
//! before the final exponentiation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::majorization::ParamVector;
use crate::po_model::{BaselinePoint, BaselineSpec, ComponentPoint, POParameter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Topology {
    Series,
    Parallel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemModel {
    pub topology: Topology,
    pub base: BaselineSpec,
    pub params: ParamVector,
}

/// All lifetime functions of a system at one time point. Entries that are
/// undefined at `t` (for example a hazard after the survival has
/// underflowed) are `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemPoint {
    pub t: f64,
    pub survival: f64,
    pub cdf: f64,
    pub density: Option<f64>,
    pub hazard: Option<f64>,
    pub reversed_hazard: Option<f64>,
}

/// Per-point evaluation state shared by the public accessors.
struct Eval {
    log_survival: f64,
    log_cdf: f64,
    /// Σ component hazards (series) or Σ component reversed hazards (parallel).
    rate_sum: f64,
}

impl SystemModel {
    pub fn new(topology: Topology, base: BaselineSpec, params: ParamVector) -> Result<Self> {
        base.validate()?;
        Ok(Self { topology, base, params })
    }

    pub fn series(base: BaselineSpec, params: ParamVector) -> Result<Self> {
        Self::new(Topology::Series, base, params)
    }

    pub fn parallel(base: BaselineSpec, params: ParamVector) -> Result<Self> {
        Self::new(Topology::Parallel, base, params)
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    fn components<'a>(&'a self, p: &'a BaselinePoint) -> impl Iterator<Item = ComponentPoint> + 'a {
        self.params.iter().map(move |l| {
            // Entries of a ParamVector are validated positive and finite.
            let alpha = POParameter::new(l).expect("validated parameter");
            ComponentPoint::new(alpha, p)
        })
    }

    fn eval(&self, t: f64) -> Result<Eval> {
        let point = self.base.at(t)?;
        let (log_survival, log_cdf, rate_sum) = match self.topology {
            Topology::Series => {
                let mut ls = 0.0;
                let mut hz = 0.0;
                for c in self.components(&point) {
                    ls += c.log_survival(&point);
                    hz += c.hazard(&point);
                }
                (ls, log_one_minus_exp(ls), hz)
            }
            Topology::Parallel => {
                let mut lf = 0.0;
                let mut rh = 0.0;
                for c in self.components(&point) {
                    lf += c.log_cdf(&point);
                    if t > 0.0 {
                        rh += c.reversed_hazard(&point);
                    }
                }
                (log_one_minus_exp(lf), lf, rh)
            }
        };
        Ok(Eval {
            log_survival,
            log_cdf,
            rate_sum,
        })
    }

    pub fn survival(&self, t: f64) -> Result<f64> {
        let e = self.eval(t)?;
        Ok(match self.topology {
            Topology::Series => e.log_survival.exp(),
            Topology::Parallel => -e.log_cdf.exp_m1(),
        })
    }

    pub fn cdf(&self, t: f64) -> Result<f64> {
        let e = self.eval(t)?;
        Ok(match self.topology {
            Topology::Series => -e.log_survival.exp_m1(),
            Topology::Parallel => e.log_cdf.exp(),
        })
    }

    pub fn log_survival(&self, t: f64) -> Result<f64> {
        Ok(self.eval(t)?.log_survival)
    }

    pub fn log_cdf(&self, t: f64) -> Result<f64> {
        Ok(self.eval(t)?.log_cdf)
    }

    /// Series: Σ rᵢ(t). Parallel: f(t)/F̄(t), defined for t > 0. Fails where
    /// the system survival has underflowed to zero.
    pub fn hazard(&self, t: f64) -> Result<f64> {
        if self.topology == Topology::Parallel {
            check_positive_time(t)?;
        }
        let e = self.eval(t)?;
        if e.log_survival.exp() == 0.0 {
            return Err(Error::Range { what: "hazard", t });
        }
        Ok(match self.topology {
            Topology::Series => e.rate_sum,
            Topology::Parallel => (e.log_cdf + e.rate_sum.ln() - e.log_survival).exp(),
        })
    }

    /// Series: f(t)/F(t). Parallel: Σ r̃ᵢ(t). Defined for t > 0.
    pub fn reversed_hazard(&self, t: f64) -> Result<f64> {
        check_positive_time(t)?;
        let e = self.eval(t)?;
        if e.log_cdf == f64::NEG_INFINITY {
            return Err(Error::Range {
                what: "reversed hazard",
                t,
            });
        }
        Ok(match self.topology {
            Topology::Series => (e.log_survival + e.rate_sum.ln() - e.log_cdf).exp(),
            Topology::Parallel => e.rate_sum,
        })
    }

    /// Series: F̄(t)·r(t). Parallel: F(t)·r̃(t), defined for t > 0.
    pub fn density(&self, t: f64) -> Result<f64> {
        Ok(self.log_density(t)?.exp())
    }

    pub fn log_density(&self, t: f64) -> Result<f64> {
        if self.topology == Topology::Parallel {
            check_positive_time(t)?;
        }
        let e = self.eval(t)?;
        Ok(match self.topology {
            Topology::Series => e.log_survival + e.rate_sum.ln(),
            Topology::Parallel => e.log_cdf + e.rate_sum.ln(),
        })
    }

    /// Every lifetime function at `t`; entries undefined at `t` are `None`.
    pub fn evaluate(&self, t: f64) -> Result<SystemPoint> {
        Ok(SystemPoint {
            t,
            survival: self.survival(t)?,
            cdf: self.cdf(t)?,
            density: self.density(t).ok(),
            hazard: self.hazard(t).ok(),
            reversed_hazard: self.reversed_hazard(t).ok(),
        })
    }
}

/// ln(1 − eˣ) for x ≤ 0.
fn log_one_minus_exp(x: f64) -> f64 {
    if x > -std::f64::consts::LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

fn check_positive_time(t: f64) -> Result<()> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::Domain {
            what: "time (must be > 0)",
            value: t,
        });
    }
    Ok(())
}

fn require_series(m: &SystemModel) -> Result<()> {
    if m.topology != Topology::Series {
        return Err(Error::Config("expected a series system".into()));
    }
    Ok(())
}

fn require_parallel(m: &SystemModel) -> Result<()> {
    if m.topology != Topology::Parallel {
        return Err(Error::Config("expected a parallel system".into()));
    }
    Ok(())
}

pub fn series_survival(m: &SystemModel, t: f64) -> Result<f64> {
    require_series(m)?;
    m.survival(t)
}

pub fn series_hazard(m: &SystemModel, t: f64) -> Result<f64> {
    require_series(m)?;
    m.hazard(t)
}

pub fn series_density(m: &SystemModel, t: f64) -> Result<f64> {
    require_series(m)?;
    m.density(t)
}

pub fn parallel_survival(m: &SystemModel, t: f64) -> Result<f64> {
    require_parallel(m)?;
    m.survival(t)
}

pub fn parallel_reversed_hazard(m: &SystemModel, t: f64) -> Result<f64> {
    require_parallel(m)?;
    m.reversed_hazard(t)
}

pub fn parallel_density(m: &SystemModel, t: f64) -> Result<f64> {
    require_parallel(m)?;
    m.density(t)
}

/// λⁿF̄ⁿ(t) / (1 − λ̄F̄(t))ⁿ
pub fn homogeneous_series_survival(lambda: f64, n: usize, base: &BaselineSpec, t: f64) -> Result<f64> {
    let alpha = POParameter::new(lambda)?;
    check_n(n)?;
    let s = base.survival(t)?;
    let d = 1.0 - alpha.alpha_bar() * s;
    Ok((lambda * s / d).powi(n as i32))
}

/// 1 − ((1 − F̄(t)) / (1 − λ̄F̄(t)))ⁿ
pub fn homogeneous_parallel_survival(lambda: f64, n: usize, base: &BaselineSpec, t: f64) -> Result<f64> {
    let alpha = POParameter::new(lambda)?;
    check_n(n)?;
    let s = base.survival(t)?;
    let d = 1.0 - alpha.alpha_bar() * s;
    Ok(1.0 - ((1.0 - s) / d).powi(n as i32))
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > i32::MAX as usize {
        return Err(Error::Config(format!(
            "system size must be in 1..={}, got {n}",
            i32::MAX
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::po_model::{po_hazard, po_reversed_hazard, po_survival};

    fn pv(v: &[f64]) -> ParamVector {
        ParamVector::new(v.to_vec()).unwrap()
    }

    fn exp(rate: f64) -> BaselineSpec {
        BaselineSpec::exponential(rate).unwrap()
    }

    fn rel(x: f64, y: f64) -> f64 {
        (x - y).abs() / y.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn series_survival_quoted_values() {
        let x = SystemModel::series(exp(2.0), pv(&[2.2, 3., 5.])).unwrap();
        let y = SystemModel::series(exp(2.0), pv(&[2.8, 3.2, 3.3])).unwrap();
        assert!((series_survival(&x, 0.2).unwrap() - 0.63929).abs() < 1e-5);
        assert!((series_survival(&y, 0.8).unwrap() - 0.084394).abs() < 1e-6);
    }

    #[test]
    fn single_component_matches_po_model() {
        for base in [exp(2.0), BaselineSpec::weibull(2.0, 0.8).unwrap()] {
            for topo in [Topology::Series, Topology::Parallel] {
                let m = SystemModel::new(topo, base, pv(&[2.5])).unwrap();
                let a = POParameter::new(2.5).unwrap();
                for i in 1..50 {
                    let t = i as f64 * 0.05;
                    assert!(rel(m.survival(t).unwrap(), po_survival(a, &base, t).unwrap()) < 1e-13);
                    assert!(rel(m.hazard(t).unwrap(), po_hazard(a, &base, t).unwrap()) < 1e-12);
                    assert!(rel(m.reversed_hazard(t).unwrap(), po_reversed_hazard(a, &base, t).unwrap()) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn unit_parameters_give_multiples_of_baseline_rates() {
        let base = exp(1.5);
        let s = SystemModel::series(base, pv(&[1., 1., 1.])).unwrap();
        let p = SystemModel::parallel(base, pv(&[1., 1., 1.])).unwrap();
        for t in [0.1, 0.7, 2.0] {
            assert!(rel(series_hazard(&s, t).unwrap(), 3.0 * 1.5) < 1e-14);
            let rh = base.reversed_hazard(t).unwrap();
            assert!(rel(parallel_reversed_hazard(&p, t).unwrap(), 3.0 * rh) < 1e-12);
        }
        let one = SystemModel::series(base, pv(&[1.0])).unwrap();
        assert!(rel(series_density(&one, 0.4).unwrap(), base.density(0.4).unwrap()) < 1e-14);
        let one = SystemModel::parallel(base, pv(&[1.0])).unwrap();
        assert!(rel(parallel_density(&one, 0.4).unwrap(), base.density(0.4).unwrap()) < 1e-14);
    }

    #[test]
    fn parallel_reversed_hazard_is_sum_of_components() {
        let base = exp(2.0);
        let m = SystemModel::parallel(base, pv(&[2., 3.])).unwrap();
        let sum = po_reversed_hazard(POParameter::new(2.).unwrap(), &base, 1.0).unwrap()
            + po_reversed_hazard(POParameter::new(3.).unwrap(), &base, 1.0).unwrap();
        assert!(rel(parallel_reversed_hazard(&m, 1.0).unwrap(), sum) < 1e-14);
    }

    #[test]
    fn parallel_homogeneous_reversed_hazard_closed_form() {
        let base = BaselineSpec::weibull(2.0, 0.8).unwrap();
        let lambda = 3.6;
        let m = SystemModel::parallel(base, ParamVector::homogeneous(lambda, 4).unwrap()).unwrap();
        for i in 1..60 {
            let t = i as f64 * 0.04;
            let s = base.survival(t).unwrap();
            let closed = 4.0 * lambda * base.reversed_hazard(t).unwrap() / (1.0 - (1.0 - lambda) * s);
            assert!(rel(m.reversed_hazard(t).unwrap(), closed) < 1e-12);
        }
    }

    #[test]
    fn homogeneous_closed_forms_agree() {
        let bases = [exp(1.0), BaselineSpec::weibull(2.0, 0.8).unwrap()];
        for base in bases {
            for (lambda, n) in [(3.6, 4), (0.3, 2), (1.0, 5), (7.0, 1)] {
                let pvec = ParamVector::homogeneous(lambda, n).unwrap();
                let s = SystemModel::series(base, pvec.clone()).unwrap();
                let p = SystemModel::parallel(base, pvec).unwrap();
                for i in 0..80 {
                    let t = i as f64 * 0.025;
                    let hs = homogeneous_series_survival(lambda, n, &base, t).unwrap();
                    let hp = homogeneous_parallel_survival(lambda, n, &base, t).unwrap();
                    assert!(rel(s.survival(t).unwrap(), hs) < 1e-12, "series λ={lambda} n={n} t={t}");
                    if hp > 1e-3 {
                        assert!(
                            rel(p.survival(t).unwrap(), hp) < 1e-12,
                            "parallel λ={lambda} n={n} t={t}"
                        );
                    }
                }
                if n == 1 {
                    let a = POParameter::new(lambda).unwrap();
                    assert!(
                        rel(
                            homogeneous_series_survival(lambda, 1, &base, 0.3).unwrap(),
                            po_survival(a, &base, 0.3).unwrap()
                        ) < 1e-14
                    );
                }
            }
        }
    }

    #[test]
    fn parallel_survival_is_one_at_origin() {
        let m = SystemModel::parallel(exp(1.8), pv(&[2., 3., 5.])).unwrap();
        assert_eq!(parallel_survival(&m, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn topology_specific_operations_reject_the_other_topology() {
        let m = SystemModel::parallel(exp(1.0), pv(&[2.])).unwrap();
        assert!(matches!(series_survival(&m, 1.0), Err(Error::Config(_))));
        let m = SystemModel::series(exp(1.0), pv(&[2.])).unwrap();
        assert!(matches!(parallel_density(&m, 1.0), Err(Error::Config(_))));
    }

    #[test]
    fn series_hazard_range_error_after_underflow() {
        let m = SystemModel::series(exp(3.0), pv(&[2., 3., 4., 5.])).unwrap();
        assert_eq!(m.survival(100.0).unwrap(), 0.0);
        assert!(matches!(m.hazard(100.0), Err(Error::Range { .. })));
        // still representable in log space
        assert!(m.log_survival(100.0).unwrap().is_finite());
    }

    #[test]
    fn parallel_tail_survival_keeps_precision() {
        // 1 − Π(1 − F̄ᵢ) ≈ Σ F̄ᵢ when every F̄ᵢ is tiny
        let base = exp(1.0);
        let m = SystemModel::parallel(base, pv(&[2., 3.])).unwrap();
        let t = 30.0;
        let approx: f64 = [2.0, 3.0]
            .iter()
            .map(|&a| po_survival(POParameter::new(a).unwrap(), &base, t).unwrap())
            .sum();
        assert!(rel(m.survival(t).unwrap(), approx) < 1e-10);
    }
}
