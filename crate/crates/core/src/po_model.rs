//! Baseline lifetime families and the single-component proportional-odds
//! transform
//!
//! ```text
//! Ḡ(t) = α F̄(t) / (1 − ᾱ F̄(t)),   ᾱ = 1 − α
//! ```
//!
//! which multiplies the odds of survival θ(t) = F̄(t)/F(t) by α. The
//! denominator is evaluated as `F(t) + α F̄(t)`, a sum of nonnegative terms,
//! which avoids cancellation for small α.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this, `|1 − α|` is treated as zero and the baseline is returned.
pub const UNIT_ALPHA_EPS: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum BaselineSpec {
    Exponential {
        rate: f64,
    },
    /// F̄(t) = exp(−(t/scale)^shape)
    Weibull {
        shape: f64,
        scale: f64,
    },
}

/// Baseline quantities at a single time point, computed once and shared by
/// every component of a system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselinePoint {
    pub t: f64,
    /// Cumulative hazard H(t) = −ln F̄(t).
    pub cum_hazard: f64,
    pub survival: f64,
    pub cdf: f64,
    pub density: f64,
    pub hazard: f64,
}

impl BaselinePoint {
    pub fn log_survival(&self) -> f64 {
        -self.cum_hazard
    }

    /// ln F(t), accurate both near t = 0 and in the far tail.
    pub fn log_cdf(&self) -> f64 {
        if self.survival < 0.5 {
            (-self.survival).ln_1p()
        } else {
            self.cdf.ln()
        }
    }

    pub fn reversed_hazard(&self) -> f64 {
        self.density / self.cdf
    }
}

impl BaselineSpec {
    pub fn exponential(rate: f64) -> Result<Self> {
        let b = BaselineSpec::Exponential { rate };
        b.validate()?;
        Ok(b)
    }

    pub fn weibull(shape: f64, scale: f64) -> Result<Self> {
        let b = BaselineSpec::Weibull { shape, scale };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, value: f64| {
            if value.is_finite() && value > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite and strictly positive",
                })
            }
        };
        match *self {
            BaselineSpec::Exponential { rate } => positive("rate", rate),
            BaselineSpec::Weibull { shape, scale } => {
                positive("shape", shape)?;
                positive("scale", scale)
            }
        }
    }

    /// Characteristic time scale of the family (mean for the exponential,
    /// scale for the Weibull).
    pub fn time_scale(&self) -> f64 {
        match *self {
            BaselineSpec::Exponential { rate } => 1.0 / rate,
            BaselineSpec::Weibull { scale, .. } => scale,
        }
    }

    pub fn cumulative_hazard(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(match *self {
            BaselineSpec::Exponential { rate } => rate * t,
            BaselineSpec::Weibull { shape, scale } => (t / scale).powf(shape),
        })
    }

    pub fn survival(&self, t: f64) -> Result<f64> {
        Ok((-self.cumulative_hazard(t)?).exp())
    }

    pub fn cdf(&self, t: f64) -> Result<f64> {
        Ok(-(-self.cumulative_hazard(t)?).exp_m1())
    }

    pub fn hazard(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(match *self {
            BaselineSpec::Exponential { rate } => rate,
            BaselineSpec::Weibull { shape, scale } => shape / scale * (t / scale).powf(shape - 1.0),
        })
    }

    pub fn density(&self, t: f64) -> Result<f64> {
        let h = self.hazard(t)?;
        let s = self.survival(t)?;
        // 0·∞ at t = 0 is not reachable: the hazard is only infinite there,
        // where the survival is exactly 1.
        Ok(h * s)
    }

    pub fn reversed_hazard(&self, t: f64) -> Result<f64> {
        check_positive_time(t)?;
        Ok(self.density(t)? / self.cdf(t)?)
    }

    pub fn odds(&self, t: f64) -> Result<f64> {
        check_positive_time(t)?;
        Ok(self.survival(t)? / self.cdf(t)?)
    }

    pub fn at(&self, t: f64) -> Result<BaselinePoint> {
        let cum_hazard = self.cumulative_hazard(t)?;
        let survival = (-cum_hazard).exp();
        let hazard = self.hazard(t)?;
        Ok(BaselinePoint {
            t,
            cum_hazard,
            survival,
            cdf: -(-cum_hazard).exp_m1(),
            density: hazard * survival,
            hazard,
        })
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::Domain { what: "time", value: t });
    }
    Ok(())
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

/// Proportionality constant α of the odds of survival.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct POParameter(f64);

impl POParameter {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 0.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "must be finite and strictly positive",
            })
        }
    }

    pub fn alpha(self) -> f64 {
        self.0
    }

    /// ᾱ = 1 − α
    pub fn alpha_bar(self) -> f64 {
        1.0 - self.0
    }

    pub fn is_unit(self) -> bool {
        self.alpha_bar().abs() < UNIT_ALPHA_EPS
    }
}

impl TryFrom<f64> for POParameter {
    type Error = Error;

    fn try_from(alpha: f64) -> Result<Self> {
        Self::new(alpha)
    }
}

impl From<POParameter> for f64 {
    fn from(p: POParameter) -> f64 {
        p.0
    }
}

/// One PO component evaluated at a baseline point. All system-level
/// quantities are assembled from these terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ComponentPoint {
    /// 1 − ᾱF̄(t), evaluated as F(t) + αF̄(t).
    pub denom: f64,
    pub log_denom: f64,
    pub alpha: f64,
    pub unit: bool,
}

impl ComponentPoint {
    pub fn new(alpha: POParameter, p: &BaselinePoint) -> Self {
        let a = alpha.alpha();
        if alpha.is_unit() {
            return Self {
                denom: 1.0,
                log_denom: 0.0,
                alpha: 1.0,
                unit: true,
            };
        }
        let denom = p.cdf + a * p.survival;
        let log_denom = if p.survival < 0.5 {
            ((a - 1.0) * p.survival).ln_1p()
        } else {
            denom.ln()
        };
        Self {
            denom,
            log_denom,
            alpha: a,
            unit: false,
        }
    }

    pub fn survival(&self, p: &BaselinePoint) -> f64 {
        if self.unit {
            p.survival
        } else {
            self.alpha * p.survival / self.denom
        }
    }

    pub fn cdf(&self, p: &BaselinePoint) -> f64 {
        if self.unit {
            p.cdf
        } else {
            p.cdf / self.denom
        }
    }

    pub fn log_survival(&self, p: &BaselinePoint) -> f64 {
        self.alpha.ln() + p.log_survival() - self.log_denom
    }

    pub fn log_cdf(&self, p: &BaselinePoint) -> f64 {
        p.log_cdf() - self.log_denom
    }

    pub fn density(&self, p: &BaselinePoint) -> f64 {
        if self.unit {
            p.density
        } else {
            self.alpha * p.density / (self.denom * self.denom)
        }
    }

    pub fn hazard(&self, p: &BaselinePoint) -> f64 {
        p.hazard / self.denom
    }

    pub fn reversed_hazard(&self, p: &BaselinePoint) -> f64 {
        self.alpha * p.reversed_hazard() / self.denom
    }
}

/// α F̄(t) / (1 − ᾱ F̄(t)); exactly F̄(t) when α = 1.
pub fn po_survival(alpha: POParameter, base: &BaselineSpec, t: f64) -> Result<f64> {
    let p = base.at(t)?;
    Ok(ComponentPoint::new(alpha, &p).survival(&p))
}

pub fn po_cdf(alpha: POParameter, base: &BaselineSpec, t: f64) -> Result<f64> {
    let p = base.at(t)?;
    Ok(ComponentPoint::new(alpha, &p).cdf(&p))
}

/// α f(t) / (1 − ᾱ F̄(t))²
pub fn po_density(alpha: POParameter, base: &BaselineSpec, t: f64) -> Result<f64> {
    let p = base.at(t)?;
    Ok(ComponentPoint::new(alpha, &p).density(&p))
}

/// r(t) / (1 − ᾱ F̄(t)). Fails once the baseline survival has underflowed.
pub fn po_hazard(alpha: POParameter, base: &BaselineSpec, t: f64) -> Result<f64> {
    let p = base.at(t)?;
    if p.survival == 0.0 {
        return Err(Error::Range { what: "hazard", t });
    }
    Ok(ComponentPoint::new(alpha, &p).hazard(&p))
}

/// α r̃(t) / (1 − ᾱ F̄(t)), defined for t > 0.
pub fn po_reversed_hazard(alpha: POParameter, base: &BaselineSpec, t: f64) -> Result<f64> {
    check_positive_time(t)?;
    let p = base.at(t)?;
    if p.cdf == 0.0 {
        return Err(Error::Range {
            what: "reversed hazard",
            t,
        });
    }
    Ok(ComponentPoint::new(alpha, &p).reversed_hazard(&p))
}

/// α θ(t), defined for t > 0.
pub fn po_odds(alpha: POParameter, base: &BaselineSpec, t: f64) -> Result<f64> {
    check_positive_time(t)?;
    Ok(alpha.alpha() * base.odds(t)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(x: f64) -> POParameter {
        POParameter::new(x).unwrap()
    }

    fn rel(x: f64, y: f64) -> f64 {
        (x - y).abs() / y.abs().max(f64::MIN_POSITIVE)
    }

    fn bases() -> Vec<BaselineSpec> {
        vec![
            BaselineSpec::exponential(1.0).unwrap(),
            BaselineSpec::exponential(2.0).unwrap(),
            BaselineSpec::weibull(2.0, 0.8).unwrap(),
            BaselineSpec::weibull(0.7, 3.0).unwrap(),
        ]
    }

    #[test]
    fn unit_alpha_is_the_baseline_exactly() {
        for base in bases() {
            for t in [0.0, 0.01, 0.3, 1.0, 4.0, 40.0] {
                assert_eq!(po_survival(a(1.0), &base, t).unwrap(), base.survival(t).unwrap());
                assert_eq!(po_density(a(1.0), &base, t).unwrap(), base.density(t).unwrap());
                if t > 0.0 {
                    assert_eq!(
                        po_reversed_hazard(a(1.0), &base, t).unwrap(),
                        base.reversed_hazard(t).unwrap()
                    );
                    assert_eq!(po_odds(a(1.0), &base, t).unwrap(), base.odds(t).unwrap());
                }
                if base.survival(t).unwrap() > 0.0 {
                    assert_eq!(po_hazard(a(1.0), &base, t).unwrap(), base.hazard(t).unwrap());
                }
            }
        }
    }

    #[test]
    fn alpha_within_eps_of_one_is_unit() {
        let base = BaselineSpec::exponential(2.0).unwrap();
        let near = a(1.0 + 5e-16);
        assert!(near.is_unit());
        assert_eq!(po_survival(near, &base, 0.7).unwrap(), base.survival(0.7).unwrap());
    }

    #[test]
    fn survival_at_reference_point() {
        let base = BaselineSpec::exponential(2.0).unwrap();
        let s = po_survival(a(2.2), &base, 0.2).unwrap();
        // 2.2 e^{-0.4} / (1 + 1.2 e^{-0.4}) evaluated independently.
        let e = (-0.4f64).exp();
        assert!((s - 2.2 * e / (1.0 + 1.2 * e)).abs() < 1e-15);
        assert!((s - 0.817289).abs() < 5e-7);
    }

    #[test]
    fn survival_is_one_at_origin() {
        for base in bases() {
            for alpha in [0.05, 0.5, 3.0, 40.0] {
                assert_eq!(po_survival(a(alpha), &base, 0.0).unwrap(), 1.0);
            }
        }
    }

    #[test]
    fn density_and_hazard_at_origin() {
        let base = BaselineSpec::exponential(1.0).unwrap();
        assert!((po_density(a(2.0), &base, 0.0).unwrap() - 0.5).abs() < 1e-15);
        let base = BaselineSpec::exponential(2.0).unwrap();
        assert!((po_hazard(a(2.0), &base, 0.0).unwrap() - 1.0).abs() < 1e-15);
        // hazard = density / survival
        for t in [0.0, 0.5, 2.0] {
            let h = po_hazard(a(2.0), &base, t).unwrap();
            let q = po_density(a(2.0), &base, t).unwrap() / po_survival(a(2.0), &base, t).unwrap();
            assert!(rel(h, q) < 1e-14);
        }
    }

    #[test]
    fn density_matches_finite_difference_at_origin() {
        let base = BaselineSpec::exponential(1.0).unwrap();
        let h = 1e-7;
        let fd = (po_survival(a(2.0), &base, 0.0).unwrap() - po_survival(a(2.0), &base, h).unwrap()) / h;
        assert!((fd - 0.5).abs() < 1e-6);
    }

    #[test]
    fn reversed_hazard_identity_on_grid() {
        for base in bases() {
            for alpha in [0.2, 0.5, 2.2, 5.0] {
                for i in 1..200 {
                    let t = i as f64 * 0.03;
                    let lhs = po_reversed_hazard(a(alpha), &base, t).unwrap();
                    let f = po_density(a(alpha), &base, t).unwrap();
                    let cdf = po_cdf(a(alpha), &base, t).unwrap();
                    assert!(rel(lhs, f / cdf) < 1e-10, "{base:?} α={alpha} t={t}");
                }
            }
        }
    }

    #[test]
    fn reversed_hazard_reference_value() {
        let base = BaselineSpec::exponential(2.0).unwrap();
        let rh = po_reversed_hazard(a(0.5), &base, 1.0).unwrap();
        let e = (-2.0f64).exp();
        let base_rh = 2.0 * e / (1.0 - e);
        assert!(rel(rh, 0.5 * base_rh / (1.0 - 0.5 * e)) < 1e-14);
    }

    #[test]
    fn odds_are_proportional() {
        for base in bases() {
            for alpha in [0.2, 3.0, 7.0] {
                for i in 1..100 {
                    let t = i as f64 * 0.05;
                    let r = po_odds(a(alpha), &base, t).unwrap() / po_odds(a(1.0), &base, t).unwrap();
                    assert!(rel(r, alpha) < 1e-12);
                }
            }
        }
        // θ = 1 at the median of the baseline
        let base = BaselineSpec::exponential(1.0).unwrap();
        let median = std::f64::consts::LN_2;
        assert!((po_odds(a(3.0), &base, median).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn domain_errors() {
        let base = BaselineSpec::exponential(1.0).unwrap();
        assert!(matches!(po_survival(a(2.0), &base, -1.0), Err(Error::Domain { .. })));
        assert!(matches!(po_density(a(2.0), &base, f64::NAN), Err(Error::Domain { .. })));
        assert!(matches!(
            po_reversed_hazard(a(2.0), &base, 0.0),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(po_odds(a(2.0), &base, 0.0), Err(Error::Domain { .. })));
        assert!(POParameter::new(0.0).is_err());
        assert!(POParameter::new(f64::INFINITY).is_err());
        assert!(BaselineSpec::weibull(0.0, 1.0).is_err());
        assert!(BaselineSpec::exponential(-2.0).is_err());
    }

    #[test]
    fn underflowed_survival_is_zero_and_hazard_is_a_range_error() {
        let base = BaselineSpec::exponential(1.0).unwrap();
        assert_eq!(po_survival(a(3.0), &base, 1000.0).unwrap(), 0.0);
        assert_eq!(
            po_hazard(a(3.0), &base, 1000.0),
            Err(Error::Range {
                what: "hazard",
                t: 1000.0
            })
        );
    }

    #[test]
    fn hazard_ratio_is_monotone_and_tends_to_one() {
        for base in bases() {
            for alpha in [0.2, 0.5, 2.2, 5.0] {
                let mut prev: Option<f64> = None;
                for i in 1..400 {
                    let t = i as f64 * 0.02 * base.time_scale();
                    let ratio = po_hazard(a(alpha), &base, t).unwrap() / base.hazard(t).unwrap();
                    if let Some(p) = prev {
                        if alpha > 1.0 {
                            assert!(ratio >= p - 1e-15);
                        } else {
                            assert!(ratio <= p + 1e-15);
                        }
                    }
                    prev = Some(ratio);
                }
                // far tail: F̄(t) < 1e-5
                let mut t = base.time_scale();
                while base.survival(t).unwrap() >= 1e-5 {
                    t *= 1.1;
                }
                let ratio = po_hazard(a(alpha), &base, t).unwrap() / base.hazard(t).unwrap();
                assert!((ratio - 1.0).abs() < 1e-4);
            }
        }
    }
}
