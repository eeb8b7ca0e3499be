//! Two-class losses written through their partial losses.
//!
//! A loss is the pair `(ℓ₊, ℓ₋)`: `ℓ₊(g)` is paid when the true label is
//! `+1` and the prediction is `g`, `ℓ₋(g)` when the true label is `−1`.
//! The catalog covers six families, each with closed forms for the
//! pointwise minimizer `h*(s)` and for the tabulated generator `f(s)`.
//!
//! | loss | `ℓ±(g)` | domain | `h*(s)` | tabulated `f(s)` |
//! |------|---------|--------|---------|------------------|
//! | zero_one | `½(1∓g)` | `[−1, 1]` | `sgn(1−s)` | `½|s−1|` |
//! | log | `ln(2/(1±g))` | `(−1, 1)` | `(1−s)/(1+s)` | `−ln(1+s) − s·ln((1+s)/s)` |
//! | square | `(1∓g)²` | `ℝ` | `(1−s)/(1+s)` | `−s/(1+s) + ½` |
//! | cw:c | `(1−c)(1−g)`, `c(1+g)` | `[−1, 1]` | `sgn(1−c−cs)` | `|1−c−cs| − cs + c − |1−2c|` |
//! | exponential | `exp(∓g)` | `ℝ` | `−½ ln s` | `−2√s + 2` |
//! | boosting | `√((1∓g)/(1±g))` | `(−1, 1)` | `(1−s)/(1+s)` | `−2√s + 2` |
//!
//! The zero_one minimizer is `sgn(1−s)`: at `s < 1` the positive label is
//! cheaper. Some references tabulate `sgn(s−1)`, which is the maximizer.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Catalog tag of a loss.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LossName {
    ZeroOne,
    Log,
    Square,
    CostWeighted,
    Exponential,
    Boosting,
    Custom,
}

impl LossName {
    pub const CATALOG: [LossName; 6] = [
        LossName::ZeroOne,
        LossName::Log,
        LossName::Square,
        LossName::CostWeighted,
        LossName::Exponential,
        LossName::Boosting,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LossName::ZeroOne => "zero_one",
            LossName::Log => "log",
            LossName::Square => "square",
            LossName::CostWeighted => "cost_weighted",
            LossName::Exponential => "exponential",
            LossName::Boosting => "boosting",
            LossName::Custom => "custom",
        }
    }

    /// Smooth losses have a differentiable generator and interior minimizers.
    pub fn is_smooth(self) -> bool {
        matches!(
            self,
            LossName::Log | LossName::Square | LossName::Exponential | LossName::Boosting
        )
    }
}

impl fmt::Display for LossName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LossName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero_one" => Ok(LossName::ZeroOne),
            "log" => Ok(LossName::Log),
            "square" => Ok(LossName::Square),
            "cost_weighted" | "cw" => Ok(LossName::CostWeighted),
            "exponential" => Ok(LossName::Exponential),
            "boosting" => Ok(LossName::Boosting),
            other => Err(Error::UnknownLoss(other.to_string())),
        }
    }
}

/// Interval of admissible predictions. Endpoints may be infinite, in which
/// case they are always open.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictionDomain {
    pub lo: f64,
    pub hi: f64,
    pub lo_open: bool,
    pub hi_open: bool,
}

impl PredictionDomain {
    pub fn closed(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            lo_open: lo.is_infinite(),
            hi_open: hi.is_infinite(),
        }
    }

    pub fn open(lo: f64, hi: f64) -> Self {
        Self {
            lo,
            hi,
            lo_open: true,
            hi_open: true,
        }
    }

    pub fn real_line() -> Self {
        Self::open(f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn contains(&self, g: f64) -> bool {
        if g.is_nan() {
            return false;
        }
        let above = if self.lo_open { g > self.lo } else { g >= self.lo };
        let below = if self.hi_open { g < self.hi } else { g <= self.hi };
        above && below
    }

    /// Finite interval searched numerically. Infinite endpoints are replaced
    /// by `±truncation`; open finite endpoints are pulled inward by `eps`.
    pub fn search_interval(&self, truncation: f64, eps: f64) -> (f64, f64) {
        let lo = if self.lo.is_infinite() {
            -truncation
        } else if self.lo_open {
            self.lo + eps
        } else {
            self.lo
        };
        let hi = if self.hi.is_infinite() {
            truncation
        } else if self.hi_open {
            self.hi - eps
        } else {
            self.hi
        };
        (lo, hi)
    }

    /// Tie-breaking prediction: the midpoint of a bounded domain, zero otherwise.
    pub fn midpoint(&self) -> f64 {
        if self.lo.is_finite() && self.hi.is_finite() {
            0.5 * (self.lo + self.hi)
        } else {
            0.0
        }
    }
}

impl fmt::Display for PredictionDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_open { '(' } else { '[' };
        let r = if self.hi_open { ')' } else { ']' };
        write!(f, "{l}{}, {}{r}", self.lo, self.hi)
    }
}

pub type PartialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
struct CustomPartials {
    label: String,
    plus: PartialFn,
    minus: PartialFn,
    convex: bool,
}

/// A two-class loss given by its partial losses.
#[derive(Clone)]
pub struct PartialLoss {
    name: LossName,
    cost_param: Option<f64>,
    domain: PredictionDomain,
    custom: Option<CustomPartials>,
    swapped: bool,
}

impl fmt::Debug for PartialLoss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PartialLoss")
            .field("name", &self.name)
            .field("cost_param", &self.cost_param)
            .field("domain", &self.domain)
            .field("swapped", &self.swapped)
            .finish()
    }
}

impl PartialLoss {
    /// Builds a catalog loss. `cost_param` must be given for, and only for,
    /// the cost-weighted loss.
    pub fn catalog(name: LossName, cost_param: Option<f64>) -> Result<Self> {
        let domain = match name {
            LossName::ZeroOne | LossName::CostWeighted => PredictionDomain::closed(-1.0, 1.0),
            LossName::Log | LossName::Boosting => PredictionDomain::open(-1.0, 1.0),
            LossName::Square | LossName::Exponential => PredictionDomain::real_line(),
            LossName::Custom => return Err(Error::UnknownLoss("custom".into())),
        };
        match (name, cost_param) {
            (LossName::CostWeighted, None) => return Err(Error::MissingCostParam),
            (LossName::CostWeighted, Some(c)) if !(c > 0.0 && c < 1.0) => return Err(Error::CostParamOutOfRange(c)),
            (LossName::CostWeighted, Some(_)) => {}
            (_, Some(_)) => return Err(Error::UnexpectedCostParam),
            (_, None) => {}
        }
        Ok(Self {
            name,
            cost_param,
            domain,
            custom: None,
            swapped: false,
        })
    }

    pub fn zero_one() -> Self {
        Self::catalog(LossName::ZeroOne, None).unwrap()
    }

    pub fn log() -> Self {
        Self::catalog(LossName::Log, None).unwrap()
    }

    pub fn square() -> Self {
        Self::catalog(LossName::Square, None).unwrap()
    }

    pub fn cost_weighted(c: f64) -> Result<Self> {
        Self::catalog(LossName::CostWeighted, Some(c))
    }

    pub fn exponential() -> Self {
        Self::catalog(LossName::Exponential, None).unwrap()
    }

    pub fn boosting() -> Self {
        Self::catalog(LossName::Boosting, None).unwrap()
    }

    /// User-supplied loss. The caller declares the domain and whether the
    /// pointwise weighted loss is convex in the prediction.
    pub fn custom<P, M>(label: impl Into<String>, domain: PredictionDomain, plus: P, minus: M, convex: bool) -> Self
    where
        P: Fn(f64) -> f64 + Send + Sync + 'static,
        M: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: LossName::Custom,
            cost_param: None,
            domain,
            custom: Some(CustomPartials {
                label: label.into(),
                plus: Arc::new(plus),
                minus: Arc::new(minus),
                convex,
            }),
            swapped: false,
        }
    }

    /// The loss with partial losses exchanged, `(ℓ₋, ℓ₊)`. Closed forms are
    /// dropped so the swapped loss always goes through numerical search.
    pub fn swapped(&self) -> Self {
        let mut out = self.clone();
        out.swapped = !self.swapped;
        out
    }

    pub fn name(&self) -> LossName {
        self.name
    }

    pub fn cost_param(&self) -> Option<f64> {
        self.cost_param
    }

    pub fn domain(&self) -> PredictionDomain {
        self.domain
    }

    pub fn is_swapped(&self) -> bool {
        self.swapped
    }

    pub fn has_closed_forms(&self) -> bool {
        self.custom.is_none() && !self.swapped
    }

    pub fn is_convex(&self) -> bool {
        self.custom.as_ref().is_none_or(|c| c.convex)
    }

    /// `ℓ₊(g) = ℓ₋(−g)` holds for every catalog loss except cost-weighted
    /// with `c ≠ ½`.
    pub fn is_symmetric(&self) -> bool {
        match self.name {
            LossName::Custom => false,
            LossName::CostWeighted => self.cost_param == Some(0.5),
            _ => true,
        }
    }

    fn raw_plus(&self, g: f64) -> f64 {
        if let Some(c) = &self.custom {
            return (c.plus)(g);
        }
        match self.name {
            LossName::ZeroOne => 0.5 * (1.0 - g),
            LossName::Log => (2.0 / (1.0 + g)).ln(),
            LossName::Square => (1.0 - g).powi(2),
            LossName::CostWeighted => (1.0 - self.cost_param.unwrap()) * (1.0 - g),
            LossName::Exponential => (-g).exp(),
            LossName::Boosting => ((1.0 - g) / (1.0 + g)).sqrt(),
            LossName::Custom => unreachable!(),
        }
    }

    fn raw_minus(&self, g: f64) -> f64 {
        if let Some(c) = &self.custom {
            return (c.minus)(g);
        }
        match self.name {
            LossName::ZeroOne => 0.5 * (1.0 + g),
            LossName::Log => (2.0 / (1.0 - g)).ln(),
            LossName::Square => (1.0 + g).powi(2),
            LossName::CostWeighted => self.cost_param.unwrap() * (1.0 + g),
            LossName::Exponential => g.exp(),
            LossName::Boosting => ((1.0 + g) / (1.0 - g)).sqrt(),
            LossName::Custom => unreachable!(),
        }
    }

    /// `ℓ₊(g)`, unchecked.
    pub fn plus(&self, g: f64) -> f64 {
        if self.swapped {
            self.raw_minus(g)
        } else {
            self.raw_plus(g)
        }
    }

    /// `ℓ₋(g)`, unchecked.
    pub fn minus(&self, g: f64) -> f64 {
        if self.swapped {
            self.raw_plus(g)
        } else {
            self.raw_minus(g)
        }
    }

    pub fn check_prediction(&self, g: f64) -> Result<()> {
        if self.domain.contains(g) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                value: g,
                domain: self.domain.to_string(),
            })
        }
    }

    /// `ℓ₊(g) + s·ℓ₋(g)` without domain checks. The second term is dropped
    /// at `s = 0` so limit predictions (where `ℓ₋` may be infinite) are usable.
    pub(crate) fn weighted_unchecked(&self, g: f64, s: f64) -> f64 {
        let plus = self.plus(g);
        if s == 0.0 {
            plus
        } else {
            plus + s * self.minus(g)
        }
    }

    /// Pointwise weighted loss `ℓ₊(g) + s·ℓ₋(g)`.
    pub fn pointwise_weighted_loss(&self, g: f64, s: f64) -> Result<f64> {
        self.check_prediction(g)?;
        check_ratio(s)?;
        Ok(self.weighted_unchecked(g, s))
    }

    fn require_closed_forms(&self) -> Result<()> {
        if self.has_closed_forms() {
            Ok(())
        } else {
            Err(Error::NoClosedForm(self.to_string()))
        }
    }

    /// Closed-form minimizer `h*(s)` of the pointwise weighted loss.
    ///
    /// At `s = 0` this is the limit toward the positive end of the domain
    /// (`+∞` for the exponential loss). Exact ties resolve to the domain
    /// midpoint.
    pub fn closed_form_minimizer(&self, s: f64) -> Result<f64> {
        self.require_closed_forms()?;
        check_ratio(s)?;
        let rational = (1.0 - s) / (1.0 + s);
        Ok(match self.name {
            LossName::ZeroOne => sign(1.0 - s),
            LossName::Log | LossName::Square | LossName::Boosting => rational,
            LossName::CostWeighted => {
                let c = self.cost_param.unwrap();
                sign(1.0 - c - c * s)
            }
            LossName::Exponential => {
                if s == 0.0 {
                    f64::INFINITY
                } else {
                    -0.5 * s.ln()
                }
            }
            LossName::Custom => unreachable!(),
        })
    }

    /// The tabulated generator `f(s)` for this catalog loss, as printed in the
    /// usual loss/divergence correspondence tables (not normalized).
    pub fn table_f(&self, s: f64) -> Result<f64> {
        self.require_closed_forms()?;
        check_ratio(s)?;
        Ok(match self.name {
            LossName::ZeroOne => 0.5 * (s - 1.0).abs(),
            LossName::Log => {
                if s == 0.0 {
                    0.0
                } else {
                    -(1.0 + s).ln() - s * ((1.0 + s) / s).ln()
                }
            }
            LossName::Square => -s / (1.0 + s) + 0.5,
            LossName::CostWeighted => {
                let c = self.cost_param.unwrap();
                (1.0 - c - c * s).abs() - c * s + c - (1.0 - 2.0 * c).abs()
            }
            LossName::Exponential | LossName::Boosting => -2.0 * s.sqrt() + 2.0,
            LossName::Custom => unreachable!(),
        })
    }
}

impl fmt::Display for PartialLoss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.swapped {
            f.write_str("swapped:")?;
        }
        match (&self.custom, self.name) {
            (Some(c), _) => write!(f, "custom:{}", c.label),
            (None, LossName::CostWeighted) => write!(f, "cw:{}", self.cost_param.unwrap()),
            (None, name) => f.write_str(name.as_str()),
        }
    }
}

/// Parses the CLI loss syntax: `zero_one | log | square | cw:<c> | exponential | boosting`.
impl FromStr for PartialLoss {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        match spec.split_once(':') {
            Some((head, param)) => {
                let name: LossName = head.parse()?;
                if name != LossName::CostWeighted {
                    return Err(Error::UnexpectedCostParam);
                }
                let c: f64 = param.trim().parse().map_err(|_| Error::UnknownLoss(spec.to_string()))?;
                Self::catalog(name, Some(c))
            }
            None => {
                let name: LossName = spec.parse()?;
                Self::catalog(name, None)
            }
        }
    }
}

pub(crate) fn check_ratio(s: f64) -> Result<()> {
    if s.is_finite() && s >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidRatio(s))
    }
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search;
    use approx::assert_abs_diff_eq;

    fn catalog() -> Vec<PartialLoss> {
        vec![
            PartialLoss::zero_one(),
            PartialLoss::log(),
            PartialLoss::square(),
            PartialLoss::cost_weighted(0.3).unwrap(),
            PartialLoss::cost_weighted(0.5).unwrap(),
            PartialLoss::exponential(),
            PartialLoss::boosting(),
        ]
    }

    fn domain_grid(loss: &PartialLoss, n: usize) -> Vec<f64> {
        let (lo, hi) = loss.domain().search_interval(5.0, 1e-6);
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn make_loss_partials() {
        let z = PartialLoss::zero_one();
        assert_eq!(z.plus(0.2), 0.4);
        assert_eq!(z.minus(0.2), 0.6);
        let e = PartialLoss::exponential();
        assert_eq!(e.plus(1.5), (-1.5f64).exp());
        assert_eq!(e.minus(1.5), 1.5f64.exp());
    }

    #[test]
    fn make_loss_errors() {
        assert_eq!(
            PartialLoss::catalog(LossName::CostWeighted, Some(1.0)).unwrap_err(),
            Error::CostParamOutOfRange(1.0)
        );
        assert_eq!(
            PartialLoss::catalog(LossName::Log, Some(0.3)).unwrap_err(),
            Error::UnexpectedCostParam
        );
        assert_eq!(
            PartialLoss::catalog(LossName::CostWeighted, None).unwrap_err(),
            Error::MissingCostParam
        );
        assert!(matches!("hinge".parse::<PartialLoss>(), Err(Error::UnknownLoss(_))));
        assert!(matches!(
            "log:0.2".parse::<PartialLoss>(),
            Err(Error::UnexpectedCostParam)
        ));
        assert!("cw:0".parse::<PartialLoss>().is_err());
    }

    #[test]
    fn parse_round_trips_through_display() {
        for spec in ["zero_one", "log", "square", "cw:0.3", "exponential", "boosting"] {
            let loss: PartialLoss = spec.parse().unwrap();
            assert_eq!(loss.to_string(), spec);
        }
    }

    #[test]
    fn cost_weighted_half_is_scaled_zero_one() {
        // At c = 1/2 the partials coincide with zero_one's.
        let cw = PartialLoss::cost_weighted(0.5).unwrap();
        let z = PartialLoss::zero_one();
        for s in [0.1, 0.5, 0.9, 1.7, 4.0] {
            for i in 0..=40 {
                let g = -1.0 + i as f64 / 20.0;
                let a = cw.pointwise_weighted_loss(g, s).unwrap();
                let b = z.pointwise_weighted_loss(g, s).unwrap();
                assert_abs_diff_eq!(a, b, epsilon = 1e-14);
            }
            assert_eq!(
                cw.closed_form_minimizer(s).unwrap(),
                z.closed_form_minimizer(s).unwrap()
            );
        }
    }

    #[test]
    fn pointwise_examples() {
        assert_eq!(PartialLoss::zero_one().pointwise_weighted_loss(1.0, 2.0).unwrap(), 2.0);
        assert_abs_diff_eq!(
            PartialLoss::log().pointwise_weighted_loss(0.0, 1.0).unwrap(),
            2.0 * 2f64.ln(),
            epsilon = 1e-15
        );
        for loss in catalog() {
            assert_eq!(loss.pointwise_weighted_loss(0.25, 0.0).unwrap(), loss.plus(0.25));
        }
    }

    #[test]
    fn pointwise_rejects_out_of_domain() {
        assert!(matches!(
            PartialLoss::log().pointwise_weighted_loss(1.0, 1.0),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(PartialLoss::zero_one().pointwise_weighted_loss(1.0, 1.0).is_ok());
        assert!(PartialLoss::zero_one().pointwise_weighted_loss(1.01, 1.0).is_err());
        assert!(PartialLoss::square().pointwise_weighted_loss(1e6, 1.0).is_ok());
        assert!(matches!(
            PartialLoss::square().pointwise_weighted_loss(0.0, -1.0),
            Err(Error::InvalidRatio(_))
        ));
    }

    #[test]
    fn closed_form_examples() {
        assert_abs_diff_eq!(
            PartialLoss::exponential().closed_form_minimizer(4.0).unwrap(),
            -0.5 * 4f64.ln(),
            epsilon = 1e-15
        );
        assert_eq!(PartialLoss::log().closed_form_minimizer(1.0).unwrap(), 0.0);
        assert_eq!(PartialLoss::zero_one().closed_form_minimizer(0.5).unwrap(), 1.0);
        assert_eq!(PartialLoss::zero_one().closed_form_minimizer(1.0).unwrap(), 0.0);
        for loss in catalog() {
            assert!(loss.closed_form_minimizer(0.0).unwrap() > 0.0);
        }
    }

    #[test]
    fn custom_has_no_closed_forms() {
        let l = PartialLoss::custom(
            "hinge",
            PredictionDomain::closed(-1.0, 1.0),
            |g| 1.0 - g,
            |g| 1.0 + g,
            true,
        );
        assert!(matches!(l.closed_form_minimizer(1.0), Err(Error::NoClosedForm(_))));
        assert!(matches!(l.table_f(1.0), Err(Error::NoClosedForm(_))));
        assert!(PartialLoss::log().swapped().closed_form_minimizer(1.0).is_err());
    }

    #[test]
    fn table_f_examples() {
        assert_eq!(PartialLoss::zero_one().table_f(2.0).unwrap(), 0.5);
        assert_eq!(PartialLoss::exponential().table_f(1.0).unwrap(), 0.0);
        assert_eq!(PartialLoss::square().table_f(1.0).unwrap(), 0.0);
    }

    #[test]
    fn table_f_vanishes_at_one_except_log() {
        for loss in catalog() {
            let v = loss.table_f(1.0).unwrap();
            if loss.name() == LossName::Log {
                assert_abs_diff_eq!(v, -2.0 * 2f64.ln(), epsilon = 1e-15);
            } else {
                assert_abs_diff_eq!(v, 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn symmetric_partials() {
        for loss in catalog() {
            let grid = domain_grid(&loss, 101);
            let symmetric = grid.iter().all(|&g| (loss.plus(g) - loss.minus(-g)).abs() <= 1e-12);
            assert_eq!(symmetric, loss.is_symmetric(), "{loss}");
        }
    }

    #[test]
    fn closed_form_matches_numeric_argmin() {
        for loss in catalog() {
            let (lo, hi) = loss.domain().search_interval(50.0, 1e-12);
            for s in [0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 10.0] {
                let closed = loss.closed_form_minimizer(s).unwrap();
                let opt = search::minimize(|g| loss.weighted_unchecked(g, s), lo, hi, 257, 1e-10, 80);
                let closed_value = loss.weighted_unchecked(closed, s);
                // Ties (zero_one at s = 1) only pin the value, not the argmin.
                assert!((opt.value - closed_value).abs() <= 1e-9, "{loss} s={s}");
                let tie = matches!(loss.name(), LossName::ZeroOne | LossName::CostWeighted)
                    && loss.weighted_unchecked(-1.0, s) == loss.weighted_unchecked(1.0, s);
                if !tie {
                    assert!(
                        (opt.arg - closed).abs() <= 1e-6,
                        "{loss} s={s}: {} vs {closed}",
                        opt.arg
                    );
                }
            }
        }
    }

    #[test]
    fn smooth_pointwise_losses_are_midpoint_convex() {
        for loss in [
            PartialLoss::log(),
            PartialLoss::square(),
            PartialLoss::exponential(),
            PartialLoss::boosting(),
        ] {
            let grid = domain_grid(&loss, 101);
            for s in [0.1, 1.0, 7.0] {
                for w in grid.windows(3) {
                    let mid = loss.weighted_unchecked(w[1], s);
                    let avg = 0.5 * (loss.weighted_unchecked(w[0], s) + loss.weighted_unchecked(w[2], s));
                    assert!(mid <= avg + 1e-10, "{loss} s={s} g={}", w[1]);
                }
            }
        }
    }

    #[test]
    fn domains() {
        assert!(PartialLoss::zero_one().domain().contains(-1.0));
        assert!(!PartialLoss::boosting().domain().contains(-1.0));
        assert!(PartialLoss::exponential().domain().contains(-1e9));
        assert_eq!(
            PartialLoss::log().domain().search_interval(50.0, 1e-12),
            (-1.0 + 1e-12, 1.0 - 1e-12)
        );
        assert_eq!(
            PartialLoss::square().domain().search_interval(50.0, 1e-12),
            (-50.0, 50.0)
        );
    }
}
