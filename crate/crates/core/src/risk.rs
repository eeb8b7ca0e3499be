//! Discriminator risk with equal class priors.
//!
//! With `P_r = P(x | y = +1)`, `P_g = P(x | y = −1)` and `p = ½`, the risk
//! of a prediction vector `h` is
//!
//! ```text
//! R(h) = ½ Σ_x [ P_r(x) ℓ₊(h(x)) + P_g(x) ℓ₋(h(x)) ]
//! ```
//!
//! The Bayes risk is minimized atom by atom: at each atom the best
//! prediction minimizes `ℓ₊(α) + s·ℓ₋(α)` with `s = P_g(x)/P_r(x)`, so
//! `inf_h R(h) = −½ D_f(P_g, P_r)` with `f` the generator of the loss.

use crate::conjugacy::{self, minimize_pointwise, SolverConfig, OPEN_DOMAIN_EPS};
use crate::distribution::{check_lengths, f_divergence, DensityRatio, FiniteDistribution};
use crate::error::{Error, Result};
use crate::loss::{LossName, PartialLoss};
use crate::search;

/// A model class of discriminators on the atoms.
#[derive(Debug, Clone, PartialEq)]
pub enum DiscriminatorClass {
    /// All prediction vectors.
    Unrestricted,
    /// One shared prediction at every atom.
    Constant,
    /// An explicit list of prediction vectors.
    FiniteCandidateSet(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiskReport {
    pub class_risk: f64,
    pub bayes_risk: f64,
    /// `class_risk − bayes_risk`, the excess risk of the class.
    pub excess: f64,
    pub argmin_h: Vec<f64>,
}

fn check_prediction_vector(loss: &PartialLoss, h: &[f64], n: usize) -> Result<()> {
    if h.len() != n {
        return Err(Error::LengthMismatch(h.len(), n));
    }
    h.iter().try_for_each(|&g| loss.check_prediction(g))
}

/// `½ Σ_x [P_r(x) ℓ₊(h(x)) + P_g(x) ℓ₋(h(x))]`.
pub fn risk_of(loss: &PartialLoss, h: &[f64], pg: &FiniteDistribution, pr: &FiniteDistribution) -> Result<f64> {
    check_lengths(pg, pr)?;
    check_prediction_vector(loss, h, pr.len())?;
    Ok(risk_unchecked(loss, h, pg, pr))
}

// Zero-mass terms are skipped so limit predictions stay usable.
fn risk_unchecked(loss: &PartialLoss, h: &[f64], pg: &FiniteDistribution, pr: &FiniteDistribution) -> f64 {
    let mut total = 0.0;
    for ((&g, &r), &q) in h.iter().zip(pr.probs()).zip(pg.probs()) {
        let plus = if r == 0.0 { 0.0 } else { r * loss.plus(g) };
        let minus = if q == 0.0 { 0.0 } else { q * loss.minus(g) };
        total += plus + minus;
    }
    0.5 * total
}

/// Minimal risk over all discriminators, and the minimizing prediction
/// vector (the Bayes discriminator).
pub fn bayes_risk(loss: &PartialLoss, pg: &FiniteDistribution, pr: &FiniteDistribution) -> Result<(f64, Vec<f64>)> {
    bayes_risk_with(loss, pg, pr, &SolverConfig::default())
}

pub fn bayes_risk_with(
    loss: &PartialLoss,
    pg: &FiniteDistribution,
    pr: &FiniteDistribution,
    cfg: &SolverConfig,
) -> Result<(f64, Vec<f64>)> {
    let ratio = DensityRatio::new(pg, pr)?;
    let h = ratio
        .values()
        .iter()
        .map(|&s| minimize_pointwise(loss, s, cfg).map(|(g, _)| g))
        .collect::<Result<Vec<_>>>()?;
    let risk = risk_unchecked(loss, &h, pg, pr);
    if !risk.is_finite() {
        return Err(Error::NonFinite(format!("Bayes risk of {loss}")));
    }
    Ok((risk, h))
}

/// Best risk within a model class, with its excess over the Bayes risk.
pub fn class_risk(
    loss: &PartialLoss,
    class: &DiscriminatorClass,
    pg: &FiniteDistribution,
    pr: &FiniteDistribution,
) -> Result<RiskReport> {
    class_risk_with(loss, class, pg, pr, &SolverConfig::default())
}

pub fn class_risk_with(
    loss: &PartialLoss,
    class: &DiscriminatorClass,
    pg: &FiniteDistribution,
    pr: &FiniteDistribution,
    cfg: &SolverConfig,
) -> Result<RiskReport> {
    let (bayes, bayes_h) = bayes_risk_with(loss, pg, pr, cfg)?;
    let (class_risk, argmin_h) = match class {
        DiscriminatorClass::Unrestricted => (bayes, bayes_h),
        DiscriminatorClass::Constant => {
            let n = pr.len();
            let (lo, hi) = loss.domain().search_interval(cfg.domain_truncation, OPEN_DOMAIN_EPS);
            let constant_risk = |g: f64| risk_unchecked(loss, &vec![g; n], pg, pr);
            // Exact ties (zero_one, cost-weighted with balanced risk) fall to the midpoint.
            let mid = loss.domain().midpoint();
            let opt = search::minimize(
                constant_risk,
                lo,
                hi,
                cfg.grid_points,
                cfg.abs_tolerance,
                cfg.max_refinements,
            );
            let g = if constant_risk(mid) <= opt.value { mid } else { opt.arg };
            (constant_risk(g), vec![g; n])
        }
        DiscriminatorClass::FiniteCandidateSet(candidates) => {
            if candidates.is_empty() {
                return Err(Error::EmptyCandidateSet);
            }
            let mut best: Option<(f64, &Vec<f64>)> = None;
            for h in candidates {
                let r = risk_of(loss, h, pg, pr)?;
                if best.is_none_or(|(b, _)| r < b) {
                    best = Some((r, h));
                }
            }
            let (r, h) = best.unwrap();
            (r, h.clone())
        }
    };
    Ok(RiskReport {
        class_risk,
        bayes_risk: bayes,
        excess: class_risk - bayes,
        argmin_h,
    })
}

/// Residual of `inf_h R(h) = −½ D_f(P_g, P_r)` for the unrestricted class:
/// `|bayes_risk + ½ D_f|` with `f` generated from the loss.
pub fn identity_residual(
    loss: &PartialLoss,
    pg: &FiniteDistribution,
    pr: &FiniteDistribution,
    cfg: &SolverConfig,
) -> Result<f64> {
    let (bayes, _) = bayes_risk_with(loss, pg, pr, cfg)?;
    let f = conjugacy::GeneratedF::from_loss(loss.clone(), *cfg);
    let div = f_divergence(&f, pg, pr)?;
    Ok((bayes + 0.5 * div).abs())
}

/// Name of the divergence a catalog loss induces, as used in reports.
pub fn divergence_name(loss: &PartialLoss) -> &'static str {
    match loss.name() {
        LossName::ZeroOne => "total_variation",
        LossName::Log => "jensen_shannon",
        LossName::Square => "triangular",
        LossName::Exponential | LossName::Boosting => "hellinger",
        LossName::CostWeighted | LossName::Custom => "-",
    }
}
