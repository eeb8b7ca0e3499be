//! The generation game on a finite atom set.
//!
//! The generator is a softmax over logits. Its payoff is the discriminator's
//! minimal risk, solved exactly at every evaluation, so the outer problem is
//!
//! ```text
//! sup_θ inf_h R(h; P_θ, P_r) = sup_θ −½ D_f(P_θ, P_r)
//! ```
//!
//! and ascent on the payoff drives `P_θ` toward `P_r`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::conjugacy::{f_from_loss, SolverConfig};
use crate::distribution::{total_variation, FiniteDistribution};
use crate::error::{Error, Result};
use crate::loss::PartialLoss;
use crate::risk::bayes_risk_with;

/// Unconstrained generator parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorParams {
    pub logits: Vec<f64>,
}

impl GeneratorParams {
    pub fn new(logits: Vec<f64>) -> Self {
        Self { logits }
    }

    /// Seeded standard-normal logits.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self {
            logits: (0..n).map(|_| StandardNormal.sample(&mut rng)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainerConfig {
    pub learning_rate: f64,
    pub max_iters: usize,
    /// Central-difference step on the logits.
    pub fd_step: f64,
    /// Training stops once `TV(P_g, P_r)` drops below this.
    pub stop_tv: f64,
    pub seed: u64,
    /// Step halvings tried before a decreasing step is accepted anyway.
    pub max_halvings: u32,
    /// Divide each gradient coordinate by the generator mass at that atom
    /// (the natural-gradient direction for the softmax parametrization).
    pub preconditioned: bool,
}

impl Default for TrainerConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.5,
            max_iters: 5000,
            fd_step: 1e-5,
            stop_tv: 1e-4,
            seed: 0,
            max_halvings: 30,
            preconditioned: true,
        }
    }
}

impl TrainerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0) || !(self.fd_step > 0.0) || !(self.stop_tv > 0.0) {
            return Err(Error::InvalidConfig(
                "learning_rate, fd_step and stop_tv must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub iter: usize,
    pub game_value: f64,
    pub tv_to_target: f64,
    /// `−2·game_value − f(1)`: the divergence with the normalized generator.
    pub divergence_estimate: f64,
    /// Halvings applied to the step that produced this record.
    pub halvings: u32,
    /// The step was accepted after exhausting all halvings.
    pub forced: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrainStatus {
    Converged,
    MaxIters,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingTrace {
    pub records: Vec<TraceRecord>,
    pub status: TrainStatus,
}

impl TrainingTrace {
    pub fn last(&self) -> &TraceRecord {
        self.records.last().expect("trace always holds the initial record")
    }

    /// CSV with columns `iter,game_value,tv,divergence`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iter,game_value,tv,divergence\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{:e},{:e},{:e}\n",
                r.iter, r.game_value, r.tv_to_target, r.divergence_estimate
            ));
        }
        out
    }
}

/// Training aborted on a non-finite value; carries the trace so far.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainError {
    pub error: Error,
    pub params: GeneratorParams,
    pub trace: TrainingTrace,
}

impl std::fmt::Display for TrainError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "training aborted after {} records: {}",
            self.trace.records.len(),
            self.error
        )
    }
}

impl std::error::Error for TrainError {}

/// Softmax of the logits.
pub fn generator_distribution(theta: &GeneratorParams) -> Result<FiniteDistribution> {
    let max = theta.logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return Err(Error::NonFinite("generator logits".into()));
    }
    FiniteDistribution::new(theta.logits.iter().map(|&l| (l - max).exp()).collect())
}

/// The discriminator's minimal risk against the generator's distribution.
pub fn game_value(loss: &PartialLoss, theta: &GeneratorParams, pr: &FiniteDistribution) -> Result<f64> {
    let pg = generator_distribution(theta)?;
    let (value, _) = bayes_risk_with(loss, &pg, pr, &SolverConfig::default())?;
    Ok(value)
}

/// Central-difference gradient of [`game_value`] with respect to the logits.
pub fn game_gradient(
    loss: &PartialLoss,
    theta: &GeneratorParams,
    pr: &FiniteDistribution,
    cfg: &TrainerConfig,
) -> Result<Vec<f64>> {
    let h = cfg.fd_step;
    let mut probe = theta.clone();
    let mut grad = Vec::with_capacity(theta.logits.len());
    for i in 0..theta.logits.len() {
        let base = theta.logits[i];
        probe.logits[i] = base + h;
        let up = game_value(loss, &probe, pr)?;
        probe.logits[i] = base - h;
        let down = game_value(loss, &probe, pr)?;
        probe.logits[i] = base;
        grad.push((up - down) / (2.0 * h));
    }
    Ok(grad)
}

/// Forward-difference gradient, used to cross-check [`game_gradient`].
pub fn game_gradient_forward(
    loss: &PartialLoss,
    theta: &GeneratorParams,
    pr: &FiniteDistribution,
    step: f64,
) -> Result<Vec<f64>> {
    let base = game_value(loss, theta, pr)?;
    let mut probe = theta.clone();
    let mut grad = Vec::with_capacity(theta.logits.len());
    for i in 0..theta.logits.len() {
        probe.logits[i] += step;
        grad.push((game_value(loss, &probe, pr)? - base) / step);
        probe.logits[i] = theta.logits[i];
    }
    Ok(grad)
}

struct Snapshot {
    value: f64,
    tv: f64,
}

fn evaluate(loss: &PartialLoss, theta: &GeneratorParams, pr: &FiniteDistribution) -> Result<Snapshot> {
    let pg = generator_distribution(theta)?;
    let (value, _) = bayes_risk_with(loss, &pg, pr, &SolverConfig::default())?;
    if !value.is_finite() {
        return Err(Error::NonFinite(format!("game value {value}")));
    }
    Ok(Snapshot {
        value,
        tv: total_variation(&pg, pr)?,
    })
}

/// Gradient ascent on the game value from seeded random logits, with step
/// halving whenever a step would lower the value.
pub fn train(
    loss: &PartialLoss,
    pr: &FiniteDistribution,
    cfg: &TrainerConfig,
) -> std::result::Result<(GeneratorParams, TrainingTrace), TrainError> {
    let mut theta = GeneratorParams::random(pr.len(), cfg.seed);
    let mut records = Vec::new();
    let fail = |error: Error, theta: &GeneratorParams, records: &[TraceRecord]| TrainError {
        error,
        params: theta.clone(),
        trace: TrainingTrace {
            records: records.to_vec(),
            status: TrainStatus::MaxIters,
        },
    };

    if let Err(e) = cfg.validate() {
        return Err(fail(e, &theta, &records));
    }
    if pr.len() < 2 || !pr.has_full_support() {
        return Err(fail(
            Error::InvalidConfig("target needs at least 2 atoms and full support".into()),
            &theta,
            &records,
        ));
    }
    let f_at_one = match f_from_loss(loss, 1.0, &SolverConfig::default()) {
        Ok(v) => v,
        Err(e) => return Err(fail(e, &theta, &records)),
    };
    let record = |iter: usize, snap: &Snapshot, halvings: u32, forced: bool| TraceRecord {
        iter,
        game_value: snap.value,
        tv_to_target: snap.tv,
        divergence_estimate: -2.0 * snap.value - f_at_one,
        halvings,
        forced,
    };

    let mut current = match evaluate(loss, &theta, pr) {
        Ok(s) => s,
        Err(e) => return Err(fail(e, &theta, &records)),
    };
    records.push(record(0, &current, 0, false));

    let mut status = TrainStatus::MaxIters;
    for iter in 1..=cfg.max_iters {
        if current.tv <= cfg.stop_tv {
            status = TrainStatus::Converged;
            break;
        }
        let mut grad = match game_gradient(loss, &theta, pr, cfg) {
            Ok(g) => g,
            Err(e) => return Err(fail(e, &theta, &records)),
        };
        if cfg.preconditioned {
            let pg = match generator_distribution(&theta) {
                Ok(p) => p,
                Err(e) => return Err(fail(e, &theta, &records)),
            };
            for (g, &p) in grad.iter_mut().zip(pg.probs()) {
                *g /= p;
            }
        }
        let mut step = cfg.learning_rate;
        let mut halvings = 0;
        let (next_theta, next, forced) = loop {
            let candidate = GeneratorParams::new(theta.logits.iter().zip(&grad).map(|(&l, &g)| l + step * g).collect());
            let snap = match evaluate(loss, &candidate, pr) {
                Ok(s) => s,
                Err(e) => return Err(fail(e, &theta, &records)),
            };
            if snap.value >= current.value {
                break (candidate, snap, false);
            }
            if halvings == cfg.max_halvings {
                break (candidate, snap, true);
            }
            step *= 0.5;
            halvings += 1;
        };
        theta = next_theta;
        current = next;
        records.push(record(iter, &current, halvings, forced));
    }
    if status == TrainStatus::MaxIters && current.tv <= cfg.stop_tv {
        status = TrainStatus::Converged;
    }
    Ok((theta, TrainingTrace { records, status }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;

    #[test]
    fn generator_distribution_examples() {
        let u = generator_distribution(&GeneratorParams::new(vec![0.3; 4])).unwrap();
        for &p in u.probs() {
            assert_abs_diff_eq!(p, 0.25, epsilon = 1e-15);
        }
        let p = generator_distribution(&GeneratorParams::new(vec![LN_2, 0.0])).unwrap();
        assert_abs_diff_eq!(p.probs()[0], 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.probs()[1], 1.0 / 3.0, epsilon = 1e-15);
        let theta = GeneratorParams::random(5, 1);
        let shifted = GeneratorParams::new(theta.logits.iter().map(|l| l + 7.0).collect());
        let a = generator_distribution(&theta).unwrap();
        let b = generator_distribution(&shifted).unwrap();
        for (x, y) in a.probs().iter().zip(b.probs()) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-15);
        }
    }

    #[test]
    fn game_value_examples() {
        let pr = FiniteDistribution::new(vec![0.7, 0.3]).unwrap();
        let matched = GeneratorParams::new(pr.probs().iter().map(|p| p.ln()).collect());
        assert_abs_diff_eq!(
            game_value(&PartialLoss::log(), &matched, &pr).unwrap(),
            LN_2,
            epsilon = 1e-15
        );
        let theta = GeneratorParams::new(vec![0.4f64.ln(), 0.6f64.ln()]);
        assert_abs_diff_eq!(
            game_value(&PartialLoss::zero_one(), &theta, &pr).unwrap(),
            0.35,
            epsilon = 1e-15
        );
    }

    #[test]
    fn gradient_vanishes_at_target_for_smooth_losses() {
        let pr = FiniteDistribution::new(vec![0.5, 0.3, 0.2]).unwrap();
        let theta = GeneratorParams::new(pr.probs().iter().map(|p| p.ln()).collect());
        let cfg = TrainerConfig::default();
        for loss in [
            PartialLoss::log(),
            PartialLoss::square(),
            PartialLoss::exponential(),
            PartialLoss::boosting(),
        ] {
            let g = game_gradient(&loss, &theta, &pr, &cfg).unwrap();
            let norm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!(norm <= 1e-4, "{loss}: {norm}");
        }
    }

    #[test]
    fn gradient_components_sum_to_zero() {
        let pr = FiniteDistribution::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let theta = GeneratorParams::random(4, 3);
        let g = game_gradient(&PartialLoss::square(), &theta, &pr, &TrainerConfig::default()).unwrap();
        assert!(g.iter().sum::<f64>().abs() <= 1e-6);
    }

    #[test]
    fn ascent_step_reduces_tv_near_optimum() {
        let pr = FiniteDistribution::new(vec![0.5, 0.3, 0.2]).unwrap();
        let mut logits: Vec<f64> = pr.probs().iter().map(|p| p.ln()).collect();
        logits[0] += 0.2;
        let theta = GeneratorParams::new(logits);
        let cfg = TrainerConfig::default();
        let loss = PartialLoss::log();
        let g = game_gradient(&loss, &theta, &pr, &cfg).unwrap();
        let stepped = GeneratorParams::new(theta.logits.iter().zip(&g).map(|(l, d)| l + 0.5 * d).collect());
        let before = total_variation(&generator_distribution(&theta).unwrap(), &pr).unwrap();
        let after = total_variation(&generator_distribution(&stepped).unwrap(), &pr).unwrap();
        assert!(after < before);
    }

    #[test]
    fn exponential_example_converges() {
        let pr = FiniteDistribution::new(vec![0.7, 0.2, 0.1]).unwrap();
        let (_, trace) = train(&PartialLoss::exponential(), &pr, &TrainerConfig::default()).unwrap();
        assert_eq!(trace.status, TrainStatus::Converged);
        assert!((trace.last().game_value - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn trace_is_well_formed() {
        let pr = FiniteDistribution::new(vec![0.25, 0.25, 0.5]).unwrap();
        let cfg = TrainerConfig {
            max_iters: 50,
            ..Default::default()
        };
        let (_, trace) = train(&PartialLoss::square(), &pr, &cfg).unwrap();
        assert!(trace.records.windows(2).all(|w| w[1].iter == w[0].iter + 1));
        assert!(trace.records.iter().all(|r| r.tv_to_target >= 0.0));
        let csv = trace.to_csv();
        assert!(csv.starts_with("iter,game_value,tv,divergence\n"));
        assert_eq!(csv.lines().count(), trace.records.len() + 1);
    }

    #[test]
    fn rejects_degenerate_targets() {
        let pr = FiniteDistribution::new(vec![1.0]).unwrap();
        assert!(train(&PartialLoss::log(), &pr, &TrainerConfig::default()).is_err());
        let pr = FiniteDistribution::new(vec![1.0, 0.0]).unwrap();
        assert!(train(&PartialLoss::log(), &pr, &TrainerConfig::default()).is_err());
    }
}
