//! # lossdiv
//!
//! Binary classification losses viewed as f-divergences, computed exactly on
//! finite distributions.
//!
//! Feed a discriminator real samples `x ∼ P_r` labeled `+1` and generated
//! samples `x ∼ P_g` labeled `−1` in equal proportion. For any loss with
//! partial losses `ℓ₊, ℓ₋`, the best achievable risk is
//!
//! ```text
//! inf_h E ℓ(y, h(x)) = −½ D_f(P_g, P_r),   f(s) = sup_α (−ℓ₊(α) − s·ℓ₋(α))
//! ```
//!
//! and a restricted model class only adds its excess risk on top. On a
//! finite atom set every quantity here is computed exactly (up to 1-D
//! search tolerance), so the identity can be checked to ~1e−12.
//!
//! | module | contents |
//! |--------|----------|
//! | [`loss`] | the six catalog losses, custom losses, closed forms |
//! | [`conjugacy`] | generated `f`, convex conjugates, scale/affine fits |
//! | [`distribution`] | finite distributions, `D_f`, named divergences |
//! | [`risk`] | risk, Bayes risk, model classes, the identity residual |
//! | [`variational`] | the conjugate lower bound and the swapped generator |
//! | [`trainer`] | the generation game with an exact inner discriminator |
//!
//! ```rust
//! use lossdiv::{bayes_risk, FiniteDistribution, PartialLoss};
//!
//! let pg = FiniteDistribution::new(vec![0.4, 0.6]).unwrap();
//! let pr = FiniteDistribution::new(vec![0.7, 0.3]).unwrap();
//! let (risk, h) = bayes_risk(&PartialLoss::zero_one(), &pg, &pr).unwrap();
//! assert!((risk - 0.35).abs() < 1e-15);
//! assert_eq!(h, vec![1.0, -1.0]);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conjugacy;
pub mod distribution;
mod error;
pub mod loss;
pub mod risk;
pub mod search;
pub mod trainer;
pub mod variational;

pub use conjugacy::{
    affine_normalize, check_convexity, convex_conjugate, f_from_loss, fit_scale_affine, GeneratedF, ScaleAffineFit,
    SolverConfig,
};
pub use distribution::{f_divergence, named_divergence, random_distribution, FiniteDistribution, NamedDivergence};
pub use error::{Error, Result};
pub use loss::{LossName, PartialLoss, PredictionDomain};
pub use risk::{bayes_risk, class_risk, identity_residual, risk_of, DiscriminatorClass, RiskReport};
pub use trainer::{train, GeneratorParams, TrainStatus, TrainerConfig, TrainingTrace};
pub use variational::{dual_generator_value, f_divergence_reversed, fgan_objective, optimal_witness, WitnessFunction};
