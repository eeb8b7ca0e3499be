//! Variational lower bound on the reversed-order divergence
//!
//! ```text
//! D_f(P_r, P_g) = Σ_x P_g(x) f(P_r(x)/P_g(x))
//!              ≥ Σ_x P_r(x) h(x) − Σ_x P_g(x) f*(h(x))
//! ```
//!
//! for every witness `h`, with equality at `h(x) ∈ ∂f(P_r(x)/P_g(x))`.
//! Also the swapped-partials generator `f̃(s) = sup_α (−ℓ₋(α) − s·ℓ₊(α))`,
//! which satisfies `D_f̃(P_r, P_g) = D_f(P_g, P_r)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conjugacy::{convex_conjugate, derivative, f_from_loss, GeneratedF, SolverConfig};
use crate::distribution::{check_lengths, FiniteDistribution};
use crate::error::{Error, Result};
use crate::loss::PartialLoss;

/// Witness values are confined to `[−WITNESS_RANGE, WITNESS_RANGE]`.
pub const WITNESS_RANGE: f64 = 1e4;

const DERIVATIVE_REL_STEP: f64 = 1e-6;
const MAX_WITNESS_DRAWS: usize = 1000;

/// One conjugate-space value per atom.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessFunction(pub Vec<f64>);

impl WitnessFunction {
    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

/// `Σ_x P_g(x) f(P_r(x)/P_g(x))`: the divergence with the generated
/// distribution as reference measure.
pub fn f_divergence_reversed(f: &GeneratedF, pr: &FiniteDistribution, pg: &FiniteDistribution) -> Result<f64> {
    check_lengths(pr, pg)?;
    let mut total = 0.0;
    for (i, (&r, &g)) in pr.probs().iter().zip(pg.probs()).enumerate() {
        if g <= 0.0 {
            return Err(Error::ZeroReferenceMass(i));
        }
        total += g * f.eval(r / g)?;
    }
    Ok(total)
}

/// `Σ P_r h − Σ P_g f*(h)`; `−∞` when some positive-mass atom has an
/// infinite conjugate.
pub fn fgan_objective(
    f: &GeneratedF,
    h: &WitnessFunction,
    pr: &FiniteDistribution,
    pg: &FiniteDistribution,
    cfg: &SolverConfig,
) -> Result<f64> {
    check_lengths(pr, pg)?;
    if h.0.len() != pr.len() {
        return Err(Error::LengthMismatch(h.0.len(), pr.len()));
    }
    let mut total = 0.0;
    for ((&t, &r), &g) in h.0.iter().zip(pr.probs()).zip(pg.probs()) {
        if !t.is_finite() {
            return Err(Error::NonFinite(format!("witness value {t}")));
        }
        total += r * t;
        if g > 0.0 {
            let conj = convex_conjugate(f, t, cfg)?;
            if conj == f64::INFINITY {
                return Ok(f64::NEG_INFINITY);
            }
            total -= g * conj;
        }
    }
    Ok(total)
}

/// The pointwise maximizer of the bound: a (sub)gradient of `f` at each
/// `u = P_r(x)/P_g(x)`, by central differences.
pub fn optimal_witness(f: &GeneratedF, pr: &FiniteDistribution, pg: &FiniteDistribution) -> Result<WitnessFunction> {
    check_lengths(pr, pg)?;
    let mut out = Vec::with_capacity(pr.len());
    for (i, (&r, &g)) in pr.probs().iter().zip(pg.probs()).enumerate() {
        if g <= 0.0 {
            return Err(Error::ZeroReferenceMass(i));
        }
        let u = r / g;
        let t = if u > 0.0 {
            derivative(f, u, DERIVATIVE_REL_STEP)?
        } else {
            // Right derivative at the boundary.
            let h = 1e-9;
            (f.eval(h)? - f.eval(0.0)?) / h
        };
        if !t.is_finite() {
            return Err(Error::NonFinite(format!("witness at atom {i}")));
        }
        out.push(t.clamp(-WITNESS_RANGE, WITNESS_RANGE));
    }
    Ok(WitnessFunction(out))
}

/// Random witness with a finite conjugate at every atom. Values are drawn
/// uniformly from `[−spread, spread]` and redrawn while the conjugate is
/// infinite.
pub fn random_witness(f: &GeneratedF, n: usize, spread: f64, seed: u64, cfg: &SolverConfig) -> Result<WitnessFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let mut found = None;
        for _ in 0..MAX_WITNESS_DRAWS {
            let t = rng.random_range(-spread..=spread);
            if convex_conjugate(f, t, cfg)?.is_finite() {
                found = Some(t);
                break;
            }
        }
        out.push(
            found.ok_or_else(|| {
                Error::NonFinite(format!("no finite-conjugate witness value found for {}", f.label()))
            })?,
        );
    }
    Ok(WitnessFunction(out))
}

/// `f̃(s) = sup_α (−ℓ₋(α) − s·ℓ₊(α))`, always by numerical search.
pub fn dual_generator_value(loss: &PartialLoss, s: f64, cfg: &SolverConfig) -> Result<f64> {
    f_from_loss(&loss.swapped(), s, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjugacy::affine_normalize;
    use crate::distribution::{f_divergence, random_distribution};
    use approx::assert_abs_diff_eq;

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    fn hellinger() -> GeneratedF {
        GeneratedF::table(PartialLoss::exponential()).unwrap()
    }

    #[test]
    fn constant_witness_on_hellinger() {
        let pr = FiniteDistribution::new(vec![0.2, 0.5, 0.3]).unwrap();
        let pg = FiniteDistribution::new(vec![0.6, 0.1, 0.3]).unwrap();
        let h = WitnessFunction(vec![-1.0; 3]);
        let obj = fgan_objective(&hellinger(), &h, &pr, &pg, &cfg()).unwrap();
        assert_abs_diff_eq!(obj, 0.0, epsilon = 1e-9);
        assert!(obj <= f_divergence_reversed(&hellinger(), &pr, &pg).unwrap());
    }

    #[test]
    fn infinite_conjugate_gives_minus_infinity() {
        let p = FiniteDistribution::uniform(2).unwrap();
        let h = WitnessFunction(vec![1.0, -1.0]);
        assert_eq!(
            fgan_objective(&hellinger(), &h, &p, &p, &cfg()).unwrap(),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn optimal_witness_examples() {
        let pr = FiniteDistribution::new(vec![0.5, 0.5]).unwrap();
        let pg = FiniteDistribution::new(vec![0.5, 0.5]).unwrap();
        let w = optimal_witness(&hellinger(), &pr, &pg).unwrap();
        for &t in w.values() {
            assert_abs_diff_eq!(t, -1.0, epsilon = 1e-8);
        }
        let obj = fgan_objective(&hellinger(), &w, &pr, &pg, &cfg()).unwrap();
        assert_abs_diff_eq!(obj, 0.0, epsilon = 1e-9);

        // u = 4 at the first atom
        let pr = FiniteDistribution::new(vec![0.8, 0.2]).unwrap();
        let pg = FiniteDistribution::new(vec![0.2, 0.8]).unwrap();
        let w = optimal_witness(&hellinger(), &pr, &pg).unwrap();
        assert_abs_diff_eq!(w.values()[0], -0.5, epsilon = 1e-8);
        let obj = fgan_objective(&hellinger(), &w, &pr, &pg, &cfg()).unwrap();
        let div = f_divergence_reversed(&hellinger(), &pr, &pg).unwrap();
        assert_abs_diff_eq!(obj, div, epsilon = 1e-8);
    }

    #[test]
    fn reversed_divergence_needs_generator_support() {
        let pr = FiniteDistribution::new(vec![0.5, 0.5]).unwrap();
        let pg = FiniteDistribution::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(
            f_divergence_reversed(&hellinger(), &pr, &pg).unwrap_err(),
            Error::ZeroReferenceMass(1)
        );
    }

    #[test]
    fn dual_generator_examples() {
        let c = cfg();
        for loss in [
            PartialLoss::zero_one(),
            PartialLoss::log(),
            PartialLoss::exponential(),
            PartialLoss::boosting(),
        ] {
            for s in [0.2, 1.0, 3.0] {
                let a = dual_generator_value(&loss, s, &c).unwrap();
                let b = f_from_loss(&loss, s, &c).unwrap();
                assert_abs_diff_eq!(a, b, epsilon = 1e-10);
            }
        }
        let cw = PartialLoss::cost_weighted(0.3).unwrap();
        let dual = dual_generator_value(&cw, 2.0, &c).unwrap();
        let primal = f_from_loss(&cw, 2.0, &c).unwrap();
        assert!((dual - primal).abs() > 0.1);
        assert_abs_diff_eq!(
            dual_generator_value(&cw, 1.0, &c).unwrap(),
            f_from_loss(&cw, 1.0, &c).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn dual_generator_reverses_arguments() {
        let pg = random_distribution(6, 21, 1e-3).unwrap();
        let pr = random_distribution(6, 22, 1e-3).unwrap();
        let loss = PartialLoss::cost_weighted(0.8).unwrap();
        let f = GeneratedF::from_loss(loss.clone(), cfg());
        let dual = GeneratedF::dual_of(&loss, cfg());
        let lhs = f_divergence(&dual, &pr, &pg).unwrap();
        let rhs = f_divergence(&f, &pg, &pr).unwrap();
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-8);
    }

    #[test]
    fn random_witnesses_are_finite_and_deterministic() {
        let f = affine_normalize(&GeneratedF::from_loss(PartialLoss::log(), cfg())).unwrap();
        let a = random_witness(&f, 5, 3.0, 9, &cfg()).unwrap();
        assert_eq!(a, random_witness(&f, 5, 3.0, 9, &cfg()).unwrap());
        for &t in a.values() {
            assert!(convex_conjugate(&f, t, &cfg()).unwrap().is_finite());
        }
    }
}
