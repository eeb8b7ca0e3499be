//! Finite discrete distributions and f-divergences between them.
//!
//! All distributions live on the atoms `0..n` with counting base measure.
//! `D_f(P_g, P_r) = Σ_x P_r(x) · f(P_g(x) / P_r(x))`, which requires `P_r`
//! to be positive on every atom.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::conjugacy::GeneratedF;
use crate::error::{Error, Result};

const MIN_TOTAL_MASS: f64 = 1e-6;

/// A probability vector over a finite atom set. Always normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDistribution {
    probs: Vec<f64>,
}

impl FiniteDistribution {
    /// Validates and renormalizes a mass vector.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        for (index, &value) in probs.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteMass(index));
            }
            if value < 0.0 {
                return Err(Error::NegativeMass { index, value });
            }
        }
        let total: f64 = probs.iter().sum();
        if total < MIN_TOTAL_MASS {
            return Err(Error::ZeroMass(total));
        }
        let probs = probs.into_iter().map(|p| p / total).collect();
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![1.0; n])
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn has_full_support(&self) -> bool {
        self.probs.iter().all(|&p| p > 0.0)
    }

    /// Merges atom `j` into atom `i`, yielding a distribution on `n − 1` atoms.
    pub fn merge_atoms(&self, i: usize, j: usize) -> Result<Self> {
        assert!(i != j && i < self.len() && j < self.len());
        let mut probs = self.probs.clone();
        probs[i] += probs[j];
        probs.remove(j);
        Self::new(probs)
    }

    /// Parses the plain-text format: one probability per line, `#` comments,
    /// blank lines ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut probs = Vec::new();
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            last_line = line;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let value: f64 = content.parse().map_err(|_| Error::Parse {
                line,
                message: format!("not a number: `{content}`"),
            })?;
            if !value.is_finite() {
                return Err(Error::Parse {
                    line,
                    message: format!("non-finite probability `{content}`"),
                });
            }
            if value < 0.0 {
                return Err(Error::Parse {
                    line,
                    message: format!("negative probability {value}"),
                });
            }
            probs.push(value);
        }
        Self::new(probs).map_err(|e| Error::Parse {
            line: last_line.max(1),
            message: e.to_string(),
        })
    }
}

impl FromStr for FiniteDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for FiniteDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.probs {
            writeln!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Per-atom density ratio `P_g(x) / P_r(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityRatio(Vec<f64>);

impl DensityRatio {
    pub fn new(pg: &FiniteDistribution, pr: &FiniteDistribution) -> Result<Self> {
        check_lengths(pg, pr)?;
        pg.probs
            .iter()
            .zip(&pr.probs)
            .enumerate()
            .map(|(i, (&g, &r))| {
                if r > 0.0 {
                    Ok(g / r)
                } else {
                    Err(Error::ZeroReferenceMass(i))
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

pub(crate) fn check_lengths(a: &FiniteDistribution, b: &FiniteDistribution) -> Result<()> {
    if a.len() == b.len() {
        Ok(())
    } else {
        Err(Error::LengthMismatch(a.len(), b.len()))
    }
}

/// `D_f(P_g, P_r) = Σ_x P_r(x) f(P_g(x)/P_r(x))`, accumulated left to right.
/// May be negative when `f(1) ≠ 0`.
pub fn f_divergence(f: &GeneratedF, pg: &FiniteDistribution, pr: &FiniteDistribution) -> Result<f64> {
    let ratio = DensityRatio::new(pg, pr)?;
    let mut total = 0.0;
    for (&r, &s) in pr.probs.iter().zip(ratio.values()) {
        total += r * f.eval(s)?;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedDivergence {
    TotalVariation,
    JensenShannon,
    Triangular,
    HellingerSquared,
}

impl NamedDivergence {
    pub fn as_str(self) -> &'static str {
        match self {
            NamedDivergence::TotalVariation => "total_variation",
            NamedDivergence::JensenShannon => "jensen_shannon",
            NamedDivergence::Triangular => "triangular",
            NamedDivergence::HellingerSquared => "hellinger_sq",
        }
    }

    /// Closed-form value computed directly from the mass vectors.
    pub fn eval(self, p: &FiniteDistribution, q: &FiniteDistribution) -> Result<f64> {
        named_divergence(self, p, q)
    }
}

impl fmt::Display for NamedDivergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn xlogy_ratio(x: f64, m: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * (x / m).ln()
    }
}

/// Total variation, Jensen–Shannon (natural log), triangular discrimination
/// and squared Hellinger distance. Zero-mass atoms are allowed.
pub fn named_divergence(name: NamedDivergence, p: &FiniteDistribution, q: &FiniteDistribution) -> Result<f64> {
    check_lengths(p, q)?;
    let pairs = p.probs.iter().zip(&q.probs).map(|(&a, &b)| (a, b));
    let value = match name {
        NamedDivergence::TotalVariation => 0.5 * pairs.map(|(a, b)| (a - b).abs()).sum::<f64>(),
        NamedDivergence::JensenShannon => {
            let mut total = 0.0;
            for (a, b) in pairs {
                let m = 0.5 * (a + b);
                total += 0.5 * xlogy_ratio(a, m) + 0.5 * xlogy_ratio(b, m);
            }
            total
        }
        NamedDivergence::Triangular => pairs
            .map(|(a, b)| if a + b == 0.0 { 0.0 } else { (a - b).powi(2) / (a + b) })
            .sum(),
        NamedDivergence::HellingerSquared => pairs.map(|(a, b)| (a.sqrt() - b.sqrt()).powi(2)).sum(),
    };
    Ok(value)
}

pub fn total_variation(p: &FiniteDistribution, q: &FiniteDistribution) -> Result<f64> {
    named_divergence(NamedDivergence::TotalVariation, p, q)
}

/// Deterministic random distribution with every atom at least `min_mass`:
/// a uniform draw from the simplex mixed with the uniform distribution at
/// rate `min_mass · n`.
pub fn random_distribution(n: usize, seed: u64, min_mass: f64) -> Result<FiniteDistribution> {
    if n == 0 {
        return Err(Error::EmptyDistribution);
    }
    if !(min_mass >= 0.0 && min_mass * (n as f64) < 1.0) {
        return Err(Error::MinMassTooLarge { min_mass, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<f64> = (0..n).map(|_| Exp1.sample(&mut rng)).collect();
    let total: f64 = draws.iter().sum();
    let mix = min_mass * n as f64;
    let uniform = 1.0 / n as f64;
    let probs = draws
        .into_iter()
        .map(|d| (1.0 - mix) * (d / total) + mix * uniform)
        .collect();
    FiniteDistribution::new(probs)
}
