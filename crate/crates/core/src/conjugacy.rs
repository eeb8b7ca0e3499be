//! The convex generator induced by a loss, its convex conjugate, and the
//! reconciliation between numerically generated and tabulated generators.
//!
//! For a loss `(ℓ₊, ℓ₋)` the generator is
//!
//! ```text
//! f(s) = sup_α ( −ℓ₊(α) − s·ℓ₋(α) )
//! ```
//!
//! a supremum of affine functions of `s`, hence convex. Tabulated forms of
//! `f` agree with this definition only up to `a·f + b + c·s` with `a > 0`;
//! [`fit_scale_affine`] recovers those constants.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::loss::{check_ratio, PartialLoss};
use crate::search::{self, log_grid};

/// Open prediction domains are searched on `[lo + ε, hi − ε]`.
pub const OPEN_DOMAIN_EPS: f64 = 1e-12;

/// Smallest `u` considered by the conjugate search on `(0, u_max]`.
pub const CONJUGATE_U_MIN: f64 = 1e-12;

/// Residual above which a scale/affine fit is reported as a mismatch.
pub const FIT_TOLERANCE: f64 = 1e-6;

/// Slack in the midpoint-convexity check.
pub const CONVEXITY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Absolute tolerance on the refined bracket width.
    pub abs_tolerance: f64,
    pub grid_points: usize,
    pub max_refinements: usize,
    /// Unbounded prediction domains are searched on `[−T, T]`.
    pub domain_truncation: f64,
    /// The conjugate sup runs over `u ∈ (0, domain_truncation · conjugate_scale]`.
    pub conjugate_scale: f64,
    /// Use closed-form minimizers when the loss has them.
    pub prefer_closed_form: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            abs_tolerance: 1e-10,
            grid_points: 257,
            max_refinements: 80,
            domain_truncation: 50.0,
            conjugate_scale: 100.0,
            prefer_closed_form: true,
        }
    }
}

impl SolverConfig {
    /// Same configuration, but always searching numerically.
    pub fn search_only(self) -> Self {
        Self {
            prefer_closed_form: false,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tolerance > 0.0) {
            return Err(Error::InvalidConfig("abs_tolerance must be positive".into()));
        }
        if self.grid_points < 3 {
            return Err(Error::InvalidConfig("grid_points must be at least 3".into()));
        }
        if !(self.domain_truncation > 0.0) || !(self.conjugate_scale > 0.0) {
            return Err(Error::InvalidConfig(
                "truncation and conjugate scale must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn conjugate_upper(&self) -> f64 {
        self.domain_truncation * self.conjugate_scale
    }
}

/// Minimizer and minimum of `g ↦ ℓ₊(g) + s·ℓ₋(g)`.
pub fn minimize_pointwise(loss: &PartialLoss, s: f64, cfg: &SolverConfig) -> Result<(f64, f64)> {
    check_ratio(s)?;
    if cfg.prefer_closed_form && loss.has_closed_forms() {
        let g = loss.closed_form_minimizer(s)?;
        return Ok((g, loss.weighted_unchecked(g, s)));
    }
    let (lo, hi) = loss.domain().search_interval(cfg.domain_truncation, OPEN_DOMAIN_EPS);
    let opt = search::minimize(
        |g| loss.weighted_unchecked(g, s),
        lo,
        hi,
        cfg.grid_points,
        cfg.abs_tolerance,
        cfg.max_refinements,
    );
    if !opt.converged {
        return Err(Error::NotConverged {
            iterations: opt.iterations,
            best_arg: opt.arg,
            best_value: opt.value,
        });
    }
    if !opt.value.is_finite() {
        return Err(Error::NonFinite(format!("pointwise minimum of {loss} at s={s}")));
    }
    Ok((opt.arg, opt.value))
}

/// `f(s) = sup_α (−ℓ₊(α) − s·ℓ₋(α))`.
pub fn f_from_loss(loss: &PartialLoss, s: f64, cfg: &SolverConfig) -> Result<f64> {
    minimize_pointwise(loss, s, cfg).map(|(_, v)| -v)
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum FSource {
    /// Generated by a loss through the supremum definition.
    Loss(PartialLoss),
    /// The tabulated closed form of a catalog loss.
    Table(PartialLoss),
    Explicit {
        label: String,
        f: ScalarFn,
    },
}

/// A convex generator `f` on `[0, ∞)`, minus a constant offset.
#[derive(Clone)]
pub struct GeneratedF {
    source: FSource,
    solver: SolverConfig,
    offset: f64,
}

impl fmt::Debug for GeneratedF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneratedF")
            .field("source", &self.label())
            .field("offset", &self.offset)
            .finish()
    }
}

impl GeneratedF {
    pub fn from_loss(loss: PartialLoss, solver: SolverConfig) -> Self {
        Self {
            source: FSource::Loss(loss),
            solver,
            offset: 0.0,
        }
    }

    /// Generator with the partial losses exchanged, `sup_α (−ℓ₋(α) − s·ℓ₊(α))`.
    pub fn dual_of(loss: &PartialLoss, solver: SolverConfig) -> Self {
        Self::from_loss(loss.swapped(), solver)
    }

    pub fn table(loss: PartialLoss) -> Result<Self> {
        if !loss.has_closed_forms() {
            return Err(Error::NoClosedForm(loss.to_string()));
        }
        Ok(Self {
            source: FSource::Table(loss),
            solver: SolverConfig::default(),
            offset: 0.0,
        })
    }

    pub fn explicit<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            source: FSource::Explicit {
                label: label.into(),
                f: Arc::new(f),
            },
            solver: SolverConfig::default(),
            offset: 0.0,
        }
    }

    pub fn source(&self) -> &FSource {
        &self.source
    }

    pub fn solver(&self) -> &SolverConfig {
        &self.solver
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn label(&self) -> String {
        let base = match &self.source {
            FSource::Loss(l) => format!("sup[{l}]"),
            FSource::Table(l) => format!("table[{l}]"),
            FSource::Explicit { label, .. } => label.clone(),
        };
        if self.offset > 0.0 {
            format!("{base} - {}", self.offset)
        } else if self.offset < 0.0 {
            format!("{base} + {}", -self.offset)
        } else {
            base
        }
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        check_ratio(s)?;
        let raw = match &self.source {
            FSource::Loss(loss) => f_from_loss(loss, s, &self.solver)?,
            FSource::Table(loss) => loss.table_f(s)?,
            FSource::Explicit { f, .. } => f(s),
        };
        Ok(raw - self.offset)
    }
}

/// `s ↦ f(s) − f(1)`: the same divergence up to an additive constant, with
/// `f(1) = 0`.
pub fn affine_normalize(f_raw: &GeneratedF) -> Result<GeneratedF> {
    let at_one = f_raw.eval(1.0)?;
    let mut out = f_raw.clone();
    out.offset += at_one;
    Ok(out)
}

/// `f*(t) = sup_{u ∈ (0, U]} (t·u − f(u))`, returning `+∞` when the
/// objective is still climbing at the truncation boundary `U`.
pub fn convex_conjugate(f: &GeneratedF, t: f64, cfg: &SolverConfig) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::NonFinite(format!("conjugate argument {t}")));
    }
    let lo = CONJUGATE_U_MIN.ln();
    let hi = cfg.conjugate_upper().ln();
    let objective = |x: f64| {
        let u = x.exp();
        match f.eval(u) {
            Ok(v) => t * u - v,
            Err(_) => f64::NAN,
        }
    };

    let n = cfg.grid_points;
    let step = (hi - lo) / (n - 1) as f64;
    let mut best_interior = f64::NEG_INFINITY;
    for i in 0..n - 1 {
        let v = objective(lo + step * i as f64);
        if v > best_interior {
            best_interior = v;
        }
    }
    let boundary = objective(hi);
    if boundary - best_interior > cfg.abs_tolerance {
        return Ok(f64::INFINITY);
    }

    let opt = search::maximize(objective, lo, hi, n, cfg.abs_tolerance, cfg.max_refinements);
    if !opt.value.is_finite() {
        return Err(Error::NonFinite(format!("conjugate of {} at t={t}", f.label())));
    }
    if !opt.converged {
        return Err(Error::NotConverged {
            iterations: opt.iterations,
            best_arg: opt.arg.exp(),
            best_value: opt.value,
        });
    }
    Ok(opt.value)
}

/// Constants of `f_table(s) ≈ a·f_num(s) + b + c·s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleAffineFit {
    pub scale: f64,
    pub offset: f64,
    pub slope: f64,
    /// Largest absolute residual on the verification grid.
    pub max_residual: f64,
    /// The unconstrained scale came out nonpositive and was clamped.
    pub constrained: bool,
}

impl ScaleAffineFit {
    pub fn is_mismatch(&self) -> bool {
        self.constrained || !(self.max_residual <= FIT_TOLERANCE)
    }

    pub fn predict(&self, f_num: f64, s: f64) -> f64 {
        self.scale * f_num + self.offset + self.slope * s
    }
}

/// Verification grid used by [`fit_scale_affine`]: 200 log-spaced points on `[0.01, 100]`.
pub fn verification_grid() -> Vec<f64> {
    log_grid(0.01, 100.0, 200)
}

/// Least-squares fit of `f_table ≈ a·f_num + b + c·s` on `sample_s`,
/// validated on [`verification_grid`].
pub fn fit_scale_affine(f_num: &GeneratedF, f_table: &GeneratedF, sample_s: &[f64]) -> Result<ScaleAffineFit> {
    let mut distinct: Vec<f64> = sample_s.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if sample_s.len() < 4 || distinct.len() < 3 {
        return Err(Error::InsufficientSamples);
    }

    let m = sample_s.len();
    let mut design = DMatrix::<f64>::zeros(m, 3);
    let mut target = DVector::<f64>::zeros(m);
    for (i, &s) in sample_s.iter().enumerate() {
        design[(i, 0)] = f_num.eval(s)?;
        design[(i, 1)] = 1.0;
        design[(i, 2)] = s;
        target[i] = f_table.eval(s)?;
    }

    let solve = |x: DMatrix<f64>, y: &DVector<f64>| -> Result<DVector<f64>> {
        x.svd(true, true)
            .solve(y, 1e-14)
            .map_err(|e| Error::NonFinite(format!("least squares: {e}")))
    };

    let beta = solve(design.clone(), &target)?;
    let (scale, offset, slope, constrained) = if beta[0] > 0.0 {
        (beta[0], beta[1], beta[2], false)
    } else {
        // Second stage: hold the scale at the smallest positive value and
        // refit the affine part alone.
        let scale = f64::MIN_POSITIVE;
        let reduced = design.columns(1, 2).into_owned();
        let shifted = &target - design.column(0) * scale;
        let beta = solve(reduced, &shifted)?;
        (scale, beta[0], beta[1], true)
    };

    let mut fit = ScaleAffineFit {
        scale,
        offset,
        slope,
        max_residual: 0.0,
        constrained,
    };
    for s in verification_grid() {
        let r = (f_table.eval(s)? - fit.predict(f_num.eval(s)?, s)).abs();
        if !(r <= fit.max_residual) {
            fit.max_residual = r;
        }
    }
    Ok(fit)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityViolation {
    pub left: f64,
    pub right: f64,
    /// `f(mid) − ½(f(left) + f(right))`, positive when violated.
    pub excess: f64,
}

/// Midpoint convexity on adjacent pairs of a sorted grid.
pub fn check_convexity(f: &GeneratedF, grid: &[f64]) -> Result<Vec<ConvexityViolation>> {
    if grid.len() < 3 || grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidConfig(
            "convexity grid must be sorted with at least 3 points".into(),
        ));
    }
    let mut out = Vec::new();
    for w in grid.windows(2) {
        let (l, r) = (w[0], w[1]);
        let excess = f.eval(0.5 * (l + r))? - 0.5 * (f.eval(l)? + f.eval(r)?);
        if excess > CONVEXITY_TOLERANCE {
            out.push(ConvexityViolation {
                left: l,
                right: r,
                excess,
            });
        }
    }
    Ok(out)
}

/// Central-difference derivative of `f` at `u > 0`, relative step `rel_step`.
pub fn derivative(f: &GeneratedF, u: f64, rel_step: f64) -> Result<f64> {
    let h = rel_step * u.max(1e-300);
    let h = h.min(0.5 * u);
    Ok((f.eval(u + h)? - f.eval(u - h)?) / (2.0 * h))
}
