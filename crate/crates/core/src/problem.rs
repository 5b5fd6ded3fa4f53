//! Problem descriptions and solver configuration shared by every route.

use std::fmt;
use std::sync::Arc;

use crate::error::{Result, ValidationError};
use crate::grid::GridFn;

/// A real function of time, supplied either as a callable or as samples that
/// must match the solver grid exactly (no resampling).
#[derive(Clone)]
pub enum FnSpec {
    Callable(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
    Tabulated(Vec<f64>),
}

impl fmt::Debug for FnSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FnSpec::Callable(_) => f.write_str("FnSpec::Callable(..)"),
            FnSpec::Tabulated(v) => write!(f, "FnSpec::Tabulated({} samples)", v.len()),
        }
    }
}

impl FnSpec {
    pub fn from_fn(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        FnSpec::Callable(Arc::new(f))
    }

    pub fn constant(c: f64) -> Self {
        FnSpec::Callable(Arc::new(move |_| c))
    }

    pub fn from_table(values: Vec<f64>) -> Self {
        FnSpec::Tabulated(values)
    }

    /// Sample onto a uniform grid. Callables are evaluated once per node;
    /// tabulated data must already have the right length.
    pub fn sample(&self, t_end: f64, n_points: usize) -> Result<GridFn> {
        match self {
            FnSpec::Callable(f) => GridFn::from_fn(t_end, n_points, |t| f(t)),
            FnSpec::Tabulated(v) => {
                if v.len() != n_points {
                    return Err(ValidationError::TableLength { expected: n_points, got: v.len() }.into());
                }
                GridFn::new(t_end, v.clone())
            }
        }
    }
}

/// Full initial value problem for the variable-coefficient equation: the
/// leading derivative of order β_0 plus m lower-order derivative terms with
/// coefficients σ_i, forcing g, and initial values e_k for the derivatives
/// of order k = 0..n_0−1 at t = 0.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub alpha: f64,
    /// Derivative orders β_0 > β_1 > … > β_m ≥ 0, with β_0 non-integer.
    pub betas: Vec<f64>,
    /// One θ per derivative term, same length as `betas`.
    pub thetas: Vec<f64>,
    pub omega: f64,
    /// Coefficient functions σ_1 … σ_m (one fewer than `betas`).
    pub sigmas: Vec<FnSpec>,
    /// Forcing term.
    pub g: FnSpec,
    /// Initial values e_0 … e_{n_0−1}, n_0 = ⌊β_0⌋+1.
    pub e: Vec<f64>,
    /// Horizon T > 0.
    pub t_end: f64,
}

pub(crate) fn is_integer(x: f64) -> bool {
    x == x.trunc()
}

impl ProblemSpec {
    /// Number of lower-order derivative terms.
    pub fn m(&self) -> usize {
        self.betas.len().saturating_sub(1)
    }

    /// n_0 = ⌊β_0⌋ + 1, the number of initial conditions.
    pub fn n0(&self) -> usize {
        self.betas[0].floor() as usize + 1
    }

    /// n_i = ⌊β_i⌋ + 1.
    pub fn n_i(&self, i: usize) -> usize {
        self.betas[i].floor() as usize + 1
    }

    /// Check the solvability hypotheses: α > 0, strictly decreasing betas
    /// with non-integer β_0 and β_m ≥ 0, matching lengths throughout.
    pub fn validate(&self) -> Result<()> {
        if self.betas.is_empty() {
            return Err(ValidationError::BetasEmpty.into());
        }
        let finite = self.alpha.is_finite()
            && self.omega.is_finite()
            && self.t_end.is_finite()
            && self.betas.iter().all(|b| b.is_finite())
            && self.thetas.iter().all(|t| t.is_finite())
            && self.e.iter().all(|v| v.is_finite());
        if !finite {
            return Err(ValidationError::NonFiniteParameter.into());
        }
        if self.alpha <= 0.0 {
            return Err(ValidationError::AlphaNotPositive.into());
        }
        if is_integer(self.betas[0]) {
            return Err(ValidationError::Beta0Integer.into());
        }
        if self.betas.windows(2).any(|w| w[0] <= w[1]) {
            return Err(ValidationError::BetasNotDecreasing.into());
        }
        if *self.betas.last().unwrap() < 0.0 {
            return Err(ValidationError::BetaNegative.into());
        }
        if self.thetas.len() != self.betas.len() {
            return Err(ValidationError::ThetasLength.into());
        }
        if self.sigmas.len() != self.m() {
            return Err(ValidationError::SigmasLength {
                expected: self.m(),
                got: self.sigmas.len(),
            }
            .into());
        }
        if self.e.len() != self.n0() {
            return Err(ValidationError::InitialValuesLength {
                expected: self.n0(),
                got: self.e.len(),
            }
            .into());
        }
        if self.t_end <= 0.0 {
            return Err(ValidationError::HorizonNotPositive.into());
        }
        Ok(())
    }

    /// True when every initial value is zero.
    pub fn homogeneous_ic(&self) -> bool {
        self.e.iter().all(|v| *v == 0.0)
    }

    /// Copy of this problem with all initial values zeroed.
    pub fn with_zero_ic(&self) -> ProblemSpec {
        let mut p = self.clone();
        p.e = vec![0.0; self.n0()];
        p
    }

    /// Copy of this problem with a different forcing term.
    pub fn with_forcing(&self, g: FnSpec) -> ProblemSpec {
        let mut p = self.clone();
        p.g = g;
        p
    }
}

/// Grid size, iteration and truncation controls for a solve.
#[derive(Debug, Clone, Copy)]
pub struct SolveConfig {
    /// Number of grid points (≥ 33).
    pub n_points: usize,
    /// Stopping tolerance on the sup-norm of successive fixed-point
    /// iterates.
    pub picard_tol: f64,
    /// Iteration cap for the fixed-point loop.
    pub max_iters: usize,
    /// Relative tolerance for kernel series truncation.
    pub series_tol: f64,
}

impl SolveConfig {
    pub const MIN_POINTS: usize = 33;

    pub fn new(n_points: usize) -> Self {
        SolveConfig { n_points, picard_tol: 1e-10, max_iters: 200, series_tol: 1e-14 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_points < Self::MIN_POINTS {
            return Err(ValidationError::GridTooCoarse {
                min: Self::MIN_POINTS,
                got: self.n_points,
            }
            .into());
        }
        if !(self.picard_tol > 0.0 && self.series_tol > 0.0 && self.max_iters > 0) {
            return Err(ValidationError::BadSolveConfig.into());
        }
        Ok(())
    }
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig::new(1025)
    }
}

/// Result of a solve: the solution grid v, the fixed point u of the
/// equivalent integral equation (u = C-D v), and convergence diagnostics.
#[derive(Debug, Clone)]
pub struct Solution {
    pub v: GridFn,
    pub u: GridFn,
    /// Fixed-point iterations performed (series terms for the
    /// constant-coefficient route).
    pub iterations: usize,
    /// Sup-norm of the last iterate update.
    pub final_update_norm: f64,
    /// Relative sup-norm residual of the integral equation.
    pub residual_norm: f64,
    /// Update norms per iteration, for contraction diagnostics.
    pub update_norms: Vec<f64>,
    /// Canonical solutions v_0 … v_{n_0−1} when the solve computed them.
    pub canonical: Option<Vec<GridFn>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn base_problem() -> ProblemSpec {
        ProblemSpec {
            alpha: 0.5,
            betas: vec![1.3, 0.4],
            thetas: vec![0.7, 0.2],
            omega: 0.3,
            sigmas: vec![FnSpec::from_fn(|t| t)],
            g: FnSpec::constant(1.0),
            e: vec![0.0, 0.0],
            t_end: 1.0,
        }
    }

    #[test]
    fn valid_problem_passes() {
        base_problem().validate().unwrap();
        assert_eq!(base_problem().n0(), 2);
        assert_eq!(base_problem().m(), 1);
    }

    #[test]
    fn integer_beta0_rejected() {
        let mut p = base_problem();
        p.betas = vec![1.0, 0.3];
        assert!(matches!(
            p.validate(),
            Err(Error::Validation(ValidationError::Beta0Integer))
        ));
    }

    #[test]
    fn non_strict_ordering_rejected() {
        let mut p = base_problem();
        p.betas = vec![1.3, 1.3];
        assert!(matches!(
            p.validate(),
            Err(Error::Validation(ValidationError::BetasNotDecreasing))
        ));
    }

    #[test]
    fn negative_beta_m_rejected() {
        let mut p = base_problem();
        p.betas = vec![1.3, -0.2];
        assert!(matches!(
            p.validate(),
            Err(Error::Validation(ValidationError::BetaNegative))
        ));
    }

    #[test]
    fn ic_length_must_match_n0() {
        let mut p = base_problem();
        p.e = vec![0.0];
        assert!(matches!(
            p.validate(),
            Err(Error::Validation(ValidationError::InitialValuesLength { expected: 2, got: 1 }))
        ));
    }

    #[test]
    fn integer_beta_i_for_lower_terms_is_allowed() {
        let mut p = base_problem();
        p.betas = vec![1.3, 1.0];
        p.validate().unwrap();
    }

    #[test]
    fn tabulated_sampling_checks_length() {
        let f = FnSpec::from_table(vec![1.0; 10]);
        assert!(f.sample(1.0, 10).is_ok());
        assert!(matches!(
            f.sample(1.0, 11),
            Err(Error::Validation(ValidationError::TableLength { expected: 11, got: 10 }))
        ));
    }
}
