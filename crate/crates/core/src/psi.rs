//! Operators and solves with respect to a substitution function ψ.
//!
//! A monotone C¹ function ψ with ψ(0) = 0 and ψ' > 0 conjugates every
//! Prabhakar operator taken with respect to ψ back to the plain-variable
//! operator: solve on a uniform grid in τ = ψ(t), then map the solution back
//! through t ↦ ψ(t). The initial values are those of the ψ-derivative
//! (ψ'(t)⁻¹ d/dt)^k at 0, which transport to ordinary derivatives in
//! τ-space.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::GridFn;
use crate::interp::MonotoneCubic;
use crate::problem::{FnSpec, ProblemSpec, Solution, SolveConfig};
use crate::solver::solve_ivp;

/// Number of sweep nodes for the monotonicity validation.
const MONOTONE_SWEEP: usize = 1024;
/// Number of nodes for the ψ ↔ ψ' finite-difference consistency check.
const CONSISTENCY_SWEEP: usize = 512;
/// Relative tolerance of the consistency check (deliberately loose: it
/// detects mismatched ψ/ψ' pairs, not discretisation error).
const CONSISTENCY_RTOL: f64 = 0.05;

type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A validated substitution function on [0, T]: ψ(0) = 0, ψ strictly
/// increasing, with a user-supplied derivative consistent with ψ.
#[derive(Clone)]
pub struct PsiFunction {
    psi: RealFn,
    psi_prime: RealFn,
    t_end: f64,
}

impl fmt::Debug for PsiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PsiFunction {{ t_end: {} }}", self.t_end)
    }
}

impl PsiFunction {
    /// Validate and wrap a (ψ, ψ') pair for use on [0, t_end].
    pub fn new(
        psi: impl Fn(f64) -> f64 + Send + Sync + 'static,
        psi_prime: impl Fn(f64) -> f64 + Send + Sync + 'static,
        t_end: f64,
    ) -> Result<Self> {
        let f = PsiFunction { psi: Arc::new(psi), psi_prime: Arc::new(psi_prime), t_end };
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<()> {
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::PsiValidation("horizon must be positive".into()));
        }
        let at0 = (self.psi)(0.0);
        if !(at0.abs() <= 1e-12) {
            return Err(Error::PsiValidation(format!("psi(0) must be 0, got {at0}")));
        }
        let h = self.t_end / (MONOTONE_SWEEP - 1) as f64;
        let mut prev = at0;
        for k in 0..MONOTONE_SWEEP {
            let t = k as f64 * h;
            let d = (self.psi_prime)(t);
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::PsiValidation(format!("psi'({t}) = {d} is not positive")));
            }
            let v = (self.psi)(t);
            if !v.is_finite() {
                return Err(Error::PsiValidation(format!("psi({t}) is not finite")));
            }
            if k > 0 && v <= prev {
                return Err(Error::PsiValidation(format!(
                    "psi is not strictly increasing near t = {t}"
                )));
            }
            prev = v;
        }
        // ψ' must match difference quotients of ψ, loosely.
        let step = self.t_end / CONSISTENCY_SWEEP as f64;
        for k in 0..CONSISTENCY_SWEEP {
            let t = k as f64 * step;
            let fd = ((self.psi)(t + step) - (self.psi)(t)) / step;
            let d = (self.psi_prime)(t + 0.5 * step);
            if (fd - d).abs() > CONSISTENCY_RTOL * (1.0 + d.abs()) {
                return Err(Error::PsiValidation(format!(
                    "psi' inconsistent with psi near t = {t}: difference quotient {fd} vs psi' {d}"
                )));
            }
        }
        Ok(())
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.psi)(t)
    }

    pub fn deriv(&self, t: f64) -> f64 {
        (self.psi_prime)(t)
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }
}

/// Built-in ψ families exposed through the CLI; arbitrary callables go
/// through [`PsiFunction::new`] directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PsiFamily {
    Identity,
    /// ψ(t) = slope·t, slope > 0.
    Affine { slope: f64 },
    /// ψ(t) = 1 − e^{−λt}, λ > 0.
    ExpSaturating { lambda: f64 },
    /// ψ(t) = (t+c)^p − c^p.
    Power { c: f64, p: f64 },
}

impl PsiFamily {
    pub fn build(&self, t_end: f64) -> Result<PsiFunction> {
        match *self {
            PsiFamily::Identity => PsiFunction::new(|t| t, |_| 1.0, t_end),
            PsiFamily::Affine { slope } => {
                if !(slope.is_finite() && slope > 0.0) {
                    return Err(Error::PsiValidation(format!("affine slope must be > 0, got {slope}")));
                }
                PsiFunction::new(move |t| slope * t, move |_| slope, t_end)
            }
            PsiFamily::ExpSaturating { lambda } => {
                if !(lambda.is_finite() && lambda > 0.0) {
                    return Err(Error::PsiValidation(format!("exp_sat lambda must be > 0, got {lambda}")));
                }
                PsiFunction::new(
                    move |t| -(-lambda * t).exp_m1(),
                    move |t| lambda * (-lambda * t).exp(),
                    t_end,
                )
            }
            PsiFamily::Power { c, p } => {
                if !(c.is_finite() && p.is_finite() && c >= 0.0 && p > 0.0) {
                    return Err(Error::PsiValidation(format!(
                        "power family needs c >= 0 and p > 0, got c={c}, p={p}"
                    )));
                }
                PsiFunction::new(
                    move |t| (t + c).powf(p) - c.powf(p),
                    move |t| p * (t + c).powf(p - 1.0),
                    t_end,
                )
            }
        }
    }
}

/// Invert a validated ψ at y ∈ [0, ψ(T)] by safeguarded Newton/bisection.
/// The result satisfies |ψ(t) − y| ≤ 1e−12·(1+|y|).
pub fn psi_inverse(psi: &PsiFunction, y: f64) -> Result<f64> {
    let top = psi.eval(psi.t_end());
    let slack = 1e-12 * (1.0 + top.abs());
    if !(y >= -slack && y <= top + slack) {
        return Err(Error::OutOfRange(format!("psi_inverse: y = {y} outside [0, {top}]")));
    }
    let y = y.clamp(0.0, top);
    if y == 0.0 {
        return Ok(0.0);
    }
    if y == top {
        return Ok(psi.t_end());
    }
    let mut lo = 0.0f64;
    let mut hi = psi.t_end();
    let mut x = psi.t_end() * (y / top).clamp(0.0, 1.0);
    for _ in 0..100 {
        let f = psi.eval(x) - y;
        if f.abs() <= 1e-14 * (1.0 + y.abs()) {
            return Ok(x);
        }
        if f > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let d = psi.deriv(x);
        let newton = x - f / d;
        x = if d > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    if (psi.eval(x) - y).abs() <= 1e-12 * (1.0 + y.abs()) {
        Ok(x)
    } else {
        Err(Error::Domain(format!("psi_inverse failed to converge at y = {y}")))
    }
}

/// Initial value problem for operators taken with respect to ψ. The inner
/// problem's coefficient functions and forcing are functions of t, and its
/// initial values `base.e` are the ψ-derivative values
/// (ψ'(t)⁻¹ d/dt)^k v |_{t=0} = e_k.
#[derive(Debug, Clone)]
pub struct PsiProblemSpec {
    pub base: ProblemSpec,
    pub psi: PsiFunction,
}

impl PsiProblemSpec {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.psi.t_end() != self.base.t_end {
            return Err(Error::PsiValidation(format!(
                "psi horizon {} differs from problem horizon {}",
                self.psi.t_end(),
                self.base.t_end
            )));
        }
        Ok(())
    }

    /// ψ-derivative initial values e_0 … e_{n_0−1}.
    pub fn e(&self) -> &[f64] {
        &self.base.e
    }
}

/// Solve the ψ-generalized problem by conjugation: transform to a uniform
/// grid in τ = ψ(t) over [0, ψ(T)] with σ̃_i(τ) = σ_i(ψ⁻¹(τ)) and
/// g̃(τ) = g(ψ⁻¹(τ)), solve with the plain-variable engine, and map the
/// solution back onto the uniform t-grid by monotone-cubic interpolation at
/// the image points ψ(t_k). The canonical basis maps back with it, so
/// v_{j,ψ}(t) carries the leading term ψ(t)^j/j!.
pub fn solve_ivp_wrt(problem: &PsiProblemSpec, cfg: &SolveConfig) -> Result<Solution> {
    problem.validate()?;
    cfg.validate()?;
    let n = cfg.n_points;
    let t_end = problem.base.t_end;
    let tau_end = problem.psi.eval(t_end);
    if !(tau_end.is_finite() && tau_end > 0.0) {
        return Err(Error::PsiValidation(format!("psi(T) = {tau_end} must be positive")));
    }

    // Pre-images of the uniform τ-grid nodes.
    let tau_h = tau_end / (n - 1) as f64;
    let mut pre = Vec::with_capacity(n);
    for k in 0..n {
        pre.push(psi_inverse(&problem.psi, (k as f64 * tau_h).min(tau_end))?);
    }

    let mut sigmas_tau = Vec::with_capacity(problem.base.m());
    for s in &problem.base.sigmas {
        sigmas_tau.push(FnSpec::from_table(sample_composed(s, &pre)?));
    }
    let g_tau = FnSpec::from_table(sample_composed(&problem.base.g, &pre)?);

    let tau_problem = ProblemSpec {
        alpha: problem.base.alpha,
        betas: problem.base.betas.clone(),
        thetas: problem.base.thetas.clone(),
        omega: problem.base.omega,
        sigmas: sigmas_tau,
        g: g_tau,
        e: problem.base.e.clone(),
        t_end: tau_end,
    };
    let sol_tau = solve_ivp(&tau_problem, cfg)?;

    // Map back onto the uniform t-grid through the images ψ(t_k).
    let h = t_end / (n - 1) as f64;
    let images: Vec<f64> = (0..n).map(|k| problem.psi.eval(k as f64 * h)).collect();
    let map_back = |grid: &GridFn| -> Result<GridFn> {
        let interp = MonotoneCubic::new(tau_end, grid.values());
        GridFn::new(t_end, images.iter().map(|&y| interp.eval(y)).collect())
    };

    let canonical = match &sol_tau.canonical {
        Some(set) => Some(set.iter().map(&map_back).collect::<Result<Vec<_>>>()?),
        None => None,
    };
    Ok(Solution {
        v: map_back(&sol_tau.v)?,
        u: map_back(&sol_tau.u)?,
        iterations: sol_tau.iterations,
        final_update_norm: sol_tau.final_update_norm,
        residual_norm: sol_tau.residual_norm,
        update_norms: sol_tau.update_norms,
        canonical,
    })
}

fn sample_composed(f: &FnSpec, pre_images: &[f64]) -> Result<Vec<f64>> {
    match f {
        FnSpec::Callable(f) => Ok(pre_images.iter().map(|&t| f(t)).collect()),
        FnSpec::Tabulated(_) => Err(Error::Domain(
            "tabulated coefficients are not supported with a substitution function; supply callables".into(),
        )),
    }
}
