//! Mittag-Leffler functions: one-, two-, three-parameter and multivariate,
//! plus the Pochhammer symbol.
//!
//! The three-parameter (Prabhakar) function is
//!
//! ```text
//! E^θ_{α,β}(z) = Σ_{n≥0} (θ)_n z^n / (Γ(αn+β) n!),   α > 0,
//! ```
//!
//! summed directly with compensated accumulation and a certified truncation
//! rule: once the observed term ratio drops below 1/2, the tail is bounded by
//! a geometric majorant and summation stops when that bound falls below the
//! requested tolerance. All arguments and parameters are real.

use crate::error::{Error, Result, ValidationError};
use crate::gamma::{is_gamma_pole, ln_gamma, recip_gamma};
use crate::kahan::Kahan;

/// Default relative tolerance for series truncation.
pub const DEFAULT_SERIES_TOL: f64 = 1e-14;
/// Term cap for the univariate series.
pub const ML_TERM_CAP: usize = 10_000;
/// Layer cap for the multivariate series (layers indexed by total degree).
pub const MV_LAYER_CAP: usize = 200;

/// Parameters (α, β, θ) of the three-parameter Mittag-Leffler function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MLParams {
    pub alpha: f64,
    pub beta: f64,
    pub theta: f64,
}

impl MLParams {
    pub fn new(alpha: f64, beta: f64, theta: f64) -> Result<Self> {
        let p = MLParams { alpha, beta, theta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.beta.is_finite() && self.theta.is_finite()) {
            return Err(ValidationError::NonFiniteParameter.into());
        }
        if self.alpha <= 0.0 {
            return Err(ValidationError::AlphaNotPositive.into());
        }
        Ok(())
    }
}

/// Parameters of the multivariate Mittag-Leffler function: one α per
/// variable plus the shared β, all positive.
#[derive(Debug, Clone, PartialEq)]
pub struct MvMLParams {
    pub alphas: Vec<f64>,
    pub beta: f64,
}

impl MvMLParams {
    pub fn new(alphas: Vec<f64>, beta: f64) -> Result<Self> {
        let p = MvMLParams { alphas, beta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = !self.alphas.is_empty()
            && self.beta.is_finite()
            && self.beta > 0.0
            && self.alphas.iter().all(|a| a.is_finite() && *a > 0.0);
        if ok {
            Ok(())
        } else {
            Err(ValidationError::BadMvParams.into())
        }
    }
}

/// Pochhammer symbol (θ)_n = θ(θ+1)···(θ+n−1), with (θ)_0 = 1.
///
/// Computed by the recurrence, not via Gamma ratios, so nonpositive θ poses
/// no pole problems and the zero factors of nonpositive-integer θ are exact.
pub fn pochhammer(theta: f64, n: usize) -> f64 {
    let mut acc = 1.0;
    for k in 0..n {
        acc *= theta + k as f64;
    }
    acc
}

/// True when (θ)_n = 0, i.e. θ is a nonpositive integer with n > −θ.
pub(crate) fn pochhammer_vanishes(theta: f64, n: usize) -> bool {
    theta <= 0.0 && theta == theta.trunc() && (n as f64) > -theta
}

/// Three-parameter Mittag-Leffler function at the default tolerance.
pub fn ml3(p: &MLParams, z: f64) -> Result<f64> {
    ml3_tol(p, z, DEFAULT_SERIES_TOL)
}

/// Three-parameter Mittag-Leffler function with an explicit truncation
/// tolerance.
///
/// Γ poles inside the series (possible only when β ≤ 0) zero the term when
/// the Pochhammer factor also vanishes; a pole against a nonvanishing
/// coefficient is reported as a domain error rather than silently dropped.
pub fn ml3_tol(p: &MLParams, z: f64, tol: f64) -> Result<f64> {
    p.validate()?;
    if !z.is_finite() {
        return Err(Error::Domain(format!("ml3 argument must be finite, got {z}")));
    }
    let mut sum = Kahan::default();
    // coef = (θ)_n z^n / n!, advanced by one factor per term.
    let mut coef = 1.0_f64;
    let mut prev_mag: Option<f64> = None;
    let mut last = f64::NAN;
    for n in 0..ML_TERM_CAP {
        let x = p.alpha * n as f64 + p.beta;
        let term = if is_gamma_pole(x) {
            if coef == 0.0 || pochhammer_vanishes(p.theta, n) {
                0.0
            } else {
                return Err(Error::Domain(format!(
                    "Gamma pole at alpha*n+beta = {x} (n = {n}) with nonvanishing coefficient"
                )));
            }
        } else {
            coef * recip_gamma(x)
        };
        sum.add(term);
        coef *= (p.theta + n as f64) * z / (n as f64 + 1.0);
        if coef == 0.0 {
            // Finite series: θ a nonpositive integer, or z = 0.
            return Ok(sum.value());
        }
        let mag = term.abs();
        if let Some(prev) = prev_mag {
            if prev > 0.0 && mag > 0.0 {
                let ratio = mag / prev;
                if ratio < 0.5 {
                    let tail = mag * ratio / (1.0 - ratio);
                    if tail <= tol * (1.0 + sum.value().abs()) {
                        return Ok(sum.value());
                    }
                }
            }
        }
        prev_mag = Some(mag);
        last = mag;
    }
    Err(Error::NonConvergence { max_terms: ML_TERM_CAP, last_term: last })
}

/// Two-parameter Mittag-Leffler function E_{α,β}(z) = E^1_{α,β}(z).
pub fn ml2(alpha: f64, beta: f64, z: f64) -> Result<f64> {
    ml3(&MLParams { alpha, beta, theta: 1.0 }, z)
}

/// Classical Mittag-Leffler function E_α(z) = E_{α,1}(z).
pub fn ml1(alpha: f64, z: f64) -> Result<f64> {
    ml2(alpha, 1.0, z)
}

/// Multivariate Mittag-Leffler function at the default tolerance.
pub fn ml_multivariate(p: &MvMLParams, zs: &[f64]) -> Result<f64> {
    ml_multivariate_tol(p, zs, DEFAULT_SERIES_TOL)
}

/// Multivariate Mittag-Leffler function
///
/// ```text
/// E_{(α_1..α_n),β}(z_1..z_n) = Σ_{k≥0} Σ_{k_1+..+k_n=k} k!/(k_1!..k_n!)
///                              · Π z_i^{k_i} / Γ(β + Σ α_i k_i)
/// ```
///
/// summed by total degree k. Each degree layer is enumerated exactly;
/// summation stops once the layer's absolute sum stays below tolerance for
/// two consecutive layers while decaying.
pub fn ml_multivariate_tol(p: &MvMLParams, zs: &[f64], tol: f64) -> Result<f64> {
    p.validate()?;
    if zs.len() != p.alphas.len() {
        return Err(Error::DimensionMismatch(format!(
            "ml_multivariate: {} arguments for {} alphas",
            zs.len(),
            p.alphas.len()
        )));
    }
    if zs.iter().any(|z| !z.is_finite()) {
        return Err(Error::Domain("ml_multivariate arguments must be finite".into()));
    }
    let nvars = zs.len();
    let mut sum = Kahan::default();
    let mut kvec = vec![0usize; nvars];
    let mut prev_layer_abs = f64::INFINITY;
    let mut consecutive_small = 0usize;
    let mut last_layer = f64::NAN;
    for k in 0..=MV_LAYER_CAP {
        let mut layer = Kahan::default();
        let mut layer_abs = 0.0;
        for_each_composition(k, &mut kvec, &mut |parts| {
            let t = mv_layer_term(p, zs, k, parts);
            layer.add(t);
            layer_abs += t.abs();
        });
        sum.add(layer.value());
        let threshold = tol * (1.0 + sum.value().abs());
        if layer_abs <= threshold {
            consecutive_small += 1;
            if consecutive_small >= 2 && layer_abs <= prev_layer_abs {
                return Ok(sum.value());
            }
        } else {
            consecutive_small = 0;
        }
        prev_layer_abs = layer_abs;
        last_layer = layer_abs;
    }
    Err(Error::NonConvergence { max_terms: MV_LAYER_CAP, last_term: last_layer })
}

/// One term of a degree layer: k!/(Πk_i!) · Πz_i^{k_i} / Γ(β+Σα_ik_i),
/// assembled in log space to dodge factorial overflow.
fn mv_layer_term(p: &MvMLParams, zs: &[f64], k: usize, kvec: &[usize]) -> f64 {
    let mut ln_mag = ln_gamma(k as f64 + 1.0);
    let mut sign = 1.0;
    let mut denom_arg = p.beta;
    for (i, &ki) in kvec.iter().enumerate() {
        denom_arg += p.alphas[i] * ki as f64;
        if ki > 0 {
            if zs[i] == 0.0 {
                return 0.0;
            }
            ln_mag -= ln_gamma(ki as f64 + 1.0);
            ln_mag += ki as f64 * zs[i].abs().ln();
            if zs[i] < 0.0 && ki % 2 == 1 {
                sign = -sign;
            }
        }
    }
    ln_mag -= ln_gamma(denom_arg);
    sign * ln_mag.exp()
}

/// Visit every composition of `total` into `kvec.len()` nonnegative parts.
fn for_each_composition(total: usize, kvec: &mut [usize], f: &mut impl FnMut(&[usize])) {
    fn rec(idx: usize, remaining: usize, kvec: &mut [usize], f: &mut impl FnMut(&[usize])) {
        if idx + 1 == kvec.len() {
            kvec[idx] = remaining;
            f(kvec);
            return;
        }
        for v in 0..=remaining {
            kvec[idx] = v;
            rec(idx + 1, remaining - v, kvec, f);
        }
    }
    rec(0, total, kvec, f);
}
