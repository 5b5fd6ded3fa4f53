//! Real-valued functions sampled on a uniform grid over [0, T].

use crate::error::{Error, Result, ValidationError};

/// A function sampled at the nodes t_k = k·h, h = T/(n−1), k = 0..n−1.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFn {
    t_end: f64,
    values: Vec<f64>,
}

impl GridFn {
    /// Wrap explicit samples. Requires T > 0, at least two points and finite
    /// values.
    pub fn new(t_end: f64, values: Vec<f64>) -> Result<Self> {
        if !(t_end.is_finite() && t_end > 0.0) {
            return Err(ValidationError::HorizonNotPositive.into());
        }
        if values.len() < 2 {
            return Err(ValidationError::GridTooCoarse { min: 2, got: values.len() }.into());
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("grid values must be finite".into()));
        }
        Ok(GridFn { t_end, values })
    }

    /// Sample a closure at the grid nodes.
    pub fn from_fn(t_end: f64, n_points: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if !(t_end.is_finite() && t_end > 0.0) {
            return Err(ValidationError::HorizonNotPositive.into());
        }
        if n_points < 2 {
            return Err(ValidationError::GridTooCoarse { min: 2, got: n_points }.into());
        }
        let h = t_end / (n_points - 1) as f64;
        let values: Vec<f64> = (0..n_points).map(|k| f(k as f64 * h)).collect();
        Self::new(t_end, values)
    }

    /// All-zero grid. Panics on an invalid shape; callers validate upstream.
    pub fn zeros(t_end: f64, n_points: usize) -> Self {
        assert!(t_end > 0.0 && n_points >= 2, "invalid grid shape");
        GridFn { t_end, values: vec![0.0; n_points] }
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn n_points(&self) -> usize {
        self.values.len()
    }

    /// Grid spacing h = T/(n−1).
    pub fn h(&self) -> f64 {
        self.t_end / (self.values.len() - 1) as f64
    }

    /// Node abscissa t_k = k·h.
    pub fn t(&self, k: usize) -> f64 {
        k as f64 * self.h()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Sup-norm of the node-wise difference. The grids must match.
    pub fn max_abs_diff(&self, other: &GridFn) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    pub fn check_same_grid(&self, other: &GridFn) -> Result<()> {
        if self.values.len() != other.values.len() || self.t_end != other.t_end {
            return Err(Error::DimensionMismatch(format!(
                "grids differ: ({}, T={}) vs ({}, T={})",
                self.values.len(),
                self.t_end,
                other.values.len(),
                other.t_end
            )));
        }
        Ok(())
    }

    /// Node-wise map onto the same grid.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> GridFn {
        GridFn { t_end: self.t_end, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    /// self += a·other.
    pub fn add_scaled(&mut self, a: f64, other: &GridFn) -> Result<()> {
        self.check_same_grid(other)?;
        for (x, y) in self.values.iter_mut().zip(&other.values) {
            *x += a * y;
        }
        Ok(())
    }

    /// Keep every `factor`-th node. Requires (n−1) divisible by `factor`.
    pub fn downsample(&self, factor: usize) -> Result<GridFn> {
        if factor == 0 || (self.values.len() - 1) % factor != 0 {
            return Err(Error::DimensionMismatch(format!(
                "cannot downsample {} points by {}",
                self.values.len(),
                factor
            )));
        }
        let values: Vec<f64> = self.values.iter().step_by(factor).copied().collect();
        Ok(GridFn { t_end: self.t_end, values })
    }

    /// Second-order finite-difference first derivative: central in the
    /// interior, one-sided at the ends. Diagnostics-grade.
    pub fn fd_derivative(&self) -> GridFn {
        let n = self.values.len();
        let h = self.h();
        let v = &self.values;
        let mut d = vec![0.0; n];
        if n == 2 {
            let slope = (v[1] - v[0]) / h;
            d[0] = slope;
            d[1] = slope;
        } else {
            d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
            for k in 1..n - 1 {
                d[k] = (v[k + 1] - v[k - 1]) / (2.0 * h);
            }
            d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
        }
        GridFn { t_end: self.t_end, values: d }
    }

    /// m-fold application of [`fd_derivative`](Self::fd_derivative).
    pub fn fd_derivative_m(&self, m: usize) -> GridFn {
        let mut g = self.clone();
        for _ in 0..m {
            g = g.fd_derivative();
        }
        g
    }
}
