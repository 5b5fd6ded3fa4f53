//! Shape-preserving (Fritsch–Carlson) cubic interpolation on a uniform grid.

/// Monotone cubic Hermite interpolant of uniform-grid samples. Evaluation at
/// a node returns the node value exactly.
#[derive(Debug, Clone)]
pub(crate) struct MonotoneCubic {
    h: f64,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(t_end: f64, values: &[f64]) -> Self {
        let n = values.len();
        assert!(n >= 2 && t_end > 0.0, "need at least two nodes");
        let h = t_end / (n - 1) as f64;
        let deltas: Vec<f64> = values.windows(2).map(|w| (w[1] - w[0]) / h).collect();
        let mut slopes = vec![0.0; n];
        if n == 2 {
            slopes[0] = deltas[0];
            slopes[1] = deltas[0];
        } else {
            slopes[0] = edge_slope(deltas[0], deltas[1]);
            for k in 1..n - 1 {
                let (d0, d1) = (deltas[k - 1], deltas[k]);
                slopes[k] = if d0 * d1 <= 0.0 {
                    0.0
                } else {
                    // harmonic mean; uniform spacing makes the weights equal
                    2.0 * d0 * d1 / (d0 + d1)
                };
            }
            slopes[n - 1] = edge_slope(deltas[n - 2], deltas[n - 3]);
        }
        MonotoneCubic { h, values: values.to_vec(), slopes }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.values.len();
        let max_x = self.h * (n - 1) as f64;
        let x = x.clamp(0.0, max_x);
        let mut seg = (x / self.h).floor() as usize;
        if seg >= n - 1 {
            seg = n - 2;
        }
        let s = (x - seg as f64 * self.h) / self.h;
        let (y0, y1) = (self.values[seg], self.values[seg + 1]);
        let (d0, d1) = (self.slopes[seg], self.slopes[seg + 1]);
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * y0 + h10 * self.h * d0 + h01 * y1 + h11 * self.h * d1
    }
}

/// One-sided three-point end slope with the usual shape-preserving clips.
fn edge_slope(d_near: f64, d_far: f64) -> f64 {
    let d = (3.0 * d_near - d_far) / 2.0;
    if d * d_near <= 0.0 {
        0.0
    } else if d_near * d_far < 0.0 && d.abs() > 3.0 * d_near.abs() {
        3.0 * d_near
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_at_nodes() {
        let vals: Vec<f64> = (0..9).map(|k| ((k as f64) * 0.3).sin()).collect();
        let c = MonotoneCubic::new(2.0, &vals);
        for (k, v) in vals.iter().enumerate() {
            let x = 2.0 * k as f64 / 8.0;
            assert_eq!(c.eval(x), *v, "node {k}");
        }
    }

    #[test]
    fn preserves_monotonicity() {
        let vals = [0.0, 0.0, 0.1, 0.9, 1.0, 1.0];
        let c = MonotoneCubic::new(1.0, &vals);
        let mut prev = c.eval(0.0);
        for k in 1..=400 {
            let x = k as f64 / 400.0;
            let y = c.eval(x);
            assert!(y >= prev - 1e-14, "not monotone at {x}");
            prev = y;
        }
    }

    #[test]
    fn accurate_on_smooth_function() {
        let n = 129;
        let f = |t: f64| (1.7 * t).cos() + t;
        let vals: Vec<f64> = (0..n).map(|k| f(k as f64 / (n - 1) as f64)).collect();
        let c = MonotoneCubic::new(1.0, &vals);
        for k in 0..500 {
            let x = k as f64 / 499.0;
            assert!((c.eval(x) - f(x)).abs() < 5e-6);
        }
    }

    #[test]
    fn clamps_out_of_range() {
        let vals = [0.0, 1.0, 2.0];
        let c = MonotoneCubic::new(1.0, &vals);
        assert_eq!(c.eval(-0.5), 0.0);
        assert_eq!(c.eval(1.5), 2.0);
    }
}
