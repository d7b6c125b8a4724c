use crate::error::{Error, Result};

/// Natural cubic spline through (x_i, y_i).
///
/// Natural rather than Hermite: with derivative-free end conditions an
/// under-resolved oscillation is smoothed instead of overshooting.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn natural(x: Vec<f64>, y: Vec<f64>) -> Result<CubicSpline> {
        let n = x.len();
        if n < 3 || y.len() != n {
            return Err(Error::invalid("spline", "needs at least 3 points and matching lengths"));
        }
        if !x.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::invalid("spline", "abscissae must be strictly increasing"));
        }
        if !y.iter().all(|v| v.is_finite()) {
            return Err(Error::invalid("spline", "ordinates must be finite"));
        }
        // Tridiagonal system for interior second derivatives (Thomas algorithm).
        let mut m = vec![0.0; n];
        let mut c_prime = vec![0.0; n];
        let mut d_prime = vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            let a = h0;
            let b = 2.0 * (h0 + h1);
            let c = h1;
            let d = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
            let denom = b - a * c_prime[i - 1];
            c_prime[i] = c / denom;
            d_prime[i] = (d - a * d_prime[i - 1]) / denom;
        }
        for i in (1..n - 1).rev() {
            m[i] = d_prime[i] - c_prime[i] * m[i + 1];
        }
        Ok(CubicSpline { x, y, m })
    }

    pub fn knots(&self) -> impl Iterator<Item = (&f64, &f64)> {
        self.x.iter().zip(&self.y)
    }

    pub fn abscissae(&self) -> &[f64] {
        &self.x
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    fn segment(&self, t: f64) -> usize {
        let n = self.x.len();
        match self.x.partition_point(|&v| v <= t) {
            0 => 0,
            k if k >= n => n - 2,
            k => k - 1,
        }
    }

    /// Value and first derivative. Outside the knots the end cubics are
    /// continued.
    pub fn eval(&self, t: f64) -> (f64, f64) {
        let i = self.segment(t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let value = a * self.y[i] + b * self.y[i + 1] + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let slope = (self.y[i + 1] - self.y[i]) / h + ((3.0 * b * b - 1.0) * m1 - (3.0 * a * a - 1.0) * m0) * h / 6.0;
        (value, slope)
    }

    pub fn value(&self, t: f64) -> f64 {
        self.eval(t).0
    }

    pub fn derivative(&self, t: f64) -> f64 {
        self.eval(t).1
    }
}
