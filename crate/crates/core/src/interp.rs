//! Interpolation of complex samples on uniform grids.

use crate::grid::UniformGrid;
use crate::C64;

/// Natural cubic spline through complex samples; zero outside the grid.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    grid: UniformGrid,
    y: Vec<C64>,
    m: Vec<C64>,
}

impl CubicSpline {
    pub fn new(grid: UniformGrid, y: Vec<C64>) -> Self {
        assert_eq!(grid.len(), y.len());
        let n = y.len();
        let h = grid.step();
        let mut m = vec![C64::new(0.0, 0.0); n];
        if n > 2 {
            // Thomas algorithm for M_{i-1} + 4 M_i + M_{i+1} = 6 (y_{i+1} - 2 y_i + y_{i-1}) / h^2
            let inner = n - 2;
            let mut cp = vec![0.0; inner];
            let mut dp = vec![C64::new(0.0, 0.0); inner];
            for k in 0..inner {
                let i = k + 1;
                let rhs = (y[i + 1] - 2.0 * y[i] + y[i - 1]) * (6.0 / (h * h));
                if k == 0 {
                    cp[k] = 0.25;
                    dp[k] = rhs / 4.0;
                } else {
                    let denom = 4.0 - cp[k - 1];
                    cp[k] = 1.0 / denom;
                    dp[k] = (rhs - dp[k - 1]) / denom;
                }
            }
            m[inner] = dp[inner - 1];
            for k in (0..inner - 1).rev() {
                m[k + 1] = dp[k] - cp[k] * m[k + 2];
            }
        }
        CubicSpline { grid, y, m }
    }

    pub fn eval(&self, x: f64) -> C64 {
        let Some((j, s)) = self.grid.locate(x) else {
            return C64::new(0.0, 0.0);
        };
        let h = self.grid.step();
        let t = h - s;
        (self.m[j] * (t * t * t) + self.m[j + 1] * (s * s * s)) / (6.0 * h)
            + (self.y[j] / h - self.m[j] * (h / 6.0)) * t
            + (self.y[j + 1] / h - self.m[j + 1] * (h / 6.0)) * s
    }
}

/// Cubic Lagrange interpolation through the four nodes surrounding `x`.
pub fn lagrange4(grid_start: f64, step: f64, values: &[C64], x: f64) -> Option<C64> {
    let n = values.len();
    let u = (x - grid_start) / step;
    let j = u.floor() as isize;
    if j < 1 || j + 2 >= n as isize {
        return None;
    }
    let s = u - j as f64;
    let j = j as usize;
    let w = [
        -s * (s - 1.0) * (s - 2.0) / 6.0,
        (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
        -(s + 1.0) * s * (s - 2.0) / 2.0,
        (s + 1.0) * s * (s - 1.0) / 6.0,
    ];
    Some(values[j - 1] * w[0] + values[j] * w[1] + values[j + 1] * w[2] + values[j + 2] * w[3])
}
