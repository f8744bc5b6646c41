//! Piecewise cubic Hermite interpolant of complex samples on a uniform grid,
//! with integrals against `ln(k - ζ)` and `1/(ζ - k)` kernels: closed-form
//! product integration on intervals near `k`, Gauss–Legendre elsewhere.

use crate::grid::UniformGrid;
use crate::C64;

const NEAR: f64 = 4.0;

const GL_X: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_W: [f64; 8] = [
    0.101_228_536_290_376_26,
    0.222_381_034_453_374_47,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_47,
    0.101_228_536_290_376_26,
];

#[derive(Debug, Clone)]
pub(crate) struct Hermite {
    grid: UniformGrid,
    /// `[c0, c1, c2, c3]` per interval in the local variable `s = ζ - k_j`.
    coef: Vec<[C64; 4]>,
}

/// Nodal derivatives: fourth-order central differences inside, lower order
/// near the ends.
fn derivatives(y: &[C64], h: f64) -> Vec<C64> {
    let n = y.len();
    let mut d = vec![C64::new(0.0, 0.0); n];
    for i in 0..n {
        d[i] = if i >= 2 && i + 2 < n {
            (-y[i + 2] + 8.0 * y[i + 1] - 8.0 * y[i - 1] + y[i - 2]) / (12.0 * h)
        } else if i >= 1 && i + 1 < n {
            (y[i + 1] - y[i - 1]) / (2.0 * h)
        } else if n >= 3 && i == 0 {
            (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h)
        } else if n >= 3 {
            (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * h)
        } else {
            (y[1] - y[0]) / h
        };
    }
    d
}

impl Hermite {
    pub fn new(grid: UniformGrid, y: &[C64]) -> Self {
        let h = grid.step();
        let d = derivatives(y, h);
        let coef = (0..y.len() - 1)
            .map(|j| {
                let slope = (y[j + 1] - y[j]) / h;
                [y[j], d[j], (3.0 * slope - 2.0 * d[j] - d[j + 1]) / h, (d[j] + d[j + 1] - 2.0 * slope) / (h * h)]
            })
            .collect();
        Hermite { grid, coef }
    }

    /// Same data on every other node.
    pub fn coarsened(grid: &UniformGrid, y: &[C64]) -> Option<Self> {
        let n = y.len();
        if n < 9 || n % 2 == 0 {
            return None;
        }
        let g = UniformGrid::new(grid.start(), grid.end(), n / 2 + 1).ok()?;
        let ys: Vec<C64> = y.iter().step_by(2).copied().collect();
        Some(Self::new(g, &ys))
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn eval(&self, x: f64) -> C64 {
        let (j, s) = self.grid.locate(x).expect("evaluation point inside grid");
        let c = &self.coef[j];
        c[0] + s * (c[1] + s * (c[2] + s * c[3]))
    }

    fn deriv_local(c: &[C64; 4], s: f64) -> C64 {
        c[1] + s * (2.0 * c[2] + s * 3.0 * c[3])
    }

    /// Sub-intervals `(j, ζ_lo, ζ_hi)` covering `[start, b]`; shared end
    /// points are bit-identical between neighbours.
    fn pieces(&self, b: f64) -> Vec<(usize, f64, f64)> {
        let (jb, sb) = self.grid.locate(b).expect("upper limit inside grid");
        let mut out: Vec<(usize, f64, f64)> = (0..jb).map(|j| (j, self.grid.node(j), self.grid.node(j + 1))).collect();
        if sb > 0.0 {
            out.push((jb, self.grid.node(jb), b));
        }
        out
    }

    fn is_near(&self, j: usize, k: C64) -> bool {
        let h = self.grid.step();
        let lo = self.grid.node(j);
        let dx = if k.re < lo { lo - k.re } else if k.re > lo + h { k.re - lo - h } else { 0.0 };
        dx.hypot(k.im) < NEAR * h
    }

    /// `∫_{start}^{b} ln(k - ζ) f'(ζ) dζ` with the principal logarithm; `k`
    /// must not lie on `(-∞, b]`.
    pub fn log_moment(&self, b: f64, k: C64) -> C64 {
        let mut total = C64::new(0.0, 0.0);
        for (j, za, zb) in self.pieces(b) {
            let c = &self.coef[j];
            let kj = self.grid.node(j);
            let (sa, sb) = (za - kj, zb - kj);
            if self.is_near(j, k) {
                let sk = k - kj;
                let e = [c[1] + 2.0 * c[2] * sk + 3.0 * c[3] * sk * sk, -2.0 * c[2] - 6.0 * c[3] * sk, 3.0 * c[3]];
                let big_f = |u: C64| -> C64 {
                    if u.norm() == 0.0 {
                        return C64::new(0.0, 0.0);
                    }
                    let lu = u.ln();
                    let mut acc = C64::new(0.0, 0.0);
                    let mut up = u;
                    for (n, en) in e.iter().enumerate() {
                        let m = (n + 1) as f64;
                        acc += en * up * (lu / m - 1.0 / (m * m));
                        up *= u;
                    }
                    acc
                };
                total += big_f(k - za) - big_f(k - zb);
            } else {
                let (mid, half) = (0.5 * (sa + sb), 0.5 * (sb - sa));
                for (x, w) in GL_X.iter().zip(GL_W) {
                    let s = mid + half * x;
                    total += w * half * (k - (kj + s)).ln() * Self::deriv_local(c, s);
                }
            }
        }
        total
    }

    /// `∫_{start}^{b} f(ζ)/(ζ - k) dζ`. For real `k` inside the range this is
    /// the principal value.
    pub fn cauchy(&self, b: f64, k: C64) -> C64 {
        let real_k = k.im == 0.0;
        let mut total = C64::new(0.0, 0.0);
        for (j, za, zb) in self.pieces(b) {
            let c = &self.coef[j];
            let kj = self.grid.node(j);
            let (sa, sb) = (za - kj, zb - kj);
            if self.is_near(j, k) {
                let sk = k - kj;
                let (va, vb) = (za - k, zb - k);
                let p_at = c[0] + sk * (c[1] + sk * (c[2] + sk * c[3]));
                let dv = vb - va;
                let dv2 = vb * vb - va * va;
                let dv3 = vb * vb * vb - va * va * va;
                let q = c[1] * dv + c[2] * (dv2 / 2.0 + 2.0 * sk * dv) + c[3] * (dv3 / 3.0 + 1.5 * sk * dv2 + 3.0 * sk * sk * dv);
                let ln = |v: C64| -> C64 {
                    if real_k {
                        if v.re.abs() < 1e-12 * self.grid.step() {
                            // cancels against the neighbouring interval in a principal value
                            C64::new(0.0, 0.0)
                        } else {
                            C64::new(v.re.abs().ln(), 0.0)
                        }
                    } else {
                        v.ln()
                    }
                };
                total += q + p_at * (ln(vb) - ln(va));
            } else {
                let (mid, half) = (0.5 * (sa + sb), 0.5 * (sb - sa));
                for (x, w) in GL_X.iter().zip(GL_W) {
                    let s = mid + half * x;
                    let f = c[0] + s * (c[1] + s * (c[2] + s * c[3]));
                    total += w * half * f / (kj + s - k);
                }
            }
        }
        total
    }
}
