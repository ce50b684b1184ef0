//! Convolution backend.
//!
//! The cavity state at time `t` is
//! `y(t) = Phi(t - t0) y0 + int_{t0}^t Phi(t - t') f(t') dt'` with
//! `Phi(u) = exp(A u)` in closed form. The history part uses the trapezoid rule
//! with the Euler-Maclaurin endpoint correction, which needs the source slope
//! `df/dt` at every stored sample; the slope follows from `drho/dt`, already
//! available as the first Runge-Kutta stage. The piece inside the current step
//! integrates a quadratic through `f_n`, `df_n` and the stage source by
//! three-point Gauss-Legendre. Every part is fourth order or better, so the
//! backend tracks the auxiliary oscillator to the Runge-Kutta truncation error.

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64 as C64;

use super::{Dynamics, MeanFieldState, Recorder};
use crate::error::Result;
use crate::linalg::CMatrix;
use crate::model::TimeGrid;

const GL3_NODES: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
const GL3_WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];

/// Endpoint-slope refinements of `y_n`. The fixed point contracts by a factor
/// of order `(lambda dt)^2`.
const SLOPE_REFINEMENTS: usize = 2;

struct Convolution {
    h: f64,
    a: Matrix2<f64>,
    y0: Vector2<f64>,
    /// `Phi(k h / 2)`
    table: Vec<Matrix2<f64>>,
    /// Gauss-Legendre data for local spans of `h/2` and `h`:
    /// `(tau_i, w_i, Phi(L - tau_i))`.
    local: [[(f64, f64, Matrix2<f64>); 3]; 2],
    f: Vec<Vector2<f64>>,
    df: Vec<Vector2<f64>>,
}

impl Convolution {
    fn new(dynamics: &Dynamics, grid: &TimeGrid, y0: Vector2<f64>) -> Self {
        let h = grid.dt();
        let n = grid.n_steps();
        let flow = &dynamics.flow;
        let table = (0..=2 * n + 2).map(|k| flow.at(0.5 * h * k as f64)).collect();
        let gl = |span: f64| {
            let mut out = [(0.0, 0.0, Matrix2::zeros()); 3];
            for (i, slot) in out.iter_mut().enumerate() {
                let tau = 0.5 * span * (1.0 + GL3_NODES[i]);
                *slot = (tau, 0.5 * span * GL3_WEIGHTS[i], flow.at(span - tau));
            }
            out
        };
        Self {
            h,
            a: *flow.generator(),
            y0,
            table,
            local: [gl(0.5 * h), gl(h)],
            f: Vec::with_capacity(n + 1),
            df: Vec::with_capacity(n + 1),
        }
    }

    /// Free evolution plus the history integral over `[t0, t_n]`, evaluated at
    /// `t_n + offset h / 2`, except for the endpoint-slope term supplied by
    /// [`Self::end_slope`].
    fn history(&self, n: usize, offset: usize) -> Vector2<f64> {
        let t = &self.table;
        let mut y = t[2 * n + offset] * self.y0;
        if n == 0 {
            return y;
        }
        let mut sum = (t[2 * n + offset] * self.f[0] + t[offset] * self.f[n]) * 0.5;
        for j in 1..n {
            sum += t[2 * (n - j) + offset] * self.f[j];
        }
        // g(t') = Phi(t_s - t') f(t'),  g' = Phi (df - A f)
        let g_end = -(t[offset] * (self.a * self.f[n]));
        let g_start = t[2 * n + offset] * (self.df[0] - self.a * self.f[0]);
        y += sum * self.h - (g_end - g_start) * (self.h * self.h / 12.0);
        y
    }

    fn end_slope(&self, n: usize, offset: usize, df_n: &Vector2<f64>) -> Vector2<f64> {
        if n == 0 {
            return Vector2::zeros();
        }
        -(self.table[offset] * df_n) * (self.h * self.h / 12.0)
    }

    /// Integral over `[t_n, t_n + L]` of `Phi(t_n + L - t') P(t')`, with `P`
    /// the quadratic matching `f_n`, `df_n` and `f_stage` at the far end.
    fn local(&self, n: usize, full: bool, f_stage: &Vector2<f64>) -> Vector2<f64> {
        let span = if full { self.h } else { 0.5 * self.h };
        let f0 = self.f[n];
        let d0 = self.df[n];
        let curv = (f_stage - f0 - d0 * span) / (span * span);
        let mut acc = Vector2::zeros();
        for (tau, w, phi) in &self.local[full as usize] {
            let p = f0 + d0 * *tau + curv * (tau * tau);
            acc += phi * p * *w;
        }
        acc
    }
}

pub(super) fn propagate(
    dynamics: &Dynamics,
    grid: &TimeGrid,
    init: MeanFieldState,
    recorder: &mut Recorder<'_>,
) -> Result<()> {
    let h = grid.dt();
    let mut conv = Convolution::new(dynamics, grid, Vector2::new(init.q, init.p));
    let mut rho = init.rho.clone();
    let half = C64::new(0.5 * h, 0.0);
    // Predicted source slope at the current sample.
    let mut df_guess = Vector2::zeros();

    for n in 0..=grid.n_steps() {
        let t = grid.time(n);
        conv.f.push(dynamics.forcing(t, &rho));

        // y_n depends on df_n through the endpoint correction, df_n on y_n
        // through drho/dt.
        let base = conv.history(n, 0);
        let mut y;
        let mut k1: CMatrix;
        let mut df = df_guess;
        let mut sweep = 0;
        loop {
            y = base + conv.end_slope(n, 0, &df);
            k1 = dynamics.rho_rate(t, &rho, &y);
            df = dynamics.forcing_rate(t, &k1);
            sweep += 1;
            if n == 0 || sweep > SLOPE_REFINEMENTS {
                break;
            }
        }
        conv.df.push(df);

        let state = MeanFieldState {
            rho: rho.clone(),
            q: y[0],
            p: y[1],
            t,
        };
        recorder.visit(n, state)?;
        if n == grid.n_steps() {
            break;
        }

        let th = t + 0.5 * h;
        let mid = conv.history(n, 1) + conv.end_slope(n, 1, &df);

        let rho2 = &rho + &k1 * half;
        let f2 = dynamics.forcing(th, &rho2);
        let y2 = mid + conv.local(n, false, &f2);
        let k2 = dynamics.rho_rate(th, &rho2, &y2);

        let rho3 = &rho + &k2 * half;
        let f3 = dynamics.forcing(th, &rho3);
        let y3 = mid + conv.local(n, false, &f3);
        let k3 = dynamics.rho_rate(th, &rho3, &y3);

        let rho4 = &rho + &k3 * C64::new(h, 0.0);
        let f4 = dynamics.forcing(t + h, &rho4);
        let y4 = conv.history(n, 2) + conv.end_slope(n, 2, &df) + conv.local(n, true, &f4);
        let k4 = dynamics.rho_rate(t + h, &rho4, &y4);

        rho += (k1 + (k2 + k3) * C64::new(2.0, 0.0) + &k4) * C64::new(h / 6.0, 0.0);
        df_guess = dynamics.forcing_rate(t + h, &k4);
    }
    Ok(())
}
