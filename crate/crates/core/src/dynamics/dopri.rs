//! Dormand-Prince 5(4) embedded Runge-Kutta pair with local error control on
//! fixed-size real state vectors.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;

// fifth-order weights (also the last stage row, FSAL)
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

// fifth minus fourth order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

/// Adaptive stepper. `h` carries the step size suggestion across calls so
/// that consecutive output intervals do not restart the controller.
pub(crate) struct Stepper<const N: usize> {
    pub h: f64,
    pub steps: usize,
    tol: Tolerance,
}

fn axpy<const N: usize>(y: &[f64; N], terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..N {
            out[i] += c * k[i];
        }
    }
    out
}

impl<const N: usize> Stepper<N> {
    pub fn new(h0: f64, tol: Tolerance) -> Self {
        Stepper { h: h0, steps: 0, tol }
    }

    /// Advances `y` from `t` to `t_end` exactly.
    pub fn advance<F>(&mut self, rhs: &F, t: f64, y: [f64; N], t_end: f64) -> Result<[f64; N]>
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
    {
        let mut t = t;
        let mut y = y;
        let span = t_end - t;
        if span <= 0.0 {
            return Ok(y);
        }
        let h_min = 1e-14 * t_end.abs().max(span);
        let mut k1 = rhs(t, &y);
        while t < t_end {
            let last = self.h >= t_end - t;
            let h = if last { t_end - t } else { self.h };

            let k2 = rhs(t + C2 * h, &axpy(&y, &[(h * A21, &k1)]));
            let k3 = rhs(t + C3 * h, &axpy(&y, &[(h * A31, &k1), (h * A32, &k2)]));
            let k4 = rhs(
                t + C4 * h,
                &axpy(&y, &[(h * A41, &k1), (h * A42, &k2), (h * A43, &k3)]),
            );
            let k5 = rhs(
                t + C5 * h,
                &axpy(
                    &y,
                    &[(h * A51, &k1), (h * A52, &k2), (h * A53, &k3), (h * A54, &k4)],
                ),
            );
            let k6 = rhs(
                t + h,
                &axpy(
                    &y,
                    &[
                        (h * A61, &k1),
                        (h * A62, &k2),
                        (h * A63, &k3),
                        (h * A64, &k4),
                        (h * A65, &k5),
                    ],
                ),
            );
            let y_new = axpy(
                &y,
                &[(h * B1, &k1), (h * B3, &k3), (h * B4, &k4), (h * B5, &k5), (h * B6, &k6)],
            );
            let k7 = rhs(t + h, &y_new);

            let mut acc = 0.0;
            for i in 0..N {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                        + E7 * k7[i]);
                let scale = self.tol.atol + self.tol.rtol * y[i].abs().max(y_new[i].abs());
                acc += (e / scale).powi(2);
            }
            let err = (acc / N as f64).sqrt();

            self.steps += 1;
            if self.steps > self.tol.max_steps {
                return Err(Error::StepCollapse { time: t, step: h });
            }
            if !err.is_finite() {
                self.h = 0.25 * h;
                if self.h < h_min {
                    return Err(Error::StepCollapse { time: t, step: h });
                }
                continue;
            }

            let factor = if err == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
            };
            if err <= 1.0 {
                t = if last { t_end } else { t + h };
                y = y_new;
                k1 = k7;
                // a clipped final step says nothing about the natural step size
                if !last || factor < 1.0 {
                    self.h = h * factor;
                }
            } else {
                self.h = h * factor.min(1.0);
                if self.h < h_min {
                    return Err(Error::StepCollapse { time: t, step: self.h });
                }
            }
        }
        Ok(y)
    }
}
