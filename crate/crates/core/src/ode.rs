//! Adaptive Dormand–Prince 5(4) integrator for complex first-order systems
//! `y' = f(t, y)` with a real independent variable.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; `None` picks one from the interval length.
    pub h_init: Option<f64>,
    pub h_min: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-300,
            h_init: None,
            h_min: 1e-14,
            max_steps: 5_000_000,
        }
    }
}

/// What the step observer wants the integrator to do next.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepControl {
    Continue,
    /// The observer rescaled or otherwise changed the state in place.
    Modified,
    Stop,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOutcome<const N: usize> {
    pub t: f64,
    pub y: [Complex64; N],
    pub steps: usize,
    pub rejected: usize,
    pub stopped: bool,
}

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
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// differences between the 5th and embedded 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy<const N: usize>(y: &[Complex64; N], terms: &[(f64, &[Complex64; N])], h: f64) -> [Complex64; N] {
    let mut out = *y;
    for (c, k) in terms {
        if *c == 0.0 {
            continue;
        }
        let s = c * h;
        for i in 0..N {
            out[i] += k[i] * s;
        }
    }
    out
}

fn finite<const N: usize>(y: &[Complex64; N]) -> bool {
    y.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Integrates from `t0` to `t1` (either direction) without observation.
pub fn integrate<const N: usize, F>(
    f: F,
    t0: f64,
    t1: f64,
    y0: [Complex64; N],
    opts: &OdeOptions,
) -> Result<[Complex64; N]>
where
    F: FnMut(f64, &[Complex64; N]) -> [Complex64; N],
{
    Ok(integrate_observed(f, t0, t1, y0, opts, |_, _| StepControl::Continue)?.y)
}

/// Integrates from `t0` to `t1`, calling `observe` after every accepted
/// step. The observer may rescale the state or stop the integration.
pub fn integrate_observed<const N: usize, F, O>(
    mut f: F,
    t0: f64,
    t1: f64,
    y0: [Complex64; N],
    opts: &OdeOptions,
    mut observe: O,
) -> Result<OdeOutcome<N>>
where
    F: FnMut(f64, &[Complex64; N]) -> [Complex64; N],
    O: FnMut(f64, &mut [Complex64; N]) -> StepControl,
{
    let span = t1 - t0;
    let mut out = OdeOutcome {
        t: t0,
        y: y0,
        steps: 0,
        rejected: 0,
        stopped: false,
    };
    if span == 0.0 {
        return Ok(out);
    }
    let dir = span.signum();
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut h = opts
        .h_init
        .map(|h| h.abs())
        .unwrap_or_else(|| initial_step(&y, &k1, span.abs(), opts));
    h = h.min(span.abs());
    let h_floor = opts.h_min * span.abs().max(1.0);
    let mut fac_prev: f64 = 1e-4;

    loop {
        if out.steps + out.rejected >= opts.max_steps {
            return Err(Error::StepUnderflow(t));
        }
        let remaining = (t1 - t) * dir;
        if remaining <= 0.0 {
            break;
        }
        let last = h >= remaining;
        let hs = if last { remaining } else { h } * dir;

        let k2 = f(t + C2 * hs, &axpy(&y, &[(A21, &k1)], hs));
        let k3 = f(t + C3 * hs, &axpy(&y, &[(A31, &k1), (A32, &k2)], hs));
        let k4 = f(t + C4 * hs, &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], hs));
        let k5 = f(
            t + C5 * hs,
            &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], hs),
        );
        let k6 = f(
            t + hs,
            &axpy(
                &y,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                hs,
            ),
        );
        let y_new = axpy(
            &y,
            &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
            hs,
        );
        let k7 = f(t + hs, &y_new);

        let mut err = 0.0;
        let mut ok = finite(&y_new) && finite(&k7);
        if ok {
            for i in 0..N {
                let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7)
                    * hs;
                let sc = opts.atol + opts.rtol * y[i].norm().max(y_new[i].norm());
                let r = e.norm() / sc;
                err += r * r;
            }
            err = (err / N as f64).sqrt();
            ok = err.is_finite();
        }

        if ok && err <= 1.0 {
            t = if last { t1 } else { t + hs };
            y = y_new;
            k1 = k7;
            out.steps += 1;
            match observe(t, &mut y) {
                StepControl::Continue => {}
                StepControl::Modified => k1 = f(t, &y),
                StepControl::Stop => {
                    out.stopped = true;
                    break;
                }
            }
            if last {
                break;
            }
            // PI step-size control (Hairer's beta = 0.04)
            let e = err.max(1e-10);
            let fac = (0.9 * e.powf(-0.7 / 5.0) * fac_prev.powf(0.04)).clamp(0.2, 5.0);
            fac_prev = e;
            h *= fac;
        } else {
            out.rejected += 1;
            let fac = if ok {
                (0.9 * err.powf(-0.2)).clamp(0.1, 0.9)
            } else {
                0.25
            };
            h *= fac;
            if h < h_floor {
                return Err(Error::StepUnderflow(t));
            }
        }
    }
    out.t = t;
    out.y = y;
    Ok(out)
}

fn initial_step<const N: usize>(y: &[Complex64; N], dy: &[Complex64; N], span: f64, opts: &OdeOptions) -> f64 {
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for i in 0..N {
        let sc = opts.atol + opts.rtol * y[i].norm();
        d0 += (y[i].norm() / sc).powi(2);
        d1 += (dy[i].norm() / sc).powi(2);
    }
    let h = if d0 < 1e-10 || d1 < 1e-10 {
        1e-6 * span
    } else {
        0.01 * (d0 / d1).sqrt()
    };
    h.min(span).max(1e-12 * span)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn exponential_growth_to_tolerance() {
        let opts = OdeOptions {
            rtol: 1e-12,
            ..Default::default()
        };
        let lam = c(0.3, 2.0);
        let y = integrate(|_, y: &[Complex64; 1]| [lam * y[0]], 0.0, 3.0, [c(1.0, 0.0)], &opts).unwrap();
        let exact = (lam * 3.0).exp();
        assert!((y[0] - exact).norm() / exact.norm() < 1e-10);
    }

    #[test]
    fn backward_integration_matches_forward() {
        let opts = OdeOptions {
            rtol: 1e-12,
            ..Default::default()
        };
        let f = |t: f64, y: &[Complex64; 2]| [y[1], -y[0] * (1.0 + t)];
        let y1 = integrate(f, 0.0, 2.0, [c(1.0, 0.5), c(0.0, -1.0)], &opts).unwrap();
        let y0 = integrate(f, 2.0, 0.0, y1, &opts).unwrap();
        assert!((y0[0] - c(1.0, 0.5)).norm() < 1e-9);
        assert!((y0[1] - c(0.0, -1.0)).norm() < 1e-9);
    }

    #[test]
    fn observer_can_stop() {
        let out = integrate_observed(
            |_, y: &[Complex64; 1]| [y[0] * y[0]],
            0.0,
            2.0,
            [c(1.0, 0.0)],
            &OdeOptions::default(),
            |_, y| {
                if y[0].norm() > 1e3 {
                    StepControl::Stop
                } else {
                    StepControl::Continue
                }
            },
        )
        .unwrap();
        assert!(out.stopped);
        // blow-up of 1/(1-t) at t = 1
        assert!((out.t - 1.0).abs() < 1e-2);
    }
}
