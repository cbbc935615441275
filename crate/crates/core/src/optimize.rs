//! Derivative-free optimizers: Brent minimization and root finding in one
//! dimension, Nelder–Mead in two.
//!
//! [`minimize_2d`] works on the open positive quadrant by searching over
//! log-parameters, so the objective is never evaluated at a non-positive point.

use crate::error::{GeError, Result};
use serde::{Deserialize, Serialize};

pub const DEFAULT_TOL_1D: f64 = 1e-10;
pub const DEFAULT_TOL_2D: f64 = 1e-8;
pub const DEFAULT_MAX_ITER: usize = 2000;

/// Outcome of an optimizer run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimResult {
    pub argmin: Vec<f64>,
    pub objective_value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    pub tolerance_achieved: f64,
}

impl OptimResult {
    /// Result for closed-form or root-based estimators that run no search.
    pub fn exact(argmin: Vec<f64>, objective_value: f64, iterations: usize) -> Self {
        OptimResult {
            argmin,
            objective_value,
            iterations,
            evaluations: iterations,
            converged: true,
            tolerance_achieved: 0.0,
        }
    }
}

const GOLDEN: f64 = 0.381_966_011_250_105_1;

/// Brent's minimizer (golden section with parabolic steps) on `bracket`.
pub fn minimize_1d<F>(mut f: F, bracket: (f64, f64), tol: f64) -> Result<OptimResult>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if bracket.0 < bracket.1 {
        bracket
    } else {
        (bracket.1, bracket.0)
    };
    if !(a.is_finite() && b.is_finite()) || a == b {
        return Err(crate::error::domain(
            "minimize_1d",
            format!("degenerate bracket [{}, {}]", bracket.0, bracket.1),
        ));
    }
    let mut eval = |x: f64, count: &mut usize| -> Result<f64> {
        *count += 1;
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(GeError::NonFinite { at: vec![x] })
        }
    };
    let mut evaluations = 0;
    let mut x = a + GOLDEN * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = eval(x, &mut evaluations)?;
    let (mut fw, mut fv) = (fx, fx);
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;

    for iter in 1..=DEFAULT_MAX_ITER {
        let m = 0.5 * (a + b);
        let tol1 = 2.0 * f64::EPSILON * x.abs() + tol / 3.0;
        let tol2 = 2.0 * tol1;
        if (x - m).abs() <= tol2 - 0.5 * (b - a) {
            return Ok(OptimResult {
                argmin: vec![x],
                objective_value: fx,
                iterations: iter,
                evaluations,
                converged: true,
                tolerance_achieved: 0.5 * (b - a),
            });
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let e_prev = e;
            e = d;
            if p.abs() < (0.5 * q * e_prev).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if x < m { tol1 } else { -tol1 };
                }
                golden = false;
            }
        }
        if golden {
            e = if x < m { b - x } else { a - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else if d > 0.0 {
            x + tol1
        } else {
            x - tol1
        };
        let fu = eval(u, &mut evaluations)?;
        if fu <= fx {
            if u < x {
                b = x;
            } else {
                a = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    Ok(OptimResult {
        argmin: vec![x],
        objective_value: fx,
        iterations: DEFAULT_MAX_ITER,
        evaluations,
        converged: false,
        tolerance_achieved: 0.5 * (b - a),
    })
}

/// Brent–Dekker root of `f` on a sign-changing bracket.
///
/// Stops once `|f(root)| <= tol` or the bracket has collapsed to adjacent floats.
pub fn root_1d<F>(mut f: F, bracket: (f64, f64), tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = bracket;
    let mut fa = f(a);
    let mut fb = f(b);
    if !(fa.is_finite() && fb.is_finite()) {
        return Err(GeError::NonFinite { at: vec![a, b] });
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(GeError::Bracketing {
            lo: a,
            hi: b,
            f_lo: fa,
            f_hi: fb,
        });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..500 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let xtol = 2.0 * f64::EPSILON * b.abs();
        let m = 0.5 * (c - b);
        if fb.abs() <= tol || m.abs() <= xtol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= xtol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (xtol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > xtol { d } else { xtol.copysign(m) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(GeError::NonFinite { at: vec![b] });
        }
    }
    Ok(b)
}

/// Nelder–Mead settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    /// Bound on both the simplex diameter and the scaled spread of vertex values.
    pub tol: f64,
    pub max_iter: usize,
    pub initial_step: f64,
    /// Number of fresh-simplex restarts from the incumbent.
    pub restarts: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            tol: DEFAULT_TOL_2D,
            max_iter: DEFAULT_MAX_ITER,
            initial_step: 0.1,
            restarts: 1,
        }
    }
}

struct Vertex {
    x: [f64; 2],
    f: f64,
}

fn simplex_diameter(s: &[Vertex]) -> f64 {
    s[1..]
        .iter()
        .map(|v| (v.x[0] - s[0].x[0]).abs().max((v.x[1] - s[0].x[1]).abs()))
        .fold(0.0, f64::max)
}

fn simplex_spread(s: &[Vertex]) -> f64 {
    (s[2].f - s[0].f) / (1.0 + s[0].f.abs())
}

/// Inserts `v` after every vertex whose value is not larger (Lagarias et al. ordering).
fn insert_ordered(s: &mut Vec<Vertex>, v: Vertex) {
    let pos = s.iter().position(|w| v.f < w.f).unwrap_or(s.len());
    s.insert(pos, v);
}

fn nelder_mead_run<F>(
    f: &mut F,
    start: [f64; 2],
    opts: &SimplexOptions,
    evaluations: &mut usize,
) -> (Vertex, usize, bool, f64)
where
    F: FnMut([f64; 2]) -> f64,
{
    let mut eval = |x: [f64; 2], count: &mut usize| {
        *count += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut simplex: Vec<Vertex> = Vec::with_capacity(3);
    for k in 0..3 {
        let mut x = start;
        if k > 0 {
            x[k - 1] += opts.initial_step;
        }
        let fx = eval(x, evaluations);
        insert_ordered(&mut simplex, Vertex { x, f: fx });
    }
    let mut iterations = 0;
    loop {
        let diameter = simplex_diameter(&simplex);
        let spread = simplex_spread(&simplex);
        let achieved = diameter.max(if spread.is_finite() { spread } else { f64::INFINITY });
        if achieved <= opts.tol {
            return (simplex.swap_remove(0), iterations, true, achieved);
        }
        if iterations >= opts.max_iter {
            return (simplex.swap_remove(0), iterations, false, achieved);
        }
        iterations += 1;

        let worst = simplex.pop().expect("three vertices");
        let centroid = [
            0.5 * (simplex[0].x[0] + simplex[1].x[0]),
            0.5 * (simplex[0].x[1] + simplex[1].x[1]),
        ];
        let along = |t: f64| {
            [
                centroid[0] + t * (worst.x[0] - centroid[0]),
                centroid[1] + t * (worst.x[1] - centroid[1]),
            ]
        };
        let xr = along(-1.0);
        let fr = eval(xr, evaluations);
        let (best_f, second_f) = (simplex[0].f, simplex[1].f);
        if fr < best_f {
            let xe = along(-2.0);
            let fe = eval(xe, evaluations);
            let v = if fe < fr {
                Vertex { x: xe, f: fe }
            } else {
                Vertex { x: xr, f: fr }
            };
            insert_ordered(&mut simplex, v);
            continue;
        }
        if fr < second_f {
            insert_ordered(&mut simplex, Vertex { x: xr, f: fr });
            continue;
        }
        // contraction, outside if the reflected point beats the worst vertex
        let (xc, fc, accept) = if fr < worst.f {
            let xc = along(-0.5);
            let fc = eval(xc, evaluations);
            (xc, fc, fc <= fr)
        } else {
            let xc = along(0.5);
            let fc = eval(xc, evaluations);
            (xc, fc, fc < worst.f)
        };
        if accept {
            insert_ordered(&mut simplex, Vertex { x: xc, f: fc });
            continue;
        }
        // shrink toward the best vertex
        simplex.push(worst);
        let best = simplex[0].x;
        let mut shrunk = vec![Vertex {
            x: best,
            f: simplex[0].f,
        }];
        for v in &simplex[1..] {
            let x = [
                best[0] + 0.5 * (v.x[0] - best[0]),
                best[1] + 0.5 * (v.x[1] - best[1]),
            ];
            let fx = eval(x, evaluations);
            insert_ordered(&mut shrunk, Vertex { x, f: fx });
        }
        // the retained best vertex stays first among ties
        if shrunk[0].x != best && shrunk[0].f == simplex[0].f {
            let idx = shrunk.iter().position(|v| v.x == best).expect("kept");
            let keep = shrunk.remove(idx);
            shrunk.insert(0, keep);
        }
        simplex = shrunk;
    }
}

/// Unconstrained Nelder–Mead from `start`, restarting from the incumbent
/// `opts.restarts` times.
pub fn nelder_mead<F>(mut f: F, start: [f64; 2], opts: &SimplexOptions) -> Result<OptimResult>
where
    F: FnMut([f64; 2]) -> f64,
{
    let f0 = f(start);
    if !f0.is_finite() {
        return Err(GeError::NonFinite {
            at: start.to_vec(),
        });
    }
    let mut evaluations = 1;
    let (mut best, mut iterations, mut converged, mut achieved) =
        nelder_mead_run(&mut f, start, opts, &mut evaluations);
    for _ in 0..opts.restarts {
        let (b, it, conv, ach) = nelder_mead_run(&mut f, best.x, opts, &mut evaluations);
        iterations += it;
        if b.f <= best.f {
            best = b;
        }
        converged = conv;
        achieved = ach;
    }
    Ok(OptimResult {
        argmin: best.x.to_vec(),
        objective_value: best.f,
        iterations,
        evaluations,
        converged,
        tolerance_achieved: achieved,
    })
}

/// Minimizes an objective over the open positive quadrant.
///
/// The search runs on log-parameters; `argmin` is reported on the original scale.
pub fn minimize_2d<F>(mut f: F, start: [f64; 2], tol: f64) -> Result<OptimResult>
where
    F: FnMut([f64; 2]) -> f64,
{
    let opts = SimplexOptions {
        tol,
        ..SimplexOptions::default()
    };
    minimize_2d_with(&mut f, start, &opts)
}

pub fn minimize_2d_with<F>(mut f: F, start: [f64; 2], opts: &SimplexOptions) -> Result<OptimResult>
where
    F: FnMut([f64; 2]) -> f64,
{
    if !(start[0] > 0.0 && start[1] > 0.0 && start[0].is_finite() && start[1].is_finite()) {
        return Err(crate::error::domain(
            "minimize_2d",
            format!("start {start:?} must lie in the open positive quadrant"),
        ));
    }
    let mut res = nelder_mead(
        |eta| {
            let theta = [eta[0].exp(), eta[1].exp()];
            if theta[0] > 0.0 && theta[1] > 0.0 && theta[0].is_finite() && theta[1].is_finite() {
                f(theta)
            } else {
                f64::INFINITY
            }
        },
        [start[0].ln(), start[1].ln()],
        opts,
    )?;
    res.argmin = res.argmin.iter().map(|e| e.exp()).collect();
    Ok(res)
}
