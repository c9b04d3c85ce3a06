use crate::error::{Error, Result};

const GOLDEN: f64 = 0.381_966_011_250_105_1;

/// Location and value of a scalar minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub fx: f64,
}

/// Brent's bracketed root finder (Dekker secant/inverse-quadratic with bisection fallback).
///
/// `f(lo)` and `f(hi)` must have opposite signs (or one of them be zero).
pub fn brent_root<F>(mut f: F, lo: f64, hi: f64, xtol: f64, max_iter: usize) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::NoSolution(format!(
            "root not bracketed on [{lo}, {hi}]: f = ({fa}, {fb})"
        )));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
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
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
    }
    Ok(b)
}

/// Brent's parabolic-interpolation minimizer on `[lo, hi]`.
pub fn brent_minimize<F>(mut f: F, lo: f64, hi: f64, rel_tol: f64, abs_tol: f64, max_iter: usize) -> Minimum
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if lo < hi { (lo, hi) } else { (hi, lo) };
    let mut x = a + GOLDEN * (b - a);
    let mut w = x;
    let mut v = x;
    let mut fx = f(x);
    let mut fw = fx;
    let mut fv = fx;
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;

    for _ in 0..max_iter {
        let xm = 0.5 * (a + b);
        let tol1 = rel_tol * x.abs() + abs_tol;
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            break;
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
            let etemp = e;
            if p.abs() < (0.5 * q * etemp).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1.copysign(xm - x);
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { a - x } else { b - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = f(u);
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
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
    Minimum { x, fx }
}

/// Global minimizer of `f` on the open interval `(lo, hi)`.
///
/// A uniform grid of `grid_points` interior samples picks the best cell, Brent
/// refines inside it, and the result is polished by locating the zero of a
/// central-difference derivative. The grid guards against multimodality; the
/// polish pushes the accuracy below the `sqrt(eps)` floor of value-only search.
pub fn interior_argmin<F>(mut f: F, lo: f64, hi: f64, grid_points: usize) -> Minimum
where
    F: FnMut(f64) -> f64,
{
    let (coarse, left, right) = seeded_brent(&mut f, lo, hi, grid_points);
    let h = 1e-6 * (hi - lo).min(right - left).max(f64::MIN_POSITIVE);
    let span = 64.0 * h + 1e-7 * coarse.x.abs();
    let a = (coarse.x - span).max(left + h);
    let b = (coarse.x + span).min(right - h);
    let mut fd = |x: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    let root = polish_root(&mut fd, a, b, 1e-15 * (hi - lo));
    accept(&mut f, coarse, root)
}

/// As [`interior_argmin`], but polished with the exact slope `df`. The
/// stationary point is then resolved to relative precision even when the
/// minimizer is many orders of magnitude smaller than the interval.
pub fn interior_argmin_with_slope<F, D>(mut f: F, mut df: D, lo: f64, hi: f64, grid_points: usize) -> Minimum
where
    F: FnMut(f64) -> f64,
    D: FnMut(f64) -> f64,
{
    let (coarse, left, right) = seeded_brent(&mut f, lo, hi, grid_points);
    let root = polish_root(&mut df, left, right, 0.0);
    accept(&mut f, coarse, root)
}

fn seeded_brent<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64, grid_points: usize) -> (Minimum, f64, f64) {
    let n = grid_points.max(3);
    let step = (hi - lo) / (n as f64 + 1.0);
    let xs: Vec<f64> = (1..=n).map(|i| lo + step * i as f64).collect();
    let mut best = 0;
    let mut best_f = f64::INFINITY;
    for (i, &x) in xs.iter().enumerate() {
        let v = f(x);
        if v < best_f {
            best_f = v;
            best = i;
        }
    }
    let left = if best == 0 { lo + 1e-3 * step } else { xs[best - 1] };
    let right = if best + 1 == n { hi - 1e-3 * step } else { xs[best + 1] };
    let coarse = brent_minimize(&mut *f, left, right, 3e-8, 1e-12 * (right - left), 500);
    let m = if coarse.fx <= best_f { coarse } else { Minimum { x: xs[best], fx: best_f } };
    (m, left, right)
}

fn polish_root<D: FnMut(f64) -> f64>(df: &mut D, a: f64, b: f64, xtol: f64) -> Option<f64> {
    if !(a < b) {
        return None;
    }
    let (da, db) = (df(a), df(b));
    if da < 0.0 && db > 0.0 {
        brent_root(&mut *df, a, b, xtol, 300).ok()
    } else {
        None
    }
}

fn accept<F: FnMut(f64) -> f64>(f: &mut F, coarse: Minimum, root: Option<f64>) -> Minimum {
    match root {
        Some(x) => {
            let fx = f(x);
            if fx <= coarse.fx + 1e-12 * coarse.fx.abs() + 1e-300 {
                Minimum { x, fx }
            } else {
                coarse
            }
        }
        None => coarse,
    }
}
