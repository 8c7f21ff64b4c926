//! Small derivative-free optimizers used by the Chernoff and discord
//! searches.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Minimum of a unimodal function on `[lo, hi]` by golden-section search.
///
/// Stops once the bracket is narrower than `tol`; returns `(x, f(x))`.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    // each step shrinks the bracket by 1/φ; 200 steps cover any f64 range
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Root of `f` on `[lo, hi]` by bisection; `f(lo)` and `f(hi)` must differ
/// in sign. Stops when `|f| <= ftol` or the bracket is below `xtol`.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, ftol: f64, xtol: f64) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NotFound(format!(
            "no sign change on [{lo}, {hi}] (f = {fa:.3e}, {fb:.3e})"
        )));
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm.abs() <= ftol && (b - a) <= xtol.max(1e-15 * m.abs()) {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
        if (b - a) <= 1e-15 * m.abs().max(1.0) {
            return Ok(0.5 * (a + b));
        }
    }
    Ok(0.5 * (a + b))
}

/// Outcome of a Nelder–Mead run.
#[derive(Debug, Clone, Copy)]
pub struct SimplexResult {
    pub x: [f64; 2],
    pub fx: f64,
    pub iterations: usize,
}

/// Two-dimensional Nelder–Mead with standard coefficients.
///
/// The initial simplex is `x0`, `x0 + step₀ e₀`, `x0 + step₁ e₁`. Stops when
/// the spread of function values is below `ftol` and the simplex diameter is
/// below `xtol`, or after `max_iter` iterations.
pub fn nelder_mead<F: FnMut([f64; 2]) -> f64>(
    mut f: F,
    x0: [f64; 2],
    step: [f64; 2],
    ftol: f64,
    xtol: f64,
    max_iter: usize,
) -> SimplexResult {
    let mut pts = [x0, [x0[0] + step[0], x0[1]], [x0[0], x0[1] + step[1]]];
    let mut vals = [f(pts[0]), f(pts[1]), f(pts[2])];
    let lerp = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];

    let mut it = 0;
    while it < max_iter {
        it += 1;
        // sort ascending, stable so ties keep insertion order
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
        pts = [pts[idx[0]], pts[idx[1]], pts[idx[2]]];
        vals = [vals[idx[0]], vals[idx[1]], vals[idx[2]]];

        let diameter = (1..3)
            .map(|k| ((pts[k][0] - pts[0][0]).powi(2) + (pts[k][1] - pts[0][1]).powi(2)).sqrt())
            .fold(0.0, f64::max);
        if (vals[2] - vals[0]).abs() <= ftol && diameter <= xtol {
            break;
        }

        let centroid = [(pts[0][0] + pts[1][0]) / 2.0, (pts[0][1] + pts[1][1]) / 2.0];
        let xr = lerp(centroid, pts[2], -1.0);
        let fr = f(xr);
        if fr < vals[0] {
            let xe = lerp(centroid, pts[2], -2.0);
            let fe = f(xe);
            if fe < fr {
                pts[2] = xe;
                vals[2] = fe;
            } else {
                pts[2] = xr;
                vals[2] = fr;
            }
        } else if fr < vals[1] {
            pts[2] = xr;
            vals[2] = fr;
        } else {
            let (xc, fc) = if fr < vals[2] {
                let xc = lerp(centroid, xr, 0.5);
                (xc, f(xc))
            } else {
                let xc = lerp(centroid, pts[2], 0.5);
                (xc, f(xc))
            };
            if fc < vals[2].min(fr) {
                pts[2] = xc;
                vals[2] = fc;
            } else {
                for k in 1..3 {
                    pts[k] = lerp(pts[0], pts[k], 0.5);
                    vals[k] = f(pts[k]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&i, &j| vals[i].total_cmp(&vals[j])).unwrap_or(0);
    SimplexResult {
        x: pts[best],
        fx: vals[best],
        iterations: it,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_vertex() {
        let (x, fx) = golden_section(|x| (x - 0.3).powi(2) + 1.0, 0.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6);
        assert!((fx - 1.0).abs() < 1e-12);
    }

    #[test]
    fn golden_handles_boundary_minimum() {
        let (x, _) = golden_section(|x| x, 0.0, 1.0, 1e-10);
        assert!(x < 1e-9);
    }

    #[test]
    fn bisect_root() {
        let x = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14, 1e-14).unwrap();
        assert!((x - 2f64.sqrt()).abs() < 1e-12);
        assert!(matches!(bisect(|x| x * x + 1.0, 0.0, 2.0, 1e-9, 1e-9), Err(Error::NotFound(_))));
    }

    #[test]
    fn nelder_mead_rosenbrock() {
        let res = nelder_mead(
            |p| (1.0 - p[0]).powi(2) + 100.0 * (p[1] - p[0] * p[0]).powi(2),
            [-1.2, 1.0],
            [0.1, 0.1],
            1e-20,
            1e-12,
            5000,
        );
        assert!((res.x[0] - 1.0).abs() < 1e-6 && (res.x[1] - 1.0).abs() < 1e-6, "{res:?}");
    }
}
