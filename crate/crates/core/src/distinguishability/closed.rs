//! Closed forms for standard-form pairs related by a quarter-turn phase
//! shift, and their derivatives. Entries `a, b, c` are in `VacuumOne` units.

use crate::error::{domain, Result};

fn check_sym(a: f64, c: f64) -> Result<()> {
    if !(a >= 1.0 - 1e-12) || !(c.is_finite()) || a * a - c * c < 1.0 - 1e-9 * a * a {
        return domain(format!("(a, c) = ({a}, {c}) is not a physical symmetric standard form"));
    }
    Ok(())
}

/// `(a² − c²) / (2a² − c²)`
pub fn closed_qcb_sym(a: f64, c: f64) -> Result<f64> {
    check_sym(a, c)?;
    assert!(2.0 * a * a - c * c > 0.0, "non-positive denominator for physical input");
    Ok(qcb_sym_raw(a, c))
}

fn qcb_sym_raw(a: f64, c: f64) -> f64 {
    (a * a - c * c) / (2.0 * a * a - c * c)
}

fn fid_sym_raw(a: f64, c: f64) -> f64 {
    4.0 / (1.0 + c * c - a * a + radical(a, c)).powi(2)
}

/// `√((c² − a²)² + 1 + 2a²)`
fn radical(a: f64, c: f64) -> f64 {
    let d = c * c - a * a;
    (d * d + 1.0 + 2.0 * a * a).sqrt()
}

/// `4 / [1 + c² − a² + √((c² − a²)² + 1 + 2a²)]²`
pub fn closed_fid_sym(a: f64, c: f64) -> Result<f64> {
    check_sym(a, c)?;
    assert!(1.0 + c * c - a * a + radical(a, c) > 0.0, "non-positive denominator for physical input");
    Ok(fid_sym_raw(a, c))
}

/// `(ab − c²) / (2ab − c²)`
pub fn closed_qcb_asym(a: f64, b: f64, c: f64) -> Result<f64> {
    if !(a >= 1.0 - 1e-12 && b >= 1.0 - 1e-12) || !c.is_finite() || a * b - c * c <= 0.0 {
        return domain(format!("(a, b, c) = ({a}, {b}, {c}) is not a physical standard form"));
    }
    let den = 2.0 * a * b - c * c;
    assert!(den > 0.0, "non-positive denominator for physical input");
    Ok((a * b - c * c) / den)
}

/// `(∂QCB/∂a |_c, ∂QCB/∂c |_a)` of [`closed_qcb_sym`].
pub fn qcb_derivs(a: f64, c: f64) -> Result<(f64, f64)> {
    check_sym(a, c)?;
    Ok(qcb_derivs_raw(a, c))
}

fn qcb_derivs_raw(a: f64, c: f64) -> (f64, f64) {
    let den = (c * c - 2.0 * a * a).powi(2);
    (2.0 * a * c * c / den, -2.0 * a * a * c / den)
}

/// `(∂F/∂a |_c, ∂F/∂c |_a)` of [`closed_fid_sym`].
pub fn fid_derivs(a: f64, c: f64) -> Result<(f64, f64)> {
    check_sym(a, c)?;
    Ok(fid_derivs_raw(a, c))
}

/// With `R = √((c² − a²)² + 1 + 2a²)` and `m = |1 + c² − a²|`:
///
/// `∂F/∂a = 16a (R − 1 − a² + c²) / (R (R − m)³)`,
/// `∂F/∂c = −8 (2c(a² − c²) − 2cR) / (R (m − R)³)`.
///
/// The differences `R − 1 − a² + c²`, `R − (a² − c²)` and `R − m` are
/// rationalized so that the signs survive rounding.
fn fid_derivs_raw(a: f64, c: f64) -> (f64, f64) {
    let r = radical(a, c);
    let u = a * a - c * c;
    let m = (1.0 - u).abs();
    let r_minus_1u = 2.0 * c * c / (r + 1.0 + u);
    let r_minus_u = (1.0 + 2.0 * a * a) / (r + u);
    let r_minus_m = (4.0 * a * a - 2.0 * c * c) / (r + m);
    let d_da = 16.0 * a * r_minus_1u / (r * r_minus_m.powi(3));
    let d_dc = -16.0 * c * r_minus_u / (r * r_minus_m.powi(3));
    (d_da, d_dc)
}

/// `dQCB/dn₁` at fixed `n₂, r` for a quarter-turn-shifted squeezed thermal
/// state, `−(n₁ − n₂) g`.
pub fn qcb_noise_deriv(r: f64, n1: f64, n2: f64) -> Result<f64> {
    if !(r.is_finite() && n1 >= 0.0 && n2 >= 0.0) {
        return domain(format!("unphysical parameters r = {r}, n1 = {n1}, n2 = {n2}"));
    }
    if n1 == n2 {
        return Ok(0.0);
    }
    let s = n1 + n2 + 1.0;
    let den = n1 * n1 - 2.0 * (7.0 * n2 + 3.0) * n1 + (n2 - 6.0) * n2 - s * s * (4.0 * r).cosh() - 3.0;
    let g = 8.0 * s * (2.0 * n2 + 1.0) * (2.0 * r).sinh().powi(2) / (den * den);
    Ok(-(n1 - n2) * g)
}
