//! Single-mode and two-mode operators on a truncated number basis.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Lowering operator `a` on `{|0⟩, …, |p−1⟩}`.
pub(crate) fn lowering(p: usize) -> DMatrix<Complex64> {
    let mut a = DMatrix::zeros(p, p);
    for n in 1..p {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Displacement `exp(α a† − α* a)`.
pub(crate) fn displacement(alpha: Complex64, p: usize) -> DMatrix<Complex64> {
    if alpha == Complex64::new(0.0, 0.0) {
        return DMatrix::identity(p, p);
    }
    let a = lowering(p);
    let gen = a.adjoint() * alpha - &a * alpha.conj();
    gen.exp()
}

/// Single-mode squeezer `exp(s (a†² − a²)/2)`; maps `x → eˢ x`, `p → e⁻ˢ p`.
pub(crate) fn squeezer(s: f64, p: usize) -> DMatrix<Complex64> {
    if s == 0.0 {
        return DMatrix::identity(p, p);
    }
    let a = lowering(p);
    let a2 = &a * &a;
    let gen = (a2.adjoint() - a2) * Complex64::new(0.5 * s, 0.0);
    gen.exp()
}

/// Phase rotation `exp(−iφ a†a)`.
pub(crate) fn phase(phi: f64, p: usize) -> DMatrix<Complex64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_fn(p, |n, _| {
        Complex64::from_polar(1.0, -phi * n as f64)
    }))
}

/// Fock representation of the traceless symplectic
/// `R(π/2 − θ) · diag(ξ, 1/ξ) · R(θ)`.
pub(crate) fn euler_local(theta: f64, xi: f64, p: usize) -> DMatrix<Complex64> {
    let half_pi = std::f64::consts::FRAC_PI_2;
    phase(half_pi - theta, p) * squeezer(xi.ln(), p) * phase(theta, p)
}

/// Two-mode squeezer `exp(r (a₁†a₂† − a₁a₂))` restricted to the sector
/// `n₁ − n₂ = ±d`, in the basis `|d + m, m⟩` (or `|m, m + d⟩`),
/// `m = 0, …, n − 1`.
pub(crate) fn sector_propagator(r: f64, d: usize, n: usize) -> DMatrix<f64> {
    if r == 0.0 {
        return DMatrix::identity(n, n);
    }
    let mut gen = DMatrix::zeros(n, n);
    for m in 0..n.saturating_sub(1) {
        let beta = r * (((d + m + 1) * (m + 1)) as f64).sqrt();
        gen[(m + 1, m)] = beta;
        gen[(m, m + 1)] = -beta;
    }
    gen.exp()
}
