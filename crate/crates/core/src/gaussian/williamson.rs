//! Normal-mode (Williamson) decomposition `σ = S diag(ν₁, ν₁, ν₂, ν₂) Sᵀ`.

use nalgebra::{Matrix4, Vector4};

use super::{omega2, GaussianState, SympTransform};
use crate::error::{Error, Result};

const TOL: f64 = 1e-10;

/// Returns `S` and the symplectic spectrum `[ν₁, ν₂]` (descending, in the
/// state's convention) with `cov = S · diag(ν₁, ν₁, ν₂, ν₂) · Sᵀ`.
///
/// With `K = σ^{1/2}` the matrix `K Ω K` is antisymmetric with eigenvalues
/// `±iνₖ`; an orthogonal `O` bringing it to `⊕ νₖ J` gives the symplectic
/// `S = K O diag(νₖ^{-1/2})`.
pub fn williamson(state: &GaussianState) -> Result<(SympTransform, [f64; 2])> {
    state.require_physical()?;
    let (s, nu) = decompose(state.cov())?;
    let st = SympTransform::two_mode(s).map_err(|e| {
        Error::Numeric(format!("williamson produced a non-symplectic matrix: {e}"))
    })?;
    Ok((st, nu))
}

pub(crate) fn decompose(cov: &Matrix4<f64>) -> Result<(Matrix4<f64>, [f64; 2])> {
    let eig = cov.symmetric_eigen();
    if eig.eigenvalues.min() <= 0.0 {
        return Err(Error::Numeric(format!(
            "covariance is not positive definite (eigenvalues {:?})",
            eig.eigenvalues.as_slice()
        )));
    }
    let sqrt_diag = eig.eigenvalues.map(f64::sqrt);
    let k = &eig.eigenvectors * Matrix4::from_diagonal(&sqrt_diag) * eig.eigenvectors.transpose();
    let a = k * omega2() * k;
    let a = (a - a.transpose()) * 0.5;

    // AᵀA = -A² has eigenvalues ν₁², ν₁², ν₂², ν₂²
    let ata = a.transpose() * a;
    let ata = (ata + ata.transpose()) * 0.5;
    let sq = ata.symmetric_eigen();
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&i, &j| sq.eigenvalues[j].total_cmp(&sq.eigenvalues[i]).then(i.cmp(&j)));
    let candidates: Vec<Vector4<f64>> = order.iter().map(|&i| sq.eigenvectors.column(i).into_owned()).collect();

    let mut basis: Vec<Vector4<f64>> = Vec::with_capacity(4);
    let mut nus = [0.0; 2];
    for nu_slot in nus.iter_mut() {
        // pick the candidate with the largest component outside the span
        // built so far; ties go to the earliest candidate
        let mut best: Option<Vector4<f64>> = None;
        let mut best_norm = -1.0;
        for c in &candidates {
            let mut v = *c;
            for b in &basis {
                v -= b * b.dot(&v);
            }
            let n = v.norm();
            if n > best_norm + 1e-12 {
                best_norm = n;
                best = Some(v);
            }
        }
        let mut e = best.ok_or_else(|| Error::Numeric("williamson: empty eigenspace".into()))?;
        if best_norm < 1e-6 {
            return Err(Error::Numeric(format!(
                "williamson: degenerate basis construction (residual {best_norm:.3e})"
            )));
        }
        e /= e.norm();
        // deterministic phase: largest-magnitude component positive
        let imax = e.iamax();
        if e[imax] < 0.0 {
            e = -e;
        }
        // |A e| is more accurate than the square root of the AᵀA eigenvalue
        let nu_e = (a * e).norm();
        if nu_e <= 0.0 {
            return Err(Error::Numeric("williamson: zero symplectic eigenvalue".into()));
        }
        let f = -(a * e) / nu_e;
        basis.push(e);
        basis.push(f);
        *nu_slot = nu_e;
    }
    let o = Matrix4::from_columns(&basis);
    let d = Matrix4::from_diagonal(&Vector4::new(
        nus[0].powf(-0.5),
        nus[0].powf(-0.5),
        nus[1].powf(-0.5),
        nus[1].powf(-0.5),
    ));
    let s = k * o * d;

    let lambda = Matrix4::from_diagonal(&Vector4::new(nus[0], nus[0], nus[1], nus[1]));
    let recon = (s * lambda * s.transpose() - cov).amax();
    let sympl = (s * omega2() * s.transpose() - omega2()).amax();
    let scale = cov.amax().max(1.0);
    if recon > TOL * scale || sympl > TOL * scale {
        return Err(Error::Numeric(format!(
            "williamson did not converge: reconstruction {recon:.3e}, symplectic defect {sympl:.3e}"
        )));
    }
    Ok((s, nus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{make_sts, Convention};
    use proptest::prelude::*;

    #[test]
    fn squeezed_thermal_has_thermal_spectrum() {
        let s = make_sts(0.5, 1.0, 0.0).unwrap();
        let (_, nu) = williamson(&s).unwrap();
        assert!((nu[0] - 3.0).abs() < 1e-10 && (nu[1] - 1.0).abs() < 1e-10);
        let (a, b, c) = s.standard_form_entries(1e-12).unwrap();
        assert!((nu[0] * nu[1] - (a * b - c * c)).abs() < 1e-10);
    }

    #[test]
    fn vacuum_gives_orthogonal_symplectic() {
        let v = GaussianState::vacuum(Convention::VacuumOne);
        let (s, nu) = williamson(&v).unwrap();
        assert!((nu[0] - 1.0).abs() < 1e-12 && (nu[1] - 1.0).abs() < 1e-12);
        let m = s.to_two_mode();
        assert!((m * m.transpose() - Matrix4::identity()).amax() < 1e-10);
    }

    #[test]
    fn half_convention_spectrum() {
        let s = make_sts(0.3, 0.5, 2.0).unwrap().to_convention(Convention::VacuumHalf);
        let (_, nu) = williamson(&s).unwrap();
        assert!((nu[0] - 2.5).abs() < 1e-10 && (nu[1] - 1.0).abs() < 1e-10);
    }

    fn random_state(r: f64, n1: f64, n2: f64, th: f64, z: f64, th2: f64) -> GaussianState {
        use crate::gaussian::{rotation, two_mode_squeeze};
        use nalgebra::Matrix2;
        let local = |t: f64, zz: f64| rotation(t) * Matrix2::new(zz.exp(), 0.0, 0.0, (-zz).exp());
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(&local(th, z));
        m.fixed_view_mut::<2, 2>(2, 2).copy_from(&local(th2, -0.5 * z));
        make_sts(r, n1, n2).unwrap().transform(&(m * two_mode_squeeze(0.3 * r) ))
    }

    proptest! {
        #[test]
        fn reconstruction(r in 0.0..1.5f64, n1 in 0.0..4.0f64, n2 in 0.0..4.0f64,
                          th in 0.0..3.2f64, z in -1.0..1.0f64, th2 in 0.0..3.2f64) {
            let st = random_state(r, n1, n2, th, z, th2);
            let (s, nu) = williamson(&st).unwrap();
            let m = s.to_two_mode();
            let lam = Matrix4::from_diagonal(&Vector4::new(nu[0], nu[0], nu[1], nu[1]));
            prop_assert!((m * lam * m.transpose() - st.cov()).amax() <= 1e-10 * st.cov().amax().max(1.0));
            prop_assert!(nu[0] >= nu[1]);
            let expected = [1.0 + 2.0 * n1.max(n2), 1.0 + 2.0 * n1.min(n2)];
            prop_assert!((nu[0] - expected[0]).abs() < 1e-9 * expected[0]);
            prop_assert!((nu[1] - expected[1]).abs() < 1e-9 * expected[0]);
        }
    }
}
