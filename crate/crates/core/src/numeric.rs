//! Shared dense complex linear algebra: Hermitian eigendecompositions and
//! tolerance-banded nullspace dimensions.

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

pub type CMat = DMatrix<Complex64>;

#[derive(Debug, Error)]
pub enum NumericError {
    #[error(
        "rank is ambiguous: singular value {value:.3e} lies inside the tolerance band \
         ({low:.3e}, {high:.3e})"
    )]
    RankAmbiguous { value: f64, low: f64, high: f64 },
}

/// Eigenvalues (ascending) and matching orthonormal eigenvectors of a
/// Hermitian matrix.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    let se = m.clone().symmetric_eigen();
    let n = m.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &se.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Joint nullspace of a family of linear constraints on `C^n`, computed from
/// the Gram matrix `sum_k C_k^H C_k`. Singular values below `tol * scale`
/// count as zero; values between the null and keep thresholds raise
/// [`NumericError::RankAmbiguous`].
pub struct Nullspace {
    pub dim: usize,
    /// `n x dim`, orthonormal columns spanning the nullspace.
    pub basis: CMat,
}

pub fn joint_nullspace(constraints: &[CMat], n: usize, tol: f64) -> Result<Nullspace, NumericError> {
    let mut gram = CMat::zeros(n, n);
    for c in constraints {
        gram += c.adjoint() * c;
    }
    let (values, vectors) = hermitian_eigen(&gram);
    // eigenvalues of the Gram matrix are squared singular values; the null
    // cutoff sits two decades above `tol` to clear the eigensolver noise
    // floor, the keep cutoff three decades above that
    let scale = values.last().copied().unwrap_or(0.0).max(1.0);
    let sigma_low = 1e2 * tol;
    let sigma_high = 1e5 * tol;
    let low = sigma_low * sigma_low * scale;
    let high = sigma_high * sigma_high * scale;
    for &v in &values {
        if v > low && v < high {
            return Err(NumericError::RankAmbiguous {
                value: (v / scale).max(0.0).sqrt(),
                low: sigma_low,
                high: sigma_high,
            });
        }
    }
    let dim = values.iter().filter(|&&v| v <= low).count();
    let basis = CMat::from_fn(n, dim, |r, c| vectors[(r, c)]);
    Ok(Nullspace { dim, basis })
}

/// Largest absolute entry difference.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_of_projection() {
        // constraint x1 = 0 on C^2: nullspace is the x0 axis
        let mut c = CMat::zeros(2, 2);
        c[(1, 1)] = Complex64::new(1.0, 0.0);
        let ns = joint_nullspace(&[c], 2, 1e-8).unwrap();
        assert_eq!(ns.dim, 1);
        assert!(ns.basis[(0, 0)].norm() > 0.99);
    }

    #[test]
    fn full_rank_has_empty_nullspace() {
        let c = CMat::identity(3, 3);
        let ns = joint_nullspace(&[c], 3, 1e-8).unwrap();
        assert_eq!(ns.dim, 0);
    }

    #[test]
    fn ambiguous_rank_detected() {
        let mut c = CMat::identity(2, 2);
        c[(1, 1)] = Complex64::new(1e-5, 0.0);
        assert!(matches!(
            joint_nullspace(&[c], 2, 1e-8),
            Err(NumericError::RankAmbiguous { .. })
        ));
    }
}
