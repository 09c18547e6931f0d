//! Small dense kernels on symmetric Gram matrices.

use crate::error::{Error, Result};
use crate::scalar::Real;
use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Relative eigenvalue floor below which a Gram matrix counts as singular.
pub const EPS_SINGULAR: f64 = 1e-12;

const EIGEN_MAX_ITER: usize = 10_000;

pub fn symmetrize<T: Real>(m: &DMatrix<T>) -> DMatrix<T> {
    (m + m.transpose()) * T::lit(0.5)
}

/// `C Cᵀ`, symmetrized.
pub fn gram_rows<T: Real>(c: &DMatrix<T>) -> DMatrix<T> {
    symmetrize(&(c * c.transpose()))
}

/// `Cᵀ C`, symmetrized.
pub fn gram_cols<T: Real>(c: &DMatrix<T>) -> DMatrix<T> {
    symmetrize(&(c.transpose() * c))
}

/// Eigenvalues of a symmetric matrix in ascending order.
pub fn sym_eigenvalues<T: Real>(m: &DMatrix<T>) -> Result<DVector<T>> {
    if m.nrows() == 0 {
        return Ok(DVector::zeros(0));
    }
    let eig = SymmetricEigen::try_new(symmetrize(m), T::default_epsilon(), EIGEN_MAX_ITER)
        .ok_or(Error::EigenFailure)?;
    let mut vals: Vec<T> = eig.eigenvalues.iter().copied().collect();
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::EigenFailure);
    }
    vals.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(DVector::from_vec(vals))
}

/// Smallest eigenvalue, clamped to zero when it sits within roundoff of zero.
pub fn min_eigenvalue<T: Real>(m: &DMatrix<T>) -> Result<T> {
    let vals = sym_eigenvalues(m)?;
    let lo = vals[0];
    let hi = vals[vals.len() - 1].abs();
    if lo < T::zero() && -lo <= T::tol(EPS_SINGULAR) * hi {
        Ok(T::zero())
    } else {
        Ok(lo)
    }
}

/// True when the spectrum (ascending) violates the singularity floor.
pub fn spectrum_is_singular<T: Real>(ascending: &DVector<T>) -> bool {
    let hi = ascending[ascending.len() - 1];
    hi <= T::zero() || ascending[0] <= T::tol(EPS_SINGULAR) * hi
}

/// Rejects Gram matrices whose eigenvalue ratio falls below [`EPS_SINGULAR`].
pub fn ensure_nonsingular<T: Real>(m: &DMatrix<T>) -> Result<()> {
    let vals = sym_eigenvalues(m)?;
    if spectrum_is_singular(&vals) {
        Err(Error::SingularInformation)
    } else {
        Ok(())
    }
}

/// Solves `M X = B` for symmetric positive definite `M`; Cholesky first, LU otherwise.
pub fn spd_solve<T: Real>(m: &DMatrix<T>, b: &DMatrix<T>) -> Result<DMatrix<T>> {
    if let Some(ch) = m.clone().cholesky() {
        return Ok(ch.solve(b));
    }
    m.clone().lu().solve(b).ok_or(Error::SingularInformation)
}

pub fn spd_inverse<T: Real>(m: &DMatrix<T>) -> Result<DMatrix<T>> {
    let id = DMatrix::identity(m.nrows(), m.ncols());
    Ok(symmetrize(&spd_solve(m, &id)?))
}

/// Determinant of a Gram matrix, clamped at zero.
pub fn gram_determinant<T: Real>(m: &DMatrix<T>) -> T {
    if m.nrows() == 0 {
        return T::one();
    }
    let d = m.clone().lu().determinant();
    if d < T::zero() {
        T::zero()
    } else {
        d
    }
}

/// Thin SVD `C = U diag(s) Vᵀ` with descending singular values.
#[derive(Debug, Clone)]
pub struct SortedSvd<T: Real> {
    pub u: DMatrix<T>,
    pub singular_values: DVector<T>,
    pub v: DMatrix<T>,
}

/// Thin SVD with singular values sorted descending and the sign of each
/// singular pair chosen by `pick_sign` applied to the left vector.
pub fn sorted_svd<T: Real>(
    c: &DMatrix<T>,
    pick_sign: impl Fn(&[T]) -> bool,
) -> Result<SortedSvd<T>> {
    let svd = nalgebra::SVD::try_new(c.clone(), true, true, T::default_epsilon(), EIGEN_MAX_ITER)
        .ok_or(Error::EigenFailure)?;
    let u = svd.u.ok_or(Error::EigenFailure)?;
    let vt = svd.v_t.ok_or(Error::EigenFailure)?;
    let k = svd.singular_values.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .expect("finite singular values")
            .then(a.cmp(&b))
    });
    let mut uo = DMatrix::zeros(u.nrows(), k);
    let mut vo = DMatrix::zeros(vt.ncols(), k);
    let mut so = DVector::zeros(k);
    for (dst, &src) in order.iter().enumerate() {
        let col: Vec<T> = u.column(src).iter().copied().collect();
        let flip = !pick_sign(&col);
        let sgn = if flip { -T::one() } else { T::one() };
        uo.set_column(dst, &(u.column(src) * sgn));
        vo.set_column(dst, &(vt.row(src).transpose() * sgn));
        so[dst] = svd.singular_values[src];
    }
    Ok(SortedSvd {
        u: uo,
        singular_values: so,
        v: vo,
    })
}

/// Sign rule: first entry whose magnitude is not negligible is nonnegative.
pub fn first_nonzero_nonnegative<T: Real>(col: &[T]) -> bool {
    let scale = col.iter().fold(T::zero(), |a, &x| a.max(x.abs()));
    let floor = scale * T::tol(1e-12);
    col.iter()
        .find(|x| x.abs() > floor)
        .is_none_or(|&x| x >= T::zero())
}

/// Sign rule: the largest-magnitude entry (lowest index on ties) is positive.
pub fn largest_entry_positive<T: Real>(col: &[T]) -> bool {
    let mut best = T::zero();
    for &x in col {
        if x.abs() > best.abs() {
            best = x;
        }
    }
    best >= T::zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_eig_clamps_roundoff() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        assert_eq!(min_eigenvalue(&m).unwrap(), 0.0);
    }

    #[test]
    fn singular_detection() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1e-14]);
        assert_eq!(ensure_nonsingular(&m), Err(Error::SingularInformation));
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1e-10]);
        assert!(ensure_nonsingular(&m).is_ok());
    }

    #[test]
    fn svd_sorted_and_signed() {
        let c = DMatrix::<f64>::from_row_slice(2, 3, &[0.0, -1.0, 0.0, -3.0, 0.0, 0.0]);
        let s = sorted_svd(&c, first_nonzero_nonnegative).unwrap();
        assert!((s.singular_values[0] - 3.0).abs() < 1e-12);
        assert!((s.singular_values[1] - 1.0).abs() < 1e-12);
        for j in 0..2 {
            let col: Vec<f64> = s.u.column(j).iter().copied().collect();
            assert!(first_nonzero_nonnegative(&col));
        }
        let rebuilt = &s.u * DMatrix::from_diagonal(&s.singular_values) * s.v.transpose();
        assert!((rebuilt - c).norm() < 1e-12);
    }

    #[test]
    fn spd_solve_falls_back_to_lu() {
        // indefinite but nonsingular
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let b = DMatrix::<f64>::from_row_slice(2, 1, &[2.0, 3.0]);
        let x = spd_solve(&m, &b).unwrap();
        assert!((x[0] - 3.0).abs() < 1e-12 && (x[1] - 2.0).abs() < 1e-12);
    }
}
