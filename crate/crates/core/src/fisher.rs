//! Linear observation model `y = C z`, least-squares estimation, error
//! covariances and the three optimality indices of the information matrix.
//!
//! Sensor indices are zero-based throughout the crate.

use crate::error::{Error, Result};
use crate::linalg::{self, SortedSvd};
use crate::scalar::Real;
use nalgebra::{DMatrix, DVector, Dyn, MatrixView, U1};
use std::collections::HashSet;

/// `n × r` matrix whose rows are the candidate sensors in mode coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateMatrix<T: Real> {
    rows: DMatrix<T>,
}

impl<T: Real> CandidateMatrix<T> {
    pub fn new(rows: DMatrix<T>) -> Result<Self> {
        if rows.nrows() == 0 || rows.ncols() == 0 {
            return Err(Error::InvalidInput(format!(
                "candidate matrix must be non-empty, got {}x{}",
                rows.nrows(),
                rows.ncols()
            )));
        }
        if rows.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("candidate matrix has non-finite entries".into()));
        }
        Ok(Self { rows })
    }

    /// Builds from row-major data.
    pub fn from_row_slice(n: usize, r: usize, data: &[T]) -> Result<Self> {
        if data.len() != n * r {
            return Err(Error::ShapeMismatch(format!(
                "{} values for a {n}x{r} matrix",
                data.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(n, r, data))
    }

    pub fn n(&self) -> usize {
        self.rows.nrows()
    }

    pub fn r(&self) -> usize {
        self.rows.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.rows
    }

    pub fn row(&self, i: usize) -> MatrixView<'_, T, U1, Dyn, U1, Dyn> {
        self.rows.row(i)
    }

    pub fn row_norm_sq(&self, i: usize) -> T {
        self.rows.row(i).norm_squared()
    }

    pub fn max_row_norm_sq(&self) -> T {
        (0..self.n()).fold(T::zero(), |acc, i| acc.max(self.row_norm_sq(i)))
    }

    /// Multiplies every entry by `c`.
    pub fn scaled(&self, c: T) -> Self {
        Self {
            rows: &self.rows * c,
        }
    }

    /// Reorders rows: row `k` of the result is row `perm[k]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let set = build_measurement(self, perm)?;
        if perm.len() != self.n() {
            return Err(Error::ShapeMismatch("permutation length".into()));
        }
        Self::new(set.measurement)
    }

    /// Stacks the given rows without validation; callers guarantee range.
    pub(crate) fn stack(&self, indices: &[usize]) -> DMatrix<T> {
        let mut c = DMatrix::zeros(indices.len(), self.r());
        for (k, &i) in indices.iter().enumerate() {
            c.set_row(k, &self.rows.row(i));
        }
        c
    }
}

/// Selected sensors in selection order together with `C = C_S`.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorSet<T: Real> {
    indices: Vec<usize>,
    measurement: DMatrix<T>,
}

impl<T: Real> SensorSet<T> {
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn measurement(&self) -> &DMatrix<T> {
        &self.measurement
    }

    pub fn p(&self) -> usize {
        self.indices.len()
    }

    pub fn r(&self) -> usize {
        self.measurement.ncols()
    }

    pub fn regime(&self) -> Regime {
        Regime::of(self.p(), self.r())
    }
}

/// Stacks candidate rows in the given order.
pub fn build_measurement<T: Real>(
    cand: &CandidateMatrix<T>,
    indices: &[usize],
) -> Result<SensorSet<T>> {
    let mut seen = HashSet::with_capacity(indices.len());
    for &i in indices {
        if i >= cand.n() {
            return Err(Error::IndexOutOfRange {
                index: i,
                n: cand.n(),
            });
        }
        if !seen.insert(i) {
            return Err(Error::DuplicateSensor(i));
        }
    }
    Ok(SensorSet {
        indices: indices.to_vec(),
        measurement: cand.stack(indices),
    })
}

/// Whether a set of `p` sensors under-determines (`p ≤ r`) or
/// over-determines (`p > r`) the `r` latent variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Under,
    Over,
}

impl Regime {
    pub fn of(p: usize, r: usize) -> Self {
        if p <= r {
            Regime::Under
        } else {
            Regime::Over
        }
    }
}

/// Regime Gram matrix: `C Cᵀ` (p × p) when `p ≤ r`, else `Cᵀ C` (r × r).
pub fn regime_gram<T: Real>(c: &DMatrix<T>) -> DMatrix<T> {
    match Regime::of(c.nrows(), c.ncols()) {
        Regime::Under => linalg::gram_rows(c),
        Regime::Over => linalg::gram_cols(c),
    }
}

/// Fisher information matrix of a sensor set.
#[derive(Debug, Clone, PartialEq)]
pub struct FisherInfo<T: Real> {
    regime: Regime,
    matrix: DMatrix<T>,
}

pub fn fisher_info<T: Real>(s: &SensorSet<T>) -> Result<FisherInfo<T>> {
    if s.p() == 0 {
        return Err(Error::InvalidInput("fisher information of an empty sensor set".into()));
    }
    Ok(FisherInfo {
        regime: s.regime(),
        matrix: regime_gram(&s.measurement),
    })
}

impl<T: Real> FisherInfo<T> {
    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    /// D-optimality index: `det` of the information matrix.
    pub fn det_index(&self) -> T {
        linalg::gram_determinant(&self.matrix)
    }

    /// A-optimality index: trace of the inverse information matrix.
    pub fn trace_inv_index(&self) -> Result<T> {
        linalg::ensure_nonsingular(&self.matrix)?;
        Ok(linalg::spd_inverse(&self.matrix)?.trace())
    }

    /// E-optimality index: smallest eigenvalue of the information matrix.
    pub fn min_eig_index(&self) -> Result<T> {
        linalg::min_eigenvalue(&self.matrix)
    }
}

/// Standard deviation of i.i.d. Gaussian observation noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel<T: Real> {
    sigma: T,
}

impl<T: Real> NoiseModel<T> {
    pub fn new(sigma: T) -> Result<Self> {
        if !(sigma >= T::zero()) || !sigma.is_finite() {
            return Err(Error::InvalidInput(format!("noise sigma {sigma} must be >= 0")));
        }
        Ok(Self { sigma })
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }
}

/// Pseudo-inverse estimate of the latent state: least-norm when `p ≤ r`,
/// least-squares when `p > r`. Each column of `y` is one observation vector.
pub fn estimate_columns<T: Real>(s: &SensorSet<T>, y: &DMatrix<T>) -> Result<DMatrix<T>> {
    if y.nrows() != s.p() {
        return Err(Error::ShapeMismatch(format!(
            "{} observations for {} sensors",
            y.nrows(),
            s.p()
        )));
    }
    let c = &s.measurement;
    let gram = regime_gram(c);
    linalg::ensure_nonsingular(&gram)?;
    match s.regime() {
        Regime::Under => Ok(c.transpose() * linalg::spd_solve(&gram, y)?),
        Regime::Over => linalg::spd_solve(&gram, &(c.transpose() * y)),
    }
}

pub fn estimate<T: Real>(s: &SensorSet<T>, y: &DVector<T>) -> Result<DVector<T>> {
    let y = DMatrix::from_column_slice(y.len(), 1, y.as_slice());
    let z = estimate_columns(s, &y)?;
    Ok(DVector::from_column_slice(z.as_slice()))
}

/// Covariance of `z − ẑ`.
///
/// In the under-determined regime the unobservable part of the prior
/// second moment `E[z zᵀ]` survives; `prior_zz = None` means the identity.
pub fn error_covariance<T: Real>(
    s: &SensorSet<T>,
    noise: &NoiseModel<T>,
    prior_zz: Option<&DMatrix<T>>,
) -> Result<DMatrix<T>> {
    let c = &s.measurement;
    let r = s.r();
    let gram = regime_gram(c);
    linalg::ensure_nonsingular(&gram)?;
    let var = noise.sigma * noise.sigma;
    let cov = match s.regime() {
        Regime::Under => {
            let prior = match prior_zz {
                Some(m) if m.nrows() != r || m.ncols() != r => {
                    return Err(Error::ShapeMismatch(format!("prior must be {r}x{r}")))
                }
                Some(m) => m.clone(),
                None => DMatrix::identity(r, r),
            };
            // w = (C Cᵀ)⁻¹ C, so P_C = Cᵀ w and Cᵀ (C Cᵀ)⁻² C = wᵀ w
            let w = linalg::spd_solve(&gram, c)?;
            let resid = DMatrix::identity(r, r) - c.transpose() * &w;
            &resid * prior * &resid + w.transpose() * &w * var
        }
        Regime::Over => linalg::spd_inverse(&gram)? * var,
    };
    Ok(linalg::symmetrize(&cov))
}

/// Thin SVD of `C` used to define the observable coordinates `ζ = Ṽᵀ z`.
pub fn observable_basis<T: Real>(s: &SensorSet<T>) -> Result<SortedSvd<T>> {
    let svd = linalg::sorted_svd(&s.measurement, linalg::first_nonzero_nonnegative)?;
    let sv = &svd.singular_values;
    let hi = sv[0];
    let lo = sv[sv.len() - 1];
    if hi <= T::zero() || lo * lo <= T::tol(linalg::EPS_SINGULAR) * hi * hi {
        return Err(Error::RankDeficient);
    }
    Ok(svd)
}

/// Error covariance restricted to the observable subspace: `σ² U_Cᵀ (C Cᵀ)⁻¹ U_C`
/// (p × p) when `p ≤ r`, `σ² Ṽᵀ (Cᵀ C)⁻¹ Ṽ` (r × r) otherwise.
pub fn observable_error_covariance<T: Real>(
    s: &SensorSet<T>,
    noise: &NoiseModel<T>,
) -> Result<DMatrix<T>> {
    let svd = observable_basis(s)?;
    let gram = regime_gram(&s.measurement);
    linalg::ensure_nonsingular(&gram)?;
    let basis = match s.regime() {
        Regime::Under => svd.u,
        Regime::Over => svd.v,
    };
    let inner = linalg::spd_solve(&gram, &basis)?;
    let var = noise.sigma * noise.sigma;
    Ok(linalg::symmetrize(&(basis.transpose() * inner * var)))
}

/// Relative Frobenius error `‖z_est − z_true‖ / ‖z_true‖`.
pub fn reconstruction_error<T: Real>(z_true: &DMatrix<T>, z_est: &DMatrix<T>) -> Result<T> {
    if z_true.shape() != z_est.shape() {
        return Err(Error::ShapeMismatch(format!(
            "{:?} vs {:?}",
            z_true.shape(),
            z_est.shape()
        )));
    }
    let reference = z_true.norm();
    if reference <= T::zero() {
        return Err(Error::ZeroReference);
    }
    Ok((z_est - z_true).norm() / reference)
}
