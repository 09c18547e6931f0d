use super::SnapshotData;
use crate::error::{Error, Result};
use crate::fisher::CandidateMatrix;
use crate::linalg;
use crate::scalar::Real;
use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PodOptions {
    /// Remove the temporal mean of every location before the SVD.
    pub subtract_mean: bool,
}

/// Rank-`r` truncated SVD `X ≈ U S Vᵀ` of a snapshot matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PodModel<T: Real> {
    modes: DMatrix<T>,
    singular_values: DVector<T>,
    temporal: DMatrix<T>,
    mean: Option<DVector<T>>,
}

/// Economy SVD of the (masked, optionally centred) snapshots truncated to
/// `r` modes. Singular values descend; each spatial mode is signed so its
/// largest-magnitude entry is positive.
pub fn pod_truncate<T: Real>(
    data: &SnapshotData<T>,
    r: usize,
    opts: PodOptions,
) -> Result<PodModel<T>> {
    let max = data.n().min(data.m());
    if r == 0 || r > max {
        return Err(Error::RankOutOfRange { r, max });
    }
    let mut x = data.masked_matrix();
    let mean = opts.subtract_mean.then(|| {
        let mu = x.column_mean();
        for mut col in x.column_iter_mut() {
            col -= &mu;
        }
        mu
    });
    let svd = linalg::sorted_svd(&x, linalg::largest_entry_positive)?;
    Ok(PodModel {
        modes: svd.u.columns(0, r).into_owned(),
        singular_values: svd.singular_values.rows(0, r).into_owned(),
        temporal: svd.v.columns(0, r).into_owned(),
        mean,
    })
}

impl<T: Real> PodModel<T> {
    pub fn r(&self) -> usize {
        self.modes.ncols()
    }

    /// `n × r` spatial modes.
    pub fn modes(&self) -> &DMatrix<T> {
        &self.modes
    }

    pub fn singular_values(&self) -> &DVector<T> {
        &self.singular_values
    }

    /// `m × r` temporal modes.
    pub fn temporal(&self) -> &DMatrix<T> {
        &self.temporal
    }

    pub fn mean(&self) -> Option<&DVector<T>> {
        self.mean.as_ref()
    }

    /// Training amplitudes `S Vᵀ` (r × m).
    pub fn amplitudes(&self) -> DMatrix<T> {
        DMatrix::from_diagonal(&self.singular_values) * self.temporal.transpose()
    }

    /// Rank-`r` reconstruction of the training snapshots.
    pub fn reconstruct(&self) -> DMatrix<T> {
        let mut x = &self.modes * self.amplitudes();
        if let Some(mu) = &self.mean {
            for mut col in x.column_iter_mut() {
                col += mu;
            }
        }
        x
    }

    /// Removes the stored mean (if any) from each column of `x`.
    pub fn centre(&self, x: &DMatrix<T>) -> DMatrix<T> {
        let mut x = x.clone();
        if let Some(mu) = &self.mean {
            for mut col in x.column_iter_mut() {
                col -= mu;
            }
        }
        x
    }

    /// Projection `Uᵀ (x − mean)` of snapshots onto the modes (r × columns).
    pub fn project(&self, x: &DMatrix<T>) -> DMatrix<T> {
        self.modes.transpose() * self.centre(x)
    }

    /// Candidate matrix over the given locations (rows of the modes) in order.
    pub fn candidates(&self, locations: &[usize]) -> Result<CandidateMatrix<T>> {
        CandidateMatrix::new(self.modes.select_rows(locations))
    }
}
