//! Cached inverse Gram matrix carried between greedy steps.

use crate::error::{Error, Result};
use crate::fisher::CandidateMatrix;
use crate::linalg;
use crate::scalar::Real;
use nalgebra::{DMatrix, DVector};

/// Largest entry of `M M⁻¹ − I` tolerated before the cache is rebuilt.
const RESIDUAL_LIMIT: f64 = 1e-8;

/// Holds `(C Cᵀ)⁻¹` while fewer than `r` sensors are selected and
/// `(Cᵀ C)⁻¹` from `r` sensors on, updated by block-inverse bordering and
/// Sherman-Morrison respectively, and rebuilt from scratch every `r` steps.
pub(crate) struct GreedyState<'a, T: Real> {
    cand: &'a CandidateMatrix<T>,
    selected: Vec<usize>,
    c: DMatrix<T>,
    inverse: DMatrix<T>,
    since_refresh: usize,
}

impl<'a, T: Real> GreedyState<'a, T> {
    pub(crate) fn new(cand: &'a CandidateMatrix<T>) -> Self {
        Self {
            cand,
            selected: Vec::new(),
            c: DMatrix::zeros(0, cand.r()),
            inverse: DMatrix::zeros(0, 0),
            since_refresh: 0,
        }
    }

    pub(crate) fn k(&self) -> usize {
        self.selected.len()
    }

    pub(crate) fn measurement(&self) -> &DMatrix<T> {
        &self.c
    }

    /// `(C Cᵀ)⁻¹`; valid while `k < r`.
    pub(crate) fn row_gram_inverse(&self) -> &DMatrix<T> {
        debug_assert!(self.k() < self.cand.r());
        &self.inverse
    }

    /// `(Cᵀ C)⁻¹`; valid once `k ≥ r`.
    pub(crate) fn col_gram_inverse(&self) -> &DMatrix<T> {
        debug_assert!(self.k() >= self.cand.r());
        &self.inverse
    }

    pub(crate) fn push(&mut self, i: usize) -> Result<()> {
        let r = self.cand.r();
        let u = self.cand.row(i).transpose();
        let k_old = self.k();
        self.selected.push(i);
        self.c = self.c.clone().insert_row(k_old, T::zero());
        self.c.set_row(k_old, &self.cand.row(i));
        let k = k_old + 1;

        if k == r {
            self.refresh()?;
            return Ok(());
        }
        if k < r {
            self.border(&u)?;
        } else {
            let b = &self.inverse * &u;
            let denom = T::one() + u.dot(&b);
            self.inverse -= &b * b.transpose() / denom;
        }
        self.since_refresh += 1;
        if self.since_refresh >= r || (cfg!(debug_assertions) && !self.residual_ok()) {
            self.refresh()?;
        }
        Ok(())
    }

    /// Bordered block inverse of `C Cᵀ` after appending row `u`.
    fn border(&mut self, u: &DVector<T>) -> Result<()> {
        let k_old = self.inverse.nrows();
        let prev = self.c.rows(0, k_old);
        let w = prev * u;
        let a = &self.inverse * &w;
        let schur = u.norm_squared() - w.dot(&a);
        if !(schur > T::zero()) {
            return Err(Error::SingularInformation);
        }
        let mut next = DMatrix::zeros(k_old + 1, k_old + 1);
        next.view_mut((0, 0), (k_old, k_old))
            .copy_from(&(&self.inverse + &a * a.transpose() / schur));
        for j in 0..k_old {
            next[(j, k_old)] = -a[j] / schur;
            next[(k_old, j)] = -a[j] / schur;
        }
        next[(k_old, k_old)] = T::one() / schur;
        self.inverse = next;
        Ok(())
    }

    fn gram(&self) -> DMatrix<T> {
        if self.k() < self.cand.r() {
            linalg::gram_rows(&self.c)
        } else {
            linalg::gram_cols(&self.c)
        }
    }

    fn residual_ok(&self) -> bool {
        let g = self.gram();
        let prod = &g * &self.inverse - DMatrix::identity(g.nrows(), g.ncols());
        prod.amax() <= T::tol(RESIDUAL_LIMIT)
    }

    fn refresh(&mut self) -> Result<()> {
        let g = self.gram();
        linalg::ensure_nonsingular(&g)?;
        self.inverse = linalg::spd_inverse(&g)?;
        self.since_refresh = 0;
        Ok(())
    }
}
