use super::state::GreedyState;
use super::{check_count, ArgBest, Goal, Method, Recorder, SelectionResult};
use crate::error::{Error, Result};
use crate::fisher::CandidateMatrix;
use crate::scalar::Real;

/// Candidates whose projection residual falls below this fraction of their
/// own energy lie (numerically) in the span of the selected rows.
pub(crate) const EPS_DENOM: f64 = 1e-10;

/// A-optimality greedy.
///
/// With `k − 1 < r` sensors chosen, appending `u` raises `tr[(C Cᵀ)⁻¹]` by
///
/// ```text
/// (u Cᵀ (C Cᵀ)⁻² C uᵀ + 1) / (u (I − Cᵀ (C Cᵀ)⁻¹ C) uᵀ)
/// ```
///
/// and once `k − 1 ≥ r` it changes `tr[(Cᵀ C)⁻¹]` by
/// `−u (Cᵀ C)⁻² uᵀ / (1 + u (Cᵀ C)⁻¹ uᵀ)`. Each step picks the smallest
/// change; the first step reduces to the largest row norm.
///
/// `per_step_objective` holds the trace of the inverse information matrix.
pub fn select_ag<T: Real>(cand: &CandidateMatrix<T>, p: usize) -> Result<SelectionResult<T>> {
    check_count(cand, p)?;
    let mut rec = Recorder::start(Method::Ag, p);
    let (n, r) = (cand.n(), cand.r());
    let u = cand.matrix();
    let norms: Vec<T> = (0..n).map(|i| cand.row_norm_sq(i)).collect();
    let mut chosen = vec![false; n];
    let mut state = GreedyState::new(cand);
    let mut trace = T::zero();

    for step in 1..=p {
        let mut best = ArgBest::new(Goal::Minimize);
        if step == 1 {
            for i in 0..n {
                if norms[i] > T::zero() {
                    best.offer(i, T::one() / norms[i]);
                }
            }
        } else if step <= r {
            let w = u * state.measurement().transpose();
            let a = &w * state.row_gram_inverse();
            let eps = T::tol(EPS_DENOM);
            for i in (0..n).filter(|&i| !chosen[i]) {
                let denom = norms[i] - w.row(i).dot(&a.row(i));
                if denom <= eps * norms[i] {
                    continue;
                }
                best.offer(i, (a.row(i).norm_squared() + T::one()) / denom);
            }
        } else {
            let b = u * state.col_gram_inverse();
            for i in (0..n).filter(|&i| !chosen[i]) {
                let denom = T::one() + u.row(i).dot(&b.row(i));
                best.offer(i, -b.row(i).norm_squared() / denom);
            }
        }
        let (i, delta) = best.get().ok_or(Error::NoAdmissibleCandidate { step })?;
        trace += delta;
        state.push(i)?;
        chosen[i] = true;
        rec.record(i, trace);
    }
    Ok(rec.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counterexample_matrix;
    use nalgebra::DMatrix;

    #[test]
    fn counterexample_first_pick() {
        let res = select_ag(&counterexample_matrix::<f64>(), 1).unwrap();
        assert_eq!(res.indices, vec![3]);
    }

    #[test]
    fn identity_full_selection() {
        let c = CandidateMatrix::new(DMatrix::<f64>::identity(3, 3)).unwrap();
        let res = select_ag(&c, 3).unwrap();
        assert_eq!(res.indices, vec![0, 1, 2]);
        assert!((res.per_step_objective[2] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn redundant_rows_are_skipped() {
        let c = CandidateMatrix::from_row_slice(3, 2, &[1.0, 0.0, 2.0, 0.0, 0.0, 0.1]).unwrap();
        let res = select_ag(&c, 2).unwrap();
        assert_eq!(res.indices, vec![1, 2]);
    }

    #[test]
    fn all_redundant_is_an_error() {
        let c = CandidateMatrix::from_row_slice(2, 2, &[1.0, 0.0, 2.0, 0.0]).unwrap();
        assert_eq!(select_ag(&c, 2), Err(Error::NoAdmissibleCandidate { step: 2 }));
    }
}
