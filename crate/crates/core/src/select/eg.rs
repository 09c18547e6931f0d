use super::{check_count, ArgBest, Goal, Method, Recorder, SelectionResult};
use crate::error::{Error, Result};
use crate::fisher::CandidateMatrix;
use crate::linalg;
use crate::scalar::Real;
use nalgebra::DMatrix;

/// E-optimality greedy: each step maximizes the smallest eigenvalue of the
/// grown information matrix, the bordered `C_k C_kᵀ` while `k ≤ r` and the
/// rank-one update `C_{k−1}ᵀ C_{k−1} + uᵀ u` afterwards. Every candidate gets
/// a full symmetric eigendecomposition.
///
/// `per_step_objective` holds the minimum eigenvalue.
pub fn select_eg<T: Real>(cand: &CandidateMatrix<T>, p: usize) -> Result<SelectionResult<T>> {
    check_count(cand, p)?;
    let mut rec = Recorder::start(Method::Eg, p);
    let (n, r) = (cand.n(), cand.r());
    let u = cand.matrix();
    let mut chosen = vec![false; n];
    let mut selected: Vec<usize> = Vec::with_capacity(p);

    for step in 1..=p {
        let mut best = ArgBest::new(Goal::Maximize);
        let c = cand.stack(&selected);
        if step <= r {
            let k = step - 1;
            let g = linalg::gram_rows(&c);
            let w = u * c.transpose();
            let mut bordered = DMatrix::zeros(step, step);
            bordered.view_mut((0, 0), (k, k)).copy_from(&g);
            for i in (0..n).filter(|&i| !chosen[i]) {
                for j in 0..k {
                    bordered[(j, k)] = w[(i, j)];
                    bordered[(k, j)] = w[(i, j)];
                }
                bordered[(k, k)] = cand.row_norm_sq(i);
                best.offer(i, linalg::min_eigenvalue(&bordered)?);
            }
        } else {
            let m = linalg::gram_cols(&c);
            for i in (0..n).filter(|&i| !chosen[i]) {
                let row = u.row(i);
                let updated = &m + row.transpose() * row;
                best.offer(i, linalg::min_eigenvalue(&updated)?);
            }
        }
        let (i, lam) = best.get().ok_or(Error::NoAdmissibleCandidate { step })?;
        chosen[i] = true;
        selected.push(i);
        rec.record(i, lam);
    }
    Ok(rec.finish())
}
