use super::{check_count, ArgBest, Goal, Method, Recorder, SelectionResult};
use super::state::GreedyState;
use crate::error::{Error, Result};
use crate::fisher::CandidateMatrix;
use crate::linalg::EPS_SINGULAR;
use crate::scalar::Real;

/// D-optimality greedy.
///
/// The first `min(p, r)` sensors are the column pivots of a pivoted QR of
/// `Uᵀ`, computed as repeated selection of the row with the largest residual
/// norm followed by Gram-Schmidt deflation of every row against it. Each such
/// step multiplies `det(C Cᵀ)` by the squared residual. Beyond `r` sensors a
/// row `u` scales `det(Cᵀ C)` by `1 + u (Cᵀ C)⁻¹ uᵀ`, which is maximized.
///
/// `per_step_objective` holds the determinant of the information matrix.
pub fn select_dg<T: Real>(cand: &CandidateMatrix<T>, p: usize) -> Result<SelectionResult<T>> {
    check_count(cand, p)?;
    let mut rec = Recorder::start(Method::Dg, p);
    let (n, r) = (cand.n(), cand.r());
    let u = cand.matrix();
    let floor = T::tol(EPS_SINGULAR) * cand.max_row_norm_sq();
    let mut resid = u.clone();
    let mut chosen = vec![false; n];
    let mut state = GreedyState::new(cand);
    let mut det = T::one();

    for step in 1..=p {
        let mut best = ArgBest::new(Goal::Maximize);
        if step <= r {
            for i in (0..n).filter(|&i| !chosen[i]) {
                best.offer(i, resid.row(i).norm_squared());
            }
            let (i, res2) = best.get().ok_or(Error::NoAdmissibleCandidate { step })?;
            if res2 <= floor {
                return Err(Error::NoAdmissibleCandidate { step });
            }
            let q = resid.row(i).transpose() / res2.sqrt();
            let proj = &resid * &q;
            resid -= proj * q.transpose();
            det *= res2;
            state.push(i)?;
            chosen[i] = true;
            rec.record(i, det);
        } else {
            let b = u * state.col_gram_inverse();
            for i in (0..n).filter(|&i| !chosen[i]) {
                best.offer(i, T::one() + u.row(i).dot(&b.row(i)));
            }
            let (i, gain) = best.get().ok_or(Error::NoAdmissibleCandidate { step })?;
            det *= gain;
            state.push(i)?;
            chosen[i] = true;
            rec.record(i, det);
        }
    }
    Ok(rec.finish())
}
