use super::{check_count, strictly_better, Criterion, Method, Recorder, SelectionResult};
use crate::error::{Error, Result};
use crate::fisher::{build_measurement, fisher_info, CandidateMatrix};
use crate::scalar::Real;

/// Largest number of subsets an exhaustive search may visit.
pub const BRUTE_FORCE_LIMIT: u128 = 10_000_000;

/// `n choose k`, exact.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_combination<E>(
    n: usize,
    k: usize,
    mut f: impl FnMut(&[usize]) -> std::result::Result<(), E>,
) -> std::result::Result<(), E> {
    if k > n {
        return Ok(());
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx)?;
        let Some(pos) = (0..k).rev().find(|&j| idx[j] != j + n - k) else {
            return Ok(());
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub(crate) fn criterion_value<T: Real>(
    cand: &CandidateMatrix<T>,
    subset: &[usize],
    criterion: Criterion,
) -> Result<T> {
    let info = fisher_info(&build_measurement(cand, subset)?)?;
    match criterion {
        Criterion::D => Ok(info.det_index()),
        Criterion::A => match info.trace_inv_index() {
            Err(Error::SingularInformation) => Ok(T::one() / T::zero()),
            other => other,
        },
        Criterion::E => info.min_eig_index(),
    }
}

/// Exhaustive optimum of the criterion over all `p`-subsets; ties go to the
/// lexicographically smallest subset. The result lists the subset in
/// ascending order and `per_step_objective` evaluates each prefix.
pub fn select_bruteforce<T: Real>(
    cand: &CandidateMatrix<T>,
    p: usize,
    criterion: Criterion,
) -> Result<SelectionResult<T>> {
    check_count(cand, p)?;
    let count = binomial(cand.n(), p);
    if count > BRUTE_FORCE_LIMIT {
        return Err(Error::InstanceTooLarge {
            count,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut rec = Recorder::start(Method::Brute, p);
    let goal = criterion.goal();
    let mut best: Option<(Vec<usize>, T)> = None;
    for_each_combination(cand.n(), p, |s| -> Result<()> {
        let v = criterion_value(cand, s, criterion)?;
        let take = match &best {
            None => v.is_finite(),
            Some((_, incumbent)) => strictly_better(v, *incumbent, goal),
        };
        if take {
            best = Some((s.to_vec(), v));
        }
        Ok(())
    })?;
    let (winner, _) = best.ok_or(Error::NoAdmissibleCandidate { step: p })?;
    for k in 1..=p {
        let v = criterion_value(cand, &winner[..k], criterion)?;
        rec.record(winner[k - 1], v);
    }
    Ok(rec.finish())
}
