//! Sensor-selection objectives viewed as set functions, with exhaustive
//! submodularity and monotonicity checks, the (1 − 1/e) greedy bound and
//! the six-row E-optimality counterexample.

use crate::error::{Error, Result};
use crate::fisher::{regime_gram, CandidateMatrix};
use crate::linalg;
use crate::scalar::Real;
use crate::select::{self, binomial, strictly_better, ArgBest, Goal, BRUTE_FORCE_LIMIT};
use nalgebra::DMatrix;
use std::collections::HashMap;
use std::fmt::Write;

/// Default relative check tolerance.
pub const CHECK_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveKind {
    /// `det(C_Sᵀ C_S + εI)`.
    DEps,
    /// `r/ε − tr[(C_Sᵀ C_S + εI)⁻¹]`, zero on the empty set.
    AEps,
    /// Minimum eigenvalue of the regime Gram matrix, zero on the empty set.
    ERaw,
    /// Minimum eigenvalue of `C_S C_Sᵀ` regardless of regime.
    EGramRow,
    /// `Σ_{i∈S} ‖uᵢ‖²`.
    ModularNorm,
}

/// A set function over candidate rows.
#[derive(Debug, Clone, Copy)]
pub struct SetObjective<'a, T: Real> {
    kind: ObjectiveKind,
    epsilon: T,
    cand: &'a CandidateMatrix<T>,
}

/// `1e-6 · max‖uᵢ‖²`.
pub fn default_epsilon<T: Real>(cand: &CandidateMatrix<T>) -> T {
    T::lit(1e-6) * cand.max_row_norm_sq()
}

impl<'a, T: Real> SetObjective<'a, T> {
    pub fn new(kind: ObjectiveKind, cand: &'a CandidateMatrix<T>, epsilon: T) -> Result<Self> {
        let needs_eps = matches!(kind, ObjectiveKind::DEps | ObjectiveKind::AEps);
        if needs_eps && !(epsilon > T::zero()) {
            return Err(Error::InvalidInput(format!("epsilon must be positive, got {epsilon}")));
        }
        Ok(Self { kind, epsilon, cand })
    }

    pub fn kind(&self) -> ObjectiveKind {
        self.kind
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn candidates(&self) -> &CandidateMatrix<T> {
        self.cand
    }

    fn check_set(&self, s: &[usize]) -> Result<()> {
        crate::fisher::build_measurement(self.cand, s).map(|_| ())
    }

    /// Value of the set function on `s`.
    pub fn eval(&self, s: &[usize]) -> Result<T> {
        self.check_set(s)?;
        let c = self.cand.stack(s);
        let r = self.cand.r();
        let eps = self.epsilon;
        match self.kind {
            ObjectiveKind::AEps => {
                // r/ε − Σ 1/(λ+ε) = Σ λ / (ε (λ + ε)), free of the r/ε cancellation
                let lams = linalg::sym_eigenvalues(&linalg::gram_cols(&c))?;
                Ok(lams
                    .iter()
                    .map(|&l| l.max(T::zero()))
                    .fold(T::zero(), |acc, l| acc + l / (eps * (l + eps))))
            }
            ObjectiveKind::DEps => {
                let m = linalg::gram_cols(&c) + DMatrix::identity(r, r) * eps;
                Ok(linalg::gram_determinant(&m))
            }
            ObjectiveKind::ERaw if s.is_empty() => Ok(T::zero()),
            ObjectiveKind::ERaw => linalg::min_eigenvalue(&regime_gram(&c)),
            ObjectiveKind::EGramRow if s.is_empty() => Ok(T::zero()),
            ObjectiveKind::EGramRow => linalg::min_eigenvalue(&linalg::gram_rows(&c)),
            ObjectiveKind::ModularNorm => {
                Ok(s.iter().fold(T::zero(), |acc, &i| acc + self.cand.row_norm_sq(i)))
            }
        }
    }

    /// `f(S ∪ {i}) − f(S)`.
    pub fn marginal_gain(&self, s: &[usize], i: usize) -> Result<T> {
        if s.contains(&i) {
            return Err(Error::DuplicateSensor(i));
        }
        let mut grown = s.to_vec();
        grown.push(i);
        Ok(self.eval(&grown)? - self.eval(s)?)
    }
}

/// `tr(A⁻¹ − B⁻¹)` with `A = C_Sᵀ C_S + εI` and `B = A + uᵢᵀ uᵢ`, the closed
/// form of the A-objective's marginal gain.
pub fn a_eps_gain_by_trace<T: Real>(
    cand: &CandidateMatrix<T>,
    s: &[usize],
    i: usize,
    epsilon: T,
) -> Result<T> {
    let r = cand.r();
    let a = linalg::gram_cols(&cand.stack(s)) + DMatrix::identity(r, r) * epsilon;
    let u = cand.row(i);
    let b = &a + u.transpose() * u;
    Ok(linalg::spd_inverse(&a)?.trace() - linalg::spd_inverse(&b)?.trace())
}

/// `(S, T, i)` where the diminishing-returns inequality is checked.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness<T> {
    pub s: Vec<usize>,
    pub t: Vec<usize>,
    pub i: usize,
    /// `f(S ∪ {i}) − f(S)`
    pub gain_small: T,
    /// `f(T ∪ {i}) − f(T)`
    pub gain_large: T,
}

/// Nested pair `S ⊂ T` with its values.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneWitness<T> {
    pub s: Vec<usize>,
    pub t: Vec<usize>,
    pub f_s: T,
    pub f_t: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModularityReport<T> {
    pub checked_pairs: usize,
    pub violations_submodular: Vec<Witness<T>>,
    pub violations_supermodular: Vec<Witness<T>>,
    pub violations_monotone: Vec<MonotoneWitness<T>>,
    pub tolerance: T,
}

impl<T: Real> ModularityReport<T> {
    fn empty(tolerance: T) -> Self {
        Self {
            checked_pairs: 0,
            violations_submodular: Vec::new(),
            violations_supermodular: Vec::new(),
            violations_monotone: Vec::new(),
            tolerance,
        }
    }

    pub fn is_submodular(&self) -> bool {
        self.violations_submodular.is_empty()
    }

    pub fn is_supermodular(&self) -> bool {
        self.violations_supermodular.is_empty()
    }

    pub fn is_monotone(&self) -> bool {
        self.violations_monotone.is_empty()
    }

    /// One witness per row: `kind,S,T,i,lhs,rhs` with sets space-separated.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,S,T,i,lhs,rhs\n");
        for (kind, list) in [
            ("submodular", &self.violations_submodular),
            ("supermodular", &self.violations_supermodular),
        ] {
            for w in list {
                let _ = writeln!(
                    out,
                    "{kind},{},{},{},{:.17e},{:.17e}",
                    fmt_set(&w.s),
                    fmt_set(&w.t),
                    w.i,
                    w.gain_small.as_f64(),
                    w.gain_large.as_f64()
                );
            }
        }
        for w in &self.violations_monotone {
            let _ = writeln!(
                out,
                "monotone,{},{},,{:.17e},{:.17e}",
                fmt_set(&w.s),
                fmt_set(&w.t),
                w.f_s.as_f64(),
                w.f_t.as_f64()
            );
        }
        out
    }

    pub fn to_text(&self, label: &str) -> String {
        format!(
            "{label}: checked={} submodular_violations={} supermodular_violations={} monotone_violations={} tol={:e}\n",
            self.checked_pairs,
            self.violations_submodular.len(),
            self.violations_supermodular.len(),
            self.violations_monotone.len(),
            self.tolerance.as_f64()
        )
    }
}

fn fmt_set(s: &[usize]) -> String {
    s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
}

fn mask_to_vec(mask: u64) -> Vec<usize> {
    (0..64).filter(|b| mask & (1 << b) != 0).collect()
}

fn scale_of<T: Real>(a: T, b: T) -> T {
    T::one().max(a.abs()).max(b.abs())
}

/// Memoized evaluation keyed by bit mask.
struct Memo<'o, 'a, T: Real> {
    obj: &'o SetObjective<'a, T>,
    values: HashMap<u64, T>,
}

impl<T: Real> Memo<'_, '_, T> {
    fn get(&mut self, mask: u64) -> Result<T> {
        if let Some(&v) = self.values.get(&mask) {
            return Ok(v);
        }
        let v = self.obj.eval(&mask_to_vec(mask))?;
        self.values.insert(mask, v);
        Ok(v)
    }
}

/// Every mask over `n` bits with popcount in `sizes`, by size then lexicographically.
fn masks_by_size(n: usize, sizes: std::ops::RangeInclusive<usize>) -> Vec<u64> {
    let mut out = Vec::new();
    for k in sizes {
        let _ = select::for_each_combination(n, k, |c| -> std::result::Result<(), ()> {
            out.push(c.iter().fold(0u64, |m, &i| m | (1 << i)));
            Ok(())
        });
    }
    out
}

fn guard(count: u128) -> Result<()> {
    if count > BRUTE_FORCE_LIMIT {
        Err(Error::InstanceTooLarge {
            count,
            limit: BRUTE_FORCE_LIMIT,
        })
    } else {
        Ok(())
    }
}

fn check_n(n: usize) -> Result<()> {
    if n > 63 {
        Err(Error::InstanceTooLarge {
            count: 1u128 << n.min(127),
            limit: BRUTE_FORCE_LIMIT,
        })
    } else {
        Ok(())
    }
}

/// Checks `f(S ∪ {i}) − f(S) ≥ f(T ∪ {i}) − f(T)` for every `S ⊊ T`,
/// `|T| ≤ max_set_size`, `i ∉ T`, recording failures in both directions.
/// A pair fails when the gap exceeds `tol · max(1, |lhs|, |rhs|)`.
pub fn check_submodular<T: Real>(
    obj: &SetObjective<'_, T>,
    max_set_size: usize,
    tol: T,
) -> Result<ModularityReport<T>> {
    let n = obj.cand.n();
    check_n(n)?;
    let max = max_set_size.min(n);
    let count: u128 = (1..=max)
        .map(|t| binomial(n, t) * ((1u128 << t) - 1) * (n - t) as u128)
        .sum();
    guard(count)?;
    let mut memo = Memo {
        obj,
        values: HashMap::new(),
    };
    let mut report = ModularityReport::empty(tol);
    for t_mask in masks_by_size(n, 1..=max) {
        for i in (0..n).filter(|&i| t_mask & (1 << i) == 0) {
            let gain_large = memo.get(t_mask | (1 << i))? - memo.get(t_mask)?;
            // proper submasks of T, including the empty set
            let mut s_mask = (t_mask - 1) & t_mask;
            loop {
                let gain_small = memo.get(s_mask | (1 << i))? - memo.get(s_mask)?;
                report.checked_pairs += 1;
                let gap = gain_small - gain_large;
                let slack = tol * scale_of(gain_small, gain_large);
                let w = || Witness {
                    s: mask_to_vec(s_mask),
                    t: mask_to_vec(t_mask),
                    i,
                    gain_small,
                    gain_large,
                };
                if gap < -slack {
                    report.violations_submodular.push(w());
                } else if gap > slack {
                    report.violations_supermodular.push(w());
                }
                if s_mask == 0 {
                    break;
                }
                s_mask = (s_mask - 1) & t_mask;
            }
        }
    }
    let key = |w: &Witness<T>| (w.s.clone(), w.t.clone(), w.i);
    report.violations_submodular.sort_by_key(key);
    report.violations_supermodular.sort_by_key(key);
    Ok(report)
}

/// Checks `f(S) ≤ f(T)` for every `S ⊊ T` with `|T| ≤ max_set_size`.
pub fn check_monotone<T: Real>(
    obj: &SetObjective<'_, T>,
    max_set_size: usize,
    tol: T,
) -> Result<ModularityReport<T>> {
    check_monotone_sizes(obj, 0, max_set_size, tol)
}

/// As [`check_monotone`], restricted to pairs with `|S| ≥ min_set_size`.
pub fn check_monotone_sizes<T: Real>(
    obj: &SetObjective<'_, T>,
    min_set_size: usize,
    max_set_size: usize,
    tol: T,
) -> Result<ModularityReport<T>> {
    let n = obj.cand.n();
    check_n(n)?;
    let max = max_set_size.min(n);
    let count: u128 = (min_set_size.max(1)..=max)
        .map(|t| binomial(n, t) * (1u128 << t))
        .sum();
    guard(count)?;
    let mut memo = Memo {
        obj,
        values: HashMap::new(),
    };
    let mut report = ModularityReport::empty(tol);
    for t_mask in masks_by_size(n, (min_set_size + 1)..=max) {
        let f_t = memo.get(t_mask)?;
        let mut s_mask = (t_mask - 1) & t_mask;
        loop {
            if s_mask.count_ones() as usize >= min_set_size {
                let f_s = memo.get(s_mask)?;
                report.checked_pairs += 1;
                if f_s - f_t > tol * scale_of(f_s, f_t) {
                    report.violations_monotone.push(MonotoneWitness {
                        s: mask_to_vec(s_mask),
                        t: mask_to_vec(t_mask),
                        f_s,
                        f_t,
                    });
                }
            }
            if s_mask == 0 {
                break;
            }
            s_mask = (s_mask - 1) & t_mask;
        }
    }
    report
        .violations_monotone
        .sort_by_key(|w| (w.s.clone(), w.t.clone()));
    Ok(report)
}

/// Greedy maximization of a set function with lowest-index tie-breaking.
pub fn greedy_maximize<T: Real>(obj: &SetObjective<'_, T>, p: usize) -> Result<Vec<usize>> {
    let n = obj.cand.n();
    if p > n {
        return Err(Error::TooManySensors { p, n });
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(p);
    for step in 1..=p {
        let base = obj.eval(&chosen)?;
        let mut best = ArgBest::new(Goal::Maximize);
        for i in 0..n {
            if chosen.contains(&i) {
                continue;
            }
            chosen.push(i);
            let v = obj.eval(&chosen)? - base;
            chosen.pop();
            best.offer(i, v);
        }
        let (i, _) = best.get().ok_or(Error::NoAdmissibleCandidate { step })?;
        chosen.push(i);
    }
    Ok(chosen)
}

/// Exhaustive maximizer over `p`-subsets; ties go to the lexicographically
/// smallest subset.
pub fn brute_maximize<T: Real>(obj: &SetObjective<'_, T>, p: usize) -> Result<(Vec<usize>, T)> {
    let n = obj.cand.n();
    guard(binomial(n, p))?;
    let mut best: Option<(Vec<usize>, T)> = None;
    select::for_each_combination(n, p, |s| -> Result<()> {
        let v = obj.eval(s)?;
        let take = match &best {
            None => true,
            Some((_, b)) => strictly_better(v, *b, Goal::Maximize),
        };
        if take {
            best = Some((s.to_vec(), v));
        }
        Ok(())
    })?;
    best.ok_or(Error::NoAdmissibleCandidate { step: p })
}

/// Greedy-versus-optimum comparison on the ε-regularized A-objective.
#[derive(Debug, Clone, PartialEq)]
pub struct NemhauserRecord<T> {
    pub greedy_indices: Vec<usize>,
    pub greedy_value: T,
    pub opt_indices: Vec<usize>,
    pub opt_value: T,
    pub ratio: T,
    /// `ratio ≥ 1 − 1/e − 1e-9`.
    pub holds: bool,
}

pub fn nemhauser_bound() -> f64 {
    1.0 - (-1.0f64).exp()
}

/// Runs the AG selector and an exhaustive search, both scored by the
/// ε-regularized A-objective, and compares them with the (1 − 1/e) bound.
pub fn nemhauser_check<T: Real>(
    cand: &CandidateMatrix<T>,
    p: usize,
    epsilon: T,
) -> Result<NemhauserRecord<T>> {
    let obj = SetObjective::new(ObjectiveKind::AEps, cand, epsilon)?;
    let (opt_indices, opt_value) = brute_maximize(&obj, p)?;
    let greedy_indices = select::select_ag(cand, p)?.indices;
    let greedy_value = obj.eval(&greedy_indices)?;
    let ratio = if opt_value > T::zero() {
        greedy_value / opt_value
    } else {
        T::one()
    };
    Ok(NemhauserRecord {
        holds: ratio.as_f64() >= nemhauser_bound() - 1e-9,
        greedy_indices,
        greedy_value,
        opt_indices,
        opt_value,
        ratio,
    })
}

/// The six-row, three-mode candidate matrix of the E-optimality counterexample.
pub fn counterexample_matrix<T: Real>() -> CandidateMatrix<T> {
    const ROWS: [f64; 18] = [
        0.2, -0.1, -0.2, //
        -0.5, -0.1, 0.2, //
        -0.2, 0.3, 0.2, //
        -0.5, 0.3, -0.3, //
        -0.4, -0.3, -0.4, //
        0.3, 0.0, 0.0,
    ];
    let data: Vec<T> = ROWS.iter().map(|&x| T::lit(x)).collect();
    CandidateMatrix::from_row_slice(6, 3, &data).expect("6x3 counterexample")
}

/// Minimum eigenvalues on the counterexample's nested sets and the two
/// printed gain comparisons.
///
/// Sets (zero-based rows): `C3 = {0,1,2}`, `C3p = C3 ∪ {4}`,
/// `C4 = {0,1,2,3}`, `C4p = C4 ∪ {4} = C5`, `C4pp = C4 ∪ {5}`,
/// `C5pp = C5 ∪ {5}`. Comparison one claims
/// `λ(C3p) − λ(C3) > λ(C4p) − λ(C4)`; comparison two claims
/// `λ(C4pp) − λ(C4) < λ(C5pp) − λ(C5)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleReport<T> {
    pub lambda_c3: T,
    pub lambda_c3p: T,
    pub lambda_c4: T,
    pub lambda_c4p: T,
    pub lambda_c4pp: T,
    pub lambda_c5: T,
    pub lambda_c5pp: T,
    pub first_lhs: T,
    pub first_rhs: T,
    /// `first_lhs > first_rhs`.
    pub first_holds: bool,
    pub second_lhs: T,
    pub second_rhs: T,
    /// `second_lhs < second_rhs`.
    pub second_holds: bool,
    /// Exhaustive check of the E objective on the matrix found failures of
    /// both submodularity and supermodularity.
    pub neither_sub_nor_supermodular: bool,
}

pub fn counterexample_report<T: Real>() -> Result<CounterexampleReport<T>> {
    let cand = counterexample_matrix::<T>();
    let obj = SetObjective::new(ObjectiveKind::ERaw, &cand, T::zero())?;
    let l = |s: &[usize]| obj.eval(s);
    let lambda_c3 = l(&[0, 1, 2])?;
    let lambda_c3p = l(&[0, 1, 2, 4])?;
    let lambda_c4 = l(&[0, 1, 2, 3])?;
    let lambda_c4p = l(&[0, 1, 2, 3, 4])?;
    let lambda_c4pp = l(&[0, 1, 2, 3, 5])?;
    let lambda_c5 = lambda_c4p;
    let lambda_c5pp = l(&[0, 1, 2, 3, 4, 5])?;
    let first_lhs = lambda_c3p - lambda_c3;
    let first_rhs = lambda_c4p - lambda_c4;
    let second_lhs = lambda_c4pp - lambda_c4;
    let second_rhs = lambda_c5pp - lambda_c5;
    let exhaustive = check_submodular(&obj, cand.n(), T::tol(CHECK_TOLERANCE))?;
    Ok(CounterexampleReport {
        lambda_c3,
        lambda_c3p,
        lambda_c4,
        lambda_c4p,
        lambda_c4pp,
        lambda_c5,
        lambda_c5pp,
        first_lhs,
        first_rhs,
        first_holds: first_lhs > first_rhs,
        second_lhs,
        second_rhs,
        second_holds: second_lhs < second_rhs,
        neither_sub_nor_supermodular: !exhaustive.is_submodular() && !exhaustive.is_supermodular(),
    })
}

impl<T: Real> CounterexampleReport<T> {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let rows = [
            ("C3 {0,1,2}", self.lambda_c3),
            ("C3p {0,1,2,4}", self.lambda_c3p),
            ("C4 {0,1,2,3}", self.lambda_c4),
            ("C4p {0,1,2,3,4}", self.lambda_c4p),
            ("C4pp {0,1,2,3,5}", self.lambda_c4pp),
            ("C5 {0,1,2,3,4}", self.lambda_c5),
            ("C5pp {0,1,2,3,4,5}", self.lambda_c5pp),
        ];
        for (name, v) in rows {
            let _ = writeln!(out, "lambda_min {name} = {:.12e}", v.as_f64());
        }
        let _ = writeln!(
            out,
            "gain(C3 + u4) - gain(C4 + u4): {:.12e} > {:.12e} : {}",
            self.first_lhs.as_f64(),
            self.first_rhs.as_f64(),
            self.first_holds
        );
        let _ = writeln!(
            out,
            "gain(C4 + u5) - gain(C5 + u5): {:.12e} < {:.12e} : {}",
            self.second_lhs.as_f64(),
            self.second_rhs.as_f64(),
            self.second_holds
        );
        let _ = writeln!(
            out,
            "E objective neither submodular nor supermodular: {}",
            self.neither_sub_nor_supermodular
        );
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("quantity,value\n");
        let items = [
            ("lambda_c3", self.lambda_c3.as_f64()),
            ("lambda_c3p", self.lambda_c3p.as_f64()),
            ("lambda_c4", self.lambda_c4.as_f64()),
            ("lambda_c4p", self.lambda_c4p.as_f64()),
            ("lambda_c4pp", self.lambda_c4pp.as_f64()),
            ("lambda_c5", self.lambda_c5.as_f64()),
            ("lambda_c5pp", self.lambda_c5pp.as_f64()),
            ("first_lhs", self.first_lhs.as_f64()),
            ("first_rhs", self.first_rhs.as_f64()),
            ("second_lhs", self.second_lhs.as_f64()),
            ("second_rhs", self.second_rhs.as_f64()),
        ];
        for (k, v) in items {
            let _ = writeln!(out, "{k},{v:.17e}");
        }
        let _ = writeln!(out, "first_holds,{}", self.first_holds);
        let _ = writeln!(out, "second_holds,{}", self.second_holds);
        let _ = writeln!(out, "neither_sub_nor_supermodular,{}", self.neither_sub_nor_supermodular);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity(r: usize) -> CandidateMatrix<f64> {
        CandidateMatrix::new(DMatrix::identity(r, r)).unwrap()
    }

    #[test]
    fn empty_set_values() {
        let c = counterexample_matrix::<f64>();
        let a = SetObjective::new(ObjectiveKind::AEps, &c, 1e-3).unwrap();
        assert_eq!(a.eval(&[]).unwrap(), 0.0);
        let d = SetObjective::new(ObjectiveKind::DEps, &c, 0.5).unwrap();
        assert!((d.eval(&[]).unwrap() - 0.125).abs() < 1e-15);
        let e = SetObjective::new(ObjectiveKind::ERaw, &c, 0.0).unwrap();
        assert_eq!(e.eval(&[]).unwrap(), 0.0);
        let m = SetObjective::new(ObjectiveKind::ModularNorm, &c, 0.0).unwrap();
        assert_eq!(m.eval(&[]).unwrap(), 0.0);
    }

    #[test]
    fn a_eps_on_identity() {
        let c = identity(3);
        for eps in [1e-3, 0.1, 2.0] {
            let a = SetObjective::new(ObjectiveKind::AEps, &c, eps).unwrap();
            let want = -3.0 / (1.0 + eps) + 3.0 / eps;
            let got = a.eval(&[0, 1, 2]).unwrap();
            assert!((got - want).abs() <= 1e-12 * want, "{got} vs {want}");
        }
    }

    #[test]
    fn epsilon_must_be_positive() {
        let c = identity(2);
        assert!(SetObjective::new(ObjectiveKind::AEps, &c, 0.0).is_err());
        assert!(SetObjective::new(ObjectiveKind::DEps, &c, -1.0).is_err());
        assert!(SetObjective::new(ObjectiveKind::ERaw, &c, 0.0).is_ok());
    }

    #[test]
    fn zero_row_gains_nothing() {
        let c = CandidateMatrix::from_row_slice(2, 2, &[0.0, 0.0, 1.0, 0.0]).unwrap();
        let a = SetObjective::new(ObjectiveKind::AEps, &c, 1e-3).unwrap();
        assert_eq!(a.marginal_gain(&[], 0).unwrap(), 0.0);
    }

    #[test]
    fn modular_gain_is_row_energy() {
        let c = counterexample_matrix::<f64>();
        let m = SetObjective::new(ObjectiveKind::ModularNorm, &c, 0.0).unwrap();
        for s in [&[][..], &[0, 1], &[2, 4, 5]] {
            assert!((m.marginal_gain(s, 3).unwrap() - 0.43).abs() < 1e-15);
        }
    }

    #[test]
    fn gain_rejects_member() {
        let c = identity(2);
        let m = SetObjective::new(ObjectiveKind::ModularNorm, &c, 0.0).unwrap();
        assert_eq!(m.marginal_gain(&[1], 1), Err(Error::DuplicateSensor(1)));
    }

    #[test]
    fn a_eps_gain_matches_trace_form() {
        let c = counterexample_matrix::<f64>();
        let eps = 1e-3;
        let a = SetObjective::new(ObjectiveKind::AEps, &c, eps).unwrap();
        let direct = a.marginal_gain(&[0, 1], 2).unwrap();
        let trace = a_eps_gain_by_trace(&c, &[0, 1], 2, eps).unwrap();
        assert!(direct > 0.0);
        assert!((direct - trace).abs() <= 1e-10 * direct);
    }

    #[test]
    fn modular_fixture_has_no_violations() {
        let c = counterexample_matrix::<f64>();
        let m = SetObjective::new(ObjectiveKind::ModularNorm, &c, 0.0).unwrap();
        let rep = check_submodular(&m, 5, CHECK_TOLERANCE).unwrap();
        assert!(rep.checked_pairs > 0);
        assert!(rep.is_submodular() && rep.is_supermodular());
    }

    #[test]
    fn weak_row_breaks_row_gram_monotonicity() {
        let c = CandidateMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.01]).unwrap();
        let e = SetObjective::new(ObjectiveKind::EGramRow, &c, 0.0).unwrap();
        let rep = check_monotone(&e, 2, CHECK_TOLERANCE).unwrap();
        assert!(!rep.is_monotone());
        assert!(rep.violations_monotone.iter().any(|w| w.s == vec![0] && w.t == vec![0, 1]));
    }

    #[test]
    fn guard_rejects_large_instances() {
        let c = CandidateMatrix::new(DMatrix::<f64>::from_element(40, 2, 1.0)).unwrap();
        let m = SetObjective::new(ObjectiveKind::ModularNorm, &c, 0.0).unwrap();
        assert!(matches!(
            check_submodular(&m, 10, CHECK_TOLERANCE),
            Err(Error::InstanceTooLarge { .. })
        ));
    }

    #[test]
    fn nemhauser_identity_is_exact() {
        let c = identity(4);
        for eps in [1e-3, 1.0] {
            let rec = nemhauser_check(&c, 2, eps).unwrap();
            assert!((rec.ratio - 1.0).abs() < 1e-12);
            assert!(rec.holds);
        }
    }

    #[test]
    fn report_csv_has_header_and_rows() {
        let c = counterexample_matrix::<f64>();
        let e = SetObjective::new(ObjectiveKind::ERaw, &c, 0.0).unwrap();
        let rep = check_submodular(&e, 5, CHECK_TOLERANCE).unwrap();
        let csv = rep.to_csv();
        assert!(csv.starts_with("kind,S,T,i,lhs,rhs\n"));
        assert_eq!(
            csv.lines().count(),
            1 + rep.violations_submodular.len() + rep.violations_supermodular.len()
        );
    }
}
