//! Sensor selectors: D-, A- and E-optimality greedy methods, a seeded
//! random baseline and an exhaustive search used as a small-instance oracle.

mod ag;
mod brute;
mod dg;
mod eg;
mod random;
mod state;

pub use ag::select_ag;
pub use brute::{binomial, select_bruteforce, BRUTE_FORCE_LIMIT};
pub(crate) use brute::for_each_combination;
pub use dg::select_dg;
pub use eg::select_eg;
pub use random::select_random;

use crate::error::{Error, Result};
use crate::fisher::CandidateMatrix;
use crate::scalar::Real;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

/// Relative width inside which two objective values count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Dg,
    Ag,
    Eg,
    Random,
    Brute,
    /// Convex relaxation; exposed for completeness, always `NotImplemented`.
    Dc,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Dg => "DG",
            Method::Ag => "AG",
            Method::Eg => "EG",
            Method::Random => "RANDOM",
            Method::Brute => "BRUTE",
            Method::Dc => "DC",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dg" => Ok(Method::Dg),
            "ag" => Ok(Method::Ag),
            "eg" => Ok(Method::Eg),
            "random" => Ok(Method::Random),
            "brute" => Ok(Method::Brute),
            "dc" => Ok(Method::Dc),
            other => Err(Error::InvalidInput(format!("unknown method '{other}'"))),
        }
    }
}

/// Optimality criterion for exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    /// Maximize the determinant.
    D,
    /// Minimize the trace of the inverse.
    A,
    /// Maximize the minimum eigenvalue.
    E,
}

impl Criterion {
    pub fn goal(self) -> Goal {
        match self {
            Criterion::A => Goal::Minimize,
            Criterion::D | Criterion::E => Goal::Maximize,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Goal {
    Minimize,
    Maximize,
}

/// True when `candidate` beats `incumbent` by more than the tie tolerance.
/// Scanning candidates in index order with this test makes the lowest index
/// win every tie.
pub fn strictly_better<T: Real>(candidate: T, incumbent: T, goal: Goal) -> bool {
    if !candidate.is_finite() {
        return false;
    }
    if !incumbent.is_finite() {
        return true;
    }
    let diff = match goal {
        Goal::Maximize => candidate - incumbent,
        Goal::Minimize => incumbent - candidate,
    };
    diff > T::tol(TIE_TOLERANCE) * candidate.abs().max(incumbent.abs())
}

/// Running arg-optimum with lowest-index tie-breaking.
#[derive(Debug, Clone)]
pub struct ArgBest<T> {
    goal: Goal,
    best: Option<(usize, T)>,
}

impl<T: Real> ArgBest<T> {
    pub fn new(goal: Goal) -> Self {
        Self { goal, best: None }
    }

    /// Offers candidate `index` with objective `value`; indices must arrive
    /// in increasing order for the tie-break to hold.
    pub fn offer(&mut self, index: usize, value: T) {
        match self.best {
            None if value.is_finite() => self.best = Some((index, value)),
            Some((_, v)) if strictly_better(value, v, self.goal) => {
                self.best = Some((index, value))
            }
            _ => {}
        }
    }

    pub fn get(&self) -> Option<(usize, T)> {
        self.best
    }
}

/// Outcome of one selector run.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionResult<T> {
    pub method: Method,
    /// Chosen sensors in selection order.
    pub indices: Vec<usize>,
    /// Objective of the grown set after each step: determinant (DG and the
    /// random baseline), trace of the inverse (AG), minimum eigenvalue (EG),
    /// or the searched criterion on each prefix (exhaustive search).
    pub per_step_objective: Vec<T>,
    /// Seconds elapsed since the start of selection, after each step.
    pub step_wall_time: Vec<f64>,
    /// Total selection time in seconds.
    pub wall_time: f64,
}

impl<T: Real> SelectionResult<T> {
    /// The result truncated to its first `p` selections.
    pub fn prefix(&self, p: usize) -> Self {
        let p = p.min(self.indices.len());
        Self {
            method: self.method,
            indices: self.indices[..p].to_vec(),
            per_step_objective: self.per_step_objective[..p].to_vec(),
            step_wall_time: self.step_wall_time[..p].to_vec(),
            wall_time: if p == 0 { 0.0 } else { self.step_wall_time[p - 1] },
        }
    }
}

/// Extra knobs for [`select`].
#[derive(Debug, Clone, Copy)]
pub struct SelectOptions {
    pub seed: u64,
    pub criterion: Criterion,
}

impl Default for SelectOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            criterion: Criterion::D,
        }
    }
}

/// Runs the named method.
pub fn select<T: Real>(
    cand: &CandidateMatrix<T>,
    method: Method,
    p: usize,
    opts: SelectOptions,
) -> Result<SelectionResult<T>> {
    match method {
        Method::Dg => select_dg(cand, p),
        Method::Ag => select_ag(cand, p),
        Method::Eg => select_eg(cand, p),
        Method::Random => select_random(cand, p, opts.seed),
        Method::Brute => select_bruteforce(cand, p, opts.criterion),
        Method::Dc => Err(Error::NotImplemented("DC convex relaxation")),
    }
}

pub(crate) fn check_count<T: Real>(cand: &CandidateMatrix<T>, p: usize) -> Result<()> {
    if p > cand.n() {
        return Err(Error::TooManySensors { p, n: cand.n() });
    }
    if p == 0 {
        return Err(Error::InvalidInput("at least one sensor must be requested".into()));
    }
    Ok(())
}

/// Collects per-step bookkeeping while a selector runs.
pub(crate) struct Recorder<T> {
    method: Method,
    start: Instant,
    indices: Vec<usize>,
    objective: Vec<T>,
    times: Vec<f64>,
}

impl<T: Real> Recorder<T> {
    pub(crate) fn start(method: Method, p: usize) -> Self {
        Self {
            method,
            start: Instant::now(),
            indices: Vec::with_capacity(p),
            objective: Vec::with_capacity(p),
            times: Vec::with_capacity(p),
        }
    }

    pub(crate) fn record(&mut self, index: usize, objective: T) {
        self.indices.push(index);
        self.objective.push(objective);
        self.times.push(self.start.elapsed().as_secs_f64());
    }

    pub(crate) fn finish(self) -> SelectionResult<T> {
        SelectionResult {
            method: self.method,
            wall_time: self.start.elapsed().as_secs_f64(),
            indices: self.indices,
            per_step_objective: self.objective,
            step_wall_time: self.times,
        }
    }
}
