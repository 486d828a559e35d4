//! Choosing one extreme arrangement per length class.
//!
//! For a selection `x` in `{0,1}^m` (0 = ones-maximizing arrangement,
//! 1 = ones-minimizing) the expected frequency of 1s is `a.x + b + 0.5`.
//! The solvers here minimize `|a.x + b|` exactly. Every solver evaluates
//! the final objective with [`objective`], which sums `b` and the selected
//! `a_j` in index order, so equal selections give bit-identical values and
//! ties resolve to the lexicographically smallest `x` everywhere.

mod bisection;
mod branch_bound;
mod endpoints;
mod exhaustive;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;

pub use bisection::{feasibility_search, solve_bisection, Feasibility, DEFAULT_EPSILON, FEASIBILITY_SLACK};
pub use branch_bound::solve_branch_bound;
pub use endpoints::{endpoint_counts, extreme_permutations, ClassEndpoints, EndpointProfile};
pub use exhaustive::{solve_exhaustive, solve_exhaustive_with, EXHAUSTIVE_MAX_CLASSES};

/// Work counters reported by a solver.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    /// Full selections evaluated.
    pub evaluations: u64,
    /// Bisection steps.
    pub iterations: u32,
    /// Search-tree nodes visited.
    pub nodes: u64,
}

/// A selection vector and its objective `|a.x + b|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Selection {
    pub x: Vec<u8>,
    pub objective: f64,
    pub stats: SolveStats,
}

impl Selection {
    pub(crate) fn new(a: &[f64], b: f64, x: Vec<u8>, stats: SolveStats) -> Self {
        let objective = objective(a, b, &x);
        Selection { x, objective, stats }
    }
}

/// `|b + sum_{j: x_j = 1} a_j|`, summed in index order.
pub fn objective(a: &[f64], b: f64, x: &[u8]) -> f64 {
    signed_value(a, b, x).abs()
}

pub(crate) fn signed_value(a: &[f64], b: f64, x: &[u8]) -> f64 {
    let mut v = b;
    for (aj, &xj) in a.iter().zip(x) {
        if xj == 1 {
            v += aj;
        }
    }
    v
}

pub(crate) fn check_instance(a: &[f64], b: f64) -> Result<()> {
    if !b.is_finite() || a.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidPmf("instance coefficients must be finite".into()));
    }
    Ok(())
}

/// Serialized selection instance: `{"a": [...], "b": ..., "epsilon": ...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub a: Vec<f64>,
    pub b: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

impl Instance {
    pub fn from_json(text: &str) -> Result<Self> {
        let inst: Instance = serde_json::from_str(text)?;
        check_instance(&inst.a, inst.b)?;
        Ok(inst)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    #[default]
    Exhaustive,
    Bisection,
    #[serde(rename = "bb")]
    BranchBound,
}

impl FromStr for SolverKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exhaustive" => Ok(SolverKind::Exhaustive),
            "bisection" => Ok(SolverKind::Bisection),
            "bb" | "branch_bound" | "branch-and-bound" => Ok(SolverKind::BranchBound),
            other => Err(format!("unknown solver {other:?} (expected exhaustive, bisection or bb)")),
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverKind::Exhaustive => "exhaustive",
            SolverKind::Bisection => "bisection",
            SolverKind::BranchBound => "bb",
        })
    }
}

/// Run the chosen solver. `epsilon` only affects bisection.
pub fn solve(kind: SolverKind, a: &[f64], b: f64, epsilon: f64) -> Result<Selection> {
    match kind {
        SolverKind::Exhaustive => solve_exhaustive_with(a, b, Execution::default()),
        SolverKind::Bisection => solve_bisection(a, b, epsilon, None),
        SolverKind::BranchBound => solve_branch_bound(a, b),
    }
}

#[cfg(test)]
pub(crate) mod oracle {
    /// Plain enumeration written independently of the solvers: builds each
    /// `x` as a vector, evaluates with its own loop, keeps the first minimum.
    pub fn brute_force(a: &[f64], b: f64) -> (Vec<u8>, f64) {
        let m = a.len();
        let mut best: Option<(Vec<u8>, f64)> = None;
        let mut x = vec![0u8; m];
        loop {
            let mut v = b;
            for j in 0..m {
                if x[j] == 1 {
                    v += a[j];
                }
            }
            let obj = v.abs();
            if best.as_ref().is_none_or(|(_, o)| obj < *o) {
                best = Some((x.clone(), obj));
            }
            // next x in lexicographic order (x_1 most significant)
            let mut j = m;
            loop {
                if j == 0 {
                    return best.unwrap();
                }
                j -= 1;
                if x[j] == 0 {
                    x[j] = 1;
                    x[j + 1..].fill(0);
                    break;
                }
            }
        }
    }

    pub fn random_instance(rng: &mut crate::synth::Rng, m: usize) -> (Vec<f64>, f64) {
        let a = (0..m).map(|_| -rng.uniform()).collect();
        let b = rng.uniform() - 0.5;
        (a, b)
    }
}
