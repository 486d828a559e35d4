use super::{check_instance, Selection, SolveStats};
use crate::error::{Error, Result};

/// Slack on the feasibility interval bounds, absorbing rounding.
pub const FEASIBILITY_SLACK: f64 = 1e-15;

pub const DEFAULT_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<u8>),
    Infeasible,
}

/// Reachable range of `a.x` over the free coordinates `j..m`, as suffix sums
/// of the negative and positive coefficients.
fn suffix_bounds(a: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let m = a.len();
    let mut neg = vec![0.0; m + 1];
    let mut pos = vec![0.0; m + 1];
    for j in (0..m).rev() {
        neg[j] = neg[j + 1] + a[j].min(0.0);
        pos[j] = pos[j + 1] + a[j].max(0.0);
    }
    (neg, pos)
}

/// Find `x` with `-t <= a.x + b <= t`.
///
/// Depth-first over `x_1, x_2, ...`, trying 0 before 1, so the witness is the
/// lexicographically smallest feasible `x`. A partial assignment with value
/// `v` can still reach `[v + neg_j, v + pos_j]`; branches whose range misses
/// `[-t, t]` (widened by [`FEASIBILITY_SLACK`]) are cut.
pub fn feasibility_search(a: &[f64], b: f64, t: f64) -> Feasibility {
    feasibility_counted(a, b, t, &mut 0)
}

fn feasibility_counted(a: &[f64], b: f64, t: f64, nodes: &mut u64) -> Feasibility {
    let (neg, pos) = suffix_bounds(a);
    let lo = -t - FEASIBILITY_SLACK;
    let hi = t + FEASIBILITY_SLACK;
    let mut x = vec![0u8; a.len()];

    fn dfs(
        j: usize,
        value: f64,
        ctx: (&[f64], &[f64], &[f64], f64, f64),
        x: &mut [u8],
        nodes: &mut u64,
    ) -> bool {
        let (a, neg, pos, lo, hi) = ctx;
        *nodes += 1;
        if value + pos[j] < lo || value + neg[j] > hi {
            return false;
        }
        if j == a.len() {
            return true;
        }
        x[j] = 0;
        if dfs(j + 1, value, ctx, x, nodes) {
            return true;
        }
        x[j] = 1;
        if dfs(j + 1, value + a[j], ctx, x, nodes) {
            return true;
        }
        x[j] = 0;
        false
    }

    if dfs(0, b, (a, &neg, &pos, lo, hi), &mut x, nodes) {
        Feasibility::Feasible(x)
    } else {
        Feasibility::Infeasible
    }
}

/// Bisection on the epigraph level `t`.
///
/// Keeps a bracket `[l, u]` where `u` is achieved by a known witness and no
/// selection does better than `l`. Each step solves the feasibility problem
/// at the midpoint and halves the bracket, stopping once `u - l <= epsilon`.
/// The default bracket is `[0, |b|]`, witnessed by `x = 0`. A custom bracket
/// must have a feasible upper end.
pub fn solve_bisection(a: &[f64], b: f64, epsilon: f64, bracket: Option<(f64, f64)>) -> Result<Selection> {
    check_instance(a, b)?;
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    let mut stats = SolveStats::default();
    let (mut l, mut u, mut witness) = match bracket {
        None => (0.0, b.abs(), vec![0u8; a.len()]),
        Some((l0, u0)) => {
            if !(l0 >= 0.0 && l0 <= u0 && u0.is_finite()) {
                return Err(Error::InvalidBracket(l0, u0));
            }
            match feasibility_counted(a, b, u0, &mut stats.nodes) {
                Feasibility::Feasible(x) => (l0, u0, x),
                Feasibility::Infeasible => return Err(Error::InvalidBracket(l0, u0)),
            }
        }
    };
    while u - l > epsilon {
        let t = 0.5 * (l + u);
        if t <= l || t >= u {
            // bracket below float resolution
            break;
        }
        stats.iterations += 1;
        match feasibility_counted(a, b, t, &mut stats.nodes) {
            Feasibility::Feasible(x) => {
                u = t;
                witness = x;
            }
            Feasibility::Infeasible => l = t,
        }
    }
    stats.evaluations = stats.iterations as u64;
    Ok(Selection::new(a, b, witness, stats))
}
