use super::{check_instance, Selection, SolveStats};
use crate::error::{Error, Result};
use crate::exec::Execution;

pub const EXHAUSTIVE_MAX_CLASSES: usize = 30;

/// Try all `2^m` selections.
pub fn solve_exhaustive(a: &[f64], b: f64) -> Result<Selection> {
    solve_exhaustive_with(a, b, Execution::default())
}

/// Exhaustive search with an explicit execution mode.
///
/// Candidate `k` in `0..2^m` encodes `x_j` as bit `m - 1 - j`, so integer
/// order is lexicographic order on `x`. The reduction is a minimum over
/// `(objective, k)`, which is associative and gives the same answer for any
/// split of the range.
pub fn solve_exhaustive_with(a: &[f64], b: f64, exec: Execution) -> Result<Selection> {
    check_instance(a, b)?;
    let m = a.len();
    if m > EXHAUSTIVE_MAX_CLASSES {
        return Err(Error::TooManyClasses(m));
    }
    let count = 1u64 << m;
    let eval = |k: u64| -> (f64, u64) {
        let mut v = b;
        for (j, aj) in a.iter().enumerate() {
            if (k >> (m - 1 - j)) & 1 == 1 {
                v += aj;
            }
        }
        (v.abs(), k)
    };
    let better = |p: (f64, u64), q: (f64, u64)| match p.0.total_cmp(&q.0) {
        std::cmp::Ordering::Less => p,
        std::cmp::Ordering::Greater => q,
        std::cmp::Ordering::Equal => {
            if p.1 <= q.1 {
                p
            } else {
                q
            }
        }
    };

    let best = run(count, exec, eval, better);
    let x = (0..m).map(|j| ((best.1 >> (m - 1 - j)) & 1) as u8).collect();
    Ok(Selection::new(a, b, x, SolveStats { evaluations: count, ..Default::default() }))
}

fn run<E, B>(count: u64, exec: Execution, eval: E, better: B) -> (f64, u64)
where
    E: Fn(u64) -> (f64, u64) + Sync + Send,
    B: Fn((f64, u64), (f64, u64)) -> (f64, u64) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() && count >= 1 << 10 {
        use rayon::prelude::*;
        return (0..count).into_par_iter().map(&eval).reduce(|| (f64::INFINITY, u64::MAX), &better);
    }
    let _ = exec;
    (0..count).map(eval).fold((f64::INFINITY, u64::MAX), better)
}
