use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{check_instance, objective, Selection, SolveStats};
use crate::error::Result;

struct Node {
    bound: f64,
    depth: usize,
    value: f64,
    prefix: Vec<u8>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl Ord for Node {
    // Max-heap order: smallest bound first, then deeper, then smaller prefix.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then(self.depth.cmp(&other.depth))
            .then_with(|| other.prefix.cmp(&self.prefix))
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Best-first branch and bound over `x_1, x_2, ...`.
///
/// A node fixes a prefix of `x`; its bound is the distance from 0 to the
/// interval of values `a.x + b` its completions can reach (0 when the
/// interval contains 0). The incumbent starts at `x = 0`. Nodes whose bound
/// exceeds the incumbent by more than a rounding slack are dropped; nodes
/// that tie are still expanded so the lexicographically smallest optimum wins.
pub fn solve_branch_bound(a: &[f64], b: f64) -> Result<Selection> {
    check_instance(a, b)?;
    let m = a.len();
    let mut neg = vec![0.0; m + 1];
    let mut pos = vec![0.0; m + 1];
    for j in (0..m).rev() {
        neg[j] = neg[j + 1] + a[j].min(0.0);
        pos[j] = pos[j + 1] + a[j].max(0.0);
    }
    let scale = 1.0 + b.abs() + a.iter().map(|v| v.abs()).sum::<f64>();
    let slack = 1e-12 * scale;
    let bound_at = |depth: usize, value: f64| {
        let lo = value + neg[depth];
        let hi = value + pos[depth];
        if lo > 0.0 {
            lo
        } else if hi < 0.0 {
            -hi
        } else {
            0.0
        }
    };

    let mut stats = SolveStats::default();
    let mut best_x = vec![0u8; m];
    let mut best = objective(a, b, &best_x);
    stats.evaluations = 1;

    let mut heap = BinaryHeap::new();
    heap.push(Node { bound: bound_at(0, b), depth: 0, value: b, prefix: Vec::new() });
    while let Some(node) = heap.pop() {
        stats.nodes += 1;
        if node.bound > best + slack {
            break;
        }
        if node.depth == m {
            // value was accumulated in index order, same as `objective`
            let obj = node.value.abs();
            stats.evaluations += 1;
            if obj < best || (obj == best && node.prefix < best_x) {
                best = obj;
                best_x = node.prefix;
            }
            continue;
        }
        for bit in [0u8, 1] {
            let value = if bit == 1 { node.value + a[node.depth] } else { node.value };
            let depth = node.depth + 1;
            let bound = bound_at(depth, value);
            if bound > best + slack {
                continue;
            }
            let mut prefix = node.prefix.clone();
            prefix.push(bit);
            heap.push(Node { bound, depth, value, prefix });
        }
    }
    Ok(Selection::new(a, b, best_x, stats))
}
