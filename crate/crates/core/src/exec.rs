//! Sequential / parallel execution switch for the data-parallel loops.

/// How a data-parallel loop is executed.
///
/// `Parallel` uses rayon when the crate is built with the `parallel`
/// feature and silently falls back to the sequential path otherwise.
/// Results never depend on the choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}
