//! Execution schedules for the data-parallel parts of table construction.
//!
//! Every parallel map in this crate is an indexed map whose results are
//! collected in index order, so the schedule never affects results.

/// How to spread independent work items over threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Schedule {
    /// Run everything on the calling thread.
    Sequential,
    /// Use a dedicated pool of `workers` threads (`0` = rayon's default).
    Parallel { workers: usize },
    /// Parallel with the global pool when the `parallel` feature is on,
    /// otherwise sequential.
    #[default]
    Auto,
}

impl Schedule {
    pub fn workers(n: usize) -> Schedule {
        if n <= 1 {
            Schedule::Sequential
        } else {
            Schedule::Parallel { workers: n }
        }
    }

    /// Maps `f` over `0..len` and returns the results in index order.
    pub fn map_indexed<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            Schedule::Sequential => (0..len).map(f).collect(),
            #[cfg(feature = "parallel")]
            Schedule::Auto => {
                use rayon::prelude::*;
                (0..len).into_par_iter().map(f).collect()
            }
            #[cfg(feature = "parallel")]
            Schedule::Parallel { workers } => {
                use rayon::prelude::*;
                match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
                    Ok(pool) => pool.install(|| (0..len).into_par_iter().map(f).collect()),
                    Err(_) => (0..len).into_par_iter().map(f).collect(),
                }
            }
            #[cfg(not(feature = "parallel"))]
            _ => (0..len).map(f).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedules_agree() {
        let f = |i: usize| i * i % 97;
        let seq = Schedule::Sequential.map_indexed(1000, f);
        assert_eq!(Schedule::workers(3).map_indexed(1000, f), seq);
        assert_eq!(Schedule::Auto.map_indexed(1000, f), seq);
    }
}
