//! Execution of independent, indexed work items.
//!
//! With the `parallel` feature (default) items fan out over a rayon pool;
//! without it, or with `jobs = 1`, they run sequentially. Results are
//! collected by index, so the output is identical either way.

/// Worker-pool configuration for embarrassingly parallel loops.
#[derive(Debug, Clone, Copy)]
pub struct Executor {
    jobs: usize,
}

impl Default for Executor {
    fn default() -> Self {
        Executor { jobs: 0 }
    }
}

impl Executor {
    /// `jobs = 0` means "use all available threads"; `jobs = 1` is sequential.
    pub fn new(jobs: usize) -> Self {
        Executor { jobs }
    }

    pub fn sequential() -> Self {
        Executor { jobs: 1 }
    }

    pub fn jobs(&self) -> usize {
        self.jobs
    }

    /// Run `f` for every index in `0..n`, returning results in index order.
    pub fn run<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        #[cfg(feature = "parallel")]
        {
            if self.jobs != 1 {
                use rayon::prelude::*;
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(self.jobs)
                    .build()
                    .expect("failed to build worker pool");
                return pool.install(|| (0..n).into_par_iter().map(&f).collect());
            }
        }
        (0..n).map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree() {
        let f = |i: usize| (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15) >> 7;
        let seq: Vec<u64> = Executor::sequential().run(100, f);
        let par: Vec<u64> = Executor::new(8).run(100, f);
        assert_eq!(seq, par);
    }
}
