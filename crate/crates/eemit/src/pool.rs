use eemit_core::Executor;
use rayon::prelude::*;

/// Fixed-size rayon pool. Results come back in job order whatever the worker count.
pub struct Pool {
    inner: rayon::ThreadPool,
}

impl Pool {
    pub fn new(workers: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let inner = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .thread_name(|i| format!("eemit-worker-{i}"))
            .build()?;
        Ok(Pool { inner })
    }

    pub fn workers(&self) -> usize {
        self.inner.current_num_threads()
    }
}

impl Executor for Pool {
    fn run<T, F>(&self, jobs: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        // one job per split: cells differ wildly in cost (divergent vs. full runs)
        self.inner
            .install(|| (0..jobs).into_par_iter().with_max_len(1).map(&f).collect())
    }
}

/// Number of workers to use when none is requested.
pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}
