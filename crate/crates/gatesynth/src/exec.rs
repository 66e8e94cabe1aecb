use gatesynth_core::Executor;
use rayon::prelude::*;
use rayon::ThreadPool;

/// Runs executor tasks on a dedicated rayon pool of fixed width.
pub struct RayonExecutor {
    pool: ThreadPool,
}

impl RayonExecutor {
    /// `threads = 0` uses the number of available cores.
    pub fn new(threads: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()?;
        Ok(RayonExecutor { pool })
    }
}

impl Executor for RayonExecutor {
    fn width(&self) -> usize {
        self.pool.current_num_threads()
    }

    fn map<T: Send, F: Fn(usize) -> T + Sync + Send>(&self, n: usize, f: F) -> Vec<T> {
        self.pool
            .install(|| (0..n).into_par_iter().map(&f).collect())
    }
}
