use alloc::vec::Vec;

/// Maps an index range to results. Implementations may evaluate the closure
/// concurrently but must return results in index order.
pub trait Executor: Sync {
    /// Number of tasks the executor would like to run at once.
    fn width(&self) -> usize;

    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs every task on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Serial;

impl Executor for Serial {
    fn width(&self) -> usize {
        1
    }

    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).map(f).collect()
    }
}
