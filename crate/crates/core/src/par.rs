//! Execution mode switch.
//!
//! With the `parallel` feature, hot loops fan out over rayon's pool unless the
//! calling thread has selected [`Exec::Sequential`]. Without the feature every
//! call runs sequentially. Results are always collected in input order, so
//! output does not depend on the mode.

use std::cell::Cell;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Exec {
    pub const fn default_mode() -> Exec {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

thread_local! {
    static MODE: Cell<Exec> = const { Cell::new(Exec::default_mode()) };
}

/// Mode in effect on this thread.
pub fn mode() -> Exec {
    MODE.with(|m| m.get())
}

/// Runs `f` with `exec` selected on the current thread, restoring the previous
/// mode afterwards (also on unwind).
pub fn with_mode<R>(exec: Exec, f: impl FnOnce() -> R) -> R {
    struct Restore(Exec);
    impl Drop for Restore {
        fn drop(&mut self) {
            MODE.with(|m| m.set(self.0));
        }
    }
    let _guard = Restore(MODE.with(|m| m.replace(exec)));
    f()
}

fn parallel_enabled(len: usize) -> bool {
    cfg!(feature = "parallel") && len > 1 && mode() == Exec::Parallel
}

/// Order-preserving map over a slice.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel_enabled(items.len()) {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = parallel_enabled;
    items.iter().map(f).collect()
}

/// Order-preserving map over `0..n`.
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel_enabled(n) {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

/// Evaluates two closures, concurrently when allowed.
pub fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    #[cfg(feature = "parallel")]
    if parallel_enabled(2) {
        return rayon::join(a, b);
    }
    (a(), b())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let seq = with_mode(Exec::Sequential, || map_range(100, |i| i * i));
        let par = with_mode(Exec::Parallel, || map_range(100, |i| i * i));
        assert_eq!(seq, par);
    }

    #[test]
    fn mode_is_restored() {
        let before = mode();
        with_mode(Exec::Sequential, || assert_eq!(mode(), Exec::Sequential));
        assert_eq!(mode(), before);
    }
}
