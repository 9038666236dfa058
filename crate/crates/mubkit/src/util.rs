//! Small shared helpers.

/// Worker count for pairwise verification scans: `MUBKIT_THREADS` when set,
/// otherwise the machine's available parallelism.
pub(crate) fn worker_count() -> usize {
    std::env::var("MUBKIT_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Applies `f` to every index in `0..len` across scoped worker threads and
/// returns the results in index order, so aggregation is deterministic
/// regardless of scheduling.
pub(crate) fn parallel_map<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = worker_count().min(len.max(1));
    if workers <= 1 || len < 2 {
        return (0..len).map(f).collect();
    }
    let mut slots: Vec<Option<T>> = (0..len).map(|_| None).collect();
    let next = std::sync::atomic::AtomicUsize::new(0);
    let slots_ref = &mut slots;
    std::thread::scope(|scope| {
        // Split the output buffer so each worker writes disjoint slots.
        let ptr = SendPtr(slots_ref.as_mut_ptr());
        for _ in 0..workers {
            let f = &f;
            let next = &next;
            scope.spawn(move || {
                // Bind the wrapper itself so the closure captures the Send
                // newtype, not the raw pointer field.
                let ptr = ptr;
                loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    if i >= len {
                        break;
                    }
                    let value = f(i);
                    // Safety: every index is claimed exactly once via fetch_add.
                    unsafe { *ptr.0.add(i) = Some(value) };
                }
            });
        }
    });
    slots.into_iter().map(|s| s.expect("all slots filled")).collect()
}

struct SendPtr<T>(*mut T);
unsafe impl<T> Send for SendPtr<T> {}
unsafe impl<T> Sync for SendPtr<T> {}
impl<T> Clone for SendPtr<T> {
    fn clone(&self) -> Self {
        *self
    }
}
impl<T> Copy for SendPtr<T> {}
