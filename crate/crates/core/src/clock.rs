// Deadline tracking for long searches. Without `std` there is no clock and a
// deadline never fires.

#[cfg(feature = "std")]
pub(crate) struct Stopwatch {
    start: std::time::Instant,
    limit_ms: u64,
}

#[cfg(feature = "std")]
impl Stopwatch {
    pub(crate) fn start(limit_ms: u64) -> Self {
        Stopwatch {
            start: std::time::Instant::now(),
            limit_ms,
        }
    }

    pub(crate) fn expired(&self) -> bool {
        self.start.elapsed().as_millis() >= u128::from(self.limit_ms)
    }
}

#[cfg(not(feature = "std"))]
pub(crate) struct Stopwatch;

#[cfg(not(feature = "std"))]
impl Stopwatch {
    pub(crate) fn start(_limit_ms: u64) -> Self {
        Stopwatch
    }

    pub(crate) fn expired(&self) -> bool {
        false
    }
}
