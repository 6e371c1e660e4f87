use std::time::{Duration, Instant};

/// Work and wall-clock limits for the exhaustive operations.
///
/// `work` is measured in the unit each operation documents (colorings,
/// search nodes, enumerated matrices, ...).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub work: u64,
    pub time: Option<Duration>,
}

impl Budget {
    pub const fn new(work: u64, time: Option<Duration>) -> Self {
        Budget { work, time }
    }

    pub const fn work(work: u64) -> Self {
        Budget { work, time: None }
    }

    pub const fn unlimited() -> Self {
        Budget {
            work: u64::MAX,
            time: None,
        }
    }

    pub fn with_time(mut self, time: Duration) -> Self {
        self.time = Some(time);
        self
    }

    pub(crate) fn start(&self) -> Meter {
        Meter {
            limit: self.work,
            deadline: self.time.map(|t| Instant::now() + t),
            used: 0,
            started: Instant::now(),
        }
    }
}

/// Running counter against a [`Budget`].
#[derive(Debug)]
pub(crate) struct Meter {
    limit: u64,
    deadline: Option<Instant>,
    used: u64,
    started: Instant,
}

impl Meter {
    /// Charges one unit; returns false once the budget is gone.
    #[inline]
    pub fn tick(&mut self) -> bool {
        self.used += 1;
        if self.used > self.limit {
            return false;
        }
        if self.used & 0x3ff == 0 {
            if let Some(d) = self.deadline {
                return Instant::now() < d;
            }
        }
        true
    }

    pub fn used(&self) -> u64 {
        self.used.min(self.limit)
    }

    pub fn elapsed(&self) -> Duration {
        self.started.elapsed()
    }
}

/// `base^exp` or `None` on overflow.
pub(crate) fn checked_pow(base: usize, exp: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base as u64)?;
    }
    Some(acc)
}
