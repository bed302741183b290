//! Timing that degrades to no-ops on `wasm32`, where `Instant` is unavailable.

use std::time::Duration;

#[derive(Clone, Copy, Debug)]
pub struct Stopwatch {
    #[cfg(not(target_arch = "wasm32"))]
    start: std::time::Instant,
}

impl Stopwatch {
    pub fn start() -> Self {
        Stopwatch {
            #[cfg(not(target_arch = "wasm32"))]
            start: std::time::Instant::now(),
        }
    }

    pub fn elapsed(&self) -> Duration {
        #[cfg(not(target_arch = "wasm32"))]
        {
            self.start.elapsed()
        }
        #[cfg(target_arch = "wasm32")]
        {
            Duration::ZERO
        }
    }
}

/// A point in time after which long computations give up.
#[derive(Clone, Copy, Debug, Default)]
pub struct Deadline {
    #[cfg(not(target_arch = "wasm32"))]
    at: Option<std::time::Instant>,
}

impl Deadline {
    pub fn none() -> Self {
        Self::default()
    }

    #[allow(unused_variables)]
    pub fn after(budget: Duration) -> Self {
        Deadline {
            #[cfg(not(target_arch = "wasm32"))]
            at: std::time::Instant::now().checked_add(budget),
        }
    }

    pub fn expired(&self) -> bool {
        #[cfg(not(target_arch = "wasm32"))]
        {
            self.at.is_some_and(|at| std::time::Instant::now() >= at)
        }
        #[cfg(target_arch = "wasm32")]
        {
            false
        }
    }
}
