//! Process-wide cap on the number of terms in a single tensor element.
//!
//! Exceeding the cap aborts the computation by panicking with a
//! [`TermLimitExceeded`] payload; front ends catch it and report an input
//! error instead of exhausting memory.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

pub const DEFAULT_MAX_TERMS: usize = 5_000_000;

static MAX_TERMS: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_TERMS);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TermLimitExceeded {
    pub limit: usize,
    pub found: usize,
}

impl fmt::Display for TermLimitExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "tensor element has {} terms, above the limit of {}",
            self.found, self.limit
        )
    }
}

pub fn set_max_terms(n: usize) {
    MAX_TERMS.store(n, Ordering::Relaxed);
}

pub fn max_terms() -> usize {
    MAX_TERMS.load(Ordering::Relaxed)
}

pub(crate) fn check_terms(n: usize) {
    let limit = max_terms();
    if n > limit {
        std::panic::panic_any(TermLimitExceeded { limit, found: n });
    }
}
