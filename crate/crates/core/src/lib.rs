//! Degree sequence realizations that avoid a forbidden star plus a partial
//! matching.
//!
//! The crate covers the whole pipeline on bipartite, general and directed
//! instances:
//!
//! * [`instance`]: the problem model, chord semantics and the directed to
//!   bipartite representation.
//! * [`construct`]: the Havel-Hakimi style greedy construction, which also
//!   decides graphicality.
//! * [`swaps`]: chord circuits, F-compatible circular swaps and the swap
//!   distance.
//! * [`chain`]: the lazy C4/C6 Markov chain and its exact transition matrix.
//! * [`paths`]: canonical paths between realizations together with the
//!   auxiliary-matrix audits.
//! * [`count`]: exact and approximate counting through self-reduction.
//! * [`oracle`]: brute-force enumeration used as ground truth.
//!
//! Everything here is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod bits;
pub mod chain;
pub mod construct;
pub mod count;
mod error;
pub mod instance;
pub mod oracle;
pub mod paths;
pub mod realization;
pub mod swaps;

pub use error::{Error, Result};
pub use instance::{ChordStatus, Instance, Kind, PairClass, RawInstance, VertexId};
pub use realization::{AuditMatrix, Cell, Realization};

/// Exact probability type used by the transition kernel.
pub type Prob = num_rational::Ratio<u128>;

/// `n choose k` for the small arguments used by the proposal kernel.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::binomial;

    #[test]
    fn binomial_small() {
        assert_eq!(binomial(3, 3), 1);
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(4, 3), 4);
        assert_eq!(binomial(2, 3), 0);
        assert_eq!(binomial(10, 0), 1);
    }
}
