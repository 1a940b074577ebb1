//! Decreasing sequences of infinite sets and partitions into finite pieces.

use std::fmt;
use std::sync::Arc;

use crate::streams::{take, FinSet, NatStream};

/// `(x_n)`: a sequence of streams with `x_{n+1} ⊆ x_n`.
#[derive(Clone)]
pub struct DecreasingSeq {
    at: Arc<dyn Fn(u64) -> NatStream + Send + Sync>,
}

impl fmt::Debug for DecreasingSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DecreasingSeq").field("x0", &self.at(0)).finish()
    }
}

impl DecreasingSeq {
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(u64) -> NatStream + Send + Sync + 'static,
    {
        DecreasingSeq { at: Arc::new(f) }
    }

    pub fn at(&self, n: u64) -> NatStream {
        (self.at)(n)
    }

    /// `x_n = x` for every `n`.
    pub fn constant(x: NatStream) -> Self {
        DecreasingSeq::from_fn(move |_| x.clone())
    }

    /// `x_n = tail(x, n)`.
    pub fn tails(x: NatStream) -> Self {
        DecreasingSeq::from_fn(move |n| x.tail(n))
    }

    /// `x_n = {m ∈ x : m ≥ bⁿ}`; empty once `bⁿ` leaves the `u64` range.
    pub fn power_thresholds(x: NatStream, b: u64) -> Self {
        assert!(b >= 2);
        DecreasingSeq::from_fn(move |n| match u32::try_from(n).ok().and_then(|n| b.checked_pow(n)) {
            Some(t) => x.clone().filter(move |m| m >= t),
            None => NatStream::from_iter(std::iter::empty()),
        })
    }

    /// `x_n = {m ∈ x : 2ⁿ divides m}`.
    pub fn dyadic(x: NatStream) -> Self {
        DecreasingSeq::from_fn(move |n| {
            if n >= 64 {
                // only 0 is divisible by 2^64 in range; stop instead of scanning
                NatStream::from_iter(x.clone().take_while(|&m| m == 0))
            } else {
                x.clone().filter(move |m| m % (1u64 << n) == 0)
            }
        })
    }

    /// Checks `take(x_{n+1}, N) ⊆ take(x_n, N)` for `n < levels`.
    pub fn is_decreasing_at(&self, levels: u64, horizon: u64) -> bool {
        let mut prev = take(&self.at(0), horizon);
        for n in 1..=levels {
            let cur = take(&self.at(n), horizon);
            if !cur.is_subset(&prev) {
                return false;
            }
            prev = cur;
        }
        true
    }
}

/// A partition of `ground` into finite pieces, given by the piece label of
/// each element. Piece `i` is `{m ∈ ground : label(m) = i}`; labels must
/// have finite fibres on `ground`.
#[derive(Clone)]
pub struct PartitionSeq {
    ground: NatStream,
    label: Arc<dyn Fn(u64) -> u64 + Send + Sync>,
}

impl fmt::Debug for PartitionSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<(u64, u64)> = self.ground.clone().take(6).map(|m| (m, self.label_of(m))).collect();
        f.debug_struct("PartitionSeq").field("labels", &labels).finish()
    }
}

impl PartitionSeq {
    pub fn from_labels<F>(ground: NatStream, label: F) -> Self
    where
        F: Fn(u64) -> u64 + Send + Sync + 'static,
    {
        PartitionSeq { ground, label: Arc::new(label) }
    }

    /// Pieces `{i·size, …, (i+1)·size − 1} ∩ ground`.
    pub fn blocks(ground: NatStream, size: u64) -> Self {
        assert!(size >= 1);
        PartitionSeq::from_labels(ground, move |m| m / size)
    }

    /// Every element is its own piece.
    pub fn singletons(ground: NatStream) -> Self {
        PartitionSeq::from_labels(ground, |m| m)
    }

    /// Pieces cut at the given increasing breakpoints: piece `i` holds the
    /// elements with exactly `i` breakpoints at or below them.
    pub fn intervals(ground: NatStream, breaks: FinSet) -> Self {
        PartitionSeq::from_labels(ground, move |m| breaks.as_slice().partition_point(|&b| b <= m) as u64)
    }

    pub fn ground(&self) -> &NatStream {
        &self.ground
    }

    pub fn label_of(&self, m: u64) -> u64 {
        (self.label)(m)
    }

    /// Piece `i`, truncated at `horizon`. Pieces beyond the horizon are empty.
    pub fn piece(&self, i: u64, horizon: u64) -> FinSet {
        take(&self.ground, horizon).iter().filter(|&m| self.label_of(m) == i).collect()
    }

    /// Whether `s` meets every piece in at most one point.
    pub fn is_partial_selector(&self, s: &FinSet) -> bool {
        let mut labels: Vec<u64> = s.iter().map(|m| self.label_of(m)).collect();
        labels.sort_unstable();
        labels.windows(2).all(|w| w[0] != w[1])
    }
}
