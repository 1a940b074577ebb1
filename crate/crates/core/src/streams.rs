//! Finite sets of naturals, lazy infinite subsets of ℕ, and the canonical
//! binary enumeration of finite sets.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;

/// A finite set of naturals, stored as a strictly increasing vector.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct FinSet(Vec<u64>);

impl FinSet {
    pub fn empty() -> Self {
        FinSet(Vec::new())
    }

    /// Builds a set from arbitrary elements, sorting and removing duplicates.
    pub fn from_unsorted<I: IntoIterator<Item = u64>>(items: I) -> Self {
        let mut v: Vec<u64> = items.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        FinSet(v)
    }

    /// Wraps a vector that is already strictly increasing. Returns `None`
    /// otherwise.
    pub fn from_sorted(v: Vec<u64>) -> Option<Self> {
        if v.windows(2).all(|w| w[0] < w[1]) {
            Some(FinSet(v))
        } else {
            None
        }
    }

    pub fn singleton(n: u64) -> Self {
        FinSet(vec![n])
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = u64> + ExactSizeIterator + '_ {
        self.0.iter().copied()
    }

    pub fn min(&self) -> Option<u64> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<u64> {
        self.0.last().copied()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.0.binary_search(&n).is_ok()
    }

    pub fn is_subset(&self, other: &FinSet) -> bool {
        let mut it = other.0.iter();
        'outer: for a in &self.0 {
            for b in it.by_ref() {
                if b == a {
                    continue 'outer;
                }
                if b > a {
                    return false;
                }
            }
            return false;
        }
        true
    }

    /// `self ⊑ other`: `self` is an initial segment of `other`, i.e.
    /// `self = other ∩ {0..n}` for some `n`.
    pub fn is_initial_segment_of(&self, other: &FinSet) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn union(&self, other: &FinSet) -> FinSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (self.0[i], other.0[j]);
            if a < b {
                out.push(a);
                i += 1;
            } else if b < a {
                out.push(b);
                j += 1;
            } else {
                out.push(a);
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        FinSet(out)
    }

    pub fn intersection(&self, other: &FinSet) -> FinSet {
        FinSet(self.0.iter().copied().filter(|&a| other.contains(a)).collect())
    }

    pub fn difference(&self, other: &FinSet) -> FinSet {
        FinSet(self.0.iter().copied().filter(|&a| !other.contains(a)).collect())
    }

    pub fn with(&self, n: u64) -> FinSet {
        match self.0.binary_search(&n) {
            Ok(_) => self.clone(),
            Err(pos) => {
                let mut v = self.0.clone();
                v.insert(pos, n);
                FinSet(v)
            }
        }
    }

    /// `{n} ∪ self`, assuming every element of `self` exceeds `n`.
    pub fn prepend(&self, n: u64) -> FinSet {
        debug_assert!(self.min().map_or(true, |m| m > n));
        let mut v = Vec::with_capacity(self.len() + 1);
        v.push(n);
        v.extend_from_slice(&self.0);
        FinSet(v)
    }

    /// Appends `n`, which must exceed the current maximum.
    pub fn push(&mut self, n: u64) {
        assert!(self.max().map_or(true, |m| m < n), "push must keep the set increasing");
        self.0.push(n);
    }

    pub fn pop(&mut self) -> Option<u64> {
        self.0.pop()
    }

    /// Elements strictly below `n`.
    pub fn below(&self, n: u64) -> FinSet {
        let cut = self.0.partition_point(|&a| a < n);
        FinSet(self.0[..cut].to_vec())
    }

    /// Elements strictly above `n` (the set `s/(n+1)`).
    pub fn above(&self, n: u64) -> FinSet {
        let cut = self.0.partition_point(|&a| a <= n);
        FinSet(self.0[cut..].to_vec())
    }

    /// The initial segment of the first `k` elements.
    pub fn first(&self, k: usize) -> FinSet {
        FinSet(self.0[..k.min(self.0.len())].to_vec())
    }

    /// All subsets, as bitmask-selected sub-vectors. Only sensible for small sets.
    pub fn subsets(&self) -> impl Iterator<Item = FinSet> + '_ {
        assert!(self.len() < 64);
        (0u64..(1u64 << self.len())).map(move |mask| self.select(mask))
    }

    /// The subset picked by the bits of `mask` (bit `i` selects the `i`-th element).
    pub fn select(&self, mask: u64) -> FinSet {
        FinSet(
            self.0
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &a)| a)
                .collect(),
        )
    }
}

impl fmt::Debug for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<u64> for FinSet {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        FinSet::from_unsorted(iter)
    }
}

impl<const N: usize> From<[u64; N]> for FinSet {
    fn from(a: [u64; N]) -> Self {
        FinSet::from_unsorted(a)
    }
}

/// Canonical code of a finite set: `Σ_{i∈s} 2^i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetIndex(pub BigUint);

impl SetIndex {
    pub fn of(s: &FinSet) -> SetIndex {
        let mut k = BigUint::zero();
        for a in s.iter() {
            k.set_bit(a, true);
        }
        SetIndex(k)
    }

    pub fn to_set(&self) -> FinSet {
        FinSet((0..self.0.bits()).filter(|&i| self.0.bit(i)).collect())
    }

    pub fn from_u64(k: u64) -> SetIndex {
        SetIndex(BigUint::from(k))
    }

    pub fn to_u64(&self) -> Option<u64> {
        u64::try_from(&self.0).ok()
    }
}

/// `indexSet(k)`: the positions of the 1-bits of `k`.
pub fn index_set(k: &SetIndex) -> FinSet {
    k.to_set()
}

/// `setIndex(s)`.
pub fn set_index(s: &FinSet) -> SetIndex {
    SetIndex::of(s)
}

/// Compares two finite sets by their canonical index (colex order).
pub fn index_cmp(a: &FinSet, b: &FinSet) -> std::cmp::Ordering {
    a.0.iter().rev().cmp(b.0.iter().rev())
}

trait Cursor: Iterator<Item = u64> + Send + Sync {
    fn clone_box(&self) -> Box<dyn Cursor>;
}

impl<I> Cursor for I
where
    I: Iterator<Item = u64> + Clone + Send + Sync + 'static,
{
    fn clone_box(&self) -> Box<dyn Cursor> {
        Box::new(self.clone())
    }
}

/// A lazily produced, strictly increasing sequence of naturals standing in
/// for an infinite subset of ℕ.
///
/// Cloning yields an independent cursor. A stream stops only when its values
/// would leave the `u64` range.
pub struct NatStream {
    inner: Box<dyn Cursor>,
    last: Option<u64>,
}

impl Clone for NatStream {
    fn clone(&self) -> Self {
        NatStream { inner: self.inner.clone_box(), last: self.last }
    }
}

impl fmt::Debug for NatStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head: Vec<u64> = self.clone().take(6).collect();
        write!(f, "NatStream({head:?}…)")
    }
}

impl Iterator for NatStream {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let v = self.inner.next()?;
        if let Some(prev) = self.last {
            assert!(v > prev, "stream produced {v} after {prev}; streams must be strictly increasing");
        }
        self.last = Some(v);
        Some(v)
    }
}

impl NatStream {
    /// Wraps any cloneable producer. The producer must be strictly increasing;
    /// a violation panics when the offending value is pulled.
    pub fn from_iter<I>(it: I) -> NatStream
    where
        I: Iterator<Item = u64> + Clone + Send + Sync + 'static,
    {
        NatStream { inner: Box::new(it), last: None }
    }

    /// ℕ itself.
    pub fn naturals() -> NatStream {
        NatStream::arith(0, 1)
    }

    /// `a, a+d, a+2d, …` with `d ≥ 1`.
    pub fn arith(a: u64, d: u64) -> NatStream {
        assert!(d >= 1, "arithmetic stream needs a positive step");
        let mut cur = Some(a);
        NatStream::from_iter(std::iter::from_fn(move || {
            let v = cur?;
            cur = v.checked_add(d);
            Some(v)
        }))
    }

    pub fn evens() -> NatStream {
        NatStream::arith(0, 2)
    }

    pub fn odds() -> NatStream {
        NatStream::arith(1, 2)
    }

    /// `b⁰, b¹, b², …` with `b ≥ 2`.
    pub fn powers(b: u64) -> NatStream {
        assert!(b >= 2, "power stream needs base at least 2");
        let mut cur = Some(1u64);
        NatStream::from_iter(std::iter::from_fn(move || {
            let v = cur?;
            cur = v.checked_mul(b);
            Some(v)
        }))
    }

    /// The listed prefix, then the elements of `then` above the prefix's maximum.
    pub fn explicit_prefix(prefix: FinSet, then: NatStream) -> NatStream {
        let floor = prefix.max();
        let rest = then.skip_while(move |&v| floor.map_or(false, |m| v <= m));
        NatStream::from_iter(prefix.into_vec().into_iter().chain(rest))
    }

    /// Elements of `self` satisfying `keep`.
    pub fn filter<P>(self, keep: P) -> NatStream
    where
        P: Fn(u64) -> bool + Clone + Send + Sync + 'static,
    {
        NatStream::from_iter(Iterator::filter(self, move |&v| keep(v)))
    }

    /// `take(x, N)`: the elements below `horizon`, leaving `self` untouched.
    pub fn take_below(&self, horizon: u64) -> FinSet {
        FinSet(self.clone().take_while(|&v| v < horizon).collect())
    }

    /// `tail(x, n)`: the stream of elements strictly greater than `n`.
    pub fn tail(&self, n: u64) -> NatStream {
        NatStream::from_iter(self.clone().skip_while(move |&v| v <= n))
    }

    /// The `k`-th element (0-based) in increasing order, `e(x)(k)`.
    pub fn nth_element(&self, k: u64) -> Option<u64> {
        let k = usize::try_from(k).ok()?;
        self.clone().nth(k)
    }

    /// The first `count` elements.
    pub fn head(&self, count: usize) -> FinSet {
        FinSet(self.clone().take(count).collect())
    }

    /// Least element greater than `n`.
    pub fn next_above(&self, n: u64) -> Option<u64> {
        self.clone().find(|&v| v > n)
    }
}

/// `take(x, N)`.
pub fn take(x: &NatStream, horizon: u64) -> FinSet {
    x.take_below(horizon)
}

/// `tail(x, n)`.
pub fn tail(x: &NatStream, n: u64) -> NatStream {
    x.tail(n)
}

/// A binary sequence `y ∈ 2^ℕ`, given by its bit function.
#[derive(Clone)]
pub struct BinarySeq(Arc<dyn Fn(u64) -> bool + Send + Sync>);

impl BinarySeq {
    pub fn from_fn<F: Fn(u64) -> bool + Send + Sync + 'static>(f: F) -> Self {
        BinarySeq(Arc::new(f))
    }

    pub fn zeros() -> Self {
        BinarySeq::from_fn(|_| false)
    }

    pub fn ones() -> Self {
        BinarySeq::from_fn(|_| true)
    }

    /// The sequence whose 1-positions are the elements of `s`.
    pub fn from_stream(s: &NatStream) -> Self {
        let s = s.clone();
        BinarySeq::from_fn(move |i| s.clone().take_while(|&v| v <= i).any(|v| v == i))
    }

    pub fn bit(&self, i: u64) -> bool {
        (self.0)(i)
    }

    pub fn prefix(&self, n: u64) -> Vec<bool> {
        (0..n).map(|i| self.bit(i)).collect()
    }
}

impl fmt::Debug for BinarySeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head: String = self.prefix(12).iter().map(|&b| if b { '1' } else { '0' }).collect();
        write!(f, "BinarySeq({head}…)")
    }
}

impl From<&NatStream> for BinarySeq {
    fn from(s: &NatStream) -> Self {
        BinarySeq::from_stream(s)
    }
}
