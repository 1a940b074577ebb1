//! Greedy extractors witnessing that an ideal `Fin(φ)` is uniformly p⁺,
//! q⁺ and selective, truncated at a finite horizon.
//!
//! Every search runs over finite sets in order of their canonical index
//! (`s_k` = bit positions of `k`), so "least index" means colex-least: the
//! smallest maximum first, then the smallest next-highest element, and so on.

use std::collections::{HashMap, HashSet};

use super::sequences::{DecreasingSeq, PartitionSeq};
use super::submeasure::{ExtRational, Submeasure};
use crate::error::{Error, Result};
use crate::streams::{take, FinSet, NatStream};

/// `G_n(x)`: the least-index `s ⊆ take(x, horizon)` with `φ(s) ≥ n`.
pub fn g_select(phi: &dyn Submeasure, x: &NatStream, n: u64, horizon: u64) -> Result<FinSet> {
    if n == 0 {
        return Ok(FinSet::empty());
    }
    let avail = take(x, horizon);
    let target = ExtRational::from_u64(n);
    let exhausted = || Error::HorizonExhausted { level: n, horizon };
    let len = phi.prefix_reaching(&avail, &target).ok_or_else(exhausted)?;
    let elems = avail.as_slice();
    // `len ≥ 1` since φ(∅) = 0 < n
    let top = elems[len - 1];
    let mut chosen = FinSet::singleton(top);
    for idx in (0..len - 1).rev() {
        let rest: FinSet = elems[..idx].iter().copied().collect();
        if phi.eval(&chosen.union(&rest)) < target {
            chosen = chosen.with(elems[idx]);
        }
    }
    Ok(chosen)
}

/// `G((x_n)) = ⋃_{n<levels} G_n(x_n)`.
pub fn uniform_p(phi: &dyn Submeasure, xs: &DecreasingSeq, levels: u64, horizon: u64) -> Result<FinSet> {
    if levels == 0 {
        return Err(Error::InvalidInput("uniform_p needs at least one level".into()));
    }
    let mut out = FinSet::empty();
    for n in 0..levels {
        out = out.union(&g_select(phi, &xs.at(n), n, horizon)?);
    }
    Ok(out)
}

struct SelectorSearch<'a> {
    phi: &'a dyn Submeasure,
    target: ExtRational,
    elems: Vec<u64>,
    labels: Vec<u64>,
    forced: HashSet<u64>,
    singles: HashMap<u64, ExtRational>,
}

impl SelectorSearch<'_> {
    fn single(&mut self, e: u64) -> ExtRational {
        let phi = self.phi;
        self.singles.entry(e).or_insert_with(|| phi.eval(&FinSet::singleton(e))).clone()
    }

    /// Upper bound on `φ` over partial selectors extending `fixed` with
    /// elements among the first `idx` candidates. Combines monotonicity
    /// (take everything allowed) with subadditivity (best singleton per
    /// free piece); exact for the registered submeasures.
    fn bound(&mut self, fixed: &FinSet, used: &HashSet<u64>, idx: usize) -> ExtRational {
        let mut with_all = fixed.clone();
        let mut with_forced = fixed.clone();
        let mut best: HashMap<u64, ExtRational> = HashMap::new();
        for i in 0..idx {
            let e = self.elems[i];
            if self.forced.contains(&e) {
                with_all = with_all.with(e);
                with_forced = with_forced.with(e);
            } else if !used.contains(&self.labels[i]) {
                with_all = with_all.with(e);
                let v = self.single(e);
                let slot = best.entry(self.labels[i]).or_insert_with(ExtRational::zero);
                if v > *slot {
                    *slot = v;
                }
            }
        }
        let monotone = self.phi.eval(&with_all);
        let additive = best.into_values().fold(self.phi.eval(&with_forced), |acc, v| acc + v);
        monotone.min(additive)
    }

    /// Depth-first over the first `idx` candidates, highest first, trying
    /// exclusion before inclusion so the first hit is colex-least.
    fn complete(&mut self, fixed: FinSet, used: &mut HashSet<u64>, idx: usize) -> Option<FinSet> {
        if self.bound(&fixed, used, idx) < self.target {
            return None;
        }
        if idx == 0 {
            return Some(fixed);
        }
        let (e, label) = (self.elems[idx - 1], self.labels[idx - 1]);
        if self.forced.contains(&e) {
            return self.complete(fixed.with(e), used, idx - 1);
        }
        if used.contains(&label) {
            return self.complete(fixed, used, idx - 1);
        }
        if let Some(s) = self.complete(fixed.clone(), used, idx - 1) {
            return Some(s);
        }
        used.insert(label);
        let found = self.complete(fixed.with(e), used, idx - 1);
        used.remove(&label);
        found
    }
}

/// `F_n(x, (t_i))`: the least-index partial selector `s ⊆ take(x, horizon)`
/// with `φ(s) ≥ n` and `prev ⊆ s`.
pub fn f_select(
    phi: &dyn Submeasure,
    x: &NatStream,
    parts: &PartitionSeq,
    n: u64,
    prev: &FinSet,
    horizon: u64,
) -> Result<FinSet> {
    if n == 0 {
        return Ok(FinSet::empty());
    }
    let avail = take(x, horizon);
    if !prev.is_subset(&avail) {
        return Err(Error::InvalidInput(format!("previous selector {prev} is not inside x below {horizon}")));
    }
    if !parts.is_partial_selector(prev) {
        return Err(Error::InvalidInput(format!("previous set {prev} is not a partial selector")));
    }
    let elems = avail.clone().into_vec();
    let labels: Vec<u64> = elems.iter().map(|&m| parts.label_of(m)).collect();
    let prev_labels: HashSet<u64> = prev.iter().map(|m| parts.label_of(m)).collect();
    let mut search = SelectorSearch {
        phi,
        target: ExtRational::from_u64(n),
        elems,
        labels,
        forced: prev.iter().collect(),
        singles: HashMap::new(),
    };
    let floor = prev.max();
    for pos in 0..search.elems.len() {
        let (top, label) = (search.elems[pos], search.labels[pos]);
        if floor.is_some_and(|f| top < f) {
            continue;
        }
        let in_prev = search.forced.contains(&top);
        if !in_prev && prev_labels.contains(&label) {
            continue;
        }
        let mut used = prev_labels.clone();
        used.insert(label);
        if let Some(s) = search.complete(FinSet::singleton(top), &mut used, pos) {
            return Ok(s);
        }
    }
    Err(Error::HorizonExhausted { level: n, horizon })
}

/// `F = ⋃_{n ≤ levels} F_n`, i.e. `F_levels` since the chain increases.
pub fn uniform_q(
    phi: &dyn Submeasure,
    x: &NatStream,
    parts: &PartitionSeq,
    levels: u64,
    horizon: u64,
) -> Result<FinSet> {
    if levels == 0 {
        return Err(Error::InvalidInput("uniform_q needs at least one level".into()));
    }
    let mut prev = FinSet::empty();
    for n in 1..=levels {
        prev = f_select(phi, x, parts, n, &prev, horizon)?;
    }
    Ok(prev)
}

/// Composes the two extractors: [`uniform_p`] on `xs`, then [`uniform_q`]
/// on `x_0` against the intervals cut at the elements of the first output.
pub fn uniform_selective(phi: &dyn Submeasure, xs: &DecreasingSeq, levels: u64, horizon: u64) -> Result<FinSet> {
    let spread = uniform_p(phi, xs, levels, horizon)?;
    let ground = xs.at(0);
    let parts = PartitionSeq::intervals(ground.clone(), spread);
    uniform_q(phi, &ground, &parts, levels, horizon)
}

/// The diagonal `a₀ = min x_0`, `a_{k+1} = min{m ∈ x_{a_k} : m > a_k}`.
///
/// Stops early only if a stream runs out of `u64` values.
pub fn diagonalize(xs: &DecreasingSeq, count: usize) -> FinSet {
    let mut out = FinSet::empty();
    let Some(first) = xs.at(0).next() else {
        return out;
    };
    out.push(first);
    let mut last = first;
    while out.len() < count {
        match xs.at(last).next_above(last) {
            Some(next) => {
                out.push(next);
                last = next;
            }
            None => break,
        }
    }
    out
}

/// The same diagonal over finite sets produced on demand: `first` plays
/// `x_0`, and `next(a)` yields the set to continue from after `a`. Ends
/// when a set has no element above the last one taken.
pub fn diagonalize_finite<F>(first: &FinSet, mut next: F) -> Result<FinSet>
where
    F: FnMut(u64) -> Result<FinSet>,
{
    let mut out = FinSet::empty();
    let mut cur = first.min();
    while let Some(a) = cur {
        out.push(a);
        cur = next(a)?.above(a).min();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideals::submeasure::{Counting, MaxId, Summable};
    use crate::streams::{index_set, SetIndex};

    /// Ascending-index oracle for `G_n` over small indices.
    fn g_oracle(phi: &dyn Submeasure, x: &NatStream, n: u64, horizon: u64) -> Option<FinSet> {
        let avail = take(x, horizon);
        (0u64..1 << 16)
            .map(|k| index_set(&SetIndex::from_u64(k)))
            .find(|s| s.is_subset(&avail) && phi.eval(s) >= ExtRational::from_u64(n))
    }

    fn f_oracle(phi: &dyn Submeasure, x: &NatStream, parts: &PartitionSeq, n: u64, prev: &FinSet, h: u64) -> Option<FinSet> {
        let avail = take(x, h);
        (0u64..1 << 16).map(|k| index_set(&SetIndex::from_u64(k))).find(|s| {
            s.is_subset(&avail)
                && parts.is_partial_selector(s)
                && prev.is_subset(s)
                && phi.eval(s) >= ExtRational::from_u64(n)
        })
    }

    #[test]
    fn g_select_examples() {
        let evens = NatStream::evens();
        assert_eq!(g_select(&Counting, &evens, 2, 16).unwrap(), FinSet::from([0, 2]));
        assert_eq!(g_select(&Counting, &evens, 1, 16).unwrap(), FinSet::from([0]));
        assert_eq!(g_select(&Summable, &evens, 0, 16).unwrap(), FinSet::empty());
        assert_eq!(
            g_select(&Counting, &evens, 9, 16),
            Err(Error::HorizonExhausted { level: 9, horizon: 16 })
        );
    }

    #[test]
    fn g_select_matches_ascending_index_search() {
        let streams = [NatStream::naturals(), NatStream::evens(), NatStream::odds(), NatStream::powers(2)];
        let phis: [&dyn Submeasure; 3] = [&Counting, &Summable, &MaxId];
        for x in &streams {
            for phi in phis {
                for n in 0..4 {
                    let got = g_select(phi, x, n, 16).ok();
                    assert_eq!(got, g_oracle(phi, x, n, 16), "{} {x:?} n={n}", phi.name());
                }
            }
        }
    }

    #[test]
    fn uniform_p_examples() {
        let xs = DecreasingSeq::power_thresholds(NatStream::naturals(), 2);
        // x_1 = {m ≥ 2}, so G_1(x_1) = {2}
        assert_eq!(uniform_p(&Counting, &xs, 2, 16).unwrap(), FinSet::from([2]));
        assert_eq!(uniform_p(&Counting, &xs, 1, 16).unwrap(), FinSet::empty());
        let tails = DecreasingSeq::tails(NatStream::naturals());
        let y = uniform_p(&Summable, &tails, 2, 64).unwrap();
        let mut expect = FinSet::empty();
        for n in 0..2 {
            expect = expect.union(&g_oracle(&Summable, &tails.at(n), n, 64).unwrap());
        }
        assert_eq!(y, expect);
        assert!(Summable.eval(&y) >= ExtRational::from_u64(1));
        let y = uniform_p(&Summable, &tails, 3, 64).unwrap();
        assert!(Summable.eval(&y.above(1)) >= ExtRational::from_u64(2));
    }

    #[test]
    fn f_select_examples() {
        let nat = NatStream::naturals();
        let pairs = PartitionSeq::blocks(nat.clone(), 2);
        let first = f_select(&Counting, &nat, &pairs, 1, &FinSet::empty(), 16).unwrap();
        assert_eq!(first, FinSet::from([0]));
        let second = f_select(&Counting, &nat, &pairs, 2, &first, 16).unwrap();
        assert_eq!(second, FinSet::from([0, 2]));
    }

    #[test]
    fn f_select_matches_ascending_index_search() {
        let nat = NatStream::naturals();
        let parts = [
            PartitionSeq::blocks(nat.clone(), 2),
            PartitionSeq::blocks(nat.clone(), 3),
            PartitionSeq::intervals(nat.clone(), FinSet::from([1, 4, 5, 9])),
        ];
        let phis: [&dyn Submeasure; 3] = [&Counting, &Summable, &MaxId];
        for p in &parts {
            for phi in phis {
                let mut prev = FinSet::empty();
                for n in 1..4 {
                    let got = f_select(phi, &nat, p, n, &prev, 16).ok();
                    assert_eq!(got, f_oracle(phi, &nat, p, n, &prev, 16), "{} n={n}", phi.name());
                    match got {
                        Some(s) => prev = s,
                        None => break,
                    }
                }
            }
        }
    }

    #[test]
    fn f_select_rejects_bad_prev() {
        let nat = NatStream::naturals();
        let pairs = PartitionSeq::blocks(nat.clone(), 2);
        assert!(matches!(
            f_select(&Counting, &nat, &pairs, 3, &FinSet::from([0, 1]), 16),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            f_select(&Counting, &NatStream::evens(), &pairs, 3, &FinSet::from([1]), 16),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn uniform_q_examples() {
        let nat = NatStream::naturals();
        let pairs = PartitionSeq::blocks(nat.clone(), 2);
        assert_eq!(uniform_q(&Counting, &nat, &pairs, 2, 16).unwrap(), FinSet::from([0, 2]));
        assert_eq!(uniform_q(&Counting, &nat, &pairs, 1, 16).unwrap(), FinSet::from([0]));
        // with singleton pieces every set is a selector, so the chain is the
        // G_n chain started from the previous level
        let singles = PartitionSeq::singletons(nat.clone());
        for levels in 1..6 {
            let q = uniform_q(&Counting, &nat, &singles, levels, 32).unwrap();
            assert_eq!(q, g_select(&Counting, &nat, levels, 32).unwrap());
        }
    }

    #[test]
    fn diagonalize_examples() {
        let xs = DecreasingSeq::power_thresholds(NatStream::naturals(), 2);
        let d = diagonalize(&xs, 5);
        assert_eq!(d, FinSet::from([1, 2, 4, 16, 65536]));
        for n in d.iter() {
            let xn = take(&xs.at(n), 70_000);
            assert!(d.above(n).is_subset(&xn));
        }
        assert_eq!(diagonalize(&DecreasingSeq::constant(NatStream::naturals()), 3), FinSet::from([0, 1, 2]));
        assert_eq!(diagonalize(&DecreasingSeq::constant(NatStream::evens()), 3), FinSet::from([0, 2, 4]));
    }

    #[test]
    fn uniform_selective_is_a_selector_of_x0() {
        let xs = DecreasingSeq::tails(NatStream::naturals());
        let s = uniform_selective(&Counting, &xs, 4, 64).unwrap();
        assert!(Counting.eval(&s) >= ExtRational::from_u64(4));
        assert!(s.is_subset(&take(&xs.at(0), 64)));
    }
}
