//! Closed hereditary families `K ⊆ 2^ℕ`, represented by their pruned
//! trees, together with `↓K` and the cover decomposition of `𝓘_K`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::streams::{take, FinSet, NatStream};

/// A closed hereditary family, known through which finite sets extend to a
/// member. `extendable` must be hereditary and true on `∅`.
pub trait ClosedFamilyTree: Send + Sync {
    fn extendable(&self, s: &FinSet) -> bool;
}

impl<K: ClosedFamilyTree + ?Sized> ClosedFamilyTree for Arc<K> {
    fn extendable(&self, s: &FinSet) -> bool {
        (**self).extendable(s)
    }
}

/// `K = 2^x`: every subset of `x`.
#[derive(Clone, Debug)]
pub struct SubsetsOf(pub NatStream);

impl ClosedFamilyTree for SubsetsOf {
    fn extendable(&self, s: &FinSet) -> bool {
        match s.max() {
            None => true,
            Some(m) => s.is_subset(&take(&self.0, m + 1)),
        }
    }
}

/// A pair coloring on naturals: `color(a, b)` for `a < b`.
pub type PairColoring = Arc<dyn Fn(u64, u64) -> bool + Send + Sync>;

/// `K = hom(c)` for a pair coloring `c`: the sets all of whose pairs share
/// one color. A finite homogeneous set is taken to extend to an infinite
/// one, which holds for colorings where each color class keeps meeting
/// every tail (the registered gallery colorings do).
#[derive(Clone)]
pub struct HomOfPairColoring(pub PairColoring);

impl fmt::Debug for HomOfPairColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("HomOfPairColoring")
    }
}

impl ClosedFamilyTree for HomOfPairColoring {
    fn extendable(&self, s: &FinSet) -> bool {
        let e = s.as_slice();
        let mut color = None;
        for i in 0..e.len() {
            for j in i + 1..e.len() {
                let c = (self.0)(e[i], e[j]);
                match color {
                    None => color = Some(c),
                    Some(prev) if prev != c => return false,
                    _ => {}
                }
            }
        }
        true
    }
}

/// A tree given directly by its extendability predicate.
#[derive(Clone)]
pub struct FnClosedFamily(pub Arc<dyn Fn(&FinSet) -> bool + Send + Sync>);

impl ClosedFamilyTree for FnClosedFamily {
    fn extendable(&self, s: &FinSet) -> bool {
        (self.0)(s)
    }
}

/// `s ∈ ↓K` at finite scale: `s` extends to a member of `K`.
pub fn down_member(k: &dyn ClosedFamilyTree, s: &FinSet) -> bool {
    k.extendable(s)
}

/// A minimum-size sublist of `gens` whose union covers `take(x, N)`, the
/// least such in lexicographic order of index lists.
pub fn cover_decompose(gens: &[NatStream], x: &NatStream, horizon: u64) -> Result<Vec<usize>> {
    if gens.is_empty() {
        return Err(Error::InvalidInput("cover decomposition needs at least one generator".into()));
    }
    if gens.len() > 24 {
        return Err(Error::TooLarge { what: format!("{} generators", gens.len()) });
    }
    let target = take(x, horizon);
    if target.is_empty() {
        return Ok(Vec::new());
    }
    let pieces: Vec<FinSet> = gens.iter().map(|g| take(g, horizon)).collect();
    for size in 1..=gens.len() {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let union = combo.iter().fold(FinSet::empty(), |acc, &i| acc.union(&pieces[i]));
            if target.is_subset(&union) {
                return Ok(combo);
            }
            if !next_combination(&mut combo, gens.len()) {
                break;
            }
        }
    }
    Err(Error::NotCovered { horizon })
}

/// Advances `combo` to the next `k`-subset of `0..n` in lexicographic order.
pub(crate) fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
