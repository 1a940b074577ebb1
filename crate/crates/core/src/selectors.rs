//! Homogeneous-set extraction: the base case, the rank-recursive
//! Nash-Williams selector, its Ramsey specialisation, the exhaustive Galvin
//! search, and the finite pseudo-selector upgrade.
//!
//! The recursion follows the derivative/diagonalise/split scheme. At a
//! working set `p` it walks a diagonal `a₀ < a₁ < …`: `a₀ = min p`, and
//! after `a_k` the selector for the derivative `(𝓑_{a_k}, 𝓕_{a_k})` runs on
//! what is left of the previous set above `a_k`, giving `H_k`; then
//! `a_{k+1} = min H_k`. Each `a_k` is tagged with the side its `H_k`
//! landed on, and the diagonal is split by tag.

use std::fmt;

use crate::error::{Error, Result};
use crate::fronts::{classify_set, galvin_check2, ColorFamily, Front, Verdict};
use crate::ideals::{diagonalize_finite, ClosedFamilyTree, Submeasure};
use crate::streams::{take, FinSet, NatStream};

/// Which alternative a selected set satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Zero,
    One,
}

impl Side {
    pub fn verdict(self) -> Verdict {
        match self {
            Side::Zero => Verdict::Hom0,
            Side::One => Verdict::Hom1,
        }
    }
}

/// Decides whether a candidate side is positive inside the whole set. This
/// is the finite stand-in for `· ∈ 𝓘⁺`.
pub trait Positivity: Send + Sync {
    fn is_positive(&self, side: &FinSet, whole: &FinSet) -> bool;
}

/// At least half of the whole. The default rule for `Fin`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Majority;

impl Positivity for Majority {
    fn is_positive(&self, side: &FinSet, whole: &FinSet) -> bool {
        2 * side.len() >= whole.len()
    }
}

/// At least half of the whole's submeasure.
pub struct SubmeasurePositivity<S>(pub S);

impl<S: Submeasure> Positivity for SubmeasurePositivity<S> {
    fn is_positive(&self, side: &FinSet, whole: &FinSet) -> bool {
        let s = self.0.eval(side);
        s.clone() + s >= self.0.eval(whole)
    }
}

/// A positivity rule given as a plain predicate on the side.
pub struct PositiveIf<F>(pub F);

impl<F: Fn(&FinSet) -> bool + Send + Sync> Positivity for PositiveIf<F> {
    fn is_positive(&self, side: &FinSet, _whole: &FinSet) -> bool {
        (self.0)(side)
    }
}

/// One diagonal step at the outermost level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRecord {
    pub step: usize,
    pub branch: u64,
    /// `None` when the element may join either side.
    pub verdict: Option<Verdict>,
}

impl fmt::Display for TraceRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.verdict.map_or("free", Verdict::as_str);
        write!(f, "step={} branch={} verdict={v}", self.step, self.branch)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelectorReport {
    pub output: FinSet,
    /// `Hom0` or `Hom1`, as certified by [`classify_set`] on `output`.
    pub verdict: Verdict,
    pub trace: Vec<TraceRecord>,
}

/// Picks a side among `zero` and `one`; `hint` settles the case where the
/// rule finds both positive or neither.
fn choose(rule: &dyn Positivity, zero: &FinSet, one: &FinSet, whole: &FinSet, hint: Side) -> Side {
    match (rule.is_positive(zero, whole), rule.is_positive(one, whole)) {
        (true, false) => Side::Zero,
        (false, true) => Side::One,
        _ => hint,
    }
}

/// `selectBase`: split `take(x, N)` by membership of singletons and keep
/// the `𝓕` side when the rule finds it positive.
pub fn select_base(
    f1: &dyn Fn(&FinSet) -> bool,
    x: &NatStream,
    rule: &dyn Positivity,
    horizon: u64,
) -> SelectorReport {
    let p = take(x, horizon);
    let (one, zero): (Vec<u64>, Vec<u64>) = p.iter().partition(|&n| f1(&FinSet::singleton(n)));
    let (one, zero) = (FinSet::from_unsorted(one), FinSet::from_unsorted(zero));
    let pick_one = rule.is_positive(&one, &p);
    let trace = p
        .iter()
        .enumerate()
        .map(|(step, n)| TraceRecord {
            step,
            branch: n,
            verdict: Some(if one.contains(n) { Verdict::Hom1 } else { Verdict::Hom0 }),
        })
        .collect();
    if pick_one {
        SelectorReport { output: one, verdict: Verdict::Hom1, trace }
    } else {
        SelectorReport { output: zero, verdict: Verdict::Hom0, trace }
    }
}

struct Selected {
    set: FinSet,
    side: Side,
    /// `set` satisfies both alternatives, so its tag is irrelevant upstream.
    free: bool,
}

/// The Nash-Williams selector over a positivity rule.
pub struct NashWilliams<'a> {
    rule: &'a dyn Positivity,
}

impl Default for NashWilliams<'static> {
    fn default() -> Self {
        NashWilliams { rule: &Majority }
    }
}

impl<'a> NashWilliams<'a> {
    pub fn with_rule(rule: &'a dyn Positivity) -> Self {
        NashWilliams { rule }
    }

    /// `nwSelect(C, x, N)`.
    pub fn select(&self, c: &ColorFamily, x: &NatStream, horizon: u64) -> Result<SelectorReport> {
        if c.front().depth() == 0 {
            return Err(Error::InvalidInput("front depth must be at least 1".into()));
        }
        if horizon < 2 {
            return Err(Error::InvalidInput("nw_select needs horizon ≥ 2".into()));
        }
        self.run(c, x, horizon)
    }

    fn run(&self, c: &ColorFamily, x: &NatStream, horizon: u64) -> Result<SelectorReport> {
        let p = take(x, horizon).intersection(&take(c.front().base(), horizon));
        let mut trace = Vec::new();
        let picked = self.recurse(c, &p, c.front().depth(), Side::One, Some(&mut trace))?;
        let verdict = classify_set(c, &picked.set);
        if verdict == Verdict::Neither {
            return Err(Error::InvalidInput(format!(
                "selected set {} failed certification; check that {} is a front and 𝓕 lies in its bar closure",
                picked.set,
                c.front().name()
            )));
        }
        debug_assert!(verdict == picked.side.verdict() || verdict == Verdict::Hom0);
        Ok(SelectorReport { output: picked.set, verdict, trace })
    }

    fn recurse(
        &self,
        c: &ColorFamily,
        p: &FinSet,
        depth: usize,
        hint: Side,
        trace: Option<&mut Vec<TraceRecord>>,
    ) -> Result<Selected> {
        if p.is_empty() {
            return Ok(Selected { set: FinSet::empty(), side: hint, free: true });
        }
        let front = c.front();
        let mut tags: Vec<Option<Side>> = Vec::new();
        let mut current = p.clone();
        let diagonal = diagonalize_finite(p, |n| {
            let rest = current.above(n);
            let single = FinSet::singleton(n);
            let (tag, h) = if front.is_member(&single) {
                let side = if c.in_family(&single) { Side::One } else { Side::Zero };
                (Some(side), rest)
            } else if c.in_family(&single) {
                // every member starting at n already has {n} ∈ 𝓕 as initial segment
                (Some(Side::One), rest)
            } else if rest.is_empty() {
                (None, rest)
            } else {
                if depth <= 1 {
                    return Err(Error::DepthExhausted { depth: front.depth() });
                }
                let child_hint = leading_side(&tags).unwrap_or(hint);
                let sub = self.recurse(&c.derivative(n), &rest, depth - 1, child_hint, None)?;
                (if sub.free { None } else { Some(sub.side) }, sub.set)
            };
            tags.push(tag);
            current = h.clone();
            Ok(h)
        })?;

        let (mut zero, mut one, mut free) = (FinSet::empty(), FinSet::empty(), FinSet::empty());
        for (n, tag) in diagonal.iter().zip(&tags) {
            match tag {
                Some(Side::Zero) => zero.push(n),
                Some(Side::One) => one.push(n),
                None => free.push(n),
            }
        }
        let side = choose(self.rule, &zero, &one, &diagonal, leading_side(&tags).unwrap_or(hint));
        if let Some(trace) = trace {
            trace.extend(diagonal.iter().zip(&tags).enumerate().map(|(step, (n, tag))| TraceRecord {
                step,
                branch: n,
                verdict: tag.map(Side::verdict),
            }));
        }
        let set = match side {
            Side::Zero => zero.union(&free),
            Side::One => one.union(&free),
        };
        let free = match set.as_slice() {
            [] => true,
            [m] => {
                let single = FinSet::singleton(*m);
                !front.is_member(&single) && !c.in_family(&single)
            }
            _ => false,
        };
        Ok(Selected { set, side, free })
    }
}

/// The side holding strictly more tagged elements, if any.
fn leading_side(tags: &[Option<Side>]) -> Option<Side> {
    let ones = tags.iter().filter(|t| **t == Some(Side::One)).count();
    let zeros = tags.iter().filter(|t| **t == Some(Side::Zero)).count();
    match ones.cmp(&zeros) {
        std::cmp::Ordering::Greater => Some(Side::One),
        std::cmp::Ordering::Less => Some(Side::Zero),
        std::cmp::Ordering::Equal => None,
    }
}

/// `nwSelect(C, x, N)` with the majority rule.
pub fn nw_select(c: &ColorFamily, x: &NatStream, horizon: u64) -> Result<SelectorReport> {
    NashWilliams::default().select(c, x, horizon)
}

/// `ramseySelect(n, F, x, N)`: the selector on `[ℕ]ⁿ` with `𝓕 = {s : |s| = n, F(s)}`.
pub fn ramsey_select<F>(n: usize, f: F, x: &NatStream, horizon: u64) -> Result<SelectorReport>
where
    F: Fn(&FinSet) -> bool + Send + Sync + 'static,
{
    if !(1..=4).contains(&n) {
        return Err(Error::InvalidInput(format!("ramsey_select supports 1 ≤ n ≤ 4, got {n}")));
    }
    if horizon < n as u64 {
        return Err(Error::InvalidInput(format!("horizon {horizon} is below n = {n}")));
    }
    let family = ColorFamily::on_members(Front::tuples(n), format!("coloring of [N]^{n}"), f);
    NashWilliams::default().run(&family, x, horizon)
}

/// Result of [`galvin_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GalvinOutcome {
    /// A `k`-set none of whose nonempty subsets is in `𝓕`.
    Witness(FinSet),
    /// No such set below the horizon. Evidence for the first alternative,
    /// not a proof of it.
    NoWitness,
}

/// Default cap on predicate evaluations for [`galvin_search`].
pub const GALVIN_SEARCH_BUDGET: u64 = 1 << 26;

/// Largest `k` accepted by [`galvin_search`].
pub const GALVIN_SEARCH_MAX_K: usize = 20;

/// Exhaustive search for Galvin's second alternative: the lexicographically
/// least `k`-subset `y` of `take(x, N)` with `[y]^{<ω} ∩ 𝓕 = ∅`. There is
/// no uniform procedure for general `𝓕`, so this is a bounded brute force.
pub fn galvin_search(
    f: &dyn Fn(&FinSet) -> bool,
    x: &NatStream,
    horizon: u64,
    k: usize,
    budget: u64,
) -> Result<GalvinOutcome> {
    if k > GALVIN_SEARCH_MAX_K {
        return Err(Error::TooLarge { what: format!("witness size {k} exceeds {GALVIN_SEARCH_MAX_K}") });
    }
    if horizon < k as u64 {
        return Err(Error::InvalidInput(format!("horizon {horizon} is below k = {k}")));
    }
    let p = take(x, horizon).into_vec();
    let mut spent = 0u64;
    let mut cur = FinSet::empty();
    fn dfs(
        f: &dyn Fn(&FinSet) -> bool,
        p: &[u64],
        start: usize,
        k: usize,
        cur: &mut FinSet,
        spent: &mut u64,
        budget: u64,
    ) -> Result<bool> {
        if cur.len() == k {
            return Ok(true);
        }
        for i in start..p.len() {
            if p.len() - i < k - cur.len() {
                break;
            }
            // only the subsets through the new element are unchecked
            let base = cur.clone();
            *spent += 1u64 << base.len();
            if *spent > budget {
                return Err(Error::TooLarge { what: format!("galvin search exceeded {budget} evaluations") });
            }
            let clean = (0u64..1 << base.len()).all(|mask| !f(&base.select(mask).with(p[i])));
            if !clean {
                continue;
            }
            cur.push(p[i]);
            if dfs(f, p, i + 1, k, cur, spent, budget)? {
                return Ok(true);
            }
            cur.pop();
        }
        Ok(false)
    }
    if dfs(f, &p, 0, k, &mut cur, &mut spent, budget)? {
        debug_assert_eq!(galvin_check2(f, &cur), Ok(true));
        Ok(GalvinOutcome::Witness(cur))
    } else {
        Ok(GalvinOutcome::NoWitness)
    }
}

/// Upgrades a point `y ∈ ↓K` to a maximal `z ⊆ {0..N-1}` with `y ⊆ z ∈ ↓K`,
/// adding elements left to right whenever the result stays extendable.
pub fn pseudo_to_selector(k: &dyn ClosedFamilyTree, y: &FinSet, horizon: u64) -> Result<FinSet> {
    if !k.extendable(y) {
        return Err(Error::InvalidInput(format!("{y} is not in the downward closure")));
    }
    let mut z = y.clone();
    for m in 0..horizon {
        if z.contains(m) {
            continue;
        }
        let bigger = z.with(m);
        if k.extendable(&bigger) {
            z = bigger;
        }
    }
    Ok(z)
}
