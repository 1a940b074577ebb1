//! Fronts, colour families on them, derivatives, bar closure, and the
//! finite-scale homogeneity classifier.
//!
//! A front is carried as a membership predicate together with a declared
//! `depth`, the number of derivative steps the selector recursion may take.
//! The empty set is never a member of a front or of a colour family.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ideals::ClosedFamilyTree;
use crate::streams::{take, FinSet, NatStream};

/// A predicate on finite sets.
pub type SetPredicate = Arc<dyn Fn(&FinSet) -> bool + Send + Sync>;

/// Outcome of the homogeneity classifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// No finite subset lies in `𝓕`.
    Hom0,
    /// Every front member inside the set has an initial segment in `𝓕`.
    Hom1,
    Neither,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Hom0 => "hom0",
            Verdict::Hom1 => "hom1",
            Verdict::Neither => "neither",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone)]
pub struct Front {
    member: SetPredicate,
    depth: usize,
    base: NatStream,
    name: String,
}

impl fmt::Debug for Front {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Front").field("name", &self.name).field("depth", &self.depth).finish()
    }
}

impl Front {
    pub fn new<F>(name: impl Into<String>, depth: usize, base: NatStream, member: F) -> Front
    where
        F: Fn(&FinSet) -> bool + Send + Sync + 'static,
    {
        Front { member: Arc::new(member), depth, base, name: name.into() }
    }

    /// `[ℕ]ⁿ`, depth `n`.
    pub fn tuples(n: usize) -> Front {
        assert!(n >= 1, "tuples front needs n ≥ 1");
        Front::new(format!("tuples({n})"), n, NatStream::naturals(), move |s| s.len() == n)
    }

    /// `{s : |s| = min(s) + offset}`. Its depth is not bounded by any fixed
    /// `n`, so the caller supplies one; the working horizon always suffices.
    pub fn schreier(offset: u64, depth: usize) -> Front {
        assert!(offset >= 1, "schreier front needs offset ≥ 1");
        Front::new(format!("schreier(+{offset})"), depth, NatStream::naturals(), move |s| {
            s.min().is_some_and(|m| s.len() as u64 == m.saturating_add(offset))
        })
    }

    /// The ⊑-minimal finite sets outside `↓K`: every proper initial segment
    /// extends to a member of `K`, the set itself does not.
    pub fn from_closed(k: Arc<dyn ClosedFamilyTree>, depth: usize) -> Front {
        Front::new("from-closed", depth, NatStream::naturals(), move |s| {
            let mut shorter = s.clone();
            shorter.pop();
            !k.extendable(s) && k.extendable(&shorter)
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn base(&self) -> &NatStream {
        &self.base
    }

    pub fn with_depth(mut self, depth: usize) -> Front {
        self.depth = depth;
        self
    }

    pub fn with_base(mut self, base: NatStream) -> Front {
        self.base = base;
        self
    }

    pub fn is_member(&self, s: &FinSet) -> bool {
        !s.is_empty() && (self.member)(s)
    }

    /// Whether some proper nonempty initial segment of `s` is a member.
    pub fn has_proper_member_prefix(&self, s: &FinSet) -> bool {
        (1..s.len()).any(|k| self.is_member(&s.first(k)))
    }

    /// `𝓑_{n}`: members `t` with `min t > n` and `{n} ∪ t ∈ 𝓑`, living on
    /// `tail(base, n)`.
    pub fn derivative(&self, n: u64) -> Front {
        let parent = Arc::clone(&self.member);
        Front {
            member: Arc::new(move |t: &FinSet| t.min().is_some_and(|m| m > n) && parent(&t.prepend(n))),
            depth: self.depth.saturating_sub(1),
            base: self.base.tail(n),
            name: format!("{}/{n}", self.name),
        }
    }
}

/// `isFront(B, N, m)`: every subset of `take(base, N)` of size at least `m`
/// has an initial segment in `B`, and no member found below the horizon
/// has another member as a proper initial segment.
///
/// # Panics
/// If the prefix has more than 24 elements.
pub fn is_front(b: &Front, horizon: u64, min_size: usize) -> bool {
    let prefix = take(&b.base, horizon);
    assert!(prefix.len() <= 24, "is_front is exhaustive over subsets of the prefix");
    for s in prefix.subsets() {
        if s.is_empty() {
            continue;
        }
        let member_prefixes = (1..=s.len()).filter(|&k| b.is_member(&s.first(k))).count();
        if member_prefixes > 1 {
            return false;
        }
        if s.len() >= min_size && member_prefixes == 0 {
            return false;
        }
    }
    true
}

/// Whether `s ⊑ t` for some member `t ⊆ take(base, N)`.
pub fn in_bar_closure(b: &Front, s: &FinSet, horizon: u64) -> bool {
    let prefix = take(&b.base, horizon);
    if !s.is_subset(&prefix) || b.has_proper_member_prefix(s) {
        return false;
    }
    fn extend(b: &Front, cur: &mut FinSet, prefix: &FinSet) -> bool {
        if b.is_member(cur) {
            return true;
        }
        let floor = cur.max();
        for e in prefix.iter() {
            if floor.is_some_and(|m| e <= m) {
                continue;
            }
            cur.push(e);
            let hit = extend(b, cur, prefix);
            cur.pop();
            if hit {
                return true;
            }
        }
        false
    }
    extend(b, &mut s.clone(), &prefix)
}

/// A front `𝓑` with a family `𝓕` inside its bar closure.
#[derive(Clone)]
pub struct ColorFamily {
    front: Front,
    in_f: SetPredicate,
    name: String,
}

impl fmt::Debug for ColorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ColorFamily").field("front", &self.front).field("family", &self.name).finish()
    }
}

impl ColorFamily {
    /// `in_f` must only hold on sets in the bar closure of `front`.
    pub fn new<F>(front: Front, name: impl Into<String>, in_f: F) -> ColorFamily
    where
        F: Fn(&FinSet) -> bool + Send + Sync + 'static,
    {
        ColorFamily { front, in_f: Arc::new(in_f), name: name.into() }
    }

    /// `𝓕 = {s ∈ 𝓑 : colour(s)}`.
    pub fn on_members<F>(front: Front, name: impl Into<String>, colour: F) -> ColorFamily
    where
        F: Fn(&FinSet) -> bool + Send + Sync + 'static,
    {
        let member = Arc::clone(&front.member);
        ColorFamily::new(front, name, move |s| member(s) && colour(s))
    }

    pub fn front(&self) -> &Front {
        &self.front
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn in_family(&self, s: &FinSet) -> bool {
        !s.is_empty() && (self.in_f)(s)
    }

    pub fn predicate(&self) -> SetPredicate {
        let f = Arc::clone(&self.in_f);
        Arc::new(move |s: &FinSet| !s.is_empty() && f(s))
    }

    /// `(𝓑_{n}, 𝓕_{n})` with `𝓕_{n} = {t : min t > n, {n} ∪ t ∈ 𝓕}`.
    pub fn derivative(&self, n: u64) -> ColorFamily {
        let parent = Arc::clone(&self.in_f);
        ColorFamily {
            front: self.front.derivative(n),
            in_f: Arc::new(move |t: &FinSet| t.min().is_some_and(|m| m > n) && parent(&t.prepend(n))),
            name: format!("{}/{n}", self.name),
        }
    }

    /// Checks, for subsets of `{0..N-1}`, that members of `𝓕` have no
    /// proper initial segment in `𝓑`.
    pub fn respects_bar_closure(&self, horizon: u64) -> bool {
        let ground: FinSet = (0..horizon).collect();
        let ok = ground.subsets().all(|s| !self.in_family(&s) || !self.front.has_proper_member_prefix(&s));
        ok
    }
}

struct Walk {
    hom0: bool,
    hom1: bool,
}

/// Visits every subset of `p` that can lie in the bar closure (those with
/// no proper member prefix), recording where each clause fails. Returns
/// `(contains a member, contains a family set)` for the subtree at `cur`.
fn walk(c: &ColorFamily, p: &FinSet, cur: &mut FinSet, f_prefix: bool, acc: &mut Walk) -> (bool, bool) {
    let here_f = c.in_family(cur);
    if here_f {
        acc.hom0 = false;
    }
    let f_prefix = f_prefix || here_f;
    let (mut has_member, mut has_f) = (false, here_f);
    if c.front.is_member(cur) {
        has_member = true;
    } else {
        let floor = cur.max();
        for e in p.iter() {
            if floor.is_some_and(|m| e <= m) {
                continue;
            }
            cur.push(e);
            let (m, f) = walk(c, p, cur, f_prefix, acc);
            cur.pop();
            has_member |= m;
            has_f |= f;
            if !acc.hom0 && !acc.hom1 {
                return (has_member, has_f);
            }
        }
    }
    // cur ∈ 𝓑̄ but neither in 𝓕̄ (has_f) nor in 𝓕̂ (f_prefix)
    if !cur.is_empty() && has_member && !has_f && !f_prefix {
        acc.hom1 = false;
    }
    (has_member, has_f)
}

/// Classifies a finite set `p` against `(𝓑, 𝓕)`. `Hom0` takes precedence
/// when both clauses hold.
pub fn classify_set(c: &ColorFamily, p: &FinSet) -> Verdict {
    let mut acc = Walk { hom0: true, hom1: true };
    walk(c, p, &mut FinSet::empty(), false, &mut acc);
    if acc.hom0 {
        Verdict::Hom0
    } else if acc.hom1 {
        Verdict::Hom1
    } else {
        Verdict::Neither
    }
}

/// Whether `p` satisfies the given clause (ignoring precedence).
pub fn hom_holds(c: &ColorFamily, p: &FinSet, verdict: Verdict) -> bool {
    let mut acc = Walk { hom0: true, hom1: true };
    walk(c, p, &mut FinSet::empty(), false, &mut acc);
    match verdict {
        Verdict::Hom0 => acc.hom0,
        Verdict::Hom1 => acc.hom1,
        Verdict::Neither => !acc.hom0 && !acc.hom1,
    }
}

/// `homClassify(C, x, N)` on `p = take(x, N)`.
pub fn hom_classify(c: &ColorFamily, x: &NatStream, horizon: u64) -> Verdict {
    classify_set(c, &take(x, horizon))
}

/// Largest set accepted by [`galvin_check2`].
pub const GALVIN_CHECK_LIMIT: usize = 24;

/// Galvin's second alternative on a finite set: no nonempty subset of `s`
/// satisfies `f`.
pub fn galvin_check2(f: &dyn Fn(&FinSet) -> bool, s: &FinSet) -> Result<bool> {
    if s.len() > GALVIN_CHECK_LIMIT {
        return Err(Error::TooLarge { what: format!("{} elements exceed the subset check limit", s.len()) });
    }
    Ok((1u64..1 << s.len()).all(|mask| !f(&s.select(mask))))
}

/// `𝓕_K = {s : s ∉ ↓K}`.
pub fn front_from_closed(k: Arc<dyn ClosedFamilyTree>) -> SetPredicate {
    Arc::new(move |s: &FinSet| !k.extendable(s))
}
