//! Submeasures on finite sets, with exact extended-rational values.

use std::fmt;
use std::ops::Add;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::streams::{take, FinSet, NatStream};

/// A nonnegative rational or `∞`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtRational {
    Finite(BigRational),
    Infinite,
}

impl ExtRational {
    pub fn zero() -> Self {
        ExtRational::Finite(BigRational::zero())
    }

    pub fn from_u64(n: u64) -> Self {
        ExtRational::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: u64, den: u64) -> Self {
        ExtRational::Finite(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRational::Infinite)
    }

    /// Lossy conversion for reports.
    pub fn to_f64(&self) -> f64 {
        match self {
            ExtRational::Finite(r) => r.to_f64().unwrap_or(f64::INFINITY),
            ExtRational::Infinite => f64::INFINITY,
        }
    }
}

impl Add for ExtRational {
    type Output = ExtRational;

    fn add(self, rhs: ExtRational) -> ExtRational {
        match (self, rhs) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a + b),
            _ => ExtRational::Infinite,
        }
    }
}

impl<'a> Add<&'a ExtRational> for &'a ExtRational {
    type Output = ExtRational;

    fn add(self, rhs: &ExtRational) -> ExtRational {
        match (self, rhs) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a + b),
            _ => ExtRational::Infinite,
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(r) => write!(f, "{r}"),
            ExtRational::Infinite => write!(f, "inf"),
        }
    }
}

/// A submeasure given by its values on finite sets. The induced
/// lower-semicontinuous submeasure on infinite sets is `sup_N φ(x ∩ N)`.
pub trait Submeasure: Send + Sync {
    fn name(&self) -> &str;

    fn eval(&self, s: &FinSet) -> ExtRational;

    /// Length of the shortest prefix of `elems` whose value reaches `target`,
    /// or `None` if even the whole of `elems` falls short.
    fn prefix_reaching(&self, elems: &FinSet, target: &ExtRational) -> Option<usize> {
        if &self.eval(elems) < target {
            return None;
        }
        let (mut lo, mut hi) = (0usize, elems.len());
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if &self.eval(&elems.first(mid)) >= target {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Some(lo)
    }
}

impl<S: Submeasure + ?Sized> Submeasure for Arc<S> {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn eval(&self, s: &FinSet) -> ExtRational {
        (**self).eval(s)
    }
    fn prefix_reaching(&self, elems: &FinSet, target: &ExtRational) -> Option<usize> {
        (**self).prefix_reaching(elems, target)
    }
}

impl<S: Submeasure + ?Sized> Submeasure for Box<S> {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn eval(&self, s: &FinSet) -> ExtRational {
        (**self).eval(s)
    }
    fn prefix_reaching(&self, elems: &FinSet, target: &ExtRational) -> Option<usize> {
        (**self).prefix_reaching(elems, target)
    }
}

/// `φ(s) = |s|`. `Fin(φ)` is the ideal of finite sets.
#[derive(Clone, Copy, Debug, Default)]
pub struct Counting;

impl Submeasure for Counting {
    fn name(&self) -> &str {
        "counting"
    }

    fn eval(&self, s: &FinSet) -> ExtRational {
        ExtRational::from_u64(s.len() as u64)
    }

    fn prefix_reaching(&self, elems: &FinSet, target: &ExtRational) -> Option<usize> {
        (0..=elems.len()).find(|&k| &ExtRational::from_u64(k as u64) >= target)
    }
}

/// `φ(s) = Σ_{n∈s} 1/(n+1)`, generating the summable ideal.
#[derive(Clone, Copy, Debug, Default)]
pub struct Summable;

fn harmonic_term(n: u64) -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(n) + 1)
}

impl Submeasure for Summable {
    fn name(&self) -> &str {
        "summable"
    }

    fn eval(&self, s: &FinSet) -> ExtRational {
        // pairwise reduction keeps intermediate denominators small
        let mut terms: Vec<BigRational> = s.iter().map(harmonic_term).collect();
        while terms.len() > 1 {
            let mut next = Vec::with_capacity(terms.len().div_ceil(2));
            let mut it = terms.into_iter();
            while let Some(a) = it.next() {
                match it.next() {
                    Some(b) => next.push(a + b),
                    None => next.push(a),
                }
            }
            terms = next;
        }
        ExtRational::Finite(terms.pop().unwrap_or_else(BigRational::zero))
    }

    fn prefix_reaching(&self, elems: &FinSet, target: &ExtRational) -> Option<usize> {
        let ExtRational::Finite(target) = target else {
            return None;
        };
        let mut acc = BigRational::zero();
        if &acc >= target {
            return Some(0);
        }
        for (i, n) in elems.iter().enumerate() {
            acc += harmonic_term(n);
            if &acc >= target {
                return Some(i + 1);
            }
        }
        None
    }
}

/// `φ(s) = max(s) + 1`, and `φ(∅) = 0`.
#[derive(Clone, Copy, Debug, Default)]
pub struct MaxId;

impl Submeasure for MaxId {
    fn name(&self) -> &str {
        "max-id"
    }

    fn eval(&self, s: &FinSet) -> ExtRational {
        s.max().map_or_else(ExtRational::zero, |m| ExtRational::from_u64(m + 1))
    }
}

/// A submeasure backed by a closure, for ad hoc instances.
#[derive(Clone)]
pub struct FnSubmeasure {
    name: String,
    f: Arc<dyn Fn(&FinSet) -> ExtRational + Send + Sync>,
}

impl FnSubmeasure {
    pub fn new<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&FinSet) -> ExtRational + Send + Sync + 'static,
    {
        FnSubmeasure { name: name.into(), f: Arc::new(f) }
    }
}

impl Submeasure for FnSubmeasure {
    fn name(&self) -> &str {
        &self.name
    }

    fn eval(&self, s: &FinSet) -> ExtRational {
        (self.f)(s)
    }
}

/// Names accepted by [`by_name`].
pub const REGISTERED: [&str; 3] = ["counting", "summable", "max-id"];

/// Looks up a registered submeasure.
pub fn by_name(name: &str) -> Option<Arc<dyn Submeasure>> {
    match name {
        "counting" => Some(Arc::new(Counting)),
        "summable" => Some(Arc::new(Summable)),
        "max-id" => Some(Arc::new(MaxId)),
        _ => None,
    }
}

/// `phiPrefix`: `φ(take(x, N))`.
pub fn phi_prefix(phi: &dyn Submeasure, x: &NatStream, horizon: u64) -> ExtRational {
    phi.eval(&take(x, horizon))
}

/// A failed submeasure axiom, with the witnessing sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    EmptyNotZero,
    NotMonotone { smaller: FinSet, larger: FinSet },
    NotSubadditive { s: FinSet, t: FinSet },
}

/// Checks `φ(∅) = 0`, monotonicity and subadditivity over all pairs of
/// subsets of `{0..n}`. Exhaustive, so keep `n` small.
pub fn validate(phi: &dyn Submeasure, n: u64) -> Result<(), AxiomViolation> {
    assert!(n < 16, "validation is exhaustive over pairs of subsets");
    if phi.eval(&FinSet::empty()) != ExtRational::zero() {
        return Err(AxiomViolation::EmptyNotZero);
    }
    let ground: FinSet = (0..=n).collect();
    let subsets: Vec<FinSet> = ground.subsets().collect();
    let values: Vec<ExtRational> = subsets.iter().map(|s| phi.eval(s)).collect();
    for (a, s) in subsets.iter().enumerate() {
        for (b, t) in subsets.iter().enumerate() {
            let (ma, mb) = (a as u64, b as u64);
            let union = (ma | mb) as usize;
            if ma & mb == ma && values[a] > values[b] {
                return Err(AxiomViolation::NotMonotone { smaller: s.clone(), larger: t.clone() });
            }
            if values[union] > &values[a] + &values[b] {
                return Err(AxiomViolation::NotSubadditive { s: s.clone(), t: t.clone() });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_prefix_examples() {
        assert_eq!(phi_prefix(&Counting, &NatStream::evens(), 7), ExtRational::from_u64(4));
        assert_eq!(phi_prefix(&Summable, &NatStream::naturals(), 4), ExtRational::ratio(25, 12));
        for name in REGISTERED {
            let phi = by_name(name).unwrap();
            assert_eq!(phi_prefix(&*phi, &NatStream::naturals(), 0), ExtRational::zero());
        }
    }

    #[test]
    fn registered_submeasures_satisfy_axioms() {
        for name in REGISTERED {
            assert_eq!(validate(&*by_name(name).unwrap(), 7), Ok(()), "{name}");
        }
    }

    #[test]
    fn validator_rejects_broken_submeasures() {
        let squared = FnSubmeasure::new("squared", |s| ExtRational::from_u64((s.len() * s.len()) as u64));
        assert!(matches!(validate(&squared, 3), Err(AxiomViolation::NotSubadditive { .. })));
        let anti = FnSubmeasure::new("anti", |s| ExtRational::from_u64(if s.len() == 1 { 1 } else { 0 }));
        assert!(matches!(validate(&anti, 3), Err(AxiomViolation::NotMonotone { .. })));
        let shifted = FnSubmeasure::new("shifted", |s| ExtRational::from_u64(s.len() as u64 + 1));
        assert_eq!(validate(&shifted, 3), Err(AxiomViolation::EmptyNotZero));
    }

    #[test]
    fn infinite_values_are_allowed() {
        let blocked = FnSubmeasure::new("blocked", |s| {
            if s.contains(3) {
                ExtRational::Infinite
            } else {
                ExtRational::from_u64(s.len() as u64)
            }
        });
        assert_eq!(validate(&blocked, 5), Ok(()));
        assert!(phi_prefix(&blocked, &NatStream::naturals(), 10).is_infinite());
    }

    #[test]
    fn prefix_reaching_agrees_with_default() {
        let target = ExtRational::ratio(7, 3);
        let elems: FinSet = (0..40).collect();
        let generic = FnSubmeasure::new("g", |s| Summable.eval(s));
        assert_eq!(Summable.prefix_reaching(&elems, &target), generic.prefix_reaching(&elems, &target));
        let t = ExtRational::from_u64(5);
        let generic = FnSubmeasure::new("c", |s| Counting.eval(s));
        assert_eq!(Counting.prefix_reaching(&elems, &t), generic.prefix_reaching(&elems, &t));
    }
}
