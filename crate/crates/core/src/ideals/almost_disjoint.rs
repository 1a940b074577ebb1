//! The branch almost-disjoint family inside an infinite set.
//!
//! A binary string `b` of length `n` is coded by the natural with binary
//! digits `1·b`. Each `y ∈ 2^ℕ` picks the branch of codes of its prefixes,
//! and distinct branches share only the codes of their common prefixes.

use crate::error::{Error, Result};
use crate::streams::{BinarySeq, FinSet, NatStream};

/// The code `1·b` of the length-`n` prefix of `y`.
pub fn prefix_code(y: &BinarySeq, n: u64) -> u64 {
    (0..n).fold(1u64, |acc, i| acc << 1 | u64::from(y.bit(i)))
}

/// First `count` elements of `ψ(x, y) = {e(x)(code(y↾n)) : n ≥ 1}`.
pub fn branch_ad(x: &NatStream, y: &BinarySeq, count: usize) -> Result<FinSet> {
    if count == 0 {
        return Err(Error::InvalidInput("branch_ad needs count ≥ 1".into()));
    }
    if count > 62 {
        return Err(Error::TooLarge { what: format!("prefix codes up to 2^{}", count + 1) });
    }
    let mut cursor = x.clone();
    let mut pos = 0u64;
    let mut out = FinSet::empty();
    for n in 1..=count as u64 {
        // codes strictly increase with n, so one forward pass suffices
        let code = prefix_code(y, n);
        let skip = usize::try_from(code - pos).expect("code offset fits in usize");
        let v = cursor
            .nth(skip)
            .ok_or_else(|| Error::InvalidInput(format!("x has no element at position {code}")))?;
        pos = code + 1;
        out.push(v);
    }
    Ok(out)
}
