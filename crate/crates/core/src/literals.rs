//! JSON literals for instance files and command-line arguments.
//!
//! Every literal is a JSON value. Common ones also have a bare-name form:
//! `"naturals"`, `"evens"`, `"odds"` for streams, `"even-sum"` for families,
//! `"stern-brocot"` for enumerations.

use std::path::Path;
use std::sync::Arc;

use num_rational::Ratio;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::fronts::{ColorFamily, Front, SetPredicate};
use crate::ideals::{ClosedFamilyTree, DecreasingSeq, PartitionSeq, SubsetsOf};
use crate::streams::{FinSet, NatStream};
use crate::workbench::{cy_coloring, hom_sierpinski, sierpinski_coloring, OrderedEnumeration, Rational};

/// Reads a command-line literal: inline JSON, a path to a JSON file, or a
/// bare name (taken as a JSON string).
pub fn load(arg: &str) -> Result<Value> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with(['{', '[', '"']) || trimmed.parse::<f64>().is_ok() {
        return serde_json::from_str(arg).map_err(|e| Error::Parse(format!("{arg}: {e}")));
    }
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{arg}: {e}")))?;
        return serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{arg}: {e}")));
    }
    Ok(Value::String(arg.to_string()))
}

fn kind(v: &Value) -> Result<&str> {
    match v {
        Value::String(s) => Ok(s),
        Value::Object(m) => m
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse(format!("{v}: missing \"kind\""))),
        _ => Err(Error::Parse(format!("{v}: expected a name or an object with \"kind\""))),
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("{v}: missing \"{key}\"")))
}

fn uint(v: &Value, key: &str) -> Result<u64> {
    field(v, key)?.as_u64().ok_or_else(|| Error::Parse(format!("{v}: \"{key}\" must be a natural number")))
}

/// A JSON list of naturals as a set.
pub fn set(v: &Value) -> Result<FinSet> {
    let items = v.as_array().ok_or_else(|| Error::Parse(format!("{v}: expected a list of naturals")))?;
    let elems = items
        .iter()
        .map(|e| e.as_u64().ok_or_else(|| Error::Parse(format!("{e} is not a natural number"))))
        .collect::<Result<Vec<u64>>>()?;
    Ok(FinSet::from_unsorted(elems))
}

/// Parses `1,3,7` (spaces and surrounding braces allowed).
pub fn csv_set(s: &str) -> Result<FinSet> {
    let inner = s.trim().trim_start_matches(['{', '[']).trim_end_matches(['}', ']']);
    let elems = inner
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u64>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
        .collect::<Result<Vec<u64>>>()?;
    Ok(FinSet::from_unsorted(elems))
}

pub fn stream(v: &Value) -> Result<NatStream> {
    Ok(match kind(v)? {
        "naturals" => NatStream::naturals(),
        "evens" => NatStream::evens(),
        "odds" => NatStream::odds(),
        "arith" => {
            let d = uint(v, "d")?;
            if d == 0 {
                return Err(Error::InvalidInput("arith stream needs d ≥ 1".into()));
            }
            NatStream::arith(uint(v, "a")?, d)
        }
        "pow" => {
            let b = uint(v, "b")?;
            if b < 2 {
                return Err(Error::InvalidInput("pow stream needs b ≥ 2".into()));
            }
            NatStream::powers(b)
        }
        "explicit-prefix" => {
            let then = match v.get("then") {
                Some(t) => stream(t)?,
                None => NatStream::from_iter(std::iter::empty()),
            };
            NatStream::explicit_prefix(set(field(v, "prefix")?)?, then)
        }
        other => return Err(Error::Parse(format!("unknown stream kind {other:?}"))),
    })
}

fn rational(v: &Value) -> Result<Rational> {
    let bad = || Error::Parse(format!("{v}: expected \"p/q\" or [p, q] with 0 < q"));
    let (p, q) = match v {
        Value::String(s) => match s.split_once('/') {
            Some((p, q)) => (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?),
            None => (s.trim().parse().map_err(|_| bad())?, 1),
        },
        Value::Array(a) if a.len() == 2 => (a[0].as_u64().ok_or_else(bad)?, a[1].as_u64().ok_or_else(bad)?),
        Value::Number(n) => (n.as_u64().ok_or_else(bad)?, 1),
        _ => return Err(bad()),
    };
    if q == 0 {
        return Err(bad());
    }
    Ok(Ratio::new(p, q))
}

/// `"stern-brocot"`, `"alternating"`, or `{"kind":"points","points":[…]}`
/// with points written `"p/q"` or `[p, q]`.
pub fn enumeration(v: &Value) -> Result<OrderedEnumeration<Rational>> {
    Ok(match kind(v)? {
        "stern-brocot" => OrderedEnumeration::stern_brocot(),
        "alternating" => OrderedEnumeration::alternating(),
        "points" => {
            let pts = field(v, "points")?
                .as_array()
                .ok_or_else(|| Error::Parse(format!("{v}: \"points\" must be a list")))?
                .iter()
                .map(rational)
                .collect::<Result<Vec<_>>>()?;
            OrderedEnumeration::from_points("points", pts)
        }
        other => return Err(Error::Parse(format!("unknown enumeration kind {other:?}"))),
    })
}

pub fn closed_family(v: &Value) -> Result<Arc<dyn ClosedFamilyTree>> {
    Ok(match kind(v)? {
        "subset-of" => Arc::new(SubsetsOf(stream(field(v, "stream")?)?)),
        "hom-sierpinski" => {
            let e = match v.get("enum") {
                Some(e) => enumeration(e)?,
                None => OrderedEnumeration::stern_brocot(),
            };
            Arc::new(hom_sierpinski(&e))
        }
        other => return Err(Error::Parse(format!("unknown closed family kind {other:?}"))),
    })
}

/// A front literal. Fronts without a fixed depth (Schreier, from-closed)
/// take `horizon` as their depth.
pub fn front(v: &Value, horizon: u64) -> Result<Front> {
    let depth = usize::try_from(horizon).map_err(|_| Error::TooLarge { what: format!("horizon {horizon}") })?;
    Ok(match kind(v)? {
        "tuples" => {
            let n = uint(v, "n")?;
            if n == 0 || n > 64 {
                return Err(Error::InvalidInput(format!("tuples front needs 1 ≤ n ≤ 64, got {n}")));
            }
            Front::tuples(n as usize)
        }
        "schreier" => {
            let offset = v.get("offset").map(|_| uint(v, "offset")).transpose()?.unwrap_or(1);
            if offset == 0 {
                return Err(Error::InvalidInput("schreier front needs offset ≥ 1".into()));
            }
            Front::schreier(offset, depth)
        }
        "from-closed" => Front::from_closed(closed_family(field(v, "K")?)?, depth),
        other => return Err(Error::Parse(format!("unknown front kind {other:?}"))),
    })
}

/// A family `𝓕` of finite sets.
#[derive(Clone)]
pub struct FamilySpec {
    pub name: String,
    pub predicate: SetPredicate,
    /// Listed explicitly rather than as a coloring of front members.
    pub explicit: bool,
}

/// `"even-sum"`, `"all"`, `"none"`, `{"kind":"table","members":[[…],…]}`,
/// `{"kind":"cy","y":<stream>}` or `{"kind":"sierpinski","enum":…}`. The
/// last two are pair colorings: `𝓕` holds the pairs of color 1.
pub fn family(v: &Value) -> Result<FamilySpec> {
    let k = kind(v)?;
    let (predicate, explicit): (SetPredicate, bool) = match k {
        "even-sum" => (Arc::new(|s: &FinSet| s.iter().fold(0u64, |a, m| a ^ (m & 1)) == 0), false),
        "all" => (Arc::new(|_: &FinSet| true), false),
        "none" => (Arc::new(|_: &FinSet| false), false),
        "table" => {
            let members = field(v, "members")?
                .as_array()
                .ok_or_else(|| Error::Parse(format!("{v}: \"members\" must be a list of sets")))?
                .iter()
                .map(set)
                .collect::<Result<std::collections::HashSet<FinSet>>>()?;
            (Arc::new(move |s: &FinSet| members.contains(s)), true)
        }
        "cy" => {
            let y = match v.get("y") {
                Some(y) => stream(y)?,
                None => NatStream::powers(2),
            };
            let c = cy_coloring(&y);
            (Arc::new(move |s: &FinSet| s.len() == 2 && c(s.as_slice()[0], s.as_slice()[1])), false)
        }
        "sierpinski" => {
            let e = match v.get("enum") {
                Some(e) => enumeration(e)?,
                None => OrderedEnumeration::stern_brocot(),
            };
            let c = sierpinski_coloring(&e);
            (Arc::new(move |s: &FinSet| s.len() == 2 && c(s.as_slice()[0], s.as_slice()[1])), false)
        }
        other => return Err(Error::Parse(format!("unknown family kind {other:?}"))),
    };
    Ok(FamilySpec { name: k.to_string(), predicate, explicit })
}

/// Binds a family to a front. Colorings are restricted to front members;
/// tables are taken as listed.
pub fn color_family(front: Front, fam: &FamilySpec) -> ColorFamily {
    let p = Arc::clone(&fam.predicate);
    if fam.explicit {
        ColorFamily::new(front, fam.name.clone(), move |s| p(s))
    } else {
        ColorFamily::on_members(front, fam.name.clone(), move |s| p(s))
    }
}

/// `{"kind":"tails"|"dyadic"|"constant","x":<stream>}` or
/// `{"kind":"power-thresholds","x":<stream>,"b":…}`.
pub fn decreasing_seq(v: &Value) -> Result<DecreasingSeq> {
    let x = || match v.get("x") {
        Some(x) => stream(x),
        None => Ok(NatStream::naturals()),
    };
    Ok(match kind(v)? {
        "tails" => DecreasingSeq::tails(x()?),
        "dyadic" => DecreasingSeq::dyadic(x()?),
        "constant" => DecreasingSeq::constant(x()?),
        "power-thresholds" => {
            let b = uint(v, "b")?;
            if b < 2 {
                return Err(Error::InvalidInput("power-thresholds needs b ≥ 2".into()));
            }
            DecreasingSeq::power_thresholds(x()?, b)
        }
        other => return Err(Error::Parse(format!("unknown sequence kind {other:?}"))),
    })
}

/// `{"kind":"blocks","ground":<stream>,"size":…}`, `{"kind":"singletons",…}`
/// or `{"kind":"intervals","ground":…,"breaks":[…]}`.
pub fn partition(v: &Value) -> Result<PartitionSeq> {
    let ground = match v.get("ground") {
        Some(g) => stream(g)?,
        None => NatStream::naturals(),
    };
    Ok(match kind(v)? {
        "singletons" => PartitionSeq::singletons(ground),
        "blocks" => {
            let size = uint(v, "size")?;
            if size == 0 {
                return Err(Error::InvalidInput("blocks need size ≥ 1".into()));
            }
            PartitionSeq::blocks(ground, size)
        }
        "intervals" => PartitionSeq::intervals(ground, set(field(v, "breaks")?)?),
        other => return Err(Error::Parse(format!("unknown partition kind {other:?}"))),
    })
}
