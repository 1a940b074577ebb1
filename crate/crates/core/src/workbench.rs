//! Concrete tall families with selectors: the `γ` construction, the gap
//! coloring behind `𝓒_y`, the Sierpiński coloring of an enumerated order,
//! and the gallery instances run by the CLI.

use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::fronts::Verdict;
use crate::ideals::{HomOfPairColoring, PairColoring};
use crate::selectors::{ramsey_select, SelectorReport};
use crate::streams::{FinSet, NatStream};

/// A nonnegative rational, used for points of the unit interval.
pub type Rational = Ratio<u64>;

/// An enumeration `n ↦ points(n)` of a set carrying a strict total order.
pub struct OrderedEnumeration<T> {
    points: Arc<dyn Fn(u64) -> T + Send + Sync>,
    less: Arc<dyn Fn(&T, &T) -> bool + Send + Sync>,
    name: String,
}

impl<T> Clone for OrderedEnumeration<T> {
    fn clone(&self) -> Self {
        OrderedEnumeration { points: Arc::clone(&self.points), less: Arc::clone(&self.less), name: self.name.clone() }
    }
}

impl<T> fmt::Debug for OrderedEnumeration<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("OrderedEnumeration").field(&self.name).finish()
    }
}

impl<T: 'static> OrderedEnumeration<T> {
    pub fn new<P, L>(name: impl Into<String>, points: P, less: L) -> Self
    where
        P: Fn(u64) -> T + Send + Sync + 'static,
        L: Fn(&T, &T) -> bool + Send + Sync + 'static,
    {
        OrderedEnumeration { points: Arc::new(points), less: Arc::new(less), name: name.into() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn point(&self, n: u64) -> T {
        (self.points)(n)
    }

    pub fn less(&self, a: &T, b: &T) -> bool {
        (self.less)(a, b)
    }

    /// Whether the points at the indices of `h` increase in the order.
    pub fn increasing_on(&self, h: &FinSet) -> bool {
        let pts: Vec<T> = h.iter().map(|n| self.point(n)).collect();
        pts.windows(2).all(|w| self.less(&w[0], &w[1]))
    }

    pub fn decreasing_on(&self, h: &FinSet) -> bool {
        let pts: Vec<T> = h.iter().map(|n| self.point(n)).collect();
        pts.windows(2).all(|w| self.less(&w[1], &w[0]))
    }
}

impl<T: Ord + Clone + Send + Sync + 'static> OrderedEnumeration<T> {
    /// Ordered by `T`'s own order.
    pub fn by_ord<P>(name: impl Into<String>, points: P) -> Self
    where
        P: Fn(u64) -> T + Send + Sync + 'static,
    {
        OrderedEnumeration::new(name, points, |a: &T, b: &T| a < b)
    }
}

impl OrderedEnumeration<Rational> {
    /// A finite list of points. Indices past the end repeat nothing; they
    /// are not part of the enumeration and panic if asked for.
    pub fn from_points(name: impl Into<String>, points: Vec<Rational>) -> Self {
        let points = Arc::new(points);
        OrderedEnumeration::by_ord(name, move |n| {
            *usize::try_from(n).ok().and_then(|i| points.get(i)).unwrap_or_else(|| {
                panic!("point {n} is past the end of a finite enumeration of {}", points.len())
            })
        })
    }

    /// Breadth-first Stern–Brocot order on `ℚ ∩ (0,1)`: `1/2, 1/3, 2/3,
    /// 1/4, 2/5, 3/5, 3/4, …`.
    pub fn stern_brocot() -> Self {
        OrderedEnumeration::by_ord("stern-brocot", stern_brocot)
    }

    /// `a_{2k} = 1/2 − 1/(k+3)`, `a_{2k+1} = 1/2 + 1/(k+3)`: two monotone
    /// halves interleaved, both converging to `1/2`.
    pub fn alternating() -> Self {
        OrderedEnumeration::by_ord("alternating", alternating_point)
    }

    /// Points of `[0,1]` with `|last − first|` and the consecutive gaps
    /// along `h`.
    pub fn gaps(&self, h: &FinSet) -> Vec<Rational> {
        let pts: Vec<Rational> = h.iter().map(|n| self.point(n)).collect();
        pts.windows(2).map(|w| abs_diff(w[0], w[1])).collect()
    }
}

fn abs_diff(a: Rational, b: Rational) -> Rational {
    if a >= b {
        a - b
    } else {
        b - a
    }
}

/// The `n`-th rational of the breadth-first Stern–Brocot walk of `(0,1)`.
pub fn stern_brocot(n: u64) -> Rational {
    let v = u128::from(n) + 1;
    let level = 127 - v.leading_zeros();
    let (mut lo, mut hi) = ((0u64, 1u64), (1u64, 1u64));
    let mut cur = (1u64, 2u64);
    for i in (0..level).rev() {
        if v >> i & 1 == 1 {
            lo = cur;
        } else {
            hi = cur;
        }
        cur = (lo.0 + hi.0, lo.1 + hi.1);
    }
    // mediants of Farey neighbours are already in lowest terms
    Ratio::new_raw(cur.0, cur.1)
}

fn alternating_point(n: u64) -> Rational {
    let k = n / 2;
    let d = 2 * (k + 3);
    if n % 2 == 0 {
        Ratio::new(k + 1, d)
    } else {
        Ratio::new(k + 5, d)
    }
}

/// First `count` elements of `γ(x, y) = {e(x)(n) : n ∈ y}`.
pub fn gamma_map(x: &NatStream, y: &NatStream, count: usize) -> Result<FinSet> {
    if count == 0 {
        return Err(Error::InvalidInput("gamma_map needs count ≥ 1".into()));
    }
    let mut cursor = x.clone();
    let mut pos = 0u64;
    let mut out = FinSet::empty();
    for n in y.clone().take(count) {
        let skip = usize::try_from(n - pos).map_err(|_| Error::TooLarge { what: format!("position {n}") })?;
        match cursor.nth(skip) {
            Some(v) => out.push(v),
            None => break,
        }
        pos = n + 1;
    }
    Ok(out)
}

/// `c{k,l} = 0` iff `l − k ≥ y_k` and `k ≥ y₀`, for `k < l`.
pub fn cy_coloring(y: &NatStream) -> PairColoring {
    let y = y.clone();
    Arc::new(move |k: u64, l: u64| {
        let y0 = y.nth_element(0);
        let yk = y.nth_element(k);
        let zero = matches!((y0, yk), (Some(y0), Some(yk)) if l - k >= yk && k >= y0);
        !zero
    })
}

/// `z ∈ 𝓒_y` at finite scale: `y₀ ≤ z₀` and `y_{n+1} − y_n ≤ z_{n+1} − z_n`
/// for consecutive elements of `z`.
pub fn cy_member(y: &NatStream, z: &FinSet) -> bool {
    let zs = z.as_slice();
    let ys: Vec<u64> = y.clone().take(zs.len()).collect();
    if ys.len() < zs.len() {
        return false;
    }
    zs.first().is_none_or(|&z0| ys[0] <= z0)
        && (0..zs.len().saturating_sub(1)).all(|n| ys[n + 1] - ys[n] <= zs[n + 1] - zs[n])
}

/// `c{n,m} = 1` iff `points(n)` is below `points(m)`, for `n < m`.
pub fn sierpinski_coloring<T: 'static>(e: &OrderedEnumeration<T>) -> PairColoring {
    let e = e.clone();
    Arc::new(move |n: u64, m: u64| e.less(&e.point(n), &e.point(m)))
}

/// `↓hom(c)` for the Sierpiński coloring: the closed family of
/// monotone index sets.
pub fn hom_sierpinski<T: 'static>(e: &OrderedEnumeration<T>) -> HomOfPairColoring {
    HomOfPairColoring(sierpinski_coloring(e))
}

fn pair_family(c: PairColoring) -> impl Fn(&FinSet) -> bool + Send + Sync + 'static {
    move |s: &FinSet| {
        let e = s.as_slice();
        c(e[0], e[1])
    }
}

/// `ramseySelect(2, c, x, N)` for a pair coloring.
pub fn pair_select(c: PairColoring, x: &NatStream, horizon: u64) -> Result<SelectorReport> {
    ramsey_select(2, pair_family(c), x, horizon)
}

/// A monotone index set `h ⊆ {0..N-1}`: homogeneous for the Sierpiński
/// coloring, so the points along it form a monotone, hence Cauchy, run.
pub fn convergent_select(e: &OrderedEnumeration<Rational>, horizon: u64) -> Result<FinSet> {
    if horizon < 2 {
        return Err(Error::InvalidInput("convergent_select needs horizon ≥ 2".into()));
    }
    Ok(pair_select(sierpinski_coloring(e), &NatStream::naturals(), horizon)?.output)
}

/// A Sierpiński-homogeneous index set inside `take(x, N)`; its points are
/// monotone in the order, so discrete in the order topology.
pub fn nwd_select<T: 'static>(e: &OrderedEnumeration<T>, x: &NatStream, horizon: u64) -> Result<FinSet> {
    if horizon < 2 {
        return Err(Error::InvalidInput("nwd_select needs horizon ≥ 2".into()));
    }
    Ok(pair_select(sierpinski_coloring(e), x, horizon)?.output)
}

/// A checked claim about a selector's output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

impl Certificate {
    pub fn new(name: impl Into<String>, holds: bool, detail: impl Into<String>) -> Self {
        Certificate { name: name.into(), holds, detail: detail.into() }
    }
}

/// The output of a gallery run.
#[derive(Clone, Debug)]
pub struct GalleryReport {
    pub instance: String,
    pub report: SelectorReport,
    pub certificates: Vec<Certificate>,
}

/// Registered gallery instances.
pub const GALLERY: [&str; 4] = ["cy", "woq", "converge", "nwd"];

/// `y = 1, 2, 4, 8, …`.
pub fn gallery_y() -> NatStream {
    NatStream::powers(2)
}

fn monotone_certificates(e: &OrderedEnumeration<Rational>, h: &FinSet, up: &str, down: &str) -> Vec<Certificate> {
    let inc = e.increasing_on(h);
    let dec = e.decreasing_on(h);
    let pts: Vec<String> = h.iter().map(|n| e.point(n).to_string()).collect();
    let detail = format!("points {}", pts.join(" "));
    vec![
        Certificate::new("monotone", inc || dec, detail),
        Certificate::new(
            "order-type",
            inc || dec,
            match (inc, dec) {
                (true, false) => up.to_string(),
                (false, true) => down.to_string(),
                (true, true) => format!("{up} and {down}"),
                (false, false) => "not monotone".to_string(),
            },
        ),
    ]
}

/// Runs a gallery instance at horizon `N`.
pub fn run_gallery(name: &str, horizon: u64) -> Result<GalleryReport> {
    if horizon < 2 {
        return Err(Error::InvalidInput("gallery runs need horizon ≥ 2".into()));
    }
    let nat = NatStream::naturals();
    let (report, certificates) = match name {
        "cy" => {
            let y = gallery_y();
            let r = pair_select(cy_coloring(&y), &nat, horizon)?;
            let member = cy_member(&y, &r.output);
            let detail = match (member, r.verdict) {
                (true, _) => "gap criterion holds".to_string(),
                (false, Verdict::Hom1) => "1-homogeneous; only finite sets can be".to_string(),
                (false, v) => format!("gap criterion fails on a {} set", v.as_str()),
            };
            let certs = vec![Certificate::new("cy-member", member || r.verdict == Verdict::Hom1, detail)];
            (r, certs)
        }
        "woq" | "nwd" => {
            let e = OrderedEnumeration::stern_brocot();
            let r = pair_select(sierpinski_coloring(&e), &nat, horizon)?;
            let certs = if name == "woq" {
                monotone_certificates(&e, &r.output, "well-ordered", "reverse well-ordered")
            } else {
                monotone_certificates(&e, &r.output, "increasing, discrete", "decreasing, discrete")
            };
            (r, certs)
        }
        "converge" => {
            let e = OrderedEnumeration::alternating();
            let r = pair_select(sierpinski_coloring(&e), &nat, horizon)?;
            let mut certs = monotone_certificates(&e, &r.output, "increasing", "decreasing");
            let gaps = e.gaps(&r.output);
            let total: Rational = gaps.iter().copied().sum();
            let span = match (r.output.min(), r.output.max()) {
                (Some(a), Some(b)) => abs_diff(e.point(a), e.point(b)),
                _ => Ratio::from_integer(0),
            };
            certs.push(Certificate::new(
                "total-variation",
                total == span,
                format!("sum of gaps {total}, |last - first| {span}"),
            ));
            let last = gaps.last().copied().unwrap_or_else(|| Ratio::from_integer(0));
            certs.push(Certificate::new("last-gap", true, format!("{last}")));
            (r, certs)
        }
        _ => {
            return Err(Error::InvalidInput(format!(
                "unknown gallery instance {name:?}; expected one of {}",
                GALLERY.join(", ")
            )))
        }
    };
    Ok(GalleryReport { instance: name.to_string(), report, certificates })
}
