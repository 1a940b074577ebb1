//! Borel codes as finite labeled trees.
//!
//! A node is a finite sequence of naturals. A leaf `s` codes the basic open
//! set `t(last(s))` (the root leaf codes `t(0)`, the whole space). A node
//! labeled 0 with children codes the union of what its children code; a
//! node labeled 1 has the single child `s⌢0`, labeled 0, and codes its
//! complement.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};

/// `t(n)`: the binary digits of `n + 1` without the leading 1.
pub fn basic_open(n: u64) -> Vec<bool> {
    let v = u128::from(n) + 1;
    let len = 127 - v.leading_zeros();
    (0..len).rev().map(|i| v >> i & 1 == 1).collect()
}

/// The inverse of [`basic_open`], if the index fits in a `u64`.
pub fn basic_open_index(w: &[bool]) -> Option<u64> {
    if w.len() > 63 {
        return None;
    }
    let v = w.iter().fold(1u64, |acc, &b| acc << 1 | u64::from(b));
    Some(v - 1)
}

/// Parses a string of `0`/`1` characters.
pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::Parse(format!("bit string may only contain 0 and 1, found {c:?}"))),
        })
        .collect()
}

pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// A finite labeled tree, stored from its root. Children are keyed by the
/// coordinate that extends the parent's sequence.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LabeledTree {
    pub label: bool,
    pub children: BTreeMap<u64, LabeledTree>,
}

impl fmt::Debug for LabeledTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

impl fmt::Display for LabeledTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

impl LabeledTree {
    pub fn leaf(label: bool) -> LabeledTree {
        LabeledTree { label, children: BTreeMap::new() }
    }

    /// The whole space: a root leaf.
    pub fn whole() -> LabeledTree {
        LabeledTree::leaf(false)
    }

    /// The empty set: the complement of the whole space.
    pub fn empty_set() -> LabeledTree {
        LabeledTree::whole().complement()
    }

    /// A 0-node over the given children.
    pub fn union<I: IntoIterator<Item = (u64, LabeledTree)>>(children: I) -> LabeledTree {
        LabeledTree { label: false, children: children.into_iter().collect() }
    }

    /// The cylinder `[w]`, as a union with the single leaf `⟨index(w)⟩`.
    pub fn cylinder(w: &[bool]) -> Result<LabeledTree> {
        let n = basic_open_index(w).ok_or_else(|| Error::TooLarge { what: format!("cylinder of length {}", w.len()) })?;
        Ok(LabeledTree::union([(n, LabeledTree::leaf(false))]))
    }

    /// Builds a tree from `(sequence, label)` pairs. The sequences must be
    /// distinct and closed under prefixes, and include the root.
    pub fn from_nodes(nodes: &[(Vec<u64>, bool)]) -> Result<LabeledTree> {
        let labels: HashMap<&[u64], bool> = nodes.iter().map(|(s, l)| (s.as_slice(), *l)).collect();
        if labels.len() != nodes.len() {
            return Err(Error::InvalidTree("repeated node".into()));
        }
        if let Some((s, _)) = nodes.iter().find(|(s, _)| !s.is_empty() && !labels.contains_key(&s[..s.len() - 1])) {
            return Err(Error::InvalidTree(format!("node {s:?} has no parent")));
        }
        let root = *labels.get([].as_slice()).ok_or_else(|| Error::InvalidTree("missing root".into()))?;
        let mut tree = LabeledTree::leaf(root);
        let mut sorted: Vec<&(Vec<u64>, bool)> = nodes.iter().filter(|(s, _)| !s.is_empty()).collect();
        sorted.sort_by_key(|(s, _)| s.len());
        for (s, l) in sorted {
            let (last, parent) = s.split_last().expect("nonempty");
            let slot = parent.iter().fold(&mut tree, |t, k| t.children.get_mut(k).expect("parent inserted first"));
            slot.children.insert(*last, LabeledTree::leaf(*l));
        }
        Ok(tree)
    }

    /// Every node with its label, in preorder.
    pub fn nodes(&self) -> Vec<(Vec<u64>, bool)> {
        let mut out = Vec::new();
        let mut stack = vec![(Vec::new(), self)];
        while let Some((path, t)) = stack.pop() {
            for (&k, c) in t.children.iter().rev() {
                let mut p = path.clone();
                p.push(k);
                stack.push((p, c));
            }
            out.push((path, t.label));
        }
        out
    }

    pub fn size(&self) -> usize {
        1 + self.children.values().map(LabeledTree::size).sum::<usize>()
    }

    /// Length of the longest node sequence.
    pub fn depth(&self) -> usize {
        self.children.values().map(|c| 1 + c.depth()).max().unwrap_or(0)
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// The subtree at `path`, re-rooted.
    pub fn subtree(&self, path: &[u64]) -> Option<&LabeledTree> {
        path.iter().try_fold(self, |t, k| t.children.get(k))
    }

    /// The child condition on every 1-labeled node. Prefix closure and
    /// finiteness hold by construction.
    pub fn validate(&self) -> bool {
        if self.label {
            let only_zero = self.children.len() == 1 && self.children.get(&0).is_some_and(|c| !c.label);
            if !only_zero {
                return false;
            }
        }
        self.children.values().all(LabeledTree::validate)
    }

    /// `Γ`: swaps the code of a set for the code of its complement.
    pub fn complement(&self) -> LabeledTree {
        if self.label {
            self.children.get(&0).cloned().unwrap_or_else(LabeledTree::whole)
        } else {
            LabeledTree { label: true, children: BTreeMap::from([(0, self.clone())]) }
        }
    }

    /// Longest basic open string any leaf needs.
    pub fn prefix_needed(&self) -> usize {
        fn go(t: &LabeledTree, code: u64) -> usize {
            if t.is_leaf() {
                basic_open(code).len()
            } else {
                t.children.iter().map(|(&k, c)| go(c, k)).max().unwrap_or(0)
            }
        }
        go(self, 0)
    }

    pub fn to_json(&self) -> Value {
        let children: Vec<Value> = self
            .children
            .iter()
            .enumerate()
            .map(|(pos, (&k, c))| if pos as u64 == k { c.to_json() } else { json!({"n": k, "tree": c.to_json()}) })
            .collect();
        json!([u8::from(self.label), children])
    }

    /// Reads `[label, [child, …]]`. A child written as a plain tree takes
    /// its position in the list as its coordinate; `{"n": k, "tree": …}`
    /// gives the coordinate explicitly. Coordinates must increase.
    pub fn from_json(v: &Value) -> Result<LabeledTree> {
        let bad = |why: &str| Error::Parse(format!("tree {v}: {why}"));
        let pair = v.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("expected [label, [children]]"))?;
        let label = match pair[0].as_u64() {
            Some(0) => false,
            Some(1) => true,
            _ => return Err(bad("label must be 0 or 1")),
        };
        let kids = pair[1].as_array().ok_or_else(|| bad("children must be a list"))?;
        let mut children = BTreeMap::new();
        let mut last = None;
        for (pos, kid) in kids.iter().enumerate() {
            let (k, sub) = match kid {
                Value::Object(m) => {
                    let k = m.get("n").and_then(Value::as_u64).ok_or_else(|| bad("child object needs \"n\""))?;
                    let t = m.get("tree").ok_or_else(|| bad("child object needs \"tree\""))?;
                    (k, LabeledTree::from_json(t)?)
                }
                _ => (pos as u64, LabeledTree::from_json(kid)?),
            };
            if last.is_some_and(|l| k <= l) {
                return Err(bad("child coordinates must increase"));
            }
            last = Some(k);
            children.insert(k, sub);
        }
        Ok(LabeledTree { label, children })
    }

    pub fn parse(s: &str) -> Result<LabeledTree> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        LabeledTree::from_json(&v)
    }
}

fn check_valid(t: &LabeledTree) -> Result<()> {
    if t.validate() {
        Ok(())
    } else {
        Err(Error::InvalidTree(format!("{t} breaks the complement-node condition")))
    }
}

fn leaf_value(x: &[bool], code: u64) -> Result<bool> {
    let w = basic_open(code);
    if w.len() > x.len() {
        return Err(Error::PrefixTooShort { have: x.len(), need: w.len() });
    }
    Ok(x.starts_with(&w))
}

/// `labelRun`: the labeling `S` on the nodes of `t`, computed bottom-up.
/// The result has the shape of `t` with `S` as labels.
pub fn label_run(x: &[bool], t: &LabeledTree) -> Result<LabeledTree> {
    check_valid(t)?;
    // explicit post-order so deep trees do not recurse
    enum Step<'a> {
        Enter(&'a LabeledTree, u64),
        Exit(&'a LabeledTree, u64),
    }
    let mut stack = vec![Step::Enter(t, 0)];
    let mut done: Vec<(u64, LabeledTree)> = Vec::new();
    while let Some(step) = stack.pop() {
        match step {
            Step::Enter(node, code) => {
                stack.push(Step::Exit(node, code));
                for (&k, c) in node.children.iter().rev() {
                    stack.push(Step::Enter(c, k));
                }
            }
            Step::Exit(node, code) => {
                let kids = done.split_off(done.len() - node.children.len());
                let value = if node.is_leaf() {
                    leaf_value(x, code)?
                } else if node.label {
                    !kids[0].1.label
                } else {
                    kids.iter().any(|(_, s)| s.label)
                };
                done.push((code, LabeledTree { label: value, children: kids.into_iter().collect() }));
            }
        }
    }
    Ok(done.pop().expect("root evaluated").1)
}

/// The `S`-label of one node, evaluated top-down with memoization. Agrees
/// with [`label_run`] on every node.
pub fn label_at(x: &[bool], t: &LabeledTree, path: &[u64]) -> Result<bool> {
    check_valid(t)?;
    if t.subtree(path).is_none() {
        return Err(Error::InvalidInput(format!("no node {path:?}")));
    }
    let mut memo: HashMap<Vec<u64>, bool> = HashMap::new();
    fn go(x: &[bool], t: &LabeledTree, path: &mut Vec<u64>, memo: &mut HashMap<Vec<u64>, bool>) -> Result<bool> {
        if let Some(&v) = memo.get(path) {
            return Ok(v);
        }
        let node = t.subtree(path).expect("path exists");
        let v = if node.is_leaf() {
            leaf_value(x, path.last().copied().unwrap_or(0))?
        } else if node.label {
            path.push(0);
            let v = go(x, t, path, memo)?;
            path.pop();
            !v
        } else {
            let mut any = false;
            let keys: Vec<u64> = node.children.keys().copied().collect();
            for k in keys {
                path.push(k);
                let v = go(x, t, path, memo);
                path.pop();
                // every leaf is still checked for a long enough prefix
                any |= v?;
            }
            any
        };
        memo.insert(path.clone(), v);
        Ok(v)
    }
    go(x, t, &mut path.to_vec(), &mut memo)
}

/// Whether `x` lies in the set coded by `t`: the root label of
/// [`label_run`], computed without materializing the other labels.
pub fn member(x: &[bool], t: &LabeledTree) -> Result<bool> {
    check_valid(t)?;
    fn go(x: &[bool], t: &LabeledTree, code: u64) -> Result<bool> {
        if t.is_leaf() {
            leaf_value(x, code)
        } else if t.label {
            Ok(!go(x, &t.children[&0], 0)?)
        } else {
            let mut any = false;
            for (&k, c) in &t.children {
                any |= go(x, c, k)?;
            }
            Ok(any)
        }
    }
    go(x, t, 0)
}

/// `Γ(T)`.
pub fn complement(t: &LabeledTree) -> LabeledTree {
    t.complement()
}

/// A code for a function `2^ℕ → 2^ℕ`: bit `n` of the image is membership in
/// the set coded by `coords[n]`, or by `default` past the listed ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuncCode {
    pub coords: Vec<LabeledTree>,
    pub default: LabeledTree,
}

impl FuncCode {
    /// Listed coordinates, then the empty set.
    pub fn new(coords: Vec<LabeledTree>) -> FuncCode {
        FuncCode { coords, default: LabeledTree::empty_set() }
    }

    pub fn coord(&self, n: usize) -> &LabeledTree {
        self.coords.get(n).unwrap_or(&self.default)
    }

    pub fn validate(&self) -> bool {
        self.default.validate() && self.coords.iter().all(LabeledTree::validate)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "coords": self.coords.iter().map(LabeledTree::to_json).collect::<Vec<_>>(),
            "default": self.default.to_json(),
        })
    }

    /// Reads `{"coords": [tree, …], "default": tree}`; `default` may be
    /// omitted. A bare list of trees is also accepted.
    pub fn from_json(v: &Value) -> Result<FuncCode> {
        let (coords, default) = match v {
            Value::Array(a) => (a.as_slice(), None),
            Value::Object(m) => {
                let c = m.get("coords").and_then(Value::as_array).ok_or_else(|| {
                    Error::Parse("function code needs a \"coords\" list".into())
                })?;
                (c.as_slice(), m.get("default"))
            }
            _ => return Err(Error::Parse("function code must be an object or a list".into())),
        };
        let coords = coords.iter().map(LabeledTree::from_json).collect::<Result<Vec<_>>>()?;
        let default = default.map(LabeledTree::from_json).transpose()?.unwrap_or_else(LabeledTree::empty_set);
        Ok(FuncCode { coords, default })
    }

    pub fn parse(s: &str) -> Result<FuncCode> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        FuncCode::from_json(&v)
    }
}

/// `Ω(x, F)↾m`.
pub fn omega_eval(x: &[bool], f: &FuncCode, m: usize) -> Result<Vec<bool>> {
    (0..m).map(|n| member(x, f.coord(n))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> Vec<bool> {
        parse_bits(s).unwrap()
    }

    fn two_cylinders() -> LabeledTree {
        LabeledTree::union([(3, LabeledTree::whole()), (5, LabeledTree::whole())])
    }

    #[test]
    fn enumeration() {
        let words: Vec<String> = (0..7).map(|n| format_bits(&basic_open(n))).collect();
        assert_eq!(words, ["", "0", "1", "00", "01", "10", "11"]);
        for n in 0..500 {
            assert_eq!(basic_open_index(&basic_open(n)), Some(n));
        }
        assert_eq!(basic_open(u64::MAX).len(), 64);
    }

    #[test]
    fn validate_examples() {
        assert!(LabeledTree::whole().validate());
        assert!(LabeledTree::from_nodes(&[(vec![], true), (vec![0], false)]).unwrap().validate());
        let two = LabeledTree::from_nodes(&[(vec![], true), (vec![0], false), (vec![1], false)]).unwrap();
        assert!(!two.validate());
        let wrong_child = LabeledTree::from_nodes(&[(vec![], true), (vec![1], false)]).unwrap();
        assert!(!wrong_child.validate());
        assert!(LabeledTree::from_nodes(&[(vec![], false), (vec![1, 2], false)]).is_err());
        assert!(LabeledTree::from_nodes(&[(vec![0], false)]).is_err());
    }

    #[test]
    fn label_run_examples() {
        let x = bits("0110");
        assert!(member(&x, &LabeledTree::whole()).unwrap());
        assert!(!member(&x, &LabeledTree::whole().complement()).unwrap());
        let t = two_cylinders();
        assert!(!member(&bits("01"), &t).unwrap());
        assert!(member(&bits("00"), &t).unwrap());
        assert!(member(&bits("10"), &t).unwrap());
        assert_eq!(member(&bits("0"), &t), Err(Error::PrefixTooShort { have: 1, need: 2 }));
        for w in ["00", "01", "10", "11"] {
            assert_eq!(member(&bits(w), &t).unwrap(), label_run(&bits(w), &t).unwrap().label);
        }
        let s = label_run(&bits("00"), &t).unwrap();
        assert_eq!(s.children[&3].label, true);
        assert_eq!(s.children[&5].label, false);
    }

    #[test]
    fn complement_unfolds() {
        let leaf = LabeledTree::whole();
        assert_eq!(leaf.complement(), LabeledTree::from_nodes(&[(vec![], true), (vec![0], false)]).unwrap());
        let t = two_cylinders();
        assert_eq!(t.complement().complement(), t);
        assert!(t.complement().validate());
        for w in ["00", "01", "10", "11"] {
            assert_ne!(member(&bits(w), &t).unwrap(), member(&bits(w), &t.complement()).unwrap());
        }
    }

    #[test]
    fn top_down_agrees() {
        let t = LabeledTree::union([(0, two_cylinders().complement()), (4, LabeledTree::whole())]);
        for w in ["00", "01", "10", "11"] {
            let x = bits(w);
            let s = label_run(&x, &t).unwrap();
            for (path, label) in s.nodes() {
                assert_eq!(label_at(&x, &t, &path).unwrap(), label, "{w} {path:?}");
            }
        }
    }

    #[test]
    fn omega_examples() {
        let whole = LabeledTree::whole();
        let f = FuncCode::new(vec![whole.clone(); 3]);
        assert_eq!(format_bits(&omega_eval(&bits("0"), &f, 3).unwrap()), "111");
        let alt = FuncCode::new(vec![whole.clone(), whole.complement(), whole.clone(), whole.complement()]);
        assert_eq!(format_bits(&omega_eval(&bits("0"), &alt, 4).unwrap()), "1010");
        let zeros = FuncCode::new((0..3).map(|n| LabeledTree::cylinder(&vec![false; n]).unwrap()).collect());
        assert_eq!(format_bits(&omega_eval(&bits("000"), &zeros, 3).unwrap()), "111");
        assert_eq!(format_bits(&omega_eval(&bits("010"), &zeros, 3).unwrap()), "110");
        assert_eq!(format_bits(&omega_eval(&bits("0"), &alt, 6).unwrap()), "101000");
    }

    #[test]
    fn json_round_trip() {
        let t = LabeledTree::parse(r#"[0,[{"n":3,"tree":[0,[]]},{"n":5,"tree":[0,[]]}]]"#).unwrap();
        assert_eq!(t, two_cylinders());
        assert_eq!(LabeledTree::from_json(&t.to_json()).unwrap(), t);
        let pos = LabeledTree::parse("[1,[[0,[[0,[]],[0,[]]]]]]").unwrap();
        assert_eq!(pos.nodes().len(), 4);
        assert_eq!(LabeledTree::parse(&pos.to_json().to_string()).unwrap(), pos);
        assert!(LabeledTree::parse("[2,[]]").is_err());
        assert!(LabeledTree::parse(r#"[0,[{"n":3,"tree":[0,[]]},{"n":1,"tree":[0,[]]}]]"#).is_err());
        let f = FuncCode::parse(r#"{"coords":[[0,[]]]}"#).unwrap();
        assert_eq!(f.default, LabeledTree::empty_set());
        assert_eq!(FuncCode::from_json(&f.to_json()).unwrap(), f);
    }
}
