//! Plane-tree shapes, labelled description trees and their tuple codes.
//!
//! Vertices are always numbered in preorder (leftmost depth-first), so the
//! subtree of `v` occupies the contiguous index range
//! `v..v + subtree_size(v)` and a label tuple restricted to that range is the
//! label tuple of the subtree.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::dyck::{shape_from_word, word_from_shape, PrefixWord};
use crate::error::{Error, Result, Rule};

/// Rooted plane tree without labels.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Shape {
    children: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
    size: Vec<usize>,
}

impl Shape {
    /// The single-vertex tree.
    pub fn single() -> Self {
        Shape { children: vec![Vec::new()], parent: vec![None], size: vec![1] }
    }

    /// Builds a shape from ordered child lists. Vertex `0` is the root and
    /// the numbering must be the preorder of the tree.
    pub fn from_children(children: Vec<Vec<usize>>) -> Result<Self> {
        let n = children.len();
        if n == 0 {
            return Err(Error::MalformedTree("a tree has at least one vertex".into()));
        }
        let mut parent = vec![None; n];
        let mut expected = 1;
        let mut stack = vec![(0usize, 0usize)];
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            match children[v].get(*next) {
                Some(&c) => {
                    *next += 1;
                    if c != expected {
                        return Err(Error::MalformedTree(format!(
                            "vertex {c} reached where preorder index {expected} was expected"
                        )));
                    }
                    expected += 1;
                    parent[c] = Some(v);
                    stack.push((c, 0));
                }
                None => {
                    stack.pop();
                }
            }
        }
        if expected != n {
            return Err(Error::MalformedTree(format!("only {expected} of {n} vertices reachable from the root")));
        }
        let mut size = vec![1; n];
        for v in (1..n).rev() {
            let p = parent[v].expect("non-root vertex has a parent");
            size[p] += size[v];
        }
        Ok(Shape { children, parent, size })
    }

    pub fn from_word(word: &PrefixWord) -> Result<Self> {
        shape_from_word(word)
    }

    pub fn word(&self) -> PrefixWord {
        word_from_shape(self)
    }

    /// Number of vertices (always at least one).
    pub fn len(&self) -> usize {
        self.children.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn subtree_size(&self, v: usize) -> usize {
        self.size[v]
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.children[v].is_empty()
    }

    /// Vertices that are neither the root nor a leaf.
    pub fn internal_count(&self) -> usize {
        (1..self.len()).filter(|&v| !self.is_leaf(v)).count()
    }

    /// The subtree rooted at `v`, renumbered from zero.
    pub fn subtree(&self, v: usize) -> Shape {
        let end = v + self.size[v];
        Shape {
            children: self.children[v..end].iter().map(|cs| cs.iter().map(|c| c - v).collect()).collect(),
            parent: (v..end).map(|u| if u == v { None } else { self.parent[u].map(|p| p - v) }).collect(),
            size: self.size[v..end].to_vec(),
        }
    }
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Shape{}", self.word())
    }
}

/// One coordinate of a label tuple: an integer, or the root sentinel `*`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Symbol {
    Star,
    Value(u32),
}

impl Symbol {
    /// Reserved raw value for `*` in fixed-width encodings.
    pub const STAR_RAW: u32 = u32::MAX;

    pub fn to_raw(self) -> u32 {
        match self {
            Symbol::Star => Self::STAR_RAW,
            Symbol::Value(v) => v,
        }
    }

    pub fn from_raw(raw: u32) -> Self {
        if raw == Self::STAR_RAW {
            Symbol::Star
        } else {
            Symbol::Value(raw)
        }
    }

    pub fn value(self) -> Option<u32> {
        match self {
            Symbol::Star => None,
            Symbol::Value(v) => Some(v),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Star => f.write_str("*"),
            Symbol::Value(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for Symbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "*" => Ok(Symbol::Star),
            t => t.parse().map(Symbol::Value).map_err(|_| Error::Parse(format!("bad label {t:?}"))),
        }
    }
}

/// Serialises as a JSON number, or the string `"*"`.
impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Symbol::Star => s.serialize_str("*"),
            Symbol::Value(v) => s.serialize_u32(*v),
        }
    }
}

/// How the root label is constrained.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum RootMode {
    /// Root carries the sentinel `*`.
    Star,
    /// Root equals the sum of its children's labels.
    Sum,
    /// Root equals one more than the sum of its children's labels.
    SumPlusOne,
    /// Root obeys the rule for non-root internal vertices.
    Internal,
}

/// Outcome of [`validate`]: the first offending vertex in preorder, if any.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ValidityReport {
    pub violation: Option<(usize, Rule)>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }

    pub fn into_result(self) -> Result<()> {
        match self.violation {
            None => Ok(()),
            Some((vertex, rule)) => Err(Error::InvalidTree { vertex, rule }),
        }
    }
}

/// A shape with one label per vertex (preorder).
///
/// In [`RootMode::Star`] the stored root label is always `0` and is rendered
/// as `*`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LabeledTree {
    shape: Shape,
    labels: Vec<u32>,
    mode: RootMode,
}

impl LabeledTree {
    pub fn new(shape: Shape, mut labels: Vec<u32>, mode: RootMode) -> Result<Self> {
        if labels.len() != shape.len() {
            return Err(Error::MalformedTree(format!("{} labels for {} vertices", labels.len(), shape.len())));
        }
        if mode == RootMode::Star {
            labels[0] = 0;
        }
        Ok(LabeledTree { shape, labels, mode })
    }

    /// The single-vertex tree with label 0.
    pub fn trivial() -> Self {
        LabeledTree { shape: Shape::single(), labels: vec![0], mode: RootMode::SumPlusOne }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn mode(&self) -> RootMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_trivial(&self) -> bool {
        self.len() == 1
    }

    /// Root label; `None` in star mode.
    pub fn root(&self) -> Option<u32> {
        (self.mode != RootMode::Star).then_some(self.labels[0])
    }

    /// Number of children of the root.
    pub fn sub(&self) -> usize {
        self.shape.children(0).len()
    }

    pub fn is_irreducible(&self) -> bool {
        self.sub() == 1
    }

    pub fn children_sum(&self, v: usize) -> u32 {
        self.shape.children(v).iter().map(|&c| self.labels[c]).sum()
    }

    /// Same tree with the root re-derived for `mode`. `Internal` keeps the
    /// stored root value; a single vertex keeps its label in every integer
    /// mode.
    pub fn with_root_mode(&self, mode: RootMode) -> LabeledTree {
        let mut labels = self.labels.clone();
        if self.len() > 1 || mode == RootMode::Star {
            let sum = self.children_sum(0);
            match mode {
                RootMode::Star => labels[0] = 0,
                RootMode::Sum => labels[0] = sum,
                RootMode::SumPlusOne => labels[0] = sum + 1,
                RootMode::Internal => {}
            }
        }
        LabeledTree { shape: self.shape.clone(), labels, mode }
    }

    fn require_sum_plus_one(&self, op: &str) -> Result<()> {
        if self.mode != RootMode::SumPlusOne {
            return Err(Error::InvalidArgument(format!("{op} needs a tree in sum-plus-one root mode")));
        }
        Ok(())
    }
}

/// Checks the leaf, internal-vertex and root rules for parameters `(a, b)`.
pub fn validate(t: &LabeledTree, a: u32, b: u32) -> Result<ValidityReport> {
    let shape = &t.shape;
    if t.labels.len() != shape.len() {
        return Err(Error::MalformedTree(format!("{} labels for {} vertices", t.labels.len(), shape.len())));
    }
    let violation = (0..shape.len()).find_map(|v| {
        let label = t.labels[v];
        let sum = t.children_sum(v);
        let ok = |rule, pass: bool| (!pass).then_some((v, rule));
        if v == 0 {
            if t.mode == RootMode::Star {
                return None;
            }
            if shape.is_leaf(0) {
                return ok(Rule::Leaf, label == a);
            }
            return match t.mode {
                RootMode::Star => None,
                RootMode::Sum => ok(Rule::Root, label == sum),
                RootMode::SumPlusOne => ok(Rule::Root, label == sum + 1),
                RootMode::Internal => ok(Rule::Root, a <= label && label <= b + sum),
            };
        }
        if shape.is_leaf(v) {
            ok(Rule::Leaf, label == a)
        } else {
            ok(Rule::Internal, a <= label && label <= b + sum)
        }
    });
    Ok(ValidityReport { violation })
}

/// Labels in preorder; the root renders as `*` in star mode.
pub fn labels_preorder(t: &LabeledTree) -> Vec<Symbol> {
    t.labels
        .iter()
        .enumerate()
        .map(|(v, &l)| if v == 0 && t.mode == RootMode::Star { Symbol::Star } else { Symbol::Value(l) })
        .collect()
}

/// The `(3n-2)`-tuple: shape word followed by preorder labels with `*` at
/// the root.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TreeCode {
    shape_bits: PrefixWord,
    labels: Vec<Symbol>,
}

impl TreeCode {
    /// Checks the structural invariants (Dyck shape part, matching label
    /// count, `*` exactly at the root). Label rules are checked by [`decode`].
    pub fn new(shape_bits: PrefixWord, labels: Vec<Symbol>) -> Result<Self> {
        if !shape_bits.is_dyck() {
            return Err(Error::InvalidWord(format!("shape part {shape_bits} is not a Dyck word")));
        }
        if labels.len() != shape_bits.ones() + 1 {
            return Err(Error::MalformedTree(format!(
                "{} labels for a shape on {} vertices",
                labels.len(),
                shape_bits.ones() + 1
            )));
        }
        if labels[0] != Symbol::Star || labels[1..].contains(&Symbol::Star) {
            return Err(Error::MalformedTree("label part must have * exactly at the root".into()));
        }
        Ok(TreeCode { shape_bits, labels })
    }

    pub fn shape_bits(&self) -> &PrefixWord {
        &self.shape_bits
    }

    pub fn labels(&self) -> &[Symbol] {
        &self.labels
    }

    /// Tree vertex count `n`.
    pub fn vertices(&self) -> usize {
        self.labels.len()
    }

    /// Tuple length, `3n - 2`.
    pub fn len(&self) -> usize {
        self.shape_bits.len() + self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All `3n - 2` coordinates, shape bits first.
    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.shape_bits.iter().map(|b| Symbol::Value(u32::from(b))).chain(self.labels.iter().copied())
    }
}

impl fmt::Display for TreeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.symbols().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str(")")
    }
}

/// Parses the canonical text form, e.g. `(1,1,0,0,*,1,0)`.
impl FromStr for TreeCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected parenthesised tuple, got {s:?}")))?;
        let symbols = inner.split(',').map(str::parse).collect::<Result<Vec<Symbol>>>()?;
        if symbols.len() % 3 != 1 {
            return Err(Error::Parse(format!("tuple length {} is not of the form 3n-2", symbols.len())));
        }
        let n = symbols.len().div_ceil(3);
        let split = 2 * n - 2;
        let digits = symbols[..split]
            .iter()
            .map(|s| match s {
                Symbol::Value(d @ (0 | 1)) => Ok(*d as u8),
                other => Err(Error::Parse(format!("shape symbol {other} is not 0 or 1"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        TreeCode::new(PrefixWord::from_digits(&digits)?, symbols[split..].to_vec())
    }
}

pub fn encode(t: &LabeledTree) -> TreeCode {
    let mut labels = labels_preorder(t);
    labels[0] = Symbol::Star;
    TreeCode { shape_bits: t.shape.word(), labels }
}

/// Rebuilds the star-mode tree and checks it against `(a, b)`.
pub fn decode(code: &TreeCode, a: u32, b: u32) -> Result<LabeledTree> {
    let shape = shape_from_word(&code.shape_bits)?;
    let labels = code.labels.iter().map(|s| s.value().unwrap_or(0)).collect();
    let t = LabeledTree::new(shape, labels, RootMode::Star)?;
    validate(&t, a, b)?.into_result()?;
    Ok(t)
}

fn concat_words(parts: &[&PrefixWord]) -> Result<PrefixWord> {
    PrefixWord::from_bools(parts.iter().flat_map(|w| w.iter()))
}

/// Identifies the roots of `u` and `v`; the new root is labelled
/// `root(u) + root(v) - 1` and its children are those of `u` then `v`.
pub fn oplus(u: &LabeledTree, v: &LabeledTree) -> Result<LabeledTree> {
    u.require_sum_plus_one("oplus")?;
    v.require_sum_plus_one("oplus")?;
    if u.is_trivial() || v.is_trivial() {
        return Err(Error::InvalidArgument("oplus needs two nontrivial trees".into()));
    }
    let root = u.labels[0] + v.labels[0] - 1;
    let labels = std::iter::once(root).chain(u.labels[1..].iter().copied()).chain(v.labels[1..].iter().copied());
    let shape = shape_from_word(&concat_words(&[&u.shape.word(), &v.shape.word()])?)?;
    LabeledTree::new(shape, labels.collect(), RootMode::SumPlusOne)
}

/// `shape` hung below a new root.
fn planted(shape: &Shape) -> Result<Shape> {
    let word = shape.word();
    let bits = std::iter::once(true).chain(word.iter()).chain(std::iter::once(false));
    shape_from_word(&PrefixWord::from_bools(bits)?)
}

/// Hangs `t` below a new root: the old root gets label `i` and the new one
/// `i + 1`.
pub fn lambda(t: &LabeledTree, i: u32) -> Result<LabeledTree> {
    t.require_sum_plus_one("lambda")?;
    let root = t.labels[0];
    if i > root {
        return Err(Error::InvalidArgument(format!("lambda index {i} exceeds root label {root}")));
    }
    let shape = planted(&t.shape)?;
    let labels = [i + 1, i].into_iter().chain(t.labels[1..].iter().copied()).collect();
    LabeledTree::new(shape, labels, RootMode::SumPlusOne)
}

/// Reverse of [`lambda`] on an irreducible tree: the tree below the root's
/// only child (root re-derived) and that child's label.
pub fn unlambda(t: &LabeledTree) -> Result<(LabeledTree, u32)> {
    t.require_sum_plus_one("unlambda")?;
    if !t.is_irreducible() {
        return Err(Error::InvalidArgument("unlambda needs a root with exactly one child".into()));
    }
    let shape = t.shape.subtree(1);
    let labels = t.labels[1..].to_vec();
    let i = labels[0];
    let below = LabeledTree { shape, labels, mode: RootMode::SumPlusOne };
    let below = if below.is_trivial() { LabeledTree::trivial() } else { below.with_root_mode(RootMode::SumPlusOne) };
    Ok((below, i))
}

/// Splits a nontrivial tree into the irreducible trees whose left-to-right
/// [`oplus`] is `t`.
pub fn decompose(t: &LabeledTree) -> Result<Vec<LabeledTree>> {
    t.require_sum_plus_one("decompose")?;
    if t.is_trivial() {
        return Err(Error::InvalidArgument("the trivial tree has no decomposition".into()));
    }
    t.shape
        .children(0)
        .iter()
        .map(|&c| {
            let end = c + t.shape.subtree_size(c);
            let shape = planted(&t.shape.subtree(c))?;
            let labels = std::iter::once(t.labels[c] + 1).chain(t.labels[c..end].iter().copied()).collect();
            LabeledTree::new(shape, labels, RootMode::SumPlusOne)
        })
        .collect()
}

/// Reverse of [`decompose`]: left fold with [`oplus`].
pub fn oplus_fold(parts: &[LabeledTree]) -> Result<LabeledTree> {
    let (first, rest) = parts.split_first().ok_or_else(|| Error::InvalidArgument("empty oplus fold".into()))?;
    rest.iter().try_fold(first.clone(), |acc, t| oplus(&acc, t))
}
