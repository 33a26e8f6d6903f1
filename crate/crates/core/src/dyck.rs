//! Prefix words, the cyclic 2-Gray code over them, and the correspondence
//! between Dyck words and plane-tree shapes.
//!
//! A prefix word in `D(m, k)` has `m` ones and `k` zeros and no prefix with
//! more zeros than ones. `D(m, m)` is the set of Dyck words of length `2m`.
//! The listing produced here is defined by
//!
//! ```text
//! D(m, 0) = <(1)^m>
//! D(m, m) = D(m, m-1) . (0)                       m > 0
//! D(m, k) = D(m-1, k) . (1)  ++  rev(D(m, k-1)) . (0)   m > k > 0
//! ```
//!
//! where `. (x)` appends `x` to every word. Successive words, including last
//! and first, differ in exactly two positions.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::trees::Shape;

const BLOCK: usize = 64;

/// A binary word with the prefix property, stored packed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrefixWord {
    len: usize,
    ones: usize,
    blocks: Vec<u64>,
}

impl PrefixWord {
    /// The empty word (the shape of the single-vertex tree).
    pub fn empty() -> Self {
        PrefixWord { len: 0, ones: 0, blocks: Vec::new() }
    }

    /// Builds a word from `true` = 1 / `false` = 0 symbols, checking the
    /// prefix property.
    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Result<Self> {
        let mut w = PrefixWord::empty();
        for (i, bit) in bits.into_iter().enumerate() {
            w.push_unchecked(bit);
            if w.zeros() > w.ones {
                return Err(Error::InvalidWord(format!("prefix of length {} has more 0s than 1s", i + 1)));
            }
        }
        Ok(w)
    }

    /// Builds a word from `0`/`1` digits.
    pub fn from_digits(digits: &[u8]) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d > 1) {
            return Err(Error::InvalidWord(format!("symbol {d} is not 0 or 1")));
        }
        Self::from_bools(digits.iter().map(|&d| d == 1))
    }

    fn push_unchecked(&mut self, bit: bool) {
        if self.len.is_multiple_of(BLOCK) {
            self.blocks.push(0);
        }
        if bit {
            self.blocks[self.len / BLOCK] |= 1 << (self.len % BLOCK);
            self.ones += 1;
        }
        self.len += 1;
    }

    fn from_buffer(buf: &[bool]) -> Self {
        let mut w = PrefixWord { len: 0, ones: 0, blocks: Vec::with_capacity(buf.len().div_ceil(BLOCK)) };
        for &b in buf {
            w.push_unchecked(b);
        }
        w
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of 1s (`m`).
    pub fn ones(&self) -> usize {
        self.ones
    }

    /// Number of 0s (`k`).
    pub fn zeros(&self) -> usize {
        self.len - self.ones
    }

    pub fn is_dyck(&self) -> bool {
        self.ones == self.zeros()
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        (i < self.len).then(|| self.blocks[i / BLOCK] >> (i % BLOCK) & 1 == 1)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.blocks[i / BLOCK] >> (i % BLOCK) & 1 == 1)
    }

    pub fn to_digits(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    /// Number of positions where the two words differ; `None` when the
    /// lengths differ.
    pub fn hamming(&self, other: &PrefixWord) -> Option<usize> {
        (self.len == other.len)
            .then(|| self.blocks.iter().zip(&other.blocks).map(|(x, y)| (x ^ y).count_ones() as usize).sum())
    }
}

impl fmt::Display for PrefixWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, b) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(if b { "1" } else { "0" })?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for PrefixWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrefixWord{self}")
    }
}

/// Accepts `(1,0,1,0)`, with optional spaces; `()` is the empty word.
impl FromStr for PrefixWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected parenthesised word, got {s:?}")))?;
        if inner.trim().is_empty() {
            return Ok(PrefixWord::empty());
        }
        let digits = inner
            .split(',')
            .map(|t| match t.trim() {
                "0" => Ok(0),
                "1" => Ok(1),
                other => Err(Error::Parse(format!("bad symbol {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        PrefixWord::from_digits(&digits)
    }
}

#[derive(Clone, Copy, Debug)]
struct Frame {
    m: usize,
    k: usize,
    rev: bool,
    next: u8,
}

impl Frame {
    fn arity(&self) -> u8 {
        match (self.m, self.k) {
            (_, 0) => 0,
            (m, k) if m == k => 1,
            _ => 2,
        }
    }

    /// The `idx`-th sublist of this frame and the symbol it appends.
    fn child(&self, idx: u8) -> (Frame, bool) {
        let Frame { m, k, rev, .. } = *self;
        let frame = |m, k, rev| Frame { m, k, rev, next: 0 };
        if m == k {
            return (frame(m, k - 1, rev), false);
        }
        match (rev, idx) {
            (false, 0) => (frame(m - 1, k, false), true),
            (false, _) => (frame(m, k - 1, true), false),
            (true, 0) => (frame(m, k - 1, false), false),
            (true, _) => (frame(m - 1, k, true), true),
        }
    }
}

/// Streaming iterator over `D(m, k)` in Gray order.
///
/// The recursion is unrolled onto an explicit stack of depth `m + k`.
#[derive(Clone, Debug)]
pub struct DyckGray {
    m: usize,
    k: usize,
    stack: Vec<Frame>,
    buf: Vec<bool>,
    started: bool,
}

impl DyckGray {
    pub fn new(m: usize, k: usize) -> Result<Self> {
        if k > m {
            return Err(Error::InvalidArgument(format!("need 0 <= k <= m, got m={m}, k={k}")));
        }
        Ok(DyckGray { m, k, stack: Vec::with_capacity(m + k + 1), buf: vec![false; m + k], started: false })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    fn descend(&mut self) {
        loop {
            let top = self.stack.last_mut().expect("descend on empty stack");
            if top.arity() == 0 {
                let m = top.m;
                self.buf[..m].iter_mut().for_each(|b| *b = true);
                return;
            }
            let (child, sym) = top.child(top.next);
            let pos = top.m + top.k - 1;
            top.next += 1;
            self.buf[pos] = sym;
            self.stack.push(child);
        }
    }
}

impl Iterator for DyckGray {
    type Item = PrefixWord;

    fn next(&mut self) -> Option<PrefixWord> {
        if !self.started {
            self.started = true;
            self.stack.push(Frame { m: self.m, k: self.k, rev: false, next: 0 });
            self.descend();
            return Some(PrefixWord::from_buffer(&self.buf));
        }
        loop {
            self.stack.pop();
            let top = self.stack.last()?;
            if top.next < top.arity() {
                self.descend();
                return Some(PrefixWord::from_buffer(&self.buf));
            }
        }
    }
}

/// Materialises `D(m, k)` in Gray order.
pub fn dyck_gray(m: usize, k: usize) -> Result<Vec<PrefixWord>> {
    Ok(DyckGray::new(m, k)?.collect())
}

/// First word of `D(m, k)`: `(1,0)^k (1)^(m-k)`.
pub fn first_word(m: usize, k: usize) -> Result<PrefixWord> {
    if k > m {
        return Err(Error::InvalidArgument(format!("need 0 <= k <= m, got m={m}, k={k}")));
    }
    let bits = (0..k).flat_map(|_| [true, false]).chain((0..m - k).map(|_| true));
    PrefixWord::from_bools(bits)
}

/// Last word of `D(m, k)` according to the three boundary cases.
pub fn last_word(m: usize, k: usize) -> Result<PrefixWord> {
    if k > m {
        return Err(Error::InvalidArgument(format!("need 0 <= k <= m, got m={m}, k={k}")));
    }
    let mut bits = Vec::with_capacity(m + k);
    if k == 0 {
        bits.extend((0..m).map(|_| true));
    } else if k == m && m > 1 {
        (0..m - 2).for_each(|_| bits.extend([true, false]));
        bits.extend([true, true, false, false]);
    } else {
        (0..k - 1).for_each(|_| bits.extend([true, false]));
        bits.extend((0..m - k + 1).map(|_| true));
        bits.push(false);
    }
    PrefixWord::from_bools(bits)
}

/// Dyck word of a shape: 1 for each step down to a child, 0 for each step
/// back up, children visited left to right.
pub fn word_from_shape(shape: &Shape) -> PrefixWord {
    let mut bits = Vec::with_capacity(2 * shape.len().saturating_sub(1));
    let mut stack = vec![(0usize, 0usize)];
    while let Some(&mut (v, ref mut next)) = stack.last_mut() {
        if let Some(&c) = shape.children(v).get(*next) {
            *next += 1;
            bits.push(true);
            stack.push((c, 0));
        } else {
            stack.pop();
            if !stack.is_empty() {
                bits.push(false);
            }
        }
    }
    PrefixWord::from_buffer(&bits)
}

/// Inverse of [`word_from_shape`]; vertices are numbered in preorder.
pub fn shape_from_word(word: &PrefixWord) -> Result<Shape> {
    if !word.is_dyck() {
        return Err(Error::InvalidWord(format!("{word} has {} ones and {} zeros", word.ones(), word.zeros())));
    }
    let n = word.ones() + 1;
    let mut children = vec![Vec::new(); n];
    let mut parent = vec![0usize; n];
    let (mut cur, mut next) = (0usize, 1usize);
    for bit in word.iter() {
        if bit {
            children[cur].push(next);
            parent[next] = cur;
            cur = next;
            next += 1;
        } else {
            cur = parent[cur];
        }
    }
    Shape::from_children(children)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> PrefixWord {
        s.parse().unwrap()
    }

    /// Direct transcription of the three-case recursion, used as oracle.
    fn recursive(m: usize, k: usize) -> Vec<Vec<u8>> {
        if k == 0 {
            return vec![vec![1; m]];
        }
        let suffixed = |mut l: Vec<Vec<u8>>, s: u8| {
            l.iter_mut().for_each(|t| t.push(s));
            l
        };
        if m == k {
            return suffixed(recursive(m, k - 1), 0);
        }
        let mut out = suffixed(recursive(m - 1, k), 1);
        let mut rev = recursive(m, k - 1);
        rev.reverse();
        out.extend(suffixed(rev, 0));
        out
    }

    #[test]
    fn iterator_matches_recursion() {
        for m in 0..=9 {
            for k in 0..=m {
                let got: Vec<Vec<u8>> = DyckGray::new(m, k).unwrap().map(|w| w.to_digits()).collect();
                assert_eq!(got, recursive(m, k), "m={m} k={k}");
            }
        }
    }

    #[test]
    fn small_lists() {
        assert_eq!(dyck_gray(3, 0).unwrap(), vec![w("(1,1,1)")]);
        assert_eq!(dyck_gray(1, 1).unwrap(), vec![w("(1,0)")]);
        assert_eq!(dyck_gray(2, 2).unwrap(), vec![w("(1,0,1,0)"), w("(1,1,0,0)")]);
        assert_eq!(dyck_gray(0, 0).unwrap(), vec![PrefixWord::empty()]);
    }

    #[test]
    fn rejects_k_above_m() {
        assert!(matches!(DyckGray::new(2, 3), Err(Error::InvalidArgument(_))));
        assert!(first_word(1, 2).is_err());
    }

    #[test]
    fn prefix_property_enforced() {
        assert!(matches!(PrefixWord::from_digits(&[0, 1]), Err(Error::InvalidWord(_))));
        assert!(PrefixWord::from_digits(&[1, 2]).is_err());
        assert!("(1,0,0)".parse::<PrefixWord>().is_err());
        assert_eq!(w("(1,1,0)").ones(), 2);
    }

    #[test]
    fn packing_spans_blocks() {
        let bits: Vec<bool> = (0..150).map(|i| i % 3 != 2).collect();
        let word = PrefixWord::from_bools(bits.clone()).unwrap();
        assert_eq!(word.iter().collect::<Vec<_>>(), bits);
        let mut flipped = bits.clone();
        flipped[70] = !flipped[70];
        flipped[140] = !flipped[140];
        let other = PrefixWord::from_bools(flipped).unwrap();
        assert_eq!(word.hamming(&other), Some(2));
    }

    #[test]
    fn shape_words() {
        // root with one child, which has two leaf children
        let s = Shape::from_children(vec![vec![1], vec![2, 3], vec![], vec![]]).unwrap();
        assert_eq!(word_from_shape(&s), w("(1,1,0,1,0,0)"));
        assert_eq!(shape_from_word(&w("(1,1,0,1,0,0)")).unwrap(), s);

        assert_eq!(word_from_shape(&Shape::single()), PrefixWord::empty());
        assert_eq!(shape_from_word(&PrefixWord::empty()).unwrap(), Shape::single());

        let star3 = Shape::from_children(vec![vec![1, 2, 3], vec![], vec![], vec![]]).unwrap();
        assert_eq!(word_from_shape(&star3), w("(1,0,1,0,1,0)"));
        let star2 = shape_from_word(&w("(1,0,1,0)")).unwrap();
        assert_eq!(star2.children(0), &[1, 2]);
    }

    #[test]
    fn shape_from_non_dyck_fails() {
        assert!(matches!(shape_from_word(&w("(1,1,0)")), Err(Error::InvalidWord(_))));
    }
}
