//! The shape-partitioned cyclic 3-Gray code over all β(a,b)-trees on `n`
//! vertices.
//!
//! Shapes are visited in the order of the Dyck listing `D(n-1, n-1)`; within
//! a shape the labelings follow the cyclic 1-Gray list rotated to start at
//! the all-`a` labeling. Block boundaries therefore cost two shape bits and
//! one label.

use serde::Serialize;

use crate::dyck::{shape_from_word, DyckGray, PrefixWord};
use crate::error::{Error, Result};
use crate::shapegray::{label_gray_cycle, label_gray_path, rotate_to_zero};
use crate::trees::{RootMode, Symbol, TreeCode};

/// Largest distance between consecutive codes, wraparound included.
pub const GRAY_BOUND: usize = 3;

/// Shape-part plus label-part Hamming distance; `*` only matches `*`.
pub fn distance(x: &TreeCode, y: &TreeCode) -> Result<usize> {
    if x.vertices() != y.vertices() {
        return Err(Error::InvalidArgument(format!(
            "codes on {} and {} vertices are not comparable",
            x.vertices(),
            y.vertices()
        )));
    }
    let shape = x.shape_bits().hamming(y.shape_bits()).expect("equal vertex counts give equal word lengths");
    let labels = x.labels().iter().zip(y.labels()).filter(|(p, q)| p != q).count();
    Ok(shape + labels)
}

/// Map classes described by β(a,b)-trees.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum MapClass {
    Bicubic,
    Cubic3Connected,
    CubicNonseparable,
}

impl MapClass {
    pub const ALL: [MapClass; 3] = [MapClass::Bicubic, MapClass::Cubic3Connected, MapClass::CubicNonseparable];

    /// Tree parameters `(a, b)`.
    pub fn params(self) -> (u32, u32) {
        match self {
            MapClass::Bicubic => (0, 1),
            MapClass::Cubic3Connected => (1, 1),
            MapClass::CubicNonseparable => (2, 2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MapClass::Bicubic => "bicubic",
            MapClass::Cubic3Connected => "cubic-3-connected",
            MapClass::CubicNonseparable => "cubic-nonseparable",
        }
    }

    /// Vertex count of the maps encoded by trees on `n` vertices, where the
    /// alignment is known: `2(n-1)` for bicubic maps and cubic non-separable
    /// maps (one tree edge per pair of map vertices).
    pub fn map_vertices(self, n: usize) -> Option<usize> {
        match self {
            MapClass::Bicubic | MapClass::CubicNonseparable => Some(2 * n.saturating_sub(1)),
            MapClass::Cubic3Connected => None,
        }
    }
}

impl std::str::FromStr for MapClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MapClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown map class {s:?}")))
    }
}

impl std::fmt::Display for MapClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One emitted code with its position metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeItem {
    pub index: usize,
    pub block_id: usize,
    pub code: TreeCode,
}

/// Structured export record.
#[derive(Clone, Debug, Serialize)]
pub struct CodeRecord {
    pub index: usize,
    pub shape_bits: String,
    pub labels: Vec<Symbol>,
    pub block_id: usize,
}

impl From<&CodeItem> for CodeRecord {
    fn from(item: &CodeItem) -> Self {
        CodeRecord {
            index: item.index,
            shape_bits: item.code.shape_bits().to_digits().iter().map(|d| char::from(b'0' + d)).collect(),
            labels: item.code.labels().to_vec(),
            block_id: item.block_id,
        }
    }
}

/// Which per-shape list is used.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Variant {
    /// Cyclic per-shape lists rotated to start at the all-`a` labeling.
    Cyclic,
    /// Non-cyclic per-shape lists; consecutive codes inside a block are still
    /// at distance one, block boundaries are unbounded.
    Path,
}

/// Streaming iterator over the listing.
pub struct FullGray {
    n: usize,
    a: u32,
    b: u32,
    variant: Variant,
    shapes: DyckGray,
    block: Option<(PrefixWord, std::vec::IntoIter<Vec<Symbol>>)>,
    block_id: usize,
    index: usize,
    failed: bool,
}

impl FullGray {
    pub fn new(n: usize, a: u32, b: u32) -> Result<Self> {
        Self::with_variant(n, a, b, Variant::Cyclic)
    }

    pub fn with_variant(n: usize, a: u32, b: u32, variant: Variant) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("trees have at least one vertex".into()));
        }
        if b == 0 {
            return Err(Error::Unsupported("b = 0".into()));
        }
        Ok(FullGray {
            n,
            a,
            b,
            variant,
            shapes: DyckGray::new(n - 1, n - 1)?,
            block: None,
            block_id: 0,
            index: 0,
            failed: false,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn open_block(&mut self, word: PrefixWord) -> Result<()> {
        let shape = shape_from_word(&word)?;
        let list = match self.variant {
            Variant::Cyclic => rotate_to_zero(&label_gray_cycle(&shape, self.a, self.b, RootMode::Star)?)?,
            Variant::Path => label_gray_path(&shape, self.a, self.b, RootMode::Star)?,
        };
        self.block = Some((word, list.into_tuples().into_iter()));
        Ok(())
    }
}

impl Iterator for FullGray {
    type Item = Result<CodeItem>;

    fn next(&mut self) -> Option<Result<CodeItem>> {
        if self.failed {
            return None;
        }
        loop {
            if let Some((word, labels)) = &mut self.block {
                if let Some(l) = labels.next() {
                    let item = TreeCode::new(word.clone(), l).map(|code| CodeItem {
                        index: self.index,
                        block_id: self.block_id - 1,
                        code,
                    });
                    self.index += 1;
                    self.failed = item.is_err();
                    return Some(item);
                }
            }
            let word = self.shapes.next()?;
            self.block_id += 1;
            if let Err(e) = self.open_block(word) {
                self.failed = true;
                return Some(Err(e));
            }
        }
    }
}

/// A materialised listing with its block boundaries.
#[derive(Clone, Debug)]
pub struct CodeList {
    n: usize,
    params: (u32, u32),
    order: Vec<TreeCode>,
    block_starts: Vec<usize>,
}

impl CodeList {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn params(&self) -> (u32, u32) {
        self.params
    }

    pub fn codes(&self) -> &[TreeCode] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Index of the first code of every shape block.
    pub fn block_starts(&self) -> &[usize] {
        &self.block_starts
    }

    /// Index ranges of the shape blocks.
    pub fn blocks(&self) -> impl Iterator<Item = std::ops::Range<usize>> + '_ {
        let ends = self.block_starts.iter().skip(1).copied().chain(std::iter::once(self.order.len()));
        self.block_starts.iter().copied().zip(ends).map(|(s, e)| s..e)
    }

    pub fn items(&self) -> impl Iterator<Item = CodeItem> + '_ {
        let mut block = 0;
        self.order.iter().enumerate().map(move |(index, code)| {
            while block + 1 < self.block_starts.len() && self.block_starts[block + 1] <= index {
                block += 1;
            }
            CodeItem { index, block_id: block, code: code.clone() }
        })
    }
}

/// The cyclic 3-Gray code over β(a,b)-trees on `n` vertices (root `*`).
///
/// Fails if any consecutive pair, or the last and first code, are further
/// apart than [`GRAY_BOUND`].
pub fn full_list(n: usize, a: u32, b: u32) -> Result<CodeList> {
    let mut order = Vec::new();
    let mut block_starts = Vec::new();
    for item in FullGray::new(n, a, b)? {
        let item = item?;
        if item.block_id == block_starts.len() {
            block_starts.push(item.index);
        }
        order.push(item.code);
    }
    for i in 0..order.len() {
        let next = (i + 1) % order.len();
        let d = distance(&order[i], &order[next])?;
        if d > GRAY_BOUND {
            return Err(Error::Internal(format!("codes {i} and {next} are at distance {d}")));
        }
    }
    Ok(CodeList { n, params: (a, b), order, block_starts })
}

/// [`full_list`] with the parameters of a map class.
pub fn map_class_list(n: usize, class: MapClass) -> Result<CodeList> {
    let (a, b) = class.params();
    full_list(n, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(s: &str) -> TreeCode {
        s.parse().unwrap()
    }

    #[test]
    fn distances() {
        assert_eq!(distance(&code("(1,1,0,0,*,1,0)"), &code("(1,0,1,0,*,0,0)")).unwrap(), 3);
        assert_eq!(distance(&code("(1,1,0,0,*,0,0)"), &code("(1,1,0,0,*,1,0)")).unwrap(), 1);
        let c = code("(1,0,*,0)");
        assert_eq!(distance(&c, &c).unwrap(), 0);
        assert!(distance(&c, &code("(*)")).is_err());
    }

    #[test]
    fn tiny_lists() {
        let one = full_list(1, 0, 1).unwrap();
        assert_eq!(one.codes(), &[code("(*)")]);
        let three = full_list(3, 0, 1).unwrap();
        let text: Vec<String> = three.codes().iter().map(ToString::to_string).collect();
        assert_eq!(text, ["(1,0,1,0,*,0,0)", "(1,1,0,0,*,0,0)", "(1,1,0,0,*,1,0)"]);
        assert_eq!(three.block_starts(), &[0, 1]);
        assert_eq!(full_list(4, 0, 1).unwrap().len(), 12);
        assert!(full_list(0, 0, 1).is_err());
        assert!(matches!(full_list(3, 1, 0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn items_carry_blocks() {
        let l = full_list(4, 0, 1).unwrap();
        let streamed: Vec<CodeItem> = FullGray::new(4, 0, 1).unwrap().map(Result::unwrap).collect();
        assert_eq!(l.items().collect::<Vec<_>>(), streamed);
        assert_eq!(l.blocks().count(), 5);
        let rec = CodeRecord::from(&streamed[0]);
        assert_eq!(rec.shape_bits, "101010");
    }

    #[test]
    fn class_lookup() {
        assert_eq!("bicubic".parse::<MapClass>().unwrap(), MapClass::Bicubic);
        assert!("planar".parse::<MapClass>().is_err());
        assert_eq!(MapClass::CubicNonseparable.params(), (2, 2));
        assert_eq!(MapClass::Bicubic.map_vertices(4), Some(6));
        assert_eq!(map_class_list(1, MapClass::Cubic3Connected).unwrap().len(), 1);
    }
}
