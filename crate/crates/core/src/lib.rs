//! Cyclic Gray codes for β(a,b)-description trees (b ≥ 1) and the cubic
//! planar maps they encode.
//!
//! * [`dyck`]: prefix words and their cyclic 2-Gray listing.
//! * [`trees`]: shapes, labelled trees, the `(3n-2)`-tuple code.
//! * [`shapegray`]: 1-Gray codes (path and cycle) over labelings of one shape.
//! * [`fullgray`]: the shape-partitioned cyclic 3-Gray code over all trees.
//! * [`maps`]: rooted bicubic maps as rotation systems and the bijection
//!   with β(0,1)-trees.
//! * [`verify`]: brute-force oracle, Gray-property checker, exact counts.
//!
//! ```
//! use betagray::{decode, full_list, map_to_tree, tree_to_map, RootMode};
//!
//! let list = full_list(5, 0, 1)?;
//! assert_eq!(list.len(), 56);
//! for code in list.codes() {
//!     let tree = decode(code, 0, 1)?.with_root_mode(RootMode::SumPlusOne);
//!     let map = tree_to_map(&tree)?;
//!     assert_eq!(map.vertex_count(), 8);
//!     assert_eq!(map_to_tree(&map)?, tree);
//! }
//! # Ok::<(), betagray::Error>(())
//! ```

pub mod dyck;
pub mod error;
pub mod fullgray;
pub mod maps;
pub mod shapegray;
pub mod trees;
pub mod verify;

pub use dyck::{dyck_gray, shape_from_word, word_from_shape, DyckGray, PrefixWord};
pub use error::{Error, Result, Rule};
pub use fullgray::{distance, full_list, map_class_list, CodeList, FullGray, MapClass};
pub use maps::{base_map, map_to_tree, tree_to_map, RotationMap};
pub use trees::{decode, encode, LabeledTree, RootMode, Shape, Symbol, TreeCode};
pub use verify::{
    check_gray, check_map, count_bicubic, count_cubic_nonseparable, enumerate_trees, GrayReport, MapReport,
};
