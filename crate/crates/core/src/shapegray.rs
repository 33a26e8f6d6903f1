//! Gray codes over all proper labelings of a fixed shape.
//!
//! Tuples are label vectors in preorder. For a vertex `v` with children
//! `c1..ck` the tuple of the subtree at `v` is its own label followed by the
//! child subtree tuples, so a list for `v` is built from a product list over
//! the children (`alpha_1, alpha_2, ...`) by prefixing root labels column by
//! column.
//!
//! Each column `alpha_j` admits the root labels `a..=cap(alpha_j)` where
//! `cap = b + (sum of child-root labels)`. All labels of one column are
//! pairwise at distance one, and neighbouring columns are joined at equal
//! root labels. The zigzag enters a column at level `a` or `a+1`, sweeps the
//! levels above `a+1` downwards and leaves at the other of the two. For a
//! closed walk over an odd number of columns, two neighbouring columns that
//! both admit `a+2` are crossed at level `a+2` instead, which flips the
//! parity of the exit level once.

use crate::error::{Error, Result};
use crate::trees::{RootMode, Shape, Symbol};

/// `<(a), (u), (u-1), ..., (a+1)>`; `<(a)>` when `u == a`.
pub fn gamma(u: u32, a: u32) -> Result<Vec<u32>> {
    if u < a {
        return Err(Error::InvalidArgument(format!("gamma({u}) undefined below a={a}")));
    }
    Ok(std::iter::once(a).chain((a + 1..=u).rev()).collect())
}

/// `<(a+1), (u), (u-1), ..., (a+2), (a)>`; `<(a)>` when `u == a`.
pub fn delta(u: u32, a: u32) -> Result<Vec<u32>> {
    if u < a {
        return Err(Error::InvalidArgument(format!("delta({u}) undefined below a={a}")));
    }
    if u == a {
        return Ok(vec![a]);
    }
    Ok(std::iter::once(a + 1).chain((a + 2..=u).rev()).chain(std::iter::once(a)).collect())
}

/// Number of positions where two equal-length tuples differ.
pub fn hamming<T: PartialEq>(x: &[T], y: &[T]) -> usize {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).filter(|(p, q)| p != q).count() + x.len().abs_diff(y.len())
}

fn concat<T: Clone>(x: &[T], y: &[T]) -> Vec<T> {
    let mut t = Vec::with_capacity(x.len() + y.len());
    t.extend_from_slice(x);
    t.extend_from_slice(y);
    t
}

/// Reflected product: the first list varies slowest and every other copy of
/// the inner product is reversed.
pub fn product_gray<T: Clone>(lists: &[Vec<Vec<T>>]) -> Result<Vec<Vec<T>>> {
    let (last, rest) = lists.split_last().ok_or_else(|| Error::InvalidArgument("product of zero lists".into()))?;
    if lists.iter().any(Vec::is_empty) {
        return Err(Error::InvalidArgument("product with an empty factor".into()));
    }
    Ok(rest.iter().rev().fold(last.clone(), |inner, outer| {
        let mut out = Vec::with_capacity(outer.len() * inner.len());
        for (i, e) in outer.iter().enumerate() {
            if i % 2 == 0 {
                out.extend(inner.iter().map(|t| concat(e, t)));
            } else {
                out.extend(inner.iter().rev().map(|t| concat(e, t)));
            }
        }
        out
    }))
}

/// Product of cyclic 1-Gray lists (singletons allowed) as a cyclic 1-Gray
/// list; the first factor supplies the leading coordinates.
pub fn cyclic_product<T: Clone>(lists: &[Vec<Vec<T>>]) -> Result<Vec<Vec<T>>> {
    let (last, rest) = lists.split_last().ok_or_else(|| Error::InvalidArgument("product of zero lists".into()))?;
    if lists.iter().any(Vec::is_empty) {
        return Err(Error::InvalidArgument("product with an empty factor".into()));
    }
    Ok(rest.iter().rev().fold(last.clone(), |inner, outer| cyclic_pair(outer, &inner)))
}

/// Hamiltonian cycle through the grid `outer x inner` whose rows and columns
/// are cycles.
fn cyclic_pair<T: Clone>(outer: &[Vec<T>], inner: &[Vec<T>]) -> Vec<Vec<T>> {
    let (p, q) = (outer.len(), inner.len());
    let at = |r: usize, c: usize| concat(&outer[r], &inner[c]);
    let mut out = Vec::with_capacity(p * q);
    if p == 1 || q == 1 || p % 2 == 0 {
        for r in 0..p {
            if r % 2 == 0 {
                out.extend((0..q).map(|c| at(r, c)));
            } else {
                out.extend((0..q).rev().map(|c| at(r, c)));
            }
        }
    } else if q % 2 == 0 {
        for c in 0..q {
            if c % 2 == 0 {
                out.extend((0..p).map(|r| at(r, c)));
            } else {
                out.extend((0..p).rev().map(|r| at(r, c)));
            }
        }
    } else {
        // Both odd: row 0 left to right, rows 1..=p-2 snake over columns
        // 1..q, column 0 climbs back. Row p-1 is spliced into the step
        // (p-2, 2) -> (p-2, 1), going the long way round its own cycle.
        out.extend((0..q).map(|c| at(0, c)));
        for r in 1..=p - 2 {
            let cols: Vec<usize> = if r % 2 == 1 { (1..q).rev().collect() } else { (1..q).collect() };
            for c in cols {
                out.push(at(r, c));
                if r == p - 2 && c == 2 {
                    out.extend((2..q).chain(0..2).map(|c| at(p - 1, c)));
                }
            }
        }
        out.extend((1..=p - 2).rev().map(|r| at(r, 0)));
    }
    out
}

/// Largest admissible root label above children with the given root labels.
pub fn root_capacity(b: u32, child_roots: impl IntoIterator<Item = u32>) -> u32 {
    b + child_roots.into_iter().sum::<u32>()
}

/// A Gray-ordered list of proper labelings of one shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelList {
    shape: Shape,
    a: u32,
    b: u32,
    mode: RootMode,
    cyclic: bool,
    order: Vec<Vec<Symbol>>,
}

impl LabelList {
    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn params(&self) -> (u32, u32) {
        (self.a, self.b)
    }

    pub fn mode(&self) -> RootMode {
        self.mode
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn tuples(&self) -> &[Vec<Symbol>] {
        &self.order
    }

    pub fn into_tuples(self) -> Vec<Vec<Symbol>> {
        self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// The all-`a` labeling (`*` at the root in star mode).
    pub fn base_tuple(&self) -> Vec<Symbol> {
        let mut t = vec![Symbol::Value(self.a); self.shape.len()];
        if self.mode == RootMode::Star {
            t[0] = Symbol::Star;
        }
        t
    }
}

fn check_params(b: u32, mode: RootMode) -> Result<()> {
    if b == 0 {
        return Err(Error::Unsupported("labelings with b = 0 have no Gray code construction here".into()));
    }
    if !matches!(mode, RootMode::Star | RootMode::Internal) {
        return Err(Error::Unsupported(format!("{mode:?} root mode fixes the root label; use Star or Internal")));
    }
    Ok(())
}

/// Offsets of the children of `v` inside a child-product tuple.
fn child_offsets(shape: &Shape, v: usize) -> Vec<usize> {
    shape
        .children(v)
        .iter()
        .scan(0, |off, &c| {
            let here = *off;
            *off += shape.subtree_size(c);
            Some(here)
        })
        .collect()
}

fn other_level(level: u32, a: u32) -> u32 {
    if level == a {
        a + 1
    } else {
        a
    }
}

/// Prefixes root labels onto the column list `alphas` (see module docs).
/// `splice` is the index `p` of the column pair `(p, p+1)` crossed at `a+2`.
fn zigzag(alphas: &[Vec<u32>], caps: &[u32], a: u32, splice: Option<usize>) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut emit = |level: u32, alpha: &[u32]| {
        let mut t = Vec::with_capacity(alpha.len() + 1);
        t.push(level);
        t.extend_from_slice(alpha);
        out.push(t);
    };
    let mut entry = a;
    let mut j = 0;
    while j < alphas.len() {
        let exit = other_level(entry, a);
        if splice == Some(j) {
            let (x, y) = (&alphas[j], &alphas[j + 1]);
            emit(entry, x);
            emit(exit, x);
            (a + 3..=caps[j]).rev().for_each(|l| emit(l, x));
            emit(a + 2, x);
            emit(a + 2, y);
            (a + 3..=caps[j + 1]).rev().for_each(|l| emit(l, y));
            emit(entry, y);
            emit(exit, y);
            j += 2;
        } else {
            let x = &alphas[j];
            emit(entry, x);
            (a + 2..=caps[j]).rev().for_each(|l| emit(l, x));
            emit(exit, x);
            j += 1;
        }
        entry = exit;
    }
    out
}

fn path_at(shape: &Shape, v: usize, a: u32, b: u32) -> Result<Vec<Vec<u32>>> {
    if shape.is_leaf(v) {
        return Ok(vec![vec![a]]);
    }
    let child_lists = shape.children(v).iter().map(|&c| path_at(shape, c, a, b)).collect::<Result<Vec<_>>>()?;
    let alphas = product_gray(&child_lists)?;
    let offsets = child_offsets(shape, v);
    let caps: Vec<u32> = alphas.iter().map(|al| root_capacity(b, offsets.iter().map(|&o| al[o]))).collect();
    Ok(zigzag(&alphas, &caps, a, None))
}

fn cycle_at(shape: &Shape, v: usize, a: u32, b: u32) -> Result<Vec<Vec<u32>>> {
    if shape.is_leaf(v) {
        return Ok(vec![vec![a]]);
    }
    let child_lists = shape.children(v).iter().map(|&c| cycle_at(shape, c, a, b)).collect::<Result<Vec<_>>>()?;
    let mut alphas = cyclic_product(&child_lists)?;
    let offsets = child_offsets(shape, v);
    let mut caps: Vec<u32> = alphas.iter().map(|al| root_capacity(b, offsets.iter().map(|&o| al[o]))).collect();
    let n = alphas.len();
    let splice = if n % 2 == 1 && n >= 3 {
        let wide = |j: usize| caps[j] >= a + 2 && caps[(j + 1) % n] >= a + 2;
        let j = (0..n)
            .find(|&j| wide(j))
            .ok_or_else(|| Error::Internal(format!("no splice edge among {n} columns at vertex {v} of {shape:?}")))?;
        if j == n - 1 {
            alphas.rotate_left(1);
            caps.rotate_left(1);
            Some(n - 2)
        } else {
            Some(j)
        }
    } else {
        None
    };
    Ok(zigzag(&alphas, &caps, a, splice))
}

/// Tuples of raw label values, one per list entry.
type Tuples = Vec<Vec<u32>>;

fn assemble(
    shape: &Shape,
    a: u32,
    b: u32,
    mode: RootMode,
    cyclic: bool,
    build: fn(&Shape, usize, u32, u32) -> Result<Tuples>,
    product: fn(&[Tuples]) -> Result<Tuples>,
) -> Result<LabelList> {
    check_params(b, mode)?;
    let values = |t: Vec<u32>| t.into_iter().map(Symbol::Value);
    let order: Vec<Vec<Symbol>> = match mode {
        RootMode::Internal => build(shape, 0, a, b)?.into_iter().map(|t| values(t).collect()).collect(),
        _ if shape.is_leaf(0) => vec![vec![Symbol::Star]],
        _ => {
            let lists = shape.children(0).iter().map(|&c| build(shape, c, a, b)).collect::<Result<Vec<_>>>()?;
            product(&lists)?.into_iter().map(|t| std::iter::once(Symbol::Star).chain(values(t)).collect()).collect()
        }
    };
    Ok(LabelList { shape: shape.clone(), a, b, mode, cyclic, order })
}

/// All proper labelings of `shape`, consecutive tuples at distance one.
pub fn label_gray_path(shape: &Shape, a: u32, b: u32, mode: RootMode) -> Result<LabelList> {
    assemble(shape, a, b, mode, false, path_at, product_gray)
}

/// As [`label_gray_path`], and the last tuple is also at distance one from
/// the first.
pub fn label_gray_cycle(shape: &Shape, a: u32, b: u32, mode: RootMode) -> Result<LabelList> {
    assemble(shape, a, b, mode, true, cycle_at, cyclic_product)
}

/// Rotates a cyclic list so that it starts at the all-`a` labeling.
pub fn rotate_to_zero(list: &LabelList) -> Result<LabelList> {
    if !list.cyclic {
        return Err(Error::InvalidArgument("only a cyclic list can be rotated".into()));
    }
    let base = list.base_tuple();
    let at = list
        .order
        .iter()
        .position(|t| *t == base)
        .ok_or_else(|| Error::Internal("all-a labeling missing from list".into()))?;
    let mut rotated = list.clone();
    rotated.order.rotate_left(at);
    Ok(rotated)
}

/// Consecutive tuples never differ in two or more positions.
pub fn single_position_steps<T: PartialEq>(order: &[Vec<T>], cyclic: bool) -> bool {
    consecutive(order, cyclic).all(|(r, s)| hamming(r, s) <= 1)
}

/// For consecutive `r, s, t`, whenever `s_i` differs from both `r_i` and
/// `t_i`, also `r_i != t_i`.
pub fn no_position_reverts<T: PartialEq>(order: &[Vec<T>], cyclic: bool) -> bool {
    let n = order.len();
    if n < 3 {
        return true;
    }
    let triples = if cyclic { n } else { n - 2 };
    (0..triples).all(|i| {
        let (r, s, t) = (&order[i], &order[(i + 1) % n], &order[(i + 2) % n]);
        (0..s.len()).all(|k| s[k] == r[k] || s[k] == t[k] || r[k] != t[k])
    })
}

fn consecutive<T>(order: &[Vec<T>], cyclic: bool) -> impl Iterator<Item = (&Vec<T>, &Vec<T>)> {
    let wrap = (cyclic && order.len() > 1).then(|| (&order[order.len() - 1], &order[0]));
    order.windows(2).map(|w| (&w[0], &w[1])).chain(wrap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(word: &str) -> Shape {
        Shape::from_word(&word.parse().unwrap()).unwrap()
    }

    fn ints(list: &LabelList) -> Vec<Vec<u32>> {
        list.tuples().iter().map(|t| t.iter().map(|s| s.value().unwrap_or(u32::MAX)).collect()).collect()
    }

    #[test]
    fn gamma_delta() {
        assert_eq!(gamma(1, 0).unwrap(), vec![0, 1]);
        assert_eq!(delta(1, 0).unwrap(), vec![1, 0]);
        assert_eq!(gamma(3, 0).unwrap(), vec![0, 3, 2, 1]);
        assert_eq!(delta(2, 0).unwrap(), vec![1, 2, 0]);
        assert_eq!(gamma(2, 2).unwrap(), vec![2]);
        assert_eq!(delta(2, 2).unwrap(), vec![2]);
        assert_eq!(gamma(5, 2).unwrap(), vec![2, 5, 4, 3]);
        assert_eq!(delta(5, 2).unwrap(), vec![3, 5, 4, 2]);
        assert!(gamma(0, 1).is_err());
        assert!(delta(0, 1).is_err());
    }

    #[test]
    fn product_examples() {
        let bit = vec![vec![0u32], vec![1]];
        assert_eq!(
            product_gray(&[bit.clone(), bit.clone()]).unwrap(),
            vec![vec![0, 0], vec![0, 1], vec![1, 1], vec![1, 0]]
        );
        assert_eq!(product_gray(std::slice::from_ref(&bit)).unwrap(), bit);
        assert!(product_gray::<u32>(&[]).is_err());
        assert!(product_gray(&[bit.clone(), vec![]]).is_err());
    }

    #[test]
    fn cyclic_product_both_odd() {
        for p in [1usize, 2, 3, 4, 5, 7] {
            for q in [1usize, 2, 3, 4, 5, 7] {
                let cyc = |n: usize| (0..n as u32).map(|i| vec![i]).collect::<Vec<_>>();
                let prod = cyclic_product(&[cyc(p), cyc(q)]).unwrap();
                assert_eq!(prod.len(), p * q);
                let mut sorted = prod.clone();
                sorted.sort();
                sorted.dedup();
                assert_eq!(sorted.len(), p * q, "p={p} q={q}");
                // cycle adjacency: indices differ by one modulo the length
                let step = |x: u32, y: u32, n: usize| {
                    let d = x.abs_diff(y) as usize;
                    d == 1 || (n > 2 && d == n - 1)
                };
                let n = prod.len();
                for i in 0..if n > 1 { n } else { 0 } {
                    let (s, t) = (&prod[i], &prod[(i + 1) % n]);
                    let ok = (s[0] == t[0] && step(s[1], t[1], q)) || (s[1] == t[1] && step(s[0], t[0], p));
                    assert!(ok, "p={p} q={q} step {s:?}->{t:?}");
                }
            }
        }
    }

    #[test]
    fn three_vertex_path_lists() {
        let path = shape("(1,1,0,0)");
        let expected = vec![vec![0, 0, 0], vec![1, 0, 0], vec![1, 1, 0], vec![2, 1, 0], vec![0, 1, 0]];
        assert_eq!(ints(&label_gray_path(&path, 0, 1, RootMode::Internal).unwrap()), expected);
        let cyc = label_gray_cycle(&path, 0, 1, RootMode::Internal).unwrap();
        assert_eq!(ints(&cyc), expected);
        assert!(cyc.is_cyclic());
    }

    #[test]
    fn trivial_shapes() {
        let single = Shape::single();
        assert_eq!(ints(&label_gray_path(&single, 2, 2, RootMode::Internal).unwrap()), vec![vec![2]]);
        assert_eq!(label_gray_cycle(&single, 0, 1, RootMode::Star).unwrap().tuples(), &[vec![Symbol::Star]]);
        let star = shape("(1,0,1,0,1,0)");
        assert_eq!(
            ints(&label_gray_cycle(&star, 0, 1, RootMode::Internal).unwrap()),
            vec![vec![0, 0, 0, 0], vec![1, 0, 0, 0]]
        );
    }

    #[test]
    fn one_internal_vertex_cycle_has_five() {
        // root with children [x, leaf], x with one leaf
        let s = shape("(1,1,0,0,1,0)");
        let l = label_gray_cycle(&s, 0, 1, RootMode::Internal).unwrap();
        assert_eq!(l.len(), 5);
        assert!(single_position_steps(l.tuples(), true));
    }

    #[test]
    fn rejects_unsupported() {
        let s = shape("(1,0)");
        assert!(matches!(label_gray_path(&s, 1, 0, RootMode::Star), Err(Error::Unsupported(_))));
        assert!(matches!(label_gray_cycle(&s, 0, 1, RootMode::Sum), Err(Error::Unsupported(_))));
    }

    #[test]
    fn rotation() {
        let s = shape("(1,1,0,0)");
        let l = label_gray_cycle(&s, 0, 1, RootMode::Star).unwrap();
        assert_eq!(l.tuples()[0], vec![Symbol::Star, Symbol::Value(0), Symbol::Value(0)]);
        let mut rotated = l.clone();
        rotated.order.rotate_left(1);
        assert_eq!(rotated.tuples()[0], vec![Symbol::Star, Symbol::Value(1), Symbol::Value(0)]);
        assert_eq!(rotate_to_zero(&rotated).unwrap(), l);
        assert_eq!(rotate_to_zero(&l).unwrap(), l);
        let path = label_gray_path(&s, 0, 1, RootMode::Star).unwrap();
        assert!(rotate_to_zero(&path).is_err());
        let mut broken = l.clone();
        broken.order.remove(0);
        assert!(matches!(rotate_to_zero(&broken), Err(Error::Internal(_))));
    }

    #[test]
    fn step_predicates_catch_violations() {
        let good = vec![vec![0, 0], vec![0, 1], vec![1, 1]];
        assert!(single_position_steps(&good, false));
        assert!(no_position_reverts(&good, false));
        let double = vec![vec![0, 0], vec![1, 1]];
        assert!(!single_position_steps(&double, false));
        let back = vec![vec![0], vec![1], vec![0]];
        assert!(!no_position_reverts(&back, false));
    }
}
