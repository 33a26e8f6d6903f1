//! Brute-force oracle, Gray-property certificates and exact counts.
//!
//! The oracle enumerates shapes and labelings with its own recursion; it
//! shares only [`TreeCode`] with the generators.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::dyck::PrefixWord;
use crate::error::{Error, Result};
use crate::fullgray::distance;
use crate::maps::{inspect, Invariant, RawMap};
use crate::trees::{RootMode, Symbol, TreeCode};

/// Default largest `n` the oracle materialises.
pub const DEFAULT_LIMIT: usize = 10;

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

fn pow2(n: u64) -> BigUint {
    BigUint::one() << n
}

/// Rooted bicubic maps on `2n` vertices: `3·2^(n-1)(2n)! / (n!(n+2)!)`.
pub fn count_bicubic(n: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidArgument("count_bicubic needs n >= 1".into()));
    }
    Ok(BigUint::from(3u32) * pow2(n - 1) * factorial(2 * n) / (factorial(n) * factorial(n + 2)))
}

/// Rooted cubic non-separable maps on `2n` vertices:
/// `2^n(3n)! / ((n+1)!(2n+1)!)`.
pub fn count_cubic_nonseparable(n: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidArgument("count_cubic_nonseparable needs n >= 1".into()));
    }
    Ok(pow2(n) * factorial(3 * n) / (factorial(n + 1) * factorial(2 * n + 1)))
}

pub fn catalan(m: u64) -> BigUint {
    factorial(2 * m) / (factorial(m) * factorial(m + 1))
}

/// All Dyck words of length `2m`, in lexicographic order (1 before 0).
fn dyck_words(m: usize) -> Vec<Vec<bool>> {
    fn go(m: usize, open: usize, close: usize, cur: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        if close == m {
            out.push(cur.clone());
            return;
        }
        if open < m {
            cur.push(true);
            go(m, open + 1, close, cur, out);
            cur.pop();
        }
        if close < open {
            cur.push(false);
            go(m, open, close + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(m, 0, 0, &mut Vec::with_capacity(2 * m), &mut out);
    out
}

/// Child lists of the plane tree whose root is planted on the word.
fn children_of(word: &[bool]) -> Vec<Vec<usize>> {
    let mut children = vec![Vec::new()];
    let mut stack = vec![0];
    for &bit in word {
        if bit {
            let v = children.len();
            children.push(Vec::new());
            children[*stack.last().expect("nonempty")].push(v);
            stack.push(v);
        } else {
            stack.pop();
        }
    }
    children
}

/// Every label tuple (preorder, subtree-local) of the subtree at `v`.
fn labelings(children: &[Vec<usize>], v: usize, a: u32, b: u32, mode: RootMode) -> Vec<Vec<u32>> {
    let kids = &children[v];
    if kids.is_empty() {
        return vec![vec![a]];
    }
    let mut partial: Vec<(u32, Vec<u32>)> = vec![(0, Vec::new())];
    for &c in kids {
        let options = labelings(children, c, a, b, RootMode::Internal);
        partial = partial
            .iter()
            .flat_map(|(sum, tail)| {
                options.iter().map(move |o| {
                    let mut t = tail.clone();
                    t.extend_from_slice(o);
                    (sum + o[0], t)
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for (sum, tail) in partial {
        let range = match mode {
            RootMode::Internal => a..=b + sum,
            RootMode::Star => 0..=0,
            RootMode::Sum => sum..=sum,
            RootMode::SumPlusOne => sum + 1..=sum + 1,
        };
        for label in range {
            let mut t = Vec::with_capacity(tail.len() + 1);
            t.push(label);
            t.extend_from_slice(&tail);
            out.push(t);
        }
    }
    out
}

/// Codes of one shape. The code replaces the root label by `*`, so root
/// modes that allow several root labels yield each code once.
fn codes_for(word: &[bool], a: u32, b: u32, mode: RootMode) -> Result<Vec<TreeCode>> {
    let children = children_of(word);
    let shape = PrefixWord::from_bools(word.iter().copied())?;
    let mut codes = labelings(&children, 0, a, b, mode)
        .into_iter()
        .map(|labels| {
            let symbols = std::iter::once(Symbol::Star).chain(labels[1..].iter().map(|&l| Symbol::Value(l)));
            TreeCode::new(shape.clone(), symbols.collect())
        })
        .collect::<Result<Vec<_>>>()?;
    codes.dedup();
    Ok(codes)
}

/// Oracle settings.
#[derive(Clone, Copy, Debug)]
pub struct Oracle {
    pub limit: usize,
    pub jobs: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle { limit: DEFAULT_LIMIT, jobs: 1 }
    }
}

impl Oracle {
    /// Every valid code on `n` vertices. Shapes are split across `jobs`
    /// worker threads and merged in shape order.
    pub fn enumerate(&self, n: usize, a: u32, b: u32, mode: RootMode) -> Result<BTreeSet<TreeCode>> {
        if n == 0 {
            return Err(Error::InvalidArgument("trees have at least one vertex".into()));
        }
        if n > self.limit {
            return Err(Error::BoundExceeded { what: "trees", n, limit: self.limit, estimate: estimate(n, a, b) });
        }
        let words = dyck_words(n - 1);
        let jobs = self.jobs.clamp(1, words.len());
        let chunk = words.len().div_ceil(jobs);
        let parts: Vec<Result<Vec<TreeCode>>> = std::thread::scope(|s| {
            let handles: Vec<_> = words
                .chunks(chunk)
                .map(|ws| {
                    s.spawn(move || {
                        let mut out = Vec::new();
                        for w in ws {
                            out.extend(codes_for(w, a, b, mode)?);
                        }
                        Ok(out)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("oracle worker panicked")).collect()
        });
        let mut set = BTreeSet::new();
        for part in parts {
            set.extend(part?);
        }
        Ok(set)
    }
}

/// [`Oracle::enumerate`] with the default limit on one thread.
pub fn enumerate_trees(n: usize, a: u32, b: u32, mode: RootMode) -> Result<BTreeSet<TreeCode>> {
    Oracle::default().enumerate(n, a, b, mode)
}

fn estimate(n: usize, a: u32, b: u32) -> Option<String> {
    let m = n as u64 - 1;
    match (a, b) {
        (0, 1) => count_bicubic(m).ok().map(|c| c.to_string()),
        (2, 2) => count_cubic_nonseparable(m).ok().map(|c| c.to_string()),
        _ => Some(format!("at least {}", catalan(m))),
    }
}

/// Two list positions further apart than the bound.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct DistanceViolation {
    pub from: usize,
    pub to: usize,
    /// `None` when the codes have different vertex counts.
    pub distance: Option<usize>,
}

/// Outcome of [`check_gray`].
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct GrayReport {
    pub total: usize,
    pub bound: usize,
    pub cyclic: bool,
    pub max_consecutive_distance: Option<usize>,
    pub wraparound_distance: Option<usize>,
    pub first_distance_violation: Option<DistanceViolation>,
    pub distance_violations: usize,
    pub duplicate: Option<(usize, usize)>,
    pub duplicates: usize,
    pub missing: Option<usize>,
    pub extra: Option<usize>,
    pub pass: bool,
}

impl GrayReport {
    /// Named pass/fail lines in a fixed order.
    pub fn criteria(&self) -> Vec<(&'static str, bool)> {
        vec![
            ("no-duplicates", self.duplicates == 0),
            ("complete", self.missing.unwrap_or(0) == 0),
            ("no-extra", self.extra.unwrap_or(0) == 0),
            ("distance-bound", self.distance_violations == 0),
        ]
    }
}

fn opt<T: fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), ToString::to_string)
}

impl fmt::Display for GrayReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "total: {}", self.total)?;
        writeln!(f, "bound: {}", self.bound)?;
        writeln!(f, "cyclic: {}", self.cyclic)?;
        writeln!(f, "max_consecutive_distance: {}", opt(&self.max_consecutive_distance))?;
        writeln!(f, "wraparound_distance: {}", opt(&self.wraparound_distance))?;
        let v = self.first_distance_violation.map(|v| format!("{} -> {} ({})", v.from, v.to, opt(&v.distance)));
        writeln!(f, "first_distance_violation: {}", opt(&v))?;
        writeln!(f, "distance_violations: {}", self.distance_violations)?;
        writeln!(f, "duplicate: {}", opt(&self.duplicate.map(|(i, j)| format!("{i} = {j}"))))?;
        writeln!(f, "duplicates: {}", self.duplicates)?;
        writeln!(f, "missing: {}", opt(&self.missing))?;
        writeln!(f, "extra: {}", opt(&self.extra))?;
        for (name, ok) in self.criteria() {
            writeln!(f, "check {name}: {}", if ok { "pass" } else { "fail" })?;
        }
        write!(f, "result: {}", if self.pass { "pass" } else { "fail" })
    }
}

/// Checks distinctness, the distance bound (with wraparound when `cyclic`)
/// and, given an oracle, completeness.
pub fn check_gray(list: &[TreeCode], bound: usize, cyclic: bool, oracle: Option<&BTreeSet<TreeCode>>) -> GrayReport {
    let mut first_seen: HashMap<&TreeCode, usize> = HashMap::with_capacity(list.len());
    let mut duplicate = None;
    let mut duplicates = 0;
    for (i, c) in list.iter().enumerate() {
        if let Some(&j) = first_seen.get(c) {
            duplicates += 1;
            duplicate.get_or_insert((j, i));
        } else {
            first_seen.insert(c, i);
        }
    }

    let mut max_consecutive = None;
    let mut first_violation = None;
    let mut violations = 0;
    let mut judge = |from: usize, to: usize| {
        let d = distance(&list[from], &list[to]).ok();
        if d.is_none_or(|d| d > bound) {
            violations += 1;
            first_violation.get_or_insert(DistanceViolation { from, to, distance: d });
        }
        d
    };
    for i in 1..list.len() {
        let d = judge(i - 1, i);
        if let Some(d) = d {
            max_consecutive = Some(max_consecutive.map_or(d, |m: usize| m.max(d)));
        }
    }
    let wraparound = if cyclic && list.len() > 1 { judge(list.len() - 1, 0) } else { None };

    let (missing, extra) = match oracle {
        Some(set) => {
            let missing = set.iter().filter(|c| !first_seen.contains_key(c)).count();
            let extra = first_seen.keys().filter(|c| !set.contains(**c)).count();
            (Some(missing), Some(extra))
        }
        None => (None, None),
    };
    let pass = duplicates == 0 && violations == 0 && missing.unwrap_or(0) == 0 && extra.unwrap_or(0) == 0;
    GrayReport {
        total: list.len(),
        bound,
        cyclic,
        max_consecutive_distance: max_consecutive,
        wraparound_distance: wraparound,
        first_distance_violation: first_violation,
        distance_violations: violations,
        duplicate,
        duplicates,
        missing,
        extra,
        pass,
    }
}

/// Per-invariant map validity.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct MapReport {
    pub checks: Vec<(Invariant, bool)>,
    pub failure: Option<String>,
    pub pass: bool,
}

impl fmt::Display for MapReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (inv, ok) in &self.checks {
            writeln!(f, "check {inv}: {}", if *ok { "pass" } else { "fail" })?;
        }
        if let Some(msg) = &self.failure {
            writeln!(f, "failure: {msg}")?;
        }
        write!(f, "result: {}", if self.pass { "pass" } else { "fail" })
    }
}

pub fn check_map(m: &RawMap) -> MapReport {
    let inspection = inspect(m);
    MapReport { pass: inspection.passed(), checks: inspection.results, failure: inspection.failure }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::base_map;

    fn code(s: &str) -> TreeCode {
        s.parse().unwrap()
    }

    #[test]
    fn exact_counts() {
        let b: Vec<String> = (1..=4).map(|n| count_bicubic(n).unwrap().to_string()).collect();
        assert_eq!(b, ["1", "3", "12", "56"]);
        let c: Vec<String> = (1..=4).map(|n| count_cubic_nonseparable(n).unwrap().to_string()).collect();
        assert_eq!(c, ["1", "4", "24", "176"]);
        assert!(count_bicubic(0).is_err());
        assert_eq!(catalan(4).to_string(), "14");
    }

    #[test]
    fn oracle_small_cases() {
        let mut three: Vec<String> =
            enumerate_trees(3, 0, 1, RootMode::Star).unwrap().iter().map(ToString::to_string).collect();
        three.sort();
        assert_eq!(three, ["(1,0,1,0,*,0,0)", "(1,1,0,0,*,0,0)", "(1,1,0,0,*,1,0)"]);
        assert_eq!(enumerate_trees(4, 0, 1, RootMode::Star).unwrap().len(), 12);
        assert_eq!(enumerate_trees(3, 2, 2, RootMode::Star).unwrap().len(), 4);
        assert_eq!(enumerate_trees(1, 0, 1, RootMode::Star).unwrap().len(), 1);
        let star = enumerate_trees(5, 0, 1, RootMode::Star).unwrap();
        assert_eq!(enumerate_trees(5, 0, 1, RootMode::SumPlusOne).unwrap(), star);
        assert_eq!(enumerate_trees(5, 0, 1, RootMode::Internal).unwrap(), star);
    }

    #[test]
    fn oracle_guard_and_jobs() {
        match enumerate_trees(11, 0, 1, RootMode::Star) {
            Err(Error::BoundExceeded { estimate: Some(e), .. }) => {
                assert_eq!(e, count_bicubic(10).unwrap().to_string())
            }
            other => panic!("expected a refusal, got {other:?}"),
        }
        let one = Oracle { limit: 7, jobs: 1 }.enumerate(7, 1, 1, RootMode::Star).unwrap();
        let four = Oracle { limit: 7, jobs: 4 }.enumerate(7, 1, 1, RootMode::Star).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn gray_report_catches_faults() {
        let a = code("(1,0,1,0,*,0,0)");
        let b = code("(1,1,0,0,*,0,0)");
        let c = code("(1,1,0,0,*,1,0)");
        let oracle: BTreeSet<TreeCode> = [a.clone(), b.clone(), c.clone()].into();
        let good = check_gray(&[a.clone(), b.clone(), c.clone()], 3, true, Some(&oracle));
        assert!(good.pass, "{good}");
        assert_eq!((good.max_consecutive_distance, good.wraparound_distance), (Some(2), Some(3)));
        let tight = check_gray(&[a.clone(), b.clone(), c.clone()], 2, true, Some(&oracle));
        assert!(!tight.pass);
        assert_eq!(tight.first_distance_violation.unwrap().from, 2);
        let dup = check_gray(&[a.clone(), b.clone(), a.clone()], 3, true, Some(&oracle));
        assert_eq!((dup.duplicate, dup.missing), (Some((0, 2)), Some(1)));
        let mixed = check_gray(&[a, code("(*)")], 3, false, None);
        assert_eq!(mixed.first_distance_violation.unwrap().distance, None);
        assert!(mixed.to_string().ends_with("result: fail"));
    }

    #[test]
    fn map_reports() {
        assert!(check_map(base_map().raw()).pass);
        let mut raw = base_map().raw().clone();
        raw.alpha[0] = 0;
        let report = check_map(&raw);
        assert!(!report.pass);
        assert!(report.to_string().contains("check permutations: fail"));
    }
}
