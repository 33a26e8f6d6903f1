//! Rooted bicubic planar maps as rotation systems, and the bijection with
//! β(0,1)-trees.
//!
//! A map is a set of darts with two permutations: `sigma` turns
//! counterclockwise around a vertex and `alpha` swaps the two darts of an
//! edge. Faces are the orbits of `phi = sigma ∘ alpha`; the face of dart `d`
//! lies on the right of `d` when walking from its tail to its head.
//!
//! Colour conventions: the tail of the root dart is black and the face on
//! the right of the root dart (the root face `R3`) has colour 3. Around a
//! white vertex face colours increase counterclockwise, around a black one
//! they decrease.

use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::trees::{decompose, lambda, oplus_fold, unlambda, validate, LabeledTree, RootMode};

const UNSET: usize = usize::MAX;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

impl Color {
    fn other(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Black => "black",
            Color::White => "white",
        })
    }
}

/// Unchecked dart permutations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RawMap {
    pub sigma: Vec<usize>,
    pub alpha: Vec<usize>,
    pub root: usize,
}

impl RawMap {
    /// Appends a vertex whose three darts form one `sigma` cycle in the
    /// returned order; their `alpha` is left unset.
    fn add_vertex(&mut self) -> [usize; 3] {
        let d = self.sigma.len();
        self.sigma.extend([d + 1, d + 2, d]);
        self.alpha.extend([UNSET; 3]);
        [d, d + 1, d + 2]
    }

    fn pair(&mut self, x: usize, y: usize) {
        self.alpha[x] = y;
        self.alpha[y] = x;
    }

    /// Keeps the darts for which `keep` holds, renumbered in increasing
    /// order. `root` must be kept.
    fn restrict(&self, keep: impl Fn(usize) -> bool) -> RawMap {
        let mut index = vec![UNSET; self.sigma.len()];
        let mut next = 0;
        for (d, slot) in index.iter_mut().enumerate() {
            if keep(d) {
                *slot = next;
                next += 1;
            }
        }
        let kept = (0..self.sigma.len()).filter(|&d| index[d] != UNSET);
        let (sigma, alpha) = kept.map(|d| (index[self.sigma[d]], index[self.alpha[d]])).unzip();
        RawMap { sigma, alpha, root: index[self.root] }
    }
}

/// Named map invariants, in checking order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Invariant {
    /// Both arrays are permutations of the same dart set containing the root.
    Permutations,
    /// `alpha` is a fixed-point-free involution.
    EdgeInvolution,
    /// Every `sigma` orbit has size three.
    Cubic,
    Connected,
    /// `V - E + F = 2`.
    Planar,
    Bipartite,
    /// Faces are 3-coloured with the counterclockwise rule and adjacent
    /// faces differ.
    FaceColoring,
    /// Root vertex black, root face colour 3.
    RootConventions,
}

impl Invariant {
    pub const ALL: [Invariant; 8] = [
        Invariant::Permutations,
        Invariant::EdgeInvolution,
        Invariant::Cubic,
        Invariant::Connected,
        Invariant::Planar,
        Invariant::Bipartite,
        Invariant::FaceColoring,
        Invariant::RootConventions,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Invariant::Permutations => "permutations",
            Invariant::EdgeInvolution => "edge-involution",
            Invariant::Cubic => "cubic",
            Invariant::Connected => "connected",
            Invariant::Planar => "planar",
            Invariant::Bipartite => "bipartite",
            Invariant::FaceColoring => "face-coloring",
            Invariant::RootConventions => "root-conventions",
        }
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Per-invariant outcome of [`inspect`]. Invariants whose prerequisites
/// failed are reported as failed too.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Inspection {
    pub results: Vec<(Invariant, bool)>,
    /// Description of the first failure.
    pub failure: Option<String>,
}

impl Inspection {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

/// Orbit index of every dart under the group generated by `perm`.
fn orbits(perm: &[usize]) -> (Vec<usize>, usize) {
    let mut of = vec![UNSET; perm.len()];
    let mut count = 0;
    for start in 0..perm.len() {
        if of[start] != UNSET {
            continue;
        }
        let mut d = start;
        while of[d] == UNSET {
            of[d] = count;
            d = perm[d];
        }
        count += 1;
    }
    (of, count)
}

fn phi_of(raw: &RawMap) -> Vec<usize> {
    raw.alpha.iter().map(|&a| raw.sigma[a]).collect()
}

/// Vertex colouring with the root vertex black.
fn color_vertices(raw: &RawMap, vertex: &[usize], count: usize) -> Result<Vec<Color>> {
    let mut color: Vec<Option<Color>> = vec![None; count];
    color[vertex[raw.root]] = Some(Color::Black);
    let mut queue = VecDeque::from([vertex[raw.root]]);
    let mut darts_of = vec![Vec::new(); count];
    for (d, &v) in vertex.iter().enumerate() {
        darts_of[v].push(d);
    }
    while let Some(v) = queue.pop_front() {
        let c = color[v].expect("queued vertices are coloured");
        for &d in &darts_of[v] {
            let w = vertex[raw.alpha[d]];
            match color[w] {
                None => {
                    color[w] = Some(c.other());
                    queue.push_back(w);
                }
                Some(cw) if cw == c => {
                    return Err(Error::InvalidMap(format!("edge at dart {d} joins two {c} vertices")));
                }
                Some(_) => {}
            }
        }
    }
    color.into_iter().map(|c| c.ok_or_else(|| Error::InvalidMap("map is not connected".into()))).collect()
}

fn step(c: u8, up: bool) -> u8 {
    // colours are 1..=3
    if up {
        c % 3 + 1
    } else {
        (c + 1) % 3 + 1
    }
}

/// Face colouring with the root face coloured 3.
fn color_faces(raw: &RawMap, face: &[usize], count: usize, vcolor: &[Color], vertex: &[usize]) -> Result<Vec<u8>> {
    let mut color = vec![0u8; count];
    color[face[raw.root]] = 3;
    let mut darts_of = vec![Vec::new(); count];
    for (d, &f) in face.iter().enumerate() {
        darts_of[f].push(d);
    }
    let mut queue = VecDeque::from([face[raw.root]]);
    while let Some(f) = queue.pop_front() {
        for &d in &darts_of[f] {
            let up = vcolor[vertex[d]] == Color::White;
            // face[sigma d] follows face[d] counterclockwise; face[sigma^-1 d]
            // precedes it.
            let next = face[raw.sigma[d]];
            let prev = face[raw.sigma[raw.sigma[d]]];
            for (g, c) in [(next, step(color[f], up)), (prev, step(color[f], !up))] {
                if color[g] == 0 {
                    color[g] = c;
                    queue.push_back(g);
                } else if color[g] != c {
                    return Err(Error::InvalidMap(format!("face colouring conflict at dart {d}")));
                }
            }
        }
    }
    for d in 0..raw.alpha.len() {
        if color[face[d]] == color[face[raw.alpha[d]]] {
            return Err(Error::InvalidMap(format!("the two faces at dart {d} share a colour")));
        }
    }
    Ok(color)
}

/// Checks every [`Invariant`] in order.
pub fn inspect(raw: &RawMap) -> Inspection {
    let mut results = Vec::with_capacity(Invariant::ALL.len());
    let mut failure = None;
    let mut record = |inv: Invariant, outcome: std::result::Result<(), String>| {
        let ok = outcome.is_ok();
        if let (Err(msg), None) = (outcome, &failure) {
            failure = Some(format!("{inv}: {msg}"));
        }
        results.push((inv, ok));
        ok
    };
    let fail_rest = |results: &mut Vec<(Invariant, bool)>| {
        for inv in Invariant::ALL.into_iter().skip(results.len()) {
            results.push((inv, false));
        }
    };

    let n = raw.sigma.len();
    let perms = if raw.alpha.len() != n {
        Err(format!("{} sigma darts but {} alpha darts", n, raw.alpha.len()))
    } else if raw.root >= n {
        Err(format!("root dart {} outside 0..{n}", raw.root))
    } else if !is_permutation(&raw.sigma) || !is_permutation(&raw.alpha) {
        Err("not a permutation".into())
    } else {
        Ok(())
    };
    if !record(Invariant::Permutations, perms) {
        fail_rest(&mut results);
        return Inspection { results, failure };
    }

    let involution = (0..n)
        .find(|&d| raw.alpha[d] == d || raw.alpha[raw.alpha[d]] != d)
        .map_or(Ok(()), |d| Err(format!("dart {d} is not properly paired")));
    let cubic = {
        let (of, count) = orbits(&raw.sigma);
        let mut sizes = vec![0usize; count];
        of.iter().for_each(|&v| sizes[v] += 1);
        sizes.iter().position(|&s| s != 3).map_or(Ok(()), |v| Err(format!("vertex {v} has degree {}", sizes[v])))
    };
    let ok_inv = record(Invariant::EdgeInvolution, involution);
    let ok_cubic = record(Invariant::Cubic, cubic);
    if !(ok_inv && ok_cubic) {
        fail_rest(&mut results);
        return Inspection { results, failure };
    }

    let (vertex, v_count) = orbits(&raw.sigma);
    let mut seen = vec![false; n];
    let mut stack = vec![raw.root];
    seen[raw.root] = true;
    while let Some(d) = stack.pop() {
        for e in [raw.sigma[d], raw.alpha[d]] {
            if !seen[e] {
                seen[e] = true;
                stack.push(e);
            }
        }
    }
    let connected = seen.iter().position(|s| !s).map_or(Ok(()), |d| Err(format!("dart {d} unreachable from the root")));
    if !record(Invariant::Connected, connected) {
        fail_rest(&mut results);
        return Inspection { results, failure };
    }

    let (face, f_count) = orbits(&phi_of(raw));
    let euler = v_count as i64 - (n / 2) as i64 + f_count as i64;
    record(Invariant::Planar, if euler == 2 { Ok(()) } else { Err(format!("Euler characteristic {euler}")) });

    let vcolor = color_vertices(raw, &vertex, v_count);
    let vcolor = match vcolor {
        Ok(c) => {
            record(Invariant::Bipartite, Ok(()));
            c
        }
        Err(e) => {
            record(Invariant::Bipartite, Err(e.to_string()));
            fail_rest(&mut results);
            return Inspection { results, failure };
        }
    };
    let fcolor = color_faces(raw, &face, f_count, &vcolor, &vertex);
    let ok_faces = record(Invariant::FaceColoring, fcolor.as_ref().map(|_| ()).map_err(ToString::to_string));
    let conventions = match &fcolor {
        Ok(fc) if ok_faces && vcolor[vertex[raw.root]] == Color::Black && fc[face[raw.root]] == 3 => Ok(()),
        _ => Err("root vertex or root face mis-coloured".to_string()),
    };
    record(Invariant::RootConventions, conventions);
    Inspection { results, failure }
}

/// A valid rooted bicubic map with its colourings.
#[derive(Clone, Debug)]
pub struct RotationMap {
    raw: RawMap,
    vertex: Vec<usize>,
    vertex_color: Vec<Color>,
    face: Vec<usize>,
    face_color: Vec<u8>,
}

impl PartialEq for RotationMap {
    fn eq(&self, other: &Self) -> bool {
        self.raw == other.raw
    }
}

impl Eq for RotationMap {}

impl RotationMap {
    /// Validates `raw` and computes both colourings.
    pub fn new(raw: RawMap) -> Result<Self> {
        let report = inspect(&raw);
        if let Some(msg) = report.failure {
            return Err(Error::InvalidMap(msg));
        }
        let (vertex, v_count) = orbits(&raw.sigma);
        let (face, f_count) = orbits(&phi_of(&raw));
        let vertex_color = color_vertices(&raw, &vertex, v_count)?;
        let face_color = color_faces(&raw, &face, f_count, &vertex_color, &vertex)?;
        Ok(RotationMap { raw, vertex, vertex_color, face, face_color })
    }

    pub fn raw(&self) -> &RawMap {
        &self.raw
    }

    pub fn dart_count(&self) -> usize {
        self.raw.sigma.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_color.len()
    }

    pub fn edge_count(&self) -> usize {
        self.dart_count() / 2
    }

    pub fn face_count(&self) -> usize {
        self.face_color.len()
    }

    pub fn root(&self) -> usize {
        self.raw.root
    }

    pub fn sigma(&self, d: usize) -> usize {
        self.raw.sigma[d]
    }

    pub fn alpha(&self, d: usize) -> usize {
        self.raw.alpha[d]
    }

    /// Next dart along the face on the right of `d`.
    pub fn phi(&self, d: usize) -> usize {
        self.raw.sigma[self.raw.alpha[d]]
    }

    pub fn vertex_of(&self, d: usize) -> usize {
        self.vertex[d]
    }

    pub fn head(&self, d: usize) -> usize {
        self.vertex[self.raw.alpha[d]]
    }

    pub fn vertex_color(&self, v: usize) -> Color {
        self.vertex_color[v]
    }

    pub fn vertex_colors(&self) -> &[Color] {
        &self.vertex_color
    }

    /// Face on the right of `d`.
    pub fn face_of(&self, d: usize) -> usize {
        self.face[d]
    }

    pub fn face_color(&self, f: usize) -> u8 {
        self.face_color[f]
    }

    pub fn face_colors(&self) -> &[u8] {
        &self.face_color
    }

    /// The root face `R3`.
    pub fn root_face(&self) -> usize {
        self.face[self.raw.root]
    }

    /// `S1`: the 1-coloured face at the head of the root dart.
    pub fn s1(&self) -> usize {
        let back = self.raw.alpha[self.raw.root];
        self.face[self.raw.sigma[self.raw.sigma[back]]]
    }

    /// Darts of the root face in `phi` order starting at the root.
    fn root_face_darts(&self) -> Vec<usize> {
        let mut out = vec![self.raw.root];
        let mut d = self.phi(self.raw.root);
        while d != self.raw.root {
            out.push(d);
            d = self.phi(d);
        }
        out
    }

    /// The 1-coloured faces touching the root face, counted clockwise from
    /// the root vertex, each with the first root-face dart bordering it.
    pub fn root_one_faces(&self) -> Vec<(usize, usize)> {
        let darts = self.root_face_darts();
        let clockwise = std::iter::once(darts[0]).chain(darts[1..].iter().rev().copied());
        let mut out: Vec<(usize, usize)> = Vec::new();
        for d in clockwise {
            let f = self.face[self.raw.alpha[d]];
            if self.face_color[f] == 1 && out.iter().all(|&(g, _)| g != f) {
                out.push((f, d));
            }
        }
        out
    }

    /// Number of 1-coloured faces touching the root face.
    pub fn f1r3(&self) -> usize {
        self.root_one_faces().len()
    }

    /// Number of edges shared by `S1` and the root face.
    pub fn s1r3(&self) -> usize {
        let s1 = self.s1();
        self.root_face_darts().into_iter().filter(|&d| self.face[self.raw.alpha[d]] == s1).count()
    }

    pub fn is_irreducible(&self) -> bool {
        self.s1r3() == 1
    }

    /// Relabelling in breadth-first order from the root. Two maps are
    /// isomorphic as rooted maps iff their canonical forms are equal.
    pub fn canonical(&self) -> CanonicalMap {
        let n = self.dart_count();
        let mut new_of = vec![UNSET; n];
        let mut order = Vec::with_capacity(n);
        let enter = |d: usize, new_of: &mut Vec<usize>, order: &mut Vec<usize>| {
            let mut e = d;
            for _ in 0..3 {
                new_of[e] = order.len();
                order.push(e);
                e = self.raw.sigma[e];
            }
        };
        enter(self.raw.root, &mut new_of, &mut order);
        let mut i = 0;
        while i < order.len() {
            let partner = self.raw.alpha[order[i]];
            if new_of[partner] == UNSET {
                enter(partner, &mut new_of, &mut order);
            }
            i += 1;
        }
        CanonicalMap { alpha: order.iter().map(|&d| new_of[self.raw.alpha[d]]).collect() }
    }

    /// The map relabelled into canonical form.
    pub fn canonicalized(&self) -> RotationMap {
        let alpha = self.canonical().alpha;
        let sigma = (0..alpha.len()).map(|d| d - d % 3 + (d + 1) % 3).collect();
        RotationMap::new(RawMap { sigma, alpha, root: 0 }).expect("relabelling keeps validity")
    }

    /// Deterministic text export of the canonical form.
    ///
    /// ```text
    /// map vertices 2 edges 3 faces 3 root 0
    /// v0 black 0:3 1:5 2:4
    /// v1 white 3:0 4:2 5:1
    /// f0 3 0 4
    /// ```
    ///
    /// Vertex lines list darts counterclockwise as `dart:partner`; face
    /// lines give the colour and the darts in boundary order.
    pub fn to_text(&self) -> String {
        let m = self.canonicalized();
        let mut out = format!(
            "map vertices {} edges {} faces {} root {}\n",
            m.vertex_count(),
            m.edge_count(),
            m.face_count(),
            m.root()
        );
        for v in 0..m.vertex_count() {
            out.push_str(&format!("v{v} {}", m.vertex_color[m.vertex[3 * v]]));
            for d in 3 * v..3 * v + 3 {
                out.push_str(&format!(" {d}:{}", m.alpha(d)));
            }
            out.push('\n');
        }
        let mut listed = vec![false; m.face_count()];
        for start in 0..m.dart_count() {
            let f = m.face[start];
            if std::mem::replace(&mut listed[f], true) {
                continue;
            }
            out.push_str(&format!("f{f} {}", m.face_color[f]));
            let mut d = start;
            loop {
                out.push_str(&format!(" {d}"));
                d = m.phi(d);
                if d == start {
                    break;
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Rooted-isomorphism invariant: the edge involution after relabelling
/// vertex by vertex in breadth-first order from the root dart, so that
/// vertex `v` owns darts `3v..3v+3` counterclockwise.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonicalMap {
    pub alpha: Vec<usize>,
}

/// Colourings of `m` recomputed from scratch.
pub fn two_color_vertices(m: &RawMap) -> Result<Vec<Color>> {
    Ok(RotationMap::new(m.clone())?.vertex_color)
}

/// Face colour of every dart's right-hand face, recomputed from scratch.
pub fn three_color_faces(m: &RawMap) -> Result<Vec<u8>> {
    let map = RotationMap::new(m.clone())?;
    Ok(map.face.iter().map(|&f| map.face_color[f]).collect())
}

/// The theta map: two vertices joined by three edges.
pub fn base_map() -> RotationMap {
    RotationMap::new(RawMap { sigma: vec![1, 2, 0, 4, 5, 3], alpha: vec![3, 5, 4, 0, 2, 1], root: 0 })
        .expect("the theta map is valid")
}

/// Operation (1): the root edge `r -> s` is replaced by `r -> a`, `s - b`
/// and a digon between the new white vertex `a` and black vertex `b`. The
/// digon interior is a new 1-face touching the root face once.
pub fn apply_op1(m: &RotationMap) -> RotationMap {
    let mut raw = m.raw.clone();
    let rho = raw.root;
    let back = raw.alpha[rho];
    let [a_r, a_l, a_u] = raw.add_vertex();
    let [b_s, b_u, b_l] = raw.add_vertex();
    raw.pair(rho, a_r);
    raw.pair(back, b_s);
    raw.pair(a_u, b_u);
    raw.pair(a_l, b_l);
    RotationMap::new(raw).expect("operation (1) preserves validity")
}

/// Operation (2): removes the root edge `r -> s` and the first root-face
/// edge `W -> K` of the `i`-th 1-face (clockwise from the root), then adds
/// a black vertex `A` adjacent to `s`, `W`, `B` and a white vertex `B`
/// adjacent to `r`, `K`, `A`. The new root dart is `r -> B`.
pub fn apply_op2(m: &RotationMap, i: usize) -> Result<RotationMap> {
    let faces = m.root_one_faces();
    if i == 0 || i > faces.len() {
        return Err(Error::InvalidArgument(format!("op2 index {i} outside 1..={}", faces.len())));
    }
    let d = faces[i - 1].1;
    let mut raw = m.raw.clone();
    let rho = raw.root;
    let back = raw.alpha[rho];
    let d_back = raw.alpha[d];
    let [a_b, a_w, a_s] = raw.add_vertex();
    let [b_k, b_a, b_r] = raw.add_vertex();
    raw.pair(rho, b_r);
    raw.pair(back, a_s);
    raw.pair(d, a_w);
    raw.pair(d_back, b_k);
    raw.pair(a_b, b_a);
    RotationMap::new(raw)
}

/// Operation (3): chains irreducible maps `M1..Mk` by cutting, in each, the
/// root-face edge right after the root dart (the only `S1`/`R3` edge) and
/// reconnecting the loose ends cyclically. Maps are laid out as
/// `Mk, ..., M1`; the root is that of `Mk`.
pub fn apply_op3(ms: &[RotationMap]) -> Result<RotationMap> {
    if ms.len() < 2 {
        return Err(Error::InvalidArgument("op3 needs at least two maps".into()));
    }
    if let Some(p) = ms.iter().position(|m| !m.is_irreducible()) {
        return Err(Error::InvalidArgument(format!("op3 operand {} is reducible", p + 1)));
    }
    let mut raw = RawMap { sigma: Vec::new(), alpha: Vec::new(), root: 0 };
    let mut cuts = Vec::with_capacity(ms.len());
    for m in ms.iter().rev() {
        let off = raw.sigma.len();
        raw.sigma.extend(m.raw.sigma.iter().map(|&d| d + off));
        raw.alpha.extend(m.raw.alpha.iter().map(|&d| d + off));
        let x = m.phi(m.root()) + off;
        cuts.push((x, m.alpha(m.phi(m.root())) + off));
    }
    raw.root = ms[ms.len() - 1].root();
    let k = cuts.len();
    for p in 0..k {
        raw.pair(cuts[p].1, cuts[(p + 1) % k].0);
    }
    RotationMap::new(raw)
}

/// Splits a reducible map into the operands of [`apply_op3`].
pub fn undo_op3(m: &RotationMap) -> Result<Vec<RotationMap>> {
    let s1 = m.s1();
    let xs: Vec<usize> = m.root_face_darts().into_iter().filter(|&d| m.face[m.alpha(d)] == s1).collect();
    if xs.len() < 2 {
        return Err(Error::InvalidArgument("map is irreducible".into()));
    }
    let n = m.dart_count();
    let is_link = |d: usize| xs.contains(&d) || xs.contains(&m.alpha(d));
    let mut comp = vec![UNSET; n];
    let mut count = 0;
    for start in 0..n {
        if comp[start] != UNSET {
            continue;
        }
        let mut stack = vec![start];
        comp[start] = count;
        while let Some(d) = stack.pop() {
            let mut next = vec![m.sigma(d)];
            if !is_link(d) {
                next.push(m.alpha(d));
            }
            for e in next {
                if comp[e] == UNSET {
                    comp[e] = count;
                    stack.push(e);
                }
            }
        }
        count += 1;
    }
    if count != xs.len() {
        return Err(Error::InvalidMap(format!("{} cut edges but {count} components", xs.len())));
    }
    let mut x_of = vec![UNSET; count];
    let mut y_of = vec![UNSET; count];
    for &x in &xs {
        let y = m.alpha(x);
        if std::mem::replace(&mut x_of[comp[x]], x) != UNSET || std::mem::replace(&mut y_of[comp[y]], y) != UNSET {
            return Err(Error::InvalidMap("cut edges do not chain the components".into()));
        }
    }
    let mut restored = m.raw.clone();
    for c in 0..count {
        restored.pair(x_of[c], y_of[c]);
    }
    let mut chain = vec![comp[m.root()]];
    while chain.len() < count {
        let last = *chain.last().expect("chain is nonempty");
        let next = comp[m.alpha(y_of[last])];
        if chain.contains(&next) {
            return Err(Error::InvalidMap("cut edges do not form a single cycle".into()));
        }
        chain.push(next);
    }
    let mut parts = Vec::with_capacity(count);
    for &c in chain.iter().rev() {
        let mut part = restored.clone();
        part.root = restored.alpha[restored.sigma[restored.sigma[x_of[c]]]];
        parts.push(RotationMap::new(part.restrict(|d| comp[d] == c))?);
    }
    Ok(parts)
}

/// Result of peeling one irreducible step off a map.
#[derive(Clone, Debug)]
pub enum Peeled {
    Op1(RotationMap),
    /// The smaller map and the op2 index.
    Op2(RotationMap, usize),
}

/// Inverts [`apply_op1`] or [`apply_op2`] on an irreducible map with at
/// least four vertices.
pub fn undo_irreducible(m: &RotationMap) -> Result<Peeled> {
    if m.vertex_count() < 4 || !m.is_irreducible() {
        return Err(Error::InvalidArgument("needs an irreducible map with at least four vertices".into()));
    }
    let rho = m.root();
    let back = m.alpha(rho);
    let head = m.vertex_of(back);
    let (u, w) = (m.sigma(back), m.sigma(m.sigma(back)));
    let mut raw = m.raw.clone();
    if m.head(u) == m.head(w) {
        let b = m.head(u);
        let outer = m.alpha(m.sigma(m.alpha(u)));
        raw.pair(rho, outer);
        let prev = raw.restrict(|d| m.vertex[d] != head && m.vertex[d] != b);
        return Ok(Peeled::Op1(RotationMap::new(prev)?));
    }
    let (b_k, b_a) = (u, w);
    let a_b = m.alpha(b_a);
    let a_w = m.sigma(a_b);
    let a_s = m.sigma(a_w);
    let a = m.vertex_of(a_b);
    let d = m.alpha(a_w);
    raw.pair(rho, m.alpha(a_s));
    raw.pair(d, m.alpha(b_k));
    let gone = |x: usize| m.vertex[x] == head || m.vertex[x] == a;
    let d_new = (0..=d).filter(|&x| !gone(x)).count() - 1;
    let prev = RotationMap::new(raw.restrict(|x| !gone(x)))?;
    let index =
        prev.root_one_faces().iter().position(|&(_, first)| first == d_new).ok_or_else(|| {
            Error::InvalidMap("removed edge is not the first edge of a 1-face on the root face".into())
        })?;
    Ok(Peeled::Op2(prev, index + 1))
}

/// The two-vertex tree, image of [`base_map`].
fn edge_tree() -> LabeledTree {
    lambda(&LabeledTree::trivial(), 0).expect("lambda_0 of the trivial tree")
}

/// ψ: the bicubic map of a β(0,1)-tree with at least two vertices.
pub fn tree_to_map(t: &LabeledTree) -> Result<RotationMap> {
    if t.len() < 2 {
        return Err(Error::InvalidArgument("the trivial tree has no map".into()));
    }
    let t = t.with_root_mode(RootMode::SumPlusOne);
    validate(&t, 0, 1)?.into_result()?;
    psi(&t)
}

fn psi(t: &LabeledTree) -> Result<RotationMap> {
    if t.len() == 2 {
        return Ok(base_map());
    }
    if !t.is_irreducible() {
        let maps = decompose(t)?.iter().map(psi).collect::<Result<Vec<_>>>()?;
        return apply_op3(&maps);
    }
    let (below, i) = unlambda(t)?;
    let m = psi(&below)?;
    let root = below.root().expect("sum-plus-one trees have a root label");
    if i == root {
        Ok(apply_op1(&m))
    } else {
        apply_op2(&m, i as usize + 1)
    }
}

/// ψ⁻¹, in sum-plus-one root mode.
pub fn map_to_tree(m: &RotationMap) -> Result<LabeledTree> {
    if m.vertex_count() == 2 {
        return Ok(edge_tree());
    }
    if !m.is_irreducible() {
        let trees = undo_op3(m)?.iter().map(map_to_tree).collect::<Result<Vec<_>>>()?;
        return oplus_fold(&trees);
    }
    match undo_irreducible(m)? {
        Peeled::Op1(prev) => {
            let t = map_to_tree(&prev)?;
            let root = t.root().expect("sum-plus-one trees have a root label");
            lambda(&t, root)
        }
        Peeled::Op2(prev, i) => lambda(&map_to_tree(&prev)?, i as u32 - 1),
    }
}
