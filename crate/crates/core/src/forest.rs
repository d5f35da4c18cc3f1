//! Forest encoder: split a forest at a balanced vertex, encode the pieces
//! recursively, and glue the piece encodings at the split vertex.
//!
//! A vertex `v` of an `n`-vertex forest is an `(ε,2)`-split vertex when the
//! forest minus `v` falls into two parts of at most `(1/2 + ε)n` vertices
//! each, and an `(ε,3)`-split vertex when it falls into three parts of at
//! most `(1/2 - ε)n` vertices each. Every forest has one or the other for
//! every `ε >= 0`. Gluing costs one extra coordinate for two pieces and two
//! for three; with `ε = √5/2 - 1` the two costs shrink the pieces at the
//! same rate per coordinate, which gives dimension at most
//! `1.441 log2 n + 3`.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::encoding::{
    concat_rows, is_well_begun, pad_encoding, rename_coordinate, Encoding, EncodingError, Symbol,
};
use crate::graph::{connected_components, Graph, Vertex};

/// `√5/2 - 1`, for which `(1/2 + ε)^2 = 1/2 - ε`.
pub fn default_epsilon() -> f64 {
    libm::sqrt(5.0) / 2.0 - 1.0
}

/// The dimension bound `1.441 log2 n + 3` for forests on `n >= 1` vertices.
pub fn forest_bound(n: usize) -> f64 {
    1.441 * crate::log2(n.max(1)) + 3.0
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ForestError {
    #[error("graph is not a forest")]
    NotAForest,
    #[error("base case handles at most three vertices, got {0}")]
    TooLarge(usize),
    #[error("piece {0} is not well-begun")]
    PieceNotWellBegun(usize),
    #[error("piece {0} does not contain the shared vertex")]
    SharedVertexMissing(usize),
    #[error("pieces share vertex {0} besides the shared vertex")]
    IntersectionNotSingleton(Vertex),
    #[error("piece encoding does not match its graph: {0}")]
    Encoding(#[from] EncodingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitKind {
    Two,
    Three,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitResult {
    pub vertex: Vertex,
    pub kind: SplitKind,
    /// Two or three vertex sets (sorted ids, possibly empty) partitioning the
    /// forest minus `vertex`, with no edges between different parts.
    pub parts: Vec<Vec<Vertex>>,
    pub epsilon: f64,
}

/// Upper bound on part sizes for the given kind: `(1/2 ± ε) n`.
pub fn part_limit(kind: SplitKind, n: usize, epsilon: f64) -> f64 {
    match kind {
        SplitKind::Two => (0.5 + epsilon) * n as f64,
        SplitKind::Three => (0.5 - epsilon) * n as f64,
    }
}

/// Finds a split vertex following the constructive argument: take the vertex
/// whose largest remaining component is smallest (ties to the smallest id).
/// If that component exceeds `(1/2 - ε)n` it forms one side of a 2-split.
/// Otherwise the components are binned first-fit decreasing under the
/// `(1/2 - ε)n` cap; up to three bins are returned as is, and with four or
/// more the two smallest bins are merged into one side of a 2-split.
pub fn find_split_vertex(t: &Graph, epsilon: f64) -> Result<SplitResult, ForestError> {
    if !t.is_forest() {
        return Err(ForestError::NotAForest);
    }
    let n = t.order();
    if n == 0 {
        return Err(ForestError::TooLarge(0));
    }
    let v = balanced_vertex(t);
    let vi = t.index_of(v).expect("balanced vertex belongs to t");
    let comps = components_without(t, vi);
    let small_cap = part_limit(SplitKind::Three, n, epsilon);

    let largest = comps.first().map_or(0, Vec::len);
    let (kind, parts) = if largest as f64 > small_cap {
        let rest = merge_sorted(comps[1..].iter());
        (SplitKind::Two, vec![comps[0].clone(), rest])
    } else {
        let mut bins: Vec<Vec<usize>> = Vec::new();
        let mut loads: Vec<usize> = Vec::new();
        for (idx, comp) in comps.iter().enumerate() {
            let size = comp.len();
            match loads.iter().position(|&l| (l + size) as f64 <= small_cap) {
                Some(b) => {
                    loads[b] += size;
                    bins[b].push(idx);
                }
                None => {
                    loads.push(size);
                    bins.push(vec![idx]);
                }
            }
        }
        let part_of = |bin: &[usize]| merge_sorted(bin.iter().map(|&i| &comps[i]));
        match bins.len() {
            0 => (SplitKind::Two, vec![Vec::new(), Vec::new()]),
            1 => (SplitKind::Two, vec![part_of(&bins[0]), Vec::new()]),
            2 => (SplitKind::Two, vec![part_of(&bins[0]), part_of(&bins[1])]),
            3 => (SplitKind::Three, bins.iter().map(|b| part_of(b)).collect()),
            _ => {
                let mut by_load: Vec<usize> = (0..bins.len()).collect();
                by_load.sort_by_key(|&b| (loads[b], b));
                let (x, y) = (by_load[0], by_load[1]);
                let merged = merge_sorted([part_of(&bins[x]), part_of(&bins[y])].iter());
                let rest = merge_sorted(
                    (0..bins.len())
                        .filter(|&b| b != x && b != y)
                        .map(|b| part_of(&bins[b]))
                        .collect::<Vec<_>>()
                        .iter(),
                );
                (SplitKind::Two, vec![merged, rest])
            }
        }
    };
    Ok(SplitResult {
        vertex: v,
        kind,
        parts,
        epsilon,
    })
}

// Vertex minimizing the largest component of `t - v`, via subtree sizes.
fn balanced_vertex(t: &Graph) -> Vertex {
    let n = t.order();
    let mut tree_of = vec![0usize; n];
    let mut tree_sizes = Vec::new();
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        let tree = tree_sizes.len();
        let start = order.len();
        seen[root] = true;
        order.push(root);
        let mut head = start;
        while head < order.len() {
            let u = order[head];
            head += 1;
            tree_of[u] = tree;
            for &w in t.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = u;
                    order.push(w);
                }
            }
        }
        tree_sizes.push(order.len() - start);
    }
    let mut sub = vec![1usize; n];
    let mut heaviest_child = vec![0usize; n];
    for &u in order.iter().rev() {
        let p = parent[u];
        if p != usize::MAX {
            sub[p] += sub[u];
            heaviest_child[p] = heaviest_child[p].max(sub[u]);
        }
    }
    // two largest trees, to know the largest tree other than v's own
    let mut top = [(0usize, usize::MAX); 2];
    for (i, &s) in tree_sizes.iter().enumerate() {
        if s > top[0].0 {
            top[1] = top[0];
            top[0] = (s, i);
        } else if s > top[1].0 {
            top[1] = (s, i);
        }
    }
    let mut best = (usize::MAX, 0usize);
    for u in 0..n {
        let tree = tree_of[u];
        let other = if top[0].1 == tree { top[1].0 } else { top[0].0 };
        let up = tree_sizes[tree] - sub[u];
        let largest = heaviest_child[u].max(up).max(other);
        if largest < best.0 {
            best = (largest, u);
        }
    }
    t.id(best.1)
}

// Components of `t` minus the vertex at local index `skip`, largest first,
// ties to the smaller id.
fn components_without(t: &Graph, skip: usize) -> Vec<Vec<Vertex>> {
    let n = t.order();
    let mut seen = vec![false; n];
    seen[skip] = true;
    let mut comps = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        queue.push_back(s);
        let mut comp = Vec::new();
        while let Some(u) = queue.pop_front() {
            comp.push(t.id(u));
            for &w in t.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps.sort_by_key(|c: &Vec<Vertex>| core::cmp::Reverse(c.len()));
    comps
}

fn merge_sorted<'a, I>(sets: I) -> Vec<Vertex>
where
    I: IntoIterator<Item = &'a Vec<Vertex>>,
{
    let mut out: Vec<Vertex> = sets.into_iter().flatten().copied().collect();
    out.sort_unstable();
    out
}

/// Well-begun 3-encodings of the six forests on at most three vertices; the
/// third coordinate is the vertex id.
pub fn base_case_encode(t: &Graph) -> Result<Encoding, ForestError> {
    let n = t.order();
    if n > 3 {
        return Err(ForestError::TooLarge(n));
    }
    if !t.is_forest() {
        return Err(ForestError::NotAForest);
    }
    let id = |i: usize| Symbol::from(t.id(i));
    let rows: Vec<(Vertex, Vec<Symbol>)> = match (n, t.size()) {
        (_, 0) => (0..n).map(|i| (t.id(i), vec![0, 0, id(i)])).collect(),
        (2, 1) => vec![(t.id(0), vec![0, 0, id(0)]), (t.id(1), vec![1, 1, id(1)])],
        (3, 1) => {
            let (a, b) = t.edges().next().expect("one edge");
            let lone = (0..3).find(|&i| t.degree(i) == 0).expect("isolated vertex");
            vec![
                (a, vec![0, 0, Symbol::from(a)]),
                (b, vec![1, 1, Symbol::from(b)]),
                (t.id(lone), vec![0, 1, id(lone)]),
            ]
        }
        (3, 2) => (0..3)
            .map(|i| {
                let side = Symbol::from(t.degree(i) == 2);
                (t.id(i), vec![side, side, id(i)])
            })
            .collect(),
        _ => unreachable!("forests on three vertices have at most two edges"),
    };
    Ok(concat_rows(3, rows))
}

/// Binary word of `i` in `bits` bits, most significant first.
pub fn binary_word(i: usize, bits: usize) -> Vec<Symbol> {
    (0..bits).rev().map(|b| ((i >> b) & 1) as Symbol).collect()
}

/// Number of suffix coordinates needed to glue `k` pieces: `⌈log2 k⌉`.
pub fn suffix_len(k: usize) -> usize {
    if k <= 1 {
        0
    } else {
        (usize::BITS - (k - 1).leading_zeros()) as usize
    }
}

/// Glues well-begun encodings of bipartite pieces that pairwise share only
/// the vertex `g`.
///
/// Pieces are padded to a common length and renamed (per-coordinate
/// transpositions) so that `g` reads all zeros. A vertex of piece `i` whose
/// code starts with `0` is then extended by the binary word of `i`, one whose
/// code starts with `1` by its complement, and `g` by `⌈log2 k⌉` twos.
pub fn amalgamate_bipartite(
    pieces: &[(Graph, Encoding)],
    g: Vertex,
) -> Result<Encoding, ForestError> {
    let k = pieces.len();
    let mut owner: BTreeMap<Vertex, usize> = BTreeMap::new();
    for (i, (graph, enc)) in pieces.iter().enumerate() {
        if !enc.matches_domain(graph) {
            return Err(EncodingError::DomainMismatch.into());
        }
        if !graph.contains(g) {
            return Err(ForestError::SharedVertexMissing(i));
        }
        if !is_well_begun(enc, 2) {
            return Err(ForestError::PieceNotWellBegun(i));
        }
        for &v in graph.ids() {
            if v != g && owner.insert(v, i).is_some() {
                return Err(ForestError::IntersectionNotSingleton(v));
            }
        }
    }
    let Some(common) = pieces.iter().map(|p| p.1.dimension()).max() else {
        return Err(ForestError::SharedVertexMissing(0));
    };
    let bits = suffix_len(k);
    let total = common + bits;
    let mut rows = Vec::with_capacity(owner.len() + 1);
    for (i, (_, enc)) in pieces.iter().enumerate() {
        let mut e = pad_encoding(enc, common)?;
        for c in 0..common {
            let s = e.code_of(g).expect("checked above")[c];
            if s != 0 {
                e = rename_coordinate(&e, c, &BTreeMap::from([(s, 0), (0, s)]))?;
            }
        }
        let word = binary_word(i, bits);
        let complement: Vec<Symbol> = word.iter().map(|b| 1 - b).collect();
        for (v, code) in e.codes() {
            if v == g {
                continue;
            }
            let suffix = if code[0] == 0 { &word } else { &complement };
            let mut row = Vec::with_capacity(total);
            row.extend_from_slice(code);
            row.extend_from_slice(suffix);
            rows.push((v, row));
        }
    }
    let mut shared = vec![0; common];
    shared.extend(core::iter::repeat_n(2, bits));
    rows.push((g, shared));
    Ok(concat_rows(total, rows))
}

/// Encodes a forest by recursive splitting with `ε = √5/2 - 1`.
pub fn encode_forest(t: &Graph) -> Result<Encoding, ForestError> {
    encode_forest_with(t, default_epsilon())
}

/// [`encode_forest`] with an explicit split parameter `ε >= 0`.
pub fn encode_forest_with(t: &Graph, epsilon: f64) -> Result<Encoding, ForestError> {
    if !t.is_forest() {
        return Err(ForestError::NotAForest);
    }
    encode_rec(t, epsilon)
}

fn encode_rec(t: &Graph, epsilon: f64) -> Result<Encoding, ForestError> {
    if t.order() <= 3 {
        return base_case_encode(t);
    }
    let split = find_split_vertex(t, epsilon)?;
    let v = split.vertex;
    let mut pieces = Vec::with_capacity(split.parts.len());
    for part in split.parts.iter().filter(|p| !p.is_empty()) {
        let mut verts = part.clone();
        verts.push(v);
        let sub = t
            .induced_subgraph(&verts)
            .expect("parts are vertex subsets of t");
        let enc = encode_rec(&sub, epsilon)?;
        pieces.push((sub, enc));
    }
    amalgamate_bipartite(&pieces, v)
}

/// Forest check used by callers that want the components too.
pub fn forest_components(t: &Graph) -> Option<Vec<Vec<Vertex>>> {
    let comps = connected_components(t);
    (t.size() + comps.len() == t.order()).then_some(comps)
}
