//! Tree decompositions: validation, exact and heuristic construction,
//! normalization, restriction to a vertex subset, and balanced split bags.
//!
//! A decomposition is *normalized* when it is rooted at a single-vertex bag
//! and every child bag differs from its parent by exactly one vertex.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{degeneracy_ordering, Graph, Vertex};

/// Largest order accepted by [`decompose_exact`].
pub const EXACT_LIMIT: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TdError {
    #[error("exact treewidth is limited to {EXACT_LIMIT} vertices, got {0}")]
    TooLarge(usize),
    #[error("invalid tree decomposition: {0:?}")]
    InvalidInput(Vec<TdProblem>),
    #[error("no bag splits the graph into three balanced parts")]
    NoBalancedSplit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<Vec<Vertex>>,
    edges: Vec<(usize, usize)>,
    root: Option<usize>,
    normalized: bool,
}

impl TreeDecomposition {
    /// Unrooted decomposition from bags and tree edges between bag indices.
    /// Bags are sorted and deduplicated; nothing else is checked.
    pub fn new(bags: Vec<Vec<Vertex>>, edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition {
            bags,
            edges,
            root: None,
            normalized: false,
        }
    }

    pub fn bags(&self) -> &[Vec<Vertex>] {
        &self.bags
    }

    pub fn bag(&self, i: usize) -> &[Vertex] {
        &self.bags[i]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    /// Largest bag size minus one (0 when there are no bags).
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    fn tree_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            if a < adj.len() && b < adj.len() {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        adj
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TdProblem {
    /// Tree edges do not form a tree on the bag indices.
    NotATree,
    BagIndexOutOfRange(usize),
    UnknownVertex(Vertex),
    UncoveredVertex(Vertex),
    UncoveredEdge(Vertex, Vertex),
    /// The bags holding this vertex do not induce a subtree.
    Disconnected(Vertex),
    MissingRoot,
    RootNotSingleton,
    /// Parent and child bag differ in a number of vertices other than one.
    BadStep {
        parent: usize,
        child: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TdReport {
    pub valid: bool,
    pub width: usize,
    pub problems: Vec<TdProblem>,
}

/// Checks the three decomposition conditions and, when `td` claims to be
/// normalized, the root and single-step conditions.
pub fn validate(g: &Graph, td: &TreeDecomposition) -> TdReport {
    let mut problems = Vec::new();
    let k = td.bags.len();
    let mut tree_ok = true;
    for &(a, b) in &td.edges {
        for x in [a, b] {
            if x >= k {
                problems.push(TdProblem::BagIndexOutOfRange(x));
                tree_ok = false;
            }
        }
    }
    let adj = td.tree_adjacency();
    if tree_ok && k > 0 && (td.edges.len() != k - 1 || count_reached(&adj, 0, |_| true) != k) {
        problems.push(TdProblem::NotATree);
        tree_ok = false;
    }
    if k == 0 && g.order() > 0 {
        problems.push(TdProblem::NotATree);
        tree_ok = false;
    }

    // bags holding each local vertex
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); g.order()];
    let mut unknown = BTreeSet::new();
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            match g.index_of(v) {
                Some(x) => holders[x].push(i),
                None => {
                    unknown.insert(v);
                }
            }
        }
    }
    problems.extend(unknown.into_iter().map(TdProblem::UnknownVertex));
    for (x, h) in holders.iter().enumerate() {
        if h.is_empty() {
            problems.push(TdProblem::UncoveredVertex(g.id(x)));
        }
    }
    for (u, v) in g.edges() {
        if !td
            .bags
            .iter()
            .any(|b| b.binary_search(&u).is_ok() && b.binary_search(&v).is_ok())
        {
            problems.push(TdProblem::UncoveredEdge(u, v));
        }
    }
    if tree_ok {
        let mut member = vec![false; k];
        for (x, h) in holders.iter().enumerate() {
            if h.len() < 2 {
                continue;
            }
            for &i in h {
                member[i] = true;
            }
            if count_reached(&adj, h[0], |i| member[i]) != h.len() {
                problems.push(TdProblem::Disconnected(g.id(x)));
            }
            for &i in h {
                member[i] = false;
            }
        }
    }
    if td.normalized && k > 0 {
        match td.root {
            None => problems.push(TdProblem::MissingRoot),
            Some(r) if r >= k => problems.push(TdProblem::BagIndexOutOfRange(r)),
            Some(r) => {
                if td.bags[r].len() != 1 {
                    problems.push(TdProblem::RootNotSingleton);
                }
                if tree_ok {
                    for (parent, child) in parent_child_pairs(&adj, r) {
                        if symmetric_difference(&td.bags[parent], &td.bags[child]) != 1 {
                            problems.push(TdProblem::BadStep { parent, child });
                        }
                    }
                }
            }
        }
    }
    TdReport {
        valid: problems.is_empty(),
        width: td.width(),
        problems,
    }
}

fn count_reached(adj: &[Vec<usize>], start: usize, allowed: impl Fn(usize) -> bool) -> usize {
    let mut seen = vec![false; adj.len()];
    seen[start] = true;
    let mut stack = vec![start];
    let mut count = 0;
    while let Some(i) = stack.pop() {
        count += 1;
        for &j in &adj[i] {
            if !seen[j] && allowed(j) {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    count
}

// (parent, child) pairs in BFS order from `root`.
fn parent_child_pairs(adj: &[Vec<usize>], root: usize) -> Vec<(usize, usize)> {
    let mut seen = vec![false; adj.len()];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    let mut out = Vec::new();
    while let Some(i) = queue.pop_front() {
        for &j in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                out.push((i, j));
                queue.push_back(j);
            }
        }
    }
    out
}

fn symmetric_difference(a: &[Vertex], b: &[Vertex]) -> usize {
    let common = a.iter().filter(|x| b.binary_search(x).is_ok()).count();
    a.len() + b.len() - 2 * common
}

/// Decomposition from an elimination order given as local indices. Bag `i`
/// holds the `i`-th eliminated vertex and its neighbors at that point in the
/// fill-in graph; it hangs below the bag of the earliest-eliminated of those
/// neighbors.
pub fn from_elimination_order(g: &Graph, order: &[usize]) -> TreeDecomposition {
    let n = g.order();
    let mut position = vec![0usize; n];
    for (p, &v) in order.iter().enumerate() {
        position[v] = p;
    }
    let mut adj: Vec<BTreeSet<usize>> = (0..n)
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut bags = Vec::with_capacity(n);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for (p, &v) in order.iter().enumerate() {
        let later: Vec<usize> = adj[v]
            .iter()
            .copied()
            .filter(|&u| position[u] > p)
            .collect();
        for (a, &x) in later.iter().enumerate() {
            for &y in &later[a + 1..] {
                adj[x].insert(y);
                adj[y].insert(x);
            }
        }
        let mut bag: Vec<Vertex> = later.iter().map(|&u| g.id(u)).collect();
        bag.push(g.id(v));
        bags.push(bag);
        let parent = later.iter().map(|&u| position[u]).min();
        match parent {
            Some(q) => edges.push((p, q)),
            None if p + 1 < n => edges.push((p, p + 1)),
            None => {}
        }
    }
    if n == 0 {
        bags.push(Vec::new());
    }
    TreeDecomposition::new(bags, edges)
}

/// Min-fill elimination: repeatedly eliminate the vertex whose neighborhood
/// needs the fewest fill edges (ties to lower degree, then lower index).
pub fn decompose_heuristic(g: &Graph) -> TreeDecomposition {
    from_elimination_order(g, &min_fill_order(g))
}

fn min_fill_order(g: &Graph) -> Vec<usize> {
    let n = g.order();
    let mut adj: Vec<BTreeSet<usize>> = (0..n)
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let fill = |adj: &[BTreeSet<usize>], v: usize| -> usize {
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        let mut missing = 0;
        for (a, &x) in nb.iter().enumerate() {
            missing += nb[a + 1..].iter().filter(|y| !adj[x].contains(y)).count();
        }
        missing
    };
    let mut key: Vec<(usize, usize)> = (0..n).map(|v| (fill(&adj, v), adj[v].len())).collect();
    let mut queue: BTreeSet<(usize, usize, usize)> =
        (0..n).map(|v| (key[v].0, key[v].1, v)).collect();
    let mut order = Vec::with_capacity(n);
    while let Some((_, _, v)) = queue.pop_first() {
        order.push(v);
        let nb: Vec<usize> = core::mem::take(&mut adj[v]).into_iter().collect();
        for (a, &x) in nb.iter().enumerate() {
            adj[x].remove(&v);
            for &y in &nb[a + 1..] {
                adj[x].insert(y);
                adj[y].insert(x);
            }
        }
        // fill counts can change within distance two of v
        let mut dirty = BTreeSet::new();
        for &x in &nb {
            dirty.insert(x);
            dirty.extend(adj[x].iter().copied());
        }
        for u in dirty {
            if queue.remove(&(key[u].0, key[u].1, u)) {
                key[u] = (fill(&adj, u), adj[u].len());
                queue.insert((key[u].0, key[u].1, u));
            }
        }
    }
    order
}

/// Width-optimal decomposition for graphs on at most [`EXACT_LIMIT`]
/// vertices, by search over elimination prefixes with memoized failures.
pub fn decompose_exact(g: &Graph) -> Result<TreeDecomposition, TdError> {
    let n = g.order();
    if n > EXACT_LIMIT {
        return Err(TdError::TooLarge(n));
    }
    let heuristic = min_fill_order(g);
    let upper = from_elimination_order(g, &heuristic);
    let lower = contraction_lower_bound(g).max(degeneracy_ordering(g).1);
    let mut solver = ExactTw::new(g);
    for k in lower..upper.width() {
        if let Some(order) = solver.decide(k) {
            return Ok(from_elimination_order(g, &order));
        }
    }
    Ok(upper)
}

/// Treewidth lower bound from repeated min-degree contraction: contract a
/// minimum-degree vertex into its minimum-degree neighbor and record the
/// largest minimum degree seen.
fn contraction_lower_bound(g: &Graph) -> usize {
    let n = g.order();
    let mut adj: Vec<BTreeSet<usize>> = (0..n)
        .map(|v| g.neighbors(v).iter().copied().collect())
        .collect();
    let mut alive: BTreeSet<usize> = (0..n).collect();
    let mut best = 0;
    while let Some(v) = alive.iter().copied().min_by_key(|&v| (adj[v].len(), v)) {
        best = best.max(adj[v].len());
        alive.remove(&v);
        let nb = core::mem::take(&mut adj[v]);
        for &x in &nb {
            adj[x].remove(&v);
        }
        if let Some(&u) = nb.iter().min_by_key(|&&u| (adj[u].len(), u)) {
            for &x in &nb {
                if x != u {
                    adj[u].insert(x);
                    adj[x].insert(u);
                }
            }
        }
    }
    best
}

struct ExactTw {
    n: usize,
    adj: Vec<u32>,
    failed: Vec<u64>,
}

impl ExactTw {
    fn new(g: &Graph) -> Self {
        let n = g.order();
        let adj = (0..n)
            .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u))
            .collect();
        ExactTw {
            n,
            adj,
            failed: Vec::new(),
        }
    }

    // Vertices outside `s` reachable from `v` through `s`.
    fn q(&self, s: u32, v: usize) -> u32 {
        let mut inside = 0u32;
        let mut todo = self.adj[v] & s;
        let mut reach = self.adj[v];
        while todo != 0 {
            let w = todo.trailing_zeros() as usize;
            todo &= todo - 1;
            if inside >> w & 1 == 1 {
                continue;
            }
            inside |= 1 << w;
            reach |= self.adj[w];
            todo |= self.adj[w] & s & !inside;
        }
        reach & !s & !(1 << v)
    }

    fn decide(&mut self, k: usize) -> Option<Vec<usize>> {
        self.failed = vec![0; (1usize << self.n).div_ceil(64)];
        let mut order = Vec::with_capacity(self.n);
        self.extend(0, k, &mut order).then_some(order)
    }

    fn extend(&mut self, s: u32, k: usize, order: &mut Vec<usize>) -> bool {
        let full = if self.n == 32 {
            u32::MAX
        } else {
            (1u32 << self.n) - 1
        };
        let rest = full & !s;
        if rest.count_ones() as usize <= k + 1 {
            order.extend((0..self.n).filter(|&v| rest >> v & 1 == 1));
            return true;
        }
        let idx = s as usize;
        if self.failed[idx / 64] >> (idx % 64) & 1 == 1 {
            return false;
        }
        let mut qs = [0u32; 32];
        for v in (0..self.n).filter(|&v| rest >> v & 1 == 1) {
            qs[v] = self.q(s, v);
        }
        let simplicial = (0..self.n).find(|&v| {
            rest >> v & 1 == 1
                && (0..self.n)
                    .filter(|&u| qs[v] >> u & 1 == 1)
                    .all(|u| (qs[u] | 1 << u) & qs[v] == qs[v])
        });
        let mut candidates: Vec<usize> = match simplicial {
            Some(v) if qs[v].count_ones() as usize > k => Vec::new(),
            Some(v) => vec![v],
            None => (0..self.n)
                .filter(|&v| rest >> v & 1 == 1 && qs[v].count_ones() as usize <= k)
                .collect(),
        };
        candidates.sort_by_key(|&v| qs[v].count_ones());
        for v in candidates {
            order.push(v);
            if self.extend(s | 1 << v, k, order) {
                return true;
            }
            order.pop();
        }
        self.failed[idx / 64] |= 1 << (idx % 64);
        false
    }
}

/// Converts a valid decomposition into a normalized one of the same width.
///
/// Empty bags are dropped and identical neighbors merged. The root is a
/// chain growing one vertex at a time from a singleton to a smallest bag;
/// every tree edge becomes a chain that first removes and then adds one
/// vertex at a time. Disjoint neighboring bags pass through a two-vertex bag
/// (or the empty bag when the width is 0).
pub fn normalize(g: &Graph, td: &TreeDecomposition) -> Result<TreeDecomposition, TdError> {
    let report = validate(
        g,
        &TreeDecomposition {
            normalized: false,
            ..td.clone()
        },
    );
    if !report.valid {
        return Err(TdError::InvalidInput(report.problems));
    }
    if g.order() == 0 {
        return Ok(TreeDecomposition {
            bags: Vec::new(),
            edges: Vec::new(),
            root: None,
            normalized: true,
        });
    }
    let compact = merge_identical(&drop_empty_bags(td));
    let width = compact.width();
    let adj = compact.tree_adjacency();
    let start = (0..compact.len())
        .min_by_key(|&i| (compact.bags[i].len(), i))
        .expect("nonempty graph has a bag");

    let mut out = Builder::default();
    // root chain {x0}, {x0,x1}, ..., bag(start)
    let first = &compact.bags[start];
    let mut prev = out.push(vec![first[0]], None);
    for end in 2..=first.len() {
        prev = out.push(first[..end].to_vec(), Some(prev));
    }
    let mut placed = vec![usize::MAX; compact.len()];
    placed[start] = prev;
    for (parent, child) in parent_child_pairs(&adj, start) {
        let from = &compact.bags[parent];
        let to = &compact.bags[child];
        let mut cur = from.clone();
        let mut at = placed[parent];
        let shared = from.iter().any(|x| to.binary_search(x).is_ok());
        let removals: Vec<Vertex> = from
            .iter()
            .copied()
            .filter(|x| to.binary_search(x).is_err())
            .collect();
        let additions: Vec<Vertex> = to
            .iter()
            .copied()
            .filter(|x| from.binary_search(x).is_err())
            .collect();
        let (removals, additions) = if shared || width == 0 {
            (removals, additions)
        } else {
            // keep the last removed vertex until the first added one arrives
            let (mut rems, mut adds) = (removals, additions);
            let keep = rems.pop().expect("bags are nonempty");
            let first_add = adds.remove(0);
            for x in rems {
                cur.retain(|y| *y != x);
                at = out.push(cur.clone(), Some(at));
            }
            cur.push(first_add);
            cur.sort_unstable();
            at = out.push(cur.clone(), Some(at));
            cur.retain(|y| *y != keep);
            at = out.push(cur.clone(), Some(at));
            (Vec::new(), adds)
        };
        for x in removals {
            cur.retain(|y| *y != x);
            at = out.push(cur.clone(), Some(at));
        }
        for x in additions {
            let pos = cur.binary_search(&x).unwrap_err();
            cur.insert(pos, x);
            at = out.push(cur.clone(), Some(at));
        }
        placed[child] = at;
    }
    let result = TreeDecomposition {
        bags: out.bags,
        edges: out.edges,
        root: Some(0),
        normalized: true,
    };
    debug_assert!(validate(g, &result).valid);
    debug_assert_eq!(result.width(), td.width());
    Ok(result)
}

#[derive(Default)]
struct Builder {
    bags: Vec<Vec<Vertex>>,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    fn push(&mut self, bag: Vec<Vertex>, parent: Option<usize>) -> usize {
        let i = self.bags.len();
        self.bags.push(bag);
        if let Some(p) = parent {
            self.edges.push((p, i));
        }
        i
    }
}

// Removes empty bags; each remaining bag hangs below its nearest nonempty
// ancestor. Keeps one empty bag if all are empty.
fn drop_empty_bags(td: &TreeDecomposition) -> TreeDecomposition {
    let k = td.bags.len();
    let adj = td.tree_adjacency();
    let keep: Vec<bool> = td.bags.iter().map(|b| !b.is_empty()).collect();
    let Some(root) = (0..k).find(|&i| keep[i]) else {
        return TreeDecomposition::new(vec![Vec::new()], Vec::new());
    };
    let mut new_index = vec![usize::MAX; k];
    let mut bags = Vec::new();
    for i in 0..k {
        if keep[i] {
            new_index[i] = bags.len();
            bags.push(td.bags[i].clone());
        }
    }
    // nearest kept ancestor, BFS from root; other tree components (if any)
    // are attached to the root
    let mut anchor = vec![usize::MAX; k];
    let mut edges = Vec::new();
    let mut seen = vec![false; k];
    for start in core::iter::once(root).chain(0..k) {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        anchor[start] = if keep[start] { start } else { root };
        if keep[start] && start != root {
            edges.push((new_index[root], new_index[start]));
        }
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                if seen[j] {
                    continue;
                }
                seen[j] = true;
                if keep[j] {
                    edges.push((new_index[anchor[i]], new_index[j]));
                    anchor[j] = j;
                } else {
                    anchor[j] = anchor[i];
                }
                queue.push_back(j);
            }
        }
    }
    TreeDecomposition::new(bags, edges)
}

// Contracts tree edges whose endpoints carry the same bag.
fn merge_identical(td: &TreeDecomposition) -> TreeDecomposition {
    let k = td.bags.len();
    let mut rep: Vec<usize> = (0..k).collect();
    fn find(rep: &mut [usize], mut x: usize) -> usize {
        while rep[x] != x {
            rep[x] = rep[rep[x]];
            x = rep[x];
        }
        x
    }
    for &(a, b) in &td.edges {
        if td.bags[a] == td.bags[b] {
            let (ra, rb) = (find(&mut rep, a), find(&mut rep, b));
            rep[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut new_index = vec![usize::MAX; k];
    let mut bags = Vec::new();
    for i in 0..k {
        if find(&mut rep, i) == i {
            new_index[i] = bags.len();
            bags.push(td.bags[i].clone());
        }
    }
    let edges = td
        .edges
        .iter()
        .filter(|&&(a, b)| td.bags[a] != td.bags[b])
        .map(|&(a, b)| (new_index[find(&mut rep, a)], new_index[find(&mut rep, b)]))
        .collect();
    TreeDecomposition::new(bags, edges)
}

/// Decomposition of the subgraph induced by `x`: bags are intersected with
/// `x` and emptied bags contracted away.
pub fn restrict(td: &TreeDecomposition, x: &[Vertex]) -> TreeDecomposition {
    let mut keep: Vec<Vertex> = x.to_vec();
    keep.sort_unstable();
    let bags = td
        .bags
        .iter()
        .map(|b| {
            b.iter()
                .copied()
                .filter(|v| keep.binary_search(v).is_ok())
                .collect()
        })
        .collect();
    drop_empty_bags(&TreeDecomposition::new(bags, td.edges.clone()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BagSplit {
    /// Index of the split bag in the decomposition.
    pub l: usize,
    pub bag: Vec<Vertex>,
    /// At most three nonempty vertex sets partitioning `V(G) - bag`, with no
    /// edges between them.
    pub parts: Vec<Vec<Vertex>>,
}

/// Size cap `(n - |X_l| + 1) / 2` on parts, compared as `2·size <= n - |X_l| + 1`.
pub fn split_cap_holds(n: usize, bag_len: usize, size: usize) -> bool {
    2 * size <= n + 1 - bag_len.min(n + 1)
}

/// Picks the bag whose removal leaves the smallest largest piece (ties to
/// smaller bags, then lower index) and groups the pieces into at most three
/// parts of size at most `(n - |X_l| + 1) / 2`.
///
/// A piece is the set of non-bag vertices appearing in one component of the
/// tree minus the bag's node.
pub fn find_split_bag(g: &Graph, ntd: &TreeDecomposition) -> Result<BagSplit, TdError> {
    let report = validate(g, ntd);
    if !report.valid {
        return Err(TdError::InvalidInput(report.problems));
    }
    let n = g.order();
    let k = ntd.len();
    if k == 0 {
        return Ok(BagSplit {
            l: 0,
            bag: Vec::new(),
            parts: Vec::new(),
        });
    }
    let adj = ntd.tree_adjacency();
    let root = ntd.root.unwrap_or(0);
    let pairs = parent_child_pairs(&adj, root);
    let mut parent = vec![usize::MAX; k];
    for &(p, c) in &pairs {
        parent[c] = p;
    }
    // top node of each vertex: its bag closest to the root
    let mut depth = vec![0usize; k];
    for &(p, c) in &pairs {
        depth[c] = depth[p] + 1;
    }
    let mut top = vec![usize::MAX; n];
    for (i, bag) in ntd.bags.iter().enumerate() {
        for &v in bag {
            let x = g.index_of(v).expect("validated");
            if top[x] == usize::MAX || depth[i] < depth[top[x]] {
                top[x] = i;
            }
        }
    }
    let mut sub_top = vec![0usize; k];
    for &t in &top {
        sub_top[t] += 1;
    }
    for &(p, c) in pairs.iter().rev() {
        sub_top[p] += sub_top[c];
    }
    let piece_sizes = |l: usize| -> Vec<usize> {
        let mut sizes: Vec<usize> = adj[l]
            .iter()
            .filter(|&&c| parent[c] == l)
            .map(|&c| sub_top[c])
            .collect();
        let below: usize = sizes.iter().sum();
        if parent[l] != usize::MAX {
            sizes.push(n - ntd.bags[l].len() - below);
        }
        sizes
    };
    let mut ranking: Vec<(usize, usize, usize)> = (0..k)
        .map(|l| {
            let largest = piece_sizes(l).into_iter().max().unwrap_or(0);
            (largest, ntd.bags[l].len(), l)
        })
        .collect();
    ranking.sort_unstable();
    for &(_, bag_len, l) in &ranking {
        let pieces = pieces_at(g, ntd, &adj, l);
        if let Some(parts) = bin_pieces(&pieces, n, bag_len) {
            return Ok(BagSplit {
                l,
                bag: ntd.bags[l].clone(),
                parts,
            });
        }
    }
    Err(TdError::NoBalancedSplit)
}

// Non-bag vertices per component of the tree minus node `l`.
fn pieces_at(g: &Graph, td: &TreeDecomposition, adj: &[Vec<usize>], l: usize) -> Vec<Vec<Vertex>> {
    let bag = &td.bags[l];
    let mut seen = vec![false; td.len()];
    seen[l] = true;
    let mut pieces = Vec::new();
    for &s in &adj[l] {
        seen[s] = true;
        let mut stack = vec![s];
        let mut verts = BTreeSet::new();
        while let Some(i) = stack.pop() {
            verts.extend(
                td.bags[i]
                    .iter()
                    .copied()
                    .filter(|v| bag.binary_search(v).is_err()),
            );
            for &j in &adj[i] {
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        if !verts.is_empty() {
            pieces.push(verts.into_iter().collect::<Vec<_>>());
        }
    }
    debug_assert_eq!(
        pieces.iter().map(Vec::len).sum::<usize>(),
        g.order() - bag.len()
    );
    pieces
}

// First-fit decreasing into at most three bins under the cap, with an
// exhaustive fallback for up to twelve pieces.
fn bin_pieces(pieces: &[Vec<Vertex>], n: usize, bag_len: usize) -> Option<Vec<Vec<Vertex>>> {
    if pieces.iter().any(|p| !split_cap_holds(n, bag_len, p.len())) {
        return None;
    }
    let mut order: Vec<usize> = (0..pieces.len()).collect();
    order.sort_by(|&a, &b| pieces[b].len().cmp(&pieces[a].len()).then(a.cmp(&b)));
    let mut loads: Vec<usize> = Vec::new();
    let mut assign = vec![0usize; pieces.len()];
    for &p in &order {
        let size = pieces[p].len();
        match loads
            .iter()
            .position(|&l| split_cap_holds(n, bag_len, l + size))
        {
            Some(b) => {
                loads[b] += size;
                assign[p] = b;
            }
            None => {
                assign[p] = loads.len();
                loads.push(size);
            }
        }
    }
    if loads.len() > 3 {
        if pieces.len() > 12 {
            return None;
        }
        assign = exhaustive_bins(pieces, n, bag_len)?;
        loads = vec![0; 3];
    }
    let bins = loads.len().max(assign.iter().max().map_or(0, |m| m + 1));
    let mut parts = vec![Vec::new(); bins];
    for (p, &b) in assign.iter().enumerate() {
        parts[b].extend_from_slice(&pieces[p]);
    }
    parts.retain(|p: &Vec<Vertex>| !p.is_empty());
    for p in &mut parts {
        p.sort_unstable();
    }
    Some(parts)
}

fn exhaustive_bins(pieces: &[Vec<Vertex>], n: usize, bag_len: usize) -> Option<Vec<usize>> {
    let total = 3usize.pow(pieces.len() as u32);
    (0..total).find_map(|mut code| {
        let mut loads = [0usize; 3];
        let mut assign = Vec::with_capacity(pieces.len());
        for p in pieces {
            let b = code % 3;
            code /= 3;
            loads[b] += p.len();
            assign.push(b);
        }
        loads
            .iter()
            .all(|&l| split_cap_holds(n, bag_len, l))
            .then_some(assign)
    })
}
