//! Simple undirected graphs with stable vertex identities.
//!
//! Every vertex carries a global integer id. Subgraph operations never
//! renumber ids, so an id assigned at the top of a recursion is still unique
//! at its leaves. Internally a graph stores its ids in ascending order; the
//! position of an id in that order is its *local index*, and adjacency is kept
//! as sorted local-index lists. Whenever a function returns per-vertex data as
//! a plain `Vec`, it is indexed by local index.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

/// Global vertex identity.
pub type Vertex = u32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
    #[error("vertex {0} declared twice")]
    DuplicateVertex(Vertex),
    #[error("graph is not bipartite")]
    OddCycle,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    ids: Vec<Vertex>,
    adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl Graph {
    /// Graph on vertices `0..n`.
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        Self::with_vertices(0..n as Vertex, edges)
    }

    /// Graph on an arbitrary set of vertex ids.
    pub fn with_vertices<V, I>(vertices: V, edges: I) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = Vertex>,
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut ids: Vec<Vertex> = vertices.into_iter().collect();
        ids.sort_unstable();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateVertex(w[0]));
        }
        let mut adj = vec![Vec::new(); ids.len()];
        let mut edge_count = 0;
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let i = ids
                .binary_search(&u)
                .map_err(|_| GraphError::UnknownVertex(u))?;
            let j = ids
                .binary_search(&v)
                .map_err(|_| GraphError::UnknownVertex(v))?;
            adj[i].push(j);
            adj[j].push(i);
            edge_count += 1;
        }
        for (i, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let (a, b) = (ids[i].min(ids[w[0]]), ids[i].max(ids[w[0]]));
                return Err(GraphError::DuplicateEdge(a, b));
            }
        }
        Ok(Graph {
            ids,
            adj,
            edge_count,
        })
    }

    // Builds from already-deduplicated local adjacency; lists need not be sorted.
    fn from_parts(ids: Vec<Vertex>, mut adj: Vec<Vec<usize>>) -> Self {
        let mut twice = 0;
        for list in &mut adj {
            list.sort_unstable();
            twice += list.len();
        }
        Graph {
            ids,
            adj,
            edge_count: twice / 2,
        }
    }

    /// Edgeless graph on `0..n`.
    pub fn empty(n: usize) -> Self {
        Graph::from_parts((0..n as Vertex).collect(), vec![Vec::new(); n])
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n)
            .map(|i| (0..n).filter(|&j| j != i).collect())
            .collect();
        Graph::from_parts((0..n as Vertex).collect(), adj)
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let edges = (1..n as Vertex).map(|i| (i - 1, i));
        Graph::new(n, edges).expect("path edges are simple")
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        let edges = (0..n as Vertex).map(|i| (i, (i + 1) % n as Vertex));
        Graph::new(n, edges).expect("cycle edges are simple")
    }

    /// Star with center `0` and leaves `1..=leaves`.
    pub fn star(leaves: usize) -> Self {
        let edges = (1..=leaves as Vertex).map(|i| (0, i));
        Graph::new(leaves + 1, edges).expect("star edges are simple")
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.ids.len()
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.edge_count
    }

    /// Vertex ids in ascending order.
    pub fn ids(&self) -> &[Vertex] {
        &self.ids
    }

    pub fn id(&self, index: usize) -> Vertex {
        self.ids[index]
    }

    pub fn index_of(&self, v: Vertex) -> Option<usize> {
        self.ids.binary_search(&v).ok()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.index_of(v).is_some()
    }

    /// Sorted local neighbor indices of the vertex at `index`.
    pub fn neighbors(&self, index: usize) -> &[usize] {
        &self.adj[index]
    }

    pub fn degree(&self, index: usize) -> usize {
        self.adj[index].len()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        let (a, b) = if self.adj[i].len() <= self.adj[j].len() {
            (i, j)
        } else {
            (j, i)
        };
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Adjacency test by vertex id; unknown ids are never adjacent.
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Some(i), Some(j)) => self.adjacent(i, j),
            _ => false,
        }
    }

    /// Edges as id pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj.iter().enumerate().flat_map(move |(i, list)| {
            list.iter()
                .filter(move |&&j| j > i)
                .map(move |&j| (self.ids[i], self.ids[j]))
        })
    }

    /// Acyclic check: a graph is a forest iff `m = n - #components`.
    pub fn is_forest(&self) -> bool {
        self.edge_count + connected_components(self).len() == self.order()
    }

    /// Local indices of `vertices`, or the first unknown id.
    pub fn indices_of(&self, vertices: &[Vertex]) -> Result<Vec<usize>, GraphError> {
        vertices
            .iter()
            .map(|&v| self.index_of(v).ok_or(GraphError::UnknownVertex(v)))
            .collect()
    }

    /// The subgraph induced by `x`, keeping the original ids.
    pub fn induced_subgraph(&self, x: &[Vertex]) -> Result<Graph, GraphError> {
        let mut keep: Vec<usize> = self.indices_of(x)?;
        keep.sort_unstable();
        keep.dedup();
        let mut local = vec![usize::MAX; self.order()];
        for (new, &old) in keep.iter().enumerate() {
            local[old] = new;
        }
        let adj = keep
            .iter()
            .map(|&old| {
                self.adj[old]
                    .iter()
                    .filter_map(|&j| (local[j] != usize::MAX).then_some(local[j]))
                    .collect()
            })
            .collect();
        let ids = keep.iter().map(|&i| self.ids[i]).collect();
        Ok(Graph::from_parts(ids, adj))
    }

    /// Same vertices, with every pair inside `s` joined.
    pub fn with_clique(&self, s: &[Vertex]) -> Result<Graph, GraphError> {
        let mut members = self.indices_of(s)?;
        members.sort_unstable();
        members.dedup();
        let mut adj = self.adj.clone();
        for &i in &members {
            let mut merged: Vec<usize> = adj[i]
                .iter()
                .copied()
                .chain(members.iter().copied().filter(|&j| j != i))
                .collect();
            merged.sort_unstable();
            merged.dedup();
            adj[i] = merged;
        }
        Ok(Graph::from_parts(self.ids.clone(), adj))
    }

    pub fn complement(&self) -> Graph {
        let n = self.order();
        let adj = (0..n)
            .map(|i| (0..n).filter(|&j| j != i && !self.adjacent(i, j)).collect())
            .collect();
        Graph::from_parts(self.ids.clone(), adj)
    }
}

/// Connected components as sorted id lists, largest first; ties go to the
/// component holding the smaller id.
pub fn connected_components(g: &Graph) -> Vec<Vec<Vertex>> {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut comp = Vec::new();
        while let Some(u) = queue.pop_front() {
            comp.push(g.id(u));
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    // Discovery order already sorts by smallest id, and the sort is stable.
    comps.sort_by_key(|c| core::cmp::Reverse(c.len()));
    comps
}

/// Degeneracy ordering by repeated removal of a minimum-degree vertex (ties
/// to the smallest id). Returns the ordering in which every vertex has at most
/// `k` earlier neighbors, together with the degeneracy `k`.
pub fn degeneracy_ordering(g: &Graph) -> (Vec<Vertex>, usize) {
    let n = g.order();
    let mut degree: Vec<usize> = (0..n).map(|i| g.degree(i)).collect();
    let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|i| (degree[i], i)).collect();
    let mut removed = vec![false; n];
    let mut removal = Vec::with_capacity(n);
    let mut k = 0;
    while let Some((d, u)) = queue.pop_first() {
        k = k.max(d);
        removed[u] = true;
        removal.push(g.id(u));
        for &w in g.neighbors(u) {
            if !removed[w] {
                queue.remove(&(degree[w], w));
                degree[w] -= 1;
                queue.insert((degree[w], w));
            }
        }
    }
    removal.reverse();
    (removal, k)
}

/// Largest number of earlier neighbors over all positions of `order`.
pub fn back_degree(g: &Graph, order: &[Vertex]) -> usize {
    let pos = positions(g, order);
    (0..g.order())
        .map(|i| g.neighbors(i).iter().filter(|&&j| pos[j] < pos[i]).count())
        .max()
        .unwrap_or(0)
}

// Position of every local index inside `order`; panics unless `order` is a
// permutation of the vertex set.
pub(crate) fn positions(g: &Graph, order: &[Vertex]) -> Vec<usize> {
    assert_eq!(order.len(), g.order(), "order must list every vertex once");
    let mut pos = vec![usize::MAX; g.order()];
    for (p, &v) in order.iter().enumerate() {
        let i = g.index_of(v).expect("order contains an unknown vertex");
        assert_eq!(pos[i], usize::MAX, "order lists vertex {v} twice");
        pos[i] = p;
    }
    pos
}

/// Greedy coloring along `order`: each vertex takes the smallest color not
/// used by an already colored neighbor. Colors are indexed by local index.
///
/// Panics if `order` is not a permutation of the vertex set.
pub fn greedy_coloring(g: &Graph, order: &[Vertex]) -> Vec<usize> {
    let pos = positions(g, order);
    let mut color = vec![usize::MAX; g.order()];
    let mut taken: Vec<bool> = Vec::new();
    for &v in order {
        let i = g.index_of(v).expect("checked by positions");
        taken.clear();
        taken.resize(g.degree(i) + 1, false);
        for &j in g.neighbors(i) {
            if pos[j] < pos[i] && color[j] < taken.len() {
                taken[color[j]] = true;
            }
        }
        color[i] = taken.iter().position(|&t| !t).expect("degree + 1 slots");
    }
    color
}

/// Number of colors in a coloring (`max + 1`).
pub fn color_count(coloring: &[usize]) -> usize {
    coloring.iter().max().map_or(0, |&c| c + 1)
}

/// Proper 2-coloring by BFS; each component's smallest id gets color 0.
pub fn bipartition(g: &Graph) -> Result<Vec<u8>, GraphError> {
    let n = g.order();
    let mut side = vec![u8::MAX; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        if side[root] != u8::MAX {
            continue;
        }
        side[root] = 0;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if side[w] == u8::MAX {
                    side[w] = 1 - side[u];
                    queue.push_back(w);
                } else if side[w] == side[u] {
                    return Err(GraphError::OddCycle);
                }
            }
        }
    }
    Ok(side)
}

/// True when no edge joins two vertices of the same color.
pub fn is_proper_coloring(g: &Graph, coloring: &[usize]) -> bool {
    (0..g.order()).all(|i| g.neighbors(i).iter().all(|&j| coloring[i] != coloring[j]))
}
