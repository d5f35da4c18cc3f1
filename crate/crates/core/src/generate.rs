//! Seeded random instance families.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Graph, Vertex};
use crate::treedecomp::TreeDecomposition;

/// Random forest: vertex `i` (in a shuffled labeling) attaches to a uniform
/// earlier vertex with probability 0.95 and starts a new tree otherwise.
pub fn random_forest<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Graph {
    attach(n, 0.95, rng)
}

/// Uniform-attachment random tree.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Graph {
    attach(n, 1.0, rng)
}

fn attach<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut label: Vec<Vertex> = (0..n as Vertex).collect();
    label.shuffle(rng);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for i in 1..n {
        if rng.gen_bool(p) {
            let j = rng.gen_range(0..i);
            edges.push((label[i], label[j]));
        }
    }
    Graph::new(n, edges).expect("attachment edges are simple")
}

/// Random partial `k`-tree with a witnessing decomposition of width at most
/// `k`. A `k`-tree is grown from `K_{k+1}` by joining each new vertex to a
/// uniformly chosen existing `k`-clique; each edge is then deleted with
/// probability `drop`.
pub fn random_partial_ktree<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    drop: f64,
    rng: &mut R,
) -> (Graph, TreeDecomposition) {
    let base = n.min(k + 1);
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    for u in 0..base as Vertex {
        for v in u + 1..base as Vertex {
            edges.push((u, v));
        }
    }
    let mut bags: Vec<Vec<Vertex>> = Vec::new();
    let mut tree = Vec::new();
    if n > 0 {
        bags.push((0..base as Vertex).collect());
    }
    // k-cliques with a bag containing them
    let mut cliques: Vec<(Vec<Vertex>, usize)> = Vec::new();
    if base == k + 1 && k > 0 {
        for skip in 0..base {
            let c: Vec<Vertex> = (0..base as Vertex)
                .filter(|&x| x as usize != skip)
                .collect();
            cliques.push((c, 0));
        }
    }
    for v in base..n {
        let v = v as Vertex;
        let bag_index = bags.len();
        if cliques.is_empty() {
            // k = 0: isolated vertices
            bags.push(vec![v]);
            tree.push((bag_index - 1, bag_index));
            continue;
        }
        let (clique, home) = cliques[rng.gen_range(0..cliques.len())].clone();
        edges.extend(clique.iter().map(|&u| (u, v)));
        let mut bag = clique.clone();
        bag.push(v);
        bags.push(bag);
        tree.push((home, bag_index));
        for skip in 0..clique.len() {
            let mut c = clique.clone();
            c[skip] = v;
            c.sort_unstable();
            cliques.push((c, bag_index));
        }
    }
    edges.retain(|_| !rng.gen_bool(drop));
    let g = Graph::new(n, edges).expect("k-tree edges are simple");
    (g, TreeDecomposition::new(bags, tree))
}

/// Random graph of degeneracy at most `k`: along a random order, vertex `i`
/// joins `min(k, i)` distinct uniformly chosen earlier vertices.
pub fn random_k_degenerate<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Graph {
    let mut order: Vec<Vertex> = (0..n as Vertex).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let picks = rand::seq::index::sample(rng, i, k.min(i));
        edges.extend(picks.iter().map(|j| (order[j], order[i])));
    }
    Graph::new(n, edges).expect("back edges are simple")
}
