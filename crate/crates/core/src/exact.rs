//! Exact product dimension by exhaustive search, and the greedy
//! equivalence-cover encoder used as its upper bound and fallback.
//!
//! Each coordinate of an encoding is a proper coloring of an `n`-vertex
//! graph, so `n` symbols per coordinate always suffice; the search never
//! looks beyond them. Solutions are searched in a canonical form: every column
//! is a restricted growth string along the vertex order (a new symbol is
//! always the smallest unused one), and columns are lexicographically
//! non-decreasing. Any encoding can be brought into this form by relabeling
//! each column and then sorting the columns, so no dimension is missed.

use alloc::vec;
use alloc::vec::Vec;

use crate::clock::Stopwatch;
use crate::encoding::{identity_encoding, Encoding, Symbol};
use crate::graph::Graph;

/// Default wall-clock limit for one exact search.
pub const DEFAULT_DEADLINE_MS: u64 = 30_000;

/// Default cap on search nodes for one exact search.
pub const DEFAULT_NODE_LIMIT: u64 = 200_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Largest dimension the search will try.
    pub max_dimension: usize,
    /// Wall-clock limit in milliseconds (only enforced with the `std` feature).
    pub deadline_ms: u64,
    /// Cap on search nodes over all dimensions tried. Unlike the deadline it
    /// gives the same answer on every machine.
    pub node_limit: u64,
}

impl SearchBudget {
    /// `max_dimension = n`, `deadline = 30 s`, default node limit.
    pub fn for_graph(g: &Graph) -> Self {
        SearchBudget {
            max_dimension: g.order().max(1),
            deadline_ms: DEFAULT_DEADLINE_MS,
            node_limit: DEFAULT_NODE_LIMIT,
        }
    }

    pub fn with_node_limit(mut self, node_limit: u64) -> Self {
        self.node_limit = node_limit;
        self
    }

    pub fn with_deadline(mut self, deadline_ms: u64) -> Self {
        self.deadline_ms = deadline_ms.max(1);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactResult {
    pub dimension: usize,
    pub witness: Encoding,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    /// The search ran out of time or dimension budget. `upper_bound` holds a
    /// valid but possibly non-optimal encoding when one is known.
    #[error("exact search exceeded its budget")]
    BudgetExceeded { upper_bound: Option<Encoding> },
}

/// Minimum dimension of an encoding of `g`, with a witness.
pub fn pdim_exact(g: &Graph, budget: SearchBudget) -> Result<ExactResult, ExactError> {
    let n = g.order();
    if n <= 1 || g.size() == n * (n - 1) / 2 {
        // complete graphs (and K_0, K_1) are exactly the 1-dimensional ones
        return Ok(ExactResult {
            dimension: 1,
            witness: identity_encoding(g),
        });
    }
    let greedy = greedy_equivalence_encode(g);
    let upper = greedy.dimension();
    let clock = Stopwatch::start(budget.deadline_ms);
    let mut nodes_left = budget.node_limit;
    // a non-complete graph needs two coordinates
    for l in 2..upper {
        if l > budget.max_dimension {
            return Err(ExactError::BudgetExceeded {
                upper_bound: Some(greedy),
            });
        }
        let mut search = Search::new(g, l, &clock, nodes_left);
        let outcome = search.run();
        nodes_left -= search.nodes.min(nodes_left);
        match outcome {
            Outcome::Found => {
                return Ok(ExactResult {
                    dimension: l,
                    witness: search.into_encoding(),
                })
            }
            Outcome::Exhausted => continue,
            Outcome::TimedOut => {
                return Err(ExactError::BudgetExceeded {
                    upper_bound: Some(greedy),
                })
            }
        }
    }
    if upper > budget.max_dimension {
        return Err(ExactError::BudgetExceeded {
            upper_bound: Some(greedy),
        });
    }
    Ok(ExactResult {
        dimension: upper,
        witness: greedy,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallEncoding {
    pub encoding: Encoding,
    /// The dimension is optimal (the exact search completed).
    pub exact: bool,
}

/// Encodes a small graph optimally when the exact search fits the budget,
/// otherwise falls back to [`greedy_equivalence_encode`].
pub fn encode_small(g: &Graph, budget: SearchBudget) -> SmallEncoding {
    match pdim_exact(g, budget) {
        Ok(r) => SmallEncoding {
            encoding: r.witness,
            exact: true,
        },
        Err(ExactError::BudgetExceeded { upper_bound }) => SmallEncoding {
            encoding: upper_bound.unwrap_or_else(|| greedy_equivalence_encode(g)),
            exact: false,
        },
    }
}

/// Encoding from a greedy cover of the non-edges by proper colorings, closed
/// with one coordinate holding the vertex ids.
///
/// Each pass starts from singleton color classes and walks the uncovered
/// non-adjacent pairs in id order, merging the two classes whenever the union
/// stays independent. Passes repeat until every non-adjacent pair shares a
/// class in some pass.
pub fn greedy_equivalence_encode(g: &Graph) -> Encoding {
    let n = g.order();
    let words = n.div_ceil(64).max(1);
    let mut covered = vec![false; n * n];
    let mut uncovered: usize = n * n.saturating_sub(1) / 2 - g.size();
    let mut passes: Vec<Vec<usize>> = Vec::new();

    while uncovered > 0 {
        // class id per vertex, members and neighborhood bitset per class
        let mut class: Vec<usize> = (0..n).collect();
        let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        let mut nbhd: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let mut bits = vec![0u64; words];
                for &j in g.neighbors(i) {
                    bits[j / 64] |= 1 << (j % 64);
                }
                bits
            })
            .collect();
        for u in 0..n {
            for v in u + 1..n {
                if covered[u * n + v] || g.adjacent(u, v) {
                    continue;
                }
                let (a, b) = (class[u], class[v]);
                if a == b {
                    continue;
                }
                let independent = members[b]
                    .iter()
                    .all(|&x| nbhd[a][x / 64] & (1 << (x % 64)) == 0);
                if !independent {
                    continue;
                }
                let moved = core::mem::take(&mut members[b]);
                for &x in &moved {
                    class[x] = a;
                }
                members[a].extend(moved);
                let bits = core::mem::take(&mut nbhd[b]);
                for (w, x) in nbhd[a].iter_mut().zip(bits) {
                    *w |= x;
                }
            }
        }
        for group in members.iter().filter(|m| m.len() > 1) {
            for (p, &x) in group.iter().enumerate() {
                for &y in &group[p + 1..] {
                    let (x, y) = (x.min(y), x.max(y));
                    if !covered[x * n + y] {
                        covered[x * n + y] = true;
                        uncovered -= 1;
                    }
                }
            }
        }
        // canonical color names: order of first appearance along the ids
        let mut rename = vec![usize::MAX; n];
        let mut next = 0;
        let colors = (0..n)
            .map(|i| {
                let c = class[i];
                if rename[c] == usize::MAX {
                    rename[c] = next;
                    next += 1;
                }
                rename[c]
            })
            .collect();
        passes.push(colors);
    }

    let l = passes.len() + 1;
    let mut symbols = Vec::with_capacity(n * l);
    for i in 0..n {
        symbols.extend(passes.iter().map(|p| p[i] as Symbol));
        symbols.push(Symbol::from(g.id(i)));
    }
    Encoding::from_raw(g.ids().to_vec(), l, symbols)
}

enum Outcome {
    Found,
    Exhausted,
    TimedOut,
}

struct Search<'a> {
    g: &'a Graph,
    n: usize,
    l: usize,
    codes: Vec<Symbol>,
    // next unused symbol per coordinate
    fresh: Vec<Symbol>,
    // columns c and c+1 agree on all vertices assigned so far
    tied: Vec<bool>,
    clock: &'a Stopwatch,
    nodes: u64,
    node_limit: u64,
    timed_out: bool,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, l: usize, clock: &'a Stopwatch, node_limit: u64) -> Self {
        Search {
            g,
            n: g.order(),
            l,
            codes: vec![0; g.order() * l],
            fresh: vec![0; l],
            tied: vec![true; l.saturating_sub(1)],
            clock,
            nodes: 0,
            node_limit,
            timed_out: false,
        }
    }

    fn run(&mut self) -> Outcome {
        if self.place(0, 0) {
            Outcome::Found
        } else if self.timed_out {
            Outcome::TimedOut
        } else {
            Outcome::Exhausted
        }
    }

    fn into_encoding(self) -> Encoding {
        Encoding::from_raw(self.g.ids().to_vec(), self.l, self.codes)
    }

    fn sym(&self, v: usize, c: usize) -> Symbol {
        self.codes[v * self.l + c]
    }

    // Earlier non-neighbors of `v` that have not yet agreed with it on
    // coordinates `0..upto`.
    fn unmatched(&self, v: usize, upto: usize) -> impl Iterator<Item = usize> + '_ {
        let g = self.g;
        (0..v).filter(move |&u| {
            !g.adjacent(u, v) && (0..upto).all(|c| self.sym(u, c) != self.sym(v, c))
        })
    }

    fn place(&mut self, v: usize, c: usize) -> bool {
        if v == self.n {
            return true;
        }
        if c == self.l {
            // a non-neighbor may agree somewhere but not everywhere
            let dup = (0..v).any(|u| {
                !self.g.adjacent(u, v) && (0..self.l).all(|k| self.sym(u, k) == self.sym(v, k))
            });
            return !dup && self.place(v + 1, 0);
        }
        self.nodes += 1;
        if self.nodes > self.node_limit || (self.nodes & 0x3ff == 0 && self.clock.expired()) {
            self.timed_out = true;
        }
        if self.timed_out {
            return false;
        }

        // On the last coordinate every still-unmatched non-neighbor forces
        // the symbol.
        let mut forced: Option<Symbol> = None;
        if c + 1 == self.l {
            for u in self.unmatched(v, c).collect::<Vec<_>>() {
                let s = self.sym(u, c);
                match forced {
                    None => forced = Some(s),
                    Some(f) if f != s => return false,
                    _ => {}
                }
            }
        }

        let lower = if c > 0 && self.tied[c - 1] {
            self.sym(v, c - 1)
        } else {
            0
        };
        let upper = self.fresh[c].min(self.n as Symbol - 1);
        let saved_fresh = self.fresh[c];
        let saved_tie = if c > 0 { self.tied[c - 1] } else { false };
        for s in lower..=upper {
            if forced.is_some_and(|f| f != s) {
                continue;
            }
            if self
                .g
                .neighbors(v)
                .iter()
                .any(|&u| u < v && self.sym(u, c) == s)
            {
                continue;
            }
            self.codes[v * self.l + c] = s;
            self.fresh[c] = saved_fresh.max(s + 1);
            if c > 0 {
                self.tied[c - 1] = saved_tie && self.sym(v, c - 1) == s;
            }
            if self.place(v, c + 1) {
                return true;
            }
            if self.timed_out {
                break;
            }
        }
        self.fresh[c] = saved_fresh;
        if c > 0 {
            self.tied[c - 1] = saved_tie;
        }
        self.codes[v * self.l + c] = 0;
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::verify_encoding;
    use crate::graph::Vertex;

    fn exact(g: &Graph) -> ExactResult {
        let r = pdim_exact(g, SearchBudget::for_graph(g)).unwrap();
        assert!(verify_encoding(g, &r.witness).unwrap().valid);
        assert_eq!(r.witness.dimension(), r.dimension);
        r
    }

    #[test]
    fn exact_examples() {
        assert_eq!(exact(&Graph::complete(3)).dimension, 1);
        assert_eq!(exact(&Graph::empty(3)).dimension, 2);
        assert_eq!(exact(&Graph::path(5)).dimension, 2);
        assert_eq!(exact(&Graph::path(4)).dimension, 2);
        assert_eq!(exact(&Graph::path(3)).dimension, 2);
        assert_eq!(exact(&Graph::empty(1)).dimension, 1);
    }

    #[test]
    fn connected_non_complete_needs_two() {
        for g in [Graph::cycle(4), Graph::cycle(5), Graph::star(3)] {
            assert!(exact(&g).dimension >= 2);
        }
    }

    #[test]
    fn encode_small_examples() {
        let k1 = Graph::empty(1);
        let s = encode_small(&k1, SearchBudget::for_graph(&k1));
        assert!(s.exact);
        assert_eq!(s.encoding.code(0), &[0]);

        let c4 = Graph::cycle(4);
        let s = encode_small(&c4, SearchBudget::for_graph(&c4));
        assert!(s.exact && s.encoding.dimension() <= 3);
        assert!(verify_encoding(&c4, &s.encoding).unwrap().valid);

        let k5e = Graph::new(
            5,
            (0..5)
                .flat_map(|u| (u + 1..5).map(move |v| (u, v)))
                .filter(|&e| e != (0, 1)),
        )
        .unwrap();
        let s = encode_small(&k5e, SearchBudget::for_graph(&k5e));
        assert_eq!(s.encoding.dimension(), exact(&k5e).dimension);
        assert!(verify_encoding(&k5e, &s.encoding).unwrap().valid);
    }

    #[test]
    fn greedy_examples() {
        let kn = Graph::complete(5);
        let e = greedy_equivalence_encode(&kn);
        assert_eq!(e.dimension(), 1);
        assert!(verify_encoding(&kn, &e).unwrap().valid);

        let e4 = Graph::empty(4);
        let e = greedy_equivalence_encode(&e4);
        assert_eq!(e.dimension(), 2);
        for i in 0..4 {
            assert_eq!(e.code(i), &[0, i as Symbol]);
        }
    }

    #[test]
    fn greedy_on_random_graphs_is_valid_and_above_exact() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::SmallRng::seed_from_u64(7);
        for _ in 0..30 {
            let mut edges = Vec::new();
            for u in 0..8 as Vertex {
                for v in u + 1..8 {
                    if rng.gen_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::new(8, edges).unwrap();
            let e = greedy_equivalence_encode(&g);
            assert!(verify_encoding(&g, &e).unwrap().valid);
            assert!(e.dimension() >= exact(&g).dimension);
        }
    }

    #[test]
    fn encode_small_stays_below_order() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::SmallRng::seed_from_u64(11);
        for m in 2..=8usize {
            for _ in 0..5 {
                let mut edges = Vec::new();
                for u in 0..m as Vertex {
                    for v in u + 1..m as Vertex {
                        if rng.gen_bool(0.4) {
                            edges.push((u, v));
                        }
                    }
                }
                let g = Graph::new(m, edges).unwrap();
                let s = encode_small(&g, SearchBudget::for_graph(&g));
                assert!(s.exact);
                assert!(s.encoding.dimension() <= (m - 1).max(2), "m = {m}");
            }
        }
    }

    #[test]
    fn zero_budget_dimension_reports_upper_bound() {
        let g = Graph::path(5);
        let budget = SearchBudget {
            max_dimension: 1,
            ..SearchBudget::for_graph(&g)
        };
        match pdim_exact(&g, budget) {
            Err(ExactError::BudgetExceeded {
                upper_bound: Some(e),
            }) => {
                assert!(verify_encoding(&g, &e).unwrap().valid)
            }
            other => panic!("unexpected {other:?}"),
        }
        let s = encode_small(&g, budget);
        assert!(!s.exact);

        // C_7 complement needs a real search; ten nodes cannot finish it
        let h = Graph::cycle(7).complement();
        let tiny = SearchBudget::for_graph(&h).with_node_limit(10);
        assert!(matches!(
            pdim_exact(&h, tiny),
            Err(ExactError::BudgetExceeded {
                upper_bound: Some(_)
            })
        ));
    }
}
