//! Encoder for graphs of bounded treewidth.
//!
//! A normalized decomposition of width `t` has a bag `S` whose removal splits
//! the graph into at most three parts of at most `(n - |S| + 1) / 2`
//! vertices. Each part together with `S` (turned into a clique) is encoded
//! recursively. The piece encodings are then glued: every vertex outside `S`
//! gets a suffix naming its piece and its color in a proper coloring of
//! `G - S`, taken from a code for three disjoint cliques, and the vertices of
//! `S` get an encoding of `G[S]` over a disjoint alphabet. Each level costs at
//! most `t + 2` coordinates, so the dimension is at most
//! `(t + 2)(log2 n + 1)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::encoding::{
    align_on_subset, concat_rows, edgeless_encoding, pad_encoding, verify_encoding, Encoding,
    Symbol,
};
use crate::exact::{encode_small, SearchBudget};
use crate::graph::{color_count, degeneracy_ordering, greedy_coloring, Graph, Vertex};
use crate::latin::{choose_ols_order, encode_triple_clique, mols, TripleCliqueCode};
use crate::treedecomp::{
    decompose_exact, decompose_heuristic, find_split_bag, normalize, restrict, validate, TdError,
    TdProblem, TreeDecomposition, EXACT_LIMIT,
};

/// `(t + 2)(log2 n + 1)`.
pub fn treewidth_bound(n: usize, t: usize) -> f64 {
    (t as f64 + 2.0) * (crate::log2(n.max(1)) + 1.0)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TwError {
    #[error("supplied tree decomposition is invalid: {0:?}")]
    InvalidDecomposition(Vec<TdProblem>),
    #[error("pieces disagree on shared vertex {0}")]
    PiecesDisagreeOnS(Vertex),
    #[error("encoding of piece {0} is invalid for its graph")]
    InvalidPieceEncoding(usize),
    #[error("at most three pieces can be glued, got {0}")]
    TooManyPieces(usize),
    #[error("coloring is not proper on the graph minus the shared set")]
    BadColoring,
    #[error(transparent)]
    Decomposition(#[from] TdError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwOptions {
    /// Compute an optimal decomposition when the graph has at most this many
    /// vertices (capped at the exact solver's limit); otherwise use min-fill.
    pub exact_decomposition_limit: usize,
    /// Deadline for each exact base-case search.
    pub small_deadline_ms: u64,
    /// Node limit for each exact base-case search.
    pub small_node_limit: u64,
}

impl Default for TwOptions {
    fn default() -> Self {
        TwOptions {
            exact_decomposition_limit: EXACT_LIMIT,
            small_deadline_ms: 2_000,
            small_node_limit: 5_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwEncoding {
    pub encoding: Encoding,
    /// Width of the decomposition the encoder used.
    pub width: usize,
    /// Every base case was solved optimally, so the dimension bound applies.
    pub bound_certified: bool,
}

impl TwEncoding {
    pub fn bound(&self) -> f64 {
        treewidth_bound(self.encoding.vertex_count(), self.width)
    }
}

/// Inputs for gluing up to three clique-filled pieces along a shared set.
#[derive(Debug, Clone)]
pub struct GeneralAmalgamationPlan {
    /// The shared set `S`, sorted.
    pub s: Vec<Vertex>,
    /// Piece graphs (each containing `S` as a clique) with their encodings.
    pub pieces: Vec<(Graph, Encoding)>,
    /// Proper coloring of the union graph minus `S`, colors `0..c`.
    pub coloring: BTreeMap<Vertex, usize>,
    /// Encoding of the subgraph induced by `S`.
    pub phi_s: Encoding,
}

impl GeneralAmalgamationPlan {
    /// Number of colors used outside `S` (at least 1).
    pub fn colors(&self) -> usize {
        self.coloring.values().max().map_or(1, |c| c + 1)
    }

    /// Order of the Latin squares used for the suffixes.
    pub fn ols_order(&self) -> usize {
        choose_ols_order(self.colors())
    }

    /// Suffix length `max(m, l_s)`.
    pub fn m_pad(&self) -> usize {
        self.ols_order().max(self.phi_s.dimension())
    }

    pub fn triple(&self) -> TripleCliqueCode {
        let m = self.ols_order();
        let pair = mols(m).expect("chosen orders are constructible");
        encode_triple_clique(m, &pair).expect("constructed pairs satisfy the invariants")
    }
}

/// Glues the pieces of `plan`: a vertex `x` of piece `i` outside `S` gets its
/// piece code followed by the `3K_m` codeword `(i, c(x))`, and a vertex of `S`
/// gets its (common) piece code followed by `φ_S` shifted past the `3K_m`
/// alphabet. Piece encodings are checked first.
pub fn amalgamate_general(plan: &GeneralAmalgamationPlan) -> Result<Encoding, TwError> {
    for (i, (graph, enc)) in plan.pieces.iter().enumerate() {
        let ok = verify_encoding(graph, enc)
            .map(|r| r.valid)
            .unwrap_or(false);
        if !ok {
            return Err(TwError::InvalidPieceEncoding(i));
        }
    }
    glue(plan)
}

fn glue(plan: &GeneralAmalgamationPlan) -> Result<Encoding, TwError> {
    let k = plan.pieces.len();
    if k > 3 {
        return Err(TwError::TooManyPieces(k));
    }
    let common = plan
        .pieces
        .iter()
        .map(|p| p.1.dimension())
        .max()
        .unwrap_or(0);
    let targets: Vec<(Vertex, Symbol)> = plan
        .s
        .iter()
        .enumerate()
        .map(|(j, &v)| (v, j as Symbol))
        .collect();
    let mut aligned = Vec::with_capacity(k);
    for (i, (graph, enc)) in plan.pieces.iter().enumerate() {
        if !enc.matches_domain(graph) || plan.s.iter().any(|&v| !graph.contains(v)) {
            return Err(TwError::InvalidPieceEncoding(i));
        }
        let padded = pad_encoding(enc, common).map_err(|_| TwError::InvalidPieceEncoding(i))?;
        let e = align_on_subset(&padded, &targets).map_err(|_| TwError::InvalidPieceEncoding(i))?;
        aligned.push(e);
    }
    for &v in &plan.s {
        let mut codes = aligned.iter().map(|e| e.code_of(v).expect("checked above"));
        if let Some(first) = codes.next() {
            if codes.any(|c| c != first) {
                return Err(TwError::PiecesDisagreeOnS(v));
            }
        }
    }

    let m = plan.ols_order();
    let m_pad = plan.m_pad();
    let triple = plan.triple();
    let suffix_k = |copy: usize, color: usize| -> Vec<Symbol> {
        let word = triple.code(copy, color);
        let last = *word.last().expect("order is at least 3");
        word.iter()
            .copied()
            .chain(core::iter::repeat_n(last, m_pad - m))
            .collect()
    };
    let phi_s =
        pad_encoding(&plan.phi_s, m_pad.max(1)).map_err(|_| TwError::InvalidPieceEncoding(k))?;
    let shift = m as Symbol;

    let total = common + m_pad;
    let mut rows = Vec::new();
    for (i, e) in aligned.iter().enumerate() {
        for (v, code) in e.codes() {
            if plan.s.binary_search(&v).is_ok() {
                continue;
            }
            let color = *plan.coloring.get(&v).ok_or(TwError::BadColoring)?;
            let mut row = Vec::with_capacity(total);
            row.extend_from_slice(code);
            row.extend(suffix_k(i, color));
            rows.push((v, row));
        }
    }
    for &v in &plan.s {
        let mut row = Vec::with_capacity(total);
        if let Some(e) = aligned.first() {
            row.extend_from_slice(e.code_of(v).expect("checked above"));
        } else {
            row.extend(core::iter::repeat_n(0, common));
        }
        let tail = phi_s.code_of(v).ok_or(TwError::InvalidPieceEncoding(k))?;
        row.extend(tail.iter().take(m_pad).map(|s| s + shift));
        rows.push((v, row));
    }
    Ok(concat_rows(total, rows))
}

/// Encodes `g` using `td` when given (it must be valid), otherwise an exact
/// decomposition on small graphs and a min-fill one on larger graphs.
pub fn encode_treewidth(g: &Graph, td: Option<&TreeDecomposition>) -> Result<TwEncoding, TwError> {
    encode_treewidth_with(g, td, TwOptions::default())
}

pub fn encode_treewidth_with(
    g: &Graph,
    td: Option<&TreeDecomposition>,
    opts: TwOptions,
) -> Result<TwEncoding, TwError> {
    let td = match td {
        Some(td) => {
            let report = validate(g, td);
            if !report.valid {
                return Err(TwError::InvalidDecomposition(report.problems));
            }
            td.clone()
        }
        None if g.order() <= opts.exact_decomposition_limit.min(EXACT_LIMIT) => decompose_exact(g)?,
        None => decompose_heuristic(g),
    };
    let width = td.width();
    if g.size() == 0 {
        return Ok(TwEncoding {
            encoding: edgeless_encoding(g),
            width,
            bound_certified: true,
        });
    }
    let ntd = normalize(g, &td)?;
    let mut ctx = Context {
        t: width,
        budget_ms: opts.small_deadline_ms,
        node_limit: opts.small_node_limit,
        certified: true,
    };
    let encoding = ctx.encode(g, &ntd)?;
    Ok(TwEncoding {
        encoding,
        width,
        bound_certified: ctx.certified,
    })
}

struct Context {
    t: usize,
    budget_ms: u64,
    node_limit: u64,
    certified: bool,
}

impl Context {
    fn small(&mut self, g: &Graph) -> Encoding {
        let s = encode_small(
            g,
            SearchBudget::for_graph(g)
                .with_deadline(self.budget_ms)
                .with_node_limit(self.node_limit),
        );
        self.certified &= s.exact;
        s.encoding
    }

    fn encode(&mut self, g: &Graph, ntd: &TreeDecomposition) -> Result<Encoding, TwError> {
        let n = g.order();
        if g.size() == 0 {
            return Ok(edgeless_encoding(g));
        }
        if n <= self.t + 3 {
            return Ok(self.small(g));
        }
        let split = find_split_bag(g, ntd)?;
        if split.parts.is_empty() {
            return Ok(self.small(g));
        }
        let s = split.bag;
        let mut pieces = Vec::with_capacity(split.parts.len());
        for part in &split.parts {
            let mut verts = part.clone();
            verts.extend_from_slice(&s);
            let piece = g
                .induced_subgraph(&verts)
                .and_then(|h| h.with_clique(&s))
                .expect("parts and bag are vertex subsets of g");
            let ptd = normalize(&piece, &restrict(ntd, &verts))?;
            let enc = self.encode(&piece, &ptd)?;
            pieces.push((piece, enc));
        }

        let outside: Vec<Vertex> = g
            .ids()
            .iter()
            .copied()
            .filter(|v| s.binary_search(v).is_err())
            .collect();
        let rest = g.induced_subgraph(&outside).expect("subset of g");
        let (order, _) = degeneracy_ordering(&rest);
        let colors = greedy_coloring(&rest, &order);
        debug_assert!(color_count(&colors) <= self.t + 1);
        let coloring = colors
            .iter()
            .enumerate()
            .map(|(i, &c)| (rest.id(i), c))
            .collect();

        let s_graph = g.induced_subgraph(&s).expect("bag is a subset of g");
        let phi_s = self.small(&s_graph);
        glue(&GeneralAmalgamationPlan {
            s,
            pieces,
            coloring,
            phi_s,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::pdim_exact;

    fn check(g: &Graph) -> TwEncoding {
        let r = encode_treewidth(g, None).unwrap();
        let rep = verify_encoding(g, &r.encoding).unwrap();
        assert!(rep.valid, "{:?}", rep.violations);
        if r.bound_certified {
            assert!(r.encoding.dimension() as f64 <= r.bound());
        }
        r
    }

    #[test]
    fn encode_examples() {
        let tree = Graph::new(8, [(0, 1), (1, 2), (1, 3), (3, 4), (4, 5), (4, 6), (6, 7)]).unwrap();
        let r = check(&tree);
        assert_eq!(r.width, 1);
        assert!(r.encoding.dimension() <= 12);

        let c8 = Graph::cycle(8);
        let r = check(&c8);
        assert_eq!(r.width, 2);
        assert!(r.encoding.dimension() <= 16);

        let r = check(&Graph::empty(5));
        assert_eq!(r.encoding.dimension(), 2);
        assert_eq!(r.encoding.code(3), &[0, 3]);
    }

    #[test]
    fn glue_two_paths_at_cut_vertex() {
        // 0 - 1 - 2 and 2 - 3 - 4, shared vertex 2
        let a = Graph::with_vertices([0, 1, 2], [(0, 1), (1, 2)]).unwrap();
        let b = Graph::with_vertices([2, 3, 4], [(2, 3), (3, 4)]).unwrap();
        let ea = pdim_exact(&a, SearchBudget::for_graph(&a)).unwrap().witness;
        let eb = pdim_exact(&b, SearchBudget::for_graph(&b)).unwrap().witness;
        let coloring = BTreeMap::from([(0, 0), (1, 1), (3, 0), (4, 1)]);
        let s_graph = Graph::with_vertices([2], []).unwrap();
        let plan = GeneralAmalgamationPlan {
            s: vec![2],
            pieces: vec![(a, ea), (b, eb)],
            coloring,
            phi_s: crate::encoding::identity_encoding(&s_graph),
        };
        let e = amalgamate_general(&plan).unwrap();
        assert!(verify_encoding(&Graph::path(5), &e).unwrap().valid);
        assert_eq!(e.dimension(), 2 + 3);
    }

    #[test]
    fn glue_single_piece_one_color() {
        let g = Graph::with_vertices([0, 1, 2], [(0, 2), (1, 2)]).unwrap();
        let enc = pdim_exact(&g, SearchBudget::for_graph(&g)).unwrap().witness;
        let plan = GeneralAmalgamationPlan {
            s: vec![2],
            pieces: vec![(g.clone(), enc)],
            coloring: BTreeMap::from([(0, 0), (1, 0)]),
            phi_s: crate::encoding::identity_encoding(&Graph::with_vertices([2], []).unwrap()),
        };
        let e = amalgamate_general(&plan).unwrap();
        assert!(verify_encoding(&g, &e).unwrap().valid);
    }

    #[test]
    fn glue_cycle_halves() {
        // C6 = 0..5, S = {0, 3}; halves {1,2} and {4,5}, each with edge 0-3 added
        let c6 = Graph::cycle(6);
        let s = vec![0, 3];
        let half = |xs: [Vertex; 2]| {
            let mut verts = s.clone();
            verts.extend(xs);
            let h = c6
                .induced_subgraph(&verts)
                .unwrap()
                .with_clique(&s)
                .unwrap();
            let e = pdim_exact(&h, SearchBudget::for_graph(&h)).unwrap().witness;
            (h, e)
        };
        let sg = c6.induced_subgraph(&s).unwrap();
        let plan = GeneralAmalgamationPlan {
            s: s.clone(),
            pieces: vec![half([1, 2]), half([4, 5])],
            coloring: BTreeMap::from([(1, 0), (2, 1), (4, 0), (5, 1)]),
            phi_s: pdim_exact(&sg, SearchBudget::for_graph(&sg))
                .unwrap()
                .witness,
        };
        let e = amalgamate_general(&plan).unwrap();
        assert!(verify_encoding(&c6, &e).unwrap().valid);
    }

    #[test]
    fn glue_rejects_bad_piece() {
        let a = Graph::with_vertices([0, 1], [(0, 1)]).unwrap();
        let bad = Encoding::from_codes(1, vec![vec![0], vec![0]]).unwrap();
        let plan = GeneralAmalgamationPlan {
            s: vec![1],
            pieces: vec![(a, bad)],
            coloring: BTreeMap::from([(0, 0)]),
            phi_s: crate::encoding::identity_encoding(&Graph::with_vertices([1], []).unwrap()),
        };
        assert_eq!(
            amalgamate_general(&plan),
            Err(TwError::InvalidPieceEncoding(0))
        );
    }

    #[test]
    fn supplied_decomposition_is_checked() {
        let p3 = Graph::path(3);
        let bad = TreeDecomposition::new(vec![vec![0, 1]], vec![]);
        assert!(matches!(
            encode_treewidth(&p3, Some(&bad)),
            Err(TwError::InvalidDecomposition(_))
        ));
        let good = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        let r = encode_treewidth(&p3, Some(&good)).unwrap();
        assert!(verify_encoding(&p3, &r.encoding).unwrap().valid);
    }

    #[test]
    fn random_partial_ktrees_are_valid_and_within_bound() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::SmallRng::seed_from_u64(99);
        for _ in 0..60 {
            let n = rng.gen_range(5..40);
            let k = rng.gen_range(1..4);
            let (g, td) = crate::generate::random_partial_ktree(n, k, 0.2, &mut rng);
            let r = check(&g);
            assert!(r.bound_certified);
            assert!(r.width <= k);
            let r = encode_treewidth(&g, Some(&td)).unwrap();
            assert!(verify_encoding(&g, &r.encoding).unwrap().valid);
            assert!(r.encoding.dimension() as f64 <= treewidth_bound(n, td.width()));
        }
    }

    #[test]
    fn dense_graphs_fall_back_without_losing_validity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::SmallRng::seed_from_u64(5);
        let n = 22;
        let mut edges = Vec::new();
        for u in 0..n as Vertex {
            for v in u + 1..n as Vertex {
                if rng.gen_bool(0.35) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::new(n, edges).unwrap();
        let opts = TwOptions {
            small_node_limit: 20_000,
            ..TwOptions::default()
        };
        let r = encode_treewidth_with(&g, None, opts).unwrap();
        assert!(verify_encoding(&g, &r.encoding).unwrap().valid);
    }
}
