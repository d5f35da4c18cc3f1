//! Encodings and their verifier.
//!
//! An [`Encoding`] assigns every vertex of a declared vertex set a tuple of
//! `dimension` symbols. It is valid for a graph when it is injective and two
//! vertices are adjacent exactly when their tuples differ in every
//! coordinate. Equivalently, every coordinate is a proper coloring, every
//! non-adjacent pair shares a color somewhere, and no non-adjacent pair shares
//! it everywhere.
//!
//! Symbols are unbounded non-negative integers; a coordinate's alphabet is
//! whatever symbols occur in it.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Graph, Vertex};

pub type Symbol = u64;

/// Default cap on the number of violations collected by [`verify_encoding`].
pub const DEFAULT_VIOLATION_CAP: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EncodingError {
    #[error("encoding domain does not match the graph's vertex set")]
    DomainMismatch,
    #[error("encodings need at least one coordinate")]
    ZeroDimension,
    #[error("vertex {vertex} has {found} coordinates, expected {expected}")]
    RaggedCode {
        vertex: Vertex,
        expected: usize,
        found: usize,
    },
    #[error("vertex {0} is encoded twice")]
    DuplicateVertex(Vertex),
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),
    #[error("cannot pad a {have}-encoding down to {want} coordinates")]
    PadTooShort { have: usize, want: usize },
    #[error("coordinate {0} out of range")]
    CoordinateOutOfRange(usize),
    #[error("renaming of coordinate {0} is not injective on its symbols")]
    NonInjectiveMapping(usize),
    #[error("two target vertices share a symbol in coordinate {0}")]
    TargetsClashInCoordinate(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Encoding {
    vertices: Vec<Vertex>,
    dimension: usize,
    symbols: Vec<Symbol>,
}

impl Encoding {
    /// Builds an encoding from `(vertex, code)` rows in any order.
    pub fn from_rows<I>(dimension: usize, rows: I) -> Result<Self, EncodingError>
    where
        I: IntoIterator<Item = (Vertex, Vec<Symbol>)>,
    {
        if dimension == 0 {
            return Err(EncodingError::ZeroDimension);
        }
        let mut rows: Vec<(Vertex, Vec<Symbol>)> = rows.into_iter().collect();
        rows.sort_unstable_by_key(|r| r.0);
        if let Some(w) = rows.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(EncodingError::DuplicateVertex(w[0].0));
        }
        let mut vertices = Vec::with_capacity(rows.len());
        let mut symbols = Vec::with_capacity(rows.len() * dimension);
        for (v, code) in rows {
            if code.len() != dimension {
                return Err(EncodingError::RaggedCode {
                    vertex: v,
                    expected: dimension,
                    found: code.len(),
                });
            }
            vertices.push(v);
            symbols.extend(code);
        }
        Ok(Encoding {
            vertices,
            dimension,
            symbols,
        })
    }

    /// Encoding of vertices `0..codes.len()`, vertex `i` getting `codes[i]`.
    pub fn from_codes(dimension: usize, codes: Vec<Vec<Symbol>>) -> Result<Self, EncodingError> {
        Self::from_rows(
            dimension,
            codes.into_iter().enumerate().map(|(i, c)| (i as Vertex, c)),
        )
    }

    // `vertices` must be sorted and unique; `symbols` row-major.
    pub(crate) fn from_raw(vertices: Vec<Vertex>, dimension: usize, symbols: Vec<Symbol>) -> Self {
        debug_assert!(dimension > 0);
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        debug_assert_eq!(vertices.len() * dimension, symbols.len());
        Encoding {
            vertices,
            dimension,
            symbols,
        }
    }

    /// Number of coordinates `l`.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Encoded vertices in ascending order.
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Code of the `index`-th vertex in ascending id order.
    pub fn code(&self, index: usize) -> &[Symbol] {
        &self.symbols[index * self.dimension..(index + 1) * self.dimension]
    }

    pub fn code_of(&self, v: Vertex) -> Option<&[Symbol]> {
        self.vertices.binary_search(&v).ok().map(|i| self.code(i))
    }

    pub fn codes(&self) -> impl Iterator<Item = (Vertex, &[Symbol])> + '_ {
        self.vertices
            .iter()
            .copied()
            .zip(self.symbols.chunks_exact(self.dimension))
    }

    /// Symbols of coordinate `c`, in vertex order.
    pub fn coordinate(&self, c: usize) -> impl Iterator<Item = Symbol> + '_ {
        self.symbols.iter().skip(c).step_by(self.dimension).copied()
    }

    pub fn max_symbol(&self) -> Option<Symbol> {
        self.symbols.iter().copied().max()
    }

    /// True when the encoded vertices are exactly `g`'s vertices.
    pub fn matches_domain(&self, g: &Graph) -> bool {
        self.vertices == g.ids()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// Two vertices share a whole tuple.
    NotInjective,
    /// Adjacent vertices agree in `coordinate`.
    EdgeAgrees { coordinate: usize },
    /// Non-adjacent vertices differ in every coordinate.
    NonEdgeDisagreesEverywhere,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub u: Vertex,
    pub v: Vertex,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub valid: bool,
    /// Offending pairs, at most the cap passed to the verifier.
    pub violations: Vec<Violation>,
    /// Total number of violations found, including those past the cap.
    pub violation_count: usize,
}

/// Checks that `e` is an encoding of `g`, collecting up to
/// [`DEFAULT_VIOLATION_CAP`] violations.
pub fn verify_encoding(g: &Graph, e: &Encoding) -> Result<VerifyReport, EncodingError> {
    verify_encoding_capped(g, e, DEFAULT_VIOLATION_CAP)
}

/// As [`verify_encoding`] with an explicit violation cap. The verdict always
/// covers every pair.
pub fn verify_encoding_capped(
    g: &Graph,
    e: &Encoding,
    cap: usize,
) -> Result<VerifyReport, EncodingError> {
    if !e.matches_domain(g) {
        return Err(EncodingError::DomainMismatch);
    }
    let n = g.order();
    let mut violations = Vec::new();
    let mut count = 0usize;
    let mut record = |u: usize, v: usize, kind: ViolationKind| {
        count += 1;
        if violations.len() < cap {
            violations.push(Violation {
                u: g.id(u),
                v: g.id(v),
                kind,
            });
        }
    };

    // Injectivity by sorting instead of pairwise comparison.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| e.code(a).cmp(e.code(b)).then(a.cmp(&b)));
    for w in order.windows(2) {
        if e.code(w[0]) == e.code(w[1]) {
            record(w[0].min(w[1]), w[0].max(w[1]), ViolationKind::NotInjective);
        }
    }

    for i in 0..n {
        let a = e.code(i);
        let mut nbrs = g
            .neighbors(i)
            .iter()
            .copied()
            .skip_while(|&j| j <= i)
            .peekable();
        for j in i + 1..n {
            let adjacent = nbrs.next_if_eq(&j).is_some();
            let first_agree = a.iter().zip(e.code(j)).position(|(x, y)| x == y);
            match (adjacent, first_agree) {
                (true, Some(c)) => record(i, j, ViolationKind::EdgeAgrees { coordinate: c }),
                (false, None) => record(i, j, ViolationKind::NonEdgeDisagreesEverywhere),
                _ => {}
            }
        }
    }

    Ok(VerifyReport {
        valid: count == 0,
        violations,
        violation_count: count,
    })
}

/// Pads to `q` coordinates by repeating the last coordinate.
pub fn pad_encoding(e: &Encoding, q: usize) -> Result<Encoding, EncodingError> {
    let l = e.dimension;
    if q < l {
        return Err(EncodingError::PadTooShort { have: l, want: q });
    }
    if q == l {
        return Ok(e.clone());
    }
    let mut symbols = Vec::with_capacity(e.vertices.len() * q);
    for code in e.symbols.chunks_exact(l) {
        symbols.extend_from_slice(code);
        let last = code[l - 1];
        symbols.extend(core::iter::repeat_n(last, q - l));
    }
    Ok(Encoding::from_raw(e.vertices.clone(), q, symbols))
}

/// Renames the symbols of one coordinate. Symbols absent from `mapping` keep
/// their value; the resulting map must be injective on the symbols that occur
/// in that coordinate.
pub fn rename_coordinate(
    e: &Encoding,
    coord: usize,
    mapping: &BTreeMap<Symbol, Symbol>,
) -> Result<Encoding, EncodingError> {
    if coord >= e.dimension {
        return Err(EncodingError::CoordinateOutOfRange(coord));
    }
    let image = |s: Symbol| mapping.get(&s).copied().unwrap_or(s);
    let mut used: BTreeMap<Symbol, Symbol> = BTreeMap::new();
    for s in e.coordinate(coord) {
        let t = image(s);
        match used.insert(t, s) {
            Some(prev) if prev != s => return Err(EncodingError::NonInjectiveMapping(coord)),
            _ => {}
        }
    }
    let mut out = e.clone();
    for code in out.symbols.chunks_exact_mut(e.dimension) {
        code[coord] = image(code[coord]);
    }
    Ok(out)
}

/// Renames every coordinate so that each target vertex `v` with prescribed
/// value `f` ends up encoded as `(f, ..., f)`.
///
/// In each coordinate the targets must hold pairwise distinct symbols (true
/// when the targets form a clique of the encoded graph). Non-target symbols
/// are shifted by `n + max f`, which keeps them clear of the prescribed values.
pub fn align_on_subset(
    e: &Encoding,
    targets: &[(Vertex, Symbol)],
) -> Result<Encoding, EncodingError> {
    let rows: Vec<(usize, Symbol)> = targets
        .iter()
        .map(|&(v, f)| {
            e.vertices
                .binary_search(&v)
                .map(|i| (i, f))
                .map_err(|_| EncodingError::UnknownVertex(v))
        })
        .collect::<Result<_, _>>()?;
    let Some(max_f) = rows.iter().map(|r| r.1).max() else {
        return Ok(e.clone());
    };
    let offset = e.vertices.len() as Symbol + max_f;
    let l = e.dimension;
    let mut out = e.clone();
    for c in 0..l {
        let mut mapping: BTreeMap<Symbol, Symbol> = BTreeMap::new();
        for &(i, f) in &rows {
            let s = e.symbols[i * l + c];
            if mapping.insert(s, f).is_some() {
                return Err(EncodingError::TargetsClashInCoordinate(c));
            }
        }
        for code in out.symbols.chunks_exact_mut(l) {
            let s = code[c];
            code[c] = match mapping.get(&s) {
                Some(&f) => f,
                None => s + offset,
            };
        }
    }
    Ok(out)
}

/// True when every first-coordinate symbol is below `chi`.
pub fn is_well_begun(e: &Encoding, chi: usize) -> bool {
    e.coordinate(0).all(|s| s < chi as Symbol)
}

// Assembles an encoding from unsorted rows of equal length with distinct vertices.
pub(crate) fn concat_rows(dimension: usize, mut rows: Vec<(Vertex, Vec<Symbol>)>) -> Encoding {
    rows.sort_unstable_by_key(|r| r.0);
    let mut vertices = Vec::with_capacity(rows.len());
    let mut symbols = Vec::with_capacity(rows.len() * dimension);
    for (v, code) in rows {
        debug_assert_eq!(code.len(), dimension);
        vertices.push(v);
        symbols.extend(code);
    }
    Encoding::from_raw(vertices, dimension, symbols)
}

/// The 2-encoding `(0, v)` of an edgeless graph (or `(0)` on at most one vertex).
pub fn edgeless_encoding(g: &Graph) -> Encoding {
    if g.order() <= 1 {
        return Encoding::from_raw(g.ids().to_vec(), 1, vec![0; g.order()]);
    }
    let symbols = g.ids().iter().flat_map(|&v| [0, Symbol::from(v)]).collect();
    Encoding::from_raw(g.ids().to_vec(), 2, symbols)
}

/// Single-coordinate encoding giving every vertex its own id.
pub fn identity_encoding(g: &Graph) -> Encoding {
    let symbols = g.ids().iter().map(|&v| Symbol::from(v)).collect();
    Encoding::from_raw(g.ids().to_vec(), 1, symbols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn enc(codes: &[&[Symbol]]) -> Encoding {
        Encoding::from_codes(codes[0].len(), codes.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    // The proper-colorings formulation: each coordinate is a proper coloring,
    // every non-adjacent pair shares a color somewhere but not everywhere.
    fn colorings_verdict(g: &Graph, e: &Encoding) -> bool {
        let n = g.order();
        let l = e.dimension();
        for c in 0..l {
            let col: Vec<Symbol> = e.coordinate(c).collect();
            for (u, v) in g.edges() {
                if col[u as usize] == col[v as usize] {
                    return false;
                }
            }
        }
        for u in 0..n {
            for v in u + 1..n {
                if g.adjacent(u, v) {
                    continue;
                }
                let same = (0..l).filter(|&c| e.code(u)[c] == e.code(v)[c]).count();
                if same == 0 || same == l {
                    return false;
                }
            }
        }
        // adjacent pairs differ everywhere, so injectivity is covered above
        true
    }

    #[test]
    fn verify_examples() {
        let k2 = Graph::complete(2);
        assert!(verify_encoding(&k2, &enc(&[&[0], &[1]])).unwrap().valid);

        let p3 = Graph::path(3);
        let r = verify_encoding(&p3, &enc(&[&[0, 0], &[1, 1], &[0, 1]])).unwrap();
        assert!(!r.valid);
        assert!(r.violations.contains(&Violation {
            u: 1,
            v: 2,
            kind: ViolationKind::EdgeAgrees { coordinate: 1 },
        }));

        let p4 = Graph::path(4);
        let e = enc(&[&[0, 0], &[1, 1], &[0, 2], &[1, 0]]);
        assert!(verify_encoding(&p4, &e).unwrap().valid);
        assert!(colorings_verdict(&p4, &e));
    }

    #[test]
    fn verify_reports_non_injective_and_domain() {
        let g = Graph::empty(2);
        let r = verify_encoding(&g, &enc(&[&[3, 4], &[3, 4]])).unwrap();
        assert_eq!(r.violations[0].kind, ViolationKind::NotInjective);
        let r = verify_encoding(&g, &enc(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(
            r.violations[0].kind,
            ViolationKind::NonEdgeDisagreesEverywhere
        );
        assert_eq!(
            verify_encoding(&Graph::empty(3), &enc(&[&[0], &[1]])),
            Err(EncodingError::DomainMismatch)
        );
    }

    #[test]
    fn violation_cap_keeps_full_count() {
        let g = Graph::empty(20);
        let e = Encoding::from_codes(1, (0..20).map(|i| vec![i]).collect()).unwrap();
        let r = verify_encoding_capped(&g, &e, 5).unwrap();
        assert!(!r.valid);
        assert_eq!(r.violations.len(), 5);
        assert_eq!(r.violation_count, 190);
    }

    #[test]
    fn pad_examples() {
        let e = enc(&[&[0, 1]]);
        assert_eq!(pad_encoding(&e, 4).unwrap().code(0), &[0, 1, 1, 1]);
        assert_eq!(pad_encoding(&e, 2).unwrap(), e);
        assert_eq!(
            pad_encoding(&e, 1),
            Err(EncodingError::PadTooShort { have: 2, want: 1 })
        );
        let p3 = Graph::path(3);
        let valid = enc(&[&[0, 0], &[1, 1], &[0, 2]]);
        assert!(verify_encoding(&p3, &valid).unwrap().valid);
        assert!(
            verify_encoding(&p3, &pad_encoding(&valid, 4).unwrap())
                .unwrap()
                .valid
        );
    }

    #[test]
    fn rename_examples() {
        let p4 = Graph::path(4);
        let e = enc(&[&[0, 0], &[1, 1], &[0, 2], &[1, 0]]);
        let swap = BTreeMap::from([(0, 1), (1, 0)]);
        let r = rename_coordinate(&e, 0, &swap).unwrap();
        assert!(verify_encoding(&p4, &r).unwrap().valid);
        assert_eq!(rename_coordinate(&e, 1, &BTreeMap::new()).unwrap(), e);
        // 1 -> 2 collides with the untouched symbol 2
        let bad = BTreeMap::from([(1, 2)]);
        assert_eq!(
            rename_coordinate(&e, 1, &bad),
            Err(EncodingError::NonInjectiveMapping(1))
        );
        // sending a chosen vertex to all zeros by per-coordinate transpositions
        let mut z = e.clone();
        for c in 0..2 {
            let s = z.code_of(2).unwrap()[c];
            z = rename_coordinate(&z, c, &BTreeMap::from([(s, 0), (0, s)])).unwrap();
        }
        assert_eq!(z.code_of(2).unwrap(), &[0, 0]);
        assert!(verify_encoding(&p4, &z).unwrap().valid);
    }

    #[test]
    fn align_examples() {
        let k2 = Graph::complete(2);
        let e = enc(&[&[0], &[1]]);
        let a = align_on_subset(&e, &[(0, 5), (1, 7)]).unwrap();
        assert_eq!(a.code(0), &[5]);
        assert_eq!(a.code(1), &[7]);
        assert!(verify_encoding(&k2, &a).unwrap().valid);

        let p4 = Graph::path(4);
        let e = enc(&[&[0, 0], &[1, 1], &[0, 2], &[1, 0]]);
        let a = align_on_subset(&e, &[(2, 9)]).unwrap();
        assert_eq!(a.code_of(2).unwrap(), &[9, 9]);
        assert!(verify_encoding(&p4, &a).unwrap().valid);

        // vertices 0 and 2 share symbol 0 in coordinate 0
        assert_eq!(
            align_on_subset(&e, &[(0, 1), (2, 2)]),
            Err(EncodingError::TargetsClashInCoordinate(0))
        );
    }

    #[test]
    fn well_begun_examples() {
        assert!(is_well_begun(&enc(&[&[0, 4], &[1, 3]]), 2));
        assert!(!is_well_begun(&enc(&[&[0, 4], &[2, 3]]), 2));
        assert!(is_well_begun(&enc(&[&[0, 0, 7]]), 1));
    }

    fn graph_and_encoding() -> impl Strategy<Value = (Graph, Encoding)> {
        (1usize..7, 1usize..4).prop_flat_map(|(n, l)| {
            let pairs = n * (n - 1) / 2;
            (
                proptest::collection::vec(any::<bool>(), pairs),
                proptest::collection::vec(0u64..3, n * l),
            )
                .prop_map(move |(mask, syms)| {
                    let mut edges = Vec::new();
                    let mut k = 0;
                    for u in 0..n as Vertex {
                        for v in u + 1..n as Vertex {
                            if mask[k] {
                                edges.push((u, v));
                            }
                            k += 1;
                        }
                    }
                    let g = Graph::new(n, edges).unwrap();
                    let codes = syms.chunks(l).map(|c| c.to_vec()).collect();
                    (g, Encoding::from_codes(l, codes).unwrap())
                })
        })
    }

    proptest! {
        #[test]
        fn verifier_matches_colorings_formulation((g, e) in graph_and_encoding()) {
            prop_assert_eq!(verify_encoding(&g, &e).unwrap().valid, colorings_verdict(&g, &e));
        }

        #[test]
        fn padding_and_renaming_preserve_verdict((g, e) in graph_and_encoding(), extra in 0usize..3, shift in 1u64..5) {
            let verdict = verify_encoding(&g, &e).unwrap().valid;
            let padded = pad_encoding(&e, e.dimension() + extra).unwrap();
            prop_assert_eq!(verify_encoding(&g, &padded).unwrap().valid, verdict);
            let mapping: BTreeMap<Symbol, Symbol> = (0..3).map(|s| (s, s * 7 + shift)).collect();
            let renamed = rename_coordinate(&e, e.dimension() - 1, &mapping).unwrap();
            prop_assert_eq!(verify_encoding(&g, &renamed).unwrap().valid, verdict);
        }

        #[test]
        fn alignment_preserves_verdict((g, e) in graph_and_encoding(), f in 0u64..10) {
            let verdict = verify_encoding(&g, &e).unwrap().valid;
            let aligned = align_on_subset(&e, &[(0, f)]).unwrap();
            prop_assert_eq!(aligned.code(0).iter().all(|&s| s == f), true);
            prop_assert_eq!(verify_encoding(&g, &aligned).unwrap().valid, verdict);
        }
    }
}
