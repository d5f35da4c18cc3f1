//! Randomized encoder for `k`-degenerate graphs.
//!
//! Each coordinate is a random proper coloring with `3k` colors, drawn along
//! a degeneracy order: a vertex picks uniformly among the colors not used by
//! its at most `k` earlier neighbors. Two non-adjacent vertices then share a
//! color with probability at least `1/(6k)`, so `p = ⌈8.317 k log2 n⌉`
//! colorings cover every non-adjacent pair with good probability. A final
//! coordinate holding the vertex ids makes the map injective and keeps every
//! non-adjacent pair from agreeing everywhere.
//!
//! The batch is verified and redrawn under the next seed until it covers all
//! non-adjacent pairs, so the output is always valid.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::encoding::{edgeless_encoding, identity_encoding, Encoding, Symbol};
use crate::graph::{degeneracy_ordering, positions, Graph, Vertex};

/// Constant in `p = ⌈8.317 k log2 n⌉`.
pub const COLORINGS_PER_K_LOG_N: f64 = 8.317;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegenerateParams {
    /// Degeneracy to use; computed when `None`, and rejected when below the
    /// graph's actual degeneracy.
    pub k: Option<usize>,
    pub seed: u64,
    /// Scales the number of colorings.
    pub multiplier: f64,
    pub max_retries: u32,
}

impl Default for DegenerateParams {
    fn default() -> Self {
        DegenerateParams {
            k: None,
            seed: 0,
            multiplier: 1.0,
            max_retries: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DegenerateError {
    #[error("palette of {colors} colors does not exceed back-degree {back_degree}")]
    PaletteTooSmall { colors: usize, back_degree: usize },
    #[error("k = {given} is below the degeneracy {degeneracy}")]
    KTooSmall { given: usize, degeneracy: usize },
    #[error("multiplier must be positive and finite")]
    BadMultiplier,
    #[error("no covering batch after {retries} retries ({uncovered} pairs uncovered in the last)")]
    RetriesExhausted { retries: u32, uncovered: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegenerateEncoding {
    pub encoding: Encoding,
    pub k: usize,
    /// Number of random colorings (the encoding has `p + 1` coordinates).
    pub p: usize,
    /// Batches redrawn before success.
    pub retries: u32,
}

/// `⌈8.317 k log2 n⌉`, at least 1.
pub fn coloring_count(k: usize, n: usize) -> usize {
    let raw = libm::ceil(COLORINGS_PER_K_LOG_N * k as f64 * crate::log2(n.max(1)));
    (raw as usize).max(1)
}

/// The dimension bound `⌈8.317 k log2 n⌉ + 1`.
pub fn degenerate_bound(k: usize, n: usize) -> usize {
    coloring_count(k, n) + 1
}

/// Colors the vertices along `order` (vertex ids), each uniformly from the
/// palette `0..colors` minus the colors of its earlier neighbors. Returns
/// colors by local index.
pub fn constrained_random_coloring<R: Rng + ?Sized>(
    g: &Graph,
    order: &[Vertex],
    colors: usize,
    rng: &mut R,
) -> Result<Vec<usize>, DegenerateError> {
    let pos = positions(g, order);
    let back_degree = (0..g.order())
        .map(|v| g.neighbors(v).iter().filter(|&&u| pos[u] < pos[v]).count())
        .max()
        .unwrap_or(0);
    if colors <= back_degree {
        return Err(DegenerateError::PaletteTooSmall {
            colors,
            back_degree,
        });
    }
    let mut color = vec![usize::MAX; g.order()];
    let mut used = vec![false; colors];
    let mut allowed = Vec::with_capacity(colors);
    for &id in order {
        let v = g.index_of(id).expect("order is a permutation of g");
        for &u in g.neighbors(v) {
            if color[u] != usize::MAX {
                used[color[u]] = true;
            }
        }
        allowed.clear();
        allowed.extend((0..colors).filter(|&c| !used[c]));
        color[v] = allowed[rng.gen_range(0..allowed.len())];
        for &u in g.neighbors(v) {
            if color[u] != usize::MAX {
                used[color[u]] = false;
            }
        }
    }
    Ok(color)
}

/// Draws coordinate `c` of attempt `attempt`: a ChaCha8 generator seeded
/// with `seed + attempt` on stream `c`.
fn coordinate_rng(seed: u64, attempt: u32, c: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(u64::from(attempt)));
    rng.set_stream(c as u64);
    rng
}

pub fn encode_degenerate(
    g: &Graph,
    params: DegenerateParams,
) -> Result<DegenerateEncoding, DegenerateError> {
    if !(params.multiplier.is_finite() && params.multiplier > 0.0) {
        return Err(DegenerateError::BadMultiplier);
    }
    let n = g.order();
    let (order, degeneracy) = degeneracy_ordering(g);
    let k = match params.k {
        Some(given) if given < degeneracy => {
            return Err(DegenerateError::KTooSmall { given, degeneracy })
        }
        Some(given) => given,
        None => degeneracy,
    };
    if n <= 1 || g.size() == 0 {
        let encoding = if n <= 1 {
            identity_encoding(g)
        } else {
            edgeless_encoding(g)
        };
        return Ok(DegenerateEncoding {
            encoding,
            k,
            p: 0,
            retries: 0,
        });
    }
    let base = coloring_count(k, n);
    let p = (libm::ceil(base as f64 * params.multiplier) as usize).max(1);
    let colors = 3 * k;
    let mut uncovered = 0;
    for attempt in 0..=params.max_retries {
        let batch: Vec<Vec<usize>> = (0..p)
            .map(|c| {
                constrained_random_coloring(
                    g,
                    &order,
                    colors,
                    &mut coordinate_rng(params.seed, attempt, c),
                )
            })
            .collect::<Result<_, _>>()?;
        uncovered = uncovered_pairs(g, &batch);
        if uncovered == 0 {
            let l = p + 1;
            let mut symbols = Vec::with_capacity(n * l);
            for v in 0..n {
                symbols.extend(batch.iter().map(|col| col[v] as Symbol));
                symbols.push(Symbol::from(g.id(v)));
            }
            return Ok(DegenerateEncoding {
                encoding: Encoding::from_raw(g.ids().to_vec(), l, symbols),
                k,
                p,
                retries: attempt,
            });
        }
    }
    Err(DegenerateError::RetriesExhausted {
        retries: params.max_retries,
        uncovered,
    })
}

// Non-adjacent pairs that get different colors in every coloring.
fn uncovered_pairs(g: &Graph, batch: &[Vec<usize>]) -> usize {
    let n = g.order();
    let mut count = 0;
    for u in 0..n {
        let nb = g.neighbors(u);
        let mut next = nb.partition_point(|&w| w <= u);
        for v in u + 1..n {
            if next < nb.len() && nb[next] == v {
                next += 1;
                continue;
            }
            if !batch.iter().any(|col| col[u] == col[v]) {
                count += 1;
            }
        }
    }
    count
}
