//! Sweeps over seeded random graph families, one CSV row per instance.

use std::io::Write;
use std::time::Instant;

use pdim_core::degenerate::{encode_degenerate, DegenerateParams};
use pdim_core::forest::{encode_forest, forest_bound};
use pdim_core::generate::{random_forest, random_k_degenerate, random_partial_ktree};
use pdim_core::treewidth::encode_treewidth;
use pdim_core::{verify_encoding, Encoding, Graph};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Random forests; `param` is unused.
    Forest,
    /// Random partial k-trees; `param` is k.
    Ktree,
    /// Random k-degenerate graphs; `param` is k.
    Degenerate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub families: Vec<Family>,
    pub sizes: Vec<usize>,
    pub params: Vec<usize>,
    pub seeds: Vec<u64>,
    /// Edge deletion probability for partial k-trees.
    pub drop: f64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            families: vec![Family::Forest, Family::Ktree, Family::Degenerate],
            sizes: vec![16, 64, 256],
            params: vec![1, 2, 3],
            seeds: (0..5).collect(),
            drop: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub family: Family,
    pub n: usize,
    pub param: Option<usize>,
    pub dimension: usize,
    /// Empty when the bound could not be certified for the instance.
    pub bound: Option<f64>,
    pub valid: bool,
    pub seed: u64,
    pub ms: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("{family:?} n={n} param={param:?} seed={seed}: {message}")]
    Encoder {
        family: Family,
        n: usize,
        param: Option<usize>,
        seed: u64,
        message: String,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Deterministic per-instance generator: the seed picks the key, the instance
/// coordinates pick the stream.
pub fn instance_rng(family: Family, n: usize, param: usize, seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((family as u64) << 56) ^ ((param as u64) << 40) ^ n as u64);
    rng
}

fn run_one(
    family: Family,
    n: usize,
    param: Option<usize>,
    seed: u64,
    drop: f64,
) -> Result<BenchRow, BenchError> {
    let fail = |message: String| BenchError::Encoder {
        family,
        n,
        param,
        seed,
        message,
    };
    let mut rng = instance_rng(family, n, param.unwrap_or(0), seed);
    let start = Instant::now();
    let (g, encoding, bound): (Graph, Encoding, Option<f64>) = match family {
        Family::Forest => {
            let g = random_forest(n, &mut rng);
            let e = encode_forest(&g).map_err(|e| fail(e.to_string()))?;
            (g, e, Some(forest_bound(n)))
        }
        Family::Ktree => {
            let (g, td) = random_partial_ktree(n, param.unwrap_or(1), drop, &mut rng);
            let tw = encode_treewidth(&g, Some(&td)).map_err(|e| fail(e.to_string()))?;
            let bound = tw.bound_certified.then(|| tw.bound());
            (g, tw.encoding, bound)
        }
        Family::Degenerate => {
            let k = param.unwrap_or(1);
            let g = random_k_degenerate(n, k, &mut rng);
            let params = DegenerateParams {
                k: Some(k),
                seed,
                ..DegenerateParams::default()
            };
            let d = encode_degenerate(&g, params).map_err(|e| fail(e.to_string()))?;
            let bound = (d.p + 1) as f64;
            (g, d.encoding, Some(bound))
        }
    };
    let ms = start.elapsed().as_millis() as u64;
    let valid = verify_encoding(&g, &encoding)
        .map(|r| r.valid)
        .unwrap_or(false);
    Ok(BenchRow {
        family,
        n,
        param,
        dimension: encoding.dimension(),
        bound,
        valid,
        seed,
        ms,
    })
}

/// Runs every instance of the grid in parallel; rows come back sorted by
/// `(family, n, param, seed)`.
pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRow>, BenchError> {
    let mut jobs = Vec::new();
    for &family in &config.families {
        let params: Vec<Option<usize>> = match family {
            Family::Forest => vec![None],
            _ => config.params.iter().copied().map(Some).collect(),
        };
        for &n in &config.sizes {
            for &param in &params {
                for &seed in &config.seeds {
                    jobs.push((family, n, param, seed));
                }
            }
        }
    }
    jobs.sort();
    jobs.dedup();
    jobs.into_par_iter()
        .map(|(family, n, param, seed)| run_one(family, n, param, seed, config.drop))
        .collect()
}

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid_is_valid_and_within_bounds() {
        let config = BenchConfig {
            sizes: vec![8, 32],
            params: vec![1, 2],
            seeds: vec![0, 1],
            ..BenchConfig::default()
        };
        let rows = run_bench(&config).unwrap();
        assert_eq!(rows.len(), 2 * 2 * (1 + 2 + 2));
        for r in &rows {
            assert!(r.valid, "{r:?}");
            if let Some(b) = r.bound {
                assert!(r.dimension as f64 <= b, "{r:?}");
            }
        }
        let keys: Vec<_> = rows
            .iter()
            .map(|r| (r.family, r.n, r.param, r.seed))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn csv_layout() {
        let row = BenchRow {
            family: Family::Ktree,
            n: 16,
            param: Some(2),
            dimension: 7,
            bound: None,
            valid: true,
            seed: 3,
            ms: 0,
        };
        let mut buf = Vec::new();
        write_csv(&[row], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "family,n,param,dimension,bound,valid,seed,ms\nktree,16,2,7,,true,3,0\n"
        );
    }
}
