use pdim_core::encoding::is_well_begun;
use pdim_core::forest::{encode_forest, find_split_vertex, forest_bound, part_limit, SplitKind};
use pdim_core::generate::random_forest;
use pdim_core::{verify_encoding, Graph, Vertex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// Every labeled tree on `m` vertices, decoded from its Prüfer sequence.
fn prufer_trees(m: usize, mut f: impl FnMut(Vec<(Vertex, Vertex)>)) {
    if m == 1 {
        f(Vec::new());
        return;
    }
    if m == 2 {
        f(vec![(0, 1)]);
        return;
    }
    let len = m - 2;
    let mut seq = vec![0usize; len];
    loop {
        let mut degree = vec![1usize; m];
        for &x in &seq {
            degree[x] += 1;
        }
        let mut edges = Vec::with_capacity(m - 1);
        for &x in &seq {
            let leaf = (0..m).find(|&v| degree[v] == 1).unwrap();
            edges.push((leaf as Vertex, x as Vertex));
            degree[leaf] -= 1;
            degree[x] -= 1;
        }
        let rest: Vec<usize> = (0..m).filter(|&v| degree[v] == 1).collect();
        edges.push((rest[0] as Vertex, rest[1] as Vertex));
        f(edges);
        // next sequence
        let mut i = 0;
        while i < len {
            seq[i] += 1;
            if seq[i] < m {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
        if i == len {
            return;
        }
    }
}

#[test]
fn every_labeled_forest_up_to_seven_vertices() {
    // forests on n vertices are the trees on n + 1 vertices minus vertex n
    let mut checked = 0;
    for n in 1..=7usize {
        prufer_trees(n + 1, |edges| {
            let kept: Vec<_> = edges
                .into_iter()
                .filter(|&(a, b)| a as usize != n && b as usize != n)
                .collect();
            let t = Graph::new(n, kept).unwrap();
            let e = encode_forest(&t).unwrap();
            assert!(verify_encoding(&t, &e).unwrap().valid);
            assert!(is_well_begun(&e, 2));
            assert!(e.dimension() as f64 <= forest_bound(n), "n = {n}");
            checked += 1;
        });
    }
    // (n + 1)^(n - 1) labeled forests on n vertices
    assert_eq!(checked, (1..=7u32).map(|n| (n + 1).pow(n - 1)).sum::<u32>());
}

#[test]
fn spiders_stars_and_paths_stay_within_bound() {
    for n in 1..400 {
        for t in [Graph::path(n), Graph::star(n - 1), Graph::empty(n)] {
            let e = encode_forest(&t).unwrap();
            assert!(verify_encoding(&t, &e).unwrap().valid);
            assert!(e.dimension() as f64 <= forest_bound(t.order()));
        }
    }
    for legs in 1..25u32 {
        for len in 1..25u32 {
            let mut edges = Vec::new();
            let mut next = 1;
            for _ in 0..legs {
                let mut prev = 0;
                for _ in 0..len {
                    edges.push((prev, next));
                    prev = next;
                    next += 1;
                }
            }
            let t = Graph::new(next as usize, edges).unwrap();
            let e = encode_forest(&t).unwrap();
            assert!(verify_encoding(&t, &e).unwrap().valid);
            assert!(e.dimension() as f64 <= forest_bound(t.order()));
        }
    }
}

#[test]
fn split_parts_respect_limits_on_large_forests() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for n in [500, 2000, 5000] {
        let t = random_forest(n, &mut rng);
        let s = find_split_vertex(&t, 0.118).unwrap();
        let limit = part_limit(s.kind, n, 0.118);
        assert!(s.parts.iter().all(|p| p.len() as f64 <= limit));
        let expected = if s.kind == SplitKind::Two { 2 } else { 3 };
        assert_eq!(s.parts.len(), expected);
    }
}
