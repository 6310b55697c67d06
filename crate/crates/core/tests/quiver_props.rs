mod common;

use common::{all_paths, instance, permuted};
use proptest::prelude::*;
use radcount::quiver::quiver_to_string;
use radcount::{canonical_hash, parse_quiver, Quiver, SummandVector};

fn dfs_counts(q: &Quiver, min_len: usize) -> Vec<Vec<u128>> {
    let n = q.vertex_count();
    let mut c = vec![vec![0u128; n]; n];
    for (s, t, p) in all_paths(q) {
        if p.len() >= min_len {
            c[s][t] += 1;
        }
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn path_counts_match_enumeration((q, _) in instance(5, 2, 0)) {
        prop_assert_eq!(q.path_counts(1), dfs_counts(&q, 1));
        prop_assert_eq!(q.path_counts(0), dfs_counts(&q, 0));
    }

    #[test]
    fn opposite_transposes_path_counts((q, _) in instance(5, 2, 0)) {
        let c = q.path_counts(1);
        let o = q.opposite().path_counts(1);
        for (u, row) in c.iter().enumerate() {
            for (v, &n) in row.iter().enumerate() {
                prop_assert_eq!(n, o[v][u]);
            }
        }
        prop_assert_eq!(q.opposite().opposite().path_counts(1), c);
    }

    #[test]
    fn weighted_count_is_radical_dimension((q, d) in instance(4, 2, 3)) {
        let c = dfs_counts(&q, 1);
        let mut want = 0u128;
        for (u, row) in c.iter().enumerate() {
            for (v, &n) in row.iter().enumerate() {
                want += u128::from(d.get(u)) * u128::from(d.get(v)) * n;
            }
        }
        prop_assert_eq!(q.weighted_path_count(&d, false), want);
        let squares: u128 = d.values().iter().map(|&x| u128::from(x) * u128::from(x)).sum();
        prop_assert_eq!(q.weighted_path_count(&d, true), want + squares);
    }

    #[test]
    fn topological_order_respects_arrows((q, _) in instance(6, 1, 0)) {
        let order = q.topological_order();
        let mut pos = vec![0; q.vertex_count()];
        for (k, &v) in order.iter().enumerate() {
            pos[v] = k;
        }
        for a in q.arrows() {
            prop_assert!(pos[a.source] < pos[a.target]);
        }
    }

    #[test]
    fn components_partition_vertices((q, d) in instance(6, 1, 2)) {
        let sets = q.component_vertex_sets();
        let mut comp = vec![usize::MAX; q.vertex_count()];
        for (k, s) in sets.iter().enumerate() {
            for &v in s {
                prop_assert_eq!(comp[v], usize::MAX);
                comp[v] = k;
            }
        }
        prop_assert!(comp.iter().all(|&c| c != usize::MAX));
        for a in q.arrows() {
            prop_assert_eq!(comp[a.source], comp[a.target]);
        }
        let parts = q.connected_components(&d);
        prop_assert_eq!(parts.len(), sets.len());
        prop_assert!(parts.iter().all(|(p, _)| p.is_connected()));
        prop_assert_eq!(parts.iter().map(|(p, _)| p.arrow_count()).sum::<usize>(), q.arrow_count());
    }

    #[test]
    fn json_round_trip((q, d) in instance(5, 2, 3)) {
        let (r, rd) = parse_quiver(&quiver_to_string(&q, &d)).unwrap();
        prop_assert_eq!(r.vertices(), q.vertices());
        prop_assert_eq!(&rd, &d);
        prop_assert_eq!(r.arrow_multiplicities(), q.arrow_multiplicities());
    }

    #[test]
    fn canonical_hash_ignores_vertex_order(
        (q, d, perm) in instance(5, 2, 2).prop_flat_map(|(q, d)| {
            let n = q.vertex_count();
            (Just(q), Just(d), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        })
    ) {
        let (p, pd) = permuted(&q, &d, &perm);
        prop_assert_eq!(canonical_hash(&q, &d), canonical_hash(&p, &pd));
    }
}

#[test]
fn canonical_hash_separates_orientations() {
    let line = Quiver::from_edges(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
    let sink = Quiver::from_edges(&["a", "b", "c"], &[("a", "b"), ("c", "b")]).unwrap();
    let source = Quiver::from_edges(&["a", "b", "c"], &[("b", "a"), ("b", "c")]).unwrap();
    let ones = SummandVector::ones(3);
    let hashes = [canonical_hash(&line, &ones), canonical_hash(&sink, &ones), canonical_hash(&source, &ones)];
    assert_ne!(hashes[0], hashes[1]);
    assert_ne!(hashes[1], hashes[2]);
    assert_ne!(hashes[0], hashes[2]);
    assert_ne!(
        canonical_hash(&line, &SummandVector::new(vec![1, 2, 1])),
        canonical_hash(&line, &SummandVector::new(vec![2, 1, 1]))
    );
}

#[test]
fn rejects_bad_input() {
    assert!(parse_quiver(r#"{"vertices":["1","2"],"arrows":[["1","2"],["2","1"]],"d":{"1":1,"2":1}}"#).is_err());
    assert!(parse_quiver(r#"{"vertices":["1","1"],"arrows":[],"d":{"1":1}}"#).is_err());
    assert!(parse_quiver(r#"{"vertices":["1"],"arrows":[["1","9"]],"d":{"1":1}}"#).is_err());
    assert!(parse_quiver(r#"{"vertices":["1"],"arrows":[],"d":{"1":-1}}"#).is_err());
    assert!(parse_quiver(r#"{"vertices":["1"],"arrows":[],"d":{"2":1}}"#).is_err());
    assert!(parse_quiver(r#"{"vertices":["1"],"arrows":[["1","1"]],"d":{"1":1}}"#).is_err());
}
