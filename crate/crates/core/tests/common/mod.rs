#![allow(dead_code)]

use proptest::prelude::*;
use radcount::{Quiver, SummandVector};

/// Acyclic quiver on `v0..v{n-1}` with `mult[k]` arrows for the k-th pair
/// `i < j`, oriented along the hidden vertex order `order` so the result is
/// acyclic while the listed order is not topological.
pub fn build(n: usize, mult: &[u32], order: &[usize]) -> Quiver {
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut edges = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            let (s, t) = if order[i] < order[j] { (i, j) } else { (j, i) };
            for _ in 0..mult[k] {
                edges.push((refs[s], refs[t]));
            }
            k += 1;
        }
    }
    Quiver::from_edges(&refs, &edges).unwrap()
}

/// Random acyclic quivers with at most `max_n` vertices, arrow multiplicity
/// at most `max_mult` and summands in `0..=max_d`.
pub fn instance(max_n: usize, max_mult: u32, max_d: u32) -> impl Strategy<Value = (Quiver, SummandVector)> {
    (1..=max_n)
        .prop_flat_map(move |n| {
            let pairs = n * (n - 1) / 2;
            (
                Just(n),
                prop::collection::vec(0..=max_mult, pairs),
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
                prop::collection::vec(0..=max_d, n),
            )
        })
        .prop_map(|(n, mult, order, d)| (build(n, &mult, &order), SummandVector::new(d)))
}

/// Same quiver with vertices listed in the order `perm` (new position k holds
/// old vertex `perm[k]`).
pub fn permuted(q: &Quiver, d: &SummandVector, perm: &[usize]) -> (Quiver, SummandVector) {
    let names: Vec<&str> = perm.iter().map(|&v| q.vertex_id(v)).collect();
    let edges: Vec<(&str, &str)> = q
        .arrows()
        .iter()
        .rev()
        .map(|a| (q.vertex_id(a.source), q.vertex_id(a.target)))
        .collect();
    let d = SummandVector::new(perm.iter().map(|&v| d.get(v)).collect());
    (Quiver::from_edges(&names, &edges).unwrap(), d)
}

/// Every path as its arrow list, by depth-first search from each vertex.
pub fn all_paths(q: &Quiver) -> Vec<(usize, usize, Vec<usize>)> {
    fn walk(q: &Quiver, start: usize, at: usize, path: &mut Vec<usize>, out: &mut Vec<(usize, usize, Vec<usize>)>) {
        out.push((start, at, path.clone()));
        for a in q.arrows().iter().enumerate().filter(|(_, a)| a.source == at).map(|(k, _)| k) {
            path.push(a);
            walk(q, start, q.arrows()[a].target, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    for v in 0..q.vertex_count() {
        walk(q, v, v, &mut Vec::new(), &mut out);
    }
    out
}
