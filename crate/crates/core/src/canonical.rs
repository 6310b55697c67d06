//! Exact canonical labeling of small quivers with summand vectors.
//!
//! Vertices are coloured by their summand value and degrees, colours are
//! refined by neighbourhood multisets until stable, and the remaining ties
//! are resolved by an individualise-and-refine search that keeps the
//! lexicographically least adjacency encoding. Vertex and arrow ids play no
//! part, so renamed copies of a quiver share a hash.

use sha2::{Digest, Sha256};

use crate::quiver::{Quiver, SummandVector};

struct Graph {
    n: usize,
    mult: Vec<Vec<u32>>,
    d: Vec<u32>,
}

/// Hex SHA-256 digest of the canonical encoding of `(quiver, d)`.
pub fn canonical_hash(quiver: &Quiver, d: &SummandVector) -> String {
    let encoding = canonical_encoding(quiver, d);
    let mut hasher = Sha256::new();
    for x in encoding {
        hasher.update(x.to_le_bytes());
    }
    hex::encode(hasher.finalize())
}

/// The least encoding `[n, d(ordered)..., multiplicity matrix(ordered)...]`
/// over all vertex orders reachable by the refinement search.
pub fn canonical_encoding(quiver: &Quiver, d: &SummandVector) -> Vec<u64> {
    let g = Graph {
        n: quiver.vertex_count(),
        mult: quiver.arrow_multiplicities(),
        d: d.values().to_vec(),
    };
    let initial: Vec<u64> = (0..g.n)
        .map(|v| {
            let out: u32 = g.mult[v].iter().sum();
            let inc: u32 = g.mult.iter().map(|row| row[v]).sum();
            (u64::from(g.d[v]) << 40) | (u64::from(out) << 20) | u64::from(inc)
        })
        .collect();
    let colours = refine(&g, &rank(&initial));
    let mut best = None;
    search(&g, colours, &mut best);
    best.unwrap_or_else(|| vec![0])
}

/// Dense ranks of the values, preserving order.
fn rank<T: Ord + Clone>(values: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = values.to_vec();
    sorted.sort();
    sorted.dedup();
    values
        .iter()
        .map(|v| sorted.binary_search(v).expect("value is present"))
        .collect()
}

fn class_count(colours: &[usize]) -> usize {
    let mut c = colours.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Colour of a vertex with its coloured out- and in-neighbourhoods.
type Signature = (usize, Vec<(usize, u32)>, Vec<(usize, u32)>);

fn refine(g: &Graph, colours: &[usize]) -> Vec<usize> {
    let mut current = colours.to_vec();
    loop {
        let signatures: Vec<Signature> = (0..g.n)
            .map(|v| {
                let mut out: Vec<(usize, u32)> =
                    (0..g.n).filter(|&w| g.mult[v][w] > 0).map(|w| (current[w], g.mult[v][w])).collect();
                let mut inc: Vec<(usize, u32)> =
                    (0..g.n).filter(|&u| g.mult[u][v] > 0).map(|u| (current[u], g.mult[u][v])).collect();
                out.sort_unstable();
                inc.sort_unstable();
                (current[v], out, inc)
            })
            .collect();
        let next = rank(&signatures);
        if class_count(&next) == class_count(&current) {
            return next;
        }
        current = next;
    }
}

fn search(g: &Graph, colours: Vec<usize>, best: &mut Option<Vec<u64>>) {
    let cells = class_count(&colours);
    if cells == g.n {
        let enc = encode(g, &colours);
        if best.as_ref().is_none_or(|b| enc < *b) {
            *best = Some(enc);
        }
        return;
    }
    // first colour shared by more than one vertex
    let mut counts = vec![0usize; g.n];
    for &c in &colours {
        counts[c] += 1;
    }
    let target = (0..g.n).find(|&c| counts[c] > 1).expect("a non-singleton cell exists");
    for v in (0..g.n).filter(|&v| colours[v] == target) {
        let split: Vec<usize> = (0..g.n)
            .map(|w| 2 * colours[w] + usize::from(colours[w] == target && w != v))
            .collect();
        search(g, refine(g, &rank(&split)), best);
    }
}

fn encode(g: &Graph, colours: &[usize]) -> Vec<u64> {
    // colours are a permutation here: vertex v goes to position colours[v]
    let mut order = vec![0usize; g.n];
    for (v, &c) in colours.iter().enumerate() {
        order[c] = v;
    }
    let mut enc = Vec::with_capacity(1 + g.n + g.n * g.n);
    enc.push(g.n as u64);
    enc.extend(order.iter().map(|&v| u64::from(g.d[v])));
    for &u in &order {
        enc.extend(order.iter().map(|&v| u64::from(g.mult[u][v])));
    }
    enc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2(names: [&str; 2]) -> Quiver {
        Quiver::from_edges(&names, &[(names[0], names[1])]).unwrap()
    }

    #[test]
    fn renaming_invariant() {
        let d = SummandVector::ones(2);
        assert_eq!(canonical_hash(&a2(["1", "2"]), &d), canonical_hash(&a2(["a", "b"]), &d));
    }

    #[test]
    fn summands_are_coloured() {
        let q = a2(["1", "2"]);
        assert_ne!(
            canonical_hash(&q, &SummandVector::new(vec![1, 1])),
            canonical_hash(&q, &SummandVector::new(vec![2, 1]))
        );
    }

    #[test]
    fn orientation_matters() {
        let q = a2(["1", "2"]);
        let d = SummandVector::new(vec![2, 1]);
        assert_ne!(canonical_hash(&q, &d), canonical_hash(&q.opposite(), &d));
    }

    #[test]
    fn vertex_order_invariant_with_symmetry() {
        // out-star with three leaves, listed in two different orders
        let s1 = Quiver::from_edges(&["c", "x", "y", "z"], &[("c", "x"), ("c", "y"), ("c", "z")]).unwrap();
        let s2 = Quiver::from_edges(&["z", "y", "c", "x"], &[("c", "y"), ("c", "x"), ("c", "z")]).unwrap();
        assert_eq!(
            canonical_hash(&s1, &SummandVector::new(vec![1, 2, 1, 1])),
            canonical_hash(&s2, &SummandVector::new(vec![1, 1, 1, 2]))
        );
    }

    #[test]
    fn regular_structures_are_distinguished() {
        // 1->2->3 and 1->3 (with 2 isolated) have equal degree profiles
        // only after d is taken into account; check both are told apart.
        let path = Quiver::from_edges(&["1", "2", "3"], &[("1", "2"), ("2", "3")]).unwrap();
        let split = Quiver::from_edges(&["1", "2", "3", "4"], &[("1", "2"), ("3", "4")]).unwrap();
        let path4 = Quiver::from_edges(&["1", "2", "3", "4"], &[("1", "2"), ("3", "2"), ("3", "4")]).unwrap();
        let ones3 = SummandVector::ones(3);
        let ones4 = SummandVector::ones(4);
        assert_ne!(canonical_hash(&path, &ones3), canonical_hash(&split, &ones4));
        assert_ne!(canonical_hash(&split, &ones4), canonical_hash(&path4, &ones4));
    }
}
